//! The Hecke algebra over `Z[u, u^-1]` in the basis `T_w`, with
//! `(T_s + 1)(T_s - u^2) = 0`.

use std::collections::HashMap;

use thiserror::Error;

use crate::coxeter::{ElemId, GroupTable};
use crate::laurent::{LaurentInt, PolyMatrix};
use crate::lincomb::LinComb;

pub type HeckeElt = LinComb;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("product leaves the enumerated ball (bound {bound:?})")]
    BallExceeded { bound: Option<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Arithmetic in the Hecke algebra of the group enumerated by `table`.
#[derive(Debug, Clone, Copy)]
pub struct Hecke<'a> {
    table: &'a GroupTable,
}

fn u2() -> LaurentInt {
    LaurentInt::u_pow(2)
}

fn u2_minus_1() -> LaurentInt {
    LaurentInt::from_terms([(2, 1), (0, -1)])
}

impl<'a> Hecke<'a> {
    pub fn new(table: &'a GroupTable) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &'a GroupTable {
        self.table
    }

    fn exceeded(&self) -> HeckeError {
        HeckeError::BallExceeded {
            bound: self.table.bound(),
        }
    }

    /// `T_w` for the element spelled by a 0-based word.
    pub fn t_word(&self, word: &[u8]) -> Result<HeckeElt, HeckeError> {
        let w = self.table.eval_word(word).ok_or_else(|| self.exceeded())?;
        Ok(HeckeElt::basis(w))
    }

    /// `T_s h` (left) or `h T_s` (right).
    pub fn mul_gen(&self, side: Side, s: usize, h: &HeckeElt) -> Result<HeckeElt, HeckeError> {
        let (u2, u2m1) = (u2(), u2_minus_1());
        let mut out = HeckeElt::zero();
        for (&w, c) in h {
            let (sw, down) = match side {
                Side::Left => (self.table.left_mul(s, w), self.table.has_left_descent(s, w)),
                Side::Right => (self.table.right_mul(w, s), self.table.has_right_descent(w, s)),
            };
            let sw = sw.ok_or_else(|| self.exceeded())?;
            if down {
                out.add_term(sw, c * &u2);
                out.add_term(w, c * &u2m1);
            } else {
                out.add_term(sw, c.clone());
            }
        }
        Ok(out)
    }

    /// `h T_y`, reusing products for shortlex prefixes of `y` from `memo`.
    fn right_by(
        &self,
        memo: &mut HashMap<ElemId, HeckeElt>,
        y: ElemId,
    ) -> Result<HeckeElt, HeckeError> {
        if let Some(v) = memo.get(&y) {
            return Ok(v.clone());
        }
        let word = self.table.word(y);
        // Find the longest prefix already in the memo, then extend.
        let mut k = word.len();
        let mut prefix = y;
        while !memo.contains_key(&prefix) {
            k -= 1;
            prefix = self
                .table
                .right_mul(prefix, word[k] as usize)
                .expect("prefix of a reduced word is shorter");
        }
        let mut cur = memo[&prefix].clone();
        let mut at = prefix;
        for &g in &word[k..] {
            cur = self.mul_gen(Side::Right, g as usize, &cur)?;
            at = self.table.right_mul(at, g as usize).expect("inside the ball");
            memo.insert(at, cur.clone());
        }
        Ok(cur)
    }

    pub fn mul(&self, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt, HeckeError> {
        let mut memo = HashMap::from([(self.table.identity(), a.clone())]);
        let mut out = HeckeElt::zero();
        for (&y, c) in b {
            let p = self.right_by(&mut memo, y)?;
            out.add_scaled(&p, c);
        }
        Ok(out)
    }

    /// `T_x T_y`.
    pub fn mul_basis(&self, x: ElemId, y: ElemId) -> Result<HeckeElt, HeckeError> {
        let mut cur = HeckeElt::basis(x);
        for &g in self.table.word(y) {
            cur = self.mul_gen(Side::Right, g as usize, &cur)?;
        }
        Ok(cur)
    }

    /// Coefficient of `T_1`.
    pub fn tau(&self, h: &HeckeElt) -> LaurentInt {
        h.coeff(self.table.identity())
    }

    /// The antiautomorphism `T_x -> T_{x^-1}`.
    pub fn antiauto(&self, h: &HeckeElt) -> HeckeElt {
        h.map_keys(|w| self.table.inverse(w))
    }

    /// `X = sum over x* = x of u^{-l(x)} T_x`, truncated to the table.
    pub fn build_x(&self) -> HeckeElt {
        let t = self.table;
        t.ids()
            .filter(|&x| t.star(x) == x)
            .map(|x| (x, LaurentInt::u_pow(-(t.length(x) as i32))))
            .collect()
    }

    /// Matrix of `a -> h a` in the `T`-basis; column `j` is `h T_{w_j}`.
    pub fn left_mult_matrix(&self, h: &HeckeElt) -> Result<PolyMatrix, HeckeError> {
        let n = self.table.len();
        let mut m = PolyMatrix::zeros(n, n);
        for w in self.table.ids() {
            let col = self.mul(h, &HeckeElt::basis(w))?;
            for (&r, c) in &col {
                m.set(r.index(), w.index(), c.clone());
            }
        }
        Ok(m)
    }

    /// Rank over `Q(u)` of left multiplication by `h`; needs a complete table.
    pub fn left_mult_rank(&self, h: &HeckeElt) -> Result<usize, HeckeError> {
        if !self.table.is_complete() {
            return Err(self.exceeded());
        }
        Ok(self.left_mult_matrix(h)?.rank())
    }

    /// `T_s^-1 = u^-2 T_s + (u^-2 - 1)`.
    pub fn inverse_gen(&self, s: usize) -> HeckeElt {
        let t = self.table;
        HeckeElt::from_terms([
            (t.generator(s), LaurentInt::u_pow(-2)),
            (t.identity(), LaurentInt::from_terms([(-2, 1), (0, -1)])),
        ])
    }

    /// `bar(T_w) = T_{w^-1}^-1`, built from the first letter of `w`.
    fn bar_basis(
        &self,
        memo: &mut HashMap<ElemId, HeckeElt>,
        w: ElemId,
    ) -> Result<HeckeElt, HeckeError> {
        if let Some(v) = memo.get(&w) {
            return Ok(v.clone());
        }
        let t = self.table;
        let mut chain = vec![w];
        let mut cur = w;
        while !memo.contains_key(&cur) {
            if cur == t.identity() {
                memo.insert(cur, HeckeElt::basis(cur));
                break;
            }
            let s = t.word(cur)[0] as usize;
            cur = t.left_mul(s, cur).expect("left descent stays in the ball");
            chain.push(cur);
        }
        // chain: w, s1 w, ..., ending at a memoized element.
        for pair in chain.windows(2).rev() {
            let (big, small) = (pair[0], pair[1]);
            if memo.contains_key(&big) {
                continue;
            }
            let s = t.word(big)[0] as usize;
            let prev = &memo[&small];
            // bar(T_s T_small) = T_s^-1 bar(T_small)
            let mut v = self.mul_gen(Side::Left, s, prev)?.shift(-2);
            v.add_scaled(prev, &LaurentInt::from_terms([(-2, 1), (0, -1)]));
            memo.insert(big, v);
        }
        Ok(memo[&w].clone())
    }

    /// The involution with `bar(u) = u^-1` and `bar(T_w) = T_{w^-1}^-1`.
    pub fn bar_hecke(&self, h: &HeckeElt) -> Result<HeckeElt, HeckeError> {
        let mut memo = HashMap::new();
        self.bar_hecke_memo(&mut memo, h)
    }

    /// [`Hecke::bar_hecke`] with a caller-owned cache of `bar(T_w)`.
    pub fn bar_hecke_memo(
        &self,
        memo: &mut HashMap<ElemId, HeckeElt>,
        h: &HeckeElt,
    ) -> Result<HeckeElt, HeckeError> {
        let mut out = HeckeElt::zero();
        for (&w, c) in h {
            let b = self.bar_basis(memo, w)?;
            out.add_scaled(&b, &c.invert_variable());
        }
        Ok(out)
    }

    /// Rewrites `sum c_w T_w` as coefficients on `T~_w = u^{-l(w)} T_w`.
    pub fn to_tilde(&self, h: &HeckeElt) -> HeckeElt {
        h.map_coeffs_with_key(|w, c| c.shift(self.table.length(w) as i32))
    }

    /// Inverse of [`Hecke::to_tilde`].
    pub fn from_tilde(&self, h: &HeckeElt) -> HeckeElt {
        h.map_coeffs_with_key(|w, c| c.shift(-(self.table.length(w) as i32)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterSystem;

    fn p(s: &str) -> LaurentInt {
        s.parse().unwrap()
    }

    fn table(t: &str) -> GroupTable {
        CoxeterSystem::from_type(t).unwrap().enumerate(None).unwrap()
    }

    #[test]
    fn quadratic_relation() {
        let t = table("A1");
        let h = Hecke::new(&t);
        let s = t.generator(0);
        let ts = HeckeElt::basis(s);
        assert_eq!(h.mul_gen(Side::Left, 0, &HeckeElt::basis(t.identity())).unwrap(), ts);
        let sq = h.mul(&ts, &ts).unwrap();
        assert_eq!(
            sq,
            HeckeElt::from_terms([(t.identity(), p("u^2")), (s, p("u^2 - 1"))])
        );
        let ts_plus_1 = &ts + &HeckeElt::basis(t.identity());
        assert_eq!(
            h.mul_gen(Side::Left, 0, &ts_plus_1).unwrap(),
            ts_plus_1.scale(&p("u^2"))
        );
    }

    #[test]
    fn a2_products() {
        let t = table("A2");
        let h = Hecke::new(&t);
        let ts = h.t_word(&[0]).unwrap();
        let tt = h.t_word(&[1]).unwrap();
        assert_eq!(h.mul(&ts, &tt).unwrap(), h.t_word(&[0, 1]).unwrap());
        let left = h.mul(&h.mul(&ts, &tt).unwrap(), &ts).unwrap();
        let right = h.mul(&ts, &h.mul(&tt, &ts).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(left, h.t_word(&[0, 1, 0]).unwrap());
        let w0 = h.t_word(&[0, 1, 0]).unwrap();
        let mut chain = w0.clone();
        for g in [0, 1, 0] {
            chain = h.mul_gen(Side::Right, g, &chain).unwrap();
        }
        assert_eq!(h.mul(&w0, &w0).unwrap(), chain);
    }

    #[test]
    fn tau_values() {
        let t = table("A2");
        let h = Hecke::new(&t);
        assert_eq!(h.tau(&HeckeElt::basis(t.identity())), LaurentInt::one());
        let ts = h.t_word(&[0]).unwrap();
        let tt = h.t_word(&[1]).unwrap();
        assert_eq!(h.tau(&h.mul(&ts, &ts).unwrap()), p("u^2"));
        assert_eq!(h.tau(&h.mul(&ts, &tt).unwrap()), LaurentInt::zero());
    }

    #[test]
    fn antiautomorphism() {
        let t = table("A2");
        let h = Hecke::new(&t);
        let st = h.t_word(&[0, 1]).unwrap();
        assert_eq!(h.antiauto(&st), h.t_word(&[1, 0]).unwrap());
        for x in t.ids() {
            for y in t.ids() {
                let (a, b) = (HeckeElt::basis(x), HeckeElt::basis(y));
                let lhs = h.antiauto(&h.mul(&a, &b).unwrap());
                let rhs = h.mul(&h.antiauto(&b), &h.antiauto(&a)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn element_x() {
        let t = table("A1");
        let h = Hecke::new(&t);
        assert_eq!(
            h.build_x(),
            HeckeElt::from_terms([(t.identity(), p("1")), (t.generator(0), p("u^-1"))])
        );
        let t = table("A2");
        let x = Hecke::new(&t).build_x();
        assert_eq!(x.len(), 6);
        assert_eq!(x.coeff(t.longest().unwrap()), p("u^-3"));
        let flip = CoxeterSystem::from_type("A2")
            .unwrap()
            .with_star(vec![1, 0])
            .unwrap()
            .enumerate(None)
            .unwrap();
        let x = Hecke::new(&flip).build_x();
        let expect: Vec<ElemId> = flip.ids().filter(|&w| flip.star(w) == w).collect();
        assert_eq!(x.support().collect::<Vec<_>>(), expect);
        assert_eq!(expect.len(), 2);
    }

    #[test]
    fn left_mult_ranks() {
        let t = table("A2");
        let h = Hecke::new(&t);
        assert_eq!(h.left_mult_rank(&HeckeElt::basis(t.identity())).unwrap(), 6);
        assert_eq!(h.left_mult_rank(&h.build_x()).unwrap(), 4);
        let t = table("A3");
        let h = Hecke::new(&t);
        assert_eq!(h.left_mult_rank(&h.build_x()).unwrap(), 10);
    }

    #[test]
    fn bar_involution() {
        let t = table("A2");
        let h = Hecke::new(&t);
        let s = t.generator(0);
        let ts_tilde = HeckeElt::term(s, p("u^-1"));
        let expect = HeckeElt::from_terms([(s, p("u^-1")), (t.identity(), p("u^-1 - u"))]);
        assert_eq!(h.bar_hecke(&ts_tilde).unwrap(), expect);
        assert_eq!(
            h.bar_hecke(&HeckeElt::basis(t.identity())).unwrap(),
            HeckeElt::basis(t.identity())
        );
        for w in t.ids() {
            let tw = HeckeElt::term(w, LaurentInt::u_pow(-(t.length(w) as i32)));
            let twice = h.bar_hecke(&h.bar_hecke(&tw).unwrap()).unwrap();
            assert_eq!(twice, tw);
        }
        // bar is multiplicative.
        let a = h.t_word(&[0, 1]).unwrap();
        let b = h.t_word(&[1]).unwrap();
        let lhs = h.bar_hecke(&h.mul(&a, &b).unwrap()).unwrap();
        let rhs = h
            .mul(&h.bar_hecke(&a).unwrap(), &h.bar_hecke(&b).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ball_exceeded_is_an_error() {
        let t = CoxeterSystem::from_type("A1~")
            .unwrap()
            .enumerate(Some(2))
            .unwrap();
        let h = Hecke::new(&t);
        let a = h.t_word(&[0, 1]).unwrap();
        assert!(matches!(
            h.mul(&a, &h.t_word(&[0]).unwrap()),
            Err(HeckeError::BallExceeded { .. })
        ));
        assert!(h.mul(&a, &h.t_word(&[1]).unwrap()).is_ok());
    }
}
