use serde::Serialize;

use super::{CoeffTable, IModElt, InvModule};
use crate::coxeter::{CoxeterMatrix, ElemId};
use crate::laurent::LaurentInt;

/// Which family of coefficients a recursion is checked on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Form {
    /// `L^x_z` themselves.
    L,
    /// `bar(L^x_z)`, with `bar(u^n) = (-u)^-n`.
    Bar,
    /// `tilde L^x_z`; these identities are the admissibility equations of `mu`.
    Tilde,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub form: Form,
    /// 1..=8: (`sz = zs*`, up), (`=`, down), (`!=`, up), (`!=`, down) for
    /// `sx < x`, then the same four for `sx > x`.
    pub case: u8,
    pub x: String,
    pub z: String,
    pub s: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RecursionReport {
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl RecursionReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LambdaReport {
    pub checked: usize,
    pub symmetry_violations: Vec<(String, String)>,
    /// Nonzero entries that fail the symmetry with exponent
    /// `l(x) + (l(z) - phi(z))/2` instead.
    pub plus_reading_failures: usize,
    pub recursion_violations: Vec<(String, String, usize)>,
}

impl LambdaReport {
    pub fn is_ok(&self) -> bool {
        self.symmetry_violations.is_empty() && self.recursion_violations.is_empty()
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SignReport {
    pub checked: usize,
    pub violations: Vec<(String, usize)>,
}

impl SignReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn p(terms: &[(i32, i64)]) -> LaurentInt {
    LaurentInt::from_terms(terms.iter().copied())
}

fn case_index(commuting: bool, up: bool, sx_down: bool) -> u8 {
    let base = match (commuting, up) {
        (true, true) => 1,
        (true, false) => 2,
        (false, true) => 3,
        (false, false) => 4,
    };
    if sx_down {
        base
    } else {
        base + 4
    }
}

/// `(A, B, C)` with `A F^x_{z'} + B F^x_z = C F^{sx}_z`, where `z'` is `sz`
/// or `szs*`.
fn coefficients(form: Form, case: u8) -> (LaurentInt, LaurentInt, LaurentInt) {
    let one = || p(&[(0, 1)]);
    let u = || p(&[(1, 1)]);
    let u2 = || p(&[(2, 1)]);
    let zero = LaurentInt::zero;
    match (form, case) {
        (Form::L, 1) => (p(&[(2, 1), (1, -1)]), p(&[(2, -1), (1, 1), (0, 1)]), u2()),
        (Form::L, 2) => (p(&[(1, 1), (0, 1)]), p(&[(1, -1)]), u2()),
        (Form::L, 3) => (u2(), p(&[(2, -1), (0, 1)]), u2()),
        (Form::L, 4) => (one(), zero(), u2()),
        (Form::L, 5) => (p(&[(2, 1), (1, -1)]), u(), one()),
        (Form::L, 6) => (p(&[(1, 1), (0, 1)]), p(&[(2, 1), (1, -1), (0, -1)]), one()),
        (Form::L, 7) => (u2(), zero(), one()),
        (Form::L, 8) => (one(), p(&[(2, 1), (0, -1)]), one()),

        (Form::Bar, 1) => (p(&[(1, 1), (0, 1)]), p(&[(2, 1), (1, -1), (0, -1)]), one()),
        (Form::Bar, 2) => (p(&[(2, 1), (1, -1)]), u(), one()),
        (Form::Bar, 3) => (one(), p(&[(2, 1), (0, -1)]), one()),
        (Form::Bar, 4) => (u2(), zero(), one()),
        (Form::Bar, 5) => (p(&[(1, 1), (0, 1)]), p(&[(1, -1)]), u2()),
        (Form::Bar, 6) => (p(&[(2, 1), (1, -1)]), p(&[(2, -1), (1, 1), (0, 1)]), u2()),
        (Form::Bar, 7) => (one(), zero(), u2()),
        (Form::Bar, 8) => (u2(), p(&[(2, -1), (0, 1)]), u2()),

        (Form::Tilde, 1) => (p(&[(1, 1), (0, 1)]), p(&[(2, -1), (1, 1), (0, 1)]), one()),
        (Form::Tilde, 2) => (p(&[(2, 1), (1, -1)]), p(&[(1, -1)]), one()),
        (Form::Tilde, 3) => (one(), p(&[(2, -1), (0, 1)]), one()),
        (Form::Tilde, 4) => (u2(), zero(), one()),
        (Form::Tilde, 5) => (p(&[(1, 1), (0, 1)]), u(), u2()),
        (Form::Tilde, 6) => (p(&[(2, 1), (1, -1)]), p(&[(2, 1), (1, -1), (0, -1)]), u2()),
        (Form::Tilde, 7) => (one(), zero(), u2()),
        (Form::Tilde, 8) => (u2(), p(&[(2, 1), (0, -1)]), u2()),
        _ => unreachable!("cases are 1..=8"),
    }
}

impl InvModule<'_> {
    /// Checks the eight identities relating `F^x_*` and `F^{sx}_*` in the
    /// `L`, `bar L` and `tilde L` forms, over every `(x, z, s)` whose terms
    /// all lie inside the tables.
    pub fn validate_recursions(&self, lt: &CoeffTable, tl: &CoeffTable) -> RecursionReport {
        let t = self.table;
        let mut report = RecursionReport::default();
        for form in [Form::L, Form::Bar, Form::Tilde] {
            let get = |x: ElemId, z: ElemId| match form {
                Form::L => lt.get(x, z),
                Form::Bar => lt.get(x, z).bar(),
                Form::Tilde => tl.get(x, z),
            };
            for x in lt.xs() {
                for s in 0..t.rank() {
                    let Some(sx) = t.left_mul(s, x).filter(|&y| lt.covers(y)) else {
                        report.skipped += self.twisted.len();
                        continue;
                    };
                    let sx_down = t.has_left_descent(s, x);
                    for &z in &self.twisted {
                        let Some(st) = self.step(s, z) else {
                            report.skipped += 1;
                            continue;
                        };
                        let case = case_index(st.commuting, st.up, sx_down);
                        let (a, b, c) = coefficients(form, case);
                        let lhs = &(&a * &get(x, st.target)) + &(&b * &get(x, z));
                        let rhs = &c * &get(sx, z);
                        report.checked += 1;
                        if lhs != rhs {
                            report.violations.push(Violation {
                                form,
                                case,
                                x: t.format(x),
                                z: t.format(z),
                                s,
                            });
                        }
                    }
                }
            }
        }
        report
    }

    /// Bar-symmetry `bar(lambda) = (-u^2)^{l(x) - (l(z) - phi(z))/2} lambda`
    /// and the four recursions expressing `lambda^x_*` through `lambda^{sx}_*`
    /// for `sx < x`.
    pub fn check_lambda(&self, lam: &CoeffTable) -> LambdaReport {
        let t = self.table;
        let mut report = LambdaReport::default();
        for x in lam.xs() {
            for &z in &self.twisted {
                let v = lam.get(x, z);
                let half = (t.length(z) as i32 - self.phi(z) as i32) / 2;
                let symmetric = |e: i32| {
                    let rhs = v.shift(2 * e);
                    v.bar() == if e % 2 == 0 { rhs } else { -rhs }
                };
                report.checked += 1;
                if !symmetric(t.length(x) as i32 - half) {
                    report.symmetry_violations.push((t.format(x), t.format(z)));
                }
                if !v.is_zero() && !symmetric(t.length(x) as i32 + half) {
                    report.plus_reading_failures += 1;
                }
            }
        }
        let u_inv = p(&[(-1, 1)]);
        let u_inv2 = p(&[(-2, 1)]);
        let one_minus = p(&[(0, 1), (-2, -1)]);
        for x in lam.xs() {
            for s in 0..t.rank() {
                if !t.has_left_descent(s, x) {
                    continue;
                }
                let sx = t.left_mul(s, x).expect("descent");
                for &z in &self.twisted {
                    let Some(st) = self.step(s, z) else { continue };
                    let zt = st.target;
                    let expect = match (st.commuting, st.up) {
                        (true, false) => &lam.get(x, zt) - &(&u_inv * &lam.get(sx, z)),
                        (true, true) => {
                            &(&u_inv * &lam.get(sx, z)) + &(&one_minus * &lam.get(sx, zt))
                        }
                        (false, true) => &u_inv2 * &lam.get(sx, zt),
                        (false, false) => &lam.get(sx, zt) + &(&one_minus * &lam.get(sx, z)),
                    };
                    report.checked += 1;
                    if lam.get(x, z) != expect {
                        report
                            .recursion_violations
                            .push((t.format(x), t.format(z), s));
                    }
                }
            }
        }
        report
    }

    /// `f(a_z) = eps(z)` intertwines `M` with the sign representation:
    /// `f(T_s a_w) = -eps(w)` for every `w` and `s`.
    pub fn sign_rep_check(&self) -> SignReport {
        let t = self.table;
        let mut report = SignReport::default();
        for &w in &self.twisted {
            for s in 0..t.rank() {
                let Ok(v) = self.ts_action(s, &IModElt::basis(w)) else {
                    continue;
                };
                let f = v.iter().fold(LaurentInt::zero(), |acc, (&z, c)| {
                    &acc + &c.scale(&self.eps(z).into())
                });
                report.checked += 1;
                if f != LaurentInt::from(-(self.eps(w) as i64)) {
                    report.violations.push((t.format(w), s));
                }
            }
        }
        report
    }

    /// Quadratic and braid relations on every basis vector `a_w`; returns
    /// descriptions of failures. Products leaving the ball are skipped.
    pub fn check_module_relations(&self, matrix: &CoxeterMatrix) -> Vec<String> {
        let t = self.table;
        let mut bad = Vec::new();
        let u2 = p(&[(2, 1)]);
        for &w in &self.twisted {
            let a = IModElt::basis(w);
            for s in 0..t.rank() {
                // (T_s + 1)(T_s - u^2) a = T_s T_s a + (1 - u^2) T_s a - u^2 a
                let Ok(ta) = self.ts_action(s, &a) else { continue };
                let Ok(tta) = self.ts_action(s, &ta) else { continue };
                let mut v = tta;
                v.add_scaled(&ta, &p(&[(0, 1), (2, -1)]));
                v.add_scaled(&a, &-&u2);
                if !v.is_zero() {
                    bad.push(format!("quadratic relation at a_{} for s={s}", t.format(w)));
                }
            }
            for s in 0..t.rank() {
                for r in s + 1..t.rank() {
                    let Some(m) = matrix.get(s, r) else { continue };
                    let apply = |first: usize, second: usize| {
                        let mut v = a.clone();
                        for k in 0..m as usize {
                            let g = if k % 2 == 0 { first } else { second };
                            v = self.ts_action(g, &v).ok()?;
                        }
                        Some(v)
                    };
                    if let (Some(l), Some(rr)) = (apply(s, r), apply(r, s)) {
                        if l != rr {
                            bad.push(format!("braid relation at a_{} for ({s},{r})", t.format(w)));
                        }
                    }
                }
            }
        }
        bad
    }

    /// `pi(x) = x o 1` and `eps_{x,1} = (-1)^{l(x)} eps(x o 1)`; returns the
    /// rendered `x` where either fails.
    pub fn circ_consistency(
        &self,
        circ: &[Vec<Option<(ElemId, i8)>>],
        pi: &[ElemId],
    ) -> Vec<String> {
        let t = self.table;
        let one = self.twisted_index(t.identity()).expect("identity is twisted");
        let mut bad = Vec::new();
        for (i, row) in circ.iter().enumerate().take(pi.len()) {
            let x = ElemId(i as u32);
            let Some((v, sign)) = row[one] else { continue };
            let expect = if t.length(x) % 2 == 0 { 1 } else { -1 } * self.eps(v);
            if v != pi[i] || sign != expect {
                bad.push(t.format(x));
            }
        }
        bad
    }
}
