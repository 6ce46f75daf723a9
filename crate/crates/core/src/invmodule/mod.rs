//! The module `M` with basis `a_w`, `w` a twisted involution, and the
//! coefficient tables `L`, `tilde L` and `lambda` attached to `T_x a_1`.

mod checks;

pub use checks::{Form, LambdaReport, RecursionReport, SignReport, Violation};

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::coxeter::{ElemId, GroupTable};
use crate::hecke::{Hecke, HeckeElt};
use crate::laurent::{LaurentError, LaurentInt, PolyMatrix};
use crate::lincomb::LinComb;

pub type IModElt = LinComb;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("module action leaves the enumerated ball")]
    BallExceeded,
    #[error("table enumerated to length {have} but length {needed} is required")]
    InsufficientBall { needed: usize, have: usize },
    #[error("{0} is not a twisted involution")]
    NotTwisted(String),
    #[error("phi is not well defined at {0}")]
    PhiInconsistent(String),
    #[error("tilde-L^{x}_{z} = {value} has a positive power of u")]
    IntegralityViolation { x: String, z: String, value: String },
    #[error("pi is not well defined at {x}: {detail}")]
    PiViolation { x: String, detail: String },
    #[error("tilde-L^{x}_{z} is not divisible by (u-1)^phi(z)")]
    NotDivisible { x: String, z: String },
    #[error("lambda^{x}_{z} = {value} is not in Z[u^-1]")]
    LambdaNotIntegral { x: String, z: String, value: String },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct S0Point {
    pub lambda: String,
    pub mu_rank: usize,
    pub ideal_dim: usize,
    pub isomorphism: bool,
}

/// How `s` moves a twisted involution `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    /// `sw = ws*`; the target is then `sw`, otherwise `sws*`.
    pub commuting: bool,
    /// `sw > w`.
    pub up: bool,
    pub target: ElemId,
}

/// Coefficients `F^x_z` for `x` in a length-ordered prefix of the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    bound: Option<usize>,
    rows: Vec<IModElt>,
}

impl CoeffTable {
    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    /// Number of covered `x`; they are the ids `0..num_rows`.
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn covers(&self, x: ElemId) -> bool {
        x.index() < self.rows.len()
    }

    pub fn xs(&self) -> impl Iterator<Item = ElemId> {
        (0..self.rows.len() as u32).map(ElemId)
    }

    pub fn row(&self, x: ElemId) -> &IModElt {
        &self.rows[x.index()]
    }

    pub fn get(&self, x: ElemId, z: ElemId) -> LaurentInt {
        self.rows[x.index()].coeff(z)
    }

    /// `sum_x F^x_z T_x`; for the tilde table this is `mu(a_z)`.
    pub fn column(&self, z: ElemId) -> HeckeElt {
        self.xs()
            .filter_map(|x| self.rows[x.index()].get(z).map(|c| (x, c.clone())))
            .collect()
    }

    fn map(&self, mut f: impl FnMut(ElemId, ElemId, &LaurentInt) -> Result<LaurentInt, ModuleError>) -> Result<CoeffTable, ModuleError> {
        let rows = self
            .xs()
            .map(|x| {
                self.row(x)
                    .iter()
                    .map(|(&z, c)| Ok((z, f(x, z, c)?)))
                    .collect::<Result<IModElt, ModuleError>>()
            })
            .collect::<Result<_, _>>()?;
        Ok(CoeffTable {
            bound: self.bound,
            rows,
        })
    }
}

/// `M` over a fixed enumerated group, with `phi` and `epsilon` precomputed.
#[derive(Debug, Clone)]
pub struct InvModule<'a> {
    table: &'a GroupTable,
    twisted: Vec<ElemId>,
    position: HashMap<ElemId, usize>,
    phi: Vec<u32>,
    eps: Vec<i8>,
}

fn poly(terms: &[(i32, i64)]) -> LaurentInt {
    LaurentInt::from_terms(terms.iter().copied())
}

impl<'a> InvModule<'a> {
    pub fn new(table: &'a GroupTable) -> Result<Self, ModuleError> {
        let twisted = table.twisted_involutions();
        let position: HashMap<ElemId, usize> =
            twisted.iter().enumerate().map(|(i, &z)| (z, i)).collect();
        let mut m = Self {
            table,
            twisted,
            position,
            phi: Vec::new(),
            eps: Vec::new(),
        };
        m.compute_phi()?;
        Ok(m)
    }

    fn compute_phi(&mut self) -> Result<(), ModuleError> {
        let t = self.table;
        let mut phi = vec![0u32; self.twisted.len()];
        for (i, &z) in self.twisted.iter().enumerate() {
            if z == t.identity() {
                continue;
            }
            let mut value = None;
            for s in 0..t.rank() {
                if !t.has_left_descent(s, z) {
                    continue;
                }
                let step = self.step(s, z).expect("descents stay in the ball");
                let v = phi[self.position[&step.target]] + u32::from(step.commuting);
                if value.is_some_and(|old| old != v) {
                    return Err(ModuleError::PhiInconsistent(t.format(z)));
                }
                value = Some(v);
            }
            phi[i] = value.expect("nonidentity element has a descent");
        }
        self.eps = self
            .twisted
            .iter()
            .zip(&phi)
            .map(|(&z, &p)| {
                let e = (t.length(z) as u32 + p) / 2;
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        self.phi = phi;
        Ok(())
    }

    pub fn table(&self) -> &'a GroupTable {
        self.table
    }

    /// Twisted involutions in (length, shortlex) order.
    pub fn twisted(&self) -> &[ElemId] {
        &self.twisted
    }

    pub fn is_twisted(&self, w: ElemId) -> bool {
        self.position.contains_key(&w)
    }

    fn pos(&self, z: ElemId) -> usize {
        self.position[&z]
    }

    pub fn phi(&self, z: ElemId) -> u32 {
        self.phi[self.pos(z)]
    }

    pub fn eps(&self, z: ElemId) -> i8 {
        self.eps[self.pos(z)]
    }

    /// Classifies the action of `s` on `w`; `None` if the target leaves the ball.
    pub fn step(&self, s: usize, w: ElemId) -> Option<Step> {
        let t = self.table;
        let sw = t.left_mul(s, w)?;
        let ws = t.right_mul(w, t.star_gen(s))?;
        let up = !t.has_left_descent(s, w);
        if sw == ws {
            Some(Step {
                commuting: true,
                up,
                target: sw,
            })
        } else {
            let target = t.left_mul(s, ws)?;
            Some(Step {
                commuting: false,
                up,
                target,
            })
        }
    }

    /// `T_s m` by the four-case rule.
    pub fn ts_action(&self, s: usize, m: &IModElt) -> Result<IModElt, ModuleError> {
        let mut out = IModElt::zero();
        for (&w, c) in m {
            if !self.is_twisted(w) {
                return Err(ModuleError::NotTwisted(self.table.format(w)));
            }
            let st = self.step(s, w).ok_or(ModuleError::BallExceeded)?;
            let (own, other) = match (st.commuting, st.up) {
                (true, true) => (poly(&[(1, 1)]), poly(&[(1, 1), (0, 1)])),
                (true, false) => (poly(&[(2, 1), (1, -1), (0, -1)]), poly(&[(2, 1), (1, -1)])),
                (false, true) => (LaurentInt::zero(), LaurentInt::one()),
                (false, false) => (poly(&[(2, 1), (0, -1)]), poly(&[(2, 1)])),
            };
            out.add_term(w, c * &own);
            out.add_term(st.target, c * &other);
        }
        Ok(out)
    }

    /// `T_x m` along the shortlex word of `x`.
    pub fn tx_action(&self, x: ElemId, m: &IModElt) -> Result<IModElt, ModuleError> {
        let mut cur = m.clone();
        for &g in self.table.word(x).iter().rev() {
            cur = self.ts_action(g as usize, &cur)?;
        }
        Ok(cur)
    }

    /// Number of covered `x` for a bound, checking the ball is large enough
    /// to hold every `z` reachable from `a_1` (length at most `2 l(x)`).
    fn rows_for(&self, bound: Option<usize>) -> Result<usize, ModuleError> {
        let t = self.table;
        match (bound, t.bound()) {
            (None, _) if t.is_complete() => Ok(t.len()),
            (None, have) => Err(ModuleError::InsufficientBall {
                needed: usize::MAX,
                have: have.unwrap_or(0),
            }),
            (Some(b), Some(have)) if have < 2 * b => Err(ModuleError::InsufficientBall {
                needed: 2 * b,
                have,
            }),
            (Some(b), _) => Ok(t.layer(b.min(t.max_length())).end.min(t.len())),
        }
    }

    /// `L^x_z` with `T_x a_1 = sum_z L^x_z a_z`, for `l(x) <= bound`.
    pub fn l_table(&self, bound: Option<usize>) -> Result<CoeffTable, ModuleError> {
        let n = self.rows_for(bound)?;
        let t = self.table;
        let mut rows: Vec<IModElt> = Vec::with_capacity(n);
        rows.push(IModElt::basis(t.identity()));
        let mut k = 1;
        while rows.len() < n {
            let layer = t.layer(k);
            let end = layer.end.min(n);
            let computed: Vec<Result<IModElt, ModuleError>> = (layer.start..end)
                .into_par_iter()
                .map(|i| {
                    let x = ElemId(i as u32);
                    let s = t.word(x)[0] as usize;
                    let prev = t.left_mul(s, x).expect("left descent");
                    self.ts_action(s, &rows[prev.index()])
                })
                .collect();
            for r in computed {
                rows.push(r?);
            }
            k += 1;
        }
        Ok(CoeffTable { bound, rows })
    }

    /// `tilde L^x_z = (-1)^{l(x)} eps(z) bar(L^x_z)`; every entry must lie in `Z[u^-1]`.
    pub fn tilde_l(&self, lt: &CoeffTable) -> Result<CoeffTable, ModuleError> {
        let t = self.table;
        lt.map(|x, z, c| {
            let mut v = c.bar();
            if (t.length(x) % 2 == 1) != (self.eps(z) < 0) {
                v = -v;
            }
            if !v.in_z_u_inv() {
                return Err(ModuleError::IntegralityViolation {
                    x: t.format(x),
                    z: t.format(z),
                    value: v.to_string(),
                });
            }
            Ok(v)
        })
    }

    /// `pi(x)`: the unique `z` with `n^x_z = 1`, all other `n^x_z` being 0.
    pub fn pi_map(&self, tl: &CoeffTable) -> Result<Vec<ElemId>, ModuleError> {
        let t = self.table;
        tl.xs()
            .map(|x| {
                let mut found = None;
                for (&z, c) in tl.row(x) {
                    let n = c.const_term_at_u_inv_zero()?;
                    if n.is_zero() {
                        continue;
                    }
                    if !n.is_one() {
                        return Err(ModuleError::PiViolation {
                            x: t.format(x),
                            detail: format!("n^x_{} = {n}", t.format(z)),
                        });
                    }
                    if let Some(prev) = found.replace(z) {
                        return Err(ModuleError::PiViolation {
                            x: t.format(x),
                            detail: format!("both {} and {} give 1", t.format(prev), t.format(z)),
                        });
                    }
                }
                found.ok_or_else(|| ModuleError::PiViolation {
                    x: t.format(x),
                    detail: "no z with n^x_z = 1".into(),
                })
            })
            .collect()
    }

    /// Twisted involutions of length at most `max_len` missed by `pi`.
    /// `pi` restricted to `l(x) <= b` already hits every `z` with `l(z) <= b`.
    pub fn pi_missing(&self, pi: &[ElemId], max_len: Option<usize>) -> Vec<ElemId> {
        let image: std::collections::HashSet<ElemId> = pi.iter().copied().collect();
        self.twisted
            .iter()
            .copied()
            .filter(|&z| max_len.is_none_or(|b| self.table.length(z) <= b))
            .filter(|z| !image.contains(z))
            .collect()
    }

    /// `T_s a_w` at `u = 0`, as `(sign, target)`.
    fn circ_step(&self, s: usize, w: ElemId) -> Option<(i8, ElemId)> {
        let st = self.step(s, w)?;
        Some(if st.up { (1, st.target) } else { (-1, w) })
    }

    /// `x o w` and `eps_{x,w}` with `T_x a_w = eps_{x,w} a_{x o w}` at `u = 0`,
    /// for the `x` covered by `tl_rows` and all `w`. Entries that would leave
    /// the ball are `None`.
    pub fn circ_map(&self, rows: usize) -> Vec<Vec<Option<(ElemId, i8)>>> {
        let t = self.table;
        let mut out: Vec<Vec<Option<(ElemId, i8)>>> = Vec::with_capacity(rows);
        out.push(self.twisted.iter().map(|&w| Some((w, 1))).collect());
        for i in 1..rows {
            let x = ElemId(i as u32);
            let s = t.word(x)[0] as usize;
            let prev = t.left_mul(s, x).expect("left descent");
            let row = out[prev.index()]
                .iter()
                .map(|e| {
                    let (w, sign) = (*e)?;
                    let (f, v) = self.circ_step(s, w)?;
                    Some((v, sign * f))
                })
                .collect();
            out.push(row);
        }
        out
    }

    /// Index of `w` in [`InvModule::twisted`].
    pub fn twisted_index(&self, w: ElemId) -> Option<usize> {
        self.position.get(&w).copied()
    }

    /// `lambda^x_z = tilde L^x_z / (u-1)^{phi(z)}`, required to lie in `Z[u^-1]`.
    pub fn lambda_table(&self, tl: &CoeffTable) -> Result<CoeffTable, ModuleError> {
        let t = self.table;
        let u_minus_1 = poly(&[(1, 1), (0, -1)]);
        let mut powers: Vec<LaurentInt> = vec![LaurentInt::one()];
        tl.map(|x, z, c| {
            let k = self.phi(z) as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * &u_minus_1;
                powers.push(next);
            }
            let q = c.divide_exact(&powers[k]).map_err(|_| ModuleError::NotDivisible {
                x: t.format(x),
                z: t.format(z),
            })?;
            if !q.in_z_u_inv() {
                return Err(ModuleError::LambdaNotIntegral {
                    x: t.format(x),
                    z: t.format(z),
                    value: q.to_string(),
                });
            }
            Ok(q)
        })
    }

    /// The matrix `(tilde L^x_z)`: rows `x`, columns `z` in `I_*` order.
    pub fn mu_matrix(&self, tl: &CoeffTable) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(tl.num_rows(), self.twisted.len());
        for x in tl.xs() {
            for (&z, c) in tl.row(x) {
                m.set(x.index(), self.pos(z), c.clone());
            }
        }
        m
    }

    /// Rank of `(tilde L^x_z)` over `Q(u)`.
    pub fn injectivity_rank(&self, tl: &CoeffTable) -> usize {
        self.mu_matrix(tl).rank()
    }

    /// Rank of `(tilde L^x_z)` at `u = lambda`.
    pub fn mu_lambda_rank(&self, tl: &CoeffTable, lambda: &BigRational) -> Result<usize, ModuleError> {
        Ok(self.mu_matrix(tl).eval_rational(lambda)?.rank())
    }

    /// For each point, the rank of `mu_lambda` and `dim H_lambda X_lambda`.
    /// `mu_lambda` is an isomorphism onto `H_lambda X_lambda` exactly when
    /// both equal `|I_*|` (its image always contains that ideal).
    pub fn s0_probe(
        &self,
        tl: &CoeffTable,
        points: &[BigRational],
    ) -> Result<Vec<S0Point>, ModuleError> {
        let hecke = Hecke::new(self.table);
        let x_mat = hecke
            .left_mult_matrix(&hecke.build_x())
            .map_err(|_| ModuleError::BallExceeded)?;
        points
            .iter()
            .map(|l| {
                let mu_rank = self.mu_lambda_rank(tl, l)?;
                let ideal_dim = x_mat.eval_rational(l)?.rank();
                let n = self.twisted.len();
                Ok(S0Point {
                    lambda: l.to_string(),
                    mu_rank,
                    ideal_dim,
                    isomorphism: mu_rank == n && ideal_dim == n,
                })
            })
            .collect()
    }

    /// `mu(a_z)` in the `T`-basis.
    pub fn mu(&self, tl: &CoeffTable, z: ElemId) -> HeckeElt {
        tl.column(z)
    }
}
