//! `W x W` with the swap involution: the module `M` becomes the Hecke
//! algebra itself under `T_x (x) T_y : T_r -> T_x T_r T_{y^-1}`, and
//! everything can be cross-checked against the trace form.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterSystem, ElemId, GroupTable};
use crate::hecke::{Hecke, HeckeElt, HeckeError};
use crate::invmodule::{InvModule, ModuleError};
use crate::laurent::LaurentInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiregularError {
    #[error("the biregular computations need a finite, fully enumerated group")]
    NotFinite,
    #[error("p or p' at (x, y, z) = ({x}, {y}, {z}) has the wrong shape")]
    ShapeViolation { x: String, y: String, z: String },
    #[error("no unique x with d(x, {y}, {z}) = 1")]
    UniquenessViolation { y: String, z: String },
    #[error("N^{{{x},{y}}}_{z} = {value} is not in Z[u^-1]")]
    IntegralityViolation { x: String, y: String, z: String, value: String },
    #[error("pi is not well defined at ({x}, {y})")]
    PiViolation { x: String, y: String },
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

/// Element of `H (x) H`, keyed by `(left, right)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TensorElt {
    terms: BTreeMap<(ElemId, ElemId), LaurentInt>,
}

impl TensorElt {
    pub fn add_term(&mut self, x: ElemId, y: ElemId, c: LaurentInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((x, y)).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&(x, y));
        }
    }

    pub fn get(&self, x: ElemId, y: ElemId) -> LaurentInt {
        self.terms.get(&(x, y)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElemId, ElemId, &LaurentInt)> {
        self.terms.iter().map(|(&(x, y), c)| (x, y, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json(&self, table: &GroupTable) -> Value {
        Value::Array(
            self.iter()
                .map(|(x, y, c)| {
                    json!({ "left": table.format(x), "right": table.format(y), "coeff": c.to_string() })
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairEntry {
    pub p: LaurentInt,
    pub p_prime: LaurentInt,
    pub d: i8,
    pub d_prime: i8,
}

/// `p_{x,y,z} = tau(T_x T_y T_z) u^{-2l(z) - 2l(y)}` and
/// `p'_{x,y,z} = tau(T_x T_y T_z) u^{-2l(x)}` for all triples.
#[derive(Debug, Clone)]
pub struct PairTable {
    n: usize,
    entries: Vec<PairEntry>,
}

impl PairTable {
    pub fn get(&self, x: ElemId, y: ElemId, z: ElemId) -> &PairEntry {
        &self.entries[(x.index() * self.n + y.index()) * self.n + z.index()]
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct StarProductReport {
    pub checked: usize,
    /// `p'` differs from `(-1)^{l(x)+l(y)+l(z)} bar(p)`.
    pub conjugation_violations: usize,
    /// `d' != (-1)^{l(x)+l(y)+l(z)} d`.
    pub sign_violations: usize,
    /// `(y, z)` where the recursive `y * z` disagrees with the table.
    pub recursion_mismatches: usize,
}

impl StarProductReport {
    pub fn is_ok(&self) -> bool {
        self.conjugation_violations == 0 && self.sign_violations == 0 && self.recursion_mismatches == 0
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CrosscheckReport {
    pub compared: usize,
    pub mismatches: Vec<(String, String, String)>,
}

impl CrosscheckReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Which closed form matches the `pi` read off from constant terms.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PiReading {
    pub pairs: usize,
    /// `pi(x, y) = y * x^-1`
    pub y_star_x_inv: usize,
    /// `pi(x, y) = (y * x^-1)^-1`
    pub inverse_of_y_star_x_inv: usize,
}

pub struct Biregular<'a> {
    table: &'a GroupTable,
    /// `T_x T_y` for all pairs, row-major.
    products: Vec<HeckeElt>,
}

impl<'a> Biregular<'a> {
    pub fn new(table: &'a GroupTable) -> Result<Self, BiregularError> {
        if !table.is_complete() {
            return Err(BiregularError::NotFinite);
        }
        let hecke = Hecke::new(table);
        let n = table.len();
        let mut products = Vec::with_capacity(n * n);
        for x in table.ids() {
            for y in table.ids() {
                products.push(hecke.mul_basis(x, y)?);
            }
        }
        Ok(Self { table, products })
    }

    pub fn table(&self) -> &'a GroupTable {
        self.table
    }

    pub fn product(&self, x: ElemId, y: ElemId) -> &HeckeElt {
        &self.products[x.index() * self.table.len() + y.index()]
    }

    /// `tau(T_x T_y T_z)`: the `T_{z^-1}` coefficient of `T_x T_y`, times `u^{2 l(z)}`.
    pub fn tau3(&self, x: ElemId, y: ElemId, z: ElemId) -> LaurentInt {
        let t = self.table;
        self.product(x, y)
            .coeff(t.inverse(z))
            .shift(2 * t.length(z) as i32)
    }

    pub fn pair_table(&self) -> Result<PairTable, BiregularError> {
        let t = self.table;
        let n = t.len();
        let mut entries = Vec::with_capacity(n * n * n);
        for x in t.ids() {
            for y in t.ids() {
                for z in t.ids() {
                    let tau = self.tau3(x, y, z);
                    let (lx, ly, lz) = (t.length(x) as i32, t.length(y) as i32, t.length(z) as i32);
                    let p = tau.shift(-2 * lz - 2 * ly);
                    let p_prime = tau.shift(-2 * lx);
                    let bad = || BiregularError::ShapeViolation {
                        x: t.format(x),
                        y: t.format(y),
                        z: t.format(z),
                    };
                    if !p.in_z_u_inv() || !p_prime.in_z_u() {
                        return Err(bad());
                    }
                    let d = i64::try_from(p.coeff(0)).map_err(|_| bad())?;
                    let d_prime = i64::try_from(p_prime.coeff(0)).map_err(|_| bad())?;
                    if !(0..=1).contains(&d) || !(-1..=1).contains(&d_prime) {
                        return Err(bad());
                    }
                    entries.push(PairEntry {
                        p,
                        p_prime,
                        d: d as i8,
                        d_prime: d_prime as i8,
                    });
                }
            }
        }
        Ok(PairTable { n, entries })
    }

    /// `y * z` by the recursion on the first letter of `z`.
    pub fn star_product(&self, y: ElemId, z: ElemId) -> ElemId {
        let t = self.table;
        let mut y = y;
        for &s in t.word(z) {
            let s = s as usize;
            if !t.has_right_descent(y, s) {
                y = t.right_mul(y, s).expect("complete table");
            }
        }
        t.inverse(y)
    }

    /// The unique `x` with `d_{x,y,z} = 1`, read from the table.
    pub fn star_product_brute(
        &self,
        pt: &PairTable,
        y: ElemId,
        z: ElemId,
    ) -> Result<ElemId, BiregularError> {
        let t = self.table;
        let mut hits = t.ids().filter(|&x| pt.get(x, y, z).d == 1);
        match (hits.next(), hits.next()) {
            (Some(x), None) => Ok(x),
            _ => Err(BiregularError::UniquenessViolation {
                y: t.format(y),
                z: t.format(z),
            }),
        }
    }

    pub fn check_star_products(&self, pt: &PairTable) -> Result<StarProductReport, BiregularError> {
        let t = self.table;
        let mut rep = StarProductReport::default();
        for x in t.ids() {
            for y in t.ids() {
                for z in t.ids() {
                    let e = pt.get(x, y, z);
                    let odd = (t.length(x) + t.length(y) + t.length(z)) % 2 == 1;
                    let conj = if odd { -e.p.bar() } else { e.p.bar() };
                    let sign_d = if odd { -e.d } else { e.d };
                    rep.checked += 1;
                    if conj != e.p_prime {
                        rep.conjugation_violations += 1;
                    }
                    if sign_d != e.d_prime {
                        rep.sign_violations += 1;
                    }
                }
            }
        }
        for y in t.ids() {
            for z in t.ids() {
                if self.star_product_brute(pt, y, z)? != self.star_product(y, z) {
                    rep.recursion_mismatches += 1;
                }
            }
        }
        Ok(rep)
    }

    /// `X = sum_w u^{-2 l(w)} T_w (x) T_w`.
    pub fn element_x(&self) -> TensorElt {
        let t = self.table;
        let mut x = TensorElt::default();
        for w in t.ids() {
            x.add_term(w, w, LaurentInt::u_pow(-2 * t.length(w) as i32));
        }
        x
    }

    /// `(T_a (x) 1) v`.
    pub fn act_left(&self, a: ElemId, v: &TensorElt) -> TensorElt {
        let mut out = TensorElt::default();
        for (x, y, c) in v.iter() {
            for (&w, d) in self.product(a, x) {
                out.add_term(w, y, c * d);
            }
        }
        out
    }

    /// `(1 (x) T_a) v`.
    pub fn act_right(&self, a: ElemId, v: &TensorElt) -> TensorElt {
        let mut out = TensorElt::default();
        for (x, y, c) in v.iter() {
            for (&w, d) in self.product(a, y) {
                out.add_term(x, w, c * d);
            }
        }
        out
    }

    /// Elements `a` where `T_a X != T'_{a^-1} X`.
    pub fn check_x_symmetry(&self) -> Vec<ElemId> {
        let t = self.table;
        let x = self.element_x();
        t.ids()
            .filter(|&a| self.act_left(a, &x) != self.act_right(t.inverse(a), &x))
            .collect()
    }

    /// `mu(T_z) = T_z X`; coefficients must lie in `Z[u^-1]`.
    pub fn mu_of_tz(&self, z: ElemId) -> Result<TensorElt, BiregularError> {
        let t = self.table;
        let v = self.act_left(z, &self.element_x());
        for (x, y, c) in v.iter() {
            if !c.in_z_u_inv() {
                return Err(BiregularError::IntegralityViolation {
                    x: t.format(x),
                    y: t.format(y),
                    z: t.format(z),
                    value: c.to_string(),
                });
            }
        }
        Ok(v)
    }

    /// `pi(x, y)`, the unique `z` with constant term 1 in `N^{x,y}_z`,
    /// indexed `[x][y]`.
    pub fn pi_map(&self) -> Result<Vec<Vec<ElemId>>, BiregularError> {
        let t = self.table;
        let n = t.len();
        let mut found: Vec<Vec<Option<ElemId>>> = vec![vec![None; n]; n];
        for z in t.ids() {
            let mu = self.mu_of_tz(z)?;
            for (x, y, c) in mu.iter() {
                let k = c.coeff(0);
                if k == 0.into() {
                    continue;
                }
                let slot = &mut found[x.index()][y.index()];
                if k != 1.into() || slot.is_some() {
                    return Err(BiregularError::PiViolation {
                        x: t.format(x),
                        y: t.format(y),
                    });
                }
                *slot = Some(z);
            }
        }
        found
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, z)| {
                        z.ok_or_else(|| BiregularError::PiViolation {
                            x: t.format(ElemId(i as u32)),
                            y: t.format(ElemId(j as u32)),
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Compares the computed `pi` with the two candidate closed forms.
    pub fn pi_reading(&self, pi: &[Vec<ElemId>]) -> PiReading {
        let t = self.table;
        let mut r = PiReading::default();
        for x in t.ids() {
            for y in t.ids() {
                let a = self.star_product(y, t.inverse(x));
                let v = pi[x.index()][y.index()];
                r.pairs += 1;
                r.y_star_x_inv += usize::from(v == a);
                r.inverse_of_y_star_x_inv += usize::from(v == t.inverse(a));
            }
        }
        r
    }
}

/// Ids of `W x W` for pairs `(x, y)` of `W`, and back.
pub struct PairIndex {
    n: usize,
    to_pair: Vec<(ElemId, ElemId)>,
    to_id: Vec<ElemId>,
}

impl PairIndex {
    /// `product` must enumerate `W x W` as built by `CoxeterSystem::product_system`.
    pub fn new(base: &GroupTable, product: &GroupTable) -> Self {
        let n = base.len();
        let r = base.rank() as u8;
        let mut to_id = vec![ElemId(0); n * n];
        let mut to_pair = vec![(ElemId(0), ElemId(0)); n * n];
        for x in base.ids() {
            for y in base.ids() {
                let word: Vec<u8> = base
                    .word(x)
                    .iter()
                    .copied()
                    .chain(base.word(y).iter().map(|&g| g + r))
                    .collect();
                let id = product.eval_word(&word).expect("product table is complete");
                to_id[x.index() * n + y.index()] = id;
                to_pair[id.index()] = (x, y);
            }
        }
        Self { n, to_pair, to_id }
    }

    pub fn id(&self, x: ElemId, y: ElemId) -> ElemId {
        self.to_id[x.index() * self.n + y.index()]
    }

    pub fn pair(&self, id: ElemId) -> (ElemId, ElemId) {
        self.to_pair[id.index()]
    }
}

/// Runs the generic module pipeline on `(W x W, swap)` and compares
/// `mu(a_{(z, z^-1)})` with `T_z X` coefficient by coefficient.
pub fn crosscheck_generic(sys: &CoxeterSystem) -> Result<CrosscheckReport, BiregularError> {
    let base = sys.enumerate(None)?;
    let prod_sys = sys.product_system();
    let prod = prod_sys.enumerate(None)?;
    let index = PairIndex::new(&base, &prod);
    let module = InvModule::new(&prod)?;
    let tl = module.tilde_l(&module.l_table(None)?)?;
    let bireg = Biregular::new(&base)?;
    let mut rep = CrosscheckReport::default();
    for z in base.ids() {
        let a = index.id(z, base.inverse(z));
        let generic = module.mu(&tl, a);
        let direct = bireg.mu_of_tz(z)?;
        for x in base.ids() {
            for y in base.ids() {
                rep.compared += 1;
                if generic.coeff(index.id(x, y)) != direct.get(x, y) {
                    rep.mismatches
                        .push((base.format(x), base.format(y), base.format(z)));
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests;
