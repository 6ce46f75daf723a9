//! Kazhdan-Lusztig basis, cells, the a-function and the asymptotic ring
//! for small finite Coxeter groups, all with `L = l`.
//!
//! Conventions: `T~_w = u^{-l(w)} T_w`, so `(T~_s - u)(T~_s + u^-1) = 0`;
//! `c_w = sum_y p_{y,w} T~_y` with `p_{w,w} = 1`, `p_{y,w}` in `u^-1 Z[u^-1]`
//! otherwise, and `c_w` bar-invariant. `c_s = T~_s + u^-1`.

mod jring;
mod kottwitz;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{ElemId, GroupTable};
use crate::laurent::LaurentInt;
use crate::lincomb::LinComb;

pub use kottwitz::{trace_at_one, IrrMult, SpecialRep};
pub use jring::{G2_LIST, 
    g2_basis_check, G2BasisReport, JRing, JcmBlock, JcmIdeal, XExpansionReport, CellSumReport,
};
pub use kottwitz::{kottwitz_mult_check, KottwitzReport, SpecialFixture, B2_FIXTURE};

pub const KL_LIMIT: usize = 1200;
pub const STRUCTURE_LIMIT: usize = 200;
pub const JCM_LIMIT: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellsError {
    #[error("|W| = {order} exceeds the limit {limit} for {what}")]
    LimitExceeded {
        what: &'static str,
        order: usize,
        limit: usize,
    },
    #[error("the group table is not complete")]
    NotFinite,
    #[error("left cell {0} does not contain exactly one distinguished involution")]
    DistinguishedCount(usize),
    #[error("{0}")]
    Inconsistent(String),
    #[error(transparent)]
    Module(#[from] crate::invmodule::ModuleError),
    #[error(transparent)]
    Group(#[from] crate::groups::GroupError),
    #[error(transparent)]
    Hecke(#[from] crate::hecke::HeckeError),
}

/// `c_x c_y` in the `c`-basis for all pairs, and what is read off from it.
#[derive(Debug, Clone)]
pub struct Structure {
    prods: Vec<LinComb>,
    a: Vec<u32>,
    distinguished: Vec<ElemId>,
}

#[derive(Debug, Clone)]
pub struct KLData<'a> {
    table: &'a GroupTable,
    c: Vec<LinComb>,
    /// `mu[w]`: `(z, mu(z, w))` for `z < w` with `mu != 0`.
    mu: Vec<Vec<(ElemId, i64)>>,
    left_cells: Vec<Vec<ElemId>>,
    left_of: Vec<usize>,
    right_cells: Vec<Vec<ElemId>>,
    two_sided: Vec<Vec<ElemId>>,
    two_sided_of: Vec<usize>,
    structure: Option<Structure>,
}

/// Computes everything; the structure constants only when
/// `|W| <= STRUCTURE_LIMIT`.
pub fn kl_compute(table: &GroupTable) -> Result<KLData<'_>, CellsError> {
    kl_compute_with(table, KL_LIMIT, STRUCTURE_LIMIT)
}

pub fn kl_compute_with(
    table: &GroupTable,
    limit: usize,
    structure_limit: usize,
) -> Result<KLData<'_>, CellsError> {
    if !table.is_complete() {
        return Err(CellsError::NotFinite);
    }
    let n = table.len();
    if n > limit {
        return Err(CellsError::LimitExceeded {
            what: "the KL basis",
            order: n,
            limit,
        });
    }
    let (c, mu) = kl_basis(table);
    let mut kl = KLData {
        table,
        c,
        mu,
        left_cells: Vec::new(),
        left_of: Vec::new(),
        right_cells: Vec::new(),
        two_sided: Vec::new(),
        two_sided_of: Vec::new(),
        structure: None,
    };
    kl.compute_cells();
    if n <= structure_limit {
        kl.compute_structure()?;
    }
    Ok(kl)
}

/// `c_s` applied to `sum p_y T~_y`.
fn cs_times_tilde(t: &GroupTable, s: usize, v: &LinComb) -> LinComb {
    let mut out = LinComb::zero();
    for (&y, p) in v {
        let sy = t.left_mul(s, y).expect("complete table");
        out.add_term(sy, p.clone());
        if t.has_left_descent(s, y) {
            out.add_term(y, p.shift(1));
        } else {
            out.add_term(y, p.shift(-1));
        }
    }
    out
}

fn kl_basis(t: &GroupTable) -> (Vec<LinComb>, Vec<Vec<(ElemId, i64)>>) {
    let n = t.len();
    let mut c: Vec<LinComb> = vec![LinComb::zero(); n];
    let mut mu: Vec<Vec<(ElemId, i64)>> = vec![Vec::new(); n];
    c[0] = LinComb::basis(t.identity());
    for k in 1..=t.max_length() {
        let layer: Vec<(ElemId, LinComb)> = t
            .layer(k)
            .into_par_iter()
            .map(|i| {
                let w = ElemId(i as u32);
                let s = t.word(w)[0] as usize;
                let v = t.left_mul(s, w).unwrap();
                let mut cw = cs_times_tilde(t, s, &c[v.index()]);
                for &(z, m) in &mu[v.index()] {
                    if t.has_left_descent(s, z) {
                        cw.add_scaled(&c[z.index()], &LaurentInt::from(-m));
                    }
                }
                (w, cw)
            })
            .collect();
        for (w, cw) in layer {
            mu[w.index()] = cw
                .iter()
                .filter(|(&y, _)| y != w)
                .filter_map(|(&y, p)| {
                    let m = i64::try_from(p.coeff(-1)).expect("mu fits");
                    (m != 0).then_some((y, m))
                })
                .collect();
            c[w.index()] = cw;
        }
    }
    (c, mu)
}

fn sccs(n: usize, edges: &[(usize, usize)]) -> (Vec<Vec<ElemId>>, Vec<usize>) {
    let mut g = DiGraph::<(), ()>::with_capacity(n, edges.len());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for &(a, b) in edges {
        g.add_edge(nodes[a], nodes[b], ());
    }
    let mut cells: Vec<Vec<ElemId>> = tarjan_scc(&g)
        .into_iter()
        .map(|comp| {
            let mut v: Vec<ElemId> = comp.into_iter().map(|i| ElemId(i.index() as u32)).collect();
            v.sort();
            v
        })
        .collect();
    cells.sort();
    let mut of = vec![0; n];
    for (i, cell) in cells.iter().enumerate() {
        for w in cell {
            of[w.index()] = i;
        }
    }
    (cells, of)
}

impl<'a> KLData<'a> {
    pub fn table(&self) -> &'a GroupTable {
        self.table
    }

    /// `c_w` in the `T~`-basis.
    pub fn c(&self, w: ElemId) -> &LinComb {
        &self.c[w.index()]
    }

    pub fn p(&self, y: ElemId, w: ElemId) -> LaurentInt {
        self.c[w.index()].coeff(y)
    }

    pub fn mu(&self, w: ElemId) -> &[(ElemId, i64)] {
        &self.mu[w.index()]
    }

    /// Targets of `c_s c_y` in the `c`-basis with their coefficients.
    fn cs_times_c(&self, s: usize, y: ElemId) -> Vec<(ElemId, LaurentInt)> {
        let t = self.table;
        if t.has_left_descent(s, y) {
            return vec![(y, LaurentInt::from_terms([(1, 1), (-1, 1)]))];
        }
        let mut out = vec![(t.left_mul(s, y).unwrap(), LaurentInt::one())];
        for &(z, m) in self.mu(y) {
            if t.has_left_descent(s, z) {
                out.push((z, LaurentInt::from(m)));
            }
        }
        out
    }

    fn cs_times(&self, s: usize, v: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (&y, q) in v {
            for (x, m) in self.cs_times_c(s, y) {
                out.add_term(x, q * &m);
            }
        }
        out
    }

    fn compute_cells(&mut self) {
        let t = self.table;
        let n = t.len();
        let mut left = Vec::new();
        for y in t.ids() {
            for s in 0..t.rank() {
                for (x, _) in self.cs_times_c(s, y) {
                    left.push((y.index(), x.index()));
                }
            }
        }
        let right: Vec<(usize, usize)> = left
            .iter()
            .map(|&(a, b)| {
                (
                    t.inverse(ElemId(a as u32)).index(),
                    t.inverse(ElemId(b as u32)).index(),
                )
            })
            .collect();
        let (lc, lo) = sccs(n, &left);
        let (rc, _) = sccs(n, &right);
        let both: Vec<(usize, usize)> = left.iter().chain(&right).copied().collect();
        let (tc, to) = sccs(n, &both);
        self.left_cells = lc;
        self.left_of = lo;
        self.right_cells = rc;
        self.two_sided = tc;
        self.two_sided_of = to;
    }

    fn compute_structure(&mut self) -> Result<(), CellsError> {
        let t = self.table;
        let n = t.len();
        // columns[y][x] = c_x c_y, built by recursion on x.
        let columns: Vec<Vec<LinComb>> = t
            .ids()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&y| {
                let mut v: Vec<LinComb> = Vec::with_capacity(n);
                v.push(LinComb::basis(y));
                for x in t.ids().skip(1) {
                    let s = t.word(x)[0] as usize;
                    let xp = t.left_mul(s, x).unwrap();
                    let mut cur = self.cs_times(s, &v[xp.index()]);
                    for &(z, m) in self.mu(xp) {
                        if t.has_left_descent(s, z) {
                            cur.add_scaled(&v[z.index()], &LaurentInt::from(-m));
                        }
                    }
                    v.push(cur);
                }
                v
            })
            .collect();
        let mut prods = vec![LinComb::zero(); n * n];
        for (y, col) in columns.into_iter().enumerate() {
            for (x, v) in col.into_iter().enumerate() {
                prods[x * n + y] = v;
            }
        }
        let mut a = vec![0u32; n];
        for v in &prods {
            for (&z, h) in v {
                let d = h.degree().unwrap_or(0).max(0) as u32;
                a[z.index()] = a[z.index()].max(d);
            }
        }
        let distinguished: Vec<ElemId> = t
            .ids()
            .filter(|&d| {
                let delta = -self.p(t.identity(), d).degree().expect("p_{1,d} != 0");
                delta >= 0 && a[d.index()] == delta as u32
            })
            .collect();
        for (i, cell) in self.left_cells.iter().enumerate() {
            if cell.iter().filter(|w| distinguished.contains(w)).count() != 1 {
                return Err(CellsError::DistinguishedCount(i));
            }
        }
        self.structure = Some(Structure {
            prods,
            a,
            distinguished,
        });
        Ok(())
    }

    pub fn has_structure(&self) -> bool {
        self.structure.is_some()
    }

    pub(crate) fn structure(&self) -> Result<&Structure, CellsError> {
        self.structure.as_ref().ok_or(CellsError::LimitExceeded {
            what: "structure constants",
            order: self.table.len(),
            limit: STRUCTURE_LIMIT,
        })
    }

    /// `c_x c_y` in the `c`-basis.
    pub fn product(&self, x: ElemId, y: ElemId) -> Result<&LinComb, CellsError> {
        let n = self.table.len();
        Ok(&self.structure()?.prods[x.index() * n + y.index()])
    }

    pub fn h(&self, x: ElemId, y: ElemId, z: ElemId) -> Result<LaurentInt, CellsError> {
        Ok(self.product(x, y)?.coeff(z))
    }

    pub fn a(&self, w: ElemId) -> Result<u32, CellsError> {
        Ok(self.structure()?.a[w.index()])
    }

    /// `gamma_{x,y,z}`: coefficient of `u^{a(z^-1)}` in `h_{x,y,z^-1}`.
    pub fn gamma(&self, x: ElemId, y: ElemId, z: ElemId) -> Result<i64, CellsError> {
        let zi = self.table.inverse(z);
        let h = self.h(x, y, zi)?;
        Ok(i64::try_from(h.coeff(self.a(zi)? as i32)).expect("gamma fits"))
    }

    pub fn distinguished(&self) -> Result<&[ElemId], CellsError> {
        Ok(&self.structure()?.distinguished)
    }

    /// The distinguished involution in the left cell of `w`.
    pub fn distinguished_of(&self, w: ElemId) -> Result<ElemId, CellsError> {
        let cell = &self.left_cells[self.left_of[w.index()]];
        let d = self.distinguished()?;
        Ok(*cell.iter().find(|x| d.contains(x)).expect("one per left cell"))
    }

    pub fn left_cells(&self) -> &[Vec<ElemId>] {
        &self.left_cells
    }

    pub fn left_cell_of(&self, w: ElemId) -> usize {
        self.left_of[w.index()]
    }

    pub fn right_cells(&self) -> &[Vec<ElemId>] {
        &self.right_cells
    }

    pub fn two_sided_cells(&self) -> &[Vec<ElemId>] {
        &self.two_sided
    }

    pub fn two_sided_of(&self, w: ElemId) -> usize {
        self.two_sided_of[w.index()]
    }

    /// Rewrites a `T~`-expansion in the `c`-basis by peeling off the
    /// longest term.
    pub fn tilde_to_c(&self, v: &LinComb) -> LinComb {
        let t = self.table;
        let mut rest = v.clone();
        let mut out = LinComb::zero();
        while let Some(w) = rest.support().max_by_key(|&w| (t.length(w), w)) {
            let q = rest.coeff(w);
            rest.add_scaled(&self.c[w.index()], &-&q);
            out.add_term(w, q);
        }
        out
    }

    /// `s_{y,w}` with `T~_w = sum_y s_{y,w} c_y`.
    pub fn s_coeffs(&self, w: ElemId) -> LinComb {
        self.tilde_to_c(&LinComb::basis(w))
    }

    /// `c_w` is bar-invariant and triangular.
    pub fn check_basis(&self, hecke: &crate::hecke::Hecke) -> Result<Vec<ElemId>, CellsError> {
        let t = self.table;
        let mut memo = std::collections::HashMap::new();
        let mut bad = Vec::new();
        for w in t.ids() {
            let cw = &self.c[w.index()];
            let tri = cw.coeff(w).is_one()
                && cw
                    .iter()
                    .all(|(&y, p)| y == w || (p.in_z_u_inv() && p.coeff(0).is_zero()));
            let plain = hecke.from_tilde(cw);
            let bar = hecke.to_tilde(&hecke.bar_hecke_memo(&mut memo, &plain)?);
            if !tri || bar != *cw {
                bad.push(w);
            }
        }
        Ok(bad)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = self.table;
        let cells = |v: &[Vec<ElemId>]| -> Vec<Vec<String>> {
            v.iter().map(|c| c.iter().map(|&w| t.format(w)).collect()).collect()
        };
        let mut j = serde_json::json!({
            "order": t.len(),
            "c_basis": t.ids().map(|w| serde_json::json!({
                "w": t.format(w),
                "c": self.c(w).to_json(t),
            })).collect::<Vec<_>>(),
            "left_cells": cells(&self.left_cells),
            "right_cells": cells(&self.right_cells),
            "two_sided_cells": cells(&self.two_sided),
        });
        if let Some(s) = &self.structure {
            j["a"] = t
                .ids()
                .map(|w| serde_json::json!({ "w": t.format(w), "a": s.a[w.index()] }))
                .collect();
            j["distinguished"] = s.distinguished.iter().map(|&d| t.format(d)).collect();
        }
        j
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct StructureReport {
    pub triples: usize,
    pub degree_violations: usize,
    pub negative_gamma: usize,
    pub asymmetric_h: usize,
    pub s_coeff_violations: usize,
}

impl StructureReport {
    pub fn is_ok(&self) -> bool {
        self.degree_violations == 0
            && self.negative_gamma == 0
            && self.asymmetric_h == 0
            && self.s_coeff_violations == 0
    }
}

impl KLData<'_> {
    /// `deg h_{x,y,z} <= a(z)`, `gamma >= 0`, `h` bar-symmetric, and
    /// `s_{y,w}` in `u^-1 Z[u^-1]` off the diagonal.
    pub fn check_structure(&self) -> Result<StructureReport, CellsError> {
        let t = self.table;
        let mut r = StructureReport::default();
        for x in t.ids() {
            for y in t.ids() {
                for (&z, h) in self.product(x, y)? {
                    r.triples += 1;
                    if h.degree().unwrap_or(0) > self.a(z)? as i32 {
                        r.degree_violations += 1;
                    }
                    if h.coeff(self.a(z)? as i32).is_negative() {
                        r.negative_gamma += 1;
                    }
                    if h.invert_variable() != *h {
                        r.asymmetric_h += 1;
                    }
                }
            }
        }
        for w in t.ids() {
            for (&y, s) in &self.s_coeffs(w) {
                let ok = if y == w {
                    s.is_one()
                } else {
                    s.in_z_u_inv() && s.coeff(0).is_zero()
                };
                if !ok {
                    r.s_coeff_violations += 1;
                }
            }
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests;
