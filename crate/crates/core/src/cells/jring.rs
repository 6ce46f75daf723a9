//! The asymptotic ring `J`, the map `psi`, and the ideal `J^cm` cut out by
//! the module `M`.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::{CellsError, KLData, JCM_LIMIT};
use crate::coxeter::{parse_word, ElemId};
use crate::hecke::{Hecke, HeckeElt};
use crate::invmodule::{IModElt, InvModule};
use crate::laurent::LaurentInt;
use crate::linalg::{clear_denominators, span_rank, RatMatrix};
use crate::lincomb::LinComb;

type QVec = Vec<BigRational>;

fn q(k: i64) -> BigRational {
    BigRational::from_integer(k.into())
}

pub struct JRing<'k, 'a> {
    kl: &'k KLData<'a>,
    n: usize,
    /// `mult[x n + y]`: `(z, gamma_{x,y,z^-1})` with `t_x t_y = sum gamma t_z`.
    mult: Vec<Vec<(ElemId, i64)>>,
}

impl<'k, 'a> JRing<'k, 'a> {
    pub fn new(kl: &'k KLData<'a>) -> Result<Self, CellsError> {
        let t = kl.table();
        let n = t.len();
        let mut mult = Vec::with_capacity(n * n);
        for x in t.ids() {
            for y in t.ids() {
                let mut row = Vec::new();
                for (&z, h) in kl.product(x, y)? {
                    let g = h.coeff(kl.a(z)? as i32);
                    if !g.is_zero() {
                        row.push((z, g.to_i64().expect("gamma fits")));
                    }
                }
                mult.push(row);
            }
        }
        Ok(Self { kl, n, mult })
    }

    pub fn kl(&self) -> &'k KLData<'a> {
        self.kl
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_basis(&self, x: ElemId, y: ElemId) -> &[(ElemId, i64)] {
        &self.mult[x.index() * self.n + y.index()]
    }

    pub fn basis_vec(&self, x: ElemId) -> QVec {
        let mut v = vec![BigRational::zero(); self.n];
        v[x.index()] = BigRational::one();
        v
    }

    pub fn mul_q(&self, a: &[BigRational], b: &[BigRational]) -> QVec {
        let mut out = vec![BigRational::zero(); self.n];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let ab = ai * bj;
                for &(z, g) in &self.mult[i * self.n + j] {
                    out[z.index()] += &ab * q(g);
                }
            }
        }
        out
    }

    /// Product in `K (x) J` on `t`-basis expansions.
    pub fn mul_k(&self, a: &LinComb, b: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (&x, ax) in a {
            for (&y, by) in b {
                let ab = ax * by;
                for &(z, g) in self.mul_basis(x, y) {
                    out.add_term(z, ab.scale(&g.into()));
                }
            }
        }
        out
    }

    /// Triples `(x, y, z)` where `(t_x t_y) t_z != t_x (t_y t_z)`.
    pub fn associativity_violations(&self) -> usize {
        let ids: Vec<ElemId> = self.kl.table().ids().collect();
        let mut bad = 0;
        for &x in &ids {
            for &y in &ids {
                let xy = self.mul_q(&self.basis_vec(x), &self.basis_vec(y));
                for &z in &ids {
                    let l = self.mul_q(&xy, &self.basis_vec(z));
                    let yz = self.mul_q(&self.basis_vec(y), &self.basis_vec(z));
                    let r = self.mul_q(&self.basis_vec(x), &yz);
                    if l != r {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    /// `sum_{d in D} t_d`.
    pub fn unit(&self) -> Result<QVec, CellsError> {
        let mut v = vec![BigRational::zero(); self.n];
        for d in self.kl.distinguished()? {
            v[d.index()] = BigRational::one();
        }
        Ok(v)
    }

    /// `sum t_d` is a two-sided identity.
    pub fn check_unit(&self) -> Result<bool, CellsError> {
        let e = self.unit()?;
        Ok(self.kl.table().ids().all(|x| {
            let b = self.basis_vec(x);
            self.mul_q(&e, &b) == b && self.mul_q(&b, &e) == b
        }))
    }

    /// `psi(c_x) = sum_z h_{x,d,z} t_z` with `d` the distinguished involution
    /// in the left cell of `z`; `h_{x,d,z}` vanishes for any other `d`.
    pub fn psi_c(&self, x: ElemId) -> Result<LinComb, CellsError> {
        let t = self.kl.table();
        let mut out = LinComb::zero();
        for z in t.ids() {
            let d = self.kl.distinguished_of(z)?;
            out.add_term(z, self.kl.h(x, d, z)?);
        }
        Ok(out)
    }

    /// `psi(c)` for `c` given in the `c`-basis.
    pub fn psi_of_c_expansion(&self, c: &LinComb) -> Result<LinComb, CellsError> {
        let mut out = LinComb::zero();
        for (&x, k) in c {
            out.add_scaled(&self.psi_c(x)?, k);
        }
        Ok(out)
    }

    /// `psi(h)` for `h` in the `T`-basis.
    pub fn psi(&self, h: &HeckeElt) -> Result<LinComb, CellsError> {
        let hecke = Hecke::new(self.kl.table());
        self.psi_of_c_expansion(&self.kl.tilde_to_c(&hecke.to_tilde(h)))
    }

    /// Pairs `(x, y)` where `psi(c_x c_y) != psi(c_x) psi(c_y)`.
    pub fn psi_multiplicativity_violations(&self) -> Result<usize, CellsError> {
        let t = self.kl.table();
        let psis: Vec<LinComb> = t.ids().map(|x| self.psi_c(x)).collect::<Result<_, _>>()?;
        let mut bad = 0;
        for x in t.ids() {
            for y in t.ids() {
                let lhs = self.psi_of_c_expansion(self.kl.product(x, y)?)?;
                let rhs = self.mul_k(&psis[x.index()], &psis[y.index()]);
                if lhs != rhs {
                    bad += 1;
                }
            }
        }
        Ok(bad)
    }

    /// Matrix of `psi` at `u = lambda`; column `x` is `psi(c_x)`.
    pub fn psi_matrix_at(&self, lambda: &BigRational) -> Result<RatMatrix, CellsError> {
        let mut m = RatMatrix::zeros(self.n, self.n);
        for x in self.kl.table().ids() {
            for (&z, c) in &self.psi_c(x)? {
                m.set(z.index(), x.index(), c.eval_rational(lambda).expect("lambda != 0"));
            }
        }
        Ok(m)
    }

    /// For each left cell `Z` and `xi` with `xi^-1` in `Z`, compare
    /// `psi(X) t_xi` with `sum_{z in Z} r_z t_z t_xi`, `r_z` the
    /// `t_z`-coefficient of `psi(X)`, and check `r_z = u^a + lower`.
    pub fn x_expansion_check(&self) -> Result<XExpansionReport, CellsError> {
        let t = self.kl.table();
        let hecke = Hecke::new(t);
        let psi_x = self.psi(&hecke.build_x())?;
        let mut rep = XExpansionReport::default();
        for cell in self.kl.left_cells() {
            let a = self.kl.a(cell[0])? as i32;
            for &z in cell {
                let r = psi_x.coeff(z);
                if r.degree() != Some(a) || !r.coeff(a).is_one() {
                    rep.non_monic.push(t.format(z));
                }
            }
            for &zi in cell {
                let xi = t.inverse(zi);
                let txi = LinComb::basis(xi);
                let lhs = self.mul_k(&psi_x, &txi);
                let mut rhs = LinComb::zero();
                for &z in cell {
                    rhs = &rhs + &self.mul_k(&LinComb::term(z, psi_x.coeff(z)), &txi);
                }
                rep.checked += 1;
                if lhs != rhs {
                    rep.expansion_failures.push(t.format(xi));
                }
            }
        }
        rep.cells = self.kl.left_cells().len();
        Ok(rep)
    }

    fn central_basis(&self) -> Vec<QVec> {
        let n = self.n;
        let ids: Vec<ElemId> = self.kl.table().ids().collect();
        let mut rows: Vec<QVec> = Vec::new();
        for &x in &ids {
            // coefficient k of (alpha t_x - t_x alpha), linear in alpha
            let mut block = vec![vec![BigRational::zero(); n]; n];
            for &w in &ids {
                for &(z, g) in self.mul_basis(w, x) {
                    block[z.index()][w.index()] += q(g);
                }
                for &(z, g) in self.mul_basis(x, w) {
                    block[z.index()][w.index()] -= q(g);
                }
            }
            rows.extend(block.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())));
        }
        if rows.is_empty() {
            return ids.iter().map(|&x| self.basis_vec(x)).collect();
        }
        RatMatrix::from_rows(rows).nullspace()
    }

    /// Central primitive idempotents of `Q (x) J`.
    pub fn central_idempotents(&self) -> Result<Vec<QVec>, CellsError> {
        let basis: Vec<QVec> = self
            .central_basis()
            .iter()
            .map(|v| clear_denominators(v).into_iter().map(BigRational::from_integer).collect())
            .collect();
        let k = basis.len();
        let n = self.n;
        let mut cmat = RatMatrix::zeros(n, k);
        for (j, v) in basis.iter().enumerate() {
            for (i, c) in v.iter().enumerate() {
                cmat.set(i, j, c.clone());
            }
        }
        let mut rng = StdRng::seed_from_u64(0x1d3);
        for _ in 0..32 {
            let mut b = vec![BigRational::zero(); n];
            for v in &basis {
                let c = q(rng.random_range(1..=9));
                for (bi, vi) in b.iter_mut().zip(v) {
                    *bi += &c * vi;
                }
            }
            // multiplication by b on the center, in the basis above
            let mut l = RatMatrix::zeros(k, k);
            for (j, v) in basis.iter().enumerate() {
                let y = cmat.solve(&self.mul_q(&b, v)).ok_or_else(|| {
                    CellsError::Inconsistent("center is not closed".into())
                })?;
                for (i, c) in y.into_iter().enumerate() {
                    l.set(i, j, c);
                }
            }
            let bound = (0..k)
                .map(|i| l.row(i).iter().map(|c| c.abs()).sum::<BigRational>())
                .max()
                .unwrap_or_else(BigRational::zero)
                .ceil()
                .to_integer()
                .to_i64()
                .expect("bound fits");
            let mut eig: Vec<QVec> = Vec::new();
            for lam in -bound..=bound {
                let mut m = l.clone();
                for i in 0..k {
                    m.set(i, i, m.get(i, i) - q(lam));
                }
                let ns = m.nullspace();
                if ns.len() > 1 {
                    break;
                }
                if let Some(y) = ns.into_iter().next() {
                    eig.push(cmat.mul_vec(&y));
                }
            }
            if eig.len() != k {
                continue;
            }
            let mut out = Vec::with_capacity(k);
            for v in eig {
                let v2 = self.mul_q(&v, &v);
                let i = v.iter().position(|c| !c.is_zero()).unwrap();
                let c = &v2[i] / &v[i];
                let e: QVec = v.iter().map(|x| x / &c).collect();
                if self.mul_q(&e, &e) != e {
                    return Err(CellsError::Inconsistent("idempotent check failed".into()));
                }
                out.push(e);
            }
            return Ok(out);
        }
        Err(CellsError::Inconsistent("could not split the center of J".into()))
    }

    /// The blocks of `Q (x) J` acting nonzero on `M`. Each block is tested
    /// twice: by `psi(X) e != 0`, and by letting `psi^-1(e)` act on `M`
    /// specialized at two values of `u`.
    pub fn jcm_ideal(&self) -> Result<JcmIdeal, CellsError> {
        let t = self.kl.table();
        if self.n > JCM_LIMIT {
            return Err(CellsError::LimitExceeded {
                what: "J^cm",
                order: self.n,
                limit: JCM_LIMIT,
            });
        }
        let hecke = Hecke::new(t);
        let psi_x = self.psi(&hecke.build_x())?;
        let module = InvModule::new(t)?;
        let tw: Vec<ElemId> = module.twisted().to_vec();
        // T_y a_w for all y, w
        let mut actions: Vec<Vec<IModElt>> = Vec::with_capacity(self.n);
        for y in t.ids() {
            actions.push(
                tw.iter()
                    .map(|&w| module.tx_action(y, &IModElt::basis(w)))
                    .collect::<Result<_, _>>()?,
            );
        }
        let lambdas = [q(7), q(11)];
        let mut solvers = Vec::new();
        for l in &lambdas {
            let p = self.psi_matrix_at(l)?;
            if p.rank() != self.n {
                return Err(CellsError::Inconsistent(format!("psi is singular at u = {l}")));
            }
            solvers.push(p);
        }
        let mut blocks = Vec::new();
        let mut span: Vec<QVec> = Vec::new();
        for e in self.central_idempotents()? {
            let gens: Vec<QVec> = t.ids().map(|x| self.mul_q(&e, &self.basis_vec(x))).collect();
            let dim = span_rank(&gens);
            let scaled = LinComb::from_terms(
                clear_denominators(&e)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (ElemId(i as u32), LaurentInt::from(c))),
            );
            let route_a = !self.mul_k(&psi_x, &scaled).is_zero();
            let mut route_b = Vec::new();
            for (l, p) in lambdas.iter().zip(&solvers) {
                let alpha = p.solve(&e).expect("psi invertible");
                let mut beta = vec![BigRational::zero(); self.n];
                for x in t.ids() {
                    let ax = &alpha[x.index()];
                    if ax.is_zero() {
                        continue;
                    }
                    for (&y, c) in self.kl.c(x) {
                        let v = c.shift(-(t.length(y) as i32)).eval_rational(l).unwrap();
                        beta[y.index()] += ax * v;
                    }
                }
                let mut nonzero = false;
                'outer: for (wi, _) in tw.iter().enumerate() {
                    let mut col: std::collections::BTreeMap<ElemId, BigRational> = Default::default();
                    for y in t.ids() {
                        let b = &beta[y.index()];
                        if b.is_zero() {
                            continue;
                        }
                        for (&v, c) in &actions[y.index()][wi] {
                            *col.entry(v).or_insert_with(BigRational::zero) +=
                                b * c.eval_rational(l).unwrap();
                        }
                    }
                    if col.values().any(|c| !c.is_zero()) {
                        nonzero = true;
                        break 'outer;
                    }
                }
                route_b.push(nonzero);
            }
            let in_m = route_a && route_b.iter().all(|&b| b);
            if in_m {
                span.extend(gens);
            }
            blocks.push(JcmBlock {
                dim,
                route_a,
                route_b: route_b.iter().all(|&b| b),
                routes_agree: route_b.iter().all(|&b| b == route_a),
            });
        }
        let basis = if span.is_empty() {
            Vec::new()
        } else {
            let mut m = RatMatrix::from_rows(span);
            let piv = m.rref();
            (0..piv.len()).map(|r| m.row(r).to_vec()).collect()
        };
        Ok(JcmIdeal {
            dim_j: self.n,
            dim: basis.len(),
            blocks,
            basis,
        })
    }

    /// `sum_{z in Z cap Z'^-1} t_z` for left cells with nonempty intersection.
    pub fn cell_sum_elements(&self) -> Vec<(usize, usize, QVec)> {
        let t = self.kl.table();
        let cells = self.kl.left_cells();
        let mut out = Vec::new();
        for (i, z) in cells.iter().enumerate() {
            for (j, zp) in cells.iter().enumerate() {
                let common: Vec<ElemId> = z
                    .iter()
                    .copied()
                    .filter(|&w| zp.contains(&t.inverse(w)))
                    .collect();
                if common.is_empty() {
                    continue;
                }
                let mut v = vec![BigRational::zero(); self.n];
                for w in common {
                    v[w.index()] = BigRational::one();
                }
                out.push((i, j, v));
            }
        }
        out
    }

    pub fn cell_sums(&self, jcm: &JcmIdeal) -> CellSumReport {
        let elems = self.cell_sum_elements();
        let vecs: Vec<QVec> = elems.iter().map(|(_, _, v)| v.clone()).collect();
        let outside = elems
            .iter()
            .filter(|(_, _, v)| !jcm.contains(v))
            .map(|&(i, j, _)| (i, j))
            .collect();
        CellSumReport {
            elements: vecs.len(),
            rank: span_rank(&vecs),
            dim_jcm: jcm.dim,
            outside,
        }
    }

    /// Elements `t_x v`, `v t_x` with `v` in the ideal that fall outside.
    pub fn jcm_ideal_violations(&self, jcm: &JcmIdeal) -> usize {
        let t = self.kl.table();
        let mut bad = 0;
        for v in &jcm.basis {
            for x in t.ids() {
                let b = self.basis_vec(x);
                if !jcm.contains(&self.mul_q(&b, v)) || !jcm.contains(&self.mul_q(v, &b)) {
                    bad += 1;
                }
            }
        }
        bad
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct XExpansionReport {
    pub cells: usize,
    pub checked: usize,
    /// `z` with `t_z`-coefficient of `psi(X)` not of the form `u^a + lower`.
    pub non_monic: Vec<String>,
    /// `xi` where `psi(X) t_xi` is not `sum_{z in Z} r_z t_z t_xi`.
    pub expansion_failures: Vec<String>,
}

impl XExpansionReport {
    pub fn is_ok(&self) -> bool {
        self.non_monic.is_empty() && self.expansion_failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JcmBlock {
    pub dim: usize,
    pub route_a: bool,
    pub route_b: bool,
    pub routes_agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct JcmIdeal {
    pub dim_j: usize,
    pub dim: usize,
    pub blocks: Vec<JcmBlock>,
    #[serde(skip)]
    pub basis: Vec<QVec>,
}

impl JcmIdeal {
    pub fn contains(&self, v: &[BigRational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        span_rank(&rows) == self.dim
    }

    pub fn routes_agree(&self) -> bool {
        self.blocks.iter().all(|b| b.routes_agree)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellSumReport {
    pub elements: usize,
    pub rank: usize,
    pub dim_jcm: usize,
    /// `(Z, Z')` whose element is not in `J^cm`.
    pub outside: Vec<(usize, usize)>,
}

impl CellSumReport {
    pub fn all_inside(&self) -> bool {
        self.outside.is_empty()
    }

    /// The elements form a basis of `J^cm`.
    pub fn is_basis(&self) -> bool {
        self.all_inside() && self.rank == self.elements && self.rank == self.dim_jcm
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct G2BasisReport {
    pub elements: Vec<String>,
    pub rank: usize,
    pub inside: usize,
    pub dim_jcm: usize,
}

impl G2BasisReport {
    pub fn is_ok(&self) -> bool {
        self.rank == 8 && self.inside == 8 && self.dim_jcm == 8
    }
}

/// The eight listed combinations of `t`-basis elements for `G2`.
pub const G2_LIST: [&[&str]; 8] = [
    &["e"],
    &["1", "12121"],
    &["121"],
    &["2", "21212"],
    &["212"],
    &["12", "1212"],
    &["21", "2121"],
    &["121212"],
];

pub fn g2_basis_check(j: &JRing, jcm: &JcmIdeal) -> Result<G2BasisReport, CellsError> {
    let t = j.kl().table();
    let mut vecs = Vec::new();
    let mut names = Vec::new();
    for combo in G2_LIST {
        let mut v = vec![BigRational::zero(); j.dim()];
        for w in combo {
            let word = parse_word(w, t.rank())
                .ok_or_else(|| CellsError::Inconsistent(format!("bad word {w}")))?;
            let id = t
                .by_word(&word)
                .ok_or_else(|| CellsError::Inconsistent(format!("{w} not in W")))?;
            v[id.index()] += BigRational::one();
        }
        names.push(combo.iter().map(|w| format!("t_{w}")).collect::<Vec<_>>().join(" + "));
        vecs.push(v);
    }
    Ok(G2BasisReport {
        rank: span_rank(&vecs),
        inside: vecs.iter().filter(|v| jcm.contains(v)).count(),
        dim_jcm: jcm.dim,
        elements: names,
    })
}
