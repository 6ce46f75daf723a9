//! `K_G(G)` for a finite group acting on itself by conjugation: the basis
//! `E_{x,rho}`, the Kottwitz element, `V = alpha_! C` for `alpha(g) = g^2`,
//! the trace functions on commuting pairs, the pairings `chi_{y,sigma}` and
//! the Fourier bracket.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::groups::chartable::{next_prime_1_mod, root_of_unity};
use crate::groups::{
    character_table, unit_mult, CharacterTable, Cyclo, FiniteGroup, GroupError, Subgroup,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("coefficient of E_({x},{rho}) is {value}, not an integer")]
    NonIntegralCoefficient { x: usize, rho: usize, value: String },
    #[error("({0}, {1}) is not in M(G)")]
    UnknownPair(usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How the normalizing factor in the Kottwitz display is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KappaReading {
    /// `|Z_{G_x}(s)| / |G_x|`, the reading used in the proof.
    CentralizerOfRoot,
    /// `|Z(G_x)| / |G_x|` with `Z` the center.
    CenterOfCentralizer,
}

/// One centralizer `G_x` with its character table.
#[derive(Debug, Clone)]
pub struct Centralizer {
    pub rep: usize,
    pub sub: Subgroup,
    pub table: CharacterTable,
}

/// `(x, rho)` with `x` a class representative and `rho` in `Irr G_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MPair {
    pub class: usize,
    pub rep: usize,
    pub rho: usize,
}

/// Rational coefficients on the basis `E_{x,rho}`, in `MPairSet` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleClass {
    pub coeffs: Vec<BigRational>,
}

impl BundleClass {
    pub fn is_nonneg_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn render(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

pub struct MPairSet<'g> {
    g: &'g FiniteGroup,
    cents: Vec<Centralizer>,
    pairs: Vec<MPair>,
    exponent: u32,
}

impl<'g> MPairSet<'g> {
    pub fn new(g: &'g FiniteGroup) -> Result<Self, KError> {
        let mut cents = Vec::new();
        let mut pairs = Vec::new();
        for (class, c) in g.classes().iter().enumerate() {
            let sub = g.subgroup(&g.centralizer(c.rep))?;
            let table = character_table(&sub.group)?;
            for rho in 0..table.len() {
                pairs.push(MPair {
                    class,
                    rep: c.rep,
                    rho,
                });
            }
            cents.push(Centralizer {
                rep: c.rep,
                sub,
                table,
            });
        }
        Ok(Self {
            g,
            cents,
            pairs,
            exponent: g.exponent(),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        self.g
    }

    pub fn pairs(&self) -> &[MPair] {
        &self.pairs
    }

    pub fn centralizer(&self, class: usize) -> &Centralizer {
        &self.cents[class]
    }

    pub fn index(&self, class: usize, rho: usize) -> Result<usize, KError> {
        self.pairs
            .iter()
            .position(|p| p.class == class && p.rho == rho)
            .ok_or(KError::UnknownPair(class, rho))
    }

    pub fn dim(&self, p: MPair) -> u64 {
        self.cents[p.class].table.dim(p.rho)
    }

    /// `tr(h, rho)` for `h` in `G_x` given as a parent id.
    fn rho_at(&self, p: MPair, h: usize) -> &Cyclo {
        let c = &self.cents[p.class];
        let local = c.sub.local(h).expect("element lies in the centralizer");
        c.table.value(&c.sub.group, p.rho, local)
    }

    pub fn label(&self, p: MPair) -> String {
        format!("(x{}, rho{})", p.class, p.rho)
    }

    pub fn basis_element(&self, k: usize) -> BundleClass {
        let mut coeffs = vec![BigRational::zero(); self.pairs.len()];
        coeffs[k] = BigRational::one();
        BundleClass { coeffs }
    }

    pub fn kottwitz_kappa(&self, reading: KappaReading) -> Result<BundleClass, KError> {
        let g = self.g;
        let mut coeffs = Vec::with_capacity(self.pairs.len());
        for &p in &self.pairs {
            let c = &self.cents[p.class];
            let gx = c.sub.group.order();
            let center = c
                .sub
                .embed
                .iter()
                .filter(|&&z| c.sub.embed.iter().all(|&h| g.commute(z, h)))
                .count();
            let mut total = BigRational::zero();
            for s in g.square_roots(p.rep) {
                let zs: Vec<usize> =
                    c.sub.embed.iter().copied().filter(|&h| g.commute(h, s)).collect();
                let local: Vec<usize> = zs.iter().map(|&h| c.sub.local(h).unwrap()).collect();
                let m = unit_mult(&c.sub.group, &c.table, p.rho, &local)?;
                let num = match reading {
                    KappaReading::CentralizerOfRoot => zs.len(),
                    KappaReading::CenterOfCentralizer => center,
                };
                total += BigRational::new(num.into(), gx.into()) * BigRational::from_integer(m.into());
            }
            if !total.is_integer() {
                return Err(KError::NonIntegralCoefficient {
                    x: p.class,
                    rho: p.rho,
                    value: total.to_string(),
                });
            }
            coeffs.push(total);
        }
        Ok(BundleClass { coeffs })
    }

    /// Decomposes the conjugation action of `G_x` on `{s : s^2 = x}`.
    pub fn direct_image_v(&self) -> BundleClass {
        let g = self.g;
        let coeffs = self
            .pairs
            .iter()
            .map(|&p| {
                let c = &self.cents[p.class];
                let roots = g.square_roots(p.rep);
                let mut s = Cyclo::zero(self.exponent);
                for &h in &c.sub.embed {
                    let fixed = roots.iter().filter(|&&r| g.commute(r, h)).count() as i64;
                    if fixed != 0 {
                        let t = self.rho_at(p, h).conj();
                        s = &s + &t.scale(&BigRational::from_integer(fixed.into()));
                    }
                }
                let q = s.as_rational().expect("multiplicity is rational");
                q / BigRational::from_integer(c.sub.group.order().into())
            })
            .collect();
        BundleClass { coeffs }
    }

    /// `phi_{E_{x,rho}}(g, h) = |G_x|^-1 sum_{a g a^-1 = x} tr(a h a^-1, rho)`.
    pub fn phi_basis(&self, p: MPair, gg: usize, h: usize) -> Cyclo {
        let g = self.g;
        if g.class_of(gg) != p.class {
            return Cyclo::zero(self.exponent);
        }
        let mut s = Cyclo::zero(self.exponent);
        for a in 0..g.order() {
            if g.conj(a, gg) == p.rep {
                s = &s + self.rho_at(p, g.conj(a, h));
            }
        }
        s.scale(&BigRational::new(
            1.into(),
            self.cents[p.class].sub.group.order().into(),
        ))
    }

    /// `phi_b(g, h)` for `(g, h)` commuting.
    pub fn phi(&self, b: &BundleClass, gg: usize, h: usize) -> Cyclo {
        let mut s = Cyclo::zero(self.exponent);
        for (k, &p) in self.pairs.iter().enumerate() {
            if !b.coeffs[k].is_zero() && self.g.class_of(gg) == p.class {
                s = &s + &self.phi_basis(p, gg, h).scale(&b.coeffs[k]);
            }
        }
        s
    }

    /// `phi_V(g, h) = |{s : s^2 = g, sh = hs}|`.
    pub fn phi_v_direct(&self, gg: usize, h: usize) -> u64 {
        let g = self.g;
        g.square_roots(gg).into_iter().filter(|&s| g.commute(s, h)).count() as u64
    }

    /// Rank of `b -> phi_b` on the basis, certified modulo a prime
    /// `p = 1 mod exponent`. Reduction can only lower the rank, so a full
    /// result is exact.
    pub fn phi_rank_mod_p(&self) -> usize {
        let g = self.g;
        let n = self.exponent;
        let p = next_prime_1_mod(n as u64, 1 << 20);
        let z = root_of_unity(n as u64, p);
        let cols = g.commuting_pairs();
        let mut rows: Vec<Vec<u64>> = self
            .pairs
            .iter()
            .map(|&mp| {
                cols.iter()
                    .map(|&(a, b)| {
                        self.phi_basis(mp, a, b)
                            .lift(n)
                            .eval_mod(z, p)
                            .expect("denominators prime to p")
                    })
                    .collect()
            })
            .collect();
        rank_mod(&mut rows, p)
    }

    /// `chi_{y,sigma}(U) = (dim sigma)^-1 sum_{gamma in G_y} phi_U(gamma, y) tr(gamma, sigma)`.
    pub fn chi_pairing(&self, y: MPair, u: &BundleClass) -> Cyclo {
        let mut s = Cyclo::zero(self.exponent);
        let c = &self.cents[y.class];
        for &gamma in &c.sub.embed {
            let f = self.phi(u, gamma, y.rep);
            if !f.is_zero() {
                s = &s + &(&f * self.rho_at(y, gamma));
            }
        }
        s.scale(&BigRational::new(1.into(), self.dim(y).into()))
    }

    /// `{(x,rho),(y,sigma)}` defined through
    /// `chi_{y,sigma}(E_{x,rho}) = |G_y| / dim sigma * {(x,rho),(y,sigma^*)}`.
    pub fn fourier_bracket(&self, x: MPair, y: MPair) -> Cyclo {
        let c = &self.cents[y.class];
        let dual = MPair {
            rho: c.table.dual(y.rho),
            ..y
        };
        let e = self.basis_element(self.index(x.class, x.rho).unwrap());
        self.chi_pairing(dual, &e).scale(&BigRational::new(
            self.dim(y).into(),
            c.sub.group.order().into(),
        ))
    }

    /// The closed formula
    /// `|G_x|^-1 |G_y|^-1 sum_{g : x, g y g^-1 commute} tr(g y g^-1, rho) conj tr(g^-1 x g, sigma)`,
    /// kept only as a cross-check.
    pub fn fourier_bracket_closed(&self, x: MPair, y: MPair) -> Cyclo {
        let g = self.g;
        let mut s = Cyclo::zero(self.exponent);
        for a in 0..g.order() {
            let gyg = g.conj(a, y.rep);
            if !g.commute(x.rep, gyg) {
                continue;
            }
            let gxg = g.conj(g.inv(a), x.rep);
            s = &s + &(self.rho_at(x, gyg) * &self.rho_at(y, gxg).conj());
        }
        let d = self.cents[x.class].sub.group.order() * self.cents[y.class].sub.group.order();
        s.scale(&BigRational::new(1.into(), d.into()))
    }

    pub fn fs_indicator(&self, p: MPair) -> i8 {
        let c = &self.cents[p.class];
        c.table.fs_indicator(&c.sub.group, p.rho)
    }
}

fn rank_mod(rows: &mut [Vec<u64>], p: u64) -> usize {
    use crate::groups::chartable::inv_mod;
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = inv_mod(rows[rank][col], p);
        let pivot: Vec<u64> = rows[rank].iter().map(|x| x * inv % p).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, &q) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - f * q % p) % p;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaReport {
    pub group: String,
    pub pairs: Vec<String>,
    pub kappa: Vec<String>,
    pub v: Vec<String>,
    pub coefficients_equal: bool,
    pub v_nonnegative_integral: bool,
    pub phi_checked: usize,
    pub phi_mismatches: usize,
    pub phi_rank: usize,
    pub phi_injective: bool,
    /// Outcome of the center-of-centralizer reading.
    pub alternative_reading: String,
}

impl KappaReport {
    pub fn is_ok(&self) -> bool {
        self.coefficients_equal && self.v_nonnegative_integral && self.phi_mismatches == 0 && self.phi_injective
    }
}

pub fn verify_kappa_v(g: &FiniteGroup) -> Result<KappaReport, KError> {
    let m = MPairSet::new(g)?;
    let kappa = m.kottwitz_kappa(KappaReading::CentralizerOfRoot)?;
    let v = m.direct_image_v();
    let mut phi_checked = 0;
    let mut phi_mismatches = 0;
    for (a, b) in g.commuting_pairs() {
        phi_checked += 1;
        let direct = Cyclo::int(1, m.phi_v_direct(a, b) as i64);
        if m.phi(&kappa, a, b) != direct || m.phi(&v, a, b) != direct {
            phi_mismatches += 1;
        }
    }
    let alternative_reading = match m.kottwitz_kappa(KappaReading::CenterOfCentralizer) {
        Ok(k) if k == v => "agrees with V".to_string(),
        Ok(_) => "integral but differs from V".to_string(),
        Err(e) => format!("fails: {e}"),
    };
    let phi_rank = m.phi_rank_mod_p();
    Ok(KappaReport {
        group: g.name().to_string(),
        pairs: m.pairs().iter().map(|&p| m.label(p)).collect(),
        kappa: kappa.render(),
        v: v.render(),
        coefficients_equal: kappa == v,
        v_nonnegative_integral: v.is_nonneg_integral(),
        phi_checked,
        phi_mismatches,
        phi_rank,
        phi_injective: phi_rank == m.pairs().len(),
        alternative_reading,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiEntry {
    pub pair: String,
    pub fs: i8,
    pub chi_v: Cyclo,
    /// `fs * |G_y| / dim sigma`.
    pub expected: Cyclo,
    /// `sum_{(x,rho)} {(x,rho),(y,sigma)} mult(E_{x,rho} in V)`, FS-1 only.
    pub fourier_sum: Option<Cyclo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiReport {
    pub group: String,
    pub entries: Vec<ChiEntry>,
    pub failures: usize,
}

pub fn verify_chi(g: &FiniteGroup) -> Result<ChiReport, KError> {
    let m = MPairSet::new(g)?;
    let v = m.direct_image_v();
    let mut entries = Vec::new();
    let mut failures = 0;
    for &y in m.pairs() {
        let fs = m.fs_indicator(y);
        let gy = m.centralizer(y.class).sub.group.order() as i64;
        let chi_v = m.chi_pairing(y, &v);
        let expected = Cyclo::rational(
            1,
            BigRational::new((i64::from(fs) * gy).into(), (m.dim(y) as i64).into()),
        );
        let fourier_sum = (fs == 1).then(|| {
            let mut s = Cyclo::zero(1);
            for (k, &x) in m.pairs().iter().enumerate() {
                if !v.coeffs[k].is_zero() {
                    s = &s + &m.fourier_bracket(x, y).scale(&v.coeffs[k]);
                }
            }
            s
        });
        if chi_v != expected || fourier_sum.as_ref().is_some_and(|s| *s != Cyclo::int(1, 1)) {
            failures += 1;
        }
        entries.push(ChiEntry {
            pair: m.label(y),
            fs,
            chi_v,
            expected,
            fourier_sum,
        });
    }
    Ok(ChiReport {
        group: g.name().to_string(),
        entries,
        failures,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierReport {
    pub group: String,
    pub pairs: Vec<String>,
    pub matrix: Vec<Vec<Cyclo>>,
    pub symmetric: bool,
    /// Entries where the closed formula disagrees with the defining identity.
    pub closed_form_mismatches: usize,
}

pub fn fourier_matrix(g: &FiniteGroup) -> Result<FourierReport, KError> {
    let m = MPairSet::new(g)?;
    let ps = m.pairs();
    let matrix: Vec<Vec<Cyclo>> = ps
        .iter()
        .map(|&x| ps.iter().map(|&y| m.fourier_bracket(x, y)).collect())
        .collect();
    let n = ps.len();
    let symmetric = (0..n).all(|i| (0..n).all(|j| matrix[i][j] == matrix[j][i]));
    let mut closed_form_mismatches = 0;
    for (i, &x) in ps.iter().enumerate() {
        for (j, &y) in ps.iter().enumerate() {
            if m.fourier_bracket_closed(x, y) != matrix[i][j] {
                closed_form_mismatches += 1;
            }
        }
    }
    Ok(FourierReport {
        group: g.name().to_string(),
        pairs: ps.iter().map(|&p| m.label(p)).collect(),
        matrix,
        symmetric,
        closed_form_mismatches,
    })
}

#[cfg(test)]
mod tests;
