//! Dixon's method: simultaneous eigenvectors of the class-sum matrices
//! over `F_p` with `p = 1 mod exponent`, then exact values recovered from
//! eigenvalue multiplicities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::{Cyclo, FiniteGroup, GroupError, Subgroup};

pub const DEFAULT_ORDER_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct CharacterTable {
    /// Every value lives in `Q(zeta_exponent)`.
    pub exponent: u32,
    /// `(representative, class size)` in the group's class order.
    pub classes: Vec<(usize, usize)>,
    /// `chars[i][j]` is the value of the i-th character on class j.
    /// Index 0 is the trivial character.
    pub chars: Vec<Vec<Cyclo>>,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn dim(&self, i: usize) -> u64 {
        let d = self.chars[i][0].as_integer().expect("degree is an integer");
        u64::try_from(d).expect("degree fits")
    }

    pub fn value(&self, g: &FiniteGroup, i: usize, x: usize) -> &Cyclo {
        &self.chars[i][g.class_of(x)]
    }

    /// Index of the complex conjugate character.
    pub fn dual(&self, i: usize) -> usize {
        let c: Vec<Cyclo> = self.chars[i].iter().map(Cyclo::conj).collect();
        self.chars.iter().position(|r| *r == c).expect("table closed under duals")
    }

    /// `|G|^-1 sum_g chi(g^2)`.
    pub fn fs_indicator(&self, g: &FiniteGroup, i: usize) -> i8 {
        let mut s = Cyclo::zero(self.exponent);
        for x in 0..g.order() {
            s = &s + self.value(g, i, g.mul(x, x));
        }
        let q = s.as_rational().expect("indicator is rational")
            / BigRational::from_integer(g.order().into());
        let k = q.to_integer();
        assert!(q.is_integer() && (-1..=1).contains(&i64::try_from(&k).unwrap()));
        i64::try_from(k).unwrap() as i8
    }

    /// Exact row orthogonality with class weights.
    pub fn check_orthogonality(&self, g: &FiniteGroup) -> Result<(), GroupError> {
        let n = BigRational::from_integer(g.order().into());
        for (a, ra) in self.chars.iter().enumerate() {
            for (b, rb) in self.chars.iter().enumerate().skip(a) {
                let mut s = Cyclo::zero(self.exponent);
                for (j, &(_, size)) in self.classes.iter().enumerate() {
                    let t = &ra[j] * &rb[j].conj();
                    s = &s + &t.scale(&BigRational::from_integer(size.into()));
                }
                let expect = if a == b { n.clone() } else { BigRational::zero() };
                if s.as_rational() != Some(expect) {
                    return Err(GroupError::CharacterTable(format!(
                        "rows {a} and {b} are not orthogonal"
                    )));
                }
            }
        }
        for (j, &(_, size)) in self.classes.iter().enumerate() {
            let mut s = Cyclo::zero(self.exponent);
            for r in &self.chars {
                s = &s + &(&r[j] * &r[j].conj());
            }
            let expect = BigRational::new(g.order().into(), size.into());
            if s.as_rational() != Some(expect) {
                return Err(GroupError::CharacterTable(format!(
                    "column {j} fails column orthogonality"
                )));
            }
        }
        let sum: u64 = (0..self.len()).map(|i| self.dim(i).pow(2)).sum();
        if sum != g.order() as u64 {
            return Err(GroupError::CharacterTable("sum of squared degrees".into()));
        }
        Ok(())
    }
}

/// `<chi|_H, psi>_H` for `chi` a class function of the parent and `psi`
/// one of `H`, both given by their character tables.
pub fn restrict_mult(
    parent: &FiniteGroup,
    parent_table: &CharacterTable,
    chi: usize,
    sub: &Subgroup,
    sub_table: &CharacterTable,
    psi: usize,
) -> Result<u64, GroupError> {
    let h = &sub.group;
    let mut s = Cyclo::zero(1);
    for (local, &x) in sub.embed.iter().enumerate() {
        let t = parent_table.value(parent, chi, x) * &sub_table.value(h, psi, local).conj();
        s = &s + &t;
    }
    let q = s
        .as_rational()
        .map(|q| q / BigRational::from_integer(h.order().into()));
    match q {
        Some(q) if q.is_integer() && q >= BigRational::zero() => {
            Ok(u64::try_from(q.to_integer()).expect("fits"))
        }
        _ => Err(GroupError::NonIntegralMultiplicity(format!("{s}"))),
    }
}

/// `<chi|_H, 1>_H` for `H` given as parent element ids.
pub fn unit_mult(
    parent: &FiniteGroup,
    table: &CharacterTable,
    chi: usize,
    h: &[usize],
) -> Result<u64, GroupError> {
    let mut s = Cyclo::zero(table.exponent);
    for &x in h {
        s = &s + table.value(parent, chi, x);
    }
    let q = s.as_rational().map(|q| q / BigRational::from_integer(h.len().into()));
    match q {
        Some(q) if q.is_integer() && q >= BigRational::zero() => {
            Ok(u64::try_from(q.to_integer()).expect("fits"))
        }
        _ => Err(GroupError::NonIntegralMultiplicity(format!("{s}"))),
    }
}

pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable, GroupError> {
    character_table_with_limit(g, DEFAULT_ORDER_LIMIT)
}

pub fn character_table_with_limit(
    g: &FiniteGroup,
    limit: usize,
) -> Result<CharacterTable, GroupError> {
    if g.order() > limit {
        return Err(GroupError::LimitExceeded {
            order: g.order(),
            limit,
        });
    }
    let n_exp = g.exponent() as u64;
    let consts = class_constants(g);
    let mut p = next_prime_1_mod(n_exp, (2 * g.order() as u64).max(1000));
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..8 {
        for _ in 0..16 {
            if let Some(t) = attempt(g, &consts, p, &mut rng)? {
                t.check_orthogonality(g)?;
                return Ok(t);
            }
        }
        p = next_prime_1_mod(n_exp, p + 1);
    }
    Err(GroupError::CharacterTable("eigenvalues never separated".into()))
}

/// `a[j][k][l] = #{x in C_j : x^-1 z_l in C_k}` for a fixed `z_l in C_l`.
fn class_constants(g: &FiniteGroup) -> Vec<Vec<Vec<u64>>> {
    let r = g.classes().len();
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for (l, cl) in g.classes().iter().enumerate() {
        let z = cl.rep;
        for (j, cj) in g.classes().iter().enumerate() {
            for &x in &cj.elements {
                a[j][g.class_of(g.mul(g.inv(x), z))][l] += 1;
            }
        }
    }
    a
}

fn attempt(
    g: &FiniteGroup,
    consts: &[Vec<Vec<u64>>],
    p: u64,
    rng: &mut StdRng,
) -> Result<Option<CharacterTable>, GroupError> {
    let r = g.classes().len();
    let coeffs: Vec<u64> = (0..r).map(|_| rng.random_range(1..p)).collect();
    // M_j v = omega(C_j) v with (M_j)_{k,l} = a_{jkl}.
    let mut m = vec![vec![0u64; r]; r];
    for (j, &c) in coeffs.iter().enumerate() {
        for k in 0..r {
            for l in 0..r {
                m[k][l] = (m[k][l] + c * (consts[j][k][l] % p)) % p;
            }
        }
    }
    let cp = charpoly(&m, p);
    let roots: Vec<u64> = (0..p).filter(|&x| horner(&cp, x, p) == 0).collect();
    if roots.len() != r {
        return Ok(None);
    }
    let sizes: Vec<u64> = g.classes().iter().map(|c| c.size() as u64).collect();
    let inv_class: Vec<usize> = g.classes().iter().map(|c| g.class_of(g.inv(c.rep))).collect();
    let order = g.order() as u64;
    let mut modular: Vec<(u64, Vec<u64>)> = Vec::with_capacity(r);
    for &lam in &roots {
        let mut a = m.clone();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = (row[i] + p - lam) % p;
        }
        let Some(mut v) = kernel_vector(a, p) else {
            return Ok(None);
        };
        if v[0] == 0 {
            return Ok(None);
        }
        let s = inv_mod(v[0], p);
        v.iter_mut().for_each(|x| *x = *x * s % p);
        // sum_j omega_j omega_{j*} / |C_j| = |G| / d^2
        let mut t = 0;
        for j in 0..r {
            t = (t + v[j] * v[inv_class[j]] % p * inv_mod(sizes[j] % p, p)) % p;
        }
        if t == 0 {
            return Ok(None);
        }
        let d2 = order % p * inv_mod(t, p) % p;
        let Some(d) = (1..=order).take_while(|d| d * d <= order).find(|d| d * d % p == d2) else {
            return Ok(None);
        };
        let vals = (0..r)
            .map(|j| d % p * v[j] % p * inv_mod(sizes[j] % p, p) % p)
            .collect();
        modular.push((d, vals));
    }
    let n_exp = g.exponent();
    let z = root_of_unity(n_exp as u64, p);
    let mut chars = Vec::with_capacity(r);
    for (d, vals) in &modular {
        let mut row = Vec::with_capacity(r);
        for cl in g.classes() {
            let x = cl.rep;
            let o = g.elem_order(x) as u64;
            let zo = pow_mod(z, n_exp as u64 / o, p);
            let powers: Vec<u64> = (0..o).map(|i| vals[g.class_of(g.pow(x, i))]).collect();
            let inv_o = inv_mod(o % p, p);
            let mut m = vec![0i64; n_exp as usize];
            for k in 0..o {
                let mut s = 0;
                for (i, &chi) in powers.iter().enumerate() {
                    let e = (o - (i as u64 * k) % o) % o;
                    s = (s + chi * pow_mod(zo, e, p)) % p;
                }
                let mk = s * inv_o % p;
                if mk > *d {
                    return Ok(None);
                }
                m[(k * (n_exp as u64 / o)) as usize] = mk as i64;
            }
            row.push(Cyclo::from_powers(n_exp, &m));
        }
        chars.push(row);
    }
    let trivial: Vec<Cyclo> = vec![Cyclo::int(n_exp, 1); r];
    chars.sort_by_key(|row| {
        (
            row != &trivial,
            row[0].as_integer().unwrap_or_else(BigInt::zero),
            row.iter().map(|c| format!("{c}")).collect::<Vec<_>>(),
        )
    });
    Ok(Some(CharacterTable {
        exponent: n_exp,
        classes: g.classes().iter().map(|c| (c.rep, c.size())).collect(),
        chars,
    }))
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub(crate) fn next_prime_1_mod(n: u64, at_least: u64) -> u64 {
    let mut p = (at_least / n + 1) * n + 1;
    while !is_prime(p) {
        p += n;
    }
    p
}

/// A primitive `n`-th root of unity mod `p`, `n | p - 1`.
pub(crate) fn root_of_unity(n: u64, p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    let g = (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("primitive root exists");
    pow_mod(g, (p - 1) / n, p)
}

fn horner(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Characteristic polynomial via Hessenberg reduction; lowest degree first.
fn charpoly(m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = m.len();
    let mut h: Vec<Vec<u64>> = m.to_vec();
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = (k + 1..n).find(|&i| h[i][k] != 0) else {
            continue;
        };
        if piv != k + 1 {
            h.swap(piv, k + 1);
            for row in h.iter_mut() {
                row.swap(piv, k + 1);
            }
        }
        let inv = inv_mod(h[k + 1][k], p);
        for i in k + 2..n {
            let f = h[i][k] * inv % p;
            if f == 0 {
                continue;
            }
            for j in 0..n {
                h[i][j] = (h[i][j] + p - f * h[k + 1][j] % p) % p;
            }
            for row in h.iter_mut() {
                row[k + 1] = (row[k + 1] + f * row[i]) % p;
            }
        }
    }
    // polys[k] = charpoly of the leading k x k block.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        // (x - h[k][k]) * polys[k]
        let mut next = vec![0u64; k + 2];
        for (i, &c) in polys[k].iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + p - h[k][k] * c % p) % p;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = prod * h[i + 1][i] % p;
            let coef = prod * h[i][k] % p;
            for (t, &c) in polys[i].iter().enumerate() {
                next[t] = (next[t] + p - coef * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// A nonzero vector in the kernel of `a`, if the kernel is one-dimensional.
fn kernel_vector(mut a: Vec<Vec<u64>>, p: u64) -> Option<Vec<u64>> {
    let n = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = inv_mod(a[row][col], p);
        a[row].iter_mut().for_each(|x| *x = *x * inv % p);
        for i in 0..n {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..n {
                    a[i][j] = (a[i][j] + p - f * a[row][j] % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![0u64; n];
    v[free] = 1;
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = (p - a[r][free]) % p;
    }
    Some(v)
}
