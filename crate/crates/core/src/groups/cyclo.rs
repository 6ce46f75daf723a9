//! Exact arithmetic in `Q(zeta_n)`, power basis modulo the cyclotomic
//! polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients of `Phi_n`, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] -= c * bi;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Element of `Q(zeta_n)`.
#[derive(Clone)]
pub struct Cyclo {
    n: u32,
    c: Vec<BigRational>,
}

impl Cyclo {
    pub fn degree_of(n: u32) -> usize {
        cyclotomic_poly(n).len() - 1
    }

    pub fn zero(n: u32) -> Self {
        Self {
            n,
            c: vec![BigRational::zero(); Self::degree_of(n)],
        }
    }

    pub fn rational(n: u32, q: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = q;
        z
    }

    pub fn int(n: u32, k: i64) -> Self {
        Self::rational(n, BigRational::from_integer(k.into()))
    }

    /// `zeta_n^k`.
    pub fn root(n: u32, k: i64) -> Self {
        let mut v = vec![BigRational::zero(); n as usize];
        v[k.rem_euclid(n as i64) as usize] = BigRational::one();
        Self::reduce(n, v)
    }

    /// `sum_k m_k zeta_n^k` for a vector of length `n`.
    pub fn from_powers(n: u32, m: &[i64]) -> Self {
        assert_eq!(m.len(), n as usize);
        Self::reduce(
            n,
            m.iter().map(|&k| BigRational::from_integer(k.into())).collect(),
        )
    }

    fn reduce(n: u32, mut v: Vec<BigRational>) -> Self {
        let phi = cyclotomic_poly(n);
        let d = phi.len() - 1;
        for k in (d..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[k]);
            for (i, &pi) in phi[..d].iter().enumerate() {
                if pi != 0 {
                    v[k - d + i] -= &c * BigRational::from_integer(pi.into());
                }
            }
        }
        v.resize(d, BigRational::zero());
        Self { n, c: v }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.c[1..]
            .iter()
            .all(|x| x.is_zero())
            .then(|| self.c[0].clone())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Re-expresses in `Q(zeta_m)`; `n` must divide `m`.
    pub fn lift(&self, m: u32) -> Self {
        assert!(m % self.n == 0, "cannot lift Q(zeta_{}) into Q(zeta_{m})", self.n);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let mut v = vec![BigRational::zero(); m as usize];
        for (k, c) in self.c.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Self::reduce(m, v)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.n == b.n {
            return (a.clone(), b.clone());
        }
        let m = a.n.lcm(&b.n);
        (a.lift(m), b.lift(m))
    }

    /// Complex conjugation, `zeta -> zeta^-1`.
    pub fn conj(&self) -> Self {
        let n = self.n as usize;
        let mut v = vec![BigRational::zero(); n];
        for (k, c) in self.c.iter().enumerate() {
            v[(n - k) % n] += c;
        }
        Self::reduce(self.n, v)
    }

    /// Galois action `zeta -> zeta^j`, `gcd(j, n) = 1`.
    pub fn galois(&self, j: u32) -> Self {
        let n = self.n as usize;
        let mut v = vec![BigRational::zero(); n];
        for (k, c) in self.c.iter().enumerate() {
            v[(k * j as usize) % n] += c;
        }
        Self::reduce(self.n, v)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            n: self.n,
            c: self.c.iter().map(|x| x * q).collect(),
        }
    }

    /// Image under `zeta_n -> z` in `F_p`; `None` if a denominator
    /// vanishes mod `p`.
    pub fn eval_mod(&self, z: u64, p: u64) -> Option<u64> {
        use num_traits::ToPrimitive;
        let pb = BigInt::from(p);
        let mut acc = 0u64;
        let mut zk = 1u64;
        for c in &self.c {
            let num = c.numer().mod_floor(&pb).to_u64()?;
            let den = c.denom().mod_floor(&pb).to_u64()?;
            if den == 0 {
                return None;
            }
            let t = num * super::chartable::inv_mod(den, p) % p;
            acc = (acc + t * zk) % p;
            zk = zk * z % p;
        }
        Some(acc)
    }

    pub fn to_complex(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.c.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * k as f64 / self.n as f64;
            let c = c.to_f64().unwrap_or(f64::NAN);
            re += c * a.cos();
            im += c * a.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        let (a, b) = Cyclo::common(self, other);
        a.c == b.c
    }
}

impl Eq for Cyclo {}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        let (a, b) = Cyclo::common(self, rhs);
        Cyclo {
            n: a.n,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        self + &(-rhs)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            n: self.n,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        let (a, b) = Cyclo::common(self, rhs);
        let mut v = vec![BigRational::zero(); (2 * a.c.len()).saturating_sub(1).max(1)];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        Cyclo::reduce(a.n, v)
    }
}

impl fmt::Display for Cyclo {
    /// `z<n>` stands for `exp(2 pi i / n)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    write!(f, "z{}", self.n)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Cyclo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
