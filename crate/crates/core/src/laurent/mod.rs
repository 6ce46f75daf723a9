//! Exact arithmetic in the Laurent polynomial ring `Z[u, u^-1]`.
//!
//! [`LaurentInt`] is stored densely: a lowest exponent plus a coefficient
//! vector with both ends trimmed, so equality is structural equality.
//! Coefficients are arbitrary precision.
//!
//! The text rendering (see [`LaurentInt`]'s `Display`) is the canonical form
//! used in every JSON artifact: terms in descending exponent order joined by
//! `" + "` / `" - "`, each term `c*u^e`, with the coefficient omitted when it
//! is 1, `u^1` written `u`, the constant term written bare, and the zero
//! polynomial written `0`. Examples: `u^2 - u - 1`, `1 - 2*u^-3`, `u + u^-1`.

mod matrix;

pub use matrix::PolyMatrix;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("positive exponent u^{0} present where Z[u^-1] was required")]
    PositiveExponentPresent(i32),
    #[error("division is not exact")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("evaluation point must be nonzero")]
    ZeroEvaluationPoint,
    #[error("cannot parse Laurent polynomial {0:?}")]
    Parse(String),
}

/// An element of `Z[u, u^-1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentInt {
    /// Exponent of `coeffs[0]`. Zero for the zero polynomial.
    low: i32,
    /// Empty for zero; otherwise first and last entries are nonzero.
    coeffs: Vec<BigInt>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The indeterminate `u`.
    pub fn u() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * u^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i32) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            low: exp,
            coeffs: vec![c],
        }
    }

    /// `u^exp`.
    pub fn u_pow(exp: i32) -> Self {
        Self::monomial(1, exp)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut acc = Self::zero();
        for (e, c) in terms {
            acc += &Self::monomial(c, e);
        }
        acc
    }

    /// Coefficients `c_0 + c_1 u + ...` starting at `u^low`.
    pub fn from_coeffs(low: i32, coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { low, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
            return;
        }
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i32;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        let idx = exp as i64 - self.low as i64;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Coefficient of the highest power of `u`.
    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    /// True when no negative exponents occur, i.e. the element lies in `Z[u]`.
    pub fn in_z_u(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    /// True when no positive exponents occur, i.e. the element lies in `Z[u^-1]`.
    pub fn in_z_u_inv(&self) -> bool {
        self.degree().is_none_or(|d| d <= 0)
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The ring involution `u^n -> (-u)^(-n)`.
    pub fn bar(&self) -> Self {
        let Some(deg) = self.degree() else {
            return Self::zero();
        };
        let coeffs = (0..self.coeffs.len())
            .rev()
            .map(|i| {
                let e = self.low + i as i32;
                let c = &self.coeffs[i];
                if e.rem_euclid(2) == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        Self { low: -deg, coeffs }
    }

    /// The substitution `u -> u^-1` (no sign twist). This is the involution
    /// used for Kazhdan-Lusztig bar invariance.
    pub fn invert_variable(&self) -> Self {
        let Some(deg) = self.degree() else {
            return Self::zero();
        };
        Self {
            low: -deg,
            coeffs: self.coeffs.iter().rev().cloned().collect(),
        }
    }

    /// Value at `u^-1 = 0` of an element of `Z[u^-1]`: its constant term.
    pub fn const_term_at_u_inv_zero(&self) -> Result<BigInt, LaurentError> {
        match self.degree() {
            Some(d) if d > 0 => Err(LaurentError::PositiveExponentPresent(d)),
            _ => Ok(self.coeff(0)),
        }
    }

    /// Exact quotient `self / divisor` in `Z[u, u^-1]`.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Both operands are u^low times a polynomial with nonzero constant
        // term; long division from the top degree on those polynomials.
        let b = &divisor.coeffs;
        let blead = b.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < b.len() {
            return Err(LaurentError::NotDivisible);
        }
        let qlen = rem.len() - b.len() + 1;
        let mut q = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + b.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(blead);
            if !r.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            for (j, bj) in b.iter().enumerate() {
                rem[k + j] -= &qc * bj;
            }
            q[k] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(LaurentError::NotDivisible);
        }
        Ok(Self::from_coeffs(self.low - divisor.low, q))
    }

    /// Exact value at `u = lambda`.
    pub fn eval_rational(&self, lambda: &BigRational) -> Result<BigRational, LaurentError> {
        if lambda.is_zero() {
            return Err(LaurentError::ZeroEvaluationPoint);
        }
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda + BigRational::from_integer(c.clone());
        }
        Ok(acc * pow_rational(lambda, self.low))
    }

    /// Value at `u = lambda` modulo the prime `p` (`lambda` nonzero mod `p`).
    pub fn eval_mod(&self, lambda: u64, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            let cm = c.mod_floor(&pb).to_u64().unwrap();
            acc = ((acc as u128 * lambda as u128 + cm as u128) % p as u128) as u64;
        }
        let base = if self.low >= 0 {
            lambda
        } else {
            mod_inverse(lambda, p)
        };
        mul_mod(acc, pow_mod(base, self.low.unsigned_abs() as u64, p), p)
    }

    /// Integer value at `u = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Integer value at `u = 0` of an element of `Z[u]`.
    pub fn eval_at_zero(&self) -> Option<BigInt> {
        self.in_z_u().then(|| self.coeff(0))
    }

    fn add_scaled(&mut self, other: &Self, sign: bool) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = if sign { other.clone() } else { -other };
            return;
        }
        let low = self.low.min(other.low);
        let high = self.degree().unwrap().max(other.degree().unwrap());
        let len = (high - low + 1) as usize;
        if self.low > low {
            let pad = (self.low - low) as usize;
            let mut v = vec![BigInt::zero(); pad];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.low = low;
        }
        self.coeffs.resize(len, BigInt::zero());
        let off = (other.low - low) as usize;
        for (i, c) in other.coeffs.iter().enumerate() {
            if sign {
                self.coeffs[off + i] += c;
            } else {
                self.coeffs[off + i] -= c;
            }
        }
        self.normalize();
    }
}

fn pow_rational(x: &BigRational, e: i32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl AddAssign<&LaurentInt> for LaurentInt {
    fn add_assign(&mut self, rhs: &LaurentInt) {
        self.add_scaled(rhs, true);
    }
}

impl SubAssign<&LaurentInt> for LaurentInt {
    fn sub_assign(&mut self, rhs: &LaurentInt) {
        self.add_scaled(rhs, false);
    }
}

impl MulAssign<&LaurentInt> for LaurentInt {
    fn mul_assign(&mut self, rhs: &LaurentInt) {
        *self = &*self * rhs;
    }
}

impl Add for &LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: &LaurentInt) -> LaurentInt {
        if self.is_zero() || rhs.is_zero() {
            return LaurentInt::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentInt::from_coeffs(self.low + rhs.low, coeffs)
    }
}

impl Neg for &LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentInt {
            type Output = LaurentInt;
            fn $m(self, rhs: LaurentInt) -> LaurentInt {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentInt> for LaurentInt {
            type Output = LaurentInt;
            fn $m(self, rhs: &LaurentInt) -> LaurentInt {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentInt> for &LaurentInt {
            type Output = LaurentInt;
            fn $m(self, rhs: LaurentInt) -> LaurentInt {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        -&self
    }
}

impl From<i64> for LaurentInt {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for LaurentInt {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl PartialOrd for LaurentInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order (by degree, then coefficients from the top);
/// used only to make collections deterministic.
impl Ord for LaurentInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
            .then_with(|| other.low.cmp(&self.low))
    }
}

impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if e == 1 {
                f.write_str("u")?;
            } else {
                write!(f, "u^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentInt({self})")
    }
}

impl FromStr for LaurentInt {
    type Err = LaurentError;

    /// Parses the canonical rendering. Terms may appear in any order and
    /// whitespace is ignored, so `2*u^-1+1` and `1 + 2*u^-1` both parse.
    fn from_str(s: &str) -> Result<Self, LaurentError> {
        let err = || LaurentError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // Split into signed terms; a '-' right after '^' belongs to an exponent.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else if prev.is_some() {
                    return Err(err());
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if cur.is_empty() {
            return Err(err());
        }
        terms.push((neg, cur));

        let mut acc = LaurentInt::zero();
        for (neg, body) in terms {
            let (coeff, mono) = match body.split_once('*') {
                Some((c, m)) => (c.parse::<BigInt>().map_err(|_| err())?, Some(m)),
                None if body.starts_with('u') => (BigInt::one(), Some(body.as_str())),
                None => (body.parse::<BigInt>().map_err(|_| err())?, None),
            };
            let exp = match mono {
                None => 0,
                Some("u") => 1,
                Some(m) => m
                    .strip_prefix("u^")
                    .and_then(|e| e.parse::<i32>().ok())
                    .ok_or_else(err)?,
            };
            let c = if neg { -coeff } else { coeff };
            acc += &LaurentInt::monomial(c, exp);
        }
        Ok(acc)
    }
}

impl serde::Serialize for LaurentInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for LaurentInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentInt {
        s.parse().unwrap()
    }

    #[test]
    fn ring_examples() {
        let u = LaurentInt::u();
        let one = LaurentInt::one();
        assert_eq!(&(&u + &one) * &(&u - &one), p("u^2 - 1"));
        assert_eq!(&u + &LaurentInt::zero(), u);
        let ui = LaurentInt::u_pow(-1);
        let sq = (&ui + &one).pow(2);
        assert_eq!(sq, p("u^-2 + 2*u^-1 + 1"));
        assert_eq!((&u - &u), LaurentInt::zero());
        assert!((&u - &u).is_zero());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(LaurentInt::u().bar(), p("-u^-1"));
        assert_eq!(LaurentInt::one().bar(), LaurentInt::one());
        assert_eq!(p("u^2 - 1").bar(), p("u^-2 - 1"));
    }

    #[test]
    fn const_term_examples() {
        assert_eq!(p("1 - u^-1").const_term_at_u_inv_zero().unwrap(), BigInt::one());
        assert_eq!(p("u^-3").const_term_at_u_inv_zero().unwrap(), BigInt::zero());
        assert_eq!(
            p("u + 1").const_term_at_u_inv_zero(),
            Err(LaurentError::PositiveExponentPresent(1))
        );
    }

    #[test]
    fn divide_examples() {
        let um1 = p("u - 1");
        assert_eq!(p("u^2 - 1").divide_exact(&um1).unwrap(), p("u + 1"));
        assert_eq!(LaurentInt::zero().divide_exact(&um1).unwrap(), LaurentInt::zero());
        let a = &um1 * &LaurentInt::u_pow(-1);
        assert_eq!(a.divide_exact(&um1).unwrap(), p("u^-1"));
        assert_eq!(p("u^2 + 1").divide_exact(&um1), Err(LaurentError::NotDivisible));
        assert_eq!(p("u").divide_exact(&LaurentInt::zero()), Err(LaurentError::DivisionByZero));
        // non-monic divisor
        assert_eq!(p("2*u^2 - 2").divide_exact(&p("2*u + 2")).unwrap(), p("u - 1"));
        assert_eq!(p("u^2 - 1").divide_exact(&p("2*u + 2")), Err(LaurentError::NotDivisible));
    }

    #[test]
    fn eval_examples() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(p("u + u^-1").eval_rational(&r(2, 1)).unwrap(), r(5, 2));
        assert_eq!(p("u - 1").eval_rational(&r(1, 1)).unwrap(), r(0, 1));
        assert_eq!(p("u^2 - u - 1").eval_rational(&r(-1, 1)).unwrap(), r(1, 1));
        assert_eq!(
            p("u").eval_rational(&r(0, 1)),
            Err(LaurentError::ZeroEvaluationPoint)
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(p("u^2 - u - 1").to_string(), "u^2 - u - 1");
        assert_eq!(LaurentInt::zero().to_string(), "0");
        assert_eq!(LaurentInt::from_terms([(-3, -2), (0, 1)]).to_string(), "1 - 2*u^-3");
        assert_eq!(LaurentInt::from_terms([(1, 1), (-1, 1)]).to_string(), "u + u^-1");
        assert_eq!(LaurentInt::constant(-7).to_string(), "-7");
        assert!("u^".parse::<LaurentInt>().is_err());
        assert!("".parse::<LaurentInt>().is_err());
        assert!("1 + + u".parse::<LaurentInt>().is_err());
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentInt> {
        (-4i32..4, prop::collection::vec(-5i64..6, 0..6)).prop_map(|(low, cs)| {
            LaurentInt::from_coeffs(low, cs.into_iter().map(BigInt::from).collect())
        })
    }

    proptest! {
        #[test]
        fn bar_is_involutive_ring_map(a in arb_laurent(), b in arb_laurent()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        }

        #[test]
        fn division_inverts_multiplication(a in arb_laurent(), b in arb_laurent()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
        }

        #[test]
        fn const_term_is_additive(a in arb_laurent(), b in arb_laurent()) {
            let a = a.shift(-a.degree().unwrap_or(0));
            let b = b.shift(-b.degree().unwrap_or(0));
            let sum = (&a + &b).const_term_at_u_inv_zero().unwrap();
            prop_assert_eq!(sum, a.const_term_at_u_inv_zero().unwrap() + b.const_term_at_u_inv_zero().unwrap());
        }

        #[test]
        fn rendering_round_trips(a in arb_laurent()) {
            prop_assert_eq!(a.to_string().parse::<LaurentInt>().unwrap(), a);
        }

        #[test]
        fn ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &LaurentInt::one(), a.clone());
        }
    }
}
