use std::collections::btree_map::{self, BTreeMap};
use std::ops::{Add, Neg, Sub};

use serde_json::{json, Value};

use crate::coxeter::{ElemId, GroupTable};
use crate::laurent::LaurentInt;

/// Finitely supported map from group elements to Laurent polynomials.
///
/// Used both for elements of the Hecke algebra (keys index `T_w`) and for
/// elements of the involution module (keys index `a_w`). Keys iterate in
/// (length, shortlex) order because element ids do.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LinComb {
    terms: BTreeMap<ElemId, LaurentInt>,
}

impl LinComb {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: ElemId) -> Self {
        Self::term(w, LaurentInt::one())
    }

    pub fn term(w: ElemId, c: LaurentInt) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ElemId, LaurentInt)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, w: ElemId) -> Option<&LaurentInt> {
        self.terms.get(&w)
    }

    /// Coefficient of `w`, zero when absent.
    pub fn coeff(&self, w: ElemId) -> LaurentInt {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, ElemId, LaurentInt> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, w: ElemId, c: LaurentInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb, c: &LaurentInt) {
        if c.is_zero() {
            return;
        }
        for (&w, v) in other.iter() {
            self.add_term(w, v * c);
        }
    }

    pub fn scale(&self, c: &LaurentInt) -> LinComb {
        if c.is_zero() {
            return LinComb::zero();
        }
        self.map_coeffs(|v| v * c)
    }

    /// Multiplies every coefficient by `u^k`.
    pub fn shift(&self, k: i32) -> LinComb {
        self.map_coeffs(|v| v.shift(k))
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&LaurentInt) -> LaurentInt) -> LinComb {
        LinComb::from_terms(self.terms.iter().map(|(&w, v)| (w, f(v))))
    }

    pub fn map_coeffs_with_key(
        &self,
        mut f: impl FnMut(ElemId, &LaurentInt) -> LaurentInt,
    ) -> LinComb {
        LinComb::from_terms(self.terms.iter().map(|(&w, v)| (w, f(w, v))))
    }

    /// Relabels basis elements; colliding keys are summed.
    pub fn map_keys(&self, mut f: impl FnMut(ElemId) -> ElemId) -> LinComb {
        LinComb::from_terms(self.terms.iter().map(|(&w, v)| (f(w), v.clone())))
    }

    /// `[{word, coeff}]` sorted by (length, shortlex).
    pub fn to_json(&self, table: &GroupTable) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&w, c)| json!({ "word": table.format(w), "coeff": c.to_string() }))
                .collect(),
        )
    }

    /// Human-readable form such as `u^-1*T[1] + T[e]`, highest id first.
    pub fn render(&self, table: &GroupTable, symbol: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .rev()
            .map(|(&w, c)| format!("({c})*{symbol}[{}]", table.format(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl FromIterator<(ElemId, LaurentInt)> for LinComb {
    fn from_iter<I: IntoIterator<Item = (ElemId, LaurentInt)>>(iter: I) -> Self {
        LinComb::from_terms(iter)
    }
}

impl<'a> IntoIterator for &'a LinComb {
    type Item = (&'a ElemId, &'a LaurentInt);
    type IntoIter = btree_map::Iter<'a, ElemId, LaurentInt>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl Add for &LinComb {
    type Output = LinComb;

    fn add(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (&w, c) in rhs.iter() {
            out.add_term(w, c.clone());
        }
        out
    }
}

impl Sub for &LinComb {
    type Output = LinComb;

    fn sub(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (&w, c) in rhs.iter() {
            out.add_term(w, -c);
        }
        out
    }
}

impl Neg for &LinComb {
    type Output = LinComb;

    fn neg(self) -> LinComb {
        self.map_coeffs(|c| -c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let a = LinComb::term(ElemId(1), "u + 1".parse().unwrap());
        let b = LinComb::term(ElemId(1), "u".parse().unwrap());
        let d = &a - &b;
        assert_eq!(d, LinComb::basis(ElemId(1)));
        assert!((&d - &d).is_zero());
        assert_eq!((&a + &(-&a)).len(), 0);
    }
}
