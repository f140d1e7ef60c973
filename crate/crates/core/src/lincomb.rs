//! Finite linear combinations of basis keys.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{CoeffField, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    field: CoeffField,
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero(field: CoeffField) -> Self {
        LinComb { field, terms: BTreeMap::new() }
    }

    pub fn basis(field: CoeffField, k: K) -> Self {
        let mut l = Self::zero(field);
        l.add_term(k, field.one());
        l
    }

    pub fn term(field: CoeffField, k: K, c: Scalar) -> Self {
        let mut l = Self::zero(field);
        l.add_term(k, c);
        l
    }

    pub fn field(&self) -> CoeffField {
        self.field
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

    pub fn add_term(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb<K>, c: &Scalar) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &LinComb<K>) {
        let one = self.field.one();
        self.add_scaled(other, &one);
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field);
        out.add_scaled(self, c);
        out
    }

    pub fn coeff(&self, k: &K) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_iter_terms(self) -> impl Iterator<Item = (K, Scalar)> {
        self.terms.into_iter()
    }

    /// Applies a linear map given on basis keys.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> LinComb<L>) -> LinComb<L> {
        let mut out = LinComb::zero(self.field);
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{k:?}")?;
        }
        Ok(())
    }
}
