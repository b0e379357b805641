use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector of a monomial. Entries are `u16`; sums are overflow-checked.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Exponent(SmallVec<[u16; 24]>);

impl Exponent {
    pub fn zero(n: usize) -> Exponent {
        Exponent(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, i: usize) -> Exponent {
        let mut e = Self::zero(n);
        e.0[i] = 1;
        e
    }

    pub fn from_slice(entries: &[u32]) -> Result<Exponent> {
        entries
            .iter()
            .map(|&x| u16::try_from(x).map_err(|_| Error::Overflow))
            .collect::<Result<SmallVec<_>>>()
            .map(Exponent)
    }

    pub fn from_u16(entries: &[u16]) -> Exponent {
        Exponent(SmallVec::from_slice(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u16] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: u16) {
        self.0[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    /// Grading-weighted degree.
    pub fn degree(&self, grading: &[u32]) -> u64 {
        debug_assert_eq!(grading.len(), self.len());
        self.0.iter().zip(grading).map(|(&x, &g)| x as u64 * g as u64).sum()
    }

    pub fn checked_add(&self, other: &Exponent) -> Result<Exponent> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<SmallVec<_>>>()
            .map(Exponent)
    }

    /// Sum of two exponents of the same length; panics on overflow.
    pub fn add(&self, other: &Exponent) -> Exponent {
        self.checked_add(other).expect("exponent addition")
    }

    pub fn add_assign(&mut self, other: &Exponent) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
    }

    /// `self - other` when `other` divides `self`.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(Exponent)
    }

    pub fn scale(&self, k: u16) -> Exponent {
        Exponent(self.0.iter().map(|&x| x.checked_mul(k).expect("exponent overflow")).collect())
    }

    /// Whether the monomial `self` divides `other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Integer dot product with a weight vector.
    pub fn dot(&self, w: &[i64]) -> i128 {
        debug_assert_eq!(w.len(), self.len());
        self.0.iter().zip(w).map(|(&x, &wi)| x as i128 * wi as i128).sum()
    }

    /// Exponent with length extended by zeros (new variables appended).
    pub fn padded(&self, n: usize) -> Exponent {
        let mut v = self.0.clone();
        v.resize(n.max(self.len()), 0);
        Exponent(v)
    }

    /// Applies a variable map: entry `i` moves to position `map[i]`.
    pub fn permuted(&self, map: &[usize], n: usize) -> Exponent {
        let mut out = Self::zero(n);
        for (i, &x) in self.0.iter().enumerate() {
            if x != 0 {
                out.0[map[i]] += x;
            }
        }
        out
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i)
    }

    pub fn iter(&self) -> impl Iterator<Item = u16> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl FromIterator<u16> for Exponent {
    fn from_iter<I: IntoIterator<Item = u16>>(iter: I) -> Self {
        Exponent(iter.into_iter().collect())
    }
}
