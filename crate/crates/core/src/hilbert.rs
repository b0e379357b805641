//! Hilbert functions of subalgebras and of monomial algebras.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank_i64, SparseEchelon};
use crate::poly::{Exponent, MonomialOrder, Polynomial};
use crate::rational::Rat;

/// Which degree indexes the reported values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// Degree in the ambient polynomial ring.
    Ambient,
    /// Ambient degree divided by the gcd of the generator degrees.
    Normalized,
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grading::Ambient => "ambient",
            Grading::Normalized => "normalized",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub grading: Grading,
    /// `values[k]` is the dimension of the degree-`k` component.
    pub values: Vec<u64>,
    pub dim: Option<usize>,
    /// Numerator of the series over `(1-z)^dim`; `None` when the computed
    /// range is too short to determine it.
    pub numerator: Option<Vec<i64>>,
}

impl HilbertData {
    pub fn new(grading: Grading, values: Vec<u64>) -> HilbertData {
        HilbertData { grading, values, dim: None, numerator: None }
    }

    /// Attaches a Krull dimension and derives the h-vector from it.
    pub fn with_dim(mut self, dim: usize) -> HilbertData {
        self.numerator = h_vector(&self.values, dim);
        self.dim = Some(dim);
        self
    }

    pub fn k_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// Generator weights and the divisor applied to ambient degrees.
fn weights(degrees: &[u64], grading: Grading) -> (Vec<u64>, u64) {
    let g = match grading {
        Grading::Ambient => 1,
        Grading::Normalized => degrees.iter().fold(0u64, |acc, &d| acc.gcd(&d)).max(1),
    };
    (degrees.iter().map(|d| d / g).collect(), g)
}

/// Dimension of the graded pieces of the monoid algebra `K[T]`, by level-wise
/// enumeration of distinct exponent sums.
pub fn semigroup_hilbert(t: &[Exponent], var_degrees: &[u32], k_max: usize, grading: Grading) -> HilbertData {
    let degrees: Vec<u64> = t.iter().map(|e| e.degree(var_degrees)).collect();
    let (w, _) = weights(&degrees, grading);
    let n = var_degrees.len();
    let mut levels: Vec<FxHashSet<Exponent>> = Vec::with_capacity(k_max + 1);
    let mut zero = FxHashSet::default();
    zero.insert(Exponent::zero(n));
    levels.push(zero);
    for k in 1..=k_max {
        let parts: Vec<Vec<Exponent>> = t
            .par_iter()
            .zip(w.par_iter())
            .filter(|(_, &wu)| wu as usize <= k && wu > 0)
            .map(|(e, &wu)| levels[k - wu as usize].iter().map(|x| x.add(e)).collect())
            .collect();
        let mut level = FxHashSet::default();
        for part in parts {
            level.extend(part);
        }
        levels.push(level);
    }
    HilbertData::new(grading, levels.iter().map(|l| l.len() as u64).collect())
}

/// Krull dimension of `K[T]`: the rank of the exponent matrix.
pub fn krull_dim_monomial(t: &[Exponent]) -> usize {
    let rows: Vec<Vec<i64>> = t.iter().map(|e| e.iter().map(i64::from).collect()).collect();
    rank_i64(&rows)
}

/// Coefficients of `(1-z)^dim * sum H(k) z^k` up to the computed range.
/// Returns `None` unless the last three computed coefficients vanish, which
/// is taken as evidence that the numerator has stabilized.
pub fn h_vector(values: &[u64], dim: usize) -> Option<Vec<i64>> {
    let coeffs = series_times_one_minus_z(values, dim);
    let k = coeffs.len();
    if k < 4 || coeffs[k - 3..].iter().any(|&c| c != 0) {
        return None;
    }
    let mut out = coeffs;
    while out.last() == Some(&0) {
        out.pop();
    }
    Some(out)
}

fn series_times_one_minus_z(values: &[u64], dim: usize) -> Vec<i64> {
    let mut c: Vec<i128> = values.iter().map(|&v| v as i128).collect();
    for _ in 0..dim {
        for k in (1..c.len()).rev() {
            c[k] -= c[k - 1];
        }
    }
    c.into_iter().map(|x| x as i64).collect()
}

/// Expands `numerator / (1-z)^dim` up to degree `k_max`.
pub fn expand_series(numerator: &[i64], dim: usize, k_max: usize) -> Vec<i128> {
    let mut c: Vec<i128> = (0..=k_max).map(|k| numerator.get(k).copied().unwrap_or(0) as i128).collect();
    for _ in 0..dim {
        for k in 1..c.len() {
            c[k] += c[k - 1];
        }
    }
    c
}

#[derive(Clone)]
struct Key {
    e: Exponent,
    order: Arc<MonomialOrder>,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&self.e, &other.e)
    }
}

/// Result of [`subalgebra_hilbert_with_initials`]: values and, per degree,
/// the initial monomials of the graded piece.
pub struct SubalgebraPieces {
    pub data: HilbertData,
    pub initials: Vec<Vec<Exponent>>,
}

/// Dimensions `H(K[F], k)` by exact Gaussian elimination, using
/// `A_k = sum_u f_u A_{k - w_u}`.
pub fn subalgebra_hilbert(
    gens: &[Polynomial],
    k_max: usize,
    order: &MonomialOrder,
    grading: Grading,
) -> Result<HilbertData> {
    Ok(subalgebra_hilbert_with_initials(gens, k_max, order, grading)?.data)
}

pub fn subalgebra_hilbert_with_initials(
    gens: &[Polynomial],
    k_max: usize,
    order: &MonomialOrder,
    grading: Grading,
) -> Result<SubalgebraPieces> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => {
            let mut values = vec![0; k_max + 1];
            values[0] = 1;
            return Ok(SubalgebraPieces { data: HilbertData::new(grading, values), initials: vec![vec![]; k_max + 1] });
        }
    };
    let mut degrees = Vec::with_capacity(gens.len());
    for (index, g) in gens.iter().enumerate() {
        if g.ring() != &ring {
            return Err(Error::RingMismatch);
        }
        match g.homogeneous_degree() {
            Some(d) if d > 0 => degrees.push(d),
            _ => return Err(Error::Inhomogeneous { index }),
        }
    }
    let (w, _) = weights(&degrees, grading);
    let order = Arc::new(order.clone());
    let field = ring.field();
    let to_row = |p: &Polynomial| -> BTreeMap<Key, Rat> {
        p.terms().iter().map(|(e, c)| (Key { e: e.clone(), order: order.clone() }, c.clone())).collect()
    };
    let mut bases: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(&ring)]];
    let mut initials: Vec<Vec<Exponent>> = vec![vec![Exponent::zero(ring.nvars())]];
    for k in 1..=k_max {
        let products: Vec<Polynomial> = gens
            .par_iter()
            .zip(w.par_iter())
            .filter(|(_, &wu)| wu as usize <= k)
            .flat_map_iter(|(g, &wu)| bases[k - wu as usize].iter().map(move |b| b * g))
            .collect();
        let mut echelon: SparseEchelon<Key> = SparseEchelon::new(field);
        for p in &products {
            echelon.insert(to_row(p));
        }
        let basis = echelon_polys(&echelon, &ring);
        initials.push(echelon.pivots().map(|k| k.e.clone()).collect());
        bases.push(basis);
    }
    let values = bases.iter().map(|b| b.len() as u64).collect();
    Ok(SubalgebraPieces { data: HilbertData::new(grading, values), initials })
}

fn echelon_polys(e: &SparseEchelon<Key>, ring: &Arc<crate::poly::RingContext>) -> Vec<Polynomial> {
    e.rows()
        .map(|row| {
            Polynomial::from_unsorted(ring, row.iter().map(|(k, c)| (k.e.clone(), c.clone())).collect())
        })
        .collect()
}
