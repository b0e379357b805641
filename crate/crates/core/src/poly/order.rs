//! Monomial orders on exponent vectors.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Exponent;

/// A monomial order.
///
/// Variable permutations list variables from largest to smallest, so
/// `Lex(vec![2, 0, 1])` means `x2 > x0 > x1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex(Vec<usize>),
    /// Total degree first, ties broken reverse-lexicographically along the permutation.
    DegRevLex(Vec<usize>),
    /// Nonnegative weight first, then the tiebreak order.
    Weight {
        weights: Vec<i64>,
        tiebreak: Box<MonomialOrder>,
    },
}

fn check_permutation(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::InvalidOrder(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

impl MonomialOrder {
    pub fn lex(n: usize) -> MonomialOrder {
        MonomialOrder::Lex((0..n).collect())
    }

    pub fn lex_with(perm: Vec<usize>) -> Result<MonomialOrder> {
        check_permutation(&perm)?;
        Ok(MonomialOrder::Lex(perm))
    }

    pub fn degrevlex(n: usize) -> MonomialOrder {
        MonomialOrder::DegRevLex((0..n).collect())
    }

    pub fn degrevlex_with(perm: Vec<usize>) -> Result<MonomialOrder> {
        check_permutation(&perm)?;
        Ok(MonomialOrder::DegRevLex(perm))
    }

    /// Weight order refined by `tiebreak`. Weights must be nonnegative so the
    /// result is a well-order.
    pub fn weight(weights: Vec<i64>, tiebreak: MonomialOrder) -> Result<MonomialOrder> {
        if weights.len() != tiebreak.nvars() {
            return Err(Error::LengthMismatch { expected: tiebreak.nvars(), got: weights.len() });
        }
        if weights.iter().any(|&w| w < 0) {
            return Err(Error::InvalidOrder("weights must be nonnegative".into()));
        }
        Ok(MonomialOrder::Weight { weights, tiebreak: Box::new(tiebreak) })
    }

    pub fn nvars(&self) -> usize {
        match self {
            MonomialOrder::Lex(p) | MonomialOrder::DegRevLex(p) => p.len(),
            MonomialOrder::Weight { weights, .. } => weights.len(),
        }
    }

    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Result<Ordering> {
        let n = self.nvars();
        for e in [a, b] {
            if e.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: e.len() });
            }
        }
        Ok(self.cmp(a, b))
    }

    /// Comparison without length checks, for inner loops.
    pub fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        match self {
            MonomialOrder::Lex(perm) => {
                for &i in perm {
                    match a.get(i).cmp(&b.get(i)) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::DegRevLex(perm) => {
                match a.total_degree().cmp(&b.total_degree()) {
                    Ordering::Equal => {}
                    other => return other,
                }
                for &i in perm.iter().rev() {
                    match a.get(i).cmp(&b.get(i)) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Weight { weights, tiebreak } => {
                match a.dot(weights).cmp(&b.dot(weights)) {
                    Ordering::Equal => tiebreak.cmp(a, b),
                    other => other,
                }
            }
        }
    }

    pub fn max<'a>(&self, a: &'a Exponent, b: &'a Exponent) -> &'a Exponent {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    /// Block elimination order on `n_first + n_rest` variables: every monomial
    /// involving one of the first `n_first` variables is larger than every
    /// monomial that does not. Within the blocks the order is graded by
    /// `rest_degrees` on the second block, then degrevlex.
    pub fn elimination(n_first: usize, rest_degrees: &[u32]) -> MonomialOrder {
        let n = n_first + rest_degrees.len();
        let block: Vec<i64> = (0..n).map(|i| i64::from(i < n_first)).collect();
        let graded: Vec<i64> = (0..n)
            .map(|i| if i < n_first { 1 } else { rest_degrees[i - n_first] as i64 })
            .collect();
        let inner = MonomialOrder::weight(graded, MonomialOrder::degrevlex(n)).expect("valid weights");
        MonomialOrder::weight(block, inner).expect("valid weights")
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex(p) => write!(f, "lex{p:?}"),
            MonomialOrder::DegRevLex(p) => write!(f, "degrevlex{p:?}"),
            MonomialOrder::Weight { weights, tiebreak } => write!(f, "weight{weights:?}>{tiebreak}"),
        }
    }
}
