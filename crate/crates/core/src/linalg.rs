//! Exact linear algebra over the rationals and prime fields.

use std::collections::BTreeMap;

use crate::poly::Field;
use crate::rational::Rat;

/// Rank over the rationals of an integer matrix given by rows.
pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect();
    rank_rat(&mut m)
}

/// Rank of a dense rational matrix; the matrix is destroyed.
pub fn rank_rat(m: &mut [Vec<Rat>]) -> usize {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip();
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..ncols {
                if !m[rank][c].is_zero() {
                    let d = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &d;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Incremental row echelon form over a field for sparse vectors with ordered
/// column keys. Pivots are the largest keys of the stored rows.
pub struct SparseEchelon<K: Ord + Clone> {
    field: Field,
    rows: BTreeMap<K, BTreeMap<K, Rat>>,
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new(field: Field) -> Self {
        SparseEchelon { field, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot keys of the stored rows, in increasing order.
    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Stored rows in increasing pivot order; each has pivot coefficient 1.
    pub fn rows(&self) -> impl Iterator<Item = &BTreeMap<K, Rat>> {
        self.rows.values()
    }

    /// Reduces `v` against the stored rows; stores it and returns its pivot
    /// when it is independent.
    pub fn insert(&mut self, v: BTreeMap<K, Rat>) -> Option<K> {
        let mut v = v;
        v.retain(|_, c| !c.is_zero());
        loop {
            let (key, coeff) = match v.iter().next_back() {
                Some((k, c)) => (k.clone(), c.clone()),
                None => return None,
            };
            match self.rows.get(&key) {
                Some(row) => {
                    // rows are normalized with pivot coefficient 1
                    for (k, c) in row {
                        let d = self.field.mul(&coeff, c);
                        let entry = v.entry(k.clone()).or_insert(Rat::ZERO);
                        *entry = self.field.sub(entry, &d);
                        if entry.is_zero() {
                            v.remove(k);
                        }
                    }
                }
                None => {
                    let inv = self.field.inv(&coeff);
                    for c in v.values_mut() {
                        *c = self.field.mul(c, &inv);
                    }
                    self.rows.insert(key.clone(), v);
                    return Some(key);
                }
            }
        }
    }
}
