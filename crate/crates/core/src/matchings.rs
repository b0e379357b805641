//! Coherent matchings of polynomial families and vertices of their Newton polytopes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{h_vector, krull_dim_monomial, semigroup_hilbert, Grading, HilbertData};
use crate::lp::{clear_denominators, strictly_feasible};
use crate::minors::{ExponentMatrix, Group, Minor};
use crate::poly::{Exponent, Polynomial};

/// One selected term per generator (indices into `terms()`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub selection: Vec<usize>,
    pub monomials: Vec<Exponent>,
    pub exponent_sum: Exponent,
    pub witness: Option<Vec<i64>>,
}

impl Matching {
    pub fn from_selection(gens: &[Polynomial], selection: Vec<usize>, witness: Option<Vec<i64>>) -> Result<Matching> {
        if selection.len() != gens.len() {
            return Err(Error::LengthMismatch { expected: gens.len(), got: selection.len() });
        }
        let nv = gens.first().map_or(0, |g| g.ring().nvars());
        let mut monomials = Vec::with_capacity(gens.len());
        let mut sum = Exponent::zero(nv);
        for (g, &s) in gens.iter().zip(&selection) {
            let (e, _) = g.terms().get(s).ok_or_else(|| Error::OutOfRange(format!("term index {s}")))?;
            sum = sum.checked_add(e)?;
            monomials.push(e.clone());
        }
        Ok(Matching { selection, monomials, exponent_sum: sum, witness })
    }

    pub fn matrix(&self, m: usize, n: usize) -> ExponentMatrix {
        ExponentMatrix::from_exponent(&self.exponent_sum, m, n).expect("shape matches the ring")
    }

    /// The matching extended by one more selected term.
    pub fn extended(&self, g: &Polynomial, index: usize, witness: Option<Vec<i64>>) -> Matching {
        let e = g.terms()[index].0.clone();
        let mut selection = self.selection.clone();
        selection.push(index);
        let mut monomials = self.monomials.clone();
        monomials.push(e.clone());
        Matching { selection, monomials, exponent_sum: self.exponent_sum.add(&e), witness }
    }
}

fn difference(a: &Exponent, b: &Exponent) -> Vec<i64> {
    a.iter().zip(b.iter()).map(|(x, y)| i64::from(x) - i64::from(y)).collect()
}

fn constraint_rows(gens: &[Polynomial], selection: &[usize]) -> Vec<Vec<i64>> {
    let mut rows = Vec::new();
    for (g, &s) in gens.iter().zip(selection) {
        let sel = &g.terms()[s].0;
        for (k, (e, _)) in g.terms().iter().enumerate() {
            if k != s {
                rows.push(difference(sel, e));
            }
        }
    }
    rows
}

fn selects(g: &Polynomial, s: usize, w: &[i64]) -> bool {
    let sel = g.terms()[s].0.dot(w);
    g.terms().iter().enumerate().all(|(k, (e, _))| k == s || e.dot(w) < sel)
}

/// Witness search for a (possibly partial) selection of the first generators.
fn partial_witness(gens: &[Polynomial], selection: &[usize]) -> Option<Vec<i64>> {
    let rows = constraint_rows(gens, selection);
    let nv = gens.first().map_or(0, |g| g.ring().nvars());
    if rows.is_empty() {
        return Some(vec![0; nv]);
    }
    strictly_feasible(&rows).map(|w| clear_denominators(&w))
}

/// Makes a witness positive by adding a multiple of the all-ones vector when
/// every constraint direction has coordinate sum zero.
fn positive_witness(gens: &[Polynomial], selection: &[usize], mut w: Vec<i64>) -> Vec<i64> {
    let balanced = constraint_rows(gens, selection).iter().all(|d| d.iter().sum::<i64>() == 0);
    if balanced {
        let min = w.iter().copied().min().unwrap_or(1);
        if min < 1 {
            for x in &mut w {
                *x += 1 - min;
            }
        }
    }
    w
}

/// Exact coherence test. Returns an integral weight that strictly selects the
/// chosen term of every generator, or `None`.
pub fn is_coherent(gens: &[Polynomial], selection: &[usize]) -> Result<Option<Vec<i64>>> {
    if selection.len() != gens.len() {
        return Err(Error::LengthMismatch { expected: gens.len(), got: selection.len() });
    }
    for (g, &s) in gens.iter().zip(selection) {
        if s >= g.len() {
            return Err(Error::OutOfRange(format!("term index {s} of a {}-term polynomial", g.len())));
        }
    }
    let Some(w) = partial_witness(gens, selection) else { return Ok(None) };
    let w = positive_witness(gens, selection, w);
    if gens.iter().zip(selection).all(|(g, &s)| selects(g, s, &w)) {
        Ok(Some(w))
    } else {
        Err(Error::Verification("LP witness does not select the matching".into()))
    }
}

/// The matching of initial terms for a generic weight.
pub fn matching_from_weight(gens: &[Polynomial], w: &[i64]) -> Result<Matching> {
    let mut selection = Vec::with_capacity(gens.len());
    for g in gens {
        let e = g.weight_selects(w)?;
        selection.push(g.terms().iter().position(|(x, _)| *x == e).expect("selected term exists"));
    }
    Matching::from_selection(gens, selection, Some(w.to_vec()))
}

/// Selection whose exponent sum is `target`, by depth-first search.
pub fn matching_from_exponent(gens: &[Polynomial], target: &Exponent) -> Option<Matching> {
    fn go(gens: &[Polynomial], rest: &Exponent, sel: &mut Vec<usize>) -> bool {
        let d = sel.len();
        if d == gens.len() {
            return rest.is_zero();
        }
        for (k, (e, _)) in gens[d].terms().iter().enumerate() {
            if let Some(r) = rest.checked_sub(e) {
                sel.push(k);
                if go(gens, &r, sel) {
                    return true;
                }
                sel.pop();
            }
        }
        false
    }
    let mut sel = Vec::new();
    if go(gens, target, &mut sel) {
        let w = is_coherent(gens, &sel).ok().flatten();
        Matching::from_selection(gens, sel, w).ok()
    } else {
        None
    }
}

/// Whether a matrix has only positive entries.
pub fn full_support(e: &ExponentMatrix) -> bool {
    e.is_full_support()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    /// Every selection, pruned by partial coherence; `cap` bounds the size of the selection space.
    Exhaustive { cap: u128 },
    /// Random weights with entries in `[1, 10 k]`; `k` doubles after every
    /// quarter of `stall_limit` unproductive samples.
    Random { trials: usize, stall_limit: usize, seed: u64 },
}

impl Mode {
    pub const DEFAULT_CAP: u128 = 1 << 20;

    pub fn exhaustive() -> Mode {
        Mode::Exhaustive { cap: Self::DEFAULT_CAP }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitEntry {
    pub canonical: ExponentMatrix,
    pub orbit_size: usize,
    pub representative: Matching,
    pub full_support: bool,
    pub h_vector: Option<Vec<i64>>,
    pub first_defect: Option<usize>,
    pub annotated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexCatalog {
    pub m: usize,
    pub n: usize,
    pub group_order: usize,
    pub orbits: Vec<OrbitEntry>,
    /// Number of vertices found; a lower bound in random mode.
    pub total: usize,
    pub lower_bound: bool,
    pub seed: Option<u64>,
    pub samples: usize,
    pub stall_limit: Option<usize>,
}

impl VertexCatalog {
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn find(&self, e: &ExponentMatrix, group: &Group) -> Option<&OrbitEntry> {
        let c = group.canonical_form(e).0;
        self.orbits.iter().find(|o| o.canonical == c)
    }

    /// Fills h-vectors and first defects against the reference values.
    pub fn annotate(&mut self, var_degrees: &[u32], reference: &HilbertData) {
        let k_max = reference.k_max();
        self.orbits.par_iter_mut().for_each(|o| {
            let h = semigroup_hilbert(&o.representative.monomials, var_degrees, k_max, reference.grading);
            let dim = krull_dim_monomial(&o.representative.monomials);
            o.h_vector = h_vector(&h.values, dim);
            o.first_defect = (0..=k_max).find(|&k| h.values[k] != reference.values[k]);
            o.annotated = true;
        });
    }

    /// Columns: canonical matrix, orbit size, full support, h-vector, first defect.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("canonical\torbit_size\tfull_support\th_vector\tfirst_defect\n");
        for o in &self.orbits {
            let h = match (&o.h_vector, o.annotated) {
                (Some(h), _) => format!("({})", h.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
                (None, true) => "truncated".into(),
                (None, false) => "-".into(),
            };
            let d = match (o.first_defect, o.annotated) {
                (Some(k), _) => k.to_string(),
                (None, true) => "none".into(),
                (None, false) => "-".into(),
            };
            s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", o.canonical.compact(), o.orbit_size, o.full_support, h, d));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn catalog_from(
    gens: &[Polynomial],
    m: usize,
    n: usize,
    group: &Group,
    matchings: Vec<Matching>,
) -> Result<Vec<OrbitEntry>> {
    let _ = gens;
    let keyed: Vec<(ExponentMatrix, Matching)> =
        matchings.into_par_iter().map(|mt| (group.canonical_form(&mt.matrix(m, n)).0, mt)).collect();
    let mut orbits: BTreeMap<ExponentMatrix, Matching> = BTreeMap::new();
    for (c, mt) in keyed {
        orbits.entry(c).or_insert(mt);
    }
    Ok(orbits
        .into_iter()
        .map(|(canonical, representative)| OrbitEntry {
            orbit_size: group.orbit_size(&canonical),
            full_support: canonical.is_full_support(),
            canonical,
            representative,
            h_vector: None,
            first_defect: None,
            annotated: false,
        })
        .collect())
}

/// Coherent matchings of `gens` (a family in `K[X_{m x n}]`) and their orbits under `group`.
pub fn enumerate_vertices(gens: &[Polynomial], m: usize, n: usize, group: &Group, mode: &Mode) -> Result<VertexCatalog> {
    if gens.is_empty() {
        return Err(Error::OutOfRange("empty generator family".into()));
    }
    if gens[0].ring().nvars() != m * n {
        return Err(Error::LengthMismatch { expected: m * n, got: gens[0].ring().nvars() });
    }
    match *mode {
        Mode::Exhaustive { cap } => {
            let mut needed: u128 = 1;
            for g in gens {
                needed = needed.saturating_mul(g.len() as u128);
            }
            if needed > cap {
                return Err(Error::CapExceeded { needed, cap });
            }
            let all = coherent_matchings(gens)?;
            let total = all.len();
            let orbits = catalog_from(gens, m, n, group, all)?;
            Ok(VertexCatalog {
                m,
                n,
                group_order: group.order(),
                orbits,
                total,
                lower_bound: false,
                seed: None,
                samples: 0,
                stall_limit: None,
            })
        }
        Mode::Random { trials, stall_limit, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found: BTreeMap<ExponentMatrix, Matching> = BTreeMap::new();
            let mut stall = 0usize;
            let mut scale = 1i64;
            let step = (stall_limit / 4).max(1);
            let mut samples = 0;
            while samples < trials && stall < stall_limit {
                samples += 1;
                let w = random_weight(&mut rng, m * n, scale);
                let Ok(mt) = matching_from_weight(gens, &w) else {
                    stall += 1;
                    continue;
                };
                let c = group.canonical_form(&mt.matrix(m, n)).0;
                if found.contains_key(&c) {
                    stall += 1;
                    if stall % step == 0 {
                        scale *= 2;
                    }
                } else {
                    found.insert(c, mt);
                    stall = 0;
                }
            }
            let orbits = catalog_from(gens, m, n, group, found.into_values().collect())?;
            let total = orbits.iter().map(|o| o.orbit_size).sum();
            Ok(VertexCatalog {
                m,
                n,
                group_order: group.order(),
                orbits,
                total,
                lower_bound: true,
                seed: Some(seed),
                samples,
                stall_limit: Some(stall_limit),
            })
        }
    }
}

/// Integer weight with entries uniform in `[1, 10 scale]`.
pub fn random_weight(rng: &mut impl Rng, n: usize, scale: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(1..=10 * scale)).collect()
}

/// A random coherent matching from a generic random weight.
pub fn random_coherent_matching(gens: &[Polynomial], rng: &mut impl Rng, scale: i64) -> Matching {
    let nv = gens[0].ring().nvars();
    loop {
        let w = random_weight(rng, nv, scale);
        if let Ok(mt) = matching_from_weight(gens, &w) {
            return mt;
        }
    }
}

/// All coherent matchings, by depth-first search over generators with
/// pruning of incoherent partial selections.
pub fn coherent_matchings(gens: &[Polynomial]) -> Result<Vec<Matching>> {
    // breadth-first over the first levels to obtain parallel work
    let mut frontier: Vec<(Vec<usize>, Vec<i64>)> = vec![(Vec::new(), vec![0; gens[0].ring().nvars()])];
    let mut depth = 0;
    while depth < gens.len() && frontier.len() < 256 {
        frontier = frontier.par_iter().flat_map_iter(|(sel, w)| children(gens, sel, w)).collect();
        depth += 1;
    }
    let leaves: Vec<(Vec<usize>, Vec<i64>)> = frontier
        .into_par_iter()
        .flat_map_iter(|(sel, w)| {
            let mut out = Vec::new();
            dfs(gens, sel, w, &mut out);
            out
        })
        .collect();
    let mut out: Vec<Matching> = leaves
        .into_iter()
        .map(|(sel, w)| {
            let w = positive_witness(gens, &sel, w);
            debug_assert!(gens.iter().zip(&sel).all(|(g, &s)| selects(g, s, &w)));
            Matching::from_selection(gens, sel, Some(w))
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.selection.cmp(&b.selection));
    Ok(out)
}

fn children(gens: &[Polynomial], sel: &[usize], w: &[i64]) -> Vec<(Vec<usize>, Vec<i64>)> {
    let d = sel.len();
    if d == gens.len() {
        return vec![(sel.to_vec(), w.to_vec())];
    }
    let g = &gens[d];
    let mut out = Vec::new();
    for k in 0..g.len() {
        let mut next = sel.to_vec();
        next.push(k);
        if selects(g, k, w) {
            out.push((next, w.to_vec()));
        } else if let Some(w2) = partial_witness(&gens[..=d], &next) {
            out.push((next, w2));
        }
    }
    out
}

fn dfs(gens: &[Polynomial], sel: Vec<usize>, w: Vec<i64>, out: &mut Vec<(Vec<usize>, Vec<i64>)>) {
    if sel.len() == gens.len() {
        out.push((sel, w));
        return;
    }
    for (next, w2) in children(gens, &sel, &w) {
        dfs(gens, next, w2, out);
    }
}

/// First normalized degree at which `K[matching]` is smaller than the reference.
pub fn sagbi_defect(matching: &Matching, var_degrees: &[u32], reference: &HilbertData) -> Option<usize> {
    let h = semigroup_hilbert(&matching.monomials, var_degrees, reference.k_max(), reference.grading);
    (0..=reference.k_max()).find(|&k| h.values[k] != reference.values[k])
}

/// Hilbert data of the monomial algebra of a matching.
pub fn matching_hilbert(matching: &Matching, var_degrees: &[u32], k_max: usize, grading: Grading) -> HilbertData {
    let h = semigroup_hilbert(&matching.monomials, var_degrees, k_max, grading);
    h.with_dim(krull_dim_monomial(&matching.monomials))
}

/// Coherent extensions of a coherent matching of `gens` by one term of `g`.
pub fn extend_matching(gens: &[Polynomial], matching: &Matching, g: &Polynomial) -> Result<Vec<Matching>> {
    let mut family = gens.to_vec();
    family.push(g.clone());
    let results: Vec<Result<Option<Matching>>> = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let mut sel = matching.selection.clone();
            sel.push(k);
            Ok(is_coherent(&family, &sel)?.map(|w| matching.extended(g, k, Some(w))))
        })
        .collect();
    results.into_iter().filter_map(|r| r.transpose()).collect()
}

/// Restriction of a matching of maximal minors to the minors inside a column subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Restriction {
    /// Indices (into the original family) of the minors kept.
    pub minors: Vec<usize>,
    /// Selected monomials, re-indexed to the `m x |cols|` submatrix.
    pub monomials: Vec<Exponent>,
    pub matrix: ExponentMatrix,
}

pub fn restrict_matching(minors: &[Minor], matching: &Matching, m: usize, n: usize, cols: &[usize]) -> Result<Restriction> {
    if minors.len() != matching.selection.len() {
        return Err(Error::LengthMismatch { expected: minors.len(), got: matching.selection.len() });
    }
    let mut pos = vec![usize::MAX; n];
    for (k, &c) in cols.iter().enumerate() {
        if c >= n {
            return Err(Error::OutOfRange(format!("column {c}")));
        }
        pos[c] = k;
    }
    let sub_n = cols.len();
    let mut kept = Vec::new();
    let mut monomials = Vec::new();
    let mut sum = vec![0u32; m * sub_n];
    for (idx, mi) in minors.iter().enumerate() {
        if !mi.cols.iter().all(|&c| pos[c] != usize::MAX) {
            continue;
        }
        let e = &matching.monomials[idx];
        let mut sub = Exponent::zero(m * sub_n);
        for v in e.support() {
            let (i, j) = (v / n, v % n);
            if pos[j] == usize::MAX {
                return Err(Error::Verification("selected term leaves the column subset".into()));
            }
            sub.set(i * sub_n + pos[j], e.get(v));
            sum[i * sub_n + pos[j]] += u32::from(e.get(v));
        }
        kept.push(idx);
        monomials.push(sub);
    }
    Ok(Restriction { minors: kept, monomials, matrix: ExponentMatrix::new(m, sub_n, sum)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::{minor_polynomials, MatrixRing};

    #[test]
    fn two_by_three() {
        let mr = MatrixRing::new(2, 3).unwrap();
        let gens = minor_polynomials(2, &mr).unwrap();
        let all = coherent_matchings(&gens).unwrap();
        assert_eq!(all.len(), 6);
        for mt in &all {
            let w = mt.witness.as_ref().unwrap();
            assert!(w.iter().all(|&x| x > 0));
            assert_eq!(&matching_from_weight(&gens, w).unwrap().selection, &mt.selection);
        }
    }

    #[test]
    fn ties_are_errors() {
        let mr = MatrixRing::new(2, 2).unwrap();
        let gens = minor_polynomials(2, &mr).unwrap();
        assert!(matches!(matching_from_weight(&gens, &[1, 1, 1, 1]), Err(Error::Tie(_))));
    }
}
