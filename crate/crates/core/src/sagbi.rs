//! Subduction and the SAGBI algorithm.

use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{psi, toric_kernel, toric_kernel_bounded, Binomial, PresentationRing};
use crate::hilbert::{semigroup_hilbert, subalgebra_hilbert, Grading};
use crate::poly::{Exponent, MonomialOrder, Polynomial, RingContext};
use crate::rational::Rat;

/// Ordered family of monic polynomials `f_u` with cached initial exponents.
/// Member `u` corresponds to the presentation variable `Y_{u+1}`.
#[derive(Debug, Clone)]
pub struct GeneratorFamily {
    ring: Arc<RingContext>,
    order: MonomialOrder,
    members: Vec<Polynomial>,
    initials: Vec<Exponent>,
}

impl GeneratorFamily {
    /// Makes every generator monic. Returns the family and the divisors
    /// (the leading coefficients of the inputs).
    pub fn from_polynomials(gens: &[Polynomial], order: &MonomialOrder) -> Result<(GeneratorFamily, Vec<Rat>)> {
        let ring = match gens.first() {
            Some(g) => g.ring().clone(),
            None => return Err(Error::OutOfRange("empty generator family".into())),
        };
        if order.nvars() != ring.nvars() {
            return Err(Error::LengthMismatch { expected: ring.nvars(), got: order.nvars() });
        }
        let mut fam = GeneratorFamily { ring: ring.clone(), order: order.clone(), members: vec![], initials: vec![] };
        let mut divisors = Vec::with_capacity(gens.len());
        for g in gens {
            if g.ring() != &ring {
                return Err(Error::RingMismatch);
            }
            let (monic, lc) = g.make_monic(order)?;
            fam.push_monic(monic)?;
            divisors.push(lc);
        }
        Ok((fam, divisors))
    }

    pub fn new(gens: &[Polynomial], order: &MonomialOrder) -> Result<GeneratorFamily> {
        Self::from_polynomials(gens, order).map(|(f, _)| f)
    }

    fn push_monic(&mut self, p: Polynomial) -> Result<usize> {
        let lm = p.leading_exponent(&self.order)?.clone();
        if lm.is_zero() {
            return Err(Error::OutOfRange("constant generators are not allowed".into()));
        }
        self.members.push(p);
        self.initials.push(lm);
        Ok(self.members.len() - 1)
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn members(&self) -> &[Polynomial] {
        &self.members
    }

    pub fn initials(&self) -> &[Exponent] {
        &self.initials
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Presentation ring with `deg Y_u` the ambient degree of `in(f_u)`.
    pub fn presentation(&self) -> PresentationRing {
        let degrees = self.initials.iter().map(|e| e.degree(self.ring.degrees()).max(1) as u32).collect();
        PresentationRing::new(self.len(), self.ring.field(), degrees).expect("positive degrees")
    }

    /// `phi(Y^e) = prod f_u^{e_u}`.
    pub fn evaluate_monomial(&self, e: &Exponent) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for u in e.support() {
            acc = &acc * &self.members[u].pow(e.get(u) as u32);
        }
        acc
    }

    /// `phi(F)` for a polynomial in the presentation ring (variables beyond the
    /// family size are rejected).
    pub fn evaluate(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.ring().nvars() > self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: f.ring().nvars() });
        }
        let images: Vec<Polynomial> = self.members[..f.ring().nvars()].to_vec();
        f.substitute(&images, &self.ring)
    }

    /// Whether all members are homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.members.iter().all(|m| m.homogeneous_degree().is_some())
    }

    fn degree_gcd(&self) -> u64 {
        self.members.iter().map(|m| m.homogeneous_degree().unwrap_or(1)).fold(0u64, |a, d| a.gcd(&d)).max(1)
    }
}

/// Subduction of `g`: `g = sum a_i F^{e_i} + remainder`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubductionTrace {
    /// Coefficient and presentation exponent of each step.
    pub steps: Vec<(Rat, Exponent)>,
    pub remainder: Polynomial,
    /// Leading coefficient of the remainder (1 when it is zero).
    pub monic_divisor: Rat,
}

/// Factorization of `target` as a sum of `inits` with the lexicographically
/// smallest nondecreasing tag sequence, or `None`.
pub(crate) fn factor_in_monoid(target: &Exponent, inits: &[Exponent]) -> Option<Vec<usize>> {
    fn go(
        target: &Exponent,
        inits: &[Exponent],
        start: usize,
        failed: &mut FxHashSet<(Exponent, usize)>,
    ) -> Option<Vec<usize>> {
        if target.is_zero() {
            return Some(Vec::new());
        }
        if failed.contains(&(target.clone(), start)) {
            return None;
        }
        for u in start..inits.len() {
            if let Some(rest) = target.checked_sub(&inits[u]) {
                if let Some(mut tail) = go(&rest, inits, u, failed) {
                    tail.insert(0, u);
                    return Some(tail);
                }
            }
        }
        failed.insert((target.clone(), start));
        None
    }
    let mut failed = FxHashSet::default();
    go(target, inits, 0, &mut failed)
}

fn tags_to_exponent(tags: &[usize], k: usize) -> Exponent {
    let mut e = Exponent::zero(k);
    for &t in tags {
        e.set(t, e.get(t) + 1);
    }
    e
}

/// Subduces `g` modulo the family. With `tail` the remainder has no monomial
/// in the monoid of initials; otherwise only its initial monomial is checked.
pub fn subduct(g: &Polynomial, family: &GeneratorFamily, tail: bool) -> SubductionTrace {
    let order = &family.order;
    let field = family.ring.field();
    let k = family.len();
    let mut cache: FxHashMap<Vec<usize>, Polynomial> = FxHashMap::default();
    let mut current = g.clone();
    let mut steps = Vec::new();
    let mut kept: Vec<(Exponent, Rat)> = Vec::new();
    while !current.is_zero() {
        let (e, c) = {
            let (e, c) = current.leading_term(order).expect("nonzero");
            (e.clone(), c.clone())
        };
        match factor_in_monoid(&e, &family.initials) {
            Some(tags) => {
                let prod = cache
                    .entry(tags.clone())
                    .or_insert_with(|| {
                        tags.iter().fold(Polynomial::one(&family.ring), |acc, &u| &acc * &family.members[u])
                    })
                    .clone();
                current = current.sub_mul_term(&c, &Exponent::zero(family.ring.nvars()), &prod);
                steps.push((c, tags_to_exponent(&tags, k)));
            }
            None if tail => {
                let single = Polynomial::monomial(&family.ring, e.clone(), c.clone());
                current = current.try_sub(&single).expect("same ring");
                kept.push((e, c));
            }
            None => break,
        }
    }
    let remainder = if tail { Polynomial::from_unsorted(&family.ring, kept) } else { current };
    let monic_divisor = match remainder.leading_term(order) {
        Ok((_, c)) => c.clone(),
        Err(_) => field.from_int(1),
    };
    SubductionTrace { steps, remainder, monic_divisor }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    General,
    ByDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stop {
    /// At most this many rounds (general variant).
    Rounds(usize),
    /// Normalized degree bound.
    Degree(u64),
}

#[derive(Debug, Clone)]
pub struct SagbiOptions {
    pub variant: Variant,
    pub stop: Stop,
    /// Use full tail subduction.
    pub tail: bool,
}

impl SagbiOptions {
    pub fn general(stop: Stop) -> SagbiOptions {
        SagbiOptions { variant: Variant::General, stop, tail: false }
    }

    pub fn by_degree(bound: u64) -> SagbiOptions {
        SagbiOptions { variant: Variant::ByDegree, stop: Stop::Degree(bound), tail: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SagbiStatus {
    /// No new elements arise; `at` is the round or normalized degree where this was detected.
    Complete { at: u64 },
    Truncated { at: u64 },
}

impl SagbiStatus {
    pub fn is_complete(&self) -> bool {
        matches!(self, SagbiStatus::Complete { .. })
    }
}

/// One appended SAGBI element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewElement {
    /// Round (general variant) or normalized degree.
    pub stage: u64,
    pub source: String,
    pub tag: usize,
}

/// A processed tête-a-tête with its subduction, in processing order.
#[derive(Debug, Clone)]
pub struct SubductionRecord {
    pub stage: u64,
    pub binomial: Binomial,
    /// Number of family members when the subduction ran.
    pub family_size: usize,
    pub trace: SubductionTrace,
    /// Tag of the member created from the remainder, when nonzero.
    pub new_tag: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SagbiResult {
    pub basis: GeneratorFamily,
    pub status: SagbiStatus,
    pub log: Vec<NewElement>,
    pub records: Vec<SubductionRecord>,
}

/// Tête-a-têtes of the family: binomial generators of `Ker psi`.
pub fn tete_a_tetes(family: &GeneratorFamily) -> Result<Vec<Binomial>> {
    toric_kernel(&family.initials)
}

/// `phi(beta)` for a binomial over the first `size` members.
fn phi_binomial(family: &GeneratorFamily, b: &Binomial) -> Polynomial {
    &family.evaluate_monomial(b.plus()) - &family.evaluate_monomial(b.minus())
}

fn process_batch(
    family: &mut GeneratorFamily,
    batch: Vec<Binomial>,
    stage: u64,
    tail: bool,
    log: &mut Vec<NewElement>,
    records: &mut Vec<SubductionRecord>,
) -> Result<usize> {
    let frozen = family.clone();
    let traces: Vec<SubductionTrace> =
        batch.par_iter().map(|b| subduct(&phi_binomial(&frozen, b), &frozen, tail)).collect();
    let mut added = 0;
    for (b, mut trace) in batch.into_iter().zip(traces) {
        let mut size = frozen.len();
        if !trace.remainder.is_zero() && family.len() > size {
            // members appended earlier in this batch may already cover the remainder
            let again = subduct(&trace.remainder, family, tail);
            size = family.len();
            let mut steps: Vec<(Rat, Exponent)> = trace.steps.into_iter().map(|(a, e)| (a, e.padded(size))).collect();
            steps.extend(again.steps);
            trace = SubductionTrace { steps, remainder: again.remainder, monic_divisor: again.monic_divisor };
        }
        let b = b.padded(size);
        let new_tag = if trace.remainder.is_zero() {
            None
        } else {
            let monic = trace.remainder.scale(&family.ring.field().inv(&trace.monic_divisor));
            let tag = family.push_monic(monic)?;
            log.push(NewElement { stage, source: b.to_string(), tag });
            added += 1;
            Some(tag)
        };
        records.push(SubductionRecord { stage, binomial: b, family_size: size, trace, new_tag });
    }
    Ok(added)
}

/// Runs the SAGBI algorithm on `gens`.
pub fn sagbi(gens: &[Polynomial], order: &MonomialOrder, opts: &SagbiOptions) -> Result<SagbiResult> {
    let family = GeneratorFamily::new(gens, order)?;
    sagbi_family(family, opts)
}

pub fn sagbi_family(family: GeneratorFamily, opts: &SagbiOptions) -> Result<SagbiResult> {
    match opts.variant {
        Variant::General => run_general(family, opts),
        Variant::ByDegree => run_by_degree(family, opts),
    }
}

/// Variant (Gen): rounds of steps (2)-(5).
pub fn sagbi_general(gens: &[Polynomial], order: &MonomialOrder, stop: Stop) -> Result<SagbiResult> {
    sagbi(gens, order, &SagbiOptions::general(stop))
}

/// Variant (Deg): tête-a-têtes and subductions by increasing normalized degree.
pub fn sagbi_by_degree(gens: &[Polynomial], order: &MonomialOrder, degree_bound: u64) -> Result<SagbiResult> {
    sagbi(gens, order, &SagbiOptions::by_degree(degree_bound))
}

fn binomial_key(b: &Binomial) -> (Exponent, Exponent) {
    (b.plus().clone(), b.minus().clone())
}

fn run_general(mut family: GeneratorFamily, opts: &SagbiOptions) -> Result<SagbiResult> {
    let mut log = Vec::new();
    let mut records = Vec::new();
    let mut seen: FxHashSet<(Exponent, Exponent)> = FxHashSet::default();
    let (max_rounds, degree_cap) = match opts.stop {
        Stop::Rounds(r) => (r, None),
        Stop::Degree(d) => (usize::MAX, Some(d)),
    };
    let g = family.degree_gcd();
    let grading = family.ring.degrees().to_vec();
    let mut round = 0usize;
    loop {
        if round >= max_rounds {
            return Ok(SagbiResult { basis: family, status: SagbiStatus::Truncated { at: round as u64 }, log, records });
        }
        let k = family.len();
        let mut batch = Vec::new();
        let mut skipped = false;
        for b in tete_a_tetes(&family)? {
            let b = b.padded(k);
            if seen.contains(&binomial_key(&b)) {
                continue;
            }
            let deg = psi(b.plus(), &family.initials).degree(&grading) / g;
            if degree_cap.is_some_and(|cap| deg > cap) {
                skipped = true;
                continue;
            }
            seen.insert(binomial_key(&b));
            batch.push(b);
        }
        let added = process_batch(&mut family, batch, round as u64, opts.tail, &mut log, &mut records)?;
        // earlier binomials stay valid after appending variables
        seen = seen.into_iter().map(|(p, m)| (p.padded(family.len()), m.padded(family.len()))).collect();
        if added == 0 {
            let status = if skipped {
                SagbiStatus::Truncated { at: round as u64 }
            } else {
                SagbiStatus::Complete { at: round as u64 }
            };
            return Ok(SagbiResult { basis: family, status, log, records });
        }
        round += 1;
    }
}

fn run_by_degree(mut family: GeneratorFamily, opts: &SagbiOptions) -> Result<SagbiResult> {
    if !family.ring.is_standard_graded() {
        return Err(Error::InvalidRing("the degree variant needs a standard graded ring".into()));
    }
    if let Some(index) = family.members.iter().position(|m| m.homogeneous_degree().is_none()) {
        return Err(Error::Inhomogeneous { index });
    }
    let bound = match opts.stop {
        Stop::Degree(d) => d,
        Stop::Rounds(_) => return Err(Error::OutOfRange("the degree variant needs a degree bound".into())),
    };
    let g = family.degree_gcd();
    let mut log = Vec::new();
    let mut records = Vec::new();
    let mut seen: FxHashSet<(Exponent, Exponent)> = FxHashSet::default();
    for d in 1..=bound {
        let mut any_binomial = false;
        let mut any_added = false;
        loop {
            let k = family.len();
            let kernel = toric_kernel_bounded(&family.initials, Some(d * g))?;
            let mut batch = Vec::new();
            for b in kernel {
                let b = b.padded(k);
                let deg = psi(b.plus(), &family.initials).total_degree() / g;
                if deg != d || seen.contains(&binomial_key(&b)) {
                    continue;
                }
                seen.insert(binomial_key(&b));
                batch.push(b);
            }
            if batch.is_empty() {
                break;
            }
            any_binomial = true;
            let added = process_batch(&mut family, batch, d, opts.tail, &mut log, &mut records)?;
            seen = seen.into_iter().map(|(p, m)| (p.padded(family.len()), m.padded(family.len()))).collect();
            if added == 0 {
                break;
            }
            any_added = true;
        }
        if !any_binomial && !any_added {
            let max_member = family.initials.iter().map(|e| e.total_degree() / g).max().unwrap_or(0);
            let max_kernel = tete_a_tetes(&family)?
                .iter()
                .map(|b| psi(b.plus(), &family.initials).total_degree() / g)
                .max()
                .unwrap_or(0);
            if max_kernel < d && max_member < d {
                return Ok(SagbiResult { basis: family, status: SagbiStatus::Complete { at: d }, log, records });
            }
        }
    }
    Ok(SagbiResult { basis: family, status: SagbiStatus::Truncated { at: bound }, log, records })
}

/// Smallest normalized degree `k <= k_max` where the initials of `gens`
/// span less than `K[gens]`, by comparing Hilbert functions.
pub fn is_sagbi_up_to(gens: &[Polynomial], order: &MonomialOrder, k_max: usize) -> Result<Option<usize>> {
    let family = GeneratorFamily::new(gens, order)?;
    let sub = subalgebra_hilbert(family.members(), k_max, order, Grading::Normalized)?;
    let semi = semigroup_hilbert(family.initials(), family.ring.degrees(), k_max, Grading::Normalized);
    Ok((0..=k_max).find(|&k| semi.values[k] < sub.values[k]))
}
