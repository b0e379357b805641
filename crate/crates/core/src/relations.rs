//! Defining ideals of subalgebras via the retract bookkeeping of the SAGBI run.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, buchberger_with, ideal_contains, normal_form, GbOptions};
use crate::poly::{Exponent, MonomialOrder, Polynomial, RingContext, TermJson};
use crate::rational::Rat;
use crate::sagbi::{sagbi_family, GeneratorFamily, SagbiOptions, SagbiResult, SubductionRecord};

/// `rho: P_inf -> P_0`. Variables of `P_0` map to `Y_u / lc(f_u)` so that
/// `pi(rho(Y_u))` is the monic member; this is the identity when the inputs are monic.
#[derive(Debug, Clone)]
pub struct Retract {
    p0: Arc<RingContext>,
    images: Vec<Polynomial>,
}

impl Retract {
    pub fn ring(&self) -> &Arc<RingContext> {
        &self.p0
    }

    /// Number of original variables.
    pub fn base_len(&self) -> usize {
        self.p0.nvars()
    }

    /// `rho(Y_u)` for every assigned variable, `P_0` variables first.
    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// `rho(Y_u)` for the variables beyond `P_0`.
    pub fn assignments(&self) -> &[Polynomial] {
        &self.images[self.p0.nvars()..]
    }

    /// Applies `rho` to a polynomial in `Y_1..Y_k` with `k` at most the number of assigned variables.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        let k = f.ring().nvars();
        if k > self.images.len() {
            return Err(Error::LengthMismatch { expected: self.images.len(), got: k });
        }
        f.substitute(&self.images[..k], &self.p0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationSet {
    pub ring: Arc<RingContext>,
    pub generators: Vec<Polynomial>,
    pub minimized: bool,
}

#[derive(Serialize)]
struct RelationSetJson<'a> {
    variables: &'a [String],
    minimized: bool,
    generators: Vec<Vec<TermJson>>,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RelationSetJson {
            variables: self.ring.names(),
            minimized: self.minimized,
            generators: self.generators.iter().map(|g| g.to_json()).collect(),
        })
        .expect("serializable")
    }

    /// Largest generator degree in the `P_0` grading.
    pub fn max_degree(&self) -> Option<u64> {
        self.generators.iter().filter_map(|g| g.degree()).max()
    }
}

/// `P_0` with `deg Y_u` the ambient degree of `f_u`.
pub fn original_presentation(gens: &[Polynomial]) -> Result<Arc<RingContext>> {
    let ring = gens.first().ok_or_else(|| Error::OutOfRange("empty generator family".into()))?.ring();
    let degrees = gens.iter().map(|g| g.degree().unwrap_or(1).max(1) as u32).collect();
    RingContext::with_degrees((1..=gens.len()).map(|i| format!("Y{i}")).collect(), ring.field(), degrees)
}

/// Graded degrevlex order on a presentation ring.
pub fn presentation_order(ring: &RingContext) -> MonomialOrder {
    let w = ring.degrees().iter().map(|&d| d as i64).collect();
    MonomialOrder::weight(w, MonomialOrder::degrevlex(ring.nvars())).expect("positive degrees")
}

/// `beta - sum a_i Y^{e_i}` in `K[Y_1..Y_size]`.
pub fn lifted_relation(record: &SubductionRecord, field: crate::poly::Field) -> Polynomial {
    let ring = RingContext::with_degrees(
        (1..=record.family_size).map(|i| format!("Y{i}")).collect(),
        field,
        vec![1; record.family_size],
    )
    .expect("generated names");
    let mut terms: Vec<(Exponent, Rat)> = vec![
        (record.binomial.plus().clone(), Rat::ONE),
        (record.binomial.minus().clone(), field.from_int(-1)),
    ];
    for (a, e) in &record.trace.steps {
        terms.push((e.clone(), field.neg(a)));
    }
    let mut acc = Polynomial::zero(&ring);
    for (e, c) in terms {
        acc = &acc + &Polynomial::monomial(&ring, e, c);
    }
    acc
}

/// Runs the SAGBI algorithm and accumulates `rho` and generators of `Ker pi`.
pub fn sagbi_with_relations(
    gens: &[Polynomial],
    order: &MonomialOrder,
    opts: &SagbiOptions,
) -> Result<(SagbiResult, Retract, RelationSet)> {
    let (family, scales) = GeneratorFamily::from_polynomials(gens, order)?;
    let field = family.ring().field();
    let p0 = original_presentation(gens)?;
    let result = sagbi_family(family, opts)?;
    let mut images: Vec<Polynomial> = scales
        .iter()
        .enumerate()
        .map(|(u, s)| Polynomial::variable(&p0, u).scale(&field.inv(s)))
        .collect();
    let mut relations = Vec::new();
    // records arrive in processing order, so new tags are increasing along it
    for record in &result.records {
        let lifted = lifted_relation(record, field);
        let image = lifted.substitute(&images[..record.family_size], &p0)?;
        match record.new_tag {
            Some(tag) => {
                debug_assert_eq!(tag, images.len());
                images.push(image.scale(&field.inv(&record.trace.monic_divisor)));
            }
            None => {
                if !image.is_zero() {
                    relations.push(image);
                }
            }
        }
    }
    let retract = Retract { p0: p0.clone(), images };
    Ok((result, retract, RelationSet { ring: p0, generators: relations, minimized: false }))
}

/// Greedy degree-ascending minimization: a generator is kept iff it is not in
/// the ideal of the kept ones; kept generators are stored reduced and monic.
pub fn minimize_relations(rels: &RelationSet) -> Result<RelationSet> {
    let order = presentation_order(&rels.ring);
    let mut gens: Vec<Polynomial> =
        rels.generators.iter().filter(|g| !g.is_zero()).map(|g| g.make_monic(&order).map(|(m, _)| m)).collect::<Result<_>>()?;
    gens.sort_by(|a, b| {
        a.degree().cmp(&b.degree()).then_with(|| {
            let (la, lb) = (a.leading_exponent(&order).unwrap(), b.leading_exponent(&order).unwrap());
            order.cmp(la, lb)
        })
    });
    gens.dedup();
    let mut kept: Vec<Polynomial> = Vec::new();
    let mut gb: Vec<Polynomial> = Vec::new();
    for g in gens {
        let r = normal_form(&g, &gb, &order);
        if r.is_zero() {
            continue;
        }
        let (r, _) = r.make_monic(&order)?;
        kept.push(r);
        gb = buchberger(&kept, &order)?;
    }
    Ok(RelationSet { ring: rels.ring.clone(), generators: kept, minimized: true })
}

/// Substitutes the generators into every relation; returns the first that
/// does not vanish.
pub fn verify_relations(gens: &[Polynomial], rels: &RelationSet) -> Result<std::result::Result<(), Polynomial>> {
    let target = gens.first().ok_or_else(|| Error::OutOfRange("empty generator family".into()))?.ring().clone();
    for r in &rels.generators {
        if !r.substitute(gens, &target)?.is_zero() {
            return Ok(Err(r.clone()));
        }
    }
    Ok(Ok(()))
}

/// `Ker pi` by elimination of the ambient variables from `(Y_u - f_u)`.
pub fn elimination_kernel(gens: &[Polynomial]) -> Result<RelationSet> {
    let p0 = original_presentation(gens)?;
    let ring = gens[0].ring().clone();
    let n = ring.nvars();
    let k = gens.len();
    let mut names: Vec<String> = ring.names().to_vec();
    let mut degrees: Vec<u32> = ring.degrees().to_vec();
    for u in 0..k {
        let mut name = format!("Y{}", u + 1);
        while names.contains(&name) {
            name.push('_');
        }
        names.push(name);
        degrees.push(p0.degrees()[u]);
    }
    let big = RingContext::with_degrees(names, ring.field(), degrees)?;
    let order = MonomialOrder::elimination(n, p0.degrees());
    let mut system = Vec::with_capacity(k);
    for (u, g) in gens.iter().enumerate() {
        let y = Polynomial::variable(&big, n + u);
        system.push(&y - &g.extend_ring(&big));
    }
    let gb = buchberger_with(&system, &order, &GbOptions::default())?;
    let back: Vec<Polynomial> = (0..n).map(|_| Polynomial::zero(&p0)).chain((0..k).map(|u| Polynomial::variable(&p0, u))).collect();
    let mut out = Vec::new();
    for g in gb {
        if g.support().any(|e| (0..n).any(|i| e.get(i) != 0)) {
            continue;
        }
        out.push(g.substitute(&back, &p0)?);
    }
    Ok(RelationSet { ring: p0, generators: out, minimized: false })
}

/// Whether two relation sets generate the same ideal.
pub fn same_ideal(a: &RelationSet, b: &RelationSet) -> Result<bool> {
    if a.ring.nvars() != b.ring.nvars() {
        return Ok(false);
    }
    let order = presentation_order(&a.ring);
    let rebase = |s: &RelationSet| -> Vec<Polynomial> {
        s.generators.iter().map(|g| Polynomial::from_unsorted(&a.ring, g.terms().to_vec())).collect()
    };
    let (ga, gb) = (rebase(a), rebase(b));
    let basis_a = buchberger(&ga, &order)?;
    let basis_b = buchberger(&gb, &order)?;
    Ok(gb.iter().all(|g| ideal_contains(&basis_a, g, &order)) && ga.iter().all(|g| ideal_contains(&basis_b, g, &order)))
}
