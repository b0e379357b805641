use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Exponent, MonomialOrder, Polynomial, RingContext};
use crate::rational::Rat;

/// Tuning knobs for [`buchberger_with`].
#[derive(Debug, Clone, Default)]
pub struct GbOptions {
    /// Skip S-pairs whose lcm has graded degree above this bound. For
    /// homogeneous input the result is then a Gröbner basis up to that degree.
    pub degree_bound: Option<u64>,
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exponent,
    degree: u64,
}

struct Basis<'a> {
    order: &'a MonomialOrder,
    grading: Vec<u32>,
    polys: Vec<Polynomial>,
    lms: Vec<Exponent>,
    alive: Vec<bool>,
}

impl Basis<'_> {
    fn push(&mut self, p: Polynomial) -> usize {
        let lm = p.leading_exponent(self.order).expect("nonzero").clone();
        self.polys.push(p);
        self.lms.push(lm);
        self.alive.push(true);
        self.polys.len() - 1
    }

    fn alive_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.polys.len()).filter(|&i| self.alive[i])
    }

    fn pair(&self, i: usize, j: usize) -> Pair {
        let lcm = self.lms[i].lcm(&self.lms[j]);
        let degree = lcm.degree(&self.grading);
        Pair { i, j, lcm, degree }
    }

    /// Gebauer-Möller installation of the new element `h`.
    fn update(&mut self, pairs: &mut Vec<Pair>, h: usize) {
        let lm_h = self.lms[h].clone();
        let mut candidates: Vec<Pair> = self.alive_indices().filter(|&g| g != h).map(|g| self.pair(g, h)).collect();
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = candidates.pop() {
            let coprime = self.lms[p.i].is_coprime(&lm_h);
            let dominated = candidates.iter().chain(kept.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            }
        }
        kept.retain(|p| !self.lms[p.i].is_coprime(&lm_h));
        pairs.retain(|p| {
            !(lm_h.divides(&p.lcm)
                && self.lms[p.i].lcm(&lm_h) != p.lcm
                && self.lms[p.j].lcm(&lm_h) != p.lcm)
        });
        pairs.extend(kept);
        for g in 0..self.polys.len() {
            if g != h && self.alive[g] && lm_h.divides(&self.lms[g]) {
                self.alive[g] = false;
            }
        }
    }
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (lf, cf) = f.leading_term(order).expect("nonzero");
    let (lg, cg) = g.leading_term(order).expect("nonzero");
    let field = f.ring().field();
    let lcm = lf.lcm(lg);
    let mf = lcm.checked_sub(lf).expect("lcm");
    let mg = lcm.checked_sub(lg).expect("lcm");
    let a = f.mul_term(&field.inv(cf), &mf);
    a.sub_mul_term(&field.inv(cg), &mg, g)
}

/// Full reduction of `f` modulo the polynomials `basis` (need not be a Gröbner basis).
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let lts: Vec<(Exponent, Rat)> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| {
            let (e, c) = b.leading_term(order).expect("nonzero");
            (e.clone(), c.clone())
        })
        .collect();
    let nonzero: Vec<&Polynomial> = basis.iter().filter(|b| !b.is_zero()).collect();
    reduce_with(f, &nonzero, &lts, order)
}

fn reduce_with(
    f: &Polynomial,
    basis: &[&Polynomial],
    lts: &[(Exponent, Rat)],
    order: &MonomialOrder,
) -> Polynomial {
    let ring = f.ring().clone();
    let field = ring.field();
    let mut p = f.clone();
    let mut rem: Vec<(Exponent, Rat)> = Vec::new();
    while !p.is_zero() {
        let (e, c) = {
            let (e, c) = p.leading_term(order).expect("nonzero");
            (e.clone(), c.clone())
        };
        match lts.iter().position(|(l, _)| l.divides(&e)) {
            Some(k) => {
                let m = e.checked_sub(&lts[k].0).expect("divides");
                let q = field.div(&c, &lts[k].1);
                p = p.sub_mul_term(&q, &m, basis[k]);
            }
            None => {
                let single = Polynomial::monomial(&ring, e.clone(), c.clone());
                p = p.try_sub(&single).expect("same ring");
                rem.push((e, c));
            }
        }
    }
    Polynomial::from_unsorted(&ring, rem)
}

/// Reduced, monic Gröbner basis, sorted by increasing leading monomial.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> Result<Vec<Polynomial>> {
    buchberger_with(gens, order, &GbOptions::default())
}

pub fn buchberger_with(gens: &[Polynomial], order: &MonomialOrder, opts: &GbOptions) -> Result<Vec<Polynomial>> {
    let ring: Arc<RingContext> = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Ok(Vec::new()),
    };
    if gens.iter().any(|g| g.ring() != &ring) {
        return Err(Error::RingMismatch);
    }
    if order.nvars() != ring.nvars() {
        return Err(Error::LengthMismatch { expected: ring.nvars(), got: order.nvars() });
    }
    let mut basis = Basis {
        order,
        grading: ring.degrees().to_vec(),
        polys: Vec::new(),
        lms: Vec::new(),
        alive: Vec::new(),
    };
    let mut pairs: Vec<Pair> = Vec::new();
    let mut input: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    input.sort_by(|a, b| {
        let da = a.degree().unwrap_or(0);
        let db = b.degree().unwrap_or(0);
        da.cmp(&db).then_with(|| order.cmp(a.leading_exponent(order).unwrap(), b.leading_exponent(order).unwrap()))
    });
    for g in input {
        let current: Vec<usize> = basis.alive_indices().collect();
        let refs: Vec<&Polynomial> = current.iter().map(|&i| &basis.polys[i]).collect();
        let lts: Vec<(Exponent, Rat)> = refs
            .iter()
            .map(|p| {
                let (e, c) = p.leading_term(order).unwrap();
                (e.clone(), c.clone())
            })
            .collect();
        let h = reduce_with(&g, &refs, &lts, order);
        if h.is_zero() {
            continue;
        }
        let (h, _) = h.make_monic(order)?;
        let idx = basis.push(h);
        basis.update(&mut pairs, idx);
    }
    loop {
        if let Some(bound) = opts.degree_bound {
            pairs.retain(|p| p.degree <= bound);
        }
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| match a.degree.cmp(&b.degree) {
                Ordering::Equal => order.cmp(&a.lcm, &b.lcm),
                other => other,
            })
            .map(|(k, _)| k);
        let Some(k) = best else { break };
        let pair = pairs.swap_remove(k);
        let s = s_polynomial(&basis.polys[pair.i], &basis.polys[pair.j], order);
        let current: Vec<usize> = basis.alive_indices().collect();
        let refs: Vec<&Polynomial> = current.iter().map(|&i| &basis.polys[i]).collect();
        let lts: Vec<(Exponent, Rat)> = current.iter().map(|&i| (basis.lms[i].clone(), Rat::ONE)).collect();
        let h = reduce_with(&s, &refs, &lts, order);
        if h.is_zero() {
            continue;
        }
        let (h, _) = h.make_monic(order)?;
        let idx = basis.push(h);
        basis.update(&mut pairs, idx);
    }
    let alive: Vec<Polynomial> = basis.alive_indices().map(|i| basis.polys[i].clone()).collect();
    Ok(interreduce(alive, order))
}

/// Minimalizes and tail-reduces a Gröbner basis; output is monic and sorted.
pub(crate) fn interreduce(polys: Vec<Polynomial>, order: &MonomialOrder) -> Vec<Polynomial> {
    let mut polys: Vec<Polynomial> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    polys.sort_by(|a, b| order.cmp(a.leading_exponent(order).unwrap(), b.leading_exponent(order).unwrap()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for p in polys {
        let lm = p.leading_exponent(order).unwrap();
        if !minimal.iter().any(|q| q.leading_exponent(order).unwrap().divides(lm)) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, p)| p.clone()).collect();
        let (lm, lc) = {
            let (e, c) = minimal[k].leading_term(order).unwrap();
            (e.clone(), c.clone())
        };
        let head = Polynomial::monomial(minimal[k].ring(), lm, lc);
        let tail = minimal[k].try_sub(&head).expect("same ring");
        let reduced = &head + &normal_form(&tail, &others, order);
        out.push(reduced.make_monic(order).expect("nonzero").0);
    }
    out
}

/// Whether `f` lies in the ideal generated by the Gröbner basis `gb`.
pub fn ideal_contains(gb: &[Polynomial], f: &Polynomial, order: &MonomialOrder) -> bool {
    normal_form(f, gb, order).is_zero()
}
