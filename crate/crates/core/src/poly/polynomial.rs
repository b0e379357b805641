use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Exponent, MonomialOrder, RingContext};
use crate::rational::Rat;

/// Sparse polynomial with exact coefficients.
///
/// Terms are kept sorted by the structural (lexicographic) order of their
/// exponent vectors and never carry zero coefficients, so equality is
/// structural. Ambient monomial orders are applied by scanning.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<RingContext>,
    terms: Vec<(Exponent, Rat)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn same_ring(a: &Arc<RingContext>, b: &Arc<RingContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Polynomial {
    pub fn zero(ring: &Arc<RingContext>) -> Polynomial {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<RingContext>, c: Rat) -> Polynomial {
        Self::monomial(ring, Exponent::zero(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<RingContext>) -> Polynomial {
        Self::constant(ring, Rat::ONE)
    }

    pub fn monomial(ring: &Arc<RingContext>, e: Exponent, c: Rat) -> Polynomial {
        assert_eq!(e.len(), ring.nvars(), "exponent length");
        let c = ring.field().coerce(&c);
        let terms = if c.is_zero() { Vec::new() } else { vec![(e, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn variable(ring: &Arc<RingContext>, i: usize) -> Polynomial {
        Self::monomial(ring, Exponent::unit(ring.nvars(), i), Rat::ONE)
    }

    /// Builds a polynomial from arbitrary terms, combining repeated exponents.
    pub fn from_terms<I>(ring: &Arc<RingContext>, terms: I) -> Result<Polynomial>
    where
        I: IntoIterator<Item = (Exponent, Rat)>,
    {
        let field = ring.field();
        let mut v: Vec<(Exponent, Rat)> = Vec::new();
        for (e, c) in terms {
            if e.len() != ring.nvars() {
                return Err(Error::LengthMismatch { expected: ring.nvars(), got: e.len() });
            }
            v.push((e, field.coerce(&c)));
        }
        Ok(Self::from_unsorted(ring, v))
    }

    /// Internal constructor: coefficients already lie in the field.
    pub(crate) fn from_unsorted(ring: &Arc<RingContext>, mut v: Vec<(Exponent, Rat)>) -> Polynomial {
        let field = ring.field();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(Exponent, Rat)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => *lc = field.add(lc, &c),
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Exponent, Rat)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Exponent, Rat)> {
        self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.iter().map(|(e, _)| e)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &Exponent) -> Rat {
        match self.terms.binary_search_by(|(x, _)| x.cmp(e)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rat::ZERO,
        }
    }

    /// Leading exponent and coefficient under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Result<(&Exponent, &Rat)> {
        if order.nvars() != self.ring.nvars() {
            return Err(Error::LengthMismatch { expected: self.ring.nvars(), got: order.nvars() });
        }
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .map(|(e, c)| (e, c))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_exponent(&self, order: &MonomialOrder) -> Result<&Exponent> {
        self.leading_term(order).map(|(e, _)| e)
    }

    /// Divides by the leading coefficient; returns the monic polynomial and the divisor.
    pub fn make_monic(&self, order: &MonomialOrder) -> Result<(Polynomial, Rat)> {
        let (_, lc) = self.leading_term(order)?;
        let lc = lc.clone();
        Ok((self.scale(&self.ring.field().inv(&lc)), lc))
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        let field = self.ring.field();
        let c = field.coerce(c);
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), field.mul(x, &c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// `c * x^m * self`.
    pub fn mul_term(&self, c: &Rat, m: &Exponent) -> Polynomial {
        let field = self.ring.field();
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.add(m), field.mul(x, c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// `self - c * x^m * g` in a single merge pass.
    pub fn sub_mul_term(&self, c: &Rat, m: &Exponent, g: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &g.ring), "ring mismatch");
        let field = self.ring.field();
        let neg_c = field.neg(c);
        let shifted = g.terms.iter().map(|(e, x)| (e.add(m), field.mul(x, &neg_c)));
        Polynomial { ring: self.ring.clone(), terms: merge_add(&field, &self.terms, shifted) }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let field = self.ring.field();
        let terms = merge_add(&field, &self.terms, other.terms.iter().cloned());
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let field = self.ring.field();
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        if small.len() == 1 {
            let (e, c) = &small.terms[0];
            return Ok(large.mul_term(c, e));
        }
        let mut acc: FxHashMap<Exponent, Rat> = FxHashMap::default();
        for (e1, c1) in &small.terms {
            for (e2, c2) in &large.terms {
                let prod = field.mul(c1, c2);
                acc.entry(e1.add(e2))
                    .and_modify(|c| *c = field.add(c, &prod))
                    .or_insert(prod);
            }
        }
        let mut terms: Vec<(Exponent, Rat)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Degree of a homogeneous polynomial under the ring grading; `None` when
    /// the polynomial is zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let grading = self.ring.degrees();
        let mut it = self.terms.iter().map(|(e, _)| e.degree(grading));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Maximal graded degree of a term.
    pub fn degree(&self) -> Option<u64> {
        let grading = self.ring.degrees();
        self.terms.iter().map(|(e, _)| e.degree(grading)).max()
    }

    /// The unique `w`-maximal exponent, or `Error::Tie` listing the tied exponents.
    pub fn weight_selects(&self, w: &[i64]) -> Result<Exponent> {
        if w.len() != self.ring.nvars() {
            return Err(Error::LengthMismatch { expected: self.ring.nvars(), got: w.len() });
        }
        let best = self
            .terms
            .iter()
            .map(|(e, _)| e.dot(w))
            .max()
            .ok_or(Error::ZeroPolynomial)?;
        let tied: Vec<Exponent> =
            self.terms.iter().filter(|(e, _)| e.dot(w) == best).map(|(e, _)| e.clone()).collect();
        if tied.len() == 1 {
            Ok(tied.into_iter().next().unwrap())
        } else {
            Err(Error::Tie(tied))
        }
    }

    /// Ring homomorphism `x_i -> images[i]` into the ring of the images.
    pub fn substitute(&self, images: &[Polynomial], target: &Arc<RingContext>) -> Result<Polynomial> {
        if images.len() < self.ring.nvars() {
            return Err(Error::LengthMismatch { expected: self.ring.nvars(), got: images.len() });
        }
        if images.iter().any(|p| !same_ring(p.ring(), target)) {
            return Err(Error::RingMismatch);
        }
        let mut powers: FxHashMap<(usize, u16), Polynomial> = FxHashMap::default();
        let mut acc = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for i in e.support() {
                let k = e.get(i);
                let p = powers.entry((i, k)).or_insert_with(|| images[i].pow(k as u32));
                term = &term * p;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Moves the polynomial into `target` by sending variable `i` to `map[i]`.
    pub fn rename_variables(&self, map: &[usize], target: &Arc<RingContext>) -> Polynomial {
        let n = target.nvars();
        let v = self.terms.iter().map(|(e, c)| (e.permuted(map, n), c.clone())).collect();
        Polynomial::from_unsorted(target, v)
    }

    /// Reinterprets the polynomial in a ring with more variables appended.
    pub fn extend_ring(&self, target: &Arc<RingContext>) -> Polynomial {
        assert!(target.nvars() >= self.ring.nvars());
        let n = target.nvars();
        let terms = self.terms.iter().map(|(e, c)| (e.padded(n), c.clone())).collect();
        Polynomial { ring: target.clone(), terms }
    }

    /// Sign normalization: the structurally largest term gets a positive coefficient
    /// (rationals only).
    pub fn normalize_sign(&self) -> Polynomial {
        match self.terms.last() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.ring.nvars()];
        for (e, _) in &self.terms {
            for i in e.support() {
                used[i] = true;
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect()
    }

    /// Text form with terms in decreasing order under `order` (structural if `None`).
    pub fn to_text(&self, order: Option<&MonomialOrder>) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<&(Exponent, Rat)> = self.terms.iter().collect();
        match order {
            Some(o) => terms.sort_by(|a, b| o.cmp(&b.0, &a.0)),
            None => terms.reverse(),
        }
        let mut out = String::new();
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = format_monomial(&self.ring, e);
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&abs.to_string()),
                (false, false) => {
                    out.push_str(&abs.to_string());
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson { e: e.iter().map(u32::from).collect(), c: c.to_string() })
            .collect()
    }

    pub fn from_json(ring: &Arc<RingContext>, terms: &[TermJson]) -> Result<Polynomial> {
        let mut v = Vec::with_capacity(terms.len());
        for t in terms {
            let c: Rat = t.c.parse().map_err(|e: crate::rational::ParseRatError| Error::Parse {
                line: 1,
                column: 1,
                message: e.to_string(),
            })?;
            v.push((Exponent::from_slice(&t.e)?, c));
        }
        Polynomial::from_terms(ring, v)
    }
}

/// JSON form of a single term: `{"e": [exponents...], "c": "num/den"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: Vec<u32>,
    pub c: String,
}

pub(crate) fn format_monomial(ring: &RingContext, e: &Exponent) -> String {
    let mut parts = Vec::new();
    for i in e.support() {
        let k = e.get(i);
        if k == 1 {
            parts.push(ring.name(i).to_string());
        } else {
            parts.push(format!("{}^{}", ring.name(i), k));
        }
    }
    parts.join("*")
}

fn merge_add<I>(field: &crate::poly::Field, a: &[(Exponent, Rat)], b: I) -> Vec<(Exponent, Rat)>
where
    I: Iterator<Item = (Exponent, Rat)>,
{
    let mut out = Vec::with_capacity(a.len());
    let mut ia = a.iter().peekable();
    let mut ib = b.peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some(x), Some(y)) => x.0.cmp(&y.0),
        };
        match ord {
            Ordering::Less => out.push(ia.next().unwrap().clone()),
            Ordering::Greater => {
                let t = ib.next().unwrap();
                if !t.1.is_zero() {
                    out.push(t);
                }
            }
            Ordering::Equal => {
                let (e, x) = ia.next().unwrap();
                let (_, y) = ib.next().unwrap();
                let s = field.add(x, &y);
                if !s.is_zero() {
                    out.push((e.clone(), s));
                }
            }
        }
    }
    out
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let field = self.ring.field();
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), field.neg(c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(None))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.to_text(None))
    }
}
