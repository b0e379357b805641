use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{buchberger_with, GbOptions};
use crate::linalg::rank_i64;
use crate::poly::{Exponent, Field, MonomialOrder, Polynomial, RingContext};
use crate::rational::Rat;

/// Presentation ring `K[Y_1, ..., Y_k]`, one variable per generator.
#[derive(Debug, Clone)]
pub struct PresentationRing {
    ring: Arc<RingContext>,
}

impl PresentationRing {
    pub fn new(k: usize, field: Field, degrees: Vec<u32>) -> Result<PresentationRing> {
        let names = (1..=k).map(|i| format!("Y{i}")).collect();
        Ok(PresentationRing { ring: RingContext::with_degrees(names, field, degrees)? })
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.nvars() == 0
    }

    /// Appends variables of the given degrees; existing indices are kept.
    pub fn extended(&self, extra_degrees: &[u32]) -> Result<PresentationRing> {
        let mut degrees = self.ring.degrees().to_vec();
        degrees.extend_from_slice(extra_degrees);
        PresentationRing::new(degrees.len(), self.ring.field(), degrees)
    }
}

/// A pure difference binomial `Y^plus - Y^minus` in the kernel of a monomial map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Binomial {
    plus: Exponent,
    minus: Exponent,
}

/// Image `X^(sum_u e_u m_u)` of the P-monomial `Y^e`.
pub fn psi(e: &Exponent, monomials: &[Exponent]) -> Exponent {
    let n = monomials.first().map_or(0, |m| m.len());
    let mut out = Exponent::zero(n);
    for u in e.support() {
        for _ in 0..e.get(u) {
            out.add_assign(&monomials[u]);
        }
    }
    out
}

impl Binomial {
    /// Checks that both sides map to the same monomial.
    pub fn new(plus: Exponent, minus: Exponent, monomials: &[Exponent]) -> Result<Binomial> {
        if plus.len() != monomials.len() || minus.len() != monomials.len() {
            return Err(Error::LengthMismatch { expected: monomials.len(), got: plus.len().max(minus.len()) });
        }
        if plus == minus {
            return Err(Error::Verification("binomial with equal sides".into()));
        }
        if psi(&plus, monomials) != psi(&minus, monomials) {
            return Err(Error::Verification(format!("{plus:?} - {minus:?} is not in the kernel")));
        }
        Ok(Binomial { plus, minus })
    }

    pub fn plus(&self) -> &Exponent {
        &self.plus
    }

    pub fn minus(&self) -> &Exponent {
        &self.minus
    }

    pub fn degree(&self, grading: &[u32]) -> u64 {
        self.plus.degree(grading)
    }

    pub fn to_polynomial(&self, ring: &Arc<RingContext>) -> Polynomial {
        Polynomial::from_terms(ring, [(self.plus.clone(), Rat::ONE), (self.minus.clone(), Rat::from_int(-1))])
            .expect("lengths match")
    }

    /// Re-embeds into a presentation ring with more variables.
    pub fn padded(&self, n: usize) -> Binomial {
        Binomial { plus: self.plus.padded(n), minus: self.minus.padded(n) }
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |e: &Exponent| {
            let parts: Vec<String> = e
                .support()
                .map(|i| if e.get(i) == 1 { format!("Y{}", i + 1) } else { format!("Y{}^{}", i + 1, e.get(i)) })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            }
        };
        write!(f, "{} - {}", side(&self.plus), side(&self.minus))
    }
}

/// Binomial generators of the kernel of `Y_u -> X^{m_u}`.
pub fn toric_kernel(monomials: &[Exponent]) -> Result<Vec<Binomial>> {
    toric_kernel_bounded(monomials, None)
}

/// As [`toric_kernel`], restricted to generators of degree at most `bound`
/// in the grading `deg Y_u = total degree of m_u`. The result generates the
/// kernel in all degrees up to the bound.
pub fn toric_kernel_bounded(monomials: &[Exponent], bound: Option<u64>) -> Result<Vec<Binomial>> {
    let k = monomials.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let n = monomials[0].len();
    if monomials.iter().any(|m| m.len() != n) {
        return Err(Error::LengthMismatch { expected: n, got: monomials.iter().map(|m| m.len()).find(|&l| l != n).unwrap() });
    }
    if monomials.iter().any(|m| m.is_zero()) {
        return Err(Error::OutOfRange("toric kernel of the unit monomial".into()));
    }
    let rows: Vec<Vec<i64>> = monomials.iter().map(|m| m.iter().map(i64::from).collect()).collect();
    let mut distinct = monomials.to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.len() == k && rank_i64(&rows) == k {
        return Ok(Vec::new());
    }
    let ydeg: Vec<u32> = monomials.iter().map(|m| m.total_degree() as u32).collect();
    let mut names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    names.extend((0..k).map(|u| format!("y{u}")));
    let mut degrees = vec![1u32; n];
    degrees.extend_from_slice(&ydeg);
    let ring = RingContext::with_degrees(names, Field::Rational, degrees)?;
    let order = MonomialOrder::elimination(n, &ydeg);
    let gens: Vec<Polynomial> = monomials
        .iter()
        .enumerate()
        .map(|(u, m)| {
            let y = Exponent::unit(n + k, n + u);
            Polynomial::from_terms(&ring, [(y, Rat::ONE), (m.padded(n + k), Rat::from_int(-1))]).unwrap()
        })
        .collect();
    let gb = buchberger_with(&gens, &order, &GbOptions { degree_bound: bound })?;
    let mut out = Vec::new();
    for g in gb {
        if g.support().any(|e| (0..n).any(|i| e.get(i) != 0)) {
            continue;
        }
        let terms = g.terms();
        if terms.len() != 2 || terms.iter().map(|(_, c)| c).collect::<Vec<_>>().iter().map(|c| c.signum()).sum::<i32>() != 0 {
            return Err(Error::Verification(format!("non-binomial kernel element {g}")));
        }
        let lm = g.leading_exponent(&order)?.clone();
        let strip = |e: &Exponent| -> Exponent { e.iter().skip(n).collect() };
        let other = terms.iter().map(|(e, _)| e).find(|e| **e != lm).unwrap();
        out.push(Binomial::new(strip(&lm), strip(other), monomials)?);
    }
    out.sort_by(|a, b| {
        a.degree(&ydeg).cmp(&b.degree(&ydeg)).then_with(|| a.plus.cmp(&b.plus)).then_with(|| a.minus.cmp(&b.minus))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u16]) -> Exponent {
        Exponent::from_u16(v)
    }

    #[test]
    fn twisted_powers() {
        let b = toric_kernel(&[e(&[2]), e(&[3])]).unwrap();
        assert_eq!(b.len(), 1);
        let (p, m) = (b[0].plus(), b[0].minus());
        let sides = [p.clone(), m.clone()];
        assert!(sides.contains(&e(&[3, 0])) && sides.contains(&e(&[0, 2])));
    }

    #[test]
    fn independent_monomials() {
        assert!(toric_kernel(&[e(&[1, 0]), e(&[0, 1])]).unwrap().is_empty());
    }

    #[test]
    fn binomial_validation() {
        let mons = [e(&[1, 0]), e(&[0, 1]), e(&[1, 1])];
        assert!(Binomial::new(e(&[1, 1, 0]), e(&[0, 0, 1]), &mons).is_ok());
        assert!(Binomial::new(e(&[1, 0, 0]), e(&[0, 0, 1]), &mons).is_err());
        assert!(Binomial::new(e(&[1, 0, 0]), e(&[1, 0, 0]), &mons).is_err());
    }
}
