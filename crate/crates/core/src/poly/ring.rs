use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Coefficient field: the rationals or a prime field `Z/p` with `p < 2^63`.
///
/// Prime field elements are stored as `Rat` integers in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn new(characteristic: u64) -> Result<Field> {
        match characteristic {
            0 => Ok(Field::Rational),
            p if p >= (1 << 63) => Err(Error::InvalidRing(format!(
                "characteristic {p} exceeds 2^63"
            ))),
            p if is_prime(p) => Ok(Field::Prime(p)),
            p => Err(Error::InvalidRing(format!("characteristic {p} is not prime"))),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Maps an arbitrary rational into the field.
    pub fn coerce(&self, r: &Rat) -> Rat {
        match self {
            Field::Rational => r.clone(),
            Field::Prime(p) => {
                let p_big = num_bigint::BigInt::from(*p);
                let n = ((r.numer() % &p_big) + &p_big) % &p_big;
                let d = ((r.denom() % &p_big) + &p_big) % &p_big;
                let n: u64 = n.try_into().expect("reduced mod p");
                let d: u64 = d.try_into().expect("reduced mod p");
                assert!(d != 0, "denominator divisible by the characteristic");
                Rat::from_int(mul_mod(n, inv_mod(d, *p), *p) as i64)
            }
        }
    }

    pub fn from_int(&self, n: i64) -> Rat {
        self.coerce(&Rat::from_int(n))
    }

    fn residue(r: &Rat) -> u64 {
        r.to_i64().expect("prime field element") as u64
    }

    pub fn add(&self, a: &Rat, b: &Rat) -> Rat {
        match self {
            Field::Rational => a + b,
            Field::Prime(p) => {
                let s = (Self::residue(a) as u128 + Self::residue(b) as u128) % *p as u128;
                Rat::from_int(s as i64)
            }
        }
    }

    pub fn neg(&self, a: &Rat) -> Rat {
        match self {
            Field::Rational => -a,
            Field::Prime(p) => {
                let v = Self::residue(a);
                Rat::from_int(if v == 0 { 0 } else { (*p - v) as i64 })
            }
        }
    }

    pub fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        match self {
            Field::Rational => a * b,
            Field::Prime(p) => Rat::from_int(mul_mod(Self::residue(a), Self::residue(b), *p) as i64),
        }
    }

    pub fn inv(&self, a: &Rat) -> Rat {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            Field::Rational => a.recip(),
            Field::Prime(p) => Rat::from_int(inv_mod(Self::residue(a), *p) as i64),
        }
    }

    pub fn div(&self, a: &Rat, b: &Rat) -> Rat {
        self.mul(a, &self.inv(b))
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Polynomial ring `K[x_1, ..., x_n]` with named variables and a positive grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingContext {
    names: Vec<String>,
    field: Field,
    degrees: Vec<u32>,
}

impl RingContext {
    pub fn new(names: Vec<String>, field: Field) -> Result<Arc<RingContext>> {
        let degrees = vec![1; names.len()];
        Self::with_degrees(names, field, degrees)
    }

    pub fn with_degrees(names: Vec<String>, field: Field, degrees: Vec<u32>) -> Result<Arc<RingContext>> {
        if degrees.len() != names.len() {
            return Err(Error::InvalidRing("one degree per variable required".into()));
        }
        if degrees.iter().any(|&d| d == 0) {
            return Err(Error::InvalidRing("variable degrees must be positive".into()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !is_identifier(name) {
                return Err(Error::InvalidRing(format!("`{name}` is not an identifier")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable `{name}`")));
            }
        }
        Ok(Arc::new(RingContext { names, field, degrees }))
    }

    /// Variables `prefix1, ..., prefix{n}` over the rationals.
    pub fn numbered(prefix: &str, n: usize) -> Arc<RingContext> {
        let names = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        RingContext::new(names, Field::Rational).expect("generated names are valid")
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn is_standard_graded(&self) -> bool {
        self.degrees.iter().all(|&d| d == 1)
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.field {
            Field::Rational => "QQ".to_string(),
            Field::Prime(p) => format!("GF({p})"),
        };
        write!(f, "{k}[{}]", self.names.join(","))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
