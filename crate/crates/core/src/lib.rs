//! Exact computation of SAGBI bases, defining ideals of subalgebras and
//! coherent matchings of minors.

pub mod error;
pub mod groebner;
pub mod hilbert;
pub mod linalg;
pub mod lp;
pub mod matchings;
pub mod minors;
pub mod poly;
pub mod rational;
pub mod relations;
pub mod sagbi;
pub mod universal;

pub use error::{Error, Result};
pub use poly::{Exponent, Field, MonomialOrder, Polynomial, RingContext};
pub use rational::Rat;
