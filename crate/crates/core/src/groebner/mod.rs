//! Buchberger's algorithm and kernels of monomial maps.

mod buchberger;
mod toric;

pub use buchberger::{buchberger, buchberger_with, ideal_contains, normal_form, GbOptions};
pub use toric::{psi, toric_kernel, toric_kernel_bounded, Binomial, PresentationRing};
