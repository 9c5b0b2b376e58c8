//! Coefficient rings: `O_K/p^N`, its cyclotomic extension, formal `λ`-series
//! and Laurent polynomials in the torus coordinates.

mod config;
mod lambda;
mod laurent;
mod padic;

pub use config::PrimeConfig;
pub use lambda::LambdaSeries;
pub use laurent::LaurentPoly;
pub use padic::{adjoin_zeta, make_base_ring, make_base_ring_with_guard, Ring, RingCtx, Scalar};
