pub mod checks;
pub mod dp;
pub mod error;
pub mod galois;
pub mod higgs;
pub mod homology;
pub mod input;
pub mod matrix;
pub mod random;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod stratification;
pub mod suite;

pub use error::{Error, Result};
pub use scalar::Coefficient;

pub type PadicMatrix = matrix::Matrix<ring::Scalar>;
pub type PadicModule = higgs::EnhancedHiggsModule<ring::Scalar>;
pub type RationalModule = higgs::EnhancedHiggsModule<num_rational::BigRational>;
