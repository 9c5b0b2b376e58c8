//! The arithmetic side: the group `Ĝ`, its action on `H ⊗ R[λ^{±1}]`, the
//! Sen operator and the local Simpson correspondence.

mod action;
mod group;
mod sen;
mod simpson;

pub use action::{CocycleCheck, GaloisModule, LambdaMatrix, LAMBDA_BOUND};
pub use group::{FullElement, GroupElement};
pub use sen::{divide_by, sen_operator, sen_operators, SenReport, SenStep};
pub use simpson::{
    exp_nilpotent, integral_scaling, inverse_unipotent, log_unipotent, roundtrip_from_group,
    roundtrip_from_higgs, RoundtripReport,
};
