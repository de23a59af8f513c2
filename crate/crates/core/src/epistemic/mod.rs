//! Finite epistemic models of both game forms, rationality at a state, and
//! common knowledge of rationality read as truth at every state.

mod extensive;
mod strategic;

pub use extensive::{
    canonical_model, ck_rationality, is_compatible, is_locally_rational, is_rational, pushforward, CkReport,
    ExtensiveModel, Mode, ModelChecker, State, StateFailure,
};
pub use strategic::{
    ck_rationality_strategic, condition_prior, has_common_prior, is_product_prior, is_rational_strategic, opponents,
    profile_distribution, strategy_values, with_own, StrategicCheck, StrategicCkReport, StrategicFailure,
    StrategicModel, StrategicState,
};
