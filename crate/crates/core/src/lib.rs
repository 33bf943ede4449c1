//! Bijection-induced arithmetic, admissible probability regraduations,
//! qubit calibration geometry and a CHSH harness.
//!
//! - [`genarith`]: operations `f⁻¹(f(a) ∘ f(b))` with explicit partiality.
//! - [`regraduation`]: maps `g: [0,1] → [0,1]` and their admissibility.
//! - [`quantum`]: Born rule, Fubini–Study and Bures angles, POVMs.
//! - [`bell`]: CHSH values, the local deterministic bound, Fréchet joints.

#![forbid(unsafe_code)]
// `!(x >= lo)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod format;
pub mod genarith;
pub mod quantum;
pub mod regraduation;
pub mod sampling;

pub use bell::{
    chsh_value, correlation_of_joint, joint_from_marginals, lhv_chsh_bound, singlet_correlation,
    underdetermination_demo, BellError, ChshScenario, JointModel, LocalDeterministicStrategy,
    Settings, UnderdeterminationReport,
};
pub use genarith::{
    closure_probe, induced_add, induced_mul, verify_bijection, BijectionSpec, ClosureReport,
    GenArithError, Interval, PartialResult,
};
pub use quantum::{
    born_probability, bures_angle, fs_distance, povm_probability, validate_povm, DensityOperator,
    Effect, Povm, QuantumError, QubitPureState,
};
pub use regraduation::{
    check_admissibility, extend_from_half, fixed_point_check, g_alt, g_czachor, g_from_theta,
    g_poly, AdmissibilityReport, RegradError, RegraduationMap, ThetaParametrization,
};
