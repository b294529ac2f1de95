//! Recovery of ridge functions `f(x) = g(aᵀx)` on the cube `[-1, 1]^d` from
//! budgeted point evaluations, together with the adversarial machinery that
//! certifies worst-case error floors for arbitrary black-box samplers.
//!
//! The crate is organised bottom-up:
//!
//! - [`ridge`]: profiles with Lipschitz-scale metadata, ridge functions,
//!   truncated-power fooling profiles and Hölder-constant utilities.
//! - [`oracle`]: the budgeted, ledgered evaluator every algorithm samples through.
//! - [`approx1d`]: local quasi-interpolation, divided differences and
//!   endpoint Taylor extrapolation.
//! - [`recovery`]: parameter selection, vertex sets and the five-step
//!   recovery procedure.
//! - [`adversary`]: fooling vectors, fooling instances and the deterministic
//!   and randomized lower-bound experiments.
//! - [`harness`]: sup-norm error estimation, instance families, sweeps,
//!   calibration and configuration.

pub mod adversary;
pub mod approx1d;
pub mod harness;
pub mod oracle;
pub mod recovery;
pub mod ridge;

pub use oracle::{CountingOracle, OracleError, Query, Target};
pub use recovery::{recover, Model, RecoveryParams, RecoveryResult, Scenario, VertexMode};
pub use ridge::{FoolingProfile, Profile, RidgeClass, RidgeError, RidgeFunction};
