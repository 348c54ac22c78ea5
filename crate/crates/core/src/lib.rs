//! Joint spin-measurement probabilities for relativistic vector boson-antiboson
//! pairs in scalar states, and the CHSH, Mermin and CGLMP Bell-type
//! inequalities built on top of them.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`] holds the spin-1 matrices, spectral projectors and the
//!   constant matrix `V` linking the spin basis to Cartesian components.
//! * [`kinematics`] builds on-shell four-momenta and Minkowski products.
//! * [`states`] constructs the polarization amplitudes `e(k)`, the state
//!   tensor `g(k, p)` and the normalization `A(k, p)`.
//! * [`probabilities`] evaluates the 3x3 joint outcome tables, either by the
//!   general trace expressions (any frame) or by the closed centre-of-mass
//!   forms, together with correlation functions and limiting forms.
//! * [`inequalities`] and [`optimizer`] evaluate and maximize the Bell-type
//!   expressions over measurement directions.
//! * [`oracle`] is an independent two-qutrit singlet simulation used to check
//!   the rest-frame results.
//! * [`localization`] evaluates the cube-detector localization kernel.

pub mod error;
pub mod figures;
pub mod inequalities;
pub mod kinematics;
pub mod linalg;
pub mod localization;
pub mod optimizer;
pub mod oracle;
pub mod probabilities;
pub mod states;

pub use error::{Error, Result};
pub use figures::FigurePreset;
pub use inequalities::{InequalityKind, InequalityResult, MeasurementSettings};
pub use kinematics::{FourVector, KinematicConfig};
pub use linalg::{Direction, Outcome};
pub use optimizer::{OptimizerConfig, ScanRow};
pub use probabilities::{ComState, ProbabilityTable};
pub use states::ScalarStateSpec;
