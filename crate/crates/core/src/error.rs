use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("momentum {what} is off shell: k.k = {norm}, expected m^2 = {mass_sq}")]
    OffShell {
        what: &'static str,
        norm: f64,
        mass_sq: f64,
    },

    #[error("degenerate kinematics: (k.p) = {0}")]
    DegenerateProduct(f64),

    #[error("trace has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("negative probability {value:e} at outcome ({alice}, {bob})")]
    NegativeProbability { value: f64, alice: i8, bob: i8 },

    #[error("probability table is not normalized: sum = {0}")]
    NotNormalized(f64),

    #[error("{kind} requires direction `{name}`")]
    MissingDirection {
        kind: &'static str,
        name: &'static str,
    },

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid x grid: {0}")]
    InvalidGrid(String),

    #[error("optimizer returned {best}, below its best starting value {initial}")]
    OptimizerContract { best: f64, initial: f64 },
}

impl Error {
    /// True for failures of a numerical contract, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::OffShell { .. }
                | Error::DegenerateProduct(_)
                | Error::ImaginaryResidue(_)
                | Error::NegativeProbability { .. }
                | Error::NotNormalized(_)
                | Error::OptimizerContract { .. }
        )
    }
}
