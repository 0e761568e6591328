use thiserror::Error;

use crate::qlattice::Rat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: lattice has rank {expected}, vector has length {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("empty curve subset")]
    EmptySubset,

    #[error("curve subset is linearly dependent (rank {rank} < {len})")]
    DependentSubset { rank: usize, len: usize },

    #[error("gram block is singular")]
    SingularBlock,

    #[error("unknown curve {0:?}")]
    UnknownCurve(String),

    #[error("divisor has non-integral coefficient {coeff} on {curve}")]
    NonIntegralDivisor { curve: String, coeff: Rat },

    #[error("Riemann-Roch produced a non-integral Euler characteristic {0}")]
    NonIntegralChi(Rat),

    #[error("divisor on the target mentions contracted curve {0:?}")]
    ContractedCurve(String),

    #[error("curve {0:?} is not contracted")]
    NotContracted(String),

    #[error("boundary coefficient {coeff} on {curve} is outside [0, 1]")]
    BoundaryOutOfRange { curve: String, coeff: Rat },

    #[error("target is not known to have Picard rank one with ample anticanonical class")]
    NotRankOneFano,

    #[error("assumption on the pullback fails: fractional part {fraction} on {curve} is not 0 or 1/m")]
    AssumptionViolated { curve: String, fraction: Rat },

    #[error("divisor is not ample")]
    NotAmple,

    #[error("Euler characteristic cross-check failed: closed form {closed}, Riemann-Roch {rr}")]
    ChiMismatch { closed: i64, rr: i64 },

    #[error("closed form mismatch in {what}: computed {computed}, expected {expected}")]
    ClosedFormMismatch {
        what: String,
        computed: String,
        expected: String,
    },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error: {0}")]
    Parse(String),
}
