use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a Fock basis needs at least one mode")]
    NoModes,

    #[error("mode index {index} out of range for {mode_count} modes")]
    ModeOutOfRange { index: usize, mode_count: usize },

    #[error("hopping needs two distinct modes, got mode {0} twice")]
    SameMode(usize),

    #[error("occupation {0} does not fit in a single-digit label")]
    LabelOverflow(u8),

    #[error("invalid state label {0:?}")]
    InvalidLabel(String),

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("coupling {target} is beyond the reachable maximum {omega_max}")]
    UnreachableCoupling { target: f64, omega_max: f64 },

    #[error("propagation distance {z} lies outside the device [0, {z_max}]")]
    OutsideDevice { z: f64, z_max: f64 },

    #[error("both couplings vanish, the dark state is undefined")]
    DegenerateCouplings,

    #[error("closed-form null vector is singular: coupling of waveguide {0} is zero")]
    SingularNullFormula(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("initial state has norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("norm drifted by {drift:e} over {steps} steps, use a larger step count")]
    IntegrationFailure { drift: f64, steps: usize },

    #[error("step count {0} is below the minimum of {min}", min = crate::propagator::MIN_STEPS)]
    TooFewSteps(usize),

    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("reflectivity {0} outside [0, 1)")]
    InvalidReflectivity(f64),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("permanent of order {0} exceeds the supported maximum")]
    PermanentTooLarge(usize),

    #[error("fidelity of a zero vector")]
    ZeroVector,

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),

    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
