use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    /// A denominator factor evaluates to zero; `locus` is the factor.
    #[error("denominator vanishes on {locus} = 0")]
    DenominatorVanishes { locus: String },

    #[error("linear system is singular: no pivot survives in column {column}")]
    SingularSystem { column: usize },

    #[error("composition is identically singular: {detail}")]
    IdenticallySingular { detail: String },

    #[error("invariant is not biquadratic: degree {degree} in `{var}`")]
    NotBiquadratic { var: String, degree: usize },

    #[error("switch in `{var}` is degenerate: the invariant is at most linear in it")]
    DegenerateSwitch { var: String },

    #[error("orbit is singular at step {step}: {detail}")]
    OrbitSingular { step: usize, detail: String },

    #[error("orbit entry exceeded the {cap}-bit cap at step {step}")]
    BitCapExceeded { step: usize, cap: u64 },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("objects live over different rings")]
    RingMismatch,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no usable sample point found after {attempts} attempts")]
    SamplingExhausted { attempts: usize },

    #[error("missing definition `{0}`")]
    MissingDefinition(String),
}

impl Error {
    /// True for errors that signal a singular locus or a degenerate input,
    /// as opposed to malformed requests.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZero
                | Error::DenominatorVanishes { .. }
                | Error::SingularSystem { .. }
                | Error::IdenticallySingular { .. }
                | Error::DegenerateSwitch { .. }
                | Error::NotBiquadratic { .. }
                | Error::BitCapExceeded { .. }
                | Error::OrbitSingular { .. }
        )
    }
}
