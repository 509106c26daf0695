use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants map onto the error kinds reported by the CLI through
/// [`Error::kind`]; the strings are stable.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("denominator {0} is divisible by 3, no residue mod 3")]
    DenominatorNotInvertible(String),

    #[error("arguments are not coprime: gcd({0}, {1}) != 1")]
    NotCoprime(i64, i64),

    #[error("value {0} was expected to be an integer")]
    NonIntegral(String),

    #[error("value {0} is not a half-integer")]
    NonHalfInteger(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("linking matrix is degenerate (m*p/q = ell^2)")]
    DegenerateMatrix,

    #[error("m*p - q*ell^2 = {value} is not +/-p (p = {p})")]
    NotHomologyCompatible { value: String, p: i64 },

    #[error("p = {p} divides ell = {ell}: knot is null-homologous")]
    NullHomologousKnot { p: i64, ell: i64 },

    #[error("p = {p} does not divide ell^2 = {ell_sq}")]
    DivisibilityFailure { p: i64, ell_sq: String },

    #[error("ell0 = {ell0} = ell^2/p is divisible by 3 (p = {p}, ell = {ell}); outside the mod-3 argument")]
    Ell0DivisibleByThree { p: i64, ell: i64, ell0: i64 },

    #[error("T(2,k) needs odd k >= 3, got {0}")]
    InvalidTorusParameter(i64),

    #[error("knot {0} satisfies the banding hypotheses but has no branched-cover surgery data")]
    MissingCoverData(String),

    #[error("identity violated: {0}")]
    IdentityViolated(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroDenominator => "ZeroDenominator",
            Error::DenominatorNotInvertible(_) => "DenominatorNotInvertible",
            Error::NotCoprime(..) => "NotCoprime",
            Error::NonIntegral(_) => "NonIntegral",
            Error::NonHalfInteger(_) => "NonHalfInteger",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::DegenerateMatrix => "DegenerateMatrix",
            Error::NotHomologyCompatible { .. } => "NotHomologyCompatible",
            Error::NullHomologousKnot { .. } => "NullHomologousKnot",
            Error::DivisibilityFailure { .. } => "DivisibilityFailure",
            Error::Ell0DivisibleByThree { .. } => "Ell0DivisibleByThree",
            Error::InvalidTorusParameter(_) => "InvalidTorusParameter",
            Error::MissingCoverData(_) => "MissingCoverData",
            Error::IdentityViolated(_) => "IdentityViolated",
        }
    }

    /// True for violations of a surgery hypothesis or parameter shape, as
    /// opposed to arithmetic or admissibility failures.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::HypothesisViolated(_) | Error::InvalidTorusParameter(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
