use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus (need a prime 3 < p < 2^61)")]
    InvalidModulus(u64),
    #[error("operands live in different fields")]
    ModulusMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular curve: 4a^3 + 27b^2 = 0 mod {p}")]
    SingularCurve { p: u64 },
    #[error("point is not on the curve")]
    OffCurve,
    #[error("resource bound exceeded: {0}")]
    ResourceLimit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("x-maps coincide up to sign, the sum/difference relations degenerate")]
    DegenerateSum,
    #[error("multiplication by {m} is inseparable in characteristic {p}")]
    UnsupportedInseparable { m: i64, p: u64 },
    /// A verified identity failed. Reaching this means the mathematics under
    /// test was falsified (or the implementation is wrong).
    #[error("identity violated: {0}")]
    IdentityViolation(String),
}

impl Error {
    /// `true` for errors that report a falsified claim rather than bad input.
    pub fn is_violation(&self) -> bool {
        matches!(self, Error::IdentityViolation(_))
    }
}
