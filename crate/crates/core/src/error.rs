use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("field of degree {degree} over F_{p} does not fit the supported size")]
    DegreeOverflow { p: u64, degree: u64 },
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation is undefined at zero")]
    ZeroInput,
    #[error("congruence has no solution: {0}")]
    NoSolution(String),
    #[error("linear map is not invertible")]
    NotInvertible,
    #[error("invalid presemifield parameters: {0}")]
    InvalidParams(String),
    #[error("K_d is singular for these parameters")]
    KMapSingular,
    #[error("{what} needs {needed} but the guard allows {limit}")]
    SizeGuard {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("element is not in the subfield F_q")]
    InputNotInFq,
    #[error("objects live over different fields")]
    SpecMismatch,
    #[error("construction requires q ≡ 1 (mod 4)")]
    WrongResidue,
    #[error("construction requires an even l > 2")]
    OddL,
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
    #[error("unsupported l = {0}")]
    UnsupportedL(u64),
}

pub type Result<T> = core::result::Result<T, Error>;
