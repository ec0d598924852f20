use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("invalid modulus {0}: must be at least 2 and below 2^63")]
    InvalidModulus(u64),

    #[error("cannot reduce modulo {to}: it does not divide {from}")]
    NotADivisor { from: u64, to: u64 },

    #[error("constant term {0} is not a unit")]
    NonUnitConstant(u64),

    #[error("series has valuation {0}, expected 0")]
    NonzeroValuation(i64),

    #[error("unsupported Eisenstein weight {0} (expected 2, 4 or 6)")]
    UnsupportedWeight(u32),

    #[error("invalid weight {0}: weights must be even and non-negative")]
    InvalidWeight(i64),

    #[error("weight {requested} is not congruent to {weight} modulo {modulus}")]
    WeightClassMismatch {
        requested: u64,
        weight: u64,
        modulus: u64,
    },

    #[error("{0} is not a prime >= {1}")]
    BadPrime(u64, u64),

    #[error("sigma is only defined for n >= 1, got {0}")]
    SigmaDomain(u64),

    #[error("the exponent of E2 must be non-negative, got {0}")]
    NegativeE2Exponent(i64),

    #[error("insufficient precision: need {needed} coefficients, have {available}")]
    InsufficientPrecision { needed: i64, available: i64 },

    #[error("the form is zero modulo {0}")]
    ZeroForm(u64),

    #[error("theta of the form vanishes modulo {0}")]
    ThetaVanishes(u64),

    #[error("residue {0} is out of range 1..{1}")]
    ResidueOutOfRange(u64, u64),

    #[error("lift needs ell + s >= 0 and ell + t >= 0 (ell = {ell}, s = {s}, t = {t})")]
    LiftOutOfRange { ell: u64, s: i64, t: i64 },

    #[error("no representable weight found for a weight {weight} form mod {ell}")]
    NoFiltration { weight: u64, ell: u64 },

    #[error("theta appears to vanish mod {0} through the window but the prime is not a candidate; increase precision")]
    PrecisionEscalation(u64),

    #[error("row {row}: coefficient of q^{index} is {value} mod {modulus}, expected 0")]
    TableCounterexample {
        row: String,
        index: u64,
        value: u64,
        modulus: u64,
    },

    #[error("precision override {given} is below the required minimum {required}")]
    PrecisionOverride { given: u64, required: u64 },

    #[error("storage error: {0}")]
    Storage(#[from] io::Error),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures caused by too few known coefficients or by
    /// persistent storage, as opposed to bad input or a counterexample.
    pub fn is_precision_or_storage(&self) -> bool {
        matches!(
            self,
            Error::InsufficientPrecision { .. }
                | Error::PrecisionEscalation(_)
                | Error::PrecisionOverride { .. }
                | Error::Storage(_)
        )
    }
}
