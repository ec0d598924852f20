//! Eisenstein series quotients `E2^r E4^s E6^t` modulo primes.
//!
//! The crate builds exact q-expansions over `Z/m`, lifts quotients to genuine
//! modular forms mod `ell`, computes filtrations and Tate cycles of the
//! theta operator, and decides simple congruences `a(ell n + c) = 0 mod ell`
//! either on a finite window or with a Sturm-bound certificate.

pub mod eisenstein;
pub mod error;
pub mod filtration;
pub mod linalg;
pub mod modular;
pub mod scanner;
pub mod series;
pub mod tate;

pub use eisenstein::{LiftedForm, QuotientSpec};
pub use error::{Error, Result};
pub use filtration::{IsobaricPolynomial, ModularFormModEll};
pub use series::TruncatedSeries;
pub use tate::{CongruenceReport, Method, TateCycleProfile};

/// Version string stamped into persisted scan records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
