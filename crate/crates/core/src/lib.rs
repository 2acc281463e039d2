//! Exact volumes of the signature strata of the Schur-Cohn region (monic real
//! polynomials with all roots in the open unit disk), the integer volume
//! ratios, the combinatorial identities behind them, and a Monte-Carlo oracle
//! that checks the exact values numerically.

pub mod error;
pub mod exact;
pub mod identities;
pub mod linalg;
pub mod oracle;
pub mod par;
pub mod verify;
pub mod volumes;

pub use error::{Error, Result};
pub use exact::{IndexSet, Integer, Rational};
pub use par::Exec;
