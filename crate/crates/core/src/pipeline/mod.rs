//! The full proof: low-range search, initial bounds, two reductions, and the
//! certificate that records them.

mod certificate;
mod prove;
mod search;
pub mod stages;
mod verify;

pub use certificate::*;
pub use prove::{prove, ProofConfig, ProofOutcome};
pub use search::{low_range_search, oracle_cross_check, OracleMismatch, OracleReport, Solution};
pub use verify::{verify_certificate, verify_certificate_file, VerifyReport};
