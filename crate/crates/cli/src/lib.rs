//! Command-line surface for `eisenlab`: persisted records, resumable
//! sweeps, rank statistics and the verification harness.

pub mod record;
pub mod render;
pub mod stats;
pub mod sweep;
pub mod verify;

pub use record::{full_record, invariants_record, massey_conclusions, MasseyConclusion, RecordKind, ResultRecord, SCHEMA_VERSION};
pub use stats::{stats_table, StatsTable};
pub use sweep::{read_records, run_sweep, sweep_levels, SweepConfig, SweepSummary};
pub use verify::{verify_records, VerifyCheck, VerifyReport, RANK_ORD_EXCEPTIONS};

use eisenlab::Error;

/// Everything a command can fail with, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Computation(Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Computation(_) | Failure::Io(_) | Failure::Data(_) => 3,
            Failure::Verification(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrime(_)
            | Error::NotDivisor { .. }
            | Error::NotGoodPrime { .. }
            | Error::PrimeTooSmall(..)
            | Error::LevelTooSmall(..)
            | Error::InvalidModulus(_) => Failure::Usage(e.to_string()),
            e => Failure::Computation(e),
        }
    }
}
