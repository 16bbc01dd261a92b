//! Exact computation with the extended-affine group action on vectorial
//! functions over small finite fields.
//!
//! The crate makes every object in this corner of S-box symmetry analysis
//! computable at desk scale: exact arithmetic and enumeration for GL/AGL
//! over F_q, lookup-table function spaces, the group action `Q F(Px+a) + b`,
//! exact fixed-function counts per group element, class counts by group
//! averaging (exhaustive or conjugacy-reduced), orbit censuses with
//! stabilizer sizes, exact and sampled collision probabilities, and the
//! closed-form probability bounds. Every fast path has a brute-force oracle
//! next to it, and all counts are exact big integers or rationals; the only
//! approximate rendering is the base-q logarithm used for quantities too
//! large to materialize.
//!
//! Heavy sweeps (group averages, censuses, stabilizer searches, Monte-Carlo
//! batches) run data-parallel under the `parallel` feature (on by default)
//! and merge results in deterministic order, so outputs are identical for
//! any thread count and for the sequential fallback.

pub mod burnside;
pub mod ccz;
pub mod collision;
pub mod ea;
pub mod error;
pub mod exec;
pub mod field;
pub mod fixcount;
pub mod func;
pub mod linalg;
pub mod logq;
pub mod mc;
pub mod rng;

pub use error::{Error, ParseError, Result};
pub use exec::Exec;
pub use field::Field;

/// Budgets and execution mode shared by the sweeping operations.
///
/// Budgets are refusal thresholds, not approximation knobs: an operation
/// whose exact cost exceeds its budget returns `Error::BudgetExceeded`
/// rather than degrading.
#[derive(Clone, Debug)]
pub struct Settings {
    /// Largest group order enumerated element by element.
    pub enumeration_budget: u64,
    /// Largest function-space size swept exhaustively.
    pub oracle_budget: u64,
    /// Largest affine-fit solution space enumerated.
    pub fit_budget: u64,
    /// Largest group order partitioned into conjugacy classes.
    pub conjugacy_budget: u64,
    pub exec: Exec,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            enumeration_budget: 10_000_000,
            oracle_budget: 1 << 24,
            fit_budget: 1 << 20,
            conjugacy_budget: 100_000,
            exec: Exec::default(),
        }
    }
}
