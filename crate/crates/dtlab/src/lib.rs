//! Exact laboratory for decision trees over partial Boolean functions.
//!
//! Everything here is computed with exact arithmetic: domains are explicit
//! point sets, probabilities are rationals, and every inequality check
//! compares both sides exactly. The crate provides
//!
//! - bit vectors, partial functions, restrictions, and the sensitivity /
//!   certificate complexity measures ([`boolfn`]);
//! - decision trees, exact error under a pmf, stacked XOR trees, and the
//!   certificate patch-up constructions ([`dtree`]);
//! - graphs, the amplified edge-indicator gadget family, canonical hard
//!   distributions, cover-based upper-bound trees, cutoff XOR trees, and
//!   monotone coresets ([`gadget`]);
//! - brute-force ground truth: optimal decision tree size, the full
//!   size/error Pareto frontier, and exact vertex cover ([`oracle`]);
//! - one executable check per inequality, plus reduction parameter
//!   selection ([`bounds`]);
//! - the learning-task harness and the vertex-cover decision procedures
//!   built on top of it ([`reduction`]).

pub mod boolfn;
pub mod bounds;
pub mod cli;
pub mod dtree;
pub mod error;
pub mod gadget;
pub mod oracle;
pub mod rat;
pub mod reduction;
pub mod sample;
pub mod verify;

pub use error::Error;

/// Resource caps shared by the exact solvers.
///
/// Overflowing a cap is always a hard error, never a silent truncation.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Maximum number of domain points an exact solver will accept.
    pub domain_points: usize,
    /// Maximum number of points in an enumerated product domain.
    pub product_points: usize,
    /// Maximum input width for the exact solvers and certificate search.
    pub width: usize,
    /// Maximum number of points kept on a single Pareto frontier.
    pub frontier_points: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            domain_points: 512,
            product_points: 1_000_000,
            width: 32,
            frontier_points: 10_000,
        }
    }
}
