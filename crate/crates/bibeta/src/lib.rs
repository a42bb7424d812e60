//! Planar self-affine sets generated by the two maps
//! `T_{+1}(x, y) = ((x+1)/b1, (y+1)/b2)` and `T_{-1}(x, y) = ((x-1)/b1, (y-1)/b2)`
//! for a pair of real bases `1 < b1, b2 < 2`, `b1 != b2`.
//!
//! The crate provides:
//!
//! * symbolic addresses (eventually periodic words over `{p, m, z}`) and their
//!   evaluation as power series in one or two bases ([`symbolic`]),
//! * certified convex outer and inner hulls of the attractor and exact affine
//!   images of them under map words ([`geometry`]),
//! * cover refinement certificates for disconnectedness, the open set
//!   condition, and exclusion of the origin ([`hullcover`]),
//! * interior-point certificates from monic polynomial witnesses and greedy
//!   simultaneous expansions of one target in two bases ([`zcert`]),
//! * the corner polynomials `x^{k+1} - 2x^k + 2`, the boundary curve of the
//!   level-one separation region, and its extremal sum pair ([`curves`]),
//! * the diagonal intersection tree, its renormalisation bases, and growth
//!   statistics ([`diagonal`]),
//! * separation tables, run-length automata, and boundary address
//!   certificates for uniqueness sets ([`uniqueness`]),
//! * overlap region boxes, root-derivative certificates, and the junction
//!   chain audit for the island complex ([`islands`]).
//!
//! Every long-form capability has a runnable demo under `examples/`; the thin
//! `bibeta` binary exposes the same routines as subcommands for scripting.

pub mod cli;
pub mod curves;
pub mod diagonal;
pub mod geometry;
pub mod hullcover;
pub mod islands;
pub mod numeric;
pub mod pixmap;
pub mod symbolic;
pub mod uniqueness;
pub mod zcert;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside the domain a routine is specified for.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numeric procedure failed to converge or lost too much precision.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// A polynomial witness failed its acceptance inequality.
    #[error("certificate rejected: coefficient mass exceeds 2 by {excess}")]
    CertificateRejected {
        /// Amount by which the coefficient mass exceeds the bound.
        excess: f64,
    },
    /// A greedy expansion left the certified target box.
    #[error("target outside certified box: |u_{index}| = {magnitude}")]
    TargetOutsideBox {
        /// First step at which the carry left the certified range.
        index: usize,
        /// Magnitude of the offending carry.
        magnitude: f64,
    },
    /// A search exceeded its node or memory budget.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// A linear solve was rejected as ill-conditioned.
    #[error("ill-conditioned system: condition estimate {kappa:.3e}")]
    IllConditioned {
        /// One-norm condition estimate of the rejected matrix.
        kappa: f64,
    },
    /// I/O failure while writing an output file.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
