//! Error type shared by every module in the crate.
//!
//! All fallible operations return [`Result`]. Domain violations (a time
//! outside the pulse window, a non-unit axis, an exhausted step budget)
//! are reported through dedicated variants rather than panics so that
//! callers such as the CLI can map them onto exit codes.

use thiserror::Error;

/// Everything that can go wrong while evaluating the protocol, running the
/// brute-force integrator, or searching for pulse sequences.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A direction that must be unit length (rotation axis, alignment
    /// target) was not.
    #[error("direction must be unit length, got |v| = {norm}")]
    NonUnitDirection { norm: f64 },

    /// Pulse parameters with a vanishing or non-finite entry.
    #[error("invalid pulse parameters eta = {eta}, nu = {nu}: both must be finite and nu nonzero")]
    InvalidPulse { eta: f64, nu: f64 },

    /// A chirp-rate sign the closed forms do not cover directly; flipped
    /// signs are reached through `symmetry_image` instead.
    #[error("nu = {nu} must be positive here; negative rates are reached via symmetry_image")]
    NegativeRate { nu: f64 },

    /// A time that maps outside the pulse window.
    #[error("|nu t| = {s} lies outside the allowed pulse window")]
    OutsideWindow { s: f64 },

    /// Window endpoints given in the wrong order.
    #[error("window endpoints must satisfy nu t0 <= nu tf, got {s0} > {s1}")]
    WindowOrder { s0: f64, s1: f64 },

    /// An invalid truncation cutoff.
    #[error("cutoff ratio must be finite and >= 0, got {delta}")]
    InvalidCutoff { delta: f64 },

    /// Integrator tolerances that are not positive finite numbers.
    #[error("tolerances must be positive, got rel_tol = {rel_tol}, abs_tol = {abs_tol}")]
    InvalidTolerance { rel_tol: f64, abs_tol: f64 },

    /// The integrator or quadrature could not reach its tolerance within
    /// the configured work budget.
    #[error("step budget of {max_steps} exhausted before reaching tolerance")]
    StepBudget { max_steps: usize },

    /// A requested scalar component outside the solvable range.
    #[error("target scalar component must lie in (0, 1], got {value}")]
    TargetOutOfRange { value: f64 },

    /// A requested rotation angle outside the synthesizable range.
    #[error("rotation angle must lie strictly inside (-2*pi, 2*pi), got {phi}")]
    AngleOutOfRange { phi: f64 },

    /// The axis-alignment search found no pulse pair within tolerance.
    #[error(
        "axis alignment failed: best residual {best_residual:.3e} at (x1, x2) = ({x1}, {x2})"
    )]
    SearchFailed { best_residual: f64, x1: f64, x2: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
