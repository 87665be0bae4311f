//! Chirped-pulse driving of a single qubit, worked out exactly.
//!
//! A two-level system driven by a constant transverse field and a
//! longitudinal sweep `Omega_z(t) = Omega_x * nu * t / sqrt(1 - (nu t)^2)`
//! has a propagator in closed form over any part of the pulse window.
//! This crate implements that closed form and everything the analysis of
//! it needs:
//!
//! * [`su2`] — exact SU(2) arithmetic on scalar–vector components, with
//!   global phase kept (so `U` and `-U` are different gates) and a
//!   phase-sensitive fidelity.
//! * [`protocol`] — the pulse closed forms: fields, frame angles,
//!   accumulated phases, ideal/truncated/windowed propagators, energy
//!   levels, and the sign-flip symmetry images.
//! * [`oracle`] — an independent check: direct Runge–Kutta integration of
//!   the Schrödinger equation (in an angle variable that regularizes the
//!   window-edge divergence) and direct quadrature of the phase integral,
//!   compared against the closed forms.
//! * [`synthesis`] — universal gate construction: conjugation surfaces of
//!   composed pulse pairs, deterministic axis alignment, angle solving,
//!   and pulse programs of at most ten pulses for arbitrary y/z rotations.
//!
//! Truncating the sweep where `|Omega_z| / Omega_x = 1 / delta` perturbs
//! the ideal propagator; the infidelity it causes and the cutoff needed to
//! keep it below a budget are the central quantities the library and its
//! CLI expose.

pub mod error;
pub mod oracle;
pub mod protocol;
pub mod su2;
pub mod synthesis;

pub use error::{Error, Result};
pub use su2::{gate_fidelity, BlochVector, Unitary2};
