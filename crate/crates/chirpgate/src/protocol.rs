//! Closed forms for the chirped-pulse driving protocol.
//!
//! The qubit is driven by a constant transverse field `Omega_x = eta`
//! together with a longitudinal sweep `Omega_z(t) = eta * nu * t /
//! sqrt(1 - (nu t)^2)`, so the full window is `t in (-1/nu, 1/nu)` and
//! every quantity reduces to the dimensionless pair
//! `x = eta / nu`, `s = nu * t`. A time-dependent frame rotation makes the
//! Hamiltonian diagonal up to a single accumulated phase, which yields the
//! propagator over any window in closed form:
//!
//! ```text
//! U(t, t0) = G(t) * exp(-i * Theta * sigma_z) * G(t0)^dagger,
//! G(t)     = exp(i * theta(t) * J_y) * exp(i * phi * J_x),
//! ```
//!
//! with `theta(t) = -arccos(nu t)`, the tilt angle
//! `phi = arccos(x / sqrt(1 + x^2))`, and the phase `Theta` equal to half
//! the integral of the adiabatic splitting. Over the full window this
//! collapses to a single rotation sandwiched between fixed frame changes,
//! and truncating the sweep at `|Omega_z| = Omega_x / delta` shortens the
//! rotation angle and tilts the frame edges, which is the entire
//! truncation error analysed in [`crate::oracle`].
//!
//! Propagators are only provided for `nu > 0`; the sign-flipped pulses
//! `nu -> -nu` and `(eta, nu) -> (-eta, -nu)` are exact conjugations or
//! inverses of the base case and are exposed through [`symmetry_image`].

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::su2::{BlochVector, Unitary2};

/// Amplitude and chirp rate of a pulse: `Omega_x = eta` throughout the
/// window and `Omega_z(t) = eta * nu * t / sqrt(1 - (nu t)^2)`.
///
/// Both entries must be finite and `nu` nonzero; the sign conventions in
/// this module otherwise follow the fields literally.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseParams {
    eta: f64,
    nu: f64,
}

impl PulseParams {
    pub fn new(eta: f64, nu: f64) -> Result<Self> {
        if !eta.is_finite() || !nu.is_finite() || nu == 0.0 {
            return Err(Error::InvalidPulse { eta, nu });
        }
        Ok(PulseParams { eta, nu })
    }

    /// The pulse of unit chirp rate with ratio `x`, i.e. `eta = x, nu = 1`.
    pub fn from_ratio(x: f64) -> Result<Self> {
        PulseParams::new(x, 1.0)
    }

    /// Transverse amplitude `eta`.
    pub fn eta(self) -> f64 {
        self.eta
    }

    /// Chirp rate `nu`.
    pub fn nu(self) -> f64 {
        self.nu
    }

    /// The shape ratio `x = eta / nu` that all closed forms depend on.
    pub fn ratio(self) -> f64 {
        self.eta / self.nu
    }

    /// Tilt angle `phi = arccos(eta / sqrt(eta^2 + nu^2))`, in `[0, pi]`.
    pub fn phi(self) -> f64 {
        self.nu.abs().atan2(self.eta)
    }

    fn require_forward(self) -> Result<Self> {
        if self.nu < 0.0 {
            return Err(Error::NegativeRate { nu: self.nu });
        }
        Ok(self)
    }
}

/// Where the sweep is cut off: `delta = Omega_x / |Omega_z(tau)|` is the
/// inverse of the longitudinal field reached at the truncation time, so
/// `delta = 0` is the untruncated pulse and larger `delta` cuts earlier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffSpec {
    delta: f64,
}

impl CutoffSpec {
    /// The untruncated pulse, `delta = 0`.
    pub const IDEAL: CutoffSpec = CutoffSpec { delta: 0.0 };

    pub fn new(delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::InvalidCutoff { delta });
        }
        Ok(CutoffSpec { delta })
    }

    /// The cutoff from the retained window fraction `nu * tau` in `(0, 1]`.
    pub fn from_window_fraction(s_tau: f64) -> Result<Self> {
        if !(s_tau > 0.0 && s_tau <= 1.0) {
            return Err(Error::InvalidCutoff { delta: f64::NAN });
        }
        CutoffSpec::new((1.0 / (s_tau * s_tau) - 1.0).max(0.0).sqrt())
    }

    pub fn delta(self) -> f64 {
        self.delta
    }

    /// Retained fraction of the full window:
    /// `nu * tau = 1 / sqrt(1 + delta^2)`.
    pub fn window_fraction(self) -> f64 {
        1.0 / self.delta.hypot(1.0)
    }

    /// Half-width of the window in the angle variable `u = arcsin(nu t)`:
    /// `arccot(delta)`, which is `pi/2` for the untruncated pulse.
    pub(crate) fn half_span_u(self) -> f64 {
        arccot(self.delta)
    }
}

/// `arccot` on `[0, inf)`, valued in `(0, pi/2]`.
pub(crate) fn arccot(v: f64) -> f64 {
    FRAC_PI_2 - v.atan()
}

/// Accumulated rotation phase over a window, in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct PhaseValue(f64);

impl PhaseValue {
    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Which field-sign flip of a pulse to map onto the base propagator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryFlip {
    /// Reverse the sweep direction only: `nu -> -nu`.
    NegateNu,
    /// Reverse both fields: `(eta, nu) -> (-eta, -nu)`.
    NegateBoth,
}

/// Tilt angle `phi = arccos(x / sqrt(1 + x^2))` of the rotated-frame axis
/// away from z, in `(0, pi)`.
pub fn tilt_angle(x: f64) -> f64 {
    1.0f64.atan2(x)
}

/// The instantaneous drive `(Omega_x, Omega_z)` at time `t`.
///
/// `Omega_z` diverges at the window edges, so `|nu t| < 1` is required
/// strictly; there is no clamping.
pub fn field_components(t: f64, p: &PulseParams) -> Result<(f64, f64)> {
    let s = p.nu * t;
    if !(s.abs() < 1.0) {
        return Err(Error::OutsideWindow { s });
    }
    let omega_z = p.eta * s / ((1.0 - s) * (1.0 + s)).sqrt();
    Ok((p.eta, omega_z))
}

/// Frame angle `theta(t) = -arccos(nu t)`, sweeping `-pi -> 0` across the
/// window. Defined on the closed window `|nu t| <= 1`.
pub fn gauge_angle_theta(t: f64, p: &PulseParams) -> Result<f64> {
    let s = p.nu * t;
    if !(s.abs() <= 1.0) {
        return Err(Error::OutsideWindow { s });
    }
    Ok(-s.acos())
}

/// The phase accumulated between `t0` and `t`: half the integral of the
/// adiabatic splitting, which has the closed form
/// `(1/2) * sqrt(1 + x^2) * (arcsin(nu t) - arcsin(nu t0))` for `nu > 0`.
///
/// Requires `-1 <= nu t0 <= nu t <= 1`; the endpoints are allowed because
/// the splitting's divergence there is integrable.
pub fn total_phase(t0: f64, t: f64, p: &PulseParams) -> Result<PhaseValue> {
    let s0 = p.nu * t0;
    let s1 = p.nu * t;
    if !(s0.abs() <= 1.0) {
        return Err(Error::OutsideWindow { s: s0 });
    }
    if !(s1.abs() <= 1.0) {
        return Err(Error::OutsideWindow { s: s1 });
    }
    if s0 > s1 {
        return Err(Error::WindowOrder { s0, s1 });
    }
    let rate = p.eta.hypot(p.nu) / p.nu;
    Ok(PhaseValue(0.5 * rate * (s1.asin() - s0.asin())))
}

/// Full-window phase `Theta_0(x) = sqrt(1 + x^2) * pi / 2`.
pub fn full_window_phase(x: f64) -> f64 {
    x.hypot(1.0) * FRAC_PI_2
}

/// Truncated-window phase `Theta_delta(x) = sqrt(1 + x^2) * arccot(delta)`,
/// reducing to [`full_window_phase`] at `delta = 0`.
pub fn truncated_window_phase(x: f64, cutoff: &CutoffSpec) -> f64 {
    x.hypot(1.0) * cutoff.half_span_u()
}

/// The propagator of the untruncated pulse in terms of the ratio
/// `x = eta / nu` (for `eta, nu > 0`; other sign combinations follow from
/// [`symmetry_image`]).
///
/// Equivalent closed forms, all of which agree here to rounding error:
/// the windowed product in the limit of the full window, the sandwich
/// `exp(-i arctan(0) J_y) * [central rotation] * exp(i pi J_y)` used by
/// [`truncated_propagator`], and the component form
/// `(sin(Theta_0) sin(phi), -sin(Theta_0) cos(phi), cos(Theta_0), 0)`.
/// Landmark values: `x = 0` gives the identity and `x = sqrt(3)` gives the
/// spin flip `-i sigma_y`.
pub fn ideal_propagator(x: f64) -> Unitary2 {
    truncated_propagator(x, &CutoffSpec::IDEAL)
}

/// The central rotation left over after the frame edges of the truncated
/// propagator are split off:
/// `exp(-i * Theta_delta * (sin(phi) sigma_y + cos(phi) sigma_z))`
/// as an axis–angle rotation about the tilted axis `(0, sin phi, cos phi)`.
pub fn nonadiabatic_factor(x: f64, cutoff: &CutoffSpec) -> Unitary2 {
    let h = x.hypot(1.0);
    let axis = BlochVector::new(0.0, 1.0 / h, x / h);
    let half_angle = -truncated_window_phase(x, cutoff);
    Unitary2::from_axis_angle(axis, half_angle)
        .expect("tilted axis is unit length by construction")
}

/// Propagator of the pulse truncated at `|Omega_z| = Omega_x / delta`:
/// the central rotation of [`nonadiabatic_factor`] between the edge frame
/// changes `exp(-i arctan(delta) J_y)` (left) and
/// `exp(i (pi - arctan(delta)) J_y)` (right). At `delta = 0` this equals
/// [`ideal_propagator`] exactly — same code path, same rounding.
pub fn truncated_propagator(x: f64, cutoff: &CutoffSpec) -> Unitary2 {
    let half_edge = 0.5 * cutoff.delta().atan();
    let entry = Unitary2::rotation_y(FRAC_PI_2 - half_edge);
    let exit = Unitary2::rotation_y(-half_edge);
    exit.compose(nonadiabatic_factor(x, cutoff)).compose(entry)
}

/// Propagator across an arbitrary interior window `[t0, tf]`, via
/// `G(tf) * exp(-i Theta sigma_z) * G(t0)^dagger` with
/// `G(t) = exp(i theta(t) J_y) * exp(i phi J_x)`.
///
/// Requires `nu > 0` and `-1 < nu t0 <= nu tf < 1` strictly; the
/// closed-window limits are reached through [`truncated_propagator`] and
/// [`ideal_propagator`] instead.
pub fn windowed_propagator(t0: f64, tf: f64, p: &PulseParams) -> Result<Unitary2> {
    let p = p.require_forward()?;
    let s0 = p.nu * t0;
    let s1 = p.nu * tf;
    if !(s0.abs() < 1.0) {
        return Err(Error::OutsideWindow { s: s0 });
    }
    if !(s1.abs() < 1.0) {
        return Err(Error::OutsideWindow { s: s1 });
    }
    if s0 > s1 {
        return Err(Error::WindowOrder { s0, s1 });
    }
    let phi = p.phi();
    let frame = |s: f64| {
        Unitary2::rotation_y(-0.5 * s.acos()).compose(Unitary2::rotation_x(0.5 * phi))
    };
    let theta = total_phase(t0, tf, &p)?.radians();
    Ok(frame(s1).compose(Unitary2::rotation_z(-theta)).compose(frame(s0).dagger()))
}

/// Instantaneous eigenvalues `(E_plus, E_minus)` of the driven two-level
/// Hamiltonian expressed through the frame angle:
/// `E_pm = -+ (eta / 2) * cos(phi) / sin(theta(t))`, valid strictly inside
/// the window.
pub fn nonadiabatic_energies(t: f64, p: &PulseParams) -> Result<(f64, f64)> {
    let s = p.nu * t;
    if !(s.abs() < 1.0) {
        return Err(Error::OutsideWindow { s });
    }
    // sin(theta) = -sqrt(1 - s^2) on the branch theta in (-pi, 0).
    let e_plus = 0.5 * p.eta * p.phi().cos() / ((1.0 - s) * (1.0 + s)).sqrt();
    Ok((e_plus, -e_plus))
}

/// Adiabatic eigenvalues `+- Omega(t) / 2` with
/// `Omega = sqrt(Omega_x^2 + Omega_z^2) = |eta| / sqrt(1 - (nu t)^2)`,
/// for comparison against [`nonadiabatic_energies`].
pub fn adiabatic_energies(t: f64, p: &PulseParams) -> Result<(f64, f64)> {
    let s = p.nu * t;
    if !(s.abs() < 1.0) {
        return Err(Error::OutsideWindow { s });
    }
    let e_plus = 0.5 * p.eta.abs() / ((1.0 - s) * (1.0 + s)).sqrt();
    Ok((e_plus, -e_plus))
}

/// [`nonadiabatic_energies`] in the dimensionless variables `(x, s)`, in
/// units of the amplitude `eta`.
pub fn nonadiabatic_energies_scaled(x: f64, s: f64) -> Result<(f64, f64)> {
    if !(s.abs() < 1.0) {
        return Err(Error::OutsideWindow { s });
    }
    let cos_phi = x / x.hypot(1.0);
    let e_plus = 0.5 * cos_phi / ((1.0 - s) * (1.0 + s)).sqrt();
    Ok((e_plus, -e_plus))
}

/// [`adiabatic_energies`] in the dimensionless variables, units of `eta`.
pub fn adiabatic_energies_scaled(s: f64) -> Result<(f64, f64)> {
    if !(s.abs() < 1.0) {
        return Err(Error::OutsideWindow { s });
    }
    let e_plus = 0.5 / ((1.0 - s) * (1.0 + s)).sqrt();
    Ok((e_plus, -e_plus))
}

/// Full-window propagator of a sign-flipped copy of the pulse `p`
/// (which must itself have `nu > 0`), built from the base propagator by
/// exact operator identities rather than re-derivation:
///
/// * [`SymmetryFlip::NegateNu`]: reversing the sweep conjugates the
///   propagator by `sigma_x`, here applied as conjugation by the SU(2)
///   element `i sigma_x`.
/// * [`SymmetryFlip::NegateBoth`]: reversing both fields runs the pulse
///   backwards, giving the Hermitian adjoint.
pub fn symmetry_image(p: &PulseParams, flip: SymmetryFlip) -> Result<Unitary2> {
    let p = p.require_forward()?;
    let base = ideal_propagator(p.ratio());
    Ok(match flip {
        SymmetryFlip::NegateNu => {
            let x_half_turn = Unitary2::rotation_x(FRAC_PI_2);
            x_half_turn.compose(base).compose(x_half_turn.dagger())
        }
        SymmetryFlip::NegateBoth => base.dagger(),
    })
}
