//! Universal single-qubit gate synthesis from chirped pulses.
//!
//! A single full pulse realizes a one-parameter family of propagators
//! `U0(x)`, which is not universal on its own. Composing two pulses
//! `R = U0(x2) U0(x1)` and conjugating a third, `R^dagger U0(xbar) R`,
//! produces a rotation whose angle is set by `xbar` alone (the scalar
//! component survives conjugation untouched) and whose axis is steered by
//! `(x1, x2)`. The reachable axes are read off the conjugation surfaces
//! [`s_vector`] and [`t_vector`] — the images of the y and z axes under
//! `R` — which cover the whole sphere once the pulse ratios range over a
//! modest square. Aligning the surface vector with the wanted axis
//! ([`align_axis`]), solving the scalar component for the wanted angle
//! ([`solve_phase_parameter`]), and sandwiching gives arbitrary rotations
//! about y or z — which generate all of SU(2) — in at most ten pulses.
//!
//! Inverted pulses (both field signs reversed) enter through
//! [`crate::protocol::symmetry_image`]; nothing here integrates dynamics
//! or re-derives propagators.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::protocol::{
    full_window_phase, ideal_propagator, symmetry_image, PulseParams, SymmetryFlip,
};
use crate::su2::{BlochVector, Unitary2};

/// Ratios of the two pulses whose composition steers the conjugation
/// frame; `x1` is applied first in time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulsePair {
    pub x1: f64,
    pub x2: f64,
}

/// One pulse in a synthesized sequence: its shape ratio and whether the
/// pulse is run with both field signs reversed (the exact inverse).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseDescriptor {
    pub x: f64,
    pub inverted: bool,
}

/// A pulse program in time order (first pulse first).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseSequence {
    pub pulses: Vec<PulseDescriptor>,
}

impl PulseSequence {
    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }
}

/// Which conjugation surface to work with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    /// Image of the y axis under the composed pair.
    S,
    /// Image of the z axis under the composed pair.
    T,
}

/// Which axis the synthesized gate rotates about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateAxis {
    Y,
    Z,
}

/// Knobs for the axis-alignment search. The defaults match the coverage
/// analysis: ratios searched over `[-3, 3]^2` on a `121 x 121` grid, local
/// minima polished until the residual drops below `1e-12`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Half-width `W` of the square `[-W, W]^2` of searched ratios.
    pub grid_half_width: f64,
    /// Grid resolution per axis for the coarse scan.
    pub grid_points_per_axis: usize,
    /// Residual `1 - dot(surface, target)` below which alignment counts
    /// as solved.
    pub refine_tol: f64,
    /// Iteration cap for each local refinement.
    pub max_refine_iters: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_half_width: 3.0,
            grid_points_per_axis: 121,
            refine_tol: 1e-12,
            max_refine_iters: 400,
        }
    }
}

/// The composed steering propagator `U0(x2) * U0(x1)`.
pub fn compose_pair(pair: &PulsePair) -> Unitary2 {
    ideal_propagator(pair.x2).compose(ideal_propagator(pair.x1))
}

/// Where the composed pair sends the y axis: with `R = compose_pair` in
/// components `(R0, R)`, expanding `R sigma_y R^dagger` gives
///
/// ```text
/// S = (2 Rx Ry + 2 R0 Rz,  R0^2 - Rx^2 + Ry^2 - Rz^2,  2 Ry Rz - 2 R0 Rx)
/// ```
///
/// which is always unit length.
pub fn s_vector(pair: &PulsePair) -> BlochVector {
    let u = compose_pair(pair);
    let (r0, r) = (u.r0(), u.r());
    BlochVector::new(
        2.0 * (r.x * r.y + r0 * r.z),
        r0 * r0 - r.x * r.x + r.y * r.y - r.z * r.z,
        2.0 * (r.y * r.z - r0 * r.x),
    )
}

/// Where the composed pair sends the z axis; the z-image analogue of
/// [`s_vector`]:
///
/// ```text
/// T = (2 Rx Rz - 2 R0 Ry,  2 Ry Rz + 2 R0 Rx,  R0^2 - Rx^2 - Ry^2 + Rz^2)
/// ```
pub fn t_vector(pair: &PulsePair) -> BlochVector {
    let u = compose_pair(pair);
    let (r0, r) = (u.r0(), u.r());
    BlochVector::new(
        2.0 * (r.x * r.z - r0 * r.y),
        2.0 * (r.y * r.z + r0 * r.x),
        r0 * r0 - r.x * r.x - r.y * r.y + r.z * r.z,
    )
}

/// [`s_vector`] or [`t_vector`] according to `kind`.
pub fn surface_vector(kind: SurfaceKind, pair: &PulsePair) -> BlochVector {
    match kind {
        SurfaceKind::S => s_vector(pair),
        SurfaceKind::T => t_vector(pair),
    }
}

/// Finds a pulse pair whose surface vector points along `target` (a unit
/// vector, to within `1e-9`), i.e. drives the residual
/// `1 - dot(surface, target)` below `config.refine_tol`.
///
/// The search is deterministic: a coarse scan over the grid, then local
/// polishing of the grid's local minima (best first), then the winner
/// among all successes by smallest `|x1| + |x2|`, with ties broken
/// lexicographically. Polishing is unconstrained, so the returned ratios
/// can land outside the scanned square when the optimum sits past its
/// edge. If nothing reaches the tolerance the error carries the best
/// residual found and where it was.
pub fn align_axis(
    kind: SurfaceKind,
    target: BlochVector,
    config: &SearchConfig,
) -> Result<PulsePair> {
    let norm = target.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitDirection { norm });
    }
    let n = config.grid_points_per_axis.max(2);
    let w = config.grid_half_width;
    let spacing = 2.0 * w / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|k| -w + k as f64 * spacing).collect();

    let objective = |x1: f64, x2: f64| -> f64 {
        1.0 - surface_vector(kind, &PulsePair { x1, x2 }).dot(target)
    };

    // Coarse scan; the propagators depend on one ratio each, so they are
    // shared across the row/column structure of the grid.
    let propagators: Vec<Unitary2> = xs.iter().map(|&x| ideal_propagator(x)).collect();
    let grid: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let steered = propagators[j].compose(propagators[i]);
                    let v = surface_vector_of(kind, steered);
                    1.0 - v.dot(target)
                })
                .collect()
        })
        .collect();

    // Local minima of the coarse scan, best first, give the refinement
    // starting points.
    let mut starts: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let val = grid[i][j];
            let mut is_min = true;
            'neighbors: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                        continue;
                    }
                    if grid[ni as usize][nj as usize] < val {
                        is_min = false;
                        break 'neighbors;
                    }
                }
            }
            if is_min {
                starts.push((val, i, j));
            }
        }
    }
    starts.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    starts.truncate(16);

    let mut best: Option<(f64, f64, f64)> = None; // (residual, x1, x2)
    let mut solved: Vec<(f64, f64, f64)> = Vec::new();
    for &(_, i, j) in &starts {
        let (point, residual) = nelder_mead(
            &objective,
            (xs[i], xs[j]),
            0.5 * spacing,
            config.max_refine_iters,
            0.1 * config.refine_tol,
        );
        let candidate = (residual, point.0, point.1);
        if best.map_or(true, |b| residual < b.0) {
            best = Some(candidate);
        }
        if residual <= config.refine_tol {
            solved.push(candidate);
        }
    }

    match solved.into_iter().min_by(|a, b| {
        let key_a = (a.1.abs() + a.2.abs(), a.1, a.2);
        let key_b = (b.1.abs() + b.2.abs(), b.1, b.2);
        key_a.partial_cmp(&key_b).unwrap_or(std::cmp::Ordering::Equal)
    }) {
        Some((_, x1, x2)) => Ok(PulsePair { x1, x2 }),
        None => {
            let (best_residual, x1, x2) = best.unwrap_or((f64::INFINITY, f64::NAN, f64::NAN));
            Err(Error::SearchFailed { best_residual, x1, x2 })
        }
    }
}

/// [`surface_vector`] on an already-composed steering propagator.
fn surface_vector_of(kind: SurfaceKind, steered: Unitary2) -> BlochVector {
    match kind {
        SurfaceKind::S => steered.conjugate_bloch(BlochVector::Y),
        SurfaceKind::T => steered.conjugate_bloch(BlochVector::Z),
    }
}

/// Downhill-simplex minimization in two variables. Returns the best
/// vertex and its value once the value target, a rounding-scale simplex,
/// or the iteration cap is reached.
fn nelder_mead(
    f: &dyn Fn(f64, f64) -> f64,
    start: (f64, f64),
    step: f64,
    max_iters: usize,
    value_target: f64,
) -> ((f64, f64), f64) {
    let mut simplex = [
        (start, f(start.0, start.1)),
        ((start.0 + step, start.1), f(start.0 + step, start.1)),
        ((start.0, start.1 + step), f(start.0, start.1 + step)),
    ];

    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let (best, worst) = (simplex[0], simplex[2]);
        if best.1 <= value_target {
            break;
        }
        let diameter = (best.0 .0 - worst.0 .0)
            .abs()
            .max((best.0 .1 - worst.0 .1).abs())
            .max((simplex[1].0 .0 - worst.0 .0).abs())
            .max((simplex[1].0 .1 - worst.0 .1).abs());
        if diameter < 1e-10 {
            break;
        }

        let centroid = (
            0.5 * (simplex[0].0 .0 + simplex[1].0 .0),
            0.5 * (simplex[0].0 .1 + simplex[1].0 .1),
        );
        let reflect = (
            centroid.0 + (centroid.0 - worst.0 .0),
            centroid.1 + (centroid.1 - worst.0 .1),
        );
        let f_reflect = f(reflect.0, reflect.1);

        if f_reflect < best.1 {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - worst.0 .0),
                centroid.1 + 2.0 * (centroid.1 - worst.0 .1),
            );
            let f_expand = f(expand.0, expand.1);
            simplex[2] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[1].1 {
            simplex[2] = (reflect, f_reflect);
        } else {
            let toward = if f_reflect < worst.1 { reflect } else { worst.0 };
            let f_toward = if f_reflect < worst.1 { f_reflect } else { worst.1 };
            let contract = (
                centroid.0 + 0.5 * (toward.0 - centroid.0),
                centroid.1 + 0.5 * (toward.1 - centroid.1),
            );
            let f_contract = f(contract.0, contract.1);
            if f_contract < f_toward {
                simplex[2] = (contract, f_contract);
            } else {
                // Shrink everything toward the best vertex.
                for k in 1..3 {
                    let p = (
                        best.0 .0 + 0.5 * (simplex[k].0 .0 - best.0 .0),
                        best.0 .1 + 0.5 * (simplex[k].0 .1 - best.0 .1),
                    );
                    simplex[k] = (p, f(p.0, p.1));
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    (simplex[0].0, simplex[0].1)
}

/// Solves `sin(Theta_0(x)) * sin(phi(x)) = target` for the source-pulse
/// ratio `x` on `[0, sqrt(3)]`, where the left side — the scalar
/// component of the untruncated propagator — falls strictly from 1 to 0.
/// Plain bisection to an interval of width `1e-13`.
pub fn solve_phase_parameter(target_r0: f64) -> Result<f64> {
    if !(target_r0 > 0.0 && target_r0 <= 1.0) {
        return Err(Error::TargetOutOfRange { value: target_r0 });
    }
    if target_r0 == 1.0 {
        return Ok(0.0);
    }
    let g = |x: f64| full_window_phase(x).sin() / x.hypot(1.0);
    let mut lo = 0.0f64;
    let mut hi = 3f64.sqrt();
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= target_r0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Builds a pulse program for the rotation `exp(i * phi * J_axis)` with
/// `phi` strictly inside `(-2 pi, 2 pi)`.
///
/// A sandwich block `R^dagger U0(xbar) R` realizes any rotation angle of
/// magnitude below `pi` about any axis, so angles below `pi/2` in
/// magnitude use one block and everything else splits evenly into two
/// identical blocks; `phi = 0` needs no pulses at all. Each block is five
/// pulses — steering pair, source pulse, inverted steering pair — so a
/// program is never longer than ten pulses.
pub fn synthesize_gate(
    axis: GateAxis,
    phi: f64,
    config: &SearchConfig,
) -> Result<PulseSequence> {
    if !(phi.abs() < 2.0 * std::f64::consts::PI) {
        return Err(Error::AngleOutOfRange { phi });
    }
    if phi == 0.0 {
        return Ok(PulseSequence::default());
    }
    let blocks: usize = if phi.abs() < std::f64::consts::FRAC_PI_2 { 1 } else { 2 };
    let psi = phi / blocks as f64;

    let x_bar = solve_phase_parameter((0.5 * psi).cos())?;
    let source = ideal_propagator(x_bar);
    let direction = source.r().normalized().scaled(psi.signum());
    let kind = match axis {
        GateAxis::Y => SurfaceKind::S,
        GateAxis::Z => SurfaceKind::T,
    };
    let pair = align_axis(kind, direction, config)?;

    let block = [
        PulseDescriptor { x: pair.x1, inverted: false },
        PulseDescriptor { x: pair.x2, inverted: false },
        PulseDescriptor { x: x_bar, inverted: false },
        PulseDescriptor { x: pair.x2, inverted: true },
        PulseDescriptor { x: pair.x1, inverted: true },
    ];
    Ok(PulseSequence { pulses: block.iter().copied().cycle().take(5 * blocks).collect() })
}

/// Multiplies out a pulse program: later pulses are applied on the left,
/// inverted pulses contribute their exact inverse through
/// [`symmetry_image`]. All ratios in the sequence must be finite.
pub fn evaluate_sequence(sequence: &PulseSequence) -> Unitary2 {
    sequence.pulses.iter().fold(Unitary2::IDENTITY, |acc, pulse| {
        let propagator = if pulse.inverted {
            let p = PulseParams::from_ratio(pulse.x).expect("sequence ratios are finite");
            symmetry_image(&p, SymmetryFlip::NegateBoth).expect("unit-rate pulse is forward")
        } else {
            ideal_propagator(pulse.x)
        };
        propagator.compose(acc)
    })
}

/// Fraction of the unit sphere touched by `points`, measured on an
/// equal-area binning: `bands` slices of equal height in z, each cut into
/// `sectors` equal azimuthal sectors.
pub fn sphere_coverage(
    points: impl IntoIterator<Item = BlochVector>,
    bands: usize,
    sectors: usize,
) -> f64 {
    assert!(bands > 0 && sectors > 0, "binning must be nonempty");
    let mut hit = vec![false; bands * sectors];
    for v in points {
        let p = v.normalized();
        let band = (((p.z + 1.0) / 2.0 * bands as f64) as usize).min(bands - 1);
        let azimuth = p.y.atan2(p.x) + std::f64::consts::PI;
        let sector =
            ((azimuth / (2.0 * std::f64::consts::PI) * sectors as f64) as usize).min(sectors - 1);
        hit[band * sectors + sector] = true;
    }
    hit.iter().filter(|&&h| h).count() as f64 / (bands * sectors) as f64
}
