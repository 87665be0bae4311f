//! Implementations behind each subcommand. Every function validates its
//! inputs, computes rows in parallel where the work is per-row
//! independent, and returns a [`SweepResult`] plus whatever summary the
//! binary needs to pick an exit status.
//!
//! Failures split into two kinds: bad invocations (unknown key in a grid
//! string, too few points, a cutoff outside its domain) and numeric
//! failures (a search that does not converge, an integrator that exhausts
//! its step budget). The binary maps the former to exit code 64 and the
//! latter to exit code 2.

use std::fmt;

use rayon::prelude::*;

use chirpgate::gate_fidelity;
use chirpgate::oracle::{verify_analytic, IntegratorConfig};
use chirpgate::protocol::{
    adiabatic_energies_scaled, ideal_propagator, nonadiabatic_energies_scaled,
    nonadiabatic_factor, truncated_propagator, CutoffSpec,
};
use chirpgate::synthesis::{
    evaluate_sequence, surface_vector, synthesize_gate, GateAxis, PulsePair, SearchConfig,
    SurfaceKind,
};

use crate::sweep::SweepResult;

/// How badly a command failed, as seen from the shell.
#[derive(Debug)]
pub enum CmdError {
    /// The invocation itself was malformed; exit code 64.
    Usage(String),
    /// The computation ran and failed to meet its tolerance; exit code 2.
    Numeric(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => 64,
            CmdError::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Usage(msg) => write!(f, "usage error: {msg}"),
            CmdError::Numeric(msg) => write!(f, "{msg}"),
        }
    }
}

fn require(condition: bool, message: &str) -> Result<(), CmdError> {
    if condition {
        Ok(())
    } else {
        Err(CmdError::Usage(message.to_owned()))
    }
}

/// `points` evenly spaced samples from `lo` to `hi` inclusive.
fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points).map(|i| lo + (hi - lo) * (i as f64 / last)).collect()
}

/// Instantaneous and adiabatic energy levels across the sweep, in units
/// of the drive amplitude. The sweep variable stops just short of the
/// window edges, where the levels diverge.
pub fn cmd_energies(x: f64, points: usize) -> Result<SweepResult, CmdError> {
    require(x.is_finite(), "--x must be finite")?;
    require(points >= 2, "--points must be at least 2")?;

    const EDGE_MARGIN: f64 = 1e-6;
    let samples = linspace(-1.0 + EDGE_MARGIN, 1.0 - EDGE_MARGIN, points);
    let rows: Vec<Vec<f64>> = samples
        .par_iter()
        .map(|&s| {
            let (e_plus, e_minus) =
                nonadiabatic_energies_scaled(x, s).expect("sample is inside the window");
            let (a_plus, a_minus) =
                adiabatic_energies_scaled(s).expect("sample is inside the window");
            vec![s, e_plus, e_minus, a_plus, a_minus]
        })
        .collect();

    let mut result = SweepResult::new(
        "energies",
        vec!["s", "e_plus", "e_minus", "e_adiabatic_plus", "e_adiabatic_minus"],
    );
    result.push_metadata("x", x);
    result.push_metadata("points", points);
    for row in rows {
        result.push_row(row);
    }
    Ok(result)
}

/// Gate fidelity of the truncated pulse against the full-window pulse,
/// swept over a log-spaced cutoff grid. `f_full` compares the complete
/// propagators; `f_tilde` compares only their interior factors, isolating
/// the part of the loss that the entry and exit frames cannot absorb.
pub fn cmd_fidelity_sweep(
    xs: &[f64],
    delta_min: f64,
    delta_max: f64,
    delta_steps: usize,
) -> Result<SweepResult, CmdError> {
    require(!xs.is_empty(), "--x needs at least one ratio")?;
    require(xs.iter().all(|v| v.is_finite()), "--x entries must be finite")?;
    require(
        delta_min.is_finite() && delta_min > 0.0,
        "--delta-min must be positive",
    )?;
    require(
        delta_max.is_finite() && delta_max >= delta_min,
        "--delta-max must be at least --delta-min",
    )?;
    require(delta_steps >= 2, "--delta-steps must be at least 2")?;

    let log_grid = linspace(delta_min.ln(), delta_max.ln(), delta_steps);
    let cases: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| log_grid.iter().map(move |&g| (x, g.exp())))
        .collect();
    let rows: Vec<Vec<f64>> = cases
        .par_iter()
        .map(|&(x, delta)| {
            let cutoff = CutoffSpec::new(delta).expect("grid deltas are valid");
            let ideal = ideal_propagator(x);
            let truncated = truncated_propagator(x, &cutoff);
            let f_full = gate_fidelity(ideal, truncated);
            let f_tilde = gate_fidelity(
                nonadiabatic_factor(x, &CutoffSpec::IDEAL),
                nonadiabatic_factor(x, &cutoff),
            );
            vec![1.0 / delta, x, f_full, f_tilde]
        })
        .collect();

    let mut result =
        SweepResult::new("fidelity-sweep", vec!["inv_delta", "x", "f_full", "f_tilde"]);
    result.push_metadata(
        "x",
        xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
    );
    result.push_metadata("delta_min", delta_min);
    result.push_metadata("delta_max", delta_max);
    result.push_metadata("delta_steps", delta_steps);
    for row in rows {
        result.push_row(row);
    }
    Ok(result)
}

/// Image of a fixed axis under pulse pairs over a square ratio grid —
/// the raw material the alignment search scans.
pub fn cmd_surfaces(
    kind: SurfaceKind,
    half_width: f64,
    points: usize,
) -> Result<SweepResult, CmdError> {
    require(
        half_width.is_finite() && half_width > 0.0,
        "--half-width must be positive",
    )?;
    require(points >= 2, "--points must be at least 2")?;

    let axis = linspace(-half_width, half_width, points);
    let rows: Vec<Vec<f64>> = axis
        .par_iter()
        .flat_map_iter(|&x1| {
            axis.iter().map(move |&x2| {
                let v = surface_vector(kind, &PulsePair { x1, x2 });
                vec![x1, x2, v.x, v.y, v.z]
            })
        })
        .collect();

    let mut result = SweepResult::new("surfaces", vec!["x1", "x2", "v_x", "v_y", "v_z"]);
    result.push_metadata(
        "mode",
        match kind {
            SurfaceKind::S => "s",
            SurfaceKind::T => "t",
        },
    );
    result.push_metadata("half_width", half_width);
    result.push_metadata("points", points);
    for row in rows {
        result.push_row(row);
    }
    Ok(result)
}

/// Pulse program realizing a rotation about the chosen axis, one row per
/// pulse, plus the achieved infidelity in the metadata. The caller turns
/// an infidelity at or above `1e-9` into a failing exit status.
pub fn cmd_synthesize(axis: GateAxis, phi: f64) -> Result<(SweepResult, f64), CmdError> {
    require(phi.is_finite(), "--phi must be finite")?;
    require(
        phi.abs() < 2.0 * std::f64::consts::PI,
        "--phi must lie strictly inside (-2*pi, 2*pi)",
    )?;

    let config = SearchConfig::default();
    let sequence = synthesize_gate(axis, phi, &config).map_err(classify_library_error)?;
    let realized = evaluate_sequence(&sequence);
    let target = match axis {
        GateAxis::Y => chirpgate::Unitary2::rotation_y(0.5 * phi),
        GateAxis::Z => chirpgate::Unitary2::rotation_z(0.5 * phi),
    };
    let infidelity = 1.0 - gate_fidelity(realized, target);

    let mut result = SweepResult::new("synthesize", vec!["pulse_index", "x", "inverted"]);
    result.push_metadata(
        "axis",
        match axis {
            GateAxis::Y => "y",
            GateAxis::Z => "z",
        },
    );
    result.push_metadata("phi", phi);
    result.push_metadata("pulses", sequence.len());
    result.push_metadata("infidelity", format!("{infidelity:e}"));
    for (index, pulse) in sequence.pulses.iter().enumerate() {
        result.push_row(vec![index as f64, pulse.x, f64::from(u8::from(pulse.inverted))]);
    }
    Ok((result, infidelity))
}

/// Integrates the dynamics on a grid of (ratio, cutoff) points and
/// tabulates the disagreement with the closed forms. Returns whether
/// every point stayed below the `1e-9` infidelity bar.
pub fn cmd_verify(grid: Option<&str>) -> Result<(SweepResult, bool), CmdError> {
    let (xs, deltas) = match grid {
        Some(text) => parse_grid(text)?,
        None => (
            vec![0.0, 0.5, 1.0, 3.0f64.sqrt(), 3.0],
            vec![1.0, 0.1, 1.0 / 30.0, 0.01, 0.0],
        ),
    };

    let config = IntegratorConfig::default();
    let cases: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| deltas.iter().map(move |&delta| (x, delta)))
        .collect();
    let reports: Vec<Result<Vec<f64>, CmdError>> = cases
        .par_iter()
        .map(|&(x, delta)| {
            let cutoff = CutoffSpec::new(delta).map_err(classify_library_error)?;
            let report =
                verify_analytic(x, &cutoff, &config).map_err(classify_library_error)?;
            Ok(vec![
                x,
                delta,
                report.infidelity,
                report.max_unitarity_drift,
                report.steps_taken as f64,
            ])
        })
        .collect();

    let mut result =
        SweepResult::new("verify", vec!["x", "delta", "infidelity", "drift", "steps"]);
    result.push_metadata(
        "x",
        xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
    );
    result.push_metadata(
        "delta",
        deltas.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
    );
    result.push_metadata("rel_tol", format!("{:e}", config.rel_tol));
    result.push_metadata("abs_tol", format!("{:e}", config.abs_tol));

    const INFIDELITY_BAR: f64 = 1e-9;
    let mut all_ok = true;
    for report in reports {
        let row = report?;
        all_ok &= row[2] < INFIDELITY_BAR;
        result.push_row(row);
    }
    result.push_metadata("all_below_1e-9", all_ok);
    Ok((result, all_ok))
}

/// Parses a verification grid like `x=0,1,3;delta=0.1,0`. Both keys must
/// appear exactly once, in either order, each with at least one finite
/// value; cutoffs must be nonnegative.
pub fn parse_grid(text: &str) -> Result<(Vec<f64>, Vec<f64>), CmdError> {
    let mut xs: Option<Vec<f64>> = None;
    let mut deltas: Option<Vec<f64>> = None;
    let parts: Vec<&str> = text.split(';').collect();
    require(parts.len() == 2, "--grid needs exactly two ;-separated lists")?;
    for part in parts {
        let (key, values) = part
            .split_once('=')
            .ok_or_else(|| CmdError::Usage(format!("--grid segment '{part}' lacks '='")))?;
        let parsed: Vec<f64> = values
            .split(',')
            .map(|token| {
                token.trim().parse::<f64>().map_err(|_| {
                    CmdError::Usage(format!("--grid value '{token}' is not a number"))
                })
            })
            .collect::<Result<_, _>>()?;
        require(!parsed.is_empty(), "--grid lists cannot be empty")?;
        require(
            parsed.iter().all(|v| v.is_finite()),
            "--grid values must be finite",
        )?;
        let slot = match key.trim() {
            "x" => &mut xs,
            "delta" => {
                require(
                    parsed.iter().all(|&v| v >= 0.0),
                    "--grid cutoffs must be nonnegative",
                )?;
                &mut deltas
            }
            other => {
                return Err(CmdError::Usage(format!(
                    "--grid key '{other}' is not one of x, delta"
                )))
            }
        };
        require(slot.is_none(), "--grid repeats a key")?;
        *slot = Some(parsed);
    }
    match (xs, deltas) {
        (Some(xs), Some(deltas)) => Ok((xs, deltas)),
        _ => Err(CmdError::Usage(
            "--grid must provide both x=... and delta=...".to_owned(),
        )),
    }
}

/// Library errors that stem from values the user typed are usage errors;
/// everything else is a numeric failure.
fn classify_library_error(error: chirpgate::Error) -> CmdError {
    use chirpgate::Error;
    match error {
        Error::InvalidPulse { .. }
        | Error::InvalidCutoff { .. }
        | Error::AngleOutOfRange { .. }
        | Error::TargetOutOfRange { .. } => CmdError::Usage(error.to_string()),
        other => CmdError::Numeric(other.to_string()),
    }
}
