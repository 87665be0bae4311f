//! Acceptance suite: one test per release criterion, each printing a
//! single `criterion N (...): PASS/FAIL` line (visible with
//! `--nocapture`) before asserting.
//!
//! Every check here goes through the public API only, and the matrix
//! algebra used as a cross-check is implemented locally on raw complex
//! 2x2 arrays so that it shares nothing with the library's own
//! scalar–vector arithmetic.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, SQRT_2};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use chirpgate::oracle::{verify_analytic, IntegratorConfig, Method};
use chirpgate::protocol::{
    full_window_phase, ideal_propagator, nonadiabatic_energies, adiabatic_energies,
    symmetry_image, tilt_angle, truncated_propagator, CutoffSpec, PulseParams, SymmetryFlip,
};
use chirpgate::synthesis::{
    align_axis, compose_pair, evaluate_sequence, s_vector, solve_phase_parameter,
    sphere_coverage, surface_vector, synthesize_gate, t_vector, GateAxis, PulseDescriptor,
    PulsePair, PulseSequence, SearchConfig, SurfaceKind,
};
use chirpgate::{gate_fidelity, BlochVector, Unitary2};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

fn report(number: u32, label: &str, started: Instant, outcome: Result<(), String>) {
    let elapsed = started.elapsed().as_secs_f64();
    match &outcome {
        Ok(()) => println!("criterion {number} ({label}): PASS ({elapsed:.2} s)"),
        Err(msg) => println!("criterion {number} ({label}): FAIL — {msg}"),
    }
    if let Err(msg) = outcome {
        panic!("criterion {number} ({label}) failed: {msg}");
    }
}

// ---------------------------------------------------------------------------
// Local complex 2x2 matrix algebra, independent of the library internals.

type M2 = [[Complex64; 2]; 2];

fn matmul(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn adjoint(a: &M2) -> M2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn max_entry_dev(a: &M2, b: &M2) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

/// `exp(i a sigma_x)` as a raw matrix.
fn mx(a: f64) -> M2 {
    let (s, c) = a.sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, s)],
        [Complex64::new(0.0, s), Complex64::new(c, 0.0)],
    ]
}

/// `exp(i a sigma_y)` as a raw matrix.
fn my(a: f64) -> M2 {
    let (s, c) = a.sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
    ]
}

/// `exp(i a sigma_z)` as a raw matrix.
fn mz(a: f64) -> M2 {
    [
        [Complex64::from_polar(1.0, a), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, -a)],
    ]
}

/// Reads the Bloch vector out of a traceless Hermitian `w . sigma`.
fn bloch_of(m: &M2) -> BlochVector {
    BlochVector::new(
        0.5 * (m[0][1] + m[1][0]).re,
        0.5 * (m[1][0] - m[0][1]).im,
        0.5 * (m[0][0] - m[1][1]).re,
    )
}

fn sigma_matrix(v: BlochVector) -> M2 {
    [
        [Complex64::new(v.z, 0.0), Complex64::new(v.x, -v.y)],
        [Complex64::new(v.x, v.y), Complex64::new(-v.z, 0.0)],
    ]
}

fn random_unit_vector(rng: &mut ChaCha8Rng) -> BlochVector {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let azimuth: f64 = rng.gen_range(0.0..2.0 * PI);
    let rho = (1.0 - z * z).sqrt();
    BlochVector::new(rho * azimuth.cos(), rho * azimuth.sin(), z)
}

// ---------------------------------------------------------------------------

#[test]
fn c1_closed_form_landmarks() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let full_flip = full_window_phase(SQRT_3);
    if (full_flip - PI).abs() > 1e-14 {
        failures.push(format!("phase at x = sqrt(3) is {full_flip}, want pi to 1e-14"));
    }
    let full_unit = full_window_phase(1.0);
    if (full_unit - PI / SQRT_2).abs() > 1e-14 {
        failures.push(format!("phase at x = 1 is {full_unit}, want pi/sqrt(2) to 1e-14"));
    }

    let identity_dev = ideal_propagator(0.0).entrywise_distance(Unitary2::IDENTITY);
    if identity_dev > 1e-12 {
        failures.push(format!("propagator at x = 0 deviates from identity by {identity_dev:.3e}"));
    }

    // Stated landmark: the full pulse at x = sqrt(3) equals +i sigma_y.
    let flip = ideal_propagator(SQRT_3);
    let dev_plus = flip.entrywise_distance(Unitary2::rotation_y(FRAC_PI_2));
    if dev_plus > 1e-12 {
        let dev_minus = flip.entrywise_distance(Unitary2::rotation_y(-FRAC_PI_2));
        failures.push(format!(
            "propagator at x = sqrt(3) deviates from +i*sigma_y by {dev_plus:.3e}; \
             it equals -i*sigma_y (deviation {dev_minus:.3e}), one global sign away, \
             and direct integration of the dynamics confirms the minus sign"
        ));
    }

    report(1, "closed-form landmarks", started, collect(failures));
}

#[test]
fn c2_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let xs = [0.0, 0.5, 1.0, SQRT_3, 3.0];
    let deltas = [1.0, 0.1, 1.0 / 30.0, 0.01, 0.0];

    for method in [Method::FixedRk4, Method::AdaptiveRk45] {
        let config = IntegratorConfig { method, ..IntegratorConfig::default() };
        let mut worst = f64::MIN;
        for &x in &xs {
            for &delta in &deltas {
                let cutoff = CutoffSpec::new(delta).expect("grid deltas are valid");
                match verify_analytic(x, &cutoff, &config) {
                    Ok(rep) => {
                        worst = worst.max(rep.infidelity);
                        if !(rep.infidelity < 1e-9) {
                            failures.push(format!(
                                "{method:?} x = {x}, delta = {delta}: infidelity {:.3e}",
                                rep.infidelity
                            ));
                        }
                        if !(rep.max_unitarity_drift < 1e-8) {
                            failures.push(format!(
                                "{method:?} x = {x}, delta = {delta}: drift {:.3e}",
                                rep.max_unitarity_drift
                            ));
                        }
                    }
                    Err(e) => failures.push(format!("{method:?} x = {x}, delta = {delta}: {e}")),
                }
            }
        }
        if worst >= 1e-9 {
            failures.push(format!("{method:?} worst infidelity {worst:.3e}"));
        }
    }

    if started.elapsed().as_secs_f64() >= 10.0 {
        failures.push(format!("took {:.1} s, budget 10 s", started.elapsed().as_secs_f64()));
    }
    report(2, "oracle equivalence", started, collect(failures));
}

#[test]
fn c3_truncation_threshold() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let cutoff_30 = CutoffSpec::new(1.0 / 30.0).expect("valid cutoff");
    for &x in &[1.0, SQRT_3] {
        let err = 1.0 - gate_fidelity(ideal_propagator(x), truncated_propagator(x, &cutoff_30));
        if !(err < 1e-3) {
            failures.push(format!(
                "1 - F at 1/delta = 30, x = {x} is {err:.4e}, not below 1e-3; \
                 the measured curve crosses 1e-3 near 1/delta = 39 for this x, \
                 so the 30:1 cutoff only reaches the order of 1e-3, not strictly below it"
            ));
        }
    }

    for &x in &[1.0, SQRT_3] {
        let ideal = ideal_propagator(x);
        let mut last = f64::NEG_INFINITY;
        for k in 0..50 {
            // 50 log-spaced deltas climbing 1e-3 -> 1.
            let delta = 10f64.powf(-3.0 + 3.0 * k as f64 / 49.0);
            let cutoff = CutoffSpec::new(delta).expect("valid cutoff");
            let err = 1.0 - gate_fidelity(ideal, truncated_propagator(x, &cutoff));
            if !(err > last) {
                failures.push(format!("x = {x}: not increasing at delta = {delta}"));
                break;
            }
            last = err;
        }
    }

    if started.elapsed().as_secs_f64() >= 1.0 {
        failures.push(format!("took {:.2} s, budget 1 s", started.elapsed().as_secs_f64()));
    }
    report(3, "truncation threshold", started, collect(failures));
}

#[test]
fn c4_energy_gaps_at_the_crossing() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let p = PulseParams::new(1.0, 1.0).expect("valid pulse");

    let (e_plus, e_minus) = nonadiabatic_energies(0.0, &p).expect("s = 0 is interior");
    let gap = e_plus - e_minus;
    if (gap - 1.0 / SQRT_2).abs() > 1e-12 {
        failures.push(format!("nonadiabatic gap {gap}, want 1/sqrt(2) to 1e-12"));
    }

    let (a_plus, a_minus) = adiabatic_energies(0.0, &p).expect("s = 0 is interior");
    let adiabatic_gap = a_plus - a_minus;
    if (adiabatic_gap - 1.0).abs() > 1e-12 {
        failures.push(format!("adiabatic gap {adiabatic_gap}, want 1 to 1e-12"));
    }

    report(4, "energy gaps at the crossing", started, collect(failures));
}

#[test]
fn c5_symmetry_identities() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    for _ in 0..50 {
        let x: f64 = rng.gen_range(-3.0..3.0);
        let u = ideal_propagator(x);
        let p = PulseParams::from_ratio(x).expect("finite ratio");

        // Sweep reversal: conjugation by sigma_x equals the reversed-phase
        // tilted rotation followed by the reversed y half-turn.
        let image = symmetry_image(&p, SymmetryFlip::NegateNu).expect("forward pulse");
        let phi = tilt_angle(x);
        let axis = BlochVector::new(0.0, phi.sin(), phi.cos());
        let expected = Unitary2::from_axis_angle(axis, full_window_phase(x))
            .expect("unit axis")
            .compose(Unitary2::rotation_y(-FRAC_PI_2));
        let dev = image.entrywise_distance(expected);
        if dev > 1e-12 {
            failures.push(format!("sweep-reversal identity off by {dev:.3e} at x = {x}"));
        }

        // z-conjugation inverts the propagator.
        let z = Unitary2::rotation_z(FRAC_PI_2);
        let dev = z.compose(u).compose(z.dagger()).entrywise_distance(u.dagger());
        if dev > 1e-12 {
            failures.push(format!("z-conjugation identity off by {dev:.3e} at x = {x}"));
        }

        // A pulse followed by its inverted copy is a perfect identity.
        let sequence = PulseSequence {
            pulses: vec![
                PulseDescriptor { x, inverted: false },
                PulseDescriptor { x, inverted: true },
            ],
        };
        let dev = evaluate_sequence(&sequence).entrywise_distance(Unitary2::IDENTITY);
        if dev > 1e-12 {
            failures.push(format!("pulse + inverted pulse off identity by {dev:.3e} at x = {x}"));
        }
    }

    report(5, "symmetry identities", started, collect(failures));
}

#[test]
fn c6_two_path_component_algebra() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);

    for _ in 0..100 {
        // Full-pulse propagator: factored matrix product vs components.
        let x: f64 = rng.gen_range(-3.0..3.0);
        let phi = tilt_angle(x);
        let theta0 = full_window_phase(x);
        let product = matmul(
            &matmul(&matmul(&mx(0.5 * phi), &mz(-theta0)), &mx(-0.5 * phi)),
            &my(FRAC_PI_2),
        );
        let u = ideal_propagator(x);
        let dev = max_entry_dev(&u.matrix(), &product);
        if dev > 1e-12 {
            failures.push(format!("factored product off by {dev:.3e} at x = {x}"));
        }
        let component_dev = (u.r0() - theta0.sin() * phi.sin())
            .abs()
            .max((u.r().x + theta0.sin() * phi.cos()).abs())
            .max((u.r().y - theta0.cos()).abs())
            .max(u.r().z.abs());
        if component_dev > 1e-12 {
            failures.push(format!("component form off by {component_dev:.3e} at x = {x}"));
        }

        // Pair composition vs plain matrix multiplication.
        let pair = PulsePair {
            x1: rng.gen_range(-3.0..3.0),
            x2: rng.gen_range(-3.0..3.0),
        };
        let composed = compose_pair(&pair);
        let by_matrices = matmul(
            &ideal_propagator(pair.x2).matrix(),
            &ideal_propagator(pair.x1).matrix(),
        );
        let dev = max_entry_dev(&composed.matrix(), &by_matrices);
        if dev > 1e-12 {
            failures.push(format!("composition off by {dev:.3e} for {pair:?}"));
        }

        // Conjugation surfaces vs explicit matrix conjugation.
        let r = composed.matrix();
        for (label, formula, axis) in [
            ("s", s_vector(&pair), BlochVector::Y),
            ("t", t_vector(&pair), BlochVector::Z),
        ] {
            let conjugated = matmul(&r, &matmul(&sigma_matrix(axis), &adjoint(&r)));
            let dev_vec = formula - bloch_of(&conjugated);
            let dev = dev_vec.x.abs().max(dev_vec.y.abs()).max(dev_vec.z.abs());
            if dev > 1e-12 {
                failures.push(format!("{label}-surface off by {dev:.3e} for {pair:?}"));
            }
        }
    }

    report(6, "two-path component algebra", started, collect(failures));
}

#[test]
fn c7_axis_alignment_coverage() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let config = SearchConfig::default();

    for k in 0..100 {
        let target = random_unit_vector(&mut rng);
        let kind = if k % 2 == 0 { SurfaceKind::S } else { SurfaceKind::T };
        match align_axis(kind, target, &config) {
            Ok(pair) => {
                let residual = 1.0 - surface_vector(kind, &pair).dot(target);
                if !(residual < 1e-10) {
                    failures.push(format!("target {k}: residual {residual:.3e}"));
                }
            }
            Err(e) => failures.push(format!("target {k}: {e}")),
        }
    }

    for kind in [SurfaceKind::S, SurfaceKind::T] {
        let mut last = 0.0;
        for &width in &[1.0, 2.0, 3.0] {
            let n = 201;
            let points = (0..n * n).map(|idx| {
                let x1 = -width + 2.0 * width * (idx / n) as f64 / (n - 1) as f64;
                let x2 = -width + 2.0 * width * (idx % n) as f64 / (n - 1) as f64;
                surface_vector(kind, &PulsePair { x1, x2 })
            });
            let coverage = sphere_coverage(points, 20, 50);
            if !(coverage > last) {
                failures.push(format!(
                    "{kind:?} coverage not increasing at width {width}: {coverage} vs {last}"
                ));
            }
            last = coverage;
        }
    }

    if started.elapsed().as_secs_f64() >= 30.0 {
        failures.push(format!("took {:.1} s, budget 30 s", started.elapsed().as_secs_f64()));
    }
    report(7, "axis alignment coverage", started, collect(failures));
}

#[test]
fn c8_phase_condition_solver() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let g = |x: f64| full_window_phase(x).sin() / x.hypot(1.0);

    for k in 1..=99 {
        let target = k as f64 / 100.0;
        match solve_phase_parameter(target) {
            Ok(x) => {
                let residual = (g(x) - target).abs();
                if !(residual < 1e-12) {
                    failures.push(format!("target {target}: residual {residual:.3e}"));
                }
            }
            Err(e) => failures.push(format!("target {target}: {e}")),
        }
    }

    // As the scalar component target vanishes the solution climbs to the
    // spin-flip ratio sqrt(3) ~ 1.732, staying below 1.74.
    let mut previous = 0.0;
    for &target in &[1e-3, 1e-5, 1e-7] {
        let x = solve_phase_parameter(target).expect("positive target");
        if x <= previous {
            failures.push(format!("boundary approach not increasing at target {target}"));
        }
        previous = x;
    }
    if (previous - SQRT_3).abs() > 1e-3 || previous >= 1.74 {
        failures.push(format!("boundary solution {previous}, want within 1e-3 of sqrt(3)"));
    }

    report(8, "phase condition solver", started, collect(failures));
}

#[test]
fn c9_end_to_end_gate_synthesis() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let config = SearchConfig::default();
    let angles = [
        FRAC_PI_6,
        -FRAC_PI_6,
        FRAC_PI_3,
        -FRAC_PI_3,
        5.0 * PI / 12.0,
        -5.0 * PI / 12.0,
        3.0 * FRAC_PI_4,
        -3.0 * FRAC_PI_4,
    ];

    for &phi in &angles {
        for (axis, direction) in [(GateAxis::Y, BlochVector::Y), (GateAxis::Z, BlochVector::Z)] {
            match synthesize_gate(axis, phi, &config) {
                Ok(sequence) => {
                    let target = Unitary2::from_axis_angle(direction, 0.5 * phi)
                        .expect("unit axis");
                    let infidelity = 1.0 - gate_fidelity(target, evaluate_sequence(&sequence));
                    if !(infidelity < 1e-9) {
                        failures.push(format!(
                            "{axis:?} phi = {phi}: infidelity {infidelity:.3e}"
                        ));
                    }
                    if phi.abs() >= FRAC_PI_2 && sequence.len() > 10 {
                        failures.push(format!(
                            "{axis:?} phi = {phi}: {} pulses exceeds two blocks",
                            sequence.len()
                        ));
                    }
                }
                Err(e) => failures.push(format!("{axis:?} phi = {phi}: {e}")),
            }
        }
    }

    if started.elapsed().as_secs_f64() >= 60.0 {
        failures.push(format!("took {:.1} s, budget 60 s", started.elapsed().as_secs_f64()));
    }
    report(9, "end-to-end gate synthesis", started, collect(failures));
}

fn collect(failures: Vec<String>) -> Result<(), String> {
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures.join("; "))
    }
}
