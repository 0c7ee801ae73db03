//! Built-in invariant suite behind the `check` subcommand.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{Field, Grid1D};
use crate::physics::{
    displacement_flux, lorentz_gamma, schwinger_rate_norm, schwinger_rate_si, si,
    si_rate_to_normalized, PhysicsParams, DEFAULT_EPS_FIELD,
};
use crate::solver::{initial_condition, rhs, rk4_step, InitialCondition, SimState, SolverOptions};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

/// Oscillation period of a uniformly sampled, possibly slowly damped,
/// single-frequency signal.
///
/// Fits `s[n+1] = c1 s[n] + c2 s[n-1]` by least squares; for
/// `s[n] = A rⁿ cos(nθ + φ)` this holds exactly with `c1 = 2r cos θ` and
/// `c2 = -r²`, so `θ` is recovered without interpolation error.
pub fn oscillation_period(samples: &[f64], dt: f64) -> Option<f64> {
    if samples.len() < 4 {
        return None;
    }
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for w in samples.windows(3) {
        let (prev, cur, next) = (w[0], w[1], w[2]);
        a11 += cur * cur;
        a12 += cur * prev;
        a22 += prev * prev;
        b1 += cur * next;
        b2 += prev * next;
    }
    let det = a11 * a22 - a12 * a12;
    if det == 0.0 {
        return None;
    }
    let c1 = (b1 * a22 - b2 * a12) / det;
    let c2 = (a11 * b2 - a12 * b1) / det;
    if c2 >= 0.0 {
        return None;
    }
    let cos_theta = c1 / (2.0 * (-c2).sqrt());
    if cos_theta.abs() >= 1.0 {
        return None;
    }
    Some(2.0 * PI * dt / cos_theta.acos())
}

/// Result of a small-amplitude plasma oscillation run.
#[derive(Debug, Clone, Copy)]
pub struct LangmuirMeasurement {
    pub dt: f64,
    pub measured_period: f64,
    /// `2π / (ω sqrt(n_e0 + n_p0))` from linear two-fluid theory.
    pub expected_period: f64,
}

impl LangmuirMeasurement {
    pub fn relative_error(&self) -> f64 {
        (self.measured_period - self.expected_period).abs() / self.expected_period
    }
}

/// Runs a `sine` perturbation of amplitude `epsilon` on the given grid with
/// step `dt` for about `periods` oscillations and measures the period of
/// `E` at the cell of largest initial field.
pub fn langmuir_period(
    params: &PhysicsParams,
    grid: &Grid1D,
    dt: f64,
    epsilon: f64,
    periods: f64,
) -> Result<LangmuirMeasurement> {
    let (base_e, base_p) = (1.01, 0.01);
    let ic = InitialCondition::Sine {
        base_e,
        base_p,
        epsilon,
        mode: 1,
    };
    let mut state = initial_condition(&ic, grid, params, 0.0, 0.0)?;
    let probe = state
        .e
        .iter()
        .enumerate()
        .fold(
            (0, 0.0),
            |acc, (j, &v)| if v.abs() > acc.1 { (j, v.abs()) } else { acc },
        )
        .0;
    let expected = 2.0 * PI / (params.omega_pe() * (base_e + base_p).sqrt());
    let steps = (periods * expected / dt).ceil() as usize;
    let opts = SolverOptions {
        displacement_terms: true,
        ..SolverOptions::default()
    };
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(state.e[probe]);
    for _ in 0..steps {
        state = rk4_step(&state, dt, params, &opts)?;
        samples.push(state.e[probe]);
    }
    let measured = oscillation_period(&samples, dt).unwrap_or(f64::NAN);
    Ok(LangmuirMeasurement {
        dt,
        measured_period: measured,
        expected_period: expected,
    })
}

/// A smooth random state with positive densities and `|E| ≲ 0.5`.
pub fn random_smooth_state(rng: &mut ChaCha8Rng, grid: &Grid1D) -> SimState {
    let k = 2.0 * PI / grid.length();
    let mut smooth = |scale: f64, offset: f64| {
        let coeffs: Vec<(f64, f64)> = (0..4)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Field::from_fn(grid, |x| {
            let wave: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(m, (a, b))| {
                    let km = k * (m + 1) as f64;
                    a * (km * x).sin() + b * (km * x).cos()
                })
                .sum();
            offset + scale * wave
        })
    };
    SimState {
        grid: *grid,
        t: 0.0,
        e: smooth(0.1, 0.0),
        n_e: smooth(0.1, 1.2),
        n_p: smooth(0.1, 1.0),
        p_e: smooth(20.0, 0.0),
        p_p: smooth(20.0, 0.0),
    }
}

/// Largest `|ddx(∂t E) - ω²(∂t n_p - ∂t n_e)|` relative to the larger side,
/// over `count` random states.
pub fn ampere_gauss_mismatch(count: usize, seed: u64) -> Result<f64> {
    let params = PhysicsParams::new(0.2, 1.0 / 137.0, 0.0, DEFAULT_EPS_FIELD)?;
    let grid = Grid1D::new(2000.0, 256)?;
    let opts = SolverOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let state = random_smooth_state(&mut rng, &grid);
        let d = rhs(&state, &params, &opts)?;
        let lhs = grid.ddx(&d.e);
        let rhs_ = d.n_p.zip_map(&d.n_e, |p, e| params.omega_pe_sq * (p - e));
        let scale = lhs.max_abs().max(rhs_.max_abs());
        for (a, b) in lhs.iter().zip(rhs_.iter()) {
            worst = worst.max((a - b).abs() / scale);
        }
    }
    Ok(worst)
}

fn kernel_checks(out: &mut Vec<CheckResult>) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut parity_ok = true;
    let mut positive_ok = true;
    for _ in 0..1000 {
        let e: f64 = rng.gen_range(-3.0..3.0);
        let g = lorentz_gamma(rng.gen_range(-50.0..50.0));
        let q = schwinger_rate_norm(e, 0.2, DEFAULT_EPS_FIELD).unwrap_or(f64::NAN);
        let qm = schwinger_rate_norm(-e, 0.2, DEFAULT_EPS_FIELD).unwrap_or(f64::NAN);
        let f = displacement_flux(e, g, 0.2, DEFAULT_EPS_FIELD).unwrap_or(f64::NAN);
        let fm = displacement_flux(-e, g, 0.2, DEFAULT_EPS_FIELD).unwrap_or(f64::NAN);
        parity_ok &= q == qm && f == -fm;
        positive_ok &= q >= 0.0 && g >= 1.0;
    }
    out.push(CheckResult::new(
        "kernel parity",
        parity_ok,
        "q0 even, q0/E odd in E (1000 samples)".into(),
    ));
    out.push(CheckResult::new(
        "kernel positivity",
        positive_ok,
        "q0 >= 0 and gamma >= 1".into(),
    ));

    let mut worst_ratio: f64 = 0.0;
    for i in 1..=200 {
        let e = 0.05 * i as f64 / 200.0;
        let q = schwinger_rate_norm(e, 0.2, DEFAULT_EPS_FIELD).unwrap_or(f64::NAN);
        for n in 0..=8 {
            worst_ratio = worst_ratio.max(q / e.powi(n));
        }
    }
    out.push(CheckResult::new(
        "small-field suppression",
        worst_ratio < 1e-10,
        format!("max q0/|E|^n for |E| <= 0.05, n <= 8: {worst_ratio:.3e}"),
    ));

    let mut worst_rel: f64 = 0.0;
    for _ in 0..100 {
        let ratio: f64 = rng.gen_range(0.05..3.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let n0 = rng.gen_range(0.01..10.0);
        let si_rate = schwinger_rate_si(ratio * si::critical_field()).unwrap_or(f64::NAN);
        let norm = schwinger_rate_norm(ratio, n0, DEFAULT_EPS_FIELD).unwrap_or(f64::NAN);
        worst_rel = worst_rel.max((si_rate_to_normalized(si_rate, n0) - norm).abs() / norm);
    }
    out.push(CheckResult::new(
        "SI/normalized rate agreement",
        worst_rel <= 1e-12,
        format!("max relative difference {worst_rel:.3e}"),
    ));
}

fn operator_checks(out: &mut Vec<CheckResult>) -> Result<()> {
    let mut errors = Vec::new();
    for cells in [64, 128, 256] {
        let grid = Grid1D::new(10.0, cells)?;
        let k = 2.0 * PI / grid.length();
        let f = Field::from_fn(&grid, |x| (k * x).sin());
        let d = grid.ddx(&f);
        let err = (0..cells)
            .map(|j| (d[j] - k * (k * grid.x(j)).cos()).abs())
            .fold(0.0_f64, f64::max);
        errors.push(err);
    }
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    out.push(CheckResult::new(
        "ddx convergence order",
        r1 >= 15.0 && r2 >= 15.0,
        format!("error ratios {r1:.2}, {r2:.2} per grid doubling (>= 15)"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let grid = Grid1D::new(5.0, 64)?;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let f: Field = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        worst = worst.max(grid.integrate(&grid.ddx(&f)).abs());
    }
    out.push(CheckResult::new(
        "discrete divergence theorem",
        worst <= 1e-12,
        format!("max |integral of ddx f| = {worst:.3e}"),
    ));
    Ok(())
}

/// Runs every suite and returns one result per check.
pub fn run_all() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    kernel_checks(&mut out);
    operator_checks(&mut out)?;

    let mismatch = ampere_gauss_mismatch(100, 2024)?;
    out.push(CheckResult::new(
        "Ampere-Gauss identity",
        mismatch <= 1e-13,
        format!("max relative mismatch over 100 random states {mismatch:.3e}"),
    ));

    let params = PhysicsParams::new(0.2, 1.0 / 137.0, 0.0, DEFAULT_EPS_FIELD)?;
    let grid = Grid1D::new(12000.0, 256)?;
    let coarse = langmuir_period(&params, &grid, 0.5 * grid.dx(), 1e-6, 6.0)?;
    let fine = langmuir_period(&params, &grid, 0.25 * grid.dx(), 1e-6, 6.0)?;
    let ratio = coarse.relative_error() / fine.relative_error();
    out.push(CheckResult::new(
        "Langmuir frequency",
        coarse.relative_error() <= 0.01 && ratio >= 8.0,
        format!(
            "period error {:.3e} (dt = {}), {:.3e} (dt/2), ratio {ratio:.1}",
            coarse.relative_error(),
            coarse.dt,
            fine.relative_error()
        ),
    ));
    Ok(out)
}
