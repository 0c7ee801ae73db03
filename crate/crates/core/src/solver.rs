//! Semi-discrete right-hand side of the 1D electron-positron fluid system
//! and its fixed-step RK4 time advance.
//!
//! Per cell, with `q0` the Schwinger rate and `D_s = γ_s q0 / E`:
//!
//! ```text
//! ∂t n_e = -∂x(n_e p_e/γ_e) + q0 + ∂x D_e - a n_e n_p
//! ∂t n_p = -∂x(n_p p_p/γ_p) + q0 - ∂x D_p - a n_e n_p
//! ∂t p_e = -∂x γ_e - E  [+ ½ ∂x U_B(n_e, γ_e)] - a n_p (p_e - p_p)
//! ∂t p_p = -∂x γ_p + E  [+ ½ ∂x U_B(n_p, γ_p)] - a n_e (p_p - p_e)
//! ∂t E   = ω² (n_e p_e/γ_e - n_p p_p/γ_p - (D_e + D_p))
//! ```
//!
//! The field equation is the time derivative of Gauss's law with the
//! continuity equations substituted, using the same `ddx` stencil, so
//! `ddx(∂t E) = ω² (∂t n_p - ∂t n_e)` holds to rounding for any state.

use std::f64::consts::PI;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid1D};
use crate::physics::{lorentz_gamma, PhysicsParams};

/// Largest allowed `dt / dx`; the fastest signal moves at `c = 1`.
pub const CFL_MAX: f64 = 0.5;

/// Time, field, densities and momenta on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub grid: Grid1D,
    pub t: f64,
    pub e: Field,
    pub n_e: Field,
    pub n_p: Field,
    pub p_e: Field,
    pub p_p: Field,
}

impl SimState {
    pub fn gamma_e(&self) -> Field {
        self.p_e.map(lorentz_gamma)
    }

    pub fn gamma_p(&self) -> Field {
        self.p_p.map(lorentz_gamma)
    }

    /// Mirror image under `x -> -x`: densities reflect, momenta and field
    /// reflect and change sign.
    pub fn mirrored(&self) -> SimState {
        SimState {
            grid: self.grid,
            t: self.t,
            e: self.e.mirrored().map(|v| -v),
            n_e: self.n_e.mirrored(),
            n_p: self.n_p.mirrored(),
            p_e: self.p_e.mirrored().map(|v| -v),
            p_p: self.p_p.mirrored().map(|v| -v),
        }
    }

    fn fields(&self) -> [(&'static str, &Field); 5] {
        [
            ("E", &self.e),
            ("n_e", &self.n_e),
            ("n_p", &self.n_p),
            ("p_e", &self.p_e),
            ("p_p", &self.p_p),
        ]
    }

    /// Checks finiteness, grid alignment and strictly positive densities.
    pub fn validate(&self) -> Result<()> {
        let m = self.grid.cells();
        for (name, f) in self.fields() {
            if f.len() != m {
                return Err(Error::InvalidState(format!(
                    "{name} has {} values, grid has {m} cells",
                    f.len()
                )));
            }
            if let Some(cell) = f.first_non_finite() {
                return Err(Error::NumericalBreakdown {
                    t: self.t,
                    cell,
                    reason: format!("{name} is not finite ({})", f[cell]),
                });
            }
        }
        for (name, n) in [("n_e", &self.n_e), ("n_p", &self.n_p)] {
            if let Some(cell) = n.iter().position(|&v| v <= 0.0) {
                return Err(Error::NumericalBreakdown {
                    t: self.t,
                    cell,
                    reason: format!("{name} is not positive ({})", n[cell]),
                });
            }
        }
        Ok(())
    }

    fn stage(&self, k: &Derivatives, h: f64) -> SimState {
        let mut s = self.clone();
        s.t += h;
        s.e.add_scaled(h, &k.e);
        s.n_e.add_scaled(h, &k.n_e);
        s.n_p.add_scaled(h, &k.n_p);
        s.p_e.add_scaled(h, &k.p_e);
        s.p_p.add_scaled(h, &k.p_p);
        s
    }
}

/// Time derivatives of the five evolved fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivatives {
    pub e: Field,
    pub n_e: Field,
    pub n_p: Field,
    pub p_e: Field,
    pub p_p: Field,
}

/// How the time step is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    /// Fixed step in Compton times.
    Dt(f64),
    /// Step as a fraction of the cell width, `dt = cfl dx`.
    Cfl(f64),
}

impl TimeStep {
    pub fn resolve(&self, grid: &Grid1D) -> f64 {
        match *self {
            TimeStep::Dt(dt) => dt,
            TimeStep::Cfl(cfl) => cfl * grid.dx(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub step: TimeStep,
    pub t_end: f64,
    /// Spatially separated creation of the pair members.
    pub displacement_terms: bool,
    /// Use the `+` sign on the displacement current in the field equation.
    /// This breaks the Gauss-law consistency of the scheme.
    pub paper_ampere_sign: bool,
    pub bohm: bool,
    /// Hyperdiffusion coefficient; zero disables it.
    pub nu_h: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            step: TimeStep::Cfl(0.4),
            t_end: 1500.0,
            displacement_terms: true,
            paper_ampere_sign: false,
            bohm: false,
            nu_h: 0.0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        let dt = self.step.resolve(grid);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "time step must be > 0, got {dt}"
            )));
        }
        if dt > CFL_MAX * grid.dx() * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "time step {dt} exceeds {CFL_MAX} dx = {}",
                CFL_MAX * grid.dx()
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_end must be >= 0, got {}",
                self.t_end
            )));
        }
        if !(self.nu_h >= 0.0 && self.nu_h.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "nu_h must be >= 0, got {}",
                self.nu_h
            )));
        }
        Ok(())
    }

    /// Number of uniform steps and their length; the step is shrunk so that
    /// an integer number of steps lands exactly on `t_end`.
    pub fn schedule(&self, grid: &Grid1D) -> (usize, f64) {
        let dt = self.step.resolve(grid);
        if self.t_end == 0.0 {
            return (0, dt);
        }
        let steps = ((self.t_end / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (steps, self.t_end / steps as f64)
    }
}

fn breakdown_in(t: f64, name: &str, f: &Field) -> Result<()> {
    match f.first_non_finite() {
        Some(cell) => Err(Error::NumericalBreakdown {
            t,
            cell,
            reason: format!("d{name}/dt is not finite ({})", f[cell]),
        }),
        None => Ok(()),
    }
}

/// Time derivatives of all fields.
pub fn rhs(state: &SimState, params: &PhysicsParams, opts: &SolverOptions) -> Result<Derivatives> {
    state.validate()?;
    let grid = &state.grid;
    let m = grid.cells();

    let gamma_e = state.gamma_e();
    let gamma_p = state.gamma_p();
    let mut q0 = Field::zeros(grid);
    let mut disp_e = Field::zeros(grid);
    let mut disp_p = Field::zeros(grid);
    for j in 0..m {
        q0[j] = params.schwinger_rate(state.e[j])?;
        if opts.displacement_terms {
            disp_e[j] = params.displacement_flux(state.e[j], gamma_e[j])?;
            disp_p[j] = params.displacement_flux(state.e[j], gamma_p[j])?;
        }
    }

    let flux_e: Field = (0..m)
        .map(|j| state.n_e[j] * state.p_e[j] / gamma_e[j])
        .collect();
    let flux_p: Field = (0..m)
        .map(|j| state.n_p[j] * state.p_p[j] / gamma_p[j])
        .collect();
    let div_e = grid.ddx(&flux_e);
    let div_p = grid.ddx(&flux_p);
    let grad_gamma_e = grid.ddx(&gamma_e);
    let grad_gamma_p = grid.ddx(&gamma_p);
    let (src_e, src_p) = if opts.displacement_terms {
        (grid.ddx(&disp_e), grid.ddx(&disp_p))
    } else {
        (Field::zeros(grid), Field::zeros(grid))
    };
    let (bohm_e, bohm_p) = if opts.bohm {
        (
            grid.ddx(&grid.bohm_potential(&state.n_e, &gamma_e)?),
            grid.ddx(&grid.bohm_potential(&state.n_p, &gamma_p)?),
        )
    } else {
        (Field::zeros(grid), Field::zeros(grid))
    };

    let a = params.a;
    let w2 = params.omega_pe_sq;
    let ampere_sign = if opts.paper_ampere_sign { 1.0 } else { -1.0 };

    let mut d = Derivatives {
        e: Field::zeros(grid),
        n_e: Field::zeros(grid),
        n_p: Field::zeros(grid),
        p_e: Field::zeros(grid),
        p_p: Field::zeros(grid),
    };
    for j in 0..m {
        let (ne, np, pe, pp) = (state.n_e[j], state.n_p[j], state.p_e[j], state.p_p[j]);
        let loss = a * ne * np;
        d.n_e[j] = -div_e[j] + q0[j] + src_e[j] - loss;
        d.n_p[j] = -div_p[j] + q0[j] - src_p[j] - loss;
        d.p_e[j] = -grad_gamma_e[j] - state.e[j] + 0.5 * bohm_e[j] - a * np * (pe - pp);
        d.p_p[j] = -grad_gamma_p[j] + state.e[j] + 0.5 * bohm_p[j] - a * ne * (pp - pe);
        d.e[j] = w2 * (flux_e[j] - flux_p[j] + ampere_sign * (disp_e[j] + disp_p[j]));
    }

    if opts.nu_h > 0.0 {
        // E is damped with the same operator so Gauss's law stays consistent.
        d.e.add_scaled(1.0, &grid.hyperdiffusion(&state.e, opts.nu_h));
        d.n_e
            .add_scaled(1.0, &grid.hyperdiffusion(&state.n_e, opts.nu_h));
        d.n_p
            .add_scaled(1.0, &grid.hyperdiffusion(&state.n_p, opts.nu_h));
        d.p_e
            .add_scaled(1.0, &grid.hyperdiffusion(&state.p_e, opts.nu_h));
        d.p_p
            .add_scaled(1.0, &grid.hyperdiffusion(&state.p_p, opts.nu_h));
    }

    for (name, f) in [
        ("E", &d.e),
        ("n_e", &d.n_e),
        ("n_p", &d.n_p),
        ("p_e", &d.p_e),
        ("p_p", &d.p_p),
    ] {
        breakdown_in(state.t, name, f)?;
    }
    Ok(d)
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step(
    state: &SimState,
    dt: f64,
    params: &PhysicsParams,
    opts: &SolverOptions,
) -> Result<SimState> {
    let dx = state.grid.dx();
    if !(dt > 0.0) || dt > CFL_MAX * dx * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "time step {dt} outside (0, {CFL_MAX} dx]"
        )));
    }
    let k1 = rhs(state, params, opts)?;
    let k2 = rhs(&state.stage(&k1, 0.5 * dt), params, opts)?;
    let k3 = rhs(&state.stage(&k2, 0.5 * dt), params, opts)?;
    let k4 = rhs(&state.stage(&k3, dt), params, opts)?;

    let mut next = state.clone();
    next.t += dt;
    let h = dt / 6.0;
    for (dst, ks) in [
        (&mut next.e, [&k1.e, &k2.e, &k3.e, &k4.e]),
        (&mut next.n_e, [&k1.n_e, &k2.n_e, &k3.n_e, &k4.n_e]),
        (&mut next.n_p, [&k1.n_p, &k2.n_p, &k3.n_p, &k4.n_p]),
        (&mut next.p_e, [&k1.p_e, &k2.p_e, &k3.p_e, &k4.p_e]),
        (&mut next.p_p, [&k1.p_p, &k2.p_p, &k3.p_p, &k4.p_p]),
    ] {
        for j in 0..dst.len() {
            dst[j] += h * (ks[0][j] + 2.0 * ks[1][j] + 2.0 * ks[2][j] + ks[3][j]);
        }
    }
    next.validate()?;
    Ok(next)
}

/// Initial density and momentum profiles.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// `n_e = base_e + amplitude (x/L) exp(-x²/L²)`, uniform `n_p = base_p`.
    PaperGaussian {
        base_e: f64,
        base_p: f64,
        amplitude: f64,
        width: f64,
    },
    /// `n_e = base_e + ε sin(k x)` with `k = mode π / X`, uniform `n_p`.
    Sine {
        base_e: f64,
        base_p: f64,
        epsilon: f64,
        mode: u32,
    },
    Uniform {
        base_e: f64,
        base_p: f64,
    },
    /// Densities and momenta read from a snapshot file; `E` is recomputed.
    File(PathBuf),
}

impl InitialCondition {
    pub fn paper_gaussian() -> Self {
        InitialCondition::PaperGaussian {
            base_e: 1.01,
            base_p: 0.01,
            amplitude: 2.0,
            width: 6000.0,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InitialCondition::PaperGaussian { .. } => "paper-gaussian",
            InitialCondition::Sine { .. } => "sine",
            InitialCondition::Uniform { .. } => "uniform",
            InitialCondition::File(_) => "file",
        }
    }
}

/// Builds the `t = 0` state: densities and momenta from `ic` (momenta
/// default to the uniform drifts `p_e0`, `p_p0`), then `E` from Gauss's law.
pub fn initial_condition(
    ic: &InitialCondition,
    grid: &Grid1D,
    params: &PhysicsParams,
    p_e0: f64,
    p_p0: f64,
) -> Result<SimState> {
    let (n_e, n_p, p_e, p_p) = match ic {
        InitialCondition::PaperGaussian {
            base_e,
            base_p,
            amplitude,
            width,
        } => {
            if !(*width > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "L must be > 0, got {width}"
                )));
            }
            let n_e = Field::from_fn(grid, |x| {
                let s = x / width;
                base_e + amplitude * s * (-s * s).exp()
            });
            (
                n_e,
                Field::constant(grid, *base_p),
                Field::constant(grid, p_e0),
                Field::constant(grid, p_p0),
            )
        }
        InitialCondition::Sine {
            base_e,
            base_p,
            epsilon,
            mode,
        } => {
            if *mode == 0 {
                return Err(Error::InvalidParameter("sine mode must be >= 1".into()));
            }
            let k = *mode as f64 * PI / grid.half_width();
            let n_e = Field::from_fn(grid, |x| base_e + epsilon * (k * x).sin());
            (
                n_e,
                Field::constant(grid, *base_p),
                Field::constant(grid, p_e0),
                Field::constant(grid, p_p0),
            )
        }
        InitialCondition::Uniform { base_e, base_p } => (
            Field::constant(grid, *base_e),
            Field::constant(grid, *base_p),
            Field::constant(grid, p_e0),
            Field::constant(grid, p_p0),
        ),
        InitialCondition::File(path) => {
            let snap = crate::output::read_snapshot(path)?;
            if snap.n_e.len() != grid.cells() {
                return Err(Error::InvalidParameter(format!(
                    "{} has {} rows, grid has {} cells",
                    path.display(),
                    snap.n_e.len(),
                    grid.cells()
                )));
            }
            (snap.n_e, snap.n_p, snap.p_e, snap.p_p)
        }
    };
    let e = grid.poisson_field(&n_e, &n_p, params.omega_pe_sq)?;
    let state = SimState {
        grid: *grid,
        t: 0.0,
        e,
        n_e,
        n_p,
        p_e,
        p_p,
    };
    state.validate().map_err(|err| match err {
        Error::NumericalBreakdown { cell, reason, .. } => {
            Error::InvalidParameter(format!("initial state invalid at cell {cell}: {reason}"))
        }
        other => other,
    })?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params_137() -> PhysicsParams {
        PhysicsParams::new(0.2, 1.0 / 137.0, 0.0, 1e-8).unwrap()
    }

    fn uniform_state(grid: Grid1D, e: f64, ne: f64, np: f64, pe: f64, pp: f64) -> SimState {
        SimState {
            grid,
            t: 0.0,
            e: Field::constant(&grid, e),
            n_e: Field::constant(&grid, ne),
            n_p: Field::constant(&grid, np),
            p_e: Field::constant(&grid, pe),
            p_p: Field::constant(&grid, pp),
        }
    }

    #[test]
    fn equilibrium_is_a_fixed_point() {
        let grid = Grid1D::new(100.0, 64).unwrap();
        let s = uniform_state(grid, 0.0, 1.01, 0.01, 0.0, 0.0);
        let d = rhs(&s, &params_137(), &SolverOptions::default()).unwrap();
        for f in [&d.e, &d.n_e, &d.n_p, &d.p_e, &d.p_p] {
            assert!(f.iter().all(|&v| v == 0.0));
        }
        let next = rk4_step(&s, 1.0, &params_137(), &SolverOptions::default()).unwrap();
        assert_eq!(next.t, 1.0);
        assert_eq!(next.e, s.e);
        assert_eq!(next.n_e, s.n_e);
        assert_eq!(next.p_p, s.p_p);
    }

    #[test]
    fn uniform_drift_is_preserved() {
        let grid = Grid1D::new(100.0, 64).unwrap();
        // equal drifts carry no net current in a neutral pair plasma
        let s = uniform_state(grid, 0.0, 1.0, 1.0, 0.3, 0.3);
        let opts = SolverOptions::default();
        let next = rk4_step(&s, 1.0, &params_137(), &opts).unwrap();
        assert_eq!(next.n_e, s.n_e);
        assert_eq!(next.p_e, s.p_e);
        assert!(next.e.max_abs() == 0.0);
    }

    #[test]
    fn uniform_field_rates() {
        let grid = Grid1D::new(100.0, 64).unwrap();
        let s = uniform_state(grid, 0.5, 1.0, 1.0, 0.0, 0.0);
        let d = rhs(&s, &params_137(), &SolverOptions::default()).unwrap();
        for j in 0..grid.cells() {
            assert_eq!(d.p_e[j], -0.5);
            assert_eq!(d.p_p[j], 0.5);
            assert_relative_eq!(d.n_e[j], 2.334_303_414_634_986e-3, max_relative = 1e-12);
            assert_relative_eq!(d.n_p[j], 2.334_303_414_634_986e-3, max_relative = 1e-12);
            assert_relative_eq!(d.e[j], -6.905_529_487_625_33e-7, max_relative = 1e-12);
        }
    }

    #[test]
    fn displacement_switch_removes_field_drain() {
        let grid = Grid1D::new(100.0, 64).unwrap();
        let s = uniform_state(grid, 0.5, 1.0, 1.0, 0.0, 0.0);
        let opts = SolverOptions {
            displacement_terms: false,
            ..SolverOptions::default()
        };
        let d = rhs(&s, &params_137(), &opts).unwrap();
        assert!(d.e.iter().all(|&v| v == 0.0));
        let flipped = SolverOptions {
            paper_ampere_sign: true,
            ..SolverOptions::default()
        };
        let d = rhs(&s, &params_137(), &flipped).unwrap();
        assert_relative_eq!(d.e[0], 6.905_529_487_625_33e-7, max_relative = 1e-12);
    }

    #[test]
    fn recombination_removes_pairs_without_field() {
        let grid = Grid1D::new(100.0, 64).unwrap();
        let params = PhysicsParams::new(0.2, 1.0 / 137.0, 0.1, 1e-8).unwrap();
        let s = uniform_state(grid, 0.0, 2.0, 0.25, 1.0, 0.0);
        let d = rhs(&s, &params, &SolverOptions::default()).unwrap();
        assert_relative_eq!(d.n_e[3], -0.05, max_relative = 1e-14);
        assert_relative_eq!(d.n_p[3], -0.05, max_relative = 1e-14);
        assert_relative_eq!(d.p_e[3], -0.025, max_relative = 1e-14);
        assert_relative_eq!(d.p_p[3], 0.2, max_relative = 1e-14);
    }

    #[test]
    fn breakdown_reports_cell() {
        let grid = Grid1D::new(100.0, 64).unwrap();
        let mut s = uniform_state(grid, 0.0, 1.0, 1.0, 0.0, 0.0);
        s.n_p[17] = -1e-3;
        s.t = 4.5;
        match rhs(&s, &params_137(), &SolverOptions::default()) {
            Err(Error::NumericalBreakdown { t, cell, .. }) => {
                assert_eq!(t, 4.5);
                assert_eq!(cell, 17);
            }
            other => panic!("expected breakdown, got {other:?}"),
        }
        s.n_p[17] = 1.0;
        s.e[5] = f64::NAN;
        assert!(matches!(
            rhs(&s, &params_137(), &SolverOptions::default()),
            Err(Error::NumericalBreakdown { cell: 5, .. })
        ));
    }

    #[test]
    fn rejects_oversized_step() {
        let grid = Grid1D::new(100.0, 64).unwrap();
        let s = uniform_state(grid, 0.0, 1.0, 1.0, 0.0, 0.0);
        let dt = 0.6 * grid.dx();
        assert!(rk4_step(&s, dt, &params_137(), &SolverOptions::default()).is_err());
    }

    #[test]
    fn schedule_lands_on_t_end() {
        let grid = Grid1D::new(24000.0, 2048).unwrap();
        let opts = SolverOptions::default();
        let (n, dt) = opts.schedule(&grid);
        assert_eq!(n, 160);
        assert_eq!(dt, 9.375);
        let opts = SolverOptions {
            step: TimeStep::Dt(7.0),
            t_end: 100.0,
            ..opts
        };
        let (n, dt) = opts.schedule(&grid);
        assert_eq!(n, 15);
        assert!(dt <= 7.0);
        assert_relative_eq!(dt * 15.0, 100.0, max_relative = 1e-15);
    }

    #[test]
    fn gaussian_initial_condition_peak() {
        let grid = Grid1D::new(24000.0, 2048).unwrap();
        let s = initial_condition(
            &InitialCondition::paper_gaussian(),
            &grid,
            &params_137(),
            0.0,
            0.0,
        )
        .unwrap();
        let (jmax, emax) =
            s.e.iter().enumerate().fold(
                (0, 0.0),
                |acc, (j, &v)| if v.abs() > acc.1 { (j, v.abs()) } else { acc },
            );
        assert!((emax - 0.44373).abs() <= 1e-3, "{emax}");
        assert!(grid.x(jmax).abs() <= grid.dx());
    }

    #[test]
    fn sine_initial_condition_field() {
        let grid = Grid1D::new(2000.0, 256).unwrap();
        let params = params_137();
        let eps = 1e-4;
        let ic = InitialCondition::Sine {
            base_e: 1.01,
            base_p: 0.01,
            epsilon: eps,
            mode: 2,
        };
        let s = initial_condition(&ic, &grid, &params, 0.0, 0.0).unwrap();
        let k = 2.0 * PI / grid.half_width();
        let xe = grid.half_width();
        let amp = params.omega_pe_sq * eps / k;
        for j in 0..grid.cells() {
            let x = grid.x(j);
            let exact = amp * ((k * x).cos() - (k * xe).cos());
            assert!((s.e[j] - exact).abs() < 1e-6 * amp, "{} vs {exact}", s.e[j]);
        }
        let uni = initial_condition(
            &InitialCondition::Uniform {
                base_e: 1.5,
                base_p: 0.5,
            },
            &grid,
            &params,
            0.0,
            0.0,
        )
        .unwrap();
        assert_eq!(uni.e.max_abs(), 0.0);
    }

    #[test]
    fn non_neutral_initial_condition_fails() {
        let grid = Grid1D::new(2000.0, 256).unwrap();
        let ic = InitialCondition::Uniform {
            base_e: 1.0,
            base_p: 0.5,
        };
        assert!(matches!(
            initial_condition(&ic, &grid, &params_137(), 0.0, 0.0),
            Err(Error::ChargeImbalance { .. })
        ));
    }

    fn random_state(rng: &mut ChaCha8Rng, grid: Grid1D) -> SimState {
        let k = 2.0 * PI / grid.length();
        let mut smooth = |scale: f64, offset: f64| {
            let c: Vec<(f64, f64)> = (0..4)
                .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            Field::from_fn(&grid, |x| {
                offset
                    + scale
                        * c.iter()
                            .enumerate()
                            .map(|(m, (a, b))| {
                                let km = k * (m + 1) as f64;
                                a * (km * x).sin() + b * (km * x).cos()
                            })
                            .sum::<f64>()
            })
        };
        SimState {
            grid,
            t: 0.0,
            e: smooth(0.3, 0.0),
            n_e: smooth(0.2, 1.5),
            n_p: smooth(0.2, 1.5),
            p_e: smooth(5.0, 0.0),
            p_p: smooth(5.0, 0.0),
        }
    }

    #[test]
    fn ampere_gauss_identity_on_random_states() {
        let grid = Grid1D::new(500.0, 128).unwrap();
        let params = params_137();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let s = random_state(&mut rng, grid);
            let d = rhs(&s, &params, &SolverOptions::default()).unwrap();
            let lhs = grid.ddx(&d.e);
            let rhs_ = d.n_p.zip_map(&d.n_e, |p, e| params.omega_pe_sq * (p - e));
            let scale = lhs.max_abs().max(rhs_.max_abs());
            for (a, b) in lhs.iter().zip(rhs_.iter()) {
                assert!((a - b).abs() <= 1e-13 * scale, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn flipped_ampere_sign_breaks_gauss() {
        let grid = Grid1D::new(500.0, 128).unwrap();
        let params = params_137();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = random_state(&mut rng, grid);
        let opts = SolverOptions {
            paper_ampere_sign: true,
            ..SolverOptions::default()
        };
        let d = rhs(&s, &params, &opts).unwrap();
        let lhs = grid.ddx(&d.e);
        let rhs_ = d.n_p.zip_map(&d.n_e, |p, e| params.omega_pe_sq * (p - e));
        let scale = lhs.max_abs().max(rhs_.max_abs());
        let worst = lhs
            .iter()
            .zip(rhs_.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst > 1e-6 * scale, "{worst:e}");
    }

    #[test]
    fn mirror_equivariance_is_exact() {
        let grid = Grid1D::new(500.0, 128).unwrap();
        let params = params_137();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let opts = SolverOptions {
            bohm: true,
            nu_h: 1e-3,
            ..SolverOptions::default()
        };
        let s = random_state(&mut rng, grid);
        let a = rk4_step(&s, 1.0, &params, &opts).unwrap();
        let b = rk4_step(&s.mirrored(), 1.0, &params, &opts).unwrap();
        assert_eq!(a.mirrored(), b);
    }
}
