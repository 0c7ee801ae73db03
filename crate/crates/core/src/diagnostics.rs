//! Energy, pair-count and constraint diagnostics of a state.

use crate::grid::Field;
use crate::physics::PhysicsParams;
use crate::solver::SimState;

/// One row of the time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRecord {
    pub t: f64,
    /// `∫ E²/(2ω²) dx`
    pub field_energy: f64,
    /// `∫ n_e γ_e dx`
    pub kinetic_e: f64,
    /// `∫ n_p γ_p dx`
    pub kinetic_p: f64,
    pub total_energy: f64,
    /// Total energy less the rest energy `2 n0` of the background pairs.
    pub total_energy_sub: f64,
    pub delta_pairs: f64,
    pub max_abs_e: f64,
    pub max_gamma: f64,
    pub gauss_residual: f64,
    /// Predicted `d(total_energy)/dt`, see [`energy_balance_rhs`].
    pub balance_rhs: f64,
}

impl SeriesRecord {
    pub const COLUMNS: [&'static str; 11] = [
        "t",
        "field_energy",
        "kinetic_e",
        "kinetic_p",
        "total_energy",
        "total_energy_sub",
        "delta_pairs",
        "max_abs_E",
        "max_gamma",
        "gauss_residual",
        "balance_rhs",
    ];

    pub fn values(&self) -> [f64; 11] {
        [
            self.t,
            self.field_energy,
            self.kinetic_e,
            self.kinetic_p,
            self.total_energy,
            self.total_energy_sub,
            self.delta_pairs,
            self.max_abs_e,
            self.max_gamma,
            self.gauss_residual,
            self.balance_rhs,
        ]
    }

    /// Evaluates every diagnostic of `state`. `initial_pairs` is `∫ n_e dx`
    /// at `t = 0`.
    pub fn measure(state: &SimState, params: &PhysicsParams, initial_pairs: f64) -> Self {
        let energy = total_energy(state, params.omega_pe_sq);
        let max_gamma = state
            .gamma_e()
            .iter()
            .chain(state.gamma_p().iter())
            .fold(1.0_f64, |m, &g| m.max(g));
        SeriesRecord {
            t: state.t,
            field_energy: energy.field,
            kinetic_e: energy.kinetic_e,
            kinetic_p: energy.kinetic_p,
            total_energy: energy.total(),
            total_energy_sub: energy.rest_subtracted(state.grid.length()),
            delta_pairs: pair_count_delta(state, initial_pairs),
            max_abs_e: state.e.max_abs(),
            max_gamma,
            gauss_residual: gauss_residual(state, params.omega_pe_sq),
            balance_rhs: energy_balance_rhs(state, params),
        }
    }
}

/// Energy content of a state, split by carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub field: f64,
    pub kinetic_e: f64,
    pub kinetic_p: f64,
}

impl EnergyBreakdown {
    pub fn total(&self) -> f64 {
        self.kinetic_e + self.kinetic_p + self.field
    }

    /// Total minus `∫ 2 dx` over a domain of the given length.
    pub fn rest_subtracted(&self, length: f64) -> f64 {
        self.total() - 2.0 * length
    }
}

/// `∫ (n_e γ_e + n_p γ_p + E²/(2ω²)) dx`.
pub fn total_energy(state: &SimState, omega_pe_sq: f64) -> EnergyBreakdown {
    let grid = &state.grid;
    let ke = state.n_e.zip_map(&state.gamma_e(), |n, g| n * g);
    let kp = state.n_p.zip_map(&state.gamma_p(), |n, g| n * g);
    let field = state.e.map(|e| e * e / (2.0 * omega_pe_sq));
    EnergyBreakdown {
        field: grid.integrate(&field),
        kinetic_e: grid.integrate(&ke),
        kinetic_p: grid.integrate(&kp),
    }
}

/// Number of electrons `∫ n_e dx`.
pub fn electron_count(state: &SimState) -> f64 {
    state.grid.integrate(&state.n_e)
}

/// Number of positrons `∫ n_p dx`.
pub fn positron_count(state: &SimState) -> f64 {
    state.grid.integrate(&state.n_p)
}

/// Pairs created since the reference count `initial_n_e`.
pub fn pair_count_delta(state: &SimState, initial_n_e: f64) -> f64 {
    electron_count(state) - initial_n_e
}

/// `‖ddx E - ω² (1 - n_e + n_p)‖∞`
pub fn gauss_residual(state: &SimState, omega_pe_sq: f64) -> f64 {
    let de = state.grid.ddx(&state.e);
    de.iter()
        .zip(state.n_e.iter().zip(state.n_p.iter()))
        .fold(0.0_f64, |m, (&d, (&ne, &np))| {
            m.max((d - omega_pe_sq * (1.0 - ne + np)).abs())
        })
}

/// Energy change rate implied by the displaced-creation source terms,
/// `-∫ q0/(2E) ∂x(γ_e² - γ_p²) dx`.
///
/// Vanishes for symmetric flows and for zero field.
pub fn energy_balance_rhs(state: &SimState, params: &PhysicsParams) -> f64 {
    let grid = &state.grid;
    let gsq_diff: Field = state
        .p_e
        .iter()
        .zip(state.p_p.iter())
        .map(|(&pe, &pp)| (1.0 + pe * pe) - (1.0 + pp * pp))
        .collect();
    let slope = grid.ddx(&gsq_diff);
    let integrand: Field = state
        .e
        .iter()
        .zip(slope.iter())
        .map(|(&e, &s)| {
            // E is finite for any validated state
            let q_over_e = params.displacement_flux(e, 1.0).unwrap_or(0.0);
            -0.5 * q_over_e * s
        })
        .collect();
    grid.integrate(&integrand)
}
