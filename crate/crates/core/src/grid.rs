//! Uniform periodic grid and the discrete operators built on it.
//!
//! Values live at cell centers `x_j = -X + (j + 1/2) dx`. All stencils are
//! symmetric and wrap modulo `M`, so `ddx` is skew-symmetric and every
//! operator commutes with every other.

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

/// Uniform periodic 1D grid on `[-X, X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    half_width: f64,
    cells: usize,
    dx: f64,
}

impl Grid1D {
    pub fn new(half_width: f64, cells: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid half width must be > 0, got {half_width}"
            )));
        }
        if cells < 8 || !cells.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "cell count must be even and >= 8, got {cells}"
            )));
        }
        Ok(Self {
            half_width,
            cells,
            dx: 2.0 * half_width / cells as f64,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Length of the periodic domain, `2X`.
    pub fn length(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + 0.5) * self.dx
    }

    pub fn coordinates(&self) -> Field {
        Field::from_fn(self, |x| x)
    }

    fn neighbours(&self, j: usize) -> [usize; 4] {
        let m = self.cells;
        [(j + m - 2) % m, (j + m - 1) % m, (j + 1) % m, (j + 2) % m]
    }

    fn stencil(&self, f: &Field, op: impl Fn(f64, f64, f64, f64, f64) -> f64) -> Field {
        debug_assert_eq!(f.len(), self.cells);
        (0..self.cells)
            .map(|j| {
                let [jm2, jm1, jp1, jp2] = self.neighbours(j);
                op(f[jm2], f[jm1], f[j], f[jp1], f[jp2])
            })
            .collect()
    }

    /// Fourth-order central first derivative.
    pub fn ddx(&self, f: &Field) -> Field {
        let inv = 1.0 / (12.0 * self.dx);
        self.stencil(f, |m2, m1, _, p1, p2| ((m2 - p2) + 8.0 * (p1 - m1)) * inv)
    }

    /// Fourth-order central second derivative.
    pub fn d2dx2(&self, f: &Field) -> Field {
        let inv = 1.0 / (12.0 * self.dx * self.dx);
        self.stencil(f, |m2, m1, c, p1, p2| {
            (-(m2 + p2) + 16.0 * (m1 + p1) - 30.0 * c) * inv
        })
    }

    /// Midpoint-rule integral over the periodic domain, summed in index order.
    pub fn integrate(&self, f: &Field) -> f64 {
        debug_assert_eq!(f.len(), self.cells);
        f.iter().sum::<f64>() * self.dx
    }

    /// Fourth-difference damping `-ν (f_{j+2} - 4f_{j+1} + 6f_j - 4f_{j-1} + f_{j-2})`.
    pub fn hyperdiffusion(&self, f: &Field, nu_h: f64) -> Field {
        if nu_h == 0.0 {
            return Field::zeros(self);
        }
        self.stencil(f, |m2, m1, c, p1, p2| {
            -nu_h * ((m2 + p2) - 4.0 * (m1 + p1) + 6.0 * c)
        })
    }

    /// Spatial part of the relativistic Bohm potential, `s⁻¹ ∂²s` with
    /// `s = sqrt(n/γ)`.
    pub fn bohm_potential(&self, n: &Field, gamma: &Field) -> Result<Field> {
        let mut s = Field::zeros(self);
        for (j, (si, (&nj, &gj))) in s.iter_mut().zip(n.iter().zip(gamma.iter())).enumerate() {
            if !(nj > 0.0) {
                return Err(Error::InvalidState(format!(
                    "Bohm potential needs n > 0, got {nj} in cell {j}"
                )));
            }
            if !(gj >= 1.0) {
                return Err(Error::InvalidState(format!(
                    "Bohm potential needs gamma >= 1, got {gj} in cell {j}"
                )));
            }
            *si = (nj / gj).sqrt();
        }
        let mut u = self.d2dx2(&s);
        for (uj, sj) in u.iter_mut().zip(s.iter()) {
            *uj /= sj;
        }
        Ok(u)
    }

    /// Fourth-order interpolated value at the periodic seam between cells
    /// `M-1` and `0`.
    pub fn seam_value(&self, f: &Field) -> f64 {
        let m = self.cells;
        (9.0 * (f[m - 1] + f[0]) - (f[m - 2] + f[1])) / 16.0
    }

    /// Electric field consistent with Gauss's law `∂x E = ω² (1 - n_e + n_p)`,
    /// anchored to zero at the periodic seam.
    ///
    /// The field is built by cumulative summation so that [`Grid1D::ddx`]
    /// applied to the result reproduces the source up to rounding: the
    /// fourth-order stencil factors as `D0 (1 - dx² δ²/6)`, so a leapfrog
    /// running sum inverts `D0` and a cyclic tridiagonal solve inverts the
    /// bracket. The source components the stencil cannot represent (its mean
    /// and the grid-scale alternating mode) are dropped; for smooth densities
    /// both are negligible.
    pub fn poisson_field(&self, n_e: &Field, n_p: &Field, omega_pe_sq: f64) -> Result<Field> {
        let m = self.cells;
        let mut src: Field = n_e
            .iter()
            .zip(n_p.iter())
            .map(|(&ne, &np)| omega_pe_sq * (1.0 - ne + np))
            .collect();
        if let Some(j) = src.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidState(format!(
                "non-finite density in cell {j}"
            )));
        }

        let charge: f64 = n_e
            .iter()
            .zip(n_p.iter())
            .map(|(&ne, &np)| 1.0 - ne + np)
            .sum::<f64>()
            * self.dx;
        let tolerance = 1e-8 * self.length();
        if charge.abs() > tolerance {
            return Err(Error::ChargeImbalance {
                residual: charge,
                tolerance,
            });
        }

        let mean = src.iter().sum::<f64>() / m as f64;
        let alternating = src
            .iter()
            .enumerate()
            .map(|(j, v)| if j % 2 == 0 { *v } else { -*v })
            .sum::<f64>()
            / m as f64;
        for (j, v) in src.iter_mut().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            *v -= mean + sign * alternating;
        }

        // Leapfrog sums: y_{j+1} = y_{j-1} + 2 dx src_j, one chain per parity.
        let mut y = Field::zeros(self);
        for j in (2..m).step_by(2) {
            y[j] = y[j - 2] + 2.0 * self.dx * src[j - 1];
        }
        for j in (3..m).step_by(2) {
            y[j] = y[j - 2] + 2.0 * self.dx * src[j - 1];
        }
        // Align the odd chain so y carries no alternating component.
        let even_mean = y.iter().step_by(2).sum::<f64>() / (m / 2) as f64;
        let odd_mean = y.iter().skip(1).step_by(2).sum::<f64>() / (m / 2) as f64;
        let shift = even_mean - odd_mean;
        for v in y.iter_mut().skip(1).step_by(2) {
            *v += shift;
        }

        // (4/3) E_j - (1/6)(E_{j-1} + E_{j+1}) = y_j; Jacobi contracts by 1/4.
        let mut e = y.clone();
        let mut next = Field::zeros(self);
        for _ in 0..200 {
            let mut change: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for j in 0..m {
                let jm = (j + m - 1) % m;
                let jp = (j + 1) % m;
                next[j] = 0.75 * (y[j] + (e[jm] + e[jp]) / 6.0);
                change = change.max((next[j] - e[j]).abs());
                scale = scale.max(next[j].abs());
            }
            std::mem::swap(&mut e, &mut next);
            if change <= f64::EPSILON * scale * 0.25 {
                break;
            }
        }

        let seam = self.seam_value(&e);
        for v in e.iter_mut() {
            *v -= seam;
        }
        Ok(e)
    }
}

/// Cell-centred values aligned with a [`Grid1D`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Field(Vec<f64>);

impl Field {
    pub fn zeros(grid: &Grid1D) -> Self {
        Self(vec![0.0; grid.cells()])
    }

    pub fn constant(grid: &Grid1D, value: f64) -> Self {
        Self(vec![value; grid.cells()])
    }

    /// Samples `f` at the cell centres.
    pub fn from_fn(grid: &Grid1D, f: impl Fn(f64) -> f64) -> Self {
        (0..grid.cells()).map(|j| f(grid.x(j))).collect()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Index of the first non-finite value.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.0.iter().position(|v| !v.is_finite())
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| f(a, b))
            .collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        self.0.iter().map(|&a| f(a)).collect()
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, scale: f64, other: &Field) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += scale * b;
        }
    }

    /// Mirror image `f(x) -> f(-x)`, which on a cell-centred grid reverses
    /// the index order.
    pub fn mirrored(&self) -> Field {
        self.0.iter().rev().copied().collect()
    }
}

impl From<Vec<f64>> for Field {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl FromIterator<f64> for Field {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl Deref for Field {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Field {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}
