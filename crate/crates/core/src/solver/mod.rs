//! Finite-volume advection on uniform periodic grids.
//!
//! Both solvers update cell averages in conservative flux form with face
//! values from [`crate::schemes::reconstruct_face`], oriented by the sign of
//! the local face velocity.

mod one_d;
mod two_d;

pub use one_d::{
    advance_1d, exact_advection_1d, init_square_wave, run_advection_1d, step_1d, Field1D, Grid1D,
    SQUARE_WAVE,
};
pub use two_d::{
    advance_2d, init_zalesak, init_zalesak_with, rotation_velocity, run_zalesak, step_2d, Field2D,
    Grid2D, SlottedDisk,
};

use crate::error::{Error, Result};
use crate::schemes::{reconstruct_face, SchemeConfig, StencilWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    EulerForward,
    /// Three-stage strong-stability-preserving Runge-Kutta built from Euler substeps.
    SspRk3,
}

/// Solid-body rotation `(u, v) = ω(−(y − y₀), x − x₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub omega: f64,
    pub center: (f64, f64),
}

impl Rotation {
    /// One revolution per unit time about the centre of the unit square.
    pub fn unit_square() -> Self {
        Rotation {
            omega: 2.0 * std::f64::consts::PI,
            center: (0.5, 0.5),
        }
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Velocity {
    Uniform(f64),
    Rotation(Rotation),
}

/// How the two directions are combined in 2D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    /// x-sweep then y-sweep, order reversed every step; `Δt = cfl·min(Δx/max|u|, Δy/max|v|)`.
    Alternating,
    /// Both flux differences from the same state; `Δt = cfl/(max|u|/Δx + max|v|/Δy)`.
    Unsplit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub scheme: SchemeConfig,
    pub cfl: f64,
    pub integrator: Integrator,
    pub end_time: f64,
    pub velocity: Velocity,
    pub splitting: Splitting,
}

impl SolverConfig {
    /// Forward-Euler 1D configuration with constant velocity `u`.
    pub fn new_1d(scheme: SchemeConfig, cfl: f64, u: f64, end_time: f64) -> Result<Self> {
        if !(u != 0.0 && u.is_finite()) {
            return Err(Error::domain("velocity", u, "a finite nonzero value"));
        }
        SolverConfig {
            scheme,
            cfl,
            integrator: Integrator::EulerForward,
            end_time,
            velocity: Velocity::Uniform(u),
            splitting: Splitting::Alternating,
        }
        .validated()
    }

    /// Forward-Euler 2D rotation configuration.
    pub fn new_2d(
        scheme: SchemeConfig,
        cfl: f64,
        rotation: Rotation,
        end_time: f64,
    ) -> Result<Self> {
        if !(rotation.omega != 0.0 && rotation.omega.is_finite()) {
            return Err(Error::domain(
                "omega",
                rotation.omega,
                "a finite nonzero value",
            ));
        }
        SolverConfig {
            scheme,
            cfl,
            integrator: Integrator::EulerForward,
            end_time,
            velocity: Velocity::Rotation(rotation),
            splitting: Splitting::Alternating,
        }
        .validated()
    }

    pub fn with_integrator(self, integrator: Integrator) -> Self {
        SolverConfig { integrator, ..self }
    }

    pub fn with_splitting(self, splitting: Splitting) -> Self {
        SolverConfig { splitting, ..self }
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::domain("cfl", self.cfl, "a value in (0, 1]"));
        }
        if !(self.end_time > 0.0 && self.end_time.is_finite()) {
            return Err(Error::domain(
                "end_time",
                self.end_time,
                "a finite value > 0",
            ));
        }
        Ok(())
    }
}

/// Step sizes covering `duration`: all full steps of `dt` except a shortened
/// last one. A last step within 1e-12 relative of `dt` is taken as full.
pub(crate) fn plan_steps(duration: f64, dt: f64) -> Vec<f64> {
    let ratio = duration / dt;
    let mut n = ratio.ceil() as usize;
    if n > 1 && ratio - ((n - 1) as f64) <= 1e-12 * ratio.max(1.0) {
        n -= 1;
    }
    let n = n.max(1);
    let last = duration - (n - 1) as f64 * dt;
    let mut steps = vec![dt; n];
    if (last - dt).abs() > 1e-12 * dt {
        steps[n - 1] = last;
    }
    steps
}

/// `courant · φ_{i+1/2}` at every face `i+1/2` of a periodic line, with the
/// window mirrored when `courant < 0`.
pub(crate) fn face_fluxes(scheme: &SchemeConfig, line: &[f64], courant: f64, out: &mut Vec<f64>) {
    let n = line.len();
    let at = |k: isize| line[k.rem_euclid(n as isize) as usize];
    out.clear();
    out.extend((0..n as isize).map(|i| {
        let w = if courant >= 0.0 {
            StencilWindow::new([at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2)])
        } else {
            StencilWindow::new([at(i + 3), at(i + 2), at(i + 1), at(i), at(i - 1)])
        };
        courant * reconstruct_face(scheme, &w)
    }));
}

/// One forward-Euler update of a periodic line with constant signed Courant number.
pub(crate) fn euler_line(
    scheme: &SchemeConfig,
    line: &[f64],
    courant: f64,
    flux: &mut Vec<f64>,
    out: &mut [f64],
) {
    face_fluxes(scheme, line, courant, flux);
    let n = line.len();
    for i in 0..n {
        let left = flux[(i + n - 1) % n];
        out[i] = line[i] - (flux[i] - left);
    }
}

/// SSP-RK3 composed from an Euler operator `euler(q, out)`.
pub(crate) fn ssp_rk3(q: &[f64], mut euler: impl FnMut(&[f64], &mut [f64])) -> Vec<f64> {
    let n = q.len();
    let mut q1 = vec![0.0; n];
    euler(q, &mut q1);
    let mut e = vec![0.0; n];
    euler(&q1, &mut e);
    let q2: Vec<f64> = (0..n).map(|i| 0.75 * q[i] + 0.25 * e[i]).collect();
    euler(&q2, &mut e);
    (0..n).map(|i| q[i] / 3.0 + 2.0 / 3.0 * e[i]).collect()
}
