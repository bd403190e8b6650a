use super::{euler_line, plan_steps, ssp_rk3, Integrator, SolverConfig, Velocity};
use crate::error::{Error, Result};

/// Support `[lo, hi]` of the unit square wave used as initial data.
pub const SQUARE_WAVE: (f64, f64) = (-0.4, 0.4);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n_cells: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl Grid1D {
    pub fn new(n_cells: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::Config("grid needs at least one cell".into()));
        }
        if !(x_max > x_min && x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::Config(format!("invalid domain [{x_min}, {x_max}]")));
        }
        Ok(Grid1D {
            n_cells,
            x_min,
            x_max,
        })
    }

    /// `N` cells on `[-1, 1]`.
    pub fn symmetric_unit(n_cells: usize) -> Result<Self> {
        Self::new(n_cells, -1.0, 1.0)
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn h(&self) -> f64 {
        self.length() / self.n_cells as f64
    }

    pub fn left_face(&self, i: usize) -> f64 {
        self.x_min + self.h() * i as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + self.h() * (i as f64 + 0.5)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field1D {
    pub fn new(grid: Grid1D, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.n_cells {
            return Err(Error::GridMismatch(format!(
                "{} values for {} cells",
                values.len(),
                grid.n_cells
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain("cell value", *bad, "a finite value"));
        }
        Ok(Field1D { grid, values, time })
    }

    pub fn constant(grid: Grid1D, value: f64) -> Self {
        Field1D {
            grid,
            values: vec![value; grid.n_cells],
            time: 0.0,
        }
    }

    /// `Σ φ̄_i h`
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.h()
    }

    /// Reversed cell order (reflection `x -> x_min + x_max - x`).
    pub fn mirrored(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Field1D {
            values,
            ..self.clone()
        }
    }
}

fn overlap(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    (b.min(hi) - a.max(lo)).max(0.0)
}

/// Cell averages of the periodic extension of the indicator of `[lo, hi]`.
fn periodic_indicator(grid: &Grid1D, lo: f64, hi: f64) -> Vec<f64> {
    let len = grid.length();
    let h = grid.h();
    (0..grid.n_cells)
        .map(|i| {
            let a = grid.left_face(i);
            let b = a + h;
            let covered: f64 = [-len, 0.0, len]
                .iter()
                .map(|shift| overlap(a, b, lo + shift, hi + shift))
                .sum();
            (covered / h).clamp(0.0, 1.0)
        })
        .collect()
}

/// Square wave: 1 on `[-0.4, 0.4]`, 0 elsewhere; straddling cells get the
/// exact overlap fraction.
pub fn init_square_wave(grid: &Grid1D) -> Field1D {
    let (lo, hi) = SQUARE_WAVE;
    Field1D {
        grid: *grid,
        values: periodic_indicator(grid, lo, hi),
        time: 0.0,
    }
}

/// Exact cell averages of the square wave translated by `u t` with periodic wrap.
pub fn exact_advection_1d(grid: &Grid1D, u: f64, t: f64) -> Field1D {
    let (lo, hi) = SQUARE_WAVE;
    let shift = (u * t).rem_euclid(grid.length());
    Field1D {
        grid: *grid,
        values: periodic_indicator(grid, lo + shift, hi + shift),
        time: t,
    }
}

fn uniform_velocity(cfg: &SolverConfig) -> Result<f64> {
    match cfg.velocity {
        Velocity::Uniform(u) => Ok(u),
        Velocity::Rotation(_) => Err(Error::Config("1D solver needs a uniform velocity".into())),
    }
}

fn update(cfg: &SolverConfig, values: &[f64], courant: f64) -> Vec<f64> {
    let mut flux = Vec::with_capacity(values.len());
    let mut euler =
        |q: &[f64], out: &mut [f64]| euler_line(&cfg.scheme, q, courant, &mut flux, out);
    match cfg.integrator {
        Integrator::EulerForward => {
            let mut out = vec![0.0; values.len()];
            euler(values, &mut out);
            out
        }
        Integrator::SspRk3 => ssp_rk3(values, euler),
    }
}

/// One full step `Δt = cfl·h/|u|`.
pub fn step_1d(f: &Field1D, cfg: &SolverConfig) -> Result<Field1D> {
    cfg.validate()?;
    let u = uniform_velocity(cfg)?;
    let courant = cfg.cfl * u.signum();
    Ok(Field1D {
        grid: f.grid,
        values: update(cfg, &f.values, courant),
        time: f.time + cfg.cfl * f.grid.h() / u.abs(),
    })
}

/// Advances `initial` to `cfg.end_time`, shortening the final step to land on
/// it exactly. `observer(pre, post, courant)` sees every step.
pub fn advance_1d(
    initial: &Field1D,
    cfg: &SolverConfig,
    mut observer: impl FnMut(&[f64], &[f64], f64),
) -> Result<Field1D> {
    cfg.validate()?;
    let u = uniform_velocity(cfg)?;
    let h = initial.grid.h();
    let dt = cfg.cfl * h / u.abs();
    let remaining = cfg.end_time - initial.time;
    if !(remaining > 0.0) {
        return Err(Error::Config(format!(
            "end_time {} does not lie after the field time {}",
            cfg.end_time, initial.time
        )));
    }
    let mut values = initial.values.clone();
    for step in plan_steps(remaining, dt) {
        // full steps use the configured CFL number verbatim
        let courant = if step == dt {
            cfg.cfl * u.signum()
        } else {
            u * step / h
        };
        let next = update(cfg, &values, courant);
        observer(&values, &next, courant);
        values = next;
    }
    Ok(Field1D {
        grid: initial.grid,
        values,
        time: cfg.end_time,
    })
}

/// Square-wave advection from `t = 0` to `cfg.end_time`.
pub fn run_advection_1d(cfg: &SolverConfig, grid: &Grid1D) -> Result<Field1D> {
    advance_1d(&init_square_wave(grid), cfg, |_, _, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::SchemeConfig;
    use proptest::prelude::*;

    fn grid200() -> Grid1D {
        Grid1D::symmetric_unit(200).unwrap()
    }

    fn all_schemes() -> Vec<SchemeConfig> {
        vec![
            SchemeConfig::upwind(),
            SchemeConfig::thinc(2.0).unwrap(),
            SchemeConfig::thinc_clipped(2.0, 2.5).unwrap(),
            SchemeConfig::weno_js(),
            SchemeConfig::weno_z(),
            SchemeConfig::teno(1e-5).unwrap(),
            SchemeConfig::teno(1e-7).unwrap(),
        ]
    }

    #[test]
    fn square_wave_cells() {
        let g = grid200();
        let f = init_square_wave(&g);
        assert_eq!(f.values[100], 1.0); // centred at 0.005
        assert_eq!(f.values[99], 1.0);
        assert_eq!(f.values[190], 0.0); // centred at 0.905
        assert!((f.mass() - 0.8).abs() < 1e-14);
        for n in [7, 33, 101] {
            let f = init_square_wave(&Grid1D::symmetric_unit(n).unwrap());
            assert!((f.mass() - 0.8).abs() < 1e-14);
            assert!(f.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
        // a straddling cell gets its overlap fraction
        let f = init_square_wave(&Grid1D::symmetric_unit(4).unwrap());
        assert_eq!(f.values, vec![0.0, 0.8, 0.8, 0.0]);
    }

    #[test]
    fn exact_solution() {
        let g = grid200();
        assert_eq!(
            exact_advection_1d(&g, 1.0, 0.0).values,
            init_square_wave(&g).values
        );
        let full = exact_advection_1d(&g, 1.0, 2.0);
        for (a, b) in full.values.iter().zip(&init_square_wave(&g).values) {
            assert!((a - b).abs() < 1e-12);
        }
        let f = exact_advection_1d(&g, 1.0, 0.1);
        assert!((f.mass() - 0.8).abs() < 1e-13);
        // support [-0.3, 0.5]
        assert!(f.values[69] < 1e-12 && f.values[70] > 1.0 - 1e-12);
        assert!(f.values[149] > 1.0 - 1e-12 && f.values[150] < 1e-12);
        // wrap across the periodic boundary
        let f = exact_advection_1d(&g, 1.0, 0.7);
        assert!((f.mass() - 0.8).abs() < 1e-13);
        assert!(f.values[0] > 1.0 - 1e-12 && f.values[199] > 1.0 - 1e-12);
    }

    #[test]
    fn constant_field_is_fixed_point() {
        let g = Grid1D::symmetric_unit(64).unwrap();
        let f = Field1D::constant(g, 0.3);
        for scheme in all_schemes() {
            for u in [1.0, -2.0] {
                let cfg = SolverConfig::new_1d(scheme, 0.7, u, 1.0).unwrap();
                assert_eq!(step_1d(&f, &cfg).unwrap().values, f.values);
                let rk = cfg.with_integrator(Integrator::SspRk3);
                for v in step_1d(&f, &rk).unwrap().values {
                    assert!((v - 0.3).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn upwind_unit_cfl_shifts_one_cell() {
        let g = grid200();
        let f = init_square_wave(&g);
        let cfg = SolverConfig::new_1d(SchemeConfig::upwind(), 1.0, 1.0, 0.1).unwrap();
        let next = step_1d(&f, &cfg).unwrap();
        for i in 0..200 {
            assert_eq!(next.values[i], f.values[(i + 199) % 200]);
        }
        let run = run_advection_1d(&cfg, &g).unwrap();
        let exact = exact_advection_1d(&g, 1.0, 0.1);
        for (a, b) in run.values.iter().zip(&exact.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn steps_conserve_mass() {
        let g = grid200();
        let f = init_square_wave(&g);
        for scheme in all_schemes() {
            for integrator in [Integrator::EulerForward, Integrator::SspRk3] {
                let cfg = SolverConfig::new_1d(scheme, 0.45, 1.0, 0.1)
                    .unwrap()
                    .with_integrator(integrator);
                let mut cur = f.clone();
                for _ in 0..20 {
                    let next = step_1d(&cur, &cfg).unwrap();
                    let before: f64 = cur.values.iter().sum();
                    let after: f64 = next.values.iter().sum();
                    assert!((before - after).abs() < 1e-12 * 200.0);
                    cur = next;
                }
            }
        }
    }

    #[test]
    fn negative_velocity_mirrors_positive() {
        let g = grid200();
        // asymmetric data so mirroring is visible
        let mut f = init_square_wave(&g);
        for (i, v) in f.values.iter_mut().enumerate() {
            *v += 0.3 * (i as f64 * 0.1).sin().max(0.0);
        }
        for scheme in all_schemes() {
            let fwd = SolverConfig::new_1d(scheme, 0.4, 1.0, 0.05).unwrap();
            let bwd = SolverConfig::new_1d(scheme, 0.4, -1.0, 0.05).unwrap();
            let a = advance_1d(&f, &fwd, |_, _, _| {}).unwrap().mirrored();
            let b = advance_1d(&f.mirrored(), &bwd, |_, _, _| {}).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() < 1e-13, "{}", scheme.label());
            }
        }
    }

    #[test]
    fn run_lands_on_end_time_and_reports_steps() {
        let g = grid200();
        let cfg = SolverConfig::new_1d(SchemeConfig::upwind(), 0.3, 1.0, 0.1).unwrap();
        let mut courants = Vec::new();
        let out = advance_1d(&init_square_wave(&g), &cfg, |_, _, c| courants.push(c)).unwrap();
        assert_eq!(out.time, 0.1);
        assert_eq!(courants.len(), 34);
        assert!(courants[..33].iter().all(|&c| c == 0.3));
        assert!(courants[33] < 0.3 && courants[33] > 0.0);
    }

    #[test]
    fn field_and_grid_validation() {
        assert!(Grid1D::new(0, 0.0, 1.0).is_err());
        assert!(Grid1D::new(4, 1.0, 1.0).is_err());
        let g = Grid1D::new(4, 0.0, 1.0).unwrap();
        assert!((g.h() * 4.0 - 1.0).abs() < 1e-12);
        assert!(Field1D::new(g, vec![0.0; 3], 0.0).is_err());
        assert!(Field1D::new(g, vec![0.0, f64::NAN, 0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn upwind_is_monotone_for_any_cfl() {
        let g = Grid1D::symmetric_unit(100).unwrap();
        for cfl in [0.1, 0.37, 0.8, 1.0] {
            let cfg = SolverConfig::new_1d(SchemeConfig::upwind(), cfl, 1.0, 0.3).unwrap();
            let f = run_advection_1d(&cfg, &g).unwrap();
            assert!(f.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_fields_conserve_mass(
            values in proptest::collection::vec(-2.0f64..2.0, 16..64),
            cfl in 0.05f64..1.0,
            scheme_idx in 0usize..7,
        ) {
            let g = Grid1D::symmetric_unit(values.len()).unwrap();
            let f = Field1D::new(g, values, 0.0).unwrap();
            let cfg = SolverConfig::new_1d(all_schemes()[scheme_idx], cfl, 1.0, 1.0).unwrap();
            let next = step_1d(&f, &cfg).unwrap();
            let a: f64 = f.values.iter().sum();
            let b: f64 = next.values.iter().sum();
            prop_assert!((a - b).abs() < 1e-12 * f.values.len() as f64);
        }
    }
}
