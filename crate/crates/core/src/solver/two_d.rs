use super::{
    euler_line, face_fluxes, plan_steps, ssp_rk3, Integrator, Rotation, SolverConfig, Splitting,
    Velocity,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Config(
                "grid needs at least one cell per axis".into(),
            ));
        }
        for (lo, hi) in [x, y] {
            if !(hi > lo && lo.is_finite() && hi.is_finite()) {
                return Err(Error::Config(format!("invalid domain [{lo}, {hi}]")));
            }
        }
        Ok(Grid2D {
            nx,
            ny,
            x_min: x.0,
            x_max: x.1,
            y_min: y.0,
            y_max: y.1,
        })
    }

    /// `n × n` cells on the unit square.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(n, n, (0.0, 1.0), (0.0, 1.0))
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    pub fn x_center(&self, i: usize) -> f64 {
        self.x_min + self.dx() * (i as f64 + 0.5)
    }

    pub fn y_center(&self, j: usize) -> f64 {
        self.y_min + self.dy() * (j as f64 + 0.5)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }
}

/// Cell averages stored row by row: `values[j * nx + i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub grid: Grid2D,
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field2D {
    pub fn constant(grid: Grid2D, value: f64) -> Self {
        Field2D {
            grid,
            values: vec![value; grid.len()],
            time: 0.0,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// `Σ φ̄ Δx Δy`
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx() * self.grid.dy()
    }
}

/// Zalesak's slotted disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlottedDisk {
    pub center: (f64, f64),
    pub radius: f64,
    pub slot_half_width: f64,
    pub slot_top: f64,
}

impl Default for SlottedDisk {
    fn default() -> Self {
        SlottedDisk {
            center: (0.5, 0.75),
            radius: 0.15,
            slot_half_width: 0.025,
            slot_top: 0.85,
        }
    }
}

impl SlottedDisk {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (cx, cy) = self.center;
        let in_disk = (x - cx).powi(2) + (y - cy).powi(2) < self.radius * self.radius;
        let in_slot = (x - cx).abs() < self.slot_half_width && y < self.slot_top;
        in_disk && !in_slot
    }
}

pub fn rotation_velocity(rot: &Rotation, x: f64, y: f64) -> (f64, f64) {
    let (x0, y0) = rot.center;
    (-rot.omega * (y - y0), rot.omega * (x - x0))
}

/// Default slotted disk sampled with 4×4 points per cell.
pub fn init_zalesak(grid: &Grid2D) -> Field2D {
    init_zalesak_with(grid, &SlottedDisk::default(), 4)
}

/// Cell values are the fraction of `sub × sub` midpoint samples inside `disk`.
pub fn init_zalesak_with(grid: &Grid2D, disk: &SlottedDisk, sub: usize) -> Field2D {
    let (dx, dy) = (grid.dx(), grid.dy());
    let mut values = vec![0.0; grid.len()];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let x0 = grid.x_min + dx * i as f64;
            let y0 = grid.y_min + dy * j as f64;
            let mut hits = 0usize;
            for sj in 0..sub {
                for si in 0..sub {
                    let x = x0 + dx * (si as f64 + 0.5) / sub as f64;
                    let y = y0 + dy * (sj as f64 + 0.5) / sub as f64;
                    hits += disk.contains(x, y) as usize;
                }
            }
            values[grid.index(i, j)] = hits as f64 / (sub * sub) as f64;
        }
    }
    Field2D {
        grid: *grid,
        values,
        time: 0.0,
    }
}

fn rotation_of(cfg: &SolverConfig) -> Result<Rotation> {
    match cfg.velocity {
        Velocity::Rotation(r) => Ok(r),
        Velocity::Uniform(_) => Err(Error::Config("2D solver needs a rotation velocity".into())),
    }
}

/// Face velocities: `u` on x-faces of row `j`, `v` on y-faces of column `i`.
struct FaceVelocities {
    u_rows: Vec<f64>,
    v_cols: Vec<f64>,
}

impl FaceVelocities {
    fn new(grid: &Grid2D, rot: &Rotation) -> Self {
        // u depends on y only and v on x only, so face-centre values reduce to
        // one per row / column
        FaceVelocities {
            u_rows: (0..grid.ny)
                .map(|j| rotation_velocity(rot, 0.0, grid.y_center(j)).0)
                .collect(),
            v_cols: (0..grid.nx)
                .map(|i| rotation_velocity(rot, grid.x_center(i), 0.0).1)
                .collect(),
        }
    }

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    fn time_step(&self, grid: &Grid2D, cfl: f64, splitting: Splitting) -> Result<f64> {
        let su = Self::max_abs(&self.u_rows) / grid.dx();
        let sv = Self::max_abs(&self.v_cols) / grid.dy();
        let rate = match splitting {
            Splitting::Alternating => su.max(sv),
            Splitting::Unsplit => su + sv,
        };
        if rate > 0.0 {
            Ok(cfl / rate)
        } else {
            Err(Error::Config("velocity vanishes on every face".into()))
        }
    }
}

struct Stepper<'a> {
    cfg: &'a SolverConfig,
    grid: Grid2D,
    vel: FaceVelocities,
    line: Vec<f64>,
    line_out: Vec<f64>,
    flux: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(cfg: &'a SolverConfig, grid: Grid2D) -> Result<Self> {
        cfg.validate()?;
        let rot = rotation_of(cfg)?;
        let n = grid.nx.max(grid.ny);
        Ok(Stepper {
            cfg,
            grid,
            vel: FaceVelocities::new(&grid, &rot),
            line: Vec::with_capacity(n),
            line_out: vec![0.0; n],
            flux: Vec::with_capacity(n),
        })
    }

    fn x_sweep_euler(&mut self, q: &[f64], dt: f64, out: &mut [f64]) {
        let g = self.grid;
        for j in 0..g.ny {
            let courant = self.vel.u_rows[j] * dt / g.dx();
            let row = &q[j * g.nx..(j + 1) * g.nx];
            euler_line(
                &self.cfg.scheme,
                row,
                courant,
                &mut self.flux,
                &mut out[j * g.nx..(j + 1) * g.nx],
            );
        }
    }

    fn y_sweep_euler(&mut self, q: &[f64], dt: f64, out: &mut [f64]) {
        let g = self.grid;
        for i in 0..g.nx {
            let courant = self.vel.v_cols[i] * dt / g.dy();
            self.line.clear();
            self.line.extend((0..g.ny).map(|j| q[g.index(i, j)]));
            euler_line(
                &self.cfg.scheme,
                &self.line,
                courant,
                &mut self.flux,
                &mut self.line_out[..g.ny],
            );
            for j in 0..g.ny {
                out[g.index(i, j)] = self.line_out[j];
            }
        }
    }

    fn unsplit_euler(&mut self, q: &[f64], dt: f64, out: &mut [f64]) {
        let g = self.grid;
        self.x_sweep_euler(q, dt, out);
        // out already holds q - Δx-flux difference; subtract the y part
        for i in 0..g.nx {
            let courant = self.vel.v_cols[i] * dt / g.dy();
            self.line.clear();
            self.line.extend((0..g.ny).map(|j| q[g.index(i, j)]));
            face_fluxes(&self.cfg.scheme, &self.line, courant, &mut self.flux);
            for j in 0..g.ny {
                let below = self.flux[(j + g.ny - 1) % g.ny];
                out[g.index(i, j)] -= self.flux[j] - below;
            }
        }
    }

    fn integrate(
        &mut self,
        q: &[f64],
        mut op: impl FnMut(&mut Self, &[f64], &mut [f64]),
    ) -> Vec<f64> {
        match self.cfg.integrator {
            Integrator::EulerForward => {
                let mut out = vec![0.0; q.len()];
                op(self, q, &mut out);
                out
            }
            Integrator::SspRk3 => ssp_rk3(q, |a, b| op(self, a, b)),
        }
    }

    /// One step of size `dt`; `parity` picks the sweep order.
    fn step(&mut self, q: &[f64], dt: f64, parity: usize) -> Vec<f64> {
        match self.cfg.splitting {
            Splitting::Unsplit => self.integrate(q, |s, a, b| s.unsplit_euler(a, dt, b)),
            Splitting::Alternating => {
                let x = |s: &mut Self, a: &[f64], b: &mut [f64]| s.x_sweep_euler(a, dt, b);
                let y = |s: &mut Self, a: &[f64], b: &mut [f64]| s.y_sweep_euler(a, dt, b);
                if parity.is_multiple_of(2) {
                    let half = self.integrate(q, x);
                    self.integrate(&half, y)
                } else {
                    let half = self.integrate(q, y);
                    self.integrate(&half, x)
                }
            }
        }
    }
}

/// One full step with the configured splitting and time step rule.
pub fn step_2d(f: &Field2D, cfg: &SolverConfig) -> Result<Field2D> {
    let mut stepper = Stepper::new(cfg, f.grid)?;
    let dt = stepper.vel.time_step(&f.grid, cfg.cfl, cfg.splitting)?;
    let values = stepper.step(&f.values, dt, 0);
    Ok(Field2D {
        grid: f.grid,
        values,
        time: f.time + dt,
    })
}

/// Advances `initial` to `cfg.end_time`; `observer(pre, post)` sees every step.
pub fn advance_2d(
    initial: &Field2D,
    cfg: &SolverConfig,
    mut observer: impl FnMut(&[f64], &[f64]),
) -> Result<Field2D> {
    let mut stepper = Stepper::new(cfg, initial.grid)?;
    let dt = stepper
        .vel
        .time_step(&initial.grid, cfg.cfl, cfg.splitting)?;
    let remaining = cfg.end_time - initial.time;
    if !(remaining > 0.0) {
        return Err(Error::Config(format!(
            "end_time {} does not lie after the field time {}",
            cfg.end_time, initial.time
        )));
    }
    let mut values = initial.values.clone();
    for (k, step) in plan_steps(remaining, dt).into_iter().enumerate() {
        let next = stepper.step(&values, step, k);
        observer(&values, &next);
        values = next;
    }
    Ok(Field2D {
        grid: initial.grid,
        values,
        time: cfg.end_time,
    })
}

/// Slotted-disk rotation from `t = 0` to `cfg.end_time`.
pub fn run_zalesak(cfg: &SolverConfig, grid: &Grid2D) -> Result<Field2D> {
    advance_2d(&init_zalesak(grid), cfg, |_, _| {})
}
