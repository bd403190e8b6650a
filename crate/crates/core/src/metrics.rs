//! Boundedness and error measures for solver output.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::schemes::{normalise_window, StencilWindow};
use crate::solver::{Field1D, Field2D};

/// Anything exposing a flat slice of cell averages.
pub trait CellValues {
    fn cell_values(&self) -> &[f64];
}

impl CellValues for Field1D {
    fn cell_values(&self) -> &[f64] {
        &self.values
    }
}

impl CellValues for Field2D {
    fn cell_values(&self) -> &[f64] {
        &self.values
    }
}

impl CellValues for [f64] {
    fn cell_values(&self) -> &[f64] {
        self
    }
}

impl CellValues for Vec<f64> {
    fn cell_values(&self) -> &[f64] {
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolatingCell {
    pub index: usize,
    /// Distance outside `[m, M]`, always positive.
    pub excess: f64,
    /// Upwind-normalised value of the cell before the step in which it first
    /// left the bounds, when a step history was recorded and the cell's
    /// neighbours differ.
    pub phi_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub max_overshoot: f64,
    pub max_undershoot: f64,
    pub violating_cells: Vec<ViolatingCell>,
    pub bounded: bool,
}

fn check_bounds(m: f64, big_m: f64, tol: f64) -> Result<()> {
    if !(big_m >= m) {
        return Err(Error::Config(format!(
            "upper bound {big_m} lies below lower bound {m}"
        )));
    }
    if !(tol >= 0.0) {
        return Err(Error::domain("tol", tol, "a value >= 0"));
    }
    Ok(())
}

/// Excursions of `f` outside `[m, M]`. Cells beyond `tol` are listed.
pub fn bounds_report<F: CellValues + ?Sized>(
    f: &F,
    m: f64,
    big_m: f64,
    tol: f64,
) -> Result<BoundsReport> {
    bounds_report_with_history(f, m, big_m, tol, None)
}

/// As [`bounds_report`], attaching the pre-violation `φ̃` recorded by `history`.
pub fn bounds_report_with_history<F: CellValues + ?Sized>(
    f: &F,
    m: f64,
    big_m: f64,
    tol: f64,
    history: Option<&ViolationTracker>,
) -> Result<BoundsReport> {
    check_bounds(m, big_m, tol)?;
    let values = f.cell_values();
    let mut max_overshoot = 0.0f64;
    let mut max_undershoot = 0.0f64;
    let mut violating_cells = Vec::new();
    for (index, &v) in values.iter().enumerate() {
        let over = v - big_m;
        let under = m - v;
        max_overshoot = max_overshoot.max(over);
        max_undershoot = max_undershoot.max(under);
        if over > tol || under > tol {
            violating_cells.push(ViolatingCell {
                index,
                excess: over.max(under),
                phi_c: history.and_then(|h| h.first_phi_c(index)),
            });
        }
    }
    Ok(BoundsReport {
        lower_bound: m,
        upper_bound: big_m,
        max_overshoot,
        max_undershoot,
        bounded: max_overshoot <= tol && max_undershoot <= tol,
        violating_cells,
    })
}

/// `Σ |φ̄ − φ̄_exact| h`
pub fn l1_error(f: &Field1D, exact: &Field1D) -> Result<f64> {
    if f.grid != exact.grid || f.values.len() != exact.values.len() {
        return Err(Error::GridMismatch(format!(
            "{:?} vs {:?}",
            f.grid, exact.grid
        )));
    }
    let h = f.grid.h();
    Ok(f.values
        .iter()
        .zip(&exact.values)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        * h)
}

/// Per-step observer for 1D runs: remembers, for each cell, its upwind
/// normalised value just before the first step that took it outside `[m, M]`
/// by more than `tol`.
#[derive(Debug, Clone)]
pub struct ViolationTracker {
    m: f64,
    big_m: f64,
    tol: f64,
    step: usize,
    first: BTreeMap<usize, FirstViolation>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstViolation {
    pub step: usize,
    pub phi_c: Option<f64>,
}

impl ViolationTracker {
    pub fn new(m: f64, big_m: f64, tol: f64) -> Result<Self> {
        check_bounds(m, big_m, tol)?;
        Ok(ViolationTracker {
            m,
            big_m,
            tol,
            step: 0,
            first: BTreeMap::new(),
        })
    }

    /// Feeds one periodic 1D step; the sign of `courant` sets the upwind side.
    pub fn observe(&mut self, pre: &[f64], post: &[f64], courant: f64) {
        let n = pre.len();
        for (i, &v) in post.iter().enumerate() {
            if self.first.contains_key(&i) {
                continue;
            }
            if v - self.big_m > self.tol || self.m - v > self.tol {
                let (up, down) = if courant >= 0.0 {
                    ((i + n - 1) % n, (i + 1) % n)
                } else {
                    ((i + 1) % n, (i + n - 1) % n)
                };
                let w = StencilWindow::new([0.0, pre[up], pre[i], pre[down], 0.0]);
                let scale = pre[up].abs().max(pre[down].abs());
                self.first.insert(
                    i,
                    FirstViolation {
                        step: self.step,
                        phi_c: normalise_window(&w, 1e-14 * scale),
                    },
                );
            }
        }
        self.step += 1;
    }

    pub fn first_phi_c(&self, cell: usize) -> Option<f64> {
        self.first.get(&cell).and_then(|f| f.phi_c)
    }

    /// Every cell that ever left the bounds, in index order.
    pub fn first_violations(&self) -> impl Iterator<Item = (usize, FirstViolation)> + '_ {
        self.first.iter().map(|(&i, &f)| (i, f))
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::SchemeConfig;
    use crate::solver::{
        advance_1d, exact_advection_1d, init_square_wave, run_advection_1d, Grid1D, SolverConfig,
    };
    use proptest::prelude::*;

    fn grid() -> Grid1D {
        Grid1D::symmetric_unit(200).unwrap()
    }

    #[test]
    fn bounds_examples() {
        let f = Field1D::constant(grid(), 0.5);
        let r = bounds_report(&f, 0.0, 1.0, 1e-10).unwrap();
        assert!(r.bounded);
        assert_eq!((r.max_overshoot, r.max_undershoot), (0.0, 0.0));
        assert!(r.violating_cells.is_empty());

        let mut f = Field1D::constant(grid(), 0.5);
        f.values[17] = 1.001;
        let r = bounds_report(&f, 0.0, 1.0, 1e-10).unwrap();
        assert!(!r.bounded);
        assert!((r.max_overshoot - 0.001).abs() < 1e-15);
        assert_eq!(r.violating_cells.len(), 1);
        assert_eq!(r.violating_cells[0].index, 17);
        assert_eq!(r.violating_cells[0].phi_c, None);

        assert!(bounds_report(&f, 1.0, 0.5, 1e-10).is_err());
        assert!(
            bounds_report(&Field1D::constant(grid(), 0.5), 0.5, 0.5, 0.0)
                .unwrap()
                .bounded
        );
        assert!(bounds_report(&f, 0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn thinc_violations_come_from_lower_half() {
        let g = grid();
        let cfg = SolverConfig::new_1d(SchemeConfig::thinc(2.0).unwrap(), 0.3, 1.0, 0.1).unwrap();
        let mut tracker = ViolationTracker::new(0.0, 1.0, 1e-10).unwrap();
        let f = advance_1d(&init_square_wave(&g), &cfg, |a, b, c| {
            tracker.observe(a, b, c)
        })
        .unwrap();
        let r = bounds_report_with_history(&f, 0.0, 1.0, 1e-10, Some(&tracker)).unwrap();
        assert!(!r.bounded);
        assert!(!r.violating_cells.is_empty());
        let recorded: Vec<f64> = r.violating_cells.iter().filter_map(|c| c.phi_c).collect();
        assert!(!recorded.is_empty());
        assert!(recorded.iter().all(|&p| p < 0.5));
        assert!(tracker
            .first_violations()
            .all(|(_, v)| v.phi_c.unwrap() < 0.5));
    }

    #[test]
    fn l1_examples() {
        let g = grid();
        let exact = exact_advection_1d(&g, 1.0, 0.1);
        assert_eq!(l1_error(&exact, &exact).unwrap(), 0.0);
        let mut shifted = exact.clone();
        shifted.values.iter_mut().for_each(|v| *v += 0.01);
        assert!((l1_error(&shifted, &exact).unwrap() - 0.02).abs() < 1e-14);

        let cfg = SolverConfig::new_1d(SchemeConfig::upwind(), 1.0, 1.0, 0.1).unwrap();
        let run = run_advection_1d(&cfg, &g).unwrap();
        assert!(l1_error(&run, &exact).unwrap() < 1e-14);

        let other = Field1D::constant(Grid1D::symmetric_unit(100).unwrap(), 0.0);
        assert!(l1_error(&other, &exact).is_err());
    }

    fn field(values: Vec<f64>) -> Field1D {
        Field1D::new(Grid1D::symmetric_unit(values.len()).unwrap(), values, 0.0).unwrap()
    }

    proptest! {
        #[test]
        fn l1_is_a_metric(
            a in proptest::collection::vec(-1.0f64..1.0, 32),
            b in proptest::collection::vec(-1.0f64..1.0, 32),
            c in proptest::collection::vec(-1.0f64..1.0, 32),
        ) {
            let (fa, fb, fc) = (field(a.clone()), field(b.clone()), field(c));
            let ab = l1_error(&fa, &fb).unwrap();
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab, l1_error(&fb, &fa).unwrap());
            prop_assert_eq!(ab == 0.0, a == b);
            prop_assert_eq!(l1_error(&fa, &fa).unwrap(), 0.0);
            let ac = l1_error(&fa, &fc).unwrap();
            let cb = l1_error(&fc, &fb).unwrap();
            prop_assert!(ab <= ac + cb + 1e-12);
        }

        #[test]
        fn bounds_ignore_cell_order(
            (v, shuffled) in proptest::collection::vec(-0.2f64..1.2, 1..64)
                .prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle())),
        ) {
            let before = bounds_report(&v, 0.0, 1.0, 1e-10).unwrap();
            let after = bounds_report(&shuffled, 0.0, 1.0, 1e-10).unwrap();
            prop_assert_eq!(before.max_overshoot, after.max_overshoot);
            prop_assert_eq!(before.max_undershoot, after.max_undershoot);
            prop_assert_eq!(before.bounded, after.bounded);
            prop_assert_eq!(before.violating_cells.len(), after.violating_cells.len());
        }
    }
}
