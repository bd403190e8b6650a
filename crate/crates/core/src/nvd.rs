//! Normalised variable diagrams across a perfect isolated discontinuity.
//!
//! For a discontinuity `0 = φ̄_{i-1} <= φ̄_i < φ̄_{i+1} = 1`, one explicit Euler
//! step with CFL number `c` can only stay bounded if
//!
//! - `φ̃_{i+1/2} <= φ̃_i / c` (slope condition; undershoot in cell `i` otherwise), and
//! - `φ̃_{i+1/2} <= 1` (unity condition; overshoot in cell `i+1` otherwise).
//!
//! [`sample_nvd`] tabulates a scheme's diagram, [`cbc_report`] reads off the
//! largest admissible CFL number, and [`one_step_oracle`] checks a single update
//! by brute force.

use crate::error::{Error, Result};
use crate::schemes::{
    normalise_window, reconstruct_face, NormalisedPair, SchemeConfig, StencilWindow,
};

/// Default number of diagram samples.
pub const DEFAULT_SAMPLES: usize = 100;
/// Default constant-cell padding on each side of the oracle profile.
pub const DEFAULT_PAD: usize = 6;
/// Default boundedness tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct NvdCurve {
    pub scheme: SchemeConfig,
    pub samples: Vec<NormalisedPair>,
}

impl NvdCurve {
    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }
}

/// Which necessary condition a diagram point violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `φ̃_{i+1/2} > φ̃_i / c`
    SlopeCondition,
    /// `φ̃_{i+1/2} > 1`
    UnityCondition,
}

/// A maximal run of consecutive samples violating one condition; the bounds
/// are the first and last violating `φ̃_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub lo: f64,
    pub hi: f64,
    pub condition: Condition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CbcReport {
    /// Largest CFL number satisfying the slope condition at every sample, capped at 1.
    pub c_max: f64,
    /// Some sample has `φ̃_{i+1/2} > 1`; no CFL number removes the overshoot.
    pub unconditional_violation: bool,
    pub max_phi_f: f64,
    pub argmax_phi_c: f64,
    /// Sample at which `φ̃_i / φ̃_{i+1/2}` is smallest.
    pub binding_phi_c: f64,
    samples: Vec<NormalisedPair>,
}

impl CbcReport {
    pub fn violations_at(&self, c: f64) -> Vec<Violation> {
        violations(&self.samples, c)
    }
}

/// Outcome of a single Euler update of a perfect isolated discontinuity.
#[derive(Debug, Clone, PartialEq)]
pub struct OneStepOutcome {
    pub bounded: bool,
    pub max_overshoot: f64,
    pub max_undershoot: f64,
    /// Pre-step `φ̃` of each cell that left `[−tol, 1+tol]`.
    pub violating_phi_c: Vec<f64>,
}

/// Samples the diagram at `φ̃_i = k/(n+1)`, `k = 1..=n`, on the window
/// `(0, 0, φ̃_i, 1, 1)`.
pub fn sample_nvd(cfg: &SchemeConfig, n: usize) -> Result<NvdCurve> {
    if n < 2 {
        return Err(Error::Config(format!("need at least 2 samples, got {n}")));
    }
    cfg.validate()?;
    let samples = (1..=n)
        .map(|k| {
            let phi_c = k as f64 / (n + 1) as f64;
            // window already normalised: the face value is φ̃_{i+1/2}
            let phi_f = reconstruct_face(cfg, &StencilWindow::new([0.0, 0.0, phi_c, 1.0, 1.0]));
            NormalisedPair { phi_c, phi_f }
        })
        .collect();
    Ok(NvdCurve {
        scheme: *cfg,
        samples,
    })
}

pub fn cbc_report(curve: &NvdCurve) -> CbcReport {
    let mut c_max = 1.0f64;
    let mut min_ratio = f64::INFINITY;
    let mut binding_phi_c = f64::NAN;
    let mut max_phi_f = f64::NEG_INFINITY;
    let mut argmax_phi_c = f64::NAN;
    for s in &curve.samples {
        if s.phi_f > max_phi_f {
            max_phi_f = s.phi_f;
            argmax_phi_c = s.phi_c;
        }
        // φ̃_{i+1/2} <= 0 places no constraint on c
        if s.phi_f > 0.0 {
            let ratio = s.phi_c / s.phi_f;
            if ratio < min_ratio {
                min_ratio = ratio;
                binding_phi_c = s.phi_c;
            }
        }
    }
    if min_ratio < c_max {
        c_max = min_ratio;
    }
    CbcReport {
        c_max,
        unconditional_violation: max_phi_f > 1.0,
        max_phi_f,
        argmax_phi_c,
        binding_phi_c,
        samples: curve.samples.clone(),
    }
}

/// `sinh β / (β e^β)`: the reciprocal of the THINC diagram's slope at the
/// origin, which is the binding constraint because the curve is concave.
pub fn analytic_cmax_thinc(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "a finite value > 0"));
    }
    Ok(beta.sinh() / (beta * beta.exp()))
}

/// Closed-form c_max of the clipped THINC diagram: `max(sinh β/(β e^β), 1/slope)`.
///
/// `φ̃/f(φ̃)` is nondecreasing for a concave `f` through the origin, so the
/// minimum sits at `φ̃ -> 0` where the steeper of the two branches binds.
pub fn analytic_cmax_clipped_thinc(beta: f64, clip_slope: f64) -> Result<f64> {
    if !(clip_slope > 0.0 && clip_slope.is_finite()) {
        return Err(Error::domain(
            "clip_slope",
            clip_slope,
            "a finite value > 0",
        ));
    }
    Ok(analytic_cmax_thinc(beta)?.max(1.0 / clip_slope).min(1.0))
}

pub fn classify_violations(curve: &NvdCurve, c: f64) -> Result<Vec<Violation>> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::domain("c", c, "a value in (0, 1]"));
    }
    Ok(violations(&curve.samples, c))
}

fn violations(samples: &[NormalisedPair], c: f64) -> Vec<Violation> {
    // same expression as c_max, so "c <= c_max" and "no slope violation" agree exactly
    let slope = |s: &NormalisedPair| s.phi_f > 0.0 && c > s.phi_c / s.phi_f;
    let unity = |s: &NormalisedPair| s.phi_f > 1.0;
    let mut out = runs(samples, slope, Condition::SlopeCondition);
    out.extend(runs(samples, unity, Condition::UnityCondition));
    out
}

fn runs(
    samples: &[NormalisedPair],
    pred: impl Fn(&NormalisedPair) -> bool,
    condition: Condition,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for s in samples {
        match (pred(s), open) {
            (true, None) => open = Some((s.phi_c, s.phi_c)),
            (true, Some((lo, _))) => open = Some((lo, s.phi_c)),
            (false, Some((lo, hi))) => {
                out.push(Violation { lo, hi, condition });
                open = None;
            }
            (false, None) => {}
        }
    }
    if let Some((lo, hi)) = open {
        out.push(Violation { lo, hi, condition });
    }
    out
}

/// One explicit Euler step of `(0,…,0, φ̃_i, 1,…,1)` with `pad` cells on each side.
pub fn one_step_oracle(
    cfg: &SchemeConfig,
    c: f64,
    phi_c: f64,
    pad: usize,
    tol: f64,
) -> Result<OneStepOutcome> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::domain("c", c, "a value in (0, 1]"));
    }
    if !(phi_c > 0.0 && phi_c < 1.0) {
        return Err(Error::domain("phi_c", phi_c, "a value in (0, 1)"));
    }
    if pad < 4 {
        return Err(Error::Config(format!("pad must be at least 4, got {pad}")));
    }
    if !(tol >= 0.0) {
        return Err(Error::domain("tol", tol, "a value >= 0"));
    }
    cfg.validate()?;

    let mut profile = vec![0.0; pad];
    profile.push(phi_c);
    profile.extend(std::iter::repeat_n(1.0, pad));
    let len = profile.len();

    // faces j+1/2 for j = 2..len-3 have a full window
    let face = |j: usize| {
        let w = StencilWindow::new([
            profile[j - 2],
            profile[j - 1],
            profile[j],
            profile[j + 1],
            profile[j + 2],
        ]);
        reconstruct_face(cfg, &w)
    };

    let mut out = OneStepOutcome {
        bounded: true,
        max_overshoot: 0.0,
        max_undershoot: 0.0,
        violating_phi_c: Vec::new(),
    };
    for j in 3..len - 3 {
        let next = profile[j] - c * (face(j) - face(j - 1));
        let over = next - 1.0;
        let under = -next;
        out.max_overshoot = out.max_overshoot.max(over);
        out.max_undershoot = out.max_undershoot.max(under);
        if over > tol || under > tol {
            out.bounded = false;
            let w = StencilWindow::new([0.0, profile[j - 1], profile[j], profile[j + 1], 0.0]);
            if let Some(p) = normalise_window(&w, 1e-14) {
                out.violating_phi_c.push(p);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thinc2() -> SchemeConfig {
        SchemeConfig::thinc(2.0).unwrap()
    }

    #[test]
    fn sampling_grid_is_open_interval() {
        let curve = sample_nvd(&SchemeConfig::upwind(), 100).unwrap();
        assert_eq!(curve.n_samples(), 100);
        assert!((curve.samples[0].phi_c - 1.0 / 101.0).abs() < 1e-16);
        assert!(curve.samples.windows(2).all(|w| w[1].phi_c > w[0].phi_c));
        assert!(curve.samples.iter().all(|s| s.phi_c > 0.0 && s.phi_c < 1.0));
        for s in &curve.samples {
            assert_eq!(s.phi_f, s.phi_c);
        }
        assert!(sample_nvd(&SchemeConfig::upwind(), 1).is_err());
    }

    #[test]
    fn thinc_curve_passes_through_midpoint() {
        let curve = sample_nvd(&thinc2(), 101).unwrap();
        // k = 51 of 102 is exactly 1/2
        let mid = curve.samples[50];
        assert_eq!(mid.phi_c, 0.5);
        assert!((mid.phi_f - 0.880_797_077_977_882_3).abs() < 1e-15);
    }

    #[test]
    fn upwind_report() {
        let r = cbc_report(&sample_nvd(&SchemeConfig::upwind(), 100).unwrap());
        assert_eq!(r.c_max, 1.0);
        assert!(!r.unconditional_violation);
        assert!(r.violations_at(1.0).is_empty());
        assert!(r.violations_at(0.3).is_empty());
    }

    #[test]
    fn thinc_cmax_matches_closed_form() {
        let exact = analytic_cmax_thinc(2.0).unwrap();
        assert!((exact - 0.245_42).abs() < 1e-5);
        let r = cbc_report(&sample_nvd(&thinc2(), 4000).unwrap());
        assert!((r.c_max - exact).abs() < 0.002);
        assert!(r.c_max >= exact);
        assert!(!r.unconditional_violation);
        assert!(r.binding_phi_c < 0.01);
    }

    #[test]
    fn analytic_cmax_against_dense_minimisation() {
        // brute-force min of p/f(p) with the exponential form of the diagram
        for beta in [0.8, 1.1, 2.0, 3.0] {
            let f = |p: f64| {
                (f64::exp(beta) - f64::exp(beta * (1.0 - 2.0 * p)))
                    / (f64::exp(beta) - f64::exp(-beta))
            };
            let brute = (1..=1_000_000)
                .map(|k| k as f64 * 1e-6)
                .map(|p| p / f(p))
                .fold(f64::INFINITY, f64::min);
            let exact = analytic_cmax_thinc(beta).unwrap();
            assert!(
                (brute - exact).abs() < 1e-5,
                "beta={beta}: {brute} vs {exact}"
            );
        }
        assert!((analytic_cmax_thinc(1.1).unwrap() - 0.4041).abs() < 1e-4);
        assert!((analytic_cmax_thinc(1e-3).unwrap() - 1.0).abs() < 1e-3);
        assert!(analytic_cmax_thinc(0.0).is_err());
    }

    #[test]
    fn clipped_thinc_cmax_is_reciprocal_slope() {
        let cfg = SchemeConfig::thinc_clipped(2.0, 2.5).unwrap();
        let r = cbc_report(&sample_nvd(&cfg, 4000).unwrap());
        assert!((r.c_max - 0.4).abs() < 0.002);
        let cfg = SchemeConfig::thinc_clipped(2.0, 4.0).unwrap();
        let r = cbc_report(&sample_nvd(&cfg, 4000).unwrap());
        assert!((r.c_max - 0.25).abs() < 0.002);
    }

    #[test]
    fn clipped_closed_form_matches_sampling() {
        for (beta, slope) in [(2.0, 2.5), (2.0, 5.0), (1.1, 2.0), (3.0, 1.5)] {
            let exact = analytic_cmax_clipped_thinc(beta, slope).unwrap();
            let cfg = SchemeConfig::thinc_clipped(beta, slope).unwrap();
            let r = cbc_report(&sample_nvd(&cfg, 4000).unwrap());
            assert!((r.c_max - exact).abs() < 2.0 / 4000.0, "{beta} {slope}");
        }
        assert!(analytic_cmax_clipped_thinc(2.0, 0.0).is_err());
    }

    #[test]
    fn thinc_violations_sit_in_lower_half() {
        let curve = sample_nvd(&thinc2(), 100).unwrap();
        let v = classify_violations(&curve, 0.3).unwrap();
        assert!(!v.is_empty());
        for x in &v {
            assert_eq!(x.condition, Condition::SlopeCondition);
            assert!(x.hi < 0.5);
        }
        assert!(classify_violations(&curve, 0.2).unwrap().is_empty());
        assert!(classify_violations(&curve, 0.0).is_err());
        assert!(classify_violations(&curve, 1.5).is_err());
    }

    #[test]
    fn teno_small_cutoff_breaks_unity() {
        let cfg = SchemeConfig::teno(1e-7).unwrap();
        let curve = sample_nvd(&cfg, 100).unwrap();
        let r = cbc_report(&curve);
        assert!(r.unconditional_violation);
        assert!(r.max_phi_f > 1.0);
        let v = classify_violations(&curve, 0.1).unwrap();
        let unity: Vec<_> = v
            .iter()
            .filter(|x| x.condition == Condition::UnityCondition)
            .collect();
        assert!(!unity.is_empty());
        assert!(unity.iter().all(|x| x.lo > 0.5));
    }

    #[test]
    fn runs_are_maximal() {
        let samples: Vec<_> = [0.1, 0.2, 0.3, 0.4, 0.5]
            .iter()
            .zip([2.0, 2.0, 0.1, 2.0, 0.2])
            .map(|(&phi_c, phi_f)| NormalisedPair { phi_c, phi_f })
            .collect();
        let v = violations(&samples, 1.0);
        assert_eq!(
            v,
            vec![
                Violation {
                    lo: 0.1,
                    hi: 0.2,
                    condition: Condition::SlopeCondition
                },
                Violation {
                    lo: 0.4,
                    hi: 0.4,
                    condition: Condition::SlopeCondition
                },
                Violation {
                    lo: 0.1,
                    hi: 0.2,
                    condition: Condition::UnityCondition
                },
                Violation {
                    lo: 0.4,
                    hi: 0.4,
                    condition: Condition::UnityCondition
                },
            ]
        );
    }

    #[test]
    fn oracle_examples() {
        let up = SchemeConfig::upwind();
        for c in [0.1, 0.5, 1.0] {
            for k in 1..100 {
                let o =
                    one_step_oracle(&up, c, k as f64 / 100.0, DEFAULT_PAD, DEFAULT_TOL).unwrap();
                assert!(o.bounded);
            }
        }
        let th = thinc2();
        let all_bounded = (1..100).all(|k| {
            one_step_oracle(&th, 0.2, k as f64 / 100.0, DEFAULT_PAD, DEFAULT_TOL)
                .unwrap()
                .bounded
        });
        assert!(all_bounded);
        let unbounded: Vec<_> = (1..100)
            .map(|k| one_step_oracle(&th, 0.3, k as f64 / 100.0, DEFAULT_PAD, DEFAULT_TOL).unwrap())
            .filter(|o| !o.bounded)
            .collect();
        assert!(!unbounded.is_empty());
        // undershoot in the intermediate cell, whose own φ̃ is the sampled value
        for o in &unbounded {
            assert!(o.max_undershoot > 0.0);
            assert!(o.violating_phi_c.iter().all(|&p| p < 0.5));
        }
    }

    #[test]
    fn oracle_rejects_bad_arguments() {
        let up = SchemeConfig::upwind();
        assert!(one_step_oracle(&up, 0.0, 0.5, 6, 1e-10).is_err());
        assert!(one_step_oracle(&up, 0.5, 1.0, 6, 1e-10).is_err());
        assert!(one_step_oracle(&up, 0.5, 0.5, 3, 1e-10).is_err());
        assert!(one_step_oracle(&up, 0.5, 0.5, 6, -1.0).is_err());
    }
}
