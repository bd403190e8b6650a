//! Face reconstruction kernels.
//!
//! Every kernel maps a left-biased five-cell window
//! `(φ̄_{i-2}, φ̄_{i-1}, φ̄_i, φ̄_{i+1}, φ̄_{i+2})` to the value at face `i+1/2`
//! for a positive advection velocity. Negative velocities are handled by the
//! caller mirroring the window.

use crate::error::{Error, Result};

/// Ideal (linear) weights of the fifth-order WENO/TENO combination.
pub const IDEAL_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Default division guard for WENO/TENO weights.
pub const DEFAULT_EPSILON: f64 = 1e-40;

/// Default slope of the clipping line of the clipped THINC scheme.
pub const DEFAULT_CLIP_SLOPE: f64 = 2.5;

/// Relative tolerance on the normalisation denominator used by THINC.
const THINC_DEGENERATE_RTOL: f64 = 1e-14;

/// Five consecutive cell averages feeding one face reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilWindow(pub [f64; 5]);

impl StencilWindow {
    pub fn new(v: [f64; 5]) -> Self {
        StencilWindow(v)
    }

    /// Checked constructor rejecting non-finite entries.
    pub fn try_new(v: [f64; 5]) -> Result<Self> {
        match v.iter().find(|x| !x.is_finite()) {
            Some(&bad) => Err(Error::domain("window entry", bad, "a finite value")),
            None => Ok(StencilWindow(v)),
        }
    }

    /// Reversed window, i.e. the left-biased view seen by a negative velocity.
    pub fn mirrored(self) -> Self {
        let [a, b, c, d, e] = self.0;
        StencilWindow([e, d, c, b, a])
    }

    /// Applies `x -> scale * x + shift` to every entry.
    pub fn affine(self, scale: f64, shift: f64) -> Self {
        StencilWindow(self.0.map(|x| scale * x + shift))
    }
}

/// Nonlinear weights `(ω_0, ω_1, ω_2)` of the three candidate stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightTriple(pub [f64; 3]);

impl WeightTriple {
    fn normalised(alpha: [f64; 3]) -> Self {
        let sum: f64 = alpha.iter().sum();
        WeightTriple(alpha.map(|a| a / sum))
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// A point `(φ̃_i, φ̃_{i+1/2})` of a normalised variable diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalisedPair {
    pub phi_c: f64,
    pub phi_f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Upwind1,
    ThincOriginal,
    ThincClipped,
    WenoJs5,
    WenoZ5,
    Teno5,
}

impl SchemeKind {
    pub fn is_thinc(self) -> bool {
        matches!(self, SchemeKind::ThincOriginal | SchemeKind::ThincClipped)
    }

    pub fn is_weighted(self) -> bool {
        matches!(
            self,
            SchemeKind::WenoJs5 | SchemeKind::WenoZ5 | SchemeKind::Teno5
        )
    }
}

/// Scheme selector together with every tunable parameter.
///
/// Parameters irrelevant to `kind` are carried but ignored. Build through the
/// named constructors, which validate; the `with_*` setters re-validate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    /// THINC steepness β.
    pub beta: f64,
    /// Division guard ε in the weight formulas.
    pub epsilon: f64,
    /// TENO constant C.
    pub c_teno: f64,
    /// TENO exponent q.
    pub q_teno: u32,
    /// TENO cutoff C_T; required for `Teno5`.
    pub ct: Option<f64>,
    /// Ideal weights d_k.
    pub d: [f64; 3],
    /// Slope of the clipping line for `ThincClipped`.
    pub clip_slope: f64,
    /// Exponent applied to τ_5/(IS_k+ε) in the WENO-Z weights.
    pub z_power: u32,
}

impl SchemeConfig {
    fn base(kind: SchemeKind) -> Self {
        SchemeConfig {
            kind,
            beta: 2.0,
            epsilon: DEFAULT_EPSILON,
            c_teno: 1.0,
            q_teno: 6,
            ct: None,
            d: IDEAL_WEIGHTS,
            clip_slope: DEFAULT_CLIP_SLOPE,
            z_power: 1,
        }
    }

    pub fn upwind() -> Self {
        Self::base(SchemeKind::Upwind1)
    }

    pub fn thinc(beta: f64) -> Result<Self> {
        SchemeConfig {
            beta,
            ..Self::base(SchemeKind::ThincOriginal)
        }
        .validated()
    }

    pub fn thinc_clipped(beta: f64, clip_slope: f64) -> Result<Self> {
        SchemeConfig {
            beta,
            clip_slope,
            ..Self::base(SchemeKind::ThincClipped)
        }
        .validated()
    }

    pub fn weno_js() -> Self {
        Self::base(SchemeKind::WenoJs5)
    }

    pub fn weno_z() -> Self {
        Self::base(SchemeKind::WenoZ5)
    }

    pub fn teno(ct: f64) -> Result<Self> {
        SchemeConfig {
            ct: Some(ct),
            ..Self::base(SchemeKind::Teno5)
        }
        .validated()
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        SchemeConfig { epsilon, ..self }.validated()
    }

    pub fn with_teno_params(self, c_teno: f64, q_teno: u32) -> Result<Self> {
        SchemeConfig {
            c_teno,
            q_teno,
            ..self
        }
        .validated()
    }

    pub fn with_ideal_weights(self, d: [f64; 3]) -> Result<Self> {
        SchemeConfig { d, ..self }.validated()
    }

    pub fn with_z_power(self, z_power: u32) -> Result<Self> {
        SchemeConfig { z_power, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::domain("beta", self.beta, "a finite value > 0"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::domain("epsilon", self.epsilon, "a finite value > 0"));
        }
        if !(self.clip_slope > 0.0 && self.clip_slope.is_finite()) {
            return Err(Error::domain(
                "clip_slope",
                self.clip_slope,
                "a finite value > 0",
            ));
        }
        if !self.c_teno.is_finite() || self.c_teno < 0.0 {
            return Err(Error::domain("c_teno", self.c_teno, "a finite value >= 0"));
        }
        if self.q_teno == 0 {
            return Err(Error::Config("q_teno must be a positive integer".into()));
        }
        if self.z_power == 0 {
            return Err(Error::Config("z_power must be a positive integer".into()));
        }
        if self.d.iter().any(|&d| !(d >= 0.0)) {
            return Err(Error::Config(format!(
                "ideal weights {:?} must be nonnegative",
                self.d
            )));
        }
        let dsum: f64 = self.d.iter().sum();
        if (dsum - 1.0).abs() > 1e-15 {
            return Err(Error::Config(format!(
                "ideal weights {:?} sum to {dsum}, expected 1",
                self.d
            )));
        }
        match (self.kind, self.ct) {
            (SchemeKind::Teno5, None) => {
                return Err(Error::Config("TENO5 requires a cutoff C_T".into()))
            }
            (_, Some(ct)) if !(ct > 0.0 && ct < 1.0) => {
                return Err(Error::domain("ct", ct, "a value in (0, 1)"))
            }
            // The largest χ_k is at least 1/3, so a cutoff below 1/3 always
            // keeps one stencil alive.
            (SchemeKind::Teno5, Some(ct)) if ct >= 1.0 / 3.0 => {
                return Err(Error::domain("ct", ct, "a value below 1/3"))
            }
            _ => {}
        }
        Ok(())
    }

    /// Short human-readable label, e.g. `TENO5(C_T=1e-5)`.
    pub fn label(&self) -> String {
        match self.kind {
            SchemeKind::Upwind1 => "Upwind1".to_string(),
            SchemeKind::ThincOriginal => format!("THINC(beta={})", self.beta),
            SchemeKind::ThincClipped => {
                format!(
                    "THINC-clipped(beta={}, slope={})",
                    self.beta, self.clip_slope
                )
            }
            SchemeKind::WenoJs5 => "WENO-JS5".to_string(),
            SchemeKind::WenoZ5 => "WENO-Z5".to_string(),
            SchemeKind::Teno5 => format!("TENO5(C_T={:e})", self.ct.unwrap_or(f64::NAN)),
        }
    }
}

/// Normalised cell value `(v[2]-v[1])/(v[3]-v[1])`, or `None` when
/// `|v[3]-v[1]| <= tol`.
pub fn normalise_window(w: &StencilWindow, tol: f64) -> Option<f64> {
    let den = w.0[3] - w.0[1];
    if den.abs() > tol {
        Some((w.0[2] - w.0[1]) / den)
    } else {
        None
    }
}

fn check_thinc_args(beta: f64, phi_c: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "a finite value > 0"));
    }
    if !(0.0..=1.0).contains(&phi_c) {
        return Err(Error::domain("phi_c", phi_c, "a value in [0, 1]"));
    }
    Ok(())
}

#[inline]
fn thinc_unchecked(beta: f64, phi_c: f64) -> f64 {
    let s = beta.sinh();
    (s + beta.cosh() - (beta * (-2.0 * phi_c + 1.0)).exp()) / (2.0 * s)
}

/// Normalised face value of the THINC scheme across a discontinuity.
pub fn thinc_nvd(beta: f64, phi_c: f64) -> Result<f64> {
    check_thinc_args(beta, phi_c)?;
    Ok(thinc_unchecked(beta, phi_c))
}

/// THINC face value capped by the line `clip_slope * φ̃_i`.
pub fn clipped_thinc_nvd(beta: f64, clip_slope: f64, phi_c: f64) -> Result<f64> {
    check_thinc_args(beta, phi_c)?;
    if !(clip_slope > 0.0 && clip_slope.is_finite()) {
        return Err(Error::domain(
            "clip_slope",
            clip_slope,
            "a finite value > 0",
        ));
    }
    Ok(thinc_unchecked(beta, phi_c).min(clip_slope * phi_c))
}

/// Fifth-order smoothness indicators of the three 3-cell substencils.
pub fn smoothness_indicators(w: &StencilWindow) -> [f64; 3] {
    let [a, b, c, d, e] = w.0;
    const K: f64 = 13.0 / 12.0;
    let sq = |x: f64| x * x;
    [
        K * sq(a - 2.0 * b + c) + 0.25 * sq(a - 4.0 * b + 3.0 * c),
        K * sq(b - 2.0 * c + d) + 0.25 * sq(b - d),
        K * sq(c - 2.0 * d + e) + 0.25 * sq(3.0 * c - 4.0 * d + e),
    ]
}

/// Third-order face values from the three substencils.
pub fn candidate_reconstructions(w: &StencilWindow) -> [f64; 3] {
    let [a, b, c, d, e] = w.0;
    [
        a / 3.0 - 7.0 / 6.0 * b + 11.0 / 6.0 * c,
        -b / 6.0 + 5.0 / 6.0 * c + d / 3.0,
        c / 3.0 + 5.0 / 6.0 * d - e / 6.0,
    ]
}

pub fn weights_js(is: [f64; 3], cfg: &SchemeConfig) -> WeightTriple {
    let g = is.map(|x| x + cfg.epsilon);
    // α_k = d_k/g_k², scaled by the smallest g² so nothing under- or overflows
    let gmin = g[0].min(g[1]).min(g[2]);
    let alpha = [0, 1, 2].map(|k| {
        let r = gmin / g[k];
        cfg.d[k] * r * r
    });
    WeightTriple::normalised(alpha)
}

fn tau5(is: &[f64; 3]) -> f64 {
    (is[0] - is[2]).abs()
}

pub fn weights_z(is: [f64; 3], cfg: &SchemeConfig) -> WeightTriple {
    let tau = tau5(&is);
    let p = cfg.z_power as i32;
    let alpha = [0, 1, 2].map(|k| cfg.d[k] * (1.0 + (tau / (is[k] + cfg.epsilon)).powi(p)));
    WeightTriple::normalised(alpha)
}

/// TENO weights: stencils whose scale-separated smoothness share χ_k falls
/// below C_T are cut; the survivors keep their ideal weights, renormalised.
///
/// A config without a cutoff is treated as having no stencil cut.
pub fn weights_teno(is: [f64; 3], cfg: &SchemeConfig) -> WeightTriple {
    let tau = tau5(&is);
    let q = cfg.q_teno as i32;
    let r = [0, 1, 2].map(|k| cfg.c_teno + tau / (is[k] + cfg.epsilon));
    // χ_k = r_k^q / Σ r_j^q, evaluated relative to the largest r
    let rmax = r[0].max(r[1]).max(r[2]);
    let gamma = r.map(|x| (x / rmax).powi(q));
    let gsum: f64 = gamma.iter().sum();
    let ct = cfg.ct.unwrap_or(0.0);
    let alpha = [0, 1, 2].map(|k| if gamma[k] / gsum < ct { 0.0 } else { cfg.d[k] });
    WeightTriple::normalised(alpha)
}

/// Nonlinear weights for a weighted scheme, `None` for the others.
pub fn weights_for(cfg: &SchemeConfig, is: [f64; 3]) -> Option<WeightTriple> {
    match cfg.kind {
        SchemeKind::WenoJs5 => Some(weights_js(is, cfg)),
        SchemeKind::WenoZ5 => Some(weights_z(is, cfg)),
        SchemeKind::Teno5 => Some(weights_teno(is, cfg)),
        _ => None,
    }
}

/// Face value `φ_{i+1/2}` for a positive velocity.
pub fn reconstruct_face(cfg: &SchemeConfig, w: &StencilWindow) -> f64 {
    match cfg.kind {
        SchemeKind::Upwind1 => w.0[2],
        SchemeKind::ThincOriginal | SchemeKind::ThincClipped => reconstruct_thinc(cfg, w),
        SchemeKind::WenoJs5 | SchemeKind::WenoZ5 | SchemeKind::Teno5 => {
            let is = smoothness_indicators(w);
            let cand = candidate_reconstructions(w);
            // weights_for is total over the weighted kinds
            let WeightTriple(om) = weights_for(cfg, is).expect("weighted scheme");
            om[0] * cand[0] + om[1] * cand[1] + om[2] * cand[2]
        }
    }
}

fn reconstruct_thinc(cfg: &SchemeConfig, w: &StencilWindow) -> f64 {
    let [_, left, centre, right, _] = w.0;
    let tol = THINC_DEGENERATE_RTOL * left.abs().max(right.abs());
    let phi_c = match normalise_window(w, tol) {
        Some(p) if p > 0.0 && p < 1.0 => p,
        _ => return centre,
    };
    let mut phi_f = thinc_unchecked(cfg.beta, phi_c);
    if cfg.kind == SchemeKind::ThincClipped {
        phi_f = phi_f.min(cfg.clip_slope * phi_c);
    }
    left + (right - left) * phi_f
}
