//! Per-window sampling quotas and the overlap/non-overlap region draw.
//!
//! Given the retained node count and the window decomposition, the plan works
//! out how many successful samples each region still needs to reach the target
//! density, and the corresponding region-draw probabilities.

use crate::geometry::RegionDecomposition;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error("plan is saturated: no additional samples needed")]
    PlanSaturated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Overlap,
    NonOverlap,
}

/// Quotas and probabilities for one window.
///
/// `n_eo` and `n_en` are kept real-valued; rounding them first would bias the
/// draw probabilities for small windows.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    /// Target successful-sample density, nodes/m².
    pub theta: f64,
    /// Hard cap on successful samples per window.
    pub tau: usize,
    pub s_o: f64,
    pub s_n: f64,
    /// Retained node count in the overlap region.
    pub n_o: usize,
    /// Expected additional successful samples in the overlap region
    /// (clamped at 0 when the retained density already exceeds theta).
    pub n_eo: f64,
    /// Expected additional successful samples in the non-overlap region.
    pub n_en: f64,
    pub eta_o: f64,
    pub eta_n: f64,
}

impl SamplingPlan {
    /// No additional samples are needed anywhere.
    pub fn is_saturated(&self) -> bool {
        self.n_eo + self.n_en <= 0.0
    }
}

/// Quota computation: `n_eo = max(0, θ·s_o − n_o)`, `n_en = θ·s_n`, and the
/// region probabilities are the quota shares.
pub fn compute_plan(
    theta: f64,
    tau: usize,
    decomposition: &RegionDecomposition,
    n_o: usize,
) -> SamplingPlan {
    assert!(theta > 0.0 && tau > 0);
    let s_o = decomposition.s_o;
    let s_n = decomposition.s_n;
    let n_eo = (theta * s_o - n_o as f64).max(0.0);
    let n_en = theta * s_n;
    let total = n_eo + n_en;
    let (eta_o, eta_n) = if total > 0.0 {
        (n_eo / total, n_en / total)
    } else {
        (0.0, 0.0)
    };
    SamplingPlan { theta, tau, s_o, s_n, n_o, n_eo, n_en, eta_o, eta_n }
}

/// Pick the region for the next sampling attempt: non-overlap with
/// probability `eta_n`, overlap otherwise.
pub fn draw_region<R: Rng + ?Sized>(
    plan: &SamplingPlan,
    rng: &mut R,
) -> Result<Region, SamplerError> {
    if plan.is_saturated() {
        return Err(SamplerError::PlanSaturated);
    }
    let r: f64 = rng.gen_range(0.0..1.0);
    if r > plan.eta_n {
        Ok(Region::Overlap)
    } else {
        Ok(Region::NonOverlap)
    }
}

/// Target successful-sample count for a window: `min(tau, ceil(theta * s_total))`.
/// The detector stops once retained plus new nodes reach it.
pub fn window_budget(theta: f64, tau: usize, s_total: f64) -> usize {
    assert!(s_total >= 0.0);
    ((theta * s_total).ceil() as usize).min(tau)
}
