//! Fractions of degree-0 and degree-1 nodes.
//!
//! Three estimates are provided for a weight realization:
//!
//! - **empirical**: counted on a sampled graph;
//! - **exact conditional**: the expectation over edges given the weights,
//!   `r₀ = n⁻¹ Σᵢ Πⱼ≠ᵢ (1 - pᵢⱼ)` and the analogous one-neighbour sum;
//! - **gamma approximation**: closed forms in the rescaled total weight
//!   `S_n` and the ordered rescaled weights `y_k`, via
//!   `E[e^(-sW)] = α s^α Γ(-α, s)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{delta_n, Graph};
use crate::stats::{summarize, Summary};
use crate::theory::pareto_laplace;
use crate::weights::{RescaledWeights, WeightVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FractionMethod {
    Empirical,
    ExactConditional,
    GammaApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeFractions {
    pub r0: f64,
    pub r1: f64,
    pub r01: f64,
    pub method: FractionMethod,
}

impl DegreeFractions {
    fn new(r0: f64, r1: f64, method: FractionMethod) -> Self {
        Self {
            r0,
            r1,
            r01: r0 + r1,
            method,
        }
    }
}

/// Realized fractions of isolated and degree-one nodes.
pub fn empirical_fractions(graph: &Graph) -> DegreeFractions {
    let n = graph.node_count() as f64;
    let (zeros, ones) = (0..graph.node_count()).fold((0usize, 0usize), |(z, o), v| match graph.degree(v) {
        0 => (z + 1, o),
        1 => (z, o + 1),
        _ => (z, o),
    });
    DegreeFractions::new(zeros as f64 / n, ones as f64 / n, FractionMethod::Empirical)
}

/// `Σ_{j != i} w_j` for every `i`, from prefix and suffix sums.
fn sums_excluding_self(w: &[f64]) -> Vec<f64> {
    let n = w.len();
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + w[i];
    }
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + w[i];
    }
    (0..n).map(|i| prefix[i] + suffix[i + 1]).collect()
}

fn check_pair_count(weights: &WeightVector) -> Result<()> {
    if weights.len() < 2 {
        return Err(Error::domain("degree fractions need n >= 2"));
    }
    Ok(())
}

/// `E[r₀ | w] = n⁻¹ Σᵢ exp(-δ_n wᵢ Σ_{j≠i} wⱼ)`.
pub fn exact_conditional_r0(weights: &WeightVector) -> Result<f64> {
    check_pair_count(weights)?;
    let w = weights.values();
    let delta = delta_n(w.len(), weights.alpha());
    let others = sums_excluding_self(w);
    let total: f64 = w.iter().zip(&others).map(|(wi, rest)| (-delta * wi * rest).exp()).sum();
    Ok(total / w.len() as f64)
}

/// `E[r₁ | w] = n⁻¹ Σᵢ Σ_{k≠i} pᵢₖ exp(-δ_n wᵢ Σ_{j≠i,k} wⱼ)`, in O(n²).
pub fn exact_conditional_r1(weights: &WeightVector) -> Result<f64> {
    check_pair_count(weights)?;
    let w = weights.values();
    let n = w.len();
    let delta = delta_n(n, weights.alpha());
    let others = sums_excluding_self(w);
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let scaled = delta * w[i];
            let mut row = 0.0;
            for (k, &wk) in w.iter().enumerate() {
                if k == i {
                    continue;
                }
                let p = -(-scaled * wk).exp_m1();
                let rest = (others[i] - wk).max(0.0);
                row += p * (-scaled * rest).exp();
            }
            row
        })
        .collect();
    Ok(rows.iter().sum::<f64>() / n as f64)
}

pub fn exact_conditional_fractions(weights: &WeightVector) -> Result<DegreeFractions> {
    Ok(DegreeFractions::new(
        exact_conditional_r0(weights)?,
        exact_conditional_r1(weights)?,
        FractionMethod::ExactConditional,
    ))
}

/// `r₀ ≈ α S_n^α Γ(-α, S_n)`.
pub fn approx_r0(rescaled: &RescaledWeights, alpha: f64) -> Result<f64> {
    if !(rescaled.s_n > 0.0) {
        return Err(Error::domain("approx_r0 needs S_n > 0"));
    }
    pareto_laplace(rescaled.s_n, alpha)
}

/// Gamma-approximate `r₁` and the number of terms skipped because
/// `S_n - y_k <= 0` in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxR1 {
    pub value: f64,
    pub skipped: usize,
}

/// `r₁ ≈ α Σ_k [(S_n - y_k)^α Γ(-α, S_n - y_k) - S_n^α Γ(-α, S_n)]`.
pub fn approx_r1(rescaled: &RescaledWeights, alpha: f64) -> Result<ApproxR1> {
    if rescaled.y.len() < 2 {
        return Err(Error::domain("approx_r1 needs n >= 2"));
    }
    let s = rescaled.s_n;
    let base = pareto_laplace(s, alpha)?;
    let mut value = 0.0;
    let mut skipped = 0;
    // smallest terms first
    for &y in rescaled.y.iter().rev() {
        let rest = s - y;
        if !(rest > 0.0) {
            skipped += 1;
            continue;
        }
        value += pareto_laplace(rest, alpha)? - base;
    }
    if skipped > 0 {
        log::warn!("approx_r1: skipped {skipped} term(s) with S_n - y_k <= 0");
    }
    Ok(ApproxR1 { value, skipped })
}

/// Both gamma approximations; `r01` is clamped to `[0, 1]`.
pub fn approx_fractions(rescaled: &RescaledWeights, alpha: f64) -> Result<DegreeFractions> {
    let r0 = approx_r0(rescaled, alpha)?;
    let r1 = approx_r1(rescaled, alpha)?.value;
    let mut f = DegreeFractions::new(r0, r1, FractionMethod::GammaApprox);
    if !(0.0..=1.0).contains(&f.r01) {
        log::warn!("gamma-approximate r01 = {} clamped to [0, 1]", f.r01);
        f.r01 = f.r01.clamp(0.0, 1.0);
    }
    Ok(f)
}

/// Mean and spread of an observable across weight redraws.
pub fn self_averaging_stats(samples: &[f64]) -> Result<Summary> {
    summarize(samples)
}
