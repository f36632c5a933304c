//! Node fitness samplers and the rescaled weight quantities.
//!
//! Two sources are supported:
//!
//! - **Pareto**: density `α w^(-1-α)` on `[1, ∞)`, drawn by inverse transform.
//! - **Stable**: the positive (β = 1) strictly α-stable law whose scale is
//!   chosen so that its tail coincides with the unit Pareto tail `w^(-α)`.
//!   Draws use the Chambers–Mallows–Stuck transformation.

use std::f64::consts::PI;

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::delta_n;
use crate::special::{check_alpha, gamma};
use crate::{Error, Result, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightSource {
    Pareto,
    Stable,
}

impl std::fmt::Display for WeightSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WeightSource::Pareto => "pareto",
            WeightSource::Stable => "stable",
        })
    }
}

/// i.i.d. node fitnesses together with their tail index and origin.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    alpha: f64,
    source: WeightSource,
}

impl WeightVector {
    /// Wrap existing values, checking the type invariants.
    pub fn new(values: Vec<f64>, alpha: f64, source: WeightSource) -> Result<Self> {
        check_alpha(alpha)?;
        if values.is_empty() {
            return Err(Error::domain("weight vector must be non-empty"));
        }
        if let Some(w) = values.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::domain(format!("weights must be positive and finite, got {w}")));
        }
        if source == WeightSource::Pareto {
            if let Some(w) = values.iter().find(|w| **w < 1.0) {
                return Err(Error::domain(format!("Pareto weights must be >= 1, got {w}")));
            }
        }
        Ok(Self { values, alpha, source })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn source(&self) -> WeightSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Inverse-transform map from a uniform draw to a unit Pareto weight.
pub fn pareto_from_uniform(u: f64, alpha: f64) -> f64 {
    u.powf(-1.0 / alpha)
}

/// Draw `n` i.i.d. Pareto(α) weights on `[1, ∞)`.
pub fn sample_pareto(alpha: f64, n: usize, stream: RngStream) -> Result<WeightVector> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::domain("need n >= 1 weights"));
    }
    let mut rng = stream.rng();
    let values = (0..n).map(|_| pareto_from_uniform(rng.sample(Open01), alpha)).collect();
    WeightVector::new(values, alpha, WeightSource::Pareto)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parametrization {
    /// Continuous-in-α convention; β = 1 shifts the support by γ·tan(πα/2).
    Zero,
    /// Strictly stable convention; support of the β = 1, α < 1 law is `[δ, ∞)`.
    One,
}

/// Parameters of the one-sided α-stable fitness law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_scale: f64,
    pub delta_location: f64,
    pub parametrization: Parametrization,
}

impl StableParams {
    /// Lower end of the support of the β = 1, α < 1 law.
    pub fn support_infimum(&self) -> f64 {
        match self.parametrization {
            Parametrization::One => self.delta_location,
            Parametrization::Zero => self.delta_location - self.gamma_scale * (0.5 * PI * self.alpha).tan(),
        }
    }

    /// The same law expressed in the other parametrization.
    pub fn to_parametrization(&self, target: Parametrization) -> StableParams {
        let shift = self.beta * self.gamma_scale * (0.5 * PI * self.alpha).tan();
        let delta_location = match (self.parametrization, target) {
            (Parametrization::One, Parametrization::Zero) => self.delta_location + shift,
            (Parametrization::Zero, Parametrization::One) => self.delta_location - shift,
            _ => self.delta_location,
        };
        StableParams {
            delta_location,
            parametrization: target,
            ..*self
        }
    }

    /// Coefficient of `w^(-α)` in the asymptotic CCDF,
    /// `γ^α (1 + β) c_α` with `c_α = Γ(α) sin(πα/2) / π`.
    pub fn ccdf_tail_coefficient(&self) -> f64 {
        let c_alpha = gamma(self.alpha).expect("alpha in (0,1)") * (0.5 * PI * self.alpha).sin() / PI;
        self.gamma_scale.powf(self.alpha) * (1.0 + self.beta) * c_alpha
    }

    /// Coefficient of `w^(-1-α)` in the asymptotic density.
    pub fn density_tail_coefficient(&self) -> f64 {
        self.alpha * self.ccdf_tail_coefficient()
    }
}

/// Tail-matched parameters: β = 1, support infimum 0 and
/// `γ = [π / (2 Γ(α) sin(πα/2))]^(1/α)`. Returned in the strictly stable
/// parametrization (location 0).
pub fn stable_scale(alpha: f64) -> Result<StableParams> {
    check_alpha(alpha)?;
    let gamma_scale = (PI / (2.0 * gamma(alpha)? * (0.5 * PI * alpha).sin())).powf(1.0 / alpha);
    Ok(StableParams {
        alpha,
        beta: 1.0,
        gamma_scale,
        delta_location: 0.0,
        parametrization: Parametrization::One,
    })
}

/// One draw of the standard (unit scale, zero location) strictly stable
/// variable with β = 1, α < 1, from a uniform angle and a unit exponential.
fn cms_positive(alpha: f64, angle: f64, exp: f64) -> f64 {
    // B = π/2 for β = 1, so α(V + B) = αV + πα/2
    let half = 0.5 * PI * alpha;
    let shift = alpha * angle + half;
    let scale = (half.cos()).powf(-1.0 / alpha);
    scale * shift.sin() / angle.cos().powf(1.0 / alpha) * ((angle - shift).cos() / exp).powf((1.0 - alpha) / alpha)
}

/// Draw `n` i.i.d. one-sided stable weights with the given parameters.
pub fn sample_one_sided_stable(params: StableParams, n: usize, stream: RngStream) -> Result<WeightVector> {
    check_alpha(params.alpha)?;
    if params.beta != 1.0 || !(params.gamma_scale > 0.0) {
        return Err(Error::domain("one-sided stable sampling needs beta = 1 and gamma > 0"));
    }
    if params.support_infimum().abs() > 1e-12 * params.gamma_scale {
        return Err(Error::domain("stable weights must have support infimum 0"));
    }
    if n == 0 {
        return Err(Error::domain("need n >= 1 weights"));
    }
    let mut rng = stream.rng();
    let values = (0..n)
        .map(|_| {
            // retry the measure-zero draws that underflow to 0
            loop {
                let angle = PI * (rng.sample::<f64, _>(Open01) - 0.5);
                let exp = -rng.sample::<f64, _>(Open01).ln();
                let x = params.gamma_scale * cms_positive(params.alpha, angle, exp);
                if x > 0.0 && x.is_finite() {
                    break x;
                }
            }
        })
        .collect();
    WeightVector::new(values, params.alpha, WeightSource::Stable)
}

/// Draw `n` weights from either source with the tail-matched stable scale.
pub fn sample_weights(source: WeightSource, alpha: f64, n: usize, stream: RngStream) -> Result<WeightVector> {
    match source {
        WeightSource::Pareto => sample_pareto(alpha, n, stream),
        WeightSource::Stable => sample_one_sided_stable(stable_scale(alpha)?, n, stream),
    }
}

/// Rescaled total weight `S_n = δ_n Σ w_j` and rescaled weights
/// `y_k = δ_n w_(k)` sorted from largest to smallest.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledWeights {
    pub s_n: f64,
    pub y: Vec<f64>,
}

pub fn rescaled_quantities(weights: &WeightVector) -> RescaledWeights {
    let delta = delta_n(weights.len(), weights.alpha());
    let mut y: Vec<f64> = weights.values().iter().map(|w| delta * w).collect();
    y.sort_by(|a, b| b.total_cmp(a));
    // sum smallest first
    let s_n = y.iter().rev().sum();
    RescaledWeights { s_n, y }
}
