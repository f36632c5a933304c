//! Annealed clustering function and the closed-form predictions around it.
//!
//! The limiting annealed clustering function at reduced degree `a` is
//!
//! ```text
//! C̄(a) = α²/a² ∬ g(b x) g(b y) g(x y) (x y)^(-1-α) dx dy,   g(x) = 1 - e^(-x),
//! ```
//!
//! with `b = a^(1/α) τ_α`. Writing `x = e^(s)/b`, `y = e^(t)/b` turns it into
//!
//! ```text
//! C̄(a) = κ² ∬ h(s) h(t) g(e^(s + t - c)) ds dt,   h(s) = g(e^s) e^(-α s),
//! ```
//!
//! where `κ = α / Γ(1-α)` and `c = 2 ln b`. Since `∫ h = Γ(1-α)/α = 1/κ`, the
//! complementary kernel `e^(-e^(s+t-c))` gives `C̄ = 1 - C̄₁` exactly. Both
//! integrals decay exponentially in every direction and are evaluated with
//! nested adaptive Gauss–Kronrod quadrature on a truncated square whose
//! discarded mass is bounded in closed form.

use rayon::prelude::*;
use serde::Serialize;

use crate::clustering::LowDegreeConvention;
use crate::quadrature::{integrate, Integral, Tolerance};
use crate::special::{check_alpha, gamma, tau_alpha, upper_incomplete_gamma};
use crate::{Error, Result};

/// Below this reduced degree the complementary route supplies the value.
pub const COMPLEMENTARY_THRESHOLD: f64 = 0.1;

/// A quadrature value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
enum Kernel {
    /// `1 - e^(-z)`
    Closing,
    /// `e^(-z)`
    Open,
}

impl Kernel {
    fn eval(self, log_z: f64) -> f64 {
        let z = log_z.exp();
        match self {
            Kernel::Closing => -(-z).exp_m1(),
            Kernel::Open => (-z).exp(),
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if (1e-10..=1e-3).contains(&tol) {
        Ok(())
    } else {
        Err(Error::domain(format!("tolerance must lie in [1e-10, 1e-3], got {tol}")))
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("reduced degree must be positive, got {a}")))
    }
}

/// `h(s) = (1 - exp(-e^s)) e^(-α s)`, integrating to `Γ(1-α)/α` over ℝ.
fn leaf_weight(s: f64, alpha: f64) -> f64 {
    -(-s.exp()).exp_m1() * (-alpha * s).exp()
}

/// Truncation window `[lo, hi]` for `h` such that the mass of `h` outside it
/// is at most `budget`, using `h(s) <= e^((1-α)s)` and `h(s) <= e^(-α s)`.
fn leaf_window(alpha: f64, budget: f64) -> (f64, f64) {
    let half = 0.5 * budget;
    let lo = (half * (1.0 - alpha)).ln() / (1.0 - alpha);
    let hi = -(half * alpha).ln() / alpha;
    (lo.min(-1.0), hi.max(1.0))
}

/// κ² ∬ h(s) h(t) K(s + t - c) ds dt with its error bound.
fn double_integral(a: f64, alpha: f64, tol: f64, kernel: Kernel) -> Result<Estimate> {
    check_a(a)?;
    check_alpha(alpha)?;
    check_tol(tol)?;
    let gamma_1ma = gamma(1.0 - alpha)?;
    let kappa = alpha / gamma_1ma;
    let c = 2.0 * (a.ln() / alpha + tau_alpha(alpha)?.ln());

    // Error budget in C̄ units: truncation tol/10, inner tol/4, outer tol/2.
    // Dropping mass m of h in either coordinate changes the result by at
    // most κ² · m · (1/κ) per coordinate.
    let trunc_mass = tol / 10.0 / (2.0 * kappa);
    let (lo, hi) = leaf_window(alpha, trunc_mass);
    let inner_tol = Tolerance::absolute(tol / 4.0 / kappa);
    let outer_tol = Tolerance::absolute(tol / 2.0 / (kappa * kappa));

    let mut inner_failed = false;
    let mut worst_inner = 0.0f64;
    let mut inner = |s: f64| -> f64 {
        let hs = leaf_weight(s, alpha);
        if hs == 0.0 {
            return 0.0;
        }
        let res = integrate(|t| leaf_weight(t, alpha) * kernel.eval(s + t - c), lo, hi, inner_tol);
        let r = match res {
            Ok(r) => r,
            Err(Error::Quadrature { value, error, .. }) => {
                inner_failed = true;
                Integral {
                    value,
                    error,
                    evaluations: 0,
                }
            }
            Err(_) => unreachable!("finite limits"),
        };
        worst_inner = worst_inner.max(r.error);
        hs * r.value
    };

    let outer = integrate(&mut inner, lo, hi, outer_tol);
    let (outer_value, outer_error, outer_ok) = match outer {
        Ok(r) => (r.value, r.error, true),
        Err(Error::Quadrature { value, error, .. }) => (value, error, false),
        Err(e) => return Err(e),
    };

    let value = kappa * kappa * outer_value;
    let error = kappa * kappa * outer_error + kappa * worst_inner + 2.0 * kappa * trunc_mass;
    if !outer_ok || inner_failed || error > tol {
        return Err(Error::Quadrature { value, error, tol });
    }
    Ok(Estimate { value, error })
}

/// C̄(a) from the closing kernel `g(xy)` directly.
pub fn annealed_clustering(a: f64, alpha: f64, tol: f64) -> Result<Estimate> {
    double_integral(a, alpha, tol, Kernel::Closing)
}

/// C̄(a) as `1 - C̄₁(a)`, with `C̄₁` carrying the kernel `e^(-xy)`.
pub fn complementary_form(a: f64, alpha: f64, tol: f64) -> Result<Estimate> {
    let open = double_integral(a, alpha, tol, Kernel::Open).map_err(|e| match e {
        Error::Quadrature { value, error, tol } => Error::Quadrature {
            value: 1.0 - value,
            error,
            tol,
        },
        other => other,
    })?;
    Ok(Estimate {
        value: 1.0 - open.value,
        error: open.error,
    })
}

/// C̄(a) by the better-conditioned route: complementary below
/// [`COMPLEMENTARY_THRESHOLD`], direct above.
pub fn annealed_value(a: f64, alpha: f64, tol: f64) -> Result<Estimate> {
    if a < COMPLEMENTARY_THRESHOLD {
        complementary_form(a, alpha, tol)
    } else {
        annealed_clustering(a, alpha, tol)
    }
}

/// Hub asymptote `2 Γ(1-α) ln a / a²`, defined for `a > 1`.
pub fn hub_asymptotic(a: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::domain(format!("hub asymptote needs a > 1, got {a}")));
    }
    Ok(2.0 * gamma(1.0 - alpha)? * a.ln() / (a * a))
}

/// ∫₀^∞ (1 - e^(-x a^(1/α) τ_α)) x^(-1-α) dx by quadrature, paired with its
/// closed form `a / α`.
pub fn single_integral_oracle(a: f64, alpha: f64, tol: f64) -> Result<(Estimate, f64)> {
    check_a(a)?;
    check_alpha(alpha)?;
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let b = a.powf(1.0 / alpha) * tau_alpha(alpha)?;
    // x = e^u; integrand g(b e^u) e^(-α u). Tails: b e^((1-α)u)/(1-α) below, e^(-α u)/α above.
    let budget = tol / 20.0;
    let lo = (budget * (1.0 - alpha) / b).ln() / (1.0 - alpha);
    let hi = -(budget * alpha).ln() / alpha;
    let f = |u: f64| -(-b * u.exp()).exp_m1() * (-alpha * u).exp();
    let r = integrate(f, lo, hi, Tolerance::absolute(tol / 2.0))?;
    Ok((
        Estimate {
            value: r.value,
            error: r.error + 2.0 * budget,
        },
        a / alpha,
    ))
}

/// Laplace transform of the unit Pareto law, `E[e^(-aW)] = α a^α Γ(-α, a)`.
pub fn pareto_laplace(a: f64, alpha: f64) -> Result<f64> {
    check_a(a)?;
    check_alpha(alpha)?;
    Ok(alpha * a.powf(alpha) * upper_incomplete_gamma(-alpha, a)?)
}

/// `∫₁^∞ e^(-aw) α w^(-1-α) dw` evaluated by quadrature.
pub fn pareto_laplace_by_quadrature(a: f64, alpha: f64, tol: f64) -> Result<Estimate> {
    check_a(a)?;
    check_alpha(alpha)?;
    // w = e^u on [0, U]; the tail beyond U is at most e^(-αU - a e^U)
    let mut hi = (50.0 / a).ln().max(1.0);
    while (-alpha * hi - a * hi.exp()).exp() > tol / 10.0 {
        hi += 1.0;
    }
    let f = |u: f64| alpha * (-a * u.exp() - alpha * u).exp();
    let r = integrate(f, 0.0, hi, Tolerance::absolute(tol / 2.0))?;
    Ok(Estimate {
        value: r.value,
        error: r.error + tol / 10.0,
    })
}

/// Expected number of nodes of degree `k`, `n α Γ(1-α) / k²`.
pub fn expected_nk(k: usize, n: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if k < 2 {
        return Err(Error::domain(format!("expected_nk needs k >= 2, got {k}")));
    }
    Ok(n as f64 * alpha * gamma(1.0 - alpha)? / (k as f64 * k as f64))
}

/// Large-n limit of the node-averaged clustering: 1 when low-degree nodes are
/// left out, `1 - r_{0/1}` when they count as zero.
pub fn predicted_average_clustering(r01: f64, convention: LowDegreeConvention) -> Result<f64> {
    if !(0.0..=1.0).contains(&r01) {
        return Err(Error::domain(format!("r01 must lie in [0, 1], got {r01}")));
    }
    Ok(match convention {
        LowDegreeConvention::ExcludeLowDegree => 1.0,
        LowDegreeConvention::ZeroLowDegree => 1.0 - r01,
    })
}

/// One evaluated point of the annealed clustering function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnealedPoint {
    pub a: f64,
    pub c_bar: f64,
    /// Hub asymptote; absent for `a <= 1`.
    pub c_hub: Option<f64>,
    pub quad_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnealedCurve {
    pub alpha: f64,
    pub points: Vec<AnnealedPoint>,
}

/// Evaluate C̄ and its hub asymptote over a strictly increasing grid.
pub fn annealed_curve(alpha: f64, grid: &[f64], tol: f64) -> Result<AnnealedCurve> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("annealed curve grid must be strictly increasing"));
    }
    let points = grid
        .par_iter()
        .map(|&a| {
            let est = annealed_value(a, alpha, tol)?;
            Ok(AnnealedPoint {
                a,
                c_bar: est.value,
                c_hub: hub_asymptotic(a, alpha).ok(),
                quad_error: est.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnnealedCurve { alpha, points })
}

/// `count` log-spaced reduced degrees from `max(2, k_min)/√n` to `a_max`.
pub fn reduced_degree_grid(n: usize, k_min: usize, a_max: f64, count: usize) -> Result<Vec<f64>> {
    let a_min = k_min.max(2) as f64 / (n as f64).sqrt();
    if count < 2 || !(a_max > a_min) {
        return Err(Error::domain(format!(
            "empty reduced-degree range [{a_min}, {a_max}] or too few points"
        )));
    }
    let (l0, l1) = (a_min.ln(), a_max.ln());
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                a_max
            } else {
                (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}
