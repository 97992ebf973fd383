//! Comparison values: cusped minima, a manifold bound, arithmetic minima.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{l_chi5, ln_double_factorial_odd, ln_factorial, riemann_zeta};
use crate::volume::{ball_volume_log, orbifold_bound, BallSpec};

/// Smallest volume of a cusped orientable hyperbolic n-orbifold, for n = 2, 3, 4.
pub fn cusped_min(n: usize) -> Result<f64> {
    match n {
        2 => Ok(5.23e-1),
        3 => Ok(7.22e-2),
        4 => Ok(6.85e-3),
        _ => Err(Error::NotTabulated(n)),
    }
}

/// Smallest known volumes used for comparison: `4 pi` for n = 2 and the
/// Weeks manifold for n = 3.
pub fn smallest_known(n: usize) -> Result<f64> {
    match n {
        2 => Ok(4.0 * PI),
        3 => Ok(0.94),
        _ => Err(Error::NotTabulated(n)),
    }
}

/// Radius `0.0025 / 17^floor(n/2)` of a ball embedded in every closed hyperbolic n-manifold.
pub fn manifold_ball_radius(n: usize) -> f64 {
    0.0025 / 17f64.powi((n / 2) as i32)
}

/// `ln` of the volume of the embedded ball in curvature `-1`.
pub fn ln_manifold_bound(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    ball_volume_log(&BallSpec::new(n, -1.0, manifold_ball_radius(n))?)
}

/// Volume lower bound for closed hyperbolic n-manifolds.
pub fn manifold_bound(n: usize) -> Result<f64> {
    Ok(ln_manifold_bound(n)?.exp())
}

/// Dedekind zeta of `Q(sqrt 5)`, as `zeta(s) L(s, chi_5)`.
pub fn dedekind_zeta_q_sqrt5(s: f64) -> Result<f64> {
    Ok(riemann_zeta(s)? * l_chi5(s)?)
}

/// `ln omega_c(n)` for `n = 2r`, `r` even.
pub fn ln_omega_c(n: usize) -> Result<f64> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::Unsupported(format!(
            "minimal arithmetic volume is only available for n divisible by 4, got {n}"
        )));
    }
    let r = (n / 2) as u64;
    let rf = r as f64;
    let ln_2pi = (2.0 * PI).ln();
    let mut acc = 2.0 * LN_2 + (rf * rf + rf / 2.0) * 5f64.ln() + rf * ln_2pi - ln_double_factorial_odd(r);
    for i in 1..=r {
        acc += 2.0 * ln_factorial(2 * i - 1) - 4.0 * i as f64 * ln_2pi + dedekind_zeta_q_sqrt5(2.0 * i as f64)?.ln();
    }
    Ok(acc)
}

/// Minimal volume of a compact arithmetic n-orbifold, `n = 2r` with `r` even.
pub fn omega_c(n: usize) -> Result<f64> {
    Ok(ln_omega_c(n)?.exp())
}

/// Kind of a comparison value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    CuspedMin,
    ManifoldBound,
    ArithmeticMin,
    SmallestKnown,
    ThisBound,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::CuspedMin => "cusped_min",
            BoundKind::ManifoldBound => "manifold_bound",
            BoundKind::ArithmeticMin => "arithmetic_min",
            BoundKind::SmallestKnown => "smallest_known",
            BoundKind::ThisBound => "this_bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub label: String,
    pub n: usize,
    pub value: f64,
    pub log_value: f64,
    pub kind: BoundKind,
}

impl ComparisonRow {
    fn from_log(label: &str, n: usize, log_value: f64, kind: BoundKind) -> Self {
        ComparisonRow { label: label.to_string(), n, value: log_value.exp(), log_value, kind }
    }
}

/// All available comparison values for dimension `n`, ordered by value.
pub fn compare_report(n: usize) -> Result<Vec<ComparisonRow>> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    let mut rows = Vec::new();
    if n >= 3 {
        let b = orbifold_bound(n)?;
        rows.push(ComparisonRow::from_log("orbifold lower bound", n, b.log_bound, BoundKind::ThisBound));
    }
    if let Ok(v) = cusped_min(n) {
        rows.push(ComparisonRow::from_log("smallest cusped orbifold", n, v.ln(), BoundKind::CuspedMin));
    }
    if n % 4 == 0 {
        rows.push(ComparisonRow::from_log("smallest compact arithmetic orbifold", n, ln_omega_c(n)?, BoundKind::ArithmeticMin));
    }
    rows.push(ComparisonRow::from_log("closed manifold lower bound", n, ln_manifold_bound(n)?, BoundKind::ManifoldBound));
    if let Ok(v) = smallest_known(n) {
        rows.push(ComparisonRow::from_log("smallest known", n, v.ln(), BoundKind::SmallestKnown));
    }
    rows.sort_by(|a, b| a.log_value.total_cmp(&b.log_value));
    Ok(rows)
}
