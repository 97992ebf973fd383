//! Constant-curvature ball volumes, `Vol[SO(n)]` and the orbifold volume bound.
//!
//! Everything is carried as natural logs. Linear values are produced only for
//! reports and may underflow to zero for large `n` (around `n = 20`).

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{ln_1m_exp, ln_factorial, ln_gamma};
use crate::wang::published_rg;

/// Below this value of `cos^2 u` the sine-power series is replaced by its complement.
const SIN_SERIES_MIN_COS2: f64 = 1e-4;
/// Term cap for the positive power series.
const SERIES_MAX_TERMS: usize = 2_000_000;

/// How the bracket `[x]` in the exponents is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketConvention {
    /// `[x] = floor(x)`.
    Floor,
    /// `[x] = floor(x + 1/2)`.
    RoundHalfUp,
    /// `[x] = x`, no rounding.
    Exact,
}

/// The bracket convention used unless another is requested.
pub const DEFAULT_CONVENTION: BracketConvention = BracketConvention::Floor;

impl BracketConvention {
    /// Evaluates `[num / den]` for `den > 0`.
    pub fn apply(self, num: i64, den: i64) -> f64 {
        match self {
            BracketConvention::Floor => num.div_euclid(den) as f64,
            BracketConvention::RoundHalfUp => (2 * num + den).div_euclid(2 * den) as f64,
            BracketConvention::Exact => num as f64 / den as f64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BracketConvention::Floor => "floor",
            BracketConvention::RoundHalfUp => "round_half_up",
            BracketConvention::Exact => "exact",
        }
    }
}

impl fmt::Display for BracketConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BracketConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "floor" => Ok(BracketConvention::Floor),
            "round_half_up" | "round-half-up" | "round" => Ok(BracketConvention::RoundHalfUp),
            "exact" => Ok(BracketConvention::Exact),
            _ => Err(Error::Domain(format!("unknown bracket convention '{s}'"))),
        }
    }
}

/// Which embedded-ball radius `r0` the bound uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusChoice {
    /// Half the published `R_G`, with its own value at `n = 3`.
    Published,
    /// `0.114 sqrt(2(n-1))` for every `n`.
    Uniform,
}

impl RadiusChoice {
    /// `r0` in units of the canonical metric.
    pub fn radius(self, n: usize) -> Result<f64> {
        check_bound_dim(n)?;
        match self {
            RadiusChoice::Published => Ok(published_rg(n)? / 2.0),
            RadiusChoice::Uniform => Ok(0.114 * (2.0 * (n as f64 - 1.0)).sqrt()),
        }
    }
}

/// A geodesic ball in the simply connected space of constant curvature `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub d: usize,
    pub k: f64,
    pub r: f64,
}

impl BallSpec {
    pub fn new(d: usize, k: f64, r: f64) -> Result<Self> {
        if d < 1 {
            return Err(Error::Domain("ball dimension must be at least 1".into()));
        }
        if !k.is_finite() {
            return Err(Error::Domain(format!("curvature must be finite, got {k}")));
        }
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
        }
        Ok(BallSpec { d, k, r })
    }
}

fn check_u(u: f64) -> Result<()> {
    if !(0.0..=PI).contains(&u) {
        return Err(Error::Domain(format!("sine-power integral needs u in [0, pi], got {u}")));
    }
    Ok(())
}

/// `int_0^u sin^m`, by the reduction recurrence.
pub fn sin_power_integral(m: u32, u: f64) -> Result<f64> {
    check_u(u)?;
    let (s, c) = u.sin_cos();
    let mut even = u;
    let mut odd = 1.0 - c;
    if m == 0 {
        return Ok(even);
    }
    // s^{j-1} for the current j
    let mut sp = s;
    for j in 2..=m {
        let jf = j as f64;
        let next_prev = if j % 2 == 0 { even } else { odd };
        let v = -c * sp / jf + (jf - 1.0) / jf * next_prev;
        if j % 2 == 0 {
            even = v;
        } else {
            odd = v;
        }
        sp *= s;
    }
    Ok(if m % 2 == 0 { even } else { odd })
}

/// `ln int_0^pi sin^m = ln( sqrt(pi) Gamma((m+1)/2) / Gamma(m/2 + 1) )`.
pub fn ln_sin_power_full(m: u32) -> f64 {
    let mf = m as f64;
    0.5 * PI.ln() + ln_gamma((mf + 1.0) / 2.0) - ln_gamma(mf / 2.0 + 1.0)
}

/// Compensated sum of positive terms produced by `term(k)` until they stop mattering.
fn positive_series<F: FnMut(usize) -> (f64, bool)>(mut term: F) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 0..SERIES_MAX_TERMS {
        let (t, decreasing) = term(k);
        let y = t - comp;
        let next = sum + y;
        comp = (next - sum) - y;
        sum = next;
        if decreasing && t <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `ln int_0^u sin^m` for `u` in `(0, pi/2]`.
fn ln_sin_lower(m: u32, u: f64) -> f64 {
    let mf = m as f64;
    let (x, c) = u.sin_cos();
    if c * c >= SIN_SERIES_MIN_COS2 {
        // sin^{m+1} u * sum_k (1/2)_k / k! * x^{2k} / (m + 2k + 1)
        let x2 = x * x;
        let mut coef = 1.0;
        let s = positive_series(|k| {
            let kf = k as f64;
            let t = coef / (mf + 2.0 * kf + 1.0);
            coef *= (kf + 0.5) / (kf + 1.0) * x2;
            (t, true)
        });
        (mf + 1.0) * x.ln() + s.ln()
    } else {
        let ln_half = ln_sin_power_full(m) - LN_2;
        let v = FRAC_PI_2 - u;
        if v <= 0.0 {
            return ln_half;
        }
        let j = cos_power_integral(m, v);
        ln_half + ln_1m_exp(j.ln() - ln_half)
    }
}

/// `int_0^v cos^m` by the reduction recurrence; all terms are positive for `v` in `[0, pi/2]`.
fn cos_power_integral(m: u32, v: f64) -> f64 {
    let (s, c) = v.sin_cos();
    let mut even = v;
    let mut odd = s;
    let mut cp = c;
    for j in 2..=m {
        let jf = j as f64;
        let prev = if j % 2 == 0 { even } else { odd };
        let val = s * cp / jf + (jf - 1.0) / jf * prev;
        if j % 2 == 0 {
            even = val;
        } else {
            odd = val;
        }
        cp *= c;
    }
    if m % 2 == 0 {
        even
    } else {
        odd
    }
}

/// `ln int_0^u sin^m`, accurate in relative terms even when the integral is tiny.
pub fn ln_sin_power_integral(m: u32, u: f64) -> Result<f64> {
    check_u(u)?;
    if u == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if m == 0 {
        return Ok(u.ln());
    }
    if u <= FRAC_PI_2 {
        return Ok(ln_sin_lower(m, u));
    }
    let full = ln_sin_power_full(m);
    let rest = PI - u;
    if rest <= 0.0 {
        return Ok(full);
    }
    let lower = ln_sin_lower(m, rest);
    Ok(full + ln_1m_exp(lower - full))
}

/// `ln int_0^u sinh^m` for `u >= 0`.
pub fn ln_sinh_power_integral(m: u32, u: f64) -> Result<f64> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!("sinh-power integral needs finite u >= 0, got {u}")));
    }
    if u == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if m == 0 {
        return Ok(u.ln());
    }
    let mf = m as f64;
    if u.sinh() <= 1.0 {
        // t = tanh u: int_0^T t^m (1 - t^2)^{-m/2 - 1} dt, a positive series
        let t = u.tanh();
        let t2 = t * t;
        let a = mf / 2.0 + 1.0;
        let mut coef = 1.0;
        let s = positive_series(|k| {
            let kf = k as f64;
            let term = coef / (mf + 2.0 * kf + 1.0);
            let ratio = (a + kf) / (kf + 1.0) * t2;
            coef *= ratio;
            (term, ratio < 1.0)
        });
        return Ok((mf + 1.0) * t.ln() + s.ln());
    }
    let (s, c) = (u.sinh(), u.cosh());
    let mut even = u;
    let mut odd = c - 1.0;
    let mut sp = s;
    for j in 2..=m {
        let jf = j as f64;
        let prev = if j % 2 == 0 { even } else { odd };
        let val = c * sp / jf - (jf - 1.0) / jf * prev;
        if j % 2 == 0 {
            even = val;
        } else {
            odd = val;
        }
        sp *= s;
    }
    let v = if m % 2 == 0 { even } else { odd };
    if !v.is_finite() {
        return Err(Error::Overflow(format!("sinh^{m} integral to {u}")));
    }
    Ok(v.ln())
}

/// `int_0^u sinh^m`.
pub fn sinh_power_integral(m: u32, u: f64) -> Result<f64> {
    Ok(ln_sinh_power_integral(m, u)?.exp())
}

/// Log of the volume of a ball of radius `r` in the `d`-dimensional model space of curvature `k`.
///
/// For `k > 0` the radius is capped at the antipodal distance `pi / sqrt(k)`.
/// `r = 0` yields negative infinity.
pub fn ball_volume_log(spec: &BallSpec) -> Result<f64> {
    let BallSpec { d, k, r } = *spec;
    let spec = BallSpec::new(d, k, r)?;
    if spec.r == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let df = d as f64;
    let m = (d - 1) as u32;
    if k == 0.0 {
        return Ok(df / 2.0 * PI.ln() + df * r.ln() - ln_gamma(df / 2.0 + 1.0));
    }
    let kappa = k.abs();
    let prefactor = LN_2 + df / 2.0 * (PI.ln() - kappa.ln()) - ln_gamma(df / 2.0);
    let integral = if k > 0.0 {
        ln_sin_power_integral(m, (r * kappa.sqrt()).min(PI))?
    } else {
        ln_sinh_power_integral(m, r * kappa.sqrt())?
    };
    Ok(prefactor + integral)
}

/// `ln((n-2)! (n-4)! ...)`, descending by two while the argument is at least 1.
pub fn ln_factorial_chain(n: usize) -> f64 {
    (1..n.saturating_sub(1)).rev().step_by(2).map(|j| ln_factorial(j as u64)).sum()
}

fn check_bound_dim(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidDimension { n, min: 3 });
    }
    Ok(())
}

/// `ln Vol[SO(n)] = ln( 2^[(n^2+2n-2)/4] pi^[n^2/4] / ((n-2)! (n-4)! ...) )`.
pub fn vol_so_log(n: usize, convention: BracketConvention) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    let ni = n as i64;
    let e2 = convention.apply(ni * ni + 2 * ni - 2, 4);
    let epi = convention.apply(ni * ni, 4);
    Ok(e2 * LN_2 + epi * PI.ln() - ln_factorial_chain(n))
}

/// Options for [`orbifold_bound_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOptions {
    pub convention: BracketConvention,
    pub radius: RadiusChoice,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { convention: DEFAULT_CONVENTION, radius: RadiusChoice::Published }
    }
}

/// The orbifold volume bound and its ingredients for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub d0: usize,
    pub k0: f64,
    pub r0: f64,
    #[serde(rename = "logV")]
    pub log_v: f64,
    #[serde(rename = "logVolSO")]
    pub log_vol_so: f64,
    pub bound: f64,
    pub log_bound: f64,
    pub closed_form_bound: f64,
    pub log_closed_form_bound: f64,
    pub consistency_gap: f64,
    pub convention: BracketConvention,
    pub radius: RadiusChoice,
}

/// `d0 = n(n+1)/2`, the dimension of SO_o(n,1).
pub fn bound_dimension(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `k0 = (n^2 + 43n)/8`, the curvature bound in the canonical metric.
pub fn bound_curvature(n: usize) -> f64 {
    let nf = n as f64;
    (nf * nf + 43.0 * nf) / 8.0
}

/// The bound with the default convention and radius.
pub fn orbifold_bound(n: usize) -> Result<BoundReport> {
    orbifold_bound_with(n, BoundOptions::default())
}

/// `Vol[Q] >= V(d0, k0, r0) / Vol[SO(n)]`, with the closed form alongside.
pub fn orbifold_bound_with(n: usize, opts: BoundOptions) -> Result<BoundReport> {
    check_bound_dim(n)?;
    let d0 = bound_dimension(n);
    let k0 = bound_curvature(n);
    let r0 = opts.radius.radius(n)?;
    let log_v = ball_volume_log(&BallSpec::new(d0, k0, r0)?)?;
    let log_vol_so = vol_so_log(n, opts.convention)?;
    let log_bound = log_v - log_vol_so;
    let log_closed = ln_closed_form(n, opts.convention, r0 * k0.sqrt())?;
    Ok(BoundReport {
        n,
        d0,
        k0,
        r0,
        log_v,
        log_vol_so,
        bound: log_bound.exp(),
        log_bound,
        closed_form_bound: log_closed.exp(),
        log_closed_form_bound: log_closed,
        consistency_gap: (log_bound - log_closed).exp_m1().abs(),
        convention: opts.convention,
        radius: opts.radius,
    })
}

/// Upper limit `0.057 sqrt(n^3 + 42n^2 - 43n)` of the closed-form integral.
pub fn closed_form_limit(n: usize) -> f64 {
    let nf = n as f64;
    0.057 * (nf * nf * nf + 42.0 * nf * nf - 43.0 * nf).sqrt()
}

fn ln_closed_form(n: usize, convention: BracketConvention, limit: f64) -> Result<f64> {
    let ni = n as i64;
    let nf = n as f64;
    let e2 = convention.apply(2 * ni * ni + ni + 6, 4);
    let epi = convention.apply(ni, 4);
    let ek = convention.apply(ni * ni + ni, 4);
    let m = ((n * n + n - 2) / 2) as u32;
    Ok(e2 * LN_2 + epi * PI.ln() - ek * (nf * nf + 43.0 * nf).ln() + ln_factorial_chain(n)
        - ln_gamma((nf * nf + nf) / 4.0)
        + ln_sin_power_integral(m, limit.min(PI))?)
}

/// Log of the closed-form bound.
///
/// For `n >= 4` the integral runs to [`closed_form_limit`]; for `n = 3` to
/// `r0 sqrt(k0)` with the published `n = 3` radius.
pub fn ln_orbifold_bound_closed_form(n: usize, convention: BracketConvention) -> Result<f64> {
    check_bound_dim(n)?;
    let limit = if n == 3 {
        RadiusChoice::Published.radius(3)? * bound_curvature(3).sqrt()
    } else {
        closed_form_limit(n)
    };
    ln_closed_form(n, convention, limit)
}

/// The closed-form bound in linear space (may underflow for large `n`).
pub fn orbifold_bound_closed_form(n: usize, convention: BracketConvention) -> Result<f64> {
    Ok(ln_orbifold_bound_closed_form(n, convention)?.exp())
}

/// Bounds on the order of a symmetry group of a closed hyperbolic n-manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryBound {
    pub n: usize,
    pub volume: f64,
    pub bound: f64,
    pub log_quotient: f64,
    /// `floor(vol / bound)`: the isometry group order bound.
    #[serde(with = "decimal")]
    pub isometry_order: BigUint,
    /// `floor(2 vol / bound)`: the bound for finite subgroups of `Out(pi_1)`.
    #[serde(with = "decimal")]
    pub out_order: BigUint,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom("invalid integer"))
    }
}

/// `floor(e^x)` as an arbitrary-size integer, exact to double precision.
fn floor_exp(x: f64) -> Result<BigUint> {
    if !x.is_finite() {
        return Err(Error::Overflow(format!("exp({x})")));
    }
    if x < 0.0 {
        return Ok(BigUint::zero());
    }
    if x < 700.0 {
        let v = x.exp().floor();
        return v
            .to_u128()
            .map(BigUint::from)
            .or_else(|| num_bigint::BigUint::parse_bytes(format!("{v:.0}").as_bytes(), 10))
            .ok_or_else(|| Error::Overflow(format!("exp({x})")));
    }
    let shift = (x / LN_2).floor() as u64 - 52;
    let mantissa = (x - shift as f64 * LN_2).exp().floor();
    let m = mantissa.to_u64().ok_or_else(|| Error::Overflow(format!("exp({x})")))?;
    Ok(BigUint::from(m) << shift)
}

fn floor_ratio(vol: f64, scale: f64, report: &BoundReport) -> Result<(f64, BigUint)> {
    let linear = scale * vol / report.bound;
    if report.bound > 0.0 && linear.is_finite() && linear < 1e30 {
        let q = linear.floor();
        let big = BigUint::from(q.to_u128().ok_or_else(|| Error::Overflow(format!("{q}")))?);
        return Ok((linear.ln(), big));
    }
    let lq = scale.ln() + vol.ln() - report.log_bound;
    Ok((lq, floor_exp(lq)?))
}

/// `|H| <= Vol[M] / bound(n)` and the doubled variant for `Out(pi_1(M))`.
pub fn symmetry_order_bound(n: usize, vol: f64) -> Result<SymmetryBound> {
    if !(vol > 0.0) || !vol.is_finite() {
        return Err(Error::Domain(format!("volume must be positive and finite, got {vol}")));
    }
    let report = orbifold_bound(n)?;
    let (log_quotient, isometry_order) = floor_ratio(vol, 1.0, &report)?;
    let (_, out_order) = floor_ratio(vol, 2.0, &report)?;
    Ok(SymmetryBound { n, volume: vol, bound: report.bound, log_quotient, isometry_order, out_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::adaptive_simpson;

    #[test]
    fn recurrence_small_cases() {
        assert_eq!(sin_power_integral(0, 1.3).unwrap(), 1.3);
        assert!((sin_power_integral(1, FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert!((sin_power_integral(2, PI).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(sin_power_integral(3, -0.1).is_err());
        assert!(sin_power_integral(3, 3.2).is_err());
    }

    #[test]
    fn fifth_power_antiderivative() {
        let u: f64 = 0.81346;
        let c = u.cos();
        let exact = -c + 2.0 / 3.0 * c.powi(3) - c.powi(5) / 5.0 + 8.0 / 15.0;
        assert!((sin_power_integral(5, u).unwrap() - exact).abs() < 1e-15);
        assert!((ln_sin_power_integral(5, u).unwrap() - exact.ln()).abs() < 1e-13);
    }

    #[test]
    fn log_integral_matches_quadrature() {
        for &m in &[1u32, 2, 7, 20, 64, 120] {
            for &u in &[0.05f64, 0.4, 1.2, 1.5658, 1.5707, FRAC_PI_2, 1.58, 2.5, 3.1, PI] {
                let v = u.min(FRAC_PI_2);
                let scale = v.sin().powi(m as i32) * v / (m as f64 + 1.0);
                if scale < 1e-280 {
                    continue;
                }
                let q = adaptive_simpson(|t: f64| t.sin().powi(m as i32), 0.0, u, 1e-13 * scale);
                let got = ln_sin_power_integral(m, u).unwrap();
                assert!((got - q.ln()).abs() < 1e-9, "m={m} u={u} got={got} q={}", q.ln());
            }
        }
    }

    #[test]
    fn sinh_integral_values() {
        let s1: f64 = 1f64.sinh();
        let exact = (s1 * 1f64.cosh() - 1.0) / 2.0;
        assert!((sinh_power_integral(2, 1.0).unwrap() - exact).abs() < 1e-14);
        let u = 1e-4;
        assert!((sinh_power_integral(2, u).unwrap() / (u * u * u / 3.0) - 1.0).abs() < 1e-6);
        assert_eq!(sinh_power_integral(0, 0.7).unwrap(), 0.7);
        for &m in &[1u32, 3, 9, 30] {
            for &u in &[0.01f64, 0.5, 0.88, 0.9, 2.0] {
                let scale = u.sinh().powi(m as i32) * u / (m as f64 + 1.0);
                let q = adaptive_simpson(|t: f64| t.sinh().powi(m as i32), 0.0, u, 1e-13 * scale);
                let got = sinh_power_integral(m, u).unwrap();
                assert!((got / q - 1.0).abs() < 1e-9, "m={m} u={u} got={got} q={q}");
            }
        }
    }

    #[test]
    fn ball_volumes() {
        let e3 = ball_volume_log(&BallSpec::new(3, 0.0, 1.0).unwrap()).unwrap();
        assert!((e3 - (4.0 * PI / 3.0).ln()).abs() < 1e-12);
        let s2 = ball_volume_log(&BallSpec::new(2, 1.0, PI).unwrap()).unwrap();
        assert!((s2 - (4.0 * PI).ln()).abs() < 1e-12);
        let capped = ball_volume_log(&BallSpec::new(2, 1.0, 10.0).unwrap()).unwrap();
        assert_eq!(capped, s2);
        let zero = ball_volume_log(&BallSpec::new(4, 2.0, 0.0).unwrap()).unwrap();
        assert_eq!(zero, f64::NEG_INFINITY);
        let line = ball_volume_log(&BallSpec::new(1, 3.0, 0.2).unwrap()).unwrap();
        assert!((line - 0.4f64.ln()).abs() < 1e-14);
        assert!(BallSpec::new(0, 1.0, 1.0).is_err());
        assert!(BallSpec::new(2, 1.0, -1.0).is_err());
    }

    #[test]
    fn six_ball_against_quadrature() {
        let (d, k, r) = (6usize, 17.25f64, 0.19587f64);
        let u = r * k.sqrt();
        let q = adaptive_simpson(|t: f64| t.sin().powi(5), 0.0, u, 1e-16);
        let direct = 2.0 * (PI / k).powf(3.0) / 2.0 * q;
        let got = ball_volume_log(&BallSpec::new(d, k, r).unwrap()).unwrap().exp();
        assert!((got / direct - 1.0).abs() < 1e-10);
        assert!((got / 1.9275e-4 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn so_volumes() {
        let v3 = vol_so_log(3, BracketConvention::Floor).unwrap();
        assert!((v3.exp() / (8.0 * PI * PI) - 1.0).abs() < 1e-12);
        let v2 = vol_so_log(2, BracketConvention::Floor).unwrap();
        assert!((v2.exp() / (2.0 * PI) - 1.0).abs() < 1e-12);
        let v4 = vol_so_log(4, BracketConvention::Floor).unwrap();
        assert!((v4.exp() / (16.0 * PI.powi(4)) - 1.0).abs() < 1e-12);
        assert!(vol_so_log(1, BracketConvention::Floor).is_err());
    }

    #[test]
    fn factorial_chain_descent() {
        assert_eq!(ln_factorial_chain(2), 0.0);
        assert_eq!(ln_factorial_chain(3), 0.0);
        assert!((ln_factorial_chain(4) - 2f64.ln()).abs() < 1e-15);
        // 5: 3! 1!
        assert!((ln_factorial_chain(5) - 6f64.ln()).abs() < 1e-15);
        // 6: 4! 2! 0!
        assert!((ln_factorial_chain(6) - 48f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn brackets() {
        assert_eq!(BracketConvention::Floor.apply(22, 4), 5.0);
        assert_eq!(BracketConvention::RoundHalfUp.apply(22, 4), 6.0);
        assert_eq!(BracketConvention::RoundHalfUp.apply(21, 4), 5.0);
        assert_eq!(BracketConvention::Exact.apply(22, 4), 5.5);
        assert_eq!("floor".parse::<BracketConvention>().unwrap(), BracketConvention::Floor);
    }

    #[test]
    fn closed_form_agrees_without_rounding() {
        for n in 4..=15 {
            let opts = BoundOptions { convention: BracketConvention::Exact, radius: RadiusChoice::Published };
            let r = orbifold_bound_with(n, opts).unwrap();
            let closed = ln_orbifold_bound_closed_form(n, BracketConvention::Exact).unwrap();
            assert!((r.log_bound - closed).abs() < 1e-9, "n = {n}");
            assert!(r.consistency_gap < 1e-9);
        }
    }

    #[test]
    fn limit_identity() {
        for n in 4..=50usize {
            let r0 = RadiusChoice::Uniform.radius(n).unwrap();
            let lhs = closed_form_limit(n);
            assert!((lhs - r0 * bound_curvature(n).sqrt()).abs() < 1e-12);
        }
        assert!((closed_form_limit(4) - 1.353675).abs() < 1e-5);
    }

    #[test]
    fn exponent_matches_dimension() {
        for n in 3..30usize {
            assert_eq!((n * n + n - 2) / 2, bound_dimension(n) - 1);
        }
    }

    #[test]
    fn symmetry_bounds() {
        let r = orbifold_bound(3).unwrap();
        let s = symmetry_order_bound(3, r.bound).unwrap();
        assert_eq!(s.isometry_order, BigUint::from(1u32));
        assert_eq!(s.out_order, BigUint::from(2u32));
        let weeks = symmetry_order_bound(3, 0.94).unwrap();
        assert_eq!(weeks.isometry_order, BigUint::from((0.94 / r.bound).floor() as u64));
        assert!(symmetry_order_bound(3, 0.0).is_err());
        assert!(symmetry_order_bound(3, -1.0).is_err());
        let big = symmetry_order_bound(30, 1.0).unwrap();
        assert!(big.isometry_order.bits() > 1000);
    }

    #[test]
    fn floor_exp_large() {
        let v = floor_exp(800.0).unwrap();
        let approx = v.to_f64().unwrap();
        assert!(approx.is_infinite() || (approx.ln() - 800.0).abs() < 1e-12);
        assert_eq!(v.bits(), (800.0 / LN_2).floor() as u64 + 1);
    }
}
