//! Special functions and series used by the volume and comparison modules.

use crate::error::{Error, Result};

/// Number of terms summed directly in the zeta and L-series.
pub const SERIES_CUTOFF: u64 = 1_000_000;

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `ln(k!)`, summed exactly term by term for small `k`.
pub fn ln_factorial(k: u64) -> f64 {
    if k <= 170 {
        (2..=k).map(|j| (j as f64).ln()).sum()
    } else {
        ln_gamma(k as f64 + 1.0)
    }
}

/// `ln((2r-1)!!)`, the log of the product of odd integers up to `2r-1`.
pub fn ln_double_factorial_odd(r: u64) -> f64 {
    (1..=r).map(|i| ((2 * i - 1) as f64).ln()).sum()
}

/// `ln(1 - e^x)` for `x < 0`, accurate near both ends.
pub fn ln_1m_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// Riemann zeta for real `s > 1`.
///
/// Direct sum to [`SERIES_CUTOFF`] (smallest terms first) plus an
/// Euler-Maclaurin tail.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("zeta requires s > 1, got {s}")));
    }
    let m = SERIES_CUTOFF as f64;
    let mut sum = 0.0;
    for k in (1..=SERIES_CUTOFF).rev() {
        sum += (k as f64).powf(-s);
    }
    let ms = m.powf(-s);
    let tail = m * ms / (s - 1.0) - 0.5 * ms + s * ms / (12.0 * m)
        - s * (s + 1.0) * (s + 2.0) * ms / (720.0 * m * m * m);
    Ok(sum + tail)
}

/// The quadratic character modulo 5.
pub fn chi5(m: u64) -> i32 {
    const TABLE: [i32; 5] = [0, 1, -1, -1, 1];
    TABLE[(m % 5) as usize]
}

/// `L(s, chi_5)` for real `s > 1`, summed to [`SERIES_CUTOFF`].
///
/// The cutoff is a multiple of the period, so the neglected tail is a sum of
/// complete periods, each `O(s^2 m^{-s-2})`.
pub fn l_chi5(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("L(s, chi_5) requires s > 1, got {s}")));
    }
    let mut sum = 0.0;
    for k in (1..=SERIES_CUTOFF).rev() {
        match chi5(k) {
            1 => sum += (k as f64).powf(-s),
            -1 => sum -= (k as f64).powf(-s),
            _ => {}
        }
    }
    Ok(sum)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        let tol = tol.max(f64::EPSILON * whole.abs());
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(&f, a, b, fa, fm, fb, whole, tol, 50)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_matches_factorials() {
        for d0 in 1..=60u64 {
            let x = d0 as f64 / 2.0;
            let exact = if d0 % 2 == 0 {
                ln_factorial(d0 / 2 - 1)
            } else {
                // Gamma(r + 1/2) = (2r-1)!! sqrt(pi) / 2^r
                let r = (d0 - 1) / 2;
                ln_double_factorial_odd(r) + 0.5 * PI.ln() - r as f64 * 2f64.ln()
            };
            let got = ln_gamma(x);
            assert!(((got - exact).exp() - 1.0).abs() < 1e-12, "d0 = {d0}");
        }
    }

    #[test]
    fn zeta_classical_values() {
        let z2 = riemann_zeta(2.0).unwrap();
        assert!((z2 - PI * PI / 6.0).abs() < 1e-12);
        let z4 = riemann_zeta(4.0).unwrap();
        assert!((z4 - PI.powi(4) / 90.0).abs() < 1e-13);
        assert!(riemann_zeta(1.0).is_err());
    }

    #[test]
    fn l_series_closed_value() {
        let l2 = l_chi5(2.0).unwrap();
        let exact = 4.0 * PI * PI / (25.0 * 5f64.sqrt());
        assert!((l2 - exact).abs() < 1e-12);
    }

    #[test]
    fn simpson_polynomial() {
        let v = adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-14);
        assert!((v - 4.0).abs() < 1e-13);
    }

    #[test]
    fn ln_1m_exp_branches() {
        for &x in &[-1e-10, -0.1, -1.0, -40.0] {
            let direct = (1.0 - f64::exp(x)).ln();
            assert!((ln_1m_exp(x) - direct).abs() < 1e-6 * direct.abs().max(1.0));
        }
    }
}
