//! Wang's constants for SO_o(n,1) and the radius `R_G`.
//!
//! `C1` and `C2` are suprema of the operator norm of `ad X` over unit
//! vectors of p and k. They are estimated by candidate enumeration, random
//! sampling and projected ascent. `R_G` is the least positive zero of
//!
//! ```text
//! F(t) = e^{C1 t} - 1 + 2 sin(C2 t) - C1 t / (e^{C1 t} - 1)
//! ```
//!
//! with the division binding only the last term, so `F(0+) = -1`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::stream_rng;
use crate::error::{Error, Result};
use crate::lie::{compact_dim, AlgebraVector, BasisIndex, LorentzAlgebra, MetricSpec};

/// Minimum number of random unit p-vectors in the `C1` estimate.
pub const C1_MIN_SAMPLES: usize = 200;
/// Minimum number of random restarts in the `C2` estimate.
pub const C2_MIN_RESTARTS: usize = 500;
/// Projected-ascent iterations per start.
pub const ASCENT_ITERS: usize = 25;
/// Sample variance of `N(ad X)` over unit p-vectors above which isotropy is flagged.
pub const C1_VARIANCE_TOL: f64 = 1e-10;

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
/// First scan point of the root search.
pub const ROOT_SCAN_START: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Computed,
    Published,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WangConstants {
    pub n: usize,
    pub c1: f64,
    pub c2: f64,
    pub metric: MetricSpec,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RgResult {
    pub c1: f64,
    pub c2: f64,
    pub rg: f64,
    pub r0: f64,
    pub bracket: (f64, f64),
    pub f_evals: usize,
}

/// Operator-norm estimate over a unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub value: f64,
    /// Best value over the structured candidate set.
    pub candidate_max: f64,
    /// Number of random starting points.
    pub samples: usize,
    /// Sample variance of the norm over the random starting points.
    pub variance: f64,
    pub argmax: AlgebraVector,
}

/// Largest singular value of `ad v` with its left and right singular vectors.
///
/// Both metrics have Gram matrix `g * I` on the standard basis, so the matrix
/// of `ad v` in an orthonormal basis equals its coordinate matrix.
fn top_singular(alg: &LorentzAlgebra, v: &AlgebraVector) -> Result<(f64, DVector<f64>, DVector<f64>)> {
    let a: DMatrix<f64> = alg.ad_matrix(v)?;
    let ata = a.transpose() * &a;
    let eig = SymmetricEigen::new(ata);
    let (imax, &lmax) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|p, q| p.1.total_cmp(q.1))
        .expect("nonempty");
    let sigma = lmax.max(0.0).sqrt();
    let right = eig.eigenvectors.column(imax).into_owned();
    let left = if sigma > 0.0 { &a * &right / sigma } else { DVector::zeros(a.nrows()) };
    Ok((sigma, left, right))
}

/// `N(ad v) = sup |[v, X]|` over unit `X`, in the chosen metric.
/// Only the unit-sphere normalization of `v` depends on the metric.
pub fn op_norm_ad(alg: &LorentzAlgebra, v: &AlgebraVector, _metric: MetricSpec) -> Result<f64> {
    Ok(top_singular(alg, v)?.0)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Subspace {
    K,
    P,
}

impl Subspace {
    fn range(self, n: usize) -> std::ops::Range<usize> {
        let split = compact_dim(n);
        match self {
            Subspace::K => 0..split,
            Subspace::P => split..split + n,
        }
    }
}

fn unit_in_metric(alg: &LorentzAlgebra, v: &AlgebraVector, metric: MetricSpec) -> AlgebraVector {
    let nrm = alg.norm_sq(v, metric).sqrt();
    v.scale(1.0 / nrm)
}

fn random_unit_in(alg: &LorentzAlgebra, sub: Subspace, metric: MetricSpec, seed: u64, index: u64) -> AlgebraVector {
    let mut rng = stream_rng(seed, index);
    let n = alg.n();
    loop {
        let mut v = AlgebraVector::zeros(n);
        for i in sub.range(n) {
            v.coeffs_mut()[i] = StandardNormal.sample(&mut rng);
        }
        if v.dot(&v) > 0.0 {
            return unit_in_metric(alg, &v, metric);
        }
    }
}

/// Gradient of `sigma_max(ad v)` with respect to the coefficients of `v`.
fn norm_gradient(alg: &LorentzAlgebra, u: &DVector<f64>, w: &DVector<f64>) -> Vec<f64> {
    // d sigma / d v_b = u^T ad(e_b) w = sum_c u_c [e_b, w]_c
    let mut g = vec![0.0; alg.dim()];
    for sc in alg.table().nonzero() {
        let s = f64::from(sc.sign);
        g[sc.a] += s * w[sc.b] * u[sc.c];
        g[sc.b] -= s * w[sc.a] * u[sc.c];
    }
    g
}

/// Projected gradient ascent of `N(ad v)` on the unit sphere of a subspace.
/// Steps are accepted only when they increase the norm.
fn ascend_norm(alg: &LorentzAlgebra, start: &AlgebraVector, sub: Subspace, metric: MetricSpec) -> Result<(f64, AlgebraVector)> {
    let n = alg.n();
    let range = sub.range(n);
    let mut v = start.clone();
    let (mut best, mut u, mut w) = top_singular(alg, &v)?;
    let mut eta = 0.5;
    for _ in 0..ASCENT_ITERS {
        let grad = norm_gradient(alg, &u, &w);
        let mut step = AlgebraVector::zeros(n);
        for i in range.clone() {
            step.coeffs_mut()[i] = grad[i];
        }
        // remove the radial component so the step is tangent to the sphere
        let radial = step.dot(&v) / v.dot(&v);
        step.axpy(-radial, &v);
        let sn = step.dot(&step).sqrt();
        if sn < 1e-14 {
            break;
        }
        let mut accepted = false;
        while eta > 1e-8 {
            let mut trial = v.clone();
            trial.axpy(eta / sn, &step);
            let trial = unit_in_metric(alg, &trial, metric);
            let (val, tu, tw) = top_singular(alg, &trial)?;
            if val > best {
                best = val;
                v = trial;
                u = tu;
                w = tw;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok((best, v))
}

fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

fn estimate_sup(
    alg: &LorentzAlgebra,
    sub: Subspace,
    metric: MetricSpec,
    candidates: Vec<AlgebraVector>,
    starts: usize,
    seed: u64,
    refine_starts: bool,
    refine_top: usize,
) -> Result<SupEstimate> {
    let mut cand_vals = Vec::with_capacity(candidates.len());
    for c in &candidates {
        cand_vals.push(op_norm_ad(alg, c, metric)?);
    }
    let (ci, candidate_max) = cand_vals
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc });

    let runs: Vec<Result<(f64, f64, AlgebraVector)>> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let v = random_unit_in(alg, sub, metric, seed, i as u64);
            let raw = op_norm_ad(alg, &v, metric)?;
            if refine_starts {
                let (best, bv) = ascend_norm(alg, &v, sub, metric)?;
                Ok((raw, best, bv))
            } else {
                Ok((raw, raw, v))
            }
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let raw: Vec<f64> = runs.iter().map(|r| r.0).collect();

    let mut value = candidate_max;
    let mut argmax = candidates[ci].clone();
    for (_, best, bv) in &runs {
        if *best > value {
            value = *best;
            argmax = bv.clone();
        }
    }
    // refine the best structured candidates as well
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&p, &q| cand_vals[q].total_cmp(&cand_vals[p]).then(p.cmp(&q)));
    for &i in order.iter().take(refine_top) {
        let (best, bv) = ascend_norm(alg, &candidates[i], sub, metric)?;
        if best > value {
            value = best;
            argmax = bv;
        }
    }
    Ok(SupEstimate {
        value,
        candidate_max,
        samples: starts,
        variance: variance(&raw),
        argmax,
    })
}

/// `C1 = sup N(ad X)` over unit `X` in p.
pub fn wang_c1(n: usize, metric: MetricSpec, seed: u64, samples: usize) -> Result<SupEstimate> {
    let alg = LorentzAlgebra::new(n)?;
    let candidates = (1..=n)
        .map(|i| unit_in_metric(&alg, &alg.unit(BasisIndex::Sigma(i)), metric))
        .collect();
    estimate_sup(&alg, Subspace::P, metric, candidates, samples.max(C1_MIN_SAMPLES), seed, false, 2)
}

/// `C2 = sup N(ad X)` over unit `X` in k.
pub fn wang_c2(n: usize, metric: MetricSpec, seed: u64, restarts: usize) -> Result<SupEstimate> {
    let alg = LorentzAlgebra::new(n)?;
    let mut candidates: Vec<AlgebraVector> = alg
        .indices()
        .iter()
        .filter(|i| i.is_compact())
        .map(|&i| unit_in_metric(&alg, &alg.unit(i), metric))
        .collect();
    // a12 + a34 + ... over disjoint pairs, for every prefix length >= 2
    let mut acc = AlgebraVector::zeros(n);
    for k in 0..n / 2 {
        acc.axpy(1.0, &alg.unit(BasisIndex::Alpha(2 * k + 1, 2 * k + 2)));
        if k >= 1 {
            candidates.push(unit_in_metric(&alg, &acc, metric));
        }
    }
    estimate_sup(&alg, Subspace::K, metric, candidates, restarts.max(C2_MIN_RESTARTS), seed, true, 4)
}

/// Computed `(C1, C2)` for SO_o(n,1).
pub fn wang_constants(n: usize, metric: MetricSpec, seed: u64, restarts: usize) -> Result<WangConstants> {
    let c1 = wang_c1(n, metric, seed, C1_MIN_SAMPLES)?.value;
    let c2 = wang_c2(n, metric, seed, restarts)?.value;
    Ok(WangConstants {
        n,
        c1,
        c2,
        metric,
        provenance: Provenance::Computed,
    })
}

/// `F(t)` for `t > 0`.
pub fn wang_f(t: f64, c1: f64, c2: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("F(t) needs t > 0, got {t}")));
    }
    Ok(wang_f_unchecked(t, c1, c2))
}

fn wang_f_unchecked(t: f64, c1: f64, c2: f64) -> f64 {
    let x = c1 * t;
    let em1 = x.exp_m1();
    em1 + 2.0 * (c2 * t).sin() - x / em1
}

/// Least positive zero of `F` by forward scan and bisection.
pub fn least_positive_zero(c1: f64, c2: f64, tol: f64) -> Result<RgResult> {
    if !(c1 > 0.0 && c2 > 0.0) || !c1.is_finite() || !c2.is_finite() {
        return Err(Error::Domain(format!("C1, C2 must be positive, got {c1}, {c2}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let f = |t: f64| wang_f_unchecked(t, c1, c2);
    let h = 1e-3 * (1.0 / c1).max(1.0);
    let t_max = 10.0 * (1.0 / c1 + 1.0 / c2);
    let mut evals = 1;
    let mut lo = ROOT_SCAN_START;
    if f(lo) >= 0.0 {
        return Err(Error::Domain("F is nonnegative at the scan start".into()));
    }
    let mut step = 1usize;
    let mut hi = loop {
        let t = ROOT_SCAN_START + step as f64 * h;
        if t > t_max {
            return Err(Error::NoRoot { c1, c2, t_max });
        }
        evals += 1;
        if f(t) >= 0.0 {
            break t;
        }
        lo = t;
        step += 1;
    };
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        evals += 1;
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rg = 0.5 * (lo + hi);
    Ok(RgResult {
        c1,
        c2,
        rg,
        r0: 0.5 * rg,
        bracket: (lo, hi),
        f_evals: evals,
    })
}

/// Published `R_G` for SO_o(n,1), in g0 distance units.
pub fn published_rg(n: usize) -> Result<f64> {
    match n {
        0..=2 => Err(Error::Unsupported(format!(
            "no published R_G for n = {n}; values start at n = 3"
        ))),
        3 => Ok(0.277 * 2f64.sqrt()),
        _ => Ok(0.228 * ((2 * (n - 1)) as f64).sqrt()),
    }
}

/// Convert a distance measured in `metric` to g0 units.
pub fn to_canonical_distance(dist: f64, n: usize, metric: MetricSpec) -> f64 {
    dist / metric.factor(n).sqrt()
}

/// Computed versus published `R_G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WangReport {
    pub n: usize,
    pub metric: MetricSpec,
    pub c1: f64,
    pub c2: f64,
    pub c1_variance: f64,
    pub c1_isotropic: bool,
    /// Root of F in the distance units of `metric`.
    pub computed_rg: f64,
    /// The same root expressed in g0 distance units.
    pub computed_rg_canonical: f64,
    pub published_rg: f64,
    pub relative_gap: f64,
}

pub fn wang_report(n: usize, metric: MetricSpec, seed: u64, restarts: usize, tol: f64) -> Result<WangReport> {
    let c1 = wang_c1(n, metric, seed, C1_MIN_SAMPLES)?;
    let c2 = wang_c2(n, metric, seed, restarts)?;
    let root = least_positive_zero(c1.value, c2.value, tol)?;
    let canonical = to_canonical_distance(root.rg, n, metric);
    let published = published_rg(n)?;
    Ok(WangReport {
        n,
        metric,
        c1: c1.value,
        c2: c2.value,
        c1_variance: c1.variance,
        c1_isotropic: c1.variance <= C1_VARIANCE_TOL,
        computed_rg: root.rg,
        computed_rg_canonical: canonical,
        published_rg: published,
        relative_gap: (canonical - published) / published,
    })
}
