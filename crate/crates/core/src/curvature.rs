//! Connection and curvature of the canonical left-invariant metric on O(n,1).
//!
//! Two routes are kept side by side. The closed forms split every argument
//! into its k and p parts and apply per-part formulas; the oracle route
//! solves the Koszul formula coordinate by coordinate and assembles the
//! curvature from covariant derivatives. The closed-form tensor is computed
//! in g0 and multiplied by the metric factor for the scaled metric.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{algebra_dim, AlgebraVector, BasisIndex, LorentzAlgebra, MetricSpec};

/// Normalized Gram determinant below which a plane is rejected.
pub const DEGENERATE_PLANE_TOL: f64 = 1e-12;

/// Coordinate ascent: initial step, number of sweeps.
pub const ASCENT_INITIAL_STEP: f64 = 0.1;
pub const ASCENT_SWEEPS: usize = 60;

/// Arguments of `<R(x,y)z, w>`.
#[derive(Debug, Clone)]
pub struct CurvatureQuery {
    pub x: AlgebraVector,
    pub y: AlgebraVector,
    pub z: AlgebraVector,
    pub w: AlgebraVector,
    pub metric: MetricSpec,
}

impl CurvatureQuery {
    pub fn new(
        x: AlgebraVector,
        y: AlgebraVector,
        z: AlgebraVector,
        w: AlgebraVector,
        metric: MetricSpec,
    ) -> Self {
        Self { x, y, z, w, metric }
    }

    /// The sectional numerator `<R(x,y)y, x>`.
    pub fn sectional(x: &AlgebraVector, y: &AlgebraVector, metric: MetricSpec) -> Self {
        Self::new(x.clone(), y.clone(), y.clone(), x.clone(), metric)
    }

    fn check(&self, alg: &LorentzAlgebra) -> Result<()> {
        for v in [&self.x, &self.y, &self.z, &self.w] {
            if v.n() != alg.n() {
                return Err(Error::DimensionMismatch {
                    expected: alg.dim(),
                    found: v.dim(),
                });
            }
        }
        Ok(())
    }
}

/// Sectional curvature of one plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneCurvature {
    pub x: AlgebraVector,
    pub y: AlgebraVector,
    pub k: f64,
    pub metric: MetricSpec,
}

fn check_vec(alg: &LorentzAlgebra, v: &AlgebraVector) -> Result<()> {
    if v.n() != alg.n() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: v.dim(),
        });
    }
    Ok(())
}

/// Levi-Civita connection from the per-part rules:
/// `grad_U V = [U,V]/2`, `grad_X Y = [X,Y]/2`, `grad_U X = 3[U,X]/2`,
/// `grad_X U = -[X,U]/2`.
pub fn nabla(alg: &LorentzAlgebra, v: &AlgebraVector, w: &AlgebraVector) -> Result<AlgebraVector> {
    check_vec(alg, v)?;
    check_vec(alg, w)?;
    Ok(nabla_unchecked(alg, v, w))
}

fn nabla_unchecked(alg: &LorentzAlgebra, v: &AlgebraVector, w: &AlgebraVector) -> AlgebraVector {
    let (u, x) = (v.k_part(), v.p_part());
    let (vv, y) = (w.k_part(), w.p_part());
    let mut out = alg.bracket_unchecked(&u, &vv).scale(0.5);
    out.axpy(0.5, &alg.bracket_unchecked(&x, &y));
    out.axpy(1.5, &alg.bracket_unchecked(&u, &y));
    out.axpy(-0.5, &alg.bracket_unchecked(&x, &vv));
    out
}

/// `(ad v)^T w` in basis coordinates.
fn ad_transpose_apply(alg: &LorentzAlgebra, v: &AlgebraVector, w: &AlgebraVector) -> AlgebraVector {
    let (x, y) = (v.coeffs(), w.coeffs());
    let mut out = AlgebraVector::zeros(alg.n());
    let z = out.coeffs_mut();
    for sc in alg.table().nonzero() {
        let s = f64::from(sc.sign);
        z[sc.b] += s * x[sc.a] * y[sc.c];
        z[sc.a] -= s * x[sc.b] * y[sc.c];
    }
    out
}

/// Connection from the Koszul formula
/// `<grad_v w, z> = ([v,w],z) - (w,[v,z]) - (v,[w,z])` halved,
/// solved against the diagonal Gram matrix of `metric`.
pub fn nabla_koszul(
    alg: &LorentzAlgebra,
    v: &AlgebraVector,
    w: &AlgebraVector,
    metric: MetricSpec,
) -> Result<AlgebraVector> {
    check_vec(alg, v)?;
    check_vec(alg, w)?;
    Ok(nabla_koszul_unchecked(alg, v, w, metric))
}

fn nabla_koszul_unchecked(
    alg: &LorentzAlgebra,
    v: &AlgebraVector,
    w: &AlgebraVector,
    metric: MetricSpec,
) -> AlgebraVector {
    let g = metric.gram_diagonal(alg.n());
    let d = alg.dim();
    let vw = alg.bracket_unchecked(v, w);
    let t1 = ad_transpose_apply(alg, v, w);
    let t2 = ad_transpose_apply(alg, w, v);
    let coeffs = (0..d)
        .map(|z| {
            let rhs = 0.5 * g * (vw.coeffs()[z] - t1.coeffs()[z] - t2.coeffs()[z]);
            rhs / g
        })
        .collect();
    AlgebraVector::from_coeffs(alg.n(), coeffs).expect("length d")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Part {
    K,
    P,
}

/// One of the sixteen pure-part terms of the curvature tensor, in g0.
fn pure_term(
    alg: &LorentzAlgebra,
    a: &AlgebraVector,
    b: &AlgebraVector,
    c: &AlgebraVector,
    e: &AlgebraVector,
    parts: [Part; 4],
) -> f64 {
    use Part::*;
    let g = MetricSpec::Canonical.gram_diagonal(alg.n());
    let br = |p: &AlgebraVector, q: &AlgebraVector| alg.bracket_unchecked(p, q);
    let ip = |p: &AlgebraVector, q: &AlgebraVector| g * p.dot(q);
    let odd = parts.iter().filter(|&&p| p == P).count() % 2 == 1;
    if odd {
        // <R(U,V)W,X> = 0 and <R(X,Y)Z,U> = 0 and their symmetric images
        return 0.0;
    }
    match parts {
        [K, K, K, K] => 0.25 * (ip(&br(a, e), &br(b, c)) - ip(&br(a, c), &br(b, e))),
        [P, P, P, P] => 1.75 * (ip(&br(a, c), &br(b, e)) - ip(&br(b, c), &br(a, e))),
        [K, K, P, P] => 0.75 * (ip(&br(a, c), &br(b, e)) - ip(&br(b, c), &br(a, e))),
        // <R(U,X)V,Y> = ([X,V],[U,Y]) - ([U,V],[X,Y]), quartered
        [K, P, K, P] => 0.25 * (ip(&br(b, c), &br(a, e)) - ip(&br(a, c), &br(b, e))),
        [P, P, K, K] => pure_term(alg, c, e, a, b, [K, K, P, P]),
        [P, K, P, K] => pure_term(alg, b, a, e, c, [K, P, K, P]),
        [K, P, P, K] => -pure_term(alg, a, b, e, c, [K, P, K, P]),
        [P, K, K, P] => -pure_term(alg, b, a, c, e, [K, P, K, P]),
        _ => unreachable!("odd patterns handled above"),
    }
}

/// `<R(x,y)z, w>` from the closed forms.
pub fn riem_closed(alg: &LorentzAlgebra, q: &CurvatureQuery) -> Result<f64> {
    q.check(alg)?;
    Ok(riem_closed_unchecked(alg, q))
}

fn riem_closed_unchecked(alg: &LorentzAlgebra, q: &CurvatureQuery) -> f64 {
    let split = |v: &AlgebraVector| [v.k_part(), v.p_part()];
    let xs = split(&q.x);
    let ys = split(&q.y);
    let zs = split(&q.z);
    let ws = split(&q.w);
    let part = |i: usize| if i == 0 { Part::K } else { Part::P };
    let mut acc = 0.0;
    for i in 0..2 {
        if xs[i].is_zero() {
            continue;
        }
        for j in 0..2 {
            if ys[j].is_zero() {
                continue;
            }
            for k in 0..2 {
                if zs[k].is_zero() {
                    continue;
                }
                for l in 0..2 {
                    if ws[l].is_zero() {
                        continue;
                    }
                    acc += pure_term(
                        alg,
                        &xs[i],
                        &ys[j],
                        &zs[k],
                        &ws[l],
                        [part(i), part(j), part(k), part(l)],
                    );
                }
            }
        }
    }
    acc * q.metric.factor(alg.n())
}

/// `<R(x,y)z, w>` from the Koszul connection:
/// `<grad_x z, grad_y w> - <grad_y z, grad_x w> - <grad_[x,y] z, w>`.
pub fn riem_oracle(alg: &LorentzAlgebra, q: &CurvatureQuery) -> Result<f64> {
    q.check(alg)?;
    let m = q.metric;
    let g = m.gram_diagonal(alg.n());
    let nk = |a: &AlgebraVector, b: &AlgebraVector| nabla_koszul_unchecked(alg, a, b, m);
    let xy = alg.bracket_unchecked(&q.x, &q.y);
    let t1 = g * nk(&q.x, &q.z).dot(&nk(&q.y, &q.w));
    let t2 = g * nk(&q.y, &q.z).dot(&nk(&q.x, &q.w));
    let t3 = g * nk(&xy, &q.z).dot(&q.w);
    Ok(t1 - t2 - t3)
}

/// `|x|^2 |y|^2 - <x,y>^2` and its value normalized by `|x|^2 |y|^2`.
fn plane_area(alg: &LorentzAlgebra, x: &AlgebraVector, y: &AlgebraVector, m: MetricSpec) -> (f64, f64) {
    let xx = alg.norm_sq(x, m);
    let yy = alg.norm_sq(y, m);
    let xy = m.gram_diagonal(alg.n()) * x.dot(y);
    let det = xx * yy - xy * xy;
    let norm = if xx > 0.0 && yy > 0.0 { det / (xx * yy) } else { 0.0 };
    (det, norm)
}

/// Sectional curvature `K(x, y)` in the chosen metric.
pub fn sectional(alg: &LorentzAlgebra, x: &AlgebraVector, y: &AlgebraVector, metric: MetricSpec) -> Result<f64> {
    check_vec(alg, x)?;
    check_vec(alg, y)?;
    sectional_unchecked(alg, x, y, metric)
}

fn sectional_unchecked(alg: &LorentzAlgebra, x: &AlgebraVector, y: &AlgebraVector, metric: MetricSpec) -> Result<f64> {
    let (det, norm) = plane_area(alg, x, y, metric);
    if !(norm >= DEGENERATE_PLANE_TOL) {
        return Err(Error::DegeneratePlane(norm));
    }
    let num = riem_closed_unchecked(alg, &CurvatureQuery::sectional(x, y, metric));
    Ok(num / det)
}

/// `PlaneCurvature` for a pair of vectors.
pub fn plane_curvature(alg: &LorentzAlgebra, x: &AlgebraVector, y: &AlgebraVector, metric: MetricSpec) -> Result<PlaneCurvature> {
    Ok(PlaneCurvature {
        x: x.clone(),
        y: y.clone(),
        k: sectional(alg, x, y, metric)?,
        metric,
    })
}

/// Sectional curvature of a coordinate plane, scaled metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisPlane {
    pub a: BasisIndex,
    pub b: BasisIndex,
    pub k: f64,
}

/// Sectional curvatures in the scaled metric for every pair of basis elements.
pub fn basis_plane_report(n: usize) -> Result<Vec<BasisPlane>> {
    let alg = LorentzAlgebra::new(n)?;
    let idx = alg.indices().to_vec();
    let mut out = Vec::with_capacity(idx.len() * (idx.len() - 1) / 2);
    for (i, &a) in idx.iter().enumerate() {
        for &b in &idx[i + 1..] {
            let k = sectional(&alg, &alg.unit(a), &alg.unit(b), MetricSpec::Scaled)?;
            out.push(BasisPlane { a, b, k });
        }
    }
    Ok(out)
}

/// Proven upper bound `(n^2 + 43n)/8` on sectional curvature in the scaled metric.
pub fn curvature_upper_bound(n: usize) -> f64 {
    let n = n as f64;
    (n * n + 43.0 * n) / 8.0
}

/// Result of the sampled search for the largest sectional curvature.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SectionalEstimate {
    pub n: usize,
    pub samples: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Largest value over basis planes.
    pub basis_max: f64,
    /// Largest value over the random planes alone.
    pub sampled_max: f64,
    /// Overall maximum including ascent refinement.
    pub max: f64,
    pub upper_bound: f64,
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> AlgebraVector {
    let d = algebra_dim(n);
    loop {
        let c: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            return AlgebraVector::from_coeffs(n, c.into_iter().map(|x| x / norm).collect())
                .expect("length d");
        }
    }
}

/// Random stream for sample `index`; independent of thread scheduling.
pub(crate) fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn k_or_neg_inf(alg: &LorentzAlgebra, x: &AlgebraVector, y: &AlgebraVector) -> f64 {
    sectional_unchecked(alg, x, y, MetricSpec::Scaled).unwrap_or(f64::NEG_INFINITY)
}

fn normalized(v: &AlgebraVector) -> AlgebraVector {
    let nrm = v.dot(v).sqrt();
    v.scale(1.0 / nrm)
}

/// Coordinate ascent with step halving, starting from one plane.
fn ascend(alg: &LorentzAlgebra, x0: &AlgebraVector, y0: &AlgebraVector) -> f64 {
    let d = alg.dim();
    let (mut x, mut y) = (normalized(x0), normalized(y0));
    let mut best = k_or_neg_inf(alg, &x, &y);
    let mut step = ASCENT_INITIAL_STEP;
    for _ in 0..ASCENT_SWEEPS {
        let mut improved = false;
        for coord in 0..2 * d {
            for dir in [1.0, -1.0] {
                let (mut tx, mut ty) = (x.clone(), y.clone());
                if coord < d {
                    tx.coeffs_mut()[coord] += dir * step;
                } else {
                    ty.coeffs_mut()[coord - d] += dir * step;
                }
                let k = k_or_neg_inf(alg, &tx, &ty);
                if k > best {
                    best = k;
                    x = normalized(&tx);
                    y = normalized(&ty);
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Empirical maximum of the scaled-metric sectional curvature.
///
/// Candidates are all basis planes plus `samples` random planes with
/// unit-sphere-uniform spanning vectors; the best `restarts` candidates are
/// refined by coordinate ascent. Sample `i` draws from its own ChaCha
/// stream, so the result does not depend on the thread count.
pub fn max_sectional_estimate(n: usize, samples: usize, seed: u64, restarts: usize) -> Result<SectionalEstimate> {
    if samples == 0 {
        return Err(Error::Domain("samples must be at least 1".into()));
    }
    let alg = LorentzAlgebra::new(n)?;

    // (k, order key, x, y); basis planes first, then samples in index order.
    let mut candidates: Vec<(f64, usize, AlgebraVector, AlgebraVector)> = Vec::new();
    let d = alg.dim();
    for a in 0..d {
        for b in (a + 1)..d {
            let (x, y) = (AlgebraVector::unit(n, a), AlgebraVector::unit(n, b));
            let k = k_or_neg_inf(&alg, &x, &y);
            candidates.push((k, candidates.len(), x, y));
        }
    }
    let basis_max = candidates.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let offset = candidates.len();

    let sampled: Vec<(f64, usize, AlgebraVector, AlgebraVector)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = random_unit(&mut rng, n);
            let y = random_unit(&mut rng, n);
            let k = k_or_neg_inf(&alg, &x, &y);
            (k, offset + i, x, y)
        })
        .collect();
    let sampled_max = sampled.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    candidates.extend(sampled);

    let mut ranked: Vec<&(f64, usize, AlgebraVector, AlgebraVector)> = candidates.iter().collect();
    ranked.sort_by(|p, q| q.0.total_cmp(&p.0).then(p.1.cmp(&q.1)));
    let refined: Vec<f64> = ranked
        .iter()
        .take(restarts)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|c| ascend(&alg, &c.2, &c.3))
        .collect();

    let max = refined
        .into_iter()
        .fold(basis_max.max(sampled_max), f64::max);
    Ok(SectionalEstimate {
        n,
        samples,
        restarts,
        seed,
        basis_max,
        sampled_max,
        max,
        upper_bound: curvature_upper_bound(n),
    })
}

/// Sectional curvature of H^n = SO_o(n,1)/SO(n) in g0 for a plane in p:
/// `-|[x,y]|^2 / (|x|^2 |y|^2 - <x,y>^2)`.
pub fn symmetric_space_sectional(alg: &LorentzAlgebra, x: &AlgebraVector, y: &AlgebraVector) -> Result<f64> {
    check_vec(alg, x)?;
    check_vec(alg, y)?;
    if !x.k_part().is_zero() || !y.k_part().is_zero() {
        return Err(Error::Domain("symmetric-space curvature needs vectors in p".into()));
    }
    let m = MetricSpec::Canonical;
    let (det, norm) = plane_area(alg, x, y, m);
    if !(norm >= DEGENERATE_PLANE_TOL) {
        return Err(Error::DegeneratePlane(norm));
    }
    let xy = alg.bracket_unchecked(x, y);
    Ok(-alg.norm_sq(&xy, m) / det)
}
