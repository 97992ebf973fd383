//! The Lie algebra o(n,1) in its standard basis.
//!
//! Basis ordering is fixed throughout the crate: the compact generators
//! `a_ij = e_ij - e_ji` for `1 <= i < j <= n` in lexicographic order,
//! followed by the noncompact generators `s_i = e_{i,n+1} + e_{n+1,i}` for
//! `i = 1..=n`. Golden files and every coordinate vector depend on it.
//!
//! Basis matrices and structure constants are integers. The structure
//! table is built from index rules alone and is checked against the
//! matrix commutator, which is the independent route.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension of o(n,1), `n(n+1)/2`.
pub fn algebra_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Dimension of the compact part so(n).
pub fn compact_dim(n: usize) -> usize {
    n * (n - 1) / 2
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    Ok(())
}

/// A standard basis element. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisIndex {
    /// `a_ij` with `i < j`.
    Alpha(usize, usize),
    /// `s_i`, short for `s_{i,n+1}`.
    Sigma(usize),
}

impl BasisIndex {
    pub fn is_compact(self) -> bool {
        matches!(self, BasisIndex::Alpha(..))
    }

    /// Position in the fixed basis ordering for o(n,1).
    pub fn position(self, n: usize) -> usize {
        match self {
            BasisIndex::Alpha(i, j) => {
                debug_assert!(1 <= i && i < j && j <= n);
                // rows 1..i-1 hold (n - r) entries each
                let before: usize = (1..i).map(|r| n - r).sum();
                before + (j - i - 1)
            }
            BasisIndex::Sigma(i) => {
                debug_assert!(1 <= i && i <= n);
                compact_dim(n) + i - 1
            }
        }
    }

    /// Short label such as `a12` or `s3`.
    pub fn label(self) -> String {
        match self {
            BasisIndex::Alpha(i, j) => format!("a{i}_{j}"),
            BasisIndex::Sigma(i) => format!("s{i}"),
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// All basis indices of o(n,1) in the fixed ordering.
pub fn basis_indices(n: usize) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity(algebra_dim(n));
    for i in 1..=n {
        for j in (i + 1)..=n {
            out.push(BasisIndex::Alpha(i, j));
        }
    }
    out.extend((1..=n).map(BasisIndex::Sigma));
    out
}

/// Dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    size: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![0; size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    /// `e_ij` with 0-based indices.
    pub fn unit(size: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(size);
        m.set(i, j, 1);
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.size + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.size != other.size {
            return Err(Error::ShapeMismatch(format!(
                "{0}x{0} vs {1}x{1}",
                self.size, other.size
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let s = self.size;
        let mut out = Self::zeros(s);
        for i in 0..s {
            for k in 0..s {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..s {
                    out.data[i * s + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            size: self.size,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            size: self.size,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scaled(&self, c: i64) -> Self {
        Self {
            size: self.size,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }
}

/// The Lorentz form `J = diag(1, ..., 1, -1)` of size `n + 1`.
pub fn lorentz_form(n: usize) -> IntMatrix {
    let mut j = IntMatrix::identity(n + 1);
    j.set(n, n, -1);
    j
}

/// The basis matrix for one standard basis element, size `(n+1) x (n+1)`.
pub fn basis_matrix(n: usize, idx: BasisIndex) -> IntMatrix {
    let size = n + 1;
    let mut m = IntMatrix::zeros(size);
    match idx {
        BasisIndex::Alpha(i, j) => {
            m.set(i - 1, j - 1, 1);
            m.set(j - 1, i - 1, -1);
        }
        BasisIndex::Sigma(i) => {
            m.set(i - 1, n, 1);
            m.set(n, i - 1, 1);
        }
    }
    m
}

/// The `n(n+1)/2` standard basis matrices of o(n,1), in basis order.
pub fn build_basis(n: usize) -> Result<Vec<(BasisIndex, IntMatrix)>> {
    check_dimension(n)?;
    Ok(basis_indices(n)
        .into_iter()
        .map(|idx| (idx, basis_matrix(n, idx)))
        .collect())
}

/// True when `J M^T J = -M`, the defining equation of o(n,1).
pub fn in_lorentz_algebra(m: &IntMatrix) -> bool {
    let n = m.size() - 1;
    let j = lorentz_form(n);
    let lhs = j
        .matmul(&m.transpose())
        .and_then(|x| x.matmul(&j))
        .expect("shapes agree");
    lhs == m.scaled(-1)
}

/// Matrix commutator `AB - BA`.
pub fn bracket_matrix(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    a.matmul(b)?.try_sub(&b.matmul(a)?)
}

/// Coordinates of an o(n,1) matrix in the standard basis, or `None` if the
/// matrix is not in o(n,1).
pub fn matrix_coords(m: &IntMatrix) -> Option<Vec<i64>> {
    let n = m.size().checked_sub(1)?;
    if n < 2 || !in_lorentz_algebra(m) {
        return None;
    }
    Some(
        basis_indices(n)
            .into_iter()
            .map(|idx| match idx {
                BasisIndex::Alpha(i, j) => m.get(i - 1, j - 1),
                BasisIndex::Sigma(i) => m.get(i - 1, n),
            })
            .collect(),
    )
}

/// One nonzero structure constant `[e_a, e_b] = sign * e_c` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstant {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub sign: i8,
}

/// Signed bracket table of the standard basis.
///
/// Only pairs `a < b` are stored; the rest follow by antisymmetry.
#[derive(Debug, Clone)]
pub struct StructureTable {
    n: usize,
    dim: usize,
    upper: Vec<Option<(i8, usize)>>,
    nonzero: Vec<StructureConstant>,
}

/// A signed basis element, or zero.
type Signed = Option<(i8, BasisIndex)>;

/// `a_xy` for arbitrary distinct `x, y`, using `a_yx = -a_xy`.
fn alpha_signed(x: usize, y: usize) -> Signed {
    use std::cmp::Ordering::*;
    match x.cmp(&y) {
        Less => Some((1, BasisIndex::Alpha(x, y))),
        Greater => Some((-1, BasisIndex::Alpha(y, x))),
        Equal => None,
    }
}

fn negate(s: Signed) -> Signed {
    s.map(|(sg, idx)| (-sg, idx))
}

/// Index rules for the bracket of two basis elements.
fn bracket_rule(x: BasisIndex, y: BasisIndex) -> Signed {
    use BasisIndex::*;
    match (x, y) {
        (Alpha(i, j), Alpha(k, l)) => {
            // d_jk a_il + d_jl a_ki + d_il a_jk + d_ki a_lj
            let terms = [
                (j == k, i, l),
                (j == l, k, i),
                (i == l, j, k),
                (k == i, l, j),
            ];
            let mut hit: Signed = None;
            for (cond, p, q) in terms {
                if !cond {
                    continue;
                }
                if let Some(t) = alpha_signed(p, q) {
                    debug_assert!(hit.is_none(), "two indices shared");
                    hit = Some(t);
                }
            }
            hit
        }
        (Alpha(i, j), Sigma(k)) => {
            if k == j {
                Some((1, Sigma(i)))
            } else if k == i {
                Some((-1, Sigma(j)))
            } else {
                None
            }
        }
        (Sigma(_), Alpha(..)) => negate(bracket_rule(y, x)),
        (Sigma(i), Sigma(j)) => alpha_signed(i, j),
    }
}

fn tri_index(dim: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b);
    a * dim - a * (a + 1) / 2 + (b - a - 1)
}

/// Build the structure table of o(n,1) from the index rules.
pub fn structure_table(n: usize) -> Result<StructureTable> {
    check_dimension(n)?;
    let indices = basis_indices(n);
    let dim = indices.len();
    let mut upper = vec![None; dim * (dim - 1) / 2];
    let mut nonzero = Vec::new();
    for a in 0..dim {
        for b in (a + 1)..dim {
            if let Some((sign, idx)) = bracket_rule(indices[a], indices[b]) {
                let c = idx.position(n);
                upper[tri_index(dim, a, b)] = Some((sign, c));
                nonzero.push(StructureConstant { a, b, c, sign });
            }
        }
    }
    Ok(StructureTable {
        n,
        dim,
        upper,
        nonzero,
    })
}

impl StructureTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `[e_a, e_b]` as `(sign, c)`, or `None` for zero.
    pub fn entry(&self, a: usize, b: usize) -> Option<(i8, usize)> {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => None,
            Less => self.upper[tri_index(self.dim, a, b)],
            Greater => self.upper[tri_index(self.dim, b, a)].map(|(s, c)| (-s, c)),
        }
    }

    /// Nonzero entries with `a < b`.
    pub fn nonzero(&self) -> &[StructureConstant] {
        &self.nonzero
    }

    /// Label triples `(a, b, ±c)` for every nonzero bracket with `a < b`.
    pub fn triples(&self) -> Vec<[String; 3]> {
        let idx = basis_indices(self.n);
        self.nonzero
            .iter()
            .map(|sc| {
                let sign = if sc.sign > 0 { "+" } else { "-" };
                [
                    idx[sc.a].label(),
                    idx[sc.b].label(),
                    format!("{sign}{}", idx[sc.c].label()),
                ]
            })
            .collect()
    }

    pub fn dump_text(&self) -> String {
        let mut s = String::new();
        for [a, b, c] in self.triples() {
            s.push_str(&format!("[{a}, {b}] = {c}\n"));
        }
        s
    }

    pub fn dump_json(&self) -> String {
        serde_json::to_string_pretty(&self.triples()).expect("string triples serialize")
    }
}

/// Coefficient vector over the standard basis of o(n,1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraVector {
    n: usize,
    coeffs: Vec<f64>,
}

impl AlgebraVector {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![0.0; algebra_dim(n)],
        }
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != algebra_dim(n) {
            return Err(Error::DimensionMismatch {
                expected: algebra_dim(n),
                found: coeffs.len(),
            });
        }
        Ok(Self { n, coeffs })
    }

    /// The basis vector at position `pos`.
    pub fn unit(n: usize, pos: usize) -> Self {
        let mut v = Self::zeros(n);
        v.coeffs[pos] = 1.0;
        v
    }

    pub fn basis(n: usize, idx: BasisIndex) -> Self {
        Self::unit(n, idx.position(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Projection onto the compact part k = so(n).
    pub fn k_part(&self) -> Self {
        let split = compact_dim(self.n);
        let mut v = self.clone();
        v.coeffs[split..].iter_mut().for_each(|x| *x = 0.0);
        v
    }

    /// Projection onto the noncompact part p.
    pub fn p_part(&self) -> Self {
        let split = compact_dim(self.n);
        let mut v = self.clone();
        v.coeffs[..split].iter_mut().for_each(|x| *x = 0.0);
        v
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    pub fn axpy(&mut self, c: f64, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += c * b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0.0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Real matrix `sum_b c_b M_b`.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let size = self.n + 1;
        let mut m = DMatrix::zeros(size, size);
        for (idx, c) in basis_indices(self.n).into_iter().zip(&self.coeffs) {
            match idx {
                BasisIndex::Alpha(i, j) => {
                    m[(i - 1, j - 1)] += c;
                    m[(j - 1, i - 1)] -= c;
                }
                BasisIndex::Sigma(i) => {
                    m[(i - 1, self.n)] += c;
                    m[(self.n, i - 1)] += c;
                }
            }
        }
        m
    }
}

impl Add for &AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: Self) -> AlgebraVector {
        assert_eq!(self.n, rhs.n, "algebra dimension mismatch");
        let mut v = self.clone();
        v.axpy(1.0, rhs);
        v
    }
}

impl Sub for &AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: Self) -> AlgebraVector {
        assert_eq!(self.n, rhs.n, "algebra dimension mismatch");
        let mut v = self.clone();
        v.axpy(-1.0, rhs);
        v
    }
}

impl Neg for &AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> AlgebraVector {
        self.scale(-1.0)
    }
}

impl Mul<&AlgebraVector> for f64 {
    type Output = AlgebraVector;
    fn mul(self, rhs: &AlgebraVector) -> AlgebraVector {
        rhs.scale(self)
    }
}

/// Which left-invariant inner product is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricSpec {
    /// `g0 = B_theta`, diagonal `2n - 2` on the standard basis.
    Canonical,
    /// `g0 / (2(n-1))`, orthonormal standard basis; H^n has curvature -1.
    Scaled,
}

impl MetricSpec {
    /// Diagonal Gram entry on the standard basis.
    pub fn gram_diagonal(self, n: usize) -> f64 {
        match self {
            MetricSpec::Canonical => (2 * n - 2) as f64,
            MetricSpec::Scaled => 1.0,
        }
    }

    /// Factor `c` with `metric = c * g0`.
    pub fn factor(self, n: usize) -> f64 {
        match self {
            MetricSpec::Canonical => 1.0,
            MetricSpec::Scaled => 1.0 / (2 * n - 2) as f64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MetricSpec::Canonical => "canonical",
            MetricSpec::Scaled => "scaled",
        }
    }
}

impl std::str::FromStr for MetricSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" | "g0" => Ok(MetricSpec::Canonical),
            "scaled" => Ok(MetricSpec::Scaled),
            other => Err(Error::Domain(format!("unknown metric '{other}'"))),
        }
    }
}

/// o(n,1) with its structure table and exact Killing Gram matrix.
#[derive(Debug, Clone)]
pub struct LorentzAlgebra {
    n: usize,
    indices: Vec<BasisIndex>,
    table: StructureTable,
    killing_gram: Vec<i64>,
}

impl LorentzAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        let table = structure_table(n)?;
        let killing_gram = exact_killing_gram(&table);
        Ok(Self {
            n,
            indices: basis_indices(n),
            table,
            killing_gram,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[BasisIndex] {
        &self.indices
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn unit(&self, idx: BasisIndex) -> AlgebraVector {
        AlgebraVector::basis(self.n, idx)
    }

    fn check(&self, v: &AlgebraVector) -> Result<()> {
        if v.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        Ok(())
    }

    /// Bilinear extension of the structure table.
    pub fn bracket(&self, v: &AlgebraVector, w: &AlgebraVector) -> Result<AlgebraVector> {
        self.check(v)?;
        self.check(w)?;
        v.check_same(w)?;
        Ok(self.bracket_unchecked(v, w))
    }

    pub(crate) fn bracket_unchecked(&self, v: &AlgebraVector, w: &AlgebraVector) -> AlgebraVector {
        let (x, y) = (v.coeffs(), w.coeffs());
        let mut out = AlgebraVector::zeros(self.n);
        let z = out.coeffs_mut();
        for sc in self.table.nonzero() {
            let coef = x[sc.a] * y[sc.b] - x[sc.b] * y[sc.a];
            if coef != 0.0 {
                z[sc.c] += f64::from(sc.sign) * coef;
            }
        }
        out
    }

    /// Matrix of `ad v` in basis coordinates: column `b` is `[v, e_b]`.
    pub fn ad_matrix(&self, v: &AlgebraVector) -> Result<DMatrix<f64>> {
        self.check(v)?;
        let d = self.dim();
        let x = v.coeffs();
        let mut m = DMatrix::zeros(d, d);
        for sc in self.table.nonzero() {
            let s = f64::from(sc.sign);
            // [e_a, e_b] = s e_c and [e_b, e_a] = -s e_c
            m[(sc.c, sc.b)] += s * x[sc.a];
            m[(sc.c, sc.a)] -= s * x[sc.b];
        }
        Ok(m)
    }

    /// Integer `ad` matrix of a basis element, row-major `d x d`.
    pub fn ad_basis_exact(&self, pos: usize) -> Vec<i64> {
        let d = self.dim();
        let mut m = vec![0i64; d * d];
        for b in 0..d {
            if let Some((s, c)) = self.table.entry(pos, b) {
                m[c * d + b] = i64::from(s);
            }
        }
        m
    }

    /// Exact Killing Gram matrix `B(e_a, e_b)`, row-major.
    pub fn killing_gram(&self) -> &[i64] {
        &self.killing_gram
    }

    /// `B(v, w) = tr(ad v ad w)` evaluated through the exact Gram matrix.
    pub fn killing(&self, v: &AlgebraVector, w: &AlgebraVector) -> Result<f64> {
        self.check(v)?;
        self.check(w)?;
        let d = self.dim();
        let (x, y) = (v.coeffs(), w.coeffs());
        let mut acc = 0.0;
        for a in 0..d {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..d {
                let g = self.killing_gram[a * d + b];
                if g != 0 {
                    acc += x[a] * g as f64 * y[b];
                }
            }
        }
        Ok(acc)
    }

    /// `tr(ad v ad w)` by dense matrix product.
    pub fn killing_by_trace(&self, v: &AlgebraVector, w: &AlgebraVector) -> Result<f64> {
        let av = self.ad_matrix(v)?;
        let aw = self.ad_matrix(w)?;
        Ok((av * aw).trace())
    }

    /// Cartan involution: identity on k, negation on p.
    pub fn cartan_theta(&self, v: &AlgebraVector) -> Result<AlgebraVector> {
        self.check(v)?;
        Ok(&v.k_part() - &v.p_part())
    }

    /// Inner product in the chosen metric.
    pub fn inner(&self, v: &AlgebraVector, w: &AlgebraVector, metric: MetricSpec) -> Result<f64> {
        self.check(v)?;
        self.check(w)?;
        Ok(metric.gram_diagonal(self.n) * v.dot(w))
    }

    pub fn norm_sq(&self, v: &AlgebraVector, metric: MetricSpec) -> f64 {
        metric.gram_diagonal(self.n) * v.dot(v)
    }

    /// `B_theta(v, w) = -B(v, theta w)`, straight from the Killing form.
    pub fn b_theta(&self, v: &AlgebraVector, w: &AlgebraVector) -> Result<f64> {
        Ok(-self.killing(v, &self.cartan_theta(w)?)?)
    }
}

fn exact_killing_gram(table: &StructureTable) -> Vec<i64> {
    let d = table.dim();
    // each column of ad e_a has at most one nonzero: col -> (row, sign)
    let cols: Vec<Vec<Option<(usize, i64)>>> = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| table.entry(a, b).map(|(s, c)| (c, i64::from(s))))
                .collect()
        })
        .collect();
    let mut gram = vec![0i64; d * d];
    for a in 0..d {
        for b in a..d {
            // tr(ad_a ad_b) = sum_e sum_c ad_a[e][c] ad_b[c][e]
            let mut tr = 0i64;
            for e in 0..d {
                if let Some((c, sb)) = cols[b][e] {
                    if let Some((row, sa)) = cols[a][c] {
                        if row == e {
                            tr += sa * sb;
                        }
                    }
                }
            }
            gram[a * d + b] = tr;
            gram[b * d + a] = tr;
        }
    }
    gram
}
