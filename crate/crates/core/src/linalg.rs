//! Dense vector and matrix primitives on `f64`.
//!
//! Vectors are plain slices. [`Matrix`] is row-major and [`OrthonormalBasis`]
//! carries the tolerance it was validated against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norms at or below this are treated as zero.
pub const EPS_ZERO: f64 = 1e-12;
/// Tolerance for orthonormality checks.
pub const ORTHO_TOL: f64 = 1e-8;
/// Least-squares systems with a larger Gram condition number are rejected.
pub const MAX_CONDITION: f64 = 1e12;

pub fn check_vector(v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn same_dim(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// `y += a * x`
#[inline]
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn normalize(v: &[f64]) -> Result<Vec<f64>> {
    let mut out = v.to_vec();
    normalize_in_place(&mut out)?;
    Ok(out)
}

pub fn normalize_in_place(v: &mut [f64]) -> Result<()> {
    let n = norm(v);
    if !(n > EPS_ZERO) {
        return Err(Error::ZeroVector);
    }
    if n != 1.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    Ok(())
}

/// Cosine similarity, clamped to [-1, 1].
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    same_dim(a, b)?;
    let (na, nb) = (norm(a), norm(b));
    if !(na > EPS_ZERO && nb > EPS_ZERO) {
        return Err(Error::ZeroVector);
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

/// Orthogonal projection of `e` onto the line spanned by `c`.
pub fn project(e: &[f64], c: &[f64]) -> Result<Vec<f64>> {
    same_dim(e, c)?;
    let cc = dot(c, c);
    if !(cc.sqrt() > EPS_ZERO) {
        return Err(Error::ZeroVector);
    }
    let s = dot(c, e) / cc;
    Ok(c.iter().map(|x| s * x).collect())
}

/// Removes the `c` component from `e` and renormalizes.
///
/// `c` must be unit-norm.
pub fn remove_component(e: &[f64], c: &[f64]) -> Result<Vec<f64>> {
    let mut out = e.to_vec();
    remove_component_in_place(&mut out, c)?;
    Ok(out)
}

pub fn remove_component_in_place(e: &mut [f64], c: &[f64]) -> Result<()> {
    same_dim(e, c)?;
    let s = dot(c, e);
    axpy(-s, c, e);
    normalize_in_place(e).map_err(|_| Error::DegenerateResidual)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalBasis {
    pub vectors: Vec<Vec<f64>>,
    pub tol: f64,
}

impl OrthonormalBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.vectors.first().map(Vec::len)
    }

    /// Largest violation of the orthonormality conditions.
    pub fn max_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            worst = worst.max((norm(a) - 1.0).abs());
            for b in &self.vectors[i + 1..] {
                worst = worst.max(dot(a, b).abs());
            }
        }
        worst
    }

    pub fn is_valid(&self) -> bool {
        self.max_deviation() <= self.tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramSchmidt {
    pub basis: OrthonormalBasis,
    /// Input positions whose residual fell below the tolerance.
    pub dropped: Vec<usize>,
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
pub fn gram_schmidt(vs: &[Vec<f64>], tol: f64) -> Result<GramSchmidt> {
    let first = vs.first().ok_or(Error::AllDegenerate)?;
    let dim = first.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut dropped = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        check_vector(v)?;
        same_dim(first, v)?;
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let s = dot(q, &r);
                axpy(-s, q, &mut r);
            }
        }
        let n = norm(&r);
        if n <= tol {
            dropped.push(i);
            continue;
        }
        r.iter_mut().for_each(|x| *x /= n);
        basis.push(r);
    }
    if basis.is_empty() {
        return Err(Error::AllDegenerate);
    }
    debug_assert!(basis.iter().all(|b| b.len() == dim));
    Ok(GramSchmidt {
        basis: OrthonormalBasis {
            vectors: basis,
            tol,
        },
        dropped,
    })
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map(Vec::len).ok_or(Error::EmptyVector)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_vector(r)?;
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if cols == 0 || rows == 0 {
            return Err(Error::EmptyVector);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        check_vector(&data)?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `X v`
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.rows().map(|r| dot(r, v)).collect()
    }

    /// `XᵀX`, accumulated row by row in a fixed order.
    pub fn gram_cols(&self) -> Vec<f64> {
        let n = self.cols;
        let mut g = vec![0.0; n * n];
        for r in self.rows() {
            for i in 0..n {
                let ri = r[i];
                if ri == 0.0 {
                    continue;
                }
                let gi = &mut g[i * n..i * n + n];
                for j in i..n {
                    gi[j] += ri * r[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g[i * n + j] = g[j * n + i];
            }
        }
        g
    }
}

/// Eigen-decomposition of a symmetric matrix by Householder
/// tridiagonalization followed by implicit QL.
///
/// Returns eigenvalues (unsorted) and the eigenvectors as columns of a
/// row-major `n x n` array.
pub fn symmetric_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| a[i * n..(i + 1) * n].to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 0 {
        return (d, Vec::new());
    }
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e);
    let flat = v.into_iter().flatten().collect();
    (d, flat)
}

fn tred2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[n - 1][j];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for x in e.iter_mut().take(i) {
                *x = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in j + 1..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k][i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

fn tql2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d.iter_mut().skip(l + 2) {
                    *x -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || iter > 64 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

/// Flips `v` so its largest-magnitude entry is positive (lowest index wins ties).
pub fn canonical_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularVectors {
    pub basis: OrthonormalBasis,
    /// Descending, one per basis vector.
    pub singular_values: Vec<f64>,
    /// Set when fewer than the requested number of singular values were
    /// above the zero threshold; `basis` then holds only the achievable prefix.
    pub rank_deficient: bool,
}

/// Top-`k` right singular vectors of the uncentered row matrix.
pub fn top_k_singular_vectors(m: &Matrix, k: usize) -> Result<SingularVectors> {
    let max = m.nrows().min(m.ncols());
    if k == 0 || k > max {
        return Err(Error::InvalidK { k, max });
    }
    let n = m.ncols();
    let (vals, vecs) = symmetric_eigen(&m.gram_cols(), n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));

    // Singular values are measured directly as |X v| rather than through the
    // squared spectrum, which keeps tiny values distinguishable from zero.
    let mut cand: Vec<(f64, Vec<f64>)> = order
        .iter()
        .map(|&j| {
            let mut v: Vec<f64> = (0..n).map(|i| vecs[i * n + j]).collect();
            let nv = norm(&v);
            v.iter_mut().for_each(|x| *x /= nv);
            canonical_sign(&mut v);
            (norm(&m.mul_vec(&v)), v)
        })
        .collect();
    cand.sort_by(|a, b| b.0.total_cmp(&a.0));

    let top = cand.first().map_or(0.0, |c| c.0);
    let tie = 1e-12 * top.max(1.0);
    let mut start = 0;
    while start < cand.len() {
        let mut end = start + 1;
        while end < cand.len() && cand[start].0 - cand[end].0 <= tie {
            end += 1;
        }
        cand[start..end].sort_by_key(|c| argmax_abs(&c.1));
        start = end;
    }

    let floor = EPS_ZERO * top.max(1.0);
    let mut vectors = Vec::with_capacity(k);
    let mut singular_values = Vec::with_capacity(k);
    for (s, v) in cand.into_iter().take(k) {
        if s <= floor {
            break;
        }
        if let Some(&prev) = singular_values.last() {
            singular_values.push(f64::min(prev, s));
        } else {
            singular_values.push(s);
        }
        vectors.push(v);
    }
    Ok(SingularVectors {
        rank_deficient: vectors.len() < k,
        basis: OrthonormalBasis {
            vectors,
            tol: ORTHO_TOL,
        },
        singular_values,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub alpha: Vec<f64>,
    pub residual_norm: f64,
}

/// Minimizes `|target - Σ alpha_k basis_k|` through the normal equations.
pub fn solve_least_squares(basis: &[Vec<f64>], target: &[f64]) -> Result<LeastSquares> {
    if basis.is_empty() {
        return Err(Error::InvalidK { k: 0, max: 0 });
    }
    check_vector(target)?;
    for b in basis {
        same_dim(target, b)?;
    }
    let k = basis.len();
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let x = dot(&basis[i], &basis[j]);
            g[i * k + j] = x;
            g[j * k + i] = x;
        }
    }
    let (ev, _) = symmetric_eigen(&g, k);
    let hi = ev.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ev.iter().cloned().fold(f64::MAX, f64::min);
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularSystem { condition });
    }
    let rhs: Vec<f64> = basis.iter().map(|b| dot(b, target)).collect();
    let alpha = cholesky_solve(&g, k, &rhs).ok_or(Error::SingularSystem { condition })?;
    let mut resid = target.to_vec();
    for (a, b) in alpha.iter().zip(basis) {
        axpy(-a, b, &mut resid);
    }
    Ok(LeastSquares {
        residual_norm: norm(&resid),
        alpha,
    })
}

fn cholesky_solve(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for p in 0..j {
                s -= l[i * n + p] * l[j * n + p];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for p in 0..i {
            s -= l[i * n + p] * y[p];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for p in i + 1..n {
            s -= l[p * n + i] * x[p];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn normalize_examples() {
        assert!(close(&normalize(&[3.0, 4.0]).unwrap(), &[0.6, 0.8], 1e-15));
        assert_eq!(normalize(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        assert!(matches!(normalize(&[0.0, 0.0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn cosine_examples() {
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(cosine(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        let c = cosine(&[1.0, 1.0], &[1.0, 0.0]).unwrap();
        assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(matches!(
            cosine(&[1.0], &[1.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            cosine(&[0.0, 0.0], &[1.0, 0.0]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn project_examples() {
        assert_eq!(project(&[2.0, 3.0], &[1.0, 0.0]).unwrap(), vec![2.0, 0.0]);
        assert_eq!(project(&[0.0, 5.0], &[1.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        let p = project(&[1.0, 1.0], &[0.6, 0.8]).unwrap();
        assert!(close(&p, &[0.84, 1.12], 1e-12));
        // Non-unit direction uses the squared norm.
        let p = project(&[1.0, 1.0], &[2.0, 0.0]).unwrap();
        assert!(close(&p, &[1.0, 0.0], 1e-15));
    }

    #[test]
    fn remove_component_examples() {
        let r = remove_component(&[0.6, 0.8], &[1.0, 0.0]).unwrap();
        assert!(close(&r, &[0.0, 1.0], 1e-15));
        assert_eq!(remove_component(&[0.0, 1.0], &[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
        assert!(matches!(
            remove_component(&[1.0, 0.0], &[1.0, 0.0]),
            Err(Error::DegenerateResidual)
        ));
    }

    #[test]
    fn gram_schmidt_examples() {
        let gs = gram_schmidt(&[vec![1.0, 0.0], vec![1.0, 1.0]], ORTHO_TOL).unwrap();
        assert_eq!(gs.basis.vectors, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let gs = gram_schmidt(&[vec![2.0, 0.0]], ORTHO_TOL).unwrap();
        assert_eq!(gs.basis.vectors, vec![vec![1.0, 0.0]]);
        let gs = gram_schmidt(&[vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 3.0]], ORTHO_TOL).unwrap();
        assert_eq!(gs.basis.vectors, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(gs.dropped, vec![1]);
        assert!(matches!(
            gram_schmidt(&[vec![0.0, 0.0]], ORTHO_TOL),
            Err(Error::AllDegenerate)
        ));
    }

    #[test]
    fn svd_examples() {
        let m = Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = top_k_singular_vectors(&m, 1).unwrap();
        assert!(close(&s.basis.vectors[0], &[1.0, 0.0], 1e-12));
        assert!((s.singular_values[0] - 2f64.sqrt()).abs() < 1e-12);

        let m = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = top_k_singular_vectors(&m, 2).unwrap();
        assert!(close(&s.basis.vectors[0], &[1.0, 0.0], 1e-12));
        assert!(close(&s.basis.vectors[1], &[0.0, 1.0], 1e-12));

        let m = Matrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]]).unwrap();
        let s = top_k_singular_vectors(&m, 2).unwrap();
        assert!(s.rank_deficient);
        assert_eq!(s.basis.len(), 1);
        assert!(matches!(
            top_k_singular_vectors(&m, 3),
            Err(Error::InvalidK { k: 3, max: 2 })
        ));
    }

    #[test]
    fn sign_convention() {
        let m = Matrix::from_rows(&[vec![0.0, -3.0], vec![0.0, -1.0]]).unwrap();
        let s = top_k_singular_vectors(&m, 1).unwrap();
        assert!(close(&s.basis.vectors[0], &[0.0, 1.0], 1e-15));
        let mut v = vec![-0.5, 0.5];
        canonical_sign(&mut v);
        assert_eq!(v, vec![0.5, -0.5]);
    }

    #[test]
    fn least_squares_examples() {
        let ls = solve_least_squares(&[vec![1.0, 0.0]], &[3.0, 4.0]).unwrap();
        assert!(close(&ls.alpha, &[3.0], 1e-15));
        assert!((ls.residual_norm - 4.0).abs() < 1e-15);

        let ls = solve_least_squares(&[vec![1.0, 0.0], vec![1.0, 1.0]], &[0.0, 2.0]).unwrap();
        assert!(close(&ls.alpha, &[-2.0, 2.0], 1e-12));

        let ls = solve_least_squares(&[vec![0.6, 0.8], vec![-0.8, 0.6]], &[1.0, -2.0]).unwrap();
        assert!(ls.residual_norm <= 1e-10);

        assert!(matches!(
            solve_least_squares(&[vec![1.0, 0.0], vec![2.0, 0.0]], &[1.0, 1.0]),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn eigen_of_small_matrices() {
        let (d, _) = symmetric_eigen(&[5.0], 1);
        assert_eq!(d, vec![5.0]);
        let (mut d, v) = symmetric_eigen(&[2.0, 1.0, 1.0, 2.0], 2);
        d.sort_by(f64::total_cmp);
        assert!(close(&d, &[1.0, 3.0], 1e-14));
        // Columns are orthonormal.
        let c0 = [v[0], v[2]];
        let c1 = [v[1], v[3]];
        assert!(dot(&c0, &c1).abs() < 1e-14);
    }
}
