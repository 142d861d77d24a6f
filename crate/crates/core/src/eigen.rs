//! Dense complex non-Hermitian eigenvalue engine.
//!
//! The production path is Hessenberg reduction by unitary similarity followed
//! by shifted QR iteration with deflation. An independent oracle computes the
//! characteristic polynomial by the Faddeev–LeVerrier trace recurrence and
//! roots it with a simultaneous Aberth iteration; the two routes cross-check
//! each other in the test suite and in the algebraic-block pipeline.

use num_complex::Complex64;
use thiserror::Error;

/// Size cap for [`DenseMatrix`].
pub const SIZE_CAP: usize = 2048;

/// Size cap for the characteristic-polynomial oracle; Faddeev–LeVerrier is
/// numerically poor beyond this.
pub const CHARPOLY_CAP: usize = 64;

const DEFLATION_TOL: f64 = 1e-14;
const RANK_TOL: f64 = 1e-8;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum EigenError {
    #[error("QR iteration did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("Aberth iteration did not converge within {iterations} iterations")]
    RootsNonConvergence { iterations: usize },
    #[error("matrix size {n} exceeds cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("matrix rows have inconsistent lengths")]
    RaggedRows,
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1 && n <= SIZE_CAP, "matrix size {n} out of range");
        DenseMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, EigenError> {
        let n = rows.len();
        if n == 0 || n > SIZE_CAP {
            return Err(EigenError::SizeCapExceeded { n, cap: SIZE_CAP });
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(EigenError::RaggedRows);
        }
        let data: Vec<Complex64> = rows.into_iter().flatten().collect();
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(EigenError::NonFiniteEntry);
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        DenseMatrix { n: self.n, data }
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        DenseMatrix { n: self.n, data }
    }

    pub fn scaled(&self, c: Complex64) -> DenseMatrix {
        DenseMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `self + c * I`.
    pub fn plus_scaled_identity(&self, c: Complex64) -> DenseMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j) * v[j])
                    .sum::<Complex64>()
            })
            .collect()
    }
}

/// Eigenvalue report; `values` counts algebraic multiplicity.
///
/// `geometric_multiplicities` and `vectors` are present when the caller asked
/// for them (they cost an extra O(n^3) per eigenvalue and are skipped for the
/// large finite-difference matrices).
#[derive(Clone, Debug)]
pub struct EigenReport {
    pub values: Vec<Complex64>,
    pub vectors: Option<Vec<Vec<Complex64>>>,
    pub geometric_multiplicities: Option<Vec<usize>>,
    pub max_residual: f64,
}

/// Eigenvalues only, sorted by (re, im).
pub fn eigenvalues(m: &DenseMatrix) -> Result<EigenReport, EigenError> {
    let h = hessenberg(m);
    let mut values = qr_eigenvalues(h)?;
    sort_complex(&mut values);
    Ok(EigenReport {
        values,
        vectors: None,
        geometric_multiplicities: None,
        max_residual: 0.0,
    })
}

/// Eigenvalues plus eigenvectors (inverse iteration on the original matrix)
/// and geometric multiplicities (rank of `M - lambda I`).
pub fn eigen_with_vectors(m: &DenseMatrix) -> Result<EigenReport, EigenError> {
    let report = eigenvalues(m)?;
    let values = report.values;
    let norm = m.frobenius_norm();
    let mut vectors = Vec::with_capacity(values.len());
    let mut mults = Vec::with_capacity(values.len());
    let mut max_residual: f64 = 0.0;
    for &lambda in &values {
        let v = inverse_iteration(m, lambda);
        let mv = m.apply(&v);
        let res: f64 = mv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        max_residual = max_residual.max(res);
        vectors.push(v);
        mults.push(geometric_multiplicity(m, lambda, norm));
    }
    Ok(EigenReport {
        values,
        vectors: Some(vectors),
        geometric_multiplicities: Some(mults),
        max_residual,
    })
}

/// Dimension of the kernel of `M - lambda I` at the module's rank threshold.
pub fn geometric_multiplicity(m: &DenseMatrix, lambda: Complex64, norm: f64) -> usize {
    let shifted = m.plus_scaled_identity(-lambda);
    m.n() - rank(&shifted, RANK_TOL * norm.max(1e-300))
}

/// Monic characteristic polynomial, low degree first, via the
/// Faddeev–LeVerrier trace recurrence. Capped at `CHARPOLY_CAP`.
pub fn charpoly(m: &DenseMatrix) -> Result<Vec<Complex64>, EigenError> {
    let n = m.n();
    if n > CHARPOLY_CAP {
        return Err(EigenError::SizeCapExceeded {
            n,
            cap: CHARPOLY_CAP,
        });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = -mk.trace() / k as f64;
        coeffs[n - k] = ck;
        if k < n {
            mk = m.matmul(&mk.plus_scaled_identity(ck));
        }
    }
    Ok(coeffs)
}

/// Roots of the characteristic polynomial by simultaneous Aberth iteration
/// started from a deterministically perturbed circle. Independent of the QR
/// path; used as a cross-check oracle.
pub fn charpoly_roots(m: &DenseMatrix) -> Result<Vec<Complex64>, EigenError> {
    let coeffs = charpoly(m)?;
    let mut roots = aberth(&coeffs)?;
    sort_complex(&mut roots);
    Ok(roots)
}

fn sort_complex(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}

/// Unitary-similarity reduction to upper Hessenberg form (complex
/// Householder reflectors).
fn hessenberg(m: &DenseMatrix) -> DenseMatrix {
    let n = m.n();
    let mut h = m.clone();
    if n <= 2 {
        return h;
    }
    for k in 0..n - 2 {
        // reflector for column k, rows k+1..n
        let mut x: Vec<Complex64> = (k + 1..n).map(|i| h.get(i, k)).collect();
        let xnorm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        x[0] -= alpha;
        let vnorm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vnorm < 1e-300 {
            continue;
        }
        for c in &mut x {
            *c /= vnorm;
        }
        // left: H <- (I - 2 v v*) H on rows k+1..n
        for col in 0..n {
            let dot: Complex64 = (0..x.len())
                .map(|r| x[r].conj() * h.get(k + 1 + r, col))
                .sum();
            for r in 0..x.len() {
                let cur = h.get(k + 1 + r, col);
                h.set(k + 1 + r, col, cur - 2.0 * x[r] * dot);
            }
        }
        // right: H <- H (I - 2 v v*) on cols k+1..n
        for row in 0..n {
            let dot: Complex64 = (0..x.len())
                .map(|c| h.get(row, k + 1 + c) * x[c])
                .sum();
            for c in 0..x.len() {
                let cur = h.get(row, k + 1 + c);
                h.set(row, k + 1 + c, cur - 2.0 * dot * x[c].conj());
            }
        }
        // enforce exact zeros below the subdiagonal
        h.set(k + 1, k, alpha);
        for i in k + 2..n {
            h.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
    h
}

/// Eigenvalues of the two-by-two complex matrix [[a, b], [c, d]].
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
    // pick the larger-magnitude branch for stability
    let l1 = if (tr + disc).norm() >= (tr - disc).norm() {
        (tr + disc) / 2.0
    } else {
        (tr - disc) / 2.0
    };
    let l2 = if l1.norm() > 0.0 { det / l1 } else { tr - l1 };
    (l1, l2)
}

fn wilkinson_shift(h: &DenseMatrix, hi: usize) -> Complex64 {
    let a = h.get(hi - 1, hi - 1);
    let b = h.get(hi - 1, hi);
    let c = h.get(hi, hi - 1);
    let d = h.get(hi, hi);
    let (l1, l2) = eig2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Givens rotation with `G [a; b] = [r; 0]`, `G = [[c, s], [-s*, c]]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let h = (an * an + bn * bn).sqrt();
    let c = an / h;
    let s = a * b.conj() / (an * h);
    (c, s)
}

/// One explicit shifted QR sweep on the decoupled block rows/cols [lo, hi].
fn qr_sweep(h: &mut DenseMatrix, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        let v = h.get(i, i);
        h.set(i, i, v - shift);
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h.get(k, k), h.get(k + 1, k));
        rotations.push((c, s));
        for col in k..=hi {
            let x = h.get(k, col);
            let y = h.get(k + 1, col);
            h.set(k, col, c * x + s * y);
            h.set(k + 1, col, -s.conj() * x + c * y);
        }
        h.set(k + 1, k, Complex64::new(0.0, 0.0));
    }
    // right-multiply by the adjoint rotations: R Q
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + idx;
        let top = (k + 1).min(hi);
        for row in lo..=top {
            let x = h.get(row, k);
            let y = h.get(row, k + 1);
            h.set(row, k, c * x + s.conj() * y);
            h.set(row, k + 1, -s * x + c * y);
        }
    }
    for i in lo..=hi {
        let v = h.get(i, i);
        h.set(i, i, v + shift);
    }
}

/// Shifted QR iteration with deflation on a Hessenberg matrix.
fn qr_eigenvalues(mut h: DenseMatrix) -> Result<Vec<Complex64>, EigenError> {
    let n = h.n();
    let max_sweeps = 40 * n;
    let mut sweeps = 0usize;
    let mut values = Vec::with_capacity(n);
    let mut high = n; // active region is rows/cols [0, high)
    let mut block_iters = 0usize;
    while high > 0 {
        // zero out negligible subdiagonals
        for i in 1..high {
            let s = h.get(i - 1, i - 1).norm() + h.get(i, i).norm();
            let s = if s == 0.0 { h.frobenius_norm() } else { s };
            if h.get(i, i - 1).norm() <= DEFLATION_TOL * s {
                h.set(i, i - 1, Complex64::new(0.0, 0.0));
            }
        }
        // trailing unreduced block [low, high)
        let mut low = high - 1;
        while low > 0 && h.get(low, low - 1).norm() != 0.0 {
            low -= 1;
        }
        if low == high - 1 {
            values.push(h.get(low, low));
            high -= 1;
            block_iters = 0;
            continue;
        }
        if low == high - 2 {
            let (l1, l2) = eig2(
                h.get(low, low),
                h.get(low, low + 1),
                h.get(low + 1, low),
                h.get(low + 1, low + 1),
            );
            values.push(l1);
            values.push(l2);
            high -= 2;
            block_iters = 0;
            continue;
        }
        sweeps += 1;
        block_iters += 1;
        if sweeps > max_sweeps {
            return Err(EigenError::NonConvergence { sweeps });
        }
        let shift = if block_iters % 12 == 0 {
            // exceptional shift to break stagnation cycles
            let extra = h.get(high - 1, high - 2).norm()
                + if high >= 3 {
                    h.get(high - 2, high - 3).norm()
                } else {
                    0.0
                };
            h.get(high - 1, high - 1) + Complex64::new(extra, 0.0)
        } else {
            wilkinson_shift(&h, high - 1)
        };
        qr_sweep(&mut h, low, high - 1, shift);
    }
    Ok(values)
}

/// LU factorization with partial pivoting; near-zero pivots are bumped so
/// that inverse iteration can factor an intentionally singular shift.
fn lu_factor(mut m: DenseMatrix) -> (DenseMatrix, Vec<usize>) {
    let n = m.n();
    let scale = m.frobenius_norm().max(1e-300);
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (pivot_row, pivot_mag) = (k..n)
            .map(|i| (i, m.get(i, k).norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if pivot_row != k {
            perm.swap(k, pivot_row);
            for j in 0..n {
                let a = m.get(k, j);
                let b = m.get(pivot_row, j);
                m.set(k, j, b);
                m.set(pivot_row, j, a);
            }
        }
        // genuinely singular shifts are expected during inverse iteration;
        // only an (almost) exact zero pivot needs a nudge to stay finite
        if pivot_mag < 1e-30 * scale {
            m.set(k, k, Complex64::new(1e-30 * scale, 0.0));
        }
        let pivot = m.get(k, k);
        for i in k + 1..n {
            let factor = m.get(i, k) / pivot;
            m.set(i, k, factor);
            for j in k + 1..n {
                let cur = m.get(i, j);
                m.set(i, j, cur - factor * m.get(k, j));
            }
        }
    }
    (m, perm)
}

fn lu_solve(lu: &DenseMatrix, perm: &[usize], b: &[Complex64]) -> Vec<Complex64> {
    let n = lu.n();
    let mut y: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            let yj = y[j];
            y[i] -= lu.get(i, j) * yj;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let yj = y[j];
            y[i] -= lu.get(i, j) * yj;
        }
        y[i] /= lu.get(i, i);
    }
    y
}

/// Inverse iteration at a slightly perturbed shift.
fn inverse_iteration(m: &DenseMatrix, lambda: Complex64) -> Vec<Complex64> {
    let n = m.n();
    let delta = 1e-10 * (1.0 + lambda.norm());
    let shifted = m.plus_scaled_identity(-(lambda + Complex64::new(delta, 0.0)));
    let (lu, perm) = lu_factor(shifted);
    // deterministic start vector with nonuniform entries
    let mut v: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(1.0 + 0.1 * k as f64, 0.3 - 0.05 * k as f64))
        .collect();
    normalize(&mut v);
    for _ in 0..4 {
        let mut next = lu_solve(&lu, &perm, &v);
        normalize(&mut next);
        v = next;
    }
    // fix the overall phase: largest entry real positive
    let (idx, _) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .unwrap();
    let phase = v[idx] / v[idx].norm();
    for c in &mut v {
        *c /= phase;
    }
    v
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for c in v.iter_mut() {
            *c /= norm;
        }
    }
}

/// Numerical rank by Gaussian elimination with complete pivoting.
fn rank(m: &DenseMatrix, tol: f64) -> usize {
    let n = m.n();
    let mut a = m.clone();
    let mut rank = 0;
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut best = (k, k, 0.0f64);
        for (ri, &r) in rows.iter().enumerate().skip(k) {
            for (ci, &c) in cols.iter().enumerate().skip(k) {
                let mag = a.get(r, c).norm();
                if mag > best.2 {
                    best = (ri, ci, mag);
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        rank += 1;
        rows.swap(k, best.0);
        cols.swap(k, best.1);
        let (pr, pc) = (rows[k], cols[k]);
        let pivot = a.get(pr, pc);
        for &r in rows.iter().skip(k + 1) {
            let factor = a.get(r, pc) / pivot;
            for &c in cols.iter().skip(k) {
                let cur = a.get(r, c);
                a.set(r, c, cur - factor * a.get(pr, c));
            }
        }
    }
    rank
}

/// Horner evaluation of a low-first polynomial and its derivative.
fn polyval_and_deriv(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth simultaneous root iteration for a monic polynomial (low-first
/// coefficients, leading coefficient 1).
fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>, EigenError> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let max_coeff = coeffs
        .iter()
        .take(n)
        .map(|c| c.norm())
        .fold(0.0f64, f64::max);
    let radius = 1.0 + max_coeff;
    let center = -coeffs[n - 1] / n as f64;
    // deterministically perturbed circle of initial guesses
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.43;
            let r = radius * (0.55 + 0.1 * ((k * 7 % 5) as f64) / 5.0);
            center + Complex64::new(r * theta.cos(), r * theta.sin())
        })
        .collect();
    const MAX_ITERS: usize = 500;
    for _ in 0..MAX_ITERS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = polyval_and_deriv(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let dp = if dp.norm() < 1e-300 {
                Complex64::new(1e-300, 0.0)
            } else {
                dp
            };
            let w = p / dp;
            let mut repel = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 1e-300 {
                        repel += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * repel;
            let step = if denom.norm() < 1e-300 { w } else { w / denom };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step <= 1e-14 {
            break;
        }
    }
    // success criterion: every residual small relative to the coefficients
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    for &root in &z {
        let (p, _) = polyval_and_deriv(coeffs, root);
        if p.norm() > 1e-8 * scale {
            return Err(EigenError::RootsNonConvergence {
                iterations: MAX_ITERS,
            });
        }
    }
    Ok(z)
}

/// Greedy optimal matching distance between two complex multisets.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut remaining: Vec<Complex64> = b.to_vec();
    let mut worst = 0.0f64;
    for &x in a {
        let (idx, dist) = remaining
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .expect("non-empty");
        remaining.swap_remove(idx);
        worst = worst.max(dist);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let r: f64 = rng.gen_range(-1.0..1.0);
                let im: f64 = rng.gen_range(-1.0..1.0);
                m.set(i, j, c(r, im));
            }
        }
        m
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let m = DenseMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0)],
        ])
        .unwrap();
        let report = eigen_with_vectors(&m).unwrap();
        let expected = vec![c(-3.0, 0.0), c(0.0, 2.0), c(1.0, 0.0)];
        assert!(multiset_distance(&report.values, &expected) < 1e-12);
        assert!(report.max_residual < 1e-12);
    }

    #[test]
    fn nilpotent_jordan_block() {
        let m = DenseMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let report = eigen_with_vectors(&m).unwrap();
        assert!(report.values.iter().all(|v| v.norm() < 1e-12));
        assert_eq!(report.geometric_multiplicities.unwrap(), vec![1, 1]);
    }

    #[test]
    fn random_cross_oracle_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_matrix(&mut rng, 6);
        let qr = eigenvalues(&m).unwrap().values;
        let roots = charpoly_roots(&m).unwrap();
        assert!(multiset_distance(&qr, &roots) < 1e-8);
    }

    #[test]
    fn charpoly_of_defective_block() {
        // [[B/2, 0], [2i, B/2]] with B = 4: p(l) = (l - 2)^2
        let m = DenseMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 2.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let p = charpoly(&m).unwrap();
        assert!((p[0] - c(4.0, 0.0)).norm() < 1e-12);
        assert!((p[1] - c(-4.0, 0.0)).norm() < 1e-12);
        assert!((p[2] - c(1.0, 0.0)).norm() < 1e-12);
        let roots = charpoly_roots(&m).unwrap();
        for r in roots {
            assert!((r - c(2.0, 0.0)).norm() < 1e-6, "double root at 2, got {r}");
        }
    }

    #[test]
    fn charpoly_roots_cube_roots_of_16() {
        // quartic j=1 block at B=0: p(l) = l^3 - 16
        let m = DenseMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0)],
            vec![c(0.0, 4.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let p = charpoly(&m).unwrap();
        assert!((p[0] - c(-16.0, 0.0)).norm() < 1e-12);
        assert!(p[1].norm() < 1e-12 && p[2].norm() < 1e-12);
        let roots = charpoly_roots(&m).unwrap();
        let r = 16f64.powf(1.0 / 3.0);
        let expected = vec![
            c(r, 0.0),
            c(r * (-0.5), r * 0.75f64.sqrt()),
            c(r * (-0.5), -(r * 0.75f64.sqrt())),
        ];
        assert!(multiset_distance(&roots, &expected) < 1e-9);
    }

    #[test]
    fn charpoly_roots_one_by_one() {
        let m = DenseMatrix::from_rows(vec![vec![c(0.7, -0.3)]]).unwrap();
        let roots = charpoly_roots(&m).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - c(0.7, -0.3)).norm() < 1e-12);
    }

    #[test]
    fn multiset_agreement_on_random_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..100 {
            let n = 2 + trial % 11;
            let m = random_matrix(&mut rng, n);
            let qr = eigenvalues(&m).unwrap().values;
            let roots = charpoly_roots(&m).unwrap();
            assert!(
                multiset_distance(&qr, &roots) < 1e-8,
                "disagreement at trial {trial} (n = {n})"
            );
        }
    }

    #[test]
    fn trace_and_determinant_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(2..9);
            let m = random_matrix(&mut rng, n);
            let values = eigenvalues(&m).unwrap().values;
            let sum: Complex64 = values.iter().sum();
            let tr = m.trace();
            assert!((sum - tr).norm() <= 1e-9 * tr.norm().max(1.0));
            let prod: Complex64 = values.iter().product();
            let p = charpoly(&m).unwrap();
            let det = p[0] * if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((prod - det).norm() <= 1e-9 * det.norm().max(1.0));
        }
    }

    #[test]
    fn similarity_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let n = rng.gen_range(2..7);
            let m = random_matrix(&mut rng, n);
            // well-conditioned P: identity plus a small random perturbation
            let mut p = DenseMatrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    let cur = p.get(i, j);
                    p.set(
                        i,
                        j,
                        cur + c(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)),
                    );
                }
            }
            let (lu, perm) = lu_factor(p.clone());
            // P^{-1} M P column by column
            let mp = m.matmul(&p);
            let mut sim = DenseMatrix::zeros(n);
            for col in 0..n {
                let b: Vec<Complex64> = (0..n).map(|r| mp.get(r, col)).collect();
                let x = lu_solve(&lu, &perm, &b);
                for r in 0..n {
                    sim.set(r, col, x[r]);
                }
            }
            let ev_m = eigenvalues(&m).unwrap().values;
            let ev_s = eigenvalues(&sim).unwrap().values;
            assert!(multiset_distance(&ev_m, &ev_s) < 1e-8);
        }
    }

    #[test]
    fn real_charpoly_implies_conjugate_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(2..8);
            // real random matrix: characteristic polynomial has real coefficients
            let mut m = DenseMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, c(rng.gen_range(-1.0..1.0), 0.0));
                }
            }
            let values = eigenvalues(&m).unwrap().values;
            let conj: Vec<Complex64> = values.iter().map(|v| v.conj()).collect();
            assert!(multiset_distance(&values, &conj) < 1e-9);
        }
    }
}
