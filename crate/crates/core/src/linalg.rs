//! Dense complex linear algebra primitives.
//!
//! Everything downstream — states, channels, information bounds, measurement
//! statistics — is built on the small dense-matrix toolkit in this module:
//! Kronecker products, partial traces, a complex-Hermitian Jacobi
//! eigensolver, unitary and general matrix exponentials, the α-conjugation
//! integral `∫₀¹ e^{iαH} X e^{-iαH} dα`, central differences, and Bures
//! fidelity.
//!
//! Matrices are square, dense, row-major `Vec<Complex64>`. The sizes this
//! crate targets (2×2 up to a few hundred) make hand-rolled kernels both
//! simpler and faster than pulling in a general-purpose BLAS stack.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::DensityMatrix;
use crate::tol;

/// Shorthand for a real-valued complex scalar.
#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Shorthand for a purely imaginary complex scalar.
#[inline]
pub fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Square dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, re(1.0));
        }
        m
    }

    /// Build from a row-major element slice. Rejects non-finite entries and
    /// non-square data.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}×{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let m = Self { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Build from a closure over `(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Rank-one projector-like outer product `v w†` of two equal-length vectors.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        let dim = v.len();
        Self::from_fn(dim, |i, j| v[i] * w[j].conj())
    }

    fn check_finite(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self.get(i, j);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Matrix dimension (matrices are square).
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Raw row-major entries.
    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    /// Entry-wise difference.
    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-abs residual of `self - self†` (0 for exactly Hermitian input).
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let r = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(r);
            }
        }
        worst
    }

    /// Errors unless `self` is Hermitian within the crate-wide gate.
    pub fn require_hermitian(&self) -> Result<()> {
        let residual = self.hermiticity_residual();
        if residual > tol::HERMITICITY {
            return Err(Error::NotHermitian {
                residual,
                tolerance: tol::HERMITICITY,
            });
        }
        Ok(())
    }

    /// Apply `self` to a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(self.dim, v.len());
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }
}

/// Rectangular dense complex matrix, row-major. Used where genuinely
/// non-square shapes arise (isometries into a dilated space); everything
/// else in the crate stays on the square [`ComplexMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct RectMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl RectMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_square(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.dim(),
            cols: m.dim(),
            data: m.data().to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "({}×{}) · ({}×{})",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    /// Reinterpret as a square matrix (errors when rows ≠ cols).
    pub fn into_square(self) -> Result<ComplexMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} matrix is not square",
                self.rows, self.cols
            )));
        }
        ComplexMatrix::from_row_major(self.rows, self.data)
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// a unitary matrix whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix of eigenvector columns, same order as `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermEig {
    /// Reassemble `V f(Λ) V†` for a scalar function of the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk.norm_sqr() == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v.get(i, k) * fk;
                for j in 0..n {
                    let z = vik * v.get(j, k).conj();
                    let cur = out.get(i, j);
                    out.set(i, j, cur + z);
                }
            }
        }
        out
    }
}

/// Kronecker product `a ⊗ b`.
///
/// The result dimension is capped: the brute-force paths that need large
/// tensor products (system ⊗ bath) are desk-scale by design, and blowing the
/// cap is an explicit error rather than a silent OOM.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da.checked_mul(db).unwrap_or(usize::MAX);
    if dim > tol::KRON_DIM_CAP {
        return Err(Error::CapExceeded(format!(
            "kron result dimension {dim} exceeds cap {}",
            tol::KRON_DIM_CAP
        )));
    }
    let mut out = ComplexMatrix::zeros(dim);
    for ia in 0..da {
        for ja in 0..da {
            let aij = a.get(ia, ja);
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    out.set(ia * db + ib, ja * db + jb, aij * b.get(ib, jb));
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::identity(1);
    for f in factors {
        out = kron(&out, f)?;
    }
    Ok(out)
}

/// Partial trace over the factors *not* listed in `keep`.
///
/// `dims` is the tensor factorization of the input (product must equal the
/// matrix dimension); `keep` lists the factor indices retained, and the
/// result is ordered by ascending kept index. The trace is preserved exactly
/// (it is a plain re-indexed sum).
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if total != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "factor dims {:?} give total {total}, matrix has dim {}",
            dims,
            m.dim()
        )));
    }
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.is_empty() || keep_sorted.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "keep set {:?} invalid for {} factors",
            keep,
            dims.len()
        )));
    }

    let n = dims.len();
    let kept_dim: usize = keep_sorted.iter().map(|&k| dims[k]).product();
    let traced: Vec<usize> = (0..n).filter(|i| !keep_sorted.contains(i)).collect();
    let traced_dim: usize = traced.iter().map(|&t| dims[t]).product();

    // Strides of each factor in the flat index (row-major tensor order).
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    let flat = |kept_idx: &[usize], traced_idx: &[usize]| -> usize {
        let mut f = 0;
        for (pos, &fac) in keep_sorted.iter().enumerate() {
            f += kept_idx[pos] * strides[fac];
        }
        for (pos, &fac) in traced.iter().enumerate() {
            f += traced_idx[pos] * strides[fac];
        }
        f
    };

    // Enumerate multi-indices of the kept and traced subsystems.
    let unrank = |mut r: usize, facs: &[usize]| -> Vec<usize> {
        let mut idx = vec![0usize; facs.len()];
        for pos in (0..facs.len()).rev() {
            let d = dims[facs[pos]];
            idx[pos] = r % d;
            r /= d;
        }
        idx
    };

    let mut out = ComplexMatrix::zeros(kept_dim);
    for rk in 0..kept_dim {
        let ridx = unrank(rk, &keep_sorted);
        for ck in 0..kept_dim {
            let cidx = unrank(ck, &keep_sorted);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..traced_dim {
                let tidx = unrank(t, &traced);
                acc += m.get(flat(&ridx, &tidx), flat(&cidx, &tidx));
            }
            out.set(rk, ck, acc);
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix via cyclic complex Jacobi
/// rotations.
///
/// Rejects non-Hermitian input (gate `tol::HERMITICITY`). Converges
/// quadratically once off-diagonal mass is small; the dimensions used in
/// this crate (≤ a few hundred) finish in a handful of sweeps.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermEig> {
    m.require_hermitian()?;
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let max_sweeps = 60;
    let mut converged = off(&a) <= tol::JACOBI_OFF_DIAG * scale;
    for _ in 0..max_sweeps {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a.get(p, q);
                let gn = g.norm();
                if gn <= f64::MIN_POSITIVE {
                    continue;
                }
                // Phase that makes the pivot real, then a real Jacobi angle.
                let phase = g / gn; // e^{iφ}
                let alpha = a.get(p, p).re;
                let beta = a.get(q, q).re;
                let tau = (beta - alpha) / (2.0 * gn);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Column update: A ← A R with
                //   R[p,p]=c, R[q,p]=-s·conj(phase), R[p,q]=s·phase, R[q,q]=c.
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * re(c) - aiq * re(s) * phase.conj());
                    a.set(i, q, aip * re(s) * phase + aiq * re(c));
                }
                // Row update: A ← R† A.
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * re(c) - aqj * re(s) * phase);
                    a.set(q, j, apj * re(s) * phase.conj() + aqj * re(c));
                }
                // Accumulate eigenvectors: V ← V R.
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * re(c) - viq * re(s) * phase.conj());
                    v.set(i, q, vip * re(s) * phase + viq * re(c));
                }
            }
        }
        converged = off(&a) <= tol::JACOBI_OFF_DIAG * scale;
    }
    if !converged {
        return Err(Error::Numerical(
            "Jacobi eigensolver failed to converge".into(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v.get(i, order[j]));
    Ok(HermEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Unitary exponential `e^{-iH}` of a Hermitian matrix, via
/// eigendecomposition.
pub fn unitary_exp(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(h)?;
    Ok(eig.map(|lam| Complex64::new(0.0, -lam).exp()))
}

/// General (not necessarily Hermitian) matrix exponential via Taylor series
/// with scaling-and-squaring.
///
/// Used for derivative evaluations through block-augmented exponentials,
/// where the argument is small and not Hermitian.
pub fn matrix_exp(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let norm = m.max_abs() * n as f64;
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let t = m.scale(re(1.0 / f64::from(1u32 << s.min(52))));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..200 {
        term = term.mul(&t).scale(re(1.0 / k as f64));
        sum = sum.add(&term);
        if term.max_abs() < 1e-20 {
            break;
        }
    }
    for _ in 0..s {
        sum = sum.mul(&sum);
    }
    sum
}

/// α-conjugation integral `∫₀¹ e^{iαH} X e^{-iαH} dα` for Hermitian `H`.
///
/// In the eigenbasis of `H` with gaps `d = λ_m − λ_n`, each element of the
/// transformed `X` is scaled by the filter `φ(d) = (e^{id} − 1)/(id)`,
/// with the series `1 + id/2 − d²/6` for `|d| < 1e-8` to avoid cancellation.
pub fn alpha_conjugation_integral(
    h: &ComplexMatrix,
    x: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if h.dim() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dim(h) = {} vs dim(x) = {}",
            h.dim(),
            x.dim()
        )));
    }
    let eig = herm_eig(h)?;
    let n = h.dim();
    let v = &eig.eigenvectors;
    let vt = v.adjoint();
    let xt = vt.mul(x).mul(v);

    let phi = |d: f64| -> Complex64 {
        if d.abs() < 1e-8 {
            Complex64::new(1.0 - d * d / 6.0, d / 2.0)
        } else {
            (Complex64::new(0.0, d).exp() - re(1.0)) / Complex64::new(0.0, d)
        }
    };

    let mut filtered = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let d = eig.eigenvalues[i] - eig.eigenvalues[j];
            filtered.set(i, j, xt.get(i, j) * phi(d));
        }
    }
    Ok(v.mul(&filtered).mul(&vt))
}

/// Central difference `(f(θ + h·e_k) − f(θ − h·e_k)) / 2h` of a
/// matrix-valued function.
pub fn central_diff(
    f: impl Fn(&[f64]) -> Result<ComplexMatrix>,
    theta: &[f64],
    k: usize,
    h: f64,
) -> Result<ComplexMatrix> {
    if h <= 0.0 {
        return Err(Error::Precondition(format!(
            "central difference step must be positive, got {h}"
        )));
    }
    let mut plus = theta.to_vec();
    let mut minus = theta.to_vec();
    plus[k] += h;
    minus[k] -= h;
    let fp = f(&plus)?;
    let fm = f(&minus)?;
    Ok(fp.sub(&fm).scale(re(0.5 / h)))
}

/// Positive-semidefinite square root via eigendecomposition, clamping
/// roundoff-negative eigenvalues in `[-1e-9, 0)` to zero.
pub(crate) fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(m)?;
    for &lam in &eig.eigenvalues {
        if lam < tol::SQRT_EIG_FLOOR {
            return Err(Error::Numerical(format!(
                "matrix square root of indefinite input: eigenvalue {lam:.3e}"
            )));
        }
    }
    Ok(eig.map(|lam| re(lam.max(0.0).sqrt())))
}

/// Bures fidelity `F(ρ₁, ρ₂) = Tr √(√ρ₁ ρ₂ √ρ₁)`, in `[0, 1]`.
///
/// The inner square root is evaluated by eigendecomposition with the same
/// roundoff clamp as [`psd_sqrt`]; a fidelity above `1 + 1e-9` is reported
/// as a numerical pathology rather than silently clipped.
///
/// Eigenvalues of the inner matrix below `1e-12 · λ_max` are dropped
/// before the square root: for low-rank states the nominally zero
/// eigenvalues come out of the solver as ±O(machine-ε) junk whose square
/// roots would each inject a systematic ~1e-8 bias into F. The floor
/// trades that for a ≤ d·1e-6·√λ_max worst-case underestimate when a
/// genuine eigenvalue sits just below the cut.
pub fn bures_fidelity(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of dim {} vs dim {}",
            r1.dim(),
            r2.dim()
        )));
    }
    let s1 = psd_sqrt(r1.matrix())?;
    let inner = s1.mul(r2.matrix()).mul(&s1);
    let eig = herm_eig(&inner)?;
    let lam_max = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &lam| acc.max(lam));
    let floor = lam_max * 1e-12;
    let mut f = 0.0;
    for &lam in &eig.eigenvalues {
        if lam < tol::SQRT_EIG_FLOOR {
            return Err(Error::Numerical(format!(
                "fidelity inner matrix has eigenvalue {lam:.3e}"
            )));
        }
        if lam > floor {
            f += lam.sqrt();
        }
    }
    if f > 1.0 + 1e-9 {
        return Err(Error::Numerical(format!("fidelity {f} exceeds 1")));
    }
    Ok(f.min(1.0))
}

/// Single-qubit Pauli matrices `(σ₁, σ₂, σ₃)` and the 2×2 identity.
pub mod pauli {
    use super::{re, ComplexMatrix};
    use num_complex::Complex64;

    /// σ₁ (bit flip).
    pub fn sx() -> ComplexMatrix {
        ComplexMatrix::from_row_major(
            2,
            vec![re(0.0), re(1.0), re(1.0), re(0.0)],
        )
        .expect("static matrix")
    }

    /// σ₂.
    pub fn sy() -> ComplexMatrix {
        ComplexMatrix::from_row_major(
            2,
            vec![
                re(0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                re(0.0),
            ],
        )
        .expect("static matrix")
    }

    /// σ₃ (|0⟩ is the +1 eigenvector).
    pub fn sz() -> ComplexMatrix {
        ComplexMatrix::from_row_major(
            2,
            vec![re(1.0), re(0.0), re(0.0), re(-1.0)],
        )
        .expect("static matrix")
    }

    /// All three Paulis in index order 1, 2, 3.
    pub fn all() -> [ComplexMatrix; 3] {
        [sx(), sy(), sz()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::DensityMatrix;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn kron_identity_factors() {
        let i2 = ComplexMatrix::identity(2);
        let k = kron(&i2, &i2).unwrap();
        assert_eq!(k, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_diagonal_paulis() {
        let k = kron(&pauli::sz(), &pauli::sz()).unwrap();
        let expect = [1.0, -1.0, -1.0, 1.0];
        for (i, &e) in expect.iter().enumerate() {
            assert_close(k.get(i, i).re, e, 1e-15);
            assert_close(k.get(i, i).im, 0.0, 1e-15);
        }
    }

    #[test]
    fn kron_bit_flips_map_00_to_11() {
        let k = kron(&pauli::sx(), &pauli::sx()).unwrap();
        let v00 = [re(1.0), re(0.0), re(0.0), re(0.0)];
        let out = k.apply(&v00);
        assert_close(out[3].re, 1.0, 1e-15);
        assert_close(out[0].norm() + out[1].norm() + out[2].norm(), 0.0, 1e-15);
    }

    #[test]
    fn kron_rejects_oversized_result() {
        let big = ComplexMatrix::identity(1 << 7);
        let bigger = ComplexMatrix::identity(1 << 7);
        assert!(matches!(
            kron(&big, &bigger),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn partial_trace_bell_marginal_is_maximally_mixed() {
        let inv = 1.0 / 2f64.sqrt();
        let bell = [re(inv), re(0.0), re(0.0), re(inv)];
        let rho = ComplexMatrix::outer(&bell, &bell);
        let m = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 0.5 } else { 0.0 };
                assert_close(m.get(i, j).re, want, 1e-14);
                assert_close(m.get(i, j).im, 0.0, 1e-14);
            }
        }
    }

    #[test]
    fn partial_trace_product_factor_recovers_left_state() {
        // ρ_a ⊗ ρ_b with distinct factors; tracing out b returns ρ_a exactly.
        let a = ComplexMatrix::from_row_major(
            2,
            vec![
                re(0.7),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.1, -0.2),
                re(0.3),
            ],
        )
        .unwrap();
        let b = ComplexMatrix::from_row_major(
            2,
            vec![re(0.4), re(0.0), re(0.0), re(0.6)],
        )
        .unwrap();
        let prod = kron(&a, &b).unwrap();
        let back = partial_trace(&prod, &[2, 2], &[0]).unwrap();
        assert!(back.sub(&a).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let m = ComplexMatrix::from_fn(8, |i, j| {
            Complex64::new((i * 3 + j) as f64 * 0.01, (i as f64 - j as f64) * 0.02)
        });
        let t = partial_trace(&m, &[2, 2, 2], &[1]).unwrap();
        assert!((t.trace() - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn herm_eig_sz() {
        let eig = herm_eig(&pauli::sz()).unwrap();
        assert_close(eig.eigenvalues[0], -1.0, 1e-14);
        assert_close(eig.eigenvalues[1], 1.0, 1e-14);
    }

    #[test]
    fn herm_eig_sx_eigenvectors() {
        let eig = herm_eig(&pauli::sx()).unwrap();
        assert_close(eig.eigenvalues[0], -1.0, 1e-14);
        assert_close(eig.eigenvalues[1], 1.0, 1e-14);
        // +1 eigenvector is (|0⟩+|1⟩)/√2 up to phase.
        let v = &eig.eigenvectors;
        let ratio = v.get(0, 1) / v.get(1, 1);
        assert_close(ratio.re, 1.0, 1e-12);
        assert_close(ratio.im, 0.0, 1e-12);
    }

    #[test]
    fn herm_eig_reconstructs_random_hermitian() {
        // Deterministic pseudo-random Hermitian 8×8.
        let mut seed = 0x243F6A8885A308D3u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = 8;
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let z = if i == j {
                    re(next())
                } else {
                    Complex64::new(next(), next())
                };
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        let eig = herm_eig(&m).unwrap();
        let recon = eig.map(re);
        assert!(recon.sub(&m).max_abs() < 1e-10);
        let vtv = eig.eigenvectors.adjoint().mul(&eig.eigenvectors);
        assert!(vtv.sub(&ComplexMatrix::identity(n)).max_abs() < 1e-10);
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 1, re(1.0));
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn unitary_exp_zero_is_identity() {
        let u = unitary_exp(&ComplexMatrix::zeros(3)).unwrap();
        assert!(u.sub(&ComplexMatrix::identity(3)).max_abs() < 1e-14);
    }

    #[test]
    fn unitary_exp_diagonal_phase() {
        let h = pauli::sz().scale(re(std::f64::consts::FRAC_PI_2));
        let u = unitary_exp(&h).unwrap();
        let expect_00 = Complex64::new(0.0, -std::f64::consts::FRAC_PI_2).exp();
        assert!((u.get(0, 0) - expect_00).norm() < 1e-14);
        assert!((u.get(1, 1) - expect_00.conj()).norm() < 1e-14);
    }

    #[test]
    fn unitary_exp_pauli_rotation_closed_form() {
        // e^{-i(π/4)σ₁} = cos(π/4)·I − i sin(π/4)·σ₁, cross-checked against
        // direct series summation.
        let ang = std::f64::consts::FRAC_PI_4;
        let h = pauli::sx().scale(re(ang));
        let u = unitary_exp(&h).unwrap();
        let closed = ComplexMatrix::identity(2)
            .scale(re(ang.cos()))
            .add(&pauli::sx().scale(im(-ang.sin())));
        assert!(u.sub(&closed).max_abs() < 1e-13);
        let series = matrix_exp(&h.scale(im(-1.0)));
        assert!(u.sub(&series).max_abs() < 1e-13);
    }

    #[test]
    fn unitary_exp_output_is_unitary() {
        let h = pauli::sy().scale(re(0.773)).add(&pauli::sz().scale(re(0.31)));
        let u = unitary_exp(&h).unwrap();
        let utu = u.adjoint().mul(&u);
        assert!(utu.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-10);
    }

    #[test]
    fn alpha_integral_commuting_input_unchanged() {
        let out = alpha_conjugation_integral(&pauli::sz(), &pauli::sz()).unwrap();
        assert!(out.sub(&pauli::sz()).max_abs() < 1e-13);
    }

    #[test]
    fn alpha_integral_zero_hamiltonian_is_identity_map() {
        let x = pauli::sy();
        let out = alpha_conjugation_integral(&ComplexMatrix::zeros(2), &x).unwrap();
        assert!(out.sub(&x).max_abs() < 1e-14);
    }

    #[test]
    fn alpha_integral_matches_quadrature() {
        // h = ξσ₃, x = σ₁, ξ = π/2: compare against a 10⁴-step Riemann sum.
        let xi = std::f64::consts::FRAC_PI_2;
        let h = pauli::sz().scale(re(xi));
        let x = pauli::sx();
        let filt = alpha_conjugation_integral(&h, &x).unwrap();

        let steps = 10_000;
        let mut acc = ComplexMatrix::zeros(2);
        for i in 0..steps {
            let a = (i as f64 + 0.5) / steps as f64;
            let e = unitary_exp(&h.scale(re(-a))).unwrap(); // e^{+iαh}
            let term = e.mul(&x).mul(&e.adjoint());
            acc = acc.add(&term);
        }
        acc = acc.scale(re(1.0 / steps as f64));
        assert!(filt.sub(&acc).max_abs() < 1e-6);
    }

    #[test]
    fn alpha_integral_preserves_trace() {
        let h = pauli::sx().scale(re(0.83)).add(&pauli::sz().scale(re(0.41)));
        let x = pauli::sy().scale(re(0.7)).add(&ComplexMatrix::identity(2).scale(re(0.3)));
        let out = alpha_conjugation_integral(&h, &x).unwrap();
        assert!((out.trace() - x.trace()).norm() < 1e-10);
    }

    #[test]
    fn central_diff_constant_is_zero() {
        let f = |_: &[f64]| Ok(ComplexMatrix::identity(2));
        let d = central_diff(f, &[0.3], 0, 1e-5).unwrap();
        assert!(d.max_abs() < 1e-12);
    }

    #[test]
    fn central_diff_unitary_generator() {
        let f = |t: &[f64]| unitary_exp(&pauli::sz().scale(re(t[0])));
        let d = central_diff(f, &[0.0], 0, 1e-5).unwrap();
        let expect = pauli::sz().scale(im(-1.0));
        assert!(d.sub(&expect).max_abs() < 1e-9);
    }

    #[test]
    fn central_diff_polynomial() {
        let f = |t: &[f64]| Ok(ComplexMatrix::identity(2).scale(re(t[0] * t[0])));
        let d = central_diff(f, &[1.0], 0, 1e-5).unwrap();
        assert!(d.sub(&ComplexMatrix::identity(2).scale(re(2.0))).max_abs() < 1e-9);
    }

    #[test]
    fn fidelity_self_is_one() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert_close(bures_fidelity(&rho, &rho).unwrap(), 1.0, 1e-10);
    }

    #[test]
    fn fidelity_orthogonal_pure_states_is_zero() {
        let zero = DensityMatrix::from_amplitudes(&[re(1.0), re(0.0)]).unwrap();
        let one = DensityMatrix::from_amplitudes(&[re(0.0), re(1.0)]).unwrap();
        assert_close(bures_fidelity(&zero, &one).unwrap(), 0.0, 1e-10);
    }

    #[test]
    fn fidelity_mixed_vs_pure_closed_form() {
        let mixed = DensityMatrix::maximally_mixed(2);
        let zero = DensityMatrix::from_amplitudes(&[re(1.0), re(0.0)]).unwrap();
        assert_close(
            bures_fidelity(&mixed, &zero).unwrap(),
            1.0 / 2f64.sqrt(),
            1e-12,
        );
    }

    #[test]
    fn fidelity_symmetric() {
        let a = DensityMatrix::new(
            ComplexMatrix::from_row_major(
                2,
                vec![
                    re(0.8),
                    Complex64::new(0.1, 0.05),
                    Complex64::new(0.1, -0.05),
                    re(0.2),
                ],
            )
            .unwrap(),
            vec![2],
        )
        .unwrap();
        let b = DensityMatrix::maximally_mixed(2);
        let f1 = bures_fidelity(&a, &b).unwrap();
        let f2 = bures_fidelity(&b, &a).unwrap();
        assert_close(f1, f2, 1e-8);
    }
}
