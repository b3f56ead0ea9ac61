//! Probe-state construction and interrogation.
//!
//! GHZ-type states along any Pauli axis, phase-adjustable superpositions of
//! the three of them, uniform local noise applied qubit-by-qubit, the
//! closed-form one- and two-particle marginals of locally noised GHZ states,
//! and permutation-invariance diagnostics.

use num_complex::Complex64;

use crate::channels::{kraus_image, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{self, re, ComplexMatrix};
use crate::tol;

/// Normalized pure state with an explicit tensor factorization.
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    factor_dims: Vec<usize>,
}

impl PureState {
    /// Validates unit norm (within `1e-10`) and that the factor dimensions
    /// multiply out to the amplitude count.
    pub fn new(amplitudes: Vec<Complex64>, factor_dims: Vec<usize>) -> Result<Self> {
        let total: usize = factor_dims.iter().product();
        if total != amplitudes.len() || factor_dims.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch(format!(
                "factor dims {:?} incompatible with {} amplitudes",
                factor_dims,
                amplitudes.len()
            )));
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm2.is_finite() || (norm2.sqrt() - 1.0).abs() > tol::UNIT_TRACE {
            return Err(Error::InvalidPureState(format!(
                "norm {} differs from 1",
                norm2.sqrt()
            )));
        }
        Ok(Self {
            amplitudes,
            factor_dims,
        })
    }

    /// Amplitude vector in the computational basis.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Tensor factorization of the Hilbert space.
    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Rank-one density matrix |ψ⟩⟨ψ|.
    pub fn projector(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(
            ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            self.factor_dims.clone(),
        )
    }
}

/// Density matrix with an explicit tensor factorization.
///
/// Construction validates Hermiticity (`1e-10`), unit trace (`1e-10`), and
/// an eigenvalue floor of `−1e-9`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    factor_dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, factor_dims: Vec<usize>) -> Result<Self> {
        let total: usize = factor_dims.iter().product();
        if total != matrix.dim() || factor_dims.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch(format!(
                "factor dims {:?} incompatible with matrix dim {}",
                factor_dims,
                matrix.dim()
            )));
        }
        matrix.require_hermitian().map_err(|e| {
            Error::InvalidDensityMatrix(format!("not Hermitian: {e}"))
        })?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::UNIT_TRACE || tr.im.abs() > tol::UNIT_TRACE {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {tr} differs from 1"
            )));
        }
        let min_eig = min_eigenvalue_bound(&matrix)?;
        if min_eig < tol::DENSITY_EIG_FLOOR {
            return Err(Error::InvalidDensityMatrix(format!(
                "eigenvalue {min_eig:.3e} below floor {:.0e}",
                tol::DENSITY_EIG_FLOOR
            )));
        }
        Ok(Self {
            matrix,
            factor_dims,
        })
    }

    /// Pure state from an amplitude vector (single tensor factor).
    pub fn from_amplitudes(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        PureState::new(amplitudes.to_vec(), vec![dim])?.projector()
    }

    /// The state I/d with a single tensor factor.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(re(1.0 / dim as f64)),
            factor_dims: vec![dim],
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Reinterpret the tensor factorization without touching the data.
    pub fn with_factor_dims(self, factor_dims: Vec<usize>) -> Result<Self> {
        let total: usize = factor_dims.iter().product();
        if total != self.matrix.dim() {
            return Err(Error::DimensionMismatch(format!(
                "factor dims {:?} incompatible with dim {}",
                factor_dims,
                self.matrix.dim()
            )));
        }
        Ok(Self {
            matrix: self.matrix,
            factor_dims,
        })
    }

    /// Unitary conjugation UρU†, revalidated.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(
            u.mul(&self.matrix).mul(&u.adjoint()),
            self.factor_dims.clone(),
        )
    }

    /// Marginal on the listed tensor factors (ascending order retained).
    pub fn marginal(&self, keep: &[usize]) -> Result<Self> {
        let m = linalg::partial_trace(&self.matrix, &self.factor_dims, keep)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let dims = keep_sorted.iter().map(|&k| self.factor_dims[k]).collect();
        Self::new(m, dims)
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }
}

/// Lower bound on the minimum eigenvalue of a Hermitian matrix.
///
/// Exact (Jacobi) for dimensions up to 128; beyond that a shifted power
/// iteration estimates the extreme eigenvalue — adequate as a validity
/// guardrail, where genuine violations are far from the floor.
fn min_eigenvalue_bound(m: &ComplexMatrix) -> Result<f64> {
    let n = m.dim();
    if n <= 128 {
        let eig = linalg::herm_eig(m)?;
        return Ok(eig.eigenvalues[0]);
    }
    m.require_hermitian()?;
    // Gershgorin upper bound for the spectral radius, then power-iterate
    // shift·I − m whose dominant eigenvalue is shift − λ_min.
    let mut shift = 0.0f64;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| m.get(i, j).norm()).sum();
        shift = shift.max(row);
    }
    let shifted = ComplexMatrix::identity(n).scale(re(shift)).sub(m);
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 / (i as f64 + 1.0), 0.3 / (i as f64 + 2.0)))
        .collect();
    let mut lam = 0.0;
    for _ in 0..300 {
        let w = shifted.apply(&v);
        let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(shift);
        }
        lam = norm;
        v = w.into_iter().map(|z| z / norm).collect();
    }
    Ok(shift - lam)
}

/// Pauli axis selector (1-, 2-, 3-axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    /// Axis from a 1-based index (1 ↦ X, 2 ↦ Y, 3 ↦ Z).
    pub fn from_one_based(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Self::X),
            2 => Ok(Self::Y),
            3 => Ok(Self::Z),
            _ => Err(Error::Precondition(format!(
                "Pauli axis index must be 1, 2, or 3, got {k}"
            ))),
        }
    }

    /// 0-based index.
    pub fn index(self) -> usize {
        match self {
            Self::X => 0,
            Self::Y => 1,
            Self::Z => 2,
        }
    }

    /// The Pauli matrix along this axis.
    pub fn matrix(self) -> ComplexMatrix {
        linalg::pauli::all()[self.index()].clone()
    }

    /// Normalized ±1 eigenvectors of the Pauli matrix along this axis, in
    /// the order (+, −).
    pub fn eigenvectors(self) -> ([Complex64; 2], [Complex64; 2]) {
        let inv = 1.0 / 2f64.sqrt();
        match self {
            Self::X => ([re(inv), re(inv)], [re(inv), re(-inv)]),
            Self::Y => (
                [re(inv), Complex64::new(0.0, inv)],
                [re(inv), Complex64::new(0.0, -inv)],
            ),
            Self::Z => ([re(1.0), re(0.0)], [re(0.0), re(1.0)]),
        }
    }
}

fn tensor_power(local: &[Complex64; 2], n: usize) -> Vec<Complex64> {
    let mut amps = vec![re(1.0)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(amps.len() * 2);
        for a in &amps {
            next.push(a * local[0]);
            next.push(a * local[1]);
        }
        amps = next;
    }
    amps
}

/// GHZ-type state `(|φ⁺⟩^⊗n + |φ⁻⟩^⊗n)/√2` along the given Pauli axis,
/// where |φ^±⟩ are the ±1 eigenvectors of that axis' Pauli matrix.
///
/// `n` is capped at 12 (dense 2^n amplitudes).
pub fn ghz_state(axis: PauliAxis, n: usize) -> Result<PureState> {
    if n == 0 || n > tol::GHZ_N_CAP {
        return Err(Error::CapExceeded(format!(
            "GHZ particle count {n} outside 1..={}",
            tol::GHZ_N_CAP
        )));
    }
    let (plus, minus) = axis.eigenvectors();
    let p = tensor_power(&plus, n);
    let m = tensor_power(&minus, n);
    let inv = re(1.0 / 2f64.sqrt());
    let amps: Vec<Complex64> = p
        .iter()
        .zip(&m)
        .map(|(a, b)| (a + b) * inv)
        .collect();
    PureState::new(amps, vec![2; n])
}

/// Normalized superposition `𝒩 Σ_k e^{iδ_k} |GHZ_k⟩` of the three GHZ
/// states along the X, Y, Z axes, with adjustable relative phases.
///
/// The normalization uses the actual overlaps of the three components;
/// destructive cancellation below norm 1e-8 is an error.
pub fn superposed_ghz(deltas: [f64; 3], n: usize) -> Result<PureState> {
    if n == 0 || n > tol::GHZ_N_CAP {
        return Err(Error::CapExceeded(format!(
            "GHZ particle count {n} outside 1..={}",
            tol::GHZ_N_CAP
        )));
    }
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (axis, delta) in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z]
        .into_iter()
        .zip(deltas)
    {
        let phase = Complex64::new(0.0, delta).exp();
        let ghz = ghz_state(axis, n)?;
        for (a, g) in amps.iter_mut().zip(ghz.amplitudes()) {
            *a += phase * g;
        }
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-8 {
        return Err(Error::InvalidPureState(format!(
            "superposition cancels (norm {norm:.3e})"
        )));
    }
    let inv = re(1.0 / norm);
    for a in &mut amps {
        *a *= inv;
    }
    PureState::new(amps, vec![2; n])
}

/// Apply a single-site Kraus map to one tensor factor of a density matrix,
/// by direct index arithmetic (no embedded big matrices).
fn apply_local_kraus(
    rho: &ComplexMatrix,
    factor_dims: &[usize],
    site: usize,
    ops: &[ComplexMatrix],
) -> ComplexMatrix {
    let dim = rho.dim();
    let d = factor_dims[site];
    // Stride of the site's digit in the flat index.
    let stride: usize = factor_dims[site + 1..].iter().product();
    let digit = |i: usize| (i / stride) % d;
    let with_digit = |i: usize, b: usize| i - digit(i) * stride + b * stride;

    let mut out = ComplexMatrix::zeros(dim);
    for e in ops {
        for i in 0..dim {
            let bi = digit(i);
            for j in 0..dim {
                let bj = digit(j);
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..d {
                    let eib = e.get(bi, b);
                    if eib.norm_sqr() == 0.0 {
                        continue;
                    }
                    let row = with_digit(i, b);
                    for bp in 0..d {
                        let ejb = e.get(bj, bp).conj();
                        if ejb.norm_sqr() == 0.0 {
                            continue;
                        }
                        acc += eib * ejb * rho.get(row, with_digit(j, bp));
                    }
                }
                let cur = out.get(i, j);
                out.set(i, j, cur + acc);
            }
        }
    }
    out
}

/// Apply the same single-site channel independently to every tensor factor.
///
/// Equivalent to summing all n-fold tensor combinations of the Kraus
/// operators. Capped at 10 factors (dense 2^n × 2^n output for qubits).
pub fn apply_uniform_local_channel(
    rho: &DensityMatrix,
    ch: &KrausChannel,
) -> Result<DensityMatrix> {
    let n = rho.factor_dims().len();
    if n > tol::UNIFORM_CHANNEL_N_CAP {
        return Err(Error::CapExceeded(format!(
            "uniform local channel on {n} factors exceeds cap {}",
            tol::UNIFORM_CHANNEL_N_CAP
        )));
    }
    ch.require_complete()?;
    let d = ch.dim();
    if rho.factor_dims().iter().any(|&f| f != d) {
        return Err(Error::DimensionMismatch(format!(
            "channel dim {d} does not match factor dims {:?}",
            rho.factor_dims()
        )));
    }
    let mut m = rho.matrix().clone();
    for site in 0..n {
        m = apply_local_kraus(&m, rho.factor_dims(), site, ch.kraus_ops());
    }
    DensityMatrix::new(m, rho.factor_dims().to_vec())
}

/// Closed-form one- and two-particle marginals of a GHZ state along `axis`
/// after the same single-qubit channel acts on every particle.
///
/// For a unital channel the marginals are `ρ¹ = I₂/2` exactly and
/// `ρ² = [I⊗I + m⊗m]/4` with `m = Σ_r E_r σ E_r†`; the general form
/// substitutes the channel image of I for the identity factors. The
/// two-particle form is the N ≥ 3 marginal: at N = 2 the full state keeps
/// coherences between the two GHZ branches that the marginal of any larger
/// chain loses, so the closed form does not apply there.
pub fn dephased_ghz_marginals(
    axis: PauliAxis,
    ch: &KrausChannel,
) -> Result<(DensityMatrix, DensityMatrix)> {
    if ch.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "single-qubit channel required, got dim {}",
            ch.dim()
        )));
    }
    ch.require_complete()?;
    let id_img = kraus_image(ch, &ComplexMatrix::identity(2));
    let m = kraus_image(ch, &axis.matrix());
    let rho1 = id_img.scale(re(0.5));
    let rho2 = linalg::kron(&id_img, &id_img)?
        .add(&linalg::kron(&m, &m)?)
        .scale(re(0.25));
    Ok((
        DensityMatrix::new(rho1, vec![2])?,
        DensityMatrix::new(rho2, vec![2, 2])?,
    ))
}

/// Equal mixture of the three axis marginals: `(1/3) Σ_k ρ_k^{[2]}`.
pub fn averaged_rdm2(ch: &KrausChannel) -> Result<DensityMatrix> {
    let mut acc = ComplexMatrix::zeros(4);
    for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
        let (_, rho2) = dephased_ghz_marginals(axis, ch)?;
        acc = acc.add(rho2.matrix());
    }
    DensityMatrix::new(acc.scale(re(1.0 / 3.0)), vec![2, 2])
}

/// Check invariance of a state under all adjacent-transposition swaps
/// (which generate the full symmetric group on the factors).
///
/// Returns the boolean verdict (residual < 1e-10) together with the max-abs
/// residual over generators.
pub fn is_permutationally_invariant(rho: &DensityMatrix) -> Result<(bool, f64)> {
    let dims = rho.factor_dims();
    let n = dims.len();
    if n < 2 {
        return Ok((true, 0.0));
    }
    let d = dims[0];
    if dims.iter().any(|&f| f != d) {
        return Err(Error::DimensionMismatch(format!(
            "permutation check requires equal factor dims, got {dims:?}"
        )));
    }
    let dim = rho.dim();
    let mut strides = vec![1usize; n];
    for i in (0..n - 1).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let mut worst = 0.0f64;
    for p in 0..n - 1 {
        let (sa, sb) = (strides[p], strides[p + 1]);
        let swap = |i: usize| -> usize {
            let da = (i / sa) % d;
            let db = (i / sb) % d;
            i - da * sa - db * sb + db * sa + da * sb
        };
        for i in 0..dim {
            for j in 0..dim {
                let r = (rho.matrix().get(swap(i), swap(j)) - rho.matrix().get(i, j)).norm();
                worst = worst.max(r);
            }
        }
    }
    Ok((worst < 1e-10, worst))
}
