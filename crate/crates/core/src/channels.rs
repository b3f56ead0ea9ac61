//! Parametrized quantum channels.
//!
//! Kraus evolution, validity and unitality diagnostics, Stinespring
//! dilation, exponential-family channels built from per-operator generator
//! splittings, per-particle product channels, and analytic Kraus-operator
//! derivatives with a finite-difference fallback.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, im, re, ComplexMatrix, RectMatrix};
use crate::states::DensityMatrix;
use crate::tol;

/// θ-independent generator matrices, indexed `(operator l, parameter k)`.
///
/// A plain unitary family uses a single operator slot: `H(θ) = Σ_k θ_k H_k`.
/// An exponential family of `L` Kraus operators holds one generator list per
/// operator: `Π_l(θ) = (1/√L)·e^{-i G_l(θ)}` with `G_l(θ) = Σ_k θ_k G_{lk}`.
///
/// Hermiticity of the generators is diagnosed and stored rather than
/// enforced: splitting a Hermitian operator into per-Kraus pieces generally
/// produces non-Hermitian parts, and the derivative machinery switches to a
/// block-exponential evaluation for those.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    gens: Vec<Vec<ComplexMatrix>>,
    hermitian: bool,
}

impl GeneratorSet {
    /// Generator list for a single unitary: requires Hermitian matrices.
    pub fn unitary(h_ks: Vec<ComplexMatrix>) -> Result<Self> {
        let set = Self::exponential_family(vec![h_ks])?;
        if !set.hermitian {
            return Err(Error::NotHermitian {
                residual: set.worst_hermiticity_residual(),
                tolerance: tol::HERMITICITY,
            });
        }
        Ok(set)
    }

    /// Per-operator generator lists `gens[l][k]`; all lists must agree in
    /// parameter count and matrix dimension.
    pub fn exponential_family(gens: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        if gens.is_empty() || gens[0].is_empty() {
            return Err(Error::Precondition(
                "generator set must have at least one operator and one parameter".into(),
            ));
        }
        let q = gens[0].len();
        let d = gens[0][0].dim();
        for row in &gens {
            if row.len() != q || row.iter().any(|g| g.dim() != d) {
                return Err(Error::DimensionMismatch(
                    "ragged generator set".into(),
                ));
            }
        }
        let hermitian = gens
            .iter()
            .flatten()
            .all(|g| g.hermiticity_residual() <= tol::HERMITICITY);
        Ok(Self { gens, hermitian })
    }

    fn worst_hermiticity_residual(&self) -> f64 {
        self.gens
            .iter()
            .flatten()
            .map(|g| g.hermiticity_residual())
            .fold(0.0, f64::max)
    }

    /// Number of Kraus operators the set describes.
    pub fn kraus_count(&self) -> usize {
        self.gens.len()
    }

    /// Number of parameters.
    pub fn param_count(&self) -> usize {
        self.gens[0].len()
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.gens[0][0].dim()
    }

    /// Whether every generator is Hermitian.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// The generator for operator `l`, parameter `k`.
    pub fn generator(&self, l: usize, k: usize) -> &ComplexMatrix {
        &self.gens[l][k]
    }

    /// `G_l(θ) = Σ_k θ_k G_{lk}`.
    pub fn assemble(&self, l: usize, theta: &[f64]) -> Result<ComplexMatrix> {
        if theta.len() != self.param_count() {
            return Err(Error::DimensionMismatch(format!(
                "θ has {} entries, generator set expects {}",
                theta.len(),
                self.param_count()
            )));
        }
        let mut g = ComplexMatrix::zeros(self.dim());
        for (k, &t) in theta.iter().enumerate() {
            g = g.add(&self.gens[l][k].scale(re(t)));
        }
        Ok(g)
    }
}

/// How a channel's Kraus operators depend on the parameter vector θ.
#[derive(Clone)]
pub enum Dependence {
    /// No θ dependence; derivatives vanish.
    Constant,
    /// `Π_l(θ) = (1/√L)·e^{-i Σ_k θ_k G_{lk}}`.
    ExponentialFamily(GeneratorSet),
    /// `Π_r(θ) = E_r · e^{-i Σ_k θ_k H_k}`: fixed noise operators composed
    /// after a parametrized unitary. A plain unitary family is the special
    /// case `E = {I}`.
    NoisyUnitary {
        noise: Vec<ComplexMatrix>,
        generators: GeneratorSet,
    },
    /// Tensor product of independent per-particle channels sharing θ.
    Product(Vec<KrausChannel>),
    /// Arbitrary user-supplied family, differentiated by central
    /// differences with the stored step.
    FiniteDifference {
        family: Arc<dyn Fn(&[f64]) -> Result<Vec<ComplexMatrix>> + Send + Sync>,
        step: f64,
    },
}

impl std::fmt::Debug for Dependence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Constant => write!(f, "Constant"),
            Self::ExponentialFamily(g) => f
                .debug_struct("ExponentialFamily")
                .field("kraus_count", &g.kraus_count())
                .field("param_count", &g.param_count())
                .finish(),
            Self::NoisyUnitary { noise, generators } => f
                .debug_struct("NoisyUnitary")
                .field("noise_count", &noise.len())
                .field("param_count", &generators.param_count())
                .finish(),
            Self::Product(fs) => f.debug_struct("Product").field("factors", &fs.len()).finish(),
            Self::FiniteDifference { step, .. } => f
                .debug_struct("FiniteDifference")
                .field("step", step)
                .finish(),
        }
    }
}

/// A quantum channel as an ordered Kraus-operator list plus its θ
/// dependence.
///
/// The completeness residual `‖Σ_l Π_l†Π_l − I‖_max` is computed at
/// construction and *stored*; application paths (state evolution, dilation)
/// gate on it, while bound computations accept formally incomplete families
/// — some generator splittings exponentiate to trace-decreasing or
/// -increasing operator sets away from special parameter points, and those
/// are still legitimate inputs to the bound formulas.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus_ops: Vec<ComplexMatrix>,
    dependence: Dependence,
    completeness_residual: f64,
}

fn completeness_residual(ops: &[ComplexMatrix]) -> f64 {
    if ops.is_empty() {
        return f64::INFINITY;
    }
    let d = ops[0].dim();
    let mut acc = ComplexMatrix::zeros(d);
    for op in ops {
        acc = acc.add(&op.adjoint().mul(op));
    }
    acc.sub(&ComplexMatrix::identity(d)).max_abs()
}

impl KrausChannel {
    fn build(ops: Vec<ComplexMatrix>, dependence: Dependence) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::Precondition("empty Kraus list".into()));
        }
        let d = ops[0].dim();
        if ops.iter().any(|op| op.dim() != d) {
            return Err(Error::DimensionMismatch(
                "Kraus operators of mixed dimension".into(),
            ));
        }
        let residual = completeness_residual(&ops);
        Ok(Self {
            kraus_ops: ops,
            dependence,
            completeness_residual: residual,
        })
    }

    /// θ-independent channel from explicit Kraus operators.
    pub fn constant(ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::build(ops, Dependence::Constant)
    }

    /// Exponential-family channel evaluated at θ.
    pub fn exponential_family(gens: GeneratorSet, theta: &[f64]) -> Result<Self> {
        let ops = exponential_family_ops(&gens, theta)?;
        Ok(Self::build(ops, Dependence::ExponentialFamily(gens))?)
    }

    /// Parametrized unitary channel `U(θ) = e^{-i Σ_k θ_k H_k}`.
    pub fn unitary(h_ks: Vec<ComplexMatrix>, theta: &[f64]) -> Result<Self> {
        let d = h_ks
            .first()
            .ok_or_else(|| Error::Precondition("no generators".into()))?
            .dim();
        Self::noisy_unitary(vec![ComplexMatrix::identity(d)], h_ks, theta)
    }

    /// Fixed noise Kraus operators composed after a parametrized unitary:
    /// `Π_r(θ) = E_r·U(θ)`.
    pub fn noisy_unitary(
        noise: Vec<ComplexMatrix>,
        h_ks: Vec<ComplexMatrix>,
        theta: &[f64],
    ) -> Result<Self> {
        let generators = GeneratorSet::unitary(h_ks)?;
        if noise.is_empty() || noise.iter().any(|e| e.dim() != generators.dim()) {
            return Err(Error::DimensionMismatch(
                "noise operators must match generator dimension".into(),
            ));
        }
        let u = linalg::unitary_exp(&generators.assemble(0, theta)?)?;
        let ops = noise.iter().map(|e| e.mul(&u)).collect();
        Self::build(ops, Dependence::NoisyUnitary { noise, generators })
    }

    /// Arbitrary θ ↦ Kraus-list family, evaluated at θ; differentiated by
    /// central differences with the given step (must be positive).
    pub fn finite_difference(
        family: Arc<dyn Fn(&[f64]) -> Result<Vec<ComplexMatrix>> + Send + Sync>,
        theta: &[f64],
        step: f64,
    ) -> Result<Self> {
        if step <= 0.0 {
            return Err(Error::Precondition(format!(
                "finite-difference step must be positive, got {step}"
            )));
        }
        let ops = family(theta)?;
        Self::build(ops, Dependence::FiniteDifference { family, step })
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn dependence(&self) -> &Dependence {
        &self.dependence
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].dim()
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus_ops.len()
    }

    /// Stored residual `‖Σ_l Π_l†Π_l − I‖_max`.
    pub fn completeness_residual(&self) -> f64 {
        self.completeness_residual
    }

    /// Errors unless the Kraus list is trace-preserving within `1e-10`.
    pub fn require_complete(&self) -> Result<()> {
        if self.completeness_residual > tol::COMPLETENESS {
            return Err(Error::CompletenessViolated {
                residual: self.completeness_residual,
            });
        }
        Ok(())
    }

    /// Re-evaluate the Kraus list at a different θ (identity for constant
    /// channels).
    pub fn ops_at(&self, theta: &[f64]) -> Result<Vec<ComplexMatrix>> {
        match &self.dependence {
            Dependence::Constant => Ok(self.kraus_ops.clone()),
            Dependence::ExponentialFamily(gens) => exponential_family_ops(gens, theta),
            Dependence::NoisyUnitary { noise, generators } => {
                let u = linalg::unitary_exp(&generators.assemble(0, theta)?)?;
                Ok(noise.iter().map(|e| e.mul(&u)).collect())
            }
            Dependence::Product(factors) => {
                let per: Vec<Vec<ComplexMatrix>> = factors
                    .iter()
                    .map(|f| f.ops_at(theta))
                    .collect::<Result<_>>()?;
                tensor_combinations(&per)
            }
            Dependence::FiniteDifference { family, .. } => family(theta),
        }
    }
}

fn exponential_family_ops(gens: &GeneratorSet, theta: &[f64]) -> Result<Vec<ComplexMatrix>> {
    let l_count = gens.kraus_count();
    let scale = re(1.0 / (l_count as f64).sqrt());
    let mut ops = Vec::with_capacity(l_count);
    for l in 0..l_count {
        let g = gens.assemble(l, theta)?;
        let e = if g.hermiticity_residual() <= tol::HERMITICITY {
            linalg::unitary_exp(&g)?
        } else {
            linalg::matrix_exp(&g.scale(im(-1.0)))
        };
        ops.push(e.scale(scale));
    }
    Ok(ops)
}

/// All ordered tensor combinations of per-factor operator lists, first
/// factor slowest.
fn tensor_combinations(per: &[Vec<ComplexMatrix>]) -> Result<Vec<ComplexMatrix>> {
    let mut combos = vec![ComplexMatrix::identity(1)];
    for list in per {
        let mut next = Vec::with_capacity(combos.len() * list.len());
        for c in &combos {
            for op in list {
                next.push(linalg::kron(c, op)?);
            }
        }
        combos = next;
    }
    Ok(combos)
}

/// Evolve a state through the channel: `ρ ↦ Σ_l Π_l ρ Π_l†`.
///
/// Requires a trace-preserving Kraus list; the output is revalidated.
pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel dim {} vs state dim {}",
            ch.dim(),
            rho.dim()
        )));
    }
    ch.require_complete()?;
    let mut out = ComplexMatrix::zeros(rho.dim());
    for op in ch.kraus_ops() {
        out = out.add(&op.mul(rho.matrix()).mul(&op.adjoint()));
    }
    DensityMatrix::new(out, rho.factor_dims().to_vec())
}

/// Image of an operator under the channel's Kraus map:
/// `X ↦ Σ_l Π_l X Π_l†`. No completeness gate, so it doubles as plain
/// operator bookkeeping for incomplete families.
pub fn kraus_image(ch: &KrausChannel, x: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(x.dim());
    for op in ch.kraus_ops() {
        out = out.add(&op.mul(x).mul(&op.adjoint()));
    }
    out
}

/// Unitality check: residual `‖Σ_l Π_l Π_l† − I‖_max` and the verdict
/// (residual < 1e-10).
pub fn is_unital(ch: &KrausChannel) -> (bool, f64) {
    let d = ch.dim();
    let mut acc = ComplexMatrix::zeros(d);
    for op in ch.kraus_ops() {
        acc = acc.add(&op.mul(&op.adjoint()));
    }
    let residual = acc.sub(&ComplexMatrix::identity(d)).max_abs();
    (residual < tol::UNITALITY, residual)
}

/// Stinespring isometry `V = Σ_l Π_l ⊗ |l⟩` mapping the system into
/// system ⊗ bath, with the bath index equal to the Kraus list position.
///
/// `V†V = I` holds within the completeness residual, and tracing the bath
/// out of `VρV†` reproduces the channel action. Kraus counts above 16 are
/// rejected (the dilated dimension grows linearly but downstream
/// brute-force consumers square it).
pub fn stinespring_dilation(ch: &KrausChannel) -> Result<RectMatrix> {
    let l_count = ch.kraus_count();
    if l_count > tol::STINESPRING_KRAUS_CAP {
        return Err(Error::CapExceeded(format!(
            "{l_count} Kraus operators exceed dilation cap {}",
            tol::STINESPRING_KRAUS_CAP
        )));
    }
    ch.require_complete()?;
    let d = ch.dim();
    let mut v = RectMatrix::zeros(d * l_count, d);
    for (l, op) in ch.kraus_ops().iter().enumerate() {
        for s in 0..d {
            for t in 0..d {
                v.set(s * l_count + l, t, op.get(s, t));
            }
        }
    }
    Ok(v)
}

/// Derivatives `∂Π_l/∂θ_k` of every Kraus operator at θ, in list order.
///
/// Analytic for exponential families (Hermitian generators go through the
/// α-conjugation integral; non-Hermitian ones through a block-augmented
/// exponential), for noise-after-unitary families, and for products (term
/// rule across factors); finite-difference families use central
/// differences with their stored step.
pub fn kraus_derivatives(
    ch: &KrausChannel,
    theta: &[f64],
    k: usize,
) -> Result<Vec<ComplexMatrix>> {
    match &ch.dependence {
        Dependence::Constant => Ok(ch
            .kraus_ops()
            .iter()
            .map(|op| ComplexMatrix::zeros(op.dim()))
            .collect()),
        Dependence::ExponentialFamily(gens) => {
            check_param(theta, gens.param_count(), k)?;
            let l_count = gens.kraus_count();
            let scale = re(1.0 / (l_count as f64).sqrt());
            let mut out = Vec::with_capacity(l_count);
            for l in 0..l_count {
                let g = gens.assemble(l, theta)?;
                let gk = gens.generator(l, k);
                let d = if g.hermiticity_residual() <= tol::HERMITICITY
                    && gk.hermiticity_residual() <= tol::HERMITICITY
                {
                    // ∂ e^{-iG} = e^{-iG} · (−i) ∫₀¹ e^{iαG} G_k e^{-iαG} dα
                    let a = linalg::alpha_conjugation_integral(&g, gk)?;
                    linalg::unitary_exp(&g)?.mul(&a).scale(im(-1.0))
                } else {
                    exp_derivative_block(&g.scale(im(-1.0)), &gk.scale(im(-1.0)))?
                };
                out.push(d.scale(scale));
            }
            Ok(out)
        }
        Dependence::NoisyUnitary { noise, generators } => {
            check_param(theta, generators.param_count(), k)?;
            let h = generators.assemble(0, theta)?;
            let u = linalg::unitary_exp(&h)?;
            let a = linalg::alpha_conjugation_integral(&h, generators.generator(0, k))?;
            let du = u.mul(&a).scale(im(-1.0));
            Ok(noise.iter().map(|e| e.mul(&du)).collect())
        }
        Dependence::Product(factors) => {
            let per_ops: Vec<Vec<ComplexMatrix>> = factors
                .iter()
                .map(|f| f.ops_at(theta))
                .collect::<Result<_>>()?;
            let per_derivs: Vec<Vec<ComplexMatrix>> = factors
                .iter()
                .map(|f| kraus_derivatives(f, theta, k))
                .collect::<Result<_>>()?;
            let mut out = Vec::new();
            let mut index = vec![0usize; factors.len()];
            loop {
                let mut term_sum: Option<ComplexMatrix> = None;
                for n in 0..factors.len() {
                    let parts: Vec<&ComplexMatrix> = (0..factors.len())
                        .map(|m| {
                            if m == n {
                                &per_derivs[m][index[m]]
                            } else {
                                &per_ops[m][index[m]]
                            }
                        })
                        .collect();
                    let mut term = ComplexMatrix::identity(1);
                    for p in parts {
                        term = linalg::kron(&term, p)?;
                    }
                    term_sum = Some(match term_sum {
                        Some(s) => s.add(&term),
                        None => term,
                    });
                }
                out.push(term_sum.expect("at least one factor"));
                // Advance the multi-index, first factor slowest.
                let mut pos = factors.len();
                loop {
                    if pos == 0 {
                        return Ok(out);
                    }
                    pos -= 1;
                    index[pos] += 1;
                    if index[pos] < per_ops[pos].len() {
                        break;
                    }
                    index[pos] = 0;
                }
            }
        }
        Dependence::FiniteDifference { family, step } => {
            let mut plus = theta.to_vec();
            let mut minus = theta.to_vec();
            plus[k] += *step;
            minus[k] -= *step;
            let fp = family(&plus)?;
            let fm = family(&minus)?;
            if fp.len() != fm.len() {
                return Err(Error::MissingDependence(
                    "family returns Kraus lists of varying length".into(),
                ));
            }
            Ok(fp
                .iter()
                .zip(&fm)
                .map(|(p, m)| p.sub(m).scale(re(0.5 / *step)))
                .collect())
        }
    }
}

fn check_param(theta: &[f64], expected: usize, k: usize) -> Result<()> {
    if theta.len() != expected || k >= expected {
        return Err(Error::DimensionMismatch(format!(
            "θ length {} / index {k} incompatible with {expected} parameters",
            theta.len()
        )));
    }
    Ok(())
}

/// Derivative of `e^{M}` in direction `dM` via the block identity:
/// the upper-right block of `exp([[M, dM], [0, M]])`.
fn exp_derivative_block(m: &ComplexMatrix, dm: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = m.dim();
    let mut block = ComplexMatrix::zeros(2 * d);
    for i in 0..d {
        for j in 0..d {
            block.set(i, j, m.get(i, j));
            block.set(d + i, d + j, m.get(i, j));
            block.set(i, d + j, dm.get(i, j));
        }
    }
    let e = linalg::matrix_exp(&block);
    Ok(ComplexMatrix::from_fn(d, |i, j| e.get(i, d + j)))
}

/// The identity channel in the given dimension.
pub fn identity_channel(dim: usize) -> KrausChannel {
    KrausChannel::constant(vec![ComplexMatrix::identity(dim)]).expect("identity Kraus list")
}

/// Single-qubit dephasing with rate λ ≥ 0:
/// `E₀ = diag(1, e^{-λ})`, `E₁ = diag(0, √(1−e^{-2λ}))`.
pub fn dephasing_kraus(lambda: f64) -> Result<KrausChannel> {
    if !(lambda >= 0.0) {
        return Err(Error::Precondition(format!(
            "dephasing rate must be ≥ 0, got {lambda}"
        )));
    }
    let e = (-lambda).exp();
    let mut e0 = ComplexMatrix::zeros(2);
    e0.set(0, 0, re(1.0));
    e0.set(1, 1, re(e));
    let mut e1 = ComplexMatrix::zeros(2);
    e1.set(1, 1, re((1.0 - e * e).max(0.0).sqrt()));
    KrausChannel::constant(vec![e0, e1])
}

/// Single-qubit amplitude damping with rate κ ≥ 0:
/// `E₀ = diag(1, √(1−e^{-2κ}))`, `E₁ = [[0, e^{-κ}], [0, 0]]`.
///
/// Non-unital for κ > 0: `Σ E_r E_r† = diag(1+e^{-2κ}, 1−e^{-2κ})`.
pub fn amplitude_damping_kraus(kappa: f64) -> Result<KrausChannel> {
    if !(kappa >= 0.0) {
        return Err(Error::Precondition(format!(
            "damping rate must be ≥ 0, got {kappa}"
        )));
    }
    let e = (-kappa).exp();
    let mut e0 = ComplexMatrix::zeros(2);
    e0.set(0, 0, re(1.0));
    e0.set(1, 1, re((1.0 - e * e).max(0.0).sqrt()));
    let mut e1 = ComplexMatrix::zeros(2);
    e1.set(0, 1, re(e));
    KrausChannel::constant(vec![e0, e1])
}

/// The six single-qubit splitting generators `π_{lk}` (`l` ∈ {0,1} operator
/// slot, `k` ∈ {0,1,2} Pauli direction) with `π_{0k} + π_{1k} = σ_{k+1}` and
/// `Σ_l π_{lk}†π_{lk} = I` per direction.
pub fn pauli_split_generators() -> [[ComplexMatrix; 3]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let one = re(1.0);
    let mi = Complex64::new(0.0, -1.0);
    let i = Complex64::new(0.0, 1.0);
    let m = |a, b, c, d| ComplexMatrix::from_row_major(2, vec![a, b, c, d]).expect("static");
    [
        [
            m(z, one, z, z),  // upper-triangular part of σ₁
            m(z, mi, z, z),   // upper-triangular part of σ₂
            m(one, z, z, z),  // positive diagonal part of σ₃
        ],
        [
            m(z, z, one, z),  // lower-triangular part of σ₁
            m(z, z, i, z),    // lower-triangular part of σ₂
            m(z, z, z, -one), // negative diagonal part of σ₃
        ],
    ]
}

/// Two-operator exponential-family channel built on the Pauli splitting:
/// `Π_l(θ) = (1/√2)·e^{-i Σ_k θ_k π_{lk}}`.
///
/// Trace-preserving and unital at θ = 0 (and along the 3-axis); away from
/// those points the exponentiated splitting picks up an overall factor and
/// the stored completeness residual becomes nonzero.
pub fn pauli_split_channel(theta: &[f64; 3]) -> Result<KrausChannel> {
    let gens = pauli_split_generators();
    let set = GeneratorSet::exponential_family(
        gens.into_iter().map(|row| row.into_iter().collect()).collect(),
    )?;
    KrausChannel::exponential_family(set, theta)
}

/// Tensor product of independent per-particle channels: the Kraus list is
/// every ordered combination of the factors' operators.
pub fn product_channel(factors: Vec<KrausChannel>) -> Result<KrausChannel> {
    if factors.is_empty() {
        return Err(Error::Precondition("no factors".into()));
    }
    let total_dim: usize = factors.iter().map(KrausChannel::dim).product();
    if total_dim > tol::KRON_DIM_CAP {
        return Err(Error::CapExceeded(format!(
            "product channel dim {total_dim} exceeds cap {}",
            tol::KRON_DIM_CAP
        )));
    }
    let per: Vec<Vec<ComplexMatrix>> = factors
        .iter()
        .map(|f| f.kraus_ops().to_vec())
        .collect();
    let ops = tensor_combinations(&per)?;
    KrausChannel::build(ops, Dependence::Product(factors))
}
