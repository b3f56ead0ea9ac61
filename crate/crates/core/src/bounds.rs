//! Quantum estimation bounds.
//!
//! Anti-Hermitian logarithmic derivatives (ALDs) and the QFIM they induce
//! for unitary families — exact, and assembled from one- and two-particle
//! reduced density matrices for permutation-invariant probes; the
//! channel-level upper bound obtained by differentiating Kraus operators
//! and tracing out the dilation bath; saturation-condition residuals; a
//! fidelity-based QFIM oracle; a Holevo-type witness; and the
//! resource-scaled two-particle bound for θ-dependent product channels.

use num_complex::Complex64;

use crate::channels::{kraus_derivatives, kraus_image, GeneratorSet, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{self, im, re, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::sym::SymMatrix;
use crate::tol;

fn expectation(rho: &ComplexMatrix, op: &ComplexMatrix) -> Complex64 {
    rho.mul(op).trace()
}

/// `op` embedded on tensor factor `p` of `n` qubit factors.
fn embed_single_qubit(op: &ComplexMatrix, n: usize, p: usize) -> Result<ComplexMatrix> {
    let left = ComplexMatrix::identity(1 << p);
    let right = ComplexMatrix::identity(1 << (n - 1 - p));
    linalg::kron(&linalg::kron(&left, op)?, &right)
}

/// Collective rotation generators `Σ_p σ_k^{(p)}` on `n` qubits, for
/// k = 1, 2, 3.
pub fn collective_pauli_generators(n: usize) -> Result<Vec<ComplexMatrix>> {
    let dim = 1usize
        .checked_shl(n as u32)
        .filter(|&d| d <= tol::QFIM_EXACT_DIM_CAP)
        .ok_or_else(|| {
            Error::CapExceeded(format!("2^{n} exceeds brute-force dimension cap"))
        })?;
    let mut out = Vec::with_capacity(3);
    for sigma in linalg::pauli::all() {
        let mut g = ComplexMatrix::zeros(dim);
        for p in 0..n {
            g = g.add(&embed_single_qubit(&sigma, n, p)?);
        }
        out.push(g);
    }
    Ok(out)
}

/// Single-particle effective generators `b_j` for a three-parameter
/// rotation `e^{-i θ·σ}`: the α-conjugation integral of each σ_j against
/// the full generator `θ·σ`.
pub fn magfield_single_particle_generators(theta: &[f64; 3]) -> Result<Vec<ComplexMatrix>> {
    let sigmas = linalg::pauli::all();
    let mut h = ComplexMatrix::zeros(2);
    for (s, &t) in sigmas.iter().zip(theta) {
        h = h.add(&s.scale(re(t)));
    }
    sigmas
        .iter()
        .map(|s| linalg::alpha_conjugation_integral(&h, s))
        .collect()
}

/// A set of anti-Hermitian logarithmic derivatives at a parameter point,
/// together with the state they differentiate.
///
/// Construction validates the defining properties: `L_k† = −L_k` (1e-9),
/// `Tr(ρ L_k) = 0` (1e-8), and `½(L_k ρ + ρ L_k†) = ∂_k ρ` (1e-7) against
/// the supplied derivatives.
#[derive(Debug, Clone)]
pub struct AldSet {
    operators: Vec<ComplexMatrix>,
    rho_theta: DensityMatrix,
}

impl AldSet {
    pub fn new(
        operators: Vec<ComplexMatrix>,
        rho_theta: DensityMatrix,
        state_derivs: &[ComplexMatrix],
    ) -> Result<Self> {
        if operators.len() != state_derivs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} operators vs {} state derivatives",
                operators.len(),
                state_derivs.len()
            )));
        }
        let rho = rho_theta.matrix();
        for (k, (l, drho)) in operators.iter().zip(state_derivs).enumerate() {
            let anti = l.add(&l.adjoint()).max_abs();
            if anti > 1e-9 {
                return Err(Error::Precondition(format!(
                    "operator {k} is not anti-Hermitian (residual {anti:.3e})"
                )));
            }
            let centered = expectation(rho, l).norm();
            if centered > 1e-8 {
                return Err(Error::Precondition(format!(
                    "operator {k} has nonzero expectation {centered:.3e}"
                )));
            }
            let lhs = l
                .mul(rho)
                .add(&rho.mul(&l.adjoint()))
                .scale(re(0.5));
            let defres = lhs.sub(drho).max_abs();
            if defres > 1e-7 {
                return Err(Error::Precondition(format!(
                    "operator {k} fails the defining equation (residual {defres:.3e})"
                )));
            }
        }
        Ok(Self {
            operators,
            rho_theta,
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn rho_theta(&self) -> &DensityMatrix {
        &self.rho_theta
    }

    pub fn param_count(&self) -> usize {
        self.operators.len()
    }
}

/// Evaluate `A_k`, `U`, and `ρ(θ) = U ρ₀ U†` for a unitary generator set.
fn unitary_family_pieces(
    gen: &GeneratorSet,
    rho0: &DensityMatrix,
    theta: &[f64],
) -> Result<(Vec<ComplexMatrix>, ComplexMatrix)> {
    if gen.kraus_count() != 1 || !gen.is_hermitian() {
        return Err(Error::Precondition(
            "unitary family requires a single slot of Hermitian generators".into(),
        ));
    }
    if gen.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch(format!(
            "generator dim {} vs state dim {}",
            gen.dim(),
            rho0.dim()
        )));
    }
    if rho0.dim() > tol::QFIM_EXACT_DIM_CAP {
        return Err(Error::CapExceeded(format!(
            "dimension {} exceeds brute-force cap {}",
            rho0.dim(),
            tol::QFIM_EXACT_DIM_CAP
        )));
    }
    let h = gen.assemble(0, theta)?;
    let u = linalg::unitary_exp(&h)?;
    let a_ops = (0..gen.param_count())
        .map(|k| linalg::alpha_conjugation_integral(&h, gen.generator(0, k)))
        .collect::<Result<Vec<_>>>()?;
    Ok((a_ops, u))
}

/// ALD set for a unitarily evolved family: `L_k = −2i(M_k − ⟨M_k⟩)` with
/// `M_k = U A_k U†` and `A_k` the α-conjugation integral of the k-th
/// generator.
pub fn ald_unitary(
    gen: &GeneratorSet,
    rho0: &DensityMatrix,
    theta: &[f64],
) -> Result<AldSet> {
    let (a_ops, u) = unitary_family_pieces(gen, rho0, theta)?;
    let rho_theta = rho0.conjugated_by(&u)?;
    let mut operators = Vec::with_capacity(a_ops.len());
    let mut derivs = Vec::with_capacity(a_ops.len());
    for a in &a_ops {
        let m = u.mul(a).mul(&u.adjoint());
        let mean = expectation(rho_theta.matrix(), &m).re;
        let centered = m.sub(&ComplexMatrix::identity(m.dim()).scale(re(mean)));
        operators.push(centered.scale(im(-2.0)));
        // ∂ρ = −i [M_k, ρ(θ)]
        let comm = m
            .mul(rho_theta.matrix())
            .sub(&rho_theta.matrix().mul(&m));
        derivs.push(comm.scale(im(-1.0)));
    }
    AldSet::new(operators, rho_theta, &derivs)
}

/// QFIM of a unitarily evolved family via the ALD construction:
/// `J_jk = 4[Re Tr(A_j A_k ρ₀) − Tr(A_j ρ₀)Tr(A_k ρ₀)]`.
///
/// Exact for pure probes; for full-rank mixed probes this is the ALD-based
/// value, an upper bound to the fidelity-derived QFIM.
pub fn qfim_unitary_exact(
    gen: &GeneratorSet,
    rho0: &DensityMatrix,
    theta: &[f64],
) -> Result<SymMatrix> {
    let (a_ops, _) = unitary_family_pieces(gen, rho0, theta)?;
    let rho = rho0.matrix();
    let means: Vec<f64> = a_ops.iter().map(|a| expectation(rho, a).re).collect();
    let q = a_ops.len();
    let mut grams = vec![vec![Complex64::new(0.0, 0.0); q]; q];
    for j in 0..q {
        for k in 0..q {
            grams[j][k] = rho.mul(&a_ops[j]).mul(&a_ops[k]).trace();
        }
    }
    Ok(SymMatrix::from_fn_symmetrized(q, |j, k| {
        4.0 * (grams[j][k].re - means[j] * means[k])
    }))
}

/// QFIM of a permutation-invariant N-particle probe assembled from its one-
/// and two-particle marginals:
/// `J = N·J¹ + N(N−1)·J²` with
/// `J¹_jk = 4[Re Tr(ρ¹ b_j b_k) − t_j t_k]` and
/// `J²_jk = 4[Re Tr(ρ² b_j⊗b_k) − t_j t_k]`, `t_j = Tr(ρ¹ b_j)`.
///
/// Cost is independent of N.
pub fn qfim_rdm(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    b_ops: &[ComplexMatrix],
    n: u64,
) -> Result<SymMatrix> {
    let d = rho1.dim();
    if rho2.dim() != d * d || b_ops.iter().any(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch(format!(
            "marginal dims {} / {} incompatible with operators",
            d,
            rho2.dim()
        )));
    }
    let q = b_ops.len();
    let t: Vec<f64> = b_ops
        .iter()
        .map(|b| expectation(rho1.matrix(), b).re)
        .collect();
    let nf = n as f64;
    let mut j1 = vec![vec![0.0; q]; q];
    let mut j2 = vec![vec![0.0; q]; q];
    for a in 0..q {
        for b in 0..q {
            j1[a][b] = 4.0
                * (expectation(rho1.matrix(), &b_ops[a].mul(&b_ops[b])).re - t[a] * t[b]);
            let pair = linalg::kron(&b_ops[a], &b_ops[b])?;
            j2[a][b] = 4.0 * (expectation(rho2.matrix(), &pair).re - t[a] * t[b]);
        }
    }
    Ok(SymMatrix::from_fn_symmetrized(q, |a, b| {
        nf * j1[a][b] + nf * (nf - 1.0) * j2[a][b]
    }))
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Closed-form single-particle QFIM of the three-parameter rotation family
/// on a maximally mixed particle:
/// `J¹_jk = 4[(1 − sinc²ξ)·η_j η_k + δ_jk sinc²ξ]` with ξ = ‖θ‖, η = θ/ξ.
pub fn magfield_qfim1(theta: &[f64; 3]) -> SymMatrix {
    let xi = (theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]).sqrt();
    if xi == 0.0 {
        return SymMatrix::identity(3).scale(4.0);
    }
    let s2 = sinc(xi) * sinc(xi);
    let eta = [theta[0] / xi, theta[1] / xi, theta[2] / xi];
    SymMatrix::from_fn_symmetrized(3, |j, k| {
        let diag = if j == k { s2 } else { 0.0 };
        4.0 * ((1.0 - s2) * eta[j] * eta[k] + diag)
    })
}

/// Full N-particle three-parameter QFIM for a GHZ-superposition probe whose
/// two-particle marginal is the equal axis mixture, with every particle
/// dephased at rate λ:
/// `J = N·J¹ + (2N(N−1)/3)·Tr(f_j f_k)`, `f_j = Σ_r E_r b_j E_r†`.
pub fn magfield_qfim_full(theta: &[f64; 3], lambda: f64, n: u64) -> Result<SymMatrix> {
    let ch = crate::channels::dephasing_kraus(lambda)?;
    let b_ops = magfield_single_particle_generators(theta)?;
    let f_ops: Vec<ComplexMatrix> = b_ops.iter().map(|b| kraus_image(&ch, b)).collect();
    let single = magfield_qfim1(theta);
    let nf = n as f64;
    Ok(SymMatrix::from_fn_symmetrized(3, |j, k| {
        let two_body = f_ops[j].mul(&f_ops[k]).trace().re;
        nf * single.get(j, k) + (2.0 * nf * (nf - 1.0) / 3.0) * two_body
    }))
}

/// Per-parameter Kraus derivative lists `d[k][l] = ∂Π_l/∂θ_k` at θ.
fn all_kraus_derivatives(
    ch: &KrausChannel,
    theta: &[f64],
) -> Result<Vec<Vec<ComplexMatrix>>> {
    (0..theta.len())
        .map(|k| kraus_derivatives(ch, theta, k))
        .collect()
}

/// Channel-level upper bound on the QFIM:
/// `C_jk = 4[Re Tr(K₁^{jk} ρ₀) − Re(Tr(K₂^j ρ₀)·Tr(K₂^k ρ₀))]` with
/// `K₁^{jk} = Σ_l ∂_jΠ_l† ∂_kΠ_l` and `K₂^k = i Σ_l ∂_kΠ_l† Π_l`.
pub fn cq_bound(
    ch: &KrausChannel,
    rho0: &DensityMatrix,
    theta: &[f64],
) -> Result<SymMatrix> {
    if ch.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel dim {} vs state dim {}",
            ch.dim(),
            rho0.dim()
        )));
    }
    let ops = ch.ops_at(theta)?;
    let derivs = all_kraus_derivatives(ch, theta)?;
    let q = theta.len();
    let rho = rho0.matrix();
    // t_k = Tr(K₂^k ρ₀), complex for families that are only proportionally
    // trace-preserving.
    let t: Vec<Complex64> = (0..q)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (dop, op) in derivs[k].iter().zip(&ops) {
                acc += expectation(rho, &dop.adjoint().mul(op));
            }
            acc * Complex64::new(0.0, 1.0)
        })
        .collect();
    let mut k1 = vec![vec![Complex64::new(0.0, 0.0); q]; q];
    for j in 0..q {
        for k in 0..q {
            let mut acc = Complex64::new(0.0, 0.0);
            for (dj, dk) in derivs[j].iter().zip(&derivs[k]) {
                acc += expectation(rho, &dj.adjoint().mul(dk));
            }
            k1[j][k] = acc;
        }
    }
    Ok(SymMatrix::from_fn_symmetrized(q, |j, k| {
        4.0 * (k1[j][k].re - (t[j] * t[k]).re)
    }))
}

/// Per-site Kraus operators and their per-parameter derivatives, the
/// single-particle ingredients of the reduced-density-matrix form of the
/// channel bound.
#[derive(Debug, Clone)]
pub struct SiteDerivatives {
    ops: Vec<ComplexMatrix>,
    derivs: Vec<Vec<ComplexMatrix>>,
}

impl SiteDerivatives {
    pub fn new(ops: Vec<ComplexMatrix>, derivs: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        for row in &derivs {
            if row.len() != ops.len() {
                return Err(Error::DimensionMismatch(
                    "derivative lists must match the Kraus list length".into(),
                ));
            }
        }
        Ok(Self { ops, derivs })
    }

    /// Evaluate a single-site channel and its derivatives at θ.
    pub fn from_channel(ch: &KrausChannel, theta: &[f64]) -> Result<Self> {
        Self::new(ch.ops_at(theta)?, all_kraus_derivatives(ch, theta)?)
    }

    fn param_count(&self) -> usize {
        self.derivs.len()
    }

    /// `X_k = i Σ_l ∂_kΠ_l† Π_l`.
    fn x_op(&self, k: usize) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.ops[0].dim());
        for (dop, op) in self.derivs[k].iter().zip(&self.ops) {
            acc = acc.add(&dop.adjoint().mul(op));
        }
        acc.scale(im(1.0))
    }

    /// `T₁^{jk} = Σ_l ∂_jΠ_l† ∂_kΠ_l`.
    fn t1_op(&self, j: usize, k: usize) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.ops[0].dim());
        for (dj, dk) in self.derivs[j].iter().zip(&self.derivs[k]) {
            acc = acc.add(&dj.adjoint().mul(dk));
        }
        acc
    }
}

/// Reduced-density-matrix form of the channel bound for a
/// permutation-invariant probe under N independent copies of a single-site
/// channel: `C = N·C¹ + N(N−1)·C²` with
/// `C¹_jk = 4[Re Tr(T₁^{jk} ρ¹) − Re(x_j x_k)]` and
/// `C²_jk = 4[Re Tr((X_j ⊗ X_k†) ρ²) − Re(x_j x_k)]`, `x_k = Tr(X_k ρ¹)`.
pub fn cq_rdm(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    site: &SiteDerivatives,
    n: u64,
) -> Result<SymMatrix> {
    let d = rho1.dim();
    if site.ops[0].dim() != d || rho2.dim() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "site operators dim {} vs marginals {} / {}",
            site.ops[0].dim(),
            d,
            rho2.dim()
        )));
    }
    let q = site.param_count();
    let x_ops: Vec<ComplexMatrix> = (0..q).map(|k| site.x_op(k)).collect();
    let x: Vec<Complex64> = x_ops
        .iter()
        .map(|xk| expectation(rho1.matrix(), xk))
        .collect();
    let nf = n as f64;
    let mut out = vec![vec![0.0; q]; q];
    for j in 0..q {
        for k in 0..q {
            let c1 = expectation(rho1.matrix(), &site.t1_op(j, k)).re - (x[j] * x[k]).re;
            let pair = linalg::kron(&x_ops[j], &x_ops[k].adjoint())?;
            let c2 = expectation(rho2.matrix(), &pair).re - (x[j] * x[k]).re;
            out[j][k] = 4.0 * (nf * c1 + nf * (nf - 1.0) * c2);
        }
    }
    Ok(SymMatrix::from_fn_symmetrized(q, |j, k| out[j][k]))
}

/// Pairwise commutator-expectation residual of the ALD set for a unitary
/// family: `max_{j<k} |Tr([L_j, L_k] ρ(θ))|`. Zero is the multiparameter
/// saturation condition; trivially zero for q = 1.
pub fn saturation_residual_unitary(
    gen: &GeneratorSet,
    rho0: &DensityMatrix,
    theta: &[f64],
) -> Result<f64> {
    let alds = ald_unitary(gen, rho0, theta)?;
    Ok(ald_commutator_residual(&alds))
}

/// `max_{j<k} |Tr([L_j, L_k] ρ(θ))|` for an already-built ALD set.
pub fn ald_commutator_residual(alds: &AldSet) -> f64 {
    let rho = alds.rho_theta().matrix();
    let ls = alds.operators();
    let mut worst = 0.0f64;
    for j in 0..ls.len() {
        for k in j + 1..ls.len() {
            let comm = ls[j].mul(&ls[k]).sub(&ls[k].mul(&ls[j]));
            worst = worst.max(expectation(rho, &comm).norm());
        }
    }
    worst
}

/// Marginal-level tracking of the saturation condition for N-particle
/// permutation-invariant probes: `max_{j<k} 4N·|Im Tr(ρ¹ b_j b_k)|`.
///
/// The full commutator residual of the collective family equals exactly
/// twice this quantity when the two-particle contributions are real.
pub fn saturation_residual_rdm(
    rho1: &DensityMatrix,
    b_ops: &[ComplexMatrix],
    n: u64,
) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..b_ops.len() {
        for k in j + 1..b_ops.len() {
            let v = expectation(rho1.matrix(), &b_ops[j].mul(&b_ops[k])).im;
            worst = worst.max((4.0 * n as f64 * v).abs());
        }
    }
    worst
}

/// Saturation residual of the channel bound:
/// `max_{j<k} |Im Tr(Σ_l ∂_jΠ_l† ∂_kΠ_l ρ₀)|`.
pub fn saturation_residual_noisy(
    ch: &KrausChannel,
    rho0: &DensityMatrix,
    theta: &[f64],
) -> Result<f64> {
    let derivs = all_kraus_derivatives(ch, theta)?;
    let q = theta.len();
    let rho = rho0.matrix();
    let mut worst = 0.0f64;
    for j in 0..q {
        for k in j + 1..q {
            let mut acc = Complex64::new(0.0, 0.0);
            for (dj, dk) in derivs[j].iter().zip(&derivs[k]) {
                acc += expectation(rho, &dj.adjoint().mul(dk));
            }
            worst = worst.max(acc.im.abs());
        }
    }
    Ok(worst)
}

/// QFIM extracted from the local expansion of Bures fidelity by second
/// differences along `e_j`, `e_k`, and `e_j + e_k`, with Richardson
/// extrapolation from steps ε and ε/2.
///
/// Numerics: steps below ~1e-2 amplify eigen-square-root roundoff
/// (the extracted values scale like 8·δF/ε²), so callers wanting 1e-4-level
/// accuracy on mixed states should pass ε ≈ 0.02 rather than the nominal
/// default step.
pub fn qfim_fidelity_oracle(
    family: impl Fn(&[f64]) -> Result<DensityMatrix>,
    theta: &[f64],
    eps: f64,
) -> Result<SymMatrix> {
    if eps <= 0.0 {
        return Err(Error::Precondition(format!(
            "fidelity step must be positive, got {eps}"
        )));
    }
    let q = theta.len();
    let rho0 = family(theta)?;

    let quad = |dir: &[f64], step: f64| -> Result<f64> {
        let shifted = |sign: f64| -> Vec<f64> {
            theta
                .iter()
                .zip(dir)
                .map(|(t, d)| t + sign * step * d)
                .collect()
        };
        let fp = linalg::bures_fidelity(&rho0, &family(&shifted(1.0))?)?;
        let fm = linalg::bures_fidelity(&rho0, &family(&shifted(-1.0))?)?;
        Ok(2.0 * ((1.0 - fp * fp) + (1.0 - fm * fm)) / (step * step))
    };
    let richardson = |dir: &[f64]| -> Result<f64> {
        let coarse = quad(dir, eps)?;
        let fine = quad(dir, eps / 2.0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    };

    let mut diag = vec![0.0; q];
    let mut dirs = vec![0.0; q];
    for j in 0..q {
        dirs[j] = 1.0;
        diag[j] = richardson(&dirs)?;
        dirs[j] = 0.0;
    }
    let mut out = SymMatrix::zeros(q);
    for j in 0..q {
        out.set(j, j, diag[j]);
        for k in j + 1..q {
            dirs[j] = 1.0;
            dirs[k] = 1.0;
            let g = richardson(&dirs)?;
            dirs[j] = 0.0;
            dirs[k] = 0.0;
            let v = 0.5 * (g - diag[j] - diag[k]);
            out.set(j, k, v);
            out.set(k, j, v);
        }
    }
    Ok(out)
}

/// Holevo-type witness at the ALD-derived operators:
/// `W = J⁻¹ K J⁻¹` with `K_ab = Tr(L_a† L_b ρ(θ))`.
///
/// Returns the complex q×q matrix and `max |Im W|`. The real part recovers
/// J⁻¹ when the ALD invariants hold; the imaginary part vanishes exactly
/// when the pairwise commutator expectations do.
pub fn holevo_witness(j_q: &SymMatrix, alds: &AldSet) -> Result<(ComplexMatrix, f64)> {
    let q = alds.param_count();
    if j_q.dim() != q {
        return Err(Error::DimensionMismatch(format!(
            "J is {}×{} but the ALD set has {q} operators",
            j_q.dim(),
            j_q.dim()
        )));
    }
    let j_inv = j_q.inverse()?.to_complex();
    let rho = alds.rho_theta().matrix();
    let ls = alds.operators();
    let k_mat = ComplexMatrix::from_fn(q, |a, b| {
        expectation(rho, &ls[a].adjoint().mul(&ls[b]))
    });
    let w = j_inv.mul(&k_mat).mul(&j_inv);
    let max_im = (0..q)
        .flat_map(|a| (0..q).map(move |b| (a, b)))
        .map(|(a, b)| w.get(a, b).im.abs())
        .fold(0.0, f64::max);
    Ok((w, max_im))
}

/// The two structural pieces of the resource-scaled two-particle bound for
/// a θ-dependent single-site channel: the bound itself is
/// `N·single_body + N(N−1)·two_body`.
#[derive(Debug, Clone)]
pub struct SuperHeisenbergParts {
    pub single_body: SymMatrix,
    pub two_body: SymMatrix,
}

impl SuperHeisenbergParts {
    pub fn assemble(&self, n: u64) -> SymMatrix {
        let nf = n as f64;
        self.single_body
            .scale(nf)
            .add(&self.two_body.scale(nf * (nf - 1.0)))
    }
}

/// Structural pieces of the resource-scaled bound, evaluated from a
/// single-site channel at θ and a supplied evolved two-particle marginal
/// whose single-particle reductions must be maximally mixed (checked at
/// 1e-8). With `W_j^l = Π_l ∂_jΠ_l†`, `V_k^l = ∂_kΠ_l Π_l†`, and
/// `T_j = i Tr(Σ_l W_j^l)`:
/// single body `= Re[2 Σ_l Tr(W_j^l V_k^l) − T_j T_k]`,
/// two body `= Re[4 Σ_{l,l'} Tr((W_j^l ⊗ V_k^{l'}) ρ²) − T_j T_k]`.
pub fn super_heisenberg_parts(
    ch: &KrausChannel,
    rho2_evolved: &DensityMatrix,
    theta: &[f64],
) -> Result<SuperHeisenbergParts> {
    if rho2_evolved.factor_dims() != [ch.dim(), ch.dim()] {
        return Err(Error::DimensionMismatch(format!(
            "two-particle marginal factors {:?} vs channel dim {}",
            rho2_evolved.factor_dims(),
            ch.dim()
        )));
    }
    let mm = ComplexMatrix::identity(ch.dim()).scale(re(1.0 / ch.dim() as f64));
    for factor in [0usize, 1] {
        let marg = rho2_evolved.marginal(&[factor])?;
        let dev = marg.matrix().sub(&mm).max_abs();
        if dev > 1e-8 {
            return Err(Error::Precondition(format!(
                "single-particle reduction {factor} deviates from maximally mixed by {dev:.3e}"
            )));
        }
    }
    let ops = ch.ops_at(theta)?;
    let derivs = all_kraus_derivatives(ch, theta)?;
    let q = theta.len();
    let w_ops: Vec<Vec<ComplexMatrix>> = (0..q)
        .map(|j| {
            ops.iter()
                .zip(&derivs[j])
                .map(|(op, dop)| op.mul(&dop.adjoint()))
                .collect()
        })
        .collect();
    let v_ops: Vec<Vec<ComplexMatrix>> = (0..q)
        .map(|k| {
            ops.iter()
                .zip(&derivs[k])
                .map(|(op, dop)| dop.mul(&op.adjoint()))
                .collect()
        })
        .collect();
    let t: Vec<Complex64> = (0..q)
        .map(|j| {
            let sum: Complex64 = w_ops[j].iter().map(ComplexMatrix::trace).sum();
            sum * Complex64::new(0.0, 1.0)
        })
        .collect();

    let mut single = vec![vec![0.0; q]; q];
    let mut double = vec![vec![0.0; q]; q];
    for j in 0..q {
        for k in 0..q {
            let mut diag = Complex64::new(0.0, 0.0);
            for (w, v) in w_ops[j].iter().zip(&v_ops[k]) {
                diag += w.mul(v).trace();
            }
            single[j][k] = (2.0 * diag - t[j] * t[k]).re;
            let mut cross = Complex64::new(0.0, 0.0);
            for w in &w_ops[j] {
                for v in &v_ops[k] {
                    cross += expectation(rho2_evolved.matrix(), &linalg::kron(w, v)?);
                }
            }
            double[j][k] = (4.0 * cross - t[j] * t[k]).re;
        }
    }
    Ok(SuperHeisenbergParts {
        single_body: SymMatrix::from_fn_symmetrized(q, |j, k| single[j][k]),
        two_body: SymMatrix::from_fn_symmetrized(q, |j, k| double[j][k]),
    })
}

/// Assembled resource-scaled bound `N·single + N(N−1)·two-body`.
pub fn super_heisenberg_bound(
    ch: &KrausChannel,
    rho2_evolved: &DensityMatrix,
    n: u64,
    theta: &[f64],
) -> Result<SymMatrix> {
    Ok(super_heisenberg_parts(ch, rho2_evolved, theta)?.assemble(n))
}
