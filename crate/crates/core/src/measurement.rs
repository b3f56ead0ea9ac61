//! POVMs, outcome statistics, and classical Fisher information.
//!
//! Elements are validated for Hermiticity and completeness on
//! construction; positivity is diagnosed and reported rather than
//! enforced, because the saturation-oriented element construction
//! deliberately produces indefinite elements.

use num_complex::Complex64;

use crate::channels::{kraus_derivatives, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::sym::SymMatrix;
use crate::tol;

/// A labelled measurement: Hermitian elements summing to the identity.
///
/// Hermiticity is enforced at 1e-10 and completeness at 1e-8; the minimum
/// eigenvalue of each element is recorded so callers can see whether the
/// measurement is a genuine (positive) POVM or a formal indefinite
/// decomposition of the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
    min_eigenvalues: Vec<f64>,
    completeness_residual: f64,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Precondition("a POVM needs at least one element".into()));
        }
        if labels.len() != elements.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} elements",
                labels.len(),
                elements.len()
            )));
        }
        let dim = elements[0].dim();
        let mut sum = ComplexMatrix::zeros(dim);
        let mut min_eigenvalues = Vec::with_capacity(elements.len());
        for (i, el) in elements.iter().enumerate() {
            if el.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "element {i} has dim {} (expected {dim})",
                    el.dim()
                )));
            }
            el.require_hermitian()?;
            min_eigenvalues.push(herm_eig(el)?.eigenvalues[0]);
            sum = sum.add(el);
        }
        let completeness_residual = sum.sub(&ComplexMatrix::identity(dim)).max_abs();
        if completeness_residual > tol::POVM_COMPLETENESS {
            return Err(Error::CompletenessViolated {
                residual: completeness_residual,
            });
        }
        Ok(Self {
            elements,
            labels,
            min_eigenvalues,
            completeness_residual,
        })
    }

    /// Rank-one projectors onto the eigenbasis of a Hermitian observable,
    /// labelled by the eigenvalues.
    pub fn from_observable_eigenbasis(obs: &ComplexMatrix) -> Result<Self> {
        obs.require_hermitian()?;
        let eig = herm_eig(obs)?;
        let d = obs.dim();
        let mut elements = Vec::with_capacity(d);
        let mut labels = Vec::with_capacity(d);
        for (i, &lam) in eig.eigenvalues.iter().enumerate() {
            let v: Vec<Complex64> = (0..d).map(|r| eig.eigenvectors.get(r, i)).collect();
            elements.push(ComplexMatrix::outer(&v, &v));
            labels.push(format!("{lam:+.6}"));
        }
        Self::new(elements, labels)
    }

    /// Projective measurement in the standard basis.
    pub fn computational(dim: usize) -> Result<Self> {
        let elements = (0..dim)
            .map(|i| {
                let mut v = vec![Complex64::new(0.0, 0.0); dim];
                v[i] = Complex64::new(1.0, 0.0);
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        let labels = (0..dim).map(|i| format!("{i}")).collect();
        Self::new(elements, labels)
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn outcome_count(&self) -> usize {
        self.elements.len()
    }

    pub fn completeness_residual(&self) -> f64 {
        self.completeness_residual
    }

    /// Minimum eigenvalue of each element, in element order.
    pub fn min_eigenvalues(&self) -> &[f64] {
        &self.min_eigenvalues
    }

    /// Whether every element is positive semidefinite within `slack`.
    pub fn is_positive(&self, slack: f64) -> bool {
        self.min_eigenvalues.iter().all(|&m| m >= -slack)
    }
}

/// Identity decomposition aimed at saturating the quantum bound:
/// `{ρ(θ), ∂₁ρ, …, ∂_qρ, I − ρ(θ) − Σ_k ∂_kρ}` — q + 2 elements.
///
/// Derivative elements must be Hermitian and traceless within 1e-8; they
/// are generically indefinite, so the result is a formal decomposition
/// whose outcome "probabilities" may be negative (reported, not hidden,
/// by [`outcome_probs`]).
pub fn build_saturating_povm(
    rho_theta: &DensityMatrix,
    state_derivs: &[ComplexMatrix],
) -> Result<Povm> {
    let d = rho_theta.dim();
    let mut elements = Vec::with_capacity(state_derivs.len() + 2);
    let mut labels = Vec::with_capacity(state_derivs.len() + 2);
    elements.push(rho_theta.matrix().clone());
    labels.push("state".into());
    for (k, drho) in state_derivs.iter().enumerate() {
        if drho.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "derivative {k} has dim {} (expected {d})",
                drho.dim()
            )));
        }
        let herm = drho.hermiticity_residual();
        if herm > 1e-8 {
            return Err(Error::Precondition(format!(
                "state derivative {k} is not Hermitian (residual {herm:.3e})"
            )));
        }
        let tr = drho.trace().norm();
        if tr > 1e-8 {
            return Err(Error::Precondition(format!(
                "state derivative {k} is not traceless (|trace| {tr:.3e})"
            )));
        }
        elements.push(drho.clone());
        labels.push(format!("deriv{k}"));
    }
    let mut rest = ComplexMatrix::identity(d).sub(rho_theta.matrix());
    for drho in state_derivs {
        rest = rest.sub(drho);
    }
    elements.push(rest);
    labels.push("rest".into());
    Povm::new(elements, labels)
}

/// Outcome statistics of a measurement on a state.
#[derive(Debug, Clone)]
pub struct OutcomeProbs {
    pub probs: Vec<f64>,
    /// Indices of outcomes with probability below −1e-10 (possible for the
    /// indefinite saturation-oriented decomposition).
    pub negative_outcomes: Vec<usize>,
    /// `|Σ_l p_l − 1|`.
    pub sum_residual: f64,
}

/// Born-rule outcome values `p_l = Tr(P_l ρ)`; the total must be 1 within
/// 1e-8. Negative values are flagged, not clipped.
pub fn outcome_probs(povm: &Povm, rho: &DensityMatrix) -> Result<OutcomeProbs> {
    if povm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "POVM dim {} vs state dim {}",
            povm.dim(),
            rho.dim()
        )));
    }
    let probs: Vec<f64> = povm
        .elements()
        .iter()
        .map(|p| p.mul(rho.matrix()).trace().re)
        .collect();
    let negative_outcomes = probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p < -1e-10)
        .map(|(i, _)| i)
        .collect();
    let sum_residual = (probs.iter().sum::<f64>() - 1.0).abs();
    if sum_residual > tol::POVM_COMPLETENESS {
        return Err(Error::Numerical(format!(
            "outcome values sum to 1 only within {sum_residual:.3e}"
        )));
    }
    Ok(OutcomeProbs {
        probs,
        negative_outcomes,
        sum_residual,
    })
}

/// Classical Fisher information estimated by central differences.
#[derive(Debug, Clone)]
pub struct FimEstimate {
    pub matrix: SymMatrix,
    /// Outcomes excluded because their probability at θ fell below 1e-12.
    pub dropped_outcomes: usize,
}

/// Classical FIM of `povm` on the state family at θ:
/// `F_jk = Σ_l (∂_j p_l)(∂_k p_l)/p_l`, with `∂p` from central differences
/// of step `h`.
///
/// A negative probability at the evaluation point is an error; outcomes
/// with `p_l < 1e-12` are dropped from the sum and counted.
pub fn classical_fim_fd(
    povm: &Povm,
    family: impl Fn(&[f64]) -> Result<DensityMatrix>,
    theta: &[f64],
    h: f64,
) -> Result<FimEstimate> {
    if h <= 0.0 {
        return Err(Error::Precondition(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let q = theta.len();
    let at = outcome_probs(povm, &family(theta)?)?;
    if let Some(&l) = at.negative_outcomes.first() {
        return Err(Error::NegativeProbability {
            outcome: l,
            probability: at.probs[l],
        });
    }
    let m = povm.outcome_count();
    let mut dp = vec![vec![0.0; m]; q];
    for (k, row) in dp.iter_mut().enumerate() {
        let mut plus = theta.to_vec();
        let mut minus = theta.to_vec();
        plus[k] += h;
        minus[k] -= h;
        let pp = outcome_probs(povm, &family(&plus)?)?;
        let pm = outcome_probs(povm, &family(&minus)?)?;
        for l in 0..m {
            row[l] = (pp.probs[l] - pm.probs[l]) / (2.0 * h);
        }
    }
    let kept: Vec<usize> = (0..m).filter(|&l| at.probs[l] >= tol::PROB_FLOOR).collect();
    let dropped_outcomes = m - kept.len();
    let matrix = SymMatrix::from_fn_symmetrized(q, |j, k| {
        kept.iter()
            .map(|&l| dp[j][l] * dp[k][l] / at.probs[l])
            .sum()
    });
    Ok(FimEstimate {
        matrix,
        dropped_outcomes,
    })
}

/// Classical FIM in the measured-operator limit where the bath of the
/// dilation is also read out:
/// `F_jk = 4[Re Tr(Σ_l ∂_jΠ_l† ∂_kΠ_l ρ₀) + Re(s_j s_k)]` with
/// `s_k = Tr(Σ_l ∂_kΠ_l† Π_l ρ₀)`.
///
/// For a trace-preserving family `s_k` is purely imaginary and this equals
/// the channel-level quantum bound; for a unitary family it equals the
/// ALD-based QFIM. Both identities are exercised in tests.
pub fn classical_fim_limit(
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
    let q = theta.len();
    let derivs: Vec<Vec<ComplexMatrix>> = (0..q)
        .map(|k| kraus_derivatives(ch, theta, k))
        .collect::<Result<_>>()?;
    let rho = rho0.matrix();
    let s: Vec<Complex64> = (0..q)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (dop, op) in derivs[k].iter().zip(&ops) {
                acc += dop.adjoint().mul(op).mul(rho).trace();
            }
            acc
        })
        .collect();
    let mut k1 = vec![vec![Complex64::new(0.0, 0.0); q]; q];
    for j in 0..q {
        for k in 0..q {
            let mut acc = Complex64::new(0.0, 0.0);
            for (dj, dk) in derivs[j].iter().zip(&derivs[k]) {
                acc += dj.adjoint().mul(dk).mul(rho).trace();
            }
            k1[j][k] = acc;
        }
    }
    Ok(SymMatrix::from_fn_symmetrized(q, |j, k| {
        4.0 * (k1[j][k].re + (s[j] * s[k]).re)
    }))
}
