//! Scenario configuration: JSON in, validated core objects out.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use qbound_core::bounds::magfield_single_particle_generators;
use qbound_core::channels::{
    amplitude_damping_kraus, dephasing_kraus, pauli_split_channel,
};
use qbound_core::linalg::{pauli, re, ComplexMatrix};
use qbound_core::states::{
    apply_uniform_local_channel, dephased_ghz_marginals, ghz_state, superposed_ghz,
    PauliAxis,
};
use qbound_core::{DensityMatrix, KrausChannel};

use num_complex::Complex64;

/// Complex matrix as row-major `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixSpec {
    pub fn to_matrix(&self) -> anyhow::Result<ComplexMatrix> {
        if self.entries.len() != self.dim * self.dim {
            anyhow::bail!(
                "matrix of dim {} needs {} entries, got {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            );
        }
        let data: Vec<Complex64> = self
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Ok(ComplexMatrix::from_row_major(self.dim, data)?)
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.dim() * m.dim());
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let z = m.get(i, j);
                entries.push([z.re, z.im]);
            }
        }
        Self {
            dim: m.dim(),
            entries,
        }
    }
}

/// Probe specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProbeSpec {
    /// GHZ state along a Pauli axis (1, 2, or 3).
    Ghz { axis: usize },
    /// Normalized superposition of the three axis GHZ states.
    SuperposedGhz { weights: [f64; 3] },
    /// Explicit single-site density matrix (used as the one-particle
    /// marginal, with the two-particle marginal its product).
    Explicit { rho: MatrixSpec },
    /// Explicit one- and two-particle marginals.
    Marginals { rho1: MatrixSpec, rho2: MatrixSpec },
}

/// Noise/channel specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    /// No noise: purely unitary rotation family.
    Unitary,
    /// Per-qubit phase damping.
    Dephasing { lambda: f64 },
    /// Per-qubit amplitude damping.
    AmplitudeDamping { kappa: f64 },
    /// θ-dependent split-generator channel.
    PauliSplit,
    /// Explicit constant Kraus operators (single qubit).
    Explicit { kraus: Vec<MatrixSpec> },
}

/// Measurement specification for classical-FIM commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PovmSpec {
    /// Projective measurement in the standard basis.
    Computational,
    /// Eigenbasis of a Hermitian observable.
    Observable { matrix: MatrixSpec },
    /// Explicit elements.
    Explicit { elements: Vec<MatrixSpec> },
}

/// Quantities a run can compute.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash,
)]
#[serde(rename_all = "snake_case")]
pub enum ComputeTask {
    JqExact,
    JqRdm,
    Cq,
    CqRdm,
    FimFd,
    FimLimit,
    Saturation,
    Holevo,
    FidelityOracle,
}

impl ComputeTask {
    pub fn name(self) -> &'static str {
        match self {
            ComputeTask::JqExact => "jq_exact",
            ComputeTask::JqRdm => "jq_rdm",
            ComputeTask::Cq => "cq",
            ComputeTask::CqRdm => "cq_rdm",
            ComputeTask::FimFd => "fim_fd",
            ComputeTask::FimLimit => "fim_limit",
            ComputeTask::Saturation => "saturation",
            ComputeTask::Holevo => "holevo",
            ComputeTask::FidelityOracle => "fidelity_oracle",
        }
    }
}

/// Numerical knobs with spec'd defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Step for finite-difference probability derivatives.
    pub fd_step: f64,
    /// Base step for the fidelity-curvature oracle.
    pub fidelity_step: f64,
    /// PSD slack when validating computed matrices.
    pub psd_slack: f64,
    /// Gate for saturation-residual verdicts.
    pub saturation_gate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            fd_step: 1e-4,
            fidelity_step: 0.02,
            psd_slack: 1e-8,
            saturation_gate: 1e-10,
        }
    }
}

fn default_seed() -> u64 {
    0
}

/// One batch scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario_id: String,
    /// Free-form commentary; ignored by the tool.
    #[serde(default)]
    pub notes: Option<String>,
    pub probe: ProbeSpec,
    pub channel: ChannelSpec,
    /// Rotation angles; length sets the parameter count q.
    pub theta: Vec<f64>,
    /// Particle numbers for marginal-assembled quantities.
    pub n_list: Vec<u64>,
    pub compute: BTreeSet<ComputeTask>,
    #[serde(default)]
    pub povm: Option<PovmSpec>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.scenario_id.is_empty() {
            anyhow::bail!("scenario_id must be non-empty");
        }
        if self.theta.is_empty() || self.theta.len() > 3 {
            anyhow::bail!("theta must have 1..=3 components, got {}", self.theta.len());
        }
        if self.theta.iter().any(|t| !t.is_finite()) {
            anyhow::bail!("theta contains a non-finite value");
        }
        if self.n_list.is_empty() {
            anyhow::bail!("n_list must be non-empty");
        }
        if self.n_list.iter().any(|&n| n == 0) {
            anyhow::bail!("n_list entries must be positive");
        }
        if self.compute.is_empty() {
            anyhow::bail!("compute set must name at least one quantity");
        }
        if matches!(self.probe, ProbeSpec::Ghz { axis } if !(1..=3).contains(&axis)) {
            anyhow::bail!("probe axis must be 1, 2, or 3");
        }
        if let ChannelSpec::Dephasing { lambda } = self.channel {
            if !(lambda >= 0.0) {
                anyhow::bail!("dephasing rate must be nonnegative");
            }
        }
        if let ChannelSpec::AmplitudeDamping { kappa } = self.channel {
            if !(kappa >= 0.0) {
                anyhow::bail!("amplitude-damping rate must be nonnegative");
            }
        }
        Ok(())
    }

    /// θ padded to three components for the rotation-generator family.
    pub fn theta3(&self) -> [f64; 3] {
        let mut t = [0.0; 3];
        for (dst, src) in t.iter_mut().zip(&self.theta) {
            *dst = *src;
        }
        t
    }
}

/// Core objects assembled from a validated config.
///
/// Quantum-side quantities (`jq_*`, marginal saturation, Holevo witness,
/// fidelity oracle) see the noise as probe preparation: the family is the
/// unitary rotation of the noise-applied probe, and the `noisy` marginals
/// apply. Channel-side quantities (`cq_*`, measured limit, channel
/// saturation) see the noise inside the encoding: the family is the
/// single-site channel `noise ∘ rotation` (or the split-generator family)
/// acting on the clean probe, and the `clean` marginals apply. The two
/// pictures coincide when the noise commutes with the rotation.
pub struct ResolvedScenario {
    pub config: ScenarioConfig,
    /// One-particle marginal of the probe, no noise.
    pub rho1_clean: DensityMatrix,
    /// Two-particle marginal of the probe, no noise.
    pub rho2_clean: DensityMatrix,
    /// One-particle marginal after the noise stage hit every qubit.
    pub rho1_noisy: DensityMatrix,
    /// Two-particle marginal after the noise stage hit every qubit.
    pub rho2_noisy: DensityMatrix,
    /// Constant single-qubit noise stage, identity for unitary scenarios.
    pub noise: KrausChannel,
    /// θ-dependent single-site channel (noise ∘ rotation, or the
    /// split-generator family).
    pub site_channel: KrausChannel,
    /// Per-particle rotation generators (σ₁, σ₂, σ₃ truncated to q).
    pub site_generators: Vec<ComplexMatrix>,
}

/// Largest register whose marginals are traced out of the explicit state
/// rather than taken from a closed form.
const EXACT_MARGINAL_MAX_N: usize = 10;

impl ResolvedScenario {
    /// N-particle probe without the noise stage.
    pub fn full_probe_clean(&self, n: usize) -> anyhow::Result<DensityMatrix> {
        let pure = match &self.config.probe {
            ProbeSpec::Ghz { axis } => ghz_state(PauliAxis::from_one_based(*axis)?, n)?,
            ProbeSpec::SuperposedGhz { weights } => superposed_ghz(*weights, n)?,
            ProbeSpec::Explicit { .. } | ProbeSpec::Marginals { .. } => {
                anyhow::bail!("explicit-marginal probes have no full-register form")
            }
        };
        Ok(pure.projector()?)
    }

    /// N-particle probe with the noise stage applied to every qubit;
    /// brute-force representation, capped by the state-construction guards.
    pub fn full_probe(&self, n: usize) -> anyhow::Result<DensityMatrix> {
        let rho = self.full_probe_clean(n)?;
        Ok(apply_uniform_local_channel(&rho, &self.noise)?)
    }

    /// One- and two-particle marginals appropriate for an `n`-qubit register.
    ///
    /// The cached closed forms are register-size independent, but the true
    /// marginals are not: at n = 2 a GHZ probe's "two-particle marginal" is
    /// the whole state and keeps the coherence between its branches, and a
    /// superposition probe's marginals carry cross terms that only die off
    /// like 2^{-n/2}. So structured probes are traced out of the explicit
    /// register while that is cheap (n ≤ 10 for superpositions, n = 2 for
    /// GHZ, whose closed form is already exact from n = 3 on), and the
    /// closed/asymptotic forms take over beyond.
    pub fn marginals_for(
        &self,
        n: usize,
        noisy: bool,
    ) -> anyhow::Result<(DensityMatrix, DensityMatrix)> {
        let trace_exact = match &self.config.probe {
            ProbeSpec::Ghz { .. } => n == 2,
            ProbeSpec::SuperposedGhz { .. } => n <= EXACT_MARGINAL_MAX_N,
            ProbeSpec::Explicit { .. } | ProbeSpec::Marginals { .. } => false,
        };
        if !trace_exact {
            return Ok(if noisy {
                (self.rho1_noisy.clone(), self.rho2_noisy.clone())
            } else {
                (self.rho1_clean.clone(), self.rho2_clean.clone())
            });
        }
        let full = if noisy {
            self.full_probe(n)?
        } else {
            self.full_probe_clean(n)?
        };
        Ok((full.marginal(&[0])?, full.marginal(&[0, 1])?))
    }

    /// Collective rotation generators on `n` qubits, truncated to q.
    pub fn collective_generators(&self, n: usize) -> anyhow::Result<Vec<ComplexMatrix>> {
        let gens = qbound_core::bounds::collective_pauli_generators(n)?;
        Ok(gens.into_iter().take(self.config.theta.len()).collect())
    }
}

fn probe_marginals(
    probe: &ProbeSpec,
    noise: &KrausChannel,
) -> anyhow::Result<(DensityMatrix, DensityMatrix)> {
    Ok(match probe {
        ProbeSpec::Ghz { axis } => {
            dephased_ghz_marginals(PauliAxis::from_one_based(*axis)?, noise)?
        }
        ProbeSpec::SuperposedGhz { weights } => {
            // Asymptotic marginals: the cross terms between branches decay
            // like 2^{-n/2}, leaving the weight-squared mixture of the
            // per-axis marginals. Small registers get exact traced
            // marginals via `marginals_for` instead of these.
            let wsq: [f64; 3] = std::array::from_fn(|k| weights[k] * weights[k]);
            let norm: f64 = wsq.iter().sum();
            if norm <= 0.0 {
                anyhow::bail!("superposition weights must not all vanish");
            }
            let mut acc1 = ComplexMatrix::zeros(2);
            let mut acc2 = ComplexMatrix::zeros(4);
            for (k, axis) in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z]
                .into_iter()
                .enumerate()
            {
                let (r1, r2) = dephased_ghz_marginals(axis, noise)?;
                acc1 = acc1.add(&r1.matrix().scale(re(wsq[k] / norm)));
                acc2 = acc2.add(&r2.matrix().scale(re(wsq[k] / norm)));
            }
            (
                DensityMatrix::new(acc1, vec![2])?,
                DensityMatrix::new(acc2, vec![2, 2])?,
            )
        }
        ProbeSpec::Explicit { rho } => {
            let single = DensityMatrix::new(rho.to_matrix()?, vec![2])?;
            let r1 = qbound_core::channels::apply_channel(noise, &single)?;
            let prod = qbound_core::linalg::kron(r1.matrix(), r1.matrix())?;
            let r2 = DensityMatrix::new(prod, vec![2, 2])?;
            (r1, r2)
        }
        ProbeSpec::Marginals { rho1, rho2 } => {
            // Explicit marginals are taken as-is; the noise stage is the
            // caller's responsibility for this probe kind.
            (
                DensityMatrix::new(rho1.to_matrix()?, vec![2])?,
                DensityMatrix::new(rho2.to_matrix()?, vec![2, 2])?,
            )
        }
    })
}

/// Parse + assemble a scenario into core objects.
pub fn resolve(config: ScenarioConfig) -> anyhow::Result<ResolvedScenario> {
    config.validate()?;
    let theta3 = config.theta3();
    let q = config.theta.len();

    let noise = match &config.channel {
        ChannelSpec::Unitary | ChannelSpec::PauliSplit => {
            qbound_core::channels::identity_channel(2)
        }
        ChannelSpec::Dephasing { lambda } => dephasing_kraus(*lambda)?,
        ChannelSpec::AmplitudeDamping { kappa } => amplitude_damping_kraus(*kappa)?,
        ChannelSpec::Explicit { kraus } => {
            let ops = kraus
                .iter()
                .map(MatrixSpec::to_matrix)
                .collect::<anyhow::Result<Vec<_>>>()?;
            KrausChannel::constant(ops)?
        }
    };

    let sigmas = pauli::all();
    let site_generators: Vec<ComplexMatrix> = sigmas.iter().take(q).cloned().collect();

    let site_channel = match &config.channel {
        ChannelSpec::PauliSplit => pauli_split_channel(&theta3)?,
        _ => KrausChannel::noisy_unitary(
            noise.kraus_ops().to_vec(),
            site_generators.clone(),
            &config.theta,
        )?,
    };

    let identity = qbound_core::channels::identity_channel(2);
    let (rho1_clean, rho2_clean) = probe_marginals(&config.probe, &identity)?;
    let (rho1_noisy, rho2_noisy) = probe_marginals(&config.probe, &noise)?;

    Ok(ResolvedScenario {
        config,
        rho1_clean,
        rho2_clean,
        rho1_noisy,
        rho2_noisy,
        noise,
        site_channel,
        site_generators,
    })
}

/// Effective single-particle generators of the rotation family at θ —
/// the α-conjugation images of the Pauli generators, truncated to q.
pub fn effective_generators(config: &ScenarioConfig) -> anyhow::Result<Vec<ComplexMatrix>> {
    let b = magfield_single_particle_generators(&config.theta3())?;
    Ok(b.into_iter().take(config.theta.len()).collect())
}

/// Shared closure type for state families handed to oracle routines.
pub type StateFamily = Arc<dyn Fn(&[f64]) -> qbound_core::Result<DensityMatrix> + Send + Sync>;
