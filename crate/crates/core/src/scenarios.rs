//! Seeded random estimation scenarios for cross-checking the bound
//! hierarchy.
//!
//! Each scenario is a full-rank mixed probe on one or two qubits, a
//! θ-dependent rotation with one or two random Hermitian generators, and a
//! constant noise stage (none, dephasing, amplitude damping, or a
//! split-generator channel on its exactly-complete axis). Generation is
//! deterministic in the seed, so frozen expectations stay valid across
//! runs and platforms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::channels::{
    amplitude_damping_kraus, dephasing_kraus, pauli_split_channel, KrausChannel,
};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::DensityMatrix;

/// Constant noise stage applied after the parameter-dependent rotation.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseKind {
    /// No noise: the scenario family is purely unitary.
    None,
    /// Phase damping at the given rate.
    Dephasing(f64),
    /// Amplitude damping at the given rate.
    AmplitudeDamping(f64),
    /// Split-generator channel along its third axis (exactly complete).
    PauliSplit(f64),
}

impl NoiseKind {
    fn label(&self) -> String {
        match self {
            NoiseKind::None => "unitary".into(),
            NoiseKind::Dephasing(l) => format!("dephasing({l:.3})"),
            NoiseKind::AmplitudeDamping(k) => format!("ampdamp({k:.3})"),
            NoiseKind::PauliSplit(w) => format!("pauli_split({w:.3})"),
        }
    }

    /// Single-qubit Kraus operators of the noise stage.
    fn kraus(&self) -> Result<Option<Vec<ComplexMatrix>>> {
        Ok(match self {
            NoiseKind::None => None,
            NoiseKind::Dephasing(l) => Some(dephasing_kraus(*l)?.kraus_ops().to_vec()),
            NoiseKind::AmplitudeDamping(k) => {
                Some(amplitude_damping_kraus(*k)?.kraus_ops().to_vec())
            }
            NoiseKind::PauliSplit(w) => {
                Some(pauli_split_channel(&[0.0, 0.0, *w])?.kraus_ops().to_vec())
            }
        })
    }
}

/// A single randomized estimation scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: usize,
    pub qubits: usize,
    pub noise: NoiseKind,
    pub theta: Vec<f64>,
    /// Hermitian rotation generators, one per parameter.
    pub generators: Vec<ComplexMatrix>,
    /// Full-rank mixed probe.
    pub probe: DensityMatrix,
    /// Assembled θ-dependent channel (rotation, then noise on every qubit).
    pub channel: KrausChannel,
}

impl Scenario {
    pub fn label(&self) -> String {
        format!(
            "scenario {:03}: {} qubit(s), q={}, {}",
            self.id,
            self.qubits,
            self.theta.len(),
            self.noise.label()
        )
    }

    /// The state family θ ↦ Λ(U(θ) ρ₀ U(θ)†) behind the scenario.
    pub fn evolved_state(&self, theta: &[f64]) -> Result<DensityMatrix> {
        let ops = self.channel.ops_at(theta)?;
        let mut out = ComplexMatrix::zeros(self.probe.dim());
        for op in &ops {
            out = out.add(&op.mul(self.probe.matrix()).mul(&op.adjoint()));
        }
        DensityMatrix::new(out, self.probe.factor_dims().to_vec())
    }
}

/// Random complex Gaussian entries via Box–Muller on uniform draws.
fn gaussian(rng: &mut ChaCha20Rng) -> Complex64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u1.ln()).sqrt();
    Complex64::new(r * u2.cos(), r * u2.sin())
}

/// Full-rank mixed state `GG†/Tr(GG†)` from a square Ginibre draw.
pub fn ginibre_state(rng: &mut ChaCha20Rng, dim: usize) -> Result<DensityMatrix> {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
    let m = g.mul(&g.adjoint());
    let tr = m.trace().re;
    if tr <= 0.0 {
        return Err(Error::Numerical("degenerate Ginibre draw".into()));
    }
    let factors = match dim {
        2 => vec![2],
        4 => vec![2, 2],
        d => vec![d],
    };
    DensityMatrix::new(m.scale(Complex64::new(1.0 / tr, 0.0)), factors)
}

/// Random traceless Hermitian matrix with entries of order one.
pub fn random_hermitian_traceless(rng: &mut ChaCha20Rng, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
    let h = g.add(&g.adjoint()).scale(Complex64::new(0.5, 0.0));
    let shift = h.trace() / dim as f64;
    let mut out = h;
    for i in 0..dim {
        let v = out.get(i, i) - shift;
        out.set(i, i, v);
    }
    out
}

/// Deterministic batch of scenarios cycling through qubit counts,
/// parameter counts, and noise stages so every combination appears.
pub fn seeded_scenarios(seed: u64, count: usize) -> Result<Vec<Scenario>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for id in 0..count {
        let qubits = 1 + (id / 4) % 2;
        let q = 1 + (id / 8) % 2;
        let dim = 1 << qubits;
        let noise = match id % 4 {
            0 => NoiseKind::None,
            1 => NoiseKind::Dephasing(rng.gen_range(0.2..1.0)),
            2 => NoiseKind::AmplitudeDamping(rng.gen_range(0.2..1.0)),
            _ => NoiseKind::PauliSplit(rng.gen_range(0.1..0.5)),
        };
        let generators: Vec<ComplexMatrix> = (0..q)
            .map(|_| random_hermitian_traceless(&mut rng, dim))
            .collect();
        let theta: Vec<f64> = (0..q).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let probe = ginibre_state(&mut rng, dim)?;
        let channel = match noise.kraus()? {
            None => KrausChannel::unitary(generators.clone(), &theta)?,
            Some(single_qubit_ops) => {
                let noise_ops = expand_noise_to_register(&single_qubit_ops, qubits)?;
                KrausChannel::noisy_unitary(noise_ops, generators.clone(), &theta)?
            }
        };
        out.push(Scenario {
            id,
            qubits,
            noise,
            theta,
            generators,
            probe,
            channel,
        });
    }
    Ok(out)
}

/// Tensor products of the single-qubit noise operators over every qubit of
/// the register.
fn expand_noise_to_register(
    single: &[ComplexMatrix],
    qubits: usize,
) -> Result<Vec<ComplexMatrix>> {
    let mut ops = vec![ComplexMatrix::identity(1)];
    for _ in 0..qubits {
        let mut next = Vec::with_capacity(ops.len() * single.len());
        for left in &ops {
            for right in single {
                next.push(crate::linalg::kron(left, right)?);
            }
        }
        ops = next;
    }
    Ok(ops)
}
