//! Centralized numerical tolerances.
//!
//! Each constant documents why its value is what it is, so thresholds are
//! auditable instead of being scattered magic numbers. Tolerances fall into
//! three bands: machine-precision checks on exact constructions (~1e-12),
//! accumulated-roundoff checks on eigendecompositions and contractions
//! (~1e-10), and method-error checks on finite differences (1e-4 .. 1e-7).

/// Hermiticity gate, max-abs of `M - M†`. Inputs beyond this are rejected,
/// never symmetrized, so upstream corruption surfaces immediately.
pub const HERMITICITY: f64 = 1e-10;

/// Eigendecomposition quality: reconstruction `V diag(λ) V†` and unitarity
/// `V†V = I`, both max-abs.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// Unit-trace gate for density matrices.
pub const UNIT_TRACE: f64 = 1e-10;

/// Density-matrix positivity floor: eigenvalues in `[-1e-9, 0)` are treated
/// as roundoff zeros; anything below is a hard error.
pub const DENSITY_EIG_FLOOR: f64 = -1e-9;

/// Kraus completeness gate, max-abs of `ΣΠ†Π - I`, enforced where a
/// trace-preserving channel is actually applied.
pub const COMPLETENESS: f64 = 1e-10;

/// Unitality threshold on the residual `max |ΣΠΠ† - I|`.
pub const UNITALITY: f64 = 1e-10;

/// POVM completeness, max-abs of `ΣP_m - I`.
pub const POVM_COMPLETENESS: f64 = 1e-8;

/// Outcome probabilities below this are excluded from classical Fisher
/// information sums (their contribution is the 0/0 limit handled by the
/// dedicated limit formula); the exclusion count is reported.
pub const PROB_FLOOR: f64 = 1e-12;

/// Positive-semidefiniteness floor for bound matrices, scaled by the
/// matrix max-abs entry to absorb roundoff.
pub const PSD_FLOOR: f64 = -1e-8;

/// Condition-number guard for matrix inversion: beyond this, inversion is a
/// rank-deficiency error rather than a silent pseudo-inverse.
pub const COND_GUARD: f64 = 1e8;

/// Default central-difference step. Balances O(h²) truncation against
/// f64 rounding (≈ eps/h) for unit-scale generators: both error terms are
/// ~1e-10 at h = 1e-5.
pub const FD_STEP: f64 = 1e-5;

/// Step for central second differences of state families (used when second
/// derivatives are approximated from a supplied family).
pub const FD_STEP_SECOND: f64 = 1e-4;

/// Default step of the fidelity-based QFIM probe. Richardson extrapolation
/// cancels the leading O(ε²) truncation term. Note: with eigen-sqrt noise of
/// order d·1e-8 in each fidelity, second differences carry ~8·δF/ε² of
/// rounding noise, so validation suites pass a larger explicit ε (0.02)
/// where 1e-4-level agreement is asserted.
pub const FIDELITY_STEP: f64 = 1e-3;

/// Eigenvalue clamp inside matrix square roots: negatives in
/// `[-1e-9, 0)` clamp to zero; below that is an error.
pub const SQRT_EIG_FLOOR: f64 = -1e-9;

/// Jacobi eigensolver convergence: off-diagonal Frobenius mass relative to
/// the matrix scale at which iteration stops.
pub const JACOBI_OFF_DIAG: f64 = 1e-14;

/// Dense Kronecker-product dimension cap (brute-force system ⊗ bath paths).
pub const KRON_DIM_CAP: usize = 1 << 13;

/// Brute-force QFIM dimension cap.
pub const QFIM_EXACT_DIM_CAP: usize = 1 << 10;

/// Kraus-operator count cap for Stinespring dilation.
pub const STINESPRING_KRAUS_CAP: usize = 16;

/// Particle-count cap for GHZ-type state construction (dense 2^n vector).
pub const GHZ_N_CAP: usize = 12;

/// Particle-count cap for brute-force uniform local channels (dense 2^n
/// density matrix with 2^n Kraus terms).
pub const UNIFORM_CHANNEL_N_CAP: usize = 10;
