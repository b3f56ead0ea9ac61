//! Numerical toolkit for multiparameter quantum estimation bounds.
//!
//! The crate computes quantum Fisher information matrices for unitary and
//! noisy-channel parameter families (exact, and through one- and
//! two-particle reduced density matrices for permutation-invariant probes),
//! the channel-level upper bound obtained by tracing out the dilation bath,
//! measurement-saturation diagnostics, classical Fisher information of
//! explicit POVMs, and a Holevo-type witness — together with the state and
//! channel constructions needed to drive them.

pub mod bounds;
pub mod channels;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod scenarios;
pub mod states;
pub mod sym;
pub mod tol;

pub use bounds::{AldSet, SiteDerivatives, SuperHeisenbergParts};
pub use channels::{GeneratorSet, KrausChannel};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use measurement::{FimEstimate, OutcomeProbs, Povm};
pub use states::{DensityMatrix, PauliAxis, PureState};
pub use sym::{BoundReport, SymMatrix};
