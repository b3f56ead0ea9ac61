//! Small real symmetric matrices (the q×q information matrices) and the
//! report container that carries them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, re, ComplexMatrix};
use crate::tol;

/// Dense real matrix intended to be symmetric; q is small (the parameter
/// count), so everything is direct.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from an entry function, symmetrizing via the (j,k)/(k,j)
    /// average.
    pub fn from_fn_symmetrized(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = 0.5 * (f(i, j) + f(j, i));
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn symmetry_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Errors unless symmetric within 1e-9.
    pub fn require_symmetric(&self) -> Result<()> {
        let r = self.symmetry_residual();
        if r > 1e-9 {
            return Err(Error::NotHermitian {
                residual: r,
                tolerance: 1e-9,
            });
        }
        Ok(())
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |i, j| re(self.get(i, j)))
    }

    /// Ascending eigenvalues (the matrix is promoted to a complex Hermitian
    /// one; asymmetry beyond 1e-9 is rejected first).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.require_symmetric()?;
        let sym = Self::from_fn_symmetrized(self.dim, |i, j| self.get(i, j));
        Ok(linalg::herm_eig(&sym.to_complex())?.eigenvalues)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// PSD check with the crate-wide floor, scaled by the matrix magnitude.
    pub fn require_psd(&self) -> Result<()> {
        let floor = tol::PSD_FLOOR * self.max_abs().max(1.0);
        let min = self.min_eigenvalue()?;
        if min < floor {
            return Err(Error::Numerical(format!(
                "matrix has eigenvalue {min:.3e} below PSD floor {floor:.3e}"
            )));
        }
        Ok(())
    }

    /// Inverse via eigendecomposition, with a condition-number guard:
    /// near-singular input is an explicit rank-deficiency error, never a
    /// silent pseudo-inverse.
    pub fn inverse(&self) -> Result<Self> {
        self.require_symmetric()?;
        let eig = linalg::herm_eig(&self.to_complex())?;
        let abs_max = eig
            .eigenvalues
            .iter()
            .map(|l| l.abs())
            .fold(0.0f64, f64::max);
        let abs_min = eig
            .eigenvalues
            .iter()
            .map(|l| l.abs())
            .fold(f64::INFINITY, f64::min);
        let cond = if abs_min == 0.0 {
            f64::INFINITY
        } else {
            abs_max / abs_min
        };
        if !cond.is_finite() || cond > tol::COND_GUARD {
            return Err(Error::RankDeficient {
                cond,
                guard: tol::COND_GUARD,
            });
        }
        let inv = eig.map(|l| re(1.0 / l));
        Ok(Self::from_fn_symmetrized(self.dim, |i, j| inv.get(i, j).re))
    }
}

/// Bundle of computed information matrices for one scenario, with method
/// tags and saturation diagnostics.
#[derive(Debug, Clone, Default, Serialize)]
pub struct BoundReport {
    /// Parameter count q.
    pub q: usize,
    /// Quantum Fisher information matrix, with a tag naming the method that
    /// produced it.
    pub j_q: Option<(SymMatrix, String)>,
    /// Classical Fisher information matrix of a configured POVM.
    pub j_c: Option<(SymMatrix, String)>,
    /// Channel-level upper bound.
    pub c_q: Option<(SymMatrix, String)>,
    /// Named saturation residuals.
    pub saturation_residuals: BTreeMap<String, f64>,
    /// Experiment repetition count ν; a pure scalar divisor in cost
    /// summaries, never baked into the matrices.
    pub repetitions: u64,
}

impl BoundReport {
    pub fn new(q: usize) -> Self {
        Self {
            q,
            repetitions: 1,
            ..Self::default()
        }
    }

    fn matrices(&self) -> impl Iterator<Item = (&'static str, &SymMatrix)> {
        [
            ("j_q", self.j_q.as_ref()),
            ("j_c", self.j_c.as_ref()),
            ("c_q", self.c_q.as_ref()),
        ]
        .into_iter()
        .filter_map(|(name, m)| m.map(|(mat, _)| (name, mat)))
    }

    /// Check the container invariants: every present matrix is q×q,
    /// symmetric and PSD within the floors, and when both J_Q and C_Q are
    /// present, `C_Q − J_Q` has min eigenvalue ≥ −1e-8.
    pub fn validate(&self) -> Result<()> {
        for (name, m) in self.matrices() {
            if m.dim() != self.q {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}×{} but q = {}",
                    m.dim(),
                    m.dim(),
                    self.q
                )));
            }
            m.require_symmetric()?;
            m.require_psd()?;
        }
        if let (Some((jq, _)), Some((cq, _))) = (&self.j_q, &self.c_q) {
            let gap = cq.sub(jq).min_eigenvalue()?;
            if gap < -1e-8 {
                return Err(Error::Numerical(format!(
                    "C_Q − J_Q has eigenvalue {gap:.3e} below −1e-8"
                )));
            }
        }
        Ok(())
    }

    /// Scalar cost `Tr(G·M⁻¹)/ν` for a cost matrix G against one of the
    /// stored matrices.
    pub fn scalar_cost(&self, g: &SymMatrix, matrix: &SymMatrix) -> Result<f64> {
        if self.repetitions == 0 {
            return Err(Error::Precondition("repetition count must be ≥ 1".into()));
        }
        let inv = matrix.inverse()?;
        Ok(g.mul(&inv).trace() / self.repetitions as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diagonal() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 0, 2.0);
        m.set(1, 1, -1.0);
        m.set(2, 2, 5.0);
        let eigs = m.eigenvalues().unwrap();
        assert!((eigs[0] + 1.0).abs() < 1e-14);
        assert!((eigs[1] - 2.0).abs() < 1e-14);
        assert!((eigs[2] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_roundtrip() {
        let mut m = SymMatrix::identity(2).scale(3.0);
        m.set(0, 1, 0.5);
        m.set(1, 0, 0.5);
        let inv = m.inverse().unwrap();
        let prod = m.mul(&inv);
        assert!((prod.get(0, 0) - 1.0).abs() < 1e-12);
        assert!((prod.get(1, 1) - 1.0).abs() < 1e-12);
        assert!(prod.get(0, 1).abs() < 1e-12);
    }

    #[test]
    fn inverse_guards_rank_deficiency() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 0, 1.0);
        m.set(1, 1, 1e-12);
        assert!(matches!(m.inverse(), Err(Error::RankDeficient { .. })));
        assert!(matches!(
            SymMatrix::zeros(2).inverse(),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn report_validation_catches_ordering_violation() {
        let mut report = BoundReport::new(1);
        let mut jq = SymMatrix::zeros(1);
        jq.set(0, 0, 4.0);
        let mut cq = SymMatrix::zeros(1);
        cq.set(0, 0, 3.0);
        report.j_q = Some((jq, "exact".into()));
        report.c_q = Some((cq, "kraus".into()));
        assert!(report.validate().is_err());
    }

    #[test]
    fn report_scalar_cost_divides_by_repetitions() {
        let mut report = BoundReport::new(2);
        report.repetitions = 4;
        let m = SymMatrix::identity(2).scale(2.0);
        let cost = report.scalar_cost(&SymMatrix::identity(2), &m).unwrap();
        assert!((cost - (2.0 * 0.5) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 1, 1.0);
        assert!(m.eigenvalues().is_err());
        assert!(m.require_symmetric().is_err());
    }
}
