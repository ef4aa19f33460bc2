//! Sparse and dense matrices with the direct and Krylov solvers the scheme
//! needs.

pub mod banded;
pub mod dense;
pub mod krylov;
pub mod sparse;

pub use banded::BandedLu;
pub use dense::DenseMatrix;
pub use krylov::{bicgstab, conjugate_gradient, relative_residual, IterativeConfig, LinearOperator, SolveStats};
pub use sparse::SparseMatrix;

use crate::{Error, Result};

/// Solver selection, declared by the caller rather than detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverHint {
    /// Symmetric positive definite: conjugate gradients.
    Spd,
    /// General: BiCGSTAB.
    Nonsymmetric,
    /// Direct banded LU with partial pivoting.
    Banded,
}

/// Solves `A x = rhs` with the method named by `hint`.
pub fn solve(a: &SparseMatrix, rhs: &[f64], hint: SolverHint) -> Result<(Vec<f64>, SolveStats)> {
    solve_with(a, rhs, hint, None, &IterativeConfig::default())
}

/// As [`solve`], with an initial guess for the iterative paths and an
/// explicit stopping rule.
pub fn solve_with(
    a: &SparseMatrix,
    rhs: &[f64],
    hint: SolverHint,
    x0: Option<&[f64]>,
    config: &IterativeConfig,
) -> Result<(Vec<f64>, SolveStats)> {
    if a.n_rows() != a.n_cols() {
        return Err(Error::DimensionMismatch {
            expected: a.n_rows(),
            got: a.n_cols(),
        });
    }
    if rhs.len() != a.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: a.n_rows(),
            got: rhs.len(),
        });
    }
    match hint {
        SolverHint::Spd => conjugate_gradient(a, rhs, x0, config),
        SolverHint::Nonsymmetric => bicgstab(a, rhs, x0, config),
        SolverHint::Banded => {
            let x = BandedLu::factor(a)?.solve(rhs)?;
            let residual = relative_residual(a, &x, rhs);
            Ok((x, SolveStats { iterations: 0, residual }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let a = SparseMatrix::identity(4);
        let b = [1.0, -2.0, 3.5, 0.0];
        for hint in [SolverHint::Spd, SolverHint::Nonsymmetric, SolverHint::Banded] {
            let (x, _) = solve(&a, &b, hint).unwrap();
            for (u, v) in x.iter().zip(&b) {
                assert!((u - v).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn poisson_quarter_grid_nodal_values() {
        // -u'' = 2 on (0,1), u = x(1-x); finite differences are exact here.
        let h = 0.25;
        let mut t = Vec::new();
        for i in 0..3 {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i < 2 {
                t.push((i, i + 1, -1.0));
            }
        }
        let a = SparseMatrix::from_triplets(3, 3, &t).unwrap();
        let rhs = vec![2.0 * h * h; 3];
        let exact: Vec<f64> = (1..=3).map(|i| {
            let x = i as f64 * h;
            x * (1.0 - x)
        }).collect();
        let dense = a.to_dense().solve(&rhs).unwrap();
        for hint in [SolverHint::Spd, SolverHint::Nonsymmetric, SolverHint::Banded] {
            let (x, _) = solve(&a, &rhs, hint).unwrap();
            for i in 0..3 {
                assert!((x[i] - exact[i]).abs() < 1e-12);
                assert!((x[i] - dense[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shape_errors() {
        let a = SparseMatrix::zeros(2, 3);
        assert!(solve(&a, &[0.0, 0.0], SolverHint::Spd).is_err());
        let b = SparseMatrix::identity(2);
        assert!(solve(&b, &[0.0], SolverHint::Banded).is_err());
    }
}
