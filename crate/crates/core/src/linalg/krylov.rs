use crate::{Error, Result};

use super::dense::DenseMatrix;
use super::sparse::SparseMatrix;

/// Square linear map `y = A x`.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Diagonal used for Jacobi scaling, if cheaply available.
    fn diagonal(&self) -> Option<Vec<f64>> {
        None
    }
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.n_rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y);
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        Some(SparseMatrix::diagonal(self))
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n_rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y);
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        Some((0..self.n_rows()).map(|i| self.get(i, i)).collect())
    }
}

/// Stopping rule for the Krylov solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterativeConfig {
    /// Target `||b - A x|| <= tol ||b||`.
    pub tol: f64,
    /// Iteration cap; `None` means `10 n`.
    pub max_iter: Option<usize>,
}

impl Default for IterativeConfig {
    fn default() -> Self {
        IterativeConfig {
            tol: 1e-10,
            max_iter: None,
        }
    }
}

impl IterativeConfig {
    fn cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(10 * n.max(1))
    }
}

/// Iterations spent and final relative residual of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `||b - A x|| / ||b||` (absolute residual when `b = 0`).
pub fn relative_residual<A: LinearOperator + ?Sized>(a: &A, x: &[f64], b: &[f64]) -> f64 {
    let mut ax = vec![0.0; b.len()];
    a.apply(x, &mut ax);
    let r: f64 = ax.iter().zip(b).map(|(p, q)| (q - p) * (q - p)).sum::<f64>().sqrt();
    let bn = norm(b);
    if bn == 0.0 {
        r
    } else {
        r / bn
    }
}

fn inverse_diagonal<A: LinearOperator + ?Sized>(a: &A) -> Vec<f64> {
    match a.diagonal() {
        Some(d) => d.into_iter().map(|v| if v != 0.0 { 1.0 / v } else { 1.0 }).collect(),
        None => vec![1.0; a.dim()],
    }
}

fn check_dims<A: LinearOperator + ?Sized>(a: &A, b: &[f64], x0: Option<&[f64]>) -> Result<()> {
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.len(),
        });
    }
    if let Some(x0) = x0 {
        if x0.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: x0.len(),
            });
        }
    }
    Ok(())
}

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite
/// operators.
pub fn conjugate_gradient<A: LinearOperator + ?Sized>(
    a: &A,
    b: &[f64],
    x0: Option<&[f64]>,
    config: &IterativeConfig,
) -> Result<(Vec<f64>, SolveStats)> {
    check_dims(a, b, x0)?;
    let n = a.dim();
    let bn = norm(b);
    let mut x = x0.map_or_else(|| vec![0.0; n], |v| v.to_vec());
    if bn == 0.0 {
        return Ok((vec![0.0; n], SolveStats::default()));
    }
    let dinv = inverse_diagonal(a);
    let mut r = vec![0.0; n];
    a.apply(&x, &mut r);
    r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
    let mut z: Vec<f64> = r.iter().zip(&dinv).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let cap = config.cap(n);
    let mut iterations = 0;
    while iterations < cap {
        if norm(&r) <= config.tol * bn {
            // Confirm with the true residual; restart from it if they drifted.
            a.apply(&x, &mut ap);
            r.iter_mut().zip(b).zip(&ap).for_each(|((ri, bi), axi)| *ri = bi - axi);
            if norm(&r) <= config.tol * bn {
                break;
            }
            for i in 0..n {
                z[i] = r[i] * dinv[i];
            }
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
        }
        a.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let step = rz / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * dinv[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        iterations += 1;
    }
    finish(a, b, x, iterations, config)
}

/// Jacobi-preconditioned BiCGSTAB for general nonsymmetric operators.
pub fn bicgstab<A: LinearOperator + ?Sized>(
    a: &A,
    b: &[f64],
    x0: Option<&[f64]>,
    config: &IterativeConfig,
) -> Result<(Vec<f64>, SolveStats)> {
    check_dims(a, b, x0)?;
    let n = a.dim();
    let bn = norm(b);
    let mut x = x0.map_or_else(|| vec![0.0; n], |v| v.to_vec());
    if bn == 0.0 {
        return Ok((vec![0.0; n], SolveStats::default()));
    }
    let dinv = inverse_diagonal(a);
    let cap = config.cap(n);
    let mut r = vec![0.0; n];
    let mut iterations = 0;
    let mut restarts = 0;
    loop {
        a.apply(&x, &mut r);
        r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
        let r_hat = r.clone();
        let mut rho = 1.0;
        let mut alpha = 1.0;
        let mut omega = 1.0;
        let mut v = vec![0.0; n];
        let mut p = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut s = vec![0.0; n];
        let mut z = vec![0.0; n];
        let mut t = vec![0.0; n];
        while iterations < cap {
            if norm(&r) <= config.tol * bn {
                break;
            }
            let rho_new = dot(&r_hat, &r);
            if rho_new.abs() < 1e-300 || omega == 0.0 {
                break;
            }
            let beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
                y[i] = p[i] * dinv[i];
            }
            a.apply(&y, &mut v);
            let denom = dot(&r_hat, &v);
            if denom.abs() < 1e-300 {
                break;
            }
            alpha = rho / denom;
            for i in 0..n {
                s[i] = r[i] - alpha * v[i];
            }
            iterations += 1;
            if norm(&s) <= config.tol * bn {
                for i in 0..n {
                    x[i] += alpha * y[i];
                }
                break;
            }
            for i in 0..n {
                z[i] = s[i] * dinv[i];
            }
            a.apply(&z, &mut t);
            let tt = dot(&t, &t);
            omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
            for i in 0..n {
                x[i] += alpha * y[i] + omega * z[i];
                r[i] = s[i] - omega * t[i];
            }
        }
        if relative_residual(a, &x, b) <= config.tol {
            break;
        }
        restarts += 1;
        if iterations >= cap || restarts > 20 {
            break;
        }
    }
    finish(a, b, x, iterations, config)
}

fn finish<A: LinearOperator + ?Sized>(
    a: &A,
    b: &[f64],
    x: Vec<f64>,
    iterations: usize,
    config: &IterativeConfig,
) -> Result<(Vec<f64>, SolveStats)> {
    let residual = relative_residual(a, &x, b);
    if residual <= config.tol {
        Ok((x, SolveStats { iterations, residual }))
    } else {
        Err(Error::SolverFailure { iterations, residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SparseMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        SparseMatrix::from_triplets(n, n, &t).unwrap()
    }

    #[test]
    fn cg_on_laplacian() {
        let a = laplacian(50);
        let b: Vec<f64> = (0..50).map(|i| (i as f64 * 0.1).sin()).collect();
        let (x, stats) = conjugate_gradient(&a, &b, None, &IterativeConfig::default()).unwrap();
        assert!(relative_residual(&a, &x, &b) < 1e-9);
        assert!(stats.iterations <= 60);
    }

    #[test]
    fn bicgstab_on_convection_diffusion() {
        let n = 60;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.5));
            if i > 0 {
                t.push((i, i - 1, -1.4));
            }
            if i + 1 < n {
                t.push((i, i + 1, -0.6));
            }
        }
        let a = SparseMatrix::from_triplets(n, n, &t).unwrap();
        let b = vec![1.0; n];
        let (x, _) = bicgstab(&a, &b, None, &IterativeConfig::default()).unwrap();
        assert!(relative_residual(&a, &x, &b) < 1e-9);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let a = laplacian(5);
        let (x, stats) = bicgstab(&a, &[0.0; 5], None, &IterativeConfig::default()).unwrap();
        assert_eq!(x, vec![0.0; 5]);
        assert_eq!(stats.iterations, 0);
    }

    #[test]
    fn iteration_cap_reports_failure() {
        let a = laplacian(200);
        let b = vec![1.0; 200];
        let config = IterativeConfig {
            tol: 1e-12,
            max_iter: Some(3),
        };
        match conjugate_gradient(&a, &b, None, &config) {
            Err(Error::SolverFailure { iterations, residual }) => {
                assert_eq!(iterations, 3);
                assert!(residual > 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
