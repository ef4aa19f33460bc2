use crate::{Error, Result};

use super::sparse::SparseMatrix;

/// LU factorization with partial pivoting of a square banded matrix.
///
/// Row `i` stores columns `i - kl ..= i + ku + kl`; the extra `kl`
/// superdiagonals hold the fill created by row interchanges.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    width: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    pub fn factor(matrix: &SparseMatrix) -> Result<Self> {
        let n = matrix.n_rows();
        if matrix.n_cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.n_cols(),
            });
        }
        let (kl, ku) = matrix.bandwidths();
        let upper = ku + kl;
        let width = kl + upper + 1;
        let mut lu = BandedLu {
            n,
            kl,
            width,
            data: vec![0.0; n * width],
            pivots: vec![0; n],
        };
        for i in 0..n {
            let (cols, vals) = matrix.row(i);
            for (j, v) in cols.iter().zip(vals) {
                let idx = lu.at(i, *j);
                lu.data[idx] = *v;
            }
        }
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut pmax = lu.data[lu.at(k, k)].abs();
            for i in (k + 1)..=last_row {
                let v = lu.data[lu.at(i, k)].abs();
                if v > pmax {
                    pmax = v;
                    p = i;
                }
            }
            if pmax == 0.0 || !pmax.is_finite() {
                return Err(Error::SolverFailure {
                    iterations: k,
                    residual: f64::INFINITY,
                });
            }
            lu.pivots[k] = p;
            let last_col = (k + upper).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (lu.at(k, j), lu.at(p, j));
                    lu.data.swap(a, b);
                }
            }
            let pivot = lu.data[lu.at(k, k)];
            for i in (k + 1)..=last_row {
                let ik = lu.at(i, k);
                let l = lu.data[ik] / pivot;
                lu.data[ik] = l;
                if l == 0.0 {
                    continue;
                }
                for j in (k + 1)..=last_col {
                    let (ij, kj) = (lu.at(i, j), lu.at(k, j));
                    lu.data[ij] -= l * lu.data[kj];
                }
            }
        }
        Ok(lu)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        let upper = self.width - 1 - self.kl;
        let mut x = rhs.to_vec();
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for i in (k + 1)..=(k + self.kl).min(n.saturating_sub(1)) {
                x[i] -= self.data[self.at(i, k)] * xk;
            }
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..=(i + upper).min(n - 1) {
                acc -= self.data[self.at(i, j)] * x[j];
            }
            x[i] = acc / self.data[self.at(i, i)];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_needing_pivots() {
        let trip = vec![
            (0, 0, 1e-3),
            (0, 1, 2.0),
            (1, 0, 3.0),
            (1, 1, 1.0),
            (1, 2, -1.0),
            (2, 1, 4.0),
            (2, 2, 0.5),
            (2, 3, 1.0),
            (3, 2, -2.0),
            (3, 3, 6.0),
        ];
        let a = SparseMatrix::from_triplets(4, 4, &trip).unwrap();
        let b = [1.0, 2.0, 3.0, 4.0];
        let x = BandedLu::factor(&a).unwrap().solve(&b).unwrap();
        let reference = a.to_dense().solve(&b).unwrap();
        for (u, v) in x.iter().zip(&reference) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_fails() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]).unwrap();
        assert!(BandedLu::factor(&a).is_err());
    }
}
