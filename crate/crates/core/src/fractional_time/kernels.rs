use super::mesh::GradedTimeMesh;
use crate::{Error, Result};

/// Riemann-Liouville kernel `k_beta(t) = t^(beta-1) / Gamma(beta)`.
pub fn rl_kernel(t: f64, beta: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("kernel k_beta needs t > 0, got {t}")));
    }
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("kernel k_beta needs beta > 0, got {beta}")));
    }
    Ok(t.powf(beta - 1.0) / libm::tgamma(beta))
}

/// Dense lower-triangular table indexed `(n, j)` with `1 <= j <= n <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularTable {
    size: usize,
    data: Vec<f64>,
}

impl TriangularTable {
    pub fn zeros(size: usize) -> Self {
        TriangularTable {
            size,
            data: vec![0.0; size * (size + 1) / 2],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn offset(n: usize, j: usize) -> usize {
        (n - 1) * n / 2 + (j - 1)
    }

    #[inline]
    pub fn get(&self, n: usize, j: usize) -> f64 {
        debug_assert!(1 <= j && j <= n && n <= self.size);
        self.data[Self::offset(n, j)]
    }

    #[inline]
    pub fn set(&mut self, n: usize, j: usize, value: f64) {
        debug_assert!(1 <= j && j <= n && n <= self.size);
        self.data[Self::offset(n, j)] = value;
    }

    /// Row `n` as a slice over `j = 1..=n`.
    pub fn row(&self, n: usize) -> &[f64] {
        let start = Self::offset(n, 1);
        &self.data[start..start + n]
    }

    pub fn row_mut(&mut self, n: usize) -> &mut [f64] {
        let start = Self::offset(n, 1);
        &mut self.data[start..start + n]
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "fractional order must lie in (0, 1), got {alpha}"
        )))
    }
}

/// `(a^beta - (a - d)^beta)` for `0 < d <= a`, without cancellation.
fn power_difference(a: f64, d: f64, beta: f64) -> f64 {
    if d >= a {
        return a.powf(beta);
    }
    let q = d / a;
    let log_ratio = if q < 0.5 { (-q).ln_1p() } else { ((a - d) / a).ln() };
    -a.powf(beta) * (beta * log_ratio).exp_m1()
}

/// L1 discrete kernels
/// `K^{n,j} = [k_{2-a}(t_n - t_{j-1}) - k_{2-a}(t_n - t_j)] / dt_j`.
pub fn build_k_table(mesh: &GradedTimeMesh, alpha: f64) -> Result<TriangularTable> {
    check_alpha(alpha)?;
    let steps = mesh.steps();
    let beta = 1.0 - alpha;
    let inv_gamma = 1.0 / libm::tgamma(2.0 - alpha);
    let mut table = TriangularTable::zeros(steps);
    for n in 1..=steps {
        let row = table.row_mut(n);
        for j in 1..=n {
            let d = mesh.dt(j);
            let a = mesh.gap(n, j - 1);
            let value = if j == n {
                d.powf(-alpha) * inv_gamma
            } else {
                power_difference(a, d, beta) * inv_gamma / d
            };
            row[j - 1] = value;
        }
    }
    Ok(table)
}

/// Complementary kernels defined by the backward recursion
/// `P^{n,n} = 1/K^{n,n}`,
/// `P^{n,i} = (1/K^{i,i}) sum_{j=i+1}^{n} P^{n,j} (K^{j,i+1} - K^{j,i})`.
///
/// Cost is `O(N^3)`.
pub fn build_p_table(k: &TriangularTable) -> TriangularTable {
    let steps = k.size();
    let mut p = TriangularTable::zeros(steps);
    for n in 1..=steps {
        let mut row = vec![0.0; n];
        row[n - 1] = 1.0 / k.get(n, n);
        for i in (1..n).rev() {
            let mut acc = 0.0;
            for j in (i + 1)..=n {
                acc += row[j - 1] * (k.get(j, i + 1) - k.get(j, i));
            }
            row[i - 1] = acc / k.get(i, i);
        }
        p.row_mut(n).copy_from_slice(&row);
    }
    p
}

/// Discrete kernels of the L1 formula for a fixed order, with the
/// complementary kernels built on request.
#[derive(Debug, Clone)]
pub struct L1KernelTable {
    alpha: f64,
    k: TriangularTable,
    p: Option<TriangularTable>,
}

impl L1KernelTable {
    /// Builds `K` only; the stepper never needs `P`.
    pub fn new(mesh: &GradedTimeMesh, alpha: f64) -> Result<Self> {
        Ok(L1KernelTable {
            alpha,
            k: build_k_table(mesh, alpha)?,
            p: None,
        })
    }

    /// Builds both `K` and `P`.
    pub fn with_complementary(mesh: &GradedTimeMesh, alpha: f64) -> Result<Self> {
        let mut table = Self::new(mesh, alpha)?;
        table.p = Some(build_p_table(&table.k));
        Ok(table)
    }

    /// Wraps externally built tables. Used for fault injection in checks.
    pub fn from_parts(alpha: f64, k: TriangularTable, p: Option<TriangularTable>) -> Result<Self> {
        check_alpha(alpha)?;
        if let Some(p) = &p {
            if p.size() != k.size() {
                return Err(Error::DimensionMismatch {
                    expected: k.size(),
                    got: p.size(),
                });
            }
        }
        Ok(L1KernelTable { alpha, k, p })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn steps(&self) -> usize {
        self.k.size()
    }

    pub fn k(&self, n: usize, j: usize) -> f64 {
        self.k.get(n, j)
    }

    pub fn k_table(&self) -> &TriangularTable {
        &self.k
    }

    pub fn k_row(&self, n: usize) -> &[f64] {
        self.k.row(n)
    }

    pub fn has_complementary(&self) -> bool {
        self.p.is_some()
    }

    pub fn p_table(&self) -> Option<&TriangularTable> {
        self.p.as_ref()
    }

    /// Complementary kernel `P^{n,j}`. Panics when `P` was not built.
    pub fn p(&self, n: usize, j: usize) -> f64 {
        self.p
            .as_ref()
            .expect("complementary kernels not built; use L1KernelTable::with_complementary")
            .get(n, j)
    }

    pub fn ensure_complementary(&mut self) {
        if self.p.is_none() {
            self.p = Some(build_p_table(&self.k));
        }
    }

    /// L1 approximation `sum_{j=1}^{n} K^{n,j} (v_j - v_{j-1})` of the
    /// Caputo derivative at `t_n`.
    pub fn l1_derivative(&self, values: &[f64], n: usize) -> Result<f64> {
        if n == 0 || n > self.steps() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.steps(),
            });
        }
        if values.len() <= n {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: values.len(),
            });
        }
        Ok(self
            .k_row(n)
            .iter()
            .enumerate()
            .map(|(idx, kv)| kv * (values[idx + 1] - values[idx]))
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rl_kernel_values() {
        assert!((rl_kernel(0.7, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((rl_kernel(1.0, 0.5).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-14);
        // 2^0.5 / Gamma(1.5), Gamma(1.5) = sqrt(pi)/2
        let expected = 2f64.sqrt() / (PI.sqrt() / 2.0);
        assert!((rl_kernel(2.0, 1.5).unwrap() - expected).abs() < 1e-13);
        assert!((expected - 1.59577).abs() < 1e-5);
        assert!(rl_kernel(0.0, 0.5).is_err());
        assert!(rl_kernel(-1.0, 0.5).is_err());
    }

    #[test]
    fn diagonal_entry_uniform() {
        let mesh = GradedTimeMesh::uniform(1.0, 4).unwrap();
        let k = build_k_table(&mesh, 0.5).unwrap();
        let expected = 2.0 / (PI.sqrt() / 2.0);
        for n in 1..=4 {
            assert!((k.get(n, n) - expected).abs() < 1e-13);
        }
        assert!((expected - 2.25676).abs() < 1e-5);
    }

    #[test]
    fn kernel_weights_integrate_exactly() {
        // sum_i K^{n,i} dt_i = t_n^{1-a}/Gamma(2-a)
        let mesh = GradedTimeMesh::uniform(1.0, 4).unwrap();
        let k = build_k_table(&mesh, 0.5).unwrap();
        let sum: f64 = (1..=4).map(|i| k.get(4, i) * mesh.dt(i)).sum();
        let expected = 1.0 / (PI.sqrt() / 2.0);
        assert!((sum - expected).abs() < 1e-13);
        assert!((expected - 1.12838).abs() < 1e-5);
    }

    #[test]
    fn first_complementary_entry() {
        let mesh = GradedTimeMesh::new(1.0, 8, 3.0).unwrap();
        let table = L1KernelTable::with_complementary(&mesh, 0.3).unwrap();
        let expected = libm::tgamma(1.7) * mesh.dt(1).powf(0.3);
        assert!((table.p(1, 1) - expected).abs() < 1e-14 * expected);
    }

    #[test]
    fn l1_on_constant_and_linear_sequences() {
        let mesh = GradedTimeMesh::new(1.0, 16, 2.5).unwrap();
        let table = L1KernelTable::new(&mesh, 0.4).unwrap();
        let constant = vec![3.7; 17];
        let linear: Vec<f64> = mesh.points().to_vec();
        for n in 1..=16 {
            assert_eq!(table.l1_derivative(&constant, n).unwrap(), 0.0);
            let exact = mesh.t(n).powf(0.6) / libm::tgamma(1.6);
            let approx = table.l1_derivative(&linear, n).unwrap();
            assert!((approx - exact).abs() < 1e-12 * exact.max(1.0), "n = {n}");
        }
        assert!(table.l1_derivative(&linear, 0).is_err());
        assert!(table.l1_derivative(&linear, 17).is_err());
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        let mesh = GradedTimeMesh::uniform(1.0, 4).unwrap();
        assert!(build_k_table(&mesh, 0.0).is_err());
        assert!(build_k_table(&mesh, 1.0).is_err());
    }

    #[test]
    fn monotone_on_steep_mesh() {
        let mesh = GradedTimeMesh::new(1.0, 128, 4.0).unwrap();
        for &alpha in &[0.1, 0.5, 0.9] {
            let k = build_k_table(&mesh, alpha).unwrap();
            for n in 2..=128 {
                for j in 2..=n {
                    assert!(k.get(n, j - 1) < k.get(n, j), "alpha={alpha} n={n} j={j}");
                    assert!(k.get(n, j - 1) >= 0.0);
                }
            }
        }
    }
}
