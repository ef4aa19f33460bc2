//! Checks of the structural properties of `K` and `P`. Each returns the
//! worst violation found (`<= 0` or `<= tolerance` means the property holds).

use super::kernels::{rl_kernel, L1KernelTable};
use super::mesh::GradedTimeMesh;
use super::mittag_leffler::MittagLeffler;
use crate::{Error, Result};

fn complementary(kernels: &L1KernelTable) -> Result<&super::kernels::TriangularTable> {
    kernels
        .p_table()
        .ok_or_else(|| Error::InvalidState("property check needs complementary kernels".into()))
}

/// Largest relative decrease `(K^{n,j-1} - K^{n,j}) / K^{n,j}` along rows,
/// together with the most negative entry of `K` (as `-K`).
pub fn monotonicity_violation(kernels: &L1KernelTable) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for n in 1..=kernels.steps() {
        let row = kernels.k_row(n);
        worst = worst.max(-row[0]);
        for j in 1..n {
            worst = worst.max((row[j - 1] - row[j]) / row[j]);
        }
    }
    worst
}

/// Largest violation of `0 <= P^{n,j} <= Gamma(2-a) dt_j^a`, relative to the
/// upper bound.
pub fn complementary_bound_violation(kernels: &L1KernelTable, mesh: &GradedTimeMesh) -> Result<f64> {
    let p = complementary(kernels)?;
    let g = libm::tgamma(2.0 - kernels.alpha());
    let mut worst = f64::NEG_INFINITY;
    for n in 1..=kernels.steps() {
        for (idx, &pv) in p.row(n).iter().enumerate() {
            let bound = g * mesh.dt(idx + 1).powf(kernels.alpha());
            worst = worst.max((pv - bound) / bound).max(-pv / bound);
        }
    }
    Ok(worst)
}

/// Largest `|sum_{j=i}^{n} P^{n,j} K^{j,i} - 1|`.
pub fn orthogonality_defect(kernels: &L1KernelTable) -> Result<f64> {
    let p = complementary(kernels)?;
    let mut worst = 0.0f64;
    for n in 1..=kernels.steps() {
        let prow = p.row(n);
        for i in 1..=n {
            let sum: f64 = (i..=n).map(|j| prow[j - 1] * kernels.k(j, i)).sum();
            worst = worst.max((sum - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Largest relative excess of `sum_i P^{n,i} k_{1+ja-a}(t_i)` over
/// `k_{1+ja}(t_n)` for `0 <= j <= floor(1/a)`.
pub fn kernel_power_violation(kernels: &L1KernelTable, mesh: &GradedTimeMesh) -> Result<f64> {
    let p = complementary(kernels)?;
    let alpha = kernels.alpha();
    let jmax = (1.0 / alpha).floor() as usize;
    let mut worst = f64::NEG_INFINITY;
    for j in 0..=jmax {
        let beta_in = 1.0 + j as f64 * alpha - alpha;
        let beta_out = 1.0 + j as f64 * alpha;
        let inner: Vec<f64> = (1..=mesh.steps())
            .map(|i| rl_kernel(mesh.t(i), beta_in))
            .collect::<Result<_>>()?;
        for n in 1..=mesh.steps() {
            let lhs: f64 = p.row(n).iter().zip(&inner).map(|(pv, kv)| pv * kv).sum();
            let rhs = rl_kernel(mesh.t(n), beta_out)?;
            worst = worst.max((lhs - rhs) / rhs);
        }
    }
    Ok(worst)
}

/// Largest relative excess of `mu sum_{j<n} P^{n,j} E_a(mu t_j^a)` over
/// `E_a(mu t_n^a) - 1`, evaluated in log space.
pub fn mittag_leffler_violation(kernels: &L1KernelTable, mesh: &GradedTimeMesh, mu: f64) -> Result<f64> {
    let p = complementary(kernels)?;
    if let Some(index) = mesh.first_decrease() {
        return Err(Error::DecreasingSteps { index });
    }
    let alpha = kernels.alpha();
    let ml = MittagLeffler::new(alpha)?;
    let ln_e: Vec<f64> = (0..=mesh.steps())
        .map(|n| ml.ln_eval(mu * mesh.t(n).powf(alpha)))
        .collect::<Result<_>>()?;
    let mut worst = f64::NEG_INFINITY;
    for n in 2..=mesh.steps() {
        let prow = p.row(n);
        // Divide both sides by E_a(mu t_n^a).
        let lhs: f64 = mu * (1..n).map(|j| prow[j - 1] * (ln_e[j] - ln_e[n]).exp()).sum::<f64>();
        let rhs = -(-ln_e[n]).exp_m1();
        worst = worst.max((lhs - rhs) / rhs);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn properties_hold_on_sample_meshes() {
        for &(alpha, gamma, steps) in &[(0.5, 1.0, 32), (0.3, 4.0, 64), (0.8, 2.0, 40), (0.1, 8.0, 48)] {
            let mesh = GradedTimeMesh::new(1.0, steps, gamma).unwrap();
            let kernels = L1KernelTable::with_complementary(&mesh, alpha).unwrap();
            assert!(monotonicity_violation(&kernels) <= 1e-10);
            assert!(complementary_bound_violation(&kernels, &mesh).unwrap() <= 1e-10);
            assert!(orthogonality_defect(&kernels).unwrap() <= 1e-10);
            assert!(kernel_power_violation(&kernels, &mesh).unwrap() <= 1e-10);
            for mu in [0.5, 1.0, 2.0] {
                assert!(mittag_leffler_violation(&kernels, &mesh, mu).unwrap() <= 1e-10);
            }
        }
    }

    #[test]
    fn corrupted_kernels_are_detected() {
        let mesh = GradedTimeMesh::new(1.0, 16, 2.0).unwrap();
        let clean = L1KernelTable::new(&mesh, 0.5).unwrap();
        let mut k = clean.k_table().clone();
        k.set(9, 4, k.get(9, 4) * 1.5);
        let p = super::super::kernels::build_p_table(clean.k_table());
        let corrupted = L1KernelTable::from_parts(0.5, k, Some(p)).unwrap();
        assert!(orthogonality_defect(&corrupted).unwrap() > 1e-3);
    }
}
