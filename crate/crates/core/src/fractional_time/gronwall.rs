//! Numerical verifier for the discrete fractional Grönwall inequality
//! attached to the L1 operator.
//!
//! Hypothesis, for `1 <= n <= N`:
//! `D^a (v^n)^2 <= sum_{i=0}^{n} lambda^n_{n-i} (v^i)^2 + v^n xi^n + (eta^n)^2 + (zeta^n)^2`.
//! Conclusion:
//! `v^n <= 2 E_a(2 Lambda t_n^a) [v^0 + max_j sum_i P^{j,i} xi^i
//!        + sqrt(2 t_n^a) max_j eta^j + max_j sqrt(sum_i P^{j,i} (zeta^i)^2)]`.

use super::kernels::L1KernelTable;
use super::mesh::GradedTimeMesh;
use super::mittag_leffler::MittagLeffler;
use crate::{Error, Result};

/// Data of the inequality. Sequences `xi`, `eta`, `zeta` are indexed
/// `0..N` for `n = 1..=N`; `lambda[n-1][i]` multiplies `(v^i)^2`, `0 <= i <= n`,
/// i.e. it is `lambda^n_{n-i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GronwallInput {
    pub v0: f64,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub zeta: Vec<f64>,
    pub lambda: Vec<Vec<f64>>,
    pub big_lambda: f64,
}

impl GronwallInput {
    /// All-zero input of length `steps`.
    pub fn zeros(steps: usize) -> Self {
        GronwallInput {
            v0: 0.0,
            xi: vec![0.0; steps],
            eta: vec![0.0; steps],
            zeta: vec![0.0; steps],
            lambda: (1..=steps).map(|n| vec![0.0; n + 1]).collect(),
            big_lambda: 0.0,
        }
    }

    pub fn steps(&self) -> usize {
        self.xi.len()
    }

    /// Checks shapes, signs and `Lambda >= max_n sum_j lambda^n_j`.
    pub fn validate(&self, steps: usize) -> Result<()> {
        for (name, seq) in [("xi", &self.xi), ("eta", &self.eta), ("zeta", &self.zeta)] {
            if seq.len() != steps {
                return Err(Error::DimensionMismatch {
                    expected: steps,
                    got: seq.len(),
                });
            }
            if let Some(bad) = seq.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be nonnegative, found {bad}")));
            }
        }
        if !(self.v0 >= 0.0) || !self.v0.is_finite() {
            return Err(Error::InvalidArgument(format!("v0 must be nonnegative, got {}", self.v0)));
        }
        if self.lambda.len() != steps {
            return Err(Error::DimensionMismatch {
                expected: steps,
                got: self.lambda.len(),
            });
        }
        if !(self.big_lambda >= 0.0) || !self.big_lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Lambda must be nonnegative, got {}",
                self.big_lambda
            )));
        }
        for (idx, row) in self.lambda.iter().enumerate() {
            let n = idx + 1;
            if row.len() != n + 1 {
                return Err(Error::DimensionMismatch {
                    expected: n + 1,
                    got: row.len(),
                });
            }
            if row.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                return Err(Error::InvalidArgument(format!("lambda coefficients at n = {n} must be nonnegative")));
            }
            let total: f64 = row.iter().sum();
            if total > self.big_lambda * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "sum of lambda coefficients at n = {n} is {total}, above Lambda = {}",
                    self.big_lambda
                )));
            }
        }
        Ok(())
    }
}

/// Admissible maximum step `(1 / (2 Lambda Gamma(2-a)))^(1/a)`; infinite for
/// `Lambda <= 0`.
pub fn timestep_threshold(alpha: f64, big_lambda: f64) -> f64 {
    if big_lambda <= 0.0 {
        return f64::INFINITY;
    }
    (1.0 / (2.0 * big_lambda * libm::tgamma(2.0 - alpha))).powf(1.0 / alpha)
}

fn check_hypotheses(input: &GronwallInput, mesh: &GradedTimeMesh, kernels: &L1KernelTable) -> Result<()> {
    let steps = mesh.steps();
    if kernels.steps() != steps {
        return Err(Error::DimensionMismatch {
            expected: steps,
            got: kernels.steps(),
        });
    }
    input.validate(steps)?;
    if let Some(index) = mesh.first_decrease() {
        return Err(Error::DecreasingSteps { index });
    }
    let threshold = timestep_threshold(kernels.alpha(), input.big_lambda);
    let max_step = mesh.max_step();
    if !(max_step < threshold) {
        return Err(Error::ConditionViolated { max_step, threshold });
    }
    Ok(())
}

/// Right-hand side of the Grönwall conclusion for `n = 1..=N` (entry `n-1`).
///
/// Requires the complementary kernels. Values whose Mittag-Leffler factor
/// overflows are reported as `+inf`.
pub fn gronwall_bound(input: &GronwallInput, mesh: &GradedTimeMesh, kernels: &L1KernelTable) -> Result<Vec<f64>> {
    check_hypotheses(input, mesh, kernels)?;
    let p = kernels.p_table().ok_or_else(|| {
        Error::InvalidState("Grönwall bound needs complementary kernels".into())
    })?;
    let alpha = kernels.alpha();
    let ml = MittagLeffler::new(alpha)?;
    let steps = mesh.steps();
    let mut bounds = Vec::with_capacity(steps);
    let mut max_xi_sum = 0.0f64;
    let mut max_eta = 0.0f64;
    let mut max_zeta_sum = 0.0f64;
    for n in 1..=steps {
        let row = p.row(n);
        let xi_sum: f64 = row.iter().zip(&input.xi).map(|(pv, x)| pv * x).sum();
        let zeta_sum: f64 = row.iter().zip(&input.zeta).map(|(pv, z)| pv * z * z).sum();
        max_xi_sum = max_xi_sum.max(xi_sum);
        max_zeta_sum = max_zeta_sum.max(zeta_sum);
        max_eta = max_eta.max(input.eta[n - 1]);
        let t_pow = mesh.t(n).powf(alpha);
        let bracket = input.v0 + max_xi_sum + (2.0 * t_pow).sqrt() * max_eta + max_zeta_sum.sqrt();
        let ln_factor = ml.ln_eval(2.0 * input.big_lambda * t_pow)?;
        bounds.push(if bracket == 0.0 { 0.0 } else { 2.0 * ln_factor.exp() * bracket });
    }
    Ok(bounds)
}

/// Outcome of [`check_gronwall`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallCheck {
    pub holds: bool,
    /// `max_n v_n / bound_n` (0 when every `v_n` vanishes).
    pub max_ratio: f64,
}

/// Compares `v = [v^0, ..., v^N]` against [`gronwall_bound`].
pub fn check_gronwall(
    input: &GronwallInput,
    v: &[f64],
    mesh: &GradedTimeMesh,
    kernels: &L1KernelTable,
) -> Result<GronwallCheck> {
    if v.len() != mesh.steps() + 1 {
        return Err(Error::DimensionMismatch {
            expected: mesh.steps() + 1,
            got: v.len(),
        });
    }
    let bounds = gronwall_bound(input, mesh, kernels)?;
    let mut holds = true;
    let mut max_ratio = 0.0f64;
    for (vn, bn) in v[1..].iter().zip(&bounds) {
        if *vn > *bn {
            holds = false;
        }
        let ratio = if *vn == 0.0 { 0.0 } else { vn / bn };
        max_ratio = max_ratio.max(ratio);
    }
    Ok(GronwallCheck { holds, max_ratio })
}

/// Sequence satisfying the hypothesis, built forward in `n`.
///
/// At each step the largest `v^n` compatible with the inequality is found by
/// solving the quadratic `(K^{n,n} - lambda^n_0) v^2 - xi^n v - C = 0`, where
/// `C` collects the history and known terms; it is then multiplied by
/// `scale[n-1]` in `[0, 1]` (use all ones for equality). Any value in
/// `[0, root]` keeps the inequality valid.
pub fn saturating_sequence(
    input: &GronwallInput,
    kernels: &L1KernelTable,
    scale: &[f64],
) -> Result<Vec<f64>> {
    let steps = kernels.steps();
    input.validate(steps)?;
    if scale.len() != steps {
        return Err(Error::DimensionMismatch {
            expected: steps,
            got: scale.len(),
        });
    }
    if scale.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::InvalidArgument("scale factors must lie in [0, 1]".into()));
    }
    let mut v = Vec::with_capacity(steps + 1);
    let mut w = Vec::with_capacity(steps + 1);
    v.push(input.v0);
    w.push(input.v0 * input.v0);
    for n in 1..=steps {
        let k = kernels.k_row(n);
        // K^{n,n} w_{n-1} - sum_{j<n} K^{n,j}(w_j - w_{j-1})
        let mut history = k[0] * w[0];
        for j in 1..n {
            history += (k[j] - k[j - 1]) * w[j];
        }
        let lam = &input.lambda[n - 1];
        let lagged: f64 = (0..n).map(|i| lam[i] * w[i]).sum();
        let eta = input.eta[n - 1];
        let zeta = input.zeta[n - 1];
        let c = history + lagged + eta * eta + zeta * zeta;
        let a = k[n - 1] - lam[n];
        if !(a > 0.0) {
            return Err(Error::ConditionViolated {
                max_step: f64::NAN,
                threshold: f64::NAN,
            });
        }
        let xi = input.xi[n - 1];
        let root = (xi + (xi * xi + 4.0 * a * c).sqrt()) / (2.0 * a);
        let vn = root * scale[n - 1];
        v.push(vn);
        w.push(vn * vn);
    }
    Ok(v)
}
