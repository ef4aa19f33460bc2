use crate::{Error, Result};

/// Named choices of the grading exponent for a given fractional order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradingPreset {
    /// `2(2 - alpha)/alpha`, optimal order under H^2 initial data.
    Optimal,
    /// `(2 - alpha)/alpha`, sufficient for the pointwise L1 truncation error.
    Minimal,
}

impl GradingPreset {
    pub fn gamma(self, alpha: f64) -> f64 {
        match self {
            GradingPreset::Optimal => 2.0 * (2.0 - alpha) / alpha,
            GradingPreset::Minimal => (2.0 - alpha) / alpha,
        }
    }
}

/// Temporal grid `t_n = (n/N)^gamma T`, `0 <= n <= N`.
///
/// Steps and ratios are stored with 1-based accessors matching the usual
/// notation: `dt(j) = t_j - t_{j-1}` and `ratio(n) = dt(n)/dt(n-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedTimeMesh {
    final_time: f64,
    steps: usize,
    gamma: f64,
    t: Vec<f64>,
    dt: Vec<f64>,
}

impl GradedTimeMesh {
    pub fn new(final_time: f64, steps: usize, gamma: f64) -> Result<Self> {
        if !(final_time > 0.0) || !final_time.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "final time must be positive, got {final_time}"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidArgument("step count must be at least 1".into()));
        }
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "grading exponent must be >= 1, got {gamma}"
            )));
        }
        let n_f = steps as f64;
        let t: Vec<f64> = (0..=steps)
            .map(|n| {
                if n == steps {
                    final_time
                } else {
                    final_time * (n as f64 / n_f).powf(gamma)
                }
            })
            .collect();
        let mut mesh = GradedTimeMesh {
            final_time,
            steps,
            gamma,
            t,
            dt: Vec::with_capacity(steps),
        };
        mesh.dt = (1..=steps).map(|j| mesh.gap(j, j - 1)).collect();
        Ok(mesh)
    }

    pub fn with_preset(final_time: f64, steps: usize, alpha: f64, preset: GradingPreset) -> Result<Self> {
        Self::new(final_time, steps, preset.gamma(alpha))
    }

    pub fn uniform(final_time: f64, steps: usize) -> Result<Self> {
        Self::new(final_time, steps, 1.0)
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Grid points `t_0, ..., t_N`.
    pub fn points(&self) -> &[f64] {
        &self.t
    }

    pub fn t(&self, n: usize) -> f64 {
        self.t[n]
    }

    /// Step `dt_j = t_j - t_{j-1}`, `1 <= j <= N`.
    pub fn dt(&self, j: usize) -> f64 {
        self.dt[j - 1]
    }

    pub fn steps_slice(&self) -> &[f64] {
        &self.dt
    }

    /// Ratio `rho_n = dt_n / dt_{n-1}`, `2 <= n <= N`.
    pub fn ratio(&self, n: usize) -> f64 {
        self.dt[n - 1] / self.dt[n - 2]
    }

    pub fn max_ratio(&self) -> f64 {
        (2..=self.steps).map(|n| self.ratio(n)).fold(1.0, f64::max)
    }

    pub fn max_step(&self) -> f64 {
        self.dt.iter().copied().fold(0.0, f64::max)
    }

    /// `t_n - t_m` for `n >= m`, free of cancellation when the two points
    /// are close relative to their magnitude.
    pub fn gap(&self, n: usize, m: usize) -> f64 {
        debug_assert!(n >= m);
        if n == m {
            return 0.0;
        }
        if m == 0 {
            return self.t[n];
        }
        // t_n - t_m = t_n (1 - (m/n)^gamma)
        let log_ratio = (m as f64 / n as f64).ln();
        -self.final_time * (n as f64 / self.steps as f64).powf(self.gamma) * (self.gamma * log_ratio).exp_m1()
    }

    /// True when `dt_{n-1} <= dt_n` for every `n`.
    pub fn is_non_decreasing(&self) -> bool {
        self.first_decrease().is_none()
    }

    /// Index `j` (1-based) of the first step with `dt_j > dt_{j+1}`, ignoring
    /// rounding-level differences.
    pub fn first_decrease(&self) -> Option<usize> {
        self.dt
            .windows(2)
            .position(|w| w[0] > w[1] * (1.0 + 1e-12))
            .map(|p| p + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_grading_points() {
        let mesh = GradedTimeMesh::new(1.0, 4, 2.0).unwrap();
        let expected = [0.0, 1.0 / 16.0, 0.25, 9.0 / 16.0, 1.0];
        for (a, b) in mesh.points().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_one_is_uniform() {
        let mesh = GradedTimeMesh::uniform(1.0, 4).unwrap();
        for j in 1..=4 {
            assert!((mesh.dt(j) - 0.25).abs() < 1e-15);
        }
        assert_eq!(mesh.max_ratio(), 1.0);
    }

    #[test]
    fn first_point_of_steep_grading() {
        // 0.25 * 16^-6 evaluated exactly: 0.25 / 16777216
        let mesh = GradedTimeMesh::new(0.25, 16, 6.0).unwrap();
        let exact = 0.25 / 16_777_216.0;
        assert!((mesh.t(1) - exact).abs() / exact < 1e-14);
        assert!((mesh.t(1) - 1.49e-8).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(GradedTimeMesh::new(0.0, 4, 2.0).is_err());
        assert!(GradedTimeMesh::new(-1.0, 4, 2.0).is_err());
        assert!(GradedTimeMesh::new(1.0, 0, 2.0).is_err());
        assert!(GradedTimeMesh::new(1.0, 4, 0.5).is_err());
    }

    #[test]
    fn gap_matches_difference_where_safe() {
        let mesh = GradedTimeMesh::new(2.0, 32, 3.5).unwrap();
        for n in 0..=32 {
            for m in 0..=n {
                let direct = mesh.t(n) - mesh.t(m);
                assert!((mesh.gap(n, m) - direct).abs() <= 1e-14 * mesh.t(n).max(1e-300));
            }
        }
    }

    #[test]
    fn steps_are_non_decreasing() {
        for &gamma in &[1.0, 1.7, 2.0, 6.0, 18.0] {
            let mesh = GradedTimeMesh::new(1.0, 128, gamma).unwrap();
            assert!(mesh.is_non_decreasing(), "gamma = {gamma}");
            assert_eq!(mesh.t(128), 1.0);
        }
    }

    #[test]
    fn presets() {
        assert!((GradingPreset::Optimal.gamma(0.5) - 6.0).abs() < 1e-15);
        assert!((GradingPreset::Minimal.gamma(0.5) - 3.0).abs() < 1e-15);
    }
}
