use std::f64::consts::PI;

use crate::fem::CoefficientSet;
use crate::{Error, Result};

use super::integral::IntegralKernel;

/// Standard normal distribution function.
pub fn normal_cdf(y: f64) -> f64 {
    0.5 * libm::erfc(-y / std::f64::consts::SQRT_2)
}

/// Initial condition variant for the put.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayoffKind {
    /// `max(0, K - S0 e^x)`.
    StandardPut,
    /// `max(0, K e^x - S0 e^x)`, which vanishes identically when `S0 = K`.
    AsPrinted,
}

impl PayoffKind {
    pub fn name(self) -> &'static str {
        match self {
            PayoffKind::StandardPut => "standard-put",
            PayoffKind::AsPrinted => "as-printed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard-put" => Ok(PayoffKind::StandardPut),
            "as-printed" => Ok(PayoffKind::AsPrinted),
            other => Err(Error::InvalidArgument(format!("unknown payoff '{other}'"))),
        }
    }
}

/// Merton jump-diffusion put in log-price `x` on the truncated domain
/// `(-X, X)`, with Gaussian jump sizes `N(mu_J, sigma_J^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertonModel {
    pub sigma: f64,
    pub r: f64,
    pub lambda: f64,
    pub mu_j: f64,
    pub sigma_j: f64,
    pub strike: f64,
    pub s0: f64,
    pub half_width: f64,
    pub final_time: f64,
    pub payoff: PayoffKind,
}

impl Default for MertonModel {
    fn default() -> Self {
        MertonModel {
            sigma: 0.15,
            r: 0.05,
            lambda: 0.10,
            mu_j: -0.90,
            sigma_j: 0.45,
            strike: 100.0,
            s0: 100.0,
            half_width: 1.5,
            final_time: 0.25,
            payoff: PayoffKind::StandardPut,
        }
    }
}

impl MertonModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.sigma_j > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma_J must be positive, got {}", self.sigma_j)));
        }
        if !(self.lambda >= 0.0) {
            return Err(Error::InvalidArgument(format!("lambda must be nonnegative, got {}", self.lambda)));
        }
        if !(self.half_width > 0.0) {
            return Err(Error::InvalidArgument(format!("X must be positive, got {}", self.half_width)));
        }
        if !(self.final_time > 0.0) {
            return Err(Error::InvalidArgument(format!("T must be positive, got {}", self.final_time)));
        }
        Ok(())
    }

    /// Jump density `rho(x)`.
    pub fn density(&self, x: f64) -> f64 {
        let z = (x - self.mu_j) / self.sigma_j;
        (-0.5 * z * z).exp() / (2.0 * PI * self.sigma_j * self.sigma_j).sqrt()
    }

    /// `kappa = E[e^J - 1] = e^{mu_J + sigma_J^2/2} - 1`.
    pub fn kappa(&self) -> f64 {
        (self.mu_j + 0.5 * self.sigma_j * self.sigma_j).exp_m1()
    }

    /// Contribution of the far field outside `(-X, X)` to the jump integral,
    /// taking `u = K e^{-rt} - S0 e^y` left of the domain and `u = 0` right
    /// of it.
    pub fn tail_r(&self, x: f64, t: f64) -> f64 {
        let (k, s0, mu, sj, big_x) = (self.strike, self.s0, self.mu_j, self.sigma_j, self.half_width);
        k * (-self.r * t).exp() * normal_cdf(-(x + big_x + mu) / sj)
            - s0 * (x + mu + 0.5 * sj * sj).exp() * normal_cdf(-(x + big_x + mu + sj * sj) / sj)
    }

    /// Dirichlet data `max(0, K e^{-rt} - S0 e^x)`.
    pub fn boundary_value(&self, x: f64, t: f64) -> f64 {
        (self.strike * (-self.r * t).exp() - self.s0 * x.exp()).max(0.0)
    }

    pub fn initial_value(&self, x: f64) -> f64 {
        match self.payoff {
            PayoffKind::StandardPut => (self.strike - self.s0 * x.exp()).max(0.0),
            PayoffKind::AsPrinted => (self.strike * x.exp() - self.s0 * x.exp()).max(0.0),
        }
    }

    /// `A = sigma^2/2`, `b = -(r - sigma^2/2 - lambda kappa)`, `c = r + lambda`,
    /// `f = lambda R(x, t)`.
    pub fn coefficients(&self) -> CoefficientSet {
        let diff = 0.5 * self.sigma * self.sigma;
        let drift = -(self.r - 0.5 * self.sigma * self.sigma - self.lambda * self.kappa());
        let react = self.r + self.lambda;
        let model = *self;
        CoefficientSet::laplace(1)
            .with_scalar_diffusion(move |_, _| diff)
            .with_convection(move |_, _| [drift, 0.0])
            .with_reaction(move |_, _| react)
            .with_source(move |x, t| model.lambda * model.tail_r(x[0], t))
            .with_lambda(self.lambda)
    }

    /// `g(x, y) = rho(y - x)`.
    pub fn kernel(&self) -> IntegralKernel {
        let model = *self;
        let peak = 1.0 / (2.0 * PI * self.sigma_j * self.sigma_j).sqrt();
        IntegralKernel::new(move |x, y| model.density(y[0] - x[0]), peak)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_peak_and_symmetry() {
        let m = MertonModel::default();
        assert!((m.density(m.mu_j) - 0.886_538).abs() < 1e-6);
        for a in [0.1, 0.5, 1.3] {
            assert!((m.density(m.mu_j + a) - m.density(m.mu_j - a)).abs() < 1e-15);
        }
    }

    #[test]
    fn kappa_value_and_limit() {
        let m = MertonModel::default();
        assert!((m.kappa() + 0.5501).abs() < 1e-4);
        let tiny = MertonModel {
            mu_j: 0.0,
            sigma_j: 1e-8,
            ..m
        };
        assert!(tiny.kappa().abs() < 1e-15);
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for y in [0.3, 1.0, 2.5, 6.0] {
            assert!((normal_cdf(-y) - (1.0 - normal_cdf(y))).abs() < 1e-15);
        }
        assert!((normal_cdf(1.0) - 0.841_345).abs() < 1e-6);
    }

    #[test]
    fn payoff_switch() {
        let m = MertonModel::default();
        assert!((m.initial_value(-0.5) - (100.0 - 100.0 * (-0.5f64).exp())).abs() < 1e-12);
        let printed = MertonModel {
            payoff: PayoffKind::AsPrinted,
            ..m
        };
        assert_eq!(printed.initial_value(-0.5), 0.0);
        assert_eq!(printed.initial_value(0.7), 0.0);
    }

    #[test]
    fn tail_decreases_across_domain() {
        let m = MertonModel::default();
        let mut prev = f64::INFINITY;
        for i in 0..=30 {
            let x = -1.5 + 0.1 * i as f64;
            let r = m.tail_r(x, 0.1);
            assert!(r >= 0.0 && r < prev);
            prev = r;
        }
        assert!(m.tail_r(1.5, 0.1) < 1e-5 * m.tail_r(-1.5, 0.1));
    }
}
