use std::f64::consts::PI;

use crate::fem::{CoefficientSet, FeSpace, NormKind};
use crate::fractional_time::{timestep_threshold, GradedTimeMesh};
use crate::{Error, Result};

use super::scheme::SchemeKind;

/// Constants entering the stability constants:
/// `a0(t; v, v) >= beta0 |v|_1^2`, `|a1(t; v, w)| <= beta1 |v|_1 |w|`,
/// `|I v| <= beta2 |v|` and `|a0(t; v, v) - a0(s; v, v)| <= L |t - s| |v|_1^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientBounds {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub lipschitz: f64,
    /// Spatial sample points behind the estimate (0 if user supplied).
    pub spatial_samples: usize,
    /// Time sample points behind the estimate (0 if user supplied).
    pub time_samples: usize,
}

impl CoefficientBounds {
    pub fn new(beta0: f64, beta1: f64, beta2: f64, lipschitz: f64) -> Self {
        CoefficientBounds {
            beta0,
            beta1,
            beta2,
            lipschitz,
            spatial_samples: 0,
            time_samples: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta0 > 0.0 && self.beta0.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta0 must be positive, got {}", self.beta0)));
        }
        for (name, v) in [("beta1", self.beta1), ("beta2", self.beta2), ("L", self.lipschitz)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be finite and nonnegative, got {v}")));
            }
        }
        Ok(())
    }
}

/// Poincaré constant `|v| <= C_P |grad v|` on the bounding box (the
/// first Dirichlet eigenvalue of a box bounds that of any subdomain).
pub fn poincare_constant(space: &FeSpace) -> f64 {
    let (lo, hi) = space.mesh().bounding_box();
    let s: f64 = (0..space.dim()).map(|d| 1.0 / (hi[d] - lo[d]).powi(2)).sum();
    1.0 / (PI * s.sqrt())
}

fn spectral_radius_sym(a: [[f64; 2]; 2], dim: usize) -> f64 {
    if dim == 1 {
        return a[0][0].abs();
    }
    let off = 0.5 * (a[0][1] + a[1][0]);
    let mean = 0.5 * (a[0][0] + a[1][1]);
    let r = (0.25 * (a[0][0] - a[1][1]).powi(2) + off * off).sqrt();
    (mean + r).abs().max((mean - r).abs())
}

/// Estimates the bounds by sampling the coefficients at mesh nodes and
/// cell centroids and at `time_samples` equispaced times in `[0, T]`.
/// Sampling can under-estimate suprema between samples; the resolution is
/// recorded in the result.
pub fn sample_bounds(
    space: &FeSpace,
    coeffs: &CoefficientSet,
    integral_sup: Option<f64>,
    final_time: f64,
    time_samples: usize,
) -> Result<CoefficientBounds> {
    if time_samples < 2 {
        return Err(Error::InvalidArgument("at least two time samples are needed".into()));
    }
    let mesh = space.mesh();
    let dim = space.dim();
    let mut points: Vec<[f64; 2]> = (0..mesh.n_nodes())
        .map(|i| {
            let x = mesh.node(i);
            [x[0], if dim == 2 { x[1] } else { 0.0 }]
        })
        .collect();
    let centroid = [1.0 / (dim + 1) as f64; 3];
    for e in 0..mesh.n_cells() {
        points.push(mesh.geometry(e).map(&centroid[..dim + 1]));
    }
    let dt = final_time / (time_samples - 1) as f64;
    let delta = 1e-6 * final_time;
    let (mut min_eig, mut sup_b, mut sup_c, mut lip) = (f64::INFINITY, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..time_samples {
        let t = k as f64 * dt;
        let (t0, t1) = ((t - delta).max(0.0), (t + delta).min(final_time));
        for p in &points {
            let x = &p[..dim];
            min_eig = min_eig.min(coeffs.ellipticity_at(x, t).0);
            let b = coeffs.convection_at(x, t);
            sup_b = sup_b.max((b[0] * b[0] + if dim == 2 { b[1] * b[1] } else { 0.0 }).sqrt());
            sup_c = sup_c.max(coeffs.reaction_at(x, t).abs());
            let (a0, a1) = ((coeffs.diffusion)(x, t0), (coeffs.diffusion)(x, t1));
            let mut da = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    da[i][j] = (a1[i][j] - a0[i][j]) / (t1 - t0);
                }
            }
            lip = lip.max(spectral_radius_sym(da, dim));
        }
    }
    if !(min_eig > 0.0) {
        return Err(Error::CoefficientViolation(format!(
            "diffusion not uniformly positive definite (sampled minimum eigenvalue {min_eig})"
        )));
    }
    let cp = poincare_constant(space);
    Ok(CoefficientBounds {
        beta0: min_eig / (1.0 + cp * cp),
        beta1: sup_b + sup_c,
        beta2: integral_sup.unwrap_or(0.0) * mesh.domain_measure(),
        lipschitz: lip,
        spatial_samples: points.len(),
        time_samples,
    })
}

/// Stability constant `Lambda_0` (L2) or `Lambda_1` (H1) of the scheme.
/// `rho` is the largest step ratio of the time mesh.
pub fn lambda_constant(
    scheme: SchemeKind,
    bounds: &CoefficientBounds,
    lambda: f64,
    rho: f64,
    alpha: f64,
    final_time: f64,
    kind: NormKind,
) -> Result<f64> {
    bounds.validate()?;
    let CoefficientBounds {
        beta0,
        beta1,
        beta2,
        lipschitz,
        ..
    } = *bounds;
    let lam = lambda.abs();
    match kind {
        NormKind::L2 => Ok(match scheme {
            SchemeKind::FullyImplicit | SchemeKind::Imex1 => beta1 * beta1 / beta0 + 2.0 * lam * beta2,
            SchemeKind::Imex2 => beta1 * beta1 / beta0 + 2.0 * lam * (1.0 + 2.0 * rho) * beta2,
        }),
        NormKind::H1 => {
            let drift = lipschitz * final_time.powf(1.0 - alpha) / (beta0 * libm::tgamma(2.0 - alpha));
            let nonlocal = match scheme {
                SchemeKind::FullyImplicit | SchemeKind::Imex1 => lam * lam * beta2 * beta2,
                SchemeKind::Imex2 => 2.0 * lam * lam * beta2 * beta2 * ((1.0 + rho).powi(2) + rho * rho),
            };
            Ok(2.0 * (beta1 * beta1 + nonlocal) / beta0 + drift)
        }
        NormKind::Linf => Err(Error::InvalidArgument("stability constants exist for L2 and H1 only".into())),
    }
}

/// Outcome of the step-size restriction check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimestepCheck {
    pub satisfied: bool,
    pub max_step: f64,
    pub threshold: f64,
}

/// `max dt_n < (1 / (2 Lambda Gamma(2 - a)))^{1/a}`.
pub fn check_timestep_condition(mesh: &GradedTimeMesh, alpha: f64, big_lambda: f64) -> Result<TimestepCheck> {
    if !(big_lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("Lambda must be nonnegative, got {big_lambda}")));
    }
    let threshold = timestep_threshold(alpha, big_lambda);
    let max_step = mesh.max_step();
    Ok(TimestepCheck {
        satisfied: max_step < threshold,
        max_step,
        threshold,
    })
}
