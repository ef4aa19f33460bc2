//! Built-in test problems with manufactured exact solutions
//! `u = s(x) (t^a + t^3)`, plus the Merton jump-diffusion put.

use std::f64::consts::PI;
use std::fmt;

use l1fem::fem::{CoefficientSet, FeSpace, SpatialMesh};
use l1fem::fractional_time::GradedTimeMesh;
use l1fem::nonlocal::{assemble_integral_matrix, IntegralKernel, MertonModel};
use l1fem::stepper::{initial_coefficients, DiscreteProblem, InitialProjection, SchemeKind};
use l1fem::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    /// 1D PDE on (0,1), `u = sin(pi x)(t^a + t^3)`.
    Ex1d,
    /// 2D PDE on the unit square, `u = sin(2 pi x1) sin(2 pi x2)(t^a + t^3)`.
    Ex2dPde,
    /// 2D PIDE, `lambda = 1/2`, `g = x1 + x2`, `u = sin(pi x1) sin(pi x2)(t^a + t^3)`.
    Ex2dPide,
    /// Merton jump-diffusion put; no exact solution.
    Merton,
}

impl ExampleId {
    pub const ALL: [ExampleId; 4] = [ExampleId::Ex1d, ExampleId::Ex2dPde, ExampleId::Ex2dPide, ExampleId::Merton];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Ex1d => "ex1d",
            ExampleId::Ex2dPde => "ex2d-pde",
            ExampleId::Ex2dPide => "ex2d-pide",
            ExampleId::Merton => "merton",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        ExampleId::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown example '{s}'")))
    }

    pub fn dim(self) -> usize {
        match self {
            ExampleId::Ex1d | ExampleId::Merton => 1,
            _ => 2,
        }
    }

    pub fn has_exact(self) -> bool {
        self != ExampleId::Merton
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact solution `s(x) phi(t)` with `s = prod_i sin(k pi x_i)`.
#[derive(Debug, Clone, Copy)]
struct Mode {
    dim: usize,
    wave: f64,
}

impl Mode {
    fn value(&self, x: &[f64]) -> f64 {
        (0..self.dim).map(|i| (self.wave * x[i]).sin()).product()
    }

    fn gradient(&self, x: &[f64]) -> [f64; 2] {
        let k = self.wave;
        if self.dim == 1 {
            return [k * (k * x[0]).cos(), 0.0];
        }
        let (s1, c1) = (k * x[0]).sin_cos();
        let (s2, c2) = (k * x[1]).sin_cos();
        [k * c1 * s2, k * s1 * c2]
    }

    fn hessian(&self, x: &[f64]) -> [[f64; 2]; 2] {
        let k = self.wave;
        if self.dim == 1 {
            return [[-k * k * (k * x[0]).sin(), 0.0], [0.0, 0.0]];
        }
        let (s1, c1) = (k * x[0]).sin_cos();
        let (s2, c2) = (k * x[1]).sin_cos();
        let cross = k * k * c1 * c2;
        [[-k * k * s1 * s2, cross], [cross, -k * k * s1 * s2]]
    }
}

fn time_factor(alpha: f64, t: f64) -> f64 {
    t.powf(alpha) + t.powi(3)
}

/// Caputo derivative of `t^a + t^3`: `Gamma(1+a) + 6 t^{3-a}/Gamma(4-a)`.
pub fn caputo_time_factor(alpha: f64, t: f64) -> f64 {
    libm::tgamma(1.0 + alpha) + 6.0 * t.powf(3.0 - alpha) / libm::tgamma(4.0 - alpha)
}

fn diffusion_1d(x: &[f64], t: f64) -> f64 {
    2.0 + x[0] * x[0] + t.sin()
}

fn convection_1d(x: &[f64], t: f64) -> [f64; 2] {
    [1.0 + x[0] * x[0] + t * t, 0.0]
}

fn reaction_1d(x: &[f64], t: f64) -> f64 {
    1.0 + 2.0 * x[0] * x[0] + t.sin()
}

fn diffusion_2d(x: &[f64], t: f64) -> [[f64; 2]; 2] {
    let off = x[0] * x[1];
    [[2.0 - t.cos(), off], [off, 2.0 - t.sin()]]
}

fn convection_2d(x: &[f64], _t: f64) -> [f64; 2] {
    let p = x[0] * x[1];
    [1.0 + 2.0 * p, 1.0 + p]
}

fn reaction_2d(_x: &[f64], t: f64) -> f64 {
    1.0 - t.sin()
}

/// One of the built-in problems at a given fractional order.
#[derive(Debug, Clone)]
pub struct ExampleSpec {
    pub id: ExampleId,
    pub alpha: f64,
    /// `false` drops `b` (the superconvergence setting); the source is
    /// adjusted so the exact solution is unchanged.
    pub convection: bool,
    pub merton: MertonModel,
}

impl ExampleSpec {
    pub fn new(id: ExampleId, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(ExampleSpec {
            id,
            alpha,
            convection: true,
            merton: MertonModel::default(),
        })
    }

    pub fn without_convection(mut self) -> Self {
        self.convection = false;
        self
    }

    pub fn with_merton(mut self, model: MertonModel) -> Self {
        self.merton = model;
        self
    }

    pub fn dim(&self) -> usize {
        self.id.dim()
    }

    pub fn final_time(&self) -> f64 {
        match self.id {
            ExampleId::Merton => self.merton.final_time,
            _ => 1.0,
        }
    }

    /// Side length of the (square) domain.
    pub fn width(&self) -> f64 {
        match self.id {
            ExampleId::Merton => 2.0 * self.merton.half_width,
            _ => 1.0,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self.id {
            ExampleId::Ex2dPide => 0.5,
            ExampleId::Merton => self.merton.lambda,
            _ => 0.0,
        }
    }

    /// Merton meshes get an even cell count so that the payoff kink at
    /// `x = 0` is a node on every level.
    pub fn aligned_cells(&self, m: usize) -> usize {
        match self.id {
            ExampleId::Merton => m + m % 2,
            _ => m,
        }
    }

    pub fn spatial_mesh(&self, m: usize) -> Result<SpatialMesh> {
        match self.id {
            ExampleId::Ex1d => SpatialMesh::interval(0.0, 1.0, m),
            ExampleId::Merton => SpatialMesh::interval(-self.merton.half_width, self.merton.half_width, m),
            _ => SpatialMesh::unit_square(m),
        }
    }

    fn mode(&self) -> Option<Mode> {
        match self.id {
            ExampleId::Ex1d => Some(Mode { dim: 1, wave: PI }),
            ExampleId::Ex2dPde => Some(Mode { dim: 2, wave: 2.0 * PI }),
            ExampleId::Ex2dPide => Some(Mode { dim: 2, wave: PI }),
            ExampleId::Merton => None,
        }
    }

    pub fn exact(&self, x: &[f64], t: f64) -> Option<f64> {
        self.mode().map(|m| m.value(x) * time_factor(self.alpha, t))
    }

    pub fn exact_gradient(&self, x: &[f64], t: f64) -> Option<[f64; 2]> {
        self.mode().map(|m| {
            let g = m.gradient(x);
            let phi = time_factor(self.alpha, t);
            [g[0] * phi, g[1] * phi]
        })
    }

    /// `I s(x) = int_Omega s(y) g(x, y) dy` for the spatial mode.
    fn integral_of_mode(&self, x: &[f64]) -> f64 {
        match self.id {
            ExampleId::Ex2dPide => 4.0 * (x[0] + x[1]) / (PI * PI),
            _ => 0.0,
        }
    }

    /// `f = D^a u - div(A grad u) + b . grad u + c u - lambda I u` for the
    /// exact solution, from closed forms.
    pub fn manufactured_source(&self, x: &[f64], t: f64) -> Option<f64> {
        let mode = self.mode()?;
        let s = mode.value(x);
        let grad = mode.gradient(x);
        let hess = mode.hessian(x);
        let (diff_term, conv, react) = if self.dim() == 1 {
            let a = diffusion_1d(x, t);
            // div(A grad s) = A' s' + A s''
            let div = 2.0 * x[0] * grad[0] + a * hess[0][0];
            (div, convection_1d(x, t)[0] * grad[0], reaction_1d(x, t))
        } else {
            let a = diffusion_2d(x, t);
            // column divergence of A: (d1 A11 + d2 A21, d1 A12 + d2 A22) = (x1, x2)
            let div_a = [x[0], x[1]];
            let contraction: f64 = (0..2).map(|i| (0..2).map(|j| a[i][j] * hess[i][j]).sum::<f64>()).sum();
            let b = convection_2d(x, t);
            (
                div_a[0] * grad[0] + div_a[1] * grad[1] + contraction,
                b[0] * grad[0] + b[1] * grad[1],
                reaction_2d(x, t),
            )
        };
        let conv = if self.convection { conv } else { 0.0 };
        let spatial = -diff_term + conv + react * s - self.lambda() * self.integral_of_mode(x);
        Some(s * caputo_time_factor(self.alpha, t) + time_factor(self.alpha, t) * spatial)
    }

    /// Coefficients including the source term.
    pub fn coefficients(&self) -> CoefficientSet {
        if self.id == ExampleId::Merton {
            return self.merton.coefficients();
        }
        let spec = self.clone();
        let source = move |x: &[f64], t: f64| spec.manufactured_source(x, t).unwrap_or(0.0);
        let mut c = if self.dim() == 1 {
            CoefficientSet::laplace(1)
                .with_scalar_diffusion(diffusion_1d)
                .with_reaction(reaction_1d)
        } else {
            CoefficientSet::laplace(2)
                .with_diffusion(diffusion_2d)
                .with_reaction(reaction_2d)
        };
        if self.convection {
            c = if self.dim() == 1 {
                c.with_convection(convection_1d)
            } else {
                c.with_convection(convection_2d)
            };
        }
        c.with_source(source).with_lambda(self.lambda())
    }

    pub fn kernel(&self) -> Option<IntegralKernel> {
        match self.id {
            ExampleId::Ex2dPide => Some(IntegralKernel::new(|x, _| x[0] + x[1], 2.0)),
            ExampleId::Merton => Some(self.merton.kernel()),
            _ => None,
        }
    }

    /// Fully discrete problem on an `m`-cell (per direction) mesh.
    pub fn build_problem(
        &self,
        time_mesh: GradedTimeMesh,
        m: usize,
        scheme: SchemeKind,
        initial: InitialProjection,
    ) -> Result<DiscreteProblem> {
        let space = FeSpace::new(self.spatial_mesh(m)?);
        self.build_on_space(space, time_mesh, scheme, initial)
    }

    pub fn build_on_space(
        &self,
        space: FeSpace,
        time_mesh: GradedTimeMesh,
        scheme: SchemeKind,
        initial: InitialProjection,
    ) -> Result<DiscreteProblem> {
        let coeffs = self.coefficients();
        let u0 = if self.id == ExampleId::Merton {
            let model = self.merton;
            model.validate()?;
            initial_coefficients(&space, &coeffs, initial, &|x: &[f64]| model.initial_value(x[0]), None)?
        } else {
            let u = |x: &[f64]| self.exact(x, 0.0).unwrap_or(0.0);
            let g = |x: &[f64]| self.exact_gradient(x, 0.0).unwrap_or([0.0; 2]);
            initial_coefficients(&space, &coeffs, initial, &u, Some(&g))?
        };
        let kernel = self.kernel();
        let g = kernel.as_ref().map(|k| (assemble_integral_matrix(&space, k), k.sup_bound()));
        let mut problem = DiscreteProblem::new(space, coeffs, time_mesh, self.alpha, scheme, u0)?;
        if let Some((g, sup)) = g {
            problem = problem.with_integral(g, sup)?;
        }
        if self.id == ExampleId::Merton {
            let model = self.merton;
            problem = problem
                .with_boundary(move |x, t| model.boundary_value(x[0], t))
                .autonomous();
        }
        Ok(problem)
    }
}
