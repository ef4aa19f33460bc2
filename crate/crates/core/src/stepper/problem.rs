use std::borrow::Cow;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use crate::fem::{
    assemble_a0, assemble_a1, assemble_mass, assemble_source, l2_project, ritz_project, CoefficientSet, FeSpace,
    NormKind, ScalarField,
};
use crate::fractional_time::{GradedTimeMesh, L1KernelTable};
use crate::linalg::{bicgstab, solve_with, DenseMatrix, IterativeConfig, LinearOperator, SolverHint, SparseMatrix};
use crate::{Error, Result};

use super::bounds::{check_timestep_condition, lambda_constant, sample_bounds, CoefficientBounds, TimestepCheck};
use super::scheme::{extrapolate, history_rhs, Extrapolated, SchemeKind};
use super::trajectory::Trajectory;

/// How the discrete initial value is obtained from `u0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialProjection {
    Interpolant,
    Ritz,
    L2,
}

impl InitialProjection {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "interpolant" | "interp" => Ok(InitialProjection::Interpolant),
            "ritz" => Ok(InitialProjection::Ritz),
            "l2" => Ok(InitialProjection::L2),
            other => Err(Error::InvalidArgument(format!("unknown initial projection '{other}'"))),
        }
    }
}

/// `u_{0h}` by interpolation or projection at `t = 0`. Projections target
/// the homogeneous-Dirichlet subspace; Ritz needs the gradient of `u0`.
pub fn initial_coefficients(
    space: &FeSpace,
    coeffs: &CoefficientSet,
    kind: InitialProjection,
    u0: &(dyn Fn(&[f64]) -> f64 + Sync),
    grad_u0: Option<&(dyn Fn(&[f64]) -> [f64; 2] + Sync)>,
) -> Result<Vec<f64>> {
    match kind {
        InitialProjection::Interpolant => Ok(space.interpolate(u0)),
        InitialProjection::L2 => l2_project(space, u0),
        InitialProjection::Ritz => {
            let grad = grad_u0.ok_or_else(|| Error::InvalidArgument("Ritz projection needs grad u0".into()))?;
            ritz_project(space, grad, coeffs, 0.0)
        }
    }
}

struct IntegralTerm {
    full: DenseMatrix,
    interior: DenseMatrix,
    coupling: DenseMatrix,
    sup_bound: f64,
}

/// `y = S x + c D x` for a sparse `S` and dense `D`.
struct SparsePlusDense<'a> {
    sparse: &'a SparseMatrix,
    dense: &'a DenseMatrix,
    factor: f64,
}

impl LinearOperator for SparsePlusDense<'_> {
    fn dim(&self) -> usize {
        self.sparse.n_rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.sparse.matvec_into(x, y);
        for (i, yi) in y.iter_mut().enumerate() {
            let row = self.dense.row(i);
            *yi += self.factor * row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        let d = self.sparse.diagonal();
        Some(d.iter().enumerate().map(|(i, v)| v + self.factor * self.dense.get(i, i)).collect())
    }
}

/// Output of one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub values: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Fully discrete problem: P1 space, coefficients, graded time mesh, L1
/// kernels, optional Galerkin integral matrix and Dirichlet data.
#[derive(Clone)]
pub struct DiscreteProblem {
    space: FeSpace,
    coeffs: CoefficientSet,
    mesh: GradedTimeMesh,
    kernels: Arc<L1KernelTable>,
    scheme: SchemeKind,
    u0: Vec<f64>,
    /// Boundary entries of `u0` as supplied, before pinning.
    given_boundary: Vec<f64>,
    boundary: Option<ScalarField>,
    integral: Option<Arc<IntegralTerm>>,
    mass: Arc<SparseMatrix>,
    autonomous: bool,
    solver: IterativeConfig,
    stability_override: Option<f64>,
    operator_cache: OnceLock<Arc<SparseMatrix>>,
}

impl std::fmt::Debug for DiscreteProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiscreteProblem")
            .field("dofs", &self.space.n_dofs())
            .field("steps", &self.mesh.steps())
            .field("alpha", &self.kernels.alpha())
            .field("scheme", &self.scheme)
            .field("integral", &self.integral.is_some())
            .field("boundary", &self.boundary.is_some())
            .finish()
    }
}

const PIN_TOLERANCE: f64 = 1e-10;

impl DiscreteProblem {
    /// Boundary entries of `u0` are pinned to zero (or to the Dirichlet data
    /// once [`with_boundary`](Self::with_boundary) is called).
    pub fn new(
        space: FeSpace,
        coeffs: CoefficientSet,
        mesh: GradedTimeMesh,
        alpha: f64,
        scheme: SchemeKind,
        u0: Vec<f64>,
    ) -> Result<Self> {
        if coeffs.dim != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: coeffs.dim,
            });
        }
        if u0.len() != space.n_dofs() {
            return Err(Error::DimensionMismatch {
                expected: space.n_dofs(),
                got: u0.len(),
            });
        }
        if let Some(n) = mesh.first_decrease() {
            return Err(Error::DecreasingSteps { index: n });
        }
        let kernels = L1KernelTable::new(&mesh, alpha)?;
        let mass = assemble_mass(&space);
        let given_boundary = space.boundary_dofs().iter().map(|&i| u0[i]).collect();
        let mut problem = DiscreteProblem {
            space,
            coeffs,
            mesh,
            kernels: Arc::new(kernels),
            scheme,
            u0,
            given_boundary,
            boundary: None,
            integral: None,
            mass: Arc::new(mass),
            autonomous: false,
            solver: IterativeConfig::default(),
            stability_override: None,
            operator_cache: OnceLock::new(),
        };
        problem.pin_initial_boundary();
        Ok(problem)
    }

    /// Dense matrix `G` of the integral operator over all nodes, with an upper
    /// bound for `sup |g|`.
    pub fn with_integral(mut self, g: DenseMatrix, sup_bound: f64) -> Result<Self> {
        let n = self.space.n_dofs();
        if g.n_rows() != n || g.n_cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.n_rows(),
            });
        }
        let interior = g.submatrix(self.space.interior_dofs(), self.space.interior_dofs());
        let coupling = g.submatrix(self.space.interior_dofs(), self.space.boundary_dofs());
        self.integral = Some(Arc::new(IntegralTerm {
            full: g,
            interior,
            coupling,
            sup_bound,
        }));
        Ok(self)
    }

    /// Dirichlet data `u_D(x, t)`.
    pub fn with_boundary(mut self, u_d: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        self.boundary = Some(Arc::new(u_d));
        self.pin_initial_boundary();
        self
    }

    /// Declares `A`, `b`, `c` independent of `t`, so the stiffness is
    /// assembled once.
    pub fn autonomous(mut self) -> Self {
        self.autonomous = true;
        self
    }

    pub fn with_solver_config(mut self, config: IterativeConfig) -> Self {
        self.solver = config;
        self
    }

    /// Overrides the sampled stability constant used by the step-size check.
    pub fn with_stability_constant(mut self, big_lambda: f64) -> Self {
        self.stability_override = Some(big_lambda);
        self
    }

    pub fn with_scheme(mut self, scheme: SchemeKind) -> Self {
        self.scheme = scheme;
        self
    }

    fn pin_initial_boundary(&mut self) {
        let target = self.boundary_values(0.0);
        for &i in self.space.boundary_dofs() {
            self.u0[i] = target[i];
        }
    }

    /// Largest relative gap between the supplied initial boundary entries
    /// and the Dirichlet data at `t = 0`.
    fn initial_boundary_mismatch(&self) -> f64 {
        let target = self.boundary_values(0.0);
        self.space
            .boundary_dofs()
            .iter()
            .zip(&self.given_boundary)
            .map(|(&i, &given)| (given - target[i]).abs() / (1.0 + target[i].abs()))
            .fold(0.0, f64::max)
    }

    pub fn space(&self) -> &FeSpace {
        &self.space
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coeffs
    }

    pub fn time_mesh(&self) -> &GradedTimeMesh {
        &self.mesh
    }

    pub fn kernels(&self) -> &L1KernelTable {
        &self.kernels
    }

    pub fn alpha(&self) -> f64 {
        self.kernels.alpha()
    }

    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn mass(&self) -> &SparseMatrix {
        &self.mass
    }

    pub fn initial(&self) -> &[f64] {
        &self.u0
    }

    pub fn integral_matrix(&self) -> Option<&DenseMatrix> {
        self.integral.as_ref().map(|g| &g.full)
    }

    /// Global vector holding `u_D(., t)` on boundary nodes, zero elsewhere.
    pub fn boundary_values(&self, t: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.space.n_dofs()];
        if let Some(u_d) = &self.boundary {
            for &i in self.space.boundary_dofs() {
                v[i] = u_d(self.space.mesh().node(i), t);
            }
        }
        v
    }

    /// `a0(t) + a1(t)` over all nodes.
    fn operator(&self, t: f64) -> Result<Cow<'_, SparseMatrix>> {
        let build = || -> Result<SparseMatrix> {
            let a0 = assemble_a0(&self.space, &self.coeffs, t)?;
            let a1 = assemble_a1(&self.space, &self.coeffs, t);
            SparseMatrix::linear_combination(&[(1.0, &a0), (1.0, &a1)])
        };
        if !self.autonomous {
            return Ok(Cow::Owned(build()?));
        }
        if let Some(op) = self.operator_cache.get() {
            return Ok(Cow::Borrowed(op.as_ref()));
        }
        let op = Arc::new(build()?);
        Ok(Cow::Borrowed(self.operator_cache.get_or_init(|| op).as_ref()))
    }

    fn active_integral(&self) -> Result<Option<&IntegralTerm>> {
        if self.coeffs.lambda == 0.0 {
            return Ok(None);
        }
        match &self.integral {
            Some(g) => Ok(Some(g)),
            None => Err(Error::InvalidState(format!(
                "lambda = {} but no integral matrix was supplied",
                self.coeffs.lambda
            ))),
        }
    }

    fn local_hint(&self) -> SolverHint {
        if self.space.dim() == 1 {
            SolverHint::Banded
        } else if self.coeffs.convection.is_some() {
            SolverHint::Nonsymmetric
        } else {
            SolverHint::Spd
        }
    }

    /// Solves for `u^n` given `history = [u^0, ..., u^{n-1}]`.
    pub fn step(&self, history: &[Vec<f64>], n: usize) -> Result<StepResult> {
        let steps = self.mesh.steps();
        if n == 0 || n > steps {
            return Err(Error::IndexOutOfRange { index: n, len: steps });
        }
        if history.len() < n {
            return Err(Error::InvalidState(format!(
                "step {n} needs {n} past values, have {}",
                history.len()
            )));
        }
        let t = self.mesh.t(n);
        let lambda = self.coeffs.lambda;
        let op = self.operator(t)?;
        let system = SparseMatrix::linear_combination(&[(self.kernels.k(n, n), &self.mass), (1.0, op.as_ref())])?;

        let mut rhs = history_rhs(history, &self.kernels, &self.mass, n)?;
        for (r, f) in rhs.iter_mut().zip(assemble_source(&self.space, &self.coeffs, t)) {
            *r += f;
        }
        let integral = self.active_integral()?;
        let mut implicit_integral = None;
        if let Some(g) = integral {
            let rho = if n >= 2 { self.mesh.ratio(n) } else { 1.0 };
            match extrapolate(self.scheme, history, n, rho)? {
                Extrapolated::Vector(e) => {
                    for (r, v) in rhs.iter_mut().zip(g.full.matvec(&e)) {
                        *r += lambda * v;
                    }
                }
                Extrapolated::UseCurrent => implicit_integral = Some(g),
            }
        }

        let u_bc = self.boundary_values(t);
        let ub: Vec<f64> = self.space.boundary_dofs().iter().map(|&i| u_bc[i]).collect();
        let a_ii = self.space.restrict_matrix(&system);
        let mut rhs_i = self.space.restrict_vector(&rhs);
        if ub.iter().any(|&v| v != 0.0) {
            let lift = self.space.coupling_matrix(&system).matvec(&ub);
            for (r, l) in rhs_i.iter_mut().zip(lift) {
                *r -= l;
            }
            if let Some(g) = implicit_integral {
                for (r, l) in rhs_i.iter_mut().zip(g.coupling.matvec(&ub)) {
                    *r += lambda * l;
                }
            }
        }
        let x0 = self.space.restrict_vector(&history[n - 1]);
        let (x, stats) = match implicit_integral {
            Some(g) => {
                let op = SparsePlusDense {
                    sparse: &a_ii,
                    dense: &g.interior,
                    factor: -lambda,
                };
                bicgstab(&op, &rhs_i, Some(&x0), &self.solver)?
            }
            None => {
                let hint = self.local_hint();
                match solve_with(&a_ii, &rhs_i, hint, Some(&x0), &self.solver) {
                    Err(Error::SolverFailure { .. }) if hint == SolverHint::Spd => {
                        solve_with(&a_ii, &rhs_i, SolverHint::Nonsymmetric, Some(&x0), &self.solver)?
                    }
                    other => other?,
                }
            }
        };
        Ok(StepResult {
            values: self.space.extend_vector(&x, Some(&u_bc))?,
            iterations: stats.iterations,
            residual: stats.residual,
        })
    }

    /// Coefficient bounds sampled on the spatial mesh at 17 times.
    pub fn sampled_bounds(&self) -> Result<CoefficientBounds> {
        sample_bounds(
            &self.space,
            &self.coeffs,
            self.integral.as_ref().map(|g| g.sup_bound),
            self.mesh.final_time(),
            17,
        )
    }

    /// `Lambda_0` of the active scheme (or the override) and the resulting
    /// step-size check.
    pub fn stability_check(&self) -> Result<(f64, TimestepCheck)> {
        let big_lambda = match self.stability_override {
            Some(l) => l,
            None => lambda_constant(
                self.scheme,
                &self.sampled_bounds()?,
                self.coeffs.lambda,
                self.mesh.max_ratio(),
                self.alpha(),
                self.mesh.final_time(),
                NormKind::L2,
            )?,
        };
        Ok((big_lambda, check_timestep_condition(&self.mesh, self.alpha(), big_lambda)?))
    }

    /// Runs all `N` steps. A violated step-size condition is logged, not
    /// fatal: it is sufficient for stability, not necessary.
    pub fn solve_trajectory(&self) -> Result<Trajectory> {
        let mismatch = self.initial_boundary_mismatch();
        if mismatch > PIN_TOLERANCE {
            log::warn!("initial data disagrees with the boundary data by {mismatch:.3e}; boundary values pinned");
        }
        let (big_lambda, check) = self.stability_check()?;
        if !check.satisfied {
            log::warn!(
                "max step {:.3e} exceeds the stability threshold {:.3e} (Lambda = {:.3e})",
                check.max_step,
                check.threshold,
                big_lambda
            );
        }
        let mut trajectory = Trajectory::new(self.mesh.t(0), self.u0.clone());
        for n in 1..=self.mesh.steps() {
            let start = Instant::now();
            let r = self.step(&trajectory.values, n)?;
            trajectory.push(self.mesh.t(n), r.values, r.iterations, r.residual, start.elapsed().as_secs_f64());
        }
        Ok(trajectory)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{error_norm, norm, SpatialMesh};
    use crate::fractional_time::GradingPreset;
    use crate::nonlocal::{assemble_integral_matrix, IntegralKernel};
    use std::f64::consts::PI;

    #[test]
    fn linear_in_time_leaves_only_spatial_error() {
        // u_h(t) = t w with w in S_h solves the scheme exactly when
        // f = t^{1-a}/Gamma(2-a) w + t g, where g in S_h has M g = A w.
        let alpha = 0.5;
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 16).unwrap());
        let coeffs = CoefficientSet::laplace(1).with_scalar_diffusion(|x, _| 1.0 + x[0]);
        let w = space.interpolate(|x| (PI * x[0]).sin());
        let a = assemble_a0(&space, &coeffs, 0.0).unwrap();
        let (gv, _) = solve_with(
            &assemble_mass(&space),
            &a.matvec(&w),
            SolverHint::Banded,
            None,
            &IterativeConfig::default(),
        )
        .unwrap();
        let gamma = libm::tgamma(2.0 - alpha);
        let probe = space.clone();
        let coeffs = coeffs.with_source(move |x, t| {
            t.powf(1.0 - alpha) / gamma * probe.evaluate_1d(&w, x[0]).unwrap()
                + t * probe.evaluate_1d(&gv, x[0]).unwrap()
        });
        let mesh = GradedTimeMesh::with_preset(1.0, 10, alpha, GradingPreset::Optimal).unwrap();
        let w = space.interpolate(|x| (PI * x[0]).sin());
        let p = DiscreteProblem::new(space.clone(), coeffs, mesh.clone(), alpha, SchemeKind::Imex2, vec![0.0; 17])
            .unwrap()
            .autonomous();
        let tr = p.solve_trajectory().unwrap();
        for n in 0..=10 {
            let d = tr.values[n].iter().zip(&w).map(|(u, v)| (u - mesh.t(n) * v).abs()).fold(0.0, f64::max);
            assert!(d < 1e-10, "step {n}: {d}");
        }
        let u = |x: &[f64]| (PI * x[0]).sin();
        let gu = |x: &[f64]| [PI * (PI * x[0]).cos(), 0.0];
        let e_traj = error_norm(&space, tr.last(), &u, &gu, NormKind::L2).unwrap();
        let e_interp = error_norm(&space, &w, &u, &gu, NormKind::L2).unwrap();
        assert!((e_traj - e_interp).abs() < 1e-10);
    }

    #[test]
    fn single_step_matches_trajectory() {
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 8).unwrap());
        let coeffs = CoefficientSet::laplace(1).with_source(|x, t| x[0] * (1.0 + t));
        let mesh = GradedTimeMesh::uniform(1.0, 1).unwrap();
        let p = DiscreteProblem::new(space, coeffs, mesh, 0.4, SchemeKind::Imex2, vec![0.0; 9]).unwrap();
        let tr = p.solve_trajectory().unwrap();
        let s = p.step(&[p.initial().to_vec()], 1).unwrap();
        assert_eq!(tr.values[1], s.values);
    }

    #[test]
    fn zero_data_stays_zero() {
        let space = FeSpace::new(SpatialMesh::unit_square(4).unwrap());
        let coeffs = CoefficientSet::laplace(2).with_convection(|_, _| [1.0, 0.5]);
        let mesh = GradedTimeMesh::new(1.0, 5, 2.0).unwrap();
        let p = DiscreteProblem::new(space.clone(), coeffs, mesh, 0.3, SchemeKind::Imex1, vec![0.0; 25]).unwrap();
        let tr = p.solve_trajectory().unwrap();
        assert_eq!(tr.steps(), 5);
        assert!(tr.values.iter().all(|v| v.iter().all(|&x| x == 0.0)));
    }

    fn pide(scheme: SchemeKind, lambda: f64, steps: usize) -> DiscreteProblem {
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 12).unwrap());
        let kernel = IntegralKernel::new(|x, y| 1.0 + x[0] * y[0], 2.0);
        let g = assemble_integral_matrix(&space, &kernel);
        let coeffs = CoefficientSet::laplace(1)
            .with_convection(|_, _| [0.7, 0.0])
            .with_source(|x, t| x[0] * (1.0 - x[0]) * (1.0 + t))
            .with_lambda(lambda);
        let mesh = GradedTimeMesh::new(1.0, steps, 2.0).unwrap();
        let u0 = space.interpolate(|x| (PI * x[0]).sin());
        DiscreteProblem::new(space, coeffs, mesh, 0.6, scheme, u0)
            .unwrap()
            .with_integral(g, 2.0)
            .unwrap()
            .autonomous()
    }

    #[test]
    fn schemes_agree_without_integral_term() {
        let base = pide(SchemeKind::FullyImplicit, 0.0, 16).solve_trajectory().unwrap();
        for s in [SchemeKind::Imex1, SchemeKind::Imex2] {
            let tr = pide(s, 0.0, 16).solve_trajectory().unwrap();
            assert!(base.max_difference(&tr).unwrap() < 1e-12);
        }
    }

    #[test]
    fn imex_close_to_implicit_with_integral_term() {
        // The splitting error vanishes as the time mesh is refined.
        for scheme in [SchemeKind::Imex1, SchemeKind::Imex2] {
            let d: Vec<f64> = [16, 64]
                .iter()
                .map(|&steps| {
                    let imp = pide(SchemeKind::FullyImplicit, 0.8, steps).solve_trajectory().unwrap();
                    let ex = pide(scheme, 0.8, steps).solve_trajectory().unwrap();
                    imp.max_difference(&ex).unwrap()
                })
                .collect();
            assert!(d[0] > 0.0 && d[0] < 0.1, "{scheme:?} {d:?}");
            assert!(d[0] / d[1] > 2.0, "{scheme:?} {d:?}");
        }
    }

    #[test]
    fn missing_integral_matrix_is_reported() {
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 4).unwrap());
        let coeffs = CoefficientSet::laplace(1).with_lambda(1.0);
        let mesh = GradedTimeMesh::uniform(1.0, 2).unwrap();
        let p = DiscreteProblem::new(space, coeffs, mesh, 0.5, SchemeKind::Imex1, vec![0.0; 5]).unwrap();
        assert!(matches!(p.solve_trajectory(), Err(Error::InvalidState(_))));
    }

    #[test]
    fn dirichlet_lifting_reproduces_affine_solution() {
        // u = 1 + x + t solves D^a u - u'' = t^{1-a}/Gamma(2-a).
        let alpha = 0.5;
        let g = libm::tgamma(2.0 - alpha);
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 6).unwrap());
        let coeffs = CoefficientSet::laplace(1).with_source(move |_, t| t.powf(1.0 - alpha) / g);
        let mesh = GradedTimeMesh::new(1.0, 8, 2.0).unwrap();
        let u0 = space.interpolate(|x| 1.0 + x[0]);
        let p = DiscreteProblem::new(space.clone(), coeffs, mesh.clone(), alpha, SchemeKind::Imex2, u0)
            .unwrap()
            .with_boundary(|x, t| 1.0 + x[0] + t);
        let tr = p.solve_trajectory().unwrap();
        for n in 0..=8 {
            for i in 0..space.n_dofs() {
                let exact = 1.0 + space.mesh().node(i)[0] + mesh.t(n);
                assert!((tr.values[n][i] - exact).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn unforced_diffusion_is_l2_non_increasing() {
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 10).unwrap());
        let mesh = GradedTimeMesh::new(1.0, 20, 3.0).unwrap();
        let u0 = space.interpolate(|x| x[0] * (1.0 - x[0]) * (3.0 * x[0]).exp());
        let p = DiscreteProblem::new(space.clone(), CoefficientSet::laplace(1), mesh, 0.3, SchemeKind::Imex2, u0).unwrap();
        let tr = p.solve_trajectory().unwrap();
        let norms: Vec<f64> = tr.values.iter().map(|v| norm(&space, v, NormKind::L2).unwrap()).collect();
        for w in norms.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn initial_projection_variants() {
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 8).unwrap());
        let coeffs = CoefficientSet::laplace(1);
        let u = |x: &[f64]| (PI * x[0]).sin();
        let gu = |x: &[f64]| [PI * (PI * x[0]).cos(), 0.0];
        for kind in [InitialProjection::Interpolant, InitialProjection::Ritz, InitialProjection::L2] {
            let v = initial_coefficients(&space, &coeffs, kind, &u, Some(&gu)).unwrap();
            assert!(error_norm(&space, &v, &u, &gu, NormKind::L2).unwrap() < 2e-2);
        }
        assert!(initial_coefficients(&space, &coeffs, InitialProjection::Ritz, &u, None).is_err());
        assert_eq!(InitialProjection::parse("L2").unwrap(), InitialProjection::L2);
    }
}
