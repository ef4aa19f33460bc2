//! Convergence, double-mesh and superconvergence studies.

use std::io::Write;

use rayon::prelude::*;

use l1fem::fem::{difference_norm_1d, error_norm, norm, ritz_project, FeSpace, NormKind};
use l1fem::fractional_time::{GradedTimeMesh, GradingPreset, L1KernelTable};
use l1fem::nonlocal::MertonModel;
use l1fem::stepper::{format_sci, DiscreteProblem, InitialProjection, SchemeKind, Trajectory};
use l1fem::{Error, Result};

use crate::coupling::{couple_spatial_mesh, CouplingRule};
use crate::examples::{caputo_time_factor, ExampleId, ExampleSpec};

/// Grading exponent: a named preset or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaChoice {
    Preset(GradingPreset),
    Value(f64),
}

impl GammaChoice {
    pub fn gamma(&self, alpha: f64) -> f64 {
        match self {
            GammaChoice::Preset(p) => p.gamma(alpha),
            GammaChoice::Value(g) => *g,
        }
    }

    pub fn name(&self) -> String {
        match self {
            GammaChoice::Preset(GradingPreset::Optimal) => "2(2-a)/a".into(),
            GammaChoice::Preset(GradingPreset::Minimal) => "(2-a)/a".into(),
            GammaChoice::Value(g) => format_sci(*g),
        }
    }

    /// `2(2-a)/a` (or `optimal`), `(2-a)/a` (or `minimal`), or a number.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(' ', "").as_str() {
            "2(2-a)/a" | "optimal" => Ok(GammaChoice::Preset(GradingPreset::Optimal)),
            "(2-a)/a" | "minimal" => Ok(GammaChoice::Preset(GradingPreset::Minimal)),
            other => other
                .parse::<f64>()
                .map(GammaChoice::Value)
                .map_err(|_| Error::InvalidArgument(format!("unknown grading '{other}'"))),
        }
    }
}

/// Everything that defines a run except `alpha` and `N`.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub example: ExampleId,
    pub scheme: SchemeKind,
    pub gamma: GammaChoice,
    pub coupling: CouplingRule,
    pub initial: InitialProjection,
    pub merton: MertonModel,
    pub convection: bool,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            example: ExampleId::Ex1d,
            scheme: SchemeKind::Imex2,
            gamma: GammaChoice::Preset(GradingPreset::Optimal),
            coupling: CouplingRule::Nominal,
            initial: InitialProjection::Interpolant,
            merton: MertonModel::default(),
            convection: true,
        }
    }
}

/// A solved cell of a study.
#[derive(Debug, Clone)]
pub struct Run {
    pub problem: DiscreteProblem,
    pub trajectory: Trajectory,
    pub cells: usize,
}

impl StudyConfig {
    pub fn for_example(example: ExampleId) -> Self {
        StudyConfig {
            example,
            ..StudyConfig::default()
        }
    }

    pub fn spec(&self, alpha: f64) -> Result<ExampleSpec> {
        let spec = ExampleSpec::new(self.example, alpha)?.with_merton(self.merton);
        Ok(if self.convection { spec } else { spec.without_convection() })
    }

    pub fn cells(&self, alpha: f64, steps: usize) -> Result<usize> {
        let spec = self.spec(alpha)?;
        let m = couple_spatial_mesh(steps, alpha, spec.final_time(), spec.width(), self.coupling)?;
        Ok(match self.coupling {
            CouplingRule::Fixed(_) => m,
            _ => spec.aligned_cells(m),
        })
    }

    pub fn problem(&self, alpha: f64, steps: usize) -> Result<DiscreteProblem> {
        let spec = self.spec(alpha)?;
        let mesh = GradedTimeMesh::new(spec.final_time(), steps, self.gamma.gamma(alpha))?;
        spec.build_problem(mesh, self.cells(alpha, steps)?, self.scheme, self.initial)
    }

    pub fn run(&self, alpha: f64, steps: usize) -> Result<Run> {
        let problem = self.problem(alpha, steps)?;
        let trajectory = problem.solve_trajectory()?;
        Ok(Run {
            cells: self.cells(alpha, steps)?,
            problem,
            trajectory,
        })
    }
}

/// `L2` and `H1` errors against the exact solution at every level `n >= 1`.
pub fn level_errors(spec: &ExampleSpec, space: &FeSpace, trajectory: &Trajectory) -> Result<Vec<[f64; 2]>> {
    if !spec.id.has_exact() {
        return Err(Error::InvalidArgument(format!("{} has no exact solution", spec.id)));
    }
    trajectory.times[1..]
        .iter()
        .zip(&trajectory.values[1..])
        .map(|(&t, v)| {
            let u = |x: &[f64]| spec.exact(x, t).unwrap_or(0.0);
            let g = |x: &[f64]| spec.exact_gradient(x, t).unwrap_or([0.0; 2]);
            Ok([
                error_norm(space, v, &u, &g, NormKind::L2)?,
                error_norm(space, v, &u, &g, NormKind::H1)?,
            ])
        })
        .collect()
}

fn max_levels(levels: &[[f64; 2]]) -> [f64; 2] {
    levels
        .iter()
        .fold([0.0f64; 2], |m, e| [m[0].max(e[0]), m[1].max(e[1])])
}

/// `log2(coarse/fine)`.
pub fn rate(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

fn check_doubling(ns: &[usize]) -> Result<()> {
    if ns.is_empty() || ns[0] == 0 {
        return Err(Error::InvalidArgument("N list must be nonempty and positive".into()));
    }
    if ns.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::InvalidArgument(format!("N list must be strictly doubling, got {ns:?}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub alpha: f64,
    pub steps: usize,
    pub cells: usize,
    /// `E^N_0` (L2) and `E^N_1` (H1).
    pub errors: [f64; 2],
    pub rates: [Option<f64>; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub example: ExampleId,
    /// `exact` or `double-mesh`.
    pub method: &'static str,
    pub scheme: SchemeKind,
    pub gamma: String,
    pub coupling: String,
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    fn assemble(
        cfg: &StudyConfig,
        method: &'static str,
        cells: Vec<(f64, usize, usize, [f64; 2])>,
    ) -> ConvergenceReport {
        let mut rows: Vec<ReportRow> = Vec::with_capacity(cells.len());
        for (alpha, steps, m, errors) in cells {
            let prev = rows.last().filter(|r| r.alpha == alpha);
            let rates = match prev {
                Some(p) => [Some(rate(p.errors[0], errors[0])), Some(rate(p.errors[1], errors[1]))],
                None => [None, None],
            };
            rows.push(ReportRow {
                alpha,
                steps,
                cells: m,
                errors,
                rates,
            });
        }
        ConvergenceReport {
            example: cfg.example,
            method,
            scheme: cfg.scheme,
            gamma: cfg.gamma.name(),
            coupling: cfg.coupling.name(),
            rows,
        }
    }

    pub fn rows_for(&self, alpha: f64) -> Vec<&ReportRow> {
        self.rows.iter().filter(|r| r.alpha == alpha).collect()
    }

    /// Rate of the last row for `alpha` in norm `m` (0 = L2, 1 = H1).
    pub fn final_rate(&self, alpha: f64, m: usize) -> Option<f64> {
        self.rows_for(alpha).last().and_then(|r| r.rates[m])
    }

    /// Largest deviation between stored rates and rates recomputed from the
    /// stored errors.
    pub fn rate_inconsistency(&self) -> f64 {
        let mut worst = 0.0f64;
        for w in self.rows.windows(2) {
            for m in 0..2 {
                match (w[0].alpha == w[1].alpha, w[1].rates[m]) {
                    (true, Some(r)) => worst = worst.max((rate(w[0].errors[m], w[1].errors[m]) - r).abs()),
                    (true, None) => worst = f64::INFINITY,
                    _ => {}
                }
            }
        }
        worst
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidState(format!("write failed: {e}"));
        let r = |x: Option<f64>| x.map_or_else(|| "-".to_string(), format_sci);
        writeln!(out, "example,method,scheme,gamma,coupling,alpha,N,M,E0,R0,E1,R1").map_err(io)?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                self.example,
                self.method,
                self.scheme.name(),
                self.gamma,
                self.coupling,
                format_sci(row.alpha),
                row.steps,
                row.cells,
                format_sci(row.errors[0]),
                r(row.rates[0]),
                format_sci(row.errors[1]),
                r(row.rates[1])
            )
            .map_err(io)?;
        }
        Ok(())
    }

    /// Human-readable table, one block per `alpha`.
    pub fn write_table<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let mut alphas: Vec<f64> = self.rows.iter().map(|r| r.alpha).collect();
        alphas.dedup();
        writeln!(
            out,
            "{} ({}, {}, gamma = {}, coupling = {})",
            self.example,
            self.method,
            self.scheme.name(),
            self.gamma,
            self.coupling
        )?;
        for a in alphas {
            writeln!(out, "alpha = {a}")?;
            writeln!(out, "{:>6} {:>6} {:>12} {:>7} {:>12} {:>7}", "N", "M", "E0", "R0", "E1", "R1")?;
            for row in self.rows_for(a) {
                let r = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
                writeln!(
                    out,
                    "{:>6} {:>6} {:>12.3e} {:>7} {:>12.3e} {:>7}",
                    row.steps,
                    row.cells,
                    row.errors[0],
                    r(row.rates[0]),
                    row.errors[1],
                    r(row.rates[1])
                )?;
            }
        }
        Ok(())
    }
}

/// `E^N_m = max_n ||u_h^n - u(t_n)||_m` for every `(alpha, N)` cell.
pub fn convergence_study(cfg: &StudyConfig, alphas: &[f64], ns: &[usize]) -> Result<ConvergenceReport> {
    check_doubling(ns)?;
    if !cfg.example.has_exact() {
        return Err(Error::InvalidArgument(format!("{} has no exact solution; use the double-mesh study", cfg.example)));
    }
    let jobs: Vec<(f64, usize)> = alphas.iter().flat_map(|&a| ns.iter().map(move |&n| (a, n))).collect();
    let cells = jobs
        .par_iter()
        .map(|&(alpha, steps)| {
            let run = cfg.run(alpha, steps)?;
            let spec = cfg.spec(alpha)?;
            let levels = level_errors(&spec, run.problem.space(), &run.trajectory)?;
            Ok((alpha, steps, run.cells, max_levels(&levels)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::assemble(cfg, "exact", cells))
}

/// `||u_a - u_b||` for discrete solutions on possibly different meshes.
fn solution_difference(space_a: &FeSpace, a: &[f64], space_b: &FeSpace, b: &[f64]) -> Result<[f64; 2]> {
    if space_a.n_dofs() == space_b.n_dofs() && space_a.mesh().resolution() == space_b.mesh().resolution() {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        return Ok([norm(space_a, &d, NormKind::L2)?, norm(space_a, &d, NormKind::H1)?]);
    }
    Ok([
        difference_norm_1d(space_a, a, space_b, b, NormKind::L2)?,
        difference_norm_1d(space_a, a, space_b, b, NormKind::H1)?,
    ])
}

/// `E~^N_m = max_n ||u_h^{2n}(2N) - u_h^n(N)||_m`, pairing coarse level `n`
/// with fine level `2n`. Different spatial meshes are only supported in 1D;
/// with a fixed coupling this measures the temporal error on one mesh.
pub fn double_mesh_study(cfg: &StudyConfig, alphas: &[f64], ns: &[usize]) -> Result<ConvergenceReport> {
    check_doubling(ns)?;
    let mut levels: Vec<usize> = ns.to_vec();
    levels.push(2 * ns[ns.len() - 1]);
    let jobs: Vec<(f64, usize)> = alphas.iter().flat_map(|&a| levels.iter().map(move |&n| (a, n))).collect();
    for &(alpha, steps) in &jobs {
        let fixed = matches!(cfg.coupling, CouplingRule::Fixed(_));
        if cfg.example.dim() != 1 && !fixed && cfg.cells(alpha, steps)? != cfg.cells(alpha, ns[0])? {
            return Err(Error::InvalidArgument(
                "double-mesh with refined spatial meshes is only supported in 1D".into(),
            ));
        }
    }
    let runs = jobs
        .par_iter()
        .map(|&(alpha, steps)| cfg.run(alpha, steps))
        .collect::<Result<Vec<_>>>()?;
    let mut cells = Vec::new();
    for (k, &(alpha, steps)) in jobs.iter().enumerate() {
        if k + 1 >= jobs.len() || jobs[k + 1].0 != alpha {
            continue;
        }
        let (coarse, fine) = (&runs[k], &runs[k + 1]);
        let mut worst = [0.0f64; 2];
        for n in 1..=steps {
            let d = solution_difference(
                coarse.problem.space(),
                &coarse.trajectory.values[n],
                fine.problem.space(),
                &fine.trajectory.values[2 * n],
            )?;
            worst = [worst[0].max(d[0]), worst[1].max(d[1])];
        }
        cells.push((alpha, steps, coarse.cells, worst));
    }
    Ok(ConvergenceReport::assemble(cfg, "double-mesh", cells))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperconvergenceRow {
    pub cells: usize,
    /// `max_n ||R_h u(t_n) - u_h^n||_1`.
    pub theta: f64,
    /// `max_n ||u_h^n - u(t_n)||_1`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperconvergenceReport {
    pub example: ExampleId,
    pub alpha: f64,
    pub steps: usize,
    pub rows: Vec<SuperconvergenceRow>,
}

impl SuperconvergenceReport {
    /// `(theta slope, error slope)` between consecutive rows, per halving of `h`.
    pub fn slopes(&self) -> Vec<(f64, f64)> {
        self.rows
            .windows(2)
            .map(|w| {
                let s = (w[1].cells as f64 / w[0].cells as f64).log2();
                (rate(w[0].theta, w[1].theta) / s, rate(w[0].error, w[1].error) / s)
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidState(format!("write failed: {e}"));
        writeln!(out, "example,alpha,N,M,theta_h1,theta_slope,error_h1,error_slope").map_err(io)?;
        let slopes = self.slopes();
        for (k, row) in self.rows.iter().enumerate() {
            let (ts, es) = match k {
                0 => ("-".to_string(), "-".to_string()),
                _ => (format_sci(slopes[k - 1].0), format_sci(slopes[k - 1].1)),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                self.example,
                format_sci(self.alpha),
                self.steps,
                row.cells,
                format_sci(row.theta),
                ts,
                format_sci(row.error),
                es
            )
            .map_err(io)?;
        }
        Ok(())
    }
}

/// `theta^n = R_h(t_n) u(t_n) - u_h^n` in H1 on meshes with `ms` cells and
/// `steps` time steps (large, so the temporal error is subdominant).
pub fn superconvergence_study(cfg: &StudyConfig, alpha: f64, steps: usize, ms: &[usize]) -> Result<SuperconvergenceReport> {
    let spec = cfg.spec(alpha)?;
    if !spec.id.has_exact() {
        return Err(Error::InvalidArgument(format!("{} has no exact solution", spec.id)));
    }
    let coeffs = spec.coefficients();
    if coeffs.convection.is_some() {
        return Err(Error::InvalidArgument("superconvergence needs b = 0 (disable convection)".into()));
    }
    let rows = ms
        .par_iter()
        .map(|&m| {
            let mut c = cfg.clone();
            c.coupling = CouplingRule::Fixed(m);
            let run = c.run(alpha, steps)?;
            let space = run.problem.space();
            let mut theta = 0.0f64;
            for n in 1..=steps {
                let t = run.trajectory.times[n];
                let ritz = ritz_project(space, |x| spec.exact_gradient(x, t).unwrap_or([0.0; 2]), &coeffs, t)?;
                let d: Vec<f64> = ritz.iter().zip(&run.trajectory.values[n]).map(|(a, b)| a - b).collect();
                theta = theta.max(norm(space, &d, NormKind::H1)?);
            }
            let error = max_levels(&level_errors(&spec, space, &run.trajectory)?)[1];
            Ok(SuperconvergenceRow { cells: m, theta, error })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuperconvergenceReport {
        example: spec.id,
        alpha,
        steps,
        rows,
    })
}

/// L1 truncation error `tau^n = D_N^a phi(t_n) - D^a phi(t_n)` for
/// `phi = t^a + t^3` on a graded mesh over `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Truncation {
    /// `max_n |tau^n|`; does not decay, since `tau^1` is O(1) for `t^a`.
    pub pointwise: f64,
    /// `max_n sum_i P^{n,i} |tau^i|`, the quantity the error analysis bounds
    /// by `C N^{-min(gamma a, 2-a)}`.
    pub weighted: f64,
}

pub fn scalar_l1_truncation(alpha: f64, steps: usize, gamma: f64) -> Result<L1Truncation> {
    let mesh = GradedTimeMesh::new(1.0, steps, gamma)?;
    let kernels = L1KernelTable::with_complementary(&mesh, alpha)?;
    let values: Vec<f64> = mesh.points().iter().map(|t| t.powf(alpha) + t.powi(3)).collect();
    let tau: Vec<f64> = (1..=steps)
        .map(|n| Ok((kernels.l1_derivative(&values, n)? - caputo_time_factor(alpha, mesh.t(n))).abs()))
        .collect::<Result<_>>()?;
    let mut weighted = 0.0f64;
    for n in 1..=steps {
        let s: f64 = (1..=n).map(|i| kernels.p(n, i) * tau[i - 1]).sum();
        weighted = weighted.max(s);
    }
    Ok(L1Truncation {
        pointwise: tau.iter().fold(0.0f64, |m, t| m.max(*t)),
        weighted,
    })
}
