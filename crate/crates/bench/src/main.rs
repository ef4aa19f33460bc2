use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use l1fem::fem::{error_norm, NormKind};
use l1fem::fractional_time::{GradedTimeMesh, GradingPreset, L1KernelTable};
use l1fem::nonlocal::PayoffKind;
use l1fem::stepper::{format_sci, InitialProjection, SchemeKind};
use l1fem::{Error, Result};
use l1fem_bench::config::parse_list;
use l1fem_bench::props::{gronwall_suite, property_suite, PropertyOptions};
use l1fem_bench::studies::superconvergence_study;
use l1fem_bench::{convergence_study, double_mesh_study, Config, CouplingRule, ExampleId, GammaChoice, StudyConfig};

#[derive(Parser)]
#[command(name = "l1fem", version, about = "Graded-mesh L1 finite element solver and convergence harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the L1 kernel K and complementary kernel P as CSV.
    Kernels(Common),
    /// Run the randomised kernel and Gronwall property suites.
    Props {
        #[command(flatten)]
        common: Common,
        /// Perturb one kernel entry to check that failures are detected.
        #[arg(long)]
        corrupt: bool,
    },
    /// Single run; per-step CSV with error columns when the exact solution is known.
    Solve(Common),
    /// Convergence table against the exact solution.
    Study {
        #[command(flatten)]
        common: Common,
        /// Print an aligned table instead of CSV.
        #[arg(long)]
        table: bool,
    },
    /// Double-mesh convergence table (Merton put by default).
    Merton {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        table: bool,
    },
    /// Ritz-projected error versus full error under spatial refinement.
    Supercvg(Common),
}

/// Flags shared by all subcommands. CLI values override `--config`, which
/// overrides the subcommand defaults.
#[derive(Args, Clone, Default)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    example: Option<String>,
    /// Comma-separated fractional orders.
    #[arg(long)]
    alpha: Option<String>,
    /// Comma-separated step counts.
    #[arg(long = "N")]
    n: Option<String>,
    /// Fixed cell count per direction (comma list for `supercvg`).
    #[arg(long = "M", conflicts_with = "couple")]
    m: Option<String>,
    /// `nominal`, `max-step` or a fixed cell count.
    #[arg(long)]
    couple: Option<String>,
    #[arg(long, conflicts_with = "gamma_preset")]
    gamma: Option<f64>,
    /// `2(2-a)/a` or `(2-a)/a`.
    #[arg(long)]
    gamma_preset: Option<String>,
    /// `implicit`, `imex1` or `imex2`.
    #[arg(long)]
    scheme: Option<String>,
    /// `interpolant`, `ritz` or `l2`.
    #[arg(long)]
    initial: Option<String>,
    /// `standard-put` or `as-printed`.
    #[arg(long)]
    payoff: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Defaults {
    example: ExampleId,
    alpha: &'static str,
    n: &'static str,
}

impl Common {
    fn resolve(&self, defaults: Defaults) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let overrides: [(&str, Option<String>); 12] = [
            ("example", self.example.clone()),
            ("alpha", self.alpha.clone()),
            ("N", self.n.clone()),
            ("M", self.m.clone()),
            ("couple", self.couple.clone()),
            ("gamma", self.gamma.map(|g| g.to_string())),
            ("gamma_preset", self.gamma_preset.clone()),
            ("scheme", self.scheme.clone()),
            ("initial", self.initial.clone()),
            ("payoff", self.payoff.clone()),
            ("seed", self.seed.map(|s| s.to_string())),
            ("cases", self.cases.map(|c| c.to_string())),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                // A CLI choice replaces its config alternative.
                match key {
                    "M" => cfg.remove("couple"),
                    "couple" => cfg.remove("M"),
                    "gamma" => cfg.remove("gamma_preset"),
                    "gamma_preset" => cfg.remove("gamma"),
                    _ => {}
                }
                cfg.set(key, v);
            }
        }
        if let Some(out) = &self.out {
            cfg.set("out", out.display().to_string());
        }
        if cfg.get("example").is_none() {
            cfg.set("example", defaults.example.name());
        }
        if cfg.get("alpha").is_none() {
            cfg.set("alpha", defaults.alpha);
        }
        if cfg.get("N").is_none() {
            cfg.set("N", defaults.n);
        }
        Ok(cfg)
    }
}

fn alphas(cfg: &Config) -> Result<Vec<f64>> {
    let list = cfg.get_list::<f64>("alpha")?.unwrap_or_default();
    if list.is_empty() {
        return Err(Error::InvalidArgument("alpha list is empty".into()));
    }
    Ok(list)
}

fn steps(cfg: &Config) -> Result<Vec<usize>> {
    let list = cfg.get_list::<usize>("N")?.unwrap_or_default();
    if list.is_empty() {
        return Err(Error::InvalidArgument("N list is empty".into()));
    }
    Ok(list)
}

fn single<T: Copy>(list: &[T], what: &str) -> Result<T> {
    match list {
        [v] => Ok(*v),
        _ => Err(Error::InvalidArgument(format!("{what} takes a single value here"))),
    }
}

fn gamma_choice(cfg: &Config) -> Result<GammaChoice> {
    match (cfg.get("gamma"), cfg.get("gamma_preset")) {
        (Some(_), Some(_)) => Err(Error::InvalidArgument("set either gamma or gamma_preset".into())),
        (Some(g), None) => GammaChoice::parse(g),
        (None, Some(p)) => GammaChoice::parse(p),
        (None, None) => Ok(GammaChoice::Preset(GradingPreset::Optimal)),
    }
}

fn study_config(cfg: &Config) -> Result<StudyConfig> {
    let example = ExampleId::parse(cfg.get("example").unwrap_or("ex1d"))?;
    let mut study = StudyConfig::for_example(example);
    study.gamma = gamma_choice(cfg)?;
    if let Some(s) = cfg.get("scheme") {
        study.scheme = SchemeKind::parse(s)?;
    }
    if let Some(s) = cfg.get("initial") {
        study.initial = InitialProjection::parse(s)?;
    }
    if let Some(s) = cfg.get("payoff") {
        study.merton.payoff = PayoffKind::parse(s)?;
    }
    study.coupling = match (cfg.get("M"), cfg.get("couple")) {
        (Some(_), Some(_)) => return Err(Error::InvalidArgument("set either M or couple".into())),
        (Some(m), None) => CouplingRule::Fixed(single(&parse_list::<usize>(m, "M")?, "M")?),
        (None, Some(c)) => {
            let gamma = match study.gamma {
                GammaChoice::Value(g) => g,
                GammaChoice::Preset(_) => f64::NAN,
            };
            match CouplingRule::parse(c, gamma)? {
                CouplingRule::MaxStep { gamma } if gamma.is_nan() => {
                    return Err(Error::InvalidArgument(
                        "max-step coupling needs an explicit numeric gamma".into(),
                    ))
                }
                rule => rule,
            }
        }
        (None, None) => CouplingRule::Nominal,
    };
    Ok(study)
}

fn open_output(cfg: &Config) -> Result<Box<dyn Write>> {
    match cfg.get("out") {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::InvalidArgument(format!("cannot create {path}: {e}")))?;
            info!("writing {path}");
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(std::io::stdout()))),
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidState(format!("write failed: {e}"))
}

fn run_kernels(common: &Common) -> Result<ExitCode> {
    let cfg = common.resolve(Defaults {
        example: ExampleId::Ex1d,
        alpha: "0.5",
        n: "8",
    })?;
    let alpha = single(&alphas(&cfg)?, "alpha")?;
    let n = single(&steps(&cfg)?, "N")?;
    let mesh = GradedTimeMesh::new(1.0, n, gamma_choice(&cfg)?.gamma(alpha))?;
    let kernels = L1KernelTable::with_complementary(&mesh, alpha)?;
    let mut out = open_output(&cfg)?;
    writeln!(out, "n,j,t_n,K,P").map_err(io_err)?;
    for row in 1..=n {
        for j in 1..=row {
            writeln!(
                out,
                "{row},{j},{},{},{}",
                format_sci(mesh.t(row)),
                format_sci(kernels.k(row, j)),
                format_sci(kernels.p(row, j))
            )
            .map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)?;
    Ok(ExitCode::SUCCESS)
}

fn run_props(common: &Common, corrupt: bool) -> Result<ExitCode> {
    let cfg = common.resolve(Defaults {
        example: ExampleId::Ex1d,
        alpha: "0.5",
        n: "64",
    })?;
    let seed = cfg.get_parsed::<u64>("seed")?.unwrap_or(0);
    let cases = cfg.get_parsed::<usize>("cases")?.unwrap_or(200);
    let max_steps = single(&steps(&cfg)?, "N")?;
    let report = property_suite(&PropertyOptions {
        seed,
        cases,
        max_steps,
        corrupt_kernel: corrupt,
        ..PropertyOptions::default()
    });
    let mut out = open_output(&cfg)?;
    report.write_csv(&mut out)?;
    out.flush().map_err(io_err)?;
    let gronwall = gronwall_suite(seed, cases, max_steps.min(32))?;
    eprintln!(
        "kernel properties: {} entries, {} failures, {} skipped; Gronwall: {} inputs, {} violations, max ratio {:.4}",
        report.entries.len(),
        report.failures(),
        report.skipped(),
        gronwall.cases,
        gronwall.failures,
        gronwall.max_ratio
    );
    if report.passed() && gronwall.failures == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn run_solve(common: &Common) -> Result<ExitCode> {
    let cfg = common.resolve(Defaults {
        example: ExampleId::Ex1d,
        alpha: "0.5",
        n: "32",
    })?;
    let study = study_config(&cfg)?;
    let alpha = single(&alphas(&cfg)?, "alpha")?;
    let n = single(&steps(&cfg)?, "N")?;
    let run = study.run(alpha, n)?;
    info!("{} a={alpha} N={n} M={} scheme={}", study.example, run.cells, study.scheme.name());
    let spec = study.spec(alpha)?;
    let mut out = open_output(&cfg)?;
    if spec.id.has_exact() {
        let space = run.problem.space();
        let mut columns = [Vec::new(), Vec::new()];
        for (&t, v) in run.trajectory.times.iter().zip(&run.trajectory.values) {
            let u = |x: &[f64]| spec.exact(x, t).unwrap_or(0.0);
            let g = |x: &[f64]| spec.exact_gradient(x, t).unwrap_or([0.0; 2]);
            columns[0].push(error_norm(space, v, &u, &g, NormKind::L2)?);
            columns[1].push(error_norm(space, v, &u, &g, NormKind::H1)?);
        }
        run.trajectory
            .write_csv(&mut out, &[("err_L2", &columns[0]), ("err_H1", &columns[1])])?;
    } else {
        run.trajectory.write_csv(&mut out, &[])?;
    }
    out.flush().map_err(io_err)?;
    Ok(ExitCode::SUCCESS)
}

fn run_study(common: &Common, table: bool, double_mesh: bool) -> Result<ExitCode> {
    let cfg = common.resolve(if double_mesh {
        Defaults {
            example: ExampleId::Merton,
            alpha: "0.2,0.5,0.8",
            n: "32,64,128",
        }
    } else {
        Defaults {
            example: ExampleId::Ex1d,
            alpha: "0.2,0.5,0.8",
            n: "16,32,64,128",
        }
    })?;
    let study = study_config(&cfg)?;
    let (alphas, ns) = (alphas(&cfg)?, steps(&cfg)?);
    let report = if double_mesh {
        double_mesh_study(&study, &alphas, &ns)?
    } else {
        convergence_study(&study, &alphas, &ns)?
    };
    let mut out = open_output(&cfg)?;
    if table {
        report.write_table(&mut out).map_err(io_err)?;
    } else {
        report.write_csv(&mut out)?;
    }
    out.flush().map_err(io_err)?;
    Ok(ExitCode::SUCCESS)
}

fn run_supercvg(common: &Common) -> Result<ExitCode> {
    let mut cfg = common.resolve(Defaults {
        example: ExampleId::Ex1d,
        alpha: "0.5",
        n: "2048",
    })?;
    let ms = parse_list::<usize>(cfg.get("M").unwrap_or("8,16,32"), "M")?;
    cfg.remove("M");
    let mut study = study_config(&cfg)?;
    study.convection = false;
    let alpha = single(&alphas(&cfg)?, "alpha")?;
    let n = single(&steps(&cfg)?, "N")?;
    let report = superconvergence_study(&study, alpha, n, &ms)?;
    for (theta, error) in report.slopes() {
        info!("slopes: theta {theta:.3}, error {error:.3}");
    }
    let mut out = open_output(&cfg)?;
    report.write_csv(&mut out)?;
    out.flush().map_err(io_err)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Kernels(c) => run_kernels(c),
        Command::Props { common, corrupt } => run_props(common, *corrupt),
        Command::Solve(c) => run_solve(c),
        Command::Study { common, table } => run_study(common, *table, false),
        Command::Merton { common, table } => run_study(common, *table, true),
        Command::Supercvg(c) => run_supercvg(c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
