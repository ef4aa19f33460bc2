//! Randomised property suites for the L1 kernels and the discrete
//! fractional Grönwall inequality.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use l1fem::fractional_time::properties::{
    complementary_bound_violation, kernel_power_violation, mittag_leffler_violation, monotonicity_violation,
    orthogonality_defect,
};
use l1fem::fractional_time::{
    build_p_table, check_gronwall, saturating_sequence, timestep_threshold, GradedTimeMesh, GronwallInput,
    L1KernelTable,
};
use l1fem::stepper::format_sci;
use l1fem::{Error, Result};

pub const PROPERTY_TOLERANCE: f64 = 1e-10;

pub const PROPERTY_NAMES: [&str; 5] = [
    "kernel-monotone",
    "complementary-bound",
    "complementary-identity",
    "kernel-power",
    "mittag-leffler",
];

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOptions {
    pub seed: u64,
    pub cases: usize,
    pub max_steps: usize,
    pub alpha_range: (f64, f64),
    pub gamma_range: (f64, f64),
    /// Perturbs one entry of `K` after `P` has been built from the clean table.
    pub corrupt_kernel: bool,
}

impl Default for PropertyOptions {
    fn default() -> Self {
        PropertyOptions {
            seed: 0,
            cases: 200,
            max_steps: 64,
            alpha_range: (0.1, 0.9),
            gamma_range: (1.0, 8.0),
            corrupt_kernel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyEntry {
    pub case: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub steps: usize,
    pub property: &'static str,
    pub value: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PropertyReport {
    pub entries: Vec<PropertyEntry>,
}

impl PropertyReport {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.status == Status::Fail).count()
    }

    pub fn skipped(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e.status, Status::Skipped(_))).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidState(format!("write failed: {e}"));
        writeln!(out, "case,alpha,gamma,N,property,value,tolerance,status").map_err(io)?;
        for e in &self.entries {
            let status = match &e.status {
                Status::Pass => "pass".to_string(),
                Status::Fail => "fail".to_string(),
                Status::Skipped(why) => format!("skipped: {}", why.replace(',', ";")),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                e.case,
                format_sci(e.alpha),
                format_sci(e.gamma),
                e.steps,
                e.property,
                format_sci(e.value),
                format_sci(PROPERTY_TOLERANCE),
                status
            )
            .map_err(io)?;
        }
        Ok(())
    }
}

fn corrupted(kernels: &L1KernelTable) -> Result<L1KernelTable> {
    let mut k = kernels.k_table().clone();
    let n = kernels.steps();
    let v = k.get(n, 1);
    k.set(n, 1, 1.5 * v);
    let p = build_p_table(kernels.k_table());
    L1KernelTable::from_parts(kernels.alpha(), k, Some(p))
}

/// Checks every kernel property on one mesh. Properties that cannot be
/// evaluated are reported as skipped.
pub fn check_mesh(case: usize, alpha: f64, gamma: f64, steps: usize, mu: f64, corrupt: bool) -> Vec<PropertyEntry> {
    let entry = |property, value: f64, status| PropertyEntry {
        case,
        alpha,
        gamma,
        steps,
        property,
        value,
        status,
    };
    let skip_all = |why: String| {
        PROPERTY_NAMES
            .iter()
            .map(|&p| entry(p, f64::NAN, Status::Skipped(why.clone())))
            .collect::<Vec<_>>()
    };
    let mesh = match GradedTimeMesh::new(1.0, steps, gamma) {
        Ok(m) => m,
        Err(e) => return skip_all(e.to_string()),
    };
    if let Some(index) = mesh.first_decrease() {
        return skip_all(Error::DecreasingSteps { index }.to_string());
    }
    let kernels = match L1KernelTable::with_complementary(&mesh, alpha).and_then(|k| {
        if corrupt {
            corrupted(&k)
        } else {
            Ok(k)
        }
    }) {
        Ok(k) => k,
        Err(e) => return skip_all(e.to_string()),
    };
    let values: [Result<f64>; 5] = [
        Ok(monotonicity_violation(&kernels)),
        complementary_bound_violation(&kernels, &mesh),
        orthogonality_defect(&kernels),
        kernel_power_violation(&kernels, &mesh),
        mittag_leffler_violation(&kernels, &mesh, mu),
    ];
    PROPERTY_NAMES
        .iter()
        .zip(values)
        .map(|(&name, v)| match v {
            Ok(v) if v <= PROPERTY_TOLERANCE => entry(name, v, Status::Pass),
            Ok(v) => entry(name, v, Status::Fail),
            Err(e) => entry(name, f64::NAN, Status::Skipped(e.to_string())),
        })
        .collect()
}

/// Runs the kernel properties over random `(alpha, gamma, N)`.
pub fn property_suite(options: &PropertyOptions) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut report = PropertyReport::default();
    for case in 0..options.cases {
        let alpha = rng.gen_range(options.alpha_range.0..=options.alpha_range.1);
        let gamma = rng.gen_range(options.gamma_range.0..=options.gamma_range.1);
        let steps = rng.gen_range(1..=options.max_steps.max(1));
        let mu = rng.gen_range(0.1..5.0);
        report
            .entries
            .extend(check_mesh(case, alpha, gamma, steps, mu, options.corrupt_kernel));
    }
    report
}

/// Random admissible input: `Lambda` strictly below the step-size cap, the
/// `lambda^n_j` rows summing to at most `Lambda`.
pub fn random_gronwall_input(rng: &mut impl Rng, mesh: &GradedTimeMesh, alpha: f64) -> GronwallInput {
    let steps = mesh.steps();
    let cap = 1.0 / (2.0 * libm::tgamma(2.0 - alpha) * mesh.max_step().powf(alpha));
    let big_lambda = rng.gen_range(0.0..0.99) * cap;
    let mut input = GronwallInput::zeros(steps);
    input.v0 = rng.gen();
    input.big_lambda = big_lambda;
    for n in 0..steps {
        input.xi[n] = rng.gen();
        input.eta[n] = rng.gen();
        input.zeta[n] = rng.gen();
        let raw: Vec<f64> = (0..=n + 1).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let share: f64 = rng.gen();
        input.lambda[n] = raw.iter().map(|r| r / total * share * big_lambda).collect();
    }
    input
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GronwallSummary {
    pub cases: usize,
    pub skipped: usize,
    pub failures: usize,
    /// Largest `v^n / bound^n` seen.
    pub max_ratio: f64,
}

/// Checks the bound on sequences generated by the recurrence (saturated or
/// scaled down by random factors).
pub fn gronwall_suite(seed: u64, cases: usize, max_steps: usize) -> Result<GronwallSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = GronwallSummary::default();
    for _ in 0..cases {
        let alpha = rng.gen_range(0.1..0.9);
        let gamma = rng.gen_range(1.0..6.0);
        let steps = rng.gen_range(1..=max_steps.max(1));
        let mesh = GradedTimeMesh::new(1.0, steps, gamma)?;
        let kernels = L1KernelTable::with_complementary(&mesh, alpha)?;
        let input = random_gronwall_input(&mut rng, &mesh, alpha);
        let saturate = rng.gen_bool(0.5);
        let scale: Vec<f64> = (0..steps).map(|_| if saturate { 1.0 } else { rng.gen() }).collect();
        summary.cases += 1;
        if mesh.max_step() >= timestep_threshold(alpha, input.big_lambda) {
            summary.skipped += 1;
            continue;
        }
        let v = saturating_sequence(&input, &kernels, &scale)?;
        let check = check_gronwall(&input, &v, &mesh, &kernels)?;
        summary.max_ratio = summary.max_ratio.max(check.max_ratio);
        if !check.holds {
            summary.failures += 1;
        }
    }
    Ok(summary)
}
