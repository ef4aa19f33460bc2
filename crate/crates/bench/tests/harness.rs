use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

use l1fem::fractional_time::GradingPreset;
use l1fem_bench::props::{property_suite, PropertyOptions};
use l1fem_bench::studies::rate;
use l1fem_bench::{
    convergence_study, couple_spatial_mesh, double_mesh_study, CouplingRule, ExampleId, ExampleSpec, GammaChoice,
    StudyConfig,
};

/// Coefficients and exact solutions written out independently of the library.
struct Reference {
    id: ExampleId,
    alpha: f64,
}

impl Reference {
    fn wave(&self) -> f64 {
        match self.id {
            ExampleId::Ex2dPde => 2.0 * PI,
            _ => PI,
        }
    }

    fn phi(&self, t: f64) -> f64 {
        t.powf(self.alpha) + t.powi(3)
    }

    fn caputo_phi(&self, t: f64) -> f64 {
        gamma(1.0 + self.alpha) + 6.0 * t.powf(3.0 - self.alpha) / gamma(4.0 - self.alpha)
    }

    fn space(&self, x: &[f64]) -> f64 {
        x.iter().map(|xi| (self.wave() * xi).sin()).product()
    }

    fn u(&self, x: &[f64], t: f64) -> f64 {
        self.space(x) * self.phi(t)
    }

    fn diffusion(&self, x: &[f64], t: f64) -> [[f64; 2]; 2] {
        match self.id {
            ExampleId::Ex1d => [[2.0 + x[0] * x[0] + t.sin(), 0.0], [0.0, 0.0]],
            _ => [[2.0 - t.cos(), x[0] * x[1]], [x[0] * x[1], 2.0 - t.sin()]],
        }
    }

    fn convection(&self, x: &[f64], t: f64) -> [f64; 2] {
        match self.id {
            ExampleId::Ex1d => [1.0 + x[0] * x[0] + t * t, 0.0],
            _ => [1.0 + 2.0 * x[0] * x[1], 1.0 + x[0] * x[1]],
        }
    }

    fn reaction(&self, x: &[f64], t: f64) -> f64 {
        match self.id {
            ExampleId::Ex1d => 1.0 + 2.0 * x[0] * x[0] + t.sin(),
            _ => 1.0 - t.sin(),
        }
    }

    fn lambda(&self) -> f64 {
        if self.id == ExampleId::Ex2dPide {
            0.5
        } else {
            0.0
        }
    }

    fn dim(&self) -> usize {
        if self.id == ExampleId::Ex1d {
            1
        } else {
            2
        }
    }
}

const FD_STEP: f64 = 1e-3;

/// Fourth-order central difference of `f` along coordinate `axis`.
fn central(f: impl Fn(&[f64]) -> f64, x: &[f64], axis: usize) -> f64 {
    let at = |s: f64| {
        let mut y = x.to_vec();
        y[axis] += s * FD_STEP;
        f(&y)
    };
    (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * FD_STEP)
}

fn gradient(r: &Reference, x: &[f64], t: f64) -> [f64; 2] {
    let k = r.wave();
    let mut g = [0.0; 2];
    for (axis, gi) in g.iter_mut().enumerate().take(r.dim()) {
        let others: f64 = (0..r.dim()).filter(|&i| i != axis).map(|i| (k * x[i]).sin()).product();
        *gi = k * (k * x[axis]).cos() * others * r.phi(t);
    }
    g
}

/// Composite Simpson on the unit square.
fn simpson_2d(f: impl Fn(f64, f64) -> f64, panels: usize) -> f64 {
    let h = 1.0 / panels as f64;
    let w = |i: usize| {
        if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut sum = 0.0;
    for i in 0..=panels {
        for j in 0..=panels {
            sum += w(i) * w(j) * f(i as f64 * h, j as f64 * h);
        }
    }
    sum * h * h / 9.0
}

#[test]
fn manufactured_source_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for id in [ExampleId::Ex1d, ExampleId::Ex2dPde, ExampleId::Ex2dPide] {
        for alpha in [0.3, 0.7] {
            let r = Reference { id, alpha };
            let spec = ExampleSpec::new(id, alpha).unwrap();
            let coeffs = spec.coefficients();
            assert_eq!(coeffs.lambda, r.lambda());
            let kernel = spec.kernel();
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let x: Vec<f64> = (0..r.dim()).map(|_| rng.gen_range(0.05..0.95)).collect();
                let t = rng.gen_range(0.01..=1.0);
                // Library coefficients agree with the printed ones.
                let a_lib = (coeffs.diffusion)(&x, t);
                let a_ref = r.diffusion(&x, t);
                for i in 0..r.dim() {
                    for j in 0..r.dim() {
                        assert!((a_lib[i][j] - a_ref[i][j]).abs() < 1e-14);
                    }
                }
                assert!((coeffs.reaction_at(&x, t) - r.reaction(&x, t)).abs() < 1e-14);
                let b = r.convection(&x, t);
                let b_lib = coeffs.convection_at(&x, t);
                for i in 0..r.dim() {
                    assert!((b_lib[i] - b[i]).abs() < 1e-14);
                }

                let flux = |y: &[f64], axis: usize| {
                    let a = r.diffusion(y, t);
                    let g = gradient(&r, y, t);
                    (0..r.dim()).map(|k| a[axis][k] * g[k]).sum::<f64>()
                };
                let div: f64 = (0..r.dim()).map(|axis| central(|y| flux(y, axis), &x, axis)).sum();
                let grad = gradient(&r, &x, t);
                let transport: f64 = (0..r.dim()).map(|i| b[i] * grad[i]).sum();
                let integral = match &kernel {
                    Some(k) if r.lambda() != 0.0 => simpson_2d(|y1, y2| r.u(&[y1, y2], t) * k.eval(&x, &[y1, y2]), 200),
                    _ => 0.0,
                };
                let lhs = r.space(&x) * r.caputo_phi(t) - div + transport + r.reaction(&x, t) * r.u(&x, t)
                    - r.lambda() * integral;
                worst = worst.max((lhs - coeffs.source_at(&x, t)).abs());
            }
            assert!(worst < 1e-8, "{id} a={alpha}: residual {worst:.3e}");
        }
    }
}

#[test]
fn pide_integral_closed_form() {
    let r = Reference {
        id: ExampleId::Ex2dPide,
        alpha: 0.5,
    };
    let x = [0.3, 0.6];
    let quad = simpson_2d(|y1, y2| r.space(&[y1, y2]) * (x[0] + x[1]), 200);
    assert!((quad - 4.0 * (x[0] + x[1]) / (PI * PI)).abs() < 1e-9);
}

#[test]
fn reports_are_byte_identical() {
    let cfg = StudyConfig::default();
    let csv = || {
        let report = convergence_study(&cfg, &[0.3, 0.6], &[8, 16, 32]).unwrap();
        let mut out = Vec::new();
        report.write_csv(&mut out).unwrap();
        out
    };
    assert_eq!(csv(), csv());

    let props = || {
        let report = property_suite(&PropertyOptions {
            seed: 9,
            cases: 30,
            ..PropertyOptions::default()
        });
        let mut out = Vec::new();
        report.write_csv(&mut out).unwrap();
        out
    };
    assert_eq!(props(), props());
}

#[test]
fn stored_rates_match_errors() {
    let report = convergence_study(&StudyConfig::default(), &[0.5], &[8, 16, 32]).unwrap();
    assert!(report.rate_inconsistency() <= 1e-12);
    let rows = report.rows_for(0.5);
    assert_eq!(rows[0].rates, [None, None]);
    for w in rows.windows(2) {
        for m in 0..2 {
            assert_eq!(w[1].rates[m], Some(rate(w[0].errors[m], w[1].errors[m])));
        }
    }
}

#[test]
fn double_mesh_tracks_direct_rates() {
    let cfg = StudyConfig::default();
    let ns = [16, 32, 64];
    let direct = convergence_study(&cfg, &[0.5], &ns).unwrap();
    let double = double_mesh_study(&cfg, &[0.5], &ns).unwrap();
    let (d, m) = (direct.final_rate(0.5, 0).unwrap(), double.final_rate(0.5, 0).unwrap());
    assert!((d - m).abs() <= 0.2, "direct {d:.3} vs double-mesh {m:.3}");
}

#[test]
fn coupling_matches_nominal_formula() {
    // h = (1/16)^{0.75} = 1/8.
    assert_eq!(couple_spatial_mesh(16, 0.5, 1.0, 1.0, CouplingRule::Nominal).unwrap(), 8);
    let gamma = GammaChoice::Preset(GradingPreset::Optimal).gamma(0.5);
    assert_eq!(gamma, 6.0);
    assert_eq!(couple_spatial_mesh(64, 0.5, 1.0, 1.0, CouplingRule::Fixed(5)).unwrap(), 5);
}
