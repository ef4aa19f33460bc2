use l1fem::fem::{FeSpace, SpatialMesh};
use l1fem::fractional_time::{mittag_leffler, rl_kernel};
use l1fem::nonlocal::{assemble_integral_matrix, normal_cdf, MertonModel};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::gamma;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn normal_cdf_matches_statrs() {
    let n = Normal::new(0.0, 1.0).unwrap();
    for i in -80..=80 {
        let y = i as f64 * 0.1;
        let (a, b) = (normal_cdf(y), n.cdf(y));
        assert!((a - b).abs() <= 1e-14 + 1e-10 * b, "{y}: {a} vs {b}");
    }
}

#[test]
fn riemann_liouville_kernel_matches_statrs_gamma() {
    for &(t, beta) in &[(0.3, 0.5), (2.0, 1.7), (1e-3, 0.2), (5.0, 3.0)] {
        let expected = f64::powf(t, beta - 1.0) / gamma(beta);
        assert!((rl_kernel(t, beta).unwrap() - expected).abs() < 1e-13 * expected);
    }
}

#[test]
fn mittag_leffler_reference_values() {
    for z in [0.0, 0.5, 1.0, 2.0] {
        let expected = f64::exp(z * z) * libm::erfc(-z);
        assert!((mittag_leffler(0.5, z).unwrap() - expected).abs() < 1e-8);
    }
    for i in 0..=100 {
        let z = i as f64 * 0.1;
        assert!((mittag_leffler(1.0, z).unwrap() - z.exp()).abs() < 1e-10 * z.exp());
    }
    // E_2(-z^2) = cos z is outside (0, 1]; E_a(0) = 1 for any admissible order.
    assert_eq!(mittag_leffler(0.37, 0.0).unwrap(), 1.0);
}

#[test]
fn merton_kappa_by_quadrature() {
    let m = MertonModel::default();
    let (lo, hi) = (m.mu_j - 14.0 * m.sigma_j, m.mu_j + 14.0 * m.sigma_j);
    let kappa = simpson(|z| z.exp_m1() * m.density(z), lo, hi, 4000);
    assert!((kappa - m.kappa()).abs() < 1e-11);
    assert!((m.kappa() + 0.550_109).abs() < 1e-6);
}

#[test]
fn merton_tail_by_quadrature() {
    let m = MertonModel::default();
    for t in [0.0, 0.1, 0.25] {
        for i in 0..=12 {
            let x = -1.5 + 0.25 * i as f64;
            let far = |y: f64| m.strike * (-m.r * t).exp() - m.s0 * y.exp();
            let lo = x + m.mu_j - 14.0 * m.sigma_j;
            let hi = -m.half_width;
            let q = if hi > lo {
                simpson(|y| far(y) * m.density(y - x), lo, hi, 6000)
            } else {
                0.0
            };
            let r = m.tail_r(x, t);
            assert!((q - r).abs() < 1e-9 * (1.0 + r.abs()), "x = {x}, t = {t}: {q} vs {r}");
        }
    }
}

#[test]
fn merton_integral_matrix_row_sums() {
    // G 1 = (int_Omega rho(y - x) dy, phi_i); the inner integral is a
    // difference of normal CDFs.
    let m = MertonModel::default();
    let space = FeSpace::new(SpatialMesh::interval(-1.5, 1.5, 60).unwrap());
    let g = assemble_integral_matrix(&space, &m.kernel());
    let ones = vec![1.0; space.n_dofs()];
    let gu = g.matvec(&ones);
    let inner = |x: f64| {
        normal_cdf((1.5 - x - m.mu_j) / m.sigma_j) - normal_cdf((-1.5 - x - m.mu_j) / m.sigma_j)
    };
    let reference = l1fem::fem::assemble_load(&space, |x| inner(x[0]));
    for (a, b) in gu.iter().zip(&reference) {
        assert!((a - b).abs() < 1e-5 * b.abs().max(1e-3), "{a} vs {b}");
    }
}
