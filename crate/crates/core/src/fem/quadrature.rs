/// Quadrature on the reference simplex, points in barycentric coordinates.
///
/// Weights sum to the reference measure (1 for the unit interval, 1/2 for
/// the unit triangle); multiply by `measure / reference_measure` on a
/// physical element.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub dim: usize,
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn reference_measure(&self) -> f64 {
        if self.dim == 1 {
            1.0
        } else {
            0.5
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Physical weights on an element of the given measure.
    pub fn scaled_weights(&self, measure: f64) -> impl Iterator<Item = f64> + '_ {
        let s = measure / self.reference_measure();
        self.weights.iter().map(move |w| w * s)
    }

    fn interval(nodes: &[f64], weights: &[f64], degree: usize) -> Self {
        // Nodes/weights given on [-1, 1].
        QuadratureRule {
            dim: 1,
            degree,
            points: nodes.iter().map(|x| {
                let s = 0.5 * (x + 1.0);
                [1.0 - s, s, 0.0]
            }).collect(),
            weights: weights.iter().map(|w| 0.5 * w).collect(),
        }
    }

    /// Two-point Gauss-Legendre, degree 3.
    pub fn gauss_legendre_2() -> Self {
        let x = 1.0 / 3f64.sqrt();
        Self::interval(&[-x, x], &[1.0, 1.0], 3)
    }

    /// Three-point Gauss-Legendre, degree 5.
    pub fn gauss_legendre_3() -> Self {
        let x = (0.6f64).sqrt();
        Self::interval(&[-x, 0.0, x], &[5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0], 5)
    }

    /// Five-point Gauss-Legendre, degree 9.
    pub fn gauss_legendre_5() -> Self {
        let a = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
        let b = (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
        let wa = (322.0 + 13.0 * 70f64.sqrt()) / 900.0;
        let wb = (322.0 - 13.0 * 70f64.sqrt()) / 900.0;
        Self::interval(&[-b, -a, 0.0, a, b], &[wb, wa, 128.0 / 225.0, wa, wb], 9)
    }

    /// Edge-midpoint rule on triangles, degree 2.
    pub fn triangle_midpoints() -> Self {
        QuadratureRule {
            dim: 2,
            degree: 2,
            points: vec![[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]],
            weights: vec![1.0 / 6.0; 3],
        }
    }

    /// Seven-point rule on triangles, degree 5.
    pub fn triangle_degree5() -> Self {
        let s15 = 15f64.sqrt();
        let b1 = (6.0 + s15) / 21.0;
        let a1 = 1.0 - 2.0 * b1;
        let b2 = (6.0 - s15) / 21.0;
        let a2 = 1.0 - 2.0 * b2;
        let w1 = (155.0 + s15) / 2400.0;
        let w2 = (155.0 - s15) / 2400.0;
        QuadratureRule {
            dim: 2,
            degree: 5,
            points: vec![
                [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
                [a1, b1, b1],
                [b1, a1, b1],
                [b1, b1, a1],
                [a2, b2, b2],
                [b2, a2, b2],
                [b2, b2, a2],
            ],
            weights: vec![9.0 / 80.0, w1, w1, w1, w2, w2, w2],
        }
    }

    /// Rule used for the variable-coefficient bilinear forms.
    pub fn for_forms(dim: usize) -> Self {
        if dim == 1 {
            Self::gauss_legendre_3()
        } else {
            Self::triangle_midpoints()
        }
    }

    /// Rule used for load vectors and error norms.
    pub fn for_loads(dim: usize) -> Self {
        if dim == 1 {
            Self::gauss_legendre_3()
        } else {
            Self::triangle_degree5()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    fn check_interval(rule: &QuadratureRule) {
        assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(rule.weights.iter().all(|w| *w > 0.0));
        for p in 0..=rule.degree as i32 {
            let approx: f64 = rule.points.iter().zip(&rule.weights).map(|(x, w)| w * x[1].powi(p)).sum();
            assert!((approx - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "degree {p}");
        }
        let p = rule.degree as i32 + 1;
        let approx: f64 = rule.points.iter().zip(&rule.weights).map(|(x, w)| w * x[1].powi(p)).sum();
        assert!((approx - 1.0 / (p as f64 + 1.0)).abs() > 1e-8);
    }

    fn check_triangle(rule: &QuadratureRule) {
        assert!((rule.weights.iter().sum::<f64>() - 0.5).abs() < 1e-15);
        assert!(rule.weights.iter().all(|w| *w > 0.0));
        for a in 0..=rule.degree as u32 {
            for b in 0..=(rule.degree as u32 - a) {
                let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                let approx: f64 = rule
                    .points
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x[1].powi(a as i32) * x[2].powi(b as i32))
                    .sum();
                assert!((approx - exact).abs() < 1e-15, "x^{a} y^{b}");
            }
        }
        for p in &rule.points {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn interval_rules_exact_to_degree() {
        check_interval(&QuadratureRule::gauss_legendre_2());
        check_interval(&QuadratureRule::gauss_legendre_3());
        check_interval(&QuadratureRule::gauss_legendre_5());
    }

    #[test]
    fn triangle_rules_exact_to_degree() {
        check_triangle(&QuadratureRule::triangle_midpoints());
        check_triangle(&QuadratureRule::triangle_degree5());
    }
}
