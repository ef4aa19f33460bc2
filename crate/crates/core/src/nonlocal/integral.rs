use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::fem::{FeSpace, QuadratureRule};
use crate::linalg::DenseMatrix;

/// Kernel `g(x, y)` of `I u(x) = int_Omega u(y) g(x, y) dy`, with an upper
/// bound for `sup |g|`.
#[derive(Clone)]
pub struct IntegralKernel {
    g: Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>,
    sup_bound: f64,
}

impl fmt::Debug for IntegralKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegralKernel").field("sup_bound", &self.sup_bound).finish()
    }
}

impl IntegralKernel {
    pub fn new(g: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static, sup_bound: f64) -> Self {
        IntegralKernel {
            g: Arc::new(g),
            sup_bound,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_, _| c, c.abs())
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.g)(x, y)
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    /// `beta_2 = sup|g| |Omega|`, bounding the operator norm on L2.
    pub fn beta2(&self, domain_measure: f64) -> f64 {
        self.sup_bound * domain_measure
    }
}

struct QuadPoint {
    x: [f64; 2],
    weight: f64,
    nodes: [usize; 3],
    bary: [f64; 3],
}

fn quadrature_points(space: &FeSpace, rule: &QuadratureRule) -> Vec<QuadPoint> {
    let mesh = space.mesh();
    let k = space.dim() + 1;
    let mut points = Vec::with_capacity(mesh.n_cells() * rule.len());
    for e in 0..mesh.n_cells() {
        let geo = mesh.geometry(e);
        let mut nodes = [0usize; 3];
        nodes[..k].copy_from_slice(mesh.cell(e));
        for (p, w) in rule.points.iter().zip(rule.scaled_weights(geo.measure)) {
            points.push(QuadPoint {
                x: geo.map(p),
                weight: w,
                nodes,
                bary: *p,
            });
        }
    }
    points
}

const BLOCK: usize = 512;

/// Dense Galerkin matrix `G_ij = int int phi_j(y) g(x, y) phi_i(x) dy dx`
/// over all nodes, by tensorised element quadrature (the form rule in each
/// variable). Rows of a block of `x` points are computed in parallel and
/// reduced in a fixed order.
pub fn assemble_integral_matrix(space: &FeSpace, kernel: &IntegralKernel) -> DenseMatrix {
    let rule = QuadratureRule::for_forms(space.dim());
    let points = quadrature_points(space, &rule);
    let n = space.n_dofs();
    let dim = space.dim();
    let k = dim + 1;
    let mut g = DenseMatrix::zeros(n, n);
    for block in points.chunks(BLOCK) {
        // h[p][j] = int g(x_p, y) phi_j(y) dy
        let h: Vec<Vec<f64>> = block
            .par_iter()
            .map(|px| {
                let mut row = vec![0.0; n];
                for qy in &points {
                    let val = kernel.eval(&px.x[..dim], &qy.x[..dim]) * qy.weight;
                    for b in 0..k {
                        row[qy.nodes[b]] += val * qy.bary[b];
                    }
                }
                row
            })
            .collect();
        for (px, hrow) in block.iter().zip(&h) {
            for a in 0..k {
                let scale = px.weight * px.bary[a];
                let target = g.row_mut(px.nodes[a]);
                for (t, v) in target.iter_mut().zip(hrow) {
                    *t += scale * v;
                }
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble_load, SpatialMesh};
    use std::f64::consts::PI;

    #[test]
    fn constant_kernel_is_rank_one() {
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 6).unwrap());
        let g = assemble_integral_matrix(&space, &IntegralKernel::constant(1.0));
        let m = assemble_load(&space, |_| 1.0);
        for i in 0..space.n_dofs() {
            for j in 0..space.n_dofs() {
                assert!((g.get(i, j) - m[i] * m[j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_kernel_gives_zero() {
        let space = FeSpace::new(SpatialMesh::unit_square(3).unwrap());
        let g = assemble_integral_matrix(&space, &IntegralKernel::zero());
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn linear_kernel_on_sine_product() {
        // int sin(pi y1) sin(pi y2) (x1 + x2) dy = 4 (x1 + x2) / pi^2
        let mut errs = Vec::new();
        for m in [4, 8, 16] {
            let space = FeSpace::new(SpatialMesh::unit_square(m).unwrap());
            let g = assemble_integral_matrix(&space, &IntegralKernel::new(|x, _| x[0] + x[1], 2.0));
            let u = space.interpolate(|y| (PI * y[0]).sin() * (PI * y[1]).sin());
            let gu = g.matvec(&u);
            let reference = assemble_load(&space, |x| 4.0 * (x[0] + x[1]) / (PI * PI));
            let err = gu.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let scale = reference.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            errs.push(err / scale);
        }
        assert!(errs[2] < 2e-2, "{errs:?}");
        assert!(errs[0] / errs[2] > 10.0, "{errs:?}");
    }
}
