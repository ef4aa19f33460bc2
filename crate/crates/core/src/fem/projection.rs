use crate::linalg::{solve, SolverHint, SparseMatrix};
use crate::Result;

use super::assembly::{assemble_a0, assemble_load, assemble_mass};
use super::coefficients::CoefficientSet;
use super::mesh::ElementGeometry;
use super::quadrature::QuadratureRule;
use super::space::FeSpace;

fn spd_hint(space: &FeSpace) -> SolverHint {
    if space.dim() == 1 {
        SolverHint::Banded
    } else {
        SolverHint::Spd
    }
}

fn solve_interior(space: &FeSpace, full_matrix: &SparseMatrix, full_rhs: &[f64]) -> Result<Vec<f64>> {
    let a = space.restrict_matrix(full_matrix);
    let rhs = space.restrict_vector(full_rhs);
    let (x, _) = solve(&a, &rhs, spd_hint(space))?;
    space.extend_vector(&x, None)
}

/// L2 projection onto the homogeneous-Dirichlet subspace: interior
/// coefficients solve `M x = (func, phi_i)`, boundary coefficients are zero.
pub fn l2_project(space: &FeSpace, func: impl Fn(&[f64]) -> f64 + Sync) -> Result<Vec<f64>> {
    let mass = assemble_mass(space);
    let load = assemble_load(space, func);
    solve_interior(space, &mass, &load)
}

/// L2 projection onto the full P1 space (no boundary constraint).
pub fn l2_project_unconstrained(space: &FeSpace, func: impl Fn(&[f64]) -> f64 + Sync) -> Result<Vec<f64>> {
    let mass = assemble_mass(space);
    let load = assemble_load(space, func);
    let (x, _) = solve(&mass, &load, spd_hint(space))?;
    Ok(x)
}

/// Ritz projection at time `t`: `a0(t; R u - u, psi) = 0` for all interior
/// `psi`, with zero boundary coefficients. The right-hand side
/// `(A grad u, grad psi)` is integrated with the degree-5 rule.
pub fn ritz_project(
    space: &FeSpace,
    grad_u: impl Fn(&[f64]) -> [f64; 2] + Sync,
    coeffs: &CoefficientSet,
    t: f64,
) -> Result<Vec<f64>> {
    let stiffness = assemble_a0(space, coeffs, t)?;
    let rhs = diffusion_load(space, &grad_u, coeffs, t);
    solve_interior(space, &stiffness, &rhs)
}

/// `(A(., t) grad u, grad phi_i)` for every node.
pub fn diffusion_load(
    space: &FeSpace,
    grad_u: &(impl Fn(&[f64]) -> [f64; 2] + Sync),
    coeffs: &CoefficientSet,
    t: f64,
) -> Vec<f64> {
    let mesh = space.mesh();
    let dim = space.dim();
    let rule = if dim == 1 {
        QuadratureRule::gauss_legendre_5()
    } else {
        QuadratureRule::triangle_degree5()
    };
    let mut out = vec![0.0; space.n_dofs()];
    for e in 0..mesh.n_cells() {
        let geo: ElementGeometry = mesh.geometry(e);
        let cell = mesh.cell(e);
        for (p, w) in rule.points.iter().zip(rule.scaled_weights(geo.measure)) {
            let x = geo.map(p);
            let xs = &x[..dim];
            let a = (coeffs.diffusion)(xs, t);
            let g = grad_u(xs);
            let ag = if dim == 1 {
                [a[0][0] * g[0], 0.0]
            } else {
                [a[0][0] * g[0] + a[0][1] * g[1], a[1][0] * g[0] + a[1][1] * g[1]]
            };
            for (k, &node) in cell.iter().enumerate() {
                out[node] += w * (ag[0] * geo.grads[k][0] + ag[1] * geo.grads[k][1]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::SpatialMesh;
    use crate::fem::norms::{error_norm, norm, NormKind};
    use std::f64::consts::PI;

    #[test]
    fn projections_reproduce_fe_functions() {
        let space = FeSpace::new(SpatialMesh::unit_square(4).unwrap());
        let mut v = vec![0.0; space.n_dofs()];
        for (k, &i) in space.interior_dofs().iter().enumerate() {
            v[i] = (k as f64 * 0.7).cos();
        }
        // (v_h, phi_i) = (M v)_i exactly, so projecting v_h must return v.
        let mass = assemble_mass(&space);
        let load = mass.matvec(&v);
        let x = solve_interior(&space, &mass, &load).unwrap();
        for (a, b) in x.iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ritz_of_p1_function_is_exact() {
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 4).unwrap());
        // Hat at x = 0.5 has gradient +-4 on the two adjacent elements.
        let grad = |x: &[f64]| {
            if x[0] > 0.25 && x[0] < 0.5 {
                [4.0, 0.0]
            } else if x[0] > 0.5 && x[0] < 0.75 {
                [-4.0, 0.0]
            } else {
                [0.0, 0.0]
            }
        };
        for t in [0.0, 1.0] {
            let coeffs = CoefficientSet::laplace(1).with_scalar_diffusion(|_, t| 2.0 + t.sin());
            let r = ritz_project(&space, grad, &coeffs, t).unwrap();
            let expected = [0.0, 0.0, 1.0, 0.0, 0.0];
            for (a, b) in r.iter().zip(expected) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn l2_projection_rate_and_stability() {
        let u = |x: &[f64]| (PI * x[0]).sin();
        let g = |x: &[f64]| [PI * (PI * x[0]).cos(), 0.0];
        let mut errors = Vec::new();
        for m in [8, 16, 32, 64] {
            let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, m).unwrap());
            let p = l2_project(&space, u).unwrap();
            errors.push(error_norm(&space, &p, &u, &g, NormKind::L2).unwrap());
            let pn = norm(&space, &p, NormKind::L2).unwrap();
            assert!(pn <= (0.5f64).sqrt() + 1e-12);
        }
        let slope = (errors[0] / errors[3]).log2() / 3.0;
        assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
    }
}
