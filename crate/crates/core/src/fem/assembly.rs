//! Global P1 matrices and load vectors over all nodes (boundary included);
//! restrict with [`FeSpace::restrict_matrix`] for the Dirichlet problem.

use rayon::prelude::*;

use crate::linalg::SparseMatrix;
use crate::{Error, Result};

use super::coefficients::CoefficientSet;
use super::mesh::ElementGeometry;
use super::quadrature::QuadratureRule;
use super::space::FeSpace;

const CHUNK: usize = 256;

/// Assembles `sum_e local(e)` where `local` returns the element matrix
/// `(test a, trial b)`. Element order is fixed, so the result is
/// deterministic regardless of the thread count.
fn assemble_matrix<F>(space: &FeSpace, local: F) -> Result<SparseMatrix>
where
    F: Fn(&ElementGeometry) -> Result<[[f64; 3]; 3]> + Sync,
{
    let mesh = space.mesh();
    let k = mesh.dim() + 1;
    let elements: Vec<usize> = (0..mesh.n_cells()).collect();
    let chunks: Vec<Result<Vec<(usize, usize, f64)>>> = elements
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut triplets = Vec::with_capacity(chunk.len() * k * k);
            for &e in chunk {
                let geo = mesh.geometry(e);
                let m = local(&geo)?;
                let cell = mesh.cell(e);
                for a in 0..k {
                    for b in 0..k {
                        triplets.push((cell[a], cell[b], m[a][b]));
                    }
                }
            }
            Ok(triplets)
        })
        .collect();
    let mut triplets = Vec::with_capacity(mesh.n_cells() * k * k);
    for c in chunks {
        triplets.extend(c?);
    }
    SparseMatrix::from_triplets(space.n_dofs(), space.n_dofs(), &triplets)
}

/// Exact P1 mass matrix, `|e| (1 + delta_ab) / ((d+1)(d+2))` per element.
pub fn assemble_mass(space: &FeSpace) -> SparseMatrix {
    let d = space.dim() as f64;
    let k = space.dim() + 1;
    assemble_matrix(space, |geo| {
        let base = geo.measure / ((d + 1.0) * (d + 2.0));
        let mut m = [[0.0; 3]; 3];
        for (a, row) in m.iter_mut().enumerate().take(k) {
            for (b, entry) in row.iter_mut().enumerate().take(k) {
                *entry = if a == b { 2.0 * base } else { base };
            }
        }
        Ok(m)
    })
    .expect("mass assembly cannot fail")
}

fn dot2(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Diffusion form `(A grad phi_j, grad phi_i)` at time `t`.
///
/// Fails with a coefficient violation if a sampled `A` is not symmetric or
/// not positive definite.
pub fn assemble_a0(space: &FeSpace, coeffs: &CoefficientSet, t: f64) -> Result<SparseMatrix> {
    let rule = QuadratureRule::for_forms(space.dim());
    let k = space.dim() + 1;
    assemble_matrix(space, |geo| {
        let mut m = [[0.0; 3]; 3];
        for (p, w) in rule.points.iter().zip(rule.scaled_weights(geo.measure)) {
            let x = geo.map(p);
            let xs = &x[..space.dim()];
            let (min_eig, asym) = coeffs.ellipticity_at(xs, t);
            if !(min_eig > 0.0) {
                return Err(Error::CoefficientViolation(format!(
                    "diffusion not positive definite at x = {xs:?}, t = {t} (smallest eigenvalue {min_eig})"
                )));
            }
            let a = (coeffs.diffusion)(xs, t);
            if asym > 1e-12 * (a[0][0].abs() + a[1][1].abs()) {
                return Err(Error::CoefficientViolation(format!(
                    "diffusion not symmetric at x = {xs:?}, t = {t}"
                )));
            }
            for b in 0..k {
                let g = geo.grads[b];
                let ag = if space.dim() == 1 {
                    [a[0][0] * g[0], 0.0]
                } else {
                    [a[0][0] * g[0] + a[0][1] * g[1], a[1][0] * g[0] + a[1][1] * g[1]]
                };
                for (aa, row) in m.iter_mut().enumerate().take(k) {
                    row[b] += w * dot2(&ag, &geo.grads[aa]);
                }
            }
        }
        Ok(m)
    })
}

/// Convection-reaction form `(b . grad phi_j + c phi_j, phi_i)` at time `t`.
pub fn assemble_a1(space: &FeSpace, coeffs: &CoefficientSet, t: f64) -> SparseMatrix {
    let rule = QuadratureRule::for_forms(space.dim());
    let k = space.dim() + 1;
    if coeffs.convection.is_none() && coeffs.reaction.is_none() {
        return SparseMatrix::zeros(space.n_dofs(), space.n_dofs());
    }
    assemble_matrix(space, |geo| {
        let mut m = [[0.0; 3]; 3];
        for (p, w) in rule.points.iter().zip(rule.scaled_weights(geo.measure)) {
            let x = geo.map(p);
            let xs = &x[..space.dim()];
            let bv = coeffs.convection_at(xs, t);
            let c = coeffs.reaction_at(xs, t);
            for b in 0..k {
                let trial = dot2(&bv, &geo.grads[b]) + c * p[b];
                for (a, row) in m.iter_mut().enumerate().take(k) {
                    row[b] += w * trial * p[a];
                }
            }
        }
        Ok(m)
    })
    .expect("convection-reaction assembly cannot fail")
}

/// `F_i = int f phi_i` with the given rule.
pub fn assemble_load_with<F>(space: &FeSpace, f: F, rule: &QuadratureRule) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mesh = space.mesh();
    let k = space.dim() + 1;
    let elements: Vec<usize> = (0..mesh.n_cells()).collect();
    let locals: Vec<Vec<(usize, f64)>> = elements
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut out = Vec::with_capacity(chunk.len() * k);
            for &e in chunk {
                let geo = mesh.geometry(e);
                let mut local = [0.0; 3];
                for (p, w) in rule.points.iter().zip(rule.scaled_weights(geo.measure)) {
                    let x = geo.map(p);
                    let fv = f(&x[..space.dim()]);
                    for a in 0..k {
                        local[a] += w * fv * p[a];
                    }
                }
                for (a, &node) in mesh.cell(e).iter().enumerate() {
                    out.push((node, local[a]));
                }
            }
            out
        })
        .collect();
    let mut load = vec![0.0; space.n_dofs()];
    for chunk in locals {
        for (i, v) in chunk {
            load[i] += v;
        }
    }
    load
}

/// `F_i = int f phi_i` with the degree-5 load rule.
pub fn assemble_load<F>(space: &FeSpace, f: F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assemble_load_with(space, f, &QuadratureRule::for_loads(space.dim()))
}

/// Load of the source term `f(., t)` of a coefficient set.
pub fn assemble_source(space: &FeSpace, coeffs: &CoefficientSet, t: f64) -> Vec<f64> {
    match &coeffs.source {
        Some(f) => assemble_load(space, |x| f(x, t)),
        None => vec![0.0; space.n_dofs()],
    }
}
