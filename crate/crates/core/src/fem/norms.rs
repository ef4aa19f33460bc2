use crate::{Error, Result};

use super::quadrature::QuadratureRule;
use super::space::FeSpace;

/// Spatial norm selector; `H1` is the full Sobolev norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    L2,
    H1,
    Linf,
}

impl NormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormKind::L2 => "L2",
            NormKind::H1 => "H1",
            NormKind::Linf => "Linf",
        }
    }
}

/// Squared L2 norm, squared H1 seminorm, and max norm of `u_h - u`
/// accumulated element by element. `exact` may be `None` for norms of the
/// finite element function itself.
struct Accumulated {
    l2_sq: f64,
    semi_sq: f64,
    max: f64,
}

type ExactValue<'a> = &'a (dyn Fn(&[f64]) -> f64 + Sync);
type ExactGrad<'a> = &'a (dyn Fn(&[f64]) -> [f64; 2] + Sync);

fn accumulate(
    space: &FeSpace,
    v: &[f64],
    exact: Option<ExactValue<'_>>,
    grad: Option<ExactGrad<'_>>,
    rule: &QuadratureRule,
) -> Accumulated {
    let mesh = space.mesh();
    let dim = space.dim();
    let k = dim + 1;
    let mut acc = Accumulated {
        l2_sq: 0.0,
        semi_sq: 0.0,
        max: 0.0,
    };
    for e in 0..mesh.n_cells() {
        let geo = mesh.geometry(e);
        let cell = mesh.cell(e);
        let mut gh = [0.0; 2];
        for a in 0..k {
            gh[0] += v[cell[a]] * geo.grads[a][0];
            gh[1] += v[cell[a]] * geo.grads[a][1];
        }
        for (p, w) in rule.points.iter().zip(rule.scaled_weights(geo.measure)) {
            let x = geo.map(p);
            let xs = &x[..dim];
            let mut uh: f64 = (0..k).map(|a| p[a] * v[cell[a]]).sum();
            if let Some(u) = exact {
                uh -= u(xs);
            }
            let mut g = gh;
            if let Some(gu) = grad {
                let ge = gu(xs);
                g[0] -= ge[0];
                g[1] -= ge[1];
            }
            acc.l2_sq += w * uh * uh;
            acc.semi_sq += w * (g[0] * g[0] + g[1] * g[1]);
            acc.max = acc.max.max(uh.abs());
        }
    }
    for (i, vi) in v.iter().enumerate() {
        let diff = match exact {
            Some(u) => vi - u(mesh.node(i)),
            None => *vi,
        };
        acc.max = acc.max.max(diff.abs());
    }
    acc
}

fn check_len(space: &FeSpace, v: &[f64]) -> Result<()> {
    if v.len() != space.n_dofs() {
        return Err(Error::DimensionMismatch {
            expected: space.n_dofs(),
            got: v.len(),
        });
    }
    Ok(())
}

fn pick(acc: &Accumulated, kind: NormKind) -> f64 {
    match kind {
        NormKind::L2 => acc.l2_sq.sqrt(),
        NormKind::H1 => (acc.l2_sq + acc.semi_sq).sqrt(),
        NormKind::Linf => acc.max,
    }
}

/// Norm of the finite element function with coefficients `v`.
pub fn norm(space: &FeSpace, v: &[f64], kind: NormKind) -> Result<f64> {
    check_len(space, v)?;
    let acc = accumulate(space, v, None, None, &QuadratureRule::for_loads(space.dim()));
    Ok(pick(&acc, kind))
}

/// `|v|_1`, the H1 seminorm.
pub fn h1_seminorm(space: &FeSpace, v: &[f64]) -> Result<f64> {
    check_len(space, v)?;
    let acc = accumulate(space, v, None, None, &QuadratureRule::for_loads(space.dim()));
    Ok(acc.semi_sq.sqrt())
}

/// Norm of `u_h - u` by quadrature against the exact solution `u` with
/// gradient `grad` (the gradient is only used for `H1`).
pub fn error_norm(
    space: &FeSpace,
    v: &[f64],
    u: &(dyn Fn(&[f64]) -> f64 + Sync),
    grad: &(dyn Fn(&[f64]) -> [f64; 2] + Sync),
    kind: NormKind,
) -> Result<f64> {
    check_len(space, v)?;
    let rule = if space.dim() == 1 {
        QuadratureRule::gauss_legendre_5()
    } else {
        QuadratureRule::triangle_degree5()
    };
    let acc = accumulate(space, v, Some(u), Some(grad), &rule);
    Ok(pick(&acc, kind))
}

/// Exact norm of `v_a - v_b` for P1 functions on two interval meshes of the
/// same domain (not necessarily nested). The difference is linear between
/// consecutive breakpoints of the merged partition.
pub fn difference_norm_1d(space_a: &FeSpace, va: &[f64], space_b: &FeSpace, vb: &[f64], kind: NormKind) -> Result<f64> {
    if space_a.dim() != 1 || space_b.dim() != 1 {
        return Err(Error::InvalidArgument("difference_norm_1d needs interval meshes".into()));
    }
    check_len(space_a, va)?;
    check_len(space_b, vb)?;
    let mut points: Vec<f64> = (0..space_a.n_dofs())
        .map(|i| space_a.mesh().node(i)[0])
        .chain((0..space_b.n_dofs()).map(|i| space_b.mesh().node(i)[0]))
        .collect();
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
    let span = points[points.len() - 1] - points[0];
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * span);
    let diff: Vec<f64> = points
        .iter()
        .map(|&x| Ok(space_a.evaluate_1d(va, x)? - space_b.evaluate_1d(vb, x)?))
        .collect::<Result<_>>()?;
    let mut l2_sq = 0.0;
    let mut semi_sq = 0.0;
    let mut max = 0.0f64;
    for k in 0..points.len() - 1 {
        let len = points[k + 1] - points[k];
        let (d0, d1) = (diff[k], diff[k + 1]);
        l2_sq += len * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
        let slope = (d1 - d0) / len;
        semi_sq += len * slope * slope;
        max = max.max(d0.abs()).max(d1.abs());
    }
    Ok(match kind {
        NormKind::L2 => l2_sq.sqrt(),
        NormKind::H1 => (l2_sq + semi_sq).sqrt(),
        NormKind::Linf => max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::SpatialMesh;

    #[test]
    fn zero_vector_has_zero_norms() {
        let space = FeSpace::new(SpatialMesh::unit_square(3).unwrap());
        let z = vec![0.0; space.n_dofs()];
        for kind in [NormKind::L2, NormKind::H1, NormKind::Linf] {
            assert_eq!(norm(&space, &z, kind).unwrap(), 0.0);
        }
    }

    #[test]
    fn hat_function_norms() {
        let h = 0.125;
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 8).unwrap());
        let mut v = vec![0.0; 9];
        v[4] = 1.0;
        let l2 = norm(&space, &v, NormKind::L2).unwrap();
        assert!((l2 * l2 - 2.0 * h / 3.0).abs() < 1e-14);
        let semi = h1_seminorm(&space, &v).unwrap();
        assert!((semi * semi - 2.0 / h).abs() < 1e-11);
        let full = norm(&space, &v, NormKind::H1).unwrap();
        assert!((full * full - 2.0 * h / 3.0 - 2.0 / h).abs() < 1e-11);
        assert_eq!(norm(&space, &v, NormKind::Linf).unwrap(), 1.0);
    }

    #[test]
    fn error_of_exact_linear_is_zero() {
        let space = FeSpace::new(SpatialMesh::unit_square(4).unwrap());
        let u = |x: &[f64]| 2.0 * x[0] - x[1] + 0.5;
        let g = |_: &[f64]| [2.0, -1.0];
        let v = space.interpolate(u);
        for kind in [NormKind::L2, NormKind::H1, NormKind::Linf] {
            assert!(error_norm(&space, &v, &u, &g, kind).unwrap() < 1e-13);
        }
    }

    #[test]
    fn merged_difference_matches_quadrature() {
        let coarse = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 3).unwrap());
        let fine = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 7).unwrap());
        let vc = coarse.interpolate(|x| (3.0 * x[0]).sin());
        let vf = fine.interpolate(|x| (3.0 * x[0]).sin());
        // Same mesh on both sides gives zero.
        assert_eq!(difference_norm_1d(&fine, &vf, &fine, &vf, NormKind::H1).unwrap(), 0.0);
        // Against a brute-force Riemann sum of the pointwise difference.
        let n = 200_000;
        let mut l2 = 0.0;
        for k in 0..n {
            let x = (k as f64 + 0.5) / n as f64;
            let d = coarse.evaluate_1d(&vc, x).unwrap() - fine.evaluate_1d(&vf, x).unwrap();
            l2 += d * d / n as f64;
        }
        let exact = difference_norm_1d(&coarse, &vc, &fine, &vf, NormKind::L2).unwrap();
        assert!((exact - l2.sqrt()).abs() < 1e-6);
    }
}
