use crate::linalg::SparseMatrix;
use crate::{Error, Result};

use super::mesh::SpatialMesh;

/// Continuous P1 space over a mesh. Global dofs are the mesh nodes; the
/// interior dofs span the homogeneous-Dirichlet subspace.
#[derive(Debug, Clone)]
pub struct FeSpace {
    mesh: SpatialMesh,
    interior: Vec<usize>,
    boundary: Vec<usize>,
    interior_index: Vec<Option<usize>>,
    h: f64,
}

impl FeSpace {
    pub fn new(mesh: SpatialMesh) -> Self {
        let mut interior = Vec::new();
        let mut boundary = Vec::new();
        let mut interior_index = vec![None; mesh.n_nodes()];
        for i in 0..mesh.n_nodes() {
            if mesh.is_boundary(i) {
                boundary.push(i);
            } else {
                interior_index[i] = Some(interior.len());
                interior.push(i);
            }
        }
        let h = mesh.mesh_size();
        FeSpace {
            mesh,
            interior,
            boundary,
            interior_index,
            h,
        }
    }

    pub fn mesh(&self) -> &SpatialMesh {
        &self.mesh
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn n_dofs(&self) -> usize {
        self.mesh.n_nodes()
    }

    pub fn interior_dofs(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary_dofs(&self) -> &[usize] {
        &self.boundary
    }

    pub fn interior_index(&self, global: usize) -> Option<usize> {
        self.interior_index[global]
    }

    /// Largest element diameter.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Interior-interior block of a global matrix.
    pub fn restrict_matrix(&self, m: &SparseMatrix) -> SparseMatrix {
        m.submatrix(&self.interior, &self.interior)
    }

    /// Interior-boundary block of a global matrix.
    pub fn coupling_matrix(&self, m: &SparseMatrix) -> SparseMatrix {
        m.submatrix(&self.interior, &self.boundary)
    }

    pub fn restrict_vector(&self, v: &[f64]) -> Vec<f64> {
        self.interior.iter().map(|&i| v[i]).collect()
    }

    /// Global vector with the given interior values and boundary values
    /// taken from `boundary_values` (indexed globally) or zero.
    pub fn extend_vector(&self, interior: &[f64], boundary_values: Option<&[f64]>) -> Result<Vec<f64>> {
        if interior.len() != self.interior.len() {
            return Err(Error::DimensionMismatch {
                expected: self.interior.len(),
                got: interior.len(),
            });
        }
        let mut out = match boundary_values {
            Some(b) if b.len() == self.n_dofs() => {
                let mut v = vec![0.0; self.n_dofs()];
                for &i in &self.boundary {
                    v[i] = b[i];
                }
                v
            }
            Some(b) => {
                return Err(Error::DimensionMismatch {
                    expected: self.n_dofs(),
                    got: b.len(),
                })
            }
            None => vec![0.0; self.n_dofs()],
        };
        for (k, &i) in self.interior.iter().enumerate() {
            out[i] = interior[k];
        }
        Ok(out)
    }

    /// Nodal values of `func` at time `t`.
    pub fn interpolate(&self, func: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        (0..self.n_dofs()).map(|i| func(self.mesh.node(i))).collect()
    }

    /// Value at `x` of the 1D P1 function with coefficients `v`.
    pub fn evaluate_1d(&self, v: &[f64], x: f64) -> Result<f64> {
        if self.dim() != 1 {
            return Err(Error::InvalidArgument("evaluate_1d needs a one-dimensional space".into()));
        }
        let n = self.n_dofs();
        let first = self.mesh.node(0)[0];
        let last = self.mesh.node(n - 1)[0];
        if x < first - 1e-14 * (last - first) || x > last + 1e-14 * (last - first) {
            return Err(Error::Domain(format!("point {x} outside [{first}, {last}]")));
        }
        // Nodes of interval meshes are sorted.
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.mesh.node(mid)[0] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (x0, x1) = (self.mesh.node(lo)[0], self.mesh.node(hi)[0]);
        let s = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        Ok(v[lo] * (1.0 - s) + v[hi] * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_and_boundary_partition() {
        let space = FeSpace::new(SpatialMesh::unit_square(3).unwrap());
        assert_eq!(space.n_dofs(), 16);
        assert_eq!(space.interior_dofs().len(), 4);
        assert_eq!(space.boundary_dofs().len(), 12);
        for &i in space.interior_dofs() {
            assert!(!space.mesh().is_boundary(i));
        }
        assert!(space.h() > 0.0);
    }

    #[test]
    fn extend_roundtrip() {
        let space = FeSpace::new(SpatialMesh::interval(0.0, 1.0, 4).unwrap());
        let full = vec![9.0, 1.0, 2.0, 3.0, 7.0];
        let inner = space.restrict_vector(&full);
        assert_eq!(inner, vec![1.0, 2.0, 3.0]);
        assert_eq!(space.extend_vector(&inner, Some(&full)).unwrap(), full);
        assert_eq!(space.extend_vector(&inner, None).unwrap(), vec![0.0, 1.0, 2.0, 3.0, 0.0]);
    }

    #[test]
    fn evaluate_piecewise_linear() {
        let space = FeSpace::new(SpatialMesh::interval(-1.0, 1.0, 4).unwrap());
        let v = space.interpolate(|x| 3.0 * x[0] + 1.0);
        for &x in &[-1.0, -0.7, 0.0, 0.31, 1.0] {
            assert!((space.evaluate_1d(&v, x).unwrap() - (3.0 * x + 1.0)).abs() < 1e-14);
        }
        assert!(space.evaluate_1d(&v, 1.5).is_err());
    }
}
