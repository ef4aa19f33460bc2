use std::io::Write;

use crate::{Error, Result};

/// Simplicial mesh of an interval (`dim = 1`) or a polygon (`dim = 2`).
///
/// Coordinates are stored flat with stride `dim`, cells flat with stride
/// `dim + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialMesh {
    dim: usize,
    coords: Vec<f64>,
    cells: Vec<usize>,
    boundary: Vec<bool>,
    lower: [f64; 2],
    upper: [f64; 2],
    resolution: usize,
}

/// Affine data of one P1 element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    /// Length or area.
    pub measure: f64,
    /// Gradients of the barycentric coordinates (unused components zero).
    pub grads: [[f64; 2]; 3],
    pub vertices: [[f64; 2]; 3],
    pub n_vertices: usize,
}

impl ElementGeometry {
    /// Physical point of barycentric coordinates `bary`.
    pub fn map(&self, bary: &[f64]) -> [f64; 2] {
        let mut x = [0.0; 2];
        for (a, b) in bary.iter().enumerate().take(self.n_vertices) {
            x[0] += b * self.vertices[a][0];
            x[1] += b * self.vertices[a][1];
        }
        x
    }

    /// Longest edge.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for a in 0..self.n_vertices {
            for b in (a + 1)..self.n_vertices {
                let dx = self.vertices[a][0] - self.vertices[b][0];
                let dy = self.vertices[a][1] - self.vertices[b][1];
                d = d.max((dx * dx + dy * dy).sqrt());
            }
        }
        d
    }
}

impl SpatialMesh {
    /// `m` equal elements on `(a, b)`.
    pub fn interval(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("interval needs a < b, got ({a}, {b})")));
        }
        if m < 2 {
            return Err(Error::InvalidArgument(format!("interval mesh needs at least 2 elements, got {m}")));
        }
        let h = (b - a) / m as f64;
        let coords: Vec<f64> = (0..=m).map(|i| if i == m { b } else { a + i as f64 * h }).collect();
        let mut cells = Vec::with_capacity(2 * m);
        for i in 0..m {
            cells.push(i);
            cells.push(i + 1);
        }
        let mut boundary = vec![false; m + 1];
        boundary[0] = true;
        boundary[m] = true;
        Ok(SpatialMesh {
            dim: 1,
            coords,
            cells,
            boundary,
            lower: [a, 0.0],
            upper: [b, 0.0],
            resolution: m,
        })
    }

    /// Structured triangulation of `(x0, x1) x (y0, y1)` with `mx * my`
    /// cells, each split along its lower-left to upper-right diagonal.
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64, mx: usize, my: usize) -> Result<Self> {
        if !(x0 < x1) || !(y0 < y1) {
            return Err(Error::InvalidArgument("rectangle needs x0 < x1 and y0 < y1".into()));
        }
        if mx < 2 || my < 2 {
            return Err(Error::InvalidArgument(format!("rectangle mesh needs at least 2 cells per side, got {mx} x {my}")));
        }
        let node = |i: usize, j: usize| j * (mx + 1) + i;
        let mut coords = Vec::with_capacity(2 * (mx + 1) * (my + 1));
        let mut boundary = Vec::with_capacity((mx + 1) * (my + 1));
        for j in 0..=my {
            let y = if j == my { y1 } else { y0 + (y1 - y0) * j as f64 / my as f64 };
            for i in 0..=mx {
                let x = if i == mx { x1 } else { x0 + (x1 - x0) * i as f64 / mx as f64 };
                coords.push(x);
                coords.push(y);
                boundary.push(i == 0 || j == 0 || i == mx || j == my);
            }
        }
        let mut cells = Vec::with_capacity(6 * mx * my);
        for j in 0..my {
            for i in 0..mx {
                let (v00, v10, v01, v11) = (node(i, j), node(i + 1, j), node(i, j + 1), node(i + 1, j + 1));
                cells.extend_from_slice(&[v00, v10, v11]);
                cells.extend_from_slice(&[v00, v11, v01]);
            }
        }
        Ok(SpatialMesh {
            dim: 2,
            coords,
            cells,
            boundary,
            lower: [x0, y0],
            upper: [x1, y1],
            resolution: mx.max(my),
        })
    }

    /// `(0,1)^2` with `m` cells per side: `(m+1)^2` nodes, `2 m^2` triangles.
    pub fn unit_square(m: usize) -> Result<Self> {
        Self::rectangle(0.0, 1.0, 0.0, 1.0, m, m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_nodes(&self) -> usize {
        self.boundary.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len() / (self.dim + 1)
    }

    /// Cells per side of the structured mesh.
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn cell(&self, e: usize) -> &[usize] {
        let k = self.dim + 1;
        &self.cells[e * k..(e + 1) * k]
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    /// Axis-aligned bounding box `(lower, upper)`; unused components zero.
    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        (self.lower, self.upper)
    }

    /// Measure of the domain.
    pub fn domain_measure(&self) -> f64 {
        (0..self.n_cells()).map(|e| self.geometry(e).measure).sum()
    }

    pub fn geometry(&self, e: usize) -> ElementGeometry {
        let cell = self.cell(e);
        let mut vertices = [[0.0; 2]; 3];
        for (a, &v) in cell.iter().enumerate() {
            let p = self.node(v);
            vertices[a][0] = p[0];
            if self.dim == 2 {
                vertices[a][1] = p[1];
            }
        }
        let mut grads = [[0.0; 2]; 3];
        let measure;
        if self.dim == 1 {
            let len = vertices[1][0] - vertices[0][0];
            measure = len.abs();
            grads[0][0] = -1.0 / len;
            grads[1][0] = 1.0 / len;
        } else {
            let (j00, j01) = (vertices[1][0] - vertices[0][0], vertices[2][0] - vertices[0][0]);
            let (j10, j11) = (vertices[1][1] - vertices[0][1], vertices[2][1] - vertices[0][1]);
            let det = j00 * j11 - j01 * j10;
            measure = det.abs() / 2.0;
            // Rows of J^{-1} are the gradients of lambda_1, lambda_2.
            grads[1] = [j11 / det, -j01 / det];
            grads[2] = [-j10 / det, j00 / det];
            grads[0] = [-grads[1][0] - grads[2][0], -grads[1][1] - grads[2][1]];
        }
        ElementGeometry {
            measure,
            grads,
            vertices,
            n_vertices: self.dim + 1,
        }
    }

    /// Largest element diameter.
    pub fn mesh_size(&self) -> f64 {
        (0..self.n_cells()).map(|e| self.geometry(e).diameter()).fold(0.0, f64::max)
    }

    /// Plain-text node and element tables.
    pub fn write_text<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "# nodes {} dim {}", self.n_nodes(), self.dim)?;
        for i in 0..self.n_nodes() {
            let coords: Vec<String> = self.node(i).iter().map(|c| format!("{c:.16e}")).collect();
            writeln!(out, "{i} {} {}", coords.join(" "), u8::from(self.boundary[i]))?;
        }
        writeln!(out, "# elements {}", self.n_cells())?;
        for e in 0..self.n_cells() {
            let ids: Vec<String> = self.cell(e).iter().map(|v| v.to_string()).collect();
            writeln!(out, "{e} {}", ids.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_basics() {
        let m = SpatialMesh::interval(0.0, 1.0, 4).unwrap();
        let xs: Vec<f64> = (0..5).map(|i| m.node(i)[0]).collect();
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(m.mesh_size(), 0.25);
        assert!(m.is_boundary(0) && m.is_boundary(4) && !m.is_boundary(2));
        let wide = SpatialMesh::interval(-1.5, 1.5, 3).unwrap();
        assert!((wide.mesh_size() - 1.0).abs() < 1e-15);
        assert!((wide.domain_measure() - 3.0).abs() < 1e-15);
        assert!(SpatialMesh::interval(1.0, 0.0, 4).is_err());
        assert!(SpatialMesh::interval(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn unit_square_counts() {
        let m = SpatialMesh::unit_square(2).unwrap();
        assert_eq!(m.n_nodes(), 9);
        assert_eq!(m.n_cells(), 8);
        assert_eq!(m.boundary_flags().iter().filter(|b| **b).count(), 8);
        assert!((m.domain_measure() - 1.0).abs() < 1e-15);
        for e in 0..m.n_cells() {
            let g = m.geometry(e);
            assert!((g.measure - 1.0 / 8.0).abs() < 1e-15);
        }
        assert!(SpatialMesh::unit_square(1).is_err());
    }

    #[test]
    fn barycentric_gradients_sum_to_zero() {
        let m = SpatialMesh::unit_square(3).unwrap();
        for e in 0..m.n_cells() {
            let g = m.geometry(e);
            let sx: f64 = g.grads.iter().map(|v| v[0]).sum();
            let sy: f64 = g.grads.iter().map(|v| v[1]).sum();
            assert!(sx.abs() < 1e-12 && sy.abs() < 1e-12);
            // grad lambda_a . (v_b - v_0) = delta_ab - delta_a0
            for a in 0..3 {
                for b in 1..3 {
                    let d = [g.vertices[b][0] - g.vertices[0][0], g.vertices[b][1] - g.vertices[0][1]];
                    let val = g.grads[a][0] * d[0] + g.grads[a][1] * d[1];
                    let expected = if a == b { 1.0 } else if a == 0 { -1.0 } else { 0.0 };
                    assert!((val - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn text_export() {
        let m = SpatialMesh::interval(0.0, 1.0, 2).unwrap();
        let mut buf = Vec::new();
        m.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# nodes 3 dim 1"));
        assert!(text.contains("# elements 2"));
    }
}
