//! Structured quadrilateral meshes.
//!
//! Vertex (i, j) for 0 ≤ i ≤ ni, 0 ≤ j ≤ nj; cell (i, j) is bounded by
//! vertices (i, j), (i+1, j), (i+1, j+1), (i, j+1), listed counter-clockwise.
//! The i-face at line i runs from vertex (i, j) to (i, j+1) and separates
//! cells (i−1, j) and (i, j); the j-face at line j runs from (i+1, j) to
//! (i, j) and separates cells (i, j−1) and (i, j). Both normals point
//! towards increasing index.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::flux::{face_geometry, FaceGeometry};

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2D<T> {
    pub ni: usize,
    pub nj: usize,
    vertices: Vec<(T, T)>,
    areas: Vec<T>,
    centers: Vec<(T, T)>,
    i_faces: Vec<FaceGeometry<T>>,
    j_faces: Vec<FaceGeometry<T>>,
}

impl<T: Real> Mesh2D<T> {
    /// Builds the mesh from a vertex function, rejecting folded or
    /// degenerate cells.
    pub fn from_vertices(ni: usize, nj: usize, vertex: impl Fn(usize, usize) -> (T, T)) -> Result<Self> {
        if ni == 0 || nj == 0 {
            return Err(Error::Config(format!("mesh needs at least one cell per direction, got {ni}x{nj}")));
        }
        let vertices: Vec<(T, T)> = (0..=nj).flat_map(|j| (0..=ni).map(move |i| (i, j))).map(|(i, j)| vertex(i, j)).collect();
        let v = |i: usize, j: usize| vertices[i + j * (ni + 1)];
        let mut areas = Vec::with_capacity(ni * nj);
        let mut centers = Vec::with_capacity(ni * nj);
        for j in 0..nj {
            for i in 0..ni {
                let (a, b, c, d) = (v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1));
                let area = T::half() * ((c.0 - a.0) * (d.1 - b.1) - (d.0 - b.0) * (c.1 - a.1));
                if !(area > T::zero()) {
                    return Err(Error::InvalidCell { i, j, area: area.f64() });
                }
                areas.push(area);
                let quarter = T::c(0.25);
                centers.push(((a.0 + b.0 + c.0 + d.0) * quarter, (a.1 + b.1 + c.1 + d.1) * quarter));
            }
        }
        let mut i_faces = Vec::with_capacity((ni + 1) * nj);
        for j in 0..nj {
            for i in 0..=ni {
                i_faces.push(face_geometry(v(i, j), v(i, j + 1))?);
            }
        }
        let mut j_faces = Vec::with_capacity(ni * (nj + 1));
        for j in 0..=nj {
            for i in 0..ni {
                j_faces.push(face_geometry(v(i + 1, j), v(i, j))?);
            }
        }
        Ok(Self { ni, nj, vertices, areas, centers, i_faces, j_faces })
    }

    /// Uniform Cartesian mesh of [x0, x1] × [y0, y1].
    pub fn rectangle(x0: T, x1: T, y0: T, y1: T, ni: usize, nj: usize) -> Result<Self> {
        let (fi, fj) = (T::c(ni as f64), T::c(nj as f64));
        Self::from_vertices(ni, nj, |i, j| (x0 + (x1 - x0) * T::c(i as f64) / fi, y0 + (y1 - y0) * T::c(j as f64) / fj))
    }

    /// Columns of uniform x; each column is split uniformly between
    /// `bottom(x)` and `top`.
    pub fn sheared(x0: T, x1: T, top: T, bottom: impl Fn(T) -> T, ni: usize, nj: usize) -> Result<Self> {
        let (fi, fj) = (T::c(ni as f64), T::c(nj as f64));
        Self::from_vertices(ni, nj, |i, j| {
            let x = x0 + (x1 - x0) * T::c(i as f64) / fi;
            let yb = bottom(x);
            (x, yb + (top - yb) * T::c(j as f64) / fj)
        })
    }

    /// Left half of a cylinder of radius `radius` centred at the origin.
    /// i runs from the wall (i = 0) to the far-field ellipse with semi-axes
    /// (`ax`, `ay`); j runs with θ from π/2 to 3π/2.
    pub fn half_cylinder(radius: T, ax: T, ay: T, ni: usize, nj: usize) -> Result<Self> {
        let (fi, fj) = (T::c(ni as f64), T::c(nj as f64));
        Self::from_vertices(ni, nj, |i, j| {
            let theta = T::FRAC_PI_2() + T::PI() * T::c(j as f64) / fj;
            let (s, c) = theta.sin_cos();
            let t = T::c(i as f64) / fi;
            let (xw, yw) = (radius * c, radius * s);
            let (xf, yf) = (ax * c, ay * s);
            (xw + (xf - xw) * t, yw + (yf - yw) * t)
        })
    }

    /// The same mesh rotated by `angle` about the origin.
    pub fn rotated(&self, angle: T) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        Self::from_vertices(self.ni, self.nj, |i, j| {
            let (x, y) = self.vertex(i, j);
            (c * x - s * y, s * x + c * y)
        })
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.ni * self.nj
    }

    #[inline]
    pub fn cell_index(&self, i: usize, j: usize) -> usize {
        i + j * self.ni
    }

    pub fn vertex(&self, i: usize, j: usize) -> (T, T) {
        self.vertices[i + j * (self.ni + 1)]
    }

    pub fn area(&self, i: usize, j: usize) -> T {
        self.areas[self.cell_index(i, j)]
    }

    pub fn areas(&self) -> &[T] {
        &self.areas
    }

    /// Vertex average of cell (i, j).
    pub fn center(&self, i: usize, j: usize) -> (T, T) {
        self.centers[self.cell_index(i, j)]
    }

    pub fn centers(&self) -> &[(T, T)] {
        &self.centers
    }

    /// Face on line i between cells (i−1, j) and (i, j), 0 ≤ i ≤ ni.
    #[inline]
    pub fn i_face(&self, i: usize, j: usize) -> &FaceGeometry<T> {
        &self.i_faces[i + j * (self.ni + 1)]
    }

    /// Face on line j between cells (i, j−1) and (i, j), 0 ≤ j ≤ nj.
    #[inline]
    pub fn j_face(&self, i: usize, j: usize) -> &FaceGeometry<T> {
        &self.j_faces[i + j * self.ni]
    }

    /// Σ n·ds over the four faces of cell (i, j), outward.
    pub fn closure(&self, i: usize, j: usize) -> (T, T) {
        let (w, e, s, n) = (self.i_face(i, j), self.i_face(i + 1, j), self.j_face(i, j), self.j_face(i, j + 1));
        (e.nx * e.ds - w.nx * w.ds + n.nx * n.ds - s.nx * s.ds, e.ny * e.ds - w.ny * w.ds + n.ny * n.ds - s.ny * s.ds)
    }
}
