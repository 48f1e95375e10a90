//! Uniform box grids on the unit square/cube and their split into the cells
//! near the interface (`in`) and the rest (`out`).

use alloc::vec::Vec;

use crate::interface::Interface;
use crate::math::{floor, sqrt};
use crate::{Error, Point, Result};

/// Closed axis-aligned box `[lo, hi]`. Unused trailing axes have `lo = hi = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub lo: Point,
    pub hi: Point,
}

impl Aabb {
    pub fn new(lo: Point, hi: Point) -> Self {
        Aabb { lo, hi }
    }

    pub fn center(&self) -> Point {
        [
            0.5 * (self.lo[0] + self.hi[0]),
            0.5 * (self.lo[1] + self.hi[1]),
            0.5 * (self.lo[2] + self.hi[2]),
        ]
    }

    /// Lebesgue measure in `dim` dimensions.
    pub fn volume(&self, dim: usize) -> f64 {
        (0..dim).map(|a| self.hi[a] - self.lo[a]).product()
    }

    pub fn contains(&self, x: &Point, dim: usize, tol: f64) -> bool {
        (0..dim).all(|a| x[a] >= self.lo[a] - tol && x[a] <= self.hi[a] + tol)
    }

    /// Maps a reference point in `[0,1]^dim` into the box.
    pub fn map(&self, xi: &Point, dim: usize) -> Point {
        let mut x = [0.0; 3];
        for a in 0..dim {
            x[a] = self.lo[a] + xi[a] * (self.hi[a] - self.lo[a]);
        }
        x
    }

    /// Inverse of [`Aabb::map`].
    pub fn pull_back(&self, x: &Point, dim: usize) -> Point {
        let mut xi = [0.0; 3];
        for a in 0..dim {
            xi[a] = (x[a] - self.lo[a]) / (self.hi[a] - self.lo[a]);
        }
        xi
    }

    /// The `2^dim` children obtained by bisecting every axis, in tensor
    /// order with the first axis running fastest.
    pub fn bisect(&self, dim: usize) -> Vec<Aabb> {
        let mid = self.center();
        (0..1usize << dim)
            .map(|child| {
                let mut lo = self.lo;
                let mut hi = self.hi;
                for a in 0..dim {
                    if child >> a & 1 == 0 {
                        hi[a] = mid[a];
                    } else {
                        lo[a] = mid[a];
                    }
                }
                Aabb { lo, hi }
            })
            .collect()
    }

    /// `min |x - p|` and `max |x - p|` over the box.
    pub fn distance_range_to(&self, p: &Point, dim: usize) -> (f64, f64) {
        let mut near = 0.0;
        let mut far = 0.0;
        for a in 0..dim {
            let clamped = p[a].clamp(self.lo[a], self.hi[a]);
            let dn = p[a] - clamped;
            near += dn * dn;
            let df = (p[a] - self.lo[a]).abs().max((p[a] - self.hi[a]).abs());
            far += df * df;
        }
        (sqrt(near), sqrt(far))
    }
}

/// Uniform grid of `n_c^dim` congruent boxes of edge `1/n_c` over `[0,1]^dim`.
///
/// Vertices and cells are numbered lexicographically with the first axis
/// running fastest; each cell lists its `2^dim` vertices in the same tensor
/// order.
#[derive(Debug, Clone)]
pub struct Mesh {
    dim: usize,
    cells_per_axis: usize,
    vertices: Vec<Point>,
    cells: Vec<usize>,
}

pub fn build_uniform_mesh(dim: usize, cells_per_axis: usize) -> Result<Mesh> {
    Mesh::uniform(dim, cells_per_axis)
}

impl Mesh {
    pub fn uniform(dim: usize, cells_per_axis: usize) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if cells_per_axis == 0 {
            return Err(Error::EmptyMesh);
        }
        let n = cells_per_axis;
        let nv = n + 1;
        let nz = if dim == 3 { nv } else { 1 };
        let mut vertices = Vec::with_capacity(nv * nv * nz);
        for k in 0..nz {
            for j in 0..nv {
                for i in 0..nv {
                    let z = if dim == 3 { k as f64 / n as f64 } else { 0.0 };
                    vertices.push([i as f64 / n as f64, j as f64 / n as f64, z]);
                }
            }
        }
        let nk = if dim == 3 { n } else { 1 };
        let per_cell = 1usize << dim;
        let mut cells = Vec::with_capacity(n * n * nk * per_cell);
        for k in 0..nk {
            for j in 0..n {
                for i in 0..n {
                    for local in 0..per_cell {
                        let (di, dj, dk) = (local & 1, local >> 1 & 1, local >> 2 & 1);
                        cells.push((i + di) + nv * ((j + dj) + nv * (k + dk)));
                    }
                }
            }
        }
        Ok(Mesh {
            dim,
            cells_per_axis,
            vertices,
            cells,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    pub fn n_cells(&self) -> usize {
        self.cells_per_axis.pow(self.dim as u32)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cell_vertices(&self, cell: usize) -> &[usize] {
        let per_cell = 1usize << self.dim;
        &self.cells[cell * per_cell..(cell + 1) * per_cell]
    }

    /// Edge length `1/n_c`.
    pub fn cell_size(&self) -> f64 {
        1.0 / self.cells_per_axis as f64
    }

    /// Cell diameter `√dim / n_c`; this is the mesh size `h`.
    pub fn h(&self) -> f64 {
        sqrt(self.dim as f64) / self.cells_per_axis as f64
    }

    /// Integer grid coordinates of a cell.
    pub fn cell_index(&self, cell: usize) -> [usize; 3] {
        let n = self.cells_per_axis;
        let mut idx = [0; 3];
        let mut rest = cell;
        for slot in idx.iter_mut().take(self.dim) {
            *slot = rest % n;
            rest /= n;
        }
        idx
    }

    pub fn cell_from_index(&self, idx: &[usize; 3]) -> usize {
        let n = self.cells_per_axis;
        let mut cell = 0;
        for a in (0..self.dim).rev() {
            cell = cell * n + idx[a];
        }
        cell
    }

    pub fn cell_box(&self, cell: usize) -> Aabb {
        let n = self.cells_per_axis as f64;
        let idx = self.cell_index(cell);
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        for a in 0..self.dim {
            lo[a] = idx[a] as f64 / n;
            hi[a] = (idx[a] + 1) as f64 / n;
        }
        Aabb { lo, hi }
    }

    /// Cell containing `x`; points on shared faces go to the cell with the
    /// larger index. `None` outside the closed unit box.
    pub fn locate(&self, x: &Point) -> Option<usize> {
        let n = self.cells_per_axis;
        let mut idx = [0; 3];
        for a in 0..self.dim {
            if !(0.0..=1.0).contains(&x[a]) {
                return None;
            }
            let i = floor(x[a] * n as f64) as usize;
            idx[a] = i.min(n - 1);
        }
        Some(self.cell_from_index(&idx))
    }

    /// Uniform refinement `n_c -> 2 n_c`.
    pub fn refine(&self) -> Mesh {
        Mesh::uniform(self.dim, 2 * self.cells_per_axis).expect("refining a valid mesh")
    }
}

/// Split of the cells into the layer around the interface and the rest,
/// together with the per-cell distance bounds used to make the split.
#[derive(Debug, Clone)]
pub struct CellClassification {
    pub sigma: f64,
    /// Mesh size `h` the threshold `sigma * h` was computed with.
    pub h: f64,
    pub in_cells: Vec<usize>,
    pub out_cells: Vec<usize>,
    is_in: Vec<bool>,
    /// `d_K = min_{x ∈ K} dist(x, Γ)`.
    pub dist_min: Vec<f64>,
    /// `d̄_K = max_{x ∈ K} dist(x, Γ)`.
    pub dist_max: Vec<f64>,
}

impl CellClassification {
    pub fn is_in(&self, cell: usize) -> bool {
        self.is_in[cell]
    }

    pub fn n_cells(&self) -> usize {
        self.is_in.len()
    }
}

/// A cell is in the interface layer iff `d̄_K <= sigma * h`.
pub fn classify_cells<I: Interface + ?Sized>(
    mesh: &Mesh,
    interface: &I,
    sigma: f64,
) -> Result<CellClassification> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter("sigma must be positive"));
    }
    let h = mesh.h();
    let threshold = sigma * h;
    let n = mesh.n_cells();
    let mut dist_min = Vec::with_capacity(n);
    let mut dist_max = Vec::with_capacity(n);
    let mut is_in = Vec::with_capacity(n);
    let mut in_cells = Vec::new();
    let mut out_cells = Vec::new();
    for cell in 0..n {
        let (dmin, dmax) = interface.distance_range(&mesh.cell_box(cell));
        dist_min.push(dmin);
        dist_max.push(dmax);
        let inside = dmax <= threshold;
        is_in.push(inside);
        if inside {
            in_cells.push(cell);
        } else {
            out_cells.push(cell);
        }
    }
    Ok(CellClassification {
        sigma,
        h,
        in_cells,
        out_cells,
        is_in,
        dist_min,
        dist_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interface::Sphere;

    #[test]
    fn smallest_grids() {
        let m = build_uniform_mesh(2, 1).unwrap();
        assert_eq!(m.n_cells(), 1);
        assert_eq!(
            m.vertices(),
            &[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]]
        );
        let m = build_uniform_mesh(3, 2).unwrap();
        assert_eq!(m.n_cells(), 8);
        assert_eq!(m.n_vertices(), 27);
        let m = build_uniform_mesh(2, 4).unwrap();
        assert!((m.h() - 0.353_553_390_593_273_8).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(build_uniform_mesh(1, 4).unwrap_err(), Error::UnsupportedDimension(1));
        assert_eq!(build_uniform_mesh(4, 4).unwrap_err(), Error::UnsupportedDimension(4));
        assert_eq!(build_uniform_mesh(2, 0).unwrap_err(), Error::EmptyMesh);
    }

    #[test]
    fn vertex_coordinates_are_exact_fractions() {
        let m = build_uniform_mesh(3, 3).unwrap();
        for (v, x) in m.vertices().iter().enumerate() {
            let (i, j, k) = (v % 4, v / 4 % 4, v / 16);
            assert_eq!(*x, [i as f64 / 3.0, j as f64 / 3.0, k as f64 / 3.0]);
        }
        for cell in 0..m.n_cells() {
            let b = m.cell_box(cell);
            let verts = m.cell_vertices(cell);
            assert_eq!(m.vertices()[verts[0]], b.lo);
            assert_eq!(m.vertices()[verts[7]], b.hi);
        }
    }

    #[test]
    fn refinement_halves_h() {
        let m = build_uniform_mesh(2, 5).unwrap();
        assert_eq!(m.refine().h(), m.h() / 2.0);
    }

    #[test]
    fn locate_round_trips_cell_centers() {
        let m = build_uniform_mesh(3, 4).unwrap();
        for cell in 0..m.n_cells() {
            assert_eq!(m.locate(&m.cell_box(cell).center()), Some(cell));
        }
        assert_eq!(m.locate(&[1.0, 1.0, 1.0]), Some(m.n_cells() - 1));
        assert_eq!(m.locate(&[1.1, 0.5, 0.5]), None);
    }

    #[test]
    fn far_interface_gives_no_layer() {
        let m = build_uniform_mesh(2, 8).unwrap();
        let s = Sphere::new(2, [10.0, 10.0, 0.0], 0.2).unwrap();
        let c = classify_cells(&m, &s, 2.0).unwrap();
        assert!(c.in_cells.is_empty());
        assert_eq!(c.out_cells.len(), 64);
    }

    #[test]
    fn huge_sigma_puts_everything_in() {
        let m = build_uniform_mesh(2, 8).unwrap();
        let s = Sphere::new(2, [0.3, 0.3, 0.0], 0.2).unwrap();
        let c = classify_cells(&m, &s, 10.0 * sqrt(2.0) * 8.0).unwrap();
        assert_eq!(c.in_cells.len(), 64);
        assert!(c.out_cells.is_empty());
    }

    #[test]
    fn corner_cell_distance_bounds() {
        let m = build_uniform_mesh(2, 4).unwrap();
        let s = Sphere::new(2, [0.3, 0.3, 0.0], 0.2).unwrap();
        let c = classify_cells(&m, &s, 2.0).unwrap();
        // cell [0,0.25]^2; farthest point from Γ is the corner (0,0)
        let expected_max = sqrt(0.18) - 0.2;
        assert!((c.dist_max[0] - expected_max).abs() < 1e-15);
        assert!((c.dist_max[0] - 0.2243).abs() < 1e-4);
        // radii over the cell span [0.0707, 0.4243], so Γ crosses it
        assert_eq!(c.dist_min[0], 0.0);
        assert!(c.is_in(0));
    }

    #[test]
    fn rejects_non_positive_sigma() {
        let m = build_uniform_mesh(2, 4).unwrap();
        let s = Sphere::new(2, [0.3, 0.3, 0.0], 0.2).unwrap();
        assert!(classify_cells(&m, &s, 0.0).is_err());
    }
}
