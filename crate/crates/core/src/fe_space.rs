//! Continuous tensor-product Lagrange spaces `Q^ℓ` on uniform box meshes.

use alloc::vec;
use alloc::vec::Vec;

use crate::mesh::{CellClassification, Mesh};
use crate::{Error, Point, Result};

/// Highest polynomial degree accepted by [`FeSpace::new`].
pub const MAX_DEGREE: usize = 4;

/// Reference `Q^ℓ` basis on `[0,1]^dim` with equispaced nodes. Local basis
/// functions are numbered in tensor order, first axis fastest.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    dim: usize,
    degree: usize,
    nodes: Vec<f64>,
}

/// Basis values and reference gradients at one point.
#[derive(Debug, Clone, Default)]
pub struct ShapeValues {
    pub values: Vec<f64>,
    pub grads: Vec<Point>,
}

impl LagrangeBasis {
    pub fn new(dim: usize, degree: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(degree));
        }
        let nodes = (0..=degree).map(|a| a as f64 / degree as f64).collect();
        Ok(LagrangeBasis { dim, degree, nodes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_local(&self) -> usize {
        (self.degree + 1).pow(self.dim as u32)
    }

    /// Reference coordinates of local node `l`.
    pub fn node(&self, l: usize) -> Point {
        let n1 = self.degree + 1;
        let mut p = [0.0; 3];
        let mut rest = l;
        for slot in p.iter_mut().take(self.dim) {
            *slot = self.nodes[rest % n1];
            rest /= n1;
        }
        p
    }

    fn eval_1d(&self, t: f64, values: &mut [f64], derivs: &mut [f64]) {
        let nodes = &self.nodes;
        for a in 0..nodes.len() {
            let mut v = 1.0;
            let mut d = 0.0;
            for m in 0..nodes.len() {
                if m == a {
                    continue;
                }
                let scale = 1.0 / (nodes[a] - nodes[m]);
                // product rule, accumulated one factor at a time
                d = d * (t - nodes[m]) * scale + v * scale;
                v *= (t - nodes[m]) * scale;
            }
            values[a] = v;
            derivs[a] = d;
        }
    }

    pub fn eval_into(&self, xi: &Point, out: &mut ShapeValues) {
        let n1 = self.degree + 1;
        let mut v1 = [[0.0; MAX_DEGREE + 1]; 3];
        let mut d1 = [[0.0; MAX_DEGREE + 1]; 3];
        for a in 0..self.dim {
            self.eval_1d(xi[a], &mut v1[a][..n1], &mut d1[a][..n1]);
        }
        let n = self.n_local();
        out.values.resize(n, 0.0);
        out.grads.resize(n, [0.0; 3]);
        for l in 0..n {
            let idx = [l % n1, l / n1 % n1, l / (n1 * n1) % n1];
            let mut value = 1.0;
            let mut grad = [1.0, 1.0, 1.0];
            for a in 0..self.dim {
                value *= v1[a][idx[a]];
                for (b, g) in grad.iter_mut().enumerate().take(self.dim) {
                    *g *= if a == b { d1[a][idx[a]] } else { v1[a][idx[a]] };
                }
            }
            for g in grad.iter_mut().skip(self.dim) {
                *g = 0.0;
            }
            out.values[l] = value;
            out.grads[l] = grad;
        }
    }

    pub fn eval(&self, xi: &Point) -> ShapeValues {
        let mut out = ShapeValues::default();
        self.eval_into(xi, &mut out);
        out
    }
}

/// Values and reference gradients of all `Q^ℓ` shape functions at `ref_point`.
pub fn shape_eval(dim: usize, degree: usize, ref_point: &Point) -> Result<(Vec<f64>, Vec<Point>)> {
    let ShapeValues { values, grads } = LagrangeBasis::new(dim, degree)?.eval(ref_point);
    Ok((values, grads))
}

/// Continuous piecewise `Q^ℓ` functions on a uniform mesh, with nodal
/// degrees of freedom on the lattice of spacing `1 / (ℓ n_c)`.
#[derive(Debug, Clone)]
pub struct FeSpace<'m> {
    mesh: &'m Mesh,
    basis: LagrangeBasis,
    dofs_per_axis: usize,
    cell_dofs: Vec<usize>,
    boundary: Vec<bool>,
}

impl<'m> FeSpace<'m> {
    pub fn new(mesh: &'m Mesh, degree: usize) -> Result<Self> {
        let dim = mesh.dim();
        let basis = LagrangeBasis::new(dim, degree)?;
        let n = mesh.cells_per_axis();
        let per_axis = degree * n + 1;
        let n_dofs = per_axis.pow(dim as u32);
        let n_local = basis.n_local();
        let n1 = degree + 1;

        let mut cell_dofs = Vec::with_capacity(mesh.n_cells() * n_local);
        for cell in 0..mesh.n_cells() {
            let c = mesh.cell_index(cell);
            for l in 0..n_local {
                let local = [l % n1, l / n1 % n1, l / (n1 * n1) % n1];
                let mut dof = 0;
                for a in (0..dim).rev() {
                    dof = dof * per_axis + degree * c[a] + local[a];
                }
                cell_dofs.push(dof);
            }
        }

        let boundary = (0..n_dofs)
            .map(|dof| {
                let mut rest = dof;
                (0..dim).any(|_| {
                    let i = rest % per_axis;
                    rest /= per_axis;
                    i == 0 || i == per_axis - 1
                })
            })
            .collect();

        Ok(FeSpace {
            mesh,
            basis,
            dofs_per_axis: per_axis,
            cell_dofs,
            boundary,
        })
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn basis(&self) -> &LagrangeBasis {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.basis.degree
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn n_dofs(&self) -> usize {
        self.boundary.len()
    }

    pub fn dofs_per_cell(&self) -> usize {
        self.basis.n_local()
    }

    pub fn cell_dofs(&self, cell: usize) -> &[usize] {
        let n = self.basis.n_local();
        &self.cell_dofs[cell * n..(cell + 1) * n]
    }

    pub fn dof_point(&self, dof: usize) -> Point {
        let spacing = (self.dofs_per_axis - 1) as f64;
        let mut p = [0.0; 3];
        let mut rest = dof;
        for slot in p.iter_mut().take(self.dim()) {
            *slot = (rest % self.dofs_per_axis) as f64 / spacing;
            rest /= self.dofs_per_axis;
        }
        p
    }

    pub fn is_boundary(&self, dof: usize) -> bool {
        self.boundary[dof]
    }

    pub fn boundary_dofs(&self) -> Vec<usize> {
        (0..self.n_dofs()).filter(|&d| self.boundary[d]).collect()
    }

    /// Nodal interpolant: `g` sampled at every dof.
    pub fn interpolate<G: Fn(&Point) -> f64>(&self, g: G) -> Vec<f64> {
        (0..self.n_dofs()).map(|d| g(&self.dof_point(d))).collect()
    }

    /// Modified interpolant: nodal values are kept at dofs that belong to at
    /// least one cell outside the interface layer, all other dofs are zero.
    pub fn pi_h<G: Fn(&Point) -> f64>(&self, classification: &CellClassification, g: G) -> Vec<f64> {
        let mut keep = vec![false; self.n_dofs()];
        for &cell in &classification.out_cells {
            for &dof in self.cell_dofs(cell) {
                keep[dof] = true;
            }
        }
        keep.iter()
            .enumerate()
            .map(|(dof, &k)| if k { g(&self.dof_point(dof)) } else { 0.0 })
            .collect()
    }

    /// Value and physical gradient of the FE function `coeffs` on `cell`,
    /// given shape values at some reference point of that cell.
    pub fn eval_with(&self, shape: &ShapeValues, coeffs: &[f64], cell: usize) -> (f64, Point) {
        let inv = self.mesh.cells_per_axis() as f64;
        let mut value = 0.0;
        let mut grad = [0.0; 3];
        for ((&dof, v), g) in self.cell_dofs(cell).iter().zip(&shape.values).zip(&shape.grads) {
            let c = coeffs[dof];
            value += c * v;
            for a in 0..3 {
                grad[a] += c * g[a];
            }
        }
        for g in &mut grad {
            *g *= inv;
        }
        (value, grad)
    }

    /// Point evaluation; `None` outside the closed unit box.
    pub fn evaluate(&self, coeffs: &[f64], x: &Point) -> Option<(f64, Point)> {
        let cell = self.mesh.locate(x)?;
        let xi = self.mesh.cell_box(cell).pull_back(x, self.dim());
        let shape = self.basis.eval(&xi);
        Some(self.eval_with(&shape, coeffs, cell))
    }
}
