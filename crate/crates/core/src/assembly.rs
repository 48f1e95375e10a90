//! Assembly of the discrete layer-source problem
//! `(∇u_h, ∇v_h) = (b, v_h) + ∫_Γ f v_h dΓ` and Dirichlet elimination.

use alloc::vec;
use alloc::vec::Vec;

use crate::fe_space::{FeSpace, ShapeValues};
use crate::interface::InterfaceQuadrature;
use crate::math::powf;
use crate::quadrature::CellQuadrature;
use crate::sparse::CsrMatrix;
use crate::{Error, Point, Result};

/// Where a right-hand side contribution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadKind {
    Volume,
    Interface,
    DirichletLift,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadVector {
    pub kind: LoadKind,
    pub values: Vec<f64>,
}

impl LoadVector {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Element stiffness matrix `∫_K ∇φ_i·∇φ_j` of one cell. All cells of a
/// uniform mesh share it.
pub fn element_stiffness(space: &FeSpace<'_>, rule: &CellQuadrature) -> Vec<f64> {
    let dim = space.dim();
    let n = space.dofs_per_cell();
    let basis = space.basis();
    // physical gradients scale by n_c, the volume by n_c^-dim
    let scale = powf(space.mesh().cells_per_axis() as f64, 2.0 - dim as f64);
    let mut ke = vec![0.0; n * n];
    let mut shape = ShapeValues::default();
    for (xi, w) in rule.ref_points.iter().zip(&rule.weights) {
        basis.eval_into(xi, &mut shape);
        for i in 0..n {
            for j in 0..n {
                let g = crate::math::dot(&shape.grads[i], &shape.grads[j]);
                ke[i * n + j] += w * g * scale;
            }
        }
    }
    ke
}

/// Global stiffness matrix, accumulated cell by cell in ascending order.
pub fn assemble_stiffness(space: &FeSpace<'_>, rule: &CellQuadrature) -> CsrMatrix {
    let ke = element_stiffness(space, rule);
    let n = space.dofs_per_cell();
    let n_cells = space.mesh().n_cells();
    let mut triplets = Vec::with_capacity(n_cells * n * n);
    for cell in 0..n_cells {
        let dofs = space.cell_dofs(cell);
        for (i, &gi) in dofs.iter().enumerate() {
            for (j, &gj) in dofs.iter().enumerate() {
                triplets.push((gi, gj, ke[i * n + j]));
            }
        }
    }
    CsrMatrix::from_triplets(space.n_dofs(), triplets)
}

/// `∫_Γ f φ_i dΓ` through the surface quadrature, each point evaluated in
/// its owner cell.
pub fn assemble_interface_load<F: Fn(&Point) -> f64>(
    space: &FeSpace<'_>,
    quadrature: &InterfaceQuadrature,
    f: F,
) -> Result<LoadVector> {
    let mesh = space.mesh();
    let dim = space.dim();
    let mut values = vec![0.0; space.n_dofs()];
    let mut shape = ShapeValues::default();
    for (index, ((y, w), &cell)) in quadrature
        .points
        .iter()
        .zip(&quadrature.weights)
        .zip(&quadrature.owner_cell)
        .enumerate()
    {
        if cell >= mesh.n_cells() {
            return Err(Error::UnassignedQuadraturePoint { index });
        }
        let b = mesh.cell_box(cell);
        if !b.contains(y, dim, 1e-12) {
            return Err(Error::QuadraturePointOutsideCell { index, cell });
        }
        let xi = b.pull_back(y, dim);
        space.basis().eval_into(&xi, &mut shape);
        let fw = f(y) * w;
        for (&dof, v) in space.cell_dofs(cell).iter().zip(&shape.values) {
            values[dof] += fw * v;
        }
    }
    Ok(LoadVector {
        kind: LoadKind::Interface,
        values,
    })
}

/// `∫_Ω b φ_i` by the cell rule.
pub fn assemble_volume_load<B: Fn(&Point) -> f64>(
    space: &FeSpace<'_>,
    b: B,
    rule: &CellQuadrature,
) -> LoadVector {
    let mesh = space.mesh();
    let dim = space.dim();
    let vol = powf(mesh.cell_size(), dim as f64);
    let shapes: Vec<ShapeValues> = rule.ref_points.iter().map(|xi| space.basis().eval(xi)).collect();
    let mut values = vec![0.0; space.n_dofs()];
    for cell in 0..mesh.n_cells() {
        let cb = mesh.cell_box(cell);
        let dofs = space.cell_dofs(cell);
        for ((xi, w), shape) in rule.ref_points.iter().zip(&rule.weights).zip(&shapes) {
            let bw = b(&cb.map(xi, dim)) * w * vol;
            if bw == 0.0 {
                continue;
            }
            for (&dof, v) in dofs.iter().zip(&shape.values) {
                values[dof] += bw * v;
            }
        }
    }
    LoadVector {
        kind: LoadKind::Volume,
        values,
    }
}

/// Symmetric elimination of the boundary dofs with nodal data `g`: known
/// columns move to the right-hand side, boundary rows and columns become
/// identity rows and the boundary entries of the right-hand side hold `g`.
pub fn apply_dirichlet<G: Fn(&Point) -> f64>(
    a: &CsrMatrix,
    rhs: &[f64],
    space: &FeSpace<'_>,
    g: G,
) -> (CsrMatrix, Vec<f64>) {
    let n = space.n_dofs();
    let mut known = vec![0.0; n];
    for dof in 0..n {
        if space.is_boundary(dof) {
            known[dof] = g(&space.dof_point(dof));
        }
    }
    let lift = dirichlet_lift(a, space, &known);
    let mut new_rhs: Vec<f64> = rhs.iter().zip(&lift.values).map(|(r, l)| r + l).collect();
    let mut out = a.clone();
    for i in 0..n {
        let boundary_row = space.is_boundary(i);
        let (cols, vals) = out.row_mut(i);
        for (&j, v) in cols.iter().zip(vals.iter_mut()) {
            if boundary_row || space.is_boundary(j) {
                *v = if i == j { 1.0 } else { 0.0 };
            }
        }
        if boundary_row {
            new_rhs[i] = known[i];
        }
    }
    (out, new_rhs)
}

/// `-A g` restricted to interior rows, with `g` zero off the boundary.
fn dirichlet_lift(a: &CsrMatrix, space: &FeSpace<'_>, known: &[f64]) -> LoadVector {
    let n = space.n_dofs();
    let mut values = vec![0.0; n];
    for (i, v) in values.iter_mut().enumerate() {
        if space.is_boundary(i) {
            continue;
        }
        let (cols, vals) = a.row(i);
        *v = -cols
            .iter()
            .zip(vals)
            .filter(|(&j, _)| space.is_boundary(j))
            .map(|(&j, a)| a * known[j])
            .sum::<f64>();
    }
    LoadVector {
        kind: LoadKind::DirichletLift,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interface::{Interface, Sphere};
    use crate::mesh::build_uniform_mesh;
    use crate::quadrature::gauss_rule;
    use crate::solver::{cg_solve, Preconditioner};
    use core::f64::consts::PI;

    #[test]
    fn q1_element_matrix_2d() {
        // brute force: 40x40 midpoint sums of the bilinear gradients
        let grads = |x: f64, y: f64| {
            [
                [-(1.0 - y), -(1.0 - x)],
                [1.0 - y, -x],
                [-y, 1.0 - x],
                [y, x],
            ]
        };
        let m = 400;
        let mut oracle = [[0.0; 4]; 4];
        for a in 0..m {
            for b in 0..m {
                let (x, y) = ((a as f64 + 0.5) / m as f64, (b as f64 + 0.5) / m as f64);
                let g = grads(x, y);
                for i in 0..4 {
                    for j in 0..4 {
                        oracle[i][j] += (g[i][0] * g[j][0] + g[i][1] * g[j][1]) / (m * m) as f64;
                    }
                }
            }
        }
        for n in [1, 3, 7] {
            let mesh = build_uniform_mesh(2, n).unwrap();
            let space = FeSpace::new(&mesh, 1).unwrap();
            let ke = element_stiffness(&space, &gauss_rule(2, 3));
            for i in 0..4 {
                for j in 0..4 {
                    assert!((ke[i * 4 + j] - oracle[i][j]).abs() < 1e-5);
                }
            }
            assert!((ke[0] - 2.0 / 3.0).abs() < 1e-14);
            assert!((ke[1] + 1.0 / 6.0).abs() < 1e-14);
            assert!((ke[2] + 1.0 / 6.0).abs() < 1e-14);
            assert!((ke[3] + 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn stiffness_kernel_is_constants() {
        for (dim, n, degree) in [(2, 6, 1), (2, 4, 2), (3, 3, 1), (3, 2, 2)] {
            let mesh = build_uniform_mesh(dim, n).unwrap();
            let space = FeSpace::new(&mesh, degree).unwrap();
            let a = assemble_stiffness(&space, &gauss_rule(dim, degree + 2));
            assert!(a.row_sums().iter().all(|s| s.abs() < 1e-12));
            assert!(a.asymmetry() < 1e-12);
        }
    }

    #[test]
    fn volume_load_sums() {
        let mesh = build_uniform_mesh(2, 5).unwrap();
        let space = FeSpace::new(&mesh, 2).unwrap();
        let rule = gauss_rule(2, 4);
        assert!(assemble_volume_load(&space, |_| 0.0, &rule).values.iter().all(|&v| v == 0.0));
        assert!((assemble_volume_load(&space, |_| 1.0, &rule).sum() - 1.0).abs() < 1e-12);
        assert!((assemble_volume_load(&space, |x| x[0], &rule).sum() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn interface_load_partition_of_unity() {
        let s = Sphere::new(2, [0.3, 0.3, 0.0], 0.2).unwrap();
        let mesh = build_uniform_mesh(2, 16).unwrap();
        let space = FeSpace::new(&mesh, 1).unwrap();
        let q = s.immersed_quadrature(&mesh, 4).unwrap();
        let zero = assemble_interface_load(&space, &q, |_| 0.0).unwrap();
        assert!(zero.values.iter().all(|&v| v == 0.0));
        let load = assemble_interface_load(&space, &q, |_| 1.0 / 0.2).unwrap();
        assert!((load.sum() - 2.0 * PI).abs() < 1e-8);
        // support: only dofs of cells crossed by Γ
        let mut touched = vec![false; space.n_dofs()];
        for cell in q.cut_cells() {
            for &d in space.cell_dofs(cell) {
                touched[d] = true;
            }
        }
        for (d, v) in load.values.iter().enumerate() {
            if !touched[d] {
                assert_eq!(*v, 0.0);
            }
        }
    }

    #[test]
    fn dirichlet_identity_rows() {
        let mesh = build_uniform_mesh(2, 4).unwrap();
        let space = FeSpace::new(&mesh, 1).unwrap();
        let a = assemble_stiffness(&space, &gauss_rule(2, 3));
        let (a2, rhs) = apply_dirichlet(&a, &vec![0.0; space.n_dofs()], &space, |_| 0.0);
        for &b in &space.boundary_dofs() {
            let (cols, vals) = a2.row(b);
            for (&j, &v) in cols.iter().zip(vals) {
                assert_eq!(v, if j == b { 1.0 } else { 0.0 });
                assert_eq!(a2.get(j, b), if j == b { 1.0 } else { 0.0 });
            }
            assert_eq!(rhs[b], 0.0);
        }
        assert!(a2.asymmetry() == 0.0);
    }

    #[test]
    fn harmonic_linear_data_is_reproduced() {
        let g = |x: &Point| 0.3 + 2.0 * x[0] - x[1] + 0.5 * x[2];
        for (dim, degree) in [(2, 1), (2, 2), (3, 1)] {
            let mesh = build_uniform_mesh(dim, 6).unwrap();
            let space = FeSpace::new(&mesh, degree).unwrap();
            let a = assemble_stiffness(&space, &gauss_rule(dim, degree + 2));
            let (a2, rhs) = apply_dirichlet(&a, &vec![0.0; space.n_dofs()], &space, g);
            let (u, rep) = cg_solve(&a2, &rhs, 1e-13, 1000, Preconditioner::Jacobi);
            assert!(rep.converged);
            for (ui, gi) in u.iter().zip(space.interpolate(g)) {
                assert!((ui - gi).abs() < 1e-10);
            }
        }
    }
}
