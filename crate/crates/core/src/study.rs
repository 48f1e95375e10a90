//! Convergence studies of the model problems over a sequence of uniformly
//! refined grids.

use alloc::vec::Vec;

use crate::assembly::{apply_dirichlet, assemble_interface_load, assemble_stiffness, assemble_volume_load};
use crate::fe_space::{FeSpace, MAX_DEGREE};
use crate::interface::{Interface, DEFAULT_SURFACE_ORDER};
use crate::math::sqrt;
use crate::mesh::{classify_cells, Mesh};
use crate::norms::{eoc, weighted_errors, ErrorQuadrature, DEFAULT_ALPHAS};
use crate::problem::{ExactSolution, ModelProblem};
use crate::quadrature::gauss_rule;
use crate::solver::{cg_solve, Preconditioner, SolveReport, DEFAULT_TOLERANCE};
use crate::{Error, Point, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub dim: usize,
    /// Coarsest grid has `2^min_exp` cells per axis.
    pub min_exp: u32,
    /// Finest grid has `2^max_exp` cells per axis.
    pub max_exp: u32,
    pub alphas: Vec<f64>,
    pub degree: usize,
    /// Layer threshold factor; `None` means `√dim`.
    pub sigma: Option<f64>,
    pub cg_tol: f64,
    /// Error quadrature points per axis; `None` means `degree + 3`.
    pub quad_points: Option<usize>,
    /// Bisection depth on cut cells; `None` means 6 in 2D, 4 in 3D.
    pub cut_depth: Option<usize>,
    pub surface_order: usize,
    pub center: Point,
    pub radius: f64,
}

impl StudyConfig {
    /// Circle of radius 0.2 about (0.3, 0.3), `n_c = 8 … 256`, `Q1`.
    pub fn default_2d() -> Self {
        StudyConfig {
            dim: 2,
            min_exp: 3,
            max_exp: 8,
            alphas: DEFAULT_ALPHAS.to_vec(),
            degree: 1,
            sigma: None,
            cg_tol: DEFAULT_TOLERANCE,
            quad_points: None,
            cut_depth: None,
            surface_order: DEFAULT_SURFACE_ORDER,
            center: [0.3, 0.3, 0.0],
            radius: 0.2,
        }
    }

    /// Sphere of radius 0.2 about (0.3, 0.3, 0.3), `n_c = 4 … 32`, `Q1`.
    pub fn default_3d() -> Self {
        StudyConfig {
            dim: 3,
            min_exp: 2,
            max_exp: 5,
            center: [0.3, 0.3, 0.3],
            ..Self::default_2d()
        }
    }

    pub fn for_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(Self::default_2d()),
            3 => Ok(Self::default_3d()),
            d => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma.unwrap_or_else(|| sqrt(self.dim as f64))
    }

    pub fn error_quadrature(&self) -> ErrorQuadrature {
        let d = ErrorQuadrature::for_degree(self.dim, self.degree);
        ErrorQuadrature {
            points_per_axis: self.quad_points.unwrap_or(d.points_per_axis),
            cut_depth: self.cut_depth.unwrap_or(d.cut_depth),
        }
    }

    pub fn problem(&self) -> Result<ModelProblem> {
        ModelProblem::for_dim(self.dim, self.center, self.radius)
    }

    pub fn levels(&self) -> impl Iterator<Item = usize> {
        (self.min_exp..=self.max_exp).map(|k| 1usize << k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if self.min_exp < 2 || self.max_exp < self.min_exp {
            return Err(Error::InvalidParameter("refinement range needs 2 <= min_exp <= max_exp"));
        }
        if self.max_exp > 16 {
            return Err(Error::InvalidParameter("max_exp above 16 is not supported"));
        }
        if self.alphas.is_empty() {
            return Err(Error::InvalidParameter("at least one alpha is required"));
        }
        if let Some(&a) = self.alphas.iter().find(|&&a| !(0.0..0.5).contains(&a)) {
            return Err(Error::AlphaOutOfRange(a));
        }
        if self.degree == 0 || self.degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(self.degree));
        }
        if !(self.sigma() > 0.0) {
            return Err(Error::InvalidParameter("sigma must be positive"));
        }
        if !(self.cg_tol > 0.0) {
            return Err(Error::InvalidParameter("CG tolerance must be positive"));
        }
        if self.quad_points == Some(0) || self.surface_order == 0 {
            return Err(Error::InvalidParameter("quadrature orders must be positive"));
        }
        let problem = self.problem()?;
        if !problem.sphere().is_strictly_inside_domain() {
            return Err(Error::InvalidParameter("interface must lie strictly inside the unit box"));
        }
        Ok(())
    }
}

/// Errors of one grid level for one weight exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub dim: usize,
    pub n_cells_per_axis: usize,
    /// Cell diameter `√dim / n_c`.
    pub h: f64,
    pub n_dofs: usize,
    pub alpha: f64,
    pub err_l2_alpha: f64,
    pub err_h1semi_alpha: f64,
    /// Full weighted `H¹` norm of the error.
    pub err_h1_alpha: f64,
    pub eoc_l2: Option<f64>,
    pub eoc_h1: Option<f64>,
    pub cg_iterations: usize,
    /// Cells in the interface layer for the configured sigma.
    pub n_layer_cells: usize,
}

/// Assembles and solves the model problem on `space`: stiffness with a
/// `degree + 2` point rule, layer load from the cell-split surface rule,
/// Dirichlet data from the exact solution.
pub fn solve_model_problem(
    problem: &ModelProblem,
    space: &FeSpace<'_>,
    surface_order: usize,
    cg_tol: f64,
) -> Result<(Vec<f64>, SolveReport)> {
    let mesh = space.mesh();
    let rule = gauss_rule(mesh.dim(), space.degree() + 2);
    let a = assemble_stiffness(space, &rule);
    let surface = problem.sphere().immersed_quadrature(mesh, surface_order)?;
    let density = problem.layer_density();
    let layer = assemble_interface_load(space, &surface, |_| density)?;
    let volume = assemble_volume_load(space, |x| problem.volume_source(x), &rule);
    let rhs: Vec<f64> = layer.values.iter().zip(&volume.values).map(|(a, b)| a + b).collect();
    let (a, rhs) = apply_dirichlet(&a, &rhs, space, |x| problem.value(x));
    let max_iter = 10 * space.n_dofs();
    let (u, report) = cg_solve(&a, &rhs, cg_tol, max_iter, Preconditioner::Jacobi);
    if !report.converged {
        return Err(Error::SolverDidNotConverge {
            n_cells_per_axis: mesh.cells_per_axis(),
            iterations: report.iterations,
            relative_residual: report.final_relative_residual,
        });
    }
    Ok((u, report))
}

/// Runs every level of the study; records are sorted by `(n_c, α)` and carry
/// convergence orders relative to the previous level.
pub fn run_study(config: &StudyConfig) -> Result<Vec<ConvergenceRecord>> {
    run_study_with(config, |_| {})
}

/// Like [`run_study`], calling `progress` with the records of each level as
/// soon as it is finished.
pub fn run_study_with<P>(config: &StudyConfig, mut progress: P) -> Result<Vec<ConvergenceRecord>>
where
    P: FnMut(&[ConvergenceRecord]),
{
    config.validate()?;
    let problem = config.problem()?;
    let quad = config.error_quadrature();
    let mut records: Vec<ConvergenceRecord> = Vec::new();
    for n_c in config.levels() {
        let mesh = Mesh::uniform(config.dim, n_c)?;
        let space = FeSpace::new(&mesh, config.degree)?;
        let (u, report) = solve_model_problem(&problem, &space, config.surface_order, config.cg_tol)?;
        let layer = classify_cells(&mesh, problem.sphere(), config.sigma())?;
        let errors = weighted_errors(&space, &u, &problem, problem.sphere(), &config.alphas, quad)?;
        let mut level: Vec<ConvergenceRecord> = errors
            .iter()
            .map(|e| ConvergenceRecord {
                dim: config.dim,
                n_cells_per_axis: n_c,
                h: mesh.h(),
                n_dofs: space.n_dofs(),
                alpha: e.alpha,
                err_l2_alpha: e.l2,
                err_h1semi_alpha: e.h1_semi,
                err_h1_alpha: e.h1,
                eoc_l2: None,
                eoc_h1: None,
                cg_iterations: report.iterations,
                n_layer_cells: layer.in_cells.len(),
            })
            .collect();
        level.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
        for rec in &mut level {
            let coarse = records
                .iter()
                .find(|r| r.n_cells_per_axis * 2 == n_c && r.alpha == rec.alpha);
            if let Some(c) = coarse {
                rec.eoc_l2 = eoc(&[(c.h, c.err_l2_alpha), (rec.h, rec.err_l2_alpha)])?[0];
                rec.eoc_h1 = eoc(&[(c.h, c.err_h1semi_alpha), (rec.h, rec.err_h1semi_alpha)])?[0];
            }
        }
        progress(&level);
        records.extend(level);
    }
    Ok(records)
}

/// Records of one exponent, in refinement order.
pub fn records_for_alpha(records: &[ConvergenceRecord], alpha: f64) -> Vec<&ConvergenceRecord> {
    let mut out: Vec<&ConvergenceRecord> = records.iter().filter(|r| r.alpha == alpha).collect();
    out.sort_by_key(|r| r.n_cells_per_axis);
    out
}

/// Mean of the last `k` available rates of one exponent, `(L², H¹ semi)`.
pub fn mean_tail_eoc(records: &[ConvergenceRecord], alpha: f64, k: usize) -> Option<(f64, f64)> {
    let rows = records_for_alpha(records, alpha);
    let l2: Vec<f64> = rows.iter().filter_map(|r| r.eoc_l2).collect();
    let h1: Vec<f64> = rows.iter().filter_map(|r| r.eoc_h1).collect();
    if l2.len() < k || h1.len() < k || k == 0 {
        return None;
    }
    let mean = |v: &[f64]| v[v.len() - k..].iter().sum::<f64>() / k as f64;
    Some((mean(&l2), mean(&h1)))
}
