//! Errors in Sobolev norms weighted by `d(x)^{2α}`, `d` the distance to the
//! interface, plus the cellwise discrete norm and empirical convergence
//! orders.
//!
//! Cells that meet the interface are integrated with
//! [`split_cut_cell`](crate::quadrature::split_cut_cell), so a piecewise
//! exact solution is always sampled on the side each point belongs to.

use alloc::vec;
use alloc::vec::Vec;

use crate::fe_space::{FeSpace, ShapeValues};
use crate::interface::Interface;
use crate::math::{log2, powf, sqrt};
use crate::mesh::{CellClassification, Mesh};
use crate::problem::ExactSolution;
use crate::quadrature::{gauss_rule, split_cut_cell, CellQuadrature};
use crate::{Error, Point, Result};

/// Exponent grid used by convergence studies.
pub const DEFAULT_ALPHAS: [f64; 6] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.49];

/// Quadrature used for error integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorQuadrature {
    pub points_per_axis: usize,
    /// Bisection depth on cells crossed by the interface.
    pub cut_depth: usize,
}

impl ErrorQuadrature {
    /// `ℓ + 3` points per axis; cut depth 6 in 2D and 4 in 3D.
    pub fn for_degree(dim: usize, degree: usize) -> Self {
        ErrorQuadrature {
            points_per_axis: degree + 3,
            cut_depth: if dim == 2 { 6 } else { 4 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNormParams {
    pub alpha: f64,
    /// Derivative order: 0 for `‖·‖_{0,α}`, 1 for the seminorm `|·|_{1,α}`.
    pub m: usize,
    pub quadrature: ErrorQuadrature,
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -0.5 && alpha < 0.5 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// `d^{2α}`, with `0^0 = 1`.
#[inline]
pub fn weight(distance: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        powf(distance, 2.0 * alpha)
    }
}

/// Calls `visit(cell, ξ, x, w)` for every point of the error quadrature:
/// the plain tensor rule on cells away from the interface, the recursively
/// split rule on cells that meet it. `w` is the physical weight.
pub fn for_each_error_point<I, F>(mesh: &Mesh, interface: &I, quad: ErrorQuadrature, mut visit: F)
where
    I: Interface + ?Sized,
    F: FnMut(usize, &Point, &Point, f64),
{
    let dim = mesh.dim();
    let rule = gauss_rule(dim, quad.points_per_axis);
    let vol = powf(mesh.cell_size(), dim as f64);
    for cell in 0..mesh.n_cells() {
        let cb = mesh.cell_box(cell);
        let (dmin, _) = interface.distance_range(&cb);
        if dmin > 0.0 {
            for (xi, w) in rule.ref_points.iter().zip(&rule.weights) {
                visit(cell, xi, &cb.map(xi, dim), w * vol);
            }
        } else {
            let split = split_cut_cell(&cb, interface, &rule, quad.cut_depth);
            for (x, w) in split.points() {
                visit(cell, &cb.pull_back(&x, dim), &x, w);
            }
        }
    }
}

/// `∫_Ω g(cell, ξ, x) d(x)^{2α} dx` with the error quadrature.
pub fn integrate_weighted<I, G>(
    mesh: &Mesh,
    interface: &I,
    alpha: f64,
    quad: ErrorQuadrature,
    mut integrand: G,
) -> Result<f64>
where
    I: Interface + ?Sized,
    G: FnMut(usize, &Point, &Point) -> f64,
{
    if !(alpha > -0.5) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let mut total = 0.0;
    for_each_error_point(mesh, interface, quad, |cell, xi, x, w| {
        total += w * weight(interface.distance(x), alpha) * integrand(cell, xi, x);
    });
    Ok(total)
}

/// `∫_Ω d(x)^{2α} dx`.
pub fn weight_integral<I: Interface + ?Sized>(
    interface: &I,
    alpha: f64,
    mesh: &Mesh,
    quad: ErrorQuadrature,
) -> Result<f64> {
    integrate_weighted(mesh, interface, alpha, quad, |_, _, _| 1.0)
}

/// Weighted errors of one discrete solution for one exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedErrors {
    pub alpha: f64,
    /// `‖u - u_h‖_{0,α}`
    pub l2: f64,
    /// `|u - u_h|_{1,α}`
    pub h1_semi: f64,
    /// `‖u - u_h‖_{1,α} = (‖·‖²_{0,α} + |·|²_{1,α})^{1/2}`
    pub h1: f64,
}

/// Weighted `L²` and `H¹` errors of `u_h` against `exact` for every exponent
/// in `alphas`, from a single pass over the quadrature points.
pub fn weighted_errors<I, E>(
    space: &FeSpace<'_>,
    coeffs: &[f64],
    exact: &E,
    interface: &I,
    alphas: &[f64],
    quad: ErrorQuadrature,
) -> Result<Vec<WeightedErrors>>
where
    I: Interface + ?Sized,
    E: ExactSolution + ?Sized,
{
    for &a in alphas {
        check_alpha(a)?;
    }
    let mut l2 = vec![0.0; alphas.len()];
    let mut h1 = vec![0.0; alphas.len()];
    let mut shape = ShapeValues::default();
    for_each_error_point(space.mesh(), interface, quad, |cell, xi, x, w| {
        space.basis().eval_into(xi, &mut shape);
        let (uh, guh) = space.eval_with(&shape, coeffs, cell);
        let gu = exact.gradient(x);
        let e0 = exact.value(x) - uh;
        let e1: f64 = (0..3).map(|a| (gu[a] - guh[a]) * (gu[a] - guh[a])).sum();
        let d = interface.distance(x);
        for (k, &alpha) in alphas.iter().enumerate() {
            let ww = w * weight(d, alpha);
            l2[k] += ww * e0 * e0;
            h1[k] += ww * e1;
        }
    });
    Ok(alphas
        .iter()
        .enumerate()
        .map(|(k, &alpha)| WeightedErrors {
            alpha,
            l2: sqrt(l2[k]),
            h1_semi: sqrt(h1[k]),
            h1: sqrt(l2[k] + h1[k]),
        })
        .collect())
}

/// `(Σ_K ∫_K |D^m (u - u_h)|² d^{2α})^{1/2}`.
pub fn weighted_error<I, E>(
    space: &FeSpace<'_>,
    coeffs: &[f64],
    exact: &E,
    interface: &I,
    params: &WeightedNormParams,
) -> Result<f64>
where
    I: Interface + ?Sized,
    E: ExactSolution + ?Sized,
{
    let e = weighted_errors(space, coeffs, exact, interface, &[params.alpha], params.quadrature)?;
    match params.m {
        0 => Ok(e[0].l2),
        1 => Ok(e[0].h1_semi),
        _ => Err(Error::InvalidParameter("derivative order must be 0 or 1")),
    }
}

/// `‖u_h‖_{h,α} = (Σ_K d̄_K^{2α} ‖u_h‖²_{0,K})^{1/2}`.
pub fn discrete_norm(
    space: &FeSpace<'_>,
    coeffs: &[f64],
    classification: &CellClassification,
    alpha: f64,
    rule: &CellQuadrature,
) -> Result<f64> {
    check_alpha(alpha)?;
    let mesh = space.mesh();
    let vol = powf(mesh.cell_size(), mesh.dim() as f64);
    let shapes: Vec<ShapeValues> = rule.ref_points.iter().map(|xi| space.basis().eval(xi)).collect();
    let mut total = 0.0;
    for cell in 0..mesh.n_cells() {
        let dmax = classification.dist_max[cell];
        let wk = if alpha == 0.0 {
            1.0
        } else if dmax == 0.0 {
            0.0
        } else {
            powf(dmax, 2.0 * alpha)
        };
        if wk == 0.0 {
            continue;
        }
        let local: f64 = shapes
            .iter()
            .zip(&rule.weights)
            .map(|(s, w)| {
                let (v, _) = space.eval_with(s, coeffs, cell);
                w * v * v
            })
            .sum();
        total += wk * local * vol;
    }
    Ok(sqrt(total))
}

/// `log₂(e_{k-1}/e_k)` for consecutive levels. Mesh sizes must halve;
/// a rate involving a zero or non-finite error is `None`.
pub fn eoc(errors: &[(f64, f64)]) -> Result<Vec<Option<f64>>> {
    let mut rates = Vec::with_capacity(errors.len().saturating_sub(1));
    for pair in errors.windows(2) {
        let ((h0, e0), (h1, e1)) = (pair[0], pair[1]);
        if !(h0 > 0.0) || ((h1 / h0) - 0.5).abs() > 1e-12 {
            return Err(Error::NonHalvingSequence);
        }
        rates.push(if e0 > 0.0 && e1 > 0.0 && e0.is_finite() && e1.is_finite() {
            Some(log2(e0 / e1))
        } else {
            None
        });
    }
    Ok(rates)
}
