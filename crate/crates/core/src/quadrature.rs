//! Gauss–Legendre rules on `[0,1]^dim` and recursive bisection of cells cut
//! by the interface.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::interface::{Interface, Region};
use crate::math::cos;
use crate::mesh::Aabb;
use crate::Point;

/// Gauss–Legendre nodes and weights on `[0, 1]`, nodes ascending, weights
/// summing to one. Exact for polynomials of degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "a Gauss rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton on P_n from the Chebyshev-like initial guess
        let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            x = 0.0;
            dp = 1.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x runs from +1 downwards
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        nodes[i] = 0.5 * (1.0 - x);
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Tensor-product rule on the reference cell `[0,1]^dim`.
#[derive(Debug, Clone)]
pub struct CellQuadrature {
    pub dim: usize,
    pub ref_points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl CellQuadrature {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `∫_{[0,1]^dim} g`.
    pub fn integrate<F: Fn(&Point) -> f64>(&self, g: F) -> f64 {
        self.ref_points.iter().zip(&self.weights).map(|(p, w)| w * g(p)).sum()
    }
}

/// Tensor Gauss–Legendre rule, exact per axis up to degree `2 n - 1`.
/// Points are ordered with the first axis running fastest.
pub fn gauss_rule(dim: usize, points_per_axis: usize) -> CellQuadrature {
    assert!((1..=3).contains(&dim));
    let (x, w) = gauss_legendre(points_per_axis);
    let n = points_per_axis;
    let total = n.pow(dim as u32);
    let mut ref_points = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    for q in 0..total {
        let mut p = [0.0; 3];
        let mut weight = 1.0;
        let mut rest = q;
        for slot in p.iter_mut().take(dim) {
            *slot = x[rest % n];
            weight *= w[rest % n];
            rest /= n;
        }
        ref_points.push(p);
        weights.push(weight);
    }
    CellQuadrature {
        dim,
        ref_points,
        weights,
    }
}

/// One leaf of a recursively bisected cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SubBox {
    pub bbox: Aabb,
    pub depth: usize,
    /// `None` for leaves that still meet the interface (only possible at
    /// the maximum depth).
    pub region: Option<Region>,
}

/// Quadrature for integrands that are smooth on each side of the interface
/// but not across it.
#[derive(Debug, Clone)]
pub struct SplitCellQuadrature {
    pub cell: Aabb,
    pub leaves: Vec<SubBox>,
    pub base_rule: CellQuadrature,
    pub max_depth: usize,
}

impl SplitCellQuadrature {
    /// Physical quadrature points and weights, leaf by leaf.
    pub fn points(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        let dim = self.base_rule.dim;
        self.leaves.iter().flat_map(move |leaf| {
            let vol = leaf.bbox.volume(dim);
            self.base_rule
                .ref_points
                .iter()
                .zip(&self.base_rule.weights)
                .map(move |(xi, w)| (leaf.bbox.map(xi, dim), w * vol))
        })
    }

    pub fn integrate<F: Fn(&Point) -> f64>(&self, g: F) -> f64 {
        self.points().map(|(x, w)| w * g(&x)).sum()
    }

    /// Sum of leaf volumes.
    pub fn volume(&self) -> f64 {
        let dim = self.base_rule.dim;
        self.leaves.iter().map(|l| l.bbox.volume(dim)).sum()
    }
}

/// Bisects `cell` along every axis until sub-boxes no longer meet the
/// interface or `max_depth` is reached. An uncut cell is returned as a
/// single leaf.
pub fn split_cut_cell<I: Interface + ?Sized>(
    cell: &Aabb,
    interface: &I,
    base_rule: &CellQuadrature,
    max_depth: usize,
) -> SplitCellQuadrature {
    let dim = base_rule.dim;
    let mut leaves = Vec::new();
    let mut stack = vec![(*cell, 0usize)];
    while let Some((b, depth)) = stack.pop() {
        let (dmin, _) = interface.distance_range(&b);
        if dmin > 0.0 {
            leaves.push(SubBox {
                bbox: b,
                depth,
                region: Some(interface.region(&b.center())),
            });
        } else if depth >= max_depth {
            leaves.push(SubBox {
                bbox: b,
                depth,
                region: None,
            });
        } else {
            // reversed so leaves come out in tensor order
            for child in b.bisect(dim).into_iter().rev() {
                stack.push((child, depth + 1));
            }
        }
    }
    SplitCellQuadrature {
        cell: *cell,
        leaves,
        base_rule: base_rule.clone(),
        max_depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interface::Sphere;
    use crate::math::sqrt;

    #[test]
    fn midpoint_rule() {
        let q = gauss_rule(1, 1);
        assert_eq!(q.ref_points, vec![[0.5, 0.0, 0.0]]);
        assert_eq!(q.weights, vec![1.0]);
    }

    #[test]
    fn known_nodes() {
        let (x, w) = gauss_legendre(2);
        let d = 0.5 / sqrt(3.0);
        assert!((x[0] - (0.5 - d)).abs() < 1e-15 && (x[1] - (0.5 + d)).abs() < 1e-15);
        assert!((w[0] - 0.5).abs() < 1e-15 && (w[1] - 0.5).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert!((x[1] - 0.5).abs() < 1e-15);
        assert!((w[1] - 4.0 / 9.0).abs() < 1e-15);
        assert!((x[0] - 0.5 * (1.0 - sqrt(0.6))).abs() < 1e-15);
    }

    #[test]
    fn monomial_exactness() {
        for n in 1..=10 {
            let (x, w) = gauss_legendre(n);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            for k in 0..2 * n {
                let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                assert!((approx - 1.0 / (k + 1) as f64).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn two_point_tensor_rule() {
        let q = gauss_rule(2, 2);
        assert!((q.integrate(|p| p[0] * p[0] * p[1] * p[1]) - 1.0 / 9.0).abs() < 1e-15);
        // x^4 is beyond the exactness degree
        let d = 0.5 / sqrt(3.0);
        let by_hand = 0.5 * ((0.5f64 - d).powi(4) + (0.5 + d).powi(4));
        assert!((by_hand - 7.0 / 36.0).abs() < 1e-15);
        let got = q.integrate(|p| p[0].powi(4));
        assert!((got - by_hand).abs() < 1e-15);
        assert!((got - 0.2).abs() > 1e-3);
    }

    #[test]
    fn uncut_cells_are_single_leaves() {
        let s = Sphere::new(2, [0.3, 0.3, 0.0], 0.2).unwrap();
        let base = gauss_rule(2, 3);
        let far = Aabb::new([0.75, 0.75, 0.0], [1.0, 1.0, 0.0]);
        let split = split_cut_cell(&far, &s, &base, 6);
        assert_eq!(split.leaves.len(), 1);
        assert_eq!(split.leaves[0].region, Some(Region::Exterior));
        let direct = base.integrate(|p| p[0] * p[1]) * far.volume(2);
        let got = split.integrate(|x| far.pull_back(x, 2)[0] * far.pull_back(x, 2)[1]);
        assert!((direct - got).abs() < 1e-15);

        let inner = Aabb::new([0.25, 0.25, 0.0], [0.3125, 0.3125, 0.0]);
        let split = split_cut_cell(&inner, &s, &base, 6);
        assert_eq!(split.leaves.len(), 1);
        assert_eq!(split.leaves[0].region, Some(Region::Interior));
    }

    #[test]
    fn leaves_tile_the_cell() {
        let s = Sphere::new(3, [0.3, 0.3, 0.3], 0.2).unwrap();
        let base = gauss_rule(3, 2);
        let cell = Aabb::new([0.375, 0.25, 0.25], [0.5, 0.375, 0.375]);
        for depth in 0..4 {
            let split = split_cut_cell(&cell, &s, &base, depth);
            assert!((split.volume() - cell.volume(3)).abs() < 1e-14);
            let total: f64 = split.points().map(|(_, w)| w).sum();
            assert!((total - cell.volume(3)).abs() < 1e-14);
            for leaf in &split.leaves {
                if leaf.depth < depth {
                    assert!(leaf.region.is_some());
                }
            }
        }
    }
}
