//! Analytic interfaces and surface quadrature split along the cells of a
//! background mesh.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::{acos, asin, cos, floor, norm, sin, sub};
use crate::mesh::{Aabb, Mesh};
use crate::quadrature::gauss_legendre;
use crate::{Error, Point, Result};

/// Tolerance of [`Interface::region`] on `|x - c| - R`.
pub const REGION_TOLERANCE: f64 = 1e-14;

/// Deepest recursion level of the parametric patch subdivision on spheres.
pub const SPHERE_MAX_DEPTH: usize = 12;

/// Default number of Gauss points per arc (2D) or per patch direction (3D).
pub const DEFAULT_SURFACE_ORDER: usize = 4;

/// Which side of the interface a point lies on. `Interior` is `Ω⁻`, the
/// side the normal points away from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Interior,
    Exterior,
    OnInterface,
}

/// A closed co-dimension one surface immersed in the unit box.
pub trait Interface {
    fn dim(&self) -> usize;

    /// `dist(x, Γ)`.
    fn distance(&self, x: &Point) -> f64;

    /// Unit normal pointing from the interior to the exterior.
    fn normal(&self, y: &Point) -> Result<Point>;

    fn region(&self, x: &Point) -> Region;

    /// `(min, max)` of `dist(x, Γ)` over the closed box.
    fn distance_range(&self, b: &Aabb) -> (f64, f64);

    /// Surface measure `|Γ|`.
    fn measure(&self) -> f64;

    /// Quadrature on `Γ` in which every point is owned by a mesh cell and no
    /// rule straddles a cell boundary.
    fn immersed_quadrature(&self, mesh: &Mesh, order: usize) -> Result<InterfaceQuadrature>;
}

/// Circle (2D) or sphere (3D) `{x : |x - c| = R}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere {
    dim: usize,
    center: Point,
    radius: f64,
}

impl Sphere {
    /// Rejects radii `<= 0` and spheres that touch the boundary of `[0,1]^dim`.
    /// Spheres entirely outside the box are allowed.
    pub fn new(dim: usize, center: Point, radius: f64) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidRadius(radius));
        }
        let mut c = center;
        if dim == 2 {
            c[2] = 0.0;
        }
        let s = Sphere {
            dim,
            center: c,
            radius,
        };
        let (near, far) = s.boundary_distance_range();
        if near <= radius && radius <= far {
            return Err(Error::InterfaceMeetsBoundary);
        }
        Ok(s)
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// True when the whole sphere lies in the open unit box.
    pub fn is_strictly_inside_domain(&self) -> bool {
        (0..self.dim).all(|a| {
            self.center[a] - self.radius > 0.0 && self.center[a] + self.radius < 1.0
        })
    }

    pub fn radial(&self, x: &Point) -> f64 {
        norm(&sub(x, &self.center))
    }

    /// Range of `|x - c|` over the boundary of the unit box.
    fn boundary_distance_range(&self) -> (f64, f64) {
        let unit = Aabb::new([0.0; 3], [1.0, 1.0, if self.dim == 3 { 1.0 } else { 0.0 }]);
        let (near_box, far) = unit.distance_range_to(&self.center, self.dim);
        if near_box > 0.0 {
            return (near_box, far);
        }
        let near = (0..self.dim)
            .map(|a| self.center[a].min(1.0 - self.center[a]))
            .fold(f64::INFINITY, f64::min);
        (near, far)
    }

    /// Point on the sphere at polar angle `theta` (from `+z`) and azimuth `phi`.
    /// In 2D only `phi` is used.
    pub fn point_at(&self, theta: f64, phi: f64) -> Point {
        let c = &self.center;
        let r = self.radius;
        if self.dim == 2 {
            [c[0] + r * cos(phi), c[1] + r * sin(phi), 0.0]
        } else {
            let st = sin(theta);
            [
                c[0] + r * st * cos(phi),
                c[1] + r * st * sin(phi),
                c[2] + r * cos(theta),
            ]
        }
    }

    fn circle_quadrature(&self, mesh: &Mesh, order: usize) -> Result<InterfaceQuadrature> {
        let n = mesh.cells_per_axis();
        let (cx, cy, r) = (self.center[0], self.center[1], self.radius);
        let wrap = |t: f64| if t < 0.0 { t + 2.0 * PI } else { t };
        let mut angles = Vec::new();
        for i in 0..=n {
            let line = i as f64 / n as f64;
            let tx = (line - cx) / r;
            if tx.abs() <= 1.0 {
                let t = acos(tx);
                angles.push(t);
                angles.push(wrap(-t));
            }
            let ty = (line - cy) / r;
            if ty.abs() <= 1.0 {
                let t = asin(ty);
                angles.push(wrap(t));
                angles.push(wrap(PI - t));
            }
        }
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

        let mut arcs = Vec::with_capacity(angles.len().max(1));
        if angles.is_empty() {
            arcs.push((0.0, 2.0 * PI));
        } else {
            for pair in angles.windows(2) {
                arcs.push((pair[0], pair[1]));
            }
            arcs.push((angles[angles.len() - 1], angles[0] + 2.0 * PI));
        }

        let (nodes, weights) = gauss_legendre(order);
        let mut q = InterfaceQuadrature::with_capacity(arcs.len() * order);
        for (a, b) in arcs {
            let len = b - a;
            if len <= 1e-15 {
                continue;
            }
            let mid = self.point_at(0.0, 0.5 * (a + b));
            let owner = mesh.locate(&mid);
            for (xi, w) in nodes.iter().zip(&weights) {
                let t = a + xi * len;
                q.push(self.point_at(0.0, t), r * len * w, owner);
            }
        }
        q.verify(mesh)?;
        Ok(q)
    }

    /// Exact bounding box of the patch `[t0,t1] x [p0,p1]` (polar x azimuth).
    fn patch_box(&self, t0: f64, t1: f64, p0: f64, p1: f64) -> Aabb {
        let (s_lo, s_hi) = {
            let (a, b) = (sin(t0), sin(t1));
            let hi = if t0 <= PI / 2.0 && PI / 2.0 <= t1 { 1.0 } else { a.max(b) };
            (a.min(b), hi)
        };
        let (z_lo, z_hi) = (cos(t1), cos(t0));
        let range = |f: fn(f64) -> f64, crit: &[(f64, f64)]| {
            let (a, b) = (f(p0), f(p1));
            let mut lo = a.min(b);
            let mut hi = a.max(b);
            for &(angle, value) in crit {
                if p0 <= angle && angle <= p1 {
                    lo = lo.min(value);
                    hi = hi.max(value);
                }
            }
            (lo, hi)
        };
        let (c_lo, c_hi) = range(cos, &[(0.0, 1.0), (PI, -1.0), (2.0 * PI, 1.0)]);
        let (n_lo, n_hi) = range(sin, &[(PI / 2.0, 1.0), (1.5 * PI, -1.0)]);
        let product = |a: (f64, f64), b: (f64, f64)| {
            let p = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
            (
                p.iter().copied().fold(f64::INFINITY, f64::min),
                p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            )
        };
        let x = product((s_lo, s_hi), (c_lo, c_hi));
        let y = product((s_lo, s_hi), (n_lo, n_hi));
        let (c, r) = (&self.center, self.radius);
        Aabb::new(
            [c[0] + r * x.0, c[1] + r * y.0, c[2] + r * z_lo],
            [c[0] + r * x.1, c[1] + r * y.1, c[2] + r * z_hi],
        )
    }

    fn sphere_quadrature(&self, mesh: &Mesh, order: usize) -> Result<InterfaceQuadrature> {
        let (nodes, weights) = gauss_legendre(order);
        let n = mesh.cells_per_axis() as f64;
        let r2 = self.radius * self.radius;
        let mut q = InterfaceQuadrature::with_capacity(1024);
        // depth-first, children visited in (theta, phi) order
        let mut stack = Vec::new();
        stack.push((0.0, PI, 0.0, 2.0 * PI, 0usize));
        while let Some((t0, t1, p0, p1, depth)) = stack.pop() {
            let bbox = self.patch_box(t0, t1, p0, p1);
            let single = (0..3).all(|a| {
                let lo = floor(bbox.lo[a] * n);
                let hi = floor(bbox.hi[a] * n);
                lo == hi || (hi - lo == 1.0 && bbox.hi[a] * n == hi)
            });
            if single || depth >= SPHERE_MAX_DEPTH {
                let owner = if single { mesh.locate(&bbox.center()) } else { None };
                let (dt, dp) = (t1 - t0, p1 - p0);
                for (xt, wt) in nodes.iter().zip(&weights) {
                    let theta = t0 + xt * dt;
                    let jac = r2 * sin(theta) * dt * dp * wt;
                    for (xp, wp) in nodes.iter().zip(&weights) {
                        let y = self.point_at(theta, p0 + xp * dp);
                        let cell = owner.or_else(|| mesh.locate(&y));
                        q.push(y, jac * wp, cell);
                    }
                }
                continue;
            }
            let (tm, pm) = (0.5 * (t0 + t1), 0.5 * (p0 + p1));
            stack.push((tm, t1, pm, p1, depth + 1));
            stack.push((tm, t1, p0, pm, depth + 1));
            stack.push((t0, tm, pm, p1, depth + 1));
            stack.push((t0, tm, p0, pm, depth + 1));
        }
        q.verify(mesh)?;
        Ok(q)
    }
}

impl Interface for Sphere {
    fn dim(&self) -> usize {
        self.dim
    }

    fn distance(&self, x: &Point) -> f64 {
        (self.radial(x) - self.radius).abs()
    }

    fn normal(&self, y: &Point) -> Result<Point> {
        let r = sub(y, &self.center);
        let len = norm(&r);
        if len == 0.0 {
            return Err(Error::DegenerateNormal);
        }
        Ok([r[0] / len, r[1] / len, r[2] / len])
    }

    fn region(&self, x: &Point) -> Region {
        let s = self.radial(x) - self.radius;
        if s.abs() <= REGION_TOLERANCE {
            Region::OnInterface
        } else if s < 0.0 {
            Region::Interior
        } else {
            Region::Exterior
        }
    }

    fn distance_range(&self, b: &Aabb) -> (f64, f64) {
        let (near, far) = b.distance_range_to(&self.center, self.dim);
        let r = self.radius;
        let dmax = (near - r).abs().max((far - r).abs());
        let dmin = if near <= r && r <= far {
            0.0
        } else {
            (near - r).abs().min((far - r).abs())
        };
        (dmin, dmax)
    }

    fn measure(&self) -> f64 {
        if self.dim == 2 {
            2.0 * PI * self.radius
        } else {
            4.0 * PI * self.radius * self.radius
        }
    }

    /// 2D: the circle is cut at every crossing with a grid line and each arc
    /// gets an `order`-point Gauss rule in arc length. 3D: the `(θ, φ)`
    /// rectangle is bisected until a patch's bounding box fits in one cell
    /// (or [`SPHERE_MAX_DEPTH`] is reached), then an `order x order` Gauss
    /// rule with Jacobian `R² sin θ` is placed on each patch.
    fn immersed_quadrature(&self, mesh: &Mesh, order: usize) -> Result<InterfaceQuadrature> {
        if order == 0 {
            return Err(Error::InvalidParameter("surface quadrature order must be >= 1"));
        }
        if mesh.dim() != self.dim {
            return Err(Error::InvalidParameter("mesh and interface dimensions differ"));
        }
        if self.dim == 2 {
            self.circle_quadrature(mesh, order)
        } else {
            self.sphere_quadrature(mesh, order)
        }
    }
}

/// Points on `Γ` with surface weights, each tagged with the mesh cell that
/// contains it.
#[derive(Debug, Clone, Default)]
pub struct InterfaceQuadrature {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub owner_cell: Vec<usize>,
    unassigned: Option<usize>,
}

impl InterfaceQuadrature {
    fn with_capacity(n: usize) -> Self {
        InterfaceQuadrature {
            points: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
            owner_cell: Vec::with_capacity(n),
            unassigned: None,
        }
    }

    fn push(&mut self, point: Point, weight: f64, owner: Option<usize>) {
        if owner.is_none() && self.unassigned.is_none() {
            self.unassigned = Some(self.points.len());
        }
        self.points.push(point);
        self.weights.push(weight);
        self.owner_cell.push(owner.unwrap_or(usize::MAX));
    }

    fn verify(&self, mesh: &Mesh) -> Result<()> {
        if let Some(index) = self.unassigned {
            return Err(Error::UnassignedQuadraturePoint { index });
        }
        for (index, (p, &cell)) in self.points.iter().zip(&self.owner_cell).enumerate() {
            if !mesh.cell_box(cell).contains(p, mesh.dim(), 1e-12) {
                return Err(Error::QuadraturePointOutsideCell { index, cell });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ_q w_q g(y_q)`.
    pub fn integrate<F: Fn(&Point) -> f64>(&self, g: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * g(p)).sum()
    }

    /// `|K ∩ Γ|` for every cell, as seen by the quadrature.
    pub fn cell_measures(&self, n_cells: usize) -> Vec<f64> {
        let mut m = alloc::vec![0.0; n_cells];
        for (&cell, w) in self.owner_cell.iter().zip(&self.weights) {
            m[cell] += w;
        }
        m
    }

    /// Cells that own at least one quadrature point, ascending.
    pub fn cut_cells(&self) -> Vec<usize> {
        let mut cells = self.owner_cell.clone();
        cells.sort_unstable();
        cells.dedup();
        cells
    }
}
