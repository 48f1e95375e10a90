//! The model interface problems with closed-form solutions: a truncated
//! logarithm in 2D and a truncated inverse radius in 3D, both harmonic off a
//! sphere of radius `R` and constant inside it.

use crate::interface::Sphere;
use crate::math::{ln, sub};
use crate::{Point, Result};

/// A function known in closed form together with its gradient.
pub trait ExactSolution {
    fn value(&self, x: &Point) -> f64;
    fn gradient(&self, x: &Point) -> Point;
}

/// `u = -ln|r|` (2D) or `1/|r|` (3D) outside the sphere and the matching
/// constant inside, with `r = x - c`. The data are `b = 0`, Dirichlet trace
/// of `u`, and constant layer density `f = 1/R^{dim-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelProblem {
    sphere: Sphere,
}

impl ModelProblem {
    pub fn new(sphere: Sphere) -> Self {
        ModelProblem { sphere }
    }

    /// Circle of radius 0.2 about (0.3, 0.3).
    pub fn default_2d() -> Self {
        Self::new(Sphere::new(2, [0.3, 0.3, 0.0], 0.2).expect("valid circle"))
    }

    /// Sphere of radius 0.2 about (0.3, 0.3, 0.3).
    pub fn default_3d() -> Self {
        Self::new(Sphere::new(3, [0.3, 0.3, 0.3], 0.2).expect("valid sphere"))
    }

    pub fn for_dim(dim: usize, center: Point, radius: f64) -> Result<Self> {
        Ok(Self::new(Sphere::new(dim, center, radius)?))
    }

    pub fn sphere(&self) -> &Sphere {
        &self.sphere
    }

    pub fn dim(&self) -> usize {
        use crate::interface::Interface;
        self.sphere.dim()
    }

    /// Layer density entering `∫_Γ f v dΓ`.
    pub fn layer_density(&self) -> f64 {
        let r = self.sphere.radius();
        if self.dim() == 2 {
            1.0 / r
        } else {
            1.0 / (r * r)
        }
    }

    /// Volume source; zero for both model problems.
    pub fn volume_source(&self, _x: &Point) -> f64 {
        0.0
    }

    fn outer_value(&self, rho: f64) -> f64 {
        if self.dim() == 2 {
            -ln(rho)
        } else {
            1.0 / rho
        }
    }
}

impl ExactSolution for ModelProblem {
    fn value(&self, x: &Point) -> f64 {
        let rho = self.sphere.radial(x);
        self.outer_value(rho.max(self.sphere.radius()))
    }

    fn gradient(&self, x: &Point) -> Point {
        let r = sub(x, self.sphere.center());
        let rho = self.sphere.radial(x);
        if rho <= self.sphere.radius() {
            return [0.0; 3];
        }
        // -r/|r|^2 in 2D, -r/|r|^3 in 3D
        let s = if self.dim() == 2 {
            -1.0 / (rho * rho)
        } else {
            -1.0 / (rho * rho * rho)
        };
        [s * r[0], s * r[1], s * r[2]]
    }
}
