//! Free-space Green kernels, the single layer potential of a sphere, and a
//! finite-difference probe of normal-derivative jumps. None of this is used
//! by the solver; it checks the model problems independently of it.
//!
//! Sign convention: with `ν` pointing out of the sphere and
//! `[[a]] = a⁺ - a⁻`, a function solving `(∇u, ∇v) = ∫_Γ f v` has
//! `[[ν·∇u]] = -f`. The single layer `∫_Γ G(x-y) f(y) dΓ_y` satisfies the same
//! relation.

use core::f64::consts::PI;

use crate::interface::{Interface, Sphere};
use crate::math::{axpy, cos, ln, norm, sin, sqrt, sub};
use crate::quadrature::gauss_legendre;
use crate::{Error, Point, Result};

/// Default number of points for [`single_layer`]: 512 in 2D, and 128
/// azimuthal x 64 polar points in 3D.
pub fn default_layer_points(dim: usize) -> usize {
    if dim == 2 {
        512
    } else {
        128
    }
}

/// Fundamental solution of `-Δ`: `-ln|r| / 2π` in 2D, `1 / 4π|r|` in 3D.
pub fn green(dim: usize, r: &Point) -> Result<f64> {
    let len = match dim {
        2 => sqrt(r[0] * r[0] + r[1] * r[1]),
        3 => norm(r),
        d => return Err(Error::UnsupportedDimension(d)),
    };
    if len == 0.0 {
        return Err(Error::SingularKernel);
    }
    Ok(if dim == 2 {
        -ln(len) / (2.0 * PI)
    } else {
        1.0 / (4.0 * PI * len)
    })
}

/// Orthonormal frame whose third vector is `axis` (unit length assumed).
fn frame(axis: &Point) -> [Point; 3] {
    let helper = if axis[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = crate::math::dot(&helper, axis);
    let mut e1 = axpy(&helper, -d, axis);
    let l = norm(&e1);
    e1 = [e1[0] / l, e1[1] / l, e1[2] / l];
    let e2 = [
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    [e1, e2, *axis]
}

/// `p(x) = ∫_Γ G(x - y) f(y) dΓ_y`.
///
/// 2D uses the periodic trapezoidal rule with `n_quad` points. 3D uses
/// `n_quad` azimuthal trapezoidal points and `n_quad / 2` Gauss points in the
/// polar angle, measured from the direction of `x - c` so the near-singular
/// part of the kernel is resolved in one variable.
pub fn single_layer<F: Fn(&Point) -> f64>(
    sphere: &Sphere,
    f: F,
    x: &Point,
    n_quad: usize,
) -> Result<f64> {
    if n_quad < 8 {
        return Err(Error::InvalidParameter("single layer needs at least 8 points"));
    }
    let distance = sphere.distance(x);
    if distance <= 1e-8 {
        return Err(Error::TooCloseToInterface { distance });
    }
    let dim = sphere.dim();
    let c = sphere.center();
    let r = sphere.radius();
    let mut total = 0.0;
    if dim == 2 {
        let w = 2.0 * PI * r / n_quad as f64;
        for k in 0..n_quad {
            let y = sphere.point_at(0.0, 2.0 * PI * k as f64 / n_quad as f64);
            total += w * f(&y) * green(2, &sub(x, &y))?;
        }
        return Ok(total);
    }
    let offset = sub(x, c);
    let len = norm(&offset);
    let axis = if len > 0.0 {
        [offset[0] / len, offset[1] / len, offset[2] / len]
    } else {
        [0.0, 0.0, 1.0]
    };
    let [e1, e2, e3] = frame(&axis);
    let (tn, tw) = gauss_legendre((n_quad / 2).max(4));
    let dphi = 2.0 * PI / n_quad as f64;
    for (t, wt) in tn.iter().zip(&tw) {
        let theta = PI * t;
        let (st, ct) = (sin(theta), cos(theta));
        let jac = r * r * st * PI * wt * dphi;
        for k in 0..n_quad {
            let phi = dphi * k as f64;
            let (cp, sp) = (st * cos(phi), st * sin(phi));
            let mut y = *c;
            for a in 0..3 {
                y[a] += r * (cp * e1[a] + sp * e2[a] + ct * e3[a]);
            }
            total += jac * f(&y) * green(3, &sub(x, &y))?;
        }
    }
    Ok(total)
}

/// Sample points on the sphere: equally spaced angles in 2D, a Fibonacci
/// lattice in 3D.
pub fn sample_points(sphere: &Sphere, n: usize) -> impl Iterator<Item = Point> + '_ {
    let golden = PI * (3.0 - sqrt(5.0));
    (0..n).map(move |k| {
        if sphere.dim() == 2 {
            sphere.point_at(0.0, 2.0 * PI * (k as f64 + 0.5) / n as f64)
        } else {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            sphere.point_at(crate::math::acos(z), golden * k as f64)
        }
    })
}

/// One-sided normal derivative of `u` at `y` on the side `sign * ν`, from
/// central differences at `y + sign·h·ν` and `y + 2·sign·h·ν` extrapolated
/// linearly back to `y`. Only points strictly off `Γ` are sampled.
fn one_sided_normal_derivative<U: Fn(&Point) -> f64>(
    u: &U,
    y: &Point,
    nu: &Point,
    sign: f64,
    h: f64,
) -> f64 {
    let at = |t: f64| u(&axpy(y, sign * t * h, nu));
    sign * (3.0 * at(1.5) - 2.0 * at(0.5) - at(2.5)) / h
}

/// `max_y |(ν·∇u⁺ - ν·∇u⁻)(y) + f(y)|` over `n_samples` points on `Γ`.
pub fn jump_check<U, F>(sphere: &Sphere, u: U, f: F, n_samples: usize, fd_step: f64) -> Result<f64>
where
    U: Fn(&Point) -> f64,
    F: Fn(&Point) -> f64,
{
    if !(fd_step > 0.0 && fd_step < sphere.radius() / 10.0) {
        return Err(Error::InvalidParameter("fd_step must lie in (0, R/10)"));
    }
    let mut worst: f64 = 0.0;
    for y in sample_points(sphere, n_samples) {
        let nu = sphere.normal(&y)?;
        let outer = one_sided_normal_derivative(&u, &y, &nu, 1.0, fd_step);
        let inner = one_sided_normal_derivative(&u, &y, &nu, -1.0, fd_step);
        worst = worst.max((outer - inner + f(&y)).abs());
    }
    Ok(worst)
}
