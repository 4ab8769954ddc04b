//! Tensor-product quadratic Bezier patches over `[-1,1]^2` and their
//! deviation from the unit sphere.
//!
//! A patch is a 3x3 control net `b[i][j]` evaluated as
//! `p(u,v) = sum_ij B_i(u) B_j(v) b[i][j]` with the quadratic Bernstein basis
//! reparameterized to `[-1,1]`:
//!
//! ```text
//! B_0(t) = ((1-t)/2)^2,   B_1(t) = (1-t^2)/2,   B_2(t) = ((1+t)/2)^2.
//! ```
//!
//! Two error measures quantify the deviation of a point `p` from the unit
//! sphere: the simplified error `f = |p|^2 - 1` (a polynomial, convenient for
//! exact derivative work) and the radial error `g = |p| - 1` (the true
//! distance along the ray from the origin). They share critical points and
//! sign structure since `g = f / (sqrt(1+f) + 1)` is a monotone transform.
//!
//! Besides generic net evaluation this module carries closed forms of the
//! error restricted to a patch side and to the diagonal. The solvers in
//! [`crate::square`] run on the closed forms; the grid oracle deliberately
//! sticks to generic net evaluation so the two routes check each other.

use crate::error::{Error, Result};
use crate::vec3::Vec3;
use alloc::format;

#[cfg(not(feature = "std"))]
use crate::math::FloatShim;

/// Largest admissible half-side: the spherical square degenerates to a
/// hemisphere cap with its corners on the equator at `a = sqrt(2)/2`.
pub const A_MAX: f64 = core::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// `f(u,v) = |p(u,v)|^2 - 1`.
    Simplified,
    /// `g(u,v) = |p(u,v)| - 1`.
    Radial,
}

/// Shape parameters of a square patch: corners at `(+-a, +-a, c)` with
/// `c = sqrt(1 - 2a^2)`, edge midpoints scaled by `alpha`, center at
/// `(0, 0, beta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareParams {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Shape parameters of a rectangular patch: corners at `(+-a, +-b, w)` with
/// `w = sqrt(1 - a^2 - b^2)`, the edge weight `alpha1` acting along `u`
/// (the edges `v = +-1`), `alpha2` along `v`, center at `(0, 0, beta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectParams {
    pub a: f64,
    pub b: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
}

/// 3x3 control net; `points[i][j]` pairs with `B_i(u) B_j(v)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlNet {
    pub points: [[Vec3; 3]; 3],
}

/// Quadratic Bernstein basis on `[-1,1]`.
#[inline]
pub fn bernstein2(t: f64) -> [f64; 3] {
    let m = 0.5 * (1.0 - t);
    let p = 0.5 * (1.0 + t);
    [m * m, 2.0 * m * p, p * p]
}

/// Derivatives of [`bernstein2`] with respect to `t`.
#[inline]
pub fn bernstein2_deriv(t: f64) -> [f64; 3] {
    [-0.5 * (1.0 - t), -t, 0.5 * (1.0 + t)]
}

fn require_finite(value: f64, name: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be finite, got {value}")))
    }
}

fn validate_square(p: &SquareParams) -> Result<f64> {
    require_finite(p.a, "a")?;
    require_finite(p.alpha, "alpha")?;
    require_finite(p.beta, "beta")?;
    if !(p.a > 0.0 && p.a <= A_MAX) {
        return Err(Error::Parameter(format!(
            "half-side a must satisfy 0 < a <= sqrt(2)/2, got {}",
            p.a
        )));
    }
    // At a = A_MAX the product 2a^2 overshoots 1 by one rounding ulp.
    Ok((1.0 - 2.0 * p.a * p.a).max(0.0).sqrt())
}

fn validate_rect(p: &RectParams) -> Result<f64> {
    require_finite(p.a, "a")?;
    require_finite(p.b, "b")?;
    require_finite(p.alpha1, "alpha1")?;
    require_finite(p.alpha2, "alpha2")?;
    require_finite(p.beta, "beta")?;
    if !(p.b > 0.0 && p.b <= p.a) {
        return Err(Error::Parameter(format!(
            "half-sides must satisfy 0 < b <= a, got a = {}, b = {}",
            p.a, p.b
        )));
    }
    let w_sq = 1.0 - p.a * p.a - p.b * p.b;
    if w_sq <= 0.0 {
        return Err(Error::Parameter(format!(
            "half-sides must satisfy a^2 + b^2 < 1, got a = {}, b = {}",
            p.a, p.b
        )));
    }
    Ok(w_sq.sqrt())
}

/// Control net of the symmetric square patch.
///
/// Corners sit on the sphere at `(+-a, +-a, c)`; each edge midpoint is
/// `alpha` times the sum of its two adjacent corners, and the center point is
/// `(0, 0, beta)`.
pub fn square_net(p: &SquareParams) -> Result<ControlNet> {
    let c = validate_square(p)?;
    let (a, al) = (p.a, p.alpha);
    let b00 = Vec3::new(-a, -a, c);
    let b20 = Vec3::new(a, -a, c);
    let b02 = Vec3::new(-a, a, c);
    let b22 = Vec3::new(a, a, c);
    Ok(ControlNet {
        points: [
            [b00, (b00 + b02) * al, b02],
            [(b00 + b20) * al, Vec3::new(0.0, 0.0, p.beta), (b02 + b22) * al],
            [b20, (b20 + b22) * al, b22],
        ],
    })
}

/// Control net of the symmetric rectangular patch (`alpha1` weights the
/// edges running in `u`, `alpha2` those running in `v`).
pub fn rect_net(p: &RectParams) -> Result<ControlNet> {
    let w = validate_rect(p)?;
    let (a, b) = (p.a, p.b);
    let c00 = Vec3::new(-a, -b, w);
    let c20 = Vec3::new(a, -b, w);
    let c02 = Vec3::new(-a, b, w);
    let c22 = Vec3::new(a, b, w);
    Ok(ControlNet {
        points: [
            [c00, (c00 + c02) * p.alpha2, c02],
            [
                (c00 + c20) * p.alpha1,
                Vec3::new(0.0, 0.0, p.beta),
                (c02 + c22) * p.alpha1,
            ],
            [c20, (c20 + c22) * p.alpha2, c22],
        ],
    })
}

impl ControlNet {
    pub fn eval(&self, u: f64, v: f64) -> Vec3 {
        let bu = bernstein2(u);
        let bv = bernstein2(v);
        let mut p = Vec3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                p = p + self.points[i][j] * (bu[i] * bv[j]);
            }
        }
        p
    }

    /// First partial derivatives `(p_u, p_v)`.
    pub fn partials(&self, u: f64, v: f64) -> (Vec3, Vec3) {
        let bu = bernstein2(u);
        let bv = bernstein2(v);
        let du = bernstein2_deriv(u);
        let dv = bernstein2_deriv(v);
        let mut pu = Vec3::ZERO;
        let mut pv = Vec3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                pu = pu + self.points[i][j] * (du[i] * bv[j]);
                pv = pv + self.points[i][j] * (bu[i] * dv[j]);
            }
        }
        (pu, pv)
    }

    /// Unnormalized surface normal `p_u x p_v`.
    pub fn normal(&self, u: f64, v: f64) -> Vec3 {
        let (pu, pv) = self.partials(u, v);
        pu.cross(pv)
    }
}

/// Radial error from the simplified one: `g = f / (sqrt(1+f) + 1)`.
///
/// Algebraically equal to `sqrt(1+f) - 1` but immune to the cancellation
/// that form suffers for `|f|` near rounding noise.
#[inline]
pub(crate) fn radial_from_simplified(f: f64) -> f64 {
    f / ((1.0 + f).sqrt() + 1.0)
}

#[inline]
pub(crate) fn apply_kind(f: f64, kind: ErrorKind) -> f64 {
    match kind {
        ErrorKind::Simplified => f,
        ErrorKind::Radial => radial_from_simplified(f),
    }
}

/// Pointwise deviation of the patch from the unit sphere.
pub fn error_value(net: &ControlNet, u: f64, v: f64, kind: ErrorKind) -> f64 {
    let p = net.eval(u, v);
    match kind {
        ErrorKind::Simplified => p.norm_sq() - 1.0,
        ErrorKind::Radial => radial_from_simplified(p.norm_sq() - 1.0),
    }
}

// ---------------------------------------------------------------------------
// Closed-form restrictions.
//
// With the symmetric square net the patch evaluates to
//   p(u,v) = ( a u S(v), a v S(u), c S(u) S(v) + m W(u) W(v) ),
// where S(t) = (1+t^2)/2 + alpha (1-t^2), W(t) = (1-t^2)/2 and
// m = beta - 4 c alpha^2. Restricting to the side v = -1 kills the W term
// and yields a beta-free univariate error; restricting to the diagonal
// v = u gives the other profile the optimizer equioscillates.
// ---------------------------------------------------------------------------

/// Side profile `f(u, -1)` of the square patch in closed form:
/// `f_s(u) = a^2 u^2 + (1 - a^2) S(u)^2 - 1`, independent of `beta`.
///
/// The same profile is the `v = -1` boundary of a rectangular patch with
/// half-sides `(a, b)` and edge weight `alpha1 = alpha`, for every `b`:
/// the boundary landing on the circle `x^2 + z^2 = 1 - b^2` scaled back up
/// depends on `a` alone.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SideRestriction {
    a_sq: f64,
    one_minus_a_sq: f64,
}

impl SideRestriction {
    pub(crate) fn new(a: f64) -> Self {
        Self {
            a_sq: a * a,
            one_minus_a_sq: 1.0 - a * a,
        }
    }

    #[inline]
    pub(crate) fn s(&self, u: f64, alpha: f64) -> f64 {
        0.5 * (1.0 + u * u) + alpha * (1.0 - u * u)
    }

    #[inline]
    pub(crate) fn f(&self, u: f64, alpha: f64) -> f64 {
        let s = self.s(u, alpha);
        self.a_sq * u * u + self.one_minus_a_sq * s * s - 1.0
    }

    #[cfg(test)]
    pub(crate) fn f_u(&self, u: f64, alpha: f64) -> f64 {
        let s = self.s(u, alpha);
        let s_u = u * (1.0 - 2.0 * alpha);
        2.0 * self.a_sq * u + 2.0 * self.one_minus_a_sq * s * s_u
    }

    #[inline]
    pub(crate) fn f_alpha(&self, u: f64, alpha: f64) -> f64 {
        2.0 * self.one_minus_a_sq * self.s(u, alpha) * (1.0 - u * u)
    }

    /// Interior critical point as `u^2`, when one exists in `(0, 1)`.
    ///
    /// In `t = u^2` the profile is quadratic, so there is at most one:
    /// `f_u = 0` at `S(u) = a^2 / ((1-a^2)(2 alpha - 1))`.
    pub(crate) fn crit_u_sq(&self, alpha: f64) -> Option<f64> {
        let slope = 0.5 - alpha; // dS/dt where t = u^2
        if slope.abs() < 1e-14 {
            return None;
        }
        let s_crit = self.a_sq / (self.one_minus_a_sq * (2.0 * alpha - 1.0));
        let t = (s_crit - (0.5 + alpha)) / slope;
        (t > 0.0 && t < 1.0).then_some(t)
    }

    /// Minimum of the profile over `u` in `[-1, 1]` as `(u_min >= 0, value)`.
    /// Candidates: the center, the interior critical point, and the corner
    /// (where the profile vanishes exactly).
    pub(crate) fn min_on_side(&self, alpha: f64) -> (f64, f64) {
        let mut best = (0.0, self.f(0.0, alpha));
        if let Some(t) = self.crit_u_sq(alpha) {
            let u = t.sqrt();
            let v = self.f(u, alpha);
            if v < best.1 {
                best = (u, v);
            }
        }
        if 0.0 < best.1 {
            best = (1.0, 0.0);
        }
        best
    }
}

/// Diagonal profile `f(u, u)` of the square patch in closed form:
/// `f_d(u) = 2 a^2 u^2 S(u)^2 + z(u)^2 - 1` with
/// `z = c Q + beta B`, `Q = ((1+u^2)/2)^2 + alpha (1-u^4)`,
/// `B = (1-u^2)^2/4`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DiagRestriction {
    a_sq: f64,
    pub(crate) c: f64,
}

impl DiagRestriction {
    pub(crate) fn new(a: f64) -> Self {
        Self {
            a_sq: a * a,
            c: (1.0 - 2.0 * a * a).max(0.0).sqrt(),
        }
    }

    #[inline]
    fn s(&self, u: f64, alpha: f64) -> f64 {
        0.5 * (1.0 + u * u) + alpha * (1.0 - u * u)
    }

    #[inline]
    fn z(&self, u: f64, alpha: f64, beta: f64) -> f64 {
        let u_sq = u * u;
        let q = 0.25 * (1.0 + u_sq) * (1.0 + u_sq) + alpha * (1.0 - u_sq * u_sq);
        let b = 0.25 * (1.0 - u_sq) * (1.0 - u_sq);
        self.c * q + beta * b
    }

    #[inline]
    fn z_u(&self, u: f64, alpha: f64, beta: f64) -> f64 {
        let u_sq = u * u;
        let q_u = u * (1.0 + u_sq) - 4.0 * alpha * u * u_sq;
        let b_u = u * u_sq - u;
        self.c * q_u + beta * b_u
    }

    pub(crate) fn f(&self, u: f64, alpha: f64, beta: f64) -> f64 {
        let s = self.s(u, alpha);
        let z = self.z(u, alpha, beta);
        2.0 * self.a_sq * u * u * s * s + z * z - 1.0
    }

    pub(crate) fn f_u(&self, u: f64, alpha: f64, beta: f64) -> f64 {
        let s = self.s(u, alpha);
        let s_u = u * (1.0 - 2.0 * alpha);
        let z = self.z(u, alpha, beta);
        let z_u = self.z_u(u, alpha, beta);
        4.0 * self.a_sq * u * s * (s + u * s_u) + 2.0 * z * z_u
    }

    pub(crate) fn f_uu(&self, u: f64, alpha: f64, beta: f64) -> f64 {
        let u_sq = u * u;
        let s = self.s(u, alpha);
        let s_u = u * (1.0 - 2.0 * alpha);
        let s_uu = 1.0 - 2.0 * alpha;
        let z = self.z(u, alpha, beta);
        let z_u = self.z_u(u, alpha, beta);
        let q_uu = 1.0 + 3.0 * u_sq - 12.0 * alpha * u_sq;
        let b_uu = 3.0 * u_sq - 1.0;
        let z_uu = self.c * q_uu + beta * b_uu;
        4.0 * self.a_sq * (s * s + 4.0 * u * s * s_u + u_sq * (s_u * s_u + s * s_uu))
            + 2.0 * (z_u * z_u + z * z_uu)
    }

    pub(crate) fn f_alpha(&self, u: f64, alpha: f64, beta: f64) -> f64 {
        let u_sq = u * u;
        let s = self.s(u, alpha);
        let z = self.z(u, alpha, beta);
        4.0 * self.a_sq * u_sq * s * (1.0 - u_sq) + 2.0 * z * self.c * (1.0 - u_sq * u_sq)
    }

    pub(crate) fn f_beta(&self, u: f64, alpha: f64, beta: f64) -> f64 {
        let u_sq = u * u;
        let b = 0.25 * (1.0 - u_sq) * (1.0 - u_sq);
        2.0 * self.z(u, alpha, beta) * b
    }

    pub(crate) fn f_u_alpha(&self, u: f64, alpha: f64, beta: f64) -> f64 {
        let u_sq = u * u;
        let s = self.s(u, alpha);
        let s_u = u * (1.0 - 2.0 * alpha);
        let s_alpha = 1.0 - u_sq;
        let s_u_alpha = -2.0 * u;
        let z = self.z(u, alpha, beta);
        let z_u = self.z_u(u, alpha, beta);
        let z_alpha = self.c * (1.0 - u_sq * u_sq);
        let z_u_alpha = self.c * (-4.0 * u * u_sq);
        8.0 * self.a_sq * u * s * s_alpha
            + 4.0 * self.a_sq * u_sq * (s_alpha * s_u + s * s_u_alpha)
            + 2.0 * (z_alpha * z_u + z * z_u_alpha)
    }

    pub(crate) fn f_u_beta(&self, u: f64, alpha: f64, beta: f64) -> f64 {
        let u_sq = u * u;
        let b = 0.25 * (1.0 - u_sq) * (1.0 - u_sq);
        let b_u = u * u_sq - u;
        2.0 * (b * self.z_u(u, alpha, beta) + self.z(u, alpha, beta) * b_u)
    }
}

/// Error along the side `v = -1` of a square patch, in closed form.
/// Independent of `beta` (the center point never influences a boundary).
pub fn f_side(p: &SquareParams, u: f64, kind: ErrorKind) -> f64 {
    validate_square(p).expect("valid square parameters");
    apply_kind(SideRestriction::new(p.a).f(u, p.alpha), kind)
}

/// Error along the diagonal `v = u` of a square patch, in closed form.
pub fn f_diag(p: &SquareParams, u: f64, kind: ErrorKind) -> f64 {
    validate_square(p).expect("valid square parameters");
    apply_kind(DiagRestriction::new(p.a).f(u, p.alpha, p.beta), kind)
}

/// Error of a rectangular patch at `(u, v)`, in closed form:
/// with `S_i(t) = (1+t^2)/2 + alpha_i (1-t^2)`, `W(t) = (1-t^2)/2` and
/// `w = sqrt(1 - a^2 - b^2)`, the patch is
/// `p = (a u S2(v), b v S1(u), w S1(u) S2(v) + (beta - 4 w alpha1 alpha2) W(u) W(v))`.
pub fn f_rect(p: &RectParams, u: f64, v: f64, kind: ErrorKind) -> f64 {
    let w = validate_rect(p).expect("valid rectangle parameters");
    let s1 = 0.5 * (1.0 + u * u) + p.alpha1 * (1.0 - u * u);
    let s2 = 0.5 * (1.0 + v * v) + p.alpha2 * (1.0 - v * v);
    let wu = 0.5 * (1.0 - u * u);
    let wv = 0.5 * (1.0 - v * v);
    let x = p.a * u * s2;
    let y = p.b * v * s1;
    let z = w * s1 * s2 + (p.beta - 4.0 * w * p.alpha1 * p.alpha2) * wu * wv;
    apply_kind(x * x + y * y + z * z - 1.0, kind)
}
