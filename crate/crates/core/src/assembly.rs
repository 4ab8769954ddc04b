//! Sphere covers stitched from rotated copies of one square patch.
//!
//! Two corner-continuous covers: two hemisphere patches (`a = sqrt(2)/2`)
//! glued along the equator, and six cube-face patches (`a = sqrt(3)/3`).
//! Both share whole boundary curves, so they are positionally continuous;
//! normals kink across edges.
//!
//! The third cover trades optimal error for smoothness: with `a = sqrt(3)/3`,
//! `alpha = 3/4` and `beta = 7 sqrt(3)/6` the six patches meet with a shared
//! tangent plane along every edge (and at the corners, where the normal
//! aligns with the cube-vertex direction). [`recover_g1_constants`] derives
//! that pair numerically from the tangent-plane conditions instead of
//! trusting the constants.

use crate::error::{Error, Result};
use crate::patch::{error_value, square_net, ControlNet, ErrorKind, SquareParams, A_MAX};
use crate::scan::bisect;
use crate::square::optimize_square;
use crate::vec3::{Mat3, Vec3};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::math::FloatShim;

/// Edge weight of the tangent-continuous six-patch cover.
pub const ALPHA_G1: f64 = 0.75;
/// Center height of the tangent-continuous six-patch cover: `7 sqrt(3)/6`.
pub const BETA_G1: f64 = 2.020_725_942_163_690_3;

/// Tolerance for matching patch corners into shared edges.
pub const CORNER_MATCH_TOL: f64 = 1e-9;
/// Position agreement required along shared edges.
pub const POSITION_TOL: f64 = 1e-12;
/// Normal-line agreement (radians) required along shared edges of a
/// tangent-continuous cover.
pub const NORMAL_ANGLE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Continuity {
    /// Patches share boundary curves; normals may kink across them.
    G0,
    /// Patches also share tangent planes along boundaries.
    G1,
}

#[derive(Clone, Debug)]
pub struct SpherePatch {
    /// Rotation carrying the base patch (centered on `+z`) here.
    pub rotation: Mat3,
    pub net: ControlNet,
}

#[derive(Clone, Debug)]
pub struct SphereSpline {
    pub patches: Vec<SpherePatch>,
    pub continuity: Continuity,
    /// Parameters of the base patch every patch is a rotation of.
    pub params: SquareParams,
    /// Maximum |radial error| over the sphere.
    pub max_radial_error: f64,
}

fn rotate_net(net: &ControlNet, r: Mat3) -> ControlNet {
    let mut points = net.points;
    for row in &mut points {
        for p in row.iter_mut() {
            *p = r.apply(*p);
        }
    }
    ControlNet { points }
}

/// The identity and the half-turn about `x` (hemispheres on `+z` and `-z`).
fn rotations_two() -> Vec<Mat3> {
    vec![
        Mat3::IDENTITY,
        Mat3([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]),
    ]
}

/// Rotations carrying `+z` to the six cube-face directions, in the order
/// `+z, +x, -x, +y, -y, -z`. All entries are exact, so rotated nets agree
/// bitwise with sign-flipped coordinates.
fn rotations_six() -> Vec<Mat3> {
    vec![
        Mat3::IDENTITY,
        Mat3([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]]),
        Mat3([[0.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]),
        Mat3([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]]),
        Mat3([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]),
        Mat3([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]),
    ]
}

fn build(params: SquareParams, rotations: Vec<Mat3>, continuity: Continuity) -> Result<SphereSpline> {
    let base = square_net(&params)?;
    let patches = rotations
        .into_iter()
        .map(|rotation| SpherePatch {
            rotation,
            net: rotate_net(&base, rotation),
        })
        .collect();
    // Rotations with 0/+-1 entries preserve |p| exactly, so the base patch
    // carries the error bound for the whole cover. For a corner-balanced
    // optimum the extreme simplified errors are +-E, hence the radial
    // maximum is 1 - sqrt(1 - E); for the tangent-continuous patch the
    // maximum sits at the patch center.
    Ok(SphereSpline {
        max_radial_error: 0.0, // set by callers
        patches,
        continuity,
        params,
    })
}

/// Corner-continuous cover from `patch_count` (2 or 6) optimal patches of
/// the given error kind.
pub fn assemble_g0(patch_count: usize, kind: ErrorKind) -> Result<SphereSpline> {
    let (a, rotations) = match patch_count {
        2 => (A_MAX, rotations_two()),
        6 => ((1.0f64 / 3.0).sqrt(), rotations_six()),
        n => {
            return Err(Error::Parameter(format!(
                "a sphere cover uses 2 or 6 patches, got {n}"
            )))
        }
    };
    let opt = optimize_square(a, kind, 1e-12, 50)?;
    let max_radial_error = match kind {
        ErrorKind::Radial => opt.max_error,
        ErrorKind::Simplified => 1.0 - (1.0 - opt.max_error).sqrt(),
    };
    let mut spline = build(opt.params, rotations, Continuity::G0)?;
    spline.max_radial_error = max_radial_error;
    Ok(spline)
}

/// The tangent-continuous six-patch cover. Its radial error is maximal at
/// the patch centers: `(5 sqrt(3) - 8)/8`, about 0.0825 -- nearly six times
/// the optimal six-patch error, the price of smoothness.
pub fn assemble_g1() -> SphereSpline {
    let params = SquareParams {
        a: (1.0f64 / 3.0).sqrt(),
        alpha: ALPHA_G1,
        beta: BETA_G1,
    };
    let mut spline =
        build(params, rotations_six(), Continuity::G1).expect("tangent-continuous parameters are valid");
    let base = &spline.patches[0].net;
    spline.max_radial_error = error_value(base, 0.0, 0.0, ErrorKind::Radial).abs();
    spline
}

#[derive(Clone, Copy, Debug)]
pub struct ContinuityReport {
    pub shared_edges: usize,
    pub max_position_gap: f64,
    /// Worst normal-line angle across shared edges; populated for
    /// tangent-continuous covers.
    pub max_normal_angle: Option<f64>,
    pub pass: bool,
}

// Side encoding: 0: v=-1, 1: u=+1, 2: v=+1, 3: u=-1; each edge is
// parameterized by t in [-1, 1].
fn edge_param(side: usize, t: f64) -> (f64, f64) {
    match side {
        0 => (t, -1.0),
        1 => (1.0, t),
        2 => (t, 1.0),
        _ => (-1.0, t),
    }
}

fn edge_corners(net: &ControlNet, side: usize) -> (Vec3, Vec3) {
    let (u0, v0) = edge_param(side, -1.0);
    let (u1, v1) = edge_param(side, 1.0);
    (net.eval(u0, v0), net.eval(u1, v1))
}

#[derive(Clone, Copy)]
struct EdgePair {
    patch_a: usize,
    side_a: usize,
    patch_b: usize,
    side_b: usize,
    reversed: bool,
}

fn match_edges(patches: &[SpherePatch]) -> Result<Vec<EdgePair>> {
    let mut corners = Vec::new();
    for (pi, p) in patches.iter().enumerate() {
        for side in 0..4 {
            let (c0, c1) = edge_corners(&p.net, side);
            corners.push((pi, side, c0, c1));
        }
    }
    let close = |p: Vec3, q: Vec3| (p - q).norm() <= CORNER_MATCH_TOL;
    let mut pairs = Vec::new();
    let mut partner_count = vec![0usize; corners.len()];
    for i in 0..corners.len() {
        for j in i + 1..corners.len() {
            let (pa, sa, a0, a1) = corners[i];
            let (pb, sb, b0, b1) = corners[j];
            if pa == pb {
                continue;
            }
            let same = close(a0, b0) && close(a1, b1);
            let rev = close(a0, b1) && close(a1, b0);
            if same || rev {
                partner_count[i] += 1;
                partner_count[j] += 1;
                pairs.push(EdgePair {
                    patch_a: pa,
                    side_a: sa,
                    patch_b: pb,
                    side_b: sb,
                    reversed: rev && !same,
                });
            }
        }
    }
    if let Some(k) = partner_count.iter().position(|&c| c != 1) {
        let (pi, side, ..) = corners[k];
        return Err(Error::Topology(format!(
            "edge {side} of patch {pi} has {} partners, expected exactly 1",
            partner_count[k]
        )));
    }
    Ok(pairs)
}

/// Measure positional (and, for tangent-continuous covers, normal)
/// agreement along every shared edge, at `samples` points per edge.
pub fn check_continuity(spline: &SphereSpline, samples: usize) -> Result<ContinuityReport> {
    if samples < 2 || samples > 1_000_000 {
        return Err(Error::Parameter(format!(
            "samples per edge must lie in [2, 1e6], got {samples}"
        )));
    }
    let pairs = match_edges(&spline.patches)?;

    let mut max_gap = 0.0f64;
    let mut max_angle = 0.0f64;
    let want_normals = spline.continuity == Continuity::G1;
    for pair in &pairs {
        let net_a = &spline.patches[pair.patch_a].net;
        let net_b = &spline.patches[pair.patch_b].net;
        for k in 0..samples {
            let t = -1.0 + 2.0 * k as f64 / (samples - 1) as f64;
            let tb = if pair.reversed { -t } else { t };
            let (ua, va) = edge_param(pair.side_a, t);
            let (ub, vb) = edge_param(pair.side_b, tb);
            let gap = (net_a.eval(ua, va) - net_b.eval(ub, vb)).norm();
            max_gap = max_gap.max(gap);
            if want_normals {
                let na = net_a.normal(ua, va);
                let nb = net_b.normal(ub, vb);
                max_angle = max_angle.max(na.line_angle(nb));
            }
        }
    }

    let pass = max_gap <= POSITION_TOL && (!want_normals || max_angle <= NORMAL_ANGLE_TOL);
    Ok(ContinuityReport {
        shared_edges: pairs.len(),
        max_position_gap: max_gap,
        max_normal_angle: want_normals.then_some(max_angle),
        pass,
    })
}

/// Derive the tangent-continuous pair `(alpha, beta)` from the continuity
/// conditions themselves, via bisection on generic net evaluations:
///
/// * `alpha`: at the corner `(-1,-1)` the surface normal must align with
///   the cube-vertex direction `(-1,-1,1)`, i.e. its `x` and `z`
///   components must cancel.
/// * `beta`: along the shared edge `u = 1`, the normal must stay in the
///   plane spanned by the edge's two endpoints (shared with the adjacent
///   patch); imposing it at the edge midpoint pins `beta`.
pub fn recover_g1_constants() -> Result<(f64, f64)> {
    let a = (1.0f64 / 3.0).sqrt();
    let mut corner_mismatch = |alpha: f64| {
        let net = square_net(&SquareParams { a, alpha, beta: 2.0 })
            .expect("valid parameters"); // beta does not reach the corner normal
        let n = net.normal(-1.0, -1.0);
        n.x + n.z
    };
    let alpha = bisect(&mut corner_mismatch, 0.6, 0.9).ok_or_else(|| Error::Solver {
        context: String::from("corner-normal bracket failed"),
        residual: f64::NAN,
        iterations: 0,
    })?;

    let mut edge_mismatch = |beta: f64| {
        let net = square_net(&SquareParams { a, alpha, beta }).expect("valid parameters");
        let m = net.eval(1.0, -1.0).cross(net.eval(1.0, 1.0));
        net.normal(1.0, 0.0).dot(m)
    };
    let beta = bisect(&mut edge_mismatch, 1.0, 3.0).ok_or_else(|| Error::Solver {
        context: String::from("edge tangent-plane bracket failed"),
        residual: f64::NAN,
        iterations: 0,
    })?;
    Ok((alpha, beta))
}
