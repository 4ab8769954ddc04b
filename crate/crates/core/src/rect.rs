//! Rectangular patches, where the optimum stops being unique.
//!
//! The `v = +-1` boundary error of a rectangle with half-sides `(a, b)`
//! depends on `a` and the edge weight `alpha1` alone (the boundary lies on
//! a circle whose radius soaks up `b`), so the boundary minimax fixes
//! `alpha1` exactly as in the square's side problem. The remaining freedom
//! `(alpha2, beta)` is only constrained by inequalities: the patch must not
//! exceed the boundary level anywhere else. For `b` below a threshold
//! `b_a` those inequalities carve out a whole triangle of optimal pairs --
//! every point of it attains the same maximum error. At `b = b_a` the
//! triangle degenerates to a point, and above it no pair keeps the interior
//! below the boundary level, so the optimum moves off this construction.

use crate::error::{Error, Result};
use crate::patch::{error_value, rect_net, ErrorKind, RectParams};
use crate::scan::{bisect, golden_max};
use crate::square::side_equioscillation;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::math::FloatShim;

/// Residual tolerance for the constraint-intersection solves.
pub const RESIDUAL_TOL: f64 = 1e-11;

/// Boundary solve: the edge weight making the long-side error equioscillate.
#[derive(Clone, Copy, Debug)]
pub struct BoundarySolve {
    pub alpha1: f64,
    /// Location of the interior boundary minimum (negative by convention;
    /// the profile is even).
    pub u0: f64,
    /// Balanced boundary level in the units of the error kind.
    pub max_abs_error: f64,
}

fn validate_rect_sides(a: f64, b: f64) -> Result<()> {
    // Delegate to the net constructor with neutral shape parameters.
    rect_net(&RectParams {
        a,
        b,
        alpha1: 1.0,
        alpha2: 1.0,
        beta: 1.0,
    })
    .map(|_| ())
}

/// Equioscillating edge weight for the `v = +-1` boundary of an `(a, b)`
/// rectangle. The solve is independent of `b`; `b` is validated only so
/// the pair describes a real patch.
pub fn solve_alpha1(a: f64, b: f64, kind: ErrorKind) -> Result<BoundarySolve> {
    validate_rect_sides(a, b)?;
    let bal = side_equioscillation(a, kind)?;
    Ok(BoundarySolve {
        alpha1: bal.alpha,
        u0: -bal.u_star,
        max_abs_error: bal.max_abs_error,
    })
}

/// The three constraints keeping the rest of the patch at or below the
/// boundary level, as functions of `(alpha2, beta)`:
///
/// * `c[0]`: outward slope at the boundary valley, `df/dv (u0, -1)` --
///   moving into the patch must not deepen the valley;
/// * `c[1]`: `f(0,-1) - f(0,0)` -- the patch center must not overshoot;
/// * `c[2]`: `f(0,-1) - f(-1,0)` -- the short-side midpoint must not
///   overshoot.
///
/// All three use the simplified error; the radial transform is monotone,
/// so the constraint boundary is the same for both kinds.
struct Constraints {
    template: RectParams,
    u0: f64,
}

impl Constraints {
    fn values(&self, alpha2: f64, beta: f64) -> [f64; 3] {
        let p = RectParams {
            alpha2,
            beta,
            ..self.template
        };
        let net = rect_net(&p).expect("sides validated, parameters finite");
        let k = error_value(&net, 0.0, -1.0, ErrorKind::Simplified);
        let pt = net.eval(self.u0, -1.0);
        let (_, pv) = net.partials(self.u0, -1.0);
        [
            2.0 * pt.dot(pv),
            k - error_value(&net, 0.0, 0.0, ErrorKind::Simplified),
            k - error_value(&net, -1.0, 0.0, ErrorKind::Simplified),
        ]
    }
}

fn solve_2x2(j: [[f64; 2]; 2], r: [f64; 2]) -> Option<[f64; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det.abs() < 1e-300 {
        return None;
    }
    Some([
        (-r[0] * j[1][1] + r[1] * j[0][1]) / det,
        (-r[1] * j[0][0] + r[0] * j[1][0]) / det,
    ])
}

/// Newton on two of the three constraints with a finite-difference
/// Jacobian. The constraints are quadratic in `(alpha2, beta)` and the
/// seeds come from their positive-branch linearizations, so convergence
/// takes a handful of steps.
fn intersect(
    cons: &Constraints,
    pick: [usize; 2],
    seed: [f64; 2],
) -> Result<([f64; 2], [f64; 3])> {
    let mut x = seed;
    for _ in 0..60 {
        let full = cons.values(x[0], x[1]);
        let r = [full[pick[0]], full[pick[1]]];
        if r[0].abs().max(r[1].abs()) <= RESIDUAL_TOL {
            return Ok((x, full));
        }
        let mut j = [[0.0; 2]; 2];
        for (col, xi) in x.iter().enumerate() {
            let h = 1e-7 * xi.abs().max(1e-7);
            let mut hi = x;
            hi[col] += h;
            let mut lo = x;
            lo[col] -= h;
            let fh = cons.values(hi[0], hi[1]);
            let fl = cons.values(lo[0], lo[1]);
            for row in 0..2 {
                j[row][col] = (fh[pick[row]] - fl[pick[row]]) / (2.0 * h);
            }
        }
        let step = solve_2x2(j, r).ok_or_else(|| Error::Solver {
            context: String::from("constraint intersection has a singular Jacobian"),
            residual: r[0].abs().max(r[1].abs()),
            iterations: 0,
        })?;
        x[0] += step[0];
        x[1] += step[1];
        if !(x[0].is_finite() && x[1].is_finite() && x[0].abs() + x[1].abs() < 1e3) {
            return Err(Error::Solver {
                context: String::from("constraint intersection diverged"),
                residual: f64::NAN,
                iterations: 0,
            });
        }
    }
    let full = cons.values(x[0], x[1]);
    let r = [full[pick[0]], full[pick[1]]];
    let rn = r[0].abs().max(r[1].abs());
    if rn <= 1e-9 {
        Ok((x, full))
    } else {
        Err(Error::Solver {
            context: String::from("constraint intersection stalled"),
            residual: rn,
            iterations: 60,
        })
    }
}

/// The triangle of `(alpha2, beta)` pairs cut out by the three constraints.
///
/// The constraints are necessary conditions, and measurement shows they are
/// not quite sufficient: near the slope/short-side vertex (`vertices[1]`)
/// the error can dip below the negative boundary level along the midline
/// `v = 0`, exceeding the shared minimax. `vertex_max_abs` records the
/// measured maximum at each vertex so the exception is visible in the
/// output rather than hidden.
#[derive(Clone, Debug)]
pub struct RectRegion {
    pub alpha1: f64,
    pub u0: f64,
    /// Pairwise constraint intersections, in the order
    /// `[c1&c2, c0&c2, c0&c1]` (each vertex is named by the two active
    /// constraints; the remaining one decides admissibility).
    pub vertices: [[f64; 2]; 3],
    pub centroid: [f64; 2],
    /// The max |error| shared across the region (kind units); attained on
    /// the `v = +-1` boundary, so independent of `(alpha2, beta)`.
    pub minimax: f64,
    /// All three constraint values at each vertex.
    pub vertex_residuals: [[f64; 3]; 3],
    /// Measured max |error| of the patch at each vertex (kind units).
    pub vertex_max_abs: [f64; 3],
    /// Measured max |error| of the patch at the centroid (kind units).
    pub centroid_max_abs: f64,
    /// Threshold `b_a` for this `a` when the scan locates one; the region
    /// is nonempty exactly for `b` below it.
    pub b_threshold: Option<f64>,
}

fn build_constraints(a: f64, b: f64, kind: ErrorKind) -> Result<(Constraints, f64)> {
    let bound = solve_alpha1(a, b, kind)?;
    let cons = Constraints {
        template: RectParams {
            a,
            b,
            alpha1: bound.alpha1,
            alpha2: 0.7,
            beta: 1.5,
        },
        u0: bound.u0,
    };
    Ok((cons, bound.max_abs_error))
}

fn vertex_seeds(cons: &Constraints) -> [[f64; 2]; 3] {
    let a = cons.template.a;
    let b = cons.template.b;
    let alpha1 = cons.template.alpha1;
    let w = (1.0 - a * a - b * b).sqrt();
    // The boundary level K = f(0,-1) is independent of (alpha2, beta).
    let net = rect_net(&cons.template).expect("validated");
    let k = error_value(&net, 0.0, -1.0, ErrorKind::Simplified);
    let sk = (1.0 + k).sqrt();

    // Positive-branch linearizations: c2 = 0 is the vertical line
    // alpha2 = sqrt((1+K)/(1-b^2)) - 1/2; c1 = 0 the line
    // beta = 4 sqrt(1+K) - w (1 + 2 alpha1 + 2 alpha2); c0 is affine.
    let a2_line = ((1.0 + k) / (1.0 - b * b)).sqrt() - 0.5;
    let beta_line = |a2: f64| 4.0 * sk - w * (1.0 + 2.0 * alpha1 + 2.0 * a2);
    let c00 = cons.values(0.0, 0.0)[0];
    let ca = cons.values(1.0, 0.0)[0] - c00;
    let cb = cons.values(0.0, 1.0)[0] - c00;

    let v12 = [a2_line, beta_line(a2_line)];
    let v02 = [a2_line, -(c00 + ca * a2_line) / cb];
    let x01 = -(c00 + cb * (4.0 * sk - w * (1.0 + 2.0 * alpha1))) / (ca - 2.0 * w * cb);
    let v01 = [x01, beta_line(x01)];
    [v12, v02, v01]
}

/// Solve for the triangle of optimal `(alpha2, beta)` pairs of an `(a, b)`
/// rectangle. Returns `Ok(None)` when the triangle is empty (that is,
/// `b > b_a`): some vertex then violates its off constraint, meaning no
/// pair keeps the interior under the boundary level.
pub fn region_vertices(a: f64, b: f64, kind: ErrorKind) -> Result<Option<RectRegion>> {
    let (cons, level) = build_constraints(a, b, kind)?;
    let seeds = vertex_seeds(&cons);
    let picks = [[1usize, 2], [0, 2], [0, 1]];

    let mut vertices = [[0.0; 2]; 3];
    let mut residuals = [[0.0; 3]; 3];
    for (i, (pick, seed)) in picks.iter().zip(seeds).enumerate() {
        let (v, full) = intersect(&cons, *pick, seed)?;
        vertices[i] = v;
        residuals[i] = full;
    }

    let admissible = residuals
        .iter()
        .all(|r| r.iter().all(|&c| c >= -1e-10));
    if !admissible {
        return Ok(None);
    }

    let centroid = [
        (vertices[0][0] + vertices[1][0] + vertices[2][0]) / 3.0,
        (vertices[0][1] + vertices[1][1] + vertices[2][1]) / 3.0,
    ];
    let measure = |pair: [f64; 2]| {
        let p = RectParams {
            alpha2: pair[0],
            beta: pair[1],
            ..cons.template
        };
        max_abs_error(&p, kind, 301)
    };
    let vertex_max_abs = [
        measure(vertices[0])?,
        measure(vertices[1])?,
        measure(vertices[2])?,
    ];
    let centroid_max_abs = measure(centroid)?;
    // The threshold is auxiliary context here; a failed scan leaves it out.
    let b_threshold = solve_threshold(a, kind).ok().flatten().map(|t| t.b);
    Ok(Some(RectRegion {
        alpha1: cons.template.alpha1,
        u0: cons.u0,
        vertices,
        centroid,
        minimax: level,
        vertex_residuals: residuals,
        vertex_max_abs,
        centroid_max_abs,
        b_threshold,
    }))
}

/// The rectangle shape at which the optimal region degenerates to a point.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdTriple {
    /// Critical second half-side `b_a`.
    pub b: f64,
    /// The unique optimal pair at the threshold.
    pub alpha2: f64,
    pub beta: f64,
    /// Infinity norm of the three constraint values at the triple.
    pub residual: f64,
}

fn gauss3(mut m: [[f64; 4]; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).expect("finite")
        })?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let factor = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// Find the threshold `b_a` for half-side `a`: the largest `b` whose
/// optimal region is nonempty. Scans the admissible range for the sign
/// change of the slope constraint along the `c1 = c2 = 0` vertex path,
/// bisects it, then polishes `(b, alpha2, beta)` on the full system.
/// Returns `Ok(None)` if the region stays nonempty over the whole range.
pub fn solve_threshold(a: f64, kind: ErrorKind) -> Result<Option<ThresholdTriple>> {
    if !(a.is_finite() && a > 0.0 && a < 1.0) {
        return Err(Error::Parameter(format!(
            "half-side a must satisfy 0 < a < 1, got {a}"
        )));
    }
    let b_hi = a.min((1.0 - a * a).sqrt());

    // c0 along the vertex path where the center and short-side constraints
    // are both active.
    let slope_at = |b: f64| -> Result<f64> {
        let (cons, _) = build_constraints(a, b, kind)?;
        let seed = vertex_seeds(&cons)[0];
        let (_, full) = intersect(&cons, [1, 2], seed)?;
        Ok(full[0])
    };

    // Scan for a sign change between consecutive points where the vertex
    // solve converges (isolated failures near the range ends are skipped).
    const N: usize = 160;
    let grid_b = |k: usize| b_hi * (k as f64 + 0.5) / (N as f64 + 1.0);
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for k in 0..=N {
        let b = grid_b(k);
        let Ok(cur) = slope_at(b) else {
            prev = None;
            continue;
        };
        if let Some((pb, pm)) = prev {
            if pm.signum() != cur.signum() {
                bracket = Some((pb, b));
                break;
            }
        }
        prev = Some((b, cur));
    }
    let Some((lo, hi)) = bracket else {
        return Ok(None);
    };

    let mut f = |b: f64| slope_at(b).unwrap_or(f64::NAN);
    let b_root = bisect(&mut f, lo, hi).ok_or_else(|| Error::Solver {
        context: String::from("threshold bisection lost its bracket"),
        residual: f64::NAN,
        iterations: 0,
    })?;

    // Polish on the full three-constraint system in (b, alpha2, beta).
    let (cons, _) = build_constraints(a, b_root, kind)?;
    let seed2 = vertex_seeds(&cons)[0];
    let (v, _) = intersect(&cons, [1, 2], seed2)?;
    let mut x = [b_root, v[0], v[1]];
    let eval = |x: [f64; 3]| -> Result<[f64; 3]> {
        let (cons, _) = build_constraints(a, x[0], kind)?;
        Ok(cons.values(x[1], x[2]))
    };
    let mut residual = f64::INFINITY;
    for _ in 0..40 {
        let r = eval(x)?;
        residual = r[0].abs().max(r[1].abs()).max(r[2].abs());
        if residual <= RESIDUAL_TOL {
            break;
        }
        let mut m = [[0.0f64; 4]; 3];
        for col in 0..3 {
            let h = 1e-7 * x[col].abs().max(1e-7);
            let mut hi_x = x;
            hi_x[col] += h;
            let mut lo_x = x;
            lo_x[col] -= h;
            let fh = eval(hi_x)?;
            let fl = eval(lo_x)?;
            for row in 0..3 {
                m[row][col] = (fh[row] - fl[row]) / (2.0 * h);
            }
        }
        for row in 0..3 {
            m[row][3] = -r[row];
        }
        let step = gauss3(m).ok_or_else(|| Error::Solver {
            context: String::from("threshold polish has a singular Jacobian"),
            residual,
            iterations: 0,
        })?;
        for (xi, s) in x.iter_mut().zip(step) {
            *xi += s;
        }
        if !(x[0] > 0.0 && x[0] < b_hi * 1.5) {
            return Err(Error::Solver {
                context: String::from("threshold polish left the admissible range"),
                residual,
                iterations: 0,
            });
        }
    }
    if residual > 1e-9 {
        return Err(Error::Solver {
            context: String::from("threshold polish stalled"),
            residual,
            iterations: 40,
        });
    }
    Ok(Some(ThresholdTriple {
        b: x[0],
        alpha2: x[1],
        beta: x[2],
        residual,
    }))
}

/// Threshold `b_a` for each half-side in `a_values` (`None` where the
/// region never empties on the admissible range).
pub fn scan_multioptimum_domain(
    a_values: &[f64],
    kind: ErrorKind,
) -> Result<Vec<(f64, Option<f64>)>> {
    a_values
        .iter()
        .map(|&a| Ok((a, solve_threshold(a, kind)?.map(|t| t.b))))
        .collect()
}

/// Maximum |error| of a rectangular patch over the whole parameter square,
/// on an `n_uv`-odd grid (quadrant, by symmetry) with golden refinement
/// around the best node.
pub fn max_abs_error(p: &RectParams, kind: ErrorKind, n_uv: usize) -> Result<f64> {
    let net = rect_net(p)?;
    if n_uv < 3 || n_uv % 2 == 0 {
        return Err(Error::Parameter(format!(
            "n_uv must be odd and at least 3, got {n_uv}"
        )));
    }
    let m = (n_uv + 1) / 2;
    let at = |k: usize| k as f64 / (m - 1) as f64;
    let mut best = (0usize, 0usize, f64::NEG_INFINITY);
    for i in 0..m {
        for j in 0..m {
            let e = error_value(&net, at(i), at(j), kind).abs();
            if e > best.2 {
                best = (i, j, e);
            }
        }
    }
    let (bi, bj, raw) = best;
    let mut u = at(bi);
    let mut v = at(bj);
    let mut refined = raw;
    // Two rounds of coordinate-wise golden refinement around the best node.
    for _ in 0..2 {
        let lo_u = at(bi.saturating_sub(1));
        let hi_u = at((bi + 1).min(m - 1));
        if hi_u > lo_u {
            let (uu, val) = golden_max(&mut |t| error_value(&net, t, v, kind).abs(), lo_u, hi_u);
            if val > refined {
                refined = val;
                u = uu;
            }
        }
        let lo_v = at(bj.saturating_sub(1));
        let hi_v = at((bj + 1).min(m - 1));
        if hi_v > lo_v {
            let (vv, val) = golden_max(&mut |t| error_value(&net, u, t, kind).abs(), lo_v, hi_v);
            if val > refined {
                refined = val;
                v = vv;
            }
        }
    }
    Ok(refined.max(raw))
}
