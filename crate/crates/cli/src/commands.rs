//! The five subcommand implementations.
//!
//! Output conventions: CSV carries errors with 6 significant digits and
//! shape parameters with 4 decimals (the granularity they are quoted at
//! elsewhere); JSON carries full precision. All numeric output is
//! locale-independent ('.' decimal separator).

use std::fs;
use std::path::Path;

use quadsphere::assembly::{assemble_g0, assemble_g1};
use quadsphere::patch::{error_value, A_MAX};
use quadsphere::rect::{region_vertices, solve_alpha1, solve_threshold, RESIDUAL_TOL};
use quadsphere::square::{optimize_square, property_checks, verify_extrema_on_angle};
use quadsphere::ErrorKind;
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::{Failure, SplineFlag};

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: u32 = 50;

fn kind_name(kind: ErrorKind) -> &'static str {
    match kind {
        ErrorKind::Radial => "radial",
        ErrorKind::Simplified => "simplified",
    }
}

#[derive(Serialize)]
struct OptimizeReport {
    schema: u32,
    command: &'static str,
    ok: bool,
    a: f64,
    error: &'static str,
    tol: f64,
    alpha: f64,
    beta: f64,
    u_m: f64,
    max_error: f64,
    residual: f64,
    iterations: u32,
    condition: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

#[derive(Serialize)]
struct OptimizeDiagnostic {
    schema: u32,
    command: &'static str,
    ok: bool,
    a: f64,
    error: &'static str,
    tol: f64,
    message: String,
}

pub fn optimize(a: f64, kind: ErrorKind, tol: f64, json: Option<&Path>) -> Result<(), Failure> {
    let result = match optimize_square(a, kind, tol, NEWTON_MAX_ITER) {
        Ok(r) => r,
        Err(e) => {
            let diag = OptimizeDiagnostic {
                schema: 1,
                command: "optimize",
                ok: false,
                a,
                error: kind_name(kind),
                tol,
                message: e.to_string(),
            };
            println!("{}", serde_json::to_string_pretty(&diag).expect("diagnostic serializes"));
            return Err(e.into());
        }
    };
    let report = OptimizeReport {
        schema: 1,
        command: "optimize",
        ok: true,
        a,
        error: kind_name(kind),
        tol,
        alpha: result.params.alpha,
        beta: result.params.beta,
        u_m: result.u_m,
        max_error: result.max_error,
        residual: result.residual,
        iterations: result.iterations,
        condition: result.condition,
        warning: result.warning.clone(),
    };
    let body = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{body}");
    if let Some(path) = json {
        fs::write(path, body + "\n")?;
        RunManifest::new("optimize")
            .parameter("a", a)
            .parameter("error", kind_name(kind))
            .parameter("tol", tol)
            .parameter("json", path.display().to_string())
            .tolerance("newton_tol", tol)
            .output(path)
            .write_next_to(path)?;
    }
    Ok(())
}

pub fn table(levels: u32, kind: ErrorKind, csv: &Path) -> Result<(), Failure> {
    if !(2..=12).contains(&levels) {
        return Err(Failure::Error(format!(
            "levels must lie in [2, 12] (a rate needs two rows; past twelve halvings \
             the optimum sinks under double precision), got {levels}"
        )));
    }
    let mut out = String::from("a,alpha,beta,error,rate\n");
    let mut prev: Option<(f64, f64)> = None;
    let mut failures = 0u32;
    for level in 0..levels {
        let a = A_MAX / f64::powi(2.0, level as i32);
        match optimize_square(a, kind, NEWTON_TOL, NEWTON_MAX_ITER) {
            Ok(r) => {
                let rate = prev
                    .map(|(pa, pe)| (pe / r.max_error).ln() / (pa / a).ln())
                    .map(|r| format!("{r:.2}"))
                    .unwrap_or_default();
                out += &format!(
                    "{a:.16e},{:.4},{:.4},{:.5e},{rate}\n",
                    r.params.alpha, r.params.beta, r.max_error
                );
                prev = Some((a, r.max_error));
            }
            Err(e) => {
                // Keep the row (so levels stay aligned) but leave it blank,
                // and keep going; the run still exits nonzero.
                eprintln!("level {level} (a = {a:.6e}): {e}");
                out += &format!("{a:.16e},,,,\n");
                prev = None;
                failures += 1;
            }
        }
    }
    fs::write(csv, &out)?;
    RunManifest::new("table")
        .parameter("levels", levels)
        .parameter("error", kind_name(kind))
        .parameter("csv", csv.display().to_string())
        .tolerance("newton_tol", NEWTON_TOL)
        .output(csv)
        .write_next_to(csv)?;
    println!("wrote {levels} rows to {}", csv.display());
    if failures > 0 {
        return Err(Failure::Error(format!("{failures} of {levels} rows failed to solve")));
    }
    Ok(())
}

/// The per-vertex error CSV lands next to the OBJ, extension swapped.
fn mesh_csv_path(obj: &Path) -> std::path::PathBuf {
    let mut csv = obj.with_extension("csv");
    if csv == obj {
        csv = obj.with_extension("errors.csv");
    }
    csv
}

pub fn mesh(flag: SplineFlag, samples: usize, obj: &Path) -> Result<(), Failure> {
    if !(2..=2048).contains(&samples) {
        return Err(Failure::Error(format!(
            "samples must lie in [2, 2048], got {samples}"
        )));
    }
    let spline = match flag {
        SplineFlag::Two => assemble_g0(2, ErrorKind::Radial)?,
        SplineFlag::Six => assemble_g0(6, ErrorKind::Radial)?,
        SplineFlag::G1 => assemble_g1(),
    };
    let n = samples;
    let verts_per_patch = (n + 1) * (n + 1);
    let mut mesh_text = String::new();
    let mut csv_text = String::from("vertex,patch,u,v,radial_error\n");
    let mut vertex = 0usize;
    for (p, patch) in spline.patches.iter().enumerate() {
        mesh_text += &format!("g patch{p}\n");
        for j in 0..=n {
            let v = -1.0 + 2.0 * j as f64 / n as f64;
            for i in 0..=n {
                let u = -1.0 + 2.0 * i as f64 / n as f64;
                let pt = patch.net.eval(u, v);
                vertex += 1;
                mesh_text += &format!("v {} {} {}\n", pt.x, pt.y, pt.z);
                let g = error_value(&patch.net, u, v, ErrorKind::Radial);
                csv_text += &format!("{vertex},{p},{u},{v},{g:.5e}\n");
            }
        }
        // Quads, counter-clockwise seen from outside the sphere (the net's
        // u-then-v ordering is right-handed with the outward normal).
        let base = p * verts_per_patch;
        for j in 0..n {
            for i in 0..n {
                let v1 = base + j * (n + 1) + i + 1;
                let v2 = v1 + 1;
                let v3 = v2 + n + 1;
                let v4 = v1 + n + 1;
                mesh_text += &format!("f {v1} {v2} {v3} {v4}\n");
            }
        }
    }
    let csv = mesh_csv_path(obj);
    fs::write(obj, &mesh_text)?;
    fs::write(&csv, &csv_text)?;
    RunManifest::new("mesh")
        .parameter("spline", match flag {
            SplineFlag::Two => "two",
            SplineFlag::Six => "six",
            SplineFlag::G1 => "g1",
        })
        .parameter("samples", samples as u64)
        .parameter("obj", obj.display().to_string())
        .tolerance("newton_tol", NEWTON_TOL)
        .output(obj)
        .output(&csv)
        .write_next_to(obj)?;
    println!(
        "wrote {} patches ({} vertices) to {} with errors in {}",
        spline.patches.len(),
        vertex,
        obj.display(),
        csv.display()
    );
    Ok(())
}

pub fn rect(a: f64, b: f64, csv: &Path) -> Result<(), Failure> {
    if !(a.is_finite() && b.is_finite()) || b > a {
        return Err(Failure::Error(format!(
            "half-sides must be finite with b <= a (the first axis is the long one), \
             got a = {a}, b = {b}"
        )));
    }
    let kind = ErrorKind::Radial;
    let bound = solve_alpha1(a, b, kind)?;
    let region = region_vertices(a, b, kind)?;
    let threshold = match &region {
        Some(r) => r.b_threshold,
        None => solve_threshold(a, kind)?.map(|t| t.b),
    };

    let mut out = String::from("label,value,alpha2,beta,slope,center,corner,max_abs_error\n");
    out += &format!("alpha1,{:.4},,,,,,\n", bound.alpha1);
    out += &format!("u0,{:.4},,,,,,\n", bound.u0);
    out += &format!("boundary_level,{:.5e},,,,,,\n", bound.max_abs_error);
    match threshold {
        Some(t) => out += &format!("threshold_b,{t:.4},,,,,,\n"),
        None => out += "threshold_b,,,,,,,\n",
    }
    match &region {
        Some(r) => {
            // Each vertex is named by its two active constraints; the
            // residual columns hold all three constraint values there.
            let names = ["vertex_center_corner", "vertex_slope_corner", "vertex_slope_center"];
            for (i, name) in names.iter().enumerate() {
                out += &format!(
                    "{name},,{:.4},{:.4},{:.5e},{:.5e},{:.5e},{:.5e}\n",
                    r.vertices[i][0],
                    r.vertices[i][1],
                    r.vertex_residuals[i][0],
                    r.vertex_residuals[i][1],
                    r.vertex_residuals[i][2],
                    r.vertex_max_abs[i]
                );
            }
            out += &format!(
                "centroid,,{:.4},{:.4},,,,{:.5e}\n",
                r.centroid[0], r.centroid[1], r.centroid_max_abs
            );
        }
        None => out += "region,empty,,,,,,\n",
    }
    fs::write(csv, &out)?;
    RunManifest::new("rect")
        .parameter("a", a)
        .parameter("b", b)
        .parameter("region", true)
        .parameter("csv", csv.display().to_string())
        .tolerance("newton_tol", NEWTON_TOL)
        .tolerance("constraint_tol", RESIDUAL_TOL)
        .output(csv)
        .write_next_to(csv)?;
    match region {
        Some(_) => println!("wrote the optimal region for ({a}, {b}) to {}", csv.display()),
        None => println!(
            "no multi-optimum region at ({a}, {b}); wrote the empty-region marker to {}",
            csv.display()
        ),
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckReport {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    command: &'static str,
    a: f64,
    grid: usize,
    pass: bool,
    checks: Vec<CheckReport>,
}

pub fn verify(a: f64, grid: usize, json: Option<&Path>) -> Result<(), Failure> {
    if grid < 101 || grid % 2 == 0 {
        return Err(Failure::Error(format!(
            "grid must be odd and at least 101, got {grid}"
        )));
    }
    let mut checks = Vec::new();
    // Extremum locations on the dense grid, at the requested resolution,
    // for both error measures.
    for kind in [ErrorKind::Simplified, ErrorKind::Radial] {
        let opt = optimize_square(a, kind, NEWTON_TOL, NEWTON_MAX_ITER)?;
        let rep = verify_extrema_on_angle(&opt, grid)?;
        checks.push(CheckReport {
            name: format!("angle-extrema-{}", kind_name(kind)),
            pass: rep.pass,
            detail: format!(
                "full [{:.6e}, {:.6e}] vs side+diagonal [{:.6e}, {:.6e}] at {grid}^2",
                rep.full_min, rep.full_max, rep.angle_min, rep.angle_max
            ),
        });
    }
    // The property suite: closed forms, balance, monotonicity, brackets,
    // the interior-extremum certificate, and the brute-force oracle.
    for check in property_checks(a)? {
        checks.push(CheckReport {
            name: check.name.to_string(),
            pass: check.pass,
            detail: check.detail,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        schema: 1,
        command: "verify",
        a,
        grid,
        pass,
        checks,
    };
    let body = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{body}");
    if let Some(path) = json {
        fs::write(path, body + "\n")?;
        RunManifest::new("verify")
            .parameter("a", a)
            .parameter("grid", grid as u64)
            .parameter("json", path.display().to_string())
            .tolerance("newton_tol", NEWTON_TOL)
            .output(path)
            .write_next_to(path)?;
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}
