//! Deterministic 1-D extremum location: coarse grid plus golden-section
//! refinement of every bracketed local extremum. Shared by the optimizer
//! post-checks, the comparator construction, and the grid reports.

/// Golden-section maximization of `f` on `[lo, hi]`. 80 iterations shrink
/// the bracket below 1e-16 of its width, so the returned argument is
/// limited only by the flatness of `f` near the maximum.
pub(crate) fn golden_max(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Extrema1D {
    pub max_arg: f64,
    pub max_val: f64,
    pub min_arg: f64,
    pub min_val: f64,
}

/// Extremes of `f` over `[lo, hi]`: sample `n` equispaced points, then
/// golden-refine every interior local maximum and minimum of the samples.
/// Endpoint extremes are kept as sampled (the callers' profiles vanish or
/// are non-extremal there, but correctness does not depend on that).
pub(crate) fn extrema_1d(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64, n: usize) -> Extrema1D {
    debug_assert!(n >= 3);
    let h = (hi - lo) / (n - 1) as f64;
    let at = |k: usize| lo + h * k as f64;
    let mut vals = alloc::vec::Vec::with_capacity(n);
    for k in 0..n {
        vals.push(f(at(k)));
    }

    let mut out = Extrema1D {
        max_arg: lo,
        max_val: vals[0],
        min_arg: lo,
        min_val: vals[0],
    };
    let take = |arg: f64, val: f64, out: &mut Extrema1D| {
        if val > out.max_val {
            out.max_val = val;
            out.max_arg = arg;
        }
        if val < out.min_val {
            out.min_val = val;
            out.min_arg = arg;
        }
    };
    for k in 1..n {
        take(at(k), vals[k], &mut out);
    }
    for k in 1..n - 1 {
        if vals[k] >= vals[k - 1] && vals[k] >= vals[k + 1] {
            let (x, v) = golden_max(f, at(k - 1), at(k + 1));
            take(x, v, &mut out);
        }
        if vals[k] <= vals[k - 1] && vals[k] <= vals[k + 1] {
            let mut neg = |x: f64| -f(x);
            let (x, v) = golden_max(&mut neg, at(k - 1), at(k + 1));
            take(x, -v, &mut out);
        }
    }
    out
}

/// Bisection root of `f` on `[lo, hi]`; the endpoint values must have
/// opposite signs. Runs to fixed-point width, deterministic.
pub(crate) fn bisect(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64) -> Option<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break; // interval collapsed to adjacent floats
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let mut f = |x: f64| 1.0 - (x - 0.3) * (x - 0.3);
        let (x, v) = golden_max(&mut f, -1.0, 1.0);
        assert!((x - 0.3).abs() < 1e-8);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extrema_refines_interior_extremes() {
        // max at x = -1/sqrt(3), min at 1/sqrt(3) for x^3 - x.
        let mut f = |x: f64| x * x * x - x;
        let e = extrema_1d(&mut f, -1.0, 1.0, 51);
        let x0 = 1.0 / 3.0f64.sqrt();
        let v0 = x0 * x0 * x0 - x0;
        assert!((e.max_arg + x0).abs() < 1e-7);
        assert!((e.max_val + v0).abs() < 1e-14);
        assert!((e.min_arg - x0).abs() < 1e-7);
        assert!((e.min_val - v0).abs() < 1e-14);
    }

    #[test]
    fn bisect_finds_root() {
        let mut f = |x: f64| x * x - 2.0;
        let r = bisect(&mut f, 0.0, 2.0).unwrap();
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(bisect(&mut f, 3.0, 4.0).is_none());
    }
}
