//! One-dimensional search: golden-section minimization of unimodal
//! functions and sign bisection.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 − 1) / 2

/// Result of a bracketed minimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub arg: f64,
    pub value: f64,
    pub bracket: (f64, f64),
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`,
/// shrinking the bracket to `tol`, then one parabolic step through the final
/// three points (kept only if it improves the value).
pub fn golden_section<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Minimum {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // The bracket shrinks by a fixed factor; 200 steps is far past f64 resolution.
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let (mut arg, mut value) = if fc <= fd { (c, fc) } else { (d, fd) };

    // Also consider the bracket ends: the minimum may sit on the boundary.
    for t in [lo, hi] {
        let ft = f(t);
        if ft < value {
            arg = t;
            value = ft;
        }
    }

    if let Some(t) = parabolic_vertex((c, fc), (arg, value), (d, fd)) {
        if t > lo && t < hi {
            let ft = f(t);
            if ft < value {
                arg = t;
                value = ft;
            }
        }
    }
    Minimum {
        arg,
        value,
        bracket: (a, b),
    }
}

fn parabolic_vertex(
    (x0, f0): (f64, f64),
    (x1, f1): (f64, f64),
    (x2, f2): (f64, f64),
) -> Option<f64> {
    let num = (x1 - x0).powi(2) * (f1 - f2) - (x1 - x2).powi(2) * (f1 - f0);
    let den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
    if den == 0.0 || !num.is_finite() || !den.is_finite() {
        return None;
    }
    let t = x1 - 0.5 * num / den;
    t.is_finite().then_some(t)
}

/// Golden-section refinement around the best point of a uniform grid; for
/// functions that are only piecewise unimodal.
pub fn grid_then_golden<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize, tol: f64) -> Minimum {
    let n = n.max(3);
    let h = (hi - lo) / (n - 1) as f64;
    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..n {
        let v = f(lo + i as f64 * h);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let a = lo + (best_i.max(1) - 1) as f64 * h;
    let b = lo + ((best_i + 1).min(n - 1)) as f64 * h;
    let m = golden_section(&f, a, b, tol);
    if m.value <= best {
        m
    } else {
        let t = lo + best_i as f64 * h;
        Minimum {
            arg: t,
            value: best,
            bracket: (a, b),
        }
    }
}

/// Bisects `[lo, hi]` on the predicate `left(t)`, assumed true at `lo` and
/// false at `hi`, until the bracket is no wider than `tol`. Returns the
/// final bracket.
pub fn bisect_predicate<P: Fn(f64) -> bool>(
    left: P,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if left(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
