use std::f64::consts::TAU;

/// Periodic cubic spline on `[0, 2π)` through `(theta_k, value_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// Second derivatives at the knots.
    curv: Vec<f64>,
}

impl PeriodicSpline {
    /// `knots` strictly increasing within `[0, 2π)`; at least three of them.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Self {
        let n = knots.len();
        assert!(n >= 3 && values.len() == n);
        let h: Vec<f64> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    knots[i + 1] - knots[i]
                } else {
                    knots[0] + TAU - knots[n - 1]
                }
            })
            .collect();
        // Cyclic tridiagonal system for the second derivatives:
        // h[i-1] m[i-1] + 2(h[i-1]+h[i]) m[i] + h[i] m[i+1] = 6 (s[i] - s[i-1]).
        let slope = |i: usize| (values[(i + 1) % n] - values[i]) / h[i];
        let sub: Vec<f64> = (0..n).map(|i| h[(i + n - 1) % n]).collect();
        let diag: Vec<f64> = (0..n).map(|i| 2.0 * (h[(i + n - 1) % n] + h[i])).collect();
        let sup: Vec<f64> = h.clone();
        let rhs: Vec<f64> = (0..n)
            .map(|i| 6.0 * (slope(i) - slope((i + n - 1) % n)))
            .collect();
        let curv = solve_cyclic(&sub, &diag, &sup, &rhs);
        Self {
            knots,
            values,
            curv,
        }
    }

    fn interval(&self, theta: f64) -> (usize, f64, f64) {
        let n = self.knots.len();
        let t = theta.rem_euclid(TAU);
        // Index of the last knot not after t (wrapping below the first knot).
        let i = match self.knots.partition_point(|&k| k <= t) {
            0 => n - 1,
            j => j - 1,
        };
        let start = self.knots[i];
        let end = if i + 1 < n {
            self.knots[i + 1]
        } else {
            self.knots[0] + TAU
        };
        let mut local = t - start;
        if local < 0.0 {
            local += TAU;
        }
        (i, local, end - start)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let (i, s, h) = self.interval(theta);
        let j = (i + 1) % self.knots.len();
        let (y0, y1, m0, m1) = (self.values[i], self.values[j], self.curv[i], self.curv[j]);
        let a = (h - s) / h;
        let b = s / h;
        a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        let (i, s, h) = self.interval(theta);
        let j = (i + 1) % self.knots.len();
        let (y0, y1, m0, m1) = (self.values[i], self.values[j], self.curv[i], self.curv[j]);
        let a = (h - s) / h;
        let b = s / h;
        (y1 - y0) / h + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0
    }
}

/// Solves a cyclic tridiagonal system by Sherman–Morrison.
fn solve_cyclic(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let alpha = sup[n - 1]; // row n-1, column 0
    let beta = sub[0]; // row 0, column n-1
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;
    let x = solve_tridiagonal(sub, &d, sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(sub, &d, sup, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
