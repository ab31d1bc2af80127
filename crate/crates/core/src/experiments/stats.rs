//! Small statistics helpers: binomial intervals and least-squares fits.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if failures == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if failures == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Weighted least squares for `y = a + b x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    /// Weighted residual sum of squares.
    pub chi2: f64,
}

pub fn weighted_line_fit(x: &[f64], y: &[f64], w: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n || w.len() != n {
        return None;
    }
    let sw: f64 = w.iter().sum();
    let sx: f64 = x.iter().zip(w).map(|(x, w)| w * x).sum();
    let sy: f64 = y.iter().zip(w).map(|(y, w)| w * y).sum();
    let sxx: f64 = x.iter().zip(w).map(|(x, w)| w * x * x).sum();
    let sxy: f64 = x.iter().zip(y).zip(w).map(|((x, y), w)| w * x * y).sum();
    let det = sw * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return None;
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let chi2: f64 = (0..n).map(|i| w[i] * (y[i] - intercept - slope * x[i]).powi(2)).sum();
    // Scale the covariance by the reduced chi-square so the errors reflect
    // the observed scatter (ordinary regression errors when weights are equal).
    let dof = (n as f64 - 2.0).max(1.0);
    let scale = if n > 2 { chi2 / dof } else { 1.0 };
    Some(LineFit {
        intercept,
        slope,
        slope_stderr: (scale * sw / det).sqrt(),
        intercept_stderr: (scale * sxx / det).sqrt(),
        chi2,
    })
}

/// Weighted least squares for `y = c0 + c1 x + c2 x^2`; returns the
/// coefficients and the weighted residual sum of squares.
pub fn weighted_quadratic_fit(x: &[f64], y: &[f64], w: &[f64]) -> Option<([f64; 3], f64)> {
    let mut m = [[0.0f64; 3]; 3];
    let mut v = [0.0f64; 3];
    for i in 0..x.len() {
        let basis = [1.0, x[i], x[i] * x[i]];
        for r in 0..3 {
            v[r] += w[i] * basis[r] * y[i];
            for c in 0..3 {
                m[r][c] += w[i] * basis[r] * basis[c];
            }
        }
    }
    let coef = solve3(m, v)?;
    let chi2 = (0..x.len())
        .map(|i| w[i] * (y[i] - coef[0] - coef[1] * x[i] - coef[2] * x[i] * x[i]).powi(2))
        .sum();
    Some((coef, chi2))
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> Option<[f64; 3]> {
    let scale = m.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-14 * scale {
            return None;
        }
        m.swap(col, pivot);
        v.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            v[row] -= f * v[col];
        }
    }
    let mut out = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * out[k]).sum();
        out[row] = (v[row] - tail) / m[row][row];
    }
    Some(out)
}

/// Minimise a unimodal function on `[lo, hi]`: coarse scan, then golden
/// section around the best scan point.
pub fn minimize_scalar(f: impl Fn(f64) -> f64, lo: f64, hi: f64, scan: usize) -> (f64, f64) {
    let scan = scan.max(3);
    let step = (hi - lo) / (scan - 1) as f64;
    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..scan {
        let val = f(lo + step * i as f64);
        if val < best {
            best = val;
            best_i = i;
        }
    }
    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_i + 1) as f64).min(hi);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    let fx = f(x);
    if fx <= best {
        (x, fx)
    } else {
        (lo + step * best_i as f64, best)
    }
}
