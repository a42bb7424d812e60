//! Scalar numerics shared across the crate: polynomial evaluation, bracketed
//! root finding, golden-section maximisation, and a small dense linear solver
//! with a condition estimate.

use crate::{Error, Result};

/// Evaluate a polynomial given by descending coefficients at `x`.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Descending coefficients of the derivative.
pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![0.0];
    }
    coeffs[..n - 1]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * (n - 1 - i) as f64)
        .collect()
}

/// Bisection on a bracketing interval, to absolute tolerance `tol`.
///
/// `f(lo)` and `f(hi)` must have opposite signs (zero counts as either).
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Numeric(format!(
            "bisect: no sign change on [{lo}, {hi}]"
        )));
    }
    let neg_lo = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton polish of a root estimate, safeguarded to stay inside `[lo, hi]`.
pub fn newton_polish<F, G>(f: F, df: G, x0: f64, lo: f64, hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let mut x = x0;
    for _ in 0..40 {
        let d = df(x);
        if d == 0.0 {
            break;
        }
        let step = f(x) / d;
        let next = x - step;
        if !next.is_finite() || next < lo || next > hi {
            break;
        }
        x = next;
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// All roots of `f` in `(lo, hi)`, located by a sign-change sweep on a grid of
/// step at most `grid`, then bisection to `1e-13` and a Newton polish.
///
/// Roots of even multiplicity or closer together than `grid` can be missed;
/// callers choose `grid` from a priori root separation.
pub fn roots_in_interval<F, G>(f: F, df: G, lo: f64, hi: f64, grid: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let mut roots = Vec::new();
    if !(hi > lo) {
        return roots;
    }
    let steps = ((hi - lo) / grid).ceil().max(1.0) as usize;
    let h = (hi - lo) / steps as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=steps {
        let x1 = if i == steps { hi } else { lo + h * i as f64 };
        let f1 = f(x1);
        if f0 == 0.0 {
            push_root(&mut roots, x0, h);
        } else if f1 != 0.0 && f0.signum() != f1.signum() {
            if let Ok(r) = bisect(&f, x0, x1, 1e-13) {
                let r = newton_polish(&f, &df, r, x0, x1);
                push_root(&mut roots, r, h);
            }
        }
        x0 = x1;
        f0 = f1;
    }
    if f(hi) == 0.0 {
        push_root(&mut roots, hi, h);
    }
    roots
}

fn push_root(roots: &mut Vec<f64>, r: f64, sep: f64) {
    if roots.last().map_or(true, |&p| (r - p).abs() > 0.5 * sep) {
        roots.push(r);
    }
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
///
/// Returns `(argmax, max)` to argument tolerance `tol`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
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
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
///
/// Returns the solution and a one-norm condition estimate computed from the
/// explicit inverse. Systems with condition estimate above `kappa_max` are
/// rejected.
pub fn solve_with_condition(a: &[Vec<f64>], b: &[f64], kappa_max: f64) -> Result<(Vec<f64>, f64)> {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|row| row.len() == n) && b.len() == n);
    // Augment with b and the identity so one elimination yields both the
    // solution and the inverse.
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i]);
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    let w = 2 * n + 1;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col].abs() < 1e-300 {
            return Err(Error::Numeric("singular matrix".into()));
        }
        m.swap(col, piv);
        let p = m[col][col];
        for j in col..w {
            m[col][j] /= p;
        }
        for i in 0..n {
            if i != col && m[i][col] != 0.0 {
                let factor = m[i][col];
                for j in col..w {
                    m[i][j] -= factor * m[col][j];
                }
            }
        }
    }
    let x: Vec<f64> = (0..n).map(|i| m[i][n]).collect();
    let norm_a = one_norm(a, 0);
    let inv: Vec<Vec<f64>> = (0..n).map(|i| m[i][n + 1..].to_vec()).collect();
    let kappa = norm_a * one_norm(&inv, 0);
    if kappa > kappa_max {
        return Err(Error::IllConditioned { kappa });
    }
    Ok((x, kappa))
}

fn one_norm(a: &[Vec<f64>], from: usize) -> f64 {
    let n = a.len();
    (from..from + n)
        .map(|j| a.iter().map(|row| row[j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Falling factorial `n (n-1) ... (n-k+1)` as `f64` (zero when `k > n`).
pub fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|i| n as f64 - i as f64).product()
}
