//! Corner polynomials `P_k(x) = x^{k+1} - 2x^k + 2`, the boundary arc of the
//! level-one separation region, the extremal base-sum pair, and the
//! single-function witness `h` for points on the arc.
//!
//! For a pair `b1 > b2` the level-one crossing chord joins consecutive
//! projections of `p m^j p^inf`; its ordinates vanish simultaneously exactly
//! when `b1` and `b2` are the two roots of the same `P_k`, which makes the
//! corner pairs the junctions between consecutive arcs.

use serde::Serialize;

use crate::numeric::{bisect, golden_max, newton_polish, roots_in_interval};
use crate::{Error, Result};

/// Evaluate `P_k(x) = x^{k+1} - 2 x^k + 2`.
pub fn pk_eval(k: u32, x: f64) -> f64 {
    x.powi(k as i32) * (x - 2.0) + 2.0
}

fn pk_deriv(k: u32, x: f64) -> f64 {
    let k = k as f64;
    (k + 1.0) * x.powf(k) - 2.0 * k * x.powf(k - 1.0)
}

/// The two roots of `P_k` in `(1, 2)`, as a base pair `beta1 > beta2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CornerPair {
    /// Index of the corner polynomial.
    pub k: u32,
    /// Larger root of `P_k` in `(1, 2)`.
    pub beta1: f64,
    /// Smaller root of `P_k` in `(1, 2)`.
    pub beta2: f64,
}

/// Roots of `P_k` in `(1, 2)`: exactly two for `k >= 4`, none for `k <= 3`.
pub fn pk_roots(k: u32) -> Result<CornerPair> {
    if k < 4 {
        return Err(Error::Domain(format!(
            "P_{k} has no roots in (1, 2); the first corner pair appears at k = 4"
        )));
    }
    // P_k(1) = 1 and P_k(2) = 2, with a single interior minimum at 2k/(k+1).
    let xmin = 2.0 * k as f64 / (k as f64 + 1.0);
    let fmin = pk_eval(k, xmin);
    if fmin >= 0.0 {
        return Err(Error::Numeric(format!(
            "P_{k} does not dip below zero at its minimum"
        )));
    }
    let f = |x: f64| pk_eval(k, x);
    let df = |x: f64| pk_deriv(k, x);
    let lo = bisect(f, 1.0, xmin, 1e-13)?;
    let hi = bisect(f, xmin, 2.0, 1e-13)?;
    let beta2 = newton_polish(f, df, lo, 1.0, xmin);
    let beta1 = newton_polish(f, df, hi, xmin, 2.0);
    Ok(CornerPair { k, beta1, beta2 })
}

/// Ordinate of the level-one crossing fan: the series value of `p m^j p^inf`
/// at contraction `x`, equal to `x (1 - 2x + 2 x^{j+1}) / (1 - x)`.
pub fn crossing_ordinate(j: u32, x: f64) -> f64 {
    x * (1.0 - 2.0 * x + 2.0 * x.powi(j as i32 + 1)) / (1.0 - x)
}

/// Defining equation of the level-one boundary arc of index `k`:
/// `b1 P_k(b1) P_{k+1}(b2) - b2 P_{k+1}(b1) P_k(b2)`.
///
/// Its zero set between the corner pairs `k` and `k+1` is exactly the locus
/// where the level-one crossing chord passes through the origin.
pub fn s1_equation(k: u32, beta1: f64, beta2: f64) -> f64 {
    beta1 * pk_eval(k, beta1) * pk_eval(k + 1, beta2)
        - beta2 * pk_eval(k + 1, beta1) * pk_eval(k, beta2)
}

/// The unweighted pairing `P_k(b1) P_{k+1}(b2) - P_{k+1}(b1) P_k(b2)`.
///
/// This symmetric relative of [`s1_equation`] shares the corner pairs with
/// it; its arcs carry the extremal base sum reported by
/// [`corollary16_extremum`].
pub fn pk_cross_equation(k: u32, beta1: f64, beta2: f64) -> f64 {
    pk_eval(k, beta1) * pk_eval(k + 1, beta2) - pk_eval(k + 1, beta1) * pk_eval(k, beta2)
}

fn wronskian(k: u32, x: f64) -> f64 {
    pk_eval(k, x) * pk_deriv(k + 1, x) - pk_eval(k + 1, x) * pk_deriv(k, x)
}

/// Where an arc of index 3 leaves the diagonal: both variants of the defining
/// equation vanish identically at `b1 = b2`, so the arc endpoint is the zero
/// of the transversal derivative along the diagonal.
fn diagonal_endpoint(k: u32, weighted: bool) -> Result<f64> {
    let f = |x: f64| {
        if weighted {
            x * wronskian(k, x) - pk_eval(k, x) * pk_eval(k + 1, x)
        } else {
            wronskian(k, x)
        }
    };
    let df = |x: f64| {
        let h = 1e-7;
        (f(x + h) - f(x - h)) / (2.0 * h)
    };
    let hi = pk_roots(k + 1)?.beta1;
    let roots = roots_in_interval(f, df, 1.05, hi - 1e-6, 1e-3);
    match roots.as_slice() {
        [r] => Ok(*r),
        other => Err(Error::Numeric(format!(
            "expected one diagonal endpoint for arc {k}, found {}",
            other.len()
        ))),
    }
}

/// Arc endpoints in the `(b1 big, b2 small)` orientation.
fn arc_endpoints(k: u32, weighted: bool) -> Result<((f64, f64), (f64, f64))> {
    if k < 3 {
        return Err(Error::Domain(format!(
            "boundary arcs start at k = 3, got {k}"
        )));
    }
    let upper = pk_roots(k + 1)?;
    let start = if k == 3 {
        let w = diagonal_endpoint(3, weighted)?;
        (w, w)
    } else {
        let c = pk_roots(k)?;
        (c.beta1, c.beta2)
    };
    Ok((start, (upper.beta1, upper.beta2)))
}

/// Solve the arc equation for `b2` at a given `b1`.
fn solve_arc_b2(k: u32, weighted: bool, b1: f64, b2_lo: f64, b2_hi: f64) -> Result<f64> {
    let f = |y: f64| {
        if weighted {
            s1_equation(k, b1, y)
        } else {
            pk_cross_equation(k, b1, y)
        }
    };
    // Guard the upper end away from the diagonal, which is an identical zero.
    let hi = b2_hi.min(b1 - 1e-12).max(b2_lo);
    let r = bisect(f, b2_lo, hi, 1e-13)?;
    let df = |y: f64| {
        let h = 1e-7;
        (f(y + h) - f(y - h)) / (2.0 * h)
    };
    Ok(newton_polish(f, df, r, b2_lo, hi))
}

/// A sampled boundary arc.
#[derive(Clone, Debug, Serialize)]
pub struct CurveSegment {
    /// Arc index.
    pub k: u32,
    /// Samples `(b1, b2)` with `b1` increasing; the first and last samples
    /// are the arc endpoints.
    pub samples: Vec<(f64, f64)>,
}

/// Sample the level-one boundary arc of index `k >= 3`.
///
/// For `k >= 4` the arc joins corner pair `k` to corner pair `k + 1`; the
/// `k = 3` arc starts where the boundary leaves the diagonal. Every sample
/// satisfies [`s1_equation`] to `1e-10`.
pub fn s1_segment(k: u32, samples: usize) -> Result<CurveSegment> {
    if samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let ((b1_start, b2_start), (b1_end, b2_end)) = arc_endpoints(k, true)?;
    let mut out = Vec::with_capacity(samples);
    out.push((b1_start, b2_start));
    for i in 1..samples - 1 {
        let s = i as f64 / (samples - 1) as f64;
        let b1 = b1_start + s * (b1_end - b1_start);
        let b2 = solve_arc_b2(k, true, b1, b2_end, b2_start)?;
        out.push((b1, b2));
    }
    out.push((b1_end, b2_end));
    Ok(CurveSegment { k, samples: out })
}

/// The extremal base sum over the unweighted arcs `k = 3..=8`.
///
/// Maximises `t = b1 + b2 - 3` along each arc of [`pk_cross_equation`] by a
/// coarse scan plus golden-section refinement, and returns `(t*, beta*)`
/// where `beta*` is the smaller coordinate of the maximising pair.
pub fn corollary16_extremum() -> Result<(f64, f64)> {
    let mut best_t = f64::NEG_INFINITY;
    let mut best_small = f64::NAN;
    for k in 3..=8u32 {
        let ((b1_start, b2_start), (b1_end, b2_end)) = arc_endpoints(k, false)?;
        let sum_at = |b1: f64| -> f64 {
            if b1 <= b1_start {
                return b1_start + b2_start - 3.0;
            }
            if b1 >= b1_end {
                return b1_end + b2_end - 3.0;
            }
            match solve_arc_b2(k, false, b1, b2_end, b2_start) {
                Ok(b2) => b1 + b2 - 3.0,
                Err(_) => f64::NEG_INFINITY,
            }
        };
        // Coarse scan to bracket the maximum, then golden refinement.
        let n = 160;
        let mut gi = 0usize;
        let mut gv = f64::NEG_INFINITY;
        for i in 0..=n {
            let b1 = b1_start + (b1_end - b1_start) * i as f64 / n as f64;
            let v = sum_at(b1);
            if v > gv {
                gv = v;
                gi = i;
            }
        }
        let lo = b1_start + (b1_end - b1_start) * gi.saturating_sub(1) as f64 / n as f64;
        let hi = b1_start + (b1_end - b1_start) * (gi + 1).min(n) as f64 / n as f64;
        let (b1g, _) = golden_max(sum_at, lo, hi, 1e-10);
        // Interior maxima satisfy F = 0 and dF/db1 = dF/db2 (the arc has
        // slope -1 where the sum is stationary); polish by Newton on that
        // system. Endpoint maxima keep the corner values.
        let (b1m, b2m, tm) = if gi == 0 || gi == n {
            if sum_at(b1_start) >= sum_at(b1_end) {
                (b1_start, b2_start, b1_start + b2_start - 3.0)
            } else {
                (b1_end, b2_end, b1_end + b2_end - 3.0)
            }
        } else {
            let b2g = solve_arc_b2(k, false, b1g, b2_end, b2_start)?;
            let (b1m, b2m) = polish_stationary(k, b1g, b2g);
            (b1m, b2m, b1m + b2m - 3.0)
        };
        if tm > best_t {
            best_t = tm;
            best_small = b1m.min(b2m);
        }
    }
    Ok((best_t, best_small))
}

/// Newton iteration for the stationary point of `b1 + b2` on the unweighted
/// arc: solves `F = 0`, `F_1 - F_2 = 0` with a finite-difference Jacobian.
fn polish_stationary(k: u32, mut b1: f64, mut b2: f64) -> (f64, f64) {
    let g = |x: f64, y: f64| -> (f64, f64) {
        let f = pk_cross_equation(k, x, y);
        let f1 = pk_deriv(k, x) * pk_eval(k + 1, y) - pk_deriv(k + 1, x) * pk_eval(k, y);
        let f2 = pk_eval(k, x) * pk_deriv(k + 1, y) - pk_eval(k + 1, x) * pk_deriv(k, y);
        (f, f1 - f2)
    };
    let h = 1e-7;
    for _ in 0..50 {
        let (f, s) = g(b1, b2);
        let (fx1, sx1) = g(b1 + h, b2);
        let (fx0, sx0) = g(b1 - h, b2);
        let (fy1, sy1) = g(b1, b2 + h);
        let (fy0, sy0) = g(b1, b2 - h);
        let j11 = (fx1 - fx0) / (2.0 * h);
        let j12 = (fy1 - fy0) / (2.0 * h);
        let j21 = (sx1 - sx0) / (2.0 * h);
        let j22 = (sy1 - sy0) / (2.0 * h);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 {
            break;
        }
        let dx = (f * j22 - j12 * s) / det;
        let dy = (j11 * s - f * j21) / det;
        b1 -= dx;
        b2 -= dy;
        if dx.abs().max(dy.abs()) < 1e-13 {
            break;
        }
    }
    (b1, b2)
}

/// The interpolation family `h_k^{(t)}(x) = 1 - (x - x^k)/(1 - x) + t x^k + x^{k+1}/(1 - x)`.
pub fn h_eval(k: u32, t: f64, x: f64) -> f64 {
    let xk = x.powi(k as i32);
    1.0 - (x - xk) / (1.0 - x) + t * xk + xk * x / (1.0 - x)
}

/// Result of the single-function witness at a boundary point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolomyakCheck {
    /// Interpolated digit, in `[-1, 1]` on the arc.
    pub t: f64,
    /// `|h_{k+1}^{(t)}(1/b1)|`.
    pub r1: f64,
    /// `|h_{k+1}^{(t)}(1/b2)|`.
    pub r2: f64,
}

/// At a point of the arc of index `k`, compute the interpolated digit `t`
/// from the crossing ordinates and the residuals of `h_{k+1}^{(t)}` at both
/// contraction ratios.
///
/// On the arc the same `t` annihilates `h` at `1/b1` and `1/b2`; `t` runs
/// from `+1` at corner pair `k` down to `-1` at corner pair `k + 1`.
pub fn solomyak_check(k: u32, point: (f64, f64)) -> Result<SolomyakCheck> {
    let (b1, b2) = point;
    if !(b1 > 1.0 && b2 > 1.0) {
        return Err(Error::Domain("arc points need bases above 1".into()));
    }
    let lam = 1.0 / b1;
    let xk = crossing_ordinate(k, lam);
    let xk1 = crossing_ordinate(k + 1, lam);
    let denom = xk1 - xk;
    if denom == 0.0 {
        return Err(Error::Numeric("degenerate crossing ordinates".into()));
    }
    let t = 2.0 * xk1 / denom - 1.0;
    if t.abs() > 1.0 + 1e-6 {
        return Err(Error::Domain(format!(
            "interpolated digit {t} outside [-1, 1]; is the point on arc {k}?"
        )));
    }
    Ok(SolomyakCheck {
        t,
        r1: h_eval(k + 1, t, 1.0 / b1).abs(),
        r2: h_eval(k + 1, t, 1.0 / b2).abs(),
    })
}
