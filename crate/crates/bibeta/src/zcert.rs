//! Interior-point certificates and greedy simultaneous expansions.
//!
//! A monic real polynomial `P(x) = x^n + sum_{k<n} b_k x^k` with coefficient
//! mass `sum |b_k| <= 2` that vanishes at every target base certifies that
//! each target value in a computable box admits an expansion with digits
//! `+-1` valid in all bases at once. The degree-8 two-base witness accepts
//! every pair in the region it serves; a separate family with `m`-fold roots
//! at 1 serves the multi-target case.

use serde::Serialize;

use crate::numeric::{falling, solve_with_condition};
use crate::symbolic::{BetaPair, Digit, FiniteWord};
use crate::{Error, Result};

/// Residual tolerance for "the certificate vanishes at the base".
const ROOT_TOL: f64 = 1e-10;

/// A monic polynomial `x^n + b_{n-1} x^{n-1} + ... + b_0` stored by its low
/// coefficients `b_0..b_{n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonicRealPolynomial {
    low: Vec<f64>,
}

impl MonicRealPolynomial {
    /// Build from the low coefficients `b_0..b_{n-1}`.
    pub fn new(low: Vec<f64>) -> Self {
        MonicRealPolynomial { low }
    }

    /// Degree `n`.
    pub fn degree(&self) -> usize {
        self.low.len()
    }

    /// Coefficient `b_k` (zero for `k >= n`).
    pub fn coefficient(&self, k: usize) -> f64 {
        self.low.get(k).copied().unwrap_or(0.0)
    }

    /// The low coefficients `b_0..b_{n-1}`.
    pub fn low_coefficients(&self) -> &[f64] {
        &self.low
    }

    /// Evaluate at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 1.0;
        for &b in self.low.iter().rev() {
            acc = acc * x + b;
        }
        acc
    }

    /// Total mass `sum_k |b_k|` of the low coefficients.
    pub fn coefficient_mass(&self) -> f64 {
        self.low.iter().map(|b| b.abs()).sum()
    }

    /// Check the certificate conditions for `m = bases.len()` simultaneous
    /// targets: coefficient mass at most 2, `b_1 = ... = b_{m-1} = 0`,
    /// `b_0 != 0`, and `P(base) = 0` within `1e-10` at every base.
    pub fn validate_certificate(&self, bases: &[f64]) -> Result<()> {
        let m = bases.len();
        if m == 0 || m > self.degree() {
            return Err(Error::Domain(format!(
                "certificate of degree {} cannot serve {m} bases",
                self.degree()
            )));
        }
        let mass = self.coefficient_mass();
        if mass > 2.0 {
            return Err(Error::CertificateRejected { excess: mass - 2.0 });
        }
        if self.coefficient(0) == 0.0 {
            return Err(Error::Domain("certificate needs b_0 != 0".into()));
        }
        for k in 1..m {
            if self.coefficient(k) != 0.0 {
                return Err(Error::Domain(format!(
                    "certificate for {m} bases needs b_{k} = 0"
                )));
            }
        }
        for &beta in bases {
            let r = self.eval(beta);
            if r.abs() > ROOT_TOL {
                return Err(Error::Numeric(format!(
                    "certificate does not vanish at {beta}: residual {r:.3e}"
                )));
            }
        }
        Ok(())
    }
}

/// The degree-8 two-base witness
/// `P(x) = x^8 - ((b2^8 - b1^8)/(b2^7 - b1^7)) x^7 + b1^7 b2^7 (b2 - b1)/(b2^7 - b1^7)`.
///
/// `P` vanishes at both bases by construction; it is accepted exactly when
/// its coefficient mass `|b_7| + |b_0|` is at most 2, and rejected with the
/// excess otherwise.
pub fn thm12_certificate(bp: &BetaPair) -> Result<MonicRealPolynomial> {
    let (b1, b2) = (bp.beta1(), bp.beta2());
    let d7 = b2.powi(7) - b1.powi(7);
    let b7 = -(b2.powi(8) - b1.powi(8)) / d7;
    let b0 = b1.powi(7) * b2.powi(7) * (b2 - b1) / d7;
    let mass = b7.abs() + b0.abs();
    if mass > 2.0 {
        return Err(Error::CertificateRejected { excess: mass - 2.0 });
    }
    let mut low = vec![0.0; 8];
    low[0] = b0;
    low[7] = b7;
    let p = MonicRealPolynomial::new(low);
    p.validate_certificate(&[b1, b2])?;
    Ok(p)
}

/// Guaranteed half-widths of the certified target box for equal targets,
/// derived from the degree-8 witness at the pair.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeedBox {
    /// `1 / (|b_0| (b1 + b2))`.
    pub sum_bound: f64,
    /// `1 / (|b_0| b1 b2)`.
    pub prod_bound: f64,
    /// The smaller of the two bounds.
    pub min: f64,
}

/// Certified box half-widths at a pair accepted by [`thm12_certificate`].
pub fn seed_box(bp: &BetaPair) -> Result<SeedBox> {
    let cert = thm12_certificate(bp)?;
    let b0 = cert.coefficient(0).abs();
    let sum_bound = 1.0 / (b0 * (bp.beta1() + bp.beta2()));
    let prod_bound = 1.0 / (b0 * bp.beta1() * bp.beta2());
    Ok(SeedBox {
        sum_bound,
        prod_bound,
        min: sum_bound.min(prod_bound),
    })
}

/// Greedy digits for `targets[j] = sum_i a_i bases[j]^{-i}` with `a_i = +-1`.
///
/// The recurrence `u_i = a_i - sum_k b_k u_{i-n+k}` is seeded by solving the
/// `m x m` system `sum_t s_t bases[j]^{-(t+1)} = targets[j] / b_0` and placing
/// `s_0..s_{m-1}` in the oldest history slots. Each digit is chosen to
/// minimise `|u_i|` (ties resolve to `+1`); if any `|u_i|` exceeds `1` the
/// target lies outside the certified box and the expansion is rejected.
pub fn greedy_digits(
    targets: &[f64],
    bases: &[f64],
    cert: &MonicRealPolynomial,
    count: usize,
) -> Result<FiniteWord> {
    let m = targets.len();
    if m == 0 || m != bases.len() {
        return Err(Error::Domain(
            "need one target per base and at least one target".into(),
        ));
    }
    for &beta in bases {
        if !(beta > 1.0) {
            return Err(Error::Domain(format!("bases must exceed 1, got {beta}")));
        }
    }
    cert.validate_certificate(bases)?;
    let n = cert.degree();
    let b0 = cert.coefficient(0);

    let matrix: Vec<Vec<f64>> = (0..m)
        .map(|j| (0..m).map(|t| bases[j].powi(-(t as i32 + 1))).collect())
        .collect();
    let rhs: Vec<f64> = targets.iter().map(|&x| x / b0).collect();
    let (seeds, _kappa) = solve_with_condition(&matrix, &rhs, 1e12)?;

    // hist[k] holds u_{i-n+k} for the upcoming step i.
    let mut hist = vec![0.0; n];
    hist[..m].copy_from_slice(&seeds);
    let mut word = FiniteWord::empty();
    for i in 1..=count {
        let c: f64 = (0..n).map(|k| cert.coefficient(k) * hist[k]).sum();
        let a = if c >= 0.0 { 1.0 } else { -1.0 };
        let u = a - c;
        if u.abs() > 1.0 + 1e-12 {
            return Err(Error::TargetOutsideBox {
                index: i,
                magnitude: u.abs(),
            });
        }
        word.push(if a > 0.0 { Digit::P } else { Digit::M });
        hist.rotate_left(1);
        hist[n - 1] = u;
    }
    Ok(word)
}

/// A certificate with an `m`-fold root at 1 for `m` simultaneous targets.
#[derive(Clone, Debug, Serialize)]
pub struct MultidimCertificate {
    /// The witness polynomial `x^{mn+1} - x^{mn} + sum_i b_i x^{in}`.
    pub poly: MonicRealPolynomial,
    /// Block spacing `n` of the accepted witness.
    pub n: usize,
    /// Acceptance slack `1 - sum_i |b_i| > 0`, a box bound for the targets.
    pub slack: f64,
}

/// Find the smallest block spacing `n <= 10^4` such that
/// `P(x) = x^{mn+1} - x^{mn} + b_{m-1} x^{(m-1)n} + ... + b_0`
/// can be given an `m`-fold root at 1 with `1 + sum |b_i| < 2`.
///
/// The `b_i` solve the linear system `P^{(k)}(1) = 0`, `k = 0..m-1`; the
/// solve is rejected if its condition estimate exceeds `1e12`, and the
/// residuals `P^{(k)}(1)` are re-verified to `1e-9`.
pub fn multidim_certificate(m: usize) -> Result<MultidimCertificate> {
    if m < 1 {
        return Err(Error::Domain("need at least one target".into()));
    }
    for n in 1..=10_000usize {
        let a: Vec<Vec<f64>> = (0..m)
            .map(|k| (0..m).map(|i| falling(i * n, k)).collect())
            .collect();
        let rhs: Vec<f64> = (0..m)
            .map(|k| falling(m * n, k) - falling(m * n + 1, k))
            .collect();
        let (b, _kappa) = match solve_with_condition(&a, &rhs, 1e12) {
            Ok(s) => s,
            Err(Error::Numeric(_)) | Err(Error::IllConditioned { .. }) => continue,
            Err(e) => return Err(e),
        };
        let mass: f64 = b.iter().map(|x| x.abs()).sum();
        if !(1.0 + mass < 2.0) {
            continue;
        }
        let deg = m * n + 1;
        let mut low = vec![0.0; deg];
        low[m * n] = -1.0;
        for (i, &bi) in b.iter().enumerate() {
            low[i * n] += bi;
        }
        let poly = MonicRealPolynomial::new(low);
        for k in 0..m {
            let r = eval_derivative_at_one(&poly, k);
            if r.abs() > 1e-9 {
                return Err(Error::Numeric(format!(
                    "multidim witness residual P^({k})(1) = {r:.3e}"
                )));
            }
        }
        return Ok(MultidimCertificate {
            poly,
            n,
            slack: 1.0 - mass,
        });
    }
    Err(Error::CapExceeded(
        "no accepted block spacing n <= 10^4".into(),
    ))
}

fn eval_derivative_at_one(p: &MonicRealPolynomial, k: usize) -> f64 {
    let n = p.degree();
    let mut acc = falling(n, k);
    for (i, &b) in p.low_coefficients().iter().enumerate() {
        acc += b * falling(i, k);
    }
    acc
}

/// Reconstruction `sum_i a_i base^{-i}` of a digit word in one base.
pub fn reconstruct(word: &FiniteWord, base: f64) -> f64 {
    word.partial_sum(1.0 / base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bp(b1: f64, b2: f64) -> BetaPair {
        BetaPair::new(b1, b2).unwrap()
    }

    #[test]
    fn witness_coefficients_at_reference_pair() {
        let cert = thm12_certificate(&bp(1.15, 1.2)).unwrap();
        assert_abs_diff_eq!(cert.coefficient(7), -1.3440713002571323, epsilon = 1e-12);
        assert_abs_diff_eq!(cert.coefficient(0), 0.516233516912393, epsilon = 1e-12);
        assert_abs_diff_eq!(cert.coefficient_mass(), 1.8603048171695253, epsilon = 1e-12);
        assert!(cert.eval(1.15).abs() < 1e-12);
        assert!(cert.eval(1.2).abs() < 1e-12);
    }

    #[test]
    fn witness_rejects_large_pairs() {
        match thm12_certificate(&bp(1.3, 1.25)) {
            Err(Error::CertificateRejected { excess }) => assert!(excess > 0.4 && excess < 0.5),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn seed_box_formulas() {
        let pair = bp(1.15, 1.2);
        let cert = thm12_certificate(&pair).unwrap();
        let b0 = cert.coefficient(0).abs();
        let sb = seed_box(&pair).unwrap();
        assert_abs_diff_eq!(sb.sum_bound, 1.0 / (b0 * 2.35), epsilon = 1e-14);
        assert_abs_diff_eq!(sb.prod_bound, 1.0 / (b0 * 1.15 * 1.2), epsilon = 1e-14);
        assert_eq!(sb.min, sb.sum_bound.min(sb.prod_bound));
    }

    #[test]
    fn greedy_reconstructs_equal_targets() {
        let pair = bp(1.15, 1.2);
        let cert = thm12_certificate(&pair).unwrap();
        let x = 0.664;
        let w = greedy_digits(&[x, x], &[1.15, 1.2], &cert, 400).unwrap();
        assert_eq!(w.len(), 400);
        assert_abs_diff_eq!(reconstruct(&w, 1.15), x, epsilon = 1e-8);
        assert_abs_diff_eq!(reconstruct(&w, 1.2), x, epsilon = 1e-8);
    }

    #[test]
    fn greedy_rejects_outside_box() {
        // Distinct small targets at (1.1, 1.15) overflow the carry at once.
        let pair = bp(1.1, 1.15);
        let cert = thm12_certificate(&pair).unwrap();
        match greedy_digits(&[0.05, -0.03], &[1.1, 1.15], &cert, 50) {
            Err(Error::TargetOutsideBox { index, magnitude }) => {
                assert_eq!(index, 1);
                assert_abs_diff_eq!(magnitude, 1.0035, epsilon = 1e-12);
            }
            other => panic!("expected box rejection, got {other:?}"),
        }
    }

    #[test]
    fn multidim_two_targets() {
        let c = multidim_certificate(2).unwrap();
        assert_eq!(c.n, 3);
        assert_eq!(c.poly.degree(), 7);
        assert_abs_diff_eq!(c.poly.coefficient(0), 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.poly.coefficient(3), -1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.slack, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn multidim_three_targets() {
        let c = multidim_certificate(3).unwrap();
        assert_eq!(c.n, 9);
        assert_eq!(c.poly.degree(), 28);
        assert_abs_diff_eq!(c.poly.coefficient(0), -14.0 / 81.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.poly.coefficient(9), 37.0 / 81.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.poly.coefficient(18), -23.0 / 81.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.slack, 7.0 / 81.0, epsilon = 1e-9);
    }
}
