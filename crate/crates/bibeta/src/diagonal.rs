//! Points of the attractor on the diagonal `y = x`, via the admissible
//! prefix tree of the difference series.
//!
//! An address `w` projects onto the diagonal exactly when the difference
//! `f(w) = sum w_i (mu^i - lambda^i)` vanishes. For a finite prefix the
//! attainable values of `f` form an interval with closed-form endpoints, so
//! prefixes that can still reach zero form a binary tree: a node is
//! admissible when its interval straddles zero, and the intervals of its
//! two children partition the reachable values. The tree is self-similar up
//! to one level-dependent affine renormalization whose factor tends to the
//! smaller base from below.

use serde::Serialize;

use crate::symbolic::{BetaPair, Digit, FiniteWord};
use crate::zcert::{greedy_digits, thm12_certificate};
use crate::{Error, Result};

/// Which extreme branch of the admissible tree to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchSide {
    /// Prefer digit `m` whenever admissible.
    Leftmost,
    /// Prefer digit `p` whenever admissible.
    Rightmost,
}

/// An admissible prefix of a diagonal address.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalNode {
    /// The prefix.
    pub word: FiniteWord,
    /// Partial difference sum over the prefix.
    pub partial: f64,
    /// Smallest attainable difference value over completions.
    pub lo: f64,
    /// Largest attainable difference value over completions.
    pub hi: f64,
}

/// Validate and orient a pair for diagonal analysis: the larger base first,
/// both below 2 so that neither geometric tail dominates the other digits.
pub fn diagonal_pair(bp: &BetaPair) -> Result<BetaPair> {
    let bp = if bp.beta1() > bp.beta2() {
        *bp
    } else {
        bp.swapped()
    };
    if bp.beta1() >= 2.0 {
        return Err(Error::Domain(
            "diagonal analysis needs both bases below 2".into(),
        ));
    }
    Ok(bp)
}

/// Tail mass `g(j) = mu^j / (1 - mu) - lambda^j / (1 - lambda)`.
fn tail_gap(bp: &BetaPair, j: u32) -> f64 {
    let (lam, mu) = (bp.lambda(), bp.mu());
    mu.powi(j as i32) / (1.0 - mu) - lam.powi(j as i32) / (1.0 - lam)
}

/// One-step difference `mu^j - lambda^j`.
fn step_gap(bp: &BetaPair, j: u32) -> f64 {
    bp.mu().powi(j as i32) - bp.lambda().powi(j as i32)
}

/// The root node (empty prefix). Always admissible.
pub fn diagonal_root(bp: &BetaPair) -> Result<DiagonalNode> {
    let bp = diagonal_pair(bp)?;
    let g1 = tail_gap(&bp, 1);
    Ok(DiagonalNode {
        word: FiniteWord::empty(),
        partial: 0.0,
        lo: -g1,
        hi: g1,
    })
}

/// The admissible children of a node, `(w.m, w.p)` in that order.
///
/// The child intervals are `[lo, c]` and `[b, d]` with `c = partial - step +
/// g` and `b = partial + step - g` at the child depth; a child is admissible
/// when its interval straddles zero. At least one child of an admissible
/// node is admissible.
pub fn diagonal_children(
    bp: &BetaPair,
    node: &DiagonalNode,
) -> Result<(Option<DiagonalNode>, Option<DiagonalNode>)> {
    let bp = diagonal_pair(bp)?;
    let n = node.word.len() as u32;
    let step = step_gap(&bp, n + 1);
    let g = tail_gap(&bp, n + 2);
    let make = |digit: Digit| {
        let partial = node.partial + digit.value() as f64 * step;
        let (lo, hi) = (partial - g, partial + g);
        if lo < 0.0 && hi > 0.0 {
            let mut word = node.word.clone();
            word.push(digit);
            Some(DiagonalNode {
                word,
                partial,
                lo,
                hi,
            })
        } else {
            None
        }
    };
    Ok((make(Digit::M), make(Digit::P)))
}

/// Renormalization factor of level `n`: the width ratio of a node to its
/// child, `g(n + 1) / g(n + 2)`. Increases with `n` towards the smaller
/// base.
pub fn renorm_factor(bp: &BetaPair, n: u32) -> Result<f64> {
    let bp = diagonal_pair(bp)?;
    Ok(tail_gap(&bp, n + 1) / tail_gap(&bp, n + 2))
}

/// Follow an extreme admissible branch to the given depth.
///
/// The returned node's interval pins the difference of any completion to
/// within `hi - lo = 2 g(depth + 1)`, so the prefix is a diagonal address to
/// that residual.
pub fn diagonal_address(bp: &BetaPair, depth: u32, side: BranchSide) -> Result<DiagonalNode> {
    let bp = diagonal_pair(bp)?;
    let mut node = diagonal_root(&bp)?;
    for _ in 0..depth {
        let (m, p) = diagonal_children(&bp, &node)?;
        node = match side {
            BranchSide::Leftmost => m.or(p),
            BranchSide::Rightmost => p.or(m),
        }
        .ok_or_else(|| Error::Numeric("admissible node lost both children".into()))?;
    }
    Ok(node)
}

/// Count admissible prefixes per level, `W_0 ..= W_n`.
///
/// Fails with a cap error when the total number of visited nodes exceeds
/// `cap`.
pub fn count_admissible(bp: &BetaPair, n: u32, cap: u64) -> Result<Vec<u64>> {
    let bp = diagonal_pair(bp)?;
    let mut counts = vec![0u64; n as usize + 1];
    let mut visited = 0u64;
    let mut stack = vec![diagonal_root(&bp)?];
    while let Some(node) = stack.pop() {
        visited += 1;
        if visited > cap {
            return Err(Error::CapExceeded(format!(
                "admissible tree exceeds {cap} nodes"
            )));
        }
        counts[node.word.len()] += 1;
        if (node.word.len() as u32) < n {
            let (m, p) = diagonal_children(&bp, &node)?;
            stack.extend(m);
            stack.extend(p);
        }
    }
    Ok(counts)
}

/// Least-squares growth exponent of a count sequence, fitted to `ln W_k`
/// over the final third of the levels.
pub fn growth_exponent(counts: &[u64]) -> Result<f64> {
    let n = counts.len();
    let start = n - (n / 3).max(2);
    if n < 4 || counts[start..].iter().any(|&c| c == 0) {
        return Err(Error::Domain(
            "growth fit needs at least four levels with positive counts".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = (start..n)
        .map(|k| (k as f64, (counts[k] as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((m * sxy - sx * sy) / (m * sxx - sx * sx))
}

/// Expand a diagonal target in both bases at once.
///
/// Produces a digit word whose partial sums converge to `x` in base `b1`
/// and in base `b2` simultaneously, certified by the interior-point
/// witness; the pair must be accepted by the witness and the target must
/// lie in its certified box.
pub fn simultaneous_expand(bp: &BetaPair, x: f64, count: usize) -> Result<FiniteWord> {
    let cert = thm12_certificate(bp)?;
    greedy_digits(&[x, x], &[bp.beta1(), bp.beta2()], &cert, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(b1: f64, b2: f64) -> BetaPair {
        BetaPair::new(b1, b2).unwrap()
    }

    /// Direct admissibility from the closed-form interval of a full word.
    fn admissible_direct(bp: &BetaPair, digits: &[Digit]) -> bool {
        let (lam, mu) = (bp.lambda(), bp.mu());
        let mut partial = 0.0;
        for (i, d) in digits.iter().enumerate() {
            partial += d.value() as f64 * (mu.powi(i as i32 + 1) - lam.powi(i as i32 + 1));
        }
        let g = tail_gap(bp, digits.len() as u32 + 1);
        partial - g < 0.0 && partial + g > 0.0
    }

    #[test]
    fn tree_matches_exhaustive_enumeration() {
        let bp = pair(1.8, 1.6);
        let n = 12u32;
        let counts = count_admissible(&bp, n, 1 << 22).unwrap();
        for level in 0..=n {
            let mut direct = 0u64;
            for mask in 0u32..(1 << level) {
                let digits: Vec<Digit> = (0..level)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            Digit::P
                        } else {
                            Digit::M
                        }
                    })
                    .collect();
                if admissible_direct(&bp, &digits) {
                    direct += 1;
                }
            }
            assert_eq!(counts[level as usize], direct, "level {level}");
        }
    }

    #[test]
    fn counts_bounded_by_powers_of_two() {
        let bp = pair(1.9, 1.7);
        let counts = count_admissible(&bp, 14, 1 << 22).unwrap();
        for (k, &c) in counts.iter().enumerate() {
            assert!(c >= 1);
            assert!(c <= 1u64 << k);
        }
        let rate = growth_exponent(&counts).unwrap();
        assert!(rate > 0.0 && rate < std::f64::consts::LN_2 + 1e-9);
    }

    #[test]
    fn renormalization_conjugacy() {
        // The normalized position of the child cut points is determined by
        // the renormalization factor: rho(b) = 1 - 1/beta_n, rho(c) = 1/beta_n.
        let bp = pair(1.7, 1.4);
        let mut node = diagonal_root(&bp).unwrap();
        for _ in 0..8 {
            let n = node.word.len() as u32;
            let beta_n = renorm_factor(&bp, n).unwrap();
            let step = step_gap(&bp, n + 1);
            let g = tail_gap(&bp, n + 2);
            let rho = |x: f64| (x - node.lo) / (node.hi - node.lo);
            let b = node.partial + step - g;
            let c = node.partial - step + g;
            assert!((rho(b) - (1.0 - 1.0 / beta_n)).abs() < 1e-12);
            assert!((rho(c) - 1.0 / beta_n).abs() < 1e-12);
            assert!(beta_n > 1.0 && beta_n < bp.beta2());
            let (m, p) = diagonal_children(&bp, &node).unwrap();
            // Child endpoints agree with the cut points.
            if let Some(ref m) = m {
                assert!((m.lo - node.lo).abs() < 1e-15);
                assert!((m.hi - c).abs() < 1e-15);
            }
            if let Some(ref p) = p {
                assert!((p.lo - b).abs() < 1e-15);
                assert!((p.hi - node.hi).abs() < 1e-15);
            }
            node = m.or(p).unwrap();
        }
    }

    #[test]
    fn renorm_factor_increases_towards_smaller_base() {
        let bp = pair(1.9, 1.3);
        let mut prev = renorm_factor(&bp, 0).unwrap();
        for n in 1..=60 {
            let next = renorm_factor(&bp, n).unwrap();
            assert!(next > prev);
            assert!(next < bp.beta2());
            prev = next;
        }
        assert!((bp.beta2() - prev) < 2e-7);
    }

    #[test]
    fn extreme_branches_pin_the_difference() {
        let bp = pair(1.85, 1.55);
        for side in [BranchSide::Leftmost, BranchSide::Rightmost] {
            let node = diagonal_address(&bp, 40, side).unwrap();
            assert_eq!(node.word.len(), 40);
            let width = 2.0 * tail_gap(&bp, 41);
            assert!((node.hi - node.lo - width).abs() < 1e-12);
            assert!(node.lo < 0.0 && node.hi > 0.0);
        }
        let left = diagonal_address(&bp, 12, BranchSide::Leftmost).unwrap();
        let right = diagonal_address(&bp, 12, BranchSide::Rightmost).unwrap();
        assert_ne!(
            left.word.to_string(),
            right.word.to_string(),
            "extreme branches should differ for this pair"
        );
    }

    #[test]
    fn simultaneous_expansion_converges_in_both_bases() {
        let bp = pair(1.15, 1.2);
        let x = 0.41;
        let w = simultaneous_expand(&bp, x, 300).unwrap();
        for base in [bp.beta1(), bp.beta2()] {
            let v = w.partial_sum(1.0 / base);
            assert!((v - x).abs() < 1e-8, "base {base}: {v}");
        }
    }

    proptest! {
        #[test]
        fn children_never_both_empty(
            b1 in 1.05f64..1.98,
            gap in 0.01f64..0.5,
            path in proptest::collection::vec(any::<bool>(), 0..30)
        ) {
            let b2 = (b1 - gap).max(1.02);
            prop_assume!((b1 - b2).abs() > 1e-6);
            let bp = pair(b1, b2);
            let mut node = diagonal_root(&bp).unwrap();
            for &go_right in &path {
                let (m, p) = diagonal_children(&bp, &node).unwrap();
                prop_assert!(m.is_some() || p.is_some());
                node = if go_right { p.or(m) } else { m.or(p) }.unwrap();
                prop_assert!(node.lo < 0.0 && node.hi > 0.0);
            }
        }
    }
}
