//! Lower bounds on the uniqueness set: addresses whose digit runs are long
//! enough are the only address of their point.
//!
//! The engine is a certified disjointness test between two cylinder sets
//! `T_u(A)` and `T_v(A)`, bounded from outside by affine images of the
//! outer hull. A positive support-function gap in some candidate direction
//! separates the hulls; otherwise the larger piece is split and both
//! children must separate, up to a refinement budget.
//!
//! If the cylinder of `p^k m^j` is disjoint from the cylinder of `m`, a run
//! of `k` plus-digits followed by at least `j` minus-digits can never be
//! re-read with a leading minus digit, and symmetrically under the sign
//! flip. Tabulating the least such `j` over run lengths `k` gives a run
//! threshold: addresses all of whose runs meet it are unique, and the
//! exponential count of such addresses bounds the uniqueness set's entropy
//! from below.

use serde::Serialize;

use crate::geometry::{hull_of_attractor, ConvexPolygon, Point2};
use crate::hullcover::{EPS_HULL_CLASSIFY, SEPARATION_TOL};
use crate::symbolic::{BetaPair, Digit, FiniteWord, PeriodicAddress};
use crate::{Error, Result};

/// An affine image of the base hull: `diag(s) K + t`.
#[derive(Clone, Copy, Debug)]
struct PieceRef {
    sx: f64,
    sy: f64,
    tx: f64,
    ty: f64,
}

impl PieceRef {
    fn from_word(bp: &BetaPair, word: &FiniteWord) -> PieceRef {
        let (lam, mu) = (bp.lambda(), bp.mu());
        let (mut sx, mut sy) = (1.0, 1.0);
        let (mut tx, mut ty) = (0.0, 0.0);
        for d in word.digits() {
            sx *= lam;
            sy *= mu;
            tx += d.value() as f64 * sx;
            ty += d.value() as f64 * sy;
        }
        PieceRef { sx, sy, tx, ty }
    }

    fn child(&self, bp: &BetaPair, d: Digit) -> PieceRef {
        let sx = self.sx * bp.lambda();
        let sy = self.sy * bp.mu();
        PieceRef {
            sx,
            sy,
            tx: self.tx + d.value() as f64 * sx,
            ty: self.ty + d.value() as f64 * sy,
        }
    }

    fn support(&self, verts: &[Point2], dir: (f64, f64)) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for v in verts {
            let s = v.x * self.sx * dir.0 + v.y * self.sy * dir.1;
            if s > best {
                best = s;
            }
        }
        best + self.tx * dir.0 + self.ty * dir.1
    }

    fn diameter(&self, verts_extent: (f64, f64)) -> f64 {
        (self.sx * verts_extent.0).max(self.sy * verts_extent.1)
    }
}

/// Certified lower bound on the distance between two pieces: the best
/// support gap over the edge normals of both scaled hulls and the
/// centre-to-centre direction. Nonpositive values are inconclusive.
fn support_gap(verts: &[Point2], a: &PieceRef, b: &PieceRef) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let n = verts.len();
    let mut try_dir = |dx: f64, dy: f64| {
        let norm = dx.hypot(dy);
        if norm < 1e-300 {
            return;
        }
        let dir = (dx / norm, dy / norm);
        let gap = -(a.support(verts, (-dir.0, -dir.1)) + b.support(verts, dir));
        let gap2 = -(b.support(verts, (-dir.0, -dir.1)) + a.support(verts, dir));
        best = best.max(gap).max(gap2);
    };
    for piece in [a, b] {
        for i in 0..n {
            let p = &verts[i];
            let q = &verts[(i + 1) % n];
            let ex = (q.x - p.x) * piece.sx;
            let ey = (q.y - p.y) * piece.sy;
            try_dir(ey, -ex);
        }
    }
    try_dir(b.tx - a.tx, b.ty - a.ty);
    best
}

fn disjoint_rec(
    verts: &[Point2],
    extent: (f64, f64),
    bp: &BetaPair,
    a: &PieceRef,
    b: &PieceRef,
    budget: u32,
) -> bool {
    if support_gap(verts, a, b) > SEPARATION_TOL {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let (split, keep, split_a) = if a.diameter(extent) >= b.diameter(extent) {
        (a, b, true)
    } else {
        (b, a, false)
    };
    for d in [Digit::P, Digit::M] {
        let c = split.child(bp, d);
        let ok = if split_a {
            disjoint_rec(verts, extent, bp, &c, keep, budget - 1)
        } else {
            disjoint_rec(verts, extent, bp, keep, &c, budget - 1)
        };
        if !ok {
            return false;
        }
    }
    true
}

fn outer_hull_desc(bp: &BetaPair) -> Result<(BetaPair, ConvexPolygon)> {
    let bp = if bp.beta1() > bp.beta2() {
        *bp
    } else {
        bp.swapped()
    };
    let (_, outer) = hull_of_attractor(&bp, EPS_HULL_CLASSIFY)?;
    Ok((bp, outer))
}

/// Certified disjointness of the cylinder sets of two words, refined up to
/// `budget` piece splits along any branch.
pub fn cylinders_disjoint(
    bp: &BetaPair,
    u: &FiniteWord,
    v: &FiniteWord,
    budget: u32,
) -> Result<bool> {
    let (bp, outer) = outer_hull_desc(bp)?;
    let verts = outer.vertices().to_vec();
    let (lo, hi) = outer.bbox();
    let extent = (hi.x - lo.x, hi.y - lo.y);
    let a = PieceRef::from_word(&bp, u);
    let b = PieceRef::from_word(&bp, v);
    Ok(disjoint_rec(&verts, extent, &bp, &a, &b, budget))
}

/// The least `j <= 200` such that the cylinder of `p^k m^j` is certifiably
/// disjoint from the cylinder of `m`.
pub fn cylinder_separation(bp: &BetaPair, k: u32, budget: u32) -> Result<u32> {
    if k == 0 {
        return Err(Error::Domain("run length k must be positive".into()));
    }
    let (bp, outer) = outer_hull_desc(bp)?;
    let verts = outer.vertices().to_vec();
    let (lo, hi) = outer.bbox();
    let extent = (hi.x - lo.x, hi.y - lo.y);
    let b = PieceRef::from_word(&bp, &FiniteWord::new(vec![Digit::M]));
    for j in 1..=200u32 {
        let mut digits = vec![Digit::P; k as usize];
        digits.extend(std::iter::repeat(Digit::M).take(j as usize));
        let a = PieceRef::from_word(&bp, &FiniteWord::new(digits));
        if disjoint_rec(&verts, extent, &bp, &a, &b, budget) {
            return Ok(j);
        }
    }
    Err(Error::Numeric(format!(
        "no certified separation for run length {k} within 200 follow-up digits"
    )))
}

/// One row of a separation table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeparationEntry {
    /// Run length.
    pub k: u32,
    /// Required length of the following run.
    pub l: u32,
}

/// Run-length thresholds certifying unique addresses.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationTable {
    /// First base.
    pub beta1: f64,
    /// Second base.
    pub beta2: f64,
    /// Per-run-length thresholds.
    #[serde(rename = "L_table")]
    pub entries: Vec<SeparationEntry>,
    /// The uniform threshold, the maximum over the table.
    #[serde(rename = "L_hat")]
    pub l_hat: u32,
    /// Topological entropy lower bound for the uniqueness set.
    pub entropy_lower_bound: f64,
}

/// Tabulate `cylinder_separation` for run lengths `1 ..= k_max`.
pub fn separation_table(bp: &BetaPair, k_max: u32, budget: u32) -> Result<SeparationTable> {
    let mut entries = Vec::new();
    let mut l_hat = 0;
    for k in 1..=k_max {
        let l = cylinder_separation(bp, k, budget)?;
        l_hat = l_hat.max(l);
        entries.push(SeparationEntry { k, l });
    }
    Ok(SeparationTable {
        beta1: bp.beta1(),
        beta2: bp.beta2(),
        entries,
        l_hat,
        entropy_lower_bound: entropy_lower_bound(l_hat),
    })
}

/// Entropy lower bound `ln 2 / (2 L + 1)` from a uniform run threshold.
pub fn entropy_lower_bound(l_hat: u32) -> f64 {
    std::f64::consts::LN_2 / (2.0 * l_hat as f64 + 1.0)
}

/// Count length-`n` words whose completed runs after the first all have
/// length at least `l`; the first run and the still-open last run are
/// unconstrained. For `l = 1` this is `2^n`.
pub fn count_unique_prefixes(l: u32, n: u32) -> Result<u128> {
    if l == 0 || n == 0 {
        return Err(Error::Domain("counts need l >= 1 and n >= 1".into()));
    }
    let cap = l as usize;
    let overflow = || Error::CapExceeded("prefix count exceeds u128".into());
    // One shape per run-length structure; signs double the count. State:
    // current run length capped at l, separately while still in the first
    // run.
    let mut first = vec![0u128; cap + 1];
    let mut later = vec![0u128; cap + 1];
    first[1] = 1;
    for _ in 1..n {
        let mut nf = vec![0u128; cap + 1];
        let mut nl = vec![0u128; cap + 1];
        for r in 1..=cap {
            let grown = if r == cap { cap } else { r + 1 };
            nf[grown] = nf[grown].checked_add(first[r]).ok_or_else(overflow)?;
            nl[grown] = nl[grown].checked_add(later[r]).ok_or_else(overflow)?;
            // A switch closes the current run: always allowed for the first
            // run, otherwise only once the run has reached l.
            nl[1] = nl[1].checked_add(first[r]).ok_or_else(overflow)?;
            if r == cap {
                nl[1] = nl[1].checked_add(later[r]).ok_or_else(overflow)?;
            }
        }
        first = nf;
        later = nl;
    }
    let shapes = first
        .iter()
        .chain(later.iter())
        .try_fold(0u128, |acc, &c| acc.checked_add(c))
        .ok_or_else(overflow)?;
    shapes.checked_mul(2).ok_or_else(overflow)
}

/// A certificate that a point has exactly one address.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryCertificate {
    /// The finite part of the address.
    pub word: FiniteWord,
    /// The constant tail digit.
    pub tail: char,
    /// The projected point.
    pub point: (f64, f64),
    /// Least distance from the point to a flipped-prefix cylinder over the
    /// finite part.
    pub min_margin: f64,
    /// Distance from the tail fixed point to the opposite first cylinder,
    /// in renormalized coordinates; controls all flips inside the tail.
    pub tail_margin: f64,
    /// Whether every margin clears the separation tolerance.
    pub certified: bool,
}

/// Certify that `w . tail^infinity` is the unique address of its point: for
/// each position, the cylinder of the prefix with that digit flipped
/// excludes the point. Such points lie on the attractor's boundary.
pub fn boundary_certificate(
    bp: &BetaPair,
    w: &FiniteWord,
    tail: Digit,
) -> Result<BoundaryCertificate> {
    if tail == Digit::Z {
        return Err(Error::Domain("tail digit must be p or m".into()));
    }
    if w.digits().iter().any(|&d| d == Digit::Z) {
        return Err(Error::Domain(
            "certificate words use only the digits p and m".into(),
        ));
    }
    let (bp, outer) = outer_hull_desc(bp)?;
    let address = PeriodicAddress::new(w.clone(), FiniteWord::new(vec![tail]))?;
    let (px, py) = address.project(&bp)?;
    let mut min_margin = f64::INFINITY;
    for i in 0..w.len() {
        let mut prefix: Vec<Digit> = w.digits()[..i].to_vec();
        prefix.push(w.digits()[i].negate());
        let piece = PieceRef::from_word(&bp, &FiniteWord::new(prefix));
        // Exact distance from a point to the affine hull image.
        let local = Point2::new((px - piece.tx) / piece.sx, (py - piece.ty) / piece.sy);
        let d = outer.signed_distance(local).max(0.0);
        // Rescale conservatively by the smaller contraction.
        let scaled = d * piece.sx.min(piece.sy);
        min_margin = min_margin.min(scaled);
    }
    // Flips inside the constant tail are all affine copies of one picture:
    // the tail fixed point against the cylinder of the opposite digit.
    let fixed = PeriodicAddress::new(FiniteWord::empty(), FiniteWord::new(vec![tail]))?;
    let (fx, fy) = fixed.project(&bp)?;
    let opposite = PieceRef::from_word(&bp, &FiniteWord::new(vec![tail.negate()]));
    let local = Point2::new(
        (fx - opposite.tx) / opposite.sx,
        (fy - opposite.ty) / opposite.sy,
    );
    let tail_margin = outer.signed_distance(local).max(0.0) * opposite.sx.min(opposite.sy);
    let certified = min_margin > SEPARATION_TOL && tail_margin > SEPARATION_TOL;
    Ok(BoundaryCertificate {
        word: w.clone(),
        tail: tail.letter(),
        point: (px, py),
        min_margin,
        tail_margin,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(b1: f64, b2: f64) -> BetaPair {
        BetaPair::new(b1, b2).unwrap()
    }

    fn exhaustive_count(l: u32, n: u32) -> u128 {
        let mut count = 0u128;
        for mask in 0u64..(1 << n) {
            let digits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let mut runs = Vec::new();
            let mut len = 1usize;
            for i in 1..digits.len() {
                if digits[i] == digits[i - 1] {
                    len += 1;
                } else {
                    runs.push(len);
                    len = 1;
                }
            }
            runs.push(len);
            let ok = runs.len() <= 2
                || runs[1..runs.len() - 1].iter().all(|&r| r >= l as usize);
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn prefix_counts_match_exhaustive() {
        for l in [1u32, 2, 3, 4] {
            for n in 1..=16u32 {
                assert_eq!(
                    count_unique_prefixes(l, n).unwrap(),
                    exhaustive_count(l, n),
                    "l={l} n={n}"
                );
            }
        }
    }

    #[test]
    fn prefix_counts_edge_cases() {
        assert_eq!(count_unique_prefixes(1, 10).unwrap(), 1024);
        assert_eq!(count_unique_prefixes(1, 127).unwrap(), 1u128 << 127);
        assert!(count_unique_prefixes(1, 128).is_err());
        // With a huge threshold only the two-run and one-run words remain:
        // n - 1 switch positions plus the constant word, times two signs.
        assert_eq!(count_unique_prefixes(100, 12).unwrap(), 2 * 12);
    }

    #[test]
    fn separation_table_is_certified_and_monotone() {
        let bp = pair(1.8, 1.25);
        let table = separation_table(&bp, 6, 10).unwrap();
        assert_eq!(table.entries.len(), 6);
        for pair in table.entries.windows(2) {
            assert!(
                pair[1].l <= pair[0].l,
                "longer runs should separate no later"
            );
        }
        assert_eq!(
            table.l_hat,
            table.entries.iter().map(|e| e.l).max().unwrap()
        );
        let expect = std::f64::consts::LN_2 / (2.0 * table.l_hat as f64 + 1.0);
        assert!((table.entropy_lower_bound - expect).abs() < 1e-15);
        // The certified pair really is disjoint, and the table is sharp:
        // one fewer following digit is not certified at this budget.
        let k = 1usize;
        let l = table.entries[0].l;
        let make = |j: u32| {
            let mut d = vec![Digit::P; k];
            d.extend(std::iter::repeat(Digit::M).take(j as usize));
            FiniteWord::new(d)
        };
        let m = FiniteWord::new(vec![Digit::M]);
        assert!(cylinders_disjoint(&bp, &make(l), &m, 10).unwrap());
        if l > 1 {
            assert!(!cylinders_disjoint(&bp, &make(l - 1), &m, 10).unwrap());
        }
    }

    #[test]
    fn refinement_sharpens_the_table() {
        // Splitting pieces certifies separations the hull gap alone cannot.
        let bp = pair(1.6, 1.4);
        let coarse = cylinder_separation(&bp, 1, 0).unwrap();
        let sharp = cylinder_separation(&bp, 1, 12).unwrap();
        assert!(sharp < coarse, "coarse {coarse}, sharp {sharp}");
        let u = FiniteWord::parse("pm^2").unwrap();
        let m = FiniteWord::new(vec![Digit::M]);
        assert_eq!(sharp, 2);
        assert!(!cylinders_disjoint(&bp, &u, &m, 0).unwrap());
        assert!(cylinders_disjoint(&bp, &u, &m, 12).unwrap());
    }

    #[test]
    fn boundary_certificate_for_long_runs() {
        let bp = pair(1.8, 1.25);
        let table = separation_table(&bp, 3, 10).unwrap();
        let l = table.l_hat as usize;
        // Runs at the certified threshold alternate p^l m^l p^l, tail m.
        let mut digits = vec![Digit::P; l];
        digits.extend(std::iter::repeat(Digit::M).take(l));
        digits.extend(std::iter::repeat(Digit::P).take(l));
        let w = FiniteWord::new(digits);
        let cert = boundary_certificate(&bp, &w, Digit::M).unwrap();
        assert!(cert.certified, "margins: {:?}", cert);
        assert!(cert.min_margin > SEPARATION_TOL);
        assert!(cert.tail_margin > SEPARATION_TOL);
    }

    #[test]
    fn boundary_certificate_rejects_ambiguous_point() {
        // The alternating address projects deep into the overlap of the two
        // first-level cylinders, so flipping its leading digit cannot be
        // excluded.
        let bp = pair(1.1, 1.05);
        let w = FiniteWord::parse("pmpmpmpmpmpmpmpm").unwrap();
        let cert = boundary_certificate(&bp, &w, Digit::M).unwrap();
        assert!(!cert.certified);
        assert!(cert.min_margin <= SEPARATION_TOL);
    }
}
