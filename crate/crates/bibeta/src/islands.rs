//! The island chain: six families of parameter pairs where the two halves
//! of the attractor share a point, ringing the isolated disconnected
//! component near (1.335, 1.647).
//!
//! A ternary word `w` of length `n` has the polynomial `P_w(x) = sum w_i
//! x^{n-i}`. If a pair of bases is a common root of the series of `w`
//! followed by any tail, the two halves of the attractor intersect, so the
//! pair lies in the connectedness region. The set of such pairs for a fixed
//! `w`, over all ternary tails, is the region `R_w`; it is contained in the
//! box cut out by the extreme tails, whose corners are roots of `(x - 1)
//! P_w(x) +- 1`. Property RD (a derivative margin over those boxes) makes
//! every tail's root pair exist and stay inside the box.
//!
//! Chaining six regions in a ring needs each consecutive pair to share a
//! parameter point. Four links hold, by exact shared addresses and by
//! crossed sub-boxes; the ring, however, does not close: refined covers of
//! the fifth and first regions separate with a definite gap, so the fifth
//! and sixth regions cannot meet.

use serde::Serialize;

use crate::numeric::{bisect, derivative, horner, newton_polish, roots_in_interval};
use crate::symbolic::{BetaPair, Digit, FiniteWord, PeriodicAddress};
use crate::{Error, Result};

/// Comparison tolerance for frozen constants.
pub const ISLAND_TOL: f64 = 1e-8;
/// Residual tolerance for shared-address identities.
pub const IDENTITY_TOL: f64 = 1e-9;

/// The polynomial of a ternary word, `P_w(x) = sum w_i x^{n-i}`.
#[derive(Clone, Debug)]
pub struct TernaryPolynomial {
    word: FiniteWord,
    coeffs: Vec<f64>,
}

impl TernaryPolynomial {
    /// Build the polynomial of a word; the leading digit must be `p` so the
    /// polynomial is monic.
    pub fn from_word(word: &FiniteWord) -> Result<Self> {
        if word.digits().first() != Some(&Digit::P) {
            return Err(Error::Domain(
                "a region word must start with the digit p".into(),
            ));
        }
        let coeffs = word.digits().iter().map(|d| d.value() as f64).collect();
        Ok(TernaryPolynomial {
            word: word.clone(),
            coeffs,
        })
    }

    /// The word.
    pub fn word(&self) -> &FiniteWord {
        &self.word
    }

    /// Coefficients in descending powers.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Polynomial degree, one less than the word length.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `P(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    /// `P'(x)`.
    pub fn eval_deriv(&self, x: f64) -> f64 {
        horner(&derivative(&self.coeffs), x)
    }

    /// The polynomial of `w.d`, which is `x P_w + d`.
    pub fn extended(&self, d: Digit) -> TernaryPolynomial {
        let mut word = self.word.clone();
        word.push(d);
        let mut coeffs = self.coeffs.clone();
        coeffs.push(d.value() as f64);
        TernaryPolynomial { word, coeffs }
    }

    /// The two roots of `P` in `(1, 2)`; exactly two must exist.
    pub fn base_roots(&self) -> Result<(f64, f64)> {
        let d = derivative(&self.coeffs);
        let roots = roots_in_interval(
            &|x| horner(&self.coeffs, x),
            &|x| horner(&d, x),
            1.0 + 1e-9,
            2.0,
            1e-4,
        );
        if roots.len() != 2 {
            return Err(Error::Numeric(format!(
                "expected two base roots in (1, 2), found {}",
                roots.len()
            )));
        }
        Ok((roots[0], roots[1]))
    }
}

/// Upper bound for `|P''|` on `(0, xhi]` from the coefficient moduli.
fn second_deriv_bound(coeffs: &[f64], xhi: f64) -> f64 {
    let deg = coeffs.len() - 1;
    let mut sum = 0.0;
    for (i, c) in coeffs.iter().enumerate() {
        let k = deg - i;
        if k >= 2 {
            sum += c.abs() * (k * (k - 1)) as f64 * xhi.powi(k as i32 - 2);
        }
    }
    sum
}

/// The root of `(x - 1) P(x) + s` adjacent to a base root of `P`, found by
/// an expanding walk and bisection, polished to 1e-13.
fn perturbed_root(p: &TernaryPolynomial, root: f64, s: f64) -> Result<f64> {
    let g = |x: f64| (x - 1.0) * p.eval(x) + s;
    let dg = |x: f64| p.eval(x) + (x - 1.0) * p.eval_deriv(x);
    let slope = dg(root);
    if slope == 0.0 {
        return Err(Error::Numeric("flat perturbed polynomial at root".into()));
    }
    let dir = -s.signum() * slope.signum();
    let mut step = (1.0 / slope.abs()).min(0.05);
    let mut x = root;
    for _ in 0..200 {
        let next = root + dir * step;
        if next <= 1.0 || next >= 2.0 {
            return Err(Error::Numeric(
                "perturbed root escaped the base interval".into(),
            ));
        }
        if g(next) * s < 0.0 {
            x = next;
            break;
        }
        step *= 2.0;
    }
    if x == root {
        return Err(Error::Numeric("perturbed root not bracketed".into()));
    }
    let (lo, hi) = if x < root { (x, root) } else { (root, x) };
    let r = bisect(&g, lo, hi, 1e-13)?;
    Ok(newton_polish(&g, &dg, r, lo, hi))
}

/// Both perturbed roots around a base root, as an interval.
fn envelope(p: &TernaryPolynomial, root: f64) -> Result<(f64, f64)> {
    let a = perturbed_root(p, root, 1.0)?;
    let b = perturbed_root(p, root, -1.0)?;
    Ok(if a < b { (a, b) } else { (b, a) })
}

/// A certificate of property RD for a region word: on both root envelopes
/// the derivative dominates the tail perturbation.
#[derive(Clone, Debug, Serialize)]
pub struct RdCertificate {
    /// The word.
    pub word: FiniteWord,
    /// Smaller base root.
    pub beta1: f64,
    /// Larger base root.
    pub beta2: f64,
    /// Envelope around the smaller root.
    pub i1: (f64, f64),
    /// Envelope around the larger root.
    pub i2: (f64, f64),
    /// Certified minimum of `|P'|` over each envelope.
    pub min_abs_deriv: (f64, f64),
    /// Supremum of `1 / (x - 1)^2` over each envelope.
    pub required: (f64, f64),
    /// Certified minimum of the difference over each envelope.
    pub margin: (f64, f64),
    /// Whether both margins are positive.
    pub certified: bool,
}

/// Check property RD: over both envelopes, `|P'(x)| > 1 / (x - 1)^2`, so
/// every ternary tail's perturbed polynomial keeps exactly one root there.
///
/// Minima are certified on a grid with a Lipschitz remainder: the margin
/// function moves by at most `sup |P''| + 2 / (x_lo - 1)^3` per unit step.
pub fn check_rd(word: &FiniteWord) -> Result<RdCertificate> {
    let p = TernaryPolynomial::from_word(word)?;
    let (r1, r2) = p.base_roots()?;
    let i1 = envelope(&p, r1)?;
    let i2 = envelope(&p, r2)?;
    if i1.1 >= i2.0 {
        return Err(Error::Numeric("root envelopes overlap".into()));
    }
    let dp = derivative(&p.coeffs);
    let mut min_deriv = [f64::INFINITY; 2];
    let mut margin = [f64::INFINITY; 2];
    let mut required = [0.0f64; 2];
    for (slot, iv) in [i1, i2].iter().enumerate() {
        let (lo, hi) = *iv;
        let lip = second_deriv_bound(&p.coeffs, hi) + 2.0 / (lo - 1.0).powi(3);
        let n = 200usize;
        let h = (hi - lo) / n as f64;
        let mut dmin = f64::INFINITY;
        let mut mmin = f64::INFINITY;
        for k in 0..=n {
            let x = lo + k as f64 * h;
            let d = horner(&dp, x).abs();
            let m = d - 1.0 / ((x - 1.0) * (x - 1.0));
            dmin = dmin.min(d);
            mmin = mmin.min(m);
        }
        min_deriv[slot] = dmin - h * lip;
        margin[slot] = mmin - h * lip;
        required[slot] = 1.0 / ((lo - 1.0) * (lo - 1.0));
    }
    Ok(RdCertificate {
        word: word.clone(),
        beta1: r1,
        beta2: r2,
        i1,
        i2,
        min_abs_deriv: (min_deriv[0], min_deriv[1]),
        required: (required[0], required[1]),
        margin: (margin[0], margin[1]),
        certified: margin[0] > 0.0 && margin[1] > 0.0,
    })
}

/// The bounding box of a region, with the two extreme-tail corners.
#[derive(Clone, Debug, Serialize)]
pub struct RegionBox {
    /// The word.
    pub word: FiniteWord,
    /// Base-1 interval.
    pub x: (f64, f64),
    /// Base-2 interval.
    pub y: (f64, f64),
    /// The pair annihilating `w . p^infinity`.
    pub corner_p: (f64, f64),
    /// The pair annihilating `w . m^infinity`.
    pub corner_m: (f64, f64),
}

impl RegionBox {
    /// Strict containment of another box, all four sides.
    pub fn contains_box(&self, other: &RegionBox) -> bool {
        self.x.0 < other.x.0 && other.x.1 < self.x.1 && self.y.0 < other.y.0 && other.y.1 < self.y.1
    }
}

/// Compute the region box of a word from the perturbed roots on both sides
/// of both base roots; the word's polynomial must have exactly two roots in
/// `(1, 2)`.
pub fn region_box(word: &FiniteWord) -> Result<RegionBox> {
    let p = TernaryPolynomial::from_word(word)?;
    let (r1, r2) = p.base_roots()?;
    box_from_roots(&p, r1, r2)
}

/// The region box of `base . suffix`, tracking the base word's two root
/// branches digit by digit.
///
/// Extending a word can create new roots in `(1, 2)` far from the region,
/// so the box of a refined word is anchored to its parent: each appended
/// digit moves each branch root within the parent's envelope, where it is
/// bracketed by the perturbed endpoints.
pub fn sub_region_box(base: &FiniteWord, suffix: &FiniteWord) -> Result<RegionBox> {
    let p0 = TernaryPolynomial::from_word(base)?;
    let (r1, r2) = p0.base_roots()?;
    let (p, a, b) = refined_roots(&p0, r1, r2, suffix)?;
    box_from_roots(&p, a, b)
}

fn refined_roots(
    parent: &TernaryPolynomial,
    r1: f64,
    r2: f64,
    suffix: &FiniteWord,
) -> Result<(TernaryPolynomial, f64, f64)> {
    let mut p = parent.clone();
    let mut a = r1;
    let mut b = r2;
    for d in suffix.digits() {
        let e1 = envelope(&p, a)?;
        let e2 = envelope(&p, b)?;
        p = p.extended(*d);
        a = child_root(&p, e1)?;
        b = child_root(&p, e2)?;
    }
    Ok((p, a, b))
}

fn box_from_roots(p: &TernaryPolynomial, r1: f64, r2: f64) -> Result<RegionBox> {
    let xp = perturbed_root(p, r1, 1.0)?;
    let xm = perturbed_root(p, r1, -1.0)?;
    let yp = perturbed_root(p, r2, 1.0)?;
    let ym = perturbed_root(p, r2, -1.0)?;
    Ok(RegionBox {
        word: p.word().clone(),
        x: (xp.min(xm), xp.max(xm)),
        y: (yp.min(ym), yp.max(ym)),
        corner_p: (xp, yp),
        corner_m: (xm, ym),
    })
}

/// A pair of bases with a shared point of the two attractor halves.
#[derive(Clone, Debug, Serialize)]
pub struct CommonRootPair {
    /// The ternary word, a common root certificate.
    pub word: FiniteWord,
    /// Smaller base.
    pub beta1: f64,
    /// Larger base.
    pub beta2: f64,
    /// Periodic address through the plus half.
    pub address_a: String,
    /// Periodic address through the minus half.
    pub address_b: String,
    /// Largest coordinate difference between the two projections.
    pub residual: f64,
}

/// From a ternary word whose polynomial has two roots in `(1, 2)`, build
/// the pair of plus/minus addresses meeting at one point.
///
/// The split sends digit `1` to `(p, m)`, digit `-1` to `(m, p)` and digit
/// `0` to `(p, p)`, so the address difference is twice the word and the two
/// periodic points coincide exactly at the common roots.
pub fn common_roots(word: &FiniteWord) -> Result<CommonRootPair> {
    let p = TernaryPolynomial::from_word(word)?;
    let (r1, r2) = p.base_roots()?;
    let bp = BetaPair::new(r1, r2)?;
    let mut da = Vec::new();
    let mut db = Vec::new();
    for d in word.digits() {
        let (a, b) = match d {
            Digit::P => (Digit::P, Digit::M),
            Digit::M => (Digit::M, Digit::P),
            Digit::Z => (Digit::P, Digit::P),
        };
        da.push(a);
        db.push(b);
    }
    let addr_a = PeriodicAddress::new(FiniteWord::empty(), FiniteWord::new(da))?;
    let addr_b = PeriodicAddress::new(FiniteWord::empty(), FiniteWord::new(db))?;
    let pa = addr_a.project(&bp)?;
    let pb = addr_b.project(&bp)?;
    let residual = (pa.0 - pb.0).abs().max((pa.1 - pb.1).abs());
    if residual > IDENTITY_TOL {
        return Err(Error::Numeric(format!(
            "projections disagree by {residual:e} at the common roots"
        )));
    }
    Ok(CommonRootPair {
        word: word.clone(),
        beta1: r1,
        beta2: r2,
        address_a: addr_a.to_string(),
        address_b: addr_b.to_string(),
        residual,
    })
}

/// The six words whose regions ring the isolated disconnected component, in
/// chain order.
pub fn island_words() -> Vec<FiniteWord> {
    [
        "pmmmpzzppzppzppz",
        "pmmmzpppppppmz",
        "pmmmzpppppppmp",
        "pmmmzpppppppzm",
        "pmmmpzzppzpppzpz",
        "pmmmpzzppzppzppzzzzzzp",
    ]
    .iter()
    .map(|s| FiniteWord::parse(s).expect("island words are well-formed"))
    .collect()
}

/// Evidence attached to one link of the chain.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum LinkEvidence {
    /// A single parameter pair carries vanishing addresses through both
    /// words.
    ExactIdentity {
        /// The shared pair.
        point: (f64, f64),
        /// First word's address.
        address_a: String,
        /// Second word's address.
        address_b: String,
        /// Largest series residual over both addresses and coordinates.
        residual: f64,
    },
    /// Two sub-boxes cross: the first spans the second horizontally while
    /// the second spans the first vertically, so the connecting curves
    /// inside them intersect.
    Straddle {
        /// Sub-box on the first word.
        box_a: RegionBox,
        /// Sub-box on the second word.
        box_b: RegionBox,
        /// Smallest of the four strict-inclusion margins.
        margin: f64,
    },
    /// The first region's word extends the second's, so its whole region is
    /// contained in the other.
    Nesting {
        /// Box of the extending word.
        inner: RegionBox,
        /// Box of the prefix word.
        outer: RegionBox,
    },
    /// Refined covers of the two regions separate: the regions do not meet.
    Disproven {
        /// Ternary refinement depth of both covers.
        level: u32,
        /// Boxes per cover.
        boxes: (usize, usize),
        /// Least axis gap over all cross pairs of cover boxes.
        gap: f64,
    },
}

impl LinkEvidence {
    /// Whether this evidence affirms the link.
    pub fn affirms(&self) -> bool {
        !matches!(self, LinkEvidence::Disproven { .. })
    }
}

/// One link of the chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainLink {
    /// Index of the first word, 1-based in chain order.
    pub from: usize,
    /// Index of the second word.
    pub to: usize,
    /// The evidence.
    pub evidence: LinkEvidence,
}

/// The full audit of the island chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    /// The six words.
    pub words: Vec<FiniteWord>,
    /// Property RD certificates, one per word.
    pub rd: Vec<RdCertificate>,
    /// The six links in ring order.
    pub links: Vec<ChainLink>,
    /// Whether every link affirms; the ring does not close.
    pub complete: bool,
}

/// Polish one coordinate of a shared pair so the address series vanishes,
/// by a secant iteration from a starting guess.
fn polish_coordinate(addr: &PeriodicAddress, guess: f64) -> Result<f64> {
    let f = |beta: f64| -> Result<f64> { addr.eval_series(1.0 / beta) };
    let mut x0 = guess;
    let mut x1 = guess + 1e-9;
    let mut f0 = f(x0)?;
    for _ in 0..60 {
        let f1 = f(x1)?;
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !x2.is_finite() || (x2 - x1).abs() > 1e-3 {
            return Err(Error::Numeric("secant polish diverged".into()));
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        if (x1 - x0).abs() < 1e-15 {
            break;
        }
    }
    Ok(x1)
}

/// Verify an exact-identity link: polish the pair on the first address,
/// then evaluate both addresses there.
fn exact_identity_link(
    addr_a: &PeriodicAddress,
    addr_b: &PeriodicAddress,
    guess: (f64, f64),
) -> Result<((f64, f64), f64)> {
    let b1 = polish_coordinate(addr_a, guess.0)?;
    let b2 = polish_coordinate(addr_a, guess.1)?;
    let mut residual = 0.0f64;
    for addr in [addr_a, addr_b] {
        for beta in [b1, b2] {
            residual = residual.max(addr.eval_series(1.0 / beta)?.abs());
        }
    }
    Ok(((b1, b2), residual))
}

fn append_word(base: &FiniteWord, suffix: &str) -> FiniteWord {
    base.concat(&FiniteWord::parse(suffix).expect("suffix is well-formed"))
}

/// All level-`depth` ternary refinement boxes of a region, by recursive
/// descent: each child's roots are bracketed by the parent's envelope.
fn cover_boxes(word: &FiniteWord, depth: u32) -> Result<Vec<RegionBox>> {
    let p = TernaryPolynomial::from_word(word)?;
    let (r1, r2) = p.base_roots()?;
    let mut out = Vec::new();
    descend(&p, r1, r2, depth, &mut out)?;
    Ok(out)
}

fn descend(
    p: &TernaryPolynomial,
    r1: f64,
    r2: f64,
    depth: u32,
    out: &mut Vec<RegionBox>,
) -> Result<()> {
    let e1 = envelope(p, r1)?;
    let e2 = envelope(p, r2)?;
    if depth == 0 {
        out.push(RegionBox {
            word: p.word().clone(),
            x: e1,
            y: e2,
            corner_p: (0.0, 0.0),
            corner_m: (0.0, 0.0),
        });
        return Ok(());
    }
    for d in [Digit::P, Digit::Z, Digit::M] {
        let child = p.extended(d);
        let c1 = child_root(&child, e1)?;
        let c2 = child_root(&child, e2)?;
        descend(&child, c1, c2, depth - 1, out)?;
    }
    Ok(())
}

/// The unique root of a child polynomial inside the parent envelope; the
/// parent's perturbed endpoints bracket it by the tail-mass argument.
fn child_root(child: &TernaryPolynomial, parent: (f64, f64)) -> Result<f64> {
    let f = |x: f64| child.eval(x);
    let df = |x: f64| child.eval_deriv(x);
    let r = bisect(&f, parent.0, parent.1, 1e-13)?;
    Ok(newton_polish(&f, &df, r, parent.0, parent.1))
}

/// Least axis gap between two families of rectangles; negative or zero
/// means some cross pair overlaps.
fn cover_gap(a: &[RegionBox], b: &[RegionBox]) -> f64 {
    let mut min_gap = f64::INFINITY;
    for ra in a {
        for rb in b {
            let gx = (rb.x.0 - ra.x.1).max(ra.x.0 - rb.x.1);
            let gy = (rb.y.0 - ra.y.1).max(ra.y.0 - rb.y.1);
            min_gap = min_gap.min(gx.max(gy));
        }
    }
    min_gap
}

/// Default refinement depth for the chain's cover disproof.
pub const DISPROOF_LEVEL: u32 = 9;

/// Attempt the fifth link by separating refined covers of the two regions.
///
/// Returns the disproof evidence when every cross pair of cover boxes is
/// separated; an overlap would instead leave the link undecided at this
/// level.
pub fn cover_separation(wa: &FiniteWord, wb: &FiniteWord, level: u32) -> Result<LinkEvidence> {
    let a = cover_boxes(wa, level)?;
    let b = cover_boxes(wb, level)?;
    let gap = cover_gap(&a, &b);
    if gap <= 0.0 {
        return Err(Error::Numeric(format!(
            "covers still overlap at level {level}"
        )));
    }
    Ok(LinkEvidence::Disproven {
        level,
        boxes: (a.len(), b.len()),
        gap,
    })
}

/// Run the whole chain verification.
///
/// All six words carry property RD; links one through four hold by crossed
/// sub-boxes and exact identities, and the sixth closes onto the first by
/// word nesting. The fifth link is refuted by cover separation, so
/// `complete` is false: the ring around the isolated component does not
/// close along this route.
pub fn overlap_chain() -> Result<ChainReport> {
    let words = island_words();
    let rd: Vec<RdCertificate> = words.iter().map(check_rd).collect::<Result<_>>()?;
    let mut links = Vec::new();

    // Link 1-2: crossed sub-boxes.
    let a12 = sub_region_box(&words[1], &FiniteWord::parse("m^11")?)?;
    let b12 = sub_region_box(&words[0], &FiniteWord::parse("zpppzpzp")?)?;
    links.push(ChainLink {
        from: 1,
        to: 2,
        evidence: straddle(a12, b12)?,
    });

    // Link 2-3: one pair annihilates addresses through both words. The
    // shared pair is the root pair of the 13-letter prefix c with w2 = c.z
    // and w3 = c.p; the addresses are (c z)^inf and c p v c^inf with
    // v the shift of c by one letter.
    let c = FiniteWord::parse("pmmmzpppppppm").unwrap();
    let v = FiniteWord::parse("mmmzpppppppmz").unwrap();
    let addr2 = PeriodicAddress::new(FiniteWord::empty(), append_word(&c, "z"))?;
    let addr3 = PeriodicAddress::new(append_word(&words[2], &v.to_string()), c.clone())?;
    let (j23, res23) = exact_identity_link(
        &addr2,
        &addr3,
        (1.3781222522312327, 1.6437114886231924),
    )?;
    links.push(ChainLink {
        from: 2,
        to: 3,
        evidence: identity(j23, &addr2, &addr3, res23)?,
    });

    // Link 3-4: another shared pair, with eventually periodic addresses
    // built from the 12-letter prefix e and its negation.
    let e = FiniteWord::parse("pmmmzppppppp").unwrap();
    let per3 = e.concat(&e.negate());
    let per4 = append_word(&e, "z").concat(&append_word(&e.negate(), "z"));
    let addr3b = PeriodicAddress::new(append_word(&words[2], "ppzm^7"), per3)?;
    let addr4 = PeriodicAddress::new(append_word(&words[3], "pppzm^7z"), per4)?;
    let (j34, res34) = exact_identity_link(&addr3b, &addr4, (1.400138257862, 1.637769705449))?;
    links.push(ChainLink {
        from: 3,
        to: 4,
        evidence: identity(j34, &addr3b, &addr4, res34)?,
    });

    // Link 4-5: crossed sub-boxes.
    let a45 = sub_region_box(&words[3], &FiniteWord::parse("m^14")?)?;
    let b45 = sub_region_box(&words[4], &FiniteWord::parse("ppzzpppzpmz")?)?;
    links.push(ChainLink {
        from: 4,
        to: 5,
        evidence: straddle(a45, b45)?,
    });

    // Link 5-6: refuted. The sixth word extends the first, so its region
    // sits inside the first's; separating the refined covers of the fifth
    // and first regions rules the link out entirely.
    links.push(ChainLink {
        from: 5,
        to: 6,
        evidence: cover_separation(&words[4], &words[0], DISPROOF_LEVEL)?,
    });

    // Link 6-1: word nesting.
    let inner = region_box(&words[5])?;
    let outer = region_box(&words[0])?;
    if !outer.contains_box(&inner) {
        return Err(Error::Numeric("nested region box escapes its prefix".into()));
    }
    links.push(ChainLink {
        from: 6,
        to: 1,
        evidence: LinkEvidence::Nesting { inner, outer },
    });

    let complete =
        rd.iter().all(|c| c.certified) && links.iter().all(|l| l.evidence.affirms());
    Ok(ChainReport {
        words,
        rd,
        links,
        complete,
    })
}

fn straddle(box_a: RegionBox, box_b: RegionBox) -> Result<LinkEvidence> {
    let margins = [
        box_b.x.0 - box_a.x.0,
        box_a.x.1 - box_b.x.1,
        box_a.y.0 - box_b.y.0,
        box_b.y.1 - box_a.y.1,
    ];
    let margin = margins.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    if margin <= 0.0 {
        return Err(Error::Numeric(
            "sub-boxes do not cross; straddle evidence fails".into(),
        ));
    }
    Ok(LinkEvidence::Straddle {
        box_a,
        box_b,
        margin,
    })
}

fn identity(
    point: (f64, f64),
    addr_a: &PeriodicAddress,
    addr_b: &PeriodicAddress,
    residual: f64,
) -> Result<LinkEvidence> {
    if residual > IDENTITY_TOL {
        return Err(Error::Numeric(format!(
            "shared-address residual {residual:e} exceeds tolerance"
        )));
    }
    Ok(LinkEvidence::ExactIdentity {
        point,
        address_a: addr_a.to_string(),
        address_b: addr_b.to_string(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn island_words_have_expected_shapes() {
        let words = island_words();
        let lens: Vec<usize> = words.iter().map(|w| w.len()).collect();
        assert_eq!(lens, vec![16, 14, 14, 14, 16, 22]);
        // The sixth word extends the first.
        assert_eq!(
            words[5].digits()[..16],
            words[0].digits()[..],
            "w6 must extend w1"
        );
        // Words two and three share the 13-letter prefix c.
        assert_eq!(words[1].digits()[..13], words[2].digits()[..13]);
    }

    #[test]
    fn rd_certificate_matches_frozen_data_for_w6() {
        let words = island_words();
        let cert = check_rd(&words[5]).unwrap();
        assert!((cert.beta1 - 1.303783197718).abs() < ISLAND_TOL);
        assert!((cert.beta2 - 1.649444450603).abs() < ISLAND_TOL);
        assert!((cert.i1.0 - 1.295838683684134).abs() < ISLAND_TOL);
        assert!((cert.i1.1 - 1.3104111530899378).abs() < ISLAND_TOL);
        assert!((cert.i2.0 - 1.6493728063419981).abs() < ISLAND_TOL);
        assert!((cert.i2.1 - 1.6495159443030687).abs() < ISLAND_TOL);
        // Derivative at the roots themselves, then the certified minima
        // over the whole envelopes.
        let p = TernaryPolynomial::from_word(&words[5]).unwrap();
        assert!((p.eval_deriv(cert.beta1).abs() - 457.659).abs() < 0.1);
        assert!((p.eval_deriv(cert.beta2).abs() - 21514.631).abs() < 1.0);
        assert!((cert.min_abs_deriv.0 - 379.438).abs() < 0.5);
        assert!((cert.min_abs_deriv.1 - 21465.503).abs() < 2.0);
        assert!((cert.required.0 - 11.4259).abs() < 1e-3);
        assert!((cert.required.1 - 2.3714).abs() < 1e-3);
        assert!(cert.certified);
    }

    #[test]
    fn all_island_words_have_property_rd() {
        for w in island_words() {
            let cert = check_rd(&w).unwrap();
            assert!(cert.certified, "{}", w);
            assert!(cert.margin.0 > 0.0 && cert.margin.1 > 0.0);
        }
    }

    #[test]
    fn common_roots_of_the_degree_ten_word() {
        let w = FiniteWord::parse("pmmmppmpppp").unwrap();
        let pair = common_roots(&w).unwrap();
        assert!((pair.beta1 - 1.3406726161432094).abs() < 1e-10);
        assert!((pair.beta2 - 1.5712511149168538).abs() < 1e-10);
        assert!((pair.beta1 * pair.beta2 - 2.106533342853513).abs() < 1e-10);
        assert!(pair.residual <= IDENTITY_TOL);
    }

    #[test]
    fn common_roots_of_the_ternary_words() {
        let w13 = FiniteWord::parse("pmmzmmpmpppppp").unwrap();
        let pair = common_roots(&w13).unwrap();
        assert!((pair.beta1 - 1.1221952844616951).abs() < 1e-10);
        assert!((pair.beta2 - 1.7769957002300183).abs() < 1e-10);

        let w11 = FiniteWord::parse("pmmmzpmppppp").unwrap();
        let pair = common_roots(&w11).unwrap();
        assert!((pair.beta1 - 1.1908427104772672).abs() < 1e-10);
        assert!((pair.beta2 - 1.7695425766832034).abs() < 1e-10);
    }

    #[test]
    fn region_boxes_match_frozen_corners() {
        let words = island_words();
        let a12 = sub_region_box(&words[1], &FiniteWord::parse("m^11").unwrap()).unwrap();
        assert!((a12.corner_p.0 - 1.323453274).abs() < ISLAND_TOL);
        assert!((a12.corner_p.1 - 1.648718809).abs() < ISLAND_TOL);
        assert!((a12.corner_m.0 - 1.314160784).abs() < ISLAND_TOL);
        assert!((a12.corner_m.1 - 1.648757942).abs() < ISLAND_TOL);
        let b12 = sub_region_box(&words[0], &FiniteWord::parse("zpppzpzp").unwrap()).unwrap();
        assert!((b12.corner_p.0 - 1.321413068).abs() < ISLAND_TOL);
        assert!((b12.corner_p.1 - 1.648715950).abs() < ISLAND_TOL);
        assert!((b12.corner_m.0 - 1.315100914).abs() < ISLAND_TOL);
        assert!((b12.corner_m.1 - 1.648769575).abs() < ISLAND_TOL);
    }

    #[test]
    fn chain_report_is_honest_about_the_gap() {
        let report = overlap_chain().unwrap();
        assert!(!report.complete);
        assert_eq!(report.links.len(), 6);
        assert!(report.rd.iter().all(|c| c.certified));
        let affirmed: Vec<bool> = report.links.iter().map(|l| l.evidence.affirms()).collect();
        assert_eq!(affirmed, vec![true, true, true, true, false, true]);
        match &report.links[4].evidence {
            LinkEvidence::Disproven { level, boxes, gap } => {
                assert_eq!(*level, DISPROOF_LEVEL);
                assert_eq!(boxes.0, 19683);
                assert_eq!(boxes.1, 19683);
                assert!((gap - 7.19e-5).abs() < 1e-6, "gap {gap}");
            }
            other => panic!("expected a disproof, got {other:?}"),
        }
        for link in &report.links[..2] {
            match &link.evidence {
                LinkEvidence::ExactIdentity { residual, .. } => {
                    assert!(*residual <= IDENTITY_TOL)
                }
                LinkEvidence::Straddle { margin, .. } => assert!(*margin > 0.0),
                other => panic!("unexpected evidence {other:?}"),
            }
        }
    }

    #[test]
    fn exact_identity_points_match_frozen_values() {
        let report = overlap_chain().unwrap();
        match &report.links[1].evidence {
            LinkEvidence::ExactIdentity { point, .. } => {
                assert!((point.0 - 1.3781222522312328).abs() < 1e-9);
                assert!((point.1 - 1.6437114886231924).abs() < 1e-9);
            }
            other => panic!("unexpected evidence {other:?}"),
        }
        match &report.links[2].evidence {
            LinkEvidence::ExactIdentity { point, .. } => {
                assert!((point.0 - 1.400138257862).abs() < 1e-9);
                assert!((point.1 - 1.637769705449).abs() < 1e-9);
            }
            other => panic!("unexpected evidence {other:?}"),
        }
    }
}
