//! Planar primitives: points, axis-diagonal affine maps, convex polygons,
//! separation verdicts, and certified hulls of the attractor.
//!
//! All polygon predicates use the shared geometric slack [`EPS_GEOM`] unless a
//! caller passes its own tolerance.

use serde::Serialize;

use crate::symbolic::{BetaPair, Digit, FiniteWord};
use crate::{Error, Result};

/// Geometric comparison slack used by polygon predicates.
pub const EPS_GEOM: f64 = 1e-12;

/// A point in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Point2 {
    /// Horizontal coordinate (the `b1` series value).
    pub x: f64,
    /// Vertical coordinate (the `b2` series value).
    pub y: f64,
}

impl Point2 {
    /// Construct a point.
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// An affine map with diagonal linear part: `(x, y) -> (sx * x + ox, sy * y + oy)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalAffineMap {
    /// Diagonal scales `(sx, sy)`.
    pub scale: (f64, f64),
    /// Translation `(ox, oy)`.
    pub offset: (f64, f64),
}

impl DiagonalAffineMap {
    /// The identity map.
    pub fn identity() -> Self {
        DiagonalAffineMap {
            scale: (1.0, 1.0),
            offset: (0.0, 0.0),
        }
    }

    /// The map `T_d(x, y) = ((x + d)/b1, (y + d)/b2)` for `d = +1` or `-1`.
    pub fn from_digit(d: Digit, bp: &BetaPair) -> Result<Self> {
        let v = d.value();
        if v == 0 {
            return Err(Error::Domain(
                "digit z does not define a map of the system".into(),
            ));
        }
        let v = v as f64;
        Ok(DiagonalAffineMap {
            scale: (bp.lambda(), bp.mu()),
            offset: (v * bp.lambda(), v * bp.mu()),
        })
    }

    /// Apply the map to a point.
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.scale.0 * p.x + self.offset.0,
            self.scale.1 * p.y + self.offset.1,
        )
    }

    /// Composition `self o inner` (apply `inner` first).
    pub fn compose(&self, inner: &DiagonalAffineMap) -> Self {
        DiagonalAffineMap {
            scale: (self.scale.0 * inner.scale.0, self.scale.1 * inner.scale.1),
            offset: (
                self.scale.0 * inner.offset.0 + self.offset.0,
                self.scale.1 * inner.offset.1 + self.offset.1,
            ),
        }
    }

    /// The unique fixed point of a contracting map.
    pub fn fixed_point(&self) -> Point2 {
        Point2::new(
            self.offset.0 / (1.0 - self.scale.0),
            self.offset.1 / (1.0 - self.scale.1),
        )
    }
}

/// The composed map `T_w = T_{w_1} o ... o T_{w_n}` of a `{p, m}` word.
///
/// Words containing `z` are rejected: the zero digit is an address symbol, not
/// a map of the system.
pub fn word_map(word: &FiniteWord, bp: &BetaPair) -> Result<DiagonalAffineMap> {
    let mut acc = DiagonalAffineMap::identity();
    for &d in word.digits() {
        acc = acc.compose(&DiagonalAffineMap::from_digit(d, bp)?);
    }
    Ok(acc)
}

/// A convex polygon with vertices in counterclockwise order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    verts: Vec<Point2>,
}

impl ConvexPolygon {
    /// Convex hull of a point set (monotone chain). Collinear interior points
    /// are dropped; the result may degenerate to a segment or a single point.
    pub fn from_points(mut pts: Vec<Point2>) -> Self {
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
        if pts.len() <= 2 {
            return ConvexPolygon { verts: pts };
        }
        let mut lower: Vec<Point2> = Vec::with_capacity(pts.len() + 1);
        for &p in &pts {
            while lower.len() >= 2
                && lower[lower.len() - 1]
                    .sub(lower[lower.len() - 2])
                    .cross(p.sub(lower[lower.len() - 2]))
                    <= 0.0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point2> = Vec::with_capacity(pts.len() + 1);
        for &p in pts.iter().rev() {
            while upper.len() >= 2
                && upper[upper.len() - 1]
                    .sub(upper[upper.len() - 2])
                    .cross(p.sub(upper[upper.len() - 2]))
                    <= 0.0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        ConvexPolygon { verts: lower }
    }

    /// Vertices in counterclockwise order.
    pub fn vertices(&self) -> &[Point2] {
        &self.verts
    }

    /// Verify counterclockwise convexity with signed-distance slack `eps`.
    pub fn is_valid_ccw(&self, eps: f64) -> bool {
        let n = self.verts.len();
        if n <= 2 {
            return true;
        }
        (0..n).all(|i| {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % n];
            let c = self.verts[(i + 2) % n];
            let e = b.sub(a);
            let len = e.norm().max(1e-300);
            e.cross(c.sub(a)) / len >= -eps
        })
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.verts {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Whether `p` lies in the polygon, with boundary slack `tol` (a signed
    /// distance; positive `tol` accepts points slightly outside).
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        let n = self.verts.len();
        match n {
            0 => false,
            1 => p.sub(self.verts[0]).norm() <= tol,
            2 => dist_point_segment(p, self.verts[0], self.verts[1]) <= tol,
            _ => {
                for i in 0..n {
                    let a = self.verts[i];
                    let b = self.verts[(i + 1) % n];
                    let e = b.sub(a);
                    if e.cross(p.sub(a)) < -tol * e.norm() {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Signed distance from `p` to the polygon: positive outside (distance to
    /// the boundary), negative inside (minus the depth), zero on the boundary.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        let n = self.verts.len();
        match n {
            0 => f64::INFINITY,
            1 => p.sub(self.verts[0]).norm(),
            2 => dist_point_segment(p, self.verts[0], self.verts[1]),
            _ => {
                let mut inside = true;
                let mut min_line = f64::INFINITY;
                let mut min_seg = f64::INFINITY;
                for i in 0..n {
                    let a = self.verts[i];
                    let b = self.verts[(i + 1) % n];
                    let e = b.sub(a);
                    let len = e.norm().max(1e-300);
                    let side = e.cross(p.sub(a)) / len;
                    if side < 0.0 {
                        inside = false;
                    }
                    min_line = min_line.min(side);
                    min_seg = min_seg.min(dist_point_segment(p, a, b));
                }
                if inside {
                    -min_line
                } else {
                    min_seg
                }
            }
        }
    }

    /// Image under an axis-diagonal affine map with positive scales.
    pub fn apply_map(&self, m: &DiagonalAffineMap) -> Self {
        debug_assert!(m.scale.0 > 0.0 && m.scale.1 > 0.0);
        ConvexPolygon {
            verts: self.verts.iter().map(|&v| m.apply(v)).collect(),
        }
    }

    /// Minkowski sum with the square `[-eps, eps]^2`.
    pub fn pad_square(&self, eps: f64) -> Self {
        let mut pts = Vec::with_capacity(4 * self.verts.len());
        for &v in &self.verts {
            for (dx, dy) in [(-eps, -eps), (-eps, eps), (eps, -eps), (eps, eps)] {
                pts.push(Point2::new(v.x + dx, v.y + dy));
            }
        }
        ConvexPolygon::from_points(pts)
    }
}

fn dist_point_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let e = b.sub(a);
    let l2 = e.dot(e);
    if l2 == 0.0 {
        return p.sub(a).norm();
    }
    let t = (p.sub(a).dot(e) / l2).clamp(0.0, 1.0);
    p.sub(Point2::new(a.x + t * e.x, a.y + t * e.y)).norm()
}

/// Outcome of a pairwise separation test at a given tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeparationVerdict {
    /// The sets are at Euclidean distance `margin > tol`.
    Disjoint {
        /// Certified distance between the sets.
        margin: f64,
    },
    /// Neither separation nor penetration exceeds the tolerance.
    TouchingOrUncertain,
    /// The interiors overlap with penetration depth `depth > tol`.
    Overlapping {
        /// Certified penetration depth (minimum translation to separate).
        depth: f64,
    },
}

/// Deterministic separation test for two convex polygons.
///
/// Uses a separating-axis pass over both polygons' edge normals to decide
/// overlap, exact vertex-to-edge distances for the disjoint margin, and the
/// minimum translation depth when the interiors intersect.
pub fn separate(p: &ConvexPolygon, q: &ConvexPolygon, tol: f64) -> SeparationVerdict {
    let pv = p.vertices();
    let qv = q.vertices();
    if pv.is_empty() || qv.is_empty() {
        return SeparationVerdict::Disjoint { margin: f64::INFINITY };
    }
    let mut any_separating = false;
    let mut min_overlap = f64::INFINITY;
    let mut axes = Vec::with_capacity(pv.len() + qv.len());
    collect_axes(pv, &mut axes);
    collect_axes(qv, &mut axes);
    if axes.is_empty() {
        // Both degenerate to points.
        let d = pv[0].sub(qv[0]).norm();
        return if d > tol {
            SeparationVerdict::Disjoint { margin: d }
        } else {
            SeparationVerdict::TouchingOrUncertain
        };
    }
    for axis in axes {
        let (a1, b1) = project(pv, axis);
        let (a2, b2) = project(qv, axis);
        let sep = (a2 - b1).max(a1 - b2);
        if sep > 0.0 {
            any_separating = true;
        } else {
            min_overlap = min_overlap.min(-sep);
        }
    }
    if any_separating {
        let d = polygon_distance(pv, qv);
        if d > tol {
            SeparationVerdict::Disjoint { margin: d }
        } else {
            SeparationVerdict::TouchingOrUncertain
        }
    } else if min_overlap > tol {
        SeparationVerdict::Overlapping { depth: min_overlap }
    } else {
        SeparationVerdict::TouchingOrUncertain
    }
}

fn collect_axes(verts: &[Point2], axes: &mut Vec<Point2>) {
    let n = verts.len();
    if n < 2 {
        return;
    }
    let count = if n == 2 { 1 } else { n };
    for i in 0..count {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let e = b.sub(a);
        let len = e.norm();
        if len > 0.0 {
            axes.push(Point2::new(-e.y / len, e.x / len));
        }
    }
    if n == 2 {
        // A segment also needs its own direction as an axis.
        let e = verts[1].sub(verts[0]);
        let len = e.norm();
        if len > 0.0 {
            axes.push(Point2::new(e.x / len, e.y / len));
        }
    }
}

fn project(verts: &[Point2], axis: Point2) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in verts {
        let t = v.dot(axis);
        lo = lo.min(t);
        hi = hi.max(t);
    }
    (lo, hi)
}

fn polygon_distance(pv: &[Point2], qv: &[Point2]) -> f64 {
    let mut d = f64::INFINITY;
    let edges = |v: &[Point2]| -> Vec<(Point2, Point2)> {
        match v.len() {
            1 => vec![(v[0], v[0])],
            2 => vec![(v[0], v[1])],
            n => (0..n).map(|i| (v[i], v[(i + 1) % n])).collect(),
        }
    };
    for &(a, b) in &edges(qv) {
        for &p in pv {
            d = d.min(dist_point_segment(p, a, b));
        }
    }
    for &(a, b) in &edges(pv) {
        for &q in qv {
            d = d.min(dist_point_segment(q, a, b));
        }
    }
    d
}

/// Certified inner and outer convex hulls of the attractor of the pair.
///
/// Requires `b1 > b2` (swap the coordinates first otherwise). The inner hull
/// is spanned by the projections of the addresses `m^k p^inf` and `p^k m^inf`
/// for `k = 0..=K` together with both fixed points, where `K` is minimal with
/// `max(2 lambda^{K+1}/(1-lambda), 2 mu^{K+1}/(1-mu)) < eps_hull`. The outer
/// hull is the inner hull padded by `eps_hull`, so that
/// `inner <= conv(A) <= outer`.
pub fn hull_of_attractor(bp: &BetaPair, eps_hull: f64) -> Result<(ConvexPolygon, ConvexPolygon)> {
    if !(bp.beta1() > bp.beta2()) {
        return Err(Error::Domain(
            "hull_of_attractor requires beta1 > beta2; swap the pair first".into(),
        ));
    }
    if !(eps_hull > 0.0) {
        return Err(Error::Domain("eps_hull must be positive".into()));
    }
    let (lam, mu) = (bp.lambda(), bp.mu());
    let tail = |x: f64, k: u32| 2.0 * x.powi(k as i32 + 1) / (1.0 - x);
    let mut k_cut = 0u32;
    while tail(lam, k_cut).max(tail(mu, k_cut)) >= eps_hull {
        k_cut += 1;
        if k_cut > 2_000_000 {
            return Err(Error::Numeric(
                "hull truncation index exceeded 2e6; eps_hull too small for this pair".into(),
            ));
        }
    }
    let mut pts = Vec::with_capacity(2 * k_cut as usize + 6);
    // s(m^k p^inf, x) = (2 x^{k+1} - x) / (1 - x); the p-side family is its
    // negation, and the fixed points are the k -> infinity limits.
    let mut powl = 1.0;
    let mut powm = 1.0;
    for _ in 0..=k_cut {
        powl *= lam;
        powm *= mu;
        let x = (2.0 * powl - lam) / (1.0 - lam);
        let y = (2.0 * powm - mu) / (1.0 - mu);
        pts.push(Point2::new(x, y));
        pts.push(Point2::new(-x, -y));
    }
    let fx = lam / (1.0 - lam);
    let fy = mu / (1.0 - mu);
    pts.push(Point2::new(fx, fy));
    pts.push(Point2::new(-fx, -fy));
    let inner = ConvexPolygon::from_points(pts);
    let outer = inner.pad_square(eps_hull);
    Ok((inner, outer))
}
