//! Compute the convex hull of an attractor and check the inner/outer
//! sandwich against sampled points.

use bibeta::geometry::Point2;
use bibeta::symbolic::BetaPair;

fn main() -> bibeta::Result<()> {
    let bp = BetaPair::new(1.8, 1.25)?;
    let (inner, outer) = bibeta::geometry::hull_of_attractor(&bp, 1e-9)?;

    println!("hull of the attractor at ({}, {})", bp.beta1(), bp.beta2());
    println!("inner hull has {} vertices:", inner.vertices().len());
    for v in inner.vertices() {
        println!("  ({:+.12}, {:+.12})", v.x, v.y);
    }
    let bbox = outer.bbox();
    println!(
        "outer bbox: x in [{:.9}, {:.9}], y in [{:.9}, {:.9}]",
        bbox.0.x, bbox.1.x, bbox.0.y, bbox.1.y
    );

    // Long random addresses land between the two hulls.
    let lambda = bp.lambda();
    let mu = bp.mu();
    let mut escapes = 0usize;
    let mut seed = 0x2545f4914f6cdd1du64;
    for _ in 0..20_000 {
        let (mut x, mut y, mut px, mut py) = (0.0, 0.0, 1.0, 1.0);
        for _ in 0..64 {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            let d = if seed & 1 == 0 { 1.0 } else { -1.0 };
            px *= lambda;
            py *= mu;
            x += d * px;
            y += d * py;
        }
        if !outer.contains(Point2::new(x, y), 1e-9) {
            escapes += 1;
        }
    }
    println!("sampled 20000 points, {escapes} escaped the outer hull");
    Ok(())
}
