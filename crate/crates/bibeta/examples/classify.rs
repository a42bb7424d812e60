//! Classify a handful of base pairs: total disconnectedness, zero
//! exclusion, and the interior-point certificate.

use bibeta::hullcover::{classify_pixel, disconnectedness, zero_excluded, ScanMode};
use bibeta::symbolic::BetaPair;

fn main() -> bibeta::Result<()> {
    let pairs = [
        (1.9, 1.35, "well inside the disconnected region"),
        (1.335438104, 1.646743824, "the isolated chevron component"),
        (1.1221952844616951, 1.7769957002300183, "zero excluded, thin"),
        (1.3406726161432094, 1.5712511149168538, "zero on the boundary"),
        (1.15, 1.2, "small bases, deep overlap"),
    ];
    for (b1, b2, label) in pairs {
        let bp = BetaPair::new(b1, b2)?;
        let s = disconnectedness(&bp, 16)?;
        let z = zero_excluded(&bp, 25)?;
        let zcls = classify_pixel(&bp, ScanMode::Z, 25)?;
        println!("({b1:.10}, {b2:.10})  {label}");
        println!("  disconnectedness: {s:?}");
        println!("  zero exclusion:   {z:?}  (scan class {zcls:?})");
    }
    Ok(())
}
