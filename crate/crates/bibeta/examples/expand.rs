//! Expand one real number in two bases simultaneously with a single digit
//! string.

use bibeta::diagonal::simultaneous_expand;
use bibeta::symbolic::BetaPair;

fn main() -> bibeta::Result<()> {
    let bp = BetaPair::new(1.15, 1.2)?;
    let x = 0.41;
    let word = simultaneous_expand(&bp, x, 400)?;
    let r1 = (word.partial_sum(1.0 / bp.beta1()) - x).abs();
    let r2 = (word.partial_sum(1.0 / bp.beta2()) - x).abs();

    println!("target {x} at bases ({}, {})", bp.beta1(), bp.beta2());
    let letters: String = word.to_string();
    println!("first digits: {}", &letters[..60.min(letters.len())]);
    println!("residual in base 1: {r1:.3e}");
    println!("residual in base 2: {r2:.3e}");

    // Targets outside the certified box are rejected up front.
    match simultaneous_expand(&bp, 3.0, 400) {
        Err(e) => println!("target 3.0 is rejected: {e}"),
        Ok(_) => unreachable!("3.0 lies far outside the expansion box"),
    }
    Ok(())
}
