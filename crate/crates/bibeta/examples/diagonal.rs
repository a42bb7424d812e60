//! Walk the diagonal-difference tree: branch counts, the extreme branches,
//! and the renormalization factor.

use bibeta::diagonal::{
    count_admissible, diagonal_address, growth_exponent, renorm_factor, BranchSide,
};
use bibeta::symbolic::BetaPair;

fn main() -> bibeta::Result<()> {
    let bp = BetaPair::new(1.8, 1.6)?;
    let counts = count_admissible(&bp, 14, 1_000_000)?;
    println!("admissible words per level at (1.8, 1.6):");
    println!("  {counts:?}");
    println!("  growth exponent {:.6}", growth_exponent(&counts)?);

    let left = diagonal_address(&bp, 30, BranchSide::Leftmost)?;
    let right = diagonal_address(&bp, 30, BranchSide::Rightmost)?;
    println!("leftmost branch:  {}", left.word);
    println!("rightmost branch: {}", right.word);

    let bp = BetaPair::new(1.9, 1.3)?;
    println!("renormalization factor at (1.9, 1.3):");
    for n in [1u32, 5, 10, 20, 40, 60] {
        println!("  n = {n:2}: {:.12}", renorm_factor(&bp, n)?);
    }
    println!("  limit is the smaller base, {}", bp.beta2());
    Ok(())
}
