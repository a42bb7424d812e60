//! Boundary curves of the disconnectedness region: corner pairs, sampled
//! arcs, the extremal sum, and the single-function witness.

use bibeta::curves::{corollary16_extremum, pk_roots, s1_segment, solomyak_check};

fn main() -> bibeta::Result<()> {
    println!("corner pairs:");
    for k in 4..=8 {
        let c = pk_roots(k)?;
        println!("  k = {k}: ({:.10}, {:.10})", c.beta1, c.beta2);
    }

    let (t_star, b_star) = corollary16_extremum()?;
    println!("extremal excess t* = {t_star:.16}");
    println!("attained near beta1* = {b_star:.16}");

    let seg = s1_segment(4, 7)?;
    println!("arc k = 4 samples:");
    for (b1, b2) in &seg.samples {
        let check = solomyak_check(4, (*b1, *b2))?;
        println!(
            "  ({b1:.9}, {b2:.9})  digit t = {:+.6}  residuals {:.2e} {:.2e}",
            check.t, check.r1, check.r2
        );
    }
    Ok(())
}
