//! Uniqueness of addresses: certified run-length separation, word counts,
//! an entropy bound, and a boundary-point certificate.

use bibeta::symbolic::{BetaPair, Digit, FiniteWord};
use bibeta::uniqueness::{
    boundary_certificate, count_unique_prefixes, separation_table,
};

fn main() -> bibeta::Result<()> {
    for (b1, b2) in [(1.8, 1.25), (1.6, 1.4)] {
        let bp = BetaPair::new(b1, b2)?;
        let table = separation_table(&bp, 5, 12)?;
        println!("separation table at ({b1}, {b2}):");
        for e in &table.entries {
            println!("  k = {}: L = {}", e.k, e.l);
        }
        println!(
            "  L_hat = {}, entropy bound {:.6}",
            table.l_hat, table.entropy_lower_bound
        );
    }

    println!("words of length 12 with runs of length >= 3: {}",
        count_unique_prefixes(3, 12)?);

    let bp = BetaPair::new(1.8, 1.25)?;
    for w in [
        FiniteWord::parse("p^7m^7p^7")?,
        FiniteWord::parse("pppmmmppp")?,
    ] {
        let cert = boundary_certificate(&bp, &w, Digit::M)?;
        println!(
            "address {}(m)* projects to ({:+.9}, {:+.9})",
            w, cert.point.0, cert.point.1
        );
        println!(
            "  unique: {} (margin {:.3e}, tail margin {:.3e})",
            cert.certified, cert.min_margin, cert.tail_margin
        );
    }
    Ok(())
}
