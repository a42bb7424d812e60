//! Raster scans of the parameter square: disconnectedness and zero
//! exclusion, written as portable graymaps.

use bibeta::hullcover::{scan, ScanMode, ScanRegion};
use bibeta::pixmap::{config_hash, write_pgm, write_sidecar};

fn main() -> bibeta::Result<()> {
    let region = ScanRegion {
        b1_min: 1.0,
        b1_max: 2.0,
        b2_min: 1.0,
        b2_max: 2.0,
    };

    let s = scan(&region, 120, 120, ScanMode::S, 6)?;
    let cfg = ("scan-s example", 120usize, 6u32);
    let hash = config_hash(&cfg)?;
    write_pgm(
        std::path::Path::new("bibeta-scan-s.pgm"),
        s.width,
        s.height,
        &s.pixels,
        &hash,
    )?;
    write_sidecar(std::path::Path::new("bibeta-scan-s.pgm"), &cfg)?;
    let dark = s.pixels.iter().filter(|&&p| p == 0).count();
    println!(
        "bibeta-scan-s.pgm: {}x{}, {dark} certified-disconnected pixels",
        s.width, s.height
    );

    let z = scan(&region, 80, 80, ScanMode::Z, 8)?;
    let cfg = ("scan-z example", 80usize, 8u32);
    let hash = config_hash(&cfg)?;
    write_pgm(
        std::path::Path::new("bibeta-scan-z.pgm"),
        z.width,
        z.height,
        &z.pixels,
        &hash,
    )?;
    write_sidecar(std::path::Path::new("bibeta-scan-z.pgm"), &cfg)?;
    let interior = z.pixels.iter().filter(|&&p| p == 255).count();
    println!(
        "bibeta-scan-z.pgm: {}x{}, {interior} certified interior-point pixels",
        z.width, z.height
    );
    Ok(())
}
