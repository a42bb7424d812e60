//! Command-line front end: parameter scans, attractor rendering, expansion
//! runs, curve export, and the island audit, all with deterministic file
//! outputs stamped by a configuration hash.
//!
//! Exit codes: 0 success, 1 usage, 2 numeric failure, 3 verification
//! failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{pk_roots, s1_segment};
use crate::diagonal::{count_admissible, diagonal_address, growth_exponent, BranchSide};
use crate::hullcover::{scan, HullCover, ScanMode, ScanRegion};
use crate::islands::overlap_chain;
use crate::pixmap::{config_hash, write_pgm, write_sidecar};
use crate::symbolic::{BetaPair, FiniteWord};
use crate::uniqueness::separation_table;
use crate::zcert::{seed_box, thm12_certificate};
use crate::{diagonal, Error, Result};

const RENDER_SEED: u64 = 0x5eed_b1be;

#[derive(Parser)]
#[command(
    name = "bibeta",
    version,
    about = "Certificates, scans and renders for two-map diagonal self-affine sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify disconnectedness over a parameter region into a pixmap.
    #[command(name = "scan-s")]
    ScanS(ScanArgs),
    /// Classify zero-exclusion over a parameter region into a pixmap.
    #[command(name = "scan-z")]
    ScanZ(ScanArgs),
    /// Render one attractor, by random addresses or by cover outlines.
    #[command(name = "render-attractor")]
    RenderAttractor(RenderArgs),
    /// Export boundary-curve samples as CSV.
    #[command(name = "curve-s1")]
    CurveS1(CurveArgs),
    /// The corner pair of a boundary arc.
    #[command(name = "corners")]
    Corners {
        /// Arc index, at least 4.
        #[arg(long)]
        k: u32,
        /// Optional JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand one target in both bases simultaneously.
    #[command(name = "expand")]
    Expand {
        /// Target value.
        #[arg(long)]
        x: f64,
        /// First base.
        #[arg(long)]
        beta1: f64,
        /// Second base.
        #[arg(long)]
        beta2: f64,
        /// Digits to emit.
        #[arg(long, default_value_t = 400)]
        count: usize,
        /// Optional JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Walk the diagonal-difference tree and report branch counts.
    #[command(name = "diagonal")]
    Diagonal {
        /// First base.
        #[arg(long)]
        beta1: f64,
        /// Second base.
        #[arg(long)]
        beta2: f64,
        /// Tree depth.
        #[arg(long, default_value_t = 20)]
        depth: u32,
        /// Optional JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified run-length separation table and entropy bound.
    #[command(name = "uniq-L")]
    UniqL {
        /// First base.
        #[arg(long)]
        beta1: f64,
        /// Second base.
        #[arg(long)]
        beta2: f64,
        /// Largest run length to certify.
        #[arg(long, default_value_t = 5)]
        kmax: u32,
        /// Refinement budget per disjointness query.
        #[arg(long, default_value_t = 12)]
        budget: u32,
        /// Optional JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit the island chain and write the evidence.
    #[command(name = "island-verify")]
    IslandVerify {
        /// Optional JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interior-point certificate for one pair of bases.
    #[command(name = "zcert")]
    Zcert {
        /// First base.
        #[arg(long)]
        beta1: f64,
        /// Second base.
        #[arg(long)]
        beta2: f64,
        /// Optional JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Region as B1MIN,B1MAX,B2MIN,B2MAX.
    #[arg(long, default_value = "1,2,1,2", value_parser = parse_region)]
    region: RegionArg,
    /// Grid as NX,NY.
    #[arg(long, default_value = "400,400", value_parser = parse_grid)]
    grid: GridArg,
    /// Deepest certification level per pixel.
    #[arg(long, default_value_t = 10)]
    max_level: u32,
    /// Pixmap output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    /// First base.
    #[arg(long)]
    beta1: f64,
    /// Second base.
    #[arg(long)]
    beta2: f64,
    /// Exact mode: outline the level-n cover.
    #[arg(long, conflicts_with = "points")]
    level: Option<u32>,
    /// Random mode: number of sampled addresses.
    #[arg(long)]
    points: Option<u64>,
    /// Square image side in pixels.
    #[arg(long, default_value_t = 800)]
    size: usize,
    /// Pixmap output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CurveArgs {
    /// Arc range as KMIN,KMAX.
    #[arg(long, default_value = "3,8", value_parser = parse_krange)]
    k_range: KRangeArg,
    /// Samples per arc.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, Serialize)]
struct RegionArg([f64; 4]);

#[derive(Clone, Copy, Debug, Serialize)]
struct GridArg([usize; 2]);

#[derive(Clone, Copy, Debug, Serialize)]
struct KRangeArg([u32; 2]);

fn parse_region(s: &str) -> std::result::Result<RegionArg, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("bad region: {e}"))?;
    if parts.len() != 4 {
        return Err("region needs four comma-separated numbers".into());
    }
    Ok(RegionArg([parts[0], parts[1], parts[2], parts[3]]))
}

fn parse_grid(s: &str) -> std::result::Result<GridArg, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("bad grid: {e}"))?;
    if parts.len() != 2 || parts[0] == 0 || parts[1] == 0 {
        return Err("grid needs two positive comma-separated integers".into());
    }
    Ok(GridArg([parts[0], parts[1]]))
}

fn parse_krange(s: &str) -> std::result::Result<KRangeArg, String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("bad k range: {e}"))?;
    if parts.len() != 2 || parts[0] > parts[1] {
        return Err("k range needs KMIN,KMAX with KMIN <= KMAX".into());
    }
    Ok(KRangeArg([parts[0], parts[1]]))
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let (kind, code) = match &e {
                Error::CertificateRejected { .. } | Error::TargetOutsideBox { .. } => {
                    ("verification", 3)
                }
                _ => ("numeric", 2),
            };
            let payload = serde_json::json!({ "error": e.to_string(), "kind": kind });
            eprintln!("{payload}");
            code
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::ScanS(args) => run_scan(args, ScanMode::S, "scan-s"),
        Command::ScanZ(args) => run_scan(args, ScanMode::Z, "scan-z"),
        Command::RenderAttractor(args) => run_render(args),
        Command::CurveS1(args) => run_curves(args),
        Command::Corners { k, out } => {
            let pair = pk_roots(k)?;
            emit_json(
                out.as_deref(),
                &serde_json::json!({
                    "k": k,
                    "beta1": pair.beta1,
                    "beta2": pair.beta2,
                    "config_hash": config_hash(&("corners", k))?,
                }),
            )?;
            Ok(0)
        }
        Command::Expand {
            x,
            beta1,
            beta2,
            count,
            out,
        } => run_expand(x, beta1, beta2, count, out.as_deref()),
        Command::Diagonal {
            beta1,
            beta2,
            depth,
            out,
        } => run_diagonal(beta1, beta2, depth, out.as_deref()),
        Command::UniqL {
            beta1,
            beta2,
            kmax,
            budget,
            out,
        } => {
            let bp = BetaPair::new(beta1, beta2)?;
            let table = separation_table(&bp, kmax, budget)?;
            let mut value = serde_json::to_value(&table)
                .map_err(|e| Error::Numeric(format!("serialization failed: {e}")))?;
            value["config_hash"] =
                serde_json::Value::String(config_hash(&("uniq-L", beta1, beta2, kmax, budget))?);
            emit_json(out.as_deref(), &value)?;
            Ok(0)
        }
        Command::IslandVerify { out } => {
            let report = overlap_chain()?;
            let mut value = serde_json::to_value(&report)
                .map_err(|e| Error::Numeric(format!("serialization failed: {e}")))?;
            value["config_hash"] = serde_json::Value::String(config_hash(&"island-verify")?);
            emit_json(out.as_deref(), &value)?;
            Ok(if report.complete { 0 } else { 3 })
        }
        Command::Zcert { beta1, beta2, out } => {
            let bp = BetaPair::new(beta1, beta2)?;
            let cert = thm12_certificate(&bp)?;
            let sb = seed_box(&bp)?;
            emit_json(
                out.as_deref(),
                &serde_json::json!({
                    "beta1": beta1,
                    "beta2": beta2,
                    "low_coefficients": cert.low_coefficients(),
                    "coefficient_mass": cert.coefficient_mass(),
                    "sum_bound": sb.sum_bound,
                    "prod_bound": sb.prod_bound,
                    "seed_min": sb.min,
                    "config_hash": config_hash(&("zcert", beta1, beta2))?,
                }),
            )?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct ScanConfig {
    command: &'static str,
    region: [f64; 4],
    grid: [usize; 2],
    max_level: u32,
}

fn run_scan(args: ScanArgs, mode: ScanMode, name: &'static str) -> Result<i32> {
    let config = ScanConfig {
        command: name,
        region: args.region.0,
        grid: args.grid.0,
        max_level: args.max_level,
    };
    let hash = config_hash(&config)?;
    let region = ScanRegion {
        b1_min: args.region.0[0],
        b1_max: args.region.0[1],
        b2_min: args.region.0[2],
        b2_max: args.region.0[3],
    };
    let raster = scan(&region, args.grid.0[0], args.grid.0[1], mode, args.max_level)?;
    write_pgm(&args.out, raster.width, raster.height, &raster.pixels, &hash)?;
    write_sidecar(&args.out, &config)?;
    Ok(0)
}

#[derive(Serialize)]
struct RenderConfig {
    command: &'static str,
    beta1: f64,
    beta2: f64,
    mode: String,
    size: usize,
    seed: u64,
}

fn run_render(args: RenderArgs) -> Result<i32> {
    let bp = BetaPair::new(args.beta1, args.beta2)?;
    let points = match (args.level, args.points) {
        (Some(_), _) => None,
        (None, p) => Some(p.unwrap_or(1_000_000)),
    };
    let mode = match args.level {
        Some(n) => format!("level-{n}"),
        None => format!("points-{}", points.unwrap()),
    };
    let config = RenderConfig {
        command: "render-attractor",
        beta1: args.beta1,
        beta2: args.beta2,
        mode,
        size: args.size,
        seed: RENDER_SEED,
    };
    let hash = config_hash(&config)?;
    let n = args.size;
    let mut pixels = vec![255u8; n * n];

    // The attractor spans the symmetric box of extreme series sums.
    let ex = bp.lambda() / (1.0 - bp.lambda());
    let ey = bp.mu() / (1.0 - bp.mu());
    let to_px = |x: f64, y: f64| -> Option<(usize, usize)> {
        let u = (x + ex) / (2.0 * ex);
        let v = (y + ey) / (2.0 * ey);
        if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
            return None;
        }
        let px = (u * (n - 1) as f64).round() as usize;
        let py = ((1.0 - v) * (n - 1) as f64).round() as usize;
        Some((px, py))
    };

    match args.level {
        Some(level) => {
            // Cover construction wants descending bases; mirror the plot
            // back when the input pair is ascending.
            let flip = args.beta1 < args.beta2;
            let cover_bp = if flip { bp.swapped() } else { bp };
            let mut cover = HullCover::new(&cover_bp, 1e-9)?;
            for _ in 0..level {
                cover.refine()?;
            }
            for piece in cover.pieces() {
                let verts = piece.polygon.vertices();
                for i in 0..verts.len() {
                    let a = verts[i];
                    let b = verts[(i + 1) % verts.len()];
                    let steps = 64;
                    for s in 0..=steps {
                        let t = s as f64 / steps as f64;
                        let (qx, qy) = (a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
                        let (qx, qy) = if flip { (qy, qx) } else { (qx, qy) };
                        if let Some((px, py)) = to_px(qx, qy) {
                            pixels[py * n + px] = 0;
                        }
                    }
                }
            }
        }
        None => {
            let count = points.unwrap();
            let lambda = bp.lambda();
            let mu = bp.mu();
            let marked: Vec<usize> = (0..count)
                .into_par_iter()
                .filter_map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(RENDER_SEED ^ i);
                    let mut x = 0.0f64;
                    let mut y = 0.0f64;
                    let mut px = 1.0f64;
                    let mut py = 1.0f64;
                    for _ in 0..60 {
                        let d = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                        px *= lambda;
                        py *= mu;
                        x += d * px;
                        y += d * py;
                    }
                    to_px(x, y).map(|(a, b)| b * n + a)
                })
                .collect();
            for idx in marked {
                pixels[idx] = 0;
            }
        }
    }
    write_pgm(&args.out, n, n, &pixels, &hash)?;
    write_sidecar(&args.out, &config)?;
    Ok(0)
}

#[derive(Serialize)]
struct CurveConfig {
    command: &'static str,
    k_range: [u32; 2],
    samples: usize,
}

fn run_curves(args: CurveArgs) -> Result<i32> {
    let config = CurveConfig {
        command: "curve-s1",
        k_range: args.k_range.0,
        samples: args.samples,
    };
    let hash = config_hash(&config)?;
    let mut writer = csv::Writer::from_path(&args.out).map_err(csv_err)?;
    writer
        .write_record(["k", "beta1", "beta2", "config_hash"])
        .map_err(csv_err)?;
    for k in args.k_range.0[0]..=args.k_range.0[1] {
        let segment = s1_segment(k, args.samples)?;
        for (b1, b2) in &segment.samples {
            writer
                .write_record([k.to_string(), b1.to_string(), b2.to_string(), hash.clone()])
                .map_err(csv_err)?;
        }
    }
    writer.flush()?;
    write_sidecar(&args.out, &config)?;
    Ok(0)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Numeric(format!("csv write failed: {e}"))
}

fn run_expand(x: f64, beta1: f64, beta2: f64, count: usize, out: Option<&Path>) -> Result<i32> {
    let bp = BetaPair::new(beta1, beta2)?;
    let word = diagonal::simultaneous_expand(&bp, x, count)?;
    let r1 = reconstruct_error(&word, beta1, x);
    let r2 = reconstruct_error(&word, beta2, x);
    emit_json(
        out,
        &serde_json::json!({
            "x": x,
            "beta1": beta1,
            "beta2": beta2,
            "digits": word.len(),
            "word": word.to_string(),
            "residual1": r1,
            "residual2": r2,
            "config_hash": config_hash(&("expand", x, beta1, beta2, count))?,
        }),
    )?;
    Ok(0)
}

fn reconstruct_error(word: &FiniteWord, beta: f64, x: f64) -> f64 {
    (word.partial_sum(1.0 / beta) - x).abs()
}

fn run_diagonal(beta1: f64, beta2: f64, depth: u32, out: Option<&Path>) -> Result<i32> {
    let bp = BetaPair::new(beta1, beta2)?;
    let node = diagonal_address(&bp, depth, BranchSide::Leftmost)?;
    let counts = count_admissible(&bp, depth, 50_000_000)?;
    let growth = growth_exponent(&counts).ok();
    emit_json(
        out,
        &serde_json::json!({
            "beta1": beta1,
            "beta2": beta2,
            "depth": depth,
            "leftmost_word": node.word.to_string(),
            "interval": [node.lo, node.hi],
            "counts": counts,
            "growth_exponent": growth,
            "config_hash": config_hash(&("diagonal", beta1, beta2, depth))?,
        }),
    )?;
    Ok(0)
}

fn emit_json(out: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Numeric(format!("serialization failed: {e}")))?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => {
            use std::io::Write;
            // A closed pipe (e.g. piping into head) is not an error.
            if let Err(e) = writeln!(std::io::stdout(), "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pixmap::read_pgm;

    fn run_cli(args: &[&str]) -> i32 {
        let mut argv = vec!["bibeta"];
        argv.extend_from_slice(args);
        run(argv)
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_cli(&["no-such-command"]), 1);
        assert_eq!(run_cli(&["corners"]), 1);
    }

    #[test]
    fn corners_writes_the_arc_pair() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("corners.json");
        let code = run_cli(&["corners", "--k", "4", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0);
        let value: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert!((value["beta1"].as_f64().unwrap() - 1.81618).abs() < 1e-4);
        assert!((value["beta2"].as_f64().unwrap() - 1.30022).abs() < 1e-4);
    }

    #[test]
    fn scan_outputs_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let out1 = dir.path().join("a.pgm");
        let out2 = dir.path().join("b.pgm");
        for out in [&out1, &out2] {
            let code = run_cli(&[
                "scan-s",
                "--region",
                "1.5,1.95,1.05,1.45",
                "--grid",
                "24,16",
                "--max-level",
                "3",
                "--out",
                out.to_str().unwrap(),
            ]);
            assert_eq!(code, 0);
        }
        let a = std::fs::read(&out1).unwrap();
        let b = std::fs::read(&out2).unwrap();
        assert_eq!(a, b);
        let (w, h, pixels, hash) = read_pgm(&out1).unwrap();
        assert_eq!((w, h), (24, 16));
        assert!(hash.is_some());
        assert!(pixels.contains(&0u8), "the window meets the certified region");
        assert!(std::fs::metadata(dir.path().join("a.pgm.json")).is_ok());
    }

    #[test]
    fn render_modes_produce_marks() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("dust.pgm");
        let code = run_cli(&[
            "render-attractor",
            "--beta1",
            "1.7",
            "--beta2",
            "1.8",
            "--points",
            "4000",
            "--size",
            "64",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let (_, _, pixels, _) = read_pgm(&out).unwrap();
        let dark = pixels.iter().filter(|&&p| p == 0).count();
        assert!(dark > 100);

        let out2 = dir.path().join("cover.pgm");
        let code = run_cli(&[
            "render-attractor",
            "--beta1",
            "1.7",
            "--beta2",
            "1.8",
            "--level",
            "5",
            "--size",
            "64",
            "--out",
            out2.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let (_, _, pixels, _) = read_pgm(&out2).unwrap();
        assert!(pixels.iter().any(|&p| p == 0));
    }

    #[test]
    fn zcert_reports_verification_failure_outside_the_region() {
        assert_eq!(run_cli(&["zcert", "--beta1", "1.15", "--beta2", "1.2"]), 0);
        assert_eq!(run_cli(&["zcert", "--beta1", "1.9", "--beta2", "1.8"]), 3);
    }

    #[test]
    fn curve_export_is_rfc4180_with_hash_column() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s1.csv");
        let code = run_cli(&[
            "curve-s1",
            "--k-range",
            "4,5",
            "--samples",
            "10",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let mut reader = csv::Reader::from_path(&out).unwrap();
        let headers = reader.headers().unwrap().clone();
        assert_eq!(&headers[0], "k");
        assert_eq!(&headers[3], "config_hash");
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 20);
        let b1: f64 = rows[0][1].parse().unwrap();
        assert!(b1 > 1.0 && b1 < 2.0);
    }
}
