//! Deterministic raster output: binary pixmaps stamped with a
//! configuration hash, plus JSON sidecars describing the run.
//!
//! Every image written here embeds `# cfg:<hash>` as a header comment,
//! where the hash digests the serialized configuration that produced it, so
//! outputs are traceable to their parameters byte for byte.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// Hash a serializable configuration to sixteen hex digits.
pub fn config_hash<T: serde::Serialize>(config: &T) -> Result<String> {
    let json = serde_json::to_string(config)
        .map_err(|e| Error::Numeric(format!("config serialization failed: {e}")))?;
    let digest = Sha256::digest(json.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(hex[..16].to_string())
}

/// Write a binary grayscale pixmap (P5) with the hash comment.
pub fn write_pgm(path: &Path, width: usize, height: usize, pixels: &[u8], hash: &str) -> Result<()> {
    if pixels.len() != width * height {
        return Err(Error::Domain(format!(
            "pixel buffer holds {} bytes, expected {}",
            pixels.len(),
            width * height
        )));
    }
    let mut f = fs::File::create(path)?;
    write!(f, "P5\n# cfg:{hash}\n{width} {height}\n255\n")?;
    f.write_all(pixels)?;
    Ok(())
}

/// Write a binary color pixmap (P6) with the hash comment.
pub fn write_ppm(path: &Path, width: usize, height: usize, rgb: &[u8], hash: &str) -> Result<()> {
    if rgb.len() != 3 * width * height {
        return Err(Error::Domain(format!(
            "pixel buffer holds {} bytes, expected {}",
            rgb.len(),
            3 * width * height
        )));
    }
    let mut f = fs::File::create(path)?;
    write!(f, "P6\n# cfg:{hash}\n{width} {height}\n255\n")?;
    f.write_all(rgb)?;
    Ok(())
}

/// The sidecar path of an output file: the same name with `.json` added.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    PathBuf::from(os)
}

/// Write the JSON sidecar describing a run next to its output file.
pub fn write_sidecar<T: serde::Serialize>(path: &Path, config: &T) -> Result<PathBuf> {
    let sidecar = sidecar_path(path);
    let json = serde_json::to_string_pretty(config)
        .map_err(|e| Error::Numeric(format!("config serialization failed: {e}")))?;
    fs::write(&sidecar, json)?;
    Ok(sidecar)
}

/// Read back a P5 pixmap written by this module.
pub fn read_pgm(path: &Path) -> Result<(usize, usize, Vec<u8>, Option<String>)> {
    let data = fs::read(path)?;
    let bad = |m: &str| Error::Domain(format!("{}: {m}", path.display()));
    let mut pos = 0usize;
    let mut fields = Vec::new();
    let mut comment_hash = None;
    while fields.len() < 3 {
        if pos >= data.len() {
            return Err(bad("truncated header"));
        }
        if data[pos] == b'#' {
            let end = data[pos..]
                .iter()
                .position(|&b| b == b'\n')
                .map(|i| pos + i)
                .unwrap_or(data.len());
            let line = std::str::from_utf8(&data[pos..end]).map_err(|_| bad("bad comment"))?;
            if let Some(rest) = line.trim_start_matches('#').trim().strip_prefix("cfg:") {
                comment_hash = Some(rest.to_string());
            }
            pos = end + 1;
            continue;
        }
        if data[pos].is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let end = data[pos..]
            .iter()
            .position(|&b| b.is_ascii_whitespace())
            .map(|i| pos + i)
            .unwrap_or(data.len());
        fields.push(
            std::str::from_utf8(&data[pos..end])
                .map_err(|_| bad("bad field"))?
                .to_string(),
        );
        pos = end;
    }
    if fields[0] != "P5" {
        return Err(bad("not a P5 pixmap"));
    }
    let width: usize = fields[1].parse().map_err(|_| bad("bad width"))?;
    let height: usize = fields[2].parse().map_err(|_| bad("bad height"))?;
    // Skip the maxval token and the single whitespace after it.
    while pos < data.len() && data[pos].is_ascii_whitespace() {
        pos += 1;
    }
    while pos < data.len() && !data[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos += 1;
    let need = width * height;
    if data.len() < pos + need {
        return Err(bad("truncated pixel data"));
    }
    Ok((
        width,
        height,
        data[pos..pos + need].to_vec(),
        comment_hash,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Serialize;

    #[derive(Serialize)]
    struct Cfg {
        beta1: f64,
        beta2: f64,
        level: u32,
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = Cfg {
            beta1: 1.8,
            beta2: 1.25,
            level: 10,
        };
        let h1 = config_hash(&a).unwrap();
        let h2 = config_hash(&a).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.len(), 16);
        assert!(h1.chars().all(|c| c.is_ascii_hexdigit()));
        let b = Cfg {
            beta1: 1.8,
            beta2: 1.25,
            level: 11,
        };
        assert_ne!(h1, config_hash(&b).unwrap());
    }

    #[test]
    fn pgm_roundtrip_preserves_pixels_and_hash() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.pgm");
        let pixels: Vec<u8> = (0..60u8).collect();
        let cfg = Cfg {
            beta1: 1.9,
            beta2: 1.35,
            level: 4,
        };
        let hash = config_hash(&cfg).unwrap();
        write_pgm(&path, 10, 6, &pixels, &hash).unwrap();
        let (w, h, back, stamped) = read_pgm(&path).unwrap();
        assert_eq!((w, h), (10, 6));
        assert_eq!(back, pixels);
        assert_eq!(stamped.as_deref(), Some(hash.as_str()));
    }

    #[test]
    fn sidecar_lands_next_to_the_output() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("render.ppm");
        let cfg = Cfg {
            beta1: 1.7,
            beta2: 1.4,
            level: 8,
        };
        let sidecar = write_sidecar(&path, &cfg).unwrap();
        assert_eq!(sidecar, dir.path().join("render.ppm.json"));
        let text = std::fs::read_to_string(&sidecar).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["beta1"], 1.7);
        assert_eq!(value["level"], 8);
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.pgm");
        assert!(write_pgm(&path, 4, 4, &[0u8; 15], "deadbeef").is_err());
        assert!(write_ppm(&path, 4, 4, &[0u8; 47], "deadbeef").is_err());
    }
}
