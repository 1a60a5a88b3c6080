use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::RasterImage;
use crate::error::{Error, Result};

const MAXVAL: u32 = 65535;

/// Writes a 16-bit PGM, mapping `[lo, hi]` linearly to `[0, 65535]`
/// (clamped); `binary` selects P5 over P2.
pub fn write_pgm(img: &RasterImage, path: &Path, binary: bool, lo: f64, hi: f64) -> Result<()> {
    if !(hi > lo) {
        return Err(Error::domain(format!("empty intensity range [{lo}, {hi}]")));
    }
    let level = |v: f64| (((v - lo) / (hi - lo)).clamp(0.0, 1.0) * MAXVAL as f64).round() as u16;
    let mut out = Vec::new();
    let magic = if binary { "P5" } else { "P2" };
    write!(out, "{magic}\n{} {}\n{MAXVAL}\n", img.width, img.height)?;
    if binary {
        for &v in &img.samples {
            out.extend_from_slice(&level(v).to_be_bytes());
        }
    } else {
        for row in img.samples.chunks(img.width) {
            let line: Vec<String> = row.iter().map(|&v| level(v).to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn header_tokens<R: BufRead>(r: &mut R, count: usize) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut byte = [0u8; 1];
    let mut current = String::new();
    let mut comment = false;
    while tokens.len() < count {
        if r.read(&mut byte)? == 0 {
            return Err(Error::Parse("truncated PGM header".into()));
        }
        let c = byte[0] as char;
        if comment {
            comment = c != '\n';
            continue;
        }
        if c == '#' {
            comment = true;
        } else if c.is_ascii_whitespace() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
        } else {
            current.push(c);
        }
    }
    Ok(tokens)
}

/// Reads a P2 or P5 PGM into samples in `[0, 1]` with pitch `1 / width`.
pub fn read_pgm(path: &Path) -> Result<RasterImage> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let t = header_tokens(&mut r, 4)?;
    let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("PGM header field {s:?}: {e}")));
    let (w, h, maxval) = (parse(&t[1])?, parse(&t[2])?, parse(&t[3])?);
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Parse(format!("PGM maxval {maxval} out of range")));
    }
    let scale = 1.0 / maxval as f64;
    let samples: Vec<f64> = match t[0].as_str() {
        "P5" => {
            let bytes = if maxval > 255 { 2 } else { 1 };
            let mut buf = vec![0u8; w * h * bytes];
            r.read_exact(&mut buf).map_err(|_| Error::Parse("truncated PGM raster".into()))?;
            if bytes == 2 {
                buf.chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]]) as f64 * scale).collect()
            } else {
                buf.iter().map(|&b| b as f64 * scale).collect()
            }
        }
        "P2" => {
            let mut text = String::new();
            r.read_to_string(&mut text)?;
            let v: Vec<f64> = text
                .split_whitespace()
                .map(|s| s.parse::<u32>().map(|x| x as f64 * scale).map_err(|e| Error::Parse(format!("PGM sample {s:?}: {e}"))))
                .collect::<Result<_>>()?;
            if v.len() != w * h {
                return Err(Error::Parse(format!("PGM has {} samples, expected {}", v.len(), w * h)));
            }
            v
        }
        other => return Err(Error::Parse(format!("unsupported PGM magic {other:?}"))),
    };
    RasterImage::new(w, h, samples, 1.0 / w as f64)
}

/// Exact sidecar: `u32` width, `u32` height, `f64` pitch, then the samples
/// as `f64`, all little-endian.
pub fn write_raw(img: &RasterImage, path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(16 + 8 * img.samples.len());
    out.extend_from_slice(&(img.width as u32).to_le_bytes());
    out.extend_from_slice(&(img.height as u32).to_le_bytes());
    out.extend_from_slice(&img.pitch.to_le_bytes());
    for v in &img.samples {
        out.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_raw(path: &Path) -> Result<RasterImage> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < 16 {
        return Err(Error::Parse("raw image header truncated".into()));
    }
    let w = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let h = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let pitch = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let body = &bytes[16..];
    if body.len() != 8 * w * h {
        return Err(Error::Parse(format!("raw image has {} bytes of samples, expected {}", body.len(), 8 * w * h)));
    }
    let samples = body.chunks(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    RasterImage::new(w, h, samples, pitch)
}
