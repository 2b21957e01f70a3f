//! File formats: the `MHT1` binary tensor, the `MHS1` text sample file and
//! 8-bit binary PGM (`P5`) for two-dimensional images.
//!
//! `MHT1` layout, little-endian: magic `MHT1`, `u32` dimension count, one
//! `u64` per extent, `u8` dtype (0 = float64 real, 1 = complex128 as re/im
//! pairs), then the row-major payload.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};

use num::complex::Complex64;
use num::BigRational;

use crate::error::{Error, Result};
use crate::freq::FreqMask;
use crate::grid::{Domain, Grid};
use crate::lattice::{Collection, ManhattanParams};
use crate::sampler::{Sample, SampleSet};

pub const MHT1_MAGIC: &[u8; 4] = b"MHT1";
pub const MHS1_MAGIC: &str = "MHS1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dtype {
    Real = 0,
    Complex = 1,
}

/// Image file kinds recognized by their leading bytes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Mht1,
}

pub fn write_mht1<W: Write>(mut w: W, grid: &Grid, dtype: Dtype) -> Result<()> {
    w.write_all(MHT1_MAGIC)?;
    w.write_all(&(grid.dims() as u32).to_le_bytes())?;
    for &t in grid.extents() {
        w.write_all(&(t as u64).to_le_bytes())?;
    }
    w.write_all(&[dtype as u8])?;
    let mut buf = Vec::with_capacity(grid.len() * 16);
    for v in grid.data() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        if dtype == Dtype::Complex {
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_mht1<R: Read>(mut r: R) -> Result<Grid> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Format("file too short for an MHT1 header".into()))?;
    if &magic != MHT1_MAGIC {
        return Err(Error::Format(format!(
            "unknown magic {:?}, expected MHT1",
            String::from_utf8_lossy(&magic)
        )));
    }
    let truncated = |_| Error::Format("truncated MHT1 file".into());
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf).map_err(truncated)?;
    let d = u32::from_le_bytes(u32buf) as usize;
    if d == 0 || d > crate::lattice::MAX_DIMS {
        return Err(Error::Format(format!("MHT1 dimension count {d} out of range")));
    }
    let mut extents = Vec::with_capacity(d);
    let mut u64buf = [0u8; 8];
    for _ in 0..d {
        r.read_exact(&mut u64buf).map_err(truncated)?;
        extents.push(u64::from_le_bytes(u64buf) as usize);
    }
    let mut dtype = [0u8; 1];
    r.read_exact(&mut dtype).map_err(truncated)?;
    let complex = match dtype[0] {
        0 => false,
        1 => true,
        other => return Err(Error::Format(format!("unknown MHT1 dtype {other}"))),
    };
    let len: usize = extents.iter().product();
    let width = if complex { 16 } else { 8 };
    let mut payload = vec![0u8; len * width];
    r.read_exact(&mut payload).map_err(truncated)?;
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
    let data = payload
        .chunks_exact(width)
        .map(|c| {
            if complex {
                Complex64::new(f(&c[..8]), f(&c[8..]))
            } else {
                Complex64::new(f(c), 0.0)
            }
        })
        .collect();
    Grid::from_complex(&extents, data, Domain::Spatial)
}

/// Write an 8-bit PGM, rounding and clamping values to `0..=255`.
pub fn write_pgm<W: Write>(mut w: W, grid: &Grid) -> Result<()> {
    let (rows, cols) = pgm_shape(grid)?;
    write!(w, "P5\n{cols} {rows}\n255\n")?;
    let bytes: Vec<u8> = grid
        .data()
        .iter()
        .map(|v| v.re.round().clamp(0.0, 255.0) as u8)
        .collect();
    w.write_all(&bytes)?;
    Ok(())
}

/// Write an 8-bit PGM after mapping `[min, max]` linearly onto `[0, 255]`.
pub fn write_pgm_scaled<W: Write>(w: W, grid: &Grid) -> Result<()> {
    let lo = grid.data().iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    let hi = grid.data().iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut scaled = grid.clone();
    for v in scaled.data_mut() {
        *v = Complex64::new(255.0 * (v.re - lo) / span, 0.0);
    }
    write_pgm(w, &scaled)
}

/// Masks as black/white PGM images (2D only).
pub fn write_mask_pgm<W: Write>(w: W, mask: &FreqMask) -> Result<()> {
    let values: Vec<f64> = mask.kept().iter().map(|&k| if k { 255.0 } else { 0.0 }).collect();
    write_pgm(w, &Grid::from_real(mask.extents(), &values)?)
}

/// Masks as real MHT1 tensors of zeros and ones.
pub fn write_mask_mht1<W: Write>(w: W, mask: &FreqMask) -> Result<()> {
    let values: Vec<f64> = mask.kept().iter().map(|&k| if k { 1.0 } else { 0.0 }).collect();
    write_mht1(w, &Grid::from_real(mask.extents(), &values)?, Dtype::Real)
}

fn pgm_shape(grid: &Grid) -> Result<(usize, usize)> {
    match grid.extents() {
        [rows, cols] => Ok((*rows, *cols)),
        e => Err(Error::Format(format!(
            "PGM holds 2-dimensional images only, got extents {e:?}"
        ))),
    }
}

/// Read a binary PGM (`P5`). Extents are `[height, width]`.
pub fn read_pgm<R: Read>(r: R) -> Result<Grid> {
    let mut r = BufReader::new(r);
    let mut fields = Vec::with_capacity(4);
    let mut token = String::new();
    let mut byte = [0u8; 1];
    while fields.len() < 4 {
        if r.read(&mut byte)? == 0 {
            return Err(Error::Format("truncated PGM header".into()));
        }
        let c = byte[0] as char;
        if c == '#' && token.is_empty() {
            let mut comment = Vec::new();
            r.read_until(b'\n', &mut comment)?;
        } else if c.is_ascii_whitespace() {
            if !token.is_empty() {
                fields.push(std::mem::take(&mut token));
            }
        } else {
            token.push(c);
        }
    }
    if fields[0] != "P5" {
        return Err(Error::Format(format!(
            "unknown magic `{}`, expected P5",
            fields[0]
        )));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Format(format!("bad PGM header field `{s}`")))
    };
    let (cols, rows, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("PGM maxval {maxval} out of range")));
    }
    let width = if maxval < 256 { 1 } else { 2 };
    let mut payload = vec![0u8; rows * cols * width];
    r.read_exact(&mut payload)
        .map_err(|_| Error::Format("truncated PGM payload".into()))?;
    let values: Vec<f64> = if width == 1 {
        payload.iter().map(|&b| f64::from(b)).collect()
    } else {
        payload
            .chunks_exact(2)
            .map(|c| f64::from(u16::from_be_bytes([c[0], c[1]])))
            .collect()
    };
    Grid::from_real(&[rows, cols], &values)
}

/// Sniff the leading bytes of an image file.
pub fn detect_format(head: &[u8]) -> Result<ImageFormat> {
    if head.starts_with(MHT1_MAGIC) {
        Ok(ImageFormat::Mht1)
    } else if head.starts_with(b"P5") {
        Ok(ImageFormat::Pgm)
    } else {
        Err(Error::Format(format!(
            "unknown magic {:?}",
            String::from_utf8_lossy(&head[..head.len().min(4)])
        )))
    }
}

/// Read either a PGM or an MHT1 image from bytes.
pub fn read_image(bytes: &[u8]) -> Result<Grid> {
    match detect_format(bytes)? {
        ImageFormat::Mht1 => read_mht1(bytes),
        ImageFormat::Pgm => read_pgm(bytes),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Serialize a sample set as `MHS1` text.
pub fn write_mhs1<W: Write>(mut w: W, ss: &SampleSet) -> Result<()> {
    let p = ss.params();
    let mut out = String::new();
    writeln!(out, "{MHS1_MAGIC}").unwrap();
    writeln!(out, "dims {}", p.dims()).unwrap();
    writeln!(out, "T {}", join(ss.extents())).unwrap();
    writeln!(out, "k {}", join(p.k())).unwrap();
    writeln!(out, "lambda {}", join(p.lambda())).unwrap();
    writeln!(out, "collection {}", ss.collection()).unwrap();
    for s in ss.samples() {
        for t in &s.coord {
            write!(out, "{t} ").unwrap();
        }
        writeln!(out, "{:.16e}", s.value).unwrap();
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

/// Parse `MHS1` text back into a validated sample set.
pub fn read_mhs1<R: Read>(r: R) -> Result<SampleSet> {
    let mut lines = BufReader::new(r).lines();
    let mut next_line = |what: &str| -> Result<String> {
        lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::Format(format!("MHS1 file ends before `{what}`")))
    };
    let magic = next_line("magic")?;
    if magic.trim() != MHS1_MAGIC {
        return Err(Error::Format(format!(
            "unknown magic `{}`, expected MHS1",
            magic.trim()
        )));
    }
    let mut header = |key: &str| -> Result<String> {
        let line = next_line(key)?;
        let (k, v) = line.trim().split_once(' ').unwrap_or((line.trim(), ""));
        if k != key {
            return Err(Error::Format(format!("expected `{key}` header, found `{k}`")));
        }
        Ok(v.trim().to_string())
    };
    let parse_list = |text: &str, key: &str| -> Result<Vec<String>> {
        let v: Vec<String> = text.split_whitespace().map(str::to_string).collect();
        if v.is_empty() {
            return Err(Error::Format(format!("empty `{key}` header")));
        }
        Ok(v)
    };
    let bad = |key: &str, tok: &str| Error::Format(format!("bad `{key}` value `{tok}`"));

    let dims: usize = {
        let v = header("dims")?;
        v.parse().map_err(|_| bad("dims", &v))?
    };
    let extents = parse_list(&header("T")?, "T")?
        .iter()
        .map(|s| s.parse::<usize>().map_err(|_| bad("T", s)))
        .collect::<Result<Vec<_>>>()?;
    let k = parse_list(&header("k")?, "k")?
        .iter()
        .map(|s| s.parse::<u64>().map_err(|_| bad("k", s)))
        .collect::<Result<Vec<_>>>()?;
    let lambda = parse_list(&header("lambda")?, "lambda")?
        .iter()
        .map(|s| s.parse::<BigRational>().map_err(|_| bad("lambda", s)))
        .collect::<Result<Vec<_>>>()?;
    let coll_text = header("collection")?;
    if [extents.len(), k.len(), lambda.len()].iter().any(|&n| n != dims) {
        return Err(Error::Format(format!(
            "header lists disagree with dims {dims}"
        )));
    }
    let params = ManhattanParams::new(lambda, k, Some(extents))?;
    let collection = Collection::parse(params, &coll_text)?;

    let mut samples = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != dims + 1 {
            return Err(Error::Format(format!(
                "sample row {} has {} fields, expected {}",
                n + 1,
                fields.len(),
                dims + 1
            )));
        }
        let coord = fields[..dims]
            .iter()
            .map(|s| s.parse::<i64>().map_err(|_| bad("coordinate", s)))
            .collect::<Result<Vec<_>>>()?;
        let value = fields[dims]
            .parse::<f64>()
            .map_err(|_| bad("value", fields[dims]))?;
        samples.push(Sample { coord, value });
    }
    SampleSet::new(collection, samples)
}
