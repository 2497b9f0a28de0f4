//! Top-k sketch codec on an orthogonal ±1 transform.
//!
//! A vector `x` of length `n` is mapped to `y = H x / sqrt(n)`. For a matrix
//! passing Gate0, `H / sqrt(n)` is orthogonal, so `x = H^T y / sqrt(n)`. The
//! encoder keeps the `k` largest `|y_i|` (ties go to the smaller index) and
//! quantizes them symmetrically to 8 bits.
//!
//! Packet layout, all little-endian:
//!
//! | bytes | field |
//! |-------|-------|
//! | 4 | `scale`, IEEE-754 binary32 |
//! | 2 | `k`, unsigned |
//! | 2 | `n`, unsigned |
//! | 3k | `k` records of (index: u16, qvalue: i8) with strictly increasing index |
//!
//! for a total of `8 + 3k` bytes.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::PmMatrix;

pub const QUANT_BITS: u32 = 8;
pub const QMAX: i8 = 127;
pub const HEADER_BYTES: usize = 8;
pub const RECORD_BYTES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchConfig {
    pub n: usize,
    pub k: usize,
}

impl SketchConfig {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n > u16::MAX as usize {
            return Err(Error::InvalidSketchConfig(format!("n = {n} does not fit in 16 bits")));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidSketchConfig(format!("k = {k} outside 1..={n}")));
        }
        Ok(SketchConfig { n, k })
    }
}

/// Selected coefficients before quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSketch {
    pub n: usize,
    /// Strictly increasing.
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

fn check_input(x: &[f64], h: &PmMatrix) -> Result<()> {
    if x.len() != h.n() {
        return Err(Error::DimensionMismatch {
            expected: h.n(),
            found: x.len(),
        });
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

/// `y = H x / sqrt(n)`, accumulating each row as `sum(x) - 2 * sum(x_j : H_ij = -1)`.
pub fn transform(x: &[f64], h: &PmMatrix) -> Result<Vec<f64>> {
    check_input(x, h)?;
    let n = h.n();
    let total: f64 = x.iter().sum();
    let norm = 1.0 / (n as f64).sqrt();
    Ok((0..n)
        .map(|i| {
            let neg: f64 = crate::bits::ones(h.row_bits(i)).map(|j| x[j]).sum();
            (total - 2.0 * neg) * norm
        })
        .collect())
}

/// The `k` largest-magnitude coefficients of the transform, in index order.
pub fn project_top_k(x: &[f64], h: &PmMatrix, k: usize) -> Result<SparseSketch> {
    let cfg = SketchConfig::new(h.n(), k)?;
    let y = transform(x, h)?;
    let mut order: Vec<usize> = (0..cfg.n).collect();
    let by_magnitude = |&a: &usize, &b: &usize| y[b].abs().total_cmp(&y[a].abs()).then(a.cmp(&b));
    if cfg.k < cfg.n {
        order.select_nth_unstable_by(cfg.k - 1, by_magnitude);
        order.truncate(cfg.k);
    }
    order.sort_unstable();
    Ok(SparseSketch {
        n: cfg.n,
        values: order.iter().map(|&i| y[i]).collect(),
        indices: order,
    })
}

/// `x̂ = H^T ŷ / sqrt(n)` for a sparse `ŷ`.
pub fn reconstruct(sketch: &SparseSketch, h: &PmMatrix) -> Result<Vec<f64>> {
    let n = h.n();
    if sketch.n != n {
        return Err(Error::OrderMismatch {
            expected: n,
            found: sketch.n,
        });
    }
    let mut neg = vec![0.0f64; n];
    let mut total = 0.0;
    for (&i, &v) in sketch.indices.iter().zip(&sketch.values) {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, order: n });
        }
        total += v;
        for j in crate::bits::ones(h.row_bits(i)) {
            neg[j] += v;
        }
    }
    let norm = 1.0 / (n as f64).sqrt();
    Ok(neg.into_iter().map(|s| (total - 2.0 * s) * norm).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SketchPacket {
    scale: f32,
    n_tag: u16,
    entries: Vec<(u16, i8)>,
}

impl SketchPacket {
    pub fn new(scale: f32, n_tag: u16, entries: Vec<(u16, i8)>) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::MalformedPacket(format!("scale {scale} is not positive and finite")));
        }
        if entries.len() > n_tag as usize {
            return Err(Error::MalformedPacket(format!(
                "{} records exceed n = {n_tag}",
                entries.len()
            )));
        }
        for (pos, w) in entries.iter().enumerate() {
            if w.0 >= n_tag {
                return Err(Error::MalformedPacket(format!("index {} out of range", w.0)));
            }
            if w.1 < -QMAX {
                return Err(Error::MalformedPacket(format!("qvalue {} below -{QMAX}", w.1)));
            }
            if pos > 0 && entries[pos - 1].0 >= w.0 {
                return Err(Error::MalformedPacket("indices not strictly increasing".into()));
            }
        }
        Ok(SketchPacket {
            scale,
            n_tag,
            entries,
        })
    }

    pub fn scale(&self) -> f32 {
        self.scale
    }

    pub fn n(&self) -> usize {
        self.n_tag as usize
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u16, i8)] {
        &self.entries
    }

    pub fn byte_len(&self) -> usize {
        HEADER_BYTES + RECORD_BYTES * self.entries.len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.byte_len());
        out.extend_from_slice(&self.scale.to_le_bytes());
        out.extend_from_slice(&(self.entries.len() as u16).to_le_bytes());
        out.extend_from_slice(&self.n_tag.to_le_bytes());
        for &(i, q) in &self.entries {
            out.extend_from_slice(&i.to_le_bytes());
            out.push(q as u8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_BYTES {
            return Err(Error::MalformedPacket(format!("{} bytes is shorter than the header", bytes.len())));
        }
        let scale = f32::from_le_bytes(bytes[0..4].try_into().unwrap());
        let k = u16::from_le_bytes([bytes[4], bytes[5]]) as usize;
        let n_tag = u16::from_le_bytes([bytes[6], bytes[7]]);
        let expected = HEADER_BYTES + RECORD_BYTES * k;
        if bytes.len() != expected {
            return Err(Error::MalformedPacket(format!(
                "length {} does not match k = {k} ({expected} bytes)",
                bytes.len()
            )));
        }
        let entries = bytes[HEADER_BYTES..]
            .chunks_exact(RECORD_BYTES)
            .map(|r| (u16::from_le_bytes([r[0], r[1]]), r[2] as i8))
            .collect();
        SketchPacket::new(scale, n_tag, entries)
    }

    pub fn dequantize(&self) -> SparseSketch {
        SparseSketch {
            n: self.n(),
            indices: self.entries.iter().map(|e| e.0 as usize).collect(),
            values: self
                .entries
                .iter()
                .map(|e| e.1 as f64 * self.scale as f64)
                .collect(),
        }
    }
}

/// Symmetric 8-bit quantization with `scale = max|v| / 127` (1 if all zero).
pub fn quantize(sketch: &SparseSketch) -> Result<SketchPacket> {
    let max = sketch.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if max == 0.0 { 1.0 } else { (max / QMAX as f64) as f32 };
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidSketchConfig(format!(
            "coefficient magnitude {max} outside the float32 scale range"
        )));
    }
    let s = scale as f64;
    let entries = sketch
        .indices
        .iter()
        .zip(&sketch.values)
        .map(|(&i, &v)| (i as u16, (v / s).round().clamp(-(QMAX as f64), QMAX as f64) as i8))
        .collect();
    SketchPacket::new(scale, sketch.n as u16, entries)
}

pub fn encode(x: &[f64], h: &PmMatrix, cfg: &SketchConfig) -> Result<SketchPacket> {
    if cfg.n != h.n() {
        return Err(Error::OrderMismatch {
            expected: h.n(),
            found: cfg.n,
        });
    }
    quantize(&project_top_k(x, h, cfg.k)?)
}

pub fn decode(packet: &SketchPacket, h: &PmMatrix) -> Result<Vec<f64>> {
    reconstruct(&packet.dequantize(), h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ByteAccounting {
    pub raw_bytes: usize,
    pub sketch_bytes: usize,
    pub ratio: f64,
}

impl fmt::Display for ByteAccounting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "raw={} sketch={} ratio={:.2}",
            self.raw_bytes, self.sketch_bytes, self.ratio
        )
    }
}

/// Raw float32 size against packet size.
pub fn byte_accounting(cfg: &SketchConfig) -> ByteAccounting {
    let raw_bytes = 4 * cfg.n;
    let sketch_bytes = HEADER_BYTES + RECORD_BYTES * cfg.k;
    ByteAccounting {
        raw_bytes,
        sketch_bytes,
        ratio: raw_bytes as f64 / sketch_bytes as f64,
    }
}

/// `(n / m - 1) * 100`: how much larger order `n` is than order `m`, in percent.
pub fn granularity_gain(n: usize, m: usize) -> f64 {
    (n as f64 / m as f64 - 1.0) * 100.0
}
