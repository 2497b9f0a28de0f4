//! Bit-packed dense matrices.
//!
//! Both types store one bit per entry, row-major, each row padded with zero
//! bits to a whole number of 64-bit words. For [`PmMatrix`] a set bit means
//! the entry is −1, so the inner product of two rows of length `n` is
//! `n - 2 * popcount(row_i ^ row_j)`.

use std::fmt::Write as _;

use crate::bits;
use crate::error::{Error, Result};

/// Square 0/1 matrix over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        let stride = bits::words_for(n);
        BitMatrix {
            n,
            stride,
            words: vec![0; stride * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        bits::get(self.row(i), j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let s = self.stride;
        bits::set(&mut self.words[i * s..(i + 1) * s], j, value);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    pub(crate) fn into_words(self) -> Vec<u64> {
        self.words
    }
}

/// Square matrix with entries in {+1, −1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PmMatrix {
    bits: BitMatrix,
}

impl PmMatrix {
    /// All-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        PmMatrix {
            bits: BitMatrix::zeros(n),
        }
    }

    /// Builds a matrix from a sign function; `true` means −1.
    pub fn from_negative_fn(n: usize, negative: impl Fn(usize, usize) -> bool) -> Self {
        PmMatrix {
            bits: BitMatrix::from_fn(n, negative),
        }
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let n = rows.len();
        let mut m = PmMatrix::ones(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::OrderMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                match x {
                    1 => {}
                    -1 => m.bits.set(i, j, true),
                    _ => {
                        return Err(Error::parse(
                            i + 1,
                            j + 1,
                            format!("entry {x} is not +1 or -1"),
                        ))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.bits.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        if self.bits.get(i, j) {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self, i: usize, j: usize) -> bool {
        self.bits.get(i, j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: i8) {
        assert!(value == 1 || value == -1, "entry must be +1 or -1");
        self.bits.set(i, j, value == -1);
    }

    pub fn negate_entry(&mut self, i: usize, j: usize) {
        let neg = self.bits.get(i, j);
        self.bits.set(i, j, !neg);
    }

    /// Packed sign bits of row `i`.
    pub fn row_bits(&self, i: usize) -> &[u64] {
        self.bits.row(i)
    }

    pub fn sign_bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn into_sign_bits(self) -> BitMatrix {
        self.bits
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Inner product of rows `i` and `j` via popcount.
    pub fn row_dot(&self, i: usize, j: usize) -> i64 {
        let flips = bits::xor_popcount(self.bits.row(i), self.bits.row(j));
        self.n() as i64 - 2 * flips as i64
    }

    pub fn row_sum(&self, i: usize) -> i64 {
        self.n() as i64 - 2 * bits::popcount(self.bits.row(i)) as i64
    }

    pub fn col_sum(&self, j: usize) -> i64 {
        (0..self.n()).map(|i| self.get(i, j) as i64).sum()
    }

    pub fn transpose(&self) -> PmMatrix {
        PmMatrix::from_negative_fn(self.n(), |i, j| self.is_negative(j, i))
    }

    pub fn neg(&self) -> PmMatrix {
        PmMatrix::from_negative_fn(self.n(), |i, j| !self.is_negative(i, j))
    }

    /// Exact integer product, for small matrices and tests.
    pub fn mul_int(&self, other: &PmMatrix) -> Vec<Vec<i64>> {
        let n = self.n();
        let t = other.transpose();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let flips = bits::xor_popcount(self.bits.row(i), t.bits.row(j));
                        n as i64 - 2 * flips as i64
                    })
                    .collect()
            })
            .collect()
    }

    /// Writes the matrix text format: the order on the first line, then one
    /// line of `+`/`-` characters per row, LF-terminated.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = String::with_capacity((n + 1) * (n + 1) + 8);
        writeln!(out, "{n}").unwrap();
        for i in 0..n {
            for j in 0..n {
                out.push(if self.is_negative(i, j) { '-' } else { '+' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or("");
        if let Some(col) = header.find(|c: char| !c.is_ascii_digit()) {
            return Err(Error::parse(1, col + 1, "order must be a decimal integer"));
        }
        let n: usize = header
            .parse()
            .map_err(|_| Error::parse(1, 1, "missing or invalid order"))?;
        let mut m = PmMatrix::ones(n);
        for i in 0..n {
            let line_no = i + 2;
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(line_no, 1, format!("expected {n} rows")))?;
            let mut count = 0;
            for (j, ch) in line.chars().enumerate() {
                if j >= n {
                    return Err(Error::parse(line_no, j + 1, format!("row longer than {n}")));
                }
                match ch {
                    '+' => {}
                    '-' => m.bits.set(i, j, true),
                    other => {
                        return Err(Error::parse(
                            line_no,
                            j + 1,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                }
                count += 1;
            }
            if count != n {
                return Err(Error::parse(
                    line_no,
                    count + 1,
                    format!("row has {count} entries, expected {n}"),
                ));
            }
        }
        // Only the final LF may follow the last row.
        match (lines.next(), lines.next()) {
            (Some(""), None) => Ok(m),
            (None, _) => Err(Error::parse(n + 1, 1, "missing final newline")),
            _ => Err(Error::parse(n + 2, 1, "trailing content after last row")),
        }
    }
}
