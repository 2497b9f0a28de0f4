//! Group-developed matrices, the bordered array of order `2(v+1)`, and the
//! Gate0 identities `HH^T = nI`, `H + H^T = 2I`.
//!
//! With `g_0, .., g_{v-1}` the canonical ordering of the group:
//!
//! * type-1: `M[i][j] = s_D(g_j - g_i)`
//! * type-2: `M[i][j] = s_D(g_i + g_j)`
//!
//! The type-2 matrix of `D1` is turned into a type-1-style matrix
//! `C = B R` (`R` the reversal `g -> -g`) so that every core block lives in the
//! commutative algebra of group-developed matrices. The bordered array is
//!
//! ```text
//!   +1  +1 |  e^T    e^T
//!   -1  +1 |  e^T   -e^T
//!   -e  -e |  A      C
//!   -e  +e | -C^T    A^T
//! ```
//!
//! where `A` is the type-1 matrix of the skew block `D0` and both `A` and `C`
//! have all row and column sums equal to +1.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{GroupSpec, Subset};
use crate::matrix::{BitMatrix, PmMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DevelopmentKind {
    Type1,
    Type2,
}

/// `M[i][j] = s_D(g_j - g_i)`.
pub fn type1_matrix(spec: &GroupSpec, d: &Subset) -> PmMatrix {
    let v = spec.order();
    let neg = spec.negation_table();
    PmMatrix::from_negative_fn(v, |i, j| d.contains(spec.add_idx(j, neg[i])))
}

/// `M[i][j] = s_D(g_i + g_j)`; symmetric.
pub fn type2_matrix(spec: &GroupSpec, d: &Subset) -> PmMatrix {
    PmMatrix::from_negative_fn(spec.order(), |i, j| d.contains(spec.add_idx(i, j)))
}

pub fn developed_matrix(spec: &GroupSpec, d: &Subset, kind: DevelopmentKind) -> PmMatrix {
    match kind {
        DevelopmentKind::Type1 => type1_matrix(spec, d),
        DevelopmentKind::Type2 => type2_matrix(spec, d),
    }
}

/// The reversal permutation matrix, `R[i][j] = 1` iff `g_i + g_j = 0`, as
/// the image of each index.
pub fn reversal(spec: &GroupSpec) -> Vec<usize> {
    spec.negation_table()
}

/// `C = M R`, i.e. `C[i][k] = M[i][index(-g_k)]`. For a type-2 `M` of `D`
/// this gives `C[i][k] = s_D(g_i - g_k)`.
pub fn reversal_conjugate(spec: &GroupSpec, m: &PmMatrix) -> Result<PmMatrix> {
    if m.n() != spec.order() {
        return Err(Error::OrderMismatch {
            expected: spec.order(),
            found: m.n(),
        });
    }
    let neg = spec.negation_table();
    Ok(PmMatrix::from_negative_fn(m.n(), |i, k| m.is_negative(i, neg[k])))
}

fn check_unit_sums(m: &PmMatrix) -> Result<()> {
    for i in 0..m.n() {
        let sum = m.row_sum(i);
        if sum != 1 {
            return Err(Error::RowSumViolation { index: i, sum });
        }
    }
    for j in 0..m.n() {
        let sum = m.col_sum(j);
        if sum != 1 {
            return Err(Error::RowSumViolation { index: j, sum });
        }
    }
    Ok(())
}

/// Assembles the bordered array from the core blocks `A` and `C`.
pub fn assemble_bordered(a: &PmMatrix, c: &PmMatrix) -> Result<PmMatrix> {
    let v = a.n();
    if c.n() != v {
        return Err(Error::OrderMismatch {
            expected: v,
            found: c.n(),
        });
    }
    check_unit_sums(a)?;
    check_unit_sums(c)?;

    let n = 2 * v + 2;
    let (x0, y0) = (2, 2 + v);
    Ok(PmMatrix::from_negative_fn(n, |i, j| match (i, j) {
        (0, _) => false,
        (1, 0) => true,
        (1, 1) => false,
        (1, j) => j >= y0,
        (_, 0) => true,
        (i, 1) => i < y0,
        (i, j) => match (i < y0, j < y0) {
            (true, true) => a.is_negative(i - x0, j - x0),
            (true, false) => c.is_negative(i - x0, j - y0),
            // -C^T
            (false, true) => !c.is_negative(j - x0, i - y0),
            // A^T
            (false, false) => a.is_negative(j - y0, i - y0),
        },
    }))
}

/// Full pipeline from two blocks: `A = type1(D0)`, `C = type2(D1) R`.
pub fn construct_from_blocks(spec: &GroupSpec, d0: &Subset, d1: &Subset) -> Result<PmMatrix> {
    let a = type1_matrix(spec, d0);
    let c = reversal_conjugate(spec, &type2_matrix(spec, d1))?;
    assemble_bordered(&a, &c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gate0Report {
    pub n: usize,
    /// `HH^T = nI` exactly.
    pub gram_ok: bool,
    /// `H + H^T = 2I` exactly.
    pub skew_ok: bool,
    /// Largest `|(HH^T)_{ij}|` over `i != j`.
    pub max_offdiag_gram: i64,
}

impl Gate0Report {
    pub fn pass(&self) -> bool {
        self.gram_ok && self.skew_ok
    }
}

/// Exact verification of both identities with popcount inner products.
pub fn gate0_verify(h: &PmMatrix) -> Gate0Report {
    let n = h.n();
    let (max_off, diag_ok) = (0..n)
        .into_par_iter()
        .map(|i| {
            let max_off = (i + 1..n).map(|j| h.row_dot(i, j).abs()).max().unwrap_or(0);
            (max_off, h.row_dot(i, i) == n as i64)
        })
        .reduce(|| (0, true), |a, b| (a.0.max(b.0), a.1 && b.1));

    let skew_ok = (0..n).into_par_iter().all(|i| {
        (0..n).all(|j| {
            let s = h.get(i, j) as i32 + h.get(j, i) as i32;
            s == if i == j { 2 } else { 0 }
        })
    });

    Gate0Report {
        n,
        gram_ok: diag_ok && max_off == 0,
        skew_ok,
        max_offdiag_gram: max_off,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedForm {
    /// `DHD` with `D = diag(H[0][*])`; first row all +1.
    pub normalized: PmMatrix,
    /// `Hn` with first row and column deleted.
    pub core: PmMatrix,
    /// `(J - S) / 2`: 1 exactly where the core is −1.
    pub tournament: BitMatrix,
}

pub fn normalize_core_tournament(h: &PmMatrix) -> Result<NormalizedForm> {
    if !gate0_verify(h).pass() {
        return Err(Error::Gate0Failed);
    }
    let n = h.n();
    let d: Vec<bool> = (0..n).map(|j| h.is_negative(0, j)).collect();
    let normalized = PmMatrix::from_negative_fn(n, |i, j| h.is_negative(i, j) ^ d[i] ^ d[j]);
    let core = PmMatrix::from_negative_fn(n - 1, |i, j| normalized.is_negative(i + 1, j + 1));
    let tournament = core.sign_bits().clone();
    Ok(NormalizedForm {
        normalized,
        core,
        tournament,
    })
}
