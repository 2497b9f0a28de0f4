//! Blocks built from cyclotomic classes, and certification of the bordered
//! skew-Hadamard difference family condition:
//!
//! 1. `D0` is skew: for every `x != 0`, exactly one of `x`, `-x` lies in `D0`;
//! 2. `P_{D0}(w) + P_{D1}(w) = -2` for every `w != 0`.
//!
//! The certificate keeps every shift sum so a log can be diffed between runs.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{CyclotomicPartition, FieldConfig, FieldTables};
use crate::group::{autocorrelation_unchecked, GroupElem, GroupSpec, Subset};

/// Class index sets the blocks were built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassIndices {
    pub i0: Vec<usize>,
    pub i1: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPair {
    pub d0: Subset,
    pub d1: Subset,
    pub classes: Option<ClassIndices>,
}

impl BlockPair {
    pub fn from_subsets(d0: Subset, d1: Subset) -> Self {
        BlockPair {
            d0,
            d1,
            classes: None,
        }
    }
}

fn normalize(indices: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut out = indices.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&bad) = out.iter().find(|&&i| i >= n) {
        return Err(Error::ClassIndexOutOfRange { index: bad, n });
    }
    Ok(out)
}

/// `D0 = ∪_{i∈I0} C_i`, `D1 = ∪_{i∈I1} C_i`, as subsets of the field-additive
/// group in its canonical ordering (index of `g^k` is `k + 1`).
pub fn blocks_from_indices(
    partition: &CyclotomicPartition,
    i0: &[usize],
    i1: &[usize],
) -> Result<BlockPair> {
    let n = partition.n();
    let i0 = normalize(i0, n)?;
    let i1 = normalize(i1, n)?;
    let v = n * partition.class_size() + 1;
    let union = |classes: &[usize]| {
        Subset::from_indices(v, (1..v).filter(|k| classes.contains(&((k - 1) % n))))
    };
    Ok(BlockPair {
        d0: union(&i0)?,
        d1: union(&i1)?,
        classes: Some(ClassIndices { i0, i1 }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkewCheck {
    Skew,
    /// `0 ∈ D0`.
    ContainsZero,
    /// `x` and `-x` are both in `D0`, or both outside it.
    Violation { x: GroupElem },
}

impl SkewCheck {
    pub fn is_skew(self) -> bool {
        self == SkewCheck::Skew
    }
}

pub fn check_skew(spec: &GroupSpec, d0: &Subset) -> SkewCheck {
    if d0.contains(0) {
        return SkewCheck::ContainsZero;
    }
    (1..spec.order())
        .find(|&x| d0.contains(x) == d0.contains(spec.neg_idx(x)))
        .map_or(SkewCheck::Skew, |x| SkewCheck::Violation {
            x: spec.elem(x).expect("index in range"),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShdfFailure {
    NotSkew(SkewCheck),
    /// First shift whose autocorrelation sum is not −2.
    SumMismatch { shift: GroupElem, sum: i64 },
    /// The sums pass but `|D1| != (v-1)/2`; the bordered array needs developed
    /// row sums of +1.
    D1Size { size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShdfCertificate {
    pub v: usize,
    pub skew: SkewCheck,
    pub d0_size: usize,
    pub d1_size: usize,
    /// `P_{D0}(w) + P_{D1}(w)` for `w = 1..v` in canonical order.
    pub sums: Vec<i64>,
    pub failures: Vec<ShdfFailure>,
}

impl ShdfCertificate {
    pub fn skew_ok(&self) -> bool {
        self.skew.is_skew()
    }

    pub fn sums_ok(&self) -> bool {
        self.sums.iter().all(|&s| s == -2)
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// One `"w_index sum"` line per shift, then a PASS/FAIL trailer.
    pub fn to_log(&self) -> String {
        let mut out = String::with_capacity(self.sums.len() * 10 + 64);
        for (k, s) in self.sums.iter().enumerate() {
            writeln!(out, "{} {}", k + 1, s).unwrap();
        }
        if self.pass() {
            writeln!(out, "PASS v={}", self.v).unwrap();
        } else {
            let reasons: Vec<String> = self.failures.iter().map(describe_failure).collect();
            writeln!(out, "FAIL v={} reason={}", self.v, reasons.join(";")).unwrap();
        }
        out
    }
}

fn describe_failure(f: &ShdfFailure) -> String {
    match f {
        ShdfFailure::NotSkew(SkewCheck::ContainsZero) => "d0-contains-zero".into(),
        ShdfFailure::NotSkew(SkewCheck::Violation { x }) => format!("d0-not-skew@{}", x.index()),
        ShdfFailure::NotSkew(SkewCheck::Skew) => "d0-not-skew".into(),
        ShdfFailure::SumMismatch { shift, sum } => {
            format!("sum@{}={}", shift.index(), sum)
        }
        ShdfFailure::D1Size { size } => format!("d1-size={size}"),
    }
}

/// Evaluates both conditions over every nonzero shift.
pub fn check_shdf(spec: &GroupSpec, pair: &BlockPair) -> ShdfCertificate {
    let v = spec.order();
    let skew = check_skew(spec, &pair.d0);
    let sums: Vec<i64> = (1..v)
        .into_par_iter()
        .map(|w| {
            autocorrelation_unchecked(spec, &pair.d0, w) + autocorrelation_unchecked(spec, &pair.d1, w)
        })
        .collect();

    let mut failures = Vec::new();
    if !skew.is_skew() {
        failures.push(ShdfFailure::NotSkew(skew));
    }
    if let Some(k) = sums.iter().position(|&s| s != -2) {
        failures.push(ShdfFailure::SumMismatch {
            shift: spec.elem(k + 1).expect("index in range"),
            sum: sums[k],
        });
    } else if pair.d1.len() != (v - 1) / 2 {
        failures.push(ShdfFailure::D1Size {
            size: pair.d1.len(),
        });
    }

    ShdfCertificate {
        v,
        skew,
        d0_size: pair.d0.len(),
        d1_size: pair.d1.len(),
        sums,
        failures,
    }
}

/// Everything produced by a successful generator search.
#[derive(Debug, Clone)]
pub struct GeneratorSearch {
    pub tables: FieldTables,
    pub partition: CyclotomicPartition,
    pub group: GroupSpec,
    pub pair: BlockPair,
    pub certificate: ShdfCertificate,
    /// Candidates tried, in order, with their pass status.
    pub trace: Vec<(u32, bool)>,
}

/// Tries primitive elements in ascending canonical encoding (or only the
/// configured one) and returns the first for which the class-union blocks
/// certify.
pub fn find_valid_generator(
    config: &FieldConfig,
    n: usize,
    i0: &[usize],
    i1: &[usize],
) -> Result<GeneratorSearch> {
    let base = FieldTables::build(config)?;
    // Validates n | q-1 and the index ranges before searching.
    let partition = CyclotomicPartition::new(&base, n)?;
    blocks_from_indices(&partition, i0, i1)?;

    let candidates: Vec<u32> = match config.generator {
        Some(g) => vec![g],
        None => base.primitive_elements().collect(),
    };
    let mut trace = Vec::new();
    for g in candidates {
        let tables = base.with_generator(g)?;
        let partition = CyclotomicPartition::new(&tables, n)?;
        let pair = blocks_from_indices(&partition, i0, i1)?;
        let group = GroupSpec::field_additive(&tables);
        let certificate = check_shdf(&group, &pair);
        let pass = certificate.pass();
        trace.push((g, pass));
        if pass {
            return Ok(GeneratorSearch {
                tables,
                partition,
                group,
                pair,
                certificate,
                trace,
            });
        }
    }
    Err(Error::GeneratorSearchExhausted { tried: trace.len() })
}
