//! The affine subgroup `{x -> ux + a : u ∈ C_0, a ∈ GF(q)}` acting on the
//! bordered array.
//!
//! A map acts on the matrix indices by fixing the two border indices and
//! moving the group index of `x` to the group index of `ux + a`, identically in
//! both group-indexed blocks. Because both core blocks are group-developed
//! and `D0`, `D1` are unions of `C_0`-cosets, these permutations preserve the
//! matrix without any sign changes.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldTables;
use crate::matrix::PmMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineMap {
    u: u32,
    a: u32,
}

impl AffineMap {
    /// `x -> ux + a`; `u` must lie in the class `C_0` of the `n_classes`
    /// partition.
    pub fn new(tables: &FieldTables, n_classes: usize, u: u32, a: u32) -> Result<Self> {
        if a >= tables.q() {
            return Err(Error::IndexOutOfRange {
                index: a as usize,
                order: tables.q() as usize,
            });
        }
        match tables.log(u) {
            Some(l) if (l as usize).is_multiple_of(n_classes) => Ok(AffineMap { u, a }),
            _ => Err(Error::MultiplierNotInBaseClass(u)),
        }
    }

    pub fn identity() -> Self {
        AffineMap { u: 1, a: 0 }
    }

    pub fn translation(a: u32) -> Self {
        AffineMap { u: 1, a }
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn apply(&self, tables: &FieldTables, x: u32) -> u32 {
        tables.add(tables.mul(self.u, x), self.a)
    }

    /// `self ∘ other`: `x -> u1 (u2 x + a2) + a1`.
    pub fn compose(&self, tables: &FieldTables, other: &AffineMap) -> AffineMap {
        AffineMap {
            u: tables.mul(self.u, other.u),
            a: tables.add(tables.mul(self.u, other.a), self.a),
        }
    }
}

/// A simultaneous row/column permutation of the order-`2(q+1)` array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedPermutation {
    sigma: Vec<usize>,
}

impl InducedPermutation {
    pub fn identity(n: usize) -> Self {
        InducedPermutation {
            sigma: (0..n).collect(),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.sigma
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &InducedPermutation) -> InducedPermutation {
        InducedPermutation {
            sigma: other.sigma.iter().map(|&i| self.sigma[i]).collect(),
        }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = InducedPermutation::identity(n);
        p.sigma.swap(i, j);
        p
    }
}

/// Canonical index of a field element: 0 for zero, `log(x) + 1` otherwise.
fn group_index(tables: &FieldTables, x: u32) -> usize {
    tables.log(x).map_or(0, |l| l as usize + 1)
}

fn group_element(tables: &FieldTables, index: usize) -> u32 {
    if index == 0 {
        0
    } else {
        tables.antilog()[index - 1]
    }
}

pub fn induced_permutation(tables: &FieldTables, map: &AffineMap) -> InducedPermutation {
    let v = tables.q() as usize;
    let mut sigma = vec![0usize; 2 * v + 2];
    sigma[1] = 1;
    for i in 0..v {
        let j = group_index(tables, map.apply(tables, group_element(tables, i)));
        sigma[2 + i] = 2 + j;
        sigma[2 + v + i] = 2 + v + j;
    }
    InducedPermutation { sigma }
}

/// Dense copy of a matrix for repeated permutation checks.
pub struct AutomorphismChecker {
    n: usize,
    negative: Vec<bool>,
}

impl AutomorphismChecker {
    pub fn new(h: &PmMatrix) -> Self {
        let n = h.n();
        let negative = (0..n * n).map(|k| h.is_negative(k / n, k % n)).collect();
        AutomorphismChecker { n, negative }
    }

    /// `H[σ(i)][σ(j)] == H[i][j]` for all `i`, `j`.
    pub fn check(&self, perm: &InducedPermutation) -> Result<bool> {
        let n = self.n;
        if perm.len() != n {
            return Err(Error::OrderMismatch {
                expected: n,
                found: perm.len(),
            });
        }
        let sigma = perm.as_slice();
        Ok((0..n).into_par_iter().all(|i| {
            let src = &self.negative[sigma[i] * n..(sigma[i] + 1) * n];
            let row = &self.negative[i * n..(i + 1) * n];
            sigma.iter().zip(row).all(|(&sj, &x)| src[sj] == x)
        }))
    }
}

pub fn verify_automorphism(h: &PmMatrix, perm: &InducedPermutation) -> Result<bool> {
    AutomorphismChecker::new(h).check(perm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditOptions {
    /// Random composites of generators to check.
    pub samples: usize,
    /// Check every element of the subgroup.
    pub exhaustive: bool,
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            samples: 100,
            exhaustive: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub base_class_size: usize,
    pub field_order: usize,
    pub multiplier: u32,
    pub multiplier_order: usize,
    pub generators_verified: usize,
    pub samples_verified: usize,
    /// Elements checked in exhaustive mode (0 otherwise).
    pub exhaustive_verified: usize,
    pub lines: Vec<String>,
}

impl AuditReport {
    /// `|C_0| * q`, the order of the affine subgroup.
    pub fn subgroup_order(&self) -> usize {
        self.base_class_size * self.field_order
    }

    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            writeln!(out, "{l}").unwrap();
        }
        writeln!(
            out,
            "PASS order={} ({}*{})",
            self.subgroup_order(),
            self.base_class_size,
            self.field_order
        )
        .unwrap();
        out
    }
}

/// Verifies the generators of the affine subgroup, a sample of random
/// composites, and optionally every element.
pub fn subgroup_audit(
    h: &PmMatrix,
    tables: &FieldTables,
    n_classes: usize,
    options: &AuditOptions,
) -> Result<AuditReport> {
    let q = tables.q() as usize;
    if h.n() != 2 * q + 2 {
        return Err(Error::OrderMismatch {
            expected: 2 * q + 2,
            found: h.n(),
        });
    }
    if n_classes == 0 || !(q - 1).is_multiple_of(n_classes) {
        return Err(Error::ClassCountMismatch {
            n: n_classes,
            order: q - 1,
        });
    }
    let checker = AutomorphismChecker::new(h);
    let base_class_size = (q - 1) / n_classes;
    let mut lines = Vec::new();

    let multiplier = tables.pow_g(n_classes as u64);
    let mut multiplier_order = 1;
    let mut x = multiplier;
    while x != 1 {
        x = tables.mul(x, multiplier);
        multiplier_order += 1;
    }
    lines.push(format!("multiplier u={multiplier} order={multiplier_order}"));
    if multiplier_order != base_class_size {
        return Err(Error::AutomorphismRejected(format!(
            "multiplier {multiplier} has order {multiplier_order}, expected {base_class_size}"
        )));
    }

    let mut generators = vec![(format!("multiplier u={multiplier}"), AffineMap { u: multiplier, a: 0 })];
    let mut place = 1u32;
    for k in 0..tables.e() {
        generators.push((format!("translation a={place} (x^{k})"), AffineMap::translation(place)));
        place *= tables.p();
    }
    for (label, map) in &generators {
        if !checker.check(&induced_permutation(tables, map))? {
            return Err(Error::AutomorphismRejected(label.clone()));
        }
        lines.push(format!("generator {label} PASS"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let gen_perms: Vec<InducedPermutation> = generators
        .iter()
        .map(|(_, m)| induced_permutation(tables, m))
        .collect();
    for s in 0..options.samples {
        let len = rng.gen_range(1..=12);
        let mut map = AffineMap::identity();
        let mut perm = InducedPermutation::identity(h.n());
        let mut word = Vec::with_capacity(len);
        for _ in 0..len {
            let g = rng.gen_range(0..generators.len());
            word.push(g);
            map = map.compose(tables, &generators[g].1);
            perm = perm.compose(&gen_perms[g]);
        }
        let direct = induced_permutation(tables, &map);
        let label = format!("sample {s} u={} a={} word={word:?}", map.u, map.a);
        if direct != perm || !checker.check(&direct)? {
            return Err(Error::AutomorphismRejected(label));
        }
        lines.push(format!("{label} PASS"));
    }

    let mut exhaustive_verified = 0;
    if options.exhaustive {
        let multipliers: Vec<u32> = (0..base_class_size as u64)
            .map(|k| tables.pow_g(k * n_classes as u64))
            .collect();
        let failure = multipliers
            .par_iter()
            .flat_map_iter(|&u| (0..q as u32).map(move |a| AffineMap { u, a }))
            .find_first(|m| !checker.check(&induced_permutation(tables, m)).unwrap_or(false));
        if let Some(m) = failure {
            return Err(Error::AutomorphismRejected(format!("element u={} a={}", m.u, m.a)));
        }
        exhaustive_verified = multipliers.len() * q;
        lines.push(format!("exhaustive {exhaustive_verified} elements PASS"));
    }

    Ok(AuditReport {
        base_class_size,
        field_order: q,
        multiplier,
        multiplier_order,
        generators_verified: generators.len(),
        samples_verified: options.samples,
        exhaustive_verified,
        lines,
    })
}
