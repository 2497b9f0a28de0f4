//! Finite abelian groups with a canonical element ordering, subsets, and
//! periodic autocorrelation.
//!
//! Elements are handled by their index in the canonical ordering:
//! `0, 1, .., n-1` for a cyclic group and `[0, g^0, g^1, .., g^{q-2}]` for the
//! additive group of a field with primitive element `g`. With the
//! discrete-log ordering, multiplying a nonzero element by `g^j` is an index
//! shift, which the cyclotomic and automorphism code relies on.

use rayon::prelude::*;

use crate::bits;
use crate::error::{Error, Result};
use crate::field::FieldTables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic,
    FieldAdditive { p: u32, e: u32 },
}

/// Handle for an element of a [`GroupSpec`]: its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElem(usize);

impl GroupElem {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    kind: GroupKind,
    order: usize,
    // Field-additive only: index -> field encoding, and its inverse.
    encoding: Vec<u32>,
    index_of: Vec<u32>,
    field: Option<FieldTables>,
}

impl GroupSpec {
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::IndexOutOfRange { index: 0, order: 0 });
        }
        Ok(GroupSpec {
            kind: GroupKind::Cyclic,
            order: n,
            encoding: Vec::new(),
            index_of: Vec::new(),
            field: None,
        })
    }

    /// The additive group of the field, ordered `[0, g^0, .., g^{q-2}]`.
    pub fn field_additive(tables: &FieldTables) -> Self {
        let q = tables.q() as usize;
        let mut encoding = Vec::with_capacity(q);
        encoding.push(0);
        encoding.extend_from_slice(tables.antilog());
        let mut index_of = vec![0u32; q];
        for (i, &x) in encoding.iter().enumerate() {
            index_of[x as usize] = i as u32;
        }
        GroupSpec {
            kind: GroupKind::FieldAdditive {
                p: tables.p(),
                e: tables.e(),
            },
            order: q,
            encoding,
            index_of,
            field: Some(tables.clone()),
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn field(&self) -> Option<&FieldTables> {
        self.field.as_ref()
    }

    pub fn elem(&self, index: usize) -> Result<GroupElem> {
        if index < self.order {
            Ok(GroupElem(index))
        } else {
            Err(Error::IndexOutOfRange {
                index,
                order: self.order,
            })
        }
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> {
        (0..self.order).map(GroupElem)
    }

    /// Index of a field element given by its encoding (field-additive only).
    pub fn index_of_encoding(&self, x: u32) -> Option<usize> {
        self.index_of.get(x as usize).map(|&i| i as usize)
    }

    /// Field encoding of the element at `index` (field-additive only).
    pub fn encoding_of(&self, index: usize) -> Option<u32> {
        self.encoding.get(index).copied()
    }

    fn check(&self, x: GroupElem) -> Result<()> {
        self.elem(x.0).map(|_| ())
    }

    pub fn add(&self, x: GroupElem, y: GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(GroupElem(self.add_idx(x.0, y.0)))
    }

    pub fn neg(&self, x: GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        Ok(GroupElem(self.neg_idx(x.0)))
    }

    pub fn sub(&self, x: GroupElem, y: GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(GroupElem(self.sub_idx(x.0, y.0)))
    }

    pub(crate) fn add_idx(&self, x: usize, y: usize) -> usize {
        match &self.field {
            None => (x + y) % self.order,
            Some(f) => {
                let s = f.add(self.encoding[x], self.encoding[y]);
                self.index_of[s as usize] as usize
            }
        }
    }

    pub(crate) fn neg_idx(&self, x: usize) -> usize {
        match &self.field {
            None => (self.order - x) % self.order,
            Some(f) => self.index_of[f.neg(self.encoding[x]) as usize] as usize,
        }
    }

    pub(crate) fn sub_idx(&self, x: usize, y: usize) -> usize {
        self.add_idx(x, self.neg_idx(y))
    }

    /// Table of `neg_idx` for every index.
    pub(crate) fn negation_table(&self) -> Vec<usize> {
        (0..self.order).map(|x| self.neg_idx(x)).collect()
    }
}

/// A subset `D` of a group, as a membership bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    order: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(order: usize) -> Self {
        Subset {
            order,
            words: vec![0; bits::words_for(order)],
        }
    }

    pub fn from_indices(order: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Subset::empty(order);
        for i in indices {
            if i >= order {
                return Err(Error::IndexOutOfRange { index: i, order });
            }
            bits::set(&mut s.words, i, true);
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        bits::popcount(&self.words) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.order && bits::get(&self.words, i)
    }

    pub fn insert(&mut self, i: usize) -> Result<()> {
        if i >= self.order {
            return Err(Error::IndexOutOfRange {
                index: i,
                order: self.order,
            });
        }
        bits::set(&mut self.words, i, true);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        bits::ones(&self.words)
    }

    /// The ±1 indicator `s_D(x)`: −1 on members, +1 elsewhere.
    pub fn indicator(&self, i: usize) -> i8 {
        if self.contains(i) {
            -1
        } else {
            1
        }
    }
}

/// Periodic autocorrelation `P_D(w)`, evaluated as `v - 4(|D| - |D ∩ (D - w)|)`.
pub fn autocorrelation(spec: &GroupSpec, d: &Subset, w: GroupElem) -> Result<i64> {
    spec.check(w)?;
    if d.order() != spec.order() {
        return Err(Error::IndexOutOfRange {
            index: d.order(),
            order: spec.order(),
        });
    }
    Ok(autocorrelation_unchecked(spec, d, w.0))
}

pub(crate) fn autocorrelation_unchecked(spec: &GroupSpec, d: &Subset, w: usize) -> i64 {
    let overlap = d.iter().filter(|&x| d.contains(spec.add_idx(x, w))).count() as i64;
    spec.order() as i64 - 4 * (d.len() as i64 - overlap)
}

/// `P_D(w)` for every nonzero shift, in canonical index order.
pub fn autocorrelation_profile(spec: &GroupSpec, d: &Subset) -> Result<Vec<(GroupElem, i64)>> {
    if d.order() != spec.order() {
        return Err(Error::IndexOutOfRange {
            index: d.order(),
            order: spec.order(),
        });
    }
    Ok((1..spec.order())
        .into_par_iter()
        .map(|w| (GroupElem(w), autocorrelation_unchecked(spec, d, w)))
        .collect())
}
