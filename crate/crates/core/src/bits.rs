//! Small helpers for 64-bit word packing shared by subsets and matrices.

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[inline]
pub(crate) fn get(words: &[u64], i: usize) -> bool {
    (words[i / WORD] >> (i % WORD)) & 1 == 1
}

#[inline]
pub(crate) fn set(words: &mut [u64], i: usize, value: bool) {
    let mask = 1u64 << (i % WORD);
    if value {
        words[i / WORD] |= mask;
    } else {
        words[i / WORD] &= !mask;
    }
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

/// Popcount of `a XOR b`; padding bits are zero on both sides.
#[inline]
pub(crate) fn xor_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

/// Iterates set bit positions in ascending order.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(wi * WORD + bit)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_lists_positions_across_words() {
        let mut w = vec![0u64; 3];
        for i in [0, 5, 63, 64, 130] {
            set(&mut w, i, true);
        }
        assert_eq!(ones(&w).collect::<Vec<_>>(), vec![0, 5, 63, 64, 130]);
        assert_eq!(popcount(&w), 5);
        set(&mut w, 63, false);
        assert!(!get(&w, 63));
        assert_eq!(xor_popcount(&w, &[0, 0, 0]), 4);
    }
}
