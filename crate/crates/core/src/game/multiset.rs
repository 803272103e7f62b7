//! Opponent multisets in lexicographic order.
//!
//! A multiset of `size` actions out of `types` is stored as a non-decreasing
//! index sequence. The rank of such a sequence is its position in the
//! lexicographic enumeration produced by [`multisets`].

use alloc::vec;
use alloc::vec::Vec;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of multisets of `size` elements drawn from `types` kinds.
pub fn multiset_count(types: usize, size: usize) -> usize {
    if types == 0 {
        return usize::from(size == 0);
    }
    binomial(types + size - 1, size) as usize
}

pub fn multisets(types: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(multiset_count(types, size));
    if types == 0 {
        if size == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0usize; size];
    loop {
        out.push(cur.clone());
        // advance: rightmost position that can still grow
        let Some(pos) = (0..size).rev().find(|&i| cur[i] + 1 < types) else {
            return out;
        };
        let next = cur[pos] + 1;
        for slot in &mut cur[pos..] {
            *slot = next;
        }
    }
}

pub fn multiset_rank(types: usize, sorted: &[usize]) -> usize {
    let size = sorted.len();
    let mut rank = 0;
    let mut lo = 0;
    for (i, &s) in sorted.iter().enumerate() {
        debug_assert!(s >= lo && s < types, "sequence must be sorted and in range");
        for v in lo..s {
            rank += multiset_count(types - v, size - i - 1);
        }
        lo = s;
    }
    rank
}

/// Count vector (`types` long) of a multiset.
pub fn counts_of(types: usize, sorted: &[usize]) -> Vec<usize> {
    let mut c = vec![0; types];
    for &s in sorted {
        c[s] += 1;
    }
    c
}

/// Multinomial coefficient `size! / prod(counts!)`.
pub fn multinomial(counts: &[usize]) -> f64 {
    let mut remaining: usize = counts.iter().sum();
    let mut acc = 1.0;
    for &c in counts {
        acc *= binomial(remaining, c) as f64;
        remaining -= c;
    }
    acc
}
