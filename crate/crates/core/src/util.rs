//! Row-major multi-index bookkeeping shared by both backends.
//!
//! A pair `(i, j)` drawn from sizes `(m, n)` is encoded as `i * n + j`, and
//! longer tuples nest the same way left to right. Both backends use this
//! encoding for every tensor product, cup/cap and direct-sum block, so index
//! arithmetic lives here once.

/// Encode a multi-index against its factor sizes, row-major.
///
/// Panics if the lengths differ or any component is out of range.
pub fn encode(index: &[usize], dims: &[usize]) -> usize {
    assert_eq!(index.len(), dims.len(), "index arity mismatch");
    let mut acc = 0;
    for (&i, &d) in index.iter().zip(dims) {
        assert!(i < d, "index component {i} out of range for size {d}");
        acc = acc * d + i;
    }
    acc
}

/// Decode a flat index into its components, row-major.
pub fn decode(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        assert!(d > 0, "cannot decode against a zero-sized factor");
        *slot = flat % d;
        flat /= d;
    }
    assert_eq!(flat, 0, "flat index out of range for dims {dims:?}");
    out
}

/// Pairs `(target_flat, source_flat)` of the permutation morphism that
/// reorders tensor factors: output factor `k` is input factor `perm[k]`.
///
/// The result has one pair per point of the product space, so it describes
/// simultaneously a permutation relation and a permutation matrix.
pub fn factor_permutation_pairs(dims: &[usize], perm: &[usize]) -> Vec<(usize, usize)> {
    assert_eq!(dims.len(), perm.len(), "permutation arity mismatch");
    let mut seen = vec![false; dims.len()];
    for &p in perm {
        assert!(!seen[p], "not a permutation: repeated factor {p}");
        seen[p] = true;
    }
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let total: usize = dims.iter().product();
    let mut pairs = Vec::with_capacity(total);
    for src in 0..total {
        let idx = decode(src, dims);
        let out_idx: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
        pairs.push((encode(&out_idx, &out_dims), src));
    }
    pairs
}

/// Call `f` with every permutation of `0..n` (Heap's algorithm). The slice
/// passed to `f` is reused between calls.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut items: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(&items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_round_trip() {
        let dims = [2, 3, 4];
        for flat in 0..24 {
            assert_eq!(encode(&decode(flat, &dims), &dims), flat);
        }
    }

    #[test]
    fn pair_encoding_is_row_major() {
        assert_eq!(encode(&[1, 2], &[3, 4]), 6);
        assert_eq!(decode(6, &[3, 4]), vec![1, 2]);
    }

    #[test]
    fn middle_swap_permutation() {
        // [A, B*, A, B] with perm [0, 2, 1, 3] sends (a, b, a', b') to (a, a', b, b').
        let pairs = factor_permutation_pairs(&[2, 2, 2, 2], &[0, 2, 1, 3]);
        for &(dst, src) in &pairs {
            let s = decode(src, &[2, 2, 2, 2]);
            let d = decode(dst, &[2, 2, 2, 2]);
            assert_eq!(d, vec![s[0], s[2], s[1], s[3]]);
        }
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn encode_rejects_overflow() {
        encode(&[2, 0], &[2, 3]);
    }

    #[test]
    fn permutations_are_exhaustive_and_distinct() {
        let mut seen = std::collections::BTreeSet::new();
        for_each_permutation(4, |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 24);
        // n = 0 yields exactly the empty permutation.
        let mut count = 0;
        for_each_permutation(0, |_| count += 1);
        assert_eq!(count, 1);
    }
}
