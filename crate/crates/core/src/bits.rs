//! Bitmask helpers for subsets of small ground sets.
//!
//! Sets over `{1..n}` (n ≤ 32) are stored as `u32` with bit `v-1` for
//! element `v`. All iterators yield masks in ascending numeric order, which
//! doubles as the crate-wide canonical enumeration order.

/// Subset of a ground set `{1..n}`, bit `v-1` set for element `v`.
pub type Mask = u32;

/// Mask of the full ground set `{1..n}`.
pub fn full(n: usize) -> Mask {
    debug_assert!(n <= 32);
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Mask with just element `v` (1-based).
pub fn single(v: usize) -> Mask {
    1u32 << (v - 1)
}

/// Whether element `v` (1-based) is in the mask.
pub fn contains(mask: Mask, v: usize) -> bool {
    mask & single(v) != 0
}

/// Elements of the mask as ascending 1-based values.
pub fn elems(mask: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        out.push(b + 1);
        m &= m - 1;
    }
    out
}

/// Mask of the given 1-based elements.
pub fn mask_of(elems: &[usize]) -> Mask {
    elems.iter().fold(0, |m, &v| m | single(v))
}

/// All subsets of `mask`, including the empty set and `mask` itself, in
/// ascending numeric order (carry-rippler enumeration).
pub fn subsets_of(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut sub = 0u32;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        sub = sub.wrapping_sub(mask) & mask;
        done = sub == 0;
        Some(cur)
    })
}

/// All size-`k` subsets of `{1..n}` in ascending numeric order.
pub fn ksubsets(n: usize, k: usize) -> impl Iterator<Item = Mask> {
    debug_assert!(n <= 32);
    let limit = if n == 32 { u64::from(u32::MAX) + 1 } else { 1u64 << n };
    let mut cur: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut first = true;
    std::iter::from_fn(move || {
        if first {
            first = false;
            if k > n {
                return None;
            }
            return Some(cur as Mask);
        }
        if k == 0 {
            return None;
        }
        // Gosper's hack: next larger integer with the same popcount.
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        cur = (((r ^ cur) >> 2) / c) | r;
        if cur < limit {
            Some(cur as Mask)
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_single() {
        assert_eq!(full(0), 0);
        assert_eq!(full(3), 0b111);
        assert_eq!(single(1), 1);
        assert_eq!(single(4), 8);
        assert!(contains(0b101, 3));
        assert!(!contains(0b101, 2));
    }

    #[test]
    fn elems_roundtrip() {
        let m = mask_of(&[2, 5, 7]);
        assert_eq!(elems(m), vec![2, 5, 7]);
        assert_eq!(mask_of(&elems(0b10110)), 0b10110);
    }

    #[test]
    fn subsets_carry_rippler() {
        let got: Vec<Mask> = subsets_of(0b101).collect();
        assert_eq!(got, vec![0b000, 0b001, 0b100, 0b101]);
        assert_eq!(subsets_of(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn ksubsets_order_and_count() {
        let got: Vec<Mask> = ksubsets(4, 2).collect();
        assert_eq!(got, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(ksubsets(8, 3).count(), 56);
        assert_eq!(ksubsets(5, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(ksubsets(3, 4).count(), 0);
    }
}
