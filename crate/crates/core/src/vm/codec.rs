//! Cantor pairing, length-prefixed sequence codes and disjoint-union tags.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision natural number.
pub type Nat = BigUint;

/// Longest sequence [`decode_seq`] will materialise.
pub const SEQ_LIMIT: usize = 1 << 20;

/// Shorthand for building a [`Nat`] from a machine integer.
pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}

/// Lossy conversion to `u64`, `None` when the value does not fit.
pub fn to_u64(n: &Nat) -> Option<u64> {
    n.to_u64()
}

/// Cantor pairing `(a+b)(a+b+1)/2 + b`.
pub fn pair(a: &Nat, b: &Nat) -> Nat {
    let s = a + b;
    let t = (&s * (&s + 1u32)) >> 1;
    t + b
}

/// [`pair`] on machine integers.
pub fn pair_u(a: u64, b: u64) -> Nat {
    pair(&nat(a), &nat(b))
}

/// Inverse of [`pair`].
pub fn unpair(n: &Nat) -> (Nat, Nat) {
    // w = floor((sqrt(8n+1) - 1) / 2) is the diagonal index a+b.
    let disc: Nat = (n << 3u32) + 1u32;
    let w: Nat = (disc.sqrt() - 1u32) >> 1;
    let t = (&w * (&w + 1u32)) >> 1;
    let b = n - t;
    let a = &w - &b;
    (a, b)
}

/// First component of [`unpair`].
pub fn fst(n: &Nat) -> Nat {
    unpair(n).0
}

/// Second component of [`unpair`].
pub fn snd(n: &Nat) -> Nat {
    unpair(n).1
}

/// Right-nested body of a non-empty sequence: `[x] -> x`, `[x, rest..] -> pair(x, nest(rest))`.
fn nest(items: &[Nat]) -> Nat {
    let mut iter = items.iter().rev();
    let mut acc = iter.next().cloned().unwrap_or_else(Nat::zero);
    for x in iter {
        acc = pair(x, &acc);
    }
    acc
}

/// Length-prefixed right-nested code: `[] -> 0`, otherwise `pair(k, nest(items))`.
pub fn encode_seq(items: &[Nat]) -> Nat {
    if items.is_empty() {
        return Nat::zero();
    }
    pair(&nat(items.len() as u64), &nest(items))
}

/// [`encode_seq`] on machine integers.
pub fn encode_seq_u(items: &[u64]) -> Nat {
    let v: Vec<Nat> = items.iter().map(|&x| nat(x)).collect();
    encode_seq(&v)
}

/// Inverse of [`encode_seq`]; `None` when the declared length exceeds [`SEQ_LIMIT`].
pub fn decode_seq(code: &Nat) -> Option<Vec<Nat>> {
    let (len, body) = unpair(code);
    let k = len.to_usize().filter(|&k| k <= SEQ_LIMIT)?;
    let mut out = Vec::with_capacity(k);
    let mut rest = body;
    for i in 0..k {
        if i + 1 == k {
            out.push(std::mem::take(&mut rest));
        } else {
            let (h, t) = unpair(&rest);
            out.push(h);
            rest = t;
        }
    }
    Some(out)
}

/// Longest instruction list a program code may declare.
pub const TREE_LIMIT: usize = 1 << 12;

/// Leaf of a code tree: `pair(x, 0)`.
pub fn tree_leaf(x: &Nat) -> Nat {
    pair(x, &Nat::zero())
}

/// Inner node of a code tree: `pair(l, r + 1)`.
pub fn tree_node(l: &Nat, r: &Nat) -> Nat {
    pair(l, &(r + 1u32))
}

/// Tree code of a non-empty list: leaves in order, split in the middle
/// (the left half takes the extra item). Every natural number is a tree, so
/// any shape decodes; this balanced one keeps codes linear in the list size,
/// unlike right nesting, and lets leaf-wise rewrites work without re-balancing.
pub fn encode_tree(items: &[Nat]) -> Nat {
    match items.len() {
        0 => Nat::zero(),
        1 => tree_leaf(&items[0]),
        n => {
            let mid = n.div_ceil(2);
            tree_node(&encode_tree(&items[..mid]), &encode_tree(&items[mid..]))
        }
    }
}

/// The first `limit` leaves of the tree `code`, in order. At most
/// `2·limit + 1` nodes are visited, so degenerate trees are cut short.
pub fn decode_tree(code: &Nat, limit: usize) -> Vec<Nat> {
    let mut out = Vec::new();
    let mut stack = vec![code.clone()];
    let mut visits = 0usize;
    while let Some(t) = stack.pop() {
        if out.len() >= limit || visits > 2 * limit {
            break;
        }
        visits += 1;
        let (l, r) = unpair(&t);
        if r.is_zero() {
            out.push(l);
        } else {
            stack.push(r - 1u32);
            stack.push(l);
        }
    }
    out
}

/// Side of a labelled disjoint union.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Tag `v` with a side: left ↦ `pair(0, v)`, right ↦ `pair(1, v)`.
pub fn sum_tag(side: Side, v: &Nat) -> Nat {
    let tag = match side {
        Side::Left => Nat::zero(),
        Side::Right => Nat::one(),
    };
    pair(&tag, v)
}

/// Inverse of [`sum_tag`]; `None` for codes whose tag is neither 0 nor 1.
pub fn sum_untag(n: &Nat) -> Option<(Side, Nat)> {
    let (tag, v) = unpair(n);
    if tag.is_zero() {
        Some((Side::Left, v))
    } else if tag.is_one() {
        Some((Side::Right, v))
    } else {
        None
    }
}

/// Cons-list cell used by generated programs: `nil = 0`, `cons(h, t) = pair(h, t) + 1`.
pub fn cons(h: &Nat, t: &Nat) -> Nat {
    pair(h, t) + 1u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: walk the diagonals of ℕ×ℕ and count.
    fn pair_by_counting(a: u64, b: u64) -> u64 {
        let mut n = 0u64;
        for d in 0.. {
            for j in 0..=d {
                if d - j == a && j == b {
                    return n;
                }
                n += 1;
            }
        }
        unreachable!()
    }

    #[test]
    fn pairing_fixtures() {
        assert_eq!(pair_u(0, 0), nat(0));
        assert_eq!(pair_u(1, 0), nat(pair_by_counting(1, 0)));
        assert_eq!(pair_u(2, 3), nat(pair_by_counting(2, 3)));
        assert_eq!(unpair(&nat(0)), (nat(0), nat(0)));
        assert_eq!(unpair(&nat(pair_by_counting(2, 3))), (nat(2), nat(3)));
        assert_eq!(unpair(&pair_u(7, 9)), (nat(7), nat(9)));
    }

    #[test]
    fn pairing_matches_counting_on_a_grid() {
        for a in 0..20 {
            for b in 0..20 {
                assert_eq!(pair_u(a, b), nat(pair_by_counting(a, b)));
            }
        }
    }

    #[test]
    fn sequence_fixtures() {
        assert_eq!(encode_seq(&[]), nat(0));
        assert_eq!(encode_seq_u(&[5]), pair_u(1, 5));
        let v = vec![nat(2), nat(4), nat(6)];
        assert_eq!(decode_seq(&encode_seq(&v)).unwrap(), v);
    }

    #[test]
    fn sum_tag_fixtures() {
        assert_eq!(sum_tag(Side::Left, &nat(0)), nat(0));
        assert_eq!(sum_tag(Side::Right, &nat(0)), nat(pair_by_counting(1, 0)));
        let union: std::collections::BTreeSet<Nat> =
            [sum_tag(Side::Left, &nat(0)), sum_tag(Side::Right, &nat(0))].into();
        assert_eq!(union, [nat(0), nat(1)].into());
    }

    #[test]
    fn tree_code_shape() {
        let v: Vec<Nat> = [1u64, 2, 3].iter().map(|&x| nat(x)).collect();
        let leaf = |x: u64| pair_u(x, 0);
        // (1 2) 3
        let left = pair(&leaf(1), &(leaf(2) + 1u32));
        assert_eq!(encode_tree(&v), pair(&left, &(leaf(3) + 1u32)));
        // any natural is a tree: 0 is the leaf 0
        assert_eq!(decode_tree(&nat(0), 5), vec![nat(0)]);
        // a hundred items of moderate size stay small (linear growth)
        let many: Vec<Nat> = (0..100u64).map(|x| nat(1000 + x)).collect();
        assert!(encode_tree(&many).bits() < 100 * 64 * 2);
    }

    #[test]
    fn huge_declared_length_is_refused() {
        let code = pair(&(nat(1) << 200u32), &nat(0));
        assert!(decode_seq(&code).is_none());
    }

    proptest! {
        #[test]
        fn unpair_inverts_pair(a in any::<u64>(), b in any::<u64>()) {
            prop_assert_eq!(unpair(&pair_u(a, b)), (nat(a), nat(b)));
        }

        #[test]
        fn pair_inverts_unpair(n in any::<u128>()) {
            let n = Nat::from(n);
            let (a, b) = unpair(&n);
            prop_assert_eq!(pair(&a, &b), n);
        }

        #[test]
        fn decode_inverts_encode(v in proptest::collection::vec(any::<u64>(), 0..8)) {
            let items: Vec<Nat> = v.iter().map(|&x| nat(x)).collect();
            prop_assert_eq!(decode_seq(&encode_seq(&items)).unwrap(), items);
        }

        #[test]
        fn decode_tree_inverts_encode_tree(v in proptest::collection::vec(any::<u64>(), 0..40)) {
            let items: Vec<Nat> = v.iter().map(|&x| nat(x)).collect();
            let code = encode_tree(&items);
            if !items.is_empty() {
                prop_assert_eq!(decode_tree(&code, items.len() + 5), items.clone());
            }
            let cut = items.len() / 2;
            prop_assert_eq!(decode_tree(&code, cut), items[..cut].to_vec());
        }

        #[test]
        fn tags_are_disjoint(u in any::<u64>(), v in any::<u64>()) {
            prop_assert_ne!(sum_tag(Side::Left, &nat(u)), sum_tag(Side::Right, &nat(v)));
            prop_assert_eq!(sum_untag(&sum_tag(Side::Right, &nat(v))), Some((Side::Right, nat(v))));
        }
    }
}
