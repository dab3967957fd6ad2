//! Operations on ordered lists of branch pairs.

use crate::words::{prefix_relation, BinaryWord, PrefixRelation};

/// `u → v`: the element maps `[u]` affinely onto `[v]`.
pub type BranchPair = (BinaryWord, BinaryWord);

/// True iff `words`, in the given order, are exactly the leaves of a full
/// binary tree read left to right.
pub(crate) fn is_leaf_sequence<'a>(words: impl IntoIterator<Item = &'a BinaryWord>) -> bool {
    let mut stack: Vec<BinaryWord> = Vec::new();
    for w in words {
        stack.push(w.clone());
        while stack.len() >= 2 {
            let n = stack.len();
            match siblings(&stack[n - 2], &stack[n - 1]) {
                Some(p) => {
                    stack.truncate(n - 2);
                    stack.push(p);
                }
                None => break,
            }
        }
    }
    stack.len() == 1 && stack[0].is_empty()
}

fn siblings(a: &BinaryWord, b: &BinaryWord) -> Option<BinaryWord> {
    if a.len() == b.len() && a.last_digit() == Some(0) && b.last_digit() == Some(1) {
        let p = a.parent()?;
        if b.parent().as_ref() == Some(&p) {
            return Some(p);
        }
    }
    None
}

/// Removes every common caret. The input must be sorted by domain.
pub(crate) fn reduce(pairs: impl IntoIterator<Item = BranchPair>) -> Vec<BranchPair> {
    let mut stack: Vec<BranchPair> = Vec::new();
    for pair in pairs {
        stack.push(pair);
        while stack.len() >= 2 {
            let n = stack.len();
            let merged = match (
                siblings(&stack[n - 2].0, &stack[n - 1].0),
                siblings(&stack[n - 2].1, &stack[n - 1].1),
            ) {
                (Some(u), Some(v)) => (u, v),
                _ => break,
            };
            stack.truncate(n - 2);
            stack.push(merged);
        }
    }
    stack
}

/// Composes two partial maps given as branch-pair lists, first `a` then `b`.
///
/// `a` must be listed with its range words left to right and `b` with its
/// domain words left to right. Regions where only one of the two is defined
/// are dropped, so when `a`'s range tiles the same set as `b`'s domain the
/// result tiles `a`'s domain.
pub(crate) fn compose_pairs(a: &[BranchPair], b: &[BranchPair]) -> Vec<BranchPair> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (u, v) = &a[i];
        let (p, q) = &b[j];
        match prefix_relation(v, p) {
            PrefixRelation::Equal => {
                out.push((u.clone(), q.clone()));
                i += 1;
                j += 1;
            }
            PrefixRelation::UPrefixOfV => {
                // p = v s, so u s -> q
                let s = p.suffix_after(v).unwrap();
                out.push((u.concat(&s), q.clone()));
                j += 1;
                if j == b.len() || !v.is_prefix_of(&b[j].0) {
                    i += 1;
                }
            }
            PrefixRelation::VPrefixOfU => {
                // v = p s, so u -> q s
                let s = v.suffix_after(p).unwrap();
                out.push((u.clone(), q.concat(&s)));
                i += 1;
                if i == a.len() || !p.is_prefix_of(&a[i].1) {
                    j += 1;
                }
            }
            PrefixRelation::Incomparable => {
                if v < p {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }
    }
    out
}

/// Identity pairs `w → w` over the given words.
pub(crate) fn diagonal(words: &[BinaryWord]) -> Vec<BranchPair> {
    words.iter().map(|w| (w.clone(), w.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<BranchPair> {
        list.iter().map(|(a, b)| (w(a), w(b))).collect()
    }

    #[test]
    fn leaf_sequences() {
        let seq = |l: &[&str]| l.iter().map(|s| w(s)).collect::<Vec<_>>();
        assert!(is_leaf_sequence(&seq(&["00", "01", "1"])));
        assert!(is_leaf_sequence(&seq(&[""])));
        assert!(is_leaf_sequence(&seq(&["0", "100", "101", "11"])));
        assert!(!is_leaf_sequence(&seq(&["1", "0"])));
        assert!(!is_leaf_sequence(&seq(&["00", "1"])));
        assert!(!is_leaf_sequence(&seq(&["0", "0", "1"])));
        assert!(!is_leaf_sequence(&seq(&[])));
    }

    #[test]
    fn reduction_collapses_nested_carets() {
        let r = reduce(pairs(&[
            ("00", "00"),
            ("010", "010"),
            ("011", "011"),
            ("1", "1"),
        ]));
        assert_eq!(r, pairs(&[("", "")]));
        let x0 = pairs(&[("00", "0"), ("01", "10"), ("1", "11")]);
        assert_eq!(reduce(x0.clone()), x0);
    }

    #[test]
    fn compose_refines_both_sides() {
        let x0 = pairs(&[("00", "0"), ("01", "10"), ("1", "11")]);
        let sq = compose_pairs(&x0, &x0);
        assert_eq!(
            sq,
            pairs(&[("000", "0"), ("001", "10"), ("01", "110"), ("1", "111")])
        );
    }

    #[test]
    fn compose_partial_maps_drops_uncovered_region() {
        let a = pairs(&[("01", "10")]);
        let b = pairs(&[("100", "0"), ("101", "1")]);
        assert_eq!(compose_pairs(&a, &b), pairs(&[("010", "0"), ("011", "1")]));
        let c = pairs(&[("0", "0")]);
        assert!(compose_pairs(&a, &c).is_empty());
    }
}
