use std::collections::BTreeSet;
use std::fmt;

use crate::plugins::{BitSet, Carrier, Elem};

/// A collection of subsets of a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollectionOfSubsets {
    pub base: Carrier,
    pub members: BTreeSet<BitSet>,
}

impl CollectionOfSubsets {
    pub fn new(base: Carrier, members: impl IntoIterator<Item = BitSet>) -> Self {
        CollectionOfSubsets {
            base,
            members: members.into_iter().collect(),
        }
    }

    /// `{R | x ∈ R}`.
    pub fn principal(base: Carrier, x: Elem) -> Self {
        let n = base.len();
        let members = all_subsets(n).filter(|r| r.contains(x)).collect();
        CollectionOfSubsets { base, members }
    }

    pub fn width(&self) -> usize {
        self.base.len()
    }

    pub fn contains(&self, r: &BitSet) -> bool {
        self.members.contains(r)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Display for CollectionOfSubsets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let labels: Vec<String> = m.iter().map(|x| self.base.label(x)).collect();
            write!(f, "{{{}}}", labels.join(","))?;
        }
        write!(f, "}}")
    }
}

/// Every subset of `0..n` in increasing bitmask order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = BitSet> {
    assert!(n < 24, "listing subsets of a {n}-element carrier");
    (0..1usize << n).map(move |m| BitSet::from_iter(n, (0..n).filter(|x| m >> x & 1 == 1)))
}

fn complement(n: usize, r: &BitSet) -> BitSet {
    BitSet::from_iter(n, (0..n).filter(|&x| !r.contains(x)))
}

/// Nonempty, closed upwards and under binary intersections inside
/// `universe`, without the empty set, and prime with respect to unions of
/// members of `universe`.
pub fn is_prime_filter_in(u: &CollectionOfSubsets, universe: &[BitSet]) -> bool {
    let n = u.width();
    let known: BTreeSet<&BitSet> = universe.iter().collect();
    if u.is_empty() || u.contains(&BitSet::new(n)) || u.members.iter().any(|r| !known.contains(r)) {
        return false;
    }
    let members: Vec<&BitSet> = u.members.iter().collect();
    let upward = members
        .iter()
        .all(|r| universe.iter().all(|s| !r.is_subset(s) || u.contains(s)));
    let meets = members
        .iter()
        .all(|r| members.iter().all(|s| u.contains(&r.intersection(s))));
    upward && meets && is_prime_in(u, universe)
}

/// Whenever `R ∪ S` lies in the collection so does `R` or `S`, for `R, S`
/// in `universe`.
pub fn is_prime_in(u: &CollectionOfSubsets, universe: &[BitSet]) -> bool {
    universe.iter().all(|r| {
        universe
            .iter()
            .all(|s| !u.contains(&r.union(s)) || u.contains(r) || u.contains(s))
    })
}

/// Closed upwards inside `universe`, without the empty set, and prime.
pub fn is_prime_upward_collection_in(u: &CollectionOfSubsets, universe: &[BitSet]) -> bool {
    let n = u.width();
    let known: BTreeSet<&BitSet> = universe.iter().collect();
    if u.contains(&BitSet::new(n)) || u.members.iter().any(|r| !known.contains(r)) {
        return false;
    }
    let upward = u
        .members
        .iter()
        .all(|r| universe.iter().all(|s| !r.is_subset(s) || u.contains(s)));
    upward && is_prime_in(u, universe)
}

/// Ultrafilter on the base carrier.
pub fn is_ultrafilter(u: &CollectionOfSubsets) -> bool {
    let universe: Vec<BitSet> = all_subsets(u.width()).collect();
    is_prime_filter_in(u, &universe)
}

/// Partitions of `0..n` into nonempty blocks.
pub fn partitions(n: usize) -> Vec<Vec<BitSet>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn go(k: usize, blocks: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<BitSet>>) {
        let n = labels.len();
        if k == n {
            out.push(
                (0..blocks)
                    .map(|b| BitSet::from_iter(n, (0..n).filter(|&x| labels[x] == b)))
                    .collect(),
            );
            return;
        }
        for b in 0..=blocks {
            labels[k] = b;
            go(k + 1, blocks.max(b + 1), labels, out);
        }
    }
    go(0, 0, &mut labels, &mut out);
    out
}

/// Every splitting of the carrier into three disjoint, possibly empty,
/// pieces has exactly one piece in the collection.
pub fn galvin_horn_check(u: &CollectionOfSubsets) -> bool {
    let n = u.width();
    assert!(n < 16, "splitting a {n}-element carrier into three pieces");
    (0..3usize.pow(n as u32)).all(|code| {
        let mut pieces = [BitSet::new(n), BitSet::new(n), BitSet::new(n)];
        let mut c = code;
        for x in 0..n {
            pieces[c % 3].insert(x);
            c /= 3;
        }
        pieces.iter().filter(|p| u.contains(p)).count() == 1
    })
}

/// `{R ⊆ Y | f⁻¹(R) ∈ U}` for `f: X -> Y`.
pub fn image_collection(
    u: &CollectionOfSubsets,
    f: &[Elem],
    target: Carrier,
) -> CollectionOfSubsets {
    let n = u.width();
    let members = all_subsets(target.len())
        .filter(|r| u.contains(&BitSet::from_iter(n, (0..n).filter(|&x| r.contains(f[x])))))
        .collect::<Vec<_>>();
    CollectionOfSubsets::new(target, members)
}

/// Whether exactly one (or, with `inclusive`, at least one) of every subset
/// and its complement lies in the collection, which avoids the empty set.
pub fn splits_complements(u: &CollectionOfSubsets, inclusive: bool) -> bool {
    let n = u.width();
    if u.contains(&BitSet::new(n)) {
        return false;
    }
    all_subsets(n).all(|r| {
        let hits = usize::from(u.contains(&r)) + usize::from(u.contains(&complement(n, &r)));
        if inclusive {
            hits >= 1
        } else {
            hits == 1
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(n: usize) -> Carrier {
        Carrier::numbered(n)
    }

    #[test]
    fn principal_collections_are_ultrafilters() {
        for n in 1..4 {
            for x in 0..n {
                let u = CollectionOfSubsets::principal(base(n), x);
                assert!(is_ultrafilter(&u));
                assert!(galvin_horn_check(&u));
            }
        }
    }

    #[test]
    fn large_subsets_are_not_prime() {
        let u = CollectionOfSubsets::new(base(3), all_subsets(3).filter(|r| r.len() >= 2));
        assert!(!is_ultrafilter(&u));
        assert!(!galvin_horn_check(&u));
        assert!(!is_ultrafilter(&CollectionOfSubsets::new(base(3), [])));
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        let counts: Vec<usize> = (0..6).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn galvin_horn_matches_ultrafilters_on_small_carriers() {
        for n in 0..4 {
            let subsets: Vec<BitSet> = all_subsets(n).collect();
            for mask in 0u64..1 << subsets.len() {
                let u = CollectionOfSubsets::new(
                    base(n),
                    subsets
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, r)| r.clone()),
                );
                assert_eq!(is_ultrafilter(&u), galvin_horn_check(&u), "{u}");
            }
        }
    }

    #[test]
    fn images_of_principal_collections() {
        let u = CollectionOfSubsets::principal(base(2), 1);
        let v = image_collection(&u, &[2, 0], base(3));
        assert_eq!(v, CollectionOfSubsets::principal(base(3), 0));
    }
}
