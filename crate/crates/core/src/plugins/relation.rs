use std::collections::HashSet;

/// Fixed-width set of small integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitSet(Vec<u64>);

impl BitSet {
    pub fn new(width: usize) -> Self {
        BitSet(vec![0; width.div_ceil(64)])
    }

    pub fn full(width: usize) -> Self {
        let mut s = Self::new(width);
        for i in 0..width {
            s.insert(i);
        }
        s
    }

    pub fn from_iter(width: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(width);
        for i in items {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn union(&self, other: &Self) -> Self {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| k * 64 + b)
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }
}

const DENSE_LIMIT: usize = 1 << 22;

#[derive(Clone, Debug)]
enum Repr {
    Complete,
    Dense(BitSet),
    Sparse(HashSet<Vec<usize>>),
}

/// A relation of fixed arity on `0..size`.
#[derive(Clone, Debug)]
pub struct Relation {
    arity: usize,
    size: usize,
    count: usize,
    repr: Repr,
}

impl Relation {
    pub fn empty(arity: usize, size: usize) -> Self {
        let repr = match size.checked_pow(arity as u32) {
            Some(total) if total <= DENSE_LIMIT => Repr::Dense(BitSet::new(total)),
            _ => Repr::Sparse(HashSet::new()),
        };
        Relation {
            arity,
            size,
            count: 0,
            repr,
        }
    }

    pub fn complete(arity: usize, size: usize) -> Self {
        let count = size.checked_pow(arity as u32).unwrap_or(usize::MAX);
        Relation {
            arity,
            size,
            count,
            repr: Repr::Complete,
        }
    }

    pub fn from_tuples<I, T>(arity: usize, size: usize, tuples: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let mut r = Self::empty(arity, size);
        for t in tuples {
            r.insert(t.as_ref());
        }
        r
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.repr, Repr::Complete)
            || self.size.checked_pow(self.arity as u32) == Some(self.count)
    }

    fn code(&self, t: &[usize]) -> usize {
        t.iter().rev().fold(0, |acc, &x| acc * self.size + x)
    }

    pub fn insert(&mut self, t: &[usize]) {
        debug_assert_eq!(t.len(), self.arity);
        if self.contains(t) {
            return;
        }
        let code = match &self.repr {
            Repr::Dense(_) => Some(self.code(t)),
            _ => None,
        };
        match &mut self.repr {
            Repr::Complete => return,
            Repr::Dense(bits) => bits.insert(code.unwrap()),
            Repr::Sparse(set) => {
                set.insert(t.to_vec());
            }
        }
        self.count += 1;
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        match &self.repr {
            Repr::Complete => true,
            Repr::Dense(bits) => bits.contains(self.code(t)),
            Repr::Sparse(set) => set.contains(t),
        }
    }

    /// All tuples in lexicographic order.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.count);
        let total = self.size.pow(self.arity as u32);
        let mut t = vec![0; self.arity];
        for _ in 0..total {
            if self.contains(&t) {
                out.push(t.clone());
            }
            for k in (0..self.arity).rev() {
                t[k] += 1;
                if t[k] < self.size {
                    break;
                }
                t[k] = 0;
            }
        }
        out
    }

    pub fn map(&self, new_size: usize, f: impl Fn(usize) -> usize) -> Relation {
        if matches!(self.repr, Repr::Complete) && new_size == self.size {
            return self.clone();
        }
        let mut r = Relation::empty(self.arity, new_size);
        for t in self.tuples() {
            let img: Vec<usize> = t.iter().map(|&x| f(x)).collect();
            r.insert(&img);
        }
        r
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        if self.arity != other.arity || self.size != other.size || self.count != other.count {
            return false;
        }
        if self.is_complete() {
            return true;
        }
        self.tuples().iter().all(|t| other.contains(t))
    }
}

impl Eq for Relation {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_complete_agree() {
        let full = Relation::complete(2, 3);
        let mut explicit = Relation::empty(2, 3);
        for a in 0..3 {
            for b in 0..3 {
                explicit.insert(&[a, b]);
            }
        }
        assert_eq!(full, explicit);
        assert!(explicit.is_complete());
        assert_eq!(explicit.tuples().len(), 9);
    }

    #[test]
    fn bitset_ops() {
        let a = BitSet::from_iter(70, [1, 65]);
        let b = BitSet::from_iter(70, [1, 2]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(a.union(&b).len(), 3);
        assert!(!a.is_subset(&b));
    }
}
