use std::fmt;

use smallvec::SmallVec;

/// A symmetric multi-index over the base coordinates, stored as a
/// non-decreasing tuple of 1-based coordinate indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(SmallVec<[u8; 4]>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(SmallVec::new())
    }

    pub fn new<I: IntoIterator<Item = u8>>(indices: I) -> Self {
        let mut v: SmallVec<[u8; 4]> = indices.into_iter().collect();
        v.sort_unstable();
        MultiIndex(v)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    /// `λ + Λ`: the multi-index with one more entry.
    pub fn with(&self, lambda: u8) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&x| x <= lambda);
        v.insert(pos, lambda);
        MultiIndex(v)
    }

    /// Concatenation `Λ + Σ`.
    pub fn merge(&self, other: &MultiIndex) -> Self {
        MultiIndex::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Every multi-index over `1..=n` of order at most `max_order`, ordered by
    /// order and then lexicographically.
    pub fn all_up_to(n: usize, max_order: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::empty()];
        let mut layer = vec![MultiIndex::empty()];
        for _ in 0..max_order {
            let mut next = Vec::new();
            for m in &layer {
                let start = m.0.last().copied().unwrap_or(1);
                for lambda in start..=n as u8 {
                    let mut v = m.0.clone();
                    v.push(lambda);
                    next.push(MultiIndex(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        assert_eq!(MultiIndex::new([2, 1, 2]), MultiIndex::new([1, 2, 2]));
        assert_eq!(MultiIndex::new([2, 1]).indices(), &[1, 2]);
    }

    #[test]
    fn with_raises_order() {
        let m = MultiIndex::new([1, 3]);
        let m2 = m.with(2);
        assert_eq!(m2.order(), 3);
        assert_eq!(m2.indices(), &[1, 2, 3]);
    }

    #[test]
    fn enumeration_counts() {
        // C(n + k, k) multi-indices of order <= k in n dimensions.
        assert_eq!(MultiIndex::all_up_to(3, 2).len(), 10);
        assert_eq!(MultiIndex::all_up_to(2, 3).len(), 10);
        assert_eq!(MultiIndex::all_up_to(4, 0).len(), 1);
    }
}
