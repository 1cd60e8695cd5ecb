use std::fmt;

/// Derivative multi-index: one count per independent variable, in convention
/// order. `u` with multi-index `(1, 2, 0)` over `(t, x, y)` is `u_txx`.
///
/// Counts, not sequences: mixed partials commute, so `u_xy == u_yx` by
/// construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn new(counts: Vec<u8>) -> Self {
        MultiIndex(counts)
    }

    /// Multi-index with a single derivative in direction `i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = vec![0; n];
        m[i] = 1;
        MultiIndex(m)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    /// Total derivative order `|J|`.
    pub fn order(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The multi-index with one more derivative in direction `i`.
    pub fn bump(&self, i: usize) -> Self {
        let mut m = self.0.clone();
        m[i] += 1;
        MultiIndex(m)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `self - other` when `other <= self` componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.0.len() != other.0.len() {
            return None;
        }
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(MultiIndex(out))
    }

    /// Number of distinct orderings of the index sequence, i.e. the
    /// multinomial coefficient `|J|! / (a! b! c! ...)`.
    pub fn orderings(&self) -> u64 {
        fn factorial(n: u32) -> u64 {
            (1..=n as u64).product::<u64>().max(1)
        }
        let mut denom = 1u64;
        for &c in &self.0 {
            denom *= factorial(c as u32);
        }
        factorial(self.order()) / denom
    }

    /// All multi-indices of length `n` with total order exactly `k`,
    /// in lexicographic order.
    pub fn all_of_order(n: usize, k: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, k: u32, prefix: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
            if n == 1 {
                let mut m = prefix.clone();
                m.push(k as u8);
                out.push(MultiIndex(m));
                return;
            }
            for c in 0..=k {
                prefix.push(c as u8);
                rec(n - 1, k - c, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, k, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orderings_counts_distinct_sequences() {
        // (x,x,x) has one ordering; (x,y) has two; (t,x,y) has six.
        assert_eq!(MultiIndex::new(vec![0, 3, 0]).orderings(), 1);
        assert_eq!(MultiIndex::new(vec![0, 1, 1]).orderings(), 2);
        assert_eq!(MultiIndex::new(vec![1, 1, 1]).orderings(), 6);
        assert_eq!(MultiIndex::new(vec![0, 0, 0]).orderings(), 1);
        assert_eq!(MultiIndex::new(vec![2, 2, 0]).orderings(), 6);
    }

    #[test]
    fn enumeration_counts() {
        // Stars and bars: C(k + n - 1, n - 1).
        assert_eq!(MultiIndex::all_of_order(3, 0).len(), 1);
        assert_eq!(MultiIndex::all_of_order(3, 1).len(), 3);
        assert_eq!(MultiIndex::all_of_order(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_of_order(3, 3).len(), 10);
    }

    #[test]
    fn sub_and_bump() {
        let a = MultiIndex::new(vec![1, 2, 0]);
        let b = MultiIndex::new(vec![0, 2, 0]);
        assert_eq!(a.checked_sub(&b), Some(MultiIndex::new(vec![1, 0, 0])));
        assert_eq!(b.checked_sub(&a), None);
        assert_eq!(b.bump(0), MultiIndex::new(vec![1, 2, 0]));
    }
}
