//! Dense indexing of multisets (sorted index tuples).
//!
//! A sorted tuple `t_0 <= t_1 <= ... <= t_{n-1}` over `m` symbols maps to the
//! strictly increasing tuple `c_k = t_k + k` over `m + n - 1` symbols, which the
//! combinatorial number system ranks as `sum_k C(c_k, k + 1)`.

/// Number of multisets of size `n` over `m` symbols, `C(m + n - 1, n)`.
pub fn multiset_count(m: usize, n: usize) -> u128 {
    if m == 0 {
        return if n == 0 { 1 } else { 0 };
    }
    let top = (m + n - 1) as u128;
    let k = n.min(m - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(top - i) / (i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Binomials {
    stride: usize,
    table: Vec<usize>,
}

impl Binomials {
    /// Table of `C(i, k)` for `i < m + n` and `k <= n`.
    pub(crate) fn new(m: usize, n: usize) -> Self {
        let rows = m + n;
        let stride = n + 1;
        let mut table = vec![0usize; rows * stride];
        for i in 0..rows {
            table[i * stride] = 1;
            for k in 1..=n.min(i) {
                let a = table[(i - 1) * stride + k - 1];
                let b = if k < i {
                    table[(i - 1) * stride + k]
                } else {
                    0
                };
                table[i * stride + k] = a.saturating_add(b);
            }
        }
        Binomials { stride, table }
    }

    #[inline]
    fn get(&self, i: usize, k: usize) -> usize {
        self.table[i * self.stride + k]
    }

    /// Rank of a sorted tuple.
    #[inline]
    pub(crate) fn rank(&self, sorted: &[usize]) -> usize {
        sorted
            .iter()
            .enumerate()
            .map(|(k, &t)| self.get(t + k, k + 1))
            .sum()
    }
}

/// Iterates the sorted `n`-tuples over `0..m` in lexicographic order.
#[derive(Debug, Clone)]
pub struct MultisetIter {
    m: usize,
    current: Option<Vec<usize>>,
}

impl MultisetIter {
    pub fn new(m: usize, n: usize) -> Self {
        MultisetIter {
            m,
            current: if m == 0 && n > 0 {
                None
            } else {
                Some(vec![0; n])
            },
        }
    }
}

impl Iterator for MultisetIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut k = next.len();
        while k > 0 {
            k -= 1;
            if next[k] + 1 < self.m {
                let v = next[k] + 1;
                for slot in &mut next[k..] {
                    *slot = v;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(multiset_count(2, 5), 6);
        assert_eq!(multiset_count(3, 2), 6);
        assert_eq!(multiset_count(20, 2), 210);
        assert_eq!(multiset_count(1, 7), 1);
    }

    #[test]
    fn ranks_are_a_bijection_onto_a_prefix() {
        for m in 1..6 {
            for n in 1..5 {
                let b = Binomials::new(m, n);
                let mut seen: Vec<usize> = MultisetIter::new(m, n).map(|t| b.rank(&t)).collect();
                let count = multiset_count(m, n) as usize;
                assert_eq!(seen.len(), count);
                seen.sort_unstable();
                assert_eq!(seen, (0..count).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn iteration_is_lexicographic() {
        let all: Vec<Vec<usize>> = MultisetIter::new(3, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 1],
                vec![1, 2],
                vec![2, 2]
            ]
        );
    }
}
