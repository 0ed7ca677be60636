//! Small combinatorial generators: k-subsets, set partitions, permutations.

/// Lexicographic iterator over the `k`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// All partitions of `0..n` into exactly `r` nonempty blocks, as restricted
/// growth strings (block of element `i`, blocks numbered by first
/// occurrence), in lexicographic order.
pub fn set_partitions(n: usize, r: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, r: usize, cur: &mut Vec<u8>, used: usize, out: &mut Vec<Vec<u8>>) {
        let i = cur.len();
        if i == n {
            if used == r {
                out.push(cur.clone());
            }
            return;
        }
        // not enough elements left to open the missing blocks
        if r - used > n - i {
            return;
        }
        let limit = (used + 1).min(r);
        for b in 0..limit {
            cur.push(b as u8);
            rec(n, r, cur, used.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 || r > n {
        return out;
    }
    rec(n, r, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

/// Groups a restricted growth string into blocks of indices.
pub fn blocks_of(assignment: &[u8]) -> Vec<Vec<usize>> {
    let r = assignment.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
    let mut blocks = vec![Vec::new(); r];
    for (i, &b) in assignment.iter().enumerate() {
        blocks[b as usize].push(i);
    }
    blocks
}

/// Rearranges `v` into the next lexicographic permutation; false when `v`
/// was the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of the sorted input, in lexicographic order.
pub fn permutations<T: Ord + Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut v = items.to_vec();
    v.sort();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(Combinations::new(5, 2).count(), 10);
        assert_eq!(Combinations::new(9, 4).count(), 126);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
    }

    #[test]
    fn stirling_numbers() {
        // S(n, r)
        assert_eq!(set_partitions(3, 2).len(), 3);
        assert_eq!(set_partitions(4, 2).len(), 7);
        assert_eq!(set_partitions(5, 2).len(), 15);
        assert_eq!(set_partitions(7, 3).len(), 301);
        assert_eq!(set_partitions(9, 3).len(), 3025);
        assert_eq!(set_partitions(4, 5).len(), 0);
    }

    #[test]
    fn partitions_are_canonical_and_sorted() {
        let parts = set_partitions(6, 3);
        assert!(parts.windows(2).all(|w| w[0] < w[1]));
        for p in &parts {
            assert_eq!(p[0], 0);
            let mut max = 0;
            for &b in p {
                assert!(b <= max + 1);
                max = max.max(b);
            }
        }
        assert_eq!(blocks_of(&[0, 1, 0, 2, 2, 0, 1]), vec![vec![0, 2, 5], vec![1, 6], vec![3, 4]]);
    }

    #[test]
    fn permutation_enumeration() {
        assert_eq!(permutations(&[3, 1, 2]).len(), 6);
        assert_eq!(permutations(&[1, 2, 3])[1], vec![1, 3, 2]);
        assert_eq!(factorial(4), 24);
    }
}
