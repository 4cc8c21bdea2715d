//! Lexicographic permutation enumeration.

/// Advances `items` to its lexicographic successor. Returns `false` (leaving
/// `items` sorted ascending) after the last permutation.
pub fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        items.reverse();
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

/// Iterator over all permutations of a sorted starting vector, in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct LexPermutations<T> {
    current: Vec<T>,
    done: bool,
}

impl<T: Ord + Clone> LexPermutations<T> {
    pub fn new(mut start: Vec<T>) -> Self {
        start.sort();
        Self {
            current: start,
            done: false,
        }
    }
}

impl<T: Ord + Clone> Iterator for LexPermutations<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = !next_permutation(&mut self.current);
        Some(out)
    }
}

/// Disjoint slices of the permutation group of `0..n`: every ordered prefix
/// of distinct leading elements, in lexicographic order. Enumerating each
/// chunk's suffixes lexicographically and concatenating the chunks visits
/// all `n!` permutations in global lexicographic order.
pub(crate) fn prefix_chunks(n: usize) -> Vec<Vec<usize>> {
    let depth = n.saturating_sub(1).min(2);
    let mut out = vec![Vec::new()];
    for _ in 0..depth {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..n)
                    .filter(|i| !prefix.contains(i))
                    .map(|i| {
                        let mut p = prefix.clone();
                        p.push(i);
                        p
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// Calls `visit` with every permutation of `0..n` that starts with `prefix`,
/// in lexicographic order.
pub(crate) fn for_each_with_prefix<F: FnMut(&[usize])>(n: usize, prefix: &[usize], mut visit: F) {
    let mut perm: Vec<usize> = prefix.to_vec();
    perm.extend((0..n).filter(|i| !prefix.contains(i)));
    let split = prefix.len();
    loop {
        visit(&perm);
        if !next_permutation(&mut perm[split..]) {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_elements_in_order() {
        let all: Vec<_> = LexPermutations::new(vec![0, 1, 2]).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
    }

    #[test]
    fn repeated_items_are_not_duplicated() {
        assert_eq!(LexPermutations::new(vec![1, 1, 2]).count(), 3);
    }

    #[test]
    fn chunks_concatenate_to_full_lexicographic_order() {
        for n in 1..=6 {
            let mut chunked = Vec::new();
            for prefix in prefix_chunks(n) {
                for_each_with_prefix(n, &prefix, |p| chunked.push(p.to_vec()));
            }
            let direct: Vec<_> = LexPermutations::new((0..n).collect()).collect();
            assert_eq!(chunked, direct, "n = {n}");
        }
    }

    #[test]
    fn chunk_counts() {
        assert_eq!(prefix_chunks(1).len(), 1);
        assert_eq!(prefix_chunks(2).len(), 2);
        assert_eq!(prefix_chunks(5).len(), 20);
    }
}
