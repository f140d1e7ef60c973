//! Permutations, shuffles and Koszul signs.

/// Parity of the Koszul sign for listing items in the order `order`
/// (`order[k]` is the old position of the item now at position `k`).
/// Each inversion of two odd-degree items contributes a sign.
pub fn koszul_parity(degrees: &[i64], order: &[usize]) -> bool {
    let mut odd = false;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && degrees[order[a]] % 2 != 0 && degrees[order[b]] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    odd
}

/// Sign of a permutation given in one-line notation.
pub fn perm_parity(perm: &[usize]) -> bool {
    let mut odd = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                odd = !odd;
            }
        }
    }
    odd
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// All `(m, n)`-shuffles, each given as the set of positions (of `m + n`)
/// taken by the first block, in increasing order.
pub fn shuffles(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, total: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in start..=total - left {
            cur.push(p);
            rec(p + 1, total, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m + n, m, &mut Vec::new(), &mut out);
    out
}

/// Expands a shuffle (positions of the first block) into the interleaving order:
/// entry `k` is the index into the concatenation `first ++ second`.
pub fn shuffle_order(first_positions: &[usize], m: usize, n: usize) -> Vec<usize> {
    let mut order = vec![0; m + n];
    let (mut a, mut b) = (0, 0);
    for (k, slot) in order.iter_mut().enumerate() {
        if a < first_positions.len() && first_positions[a] == k {
            *slot = a;
            a += 1;
        } else {
            *slot = m + b;
            b += 1;
        }
    }
    order
}

/// Compositions of `n` into `k` positive parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Ordered partitions of `labels` into consecutive blocks of the given sizes
/// (every assignment of labels to blocks; each block sorted).
pub fn ordered_set_partitions(labels: &[u32], sizes: &[usize]) -> Vec<Vec<Vec<u32>>> {
    if sizes.is_empty() {
        return if labels.is_empty() { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for chosen in subsets_of_size(labels.len(), sizes[0]) {
        let block: Vec<u32> = chosen.iter().map(|&i| labels[i]).collect();
        let rest: Vec<u32> = (0..labels.len()).filter(|i| !chosen.contains(i)).map(|i| labels[i]).collect();
        for mut tail in ordered_set_partitions(&rest, &sizes[1..]) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

/// Index subsets of `0..n` of size `k`, lexicographic.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    shuffles(k, n - k)
}

/// Decomposes a permutation into adjacent transpositions: the returned list
/// `[a_1, .., a_m]` satisfies `perm = s_{a_1} ∘ .. ∘ s_{a_m}` where `s_a`
/// swaps the values `a` and `a + 1` (0-based).
pub fn adjacent_decomposition(perm: &[usize]) -> Vec<usize> {
    // Sort perm by swapping adjacent values; record swaps.
    let n = perm.len();
    let mut p = perm.to_vec();
    let mut pos = vec![0; n];
    for (i, &v) in p.iter().enumerate() {
        pos[v] = i;
    }
    let mut swaps = Vec::new();
    // Left-compose with value swaps until p is the identity.
    loop {
        let mut changed = false;
        for a in 0..n.saturating_sub(1) {
            if pos[a] > pos[a + 1] {
                // s_a ∘ p swaps values a and a+1
                p.swap(pos[a], pos[a + 1]);
                pos.swap(a, a + 1);
                swaps.push(a);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // s_{b_k} .. s_{b_1} perm = id  =>  perm = s_{b_1} .. s_{b_k}
    swaps
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(2, 1).len(), 3);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert_eq!(shuffles(0, 3), vec![Vec::<usize>::new()]);
        assert_eq!(shuffle_order(&[1], 1, 1), vec![1, 0]);
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
    }

    #[test]
    fn decomposition_reconstructs() {
        for p in permutations(4) {
            let mut q: Vec<usize> = (0..4).collect();
            for &a in adjacent_decomposition(&p).iter().rev() {
                // left-compose with the value swap s_a
                for v in q.iter_mut() {
                    if *v == a {
                        *v = a + 1;
                    } else if *v == a + 1 {
                        *v = a;
                    }
                }
            }
            assert_eq!(q, p);
            assert_eq!(adjacent_decomposition(&p).len() % 2 == 1, perm_parity(&p));
        }
    }

    #[test]
    fn partitions() {
        let parts = ordered_set_partitions(&[1, 2, 3], &[1, 2]);
        assert_eq!(parts.len(), 3);
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(binomial(5, 2), 10);
    }

    #[test]
    fn koszul() {
        // swapping two odd items
        assert!(koszul_parity(&[1, 1], &[1, 0]));
        assert!(!koszul_parity(&[1, 2], &[1, 0]));
    }
}
