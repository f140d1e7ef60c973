//! Planar rooted trees: the basis elements of every operad here, and of free
//! algebras when leaves carry algebra elements instead of labels.
//!
//! A tree stands for the product of its items (vertices and leaves) in
//! depth-first order. Substitution reorders that formal product; the Koszul
//! sign of the reordering is returned alongside the new tree.

use std::fmt;

pub type OpId = u32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree<L = u32> {
    Leaf(L),
    Node(OpId, Vec<Tree<L>>),
}

/// Degree of a vertex operation.
pub type OpDeg<'a> = &'a dyn Fn(OpId) -> i64;

impl Tree<u32> {
    pub fn unit() -> Tree {
        Tree::Leaf(1)
    }

    /// The corolla `op(1, .., n)`.
    pub fn corolla(op: OpId, n: usize) -> Tree {
        Tree::Node(op, (1..=n as u32).map(Tree::Leaf).collect())
    }

    pub fn corolla_with(op: OpId, labels: &[u32]) -> Tree {
        Tree::Node(op, labels.iter().map(|&l| Tree::Leaf(l)).collect())
    }

    /// Sorted leaf labels.
    pub fn label_set(&self) -> Vec<u32> {
        let mut l: Vec<u32> = self.leaves().into_iter().copied().collect();
        l.sort_unstable();
        l
    }

    /// Bit mask of the leaf labels.
    pub fn label_mask(&self) -> u64 {
        self.leaves().into_iter().fold(0, |m, &l| m | (1u64 << l))
    }

    pub fn relabel(&self, f: &dyn Fn(u32) -> u32) -> Tree {
        self.map_leaves(&|&l| f(l))
    }

    /// Partial composition `self ∘_i q` of trees labelled `1..s` and `1..t`.
    pub fn partial(&self, i: u32, q: &Tree, deg: OpDeg) -> (Tree, bool) {
        let t = q.arity() as u32;
        let q = q.relabel(&|l| l + i - 1);
        let p = self.relabel(&|l| if l > i { l + t - 1 } else { l });
        substitute(&p, &|&l| if l == i { Slot::Sub(0) } else { Slot::Keep(l) }, &[q], deg, &|_| 0)
    }

    /// Relabels leaves by the order-preserving bijection onto `1..n`.
    pub fn standardize(&self) -> Tree {
        let set = self.label_set();
        self.relabel(&|l| set.binary_search(&l).unwrap() as u32 + 1)
    }
}

impl<L: Clone> Tree<L> {
    /// Leaves in planar order.
    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            Tree::Leaf(l) => out.push(l),
            Tree::Node(_, ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, ch) => ch.iter().map(|c| c.arity()).sum(),
        }
    }

    /// Vertex operations in depth-first prefix order.
    pub fn vertices(&self) -> Vec<OpId> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out
    }

    fn collect_vertices(&self, out: &mut Vec<OpId>) {
        if let Tree::Node(op, ch) = self {
            out.push(*op);
            ch.iter().for_each(|c| c.collect_vertices(out));
        }
    }

    /// Total degree: vertex degrees plus leaf degrees.
    pub fn degree(&self, deg: OpDeg, leaf: &dyn Fn(&L) -> i64) -> i64 {
        match self {
            Tree::Leaf(l) => leaf(l),
            Tree::Node(op, ch) => deg(*op) + ch.iter().map(|c| c.degree(deg, leaf)).sum::<i64>(),
        }
    }

    pub fn map_leaves<M>(&self, f: &dyn Fn(&L) -> M) -> Tree<M> {
        match self {
            Tree::Leaf(l) => Tree::Leaf(f(l)),
            Tree::Node(op, ch) => Tree::Node(*op, ch.iter().map(|c| c.map_leaves(f)).collect()),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    /// Items (vertex or leaf) with their degrees, in depth-first order.
    fn item_degrees(&self, deg: OpDeg, leaf: &dyn Fn(&L) -> i64, out: &mut Vec<i64>) {
        match self {
            Tree::Leaf(l) => out.push(leaf(l)),
            Tree::Node(op, ch) => {
                out.push(deg(*op));
                ch.iter().for_each(|c| c.item_degrees(deg, leaf, out));
            }
        }
    }

    /// Writes the tree using `name` for vertices and `leaf` for leaves.
    pub fn render(&self, name: &dyn Fn(OpId) -> String, leaf: &dyn Fn(&L) -> String) -> String {
        match self {
            Tree::Leaf(l) => leaf(l),
            Tree::Node(op, ch) => {
                let inner: Vec<String> = ch.iter().map(|c| c.render(name, leaf)).collect();
                format!("{}({})", name(*op), inner.join(","))
            }
        }
    }
}

/// What happens to a leaf during [`substitute`].
pub enum Slot<M> {
    /// Replaced by `subs[j]`.
    Sub(usize),
    /// Kept, carrying the given leaf value.
    Keep(M),
}

/// Replaces the leaves of `p` according to `slot`.
///
/// The formal product is `p` (its vertices and kept leaves, in depth-first
/// order) followed by `subs[0]`, `subs[1]`, ..; the result lists the same
/// items in its own depth-first order. Replaced leaves count as degree zero.
/// Returns the new tree and the parity of the Koszul sign.
pub fn substitute<L, M: Clone>(
    p: &Tree<L>,
    slot: &dyn Fn(&L) -> Slot<M>,
    subs: &[Tree<M>],
    deg: OpDeg,
    leaf: &dyn Fn(&M) -> i64,
) -> (Tree<M>, bool) {
    let mut offsets = Vec::with_capacity(subs.len());
    let mut sub_degs: Vec<Vec<i64>> = Vec::with_capacity(subs.len());
    let own = count_items(p, slot);
    let mut next = own;
    for s in subs {
        offsets.push(next);
        let mut d = Vec::new();
        s.item_degrees(deg, leaf, &mut d);
        next += d.len();
        sub_degs.push(d);
    }
    // (formal position, odd) in result order
    let mut seq: Vec<(usize, bool)> = Vec::with_capacity(next);
    let mut counter = 0usize;
    let ctx = Ctx { slot, subs, offsets: &offsets, sub_degs: &sub_degs, deg, leaf };
    let tree = subst_rec(p, &ctx, &mut counter, &mut seq);
    (tree, odd_inversions(&seq))
}

struct Ctx<'a, L, M> {
    slot: &'a dyn Fn(&L) -> Slot<M>,
    subs: &'a [Tree<M>],
    offsets: &'a [usize],
    sub_degs: &'a [Vec<i64>],
    deg: OpDeg<'a>,
    leaf: &'a dyn Fn(&M) -> i64,
}

fn count_items<L, M>(p: &Tree<L>, slot: &dyn Fn(&L) -> Slot<M>) -> usize {
    match p {
        Tree::Leaf(l) => usize::from(matches!(slot(l), Slot::Keep(_))),
        Tree::Node(_, ch) => 1 + ch.iter().map(|c| count_items(c, slot)).sum::<usize>(),
    }
}

fn subst_rec<L, M: Clone>(
    p: &Tree<L>,
    ctx: &Ctx<'_, L, M>,
    counter: &mut usize,
    seq: &mut Vec<(usize, bool)>,
) -> Tree<M> {
    match p {
        Tree::Leaf(l) => match (ctx.slot)(l) {
            Slot::Sub(j) => {
                for (k, d) in ctx.sub_degs[j].iter().enumerate() {
                    seq.push((ctx.offsets[j] + k, d % 2 != 0));
                }
                ctx.subs[j].clone()
            }
            Slot::Keep(m) => {
                seq.push((*counter, (ctx.leaf)(&m) % 2 != 0));
                *counter += 1;
                Tree::Leaf(m)
            }
        },
        Tree::Node(op, ch) => {
            seq.push((*counter, (ctx.deg)(*op) % 2 != 0));
            *counter += 1;
            Tree::Node(*op, ch.iter().map(|c| subst_rec(c, ctx, counter, seq)).collect())
        }
    }
}

/// Parity of the number of inversions among odd items.
pub fn odd_inversions(seq: &[(usize, bool)]) -> bool {
    let mut odd = false;
    let mut seen_odd: Vec<usize> = Vec::new();
    for &(pos, o) in seq {
        if !o {
            continue;
        }
        let later = seen_odd.iter().filter(|&&q| q > pos).count();
        if later % 2 == 1 {
            odd = !odd;
        }
        seen_odd.push(pos);
    }
    odd
}

impl<L: Clone + fmt::Debug> fmt::Debug for Tree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|op| format!("o{op}"), &|l| format!("{l:?}")))
    }
}

impl<L: Clone + fmt::Debug> fmt::Display for Tree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// All planar trees with `n` leaves labelled `1..n` in planar order, built
/// from the vertex operations `ops` given as `(op, fan-in)` pairs.
pub fn planar_trees(n: usize, ops: &[(OpId, usize)]) -> Vec<Tree> {
    fn shapes(n: usize, ops: &[(OpId, usize)]) -> Vec<Tree> {
        if n == 1 {
            return vec![Tree::Leaf(0)];
        }
        let mut out = Vec::new();
        for &(op, r) in ops.iter().filter(|&&(_, r)| r >= 2 && r <= n) {
            for comp in crate::combinat::compositions(n, r) {
                let mut acc: Vec<Vec<Tree>> = vec![vec![]];
                for &part in &comp {
                    let subs = shapes(part, ops);
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            subs.iter().map(move |s| {
                                let mut p = prefix.clone();
                                p.push(s.clone());
                                p
                            })
                        })
                        .collect();
                }
                out.extend(acc.into_iter().map(|ch| Tree::Node(op, ch)));
            }
        }
        out
    }
    let mut out: Vec<Tree> = shapes(n, ops)
        .into_iter()
        .map(|t| {
            let mut c = 0u32;
            number_leaves(&t, &mut c)
        })
        .collect();
    out.sort();
    out
}

fn number_leaves(t: &Tree, c: &mut u32) -> Tree {
    match t {
        Tree::Leaf(_) => {
            *c += 1;
            Tree::Leaf(*c)
        }
        Tree::Node(op, ch) => Tree::Node(*op, ch.iter().map(|x| number_leaves(x, c)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(op: OpId) -> i64 {
        op as i64 - 2
    }

    fn stasheff_ops(max: usize) -> Vec<(OpId, usize)> {
        (2..=max).map(|r| (r as OpId, r)).collect()
    }

    #[test]
    fn planar_counts() {
        // little Schröder numbers
        let counts: Vec<usize> = (1..=7).map(|n| planar_trees(n, &stasheff_ops(7)).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 11, 45, 197, 903]);
        assert_eq!(planar_trees(3, &[(2, 2)]).len(), 2);
    }

    #[test]
    fn partial_composition_and_sign() {
        let m2 = Tree::corolla(2, 2);
        let m3 = Tree::corolla(3, 3);
        let (t, s) = m2.partial(1, &m2, &deg);
        assert_eq!(t, Tree::Node(2, vec![Tree::corolla(2, 2), Tree::Leaf(3)]));
        assert!(!s);
        assert_ne!(m2.partial(2, &m2, &deg).0, t);
        // p = m2(1, m3(2,3,4)); grafting m3 at leaf 1 moves it before the odd m3 vertex
        let (p, _) = m2.partial(2, &m3, &deg);
        let (_, s) = p.partial(1, &m3, &deg);
        assert!(s);
        let (_, s) = p.partial(4, &m3, &deg);
        assert!(!s);
        assert_eq!(Tree::unit().partial(1, &m3, &deg).0, m3);
        assert_eq!(m3.partial(2, &Tree::unit(), &deg).0, m3);
    }

    #[test]
    fn decorated_substitution_sign() {
        // m2(a, b) with odd leaves; substituting at the first leaf of p = m2(1, 2)
        let p: Tree<i64> = Tree::Node(2, vec![Tree::Leaf(0), Tree::Leaf(-1)]);
        let subs = vec![Tree::Leaf(1), Tree::Leaf(3)];
        // formal order: m2, a(=1), b(=3); result m2(a, b): no reordering
        let (t, s) = substitute(&p, &|&l| Slot::Sub((-l) as usize), &subs, &deg, &|&l| l);
        assert_eq!(t, Tree::Node(2, vec![Tree::Leaf(1), Tree::Leaf(3)]));
        assert!(!s);
        // swapped slots: result m2(b, a) from formal (m2, a, b): one odd swap
        let (_, s) = substitute(&p, &|&l| Slot::Sub((1 + l) as usize), &subs, &deg, &|&l| l);
        assert!(s);
    }

    #[test]
    fn standardize_labels() {
        let t = Tree::corolla_with(2, &[7, 3]);
        assert_eq!(t.standardize(), Tree::corolla_with(2, &[2, 1]));
        assert_eq!(t.label_mask(), (1 << 7) | (1 << 3));
    }
}
