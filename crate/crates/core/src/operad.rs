//! Operads on planar trees: As, Com, free operads and Stasheff's operad K,
//! together with operad morphisms.
//!
//! Elements of arity `n` are combinations of trees whose leaves carry the
//! labels `1..n`. Composition is grafting followed by normalization: As
//! flattens a tree to a single corolla, Com also sorts its leaves, and free
//! operads keep trees as they are. The same normalization applies to trees
//! whose leaves carry elements of a graded module (free algebras), where
//! reordering leaves costs a Koszul sign.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::combinat::permutations;
use crate::error::{Error, Result};
use crate::field::{CoeffField, Scalar};
use crate::lincomb::LinComb;
use crate::tree::{planar_trees, substitute, OpId, Slot, Tree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub arity: usize,
    pub degree: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperadKind {
    /// Vertex `n` is the associative operation of arity `n`.
    Associative,
    /// Vertex `n` is the commutative operation of arity `n`.
    Commutative,
    /// Free on the generators; trees are kept as they are.
    Free,
}

type CompKey = (Tree, u32, Tree);

pub struct Operad {
    name: String,
    field: CoeffField,
    arity_bound: usize,
    kind: OperadKind,
    gens: BTreeMap<OpId, Generator>,
    gen_diff: BTreeMap<OpId, LinComb<Tree>>,
    bases: Vec<OnceLock<Vec<Tree>>>,
    compositions: RwLock<HashMap<CompKey, LinComb<Tree>>>,
}

impl fmt::Debug for Operad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operad({}, {}, arity ≤ {})", self.name, self.field, self.arity_bound)
    }
}

impl Operad {
    fn build(
        name: &str,
        field: CoeffField,
        arity_bound: usize,
        kind: OperadKind,
        gens: BTreeMap<OpId, Generator>,
        gen_diff: BTreeMap<OpId, LinComb<Tree>>,
    ) -> Operad {
        Operad {
            name: name.to_string(),
            field,
            arity_bound,
            kind,
            gens,
            gen_diff,
            bases: (0..=arity_bound).map(|_| OnceLock::new()).collect(),
            compositions: RwLock::new(HashMap::new()),
        }
    }

    /// The operad of associative algebras: `As(n)` is the regular representation.
    pub fn associative(field: CoeffField, arity_bound: usize) -> Operad {
        let gens = (2..=arity_bound)
            .map(|n| (n as OpId, Generator { name: format!("m{n}"), arity: n, degree: 0 }))
            .collect();
        Operad::build("As", field, arity_bound, OperadKind::Associative, gens, BTreeMap::new())
    }

    /// The operad of commutative algebras: `Com(n)` is the trivial representation.
    pub fn commutative(field: CoeffField, arity_bound: usize) -> Operad {
        let gens = (2..=arity_bound)
            .map(|n| (n as OpId, Generator { name: format!("c{n}"), arity: n, degree: 0 }))
            .collect();
        Operad::build("Com", field, arity_bound, OperadKind::Commutative, gens, BTreeMap::new())
    }

    /// Stasheff's operad: free on `mu_r` of degree `r - 2` (vertex id `r`), with
    /// `∂(mu_n) = -Σ (-1)^{a + s·b} mu_{a+1+b} ∘_{a+1} mu_s` over `a + s + b = n`, `s ≥ 2`, `a + b ≥ 1`.
    pub fn stasheff(field: CoeffField, arity_bound: usize) -> Operad {
        let mut gens = BTreeMap::new();
        let mut diff = BTreeMap::new();
        for n in 2..=arity_bound {
            gens.insert(n as OpId, Generator { name: format!("mu{n}"), arity: n, degree: n as i64 - 2 });
            let mut d = LinComb::zero(field);
            for s in 2..n {
                for a in 0..=n - s {
                    let b = n - s - a;
                    let mut ch: Vec<Tree> = (1..=a as u32).map(Tree::Leaf).collect();
                    ch.push(Tree::corolla_with(s as OpId, &(a as u32 + 1..=(a + s) as u32).collect::<Vec<_>>()));
                    ch.extend((a + s + 1..=n).map(|l| Tree::Leaf(l as u32)));
                    let sign = -field.sign((a + s * b) as i64);
                    d.add_term(Tree::Node((a + 1 + b) as OpId, ch), sign);
                }
            }
            diff.insert(n as OpId, d);
        }
        Operad::build("K", field, arity_bound, OperadKind::Free, gens, diff)
    }

    /// A free operad on generators with a differential given on generators.
    /// Generators must have arity at least 2; `∂` must square to zero.
    pub fn free(
        name: &str,
        field: CoeffField,
        arity_bound: usize,
        gens: Vec<Generator>,
        diff: Vec<(usize, LinComb<Tree>)>,
    ) -> Result<Operad> {
        let mut g = BTreeMap::new();
        for (i, gen) in gens.into_iter().enumerate() {
            if gen.arity < 2 {
                return Err(Error::Invalid(format!("generator {} has arity below 2", gen.name)));
            }
            g.insert(i as OpId, gen);
        }
        let mut d = BTreeMap::new();
        for (i, l) in diff {
            let gen = g.get(&(i as OpId)).ok_or_else(|| Error::Invalid(format!("no generator {i}")))?;
            for (t, _) in l.iter() {
                if t.label_set() != (1..=gen.arity as u32).collect::<Vec<_>>() {
                    return Err(Error::Invalid(format!("differential of {} has wrong arity", gen.name)));
                }
            }
            d.insert(i as OpId, l);
        }
        let op = Operad::build(name, field, arity_bound, OperadKind::Free, g, d);
        for n in 2..=arity_bound.min(4) {
            for t in op.planar_basis(n) {
                let dd = op.differential(&op.differential(&LinComb::basis(field, t.clone())));
                if !dd.is_zero() {
                    return Err(Error::CompositionNotZero(format!("∂² ≠ 0 on {}", op.render(&t))));
                }
            }
        }
        Ok(op)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> CoeffField {
        self.field
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn kind(&self) -> OperadKind {
        self.kind
    }

    pub fn generators(&self) -> &BTreeMap<OpId, Generator> {
        &self.gens
    }

    pub fn generator_differential(&self, op: OpId) -> LinComb<Tree> {
        self.gen_diff.get(&op).cloned().unwrap_or_else(|| LinComb::zero(self.field))
    }

    pub fn op_degree(&self, op: OpId) -> i64 {
        match self.kind {
            OperadKind::Associative | OperadKind::Commutative => 0,
            OperadKind::Free => self.gens.get(&op).map_or(0, |g| g.degree),
        }
    }

    pub fn op_name(&self, op: OpId) -> String {
        match self.gens.get(&op) {
            Some(g) => g.name.clone(),
            None => match self.kind {
                OperadKind::Associative => format!("m{op}"),
                OperadKind::Commutative => format!("c{op}"),
                OperadKind::Free => format!("g{op}"),
            },
        }
    }

    pub fn degree_of<L: Clone>(&self, t: &Tree<L>, leaf: &dyn Fn(&L) -> i64) -> i64 {
        t.degree(&|op| self.op_degree(op), leaf)
    }

    pub fn tree_degree(&self, t: &Tree) -> i64 {
        self.degree_of(t, &|_| 0)
    }

    pub fn render(&self, t: &Tree) -> String {
        t.render(&|op| self.op_name(op), &|l| l.to_string())
    }

    /// The operation of this operad of arity `n` corresponding to the
    /// `n`-ary generating corolla.
    pub fn corolla(&self, op: OpId) -> Tree {
        let n = self.gens.get(&op).map_or(op as usize, |g| g.arity);
        Tree::corolla(op, n)
    }

    /// Σ_n-orbit representatives: trees with leaves `1..n` in planar order.
    pub fn planar_basis(&self, n: usize) -> Vec<Tree> {
        if n == 1 {
            return vec![Tree::unit()];
        }
        match self.kind {
            OperadKind::Associative | OperadKind::Commutative => vec![Tree::corolla(n as OpId, n)],
            OperadKind::Free => {
                let ops: Vec<(OpId, usize)> = self.gens.iter().map(|(&id, g)| (id, g.arity)).collect();
                planar_trees(n, &ops)
            }
        }
    }

    /// The basis of arity `n` (sorted); memoized.
    pub fn basis(&self, n: usize) -> Vec<Tree> {
        if n == 0 {
            return Vec::new();
        }
        let compute = || {
            let mut out: Vec<Tree> = match self.kind {
                OperadKind::Commutative => self.planar_basis(n),
                OperadKind::Associative | OperadKind::Free => {
                    let perms = permutations(n);
                    self.planar_basis(n)
                        .iter()
                        .flat_map(|t| perms.iter().map(move |p| t.relabel(&|l| p[l as usize - 1] as u32 + 1)))
                        .collect()
                }
            };
            out.sort();
            out.dedup();
            out
        };
        match self.bases.get(n) {
            Some(cell) => cell.get_or_init(compute).clone(),
            None => compute(),
        }
    }

    /// Normal form of a tree: `None` when it vanishes, otherwise the normal
    /// tree and the parity of the sign picked up. `leaf` gives leaf degrees.
    pub fn normalize<L: Ord + Clone>(&self, t: &Tree<L>, leaf: &dyn Fn(&L) -> i64) -> Option<(Tree<L>, bool)> {
        match self.kind {
            OperadKind::Free => Some((t.clone(), false)),
            OperadKind::Associative => {
                let leaves: Vec<L> = t.leaves().into_iter().cloned().collect();
                if leaves.len() == 1 {
                    return Some((Tree::Leaf(leaves[0].clone()), false));
                }
                let n = leaves.len() as OpId;
                Some((Tree::Node(n, leaves.into_iter().map(Tree::Leaf).collect()), false))
            }
            OperadKind::Commutative => {
                let mut leaves: Vec<L> = t.leaves().into_iter().cloned().collect();
                if leaves.len() == 1 {
                    return Some((Tree::Leaf(leaves[0].clone()), false));
                }
                let parity = koszul_sort(&mut leaves, leaf);
                if self.field.characteristic() != 2 && leaves.windows(2).any(|w| w[0] == w[1] && leaf(&w[0]) % 2 != 0) {
                    return None;
                }
                let n = leaves.len() as OpId;
                Some((Tree::Node(n, leaves.into_iter().map(Tree::Leaf).collect()), parity))
            }
        }
    }

    pub fn normalize_lc<L: Ord + Clone>(&self, l: &LinComb<Tree<L>>, leaf: &dyn Fn(&L) -> i64) -> LinComb<Tree<L>> {
        let mut out = LinComb::zero(self.field);
        for (t, c) in l.iter() {
            if let Some((n, s)) = self.normalize(t, leaf) {
                out.add_term(n, if s { -c } else { c.clone() });
            }
        }
        out
    }

    /// `γ(p; x_1, .., x_r)`: the leaf of `p` labelled `j` receives `x_j`.
    pub fn gamma<L: Ord + Clone>(&self, p: &Tree, args: &[Tree<L>], leaf: &dyn Fn(&L) -> i64) -> LinComb<Tree<L>> {
        let (t, s) = substitute(p, &|&l| Slot::Sub(l as usize - 1), args, &|op| self.op_degree(op), leaf);
        let mut out = LinComb::zero(self.field);
        if let Some((n, s2)) = self.normalize(&t, leaf) {
            out.add_term(n, self.field.sign((s ^ s2) as i64));
        }
        out
    }

    /// Bilinear extension of [`Operad::gamma`] to combinations.
    pub fn gamma_lc<L: Ord + Clone>(
        &self,
        p: &LinComb<Tree>,
        args: &[LinComb<Tree<L>>],
        leaf: &dyn Fn(&L) -> i64,
    ) -> LinComb<Tree<L>> {
        let mut out = LinComb::zero(self.field);
        for (pt, pc) in p.iter() {
            for (choice, c) in expand_product(self.field, args) {
                out.add_scaled(&self.gamma(pt, &choice, leaf), &(&c * pc));
            }
        }
        out
    }

    /// Partial composition `p ∘_i q` of basis trees; memoized.
    pub fn partial(&self, p: &Tree, i: u32, q: &Tree) -> LinComb<Tree> {
        let key = (p.clone(), i, q.clone());
        if let Some(v) = self.compositions.read().unwrap().get(&key) {
            return v.clone();
        }
        let (t, s) = p.partial(i, q, &|op| self.op_degree(op));
        let mut out = LinComb::zero(self.field);
        if let Some((n, s2)) = self.normalize(&t, &|_| 0) {
            out.add_term(n, self.field.sign((s ^ s2) as i64));
        }
        self.compositions.write().unwrap().insert(key, out.clone());
        out
    }

    pub fn partial_lc(&self, p: &LinComb<Tree>, i: u32, q: &LinComb<Tree>) -> LinComb<Tree> {
        let mut out = LinComb::zero(self.field);
        for (pt, pc) in p.iter() {
            for (qt, qc) in q.iter() {
                out.add_scaled(&self.partial(pt, i, qt), &(pc * qc));
            }
        }
        out
    }

    /// The action of a permutation (one-line, 0-based: label `l` goes to `perm[l-1] + 1`).
    pub fn act(&self, t: &Tree, perm: &[usize]) -> LinComb<Tree> {
        self.normalize_lc(&LinComb::basis(self.field, t.relabel(&|l| perm[l as usize - 1] as u32 + 1)), &|_| 0)
    }

    /// Differential of a combination of labelled trees.
    pub fn differential(&self, l: &LinComb<Tree>) -> LinComb<Tree> {
        l.map_linear(|t| self.tree_differential(t, &|_| 0, &|_| LinComb::zero(self.field)))
    }

    /// Differential of a tree whose leaves carry elements of a dg-module:
    /// the derivation extending `∂` on vertices and `leaf_diff` on leaves.
    pub fn tree_differential<L: Ord + Clone>(
        &self,
        t: &Tree<L>,
        leaf: &dyn Fn(&L) -> i64,
        leaf_diff: &dyn Fn(&L) -> LinComb<L>,
    ) -> LinComb<Tree<L>> {
        let mut raw = LinComb::zero(self.field);
        self.raw_diff(t, leaf, leaf_diff, &mut |tree, c| raw.add_term(tree, c));
        self.normalize_lc(&raw, leaf)
    }

    fn raw_diff<L: Ord + Clone>(
        &self,
        t: &Tree<L>,
        leaf: &dyn Fn(&L) -> i64,
        leaf_diff: &dyn Fn(&L) -> LinComb<L>,
        emit: &mut dyn FnMut(Tree<L>, Scalar),
    ) {
        match t {
            Tree::Leaf(a) => {
                for (b, c) in leaf_diff(a).iter() {
                    emit(Tree::Leaf(b.clone()), c.clone());
                }
            }
            Tree::Node(op, ch) => {
                if let Some(img) = self.gen_diff.get(op) {
                    for (x, c) in img.iter() {
                        let (tree, s) =
                            substitute(x, &|&l| Slot::Sub(l as usize - 1), ch, &|o| self.op_degree(o), leaf);
                        emit(tree, if s { -c } else { c.clone() });
                    }
                }
                let mut prefix = self.op_degree(*op);
                for j in 0..ch.len() {
                    let sign = self.field.sign(prefix);
                    self.raw_diff(&ch[j], leaf, leaf_diff, &mut |sub, c| {
                        let mut children = ch.clone();
                        children[j] = sub;
                        emit(Tree::Node(*op, children), &c * &sign);
                    });
                    prefix += self.degree_of(&ch[j], leaf);
                }
            }
        }
    }
}

/// Sorts in place with adjacent swaps; returns the Koszul parity.
pub fn koszul_sort<L: Ord>(v: &mut [L], deg: &dyn Fn(&L) -> i64) -> bool {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if deg(&v[j - 1]) % 2 != 0 && deg(&v[j]) % 2 != 0 {
                odd = !odd;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    odd
}

/// All ways of choosing one term from each combination, with the product of coefficients.
pub fn expand_product<K: Ord + Clone>(field: CoeffField, factors: &[LinComb<K>]) -> Vec<(Vec<K>, Scalar)> {
    let mut acc: Vec<(Vec<K>, Scalar)> = vec![(Vec::new(), field.one())];
    for f in factors {
        let mut next = Vec::new();
        for (prefix, c) in &acc {
            for (k, kc) in f.iter() {
                let mut p = prefix.clone();
                p.push(k.clone());
                next.push((p, c * kc));
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc
}

/// The permutation of `1..s+t-1` induced on `p ∘_i q` by permuting the
/// labels of `p` (0-based one-line notation), keeping the block of `q` intact.
pub fn block_permutation(perm: &[usize], i: usize, t: usize) -> Vec<usize> {
    let s = perm.len();
    let mut sizes = vec![1usize; s];
    sizes[i - 1] = t;
    let mut new_sizes = vec![0usize; s];
    for (a, &sz) in sizes.iter().enumerate() {
        new_sizes[perm[a]] = sz;
    }
    let mut starts = vec![0usize; s];
    for b in 1..s {
        starts[b] = starts[b - 1] + new_sizes[b - 1];
    }
    let mut out = Vec::with_capacity(s + t - 1);
    for (a, &sz) in sizes.iter().enumerate() {
        for k in 0..sz {
            out.push(starts[perm[a]] + k);
        }
    }
    out
}

/// Exhaustive structural check up to `bound`: unit laws, associativity of
/// partial compositions, equivariance, `∂` a derivation, and `∂² = 0`.
/// Arities above 4 are checked on planar representatives only.
pub fn check_operad(op: &Operad, bound: usize) -> std::result::Result<(), String> {
    let f = op.field;
    let basis = |n: usize| if n <= 4 { op.basis(n) } else { op.planar_basis(n) };
    let deg = |t: &Tree| op.tree_degree(t);
    for n in 1..=bound {
        for p in basis(n) {
            let b = LinComb::basis(f, p.clone());
            if op.partial(&Tree::unit(), 1, &p) != b {
                return Err(format!("left unit law fails on {}", op.render(&p)));
            }
            for i in 1..=n as u32 {
                if op.partial(&p, i, &Tree::unit()) != b {
                    return Err(format!("right unit law fails on {}", op.render(&p)));
                }
            }
            if !op.differential(&op.differential(&b)).is_zero() {
                return Err(format!("∂² ≠ 0 on {}", op.render(&p)));
            }
            for i in 0..n.saturating_sub(1) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(i, i + 1);
                let once = op.act(&p, &perm);
                let twice = once.map_linear(|t| op.act(t, &perm));
                if twice != b {
                    return Err(format!("s_{} is not an involution on {}", i + 1, op.render(&p)));
                }
                if op.differential(&once) != op.differential(&b).map_linear(|t| op.act(t, &perm)) {
                    return Err(format!("∂ is not equivariant on {}", op.render(&p)));
                }
            }
        }
    }
    for s in 2..=bound {
        for t in 1..=bound + 1 - s {
            for p in basis(s) {
                for q in basis(t) {
                    let (pl, ql) = (LinComb::basis(f, p.clone()), LinComb::basis(f, q.clone()));
                    for i in 1..=s as u32 {
                        let comp = op.partial(&p, i, &q);
                        let lhs = op.differential(&comp);
                        let mut rhs = op.partial_lc(&op.differential(&pl), i, &ql);
                        rhs.add_scaled(&op.partial_lc(&pl, i, &op.differential(&ql)), &f.sign(deg(&p)));
                        if lhs != rhs {
                            return Err(format!("∂ is not a derivation on {} ∘_{i} {}", op.render(&p), op.render(&q)));
                        }
                        // equivariance in both arguments (order-reversing permutations)
                        let rev_s: Vec<usize> = (0..s).rev().collect();
                        let j = rev_s[i as usize - 1] as u32 + 1;
                        let lhs = op.partial_lc(&op.act(&p, &rev_s), j, &ql);
                        let rhs = comp.map_linear(|x| op.act(x, &block_permutation(&rev_s, i as usize, t)));
                        if lhs != rhs {
                            return Err(format!("composition is not equivariant on {} ∘_{i} {}", op.render(&p), op.render(&q)));
                        }
                        let rev_t: Vec<usize> = (0..t).rev().collect();
                        let lhs = op.partial_lc(&pl, i, &op.act(&q, &rev_t));
                        let inner: Vec<usize> = (0..s + t - 1)
                            .map(|x| {
                                let lo = i as usize - 1;
                                if x >= lo && x < lo + t { lo + rev_t[x - lo] } else { x }
                            })
                            .collect();
                        let rhs = comp.map_linear(|x| op.act(x, &inner));
                        if lhs != rhs {
                            return Err(format!("composition is not equivariant on {} ∘_{i} {}", op.render(&p), op.render(&q)));
                        }
                    }
                }
            }
        }
    }
    // associativity (sequential and parallel) on planar representatives
    for a in 2..=bound {
        for b in 1..=bound {
            for c in 1..=bound {
                if a + b + c - 2 > bound || (b == 1 && c == 1) {
                    continue;
                }
                for p in op.planar_basis(a) {
                    for q in op.planar_basis(b) {
                        for r in op.planar_basis(c) {
                            check_assoc(op, &p, &q, &r)?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_assoc(op: &Operad, p: &Tree, q: &Tree, r: &Tree) -> std::result::Result<(), String> {
    let f = op.field;
    let (s, t) = (p.arity() as u32, q.arity() as u32);
    let (ql, rl) = (LinComb::basis(f, q.clone()), LinComb::basis(f, r.clone()));
    for i in 1..=s {
        // sequential: (p ∘_i q) ∘_{i+j-1} r = p ∘_i (q ∘_j r)
        for j in 1..=t {
            let lhs = op.partial_lc(&op.partial(p, i, q), i + j - 1, &rl);
            let rhs = op.partial_lc(&LinComb::basis(f, p.clone()), i, &op.partial(q, j, r));
            if lhs != rhs {
                return Err(format!(
                    "sequential associativity fails for {}, {}, {} at ({i}, {j})",
                    op.render(p),
                    op.render(q),
                    op.render(r)
                ));
            }
        }
        // parallel: (p ∘_i q) ∘_{k+t-1} r = (-1)^{|q||r|} (p ∘_k r) ∘_i q for i < k
        for k in i + 1..=s {
            let lhs = op.partial_lc(&op.partial(p, i, q), k + t - 1, &rl);
            let rhs = op.partial_lc(&op.partial(p, k, r), i, &ql);
            let sign = f.sign(op.tree_degree(q) * op.tree_degree(r));
            if lhs != rhs.scaled(&sign) {
                return Err(format!(
                    "parallel associativity fails for {}, {}, {} at ({i}, {k})",
                    op.render(p),
                    op.render(q),
                    op.render(r)
                ));
            }
        }
    }
    Ok(())
}

/// A morphism of operads, given by the images of the generating corollas.
#[derive(Clone)]
pub struct OperadMorphism {
    pub name: String,
    pub source: Arc<Operad>,
    pub target: Arc<Operad>,
    images: BTreeMap<OpId, LinComb<Tree>>,
}

impl fmt::Debug for OperadMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperadMorphism({}: {} -> {})", self.name, self.source.name(), self.target.name())
    }
}

impl OperadMorphism {
    /// Generators missing from `images` are sent to zero.
    pub fn new(name: &str, source: Arc<Operad>, target: Arc<Operad>, images: BTreeMap<OpId, LinComb<Tree>>) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(source.field().to_string(), target.field().to_string()));
        }
        Ok(OperadMorphism { name: name.to_string(), source, target, images })
    }

    pub fn identity(op: Arc<Operad>) -> Self {
        let images = op.generators().keys().map(|&g| (g, LinComb::basis(op.field(), op.corolla(g)))).collect();
        OperadMorphism { name: format!("id_{}", op.name()), source: op.clone(), target: op, images }
    }

    /// `K → As`: `mu_2 ↦ m_2`, `mu_r ↦ 0` for `r > 2`.
    pub fn epsilon(k: Arc<Operad>, as_: Arc<Operad>) -> Result<Self> {
        if as_.kind() != OperadKind::Associative {
            return Err(Error::InvalidMorphism("target of ε must be As".into()));
        }
        let images = [(2, LinComb::basis(k.field(), Tree::corolla(2, 2)))].into_iter().collect();
        OperadMorphism::new("ε", k, as_, images)
    }

    /// `As → Com`: `m_n ↦ c_n`.
    pub fn alpha(as_: Arc<Operad>, com: Arc<Operad>) -> Result<Self> {
        if as_.kind() != OperadKind::Associative || com.kind() != OperadKind::Commutative {
            return Err(Error::InvalidMorphism("α goes from As to Com".into()));
        }
        let images = (2..=as_.arity_bound())
            .map(|n| (n as OpId, LinComb::basis(com.field(), Tree::corolla(n as OpId, n))))
            .collect();
        OperadMorphism::new("α", as_, com, images)
    }

    /// The canonical morphism `K → R` for a built-in operad `R`.
    pub fn from_stasheff(k: Arc<Operad>, r: Arc<Operad>) -> Result<Self> {
        match r.kind() {
            OperadKind::Free if r.name() == "K" => Ok(OperadMorphism::identity(r)),
            OperadKind::Associative => OperadMorphism::epsilon(k, r),
            OperadKind::Commutative => {
                let images = [(2, LinComb::basis(k.field(), Tree::corolla(2, 2)))].into_iter().collect();
                OperadMorphism::new("αε", k, r, images)
            }
            OperadKind::Free => Err(Error::InvalidMorphism(format!("no canonical morphism K → {}", r.name()))),
        }
    }

    /// The composite `g ∘ self`.
    pub fn then(&self, g: &OperadMorphism) -> Result<OperadMorphism> {
        if !Arc::ptr_eq(&self.target, &g.source) && self.target.name() != g.source.name() {
            return Err(Error::InvalidMorphism("morphisms are not composable".into()));
        }
        let images = self.images.iter().map(|(&op, img)| (op, g.apply_lc(img, &|_| 0))).collect();
        OperadMorphism::new(&format!("{}{}", g.name, self.name), self.source.clone(), g.target.clone(), images)
    }

    pub fn image(&self, op: OpId) -> LinComb<Tree> {
        self.images.get(&op).cloned().unwrap_or_else(|| LinComb::zero(self.source.field()))
    }

    /// Image of a tree (labelled or decorated); the result is normalized in the target.
    pub fn apply<L: Ord + Clone>(&self, t: &Tree<L>, leaf: &dyn Fn(&L) -> i64) -> LinComb<Tree<L>> {
        let f = self.source.field();
        match t {
            Tree::Leaf(l) => LinComb::basis(f, Tree::Leaf(l.clone())),
            Tree::Node(op, ch) => {
                let args: Vec<LinComb<Tree<L>>> = ch.iter().map(|c| self.apply(c, leaf)).collect();
                self.target.gamma_lc(&self.image(*op), &args, leaf)
            }
        }
    }

    pub fn apply_lc<L: Ord + Clone>(&self, l: &LinComb<Tree<L>>, leaf: &dyn Fn(&L) -> i64) -> LinComb<Tree<L>> {
        l.map_linear(|t| self.apply(t, leaf))
    }
}

/// Checks that `f` commutes with units, partial compositions, differentials
/// and Σ-actions up to `bound`; returns the first violation found.
pub fn morphism_diagnostics(f: &OperadMorphism, bound: usize) -> std::result::Result<(), String> {
    let (src, dst) = (&f.source, &f.target);
    let field = src.field();
    let basis = |n: usize| if n <= 4 { src.basis(n) } else { src.planar_basis(n) };
    for (&op, gen) in src.generators() {
        if gen.arity > bound {
            continue;
        }
        for (t, _) in f.image(op).iter() {
            if dst.tree_degree(t) != gen.degree || t.arity() != gen.arity {
                return Err(format!("image of {} has the wrong degree or arity", gen.name));
            }
        }
    }
    if f.apply(&Tree::unit(), &|_| 0) != LinComb::basis(field, Tree::unit()) {
        return Err("unit is not preserved".into());
    }
    for n in 1..=bound {
        for p in basis(n) {
            let b = LinComb::basis(field, p.clone());
            let fp = f.apply_lc(&b, &|_| 0);
            if f.apply_lc(&src.differential(&b), &|_| 0) != dst.differential(&fp) {
                return Err(format!("differential not preserved on {}", src.render(&p)));
            }
            for i in 0..n.saturating_sub(1) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(i, i + 1);
                let lhs = f.apply_lc(&src.act(&p, &perm), &|_| 0);
                let rhs = fp.map_linear(|t| dst.act(t, &perm));
                if lhs != rhs {
                    return Err(format!("Σ-action not preserved on {}", src.render(&p)));
                }
            }
        }
    }
    for s in 2..=bound {
        for t in 2..=bound + 1 - s {
            for p in basis(s) {
                for q in basis(t) {
                    let fp = f.apply(&p, &|_| 0);
                    let fq = f.apply(&q, &|_| 0);
                    for i in 1..=s as u32 {
                        let lhs = f.apply_lc(&src.partial(&p, i, &q), &|_| 0);
                        let rhs = dst.partial_lc(&fp, i, &fq);
                        if lhs != rhs {
                            return Err(format!(
                                "composition not preserved on {} ∘_{i} {}",
                                src.render(&p),
                                src.render(&q)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn operad_morphism_check(f: &OperadMorphism, bound: usize) -> bool {
    morphism_diagnostics(f, bound).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoeffField {
        CoeffField::Rationals
    }

    #[test]
    fn dimensions() {
        let a = Operad::associative(q(), 4);
        let c = Operad::commutative(q(), 4);
        let k = Operad::stasheff(q(), 4);
        assert_eq!(a.basis(3).len(), 6);
        assert_eq!(c.basis(3).len(), 1);
        assert_eq!(k.basis(3).len(), 18);
        let free = Operad::free("F", q(), 3, vec![Generator { name: "mu".into(), arity: 2, degree: 0 }], vec![]).unwrap();
        assert_eq!(free.basis(3).len(), 12);
    }

    #[test]
    fn stasheff_low_arity() {
        let k = Operad::stasheff(q(), 4);
        assert!(k.generator_differential(2).is_zero());
        let d3 = k.generator_differential(3);
        let left = Tree::Node(2, vec![Tree::corolla(2, 2), Tree::Leaf(3)]);
        let right = Tree::Node(2, vec![Tree::Leaf(1), Tree::corolla_with(2, &[2, 3])]);
        assert_eq!(d3.coeff(&left), -q().one());
        assert_eq!(d3.coeff(&right), q().one());
        let d4 = LinComb::basis(q(), k.corolla(4));
        assert!(k.differential(&k.differential(&d4)).is_zero());
    }

    #[test]
    fn operads_pass_checks() {
        for field in [q(), CoeffField::Prime(2), CoeffField::Prime(3)] {
            check_operad(&Operad::associative(field, 4), 4).unwrap();
            check_operad(&Operad::commutative(field, 4), 4).unwrap();
            check_operad(&Operad::stasheff(field, 4), 4).unwrap();
        }
    }

    #[test]
    fn builtin_morphisms() {
        let k = Arc::new(Operad::stasheff(q(), 4));
        let a = Arc::new(Operad::associative(q(), 4));
        let c = Arc::new(Operad::commutative(q(), 4));
        let eps = OperadMorphism::epsilon(k.clone(), a.clone()).unwrap();
        let alpha = OperadMorphism::alpha(a.clone(), c.clone()).unwrap();
        assert!(operad_morphism_check(&eps, 4));
        assert!(operad_morphism_check(&alpha, 4));
        assert!(operad_morphism_check(&OperadMorphism::identity(a.clone()), 4));
        let ae = eps.then(&alpha).unwrap();
        assert!(operad_morphism_check(&ae, 4));
        assert_eq!(ae.image(2), LinComb::basis(q(), Tree::corolla(2, 2)));
        for r in 3..=4 {
            assert!(ae.image(r).is_zero());
        }
        // m2 ↦ c2, m3 ↦ 0 breaks compositions
        let bad = OperadMorphism::new(
            "bad",
            a.clone(),
            c.clone(),
            [(2, LinComb::basis(q(), Tree::corolla(2, 2)))].into_iter().collect(),
        )
        .unwrap();
        let err = morphism_diagnostics(&bad, 4).unwrap_err();
        assert!(err.contains("composition"), "{err}");
    }

    #[test]
    fn decorated_commutative_normal_form() {
        let c = Operad::commutative(CoeffField::Rationals, 4);
        // leaves carry degrees equal to their value
        let t: Tree<i64> = Tree::Node(2, vec![Tree::Leaf(3), Tree::Node(2, vec![Tree::Leaf(1), Tree::Leaf(2)])]);
        let (n, s) = c.normalize(&t, &|&l| l).unwrap();
        assert_eq!(n, Tree::Node(3, vec![Tree::Leaf(1), Tree::Leaf(2), Tree::Leaf(3)]));
        // moving 3 past 1 (both odd) flips the sign
        assert!(s);
        let sq: Tree<i64> = Tree::Node(2, vec![Tree::Leaf(1), Tree::Leaf(1)]);
        assert!(c.normalize(&sq, &|&l| l).is_none());
        let c2 = Operad::commutative(CoeffField::Prime(2), 4);
        assert!(c2.normalize(&sq, &|&l| l).is_some());
    }
}
