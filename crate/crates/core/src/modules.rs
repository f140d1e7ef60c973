//! Carriers for algebras over operads, free algebras `R(C)`, and the
//! algebra `η*R` in right modules that underlies the bar module.
//!
//! A free algebra element is a tree whose leaves carry carrier elements. When
//! the carrier is a set of leaf labels this is the operad itself viewed as an
//! algebra in right modules; when the carrier is an algebra it is `R(A)`.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use crate::algebra::{mu_lc, Algebra, KAlgebra};
use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::lincomb::LinComb;
use crate::operad::{Operad, OperadKind, OperadMorphism};
use crate::tree::{planar_trees, OpId, Tree};

/// A graded set of basis elements with a differential.
pub trait Carrier: Sync {
    type E: Clone + Ord + Hash + Send + Sync + fmt::Debug;
    fn field(&self) -> CoeffField;
    fn elements(&self) -> Vec<Self::E>;
    fn degree(&self, x: &Self::E) -> i64;
    fn diff(&self, x: &Self::E) -> LinComb<Self::E>;
    fn name(&self, x: &Self::E) -> String;
    /// Arity of the element (for carriers that are right modules).
    fn size(&self, _x: &Self::E) -> usize {
        1
    }
    /// Leaf labels used by the element (bit `l` for label `l`).
    fn labels(&self, _x: &Self::E) -> u64 {
        0
    }
}

/// A carrier with an action of an operad `R`: evaluation of trees whose
/// leaves are carrier elements.
pub trait OperadAlgebra: Carrier {
    fn operad(&self) -> &Arc<Operad>;
    fn evaluate(&self, t: &Tree<Self::E>) -> LinComb<Self::E>;
}

/// Bit mask of the labels `1..=n`.
pub fn full_mask(n: usize) -> u64 {
    ((1u64 << (n + 1)) - 1) & !1
}

/// The leaf labels `1..=n`, each in degree 0: the generators of the free
/// right module.
#[derive(Clone, Debug)]
pub struct Labels {
    field: CoeffField,
    n: u32,
}

impl Labels {
    pub fn new(field: CoeffField, n: usize) -> Self {
        Labels { field, n: n as u32 }
    }
}

impl Carrier for Labels {
    type E = u32;

    fn field(&self) -> CoeffField {
        self.field
    }

    fn elements(&self) -> Vec<u32> {
        (1..=self.n).collect()
    }

    fn degree(&self, _: &u32) -> i64 {
        0
    }

    fn diff(&self, _: &u32) -> LinComb<u32> {
        LinComb::zero(self.field)
    }

    fn name(&self, x: &u32) -> String {
        x.to_string()
    }

    fn labels(&self, x: &u32) -> u64 {
        1u64 << x
    }
}

/// A structure-constant algebra viewed as an algebra over `operad`, which must
/// be As, Com or K (the latter acting through `μ_r`).
#[derive(Clone, Debug)]
pub struct AlgebraOver {
    pub algebra: Algebra,
    operad: Arc<Operad>,
}

impl AlgebraOver {
    pub fn new(algebra: Algebra, operad: Arc<Operad>) -> Result<Self> {
        if algebra.field() != operad.field() {
            return Err(Error::FieldMismatch(algebra.field().to_string(), operad.field().to_string()));
        }
        if operad.kind() == OperadKind::Free && operad.name() != "K" {
            return Err(Error::Invalid(format!("no action of {} on a structure-constant algebra", operad.name())));
        }
        Ok(AlgebraOver { algebra, operad })
    }
}

impl Carrier for AlgebraOver {
    type E = u32;

    fn field(&self) -> CoeffField {
        self.algebra.field()
    }

    fn elements(&self) -> Vec<u32> {
        KAlgebra::elements(&self.algebra)
    }

    fn degree(&self, x: &u32) -> i64 {
        KAlgebra::degree(&self.algebra, x)
    }

    fn diff(&self, x: &u32) -> LinComb<u32> {
        KAlgebra::diff(&self.algebra, x)
    }

    fn name(&self, x: &u32) -> String {
        KAlgebra::name(&self.algebra, x)
    }
}

impl OperadAlgebra for AlgebraOver {
    fn operad(&self) -> &Arc<Operad> {
        &self.operad
    }

    fn evaluate(&self, t: &Tree<u32>) -> LinComb<u32> {
        let a = &self.algebra;
        match t {
            Tree::Leaf(x) => LinComb::basis(a.field(), *x),
            Tree::Node(_, ch) => {
                let args: Vec<LinComb<u32>> = ch.iter().map(|c| self.evaluate(c)).collect();
                if self.operad.kind() == OperadKind::Free {
                    mu_lc(a, &args)
                } else {
                    let mut acc = args[0].clone();
                    for x in &args[1..] {
                        acc = mu_lc(a, &[acc, x.clone()]);
                    }
                    acc
                }
            }
        }
    }
}

/// The operad `S` as an algebra over `R` in right `S`-modules, through a
/// morphism `ψ: R → S`. Elements are `S`-trees with labels in `1..=n`.
#[derive(Clone, Debug)]
pub struct OperadThrough {
    psi: OperadMorphism,
    n: usize,
}

impl OperadThrough {
    pub fn new(psi: OperadMorphism, n: usize) -> Self {
        OperadThrough { psi, n }
    }

    pub fn target(&self) -> &Arc<Operad> {
        &self.psi.target
    }
}

impl Carrier for OperadThrough {
    type E = Tree;

    fn field(&self) -> CoeffField {
        self.psi.target.field()
    }

    fn elements(&self) -> Vec<Tree> {
        let s = &self.psi.target;
        let mut out = Vec::new();
        for mask in 1u64..(1 << self.n) {
            let labels: Vec<u32> = (0..self.n as u32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
            for t in s.basis(labels.len()) {
                out.push(t.relabel(&|l| labels[l as usize - 1]));
            }
        }
        out.sort();
        out
    }

    fn degree(&self, x: &Tree) -> i64 {
        self.psi.target.tree_degree(x)
    }

    fn diff(&self, x: &Tree) -> LinComb<Tree> {
        self.psi.target.differential(&LinComb::basis(self.field(), x.clone()))
    }

    fn name(&self, x: &Tree) -> String {
        self.psi.target.render(x)
    }

    fn size(&self, x: &Tree) -> usize {
        x.arity()
    }

    fn labels(&self, x: &Tree) -> u64 {
        x.label_mask()
    }
}

impl OperadAlgebra for OperadThrough {
    fn operad(&self) -> &Arc<Operad> {
        &self.psi.source
    }

    /// `λ(r; s_1, .., s_k) = γ_S(ψ(r); s_1, .., s_k)`, recursively.
    fn evaluate(&self, t: &Tree<Tree>) -> LinComb<Tree> {
        let s = &self.psi.target;
        let field = s.field();
        match t {
            Tree::Leaf(x) => LinComb::basis(field, x.clone()),
            Tree::Node(op, ch) => {
                let args: Vec<LinComb<Tree>> = ch.iter().map(|c| self.evaluate(c)).collect();
                let img = self.psi.image(*op);
                let mut out = LinComb::zero(field);
                for (p, c) in img.iter() {
                    for (choice, k) in crate::operad::expand_product(field, &args) {
                        out.add_scaled(&s.gamma(p, &choice, &|_| 0), &(c * &k));
                    }
                }
                out
            }
        }
    }
}

/// Collapses a tree whose leaves are labelled trees into one labelled tree.
/// The items keep their depth-first order, so no sign arises.
pub fn flatten(op: &Operad, t: &Tree<Tree>) -> LinComb<Tree> {
    fn rec(t: &Tree<Tree>) -> Tree {
        match t {
            Tree::Leaf(x) => x.clone(),
            Tree::Node(o, ch) => Tree::Node(*o, ch.iter().map(rec).collect()),
        }
    }
    op.normalize_lc(&LinComb::basis(op.field(), rec(t)), &|_| 0)
}

/// The free `R`-algebra `R(C)` truncated to elements of total size at most
/// `size_bound`, with its `K`-algebra structure through `η: K → R`.
pub struct FreeAlgebra<C: Carrier> {
    operad: Arc<Operad>,
    carrier: C,
    size_bound: usize,
    /// `eta[r] = η(μ_r)`.
    eta: Vec<LinComb<Tree>>,
    elements: OnceLock<Vec<Tree<C::E>>>,
}

impl<C: Carrier> FreeAlgebra<C> {
    /// `eta` is the structure morphism `K → R`.
    pub fn new(eta: &OperadMorphism, carrier: C, size_bound: usize) -> Result<Self> {
        let operad = eta.target.clone();
        if operad.field() != carrier.field() {
            return Err(Error::FieldMismatch(operad.field().to_string(), carrier.field().to_string()));
        }
        if size_bound > operad.arity_bound() {
            return Err(Error::ArityBoundExceeded(format!(
                "size bound {size_bound} exceeds the arity bound {} of {}",
                operad.arity_bound(),
                operad.name()
            )));
        }
        let eta = (0..=size_bound).map(|r| if r >= 2 { eta.image(r as OpId) } else { LinComb::zero(operad.field()) }).collect();
        Ok(FreeAlgebra { operad, carrier, size_bound, eta, elements: OnceLock::new() })
    }

    pub fn operad(&self) -> &Arc<Operad> {
        &self.operad
    }

    pub fn carrier(&self) -> &C {
        &self.carrier
    }

    pub fn size_bound(&self) -> usize {
        self.size_bound
    }

    fn leaf_degree(&self) -> impl Fn(&C::E) -> i64 + '_ {
        |x| self.carrier.degree(x)
    }

    /// Decoration tuples of length `n` with total size at most `budget` and
    /// disjoint labels; nondecreasing (without repeated odd entries, away
    /// from characteristic 2) when `sorted`.
    fn tuples(&self, n: usize, sorted: bool) -> Vec<Vec<C::E>> {
        let mut elems = self.carrier.elements();
        elems.sort();
        let sizes: Vec<usize> = elems.iter().map(|x| self.carrier.size(x)).collect();
        let masks: Vec<u64> = elems.iter().map(|x| self.carrier.labels(x)).collect();
        let odd: Vec<bool> = elems.iter().map(|x| self.carrier.degree(x) % 2 != 0).collect();
        let char2 = self.carrier.field().characteristic() == 2;
        let mut out = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        #[allow(clippy::too_many_arguments)]
        fn rec(
            n: usize,
            start: usize,
            budget: usize,
            mask: u64,
            sorted: bool,
            char2: bool,
            sizes: &[usize],
            masks: &[u64],
            odd: &[bool],
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            let left = n - cur.len() - 1;
            for i in if sorted { start } else { 0 }..sizes.len() {
                if sizes[i] + left > budget || masks[i] & mask != 0 {
                    continue;
                }
                if sorted && !char2 && cur.last() == Some(&i) && odd[i] {
                    continue;
                }
                cur.push(i);
                rec(n, i, budget - sizes[i], mask | masks[i], sorted, char2, sizes, masks, odd, cur, out);
                cur.pop();
            }
        }
        let mut idx = Vec::new();
        rec(n, 0, self.size_bound, 0, sorted, char2, &sizes, &masks, &odd, &mut cur, &mut idx);
        for t in idx {
            out.push(t.into_iter().map(|i| elems[i].clone()).collect());
        }
        out
    }

    /// The operation shapes with `n` inputs, leaves labelled `1..n` in planar order.
    fn shapes(&self, n: usize) -> Vec<Tree> {
        match self.operad.kind() {
            OperadKind::Free => {
                let ops: Vec<(OpId, usize)> =
                    self.operad.generators().iter().map(|(&op, g)| (op, g.arity)).collect();
                planar_trees(n, &ops)
            }
            _ => vec![Tree::corolla(n as OpId, n)],
        }
    }

    fn enumerate(&self) -> Vec<Tree<C::E>> {
        let mut out: Vec<Tree<C::E>> = Vec::new();
        for n in 1..=self.size_bound {
            let sorted = self.operad.kind() == OperadKind::Commutative;
            let tuples = self.tuples(n, sorted);
            if n == 1 {
                out.extend(tuples.into_iter().map(|mut t| Tree::Leaf(t.pop().unwrap())));
                continue;
            }
            for shape in self.shapes(n) {
                for t in &tuples {
                    out.push(shape.map_leaves(&|&l| t[l as usize - 1].clone()));
                }
            }
        }
        out.sort();
        out
    }

    pub fn render(&self, t: &Tree<C::E>) -> String {
        t.render(&|op| self.operad.op_name(op), &|x| self.carrier.name(x))
    }
}

impl<C: Carrier> KAlgebra for FreeAlgebra<C> {
    type E = Tree<C::E>;

    fn field(&self) -> CoeffField {
        self.operad.field()
    }

    fn elements(&self) -> Vec<Tree<C::E>> {
        self.elements.get_or_init(|| self.enumerate()).clone()
    }

    fn degree(&self, x: &Tree<C::E>) -> i64 {
        self.operad.degree_of(x, &self.leaf_degree())
    }

    fn diff(&self, x: &Tree<C::E>) -> LinComb<Tree<C::E>> {
        self.operad.tree_differential(x, &self.leaf_degree(), &|l| self.carrier.diff(l))
    }

    fn mu(&self, xs: &[Tree<C::E>]) -> LinComb<Tree<C::E>> {
        let r = xs.len();
        let size: usize = xs.iter().map(|x| self.size(x)).sum();
        if size > self.size_bound || r >= self.eta.len() {
            return LinComb::zero(self.field());
        }
        let args: Vec<LinComb<Tree<C::E>>> = xs.iter().map(|x| LinComb::basis(self.field(), x.clone())).collect();
        self.operad.gamma_lc(&self.eta[r], &args, &self.leaf_degree())
    }

    fn max_mu(&self) -> usize {
        self.size_bound.max(2)
    }

    fn name(&self, x: &Tree<C::E>) -> String {
        self.render(x)
    }

    fn size(&self, x: &Tree<C::E>) -> usize {
        x.leaves().into_iter().map(|l| self.carrier.size(l)).sum()
    }

    fn labels(&self, x: &Tree<C::E>) -> u64 {
        x.leaves().into_iter().fold(0, |m, l| m | self.carrier.labels(l))
    }
}

/// Dimensions per degree of a finite list of graded elements.
pub fn degree_counts<E>(elems: &[E], deg: impl Fn(&E) -> i64) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for e in elems {
        *out.entry(deg(e)).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures;

    fn q() -> CoeffField {
        CoeffField::Rationals
    }

    #[test]
    fn free_algebra_sizes() {
        let k = Arc::new(Operad::stasheff(q(), 4));
        let com = Arc::new(Operad::commutative(q(), 4));
        let as_ = Arc::new(Operad::associative(q(), 4));
        // Labelled elements of arity exactly 3 reproduce the operad components.
        for (r, dim) in [(k.clone(), 18), (as_.clone(), 6), (com.clone(), 1)] {
            let eta = OperadMorphism::from_stasheff(k.clone(), r).unwrap();
            let f = FreeAlgebra::new(&eta, Labels::new(q(), 3), 3).unwrap();
            let full = f.elements().into_iter().filter(|t| f.labels(t) == full_mask(3)).count();
            assert_eq!(full, dim);
        }
    }

    #[test]
    fn free_commutative_on_odd_generator() {
        let k = Arc::new(Operad::stasheff(q(), 4));
        let com = Arc::new(Operad::commutative(q(), 4));
        let eta = OperadMorphism::from_stasheff(k, com).unwrap();
        let a = AlgebraOver::new(fixtures::exterior(q(), 1), eta.target.clone()).unwrap();
        // Over Q the free commutative algebra on one odd generator is x alone.
        let f = FreeAlgebra::new(&eta, a.clone(), 4).unwrap();
        assert_eq!(f.elements().len(), 1);
        let f2 = CoeffField::Prime(2);
        let k2 = Arc::new(Operad::stasheff(f2, 4));
        let com2 = Arc::new(Operad::commutative(f2, 4));
        let eta2 = OperadMorphism::from_stasheff(k2, com2.clone()).unwrap();
        let a2 = AlgebraOver::new(fixtures::exterior(f2, 1), com2).unwrap();
        assert_eq!(FreeAlgebra::new(&eta2, a2, 4).unwrap().elements().len(), 4);
    }

    #[test]
    fn operad_through_morphism_evaluates_by_composition() {
        let k = Arc::new(Operad::stasheff(q(), 4));
        let as_ = Arc::new(Operad::associative(q(), 4));
        let eps = OperadMorphism::epsilon(k, as_).unwrap();
        let s = OperadThrough::new(eps, 3);
        // μ_2(1, μ_2(2, 3)) evaluates to m_3(1, 2, 3).
        let t: Tree<Tree> = Tree::Node(2, vec![Tree::Leaf(Tree::Leaf(1)), Tree::Leaf(Tree::Node(2, vec![Tree::Leaf(2), Tree::Leaf(3)]))]);
        let v = s.evaluate(&t);
        assert_eq!(v, LinComb::basis(q(), Tree::corolla(3, 3)));
        let t3: Tree<Tree> = Tree::Node(3, vec![Tree::Leaf(Tree::Leaf(1)), Tree::Leaf(Tree::Leaf(2)), Tree::Leaf(Tree::Leaf(3))]);
        assert!(s.evaluate(&t3).is_zero());
    }
}
