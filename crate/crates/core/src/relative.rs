//! Relative composition `M ∘_R C` of a word module `M` (the bar module `B_R`
//! or a tensor power `R^{⊗k}`) with an `R`-algebra `C`: the coequalizer of
//! the two actions of `R` on `M ∘ R ∘ C`.
//!
//! `M ∘ C` is modelled by words of decorated `R`-trees (elements of the free
//! algebra `R(C)`). The relations identify a letter grafted from an operation
//! `r` with the letter where `r` has been evaluated in `C`:
//! `W[leaf ← r(c_1, .., c_k)] ~ W[leaf ← λ(r; c_1, .., c_k)]`. Evaluating the
//! letters gives the map to the comparison target, and the letters that are a
//! single leaf give a section.

use std::collections::BTreeMap;

use crate::algebra::KAlgebra;
use crate::bar::{bar_differential, enumerate_shifted, tensor_differential, word_name, BarBounds, Word};
use crate::combinat::subsets_of_size;
use crate::dg::{DegreeWindow, Keyed};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::lincomb::LinComb;
use crate::modules::{FreeAlgebra, OperadAlgebra};
use crate::operad::{OperadKind, OperadMorphism};
use crate::tree::{OpId, Tree};

/// Which words form the module and how they are differentiated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordShape {
    shift: i64,
    min_len: usize,
    max_len: usize,
    twisted: bool,
}

impl WordShape {
    /// Bar words of weight `1..=max_len` with the differential `δ + ∂`.
    pub fn bar(max_len: usize) -> Self {
        WordShape { shift: 1, min_len: 1, max_len, twisted: true }
    }

    /// Unshifted tensor words of length exactly `k` with the Koszul differential.
    pub fn tensor_power(k: usize) -> Self {
        WordShape { shift: 0, min_len: k, max_len: k, twisted: false }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn differential<A: KAlgebra>(&self, a: &A, w: &Word<A::E>) -> LinComb<Word<A::E>> {
        if self.twisted {
            bar_differential(a, w)
        } else {
            tensor_differential(a, w, self.shift)
        }
    }

    pub fn degree<A: KAlgebra>(&self, a: &A, w: &Word<A::E>) -> i64 {
        w.0.iter().map(|x| a.degree(x) + self.shift).sum()
    }

    /// The words over `a` in `window`, with total size at most `size_bound`
    /// and, when given, exactly the labels `label_mask`.
    pub fn complex<A: KAlgebra>(
        &self,
        a: &A,
        window: DegreeWindow,
        size_bound: Option<usize>,
        label_mask: Option<u64>,
    ) -> Result<Keyed<Word<A::E>>> {
        let bounds = BarBounds { window, weight_bound: self.max_len, size_bound, label_mask };
        let words = enumerate_shifted(a, &bounds, self.shift, self.min_len);
        Keyed::build_named(a.field(), window, words, |w| self.differential(a, w), |w| word_name(a, &w.0))
    }
}

/// The coequalizer `M ∘_R C` on a degree window, for words of total size at
/// most `size_bound`.
pub struct RelativeComposition<C: OperadAlgebra> {
    free: FreeAlgebra<C>,
    shape: WordShape,
    window: DegreeWindow,
    pub ambient: Keyed<Word<Tree<C::E>>>,
    relations: BTreeMap<i64, Echelon>,
}

/// Outcome of comparing a relative composition with a target complex.
#[derive(Clone, Debug, Default)]
pub struct Comparison {
    pub quotient: BTreeMap<i64, usize>,
    pub target: BTreeMap<i64, usize>,
    pub failures: Vec<String>,
}

impl Comparison {
    pub fn is_iso(&self) -> bool {
        self.failures.is_empty()
    }
}

type Letter<E> = Tree<E>;

impl<C: OperadAlgebra> RelativeComposition<C> {
    /// `eta: K → R` gives the `K`-algebra structure of `R(C)` used by bar
    /// shapes; `carrier` must be an algebra over `R` itself.
    pub fn new(
        eta: &OperadMorphism,
        carrier: C,
        shape: WordShape,
        window: DegreeWindow,
        size_bound: usize,
        label_mask: Option<u64>,
    ) -> Result<Self> {
        if carrier.operad().name() != eta.target.name() {
            return Err(Error::Invalid(format!(
                "the carrier is an algebra over {}, not over {}",
                carrier.operad().name(),
                eta.target.name()
            )));
        }
        let free = FreeAlgebra::new(eta, carrier, size_bound)?;
        let ambient = shape.complex(&free, window, Some(size_bound), label_mask)?;
        let mut rc = RelativeComposition { free, shape, window, ambient, relations: BTreeMap::new() };
        for d in window.degrees() {
            let mut ech = Echelon::new(rc.free.field());
            for rel in rc.relation_generators(d) {
                ech.insert(&rc.ambient.vector(&rel, d)?);
            }
            rc.relations.insert(d, ech);
        }
        Ok(rc)
    }

    pub fn free_algebra(&self) -> &FreeAlgebra<C> {
        &self.free
    }

    /// The quotient complex, with the non-pivot ambient words as basis.
    pub fn quotient_module(&self) -> Result<crate::dg::DgModule> {
        self.ambient.module.quotient(&self.relations)
    }

    /// Dimensions of the quotient per degree.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.window.degrees().map(|d| (d, self.ambient.module.dim(d) - self.relations[&d].rank())).collect()
    }

    /// Relations `T - T'` for one letter, where `T` is a normal form and `T'`
    /// evaluates one grafted operation of `T` in the carrier.
    fn letter_relations(&self, t: &Letter<C::E>) -> Vec<LinComb<Letter<C::E>>> {
        let op = self.free.operad();
        let field = op.field();
        let carrier = self.free.carrier();
        let deg = |x: &C::E| carrier.degree(x);
        let mut out = Vec::new();
        let Tree::Node(_, ch) = t else { return out };
        match op.kind() {
            OperadKind::Free => {
                for path in bottom_vertices(t) {
                    let sub = subtree(t, &path);
                    let mut rel = LinComb::basis(field, t.clone());
                    for (y, c) in carrier.evaluate(sub).iter() {
                        rel.add_term(replace(t, &path, Tree::Leaf(y.clone())), -c);
                    }
                    out.push(rel);
                }
            }
            kind => {
                let n = ch.len();
                for k in 2..=n {
                    let blocks: Vec<Vec<usize>> = if kind == OperadKind::Associative {
                        (0..=n - k).map(|i| (i..i + k).collect()).collect()
                    } else {
                        subsets_of_size(n, k)
                    };
                    for block in blocks {
                        let inner = Tree::Node(k as OpId, block.iter().map(|&i| ch[i].clone()).collect());
                        let rest: Vec<Letter<C::E>> =
                            (0..n).filter(|i| !block.contains(i)).map(|i| ch[i].clone()).collect();
                        // The hole sits where the block started (As) or last (Com).
                        let at = if kind == OperadKind::Associative { block[0] } else { rest.len() };
                        let host = |x: Letter<C::E>| {
                            if k == n {
                                return x;
                            }
                            let mut v = rest.clone();
                            v.insert(at, x);
                            Tree::Node((n - k + 1) as OpId, v)
                        };
                        let mut rel = op.normalize_lc(&LinComb::basis(field, host(inner.clone())), &deg);
                        let mut collapsed = LinComb::zero(field);
                        for (y, c) in carrier.evaluate(&inner).iter() {
                            collapsed.add_term(host(Tree::Leaf(y.clone())), c.clone());
                        }
                        rel.add_scaled(&op.normalize_lc(&collapsed, &deg), &field.sign(1));
                        if !rel.is_zero() {
                            out.push(rel);
                        }
                    }
                }
            }
        }
        out
    }

    /// All relations in degree `d`: letter relations placed in every word.
    pub fn relation_generators(&self, d: i64) -> Vec<LinComb<Word<Letter<C::E>>>> {
        let field = self.free.field();
        let mut out = Vec::new();
        let Some(words) = self.ambient.keys.get(&d) else { return out };
        for w in words {
            for (j, t) in w.0.iter().enumerate() {
                for rel in self.letter_relations(t) {
                    let lifted = rel.map_linear(|x| {
                        let mut v = w.0.clone();
                        v[j] = x.clone();
                        LinComb::basis(field, Word(v))
                    });
                    out.push(lifted);
                }
            }
        }
        out
    }

    /// Evaluates every letter in the carrier.
    pub fn evaluate(&self, w: &Word<Letter<C::E>>) -> LinComb<Word<C::E>> {
        let carrier = self.free.carrier();
        let field = self.free.field();
        let factors: Vec<LinComb<C::E>> = w.0.iter().map(|t| carrier.evaluate(t)).collect();
        let mut out = LinComb::zero(field);
        for (xs, c) in crate::operad::expand_product(field, &factors) {
            out.add_term(Word(xs), c);
        }
        out
    }

    pub fn section(&self, w: &Word<C::E>) -> Word<Letter<C::E>> {
        Word(w.0.iter().map(|x| Tree::Leaf(x.clone())).collect())
    }

    fn lift(&self, l: &LinComb<Word<C::E>>) -> LinComb<Word<Letter<C::E>>> {
        l.map_linear(|w| LinComb::basis(self.free.field(), self.section(w)))
    }

    /// Checks that evaluation and the section induce mutually inverse chain
    /// isomorphisms between the quotient and `target_complex`, the words over
    /// `target` of the same shape.
    pub fn compare<T: KAlgebra<E = C::E>>(&self, target: &T, target_complex: &Keyed<Word<C::E>>) -> Result<Comparison> {
        let mut cmp = Comparison { quotient: self.dims(), target: target_complex.module.dims(), ..Default::default() };
        let field = self.free.field();
        for d in self.window.degrees() {
            let rels = &self.relations[&d];
            let twords = target_complex.keys.get(&d).cloned().unwrap_or_default();
            for rel in self.relation_generators(d) {
                let mut img = LinComb::zero(field);
                for (w, c) in rel.iter() {
                    img.add_scaled(&self.evaluate(w), c);
                }
                if !img.is_zero() {
                    cmp.failures.push(format!("degree {d}: a relation does not evaluate to zero"));
                    break;
                }
            }
            let mut span = rels.clone();
            for w in &twords {
                let s = self.section(w);
                let back = self.evaluate(&s);
                if back != LinComb::basis(field, w.clone()) {
                    cmp.failures.push(format!("degree {d}: evaluation does not invert the section at {w:?}"));
                }
                match self.ambient.vector(&LinComb::basis(field, s), d) {
                    Ok(v) => {
                        if !span.insert(&v) {
                            cmp.failures.push(format!("degree {d}: the section of {w:?} is a relation"));
                        }
                    }
                    Err(e) => cmp.failures.push(format!("degree {d}: {e}")),
                }
            }
            if span.rank() != self.ambient.module.dim(d) {
                cmp.failures.push(format!(
                    "degree {d}: the section misses {} quotient dimensions",
                    self.ambient.module.dim(d) - span.rank()
                ));
            }
            if d == self.window.min {
                continue;
            }
            let below = &self.relations[&(d - 1)];
            for w in &twords {
                let mut defect = self.shape.differential(&self.free, &self.section(w));
                defect.add_scaled(&self.lift(&self.shape.differential(target, w)), &field.sign(1));
                if !below.contains(&self.ambient.vector(&defect, d - 1)?) {
                    cmp.failures.push(format!("degree {d}: the section does not commute with the differential at {w:?}"));
                }
            }
            for rel in self.relation_generators(d) {
                let mut drel = LinComb::zero(field);
                for (w, c) in rel.iter() {
                    drel.add_scaled(&self.shape.differential(&self.free, w), c);
                }
                if !below.contains(&self.ambient.vector(&drel, d - 1)?) {
                    cmp.failures.push(format!("degree {d}: the differential does not preserve the relations"));
                    break;
                }
            }
        }
        Ok(cmp)
    }
}

/// Paths to the vertices all of whose children are leaves.
fn bottom_vertices<L>(t: &Tree<L>) -> Vec<Vec<usize>> {
    fn rec<L>(t: &Tree<L>, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if let Tree::Node(_, ch) = t {
            if ch.iter().all(|c| matches!(c, Tree::Leaf(_))) {
                out.push(path.clone());
            }
            for (i, c) in ch.iter().enumerate() {
                path.push(i);
                rec(c, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(t, &mut Vec::new(), &mut out);
    out
}

fn subtree<'a, L>(t: &'a Tree<L>, path: &[usize]) -> &'a Tree<L> {
    path.iter().fold(t, |t, &i| match t {
        Tree::Node(_, ch) => &ch[i],
        Tree::Leaf(_) => unreachable!("path leaves the tree"),
    })
}

fn replace<L: Clone>(t: &Tree<L>, path: &[usize], new: Tree<L>) -> Tree<L> {
    match (path.split_first(), t) {
        (None, _) => new,
        (Some((&i, rest)), Tree::Node(op, ch)) => {
            let mut ch = ch.clone();
            ch[i] = replace(&ch[i], rest, new);
            Tree::Node(*op, ch)
        }
        (Some(_), Tree::Leaf(_)) => unreachable!("path leaves the tree"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures;
    use crate::field::CoeffField;
    use crate::modules::{full_mask, AlgebraOver, Labels, OperadThrough};
    use crate::operad::Operad;
    use std::sync::Arc;

    fn win(a: i64, b: i64) -> DegreeWindow {
        DegreeWindow::new(a, b).unwrap()
    }

    fn operads(f: CoeffField, n: usize) -> (Arc<Operad>, Arc<Operad>, Arc<Operad>) {
        (Arc::new(Operad::stasheff(f, n)), Arc::new(Operad::associative(f, n)), Arc::new(Operad::commutative(f, n)))
    }

    fn sym_bar_iso(f: CoeffField, r: &Arc<Operad>, k: &Arc<Operad>, a: crate::algebra::Algebra, n: usize, w: DegreeWindow) {
        let eta = OperadMorphism::from_stasheff(k.clone(), r.clone()).unwrap();
        let over = AlgebraOver::new(a.clone(), r.clone()).unwrap();
        let rc = RelativeComposition::new(&eta, over, WordShape::bar(n), w, n, None).unwrap();
        let target = WordShape::bar(n).complex(&a, w, Some(n), None).unwrap();
        let cmp = rc.compare(&a, &target).unwrap();
        assert!(cmp.is_iso(), "{} over {f}: {:?}", r.name(), cmp.failures);
        assert_eq!(cmp.quotient, cmp.target);
        assert!(rc.ambient.module.total_dim() > cmp.quotient.values().sum::<usize>());
    }

    #[test]
    fn sym_of_bar_module_is_bar() {
        let q = CoeffField::Rationals;
        let (k, as_, com) = operads(q, 4);
        sym_bar_iso(q, &as_, &k, fixtures::small_dga(q), 3, win(0, 9));
        sym_bar_iso(q, &com, &k, fixtures::exterior(q, 2), 3, win(0, 9));
        sym_bar_iso(q, &k, &k, fixtures::exterior(q, 1), 3, win(0, 7));
        let f2 = CoeffField::Prime(2);
        let (k2, _, com2) = operads(f2, 4);
        sym_bar_iso(f2, &com2, &k2, fixtures::exterior(f2, 1), 4, win(0, 8));
    }

    #[test]
    fn tensor_powers_compose_to_tensor_powers() {
        let q = CoeffField::Rationals;
        let (k, _, com) = operads(q, 4);
        let eta = OperadMorphism::from_stasheff(k, com.clone()).unwrap();
        let a = fixtures::truncated_polynomial(q, 2, 3);
        for len in [1, 2] {
            let over = AlgebraOver::new(a.clone(), com.clone()).unwrap();
            let shape = WordShape::tensor_power(len);
            let rc = RelativeComposition::new(&eta, over, shape, win(0, 8), 4, None).unwrap();
            let target = shape.complex(&a, win(0, 8), None, None).unwrap();
            let cmp = rc.compare(&a, &target).unwrap();
            assert!(cmp.is_iso(), "{:?}", cmp.failures);
        }
    }

    #[test]
    fn extension_of_bar_modules() {
        let q = CoeffField::Rationals;
        let (k, as_, com) = operads(q, 4);
        let id = OperadMorphism::identity(k.clone());
        let eps = OperadMorphism::epsilon(k.clone(), as_.clone()).unwrap();
        let alpha = OperadMorphism::alpha(as_.clone(), com.clone()).unwrap();
        let to_com = OperadMorphism::from_stasheff(k.clone(), com.clone()).unwrap();
        for n in 1..=3 {
            let w = win(0, 3 * n as i64 + 1);
            let mask = Some(full_mask(n));
            for (eta, psi, target_eta) in [(&id, &eps, &eps), (&eps, &alpha, &to_com)] {
                let rc = RelativeComposition::new(eta, OperadThrough::new(psi.clone(), n), WordShape::bar(n), w, n, mask)
                    .unwrap();
                let b = FreeAlgebra::new(target_eta, Labels::new(q, n), n).unwrap();
                let target = WordShape::bar(n).complex(&b, w, Some(n), mask).unwrap();
                let cmp = rc.compare(&b, &target).unwrap();
                assert!(cmp.is_iso(), "arity {n} {}: {:?}", psi.name, cmp.failures);
                if n == 3 {
                    // B_As(3) has dims 6, 12, 6 and B_Com(3) has dims 1, 6, 6.
                    let total: usize = cmp.quotient.values().sum();
                    assert_eq!(total, if psi.name == "ε" { 24 } else { 13 });
                }
            }
        }
    }
}
