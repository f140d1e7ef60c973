//! The bar complex `B(A) = (Tᶜ(ΣA), δ + ∂)` of an A∞-algebra, its weight
//! filtration, the shuffle product for commutative inputs, and iterated bar
//! complexes.
//!
//! Sign convention. A word `[x_1|..|x_n]` stands for `Σx_1⊗..⊗Σx_n` and has
//! degree `Σ(|x_i| + 1)`. With `ε_i = Σ_{l<i} (|x_l| + 1)`:
//!
//! * internal part: `[..|x_i|..] ↦ -(-1)^{ε_i} [..|δx_i|..]`;
//! * twisting part: `[..|x_i|..|x_{i+r-1}|..] ↦ (-1)^{ε_i + η + c_r} [..|μ_r(x_i, ..)|..]`
//!   where `η = Σ_{j=1..r} (r - j)(|x_{i+j-1}| + 1)` is the Koszul sign of
//!   desuspending the `r` inputs and `c_r = (r-2)(r-3)/2`.
//!
//! The constants `c_r` are pinned by `(δ+∂)² = 0` on the bar module of the
//! Stasheff operad, given the operad's normalization `∂μ_3 = μ_2∘_2μ_2 - μ_2∘_1μ_2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;

use crate::algebra::{diff_lc, Algebra, AlgebraType, KAlgebra};
use crate::combinat::{shuffle_order, shuffles};
use crate::dg::{DegreeWindow, DgModule, Keyed};
use crate::error::{Error, Result};
use crate::field::{CoeffField, Scalar};
use crate::lincomb::LinComb;

/// A bar word `[x_1|..|x_n]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<E>(pub Vec<E>);

impl<E: fmt::Debug> fmt::Debug for Word<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{x:?}")?;
        }
        write!(f, "]")
    }
}

impl<E> Word<E> {
    pub fn weight(&self) -> usize {
        self.0.len()
    }
}

pub fn word_degree<A: KAlgebra>(a: &A, w: &[A::E]) -> i64 {
    w.iter().map(|x| a.degree(x) + 1).sum()
}

pub fn word_name<A: KAlgebra>(a: &A, w: &[A::E]) -> String {
    format!("[{}]", w.iter().map(|x| a.name(x)).collect::<Vec<_>>().join("|"))
}

/// Which words enter a bar complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BarBounds {
    pub window: DegreeWindow,
    pub weight_bound: usize,
    /// Bound on the total arity of words (algebras in right modules).
    pub size_bound: Option<usize>,
    /// Exact label set required of each word (algebras in right modules).
    pub label_mask: Option<u64>,
}

impl BarBounds {
    pub fn new(window: DegreeWindow, weight_bound: usize) -> Self {
        BarBounds { window, weight_bound, size_bound: None, label_mask: None }
    }
}

/// All words allowed by `bounds` whose degree lies in the window.
pub fn enumerate_words<A: KAlgebra>(a: &A, bounds: &BarBounds) -> Vec<(Word<A::E>, i64)> {
    enumerate_shifted(a, bounds, 1, 1)
}

/// Words of length `min_len..=bounds.weight_bound` whose letters have their
/// degree raised by `shift`.
pub fn enumerate_shifted<A: KAlgebra>(a: &A, bounds: &BarBounds, shift: i64, min_len: usize) -> Vec<(Word<A::E>, i64)> {
    let elems = a.elements();
    let sdeg: Vec<i64> = elems.iter().map(|x| a.degree(x) + shift).collect();
    let sizes: Vec<usize> = elems.iter().map(|x| a.size(x)).collect();
    let masks: Vec<u64> = elems.iter().map(|x| a.labels(x)).collect();
    let lo = sdeg.iter().copied().min().unwrap_or(0);
    let hi = sdeg.iter().copied().max().unwrap_or(0);
    let w = bounds.window;
    let max_size = bounds.size_bound.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    // Can a word extended by k more letters land in the window?
    let reachable = |deg: i64, remaining: usize| {
        (0..=remaining as i64).any(|k| deg + k * lo <= w.max && deg + k * hi >= w.min)
    };
    struct Ctx<'a> {
        sdeg: &'a [i64],
        sizes: &'a [usize],
        masks: &'a [u64],
        min_len: usize,
        max_len: usize,
        max_size: usize,
        target: Option<u64>,
        window: DegreeWindow,
    }
    fn rec(
        ctx: &Ctx,
        reachable: &dyn Fn(i64, usize) -> bool,
        deg: i64,
        size: usize,
        mask: u64,
        cur: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, i64)>,
    ) {
        if cur.len() >= ctx.min_len.max(1) && ctx.window.contains(deg) && ctx.target.is_none_or(|t| t == mask) {
            out.push((cur.clone(), deg));
        }
        if cur.len() == ctx.max_len {
            return;
        }
        for i in 0..ctx.sdeg.len() {
            let (d, s, m) = (deg + ctx.sdeg[i], size + ctx.sizes[i], mask | ctx.masks[i]);
            if s > ctx.max_size || ctx.masks[i] & mask != 0 {
                continue;
            }
            if let Some(t) = ctx.target {
                if m & !t != 0 {
                    continue;
                }
            }
            if !reachable(d, ctx.max_len - cur.len() - 1) {
                continue;
            }
            cur.push(i);
            rec(ctx, reachable, d, s, m, cur, out);
            cur.pop();
        }
    }
    let ctx = Ctx {
        sdeg: &sdeg,
        sizes: &sizes,
        masks: &masks,
        min_len,
        max_len: bounds.weight_bound,
        max_size,
        target: bounds.label_mask,
        window: w,
    };
    let mut idx = Vec::new();
    rec(&ctx, &reachable, 0, 0, 0, &mut cur, &mut idx);
    for (ws, d) in idx {
        out.push((Word(ws.into_iter().map(|i| elems[i].clone()).collect()), d));
    }
    out
}

/// The bar differential `δ + ∂` of a word (untruncated).
pub fn bar_differential<A: KAlgebra>(a: &A, w: &Word<A::E>) -> LinComb<Word<A::E>> {
    let field = a.field();
    let xs = &w.0;
    let n = xs.len();
    let mut out = LinComb::zero(field);
    let sd: Vec<i64> = xs.iter().map(|x| a.degree(x) + 1).collect();
    let mut prefix = 0i64;
    for i in 0..n {
        let s = field.sign(prefix + 1);
        for (y, c) in a.diff(&xs[i]).iter() {
            let mut v = xs.clone();
            v[i] = y.clone();
            out.add_term(Word(v), &s * c);
        }
        for r in 2..=a.max_mu().min(n - i) {
            let eta: i64 = (0..r).map(|j| (r - 1 - j) as i64 * sd[i + j]).sum();
            let s = field.sign(prefix + eta + twist_parity(r));
            for (y, c) in a.mu(&xs[i..i + r]).iter() {
                let mut v = Vec::with_capacity(n - r + 1);
                v.extend_from_slice(&xs[..i]);
                v.push(y.clone());
                v.extend_from_slice(&xs[i + r..]);
                out.add_term(Word(v), &s * c);
            }
        }
        prefix += sd[i];
    }
    out
}

/// Parity of the constant in front of `μ_r` in the bar differential.
fn twist_parity(r: usize) -> i64 {
    let k = r as i64 - 2;
    k * (k - 1) / 2
}

/// The internal part `δ` of the bar differential alone.
pub fn internal_differential<A: KAlgebra>(a: &A, w: &Word<A::E>) -> LinComb<Word<A::E>> {
    tensor_differential(a, w, 1)
}

/// The Koszul differential on a tensor product of letters shifted by `shift`:
/// `δ(s^k x ⊗ ..) = (-1)^k s^k δx ⊗ .. + ..`.
pub fn tensor_differential<A: KAlgebra>(a: &A, w: &Word<A::E>, shift: i64) -> LinComb<Word<A::E>> {
    let field = a.field();
    let mut out = LinComb::zero(field);
    let mut prefix = 0i64;
    for (i, x) in w.0.iter().enumerate() {
        let s = field.sign(prefix + shift);
        for (y, c) in a.diff(x).iter() {
            let mut v = w.0.clone();
            v[i] = y.clone();
            out.add_term(Word(v), &s * c);
        }
        prefix += a.degree(x) + shift;
    }
    out
}

/// A truncated bar complex. Homology is exact on `report`.
#[derive(Clone, Debug)]
pub struct BarComplex<E: Ord + Hash + Clone> {
    pub keyed: Keyed<Word<E>>,
    pub bounds: BarBounds,
    /// Degrees where the truncation does not affect homology.
    pub report: DegreeWindow,
}

impl<E: Ord + Hash + Clone + Send + Sync + fmt::Debug> BarComplex<E> {
    pub fn module(&self) -> &DgModule {
        &self.keyed.module
    }

    pub fn homology(&self) -> Result<BTreeMap<i64, usize>> {
        self.keyed.module.homology(self.report)
    }

    pub fn words(&self) -> impl Iterator<Item = (&Word<E>, i64)> {
        self.keyed.keys.iter().flat_map(|(d, ws)| ws.iter().map(move |w| (w, *d)))
    }

    pub fn contains(&self, w: &Word<E>) -> bool {
        self.keyed.index_of(w).is_some()
    }
}

/// Builds the complex of all words allowed by `bounds` with no soundness
/// analysis: the result is reported on the interior of the window.
pub fn bar_raw<A: KAlgebra>(a: &A, bounds: BarBounds) -> Result<BarComplex<A::E>> {
    let words = enumerate_words(a, &bounds);
    let weights: BTreeMap<String, usize> = words.iter().map(|(w, _)| (word_name(a, &w.0), w.weight())).collect();
    let keyed = Keyed::build_named(a.field(), bounds.window, words, |w| bar_differential(a, w), |w| word_name(a, &w.0))?;
    let mut keyed = keyed;
    keyed.module = keyed.module.with_weights(weights).truncated();
    let report = DegreeWindow { min: bounds.window.min + 1, max: (bounds.window.max - 1).max(bounds.window.min + 1) };
    Ok(BarComplex { keyed, bounds, report })
}

/// The weight bound that makes homology exact on `window`: the input must be
/// concentrated where every suspended degree has one sign.
pub fn required_weight<A: KAlgebra>(a: &A, window: DegreeWindow) -> Result<usize> {
    let sd: Vec<i64> = a.elements().iter().map(|x| a.degree(x) + 1).collect();
    if sd.is_empty() {
        return Ok(1);
    }
    let build = window.widen(1);
    if sd.iter().all(|&d| d >= 1) {
        Ok(build.max.max(1) as usize)
    } else if sd.iter().all(|&d| d <= -1) {
        Ok((-build.min).max(1) as usize)
    } else {
        Err(Error::TruncationUnsound(format!(
            "the algebra has elements in degrees {} and {} on both sides of -1, so bar classes of a fixed degree have unbounded weight",
            sd.iter().min().unwrap() - 1,
            sd.iter().max().unwrap() - 1
        )))
    }
}

/// `B(A)` with homology exact on `window`. `weight_bound` defaults to the
/// sound value; a smaller explicit bound is rejected.
pub fn bar<A: KAlgebra>(a: &A, window: DegreeWindow, weight_bound: Option<usize>) -> Result<BarComplex<A::E>> {
    let need = required_weight(a, window)?;
    let weight = match weight_bound {
        Some(w) if w < need => {
            return Err(Error::TruncationUnsound(format!(
                "window [{}, {}] needs weight bound {need}, got {w}",
                window.min, window.max
            )))
        }
        Some(w) => w,
        None => need,
    };
    let mut b = bar_raw(a, BarBounds::new(window.widen(1), weight))?;
    b.report = window;
    Ok(b)
}

/// `bar` after validating the algebra relations.
pub fn bar_of_algebra(a: &Algebra, window: DegreeWindow, weight_bound: Option<usize>) -> Result<BarComplex<u32>> {
    crate::algebra::validate_algebra(a)?;
    bar(a, window, weight_bound)
}

/// The subcomplex `B_{≤n}` of words of weight at most `n`. Fails if the
/// differential leaves the subcomplex.
pub fn bar_filtration_layer<A: KAlgebra>(a: &A, b: &BarComplex<A::E>, n: usize) -> Result<DgModule> {
    if n > b.bounds.weight_bound {
        return Err(Error::Invalid(format!("layer {n} exceeds the weight bound {}", b.bounds.weight_bound)));
    }
    let keys: Vec<(Word<A::E>, i64)> = b.words().filter(|(w, _)| w.weight() <= n).map(|(w, d)| (w.clone(), d)).collect();
    let k = Keyed::build_named(a.field(), b.bounds.window, keys, |w| bar_differential(a, w), |w| word_name(a, &w.0))?;
    Ok(k.module.truncated())
}

/// Checks that `B_{≤n}/B_{≤n-1}` carries the internal differential only: the
/// twisting part of the differential strictly lowers weight.
pub fn check_associated_graded<A: KAlgebra>(a: &A, b: &BarComplex<A::E>) -> bool {
    b.words().all(|(w, _)| {
        let full = bar_differential(a, w);
        let mut top = LinComb::zero(a.field());
        for (v, c) in full.iter() {
            if v.weight() == w.weight() {
                top.add_term(v.clone(), c.clone());
            } else if v.weight() > w.weight() {
                return false;
            }
        }
        top == internal_differential(a, w)
    })
}

/// `(δ + ∂)² = 0` on every word of the complex whose image stays inside it.
pub fn check_square_zero<A: KAlgebra>(a: &A, b: &BarComplex<A::E>) -> std::result::Result<(), String> {
    for (w, d) in b.words() {
        if d - 2 < b.bounds.window.min {
            continue;
        }
        let dd = bar_differential(a, w).map_linear(|v| bar_differential(a, v));
        if !dd.is_zero() {
            return Err(format!("(δ+∂)² ≠ 0 on {}", word_name(a, &w.0)));
        }
    }
    Ok(())
}

/// The shuffle product of two bar words: the sum over `(m, n)`-shuffles with
/// the Koszul sign of the suspended letters.
pub fn shuffle<A: KAlgebra>(a: &A, u: &Word<A::E>, v: &Word<A::E>) -> LinComb<Word<A::E>> {
    let field = a.field();
    let (m, n) = (u.0.len(), v.0.len());
    let cat: Vec<A::E> = u.0.iter().chain(v.0.iter()).cloned().collect();
    let degs: Vec<i64> = cat.iter().map(|x| a.degree(x) + 1).collect();
    let mut out = LinComb::zero(field);
    for sh in shuffles(m, n) {
        let order = shuffle_order(&sh, m, n);
        let sign = crate::combinat::koszul_parity(&degs, &order);
        out.add_term(Word(order.iter().map(|&k| cat[k].clone()).collect()), field.sign(sign as i64));
    }
    out
}

pub fn shuffle_lc<A: KAlgebra>(a: &A, u: &LinComb<Word<A::E>>, v: &LinComb<Word<A::E>>) -> LinComb<Word<A::E>> {
    let mut out = LinComb::zero(a.field());
    for (x, c) in u.iter() {
        for (y, e) in v.iter() {
            out.add_scaled(&shuffle(a, x, y), &(c * e));
        }
    }
    out
}

/// The bar complex of a commutative algebra as a commutative algebra under
/// the shuffle product: the input of the next bar construction. Elements are
/// the words of `complex` in degrees of `elements`; products and
/// differentials leaving the complex are truncated.
pub struct ShuffleAlgebra<'a, A: KAlgebra> {
    pub inner: &'a A,
    pub complex: BarComplex<A::E>,
    pub elements: DegreeWindow,
}

impl<'a, A: KAlgebra> ShuffleAlgebra<'a, A> {
    pub fn new(inner: &'a A, complex: BarComplex<A::E>, elements: DegreeWindow) -> Self {
        ShuffleAlgebra { inner, complex, elements }
    }

    fn keep(&self, l: LinComb<Word<A::E>>) -> LinComb<Word<A::E>> {
        let mut out = LinComb::zero(self.inner.field());
        for (w, c) in l.into_iter_terms() {
            if self.complex.contains(&w) {
                out.add_term(w, c);
            }
        }
        out
    }

    /// Materializes the structure constants as an `Algebra` of type Com.
    pub fn to_algebra(&self) -> Result<Algebra> {
        let words: Vec<Word<A::E>> = KAlgebra::elements(self);
        let name = |w: &Word<A::E>| word_name(self.inner, &w.0);
        let field = self.inner.field();
        let basis: Vec<(String, i64)> = words.iter().map(|w| (name(w), self.degree(w))).collect();
        let index: BTreeSet<&Word<A::E>> = words.iter().collect();
        let mut diff = Vec::new();
        for w in &words {
            for (v, c) in self.diff(w).iter() {
                if index.contains(v) {
                    diff.push((name(w), name(v), c.clone()));
                }
            }
        }
        let carrier = DgModule::new(field, self.elements, basis, diff)?;
        let mut table = Vec::new();
        for u in &words {
            for v in &words {
                let p = self.mu(&[u.clone(), v.clone()]);
                let out: Vec<(String, Scalar)> =
                    p.iter().filter(|(x, _)| index.contains(x)).map(|(x, c)| (name(x), c.clone())).collect();
                if !out.is_empty() {
                    table.push((vec![name(u), name(v)], out));
                }
            }
        }
        Algebra::new(AlgebraType::Commutative, carrier, table)
    }
}

impl<A: KAlgebra> KAlgebra for ShuffleAlgebra<'_, A> {
    type E = Word<A::E>;

    fn field(&self) -> CoeffField {
        self.inner.field()
    }

    fn elements(&self) -> Vec<Word<A::E>> {
        self.complex.words().filter(|(_, d)| self.elements.contains(*d)).map(|(w, _)| w.clone()).collect()
    }

    fn degree(&self, x: &Word<A::E>) -> i64 {
        word_degree(self.inner, &x.0)
    }

    fn diff(&self, x: &Word<A::E>) -> LinComb<Word<A::E>> {
        self.keep(bar_differential(self.inner, x))
    }

    fn mu(&self, xs: &[Word<A::E>]) -> LinComb<Word<A::E>> {
        if xs.len() != 2 {
            return LinComb::zero(self.field());
        }
        self.keep(shuffle(self.inner, &xs[0], &xs[1]))
    }

    fn max_mu(&self) -> usize {
        2
    }

    fn name(&self, x: &Word<A::E>) -> String {
        word_name(self.inner, &x.0)
    }
}

/// Result of an iterated bar construction.
#[derive(Clone, Debug)]
pub struct IteratedBar {
    /// `levels[k]` is `B^{k+1}(A)` as a commutative algebra (structure
    /// constants), truncated to the degrees the next level needs.
    pub levels: Vec<Algebra>,
    /// The outermost complex with its report window.
    pub top: BarComplex<u32>,
}

impl IteratedBar {
    pub fn homology(&self) -> Result<BTreeMap<i64, usize>> {
        self.top.homology()
    }
}

/// Degrees of inner elements needed by an outer bar complex built on `build`
/// for an input whose suspended degrees are all positive or all negative.
fn inner_window(build: DegreeWindow, positive: bool) -> Option<DegreeWindow> {
    if positive {
        (build.max >= 2).then(|| DegreeWindow { min: 1, max: build.max - 1 })
    } else {
        (build.min <= -2).then(|| DegreeWindow { min: build.min - 1, max: -1 })
    }
}

/// `Bⁿ(A)` for a commutative algebra, re-equipping each level with the
/// shuffle product. Homology is exact on `window`.
pub fn iterated_bar(a: &Algebra, n: usize, window: DegreeWindow, weight_bound: Option<usize>) -> Result<IteratedBar> {
    if n == 0 {
        return Err(Error::Invalid("iterated bar needs n ≥ 1".into()));
    }
    crate::algebra::validate_algebra(a)?;
    if a.kind() != AlgebraType::Commutative {
        return Err(Error::NotCommutative(format!("iterated bar of a {}-algebra", a.kind())));
    }
    let positive = match required_weight(a, window) {
        Ok(_) => KAlgebra::elements(a).iter().all(|x| a.degree(x) >= 0),
        Err(e) => return Err(e),
    };
    // Windows from the outside in: level k (1-based) must be exact on wins[k-1].
    let mut wins = vec![window];
    for _ in 1..n {
        let build = wins.last().unwrap().widen(1);
        match inner_window(build, positive) {
            Some(w) => wins.push(DegreeWindow { min: w.min, max: w.max }),
            None => wins.push(DegreeWindow { min: if positive { 1 } else { -1 }, max: if positive { 1 } else { -1 } }),
        }
    }
    wins.reverse();
    let mut levels = Vec::new();
    let mut current = a.clone();
    for (k, w) in wins.iter().enumerate() {
        let need = required_weight(&current, *w)?;
        if let Some(wb) = weight_bound {
            if wb < need {
                return Err(Error::TruncationUnsound(format!(
                    "level {} of the iterated bar must be exact on [{}, {}], which needs weight bound {need}, got {wb}",
                    k + 1,
                    w.min,
                    w.max
                )));
            }
        }
        let b = bar(&current, *w, Some(weight_bound.unwrap_or(need).max(need)))?;
        if k + 1 == n {
            return Ok(IteratedBar { levels, top: b });
        }
        // Elements of the next input: everything exact plus the targets just below.
        let elems = if positive {
            DegreeWindow { min: b.bounds.window.min.max(1), max: w.max }
        } else {
            DegreeWindow { min: w.min, max: w.max.min(-1) }
        };
        let s = ShuffleAlgebra::new(&current, b, elems);
        let next = s.to_algebra()?;
        levels.push(next.clone());
        current = next;
    }
    unreachable!()
}

/// The differential of `B(A)` as a derivation check for the shuffle product:
/// `d(u·v) = d(u)·v + (-1)^{|u|} u·d(v)`, where everything stays in range.
pub fn shuffle_derivation_holds<A: KAlgebra>(a: &A, u: &Word<A::E>, v: &Word<A::E>) -> bool {
    let field = a.field();
    let lhs = shuffle(a, u, v).map_linear(|w| bar_differential(a, w));
    let du = bar_differential(a, u);
    let dv = bar_differential(a, v);
    let mut rhs = shuffle_lc(a, &du, &LinComb::basis(field, v.clone()));
    rhs.add_scaled(
        &shuffle_lc(a, &LinComb::basis(field, u.clone()), &dv),
        &field.sign(word_degree(a, &u.0)),
    );
    lhs == rhs
}

/// `δ` of the algebra applied to a combination (re-exported for tests).
pub fn algebra_diff<A: KAlgebra>(a: &A, l: &LinComb<A::E>) -> LinComb<A::E> {
    diff_lc(a, l)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::fixtures;
    use crate::modules::{full_mask, FreeAlgebra, Labels};
    use crate::operad::{Operad, OperadMorphism};

    fn w(lo: i64, hi: i64) -> DegreeWindow {
        DegreeWindow::new(lo, hi).unwrap()
    }

    #[test]
    fn trivial_algebra_counts() {
        let f = CoeffField::Rationals;
        let a = fixtures::trivial(f, AlgebraType::Associative, &[1]);
        let b = bar(&a, w(1, 12), None).unwrap();
        let h = b.homology().unwrap();
        for d in 1..=12 {
            assert_eq!(h[&d], usize::from(d % 2 == 0), "degree {d}");
            assert_eq!(b.module().dim(d), usize::from(d % 2 == 0));
        }
    }

    #[test]
    fn exterior_over_f2_is_divided_powers() {
        let f = CoeffField::Prime(2);
        let a = fixtures::exterior(f, 1);
        let h = bar_of_algebra(&a, w(0, 12), None).unwrap().homology().unwrap();
        for d in 0..=12 {
            assert_eq!(h[&d], usize::from(d % 2 == 0 && d > 0), "degree {d}");
        }
    }

    #[test]
    fn square_zero_and_filtration() {
        for f in [CoeffField::Rationals, CoeffField::Prime(2)] {
            let a = fixtures::small_dga(f);
            let b = bar(&a, w(0, 10), None).unwrap();
            assert_eq!(check_square_zero(&a, &b), Ok(()));
            assert!(check_associated_graded(&a, &b));
            let l1 = bar_filtration_layer(&a, &b, 1).unwrap();
            assert_eq!(l1.total_dim(), a.dim());
            let top = bar_filtration_layer(&a, &b, b.bounds.weight_bound).unwrap();
            assert_eq!(top.dims(), b.module().dims());
        }
    }

    #[test]
    fn unsound_truncation_is_rejected() {
        let f = CoeffField::Rationals;
        let a = fixtures::trivial(f, AlgebraType::Associative, &[1, -3]);
        assert!(matches!(bar(&a, w(0, 4), None), Err(Error::TruncationUnsound(_))));
        let b = fixtures::trivial(f, AlgebraType::Associative, &[1]);
        assert!(matches!(bar(&b, w(0, 8), Some(3)), Err(Error::TruncationUnsound(_))));
    }

    #[test]
    fn shuffle_examples() {
        let f = CoeffField::Rationals;
        let a = fixtures::trivial(f, AlgebraType::Commutative, &[0, 1]);
        let (x, y) = (Word(vec![0u32]), Word(vec![1u32]));
        // |Σx| = 1, |Σy| = 2.
        let p = shuffle(&a, &x, &y);
        assert_eq!(p.coeff(&Word(vec![0, 1])), f.one());
        assert_eq!(p.coeff(&Word(vec![1, 0])), f.one());
        let q = shuffle(&a, &x, &x);
        assert!(q.is_zero());
        let r = shuffle(&a, &Word(vec![0, 1]), &y);
        assert_eq!(r.len(), 2);
        assert_eq!(shuffle(&a, &Word(vec![1, 1]), &y).coeff(&Word(vec![1, 1, 1])), f.from_i64(3));
    }

    fn bar_module_square_zero(r: Arc<Operad>, n: usize) {
        let field = r.field();
        let k = Arc::new(Operad::stasheff(field, n));
        let eta = OperadMorphism::from_stasheff(k, r).unwrap();
        let free = FreeAlgebra::new(&eta, Labels::new(field, n), n).unwrap();
        let bounds = BarBounds {
            window: w(-1, 2 * n as i64 + 1),
            weight_bound: n,
            size_bound: Some(n),
            label_mask: Some(full_mask(n)),
        };
        let b = bar_raw(&free, bounds).unwrap();
        assert_eq!(check_square_zero(&free, &b), Ok(()));
    }

    #[test]
    fn bar_modules_square_to_zero() {
        for field in [CoeffField::Rationals, CoeffField::Prime(3)] {
            bar_module_square_zero(Arc::new(Operad::stasheff(field, 4)), 4);
            bar_module_square_zero(Arc::new(Operad::associative(field, 4)), 4);
            bar_module_square_zero(Arc::new(Operad::commutative(field, 4)), 4);
        }
    }

    #[test]
    fn stasheff_bar_module_arity_five() {
        bar_module_square_zero(Arc::new(Operad::stasheff(CoeffField::Rationals, 5)), 5);
    }

    #[test]
    fn iterated_bar_of_exterior_over_f2() {
        let f = CoeffField::Prime(2);
        let a = fixtures::exterior(f, 1);
        let it = iterated_bar(&a, 2, w(0, 6), None).unwrap();
        let h = it.homology().unwrap();
        let got: Vec<usize> = (1..=6).map(|d| h[&d]).collect();
        assert_eq!(got, vec![0, 0, 1, 0, 1, 1]);
    }
}
