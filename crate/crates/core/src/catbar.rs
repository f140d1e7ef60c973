//! The categorical bar construction: simplicial dg-modules, normalized
//! chains, the Eilenberg–Mac Lane shuffle map, the simplicial algebra
//! `C̲(A)_n = A^{∨n}` of a commutative algebra with its comparison to `B(A)`,
//! and the categorical bar module `C̲_R = R(C̲(I))`.
//!
//! Normalization uses the total differential
//! `D = δ + (-1)^{q} Σ_i (-1)^i d_i` on an element of internal degree `q`,
//! and divides out the subcomplex spanned by degenerate elements.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{algebra_diagnostics, Algebra, AlgebraType, KAlgebra};
use crate::bar::{required_weight, shuffle, BarComplex, Word};
use crate::combinat::{perm_parity, shuffles};
use crate::dg::{DegreeWindow, DgMap, DgModule, Keyed};
use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::linalg::{Echelon, SparseMatrix, SparseVec};
use crate::lincomb::LinComb;
use crate::operad::{expand_product, Operad, OperadMorphism};
use crate::right::{BarModule, RightModule};
use crate::tree::Tree;

/// A simplicial object in dg-modules given on a basis of each level
/// `0..=top()`. Faces and degeneracies are chain maps of internal degree 0.
pub trait Simplicial: Sync {
    type K: Clone + Ord + Hash + Send + Sync + fmt::Debug;
    fn field(&self) -> CoeffField;
    /// Highest level built.
    fn top(&self) -> usize;
    /// Basis of level `n`. Implementations bounded by a degree window return
    /// at least the elements that window needs.
    fn basis(&self, n: usize) -> Vec<Self::K>;
    fn level(&self, x: &Self::K) -> usize;
    /// Internal degree.
    fn degree(&self, x: &Self::K) -> i64;
    fn diff(&self, x: &Self::K) -> LinComb<Self::K>;
    /// `d_i x` for `0 ≤ i ≤ level(x)`, `level(x) ≥ 1`.
    fn face(&self, i: usize, x: &Self::K) -> LinComb<Self::K>;
    /// `s_j x` for `0 ≤ j ≤ level(x)`.
    fn degeneracy(&self, j: usize, x: &Self::K) -> LinComb<Self::K>;
    fn name(&self, x: &Self::K) -> String {
        format!("{x:?}")
    }
}

fn faces<S: Simplicial>(s: &S, i: usize, l: &LinComb<S::K>) -> LinComb<S::K> {
    l.map_linear(|x| s.face(i, x))
}

fn degeneracies<S: Simplicial>(s: &S, j: usize, l: &LinComb<S::K>) -> LinComb<S::K> {
    l.map_linear(|x| s.degeneracy(j, x))
}

fn internal<S: Simplicial>(s: &S, l: &LinComb<S::K>) -> LinComb<S::K> {
    l.map_linear(|x| s.diff(x))
}

/// The first violated identity at `x`, if any.
fn identity_violation<S: Simplicial>(s: &S, x: &S::K) -> Option<String> {
    let n = s.level(x);
    let top = s.top();
    let one = LinComb::basis(s.field(), x.clone());
    let dx = s.diff(x);
    if !internal(s, &dx).is_zero() {
        return Some("δ² ≠ 0".into());
    }
    if n >= 1 {
        for i in 0..=n {
            if faces(s, i, &dx) != internal(s, &s.face(i, x)) {
                return Some(format!("d{i} does not commute with δ"));
            }
        }
    }
    if n >= 2 {
        for j in 1..=n {
            for i in 0..j {
                if faces(s, i, &s.face(j, x)) != faces(s, j - 1, &s.face(i, x)) {
                    return Some(format!("d{i}d{j} = d{}d{i}", j - 1));
                }
            }
        }
    }
    if n < top {
        for j in 0..=n {
            let sx = s.degeneracy(j, x);
            if degeneracies(s, j, &dx) != internal(s, &sx) {
                return Some(format!("s{j} does not commute with δ"));
            }
            for i in 0..=n + 1 {
                let lhs = faces(s, i, &sx);
                let (rhs, rule) = if i < j {
                    (degeneracies(s, j - 1, &s.face(i, x)), format!("d{i}s{j} = s{}d{i}", j - 1))
                } else if i == j || i == j + 1 {
                    (one.clone(), format!("d{i}s{j} = id"))
                } else {
                    (degeneracies(s, j, &s.face(i - 1, x)), format!("d{i}s{j} = s{j}d{}", i - 1))
                };
                if lhs != rhs {
                    return Some(rule);
                }
            }
            if n + 2 <= top {
                for i in 0..=j {
                    if degeneracies(s, i, &sx) != degeneracies(s, j + 1, &s.degeneracy(i, x)) {
                        return Some(format!("s{i}s{j} = s{}s{i}", j + 1));
                    }
                }
            }
        }
    }
    None
}

/// Checks the simplicial identities and their compatibility with `δ` on
/// every basis element of levels `0..=top`.
pub fn check_simplicial<S: Simplicial>(s: &S) -> Result<()> {
    for n in 0..=s.top() {
        let basis = s.basis(n);
        let bad = basis.par_iter().find_map_first(|x| identity_violation(s, x).map(|why| (x.clone(), why)));
        if let Some((x, why)) = bad {
            return Err(Error::SimplicialIdentityViolation(format!("{why} fails on {} in level {n}", s.name(&x))));
        }
    }
    Ok(())
}

/// Total degree: level plus internal degree.
pub fn total_degree<S: Simplicial>(s: &S, x: &S::K) -> i64 {
    s.level(x) as i64 + s.degree(x)
}

/// `D x = δx + (-1)^{|x|} Σ_i (-1)^i d_i x` with `|x|` the internal degree.
pub fn total_differential<S: Simplicial>(s: &S, x: &S::K) -> LinComb<S::K> {
    let field = s.field();
    let mut out = s.diff(x);
    let n = s.level(x);
    if n >= 1 {
        let q = s.degree(x);
        for i in 0..=n {
            out.add_scaled(&s.face(i, x), &field.sign(q + i as i64));
        }
    }
    out
}

/// Normalized chains: the total complex of levels `0..=top` modulo the
/// degenerate subcomplex. The basis of each degree is the set of ambient
/// keys that are not pivots of the degenerate span.
#[derive(Clone, Debug)]
pub struct Normalized<K: Ord + Hash + Clone> {
    pub ambient: Keyed<K>,
    pub module: DgModule,
    degenerate: BTreeMap<i64, Echelon>,
    /// Ambient index to quotient index, per degree.
    positions: BTreeMap<i64, HashMap<usize, usize>>,
}

impl<K: Ord + Hash + Clone> Normalized<K> {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.module.dims()
    }

    pub fn homology(&self, window: DegreeWindow) -> Result<BTreeMap<i64, usize>> {
        self.module.homology(window)
    }

    /// The keys representing the quotient basis in degree `d`.
    pub fn basis(&self, d: i64) -> Vec<K> {
        let Some(keys) = self.ambient.keys.get(&d) else { return Vec::new() };
        let pos = &self.positions[&d];
        let mut out: Vec<(usize, K)> = keys.iter().enumerate().filter_map(|(i, k)| pos.get(&i).map(|&q| (q, k.clone()))).collect();
        out.sort_by_key(|(q, _)| *q);
        out.into_iter().map(|(_, k)| k).collect()
    }

    /// Coordinates of the class of `l` (homogeneous of degree `d`) in the quotient basis.
    pub fn reduce(&self, l: &LinComb<K>, d: i64) -> Result<SparseVec> {
        let v = self.ambient.vector(l, d)?;
        let r = match self.degenerate.get(&d) {
            Some(e) => e.reduce(&v),
            None => v,
        };
        let pos = &self.positions[&d];
        let mut out: SparseVec = r.into_iter().map(|(i, c)| (pos[&i], c)).collect();
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    pub fn is_degenerate(&self, l: &LinComb<K>, d: i64) -> Result<bool> {
        Ok(self.reduce(l, d)?.is_empty())
    }

    /// The matrix of a degree-0 map from a keyed module into the quotient.
    pub fn map_from<L: Ord + Hash + Clone>(&self, source: &Keyed<L>, f: impl Fn(&L) -> LinComb<K>) -> Result<DgMap> {
        let field = self.module.field();
        let mut blocks = BTreeMap::new();
        for (d, ks) in &source.keys {
            if !self.module.window().contains(*d) {
                continue;
            }
            let mut m = SparseMatrix::zero(field, self.module.dim(*d), ks.len());
            for (i, k) in ks.iter().enumerate() {
                for (j, c) in self.reduce(&f(k), *d)? {
                    m.add_entry(j, i, &c);
                }
            }
            blocks.insert(*d, m);
        }
        Ok(DgMap { source: source.module.clone(), target: self.module.clone(), degree: 0, blocks })
    }
}

/// `N_*` of a simplicial dg-module on the total degrees in `window`, after
/// checking the simplicial identities.
pub fn normalize<S: Simplicial>(s: &S, window: DegreeWindow) -> Result<Normalized<S::K>> {
    check_simplicial(s)?;
    let field = s.field();
    let levels: Vec<Vec<S::K>> = (0..=s.top()).map(|n| s.basis(n)).collect();
    let keys: Vec<(S::K, i64)> = levels.iter().flatten().map(|x| (x.clone(), total_degree(s, x))).collect();
    let ambient = Keyed::build_named(field, window, keys, |x| total_differential(s, x), |x| s.name(x))?;
    let mut degenerate: BTreeMap<i64, Echelon> = BTreeMap::new();
    for level in levels.iter().take(s.top()) {
        for x in level {
            let d = total_degree(s, x) + 1;
            if !window.contains(d) {
                continue;
            }
            let e = degenerate.entry(d).or_insert_with(|| Echelon::new(field));
            for j in 0..=s.level(x) {
                e.insert(&ambient.vector(&s.degeneracy(j, x), d)?);
            }
        }
    }
    let module = ambient.module.quotient(&degenerate)?;
    let mut positions = BTreeMap::new();
    for d in window.degrees() {
        let mut pos = HashMap::new();
        for i in 0..ambient.module.dim(d) {
            if !degenerate.get(&d).is_some_and(|e| e.is_pivot(i)) {
                let q = pos.len();
                pos.insert(i, q);
            }
        }
        positions.insert(d, pos);
    }
    Ok(Normalized { ambient, module, degenerate, positions })
}

/// A simplicial dg-module stored as matrices: levels, faces and
/// degeneracies. Basis elements are `(level, degree, index)`.
#[derive(Clone, Debug)]
pub struct SimplicialDgModule {
    field: CoeffField,
    pub levels: Vec<DgModule>,
    /// `faces[n][i]`: level `n` to level `n - 1` (empty for `n = 0`).
    pub faces: Vec<Vec<DgMap>>,
    /// `degeneracies[n][j]`: level `n` to level `n + 1` (empty at the top).
    pub degeneracies: Vec<Vec<DgMap>>,
}

pub type Cell = (usize, i64, usize);

impl SimplicialDgModule {
    /// The constant simplicial object on `m` through level `top`.
    pub fn constant(m: &DgModule, top: usize) -> Self {
        let id = |src: &DgModule| DgMap {
            source: src.clone(),
            target: src.clone(),
            degree: 0,
            blocks: src.window().degrees().map(|d| (d, SparseMatrix::identity(src.field(), src.dim(d)))).collect(),
        };
        let faces = (0..=top).map(|n| if n == 0 { vec![] } else { (0..=n).map(|_| id(m)).collect() }).collect();
        let degeneracies = (0..=top).map(|n| if n == top { vec![] } else { (0..=n).map(|_| id(m)).collect() }).collect();
        SimplicialDgModule { field: m.field(), levels: vec![m.clone(); top + 1], faces, degeneracies }
    }

    /// Materializes a simplicial object given on keys. Every face and
    /// degeneracy must stay inside the bases.
    pub fn from_simplicial<S: Simplicial>(s: &S) -> Result<Self> {
        let field = s.field();
        let mut keyed = Vec::new();
        for n in 0..=s.top() {
            let basis = s.basis(n);
            let lo = basis.iter().map(|x| s.degree(x)).min().unwrap_or(0);
            let hi = basis.iter().map(|x| s.degree(x)).max().unwrap_or(0);
            let keys: Vec<(S::K, i64)> = basis.iter().map(|x| (x.clone(), s.degree(x))).collect();
            keyed.push(Keyed::build_named(field, DegreeWindow { min: lo - 1, max: hi }, keys, |x| s.diff(x), |x| s.name(x))?);
        }
        let mut faces = Vec::new();
        let mut degeneracies = Vec::new();
        for n in 0..=s.top() {
            let mut f = Vec::new();
            if n >= 1 {
                for i in 0..=n {
                    f.push(keyed[n].map_to(&keyed[n - 1], 0, |x| s.face(i, x))?);
                }
            }
            faces.push(f);
            let mut g = Vec::new();
            if n < s.top() {
                for j in 0..=n {
                    g.push(keyed[n].map_to(&keyed[n + 1], 0, |x| s.degeneracy(j, x))?);
                }
            }
            degeneracies.push(g);
        }
        let levels = keyed.into_iter().map(|k| k.module).collect();
        Ok(SimplicialDgModule { field, levels, faces, degeneracies })
    }

    fn column(&self, m: &DgMap, target_level: usize, x: &Cell) -> LinComb<Cell> {
        let mut out = LinComb::zero(self.field);
        let block = m.block(x.1);
        for (r, c, v) in block.entries() {
            if c == x.2 {
                out.add_term((target_level, x.1, r), v.clone());
            }
        }
        out
    }
}

impl Simplicial for SimplicialDgModule {
    type K = Cell;

    fn field(&self) -> CoeffField {
        self.field
    }

    fn top(&self) -> usize {
        self.levels.len() - 1
    }

    fn basis(&self, n: usize) -> Vec<Cell> {
        let m = &self.levels[n];
        m.window().degrees().flat_map(|d| (0..m.dim(d)).map(move |i| (n, d, i))).collect()
    }

    fn level(&self, x: &Cell) -> usize {
        x.0
    }

    fn degree(&self, x: &Cell) -> i64 {
        x.1
    }

    fn diff(&self, x: &Cell) -> LinComb<Cell> {
        let m = &self.levels[x.0];
        let mut out = LinComb::zero(self.field);
        if !m.window().contains(x.1 - 1) {
            return out;
        }
        for (r, c, v) in m.differential(x.1).entries() {
            if c == x.2 {
                out.add_term((x.0, x.1 - 1, r), v.clone());
            }
        }
        out
    }

    fn face(&self, i: usize, x: &Cell) -> LinComb<Cell> {
        self.column(&self.faces[x.0][i], x.0 - 1, x)
    }

    fn degeneracy(&self, j: usize, x: &Cell) -> LinComb<Cell> {
        self.column(&self.degeneracies[x.0][j], x.0 + 1, x)
    }

    fn name(&self, x: &Cell) -> String {
        format!("{}@{}", self.levels[x.0].names(x.1)[x.2], x.0)
    }
}

/// The simplicial circle `Δ[1]/∂Δ[1]` as a simplicial module. A simplex of
/// level `n` is a monotone sequence `0..01..1` of length `n + 1` given by its
/// number `k` of zeros; the two constant sequences are the basepoint `k = 0`.
#[derive(Clone, Debug)]
pub struct SimplicialCircle {
    field: CoeffField,
    top: usize,
}

impl SimplicialCircle {
    pub fn new(field: CoeffField, top: usize) -> Self {
        SimplicialCircle { field, top }
    }

    fn point(n: usize, k: usize) -> (usize, usize) {
        if k == 0 || k == n + 1 {
            (n, 0)
        } else {
            (n, k)
        }
    }
}

impl Simplicial for SimplicialCircle {
    type K = (usize, usize);

    fn field(&self) -> CoeffField {
        self.field
    }

    fn top(&self) -> usize {
        self.top
    }

    fn basis(&self, n: usize) -> Vec<(usize, usize)> {
        (0..=n).map(|k| (n, k)).collect()
    }

    fn level(&self, x: &(usize, usize)) -> usize {
        x.0
    }

    fn degree(&self, _: &(usize, usize)) -> i64 {
        0
    }

    fn diff(&self, _: &(usize, usize)) -> LinComb<(usize, usize)> {
        LinComb::zero(self.field)
    }

    fn face(&self, i: usize, &(n, k): &(usize, usize)) -> LinComb<(usize, usize)> {
        let k = if k > 0 && i < k { k - 1 } else { k };
        LinComb::basis(self.field, Self::point(n - 1, k))
    }

    fn degeneracy(&self, j: usize, &(n, k): &(usize, usize)) -> LinComb<(usize, usize)> {
        let k = if k > 0 && j < k { k + 1 } else { k };
        LinComb::basis(self.field, Self::point(n + 1, k))
    }

    fn name(&self, &(n, k): &(usize, usize)) -> String {
        if k == 0 {
            format!("*{n}")
        } else {
            format!("σ{n},{k}")
        }
    }
}

/// The levelwise tensor product of two simplicial dg-modules.
pub struct LevelwiseTensor<'a, S, T> {
    pub left: &'a S,
    pub right: &'a T,
}

fn pair_lc<A: Ord + Clone, B: Ord + Clone>(field: CoeffField, x: &LinComb<A>, y: &LinComb<B>, sign: impl Fn(&A, &B) -> i64) -> LinComb<(A, B)> {
    let mut out = LinComb::zero(field);
    for (a, c) in x.iter() {
        for (b, e) in y.iter() {
            out.add_term((a.clone(), b.clone()), &field.sign(sign(a, b)) * &(c * e));
        }
    }
    out
}

impl<S: Simplicial, T: Simplicial> Simplicial for LevelwiseTensor<'_, S, T> {
    type K = (S::K, T::K);

    fn field(&self) -> CoeffField {
        self.left.field()
    }

    fn top(&self) -> usize {
        self.left.top().min(self.right.top())
    }

    fn basis(&self, n: usize) -> Vec<Self::K> {
        let r = self.right.basis(n);
        self.left.basis(n).into_iter().flat_map(|x| r.iter().map(move |y| (x.clone(), y.clone()))).collect()
    }

    fn level(&self, x: &Self::K) -> usize {
        self.left.level(&x.0)
    }

    fn degree(&self, x: &Self::K) -> i64 {
        self.left.degree(&x.0) + self.right.degree(&x.1)
    }

    fn diff(&self, (x, y): &Self::K) -> LinComb<Self::K> {
        let field = self.field();
        let one_x = LinComb::basis(field, x.clone());
        let one_y = LinComb::basis(field, y.clone());
        let mut out = pair_lc(field, &self.left.diff(x), &one_y, |_, _| 0);
        let s = self.left.degree(x);
        out.add_assign(&pair_lc(field, &one_x, &self.right.diff(y), |_, _| s));
        out
    }

    fn face(&self, i: usize, (x, y): &Self::K) -> LinComb<Self::K> {
        pair_lc(self.field(), &self.left.face(i, x), &self.right.face(i, y), |_, _| 0)
    }

    fn degeneracy(&self, j: usize, (x, y): &Self::K) -> LinComb<Self::K> {
        pair_lc(self.field(), &self.left.degeneracy(j, x), &self.right.degeneracy(j, y), |_, _| 0)
    }

    fn name(&self, (x, y): &Self::K) -> String {
        format!("{}⊗{}", self.left.name(x), self.right.name(y))
    }
}

/// The Eilenberg–Mac Lane shuffle map on `x ⊗ y` of levels `p, q`:
/// `Σ sgn(μ,ν) (-1)^{p|y|} s_ν x ⊗ s_μ y` over `(p, q)`-shuffles, where `s_ν`
/// applies the degeneracies indexed by `ν` in increasing order.
pub fn eilenberg_maclane<S: Simplicial, T: Simplicial>(s: &S, t: &T, x: &S::K, y: &T::K) -> LinComb<(S::K, T::K)> {
    let field = s.field();
    let (p, q) = (s.level(x), t.level(y));
    let koszul = p as i64 * t.degree(y);
    let mut out = LinComb::zero(field);
    for mu in shuffles(p, q) {
        let nu: Vec<usize> = (0..p + q).filter(|k| !mu.contains(k)).collect();
        let seq: Vec<usize> = mu.iter().chain(nu.iter()).copied().collect();
        let sign = koszul + perm_parity(&seq) as i64;
        let mut xs = LinComb::basis(field, x.clone());
        for &j in &nu {
            xs = degeneracies(s, j, &xs);
        }
        let mut ys = LinComb::basis(field, y.clone());
        for &j in &mu {
            ys = degeneracies(t, j, &ys);
        }
        out.add_scaled(&pair_lc(field, &xs, &ys, |_, _| 0), &field.sign(sign));
    }
    out
}

/// Checks `D ∘ EM = EM ∘ (D ⊗ 1 + 1 ⊗ D)` on all pairs of basis elements
/// whose levels add up to at most the common top level.
pub fn check_eilenberg_maclane<S: Simplicial, T: Simplicial>(s: &S, t: &T) -> std::result::Result<(), String> {
    let tensor = LevelwiseTensor { left: s, right: t };
    let top = tensor.top();
    let field = s.field();
    let mut pairs = Vec::new();
    for p in 0..=top {
        for q in 0..=top - p {
            for x in s.basis(p) {
                for y in t.basis(q) {
                    pairs.push((x.clone(), y.clone()));
                }
            }
        }
    }
    let em_lc = |l: &LinComb<(S::K, T::K)>| {
        let mut out = LinComb::zero(field);
        for ((x, y), c) in l.iter() {
            out.add_scaled(&eilenberg_maclane(s, t, x, y), c);
        }
        out
    };
    let bad = pairs.par_iter().find_map_first(|(x, y)| {
        let lhs = eilenberg_maclane(s, t, x, y).map_linear(|z| total_differential(&tensor, z));
        let one_x = LinComb::basis(field, x.clone());
        let one_y = LinComb::basis(field, y.clone());
        let mut rhs = em_lc(&pair_lc(field, &total_differential(s, x), &one_y, |_, _| 0));
        let sx = total_degree(s, x);
        rhs.add_assign(&em_lc(&pair_lc(field, &one_x, &total_differential(t, y), |_, _| sx)));
        (lhs != rhs).then(|| format!("EM is not a chain map on {} ⊗ {}", s.name(x), t.name(y)))
    });
    match bad {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// A tuple over `A⁺`: `None` is the unit of the factor.
pub type Slots = Vec<Option<u32>>;

/// The product of two tuples of the same length in `A_1^+ ⊗ .. ⊗ A_n^+`:
/// `(x_1..x_n)(y_1..y_n) = (-1)^{Σ_{k<l} |y_k||x_l|} (x_1y_1, .., x_ny_n)`.
fn slot_product(algs: &[&Algebra], u: &[Option<u32>], v: &[Option<u32>]) -> LinComb<Slots> {
    let field = algs[0].field();
    let deg = |k: usize, x: &Option<u32>| x.map_or(0, |e| algs[k].degree(&e));
    let mut parity = 0i64;
    for k in 0..v.len() {
        for l in k + 1..u.len() {
            parity += deg(k, &v[k]) * deg(l, &u[l]);
        }
    }
    let factors: Vec<LinComb<Option<u32>>> = (0..u.len())
        .map(|k| match (u[k], v[k]) {
            (None, None) => LinComb::basis(field, None),
            (Some(x), None) | (None, Some(x)) => LinComb::basis(field, Some(x)),
            (Some(x), Some(y)) => algs[k].product(x, y).map_linear(|&z| LinComb::basis(field, Some(z))),
        })
        .collect();
    let mut out = LinComb::zero(field);
    let sign = field.sign(parity);
    for (t, c) in expand_product(field, &factors) {
        out.add_term(t, &sign * &c);
    }
    out
}

/// The Koszul differential of a tuple.
fn slot_diff(algs: &[&Algebra], u: &[Option<u32>]) -> LinComb<Slots> {
    let field = algs[0].field();
    let mut out = LinComb::zero(field);
    let mut prefix = 0;
    for (k, x) in u.iter().enumerate() {
        if let Some(e) = x {
            let s = field.sign(prefix);
            for (y, c) in algs[k].diff(e).iter() {
                let mut v = u.to_vec();
                v[k] = Some(*y);
                out.add_term(v, &s * c);
            }
            prefix += algs[k].degree(e);
        }
    }
    out
}

fn slot_name(algs: &[&Algebra], u: &[Option<u32>]) -> String {
    let parts: Vec<String> = u.iter().enumerate().map(|(k, x)| x.map_or("1".into(), |e| algs[k].name(&e))).collect();
    format!("({})", parts.join(","))
}

fn require_commutative(a: &Algebra) -> Result<()> {
    if a.kind() != AlgebraType::Commutative {
        return Err(Error::NotCommutative(format!("the algebra is declared as {}", a.kind())));
    }
    match algebra_diagnostics(a) {
        Ok(()) => Ok(()),
        Err(e) if e.starts_with("commutativity") => Err(Error::NotCommutative(e)),
        Err(e) => Err(Error::AlgebraCheckFailed(e)),
    }
}

/// The coproduct `A ∨ B = A ⊕ B ⊕ A⊗B` of commutative algebras. Basis
/// element `k` is the pair `cells[k]` over `A⁺ × B⁺`.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub algebra: Algebra,
    pub cells: Vec<(Option<u32>, Option<u32>)>,
}

impl Coproduct {
    fn find(&self, cell: (Option<u32>, Option<u32>)) -> u32 {
        self.cells.iter().position(|&c| c == cell).expect("cell of the coproduct") as u32
    }

    /// The injection of the left factor.
    pub fn inl(&self, x: u32) -> u32 {
        self.find((Some(x), None))
    }

    pub fn inr(&self, y: u32) -> u32 {
        self.find((None, Some(y)))
    }

    /// The element `x ⊗ y` of the `A⊗B` summand.
    pub fn pair(&self, x: u32, y: u32) -> u32 {
        self.find((Some(x), Some(y)))
    }

    /// The codiagonal `∇: A ∨ A → A`, on basis elements.
    pub fn codiagonal(&self, a: &Algebra) -> Vec<LinComb<u32>> {
        let field = a.field();
        self.cells
            .iter()
            .map(|c| match *c {
                (Some(x), None) | (None, Some(x)) => LinComb::basis(field, x),
                (Some(x), Some(y)) => a.product(x, y),
                (None, None) => unreachable!("the unit is not a basis element"),
            })
            .collect()
    }
}

pub fn commutative_coproduct(a: &Algebra, b: &Algebra) -> Result<Coproduct> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    require_commutative(a)?;
    require_commutative(b)?;
    let field = a.field();
    let algs = [a, b];
    let mut cells: Vec<(Option<u32>, Option<u32>)> = Vec::new();
    cells.extend(a.elements().into_iter().map(|x| (Some(x), None)));
    cells.extend(b.elements().into_iter().map(|y| (None, Some(y))));
    for x in a.elements() {
        cells.extend(b.elements().into_iter().map(|y| (Some(x), Some(y))));
    }
    let name = |c: &(Option<u32>, Option<u32>)| match *c {
        (Some(x), None) => format!("{}⊗1", a.name(&x)),
        (None, Some(y)) => format!("1⊗{}", b.name(&y)),
        (Some(x), Some(y)) => format!("{}⊗{}", a.name(&x), b.name(&y)),
        (None, None) => "1⊗1".into(),
    };
    let slots = |c: &(Option<u32>, Option<u32>)| vec![c.0, c.1];
    let cell = |v: &Slots| (v[0], v[1]);
    let degree = |c: &(Option<u32>, Option<u32>)| c.0.map_or(0, |x| a.degree(&x)) + c.1.map_or(0, |y| b.degree(&y));
    let basis: Vec<(String, i64)> = cells.iter().map(|c| (name(c), degree(c))).collect();
    let mut diff = Vec::new();
    for c in &cells {
        for (v, e) in slot_diff(&algs, &slots(c)).iter() {
            diff.push((name(c), name(&cell(v)), e.clone()));
        }
    }
    let mut table = Vec::new();
    for u in &cells {
        for v in &cells {
            let p = slot_product(&algs, &slots(u), &slots(v));
            if !p.is_zero() {
                table.push((vec![name(u), name(v)], p.iter().map(|(w, e)| (name(&cell(w)), e.clone())).collect()));
            }
        }
    }
    let lo = basis.iter().map(|b| b.1).min().unwrap_or(0);
    let hi = basis.iter().map(|b| b.1).max().unwrap_or(0);
    let carrier = DgModule::new(field, DegreeWindow { min: lo, max: hi }, basis, diff)?;
    let algebra = Algebra::new(AlgebraType::Commutative, carrier, table)?;
    let by_name: HashMap<String, (Option<u32>, Option<u32>)> = cells.iter().map(|c| (name(c), *c)).collect();
    let cells = algebra.names().iter().map(|n| by_name[n]).collect();
    Ok(Coproduct { algebra, cells })
}

/// Checks that `f` (images of basis elements) commutes with differentials
/// and products.
pub fn algebra_morphism_diagnostics(src: &Algebra, tgt: &Algebra, f: &[LinComb<u32>]) -> std::result::Result<(), String> {
    let apply = |l: &LinComb<u32>| l.map_linear(|x| f[*x as usize].clone());
    for x in src.elements() {
        if apply(&src.diff(&x)) != f[x as usize].map_linear(|y| tgt.diff(y)) {
            return Err(format!("does not commute with δ at {}", src.name(&x)));
        }
        for y in src.elements() {
            let lhs = apply(&src.product(x, y));
            let mut rhs = LinComb::zero(src.field());
            for (u, c) in f[x as usize].iter() {
                for (v, e) in f[y as usize].iter() {
                    rhs.add_scaled(&tgt.product(*u, *v), &(c * e));
                }
            }
            if lhs != rhs {
                return Err(format!("does not preserve the product at ({},{})", src.name(&x), src.name(&y)));
            }
        }
    }
    Ok(())
}

/// The simplicial commutative algebra `C̲(A)` with `C̲(A)_n = A^{∨n}`. Level
/// `n` has the basis of tuples over `A⁺` of length `n`, not all units. The
/// outer faces send a factor to zero, inner faces fold adjacent factors, and
/// degeneracies insert a unit.
#[derive(Clone, Debug)]
pub struct CategoricalBar {
    a: Algebra,
    top: usize,
    /// Bound on total degrees; bases keep one degree of margin on each side.
    window: Option<DegreeWindow>,
}

impl CategoricalBar {
    pub fn new(a: &Algebra, top: usize, window: Option<DegreeWindow>) -> Result<Self> {
        require_commutative(a)?;
        Ok(CategoricalBar { a: a.clone(), top, window })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.a
    }

    fn algs(&self, n: usize) -> Vec<&Algebra> {
        vec![&self.a; n.max(1)]
    }

    /// The levelwise product of two tuples of the same level.
    pub fn product(&self, u: &Slots, v: &Slots) -> LinComb<Slots> {
        debug_assert_eq!(u.len(), v.len());
        slot_product(&self.algs(u.len()), u, v)
    }

    /// The product on normalized chains: the levelwise product after the
    /// Eilenberg–Mac Lane map.
    pub fn em_product(&self, u: &Slots, v: &Slots) -> LinComb<Slots> {
        let mut out = LinComb::zero(self.a.field());
        for ((x, y), c) in eilenberg_maclane(self, self, u, v).iter() {
            out.add_scaled(&self.product(x, y), c);
        }
        out
    }
}

impl Simplicial for CategoricalBar {
    type K = Slots;

    fn field(&self) -> CoeffField {
        self.a.field()
    }

    fn top(&self) -> usize {
        self.top
    }

    fn basis(&self, n: usize) -> Vec<Slots> {
        if n == 0 {
            return Vec::new();
        }
        let elems = self.a.elements();
        let degs: Vec<i64> = elems.iter().map(|x| self.a.degree(x)).collect();
        let lo = degs.iter().copied().min().unwrap_or(0).min(0);
        let hi = degs.iter().copied().max().unwrap_or(0).max(0);
        let target = self.window.map(|w| w.widen(1)).map(|w| (w.min - n as i64, w.max - n as i64));
        let mut out = Vec::new();
        let mut cur: Slots = Vec::with_capacity(n);
        #[allow(clippy::too_many_arguments)]
        fn rec(
            n: usize,
            elems: &[u32],
            degs: &[i64],
            bounds: (i64, i64),
            target: Option<(i64, i64)>,
            sum: i64,
            cur: &mut Slots,
            out: &mut Vec<Slots>,
        ) {
            let left = (n - cur.len()) as i64;
            if let Some((tmin, tmax)) = target {
                if sum + left * bounds.0 > tmax || sum + left * bounds.1 < tmin {
                    return;
                }
            }
            if left == 0 {
                if cur.iter().any(Option::is_some) {
                    out.push(cur.clone());
                }
                return;
            }
            cur.push(None);
            rec(n, elems, degs, bounds, target, sum, cur, out);
            cur.pop();
            for (i, &e) in elems.iter().enumerate() {
                cur.push(Some(e));
                rec(n, elems, degs, bounds, target, sum + degs[i], cur, out);
                cur.pop();
            }
        }
        rec(n, &elems, &degs, (lo, hi), target, 0, &mut cur, &mut out);
        out
    }

    fn level(&self, x: &Slots) -> usize {
        x.len()
    }

    fn degree(&self, x: &Slots) -> i64 {
        x.iter().flatten().map(|e| self.a.degree(e)).sum()
    }

    fn diff(&self, x: &Slots) -> LinComb<Slots> {
        slot_diff(&self.algs(x.len()), x)
    }

    fn face(&self, i: usize, x: &Slots) -> LinComb<Slots> {
        let field = self.field();
        let n = x.len();
        let drop = |k: usize| {
            if x[k].is_some() {
                return LinComb::zero(field);
            }
            let mut v = x.clone();
            v.remove(k);
            if v.iter().all(Option::is_none) {
                LinComb::zero(field)
            } else {
                LinComb::basis(field, v)
            }
        };
        if i == 0 {
            return drop(0);
        }
        if i == n {
            return drop(n - 1);
        }
        let merged: LinComb<Option<u32>> = match (x[i - 1], x[i]) {
            (None, None) => LinComb::basis(field, None),
            (Some(a), None) | (None, Some(a)) => LinComb::basis(field, Some(a)),
            (Some(a), Some(b)) => self.a.product(a, b).map_linear(|&z| LinComb::basis(field, Some(z))),
        };
        merged.map_linear(|m| {
            let mut v = x[..i - 1].to_vec();
            v.push(*m);
            v.extend_from_slice(&x[i + 1..]);
            if v.iter().all(Option::is_none) {
                LinComb::zero(field)
            } else {
                LinComb::basis(field, v)
            }
        })
    }

    fn degeneracy(&self, j: usize, x: &Slots) -> LinComb<Slots> {
        let mut v = x.clone();
        v.insert(j, None);
        LinComb::basis(self.field(), v)
    }

    fn name(&self, x: &Slots) -> String {
        slot_name(&self.algs(x.len()), x)
    }
}

/// The tuple `(a_1, .., a_n)` of a bar word and the sign `(-1)^{Σ_k k|a_k|}`
/// of the identification `B(A) ≅ N_*(C̲(A))`.
pub fn word_to_slots(a: &Algebra, w: &Word<u32>) -> (Slots, i64) {
    let sign = w.0.iter().enumerate().map(|(k, x)| (k as i64 + 1) * a.degree(x)).sum();
    (w.0.iter().map(|&x| Some(x)).collect(), sign)
}

/// `N_*(C̲(A))` for a commutative algebra, built to the weight that makes
/// the comparison with `B(A)` sound on `report`.
pub struct CategoricalBarComplex {
    pub simplicial: CategoricalBar,
    pub normalized: Normalized<Slots>,
    pub report: DegreeWindow,
}

/// `C(A) = N_*(C̲(A))` with homology exact on `window`.
pub fn categorical_bar(a: &Algebra, window: DegreeWindow, weight_bound: Option<usize>) -> Result<CategoricalBarComplex> {
    let need = required_weight(a, window)?;
    let top = weight_bound.unwrap_or(need).max(need);
    let build = window.widen(1);
    let simplicial = CategoricalBar::new(a, top, Some(build))?;
    let normalized = normalize(&simplicial, build)?;
    Ok(CategoricalBarComplex { simplicial, normalized, report: window })
}

/// The outcome of comparing `C(A)` with `B(A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BarComparison {
    pub bar_dims: BTreeMap<i64, usize>,
    pub categorical_dims: BTreeMap<i64, usize>,
    pub chain_map: bool,
    pub isomorphism: bool,
    pub products_checked: usize,
    pub product_failures: Vec<String>,
}

impl BarComparison {
    /// An isomorphism of dg-algebras within the bounds.
    pub fn is_iso(&self) -> bool {
        self.chain_map && self.isomorphism && self.product_failures.is_empty()
    }
}

impl CategoricalBarComplex {
    pub fn homology(&self) -> Result<BTreeMap<i64, usize>> {
        self.normalized.homology(self.report)
    }

    fn phi(&self, w: &Word<u32>) -> LinComb<Slots> {
        let field = self.simplicial.field();
        let (s, sign) = word_to_slots(self.simplicial.algebra(), w);
        LinComb::term(field, s, field.sign(sign))
    }

    /// Compares with `B(A)` built on the same degrees: the map
    /// `[a_1|..|a_n] ↦ ±(a_1, .., a_n)` must be an isomorphism of complexes
    /// and carry the shuffle product to the Eilenberg–Mac Lane product on
    /// every pair of words of weight at most `max_factor_weight` whose
    /// product stays in the window.
    pub fn compare_with_bar(&self, b: &BarComplex<u32>, max_factor_weight: usize) -> Result<BarComparison> {
        let a = self.simplicial.algebra();
        let map = self.normalized.map_from(&b.keyed, |w| self.phi(w))?;
        let window = self.normalized.module.window();
        let words: Vec<(&Word<u32>, i64)> = b.words().filter(|(w, _)| w.weight() <= max_factor_weight).collect();
        let mut pairs = Vec::new();
        for (u, du) in &words {
            for (v, dv) in &words {
                if window.contains(du + dv) && u.weight() + v.weight() <= b.bounds.weight_bound {
                    pairs.push((*u, *v, du + dv));
                }
            }
        }
        let failures: Vec<String> = pairs
            .par_iter()
            .filter_map(|(u, v, d)| {
                let mut lhs = LinComb::zero(a.field());
                for (w, c) in shuffle(a, u, v).iter() {
                    lhs.add_scaled(&self.phi(w), c);
                }
                let rhs = self.phi(u).map_linear(|x| self.phi(v).map_linear(|y| self.simplicial.em_product(x, y)));
                match (self.normalized.reduce(&lhs, *d), self.normalized.reduce(&rhs, *d)) {
                    (Ok(l), Ok(r)) if l == r => None,
                    (Ok(_), Ok(_)) => Some(format!("product of {u:?} and {v:?}")),
                    (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
                }
            })
            .collect();
        Ok(BarComparison {
            bar_dims: b.module().dims(),
            categorical_dims: self.normalized.dims(),
            chain_map: map.is_chain_map(),
            isomorphism: map.is_isomorphism(),
            products_checked: pairs.len(),
            product_failures: failures,
        })
    }
}

/// A basis element of `C̲_R(m)` in level `n`: an `R`-tree on the labels
/// `1..m` and a coloring of the labels by the `n` copies of `I`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Colored {
    pub level: usize,
    pub tree: Tree,
    pub colors: Vec<u32>,
}

/// The arity-`m` component of `C̲_R = R(C̲(I))`: level `n` is the free
/// algebra `R(I^{⊕n})`, faces fold colors and degeneracies add an unused one.
pub struct CategoricalBarModule {
    op: Arc<Operad>,
    arity: usize,
    top: usize,
    trees: Vec<Tree>,
}

impl CategoricalBarModule {
    pub fn new(op: Arc<Operad>, arity: usize, top: usize) -> Result<Self> {
        if arity == 0 || arity > op.arity_bound() {
            return Err(Error::ArityBoundExceeded(format!("arity {arity} with {} built to arity {}", op.name(), op.arity_bound())));
        }
        let trees = op.basis(arity);
        Ok(CategoricalBarModule { op, arity, top, trees })
    }

    /// Normalized chains on all total degrees the component can reach.
    pub fn normalized(&self) -> Result<Normalized<Colored>> {
        let degs: Vec<i64> = self.trees.iter().map(|t| self.op.tree_degree(t)).collect();
        let lo = degs.iter().copied().min().unwrap_or(0);
        let hi = degs.iter().copied().max().unwrap_or(0) + self.top as i64;
        normalize(self, DegreeWindow { min: lo - 1, max: hi + 1 })
    }

    /// Dimensions of level `n` by internal degree.
    pub fn level_dims(&self, n: usize) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for x in self.basis(n) {
            *out.entry(self.degree(&x)).or_insert(0) += 1;
        }
        out
    }
}

impl Simplicial for CategoricalBarModule {
    type K = Colored;

    fn field(&self) -> CoeffField {
        self.op.field()
    }

    fn top(&self) -> usize {
        self.top
    }

    fn basis(&self, n: usize) -> Vec<Colored> {
        let mut colorings: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..self.arity {
            colorings = colorings.into_iter().flat_map(|c| (1..=n as u32).map(move |k| [c.clone(), vec![k]].concat())).collect();
        }
        self.trees
            .iter()
            .flat_map(|t| colorings.iter().map(move |c| Colored { level: n, tree: t.clone(), colors: c.clone() }))
            .collect()
    }

    fn level(&self, x: &Colored) -> usize {
        x.level
    }

    fn degree(&self, x: &Colored) -> i64 {
        self.op.tree_degree(&x.tree)
    }

    fn diff(&self, x: &Colored) -> LinComb<Colored> {
        let d = self.op.differential(&LinComb::basis(self.field(), x.tree.clone()));
        d.map_linear(|t| LinComb::basis(self.field(), Colored { level: x.level, tree: t.clone(), colors: x.colors.clone() }))
    }

    fn face(&self, i: usize, x: &Colored) -> LinComb<Colored> {
        let n = x.level as u32;
        let i = i as u32;
        let field = self.field();
        let colors: Option<Vec<u32>> = if i == 0 {
            (!x.colors.contains(&1)).then(|| x.colors.iter().map(|c| c - 1).collect())
        } else if i == n {
            (!x.colors.contains(&n)).then(|| x.colors.clone())
        } else {
            Some(x.colors.iter().map(|&c| if c > i { c - 1 } else { c }).collect())
        };
        match colors {
            Some(colors) => LinComb::basis(field, Colored { level: x.level - 1, tree: x.tree.clone(), colors }),
            None => LinComb::zero(field),
        }
    }

    fn degeneracy(&self, j: usize, x: &Colored) -> LinComb<Colored> {
        let j = j as u32;
        let colors = x.colors.iter().map(|&c| if c > j { c + 1 } else { c }).collect();
        LinComb::basis(self.field(), Colored { level: x.level + 1, tree: x.tree.clone(), colors })
    }

    fn name(&self, x: &Colored) -> String {
        let colors: Vec<String> = x.colors.iter().map(|c| c.to_string()).collect();
        format!("{}[{}]@{}", self.op.render(&x.tree), colors.join(""), x.level)
    }
}

/// The outcome of comparing `N_*(C̲_Com)(m)` with `B_Com(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleComparison {
    pub arity: usize,
    pub bar_dims: BTreeMap<i64, usize>,
    pub categorical_dims: BTreeMap<i64, usize>,
    pub chain_map: bool,
    pub isomorphism: bool,
}

impl ModuleComparison {
    pub fn is_iso(&self) -> bool {
        self.chain_map && self.isomorphism
    }
}

/// Compares `N_*(C̲_Com)(m)` with the bar module `B_Com(m)` through the map
/// sending a word of corollas to the coloring by letter.
pub fn compare_com_module(field: CoeffField, arity: usize) -> Result<ModuleComparison> {
    let com = Arc::new(Operad::commutative(field, arity.max(2)));
    let k = Arc::new(Operad::stasheff(field, arity.max(2)));
    let eta = OperadMorphism::from_stasheff(k, com.clone())?;
    let bm = BarModule::new(&eta, OperadMorphism::identity(com.clone()), arity)?;
    let cm = CategoricalBarModule::new(com, arity, arity)?;
    let normalized = cm.normalized()?;
    let window = normalized.module.window();
    let bar = Keyed::build_named(field, window, bm.basis(arity), |w| bm.diff(w), |w| format!("{w:?}"))?;
    let corolla = cm.trees[0].clone();
    let map = normalized.map_from(&bar, |w| {
        let mut colors = vec![0u32; arity];
        for (j, t) in w.0.iter().enumerate() {
            for l in t.label_set() {
                colors[l as usize - 1] = j as u32 + 1;
            }
        }
        LinComb::basis(field, Colored { level: w.0.len(), tree: corolla.clone(), colors })
    })?;
    Ok(ModuleComparison {
        arity,
        bar_dims: bar.module.dims().into_iter().filter(|(_, n)| *n > 0).collect(),
        categorical_dims: normalized.dims().into_iter().filter(|(_, n)| *n > 0).collect(),
        chain_map: map.is_chain_map(),
        isomorphism: map.is_isomorphism(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::bar::bar;
    use crate::field::Scalar;
    use crate::sigma::{compose, compose_dims_formula, Component, SigmaModule};

    fn q() -> CoeffField {
        CoeffField::Rationals
    }

    #[test]
    fn coproduct_dimensions_and_codiagonal() {
        let f = q();
        let a = truncated_polynomial(f, 2, 3);
        let b = exterior(f, 3);
        let c = commutative_coproduct(&a, &b).unwrap();
        assert_eq!(c.algebra.dim(), a.dim() + b.dim() + a.dim() * b.dim());
        assert_eq!(algebra_diagnostics(&c.algebra), Ok(()));
        let zero = trivial(f, AlgebraType::Commutative, &[]);
        let az = commutative_coproduct(&a, &zero).unwrap();
        assert_eq!(az.algebra.carrier().dims(), a.carrier().dims());
        let aa = commutative_coproduct(&a, &a).unwrap();
        let nabla = aa.codiagonal(&a);
        assert_eq!(algebra_morphism_diagnostics(&aa.algebra, &a, &nabla), Ok(()));
        let x = a.index("x").unwrap();
        assert_eq!(nabla[aa.pair(x, x) as usize], a.product(x, x));
        assert!(commutative_coproduct(&small_dga(f), &a).is_err());
        assert!(matches!(
            commutative_coproduct(&a, &exterior(CoeffField::Prime(2), 1)),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn categorical_bar_levels_and_identities() {
        for f in [q(), CoeffField::Prime(2), CoeffField::Prime(3)] {
            let a = cdga(f);
            assert_eq!(algebra_diagnostics(&a), Ok(()));
            let cb = CategoricalBar::new(&a, 3, None).unwrap();
            assert!(cb.basis(0).is_empty());
            assert_eq!(cb.basis(1).len(), a.dim());
            assert_eq!(cb.basis(2).len(), (a.dim() + 1).pow(2) - 1);
            check_simplicial(&cb).unwrap();
            let x = a.index("x").unwrap();
            let z = a.index("z").unwrap();
            assert_eq!(cb.face(1, &vec![Some(x), Some(z)]), a.product(x, z).map_linear(|&e| LinComb::basis(f, vec![Some(e)])));
            check_eilenberg_maclane(&cb, &cb).unwrap();
        }
        assert!(matches!(CategoricalBar::new(&small_dga(q()), 2, None), Err(Error::NotCommutative(_))));
    }

    #[test]
    fn broken_faces_are_reported() {
        struct Broken(SimplicialCircle);
        impl Simplicial for Broken {
            type K = (usize, usize);
            fn field(&self) -> CoeffField {
                self.0.field()
            }
            fn top(&self) -> usize {
                self.0.top()
            }
            fn basis(&self, n: usize) -> Vec<Self::K> {
                self.0.basis(n)
            }
            fn level(&self, x: &Self::K) -> usize {
                x.0
            }
            fn degree(&self, _: &Self::K) -> i64 {
                0
            }
            fn diff(&self, _: &Self::K) -> LinComb<Self::K> {
                LinComb::zero(self.field())
            }
            fn face(&self, i: usize, x: &Self::K) -> LinComb<Self::K> {
                self.0.face(if i == 0 && x.0 == 2 { 1 } else { i }, x)
            }
            fn degeneracy(&self, j: usize, x: &Self::K) -> LinComb<Self::K> {
                self.0.degeneracy(j, x)
            }
        }
        let err = normalize(&Broken(SimplicialCircle::new(q(), 3)), DegreeWindow { min: -1, max: 3 }).unwrap_err();
        assert!(matches!(err, Error::SimplicialIdentityViolation(_)), "{err}");
    }

    #[test]
    fn circle_and_constant_objects() {
        let f = q();
        let circle = SimplicialCircle::new(f, 4);
        let n = normalize(&circle, DegreeWindow { min: -1, max: 4 }).unwrap();
        assert_eq!(n.homology(DegreeWindow { min: 0, max: 3 }).unwrap(), BTreeMap::from([(0, 1), (1, 1), (2, 0), (3, 0)]));
        let m = SimplicialDgModule::from_simplicial(&circle).unwrap();
        check_simplicial(&m).unwrap();
        let nm = normalize(&m, DegreeWindow { min: -1, max: 4 }).unwrap();
        assert_eq!(nm.dims(), n.dims());

        let a = small_dga(f);
        let c = SimplicialDgModule::constant(a.carrier(), 3);
        let nc = normalize(&c, DegreeWindow { min: 0, max: 8 }).unwrap();
        let expected: BTreeMap<i64, usize> = (0..=8).map(|d| (d, a.carrier().dims().get(&d).copied().unwrap_or(0))).collect();
        assert_eq!(nc.dims(), expected);
    }

    #[test]
    fn eilenberg_maclane_map() {
        let f = q();
        let circle = SimplicialCircle::new(f, 4);
        check_eilenberg_maclane(&circle, &circle).unwrap();
        // (1,1): two shuffles with opposite signs.
        let s = (1, 1);
        let em = eilenberg_maclane(&circle, &circle, &s, &s);
        let coeffs: Vec<Scalar> = em.iter().map(|(_, c)| c.clone()).collect();
        assert_eq!(coeffs.len(), 2);
        assert_eq!(&coeffs[0] + &coeffs[1], f.zero());
        // A constant factor in level 0 is the canonical identification.
        let k = SimplicialDgModule::constant(small_dga(f).carrier(), 3);
        check_eilenberg_maclane(&k, &circle).unwrap();
        for y in circle.basis(2) {
            let x = (0, 1, 0);
            let em = eilenberg_maclane(&k, &circle, &x, &y);
            assert_eq!(em, LinComb::basis(f, ((2, 1, 0), y)));
        }
        let a = cdga(f);
        let cb = CategoricalBar::new(&a, 3, None).unwrap();
        check_eilenberg_maclane(&cb, &circle).unwrap();
        check_eilenberg_maclane(&k, &cb).unwrap();
    }

    #[test]
    fn trivial_products_give_the_tensor_coalgebra() {
        for f in [q(), CoeffField::Prime(2)] {
            let a = trivial(f, AlgebraType::Commutative, &[1, 2]);
            let w = DegreeWindow::new(0, 8).unwrap();
            let c = categorical_bar(&a, w, None).unwrap();
            let b = bar(&a, w, None).unwrap();
            assert_eq!(c.normalized.dims(), b.module().dims());
        }
    }

    #[test]
    fn categorical_bar_is_the_bar_construction() {
        let cases = [
            (exterior(CoeffField::Prime(2), 1), DegreeWindow { min: 0, max: 10 }),
            (truncated_polynomial(q(), 2, 3), DegreeWindow { min: 0, max: 10 }),
            (cdga(q()), DegreeWindow { min: 0, max: 12 }),
            (cdga(CoeffField::Prime(2)), DegreeWindow { min: 0, max: 12 }),
            (truncated_polynomial(CoeffField::Prime(3), -2, 3), DegreeWindow { min: -7, max: 0 }),
        ];
        for (a, w) in cases {
            let c = categorical_bar(&a, w, None).unwrap();
            let b = bar(&a, w, None).unwrap();
            let cmp = c.compare_with_bar(&b, 3).unwrap();
            assert!(cmp.is_iso(), "{cmp:?}");
            assert!(cmp.products_checked > 0);
            assert_eq!(c.homology().unwrap(), b.homology().unwrap());
        }
    }

    #[test]
    fn categorical_bar_module_levels() {
        let f = q();
        for op in [Operad::associative(f, 3), Operad::commutative(f, 3), Operad::stasheff(f, 3)] {
            let op = Arc::new(op);
            let r = SigmaModule::from_operad(&op, 3).unwrap();
            for n in 1..=3usize {
                let gens = Component {
                    names: (1..=n).map(|k| format!("i{k}")).collect(),
                    degrees: vec![0; n],
                    diff: vec![vec![]; n],
                    swaps: vec![],
                };
                let mut comps: Vec<Component> = (0..=3).map(Component::empty).collect();
                comps[1] = gens;
                let i_n = SigmaModule::new(f, comps).unwrap();
                let free = compose(&r, &i_n).unwrap();
                for m in 1..=3 {
                    let cm = CategoricalBarModule::new(op.clone(), m, 3).unwrap();
                    assert_eq!(cm.level_dims(n), compose_dims_formula(&r, &i_n, m));
                    assert_eq!(cm.level_dims(n), free.dims(m));
                }
            }
            for m in 1..=3 {
                let cm = CategoricalBarModule::new(op.clone(), m, m).unwrap();
                check_simplicial(&cm).unwrap();
                // Degeneracies are split by the adjacent face.
                for n in 0..m {
                    for x in cm.basis(n) {
                        for j in 0..=n {
                            assert_eq!(cm.face(j, &cm.degeneracy(j, &x).iter().next().unwrap().0.clone()), LinComb::basis(f, x.clone()));
                        }
                    }
                }
                cm.normalized().unwrap().module.check_square_zero().unwrap();
            }
        }
        assert!(matches!(CategoricalBarModule::new(Arc::new(Operad::commutative(f, 3)), 4, 4), Err(Error::ArityBoundExceeded(_))));
    }

    #[test]
    fn com_categorical_bar_module_is_the_bar_module() {
        for f in [q(), CoeffField::Prime(2), CoeffField::Prime(3)] {
            for m in 1..=3 {
                let cmp = compare_com_module(f, m).unwrap();
                assert!(cmp.is_iso(), "{cmp:?}");
                assert_eq!(cmp.bar_dims, cmp.categorical_dims);
            }
        }
    }
}
