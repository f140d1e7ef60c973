//! Right modules over an operad in labelled form: the operad `S` itself and
//! the bar module `B_S = B(η*S)`, both restricted along a morphism
//! `ψ: R → S`. Spaces of module morphisms are computed by exact linear solve,
//! which gives a dimension check of the adjunction
//! `Hom_S(ψ_! M, N) ≅ Hom_R(M, ψ* N)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::bar::{bar_differential, enumerate_words, BarBounds, Word};
use crate::dg::{DegreeWindow, Keyed};
use crate::error::{Error, Result};
use crate::field::{CoeffField, Scalar};
use crate::linalg::Echelon;
use crate::lincomb::LinComb;
use crate::modules::{full_mask, FreeAlgebra, Labels};
use crate::operad::{Operad, OperadMorphism};
use crate::tree::{OpId, Tree};

/// A right module over `acting()` with labelled basis elements in each arity.
pub trait RightModule: Sync {
    type K: Clone + Ord + Hash + Send + Sync + fmt::Debug;
    fn field(&self) -> CoeffField;
    fn acting(&self) -> &Arc<Operad>;
    fn arity_bound(&self) -> usize;
    /// Basis of arity `n` with degrees.
    fn basis(&self, n: usize) -> Vec<(Self::K, i64)>;
    fn diff(&self, x: &Self::K) -> LinComb<Self::K>;
    /// Exchanges the labels `a` and `a + 1`.
    fn swap(&self, x: &Self::K, a: u32) -> LinComb<Self::K>;
    /// `x ∘_i r` for a basis tree `r` of the acting operad.
    fn act(&self, x: &Self::K, i: u32, r: &Tree) -> LinComb<Self::K>;
}

/// Shifts the labels above `i` to make room for `t` new inputs at `i`.
fn shift_above(t: &Tree, i: u32, by: u32) -> Tree {
    t.relabel(&|l| if l > i { l + by } else { l })
}

fn swap_labels(t: &Tree, a: u32) -> Tree {
    t.relabel(&|l| if l == a { a + 1 } else if l == a + 1 { a } else { l })
}

/// The operad `S` as a right `R`-module through `ψ: R → S`.
pub struct OperadModule {
    psi: OperadMorphism,
    bound: usize,
}

impl OperadModule {
    pub fn new(psi: OperadMorphism, bound: usize) -> Result<Self> {
        if bound > psi.target.arity_bound() {
            return Err(Error::ArityBoundExceeded(format!("{} is built to arity {}", psi.target.name(), psi.target.arity_bound())));
        }
        Ok(OperadModule { psi, bound })
    }

    /// Restriction along `φ: Q → R`: the action precomposed with `φ`.
    pub fn restrict(&self, phi: &OperadMorphism) -> Result<Self> {
        OperadModule::new(phi.then(&self.psi)?, self.bound)
    }
}

impl RightModule for OperadModule {
    type K = Tree;

    fn field(&self) -> CoeffField {
        self.psi.target.field()
    }

    fn acting(&self) -> &Arc<Operad> {
        &self.psi.source
    }

    fn arity_bound(&self) -> usize {
        self.bound
    }

    fn basis(&self, n: usize) -> Vec<(Tree, i64)> {
        let s = &self.psi.target;
        s.basis(n).into_iter().map(|t| {
            let d = s.tree_degree(&t);
            (t, d)
        }).collect()
    }

    fn diff(&self, x: &Tree) -> LinComb<Tree> {
        self.psi.target.differential(&LinComb::basis(self.field(), x.clone()))
    }

    fn swap(&self, x: &Tree, a: u32) -> LinComb<Tree> {
        let s = &self.psi.target;
        s.normalize_lc(&LinComb::basis(self.field(), swap_labels(x, a)), &|_| 0)
    }

    fn act(&self, x: &Tree, i: u32, r: &Tree) -> LinComb<Tree> {
        let s = &self.psi.target;
        let img = self.psi.apply(r, &|_| 0);
        s.partial_lc(&LinComb::basis(self.field(), x.clone()), i, &img)
    }
}

/// The bar module `B_S(n) = B(η*S)(n)`: bar words of labelled `S`-trees using
/// each label `1..n` once, as a right `R`-module through `ψ: R → S`.
pub struct BarModule {
    eta: OperadMorphism,
    psi: OperadMorphism,
    bound: usize,
    free: Vec<FreeAlgebra<Labels>>,
}

impl BarModule {
    /// `eta: K → S` gives the bar differential and `psi: R → S` the action.
    pub fn new(eta: &OperadMorphism, psi: OperadMorphism, bound: usize) -> Result<Self> {
        if eta.target.name() != psi.target.name() {
            return Err(Error::InvalidMorphism("η and ψ must land in the same operad".into()));
        }
        let field = psi.target.field();
        let free = (0..=bound).map(|n| FreeAlgebra::new(eta, Labels::new(field, n), n.max(1))).collect::<Result<_>>()?;
        Ok(BarModule { eta: eta.clone(), psi, bound, free })
    }

    /// Restriction along `φ: Q → R`: the action precomposed with `φ`.
    pub fn restrict(&self, phi: &OperadMorphism) -> Result<Self> {
        BarModule::new(&self.eta, phi.then(&self.psi)?, self.bound)
    }

    /// The whole complex `B_S(n)`, which is finite in each arity.
    pub fn complex(&self, n: usize) -> Result<Keyed<Word<Tree>>> {
        if n > self.bound {
            return Err(Error::ArityBoundExceeded(format!("arity {n} above the module's bound {}", self.bound)));
        }
        let basis = RightModule::basis(self, n);
        let lo = basis.iter().map(|b| b.1).min().unwrap_or(0);
        let hi = basis.iter().map(|b| b.1).max().unwrap_or(0);
        Keyed::build_named(self.field(), DegreeWindow { min: lo, max: hi }, basis, |w| self.diff(w), |w| format!("{w:?}"))
    }

    /// `H(B_S(n))` in every degree.
    pub fn homology(&self, n: usize) -> Result<BTreeMap<i64, usize>> {
        let c = self.complex(n)?;
        let w = c.module.window();
        c.module.homology(w)
    }

    fn arity_of(w: &Word<Tree>) -> usize {
        w.0.iter().map(|t| t.arity()).sum()
    }
}

impl RightModule for BarModule {
    type K = Word<Tree>;

    fn field(&self) -> CoeffField {
        self.psi.target.field()
    }

    fn acting(&self) -> &Arc<Operad> {
        &self.psi.source
    }

    fn arity_bound(&self) -> usize {
        self.bound
    }

    fn basis(&self, n: usize) -> Vec<(Word<Tree>, i64)> {
        let f = &self.free[n];
        let window = DegreeWindow { min: -(4 * n as i64) - 4, max: 4 * n as i64 + 4 };
        let bounds = BarBounds { window, weight_bound: n, size_bound: Some(n), label_mask: Some(full_mask(n)) };
        enumerate_words(f, &bounds)
    }

    fn diff(&self, x: &Word<Tree>) -> LinComb<Word<Tree>> {
        bar_differential(&self.free[Self::arity_of(x)], x)
    }

    fn swap(&self, x: &Word<Tree>, a: u32) -> LinComb<Word<Tree>> {
        let s = &self.psi.target;
        let field = self.field();
        let letters: Vec<LinComb<Tree>> =
            x.0.iter().map(|t| s.normalize_lc(&LinComb::basis(field, swap_labels(t, a)), &|_| 0)).collect();
        let mut out = LinComb::zero(field);
        for (ts, c) in crate::operad::expand_product(field, &letters) {
            out.add_term(Word(ts), c);
        }
        out
    }

    /// `[t_1|..|t_k] ∘_i r = (-1)^{|r|·Σ_{l>j}(|t_l|+1)} [.. | t_j ∘_i ψ(r) | ..]`
    /// where `t_j` carries the label `i`: `r` enters from the right.
    fn act(&self, x: &Word<Tree>, i: u32, r: &Tree) -> LinComb<Word<Tree>> {
        let s = &self.psi.target;
        let field = self.field();
        let by = r.arity() as u32 - 1;
        let img = self.psi.apply(r, &|_| 0);
        let rdeg = self.psi.source.tree_degree(r);
        let j = x.0.iter().position(|t| t.label_mask() >> i & 1 == 1).expect("label present");
        let after: i64 = x.0[j + 1..].iter().map(|t| s.tree_degree(t) + 1).sum();
        let sign = field.sign(rdeg * after);
        let grafted = s.partial_lc(&LinComb::basis(field, x.0[j].clone()), i, &img);
        let mut out = LinComb::zero(field);
        for (t, c) in grafted.iter() {
            let mut v: Vec<Tree> = x.0.iter().map(|u| shift_above(u, i, by)).collect();
            v[j] = t.clone();
            out.add_term(Word(v), &sign * c);
        }
        out
    }
}

/// Basis trees of the acting operad to test the action with: corollas of
/// its generators.
fn generators(op: &Operad, max_arity: usize) -> Vec<Tree> {
    op.generators().iter().filter(|(_, g)| g.arity <= max_arity).map(|(&o, g)| Tree::corolla(o as OpId, g.arity)).collect()
}

/// Checks `d(x ∘_i r) = dx ∘_i r + (-1)^{|x|} x ∘_i ∂r`, and that the action
/// lands in the basis, through the arity bound.
pub fn check_right_module<M: RightModule>(m: &M) -> std::result::Result<(), String> {
    let r_op = m.acting();
    let field = m.field();
    for n in 1..=m.arity_bound() {
        let basis = m.basis(n);
        for t in 2..=m.arity_bound() + 1 - n {
            let targets: HashMap<M::K, i64> = m.basis(n + t - 1).into_iter().collect();
            for r in r_op.basis(t) {
                let dr = r_op.differential(&LinComb::basis(field, r.clone()));
                for (x, d) in &basis {
                    for i in 1..=n as u32 {
                        let xr = m.act(x, i, &r);
                        if let Some((k, _)) = xr.iter().find(|(k, _)| !targets.contains_key(k)) {
                            return Err(format!("{x:?} ∘_{i} {r:?} leaves the basis at {k:?}"));
                        }
                        let lhs = xr.map_linear(|k| m.diff(k));
                        let mut rhs = m.diff(x).map_linear(|y| m.act(y, i, &r));
                        for (q, c) in dr.iter() {
                            rhs.add_scaled(&m.act(x, i, q), &(c * &field.sign(*d)));
                        }
                        if lhs != rhs {
                            return Err(format!("the differential is not a derivation at {x:?} ∘_{i} {r:?}"));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Dimensions of the spaces of degree-`k` cycles in `Hom(M, N)`: maps with
/// `f(σx) = σf(x)`, `f(x ∘_i r) = f(x) ∘_i r` and `d f = (-1)^k f d`.
pub fn hom_cycle_dims<M, N>(m: &M, n: &N, degrees: std::ops::RangeInclusive<i64>) -> Result<BTreeMap<i64, usize>>
where
    M: RightModule,
    N: RightModule,
{
    if m.field() != n.field() {
        return Err(Error::FieldMismatch(m.field().to_string(), n.field().to_string()));
    }
    if m.acting().name() != n.acting().name() {
        return Err(Error::Invalid(format!("modules over {} and {}", m.acting().name(), n.acting().name())));
    }
    let field = m.field();
    let bound = m.arity_bound().min(n.arity_bound());
    let mb: Vec<Vec<(M::K, i64)>> = (0..=bound).map(|a| if a == 0 { vec![] } else { m.basis(a) }).collect();
    let nb: Vec<Vec<(N::K, i64)>> = (0..=bound).map(|a| if a == 0 { vec![] } else { n.basis(a) }).collect();
    let mut out = BTreeMap::new();
    for k in degrees {
        // Unknowns: (x, y) with deg y = deg x + k.
        let mut unknown: HashMap<(M::K, N::K), usize> = HashMap::new();
        for a in 1..=bound {
            for (x, dx) in &mb[a] {
                for (y, dy) in &nb[a] {
                    if *dy == dx + k {
                        let id = unknown.len();
                        unknown.insert((x.clone(), y.clone()), id);
                    }
                }
            }
        }
        // f(x) as a combination of unknowns per output basis element.
        let f_of = |x: &M::K, dx: i64, a: usize| -> Vec<(N::K, usize)> {
            nb[a].iter().filter(|(_, dy)| *dy == dx + k).map(|(y, _)| (y.clone(), unknown[&(x.clone(), y.clone())])).collect()
        };
        let f_lc = |l: &LinComb<M::K>, a: usize, dx: i64| -> BTreeMap<N::K, BTreeMap<usize, Scalar>> {
            let mut acc: BTreeMap<N::K, BTreeMap<usize, Scalar>> = BTreeMap::new();
            for (x, c) in l.iter() {
                for (y, u) in f_of(x, dx, a) {
                    let e = acc.entry(y).or_default().entry(u).or_insert_with(|| field.zero());
                    *e += c;
                }
            }
            acc
        };
        let mut ech = Echelon::new(field);
        let mut push = |eqs: BTreeMap<N::K, BTreeMap<usize, Scalar>>| {
            for (_, row) in eqs {
                let v: Vec<(usize, Scalar)> = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if !v.is_empty() {
                    ech.insert(&v);
                }
            }
        };
        let sub = |mut a: BTreeMap<N::K, BTreeMap<usize, Scalar>>, b: BTreeMap<N::K, BTreeMap<usize, Scalar>>, s: &Scalar| {
            for (y, row) in b {
                let e = a.entry(y).or_default();
                for (u, c) in row {
                    let x = e.entry(u).or_insert_with(|| field.zero());
                    *x += &(s * &c);
                }
            }
            a
        };
        // Applies a map of N to f(x) expressed through unknowns.
        let push_forward = |fx: Vec<(N::K, usize)>, g: &dyn Fn(&N::K) -> LinComb<N::K>| {
            let mut acc: BTreeMap<N::K, BTreeMap<usize, Scalar>> = BTreeMap::new();
            for (y, u) in fx {
                for (z, c) in g(&y).iter() {
                    let e = acc.entry(z.clone()).or_default().entry(u).or_insert_with(|| field.zero());
                    *e += c;
                }
            }
            acc
        };
        let minus = -field.one();
        for a in 1..=bound {
            for (x, dx) in &mb[a] {
                // Chain condition.
                let lhs = push_forward(f_of(x, *dx, a), &|y| n.diff(y));
                let rhs = f_lc(&m.diff(x), a, dx - 1);
                push(sub(lhs, rhs, &(&minus * &field.sign(k))));
                // Equivariance.
                for s in 1..a as u32 {
                    let lhs = f_lc(&m.swap(x, s), a, *dx);
                    let rhs = push_forward(f_of(x, *dx, a), &|y| n.swap(y, s));
                    push(sub(lhs, rhs, &minus));
                }
                // Compatibility with the action of generators.
                for r in generators(m.acting(), bound + 1 - a) {
                    let t = r.arity();
                    let rdeg = m.acting().tree_degree(&r);
                    for i in 1..=a as u32 {
                        let lhs = f_lc(&m.act(x, i, &r), a + t - 1, dx + rdeg);
                        let rhs = push_forward(f_of(x, *dx, a), &|y| n.act(y, i, &r));
                        push(sub(lhs, rhs, &minus));
                    }
                }
            }
        }
        out.insert(k, unknown.len() - ech.rank());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoeffField {
        CoeffField::Rationals
    }

    #[test]
    fn bar_modules_are_right_modules() {
        for f in [q(), CoeffField::Prime(3)] {
            let k = Arc::new(Operad::stasheff(f, 4));
            let as_ = Arc::new(Operad::associative(f, 4));
            let com = Arc::new(Operad::commutative(f, 4));
            for s in [k.clone(), as_, com] {
                let eta = OperadMorphism::from_stasheff(k.clone(), s.clone()).unwrap();
                let b = BarModule::new(&eta, OperadMorphism::identity(s.clone()), 4).unwrap();
                assert_eq!(check_right_module(&b), Ok(()), "B_{}", s.name());
                let o = OperadModule::new(OperadMorphism::identity(s.clone()), 4).unwrap();
                assert_eq!(check_right_module(&o), Ok(()), "{}", s.name());
            }
        }
    }

    #[test]
    fn bar_module_homology() {
        // B_R(n) is the multilinear part of the bar construction of a free
        // R-algebra. Free associative algebras have no higher Tor, while
        // Tor over a free commutative algebra is exterior on the suspended
        // generators: one class in degree n.
        for f in [q(), CoeffField::Prime(2)] {
            let k = Arc::new(Operad::stasheff(f, 4));
            for op in [k.clone(), Arc::new(Operad::associative(f, 4)), Arc::new(Operad::commutative(f, 4))] {
                let eta = OperadMorphism::from_stasheff(k.clone(), op.clone()).unwrap();
                let b = BarModule::new(&eta, OperadMorphism::identity(op.clone()), 4).unwrap();
                for n in 1..=4 {
                    let h: Vec<(i64, usize)> = b.homology(n).unwrap().into_iter().filter(|(_, d)| *d > 0).collect();
                    let want = if n == 1 || op.name() == "Com" { vec![(n as i64, 1)] } else { vec![] };
                    assert_eq!(h, want, "B_{} arity {n} over {f}", op.name());
                }
            }
        }
    }

    #[test]
    fn adjunction_dimensions() {
        let k = Arc::new(Operad::stasheff(q(), 4));
        let as_ = Arc::new(Operad::associative(q(), 4));
        let com = Arc::new(Operad::commutative(q(), 4));
        let eps = OperadMorphism::epsilon(k.clone(), as_.clone()).unwrap();
        let alpha = OperadMorphism::alpha(as_.clone(), com.clone()).unwrap();
        let to_com = OperadMorphism::from_stasheff(k.clone(), com.clone()).unwrap();
        // M = B_K with ψ_! B_K = B_As; N = As.
        let bk = BarModule::new(&OperadMorphism::identity(k.clone()), OperadMorphism::identity(k.clone()), 3).unwrap();
        let bas = BarModule::new(&eps, OperadMorphism::identity(as_.clone()), 3).unwrap();
        let n_s = OperadModule::new(OperadMorphism::identity(as_.clone()), 3).unwrap();
        let n_r = n_s.restrict(&eps).unwrap();
        let lhs = hom_cycle_dims(&bas, &n_s, -3..=0).unwrap();
        let rhs = hom_cycle_dims(&bk, &n_r, -3..=0).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs.values().any(|&d| d > 0));
        // M = B_As with ψ_! B_As = B_Com; N = Com.
        let bcom = BarModule::new(&to_com, OperadMorphism::identity(com.clone()), 3).unwrap();
        let bas_r = BarModule::new(&eps, OperadMorphism::identity(as_.clone()), 3).unwrap();
        let nc = OperadModule::new(OperadMorphism::identity(com.clone()), 3).unwrap();
        let nc_r = nc.restrict(&alpha).unwrap();
        assert_eq!(hom_cycle_dims(&bcom, &nc, -3..=0).unwrap(), hom_cycle_dims(&bas_r, &nc_r, -3..=0).unwrap());
        // Restriction along the identity changes nothing.
        let same = n_s.restrict(&OperadMorphism::identity(as_.clone())).unwrap();
        assert_eq!(hom_cycle_dims(&bas, &same, -3..=0).unwrap(), lhs);
    }
}
