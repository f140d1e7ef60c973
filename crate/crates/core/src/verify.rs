//! Cross-module identity suites. Each check is exact and deterministic; the
//! randomized ones draw their fixtures from a seed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{algebra_diagnostics, diff_lc, fixtures, mu_lc, Algebra, AlgebraType, KAlgebra};
use crate::bar::{
    bar, bar_raw, check_square_zero, iterated_bar, shuffle, shuffle_derivation_holds, word_name, BarBounds,
    ShuffleAlgebra, Word,
};
use crate::catbar::{
    categorical_bar, check_eilenberg_maclane, compare_com_module, CategoricalBar, SimplicialCircle, SimplicialDgModule,
};
use crate::cochains::{bar_of_cochains, models};
use crate::dg::DegreeWindow;
use crate::error::Error;
use crate::field::CoeffField;
use crate::lincomb::LinComb;
use crate::modules::{full_mask, AlgebraOver, FreeAlgebra, Labels, OperadThrough};
use crate::operad::{check_operad, morphism_diagnostics, Operad, OperadMorphism};
use crate::relative::{RelativeComposition, WordShape};
use crate::right::{check_right_module, BarModule};
use crate::sigma::{
    compose, compose_dims_bruteforce, compose_dims_formula, random_sparse, sigma_tensor, tensor_dims_bruteforce,
    tensor_dims_formula,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Stasheff,
    BarDifferential,
    BarModule,
    Sym,
    Extension,
    CommutativeIdentity,
    EilenbergMacLane,
    Shuffle,
    SigmaOracles,
    LoopSpace,
    All,
}

impl Suite {
    pub const NAMES: [(&'static str, Suite); 11] = [
        ("stasheff", Suite::Stasheff),
        ("bar-differential", Suite::BarDifferential),
        ("bar-module", Suite::BarModule),
        ("sym", Suite::Sym),
        ("extension", Suite::Extension),
        ("commutative-identity", Suite::CommutativeIdentity),
        ("eilenberg-maclane", Suite::EilenbergMacLane),
        ("shuffle", Suite::Shuffle),
        ("sigma-oracles", Suite::SigmaOracles),
        ("loop-space", Suite::LoopSpace),
        ("all", Suite::All),
    ];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::NAMES.iter().find(|(n, _)| *n == s).map(|(_, v)| *v).ok_or_else(|| {
            let known: Vec<&str> = Suite::NAMES.iter().map(|(n, _)| *n).collect();
            Error::Invalid(format!("unknown suite `{s}` (known: {})", known.join(", ")))
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = Suite::NAMES.iter().find(|(_, v)| v == self).map(|(n, _)| *n).unwrap_or("?");
        f.write_str(name)
    }
}

/// Parameters shared by the suites; `None` selects each suite's default.
#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyOptions {
    pub field: Option<CoeffField>,
    pub arity: Option<usize>,
    pub max_degree: Option<i64>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub reference: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

type Outcome = std::result::Result<(), String>;

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    fn record(&mut self, name: String, reference: &str, outcome: Outcome) {
        self.checks.push(Check {
            suite: self.suite.to_string(),
            name,
            reference: reference.into(),
            passed: outcome.is_ok(),
            failure: outcome.err(),
        });
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn fields(opts: &VerifyOptions, default: &[CoeffField]) -> Vec<CoeffField> {
    opts.field.map_or_else(|| default.to_vec(), |f| vec![f])
}

const Q: CoeffField = CoeffField::Rationals;
const F2: CoeffField = CoeffField::Prime(2);

/// Runs a suite (or all of them) and returns one entry per identity checked.
pub fn run(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    if suite == Suite::All {
        return Suite::NAMES.iter().filter(|(_, s)| *s != Suite::All).flat_map(|(_, s)| run(*s, opts)).collect();
    }
    let mut r = Recorder { suite, checks: Vec::new() };
    match suite {
        Suite::Stasheff => stasheff(&mut r, opts),
        Suite::BarDifferential => bar_differential(&mut r, opts),
        Suite::BarModule => bar_module(&mut r, opts),
        Suite::Sym => sym(&mut r, opts),
        Suite::Extension => extension(&mut r, opts),
        Suite::CommutativeIdentity => commutative_identity(&mut r, opts),
        Suite::EilenbergMacLane => eilenberg_maclane(&mut r, opts),
        Suite::Shuffle => shuffle_suite(&mut r, opts),
        Suite::SigmaOracles => sigma_oracles(&mut r, opts),
        Suite::LoopSpace => loop_space(&mut r, opts),
        Suite::All => unreachable!(),
    }
    r.checks
}

/// `∂² = 0` on every planar tree of `K(n)`; other trees are permutations of these.
pub fn stasheff_square_zero(k: &Operad, n: usize) -> Outcome {
    let f = k.field();
    for t in k.planar_basis(n) {
        let b = LinComb::basis(f, t.clone());
        if !k.differential(&k.differential(&b)).is_zero() {
            return Err(format!("∂² ≠ 0 on {}", k.render(&t)));
        }
    }
    Ok(())
}

fn stasheff(r: &mut Recorder, opts: &VerifyOptions) {
    let n = opts.arity.unwrap_or(7).max(2);
    for f in fields(opts, &[Q]) {
        let k = Arc::new(Operad::stasheff(f, n));
        for m in 2..=n {
            r.record(format!("∂² = 0 on K({m}) over {f}"), "§2.1.1", stasheff_square_zero(&k, m));
        }
        let axioms = n.min(4);
        r.record(format!("K is a dg operad through arity {axioms} over {f}"), "§2.1.1", check_operad(&k, axioms));
        let as_ = Arc::new(Operad::associative(f, n));
        let eps = OperadMorphism::epsilon(k.clone(), as_).map_err(err);
        r.record(
            format!("ε: K → As is a dg operad morphism through arity {n} over {f}"),
            "§2.1.1",
            eps.and_then(|e| morphism_diagnostics(&e, n)),
        );
    }
}

/// `(δ+∂)² = 0` on the bar module `B_R(n)` of `R` over `K → R`.
pub fn bar_module_square_zero(r: &Arc<Operad>, n: usize, max_degree: i64) -> Outcome {
    let field = r.field();
    let k = Arc::new(Operad::stasheff(field, n.max(2)));
    let eta = OperadMorphism::from_stasheff(k, r.clone()).map_err(err)?;
    let free = FreeAlgebra::new(&eta, Labels::new(field, n), n).map_err(err)?;
    let window = DegreeWindow::new(-1, max_degree.max(0)).map_err(err)?;
    let bounds = BarBounds { window, weight_bound: n, size_bound: Some(n), label_mask: Some(full_mask(n)) };
    let b = bar_raw(&free, bounds).map_err(err)?;
    check_square_zero(&free, &b)
}

fn bar_differential(r: &mut Recorder, opts: &VerifyOptions) {
    let w = DegreeWindow { min: -opts.max_degree.unwrap_or(12).abs(), max: opts.max_degree.unwrap_or(12).abs() };
    for f in fields(opts, &[F2, Q]) {
        for i in 0..10 {
            let seed = opts.seed.wrapping_add(i);
            let a = fixtures::random_dga(f, seed, false);
            let outcome = bar(&a, w, None).map_err(err).and_then(|b| check_square_zero(&a, &b));
            r.record(
                format!("(δ+∂)² = 0 on B(A) for random dga seed {seed} (dim {}) over {f} on [{}, {}]", a.dim(), w.min, w.max),
                "§2.1.2",
                outcome,
            );
        }
    }
    let n = opts.arity.unwrap_or(4);
    for f in fields(opts, &[Q, F2]) {
        let k = Arc::new(Operad::stasheff(f, n.max(2)));
        r.record(format!("(δ+∂)² = 0 on B_K through arity {n} over {f}"), "§2.4", bar_module_square_zero_upto(&k, n, 2 * n as i64 + 1));
    }
}

fn bar_module_square_zero_upto(op: &Arc<Operad>, n: usize, max_degree: i64) -> Outcome {
    (1..=n).try_for_each(|m| bar_module_square_zero(op, m, max_degree).map_err(|e| format!("arity {m}: {e}")))
}

fn bar_module(r: &mut Recorder, opts: &VerifyOptions) {
    let n = opts.arity.unwrap_or(4).max(1);
    let d = opts.max_degree.unwrap_or(2 * n as i64 + 1);
    for f in fields(opts, &[Q]) {
        let k = Arc::new(Operad::stasheff(f, n.max(2)));
        let operads = [k.clone(), Arc::new(Operad::associative(f, n.max(2))), Arc::new(Operad::commutative(f, n.max(2)))];
        for op in &operads {
            let name = op.name().to_string();
            r.record(
                format!("(δ+∂)² = 0 on B_{name} through arity {n}, degrees ≤ {d}, over {f}"),
                "§2.4",
                bar_module_square_zero_upto(op, n, d),
            );
            let module = OperadMorphism::from_stasheff(k.clone(), op.clone())
                .and_then(|eta| BarModule::new(&eta, OperadMorphism::identity(op.clone()), n))
                .map_err(err);
            r.record(
                format!("B_{name} is a right dg {name}-module through arity {n} over {f}"),
                "§2.4",
                module.and_then(|m| check_right_module(&m)),
            );
        }
    }
}

/// `Sym_R(B_R, A) ≅ B(A)`: the coequalizer of the free construction is
/// compared with the bar complex by an explicit basis-level map.
pub fn sym_bar_iso(r: &Arc<Operad>, a: &Algebra, weight: usize, window: DegreeWindow) -> Outcome {
    crate::algebra::validate_algebra(a).map_err(err)?;
    let f = r.field();
    let k = Arc::new(Operad::stasheff(f, r.arity_bound()));
    let eta = OperadMorphism::from_stasheff(k, r.clone()).map_err(err)?;
    let over = AlgebraOver::new(a.clone(), r.clone()).map_err(err)?;
    let rc = RelativeComposition::new(&eta, over, WordShape::bar(weight), window, weight, None).map_err(err)?;
    let target = WordShape::bar(weight).complex(a, window, Some(weight), None).map_err(err)?;
    let cmp = rc.compare(a, &target).map_err(err)?;
    if !cmp.is_iso() {
        return Err(cmp.failures.join("; "));
    }
    if cmp.quotient != cmp.target {
        return Err(format!("dimensions differ: {:?} vs {:?}", cmp.quotient, cmp.target));
    }
    if cmp.target.values().sum::<usize>() == 0 {
        return Err("the window holds no bar words, so the comparison is vacuous".into());
    }
    Ok(())
}

fn sym(r: &mut Recorder, opts: &VerifyOptions) {
    let max = opts.max_degree.unwrap_or(8);
    for f in fields(opts, &[Q]) {
        let (k, as_, com) =
            (Arc::new(Operad::stasheff(f, 4)), Arc::new(Operad::associative(f, 4)), Arc::new(Operad::commutative(f, 4)));
        let cases: [(&Arc<Operad>, Algebra, usize); 6] = [
            (&as_, fixtures::small_dga(f), 3),
            (&as_, fixtures::truncated_polynomial(f, 2, 3).with_kind(AlgebraType::Associative), 3),
            (&com, fixtures::exterior(f, 2), 3),
            (&com, fixtures::truncated_polynomial(f, 2, 3), 3),
            (&k, fixtures::exterior(f, 1).with_kind(AlgebraType::AInfinity), 3),
            (&k, fixtures::small_dga(f).with_kind(AlgebraType::AInfinity), 3),
        ];
        for (op, a, weight) in cases {
            let w = DegreeWindow { min: 0, max: max.max(1) };
            let names = a.names().join(",");
            r.record(
                format!("Sym_{}(B_{}, A) ≅ B(A) for A = ⟨{names}⟩ over {f} on [0, {}]", op.name(), op.name(), w.max),
                "§2.4",
                sym_bar_iso(op, &a, weight, w),
            );
        }
    }
}

/// `B_R ∘_R S ≅ B_S` in arity `n` along `ψ: R → S`, where `eta: K → R`.
pub fn extension_iso(eta: &OperadMorphism, psi: &OperadMorphism, target_eta: &OperadMorphism, n: usize) -> Outcome {
    let f = psi.source.field();
    let w = DegreeWindow { min: 0, max: 3 * n as i64 + 1 };
    let mask = Some(full_mask(n));
    let rc = RelativeComposition::new(eta, OperadThrough::new(psi.clone(), n), WordShape::bar(n), w, n, mask).map_err(err)?;
    let b = FreeAlgebra::new(target_eta, Labels::new(f, n), n).map_err(err)?;
    let target = WordShape::bar(n).complex(&b, w, Some(n), mask).map_err(err)?;
    let cmp = rc.compare(&b, &target).map_err(err)?;
    if !cmp.is_iso() {
        return Err(cmp.failures.join("; "));
    }
    Ok(())
}

fn extension(r: &mut Recorder, opts: &VerifyOptions) {
    let n = opts.arity.unwrap_or(3).max(1);
    for f in fields(opts, &[Q]) {
        let bound = n.max(2);
        let (k, as_, com) =
            (Arc::new(Operad::stasheff(f, bound)), Arc::new(Operad::associative(f, bound)), Arc::new(Operad::commutative(f, bound)));
        let morphisms = (|| {
            Ok::<_, Error>((
                OperadMorphism::identity(k.clone()),
                OperadMorphism::epsilon(k.clone(), as_.clone())?,
                OperadMorphism::alpha(as_.clone(), com.clone())?,
                OperadMorphism::from_stasheff(k.clone(), com.clone())?,
            ))
        })();
        let (id, eps, alpha, to_com) = match morphisms {
            Ok(m) => m,
            Err(e) => {
                r.record("built-in operad morphisms".into(), "§2.1.1", Err(err(e)));
                continue;
            }
        };
        for m in 1..=n {
            r.record(format!("B_K ∘_K As ≅ B_As in arity {m} over {f}"), "§2.4 ψ_♭", extension_iso(&id, &eps, &eps, m));
            r.record(format!("B_As ∘_As Com ≅ B_Com in arity {m} over {f}"), "§2.4 ψ_♭", extension_iso(&eps, &alpha, &to_com, m));
        }
    }
}

/// `B(A) ≅ N_*(C̲(A))` as dg-algebras on `window`.
pub fn categorical_identity(a: &Algebra, window: DegreeWindow) -> Outcome {
    let c = categorical_bar(a, window, None).map_err(err)?;
    let b = bar(a, window, None).map_err(err)?;
    let cmp = c.compare_with_bar(&b, 3).map_err(err)?;
    if !cmp.is_iso() {
        return Err(format!(
            "chain map: {}, isomorphism: {}, product failures: {:?}",
            cmp.chain_map, cmp.isomorphism, cmp.product_failures
        ));
    }
    if cmp.products_checked == 0 {
        return Err("no products were compared".into());
    }
    Ok(())
}

fn commutative_identity(r: &mut Recorder, opts: &VerifyOptions) {
    let d = opts.max_degree.unwrap_or(10).abs();
    let w = DegreeWindow { min: -d, max: d };
    for f in fields(opts, &[Q, F2]) {
        for a in [fixtures::exterior(f, 1), fixtures::cdga(f)] {
            r.record(
                format!("B(A) ≅ N_*(C̲(A)) as dg-algebras for A = ⟨{}⟩ over {f} on [{}, {}]", a.names().join(","), w.min, w.max),
                "Lemma 5.1, §4.1.3",
                categorical_identity(&a, w),
            );
        }
        let n = opts.arity.unwrap_or(3);
        for m in 1..=n {
            let outcome = compare_com_module(f, m).map_err(err).and_then(|c| {
                if c.is_iso() && c.bar_dims == c.categorical_dims {
                    Ok(())
                } else {
                    Err(format!("{c:?}"))
                }
            });
            r.record(format!("N_*(C̲_Com)({m}) ≅ B_Com({m}) over {f}"), "Lemma 5.1, Lemma 4.3.B", outcome);
        }
    }
}

fn eilenberg_maclane(r: &mut Recorder, opts: &VerifyOptions) {
    for f in fields(opts, &[Q, F2]) {
        let circle = SimplicialCircle::new(f, 4);
        r.record(format!("EM: C(S¹) ⊗ C(S¹) → C(S¹ × S¹) is a chain map over {f}"), "§4.1.3", check_eilenberg_maclane(&circle, &circle));
        let constant = SimplicialDgModule::constant(fixtures::small_dga(f).carrier(), 3);
        r.record(format!("EM with a constant factor is a chain map over {f}"), "§4.1.3", check_eilenberg_maclane(&constant, &circle));
        let outcome = CategoricalBar::new(&fixtures::cdga(f), 3, None)
            .map_err(err)
            .and_then(|cb| check_eilenberg_maclane(&cb, &circle).and_then(|_| check_eilenberg_maclane(&cb, &cb)));
        r.record(format!("EM on the categorical bar construction is a chain map over {f}"), "§4.1.3", outcome);
    }
}

/// The shuffle product computed by the recursion
/// `[a|u] ⧢ [b|v] = [a|(u ⧢ [b|v])] ± [b|([a|u] ⧢ v)]`, independent of
/// the permutation enumeration in `bar::shuffle`.
pub fn shuffle_oracle<A: KAlgebra>(a: &A, u: &[A::E], v: &[A::E]) -> LinComb<Word<A::E>> {
    let field = a.field();
    if u.is_empty() || v.is_empty() {
        let w: Vec<A::E> = u.iter().chain(v).cloned().collect();
        return LinComb::basis(field, Word(w));
    }
    let sdeg = |x: &A::E| a.degree(x) + 1;
    let mut out = LinComb::zero(field);
    for (w, c) in shuffle_oracle(a, &u[1..], v).iter() {
        let mut x = vec![u[0].clone()];
        x.extend(w.0.iter().cloned());
        out.add_term(Word(x), c.clone());
    }
    let past: i64 = u.iter().map(sdeg).sum();
    let sign = field.sign(sdeg(&v[0]) * past);
    for (w, c) in shuffle_oracle(a, u, &v[1..]).iter() {
        let mut x = vec![v[0].clone()];
        x.extend(w.0.iter().cloned());
        out.add_term(Word(x), c * &sign);
    }
    out
}

/// Commutativity, associativity and the derivation identity of the shuffle
/// product on the words of `B(A)` in `window`, and equality of the product
/// installed on `B(A)` with the independent oracle.
pub fn shuffle_identities(a: &Algebra, window: DegreeWindow) -> Outcome {
    let b = bar(a, window, None).map_err(err)?;
    let words: Vec<(Word<u32>, i64)> = b.words().map(|(w, d)| (w.clone(), d)).collect();
    let field = a.field();
    let small: Vec<&(Word<u32>, i64)> = words.iter().filter(|(w, _)| w.weight() <= 2).collect();
    for (u, du) in &small {
        for (v, dv) in &small {
            let uv = shuffle(a, u, v);
            let vu = shuffle(a, v, u).scaled(&field.sign(du * dv));
            if uv != vu {
                return Err(format!("graded commutativity fails at ({}, {})", word_name(a, &u.0), word_name(a, &v.0)));
            }
            if !shuffle_derivation_holds(a, u, v) {
                return Err(format!("derivation identity fails at ({}, {})", word_name(a, &u.0), word_name(a, &v.0)));
            }
            for (x, _) in small.iter().filter(|(w, _)| w.weight() == 1) {
                let x1 = LinComb::basis(field, x.clone());
                let left = crate::bar::shuffle_lc(a, &uv, &x1);
                let right = crate::bar::shuffle_lc(a, &LinComb::basis(field, u.clone()), &shuffle(a, v, x));
                if left != right {
                    return Err(format!(
                        "associativity fails at ({}, {}, {})",
                        word_name(a, &u.0),
                        word_name(a, &v.0),
                        word_name(a, &x.0)
                    ));
                }
            }
        }
    }
    // The product installed on B(A) against the oracle, entry by entry.
    let installed = ShuffleAlgebra::new(a, b.clone(), window).to_algebra().map_err(err)?;
    let by_name: BTreeMap<String, Word<u32>> = words.iter().map(|(w, _)| (word_name(a, &w.0), w.clone())).collect();
    let word_of = |i: u32| by_name[&installed.names()[i as usize]].clone();
    for i in 0..installed.dim() as u32 {
        for j in 0..installed.dim() as u32 {
            let (u, v) = (word_of(i), word_of(j));
            let mut expected = LinComb::zero(field);
            for (w, c) in shuffle_oracle(a, &u.0, &v.0).iter() {
                if let Some(k) = installed.index(&word_name(a, &w.0)) {
                    expected.add_term(k, c.clone());
                }
            }
            if installed.product(i, j) != expected {
                return Err(format!("installed product differs from the oracle at ({}, {})", word_name(a, &u.0), word_name(a, &v.0)));
            }
        }
    }
    truncated_dga_identities(&installed).map_err(|e| format!("B(A) with the shuffle product: {e}"))
}

/// Leibniz, associativity and graded commutativity of a window truncation,
/// checked wherever the untruncated product stays inside the window. Past
/// the top degree the truncation drops `u·v` but keeps `δ(u)·v`.
fn truncated_dga_identities(a: &Algebra) -> Outcome {
    let field = a.field();
    let top = a.carrier().window().max;
    let n = a.dim() as u32;
    let deg = |x: u32| a.degree(&x);
    let basis = |x: u32| LinComb::basis(field, x);
    let name = |xs: &[u32]| xs.iter().map(|x| a.name(x)).collect::<Vec<_>>().join(",");
    for x in 0..n {
        for y in 0..n {
            let s = field.sign(deg(x) * deg(y));
            if a.mu(&[x, y]) != a.mu(&[y, x]).scaled(&s) {
                return Err(format!("commutativity at ({})", name(&[x, y])));
            }
            if deg(x) + deg(y) > top {
                continue;
            }
            let lhs = diff_lc(a, &a.mu(&[x, y]));
            let mut rhs = mu_lc(a, &[a.diff(&x), basis(y)]);
            rhs.add_scaled(&mu_lc(a, &[basis(x), a.diff(&y)]), &field.sign(deg(x)));
            if lhs != rhs {
                return Err(format!("Leibniz rule at ({})", name(&[x, y])));
            }
            for z in 0..n {
                if deg(x) + deg(y) + deg(z) > top {
                    continue;
                }
                if mu_lc(a, &[a.mu(&[x, y]), basis(z)]) != mu_lc(a, &[basis(x), a.mu(&[y, z])]) {
                    return Err(format!("associativity at ({})", name(&[x, y, z])));
                }
            }
        }
    }
    Ok(())
}

/// Largest `d' ≤ d` whose bar complex on `[0, d']` (or `[-d', 0]`) has at
/// most `cap` words, keeping the cubic table checks tractable.
fn shuffle_window(a: &Algebra, positive: bool, d: i64, cap: usize) -> DegreeWindow {
    let window = |d: i64| if positive { DegreeWindow { min: 0, max: d } } else { DegreeWindow { min: -d, max: 0 } };
    (1..=d)
        .rev()
        .map(window)
        .find(|w| bar(a, *w, None).map(|b| b.words().count() <= cap).unwrap_or(false))
        .unwrap_or_else(|| window(1))
}

fn shuffle_suite(r: &mut Recorder, opts: &VerifyOptions) {
    let d = opts.max_degree.unwrap_or(8).abs();
    for f in fields(opts, &[Q, F2]) {
        for i in 0..10 {
            let seed = opts.seed.wrapping_add(i);
            let a = fixtures::random_dga(f, seed, true);
            let positive = KAlgebra::elements(&a).iter().all(|x| a.degree(x) > 0);
            let w = shuffle_window(&a, positive, d, 160);
            r.record(
                format!("shuffle identities on B(A) for commutative seed {seed} (dim {}) over {f} on [{}, {}]", a.dim(), w.min, w.max),
                "§3.1.A, Theorem 3.B(2)",
                shuffle_identities(&a, w),
            );
        }
    }
}

fn sigma_oracles(r: &mut Recorder, opts: &VerifyOptions) {
    let n = opts.arity.unwrap_or(4);
    for f in fields(opts, &[Q]) {
        for i in 0..20 {
            let seed = opts.seed.wrapping_add(i);
            let m = random_sparse(f, n, seed);
            let p = random_sparse(f, n, seed.wrapping_add(1000));
            let outcome = (|| {
                let t = sigma_tensor(&m, &p).map_err(err)?;
                let c = compose(&m, &p).map_err(err)?;
                let nonzero = |d: BTreeMap<i64, usize>| d.into_iter().filter(|(_, v)| *v > 0).collect::<BTreeMap<_, _>>();
                for a in 1..=n {
                    let tf = tensor_dims_formula(&m, &p, a);
                    if tf != tensor_dims_bruteforce(&m, &p, a) || nonzero(t.dims(a)) != tf {
                        return Err(format!("tensor product dimensions differ in arity {a}"));
                    }
                    let cf = compose_dims_formula(&m, &p, a);
                    if cf != compose_dims_bruteforce(&m, &p, a) || nonzero(c.dims(a)) != cf {
                        return Err(format!("composition product dimensions differ in arity {a}"));
                    }
                }
                Ok(())
            })();
            r.record(format!("⊗ and ∘ dimension formulas for seeds ({seed}, {}) through arity {n} over {f}", seed.wrapping_add(1000)), "§1.2.1–1.2.2", outcome);
        }
    }
}

fn expect_dims(got: std::result::Result<BTreeMap<i64, usize>, Error>, want: &BTreeMap<i64, usize>) -> Outcome {
    let got = got.map_err(err)?;
    if &got == want {
        Ok(())
    } else {
        Err(format!("expected {want:?}, got {got:?}"))
    }
}

/// `H(Ω S²; F2)`, `H(Ω S³)` and `H(Ω² S³; F2)` from the shipped models.
fn loop_space(r: &mut Recorder, opts: &VerifyOptions) {
    let top = opts.max_degree.unwrap_or(8).max(1);
    let w = DegreeWindow { min: 1, max: top };
    let james: BTreeMap<i64, usize> = w.degrees().map(|d| (d, 1)).collect();
    let minimal = bar_of_cochains(&models::sphere(2), F2, 1, w, None).map(|c| c.degrees);
    let boundary = bar_of_cochains(&models::boundary_simplex(3), F2, 1, w, None).map(|c| c.degrees);
    r.record(format!("H(B C̄*(S²); F2) has dimension 1 in degrees 1..{top} (minimal model)"), "Theorem 1", expect_dims(minimal.clone(), &james));
    r.record(format!("H(B C̄*(∂Δ³); F2) has dimension 1 in degrees 1..{top}"), "Theorem 1", expect_dims(boundary.clone(), &james));
    let same = match (minimal, boundary) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        (Ok(a), Ok(b)) => Err(format!("tables differ: {a:?} vs {b:?}")),
        (Err(e), _) | (_, Err(e)) => Err(err(e)),
    };
    r.record("the two S² models give identical tables".into(), "§2.2", same);
    for f in fields(opts, &[Q, F2, CoeffField::Prime(3)]) {
        // Λ(x₃) with x₃ in cohomological degree 3, i.e. homological -3.
        let lambda = fixtures::exterior(f, -3);
        let hw = DegreeWindow { min: -top, max: -1 };
        let even: BTreeMap<i64, usize> = hw.degrees().map(|d| (d, usize::from(d % 2 == 0))).collect();
        r.record(
            format!("H(B Λ(x₃)) is Γ[y₂] in degrees 1..{top} over {f}"),
            "Theorem 1",
            expect_dims(bar(&lambda, hw, None).and_then(|b| b.homology()), &even),
        );
    }
    // B²(Λ(x₁)) over F2 in homological degrees 1..6: Tor over Γ[y₂].
    let b2 = iterated_bar(&fixtures::exterior(F2, 1), 2, DegreeWindow { min: 1, max: 6 }, None).and_then(|b| b.homology());
    let oracle = BTreeMap::from([(1, 0), (2, 0), (3, 1), (4, 0), (5, 1), (6, 1)]);
    r.record("H(B²Λ(x₁); F2) through degree 6".into(), "Theorem 1", expect_dims(b2, &oracle));
    // Ω²S³ over F2 is polynomial on classes in degrees 2^k - 1.
    let s3 = bar_of_cochains(&models::sphere(3), F2, 2, DegreeWindow { min: 1, max: 7 }, None).map(|c| c.degrees);
    let poly = BTreeMap::from([(1, 1), (2, 1), (3, 2), (4, 2), (5, 2), (6, 3), (7, 4)]);
    r.record("H(B² C̄*(S³); F2) through degree 7".into(), "Theorem 1", expect_dims(s3, &poly));
}

/// The identity checks that apply to a user-supplied algebra: its own
/// axioms, then `(δ+∂)² = 0` on `B(A)`, `Sym_R(B_R, A) ≅ B(A)` for the operad
/// of its kind, and the shuffle identities when `A` is commutative. Later
/// checks are skipped once the axioms fail.
pub fn run_on_algebra(a: &Algebra, window: DegreeWindow) -> Vec<Check> {
    let check = |name: String, reference: &str, outcome: Outcome| Check {
        suite: "input".into(),
        name,
        reference: reference.into(),
        passed: outcome.is_ok(),
        failure: outcome.err(),
    };
    let axioms = algebra_diagnostics(a);
    let mut checks = vec![check(format!("{}-algebra axioms", a.kind()), "§1.3", axioms.clone())];
    if axioms.is_err() {
        return checks;
    }
    let f = a.field();
    let square_zero = bar(a, window, None).map_err(err).and_then(|b| check_square_zero(a, &b));
    checks.push(check(format!("(δ+∂)² = 0 on B(A) on [{}, {}]", window.min, window.max), "§2.1.2", square_zero));
    let op = Arc::new(match a.kind() {
        AlgebraType::Associative => Operad::associative(f, 4),
        AlgebraType::Commutative => Operad::commutative(f, 4),
        _ => Operad::stasheff(f, 4),
    });
    let iso = sym_bar_iso(&op, a, 3, window);
    checks.push(check(format!("Sym_{}(B_{}, A) ≅ B(A) through weight 3", op.name(), op.name()), "§2.4", iso));
    if a.kind() == AlgebraType::Commutative {
        checks.push(check("shuffle identities on B(A)".into(), "§3.1.A", shuffle_identities(a, window)));
    }
    checks
}

/// The first failing check, if any.
pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| !c.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn passes(suite: Suite, opts: VerifyOptions) {
        let checks = run(suite, &opts);
        assert!(!checks.is_empty());
        if let Some(c) = first_failure(&checks) {
            panic!("{}: {}", c.name, c.failure.clone().unwrap_or_default());
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for (n, s) in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap(), s);
            assert_eq!(s.to_string(), n);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn oracle_shuffle_matches_enumeration() {
        let a = fixtures::truncated_polynomial(Q, 1, 4);
        let (x, y) = (a.index("x").unwrap(), a.index("x2").unwrap());
        for (u, v) in [(vec![x], vec![y]), (vec![x, y], vec![x]), (vec![x, x], vec![y, x])] {
            assert_eq!(shuffle_oracle(&a, &u, &v), shuffle(&a, &Word(u.clone()), &Word(v.clone())));
        }
    }

    #[test]
    fn small_suites_pass() {
        passes(Suite::Stasheff, VerifyOptions { arity: Some(5), ..Default::default() });
        passes(Suite::Extension, VerifyOptions { arity: Some(2), ..Default::default() });
        passes(Suite::EilenbergMacLane, VerifyOptions { field: Some(F2), ..Default::default() });
        passes(Suite::LoopSpace, VerifyOptions { max_degree: Some(6), ..Default::default() });
    }

    #[test]
    fn failures_are_reported() {
        let mut r = Recorder { suite: Suite::Shuffle, checks: Vec::new() };
        r.record("ok".into(), "-", Ok(()));
        r.record("broken".into(), "-", Err("why".into()));
        assert_eq!(first_failure(&r.checks).unwrap().name, "broken");
        let bad = fixtures::nonassociative(Q);
        assert!(sym_bar_iso(&Arc::new(Operad::associative(Q, 4)), &bad, 2, DegreeWindow { min: 0, max: 4 }).is_err());
    }

    #[test]
    fn sym_comparison_is_not_vacuous() {
        let a = fixtures::small_dga(Q);
        let r = Arc::new(Operad::associative(Q, 4));
        let window = DegreeWindow { min: 0, max: 8 };
        let k = Arc::new(Operad::stasheff(Q, 4));
        let eta = OperadMorphism::from_stasheff(k, r.clone()).unwrap();
        let over = AlgebraOver::new(a.clone(), r).unwrap();
        let rc = RelativeComposition::new(&eta, over, WordShape::bar(3), window, 3, None).unwrap();
        let target = WordShape::bar(3).complex(&a, window, Some(3), None).unwrap();
        let cmp = rc.compare(&a, &target).unwrap();
        assert!(cmp.is_iso());
        assert!(cmp.target.values().sum::<usize>() >= 10, "{:?}", cmp.target);
        let run = run_on_algebra(&fixtures::nonassociative(Q), window);
        assert_eq!(run.len(), 1);
        assert_eq!(run[0].failure.as_deref(), Some("associativity at (x,x,y)"));
    }
}
