//! Algebras over As, Com and the Stasheff operad given by structure constants,
//! and the `KAlgebra` interface consumed by the bar construction.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dg::{DgModule, DgModuleJson};
use crate::error::{Error, Result};
use crate::field::{CoeffField, Scalar};
use crate::lincomb::LinComb;
use crate::operad::{expand_product, Operad};
use crate::tree::{substitute, Slot, Tree};

/// An A∞-algebra with a finite basis: the structure the bar construction needs.
pub trait KAlgebra: Sync {
    type E: Clone + Ord + Hash + Send + Sync + fmt::Debug;
    fn field(&self) -> CoeffField;
    fn elements(&self) -> Vec<Self::E>;
    fn degree(&self, x: &Self::E) -> i64;
    fn diff(&self, x: &Self::E) -> LinComb<Self::E>;
    /// `μ_r(x_1, .., x_r)` for `r = xs.len() ≥ 2`.
    fn mu(&self, xs: &[Self::E]) -> LinComb<Self::E>;
    /// Largest `r` with `μ_r` possibly nonzero.
    fn max_mu(&self) -> usize;
    fn name(&self, x: &Self::E) -> String;
    /// Arity carried by an element of an algebra in right modules (1 otherwise).
    fn size(&self, _x: &Self::E) -> usize {
        1
    }
    /// Leaf labels carried by an element of an algebra in right modules.
    fn labels(&self, _x: &Self::E) -> u64 {
        0
    }
}

/// Multilinear extension of `μ_r` to combinations.
pub fn mu_lc<A: KAlgebra>(a: &A, args: &[LinComb<A::E>]) -> LinComb<A::E> {
    let mut out = LinComb::zero(a.field());
    for (xs, c) in expand_product(a.field(), args) {
        out.add_scaled(&a.mu(&xs), &c);
    }
    out
}

pub fn diff_lc<A: KAlgebra>(a: &A, l: &LinComb<A::E>) -> LinComb<A::E> {
    l.map_linear(|x| a.diff(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraType {
    #[serde(rename = "As")]
    Associative,
    #[serde(rename = "Com")]
    Commutative,
    #[serde(rename = "K")]
    AInfinity,
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraType::Associative => "As",
            AlgebraType::Commutative => "Com",
            AlgebraType::AInfinity => "K",
        })
    }
}

/// An algebra given by structure constants on a basis of a dg-module.
#[derive(Clone, Debug)]
pub struct Algebra {
    kind: AlgebraType,
    carrier: DgModule,
    names: Arc<Vec<String>>,
    degrees: Vec<i64>,
    diff: Vec<LinComb<u32>>,
    /// Inputs (the arity is their number) to the output.
    ops: BTreeMap<Vec<u32>, LinComb<u32>>,
    max_mu: usize,
}

impl Algebra {
    /// `table` maps input names to output terms. Commutative tables may list
    /// only one of `xy` and `yx`; the other is filled in by symmetry.
    pub fn new(kind: AlgebraType, carrier: DgModule, table: Vec<(Vec<String>, Vec<(String, Scalar)>)>) -> Result<Self> {
        let field = carrier.field();
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for d in carrier.window().degrees() {
            for n in carrier.names(d) {
                names.push(n.clone());
                degrees.push(d);
            }
        }
        let index: BTreeMap<&str, u32> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i as u32)).collect();
        let lookup = |n: &str| {
            index.get(n).copied().ok_or_else(|| Error::Invalid(format!("unknown basis element {n}")))
        };
        let mut diff = Vec::new();
        let mut offset = 0u32;
        let mut offsets = BTreeMap::new();
        for d in carrier.window().degrees() {
            offsets.insert(d, offset);
            offset += carrier.dim(d) as u32;
        }
        for d in carrier.window().degrees() {
            let cols = carrier.differential(d).column_vectors();
            for col in cols {
                let mut l = LinComb::zero(field);
                for (r, c) in col {
                    l.add_term(offsets[&(d - 1)] + r as u32, c);
                }
                diff.push(l);
            }
        }
        let mut ops: BTreeMap<Vec<u32>, LinComb<u32>> = BTreeMap::new();
        for (inputs, out) in table {
            let arity = inputs.len();
            if arity < 2 {
                return Err(Error::Invalid(format!("operation with {arity} inputs")));
            }
            if kind != AlgebraType::AInfinity && arity != 2 {
                return Err(Error::Invalid(format!("{kind}-algebras only have binary operations")));
            }
            let key: Vec<u32> = inputs.iter().map(|n| lookup(n)).collect::<Result<_>>()?;
            let expected = key.iter().map(|&i| degrees[i as usize]).sum::<i64>() + arity as i64 - 2;
            let mut l = LinComb::zero(field);
            for (n, c) in out {
                let o = lookup(&n)?;
                if degrees[o as usize] != expected {
                    return Err(Error::Invalid(format!(
                        "operation on ({}) has output {n} in degree {}, expected {expected}",
                        inputs.join(","),
                        degrees[o as usize]
                    )));
                }
                l.add_term(o, c);
            }
            let slot = ops.entry(key).or_insert_with(|| LinComb::zero(field));
            slot.add_assign(&l);
        }
        if kind == AlgebraType::Commutative {
            let given: Vec<(Vec<u32>, LinComb<u32>)> = ops.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            for (k, v) in given {
                let rev = vec![k[1], k[0]];
                let s = field.sign(degrees[k[0] as usize] * degrees[k[1] as usize]);
                ops.entry(rev).or_insert_with(|| v.scaled(&s));
            }
        }
        ops.retain(|_, v| !v.is_zero());
        let max_mu = ops.keys().map(|k| k.len()).max().unwrap_or(2).max(2);
        Ok(Algebra { kind, carrier, names: Arc::new(names), degrees, diff, ops, max_mu })
    }

    pub fn kind(&self) -> AlgebraType {
        self.kind
    }

    pub fn carrier(&self) -> &DgModule {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The same algebra with a different declared type (for example an
    /// associative algebra viewed as commutative).
    pub fn with_kind(&self, kind: AlgebraType) -> Self {
        let mut a = self.clone();
        a.kind = kind;
        a
    }

    /// Structure constants as `(inputs, output)` pairs.
    pub fn table(&self) -> &BTreeMap<Vec<u32>, LinComb<u32>> {
        &self.ops
    }

    /// The product `μ_2`.
    pub fn product(&self, x: u32, y: u32) -> LinComb<u32> {
        self.mu(&[x, y])
    }

    /// Evaluates a tree of operations whose leaves are basis elements: the
    /// operad of the algebra's type acts on the carrier.
    pub fn evaluate(&self, t: &Tree<u32>) -> LinComb<u32> {
        let field = self.field();
        match t {
            Tree::Leaf(x) => LinComb::basis(field, *x),
            Tree::Node(op, ch) => {
                let args: Vec<LinComb<u32>> = ch.iter().map(|c| self.evaluate(c)).collect();
                match self.kind {
                    AlgebraType::AInfinity => {
                        debug_assert_eq!(*op as usize, ch.len());
                        mu_lc(self, &args)
                    }
                    AlgebraType::Associative | AlgebraType::Commutative => {
                        let mut acc = args[0].clone();
                        for a in &args[1..] {
                            acc = mu_lc(self, &[acc, a.clone()]);
                        }
                        acc
                    }
                }
            }
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let carrier = DgModule::from_json(&j.carrier)?;
        let field = carrier.field();
        let mut table = Vec::new();
        for op in &j.operations {
            if let Some(r) = op.op.strip_prefix("mu").and_then(|s| s.parse::<usize>().ok()) {
                if r != op.inputs.len() {
                    return Err(Error::Invalid(format!("{} applied to {} inputs", op.op, op.inputs.len())));
                }
            }
            let out = op
                .output
                .iter()
                .map(|t| Ok((t.basis.clone(), field.parse_scalar(&t.coeff)?)))
                .collect::<Result<Vec<_>>>()?;
            table.push((op.inputs.clone(), out));
        }
        Algebra::new(j.operad, carrier, table)
    }

    pub fn to_json(&self) -> AlgebraJson {
        let operations = self
            .ops
            .iter()
            .map(|(k, v)| OperationJson {
                op: if self.kind == AlgebraType::AInfinity { format!("mu{}", k.len()) } else { "product".into() },
                inputs: k.iter().map(|&i| self.names[i as usize].clone()).collect(),
                output: v
                    .iter()
                    .map(|(o, c)| TermJson { basis: self.names[*o as usize].clone(), coeff: c.to_decimal() })
                    .collect(),
            })
            .collect();
        AlgebraJson { operad: self.kind, carrier: self.carrier.to_json(), operations }
    }
}

impl KAlgebra for Algebra {
    type E = u32;

    fn field(&self) -> CoeffField {
        self.carrier.field()
    }

    fn elements(&self) -> Vec<u32> {
        (0..self.names.len() as u32).collect()
    }

    fn degree(&self, x: &u32) -> i64 {
        self.degrees[*x as usize]
    }

    fn diff(&self, x: &u32) -> LinComb<u32> {
        self.diff[*x as usize].clone()
    }

    fn mu(&self, xs: &[u32]) -> LinComb<u32> {
        self.ops.get(xs).cloned().unwrap_or_else(|| LinComb::zero(self.field()))
    }

    fn max_mu(&self) -> usize {
        self.max_mu
    }

    fn name(&self, x: &u32) -> String {
        self.names[*x as usize].clone()
    }
}

/// JSON interchange format for algebras.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub operad: AlgebraType,
    pub carrier: DgModuleJson,
    #[serde(default)]
    pub operations: Vec<OperationJson>,
}

impl AlgebraJson {
    /// Reinterprets all coefficients over another field.
    pub fn with_field(mut self, field: CoeffField) -> Self {
        self.carrier.field = field;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperationJson {
    #[serde(default = "default_op")]
    pub op: String,
    pub inputs: Vec<String>,
    #[serde(default)]
    pub output: Vec<TermJson>,
}

fn default_op() -> String {
    "product".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(alias = "name")]
    pub basis: String,
    #[serde(default = "default_coeff")]
    pub coeff: String,
}

fn default_coeff() -> String {
    "1".into()
}

fn tuples(n: u32, r: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Checks the structure relations of an algebra: the Leibniz rule, and
/// associativity/commutativity (As, Com) or the Stasheff relations (K).
/// Returns a diagnostic naming the first violation.
pub fn algebra_diagnostics(a: &Algebra) -> std::result::Result<(), String> {
    let field = a.field();
    let n = a.dim() as u32;
    let name = |xs: &[u32]| xs.iter().map(|&x| a.name(&x)).collect::<Vec<_>>().join(",");
    match a.kind {
        AlgebraType::Associative | AlgebraType::Commutative => {
            for xs in tuples(n, 2) {
                let lhs = diff_lc(a, &a.mu(&xs));
                let mut rhs = mu_lc(a, &[a.diff(&xs[0]), LinComb::basis(field, xs[1])]);
                rhs.add_scaled(
                    &mu_lc(a, &[LinComb::basis(field, xs[0]), a.diff(&xs[1])]),
                    &field.sign(a.degree(&xs[0])),
                );
                if lhs != rhs {
                    return Err(format!("Leibniz rule at ({})", name(&xs)));
                }
            }
            for xs in tuples(n, 3) {
                let left = mu_lc(a, &[a.mu(&xs[..2]), LinComb::basis(field, xs[2])]);
                let right = mu_lc(a, &[LinComb::basis(field, xs[0]), a.mu(&xs[1..])]);
                if left != right {
                    return Err(format!("associativity at ({})", name(&xs)));
                }
            }
            if a.kind == AlgebraType::Commutative {
                for xs in tuples(n, 2) {
                    let s = field.sign(a.degree(&xs[0]) * a.degree(&xs[1]));
                    if a.mu(&xs) != a.mu(&[xs[1], xs[0]]).scaled(&s) {
                        return Err(format!("commutativity at ({})", name(&xs)));
                    }
                }
            }
            Ok(())
        }
        AlgebraType::AInfinity => {
            let top = 2 * a.max_mu - 1;
            let k = Operad::stasheff(field, top.max(2));
            for r in 2..=top {
                let dmu = k.generator_differential(r as u32);
                for xs in tuples(n, r) {
                    let lhs = stasheff_defect(a, &xs);
                    let leaves: Vec<Tree<u32>> = xs.iter().map(|&x| Tree::Leaf(x)).collect();
                    let mut rhs = LinComb::zero(field);
                    for (t, c) in dmu.iter() {
                        let (d, s) = substitute(
                            t,
                            &|&l| Slot::Sub(l as usize - 1),
                            &leaves,
                            &|op| k.op_degree(op),
                            &|x: &u32| a.degree(x),
                        );
                        rhs.add_scaled(&a.evaluate(&d), &if s { -c } else { c.clone() });
                    }
                    if lhs != rhs {
                        return Err(format!("Stasheff relation for mu{r} at ({})", name(&xs)));
                    }
                }
            }
            Ok(())
        }
    }
}

/// `δμ_r(x) - (-1)^r Σ_i ± μ_r(.., δx_i, ..)`: the commutator `[δ, μ_r]`.
fn stasheff_defect(a: &Algebra, xs: &[u32]) -> LinComb<u32> {
    let field = a.field();
    let r = xs.len();
    let mut out = diff_lc(a, &a.mu(xs));
    let outer = field.sign(r as i64 + 1);
    let mut prefix = 0;
    for i in 0..r {
        let args: Vec<LinComb<u32>> = xs
            .iter()
            .enumerate()
            .map(|(j, x)| if j == i { a.diff(x) } else { LinComb::basis(field, *x) })
            .collect();
        out.add_scaled(&mu_lc(a, &args), &(&outer * &field.sign(prefix)));
        prefix += a.degree(&xs[i]);
    }
    out
}

/// Boolean form of [`algebra_diagnostics`].
pub fn check_algebra(a: &Algebra) -> bool {
    algebra_diagnostics(a).is_ok()
}

/// Errors with `AlgebraCheckFailed` when the algebra violates its relations.
pub fn validate_algebra(a: &Algebra) -> Result<()> {
    algebra_diagnostics(a).map_err(Error::AlgebraCheckFailed)
}

/// Convenience constructors for small fixtures.
pub mod fixtures {
    use super::*;
    use crate::dg::DegreeWindow;

    fn carrier(field: CoeffField, basis: &[(&str, i64)], diff: &[(&str, &str, i64)]) -> DgModule {
        let lo = basis.iter().map(|b| b.1).min().unwrap_or(0);
        let hi = basis.iter().map(|b| b.1).max().unwrap_or(0);
        DgModule::new(
            field,
            DegreeWindow { min: lo, max: hi },
            basis.iter().map(|(n, d)| (n.to_string(), *d)).collect(),
            diff.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), field.from_i64(*c))).collect(),
        )
        .expect("fixture carrier")
    }

    fn table(field: CoeffField, t: &[(&[&str], &[(&str, i64)])]) -> Vec<(Vec<String>, Vec<(String, Scalar)>)> {
        t.iter()
            .map(|(i, o)| {
                (
                    i.iter().map(|s| s.to_string()).collect(),
                    o.iter().map(|(n, c)| (n.to_string(), field.from_i64(*c))).collect(),
                )
            })
            .collect()
    }

    /// Reduced exterior algebra on one generator of degree `d`: `x² = 0`.
    pub fn exterior(field: CoeffField, d: i64) -> Algebra {
        Algebra::new(AlgebraType::Commutative, carrier(field, &[("x", d)], &[]), vec![]).unwrap()
    }

    /// Reduced truncated polynomial algebra `x k[x]/x^n` on `x` of degree `d`.
    pub fn truncated_polynomial(field: CoeffField, d: i64, n: usize) -> Algebra {
        let names: Vec<String> = (1..n).map(|k| if k == 1 { "x".to_string() } else { format!("x{k}") }).collect();
        let basis: Vec<(&str, i64)> = names.iter().enumerate().map(|(k, s)| (s.as_str(), d * (k as i64 + 1))).collect();
        let mut t = Vec::new();
        for a in 1..n {
            for b in 1..n {
                if a + b < n {
                    t.push((vec![names[a - 1].clone(), names[b - 1].clone()], vec![(names[a + b - 1].clone(), field.one())]));
                }
            }
        }
        Algebra::new(AlgebraType::Commutative, carrier(field, &basis, &[]), t).unwrap()
    }

    /// One generator per listed degree and all products zero.
    pub fn trivial(field: CoeffField, kind: AlgebraType, degrees: &[i64]) -> Algebra {
        let names: Vec<String> = (0..degrees.len()).map(|i| format!("x{i}")).collect();
        let basis: Vec<(&str, i64)> = names.iter().zip(degrees).map(|(n, d)| (n.as_str(), *d)).collect();
        Algebra::new(kind, carrier(field, &basis, &[]), vec![]).unwrap()
    }

    /// A non-associative product on `x, y` in degree 0: `xy = y`, all other products zero.
    pub fn nonassociative(field: CoeffField) -> Algebra {
        let c = carrier(field, &[("x", 0), ("y", 0)], &[]);
        Algebra::new(
            AlgebraType::Associative,
            c,
            table(field, &[(&["x", "y"], &[("y", 1)])]),
        )
        .unwrap()
    }

    /// A seeded random dga of dimension at most 6: monomials of bounded
    /// weight in 2 or 3 generators (graded commutative or free associative),
    /// with a linear differential on one pair of generators. Degrees are all
    /// positive or all at most -2, so bar truncations are sound.
    pub fn random_dga(field: CoeffField, seed: u64, commutative: bool) -> Algebra {
        use crate::operad::koszul_sort;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let negative = rng.gen_bool(0.3);
        let count = rng.gen_range(2..=3usize);
        let mut degrees: Vec<i64> = (0..count).map(|_| if negative { rng.gen_range(-5..=-2) } else { rng.gen_range(1..=4) }).collect();
        let mut weights: Vec<usize> = (0..count).map(|_| rng.gen_range(1..=3)).collect();
        // `δ g_src = c · g_tgt` for one pair.
        let mut pair = None;
        if rng.gen_bool(0.6) {
            let tgt = rng.gen_range(0..count);
            let d = degrees[tgt] + 1;
            if !negative || d <= -2 {
                degrees.push(d);
                weights.push(weights[tgt]);
                let c = field.from_i64(rng.gen_range(1..=4));
                if !c.is_zero() {
                    pair = Some((degrees.len() - 1, tgt, c));
                }
            }
        }
        let gens = degrees.len();
        let weight = |ws: &[usize], m: &[usize]| m.iter().map(|&g| ws[g]).sum::<usize>();
        let normal = |mut m: Vec<usize>| -> Option<(Vec<usize>, bool)> {
            if !commutative {
                return Some((m, false));
            }
            let parity = koszul_sort(&mut m, &|&g| degrees[g]);
            if m.windows(2).any(|w| w[0] == w[1] && degrees[w[0]] % 2 != 0) {
                return None;
            }
            Some((m, parity))
        };
        let monomials = |ws: &[usize], bound: usize| {
            let mut out: Vec<Vec<usize>> = Vec::new();
            let mut frontier: Vec<Vec<usize>> = vec![vec![]];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for m in &frontier {
                    for g in 0..gens {
                        let mut w = m.clone();
                        w.push(g);
                        if weight(ws, &w) > bound {
                            continue;
                        }
                        if let Some((n, _)) = normal(w) {
                            if !out.contains(&n) {
                                out.push(n.clone());
                                next.push(n);
                            }
                        }
                    }
                }
                frontier = next;
            }
            out
        };
        let max_w = *weights.iter().max().unwrap();
        if monomials(&weights, max_w).len() > 6 {
            weights.iter_mut().for_each(|w| *w = max_w);
        }
        let mut bound = max_w;
        while monomials(&weights, bound + 1).len() <= 6 && bound < 12 {
            bound += 1;
        }
        let kept = monomials(&weights, bound);
        let name = |m: &[usize]| m.iter().map(|g| format!("g{g}")).collect::<String>();
        let deg = |m: &[usize]| m.iter().map(|&g| degrees[g]).sum::<i64>();
        let basis: Vec<(String, i64)> = kept.iter().map(|m| (name(m), deg(m))).collect();
        let mut diff = Vec::new();
        if let Some((src, tgt, c)) = &pair {
            for m in &kept {
                let mut prefix = 0;
                for k in 0..m.len() {
                    if m[k] == *src {
                        let mut w = m.clone();
                        w[k] = *tgt;
                        if let Some((n, parity)) = normal(w) {
                            let sign = field.sign(prefix + parity as i64);
                            diff.push((name(m), name(&n), &sign * c));
                        }
                    }
                    prefix += degrees[m[k]];
                }
            }
        }
        let mut table = Vec::new();
        for u in &kept {
            for v in &kept {
                if weight(&weights, u) + weight(&weights, v) > bound {
                    continue;
                }
                if let Some((n, parity)) = normal([u.clone(), v.clone()].concat()) {
                    table.push((vec![name(u), name(v)], vec![(name(&n), field.sign(parity as i64))]));
                }
            }
        }
        let lo = basis.iter().map(|b| b.1).min().unwrap();
        let hi = basis.iter().map(|b| b.1).max().unwrap();
        let mut merged: BTreeMap<(String, String), Scalar> = BTreeMap::new();
        for (a, b, c) in diff {
            *merged.entry((a, b)).or_insert_with(|| field.zero()) += &c;
        }
        let diff = merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect();
        let carrier = DgModule::new(field, DegreeWindow { min: lo, max: hi }, basis, diff).expect("random carrier");
        let kind = if commutative { AlgebraType::Commutative } else { AlgebraType::Associative };
        Algebra::new(kind, carrier, table).expect("random algebra")
    }

    /// `x` (2), `x2` (4), `z` (5), `xz` (7) with `x·x = x2`, `x·z = xz`,
    /// `δz = x2`: a commutative dga with nonzero differential and products.
    pub fn cdga(field: CoeffField) -> Algebra {
        let c = carrier(field, &[("x", 2), ("x2", 4), ("z", 5), ("xz", 7)], &[("z", "x2", 1)]);
        let t = table(field, &[(&["x", "x"], &[("x2", 1)]), (&["x", "z"], &[("xz", 1)])]);
        Algebra::new(AlgebraType::Commutative, c, t).unwrap()
    }

    /// A dga with a nonzero differential: `u` (1), `v` (2), `w` (3), `z` (4),
    /// `uu = v`, `uv = vu = w`, `δz = w`.
    pub fn small_dga(field: CoeffField) -> Algebra {
        let c = carrier(field, &[("u", 1), ("v", 2), ("w", 3), ("z", 4)], &[("z", "w", 1)]);
        let t = table(
            field,
            &[(&["u", "u"], &[("v", 1)]), (&["u", "v"], &[("w", 1)]), (&["v", "u"], &[("w", 1)])],
        );
        Algebra::new(AlgebraType::Associative, c, t).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn associative_fixtures_pass() {
        for f in [CoeffField::Rationals, CoeffField::Prime(2), CoeffField::Prime(3)] {
            assert!(check_algebra(&exterior(f, 1)));
            assert!(check_algebra(&truncated_polynomial(f, 2, 4)));
            let d = small_dga(f);
            assert_eq!(algebra_diagnostics(&d), Ok(()));
            assert!(check_algebra(&d.with_kind(AlgebraType::AInfinity)));
        }
    }

    #[test]
    fn random_fixtures_are_dgas() {
        for f in [CoeffField::Rationals, CoeffField::Prime(2), CoeffField::Prime(3)] {
            for seed in 0..30 {
                for commutative in [false, true] {
                    let a = random_dga(f, seed, commutative);
                    assert!(a.dim() <= 6 && a.dim() >= 2, "seed {seed}");
                    assert_eq!(algebra_diagnostics(&a), Ok(()), "seed {seed} commutative {commutative}");
                    assert!(crate::bar::required_weight(&a, crate::dg::DegreeWindow { min: -12, max: 12 }).is_ok());
                }
            }
        }
        let with_diff = (0..30).filter(|&s| {
            let a = random_dga(CoeffField::Rationals, s, true);
            a.elements().iter().any(|x| !a.diff(x).is_zero())
        });
        assert!(with_diff.count() >= 5);
    }

    #[test]
    fn polynomial_truncation_is_commutative_over_f2() {
        let f = CoeffField::Prime(2);
        let a = truncated_polynomial(f, 0, 3);
        assert_eq!(a.dim(), 2);
        assert!(check_algebra(&a));
    }

    #[test]
    fn corrupted_associativity_is_reported() {
        let a = nonassociative(CoeffField::Rationals);
        assert_eq!(algebra_diagnostics(&a), Err("associativity at (x,x,y)".to_string()));
        let k = a.with_kind(AlgebraType::AInfinity);
        assert!(algebra_diagnostics(&k).unwrap_err().starts_with("Stasheff relation for mu3"));
    }

    #[test]
    fn json_roundtrip_and_field_override() {
        let a = truncated_polynomial(CoeffField::Rationals, 2, 4);
        let j = a.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back = Algebra::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.table(), a.table());
        let f2 = Algebra::from_json(&j.with_field(CoeffField::Prime(2))).unwrap();
        assert_eq!(f2.field(), CoeffField::Prime(2));
    }

    #[test]
    fn degree_mismatch_rejected() {
        let j: AlgebraJson = serde_json::from_str(
            r#"{"operad":"As","carrier":{"field":"Q","basis":[{"name":"x","degree":1}]},
                "operations":[{"op":"m2","inputs":["x","x"],"output":[{"basis":"x","coeff":"1"}]}]}"#,
        )
        .unwrap();
        assert!(Algebra::from_json(&j).is_err());
    }

    #[test]
    fn a_infinity_with_higher_operation() {
        // x, y in degree 0, z in degree 1; μ3(x,x,x) = z with μ2 = 0 satisfies the relations
        // iff [δ, μ3] = 0, which holds with δ = 0.
        let f = CoeffField::Rationals;
        let c = DgModule::new(
            f,
            crate::dg::DegreeWindow::new(0, 1).unwrap(),
            vec![("x".into(), 0), ("z".into(), 1)],
            vec![],
        )
        .unwrap();
        let a = Algebra::new(AlgebraType::AInfinity, c, vec![(vec!["x".into(); 3], vec![("z".into(), f.one())])]).unwrap();
        assert_eq!(a.max_mu(), 3);
        assert_eq!(algebra_diagnostics(&a), Ok(()));
    }
}
