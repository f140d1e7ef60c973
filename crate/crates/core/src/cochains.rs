//! Finite simplicial sets given by their nondegenerate simplices, and their
//! reduced normalized cochain algebras with the Alexander–Whitney product.
//!
//! A simplex of the generated simplicial set is stored symbolically as a
//! nondegenerate simplex `σ` with a monotone surjection `η: [n] → [dim σ]`,
//! standing for `η^*σ`. Faces are computed by composing with cofaces and
//! falling back on the declared faces of `σ` when the composite stops being
//! surjective. Cochains are regraded homologically, `C^n = C_{-n}`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{validate_algebra, Algebra, AlgebraType, KAlgebra};
use crate::bar::{bar_of_algebra, iterated_bar};
use crate::combinat::subsets_of_size;
use crate::dg::{DegreeWindow, DgModule};
use crate::error::{Error, Result};
use crate::field::{CoeffField, Scalar};
use crate::linalg::Echelon;

/// `η^*σ`: the nondegenerate simplex `base` pulled back along the monotone
/// surjection `map: [map.len() - 1] → [dim base]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub base: usize,
    pub map: Vec<usize>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.map.len() - 1
    }

    fn nondegenerate(base: usize, dim: usize) -> Self {
        Simplex { base, map: (0..=dim).collect() }
    }

    pub fn is_degenerate(&self) -> bool {
        self.map.windows(2).any(|w| w[0] == w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexJson {
    pub name: String,
    pub dim: usize,
    /// Face expressions `d_0, …, d_dim`, such as `"a"`, `"s0(v)"` or `"s1s0(v)"`.
    #[serde(default)]
    pub faces: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialSetJson {
    pub simplices: Vec<SimplexJson>,
    pub basepoint: String,
}

/// A finite simplicial set, presented by its nondegenerate simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSimplicialSet {
    names: Vec<String>,
    dims: Vec<usize>,
    faces: Vec<Vec<Simplex>>,
    basepoint: usize,
}

/// Splits `"s1s0(v)"` into degeneracy indices (outermost first) and a name.
fn parse_face(expr: &str) -> std::result::Result<(Vec<usize>, String), String> {
    let e = expr.trim();
    let (ops, inner) = match e.find('(') {
        None => ("", e),
        Some(open) => {
            if !e.ends_with(')') {
                return Err(format!("unbalanced parenthesis in `{expr}`"));
            }
            (&e[..open], &e[open + 1..e.len() - 1])
        }
    };
    let inner = inner.trim();
    if inner.is_empty() || inner.contains(['(', ')']) {
        return Err(format!("expected a simplex name in `{expr}`"));
    }
    let mut indices = Vec::new();
    let mut rest = ops.trim();
    while !rest.is_empty() {
        let Some(tail) = rest.strip_prefix('s') else {
            return Err(format!("expected a degeneracy `s<j>` in `{expr}`, found `{rest}`"));
        };
        let digits = tail.chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return Err(format!("degeneracy without an index in `{expr}`"));
        }
        indices.push(tail[..digits].parse::<usize>().map_err(|e| format!("`{expr}`: {e}"))?);
        rest = tail[digits..].trim_start_matches([' ', '.', '∘']);
    }
    Ok((indices, inner.to_string()))
}

impl FiniteSimplicialSet {
    /// Builds the set and checks the simplicial identities symbolically.
    pub fn new(simplices: Vec<SimplexJson>, basepoint: &str) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, s) in simplices.iter().enumerate() {
            if s.name.trim().is_empty() || s.name.contains(['(', ')']) {
                return Err(Error::Parse(format!("simplex {i}: invalid name `{}`", s.name)));
            }
            if index.insert(s.name.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate simplex `{}`", s.name)));
            }
        }
        let names: Vec<String> = simplices.iter().map(|s| s.name.clone()).collect();
        let dims: Vec<usize> = simplices.iter().map(|s| s.dim).collect();
        let basepoint = *index
            .get(basepoint)
            .ok_or_else(|| Error::Parse(format!("basepoint `{basepoint}` is not a simplex")))?;
        if dims[basepoint] != 0 {
            return Err(Error::Parse(format!("basepoint `{}` is not a vertex", names[basepoint])));
        }
        let mut set = FiniteSimplicialSet { names, dims, faces: Vec::new(), basepoint };
        let mut faces = Vec::new();
        for s in &simplices {
            let expected = if s.dim == 0 { 0 } else { s.dim + 1 };
            if s.faces.len() != expected {
                return Err(Error::Parse(format!(
                    "simplex `{}` of dimension {} lists {} faces, expected {expected}",
                    s.name,
                    s.dim,
                    s.faces.len()
                )));
            }
            let mut fs = Vec::new();
            for (i, expr) in s.faces.iter().enumerate() {
                let at = |msg: String| Error::Parse(format!("face d{i} of `{}`: {msg}", s.name));
                let (ops, inner) = parse_face(expr).map_err(at)?;
                let &base = index.get(&inner).ok_or_else(|| at(format!("unknown simplex `{inner}`")))?;
                let mut x = Simplex::nondegenerate(base, set.dims[base]);
                for &j in ops.iter().rev() {
                    if j > x.dim() {
                        return Err(at(format!("s{j} applied to a {}-simplex in `{expr}`", x.dim())));
                    }
                    x = set.degeneracy(j, &x);
                }
                if x.dim() + 1 != s.dim {
                    return Err(Error::SimplicialIdentityViolation(format!(
                        "face d{i} of `{}` is `{expr}` of dimension {}, expected {}",
                        s.name,
                        x.dim(),
                        s.dim - 1
                    )));
                }
                fs.push(x);
            }
            faces.push(fs);
        }
        set.faces = faces;
        set.check()?;
        Ok(set)
    }

    pub fn from_json(j: &SimplicialSetJson) -> Result<Self> {
        Self::new(j.simplices.clone(), &j.basepoint)
    }

    pub fn to_json(&self) -> SimplicialSetJson {
        SimplicialSetJson {
            simplices: (0..self.names.len())
                .map(|i| SimplexJson {
                    name: self.names[i].clone(),
                    dim: self.dims[i],
                    faces: self.faces[i].iter().map(|f| self.name(f)).collect(),
                })
                .collect(),
            basepoint: self.names[self.basepoint].clone(),
        }
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn simplex_name(&self, base: usize) -> &str {
        &self.names[base]
    }

    /// Nondegenerate simplices of dimension `n`, in declaration order.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        (0..self.dims.len()).filter(|&i| self.dims[i] == n).collect()
    }

    /// All simplices of dimension `n`, degenerate ones included.
    pub fn simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for base in 0..self.dims.len() {
            let m = self.dims[base];
            if m > n {
                continue;
            }
            // A surjection [n] → [m] is determined by the m positions where it steps up.
            for steps in subsets_of_size(n, m) {
                let mut map = vec![0; n + 1];
                for (k, slot) in map.iter_mut().enumerate().skip(1) {
                    *slot = steps.iter().filter(|&&s| s < k).count();
                }
                out.push(Simplex { base, map });
            }
        }
        out
    }

    /// `s_{j_k}⋯s_{j_1}(σ)` with `j_k > ⋯ > j_1`.
    pub fn name(&self, x: &Simplex) -> String {
        let ops: String = (0..x.dim())
            .rev()
            .filter(|&j| x.map[j] == x.map[j + 1])
            .map(|j| format!("s{j}"))
            .collect();
        if ops.is_empty() {
            self.names[x.base].clone()
        } else {
            format!("{ops}({})", self.names[x.base])
        }
    }

    pub fn face(&self, i: usize, x: &Simplex) -> Simplex {
        assert!(x.dim() >= 1 && i <= x.dim(), "face d{i} of a {}-simplex", x.dim());
        let missing = x.map[i];
        let mut map = x.map.clone();
        map.remove(i);
        if map.contains(&missing) {
            return Simplex { base: x.base, map };
        }
        // η∘δ_i misses `missing`: factor it through the coface δ_missing.
        for v in map.iter_mut() {
            if *v > missing {
                *v -= 1;
            }
        }
        let f = &self.faces[x.base][missing];
        Simplex { base: f.base, map: map.iter().map(|&v| f.map[v]).collect() }
    }

    pub fn degeneracy(&self, j: usize, x: &Simplex) -> Simplex {
        assert!(j <= x.dim(), "degeneracy s{j} of a {}-simplex", x.dim());
        let mut map = x.map.clone();
        map.insert(j, x.map[j]);
        Simplex { base: x.base, map }
    }

    /// Front `p`-face: the vertices `0..=p`.
    pub fn front(&self, x: &Simplex, p: usize) -> Simplex {
        let mut y = x.clone();
        while y.dim() > p {
            y = self.face(y.dim(), &y);
        }
        y
    }

    /// Back `q`-face: the vertices `n-q..=n`.
    pub fn back(&self, x: &Simplex, q: usize) -> Simplex {
        let mut y = x.clone();
        while y.dim() > q {
            y = self.face(0, &y);
        }
        y
    }

    /// Checks the face–face and face–degeneracy identities on every simplex
    /// through one dimension above the top nondegenerate simplices.
    pub fn check(&self) -> Result<()> {
        for n in 1..=self.max_dim() + 1 {
            let xs = self.simplices(n);
            let bad = xs.par_iter().find_map_first(|x| self.identity_failure(x));
            if let Some(msg) = bad {
                return Err(Error::SimplicialIdentityViolation(msg));
            }
        }
        Ok(())
    }

    fn identity_failure(&self, x: &Simplex) -> Option<String> {
        let n = x.dim();
        for j in 1..=n {
            for i in 0..j {
                if n >= 2 && self.face(i, &self.face(j, x)) != self.face(j - 1, &self.face(i, x)) {
                    return Some(format!(
                        "d{i}d{j} ≠ d{}d{i} on `{}`: `{}` vs `{}`",
                        j - 1,
                        self.name(x),
                        self.name(&self.face(i, &self.face(j, x))),
                        self.name(&self.face(j - 1, &self.face(i, x)))
                    ));
                }
            }
        }
        for j in 0..=n {
            let y = self.degeneracy(j, x);
            for i in 0..=n + 1 {
                let lhs = self.face(i, &y);
                let rhs = if i < j {
                    (n >= 1).then(|| self.degeneracy(j - 1, &self.face(i, x)))
                } else if i == j || i == j + 1 {
                    Some(x.clone())
                } else {
                    (n >= 1).then(|| self.degeneracy(j, &self.face(i - 1, x)))
                };
                if let Some(rhs) = rhs {
                    if lhs != rhs {
                        return Some(format!("d{i}s{j} identity fails on `{}`", self.name(x)));
                    }
                }
            }
        }
        None
    }

    /// Whether the vertices are joined by edges into one component.
    pub fn is_connected(&self) -> bool {
        let vertices = self.nondegenerate(0);
        let mut parent: HashMap<usize, usize> = vertices.iter().map(|&v| (v, v)).collect();
        fn root(p: &HashMap<usize, usize>, mut v: usize) -> usize {
            while p[&v] != v {
                v = p[&v];
            }
            v
        }
        for e in self.nondegenerate(1) {
            let (a, b) = (root(&parent, self.faces[e][0].base), root(&parent, self.faces[e][1].base));
            parent.insert(a, b);
        }
        let roots: std::collections::BTreeSet<usize> = vertices.iter().map(|&v| root(&parent, v)).collect();
        roots.len() <= 1
    }
}

/// Reduced normalized cochains `C̄^*(X)` with the Alexander–Whitney cup
/// product, as an associative dg-algebra in degrees `-max_dim..=0`.
#[derive(Clone, Debug)]
pub struct CochainAlgebra {
    pub algebra: Algebra,
    /// Basis element name (the dual of a nondegenerate simplex) to simplex index.
    pub duals: BTreeMap<String, usize>,
}

pub fn reduced_cochains(x: &FiniteSimplicialSet, field: CoeffField) -> Result<CochainAlgebra> {
    let top = x.max_dim();
    let window = DegreeWindow { min: -(top as i64), max: 0 };
    let kept = |s: usize| s != x.basepoint;
    let basis: Vec<(String, i64)> =
        (0..x.dims.len()).filter(|&s| kept(s)).map(|s| (x.names[s].clone(), -(x.dims[s] as i64))).collect();
    let duals = (0..x.dims.len()).filter(|&s| kept(s)).map(|s| (x.names[s].clone(), s)).collect();
    // (δσ*)(τ) = Σ (-1)^i σ*(d_i τ).
    let mut diff = Vec::new();
    for n in 1..=top {
        for tau in x.nondegenerate(n) {
            let t = Simplex::nondegenerate(tau, n);
            let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
            for i in 0..=n {
                let f = x.face(i, &t);
                if !f.is_degenerate() && kept(f.base) {
                    *coeffs.entry(f.base).or_default() += if i % 2 == 0 { 1 } else { -1 };
                }
            }
            for (s, c) in coeffs {
                if c != 0 {
                    diff.push((x.names[s].clone(), x.names[tau].clone(), field.from_i64(c)));
                }
            }
        }
    }
    let carrier = DgModule::new(field, window, basis, diff)?;
    // (σ*⌣ρ*)(τ) = σ*(front τ)·ρ*(back τ).
    let mut products: BTreeMap<(usize, usize), Vec<(String, Scalar)>> = BTreeMap::new();
    for n in 0..=top {
        for tau in x.nondegenerate(n) {
            let t = Simplex::nondegenerate(tau, n);
            for p in 0..=n {
                let (f, b) = (x.front(&t, p), x.back(&t, n - p));
                if f.is_degenerate() || b.is_degenerate() || !kept(f.base) || !kept(b.base) {
                    continue;
                }
                products.entry((f.base, b.base)).or_default().push((x.names[tau].clone(), field.one()));
            }
        }
    }
    let table = products.into_iter().map(|((s, r), out)| (vec![x.names[s].clone(), x.names[r].clone()], out)).collect();
    let algebra = Algebra::new(AlgebraType::Associative, carrier, table)?;
    validate_algebra(&algebra)?;
    Ok(CochainAlgebra { algebra, duals })
}

/// The sub-algebra spanned by the basis elements `keep`, which must be
/// closed under the differential and the product.
fn subalgebra(a: &Algebra, keep: &[u32]) -> Result<Algebra> {
    let field = a.field();
    let inside: std::collections::BTreeSet<u32> = keep.iter().copied().collect();
    let name = |i: u32| a.names()[i as usize].clone();
    let carrier = a.carrier();
    let mut basis = Vec::new();
    let mut diff = Vec::new();
    let mut offset = 0u32;
    for d in carrier.window().degrees() {
        let dm = carrier.differential(d);
        for (k, col) in dm.column_vectors().into_iter().enumerate() {
            let i = offset + k as u32;
            if !inside.contains(&i) {
                continue;
            }
            basis.push((name(i), d));
            let below = offset - carrier.dim(d - 1) as u32;
            for (r, c) in col {
                let j = below + r as u32;
                if !inside.contains(&j) {
                    return Err(Error::Invalid(format!("δ{} leaves the sub-algebra", name(i))));
                }
                diff.push((name(i), name(j), c));
            }
        }
        offset += carrier.dim(d) as u32;
    }
    let module = DgModule::new(field, carrier.window(), basis, diff)?;
    let mut table = Vec::new();
    for (inputs, out) in a.table() {
        if !inputs.iter().all(|i| inside.contains(i)) {
            continue;
        }
        let mut terms = Vec::new();
        for (o, c) in out.iter() {
            if !inside.contains(o) {
                return Err(Error::Invalid("product leaves the sub-algebra".into()));
            }
            terms.push((name(*o), c.clone()));
        }
        table.push((inputs.iter().map(|&i| name(i)).collect(), terms));
    }
    Algebra::new(a.kind(), module, table)
}

/// For a cochain algebra with `H̄^0 = H^1 = 0`, the quasi-isomorphic
/// sub-algebra `W ⊕ C^{≥3}`, where `W ⊂ C^2` is spanned by the basis
/// elements complementary to the pivots of `δ(C^1)`. It vanishes in
/// cohomological degrees 0 and 1, so its bar construction is finite in
/// each degree.
pub fn one_connected_reduction(a: &Algebra) -> Result<Algebra> {
    let carrier = a.carrier();
    let w = carrier.window();
    let h = carrier.homology(DegreeWindow { min: w.min.min(-1), max: 0 }.intersect(&w).unwrap_or(w))?;
    let (h0, h1) = (h.get(&0).copied().unwrap_or(0), h.get(&-1).copied().unwrap_or(0));
    if h0 != 0 || h1 != 0 {
        return Err(Error::Invalid(format!(
            "the space is not simply connected (reduced H^0 has dimension {h0}, H^1 has dimension {h1}); \
             its cochain bar construction is not finite in each degree"
        )));
    }
    let mut image = Echelon::new(a.field());
    for col in carrier.differential(-1).column_vectors() {
        image.insert(&col);
    }
    let mut offset = 0u32;
    let mut keep = Vec::new();
    for d in w.degrees() {
        for k in 0..carrier.dim(d) {
            if d <= -3 || (d == -2 && !image.is_pivot(k)) {
                keep.push(offset + k as u32);
            }
        }
        offset += carrier.dim(d) as u32;
    }
    subalgebra(a, &keep)
}

/// Homology of an iterated bar construction on a cochain model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainBar {
    /// Dimensions keyed by cohomological degree.
    pub degrees: BTreeMap<i64, usize>,
    /// Weight bound of the outermost bar complex.
    pub weight_bound: usize,
    /// Dimension of the 1-connected model the bar construction ran on.
    pub model_dim: usize,
}

/// `Bⁿ` of the reduced cochains of `x`, on cohomological degrees
/// `window` (a cohomological window `[a, b]` is homological `[-b, -a]`).
/// For `n ≥ 2` the cochain algebra must be commutative on the nose.
pub fn bar_of_cochains(
    x: &FiniteSimplicialSet,
    field: CoeffField,
    n: usize,
    window: DegreeWindow,
    weight_bound: Option<usize>,
) -> Result<CochainBar> {
    let c = reduced_cochains(x, field)?;
    let reduced = one_connected_reduction(&c.algebra)?;
    let homological = DegreeWindow { min: -window.max, max: -window.min };
    let (dims, weight) = if n == 1 {
        let b = bar_of_algebra(&reduced, homological, weight_bound)?;
        (b.homology()?, b.bounds.weight_bound)
    } else {
        let commutative = reduced.with_kind(AlgebraType::Commutative);
        if let Err(msg) = crate::algebra::algebra_diagnostics(&commutative) {
            return Err(Error::NotCommutative(format!(
                "the cup product on this cochain model is not commutative ({msg}); supply a commutative model"
            )));
        }
        let b = iterated_bar(&commutative, n, homological, weight_bound)?;
        (b.homology()?, b.top.bounds.weight_bound)
    };
    Ok(CochainBar {
        degrees: dims.into_iter().map(|(d, k)| (-d, k)).collect(),
        weight_bound: weight,
        model_dim: reduced.dim(),
    })
}

/// Small simplicial models.
pub mod models {
    use super::*;

    fn simplex(name: &str, dim: usize, faces: &[&str]) -> SimplexJson {
        SimplexJson { name: name.into(), dim, faces: faces.iter().map(|s| s.to_string()).collect() }
    }

    fn degenerate_point(n: usize) -> String {
        let ops: String = (0..n).rev().map(|j| format!("s{j}")).collect();
        if ops.is_empty() {
            "v".into()
        } else {
            format!("{ops}(v)")
        }
    }

    /// `Sⁿ = Δⁿ/∂Δⁿ`: one vertex and one `n`-simplex with degenerate faces.
    pub fn sphere_json(n: usize) -> SimplicialSetJson {
        let mut simplices = vec![simplex("v", 0, &[])];
        if n > 0 {
            let f = degenerate_point(n - 1);
            let faces: Vec<&str> = (0..=n).map(|_| f.as_str()).collect();
            simplices.push(simplex(&format!("e{n}"), n, &faces));
        }
        SimplicialSetJson { simplices, basepoint: "v".into() }
    }

    pub fn sphere(n: usize) -> FiniteSimplicialSet {
        FiniteSimplicialSet::from_json(&sphere_json(n)).expect("sphere model")
    }

    fn vertex_set_name(vs: &[usize]) -> String {
        vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
    }

    /// Nonempty faces of the `n`-simplex; `boundary` drops the top one.
    fn simplex_faces_json(n: usize, boundary: bool) -> SimplicialSetJson {
        let mut simplices = Vec::new();
        let top = if boundary { n } else { n + 1 };
        for k in 1..=top {
            for vs in subsets_of_size(n + 1, k) {
                let faces: Vec<String> = if k == 1 {
                    Vec::new()
                } else {
                    (0..k)
                        .map(|i| {
                            let mut f = vs.clone();
                            f.remove(i);
                            vertex_set_name(&f)
                        })
                        .collect()
                };
                simplices.push(SimplexJson { name: vertex_set_name(&vs), dim: k - 1, faces });
            }
        }
        SimplicialSetJson { simplices, basepoint: "0".into() }
    }

    /// The standard `n`-simplex `Δⁿ`.
    pub fn standard_simplex_json(n: usize) -> SimplicialSetJson {
        simplex_faces_json(n, false)
    }

    /// `∂Δⁿ`, a model of `S^{n-1}`.
    pub fn boundary_simplex_json(n: usize) -> SimplicialSetJson {
        simplex_faces_json(n, true)
    }

    /// `Δⁿ/sk_k Δⁿ`: the simplices of `Δⁿ` with more than `k + 1` vertices,
    /// and the `k`-skeleton collapsed to the basepoint `v`.
    pub fn skeleton_quotient_json(n: usize, k: usize) -> SimplicialSetJson {
        let mut simplices = vec![simplex("v", 0, &[])];
        for size in k + 2..=n + 1 {
            for vs in subsets_of_size(n + 1, size) {
                let faces = (0..size)
                    .map(|i| {
                        if size - 1 <= k + 1 {
                            degenerate_point(size - 2)
                        } else {
                            let mut f = vs.clone();
                            f.remove(i);
                            vertex_set_name(&f)
                        }
                    })
                    .collect();
                simplices.push(SimplexJson { name: vertex_set_name(&vs), dim: size - 1, faces });
            }
        }
        SimplicialSetJson { simplices, basepoint: "v".into() }
    }

    pub fn standard_simplex(n: usize) -> FiniteSimplicialSet {
        FiniteSimplicialSet::from_json(&standard_simplex_json(n)).expect("simplex model")
    }

    pub fn boundary_simplex(n: usize) -> FiniteSimplicialSet {
        FiniteSimplicialSet::from_json(&boundary_simplex_json(n)).expect("boundary model")
    }
}

#[cfg(test)]
mod tests {
    use super::models::*;
    use super::*;

    fn f2() -> CoeffField {
        CoeffField::prime(2).unwrap()
    }

    fn reduced_cohomology(x: &FiniteSimplicialSet, field: CoeffField) -> BTreeMap<i64, usize> {
        let c = reduced_cochains(x, field).unwrap();
        let w = c.algebra.carrier().window();
        c.algebra.carrier().homology(w).unwrap().into_iter().filter(|(_, k)| *k > 0).map(|(d, k)| (-d, k)).collect()
    }

    #[test]
    fn face_expressions_parse() {
        assert_eq!(parse_face("s1s0(pt)").unwrap(), (vec![1, 0], "pt".to_string()));
        assert_eq!(parse_face(" e ").unwrap(), (vec![], "e".to_string()));
        assert_eq!(parse_face("s1 s0(v)").unwrap(), (vec![1, 0], "v".to_string()));
        assert!(parse_face("s(v)").is_err());
        assert!(parse_face("t0(v)").is_err());
        assert!(parse_face("s0(v").is_err());
    }

    #[test]
    fn names_round_trip() {
        let x = sphere(2);
        let e = Simplex::nondegenerate(1, 2);
        let y = x.degeneracy(0, &x.degeneracy(2, &e));
        assert_eq!(x.name(&y), "s3s0(e2)");
        let again = FiniteSimplicialSet::from_json(&x.to_json()).unwrap();
        assert_eq!(again, x);
    }

    #[test]
    fn faces_of_degenerate_simplices() {
        let x = standard_simplex(2);
        let edge = x.names.iter().position(|n| n == "01").unwrap();
        let e = Simplex::nondegenerate(edge, 1);
        let s = x.degeneracy(1, &e);
        assert_eq!(x.face(1, &s), e);
        assert_eq!(x.face(2, &s), e);
        assert_eq!(x.name(&x.face(0, &s)), "s0(1)");
    }

    #[test]
    fn malformed_inputs_are_located() {
        let bad = SimplicialSetJson {
            simplices: vec![
                SimplexJson { name: "v".into(), dim: 0, faces: vec![] },
                SimplexJson { name: "e".into(), dim: 2, faces: vec!["s0(v)".into(), "s0(w)".into(), "s0(v)".into()] },
            ],
            basepoint: "v".into(),
        };
        let err = FiniteSimplicialSet::from_json(&bad).unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("d1 of `e`") && m.contains("`w`")), "{err}");

        let wrong_dim = SimplicialSetJson {
            simplices: vec![
                SimplexJson { name: "v".into(), dim: 0, faces: vec![] },
                SimplexJson { name: "e".into(), dim: 2, faces: vec!["v".into(), "s0(v)".into(), "s0(v)".into()] },
            ],
            basepoint: "v".into(),
        };
        assert!(matches!(FiniteSimplicialSet::from_json(&wrong_dim), Err(Error::SimplicialIdentityViolation(_))));

        // Δ² with the faces of its edges listed inconsistently.
        let mut twisted = standard_simplex_json(2);
        for s in twisted.simplices.iter_mut() {
            if s.name == "12" {
                s.faces = vec!["1".into(), "2".into()];
            }
        }
        let err = FiniteSimplicialSet::from_json(&twisted).unwrap_err();
        assert!(matches!(&err, Error::SimplicialIdentityViolation(m) if m.contains("012")), "{err}");
    }

    #[test]
    fn cohomology_of_small_models() {
        for field in [CoeffField::Rationals, f2(), CoeffField::prime(3).unwrap()] {
            for n in 1..=4 {
                assert_eq!(reduced_cohomology(&sphere(n), field), BTreeMap::from([(n as i64, 1)]));
                assert_eq!(reduced_cohomology(&boundary_simplex(n + 1), field), BTreeMap::from([(n as i64, 1)]));
            }
            for n in 0..=3 {
                assert!(reduced_cohomology(&standard_simplex(n), field).is_empty());
            }
        }
        assert!(standard_simplex(3).is_connected());
        let two_points = SimplicialSetJson {
            simplices: vec![
                SimplexJson { name: "a".into(), dim: 0, faces: vec![] },
                SimplexJson { name: "b".into(), dim: 0, faces: vec![] },
            ],
            basepoint: "a".into(),
        };
        assert!(!FiniteSimplicialSet::from_json(&two_points).unwrap().is_connected());
    }

    #[test]
    fn cup_product_is_a_dga() {
        for field in [CoeffField::Rationals, f2()] {
            for x in [boundary_simplex(3), boundary_simplex(4), standard_simplex(3), sphere(2)] {
                let c = reduced_cochains(&x, field).unwrap();
                crate::algebra::algebra_diagnostics(&c.algebra).unwrap();
            }
        }
        // The cup square of the 1-dimensional class on Δ² edges is a real product.
        let c = reduced_cochains(&standard_simplex(2), CoeffField::Rationals).unwrap();
        assert!(!c.algebra.table().is_empty());
    }

    #[test]
    fn reduction_preserves_cohomology() {
        let x = boundary_simplex(3);
        let c = reduced_cochains(&x, f2()).unwrap();
        let r = one_connected_reduction(&c.algebra).unwrap();
        assert_eq!(r.dim(), 1);
        let w = r.carrier().window();
        assert_eq!(r.carrier().homology(w).unwrap().get(&-2), Some(&1));
        assert!(matches!(one_connected_reduction(&reduced_cochains(&sphere(1), f2()).unwrap().algebra), Err(Error::Invalid(_))));
    }

    #[test]
    fn loop_space_cohomology() {
        let w = DegreeWindow { min: 1, max: 8 };
        for x in [sphere(2), boundary_simplex(3)] {
            let dims = bar_of_cochains(&x, f2(), 1, w, None).unwrap().degrees;
            assert_eq!(dims, (1..=8).map(|d| (d, 1)).collect());
        }
        let s3 = bar_of_cochains(&sphere(3), CoeffField::Rationals, 1, w, None).unwrap().degrees;
        assert_eq!(s3, (1..=8).map(|d| (d, usize::from(d % 2 == 0))).collect());
        let interval = bar_of_cochains(&standard_simplex(1), f2(), 1, DegreeWindow { min: 0, max: 4 }, None).unwrap().degrees;
        assert!(interval.values().all(|&k| k == 0));
    }

    #[test]
    fn iterated_bar_needs_a_commutative_model() {
        let w = DegreeWindow { min: 1, max: 4 };
        // Products on the minimal S³ vanish, so the model is commutative;
        // H*(Ω²S³; F2) is polynomial on classes of degrees 1, 3, 7, ….
        let dims = bar_of_cochains(&sphere(3), f2(), 2, DegreeWindow { min: 1, max: 7 }, None).unwrap().degrees;
        assert_eq!(dims.values().copied().collect::<Vec<_>>(), vec![1, 1, 2, 2, 2, 3, 4]);
        // BC*(S²) has a class in cohomological degree 1, so B² cannot be truncated.
        assert!(matches!(bar_of_cochains(&sphere(2), f2(), 2, w, None), Err(Error::TruncationUnsound(_))));
        // In Δ⁴/sk₁Δ⁴, (012)*⌣(234)* = (01234)* while (234)*⌣(012)* = 0.
        let x = FiniteSimplicialSet::from_json(&skeleton_quotient_json(4, 1)).unwrap();
        let c = reduced_cochains(&x, f2()).unwrap();
        let (a, b, t) = (c.algebra.index("012").unwrap(), c.algebra.index("234").unwrap(), c.algebra.index("01234").unwrap());
        assert_eq!(c.algebra.product(a, b).iter().map(|(o, _)| *o).collect::<Vec<_>>(), vec![t]);
        assert!(c.algebra.product(b, a).is_zero());
        assert!(bar_of_cochains(&x, f2(), 1, w, None).is_ok());
        assert!(matches!(bar_of_cochains(&x, f2(), 2, w, None), Err(Error::NotCommutative(_))));
    }
}
