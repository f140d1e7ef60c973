//! Differential graded modules over a field, truncated to a degree window.
//!
//! Grading is homological: the differential lowers degree by one. Cochain
//! data enters through `C^n = C_{-n}`. Tensor products use the Koszul rule
//! `δ(x⊗y) = δx⊗y + (-1)^{|x|} x⊗δy`, and suspension `δ(sx) = -s(δx)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Display;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{CoeffField, Scalar};
use crate::linalg::{axpy, homology_dimension, Echelon, SparseMatrix, SparseVec};
use crate::lincomb::LinComb;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeWindow {
    pub min: i64,
    pub max: i64,
}

impl DegreeWindow {
    pub fn new(min: i64, max: i64) -> Result<Self> {
        if min > max {
            return Err(Error::Invalid(format!("empty degree window [{min}, {max}]")));
        }
        Ok(DegreeWindow { min, max })
    }

    pub fn contains(&self, d: i64) -> bool {
        self.min <= d && d <= self.max
    }

    /// Degrees whose homology is determined by the data in the window.
    pub fn interior(&self) -> impl Iterator<Item = i64> {
        (self.min + 1)..self.max
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }

    pub fn intersect(&self, other: &DegreeWindow) -> Option<DegreeWindow> {
        let (lo, hi) = (self.min.max(other.min), self.max.min(other.max));
        (lo <= hi).then_some(DegreeWindow { min: lo, max: hi })
    }

    /// Expands the window by one degree on each side.
    pub fn widen(&self, by: i64) -> DegreeWindow {
        DegreeWindow { min: self.min - by, max: self.max + by }
    }
}

/// A dg-module with a named basis in each degree of its window.
#[derive(Clone, Debug, PartialEq)]
pub struct DgModule {
    field: CoeffField,
    window: DegreeWindow,
    basis: BTreeMap<i64, Vec<String>>,
    /// `diff[d]`: degree `d` to degree `d - 1`; only for `d - 1` in the window.
    diff: BTreeMap<i64, SparseMatrix>,
    weights: BTreeMap<String, usize>,
    /// Whether the module is known to vanish outside its window.
    complete: bool,
}

impl DgModule {
    /// Builds a module from a basis and differential entries `(from, to, coeff)`.
    pub fn new(
        field: CoeffField,
        window: DegreeWindow,
        basis: Vec<(String, i64)>,
        differential: Vec<(String, String, Scalar)>,
    ) -> Result<Self> {
        let mut per_degree: BTreeMap<i64, Vec<String>> = window.degrees().map(|d| (d, Vec::new())).collect();
        let mut index: HashMap<String, (i64, usize)> = HashMap::new();
        for (name, d) in basis {
            if !window.contains(d) {
                return Err(Error::Invalid(format!("basis element {name} has degree {d} outside window")));
            }
            let v = per_degree.get_mut(&d).unwrap();
            if index.insert(name.clone(), (d, v.len())).is_some() {
                return Err(Error::Invalid(format!("duplicate basis element {name}")));
            }
            v.push(name);
        }
        let mut diff: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
        for d in window.min + 1..=window.max {
            diff.insert(d, SparseMatrix::zero(field, per_degree[&(d - 1)].len(), per_degree[&d].len()));
        }
        for (from, to, c) in differential {
            let &(df, i) = index.get(&from).ok_or_else(|| Error::Invalid(format!("unknown basis element {from}")))?;
            let &(dt, j) = index.get(&to).ok_or_else(|| Error::Invalid(format!("unknown basis element {to}")))?;
            if dt != df - 1 {
                return Err(Error::Invalid(format!("differential {from} -> {to} does not lower degree by one")));
            }
            diff.get_mut(&df).unwrap().add_entry(j, i, &c);
        }
        let m = DgModule { field, window, basis: per_degree, diff, weights: BTreeMap::new(), complete: true };
        m.check_square_zero()?;
        Ok(m)
    }

    /// Builds a module from per-degree dimensions and differential matrices.
    pub fn from_matrices(
        field: CoeffField,
        window: DegreeWindow,
        basis: BTreeMap<i64, Vec<String>>,
        diff: BTreeMap<i64, SparseMatrix>,
    ) -> Result<Self> {
        let mut b: BTreeMap<i64, Vec<String>> = window.degrees().map(|d| (d, Vec::new())).collect();
        for (d, names) in basis {
            if !window.contains(d) {
                if names.is_empty() {
                    continue;
                }
                return Err(Error::Invalid(format!("degree {d} outside window")));
            }
            b.insert(d, names);
        }
        let mut full = BTreeMap::new();
        for d in window.min + 1..=window.max {
            let m = diff
                .get(&d)
                .cloned()
                .unwrap_or_else(|| SparseMatrix::zero(field, b[&(d - 1)].len(), b[&d].len()));
            if m.rows() != b[&(d - 1)].len() || m.cols() != b[&d].len() {
                return Err(Error::Invalid(format!("differential in degree {d} has the wrong shape")));
            }
            full.insert(d, m);
        }
        let m = DgModule { field, window, basis: b, diff: full, weights: BTreeMap::new(), complete: true };
        m.check_square_zero()?;
        Ok(m)
    }

    pub fn field(&self) -> CoeffField {
        self.field
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    pub fn dim(&self, d: i64) -> usize {
        self.basis.get(&d).map_or(0, |v| v.len())
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(|v| v.len()).sum()
    }

    pub fn names(&self, d: i64) -> &[String] {
        self.basis.get(&d).map_or(&[], |v| v.as_slice())
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.basis.iter().map(|(d, v)| (*d, v.len())).collect()
    }

    /// The differential out of degree `d` (zero when `d - 1` leaves the window).
    pub fn differential(&self, d: i64) -> SparseMatrix {
        self.diff
            .get(&d)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.field, self.dim(d - 1), self.dim(d)))
    }

    pub fn weights(&self) -> &BTreeMap<String, usize> {
        &self.weights
    }

    pub fn with_weights(mut self, weights: BTreeMap<String, usize>) -> Self {
        self.weights = weights;
        self
    }

    /// Marks the module as a truncation of a larger complex: results are
    /// only reported where the window determines them.
    pub fn truncated(mut self) -> Self {
        self.complete = false;
        self
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for d in self.window.min + 2..=self.window.max {
            let c = self.diff[&(d - 1)].mul(&self.diff[&d]);
            if !c.is_zero() {
                return Err(Error::CompositionNotZero(format!("δ∘δ ≠ 0 out of degree {d}")));
            }
        }
        Ok(())
    }

    /// Homology dimensions for the degrees of `window` that the module
    /// determines: every degree when the module is complete, otherwise the
    /// degrees of `window` strictly inside the module's own window.
    pub fn homology(&self, window: DegreeWindow) -> Result<BTreeMap<i64, usize>> {
        let degrees: Vec<i64> = if self.complete {
            window.degrees().collect()
        } else {
            let inner = DegreeWindow { min: self.window.min + 1, max: self.window.max - 1 };
            match (inner.min <= inner.max).then(|| inner.intersect(&window)).flatten() {
                Some(w) => w.degrees().collect(),
                None => Vec::new(),
            }
        };
        let results: Vec<Result<(i64, usize)>> = degrees
            .par_iter()
            .map(|&d| Ok((d, homology_dimension(&self.differential(d + 1), &self.differential(d))?)))
            .collect();
        results.into_iter().collect()
    }

    /// The quotient by a subcomplex spanned, per degree, by the rows of
    /// `relations`. The basis is the non-pivot elements of each degree.
    pub fn quotient(&self, relations: &BTreeMap<i64, Echelon>) -> Result<DgModule> {
        let empty = Echelon::new(self.field);
        let rel = |d: i64| relations.get(&d).unwrap_or(&empty);
        let mut keep: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut names = BTreeMap::new();
        for d in self.window.degrees() {
            let k: Vec<usize> = (0..self.dim(d)).filter(|&i| !rel(d).is_pivot(i)).collect();
            names.insert(d, k.iter().map(|&i| self.basis[&d][i].clone()).collect::<Vec<_>>());
            keep.insert(d, k);
        }
        let mut diff = BTreeMap::new();
        for d in self.window.min + 1..=self.window.max {
            let cols = self.differential(d).column_vectors();
            let apply = |v: &[(usize, Scalar)]| v.iter().fold(Vec::new(), |acc, (j, c)| axpy(&acc, c, &cols[*j]));
            let below = rel(d - 1).clone().into_reduced();
            for row in rel(d).rows() {
                if !below.reduce(&apply(row)).is_empty() {
                    return Err(Error::Invalid(format!("the relations in degree {d} are not a subcomplex")));
                }
            }
            let pos: HashMap<usize, usize> = keep[&(d - 1)].iter().enumerate().map(|(a, &i)| (i, a)).collect();
            let mut m = SparseMatrix::zero(self.field, keep[&(d - 1)].len(), keep[&d].len());
            for (col, &j) in keep[&d].iter().enumerate() {
                for (i, c) in below.reduce(&cols[j]) {
                    m.add_entry(pos[&i], col, &c);
                }
            }
            diff.insert(d, m);
        }
        let mut q = DgModule::from_matrices(self.field, self.window, names, diff)?;
        q.complete = self.complete;
        Ok(q)
    }

    /// Restricts the module to a smaller window (a quotient/sub truncation).
    pub fn restrict(&self, window: DegreeWindow) -> Result<DgModule> {
        let w = self
            .window
            .intersect(&window)
            .ok_or_else(|| Error::Invalid("restriction to a disjoint window".into()))?;
        let basis = w.degrees().map(|d| (d, self.names(d).to_vec())).collect();
        let diff = (w.min + 1..=w.max).map(|d| (d, self.differential(d))).collect();
        let mut m = DgModule::from_matrices(self.field, w, basis, diff)?.with_weights(self.weights.clone());
        m.complete = self.complete && w == self.window;
        Ok(m)
    }

    pub fn to_json(&self) -> DgModuleJson {
        let mut basis = Vec::new();
        let mut differential = Vec::new();
        for (d, names) in &self.basis {
            for n in names {
                basis.push(BasisJson { name: n.clone(), degree: *d, weight: self.weights.get(n).copied() });
            }
        }
        for (d, m) in &self.diff {
            for (r, c, v) in m.entries() {
                differential.push(DiffJson {
                    from: self.basis[d][c].clone(),
                    to: self.basis[&(d - 1)][r].clone(),
                    coeff: v.to_decimal(),
                });
            }
        }
        DgModuleJson { field: self.field, window: Some(self.window), basis, differential }
    }

    pub fn from_json(j: &DgModuleJson) -> Result<DgModule> {
        let window = match j.window {
            Some(w) => w,
            None => {
                let lo = j.basis.iter().map(|b| b.degree).min().unwrap_or(0);
                let hi = j.basis.iter().map(|b| b.degree).max().unwrap_or(0);
                DegreeWindow::new(lo, hi)?
            }
        };
        let basis = j.basis.iter().map(|b| (b.name.clone(), b.degree)).collect();
        let diff = j
            .differential
            .iter()
            .map(|e| Ok((e.from.clone(), e.to.clone(), j.field.parse_scalar(&e.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        let weights: BTreeMap<String, usize> =
            j.basis.iter().filter_map(|b| b.weight.map(|w| (b.name.clone(), w))).collect();
        Ok(DgModule::new(j.field, window, basis, diff)?.with_weights(weights))
    }

    /// Looks up `(degree, index)` of a basis element by name.
    pub fn find(&self, name: &str) -> Option<(i64, usize)> {
        self.basis
            .iter()
            .find_map(|(d, v)| v.iter().position(|n| n == name).map(|i| (*d, i)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub name: String,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffJson {
    pub from: String,
    pub to: String,
    pub coeff: String,
}

/// The interchange format for dg-modules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DgModuleJson {
    pub field: CoeffField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<DegreeWindow>,
    pub basis: Vec<BasisJson>,
    #[serde(default)]
    pub differential: Vec<DiffJson>,
}

/// A homogeneous linear map between dg-modules.
#[derive(Clone, Debug, PartialEq)]
pub struct DgMap {
    pub source: DgModule,
    pub target: DgModule,
    pub degree: i64,
    /// `blocks[d]`: source degree `d` to target degree `d + degree`.
    pub blocks: BTreeMap<i64, SparseMatrix>,
}

impl DgMap {
    pub fn block(&self, d: i64) -> SparseMatrix {
        self.blocks.get(&d).cloned().unwrap_or_else(|| {
            SparseMatrix::zero(self.source.field(), self.target.dim(d + self.degree), self.source.dim(d))
        })
    }

    /// `δ f = (-1)^{|f|} f δ` on every degree where both sides are defined.
    pub fn is_chain_map(&self) -> bool {
        let sign = self.source.field().sign(self.degree);
        let sw = self.source.window();
        for d in sw.degrees() {
            let t = d + self.degree;
            if !self.target.window().contains(t) || !self.target.window().contains(t - 1) || !sw.contains(d - 1) {
                continue;
            }
            let lhs = self.target.differential(t).mul(&self.block(d));
            let rhs = self.block(d - 1).mul(&self.source.differential(d)).scale(&sign);
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DgMap) -> DgMap {
        let mut blocks = BTreeMap::new();
        for d in other.source.window().degrees() {
            blocks.insert(d, self.block(d + other.degree).mul(&other.block(d)));
        }
        DgMap { source: other.source.clone(), target: self.target.clone(), degree: self.degree + other.degree, blocks }
    }

    /// True when every block is square and invertible.
    pub fn is_isomorphism(&self) -> bool {
        self.source.window().degrees().all(|d| {
            let b = self.block(d);
            b.rows() == b.cols() && b.rank() == b.rows() && self.target.dim(d + self.degree) == b.rows()
        }) && self.target.total_dim() == self.source.total_dim()
    }

    pub fn is_identity(&self) -> bool {
        self.degree == 0
            && self.source.window().degrees().all(|d| self.block(d) == SparseMatrix::identity(self.source.field(), self.source.dim(d)))
    }
}

/// A dg-module whose basis elements are labelled by structured keys.
#[derive(Clone, Debug)]
pub struct Keyed<K: Ord + Hash + Clone> {
    pub module: DgModule,
    pub keys: BTreeMap<i64, Vec<K>>,
    index: HashMap<K, (i64, usize)>,
}

impl<K: Ord + Hash + Clone + Display> Keyed<K> {
    /// Builds a complex from keys and a differential on keys, naming basis
    /// elements by `Display`.
    pub fn build(
        field: CoeffField,
        window: DegreeWindow,
        keys: Vec<(K, i64)>,
        d: impl Fn(&K) -> LinComb<K> + Sync,
    ) -> Result<Self>
    where
        K: Send + Sync,
    {
        Keyed::build_named(field, window, keys, d, |k| k.to_string())
    }
}

impl<K: Ord + Hash + Clone> Keyed<K> {
    /// Builds a complex from keys and a differential on keys. Only
    /// differentials out of degrees above the bottom of the window are
    /// evaluated; a term hitting a key missing from the basis is an error.
    pub fn build_named(
        field: CoeffField,
        window: DegreeWindow,
        keys: Vec<(K, i64)>,
        d: impl Fn(&K) -> LinComb<K> + Sync,
        name: impl Fn(&K) -> String + Sync,
    ) -> Result<Self>
    where
        K: Send + Sync,
    {
        let mut per: BTreeMap<i64, Vec<K>> = window.degrees().map(|d| (d, Vec::new())).collect();
        let mut index = HashMap::new();
        for (k, deg) in keys {
            if !window.contains(deg) {
                continue;
            }
            let v = per.get_mut(&deg).unwrap();
            if index.contains_key(&k) {
                continue;
            }
            index.insert(k.clone(), (deg, v.len()));
            v.push(k);
        }
        let mut diff = BTreeMap::new();
        for deg in window.min + 1..=window.max {
            let src = &per[&deg];
            let cols: Vec<Result<Vec<(usize, Scalar)>>> = src
                .par_iter()
                .map(|k| {
                    let mut col = Vec::new();
                    for (t, c) in d(k).iter() {
                        match index.get(t) {
                            Some(&(td, j)) if td == deg - 1 => col.push((j, c.clone())),
                            Some(_) => {
                                return Err(Error::Invalid(format!(
                                    "differential of {} hits {} in the wrong degree",
                                    name(k),
                                    name(t)
                                )))
                            }
                            None => {
                                return Err(Error::Invalid(format!(
                                    "differential of {} hits {}, which is missing from the basis",
                                    name(k),
                                    name(t)
                                )))
                            }
                        }
                    }
                    Ok(col)
                })
                .collect();
            let mut m = SparseMatrix::zero(field, per[&(deg - 1)].len(), src.len());
            for (i, col) in cols.into_iter().enumerate() {
                for (j, c) in col? {
                    m.add_entry(j, i, &c);
                }
            }
            diff.insert(deg, m);
        }
        let names: BTreeMap<i64, Vec<String>> =
            per.iter().map(|(d, ks)| (*d, ks.iter().map(&name).collect())).collect();
        let module = DgModule::from_matrices(field, window, names, diff)?;
        Ok(Keyed { module, keys: per, index })
    }

    pub fn index_of(&self, k: &K) -> Option<(i64, usize)> {
        self.index.get(k).copied()
    }

    /// Coordinates of a combination in degree `d` (keys in other degrees are an error).
    pub fn vector(&self, l: &LinComb<K>, d: i64) -> Result<SparseVec> {
        let mut v: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, c) in l.iter() {
            match self.index.get(k) {
                Some(&(kd, i)) if kd == d => {
                    let e = v.entry(i).or_insert_with(|| self.module.field().zero());
                    *e += c;
                }
                _ => return Err(Error::Invalid(format!("key not in degree {d} of the basis"))),
            }
        }
        Ok(v.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// The matrix of a map on keys into another keyed module.
    pub fn map_to<L: Ord + Hash + Clone>(
        &self,
        target: &Keyed<L>,
        degree: i64,
        f: impl Fn(&K) -> LinComb<L>,
    ) -> Result<DgMap> {
        let mut blocks = BTreeMap::new();
        for (d, ks) in &self.keys {
            let td = d + degree;
            if !target.module.window().contains(td) {
                continue;
            }
            let mut m = SparseMatrix::zero(self.module.field(), target.module.dim(td), ks.len());
            for (i, k) in ks.iter().enumerate() {
                for (j, c) in target.vector(&f(k), td)? {
                    m.add_entry(j, i, &c);
                }
            }
            blocks.insert(*d, m);
        }
        Ok(DgMap { source: self.module.clone(), target: target.module.clone(), degree, blocks })
    }
}

/// Tensor product, truncated to `window` (intersected with the sum of windows).
pub fn tensor(a: &DgModule, b: &DgModule, window: Option<DegreeWindow>) -> Result<DgModule> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let field = a.field();
    let full = DegreeWindow { min: a.window().min + b.window().min, max: a.window().max + b.window().max };
    let w = match window {
        Some(w) => full.intersect(&w).ok_or_else(|| Error::Invalid("empty tensor window".into()))?,
        None => full,
    };
    let complete = a.is_complete() && b.is_complete() && w == full;
    let mut keys = Vec::new();
    for da in a.window().degrees() {
        for db in b.window().degrees() {
            if !w.contains(da + db) {
                continue;
            }
            for i in 0..a.dim(da) {
                for j in 0..b.dim(db) {
                    keys.push((PairKey { a: (da, i), b: (db, j), names: (a.names(da)[i].clone(), b.names(db)[j].clone()) }, da + db));
                }
            }
        }
    }
    let da_cols: BTreeMap<i64, Vec<SparseVec>> = a.window().degrees().map(|d| (d, a.differential(d).column_vectors())).collect();
    let db_cols: BTreeMap<i64, Vec<SparseVec>> = b.window().degrees().map(|d| (d, b.differential(d).column_vectors())).collect();
    let key = |x: (i64, usize), y: (i64, usize)| PairKey {
        a: x,
        b: y,
        names: (a.names(x.0)[x.1].clone(), b.names(y.0)[y.1].clone()),
    };
    let k = Keyed::build(field, w, keys, |p: &PairKey| {
        let mut out = LinComb::zero(field);
        let ((xd, xi), (yd, yi)) = (p.a, p.b);
        if a.window().contains(xd - 1) {
            for (r, c) in &da_cols[&xd][xi] {
                if w.contains(xd - 1 + yd) {
                    out.add_term(key((xd - 1, *r), (yd, yi)), c.clone());
                }
            }
        }
        if b.window().contains(yd - 1) {
            let s = field.sign(xd);
            for (r, c) in &db_cols[&yd][yi] {
                if w.contains(xd + yd - 1) {
                    out.add_term(key((xd, xi), (yd - 1, *r)), &s * c);
                }
            }
        }
        out
    })?;
    Ok(if complete { k.module } else { k.module.truncated() })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PairKey {
    a: (i64, usize),
    b: (i64, usize),
    names: (String, String),
}

impl Display for PairKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}⊗{}", self.names.0, self.names.1)
    }
}

/// Suspension: degrees shift up by one and `δ(sx) = -s(δx)`.
pub fn suspension(a: &DgModule) -> DgModule {
    let field = a.field();
    let w = DegreeWindow { min: a.window().min + 1, max: a.window().max + 1 };
    let basis = a.window().degrees().map(|d| (d + 1, a.names(d).iter().map(|n| format!("s{n}")).collect())).collect();
    let minus = field.from_i64(-1);
    let diff = (w.min + 1..=w.max).map(|d| (d, a.differential(d - 1).scale(&minus))).collect();
    let weights = a.weights().iter().map(|(n, w)| (format!("s{n}"), *w)).collect();
    let mut s = DgModule::from_matrices(field, w, basis, diff)
        .expect("suspension preserves δ² = 0")
        .with_weights(weights);
    s.complete = a.complete;
    s
}

/// The symmetry isomorphism `a⊗b → b⊗a`, `x⊗y ↦ (-1)^{|x||y|} y⊗x`.
pub fn dg_tensor_swap(a: &DgModule, b: &DgModule) -> Result<DgMap> {
    let ab = tensor(a, b, None)?;
    let ba = tensor(b, a, None)?;
    let field = a.field();
    let mut blocks = BTreeMap::new();
    for d in ab.window().degrees() {
        let mut m = SparseMatrix::zero(field, ba.dim(d), ab.dim(d));
        // Tensor bases enumerate (deg_a, deg_b, i, j) in order; rebuild positions.
        let src_pos = tensor_positions(a, b, ab.window(), d);
        let tgt_pos = tensor_positions(b, a, ba.window(), d);
        for (((da, i), (db, j)), col) in src_pos {
            let row = tgt_pos[&((db, j), (da, i))];
            m.add_entry(row, col, &field.sign(da * db));
        }
        blocks.insert(d, m);
    }
    Ok(DgMap { source: ab, target: ba, degree: 0, blocks })
}

type Pos = (i64, usize);

fn tensor_positions(a: &DgModule, b: &DgModule, w: DegreeWindow, d: i64) -> BTreeMap<(Pos, Pos), usize> {
    // Mirrors the key order used by `tensor` (keys sorted by insertion within a degree).
    let mut out = BTreeMap::new();
    let mut n = 0;
    for da in a.window().degrees() {
        let db = d - da;
        if !b.window().contains(db) || !w.contains(d) {
            continue;
        }
        for i in 0..a.dim(da) {
            for j in 0..b.dim(db) {
                out.insert(((da, i), (db, j)), n);
                n += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoeffField {
        CoeffField::Rationals
    }

    /// `x` in degree 1 with `δx = y`, `y` in degree 0.
    fn arrow(field: CoeffField) -> DgModule {
        DgModule::new(
            field,
            DegreeWindow::new(0, 1).unwrap(),
            vec![("y".into(), 0), ("x".into(), 1)],
            vec![("x".into(), "y".into(), field.one())],
        )
        .unwrap()
    }

    fn point(field: CoeffField, d: i64) -> DgModule {
        DgModule::new(field, DegreeWindow::new(d, d).unwrap(), vec![(format!("e{d}"), d)], vec![]).unwrap()
    }

    #[test]
    fn rejects_nonzero_square() {
        let r = DgModule::new(
            q(),
            DegreeWindow::new(0, 2).unwrap(),
            vec![("a".into(), 2), ("b".into(), 1), ("c".into(), 0)],
            vec![("a".into(), "b".into(), q().one()), ("b".into(), "c".into(), q().one())],
        );
        assert!(matches!(r, Err(Error::CompositionNotZero(_))));
    }

    #[test]
    fn tensor_unit_and_points() {
        let m = arrow(q());
        let t = tensor(&point(q(), 0), &m, None).unwrap();
        assert_eq!(t.dims(), m.dims());
        assert_eq!(t.differential(1), m.differential(1));
        let p = tensor(&point(q(), 1), &point(q(), 2), None).unwrap();
        assert_eq!(p.dim(3), 1);
        assert_eq!(p.total_dim(), 1);
    }

    #[test]
    fn tensor_koszul_sign() {
        let m = arrow(q());
        let t = tensor(&m, &m, None).unwrap();
        // δ(x⊗x) = y⊗x - x⊗y
        let (d, i) = t.find("x⊗x").unwrap();
        assert_eq!(d, 2);
        let col = &t.differential(2).column_vectors()[i];
        let yx = t.find("y⊗x").unwrap().1;
        let xy = t.find("x⊗y").unwrap().1;
        let mut expect = vec![(yx, q().one()), (xy, q().from_i64(-1))];
        expect.sort_by_key(|e| e.0);
        assert_eq!(col, &expect);
        assert_eq!(t.homology(DegreeWindow::new(-1, 3).unwrap()).unwrap().values().sum::<usize>(), 0);
    }

    #[test]
    fn suspension_signs_and_shift() {
        let m = arrow(q());
        let s = suspension(&m);
        assert_eq!(s.dim(2), 1);
        assert_eq!(s.differential(2).get(0, 0), q().from_i64(-1));
        let ss = suspension(&s);
        assert_eq!(ss.differential(3).get(0, 0), q().one());
        let one = suspension(&point(q(), 0));
        assert_eq!(one.dim(1), 1);
    }

    #[test]
    fn homology_examples() {
        let w = DegreeWindow::new(-1, 2).unwrap();
        let zero_diff = DgModule::new(q(), DegreeWindow::new(0, 1).unwrap(), vec![("1".into(), 0), ("x".into(), 1)], vec![]).unwrap();
        let h = zero_diff.homology(w).unwrap();
        assert_eq!(h, BTreeMap::from([(-1, 0), (0, 1), (1, 1), (2, 0)]));
        let h = arrow(q()).homology(w).unwrap();
        assert!(h.values().all(|&v| v == 0));
    }

    #[test]
    fn swap_involution_and_signs() {
        let f = q();
        let m = DgModule::new(
            f,
            DegreeWindow::new(0, 1).unwrap(),
            vec![("y".into(), 0), ("x".into(), 1), ("z".into(), 1)],
            vec![("x".into(), "y".into(), f.one())],
        )
        .unwrap();
        let s = dg_tensor_swap(&m, &m).unwrap();
        assert!(s.is_chain_map());
        assert!(s.compose(&s).is_identity());
        let (_, xz) = s.source.find("x⊗z").unwrap();
        let (_, zx) = s.target.find("z⊗x").unwrap();
        assert_eq!(s.block(2).get(zx, xz), f.from_i64(-1));
        let (_, yy) = s.source.find("y⊗y").unwrap();
        assert_eq!(s.block(0).get(yy, yy), f.one());
    }

    #[test]
    fn json_roundtrip() {
        let m = arrow(CoeffField::Prime(3));
        let j = serde_json::to_string(&m.to_json()).unwrap();
        let back = DgModule::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
