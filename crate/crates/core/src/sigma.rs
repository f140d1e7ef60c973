//! Σ-modules: arity-indexed dg-modules whose symmetric group actions permute
//! basis elements up to sign. Tensor and composition products, symmetric
//! tensors `Sym(M, E)` as true coinvariant quotients, and brute-force
//! dimension oracles.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinat::{adjacent_decomposition, binomial, compositions, factorial, permutations, subsets_of_size};
use crate::dg::{DegreeWindow, DgModule, Keyed};
use crate::error::{Error, Result};
use crate::field::{CoeffField, Scalar};
use crate::linalg::{axpy, Echelon, SparseVec};
use crate::lincomb::LinComb;
use crate::operad::Operad;

/// Graded dimensions: degree to dimension.
pub type Dims = BTreeMap<i64, usize>;

/// One arity of a Σ-module.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    /// `diff[j]` is the differential of basis element `j`.
    pub diff: Vec<SparseVec>,
    /// `swaps[a][j] = (k, negative)`: the transposition of `a` and `a + 1`
    /// sends element `j` to `±` element `k`.
    pub swaps: Vec<Vec<(usize, bool)>>,
}

impl Component {
    pub fn empty(n: usize) -> Self {
        Component { names: vec![], degrees: vec![], diff: vec![], swaps: vec![vec![]; n.saturating_sub(1)] }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn dims(&self) -> Dims {
        let mut out = Dims::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaModule {
    field: CoeffField,
    /// `comps[n]` for `0 ≤ n ≤ arity_bound`; arity 0 is always zero.
    comps: Vec<Component>,
}

fn flip(neg: bool, c: &Scalar) -> Scalar {
    if neg {
        -c
    } else {
        c.clone()
    }
}

impl SigmaModule {
    /// Builds and validates a module; `comps[0]` must be empty.
    pub fn new(field: CoeffField, comps: Vec<Component>) -> Result<Self> {
        if comps.first().is_some_and(|c| c.dim() > 0) {
            return Err(Error::Invalid("Σ-modules here vanish in arity 0".into()));
        }
        let m = SigmaModule { field, comps };
        m.check().map_err(Error::Invalid)?;
        Ok(m)
    }

    pub fn field(&self) -> CoeffField {
        self.field
    }

    pub fn arity_bound(&self) -> usize {
        self.comps.len().saturating_sub(1)
    }

    pub fn component(&self, n: usize) -> &Component {
        &self.comps[n]
    }

    pub fn dims(&self, n: usize) -> Dims {
        self.comps.get(n).map(Component::dims).unwrap_or_default()
    }

    /// The unit `I`: one element in arity 1 and degree 0.
    pub fn unit(field: CoeffField, arity_bound: usize) -> Self {
        let mut comps: Vec<Component> = (0..=arity_bound).map(Component::empty).collect();
        comps[1] = Component { names: vec!["1".into()], degrees: vec![0], diff: vec![vec![]], swaps: vec![] };
        SigmaModule { field, comps }
    }

    /// The underlying Σ-module of an operad with a labelled-tree basis.
    pub fn from_operad(op: &Operad, arity_bound: usize) -> Result<Self> {
        if arity_bound > op.arity_bound() {
            return Err(Error::ArityBoundExceeded(format!("{} is built to arity {}", op.name(), op.arity_bound())));
        }
        let field = op.field();
        let mut comps = vec![Component::empty(0)];
        for n in 1..=arity_bound {
            let basis = op.basis(n);
            let index: HashMap<_, usize> = basis.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
            let vec_of = |l: &LinComb<crate::tree::Tree>| -> Result<SparseVec> {
                let mut v: SparseVec = l
                    .iter()
                    .map(|(t, c)| index.get(t).map(|&i| (i, c.clone())).ok_or_else(|| Error::Invalid(format!("{t:?} is not a basis tree"))))
                    .collect::<Result<_>>()?;
                v.sort_by_key(|e| e.0);
                Ok(v)
            };
            let mut swaps = Vec::new();
            for a in 0..n - 1 {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(a, a + 1);
                let mut col = Vec::new();
                for t in &basis {
                    let v = vec_of(&op.act(t, &perm))?;
                    match v.as_slice() {
                        [(k, c)] if c.is_one() || c.is_negative_one() => col.push((*k, c.is_negative_one() && !c.is_one())),
                        _ => return Err(Error::Invalid(format!("{} does not act by signed basis permutations", op.name()))),
                    }
                }
                swaps.push(col);
            }
            let diff = basis.iter().map(|t| vec_of(&op.differential(&LinComb::basis(field, t.clone())))).collect::<Result<_>>()?;
            comps.push(Component {
                names: basis.iter().map(|t| op.render(t)).collect(),
                degrees: basis.iter().map(|t| op.tree_degree(t)).collect(),
                diff,
                swaps,
            });
        }
        SigmaModule::new(field, comps)
    }

    fn swap_vec(&self, n: usize, a: usize, v: &[(usize, Scalar)]) -> SparseVec {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, c) in v {
            let (k, neg) = self.comps[n].swaps[a][*j];
            let e = out.entry(k).or_insert_with(|| self.field.zero());
            *e += &flip(neg, c);
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// The action of a permutation (one-line, 0-based) on basis element `j`.
    pub fn act(&self, n: usize, perm: &[usize], j: usize) -> (usize, bool) {
        let mut cur = (j, false);
        for &a in adjacent_decomposition(perm).iter().rev() {
            let (k, neg) = self.comps[n].swaps[a][cur.0];
            cur = (k, cur.1 ^ neg);
        }
        cur
    }

    /// Involution, braid and commutation relations of the transpositions,
    /// equivariance and squaring to zero of the differential.
    pub fn check(&self) -> std::result::Result<(), String> {
        let one = self.field.one();
        for (n, c) in self.comps.iter().enumerate().skip(1) {
            let dim = c.dim();
            if c.degrees.len() != dim || c.diff.len() != dim || c.swaps.len() != n - 1 {
                return Err(format!("arity {n}: inconsistent component sizes"));
            }
            for (a, s) in c.swaps.iter().enumerate() {
                if s.len() != dim {
                    return Err(format!("arity {n}: transposition {a} has the wrong size"));
                }
                for (j, &(k, neg)) in s.iter().enumerate() {
                    if c.degrees[k] != c.degrees[j] {
                        return Err(format!("arity {n}: transposition {a} changes degrees"));
                    }
                    if s[k] != (j, neg) {
                        return Err(format!("arity {n}: transposition {a} is not an involution"));
                    }
                }
            }
            let word = |seq: &[usize], j: usize| seq.iter().fold((j, false), |(x, sg), &a| (c.swaps[a][x].0, sg ^ c.swaps[a][x].1));
            for j in 0..dim {
                for a in 0..n.saturating_sub(1) {
                    if a + 1 < n - 1 && word(&[a, a + 1, a, a + 1, a, a + 1], j) != (j, false) {
                        return Err(format!("arity {n}: braid relation fails at {a}"));
                    }
                    for b in a + 2..n - 1 {
                        if word(&[a, b], j) != word(&[b, a], j) {
                            return Err(format!("arity {n}: transpositions {a} and {b} do not commute"));
                        }
                    }
                    let lhs = apply(&c.diff, &[(c.swaps[a][j].0, flip(c.swaps[a][j].1, &one))]);
                    let rhs = self.swap_vec(n, a, &c.diff[j]);
                    if lhs != rhs {
                        return Err(format!("arity {n}: the differential is not equivariant"));
                    }
                }
                if c.diff[j].iter().any(|(k, _)| c.degrees[*k] != c.degrees[j] - 1) {
                    return Err(format!("arity {n}: the differential does not lower degree by one"));
                }
                if !apply(&c.diff, &c.diff[j]).is_empty() {
                    return Err(format!("arity {n}: the differential does not square to zero"));
                }
            }
        }
        Ok(())
    }

    /// Arity `n` as a dg-module on the smallest window containing it.
    pub fn component_module(&self, n: usize) -> Result<DgModule> {
        let c = &self.comps[n];
        let lo = c.degrees.iter().copied().min().unwrap_or(0);
        let hi = c.degrees.iter().copied().max().unwrap_or(0);
        let window = DegreeWindow::new(lo, hi)?;
        let mut pos = vec![0usize; c.dim()];
        let mut names: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for j in 0..c.dim() {
            let v = names.entry(c.degrees[j]).or_default();
            pos[j] = v.len();
            v.push(c.names[j].clone());
        }
        let mut diff = BTreeMap::new();
        for d in lo + 1..=hi {
            let rows = names.get(&(d - 1)).map_or(0, Vec::len);
            let cols = names.get(&d).map_or(0, Vec::len);
            diff.insert(d, crate::linalg::SparseMatrix::zero(self.field, rows, cols));
        }
        for j in 0..c.dim() {
            for (k, x) in &c.diff[j] {
                diff.get_mut(&c.degrees[j]).unwrap().add_entry(pos[*k], pos[j], x);
            }
        }
        DgModule::from_matrices(self.field, window, names, diff)
    }
}

fn apply(diff: &[SparseVec], v: &[(usize, Scalar)]) -> SparseVec {
    v.iter().fold(Vec::new(), |acc, (j, c)| axpy(&acc, c, &diff[*j]))
}

fn same_setting(m: &SigmaModule, n: &SigmaModule) -> Result<usize> {
    if m.field != n.field {
        return Err(Error::FieldMismatch(m.field.to_string(), n.field.to_string()));
    }
    Ok(m.arity_bound().min(n.arity_bound()))
}

fn mask_of(labels: &[u32]) -> u64 {
    labels.iter().fold(0, |m, &l| m | 1 << l)
}

fn labels_of(mask: u64) -> Vec<u32> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

fn set_name(mask: u64) -> String {
    format!("{{{}}}", labels_of(mask).iter().map(|l| (l + 1).to_string()).collect::<Vec<_>>().join(","))
}

/// Collects keyed basis elements into a component: `swap(a, key)` and
/// `diff(key)` are given on keys.
fn assemble<K: Clone + Eq + std::hash::Hash>(
    n: usize,
    keys: Vec<(K, i64, String)>,
    swap: impl Fn(usize, &K) -> (K, bool),
    diff: impl Fn(&K) -> Vec<(K, Scalar)>,
) -> Component {
    let index: HashMap<K, usize> = keys.iter().enumerate().map(|(i, k)| (k.0.clone(), i)).collect();
    let mut comp = Component::empty(n);
    for (k, d, name) in &keys {
        comp.names.push(name.clone());
        comp.degrees.push(*d);
        let mut v: SparseVec = diff(k).into_iter().map(|(t, c)| (index[&t], c)).collect();
        v.sort_by_key(|e| e.0);
        comp.diff.push(v);
    }
    for a in 0..n.saturating_sub(1) {
        comp.swaps[a] = keys
            .iter()
            .map(|(k, _, _)| {
                let (t, neg) = swap(a, k);
                (index[&t], neg)
            })
            .collect();
    }
    comp
}

/// `(M ⊗ N)(r) = ⊕_{s+t=r} Σ_r ⊗_{Σ_s×Σ_t} M(s) ⊗ N(t)`, with basis
/// `(S, m, n)` for `S` the labels going to `M`.
pub fn sigma_tensor(m: &SigmaModule, n: &SigmaModule) -> Result<SigmaModule> {
    let bound = same_setting(m, n)?;
    let field = m.field;
    let mut comps = vec![Component::empty(0)];
    for r in 1..=bound {
        type Key = (u64, usize, usize);
        let mut keys: Vec<(Key, i64, String)> = Vec::new();
        for s in 1..r {
            let (cm, cn) = (&m.comps[s], &n.comps[r - s]);
            for sub in subsets_of_size(r, s) {
                let mask = sub.iter().fold(0u64, |a, &i| a | 1 << i);
                for i in 0..cm.dim() {
                    for j in 0..cn.dim() {
                        let name = format!("{}{}⊗{}", set_name(mask), cm.names[i], cn.names[j]);
                        keys.push(((mask, i, j), cm.degrees[i] + cn.degrees[j], name));
                    }
                }
            }
        }
        let swap = |a: usize, &(mask, i, j): &Key| {
            let (ina, inb) = (mask >> a & 1 == 1, mask >> (a + 1) & 1 == 1);
            let s = mask.count_ones() as usize;
            if ina && inb {
                let p = (mask & ((1 << a) - 1)).count_ones() as usize;
                let (k, neg) = m.comps[s].swaps[p][i];
                ((mask, k, j), neg)
            } else if !ina && !inb {
                let p = (!mask & ((1 << a) - 1)).count_ones() as usize;
                let (k, neg) = n.comps[r - s].swaps[p][j];
                ((mask, i, k), neg)
            } else {
                ((mask ^ (0b11 << a), i, j), false)
            }
        };
        let diff = |&(mask, i, j): &Key| {
            let s = mask.count_ones() as usize;
            let (cm, cn) = (&m.comps[s], &n.comps[r - s]);
            let mut out: Vec<(Key, Scalar)> = cm.diff[i].iter().map(|(k, c)| ((mask, *k, j), c.clone())).collect();
            let sg = field.sign(cm.degrees[i]);
            out.extend(cn.diff[j].iter().map(|(k, c)| ((mask, i, *k), &sg * c)));
            out
        };
        comps.push(assemble(r, keys, swap, diff));
    }
    SigmaModule::new(field, comps)
}

/// Set partitions of `0..r` into `k` blocks, each block a mask, blocks
/// ordered by their least element.
fn set_partitions(r: usize, k: usize) -> Vec<Vec<u64>> {
    fn rec(x: usize, r: usize, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if x == r {
            if cur.len() == k {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() + (r - x) < k {
            return;
        }
        for b in 0..cur.len() {
            cur[b] |= 1 << x;
            rec(x + 1, r, k, cur, out);
            cur[b] &= !(1 << x);
        }
        if cur.len() < k {
            cur.push(1 << x);
            rec(x + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, k, &mut Vec::new(), &mut out);
    out
}

/// All tuples choosing one basis index below each bound.
fn index_tuples(bounds: &[usize]) -> Vec<Vec<usize>> {
    bounds.iter().fold(vec![vec![]], |acc, &b| {
        acc.into_iter().flat_map(|t| (0..b).map(move |i| [t.clone(), vec![i]].concat())).collect()
    })
}

/// `(M ∘ N)(r) = ⊕_k M(k) ⊗_{Σ_k} (⊕ N(S_1) ⊗ .. ⊗ N(S_k))`. Σ_k permutes the
/// blocks freely, so the basis is two-level trees `(m; n_1, .., n_k)` with
/// input `l` of `m` receiving the block with the `l`-th smallest least label.
pub fn compose(m: &SigmaModule, n: &SigmaModule) -> Result<SigmaModule> {
    let bound = same_setting(m, n)?;
    let field = m.field;
    let mut comps = vec![Component::empty(0)];
    type Key = (usize, Vec<u64>, Vec<usize>);
    for r in 1..=bound {
        let mut keys: Vec<(Key, i64, String)> = Vec::new();
        for k in 1..=r {
            let cm = &m.comps[k];
            for blocks in set_partitions(r, k) {
                let sizes: Vec<usize> = blocks.iter().map(|b| n.comps[b.count_ones() as usize].dim()).collect();
                for i in 0..cm.dim() {
                    for js in index_tuples(&sizes) {
                        let mut deg = cm.degrees[i];
                        let mut parts = Vec::new();
                        for (b, &j) in blocks.iter().zip(&js) {
                            let cn = &n.comps[b.count_ones() as usize];
                            deg += cn.degrees[j];
                            parts.push(format!("{}{}", set_name(*b), cn.names[j]));
                        }
                        let name = format!("{}({})", cm.names[i], parts.join(","));
                        let mut key = vec![i];
                        key.extend(js);
                        keys.push(((k, blocks.clone(), key), deg, name));
                    }
                }
            }
        }
        let swap = |a: usize, key: &Key| {
            let (k, blocks, idx) = key;
            let (i, js) = (idx[0], &idx[1..]);
            let la = blocks.iter().position(|b| b >> a & 1 == 1).unwrap();
            let lb = blocks.iter().position(|b| b >> (a + 1) & 1 == 1).unwrap();
            let mut blocks = blocks.clone();
            let mut js = js.to_vec();
            let mut i = i;
            let mut neg = false;
            if la == lb {
                let b = blocks[la];
                let p = (b & ((1 << a) - 1)).count_ones() as usize;
                let (t, sg) = n.comps[b.count_ones() as usize].swaps[p][js[la]];
                js[la] = t;
                neg = sg;
            } else {
                let both_min = blocks[la].trailing_zeros() as usize == a && blocks[lb].trailing_zeros() as usize == a + 1;
                blocks[la] ^= 0b11 << a;
                blocks[lb] ^= 0b11 << a;
                if both_min {
                    // The blocks trade places in the canonical order: la + 1 == lb.
                    let (t, sg) = m.comps[*k].swaps[la][i];
                    i = t;
                    let dn = |l: usize, j: usize| n.comps[blocks[l].count_ones() as usize].degrees[j];
                    neg = sg ^ (dn(la, js[la]) * dn(lb, js[lb]) % 2 != 0);
                    blocks.swap(la, lb);
                    js.swap(la, lb);
                }
            }
            let mut idx = vec![i];
            idx.extend(js);
            ((*k, blocks, idx), neg)
        };
        let diff = |key: &Key| {
            let (k, blocks, idx) = key;
            let cm = &m.comps[*k];
            let mut out: Vec<(Key, Scalar)> = Vec::new();
            for (t, c) in &cm.diff[idx[0]] {
                let mut v = idx.clone();
                v[0] = *t;
                out.push(((*k, blocks.clone(), v), c.clone()));
            }
            let mut prefix = cm.degrees[idx[0]];
            for l in 0..*k {
                let cn = &n.comps[blocks[l].count_ones() as usize];
                let sg = field.sign(prefix);
                for (t, c) in &cn.diff[idx[l + 1]] {
                    let mut v = idx.clone();
                    v[l + 1] = *t;
                    out.push(((*k, blocks.clone(), v), &sg * c));
                }
                prefix += cn.degrees[idx[l + 1]];
            }
            out
        };
        comps.push(assemble(r, keys, swap, diff));
    }
    SigmaModule::new(field, comps)
}

fn convolve(a: &Dims, b: &Dims) -> Dims {
    let mut out = Dims::new();
    for (da, na) in a {
        for (db, nb) in b {
            *out.entry(da + db).or_insert(0) += na * nb;
        }
    }
    out
}

fn add_scaled(acc: &mut Dims, d: &Dims, c: usize) {
    for (k, v) in d {
        *acc.entry(*k).or_insert(0) += v * c;
    }
}

fn prune(d: Dims) -> Dims {
    d.into_iter().filter(|(_, v)| *v > 0).collect()
}

/// `dim (M⊗N)(r) = Σ_{s+t=r} C(r, s) · dim M(s) ⊗ N(t)`, graded.
pub fn tensor_dims_formula(m: &SigmaModule, n: &SigmaModule, r: usize) -> Dims {
    let mut out = Dims::new();
    for s in 1..r {
        add_scaled(&mut out, &convolve(&m.dims(s), &n.dims(r - s)), binomial(r, s));
    }
    prune(out)
}

/// `dim (M∘N)(r) = Σ_k (1/k!) Σ_{r_1+..+r_k=r} (r; r_1, .., r_k) · dim M(k) ⊗ N(r_1) ⊗ .. ⊗ N(r_k)`.
pub fn compose_dims_formula(m: &SigmaModule, n: &SigmaModule, r: usize) -> Dims {
    let mut out = Dims::new();
    for k in 1..=r {
        let mut sum = Dims::new();
        for c in compositions(r, k) {
            let mut multinomial = factorial(r);
            let mut d = m.dims(k);
            for &ri in &c {
                multinomial /= factorial(ri);
                d = convolve(&d, &n.dims(ri));
            }
            add_scaled(&mut sum, &d, multinomial);
        }
        for (deg, v) in sum {
            debug_assert_eq!(v % factorial(k), 0);
            *out.entry(deg).or_insert(0) += v / factorial(k);
        }
    }
    prune(out)
}

/// Graded dimension of a quotient: ambient keys with degrees, relations as
/// combinations of keys.
fn quotient_dims<K: Clone + Eq + std::hash::Hash>(field: CoeffField, keys: &[(K, i64)], relations: &[Vec<(K, Scalar)>]) -> Dims {
    let index: HashMap<&K, usize> = keys.iter().enumerate().map(|(i, (k, _))| (k, i)).collect();
    let mut ech: BTreeMap<i64, Echelon> = BTreeMap::new();
    let mut out = Dims::new();
    for (_, d) in keys {
        *out.entry(*d).or_insert(0) += 1;
    }
    for rel in relations {
        let Some((k0, _)) = rel.first() else { continue };
        let d = keys[index[k0]].1;
        let mut v: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, c) in rel {
            let e = v.entry(index[k]).or_insert_with(|| field.zero());
            *e += c;
        }
        let v: SparseVec = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if ech.entry(d).or_insert_with(|| Echelon::new(field)).insert(&v) {
            *out.get_mut(&d).unwrap() -= 1;
        }
    }
    prune(out)
}

/// Brute force: `k[Σ_r] ⊗ M(s) ⊗ N(t)` modulo `στ ⊗ x = σ ⊗ τx` for the
/// generators `τ` of `Σ_s × Σ_t`.
pub fn tensor_dims_bruteforce(m: &SigmaModule, n: &SigmaModule, r: usize) -> Dims {
    let field = m.field;
    let mut keys = Vec::new();
    let mut rels = Vec::new();
    let one = field.one();
    for s in 1..r {
        let (cm, cn) = (&m.comps[s], &n.comps[r - s]);
        for sigma in permutations(r) {
            for i in 0..cm.dim() {
                for j in 0..cn.dim() {
                    keys.push(((s, sigma.clone(), i, j), cm.degrees[i] + cn.degrees[j]));
                    for g in (0..s - 1).chain(s..r - 1) {
                        let mut st = sigma.clone();
                        st.swap(g, g + 1);
                        let (i2, j2, neg) = if g < s - 1 {
                            let (k, ng) = cm.swaps[g][i];
                            (k, j, ng)
                        } else {
                            let (k, ng) = cn.swaps[g - s][j];
                            (i, k, ng)
                        };
                        rels.push(vec![((s, st, i, j), one.clone()), ((s, sigma.clone(), i2, j2), flip(!neg, &one))]);
                    }
                }
            }
        }
    }
    quotient_dims(field, &keys, &rels)
}

/// Brute force: labelled two-level trees with the blocks in every order,
/// modulo `(s_a m; .., x_{a+1}, x_a, ..) = ± (m; .., x_a, x_{a+1}, ..)`.
pub fn compose_dims_bruteforce(m: &SigmaModule, n: &SigmaModule, r: usize) -> Dims {
    let field = m.field;
    let one = field.one();
    let mut keys = Vec::new();
    let mut rels = Vec::new();
    for k in 1..=r {
        let cm = &m.comps[k];
        for c in compositions(r, k) {
            let labels: Vec<u32> = (0..r as u32).collect();
            for blocks in crate::combinat::ordered_set_partitions(&labels, &c) {
                let masks: Vec<u64> = blocks.iter().map(|b| mask_of(b)).collect();
                let comp: Vec<&Component> = c.iter().map(|&ri| &n.comps[ri]).collect();
                let dims: Vec<usize> = comp.iter().map(|x| x.dim()).collect();
                for i in 0..cm.dim() {
                    for js in index_tuples(&dims) {
                        let deg = cm.degrees[i] + js.iter().zip(&comp).map(|(&j, x)| x.degrees[j]).sum::<i64>();
                        keys.push(((k, masks.clone(), i, js.clone()), deg));
                        for a in 0..k - 1 {
                            let (i2, ng) = cm.swaps[a][i];
                            let mut m2 = masks.clone();
                            m2.swap(a, a + 1);
                            let mut j2 = js.clone();
                            j2.swap(a, a + 1);
                            let kz = comp[a].degrees[js[a]] * comp[a + 1].degrees[js[a + 1]] % 2 != 0;
                            rels.push(vec![((k, masks.clone(), i, js.clone()), one.clone()), ((k, m2, i2, j2), flip(!(ng ^ kz), &one))]);
                        }
                    }
                }
            }
        }
    }
    quotient_dims(field, &keys, &rels)
}

/// `Sym(M, E) = ⊕_n (M(n) ⊗ E^{⊗n})_{Σ_n}` on `window`, computed as the
/// quotient by `(σm) ⊗ (σe) - m ⊗ e`; no averaging, so it is valid in every
/// characteristic.
pub fn sym_apply(m: &SigmaModule, e: &DgModule, window: DegreeWindow) -> Result<DgModule> {
    let field = m.field;
    if e.field() != field {
        return Err(Error::FieldMismatch(field.to_string(), e.field().to_string()));
    }
    // Flatten the basis of E.
    let mut flat: Vec<(i64, String)> = Vec::new();
    let mut offset: BTreeMap<i64, usize> = BTreeMap::new();
    for d in e.window().degrees() {
        offset.insert(d, flat.len());
        flat.extend(e.names(d).iter().map(|nm| (d, nm.clone())));
    }
    let mut ediff: Vec<SparseVec> = vec![Vec::new(); flat.len()];
    for d in e.window().min + 1..=e.window().max {
        for (row, col, c) in e.differential(d).entries() {
            ediff[offset[&d] + col].push((offset[&(d - 1)] + row, c.clone()));
        }
    }
    for v in &mut ediff {
        v.sort_by_key(|x| x.0);
    }
    type Key = (usize, usize, Vec<usize>);
    let mut keys: Vec<(Key, i64)> = Vec::new();
    for n in 1..=m.arity_bound() {
        let c = &m.comps[n];
        for i in 0..c.dim() {
            for es in index_tuples(&vec![flat.len(); n]) {
                let d = c.degrees[i] + es.iter().map(|&x| flat[x].0).sum::<i64>();
                if window.contains(d) {
                    keys.push(((n, i, es), d));
                }
            }
        }
    }
    let diff = |(n, i, es): &Key| {
        let c = &m.comps[*n];
        let mut out = LinComb::zero(field);
        for (t, x) in &c.diff[*i] {
            out.add_term((*n, *t, es.clone()), x.clone());
        }
        let mut prefix = c.degrees[*i];
        for (p, &x) in es.iter().enumerate() {
            let sg = field.sign(prefix);
            for (y, k) in &ediff[x] {
                let mut v = es.clone();
                v[p] = *y;
                out.add_term((*n, *i, v), &sg * k);
            }
            prefix += flat[x].0;
        }
        out
    };
    let name = |(n, i, es): &Key| {
        format!("{}⊗{}", m.comps[*n].names[*i], es.iter().map(|&x| flat[x].1.clone()).collect::<Vec<_>>().join("⊗"))
    };
    let keyed = Keyed::build_named(field, window, keys, diff, name)?;
    let mut relations: BTreeMap<i64, Echelon> = BTreeMap::new();
    for (d, ks) in &keyed.keys {
        let mut ech = Echelon::new(field);
        for (n, i, es) in ks {
            for a in 0..n - 1 {
                let (i2, neg) = m.comps[*n].swaps[a][*i];
                let mut e2 = es.clone();
                e2.swap(a, a + 1);
                let kz = flat[es[a]].0 * flat[es[a + 1]].0 % 2 != 0;
                let mut rel = LinComb::basis(field, (*n, i2, e2));
                rel = rel.scaled(&field.sign((neg ^ kz) as i64));
                rel.add_term((*n, *i, es.clone()), -field.one());
                ech.insert(&keyed.vector(&rel, *d)?);
            }
        }
        relations.insert(*d, ech);
    }
    keyed.module.quotient(&relations)
}

/// Summand types for random Σ-modules.
#[derive(Clone, Copy, Debug)]
enum Rep {
    Trivial,
    Sign,
    Regular,
    Subsets(usize),
}

fn rep_component(n: usize, rep: Rep) -> (Vec<String>, Vec<Vec<(usize, bool)>>) {
    match rep {
        Rep::Trivial => (vec!["t".into()], (0..n - 1).map(|_| vec![(0, false)]).collect()),
        Rep::Sign => (vec!["s".into()], (0..n - 1).map(|_| vec![(0, true)]).collect()),
        Rep::Regular => {
            let perms = permutations(n);
            let index: HashMap<&Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
            let swaps = (0..n - 1)
                .map(|a| {
                    perms
                        .iter()
                        .map(|p| {
                            let q: Vec<usize> = p.iter().map(|&v| if v == a { a + 1 } else if v == a + 1 { a } else { v }).collect();
                            (index[&q], false)
                        })
                        .collect()
                })
                .collect();
            let names = perms.iter().map(|p| format!("g{}", p.iter().map(|v| (v + 1).to_string()).collect::<String>())).collect();
            (names, swaps)
        }
        Rep::Subsets(k) => {
            let subs: Vec<u64> = subsets_of_size(n, k).iter().map(|s| s.iter().fold(0u64, |m, &i| m | 1 << i)).collect();
            let index: HashMap<u64, usize> = subs.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let swaps = (0..n - 1)
                .map(|a| {
                    subs.iter()
                        .map(|&s| {
                            let (x, y) = (s >> a & 1, s >> (a + 1) & 1);
                            let t = if x != y { s ^ (0b11 << a) } else { s };
                            (index[&t], false)
                        })
                        .collect()
                })
                .collect();
            (subs.iter().map(|&s| format!("p{}", set_name(s))).collect(), swaps)
        }
    }
}

/// A seeded random sparse Σ-module: each arity is a sum of at most two
/// trivial, sign, regular or subset representations in degrees `-2..=3`,
/// sometimes doubled into an acyclic cone.
pub fn random_sparse(field: CoeffField, arity_bound: usize, seed: u64) -> SigmaModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comps = vec![Component::empty(0)];
    for n in 1..=arity_bound {
        let mut comp = Component::empty(n);
        let summands = rng.gen_range(0..=2);
        for s in 0..summands {
            let rep = match rng.gen_range(0..4) {
                0 => Rep::Trivial,
                1 => Rep::Sign,
                2 if n <= 3 => Rep::Regular,
                _ => Rep::Subsets(rng.gen_range(1..=n)),
            };
            let (names, swaps) = rep_component(n, rep);
            let deg = rng.gen_range(-2..=3);
            let cone = rng.gen_bool(0.25);
            let copies = if cone { 2 } else { 1 };
            for copy in 0..copies {
                let base = comp.dim();
                for (j, nm) in names.iter().enumerate() {
                    comp.names.push(format!("{nm}.{s}{}", if copy == 1 { "'" } else { "" }));
                    comp.degrees.push(deg - copy as i64);
                    comp.diff.push(if cone && copy == 0 { vec![(base + names.len() + j, field.one())] } else { vec![] });
                }
                for (a, sw) in swaps.iter().enumerate() {
                    comp.swaps[a].extend(sw.iter().map(|&(k, neg)| (base + k, neg)));
                }
            }
        }
        comps.push(comp);
    }
    SigmaModule::new(field, comps).expect("random modules are valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoeffField {
        CoeffField::Rationals
    }

    fn total(d: &Dims) -> usize {
        d.values().sum()
    }

    #[test]
    fn operads_as_sigma_modules() {
        let k = SigmaModule::from_operad(&Operad::stasheff(q(), 4), 4).unwrap();
        let as_ = SigmaModule::from_operad(&Operad::associative(q(), 4), 4).unwrap();
        let com = SigmaModule::from_operad(&Operad::commutative(q(), 4), 4).unwrap();
        assert_eq!(total(&as_.dims(3)), 6);
        assert_eq!(total(&com.dims(3)), 1);
        assert_eq!(k.dims(3), Dims::from([(0, 12), (1, 6)]));
        assert!(k.check().is_ok());
    }

    #[test]
    fn tensor_examples() {
        let com = SigmaModule::from_operad(&Operad::commutative(q(), 3), 3).unwrap();
        let t = sigma_tensor(&com, &com).unwrap();
        assert_eq!(total(&t.dims(2)), 2);
        assert_eq!(total(&t.dims(1)), 0);
        // Tensoring with the unit I is not the identity.
        let i = SigmaModule::unit(q(), 3);
        let ti = sigma_tensor(&com, &i).unwrap();
        assert_ne!(ti.dims(2), com.dims(2));
    }

    #[test]
    fn compose_examples() {
        let com = SigmaModule::from_operad(&Operad::commutative(q(), 4), 4).unwrap();
        let as_ = SigmaModule::from_operad(&Operad::associative(q(), 4), 4).unwrap();
        let i = SigmaModule::unit(q(), 4);
        assert_eq!(total(&compose(&com, &com).unwrap().dims(2)), 2);
        for r in 1..=4 {
            assert_eq!(compose(&i, &as_).unwrap().dims(r), as_.dims(r));
            assert_eq!(compose(&as_, &i).unwrap().dims(r), as_.dims(r));
            let aa = compose(&as_, &as_).unwrap();
            assert_eq!(aa.dims(r), compose_dims_formula(&as_, &as_, r));
            assert_eq!(aa.dims(r), compose_dims_bruteforce(&as_, &as_, r));
        }
    }

    #[test]
    fn random_modules_match_oracles() {
        for seed in 0..6 {
            let m = random_sparse(q(), 4, seed);
            let n = random_sparse(q(), 4, seed + 100);
            let t = sigma_tensor(&m, &n).unwrap();
            let c = compose(&m, &n).unwrap();
            for r in 1..=4 {
                assert_eq!(prune(t.dims(r)), tensor_dims_formula(&m, &n, r), "seed {seed} arity {r}");
                assert_eq!(tensor_dims_formula(&m, &n, r), tensor_dims_bruteforce(&m, &n, r));
                assert_eq!(prune(c.dims(r)), compose_dims_formula(&m, &n, r), "seed {seed} arity {r}");
                assert_eq!(compose_dims_formula(&m, &n, r), compose_dims_bruteforce(&m, &n, r));
            }
        }
    }

    #[test]
    fn symmetric_tensors() {
        let w = DegreeWindow::new(0, 3).unwrap();
        let x0 = DgModule::new(q(), w, vec![("x".into(), 0)], vec![]).unwrap();
        let com = SigmaModule::from_operad(&Operad::commutative(q(), 3), 3).unwrap();
        let as_ = SigmaModule::from_operad(&Operad::associative(q(), 3), 3).unwrap();
        let i = SigmaModule::unit(q(), 3);
        assert_eq!(sym_apply(&com, &x0, w).unwrap().dims()[&0], 3);
        assert_eq!(sym_apply(&as_, &x0, w).unwrap().dims()[&0], 3);
        assert_eq!(sym_apply(&i, &x0, w).unwrap().dims(), x0.dims());
        // An odd generator: exterior over Q, divided powers over F2.
        let w1 = DegreeWindow::new(0, 4).unwrap();
        let x1 = DgModule::new(q(), w1, vec![("x".into(), 1)], vec![]).unwrap();
        assert_eq!(total(&sym_apply(&com, &x1, w1).unwrap().dims()), 1);
        let f2 = CoeffField::Prime(2);
        let com2 = SigmaModule::from_operad(&Operad::commutative(f2, 3), 3).unwrap();
        let x1f = DgModule::new(f2, w1, vec![("x".into(), 1)], vec![]).unwrap();
        assert_eq!(total(&sym_apply(&com2, &x1f, w1).unwrap().dims()), 3);
    }

    #[test]
    fn actions_compose_to_a_group_action() {
        let m = random_sparse(q(), 4, 7);
        let c = compose(&m, &m).unwrap();
        assert!(c.check().is_ok());
        let perm = vec![2, 0, 3, 1];
        for j in 0..c.component(4).dim() {
            let (k, s1) = c.act(4, &perm, j);
            let inv: Vec<usize> = (0..4).map(|v| perm.iter().position(|&p| p == v).unwrap()).collect();
            let (back, s2) = c.act(4, &inv, k);
            assert_eq!((back, s1 ^ s2), (j, false));
        }
    }
}
