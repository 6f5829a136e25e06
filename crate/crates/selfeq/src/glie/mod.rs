// SPDX-License-Identifier: MIT
//! Free graded Lie algebras over ℚ.
//!
//! Conventions (homological grading, all generators in degree ≥ 1):
//!
//! * antisymmetry  `[x,y] = (-1)^{|x||y|+1} [y,x]`
//! * Jacobi        `(-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] +
//!                  (-1)^{|z||y|}[z,[x,y]] = 0`
//! * `[x,x] = 0` for even `|x|`, and `[x,[x,x]] = 0` for odd `|x|`.
//!
//! Elements are stored in a canonical basis of **left-normed** bracket words
//! `[[...[g1,g2],g3],...,gk]`, identified with their leaf sequences.  The
//! faithful embedding into the tensor algebra,
//! `[x,y] ↦ x⊗y − (-1)^{|x||y|} y⊗x`, decides linear independence exactly;
//! candidates are enumerated by (word length, then leaf sequence) and kept
//! greedily until the dimension predicted by the Poincaré–Birkhoff–Witt
//! Hilbert-series identity is reached.  Everything is computed over exact
//! rationals and memoized per algebra, so bases, structure constants, and
//! printed output are deterministic.

use crate::linalg::{Mat, Solver};
use crate::poly::Ring;
use crate::{Error, Q, Result};
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Generator index into a [`GenSet`].
pub type GenId = u8;

/// Tensor-algebra element: word (sequence of generators) → coefficient.
pub type Tensor = BTreeMap<Vec<GenId>, Q>;

/// Multidegree: how many times each generator occurs.
pub type Multideg = Vec<u16>;

/// An ordered set of graded generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSet {
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl GenSet {
    pub fn new(gens: Vec<(String, u32)>) -> Result<GenSet> {
        if gens.len() > 64 {
            return Err(Error::unsupported("more than 64 generators"));
        }
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (n, d) in gens {
            if d == 0 {
                return Err(Error::input(format!(
                    "generator {n} has degree 0; generators must have degree >= 1"
                )));
            }
            if names.contains(&n) {
                return Err(Error::input(format!("duplicate generator name {n}")));
            }
            names.push(n);
            degrees.push(d);
        }
        Ok(GenSet { names, degrees })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn degree(&self, g: GenId) -> u32 {
        self.degrees[g as usize]
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.names[g as usize]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn by_name(&self, name: &str) -> Option<GenId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as GenId)
    }
}

/// Left-normed bracket word, stored as its leaf sequence:
/// `Word([a,b,c])` means `[[a,b],c]`.  A single leaf is a generator.
///
/// Ordered by (length, then leaf sequence); generators sort first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<GenId>);

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl Word {
    pub fn gen(g: GenId) -> Word {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_generator(&self) -> bool {
        self.0.len() == 1
    }

    pub fn degree(&self, gens: &GenSet) -> u32 {
        self.0.iter().map(|&g| gens.degree(g)).sum()
    }

    pub fn multideg(&self, gens: &GenSet) -> Multideg {
        let mut m = vec![0u16; gens.len()];
        for &g in &self.0 {
            m[g as usize] += 1;
        }
        m
    }

    /// Render as nested brackets: `[[u1,u2],u1]`.
    pub fn render(&self, gens: &GenSet) -> String {
        let mut s = gens.name(self.0[0]).to_string();
        for &g in &self.0[1..] {
            s = format!("[{},{}]", s, gens.name(g));
        }
        s
    }
}

/// Homogeneous Lie element with coefficients in a ring `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElt<R: Ring> {
    pub degree: u32,
    pub terms: BTreeMap<Word, R>,
}

impl<R: Ring> LieElt<R> {
    pub fn zero(degree: u32) -> Self {
        LieElt {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: R) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().add_ref(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        // Zero elements are degree-agnostic: adopt the other side's degree.
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "inhomogeneous sum");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LieElt {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &R) -> Self {
        if s.is_zero() {
            return LieElt::zero(self.degree);
        }
        let mut out = LieElt::zero(self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.mul_ref(s));
        }
        out
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        if s.is_zero() {
            return LieElt::zero(self.degree);
        }
        let mut out = LieElt::zero(self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.scale_q(s));
        }
        out
    }

    pub fn map_coeffs<S: Ring>(&self, f: &dyn Fn(&R) -> S) -> LieElt<S> {
        let mut out = LieElt::zero(self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

impl LieElt<Q> {
    pub fn gen(gens: &GenSet, g: GenId) -> Self {
        let mut e = LieElt::zero(gens.degree(g));
        e.add_term(Word::gen(g), Q::one());
        e
    }

    pub fn render(&self, gens: &GenSet) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&format!("{}*", abs));
            }
            out.push_str(&w.render(gens));
        }
        out
    }
}

/// Canonical basis of one graded piece, with the solver that expresses a
/// tensor in it.
pub struct BasisData {
    pub degree: u32,
    /// Canonical basis words in canonical order.
    pub words: Vec<Word>,
    pub index: HashMap<Word, usize>,
    /// Per multidegree: (tensor keys, solver over those keys, member indices).
    blocks: HashMap<Multideg, Block>,
}

struct Block {
    keys: Vec<Vec<GenId>>,
    key_index: HashMap<Vec<GenId>, usize>,
    solver: Solver,
    members: Vec<usize>,
}

/// A free graded Lie algebra: generators plus memoized bases, embeddings,
/// and structure constants.  Cheap to share behind `Arc`.
pub struct LieCtx {
    pub gens: GenSet,
    tensors: Mutex<HashMap<Word, Arc<Tensor>>>,
    bases: Mutex<HashMap<u32, Arc<BasisData>>>,
    brackets: Mutex<HashMap<(Word, Word), Arc<Vec<(Word, Q)>>>>,
    dims: Mutex<Vec<usize>>,
}

impl LieCtx {
    pub fn new(gens: GenSet) -> Arc<LieCtx> {
        Arc::new(LieCtx {
            gens,
            tensors: Mutex::new(HashMap::new()),
            bases: Mutex::new(HashMap::new()),
            brackets: Mutex::new(HashMap::new()),
            dims: Mutex::new(vec![0]),
        })
    }

    /// Faithful embedding of a left-normed word into the tensor algebra:
    /// `emb([w,x]) = emb(w)⊗x − (-1)^{|w||x|} x⊗emb(w)`.
    pub fn tensor_of_word(&self, w: &Word) -> Arc<Tensor> {
        if let Some(t) = self.tensors.lock().unwrap().get(w) {
            return t.clone();
        }
        let t = if w.0.len() == 1 {
            let mut t = Tensor::new();
            t.insert(vec![w.0[0]], Q::one());
            t
        } else {
            let prefix = Word(w.0[..w.0.len() - 1].to_vec());
            let x = w.0[w.0.len() - 1];
            let tp = self.tensor_of_word(&prefix);
            let dp = prefix.degree(&self.gens);
            let dx = self.gens.degree(x);
            let sign_flip = (dp * dx) % 2 == 1;
            let mut t = Tensor::new();
            for (key, c) in tp.iter() {
                // emb(w') ⊗ x
                let mut right = key.clone();
                right.push(x);
                add_tensor(&mut t, right, c.clone());
                // − (−1)^{|w'||x|} x ⊗ emb(w')
                let mut left = Vec::with_capacity(key.len() + 1);
                left.push(x);
                left.extend_from_slice(key);
                let s = if sign_flip { c.clone() } else { -c.clone() };
                add_tensor(&mut t, left, s);
            }
            t
        };
        let arc = Arc::new(t);
        self.tensors
            .lock()
            .unwrap()
            .insert(w.clone(), arc.clone());
        arc
    }

    /// Tensor image of a rational Lie element.
    pub fn to_tensor(&self, e: &LieElt<Q>) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in &e.terms {
            let t = self.tensor_of_word(w);
            for (key, tc) in t.iter() {
                add_tensor(&mut out, key.clone(), tc * c);
            }
        }
        out
    }

    /// Dimension of the degree-`d` component (Hilbert-series identity
    /// `T(V) = Λ(L_odd) ⊗ Sym(L_even)`, peeled degree by degree).
    pub fn dimension(&self, d: u32) -> usize {
        let d = d as usize;
        let mut dims = self.dims.lock().unwrap();
        if d < dims.len() {
            return dims[d];
        }
        // a[k] = dim of the degree-k piece of the tensor algebra.
        let mut a = vec![0i128; d + 1];
        a[0] = 1;
        for k in 1..=d {
            for &nd in self.gens.degrees() {
                let nd = nd as usize;
                if nd <= k {
                    a[k] += a[k - nd];
                }
            }
        }
        // p = coefficients of the product of the factors for degrees < k.
        let mut p = vec![0i128; d + 1];
        p[0] = 1;
        let mut out = vec![0usize; d + 1];
        for k in 1..=d {
            let l = (a[k] - p[k]) as usize;
            out[k] = l;
            if l > 0 {
                // Multiply p by the degree-k factor, truncated at degree d.
                let lk = l as i128;
                let mut factor = vec![0i128; d + 1];
                factor[0] = 1;
                if k % 2 == 1 {
                    // (1 + t^k)^l
                    let mut coef = 1i128;
                    let mut j = 0usize;
                    while (j + 1) * k <= d && j < l {
                        coef = coef * (lk - j as i128) / (j as i128 + 1);
                        factor[(j + 1) * k] = coef;
                        j += 1;
                    }
                } else {
                    // (1 - t^k)^{-l} = Σ C(l-1+m, m) t^{km}
                    let mut coef = 1i128;
                    let mut m = 0usize;
                    while (m + 1) * k <= d {
                        coef = coef * (lk + m as i128) / (m as i128 + 1);
                        factor[(m + 1) * k] = coef;
                        m += 1;
                    }
                }
                let mut np = vec![0i128; d + 1];
                for i in 0..=d {
                    if p[i] == 0 {
                        continue;
                    }
                    for j in 0..=(d - i) {
                        if factor[j] != 0 {
                            np[i + j] += p[i] * factor[j];
                        }
                    }
                }
                p = np;
            }
        }
        // Extend the cached prefix.
        let mut full = vec![0usize; d + 1];
        full[..dims.len()].copy_from_slice(&dims);
        for k in dims.len()..=d {
            full[k] = out[k];
        }
        *dims = full;
        dims[d]
    }

    /// Canonical basis of the degree-`d` component.
    pub fn basis(&self, d: u32) -> Arc<BasisData> {
        if let Some(b) = self.bases.lock().unwrap().get(&d) {
            return b.clone();
        }
        let b = Arc::new(self.compute_basis(d));
        self.bases.lock().unwrap().insert(d, b.clone());
        b
    }

    fn compute_basis(&self, d: u32) -> BasisData {
        let expected = self.dimension(d);
        let mut words: Vec<Word> = Vec::with_capacity(expected);
        // Per multidegree: incremental forward elimination for independence.
        let mut elims: HashMap<Multideg, SparseElim> = HashMap::new();
        let mut chosen: HashMap<Multideg, Vec<usize>> = HashMap::new();
        let mut tensors: Vec<Arc<Tensor>> = Vec::new();

        'outer: for len in 1..=(d as usize) {
            if words.len() == expected {
                break;
            }
            if (len as u32) > d {
                break;
            }
            let mut seq: Vec<GenId> = Vec::new();
            // Depth-first enumeration of leaf sequences of this length with
            // total degree d, in lexicographic order.
            if !self.enum_words(d, len, &mut seq, &mut |w: &Word| {
                let t = self.tensor_of_word(w);
                if t.is_empty() {
                    return true; // identically zero word (e.g. [x,x] even x)
                }
                let md = w.multideg(&self.gens);
                let elim = elims.entry(md.clone()).or_default();
                if elim.insert((*t).clone()) {
                    chosen.entry(md).or_default().push(words.len());
                    words.push(w.clone());
                    tensors.push(t);
                }
                words.len() < expected
            }) {
                break 'outer;
            }
        }

        if words.len() != expected {
            panic!(
                "internal error: left-normed span reached {} of {} in degree {}",
                words.len(),
                expected,
                d
            );
        }

        // Build per-multidegree solvers.
        let mut blocks = HashMap::new();
        for (md, members) in chosen {
            let mut keyset: std::collections::BTreeSet<Vec<GenId>> = Default::default();
            for &i in &members {
                keyset.extend(tensors[i].keys().cloned());
            }
            let keys: Vec<Vec<GenId>> = keyset.into_iter().collect();
            let key_index: HashMap<Vec<GenId>, usize> = keys
                .iter()
                .enumerate()
                .map(|(i, k)| (k.clone(), i))
                .collect();
            let mut mat = Mat::zeros(keys.len(), members.len());
            for (col, &i) in members.iter().enumerate() {
                for (key, c) in tensors[i].iter() {
                    mat.a[key_index[key]][col] = c.clone();
                }
            }
            blocks.insert(
                md,
                Block {
                    keys,
                    key_index,
                    solver: Solver::new(&mat),
                    members,
                },
            );
        }

        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        BasisData {
            degree: d,
            words,
            index,
            blocks,
        }
    }

    /// Enumerate leaf sequences of given length and total degree in lex
    /// order, calling `f` on each; `f` returns false to stop everything.
    /// Returns false if stopped early.
    fn enum_words(
        &self,
        remaining: u32,
        len: usize,
        seq: &mut Vec<GenId>,
        f: &mut dyn FnMut(&Word) -> bool,
    ) -> bool {
        if len == 0 {
            if remaining == 0 {
                return f(&Word(seq.clone()));
            }
            return true;
        }
        for g in 0..self.gens.len() as GenId {
            let dg = self.gens.degree(g);
            if dg > remaining {
                continue;
            }
            // Enough degree left for the remaining leaves (each ≥ 1).
            if remaining - dg < (len as u32) - 1 {
                continue;
            }
            seq.push(g);
            let ok = self.enum_words(remaining - dg, len - 1, seq, f);
            seq.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    /// Express a homogeneous tensor (image of a Lie element) in the canonical
    /// basis of degree `d`.
    pub fn tensor_coords(&self, d: u32, t: &Tensor) -> Result<Vec<(usize, Q)>> {
        if t.is_empty() {
            return Ok(Vec::new());
        }
        let basis = self.basis(d);
        let first_key = t.keys().next().unwrap();
        let mut md = vec![0u16; self.gens.len()];
        for &g in first_key {
            md[g as usize] += 1;
        }
        let Some(block) = basis.blocks.get(&md) else {
            return Err(Error::internal(format!(
                "tensor outside Lie span in degree {d}"
            )));
        };
        let mut dense = vec![Q::zero(); block.keys.len()];
        for (key, c) in t {
            let Some(&i) = block.key_index.get(key) else {
                return Err(Error::internal(format!(
                    "tensor outside Lie span in degree {d}"
                )));
            };
            dense[i] = c.clone();
        }
        let Some(x) = block.solver.solve(&dense) else {
            return Err(Error::internal(format!(
                "tensor outside Lie span in degree {d}"
            )));
        };
        let mut out = Vec::new();
        for (col, c) in x.into_iter().enumerate() {
            if !c.is_zero() {
                out.push((block.members[col], c));
            }
        }
        Ok(out)
    }

    /// Structure constants: `[wa, wb]` expanded in the canonical basis.
    pub fn bracket_words(&self, wa: &Word, wb: &Word) -> Arc<Vec<(Word, Q)>> {
        let key = (wa.clone(), wb.clone());
        if let Some(r) = self.brackets.lock().unwrap().get(&key) {
            return r.clone();
        }
        let ta = self.tensor_of_word(wa);
        let tb = self.tensor_of_word(wb);
        let da = wa.degree(&self.gens);
        let db = wb.degree(&self.gens);
        let sign_flip = (da * db) % 2 == 1;
        let mut t = Tensor::new();
        for (ka, ca) in ta.iter() {
            for (kb, cb) in tb.iter() {
                let mut ab = ka.clone();
                ab.extend_from_slice(kb);
                add_tensor(&mut t, ab, ca * cb);
                let mut ba = kb.clone();
                ba.extend_from_slice(ka);
                let c = ca * cb;
                add_tensor(&mut t, ba, if sign_flip { c } else { -c });
            }
        }
        let coords = self
            .tensor_coords(da + db, &t)
            .expect("bracket of basis words stays in the Lie algebra");
        let basis = self.basis(da + db);
        let result: Vec<(Word, Q)> = coords
            .into_iter()
            .map(|(i, c)| (basis.words[i].clone(), c))
            .collect();
        let arc = Arc::new(result);
        self.brackets.lock().unwrap().insert(key, arc.clone());
        arc
    }

    /// Graded Lie bracket of homogeneous elements.
    pub fn bracket<R: Ring>(&self, x: &LieElt<R>, y: &LieElt<R>) -> LieElt<R> {
        let mut out = LieElt::zero(x.degree + y.degree);
        for (wa, ca) in &x.terms {
            for (wb, cb) in &y.terms {
                let c = ca.mul_ref(cb);
                if c.is_zero() {
                    continue;
                }
                for (w, s) in self.bracket_words(wa, wb).iter() {
                    out.add_term(w.clone(), c.scale_q(s));
                }
            }
        }
        out
    }

    /// Canonicalize: express an arbitrary rational element (already in basis
    /// words) — used by tests to normalize tensor data.
    pub fn from_tensor(&self, d: u32, t: &Tensor) -> Result<LieElt<Q>> {
        // Group by multidegree, solve each block.
        let mut by_md: HashMap<Multideg, Tensor> = HashMap::new();
        for (key, c) in t {
            let mut md = vec![0u16; self.gens.len()];
            for &g in key {
                md[g as usize] += 1;
            }
            by_md.entry(md).or_default().insert(key.clone(), c.clone());
        }
        let basis = self.basis(d);
        let mut out = LieElt::zero(d);
        for (_, part) in by_md {
            for (i, c) in self.tensor_coords(d, &part)? {
                out.add_term(basis.words[i].clone(), c);
            }
        }
        Ok(out)
    }
}

fn add_tensor(t: &mut Tensor, key: Vec<GenId>, c: Q) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match t.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let v = e.get() + &c;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

/// Incremental forward elimination over sparse tensor vectors.
#[derive(Default)]
struct SparseElim {
    /// Rows in echelon form: (pivot key, row with pivot coefficient 1),
    /// ordered by insertion; pivots pairwise distinct.
    rows: Vec<(Vec<GenId>, Tensor)>,
}

impl SparseElim {
    /// Reduce `v` by the stored rows; if nonzero remains, normalize and store
    /// it and report independence.
    fn insert(&mut self, mut v: Tensor) -> bool {
        for (pivot, row) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                if c.is_zero() {
                    continue;
                }
                for (key, rc) in row {
                    let delta = -(rc * &c);
                    add_tensor(&mut v, key.clone(), delta);
                }
            }
        }
        let Some((pivot, pc)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Q::one() / pc;
        let row: Tensor = v.iter().map(|(k, c)| (k.clone(), c * &inv)).collect();
        self.rows.push((pivot, row));
        true
    }
}
