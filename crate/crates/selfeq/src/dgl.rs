// SPDX-License-Identifier: MIT
//! Differential graded Lie (Quillen) models of finite cell complexes.
//!
//! A sphere `Sⁿ` (n ≥ 2) contributes a generator of degree n−1 with zero
//! differential; a cell `eᵐ` (m ≥ 3) attached along a Whitehead-bracket
//! expression contributes a generator of degree m−1 whose differential is the
//! corresponding Lie element (degree m−2).  The differential extends as a
//! degree −1 derivation with Koszul signs, and `H_d(L) ≅ π_{d+1}(X) ⊗ ℚ`.
//!
//! `torsion` and `0` attachments both yield a zero differential: rationally
//! the cell splits off as a sphere.

use crate::glie::{GenId, GenSet, LieCtx, LieElt, Word};
use crate::linalg::{Elim, Mat, Solver};
use crate::poly::Ring;
use crate::{Error, Q, Result};
use num::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Whitehead-bracket expression over named classes.
#[derive(Debug, Clone, PartialEq)]
pub enum BracketExpr {
    Gen(String),
    Br(Box<BracketExpr>, Box<BracketExpr>),
}

impl BracketExpr {
    pub fn gen(n: &str) -> BracketExpr {
        BracketExpr::Gen(n.to_string())
    }

    pub fn br(a: BracketExpr, b: BracketExpr) -> BracketExpr {
        BracketExpr::Br(Box::new(a), Box::new(b))
    }

    /// Left-normed bracket of named classes.
    pub fn left(names: &[&str]) -> BracketExpr {
        let mut e = BracketExpr::gen(names[0]);
        for n in &names[1..] {
            e = BracketExpr::br(e, BracketExpr::gen(n));
        }
        e
    }
}

/// How a cell is attached.
#[derive(Debug, Clone, PartialEq)]
pub enum Attach {
    /// Wedge summand: a sphere, no attachment.
    Sphere,
    /// Explicit zero attaching class.
    Zero,
    /// Torsion attaching class: rationally trivial, so the differential is 0.
    Torsion,
    /// ℚ-linear combination of bracket expressions in earlier cells.
    Class(Vec<(Q, BracketExpr)>),
}

/// One cell of a complex: `Sphere` gives `Sⁿ`, anything else a cell `eⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub name: String,
    pub dim: u32,
    pub attach: Attach,
}

/// Ordered cell list describing a finite complex.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    pub name: String,
    pub cells: Vec<CellSpec>,
}

impl SpaceSpec {
    pub fn sphere(name: &str, dim: u32) -> CellSpec {
        CellSpec {
            name: name.to_string(),
            dim,
            attach: Attach::Sphere,
        }
    }

    pub fn cell(name: &str, dim: u32, terms: Vec<(Q, BracketExpr)>) -> CellSpec {
        CellSpec {
            name: name.to_string(),
            dim,
            attach: Attach::Class(terms),
        }
    }
}

/// Cell structure of ℂPⁿ for 1 ≤ n ≤ 5: S² plus one cell in each even
/// dimension through 2n.  The attaching coefficients are normalized so that
/// ∂u₃ = [u₁,u₁] exactly; the higher ones are then forced:
/// ∂u₅ = 3[u₁,u₃], ∂u₇ = 4[u₁,u₅] + 3[u₃,u₃], ∂u₉ = 5[u₁,u₇] + 10[u₃,u₅].
pub fn cp_space(n: u32) -> Result<SpaceSpec> {
    if n < 1 {
        return Err(Error::input("complex projective space needs n >= 1"));
    }
    if n > 5 {
        return Err(Error::unsupported(
            "complex projective space beyond CP^5 is not built in",
        ));
    }
    let term = |c: i64, names: &[&str]| (crate::qi(c), BracketExpr::left(names));
    let pair = |c: i64, a: &str, b: &str| {
        (
            crate::qi(c),
            BracketExpr::br(BracketExpr::gen(a), BracketExpr::gen(b)),
        )
    };
    let mut cells = vec![SpaceSpec::sphere("u1", 2)];
    if n >= 2 {
        cells.push(SpaceSpec::cell("u3", 4, vec![term(1, &["u1", "u1"])]));
    }
    if n >= 3 {
        cells.push(SpaceSpec::cell("u5", 6, vec![term(3, &["u1", "u3"])]));
    }
    if n >= 4 {
        cells.push(SpaceSpec::cell(
            "u7",
            8,
            vec![term(4, &["u1", "u5"]), term(3, &["u3", "u3"])],
        ));
    }
    if n >= 5 {
        cells.push(SpaceSpec::cell(
            "u9",
            10,
            vec![pair(5, "u1", "u7"), pair(10, "u3", "u5")],
        ));
    }
    Ok(SpaceSpec {
        name: format!("CP{n}"),
        cells,
    })
}

/// S³ ∨ S⁵ with one 12-cell attached along a combination of two iterated
/// Whitehead products: ∂w = a[a,[a,[a,b]]] + b[b,[a,b]].
pub fn three_cell_space(a: i64, b: i64) -> SpaceSpec {
    let term = |c: i64, names: &[&str]| (crate::qi(c), right_bracket(names));
    SpaceSpec {
        name: format!("three-cell({a},{b})"),
        cells: vec![
            SpaceSpec::sphere("a", 3),
            SpaceSpec::sphere("b", 5),
            SpaceSpec::cell(
                "w",
                12,
                vec![term(a, &["a", "a", "a", "b"]), term(b, &["b", "a", "b"])],
            ),
        ],
    }
}

/// S² ∨ S³ with a 4-cell attached by a·[u1,u1] and a 6-cell attached by
/// b·[[u1,u2],u1] + c·[u1,u3].
pub fn four_cell_space(a: i64, b: i64, c: i64) -> SpaceSpec {
    let term = |c: i64, names: &[&str]| (crate::qi(c), BracketExpr::left(names));
    SpaceSpec {
        name: format!("four-cell({a},{b},{c})"),
        cells: vec![
            SpaceSpec::sphere("u1", 2),
            SpaceSpec::sphere("u2", 3),
            SpaceSpec::cell("u3", 4, vec![term(a, &["u1", "u1"])]),
            SpaceSpec::cell(
                "u5",
                6,
                vec![term(b, &["u1", "u2", "u1"]), term(c, &["u1", "u3"])],
            ),
        ],
    }
}

/// ℂP⁴ ∨ S³ with the top cell re-attached: the 4-, 6- and 8-cells carry the
/// projective-space attachments, while the 10-cell mixes an iterated
/// Whitehead product of the two bottom spheres (weight a) with the
/// projective-space class (weight b):
/// ∂u9 = a[[[u1,u2],u2],[u1,u2]] + b(5[u1,u7] + 10[u3,u5]).
pub fn four_attach_space(a: i64, b: i64) -> SpaceSpec {
    let term = |c: i64, names: &[&str]| (crate::qi(c), BracketExpr::left(names));
    let w12 = BracketExpr::left(&["u1", "u2"]);
    let a_class = BracketExpr::br(
        BracketExpr::br(w12.clone(), BracketExpr::gen("u2")),
        w12,
    );
    SpaceSpec {
        name: format!("four-attach({a},{b})"),
        cells: vec![
            SpaceSpec::sphere("u1", 2),
            SpaceSpec::sphere("u2", 3),
            SpaceSpec::cell("u3", 4, vec![term(1, &["u1", "u1"])]),
            SpaceSpec::cell("u5", 6, vec![term(3, &["u1", "u3"])]),
            SpaceSpec::cell(
                "u7",
                8,
                vec![term(4, &["u1", "u5"]), term(3, &["u3", "u3"])],
            ),
            SpaceSpec::cell(
                "u9",
                10,
                vec![
                    (crate::qi(a), a_class),
                    term(5 * b, &["u1", "u7"]),
                    term(10 * b, &["u3", "u5"]),
                ],
            ),
        ],
    }
}

/// ℂP² ∨ S³ with one 12-cell attached along a combination of three weight-5
/// brackets in W = [u2,u1] and H = [u1,u3]:
/// ∂u11 = a[[[W,u2],W],u2] + b[[u2,H],H] + c[[W,H],W].
pub fn mimura_toda_space(a: i64, b: i64, c: i64) -> SpaceSpec {
    let w = || BracketExpr::left(&["u2", "u1"]);
    let h = || BracketExpr::left(&["u1", "u3"]);
    let a_class = BracketExpr::br(
        BracketExpr::br(BracketExpr::br(w(), BracketExpr::gen("u2")), w()),
        BracketExpr::gen("u2"),
    );
    let b_class = BracketExpr::br(BracketExpr::br(BracketExpr::gen("u2"), h()), h());
    let c_class = BracketExpr::br(BracketExpr::br(w(), h()), w());
    SpaceSpec {
        name: format!("mimura-toda({a},{b},{c})"),
        cells: vec![
            SpaceSpec::sphere("u1", 2),
            SpaceSpec::sphere("u2", 3),
            SpaceSpec::cell("u3", 4, vec![(crate::qi(1), BracketExpr::left(&["u1", "u1"]))]),
            SpaceSpec::cell(
                "u11",
                12,
                vec![
                    (crate::qi(a), a_class),
                    (crate::qi(b), b_class),
                    (crate::qi(c), c_class),
                ],
            ),
        ],
    }
}

/// Right-normed bracket [n0,[n1,[…,nk]]] of named classes.
fn right_bracket(names: &[&str]) -> BracketExpr {
    let mut e = BracketExpr::gen(names[names.len() - 1]);
    for n in names[..names.len() - 1].iter().rev() {
        e = BracketExpr::br(BracketExpr::gen(n), e);
    }
    e
}

/// Quillen model: free graded Lie algebra with a decomposable differential.
pub struct DglModel {
    pub name: String,
    pub ctx: Arc<LieCtx>,
    diffs: Vec<LieElt<Q>>,
    d_cache: Mutex<HashMap<Word, Arc<LieElt<Q>>>>,
}

impl std::fmt::Debug for DglModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DglModel")
            .field("name", &self.name)
            .field("degrees", &self.ctx.gens.degrees())
            .finish()
    }
}

impl DglModel {
    /// Build a model from a cell-complex description.
    pub fn from_space(spec: &SpaceSpec) -> Result<DglModel> {
        if spec.cells.is_empty() {
            return Err(Error::input("space has no cells"));
        }
        for c in &spec.cells {
            match c.attach {
                Attach::Sphere => {
                    if c.dim < 2 {
                        return Err(Error::input(format!(
                            "sphere {} has dimension {}; spheres must have dimension >= 2",
                            c.name, c.dim
                        )));
                    }
                }
                _ => {
                    if c.dim < 3 {
                        return Err(Error::input(format!(
                            "cell {} has dimension {}; attached cells must have dimension >= 3",
                            c.name, c.dim
                        )));
                    }
                }
            }
        }
        let gens = GenSet::new(
            spec.cells
                .iter()
                .map(|c| (c.name.clone(), c.dim - 1))
                .collect(),
        )?;
        let ctx = LieCtx::new(gens);
        let mut diffs: Vec<LieElt<Q>> = Vec::new();
        for (i, c) in spec.cells.iter().enumerate() {
            let target = c.dim - 2; // differential degree; 0 only for spheres of dim 2
            let diff = match &c.attach {
                Attach::Sphere | Attach::Zero | Attach::Torsion => {
                    LieElt::zero(target.max(1))
                }
                Attach::Class(terms) => {
                    let mut sum: Option<LieElt<Q>> = None;
                    for (coeff, expr) in terms {
                        if coeff.is_zero() {
                            continue;
                        }
                        let e = eval_expr(&ctx, i, expr)?;
                        let e = e.scale_q(coeff);
                        sum = Some(match sum {
                            None => e,
                            Some(s) => {
                                if s.degree != e.degree {
                                    return Err(Error::input("degree mismatch"));
                                }
                                s.add(&e)
                            }
                        });
                    }
                    let sum = sum.unwrap_or_else(|| LieElt::zero(target.max(1)));
                    if !sum.is_zero() && sum.degree != target {
                        return Err(Error::input("degree mismatch"));
                    }
                    sum
                }
            };
            // The attaching class must be a cycle in the subcomplex built so
            // far, otherwise ∂² ≠ 0.
            let closed = {
                let mut padded = diffs.clone();
                padded.resize_with(ctx.gens.len(), || LieElt::zero(1));
                let partial = DglModel::with_ctx(&spec.name, ctx.clone(), padded);
                partial.d_elt(&diff).is_zero()
            };
            if !closed {
                return Err(Error::input(format!(
                    "invalid attachment: the class attaching {} is not a cycle",
                    c.name
                )));
            }
            diffs.push(diff);
        }
        let model = DglModel::with_ctx(&spec.name, ctx, diffs);
        model.validate()?;
        Ok(model)
    }

    /// Build directly from generators and raw differentials (used by
    /// built-ins and tests); `validate` is the caller's responsibility.
    pub fn from_raw(name: &str, gens: GenSet, diffs: Vec<LieElt<Q>>) -> DglModel {
        DglModel::with_ctx(name, LieCtx::new(gens), diffs)
    }

    fn with_ctx(name: &str, ctx: Arc<LieCtx>, diffs: Vec<LieElt<Q>>) -> DglModel {
        // Normalize the degree tag of zero differentials so degree
        // bookkeeping is uniform downstream.
        let diffs = diffs
            .into_iter()
            .enumerate()
            .map(|(g, d)| {
                if d.is_zero() {
                    LieElt::zero(ctx.gens.degree(g as GenId).saturating_sub(1).max(1))
                } else {
                    d
                }
            })
            .collect();
        DglModel {
            name: name.to_string(),
            ctx,
            diffs,
            d_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn gen_count(&self) -> usize {
        self.ctx.gens.len()
    }

    /// Differential of one generator.
    pub fn diff(&self, g: GenId) -> &LieElt<Q> {
        &self.diffs[g as usize]
    }

    /// Cell dimension of a generator (degree + 1).
    pub fn cell_dim(&self, g: GenId) -> u32 {
        self.ctx.gens.degree(g) + 1
    }

    /// Top cell dimension.
    pub fn top_dim(&self) -> u32 {
        (0..self.gen_count() as GenId)
            .map(|g| self.cell_dim(g))
            .max()
            .unwrap_or(0)
    }

    /// All differentials zero: the model of a wedge of spheres.
    pub fn is_wedge(&self) -> bool {
        self.diffs.iter().all(|d| d.is_zero())
    }

    /// Check every model invariant: differential degrees, decomposability,
    /// and ∂² = 0 on each generator.
    pub fn validate(&self) -> Result<()> {
        if self.diffs.len() != self.gen_count() {
            return Err(Error::internal("differential table length mismatch"));
        }
        for g in 0..self.gen_count() as GenId {
            let d = &self.diffs[g as usize];
            let deg = self.ctx.gens.degree(g);
            if !d.is_zero() && d.degree + 1 != deg {
                return Err(Error::input("degree mismatch"));
            }
            if d.terms.keys().any(|w| w.len() < 2) {
                return Err(Error::input(format!(
                    "differential of {} is not decomposable",
                    self.ctx.gens.name(g)
                )));
            }
        }
        let mut bad: Vec<String> = Vec::new();
        for g in 0..self.gen_count() as GenId {
            if !self.d_elt(&self.diffs[g as usize]).is_zero() {
                bad.push(self.ctx.gens.name(g).to_string());
            }
        }
        if !bad.is_empty() {
            return Err(Error::input(format!(
                "invalid attachment: ∂² ≠ 0 at {}",
                bad.join(", ")
            )));
        }
        Ok(())
    }

    /// ∂ of a bracket word, via `∂[w,x] = [∂w,x] + (−1)^{|w|}[w,∂x]`.
    pub fn d_word(&self, w: &Word) -> Arc<LieElt<Q>> {
        if let Some(e) = self.d_cache.lock().unwrap().get(w) {
            return e.clone();
        }
        let mut result = if w.len() == 1 {
            self.diffs[w.0[0] as usize].clone()
        } else {
            let prefix = Word(w.0[..w.len() - 1].to_vec());
            let x = w.0[w.len() - 1];
            let dp = prefix.degree(&self.ctx.gens);
            let mut prefix_elt = LieElt::zero(dp);
            prefix_elt.add_term(prefix.clone(), Q::one());
            let mut out = self
                .ctx
                .bracket(&self.d_word(&prefix), &gen_elt(&self.ctx, x));
            let dx = &self.diffs[x as usize];
            if !dx.is_zero() {
                let second = self.ctx.bracket(&prefix_elt, dx);
                let second = if dp % 2 == 1 {
                    second.neg()
                } else {
                    second
                };
                out = out.add(&second);
            }
            out
        };
        result.degree = w.degree(&self.ctx.gens).saturating_sub(1).max(1);
        let arc = Arc::new(result);
        self.d_cache.lock().unwrap().insert(w.clone(), arc.clone());
        arc
    }

    /// ∂ extended to elements with coefficients in any ring.
    pub fn d_elt<R: Ring>(&self, e: &LieElt<R>) -> LieElt<R> {
        let mut out = LieElt::zero(e.degree.saturating_sub(1).max(1));
        for (w, c) in &e.terms {
            let dw = self.d_word(w);
            for (w2, q2) in &dw.terms {
                out.add_term(w2.clone(), c.scale_q(q2));
            }
        }
        out
    }

    /// Matrix of ∂ : L_d → L_{d−1} over the canonical bases (columns indexed
    /// by the degree-d basis).
    pub fn boundary_matrix(&self, d: u32) -> Mat {
        let dom = self.ctx.basis(d);
        if d == 1 {
            return Mat::zeros(0, dom.words.len());
        }
        let cod = self.ctx.basis(d - 1);
        let mut m = Mat::zeros(cod.words.len(), dom.words.len());
        for (j, w) in dom.words.iter().enumerate() {
            for (w2, c) in &self.d_word(w).terms {
                m.a[cod.index[w2]][j] = c.clone();
            }
        }
        m
    }

    /// Cycles of degree d as a canonical (RREF) list of coordinate vectors.
    fn cycle_basis(&self, d: u32) -> Vec<Vec<Q>> {
        let m = self.boundary_matrix(d);
        let kernel = m.kernel();
        if kernel.is_empty() {
            return Vec::new();
        }
        let mut km = Mat::from_rows(kernel);
        km.rref_in_place();
        km.a.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
    }

    /// Boundary vectors spanning im(∂ : L_{d+1} → L_d).
    fn boundary_span(&self, d: u32) -> Vec<Vec<Q>> {
        let basis_d = self.ctx.basis(d);
        let above = self.ctx.basis(d + 1);
        let mut out = Vec::new();
        for w in &above.words {
            let dw = self.d_word(w);
            if dw.is_zero() {
                continue;
            }
            let mut v = vec![Q::zero(); basis_d.words.len()];
            for (w2, c) in &dw.terms {
                v[basis_d.index[w2]] = c.clone();
            }
            out.push(v);
        }
        out
    }

    /// Homology of degree d: dimension and deterministic cycle
    /// representatives (≅ π_{d+1}(X) ⊗ ℚ).
    pub fn homology(&self, d: u32) -> (usize, Vec<LieElt<Q>>) {
        let basis_d = self.ctx.basis(d);
        if basis_d.words.is_empty() {
            return (0, Vec::new());
        }
        let mut elim = Elim::new();
        for b in self.boundary_span(d) {
            elim.insert(&b);
        }
        let mut reps = Vec::new();
        for z in self.cycle_basis(d) {
            if elim.insert(&z) {
                let mut e = LieElt::zero(d);
                for (i, c) in z.into_iter().enumerate() {
                    e.add_term(basis_d.words[i].clone(), c);
                }
                reps.push(e);
            }
        }
        (reps.len(), reps)
    }

    /// Homology dimensions for 1 ≤ d ≤ dmax.
    pub fn homology_dims(&self, dmax: u32) -> Vec<usize> {
        (1..=dmax).map(|d| self.homology(d).0).collect()
    }

    /// `H_*`-dimension of the subcomplex formed by the first `k` cells:
    /// the largest cell dimension among them.
    pub fn homology_dim_base(&self, k: usize) -> u32 {
        (0..k as GenId).map(|g| self.cell_dim(g)).max().unwrap_or(0)
    }

    /// Is the class of `e` zero in homology?
    pub fn is_rationally_trivial(&self, e: &LieElt<Q>) -> Result<bool> {
        if e.is_zero() {
            return Ok(true);
        }
        if !self.d_elt(e).is_zero() {
            return Err(Error::input("not a cycle"));
        }
        let basis_d = self.ctx.basis(e.degree);
        let mut elim = Elim::new();
        for b in self.boundary_span(e.degree) {
            elim.insert(&b);
        }
        let mut v = vec![Q::zero(); basis_d.words.len()];
        for (w, c) in &e.terms {
            v[basis_d.index[w]] = c.clone();
        }
        Ok(elim.contains(&v))
    }

    /// The model of the subcomplex formed by the first `k` cells.  Valid
    /// because attachments only reference earlier cells.
    pub fn prefix_model(&self, k: usize) -> Result<DglModel> {
        if k == 0 || k > self.gen_count() {
            return Err(Error::input("invalid subcomplex size"));
        }
        let gens = GenSet::new(
            (0..k as GenId)
                .map(|g| {
                    (
                        self.ctx.gens.name(g).to_string(),
                        self.ctx.gens.degree(g),
                    )
                })
                .collect(),
        )?;
        for g in 0..k {
            if self.diffs[g]
                .terms
                .keys()
                .any(|w| w.0.iter().any(|&x| x as usize >= k))
            {
                return Err(Error::input(
                    "subcomplex is not closed under attachments",
                ));
            }
        }
        Ok(DglModel::from_raw(
            &format!("{}[..{}]", self.name, k),
            gens,
            self.diffs[..k].to_vec(),
        ))
    }

    /// Split off the top cell: the last cell must be the unique cell of
    /// maximal dimension.  Returns (base model, top generator id).
    pub fn top_split(&self) -> Result<(DglModel, GenId)> {
        let n = self.gen_count();
        if n < 2 {
            return Err(Error::input("no base to split from"));
        }
        let top = (n - 1) as GenId;
        let top_dim = self.cell_dim(top);
        for g in 0..top {
            if self.cell_dim(g) >= top_dim {
                return Err(Error::input("no unique top cell"));
            }
        }
        Ok((self.prefix_model(n - 1)?, top))
    }

    /// Total rank of H_* through degree `dmax` (used in reports).
    pub fn pi_ranks(&self, dmax: u32) -> Vec<(u32, usize)> {
        (1..=dmax)
            .map(|d| (d + 1, self.homology(d).0))
            .collect()
    }
}

fn gen_elt(ctx: &LieCtx, g: GenId) -> LieElt<Q> {
    LieElt::gen(&ctx.gens, g)
}

fn eval_expr(ctx: &Arc<LieCtx>, visible: usize, expr: &BracketExpr) -> Result<LieElt<Q>> {
    match expr {
        BracketExpr::Gen(n) => match ctx.gens.by_name(n) {
            None => Err(Error::input(format!("undeclared name {n}"))),
            Some(g) if (g as usize) >= visible => Err(Error::input(format!(
                "cycle in declarations: {n} is not attached before use"
            ))),
            Some(g) => Ok(gen_elt(ctx, g)),
        },
        BracketExpr::Br(a, b) => {
            let ea = eval_expr(ctx, visible, a)?;
            let eb = eval_expr(ctx, visible, b)?;
            Ok(ctx.bracket(&ea, &eb))
        }
    }
}

/// A degree-preserving map of free graded Lie algebras, given on generators;
/// coefficients may be rationals or constraint polynomials.
pub struct LieMap<R: Ring> {
    pub images: Vec<LieElt<R>>,
}

impl<R: Ring> LieMap<R> {
    pub fn new(images: Vec<LieElt<R>>) -> LieMap<R> {
        LieMap { images }
    }

    /// f applied to a bracket word: bracket the generator images.
    pub fn apply_word(&self, ctx: &LieCtx, w: &Word) -> LieElt<R> {
        let mut out = self.images[w.0[0] as usize].clone();
        for &g in &w.0[1..] {
            out = ctx.bracket(&out, &self.images[g as usize]);
        }
        out
    }

    /// f applied to a rational element.
    pub fn apply(&self, ctx: &LieCtx, e: &LieElt<Q>) -> LieElt<R> {
        let mut out = LieElt::zero(e.degree);
        for (w, c) in &e.terms {
            let fw = self.apply_word(ctx, w);
            for (w2, r) in &fw.terms {
                out.add_term(w2.clone(), r.scale_q(c));
            }
        }
        out
    }

    /// ∂f(u) − f(∂u) for one generator: zero iff f commutes with ∂ there.
    pub fn chain_defect(&self, m: &DglModel, g: GenId) -> LieElt<R> {
        assert_eq!(
            self.images[g as usize].degree,
            m.ctx.gens.degree(g),
            "map is not degree-preserving"
        );
        let dfu = m.d_elt(&self.images[g as usize]);
        let fdu = self.apply(&m.ctx, m.diff(g));
        dfu.sub(&fdu)
    }

    pub fn is_chain_map(&self, m: &DglModel) -> bool {
        (0..m.gen_count() as GenId).all(|g| self.chain_defect(m, g).is_zero())
    }
}

impl LieMap<Q> {
    /// The matrix of H_d(f) over the canonical homology representatives.
    /// Requires f to be a chain map.
    pub fn homology_matrix(&self, m: &DglModel, d: u32) -> Mat {
        let basis_d = m.ctx.basis(d);
        let (hdim, reps) = m.homology(d);
        if hdim == 0 {
            return Mat::zeros(0, 0);
        }
        // Columns: boundary span, then representatives.  Quotient
        // coordinates of a cycle are the (unique) representative part.
        let boundaries = m.boundary_span(d);
        let nb = boundaries.len();
        let mut cols: Vec<Vec<Q>> = boundaries;
        for r in &reps {
            let mut v = vec![Q::zero(); basis_d.words.len()];
            for (w, c) in &r.terms {
                v[basis_d.index[w]] = c.clone();
            }
            cols.push(v);
        }
        let mat = Mat::from_rows(cols).transpose();
        let solver = Solver::new(&mat);
        let mut out = Mat::zeros(hdim, hdim);
        for (j, r) in reps.iter().enumerate() {
            let fr = self.apply(&m.ctx, r);
            let mut v = vec![Q::zero(); basis_d.words.len()];
            for (w, c) in &fr.terms {
                v[basis_d.index[w]] = c.clone();
            }
            let x = solver
                .solve(&v)
                .expect("image of a cycle under a chain map is a cycle");
            for i in 0..hdim {
                out.a[i][j] = x[nb + i].clone();
            }
        }
        out
    }

    /// Is H_d(f) invertible for every 1 ≤ d ≤ dmax?
    pub fn homology_iso_through(&self, m: &DglModel, dmax: u32) -> bool {
        (1..=dmax).all(|d| {
            let h = self.homology_matrix(m, d);
            h.rank() == h.rows
        })
    }
}
