// SPDX-License-Identifier: MIT
//! Self-map analysis of differential graded Lie models.
//!
//! A degree-preserving self-map of a free model is determined by its
//! generator images, and each image decomposes as a diagonal part λ_u·u plus
//! off-diagonal corrections supported on the other canonical basis monomials
//! of the same degree.  Requiring ∂∘f = f∘∂ yields a polynomial constraint
//! system in these parameters.  Because a multidegree determines both the
//! degree and the diagonal λ-monomial, the pure-diagonal content of every
//! constraint attached to a basis monomial m is a multiple of
//! λ_u − λ^{multideg(m)}; eliminating the off-diagonal parameters linearly
//! either certifies such a relation or leaves it listed as uncertified.
//!
//! The monomial relations drive everything downstream:
//! * zero-pattern analysis computes the self-closeness number of the
//!   rationalization together with verified lower-bound witnesses and a
//!   soundly-propagated upper bound,
//! * Smith normal form of the exponent lattice computes the quotient of the
//!   self-equivalence group by the subgroup acting as the identity on
//!   homology, and
//! * exponent-lattice analysis over ℤ enumerates the nonzero integral
//!   diagonal solutions (integer mode).

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, One, Zero};

use crate::dgl::{DglModel, LieMap};
use crate::glie::{GenId, LieElt, Multideg, Word};
use crate::lattice::{snf, zkernel, ZMat};
use crate::linalg::Elim;
use crate::poly::{Monomial, Poly};
use crate::{Error, Q, Result};

/// What a polynomial variable of a constraint system stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarKind {
    /// The diagonal coefficient λ_u of a generator image.
    Diag(GenId),
    /// An off-diagonal coefficient c_{u,w}: the coefficient of the basis
    /// word w (of the same degree as u) in the image of u.
    OffDiag(GenId, Word),
}

/// Variable table of a parametrized self-map.  Variables 0..gen_count are
/// the diagonal parameters, in generator order; off-diagonal parameters
/// follow, grouped by generator in canonical basis order.
#[derive(Debug, Clone)]
pub struct VarTable {
    entries: Vec<VarKind>,
    gen_count: usize,
}

impl VarTable {
    /// Polynomial variable index of λ_u.
    pub fn lambda(g: GenId) -> u32 {
        g as u32
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn gen_count(&self) -> usize {
        self.gen_count
    }

    pub fn kind(&self, v: u32) -> &VarKind {
        &self.entries[v as usize]
    }

    /// Is this variable a diagonal parameter?
    pub fn is_diag(&self, v: u32) -> bool {
        (v as usize) < self.gen_count
    }

    /// Display name, e.g. `l(u1)` or `c(u5, [u2,u3])`.
    pub fn name(&self, v: u32, model: &DglModel) -> String {
        let gens = &model.ctx.gens;
        match &self.entries[v as usize] {
            VarKind::Diag(g) => format!("l({})", gens.name(*g)),
            VarKind::OffDiag(g, w) => {
                format!("c({}, {})", gens.name(*g), w.render(gens))
            }
        }
    }
}

/// A generic degree-preserving self-map with formal coefficients.
#[derive(Debug, Clone)]
pub struct ParamMap {
    /// Image of each generator, coefficients in ℚ[λ, c].
    pub images: Vec<LieElt<Poly>>,
    pub vars: VarTable,
}

/// The generic self-map of a model: each generator u maps to
/// λ_u·u + Σ c_{u,w}·w over the other canonical basis words of degree |u|.
pub fn parametrize(model: &DglModel) -> ParamMap {
    let gens = &model.ctx.gens;
    let g = model.gen_count();
    let mut entries: Vec<VarKind> = (0..g as GenId).map(VarKind::Diag).collect();
    let mut images = Vec::with_capacity(g);
    // Diagonal variables first, so that λ_u has index u.
    for u in 0..g as GenId {
        let deg = gens.degree(u);
        let basis = model.ctx.basis(deg);
        let mut img = LieElt::<Poly>::zero(deg);
        for w in &basis.words {
            if *w == Word::gen(u) {
                img.add_term(w.clone(), Poly::var(VarTable::lambda(u)));
            } else {
                let v = entries.len() as u32;
                entries.push(VarKind::OffDiag(u, w.clone()));
                img.add_term(w.clone(), Poly::var(v));
            }
        }
        images.push(img);
    }
    ParamMap {
        images,
        vars: VarTable {
            entries,
            gen_count: g,
        },
    }
}

/// One polynomial equation: the coefficient of `monomial` in
/// ∂(f(gen)) − f(∂(gen)) must vanish.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub gen: GenId,
    pub monomial: Word,
    pub poly: Poly,
}

/// The full chain-map condition on a parametrized self-map.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub vars: VarTable,
    pub constraints: Vec<Constraint>,
}

/// Expand ∂∘f − f∘∂ on every generator and collect one equation per basis
/// monomial with a nonzero coefficient polynomial.
pub fn derive_constraints(model: &DglModel, pmap: &ParamMap) -> ConstraintSystem {
    let fmap = LieMap::new(pmap.images.clone());
    let mut constraints = Vec::new();
    for u in 0..model.gen_count() as GenId {
        let defect = fmap.chain_defect(model, u);
        for (w, p) in &defect.terms {
            assert!(
                p.terms.keys().all(|m| !m.is_one()),
                "internal error: constraint with a constant term"
            );
            constraints.push(Constraint {
                gen: u,
                monomial: w.clone(),
                poly: p.clone(),
            });
        }
    }
    ConstraintSystem {
        vars: pmap.vars.clone(),
        constraints,
    }
}

/// A diagonal monomial relation λ_gen = λ^rhs (unit coefficient; rhs is an
/// exponent vector over the generators).  `certified` records that the
/// relation was obtained from the constraint system without any off-diagonal
/// interference: either no off-diagonal parameter occurred at all, or a
/// linear combination of same-generator equations eliminated them exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialEq {
    pub gen: GenId,
    pub rhs: Vec<u32>,
    pub certified: bool,
}

impl MonomialEq {
    /// Bitmask of generators occurring in the right-hand side.
    fn supp_mask(&self) -> u32 {
        let mut m = 0u32;
        for (j, &e) in self.rhs.iter().enumerate() {
            if e > 0 {
                m |= 1 << j;
            }
        }
        m
    }
}

/// Diagonal monomial relations extracted from a constraint system, plus the
/// generator names and degrees needed to render and analyze them standalone.
#[derive(Debug, Clone)]
pub struct MonomialSystem {
    pub names: Vec<String>,
    pub degrees: Vec<u32>,
    pub eqs: Vec<MonomialEq>,
}

impl MonomialSystem {
    pub fn gen_count(&self) -> usize {
        self.names.len()
    }

    pub fn all_certified(&self) -> bool {
        self.eqs.iter().all(|e| e.certified)
    }

    fn lambda_name(&self, j: usize) -> String {
        format!("l({})", self.names[j])
    }

    fn render_monomial(&self, exps: &[i64]) -> String {
        let mut parts = Vec::new();
        for (j, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if e == 1 {
                parts.push(self.lambda_name(j));
            } else {
                parts.push(format!("{}^{}", self.lambda_name(j), e));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Human-readable form of one equation, e.g. `l(u5) = l(u1)^2*l(u2)`.
    pub fn render_eq(&self, eq: &MonomialEq) -> String {
        let rhs: Vec<i64> = eq.rhs.iter().map(|&e| e as i64).collect();
        format!(
            "{} = {}",
            self.lambda_name(eq.gen as usize),
            self.render_monomial(&rhs)
        )
    }

    /// Substitute lower-degree pins into higher equations, yielding the
    /// fully reduced relations (each right-hand side mentions only
    /// generators that carry no earlier pin).  Equation order is preserved;
    /// certification is the conjunction of every pin used.
    pub fn reduce(&self) -> MonomialSystem {
        let g = self.gen_count();
        let mut order: Vec<usize> = (0..g).collect();
        order.sort_by_key(|&j| (self.degrees[j], j));
        let mut sub: Vec<Option<(Vec<u32>, bool)>> = vec![None; g];
        let mut out: Vec<(usize, MonomialEq)> = Vec::new();
        for &u in &order {
            let mut first: Option<(Vec<u32>, bool)> = None;
            for (i, eq) in self
                .eqs
                .iter()
                .enumerate()
                .filter(|(_, e)| e.gen as usize == u)
            {
                let mut rhs = vec![0u32; g];
                let mut cert = eq.certified;
                for (j, &e) in eq.rhs.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    match &sub[j] {
                        Some((s, c)) => {
                            cert = cert && *c;
                            for (k, &sk) in s.iter().enumerate() {
                                rhs[k] += e * sk;
                            }
                        }
                        None => rhs[j] += e,
                    }
                }
                if first.is_none() {
                    first = Some((rhs.clone(), cert));
                }
                out.push((
                    i,
                    MonomialEq {
                        gen: u as GenId,
                        rhs,
                        certified: cert,
                    },
                ));
            }
            sub[u] = first;
        }
        out.sort_by_key(|(i, _)| *i);
        MonomialSystem {
            names: self.names.clone(),
            degrees: self.degrees.clone(),
            eqs: out.into_iter().map(|(_, e)| e).collect(),
        }
    }
}

/// Extract the diagonal monomial relations from a constraint system.
///
/// For each generator u and each multidegree μ in the support of ∂u this
/// emits λ_u = λ^μ.  The relation is certified when some linear combination
/// of u's equations cancels every off-diagonal monomial and every other
/// multidegree block while keeping the μ-block, i.e. when the μ-block
/// coefficient stream lies outside the column space of the interference
/// columns.  Uncertified relations are listed, not dropped.
pub fn diagonal_system(model: &DglModel, cs: &ConstraintSystem) -> Result<MonomialSystem> {
    let gens = &model.ctx.gens;
    let g = model.gen_count();
    let names: Vec<String> = (0..g as GenId).map(|j| gens.name(j).to_string()).collect();
    let degrees: Vec<u32> = gens.degrees().to_vec();
    let rows: Vec<DiagRow> = cs
        .constraints
        .iter()
        .map(|c| DiagRow {
            gen: c.gen as usize,
            mdeg: c.monomial.multideg(gens),
            poly: c.poly.clone(),
            label: c.monomial.render(gens),
        })
        .collect();
    diagonal_system_core(names, degrees, &rows)
}

/// One homogeneous constraint row for the diagonal extraction: the
/// coefficient polynomial of the monomial block `mdeg` in the defect of
/// generator `gen`.  Variables 0..gen_count are the diagonal parameters in
/// generator order; everything above is off-diagonal.  `label` names the
/// block in error messages.
pub(crate) struct DiagRow {
    pub gen: usize,
    pub mdeg: Multideg,
    pub poly: Poly,
    pub label: String,
}

pub(crate) fn diagonal_system_core(
    names: Vec<String>,
    degrees: Vec<u32>,
    all_rows: &[DiagRow],
) -> Result<MonomialSystem> {
    let g = names.len();
    let mut eqs: Vec<MonomialEq> = Vec::new();

    for u in 0..g {
        let rows: Vec<&DiagRow> = all_rows.iter().filter(|c| c.gen == u).collect();
        if rows.is_empty() {
            continue;
        }
        let n = rows.len();
        let lam_u = Monomial::var(u as u32);
        // Per-row diagonal coefficient and multidegree, plus the columns of
        // off-diagonal interference (one column per distinct monomial that
        // involves an off-diagonal variable).
        let mut a = vec![Q::zero(); n];
        let mut mds: Vec<Multideg> = Vec::with_capacity(n);
        let mut ccols: BTreeMap<Monomial, Vec<Q>> = BTreeMap::new();
        for (r, c) in rows.iter().enumerate() {
            let md = c.mdeg.clone();
            let mono_mu = Monomial(
                md.iter()
                    .enumerate()
                    .filter(|&(_, &e)| e > 0)
                    .map(|(j, &e)| (j as u32, e as u32))
                    .collect(),
            );
            for (m, coeff) in &c.poly.terms {
                if *m == lam_u {
                    a[r] = coeff.clone();
                } else if m.0.iter().all(|&(v, _)| (v as usize) < g) {
                    if *m != mono_mu {
                        return Err(Error::internal(format!(
                            "unexpected diagonal monomial in the constraint for {} at {}",
                            names[u], c.label
                        )));
                    }
                } else {
                    ccols.entry(m.clone()).or_insert_with(|| vec![Q::zero(); n])[r] =
                        coeff.clone();
                }
            }
            // The pure-diagonal part must be a[r]·(λ_u − λ^μ).
            let mu_coeff = c.poly.terms.get(&mono_mu).cloned().unwrap_or_else(Q::zero);
            if mu_coeff != -a[r].clone() {
                return Err(Error::internal(format!(
                    "constraint for {} at {} is not diagonal-affine",
                    names[u], c.label
                )));
            }
            mds.push(md);
        }
        // Support blocks: multidegrees with a nonzero diagonal stream.
        let mut blocks: BTreeSet<Multideg> = BTreeSet::new();
        for r in 0..n {
            if !a[r].is_zero() {
                blocks.insert(mds[r].clone());
            }
        }
        let stream = |mu: &Multideg| -> Vec<Q> {
            (0..n)
                .map(|r| if &mds[r] == mu { a[r].clone() } else { Q::zero() })
                .collect()
        };
        for mu in &blocks {
            let mut kill = Elim::new();
            for col in ccols.values() {
                kill.insert(col);
            }
            for nu in &blocks {
                if nu != mu {
                    kill.insert(&stream(nu));
                }
            }
            let certified = !kill.contains(&stream(mu));
            eqs.push(MonomialEq {
                gen: u as GenId,
                rhs: mu.iter().map(|&e| e as u32).collect(),
                certified,
            });
        }
    }
    Ok(MonomialSystem {
        names,
        degrees,
        eqs,
    })
}

/// Triangular view of a monomial system: every generator with at least one
/// equation gets pinned to a signed exponent vector over the free
/// generators; conflicting pins leave residual relations among the free
/// generators.
struct Triangular {
    /// `expr[u]`: exponents over generators (support on free ones), or None
    /// when u is free.  Pins are always nonnegative.
    expr: Vec<Option<Vec<i64>>>,
    /// Residual relations Σ r_j·e_j = 0 (multiplicatively Π λ^r = 1),
    /// supported on the free generators.
    residuals: Vec<Vec<i64>>,
}

fn triangularize(ms: &MonomialSystem) -> Triangular {
    let g = ms.gen_count();
    let mut order: Vec<usize> = (0..g).collect();
    order.sort_by_key(|&j| (ms.degrees[j], j));
    let mut expr: Vec<Option<Vec<i64>>> = vec![None; g];
    let mut residuals = Vec::new();
    for &u in &order {
        let mut expansions: Vec<Vec<i64>> = Vec::new();
        for eq in ms.eqs.iter().filter(|e| e.gen as usize == u) {
            let mut v = vec![0i64; g];
            for (j, &e) in eq.rhs.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &expr[j] {
                    Some(s) => {
                        for (k, &sk) in s.iter().enumerate() {
                            v[k] += e as i64 * sk;
                        }
                    }
                    None => v[j] += e as i64,
                }
            }
            expansions.push(v);
        }
        if let Some(first) = expansions.first().cloned() {
            for other in expansions.iter().skip(1) {
                let r: Vec<i64> = other.iter().zip(&first).map(|(x, y)| x - y).collect();
                if r.iter().any(|&x| x != 0) {
                    residuals.push(r);
                }
            }
            expr[u] = Some(first);
        }
    }
    Triangular { expr, residuals }
}

/// Integer row echelon form with back-reduction.  Row operations preserve
/// the lattice generated by the rows, hence also the multiplicative
/// solution set of the corresponding monomial relations.
fn row_echelon_z(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots: Vec<usize> = Vec::new();
    let mut r0 = 0;
    for c in 0..cols {
        if r0 == rows.len() {
            break;
        }
        loop {
            let best = (r0..rows.len())
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| rows[i][c].abs());
            let Some(b) = best else { break };
            rows.swap(r0, b);
            let mut cleared = true;
            for i in (r0 + 1)..rows.len() {
                if rows[i][c] != 0 {
                    let f = rows[i][c] / rows[r0][c];
                    for j in 0..cols {
                        rows[i][j] -= f * rows[r0][j];
                    }
                    if rows[i][c] != 0 {
                        cleared = false;
                    }
                }
            }
            if cleared {
                break;
            }
        }
        if rows[r0][c] != 0 {
            if rows[r0][c] < 0 {
                for j in 0..cols {
                    rows[r0][j] = -rows[r0][j];
                }
            }
            pivots.push(c);
            r0 += 1;
        }
    }
    rows.truncate(r0);
    // Back-reduce entries above each pivot.
    for i in (0..rows.len()).rev() {
        let c = pivots[i];
        for k in 0..i {
            let f = rows[k][c].div_euclid(rows[i][c]);
            if f != 0 {
                for j in 0..cols {
                    rows[k][j] -= f * rows[i][j];
                }
            }
        }
    }
    rows
}

/// The quotient of the group of self-equivalences of the rationalization by
/// the subgroup inducing the identity on homology, presented as
/// (ℚ*)^rank × (ℤ/2)^torsion_z2 with an explicit monomial parametrization.
#[derive(Debug, Clone)]
pub struct GroupReport {
    pub rank: usize,
    pub torsion_z2: usize,
    /// True when every relation used was certified.
    pub certified: bool,
    /// λ-names of the free diagonal parameters.
    pub free: Vec<String>,
    /// Dependent parameters with their monomial expressions in the free
    /// ones.  A leading ± marks a sign ambiguity (ℤ/2 factor).
    pub dependent: Vec<(String, String)>,
    /// Residual relations that admit no unit pivot, rendered as
    /// `monomial = monomial`.
    pub relations: Vec<String>,
}

/// Analyze the solution set of a monomial system over ℚ* by integer linear
/// algebra on the exponent lattice.
pub fn auto_group(ms: &MonomialSystem) -> Result<GroupReport> {
    let g = ms.gen_count();
    let mut seen = BTreeSet::new();
    for &d in &ms.degrees {
        if !seen.insert(d) {
            return Err(Error::unsupported("same-degree generators"));
        }
    }
    // Rank and torsion of ℤ^g modulo the exponent-relation lattice.
    let rows: Vec<Vec<i64>> = ms
        .eqs
        .iter()
        .map(|eq| {
            let mut v: Vec<i64> = eq.rhs.iter().map(|&e| -(e as i64)).collect();
            v[eq.gen as usize] += 1;
            v
        })
        .collect();
    let (rank, torsion_z2) = if rows.is_empty() {
        (g, 0)
    } else {
        let s = snf(&ZMat::from_rows(rows));
        let even = s
            .torsion()
            .iter()
            .filter(|d| num::Integer::is_even(*d))
            .count();
        (g - s.rank(), even)
    };

    // Pretty parametrization: pins from the triangular pass, then residual
    // relations solved at unit pivots where possible.
    let tri = triangularize(ms);
    let mut expr = tri.expr;
    let mut via_sign: Vec<bool> = vec![false; g];
    let mut relations = Vec::new();
    let mut queue: Vec<Vec<i64>> = row_echelon_z(tri.residuals.clone());
    let mut qi = 0;
    while qi < queue.len() {
        let r = queue[qi].clone();
        qi += 1;
        if r.iter().all(|&x| x == 0) {
            continue;
        }
        let gcd = r
            .iter()
            .filter(|&&x| x != 0)
            .fold(0i64, |acc, &x| num::integer::gcd(acc, x.abs()));
        let r: Vec<i64> = r.iter().map(|x| x / gcd).collect();
        let even = gcd % 2 == 0;
        // Prefer to solve for the highest-degree generator with a unit
        // coefficient.
        let pivot = (0..g)
            .filter(|&j| r[j].abs() == 1)
            .max_by_key(|&j| ms.degrees[j]);
        let Some(p) = pivot else {
            let pos: Vec<i64> = r.iter().map(|&x| x.max(0)).collect();
            let neg: Vec<i64> = r.iter().map(|&x| (-x).max(0)).collect();
            relations.push(format!(
                "{} = {}",
                ms.render_monomial(&pos),
                ms.render_monomial(&neg)
            ));
            continue;
        };
        let s = r[p];
        let sol: Vec<i64> = (0..g)
            .map(|j| if j == p { 0 } else { -r[j] * s })
            .collect();
        // Substitute into every pin and the remaining residuals.
        for e in expr.iter_mut().flatten() {
            let k = e[p];
            if k != 0 {
                e[p] = 0;
                for (j, &sj) in sol.iter().enumerate() {
                    e[j] += k * sj;
                }
            }
        }
        for rr in queue.iter_mut().skip(qi) {
            let k = rr[p];
            if k != 0 {
                rr[p] = 0;
                for (j, &sj) in sol.iter().enumerate() {
                    rr[j] += k * sj;
                }
            }
        }
        expr[p] = Some(sol);
        via_sign[p] = even;
    }
    let mut free = Vec::new();
    let mut dependent = Vec::new();
    for j in 0..g {
        match &expr[j] {
            None => free.push(ms.lambda_name(j)),
            Some(e) => {
                let body = ms.render_monomial(e);
                let body = if via_sign[j] {
                    format!("±{}", body)
                } else {
                    body
                };
                dependent.push((ms.lambda_name(j), body));
            }
        }
    }
    Ok(GroupReport {
        rank,
        torsion_z2,
        certified: ms.all_certified(),
        free,
        dependent,
        relations,
    })
}

/// Rigor of a self-closeness computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NseStatus {
    /// Verified witnesses meet the sound upper bound: lo = value = hi.
    Certified,
    /// The reported value is the zero-pattern answer; the rigorous
    /// enclosure is [lo, hi].
    Bounds,
    /// A claimed witness failed verification (should not occur).
    Uncertified,
}

/// A lower-bound witness: a consistent zero-pattern whose induced numeric
/// self-map is a chain map, induces an isomorphism on homology in degrees
/// < k, and kills at least one generator — proving N𝓔 > k.
#[derive(Debug, Clone)]
pub struct Witness {
    pub k: u32,
    /// Diagonal pattern: `pattern[u]` is true when λ_u ≠ 0 (the witness map
    /// sends u to u, otherwise to 0); all off-diagonal parameters are 0.
    pub pattern: Vec<bool>,
    pub verified: bool,
}

/// Result of the self-closeness analysis of a rationalized model.
#[derive(Debug, Clone)]
pub struct NseReport {
    /// Zero-pattern value: the least k such that every consistent pattern
    /// that is nonzero on all generators of cell dimension ≤ k is nonzero
    /// everywhere.
    pub value: u32,
    /// Verified lower bound (from the witnesses).
    pub lo: u32,
    /// Sound upper bound (cycle-generator premises propagated through
    /// certified relations, capped by the top cell dimension).
    pub hi: u32,
    pub status: NseStatus,
    pub top_dim: u32,
    /// True when the value equals the top cell dimension, i.e. the top cell
    /// splits off rationally.
    pub split: bool,
    pub witnesses: Vec<Witness>,
    pub system: MonomialSystem,
    pub group: GroupReport,
}

/// The numeric self-map induced by a zero-pattern: generators with a true
/// bit map to themselves, the others to zero.
pub fn pattern_images(model: &DglModel, pattern: &[bool]) -> Vec<LieElt<Q>> {
    let gens = &model.ctx.gens;
    pattern
        .iter()
        .enumerate()
        .map(|(u, &on)| {
            if on {
                LieElt::gen(gens, u as GenId)
            } else {
                LieElt::zero(gens.degree(u as GenId))
            }
        })
        .collect()
}

/// Check a lower-bound witness: `map` must be a chain map, induce an
/// isomorphism on homology in every degree d ≤ k−1, and kill at least one
/// diagonal coefficient (so it is not a quasi-isomorphism).
pub fn witness_verify(model: &DglModel, map: &LieMap<Q>, k: u32) -> bool {
    let some_zero = (0..model.gen_count() as GenId).any(|u| {
        map.images[u as usize]
            .terms
            .get(&Word::gen(u))
            .map_or(true, |c| c.is_zero())
    });
    some_zero && map.is_chain_map(model) && map.homology_iso_through(model, k.saturating_sub(1))
}

/// Compute the self-closeness number of the rationalized model by
/// zero-pattern analysis, with verified witnesses, a sound upper bound and
/// the self-equivalence group quotient.
pub fn nse(model: &DglModel) -> Result<NseReport> {
    let g = model.gen_count();
    if g > 16 {
        return Err(Error::unsupported("more than 16 generators"));
    }
    let mut seen = BTreeSet::new();
    for u in 0..g as GenId {
        if !seen.insert(model.ctx.gens.degree(u)) {
            return Err(Error::unsupported("same-degree generators"));
        }
    }
    let n = model.top_dim();

    let pmap = parametrize(model);
    let cs = derive_constraints(model, &pmap);
    let ms = diagonal_system(model, &cs)?;
    let group = auto_group(&ms)?;

    if g == 0 {
        return Ok(NseReport {
            value: 0,
            lo: 0,
            hi: 0,
            status: NseStatus::Certified,
            top_dim: 0,
            split: false,
            witnesses: Vec::new(),
            system: ms,
            group,
        });
    }

    let polys: Vec<&Poly> = cs.constraints.iter().map(|c| &c.poly).collect();
    let premise = |k: u32| -> u32 {
        let mut m = 0u32;
        for u in 0..g as GenId {
            if model.cell_dim(u) <= k {
                m |= 1 << u;
            }
        }
        m
    };
    // Upper-bound seed: generators that are cycles represent nonzero
    // homology classes (boundaries are decomposable), so a map that is a
    // homology isomorphism below k keeps them nonzero.
    let hi_seed = |k: u32| -> u32 {
        let mut s = 0u32;
        for u in 0..g as GenId {
            if model.diff(u).is_zero() && model.cell_dim(u) <= k {
                s |= 1 << u;
            }
        }
        s
    };
    let core = mask_core(g, &polys, &premise, &hi_seed, n, &ms);

    let witnesses: Vec<Witness> = core
        .candidates
        .iter()
        .map(|(k, pattern)| {
            let map = LieMap::new(pattern_images(model, pattern));
            let verified = witness_verify(model, &map, *k);
            Witness {
                k: *k,
                pattern: pattern.clone(),
                verified,
            }
        })
        .collect();

    assemble_nse(core.value, core.hi, n, witnesses, ms, group)
}

/// Zero-pattern mask analysis shared by the Lie- and Sullivan-side
/// self-closeness computations.  Variables 0..g of the constraint
/// polynomials must be the diagonal parameters in generator order.
pub(crate) struct MaskCore {
    /// Least k such that every consistent pattern containing premise(k) is
    /// full (capped by `cap`).
    pub value: u32,
    /// For each k in 1..value, the consistent non-full pattern containing
    /// premise(k) with the most surviving generators (ties broken by the
    /// larger bitmask), as a per-generator bool vector.
    pub candidates: Vec<(u32, Vec<bool>)>,
    /// Least k at which hi_seed(k) propagates to the full pattern through
    /// the certified relations (capped by `cap`).
    pub hi: u32,
}

pub(crate) fn mask_core(
    g: usize,
    polys: &[&Poly],
    premise: &dyn Fn(u32) -> u32,
    hi_seed: &dyn Fn(u32) -> u32,
    cap: u32,
    ms: &MonomialSystem,
) -> MaskCore {
    let full: u32 = (1u32 << g) - 1;
    // Consistent zero-patterns: the induced numeric map (λ = pattern,
    // off-diagonal = 0) satisfies the entire constraint system exactly.
    let mut consistent: Vec<u32> = Vec::new();
    for mask in 0..=full {
        let mut assign: BTreeMap<u32, Q> = BTreeMap::new();
        for u in 0..g {
            if mask & (1 << u) != 0 {
                assign.insert(u as u32, Q::one());
            }
        }
        if polys.iter().all(|p| p.eval(&assign).is_zero()) {
            consistent.push(mask);
        }
    }

    let mut value = cap;
    for k in 0..=cap {
        let prem = premise(k);
        if consistent.iter().all(|&m| m & prem != prem || m == full) {
            value = k;
            break;
        }
    }

    let mut candidates = Vec::new();
    for k in 1..value {
        let prem = premise(k);
        let best = consistent
            .iter()
            .filter(|&&m| m & prem == prem && m != full)
            .max_by_key(|&&m| (m.count_ones(), m));
        if let Some(&m) = best {
            let pattern: Vec<bool> = (0..g).map(|u| m & (1 << u) != 0).collect();
            candidates.push((k, pattern));
        }
    }

    // Sound upper bound: the seed generators are known nonzero on any
    // self-equivalence candidate that is an isomorphism below k, and
    // certified relations propagate nonzeroness in both directions.
    let certified_eqs: Vec<(u32, u32)> = ms
        .eqs
        .iter()
        .filter(|e| e.certified)
        .map(|e| (1u32 << e.gen, e.supp_mask()))
        .collect();
    let mut hi = cap;
    for k in 1..=cap {
        let mut s: u32 = hi_seed(k);
        loop {
            let mut changed = false;
            for &(lhs, supp) in &certified_eqs {
                if s & supp == supp && s & lhs != lhs {
                    s |= lhs;
                    changed = true;
                }
                if s & lhs == lhs && s & supp != supp {
                    s |= supp;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if s == full {
            hi = k;
            break;
        }
    }

    MaskCore {
        value,
        candidates,
        hi,
    }
}

/// Assemble a self-closeness report from the mask analysis and the verified
/// witnesses: derive the witness lower bound, sanity-check the enclosure and
/// classify the overall rigor.
pub(crate) fn assemble_nse(
    value: u32,
    hi: u32,
    top: u32,
    witnesses: Vec<Witness>,
    system: MonomialSystem,
    group: GroupReport,
) -> Result<NseReport> {
    let lo = 1 + witnesses
        .iter()
        .filter(|w| w.verified)
        .map(|w| w.k)
        .max()
        .unwrap_or(0);
    if !(lo <= value && value <= hi) {
        return Err(Error::internal(format!(
            "self-closeness bounds out of order: lo={lo}, value={value}, hi={hi}"
        )));
    }
    let all_verified = witnesses.iter().all(|w| w.verified);
    let status = if all_verified && lo == value && hi == value {
        NseStatus::Certified
    } else if all_verified {
        NseStatus::Bounds
    } else {
        NseStatus::Uncertified
    };
    Ok(NseReport {
        value,
        lo,
        hi,
        status,
        top_dim: top,
        split: value == top,
        witnesses,
        system,
        group,
    })
}

/// Shape of the nonzero integral solution set of a monomial system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntKind {
    /// No conflicting pins: free generators are arbitrary nonzero integers
    /// and every pinned generator is the stated monomial in them.
    Parametrized,
    /// The exponent lattice forces every constrained generator to ±1.
    UnitsOnly,
    /// One-parameter family d ↦ (±d^{e_1}, …) with a finite set of sign
    /// patterns.
    Family,
    /// Exhaustive search up to the bound; completeness not established.
    BoundedSearch,
}

/// One-parameter family of integral solutions.
#[derive(Debug, Clone)]
pub struct IntFamily {
    pub vars: Vec<String>,
    /// |var_i| = d^{exponents[i]} for a single integer d ≥ 1.
    pub exponents: Vec<i64>,
    /// Admissible sign vectors (entries ±1), aligned with `vars`.
    pub sign_patterns: Vec<Vec<i8>>,
}

/// Nonzero integral diagonal solutions of a monomial system.
#[derive(Debug, Clone)]
pub struct IntReport {
    pub kind: IntKind,
    pub complete: bool,
    /// Generators not constrained by any relation (arbitrary nonzero).
    pub free: Vec<String>,
    /// Pinned generators rendered as monomials in free ones.
    pub pins: Vec<String>,
    /// Variables covered by the explicit `solutions` rows.
    pub solution_vars: Vec<String>,
    pub solutions: Vec<Vec<BigInt>>,
    pub family: Option<IntFamily>,
    /// Exactly one solution and no residual freedom.
    pub unique: bool,
}

/// Analyze the all-nonzero integral solutions of a monomial system by
/// exponent-lattice elimination, falling back to a bounded search (|λ| up to
/// `bound`) when the lattice leaves more than a one-parameter family.
pub fn integer_monomial_analyze(ms: &MonomialSystem, bound: u64) -> Result<IntReport> {
    let g = ms.gen_count();
    let tri = triangularize(ms);
    let free0: Vec<usize> = (0..g).filter(|&j| tri.expr[j].is_none()).collect();
    // Free generators actually constrained by a residual relation.
    let vres: Vec<usize> = free0
        .iter()
        .copied()
        .filter(|&j| tri.residuals.iter().any(|r| r[j] != 0))
        .collect();
    let truly_free: Vec<usize> = free0
        .iter()
        .copied()
        .filter(|j| !vres.contains(j))
        .collect();
    let pins: Vec<String> = (0..g)
        .filter_map(|j| {
            tri.expr[j].as_ref().map(|e| {
                format!("{} = {}", ms.lambda_name(j), ms.render_monomial(e))
            })
        })
        .collect();
    // Pinned generators whose expression only involves residual-constrained
    // variables extend every numeric solution row.
    let numeric_pinned: Vec<usize> = (0..g)
        .filter(|&j| {
            tri.expr[j].as_ref().is_some_and(|e| {
                e.iter()
                    .enumerate()
                    .all(|(k, &ek)| ek == 0 || vres.contains(&k))
            })
        })
        .collect();
    let mut solution_vars: Vec<usize> = vres.clone();
    solution_vars.extend(&numeric_pinned);
    solution_vars.sort_unstable();
    let var_names: Vec<String> = solution_vars
        .iter()
        .map(|&j| ms.lambda_name(j))
        .collect();
    let free_names: Vec<String> = truly_free.iter().map(|&j| ms.lambda_name(j)).collect();

    if tri.residuals.is_empty() {
        return Ok(IntReport {
            kind: IntKind::Parametrized,
            complete: true,
            free: free_names,
            pins,
            solution_vars: Vec::new(),
            solutions: Vec::new(),
            family: None,
            unique: false,
        });
    }
    if vres.len() >= 20 {
        return Err(Error::unsupported("too many residual variables"));
    }

    // Residual lattice over the constrained free variables.
    let rmat = ZMat::from_rows(
        tri.residuals
            .iter()
            .map(|r| vres.iter().map(|&j| r[j]).collect())
            .collect(),
    );
    let kernel = zkernel(&rmat);

    // Extend a sign assignment on vres to the full solution-variable row.
    let extend_signs = |eps: &[i8]| -> Vec<i8> {
        solution_vars
            .iter()
            .map(|&j| {
                if let Some(pos) = vres.iter().position(|&v| v == j) {
                    eps[pos]
                } else {
                    let e = tri.expr[j].as_ref().unwrap();
                    let parity: i64 = vres
                        .iter()
                        .enumerate()
                        .map(|(pos, &v)| e[v] * if eps[pos] < 0 { 1 } else { 0 })
                        .sum();
                    if parity % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                }
            })
            .collect()
    };
    let sign_ok = |eps: &[i8]| -> bool {
        tri.residuals.iter().all(|r| {
            let parity: i64 = vres
                .iter()
                .enumerate()
                .map(|(pos, &v)| r[v] * if eps[pos] < 0 { 1 } else { 0 })
                .sum();
            parity % 2 == 0
        })
    };

    let family_gen = if kernel.len() == 1 {
        let v: Vec<i64> = kernel[0]
            .iter()
            .map(|x| {
                use num::ToPrimitive;
                x.to_i64().expect("kernel generator exceeds i64")
            })
            .collect();
        let v: Vec<i64> = if v.iter().all(|&x| x <= 0) {
            v.iter().map(|x| -x).collect()
        } else {
            v
        };
        if v.iter().all(|&x| x >= 0) {
            Some(v)
        } else {
            None
        }
    } else {
        None
    };

    if kernel.is_empty() || (kernel.len() == 1 && family_gen.is_none()) {
        // Units only: every constrained variable is ±1.
        let mut solutions = Vec::new();
        for mask in 0..(1u32 << vres.len()) {
            let eps: Vec<i8> = (0..vres.len())
                .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                .collect();
            if sign_ok(&eps) {
                solutions.push(
                    extend_signs(&eps)
                        .into_iter()
                        .map(BigInt::from)
                        .collect::<Vec<_>>(),
                );
            }
        }
        solutions.sort();
        let unique = solutions.len() == 1 && truly_free.is_empty();
        return Ok(IntReport {
            kind: IntKind::UnitsOnly,
            complete: true,
            free: free_names,
            pins,
            solution_vars: var_names,
            solutions,
            family: None,
            unique,
        });
    }

    if let Some(v) = family_gen {
        // One-parameter family |λ_j| = d^{v_j}.
        let mut exps: Vec<i64> = Vec::new();
        for &j in &solution_vars {
            if let Some(pos) = vres.iter().position(|&x| x == j) {
                exps.push(v[pos]);
            } else {
                let e = tri.expr[j].as_ref().unwrap();
                exps.push(
                    vres.iter()
                        .enumerate()
                        .map(|(pos, &x)| e[x] * v[pos])
                        .sum(),
                );
            }
        }
        let mut sign_patterns = Vec::new();
        for mask in 0..(1u32 << vres.len()) {
            let eps: Vec<i8> = (0..vres.len())
                .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                .collect();
            if sign_ok(&eps) {
                sign_patterns.push(extend_signs(&eps));
            }
        }
        sign_patterns.sort();
        return Ok(IntReport {
            kind: IntKind::Family,
            complete: true,
            free: free_names,
            pins,
            solution_vars: var_names.clone(),
            solutions: Vec::new(),
            family: Some(IntFamily {
                vars: var_names,
                exponents: exps,
                sign_patterns,
            }),
            unique: false,
        });
    }

    // Bounded search over the constrained free variables.
    let b = bound.max(1) as i64;
    let per_var = 2 * b as u128;
    let mut space: u128 = 1;
    for _ in &vres {
        space = space.saturating_mul(per_var);
        if space > 4_000_000 {
            return Err(Error::unsupported(
                "integer search space too large; reduce the bound",
            ));
        }
    }
    let values: Vec<i64> = (1..=b).flat_map(|d| [d, -d]).collect();
    let mut assignment = vec![1i64; vres.len()];
    let mut solutions: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    fn search(
        idx: usize,
        values: &[i64],
        assignment: &mut Vec<i64>,
        tri: &Triangular,
        vres: &[usize],
        solution_vars: &[usize],
        solutions: &mut BTreeSet<Vec<BigInt>>,
    ) {
        if idx == vres.len() {
            for r in &tri.residuals {
                let mut lhs = BigInt::one();
                let mut rhs = BigInt::one();
                for (pos, &v) in vres.iter().enumerate() {
                    let e = r[v];
                    if e > 0 {
                        lhs *= num::pow(BigInt::from(assignment[pos]), e as usize);
                    } else if e < 0 {
                        rhs *= num::pow(BigInt::from(assignment[pos]), (-e) as usize);
                    }
                }
                if lhs != rhs {
                    return;
                }
            }
            let row: Vec<BigInt> = solution_vars
                .iter()
                .map(|&j| {
                    if let Some(pos) = vres.iter().position(|&x| x == j) {
                        BigInt::from(assignment[pos])
                    } else {
                        let e = tri.expr[j].as_ref().unwrap();
                        let mut val = BigInt::one();
                        for (pos, &x) in vres.iter().enumerate() {
                            if e[x] != 0 {
                                val *= num::pow(BigInt::from(assignment[pos]), e[x] as usize);
                            }
                        }
                        val
                    }
                })
                .collect();
            solutions.insert(row);
            return;
        }
        for &val in values {
            assignment[idx] = val;
            search(
                idx + 1,
                values,
                assignment,
                tri,
                vres,
                solution_vars,
                solutions,
            );
        }
    }
    search(
        0,
        &values,
        &mut assignment,
        &tri,
        &vres,
        &solution_vars,
        &mut solutions,
    );
    Ok(IntReport {
        kind: IntKind::BoundedSearch,
        complete: false,
        free: free_names,
        pins,
        solution_vars: var_names,
        solutions: solutions.into_iter().collect(),
        family: None,
        unique: false,
    })
}

#[cfg(test)]
mod tests;
