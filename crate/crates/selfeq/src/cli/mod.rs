// SPDX-License-Identifier: MIT
//! Command-line front end: spec-file parsing, the built-in example registry,
//! report assembly and rendering.
//!
//! A spec file contains exactly one block — `space`, `algebra` or
//! `sullivan` — and parses to a cell-complex description, a presented
//! graded-commutative algebra, or a free commutative cochain model.
//! [`parse_spec`] validates as it parses (undeclared names, degree
//! mismatches, declaration cycles, `d² ≠ 0` are all rejected), and
//! [`print_spec`] emits a canonical form with `parse ∘ print ∘ parse =
//! parse`.
//!
//! [`run_command`] executes one analysis command against a built-in example
//! or a spec file and returns a [`Report`]: a deterministic envelope
//! (command, input name and digest, engine version, seed) around a typed
//! payload.  [`machine_json`] serializes the report byte-stably;
//! [`render_human`] prints the same payload as text tables.  Exit codes:
//! 0 success, 1 input error, 2 unsupported input, 3 broken internal
//! invariant.

use crate::dgl::{
    cp_space, four_attach_space, four_cell_space, mimura_toda_space, three_cell_space, Attach,
    BracketExpr, CellSpec, DglModel, SpaceSpec,
};
use crate::endo::{
    auto_group, derive_constraints, diagonal_system, integer_monomial_analyze, parametrize,
    GroupReport, IntKind, IntReport, MonomialSystem, NseReport, NseStatus,
};
use crate::sul::{
    connected_sum, connected_sum_sullivan, cp1cp1_algebra, cp_algebra, cp_sullivan,
    csymplectic_check, formality_two_stage, hp_algebra, pd_check, s2s4_algebra, sphere_algebra,
    sullivan_diagonal_nse, wedge, wedge_nse, GCAlgebra, Presentation, SElt, SullivanModel,
};
use crate::{Error, Q, Result};
use num::{One, Signed, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;


// ---------------------------------------------------------------------------
// Report envelope.
// ---------------------------------------------------------------------------

/// Flags shared by every command.
#[derive(Debug, Clone)]
pub struct Opts {
    /// Largest homotopy degree shown in homology tables.
    pub max_degree: u32,
    /// Search bound for integral solution enumeration.
    pub int_bound: u64,
    /// Determinism seed recorded in the report.
    pub seed: u64,
}

impl Default for Opts {
    fn default() -> Self {
        Opts {
            max_degree: 16,
            int_bound: 100,
            seed: 0,
        }
    }
}

/// Engine identification stamped into every report.
#[derive(Debug, Clone, Serialize)]
pub struct EngineInfo {
    pub name: &'static str,
    pub version: &'static str,
}

/// What was analyzed: the resolved input name and a digest of the input
/// bytes (file contents, or the canonical built-in name).
#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub name: String,
    pub digest: String,
}

/// One complete command result.  Serialization is byte-stable: the same
/// input bytes and flags produce the same output bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub engine: EngineInfo,
    pub input: InputInfo,
    pub seed: u64,
    pub payload: Payload,
}

/// Typed result payload, one variant per command family.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Model(ModelPayload),
    SullivanModel(SullivanModelPayload),
    Homology(HomologyPayload),
    Selfmaps(SelfmapsPayload),
    Group(GroupPayload),
    Nse(NsePayload),
    Formal(FormalPayload),
    Split(SplitPayload),
    Cohomology(CohomologyPayload),
    Pd(PdPayload),
    Csymplectic(CsymplecticPayload),
    Algebra(AlgebraPayload),
    Mimura(MimuraPayload),
    Examples(ExamplesPayload),
}

/// One generator of a Lie model: the cell it came from and its differential.
#[derive(Debug, Clone, Serialize)]
pub struct CellRow {
    pub generator: String,
    pub degree: u32,
    pub cell_dim: u32,
    pub differential: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelPayload {
    pub name: String,
    pub top_dim: u32,
    pub wedge: bool,
    pub cells: Vec<CellRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SullivanModelPayload {
    pub name: String,
    pub cap: u32,
    pub minimal: bool,
    pub generators: Vec<GenRow>,
    pub differentials: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenRow {
    pub generator: String,
    pub degree: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct PiRow {
    pub k: u32,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologyPayload {
    pub name: String,
    pub max_degree: u32,
    /// Ranks of π_k ⊗ ℚ for 2 ≤ k ≤ max_degree (zero rows omitted).
    pub pi_ranks: Vec<PiRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EqRow {
    pub equation: String,
    pub certified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfmapsPayload {
    pub name: String,
    pub generators: Vec<GenRow>,
    /// Total number of formal coefficients in the generic self-map.
    pub parameters: usize,
    /// Number of polynomial chain-map constraints before reduction.
    pub constraints: usize,
    /// Diagonal monomial system extracted from the constraints.
    pub equations: Vec<EqRow>,
    pub all_certified: bool,
}

/// Structure of the diagonal self-equivalence quotient 𝓔(X₀)/𝓔♯(X₀):
/// a subgroup of (ℚ*)^rank × (ℤ/2)^torsion_z2 cut out by the relations.
#[derive(Debug, Clone, Serialize)]
pub struct GroupInfo {
    pub rank: usize,
    pub torsion_z2: usize,
    pub certified: bool,
    pub free: Vec<String>,
    pub dependent: Vec<DepRow>,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DepRow {
    pub parameter: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupPayload {
    pub name: String,
    #[serde(flatten)]
    pub group: GroupInfo,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRow {
    pub k: u32,
    /// Generators the witness keeps (λ = 1).
    pub nonzero: Vec<String>,
    /// Generators the witness kills (λ = 0).
    pub zero: Vec<String>,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NsePayload {
    pub name: String,
    pub value: u32,
    pub lo: u32,
    pub hi: u32,
    pub status: String,
    pub top_dim: u32,
    pub split: bool,
    pub equations: Vec<EqRow>,
    pub witnesses: Vec<WitnessRow>,
    pub group: GroupInfo,
}

#[derive(Debug, Clone, Serialize)]
pub struct FormalPayload {
    pub name: String,
    pub n: u32,
    pub value: u32,
    pub splits: bool,
    pub formal: bool,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitPayload {
    pub name: String,
    pub top_dim: u32,
    pub value: u32,
    pub split: bool,
    pub status: String,
    pub statement: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomologyPayload {
    pub name: String,
    pub dims: Vec<usize>,
    pub euler: i64,
    pub labels: Vec<String>,
    pub degrees: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PdPayload {
    pub name: String,
    pub holds: bool,
    pub top_degree: u32,
    pub fundamental_class: String,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CsymplecticPayload {
    pub name: String,
    pub csymplectic: bool,
    pub m: u32,
    /// Coefficients of a witness ω over the degree-2 basis.
    pub witness: Option<Vec<String>>,
    pub verdict: String,
}

/// Tables of a constructed algebra (connected sum or wedge), with the
/// duality verdict and, for wedges of two one-generated duality algebras,
/// the self-closeness value of the wedge.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraPayload {
    pub name: String,
    pub dims: Vec<usize>,
    pub euler: i64,
    pub labels: Vec<String>,
    pub degrees: Vec<u32>,
    pub pd_holds: Option<bool>,
    pub nse: Option<WedgeNseInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WedgeNseInfo {
    pub value: u32,
    pub certified: bool,
    pub top_degree: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub vars: Vec<String>,
    pub exponents: Vec<i64>,
    pub sign_patterns: Vec<Vec<i8>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntInfo {
    pub kind: String,
    pub complete: bool,
    pub unique: bool,
    pub free: Vec<String>,
    pub pins: Vec<String>,
    pub solution_vars: Vec<String>,
    pub solutions: Vec<Vec<String>>,
    pub family: Option<FamilyInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MimuraPayload {
    pub name: String,
    pub equations: Vec<EqRow>,
    pub value: u32,
    pub status: String,
    pub integer: IntInfo,
    pub conclusion: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleRow {
    pub name: String,
    pub summary: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExamplesPayload {
    pub spaces: Vec<ExampleRow>,
    pub algebras: Vec<ExampleRow>,
    pub models: Vec<ExampleRow>,
}

// ---------------------------------------------------------------------------
// Tokenizer.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Sym(c) => format!("'{c}'"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut it = text.chars().peekable();
    while let Some(&c) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c == '#' {
            for d in it.by_ref() {
                if d == '\n' {
                    break;
                }
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = it.peek() {
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    s.push(d);
                    it.next();
                } else {
                    break;
                }
            }
            toks.push(Tok::Ident(s));
        } else if c.is_ascii_digit() {
            let mut n: i64 = 0;
            while let Some(&d) = it.peek() {
                if let Some(v) = d.to_digit(10) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(v as i64))
                        .ok_or_else(|| Error::input("number literal out of range"))?;
                    it.next();
                } else {
                    break;
                }
            }
            toks.push(Tok::Int(n));
        } else if "{}[]:,+-*^()/".contains(c) {
            it.next();
            toks.push(Tok::Sym(c));
        } else {
            return Err(Error::input(format!(
                "unexpected character '{c}' in spec"
            )));
        }
    }
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Parser.
// ---------------------------------------------------------------------------

/// Words with grammatical meaning; rejected as declaration names.
const RESERVED: &[&str] = &[
    "space", "algebra", "sullivan", "sphere", "cell", "attach", "torsion", "gen", "rel", "top",
    "cap", "d",
];

/// A parsed spec file: exactly one of the three block kinds.
#[derive(Debug, Clone)]
pub enum ParsedSpec {
    Space(SpaceSpec),
    Algebra(Presentation),
    Sullivan(SullivanModel),
}

impl ParsedSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedSpec::Space(_) => "space",
            ParsedSpec::Algebra(_) => "algebra",
            ParsedSpec::Sullivan(_) => "sullivan",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            ParsedSpec::Space(s) => &s.name,
            ParsedSpec::Algebra(p) => &p.name,
            ParsedSpec::Sullivan(m) => &m.name,
        }
    }
}

struct P {
    toks: Vec<Tok>,
    pos: usize,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1)
    }

    fn next_tok(&mut self) -> Result<&Tok> {
        let t = self
            .toks
            .get(self.pos)
            .ok_or_else(|| Error::input("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn at_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Tok::Sym(s)) if *s == c)
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.next_tok()? {
            Tok::Sym(s) if *s == c => Ok(()),
            t => Err(Error::input(format!("expected '{c}', found {}", t.describe()))),
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.next_tok()? {
            Tok::Ident(s) => Ok(s.clone()),
            t => Err(Error::input(format!(
                "expected a name, found {}",
                t.describe()
            ))),
        }
    }

    fn expect_name(&mut self) -> Result<String> {
        let n = self.expect_ident()?;
        if RESERVED.contains(&n.as_str()) {
            return Err(Error::input(format!("reserved word used as a name: {n}")));
        }
        Ok(n)
    }

    fn expect_u32(&mut self) -> Result<u32> {
        match self.next_tok()? {
            Tok::Int(n) => u32::try_from(*n)
                .map_err(|_| Error::input("number out of range")),
            t => Err(Error::input(format!(
                "expected a number, found {}",
                t.describe()
            ))),
        }
    }

    /// `n` or `n/d`, sign already consumed by the caller.
    fn expect_rational(&mut self) -> Result<Q> {
        let n = match self.next_tok()? {
            Tok::Int(n) => *n,
            t => {
                return Err(Error::input(format!(
                    "expected a number, found {}",
                    t.describe()
                )))
            }
        };
        if self.at_sym('/') {
            self.pos += 1;
            let d = match self.next_tok()? {
                Tok::Int(d) => *d,
                t => {
                    return Err(Error::input(format!(
                        "expected a denominator, found {}",
                        t.describe()
                    )))
                }
            };
            if d == 0 {
                return Err(Error::input("zero denominator in a coefficient"));
            }
            Ok(crate::q(n, d))
        } else {
            Ok(crate::qi(n))
        }
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Error::input(format!(
                "unexpected trailing input after the block: {}",
                t.describe()
            ))),
        }
    }
}

/// Parse one spec file and validate the described object (names, degrees,
/// cycles, `∂² = 0` / `d² = 0`).
pub fn parse_spec(text: &str) -> Result<ParsedSpec> {
    let toks = tokenize(text)?;
    let mut p = P { toks, pos: 0 };
    let kw = p.expect_ident()?;
    let spec = match kw.as_str() {
        "space" => ParsedSpec::Space(parse_space_block(&mut p)?),
        "algebra" => ParsedSpec::Algebra(parse_algebra_block(&mut p)?),
        "sullivan" => ParsedSpec::Sullivan(parse_sullivan_block(&mut p)?),
        other => {
            return Err(Error::input(format!(
                "expected 'space', 'algebra' or 'sullivan', found '{other}'"
            )))
        }
    };
    p.expect_end()?;
    // Validate by building the described object once.
    match &spec {
        ParsedSpec::Space(s) => {
            DglModel::from_space(s)?;
        }
        ParsedSpec::Algebra(pres) => {
            crate::sul::from_presentation(pres)?;
        }
        ParsedSpec::Sullivan(_) => {} // validated during construction
    }
    Ok(spec)
}

fn parse_space_block(p: &mut P) -> Result<SpaceSpec> {
    let name = p.expect_name()?;
    p.expect_sym('{')?;
    let mut cells = Vec::new();
    loop {
        if p.at_sym('}') {
            p.pos += 1;
            break;
        }
        if p.at_kw("sphere") {
            p.pos += 1;
            let n = p.expect_name()?;
            p.expect_sym(':')?;
            let dim = p.expect_u32()?;
            cells.push(SpaceSpec::sphere(&n, dim));
        } else if p.at_kw("cell") {
            p.pos += 1;
            let n = p.expect_name()?;
            p.expect_sym(':')?;
            let dim = p.expect_u32()?;
            if !p.at_kw("attach") {
                return Err(Error::input(format!(
                    "cell {n} needs an 'attach' clause"
                )));
            }
            p.pos += 1;
            let attach = parse_attach(p)?;
            cells.push(CellSpec {
                name: n,
                dim,
                attach,
            });
        } else {
            let t = p
                .peek()
                .map(|t| t.describe())
                .unwrap_or_else(|| "end of input".to_string());
            return Err(Error::input(format!(
                "expected 'sphere', 'cell' or '}}' in space block, found {t}"
            )));
        }
    }
    Ok(SpaceSpec { name, cells })
}

fn parse_attach(p: &mut P) -> Result<Attach> {
    if p.at_kw("torsion") {
        p.pos += 1;
        return Ok(Attach::Torsion);
    }
    // A bare `0` (not followed by '*' or '/') is the explicit zero class.
    if matches!(p.peek(), Some(Tok::Int(0)))
        && !matches!(p.peek2(), Some(Tok::Sym('*')) | Some(Tok::Sym('/')))
    {
        p.pos += 1;
        return Ok(Attach::Zero);
    }
    let mut terms = Vec::new();
    let mut sign = Q::one();
    if p.at_sym('-') {
        p.pos += 1;
        sign = -sign;
    } else if p.at_sym('+') {
        p.pos += 1;
    }
    loop {
        let coeff = if matches!(p.peek(), Some(Tok::Int(_))) {
            let c = p.expect_rational()?;
            if !p.at_sym('*') {
                return Err(Error::input(
                    "expected '*' after the coefficient in an attach expression",
                ));
            }
            p.pos += 1;
            c
        } else {
            Q::one()
        };
        let expr = parse_bexpr(p)?;
        terms.push((&sign * coeff, expr));
        if p.at_sym('+') {
            p.pos += 1;
            sign = Q::one();
        } else if p.at_sym('-') {
            p.pos += 1;
            sign = -Q::one();
        } else {
            break;
        }
    }
    Ok(Attach::Class(terms))
}

fn parse_bexpr(p: &mut P) -> Result<BracketExpr> {
    match p.peek() {
        Some(Tok::Ident(_)) => {
            let n = p.expect_name()?;
            Ok(BracketExpr::gen(&n))
        }
        Some(Tok::Sym('[')) => {
            p.pos += 1;
            let a = parse_bexpr(p)?;
            p.expect_sym(',')?;
            let b = parse_bexpr(p)?;
            p.expect_sym(']')?;
            Ok(BracketExpr::br(a, b))
        }
        t => Err(Error::input(format!(
            "expected a class name or '[' in an attach expression, found {}",
            t.map(|t| t.describe())
                .unwrap_or_else(|| "end of input".to_string())
        ))),
    }
}

/// Raw item layout of an algebra or sullivan block: generator declarations
/// plus token spans for the polynomial bodies, resolved in a second pass
/// once every generator name is known.
struct RawBlock {
    name: String,
    gens: Vec<(String, u32)>,
    /// `rel` spans for algebra blocks, `d` spans (one per generator, in
    /// order) for sullivan blocks.
    spans: Vec<(usize, usize)>,
    /// `top` or `cap` value.
    bound: Option<u32>,
}

/// Scan items, treating the given keywords as item openers.  `poly_after`
/// names the keyword that introduces a polynomial span (`rel` or `d`).
fn scan_block(p: &mut P, kind: &'static str) -> Result<RawBlock> {
    let name = p.expect_name()?;
    p.expect_sym('{')?;
    let mut gens = Vec::new();
    let mut spans = Vec::new();
    let mut bound = None;
    let bound_kw = if kind == "algebra" { "top" } else { "cap" };
    loop {
        if p.at_sym('}') {
            p.pos += 1;
            break;
        }
        if p.at_kw("gen") {
            p.pos += 1;
            let n = p.expect_name()?;
            p.expect_sym(':')?;
            let d = p.expect_u32()?;
            gens.push((n, d));
            if kind == "sullivan" {
                if !p.at_kw("d") {
                    return Err(Error::input(
                        "each sullivan generator needs a 'd' clause",
                    ));
                }
                p.pos += 1;
                let start = p.pos;
                skip_poly(p);
                spans.push((start, p.pos));
            }
        } else if kind == "algebra" && p.at_kw("rel") {
            p.pos += 1;
            let start = p.pos;
            skip_poly(p);
            spans.push((start, p.pos));
        } else if p.at_kw(bound_kw) {
            p.pos += 1;
            bound = Some(p.expect_u32()?);
        } else {
            let t = p
                .peek()
                .map(|t| t.describe())
                .unwrap_or_else(|| "end of input".to_string());
            let items = if kind == "algebra" {
                "'gen', 'rel' or 'top'"
            } else {
                "'gen' or 'cap'"
            };
            return Err(Error::input(format!(
                "expected {items} in {kind} block, found {t}"
            )));
        }
    }
    Ok(RawBlock {
        name,
        gens,
        spans,
        bound,
    })
}

/// Advance past one polynomial body: everything up to the next item keyword
/// or the closing brace.
fn skip_poly(p: &mut P) {
    while let Some(t) = p.peek() {
        match t {
            Tok::Sym('}') => break,
            Tok::Ident(s) if ["gen", "rel", "top", "cap"].contains(&s.as_str()) => break,
            _ => p.pos += 1,
        }
    }
}

/// Parse one polynomial span into (coefficient, exponent-vector) terms over
/// the declared generators.
fn parse_poly(toks: &[Tok], gens: &[(String, u32)]) -> Result<Vec<(Q, Vec<u32>)>> {
    let mut p = P {
        toks: toks.to_vec(),
        pos: 0,
    };
    let mut terms = Vec::new();
    let mut sign = Q::one();
    if p.at_sym('-') {
        p.pos += 1;
        sign = -sign;
    } else if p.at_sym('+') {
        p.pos += 1;
    }
    loop {
        let mut exps = vec![0u32; gens.len()];
        let coeff = if matches!(p.peek(), Some(Tok::Int(_))) {
            let c = p.expect_rational()?;
            if p.at_sym('*') {
                p.pos += 1;
                parse_mono(&mut p, gens, &mut exps)?;
            }
            c
        } else {
            parse_mono(&mut p, gens, &mut exps)?;
            Q::one()
        };
        terms.push((&sign * coeff, exps));
        if p.at_sym('+') {
            p.pos += 1;
            sign = Q::one();
        } else if p.at_sym('-') {
            p.pos += 1;
            sign = -Q::one();
        } else {
            break;
        }
    }
    if let Some(t) = p.peek() {
        return Err(Error::input(format!(
            "unexpected token in a polynomial: {}",
            t.describe()
        )));
    }
    Ok(terms)
}

fn parse_mono(p: &mut P, gens: &[(String, u32)], exps: &mut [u32]) -> Result<()> {
    loop {
        let n = p.expect_ident()?;
        let idx = gens
            .iter()
            .position(|(g, _)| *g == n)
            .ok_or_else(|| Error::input(format!("undeclared name {n}")))?;
        let e = if p.at_sym('^') {
            p.pos += 1;
            p.expect_u32()?
        } else {
            1
        };
        exps[idx] = exps[idx]
            .checked_add(e)
            .ok_or_else(|| Error::input("exponent out of range"))?;
        if p.at_sym('*') && matches!(p.peek2(), Some(Tok::Ident(_))) {
            p.pos += 1;
        } else {
            break;
        }
    }
    Ok(())
}

fn parse_algebra_block(p: &mut P) -> Result<Presentation> {
    let raw = scan_block(p, "algebra")?;
    let top = raw
        .bound
        .ok_or_else(|| Error::input("algebra block needs 'top <degree>'"))?;
    let mut relations = Vec::new();
    for &(s, e) in &raw.spans {
        relations.push(parse_poly(&p.toks[s..e], &raw.gens)?);
    }
    Ok(Presentation {
        name: raw.name,
        gens: raw.gens,
        relations,
        top,
    })
}

fn parse_sullivan_block(p: &mut P) -> Result<SullivanModel> {
    let raw = scan_block(p, "sullivan")?;
    let cap = raw
        .bound
        .ok_or_else(|| Error::input("sullivan block needs 'cap <degree>'"))?;
    let mut diffs = Vec::new();
    for &(s, e) in &raw.spans {
        let mut elt = SElt::zero();
        for (c, m) in parse_poly(&p.toks[s..e], &raw.gens)? {
            if !c.is_zero() && m.iter().all(|&x| x == 0) {
                return Err(Error::input(
                    "differential has a nonzero constant term",
                ));
            }
            if !c.is_zero() {
                elt.add_term(m, c);
            }
        }
        diffs.push(elt);
    }
    SullivanModel::new(&raw.name, raw.gens, diffs, cap)
}

// ---------------------------------------------------------------------------
// Printer (canonical form).
// ---------------------------------------------------------------------------

/// Append `± coeff·body` to a sum rendering.
fn push_term(out: &mut String, first: bool, c: &Q, body: &str) {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if body == "1" {
        let _ = write!(out, "{abs}");
    } else if abs.is_one() {
        out.push_str(body);
    } else {
        let _ = write!(out, "{abs}*{body}");
    }
}

fn render_bexpr(e: &BracketExpr) -> String {
    match e {
        BracketExpr::Gen(n) => n.clone(),
        BracketExpr::Br(a, b) => format!("[{},{}]", render_bexpr(a), render_bexpr(b)),
    }
}

fn render_attach(a: &Attach) -> String {
    match a {
        Attach::Sphere => String::new(),
        Attach::Zero => "0".to_string(),
        Attach::Torsion => "torsion".to_string(),
        Attach::Class(terms) => {
            if terms.is_empty() {
                return "0".to_string();
            }
            let mut out = String::new();
            for (i, (c, e)) in terms.iter().enumerate() {
                push_term(&mut out, i == 0, c, &render_bexpr(e));
            }
            out
        }
    }
}

fn render_exp_mono(exps: &[u32], gens: &[(String, u32)]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                gens[i].0.clone()
            } else {
                format!("{}^{}", gens[i].0, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn render_terms(terms: &[(Q, Vec<u32>)], gens: &[(String, u32)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (c, m)) in terms.iter().enumerate() {
        push_term(&mut out, i == 0, c, &render_exp_mono(m, gens));
    }
    out
}

/// Canonical text form of a parsed spec; `parse(print(x)) == x` for every
/// `x` produced by [`parse_spec`].
pub fn print_spec(spec: &ParsedSpec) -> String {
    let mut out = String::new();
    match spec {
        ParsedSpec::Space(s) => {
            let _ = writeln!(out, "space {} {{", s.name);
            for c in &s.cells {
                match &c.attach {
                    Attach::Sphere => {
                        let _ = writeln!(out, "  sphere {}:{}", c.name, c.dim);
                    }
                    a => {
                        let _ = writeln!(
                            out,
                            "  cell {}:{} attach {}",
                            c.name,
                            c.dim,
                            render_attach(a)
                        );
                    }
                }
            }
            out.push_str("}\n");
        }
        ParsedSpec::Algebra(p) => {
            let _ = writeln!(out, "algebra {} {{", p.name);
            for (n, d) in &p.gens {
                let _ = writeln!(out, "  gen {n}:{d}");
            }
            for r in &p.relations {
                let _ = writeln!(out, "  rel {}", render_terms(r, &p.gens));
            }
            let _ = writeln!(out, "  top {}", p.top);
            out.push_str("}\n");
        }
        ParsedSpec::Sullivan(m) => {
            let _ = writeln!(out, "sullivan {} {{", m.name);
            for (i, (n, d)) in m.gens.iter().enumerate() {
                let terms: Vec<(Q, Vec<u32>)> = m.diffs[i]
                    .terms
                    .iter()
                    .rev()
                    .map(|(mo, c)| (c.clone(), mo.clone()))
                    .collect();
                let _ = writeln!(
                    out,
                    "  gen {n}:{d} d {}",
                    render_terms(&terms, &m.gens)
                );
            }
            let _ = writeln!(out, "  cap {}", m.cap);
            out.push_str("}\n");
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Built-in example registry.
// ---------------------------------------------------------------------------

/// Strip optional carets so `S^3` and `S3` name the same example.
fn normalize(name: &str) -> String {
    name.trim().replace('^', "")
}

/// `name(arg,…)` → (name, args); bare names get an empty arg list.
fn split_args(s: &str) -> Result<(String, Vec<String>)> {
    match s.find('(') {
        None => Ok((s.to_string(), Vec::new())),
        Some(i) => {
            let tail = &s[i + 1..];
            let Some(inner) = tail.strip_suffix(')') else {
                return Err(Error::input(format!("missing ')' in '{s}'")));
            };
            let args = inner
                .split(',')
                .map(|a| a.trim().to_string())
                .filter(|a| !a.is_empty())
                .collect();
            Ok((s[..i].to_string(), args))
        }
    }
}

fn int_args(name: &str, args: &[String], n: usize) -> Result<Vec<i64>> {
    if args.len() != n {
        return Err(Error::input(format!(
            "{name} takes {n} integer parameters, got {}",
            args.len()
        )));
    }
    args.iter()
        .map(|a| {
            a.parse::<i64>()
                .map_err(|_| Error::input(format!("parameter of {name} must be an integer: {a}")))
        })
        .collect()
}

/// Resolve a built-in space name; `Ok(None)` means the name has no built-in
/// space shape (the caller may try other registries or the filesystem).
pub fn builtin_space(name: &str) -> Result<Option<SpaceSpec>> {
    let s = normalize(name);
    if let Some(digits) = s.strip_prefix('S') {
        if let Ok(n) = digits.parse::<u32>() {
            if !(2..=12).contains(&n) {
                return Err(Error::unsupported(
                    "built-in spheres cover S2 through S12",
                ));
            }
            return Ok(Some(SpaceSpec {
                name: format!("S{n}"),
                cells: vec![SpaceSpec::sphere("u", n)],
            }));
        }
    }
    if let Some(digits) = s.strip_prefix("CP") {
        if let Ok(n) = digits.parse::<u32>() {
            return cp_space(n).map(Some);
        }
    }
    let (head, args) = split_args(&s)?;
    match head.as_str() {
        "three-cell" => {
            let v = int_args("three-cell", &args, 2)?;
            Ok(Some(three_cell_space(v[0], v[1])))
        }
        "four-cell" => {
            let v = int_args("four-cell", &args, 3)?;
            Ok(Some(four_cell_space(v[0], v[1], v[2])))
        }
        "four-attach" => {
            let v = int_args("four-attach", &args, 2)?;
            Ok(Some(four_attach_space(v[0], v[1])))
        }
        "mimura-toda" => {
            let v = int_args("mimura-toda", &args, 3)?;
            Ok(Some(mimura_toda_space(v[0], v[1], v[2])))
        }
        "wedge" => {
            if args.len() < 2 {
                return Err(Error::input("wedge needs at least two sphere factors"));
            }
            let mut cells: Vec<CellSpec> = Vec::new();
            let mut dims = Vec::new();
            for a in &args {
                let an = normalize(a);
                let n: u32 = an
                    .strip_prefix('S')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| {
                        Error::input(format!("wedge factors must be spheres S<n>, got {a}"))
                    })?;
                if n < 2 {
                    return Err(Error::input("wedge factors must have dimension >= 2"));
                }
                // Repeated dimensions get primed names so every generator
                // name stays unique.
                let mut gname = format!("u{n}");
                while cells.iter().any(|c| c.name == gname) {
                    gname.push('\'');
                }
                cells.push(SpaceSpec::sphere(&gname, n));
                dims.push(format!("S{n}"));
            }
            Ok(Some(SpaceSpec {
                name: dims.join("v"),
                cells,
            }))
        }
        _ => Ok(None),
    }
}

/// For a one-generated truncated duality algebra named like a projective
/// space or sphere, the (generator degree, truncation height) pair.
fn one_gen_duality_params(name: &str) -> Option<(u32, u32)> {
    let s = normalize(name);
    if let Some(d) = s.strip_prefix("CP") {
        let n: u32 = d.parse().ok()?;
        return (n >= 1).then_some((2, n + 1));
    }
    if let Some(d) = s.strip_prefix("HP") {
        let n: u32 = d.parse().ok()?;
        return (n >= 1).then_some((4, n + 1));
    }
    if let Some(d) = s.strip_prefix('S') {
        let n: u32 = d.parse().ok()?;
        return (n >= 2).then_some((n, 2));
    }
    None
}

/// Resolve a built-in cohomology algebra name.
pub fn builtin_algebra(name: &str) -> Result<Option<GCAlgebra>> {
    let s = normalize(name);
    if let Some((a, b)) = s.split_once('#') {
        let left = builtin_algebra(a)?
            .ok_or_else(|| Error::input(format!("unknown algebra: {a}")))?;
        let right = builtin_algebra(b)?
            .ok_or_else(|| Error::input(format!("unknown algebra: {b}")))?;
        return connected_sum(&left, &right).map(Some);
    }
    match s.as_str() {
        "S2xS4" => return Ok(Some(s2s4_algebra())),
        "CP1xCP1" => return Ok(Some(cp1cp1_algebra())),
        _ => {}
    }
    if let Some(d) = s.strip_prefix("CP") {
        if let Ok(n) = d.parse::<u32>() {
            if n < 1 {
                return Err(Error::input("complex projective space needs n >= 1"));
            }
            return Ok(Some(cp_algebra(n)));
        }
    }
    if let Some(d) = s.strip_prefix("HP") {
        if let Ok(n) = d.parse::<u32>() {
            if n < 1 {
                return Err(Error::input("quaternionic projective space needs n >= 1"));
            }
            return Ok(Some(hp_algebra(n)));
        }
    }
    if let Some(d) = s.strip_prefix('S') {
        if let Ok(n) = d.parse::<u32>() {
            if n < 2 {
                return Err(Error::input("sphere dimension must be >= 2"));
            }
            return Ok(Some(sphere_algebra(n)));
        }
    }
    Ok(None)
}

/// Resolve a built-in Sullivan model name: `M(CP<n>)` or `M(A#B)` for
/// one-generated duality factors.
pub fn builtin_sullivan(name: &str) -> Result<Option<SullivanModel>> {
    let s = normalize(name);
    let Some(tail) = s.strip_prefix("M(") else {
        return Ok(None);
    };
    let Some(inner) = tail.strip_suffix(')') else {
        return Err(Error::input(format!("missing ')' in '{name}'")));
    };
    if let Some((a, b)) = inner.split_once('#') {
        let (xd, xk) = one_gen_duality_params(a).ok_or_else(|| {
            Error::input(format!("unknown connected-sum model factor: {a}"))
        })?;
        let (yd, ym) = one_gen_duality_params(b).ok_or_else(|| {
            Error::input(format!("unknown connected-sum model factor: {b}"))
        })?;
        return connected_sum_sullivan(xd, xk, yd, ym).map(Some);
    }
    if let Some(d) = inner.strip_prefix("CP") {
        if let Ok(n) = d.parse::<u32>() {
            if n < 1 {
                return Err(Error::input("complex projective space needs n >= 1"));
            }
            return Ok(Some(cp_sullivan(n)));
        }
    }
    Ok(None)
}

fn examples_payload() -> ExamplesPayload {
    let row = |name: &str, summary: &str| ExampleRow {
        name: name.to_string(),
        summary: summary.to_string(),
    };
    ExamplesPayload {
        spaces: vec![
            row("S<n>", "sphere, 2 <= n <= 12"),
            row("CP<n>", "complex projective n-space, 1 <= n <= 5"),
            row(
                "three-cell(a,b)",
                "S3 v S5 with a 12-cell attached along a*[a,[a,[a,b]]] + b*[b,[a,b]]",
            ),
            row(
                "four-cell(a,b,c)",
                "S2 v S3 with a 4-cell (a*[u1,u1]) and a 6-cell (b*[[u1,u2],u1] + c*[u1,u3])",
            ),
            row(
                "four-attach(a,b)",
                "CP4 v S3 with the 10-cell re-attached: a*[[[u1,u2],u2],[u1,u2]] + b*(CP class)",
            ),
            row(
                "mimura-toda(a,b,c)",
                "CP2 v S3 with a 12-cell attached along three weight-5 brackets",
            ),
            row("wedge(S3,S5,...)", "wedge of spheres (two or more factors)"),
        ],
        algebras: vec![
            row("S<n>", "cohomology of the n-sphere"),
            row("CP<n>", "truncated polynomial algebra Q[x]/(x^(n+1)), |x| = 2"),
            row("HP<n>", "truncated polynomial algebra Q[y]/(y^(n+1)), |y| = 4"),
            row("S2xS4", "cohomology of the product S2 x S4"),
            row("CP1xCP1", "cohomology of the product CP1 x CP1"),
            row("A#B", "connected sum of two duality algebras, e.g. CP2#CP2, CP4#HP2"),
        ],
        models: vec![
            row("M(CP<n>)", "minimal Sullivan model of CP<n>"),
            row(
                "M(A#B)",
                "cochain model of a connected sum, e.g. M(CP4#HP2)",
            ),
        ],
    }
}

// ---------------------------------------------------------------------------
// Input resolution.
// ---------------------------------------------------------------------------

enum Resolved {
    Space(SpaceSpec),
    Algebra(GCAlgebra),
    Sullivan(SullivanModel),
}

struct Input {
    value: Resolved,
    name: String,
    /// Bytes the digest is computed over: file contents, or the canonical
    /// built-in name.
    digest_basis: Vec<u8>,
}

/// Which input kinds a command accepts.
#[derive(Clone, Copy)]
struct Want {
    space: bool,
    algebra: bool,
    sullivan: bool,
}

impl Want {
    const SPACE: Want = Want {
        space: true,
        algebra: false,
        sullivan: false,
    };
    const ALGEBRA: Want = Want {
        space: false,
        algebra: true,
        sullivan: false,
    };
    const SPACE_OR_SULLIVAN: Want = Want {
        space: true,
        algebra: false,
        sullivan: true,
    };
    const ALGEBRA_OR_SULLIVAN: Want = Want {
        space: false,
        algebra: true,
        sullivan: true,
    };

    fn describe(&self) -> &'static str {
        match (self.space, self.algebra, self.sullivan) {
            (true, false, false) => "a space",
            (false, true, false) => "an algebra",
            (true, false, true) => "a space or a sullivan model",
            (false, true, true) => "an algebra or a sullivan model",
            _ => "a space, an algebra or a sullivan model",
        }
    }
}

fn resolve(command: &str, s: &str, want: Want) -> Result<Input> {
    if std::path::Path::new(s).is_file() {
        let text = std::fs::read_to_string(s)
            .map_err(|e| Error::input(format!("cannot read {s}: {e}")))?;
        let spec = parse_spec(&text)?;
        let ok = match &spec {
            ParsedSpec::Space(_) => want.space,
            ParsedSpec::Algebra(_) => want.algebra,
            ParsedSpec::Sullivan(_) => want.sullivan,
        };
        if !ok {
            return Err(Error::input(format!(
                "command {command} needs {}, but {s} contains a {} block",
                want.describe(),
                spec.kind()
            )));
        }
        let name = spec.name().to_string();
        let value = match spec {
            ParsedSpec::Space(sp) => Resolved::Space(sp),
            ParsedSpec::Algebra(p) => Resolved::Algebra(crate::sul::from_presentation(&p)?),
            ParsedSpec::Sullivan(m) => Resolved::Sullivan(m),
        };
        return Ok(Input {
            value,
            name,
            digest_basis: text.into_bytes(),
        });
    }
    if want.space {
        if let Some(spec) = builtin_space(s)? {
            let name = spec.name.clone();
            return Ok(Input {
                value: Resolved::Space(spec),
                name: name.clone(),
                digest_basis: name.into_bytes(),
            });
        }
    }
    if want.sullivan {
        if let Some(m) = builtin_sullivan(s)? {
            let name = m.name.clone();
            return Ok(Input {
                value: Resolved::Sullivan(m),
                name: name.clone(),
                digest_basis: name.into_bytes(),
            });
        }
    }
    if want.algebra {
        if let Some(a) = builtin_algebra(s)? {
            let name = a.name.clone();
            return Ok(Input {
                value: Resolved::Algebra(a),
                name: name.clone(),
                digest_basis: name.into_bytes(),
            });
        }
    }
    Err(Error::input(format!(
        "unknown example or missing file: {s} (run 'selfeq examples' for the registry)"
    )))
}

fn digest_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    format!("sha256:{:x}", h.finalize())
}

// ---------------------------------------------------------------------------
// Library-report conversions.
// ---------------------------------------------------------------------------

fn status_str(s: NseStatus) -> String {
    match s {
        NseStatus::Certified => "certified",
        NseStatus::Bounds => "bounds",
        NseStatus::Uncertified => "uncertified",
    }
    .to_string()
}

fn group_info(g: &GroupReport) -> GroupInfo {
    GroupInfo {
        rank: g.rank,
        torsion_z2: g.torsion_z2,
        certified: g.certified,
        free: g.free.clone(),
        dependent: g
            .dependent
            .iter()
            .map(|(p, v)| DepRow {
                parameter: p.clone(),
                value: v.clone(),
            })
            .collect(),
        relations: g.relations.clone(),
    }
}

fn eq_rows(ms: &MonomialSystem) -> Vec<EqRow> {
    ms.eqs
        .iter()
        .map(|eq| EqRow {
            equation: ms.render_eq(eq),
            certified: eq.certified,
        })
        .collect()
}

fn nse_payload(name: &str, rep: &NseReport) -> NsePayload {
    let witnesses = rep
        .witnesses
        .iter()
        .map(|w| {
            let (mut nonzero, mut zero) = (Vec::new(), Vec::new());
            for (u, &on) in w.pattern.iter().enumerate() {
                if on {
                    nonzero.push(rep.system.names[u].clone());
                } else {
                    zero.push(rep.system.names[u].clone());
                }
            }
            WitnessRow {
                k: w.k,
                nonzero,
                zero,
                verified: w.verified,
            }
        })
        .collect();
    NsePayload {
        name: name.to_string(),
        value: rep.value,
        lo: rep.lo,
        hi: rep.hi,
        status: status_str(rep.status),
        top_dim: rep.top_dim,
        split: rep.split,
        equations: eq_rows(&rep.system),
        witnesses,
        group: group_info(&rep.group),
    }
}

fn int_info(ir: &IntReport) -> IntInfo {
    IntInfo {
        kind: match ir.kind {
            IntKind::Parametrized => "parametrized",
            IntKind::UnitsOnly => "units-only",
            IntKind::Family => "family",
            IntKind::BoundedSearch => "bounded-search",
        }
        .to_string(),
        complete: ir.complete,
        unique: ir.unique,
        free: ir.free.clone(),
        pins: ir.pins.clone(),
        solution_vars: ir.solution_vars.clone(),
        solutions: ir
            .solutions
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect(),
        family: ir.family.as_ref().map(|f| FamilyInfo {
            vars: f.vars.clone(),
            exponents: f.exponents.clone(),
            sign_patterns: f.sign_patterns.clone(),
        }),
    }
}

fn algebra_payload(a: &GCAlgebra, nse: Option<WedgeNseInfo>) -> Result<AlgebraPayload> {
    let pd_holds = match pd_check(a) {
        Ok(rep) => Some(rep.holds),
        Err(Error::Input(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(AlgebraPayload {
        name: a.name.clone(),
        dims: a.dims_by_degree(),
        euler: a.euler_characteristic(),
        labels: a.labels.clone(),
        degrees: a.degrees.clone(),
        pd_holds,
        nse,
    })
}

// ---------------------------------------------------------------------------
// Command dispatch.
// ---------------------------------------------------------------------------

/// Every command the CLI accepts.
pub const COMMANDS: &[&str] = &[
    "model",
    "homology",
    "selfmaps",
    "group",
    "nse",
    "formal",
    "split",
    "cohomology",
    "pd",
    "csymplectic",
    "connsum",
    "wedge",
    "mimura-toda",
    "examples",
];

fn one_input<'a>(command: &str, inputs: &'a [String]) -> Result<&'a str> {
    match inputs {
        [one] => Ok(one.as_str()),
        _ => Err(Error::input(format!(
            "command {command} takes exactly one input, got {}",
            inputs.len()
        ))),
    }
}

/// Execute one command and assemble the deterministic report.
pub fn run_command(command: &str, inputs: &[String], opts: &Opts) -> Result<Report> {
    if !COMMANDS.contains(&command) {
        return Err(Error::input(format!(
            "unknown command {command} (expected one of: {})",
            COMMANDS.join(", ")
        )));
    }
    let (input_info, payload) = match command {
        "model" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::SPACE_OR_SULLIVAN)?;
            let payload = match &inp.value {
                Resolved::Space(spec) => {
                    let model = DglModel::from_space(spec)?;
                    let gens = &model.ctx.gens;
                    let cells = (0..model.gen_count() as crate::glie::GenId)
                        .map(|g| CellRow {
                            generator: gens.name(g).to_string(),
                            degree: gens.degree(g),
                            cell_dim: model.cell_dim(g),
                            differential: model.diff(g).render(gens),
                        })
                        .collect();
                    Payload::Model(ModelPayload {
                        name: model.name.clone(),
                        top_dim: model.top_dim(),
                        wedge: model.is_wedge(),
                        cells,
                    })
                }
                Resolved::Sullivan(m) => Payload::SullivanModel(SullivanModelPayload {
                    name: m.name.clone(),
                    cap: m.cap,
                    minimal: m.is_minimal(),
                    generators: m
                        .gens
                        .iter()
                        .map(|(n, d)| GenRow {
                            generator: n.clone(),
                            degree: *d,
                        })
                        .collect(),
                    differentials: crate::sul::render_model_diffs(m),
                }),
                Resolved::Algebra(_) => unreachable!("want excludes algebras"),
            };
            (inp, payload)
        }
        "homology" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::SPACE)?;
            let Resolved::Space(spec) = &inp.value else {
                unreachable!("want is space-only")
            };
            let model = DglModel::from_space(spec)?;
            let dmax = opts.max_degree.saturating_sub(1).max(1);
            let pi_ranks = model
                .pi_ranks(dmax)
                .into_iter()
                .filter(|&(_, r)| r > 0)
                .map(|(k, rank)| PiRow { k, rank })
                .collect();
            let payload = Payload::Homology(HomologyPayload {
                name: model.name.clone(),
                max_degree: opts.max_degree,
                pi_ranks,
            });
            (inp, payload)
        }
        "selfmaps" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::SPACE)?;
            let Resolved::Space(spec) = &inp.value else {
                unreachable!("want is space-only")
            };
            let model = DglModel::from_space(spec)?;
            let pmap = parametrize(&model);
            let cs = derive_constraints(&model, &pmap);
            let ms = diagonal_system(&model, &cs)?;
            let gens = &model.ctx.gens;
            let payload = Payload::Selfmaps(SelfmapsPayload {
                name: model.name.clone(),
                generators: (0..model.gen_count() as crate::glie::GenId)
                    .map(|g| GenRow {
                        generator: gens.name(g).to_string(),
                        degree: gens.degree(g),
                    })
                    .collect(),
                parameters: pmap.vars.len(),
                constraints: cs.constraints.len(),
                all_certified: ms.all_certified(),
                equations: eq_rows(&ms),
            });
            (inp, payload)
        }
        "group" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::SPACE)?;
            let Resolved::Space(spec) = &inp.value else {
                unreachable!("want is space-only")
            };
            let model = DglModel::from_space(spec)?;
            let pmap = parametrize(&model);
            let cs = derive_constraints(&model, &pmap);
            let ms = diagonal_system(&model, &cs)?;
            let g = auto_group(&ms)?;
            let payload = Payload::Group(GroupPayload {
                name: model.name.clone(),
                group: group_info(&g),
            });
            (inp, payload)
        }
        "nse" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::SPACE_OR_SULLIVAN)?;
            let payload = match &inp.value {
                Resolved::Space(spec) => {
                    let model = DglModel::from_space(spec)?;
                    let rep = crate::endo::nse(&model)?;
                    Payload::Nse(nse_payload(&model.name, &rep))
                }
                Resolved::Sullivan(m) => {
                    let rep = sullivan_diagonal_nse(m)?;
                    Payload::Nse(nse_payload(&m.name, &rep))
                }
                Resolved::Algebra(_) => unreachable!("want excludes algebras"),
            };
            (inp, payload)
        }
        "formal" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::SPACE)?;
            let Resolved::Space(spec) = &inp.value else {
                unreachable!("want is space-only")
            };
            let rep = formality_two_stage(spec)?;
            let payload = Payload::Formal(FormalPayload {
                name: spec.name.clone(),
                n: rep.n,
                value: rep.value,
                splits: rep.splits,
                formal: rep.formal,
                reason: rep.reason.clone(),
            });
            (inp, payload)
        }
        "split" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::SPACE)?;
            let Resolved::Space(spec) = &inp.value else {
                unreachable!("want is space-only")
            };
            let model = DglModel::from_space(spec)?;
            let rep = crate::endo::nse(&model)?;
            let statement = if rep.split {
                format!(
                    "the top cell splits off rationally: X ≃ B ∨ S^{} with B the subcomplex below it",
                    rep.top_dim
                )
            } else {
                format!(
                    "no rational splitting detected: N𝓔 = {} < {} = top cell dimension",
                    rep.value, rep.top_dim
                )
            };
            let payload = Payload::Split(SplitPayload {
                name: model.name.clone(),
                top_dim: rep.top_dim,
                value: rep.value,
                split: rep.split,
                status: status_str(rep.status),
                statement,
            });
            (inp, payload)
        }
        "cohomology" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::ALGEBRA_OR_SULLIVAN)?;
            let payload = match &inp.value {
                Resolved::Algebra(a) => Payload::Cohomology(CohomologyPayload {
                    name: a.name.clone(),
                    dims: a.dims_by_degree(),
                    euler: a.euler_characteristic(),
                    labels: a.labels.clone(),
                    degrees: a.degrees.clone(),
                }),
                Resolved::Sullivan(m) => {
                    let ring = m.cohomology_ring()?;
                    let dims = m.cohomology();
                    let euler = dims
                        .iter()
                        .enumerate()
                        .map(|(d, &k)| if d % 2 == 0 { k as i64 } else { -(k as i64) })
                        .sum();
                    Payload::Cohomology(CohomologyPayload {
                        name: m.name.clone(),
                        dims,
                        euler,
                        labels: ring.labels.clone(),
                        degrees: ring.degrees.clone(),
                    })
                }
                Resolved::Space(_) => unreachable!("want excludes spaces"),
            };
            (inp, payload)
        }
        "pd" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::ALGEBRA)?;
            let Resolved::Algebra(a) = &inp.value else {
                unreachable!("want is algebra-only")
            };
            let rep = pd_check(a)?;
            let payload = Payload::Pd(PdPayload {
                name: a.name.clone(),
                holds: rep.holds,
                top_degree: a.top_degree(),
                fundamental_class: a.labels[rep.omega].clone(),
                failure: rep.failure.clone(),
            });
            (inp, payload)
        }
        "csymplectic" => {
            let inp = resolve(command, one_input(command, inputs)?, Want::ALGEBRA)?;
            let Resolved::Algebra(a) = &inp.value else {
                unreachable!("want is algebra-only")
            };
            let rep = csymplectic_check(a)?;
            let payload = Payload::Csymplectic(CsymplecticPayload {
                name: a.name.clone(),
                csymplectic: rep.csymplectic,
                m: rep.m,
                witness: rep
                    .witness
                    .as_ref()
                    .map(|w| w.iter().map(|c| c.to_string()).collect()),
                verdict: rep.verdict.clone(),
            });
            (inp, payload)
        }
        "connsum" => {
            if inputs.len() != 2 {
                return Err(Error::input(format!(
                    "command connsum takes exactly two inputs, got {}",
                    inputs.len()
                )));
            }
            let a = resolve(command, &inputs[0], Want::ALGEBRA)?;
            let b = resolve(command, &inputs[1], Want::ALGEBRA)?;
            let (Resolved::Algebra(aa), Resolved::Algebra(ab)) = (&a.value, &b.value) else {
                unreachable!("want is algebra-only")
            };
            let sum = connected_sum(aa, ab)?;
            let payload = Payload::Algebra(algebra_payload(&sum, None)?);
            let inp = Input {
                value: Resolved::Algebra(sum),
                name: format!("{} # {}", a.name, b.name),
                digest_basis: [a.digest_basis.as_slice(), b"#", b.digest_basis.as_slice()]
                    .concat(),
            };
            (inp, payload)
        }
        "wedge" => {
            if inputs.len() < 2 {
                return Err(Error::input(format!(
                    "command wedge takes at least two inputs, got {}",
                    inputs.len()
                )));
            }
            let mut resolved = Vec::new();
            for s in inputs {
                resolved.push(resolve(command, s, Want::ALGEBRA)?);
            }
            let algebras: Vec<&GCAlgebra> = resolved
                .iter()
                .map(|r| match &r.value {
                    Resolved::Algebra(a) => a,
                    _ => unreachable!("want is algebra-only"),
                })
                .collect();
            let mut acc = algebras[0].clone();
            for a in &algebras[1..] {
                acc = wedge(&acc, a);
            }
            // For a wedge of exactly two one-generated duality algebras the
            // self-closeness value of the wedge is computed as well.
            let nse = if inputs.len() == 2 {
                match (
                    one_gen_duality_params(&inputs[0]),
                    one_gen_duality_params(&inputs[1]),
                ) {
                    (Some((xd, xk)), Some((yd, ym))) => match wedge_nse(xd, xk, yd, ym) {
                        Ok(rep) => Some(WedgeNseInfo {
                            value: rep.value,
                            certified: rep.certified,
                            top_degree: rep.top_degree,
                        }),
                        Err(Error::Internal(m)) => return Err(Error::Internal(m)),
                        Err(_) => None,
                    },
                    _ => None,
                }
            } else {
                None
            };
            let payload = Payload::Algebra(algebra_payload(&acc, nse)?);
            let names: Vec<&str> = resolved.iter().map(|r| r.name.as_str()).collect();
            let mut basis = Vec::new();
            for (i, r) in resolved.iter().enumerate() {
                if i > 0 {
                    basis.extend_from_slice(b"v");
                }
                basis.extend_from_slice(&r.digest_basis);
            }
            let inp = Input {
                value: Resolved::Algebra(acc),
                name: names.join(" v "),
                digest_basis: basis,
            };
            (inp, payload)
        }
        "mimura-toda" => {
            let joined = inputs.join(",");
            let stripped = normalize(&joined);
            let stripped = stripped
                .strip_prefix("mimura-toda")
                .unwrap_or(&stripped)
                .trim_matches(|c| c == '(' || c == ')')
                .to_string();
            let parts: Vec<i64> = stripped
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::input("mimura-toda needs three integer parameters a,b,c"))
                })
                .collect::<Result<_>>()?;
            if parts.len() != 3 {
                return Err(Error::input(
                    "mimura-toda needs three integer parameters a,b,c",
                ));
            }
            let spec = mimura_toda_space(parts[0], parts[1], parts[2]);
            let model = DglModel::from_space(&spec)?;
            let rep = crate::endo::nse(&model)?;
            let ir = integer_monomial_analyze(&rep.system, opts.int_bound)?;
            let conclusion = format!("N𝓔 = {}", rep.value);
            let payload = Payload::Mimura(MimuraPayload {
                name: spec.name.clone(),
                equations: eq_rows(&rep.system),
                value: rep.value,
                status: status_str(rep.status),
                integer: int_info(&ir),
                conclusion,
            });
            let inp = Input {
                value: Resolved::Space(spec.clone()),
                name: spec.name.clone(),
                digest_basis: spec.name.clone().into_bytes(),
            };
            (inp, payload)
        }
        "examples" => {
            if !inputs.is_empty() {
                return Err(Error::input("command examples takes no input"));
            }
            let inp = Input {
                value: Resolved::Space(SpaceSpec {
                    name: "examples".to_string(),
                    cells: Vec::new(),
                }),
                name: "registry".to_string(),
                digest_basis: b"registry".to_vec(),
            };
            (inp, Payload::Examples(examples_payload()))
        }
        _ => unreachable!("command list is checked above"),
    };
    Ok(Report {
        command: command.to_string(),
        engine: EngineInfo {
            name: "selfeq",
            version: env!("CARGO_PKG_VERSION"),
        },
        input: InputInfo {
            name: input_info.name,
            digest: digest_hex(&[input_info.digest_basis.as_slice()]),
        },
        seed: opts.seed,
        payload,
    })
}

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

/// Byte-stable JSON form of a report (trailing newline included).
pub fn machine_json(rep: &Report) -> String {
    let mut s = serde_json::to_string_pretty(rep).expect("report serialization cannot fail");
    s.push('\n');
    s
}

fn push_eqs(out: &mut String, eqs: &[EqRow]) {
    if eqs.is_empty() {
        out.push_str("  (no diagonal relations)\n");
    }
    for e in eqs {
        let tag = if e.certified { "certified" } else { "uncertified" };
        let _ = writeln!(out, "  {}   [{}]", e.equation, tag);
    }
}

fn push_group(out: &mut String, g: &GroupInfo) {
    let _ = writeln!(
        out,
        "group: rank {}, torsion (Z/2)^{}{}",
        g.rank,
        g.torsion_z2,
        if g.certified { "" } else { " (uncertified)" }
    );
    if !g.free.is_empty() {
        let _ = writeln!(out, "  free: {}", g.free.join(", "));
    }
    for d in &g.dependent {
        let _ = writeln!(out, "  {} = {}", d.parameter, d.value);
    }
    for r in &g.relations {
        let _ = writeln!(out, "  relation: {r}");
    }
}

fn push_witnesses(out: &mut String, ws: &[WitnessRow]) {
    for w in ws {
        let nz = if w.nonzero.is_empty() {
            "-".to_string()
        } else {
            w.nonzero.join(",")
        };
        let z = if w.zero.is_empty() {
            "-".to_string()
        } else {
            w.zero.join(",")
        };
        let _ = writeln!(
            out,
            "  k={}  keep {}  kill {}  [{}]",
            w.k,
            nz,
            z,
            if w.verified { "verified" } else { "unverified" }
        );
    }
}

fn push_algebra_tables(out: &mut String, name: &str, dims: &[usize], euler: i64, labels: &[String], degrees: &[u32]) {
    let _ = writeln!(out, "algebra: {name}");
    let dims_s: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(out, "dims by degree: [{}]", dims_s.join(", "));
    let _ = writeln!(out, "euler characteristic: {euler}");
    out.push_str("basis:\n");
    for (l, d) in labels.iter().zip(degrees) {
        let _ = writeln!(out, "  {l}   (degree {d})");
    }
}

/// Text rendering of a report for terminals; same payload as the JSON form.
pub fn render_human(rep: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", rep.command, rep.input.name);
    match &rep.payload {
        Payload::Model(m) => {
            let _ = writeln!(
                out,
                "top cell dimension: {}   wedge of spheres: {}",
                m.top_dim,
                if m.wedge { "yes" } else { "no" }
            );
            out.push_str("generators:\n");
            for c in &m.cells {
                let _ = writeln!(
                    out,
                    "  {} (degree {}, cell dim {}):  d({}) = {}",
                    c.generator, c.degree, c.cell_dim, c.generator, c.differential
                );
            }
        }
        Payload::SullivanModel(m) => {
            let _ = writeln!(
                out,
                "cap degree: {}   minimal: {}",
                m.cap,
                if m.minimal { "yes" } else { "no" }
            );
            out.push_str("generators:\n");
            for (g, d) in m.generators.iter().zip(&m.differentials) {
                let _ = writeln!(out, "  {} (degree {}):  {}", g.generator, g.degree, d);
            }
        }
        Payload::Homology(h) => {
            let _ = writeln!(out, "rational homotopy ranks through degree {}:", h.max_degree);
            if h.pi_ranks.is_empty() {
                out.push_str("  (all zero)\n");
            }
            for r in &h.pi_ranks {
                let _ = writeln!(out, "  pi_{} ⊗ Q: rank {}", r.k, r.rank);
            }
        }
        Payload::Selfmaps(s) => {
            let gens: Vec<String> = s
                .generators
                .iter()
                .map(|g| format!("{}:{}", g.generator, g.degree))
                .collect();
            let _ = writeln!(out, "generators: {}", gens.join("  "));
            let _ = writeln!(
                out,
                "parameters: {} ({} diagonal), chain-map constraints: {}",
                s.parameters,
                s.generators.len(),
                s.constraints
            );
            out.push_str("diagonal monomial system:\n");
            push_eqs(&mut out, &s.equations);
        }
        Payload::Group(g) => push_group(&mut out, &g.group),
        Payload::Nse(n) => {
            let _ = writeln!(
                out,
                "value: {}   status: {}   enclosure: [{}, {}]",
                n.value, n.status, n.lo, n.hi
            );
            let _ = writeln!(
                out,
                "top cell: {}   splits: {}",
                n.top_dim,
                if n.split { "yes" } else { "no" }
            );
            out.push_str("equations:\n");
            push_eqs(&mut out, &n.equations);
            if !n.witnesses.is_empty() {
                out.push_str("witnesses:\n");
                push_witnesses(&mut out, &n.witnesses);
            }
            push_group(&mut out, &n.group);
        }
        Payload::Formal(f) => {
            let _ = writeln!(out, "top cell: {}   N𝓔 value: {}", f.n, f.value);
            let _ = writeln!(
                out,
                "splits: {}   formal: {}",
                if f.splits { "yes" } else { "no" },
                if f.formal { "yes" } else { "no" }
            );
            let _ = writeln!(out, "reason: {}", f.reason);
        }
        Payload::Split(s) => {
            let _ = writeln!(
                out,
                "value: {}   top cell: {}   status: {}",
                s.value, s.top_dim, s.status
            );
            let _ = writeln!(out, "{}", s.statement);
        }
        Payload::Cohomology(c) => {
            push_algebra_tables(&mut out, &c.name, &c.dims, c.euler, &c.labels, &c.degrees);
        }
        Payload::Pd(p) => {
            let _ = writeln!(
                out,
                "poincare duality: {}   top degree: {}   fundamental class: {}",
                if p.holds { "holds" } else { "fails" },
                p.top_degree,
                p.fundamental_class
            );
            if let Some(f) = &p.failure {
                let _ = writeln!(out, "failure: {f}");
            }
        }
        Payload::Csymplectic(c) => {
            let _ = writeln!(
                out,
                "c-symplectic: {}   (formal dimension 2m with m = {})",
                if c.csymplectic { "yes" } else { "no" },
                c.m
            );
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "witness omega over the degree-2 basis: [{}]", w.join(", "));
            }
            let _ = writeln!(out, "verdict: {}", c.verdict);
        }
        Payload::Algebra(a) => {
            push_algebra_tables(&mut out, &a.name, &a.dims, a.euler, &a.labels, &a.degrees);
            if let Some(pd) = a.pd_holds {
                let _ = writeln!(out, "poincare duality: {}", if pd { "holds" } else { "fails" });
            }
            if let Some(n) = &a.nse {
                let _ = writeln!(
                    out,
                    "wedge self-closeness: {} (top degree {}){}",
                    n.value,
                    n.top_degree,
                    if n.certified { "   [certified]" } else { "" }
                );
            }
        }
        Payload::Mimura(m) => {
            let _ = writeln!(out, "diagonal monomial system:");
            push_eqs(&mut out, &m.equations);
            let _ = writeln!(out, "rational value: {}   status: {}", m.value, m.status);
            let i = &m.integer;
            let _ = writeln!(
                out,
                "integral all-nonzero solutions: {}{}{}",
                i.kind,
                if i.complete { ", complete" } else { "" },
                if i.unique { ", unique" } else { "" }
            );
            if !i.free.is_empty() {
                let _ = writeln!(out, "  free: {}", i.free.join(", "));
            }
            for p in &i.pins {
                let _ = writeln!(out, "  {p}");
            }
            if !i.solutions.is_empty() {
                let _ = writeln!(out, "  solutions over ({}):", i.solution_vars.join(", "));
                for row in &i.solutions {
                    let _ = writeln!(out, "    ({})", row.join(", "));
                }
            }
            if let Some(f) = &i.family {
                let _ = writeln!(
                    out,
                    "  family: |{}| = d^({})",
                    f.vars.join("|, |"),
                    f.exponents
                        .iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                for sp in &f.sign_patterns {
                    let _ = writeln!(
                        out,
                        "    signs ({})",
                        sp.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
                    );
                }
            }
            let _ = writeln!(out, "conclusion: {}", m.conclusion);
        }
        Payload::Examples(e) => {
            out.push_str("built-in spaces:\n");
            for r in &e.spaces {
                let _ = writeln!(out, "  {:<20} {}", r.name, r.summary);
            }
            out.push_str("built-in algebras:\n");
            for r in &e.algebras {
                let _ = writeln!(out, "  {:<20} {}", r.name, r.summary);
            }
            out.push_str("built-in sullivan models:\n");
            for r in &e.models {
                let _ = writeln!(out, "  {:<20} {}", r.name, r.summary);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Process entry.
// ---------------------------------------------------------------------------

/// Exit code for an error: 1 input, 2 unsupported, 3 internal.
pub fn code_for(e: &Error) -> i32 {
    match e {
        Error::Input(_) => 1,
        Error::Unsupported(_) => 2,
        Error::Internal(_) => 3,
    }
}

/// Run one command end to end: execute, render to stdout, map errors to the
/// documented exit codes (panics count as internal errors).
pub fn exec(command: &str, inputs: &[String], opts: &Opts, format: &str) -> i32 {
    if format != "human" && format != "machine" {
        eprintln!("error: unknown format {format} (expected 'human' or 'machine')");
        return 1;
    }
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        run_command(command, inputs, opts)
    }));
    match outcome {
        Err(_) => {
            eprintln!("internal error: unexpected panic");
            3
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            code_for(&e)
        }
        Ok(Ok(rep)) => {
            if format == "machine" {
                print!("{}", machine_json(&rep));
            } else {
                print!("{}", render_human(&rep));
            }
            0
        }
    }
}
