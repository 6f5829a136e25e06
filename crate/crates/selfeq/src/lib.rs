// SPDX-License-Identifier: MIT
//! Exact computations in rational homotopy theory.
//!
//! The library works with two dual kinds of models of a simply connected
//! finite complex `X`:
//!
//! * **Lie side** — a free differential graded Lie algebra `(L(V), ∂)` over ℚ
//!   with decomposable differential, one generator of degree `n-1` per
//!   `n`-cell.  Its homology computes the rational homotopy groups,
//!   `H_d(L) ≅ π_{d+1}(X) ⊗ ℚ`.
//! * **Cochain side** — finite-dimensional graded-commutative cohomology
//!   algebras and small free commutative cochain models `(ΛV, d)`.
//!
//! On top of the models sit the self-map engines: parametrizing degree-0
//! self-maps, deriving the polynomial constraint system `∂∘f = f∘∂`,
//! extracting the diagonal monomial system, computing the self-closeness
//! number `nse` (the least `k` such that any self-map inducing isomorphisms
//! on homotopy through degree `k` is an equivalence) with sound lower/upper
//! bounds, the group of diagonal equivalences modulo homotopy-identities,
//! integer solution analysis for monomial systems, and splitting/formality
//! verdicts.
//!
//! All arithmetic is exact: scalars are arbitrary-precision rationals, and
//! every basis, rank, and report is deterministic (same input bytes, same
//! output bytes).

pub mod cli;
pub mod dgl;
pub mod endo;
pub mod glie;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod sul;

/// Exact scalar type used everywhere: arbitrary-precision rational numbers.
pub type Q = num::BigRational;

/// Convenience constructor for small rational constants.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Convenience constructor for integers as rationals.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Errors surfaced by model construction and the analysis engines.
///
/// `Input` errors are the user's fault (malformed text, undeclared names,
/// degree mismatches); `Unsupported` marks inputs outside the engine's
/// validated envelope (the caller gets a precise reason); `Internal` flags a
/// broken invariant inside the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Input(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
