// SPDX-License-Identifier: MIT
//! Sparse multivariate polynomials over ℚ, and the small ring abstraction
//! that lets Lie elements carry either rational or polynomial coefficients.
//!
//! Self-map constraint systems are polynomials in the diagonal parameters
//! λ_u and the off-diagonal parameters c_{u,w}; variables are indices into a
//! table owned by the constraint system.

use crate::Q;
use num::{One, Zero};
use std::collections::BTreeMap;

/// Commutative ring with enough structure for Lie-element coefficients.
pub trait Ring:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Zero
    + One
    + std::ops::Neg<Output = Self>
{
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    /// Multiply by a rational scalar.
    fn scale_q(&self, s: &Q) -> Self;
    fn from_q(s: Q) -> Self;

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&(-other.clone()))
    }
}

impl Ring for Q {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_q(&self, s: &Q) -> Self {
        self * s
    }
    fn from_q(s: Q) -> Self {
        s
    }
}

/// Monomial: sorted (variable, exponent) pairs, exponents ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<u32, u32> = self.0.iter().copied().collect();
        for &(v, e) in &other.0 {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().collect())
    }

    pub fn exponent_of(&self, v: u32) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn contains(&self, v: u32) -> bool {
        self.exponent_of(v) > 0
    }

    /// Total degree in the listed variables.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }
}

/// Sparse polynomial: monomial → coefficient, zero coefficients absent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn constant(c: Q) -> Poly {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: u32) -> Poly {
        let mut p = Poly::default();
        p.terms.insert(Monomial::var(v), Q::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::default();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    /// Set of variables occurring in the polynomial.
    pub fn vars(&self) -> std::collections::BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect()
    }

    /// Does any term involve `v`?
    pub fn involves(&self, v: u32) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    /// Split into (coefficient-of-v, remainder) when the polynomial is linear
    /// in `v`; returns None if any term has v-exponent ≥ 2.
    pub fn split_linear(&self, v: u32) -> Option<(Poly, Poly)> {
        let mut coeff = Poly::default();
        let mut rest = Poly::default();
        for (m, c) in &self.terms {
            match m.exponent_of(v) {
                0 => rest.add_term(m.clone(), c.clone()),
                1 => {
                    let reduced =
                        Monomial(m.0.iter().copied().filter(|&(w, _)| w != v).collect());
                    coeff.add_term(reduced, c.clone());
                }
                _ => return None,
            }
        }
        Some((coeff, rest))
    }

    /// Substitute variable `v` by polynomial `p`.
    pub fn substitute(&self, v: u32, p: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let reduced = Monomial(m.0.iter().copied().filter(|&(w, _)| w != v).collect());
            let mut factor = Poly::constant(Q::one());
            for _ in 0..e {
                factor = factor.mul(p);
            }
            let mut base = Poly::default();
            base.add_term(reduced, c.clone());
            out = out.add(&base.mul(&factor));
        }
        out
    }

    /// Evaluate at a full numeric assignment (variables absent from the map
    /// evaluate to 0).
    pub fn eval(&self, assign: &BTreeMap<u32, Q>) -> Q {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                let x = assign.get(&v).cloned().unwrap_or_else(Q::zero);
                if x.is_zero() {
                    t = Q::zero();
                    break;
                }
                for _ in 0..e {
                    t = t * &x;
                }
            }
            total += t;
        }
        total
    }

    /// Render with a variable-name resolver, monomials in sorted order.
    pub fn render(&self, name: &dyn Fn(u32) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_is_one = abs.is_one();
            let mut parts: Vec<String> = Vec::new();
            if !coeff_is_one || m.is_one() {
                parts.push(abs.to_string());
            }
            for &(v, e) in &m.0 {
                if e == 1 {
                    parts.push(name(v));
                } else {
                    parts.push(format!("{}^{}", name(v), e));
                }
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

impl std::ops::Add for Poly {
    type Output = Poly;
    fn add(self, other: Poly) -> Poly {
        Poly::add(&self, &other)
    }
}

impl std::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, other: Poly) -> Poly {
        Poly::mul(&self, &other)
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(&self)
    }
}

impl Zero for Poly {
    fn zero() -> Poly {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Poly {
        Poly::constant(Q::one())
    }
}

impl Ring for Poly {
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scale_q(&self, s: &Q) -> Self {
        self.scale(s)
    }
    fn from_q(s: Q) -> Self {
        Poly::constant(s)
    }
}
