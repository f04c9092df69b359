//! Sparse multivariate polynomials over the exact rationals.
//!
//! A polynomial is a finite map from exponent vectors to nonzero rational
//! coefficients, kept in canonical form at all times: two polynomials are
//! equal iff their term maps are equal. Terms are ordered graded-lex
//! (total degree first, then lexicographically in the context's symbol
//! order), which also fixes the display order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat_pow, Rational};
use crate::symbols::{context_mismatch, Context, Symbol};

/// Exponent vector, one entry per context symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, idx: usize) -> Self {
        let mut exps = vec![0; n];
        exps[idx] = 1;
        Monomial(exps)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct MultiPoly {
    ctx: Context,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(ctx: &Context) -> Self {
        MultiPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Context) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &Context, value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::constant(ctx.len()), value);
        }
        MultiPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn var(ctx: &Context, name: &str) -> Result<Self> {
        let idx = ctx
            .position(name)
            .ok_or_else(|| Error::UndeclaredSymbol(name.to_owned()))?;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ctx.len(), idx), Rational::one());
        Ok(MultiPoly {
            ctx: ctx.clone(),
            terms,
        })
    }

    pub fn from_terms(ctx: &Context, terms: BTreeMap<Monomial, Rational>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Symbols that actually occur with a positive exponent.
    pub fn occurring_symbols(&self) -> Vec<Symbol> {
        let mut used = vec![false; self.ctx.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(i, _)| self.ctx.symbol(i).clone())
            .collect()
    }

    fn assert_same_ctx(&self, other: &Self) {
        assert!(
            *self.ctx == *other.ctx,
            "context mismatch: [{}] vs [{}]",
            self.ctx.describe(),
            other.ctx.describe()
        );
    }

    fn add_term(terms: &mut BTreeMap<Monomial, Rational>, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    // Checked entry points: these are the public ring operations, which
    // report a context error instead of panicking.

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if *self.ctx != *other.ctx {
            return Err(context_mismatch(&self.ctx, &other.ctx));
        }
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if *self.ctx != *other.ctx {
            return Err(context_mismatch(&self.ctx, &other.ctx));
        }
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if *self.ctx != *other.ctx {
            return Err(context_mismatch(&self.ctx, &other.ctx));
        }
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(&self.ctx);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = MultiPoly::one(&self.ctx);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation; every occurring symbol must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<String, Rational>) -> Result<Rational> {
        for sym in self.occurring_symbols() {
            if !assignment.contains_key(sym.as_str()) {
                return Err(Error::UnboundSymbol(sym.as_str().to_owned()));
            }
        }
        let mut total = Rational::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    let v = &assignment[self.ctx.symbol(i).as_str()];
                    term *= rat_pow(v, e);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Substitutes rationals for a subset of the symbols, producing a
    /// polynomial over the remaining ones.
    pub fn eval_partial(
        &self,
        assignment: &BTreeMap<String, Rational>,
        target: &Context,
    ) -> Result<Self> {
        let mut map = Vec::with_capacity(self.ctx.len());
        for sym in self.ctx.symbols() {
            if let Some(v) = assignment.get(sym.as_str()) {
                map.push(SubstTarget::Value(v.clone()));
            } else if let Some(idx) = target.position(sym.as_str()) {
                map.push(SubstTarget::Var(idx));
            } else {
                return Err(Error::UndeclaredSymbol(sym.as_str().to_owned()));
            }
        }
        let mut terms = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let mut c = coeff.clone();
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &map[i] {
                    SubstTarget::Value(v) => c *= rat_pow(v, e),
                    SubstTarget::Var(idx) => exps[*idx] += e,
                }
            }
            Self::add_term(&mut terms, Monomial(exps), c);
        }
        Ok(MultiPoly {
            ctx: target.clone(),
            terms,
        })
    }

    /// Re-expresses the polynomial in a superset context.
    pub fn lift_to(&self, target: &Context) -> Result<Self> {
        if *self.ctx == **target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.ctx.len());
        for sym in self.ctx.symbols() {
            match target.position(sym.as_str()) {
                Some(idx) => map.push(idx),
                None => return Err(Error::UndeclaredSymbol(sym.as_str().to_owned())),
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(mono, coeff)| {
                let mut exps = vec![0u32; target.len()];
                for (i, &e) in mono.0.iter().enumerate() {
                    exps[map[i]] = e;
                }
                (Monomial(exps), coeff.clone())
            })
            .collect();
        Ok(MultiPoly {
            ctx: target.clone(),
            terms,
        })
    }

    /// Exact division: `Some(q)` with `self = q * divisor`, or `None` when
    /// the divisor does not divide exactly.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.assert_same_ctx(divisor);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        let (dm, dc) = divisor.terms.iter().next_back().unwrap();
        while !rem.is_zero() {
            let (rm, rc) = rem.terms.iter().next_back().unwrap();
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.div_into(rm);
            let qc = rc / dc;
            let mut piece = BTreeMap::new();
            piece.insert(qm.clone(), qc.clone());
            let piece = MultiPoly {
                ctx: self.ctx.clone(),
                terms: piece,
            };
            rem = &rem - &(&piece * divisor);
            Self::add_term(&mut quot, qm, qc);
        }
        Some(MultiPoly {
            ctx: self.ctx.clone(),
            terms: quot,
        })
    }
}

enum SubstTarget {
    Value(Rational),
    Var(usize),
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_ctx(rhs);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            MultiPoly::add_term(&mut terms, m.clone(), c.clone());
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_ctx(rhs);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            MultiPoly::add_term(&mut terms, m.clone(), -c.clone());
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_ctx(rhs);
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                MultiPoly::add_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest graded-lex term first.
        for (pos, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let negative = coeff < &Rational::zero();
            if pos == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let abs = if negative {
                -coeff.clone()
            } else {
                coeff.clone()
            };
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || mono.is_constant() {
                factors.push(format_rational(&abs));
            }
            for (i, &e) in mono.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ctx.symbol(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ctx.symbol(i), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
