//! Differential polynomials on a jet space.
//!
//! A [`DiffPoly`] is a finite sum of terms; each term is an exact rational
//! scalar times a monomial in explicit coordinates, arbitrary-function
//! symbols `F^(k)`, and jet variables `u^alpha_J`. Values are kept in a
//! canonical form (terms sorted by a fixed total order, like terms merged,
//! zero terms dropped) so that syntactic equality is semantic equality.

mod calculus;
mod eval;

pub use calculus::SubstitutionRule;
pub use eval::{Assignment, EvalScalar};

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::context::Ctx;
use crate::error::{DiffAlgError, Result};
use crate::multiindex::MultiIndex;

/// Exact rational scalar used for all symbolic coefficients.
pub type Rat = BigRational;

/// Convenience constructor for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

/// A jet variable `u^dep_J`: dependent-variable index plus derivative
/// multi-index, stored symmetrically (counts, not sequences).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct JetVar {
    pub dep: usize,
    pub multi: MultiIndex,
}

impl JetVar {
    pub fn order(&self) -> u32 {
        self.multi.order()
    }
}

impl Ord for JetVar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.dep.cmp(&other.dep))
            .then_with(|| self.multi.cmp(&other.multi))
    }
}

impl PartialOrd for JetVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Symbol `F^(deriv)` from an arbitrary-function family.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FuncSym {
    pub func: usize,
    pub deriv: u32,
}

/// Monomial part of a term: coordinate exponents, function-symbol powers and
/// jet-variable powers. The scalar lives in [`Term`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    /// Exponent of each explicit independent coordinate.
    pub coord: Vec<u8>,
    /// Function-symbol powers, sorted ascending by symbol.
    pub funcs: Vec<(FuncSym, u8)>,
    /// Jet-variable powers, sorted descending by variable.
    pub jets: Vec<(JetVar, u8)>,
}

impl Monomial {
    pub fn one(n_indep: usize) -> Self {
        Monomial {
            coord: vec![0; n_indep],
            funcs: Vec::new(),
            jets: Vec::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.coord.iter().all(|&e| e == 0) && self.funcs.is_empty() && self.jets.is_empty()
    }

    /// Sum of jet exponents (polynomial degree in jet variables).
    pub fn jet_degree(&self) -> u32 {
        self.jets.iter().map(|(_, e)| *e as u32).sum()
    }

    /// Weighted jet grade: sum of `exponent * |J|` over jet factors.
    pub fn jet_weight(&self) -> u32 {
        self.jets
            .iter()
            .map(|(v, e)| *e as u32 * v.order())
            .sum()
    }

    /// Highest derivative order among jet factors (0 if none).
    pub fn jet_order(&self) -> u32 {
        self.jets.iter().map(|(v, _)| v.order()).max().unwrap_or(0)
    }

    pub fn coord_degree(&self) -> u32 {
        self.coord.iter().map(|&e| e as u32).sum()
    }

    fn normalize(&mut self) {
        self.funcs.retain(|(_, e)| *e > 0);
        self.funcs.sort_by_key(|(sym, _)| *sym);
        self.jets.retain(|(_, e)| *e > 0);
        self.jets.sort_by(|a, b| b.0.cmp(&a.0));
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let coord = self
            .coord
            .iter()
            .zip(&other.coord)
            .map(|(a, b)| a + b)
            .collect();
        let mut funcs = self.funcs.clone();
        for (sym, e) in &other.funcs {
            match funcs.iter_mut().find(|(s, _)| s == sym) {
                Some((_, fe)) => *fe += e,
                None => funcs.push((*sym, *e)),
            }
        }
        let mut jets = self.jets.clone();
        for (var, e) in &other.jets {
            match jets.iter_mut().find(|(v, _)| v == var) {
                Some((_, je)) => *je += e,
                None => jets.push((var.clone(), *e)),
            }
        }
        let mut m = Monomial {
            coord,
            funcs,
            jets,
        };
        m.normalize();
        m
    }

    pub fn jet_exp(&self, var: &JetVar) -> u8 {
        self.jets
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Monomial with `var`'s exponent changed by `delta` (may remove it).
    pub fn with_jet_exp(&self, var: &JetVar, exp: u8) -> Monomial {
        let mut m = self.clone();
        m.jets.retain(|(v, _)| v != var);
        if exp > 0 {
            m.jets.push((var.clone(), exp));
        }
        m.normalize();
        m
    }

    /// Canonical total order used for term sorting.
    ///
    /// Graded lexicographic: weighted jet grade, then jet degree, then the
    /// jet factors (descending sequence), then coordinate exponents, then
    /// function-symbol powers.
    pub fn cmp_order(&self, other: &Monomial) -> Ordering {
        self.jet_weight()
            .cmp(&other.jet_weight())
            .then_with(|| self.jet_degree().cmp(&other.jet_degree()))
            .then_with(|| {
                for ((va, ea), (vb, eb)) in self.jets.iter().zip(&other.jets) {
                    let c = va.cmp(vb).then_with(|| ea.cmp(eb));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                self.jets.len().cmp(&other.jets.len())
            })
            .then_with(|| self.coord.cmp(&other.coord))
            .then_with(|| {
                for ((sa, ea), (sb, eb)) in self.funcs.iter().zip(&other.funcs) {
                    let c = sa.cmp(sb).then_with(|| ea.cmp(eb));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                self.funcs.len().cmp(&other.funcs.len())
            })
    }
}

/// One canonical term: exact rational coefficient times a monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub coeff: Rat,
    pub mono: Monomial,
}

/// Canonical differential polynomial over a fixed [`IndexConvention`].
#[derive(Clone, Debug)]
pub struct DiffPoly {
    ctx: Ctx,
    /// Terms sorted descending by `Monomial::cmp_order`, no duplicates,
    /// no zero coefficients.
    terms: Vec<Term>,
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx_eq(other) && self.terms == other.terms
    }
}

impl Eq for DiffPoly {}

impl DiffPoly {
    fn ctx_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx
    }

    pub(crate) fn assert_same_ctx(&self, other: &Self) {
        assert!(
            self.ctx_eq(other),
            "operands live in different index conventions"
        );
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn zero(ctx: &Ctx) -> Self {
        DiffPoly {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Ctx, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero(ctx);
        }
        DiffPoly {
            ctx: ctx.clone(),
            terms: vec![Term {
                coeff: c,
                mono: Monomial::one(ctx.n_indep()),
            }],
        }
    }

    pub fn int(ctx: &Ctx, n: i64) -> Self {
        Self::constant(ctx, rat_int(n))
    }

    /// Explicit coordinate `x^i` as a polynomial.
    pub fn coord(ctx: &Ctx, i: usize) -> Self {
        let mut mono = Monomial::one(ctx.n_indep());
        mono.coord[i] = 1;
        DiffPoly {
            ctx: ctx.clone(),
            terms: vec![Term {
                coeff: Rat::one(),
                mono,
            }],
        }
    }

    /// Jet variable `u^dep_J` as a polynomial. Errors if `|J|` exceeds the
    /// convention's maximum order.
    pub fn jet(ctx: &Ctx, dep: usize, multi: MultiIndex) -> Result<Self> {
        let order = multi.order();
        if order > ctx.max_order() {
            return Err(DiffAlgError::OrderOverflow {
                order,
                max: ctx.max_order(),
            });
        }
        let mut mono = Monomial::one(ctx.n_indep());
        mono.jets.push((JetVar { dep, multi }, 1));
        Ok(DiffPoly {
            ctx: ctx.clone(),
            terms: vec![Term {
                coeff: Rat::one(),
                mono,
            }],
        })
    }

    /// Function symbol `F^(deriv)` as a polynomial.
    pub fn func(ctx: &Ctx, func: usize, deriv: u32) -> Self {
        let mut mono = Monomial::one(ctx.n_indep());
        mono.funcs.push((FuncSym { func, deriv }, 1));
        DiffPoly {
            ctx: ctx.clone(),
            terms: vec![Term {
                coeff: Rat::one(),
                mono,
            }],
        }
    }

    /// Canonicalize an arbitrary term list: sort, merge, drop zeros.
    pub fn from_terms(ctx: &Ctx, mut terms: Vec<Term>) -> Self {
        terms.retain(|t| !t.coeff.is_zero());
        for t in &mut terms {
            t.mono.normalize();
        }
        terms.sort_by(|a, b| b.mono.cmp_order(&a.mono));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.mono == t.mono => {
                    last.coeff += t.coeff;
                    if last.coeff.is_zero() {
                        merged.pop();
                    }
                }
                _ => merged.push(t),
            }
        }
        DiffPoly {
            ctx: ctx.clone(),
            terms: merged,
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(num_traits::Zero::zero()),
            1 if self.terms[0].mono.is_one() => Some(self.terms[0].coeff.clone()),
            _ => None,
        }
    }

    /// Highest derivative order of any jet variable (0 for jet-free values).
    pub fn jet_order(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.mono.jet_order())
            .max()
            .unwrap_or(0)
    }

    /// All distinct jet variables occurring in the polynomial.
    pub fn jet_vars(&self) -> Vec<JetVar> {
        let mut vars: Vec<JetVar> = Vec::new();
        for t in &self.terms {
            for (v, _) in &t.mono.jets {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        vars.sort();
        vars
    }

    /// Distinct dependent-variable indices occurring in jet variables.
    pub fn deps_used(&self) -> Vec<usize> {
        let mut deps: Vec<usize> = Vec::new();
        for t in &self.terms {
            for (v, _) in &t.mono.jets {
                if !deps.contains(&v.dep) {
                    deps.push(v.dep);
                }
            }
        }
        deps.sort_unstable();
        deps
    }

    /// Distinct function symbols occurring in the polynomial.
    pub fn func_syms(&self) -> Vec<FuncSym> {
        let mut syms: Vec<FuncSym> = Vec::new();
        for t in &self.terms {
            for (s, _) in &t.mono.funcs {
                if !syms.contains(s) {
                    syms.push(*s);
                }
            }
        }
        syms.sort();
        syms
    }

    /// Coordinate indices with a nonzero exponent somewhere.
    pub fn coords_used(&self) -> Vec<usize> {
        let mut used = vec![false; self.ctx.n_indep()];
        for t in &self.terms {
            for (i, &e) in t.mono.coord.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter()
            .enumerate()
            .filter_map(|(i, &u)| u.then_some(i))
            .collect()
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: -t.coeff.clone(),
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        self.assert_same_ctx(other);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        DiffPoly::from_terms(&self.ctx, terms)
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        self.assert_same_ctx(other);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term {
                    coeff: &a.coeff * &b.coeff,
                    mono: a.mono.mul(&b.mono),
                });
            }
        }
        DiffPoly::from_terms(&self.ctx, terms)
    }

    pub fn scale(&self, c: &Rat) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero(&self.ctx);
        }
        DiffPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * c,
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> DiffPoly {
        let mut acc = DiffPoly::int(&self.ctx, 1);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Division by a constant polynomial.
    pub fn div(&self, other: &DiffPoly) -> Result<DiffPoly> {
        let c = other
            .as_constant()
            .ok_or(DiffAlgError::NonConstantDivisor)?;
        if c.is_zero() {
            return Err(DiffAlgError::DivisionByZero);
        }
        Ok(self.scale(&c.recip()))
    }

    /// Map the polynomial into a compatible convention by symbol names.
    ///
    /// Every symbol used here must exist in `target`; positions may differ.
    pub fn into_context(&self, target: &Ctx) -> Result<DiffPoly> {
        if self.ctx_eq(&DiffPoly::zero(target)) || **target == *self.ctx {
            return Ok(DiffPoly {
                ctx: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let map_indep: Vec<Option<usize>> = self
            .ctx
            .indep_names()
            .iter()
            .map(|n| target.indep_index(n))
            .collect();
        let map_dep: Vec<Option<usize>> = self
            .ctx
            .dep_names()
            .iter()
            .map(|n| target.dep_index(n))
            .collect();
        let map_func: Vec<Option<usize>> = self
            .ctx
            .funcs()
            .iter()
            .map(|f| target.func_index(&f.name))
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut mono = Monomial::one(target.n_indep());
            for (i, &e) in t.mono.coord.iter().enumerate() {
                if e > 0 {
                    let j = map_indep[i].ok_or_else(|| DiffAlgError::UnknownSymbolInContext {
                        name: self.ctx.indep_name(i).to_string(),
                    })?;
                    mono.coord[j] = e;
                }
            }
            for (sym, e) in &t.mono.funcs {
                let j = map_func[sym.func].ok_or_else(|| DiffAlgError::UnknownSymbolInContext {
                    name: self.ctx.func(sym.func).name.clone(),
                })?;
                mono.funcs.push((
                    FuncSym {
                        func: j,
                        deriv: sym.deriv,
                    },
                    *e,
                ));
            }
            for (var, e) in &t.mono.jets {
                let j = map_dep[var.dep].ok_or_else(|| DiffAlgError::UnknownSymbolInContext {
                    name: self.ctx.dep_name(var.dep).to_string(),
                })?;
                if var.multi.len() != target.n_indep() {
                    // Remap the multi-index through the coordinate name map.
                    let mut counts = vec![0u8; target.n_indep()];
                    for (i, &c) in var.multi.counts().iter().enumerate() {
                        if c > 0 {
                            let k = map_indep[i].ok_or_else(|| {
                                DiffAlgError::UnknownSymbolInContext {
                                    name: self.ctx.indep_name(i).to_string(),
                                }
                            })?;
                            counts[k] = c;
                        }
                    }
                    mono.jets.push((
                        JetVar {
                            dep: j,
                            multi: MultiIndex::new(counts),
                        },
                        *e,
                    ));
                } else {
                    mono.jets.push((
                        JetVar {
                            dep: j,
                            multi: var.multi.clone(),
                        },
                        *e,
                    ));
                }
            }
            terms.push(Term {
                coeff: t.coeff.clone(),
                mono,
            });
        }
        Ok(DiffPoly::from_terms(target, terms))
    }

    /// The leading (greatest) term's coefficient sign, `0` for the zero
    /// polynomial. Used for sign normalization.
    pub fn leading_sign(&self) -> i8 {
        match self.terms.first() {
            None => 0,
            Some(t) => {
                if t.coeff.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parser::render::render_plain(self))
    }
}
