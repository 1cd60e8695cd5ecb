//! Pointwise evaluation of differential polynomials.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{DiffAlgError, Result};
use crate::multiindex::MultiIndex;
use crate::poly::{DiffPoly, Rat};

/// Scalar types a polynomial can be evaluated over.
pub trait EvalScalar: Clone {
    fn from_rat(r: &Rat) -> Self;
    fn zero_value() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn powi(&self, exp: u32) -> Self;
}

impl EvalScalar for f64 {
    fn from_rat(r: &Rat) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn zero_value() -> Self {
        0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn powi(&self, exp: u32) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl EvalScalar for BigRational {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn powi(&self, exp: u32) -> Self {
        let mut acc = BigRational::from_integer(1.into());
        for _ in 0..exp {
            acc *= self;
        }
        acc
    }
}

/// Values for every symbol kind a polynomial may reference: explicit
/// coordinates, jet variables and function symbols.
#[derive(Clone, Debug, Default)]
pub struct Assignment<V> {
    coords: HashMap<usize, V>,
    jets: HashMap<(usize, MultiIndex), V>,
    funcs: HashMap<(usize, u32), V>,
}

impl<V: EvalScalar> Assignment<V> {
    pub fn new() -> Self {
        Assignment {
            coords: HashMap::new(),
            jets: HashMap::new(),
            funcs: HashMap::new(),
        }
    }

    pub fn coord(mut self, i: usize, value: V) -> Self {
        self.coords.insert(i, value);
        self
    }

    pub fn jet(mut self, dep: usize, multi: MultiIndex, value: V) -> Self {
        self.jets.insert((dep, multi), value);
        self
    }

    pub fn func(mut self, func: usize, deriv: u32, value: V) -> Self {
        self.funcs.insert((func, deriv), value);
        self
    }

    pub fn set_coord(&mut self, i: usize, value: V) {
        self.coords.insert(i, value);
    }

    pub fn set_jet(&mut self, dep: usize, multi: MultiIndex, value: V) {
        self.jets.insert((dep, multi), value);
    }

    pub fn set_func(&mut self, func: usize, deriv: u32, value: V) {
        self.funcs.insert((func, deriv), value);
    }
}

impl DiffPoly {
    /// Evaluate at a point. Exact when `V` is rational; every symbol
    /// occurring in the polynomial must be assigned.
    pub fn evaluate<V: EvalScalar>(&self, point: &Assignment<V>) -> Result<V> {
        let ctx = self.ctx();
        let mut sum = V::zero_value();
        for t in self.terms() {
            let mut prod = V::from_rat(&t.coeff);
            for (i, &e) in t.mono.coord.iter().enumerate() {
                if e > 0 {
                    let v = point.coords.get(&i).ok_or_else(|| {
                        DiffAlgError::MissingSymbol {
                            name: ctx.indep_name(i).to_string(),
                        }
                    })?;
                    prod = prod.mul(&v.powi(e as u32));
                }
            }
            for (sym, e) in &t.mono.funcs {
                let v = point
                    .funcs
                    .get(&(sym.func, sym.deriv))
                    .ok_or_else(|| DiffAlgError::MissingSymbol {
                        name: format!("{}^({})", ctx.func(sym.func).name, sym.deriv),
                    })?;
                prod = prod.mul(&v.powi(*e as u32));
            }
            for (var, e) in &t.mono.jets {
                let v = point
                    .jets
                    .get(&(var.dep, var.multi.clone()))
                    .ok_or_else(|| DiffAlgError::MissingSymbol {
                        name: format!("{}_{}", ctx.dep_name(var.dep), var.multi),
                    })?;
                prod = prod.mul(&v.powi(*e as u32));
            }
            sum = sum.add(&prod);
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::IndexConvention;
    use crate::poly::rat_int;

    #[test]
    fn evaluates_products_and_reports_missing_symbols() {
        let ctx = IndexConvention::txy(&["u", "w"]).unwrap().into_ctx();
        let u = DiffPoly::jet(&ctx, 0, MultiIndex::zero(3)).unwrap();
        let ux = DiffPoly::jet(&ctx, 0, MultiIndex::new(vec![0, 1, 0])).unwrap();
        let p = u.mul(&ux);

        let point = Assignment::<BigRational>::new()
            .jet(0, MultiIndex::zero(3), rat_int(2))
            .jet(0, MultiIndex::new(vec![0, 1, 0]), rat_int(3));
        assert_eq!(p.evaluate(&point).unwrap(), rat_int(6));

        let missing = Assignment::<BigRational>::new().jet(0, MultiIndex::zero(3), rat_int(2));
        let err = p.evaluate(&missing).unwrap_err();
        assert!(matches!(err, DiffAlgError::MissingSymbol { .. }));

        // The zero polynomial evaluates to zero under any assignment.
        let zero = DiffPoly::zero(&ctx);
        assert_eq!(zero.evaluate(&Assignment::<f64>::new()).unwrap(), 0.0);
    }
}
