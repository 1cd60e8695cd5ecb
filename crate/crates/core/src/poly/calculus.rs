//! Total derivatives, jet partials, the Euler operator and substitution.

use std::collections::BTreeMap;

use crate::error::{DiffAlgError, Result};
use crate::multiindex::MultiIndex;
use crate::poly::{DiffPoly, FuncSym, JetVar, Monomial, Rat, Term};

impl DiffPoly {
    /// Total derivative `D_i`.
    ///
    /// Acts by the chain rule on jet variables (`u_J -> u_{J+e_i}`), on the
    /// explicit coordinate `x^i` of the coefficient ring, and on
    /// arbitrary-function symbols (`F^(k) -> F^(k+1)` when `i` is the
    /// family's argument).
    pub fn total_derivative(&self, i: usize) -> Result<DiffPoly> {
        let ctx = self.ctx();
        let max = ctx.max_order();
        let mut out: Vec<Term> = Vec::new();
        for t in self.terms() {
            // Coordinate part.
            let e = t.mono.coord[i];
            if e > 0 {
                let mut mono = t.mono.clone();
                mono.coord[i] = e - 1;
                out.push(Term {
                    coeff: &t.coeff * Rat::from_integer(e.into()),
                    mono,
                });
            }
            // Function symbols.
            for (k, (sym, fe)) in t.mono.funcs.iter().enumerate() {
                if ctx.func(sym.func).arg != i {
                    continue;
                }
                let mut mono = t.mono.clone();
                mono.funcs[k].1 -= 1;
                let shifted = FuncSym {
                    func: sym.func,
                    deriv: sym.deriv + 1,
                };
                match mono.funcs.iter_mut().find(|(s, _)| *s == shifted) {
                    Some((_, se)) => *se += 1,
                    None => mono.funcs.push((shifted, 1)),
                }
                out.push(Term {
                    coeff: &t.coeff * Rat::from_integer((*fe).into()),
                    mono,
                });
            }
            // Jet variables.
            for (k, (var, je)) in t.mono.jets.iter().enumerate() {
                let bumped = var.multi.bump(i);
                if bumped.order() > max {
                    return Err(DiffAlgError::OrderOverflow {
                        order: bumped.order(),
                        max,
                    });
                }
                let mut mono = t.mono.clone();
                mono.jets[k].1 -= 1;
                let new_var = JetVar {
                    dep: var.dep,
                    multi: bumped,
                };
                match mono.jets.iter_mut().find(|(v, _)| *v == new_var) {
                    Some((_, ve)) => *ve += 1,
                    None => mono.jets.push((new_var, 1)),
                }
                out.push(Term {
                    coeff: &t.coeff * Rat::from_integer((*je).into()),
                    mono,
                });
            }
        }
        Ok(DiffPoly::from_terms(ctx, out))
    }

    /// Composite total derivative `D_J` for a multi-index `J`.
    pub fn d_multi(&self, multi: &MultiIndex) -> Result<DiffPoly> {
        let mut p = self.clone();
        for (i, &count) in multi.counts().iter().enumerate() {
            for _ in 0..count {
                p = p.total_derivative(i)?;
            }
        }
        Ok(p)
    }

    /// Plain partial derivative with respect to the stored symmetric jet
    /// variable `u^dep_J`. Returns zero when the variable is absent.
    pub fn partial_jet_sym(&self, dep: usize, multi: &MultiIndex) -> DiffPoly {
        let var = JetVar {
            dep,
            multi: multi.clone(),
        };
        let mut out: Vec<Term> = Vec::new();
        for t in self.terms() {
            let e = t.mono.jet_exp(&var);
            if e > 0 {
                out.push(Term {
                    coeff: &t.coeff * Rat::from_integer(e.into()),
                    mono: t.mono.with_jet_exp(&var, e - 1),
                });
            }
        }
        DiffPoly::from_terms(self.ctx(), out)
    }

    /// Partial derivative with respect to an *ordered* derivative index
    /// tuple realizing `J`: the symmetric partial divided by the number of
    /// distinct orderings of `J`, so that sums over ordered indices
    /// reproduce the symmetric result exactly.
    pub fn partial_jet(&self, dep: usize, multi: &MultiIndex) -> DiffPoly {
        let orderings = multi.orderings();
        self.partial_jet_sym(dep, multi)
            .scale(&Rat::new(1.into(), orderings.into()))
    }

    /// Variational (Euler-Lagrange) derivative with respect to dependent
    /// variable `dep`:
    ///
    /// `delta p / delta u^dep = sum_J (-1)^|J| D_J(dp/du^dep_J)`
    ///
    /// over all multi-indices up to `max_order` (defaults to the jet order
    /// of `p`).
    pub fn euler(&self, dep: usize, max_order: Option<u32>) -> Result<DiffPoly> {
        let bound = max_order.unwrap_or_else(|| self.jet_order());
        let mut acc = DiffPoly::zero(self.ctx());
        // Only multi-indices actually present contribute.
        let mut multis: Vec<MultiIndex> = Vec::new();
        for v in self.jet_vars() {
            if v.dep == dep && v.order() <= bound && !multis.contains(&v.multi) {
                multis.push(v.multi);
            }
        }
        for multi in multis {
            let partial = self.partial_jet_sym(dep, &multi);
            let mut piece = partial.d_multi(&multi)?;
            if multi.order() % 2 == 1 {
                piece = piece.neg();
            }
            acc = acc.add(&piece);
        }
        Ok(acc)
    }

    /// Replace every function symbol of family `func` by the corresponding
    /// derivative of a polynomial in the family's argument coordinate.
    ///
    /// `coeffs` are the polynomial coefficients `c_0 + c_1 s + c_2 s^2 + ...`
    /// in the argument `s`; `F^(k)` becomes the k-th derivative of that
    /// polynomial.
    pub fn substitute_func(&self, func: usize, coeffs: &[Rat]) -> DiffPoly {
        let ctx = self.ctx();
        let arg = ctx.func(func).arg;
        // Precompute derivative polynomials of the replacement.
        let poly_from = |cs: &[Rat]| -> DiffPoly {
            let mut acc = DiffPoly::zero(ctx);
            for (k, c) in cs.iter().enumerate() {
                let mono = DiffPoly::coord(ctx, arg).pow(k as u32).scale(c);
                acc = acc.add(&mono);
            }
            acc
        };
        let mut derivs: Vec<Vec<Rat>> = vec![coeffs.to_vec()];
        loop {
            let last = derivs.last().unwrap();
            if last.len() <= 1 {
                break;
            }
            let next: Vec<Rat> = last
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer((k as i64).into()))
                .collect();
            derivs.push(next);
        }
        let replacement = |k: u32| -> DiffPoly {
            match derivs.get(k as usize) {
                Some(cs) => poly_from(cs),
                None => DiffPoly::zero(ctx),
            }
        };
        let mut acc = DiffPoly::zero(ctx);
        for t in self.terms() {
            let mut kept = t.mono.clone();
            let mut factors: Vec<(u32, u8)> = Vec::new();
            kept.funcs.retain(|(sym, e)| {
                if sym.func == func {
                    factors.push((sym.deriv, *e));
                    false
                } else {
                    true
                }
            });
            let mut piece = DiffPoly::from_terms(
                ctx,
                vec![Term {
                    coeff: t.coeff.clone(),
                    mono: kept,
                }],
            );
            for (deriv, e) in factors {
                piece = piece.mul(&replacement(deriv).pow(e as u32));
            }
            acc = acc.add(&piece);
        }
        acc
    }
}

/// Point substitution rule: dependent variables mapped to jet-order-0
/// targets in the remaining variables. Jet variables of a substituted
/// dependent variable are replaced by total derivatives of the target.
#[derive(Clone, Debug)]
pub struct SubstitutionRule {
    targets: BTreeMap<usize, DiffPoly>,
}

impl SubstitutionRule {
    /// Build a rule from `(dependent index, target)` pairs.
    ///
    /// Rejects targets of positive jet order and cyclic rules (a substituted
    /// variable occurring in any target).
    pub fn new(pairs: Vec<(usize, DiffPoly)>) -> Result<Self> {
        let mut targets = BTreeMap::new();
        for (dep, target) in pairs {
            targets.insert(dep, target);
        }
        for (dep, target) in &targets {
            let name = target.ctx().dep_name(*dep).to_string();
            if target.jet_order() > 0 {
                return Err(DiffAlgError::SubstitutionTargetOrder { name });
            }
            for used in target.deps_used() {
                if targets.contains_key(&used) {
                    return Err(DiffAlgError::CyclicSubstitution {
                        name: target.ctx().dep_name(used).to_string(),
                    });
                }
            }
        }
        Ok(SubstitutionRule { targets })
    }

    pub fn targets(&self) -> &BTreeMap<usize, DiffPoly> {
        &self.targets
    }

    pub fn contains(&self, dep: usize) -> bool {
        self.targets.contains_key(&dep)
    }

    /// Render as `v=..., z=...` for provenance strings.
    pub fn describe(&self) -> String {
        self.targets
            .iter()
            .map(|(dep, target)| {
                format!(
                    "{}={}",
                    target.ctx().dep_name(*dep),
                    crate::parser::render::render_plain(target)
                )
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl DiffPoly {
    /// Apply a point substitution: every jet variable `v_J` of a substituted
    /// dependent variable becomes `D_J(target)`.
    pub fn substitute(&self, rule: &SubstitutionRule) -> Result<DiffPoly> {
        let ctx = self.ctx();
        let mut cache: BTreeMap<(usize, MultiIndex), DiffPoly> = BTreeMap::new();
        let mut acc: Vec<Term> = Vec::new();
        let mut pieces: Vec<DiffPoly> = Vec::new();
        for t in self.terms() {
            let (hit, kept): (Vec<_>, Vec<_>) = t
                .mono
                .jets
                .iter()
                .cloned()
                .partition(|(v, _)| rule.contains(v.dep));
            if hit.is_empty() {
                acc.push(t.clone());
                continue;
            }
            let mono = Monomial {
                coord: t.mono.coord.clone(),
                funcs: t.mono.funcs.clone(),
                jets: kept,
            };
            let mut piece = DiffPoly::from_terms(
                ctx,
                vec![Term {
                    coeff: t.coeff.clone(),
                    mono,
                }],
            );
            for (var, e) in hit {
                let key = (var.dep, var.multi.clone());
                if !cache.contains_key(&key) {
                    let target = rule.targets.get(&var.dep).unwrap();
                    let lifted = target.into_context(ctx)?;
                    cache.insert(key.clone(), lifted.d_multi(&var.multi)?);
                }
                piece = piece.mul(&cache[&key].pow(e as u32));
            }
            pieces.push(piece);
        }
        let mut out = DiffPoly::from_terms(ctx, acc);
        for piece in pieces {
            out = out.add(&piece);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::IndexConvention;
    use crate::poly::{rat, rat_int};

    fn ctx() -> crate::context::Ctx {
        IndexConvention::txy(&["u", "w"])
            .unwrap()
            .with_func("f", "t")
            .unwrap()
            .into_ctx()
    }

    fn jet(c: &crate::context::Ctx, dep: usize, counts: [u8; 3]) -> DiffPoly {
        DiffPoly::jet(c, dep, MultiIndex::new(counts.to_vec())).unwrap()
    }

    #[test]
    fn leibniz_on_u_uxx() {
        // D_x(u u_xx) = u_x u_xx + u u_xxx
        let c = ctx();
        let u = jet(&c, 0, [0, 0, 0]);
        let ux = jet(&c, 0, [0, 1, 0]);
        let uxx = jet(&c, 0, [0, 2, 0]);
        let uxxx = jet(&c, 0, [0, 3, 0]);
        let lhs = u.mul(&uxx).total_derivative(1).unwrap();
        let rhs = ux.mul(&uxx).add(&u.mul(&uxxx));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_sees_explicit_coordinates() {
        // D_y(y u^2) = u^2 + 2 y u u_y
        let c = ctx();
        let u = jet(&c, 0, [0, 0, 0]);
        let uy = jet(&c, 0, [0, 0, 1]);
        let y = DiffPoly::coord(&c, 2);
        let lhs = y.mul(&u.pow(2)).total_derivative(2).unwrap();
        let rhs = u.pow(2).add(&y.mul(&u).mul(&uy).scale(&rat_int(2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_shifts_function_symbols() {
        // D_t(f' x u) = f'' x u + f' x u_t
        let c = ctx();
        let u = jet(&c, 0, [0, 0, 0]);
        let ut = jet(&c, 0, [1, 0, 0]);
        let x = DiffPoly::coord(&c, 1);
        let f1 = DiffPoly::func(&c, 0, 1);
        let f2 = DiffPoly::func(&c, 0, 2);
        let lhs = f1.mul(&x).mul(&u).total_derivative(0).unwrap();
        let rhs = f2.mul(&x).mul(&u).add(&f1.mul(&x).mul(&ut));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ordered_partial_divides_by_orderings() {
        // d/du_xy (ordered (x,y)) of c*u_xy is c/2; both orderings sum to c.
        let c = ctx();
        let uxy = jet(&c, 0, [0, 1, 1]);
        let co = DiffPoly::coord(&c, 0).scale(&rat_int(3)); // 3t as a stand-in coefficient
        let p = co.mul(&uxy);
        let m = MultiIndex::new(vec![0, 1, 1]);
        let part = p.partial_jet(0, &m);
        assert_eq!(part, co.scale(&rat(1, 2)));
        let both = part.add(&part);
        assert_eq!(both, co);
        // The symmetric partial is the full coefficient.
        assert_eq!(p.partial_jet_sym(0, &m), co);
    }

    #[test]
    fn euler_handles_second_order_terms() {
        // delta/delta u of -1/2 u_xx^2 is -u_xxxx.
        let c = ctx();
        let uxx = jet(&c, 0, [0, 2, 0]);
        let p = uxx.pow(2).scale(&rat(-1, 2));
        let expected = jet(&c, 0, [0, 4, 0]).neg();
        assert_eq!(p.euler(0, None).unwrap(), expected);
    }

    #[test]
    fn substitute_rejects_cycles_and_higher_order_targets() {
        let base = IndexConvention::txy(&["u", "w"])
            .unwrap()
            .with_deps(&["v"])
            .unwrap()
            .into_ctx();
        let u = jet(&base, 0, [0, 0, 0]);
        let v = jet(&base, 2, [0, 0, 0]);
        let ux = jet(&base, 0, [0, 1, 0]);
        assert!(SubstitutionRule::new(vec![(2, u.clone())]).is_ok());
        assert!(SubstitutionRule::new(vec![(2, ux)]).is_err());
        assert!(SubstitutionRule::new(vec![(2, v), (0, u)]).is_err());
    }

    #[test]
    fn substitute_func_with_polynomial() {
        // With f := t^2: f -> t^2, f' -> 2t, f'' -> 2, f''' -> 0.
        let c = ctx();
        let t = DiffPoly::coord(&c, 0);
        let p = DiffPoly::func(&c, 0, 0)
            .add(&DiffPoly::func(&c, 0, 1))
            .add(&DiffPoly::func(&c, 0, 2))
            .add(&DiffPoly::func(&c, 0, 3));
        let coeffs = [rat_int(0), rat_int(0), rat_int(1)];
        let got = p.substitute_func(0, &coeffs);
        let expected = t.pow(2).add(&t.scale(&rat_int(2))).add(&DiffPoly::int(&c, 2));
        assert_eq!(got, expected);
    }
}
