//! Normal-form reduction modulo a PDE system's solved derivatives.
//!
//! Each solved form `F = sign*(s - r)` induces the rewrite `D_K(s) -> D_K(r)`
//! for every multi-index `K`. For a triangular solved set the rewriting is
//! terminating and confluent, and the normal form is zero exactly when the
//! input vanishes on solutions representable through the solved forms.

use crate::error::{DiffAlgError, Result};
use crate::multiindex::MultiIndex;
use crate::parser::SystemSpec;
use crate::poly::{DiffPoly, JetVar, Monomial, Rat, Term};

use num_traits::One;

/// One substitution event: the input contained `D_shift(solved var)` of
/// equation `eq_index`, contributing `cofactor * D_shift(F_eq)` to the
/// difference between the input and its normal form.
#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub eq_index: usize,
    pub shift: MultiIndex,
    pub cofactor: DiffPoly,
}

/// Result of reducing a polynomial modulo a system.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub normal_form: DiffPoly,
    pub steps: Vec<ReductionStep>,
}

impl Reduction {
    /// Re-expand `normal_form + sum cofactor * D_shift(F)`; equals the
    /// original input exactly (tested, and used by divergence verification).
    pub fn rebuild(&self, system: &SystemSpec) -> Result<DiffPoly> {
        let mut acc = self.normal_form.clone();
        for step in &self.steps {
            let df = system.equations[step.eq_index]
                .expr
                .d_multi(&step.shift)?;
            acc = acc.add(&step.cofactor.mul(&df));
        }
        Ok(acc)
    }

    /// Per-equation multipliers when every substitution had a zero shift,
    /// i.e. the input decomposes as `normal_form + sum Lambda_alpha F_alpha`.
    pub fn simple_multipliers(&self, system: &SystemSpec) -> Option<Vec<DiffPoly>> {
        if self.steps.iter().any(|s| !s.shift.is_zero()) {
            return None;
        }
        let ctx = self.normal_form.ctx();
        let mut out = vec![DiffPoly::zero(ctx); system.n_equations()];
        for step in &self.steps {
            out[step.eq_index] = out[step.eq_index].add(&step.cofactor);
        }
        Some(out)
    }
}

const MAX_ROUNDS: usize = 10_000;

/// Find the greatest reducible jet variable in `p`, with the matching
/// equation index and derivative shift.
fn find_reducible(p: &DiffPoly, system: &SystemSpec) -> Option<(JetVar, usize, MultiIndex)> {
    let mut best: Option<(JetVar, usize, MultiIndex)> = None;
    for var in p.jet_vars() {
        for (eq_index, eq) in system.equations.iter().enumerate() {
            let Some(sf) = &eq.solved else { continue };
            if sf.var.dep != var.dep {
                continue;
            }
            let Some(shift) = var.multi.checked_sub(&sf.var.multi) else {
                continue;
            };
            let better = match &best {
                None => true,
                Some((bv, _, _)) => var > *bv,
            };
            if better {
                best = Some((var.clone(), eq_index, shift));
            }
            break; // first matching equation wins for this variable
        }
    }
    best
}

/// Substitute every occurrence of `var` in `p` by `replacement`, returning
/// the substituted polynomial and the cofactor `A` with
/// `p = p' + A * (var - replacement)`.
fn substitute_var(
    p: &DiffPoly,
    var: &JetVar,
    replacement: &DiffPoly,
) -> (DiffPoly, DiffPoly) {
    let ctx = p.ctx();
    let mut out_terms: Vec<Term> = Vec::new();
    let mut out_extra: Vec<DiffPoly> = Vec::new();
    let mut cofactor = DiffPoly::zero(ctx);
    let var_poly = DiffPoly::from_terms(
        ctx,
        vec![Term {
            coeff: Rat::one(),
            mono: Monomial::one(ctx.n_indep()).with_jet_exp(var, 1),
        }],
    );
    for t in p.terms() {
        let e = t.mono.jet_exp(var);
        if e == 0 {
            out_terms.push(t.clone());
            continue;
        }
        let rest = DiffPoly::from_terms(
            ctx,
            vec![Term {
                coeff: t.coeff.clone(),
                mono: t.mono.with_jet_exp(var, 0),
            }],
        );
        out_extra.push(rest.mul(&replacement.pow(e as u32)));
        // g^e - r^e = (g - r) * sum_j g^j r^(e-1-j)
        let mut telescope = DiffPoly::zero(ctx);
        for j in 0..e {
            telescope = telescope.add(
                &var_poly
                    .pow(j as u32)
                    .mul(&replacement.pow((e - 1 - j) as u32)),
            );
        }
        cofactor = cofactor.add(&rest.mul(&telescope));
    }
    let mut out = DiffPoly::from_terms(ctx, out_terms);
    for piece in out_extra {
        out = out.add(&piece);
    }
    (out, cofactor)
}

/// Reduce `p` to normal form modulo the system's solved derivatives,
/// recording the substitution trace.
pub fn reduce_modulo(p: &DiffPoly, system: &SystemSpec) -> Result<Reduction> {
    let system = if system.ctx() == p.ctx() {
        system.clone()
    } else {
        system.into_context(p.ctx())?
    };
    let mut current = p.clone();
    let mut steps = Vec::new();
    for _ in 0..MAX_ROUNDS {
        let Some((var, eq_index, shift)) = find_reducible(&current, &system) else {
            return Ok(Reduction {
                normal_form: current,
                steps,
            });
        };
        let sf = system.equations[eq_index].solved.as_ref().unwrap();
        let replacement = sf.rhs.d_multi(&shift)?;
        let (next, cofactor) = substitute_var(&current, &var, &replacement);
        // var - replacement = sign * D_shift(F).
        let signed = if sf.sign == 1 {
            cofactor
        } else {
            cofactor.neg()
        };
        steps.push(ReductionStep {
            eq_index,
            shift,
            cofactor: signed,
        });
        current = next;
    }
    Err(DiffAlgError::ReductionFailure {
        detail: format!(
            "substitution did not terminate within {MAX_ROUNDS} rounds; \
             the solved set is not triangular"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_expression, parse_system};

    fn kp() -> SystemSpec {
        parse_system(
            "dep u, w;\n\
             eq u_t - u*u_x - u_xxx - w_y = 0 solve u_t;\n\
             eq w_x - u_y = 0 solve w_x;",
        )
        .unwrap()
    }

    #[test]
    fn the_equation_itself_reduces_to_zero() {
        let sys = kp();
        let f1 = sys.equations[0].expr.clone();
        let red = reduce_modulo(&f1, &sys).unwrap();
        assert!(red.normal_form.is_zero());
        assert_eq!(red.rebuild(&sys).unwrap(), f1);
    }

    #[test]
    fn orientation_keeps_u_y() {
        // With w_x solved, `w u_y` is already in normal form; with u_y
        // solved instead, it rewrites to `w w_x`.
        let sys = kp();
        let p = parse_expression("w*u_y", sys.ctx()).unwrap();
        let red = reduce_modulo(&p, &sys).unwrap();
        assert_eq!(red.normal_form, p);

        let flipped = parse_system(
            "dep u, w;\n\
             eq u_t - u*u_x - u_xxx - w_y = 0 solve u_t;\n\
             eq w_x - u_y = 0 solve u_y;",
        )
        .unwrap();
        let q = parse_expression("w*u_y", flipped.ctx()).unwrap();
        let red2 = reduce_modulo(&q, &flipped).unwrap();
        assert_eq!(
            red2.normal_form,
            parse_expression("w*w_x", flipped.ctx()).unwrap()
        );
        assert_eq!(red2.rebuild(&flipped).unwrap(), q);
    }

    #[test]
    fn prolonged_derivatives_are_eliminated() {
        // u_tt and w_xx are derivatives of solved variables.
        let sys = kp();
        let p = parse_expression("u_tt + w_xx", sys.ctx()).unwrap();
        let red = reduce_modulo(&p, &sys).unwrap();
        for var in red.normal_form.jet_vars() {
            // No t-derivatives of u, no x-derivatives of w survive.
            if var.dep == 0 {
                assert_eq!(var.multi.get(0), 0, "u t-derivative survived");
            } else {
                assert_eq!(var.multi.get(1), 0, "w x-derivative survived");
            }
        }
        assert_eq!(red.rebuild(&sys).unwrap(), p);
    }

    #[test]
    fn trace_rebuild_is_exact_with_powers() {
        let sys = kp();
        let p = parse_expression("u_t^2*w_x + 3*u_t - w_x^3", sys.ctx()).unwrap();
        let red = reduce_modulo(&p, &sys).unwrap();
        assert_eq!(red.rebuild(&sys).unwrap(), p);
    }
}
