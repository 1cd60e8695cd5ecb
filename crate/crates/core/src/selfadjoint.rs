//! Formal Lagrangians, adjoint systems via the Euler operator, and the
//! nonlinear self-adjointness check.

use crate::context::Ctx;
use crate::error::{DiffAlgError, Result};
use crate::multiindex::MultiIndex;
use crate::parser::{Equation, SystemSpec};
use crate::poly::{DiffPoly, SubstitutionRule};

/// `L = sum_alpha v_alpha F_alpha`: the system's equations multiplied by
/// fresh adjoint variables, term for term.
#[derive(Clone, Debug)]
pub struct FormalLagrangian {
    /// The source system lifted into the extended convention.
    pub system: SystemSpec,
    /// Number of dependent variables of the source system.
    pub n_original_deps: usize,
    /// Indices of the adjoint variables, one per equation.
    pub adjoint_deps: Vec<usize>,
    pub lagrangian: DiffPoly,
}

impl FormalLagrangian {
    pub fn ctx(&self) -> &Ctx {
        self.lagrangian.ctx()
    }

    pub fn adjoint_names(&self) -> Vec<String> {
        self.adjoint_deps
            .iter()
            .map(|&d| self.ctx().dep_name(d).to_string())
            .collect()
    }
}

/// Build the formal Lagrangian with explicit adjoint-variable names (one
/// per equation). Fails on a name collision with existing symbols.
pub fn formal_lagrangian_named(
    system: &SystemSpec,
    names: &[&str],
) -> Result<FormalLagrangian> {
    assert_eq!(
        names.len(),
        system.n_equations(),
        "one adjoint name per equation"
    );
    let n_original_deps = system.ctx().n_dep();
    let ext = system.ctx().with_deps(names)?.into_ctx();
    let lifted = system.into_context(&ext)?;
    let adjoint_deps: Vec<usize> = names
        .iter()
        .map(|n| ext.dep_index(n).expect("freshly added"))
        .collect();
    let mut lagrangian = DiffPoly::zero(&ext);
    for (eq, &dep) in lifted.equations.iter().zip(&adjoint_deps) {
        let v = DiffPoly::jet(&ext, dep, MultiIndex::zero(ext.n_indep()))?;
        lagrangian = lagrangian.add(&v.mul(&eq.expr));
    }
    Ok(FormalLagrangian {
        system: lifted,
        n_original_deps,
        adjoint_deps,
        lagrangian,
    })
}

/// Build the formal Lagrangian with default adjoint names `v, z, v2, v3...`.
pub fn formal_lagrangian(system: &SystemSpec) -> Result<FormalLagrangian> {
    let mut names: Vec<String> = Vec::new();
    let mut candidates: Vec<String> = vec!["v".into(), "z".into()];
    for i in 2..2 + system.n_equations() {
        candidates.push(format!("v{i}"));
    }
    let mut it = candidates.into_iter();
    while names.len() < system.n_equations() {
        let cand = it.next().ok_or_else(|| DiffAlgError::NameCollision {
            name: "adjoint variables".into(),
        })?;
        if !system.ctx().has_symbol(&cand) {
            names.push(cand);
        }
    }
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    formal_lagrangian_named(system, &refs)
}

/// The adjoint system: raw variational derivatives and their sign-oriented
/// form.
#[derive(Clone, Debug)]
pub struct AdjointSystem {
    /// `delta L / delta u^alpha`, one per original dependent variable.
    pub raw: Vec<DiffPoly>,
    /// Raw derivatives normalized so the hinted leading adjoint derivative
    /// carries coefficient +1 (falling back to a positive leading term).
    pub oriented: Vec<DiffPoly>,
}

impl AdjointSystem {
    /// Package the oriented equations as a system over the extended
    /// convention (no solved hints).
    pub fn as_system(&self, ctx: &Ctx) -> SystemSpec {
        SystemSpec {
            ctx: ctx.clone(),
            equations: self
                .oriented
                .iter()
                .map(|e| Equation {
                    expr: e.clone(),
                    solved: None,
                })
                .collect(),
        }
    }
}

/// Coefficient of `var` as a bare linear term (no coordinate or function
/// factors, exponent one, nothing else in the monomial).
fn bare_linear_coeff_sign(p: &DiffPoly, var_dep: usize, multi: &MultiIndex) -> Option<i8> {
    use num_traits::Signed;
    for t in p.terms() {
        let m = &t.mono;
        if m.coord.iter().all(|&e| e == 0)
            && m.funcs.is_empty()
            && m.jets.len() == 1
            && m.jets[0].1 == 1
            && m.jets[0].0.dep == var_dep
            && m.jets[0].0.multi == *multi
        {
            return Some(if t.coeff.is_negative() { -1 } else { 1 });
        }
    }
    None
}

/// Compute the adjoint system `delta L / delta u^alpha = 0` for each
/// original dependent variable.
///
/// Orientation: when equation `alpha` carries a solved hint, the adjoint
/// equation is flipped so that the mirrored derivative of the equation's
/// adjoint variable appears with coefficient +1; otherwise the leading term
/// is made positive.
pub fn adjoint_system(lagr: &FormalLagrangian) -> Result<AdjointSystem> {
    let mut raw = Vec::with_capacity(lagr.n_original_deps);
    let mut oriented = Vec::with_capacity(lagr.n_original_deps);
    for alpha in 0..lagr.n_original_deps {
        let e = lagr.lagrangian.euler(alpha, None)?;
        let mut flip = e.leading_sign() < 0;
        if alpha < lagr.system.n_equations() {
            if let Some(sf) = &lagr.system.equations[alpha].solved {
                let hint_dep = lagr.adjoint_deps[alpha];
                if let Some(sign) = bare_linear_coeff_sign(&e, hint_dep, &sf.var.multi) {
                    flip = sign < 0;
                }
            }
        }
        let o = if flip { e.neg() } else { e.clone() };
        raw.push(e);
        oriented.push(o);
    }
    Ok(AdjointSystem { raw, oriented })
}

/// Verdict and evidence for nonlinear self-adjointness under a candidate
/// substitution of the adjoint variables.
#[derive(Clone, Debug)]
pub struct SelfAdjointnessReport {
    pub substitution: String,
    pub adjoint_raw: Vec<DiffPoly>,
    pub adjoint_oriented: Vec<DiffPoly>,
    /// Oriented adjoint equations after the substitution.
    pub substituted: Vec<DiffPoly>,
    /// Residuals of the substituted equations modulo the original system.
    pub residuals: Vec<DiffPoly>,
    pub verdict: bool,
}

/// Substitute the candidate rule into the adjoint system and reduce modulo
/// the original system; the verdict is yes exactly when every residual is
/// the zero polynomial.
pub fn check_selfadjointness(
    lagr: &FormalLagrangian,
    rule: &SubstitutionRule,
) -> Result<SelfAdjointnessReport> {
    for &dep in &lagr.adjoint_deps {
        if !rule.contains(dep) {
            return Err(DiffAlgError::SubstitutionMissing {
                name: lagr.ctx().dep_name(dep).to_string(),
            });
        }
    }
    let adj = adjoint_system(lagr)?;
    let mut substituted = Vec::new();
    let mut residuals = Vec::new();
    for eq in &adj.oriented {
        let s = eq.substitute(rule)?;
        let red = crate::conslaw::reduce_modulo(&s, &lagr.system)?;
        substituted.push(s);
        residuals.push(red.normal_form);
    }
    let verdict = residuals.iter().all(|r| r.is_zero());
    Ok(SelfAdjointnessReport {
        substitution: rule.describe(),
        adjoint_raw: adj.raw,
        adjoint_oriented: adj.oriented,
        substituted,
        residuals,
        verdict,
    })
}
