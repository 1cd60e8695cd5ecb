//! Conserved-vector construction from a formal Lagrangian and a symmetry,
//! reduction modulo the system, trivial-part (gauge) extraction, and
//! verification of the divergence identity.

mod reduce;
mod simplify;

pub use reduce::{reduce_modulo, Reduction, ReductionStep};
pub use simplify::simplify_density;

use crate::context::Ctx;
use crate::error::{DiffAlgError, Result};
use crate::multiindex::MultiIndex;
use crate::parser::SystemSpec;
use crate::poly::{DiffPoly, SubstitutionRule};
use crate::selfadjoint::FormalLagrangian;
use crate::symmetry::{characteristic, Characteristic, Generator};

/// Conserved vector `(C^1, ..., C^n)`, one component per independent
/// variable, plus provenance metadata.
#[derive(Clone, Debug)]
pub struct ConservedVector {
    pub components: Vec<DiffPoly>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Default)]
pub struct Provenance {
    pub generator: Option<String>,
    pub substitution: Option<String>,
    pub notes: Vec<String>,
}

impl ConservedVector {
    pub fn new(components: Vec<DiffPoly>) -> Self {
        ConservedVector {
            components,
            provenance: Provenance::default(),
        }
    }

    pub fn ctx(&self) -> &Ctx {
        self.components[0].ctx()
    }

    /// `sum_i D_i(C^i)` expanded as a differential polynomial.
    pub fn divergence(&self) -> Result<DiffPoly> {
        let mut acc = DiffPoly::zero(self.ctx());
        for (i, c) in self.components.iter().enumerate() {
            acc = acc.add(&c.total_derivative(i)?);
        }
        Ok(acc)
    }

    /// Reduce every component modulo the system.
    pub fn reduce(&self, system: &SystemSpec) -> Result<ConservedVector> {
        let mut components = Vec::with_capacity(self.components.len());
        for c in &self.components {
            components.push(reduce_modulo(c, system)?.normal_form);
        }
        let mut out = ConservedVector {
            components,
            provenance: self.provenance.clone(),
        };
        out.provenance.notes.push("reduced modulo system".into());
        Ok(out)
    }

    pub fn neg(&self) -> ConservedVector {
        ConservedVector {
            components: self.components.iter().map(|c| c.neg()).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn sub(&self, other: &ConservedVector) -> ConservedVector {
        ConservedVector {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn into_context(&self, target: &Ctx) -> Result<ConservedVector> {
        Ok(ConservedVector {
            components: self
                .components
                .iter()
                .map(|c| c.into_context(target))
                .collect::<Result<_>>()?,
            provenance: self.provenance.clone(),
        })
    }
}

/// Trivial-part data: the antisymmetric gauge `(P, Q, R)` over `(t, x, y)`.
#[derive(Clone, Debug)]
pub struct GaugeTriple {
    pub p: DiffPoly,
    pub q: DiffPoly,
    pub r: DiffPoly,
}

impl GaugeTriple {
    pub fn zero(ctx: &Ctx) -> Self {
        GaugeTriple {
            p: DiffPoly::zero(ctx),
            q: DiffPoly::zero(ctx),
            r: DiffPoly::zero(ctx),
        }
    }

    pub fn neg(&self) -> GaugeTriple {
        GaugeTriple {
            p: self.p.neg(),
            q: self.q.neg(),
            r: self.r.neg(),
        }
    }
}

/// Apply the trivial-part transformation
///
/// `C~1 = C1 - D_x(P) - D_y(Q)`,
/// `C~2 = C2 + D_t(P) - D_y(R)`,
/// `C~3 = C3 + D_t(Q) + D_x(R)`.
///
/// The divergence is unchanged identically (mixed derivatives commute).
pub fn gauge_transform(cv: &ConservedVector, g: &GaugeTriple) -> Result<ConservedVector> {
    let ctx = cv.ctx();
    if ctx.n_indep() != 3 {
        return Err(DiffAlgError::Unsupported {
            detail: "gauge transform is defined for three independent variables".into(),
        });
    }
    let c1 = cv.components[0]
        .sub(&g.p.total_derivative(1)?)
        .sub(&g.q.total_derivative(2)?);
    let c2 = cv.components[1]
        .add(&g.p.total_derivative(0)?)
        .sub(&g.r.total_derivative(2)?);
    let c3 = cv.components[2]
        .add(&g.q.total_derivative(0)?)
        .add(&g.r.total_derivative(1)?);
    let mut out = ConservedVector {
        components: vec![c1, c2, c3],
        provenance: cv.provenance.clone(),
    };
    out.provenance.notes.push(format!(
        "gauge applied: P={}, Q={}, R={}",
        crate::parser::render_plain(&g.p),
        crate::parser::render_plain(&g.q),
        crate::parser::render_plain(&g.r),
    ));
    Ok(out)
}

/// Assemble the conserved vector of a symmetry from a formal Lagrangian of
/// jet order at most three:
///
/// `C^i = W^a [dL/du^a_i - D_j(dL/du^a_ij) + D_j D_k(dL/du^a_ijk)]
///      + D_j(W^a) [dL/du^a_ij - D_k(dL/du^a_ijk)]
///      + D_j D_k(W^a) dL/du^a_ijk`
///
/// summed over ordered indices `j, k` with the ordering-divided jet
/// partials, then with the adjoint variables eliminated through `subst`.
/// `keep_xi_lagrangian` additionally includes the `xi^i L` term, which only
/// changes the vector by terms vanishing on solutions.
pub fn conserved_vector(
    lagr: &FormalLagrangian,
    gen: &Generator,
    subst: &SubstitutionRule,
    keep_xi_lagrangian: bool,
) -> Result<ConservedVector> {
    let ctx = lagr.lagrangian.ctx();
    let order = lagr.lagrangian.jet_order();
    if order > 3 {
        return Err(DiffAlgError::UnsupportedLagrangianOrder { order });
    }
    for &dep in lagr.adjoint_deps.iter() {
        if !subst.contains(dep) {
            return Err(DiffAlgError::SubstitutionMissing {
                name: ctx.dep_name(dep).to_string(),
            });
        }
    }
    let gen = gen.into_context(ctx)?;
    let w_all = characteristic(&gen)?;
    let n = ctx.n_indep();
    let n_orig = lagr.n_original_deps;
    let lag = &lagr.lagrangian;

    let e = |i: usize| MultiIndex::unit(n, i);
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut c_i = DiffPoly::zero(ctx);
        for alpha in 0..n_orig {
            let w = &w_all.w[alpha];
            if w.is_zero() {
                // Still fine to skip: every bracket is multiplied by W or
                // its derivatives, which are then identically zero.
                continue;
            }
            // First bracket: dL/du_i - D_j dL/du_ij + D_j D_k dL/du_ijk.
            let mut bracket0 = lag.partial_jet(alpha, &e(i));
            for j in 0..n {
                let p2 = lag.partial_jet(alpha, &e(i).add(&e(j)));
                bracket0 = bracket0.sub(&p2.total_derivative(j)?);
                for k in 0..n {
                    let p3 = lag.partial_jet(alpha, &e(i).add(&e(j)).add(&e(k)));
                    if !p3.is_zero() {
                        bracket0 =
                            bracket0.add(&p3.total_derivative(k)?.total_derivative(j)?);
                    }
                }
            }
            c_i = c_i.add(&w.mul(&bracket0));
            // Second: D_j(W) [dL/du_ij - D_k dL/du_ijk].
            for j in 0..n {
                let mut bracket1 = lag.partial_jet(alpha, &e(i).add(&e(j)));
                for k in 0..n {
                    let p3 = lag.partial_jet(alpha, &e(i).add(&e(j)).add(&e(k)));
                    if !p3.is_zero() {
                        bracket1 = bracket1.sub(&p3.total_derivative(k)?);
                    }
                }
                if !bracket1.is_zero() {
                    c_i = c_i.add(&w.total_derivative(j)?.mul(&bracket1));
                }
            }
            // Third: D_j D_k(W) dL/du_ijk.
            for j in 0..n {
                for k in 0..n {
                    let p3 = lag.partial_jet(alpha, &e(i).add(&e(j)).add(&e(k)));
                    if !p3.is_zero() {
                        let w_jk = w.total_derivative(k)?.total_derivative(j)?;
                        c_i = c_i.add(&w_jk.mul(&p3));
                    }
                }
            }
        }
        if keep_xi_lagrangian {
            c_i = c_i.add(&gen.xi[i].mul(lag));
        }
        components.push(c_i.substitute(subst)?);
    }
    Ok(ConservedVector {
        components,
        provenance: Provenance {
            generator: Some(gen.name.clone()),
            substitution: Some(subst.describe()),
            notes: if keep_xi_lagrangian {
                vec!["xi^i L term kept".into()]
            } else {
                Vec::new()
            },
        },
    })
}

/// Direct evaluation of the KP closed form
///
/// `C1 = u W1`,
/// `C2 = -(u^2 + u_xx) W1 + w W2 + u_x D_x(W1) - u D_x^2(W1)`,
/// `C3 = -w W1 - u W2`,
///
/// the specialization of the general assembly to the KP system. Used as an
/// independent cross-check of [`conserved_vector`].
pub fn kp_closed_form(w: &Characteristic) -> Result<ConservedVector> {
    let ctx = w.w[0].ctx().clone();
    let ui = ctx
        .dep_index("u")
        .ok_or_else(|| DiffAlgError::UnknownSymbolInContext { name: "u".into() })?;
    let wi = ctx
        .dep_index("w")
        .ok_or_else(|| DiffAlgError::UnknownSymbolInContext { name: "w".into() })?;
    let xi = ctx
        .indep_index("x")
        .ok_or_else(|| DiffAlgError::UnknownSymbolInContext { name: "x".into() })?;
    let n = ctx.n_indep();
    let u = DiffPoly::jet(&ctx, ui, MultiIndex::zero(n))?;
    let om = DiffPoly::jet(&ctx, wi, MultiIndex::zero(n))?;
    let uxx = DiffPoly::jet(&ctx, ui, {
        let mut m = vec![0u8; n];
        m[xi] = 2;
        MultiIndex::new(m)
    })?;
    let ux = DiffPoly::jet(&ctx, ui, MultiIndex::unit(n, xi))?;
    let (w1, w2) = (&w.w[ui], &w.w[wi]);
    let w1x = w1.total_derivative(xi)?;
    let w1xx = w1x.total_derivative(xi)?;

    let c1 = u.mul(w1);
    let c2 = u
        .pow(2)
        .add(&uxx)
        .neg()
        .mul(w1)
        .add(&om.mul(w2))
        .add(&ux.mul(&w1x))
        .sub(&u.mul(&w1xx));
    let c3 = om.mul(w1).neg().sub(&u.mul(w2));
    Ok(ConservedVector {
        components: vec![c1, c2, c3],
        provenance: Provenance {
            generator: None,
            substitution: None,
            notes: vec!["KP closed form".into()],
        },
    })
}

/// Outcome of checking the divergence identity for a conserved vector.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// `D_t C1 + D_x C2 + D_y C3` expanded.
    pub raw_divergence: DiffPoly,
    /// Residual after reduction modulo the system.
    pub residual: DiffPoly,
    pub pass: bool,
    /// Substitution trace: the divergence equals
    /// `residual + sum cofactor * D_shift(F_eq)` exactly.
    pub steps: Vec<ReductionStep>,
    /// Per-equation multipliers when every shift is zero: the divergence is
    /// then exactly `sum Lambda_alpha F_alpha` (+ residual).
    pub multipliers: Option<Vec<DiffPoly>>,
    /// Whether re-expanding the trace reproduced the raw divergence.
    pub rebuild_exact: bool,
}

/// Expand the divergence of `cv`, reduce it modulo `system`, and extract the
/// multiplier decomposition from the substitution trace.
pub fn verify_divergence(
    cv: &ConservedVector,
    system: &SystemSpec,
) -> Result<VerificationReport> {
    let system = system.into_context(cv.ctx())?;
    let raw = cv.divergence()?;
    let red = reduce_modulo(&raw, &system)?;
    let rebuild = red.rebuild(&system)?;
    let multipliers = red.simple_multipliers(&system);
    let pass = red.normal_form.is_zero();
    Ok(VerificationReport {
        rebuild_exact: rebuild == raw,
        raw_divergence: raw,
        residual: red.normal_form,
        pass,
        steps: red.steps,
        multipliers,
    })
}
