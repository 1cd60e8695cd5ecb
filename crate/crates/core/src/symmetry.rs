//! Point-symmetry generators, characteristics, prolongation in
//! characteristic form, and the infinitesimal symmetry check.

use crate::context::Ctx;
use crate::error::{DiffAlgError, Result};
use crate::multiindex::MultiIndex;
use crate::parser::SystemSpec;
use crate::poly::{rat, rat_int, DiffPoly};

/// A point-symmetry vector field `X = xi^i d/dx^i + eta^alpha d/du^alpha`
/// with jet-order-0 coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub xi: Vec<DiffPoly>,
    pub eta: Vec<DiffPoly>,
}

impl Generator {
    pub fn new(name: &str, xi: Vec<DiffPoly>, eta: Vec<DiffPoly>) -> Result<Self> {
        for p in xi.iter().chain(eta.iter()) {
            if p.jet_order() > 0 {
                return Err(DiffAlgError::Unsupported {
                    detail: "generator coefficients must have jet order 0".into(),
                });
            }
        }
        let ctx = xi
            .first()
            .or_else(|| eta.first())
            .expect("generator needs at least one coefficient")
            .ctx()
            .clone();
        assert_eq!(xi.len(), ctx.n_indep(), "one xi per independent variable");
        assert_eq!(eta.len(), ctx.n_dep(), "one eta per dependent variable");
        Ok(Generator {
            name: name.to_string(),
            xi,
            eta,
        })
    }

    pub fn ctx(&self) -> &Ctx {
        self.xi[0].ctx()
    }

    /// Lift all coefficients into a compatible convention.
    pub fn into_context(&self, target: &Ctx) -> Result<Generator> {
        let xi = self
            .xi
            .iter()
            .map(|p| p.into_context(target))
            .collect::<Result<Vec<_>>>()?;
        let mut eta = self
            .eta
            .iter()
            .map(|p| p.into_context(target))
            .collect::<Result<Vec<_>>>()?;
        // Extended conventions may carry extra dependent variables (adjoint
        // variables); the generator does not move them.
        while eta.len() < target.n_dep() {
            eta.push(DiffPoly::zero(target));
        }
        Ok(Generator {
            name: self.name.clone(),
            xi,
            eta,
        })
    }

    /// Linear combination used by the linearity property tests.
    pub fn combine(&self, a: i64, other: &Generator, b: i64) -> Generator {
        let (ar, br) = (rat_int(a), rat_int(b));
        Generator {
            name: format!("{}+{}", self.name, other.name),
            xi: self
                .xi
                .iter()
                .zip(&other.xi)
                .map(|(p, q)| p.scale(&ar).add(&q.scale(&br)))
                .collect(),
            eta: self
                .eta
                .iter()
                .zip(&other.eta)
                .map(|(p, q)| p.scale(&ar).add(&q.scale(&br)))
                .collect(),
        }
    }
}

/// Characteristic `W^alpha = eta^alpha - xi^j u^alpha_j`, one entry per
/// dependent variable; jet order at most 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Characteristic {
    pub w: Vec<DiffPoly>,
}

/// Compute the characteristic of a generator.
pub fn characteristic(gen: &Generator) -> Result<Characteristic> {
    let ctx = gen.ctx();
    let mut w = Vec::with_capacity(ctx.n_dep());
    for alpha in 0..ctx.n_dep() {
        let mut acc = gen.eta[alpha].clone();
        for j in 0..ctx.n_indep() {
            let u_j = DiffPoly::jet(ctx, alpha, MultiIndex::unit(ctx.n_indep(), j))?;
            acc = acc.sub(&gen.xi[j].mul(&u_j));
        }
        w.push(acc);
    }
    Ok(Characteristic { w })
}

/// Action of the prolonged vector field in characteristic form:
///
/// `X(p) = xi^i D_i(p) + sum_{alpha,J} D_J(W^alpha) dp/du^alpha_J`
///
/// with the symmetric jet partials, summed over the multi-indices actually
/// present in `p`.
pub fn apply_prolonged(gen: &Generator, p: &DiffPoly) -> Result<DiffPoly> {
    let ctx = p.ctx();
    let gen = if gen.ctx() == ctx {
        gen.clone()
    } else {
        gen.into_context(ctx)?
    };
    let w = characteristic(&gen)?;
    let mut acc = DiffPoly::zero(ctx);
    for (i, xi) in gen.xi.iter().enumerate() {
        if !xi.is_zero() {
            acc = acc.add(&xi.mul(&p.total_derivative(i)?));
        }
    }
    for var in p.jet_vars() {
        let partial = p.partial_jet_sym(var.dep, &var.multi);
        if partial.is_zero() {
            continue;
        }
        let dw = w.w[var.dep].d_multi(&var.multi)?;
        acc = acc.add(&dw.mul(&partial));
    }
    Ok(acc)
}

/// Outcome of checking one generator against one system.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub generator: String,
    /// `X(F_alpha)` before reduction, one per equation.
    pub applied: Vec<DiffPoly>,
    /// Residuals after reduction modulo the system.
    pub residuals: Vec<DiffPoly>,
    pub pass: bool,
}

/// Verify the infinitesimal symmetry condition: for every equation,
/// `X(F_alpha)` must reduce to zero modulo the system.
pub fn check_symmetry(gen: &Generator, system: &SystemSpec) -> Result<SymmetryReport> {
    let system = system.into_context(gen.ctx())?;
    let mut applied = Vec::new();
    let mut residuals = Vec::new();
    for eq in &system.equations {
        let xp = apply_prolonged(gen, &eq.expr)?;
        let res = crate::conslaw::reduce_modulo(&xp, &system)?;
        applied.push(xp);
        residuals.push(res.normal_form);
    }
    let pass = residuals.iter().all(|r| r.is_zero());
    Ok(SymmetryReport {
        generator: gen.name.clone(),
        applied,
        residuals,
        pass,
    })
}

/// The three KP generator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KpGeneratorKind {
    F,
    G,
    H,
}

impl KpGeneratorKind {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "f" => Some(KpGeneratorKind::F),
            "g" => Some(KpGeneratorKind::G),
            "h" => Some(KpGeneratorKind::H),
            _ => None,
        }
    }

    pub fn func_name(&self) -> &'static str {
        match self {
            KpGeneratorKind::F => "f",
            KpGeneratorKind::G => "g",
            KpGeneratorKind::H => "h",
        }
    }
}

/// Built-in generators admitted by the KP system, with a fully symbolic
/// arbitrary function of `t`. The base convention must contain `(t, x, y)`
/// and `(u, w)`; the returned convention extends it with the function
/// family.
pub fn builtin_kp_generator(kind: KpGeneratorKind, base: &Ctx) -> Result<(Generator, Ctx)> {
    for name in ["t", "x", "y"] {
        if base.indep_index(name).is_none() {
            return Err(DiffAlgError::UnknownSymbolInContext { name: name.into() });
        }
    }
    for name in ["u", "w"] {
        if base.dep_index(name).is_none() {
            return Err(DiffAlgError::UnknownSymbolInContext { name: name.into() });
        }
    }
    let fname = kind.func_name();
    let ctx = if base.func_index(fname).is_some() {
        base.clone()
    } else {
        base.with_func(fname, "t")?.into_ctx()
    };
    let fidx = ctx.func_index(fname).unwrap();
    let (ti, xi_, yi) = (
        ctx.indep_index("t").unwrap(),
        ctx.indep_index("x").unwrap(),
        ctx.indep_index("y").unwrap(),
    );
    let (ui, wi) = (ctx.dep_index("u").unwrap(), ctx.dep_index("w").unwrap());
    let f = |k: u32| DiffPoly::func(&ctx, fidx, k);
    let x = DiffPoly::coord(&ctx, xi_);
    let y = DiffPoly::coord(&ctx, yi);
    let u = DiffPoly::jet(&ctx, ui, MultiIndex::zero(ctx.n_indep()))?;
    let w = DiffPoly::jet(&ctx, wi, MultiIndex::zero(ctx.n_indep()))?;
    let zero = DiffPoly::zero(&ctx);

    let mut xi = vec![zero.clone(); ctx.n_indep()];
    let mut eta = vec![zero.clone(); ctx.n_dep()];
    match kind {
        KpGeneratorKind::F => {
            xi[ti] = f(0).scale(&rat_int(3));
            xi[xi_] = f(1).mul(&x).add(&f(2).mul(&y.pow(2)).scale(&rat(1, 2)));
            xi[yi] = f(1).mul(&y).scale(&rat_int(2));
            eta[ui] = f(1)
                .mul(&u)
                .scale(&rat_int(2))
                .add(&f(2).mul(&x))
                .add(&f(3).mul(&y.pow(2)).scale(&rat(1, 2)))
                .neg();
            eta[wi] = f(1)
                .mul(&w)
                .scale(&rat_int(3))
                .add(&f(2).mul(&y).mul(&u))
                .add(&f(3).mul(&x).mul(&y))
                .add(&f(4).mul(&y.pow(3)).scale(&rat(1, 6)))
                .neg();
        }
        KpGeneratorKind::G => {
            xi[yi] = f(0).scale(&rat_int(2));
            xi[xi_] = f(1).mul(&y);
            eta[ui] = f(2).mul(&y).neg();
            eta[wi] = f(1)
                .mul(&u)
                .add(&f(2).mul(&x))
                .add(&f(3).mul(&y.pow(2)).scale(&rat(1, 2)))
                .neg();
        }
        KpGeneratorKind::H => {
            xi[xi_] = f(0);
            eta[ui] = f(1).neg();
            eta[wi] = f(2).mul(&y).neg();
        }
    }
    let name = format!("X_{fname}");
    Ok((Generator::new(&name, xi, eta)?, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::IndexConvention;
    use crate::parser::parse_expression;

    fn kp_base() -> Ctx {
        IndexConvention::txy(&["u", "w"]).unwrap().into_ctx()
    }

    #[test]
    fn builtin_h_matches_the_display() {
        let (gen, ctx) = builtin_kp_generator(KpGeneratorKind::H, &kp_base()).unwrap();
        assert_eq!(gen.xi[0], DiffPoly::zero(&ctx));
        assert_eq!(gen.xi[1], parse_expression("h", &ctx).unwrap());
        assert_eq!(gen.xi[2], DiffPoly::zero(&ctx));
        assert_eq!(gen.eta[0], parse_expression("-h'", &ctx).unwrap());
        assert_eq!(gen.eta[1], parse_expression("-h''*y", &ctx).unwrap());
    }

    #[test]
    fn builtin_g_matches_the_display() {
        let (gen, ctx) = builtin_kp_generator(KpGeneratorKind::G, &kp_base()).unwrap();
        assert_eq!(gen.xi[1], parse_expression("g'*y", &ctx).unwrap());
        assert_eq!(gen.xi[2], parse_expression("2*g", &ctx).unwrap());
        assert_eq!(gen.eta[0], parse_expression("-g''*y", &ctx).unwrap());
        assert_eq!(
            gen.eta[1],
            parse_expression("-(g'*u + g''*x + (1/2)*g'''*y^2)", &ctx).unwrap()
        );
    }

    #[test]
    fn characteristic_of_pure_eta_generator_is_eta() {
        let ctx = kp_base();
        let zero = DiffPoly::zero(&ctx);
        let eta_u = parse_expression("x*u + 1", &ctx).unwrap();
        let gen = Generator::new(
            "G",
            vec![zero.clone(), zero.clone(), zero.clone()],
            vec![eta_u.clone(), zero.clone()],
        )
        .unwrap();
        let w = characteristic(&gen).unwrap();
        assert_eq!(w.w[0], eta_u);
        assert_eq!(w.w[1], zero);
    }

    #[test]
    fn characteristic_of_h_by_direct_formula() {
        // W1 = -h' - h u_x, W2 = -h'' y - h w_x.
        let (gen, ctx) = builtin_kp_generator(KpGeneratorKind::H, &kp_base()).unwrap();
        let w = characteristic(&gen).unwrap();
        assert_eq!(w.w[0], parse_expression("-h' - h*u_x", &ctx).unwrap());
        assert_eq!(w.w[1], parse_expression("-h''*y - h*w_x", &ctx).unwrap());
    }

    #[test]
    fn prolonged_action_on_constants_and_coordinates() {
        let (gen, ctx) = builtin_kp_generator(KpGeneratorKind::H, &kp_base()).unwrap();
        let one = DiffPoly::int(&ctx, 1);
        assert!(apply_prolonged(&gen, &one).unwrap().is_zero());
        let x = DiffPoly::coord(&ctx, 1);
        assert_eq!(
            apply_prolonged(&gen, &x).unwrap(),
            parse_expression("h", &ctx).unwrap()
        );
    }

    #[test]
    fn prolongation_is_a_derivation() {
        let (gen, ctx) = builtin_kp_generator(KpGeneratorKind::F, &kp_base()).unwrap();
        let p = parse_expression("u*u_x + y*w", &ctx).unwrap();
        let q = parse_expression("u_xx - w_y*u", &ctx).unwrap();
        let lhs = apply_prolonged(&gen, &p.mul(&q)).unwrap();
        let rhs = apply_prolonged(&gen, &p)
            .unwrap()
            .mul(&q)
            .add(&p.mul(&apply_prolonged(&gen, &q).unwrap()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn characteristic_is_linear() {
        let base = kp_base();
        let (gf, ctxf) = builtin_kp_generator(KpGeneratorKind::F, &base).unwrap();
        let ctx_both = ctxf.with_func("g", "t").unwrap().into_ctx();
        let (gg, _) = builtin_kp_generator(KpGeneratorKind::G, &ctx_both).unwrap();
        let gf = gf.into_context(&ctx_both).unwrap();
        let combo = gf.combine(3, &gg, -2);
        let wc = characteristic(&combo).unwrap();
        let wf = characteristic(&gf).unwrap();
        let wg = characteristic(&gg).unwrap();
        for alpha in 0..2 {
            let expect = wf.w[alpha]
                .scale(&rat_int(3))
                .add(&wg.w[alpha].scale(&rat_int(-2)));
            assert_eq!(wc.w[alpha], expect);
        }
    }
}
