//! Text DSL for variables, expressions, PDE systems and symmetry
//! generators, plus plain/LaTeX/JSON rendering.

mod grammar;
mod lexer;
pub mod render;

pub use grammar::{
    parse_expression, parse_generator, parse_named_exprs, parse_substitution, parse_system,
};
pub use render::{render, render_json, render_latex, render_plain, RenderFormat};

use std::fmt;

use crate::context::Ctx;
use crate::error::Result;
use crate::poly::{DiffPoly, JetVar};

/// Parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    pub fn new(line: u32, col: u32, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// An equation `F = 0` solved (optionally) for one of its derivatives.
///
/// The solved form satisfies `F = sign * (var - rhs)` exactly, with `rhs`
/// free of `var`; the parser enforces that `var` occurs linearly with
/// coefficient +1 or -1.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvedForm {
    pub var: JetVar,
    pub rhs: DiffPoly,
    pub sign: i8,
}

/// One equation of a system.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub expr: DiffPoly,
    pub solved: Option<SolvedForm>,
}

/// A parsed PDE system: convention, equations, solved-derivative hints.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub ctx: Ctx,
    pub equations: Vec<Equation>,
}

impl SystemSpec {
    pub fn n_equations(&self) -> usize {
        self.equations.len()
    }

    /// Lift the whole system into a compatible (extended) convention.
    pub fn into_context(&self, target: &Ctx) -> Result<SystemSpec> {
        let mut equations = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            let expr = eq.expr.into_context(target)?;
            let solved = match &eq.solved {
                None => None,
                Some(sf) => {
                    let rhs = sf.rhs.into_context(target)?;
                    // Re-derive the variable through a lifted singleton.
                    let var_poly =
                        DiffPoly::jet(self.ctx(), sf.var.dep, sf.var.multi.clone())?
                            .into_context(target)?;
                    let var = var_poly.jet_vars().into_iter().next().expect("jet var");
                    Some(SolvedForm {
                        var,
                        rhs,
                        sign: sf.sign,
                    })
                }
            };
            equations.push(Equation { expr, solved });
        }
        Ok(SystemSpec {
            ctx: target.clone(),
            equations,
        })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::IndexConvention;
    use crate::multiindex::MultiIndex;
    use crate::poly::rat_int;

    fn kp_ctx() -> Ctx {
        IndexConvention::txy(&["u", "w"]).unwrap().into_ctx()
    }

    #[test]
    fn parses_the_kp_equation() {
        let ctx = kp_ctx();
        let p = parse_expression("u_t - u*u_x - u_xxx - w_y", &ctx).unwrap();
        let u = DiffPoly::jet(&ctx, 0, MultiIndex::zero(3)).unwrap();
        let ut = DiffPoly::jet(&ctx, 0, MultiIndex::new(vec![1, 0, 0])).unwrap();
        let ux = DiffPoly::jet(&ctx, 0, MultiIndex::new(vec![0, 1, 0])).unwrap();
        let uxxx = DiffPoly::jet(&ctx, 0, MultiIndex::new(vec![0, 3, 0])).unwrap();
        let wy = DiffPoly::jet(&ctx, 1, MultiIndex::new(vec![0, 0, 1])).unwrap();
        let expected = ut.sub(&u.mul(&ux)).sub(&uxxx).sub(&wy);
        assert_eq!(p, expected);
    }

    #[test]
    fn zero_literal_parses_to_the_zero_polynomial() {
        let ctx = kp_ctx();
        assert!(parse_expression("0", &ctx).unwrap().is_zero());
    }

    #[test]
    fn derivative_suffix_order_is_insensitive() {
        let ctx = kp_ctx();
        let a = parse_expression("u_xy", &ctx).unwrap();
        let b = parse_expression("u_yx", &ctx).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn d_call_matches_suffix_and_primes() {
        let ctx = IndexConvention::txy(&["u", "w"])
            .unwrap()
            .with_func("f", "t")
            .unwrap()
            .into_ctx();
        assert_eq!(
            parse_expression("D(u,x,3)", &ctx).unwrap(),
            parse_expression("u_xxx", &ctx).unwrap()
        );
        assert_eq!(
            parse_expression("D(f,t,4)", &ctx).unwrap(),
            parse_expression("f''''", &ctx).unwrap()
        );
        // Derivative in a direction the family does not depend on vanishes.
        assert!(parse_expression("D(f,x,1)", &ctx).unwrap().is_zero());
    }

    #[test]
    fn undeclared_symbols_carry_positions() {
        let ctx = kp_ctx();
        let err = parse_expression("u_t + q", &ctx).unwrap_err();
        assert_eq!((err.line, err.col), (1, 7));
        assert!(err.message.contains("undeclared"));
    }

    #[test]
    fn system_parsing_extracts_solved_forms() {
        let src = "
            dep u, w;
            eq u_t - u*u_x - u_xxx - w_y = 0 solve u_t;
            eq w_x - u_y = 0 solve w_x;
        ";
        let sys = parse_system(src).unwrap();
        assert_eq!(sys.n_equations(), 2);
        let sf = sys.equations[0].solved.as_ref().unwrap();
        assert_eq!(sf.sign, 1);
        let expected_rhs =
            parse_expression("u*u_x + u_xxx + w_y", sys.ctx()).unwrap();
        assert_eq!(sf.rhs, expected_rhs);
        let sf2 = sys.equations[1].solved.as_ref().unwrap();
        assert_eq!(sf2.sign, 1);
        assert_eq!(sf2.rhs, parse_expression("u_y", sys.ctx()).unwrap());
    }

    #[test]
    fn nonlinear_solved_hint_is_rejected() {
        let src = "
            dep u, w;
            eq u*u_t - w_y = 0 solve u_t;
        ";
        let err = parse_system(src).unwrap_err();
        assert!(err.message.contains("coefficient +1 or -1"));
    }

    #[test]
    fn potential_kp_parses_as_a_single_equation_system() {
        let src = "dep phi;\neq phi_xt - phi_x*phi_xx - phi_xxxx - phi_yy = 0 solve phi_tx;";
        let sys = parse_system(src).unwrap();
        assert_eq!(sys.n_equations(), 1);
        let sf = sys.equations[0].solved.as_ref().unwrap();
        assert_eq!(sf.var.multi, MultiIndex::new(vec![1, 1, 0]));
    }

    #[test]
    fn substitution_list_parses() {
        let base = IndexConvention::txy(&["u", "w"])
            .unwrap()
            .with_deps(&["v", "z"])
            .unwrap()
            .into_ctx();
        let rule = parse_substitution("v=u, z=w", &base).unwrap();
        assert!(rule.contains(2));
        assert!(rule.contains(3));
        assert_eq!(
            rule.targets()[&2],
            DiffPoly::jet(&base, 0, MultiIndex::zero(3)).unwrap()
        );
    }

    #[test]
    fn division_by_constants_only() {
        let ctx = kp_ctx();
        assert_eq!(
            parse_expression("u/2", &ctx).unwrap(),
            parse_expression("(1/2)*u", &ctx).unwrap()
        );
        let err = parse_expression("1/u", &ctx).unwrap_err();
        assert!(err.message.contains("non-constant"));
        assert_eq!(
            parse_expression("6/2", &ctx).unwrap(),
            DiffPoly::constant(&ctx, rat_int(3))
        );
    }
}
