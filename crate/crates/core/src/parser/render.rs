//! Deterministic rendering of differential polynomials: plain text (the DSL
//! itself, round-trips through the parser), LaTeX, and JSON.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::poly::{DiffPoly, Rat, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Plain,
    Latex,
    Json,
}

impl RenderFormat {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "plain" => Some(RenderFormat::Plain),
            "latex" => Some(RenderFormat::Latex),
            "json" => Some(RenderFormat::Json),
            _ => None,
        }
    }
}

/// LaTeX spellings for a few ASCII variable names used by the corpus.
fn latex_name(name: &str) -> String {
    match name {
        "w" => "\\omega".to_string(),
        "phi" => "\\phi".to_string(),
        _ => name.to_string(),
    }
}

fn rat_plain(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

fn rat_latex(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn term_factors_plain(p: &DiffPoly, t: &Term) -> Vec<String> {
    let ctx = p.ctx();
    let mut parts: Vec<String> = Vec::new();
    let mag = t.coeff.abs();
    if !mag.is_one() || t.mono.is_one() {
        parts.push(rat_plain(&mag));
    }
    for (i, &e) in t.mono.coord.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = ctx.indep_name(i);
        parts.push(if e == 1 {
            name.to_string()
        } else {
            format!("{name}^{e}")
        });
    }
    for (sym, e) in &t.mono.funcs {
        let decl = ctx.func(sym.func);
        let base = if sym.deriv <= 4 {
            format!("{}{}", decl.name, "'".repeat(sym.deriv as usize))
        } else {
            format!(
                "D({},{},{})",
                decl.name,
                ctx.indep_name(decl.arg),
                sym.deriv
            )
        };
        parts.push(if *e == 1 { base } else { format!("{base}^{e}") });
    }
    for (var, e) in &t.mono.jets {
        let dep = ctx.dep_name(var.dep);
        let base = if var.multi.is_zero() {
            dep.to_string()
        } else {
            let mut suffix = String::new();
            for (i, &c) in var.multi.counts().iter().enumerate() {
                for _ in 0..c {
                    suffix.push_str(ctx.indep_name(i));
                }
            }
            format!("{dep}_{suffix}")
        };
        parts.push(if *e == 1 { base } else { format!("{base}^{e}") });
    }
    parts
}

/// Plain-text rendering; `parse_expression` of the result reproduces the
/// polynomial exactly.
pub fn render_plain(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in p.terms().iter().enumerate() {
        let neg = t.coeff.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&term_factors_plain(p, t).join("*"));
    }
    out
}

/// LaTeX rendering (presentation only; not meant to be parsed back).
pub fn render_latex(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let ctx = p.ctx();
    let mut out = String::new();
    for (i, t) in p.terms().iter().enumerate() {
        let neg = t.coeff.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut parts: Vec<String> = Vec::new();
        let mag = t.coeff.abs();
        if !mag.is_one() || t.mono.is_one() {
            parts.push(rat_latex(&mag));
        }
        for (ci, &e) in t.mono.coord.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = latex_name(ctx.indep_name(ci));
            parts.push(if e == 1 {
                name
            } else {
                format!("{name}^{{{e}}}")
            });
        }
        for (sym, e) in &t.mono.funcs {
            let name = latex_name(&ctx.func(sym.func).name);
            let base = if sym.deriv == 0 {
                name
            } else if sym.deriv <= 3 {
                format!("{name}{}", "'".repeat(sym.deriv as usize))
            } else {
                format!("{name}^{{({})}}", sym.deriv)
            };
            parts.push(if *e == 1 {
                base
            } else {
                format!("{base}^{{{e}}}")
            });
        }
        for (var, e) in &t.mono.jets {
            let dep = latex_name(ctx.dep_name(var.dep));
            let base = if var.multi.is_zero() {
                dep
            } else {
                let mut suffix = String::new();
                for (ii, &c) in var.multi.counts().iter().enumerate() {
                    for _ in 0..c {
                        suffix.push_str(&latex_name(ctx.indep_name(ii)));
                    }
                }
                format!("{dep}_{{{suffix}}}")
            };
            parts.push(if *e == 1 {
                base
            } else {
                format!("{base}^{{{e}}}")
            });
        }
        out.push_str(&parts.join(" \\, "));
    }
    out
}

#[derive(Serialize)]
struct ExprJson<'a> {
    expr: &'a str,
}

/// JSON rendering: `{"expr": "<plain form>"}` with stable key order.
pub fn render_json(p: &DiffPoly) -> String {
    let plain = render_plain(p);
    serde_json::to_string(&ExprJson { expr: &plain }).expect("expression serializes")
}

pub fn render(p: &DiffPoly, format: RenderFormat) -> String {
    match format {
        RenderFormat::Plain => render_plain(p),
        RenderFormat::Latex => render_latex(p),
        RenderFormat::Json => render_json(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::IndexConvention;
    use crate::multiindex::MultiIndex;
    use crate::parser::parse_expression;
    use crate::poly::rat;

    #[test]
    fn zero_renders_as_zero_everywhere() {
        let ctx = IndexConvention::txy(&["u", "w"]).unwrap().into_ctx();
        let zero = DiffPoly::zero(&ctx);
        assert_eq!(render_plain(&zero), "0");
        assert_eq!(render_latex(&zero), "0");
        assert_eq!(render_json(&zero), "{\"expr\":\"0\"}");
    }

    #[test]
    fn plain_round_trips_and_is_deterministic() {
        let ctx = IndexConvention::txy(&["u", "w"])
            .unwrap()
            .with_func("f", "t")
            .unwrap()
            .into_ctx();
        let p = parse_expression("-(1/2)*f'*u^2 - (x*f'' + (1/2)*y^2*f''')*u", &ctx).unwrap();
        let s = render_plain(&p);
        let q = parse_expression(&s, &ctx).unwrap();
        assert_eq!(p, q);
        assert_eq!(s, render_plain(&q));
    }

    #[test]
    fn latex_restores_omega() {
        let ctx = IndexConvention::txy(&["u", "w"]).unwrap().into_ctx();
        let wy = DiffPoly::jet(&ctx, 1, MultiIndex::new(vec![0, 0, 1])).unwrap();
        let p = wy.scale(&rat(-1, 2));
        assert_eq!(render_latex(&p), "-\\frac{1}{2} \\, \\omega_{y}");
    }
}
