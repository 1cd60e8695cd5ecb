//! Density simplification: strip trivial total-derivative parts from a
//! conserved vector by integration by parts, collecting them in a gauge
//! triple, and normalize the overall sign.

use num_traits::One;

use crate::error::Result;
use crate::multiindex::MultiIndex;
use crate::parser::SystemSpec;
use crate::poly::{DiffPoly, JetVar, Rat, Term};

use super::reduce::reduce_modulo;
use super::{ConservedVector, GaugeTriple};

/// Output of [`simplify_density`]: the simplified vector, the gauge moved
/// out of it, and the overall sign that was applied.
#[derive(Clone, Debug)]
pub struct SimplifyResult {
    pub vector: ConservedVector,
    pub gauge: GaugeTriple,
    pub sign: i8,
}

/// Single-variable rewrite valid modulo the system: `from -> to` where the
/// system contains an equation `to - from = 0` (up to sign) solved for `to`.
struct ReverseRule {
    from: JetVar,
    to: JetVar,
}

fn reverse_rules(system: &SystemSpec) -> Vec<ReverseRule> {
    let mut rules = Vec::new();
    for eq in &system.equations {
        let Some(sf) = &eq.solved else { continue };
        if sf.rhs.num_terms() != 1 {
            continue;
        }
        let t = &sf.rhs.terms()[0];
        let plain_coeff = t.coeff == Rat::one();
        let plain_mono = t.mono.coord.iter().all(|&e| e == 0)
            && t.mono.funcs.is_empty()
            && t.mono.jets.len() == 1
            && t.mono.jets[0].1 == 1;
        if plain_coeff && plain_mono {
            rules.push(ReverseRule {
                from: t.mono.jets[0].0.clone(),
                to: sf.var.clone(),
            });
        }
    }
    rules
}

/// Strict well-founded comparison of whole polynomials by their sorted term
/// monomials; coefficients are ignored.
fn measure_less(a: &DiffPoly, b: &DiffPoly) -> bool {
    for (ta, tb) in a.terms().iter().zip(b.terms()) {
        match ta.mono.cmp_order(&tb.mono) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    a.num_terms() < b.num_terms()
}

fn term_as_poly(p: &DiffPoly, t: &Term) -> DiffPoly {
    DiffPoly::from_terms(p.ctx(), vec![t.clone()])
}

/// One integration-by-parts step on a single term `c * m' * (u_J)^k * v`
/// with `v = u_{J+e_d}` occurring linearly:
///
/// `T = D_d(c m' u_J^(k+1) / (k+1)) - D_d(c m') u_J^(k+1) / (k+1)`.
///
/// Returns the gauge part and the remainder.
fn ibp_step(
    p: &DiffPoly,
    term: &Term,
    var: &JetVar,
    d: usize,
) -> Result<Option<(DiffPoly, DiffPoly)>> {
    if term.mono.jet_exp(var) != 1 || var.multi.get(d) == 0 {
        return Ok(None);
    }
    let ctx = p.ctx();
    let lower = JetVar {
        dep: var.dep,
        multi: var.multi.checked_sub(&MultiIndex::unit(var.multi.len(), d)).unwrap(),
    };
    let k = term.mono.jet_exp(&lower) as u32;
    let mut rest_mono = term.mono.with_jet_exp(var, 0);
    rest_mono = rest_mono.with_jet_exp(&lower, 0);
    let scale = Rat::new(1.into(), (k as i64 + 1).into());
    let rest = DiffPoly::from_terms(
        ctx,
        vec![Term {
            coeff: &term.coeff * &scale,
            mono: rest_mono,
        }],
    );
    let lower_pow = DiffPoly::jet(ctx, lower.dep, lower.multi.clone())?.pow(k + 1);
    let gauge_part = rest.mul(&lower_pow);
    let remainder = rest.total_derivative(d)?.mul(&lower_pow).neg();
    Ok(Some((gauge_part, remainder)))
}

/// Repeatedly move exact `D_d` parts of `p` into per-direction gauges, using
/// a strictly decreasing global term-order measure as the acceptance guard.
/// Terms may first be rewritten through a single-variable system rule when
/// that enables a decreasing step. Returns the remaining polynomial and one
/// accumulated gauge per requested direction.
fn extract_exact_parts(
    p: &DiffPoly,
    system: &SystemSpec,
    directions: &[usize],
) -> Result<(DiffPoly, Vec<DiffPoly>)> {
    let ctx = p.ctx();
    let rules = reverse_rules(system);
    let mut density = reduce_modulo(p, system)?.normal_form;
    let mut gauges = vec![DiffPoly::zero(ctx); directions.len()];
    const CAP: usize = 10_000;

    'outer: for _ in 0..CAP {
        let terms: Vec<Term> = density.terms().to_vec();
        for t in &terms {
            // Variants: the term itself, then single-rule rewrites of it.
            let mut variants: Vec<Term> = vec![t.clone()];
            for rule in &rules {
                let e = t.mono.jet_exp(&rule.from);
                if e > 0 {
                    let mut mono = t.mono.with_jet_exp(&rule.from, 0);
                    let merged = mono.jet_exp(&rule.to) + e;
                    mono = mono.with_jet_exp(&rule.to, merged);
                    variants.push(Term {
                        coeff: t.coeff.clone(),
                        mono,
                    });
                }
            }
            for variant in &variants {
                let vars: Vec<JetVar> =
                    variant.mono.jets.iter().map(|(v, _)| v.clone()).collect();
                for var in &vars {
                    for (di, &d) in directions.iter().enumerate() {
                        let Some((gauge_part, remainder)) =
                            ibp_step(&density, variant, var, d)?
                        else {
                            continue;
                        };
                        let candidate = density
                            .sub(&term_as_poly(&density, t))
                            .add(&remainder);
                        let candidate = reduce_modulo(&candidate, system)?.normal_form;
                        if measure_less(&candidate, &density) {
                            gauges[di] = gauges[di].add(&gauge_part);
                            density = candidate;
                            continue 'outer;
                        }
                    }
                }
            }
        }
        break;
    }
    Ok((density, gauges))
}

/// Reduce the density modulo the system, strip exact `D_x`/`D_y` parts into
/// a gauge triple `(P, Q, R)` (the flux component sheds its exact `D_y`
/// part into `R`), carry the gauge into the fluxes, and normalize the
/// overall sign so the leading density term has a positive coefficient.
///
/// The returned vector equals `sign * gauge_transform(cv, (P,Q,R))` up to
/// terms vanishing on solutions; in particular its divergence reduces to
/// the same residual as the input's.
pub fn simplify_density(
    cv: &ConservedVector,
    system: &SystemSpec,
) -> Result<SimplifyResult> {
    let system = system.into_context(cv.ctx())?;
    let (t_dir, x_dir, y_dir) = (0usize, 1usize, 2usize);

    // Density: P from D_x parts, Q from D_y parts.
    let (density, pq) = extract_exact_parts(&cv.components[0], &system, &[x_dir, y_dir])?;
    let (p_gauge, q_gauge) = (pq[0].clone(), pq[1].clone());

    // x-flux picks up D_t(P), then sheds its exact D_y part into R.
    let c2 = cv.components[1].add(&p_gauge.total_derivative(t_dir)?);
    let (c2, ry) = extract_exact_parts(&c2, &system, &[y_dir])?;
    let r_gauge = ry[0].clone();

    // y-flux picks up D_t(Q) + D_x(R).
    let c3 = cv.components[2]
        .add(&q_gauge.total_derivative(t_dir)?)
        .add(&r_gauge.total_derivative(x_dir)?);
    let c3 = reduce_modulo(&c3, &system)?.normal_form;

    let sign: i8 = if density.leading_sign() < 0 { -1 } else { 1 };
    let mut components = vec![density, c2, c3];
    if sign == -1 {
        components = components.iter().map(|c| c.neg()).collect();
    }
    let mut provenance = cv.provenance.clone();
    provenance.notes.push(format!(
        "simplified: P={}, Q={}, R={}, sign={}",
        crate::parser::render_plain(&p_gauge),
        crate::parser::render_plain(&q_gauge),
        crate::parser::render_plain(&r_gauge),
        sign
    ));
    Ok(SimplifyResult {
        vector: ConservedVector {
            components,
            provenance,
        },
        gauge: GaugeTriple {
            p: p_gauge,
            q: q_gauge,
            r: r_gauge,
        },
        sign,
    })
}
