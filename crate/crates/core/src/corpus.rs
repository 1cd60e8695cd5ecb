//! Built-in corpus: the KP system, its generator families, and golden
//! cases pinning the engine's output to the expected closed forms.

pub mod sampling;

use crate::conslaw::{
    conserved_vector, gauge_transform, kp_closed_form, reduce_modulo, simplify_density,
    verify_divergence, ConservedVector, GaugeTriple,
};
use crate::context::Ctx;
use crate::error::{DiffAlgError, Result};
use crate::parser::{
    parse_expression, parse_generator, parse_named_exprs, parse_substitution, parse_system,
    render_plain, SystemSpec,
};
use crate::poly::{DiffPoly, SubstitutionRule};
use crate::selfadjoint::{check_selfadjointness, formal_lagrangian, FormalLagrangian};
use crate::symmetry::{
    builtin_kp_generator, characteristic, check_symmetry, Generator, KpGeneratorKind,
};

use serde::{Deserialize, Serialize};

/// Corpus sources, embedded so the suite runs from any working directory;
/// the files under `corpus/` are the authoritative copies.
pub mod files {
    pub const KP_PDE: &str = include_str!("../../../corpus/kp.pde");
    pub const KP_POTENTIAL_PDE: &str = include_str!("../../../corpus/kp_potential.pde");
    pub const LRT_PDE: &str = include_str!("../../../corpus/lrt.pde");
    pub const GEN_F: &str = include_str!("../../../corpus/generators/f.gen");
    pub const GEN_G: &str = include_str!("../../../corpus/generators/g.gen");
    pub const GEN_H: &str = include_str!("../../../corpus/generators/h.gen");
    pub const SCALAR_FORM: &str = include_str!("../../../corpus/golden/scalar_form.txt");
    pub const FORMAL_LAGRANGIAN: &str =
        include_str!("../../../corpus/golden/formal_lagrangian.txt");
    pub const ADJOINT_SYSTEM: &str = include_str!("../../../corpus/golden/adjoint_system.txt");
    pub const XF_CHARACTERISTICS: &str =
        include_str!("../../../corpus/golden/xf_characteristics.txt");
    pub const XF_DENSITY_REDUCED: &str =
        include_str!("../../../corpus/golden/xf_density_reduced.txt");
    pub const XF_GAUGE: &str = include_str!("../../../corpus/golden/xf_gauge.txt");
    pub const XF_DENSITY_SIMPLIFIED: &str =
        include_str!("../../../corpus/golden/xf_density_simplified.txt");
    pub const PROP1: &str = include_str!("../../../corpus/golden/prop1.txt");
    pub const PROP2: &str = include_str!("../../../corpus/golden/prop2.txt");
    pub const PROP3: &str = include_str!("../../../corpus/golden/prop3.txt");
    pub const DIVERGENCE_IDENTITY: &str =
        include_str!("../../../corpus/golden/divergence_identity.txt");
    pub const POTENTIAL_EQUATION: &str =
        include_str!("../../../corpus/golden/potential_equation.txt");
    pub const POTENTIAL_LAGRANGIAN: &str =
        include_str!("../../../corpus/golden/potential_lagrangian.txt");
}

fn parse_err(e: crate::parser::ParseError) -> DiffAlgError {
    DiffAlgError::Unsupported {
        detail: format!("corpus parse failure: {e}"),
    }
}

pub fn kp_system() -> SystemSpec {
    parse_system(files::KP_PDE).expect("built-in KP system parses")
}

pub fn kp_potential_system() -> SystemSpec {
    parse_system(files::KP_POTENTIAL_PDE).expect("built-in potential KP parses")
}

pub fn lrt_system() -> SystemSpec {
    parse_system(files::LRT_PDE).expect("built-in LRT system parses")
}

/// The corpus `.gen` file for a KP generator kind.
pub fn generator_source(kind: KpGeneratorKind) -> &'static str {
    match kind {
        KpGeneratorKind::F => files::GEN_F,
        KpGeneratorKind::G => files::GEN_G,
        KpGeneratorKind::H => files::GEN_H,
    }
}

/// Look up golden entries by name in a `name = expr;` file.
pub fn golden_entries(source: &str, ctx: &Ctx) -> Result<Vec<(String, DiffPoly)>> {
    parse_named_exprs(source, ctx).map_err(parse_err)
}

pub fn golden_entry(source: &str, name: &str, ctx: &Ctx) -> Result<DiffPoly> {
    golden_entries(source, ctx)?
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, p)| p)
        .ok_or_else(|| DiffAlgError::Unsupported {
            detail: format!("golden entry `{name}` missing"),
        })
}

/// JSON entry of a conserved-vector file: stable key order.
#[derive(Serialize, Deserialize)]
pub struct VectorEntryJson {
    pub component: String,
    pub expr: String,
    pub provenance: String,
}

pub fn vector_to_json(cv: &ConservedVector) -> String {
    let entries: Vec<VectorEntryJson> = cv
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| VectorEntryJson {
            component: format!("C{}", i + 1),
            expr: render_plain(c),
            provenance: format!(
                "{}{}{}",
                cv.provenance.generator.clone().unwrap_or_default(),
                cv.provenance
                    .substitution
                    .as_ref()
                    .map(|s| format!(" [{s}]"))
                    .unwrap_or_default(),
                if cv.provenance.notes.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", cv.provenance.notes.join("; "))
                }
            ),
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("vector serializes")
}

pub fn vector_from_json(text: &str, ctx: &Ctx) -> Result<ConservedVector> {
    let entries: Vec<VectorEntryJson> =
        serde_json::from_str(text).map_err(|e| DiffAlgError::Unsupported {
            detail: format!("vector JSON: {e}"),
        })?;
    let mut components = vec![DiffPoly::zero(ctx); 3];
    for entry in &entries {
        let idx = match entry.component.as_str() {
            "C1" => 0,
            "C2" => 1,
            "C3" => 2,
            other => {
                return Err(DiffAlgError::Unsupported {
                    detail: format!("unknown component `{other}`"),
                })
            }
        };
        components[idx] = parse_expression(&entry.expr, ctx).map_err(parse_err)?;
    }
    Ok(ConservedVector::new(components))
}

/// Full pipeline state for one built-in generator: system, generator and
/// formal Lagrangian share one convention.
pub struct KpPipeline {
    pub system: SystemSpec,
    pub generator: Generator,
    pub lagrangian: FormalLagrangian,
    pub substitution: SubstitutionRule,
    pub ctx: Ctx,
}

/// Assemble the KP pipeline for a generator kind with the quasi
/// self-adjointness substitution `v = u, z = w`.
pub fn kp_pipeline(kind: KpGeneratorKind) -> Result<KpPipeline> {
    let base = kp_system();
    let (generator, gctx) = builtin_kp_generator(kind, base.ctx())?;
    let system = base.into_context(&gctx)?;
    let lagrangian = formal_lagrangian(&system)?;
    let substitution =
        parse_substitution("v=u, z=w", lagrangian.ctx()).map_err(parse_err)?;
    Ok(KpPipeline {
        system,
        generator,
        lagrangian,
        substitution,
        ctx: gctx,
    })
}

/// Raw Eq.-(14) vector for a built-in generator, lowered back into the
/// generator convention (the adjoint variables are eliminated).
pub fn kp_raw_vector(kind: KpGeneratorKind) -> Result<(ConservedVector, KpPipeline)> {
    let pipe = kp_pipeline(kind)?;
    let cv = conserved_vector(&pipe.lagrangian, &pipe.generator, &pipe.substitution, false)?
        .into_context(&pipe.ctx)?;
    Ok((cv, pipe))
}

/// How a golden case compares computed output against the expected form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareMode {
    Exact,
    UpToSign,
    UpToSignAndGauge,
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub id: &'static str,
    pub mode: CompareMode,
    pub justification: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn ok(id: &'static str, mode: CompareMode, justification: &'static str) -> CaseResult {
    CaseResult {
        id,
        mode,
        justification,
        pass: true,
        detail: String::new(),
    }
}

fn fail(
    id: &'static str,
    mode: CompareMode,
    justification: &'static str,
    detail: String,
) -> CaseResult {
    CaseResult {
        id,
        mode,
        justification,
        pass: false,
        detail,
    }
}

fn expect_poly(
    id: &'static str,
    justification: &'static str,
    expected: &DiffPoly,
    got: &DiffPoly,
) -> CaseResult {
    if expected == got {
        ok(id, CompareMode::Exact, justification)
    } else {
        fail(
            id,
            CompareMode::Exact,
            justification,
            format!(
                "expected: {}\n     got: {}\n    diff: {}",
                render_plain(expected),
                render_plain(got),
                render_plain(&got.sub(expected))
            ),
        )
    }
}

fn expect_vector(
    id: &'static str,
    mode: CompareMode,
    justification: &'static str,
    expected: &[DiffPoly],
    got: &ConservedVector,
) -> CaseResult {
    let direct = got
        .components
        .iter()
        .zip(expected)
        .all(|(g, e)| g == e);
    let flipped = got
        .components
        .iter()
        .zip(expected)
        .all(|(g, e)| g.neg() == *e);
    let pass = match mode {
        CompareMode::Exact => direct,
        _ => direct || flipped,
    };
    if pass {
        let mut r = ok(id, mode, justification);
        if !direct {
            r.detail = "matched with overall sign -1".into();
        }
        r
    } else {
        let mut detail = String::new();
        for (i, (g, e)) in got.components.iter().zip(expected).enumerate() {
            if g != e {
                detail.push_str(&format!(
                    "C{}: expected {}\n    got      {}\n",
                    i + 1,
                    render_plain(e),
                    render_plain(g)
                ));
            }
        }
        fail(id, mode, justification, detail)
    }
}

/// Compare two vectors up to one overall sign and a trivial part: the
/// sign-normalized simplified densities must agree exactly and the aligned
/// difference must pass the divergence check.
pub fn gauge_equivalent(
    a: &ConservedVector,
    b: &ConservedVector,
    system: &SystemSpec,
) -> Result<(bool, String)> {
    let sa = simplify_density(a, system)?;
    let sb = simplify_density(b, system)?;
    if sa.vector.components[0] != sb.vector.components[0] {
        return Ok((
            false,
            format!(
                "densities differ after simplification: {} vs {}",
                render_plain(&sa.vector.components[0]),
                render_plain(&sb.vector.components[0])
            ),
        ));
    }
    // Align signs, then the difference must be conserved (trivially).
    let aligned = if sa.sign == sb.sign {
        a.clone()
    } else {
        a.neg()
    };
    let diff = aligned.sub(b);
    let report = verify_divergence(&diff, system)?;
    if report.pass {
        Ok((true, String::new()))
    } else {
        Ok((
            false,
            format!(
                "difference is not conserved; residual {}",
                render_plain(&report.residual)
            ),
        ))
    }
}

pub fn case_ids() -> Vec<&'static str> {
    vec![
        "scalar-form",
        "formal-lagrangian",
        "adjoint-system",
        "self-adjointness",
        "generator-files-match-builtins",
        "symmetry-f",
        "symmetry-g",
        "symmetry-h",
        "xf-characteristics",
        "closed-form-f",
        "closed-form-g",
        "closed-form-h",
        "xf-density-reduced",
        "xf-gauge-relation",
        "xf-simplify-matches-gauge",
        "prop1-paper-gauge",
        "prop2-simplify",
        "prop3-simplify",
        "prop1-divergence",
        "prop2-divergence",
        "prop3-divergence",
        "prop1-multipliers",
        "divergence-identity-exact",
        "prop2-closed-form-gauge-equivalent",
        "potential-euler",
    ]
}

/// Run one golden case by id.
pub fn run_case(id: &str) -> Result<CaseResult> {
    match id {
        "scalar-form" => {
            let sys = kp_system();
            let got = sys.equations[0]
                .expr
                .total_derivative(1)?
                .add(&sys.equations[1].expr.total_derivative(2)?);
            let expected = golden_entry(files::SCALAR_FORM, "scalar", sys.ctx())?;
            Ok(expect_poly(
                "scalar-form",
                "the first-order system reproduces the scalar form under D_x + D_y",
                &expected,
                &got,
            ))
        }
        "formal-lagrangian" => {
            let sys = kp_system();
            let lagr = formal_lagrangian(&sys)?;
            let expected =
                golden_entry(files::FORMAL_LAGRANGIAN, "L", lagr.ctx())?;
            let mut r = expect_poly(
                "formal-lagrangian",
                "adjoint variables times the equations, expanded to six terms",
                &expected,
                &lagr.lagrangian,
            );
            if r.pass && lagr.lagrangian.num_terms() != 6 {
                r = fail(
                    "formal-lagrangian",
                    CompareMode::Exact,
                    r.justification,
                    format!("expected 6 terms, got {}", lagr.lagrangian.num_terms()),
                );
            }
            Ok(r)
        }
        "adjoint-system" => {
            let sys = kp_system();
            let lagr = formal_lagrangian(&sys)?;
            let adj = crate::selfadjoint::adjoint_system(&lagr)?;
            let exp_u = golden_entry(files::ADJOINT_SYSTEM, "adjoint_u", lagr.ctx())?;
            let exp_w = golden_entry(files::ADJOINT_SYSTEM, "adjoint_w", lagr.ctx())?;
            let r1 = expect_poly(
                "adjoint-system",
                "variational derivatives, sign-oriented",
                &exp_u,
                &adj.oriented[0],
            );
            if !r1.pass {
                return Ok(r1);
            }
            Ok(expect_poly(
                "adjoint-system",
                "variational derivatives, sign-oriented",
                &exp_w,
                &adj.oriented[1],
            ))
        }
        "self-adjointness" => {
            let sys = kp_system();
            let lagr = formal_lagrangian(&sys)?;
            let rule = parse_substitution("v=u, z=w", lagr.ctx()).map_err(parse_err)?;
            let report = check_selfadjointness(&lagr, &rule)?;
            let j = "substituted adjoint equations coincide with the system";
            if !report.verdict {
                return Ok(fail(
                    "self-adjointness",
                    CompareMode::Exact,
                    j,
                    "verdict was no".into(),
                ));
            }
            for (i, s) in report.substituted.iter().enumerate() {
                let orig = &lagr.system.equations[i].expr;
                if s != orig {
                    return Ok(fail(
                        "self-adjointness",
                        CompareMode::Exact,
                        j,
                        format!(
                            "substituted equation {} is {} but the system has {}",
                            i + 1,
                            render_plain(s),
                            render_plain(orig)
                        ),
                    ));
                }
            }
            Ok(ok("self-adjointness", CompareMode::Exact, j))
        }
        "generator-files-match-builtins" => {
            let sys = kp_system();
            for kind in [KpGeneratorKind::F, KpGeneratorKind::G, KpGeneratorKind::H] {
                let (builtin, gctx) = builtin_kp_generator(kind, sys.ctx())?;
                let (parsed, pctx) =
                    parse_generator(generator_source(kind), sys.ctx(), &builtin.name)
                        .map_err(parse_err)?;
                let lifted = parsed.into_context(&gctx)?;
                if *pctx != *gctx || lifted != builtin {
                    return Ok(fail(
                        "generator-files-match-builtins",
                        CompareMode::Exact,
                        "corpus .gen files encode the built-in generators",
                        format!("mismatch for kind {:?}", kind),
                    ));
                }
            }
            Ok(ok(
                "generator-files-match-builtins",
                CompareMode::Exact,
                "corpus .gen files encode the built-in generators",
            ))
        }
        "symmetry-f" | "symmetry-g" | "symmetry-h" => {
            let kind = match id {
                "symmetry-f" => KpGeneratorKind::F,
                "symmetry-g" => KpGeneratorKind::G,
                _ => KpGeneratorKind::H,
            };
            let pipe = kp_pipeline(kind)?;
            let report = check_symmetry(&pipe.generator, &pipe.system)?;
            let leak: &'static str = match id {
                "symmetry-f" => "symmetry-f",
                "symmetry-g" => "symmetry-g",
                _ => "symmetry-h",
            };
            let j = "prolonged action reduces to zero modulo the system";
            if report.pass {
                Ok(ok(leak, CompareMode::Exact, j))
            } else {
                Ok(fail(
                    leak,
                    CompareMode::Exact,
                    j,
                    report
                        .residuals
                        .iter()
                        .map(render_plain)
                        .collect::<Vec<_>>()
                        .join("; "),
                ))
            }
        }
        "xf-characteristics" => {
            let pipe = kp_pipeline(KpGeneratorKind::F)?;
            let w = characteristic(&pipe.generator)?;
            let exp1 = golden_entry(files::XF_CHARACTERISTICS, "W1", &pipe.ctx)?;
            let exp2 = golden_entry(files::XF_CHARACTERISTICS, "W2", &pipe.ctx)?;
            let j = "characteristic of the time-reparametrization family";
            let r = expect_poly("xf-characteristics", j, &exp1, &w.w[0]);
            if !r.pass {
                return Ok(r);
            }
            Ok(expect_poly("xf-characteristics", j, &exp2, &w.w[1]))
        }
        "closed-form-f" | "closed-form-g" | "closed-form-h" => {
            let kind = match id {
                "closed-form-f" => KpGeneratorKind::F,
                "closed-form-g" => KpGeneratorKind::G,
                _ => KpGeneratorKind::H,
            };
            let leak: &'static str = match kind {
                KpGeneratorKind::F => "closed-form-f",
                KpGeneratorKind::G => "closed-form-g",
                KpGeneratorKind::H => "closed-form-h",
            };
            let (cv, pipe) = kp_raw_vector(kind)?;
            let closed = kp_closed_form(&characteristic(&pipe.generator)?)?;
            let j = "general assembly equals the KP specialization";
            for (a, b) in cv.components.iter().zip(&closed.components) {
                if a != b {
                    return Ok(fail(
                        leak,
                        CompareMode::Exact,
                        j,
                        format!(
                            "assembly: {}\nclosed:   {}",
                            render_plain(a),
                            render_plain(b)
                        ),
                    ));
                }
            }
            Ok(ok(leak, CompareMode::Exact, j))
        }
        "xf-density-reduced" => {
            let (cv, pipe) = kp_raw_vector(KpGeneratorKind::F)?;
            let red = reduce_modulo(&cv.components[0], &pipe.system)?.normal_form;
            let expected = golden_entry(files::XF_DENSITY_REDUCED, "C1", &pipe.ctx)?;
            Ok(expect_poly(
                "xf-density-reduced",
                "u W1 with the time derivative eliminated",
                &expected,
                &red,
            ))
        }
        "xf-gauge-relation" => {
            // Reduced density minus simplified density minus D_x P + D_y Q
            // vanishes modulo the system (the extraction uses equation 2).
            let pipe = kp_pipeline(KpGeneratorKind::F)?;
            let c18 = golden_entry(files::XF_DENSITY_REDUCED, "C1", &pipe.ctx)?;
            let c21 = golden_entry(files::XF_DENSITY_SIMPLIFIED, "C1", &pipe.ctx)?;
            let p = golden_entry(files::XF_GAUGE, "P", &pipe.ctx)?;
            let q = golden_entry(files::XF_GAUGE, "Q", &pipe.ctx)?;
            let resid = c18
                .sub(&c21)
                .sub(&p.total_derivative(1)?)
                .sub(&q.total_derivative(2)?);
            let red = reduce_modulo(&resid, &pipe.system)?.normal_form;
            let j = "total-derivative extraction of the density, modulo the system";
            if red.is_zero() {
                Ok(ok("xf-gauge-relation", CompareMode::Exact, j))
            } else {
                Ok(fail(
                    "xf-gauge-relation",
                    CompareMode::Exact,
                    j,
                    format!("residual {}", render_plain(&red)),
                ))
            }
        }
        "xf-simplify-matches-gauge" => {
            let (cv, pipe) = kp_raw_vector(KpGeneratorKind::F)?;
            let out = simplify_density(&cv, &pipe.system)?;
            let c21 = golden_entry(files::XF_DENSITY_SIMPLIFIED, "C1", &pipe.ctx)?;
            let p = golden_entry(files::XF_GAUGE, "P", &pipe.ctx)?;
            let q = golden_entry(files::XF_GAUGE, "Q", &pipe.ctx)?;
            let j = "automatic extraction reproduces the printed gauge";
            // The simplified density carries the recorded sign.
            let density = if out.sign == -1 {
                out.vector.components[0].neg()
            } else {
                out.vector.components[0].clone()
            };
            if density != c21 {
                return Ok(fail(
                    "xf-simplify-matches-gauge",
                    CompareMode::UpToSign,
                    j,
                    format!(
                        "density: expected {}, got {}",
                        render_plain(&c21),
                        render_plain(&density)
                    ),
                ));
            }
            if out.gauge.p != p || out.gauge.q != q {
                return Ok(fail(
                    "xf-simplify-matches-gauge",
                    CompareMode::UpToSign,
                    j,
                    format!(
                        "gauge mismatch\nP expected {}\nP got      {}\nQ expected {}\nQ got      {}",
                        render_plain(&p),
                        render_plain(&out.gauge.p),
                        render_plain(&q),
                        render_plain(&out.gauge.q)
                    ),
                ));
            }
            Ok(ok("xf-simplify-matches-gauge", CompareMode::UpToSign, j))
        }
        "prop1-paper-gauge" => {
            let (cv, pipe) = kp_raw_vector(KpGeneratorKind::F)?;
            let gauge = GaugeTriple {
                p: golden_entry(files::XF_GAUGE, "P", &pipe.ctx)?,
                q: golden_entry(files::XF_GAUGE, "Q", &pipe.ctx)?,
                r: golden_entry(files::XF_GAUGE, "R", &pipe.ctx)?,
            };
            let gauged = gauge_transform(&cv, &gauge)?;
            let reduced = gauged.reduce(&pipe.system)?;
            let expected: Vec<DiffPoly> = ["C1", "C2", "C3"]
                .iter()
                .map(|n| golden_entry(files::PROP1, n, &pipe.ctx))
                .collect::<Result<_>>()?;
            Ok(expect_vector(
                "prop1-paper-gauge",
                CompareMode::Exact,
                "explicit gauge applied to the assembled vector, then reduced",
                &expected,
                &reduced,
            ))
        }
        "prop2-simplify" | "prop3-simplify" => {
            let (kind, file, leak): (_, _, &'static str) = if id == "prop2-simplify" {
                (KpGeneratorKind::G, files::PROP2, "prop2-simplify")
            } else {
                (KpGeneratorKind::H, files::PROP3, "prop3-simplify")
            };
            let (cv, pipe) = kp_raw_vector(kind)?;
            let out = simplify_density(&cv, &pipe.system)?;
            let expected: Vec<DiffPoly> = ["C1", "C2", "C3"]
                .iter()
                .map(|n| golden_entry(file, n, &pipe.ctx))
                .collect::<Result<_>>()?;
            let mut r = expect_vector(
                leak,
                CompareMode::UpToSign,
                "automatic simplification, one overall sign free",
                &expected,
                &out.vector,
            );
            if r.pass && out.sign == -1 && r.detail.is_empty() {
                r.detail = "sign -1 recorded by simplification".into();
            }
            Ok(r)
        }
        "prop1-divergence" | "prop2-divergence" | "prop3-divergence" => {
            let (file, leak): (_, &'static str) = match id {
                "prop1-divergence" => (files::PROP1, "prop1-divergence"),
                "prop2-divergence" => (files::PROP2, "prop2-divergence"),
                _ => (files::PROP3, "prop3-divergence"),
            };
            let kind = match id {
                "prop1-divergence" => KpGeneratorKind::F,
                "prop2-divergence" => KpGeneratorKind::G,
                _ => KpGeneratorKind::H,
            };
            let pipe = kp_pipeline(kind)?;
            let cv = ConservedVector::new(
                ["C1", "C2", "C3"]
                    .iter()
                    .map(|n| golden_entry(file, n, &pipe.ctx))
                    .collect::<Result<_>>()?,
            );
            let report = verify_divergence(&cv, &pipe.system)?;
            let j = "verbatim vector satisfies the divergence identity";
            if report.pass && report.rebuild_exact {
                Ok(ok(leak, CompareMode::Exact, j))
            } else {
                Ok(fail(
                    leak,
                    CompareMode::Exact,
                    j,
                    format!("residual {}", render_plain(&report.residual)),
                ))
            }
        }
        "prop1-multipliers" => {
            let pipe = kp_pipeline(KpGeneratorKind::F)?;
            let cv = ConservedVector::new(
                ["C1", "C2", "C3"]
                    .iter()
                    .map(|n| golden_entry(files::PROP1, n, &pipe.ctx))
                    .collect::<Result<_>>()?,
            );
            let report = verify_divergence(&cv, &pipe.system)?;
            let j = "reduction trace recovers the displayed multipliers";
            let Some(multipliers) = report.multipliers else {
                return Ok(fail(
                    "prop1-multipliers",
                    CompareMode::Exact,
                    j,
                    "trace involved shifted substitutions".into(),
                ));
            };
            let l1 = golden_entry(files::DIVERGENCE_IDENTITY, "lambda1", &pipe.ctx)?;
            let l2 = golden_entry(files::DIVERGENCE_IDENTITY, "lambda2", &pipe.ctx)?;
            let r = expect_poly("prop1-multipliers", j, &l1, &multipliers[0]);
            if !r.pass {
                return Ok(r);
            }
            Ok(expect_poly("prop1-multipliers", j, &l2, &multipliers[1]))
        }
        "divergence-identity-exact" => {
            let pipe = kp_pipeline(KpGeneratorKind::F)?;
            let cv = ConservedVector::new(
                ["C1", "C2", "C3"]
                    .iter()
                    .map(|n| golden_entry(files::PROP1, n, &pipe.ctx))
                    .collect::<Result<_>>()?,
            );
            let lhs = cv.divergence()?;
            let rhs = golden_entry(files::DIVERGENCE_IDENTITY, "rhs", &pipe.ctx)?;
            Ok(expect_poly(
                "divergence-identity-exact",
                "expanded divergence equals the multiplier form as a polynomial",
                &rhs,
                &lhs,
            ))
        }
        "prop2-closed-form-gauge-equivalent" => {
            let (cv, pipe) = kp_raw_vector(KpGeneratorKind::G)?;
            let expected = ConservedVector::new(
                ["C1", "C2", "C3"]
                    .iter()
                    .map(|n| golden_entry(files::PROP2, n, &pipe.ctx))
                    .collect::<Result<_>>()?,
            );
            let (pass, detail) = gauge_equivalent(&cv, &expected, &pipe.system)?;
            let j = "raw closed form is the printed vector up to sign and gauge";
            if pass {
                Ok(ok(
                    "prop2-closed-form-gauge-equivalent",
                    CompareMode::UpToSignAndGauge,
                    j,
                ))
            } else {
                Ok(fail(
                    "prop2-closed-form-gauge-equivalent",
                    CompareMode::UpToSignAndGauge,
                    j,
                    detail,
                ))
            }
        }
        "potential-euler" => {
            let sys = kp_potential_system();
            let ctx = sys.ctx();
            let lagr = golden_entry(files::POTENTIAL_LAGRANGIAN, "L", ctx)?;
            let expected = golden_entry(files::POTENTIAL_EQUATION, "pkp", ctx)?;
            let got = lagr.euler(0, None)?;
            Ok(expect_poly(
                "potential-euler",
                "variational derivative of the potential Lagrangian",
                &expected,
                &got,
            ))
        }
        other => Err(DiffAlgError::Unsupported {
            detail: format!("unknown golden case `{other}`"),
        }),
    }
}

/// Run the whole suite in declaration order.
pub fn run_all() -> Result<Vec<CaseResult>> {
    case_ids().into_iter().map(run_case).collect()
}
