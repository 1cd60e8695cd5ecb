//! `conslaw-kit`: construct and verify conservation laws of PDE systems
//! from the command line, and cross-check them on desk-scale simulations.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 usage or parse
//! error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use conslaw_core::conslaw::{
    conserved_vector, gauge_transform, simplify_density, verify_divergence, ConservedVector,
    GaugeTriple,
};
use conslaw_core::corpus;
use conslaw_core::parser::{
    parse_generator, parse_named_exprs, parse_substitution, parse_system, render_plain,
    RenderFormat, SystemSpec,
};
use conslaw_core::poly::{DiffPoly, SubstitutionRule};
use conslaw_core::selfadjoint::{adjoint_system, check_selfadjointness, formal_lagrangian};
use conslaw_core::symmetry::{builtin_kp_generator, check_symmetry, Generator, KpGeneratorKind};
use conslaw_core::Ctx;

use conslaw_numeric::diagnostics::{conservation_drift, FuncParams};
use conslaw_numeric::{solve_kp, SimConfig};

#[derive(Parser)]
#[command(
    name = "conslaw-kit",
    version,
    about = "Conservation-law construction and verification for PDE systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the adjoint system of a PDE file.
    Adjoint {
        system: PathBuf,
        /// Also print the raw variational derivatives before orientation.
        #[arg(long)]
        raw: bool,
        #[arg(long, default_value = "plain")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide nonlinear self-adjointness under a substitution.
    Selfcheck {
        system: PathBuf,
        /// Substitution of the adjoint variables, e.g. "v=u,z=w".
        #[arg(long)]
        subst: String,
        #[arg(long, default_value = "plain")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a point-symmetry generator against a system.
    Symcheck {
        system: PathBuf,
        /// `builtin:f|g|h` or a path to a `.gen` file.
        #[arg(long)]
        gen: String,
        #[arg(long, default_value = "plain")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct the conserved vector of a symmetry.
    Conserve {
        system: PathBuf,
        /// `builtin:f|g|h` or a path to a `.gen` file.
        #[arg(long)]
        gen: String,
        /// Adjoint-variable substitution (default: each adjoint variable
        /// maps to the dependent variable of the same position).
        #[arg(long)]
        subst: Option<String>,
        /// Reduce the components modulo the system.
        #[arg(long)]
        reduce: bool,
        /// Reduce, strip trivial parts into a gauge, normalize the sign.
        #[arg(long)]
        simplify: bool,
        /// Apply an explicit gauge file with entries P, Q, R, then reduce.
        #[arg(long)]
        gauge: Option<PathBuf>,
        /// Keep the xi^i L term of the construction formula.
        #[arg(long = "keep-xiL")]
        keep_xi_l: bool,
        #[arg(long, default_value = "plain")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the divergence identity for a conserved vector from a JSON file.
    Verify {
        system: PathBuf,
        #[arg(long)]
        vector: PathBuf,
        /// Arbitrary-function families to declare while parsing the vector,
        /// e.g. "f,g" (argument: the independent variable named t when
        /// present, otherwise the first one). Taken names are skipped.
        #[arg(long, default_value = "f,g,h")]
        funcs: String,
        #[arg(long, default_value = "plain")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the KP system and track conserved integrals.
    Simulate {
        /// TOML configuration; defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated built-in densities: `mass`, `l2`.
        #[arg(long, default_value = "mass,l2")]
        densities: String,
        /// CSV output path (columns: time, one integral per density).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fail (exit 1) when any relative drift exceeds this bound.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the built-in golden suite.
    Golden {},
}

/// Error carrying the process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn failure(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<conslaw_core::DiffAlgError> for CliError {
    fn from(e: conslaw_core::DiffAlgError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<conslaw_numeric::SolverError> for CliError {
    fn from(e: conslaw_numeric::SolverError) -> Self {
        match e {
            conslaw_numeric::SolverError::BlowUp { .. } => CliError::failure(e.to_string()),
            other => CliError::usage(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> CliResult<SystemSpec> {
    let text = read_file(path)?;
    parse_system(&text).map_err(|e| CliError::usage(format!("{}:{e}", path.display())))
}

fn parse_format(name: &str) -> CliResult<RenderFormat> {
    RenderFormat::from_name(name)
        .ok_or_else(|| CliError::usage(format!("unknown format `{name}`")))
}

/// Resolve `--gen`: a builtin name or a `.gen` file; returns the generator
/// and the system lifted into the generator's convention.
fn resolve_generator(
    spec: &str,
    system: &SystemSpec,
) -> CliResult<(Generator, SystemSpec, Ctx)> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let kind = KpGeneratorKind::from_name(name)
            .ok_or_else(|| CliError::usage(format!("unknown builtin generator `{name}`")))?;
        let (gen, ctx) = builtin_kp_generator(kind, system.ctx())?;
        let lifted = system.into_context(&ctx)?;
        return Ok((gen, lifted, ctx));
    }
    let path = Path::new(spec);
    let text = read_file(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "generator".into());
    let (gen, ctx) = parse_generator(&text, system.ctx(), &name)
        .map_err(|e| CliError::usage(format!("{}:{e}", path.display())))?;
    let lifted = system.into_context(&ctx)?;
    Ok((gen, lifted, ctx))
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display()))),
    }
}

fn render_poly(p: &DiffPoly, format: RenderFormat) -> String {
    conslaw_core::parser::render(p, format)
}

#[derive(Serialize)]
struct AdjointJson {
    variable: String,
    raw: String,
    oriented: String,
}

fn cmd_adjoint(
    system: &Path,
    raw: bool,
    format: &str,
    out: &Option<PathBuf>,
) -> CliResult<u8> {
    let format = parse_format(format)?;
    let sys = load_system(system)?;
    let lagr = formal_lagrangian(&sys)?;
    let adj = adjoint_system(&lagr)?;
    let ctx = lagr.ctx();
    let text = match format {
        RenderFormat::Json => {
            let rows: Vec<AdjointJson> = (0..adj.oriented.len())
                .map(|i| AdjointJson {
                    variable: ctx.dep_name(i).to_string(),
                    raw: render_plain(&adj.raw[i]),
                    oriented: render_plain(&adj.oriented[i]),
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializes")
        }
        _ => {
            let mut s = String::new();
            for i in 0..adj.oriented.len() {
                if raw {
                    let _ = writeln!(
                        s,
                        "delta L / delta {} = {}",
                        ctx.dep_name(i),
                        render_poly(&adj.raw[i], format)
                    );
                }
                let _ = writeln!(
                    s,
                    "adjoint {}: {} = 0",
                    ctx.dep_name(i),
                    render_poly(&adj.oriented[i], format)
                );
            }
            s.trim_end().to_string()
        }
    };
    emit(out, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct SelfcheckEquationJson {
    adjoint: String,
    substituted: String,
    residual: String,
}

#[derive(Serialize)]
struct SelfcheckJson {
    substitution: String,
    verdict: bool,
    equations: Vec<SelfcheckEquationJson>,
}

fn cmd_selfcheck(
    system: &Path,
    subst: &str,
    format: &str,
    out: &Option<PathBuf>,
) -> CliResult<u8> {
    let format = parse_format(format)?;
    let sys = load_system(system)?;
    let lagr = formal_lagrangian(&sys)?;
    let rule = parse_substitution(subst, lagr.ctx())
        .map_err(|e| CliError::usage(format!("--subst: {e}")))?;
    let report = check_selfadjointness(&lagr, &rule)?;
    let text = match format {
        RenderFormat::Json => serde_json::to_string_pretty(&SelfcheckJson {
            substitution: report.substitution.clone(),
            verdict: report.verdict,
            equations: (0..report.substituted.len())
                .map(|i| SelfcheckEquationJson {
                    adjoint: render_plain(&report.adjoint_oriented[i]),
                    substituted: render_plain(&report.substituted[i]),
                    residual: render_plain(&report.residuals[i]),
                })
                .collect(),
        })
        .expect("serializes"),
        _ => {
            let mut s = String::new();
            for i in 0..report.substituted.len() {
                let _ = writeln!(
                    s,
                    "adjoint {}: {} = 0",
                    i + 1,
                    render_poly(&report.adjoint_oriented[i], format)
                );
                let _ = writeln!(
                    s,
                    "  substituted: {} = 0",
                    render_poly(&report.substituted[i], format)
                );
                let _ = writeln!(
                    s,
                    "  residual:    {}",
                    render_poly(&report.residuals[i], format)
                );
            }
            let _ = writeln!(
                s,
                "self-adjoint under {}: {}",
                report.substitution,
                if report.verdict { "yes" } else { "no" }
            );
            s.trim_end().to_string()
        }
    };
    emit(out, &text)?;
    Ok(if report.verdict { 0 } else { 1 })
}

#[derive(Serialize)]
struct SymcheckJson {
    generator: String,
    pass: bool,
    residuals: Vec<String>,
}

fn cmd_symcheck(
    system: &Path,
    gen: &str,
    format: &str,
    out: &Option<PathBuf>,
) -> CliResult<u8> {
    let format = parse_format(format)?;
    let sys = load_system(system)?;
    let (gen, sys, _ctx) = resolve_generator(gen, &sys)?;
    let report = check_symmetry(&gen, &sys)?;
    let text = match format {
        RenderFormat::Json => serde_json::to_string_pretty(&SymcheckJson {
            generator: report.generator.clone(),
            pass: report.pass,
            residuals: report.residuals.iter().map(render_plain).collect(),
        })
        .expect("serializes"),
        _ => {
            let mut s = String::new();
            for (i, r) in report.residuals.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "equation {}: residual {}",
                    i + 1,
                    render_poly(r, format)
                );
            }
            let _ = writeln!(
                s,
                "{} is {}a symmetry",
                report.generator,
                if report.pass { "" } else { "NOT " }
            );
            s.trim_end().to_string()
        }
    };
    emit(out, &text)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn default_substitution(
    lagr: &conslaw_core::selfadjoint::FormalLagrangian,
) -> CliResult<SubstitutionRule> {
    let ctx = lagr.ctx();
    if lagr.adjoint_deps.len() > lagr.n_original_deps {
        return Err(CliError::usage(
            "no default substitution: pass --subst mapping every adjoint variable",
        ));
    }
    let pairs = lagr
        .adjoint_deps
        .iter()
        .enumerate()
        .map(|(i, &dep)| {
            DiffPoly::jet(ctx, i, conslaw_core::MultiIndex::zero(ctx.n_indep()))
                .map(|p| (dep, p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SubstitutionRule::new(pairs)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_conserve(
    system: &Path,
    gen: &str,
    subst: &Option<String>,
    reduce: bool,
    simplify: bool,
    gauge: &Option<PathBuf>,
    keep_xi_l: bool,
    format: &str,
    out: &Option<PathBuf>,
) -> CliResult<u8> {
    let format = parse_format(format)?;
    let sys = load_system(system)?;
    let (gen, sys, gctx) = resolve_generator(gen, &sys)?;
    let lagr = formal_lagrangian(&sys)?;
    let rule = match subst {
        Some(s) => parse_substitution(s, lagr.ctx())
            .map_err(|e| CliError::usage(format!("--subst: {e}")))?,
        None => default_substitution(&lagr)?,
    };
    let mut cv = conserved_vector(&lagr, &gen, &rule, keep_xi_l)?.into_context(&gctx)?;
    let mut extra = String::new();
    if let Some(gauge_path) = gauge {
        let entries = parse_named_exprs(&read_file(gauge_path)?, &gctx)
            .map_err(|e| CliError::usage(format!("{}:{e}", gauge_path.display())))?;
        let find = |name: &str| {
            entries
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, p)| p.clone())
                .unwrap_or_else(|| DiffPoly::zero(&gctx))
        };
        let triple = GaugeTriple {
            p: find("P"),
            q: find("Q"),
            r: find("R"),
        };
        cv = gauge_transform(&cv, &triple)?.reduce(&sys)?;
    }
    if simplify {
        let result = simplify_density(&cv, &sys)?;
        let _ = writeln!(extra, "gauge P = {}", render_plain(&result.gauge.p));
        let _ = writeln!(extra, "gauge Q = {}", render_plain(&result.gauge.q));
        let _ = writeln!(extra, "gauge R = {}", render_plain(&result.gauge.r));
        let _ = writeln!(extra, "sign applied: {}", result.sign);
        cv = result.vector;
    } else if reduce {
        cv = cv.reduce(&sys)?;
    }
    let text = match format {
        RenderFormat::Json => corpus::vector_to_json(&cv),
        _ => {
            let mut s = String::new();
            for (i, c) in cv.components.iter().enumerate() {
                let _ = writeln!(s, "C{} = {}", i + 1, render_poly(c, format));
            }
            s.push_str(&extra);
            s.trim_end().to_string()
        }
    };
    emit(out, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyJson {
    pass: bool,
    residual: String,
    rebuild_exact: bool,
    multipliers: Option<Vec<String>>,
}

fn cmd_verify(
    system: &Path,
    vector: &Path,
    funcs: &str,
    format: &str,
    out: &Option<PathBuf>,
) -> CliResult<u8> {
    let format = parse_format(format)?;
    let sys = load_system(system)?;
    // Extend the convention with the requested arbitrary-function families
    // so the vector file may reference them.
    let mut conv = (**sys.ctx()).clone();
    let arg = match sys.ctx().indep_index("t") {
        Some(i) => sys.ctx().indep_name(i).to_string(),
        None => sys.ctx().indep_name(0).to_string(),
    };
    for name in funcs.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if !conv.has_symbol(name) {
            conv = conv
                .with_func(name, &arg)
                .map_err(|e| CliError::usage(e.to_string()))?;
        }
    }
    let ctx = conv.into_ctx();
    let sys = sys.into_context(&ctx)?;
    let cv = corpus::vector_from_json(&read_file(vector)?, &ctx)?;
    let report = verify_divergence(&cv, &sys)?;
    let text = match format {
        RenderFormat::Json => serde_json::to_string_pretty(&VerifyJson {
            pass: report.pass,
            residual: render_plain(&report.residual),
            rebuild_exact: report.rebuild_exact,
            multipliers: report
                .multipliers
                .as_ref()
                .map(|m| m.iter().map(render_plain).collect()),
        })
        .expect("serializes"),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "residual: {}", render_poly(&report.residual, format));
            if let Some(m) = &report.multipliers {
                for (i, lam) in m.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "multiplier of equation {}: {}",
                        i + 1,
                        render_poly(lam, format)
                    );
                }
            }
            let _ = writeln!(
                s,
                "divergence identity: {}",
                if report.pass { "PASS" } else { "FAIL" }
            );
            s.trim_end().to_string()
        }
    };
    emit(out, &text)?;
    Ok(if report.pass { 0 } else { 1 })
}

/// Built-in densities for the simulation suite, derived from the corpus
/// vectors by fixing the arbitrary function to t (its first derivative is
/// one and every explicit-coordinate term vanishes).
fn builtin_density(name: &str) -> CliResult<ConservedVector> {
    let (kind, file) = match name {
        "mass" => (KpGeneratorKind::H, corpus::files::PROP3),
        "l2" => (KpGeneratorKind::F, corpus::files::PROP1),
        other => {
            return Err(CliError::usage(format!(
                "unknown density `{other}` (expected mass or l2)"
            )))
        }
    };
    let pipe = corpus::kp_pipeline(kind)?;
    let fidx = pipe
        .ctx
        .func_index(kind.func_name())
        .expect("pipeline declares the family");
    let linear_t = [
        conslaw_core::poly::rat_int(0),
        conslaw_core::poly::rat_int(1),
    ];
    let components = ["C1", "C2", "C3"]
        .iter()
        .map(|n| {
            corpus::golden_entry(file, n, &pipe.ctx).map(|p| p.substitute_func(fidx, &linear_t))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConservedVector::new(components))
}

fn cmd_simulate(
    config: &Option<PathBuf>,
    densities: &str,
    out: &Option<PathBuf>,
    tol: Option<f64>,
) -> CliResult<u8> {
    let cfg = match config {
        Some(path) => SimConfig::from_toml(&read_file(path)?)?,
        None => SimConfig::default(),
    };
    let grid = cfg.grid()?;
    let solver_cfg = cfg.solver_config()?;
    let initial = cfg.initial_field(&grid)?;
    let trajectory = solve_kp(&grid, &solver_cfg, &initial)?;

    let names: Vec<&str> = densities
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if names.is_empty() {
        return Err(CliError::usage("no densities requested"));
    }
    let params = FuncParams::new();
    let mut series = Vec::new();
    let mut drifts = Vec::new();
    for name in &names {
        let cv = builtin_density(name)?;
        let (s, drift) = conservation_drift(&grid, &trajectory, &cv, &params)?;
        series.push(s);
        drifts.push(drift);
    }

    let mut csv = String::from("time");
    for name in &names {
        let _ = write!(csv, ",{name}");
    }
    csv.push('\n');
    for (k, t) in series[0].times.iter().enumerate() {
        let _ = write!(csv, "{t:.6}");
        for s in &series {
            let _ = write!(csv, ",{:.16e}", s.values[k]);
        }
        csv.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, &csv)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }

    let mut code = 0u8;
    for (name, drift) in names.iter().zip(&drifts) {
        let verdict = match tol {
            Some(bound) if *drift > bound => {
                code = 1;
                " EXCEEDS BOUND"
            }
            _ => "",
        };
        println!("relative drift of {name}: {drift:.3e}{verdict}");
    }
    Ok(code)
}

fn cmd_golden() -> CliResult<u8> {
    let results = corpus::run_all()?;
    let mut failed = 0;
    for r in &results {
        println!(
            "{} [{}] {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.justification
        );
        if !r.pass {
            failed += 1;
            for line in r.detail.lines() {
                println!("      {line}");
            }
        } else if !r.detail.is_empty() {
            println!("      note: {}", r.detail);
        }
    }
    println!(
        "golden suite: {} of {} passed",
        results.len() - failed,
        results.len()
    );
    Ok(if failed == 0 { 0 } else { 1 })
}

fn run(cli: Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Adjoint {
            system,
            raw,
            format,
            out,
        } => cmd_adjoint(system, *raw, format, out),
        Command::Selfcheck {
            system,
            subst,
            format,
            out,
        } => cmd_selfcheck(system, subst, format, out),
        Command::Symcheck {
            system,
            gen,
            format,
            out,
        } => cmd_symcheck(system, gen, format, out),
        Command::Conserve {
            system,
            gen,
            subst,
            reduce,
            simplify,
            gauge,
            keep_xi_l,
            format,
            out,
        } => cmd_conserve(
            system, gen, subst, *reduce, *simplify, gauge, *keep_xi_l, format, out,
        ),
        Command::Verify {
            system,
            vector,
            funcs,
            format,
            out,
        } => cmd_verify(system, vector, funcs, format, out),
        Command::Simulate {
            config,
            densities,
            out,
            tol,
        } => cmd_simulate(config, densities, out, *tol),
        Command::Golden {} => cmd_golden(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
