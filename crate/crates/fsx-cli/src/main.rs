//! `fsx` — command-line front end for the function-space calculus engine.
//!
//! Exit codes: 0 success / certified PASS, 1 evaluation error, 2 malformed
//! input (expression, JSON, or arguments), 3 a rule hypothesis gate failed,
//! 4 a verification check did not certify.

use clap::{Parser, Subcommand, ValueEnum};
use fsx_core::algebra::{classify, fmt_num, simplify, Domain, RuleCtx, SpaceDescriptor, SpaceExpr};
use fsx_core::expr::{descriptor_to_json, expr_to_json, parse_expr, print_expr};
use fsx_core::factorize::{explicit_sym_factorize, lp_base_split, numeric_product, sqrt_split};
use fsx_core::norms::{norm, NumericSpace, Weight};
use fsx_core::operators::{hardy, hardy_dual};
use fsx_core::stepfn::{refine_grid, resample, StepFunction};
use fsx_core::verify::{parse_scenarios, registry, run_scenario, ScenarioSpec, Status};
use fsx_core::{Error, Result};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fsx", version, about = "Symbolic and numeric calculus for quasi-normed function spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Transform {
    None,
    Rearrange,
    Prefix,
    Suffix,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite a space expression to fixed point and print the result.
    Simplify {
        /// Expression in the space grammar, e.g. "M(Ces(3), Ces(2))".
        expr: String,
        /// Underlying interval: "0inf" for (0,inf), "01" for (0,1).
        #[arg(long, default_value = "0inf")]
        domain: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Report nontriviality / quasi-norm / normability for a space.
    Classify {
        expr: String,
        #[arg(long, default_value = "0inf")]
        domain: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate the quasi-norm of a step function in a space.
    Norm {
        /// Space expression; must simplify to a numerically evaluable space.
        #[arg(long)]
        space: String,
        /// Step function as JSON: {"L": number|"inf", "breaks": [...], "vals": [...]}.
        #[arg(long = "fn", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value = "0inf")]
        domain: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Factorize a step function through the symmetrizations of two spaces.
    Factorize {
        /// First factor space.
        #[arg(long)]
        left: String,
        /// Second factor space.
        #[arg(long)]
        right: String,
        #[arg(long = "fn", value_name = "FILE")]
        input: PathBuf,
        /// Smoothing root r of the prefix/suffix transform chain.
        #[arg(long, default_value_t = 1.0)]
        root: f64,
        /// Resampling cells per piece for the smoothed factor.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Reject the factorization when the reconstruction residual exceeds this.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the full JSON result here in addition to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run verification scenarios from the registry.
    Verify {
        /// Scenario ids; see `fsx verify --list`.
        ids: Vec<String>,
        /// Run every registered scenario.
        #[arg(long)]
        all: bool,
        /// List registered scenario ids and descriptions.
        #[arg(long)]
        list: bool,
        /// Load scenarios from a JSON file instead of the built-in registry.
        #[arg(long, value_name = "FILE")]
        registry: Option<PathBuf>,
        /// Override the bank seed of the selected scenarios.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON reports here in addition to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Tabulate a step function, optionally through a transform, as CSV.
    EmitCsv {
        #[arg(long = "fn", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Transform::None)]
        transform: Transform,
        /// Root r for the prefix/suffix transforms.
        #[arg(long, default_value_t = 1.0)]
        root: f64,
        /// Resampling cells per piece for transformed output.
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Simplify { expr, domain, format } => cmd_simplify(&expr, &domain, format),
        Cmd::Classify { expr, domain, format } => cmd_classify(&expr, &domain, format),
        Cmd::Norm { space, input, domain, format } => cmd_norm(&space, &input, &domain, format),
        Cmd::Factorize { left, right, input, root, grid, tol, out, format } => {
            cmd_factorize(&left, &right, &input, root, grid, tol, out.as_deref(), format)
        }
        Cmd::Verify { ids, all, list, registry, seed, out, format } => {
            cmd_verify(&ids, all, list, registry.as_deref(), seed, out.as_deref(), format)
        }
        Cmd::EmitCsv { input, transform, root, grid, out, format } => {
            cmd_emit_csv(&input, transform, root, grid, out.as_deref(), format)
        }
    }
}

fn parse_domain(s: &str) -> Result<Domain> {
    match s {
        "0inf" | "halfline" => Ok(Domain::HalfLine),
        "01" | "unit" => Ok(Domain::Unit),
        other => Err(Error::Parse {
            at: 0,
            msg: format!("unknown domain '{other}' (expected 0inf or 01)"),
        }),
    }
}

fn text_only(format: Format, cmd: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(Error::Parse {
            at: 0,
            msg: format!("csv output is not available for {cmd}; use text or json"),
        });
    }
    Ok(())
}

fn read_fn(path: &Path) -> Result<StepFunction> {
    let src = std::fs::read_to_string(path)?;
    StepFunction::from_json(&src)
}

fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else {
        json!("inf")
    }
}

fn cmd_simplify(expr: &str, domain: &str, format: Format) -> Result<u8> {
    text_only(format, "simplify")?;
    let ctx = RuleCtx { domain: parse_domain(domain)?, ..RuleCtx::default() };
    let parsed = parse_expr(expr)?;
    let (result, log) = simplify(&parsed, ctx);
    match format {
        Format::Text => println!("{}", print_expr(&result)),
        Format::Json => {
            let steps: Vec<Value> = log
                .iter()
                .map(|l| json!({ "rule": l.rule, "statement": l.statement }))
                .collect();
            println!(
                "{}",
                json!({
                    "input": print_expr(&parsed),
                    "simplified": print_expr(&result),
                    "resolved": result.as_leaf().is_some(),
                    "ast": expr_to_json(&result),
                    "log": steps,
                })
            );
        }
        Format::Csv => unreachable!(),
    }
    Ok(0)
}

/// Simplify an expression and insist on a single concrete space.
fn resolve_leaf(expr: &str, domain: Domain) -> Result<SpaceDescriptor> {
    let ctx = RuleCtx { domain, ..RuleCtx::default() };
    let parsed = parse_expr(expr)?;
    let (result, _) = simplify(&parsed, ctx);
    match result {
        SpaceExpr::Leaf(d) => Ok(d),
        other => Err(Error::GateFailed(format!(
            "'{expr}' does not resolve to a single space (stopped at '{}')",
            print_expr(&other)
        ))),
    }
}

fn cmd_classify(expr: &str, domain: &str, format: Format) -> Result<u8> {
    text_only(format, "classify")?;
    let desc = resolve_leaf(expr, parse_domain(domain)?)?;
    let report = classify(&desc);
    match format {
        Format::Text => {
            println!("space:        {desc}");
            println!("nontrivial:   {}", report.nontrivial);
            println!("quasi-normed: {}", report.quasi_normed);
            println!("normable:     {}", report.normable);
            for n in &report.notes {
                println!("note:         {n}");
            }
        }
        Format::Json => println!(
            "{}",
            json!({
                "space": descriptor_to_json(&desc),
                "text": desc.to_string(),
                "nontrivial": report.nontrivial.to_string(),
                "quasi_normed": report.quasi_normed.to_string(),
                "normable": report.normable.to_string(),
                "notes": report.notes,
            })
        ),
        Format::Csv => unreachable!(),
    }
    Ok(0)
}

/// Numeric realization of a resolved descriptor.
fn numeric_space(desc: &SpaceDescriptor) -> Result<NumericSpace> {
    desc.to_numeric().ok_or_else(|| {
        Error::UnsupportedFamily(format!("'{desc}' has no numeric norm realization"))
    })
}

fn cmd_norm(space: &str, input: &Path, domain: &str, format: Format) -> Result<u8> {
    text_only(format, "norm")?;
    let desc = resolve_leaf(space, parse_domain(domain)?)?;
    let ns = numeric_space(&desc)?;
    let x = read_fn(input)?;
    let value = norm(&ns, &x)?;
    match format {
        Format::Text => println!("{}", fmt_num(value)),
        Format::Json => println!(
            "{}",
            json!({ "space": desc.to_string(), "norm": json_num(value) })
        ),
        Format::Csv => unreachable!(),
    }
    Ok(0)
}

fn power_of(w: &Weight) -> Option<(f64, f64)> {
    w.as_power()
}

#[allow(clippy::too_many_arguments)]
fn cmd_factorize(
    left: &str,
    right: &str,
    input: &Path,
    root: f64,
    grid: usize,
    tol: Option<f64>,
    out: Option<&Path>,
    format: Format,
) -> Result<u8> {
    text_only(format, "factorize")?;
    let e_desc = resolve_leaf(left, Domain::HalfLine)?;
    let f_desc = resolve_leaf(right, Domain::HalfLine)?;
    let e = numeric_space(&e_desc)?;
    let f = numeric_space(&f_desc)?;
    let x = read_fn(input)?;

    // prefer the exact weighted power split when the product space has a
    // closed form; otherwise fall back to the symmetric square-root split
    let split: Box<dyn Fn(&StepFunction) -> Result<(StepFunction, StepFunction)>> =
        match (numeric_product(&e, &f), &e, &f) {
            (
                Some(NumericSpace::WeightedLebesgue { p: pg, weight: wg }),
                NumericSpace::WeightedLebesgue { p: pe, weight: we },
                NumericSpace::WeightedLebesgue { p: pf, weight: wf },
            ) if pg.is_finite()
                && power_of(&wg).is_some()
                && power_of(we).is_some()
                && power_of(wf).is_some() =>
            {
                Box::new(lp_base_split(pg, *pe, *pf, wg, we.clone(), wf.clone()))
            }
            _ => Box::new(sqrt_split),
        };
    let fac = explicit_sym_factorize(&x, &e, &f, root, split.as_ref(), grid.max(1))?;

    let report = json!({
        "left": e_desc.to_string(),
        "right": f_desc.to_string(),
        "g": fac.g,
        "h": fac.h,
        "product_residual": json_num(fac.product_residual),
        "norm_product": json_num(fac.norm_product),
        "target_norm": json_num(fac.target_norm),
    });
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    match format {
        Format::Text => {
            println!("g pieces:         {}", fac.g.piece_count());
            println!("h pieces:         {}", fac.h.piece_count());
            println!("product residual: {}", fmt_num(fac.product_residual));
            println!("norm product:     {}", fmt_num(fac.norm_product));
            println!("target norm:      {}", fmt_num(fac.target_norm));
        }
        Format::Json => println!("{report}"),
        Format::Csv => unreachable!(),
    }
    if let Some(t) = tol {
        if !(fac.product_residual <= t) {
            eprintln!(
                "reconstruction residual {} exceeds the tolerance {t}",
                fac.product_residual
            );
            return Ok(4);
        }
    }
    Ok(0)
}

fn cmd_verify(
    ids: &[String],
    all: bool,
    list: bool,
    registry_path: Option<&Path>,
    seed: Option<u64>,
    out: Option<&Path>,
    format: Format,
) -> Result<u8> {
    text_only(format, "verify")?;
    let reg: Vec<ScenarioSpec> = match registry_path {
        Some(p) => parse_scenarios(&std::fs::read_to_string(p)?)?,
        None => registry(),
    };
    if list {
        for s in &reg {
            println!("{:<40} {}", s.id, s.description);
        }
        return Ok(0);
    }
    let selected: Vec<ScenarioSpec> = if all {
        reg
    } else {
        if ids.is_empty() {
            return Err(Error::Parse {
                at: 0,
                msg: "no scenario ids given (use --all or --list)".into(),
            });
        }
        ids.iter()
            .map(|id| {
                reg.iter().find(|s| &s.id == id).cloned().ok_or_else(|| Error::Parse {
                    at: 0,
                    msg: format!("unknown scenario id `{id}`"),
                })
            })
            .collect::<Result<_>>()?
    };
    let mut reports = Vec::new();
    let mut worst = Status::Pass;
    for spec in &selected {
        let mut spec = spec.clone();
        if let Some(s) = seed {
            spec.seed = s;
        }
        let report = run_scenario(&spec)?;
        if report.status != Status::Pass {
            worst = Status::Fail;
        }
        match format {
            Format::Text => println!("{}", report.summary_line()),
            Format::Json => println!("{}", report.to_json()),
            Format::Csv => unreachable!(),
        }
        reports.push(report.to_json());
    }
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(&Value::Array(reports))?)?;
    }
    Ok(if worst == Status::Pass { 0 } else { 4 })
}

fn cmd_emit_csv(
    input: &Path,
    transform: Transform,
    root: f64,
    grid: usize,
    out: Option<&Path>,
    format: Format,
) -> Result<u8> {
    let x = read_fn(input)?;
    let emitted = match transform {
        Transform::None => x,
        Transform::Rearrange => x.rearrange(),
        Transform::Prefix | Transform::Suffix => {
            let ev = match transform {
                Transform::Prefix => hardy(&x, root)?,
                _ => hardy_dual(&x, root, x.domain_length())?,
            };
            let breaks: Vec<f64> = x.pieces().map(|p| p.end).collect();
            let grid_pts = refine_grid(&breaks, grid.max(1), 24);
            let (resampled, _err) = resample(&ev, &grid_pts)?;
            resampled
        }
    };
    let payload = match format {
        Format::Json => format!("{}\n", emitted.to_json()),
        _ => emitted.to_csv(),
    };
    match out {
        Some(path) => std::fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(0)
}
