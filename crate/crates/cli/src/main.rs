use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use liecurv::chevalley::{build_chevalley, jacobi_check, JacobiReport};
use liecurv::compact::{compact_form, invariant_form};
use liecurv::curvature::connection::ricci_connection;
use liecurv::curvature::{naturally_reductive_test, Components, MetricParams};
use liecurv::einstein::{enumerate_solutions, EnumerateOptions, Enumeration};
use liecurv::involution::{block_module, fixed_subalgebra, identify_type, InvolutionSpec, Subalgebra};
use liecurv::model::{PairDecomposition, PairModel, STANDARD_TAU, STANDARD_THETA};
use liecurv::root_system::{build_root_system, CartanType, FormNormalization};
use liecurv::scalar::{big, round_sig, Scalar};
use liecurv::verify::{self, Fault, VerifyOptions};
use liecurv::Error;

const EXIT_VERIFICATION: u8 = 1;
const EXIT_CONSTRUCTION: u8 = 2;
const EXIT_INVOLUTION: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "liecurv", version, about = "Einstein metrics on F4 from a commuting involution pair")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Invariant form the metric parameters and bracket tables refer to.
    #[arg(long, default_value = "long-root-2", global = true)]
    normalization: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a simple Lie algebra and check the Jacobi identity.
    Algebra {
        #[arg(long = "type", default_value = "f4")]
        cartan_type: String,
    },
    /// Joint eigenspace decomposition of two marked involutions.
    Decompose {
        #[arg(long, default_value = STANDARD_THETA)]
        theta: String,
        #[arg(long, default_value = STANDARD_TAU)]
        tau: String,
        #[arg(long = "type", default_value = "f4")]
        cartan_type: String,
    },
    /// Casimir matrix and triple brackets of the block decomposition.
    Brackets,
    /// Ricci eigenvalues of the metric with block coefficients u.
    Ricci {
        /// Four comma-separated positive values, e.g. 3/5,1,1,1.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Evaluate only this path (default: all registered paths).
        #[arg(long)]
        path: Option<String>,
    },
    /// Enumerate the Einstein metrics of the family.
    Solve {
        /// Acceptance threshold on residuals.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Grid step of the numeric sweep for pairwise distinct coefficients.
        #[arg(long, default_value_t = 1e-5)]
        sweep_step: f64,
    },
    /// Run every reproduction check and report expected against computed values.
    VerifyPaper {
        /// Corrupt Casimir entry ROW,COL (1-based) by +1 before checking.
        #[arg(long, value_name = "ROW,COL")]
        inject_casimir: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Verification(_) | Error::Newton(_) => EXIT_VERIFICATION,
            Error::InvalidInvolution(_) | Error::DegeneratePair(_) => EXIT_INVOLUTION,
            Error::InvalidMetric(_) | Error::UnknownNormalization(_) | Error::UnknownStrategy { .. } => EXIT_INPUT,
            _ => EXIT_CONSTRUCTION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

/// Rendered report plus the exit code it implies.
struct Output {
    table: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(table: String, json: Value) -> Self {
        Output { table, json, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("LIECURV_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| input_error(format!("LIECURV_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| input_error(e.to_string()))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    configure_threads()?;
    let norm: FormNormalization = cli.normalization.parse()?;
    let out = match &cli.command {
        Command::Algebra { cartan_type } => cmd_algebra(cartan_type)?,
        Command::Decompose { theta, tau, cartan_type } => cmd_decompose(cartan_type, theta, tau)?,
        Command::Brackets => cmd_brackets(norm)?,
        Command::Ricci { u, path } => cmd_ricci(u, path.as_deref(), norm)?,
        Command::Solve { tol, sweep_step } => cmd_solve(*tol, *sweep_step)?,
        Command::VerifyPaper { inject_casimir } => cmd_verify(inject_casimir.as_deref())?,
    };
    let mut text = match cli.format {
        Format::Table => out.table,
        Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable"),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(out.code)
}

fn parse_type(s: &str) -> Result<CartanType, Failure> {
    Ok(s.parse::<CartanType>()?)
}

fn cmd_algebra(t: &str) -> Result<Output, Failure> {
    let t = parse_type(t)?;
    let rs = build_root_system(t)?;
    let alg = build_chevalley(&rs)?;
    let cb = compact_form(&rs, &alg)?;
    let jacobi = jacobi_check(&alg.table);
    let killing = invariant_form(&cb, FormNormalization::NegativeKilling)?;
    let jacobi_text = match &jacobi {
        JacobiReport::Pass { .. } => "pass".to_string(),
        JacobiReport::Antisymmetry { pair } => format!("fail (antisymmetry at {pair:?})"),
        JacobiReport::Violation { triple, .. } => format!("fail (triple {triple:?})"),
    };
    let triples = match jacobi {
        JacobiReport::Pass { triples } => json!(triples),
        _ => Value::Null,
    };
    let highest = rs.highest_root().0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    let killing_scale = killing.scale.to_string();
    let table = format!(
        "type: {t}\ndim: {}\nrank: {}\nroots: {}\npositive roots: {}\nhighest root: ({highest})\ndual Coxeter number: {}\nnegative Killing / long-root-2: {killing_scale}\njacobi: {jacobi_text}\n",
        alg.dim(),
        rs.rank(),
        rs.num_roots(),
        rs.num_roots() / 2,
        t.dual_coxeter_number(),
    );
    let json = json!({
        "type": t.to_string(),
        "dim": alg.dim(),
        "rank": rs.rank(),
        "roots": rs.num_roots(),
        "positive_roots": rs.num_roots() / 2,
        "highest_root": rs.highest_root().0,
        "dual_coxeter_number": t.dual_coxeter_number(),
        "killing_scale": killing_scale,
        "jacobi": { "passed": jacobi.passed(), "triples": triples },
    });
    let code = if jacobi.passed() { 0 } else { EXIT_VERIFICATION };
    Ok(Output { table, json, code })
}

fn type_name(sub: &Subalgebra) -> String {
    match identify_type(sub) {
        Ok(t) => t.to_string(),
        Err(Error::Reducible(parts)) => {
            parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("+") + " (reducible)"
        }
        Err(e) => e.to_string(),
    }
}

fn cmd_decompose(t: &str, theta: &str, tau: &str) -> Result<Output, Failure> {
    let t = parse_type(t)?;
    let theta_spec: InvolutionSpec = theta.parse()?;
    let tau_spec: InvolutionSpec = tau.parse()?;
    let pd = PairDecomposition::build(t, &theta_spec, &tau_spec)?;
    let theta_tau = pd.theta.compose(&pd.tau);
    let fixed = [
        ("theta", type_name(&fixed_subalgebra(&pd.theta, &pd.cb)?)),
        ("tau", type_name(&fixed_subalgebra(&pd.tau, &pd.cb)?)),
        ("theta*tau", type_name(&fixed_subalgebra(&theta_tau, &pd.cb)?)),
    ];
    let h1 = type_name(&pd.decomp.subalgebra(&pd.cb, &[0])?);
    let grading_ok = pd.decomp.grading_consistent();
    let grading: Vec<Vec<String>> = pd
        .decomp
        .grading
        .iter()
        .map(|row| row.iter().map(|g| g.map_or("0".to_string(), |k| format!("h{}", k + 1))).collect())
        .collect();
    let modules = (1..4)
        .map(|b| block_module(&pd.rs, &pd.cb, &pd.decomp, b))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = format!("marks: theta = {theta_spec}, tau = {tau_spec}\n");
    table += &format!("block dims: {}\n", pd.decomp.dims.map(|d| d.to_string()).join("/"));
    for (name, ty) in &fixed {
        table += &format!("fixed subalgebra of {name}: {ty}\n");
    }
    table += &format!("h1: {h1}\n");
    for m in &modules {
        table += &format!(
            "h{} as h1-module: dim {}, {} highest weight(s), irreducible: {}\n",
            m.block + 1,
            m.dim,
            m.highest_weights.len(),
            if m.is_irreducible() { "yes" } else { "no" }
        );
    }
    table += "grading [h_i, h_j]:\n";
    table += &format!("{:>6}{}\n", "", (1..=4).map(|j| format!("{:>5}", format!("h{j}"))).collect::<String>());
    for (i, row) in grading.iter().enumerate() {
        table += &format!("{:>6}{}\n", format!("h{}", i + 1), row.iter().map(|c| format!("{c:>5}")).collect::<String>());
    }
    table += &format!("grading consistent with [h_i, h_j] in h_(i xor j): {}\n", if grading_ok { "yes" } else { "no" });

    let json = json!({
        "type": t.to_string(),
        "marks": { "theta": theta_spec.to_string(), "tau": tau_spec.to_string() },
        "dims": pd.decomp.dims,
        "fixed_subalgebras": fixed.iter().map(|(n, ty)| json!({ "involution": n, "type": ty })).collect::<Vec<_>>(),
        "h1": h1,
        "modules": modules.iter().map(|m| json!({
            "block": m.block + 1,
            "dim": m.dim,
            "highest_weights": m.highest_weights.iter().map(|w| w.0.clone()).collect::<Vec<_>>(),
            "weyl_dimension": m.weyl_dimension,
            "irreducible": m.is_irreducible(),
        })).collect::<Vec<_>>(),
        "grading": grading,
        "grading_consistent": grading_ok,
    });
    let code = if grading_ok { 0 } else { EXIT_VERIFICATION };
    Ok(Output { table, json, code })
}

fn cmd_brackets(norm: FormNormalization) -> Result<Output, Failure> {
    let model = PairModel::standard()?;
    let cm = &model.casimir;
    let mut table = "Casimir matrix c[i][j] (long-root-2):\n".to_string();
    for row in cm.to_strings() {
        table += &row.iter().map(|c| format!("{c:>5}")).collect::<String>();
        table.push('\n');
    }
    let sums = cm.column_sums().map(|s| s.to_string());
    table += &format!("column sums: {}\n", sums.join(" "));
    let tb = model.brackets(norm);
    table += &format!("nonzero [k;ij] with i <= j ({norm}):\n");
    for (k, i, j, v) in tb.nonzero_entries() {
        table += &format!("  [{};{}{}] = {}\n", k + 1, i + 1, j + 1, v);
    }
    let killing = model.brackets(FormNormalization::NegativeKilling);
    for k in 0..4 {
        table += &format!("sum rule h{}: {} (dim {})\n", k + 1, killing.sum_rule(k), model.decomp.dims[k]);
    }
    let json = json!({
        "casimir": cm.to_json(),
        "column_sums": sums,
        "brackets": [model.brackets_long.to_json(), model.brackets_killing.to_json()],
        "sum_rule": (0..4).map(|k| killing.sum_rule(k).to_string()).collect::<Vec<_>>(),
    });
    Ok(Output::ok(table, json))
}

fn component_text(c: &Components) -> Vec<String> {
    match c {
        Components::Exact(_) => c
            .to_strings()
            .into_iter()
            .zip(c.as_f64())
            .map(|(s, x)| if s.contains('/') { format!("{s} ({})", round_sig(x)) } else { s })
            .collect(),
        Components::Float(_) => c.to_strings(),
    }
}

fn cmd_ricci(u: &str, path: Option<&str>, norm: FormNormalization) -> Result<Output, Failure> {
    let u: MetricParams = u.parse()?;
    let model = PairModel::standard()?;
    // A metric u times the negative Killing form is the long-root-2 metric scale * u.
    let lr = match norm {
        FormNormalization::LongRoot2 => u.clone(),
        FormNormalization::NegativeKilling => {
            let s = big(*model.killing_scale.numer(), *model.killing_scale.denom());
            match &u {
                MetricParams::Exact(_) => u.scaled(&s)?,
                MetricParams::Float(_) => u.scaled_f64(Scalar::to_f64(&s))?,
            }
        }
    };
    let registry = model.ricci_registry();
    let (results, disagreement) = match path {
        Some(name) => {
            let p = registry.get(name)?;
            (vec![(p.name(), p.ricci(&lr)?)], 0.0)
        }
        None => registry.evaluate_all(&lr)?,
    };
    let conn = ricci_connection(&model.geometry, &lr.as_f64());
    let first = &results[0].1;
    let einstein = match first.exact() {
        Some(_) => first.all_equal_exactly(),
        None => first.spread() < 1e-10,
    };
    let class = naturally_reductive_test(&u);

    let mut table = format!("u = {u} ({norm})\n");
    for (name, r) in &results {
        table += &format!("{name:>10}: {}\n", component_text(r).join(", "));
    }
    if results.len() > 1 {
        table += &format!("max disagreement between paths: {:.3e}\n", disagreement);
    }
    table += &format!("max off-block Ricci entry: {:.3e}\n", conn.off_diagonal_max.max(conn.in_block_spread));
    table += &format!("classification: {class}\n");
    table += if einstein { "Einstein\n" } else { "not Einstein\n" };

    let json = json!({
        "u": u.to_strings(),
        "normalization": norm.to_string(),
        "paths": results.iter().map(|(n, r)| json!({ "path": n, "ricci": r.to_json() })).collect::<Vec<_>>(),
        "max_disagreement": round_sig(disagreement),
        "off_block_max": round_sig(conn.off_diagonal_max.max(conn.in_block_spread)),
        "classification": class.tag(),
        "naturally_reductive": class.is_naturally_reductive(),
        "einstein": einstein,
    });
    Ok(Output::ok(table, json))
}

fn solve_json(en: &Enumeration) -> Value {
    let sweep = en.outcomes.iter().find_map(|o| o.sweep.as_ref());
    json!({
        "solutions": en.solutions.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        "sweep": sweep.map(|s| json!({
            "step": s.step,
            "grid_points": s.grid_points,
            "positive_points": s.positive_points,
            "sign_changes": s.sign_changes,
            "min_residual": s.refined.iter().chain(s.min_residual.iter()).map(|r| r.1).fold(f64::INFINITY, f64::min),
        })),
        "rejected": en.rejected.iter().map(|(u, why)| json!({ "u": u.to_strings(), "reason": why })).collect::<Vec<_>>(),
    })
}

fn cmd_solve(tol: f64, sweep_step: f64) -> Result<Output, Failure> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(input_error(format!("--tol must be positive, got {tol}")));
    }
    if !(sweep_step > 0.0 && sweep_step < 1.75) {
        return Err(input_error(format!("--sweep-step must lie in (0, 1.75), got {sweep_step}")));
    }
    let model = PairModel::standard()?;
    let mut opts = EnumerateOptions { residual_tol: tol, ..EnumerateOptions::default() };
    opts.solve.sweep_step = sweep_step;
    let en = enumerate_solutions(model, &opts)?;
    let mut table = format!("{:<26} {:<40} {:<22} {:<10} {}\n", "class", "u", "constant", "residual", "provenance");
    for s in &en.solutions {
        let residual = if s.exact { "0".to_string() } else { format!("{:.2e}", s.residual) };
        let class = if s.classification.is_naturally_reductive() {
            s.classification.to_string()
        } else {
            format!("{} *", s.classification)
        };
        table += &format!(
            "{:<26} {:<40} {:<22} {:<10} {}\n",
            class,
            s.u.to_string(),
            s.einstein_constant.to_string(),
            residual,
            s.provenance
        );
    }
    table += &format!("{} classes; * = not naturally reductive\n", en.solutions.len());
    if let Some(s) = en.outcomes.iter().find_map(|o| o.sweep.as_ref()) {
        table += &format!(
            "pairwise distinct sweep: step {:e}, {} grid points, {} sign changes, no solution\n",
            s.step, s.grid_points, s.sign_changes
        );
    }
    Ok(Output::ok(table, solve_json(&en)))
}

fn cmd_verify(inject: Option<&str>) -> Result<Output, Failure> {
    let fault = match inject {
        None => None,
        Some(s) => {
            let parts: Vec<usize> = s.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>().map_err(|_| {
                input_error(format!("--inject-casimir expects ROW,COL, got {s:?}"))
            })?;
            match parts[..] {
                [r, c] if (1..=4).contains(&r) && (1..=4).contains(&c) => {
                    Some(Fault::CasimirEntry { row: r - 1, col: c - 1, delta: 1 })
                }
                _ => return Err(input_error(format!("--inject-casimir expects ROW,COL in 1..4, got {s:?}"))),
            }
        }
    };
    let model = PairModel::standard()?;
    let report = verify::run(model, &VerifyOptions { fault, ..VerifyOptions::default() })?;
    let mut table = report.to_string();
    let failures = report.failures();
    if !failures.is_empty() {
        table += "\nfailures:\n";
        for c in failures {
            table += &format!("  [{}] {}: expected {}, computed {}\n", c.criterion, c.name, c.expected, c.computed);
        }
    }
    let code = if report.passed() { 0 } else { EXIT_VERIFICATION };
    Ok(Output { table, json: report.to_json(), code })
}
