use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use qeuclid_cli::emit::{emit, Emit, EmitConfig};
use qeuclid_cli::expr::{self, parse_expr, Evaluator, Value, ValueText};
use qeuclid_cli::{parse_point, render, run_verify, verify_json, RunError, SampleMode, EXIT_FAIL, EXIT_PASS, EXIT_USAGE, SCHEMA};
use qeuclid_core::{
    CalculusTag, Family, GammaBranch, GammaChoice, GlueReading, KConvention, QScalar, SigmaBranch, Space, VerifyOptions,
};

#[derive(Parser)]
#[command(name = "qeuclid", version, about = "Exact checks for the quantum Euclidean spaces R^N_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run check families and report pass/fail with residual witnesses.
    Verify(VerifyArgs),
    /// Dump structure constants.
    Emit(EmitArgs),
    /// Print the normal form of an expression.
    Normalize(ExprArgs),
    /// Check that printing and re-parsing a normal form is the identity.
    ParseCheck(ParseCheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CalculusArg {
    Plain,
    Barred,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SigmaArg {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KArg {
    Standard,
    H,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChoiceArg {
    RatioQ,
    Rational,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GlueArg {
    Consistent,
    Literal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    #[value(name = "1")]
    T1,
    #[value(name = "2")]
    T2,
    #[value(name = "3")]
    T3,
    #[value(name = "4")]
    T4,
    #[value(name = "5")]
    T5,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Rmatrix,
    Space,
    Calculus,
    Frame,
    Geometry,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Rmatrix,
    Metric,
    Projectors,
    Lambdas,
    Frame,
    Dirac,
}

#[derive(Args)]
struct Common {
    /// Dimension(s) N; `verify` accepts a list such as 3,4,5,6.
    #[arg(long = "n", value_delimiter = ',', default_value = "3")]
    n: Vec<usize>,
    #[arg(long, value_enum, default_value = "both")]
    calculus: CalculusArg,
    #[arg(long = "k-convention", value_enum, default_value = "standard")]
    k_convention: KArg,
    #[arg(long = "gamma-branch", value_enum, default_value = "plus")]
    gamma_branch: BranchArg,
    #[arg(long = "gamma-choice", value_enum, default_value = "ratio-q")]
    gamma_choice: ChoiceArg,
    /// Output format (json for verify/emit, text for normalize/parse-check by default).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "both")]
    sigma: SigmaArg,
    /// Theorem families to run (repeatable).
    #[arg(long, value_enum)]
    theorem: Vec<TheoremArg>,
    /// Other families to run (repeatable).
    #[arg(long, value_enum)]
    family: Vec<FamilyArg>,
    /// Every family (the default when nothing is selected).
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Explicit sample points for `q^{1/2}`, e.g. 7/5 (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    point: Vec<String>,
    /// Random sample points drawn from the seed (when no --point is given).
    #[arg(long, default_value_t = 3)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "glue-reading", value_enum, default_value = "consistent")]
    glue_reading: GlueArg,
    /// Largest N for the curvature check.
    #[arg(long = "curvature-max-n", default_value_t = 3)]
    curvature_max_n: usize,
    /// Largest N for `d` on degree-2 monomials.
    #[arg(long = "quadratic-max-n", default_value_t = 4)]
    quadratic_max_n: usize,
    #[arg(long = "confluence-samples", default_value_t = 200)]
    confluence_samples: usize,
    /// Record per-family wall time (otherwise timing_ms is null).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct EmitArgs {
    #[command(flatten)]
    common: Common,
    #[arg(value_enum)]
    what: EmitArg,
}

#[derive(Args)]
struct ExprArgs {
    #[command(flatten)]
    common: Common,
    expr: String,
}

#[derive(Args)]
struct ParseCheckArgs {
    #[command(flatten)]
    common: Common,
    /// Expression to check; omit to check random elements instead.
    expr: Option<String>,
    /// Number of random elements when no expression is given.
    #[arg(long, default_value_t = 200)]
    random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Common {
    fn tags(&self) -> Vec<CalculusTag> {
        match self.calculus {
            CalculusArg::Plain => vec![CalculusTag::Plain],
            CalculusArg::Barred => vec![CalculusTag::Barred],
            CalculusArg::Both => CalculusTag::BOTH.to_vec(),
        }
    }

    fn k(&self) -> KConvention {
        match self.k_convention {
            KArg::Standard => KConvention::Standard,
            KArg::H => KConvention::H,
        }
    }

    fn branch(&self) -> GammaBranch {
        match self.gamma_branch {
            BranchArg::Plus => GammaBranch::Plus,
            BranchArg::Minus => GammaBranch::Minus,
        }
    }

    fn choice(&self) -> GammaChoice {
        match self.gamma_choice {
            ChoiceArg::RatioQ => GammaChoice::RatioQ,
            ChoiceArg::Rational => GammaChoice::Rational,
        }
    }

    fn single_n(&self) -> Result<usize, String> {
        match self.n.as_slice() {
            [n] => Ok(*n),
            _ => Err("this command takes a single --n".into()),
        }
    }

    fn space(&self) -> Result<Space<QScalar>, String> {
        Space::with_convention(self.single_n()?, self.k()).map_err(|e| e.to_string())
    }
}

fn usage(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn write_out(common: &Common, doc: &Json, md: impl Fn(&Json) -> String, text: impl Fn(&Json) -> String, default: Format) -> i32 {
    let body = match common.format.unwrap_or(default) {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(doc).expect("json")),
        Format::Md => md(doc),
        Format::Text => text(doc),
    };
    match &common.out {
        Some(path) => match std::fs::write(path, body) {
            Ok(()) => EXIT_PASS,
            Err(e) => usage(format!("cannot write {}: {e}", path.display())),
        },
        None => {
            print!("{body}");
            EXIT_PASS
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let c = &args.common;
    let mut families = Vec::new();
    for t in &args.theorem {
        match t {
            TheoremArg::All => families.extend((1..=5).map(Family::Theorem)),
            t => families.push(Family::Theorem(*t as u8 + 1)),
        }
    }
    for f in &args.family {
        families.push(match f {
            FamilyArg::Rmatrix => Family::Rmatrix,
            FamilyArg::Space => Family::Space,
            FamilyArg::Calculus => Family::Calculus,
            FamilyArg::Frame => Family::Frame,
            FamilyArg::Geometry => Family::Geometry,
        });
    }
    if args.all || families.is_empty() {
        families = Family::ALL.to_vec();
    }
    families.sort();
    families.dedup();
    if let Some(&bad) = c.n.iter().find(|&&n| !(3..=qeuclid_core::MAX_DIM).contains(&n)) {
        return usage(format!("N = {bad} is not supported (need 3 <= N <= {})", qeuclid_core::MAX_DIM));
    }
    let mut opts = VerifyOptions::new(c.n[0]).families(families.clone()).tags(c.tags());
    opts.sigma = match args.sigma {
        SigmaArg::Plus => vec![SigmaBranch::Plus],
        SigmaArg::Minus => vec![SigmaBranch::Minus],
        SigmaArg::Both => SigmaBranch::BOTH.to_vec(),
    };
    opts.k_convention = c.k();
    opts.gamma_branch = c.branch();
    opts.gamma_choice = c.choice();
    opts.glue_reading = match args.glue_reading {
        GlueArg::Consistent => GlueReading::Consistent,
        GlueArg::Literal => GlueReading::Literal,
    };
    opts.seed = args.seed;
    opts.curvature_max_dim = args.curvature_max_n;
    opts.quadratic_max_dim = args.quadratic_max_n;
    opts.confluence_samples = args.confluence_samples;
    opts.timings = args.timings;

    let mode = match args.mode {
        ModeArg::Exact if !args.point.is_empty() => return usage("--point needs --mode sampled"),
        ModeArg::Exact => SampleMode::Exact,
        ModeArg::Sampled => {
            let points: Result<Vec<_>, _> = args.point.iter().map(|p| parse_point(p)).collect();
            match points {
                Ok(points) if points.is_empty() && args.points == 0 => return usage("sampled mode needs at least one point"),
                Ok(points) => {
                    let random = if points.is_empty() { args.points } else { 0 };
                    SampleMode::Sampled { points, random }
                }
                Err(e) => return usage(e),
            }
        }
    };
    let runs = match run_verify(&c.n, &opts, &mode) {
        Ok(runs) => runs,
        Err(RunError::Usage(e)) => return usage(e),
        Err(RunError::Verify(e)) => return usage(e),
    };
    let config = json!({
        "n": c.n,
        "families": families.iter().map(|f| f.name()).collect::<Vec<_>>(),
        "calculus": opts.tags,
        "sigma": opts.sigma,
        "k_convention": opts.k_convention,
        "gamma_branch": opts.gamma_branch,
        "gamma_choice": opts.gamma_choice,
        "glue_reading": opts.glue_reading,
        "mode": match args.mode { ModeArg::Exact => "exact", ModeArg::Sampled => "sampled" },
        "seed": opts.seed,
        "curvature_max_n": opts.curvature_max_dim,
        "quadratic_max_n": opts.quadratic_max_dim,
        "confluence_samples": opts.confluence_samples,
    });
    let doc = verify_json(config, &runs);
    let written = write_out(c, &doc, render::verify_md, render::verify_md, Format::Json);
    if written != EXIT_PASS {
        return written;
    }
    qeuclid_cli::exit_code(&runs)
}

fn cmd_emit(args: &EmitArgs) -> i32 {
    let c = &args.common;
    let dim = match c.single_n() {
        Ok(n) => n,
        Err(e) => return usage(e),
    };
    let what = match args.what {
        EmitArg::Rmatrix => Emit::Rmatrix,
        EmitArg::Metric => Emit::Metric,
        EmitArg::Projectors => Emit::Projectors,
        EmitArg::Lambdas => Emit::Lambdas,
        EmitArg::Frame => Emit::Frame,
        EmitArg::Dirac => Emit::Dirac,
    };
    let cfg = EmitConfig { dim, tags: c.tags(), k_convention: c.k(), gamma_choice: c.choice(), gamma_branch: c.branch() };
    match emit(what, &cfg) {
        Ok(doc) => write_out(c, &doc, render::emit_md, render::emit_md, Format::Json),
        Err(e) => usage(e),
    }
}

fn is_zero(space: &Space<QScalar>, v: &Value<QScalar>) -> bool {
    match v {
        Value::Elem(u) => space.alg.is_zero(u),
        Value::Form(u) => u.components().all(|(_, c)| space.alg.is_zero(c)),
    }
}

fn kind(v: &Value<QScalar>) -> &'static str {
    match v {
        Value::Elem(_) => "element",
        Value::Form(_) => "form",
    }
}

fn cmd_normalize(args: &ExprArgs) -> i32 {
    let c = &args.common;
    let space = match c.space() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let v = match expr::normalize(&space, &args.expr) {
        Ok(v) => v,
        Err(e) => return usage(e),
    };
    let doc = json!({
        "schema": SCHEMA,
        "command": "normalize",
        "n": space.dim(),
        "input": args.expr,
        "kind": kind(&v),
        "normal_form": ValueText(&space, &v).to_string(),
        "is_zero": is_zero(&space, &v),
    });
    let text = |d: &Json| format!("{}\n", d["normal_form"].as_str().unwrap_or(""));
    write_out(c, &doc, render::fields_md, text, Format::Text)
}

/// Normalizes, prints, re-parses and compares.
fn round_trip(space: &Space<QScalar>, text: &str) -> Result<(String, bool), String> {
    let mut ev = Evaluator::new(space);
    let v = ev.eval(&parse_expr(text).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let printed = ValueText(space, &v).to_string();
    let again = ev.eval(&parse_expr(&printed).map_err(|e| format!("reparse: {e}"))?).map_err(|e| e.to_string())?;
    Ok((printed, again == v))
}

fn cmd_parse_check(args: &ParseCheckArgs) -> i32 {
    let c = &args.common;
    let space = match c.space() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let doc = match &args.expr {
        Some(text) => {
            let (printed, ok) = match round_trip(&space, text) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            json!({
                "schema": SCHEMA,
                "command": "parse-check",
                "n": space.dim(),
                "input": text,
                "normal_form": printed,
                "round_trip": ok,
            })
        }
        None => {
            let mut failures = Vec::new();
            for (k, text) in expr::random_texts(&space, args.random, args.seed).into_iter().enumerate() {
                match round_trip(&space, &text) {
                    Ok((_, true)) => {}
                    Ok((printed, false)) => failures.push(format!("#{k}: {text} -> {printed}")),
                    Err(e) => failures.push(format!("#{k}: {text}: {e}")),
                }
            }
            json!({
                "schema": SCHEMA,
                "command": "parse-check",
                "n": space.dim(),
                "samples": args.random,
                "seed": args.seed,
                "round_trip": failures.is_empty(),
                "failures": failures,
            })
        }
    };
    let ok = doc["round_trip"] == true;
    let text = |d: &Json| {
        let mut s = format!("round trip: {}\n", if d["round_trip"] == true { "ok" } else { "FAILED" });
        if let Some(nf) = d["normal_form"].as_str() {
            s = format!("{nf}\n{s}");
        }
        for f in d["failures"].as_array().into_iter().flatten() {
            s.push_str(&format!("  {}\n", f.as_str().unwrap_or("")));
        }
        s
    };
    let written = write_out(c, &doc, render::fields_md, text, Format::Text);
    if written != EXIT_PASS {
        return written;
    }
    if ok {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("QEUCLID_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("QEUCLID_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("QEUCLID_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        return ExitCode::from(usage(e) as u8);
    }
    let code = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Emit(a) => cmd_emit(a),
        Command::Normalize(a) => cmd_normalize(a),
        Command::ParseCheck(a) => cmd_parse_check(a),
    };
    ExitCode::from(code as u8)
}
