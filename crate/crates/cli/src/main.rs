//! `opbar`: command-line workbench for exact bar constructions.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 when an
//! input or a requested computation fails validation.

mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use opbar::algebra::{fixtures, validate_algebra, Algebra, AlgebraJson, AlgebraType, KAlgebra};
use opbar::bar::{bar, iterated_bar};
use opbar::cochains::{bar_of_cochains, models, reduced_cochains, FiniteSimplicialSet, SimplicialSetJson};
use opbar::operad::{Operad, OperadMorphism};
use opbar::right::BarModule;
use opbar::verify::{self, Suite, VerifyOptions};
use opbar::{CoeffField, DegreeWindow};

use report::{to_json, DegreeReport, Provenance, VerifyReport};

#[derive(Parser)]
#[command(name = "opbar", version, about = "Exact bar constructions for operads, operad modules and simplicial cochain algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of the bar construction of an algebra, of its iterates, or of
    /// the bar module of an operad.
    Bar(BarArgs),
    /// Reduced cochains of a finite simplicial set, optionally followed by bar constructions.
    Cochains(CochainsArgs),
    /// Runs identity suites; exits 1 naming the first failing identity.
    Verify(VerifyArgs),
    /// Writes a shipped fixture (algebra or simplicial set) or a bar complex as JSON.
    Export(ExportArgs),
}

#[derive(Args, Clone)]
struct Window {
    /// Ground field: Q or F<p>.
    #[arg(long, value_parser = parse_field)]
    field: Option<CoeffField>,
    #[arg(long, allow_negative_numbers = true)]
    min_degree: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    max_degree: Option<i64>,
    /// Maximal bar word length; smaller than the sound bound is an error.
    #[arg(long)]
    weight_bound: Option<usize>,
}

#[derive(Args, Clone)]
struct Output {
    /// Writes the JSON report to this path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Prints the JSON report instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BarArgs {
    #[command(flatten)]
    window: Window,
    #[command(flatten)]
    out: Output,
    /// Algebra JSON.
    #[arg(long, required_unless_present = "operad", conflicts_with = "operad")]
    input: Option<PathBuf>,
    /// Computes H(B_R(n)) for the operad R (As, Com or K) in arity --arity-bound.
    #[arg(long, value_parser = ["As", "Com", "K"])]
    operad: Option<String>,
    #[arg(long, visible_alias = "arity", default_value_t = 3)]
    arity_bound: usize,
    /// Number of iterated bar constructions (2 or more needs a commutative algebra).
    #[arg(long, default_value_t = 1)]
    iterations: usize,
}

#[derive(Args)]
struct CochainsArgs {
    #[command(flatten)]
    window: Window,
    #[command(flatten)]
    out: Output,
    /// Simplicial set JSON.
    #[arg(long)]
    input: PathBuf,
    /// Reports H(Bⁿ C̄*(X)) in cohomological degrees instead of H̄*(X).
    #[arg(long)]
    bar: bool,
    #[arg(long, default_value_t = 1)]
    iterations: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    out: Output,
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Checks the identities of this algebra JSON instead of a suite.
    #[arg(long, conflicts_with = "suite")]
    input: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    min_degree: Option<i64>,
    #[arg(long, value_parser = parse_field)]
    field: Option<CoeffField>,
    #[arg(long, visible_alias = "arity-bound")]
    arity: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    max_degree: Option<i64>,
    /// Seed of the randomized fixtures.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExportArgs {
    /// One of: exterior, exterior-x3, truncated-polynomial, cdga, small-dga,
    /// nonassoc, random-dga, random-cdga, s1, s2, s3, s2-boundary,
    /// s3-boundary, delta<n>, bar (the bar complex of --input).
    object: String,
    #[command(flatten)]
    window: Window,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_field(s: &str) -> Result<CoeffField, String> {
    s.parse().map_err(|e: opbar::Error| e.to_string())
}

/// Why a command did not succeed.
enum Failure {
    /// Input or computation failed validation (exit 2).
    Invalid(String),
    /// A verification check failed (exit 1).
    Check(String),
}

impl From<opbar::Error> for Failure {
    fn from(e: opbar::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("invalid JSON in {}: {e}", path.display())))
}

fn emit(out: &Output, json: String, table: String) -> Outcome {
    if let Some(path) = &out.output {
        fs::write(path, &json).map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{}", if out.json { json } else { table });
    Ok(())
}

fn read_algebra(path: &Path, field: Option<CoeffField>) -> Result<Algebra, Failure> {
    let mut j: AlgebraJson = read_json(path)?;
    if let Some(f) = field {
        j = j.with_field(f);
    }
    Ok(Algebra::from_json(&j)?)
}

fn load_algebra(path: &Path, field: Option<CoeffField>) -> Result<Algebra, Failure> {
    let a = read_algebra(path, field)?;
    validate_algebra(&a)?;
    Ok(a)
}

/// Default window: `[0, 8]` for inputs whose suspended degrees are positive,
/// `[-8, 0]` for inputs whose suspended degrees are negative.
fn default_window(a: &Algebra, w: &Window) -> Result<DegreeWindow, Failure> {
    let negative = !KAlgebra::elements(a).is_empty() && KAlgebra::elements(a).iter().all(|x| a.degree(x) < -1);
    let (lo, hi) = if negative { (-8, 0) } else { (0, 8) };
    Ok(DegreeWindow::new(w.min_degree.unwrap_or(lo), w.max_degree.unwrap_or(hi))?)
}

fn cmd_bar(args: &BarArgs) -> Outcome {
    if let Some(name) = &args.operad {
        return cmd_bar_module(args, name);
    }
    let path = args.input.as_ref().expect("clap requires --input");
    let a = load_algebra(path, args.window.field)?;
    let window = default_window(&a, &args.window)?;
    let (degrees, weight) = match args.iterations {
        0 => return Err(Failure::Invalid("--iterations must be at least 1".into())),
        1 => {
            let b = bar(&a, window, args.window.weight_bound)?;
            (b.homology()?, b.bounds.weight_bound)
        }
        n => {
            let commutative = match a.kind() {
                AlgebraType::Commutative => a.clone(),
                kind => {
                    return Err(opbar::Error::NotCommutative(format!(
                        "the iterated bar construction needs a commutative algebra, got a {kind}-algebra"
                    ))
                    .into())
                }
            };
            let b = iterated_bar(&commutative, n, window, args.window.weight_bound)?;
            (b.homology()?, b.top.bounds.weight_bound)
        }
    };
    let mut p = Provenance::new("bar", a.field());
    p.grading = Some("homological");
    p.min_degree = Some(window.min);
    p.max_degree = Some(window.max);
    p.weight_bound = Some(weight);
    p.iterations = Some(args.iterations);
    p.input = Some(path.display().to_string());
    let r = DegreeReport { degrees, algebra: None, provenance: p };
    let title = if args.iterations == 1 { "H(B(A))".to_string() } else { format!("H(B^{}(A))", args.iterations) };
    emit(&args.out, to_json(&r), r.table(&title))
}

fn operad(name: &str, field: CoeffField, bound: usize) -> Arc<Operad> {
    Arc::new(match name {
        "As" => Operad::associative(field, bound),
        "Com" => Operad::commutative(field, bound),
        _ => Operad::stasheff(field, bound),
    })
}

fn cmd_bar_module(args: &BarArgs, name: &str) -> Outcome {
    let field = args.window.field.unwrap_or(CoeffField::Rationals);
    let n = args.arity_bound;
    if n == 0 {
        return Err(Failure::Invalid("--arity-bound must be at least 1".into()));
    }
    let bound = n.max(2);
    let r = operad(name, field, bound);
    let eta = OperadMorphism::from_stasheff(operad("K", field, bound), r.clone())?;
    let module = BarModule::new(&eta, OperadMorphism::identity(r), n)?;
    let mut degrees = module.homology(n)?;
    if let Some(lo) = args.window.min_degree {
        degrees.retain(|d, _| *d >= lo);
    }
    if let Some(hi) = args.window.max_degree {
        degrees.retain(|d, _| *d <= hi);
    }
    let mut p = Provenance::new("bar", field);
    p.grading = Some("homological");
    p.min_degree = degrees.keys().next().copied();
    p.max_degree = degrees.keys().next_back().copied();
    p.operad = Some(name.into());
    p.arity = Some(n);
    p.note = Some("the complex is finite in each arity, so the table is exact".into());
    let rep = DegreeReport { degrees, algebra: None, provenance: p };
    emit(&args.out, to_json(&rep), rep.table(&format!("H(B_{name}({n}))")))
}

fn load_simplicial(path: &Path) -> Result<FiniteSimplicialSet, Failure> {
    let j: SimplicialSetJson = read_json(path)?;
    Ok(FiniteSimplicialSet::from_json(&j)?)
}

fn cmd_cochains(args: &CochainsArgs) -> Outcome {
    let x = load_simplicial(&args.input)?;
    let field = args.window.field.unwrap_or(CoeffField::Rationals);
    let mut p = Provenance::new("cochains", field);
    p.grading = Some("cohomological");
    p.input = Some(args.input.display().to_string());
    if args.bar {
        let lo = args.window.min_degree.unwrap_or(1);
        let hi = args.window.max_degree.unwrap_or(8);
        let window = DegreeWindow::new(lo, hi)?;
        let result = bar_of_cochains(&x, field, args.iterations.max(1), window, args.window.weight_bound)?;
        p.min_degree = Some(lo);
        p.max_degree = Some(hi);
        p.weight_bound = Some(result.weight_bound);
        p.iterations = Some(args.iterations.max(1));
        p.note = Some(format!("computed on a 1-connected sub-model of dimension {}", result.model_dim));
        let r = DegreeReport { degrees: result.degrees, algebra: None, provenance: p };
        let title = format!("H(B^{} C̄*(X))", args.iterations.max(1));
        return emit(&args.out, to_json(&r), r.table(&title));
    }
    let c = reduced_cochains(&x, field)?;
    let carrier = c.algebra.carrier();
    let top = x.max_dim() as i64;
    let lo = args.window.min_degree.unwrap_or(0).max(0);
    let hi = args.window.max_degree.unwrap_or(top);
    let h = carrier.homology(carrier.window())?;
    let degrees: BTreeMap<i64, usize> = (lo..=hi).map(|d| (d, h.get(&-d).copied().unwrap_or(0))).collect();
    p.min_degree = Some(lo);
    p.max_degree = Some(hi);
    p.note = Some(format!("reduced normalized cochains: {} basis elements, Alexander–Whitney product", c.algebra.dim()));
    let algebra = serde_json::to_value(c.algebra.to_json()).map_err(|e| Failure::Invalid(e.to_string()))?;
    let r = DegreeReport { degrees, algebra: Some(algebra), provenance: p };
    emit(&args.out, to_json(&r), r.table("reduced H*(X)"))
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let mut p = Provenance::new("verify", args.field.unwrap_or(CoeffField::Rationals));
    let checks = match &args.input {
        Some(path) => {
            let a = read_algebra(path, args.field)?;
            let bounds = Window { field: None, min_degree: args.min_degree, max_degree: args.max_degree, weight_bound: None };
            let window = default_window(&a, &bounds)?;
            p.field = a.field();
            p.input = Some(path.display().to_string());
            p.min_degree = Some(window.min);
            p.max_degree = Some(window.max);
            verify::run_on_algebra(&a, window)
        }
        None => {
            let suite: Suite = args.suite.parse()?;
            let opts = VerifyOptions { field: args.field, arity: args.arity, max_degree: args.max_degree, seed: args.seed };
            p.suite = Some(suite.to_string());
            p.seed = Some(args.seed);
            p.arity = args.arity;
            p.max_degree = args.max_degree;
            if args.field.is_none() {
                p.note = Some("each suite runs over its default fields".into());
            }
            verify::run(suite, &opts)
        }
    };
    let first = verify::first_failure(&checks).map(|c| format!("{}: {}", c.name, c.failure.clone().unwrap_or_default()));
    let r = VerifyReport { passed: first.is_none(), checks, provenance: p };
    emit(&args.out, to_json(&r), r.table())?;
    match first {
        None => Ok(()),
        Some(name) => Err(Failure::Check(name)),
    }
}

fn cmd_export(args: &ExportArgs) -> Outcome {
    let field = args.window.field.unwrap_or(CoeffField::Rationals);
    let algebra = |a: Algebra| serde_json::to_value(a.to_json());
    let simplicial = |x: SimplicialSetJson| serde_json::to_value(x);
    let value = match args.object.as_str() {
        "exterior" => algebra(fixtures::exterior(field, 1)),
        "exterior-x3" => algebra(fixtures::exterior(field, -3)),
        "truncated-polynomial" => algebra(fixtures::truncated_polynomial(field, 2, 4)),
        "cdga" => algebra(fixtures::cdga(field)),
        "small-dga" => algebra(fixtures::small_dga(field)),
        "nonassoc" => algebra(fixtures::nonassociative(field)),
        "random-dga" => algebra(fixtures::random_dga(field, args.seed, false)),
        "random-cdga" => algebra(fixtures::random_dga(field, args.seed, true)),
        "s1" => simplicial(models::sphere_json(1)),
        "s2" => simplicial(models::sphere_json(2)),
        "s3" => simplicial(models::sphere_json(3)),
        "s2-boundary" => simplicial(models::boundary_simplex_json(3)),
        "s3-boundary" => simplicial(models::boundary_simplex_json(4)),
        "bar" => {
            let path = args.input.as_ref().ok_or_else(|| Failure::Invalid("export bar needs --input".into()))?;
            let a = load_algebra(path, args.window.field)?;
            let window = default_window(&a, &args.window)?;
            let b = bar(&a, window, args.window.weight_bound)?;
            serde_json::to_value(b.module().to_json())
        }
        other => match other.strip_prefix("delta").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if n <= 6 => simplicial(models::standard_simplex_json(n)),
            _ => return Err(Failure::Invalid(format!("unknown export object `{other}`"))),
        },
    }
    .map_err(|e| Failure::Invalid(e.to_string()))?;
    let json = to_json(&value);
    match &args.output {
        Some(path) => fs::write(path, json).map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("OPBAR_THREADS") {
        let limit = v.trim().parse::<usize>().map_err(|_| opbar::Error::Invalid(format!("OPBAR_THREADS={v} is not a count")));
        if let Err(e) = limit.and_then(opbar::limit_threads) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::Bar(a) => cmd_bar(a),
        Command::Cochains(a) => cmd_cochains(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Export(a) => cmd_export(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(name)) => {
            eprintln!("verification failed: {name}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
