//! Acceptance criteria 1–9: one PASS/FAIL line per criterion with its
//! runtime against the budget. Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use opbar::cochains::{bar_of_cochains, models};
use opbar::verify::{run, Check, Suite, VerifyOptions};
use opbar::{CoeffField, DegreeWindow};

struct Criterion {
    number: usize,
    title: &'static str,
    budget: Duration,
    run: fn() -> Vec<Check>,
}

fn suite(s: Suite) -> Vec<Check> {
    run(s, &VerifyOptions::default())
}

fn check(name: &str, outcome: Result<(), String>) -> Vec<Check> {
    vec![Check { suite: "acceptance".into(), name: name.into(), reference: "§2.2".into(), passed: outcome.is_ok(), failure: outcome.err() }]
}

/// The minimal and `∂Δ³` models of S² give the same table on `[1, 8]`.
fn two_sphere_models() -> Vec<Check> {
    let w = DegreeWindow { min: 1, max: 8 };
    let f = CoeffField::Prime(2);
    let table = |x| bar_of_cochains(&x, f, 1, w, None).map(|c| c.degrees).map_err(|e| e.to_string());
    let outcome = (|| {
        let (minimal, boundary) = (table(models::sphere(2))?, table(models::boundary_simplex(3))?);
        let james: BTreeMap<i64, usize> = (1..=8).map(|d| (d, 1)).collect();
        if minimal != boundary {
            return Err(format!("tables differ: {minimal:?} vs {boundary:?}"));
        }
        if minimal != james {
            return Err(format!("both models give {minimal:?}, expected dimension 1 in degrees 1..8"));
        }
        Ok(())
    })();
    check("H(B C̄*(−); F2) agrees on the minimal and ∂Δ³ models of S² on [1, 8]", outcome)
}

const CRITERIA: [Criterion; 9] = [
    Criterion { number: 1, title: "Stasheff consistency through arity 7", budget: Duration::from_secs(30), run: || suite(Suite::Stasheff) },
    Criterion { number: 2, title: "bar differential squares to zero", budget: Duration::from_secs(60), run: || suite(Suite::BarDifferential) },
    Criterion { number: 3, title: "Sym_R(B_R, A) ≅ B(A) for As, Com, K", budget: Duration::from_secs(120), run: || suite(Suite::Sym) },
    Criterion { number: 4, title: "extension isomorphisms through arity 3", budget: Duration::from_secs(60), run: || suite(Suite::Extension) },
    Criterion { number: 5, title: "shuffle structure on B(A)", budget: Duration::from_secs(60), run: || suite(Suite::Shuffle) },
    Criterion { number: 6, title: "categorical identity B(A) ≅ N_*(C̲(A))", budget: Duration::from_secs(120), run: || suite(Suite::CommutativeIdentity) },
    Criterion { number: 7, title: "loop-space spot checks", budget: Duration::from_secs(300), run: || suite(Suite::LoopSpace) },
    Criterion { number: 8, title: "quasi-isomorphism invariance of the S² models", budget: Duration::from_secs(120), run: two_sphere_models },
    Criterion { number: 9, title: "Σ-module dimension formulas against brute force", budget: Duration::from_secs(60), run: || suite(Suite::SigmaOracles) },
];

fn main() -> ExitCode {
    let mut failed = 0;
    println!("\nrunning {} acceptance criteria", CRITERIA.len());
    for c in &CRITERIA {
        let start = Instant::now();
        let checks = (c.run)();
        let elapsed = start.elapsed();
        let failing: Vec<&Check> = checks.iter().filter(|k| !k.passed).collect();
        let in_budget = elapsed <= c.budget;
        let ok = failing.is_empty() && !checks.is_empty() && in_budget;
        println!(
            "criterion {}: {}  {} ({} checks, {:.2}s of {}s)",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            checks.len(),
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        for k in failing {
            println!("    failed: {}: {}", k.name, k.failure.as_deref().unwrap_or(""));
        }
        if !in_budget {
            println!("    over the runtime budget");
        }
        failed += usize::from(!ok);
    }
    println!("acceptance: {} passed, {failed} failed\n", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
