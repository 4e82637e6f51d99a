//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fail.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use planadv_core::aaf::brute_force_grounded;
use planadv_core::dialogue::{run_scripted, DialogueSession, OutcomeTag, Termination, UserMove};
use planadv_core::fixtures::{self, BLOCKS_DOMAIN, BLOCKS_PLAN, BLOCKS_PROBLEM, BLOCKS_TRUNCATED_PLAN};
use planadv_core::framework::check_validity_alignment;
use planadv_core::pddl::{decode, format_plan, parse_domain, parse_plan, parse_problem, ParseError};
use planadv_core::planning::{gamma_star, validate_plan, Atom, Plan};
use planadv_core::schemes::{
    enumerate_cqs, make_action_arg, make_goal_arg, make_plan_arg, make_state_arg, render, CriticalQuestion,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn atoms(list: &[&str]) -> BTreeSet<Atom> {
    list.iter()
        .map(|s| {
            let (pred, rest) = s.split_once('(').unwrap();
            let args: Vec<&str> = rest.trim_end_matches(')').split(',').collect();
            Atom::new(pred, args)
        })
        .collect()
}

fn golden_trace() -> Outcome {
    let start = Instant::now();
    let (problem, plan) = fixtures::blocks();
    let trace = gamma_star(&problem, &plan);
    let report = validate_plan(&problem, &plan);
    let elapsed = start.elapsed();
    let expected = [
        atoms(&["Ontable(C)", "On(B,C)", "On(A,B)", "Clear(A)"]),
        atoms(&["On(B,C)", "Clear(A)", "Clear(B)", "Ontable(A)", "Ontable(C)"]),
        atoms(&[
            "Clear(A)",
            "Clear(B)",
            "Clear(C)",
            "Ontable(A)",
            "Ontable(B)",
            "Ontable(C)",
        ]),
        atoms(&["On(C,A)", "Ontable(A)", "Ontable(B)", "Clear(C)", "Clear(B)"]),
    ];
    ensure!(trace.states.len() == 4, "{} states", trace.states.len());
    for (j, want) in expected.iter().enumerate() {
        ensure!(trace.states[j].atoms() == want, "S{} = {:?}", j + 1, trace.states[j]);
    }
    ensure!(report.valid, "plan reported invalid");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("S1..S4 exact, valid, {elapsed:?}"))
}

fn scheme_fidelity() -> Outcome {
    let (problem, plan) = fixtures::blocks();
    let trace = gamma_star(&problem, &plan);
    let g = problem
        .goals
        .iter()
        .position(|g| g.to_string() == "Ontable(A)")
        .ok_or("no Ontable(A) goal")?
        + 1;
    let cases = [
        ("action_unstack_a_b.txt", make_action_arg(&trace, 1).ok().flatten()),
        ("state_s2.txt", make_state_arg(&trace, 2).ok().flatten()),
        ("goal_ontable_a.txt", make_goal_arg(&problem, &trace, g).ok().flatten()),
        ("plan_summary.txt", make_plan_arg(&problem, &trace)),
    ];
    for (file, arg) in cases {
        let arg = arg.ok_or(format!("{file}: no argument"))?;
        ensure!(normalize(&render(&arg)) == normalize(&golden(file)), "{file} differs");
    }
    Ok("4 goldens match (whitespace and set-member order normalized)".into())
}

fn alignment() -> Outcome {
    let (problem, plan) = fixtures::blocks();
    let mut plans = vec![plan.clone()];
    let perms = permutations(plan.steps());
    let valid_perms = perms
        .iter()
        .filter(|p| oracle_valid(&problem, &Plan::new(p.to_vec())))
        .count();
    ensure!(
        perms.len() == 6 && valid_perms == 1,
        "{valid_perms} of {} permutations valid",
        perms.len()
    );
    plans.extend(perms.into_iter().map(Plan::new));
    let mut rng = StdRng::seed_from_u64(56);
    plans.extend((0..50).map(|_| Plan::new(mutate(&mut rng, plan.steps()))));
    let mut valid = 0;
    for p in &plans {
        let a = check_validity_alignment(&problem, p);
        ensure!(a.aligned(), "misaligned on {p}");
        ensure!(
            a.valid == oracle_valid(&problem, p),
            "validator disagrees with oracle on {p}"
        );
        valid += a.valid as usize;
    }
    Ok(format!(
        "{} plans aligned ({valid} valid), 1/6 permutations valid",
        plans.len()
    ))
}

fn grounded_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let runs = 300;
    for k in 0..runs {
        let n = rng.gen_range(0..=12);
        let density = 0.4 * k as f64 / (runs - 1) as f64;
        let aaf = random_aaf(&mut rng, n, density);
        let grounded = aaf.grounded().members;
        let brute = brute_force_grounded(&aaf).map_err(|e| e.to_string())?.members;
        ensure!(grounded == brute, "run {k}: {grounded:?} vs {brute:?}");
        ensure!(grounded == oracle_grounded(&aaf), "run {k}: fixpoint oracle differs");
        let ok = aaf.is_conflict_free(&grounded).unwrap()
            && aaf.is_admissible(&grounded).unwrap()
            && aaf.is_complete(&grounded).unwrap();
        ensure!(ok, "run {k}: checker rejected {grounded:?}");
    }
    Ok(format!("{runs} random frameworks"))
}

fn worked_dialogue() -> Outcome {
    let (problem, plan) = fixtures::blocks();
    let mut s = DialogueSession::new(problem, plan);
    let script = [
        CriticalQuestion::CQ1.into(),
        CriticalQuestion::step(1).into(),
        UserMove::None,
    ];
    let (transcript, outcome) = run_scripted(&mut s, script).map_err(|e| e.to_string())?;
    let ids: Vec<&str> = transcript.iter().map(|e| e.id.as_str()).collect();
    ensure!(ids == ["CQ1", "Arg_pi", "CQ2(1)", "Arg_a(1)"], "transcript {ids:?}");
    let graph = s.session_aaf();
    let mut edges: Vec<(&str, &str)> = graph.aaf.attacks().collect();
    edges.sort();
    let mut chain = vec![("Arg_a(1)", "CQ2(1)"), ("CQ2(1)", "Arg_pi"), ("Arg_pi", "CQ1")];
    chain.sort();
    ensure!(edges == chain && graph.aaf.len() == 4, "edges {edges:?}");
    let gr = graph.grounded().members;
    ensure!(
        gr == BTreeSet::from(["Arg_a(1)".to_string(), "Arg_pi".to_string()]),
        "grounded {gr:?}"
    );
    ensure!(
        outcome.termination == Termination::T3
            && outcome.outcome == OutcomeTag::O3
            && outcome.message == "Explanation is acceptable",
        "{outcome:?}"
    );
    Ok("4 entries, chain, {Arg_a(1), Arg_pi}, T3/O3".into())
}

fn outcome_coverage() -> Outcome {
    let (problem, truncated) = fixtures::blocks_truncated();
    let mut s = DialogueSession::new(problem, truncated);
    let (_, o) = run_scripted(&mut s, [CriticalQuestion::CQ1.into()]).map_err(|e| e.to_string())?;
    ensure!(
        o.termination == Termination::T1 && o.outcome == OutcomeTag::O1,
        "truncated: {o:?}"
    );

    let (problem, plan) = fixtures::blocks();
    let cqs = enumerate_cqs(&problem, &plan);
    ensure!(cqs.len() == 12, "{} instances", cqs.len());
    // CQ1 first, then every remaining instance in an order that keeps each legal
    let mut s = DialogueSession::new(problem.clone(), plan.clone());
    s.advance(CriticalQuestion::CQ1.into(), None)
        .map_err(|e| e.to_string())?;
    while s.outcome().is_none() {
        let next = *s.legal_moves().iter().next().ok_or("no legal move before exhaustion")?;
        s.advance(next.into(), None).map_err(|e| e.to_string())?;
    }
    let o = s.outcome().unwrap();
    ensure!(
        o.termination == Termination::T2 && o.outcome == OutcomeTag::O2,
        "full: {o:?}"
    );
    ensure!(s.asked().len() == 12, "asked {}", s.asked().len());
    Ok("T1/O1 truncated, T2/O2 exhaustive, 12 instances".into())
}

fn termination() -> Outcome {
    let (problem, plan) = fixtures::blocks();
    let bound = 1 + 2 * enumerate_cqs(&problem, &plan).len();
    let mut rng = StdRng::seed_from_u64(65);
    let mut longest = 0;
    for k in 0..1000 {
        let s = random_walk(&mut rng, &problem, &plan, 0.1).map_err(|e| format!("walk {k}: {e}"))?;
        longest = longest.max(s.history().len());
        ensure!(s.history().len() <= bound, "walk {k}: {} entries", s.history().len());
    }
    Ok(format!("1000 walks, longest {longest} <= {bound}"))
}

fn fuzz_one<F: Fn(&str) -> Result<(), ParseError>>(name: &str, seed: u64, base: &str, parse: F) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut parsed = 0;
    for k in 0..10_000 {
        let bytes = fuzz_bytes(&mut rng, base);
        let result = catch_unwind(AssertUnwindSafe(|| match decode(&bytes) {
            Ok(text) => parse(text).map_err(|e| (text.to_string(), e)),
            Err(e) => Err((String::new(), e)),
        }))
        .map_err(|_| format!("{name} case {k} panicked"))?;
        match result {
            Ok(()) => parsed += 1,
            Err((text, e)) => ensure!(
                e.pos.line >= 1
                    && e.pos.col >= 1
                    && (text.is_empty() || position_in_bounds(&text, e.pos.line, e.pos.col)),
                "{name} case {k}: position {} out of range",
                e.pos
            ),
        }
    }
    Ok(format!("{name} {parsed} ok"))
}

fn parser_robustness() -> Outcome {
    std::panic::set_hook(Box::new(|_| {}));
    let domain = parse_domain(BLOCKS_DOMAIN).map_err(|e| e.to_string())?;
    let problem = parse_problem(BLOCKS_PROBLEM, &domain).map_err(|e| e.to_string())?;
    let counts = [
        fuzz_one("domain", 1, BLOCKS_DOMAIN, |t| parse_domain(t).map(drop)),
        fuzz_one("problem", 2, BLOCKS_PROBLEM, |t| parse_problem(t, &domain).map(drop)),
        fuzz_one("plan", 3, BLOCKS_PLAN, |t| parse_plan(t, &domain, &problem).map(drop)),
    ];
    let _ = std::panic::take_hook();
    let counts = counts.into_iter().collect::<Result<Vec<_>, _>>()?;

    ensure!(
        parse_domain(&domain.to_string()).ok() == Some(domain.clone()),
        "domain round trip"
    );
    ensure!(
        parse_problem(&problem.to_string(), &domain).ok() == Some(problem.clone()),
        "problem round trip"
    );
    for text in [BLOCKS_PLAN, BLOCKS_TRUNCATED_PLAN] {
        let plan = parse_plan(text, &domain, &problem).map_err(|e| e.to_string())?;
        ensure!(
            parse_plan(&format_plan(&plan), &domain, &problem).ok() == Some(plan),
            "plan round trip"
        );
    }
    Ok(format!("3 x 10000 inputs ({}), fixtures round-trip", counts.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden trace", golden_trace),
        ("scheme fidelity", scheme_fidelity),
        ("validity alignment", alignment),
        ("grounded oracle equivalence", grounded_oracle),
        ("worked dialogue", worked_dialogue),
        ("outcome coverage", outcome_coverage),
        ("dialogue termination", termination),
        ("parser robustness", parser_robustness),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let result = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
