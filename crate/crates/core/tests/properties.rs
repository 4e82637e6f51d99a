mod common;

use std::collections::BTreeSet;

use common::{as_set, oracle_grounded, oracle_trace, oracle_valid, random_aaf};
use planadv_core::aaf::brute_force_grounded;
use planadv_core::framework::{build_aaf, check_validity_alignment, FullFramework};
use planadv_core::pddl::{format_plan, parse_domain, parse_plan, parse_problem};
use planadv_core::planning::{
    achiever, gamma, gamma_star, validate_plan, Achiever, Atom, Goal, GroundAction, Plan, PlanningProblem, State,
    Vocabulary,
};
use planadv_core::schemes::{CriticalQuestion, SchemeKind};
use planadv_core::{fixtures, Symbol};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const POOL: usize = 6;

fn atom(i: usize) -> Atom {
    Atom::new("P", [format!("o{i}")])
}

fn atoms(mask: u8) -> BTreeSet<Atom> {
    (0..POOL).filter(|i| mask & (1 << i) != 0).map(atom).collect()
}

fn action(name: usize, (pre, add, del): (u8, u8, u8)) -> GroundAction {
    GroundAction::new(format!("a{name}"), vec![], atoms(pre), atoms(add), atoms(del))
}

fn vocabulary() -> Vocabulary {
    Vocabulary {
        objects: (0..POOL).map(|i| Symbol::new(format!("o{i}"))).collect(),
        predicates: [(Symbol::new("P"), 1)].into(),
    }
}

fn masks() -> impl Strategy<Value = (u8, u8, u8)> {
    (0u8..64, 0u8..64, 0u8..64)
}

fn problem_from(initial: u8, goals: &[u8], actions: &[(u8, u8, u8)]) -> PlanningProblem {
    PlanningProblem::new(
        "random",
        vocabulary(),
        State::from(atoms(initial)),
        goals.iter().filter_map(|&g| Goal::new(atoms(g))).collect(),
        actions.iter().enumerate().map(|(i, &m)| action(i, m)).collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn gamma_frame_property(state in 0u8..64, m in masks()) {
        let s = State::from(atoms(state));
        let a = action(0, m);
        match gamma(&s, &a) {
            None => prop_assert!(!a.pre.is_subset(s.atoms())),
            Some(next) => {
                for i in 0..POOL {
                    let x = atom(i);
                    let expected = if a.add.contains(&x) {
                        true
                    } else if a.del.contains(&x) {
                        false
                    } else {
                        s.contains(&x)
                    };
                    prop_assert_eq!(next.contains(&x), expected, "{}", x);
                }
            }
        }
    }

    #[test]
    fn trace_matches_elementwise_oracle(initial in 0u8..64, acts in prop::collection::vec(masks(), 0..8)) {
        let problem = problem_from(initial, &[], &acts);
        let plan = Plan::new(problem.actions.clone());
        let trace = gamma_star(&problem, &plan);
        let init: Vec<Atom> = problem.initial.iter().cloned().collect();
        let oracle = oracle_trace(&init, plan.steps());
        prop_assert_eq!(trace.failure, oracle.failure);
        prop_assert_eq!(trace.states.len(), oracle.states.len());
        for (s, o) in trace.states.iter().zip(&oracle.states) {
            prop_assert_eq!(s.atoms(), &as_set(o));
        }
    }

    #[test]
    fn validity_matches_oracle(initial in 0u8..64, goals in prop::collection::vec(0u8..64, 0..4), acts in prop::collection::vec(masks(), 0..6)) {
        let problem = problem_from(initial, &goals, &acts);
        let plan = Plan::new(problem.actions.clone());
        let report = validate_plan(&problem, &plan);
        prop_assert_eq!(report.valid, oracle_valid(&problem, &plan));
        prop_assert_eq!(check_validity_alignment(&problem, &plan).accepted, report.valid);
    }

    #[test]
    fn achiever_establishes_goal_for_good(initial in 0u8..64, goal in 1u8..64, acts in prop::collection::vec(masks(), 0..6)) {
        let problem = problem_from(initial, &[goal], &acts);
        let plan = Plan::new(problem.actions.clone());
        let trace = gamma_star(&problem, &plan);
        let g = &problem.goals[0];
        match achiever(&trace, g) {
            Err(_) => prop_assert!(!trace.all_goals_hold()),
            Ok(who) => {
                let from = match who { Achiever::Initial => 0, Achiever::Step(i) => i };
                for s in &trace.states[from..] {
                    prop_assert!(g.holds_in(s));
                }
                for step in &plan.steps()[from..] {
                    prop_assert!(g.requirements().is_disjoint(&step.add));
                }
            }
        }
    }

    #[test]
    fn grounded_matches_oracles(seed in any::<u64>(), n in 0usize..=10, density in 0.0f64..=0.4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let aaf = random_aaf(&mut rng, n, density);
        let grounded = aaf.grounded().members;
        prop_assert_eq!(&grounded, &brute_force_grounded(&aaf).unwrap().members);
        prop_assert_eq!(&grounded, &oracle_grounded(&aaf));
        prop_assert!(aaf.is_conflict_free(&grounded).unwrap());
        prop_assert!(aaf.is_admissible(&grounded).unwrap());
        prop_assert!(aaf.is_complete(&grounded).unwrap());
        // the defence operator reaches the fixpoint within |nodes| rounds
        let mut current = BTreeSet::new();
        for _ in 0..aaf.len() {
            current = aaf.characteristic(&current).unwrap();
        }
        prop_assert_eq!(current, grounded);
    }

    #[test]
    fn framework_properties_on_random_plans(indices in prop::collection::vec(0usize..18, 0..6)) {
        let (problem, _) = fixtures::blocks();
        let plan = Plan::new(indices.iter().map(|&i| problem.actions[i].clone()).collect());
        let alignment = check_validity_alignment(&problem, &plan);
        prop_assert!(alignment.aligned());
        prop_assert_eq!(alignment.valid, oracle_valid(&problem, &plan));
        let full = FullFramework::new(&problem, &plan);
        prop_assert!(full.graph.aaf.attacks().all(|(a, b)| a != b));
        if alignment.valid {
            check_valid_framework(&problem, &plan, &full);
        }
    }
}

/// Pairing, acceptance of every argument, and loss of `Arg_pi` when any
/// single answer is withheld.
fn check_valid_framework(problem: &PlanningProblem, plan: &Plan, full: &FullFramework) {
    let aaf = &full.graph.aaf;
    assert_eq!(full.arguments.len(), full.questions.len());
    for cq in &full.questions {
        let attackers = aaf.attackers(&cq.id());
        assert_eq!(attackers, BTreeSet::from([cq.target_argument_id().as_str()]), "{cq}");
    }
    let grounded = aaf.grounded();
    for arg in &full.arguments {
        assert!(grounded.contains(&arg.id()), "{}", arg.id());
    }
    for skip in &full.arguments {
        let kept: Vec<_> = full.arguments.iter().filter(|a| a.id() != skip.id()).collect();
        let reduced = build_aaf(kept, &full.questions, plan.len(), problem.goals.len());
        assert!(
            !reduced.grounded().contains(&CriticalQuestion::CQ1.target_argument_id()),
            "without {}",
            skip.id()
        );
    }
}

#[test]
fn fixture_framework_properties() {
    let (problem, plan) = fixtures::blocks();
    let full = FullFramework::new(&problem, &plan);
    check_valid_framework(&problem, &plan, &full);
    let kinds: Vec<SchemeKind> = full.arguments.iter().map(|a| a.kind()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == SchemeKind::Goal).count(), 5);
    assert_eq!(full.graph.aaf.len(), 24);
}

// Parser round trip over generated domains and problems.

#[derive(Debug, Clone)]
struct GenDomain {
    predicates: Vec<usize>,
    actions: Vec<GenAction>,
}

#[derive(Debug, Clone)]
struct GenAction {
    params: usize,
    pre: Vec<(usize, Vec<usize>)>,
    add: Vec<(usize, Vec<usize>)>,
    del: Vec<(usize, Vec<usize>)>,
}

fn literal(arities: Vec<usize>, params: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..arities.len()).prop_flat_map(move |p| {
        let arity = arities[p];
        (Just(p), prop::collection::vec(0..params.max(1), arity))
    })
}

fn gen_domain() -> impl Strategy<Value = GenDomain> {
    prop::collection::vec(0usize..3, 1..4).prop_flat_map(|predicates| {
        let action = (1usize..4).prop_flat_map({
            let predicates = predicates.clone();
            move |params| {
                let lit = || literal(predicates.clone(), params);
                (
                    Just(params),
                    prop::collection::vec(lit(), 0..3),
                    prop::collection::vec(lit(), 0..3),
                    prop::collection::vec(lit(), 0..3),
                )
                    .prop_map(|(params, pre, add, del)| GenAction { params, pre, add, del })
            }
        });
        (Just(predicates), prop::collection::vec(action, 0..3))
            .prop_map(|(predicates, actions)| GenDomain { predicates, actions })
    })
}

fn spell(name: &str, upper: bool) -> String {
    if upper {
        name.to_uppercase()
    } else {
        name.to_string()
    }
}

fn write_literals(out: &mut String, lits: &[(usize, Vec<usize>)], negate: bool, upper: bool) {
    for (p, args) in lits {
        if negate {
            out.push_str("(not ");
        }
        out.push_str(&format!("({}", spell(&format!("pred{p}"), upper)));
        for a in args {
            out.push_str(&format!(" ?v{a}"));
        }
        out.push(')');
        if negate {
            out.push(')');
        }
        out.push_str(" ; literal\n   ");
    }
}

fn domain_text(d: &GenDomain, upper: bool) -> String {
    let mut out = format!(
        "; generated\n(define (domain {})\n (:requirements :strips)\n (:predicates",
        spell("gen", upper)
    );
    for (i, arity) in d.predicates.iter().enumerate() {
        out.push_str(&format!(" (pred{i}"));
        for v in 0..*arity {
            out.push_str(&format!(" ?x{v}"));
        }
        out.push(')');
    }
    out.push_str(")\n");
    for (i, a) in d.actions.iter().enumerate() {
        out.push_str(&format!(
            "\t(:action {}\n  :parameters (",
            spell(&format!("act{i}"), upper)
        ));
        for v in 0..a.params {
            out.push_str(&format!(" ?v{v}"));
        }
        out.push_str(")\n  :precondition (and ");
        write_literals(&mut out, &a.pre, false, upper);
        out.push_str(")\r\n  :effect (and ");
        write_literals(&mut out, &a.add, false, upper);
        write_literals(&mut out, &a.del, true, upper);
        out.push_str("))\n");
    }
    out.push(')');
    out
}

proptest! {
    #[test]
    fn generated_domains_round_trip(d in gen_domain(), upper in any::<bool>()) {
        let text = domain_text(&d, upper);
        let parsed = parse_domain(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(parsed.actions.len(), d.actions.len());
        let reparsed = parse_domain(&parsed.to_string()).unwrap();
        prop_assert_eq!(&reparsed, &parsed);
        // case-insensitive identity
        let other = parse_domain(&domain_text(&d, !upper)).unwrap();
        prop_assert_eq!(&other, &parsed);
    }

    #[test]
    fn generated_problems_round_trip(d in gen_domain(), objects in 1usize..4, seed in any::<u64>()) {
        use rand::Rng;
        let dom = parse_domain(&domain_text(&d, false)).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let lit = |rng: &mut StdRng| {
            let p = rng.gen_range(0..d.predicates.len());
            let args: Vec<String> = (0..d.predicates[p]).map(|_| format!("OBJ{}", rng.gen_range(0..objects))).collect();
            format!("(pred{p} {})", args.join(" "))
        };
        let init: Vec<String> = (0..rng.gen_range(0..5)).map(|_| lit(&mut rng)).collect();
        let goal: Vec<String> = (0..rng.gen_range(0..4)).map(|_| lit(&mut rng)).collect();
        let objs: Vec<String> = (0..objects).map(|i| format!("obj{i}")).collect();
        let text = format!(
            "(define (problem p)\n (:domain GEN)\n (:objects {})\n (:init {})\n (:goal (and {})))",
            objs.join(" "), init.join(" "), goal.join(" ")
        );
        let prob = parse_problem(&text, &dom).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&parse_problem(&prob.to_string(), &dom).unwrap(), &prob);
        // plans over the universe survive formatting
        if let Some(universe) = prob.ground_universe(&dom) {
            let steps: Vec<GroundAction> = universe.into_iter().take(4).collect();
            let plan = Plan::new(steps);
            prop_assert_eq!(parse_plan(&format_plan(&plan), &dom, &prob).unwrap(), plan);
        }
    }
}
