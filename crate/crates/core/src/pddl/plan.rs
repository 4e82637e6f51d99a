use super::domain::expect_atom;
use super::sexpr::{self, Sexpr};
use super::{DomainAst, ParseError, ParseErrorKind, ProblemAst};
use crate::planning::Plan;
use crate::symbol::Symbol;

/// Parses ground applications `(name obj ...)`, one per line.
pub fn parse_plan(text: &str, domain: &DomainAst, problem: &ProblemAst) -> Result<Plan, ParseError> {
    let mut steps = Vec::new();
    for expr in sexpr::read_all(text)? {
        let items = match &expr {
            Sexpr::List(items, _) => items,
            Sexpr::Atom(..) => return Err(ParseError::syntax(expr.pos(), "expected `(action object ...)`")),
        };
        let (head, args) = items
            .split_first()
            .ok_or_else(|| ParseError::syntax(expr.pos(), "empty plan step"))?;
        let name = Symbol::new(expect_atom(head, "an action name")?);
        let schema = domain
            .action(&name)
            .ok_or_else(|| ParseError::new(head.pos(), ParseErrorKind::UnknownAction(name.to_string())))?;
        if args.len() != schema.params.len() {
            return Err(ParseError::new(
                expr.pos(),
                ParseErrorKind::WrongArgumentCount {
                    action: schema.name.to_string(),
                    expected: schema.params.len(),
                    found: args.len(),
                },
            ));
        }
        let mut objects = Vec::with_capacity(args.len());
        for arg in args {
            let sym = Symbol::new(expect_atom(arg, "an object")?);
            let object = problem
                .objects
                .iter()
                .find(|o| **o == sym)
                .ok_or_else(|| ParseError::new(arg.pos(), ParseErrorKind::UnknownObject(sym.to_string())))?;
            objects.push(object.clone());
        }
        steps.push(schema.instantiate(&objects).expect("argument count checked"));
    }
    Ok(Plan::new(steps))
}

/// Writes a plan back in the plan-file format.
pub fn format_plan(plan: &Plan) -> String {
    let mut out = String::new();
    for step in plan.steps() {
        out.push('(');
        out.push_str(step.name.display_name());
        for arg in &step.args {
            out.push(' ');
            out.push_str(arg.display_name());
        }
        out.push_str(")\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{BLOCKS_DOMAIN, BLOCKS_PLAN, BLOCKS_PROBLEM};
    use crate::pddl::{parse_domain, parse_problem};

    fn parse(text: &str) -> Result<Plan, ParseError> {
        let dom = parse_domain(BLOCKS_DOMAIN).unwrap();
        let prob = parse_problem(BLOCKS_PROBLEM, &dom).unwrap();
        parse_plan(text, &dom, &prob)
    }

    #[test]
    fn three_step_plan() {
        let plan = parse(BLOCKS_PLAN).unwrap();
        assert_eq!(plan.len(), 3);
        assert_eq!(plan.to_string(), "⟨Unstack(A,B), Unstack(B,C), Stack(C,A)⟩");
        assert_eq!(parse(&format_plan(&plan)).unwrap(), plan);
    }

    #[test]
    fn blank_and_comment_only() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("; nothing here\n\n   ; still nothing\r\n").unwrap().is_empty());
    }

    #[test]
    fn bad_steps() {
        let err = parse("(stack c)").unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::WrongArgumentCount {
                expected: 2,
                found: 1,
                ..
            }
        ));
        let err = parse("(unstack a b)\n(pickup a)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownAction("pickup".into()));
        assert_eq!(err.pos.line, 2);
        let err = parse("(unstack a z)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownObject("z".into()));
        assert!(matches!(parse("unstack").unwrap_err().kind, ParseErrorKind::Syntax(_)));
    }
}
