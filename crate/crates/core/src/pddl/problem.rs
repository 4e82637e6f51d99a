use std::collections::HashSet;
use std::fmt;

use super::domain::{expect_atom, header, literal_parts, section_keyword};
use super::sexpr::{self, Sexpr};
use super::{DomainAst, ParseError, ParseErrorKind, UNIVERSE_LIMIT};
use crate::planning::{Atom, Goal, GroundAction, Plan, PlanningProblem, State, Vocabulary};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemAst {
    pub name: Symbol,
    pub domain: Symbol,
    pub objects: Vec<Symbol>,
    pub init: Vec<Atom>,
    /// Each goal atom becomes a single-requirement goal.
    pub goal: Vec<Atom>,
}

struct Resolver<'a> {
    domain: &'a DomainAst,
    objects: &'a [Symbol],
}

impl Resolver<'_> {
    /// Resolves a ground atom to the declared spellings.
    fn atom(&self, expr: &Sexpr) -> Result<Atom, ParseError> {
        let (head, args) = literal_parts(expr)?;
        let name = Symbol::new(head.as_atom().unwrap());
        let decl = self
            .domain
            .predicate(&name)
            .ok_or_else(|| ParseError::new(head.pos(), ParseErrorKind::UnknownPredicate(name.to_string())))?;
        if decl.arity() != args.len() {
            return Err(ParseError::new(
                expr.pos(),
                ParseErrorKind::ArityMismatch {
                    predicate: decl.name.to_string(),
                    expected: decl.arity(),
                    found: args.len(),
                },
            ));
        }
        let mut resolved = Vec::with_capacity(args.len());
        for arg in args {
            let text = expect_atom(arg, "an object")?;
            if text.starts_with('?') {
                return Err(ParseError::new(arg.pos(), ParseErrorKind::NonGround(text.to_string())));
            }
            let sym = Symbol::new(text);
            let object = self
                .objects
                .iter()
                .find(|o| **o == sym)
                .ok_or_else(|| ParseError::new(arg.pos(), ParseErrorKind::UnknownObject(text.to_string())))?;
            resolved.push(object.clone());
        }
        Ok(Atom {
            predicate: decl.name.clone(),
            args: resolved,
        })
    }
}

pub fn parse_problem(text: &str, domain: &DomainAst) -> Result<ProblemAst, ParseError> {
    let root = sexpr::read_one(text)?;
    let (name, sections) = header(&root, "problem")?;

    let mut seen = HashSet::new();
    let mut domain_name = None;
    let mut objects: Vec<Symbol> = Vec::new();
    let mut init_exprs: &[Sexpr] = &[];
    let mut goal_expr = None;
    for section in sections {
        let (kw, pos, body) = section_keyword(section)?;
        if !seen.insert(kw.clone()) {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::Duplicate {
                    what: "section",
                    name: kw,
                },
            ));
        }
        match kw.as_str() {
            ":domain" => match body {
                [d] => {
                    let d = Symbol::new(expect_atom(d, "a domain name")?);
                    if d != domain.name {
                        return Err(ParseError::new(
                            body[0].pos(),
                            ParseErrorKind::DomainMismatch {
                                expected: domain.name.to_string(),
                                found: d.to_string(),
                            },
                        ));
                    }
                    domain_name = Some(d);
                }
                _ => return Err(ParseError::syntax(pos, "expected `(:domain NAME)`")),
            },
            ":objects" => {
                for obj in body {
                    let text = expect_atom(obj, "an object name")?;
                    if text == "-" {
                        return Err(ParseError::new(obj.pos(), ParseErrorKind::Unsupported("typing".into())));
                    }
                    if text.starts_with('?') {
                        return Err(ParseError::new(obj.pos(), ParseErrorKind::NonGround(text.to_string())));
                    }
                    let sym = Symbol::new(text);
                    if objects.contains(&sym) {
                        return Err(ParseError::new(
                            obj.pos(),
                            ParseErrorKind::Duplicate {
                                what: "object",
                                name: text.to_string(),
                            },
                        ));
                    }
                    objects.push(sym);
                }
            }
            ":init" => init_exprs = body,
            ":goal" => match body {
                [g] => goal_expr = Some(g),
                _ => return Err(ParseError::syntax(pos, "expected `(:goal FORMULA)`")),
            },
            other => {
                return Err(ParseError::new(
                    pos,
                    ParseErrorKind::Unsupported(format!("section `{other}`")),
                ))
            }
        }
    }
    let domain_name = domain_name.ok_or_else(|| ParseError::syntax(root.pos(), "missing `(:domain NAME)`"))?;
    let goal_expr = goal_expr.ok_or_else(|| ParseError::syntax(root.pos(), "missing `(:goal ...)`"))?;

    let resolver = Resolver {
        domain,
        objects: &objects,
    };
    let mut init = Vec::with_capacity(init_exprs.len());
    for expr in init_exprs {
        let atom = resolver.atom(expr)?;
        if !init.contains(&atom) {
            init.push(atom);
        }
    }
    let mut goal = Vec::new();
    for (positive, lit) in super::domain::conjunction(goal_expr)? {
        if !positive {
            return Err(ParseError::new(
                lit.pos(),
                ParseErrorKind::Unsupported("negative goals".into()),
            ));
        }
        let atom = resolver.atom(lit)?;
        if !goal.contains(&atom) {
            goal.push(atom);
        }
    }
    Ok(ProblemAst {
        name,
        domain: domain_name,
        objects,
        init,
        goal,
    })
}

impl ProblemAst {
    /// Every grounding of every schema, or `None` when that exceeds
    /// [`UNIVERSE_LIMIT`].
    pub fn ground_universe(&self, domain: &DomainAst) -> Option<Vec<GroundAction>> {
        let n = self.objects.len();
        let mut total = 0usize;
        for schema in &domain.actions {
            let count = u32::try_from(schema.params.len())
                .ok()
                .and_then(|arity| n.checked_pow(arity))?;
            total = total.checked_add(count)?;
        }
        if total > UNIVERSE_LIMIT {
            return None;
        }
        let mut actions = Vec::with_capacity(total);
        for schema in &domain.actions {
            let arity = schema.params.len();
            let mut counter = vec![0usize; arity];
            if arity > 0 && n == 0 {
                continue;
            }
            loop {
                let objects: Vec<Symbol> = counter.iter().map(|&i| self.objects[i].clone()).collect();
                actions.push(schema.instantiate(&objects).expect("arity matches parameters"));
                // Odometer increment over object indices.
                let mut pos = arity;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    counter[pos] += 1;
                    if counter[pos] < n {
                        break;
                    }
                    counter[pos] = 0;
                }
                if counter.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        Some(actions)
    }

    pub fn to_planning_problem(&self, domain: &DomainAst, plan: &Plan) -> PlanningProblem {
        let vocabulary = Vocabulary {
            objects: self.objects.iter().cloned().collect(),
            predicates: domain.predicates.iter().map(|p| (p.name.clone(), p.arity())).collect(),
        };
        let actions = self.ground_universe(domain).unwrap_or_else(|| {
            let mut steps: Vec<GroundAction> = Vec::new();
            for step in plan.steps() {
                if !steps.contains(step) {
                    steps.push(step.clone());
                }
            }
            steps
        });
        let initial: State = self.init.iter().cloned().collect();
        let goals = self.goal.iter().cloned().map(Goal::single).collect();
        PlanningProblem::new(self.name.clone(), vocabulary, initial, goals, actions)
            .expect("parsed atoms are validated against the domain")
    }
}

fn write_atoms(f: &mut fmt::Formatter<'_>, atoms: &[Atom]) -> fmt::Result {
    for atom in atoms {
        write!(f, " ({}", atom.predicate)?;
        for arg in &atom.args {
            write!(f, " {arg}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for ProblemAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (problem {})", self.name)?;
        writeln!(f, "  (:domain {})", self.domain)?;
        f.write_str("  (:objects")?;
        for o in &self.objects {
            write!(f, " {o}")?;
        }
        writeln!(f, ")")?;
        f.write_str("  (:init")?;
        write_atoms(f, &self.init)?;
        writeln!(f, ")")?;
        f.write_str("  (:goal (and")?;
        write_atoms(f, &self.goal)?;
        f.write_str(")))\n")
    }
}
