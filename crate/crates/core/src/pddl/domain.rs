use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use super::sexpr::{self, Pos, Sexpr};
use super::{GroundError, ParseError, ParseErrorKind};
use crate::planning::{Atom, GroundAction};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: Symbol,
    /// Parameter names including the leading `?`.
    pub params: Vec<Symbol>,
}

impl PredicateDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// A schema atom whose arguments are indices into the action's parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSchema {
    pub predicate: Symbol,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: Symbol,
    pub params: Vec<Symbol>,
    pub pre: Vec<AtomSchema>,
    pub add: Vec<AtomSchema>,
    pub del: Vec<AtomSchema>,
}

impl ActionSchema {
    fn substitute(&self, atom: &AtomSchema, objects: &[Symbol]) -> Atom {
        Atom {
            predicate: atom.predicate.clone(),
            args: atom.args.iter().map(|&i| objects[i].clone()).collect(),
        }
    }

    /// Grounds the schema with objects given in parameter order.
    pub fn instantiate(&self, objects: &[Symbol]) -> Result<GroundAction, GroundError> {
        if objects.len() != self.params.len() {
            return Err(GroundError::WrongArgumentCount {
                action: self.name.to_string(),
                expected: self.params.len(),
                found: objects.len(),
            });
        }
        let ground =
            |atoms: &[AtomSchema]| -> BTreeSet<Atom> { atoms.iter().map(|a| self.substitute(a, objects)).collect() };
        Ok(GroundAction::new(
            self.name.clone(),
            objects.to_vec(),
            ground(&self.pre),
            ground(&self.add),
            ground(&self.del),
        ))
    }

    /// Grounds the schema with a parameter-to-object binding.
    pub fn ground(&self, binding: &HashMap<Symbol, Symbol>) -> Result<GroundAction, GroundError> {
        let objects = self
            .params
            .iter()
            .map(|p| {
                binding.get(p).cloned().ok_or_else(|| GroundError::IncompleteBinding {
                    action: self.name.to_string(),
                    parameter: p.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.instantiate(&objects)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainAst {
    pub name: Symbol,
    pub requirements: Vec<Symbol>,
    pub predicates: Vec<PredicateDecl>,
    pub actions: Vec<ActionSchema>,
}

impl DomainAst {
    pub fn predicate(&self, name: &Symbol) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| &p.name == name)
    }

    pub fn action(&self, name: &Symbol) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| &a.name == name)
    }
}

pub(super) fn expect_list<'a>(expr: &'a Sexpr, what: &str) -> Result<&'a [Sexpr], ParseError> {
    expr.as_list()
        .ok_or_else(|| ParseError::syntax(expr.pos(), format!("expected {what}")))
}

pub(super) fn expect_atom<'a>(expr: &'a Sexpr, what: &str) -> Result<&'a str, ParseError> {
    expr.as_atom()
        .ok_or_else(|| ParseError::syntax(expr.pos(), format!("expected {what}")))
}

/// Checks `(define (<kind> NAME) ...)` and returns the name and the sections.
pub(super) fn header<'a>(root: &'a Sexpr, kind: &str) -> Result<(Symbol, &'a [Sexpr]), ParseError> {
    let items = expect_list(root, "`(define ...)`")?;
    let (first, rest) = items
        .split_first()
        .ok_or_else(|| ParseError::syntax(root.pos(), "expected `define`"))?;
    if first.keyword().as_deref() != Some("define") {
        return Err(ParseError::syntax(first.pos(), "expected `define`"));
    }
    let (head, sections) = rest
        .split_first()
        .ok_or_else(|| ParseError::syntax(root.pos(), format!("expected `({kind} NAME)`")))?;
    let head_items = expect_list(head, &format!("`({kind} NAME)`"))?;
    match head_items {
        [k, name] if k.keyword().as_deref() == Some(kind) => {
            let name = expect_atom(name, &format!("{kind} name"))?;
            Ok((Symbol::new(name), sections))
        }
        _ => Err(ParseError::syntax(head.pos(), format!("expected `({kind} NAME)`"))),
    }
}

pub(super) fn section_keyword(section: &Sexpr) -> Result<(String, Pos, &[Sexpr]), ParseError> {
    let items = expect_list(section, "a section")?;
    let (key, rest) = items
        .split_first()
        .ok_or_else(|| ParseError::syntax(section.pos(), "empty section"))?;
    let kw = key
        .keyword()
        .filter(|k| k.starts_with(':'))
        .ok_or_else(|| ParseError::syntax(key.pos(), "expected a `:section` keyword"))?;
    Ok((kw, key.pos(), rest))
}

fn is_variable(s: &str) -> bool {
    s.starts_with('?')
}

/// Parses `(p ?x ...)` into its head and arguments.
pub(super) fn literal_parts(expr: &Sexpr) -> Result<(&Sexpr, &[Sexpr]), ParseError> {
    let items = expect_list(expr, "an atom `(predicate ...)`")?;
    let (head, args) = items
        .split_first()
        .ok_or_else(|| ParseError::syntax(expr.pos(), "empty atom"))?;
    expect_atom(head, "a predicate name")?;
    Ok((head, args))
}

/// Flattens `(and ...)` (nested or not), a single literal, or `()`.
/// Returns each literal with its polarity.
pub(super) fn conjunction(expr: &Sexpr) -> Result<Vec<(bool, &Sexpr)>, ParseError> {
    let mut out = Vec::new();
    let mut pending = vec![expr];
    while let Some(e) = pending.pop() {
        let items = expect_list(e, "a formula")?;
        match items.first().and_then(Sexpr::keyword).as_deref() {
            None if items.is_empty() => {}
            Some("and") => pending.extend(items[1..].iter().rev()),
            Some("not") => match &items[1..] {
                [inner] => {
                    literal_parts(inner)?;
                    out.push((false, inner));
                }
                _ => return Err(ParseError::syntax(e.pos(), "`not` takes exactly one atom")),
            },
            Some(kw @ ("or" | "imply" | "forall" | "exists" | "when" | "=")) => {
                return Err(ParseError::new(
                    e.pos(),
                    ParseErrorKind::Unsupported(format!("`{kw}` formulas")),
                ))
            }
            _ => {
                literal_parts(e)?;
                out.push((true, e));
            }
        }
    }
    Ok(out)
}

struct ActionContext<'a> {
    name: &'a Symbol,
    params: &'a [Symbol],
    predicates: &'a [PredicateDecl],
}

impl ActionContext<'_> {
    fn atom(&self, expr: &Sexpr) -> Result<AtomSchema, ParseError> {
        let (head, args) = literal_parts(expr)?;
        let name = Symbol::new(head.as_atom().unwrap());
        let decl = self
            .predicates
            .iter()
            .find(|p| p.name == name)
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
        let mut indices = Vec::with_capacity(args.len());
        for arg in args {
            let text = expect_atom(arg, "a variable")?;
            if !is_variable(text) {
                return Err(ParseError::new(
                    arg.pos(),
                    ParseErrorKind::Unsupported(format!("constant `{text}` in action schema")),
                ));
            }
            let var = Symbol::new(text);
            let index = self.params.iter().position(|p| p == &var).ok_or_else(|| {
                ParseError::new(
                    arg.pos(),
                    ParseErrorKind::UnboundVariable {
                        variable: text.to_string(),
                        action: self.name.to_string(),
                    },
                )
            })?;
            indices.push(index);
        }
        Ok(AtomSchema {
            predicate: decl.name.clone(),
            args: indices,
        })
    }
}

fn parameter_list(expr: &Sexpr, owner: &str) -> Result<Vec<Symbol>, ParseError> {
    let items = expect_list(expr, "a parameter list")?;
    let mut params: Vec<Symbol> = Vec::with_capacity(items.len());
    for item in items {
        let text = expect_atom(item, "a parameter")?;
        if text == "-" {
            return Err(ParseError::new(
                item.pos(),
                ParseErrorKind::Unsupported("typing".into()),
            ));
        }
        if !is_variable(text) || text.len() < 2 {
            return Err(ParseError::syntax(
                item.pos(),
                format!("expected a `?variable` in `{owner}`"),
            ));
        }
        let sym = Symbol::new(text);
        if params.contains(&sym) {
            return Err(ParseError::new(
                item.pos(),
                ParseErrorKind::Duplicate {
                    what: "parameter",
                    name: text.to_string(),
                },
            ));
        }
        params.push(sym);
    }
    Ok(params)
}

fn parse_predicates(body: &[Sexpr], out: &mut Vec<PredicateDecl>) -> Result<(), ParseError> {
    for decl in body {
        let items = expect_list(decl, "a predicate declaration")?;
        let (head, params) = items
            .split_first()
            .ok_or_else(|| ParseError::syntax(decl.pos(), "empty predicate declaration"))?;
        let name = Symbol::new(expect_atom(head, "a predicate name")?);
        if out.iter().any(|p| p.name == name) {
            return Err(ParseError::new(
                head.pos(),
                ParseErrorKind::Duplicate {
                    what: "predicate",
                    name: name.to_string(),
                },
            ));
        }
        let params = parameter_list(&Sexpr::List(params.to_vec(), decl.pos()), name.canonical())?;
        out.push(PredicateDecl { name, params });
    }
    Ok(())
}

fn parse_action(key_pos: Pos, body: &[Sexpr], predicates: &[PredicateDecl]) -> Result<ActionSchema, ParseError> {
    let (name_expr, rest) = body
        .split_first()
        .ok_or_else(|| ParseError::syntax(key_pos, "expected an action name"))?;
    let name = Symbol::new(expect_atom(name_expr, "an action name")?);
    if rest.len() % 2 != 0 {
        return Err(ParseError::syntax(
            rest.last().unwrap().pos(),
            "expected `:keyword value` pairs",
        ));
    }
    let mut params = None;
    let mut precondition = None;
    let mut effect = None;
    for pair in rest.chunks(2) {
        let key = pair[0]
            .keyword()
            .ok_or_else(|| ParseError::syntax(pair[0].pos(), "expected an action keyword"))?;
        let slot = match key.as_str() {
            ":parameters" => &mut params,
            ":precondition" => &mut precondition,
            ":effect" => &mut effect,
            other => {
                return Err(ParseError::new(
                    pair[0].pos(),
                    ParseErrorKind::Unsupported(format!("action keyword `{other}`")),
                ))
            }
        };
        if slot.is_some() {
            return Err(ParseError::new(
                pair[0].pos(),
                ParseErrorKind::Duplicate {
                    what: "action keyword",
                    name: key,
                },
            ));
        }
        *slot = Some(&pair[1]);
    }
    let params = match params {
        Some(p) => parameter_list(p, name.canonical())?,
        None => Vec::new(),
    };
    let ctx = ActionContext {
        name: &name,
        params: &params,
        predicates,
    };
    let mut pre = Vec::new();
    if let Some(p) = precondition {
        for (positive, lit) in conjunction(p)? {
            if !positive {
                return Err(ParseError::new(
                    lit.pos(),
                    ParseErrorKind::Unsupported("negative preconditions".into()),
                ));
            }
            pre.push(ctx.atom(lit)?);
        }
    }
    let (mut add, mut del) = (Vec::new(), Vec::new());
    if let Some(e) = effect {
        for (positive, lit) in conjunction(e)? {
            let atom = ctx.atom(lit)?;
            if positive {
                add.push(atom);
            } else {
                del.push(atom);
            }
        }
    }
    Ok(ActionSchema {
        name,
        params,
        pre,
        add,
        del,
    })
}

pub fn parse_domain(text: &str) -> Result<DomainAst, ParseError> {
    let root = sexpr::read_one(text)?;
    let (name, sections) = header(&root, "domain")?;

    let mut requirements: Vec<Symbol> = Vec::new();
    let mut predicates = Vec::new();
    let mut seen = HashSet::new();
    let mut action_bodies = Vec::new();
    for section in sections {
        let (kw, pos, body) = section_keyword(section)?;
        if kw != ":action" && !seen.insert(kw.clone()) {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::Duplicate {
                    what: "section",
                    name: kw,
                },
            ));
        }
        match kw.as_str() {
            ":requirements" => {
                for req in body {
                    let text = expect_atom(req, "a requirement")?;
                    if !text.eq_ignore_ascii_case(":strips") {
                        return Err(ParseError::new(
                            req.pos(),
                            ParseErrorKind::Unsupported(format!("requirement `{text}`")),
                        ));
                    }
                    requirements.push(Symbol::new(text));
                }
            }
            ":predicates" => parse_predicates(body, &mut predicates)?,
            ":action" => action_bodies.push((pos, body)),
            other => {
                return Err(ParseError::new(
                    pos,
                    ParseErrorKind::Unsupported(format!("section `{other}`")),
                ))
            }
        }
    }

    let mut actions: Vec<ActionSchema> = Vec::new();
    for (pos, body) in action_bodies {
        let action = parse_action(pos, body, &predicates)?;
        if actions.iter().any(|a| a.name == action.name) {
            return Err(ParseError::new(
                body[0].pos(),
                ParseErrorKind::Duplicate {
                    what: "action",
                    name: action.name.to_string(),
                },
            ));
        }
        actions.push(action);
    }
    Ok(DomainAst {
        name,
        requirements,
        predicates,
        actions,
    })
}

fn write_atom(f: &mut fmt::Formatter<'_>, atom: &AtomSchema, params: &[Symbol]) -> fmt::Result {
    write!(f, "({}", atom.predicate)?;
    for &i in &atom.args {
        write!(f, " {}", params[i])?;
    }
    f.write_str(")")
}

impl fmt::Display for DomainAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (domain {})", self.name)?;
        if !self.requirements.is_empty() {
            f.write_str("  (:requirements")?;
            for r in &self.requirements {
                write!(f, " {r}")?;
            }
            writeln!(f, ")")?;
        }
        if !self.predicates.is_empty() {
            f.write_str("  (:predicates")?;
            for p in &self.predicates {
                write!(f, " ({}", p.name)?;
                for param in &p.params {
                    write!(f, " {param}")?;
                }
                f.write_str(")")?;
            }
            writeln!(f, ")")?;
        }
        for a in &self.actions {
            writeln!(f, "  (:action {}", a.name)?;
            f.write_str("    :parameters (")?;
            for (i, p) in a.params.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            writeln!(f, ")")?;
            f.write_str("    :precondition (and")?;
            for atom in &a.pre {
                f.write_str(" ")?;
                write_atom(f, atom, &a.params)?;
            }
            writeln!(f, ")")?;
            f.write_str("    :effect (and")?;
            for atom in &a.add {
                f.write_str(" ")?;
                write_atom(f, atom, &a.params)?;
            }
            for atom in &a.del {
                f.write_str(" (not ")?;
                write_atom(f, atom, &a.params)?;
                f.write_str(")")?;
            }
            writeln!(f, "))")?;
        }
        f.write_str(")\n")
    }
}
