//! Horn rules in the SWRL human-readable style.
//!
//! ```text
//! PREFIX ex: <http://example.org/>
//! # comment
//! [cloud-design] AIAS:CloudSystem(?c) ^ VDI3682:Assignment(?a) ^
//!     AIAS:isAssignedTo(?c, ?a) -> ISO22989:hasDesign(AIAS:AISystem, AIAS:CloudDesign)
//! ```
//!
//! A rule ends with `.` or at the end of the line holding its last head
//! atom; a line ending in `^` continues the rule. The optional `[id]` names
//! the rule, otherwise it is `rule-N` by position.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{is_valid_prefix_label, PrefixMap};
use crate::ns;
use crate::syntax::{Cursor, ParseError, Position};
use crate::term::{Iri, PatternTerm, Term, TriplePattern, Variable};
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("rule {rule}: head variable {variable} does not occur in the body")]
    UnsafeRule { rule: String, variable: Variable },
    #[error("{line}:{column}: unbound prefix {prefix:?}")]
    UnboundPrefix { prefix: String, line: usize, column: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Class { class: Iri, term: PatternTerm },
    Property { property: Iri, subject: PatternTerm, object: PatternTerm },
}

impl Atom {
    pub fn to_pattern(&self) -> TriplePattern {
        match self {
            Atom::Class { class, term } => TriplePattern::new(term.clone(), ns::rdf::type_(), class.clone()),
            Atom::Property { property, subject, object } => TriplePattern::new(subject.clone(), property.clone(), object.clone()),
        }
    }

    pub fn variables(&self) -> Vec<&Variable> {
        match self {
            Atom::Class { term, .. } => term.as_variable().into_iter().collect(),
            Atom::Property { subject, object, .. } => [subject, object].into_iter().filter_map(PatternTerm::as_variable).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Class { class, term } => write!(f, "{class}({term})"),
            Atom::Property { property, subject, object } => write!(f, "{property}({subject}, {object})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub body: Vec<Atom>,
    pub head: Vec<Atom>,
}

impl Rule {
    /// Builds a rule, rejecting heads that use variables absent from the body.
    pub fn new(id: impl Into<String>, body: Vec<Atom>, head: Vec<Atom>) -> Result<Self, RuleError> {
        let id = id.into();
        let bound: BTreeSet<&Variable> = body.iter().flat_map(Atom::variables).collect();
        if let Some(var) = head.iter().flat_map(Atom::variables).find(|v| !bound.contains(v)) {
            return Err(RuleError::UnsafeRule {
                rule: id,
                variable: var.clone(),
            });
        }
        Ok(Rule { id, body, head })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |atoms: &[Atom]| atoms.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ^ ");
        write!(f, "[{}] {} -> {}", self.id, join(&self.body), join(&self.head))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new(rules: Vec<Rule>) -> Self {
        RuleSet { rules }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }
}

/// Parses a rule document against the built-in schema prefixes.
pub fn parse_rules(text: &str) -> Result<RuleSet, RuleError> {
    parse_rules_with(text, Vocabulary::builtin().prefixes())
}

pub fn parse_rules_with(text: &str, prefixes: &PrefixMap) -> Result<RuleSet, RuleError> {
    let mut parser = RuleParser {
        cursor: Cursor::new(text),
        prefixes: prefixes.clone(),
    };
    let mut rules: Vec<Rule> = Vec::new();
    loop {
        parser.cursor.skip_trivia();
        if parser.cursor.is_eof() {
            break;
        }
        if parser.cursor.eat_keyword("PREFIX") || parser.cursor.eat_keyword("@prefix") {
            parser.prefix()?;
            continue;
        }
        let start = parser.cursor.position();
        let rule = parser.rule(rules.len() + 1)?;
        if rules.iter().any(|r| r.id == rule.id) {
            return Err(parser.cursor.error_at(start, format!("duplicate rule id {:?}", rule.id), rule.id).into());
        }
        rules.push(rule);
    }
    Ok(RuleSet { rules })
}

struct RuleParser<'a> {
    cursor: Cursor<'a>,
    prefixes: PrefixMap,
}

impl RuleParser<'_> {
    fn prefix(&mut self) -> Result<(), RuleError> {
        self.cursor.skip_trivia();
        let start = self.cursor.position();
        let (label, local) = self.cursor.read_pname()?;
        if !local.is_empty() || !is_valid_prefix_label(&label) {
            return Err(self.cursor.error_at(start, "expected a prefix label ending in ':'", format!("{label}:{local}")).into());
        }
        self.cursor.skip_trivia();
        let ns = self.cursor.read_iriref()?;
        self.cursor.skip_inline_trivia();
        self.cursor.eat('.');
        self.prefixes.bind(label, ns);
        Ok(())
    }

    fn rule(&mut self, position: usize) -> Result<Rule, RuleError> {
        let id = if self.cursor.eat('[') {
            let start = self.cursor.position();
            let mut id = String::new();
            while let Some(c) = self.cursor.peek().filter(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.')) {
                id.push(c);
                self.cursor.bump();
            }
            if id.is_empty() {
                return Err(self.cursor.error_at(start, "empty rule id", "").into());
            }
            self.cursor.expect(']', "']' after rule id")?;
            self.cursor.skip_trivia();
            id
        } else {
            format!("rule-{position}")
        };

        let mut body = vec![self.atom()?];
        loop {
            self.cursor.skip_trivia();
            if self.eat_conjunction() {
                self.cursor.skip_trivia();
                body.push(self.atom()?);
            } else if self.eat_arrow() {
                break;
            } else if self.cursor.is_eof() {
                return Err(self.cursor.error("unexpected end of input, expected '^' or '->'").into());
            } else {
                return Err(self.cursor.error("expected '^' or '->'").into());
            }
        }

        let mut head = Vec::new();
        loop {
            self.cursor.skip_trivia();
            head.push(self.atom()?);
            self.cursor.skip_inline_trivia();
            if self.cursor.eat('.') {
                break;
            }
            if self.eat_conjunction() {
                continue;
            }
            if self.cursor.is_eof() || self.cursor.peek() == Some('\n') || self.cursor.peek() == Some('\r') {
                // A following line may continue the head with '^'.
                let mut look = self.cursor.clone();
                look.skip_trivia();
                if matches!(look.peek(), Some('^' | '∧')) {
                    self.cursor = look;
                    self.eat_conjunction();
                    continue;
                }
                break;
            }
            return Err(self.cursor.error("expected '^', '.' or end of line after head atom").into());
        }
        Rule::new(id, body, head)
    }

    fn eat_conjunction(&mut self) -> bool {
        self.cursor.eat('^') || self.cursor.eat('∧')
    }

    fn eat_arrow(&mut self) -> bool {
        if self.cursor.starts_with("->") {
            self.cursor.bump();
            self.cursor.bump();
            true
        } else {
            self.cursor.eat('→')
        }
    }

    fn atom(&mut self) -> Result<Atom, RuleError> {
        let name_start = self.cursor.position();
        if self.cursor.is_eof() {
            return Err(self.cursor.error("unexpected end of input, expected an atom").into());
        }
        let name = self.iri()?;
        if !self.cursor.eat('(') {
            return Err(self
                .cursor
                .error_at(name_start, "built-in or malformed atom: expected '(' after the predicate name", self.cursor.current_token())
                .into());
        }
        let mut args = Vec::new();
        loop {
            self.cursor.skip_trivia();
            args.push(self.argument()?);
            self.cursor.skip_trivia();
            if self.cursor.eat(',') {
                continue;
            }
            if self.cursor.eat(')') {
                break;
            }
            return Err(if self.cursor.is_eof() {
                self.cursor.error("unexpected end of input, expected ')'")
            } else {
                self.cursor.error("expected ',' or ')'")
            }
            .into());
        }
        match args.len() {
            1 => Ok(Atom::Class {
                class: name,
                term: args.pop().expect("one argument"),
            }),
            2 => {
                let object = args.pop().expect("two arguments");
                let subject = args.pop().expect("two arguments");
                Ok(Atom::Property {
                    property: name,
                    subject,
                    object,
                })
            }
            n => Err(self.cursor.error_at(name_start, format!("atoms take one or two arguments, found {n}"), "").into()),
        }
    }

    fn argument(&mut self) -> Result<PatternTerm, RuleError> {
        match self.cursor.peek() {
            Some('?' | '$') => Ok(PatternTerm::Variable(self.cursor.read_variable()?)),
            Some(_) => Ok(PatternTerm::Term(Term::Iri(self.iri()?))),
            None => Err(self.cursor.error("unexpected end of input, expected an argument").into()),
        }
    }

    fn iri(&mut self) -> Result<Iri, RuleError> {
        if self.cursor.peek() == Some('<') {
            return Ok(self.cursor.read_iriref()?);
        }
        let start: Position = self.cursor.position();
        let (prefix, local) = self.cursor.read_pname()?;
        let ns = self.prefixes.get(&prefix).ok_or_else(|| RuleError::UnboundPrefix {
            prefix: prefix.clone(),
            line: start.line,
            column: start.column,
        })?;
        Iri::new(format!("{}{local}", ns.as_str())).map_err(|e| self.cursor.error_at(start, e.to_string(), format!("{prefix}:{local}")).into())
    }
}
