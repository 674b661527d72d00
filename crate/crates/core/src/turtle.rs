//! Reader and writer for the Turtle subset used as the toolkit's exchange format.
//!
//! Supported: `@prefix`/`PREFIX`, `a`, predicate lists, object lists,
//! labeled blank nodes, `[ ... ]` property lists, quoted strings with
//! `@lang` or `^^datatype`, integer/decimal/boolean shorthands and `#`
//! comments. Collections, `@base` and long strings are rejected.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::graph::{Graph, PrefixMap};
use crate::ns;
use crate::syntax::{is_name_char, Cursor, ParseError};
use crate::term::{escape_string, BlankNode, Iri, Literal, Term, Triple};

const ANON_MARK: &str = ".anon";

pub fn parse_turtle(document: &str) -> Result<Graph, ParseError> {
    parse_turtle_with(document, &PrefixMap::new())
}

/// Parses `document` with `prefixes` pre-bound. Document declarations
/// override them; both end up in the graph's prefix table.
pub fn parse_turtle_with(document: &str, prefixes: &PrefixMap) -> Result<Graph, ParseError> {
    let mut parser = Parser {
        cursor: Cursor::new(document),
        prefixes: prefixes.clone(),
        triples: Vec::new(),
        anon_count: 0,
        labels: BTreeSet::new(),
    };
    parser.document()?;
    Ok(parser.finish())
}

struct Parser<'a> {
    cursor: Cursor<'a>,
    prefixes: PrefixMap,
    triples: Vec<Triple>,
    anon_count: usize,
    labels: BTreeSet<String>,
}

impl Parser<'_> {
    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            self.cursor.skip_trivia();
            if self.cursor.is_eof() {
                return Ok(());
            }
            self.statement()?;
        }
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        let c = &mut self.cursor;
        if c.starts_with("@prefix") {
            c.eat_keyword("@prefix");
            self.prefix_body()?;
            self.cursor.skip_trivia();
            return self.cursor.expect('.', "'.' after prefix declaration");
        }
        if c.eat_keyword("PREFIX") {
            return self.prefix_body();
        }
        if c.starts_with("@base") || c.eat_keyword("BASE") {
            return Err(c.error("base IRI declarations are not supported"));
        }
        if c.starts_with("@") {
            return Err(c.error("unknown directive"));
        }
        self.triples_statement()
    }

    fn prefix_body(&mut self) -> Result<(), ParseError> {
        self.cursor.skip_trivia();
        let start = self.cursor.position();
        let (label, local) = self.cursor.read_pname()?;
        if !local.is_empty() {
            return Err(self.cursor.error_at(start, "expected a prefix label ending in ':'", format!("{label}:{local}")));
        }
        self.cursor.skip_trivia();
        let ns = self.cursor.read_iriref()?;
        self.prefixes.bind(label, ns);
        Ok(())
    }

    fn triples_statement(&mut self) -> Result<(), ParseError> {
        if self.cursor.peek() == Some('[') {
            let subject = self.blank_property_list()?;
            self.cursor.skip_trivia();
            if self.cursor.peek() != Some('.') {
                self.predicate_object_list(&subject)?;
            }
        } else {
            let subject = self.subject()?;
            self.cursor.skip_trivia();
            self.predicate_object_list(&subject)?;
        }
        self.cursor.skip_trivia();
        self.cursor.expect('.', "'.' at end of statement")
    }

    fn subject(&mut self) -> Result<Term, ParseError> {
        match self.cursor.peek() {
            Some('<') => Ok(Term::Iri(self.cursor.read_iriref()?)),
            Some('_') if self.cursor.peek_nth(1) == Some(':') => self.blank_label(),
            Some('[') => self.blank_property_list(),
            Some('(') => Err(self.cursor.error("collections are not supported")),
            Some(_) => Ok(Term::Iri(self.cursor.read_prefixed_iri(&self.prefixes)?)),
            None => Err(self.cursor.error("unexpected end of input, expected a subject")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), ParseError> {
        loop {
            let predicate = self.verb()?;
            loop {
                self.cursor.skip_trivia();
                let object = self.object()?;
                self.emit(subject.clone(), predicate.clone(), object)?;
                self.cursor.skip_trivia();
                if !self.cursor.eat(',') {
                    break;
                }
            }
            // One or more ';', optionally followed by another verb.
            let mut saw_semicolon = false;
            loop {
                self.cursor.skip_trivia();
                if self.cursor.eat(';') {
                    saw_semicolon = true;
                } else {
                    break;
                }
            }
            if !saw_semicolon || matches!(self.cursor.peek(), Some('.' | ']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, ParseError> {
        self.cursor.skip_trivia();
        if self.at_keyword_a() {
            self.cursor.bump();
            return Ok(ns::rdf::type_());
        }
        match self.cursor.peek() {
            Some('<') => self.cursor.read_iriref(),
            None => Err(self.cursor.error("unexpected end of input, expected a predicate")),
            Some(c) if c.is_ascii_alphanumeric() || c == ':' || c == '_' => self.cursor.read_prefixed_iri(&self.prefixes),
            Some(_) => Err(self.cursor.error("expected a predicate")),
        }
    }

    fn at_keyword_a(&self) -> bool {
        self.cursor.peek() == Some('a')
            && !self.cursor.peek_nth(1).is_some_and(|c| is_name_char(c) || c == ':')
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        if self.cursor.eat_keyword("true") {
            return Ok(Literal::new_typed("true", ns::xsd::boolean()).into());
        }
        if self.cursor.eat_keyword("false") {
            return Ok(Literal::new_typed("false", ns::xsd::boolean()).into());
        }
        match self.cursor.peek() {
            None => Err(self.cursor.error("unexpected end of input, expected an object")),
            Some('<') => Ok(Term::Iri(self.cursor.read_iriref()?)),
            Some('_') if self.cursor.peek_nth(1) == Some(':') => self.blank_label(),
            Some('[') => self.blank_property_list(),
            Some('(') => Err(self.cursor.error("collections are not supported")),
            Some('"' | '\'') => self.quoted_literal(),
            Some(ch) if ch.is_ascii_digit() || ch == '+' || ch == '-' || ch == '.' => Ok(Term::Literal(self.cursor.read_number()?)),
            Some(ch) if ch.is_ascii_alphanumeric() || ch == ':' || ch == '_' => Ok(Term::Iri(self.cursor.read_prefixed_iri(&self.prefixes)?)),
            Some(_) => Err(self.cursor.error("expected an object")),
        }
    }

    fn quoted_literal(&mut self) -> Result<Term, ParseError> {
        let lexical = self.cursor.read_string()?;
        match self.cursor.peek() {
            Some('@') => {
                let start = self.cursor.position();
                let tag = self.cursor.read_language_tag()?;
                Literal::new_language_tagged(lexical, &tag)
                    .map(Term::Literal)
                    .map_err(|e| self.cursor.error_at(start, e.to_string(), tag))
            }
            Some('^') => {
                let start = self.cursor.position();
                if !(self.cursor.eat('^') && self.cursor.eat('^')) {
                    return Err(self.cursor.error_at(start, "expected '^^'", "^"));
                }
                let datatype = match self.cursor.peek() {
                    Some('<') => self.cursor.read_iriref()?,
                    _ => self.cursor.read_prefixed_iri(&self.prefixes)?,
                };
                Ok(Term::Literal(Literal::new_typed(lexical, datatype)))
            }
            _ => Ok(Term::Literal(Literal::new_simple(lexical))),
        }
    }

    fn blank_label(&mut self) -> Result<Term, ParseError> {
        let start = self.cursor.position();
        self.cursor.bump();
        self.cursor.bump();
        let mut label = String::new();
        while let Some(c) = self.cursor.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '-') {
            label.push(c);
            self.cursor.bump();
        }
        let node = BlankNode::new(&label).map_err(|_| self.cursor.error_at(start, "invalid blank node label", format!("_:{label}")))?;
        self.labels.insert(label);
        Ok(Term::BlankNode(node))
    }

    fn blank_property_list(&mut self) -> Result<Term, ParseError> {
        self.cursor.expect('[', "'['")?;
        let node = Term::BlankNode(BlankNode::new_unchecked(format!("{ANON_MARK}{}", self.anon_count)));
        self.anon_count += 1;
        self.cursor.skip_trivia();
        if !self.cursor.eat(']') {
            self.predicate_object_list(&node)?;
            self.cursor.skip_trivia();
            self.cursor.expect(']', "']' closing blank node property list")?;
        }
        Ok(node)
    }

    fn emit(&mut self, subject: Term, predicate: Iri, object: Term) -> Result<(), ParseError> {
        let triple = Triple::new(subject, predicate, object).map_err(|e| self.cursor.error(e.to_string()))?;
        self.triples.push(triple);
        Ok(())
    }

    /// Gives anonymous nodes labels that cannot clash with document labels.
    fn finish(self) -> Graph {
        let mut stem = String::from("anon");
        while self.labels.iter().any(|l| l.starts_with(&stem)) {
            stem.push('_');
        }
        let mut renamed: HashMap<BlankNode, Term> = HashMap::new();
        let mut fix = |t: &Term| -> Term {
            match t {
                Term::BlankNode(b) if b.label().starts_with(ANON_MARK) => renamed
                    .entry(b.clone())
                    .or_insert_with(|| {
                        let n = &b.label()[ANON_MARK.len()..];
                        Term::BlankNode(BlankNode::new(format!("{stem}{n}")).expect("generated label is valid"))
                    })
                    .clone(),
                other => other.clone(),
            }
        };
        let mut graph = Graph::with_prefixes(self.prefixes);
        for t in &self.triples {
            let triple = Triple::new(fix(t.subject()), t.predicate().clone(), fix(t.object())).expect("relabeling keeps triples valid");
            graph.insert(triple);
        }
        graph
    }
}

/// Writes `graph` as Turtle: prefix declarations, then one block per subject
/// in canonical order. Blank nodes are always written as `_:label`.
pub fn serialize_turtle(graph: &Graph) -> String {
    let prefixes = graph.prefixes();
    let mut out = String::new();
    let mut declared = PrefixMap::new();
    for (label, ns) in prefixes.iter() {
        if crate::graph::is_valid_prefix_label(label) {
            let _ = writeln!(out, "@prefix {label}: {ns} .");
            declared.bind(label, ns.clone());
        }
    }
    let triples = graph.triples();
    let mut i = 0;
    while i < triples.len() {
        let subject = triples[i].subject();
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&format_term(subject, &declared));
        let mut first_predicate = true;
        while i < triples.len() && triples[i].subject() == subject {
            let predicate = triples[i].predicate();
            if first_predicate {
                out.push(' ');
                first_predicate = false;
            } else {
                out.push_str(" ;\n    ");
            }
            out.push_str(&format_predicate(predicate, &declared));
            let mut first_object = true;
            while i < triples.len() && triples[i].subject() == subject && triples[i].predicate() == predicate {
                out.push_str(if first_object { " " } else { ", " });
                first_object = false;
                out.push_str(&format_term(triples[i].object(), &declared));
                i += 1;
            }
        }
        out.push_str(" .\n");
    }
    out
}

fn format_predicate(predicate: &Iri, prefixes: &PrefixMap) -> String {
    if predicate.as_str() == ns::rdf::TYPE {
        "a".to_owned()
    } else {
        format_iri(predicate, prefixes)
    }
}

pub(crate) fn format_iri(iri: &Iri, prefixes: &PrefixMap) -> String {
    prefixes.compact(iri).unwrap_or_else(|| iri.to_string())
}

/// Turtle text for a single term, compacted against `prefixes`.
pub fn format_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(iri) => format_iri(iri, prefixes),
        Term::BlankNode(b) => b.to_string(),
        Term::Literal(lit) => format_literal(lit, prefixes),
    }
}

fn format_literal(lit: &Literal, prefixes: &PrefixMap) -> String {
    let lexical = lit.lexical();
    if let Some(lang) = lit.language() {
        return format!("\"{}\"@{lang}", escape_string(lexical));
    }
    let shorthand = match lit.datatype().as_str() {
        ns::xsd::STRING => return format!("\"{}\"", escape_string(lexical)),
        ns::xsd::INTEGER => is_integer_text(lexical),
        ns::xsd::DECIMAL => is_decimal_text(lexical),
        ns::xsd::BOOLEAN => lexical == "true" || lexical == "false",
        _ => false,
    };
    if shorthand {
        lexical.to_owned()
    } else {
        format!("\"{}\"^^{}", escape_string(lexical), format_iri(lit.datatype(), prefixes))
    }
}

fn is_integer_text(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

fn is_decimal_text(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => int.chars().all(|c| c.is_ascii_digit()) && !frac.is_empty() && frac.chars().all(|c| c.is_ascii_digit()),
        None => false,
    }
}
