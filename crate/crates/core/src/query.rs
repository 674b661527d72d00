//! Select queries over basic graph patterns.
//!
//! ```text
//! PREFIX ex: <http://example.org/>
//! SELECT DISTINCT ?assignment ?component
//! WHERE {
//!   ?training a ISO22989:Training .
//!   ?training AIAS:isAssignedTo ?assignment .
//!   ?component AIAS:isAssignedTo ?assignment .
//! }
//! ```
//!
//! Results follow multiset semantics and are sorted by the projected terms.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{is_valid_prefix_label, Graph, PrefixMap};
use crate::ns;
use crate::syntax::{Cursor, ParseError};
use crate::term::{Iri, Literal, PatternTerm, Term, TriplePattern, Variable};
use crate::turtle::format_term;
use crate::vocab::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{line}:{column}: unbound prefix {prefix:?}")]
    UnboundPrefix { prefix: String, line: usize, column: usize },
    #[error("projected variable {0} does not occur in any pattern")]
    UnprojectableVariable(Variable),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    All,
    Variables(Vec<Variable>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub prefixes: PrefixMap,
    pub projection: Projection,
    pub patterns: Vec<TriplePattern>,
    pub distinct: bool,
}

impl Query {
    pub fn new(prefixes: PrefixMap, projection: Projection, patterns: Vec<TriplePattern>, distinct: bool) -> Result<Self, QueryError> {
        let q = Query {
            prefixes,
            projection,
            patterns,
            distinct,
        };
        let mentioned: BTreeSet<&Variable> = q.patterns.iter().flat_map(TriplePattern::variables).collect();
        if let Projection::Variables(vars) = &q.projection {
            if let Some(v) = vars.iter().find(|v| !mentioned.contains(v)) {
                return Err(QueryError::UnprojectableVariable(v.clone()));
            }
        }
        Ok(q)
    }

    /// Projected variables; for `*`, every variable in order of first use.
    pub fn variables(&self) -> Vec<Variable> {
        match &self.projection {
            Projection::Variables(vars) => vars.clone(),
            Projection::All => {
                let mut seen = Vec::new();
                for v in self.patterns.iter().flat_map(TriplePattern::variables) {
                    if !seen.contains(v) {
                        seen.push(v.clone());
                    }
                }
                seen
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolutionSequence {
    pub variables: Vec<Variable>,
    pub rows: Vec<Vec<Term>>,
}

impl SolutionSequence {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values bound to `var` across all rows.
    pub fn column(&self, var: &str) -> Vec<&Term> {
        match self.variables.iter().position(|v| v.name() == var) {
            Some(i) => self.rows.iter().map(|r| &r[i]).collect(),
            None => Vec::new(),
        }
    }

    /// Tab-separated values: a header of `?name`s, then one line per row.
    pub fn to_tsv(&self) -> String {
        let mut out = self.variables.iter().map(ToString::to_string).collect::<Vec<_>>().join("\t");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(ToString::to_string).collect::<Vec<_>>().join("\t"));
            out.push('\n');
        }
        out
    }

    /// Aligned text table with terms compacted against `prefixes`.
    pub fn to_table(&self, prefixes: &PrefixMap) -> String {
        let header: Vec<String> = self.variables.iter().map(ToString::to_string).collect();
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|t| format_term(t, prefixes)).collect()).collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([header[i].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |values: &[String]| {
            let mut s = values
                .iter()
                .zip(&widths)
                .map(|(v, w)| format!("{v:<w$}"))
                .collect::<Vec<_>>()
                .join(" | ");
            s.truncate(s.trim_end().len());
            s.push('\n');
            s
        };
        let mut out = line(&header);
        let _ = writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
        for row in &cells {
            out.push_str(&line(row));
        }
        let _ = writeln!(out, "({} row{})", self.rows.len(), if self.rows.len() == 1 { "" } else { "s" });
        out
    }
}

/// Parses a query against the built-in schema prefixes.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    parse_query_with(text, Vocabulary::builtin().prefixes())
}

pub fn parse_query_with(text: &str, prefixes: &PrefixMap) -> Result<Query, QueryError> {
    let mut p = QueryParser {
        cursor: Cursor::new(text),
        prefixes: prefixes.clone(),
    };
    p.parse()
}

struct QueryParser<'a> {
    cursor: Cursor<'a>,
    prefixes: PrefixMap,
}

impl QueryParser<'_> {
    fn parse(&mut self) -> Result<Query, QueryError> {
        loop {
            self.cursor.skip_trivia();
            if !self.cursor.eat_keyword("PREFIX") {
                break;
            }
            self.cursor.skip_trivia();
            let start = self.cursor.position();
            let (label, local) = self.cursor.read_pname()?;
            if !local.is_empty() || !is_valid_prefix_label(&label) {
                return Err(self.cursor.error_at(start, "expected a prefix label ending in ':'", format!("{label}:{local}")).into());
            }
            self.cursor.skip_trivia();
            let ns = self.cursor.read_iriref()?;
            self.prefixes.bind(label, ns);
        }
        if self.cursor.eat_keyword("BASE") {
            return Err(self.cursor.error("BASE is not supported").into());
        }
        if !self.cursor.eat_keyword("SELECT") {
            return Err(self.cursor.error("expected SELECT").into());
        }
        self.cursor.skip_trivia();
        let distinct = self.cursor.eat_keyword("DISTINCT");
        if !distinct && self.cursor.eat_keyword("REDUCED") {
            return Err(self.cursor.error("REDUCED is not supported").into());
        }
        self.cursor.skip_trivia();
        let projection = if self.cursor.eat('*') {
            Projection::All
        } else {
            let mut vars = Vec::new();
            while matches!(self.cursor.peek(), Some('?' | '$')) {
                vars.push(self.cursor.read_variable()?);
                self.cursor.skip_trivia();
            }
            if vars.is_empty() {
                return Err(self.cursor.error("expected '*' or at least one variable").into());
            }
            Projection::Variables(vars)
        };
        self.cursor.skip_trivia();
        if !self.cursor.eat_keyword("WHERE") {
            return Err(self.cursor.error("expected WHERE").into());
        }
        self.cursor.skip_trivia();
        let open = self.cursor.position();
        self.cursor.expect('{', "'{'")?;
        let mut patterns = Vec::new();
        loop {
            self.cursor.skip_trivia();
            if self.cursor.eat('}') {
                break;
            }
            if self.cursor.is_eof() {
                return Err(self.cursor.error("unexpected end of input, expected '}'").into());
            }
            for keyword in ["FILTER", "OPTIONAL", "UNION", "MINUS", "GRAPH", "BIND", "VALUES", "SERVICE"] {
                if self.cursor.eat_keyword(keyword) {
                    let mut e = self.cursor.error(format!("{keyword} is not supported"));
                    e.token = keyword.to_owned();
                    return Err(e.into());
                }
            }
            patterns.push(self.pattern()?);
            self.cursor.skip_trivia();
            if !self.cursor.eat('.') && self.cursor.peek() != Some('}') {
                return Err(self.cursor.error("expected '.' or '}' after triple pattern").into());
            }
        }
        if patterns.is_empty() {
            return Err(self.cursor.error_at(open, "empty graph pattern", "{").into());
        }
        self.cursor.skip_trivia();
        if !self.cursor.is_eof() {
            return Err(self.cursor.error("unexpected text after the query (solution modifiers are not supported)").into());
        }
        Query::new(self.prefixes.clone(), projection, patterns, distinct)
    }

    fn pattern(&mut self) -> Result<TriplePattern, QueryError> {
        let subject = self.node(false)?;
        self.cursor.skip_trivia();
        let predicate = if self.cursor.peek() == Some('a') && !self.cursor.peek_nth(1).is_some_and(|c| crate::syntax::is_name_char(c) || c == ':') {
            self.cursor.bump();
            PatternTerm::Term(Term::Iri(ns::rdf::type_()))
        } else {
            match self.cursor.peek() {
                Some('/' | '^' | '(') => return Err(self.cursor.error("property paths are not supported").into()),
                _ => self.node(false)?,
            }
        };
        if matches!(self.cursor.peek(), Some('/' | '|' | '*' | '+')) {
            return Err(self.cursor.error("property paths are not supported").into());
        }
        self.cursor.skip_trivia();
        let object = self.node(true)?;
        Ok(TriplePattern::new(subject, predicate, object))
    }

    fn node(&mut self, allow_literal: bool) -> Result<PatternTerm, QueryError> {
        let c = &mut self.cursor;
        match c.peek() {
            None => Err(c.error("unexpected end of input, expected a term").into()),
            Some('?' | '$') => Ok(PatternTerm::Variable(c.read_variable()?)),
            Some('<') => Ok(PatternTerm::Term(Term::Iri(c.read_iriref()?))),
            Some('"' | '\'') if allow_literal => {
                let lexical = c.read_string()?;
                let lit = match c.peek() {
                    Some('@') => {
                        let start = c.position();
                        let tag = c.read_language_tag()?;
                        Literal::new_language_tagged(lexical, &tag).map_err(|e| c.error_at(start, e.to_string(), tag))?
                    }
                    Some('^') => {
                        c.bump();
                        c.expect('^', "'^^'")?;
                        let dt = if c.peek() == Some('<') { c.read_iriref()? } else { self.prefixed()? };
                        Literal::new_typed(lexical, dt)
                    }
                    _ => Literal::new_simple(lexical),
                };
                Ok(PatternTerm::Term(Term::Literal(lit)))
            }
            Some(ch) if allow_literal && (ch.is_ascii_digit() || ch == '+' || ch == '-') => Ok(PatternTerm::Term(Term::Literal(c.read_number()?))),
            Some('_') if c.peek_nth(1) == Some(':') => Err(c.error("blank nodes are not supported in queries").into()),
            Some(_) => {
                if allow_literal {
                    for word in ["true", "false"] {
                        if self.cursor.eat_keyword(word) {
                            return Ok(PatternTerm::Term(Literal::new_typed(word, ns::xsd::boolean()).into()));
                        }
                    }
                }
                Ok(PatternTerm::Term(Term::Iri(self.prefixed()?)))
            }
        }
    }

    fn prefixed(&mut self) -> Result<Iri, QueryError> {
        let start = self.cursor.position();
        let (prefix, local) = self.cursor.read_pname()?;
        let ns = self.prefixes.get(&prefix).ok_or_else(|| QueryError::UnboundPrefix {
            prefix: prefix.clone(),
            line: start.line,
            column: start.column,
        })?;
        Iri::new(format!("{}{local}", ns.as_str())).map_err(|e| self.cursor.error_at(start, e.to_string(), format!("{prefix}:{local}")).into())
    }
}

type Bindings = HashMap<Variable, Term>;

/// Evaluates `query` over `graph` as given (no inference).
pub fn evaluate_query(graph: &Graph, query: &Query) -> SolutionSequence {
    let variables = query.variables();
    let mut solutions = Vec::new();
    let order = join_order(&query.patterns);
    let ordered: Vec<&TriplePattern> = order.iter().map(|i| &query.patterns[*i]).collect();
    join(graph, &ordered, &mut Bindings::new(), &mut solutions);
    let mut rows: Vec<Vec<Term>> = solutions
        .into_iter()
        .map(|b| variables.iter().map(|v| b[v].clone()).collect())
        .collect();
    rows.sort();
    if query.distinct {
        rows.dedup();
    }
    SolutionSequence { variables, rows }
}

/// Greedy order: most ground positions first, then patterns sharing
/// variables with those already placed.
fn join_order(patterns: &[TriplePattern]) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut bound: BTreeSet<&Variable> = BTreeSet::new();
    let mut order = Vec::new();
    while !remaining.is_empty() {
        let score = |i: usize| {
            patterns[i]
                .positions()
                .iter()
                .filter(|p| match p {
                    PatternTerm::Term(_) => true,
                    PatternTerm::Variable(v) => bound.contains(v),
                })
                .count()
        };
        let (pos, best) = remaining
            .iter()
            .copied()
            .enumerate()
            .max_by_key(|(_, i)| (score(*i), std::cmp::Reverse(*i)))
            .expect("non-empty");
        remaining.remove(pos);
        bound.extend(patterns[best].variables());
        order.push(best);
    }
    order
}

fn join(graph: &Graph, patterns: &[&TriplePattern], bindings: &mut Bindings, out: &mut Vec<Bindings>) {
    let Some((first, rest)) = patterns.split_first() else {
        out.push(bindings.clone());
        return;
    };
    let bound = |pt: &PatternTerm| match pt {
        PatternTerm::Variable(v) => bindings.get(v).cloned().map(PatternTerm::Term).unwrap_or_else(|| pt.clone()),
        PatternTerm::Term(_) => pt.clone(),
    };
    let pattern = TriplePattern::new(bound(&first.subject), bound(&first.predicate), bound(&first.object));
    for t in graph.matches(&pattern) {
        let values = [t.subject().clone(), Term::Iri(t.predicate().clone()), t.object().clone()];
        let mut added = Vec::new();
        for (pos, value) in pattern.positions().into_iter().zip(values) {
            if let PatternTerm::Variable(v) = pos {
                if !bindings.contains_key(v) {
                    bindings.insert(v.clone(), value);
                    added.push(v.clone());
                }
            }
        }
        join(graph, rest, bindings, out);
        for v in added {
            bindings.remove(&v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::turtle::parse_turtle;

    const TRAINING_QUERY: &str = "SELECT ?assignment ?component\nWHERE\n{\n?training a ISO22989:Training .\n?training AIAS:isAssignedTo ?assignment .\n?component AIAS:isAssignedTo ?assignment . \n}\n";

    #[test]
    fn parses_training_query() {
        let q = parse_query(TRAINING_QUERY).unwrap();
        assert_eq!(
            q.projection,
            Projection::Variables(vec![Variable::new("assignment").unwrap(), Variable::new("component").unwrap()])
        );
        assert_eq!(q.patterns.len(), 3);
        assert!(!q.distinct);
        assert_eq!(q.patterns[0].predicate, PatternTerm::Term(Term::Iri(ns::rdf::type_())));
    }

    #[test]
    fn empty_pattern_is_a_parse_error() {
        assert!(matches!(parse_query("SELECT ?x WHERE { }"), Err(QueryError::Parse(_))));
    }

    #[test]
    fn unprojectable_variable() {
        assert_eq!(
            parse_query("SELECT ?y WHERE { ?x a ISO22989:Task . }").unwrap_err(),
            QueryError::UnprojectableVariable(Variable::new("y").unwrap())
        );
    }

    #[test]
    fn unbound_prefix_and_unsupported_syntax() {
        assert!(matches!(parse_query("SELECT * WHERE { ?x a foo:Bar }"), Err(QueryError::UnboundPrefix { .. })));
        for q in [
            "SELECT * WHERE { ?x a AIAS:Sensor . FILTER(?x) }",
            "SELECT * WHERE { OPTIONAL { ?x a AIAS:Sensor } }",
            "SELECT * WHERE { ?x AIAS:isAssignedTo/AIAS:isAssignedTo ?y }",
            "SELECT * WHERE { ?x a AIAS:Sensor } ORDER BY ?x",
            "SELECT * WHERE { _:b a AIAS:Sensor }",
        ] {
            assert!(matches!(parse_query(q), Err(QueryError::Parse(_))), "{q}");
        }
    }

    #[test]
    fn literal_objects_and_distinct() {
        let g = parse_turtle("@prefix ex: <http://e/> . ex:a ex:n 3 ; ex:l \"x\"@en . ex:b ex:n 3 .").unwrap();
        let q = parse_query("PREFIX ex: <http://e/> SELECT DISTINCT ?x WHERE { ?x ex:n 3 }").unwrap();
        assert_eq!(evaluate_query(&g, &q).len(), 2);
        let q = parse_query("PREFIX ex: <http://e/> SELECT ?x WHERE { ?x ex:l \"x\"@en }").unwrap();
        assert_eq!(evaluate_query(&g, &q).len(), 1);
        let q = parse_query("PREFIX ex: <http://e/> SELECT DISTINCT ?n WHERE { ?x ex:n ?n }").unwrap();
        assert_eq!(evaluate_query(&g, &q).len(), 1);
        let q = parse_query("PREFIX ex: <http://e/> SELECT ?n WHERE { ?x ex:n ?n }").unwrap();
        assert_eq!(evaluate_query(&g, &q).len(), 2);
    }

    #[test]
    fn empty_graph_has_no_rows() {
        let q = parse_query(TRAINING_QUERY).unwrap();
        assert!(evaluate_query(&Graph::new(), &q).is_empty());
    }

    #[test]
    fn star_projection_orders_by_first_use() {
        let q = parse_query("SELECT * WHERE { ?b ?p ?a . ?a ?q ?c }").unwrap();
        let names: Vec<_> = q.variables().iter().map(|v| v.name().to_owned()).collect();
        assert_eq!(names, ["b", "p", "a", "q", "c"]);
    }

    #[test]
    fn table_and_tsv() {
        let g = parse_turtle("@prefix ex: <http://e/> . ex:a ex:p ex:bb .").unwrap();
        let q = parse_query("PREFIX ex: <http://e/> SELECT ?s ?o WHERE { ?s ex:p ?o }").unwrap();
        let r = evaluate_query(&g, &q);
        assert_eq!(r.to_tsv(), "?s\t?o\n<http://e/a>\t<http://e/bb>\n");
        assert_eq!(r.to_table(g.prefixes()), "?s   | ?o\n-----+------\nex:a | ex:bb\n(1 row)\n");
    }
}
