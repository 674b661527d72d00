//! RDF terms, triples and triple patterns.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ns;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid IRI {0:?}: expected non-empty text with a scheme separator")]
    InvalidIri(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("triple subject must be an IRI or a blank node, found {0}")]
    LiteralSubject(Term),
    #[error("triple predicate must be an IRI, found {0}")]
    NonIriPredicate(Term),
    #[error("variable names must be non-empty alphanumeric text, found {0:?}")]
    InvalidVariable(String),
}

/// An absolute IRI. Compared as exact text, no normalization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(text: impl AsRef<str>) -> Result<Self, TermError> {
        let text = text.as_ref();
        if text.is_empty() || !text.contains(':') || text.chars().any(is_forbidden_iri_char) {
            return Err(TermError::InvalidIri(text.to_owned()));
        }
        Ok(Iri(Arc::from(text)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_forbidden_iri_char(c: char) -> bool {
    matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') || c.is_whitespace() || c.is_control()
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

/// A graph-scoped blank node label (without the `_:` marker).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(Arc<str>);

impl BlankNode {
    pub fn new(label: impl AsRef<str>) -> Result<Self, TermError> {
        let label = label.as_ref();
        if is_valid_blank_label(label) {
            Ok(BlankNode(Arc::from(label)))
        } else {
            Err(TermError::InvalidBlankLabel(label.to_owned()))
        }
    }

    /// Skips label validation; for parser-internal placeholders only.
    pub(crate) fn new_unchecked(label: String) -> Self {
        BlankNode(Arc::from(label))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_blank_label(label: &str) -> bool {
    !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Iri,
    language: Option<Arc<str>>,
}

impl Literal {
    pub fn new_typed(lexical: impl AsRef<str>, datatype: Iri) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype,
            language: None,
        }
    }

    pub fn new_simple(lexical: impl AsRef<str>) -> Self {
        Self::new_typed(lexical, ns::xsd::string())
    }

    /// Language-tagged string. The datatype is always `rdf:langString`.
    pub fn new_language_tagged(lexical: impl AsRef<str>, language: impl AsRef<str>) -> Result<Self, TermError> {
        let language = language.as_ref();
        let valid = !language.is_empty()
            && language.split('-').all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric()))
            && language.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if !valid {
            return Err(TermError::InvalidLanguageTag(language.to_owned()));
        }
        Ok(Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype: ns::rdf::lang_string(),
            language: Some(Arc::from(language)),
        })
    }

    pub fn integer(value: i64) -> Self {
        Self::new_typed(value.to_string(), ns::xsd::integer())
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(&self.lexical))?;
        match &self.language {
            Some(lang) => write!(f, "@{lang}"),
            None if self.datatype.as_str() == ns::xsd::STRING => Ok(()),
            None => write!(f, "^^{}", self.datatype),
        }
    }
}

pub(crate) fn escape_string(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// An RDF term. The derived ordering is the canonical one used for all
/// deterministic output: IRIs, then blank nodes, then literals, each by text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(text: impl AsRef<str>) -> Result<Self, TermError> {
        Iri::new(text).map(Term::Iri)
    }

    pub fn blank(label: impl AsRef<str>) -> Result<Self, TermError> {
        BlankNode::new(label).map(Term::BlankNode)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_blank(&self) -> Option<&BlankNode> {
        match self {
            Term::BlankNode(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<&Iri> for Term {
    fn from(iri: &Iri) -> Self {
        Term::Iri(iri.clone())
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::BlankNode(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

/// A well-formed triple: the subject is never a literal and the predicate is
/// always an IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Term>, predicate: impl Into<Term>, object: impl Into<Term>) -> Result<Self, TermError> {
        let subject = subject.into();
        if subject.is_literal() {
            return Err(TermError::LiteralSubject(subject));
        }
        let predicate = match predicate.into() {
            Term::Iri(iri) => iri,
            other => return Err(TermError::NonIriPredicate(other)),
        };
        Ok(Triple {
            subject,
            predicate,
            object: object.into(),
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }

    pub fn has_blank(&self) -> bool {
        self.subject.is_blank() || self.object.is_blank()
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A named query or rule variable, stored without its leading `?`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: impl AsRef<str>) -> Result<Self, TermError> {
        let name = name.as_ref();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(TermError::InvalidVariable(name.to_owned()));
        }
        Ok(Variable(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternTerm {
    Term(Term),
    Variable(Variable),
}

impl PatternTerm {
    pub fn var(name: impl AsRef<str>) -> Result<Self, TermError> {
        Variable::new(name).map(PatternTerm::Variable)
    }

    pub fn as_variable(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Variable(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            PatternTerm::Term(t) => Some(t),
            PatternTerm::Variable(_) => None,
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl From<Iri> for PatternTerm {
    fn from(i: Iri) -> Self {
        PatternTerm::Term(Term::Iri(i))
    }
}

impl From<Variable> for PatternTerm {
    fn from(v: Variable) -> Self {
        PatternTerm::Variable(v)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Term(t) => t.fmt(f),
            PatternTerm::Variable(v) => v.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: impl Into<PatternTerm>, predicate: impl Into<PatternTerm>, object: impl Into<PatternTerm>) -> Self {
        TriplePattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    /// Variables in subject, predicate, object order (duplicates kept).
    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.positions().into_iter().filter_map(PatternTerm::as_variable)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_requires_scheme_separator() {
        assert!(Iri::new("https://w3id.org/aias#Function").is_ok());
        assert!(matches!(Iri::new(""), Err(TermError::InvalidIri(_))));
        assert!(matches!(Iri::new("Function"), Err(TermError::InvalidIri(_))));
        assert!(Iri::new("http://e/a b").is_err());
    }

    #[test]
    fn language_literal_has_lang_string_datatype() {
        let l = Literal::new_language_tagged("Stanze", "de").unwrap();
        assert_eq!(l.datatype().as_str(), ns::rdf::LANG_STRING);
        assert_eq!(l.language(), Some("de"));
        assert!(Literal::new_language_tagged("x", "").is_err());
    }

    #[test]
    fn triple_rejects_literal_subject() {
        let p = Iri::new("http://e/p").unwrap();
        let err = Triple::new(Literal::new_simple("x"), p.clone(), p.clone()).unwrap_err();
        assert!(matches!(err, TermError::LiteralSubject(_)));
        let err = Triple::new(p.clone(), Term::blank("b").unwrap(), p).unwrap_err();
        assert!(matches!(err, TermError::NonIriPredicate(_)));
    }

    #[test]
    fn canonical_order_is_iri_blank_literal() {
        let mut terms = [
            Term::Literal(Literal::new_simple("a")),
            Term::blank("a").unwrap(),
            Term::iri("z:z").unwrap(),
            Term::iri("a:a").unwrap(),
        ];
        terms.sort();
        assert_eq!(
            terms.iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["<a:a>", "<z:z>", "_:a", "\"a\""]
        );
    }

    #[test]
    fn equality_is_exact_text() {
        assert_ne!(Term::iri("http://e/A").unwrap(), Term::iri("http://e/a").unwrap());
        assert_ne!(Term::iri("http://e/%41").unwrap(), Term::iri("http://e/A").unwrap());
        assert_ne!(Literal::integer(2), Literal::new_typed("02", ns::xsd::integer()));
    }
}
