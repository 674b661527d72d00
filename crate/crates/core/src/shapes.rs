//! Shape constraint validation for the SHACL subset built from node shapes
//! with `sh:targetClass` and single-predicate property constraints
//! (`sh:minCount`, `sh:maxCount`, `sh:class`, `sh:datatype`).
//!
//! Targets are resolved against the schema closure of the data, so
//! instances of subclasses are validated too.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, PrefixMap};
use crate::ns;
use crate::reasoner::{schema_closure, ReasonerError};
use crate::term::{BlankNode, Iri, Literal, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed shape {shape}: {reason}")]
pub struct ShapeError {
    pub shape: Term,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        }
    }

    fn shacl_term(self) -> Iri {
        match self {
            Severity::Error => ns::sh::term("Violation"),
            Severity::Warning => ns::sh::term("Warning"),
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyConstraint {
    pub path: Iri,
    pub min_count: Option<u64>,
    pub max_count: Option<u64>,
    pub class: Option<Iri>,
    pub datatype: Option<Iri>,
}

impl PropertyConstraint {
    pub fn new(path: Iri) -> Self {
        PropertyConstraint {
            path,
            min_count: None,
            max_count: None,
            class: None,
            datatype: None,
        }
    }

    pub fn min_count(mut self, n: u64) -> Self {
        self.min_count = Some(n);
        self
    }

    pub fn max_count(mut self, n: u64) -> Self {
        self.max_count = Some(n);
        self
    }

    pub fn class(mut self, class: Iri) -> Self {
        self.class = Some(class);
        self
    }

    pub fn datatype(mut self, datatype: Iri) -> Self {
        self.datatype = Some(datatype);
        self
    }

    fn is_empty(&self) -> bool {
        self.min_count.is_none() && self.max_count.is_none() && self.class.is_none() && self.datatype.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub id: Term,
    pub target_class: Iri,
    pub constraints: Vec<PropertyConstraint>,
    pub severity: Severity,
    /// Check identifier reported with each result; the constraint kind when unset.
    pub check: Option<String>,
}

impl Shape {
    pub fn new(id: Term, target_class: Iri, constraints: Vec<PropertyConstraint>) -> Result<Self, ShapeError> {
        let shape = Shape {
            id,
            target_class,
            constraints,
            severity: Severity::Error,
            check: None,
        };
        for c in &shape.constraints {
            check_constraint(&shape.id, c)?;
        }
        Ok(shape)
    }

    pub fn with_severity(mut self, severity: Severity) -> Self {
        self.severity = severity;
        self
    }

    pub fn with_check(mut self, check: impl Into<String>) -> Self {
        self.check = Some(check.into());
        self
    }
}

fn check_constraint(shape: &Term, c: &PropertyConstraint) -> Result<(), ShapeError> {
    let malformed = |reason: &str| ShapeError {
        shape: shape.clone(),
        reason: reason.to_owned(),
    };
    if c.is_empty() {
        return Err(malformed("property constraint without minCount, maxCount, class or datatype"));
    }
    if let (Some(min), Some(max)) = (c.min_count, c.max_count) {
        if min > max {
            return Err(malformed("minCount exceeds maxCount"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintKind {
    MinCount,
    MaxCount,
    Class,
    Datatype,
    /// Minimum number of subjects of a given class pointing at the focus node.
    InverseMinCount,
}

impl ConstraintKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintKind::MinCount => "minCount",
            ConstraintKind::MaxCount => "maxCount",
            ConstraintKind::Class => "class",
            ConstraintKind::Datatype => "datatype",
            ConstraintKind::InverseMinCount => "inverseMinCount",
        }
    }

    fn component(self) -> Iri {
        let local = match self {
            ConstraintKind::MinCount => "MinCountConstraintComponent",
            ConstraintKind::MaxCount => "MaxCountConstraintComponent",
            ConstraintKind::Class => "ClassConstraintComponent",
            ConstraintKind::Datatype => "DatatypeConstraintComponent",
            ConstraintKind::InverseMinCount => "QualifiedMinCountConstraintComponent",
        };
        ns::sh::term(local)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationResult {
    pub focus: Term,
    pub path: Iri,
    pub kind: ConstraintKind,
    pub expected: String,
    pub actual: String,
    pub message: String,
    pub severity: Severity,
    pub check: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub conforms: bool,
    pub results: Vec<ValidationResult>,
}

impl Default for ValidationReport {
    fn default() -> Self {
        ValidationReport {
            conforms: true,
            results: Vec::new(),
        }
    }
}

impl ValidationReport {
    pub fn from_results(results: Vec<ValidationResult>) -> Self {
        ValidationReport {
            conforms: results.iter().all(|r| r.severity != Severity::Error),
            results,
        }
    }

    pub fn errors(&self) -> impl Iterator<Item = &ValidationResult> {
        self.results.iter().filter(|r| r.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &ValidationResult> {
        self.results.iter().filter(|r| r.severity == Severity::Warning)
    }

    /// Machine-readable report graph in the standard shapes vocabulary.
    pub fn to_graph(&self, prefixes: &PrefixMap) -> Graph {
        let mut g = Graph::with_prefixes(prefixes.clone());
        g.prefixes_mut().bind("sh", Iri::new(ns::sh::NS).expect("valid namespace"));
        let report = Term::BlankNode(BlankNode::new("report").expect("valid label"));
        let mut add = |s: &Term, p: Iri, o: Term| {
            g.insert(Triple::new(s.clone(), p, o).expect("report triples are well-formed"));
        };
        add(&report, ns::rdf::type_(), ns::sh::term("ValidationReport").into());
        add(
            &report,
            ns::sh::term("conforms"),
            Literal::new_typed(self.conforms.to_string(), ns::xsd::boolean()).into(),
        );
        for (i, r) in self.results.iter().enumerate() {
            let node = Term::BlankNode(BlankNode::new(format!("result{i}")).expect("valid label"));
            add(&report, ns::sh::term("result"), node.clone());
            add(&node, ns::rdf::type_(), ns::sh::term("ValidationResult").into());
            add(&node, ns::sh::term("focusNode"), r.focus.clone());
            add(&node, ns::sh::term("resultPath"), r.path.clone().into());
            add(&node, ns::sh::term("resultSeverity"), r.severity.shacl_term().into());
            add(&node, ns::sh::term("sourceConstraintComponent"), r.kind.component().into());
            add(&node, ns::sh::term("resultMessage"), Literal::new_simple(&r.message).into());
        }
        g
    }
}

const NODE_SHAPE_KEYS: [&str; 4] = ["targetClass", "property", "severity", "name"];
const PROPERTY_KEYS: [&str; 6] = ["path", "minCount", "maxCount", "class", "datatype", "name"];

/// Reads every `sh:NodeShape` of `shapes`, in canonical node order.
pub fn parse_shapes(shapes: &Graph) -> Result<Vec<Shape>, ShapeError> {
    let node_shape: Term = ns::sh::term("NodeShape").into();
    let ty = ns::rdf::type_();
    let mut out = Vec::new();
    for id in shapes.subjects_with(&ty, &node_shape) {
        let malformed = |reason: String| ShapeError {
            shape: id.clone(),
            reason,
        };
        check_keys(shapes, id, &NODE_SHAPE_KEYS).map_err(&malformed)?;
        let target = single(shapes, id, "targetClass").map_err(&malformed)?.ok_or_else(|| malformed("missing sh:targetClass".into()))?;
        let target_class = target.as_iri().cloned().ok_or_else(|| malformed("sh:targetClass must be an IRI".into()))?;
        let severity = match single(shapes, id, "severity").map_err(&malformed)? {
            None => Severity::Error,
            Some(t) if t == &ns::sh::term("Violation").into() => Severity::Error,
            Some(t) if t == &ns::sh::term("Warning").into() => Severity::Warning,
            Some(t) => return Err(malformed(format!("unsupported severity {t}"))),
        };
        let mut constraints = Vec::new();
        for node in shapes.objects(id, &ns::sh::term("property")) {
            constraints.push(parse_property(shapes, node).map_err(&malformed)?);
        }
        out.push(Shape::new(id.clone(), target_class, constraints)?.with_severity(severity));
    }
    Ok(out)
}

fn parse_property(shapes: &Graph, node: &Term) -> Result<PropertyConstraint, String> {
    if node.is_literal() {
        return Err("sh:property value must be a node".into());
    }
    check_keys(shapes, node, &PROPERTY_KEYS)?;
    let path = single(shapes, node, "path")?.ok_or("property constraint without sh:path")?;
    let path = path.as_iri().cloned().ok_or("sh:path must be a single predicate IRI")?;
    let mut c = PropertyConstraint::new(path);
    c.min_count = count(shapes, node, "minCount")?;
    c.max_count = count(shapes, node, "maxCount")?;
    c.class = iri_value(shapes, node, "class")?;
    c.datatype = iri_value(shapes, node, "datatype")?;
    Ok(c)
}

/// Rejects unknown `sh:` predicates on a shape node.
fn check_keys(shapes: &Graph, node: &Term, allowed: &[&str]) -> Result<(), String> {
    for t in shapes.matches(&crate::term::TriplePattern::new(
        node.clone(),
        crate::term::PatternTerm::var("p").expect("valid variable"),
        crate::term::PatternTerm::var("o").expect("valid variable"),
    )) {
        if let Some(local) = t.predicate().as_str().strip_prefix(ns::sh::NS) {
            if !allowed.contains(&local) {
                return Err(format!("unsupported constraint predicate sh:{local}"));
            }
        }
    }
    Ok(())
}

fn single<'a>(shapes: &'a Graph, node: &Term, key: &str) -> Result<Option<&'a Term>, String> {
    let mut values = shapes.objects(node, &ns::sh::term(key));
    let first = values.next();
    if values.next().is_some() {
        return Err(format!("more than one sh:{key}"));
    }
    Ok(first)
}

fn count(shapes: &Graph, node: &Term, key: &str) -> Result<Option<u64>, String> {
    let Some(value) = single(shapes, node, key)? else {
        return Ok(None);
    };
    let lit = value
        .as_literal()
        .filter(|l| l.datatype().as_str() == ns::xsd::INTEGER)
        .ok_or_else(|| format!("sh:{key} must be an integer literal, found {value}"))?;
    lit.lexical()
        .strip_prefix('+')
        .unwrap_or(lit.lexical())
        .parse::<u64>()
        .map(Some)
        .map_err(|_| format!("sh:{key} must be a non-negative integer, found {value}"))
}

fn iri_value(shapes: &Graph, node: &Term, key: &str) -> Result<Option<Iri>, String> {
    match single(shapes, node, key)? {
        None => Ok(None),
        Some(Term::Iri(iri)) => Ok(Some(iri.clone())),
        Some(other) => Err(format!("sh:{key} must be an IRI, found {other}")),
    }
}

/// Validates `data` against `shapes` after closing it under `schema`.
pub fn validate(data: &Graph, shapes: &[Shape], schema: &Graph) -> Result<ValidationReport, ReasonerError> {
    let closure = schema_closure(data, schema)?.closure;
    Ok(validate_closure(&closure, shapes))
}

/// Validates a graph that is already closed under its schema.
pub fn validate_closure(closure: &Graph, shapes: &[Shape]) -> ValidationReport {
    ValidationReport::from_results(shapes.iter().flat_map(|s| shape_results(closure, s)).collect())
}

pub(crate) fn shape_results(closure: &Graph, shape: &Shape) -> Vec<ValidationResult> {
    let ty = ns::rdf::type_();
    let target: Term = shape.target_class.clone().into();
    let mut results = Vec::new();
    for focus in closure.subjects_with(&ty, &target) {
        for c in &shape.constraints {
            let values: Vec<&Term> = closure.objects(focus, &c.path).collect();
            let n = values.len() as u64;
            let mut push = |kind: ConstraintKind, expected: String, actual: String, message: String| {
                results.push(ValidationResult {
                    focus: focus.clone(),
                    path: c.path.clone(),
                    kind,
                    expected,
                    actual,
                    message,
                    severity: shape.severity,
                    check: shape.check.clone().unwrap_or_else(|| kind.as_str().to_owned()),
                });
            };
            if let Some(min) = c.min_count.filter(|min| n < *min) {
                push(
                    ConstraintKind::MinCount,
                    format!(">={min}"),
                    n.to_string(),
                    format!("expected at least {min} value(s) for {}, found {n}", c.path),
                );
            }
            if let Some(max) = c.max_count.filter(|max| n > *max) {
                push(
                    ConstraintKind::MaxCount,
                    format!("<={max}"),
                    n.to_string(),
                    format!("expected at most {max} value(s) for {}, found {n}", c.path),
                );
            }
            if let Some(class) = &c.class {
                let class_term: Term = class.clone().into();
                for value in &values {
                    let ok = !value.is_literal() && closure.objects(value, &ty).any(|t| t == &class_term);
                    if !ok {
                        push(
                            ConstraintKind::Class,
                            class.to_string(),
                            value.to_string(),
                            format!("value {value} of {} is not an instance of {class}", c.path),
                        );
                    }
                }
            }
            if let Some(datatype) = &c.datatype {
                for value in &values {
                    let ok = value.as_literal().is_some_and(|l| l.datatype() == datatype);
                    if !ok {
                        push(
                            ConstraintKind::Datatype,
                            datatype.to_string(),
                            value.to_string(),
                            format!("value {value} of {} is not a literal of type {datatype}", c.path),
                        );
                    }
                }
            }
        }
    }
    results
}
