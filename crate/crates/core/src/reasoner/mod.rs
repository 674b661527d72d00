//! Schema-closure inference and forward chaining of Horn rules.
//!
//! The closure covers subclass transitivity, type propagation along
//! subclass edges, equivalence (symmetric, transitive, and implying mutual
//! subclass edges) and domain/range typing. Literals never receive types.
//!
//! Inferred triples are those entailed by data plus schema that are neither
//! in the data nor entailed by the schema alone, so the closure of an
//! instance graph does not repeat the schema's own consequences.

mod engine;
mod rules;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::graph::Graph;
use crate::term::{Iri, Triple};
use crate::vocab::is_axiom_predicate;

pub use rules::{parse_rules, parse_rules_with, Atom, Rule, RuleError, RuleSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("malformed schema: non-axiom predicate {0}")]
    MalformedSchema(Iri),
}

/// The built-in closure axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    SubClassTransitivity,
    TypePropagation,
    EquivalenceSymmetry,
    EquivalenceTransitivity,
    EquivalenceSubClass,
    Domain,
    Range,
}

impl Axiom {
    pub fn id(self) -> &'static str {
        match self {
            Axiom::SubClassTransitivity => "subclass-transitivity",
            Axiom::TypePropagation => "type-propagation",
            Axiom::EquivalenceSymmetry => "equivalence-symmetry",
            Axiom::EquivalenceTransitivity => "equivalence-transitivity",
            Axiom::EquivalenceSubClass => "equivalence-subclass",
            Axiom::Domain => "domain",
            Axiom::Range => "range",
        }
    }
}

/// What produced an inferred triple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Derivation {
    Axiom(Axiom),
    Rule(String),
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Axiom(a) => write!(f, "axiom:{}", a.id()),
            Derivation::Rule(id) => write!(f, "rule:{id}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InferenceResult {
    /// Input plus inferred triples, with the input's prefixes.
    pub closure: Graph,
    /// Only the new triples.
    pub inferred: Graph,
    /// Outer rounds until no rule fired; 1 when there are no rules.
    pub iterations: usize,
    pub provenance: BTreeMap<Triple, Derivation>,
}

impl InferenceResult {
    /// Inferred triples produced by rules (as opposed to closure axioms).
    pub fn rule_derived(&self) -> Graph {
        self.provenance
            .iter()
            .filter(|(_, d)| matches!(d, Derivation::Rule(_)))
            .map(|(t, _)| t.clone())
            .collect()
    }
}

/// Checks that `schema` only uses axiom predicates.
pub fn check_schema(schema: &Graph) -> Result<(), ReasonerError> {
    match schema.iter().find(|t| !is_axiom_predicate(t.predicate())) {
        Some(t) => Err(ReasonerError::MalformedSchema(t.predicate().clone())),
        None => Ok(()),
    }
}

/// Materializes the closure of `data` under the axioms in `schema` (and any
/// axiom triples in `data` itself).
pub fn schema_closure(data: &Graph, schema: &Graph) -> Result<InferenceResult, ReasonerError> {
    apply_rules(data, &RuleSet::default(), schema)
}

/// Schema closure and rule forward chaining to a joint least fixpoint.
///
/// Rule heads feed back into the closure and closure results feed the rules,
/// so running this again on its own closure infers nothing.
pub fn apply_rules(data: &Graph, rules: &RuleSet, schema: &Graph) -> Result<InferenceResult, ReasonerError> {
    check_schema(schema)?;
    let schema_only = engine::saturate(schema, None, &RuleSet::default());
    let mut input = schema.clone();
    input.extend(data.iter());
    let run = engine::saturate(&input, Some(&schema_only.total), rules);

    let mut closure = data.clone();
    let mut inferred = Graph::with_prefixes(data.prefixes().clone());
    let mut provenance = BTreeMap::new();
    for (triple, derivation) in run.provenance {
        if data.contains(&triple) || schema_only.total.contains(&triple) {
            continue;
        }
        closure.insert(triple.clone());
        inferred.insert(triple.clone());
        provenance.insert(triple, derivation);
    }
    Ok(InferenceResult {
        closure,
        inferred,
        iterations: run.iterations,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns;
    use crate::term::Term;
    use crate::turtle::parse_turtle;
    use crate::vocab::{merged_schema, Vocabulary};

    fn typed(x: &Term, class: Iri) -> Triple {
        Triple::new(x.clone(), ns::rdf::type_(), class).unwrap()
    }

    #[test]
    fn edge_device_is_a_technical_resource() {
        let v = Vocabulary::builtin();
        let x = Term::iri("http://e/edge").unwrap();
        let data: Graph = [typed(&x, v.aias("EdgeDevice"))].into_iter().collect();
        let result = schema_closure(&data, v.merged()).unwrap();
        assert!(result.closure.contains(&typed(&x, v.aias("Resource"))));
        assert!(result.closure.contains(&typed(&x, v.vdi3682("TechnicalResource"))));
        assert!(result.closure.contains(&typed(&x, v.aias("Component"))));
        assert_eq!(
            result.provenance[&typed(&x, v.aias("Resource"))],
            Derivation::Axiom(Axiom::TypePropagation)
        );
    }

    #[test]
    fn equivalence_flows_both_ways() {
        let v = Vocabulary::builtin();
        let x = Term::iri("http://e/machine").unwrap();
        let data: Graph = [typed(&x, v.vdi3682("TechnicalResource"))].into_iter().collect();
        let result = schema_closure(&data, v.merged()).unwrap();
        assert!(result.closure.contains(&typed(&x, v.aias("Resource"))));
    }

    #[test]
    fn empty_data_infers_nothing() {
        let result = schema_closure(&Graph::new(), &merged_schema()).unwrap();
        assert!(result.inferred.is_empty());
        assert_eq!(result.iterations, 1);
    }

    #[test]
    fn range_skips_literals() {
        let g = parse_turtle(
            "@prefix ex: <http://e/> . @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
             ex:p rdfs:range ex:C ; rdfs:domain ex:D .",
        )
        .unwrap();
        let data = parse_turtle("@prefix ex: <http://e/> . ex:a ex:p \"lit\", ex:b .").unwrap();
        let result = schema_closure(&data, &g).unwrap();
        let types: Vec<_> = result.inferred.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            types,
            vec![
                "<http://e/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://e/D> .",
                "<http://e/b> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://e/C> .",
            ]
        );
    }

    #[test]
    fn malformed_schema_rejected() {
        let schema = parse_turtle("@prefix ex: <http://e/> . ex:a ex:p ex:b .").unwrap();
        assert_eq!(
            schema_closure(&Graph::new(), &schema).unwrap_err(),
            ReasonerError::MalformedSchema(Iri::new("http://e/p").unwrap())
        );
    }

    #[test]
    fn schema_only_consequences_are_not_materialized() {
        let v = Vocabulary::builtin();
        let x = Term::iri("http://e/s").unwrap();
        let data: Graph = [typed(&x, v.aias("Sensor"))].into_iter().collect();
        let result = schema_closure(&data, v.merged()).unwrap();
        assert!(result.inferred.iter().all(|t| t.subject() == &x));
    }
}
