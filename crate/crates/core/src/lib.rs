//! Knowledge-graph toolkit for documenting AI applications in automation
//! systems: an in-memory triple store, a Turtle reader and writer, the
//! built-in AIAS vocabularies, schema-closure and rule inference, shape
//! validation and basic graph pattern queries.

pub mod corpus;
pub mod graph;
pub mod iso;
pub mod ns;
pub mod query;
pub mod reasoner;
pub mod shapes;
pub mod syntax;
pub mod term;
pub mod turtle;
pub mod vocab;

pub use graph::{expand_curie, CurieError, Graph, PrefixMap};
pub use iso::graph_isomorphic;
pub use syntax::ParseError;
pub use term::{BlankNode, Iri, Literal, PatternTerm, Term, TermError, Triple, TriplePattern, Variable};
pub use turtle::{parse_turtle, parse_turtle_with, serialize_turtle};
pub use query::{evaluate_query, parse_query, parse_query_with, Projection, Query, QueryError, SolutionSequence};
pub use reasoner::{apply_rules, parse_rules, parse_rules_with, schema_closure, Derivation, InferenceResult, ReasonerError, Rule, RuleError, RuleSet};
pub use shapes::{parse_shapes, validate, PropertyConstraint, Severity, Shape, ShapeError, ValidationReport, ValidationResult};
pub use vocab::{lint_aias, list_subclasses, load_builtin_schema, merged_schema, SchemaName, Vocabulary, VocabError};
pub use corpus::{build_stamping_graph, competency_suite, CompetencyCase, CompetencyQuery};
