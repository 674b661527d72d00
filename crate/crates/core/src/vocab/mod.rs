//! Built-in ontology design patterns and the AIAS alignment ontology.
//!
//! Four small schemas ship as embedded Turtle: `vdi3682` (process
//! description), `iso7489` (OSI communication), `iso22989` (AI concepts in
//! three viewpoints) and `aias`, which aligns the other three beneath the
//! core classes Function, Component and Relation. Importing is eager union:
//! each schema keeps its own namespace and [`merged_schema`] is their union.
//!
//! The namespaces of the four schemas are configurable through
//! [`Namespaces`]. ECLASS, UNSPSC and SSN are registered as empty extension
//! namespaces; alignments to them are plain `owl:equivalentClass` statements
//! in a user schema merged on top of the built-ins.

mod lint;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::graph::{Graph, PrefixMap};
use crate::ns;
use crate::syntax::ParseError;
use crate::term::Iri;
use crate::turtle::parse_turtle_with;

pub use lint::{communication_shapes, lint_aias, lint_aias_with, LintCheck, COMMUNICATION_SHAPE};

pub const AIAS_NS: &str = "https://w3id.org/aias#";
pub const VDI3682_NS: &str = "https://w3id.org/aias/vdi3682#";
pub const ISO7489_NS: &str = "https://w3id.org/aias/iso7489#";
pub const ISO22989_NS: &str = "https://w3id.org/aias/iso22989#";

/// Extension namespaces with no built-in content.
pub const EXTENSION_PREFIXES: [(&str, &str); 3] = [
    ("ECLASS", "https://w3id.org/aias/ext/eclass#"),
    ("UNSPSC", "https://w3id.org/aias/ext/unspsc#"),
    ("SSN", "http://www.w3.org/ns/ssn/"),
];

const VDI3682_TTL: &str = include_str!("../../schemas/vdi3682.ttl");
const ISO7489_TTL: &str = include_str!("../../schemas/iso7489.ttl");
const ISO22989_TTL: &str = include_str!("../../schemas/iso22989.ttl");
const AIAS_TTL: &str = include_str!("../../schemas/aias.ttl");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("unknown schema {0:?} (expected one of vdi3682, iso7489, iso22989, aias)")]
    UnknownSchema(String),
    #[error("unknown class {0}")]
    UnknownClass(Iri),
    #[error("schema {schema}: {source}")]
    Parse {
        schema: SchemaName,
        #[source]
        source: ParseError,
    },
    #[error("schema {schema} is invalid: {reason}")]
    InvalidSchema { schema: SchemaName, reason: String },
    #[error("invalid namespace for {label}: {reason}")]
    InvalidNamespace { label: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaName {
    Vdi3682,
    Iso7489,
    Iso22989,
    Aias,
}

impl SchemaName {
    pub const ALL: [SchemaName; 4] = [SchemaName::Vdi3682, SchemaName::Iso7489, SchemaName::Iso22989, SchemaName::Aias];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemaName::Vdi3682 => "vdi3682",
            SchemaName::Iso7489 => "iso7489",
            SchemaName::Iso22989 => "iso22989",
            SchemaName::Aias => "aias",
        }
    }

    /// Prefix label used for the schema's namespace.
    pub fn prefix(self) -> &'static str {
        match self {
            SchemaName::Vdi3682 => "VDI3682",
            SchemaName::Iso7489 => "ISO7489",
            SchemaName::Iso22989 => "ISO22989",
            SchemaName::Aias => "AIAS",
        }
    }

    fn source(self) -> &'static str {
        match self {
            SchemaName::Vdi3682 => VDI3682_TTL,
            SchemaName::Iso7489 => ISO7489_TTL,
            SchemaName::Iso22989 => ISO22989_TTL,
            SchemaName::Aias => AIAS_TTL,
        }
    }
}

impl fmt::Display for SchemaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemaName {
    type Err = VocabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| VocabError::UnknownSchema(s.to_owned()))
    }
}

/// Namespace IRIs of the four built-in schemas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Namespaces {
    pub aias: Iri,
    pub vdi3682: Iri,
    pub iso7489: Iri,
    pub iso22989: Iri,
}

impl Default for Namespaces {
    fn default() -> Self {
        let iri = |s: &str| Iri::new(s).expect("default namespace is valid");
        Namespaces {
            aias: iri(AIAS_NS),
            vdi3682: iri(VDI3682_NS),
            iso7489: iri(ISO7489_NS),
            iso22989: iri(ISO22989_NS),
        }
    }
}

impl Namespaces {
    pub fn get(&self, schema: SchemaName) -> &Iri {
        match schema {
            SchemaName::Vdi3682 => &self.vdi3682,
            SchemaName::Iso7489 => &self.iso7489,
            SchemaName::Iso22989 => &self.iso22989,
            SchemaName::Aias => &self.aias,
        }
    }

    /// Rebinds the namespace behind one of the built-in prefix labels.
    /// Returns `false` when `label` is not a built-in schema prefix.
    pub fn set(&mut self, label: &str, namespace: Iri) -> bool {
        let slot = match label {
            "AIAS" => &mut self.aias,
            "VDI3682" => &mut self.vdi3682,
            "ISO7489" => &mut self.iso7489,
            "ISO22989" => &mut self.iso22989,
            _ => return false,
        };
        *slot = namespace;
        true
    }

    /// Standard prefixes, the four schema prefixes and the extension hooks.
    pub fn prefix_map(&self) -> PrefixMap {
        let mut map = PrefixMap::new();
        for (label, iri) in ns::standard_prefixes() {
            map.bind(label, Iri::new(iri).expect("standard namespace is valid"));
        }
        for (label, iri) in EXTENSION_PREFIXES {
            map.bind(label, Iri::new(iri).expect("extension namespace is valid"));
        }
        for schema in SchemaName::ALL {
            map.bind(schema.prefix(), self.get(schema).clone());
        }
        map
    }

    fn term(&self, schema: SchemaName, local: &str) -> Iri {
        Iri::new(format!("{}{local}", self.get(schema).as_str())).expect("namespace plus local name is a valid IRI")
    }

    pub fn aias(&self, local: &str) -> Iri {
        self.term(SchemaName::Aias, local)
    }

    pub fn vdi3682(&self, local: &str) -> Iri {
        self.term(SchemaName::Vdi3682, local)
    }

    pub fn iso7489(&self, local: &str) -> Iri {
        self.term(SchemaName::Iso7489, local)
    }

    pub fn iso22989(&self, local: &str) -> Iri {
        self.term(SchemaName::Iso22989, local)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaGraph {
    pub name: SchemaName,
    pub graph: Graph,
    pub namespace: Iri,
}

const AXIOM_PREDICATES: [&str; 5] = [ns::rdfs::SUB_CLASS_OF, ns::owl::EQUIVALENT_CLASS, ns::rdfs::DOMAIN, ns::rdfs::RANGE, ns::rdf::TYPE];
const DECLARATION_TYPES: [&str; 3] = [ns::owl::CLASS, ns::owl::OBJECT_PROPERTY, ns::owl::DATATYPE_PROPERTY];

pub fn is_axiom_predicate(predicate: &Iri) -> bool {
    AXIOM_PREDICATES.contains(&predicate.as_str())
}

/// Loads one of the built-in schemas with the default namespaces.
pub fn load_builtin_schema(name: &str) -> Result<SchemaGraph, VocabError> {
    load_builtin_schema_with(name.parse()?, &Namespaces::default())
}

pub fn load_builtin_schema_with(name: SchemaName, namespaces: &Namespaces) -> Result<SchemaGraph, VocabError> {
    let all = namespaces.prefix_map();
    let parsed = parse_turtle_with(name.source(), &all).map_err(|source| VocabError::Parse { schema: name, source })?;

    // Keep only the prefixes this schema needs for export.
    let mut prefixes = PrefixMap::new();
    for (label, iri) in all.iter() {
        let own = label == name.prefix();
        let referenced = name == SchemaName::Aias && SchemaName::ALL.iter().any(|s| s.prefix() == label);
        if own || referenced || matches!(label, "owl" | "rdf" | "rdfs") {
            prefixes.bind(label, iri.clone());
        }
    }
    let mut graph = Graph::with_prefixes(prefixes);
    graph.extend(parsed.iter());

    let schema = SchemaGraph {
        name,
        graph,
        namespace: namespaces.get(name).clone(),
    };
    validate_schema(&schema)?;
    Ok(schema)
}

fn validate_schema(schema: &SchemaGraph) -> Result<(), VocabError> {
    let invalid = |reason: String| VocabError::InvalidSchema {
        schema: schema.name,
        reason,
    };
    let ns_text = schema.namespace.as_str();
    for t in schema.graph.iter() {
        if !is_axiom_predicate(t.predicate()) {
            return Err(invalid(format!("non-axiom predicate {}", t.predicate())));
        }
        let subject = t.subject().as_iri().ok_or_else(|| invalid(format!("non-IRI subject {}", t.subject())))?;
        if t.object().as_iri().is_none() {
            return Err(invalid(format!("non-IRI object in {t}")));
        }
        let local = subject.as_str().starts_with(ns_text);
        if t.predicate().as_str() == ns::rdf::TYPE {
            if !DECLARATION_TYPES.contains(&t.object().as_iri().map(Iri::as_str).unwrap_or_default()) {
                return Err(invalid(format!("unexpected declaration {t}")));
            }
            if !local {
                return Err(invalid(format!("declaration outside the schema namespace: {t}")));
            }
        } else if !local && schema.name != SchemaName::Aias {
            return Err(invalid(format!("axiom about a foreign term: {t}")));
        }
    }
    let index = VocabularyIndex::from_graph(&schema.graph);
    if let Some(class) = index.find_subclass_cycle() {
        return Err(invalid(format!("subclass cycle through {class}")));
    }
    Ok(())
}

/// Declared classes, properties and class axioms of a schema graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VocabularyIndex {
    pub classes: BTreeSet<Iri>,
    pub properties: BTreeSet<Iri>,
    /// `(sub, super)` pairs from explicit subclass statements.
    pub subclass_edges: BTreeSet<(Iri, Iri)>,
    /// Equivalence pairs, stored in both directions.
    pub equivalences: BTreeSet<(Iri, Iri)>,
}

impl VocabularyIndex {
    pub fn from_graph(graph: &Graph) -> Self {
        let mut index = VocabularyIndex::default();
        for t in graph.iter() {
            let (Some(s), Some(o)) = (t.subject().as_iri(), t.object().as_iri()) else {
                continue;
            };
            match t.predicate().as_str() {
                ns::rdf::TYPE if o.as_str() == ns::owl::CLASS => {
                    index.classes.insert(s.clone());
                }
                ns::rdf::TYPE if DECLARATION_TYPES.contains(&o.as_str()) => {
                    index.properties.insert(s.clone());
                }
                ns::rdfs::SUB_CLASS_OF => {
                    index.subclass_edges.insert((s.clone(), o.clone()));
                }
                ns::owl::EQUIVALENT_CLASS => {
                    index.equivalences.insert((s.clone(), o.clone()));
                    index.equivalences.insert((o.clone(), s.clone()));
                }
                _ => {}
            }
        }
        index
    }

    fn children(&self) -> BTreeMap<&Iri, Vec<&Iri>> {
        let mut children: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
        for (sub, sup) in &self.subclass_edges {
            children.entry(sup).or_default().push(sub);
        }
        children
    }

    pub fn find_subclass_cycle(&self) -> Option<Iri> {
        let mut parents: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
        for (sub, sup) in &self.subclass_edges {
            parents.entry(sub).or_default().push(sup);
        }
        // Kahn's algorithm; whatever remains lies on or behind a cycle.
        let mut indegree: BTreeMap<&Iri, usize> = BTreeMap::new();
        for (sub, sup) in &self.subclass_edges {
            indegree.entry(sub).or_insert(0);
            *indegree.entry(sup).or_insert(0) += 1;
        }
        let mut ready: Vec<&Iri> = indegree.iter().filter(|(_, d)| **d == 0).map(|(c, _)| *c).collect();
        while let Some(c) = ready.pop() {
            for p in parents.get(c).into_iter().flatten() {
                let d = indegree.get_mut(p).expect("parent is indexed");
                *d -= 1;
                if *d == 0 {
                    ready.push(p);
                }
            }
            indegree.remove(c);
        }
        indegree.into_keys().next().cloned()
    }

    pub fn equivalents_of(&self, class: &Iri) -> BTreeSet<Iri> {
        self.equivalences
            .iter()
            .filter(|(a, _)| a == class)
            .map(|(_, b)| b.clone())
            .collect()
    }
}

/// All classes below `class` through explicit subclass edges, excluding `class`.
pub fn list_subclasses(index: &VocabularyIndex, class: &Iri) -> Result<BTreeSet<Iri>, VocabError> {
    if !index.classes.contains(class) {
        return Err(VocabError::UnknownClass(class.clone()));
    }
    let children = index.children();
    let mut found = BTreeSet::new();
    let mut stack = vec![class];
    while let Some(c) = stack.pop() {
        for child in children.get(c).into_iter().flatten() {
            if *child != class && found.insert((*child).clone()) {
                stack.push(child);
            }
        }
    }
    Ok(found)
}

/// The four built-in schemas under one set of namespaces.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    namespaces: Namespaces,
    schemas: Vec<SchemaGraph>,
    merged: Graph,
    index: VocabularyIndex,
}

impl Vocabulary {
    pub fn new(namespaces: Namespaces) -> Result<Self, VocabError> {
        for schema in SchemaName::ALL {
            let ns = namespaces.get(schema);
            if !ns.as_str().ends_with(['#', '/']) {
                return Err(VocabError::InvalidNamespace {
                    label: schema.prefix().to_owned(),
                    reason: format!("{ns} must end in '#' or '/'"),
                });
            }
        }
        let schemas = SchemaName::ALL
            .into_iter()
            .map(|name| load_builtin_schema_with(name, &namespaces))
            .collect::<Result<Vec<_>, _>>()?;
        let mut merged = Graph::with_prefixes(namespaces.prefix_map());
        for schema in &schemas {
            merged.merge(&schema.graph);
        }
        let index = VocabularyIndex::from_graph(&merged);
        Ok(Vocabulary {
            namespaces,
            schemas,
            merged,
            index,
        })
    }

    /// Shared instance with the default namespaces.
    pub fn builtin() -> &'static Vocabulary {
        static BUILTIN: OnceLock<Vocabulary> = OnceLock::new();
        BUILTIN.get_or_init(|| Vocabulary::new(Namespaces::default()).expect("built-in schemas are valid"))
    }

    pub fn namespaces(&self) -> &Namespaces {
        &self.namespaces
    }

    pub fn schema(&self, name: SchemaName) -> &SchemaGraph {
        self.schemas.iter().find(|s| s.name == name).expect("all schemas are loaded")
    }

    pub fn schemas(&self) -> &[SchemaGraph] {
        &self.schemas
    }

    pub fn merged(&self) -> &Graph {
        &self.merged
    }

    pub fn index(&self) -> &VocabularyIndex {
        &self.index
    }

    pub fn prefixes(&self) -> &PrefixMap {
        self.merged.prefixes()
    }

    pub fn aias(&self, local: &str) -> Iri {
        self.namespaces.aias(local)
    }

    pub fn vdi3682(&self, local: &str) -> Iri {
        self.namespaces.vdi3682(local)
    }

    pub fn iso7489(&self, local: &str) -> Iri {
        self.namespaces.iso7489(local)
    }

    pub fn iso22989(&self, local: &str) -> Iri {
        self.namespaces.iso22989(local)
    }
}

/// Union of the four built-in schemas with every prefix registered.
pub fn merged_schema() -> Graph {
    Vocabulary::builtin().merged().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Triple;

    fn ns() -> Namespaces {
        Namespaces::default()
    }

    fn has(g: &Graph, s: Iri, p: Iri, o: Iri) -> bool {
        g.contains(&Triple::new(s, p, o).unwrap())
    }

    #[test]
    fn aias_equates_resource_with_technical_resource() {
        let aias = load_builtin_schema("aias").unwrap();
        assert!(has(&aias.graph, ns().aias("Resource"), ns::owl::equivalent_class(), ns().vdi3682("TechnicalResource")));
    }

    #[test]
    fn classification_is_a_task() {
        let g = load_builtin_schema("iso22989").unwrap().graph;
        assert!(has(&g, ns().iso22989("Classification"), ns::rdfs::sub_class_of(), ns().iso22989("Task")));
    }

    #[test]
    fn unknown_schema() {
        assert_eq!(load_builtin_schema("foo").unwrap_err(), VocabError::UnknownSchema("foo".into()));
    }

    #[test]
    fn schema_contents() {
        let n = ns();
        let classes = |name: &str| VocabularyIndex::from_graph(&load_builtin_schema(name).unwrap().graph).classes;
        let vdi = classes("vdi3682");
        for c in ["ProcessOperator", "TechnicalResource", "Product", "Assignment", "Flow"] {
            assert!(vdi.contains(&n.vdi3682(c)), "{c}");
        }
        let osi = classes("iso7489");
        for c in ["Communication", "Physical", "DataLink", "Network", "Transport", "Session", "Presentation", "Application"] {
            assert!(osi.contains(&n.iso7489(c)), "{c}");
        }
        let ai = classes("iso22989");
        for c in [
            "AISystem", "SystemDesign", "CloudDesign", "EdgeDesign", "HybridDesign", "Task", "Classification", "Clustering",
            "Regression", "Generation", "DataProcessing", "Training", "Validation", "Evaluation", "Inference", "MLModel",
            "MLAlgorithm", "LearningType", "ModelParameter", "Hyperparameter", "Sample", "Data", "Dataset", "TrainingData",
            "EvaluationData", "ValidationData", "ProductionData", "TestData", "DataSource", "DataSink", "DataAcquisition",
            "DataStorage",
        ] {
            assert!(ai.contains(&n.iso22989(c)), "{c}");
        }
        let core = classes("aias");
        for c in ["Function", "Component", "Relation", "Resource", "Process", "Product", "Assignment", "Communication", "Flow"] {
            assert!(core.contains(&n.aias(c)), "{c}");
        }
    }

    #[test]
    fn resource_has_seven_subclasses() {
        let vocab = Vocabulary::builtin();
        let subs = list_subclasses(vocab.index(), &vocab.aias("Resource")).unwrap();
        let expected: BTreeSet<Iri> = ["Sensor", "Actuator", "Controller", "EdgeDevice", "PersonalComputer", "ComputerSystem", "CloudSystem"]
            .into_iter()
            .map(|c| vocab.aias(c))
            .collect();
        assert_eq!(subs, expected);
    }

    #[test]
    fn function_subclasses_include_imported_functions() {
        let vocab = Vocabulary::builtin();
        let subs = list_subclasses(vocab.index(), &vocab.aias("Function")).unwrap();
        assert!(subs.contains(&vocab.iso22989("Training")));
        assert!(subs.contains(&vocab.iso22989("Inference")));
        assert!(subs.contains(&vocab.vdi3682("ProcessOperator")));
    }

    #[test]
    fn leaf_and_unknown_classes() {
        let vocab = Vocabulary::builtin();
        assert!(list_subclasses(vocab.index(), &vocab.aias("Sensor")).unwrap().is_empty());
        assert!(matches!(
            list_subclasses(vocab.index(), &vocab.aias("Nope")),
            Err(VocabError::UnknownClass(_))
        ));
    }

    #[test]
    fn merged_is_exact_sum_and_order_free() {
        let vocab = Vocabulary::builtin();
        let sum: usize = vocab.schemas().iter().map(|s| s.graph.len()).sum();
        assert_eq!(vocab.merged().len(), sum);
        let mut reversed = Graph::new();
        for s in vocab.schemas().iter().rev() {
            reversed.merge(&s.graph);
        }
        assert_eq!(&reversed, vocab.merged());
        assert!(vocab.prefixes().get("VDI3682").is_some());
        assert!(vocab.prefixes().get("ISO22989").is_some());
    }

    #[test]
    fn published_terms_resolve() {
        let vocab = Vocabulary::builtin();
        let idx = vocab.index();
        for c in [vocab.iso22989("Training"), vocab.vdi3682("Assignment"), vocab.aias("CloudSystem"), vocab.iso7489("Communication")] {
            assert!(idx.classes.contains(&c), "{c}");
        }
        for p in [vocab.aias("isAssignedTo"), vocab.aias("communicatesWith"), vocab.iso22989("hasDesign")] {
            assert!(idx.properties.contains(&p), "{p}");
        }
    }

    #[test]
    fn index_mentions_only_declared_classes() {
        let idx = Vocabulary::builtin().index();
        for (a, b) in idx.subclass_edges.iter().chain(&idx.equivalences) {
            assert!(idx.classes.contains(a) && idx.classes.contains(b), "{a} {b}");
        }
        for (a, b) in &idx.equivalences {
            assert!(idx.equivalences.contains(&(b.clone(), a.clone())));
        }
    }

    #[test]
    fn namespace_override() {
        let mut n = Namespaces::default();
        assert!(n.set("AIAS", Iri::new("http://example.org/aias#").unwrap()));
        assert!(!n.set("ex", Iri::new("http://example.org/x#").unwrap()));
        let vocab = Vocabulary::new(n).unwrap();
        assert!(vocab.index().classes.contains(&Iri::new("http://example.org/aias#Function").unwrap()));
    }

    #[test]
    fn cycle_detection() {
        let g = crate::turtle::parse_turtle(
            "@prefix ex: <http://e/> . @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
             ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:A . ex:C rdfs:subClassOf ex:A .",
        )
        .unwrap();
        assert!(VocabularyIndex::from_graph(&g).find_subclass_cycle().is_some());
    }
}
