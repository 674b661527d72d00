//! Seeded random inputs for property and acceptance tests.

use aias_core::ns;
use aias_core::query::{Projection, Query};
use aias_core::{BlankNode, Graph, Iri, Literal, PatternTerm, PrefixMap, Term, Triple, TriplePattern, Variable};
use rand::seq::SliceRandom;
use rand::Rng;

pub const SCHEMA_NS: &str = "http://example.org/schema#";
pub const DATA_NS: &str = "http://example.org/data/";

fn iri(text: String) -> Iri {
    Iri::new(text).expect("generated IRI")
}

fn class(i: usize) -> Term {
    Term::Iri(iri(format!("{SCHEMA_NS}C{i}")))
}

fn property(i: usize) -> Iri {
    iri(format!("{SCHEMA_NS}p{i}"))
}

fn individual(i: usize) -> Term {
    if i % 7 == 6 {
        Term::BlankNode(BlankNode::new(format!("b{i}")).expect("label"))
    } else {
        Term::Iri(iri(format!("{DATA_NS}i{i}")))
    }
}

fn small_literal(rng: &mut impl Rng) -> Literal {
    match rng.gen_range(0..3) {
        0 => Literal::integer(rng.gen_range(0..4)),
        1 => Literal::new_simple(["a", "b"][rng.gen_range(0..2)]),
        _ => Literal::new_language_tagged("x", "en").expect("tag"),
    }
}

/// Size limits for [`schema_instance`].
#[derive(Debug, Clone, Copy)]
pub struct SchemaLimits {
    pub classes: usize,
    pub properties: usize,
    pub individuals: usize,
    pub triples: usize,
}

impl Default for SchemaLimits {
    fn default() -> Self {
        SchemaLimits {
            classes: 15,
            properties: 10,
            individuals: 30,
            triples: 60,
        }
    }
}

/// A random `(schema, data)` pair within `limits`. The schema may contain
/// subclass and equivalence cycles; the data may contain axiom triples and
/// literal objects.
pub fn schema_instance(rng: &mut impl Rng, limits: SchemaLimits) -> (Graph, Graph) {
    let classes = rng.gen_range(1..=limits.classes);
    let properties = rng.gen_range(1..=limits.properties);
    let individuals = rng.gen_range(1..=limits.individuals);
    let total = rng.gen_range(1..=limits.triples);
    let schema_size = rng.gen_range(0..=total / 2);
    let mut schema = Graph::new();
    let mut data = Graph::new();
    let c = |rng: &mut dyn rand::RngCore| class(rng.gen_range(0..classes));
    let p = |rng: &mut dyn rand::RngCore| property(rng.gen_range(0..properties));
    let mut attempts = 0;
    while schema.len() < schema_size && attempts < 20 * limits.triples {
        attempts += 1;
        let t = match rng.gen_range(0..10) {
            0..=4 => Triple::new(c(rng), ns::rdfs::sub_class_of(), c(rng)),
            5 => Triple::new(c(rng), ns::owl::equivalent_class(), c(rng)),
            6 | 7 => Triple::new(p(rng), ns::rdfs::domain(), c(rng)),
            _ => Triple::new(p(rng), ns::rdfs::range(), c(rng)),
        };
        schema.insert(t.expect("schema triple"));
    }
    let data_size = total - schema_size;
    while data.len() < data_size && attempts < 40 * limits.triples {
        attempts += 1;
        let x = individual(rng.gen_range(0..individuals));
        let t = match rng.gen_range(0..20) {
            0..=7 => Triple::new(x, ns::rdf::type_(), c(rng)),
            8..=15 => Triple::new(x, p(rng), individual(rng.gen_range(0..individuals))),
            16 | 17 => Triple::new(x, p(rng), small_literal(rng)),
            18 => Triple::new(c(rng), ns::rdfs::sub_class_of(), c(rng)),
            _ => Triple::new(p(rng), ns::rdfs::domain(), c(rng)),
        };
        data.insert(t.expect("data triple"));
    }
    (schema, data)
}

/// A graph over a small vocabulary so that joins have matches, with IRIs,
/// blank nodes and literals in every legal position.
pub fn dense_graph(rng: &mut impl Rng, max_triples: usize) -> Graph {
    let n = rng.gen_range(0..=max_triples);
    let mut g = Graph::new();
    let node = |rng: &mut dyn rand::RngCore| -> Term {
        match rng.gen_range(0..10) {
            0 => Term::BlankNode(BlankNode::new(format!("b{}", rng.gen_range(0..2))).expect("label")),
            _ => Term::Iri(iri(format!("{DATA_NS}n{}", rng.gen_range(0..5)))),
        }
    };
    let mut attempts = 0;
    while g.len() < n && attempts < 10 * max_triples {
        attempts += 1;
        let s = node(rng);
        let p = iri(format!("{DATA_NS}q{}", rng.gen_range(0..3)));
        let o = match rng.gen_range(0..6) {
            0 => Term::Literal(small_literal(rng)),
            1 => Term::Iri(p.clone()),
            _ => node(rng),
        };
        g.insert(Triple::new(s, p, o).expect("triple"));
    }
    g
}

/// A random query of 1 to `max_patterns` patterns over at most
/// `max_vars` variables, using constants that occur in `graph` (or a
/// missing IRI). Blank nodes never appear as query constants.
pub fn random_query(rng: &mut impl Rng, graph: &Graph, max_patterns: usize, max_vars: usize) -> Query {
    let names = ["x", "y", "z", "w"];
    let vars: Vec<Variable> = names[..max_vars.min(names.len())].iter().map(|n| Variable::new(n).expect("var")).collect();
    let triples = graph.triples();
    let missing = Term::Iri(iri(format!("{DATA_NS}missing")));
    let constant = |rng: &mut dyn rand::RngCore, pos: usize| -> Term {
        let picked = triples.choose(rng).map(|t| match pos {
            0 => t.subject().clone(),
            1 => Term::Iri(t.predicate().clone()),
            _ => t.object().clone(),
        });
        match picked {
            Some(t) if !t.is_blank() && rng.gen_bool(0.9) => t,
            _ => missing.clone(),
        }
    };
    let count = rng.gen_range(1..=max_patterns);
    let mut patterns = Vec::new();
    for _ in 0..count {
        let pos = |rng: &mut dyn rand::RngCore, i: usize| -> PatternTerm {
            let var_chance = if i == 1 { 0.3 } else { 0.65 };
            if rng.gen_bool(var_chance) {
                PatternTerm::Variable(vars.choose(rng).expect("vars").clone())
            } else {
                PatternTerm::Term(constant(rng, i))
            }
        };
        let s = pos(rng, 0);
        let p = pos(rng, 1);
        let o = pos(rng, 2);
        patterns.push(TriplePattern::new(s, p, o));
    }
    let mut used: Vec<Variable> = Vec::new();
    for v in patterns.iter().flat_map(TriplePattern::variables) {
        if !used.contains(v) {
            used.push(v.clone());
        }
    }
    let projection = if used.is_empty() || rng.gen_bool(0.3) {
        Projection::All
    } else {
        let mut chosen: Vec<Variable> = used.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
        if chosen.is_empty() {
            chosen.push(used[0].clone());
        }
        chosen.shuffle(rng);
        Projection::Variables(chosen)
    };
    Query::new(PrefixMap::new(), projection, patterns, rng.gen_bool(0.4)).expect("projection uses pattern variables")
}

/// Text form of `query` with full IRIs, accepted by `parse_query_with`.
pub fn query_text(query: &Query) -> String {
    let head = match &query.projection {
        Projection::All => "*".to_owned(),
        Projection::Variables(v) => v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
    };
    let body: Vec<String> = query.patterns.iter().map(|p| format!("  {p} .")).collect();
    format!(
        "SELECT {}{head}\nWHERE {{\n{}\n}}\n",
        if query.distinct { "DISTINCT " } else { "" },
        body.join("\n")
    )
}

const LOCAL_NAMES: &[&str] = &["a", "b1", "long_name", "with-dash", "1leading", "dot.inside", "end.", "sp ace", "pct%41", "x"];
const LEXICAL: &[&str] = &[
    "plain",
    "",
    "with \"quotes\"",
    "back\\slash",
    "line\nbreak",
    "tab\tand\rreturn",
    "unicode \u{e9}\u{4e2d}",
    "'single'",
    "#not a comment",
];

/// A graph exercising the serializer: odd local names, escapes, language
/// tags, numeric and boolean literals, custom datatypes and blank nodes.
pub fn turtle_graph(rng: &mut impl Rng, max_triples: usize) -> Graph {
    let mut prefixes = PrefixMap::new();
    if rng.gen_bool(0.7) {
        prefixes.bind("ex", iri("http://example.org/".to_owned()));
    }
    if rng.gen_bool(0.5) {
        prefixes.bind("exd", iri("http://example.org/data/".to_owned()));
    }
    if rng.gen_bool(0.3) {
        prefixes.bind("", iri("urn:x:".to_owned()));
    }
    let mut g = Graph::with_prefixes(prefixes);
    let namespaces = ["http://example.org/", "http://example.org/data/", "urn:x:", "https://other.test/path#"];
    let named = |rng: &mut dyn rand::RngCore| -> Iri {
        let local = LOCAL_NAMES.choose(rng).expect("names");
        let ns = namespaces.choose(rng).expect("namespaces");
        iri(format!("{ns}{}", local.replace(' ', "_")))
    };
    let blank = |rng: &mut dyn rand::RngCore| -> Term {
        Term::BlankNode(BlankNode::new(["b0", "b1", "node-2", "anon0", "x_y"][rng.gen_range(0..5)]).expect("label"))
    };
    let literal = |rng: &mut dyn rand::RngCore| -> Literal {
        let lex = LEXICAL.choose(rng).expect("lexical");
        match rng.gen_range(0..10) {
            0 => Literal::new_simple(lex),
            1 => Literal::new_language_tagged(lex, ["en", "de-AT", "zh-Hant-TW"][rng.gen_range(0..3)]).expect("tag"),
            2 => Literal::new_typed(["42", "-7", "+3", "007", "x1"][rng.gen_range(0..5)], ns::xsd::integer()),
            3 => Literal::new_typed(["1.50", "-0.5", ".5", "2.", "1e3"][rng.gen_range(0..5)], ns::xsd::decimal()),
            4 => Literal::new_typed(["true", "false", "TRUE", "1"][rng.gen_range(0..4)], ns::xsd::boolean()),
            5 => Literal::new_typed(*lex, iri("http://example.org/dt".to_owned())),
            6 => Literal::new_typed(*lex, ns::xsd::string()),
            _ => Literal::new_simple(format!("v{}", rng.gen_range(0..100))),
        }
    };
    let n = rng.gen_range(0..=max_triples);
    for _ in 0..n {
        let s = if rng.gen_bool(0.3) { blank(rng) } else { Term::Iri(named(rng)) };
        let p = if rng.gen_bool(0.15) { ns::rdf::type_() } else { named(rng) };
        let o = match rng.gen_range(0..3) {
            0 => blank(rng),
            1 => Term::Literal(literal(rng)),
            _ => Term::Iri(named(rng)),
        };
        g.insert(Triple::new(s, p, o).expect("triple"));
    }
    g
}
