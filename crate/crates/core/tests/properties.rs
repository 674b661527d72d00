use std::collections::{BTreeSet, HashSet};

use aias_core::corpus::{build_stamping_graph, ex, STAMPING_RULES};
use aias_core::query::{evaluate_query, Query};
use aias_core::reasoner::{apply_rules, parse_rules, parse_rules_with, schema_closure, RuleSet};
use aias_core::shapes::{validate, PropertyConstraint, Shape};
use aias_core::vocab::{lint_aias, Vocabulary};
use aias_core::{graph_isomorphic, ns, parse_turtle, serialize_turtle, Graph, PrefixMap, Term, Triple, TriplePattern, Variable};
use aias_testkit::{dense_graph, random_query, rng, schema_instance, turtle_graph, SchemaLimits};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn set(g: &Graph) -> BTreeSet<Triple> {
    g.iter().collect()
}

fn shuffled(g: &Graph, seed: u64) -> Graph {
    let mut triples = g.triples();
    triples.shuffle(&mut rng(seed, 0));
    let mut out = Graph::with_prefixes(g.prefixes().clone());
    out.extend(triples);
    out
}

/// Same graph with every blank label replaced.
fn relabeled(g: &Graph) -> Graph {
    let map = |t: &Term| match t {
        Term::BlankNode(b) => Term::blank(format!("r{}", b.label())).unwrap(),
        other => other.clone(),
    };
    g.iter()
        .map(|t| Triple::new(map(t.subject()), t.predicate().clone(), map(t.object())).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn insert_remove_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed, 1);
        let mut g = dense_graph(&mut r, 20);
        let before = set(&g);
        let extra = dense_graph(&mut r, 5);
        let fresh: Vec<Triple> = extra.iter().filter(|t| !g.contains(t)).collect();
        for t in fresh {
            prop_assert!(g.insert(t.clone()));
            prop_assert!(!g.insert(t.clone()));
            prop_assert!(g.remove(&t));
            prop_assert_eq!(set(&g), before.clone());
        }
    }

    #[test]
    fn all_variable_match_is_the_graph(seed in any::<u64>()) {
        let g = dense_graph(&mut rng(seed, 2), 30);
        let var = |n: &str| Variable::new(n).unwrap();
        let all = g.matches(&TriplePattern::new(var("s"), var("p"), var("o")));
        prop_assert_eq!(all.into_iter().collect::<BTreeSet<_>>(), set(&g));
    }

    #[test]
    fn isomorphism_laws(seed in any::<u64>()) {
        let mut r = rng(seed, 3);
        let a = turtle_graph(&mut r, 12);
        let b = turtle_graph(&mut r, 12);
        prop_assert!(graph_isomorphic(&a, &a));
        prop_assert!(graph_isomorphic(&a, &relabeled(&a)));
        prop_assert_eq!(graph_isomorphic(&a, &b), graph_isomorphic(&b, &a));
        let ground = |g: &Graph| g.iter().filter(|t| !t.has_blank()).collect::<Graph>();
        let (ga, gb) = (ground(&a), ground(&b));
        prop_assert_eq!(graph_isomorphic(&ga, &gb), set(&ga) == set(&gb));
    }

    #[test]
    fn term_equality_agrees_with_hashing(seed in any::<u64>()) {
        let g = turtle_graph(&mut rng(seed, 4), 15);
        let terms: Vec<Term> = g.iter().flat_map(|t| [t.subject().clone(), t.object().clone()]).collect();
        let hashed: HashSet<&Term> = terms.iter().collect();
        let ordered: BTreeSet<&Term> = terms.iter().collect();
        prop_assert_eq!(hashed.len(), ordered.len());
        for a in &terms {
            prop_assert!(hashed.contains(a));
        }
    }

    #[test]
    fn turtle_round_trip(seed in any::<u64>()) {
        let g = turtle_graph(&mut rng(seed, 5), 20);
        let text = serialize_turtle(&g);
        let back = parse_turtle(&text);
        prop_assert!(back.is_ok(), "{:?}\n{}", back.err(), text);
        let back = back.unwrap();
        prop_assert!(graph_isomorphic(&back, &g), "{}", text);
        prop_assert_eq!(serialize_turtle(&back), serialize_turtle(&parse_turtle(&text).unwrap()));
    }

    #[test]
    fn parse_errors_point_inside_the_document(seed in any::<u64>()) {
        let mut r = rng(seed, 6);
        let text = serialize_turtle(&turtle_graph(&mut r, 8));
        let chars: Vec<char> = text.chars().collect();
        let cut = r.gen_range(0..=chars.len());
        let mut doc: String = chars[..cut].iter().collect();
        if r.gen_bool(0.5) {
            doc.push([')', '(', '"', '@', ';', '<', '^'][r.gen_range(0..7)]);
        }
        if let Err(e) = parse_turtle(&doc) {
            let lines: Vec<&str> = doc.split('\n').collect();
            prop_assert!(e.line >= 1 && e.line <= lines.len(), "{e}");
            let offset: usize = lines[..e.line - 1].iter().map(|l| l.chars().count() + 1).sum::<usize>() + e.column - 1;
            prop_assert!(e.column >= 1 && offset <= doc.chars().count(), "{e}");
        }
    }

    #[test]
    fn one_blank_node_per_bracket(seed in any::<u64>()) {
        let mut r = rng(seed, 7);
        fn node(r: &mut impl Rng, depth: usize, out: &mut String) {
            out.push_str("[ ");
            let n = if depth > 2 { 0 } else { r.gen_range(0..3) };
            for i in 0..n {
                if i > 0 {
                    out.push_str(" ; ");
                }
                out.push_str(&format!("<http://e/p{i}> "));
                if r.gen_bool(0.5) {
                    node(r, depth + 1, out);
                } else {
                    out.push_str("<http://e/o>");
                }
            }
            out.push_str(" ]");
        }
        let mut doc = String::from("<http://e/s> <http://e/p> ");
        let objects = r.gen_range(1..4);
        for i in 0..objects {
            if i > 0 {
                doc.push_str(", ");
            }
            node(&mut r, 0, &mut doc);
        }
        doc.push_str(" .\n_:keep <http://e/p> _:anon0 .\n");
        let g = parse_turtle(&doc).unwrap();
        let brackets = doc.matches('[').count();
        prop_assert_eq!(g.blank_labels().len(), brackets + 2);
        prop_assert_eq!(set(&g), set(&parse_turtle(&doc).unwrap()));
    }

    #[test]
    fn closure_is_monotone_and_idempotent(seed in any::<u64>()) {
        let (schema, data) = schema_instance(&mut rng(seed, 8), SchemaLimits::default());
        let r = schema_closure(&data, &schema).unwrap();
        prop_assert!(data.iter().all(|t| r.closure.contains(&t)));
        prop_assert!(r.inferred.iter().all(|t| !data.contains(&t)));
        let mut union = data.clone();
        union.extend(r.inferred.iter());
        prop_assert_eq!(set(&union), set(&r.closure));
        let again = schema_closure(&r.closure, &schema).unwrap();
        prop_assert!(again.inferred.is_empty());
    }

    #[test]
    fn rule_fixpoint_is_order_independent(seed in any::<u64>()) {
        let text = "PREFIX s: <http://example.org/schema#>
            s:C0(?x) ^ s:p0(?x, ?y) -> s:C1(?y)
            s:p1(?x, ?y) ^ s:p1(?y, ?z) -> s:p2(?x, ?z)
            s:C1(?x) -> s:p0(?x, s:Const)
            s:p2(?x, ?y) ^ s:C2(?y) -> s:C0(?x)
        ";
        let rules = parse_rules_with(text, &PrefixMap::new()).unwrap();
        let limits = SchemaLimits { classes: 4, properties: 3, individuals: 10, triples: 40 };
        let (schema, data) = schema_instance(&mut rng(seed, 9), limits);
        let reference = apply_rules(&data, &rules, &schema).unwrap();
        prop_assert!(reference.iterations >= 1);
        let mut permuted = rules.rules.clone();
        permuted.shuffle(&mut rng(seed, 10));
        let other = apply_rules(&shuffled(&data, seed), &RuleSet::new(permuted), &shuffled(&schema, seed ^ 1)).unwrap();
        prop_assert_eq!(set(&reference.closure), set(&other.closure));
        let again = apply_rules(&reference.closure, &rules, &schema).unwrap();
        prop_assert!(again.inferred.is_empty());
    }

    #[test]
    fn query_invariants(seed in any::<u64>()) {
        let mut r = rng(seed, 11);
        let g = dense_graph(&mut r, 40);
        let q = random_query(&mut r, &g, 3, 3);
        let base = evaluate_query(&g, &q);
        for row in &base.rows {
            prop_assert_eq!(row.len(), base.variables.len());
        }

        let mut patterns = q.patterns.clone();
        patterns.shuffle(&mut r);
        let pinned = aias_core::query::Projection::Variables(q.variables());
        let permuted = Query::new(q.prefixes.clone(), pinned, patterns, q.distinct).unwrap();
        prop_assert_eq!(&evaluate_query(&g, &permuted), &base);

        let distinct = Query::new(q.prefixes.clone(), q.projection.clone(), q.patterns.clone(), true).unwrap();
        let plain = Query::new(q.prefixes.clone(), q.projection.clone(), q.patterns.clone(), false).unwrap();
        let mut dedup = evaluate_query(&g, &plain).rows;
        dedup.dedup();
        let d = evaluate_query(&g, &distinct).rows;
        prop_assert_eq!(&d, &dedup);
        prop_assert!(d.windows(2).all(|w| w[0] != w[1]));

        let mut bigger = g.clone();
        bigger.extend(dense_graph(&mut r, 10).iter());
        let grown: BTreeSet<Vec<Term>> = evaluate_query(&bigger, &q).rows.into_iter().collect();
        prop_assert!(base.rows.iter().all(|row| grown.contains(row)));
    }

    #[test]
    fn min_count_is_monotone_under_deletion(seed in any::<u64>()) {
        let mut r = rng(seed, 12);
        let v = Vocabulary::builtin();
        let shape = Shape::new(
            Term::Iri(ex("S")),
            v.iso7489("Communication"),
            vec![PropertyConstraint::new(v.aias("communicatesWith")).min_count(2).max_count(3)],
        ).unwrap();
        let mut g = build_stamping_graph();
        let links = v.aias("communicatesWith");
        for comm in ["Comm_SC", "Comm_CE", "Comm_EC"] {
            for i in 0..r.gen_range(0..3) {
                g.insert(Triple::new(ex(comm), links.clone(), ex(&format!("Extra{i}"))).unwrap());
            }
        }
        let before = validate(&g, std::slice::from_ref(&shape), v.merged()).unwrap();
        prop_assert_eq!(&before, &validate(&g, std::slice::from_ref(&shape), v.merged()).unwrap());
        let focus: Vec<Term> = before.results.iter().map(|x| x.focus.clone()).collect();
        let mut sorted = focus.clone();
        sorted.sort();
        prop_assert_eq!(&focus, &sorted);

        let candidates: Vec<Triple> = g.iter().filter(|t| t.predicate() == &links).collect();
        let victim = candidates.choose(&mut r).unwrap().clone();
        g.remove(&victim);
        let after = validate(&g, std::slice::from_ref(&shape), v.merged()).unwrap();
        let min_fail = |rep: &aias_core::ValidationReport| rep.results.iter().filter(|x| x.kind == aias_core::shapes::ConstraintKind::MinCount).map(|x| x.focus.clone()).collect::<BTreeSet<_>>();
        prop_assert!(min_fail(&before).is_subset(&min_fail(&after)));
        let max_fail = |rep: &aias_core::ValidationReport| rep.results.iter().filter(|x| x.kind == aias_core::shapes::ConstraintKind::MaxCount).map(|x| x.focus.clone()).collect::<BTreeSet<_>>();
        prop_assert!(max_fail(&after).is_subset(&max_fail(&before)));
        prop_assert_eq!(before.conforms, before.results.is_empty());
    }

    #[test]
    fn untargeted_graphs_lint_clean(seed in any::<u64>()) {
        let g = dense_graph(&mut rng(seed, 13), 30);
        let report = lint_aias(&g);
        prop_assert!(report.conforms);
        prop_assert!(report.results.is_empty());
        let v = Vocabulary::builtin();
        let shape = Shape::new(Term::Iri(ex("S")), v.iso7489("Communication"), vec![PropertyConstraint::new(v.aias("communicatesWith")).min_count(2)]).unwrap();
        prop_assert!(validate(&g, &[shape], v.merged()).unwrap().results.is_empty());
    }
}

#[test]
fn schemas_are_acyclic_and_equivalences_symmetric() {
    let v = Vocabulary::builtin();
    for schema in v.schemas() {
        let index = aias_core::vocab::VocabularyIndex::from_graph(&schema.graph);
        assert!(index.find_subclass_cycle().is_none(), "{}", schema.name);
    }
    let index = v.index();
    for (a, b) in &index.equivalences {
        assert!(index.equivalences.contains(&(b.clone(), a.clone())));
    }
    for (a, b) in index.subclass_edges.iter().chain(&index.equivalences) {
        assert!(index.classes.contains(a) && index.classes.contains(b), "{a} {b}");
    }
}

#[test]
fn corpus_rules_infer_cloud_design() {
    let v = Vocabulary::builtin();
    let corpus = build_stamping_graph();
    let r = apply_rules(&corpus, &parse_rules(STAMPING_RULES).unwrap(), v.merged()).unwrap();
    let head = Triple::new(v.aias("AISystem"), v.iso22989("hasDesign"), v.aias("CloudDesign")).unwrap();
    assert_eq!(r.rule_derived().triples(), vec![head]);
    let lit = Term::Literal(aias_core::Literal::integer(0));
    assert!(r.closure.iter().all(|t| t.subject() != &lit));
    assert!(r.closure.contains(&Triple::new(v.aias("CloudDesign"), ns::rdf::type_(), v.iso22989("SystemDesign")).unwrap()));
}
