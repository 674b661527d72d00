//! Graph isomorphism modulo blank node relabeling.
//!
//! Ground triples must match exactly. Blank nodes are first partitioned by
//! iterated neighbourhood hashing, then a backtracking search looks for a
//! bijection between equally colored nodes that maps every non-ground triple
//! of one graph onto the other.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use crate::graph::Graph;
use crate::term::{BlankNode, Iri, Term, Triple};

pub fn graph_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (ground_a, blank_a): (Vec<Triple>, Vec<Triple>) = a.iter().partition(|t| !t.has_blank());
    let (ground_b, blank_b): (Vec<Triple>, Vec<Triple>) = b.iter().partition(|t| !t.has_blank());
    if ground_a != ground_b || blank_a.len() != blank_b.len() {
        return false;
    }
    if blank_a.is_empty() {
        return true;
    }
    let colors_a = color_blank_nodes(&blank_a);
    let colors_b = color_blank_nodes(&blank_b);
    if colors_a.len() != colors_b.len() || color_histogram(&colors_a) != color_histogram(&colors_b) {
        return false;
    }

    let target: HashSet<&Triple> = blank_b.iter().collect();
    let mut order: Vec<&BlankNode> = colors_a.keys().collect();
    let hist = color_histogram(&colors_a);
    order.sort_by_key(|n| (hist[&colors_a[*n]], (*n).clone()));

    let mut candidates: HashMap<u64, Vec<&BlankNode>> = HashMap::new();
    for (node, color) in &colors_b {
        candidates.entry(*color).or_default().push(node);
    }
    for list in candidates.values_mut() {
        list.sort();
    }

    // Triples of `a` checked as soon as all their blank nodes are mapped.
    let position: HashMap<&BlankNode, usize> = order.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut ready: Vec<Vec<&Triple>> = vec![Vec::new(); order.len()];
    for t in &blank_a {
        let last = [t.subject(), t.object()]
            .into_iter()
            .filter_map(Term::as_blank)
            .map(|b| position[b])
            .max()
            .expect("non-ground triple has a blank node");
        ready[last].push(t);
    }

    let mut search = Search {
        order: &order,
        colors: &colors_a,
        candidates: &candidates,
        ready: &ready,
        target: &target,
        mapping: HashMap::new(),
        used: HashSet::new(),
    };
    search.extend(0)
}

struct Search<'a> {
    order: &'a [&'a BlankNode],
    colors: &'a BTreeMap<BlankNode, u64>,
    candidates: &'a HashMap<u64, Vec<&'a BlankNode>>,
    ready: &'a [Vec<&'a Triple>],
    target: &'a HashSet<&'a Triple>,
    mapping: HashMap<BlankNode, BlankNode>,
    used: HashSet<BlankNode>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        let Some(node) = self.order.get(depth) else {
            return true;
        };
        let Some(options) = self.candidates.get(&self.colors[*node]) else {
            return false;
        };
        for candidate in options {
            if self.used.contains(*candidate) {
                continue;
            }
            self.mapping.insert((*node).clone(), (*candidate).clone());
            self.used.insert((*candidate).clone());
            if self.ready[depth].iter().all(|t| self.target.contains(&self.map_triple(t))) && self.extend(depth + 1) {
                return true;
            }
            self.used.remove(*candidate);
            self.mapping.remove(*node);
        }
        false
    }

    fn map_triple(&self, t: &Triple) -> Triple {
        let map = |term: &Term| match term {
            Term::BlankNode(b) => Term::BlankNode(self.mapping[b].clone()),
            other => other.clone(),
        };
        Triple::new(map(t.subject()), t.predicate().clone(), map(t.object())).expect("mapping preserves well-formedness")
    }
}

#[derive(Hash)]
enum Neighbour<'a> {
    Ground(&'a Term),
    Blank(u64),
    Itself,
}

/// Stable color per blank node after refinement by neighbourhood signatures.
fn color_blank_nodes(triples: &[Triple]) -> BTreeMap<BlankNode, u64> {
    let mut colors: BTreeMap<BlankNode, u64> = BTreeMap::new();
    for t in triples {
        for term in [t.subject(), t.object()] {
            if let Term::BlankNode(b) = term {
                colors.insert(b.clone(), 0);
            }
        }
    }
    let mut classes = count_classes(&colors);
    for _ in 0..=colors.len() {
        let mut signatures: BTreeMap<BlankNode, Vec<u64>> = BTreeMap::new();
        for t in triples {
            if let Term::BlankNode(s) = t.subject() {
                signatures
                    .entry(s.clone())
                    .or_default()
                    .push(edge_hash(0, t.predicate(), neighbour(s, t.object(), &colors)));
            }
            if let Term::BlankNode(o) = t.object() {
                signatures
                    .entry(o.clone())
                    .or_default()
                    .push(edge_hash(1, t.predicate(), neighbour(o, t.subject(), &colors)));
            }
        }
        let refined: BTreeMap<BlankNode, u64> = colors
            .iter()
            .map(|(node, color)| {
                let mut sig = signatures.remove(node).unwrap_or_default();
                sig.sort_unstable();
                let mut h = DefaultHasher::new();
                color.hash(&mut h);
                sig.hash(&mut h);
                (node.clone(), h.finish())
            })
            .collect();
        let refined_classes = count_classes(&refined);
        colors = refined;
        if refined_classes == classes {
            break;
        }
        classes = refined_classes;
    }
    colors
}

fn neighbour<'a>(me: &BlankNode, other: &'a Term, colors: &BTreeMap<BlankNode, u64>) -> Neighbour<'a> {
    match other {
        Term::BlankNode(b) if b == me => Neighbour::Itself,
        Term::BlankNode(b) => Neighbour::Blank(colors[b]),
        ground => Neighbour::Ground(ground),
    }
}

fn edge_hash(direction: u8, predicate: &Iri, other: Neighbour<'_>) -> u64 {
    let mut h = DefaultHasher::new();
    direction.hash(&mut h);
    predicate.hash(&mut h);
    other.hash(&mut h);
    h.finish()
}

fn count_classes(colors: &BTreeMap<BlankNode, u64>) -> usize {
    colors.values().collect::<HashSet<_>>().len()
}

fn color_histogram(colors: &BTreeMap<BlankNode, u64>) -> HashMap<u64, usize> {
    let mut hist = HashMap::new();
    for c in colors.values() {
        *hist.entry(*c).or_insert(0) += 1;
    }
    hist
}
