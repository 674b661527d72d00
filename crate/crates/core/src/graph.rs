//! In-memory triple store with prefix table and pattern matching.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::term::{BlankNode, Iri, PatternTerm, Term, Triple, TriplePattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurieError {
    #[error("unbound prefix {0:?}")]
    UnboundPrefix(String),
    #[error("malformed prefixed name {0:?}: expected exactly one ':'")]
    MalformedCurie(String),
}

/// Prefix label to namespace bindings, iterated in label order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    bindings: BTreeMap<String, Iri>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `label`, replacing any previous namespace for it.
    pub fn bind(&mut self, label: impl Into<String>, namespace: Iri) -> Option<Iri> {
        self.bindings.insert(label.into(), namespace)
    }

    pub fn get(&self, label: &str) -> Option<&Iri> {
        self.bindings.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Adds every binding of `other`; labels bound in both take `other`'s namespace.
    pub fn extend(&mut self, other: &PrefixMap) {
        for (label, ns) in other.iter() {
            self.bind(label, ns.clone());
        }
    }

    pub fn expand(&self, curie: &str) -> Result<Iri, CurieError> {
        expand_curie(self, curie)
    }

    /// Shortest prefixed form of `iri` whose local part is a plain name, if any.
    pub fn compact(&self, iri: &Iri) -> Option<String> {
        let text = iri.as_str();
        self.bindings
            .iter()
            .filter_map(|(label, ns)| {
                let local = text.strip_prefix(ns.as_str())?;
                is_plain_local_name(local).then(|| format!("{label}:{local}"))
            })
            .min_by_key(|s| (s.len(), s.clone()))
    }
}

impl<L: Into<String>> FromIterator<(L, Iri)> for PrefixMap {
    fn from_iter<T: IntoIterator<Item = (L, Iri)>>(iter: T) -> Self {
        let mut map = PrefixMap::new();
        for (label, ns) in iter {
            map.bind(label, ns);
        }
        map
    }
}

/// Local names the toolkit reads and writes in prefixed form.
pub fn is_plain_local_name(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.') && !local.ends_with('.')
}

pub fn is_valid_prefix_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'),
        Some(_) => false,
    }
}

/// Expands `label:local` against `prefixes`.
pub fn expand_curie(prefixes: &PrefixMap, curie: &str) -> Result<Iri, CurieError> {
    let mut parts = curie.split(':');
    let (Some(label), Some(local), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(CurieError::MalformedCurie(curie.to_owned()));
    };
    let ns = prefixes
        .get(label)
        .ok_or_else(|| CurieError::UnboundPrefix(label.to_owned()))?;
    Iri::new(format!("{}{local}", ns.as_str())).map_err(|_| CurieError::MalformedCurie(curie.to_owned()))
}

type Index<A, B, C> = BTreeMap<A, BTreeMap<B, BTreeSet<C>>>;

/// A set of triples plus a prefix table.
///
/// Three nested indexes (subject, predicate and object first) serve every
/// bound-position combination. Iteration follows canonical triple order.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    spo: Index<Term, Iri, Term>,
    pos: Index<Iri, Term, Term>,
    osp: Index<Term, Term, Iri>,
    len: usize,
    prefixes: PrefixMap,
}

impl PartialEq for Graph {
    /// Triple-set equality; prefix tables are presentation only.
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.spo == other.spo
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_prefixes(prefixes: PrefixMap) -> Self {
        Graph {
            prefixes,
            ..Self::default()
        }
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixMap {
        &mut self.prefixes
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns `true` when the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let (s, p, o) = triple.into_parts();
        let new = self
            .spo
            .entry(s.clone())
            .or_default()
            .entry(p.clone())
            .or_default()
            .insert(o.clone());
        if new {
            self.pos.entry(p.clone()).or_default().entry(o.clone()).or_default().insert(s.clone());
            self.osp.entry(o).or_default().entry(s).or_default().insert(p);
            self.len += 1;
        }
        new
    }

    /// Returns `true` when the triple was present.
    pub fn remove(&mut self, triple: &Triple) -> bool {
        let (s, p, o) = (triple.subject(), triple.predicate(), triple.object());
        if !remove_nested(&mut self.spo, s, p, o) {
            return false;
        }
        remove_nested(&mut self.pos, p, o, s);
        remove_nested(&mut self.osp, o, s, p);
        self.len -= 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(triple.subject())
            .and_then(|m| m.get(triple.predicate()))
            .is_some_and(|objects| objects.contains(triple.object()))
    }

    /// All triples in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, by_p)| {
            by_p.iter().flat_map(move |(p, objects)| {
                objects.iter().map(move |o| make_triple(s, p, o))
            })
        })
    }

    pub fn triples(&self) -> Vec<Triple> {
        self.iter().collect()
    }

    pub fn subjects(&self) -> impl Iterator<Item = &Term> {
        self.spo.keys()
    }

    /// Objects of `(subject, predicate, ·)` in canonical order.
    pub fn objects<'a>(&'a self, subject: &Term, predicate: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.spo
            .get(subject)
            .and_then(|m| m.get(predicate))
            .into_iter()
            .flatten()
    }

    /// Subjects of `(·, predicate, object)` in canonical order.
    pub fn subjects_with<'a>(&'a self, predicate: &Iri, object: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.pos
            .get(predicate)
            .and_then(|m| m.get(object))
            .into_iter()
            .flatten()
    }

    /// All `(subject, object)` pairs for `predicate`, ordered by object then subject.
    pub fn pairs_with<'a>(&'a self, predicate: &Iri) -> impl Iterator<Item = (&'a Term, &'a Term)> + 'a {
        self.pos
            .get(predicate)
            .into_iter()
            .flat_map(|m| m.iter().flat_map(|(o, subjects)| subjects.iter().map(move |s| (s, o))))
    }

    /// Triples matching the ground positions of `pattern`, in canonical order.
    ///
    /// A variable repeated across positions must bind the same term.
    pub fn matches(&self, pattern: &TriplePattern) -> Vec<Triple> {
        let s = pattern.subject.as_term();
        if s.is_some_and(Term::is_literal) {
            return Vec::new();
        }
        let p = match &pattern.predicate {
            PatternTerm::Term(Term::Iri(iri)) => Some(iri),
            PatternTerm::Term(_) => return Vec::new(),
            PatternTerm::Variable(_) => None,
        };
        let o = pattern.object.as_term();
        let mut out: Vec<Triple> = match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                let t = make_triple(s, p, o);
                if self.contains(&t) {
                    vec![t]
                } else {
                    vec![]
                }
            }
            (Some(s), Some(p), None) => self.objects(s, p).map(|o| make_triple(s, p, o)).collect(),
            (Some(s), None, o) => self
                .spo
                .get(s)
                .into_iter()
                .flat_map(|by_p| by_p.iter())
                .flat_map(|(p, objects)| objects.iter().map(move |o| (p, o)))
                .filter(|(_, obj)| o.is_none_or(|o| o == *obj))
                .map(|(p, obj)| make_triple(s, p, obj))
                .collect(),
            (None, Some(p), Some(o)) => self.subjects_with(p, o).map(|s| make_triple(s, p, o)).collect(),
            (None, Some(p), None) => {
                let mut v: Vec<_> = self.pairs_with(p).map(|(s, o)| make_triple(s, p, o)).collect();
                v.sort();
                v
            }
            (None, None, Some(o)) => {
                let mut v: Vec<_> = self
                    .osp
                    .get(o)
                    .into_iter()
                    .flat_map(|by_s| by_s.iter())
                    .flat_map(|(s, preds)| preds.iter().map(move |p| make_triple(s, p, o)))
                    .collect();
                v.sort();
                v
            }
            (None, None, None) => self.triples(),
        };
        if has_repeated_variable(pattern) {
            out.retain(|t| binds_consistently(pattern, t));
        }
        out
    }

    /// Blank node labels used anywhere in the graph.
    pub fn blank_labels(&self) -> BTreeSet<BlankNode> {
        let mut labels = BTreeSet::new();
        for s in self.spo.keys().chain(self.osp.keys()) {
            if let Term::BlankNode(b) = s {
                labels.insert(b.clone());
            }
        }
        labels
    }

    /// Adds every triple of `other`. Blank labels of `other` that already occur
    /// in `self` are renamed to fresh labels first. Prefixes of `other` are
    /// bound as well.
    pub fn merge(&mut self, other: &Graph) {
        let mine = self.blank_labels();
        let theirs = other.blank_labels();
        let mut taken: HashSet<String> = mine.iter().chain(theirs.iter()).map(|b| b.label().to_owned()).collect();
        let mut renames = BTreeMap::new();
        for b in theirs.intersection(&mine) {
            let mut n = 1usize;
            let fresh = loop {
                let candidate = format!("{}-{n}", b.label());
                if !taken.contains(&candidate) {
                    break candidate;
                }
                n += 1;
            };
            taken.insert(fresh.clone());
            renames.insert(b.clone(), BlankNode::new(fresh).expect("derived label is valid"));
        }
        let rename = |t: &Term| match t {
            Term::BlankNode(b) => renames.get(b).cloned().map(Term::BlankNode).unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        };
        for t in other.iter() {
            let triple = make_triple(&rename(t.subject()), t.predicate(), &rename(t.object()));
            self.insert(triple);
        }
        self.prefixes.extend(&other.prefixes);
    }
}

impl Extend<Triple> for Graph {
    fn extend<T: IntoIterator<Item = Triple>>(&mut self, iter: T) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<T: IntoIterator<Item = Triple>>(iter: T) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

fn make_triple(s: &Term, p: &Iri, o: &Term) -> Triple {
    Triple::new(s.clone(), p.clone(), o.clone()).expect("indexed terms form a valid triple")
}

fn remove_nested<A: Ord, B: Ord, C: Ord>(index: &mut Index<A, B, C>, a: &A, b: &B, c: &C) -> bool {
    let Some(by_b) = index.get_mut(a) else { return false };
    let Some(set) = by_b.get_mut(b) else { return false };
    if !set.remove(c) {
        return false;
    }
    if set.is_empty() {
        by_b.remove(b);
        if by_b.is_empty() {
            index.remove(a);
        }
    }
    true
}

fn has_repeated_variable(pattern: &TriplePattern) -> bool {
    let vars: Vec<_> = pattern.variables().collect();
    (0..vars.len()).any(|i| vars[i + 1..].contains(&vars[i]))
}

fn binds_consistently(pattern: &TriplePattern, triple: &Triple) -> bool {
    let values = [triple.subject().clone(), Term::Iri(triple.predicate().clone()), triple.object().clone()];
    let positions = pattern.positions();
    for i in 0..3 {
        for j in i + 1..3 {
            if let (Some(a), Some(b)) = (positions[i].as_variable(), positions[j].as_variable()) {
                if a == b && values[i] != values[j] {
                    return false;
                }
            }
        }
    }
    true
}
