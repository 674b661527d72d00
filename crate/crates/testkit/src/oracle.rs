//! Naive reference implementations. Each one recomputes from scratch over a
//! flat triple set on every pass and shares no code with the engines in
//! `aias_core` beyond the term types.

use std::collections::{BTreeMap, BTreeSet};

use aias_core::ns;
use aias_core::query::{Projection, Query};
use aias_core::reasoner::{Atom, RuleSet};
use aias_core::{Graph, Iri, PatternTerm, Term, Triple, TriplePattern, Variable};

type Set = BTreeSet<Triple>;

fn triple(s: &Term, p: &str, o: &Term) -> Option<Triple> {
    Triple::new(s.clone(), Term::Iri(Iri::new(p).ok()?), o.clone()).ok()
}

/// One pass of every closure axiom over `set`; returns all consequences.
fn axiom_pass(set: &Set) -> Set {
    let (sub, ty, eq, dom, rng) = (ns::rdfs::SUB_CLASS_OF, ns::rdf::TYPE, ns::owl::EQUIVALENT_CLASS, ns::rdfs::DOMAIN, ns::rdfs::RANGE);
    let with = |p: &str| -> Vec<(&Term, &Term)> {
        set.iter()
            .filter(|t| t.predicate().as_str() == p)
            .map(|t| (t.subject(), t.object()))
            .collect()
    };
    let subs = with(sub);
    let types = with(ty);
    let eqs = with(eq);
    let doms = with(dom);
    let rngs = with(rng);
    let mut out = Set::new();
    let mut push = |t: Option<Triple>| {
        if let Some(t) = t {
            out.insert(t);
        }
    };
    for (a, b) in &subs {
        for (b2, c) in &subs {
            if b == b2 {
                push(triple(a, sub, c));
            }
        }
        for (x, a2) in &types {
            if a == a2 {
                push(triple(x, ty, b));
            }
        }
    }
    for (a, b) in &eqs {
        push(triple(b, eq, a));
        push(triple(a, sub, b));
        for (b2, c) in &eqs {
            if b == b2 {
                push(triple(a, eq, c));
            }
        }
    }
    for t in set {
        let p = Term::Iri(t.predicate().clone());
        for (q, c) in &doms {
            if **q == p {
                push(triple(t.subject(), ty, c));
            }
        }
        if !t.object().is_literal() {
            for (q, c) in &rngs {
                if **q == p {
                    push(triple(t.object(), ty, c));
                }
            }
        }
    }
    out
}

/// Least fixpoint of the closure axioms over `set`.
pub fn naive_fixpoint(set: &Set) -> Set {
    let mut current = set.clone();
    loop {
        let before = current.len();
        let new = axiom_pass(&current);
        current.extend(new);
        if current.len() == before {
            return current;
        }
    }
}

/// Expected `(closure, inferred)` of `schema_closure(data, schema)`.
pub fn closure_oracle(data: &Graph, schema: &Graph) -> (Set, Set) {
    rules_oracle(data, &RuleSet::default(), schema)
}

/// Expected `(closure, inferred)` of `apply_rules(data, rules, schema)`:
/// axioms and rules are alternated until neither adds anything.
pub fn rules_oracle(data: &Graph, rules: &RuleSet, schema: &Graph) -> (Set, Set) {
    let d: Set = data.iter().collect();
    let s: Set = schema.iter().collect();
    let schema_only = naive_fixpoint(&s);
    let mut all: Set = s.union(&d).cloned().collect();
    loop {
        all = naive_fixpoint(&all);
        let before = all.len();
        for rule in &rules.rules {
            let heads = fire_rule(&all, &rule.body, &rule.head);
            all.extend(heads);
        }
        if all.len() == before {
            break;
        }
    }
    let inferred: Set = all.iter().filter(|t| !d.contains(t) && !schema_only.contains(t)).cloned().collect();
    let closure: Set = d.union(&inferred).cloned().collect();
    (closure, inferred)
}

fn atom_pattern(atom: &Atom) -> TriplePattern {
    atom.to_pattern()
}

fn fire_rule(set: &Set, body: &[Atom], head: &[Atom]) -> Vec<Triple> {
    let patterns: Vec<TriplePattern> = body.iter().map(atom_pattern).collect();
    let domain = active_domain(set.iter());
    let vars = pattern_variables(&patterns);
    let mut out = Vec::new();
    for_each_solution(&vars, &domain, &patterns, set, &mut |b| {
        for h in head {
            if let Some(t) = instantiate(&atom_pattern(h), b) {
                out.push(t);
            }
        }
    });
    out
}

fn active_domain<'a>(triples: impl Iterator<Item = &'a Triple>) -> Vec<Term> {
    let mut terms = BTreeSet::new();
    for t in triples {
        terms.insert(t.subject().clone());
        terms.insert(Term::Iri(t.predicate().clone()));
        terms.insert(t.object().clone());
    }
    terms.into_iter().collect()
}

fn pattern_variables(patterns: &[TriplePattern]) -> Vec<Variable> {
    let mut vars = Vec::new();
    for v in patterns.iter().flat_map(TriplePattern::variables) {
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    vars
}

/// Calls `f` for every total assignment of `vars` over `domain` that makes
/// every pattern a member of `set`. A pattern is tested as soon as its last
/// variable is bound.
fn for_each_solution(
    vars: &[Variable],
    domain: &[Term],
    patterns: &[TriplePattern],
    set: &Set,
    f: &mut dyn FnMut(&BTreeMap<Variable, Term>),
) {
    // checks[i]: patterns whose variables are all among vars[..=i]; ground
    // patterns are checked up front.
    let depth = |p: &TriplePattern| p.variables().map(|v| vars.iter().position(|w| w == v).expect("known variable")).max();
    let mut checks: Vec<Vec<&TriplePattern>> = vec![Vec::new(); vars.len()];
    for p in patterns {
        match depth(p) {
            Some(i) => checks[i].push(p),
            None => {
                if !instantiate(p, &BTreeMap::new()).is_some_and(|t| set.contains(&t)) {
                    return;
                }
            }
        }
    }
    fn go(
        i: usize,
        vars: &[Variable],
        domain: &[Term],
        checks: &[Vec<&TriplePattern>],
        set: &Set,
        b: &mut BTreeMap<Variable, Term>,
        f: &mut dyn FnMut(&BTreeMap<Variable, Term>),
    ) {
        if i == vars.len() {
            f(b);
            return;
        }
        for value in domain {
            b.insert(vars[i].clone(), value.clone());
            if checks[i].iter().all(|p| instantiate(p, b).is_some_and(|t| set.contains(&t))) {
                go(i + 1, vars, domain, checks, set, b, f);
            }
        }
        b.remove(&vars[i]);
    }
    go(0, vars, domain, &checks, set, &mut BTreeMap::new(), f);
}

fn instantiate(p: &TriplePattern, b: &BTreeMap<Variable, Term>) -> Option<Triple> {
    let resolve = |pt: &PatternTerm| match pt {
        PatternTerm::Term(t) => t.clone(),
        PatternTerm::Variable(v) => b[v].clone(),
    };
    Triple::new(resolve(&p.subject), resolve(&p.predicate), resolve(&p.object)).ok()
}

/// Expected rows of `query` on `graph`: every total assignment of the
/// query's variables to terms of the graph that makes all patterns true,
/// projected, sorted, and deduplicated under DISTINCT.
pub fn query_oracle(graph: &Graph, query: &Query) -> Vec<Vec<Term>> {
    let set: Set = graph.iter().collect();
    let domain = active_domain(set.iter());
    let vars = pattern_variables(&query.patterns);
    let projected: Vec<Variable> = match &query.projection {
        Projection::Variables(v) => v.clone(),
        Projection::All => vars.clone(),
    };
    let mut rows = Vec::new();
    for_each_solution(&vars, &domain, &query.patterns, &set, &mut |b| {
        rows.push(projected.iter().map(|v| b[v].clone()).collect::<Vec<_>>());
    });
    rows.sort();
    if query.distinct {
        rows.dedup();
    }
    rows
}

/// Triples of `graph` matching `pattern`, by linear scan.
pub fn match_oracle(graph: &Graph, pattern: &TriplePattern) -> Vec<Triple> {
    let mut out: Vec<Triple> = graph
        .iter()
        .filter(|t| {
            let values = [t.subject().clone(), Term::Iri(t.predicate().clone()), t.object().clone()];
            let mut bound: BTreeMap<&Variable, &Term> = BTreeMap::new();
            pattern.positions().iter().zip(&values).all(|(pt, value)| match pt {
                PatternTerm::Term(c) => c == value,
                PatternTerm::Variable(v) => *bound.entry(v).or_insert(value) == value,
            })
        })
        .collect();
    out.sort();
    out
}
