use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::graph::Graph;
use crate::ns;
use crate::term::{Iri, PatternTerm, Term, Triple, TriplePattern, Variable};

use super::{Atom, Axiom, Derivation, RuleSet};

pub(super) struct Saturation {
    pub total: Graph,
    pub provenance: BTreeMap<Triple, Derivation>,
    pub iterations: usize,
}

struct Vocab {
    sub: Iri,
    ty: Iri,
    eq: Iri,
    domain: Iri,
    range: Iri,
}

struct State<'a> {
    total: Graph,
    queue: VecDeque<Triple>,
    provenance: BTreeMap<Triple, Derivation>,
    known: Option<&'a Graph>,
    v: Vocab,
}

/// Runs closure axioms and rules over `input` until nothing new appears.
///
/// `known` holds triples already entailed elsewhere; they are still derived
/// but kept out of the provenance map.
pub(super) fn saturate(input: &Graph, known: Option<&Graph>, rules: &RuleSet) -> Saturation {
    let mut state = State {
        total: input.clone(),
        queue: input.iter().collect(),
        provenance: BTreeMap::new(),
        known,
        v: Vocab {
            sub: ns::rdfs::sub_class_of(),
            ty: ns::rdf::type_(),
            eq: ns::owl::equivalent_class(),
            domain: ns::rdfs::domain(),
            range: ns::rdfs::range(),
        },
    };
    let mut iterations = 0;
    loop {
        iterations += 1;
        state.drain();
        let mut fired = false;
        for rule in &rules.rules {
            for head in fire(&state.total, &rule.body, &rule.head) {
                fired |= state.add(head, Derivation::Rule(rule.id.clone()));
            }
        }
        if !fired {
            break;
        }
    }
    Saturation {
        total: state.total,
        provenance: state.provenance,
        iterations,
    }
}

impl State<'_> {
    fn add(&mut self, triple: Triple, derivation: Derivation) -> bool {
        if !self.total.insert(triple.clone()) {
            return false;
        }
        if !self.known.is_some_and(|k| k.contains(&triple)) {
            self.provenance.insert(triple.clone(), derivation);
        }
        self.queue.push_back(triple);
        true
    }

    fn add_parts(&mut self, s: &Term, p: &Iri, o: &Term, axiom: Axiom) {
        if s.is_literal() {
            return;
        }
        let triple = Triple::new(s.clone(), p.clone(), o.clone()).expect("non-literal subject and IRI predicate");
        self.add(triple, Derivation::Axiom(axiom));
    }

    fn drain(&mut self) {
        while let Some(t) = self.queue.pop_front() {
            self.process(&t);
        }
    }

    /// Fires every axiom instance in which `t` takes part, joining against
    /// everything derived so far.
    fn process(&mut self, t: &Triple) {
        let (s, p, o) = (t.subject(), t.predicate(), t.object());
        let mut out: Vec<(Term, Iri, Term, Axiom)> = Vec::new();
        let g = &self.total;
        let v = &self.v;

        if p == &v.sub {
            if !o.is_literal() {
                for e in g.objects(o, &v.sub) {
                    out.push((s.clone(), v.sub.clone(), e.clone(), Axiom::SubClassTransitivity));
                }
            }
            for b in g.subjects_with(&v.sub, s) {
                out.push((b.clone(), v.sub.clone(), o.clone(), Axiom::SubClassTransitivity));
            }
            for x in g.subjects_with(&v.ty, s) {
                out.push((x.clone(), v.ty.clone(), o.clone(), Axiom::TypePropagation));
            }
        }
        if p == &v.ty && !o.is_literal() {
            for d in g.objects(o, &v.sub) {
                out.push((s.clone(), v.ty.clone(), d.clone(), Axiom::TypePropagation));
            }
        }
        if p == &v.eq {
            out.push((o.clone(), v.eq.clone(), s.clone(), Axiom::EquivalenceSymmetry));
            if !o.is_literal() {
                for e in g.objects(o, &v.eq) {
                    out.push((s.clone(), v.eq.clone(), e.clone(), Axiom::EquivalenceTransitivity));
                }
            }
            for b in g.subjects_with(&v.eq, s) {
                out.push((b.clone(), v.eq.clone(), o.clone(), Axiom::EquivalenceTransitivity));
            }
            out.push((s.clone(), v.sub.clone(), o.clone(), Axiom::EquivalenceSubClass));
        }
        if p == &v.domain {
            if let Term::Iri(prop) = s {
                for (x, _) in g.pairs_with(prop) {
                    out.push((x.clone(), v.ty.clone(), o.clone(), Axiom::Domain));
                }
            }
        }
        if p == &v.range {
            if let Term::Iri(prop) = s {
                for (_, y) in g.pairs_with(prop) {
                    if !y.is_literal() {
                        out.push((y.clone(), v.ty.clone(), o.clone(), Axiom::Range));
                    }
                }
            }
        }
        let p_term = Term::Iri(p.clone());
        for c in g.objects(&p_term, &v.domain) {
            out.push((s.clone(), v.ty.clone(), c.clone(), Axiom::Domain));
        }
        if !o.is_literal() {
            for d in g.objects(&p_term, &v.range) {
                out.push((o.clone(), v.ty.clone(), d.clone(), Axiom::Range));
            }
        }

        for (s, p, o, axiom) in out {
            self.add_parts(&s, &p, &o, axiom);
        }
    }
}

type Bindings = HashMap<Variable, Term>;

/// All instantiated heads of one rule over `graph`, in discovery order.
fn fire(graph: &Graph, body: &[Atom], head: &[Atom]) -> Vec<Triple> {
    let mut solutions = Vec::new();
    join(graph, body, &mut Bindings::new(), &mut solutions);
    let mut out = Vec::new();
    for bindings in solutions {
        for atom in head {
            let pattern = atom.to_pattern();
            let resolve = |pt: &PatternTerm| match pt {
                PatternTerm::Term(t) => t.clone(),
                PatternTerm::Variable(v) => bindings[v].clone(),
            };
            if let Ok(t) = Triple::new(resolve(&pattern.subject), resolve(&pattern.predicate), resolve(&pattern.object)) {
                out.push(t);
            }
        }
    }
    out
}

fn join(graph: &Graph, atoms: &[Atom], bindings: &mut Bindings, out: &mut Vec<Bindings>) {
    let Some((first, rest)) = atoms.split_first() else {
        out.push(bindings.clone());
        return;
    };
    let pattern = substitute(&first.to_pattern(), bindings);
    for t in graph.matches(&pattern) {
        let values = [t.subject().clone(), Term::Iri(t.predicate().clone()), t.object().clone()];
        let mut added = Vec::new();
        let mut consistent = true;
        for (pos, value) in pattern.positions().into_iter().zip(values) {
            if let PatternTerm::Variable(var) = pos {
                match bindings.get(var) {
                    Some(bound) if bound != &value => consistent = false,
                    Some(_) => {}
                    None => {
                        bindings.insert(var.clone(), value);
                        added.push(var.clone());
                    }
                }
            }
        }
        if consistent {
            join(graph, rest, bindings, out);
        }
        for var in added {
            bindings.remove(&var);
        }
    }
}

fn substitute(pattern: &TriplePattern, bindings: &Bindings) -> TriplePattern {
    let sub = |pt: &PatternTerm| match pt {
        PatternTerm::Variable(v) => bindings.get(v).cloned().map(PatternTerm::Term).unwrap_or_else(|| pt.clone()),
        PatternTerm::Term(_) => pt.clone(),
    };
    TriplePattern::new(sub(&pattern.subject), sub(&pattern.predicate), sub(&pattern.object))
}
