//! Built-in well-formedness checks for AIAS knowledge graphs.
//!
//! | id | severity | check |
//! |----|----------|-------|
//! | L1 | error    | every `ISO7489:Communication` has at least two `AIAS:communicatesWith` links |
//! | L2 | warning  | every `VDI3682:Assignment` is referenced through `AIAS:isAssignedTo` by a function and by a component |
//! | L3 | warning  | every `ISO22989:AISystem` has at least one `ISO22989:hasTask` |

use crate::graph::Graph;
use crate::ns;
use crate::reasoner::schema_closure;
use crate::shapes::{parse_shapes, shape_results, ConstraintKind, PropertyConstraint, Severity, Shape, ValidationReport, ValidationResult};
use crate::term::Term;
use crate::turtle::parse_turtle_with;

use super::Vocabulary;

/// The communication shape, as published.
pub const COMMUNICATION_SHAPE: &str = "AIAS:Communication
    a sh:NodeShape  ;
    sh:targetClass ISO7489:Communication ;
    sh:property 
    [   sh:path AIAS:communicatesWith ;
        sh:minCount 2;  ].
";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LintCheck {
    L1,
    L2,
    L3,
}

impl LintCheck {
    pub const ALL: [LintCheck; 3] = [LintCheck::L1, LintCheck::L2, LintCheck::L3];

    pub fn id(self) -> &'static str {
        match self {
            LintCheck::L1 => "L1",
            LintCheck::L2 => "L2",
            LintCheck::L3 => "L3",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            LintCheck::L1 => Severity::Error,
            LintCheck::L2 | LintCheck::L3 => Severity::Warning,
        }
    }
}

/// Runs the built-in checks with the default namespaces.
pub fn lint_aias(data: &Graph) -> ValidationReport {
    lint_aias_with(data, Vocabulary::builtin())
}

pub fn lint_aias_with(data: &Graph, vocab: &Vocabulary) -> ValidationReport {
    let closure = schema_closure(data, vocab.merged())
        .expect("built-in schemas only use axiom predicates")
        .closure;
    let mut results = Vec::new();
    for shape in communication_shapes(vocab) {
        results.extend(shape_results(&closure, &shape.with_check(LintCheck::L1.id())));
    }
    results.extend(assignment_references(&closure, vocab));
    let task_shape = Shape::new(
        Term::Iri(vocab.aias("AISystemTaskShape")),
        vocab.iso22989("AISystem"),
        vec![PropertyConstraint::new(vocab.iso22989("hasTask")).min_count(1)],
    )
    .expect("static shape is well-formed")
    .with_severity(LintCheck::L3.severity())
    .with_check(LintCheck::L3.id());
    results.extend(shape_results(&closure, &task_shape));
    ValidationReport::from_results(results)
}

/// The communication shape parsed under `vocab`'s namespaces.
pub fn communication_shapes(vocab: &Vocabulary) -> Vec<Shape> {
    let graph = parse_turtle_with(COMMUNICATION_SHAPE, vocab.prefixes()).expect("communication shape parses");
    parse_shapes(&graph).expect("communication shape is well-formed")
}

fn assignment_references(closure: &Graph, vocab: &Vocabulary) -> Vec<ValidationResult> {
    let ty = ns::rdf::type_();
    let assigned = vocab.aias("isAssignedTo");
    let function: Term = vocab.aias("Function").into();
    let component: Term = vocab.aias("Component").into();
    let mut results = Vec::new();
    for assignment in closure.subjects_with(&ty, &vocab.vdi3682("Assignment").into()) {
        let referrers: Vec<&Term> = closure.subjects_with(&assigned, assignment).collect();
        for (side, class) in [("function", &function), ("component", &component)] {
            let n = referrers
                .iter()
                .filter(|r| closure.objects(r, &ty).any(|t| t == class))
                .count();
            if n == 0 {
                results.push(ValidationResult {
                    focus: assignment.clone(),
                    path: assigned.clone(),
                    kind: ConstraintKind::InverseMinCount,
                    expected: format!(">=1 {side}"),
                    actual: "0".to_owned(),
                    message: format!("assignment is not referenced by any {side} through {assigned}"),
                    severity: LintCheck::L2.severity(),
                    check: LintCheck::L2.id().to_owned(),
                });
            }
        }
    }
    results
}
