//! The stamping-machine example: a punching process monitored by a position
//! sensor whose signal is classified in the cloud, plus the competency
//! questions it answers.

use crate::graph::{Graph, PrefixMap};
use crate::ns;
use crate::query::SolutionSequence;
use crate::term::{Iri, Literal, Term, Triple, Variable};
use crate::vocab::{Vocabulary, COMMUNICATION_SHAPE};

pub const EXAMPLE_NS: &str = "https://w3id.org/aias/examples/stamping#";
pub const EXAMPLE_PREFIX: &str = "ex";

/// The cloud-design rule, as published, followed by the variant that checks
/// the inference function instead of training.
pub const STAMPING_RULES: &str = "# A system whose training is assigned to a cloud system has a cloud design.
[cloud-design-training]
AIAS:CloudSystem(?c) ^ VDI3682:Assignment(?a) ^ 
AIAS:isAssignedTo(?c, ?a) ^ ISO22989:Training(?t) ^ 
AIAS:isAssignedTo(?t, ?a) ->  ISO22989:hasDesign(AIAS:AISystem, AIAS:CloudDesign)

# Same conclusion when the inference function runs in the cloud.
[cloud-design-inference]
AIAS:CloudSystem(?c) ^ VDI3682:Assignment(?a) ^
AIAS:isAssignedTo(?c, ?a) ^ ISO22989:Inference(?t) ^
AIAS:isAssignedTo(?t, ?a) ->  ISO22989:hasDesign(AIAS:AISystem, AIAS:CloudDesign)
";

/// Where was the model trained, as published.
pub const Q1_QUERY: &str = "SELECT ?assignment ?component
WHERE
{
?training a ISO22989:Training .
?training AIAS:isAssignedTo ?assignment .
?component AIAS:isAssignedTo ?assignment . 
}
";

/// The training query restricted to components.
pub const Q1_TYPED_QUERY: &str = "SELECT ?assignment ?component
WHERE
{
?training a ISO22989:Training .
?training AIAS:isAssignedTo ?assignment .
?component AIAS:isAssignedTo ?assignment .
?component a AIAS:Component .
}
";

pub const Q2_QUERY: &str = "SELECT DISTINCT ?communication
WHERE
{
?inference a ISO22989:Inference .
?inference AIAS:isAssignedTo ?assignment .
?component AIAS:isAssignedTo ?assignment .
?component a AIAS:Component .
?communication AIAS:communicatesWith ?component .
}
";

pub const Q3_QUERY: &str = "SELECT ?resource
WHERE
{
?acquisition a ISO22989:DataAcquisition .
?acquisition AIAS:isAssignedTo ?assignment .
?resource AIAS:isAssignedTo ?assignment .
?resource a AIAS:Resource .
}
";

pub const Q4_QUERY: &str = "SELECT ?task
WHERE
{
?system a ISO22989:AISystem .
?system ISO22989:hasTask ?task .
?task a ISO22989:Classification .
}
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompetencyQuery {
    pub label: String,
    pub text: String,
    pub expected: SolutionSequence,
    /// True if the answer needs the schema closure rather than the raw graph.
    pub requires_inference: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompetencyCase {
    pub id: String,
    pub question: String,
    pub queries: Vec<CompetencyQuery>,
}

/// Term in the example namespace.
pub fn ex(local: &str) -> Iri {
    Iri::new(format!("{EXAMPLE_NS}{local}")).expect("example IRI")
}

pub fn corpus_prefixes(vocab: &Vocabulary) -> PrefixMap {
    let mut prefixes = vocab.prefixes().clone();
    prefixes.bind(EXAMPLE_PREFIX, Iri::new(EXAMPLE_NS).expect("namespace IRI"));
    prefixes
}

pub fn build_stamping_graph() -> Graph {
    build_stamping_graph_with(Vocabulary::builtin())
}

pub fn build_stamping_graph_with(v: &Vocabulary) -> Graph {
    let mut g = Graph::with_prefixes(corpus_prefixes(v));
    let ty = ns::rdf::type_();
    let mut add = |s: &str, p: &Iri, o: Term| {
        g.insert(Triple::new(ex(s), p.clone(), o).expect("corpus triple"));
    };
    let node = |local: &str| Term::Iri(ex(local));

    // Resources.
    add("PositionSensor", &ty, v.aias("Sensor").into());
    add("DriveMotor", &ty, v.aias("Actuator").into());
    add("Controller1", &ty, v.aias("Controller").into());
    add("Edge1", &ty, v.aias("EdgeDevice").into());
    add("Cloud1", &ty, v.aias("CloudSystem").into());

    // Stamping process and its product flow.
    let (flows_from, flows_to) = (v.aias("flowsFrom"), v.aias("flowsTo"));
    add("Stamping", &ty, v.vdi3682("ProcessOperator").into());
    add("BlankSheet", &ty, v.vdi3682("Product").into());
    add("StampedPart", &ty, v.vdi3682("Product").into());
    add("Flow_In", &ty, v.vdi3682("Flow").into());
    add("Flow_In", &flows_from, node("BlankSheet"));
    add("Flow_In", &flows_to, node("Stamping"));
    add("Flow_Out", &ty, v.vdi3682("Flow").into());
    add("Flow_Out", &flows_from, node("Stamping"));
    add("Flow_Out", &flows_to, node("StampedPart"));

    // Communication paths, each with its technology node.
    let links = v.aias("communicatesWith");
    let layer = v.iso7489("usesTechnologyAtLayer");
    for (comm, a, b, tech, layers) in [
        ("Comm_SC", "PositionSensor", "Controller1", "Tech_Bus", &["Physical", "DataLink"][..]),
        ("Comm_CE", "Controller1", "Edge1", "Tech_Ethernet", &["DataLink"][..]),
        ("Comm_EC", "Edge1", "Cloud1", "Tech_Internet", &["Network"][..]),
    ] {
        add(comm, &ty, v.iso7489("Communication").into());
        add(comm, &links, node(a));
        add(comm, &links, node(b));
        add(comm, &layer, node(tech));
        for l in layers {
            add(tech, &ty, v.iso7489(l).into());
        }
    }

    // AI system, task and model.
    add("AISystem1", &ty, v.iso22989("AISystem").into());
    add("AISystem1", &v.iso22989("hasTask"), node("Task_BeltCondition"));
    add("Task_BeltCondition", &ty, v.iso22989("Classification").into());
    add("Model_NN", &ty, v.iso22989("MLModel").into());
    add("Model_NN", &v.iso22989("hasHyperparameter"), node("Hyperparameter1"));
    add("Model_NN", &v.iso22989("hasModelParameter"), node("ModelParameter1"));
    add("Hyperparameter1", &ty, v.iso22989("Hyperparameter").into());
    add("Hyperparameter1", &ns::rdf::value(), Literal::new_typed("0.001", ns::xsd::decimal()).into());
    add("ModelParameter1", &ty, v.iso22989("ModelParameter").into());
    add("ModelParameter1", &ns::rdf::value(), Literal::new_typed("0.5", ns::xsd::decimal()).into());

    // Functions.
    add("Training1", &ty, v.iso22989("Training").into());
    add("Training1", &v.iso22989("produces"), node("Model_NN"));
    add("Training1", &v.iso22989("usesData"), node("TrainingData1"));
    add("Inference1", &ty, v.iso22989("Inference").into());
    add("Inference1", &v.iso22989("usesModel"), node("Model_NN"));
    add("Inference1", &v.iso22989("usesData"), node("ProductionData1"));
    add("DataAcquisition1", &ty, v.iso22989("DataAcquisition").into());
    add("DataAcquisition1", &v.iso22989("usesData"), node("ProductionData1"));
    add("TrainingData1", &ty, v.iso22989("TrainingData").into());
    add("ProductionData1", &ty, v.iso22989("ProductionData").into());

    // Assignments of functions to components.
    let assigned = v.aias("isAssignedTo");
    for (asg, function, component) in [
        ("A_stamp", "Stamping", "DriveMotor"),
        ("A_train", "Training1", "Cloud1"),
        ("A_inf", "Inference1", "Cloud1"),
        ("A_acq", "DataAcquisition1", "PositionSensor"),
    ] {
        add(asg, &ty, v.vdi3682("Assignment").into());
        add(function, &assigned, node(asg));
        add(component, &assigned, node(asg));
    }
    g
}

/// Prefix header followed by the published communication shape.
pub fn communication_shapes_document(vocab: &Vocabulary) -> String {
    let mut doc = String::new();
    for label in ["AIAS", "ISO7489", "sh"] {
        let ns = vocab.prefixes().get(label).expect("built-in prefix");
        doc.push_str(&format!("@prefix {label}: <{}> .\n", ns.as_str()));
    }
    doc.push('\n');
    doc.push_str(COMMUNICATION_SHAPE);
    doc
}

fn rows(variables: &[&str], rows: &[&[&str]]) -> SolutionSequence {
    SolutionSequence {
        variables: variables.iter().map(|v| Variable::new(v).expect("variable")).collect(),
        rows: rows.iter().map(|r| r.iter().map(|l| Term::Iri(ex(l))).collect()).collect(),
    }
}

/// The four competency questions with their expected answers on the corpus
/// closure.
pub fn competency_suite() -> Vec<CompetencyCase> {
    let query = |label: &str, text: &str, expected: SolutionSequence, requires_inference: bool| CompetencyQuery {
        label: label.to_owned(),
        text: text.to_owned(),
        expected,
        requires_inference,
    };
    vec![
        CompetencyCase {
            id: "Q1".into(),
            question: "Where is the model trained?".into(),
            queries: vec![
                query(
                    "q1",
                    Q1_QUERY,
                    rows(&["assignment", "component"], &[&["A_train", "Cloud1"], &["A_train", "Training1"]]),
                    false,
                ),
                query("q1-typed", Q1_TYPED_QUERY, rows(&["assignment", "component"], &[&["A_train", "Cloud1"]]), true),
            ],
        },
        CompetencyCase {
            id: "Q2".into(),
            question: "What communication path does the model use?".into(),
            queries: vec![query("q2", Q2_QUERY, rows(&["communication"], &[&["Comm_EC"]]), true)],
        },
        CompetencyCase {
            id: "Q3".into(),
            question: "Where is the production data recorded?".into(),
            queries: vec![query("q3", Q3_QUERY, rows(&["resource"], &[&["PositionSensor"]]), true)],
        },
        CompetencyCase {
            id: "Q4".into(),
            question: "Which kind of task does the model solve?".into(),
            queries: vec![query("q4", Q4_QUERY, rows(&["task"], &[&["Task_BeltCondition"]]), false)],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::{evaluate_query, parse_query};
    use crate::reasoner::{parse_rules, schema_closure};
    use crate::shapes::parse_shapes;
    use crate::turtle::parse_turtle;
    use crate::vocab::lint_aias;

    #[test]
    fn deterministic_and_ground() {
        let a = build_stamping_graph();
        assert_eq!(a, build_stamping_graph());
        assert!(a.blank_labels().is_empty());
        assert!(a.contains(&Triple::new(ex("Inference1"), ns::rdf::type_(), Vocabulary::builtin().iso22989("Inference")).unwrap()));
    }

    #[test]
    fn closure_equates_resources() {
        let v = Vocabulary::builtin();
        let closure = schema_closure(&build_stamping_graph(), v.merged()).unwrap().closure;
        assert!(closure.contains(&Triple::new(ex("Cloud1"), ns::rdf::type_(), v.vdi3682("TechnicalResource")).unwrap()));
    }

    #[test]
    fn lints_clean() {
        let report = lint_aias(&build_stamping_graph());
        assert!(report.conforms);
        assert!(report.results.is_empty(), "{:?}", report.results);
    }

    #[test]
    fn suite_answers() {
        let closure = schema_closure(&build_stamping_graph(), Vocabulary::builtin().merged()).unwrap().closure;
        for case in competency_suite() {
            for q in &case.queries {
                let got = evaluate_query(&closure, &parse_query(&q.text).unwrap());
                assert_eq!(got, q.expected, "{}", q.label);
            }
        }
    }

    #[test]
    fn artifacts_parse() {
        assert_eq!(parse_rules(STAMPING_RULES).unwrap().len(), 2);
        let shapes = parse_turtle(&communication_shapes_document(Vocabulary::builtin())).unwrap();
        assert_eq!(parse_shapes(&shapes).unwrap().len(), 1);
    }
}
