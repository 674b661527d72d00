use std::fs;
use std::path::Path;

use aias_cli::{print_report, run, stamping_artifacts, EXIT_INPUT, EXIT_INVALID, EXIT_OK, EXIT_USAGE};
use aias_core::corpus::{build_stamping_graph, ex};
use aias_core::shapes::{ConstraintKind, Severity, ValidationReport, ValidationResult};
use aias_core::vocab::Vocabulary;
use aias_core::{parse_turtle, serialize_turtle, Graph, PrefixMap, Term, Triple};

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn aias(dir: &Path, args: &[&str]) -> Output {
    let mut full = vec!["aias".to_owned()];
    for a in args {
        full.push(if a.ends_with(".ttl") || a.ends_with(".rq") || a.ends_with(".rules") {
            dir.join(a).display().to_string()
        } else {
            (*a).to_owned()
        });
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(full, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn example_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().display().to_string();
    assert_eq!(aias(dir.path(), &["example", "stamping", "-o", &path]).code, EXIT_OK);
    dir
}

fn result(severity: Severity, focus: &str, check: &str) -> ValidationResult {
    ValidationResult {
        focus: Term::Iri(ex(focus)),
        path: Vocabulary::builtin().aias("communicatesWith"),
        kind: ConstraintKind::MinCount,
        expected: ">=2".into(),
        actual: "1".into(),
        message: "too few links".into(),
        severity,
        check: check.into(),
    }
}

#[test]
fn report_printing() {
    let mut prefixes = PrefixMap::new();
    prefixes.bind("ex", aias_core::Iri::new(aias_core::corpus::EXAMPLE_NS).unwrap());
    prefixes.bind("AIAS", aias_core::Iri::new("https://w3id.org/aias#").unwrap());
    assert_eq!(print_report(&ValidationReport::default(), &prefixes), "conforms: true\n");

    let one = ValidationReport::from_results(vec![result(Severity::Error, "Comm_EC", "L1")]);
    assert_eq!(
        print_report(&one, &prefixes),
        "conforms: false\nERROR focus=ex:Comm_EC path=AIAS:communicatesWith check=L1: too few links\n"
    );

    let mixed = ValidationReport::from_results(vec![result(Severity::Warning, "A", "L2"), result(Severity::Error, "B", "L1")]);
    let text = print_report(&mixed, &prefixes);
    assert!(text.starts_with("conforms: false\n"));
    assert!(text.contains("WARNING focus=ex:A") && text.contains("ERROR focus=ex:B"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn example_writes_stable_artifacts() {
    let dir = example_dir();
    for (name, content) in stamping_artifacts(Vocabulary::builtin()) {
        assert_eq!(fs::read_to_string(dir.path().join(&name)).unwrap(), content, "{name}");
    }
    let other = example_dir();
    for name in ["stamping.ttl", "stamping.rules", "communication.shapes.ttl", "q1.rq", "q2.rq", "q3.rq", "q4.rq"] {
        assert_eq!(fs::read(dir.path().join(name)).unwrap(), fs::read(other.path().join(name)).unwrap(), "{name}");
    }
    let corpus = parse_turtle(&fs::read_to_string(dir.path().join("stamping.ttl")).unwrap()).unwrap();
    assert_eq!(corpus, build_stamping_graph());
}

#[test]
fn check_and_query_on_corpus() {
    let dir = example_dir();
    let check = aias(dir.path(), &["check", "stamping.ttl", "--shapes", "communication.shapes.ttl"]);
    assert_eq!(check.code, EXIT_OK);
    assert_eq!(check.out, "conforms: true\n");

    let q1 = aias(dir.path(), &["query", "stamping.ttl", "--query", "q1.rq"]);
    assert_eq!(q1.code, EXIT_OK);
    let component_column: Vec<&str> = q1.out.lines().skip(2).filter_map(|l| l.split(" | ").nth(1)).collect();
    assert!(component_column.iter().any(|c| c.trim() == "ex:Cloud1"), "{}", q1.out);

    let typed_raw = aias(dir.path(), &["query", "stamping.ttl", "--query", "q1-typed.rq", "--no-inference", "--format", "tsv"]);
    assert_eq!(typed_raw.code, EXIT_OK);
    assert_eq!(typed_raw.out, "?assignment\t?component\n");

    let again = aias(dir.path(), &["query", "stamping.ttl", "--query", "q1.rq"]);
    assert_eq!(again.out, q1.out);
}

#[test]
fn violations_exit_two() {
    let dir = example_dir();
    let mut g = build_stamping_graph();
    let v = Vocabulary::builtin();
    g.remove(&Triple::new(ex("Comm_SC"), v.aias("communicatesWith"), ex("Controller1")).unwrap());
    fs::write(dir.path().join("mutated.ttl"), serialize_turtle(&g)).unwrap();
    let check = aias(dir.path(), &["check", "mutated.ttl", "--shapes", "communication.shapes.ttl", "--report", "report.ttl"]);
    assert_eq!(check.code, EXIT_INVALID);
    assert_eq!(check.out.lines().count(), 2);
    assert!(check.out.lines().nth(1).unwrap().contains("focus=ex:Comm_SC"));
    let report = fs::read_to_string(dir.path().join("report.ttl")).unwrap();
    assert!(parse_turtle(&report).unwrap().len() > 3);

    let lint = aias(dir.path(), &["lint", "mutated.ttl"]);
    assert_eq!(lint.code, EXIT_INVALID);
    assert!(lint.out.contains("check=L1"));
}

#[test]
fn warnings_do_not_fail_lint() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sys.ttl"), "<http://e/s> a ISO22989:AISystem .\n").unwrap();
    let lint = aias(dir.path(), &["lint", "sys.ttl"]);
    assert_eq!(lint.code, EXIT_OK);
    assert!(lint.out.starts_with("conforms: true\nWARNING "));
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.ttl"), "@prefix ex: <http://e/> .\nex:a ex:p").unwrap();
    let out = aias(dir.path(), &["validate", "bad.ttl"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.err.contains("bad.ttl:2:10:"), "{}", out.err);
    assert!(out.out.is_empty());

    assert_eq!(aias(dir.path(), &["validate", "missing.ttl"]).code, EXIT_INPUT);
    fs::write(dir.path().join("ok.ttl"), "<http://e/a> <http://e/p> <http://e/b> .").unwrap();
    fs::write(dir.path().join("bad.rq"), "SELECT ?x WHERE { }").unwrap();
    assert_eq!(aias(dir.path(), &["query", "ok.ttl", "--query", "bad.rq"]).code, EXIT_INPUT);
    fs::write(dir.path().join("bad.rules"), "AIAS:Sensor(?x) -> AIAS:isAssignedTo(?x, ?y)").unwrap();
    assert_eq!(aias(dir.path(), &["infer", "ok.ttl", "--rules", "bad.rules"]).code, EXIT_INPUT);
    fs::write(dir.path().join("shape.ttl"), "<http://e/S> a sh:NodeShape .").unwrap();
    assert_eq!(aias(dir.path(), &["check", "ok.ttl", "--shapes", "shape.ttl"]).code, EXIT_INPUT);
}

#[test]
fn usage_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().display().to_string();
    assert_eq!(aias(dir.path(), &[]).code, EXIT_USAGE);
    assert_eq!(aias(dir.path(), &["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(aias(dir.path(), &["example", "nope", "-o", &path]).code, EXIT_USAGE);
    assert_eq!(aias(dir.path(), &["export-schema", "nope", "-o", &path]).code, EXIT_USAGE);
    assert_eq!(aias(dir.path(), &["--prefix", "noequals", "lint", "x.ttl"]).code, EXIT_USAGE);
    assert_eq!(aias(dir.path(), &["--prefix", "AIAS=http://x.test/noslash", "lint", "x.ttl"]).code, EXIT_USAGE);
    let help = aias(dir.path(), &["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.out.contains("Usage"));
}

#[test]
fn infer_is_idempotent() {
    let dir = example_dir();
    let first = aias(dir.path(), &["infer", "stamping.ttl", "--rules", "stamping.rules", "-o", "closure.ttl"]);
    assert_eq!(first.code, EXIT_OK);
    assert!(first.out.starts_with("inferred "));
    let second = aias(dir.path(), &["infer", "closure.ttl", "--rules", "stamping.rules", "-o", "closure2.ttl"]);
    assert!(second.out.starts_with("inferred 0 triples"), "{}", second.out);
    let a = parse_turtle(&fs::read_to_string(dir.path().join("closure.ttl")).unwrap()).unwrap();
    let b = parse_turtle(&fs::read_to_string(dir.path().join("closure2.ttl")).unwrap()).unwrap();
    assert_eq!(a, b);

    let to_stdout = aias(dir.path(), &["infer", "stamping.ttl"]);
    assert!(parse_turtle(&to_stdout.out).is_ok());
    assert!(to_stdout.err.starts_with("inferred "));
}

#[test]
fn export_schema_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().display().to_string();
    assert_eq!(aias(dir.path(), &["export-schema", "-o", &path]).code, EXIT_OK);
    let v = Vocabulary::builtin();
    for name in ["vdi3682", "iso7489", "iso22989", "aias"] {
        let text = fs::read_to_string(dir.path().join(format!("{name}.ttl"))).unwrap();
        let g: Graph = parse_turtle(&text).unwrap();
        assert_eq!(g, v.schema(name.parse().unwrap()).graph, "{name}");
    }
    let single = tempfile::tempdir().unwrap();
    let single_path = single.path().display().to_string();
    assert_eq!(aias(single.path(), &["export-schema", "aias", "-o", &single_path]).code, EXIT_OK);
    assert_eq!(fs::read_dir(single.path()).unwrap().count(), 1);
}

#[test]
fn prefix_overrides_move_the_vocabulary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().display().to_string();
    let moved = "http://example.test/aias#";
    let out = aias(dir.path(), &["--prefix", &format!("AIAS={moved}"), "example", "stamping", "-o", &path]);
    assert_eq!(out.code, EXIT_OK);
    let text = fs::read_to_string(dir.path().join("stamping.ttl")).unwrap();
    assert!(text.contains(&format!("@prefix AIAS: <{moved}> .")));
    let check = aias(
        dir.path(),
        &["--prefix", &format!("AIAS={moved}"), "check", "stamping.ttl", "--shapes", "communication.shapes.ttl"],
    );
    assert_eq!(check.code, EXIT_OK);

    fs::write(dir.path().join("extra.rq"), "SELECT ?x WHERE { ?x a my:Thing }").unwrap();
    fs::write(dir.path().join("extra.ttl"), "<http://my.test/a> a <http://my.test/Thing> .").unwrap();
    let q = aias(dir.path(), &["--prefix", "my=http://my.test/", "query", "extra.ttl", "--query", "extra.rq", "--format", "tsv"]);
    assert_eq!(q.code, EXIT_OK);
    assert_eq!(q.out, "?x\n<http://my.test/a>\n");
}
