//! `aias` command-line front end.
//!
//! Exit codes: 0 success, 1 input or parse error, 2 validation or lint
//! failure, 3 usage error. Results go to standard output, diagnostics to
//! standard error.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use aias_core::corpus::{build_stamping_graph_with, communication_shapes_document, competency_suite, STAMPING_RULES};
use aias_core::query::{evaluate_query, parse_query_with};
use aias_core::reasoner::{apply_rules, parse_rules_with, schema_closure, RuleSet};
use aias_core::shapes::{parse_shapes, validate_closure, ValidationReport};
use aias_core::turtle::format_term;
use aias_core::vocab::{lint_aias_with, Namespaces, SchemaName, Vocabulary};
use aias_core::{parse_turtle_with, serialize_turtle, Graph, Iri, PrefixMap};
use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "aias", version, about = "Validate, infer over, query and lint AIAS knowledge graphs")]
pub struct Cli {
    /// Bind or override a prefix (`label=iri`). Overriding AIAS, VDI3682,
    /// ISO7489 or ISO22989 moves the built-in schemas to the new namespace.
    #[arg(long = "prefix", value_name = "LABEL=IRI", global = true, action = clap::ArgAction::Append)]
    pub prefixes: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a Turtle file parses.
    Validate { file: PathBuf },
    /// Materialize the schema closure and optional rule consequences.
    Infer {
        file: PathBuf,
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Write the closure here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a select query.
    Query {
        file: PathBuf,
        #[arg(long)]
        query: PathBuf,
        /// Query the graph as written, without the schema closure.
        #[arg(long)]
        no_inference: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Validate against a shapes file.
    Check {
        file: PathBuf,
        #[arg(long)]
        shapes: PathBuf,
        /// Also write the report as Turtle.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the built-in AIAS checks.
    Lint { file: PathBuf },
    /// Write an example corpus with its rules, shapes and queries.
    Example {
        #[arg(value_enum)]
        name: Example,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write built-in schemas as Turtle.
    ExportSchema {
        /// One of vdi3682, iso7489, iso22989, aias; all when omitted.
        name: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Stamping,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn usage(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

struct Env {
    vocab: Vocabulary,
    /// Vocabulary prefixes plus user bindings; pre-bound for every input.
    prefixes: PrefixMap,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            if informational {
                let _ = write!(out, "{text}");
                return EXIT_OK;
            }
            let _ = write!(err, "{text}");
            return EXIT_USAGE;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn environment(bindings: &[String]) -> Result<Env, Failure> {
    let mut namespaces = Namespaces::default();
    let mut extra = Vec::new();
    for binding in bindings {
        let (label, iri) = binding
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--prefix expects LABEL=IRI, got {binding:?}")))?;
        if !aias_core::graph::is_valid_prefix_label(label) {
            return Err(Failure::usage(format!("invalid prefix label {label:?}")));
        }
        let iri = Iri::new(iri).map_err(|e| Failure::usage(format!("--prefix {label}: {e}")))?;
        if !namespaces.set(label, iri.clone()) {
            extra.push((label.to_owned(), iri));
        }
    }
    let vocab = Vocabulary::new(namespaces).map_err(Failure::usage)?;
    let mut prefixes = vocab.prefixes().clone();
    for (label, iri) in extra {
        prefixes.bind(label, iri);
    }
    Ok(Env { vocab, prefixes })
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let env = environment(&cli.prefixes)?;
    match &cli.command {
        Command::Validate { file } => {
            let g = load_graph(&env, file)?;
            emit(out, &format!("{}: ok, {} triples\n", file.display(), g.len()))?;
            Ok(EXIT_OK)
        }
        Command::Infer { file, rules, output } => {
            let data = load_graph(&env, file)?;
            let rules = match rules {
                Some(path) => parse_rules_with(&read(path)?, &env.prefixes).map_err(|e| located(path, e))?,
                None => RuleSet::default(),
            };
            let result = apply_rules(&data, &rules, env.vocab.merged()).map_err(Failure::input)?;
            let text = serialize_turtle(&result.closure);
            let summary = format!("inferred {} triples in {} iteration(s)\n", result.inferred.len(), result.iterations);
            match output {
                Some(path) => {
                    write_file(path, &text)?;
                    emit(out, &summary)?;
                }
                None => {
                    emit(out, &text)?;
                    emit(err, &summary)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Query {
            file,
            query,
            no_inference,
            format,
        } => {
            let data = load_graph(&env, file)?;
            let mut prefixes = data.prefixes().clone();
            prefixes.extend(&env.prefixes);
            let q = parse_query_with(&read(query)?, &prefixes).map_err(|e| located(query, e))?;
            let graph = if *no_inference { data } else { closure(&env, &data)? };
            let rows = evaluate_query(&graph, &q);
            let mut display = graph.prefixes().clone();
            display.extend(&q.prefixes);
            let text = match format {
                Format::Table => rows.to_table(&display),
                Format::Tsv => rows.to_tsv(),
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Check { file, shapes, report } => {
            let data = load_graph(&env, file)?;
            let shape_graph = load_graph(&env, shapes)?;
            let parsed = parse_shapes(&shape_graph).map_err(|e| Failure::input(format!("{}: {e}", shapes.display())))?;
            let closed = closure(&env, &data)?;
            let result = validate_closure(&closed, &parsed);
            if let Some(path) = report {
                write_file(path, &serialize_turtle(&result.to_graph(data.prefixes())))?;
            }
            emit(out, &print_report(&result, data.prefixes()))?;
            Ok(if result.conforms { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Lint { file } => {
            let data = load_graph(&env, file)?;
            let result = lint_aias_with(&data, &env.vocab);
            emit(out, &print_report(&result, data.prefixes()))?;
            Ok(if result.conforms { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Example { name: Example::Stamping, output } => {
            for (file, content) in stamping_artifacts(&env.vocab) {
                let path = output.join(file);
                write_file(&path, &content)?;
                emit(out, &format!("wrote {}\n", path.display()))?;
            }
            Ok(EXIT_OK)
        }
        Command::ExportSchema { name, output } => {
            let names = match name {
                Some(n) => vec![n.parse::<SchemaName>().map_err(Failure::usage)?],
                None => SchemaName::ALL.to_vec(),
            };
            for name in names {
                let path = output.join(format!("{}.ttl", name.as_str()));
                write_file(&path, &serialize_turtle(&env.vocab.schema(name).graph))?;
                emit(out, &format!("wrote {}\n", path.display()))?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Files written by `example stamping`, in output order.
pub fn stamping_artifacts(vocab: &Vocabulary) -> Vec<(String, String)> {
    let mut files = vec![
        ("stamping.ttl".to_owned(), serialize_turtle(&build_stamping_graph_with(vocab))),
        ("stamping.rules".to_owned(), STAMPING_RULES.to_owned()),
        ("communication.shapes.ttl".to_owned(), communication_shapes_document(vocab)),
    ];
    for case in competency_suite() {
        for q in case.queries {
            files.push((format!("{}.rq", q.label), format!("# {}\n{}", case.question, q.text)));
        }
    }
    files
}

/// Header line `conforms: true|false`, then one line per result.
pub fn print_report(report: &ValidationReport, prefixes: &PrefixMap) -> String {
    let mut text = format!("conforms: {}\n", report.conforms);
    for r in &report.results {
        text.push_str(&format!(
            "{} focus={} path={} check={}: {}\n",
            r.severity.as_str(),
            format_term(&r.focus, prefixes),
            format_term(&r.path.clone().into(), prefixes),
            r.check,
            r.message
        ));
    }
    text
}

fn closure(env: &Env, data: &Graph) -> Result<Graph, Failure> {
    Ok(schema_closure(data, env.vocab.merged()).map_err(Failure::input)?.closure)
}

fn located(path: &Path, e: impl fmt::Display) -> Failure {
    Failure::input(format!("{}:{e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_graph(env: &Env, path: &Path) -> Result<Graph, Failure> {
    parse_turtle_with(&read(path)?, &env.prefixes).map_err(|e| located(path, e))
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, content).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(stream: &mut dyn Write, text: &str) -> Result<(), Failure> {
    stream.write_all(text.as_bytes()).map_err(|e| Failure::input(format!("write failed: {e}")))
}
