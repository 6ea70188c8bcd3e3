//! Command-line driver: reads one JSON document describing a graph of
//! groups or a defining graph, runs one query or classifier from the
//! library, and emits a deterministic text or JSON report.
//!
//! Exit codes: 0 verdict positive, 1 hypothesis failed, 2 inconclusive
//! (a search bound was exhausted), 3 input error.

mod input;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use input::{parse_document, Document};
use serde_json::json;
use std::io::Read;
use std::path::{Path, PathBuf};
use treebound::boundary::{act_on_point, enumerate_level, text::parse_point, BoundaryError, Cylinder};
use treebound::classify::{classify_nevo_sageev, classify_visual, GroupKind};
use treebound::dynamics::{
    check_minimality, check_unimodular, classify_gbs, construct_filling_witness, find_repeatable,
    verify_filling_witness, verify_north_south, DynError,
};
use treebound::report::ClassificationReport;
use treebound::words::reduce;
use treebound::words::text::{parse_word, path_text, word_text};
use treebound::{GraphOfGroups, ReducedWord, VertexId};

#[derive(Parser)]
#[command(name = "treebound", version, about = "Boundary dynamics and classification queries")]
struct Cli {
    /// Input document path; `-` or omitted reads standard input.
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Racg,
    Raag,
}

impl From<Kind> for GroupKind {
    fn from(kind: Kind) -> GroupKind {
        match kind {
            Kind::Racg => GroupKind::Racg,
            Kind::Raag => GroupKind::Raag,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a GBS graph of groups through its boundary dynamics.
    ClassifyGbs,
    /// Classify a right-angled group by its defining graph.
    ClassifyNevoSageev {
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Classify a right-angled group by the visual boundary criterion.
    ClassifyVisual {
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Reduce a word to its normal form.
    Reduce {
        #[arg(long)]
        word: String,
    },
    /// Apply a group element to an eventually periodic boundary point.
    Act {
        #[arg(long)]
        element: String,
        #[arg(long)]
        point: String,
    },
    /// List the tree paths of the given depth from the base vertex.
    Tree {
        #[arg(long)]
        depth: usize,
    },
    /// Decide minimality of the boundary action.
    Minimality,
    /// List repeatable loops up to the given length.
    Repeatable {
        #[arg(long)]
        max_len: usize,
    },
    /// Construct and verify a 2-filling witness for two cylinders.
    #[command(name = "witness-2filling")]
    WitnessTwoFilling {
        #[arg(long)]
        o1: String,
        #[arg(long)]
        o2: String,
        #[arg(long)]
        bound: usize,
    },
    /// Verify north-south contraction for a loop element.
    Northsouth {
        #[arg(long)]
        element: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        bound: usize,
    },
    /// Print the first Betti number of the underlying graph.
    Betti,
    /// Evaluate the modular homomorphism on a cycle basis.
    Unimodular,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let text = match read_input(cli.input.as_deref()) {
        Ok(text) => text,
        Err(e) => return input_failure(&format!("cannot read input: {e}")),
    };
    let doc = match parse_document(&text) {
        Ok(doc) => doc,
        Err(e) => return input_failure(&e.to_string()),
    };
    match &cli.command {
        Command::ClassifyGbs => {
            let (graph, base) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            match classify_gbs(graph, base) {
                Ok(report) => emit_report(&report, cli.format),
                Err(e) => dyn_failure(&e),
            }
        }
        Command::ClassifyNevoSageev { kind } => {
            let graph = match need_defining(&doc) {
                Ok(graph) => graph,
                Err(code) => return code,
            };
            emit_report(&classify_nevo_sageev(graph, (*kind).into()), cli.format)
        }
        Command::ClassifyVisual { kind } => {
            let graph = match need_defining(&doc) {
                Ok(graph) => graph,
                Err(code) => return code,
            };
            emit_report(&classify_visual(graph, (*kind).into()), cli.format)
        }
        Command::Reduce { word } => {
            let (graph, base) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            let reduced = match parse_element(graph, base, word) {
                Ok(word) => word,
                Err(msg) => return input_failure(&msg),
            };
            let rendered = word_text(graph, &reduced);
            match cli.format {
                Format::Text => println!("{rendered}"),
                Format::Json => println!("{}", json!({ "word": rendered })),
            }
            0
        }
        Command::Act { element, point } => {
            let (graph, base) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            let element = match parse_element(graph, base, element) {
                Ok(word) => word,
                Err(msg) => return input_failure(&msg),
            };
            let point = match parse_point(graph, point, Some(base)) {
                Ok(point) => point,
                Err(msg) => return input_failure(&msg),
            };
            match act_on_point(graph, &element, &point) {
                Ok(moved) => {
                    let rendered = moved.text(graph);
                    match cli.format {
                        Format::Text => println!("{rendered}"),
                        Format::Json => println!("{}", json!({ "point": rendered })),
                    }
                    0
                }
                Err(e @ BoundaryError::NonPeriodicCarry { .. }) => {
                    eprintln!("error: {e}");
                    2
                }
                Err(e) => input_failure(&e.to_string()),
            }
        }
        Command::Tree { depth } => {
            let (graph, base) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            let level = enumerate_level(graph, base, *depth);
            let paths: Vec<String> = level.paths.iter().map(|p| path_text(graph, p)).collect();
            match cli.format {
                Format::Text => {
                    for path in &paths {
                        println!("{path}");
                    }
                }
                Format::Json => println!("{}", json!({ "depth": depth, "paths": paths })),
            }
            0
        }
        Command::Minimality => {
            let (graph, _) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            let verdict = match check_minimality(graph) {
                Ok(verdict) => verdict,
                Err(e) => return dyn_failure(&e),
            };
            match cli.format {
                Format::Text => {
                    println!("minimal: {}", verdict.minimal);
                    if let Some(cert) = &verdict.certificate {
                        println!("avoided: {}", graph.edge(cert.avoided).name);
                        println!("cycle: {}", edge_names(graph, &cert.cycle));
                        println!("trapped-ray: {}", cert.trapped_ray);
                    }
                }
                Format::Json => {
                    let value = match &verdict.certificate {
                        None => json!({ "minimal": verdict.minimal }),
                        Some(cert) => json!({
                            "minimal": verdict.minimal,
                            "avoided": graph.edge(cert.avoided).name,
                            "cycle": cert.cycle.iter().map(|e| graph.edge(*e).name.clone()).collect::<Vec<_>>(),
                            "trapped-ray": cert.trapped_ray,
                        }),
                    };
                    println!("{value}");
                }
            }
            if verdict.minimal {
                0
            } else {
                1
            }
        }
        Command::Repeatable { max_len } => {
            let (graph, _) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            let paths = find_repeatable(graph, *max_len);
            match cli.format {
                Format::Text => {
                    for rep in &paths {
                        let tag = if rep.spread { "spread" } else { "plain" };
                        println!("{} [{tag}]", path_text(graph, &rep.path));
                    }
                }
                Format::Json => {
                    let items: Vec<_> = paths
                        .iter()
                        .map(|rep| {
                            json!({
                                "path": path_text(graph, &rep.path),
                                "spread": rep.spread,
                            })
                        })
                        .collect();
                    println!("{}", json!({ "max-len": max_len, "paths": items }));
                }
            }
            0
        }
        Command::WitnessTwoFilling { o1, o2, bound } => {
            let (graph, base) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            let o1 = match parse_cylinder(graph, base, o1) {
                Ok(cyl) => cyl,
                Err(msg) => return input_failure(&msg),
            };
            let o2 = match parse_cylinder(graph, base, o2) {
                Ok(cyl) => cyl,
                Err(msg) => return input_failure(&msg),
            };
            let mu = find_repeatable(graph, 4)
                .into_iter()
                .find(|rep| rep.spread && rep.path.base() == base);
            let Some(mu) = mu else {
                eprintln!("error: no spread repeatable path at the base vertex");
                return 1;
            };
            let witness = match construct_filling_witness(graph, base, &mu.path, &o1, &o2, *bound)
            {
                Ok(witness) => witness,
                Err(e) => return dyn_failure(&e),
            };
            if let Err(e) = verify_filling_witness(graph, &witness) {
                return dyn_failure(&e);
            }
            match cli.format {
                Format::Text => {
                    println!("mu: {}", path_text(graph, &mu.path));
                    println!("m: {}", witness.m);
                    println!("gamma1: {}", word_text(graph, &witness.gamma1));
                    println!("gamma2: {}", word_text(graph, &witness.gamma2));
                    println!("t: {}", word_text(graph, &witness.t));
                    println!("h1: {}", word_text(graph, &witness.h1));
                    println!("h2: {}", word_text(graph, &witness.h2));
                    println!("part-a: {}", witness.part_a.text(graph));
                    println!("part-b: {}", witness.part_b.text(graph));
                    println!("candidates: {}", witness.candidates_tried);
                }
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "mu": path_text(graph, &mu.path),
                            "m": witness.m,
                            "gamma1": word_text(graph, &witness.gamma1),
                            "gamma2": word_text(graph, &witness.gamma2),
                            "t": word_text(graph, &witness.t),
                            "h1": word_text(graph, &witness.h1),
                            "h2": word_text(graph, &witness.h2),
                            "part-a": witness.part_a.text(graph),
                            "part-b": witness.part_b.text(graph),
                            "candidates": witness.candidates_tried,
                        })
                    );
                }
            }
            0
        }
        Command::Northsouth {
            element,
            depth,
            bound,
        } => {
            let (graph, base) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            let element = match parse_element(graph, base, element) {
                Ok(word) => word,
                Err(msg) => return input_failure(&msg),
            };
            let verdict = match verify_north_south(graph, base, &element, *depth, *bound) {
                Ok(verdict) => verdict,
                Err(e) => return dyn_failure(&e),
            };
            match cli.format {
                Format::Text => {
                    println!("m: {}", verdict.m);
                    println!("attracting: {}", verdict.attracting.text(graph));
                    println!("repelling: {}", verdict.repelling.text(graph));
                    println!("u: {}", verdict.u.text(graph));
                    println!("v: {}", verdict.v.text(graph));
                    println!("finite-boundary: {}", verdict.finite_boundary);
                }
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "m": verdict.m,
                            "attracting": verdict.attracting.text(graph),
                            "repelling": verdict.repelling.text(graph),
                            "u": verdict.u.text(graph),
                            "v": verdict.v.text(graph),
                            "finite-boundary": verdict.finite_boundary,
                        })
                    );
                }
            }
            0
        }
        Command::Betti => {
            let (graph, _) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            let betti = graph.first_betti_number();
            match cli.format {
                Format::Text => println!("{betti}"),
                Format::Json => println!("{}", json!({ "betti": betti })),
            }
            0
        }
        Command::Unimodular => {
            let (graph, _) = match need_graph_of_groups(&doc) {
                Ok(pair) => pair,
                Err(code) => return code,
            };
            let report = match check_unimodular(graph) {
                Ok(report) => report,
                Err(e) => return dyn_failure(&e),
            };
            match cli.format {
                Format::Text => {
                    println!("unimodular: {}", report.unimodular);
                    for cycle in &report.cycle_values {
                        println!("cycle {}: {}", cycle.edge, cycle.value);
                    }
                }
                Format::Json => {
                    let cycles: Vec<_> = report
                        .cycle_values
                        .iter()
                        .map(|c| json!({ "edge": c.edge, "value": c.value.to_string() }))
                        .collect();
                    println!(
                        "{}",
                        json!({ "unimodular": report.unimodular, "cycles": cycles })
                    );
                }
            }
            if report.unimodular {
                0
            } else {
                1
            }
        }
    }
}

fn read_input(path: Option<&Path>) -> std::io::Result<String> {
    match path {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path),
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn input_failure(message: &str) -> i32 {
    eprintln!("error: {message}");
    3
}

fn dyn_failure(e: &DynError) -> i32 {
    eprintln!("error: {e}");
    match e {
        DynError::SingularInput(_) | DynError::HypothesisFailed { .. } => 1,
        DynError::NotFoundWithinBound { .. } | DynError::BoundExceeded { .. } => 2,
        DynError::Boundary(BoundaryError::NonPeriodicCarry { .. }) => 2,
        DynError::NotGbs | DynError::Word(_) | DynError::Boundary(_) => 3,
    }
}

fn need_graph_of_groups(doc: &Document) -> Result<(&GraphOfGroups, VertexId), i32> {
    match doc {
        Document::GraphOfGroups { graph, base } => Ok((graph, *base)),
        Document::Defining { .. } => Err(input_failure(
            "this command needs a graph-of-groups document",
        )),
    }
}

fn need_defining(doc: &Document) -> Result<&treebound::DefiningGraph, i32> {
    match doc {
        Document::Defining { graph } => Ok(graph),
        Document::GraphOfGroups { .. } => Err(input_failure(
            "this command needs a defining-graph document",
        )),
    }
}

fn parse_element(g: &GraphOfGroups, base: VertexId, text: &str) -> Result<ReducedWord, String> {
    parse_word(g, text, Some(base))
        .map(|gw| reduce(g, &gw))
        .map_err(|e| e.to_string())
}

fn parse_cylinder(g: &GraphOfGroups, base: VertexId, text: &str) -> Result<Cylinder, String> {
    let gw = parse_word(g, text, Some(base)).map_err(|e| e.to_string())?;
    if gw.tail.is_some() {
        return Err("cylinder prefixes are tree paths and carry no tail token".into());
    }
    if gw.base != base {
        return Err(format!(
            "cylinder prefix must start at the base vertex `{}`",
            g.vertex_name(base)
        ));
    }
    let path = reduce(g, &gw);
    Cylinder::new(path).map_err(|e| e.to_string())
}

fn edge_names(g: &GraphOfGroups, edges: &[treebound::EdgeId]) -> String {
    edges
        .iter()
        .map(|e| g.edge(*e).name.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn emit_report(report: &ClassificationReport, format: Format) -> i32 {
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => println!("{}", serde_json::to_string(report).expect("report is plain data")),
    }
    report.exit_code()
}
