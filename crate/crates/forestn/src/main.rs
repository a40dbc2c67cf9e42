//! Command-line front end for forest-diagram computations in F(n).

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use forestn::forest::ForestDiagram;
use forestn::word::Word;
use forestn::{geodesic, metric, oracle, Error};

#[derive(Parser)]
#[command(name = "forestn", version, about = "Forest diagrams for the Brown-Thompson groups F(n)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Word length: prints l0, l1, l and the labelled marked-space listing.
    Length {
        #[arg(short)]
        n: usize,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// A minimum-length word for the element.
    Geodesic {
        #[arg(short)]
        n: usize,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Dead-end verdict and, for dead ends, the depth.
    Deadend {
        #[arg(short)]
        n: usize,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Dead-end depth; fails if the element is not a dead end.
    Depth {
        #[arg(short)]
        n: usize,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Reduced canonical diagram in the text format.
    Reduce {
        #[arg(short)]
        n: usize,
        word: String,
    },
    /// Schematic rendering of the diagram.
    Render {
        #[arg(short)]
        n: usize,
        word: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: RenderFormat,
    },
    /// Ball enumeration and certification of the length formula.
    Certify {
        #[arg(short)]
        n: usize,
        #[arg(short, long)]
        radius: u32,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Labelled marked-space listing: `<gap> <top> <bottom> <weight>`.
    Labels {
        #[arg(short)]
        n: usize,
        word: String,
        #[arg(long)]
        json: bool,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::BadGenerator { .. }
        | Error::InvalidArity(_)
        | Error::ArityMismatch(..) => 2,
        Error::BallCapExceeded { .. } => 3,
        Error::NotDeadEnd | Error::IdentityDescent | Error::UnlabelledWeight => 4,
    }
}

fn evaluate(n: usize, word: &str) -> Result<ForestDiagram, Error> {
    let w: Word = word.parse()?;
    w.validate(n)?;
    ForestDiagram::evaluate_word(n, &w)
}

fn label_lines(d: &ForestDiagram) -> Vec<String> {
    metric::label_spaces(d)
        .entries()
        .map(|(gap, top, bottom, w)| format!("{gap} {top} {bottom} {w}"))
        .collect()
}

fn label_json(d: &ForestDiagram) -> serde_json::Value {
    let labels: Vec<_> = metric::label_spaces(d)
        .entries()
        .map(|(gap, top, bottom, weight)| {
            json!({"gap": gap, "top": top, "bottom": bottom, "weight": weight})
        })
        .collect();
    json!(labels)
}

fn render_dot(d: &ForestDiagram) -> String {
    use forestn::forest::NaryTree;
    fn emit(
        out: &mut String,
        node: &NaryTree,
        id: &mut usize,
        prefix: &str,
    ) -> String {
        let name = format!("{prefix}_{}", *id);
        *id += 1;
        let shape = if node.is_leaf() { "point" } else { "circle" };
        out.push_str(&format!("    {name} [shape={shape}, label=\"\"];\n"));
        if let NaryTree::Node(children) = node {
            for child in children {
                let cname = emit(out, child, id, prefix);
                out.push_str(&format!("    {name} -> {cname};\n"));
            }
        }
        name
    }
    let mut out = String::from("digraph forest {\n");
    for (cluster, trees, ptr, rank) in [
        ("top", d.top_trees(), d.top_pointer(), "min"),
        ("bottom", d.bottom_trees(), d.bottom_pointer(), "max"),
    ] {
        out.push_str(&format!("  subgraph cluster_{cluster} {{\n    label=\"{cluster}\";\n"));
        out.push_str(&format!("    rank={rank};\n"));
        let mut id = 0;
        for (i, tree) in trees.iter().enumerate() {
            let root = emit(&mut out, tree, &mut id, cluster);
            if i == ptr {
                out.push_str(&format!(
                    "    {cluster}_ptr [shape=plaintext, label=\"*\"];\n    {cluster}_ptr -> {root};\n"
                ));
            }
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Length { n, word, json } => {
            let d = evaluate(n, &word)?;
            let (l0, l1) = metric::length_parts(&d);
            if json {
                println!(
                    "{}",
                    json!({"l0": l0, "l1": l1, "l": l0 + l1, "labels": label_json(&d)})
                );
            } else {
                println!("l0 = {l0}");
                println!("l1 = {l1}");
                println!("l = {}", l0 + l1);
                for line in label_lines(&d) {
                    println!("{line}");
                }
            }
        }
        Cmd::Geodesic { n, word, json } => {
            let d = evaluate(n, &word)?;
            let w = geodesic::geodesic_word(&d);
            if json {
                println!("{}", json!({"word": w.to_string(), "length": w.letter_count()}));
            } else {
                println!("{w}");
            }
        }
        Cmd::Deadend { n, word, json } => {
            let d = evaluate(n, &word)?;
            let dead = geodesic::is_dead_end_brute(&d);
            let depth = if dead { Some(geodesic::dead_end_depth(&d)?) } else { None };
            if json {
                println!("{}", json!({"dead_end": dead, "depth": depth}));
            } else if let Some(depth) = depth {
                println!("dead end, depth {depth}");
            } else {
                println!("not a dead end");
            }
        }
        Cmd::Depth { n, word, json } => {
            let d = evaluate(n, &word)?;
            let depth = geodesic::dead_end_depth(&d)?;
            if json {
                println!("{}", json!({"depth": depth}));
            } else {
                println!("{depth}");
            }
        }
        Cmd::Reduce { n, word } => {
            let d = evaluate(n, &word)?;
            println!("{d}");
        }
        Cmd::Render { n, word, format } => {
            let d = evaluate(n, &word)?;
            match format {
                RenderFormat::Ascii => println!("{d}"),
                RenderFormat::Dot => print!("{}", render_dot(&d)),
            }
        }
        Cmd::Certify { n, radius, cap, json } => {
            let ball = oracle::enumerate_ball(n, radius, cap)?;
            let length = oracle::certify_length(&ball);
            let lemma = oracle::certify_lemma_conditions(&ball);
            let dead_ends = oracle::dead_end_census(&ball);
            if json {
                println!(
                    "{}",
                    json!({"length": length, "lemma": lemma, "dead_ends": dead_ends})
                );
            } else {
                println!("ball: n={n} radius={radius} elements={}", ball.len());
                println!("counts per radius: {:?}", length.counts_per_radius);
                println!("{} mismatches", length.mismatches.len());
                println!(
                    "lemma/proposition checks: {}",
                    if lemma.is_clean() { "clean" } else { "VIOLATIONS" }
                );
                println!(
                    "dead ends: {} found, census {}",
                    dead_ends.dead_ends,
                    if dead_ends.is_clean() { "clean" } else { "VIOLATIONS" }
                );
            }
        }
        Cmd::Labels { n, word, json } => {
            let d = evaluate(n, &word)?;
            if json {
                println!("{}", label_json(&d));
            } else {
                for line in label_lines(&d) {
                    println!("{line}");
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
