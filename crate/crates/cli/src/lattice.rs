//! `qprop lattice`

use std::fmt::Write as _;

use clap::Args;
use qprop_core::formula::{check_depth, MAX_ENUMERATION_DEPTH};
use qprop_core::propositions::proposition_poset;
use qprop_core::{LoadedModel, Model, QmModel};
use serde::Serialize;

use crate::input::{leaves, load};
use crate::{to_json, CliResult, Format, Output, Source};

#[derive(Args, Debug)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub source: Source,
    /// Draw the proposition poset even for a quantum model.
    #[arg(long)]
    pub propositions: bool,
    /// Formula depth for the proposition poset.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, value_enum, default_value_t = Format::Dot)]
    pub format: Format,
}

#[derive(Serialize)]
struct Node {
    id: usize,
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    subspace: Option<String>,
    states: Vec<String>,
}

#[derive(Serialize)]
struct Diagram {
    kind: &'static str,
    nodes: Vec<Node>,
    /// Covering pairs `[lower, upper]`.
    edges: Vec<(usize, usize)>,
}

fn state_names(m: &Model, set: &qprop_core::StateSet) -> Vec<String> {
    set.indices().map(|s| m.states()[s].name.to_string()).collect()
}

fn subspace_diagram(q: &QmModel) -> Diagram {
    let l = q.lattice();
    let m = q.model();
    let nodes = (0..l.len())
        .map(|e| {
            let p = q.predicate_of(e);
            Node {
                id: e,
                label: q.predicate_id_of(e).to_string(),
                subspace: Some(l.element(e).to_string()),
                states: state_names(m, q.theta(p)),
            }
        })
        .collect();
    Diagram {
        kind: "subspace_lattice",
        nodes,
        edges: l.hasse_edges(),
    }
}

fn proposition_diagram(loaded: &LoadedModel, depth: usize) -> CliResult<Diagram> {
    let m = loaded.model();
    let classes = m.signature_classes(&leaves(loaded), depth)?;
    let reps: Vec<_> = classes.into_iter().map(|c| c.representative).collect();
    let poset = proposition_poset(m, &reps)?;
    let nodes = poset
        .elements
        .iter()
        .zip(&poset.labels)
        .enumerate()
        .map(|(id, (set, f))| Node {
            id,
            label: f.to_string(),
            subspace: None,
            states: state_names(m, set),
        })
        .collect();
    Ok(Diagram {
        kind: "proposition_poset",
        nodes,
        edges: poset.hasse_edges(),
    })
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot(d: &Diagram) -> String {
    let mut out = String::from("digraph lattice {\n    rankdir=BT;\n    node [shape=box];\n");
    for n in &d.nodes {
        let _ = writeln!(
            out,
            "    n{} [label=\"{}\\n{{{}}}\"];",
            n.id,
            escape(&n.label),
            escape(&n.states.join(", "))
        );
    }
    for (a, b) in &d.edges {
        let _ = writeln!(out, "    n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

fn text(d: &Diagram) -> String {
    let mut out = format!("{} with {} elements\n", d.kind.replace('_', " "), d.nodes.len());
    for n in &d.nodes {
        let _ = write!(out, "  {:>3}  {}  {{{}}}", n.id, n.label, n.states.join(", "));
        if let Some(s) = &n.subspace {
            let _ = write!(out, "  {s}");
        }
        out.push('\n');
    }
    out.push_str("covers\n");
    for (a, b) in &d.edges {
        let _ = writeln!(out, "  {a} < {b}");
    }
    out
}

pub fn run(args: &LatticeArgs) -> CliResult<Output> {
    check_depth(args.depth, MAX_ENUMERATION_DEPTH)?;
    let loaded = load(&args.source)?;
    let diagram = match (&loaded, args.propositions) {
        (LoadedModel::Quantum(q), false) => subspace_diagram(q),
        _ => proposition_diagram(&loaded, args.depth)?,
    };
    let body = match args.format {
        Format::Dot => dot(&diagram),
        Format::Json => to_json(&diagram),
        Format::Text => text(&diagram),
    };
    Ok(Output::clean(body))
}
