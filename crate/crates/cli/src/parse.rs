//! `qprop parse`

use std::collections::BTreeSet;

use clap::Args;
use qprop_core::formula::classify;
use qprop_core::{parse, render, Formula};
use serde::Serialize;

use crate::input::{language_key, language_label, load_optional, property_names};
use crate::{require_format, to_json, CliResult, Format, Output, Source};

#[derive(Args, Debug)]
pub struct ParseArgs {
    /// Formula text, e.g. `E &q ~q F`.
    #[arg(long)]
    pub formula: String,
    /// Model whose property predicates drive the classification; without
    /// one every leaf counts as a property.
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Serialize)]
struct ParseReport {
    canonical: String,
    depth: usize,
    language: &'static str,
    connectives: &'static str,
    predicates: Vec<String>,
}

fn connectives(f: &Formula) -> &'static str {
    fn has(f: &Formula, quantum: bool) -> bool {
        let own = !matches!(f, Formula::Pred(_)) && f.is_quantum_node() == quantum;
        own || f.children().into_iter().any(|c| has(c, quantum))
    }
    match (has(f, false), has(f, true)) {
        (_, false) => "classical",
        (false, true) => "quantum",
        (true, true) => "mixed",
    }
}

pub fn run(args: &ParseArgs) -> CliResult<Output> {
    require_format(args.format, &[Format::Text, Format::Json])?;
    let f = parse(&args.formula)?;
    let props = match load_optional(&args.source)? {
        Some(loaded) => property_names(loaded.model()),
        None => f.leaves().into_iter().cloned().collect::<BTreeSet<_>>(),
    };
    let tag = classify(&f, &props);
    let mut predicates: Vec<String> = f.leaves().into_iter().map(|p| p.to_string()).collect();
    predicates.sort();
    predicates.dedup();
    let report = ParseReport {
        canonical: render(&f),
        depth: f.depth(),
        language: language_key(tag),
        connectives: connectives(&f),
        predicates,
    };
    let body = match args.format {
        Format::Json => to_json(&report),
        _ => format!(
            "canonical:   {}\ndepth:       {}\nlanguage:    {}\nconnectives: {}\npredicates:  {}\n",
            report.canonical,
            report.depth,
            language_label(tag),
            report.connectives,
            report.predicates.join(", ")
        ),
    };
    Ok(Output::clean(body))
}
