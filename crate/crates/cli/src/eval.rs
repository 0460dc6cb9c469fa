//! `qprop eval`

use std::fmt::Write as _;

use clap::Args;
use qprop_core::formula::classify;
use qprop_core::{parse, render, Error, LoadedModel, QTruthValue};
use serde::Serialize;

use crate::input::{language_key, language_label, load, property_names};
use crate::{require_format, to_json, CliResult, Format, Output, Source};

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: Source,
    /// Formula text, e.g. `E & ~F`.
    #[arg(long)]
    pub formula: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Serialize)]
struct StateRow {
    state: String,
    universe: usize,
    true_objects: Vec<usize>,
    certainly_true: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_truth: Option<String>,
}

#[derive(Serialize)]
struct EvalReport {
    formula: String,
    language: &'static str,
    /// Predicate the formula reduces to in a quantum model.
    #[serde(skip_serializing_if = "Option::is_none")]
    reduces_to: Option<String>,
    /// Why Q-truth is unavailable for a classical formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    proposition: Vec<String>,
    states: Vec<StateRow>,
}

pub fn run(args: &EvalArgs) -> CliResult<Output> {
    require_format(args.format, &[Format::Text, Format::Json])?;
    let f = parse(&args.formula)?;
    let loaded = load(&args.source)?;
    let m = loaded.model();
    let tag = classify(&f, &property_names(m));

    let (signature, reduces_to, note, quantum) = match &loaded {
        LoadedModel::Classical(_) => {
            if !f.is_classical() {
                return Err(Error::MissingTheta.into());
            }
            (m.signature(&f)?, None, None, None)
        }
        LoadedModel::Quantum(q) => {
            let signature = q.signature_of(&f)?;
            match q.reduce_qwff(&f) {
                Ok(p) => (signature, Some(p.to_string()), None, Some(q)),
                Err(Error::NotTestable(_)) if f.is_classical() => {
                    (signature, None, Some("not p-testable, so Q-truth is undefined".to_string()), None)
                }
                Err(e) => return Err(e.into()),
            }
        }
    };

    let certain = m.certain_states(&signature);
    let pairs = m.signature_pairs(&signature);
    let mut states = Vec::new();
    for (s, info) in m.states().iter().enumerate() {
        let true_objects = pairs.iter().filter(|(st, _)| *st == info.name).map(|(_, u)| *u).collect();
        let q_truth = quantum
            .map(|q| q.q_truth_at(&f, s).map(|v: QTruthValue| v.to_string()))
            .transpose()?;
        states.push(StateRow {
            state: info.name.to_string(),
            universe: info.universe,
            true_objects,
            certainly_true: certain.contains(s),
            q_truth,
        });
    }
    let report = EvalReport {
        formula: render(&f),
        language: language_key(tag),
        reduces_to,
        note,
        proposition: certain.indices().map(|s| m.states()[s].name.to_string()).collect(),
        states,
    };
    let body = match args.format {
        Format::Json => to_json(&report),
        _ => render_text(&report, language_label(tag)),
    };
    Ok(Output::clean(body))
}

fn render_text(r: &EvalReport, language: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "formula:     {}", r.formula);
    let _ = writeln!(out, "language:    {language}");
    if let Some(p) = &r.reduces_to {
        let _ = writeln!(out, "reduces to:  {p}");
    }
    let _ = writeln!(out, "proposition: {{{}}}", r.proposition.join(", "));
    if let Some(n) = &r.note {
        let _ = writeln!(out, "note:        {n}");
    }
    let width = r.states.iter().map(|s| s.state.len()).max().unwrap_or(0).max("state".len());
    let objects: Vec<String> = r
        .states
        .iter()
        .map(|s| {
            let list: Vec<String> = s.true_objects.iter().map(usize::to_string).collect();
            format!("{} of {} [{}]", s.true_objects.len(), s.universe, list.join(" "))
        })
        .collect();
    let owidth = objects.iter().map(String::len).max().unwrap_or(0).max("true objects".len());
    let quantum = r.states.iter().any(|s| s.q_truth.is_some());
    let _ = write!(out, "\n{:<width$}  {:<owidth$}  certain", "state", "true objects");
    if quantum {
        let _ = write!(out, "  Q-truth");
    }
    out.push('\n');
    for (row, objs) in r.states.iter().zip(&objects) {
        let mark = if row.certainly_true { "yes" } else { "no" };
        let _ = write!(out, "{:<width$}  {:<owidth$}  {:<7}", row.state, objs, mark);
        if let Some(q) = &row.q_truth {
            let _ = write!(out, "  {q}");
        }
        let trimmed = out.trim_end_matches(' ').len();
        out.truncate(trimmed);
        out.push('\n');
    }
    out
}
