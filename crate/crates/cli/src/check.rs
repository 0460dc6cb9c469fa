//! `qprop check`

use std::collections::HashSet;
use std::fmt::Write as _;

use clap::Args;
use qprop_core::bridge::check_equiv_coincidence;
use qprop_core::formula::check_depth;
use qprop_core::lattice::Orthomodularity;
use qprop_core::propositions::{check_connective_relations, cmt_violation, proposition_poset, MAX_RELATION_DEPTH};
use qprop_core::{Error, LoadedModel, Model, PredicateId, QmModel};
use serde::Serialize;
use serde_json::Value;

use crate::input::{leaves, load};
use crate::{require_format, to_json, CliResult, Format, Output, Source};

/// Largest atom count for which the quotient algebra is built and checked
/// law by law.
pub const BOOLEAN_CHECK_MAX_ATOMS: usize = 8;
/// Largest atom count for which formula classes are swept.
pub const CLASS_SWEEP_MAX_ATOMS: usize = 12;

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: Source,
    /// Formula depth of the sweeps.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported for information; never a violation.
    Info,
    Skipped,
}

#[derive(Serialize)]
struct Suite {
    name: &'static str,
    status: Status,
    summary: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    details: Value,
}

impl Suite {
    fn new(name: &'static str, status: Status, summary: String) -> Self {
        Suite {
            name,
            status,
            summary,
            details: Value::Null,
        }
    }

    fn with(mut self, details: &impl Serialize) -> Self {
        self.details = serde_json::to_value(details).expect("reports serialize");
        self
    }

    fn verdict(name: &'static str, holds: bool, summary: String) -> Self {
        Suite::new(name, if holds { Status::Pass } else { Status::Fail }, summary)
    }
}

#[derive(Serialize)]
struct CheckReport {
    kind: &'static str,
    depth: usize,
    atoms: usize,
    suites: Vec<Suite>,
    violations: usize,
}

/// Number of distinct membership patterns of `Ω` points across the leaves;
/// the formula algebra over the leaves has `2^atoms` elements.
fn atom_count(m: &Model, leaves: &[PredicateId]) -> CliResult<usize> {
    let sigs = leaves
        .iter()
        .map(|p| Ok(m.predicate_signature(m.predicate_index(p)?)))
        .collect::<qprop_core::Result<Vec<_>>>()?;
    let patterns: HashSet<Vec<bool>> = (0..m.omega_len())
        .map(|i| sigs.iter().map(|s| s.bits().contains(i)).collect())
        .collect();
    Ok(patterns.len())
}

fn skipped(name: &'static str, atoms: usize, limit: usize) -> Suite {
    Suite::new(
        name,
        Status::Skipped,
        format!("{atoms} atoms exceed the sweep limit of {limit}"),
    )
}

fn classical_suites(m: &Model, leaves: &[PredicateId], depth: usize, atoms: usize, quantum: bool) -> CliResult<Vec<Suite>> {
    let mut suites = Vec::new();

    if atoms > BOOLEAN_CHECK_MAX_ATOMS {
        suites.push(skipped("boolean-quotient", atoms, BOOLEAN_CHECK_MAX_ATOMS));
    } else {
        let algebra = m.quotient_boolean(leaves, depth)?;
        suites.push(match algebra.verify_boolean() {
            Ok(r) => Suite::new(
                "boolean-quotient",
                Status::Pass,
                format!(
                    "{} classes ({} within depth {depth}), {} triples checked",
                    r.elements, algebra.within_depth, r.triples_checked
                ),
            ),
            Err(v) => {
                let reps: Vec<String> = v
                    .elements
                    .iter()
                    .map(|&i| algebra.elements[i].representative.to_string())
                    .collect();
                Suite::new(
                    "boolean-quotient",
                    Status::Fail,
                    format!("{} fails on [{}]", v.law, reps.join("; ")),
                )
            }
        });
    }

    if atoms > CLASS_SWEEP_MAX_ATOMS {
        suites.push(skipped("connective-relations", atoms, CLASS_SWEEP_MAX_ATOMS));
        suites.push(skipped("proposition-poset", atoms, CLASS_SWEEP_MAX_ATOMS));
    } else {
        let relations = check_connective_relations(m, leaves, depth)?;
        let parts: Vec<String> = relations
            .relations
            .iter()
            .map(|r| format!("{} {}/{} violated", r.relation, r.violations, r.checked))
            .collect();
        suites.push(
            Suite::verdict(
                "connective-relations",
                relations.violations() == 0,
                format!("{} classes; {}", relations.classes, parts.join(", ")),
            )
            .with(&relations),
        );

        let reps: Vec<_> = m
            .signature_classes(leaves, depth)?
            .into_iter()
            .map(|c| c.representative)
            .collect();
        let poset = proposition_poset(m, &reps)?;
        let boolean = poset.verify_boolean().is_ok();
        suites.push(Suite::new(
            "proposition-poset",
            Status::Info,
            format!(
                "{} propositions; lattice: {}; Boolean: {}",
                poset.len(),
                yes_no(poset.is_lattice()),
                yes_no(boolean)
            ),
        ));
    }

    let cms = match m.cms_violation() {
        None => "holds".to_string(),
        Some((p, s)) => format!("fails: {p} is indeterminate in {s}"),
    };
    suites.push(Suite::new("cms", Status::Info, cms));

    let cmt_depth = if quantum { depth.min(1) } else { depth };
    let cmt = if !quantum && atoms > CLASS_SWEEP_MAX_ATOMS {
        format!("skipped: {atoms} atoms exceed the sweep limit of {CLASS_SWEEP_MAX_ATOMS}")
    } else {
        match cmt_violation(m, cmt_depth)? {
            None => format!("holds to depth {cmt_depth}"),
            Some(f) => format!("fails to depth {cmt_depth}: no property predicate matches {f}"),
        }
    };
    suites.push(Suite::new("cmt", Status::Info, cmt));
    Ok(suites)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn quantum_suites(q: &QmModel, depth: usize) -> CliResult<Vec<Suite>> {
    let l = q.lattice();
    let name = |e: usize| q.predicate_id_of(e).to_string();
    let mut suites = Vec::new();

    suites.push(match l.is_orthomodular() {
        Orthomodularity::Holds { pairs_checked } => Suite::new(
            "orthomodularity",
            Status::Pass,
            format!("{} elements, {pairs_checked} ordered pairs checked", l.len()),
        ),
        Orthomodularity::Violated { a, b } => Suite::new(
            "orthomodularity",
            Status::Fail,
            format!("fails for {} <= {}", name(a), name(b)),
        ),
    });

    let table_failure = l
        .involution_failure()
        .map(|a| format!("orthocomplement of {} is not an involution", name(a)))
        .or_else(|| {
            l.de_morgan_failure()
                .map(|(a, b)| format!("De Morgan fails for {} and {}", name(a), name(b)))
        });
    suites.push(Suite::verdict(
        "ortholattice-tables",
        table_failure.is_none(),
        table_failure.unwrap_or_else(|| "involution and De Morgan hold".into()),
    ));

    let distributivity = match l.find_distributivity_failure() {
        Some((a, b, c)) => format!(
            "non-distributive as expected: a = {}, b = {}, c = {}",
            name(a),
            name(b),
            name(c)
        ),
        None => "distributive".into(),
    };
    suites.push(Suite::new("distributivity", Status::Info, distributivity));

    let qmt = q.check_qmt();
    let summary = match qmt.violations.first() {
        None => format!("{} predicate-state pairs checked", qmt.checked),
        Some(v) => format!(
            "{} violations, first: {:?} at {} in {}",
            qmt.violations.len(),
            v.kind,
            v.predicate,
            v.state
        ),
    };
    suites.push(Suite::verdict("qmt", qmt.holds(), summary).with(&qmt));

    let qmn = q.qmn_violation();
    suites.push(Suite::verdict(
        "qmn",
        qmn.is_none(),
        match qmn {
            None => "every predicate is a property".into(),
            Some(p) => format!("{p} is not a property"),
        },
    ));

    let co = check_equiv_coincidence(q.model(), q.inputs(), depth)?;
    let mut summary = format!(
        "{} testable of {} classes, {} pairs, {} violations",
        co.testable, co.classes, co.pairs_checked, co.violation_count
    );
    if co.order_mismatches > 0 {
        let _ = write!(summary, "; {} informational order mismatches", co.order_mismatches);
    }
    suites.push(Suite::verdict("equivalence-coincidence", co.holds(), summary).with(&co));

    let eq = q.check_quantum_equivalences(depth)?;
    let parts: Vec<String> = eq
        .relations()
        .iter()
        .map(|r| format!("{} {}/{}", r.relation, r.violations, r.checked))
        .collect();
    suites.push(
        Suite::verdict(
            "quantum-equivalences",
            eq.violations() == 0,
            format!("{} quantum classes; violated {}", eq.qwff_classes, parts.join(", ")),
        )
        .with(&eq),
    );

    suites.push(match q.check_q_truth(depth) {
        Ok(r) => Suite::verdict(
            "q-truth",
            r.violations.is_empty(),
            format!(
                "{} formulas, {} pairs: {} Q-true, {} Q-false, {} Q-indeterminate, {} violations",
                r.formulas,
                r.pairs_checked,
                r.q_true,
                r.q_false,
                r.q_indeterminate,
                r.violations.len()
            ),
        )
        .with(&r),
        Err(e @ Error::EnumerationTooLarge { .. }) => Suite::new("q-truth", Status::Skipped, e.to_string()),
        Err(e) => return Err(e.into()),
    });

    let lb = q.check_lindenbaum()?;
    let summary = match &lb.failure {
        None => format!(
            "{} quantum classes match {} sublattice elements",
            lb.classes, lb.sublattice_elements
        ),
        Some(f) => f.clone(),
    };
    suites.push(Suite::verdict("lindenbaum", lb.isomorphic, summary).with(&lb));
    Ok(suites)
}

fn render_text(r: &CheckReport) -> String {
    let mut out = format!("{} model, depth {}, {} atoms\n", r.kind, r.depth, r.atoms);
    let width = r.suites.iter().map(|s| s.name.len()).max().unwrap_or(0);
    for s in &r.suites {
        let tag = match s.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Info => "info",
            Status::Skipped => "skip",
        };
        let _ = writeln!(out, "[{tag}] {:<width$}  {}", s.name, s.summary);
    }
    let _ = writeln!(out, "{} violations", r.violations);
    out
}

pub fn run(args: &CheckArgs) -> CliResult<Output> {
    require_format(args.format, &[Format::Text, Format::Json])?;
    check_depth(args.depth, MAX_RELATION_DEPTH)?;
    let loaded = load(&args.source)?;
    let m = loaded.model();
    let leaves = leaves(&loaded);
    let atoms = atom_count(m, &leaves)?;
    let (kind, suites) = match &loaded {
        LoadedModel::Classical(_) => ("classical", classical_suites(m, &leaves, args.depth, atoms, false)?),
        LoadedModel::Quantum(q) => {
            let mut suites = classical_suites(m, &leaves, args.depth, atoms, true)?;
            suites.extend(quantum_suites(q, args.depth)?);
            ("quantum", suites)
        }
    };
    let violations = suites.iter().filter(|s| s.status == Status::Fail).count();
    let report = CheckReport {
        kind,
        depth: args.depth,
        atoms,
        suites,
        violations,
    };
    let body = match args.format {
        Format::Json => to_json(&report),
        _ => render_text(&report),
    };
    Ok(Output {
        body,
        violations: violations > 0,
    })
}
