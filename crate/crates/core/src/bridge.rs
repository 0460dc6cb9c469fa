//! Finite models manufactured from a Hilbert-space description.
//!
//! A [`QmSpec`] lists state vectors and property subspaces. [`build_model`]
//! closes the properties into a finite lattice of subspaces, gives every
//! element a predicate, and fills in extensions from Born values so that the
//! certainly-true states of each predicate are exactly the states whose ray
//! lies in its subspace. The resulting [`QmModel`] evaluates quantum
//! connectives by reduction to predicates and answers three-valued Q-truth.

use std::collections::{HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::formula::{check_depth, enumerate_formulas, render, ConnectiveFamily, Formula, PredicateId};
use crate::lattice::{close, QLattice, DEFAULT_CLOSURE_CAP};
use crate::model::{Model, PredicateInfo, Signature, StateId, StateSet, StateSpec, DEFAULT_UNIVERSE};
use crate::propositions::{witness_for_signature, RelationStats, Scope, MAX_RELATION_DEPTH};
use crate::quotient::{layered_classes, BinaryRule, Class};
use crate::scalar::{cint, format_scalar, parse_scalar, ExactComplex, Rational};
use crate::subspace::{born, Subspace};

type ExactSubspace = Subspace<ExactComplex>;

// ---------------------------------------------------------------------------
// Spec files

fn default_universe() -> usize {
    DEFAULT_UNIVERSE
}

fn default_cap() -> usize {
    DEFAULT_CLOSURE_CAP
}

fn default_true() -> bool {
    true
}

/// On-disk form of a [`QmSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmSpecFile {
    pub dim: usize,
    #[serde(default = "default_universe")]
    pub universe: usize,
    #[serde(default = "default_cap")]
    pub closure_cap: usize,
    #[serde(default = "default_true")]
    pub complete_states: bool,
    pub states: Vec<QmStateEntry>,
    pub properties: Vec<QmPropertyEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmStateEntry {
    pub name: String,
    pub vector: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmPropertyEntry {
    pub name: String,
    pub basis: Vec<Vec<String>>,
}

/// Provenance of a generated spec: the seed and how many draws were
/// discarded before one closed within the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub seed: u64,
    pub attempt: u32,
}

/// Hilbert-space description of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QmSpec {
    pub dim: usize,
    /// Universe size of every state.
    pub universe: usize,
    pub closure_cap: usize,
    /// Add a witness state for every atom spanned by a closure element's
    /// basis that no listed state already represents.
    pub complete_states: bool,
    pub states: Vec<(StateId, Vec<ExactComplex>)>,
    pub properties: Vec<(PredicateId, ExactSubspace)>,
    pub generator: Option<GeneratorInfo>,
}

impl QmSpec {
    /// Two-dimensional example with states along `z+`, `z-`, `x+` and the
    /// properties `Ez = span{(1,0)}`, `Ex = span{(1,1)}`, universe 4.
    pub fn qubit_example(complete_states: bool) -> QmSpec {
        let v = |a: i64, b: i64| vec![cint(a, 0), cint(b, 0)];
        let line = |a: i64, b: i64| Subspace::line(&v(a, b)).expect("nonzero");
        QmSpec {
            dim: 2,
            universe: 4,
            closure_cap: DEFAULT_CLOSURE_CAP,
            complete_states,
            states: vec![
                (StateId::new("Sz+").unwrap(), v(1, 0)),
                (StateId::new("Sz-").unwrap(), v(0, 1)),
                (StateId::new("Sx+").unwrap(), v(1, 1)),
            ],
            properties: vec![
                (PredicateId::new("Ez").unwrap(), line(1, 0)),
                (PredicateId::new("Ex").unwrap(), line(1, 1)),
            ],
            generator: None,
        }
    }

    pub fn from_file(file: &QmSpecFile) -> Result<QmSpec> {
        let parse_vec = |v: &[String]| -> Result<Vec<ExactComplex>> {
            v.iter().map(|s| parse_scalar(s)).collect()
        };
        let mut states = Vec::with_capacity(file.states.len());
        for s in &file.states {
            states.push((StateId::new(&s.name)?, parse_vec(&s.vector)?));
        }
        let mut properties = Vec::with_capacity(file.properties.len());
        for p in &file.properties {
            let basis = p
                .basis
                .iter()
                .map(|v| parse_vec(v))
                .collect::<Result<Vec<_>>>()?;
            for v in &basis {
                if v.len() != file.dim {
                    return Err(Error::DimensionMismatch {
                        left: file.dim,
                        right: v.len(),
                    });
                }
            }
            properties.push((PredicateId::new(&p.name)?, Subspace::span(file.dim, &basis)?));
        }
        let spec = QmSpec {
            dim: file.dim,
            universe: file.universe,
            closure_cap: file.closure_cap,
            complete_states: file.complete_states,
            states,
            properties,
            generator: file.generator,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<QmSpec> {
        let file: QmSpecFile = serde_json::from_str(text)?;
        QmSpec::from_file(&file)
    }

    pub fn to_file(&self) -> QmSpecFile {
        QmSpecFile {
            dim: self.dim,
            universe: self.universe,
            closure_cap: self.closure_cap,
            complete_states: self.complete_states,
            states: self
                .states
                .iter()
                .map(|(n, v)| QmStateEntry {
                    name: n.to_string(),
                    vector: v.iter().map(format_scalar).collect(),
                })
                .collect(),
            properties: self
                .properties
                .iter()
                .map(|(n, s)| QmPropertyEntry {
                    name: n.to_string(),
                    basis: s.to_literals(),
                })
                .collect(),
            generator: self.generator,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_file()).expect("plain data");
        text.push('\n');
        text
    }

    /// Structural checks that do not need the closure.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        if self.universe == 0 {
            return Err(Error::InvalidSpec("universe must be positive".into()));
        }
        if self.closure_cap == 0 {
            return Err(Error::InvalidSpec("closure cap must be positive".into()));
        }
        if self.properties.is_empty() {
            return Err(Error::InvalidSpec("at least one property is required".into()));
        }
        let mut names = HashSet::new();
        let mut atoms: HashMap<ExactSubspace, &StateId> = HashMap::new();
        for (name, v) in &self.states {
            if !names.insert(name.as_str()) {
                return Err(Error::InvalidSpec(format!("duplicate state {name}")));
            }
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    left: self.dim,
                    right: v.len(),
                });
            }
            let atom = Subspace::line(v).map_err(|_| Error::ZeroVector(Some(name.to_string())))?;
            if let Some(other) = atoms.insert(atom, name) {
                return Err(Error::InvalidSpec(format!(
                    "states {other} and {name} lie on the same ray"
                )));
            }
        }
        let mut pnames = HashSet::new();
        let mut subs: HashMap<&ExactSubspace, &PredicateId> = HashMap::new();
        for (name, s) in &self.properties {
            if !pnames.insert(name) {
                return Err(Error::InvalidSpec(format!("duplicate property {name}")));
            }
            if s.ambient_dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    left: self.dim,
                    right: s.ambient_dim(),
                });
            }
            if let Some(other) = subs.insert(s, name) {
                return Err(Error::InvalidSpec(format!(
                    "properties {other} and {name} have the same subspace"
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Building

fn short_hash(text: &str, hex_len: usize) -> String {
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    hex[..hex_len].to_string()
}

fn fresh_name(prefix: &str, key: &str, taken: &HashSet<String>) -> Result<String> {
    for len in [8, 16, 64] {
        let name = format!("{prefix}{}", short_hash(key, len));
        if !taken.contains(&name) {
            return Ok(name);
        }
    }
    Err(Error::InvalidSpec(format!("cannot name {key}: all hash names taken")))
}

/// `⌊x + 1/2⌋` for nonnegative rationals.
fn round_half_up(x: &Rational) -> usize {
    (x + Rational::new(1.into(), 2.into()))
        .floor()
        .to_integer()
        .to_usize()
        .expect("nonnegative and small")
}

/// Extension chosen for Born value `p` in a universe of `n` objects: all of
/// it for `p = 1`, none for `p = 0`, otherwise the first
/// `clamp(round(n p), 1, n - 1)` objects.
pub fn extension_size(p: &Rational, n: usize) -> Option<usize> {
    if p.is_one() {
        Some(n)
    } else if p.is_zero() {
        Some(0)
    } else if n < 2 {
        None
    } else {
        let k = round_half_up(&(p * Rational::from_integer(n.into())));
        Some(k.clamp(1, n - 1))
    }
}

/// A model built from a [`QmSpec`] together with its subspace lattice and
/// the map from predicates to the states whose rays they contain.
#[derive(Clone, Debug)]
pub struct QmModel {
    model: Model,
    lattice: QLattice<ExactComplex>,
    spec: QmSpec,
    vectors: Vec<Vec<ExactComplex>>,
    n_listed_states: usize,
    inputs: Vec<PredicateId>,
    pred_element: Vec<usize>,
    element_pred: Vec<usize>,
    theta: Vec<StateSet>,
    born: Vec<Vec<Rational>>,
    expected: Vec<Vec<FixedBitSet>>,
}

/// Builds the model of `spec`.
pub fn build_model(spec: &QmSpec) -> Result<QmModel> {
    spec.validate()?;
    let generators: Vec<ExactSubspace> = spec.properties.iter().map(|(_, s)| s.clone()).collect();
    let lattice = close(&generators, spec.closure_cap).map_err(|e| match e {
        Error::ClosureOverflow { cap, .. } => Error::ClosureOverflow {
            cap,
            generators: spec
                .properties
                .iter()
                .map(|(n, s)| format!("{n} = {s}"))
                .collect::<Vec<_>>()
                .join(", "),
        },
        other => other,
    })?;

    // Predicate table: inputs, their unnamed orthocomplements, then the rest.
    let mut taken: HashSet<String> = spec.properties.iter().map(|(n, _)| n.to_string()).collect();
    let mut element_name: Vec<Option<String>> = vec![None; lattice.len()];
    let mut order: Vec<usize> = Vec::with_capacity(lattice.len());
    for (name, s) in &spec.properties {
        let e = lattice.index_of(s).expect("generators are elements");
        element_name[e] = Some(name.to_string());
        order.push(e);
    }
    for (name, s) in &spec.properties {
        let e = lattice.ortho(lattice.index_of(s).expect("generators are elements"));
        if element_name[e].is_some() {
            continue;
        }
        let mut candidate = format!("{name}_perp");
        if taken.contains(&candidate) {
            candidate = fresh_name("Q_", &lattice.element(e).to_string(), &taken)?;
        }
        taken.insert(candidate.clone());
        element_name[e] = Some(candidate);
        order.push(e);
    }
    for e in 0..lattice.len() {
        if element_name[e].is_none() {
            let name = fresh_name("Q_", &lattice.element(e).to_string(), &taken)?;
            taken.insert(name.clone());
            element_name[e] = Some(name);
            order.push(e);
        }
    }
    let mut element_pred = vec![0; lattice.len()];
    for (p, &e) in order.iter().enumerate() {
        element_pred[e] = p;
    }
    let names: Vec<PredicateId> = order
        .iter()
        .map(|&e| PredicateId::new(element_name[e].as_deref().expect("named")))
        .collect::<Result<_>>()?;

    // States: listed ones, then witnesses for unrepresented atoms.
    let mut state_names: Vec<String> = spec.states.iter().map(|(n, _)| n.to_string()).collect();
    let mut vectors: Vec<Vec<ExactComplex>> = spec.states.iter().map(|(_, v)| v.clone()).collect();
    if spec.complete_states {
        let mut atoms: HashSet<ExactSubspace> = vectors
            .iter()
            .map(|v| Subspace::line(v).expect("validated nonzero"))
            .collect();
        let mut taken_states: HashSet<String> = state_names.iter().cloned().collect();
        for element in lattice.elements() {
            for v in element.basis() {
                let atom = Subspace::line(v).expect("basis vectors are nonzero");
                if atoms.contains(&atom) {
                    continue;
                }
                let name = fresh_name("W_", &atom.to_string(), &taken_states)?;
                taken_states.insert(name.clone());
                atoms.insert(atom);
                state_names.push(name);
                vectors.push(v.clone());
            }
        }
    }
    let n_states = vectors.len();
    let n = spec.universe;

    let mut theta = Vec::with_capacity(order.len());
    let mut born_table = Vec::with_capacity(order.len());
    for &e in &order {
        let sub = lattice.element(e);
        theta.push(StateSet::from_indices(
            n_states,
            (0..n_states).filter(|&s| sub.contains(&vectors[s])),
        ));
        born_table.push(
            vectors
                .iter()
                .map(|v| born(v, sub))
                .collect::<Result<Vec<Rational>>>()?,
        );
    }

    let mut expected: Vec<Vec<FixedBitSet>> = Vec::with_capacity(order.len());
    for (p, &e) in order.iter().enumerate() {
        let partner = element_pred[lattice.ortho(e)];
        let mut row = Vec::with_capacity(n_states);
        for s in 0..n_states {
            let bits = if partner < p {
                let mut c = expected[partner][s].clone();
                c.toggle_range(..);
                c
            } else {
                let k = extension_size(&born_table[p][s], n).ok_or_else(|| Error::UniverseTooSmall {
                    universe: n,
                    predicate: names[p].to_string(),
                    state: state_names[s].clone(),
                })?;
                let mut b = FixedBitSet::with_capacity(n);
                b.insert_range(..k);
                b
            };
            row.push(bits);
        }
        expected.push(row);
    }

    let infos = order
        .iter()
        .enumerate()
        .map(|(p, &e)| PredicateInfo {
            name: names[p].clone(),
            is_property: true,
            ortho: Some(names[element_pred[lattice.ortho(e)]].clone()),
        })
        .collect();
    let specs = (0..n_states)
        .map(|s| StateSpec {
            name: state_names[s].clone(),
            universe: n,
            extensions: names
                .iter()
                .enumerate()
                .map(|(p, name)| (name.to_string(), expected[p][s].ones().collect()))
                .collect(),
        })
        .collect();
    let model = Model::new(infos, specs)?;

    Ok(QmModel {
        model,
        spec: spec.clone(),
        vectors,
        n_listed_states: spec.states.len(),
        inputs: spec.properties.iter().map(|(n, _)| n.clone()).collect(),
        pred_element: order,
        element_pred,
        theta,
        born: born_table,
        expected,
        lattice,
    })
}

/// Three-valued truth of a formula in a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QTruthValue {
    QTrue,
    QFalse,
    QIndeterminate,
}

impl fmt::Display for QTruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QTruthValue::QTrue => "Q-true",
            QTruthValue::QFalse => "Q-false",
            QTruthValue::QIndeterminate => "Q-indeterminate",
        })
    }
}

impl QmModel {
    pub fn from_json(text: &str) -> Result<QmModel> {
        build_model(&QmSpec::from_json(text)?)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn lattice(&self) -> &QLattice<ExactComplex> {
        &self.lattice
    }

    pub fn spec(&self) -> &QmSpec {
        &self.spec
    }

    /// Property predicates named in the spec, in spec order.
    pub fn inputs(&self) -> &[PredicateId] {
        &self.inputs
    }

    /// Indices of states added to complete the atoms of the closure.
    pub fn witness_states(&self) -> std::ops::Range<usize> {
        self.n_listed_states..self.vectors.len()
    }

    pub fn state_vector(&self, s: usize) -> &[ExactComplex] {
        &self.vectors[s]
    }

    pub fn element_of(&self, predicate: usize) -> usize {
        self.pred_element[predicate]
    }

    pub fn predicate_of(&self, element: usize) -> usize {
        self.element_pred[element]
    }

    pub fn predicate_id_of(&self, element: usize) -> &PredicateId {
        &self.model.predicates()[self.element_pred[element]].name
    }

    pub fn subspace(&self, predicate: usize) -> &ExactSubspace {
        self.lattice.element(self.pred_element[predicate])
    }

    /// States whose ray lies in the predicate's subspace.
    pub fn theta(&self, predicate: usize) -> &StateSet {
        &self.theta[predicate]
    }

    pub fn theta_of(&self, id: &PredicateId) -> Result<&StateSet> {
        Ok(&self.theta[self.model.predicate_index(id)?])
    }

    pub fn born_value(&self, predicate: usize, state: usize) -> &Rational {
        &self.born[predicate][state]
    }

    /// Lattice element a formula denotes.
    ///
    /// Quantum connectives act on subspaces; a maximal classical subtree is
    /// replaced by its property witness and fails if it has none.
    pub fn reduce_element(&self, f: &Formula) -> Result<usize> {
        let l = &self.lattice;
        match f {
            Formula::Pred(p) => Ok(self.pred_element[self.model.predicate_index(p)?]),
            Formula::QNot(a) => Ok(l.ortho(self.reduce_element(a)?)),
            Formula::QAnd(a, b) => Ok(l.meet(self.reduce_element(a)?, self.reduce_element(b)?)),
            Formula::QOr(a, b) => Ok(l.join(self.reduce_element(a)?, self.reduce_element(b)?)),
            Formula::QImp(a, b) => Ok(l.sasaki(self.reduce_element(a)?, self.reduce_element(b)?)),
            Formula::Not(_) | Formula::And(..) | Formula::Or(..) => {
                if !f.is_classical() {
                    return Err(Error::QuantumUnderClassical(render(f)));
                }
                let sig = self.model.signature(f)?;
                match witness_for_signature(&self.model, &sig, Scope::Properties) {
                    Some(p) => Ok(self.pred_element[self.model.predicate_index(&p)?]),
                    None => Err(Error::NotTestable(render(f))),
                }
            }
        }
    }

    /// Predicate the formula is logically equivalent to.
    pub fn reduce_qwff(&self, f: &Formula) -> Result<PredicateId> {
        Ok(self.predicate_id_of(self.reduce_element(f)?).clone())
    }

    fn reduce_index(&self, f: &Formula) -> Result<usize> {
        Ok(self.element_pred[self.reduce_element(f)?])
    }

    /// Signature of any formula the model can reduce.
    pub fn signature_of(&self, f: &Formula) -> Result<Signature> {
        if f.is_classical() {
            self.model.signature(f)
        } else {
            Ok(self.model.predicate_signature(self.reduce_index(f)?).clone())
        }
    }

    /// Certainly-true states of any formula the model can reduce.
    pub fn proposition_of(&self, f: &Formula) -> Result<StateSet> {
        Ok(self.model.certain_states(&self.signature_of(f)?))
    }

    /// Open truth at `(state, object)` through the reduced predicate.
    pub fn tau_eval(&self, f: &Formula, state: &StateId, u: usize) -> Result<bool> {
        let p = self.reduce_qwff(f)?;
        self.model.eval_open(&Formula::Pred(p), state, u)
    }

    pub fn q_truth(&self, f: &Formula, state: &StateId) -> Result<QTruthValue> {
        let s = self.model.state_index(state)?;
        self.q_truth_at(f, s)
    }

    pub fn q_truth_at(&self, f: &Formula, s: usize) -> Result<QTruthValue> {
        let e = self.reduce_element(f)?;
        Ok(self.q_truth_of_element(e, s))
    }

    fn q_truth_of_element(&self, e: usize, s: usize) -> QTruthValue {
        if self.theta[self.element_pred[e]].contains(s) {
            QTruthValue::QTrue
        } else if self.theta[self.element_pred[self.lattice.ortho(e)]].contains(s) {
            QTruthValue::QFalse
        } else {
            QTruthValue::QIndeterminate
        }
    }

    /// Checks `m` against this model's construction: certainly-true states
    /// equal `θ` for every predicate, paired extensions are complements, an
    /// extension is empty exactly where the state lies in the orthocomplement,
    /// and each extension matches the rounding rule.
    ///
    /// `m` must have this model's predicate and state tables; pass a modified
    /// copy of [`QmModel::model`] to test fault detection.
    pub fn check_qmt_on(&self, m: &Model) -> QmtReport {
        let mut report = QmtReport::default();
        let state_name = |s: usize| m.states()[s].name.to_string();
        let pred_name = |p: usize| m.predicates()[p].name.to_string();
        for p in 0..m.predicates().len() {
            let partner = self.element_pred[self.lattice.ortho(self.pred_element[p])];
            let certain = m.certain_states(m.predicate_signature(p));
            for s in 0..m.states().len() {
                report.checked += 1;
                let mut push = |kind| {
                    report.violations.push(QmtViolation {
                        predicate: pred_name(p),
                        state: state_name(s),
                        kind,
                    })
                };
                if certain.contains(s) != self.theta[p].contains(s) {
                    push(QmtViolationKind::Proposition);
                }
                let ext = m.extension(p, s);
                let mut comp = ext.clone();
                comp.toggle_range(..);
                if &comp != m.extension(partner, s) {
                    push(QmtViolationKind::Complement);
                }
                if ext.is_clear() != self.theta[partner].contains(s) {
                    push(QmtViolationKind::Falsity);
                }
                if ext != &self.expected[p][s] {
                    push(QmtViolationKind::Rounding);
                }
            }
        }
        report
    }

    pub fn check_qmt(&self) -> QmtReport {
        self.check_qmt_on(&self.model)
    }

    /// First predicate whose orthocomplement does not act as classical
    /// negation on signatures.
    pub fn qmn_violation(&self) -> Option<PredicateId> {
        (0..self.model.predicates().len())
            .find(|&p| {
                let q = self.element_pred[self.lattice.ortho(self.pred_element[p])];
                self.model.predicate_signature(q) != &self.model.predicate_signature(p).complement()
            })
            .map(|p| self.model.predicates()[p].name.clone())
    }

    fn quantum_classes(&self, max_depth: Option<usize>) -> Result<Vec<Class<usize>>> {
        let l = &self.lattice;
        let seeds = self
            .inputs
            .iter()
            .map(|p| Ok((self.pred_element[self.model.predicate_index(p)?], Formula::Pred(p.clone()))))
            .collect::<Result<Vec<_>>>()?;
        let meet = |a: &usize, b: &usize| l.meet(*a, *b);
        let join = |a: &usize, b: &usize| l.join(*a, *b);
        let imp = |a: &usize, b: &usize| l.sasaki(*a, *b);
        let binaries: [BinaryRule<'_, usize>; 3] = [
            (Formula::qand, &meet),
            (Formula::qor, &join),
            (Formula::qimp, &imp),
        ];
        Ok(layered_classes(
            seeds,
            max_depth,
            (Formula::qnot, &|a: &usize| l.ortho(*a)),
            &binaries,
        ))
    }

    /// Classes of quantum formulas over the input properties, one per lattice
    /// element reached, with minimal-depth representatives.
    pub fn qwff_classes(&self, max_depth: usize) -> Result<Vec<Class<usize>>> {
        check_depth(max_depth, crate::formula::MAX_ENUMERATION_DEPTH)?;
        self.quantum_classes(Some(max_depth))
    }

    /// Quantum De Morgan laws, the definition of quantum implication, the
    /// agreement of `∧` and `∧_Q` on propositions, and the relations between
    /// propositions of testable formulas and the lattice operations.
    ///
    /// Every check is compositional, so operands range over formula classes
    /// up to `max_depth`; each class stands for all of its members.
    pub fn check_quantum_equivalences(&self, max_depth: usize) -> Result<QuantumEquivalenceReport> {
        check_depth(max_depth, MAX_RELATION_DEPTH)?;
        let m = &self.model;
        let sig = |f: &Formula| -> Result<Signature> { self.signature_of(f) };

        let qclasses = self.quantum_classes(Some(max_depth))?;
        let mut de_morgan = RelationStats::new("de_morgan");
        let mut implication = RelationStats::new("implication");
        for a in &qclasses {
            for b in &qclasses {
                let (x, y) = (&a.representative, &b.representative);
                let or = Formula::qor(x.clone(), y.clone());
                let or_dual = Formula::qnot(Formula::qand(Formula::qnot(x.clone()), Formula::qnot(y.clone())));
                de_morgan.record(sig(&or)? == sig(&or_dual)?, false, || format!("{} vs {}", or, or_dual));
                let and = Formula::qand(x.clone(), y.clone());
                let and_dual = Formula::qnot(Formula::qor(Formula::qnot(x.clone()), Formula::qnot(y.clone())));
                de_morgan.record(sig(&and)? == sig(&and_dual)?, false, || format!("{} vs {}", and, and_dual));
                let imp = Formula::qimp(x.clone(), y.clone());
                let unfolded = Formula::qor(Formula::qnot(x.clone()), Formula::qand(x.clone(), y.clone()));
                implication.record(sig(&imp)? == sig(&unfolded)?, false, || format!("{} vs {}", imp, unfolded));
            }
        }

        let classical = m.signature_classes(&self.inputs, max_depth)?;
        let testable: Vec<&Class<Signature>> = classical
            .iter()
            .filter(|c| witness_for_signature(m, &c.key, Scope::Properties).is_some())
            .collect();
        let mut conjunction = ConjunctionStats::default();
        let mut meet_image = RelationStats::new("meet_image");
        let mut join_image = RelationStats::new("join_image");
        let mut ortho_image = RelationStats::new("ortho_image");
        for a in &testable {
            let pa = m.certain_states(&a.key);
            let ortho = Formula::qnot(a.representative.clone());
            let po = self.proposition_of(&ortho)?;
            let bound = pa.complement();
            ortho_image.record(po.is_subset(&bound), po != bound, || ortho.to_string());
            for b in &testable {
                let pb = m.certain_states(&b.key);
                let and = Formula::and(a.representative.clone(), b.representative.clone());
                let qand = Formula::qand(a.representative.clone(), b.representative.clone());
                let sig_and = a.key.intersection(&b.key);
                let sig_qand = sig(&qand)?;
                let p_and = m.certain_states(&sig_and);
                let p_qand = m.certain_states(&sig_qand);
                conjunction.checked += 1;
                if p_and != p_qand {
                    conjunction.proposition_mismatches += 1;
                    conjunction.mismatch_witness.get_or_insert_with(|| and.to_string());
                }
                if sig_and != sig_qand {
                    conjunction.unequal_signatures += 1;
                    conjunction.signature_witness.get_or_insert_with(|| and.to_string());
                }
                let cap = pa.intersection(&pb);
                meet_image.record(p_qand == cap, false, || qand.to_string());
                let qor = Formula::qor(a.representative.clone(), b.representative.clone());
                let p_qor = self.proposition_of(&qor)?;
                let cup = pa.union(&pb);
                join_image.record(cup.is_subset(&p_qor), cup != p_qor, || qor.to_string());
            }
        }
        Ok(QuantumEquivalenceReport {
            depth: max_depth,
            qwff_classes: qclasses.len(),
            testable_classes: testable.len(),
            de_morgan,
            implication,
            conjunction,
            meet_image,
            join_image,
            ortho_image,
        })
    }

    /// Trichotomy of Q-truth and `QFalse(f) ⇔ QTrue(~q f)` for every
    /// quantum formula over the inputs up to `max_depth` and every state.
    pub fn check_q_truth(&self, max_depth: usize) -> Result<QTruthReport> {
        let formulas = enumerate_formulas(&self.inputs, max_depth, ConnectiveFamily::Quantum)?;
        let mut report = QTruthReport {
            depth: max_depth,
            ..QTruthReport::default()
        };
        for f in &formulas {
            let e = self.reduce_element(f)?;
            let neg = self.reduce_element(&Formula::qnot(f.clone()))?;
            let t = &self.theta[self.element_pred[e]];
            let fa = &self.theta[self.element_pred[self.lattice.ortho(e)]];
            for s in 0..self.model.states().len() {
                report.pairs_checked += 1;
                let value = self.q_truth_of_element(e, s);
                match value {
                    QTruthValue::QTrue => report.q_true += 1,
                    QTruthValue::QFalse => report.q_false += 1,
                    QTruthValue::QIndeterminate => report.q_indeterminate += 1,
                }
                let state = &self.model.states()[s].name;
                if t.contains(s) && fa.contains(s) {
                    report.violations.push(format!("{f} is both Q-true and Q-false in {state}"));
                }
                let neg_true = self.q_truth_of_element(neg, s) == QTruthValue::QTrue;
                if (value == QTruthValue::QFalse) != neg_true {
                    report
                        .violations
                        .push(format!("{f} in {state}: Q-false and Q-truth of its negation disagree"));
                }
            }
        }
        report.formulas = formulas.len();
        Ok(report)
    }

    /// Compares the classes of quantum formulas over the inputs, taken up to
    /// equal signatures, with the sub-ortholattice the input subspaces
    /// generate, element by element and operation by operation.
    pub fn check_lindenbaum(&self) -> Result<LindenbaumReport> {
        let gens: Vec<ExactSubspace> = self
            .inputs
            .iter()
            .map(|p| Ok(self.subspace(self.model.predicate_index(p)?).clone()))
            .collect::<Result<_>>()?;
        let sub = close(&gens, self.spec.closure_cap)?;
        let m = &self.model;

        // Fixpoint over formulas, keyed by the signature of their reduction.
        let mut reps: Vec<Formula> = Vec::new();
        let mut elems: Vec<usize> = Vec::new();
        let mut by_sig: HashMap<Signature, usize> = HashMap::new();
        let mut failure: Option<String> = None;
        let add = |f: Formula,
                       reps: &mut Vec<Formula>,
                       elems: &mut Vec<usize>,
                       by_sig: &mut HashMap<Signature, usize>,
                       failure: &mut Option<String>|
         -> Result<()> {
            let e = self.reduce_element(&f)?;
            let s = m.predicate_signature(self.element_pred[e]).clone();
            match by_sig.get(&s) {
                Some(&c) if elems[c] != e && failure.is_none() => {
                    *failure = Some(format!("{} and {} share a signature but not a subspace", reps[c], f));
                }
                Some(_) => {}
                None => {
                    by_sig.insert(s, reps.len());
                    reps.push(f);
                    elems.push(e);
                }
            }
            Ok(())
        };
        for p in &self.inputs {
            add(Formula::Pred(p.clone()), &mut reps, &mut elems, &mut by_sig, &mut failure)?;
        }
        let mut start = 0;
        while start < reps.len() {
            let end = reps.len();
            for i in start..end {
                add(Formula::qnot(reps[i].clone()), &mut reps, &mut elems, &mut by_sig, &mut failure)?;
            }
            for i in 0..end {
                for j in 0..end {
                    if i < start && j < start {
                        continue;
                    }
                    let (a, b) = (reps[i].clone(), reps[j].clone());
                    add(Formula::qand(a.clone(), b.clone()), &mut reps, &mut elems, &mut by_sig, &mut failure)?;
                    add(Formula::qor(a, b), &mut reps, &mut elems, &mut by_sig, &mut failure)?;
                }
            }
            start = end;
        }

        let classes = reps.len();
        let image: Vec<Option<usize>> = elems
            .iter()
            .map(|&e| sub.index_of(self.lattice.element(e)))
            .collect();
        let check = || -> Result<Option<String>> {
            if let Some(f) = failure.clone() {
                return Ok(Some(f));
            }
            if let Some(c) = image.iter().position(Option::is_none) {
                return Ok(Some(format!("{} lies outside the generated sublattice", reps[c])));
            }
            let image: Vec<usize> = image.iter().map(|i| i.expect("checked")).collect();
            if classes != sub.len() {
                return Ok(Some(format!(
                    "{} formula classes but {} sublattice elements",
                    classes,
                    sub.len()
                )));
            }
            let class_of = |f: &Formula| -> Result<usize> {
                let e = self.reduce_element(f)?;
                Ok(by_sig[m.predicate_signature(self.element_pred[e])])
            };
            for a in 0..classes {
                let c = class_of(&Formula::qnot(reps[a].clone()))?;
                if image[c] != sub.ortho(image[a]) {
                    return Ok(Some(format!("~q {} disagrees with the sublattice", reps[a])));
                }
                for b in 0..classes {
                    let (x, y) = (reps[a].clone(), reps[b].clone());
                    let cm = class_of(&Formula::qand(x.clone(), y.clone()))?;
                    if image[cm] != sub.meet(image[a], image[b]) {
                        return Ok(Some(format!("&q on {x}, {y} disagrees with the sublattice")));
                    }
                    let cj = class_of(&Formula::qor(x.clone(), y.clone()))?;
                    if image[cj] != sub.join(image[a], image[b]) {
                        return Ok(Some(format!("|q on {x}, {y} disagrees with the sublattice")));
                    }
                }
            }
            Ok(None)
        };
        let failure = check()?;
        Ok(LindenbaumReport {
            classes,
            sublattice_elements: sub.len(),
            isomorphic: failure.is_none(),
            failure,
        })
    }
}

// ---------------------------------------------------------------------------
// Checks that only need a model

/// Compares `≡` (equal signatures) with `≈` (equal propositions) over the
/// p-testable classical formulas on `leaves` up to `max_depth`. Also reports,
/// without judging, whether `<` and `≺` agree on the same formulas.
pub fn check_equiv_coincidence(m: &Model, leaves: &[PredicateId], max_depth: usize) -> Result<CoincidenceReport> {
    check_depth(max_depth, MAX_RELATION_DEPTH)?;
    let classes = m.signature_classes(leaves, max_depth)?;
    let testable: Vec<(&Class<Signature>, StateSet)> = classes
        .iter()
        .filter(|c| witness_for_signature(m, &c.key, Scope::Properties).is_some())
        .map(|c| (c, m.certain_states(&c.key)))
        .collect();
    let mut report = CoincidenceReport {
        depth: max_depth,
        classes: classes.len(),
        testable: testable.len(),
        ..CoincidenceReport::default()
    };
    for (i, (a, pa)) in testable.iter().enumerate() {
        for (b, pb) in &testable[i..] {
            report.pairs_checked += 1;
            // Distinct classes have distinct signatures.
            let same_sig = a.key == b.key;
            if (pa == pb) != same_sig && report.violations.len() < 5 {
                report
                    .violations
                    .push((a.representative.to_string(), b.representative.to_string()));
            }
            if (pa == pb) != same_sig {
                report.violation_count += 1;
            }
            for (x, px, y, py) in [(a, pa, b, pb), (b, pb, a, pa)] {
                if x.key.is_subset(&y.key) != px.is_subset(py) {
                    report.order_mismatches += 1;
                    report
                        .order_example
                        .get_or_insert_with(|| (x.representative.to_string(), y.representative.to_string()));
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QmtViolationKind {
    /// Certainly-true states differ from `θ`.
    Proposition,
    /// Paired extensions are not complements.
    Complement,
    /// Extension empty but the state is not in `θ` of the orthocomplement,
    /// or the reverse.
    Falsity,
    /// Extension differs from the rounding rule.
    Rounding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QmtViolation {
    pub predicate: String,
    pub state: String,
    pub kind: QmtViolationKind,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct QmtReport {
    pub checked: usize,
    pub violations: Vec<QmtViolation>,
}

impl QmtReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_kind(&self, kind: QmtViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CoincidenceReport {
    pub depth: usize,
    pub classes: usize,
    pub testable: usize,
    pub pairs_checked: usize,
    pub violation_count: usize,
    pub violations: Vec<(String, String)>,
    /// Pairs where `<` and `≺` disagree; informational.
    pub order_mismatches: usize,
    pub order_example: Option<(String, String)>,
}

impl CoincidenceReport {
    pub fn holds(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConjunctionStats {
    pub checked: usize,
    pub proposition_mismatches: usize,
    pub unequal_signatures: usize,
    pub mismatch_witness: Option<String>,
    /// A conjunction whose signature differs from that of its quantum
    /// counterpart although their propositions agree.
    pub signature_witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantumEquivalenceReport {
    pub depth: usize,
    pub qwff_classes: usize,
    pub testable_classes: usize,
    pub de_morgan: RelationStats,
    pub implication: RelationStats,
    pub conjunction: ConjunctionStats,
    pub meet_image: RelationStats,
    pub join_image: RelationStats,
    pub ortho_image: RelationStats,
}

impl QuantumEquivalenceReport {
    pub fn relations(&self) -> [&RelationStats; 5] {
        [
            &self.de_morgan,
            &self.implication,
            &self.meet_image,
            &self.join_image,
            &self.ortho_image,
        ]
    }

    pub fn violations(&self) -> usize {
        self.relations().iter().map(|r| r.violations).sum::<usize>() + self.conjunction.proposition_mismatches
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct QTruthReport {
    pub depth: usize,
    pub formulas: usize,
    pub pairs_checked: usize,
    pub q_true: usize,
    pub q_false: usize,
    pub q_indeterminate: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LindenbaumReport {
    pub classes: usize,
    pub sublattice_elements: usize,
    pub isomorphic: bool,
    pub failure: Option<String>,
}

// ---------------------------------------------------------------------------
// Loading

/// A model read from disk: either a plain table or one built from a
/// Hilbert-space spec.
#[derive(Clone, Debug)]
pub enum LoadedModel {
    Classical(Model),
    Quantum(Box<QmModel>),
}

impl LoadedModel {
    pub fn model(&self) -> &Model {
        match self {
            LoadedModel::Classical(m) => m,
            LoadedModel::Quantum(q) => q.model(),
        }
    }

    pub fn quantum(&self) -> Result<&QmModel> {
        match self {
            LoadedModel::Classical(_) => Err(Error::MissingTheta),
            LoadedModel::Quantum(q) => Ok(q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::propositions::{check_connective_relations, physical_proposition};
    use crate::scalar::ivec;

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    fn sid(n: &str) -> StateId {
        StateId::new(n).unwrap()
    }

    fn states(m: &Model, names: &[&str]) -> StateSet {
        StateSet::from_indices(
            m.states().len(),
            names.iter().map(|n| m.state_index_by_name(n).unwrap()),
        )
    }

    fn literal() -> QmModel {
        build_model(&QmSpec::qubit_example(false)).unwrap()
    }

    fn completed() -> QmModel {
        build_model(&QmSpec::qubit_example(true)).unwrap()
    }

    #[test]
    fn rounding_rule() {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(extension_size(&r(1, 2), 4), Some(2));
        assert_eq!(extension_size(&r(1, 8), 4), Some(1));
        assert_eq!(extension_size(&r(1, 100), 4), Some(1));
        assert_eq!(extension_size(&r(99, 100), 4), Some(3));
        assert_eq!(extension_size(&r(3, 8), 4), Some(2));
        assert_eq!(extension_size(&r(1, 1), 1), Some(1));
        assert_eq!(extension_size(&r(1, 2), 1), None);
    }

    #[test]
    fn example_literal_values() {
        let q = literal();
        let m = q.model();
        let ez = m.predicate_index_by_name("Ez").unwrap();
        assert_eq!(q.theta(ez), &states(m, &["Sz+"]));
        let sx = m.state_index_by_name("Sx+").unwrap();
        assert_eq!(m.extension(ez, sx).count_ones(..), 2);
        assert_eq!(q.born_value(ez, sx), &Rational::new(1.into(), 2.into()));
        let pairs: Vec<(String, usize)> = m
            .signature_pairs(m.predicate_signature(ez))
            .into_iter()
            .map(|(s, u)| (s.to_string(), u))
            .collect();
        let expected: Vec<(String, usize)> = [("Sz+", 0), ("Sz+", 1), ("Sz+", 2), ("Sz+", 3), ("Sx+", 0), ("Sx+", 1)]
            .iter()
            .map(|(s, u)| (s.to_string(), *u))
            .collect();
        assert_eq!(pairs, expected);
        assert_eq!(physical_proposition(m, &f("Ez")).unwrap().states, states(m, &["Sz+"]));
        assert_eq!(q.theta_of(&PredicateId::new("Ex").unwrap()).unwrap(), &states(m, &["Sx+"]));
        assert!(!m.check_cms());
        assert!(q.check_qmt().holds());
        assert!(q.witness_states().is_empty());
    }

    #[test]
    fn predicate_table_order_and_names() {
        let q = literal();
        let names: Vec<String> = q.model().predicates().iter().map(|p| p.name.to_string()).collect();
        assert_eq!(&names[..4], ["Ez", "Ex", "Ez_perp", "Ex_perp"]);
        assert_eq!(names.len(), 6);
        assert!(names[4].starts_with("Q_") && names[5].starts_with("Q_"));
        assert_eq!(q.subspace(4).rank() + q.subspace(5).rank(), 2);
        // Stable across builds.
        assert_eq!(names, literal().model().predicates().iter().map(|p| p.name.to_string()).collect::<Vec<_>>());
    }

    #[test]
    fn completion_adds_missing_atom() {
        let q = completed();
        let m = q.model();
        assert_eq!(q.witness_states().len(), 1);
        let w = q.witness_states().start;
        assert_eq!(Subspace::line(q.state_vector(w)).unwrap(), Subspace::line(&ivec(&[1, -1])).unwrap());
        assert!(m.states()[w].name.as_str().starts_with("W_"));
        let exp = m.predicate_index_by_name("Ex_perp").unwrap();
        assert_eq!(q.theta(exp), &StateSet::from_indices(4, [w]));
        assert!(q.check_qmt().holds());
    }

    #[test]
    fn q_truth_trichotomy_examples() {
        let q = literal();
        assert_eq!(q.q_truth(&f("Ez"), &sid("Sz+")).unwrap(), QTruthValue::QTrue);
        assert_eq!(q.q_truth(&f("Ez"), &sid("Sz-")).unwrap(), QTruthValue::QFalse);
        assert_eq!(q.q_truth(&f("Ez"), &sid("Sx+")).unwrap(), QTruthValue::QIndeterminate);
        assert_eq!(q.q_truth(&f("~q Ez"), &sid("Sz-")).unwrap(), QTruthValue::QTrue);
    }

    #[test]
    fn reductions() {
        let q = literal();
        assert_eq!(q.reduce_qwff(&f("~q Ez")).unwrap().as_str(), "Ez_perp");
        let zero = q.reduce_element(&f("Ez &q Ex")).unwrap();
        assert_eq!(q.lattice().element(zero).rank(), 0);
        let full = q.reduce_element(&f("Ez |q Ez_perp")).unwrap();
        assert_eq!(q.lattice().element(full).rank(), 2);
        // Sasaki arrow from a line to a different line is the orthocomplement.
        assert_eq!(q.reduce_qwff(&f("Ez ->q Ex")).unwrap().as_str(), "Ez_perp");
        // A testable classical subtree under a quantum node.
        assert_eq!(q.reduce_qwff(&f("~q (~Ez)")).unwrap().as_str(), "Ez");
        assert!(matches!(q.reduce_qwff(&f("~q (Ez | Ex)")), Err(Error::NotTestable(_))));
        assert!(matches!(q.reduce_qwff(&f("~(Ez &q Ex)")), Err(Error::QuantumUnderClassical(_))));
        assert!(matches!(q.reduce_qwff(&f("Nope &q Ez")), Err(Error::UnknownPredicate(_))));
    }

    #[test]
    fn tau_semantics() {
        let q = literal();
        let m = q.model();
        assert!(q.tau_eval(&f("Ez"), &sid("Sz+"), 0).unwrap());
        for st in m.states() {
            for u in 0..st.universe {
                assert!(!q.tau_eval(&f("Ez &q Ex"), &st.name, u).unwrap());
                assert!(q.tau_eval(&f("Ez |q Ez_perp"), &st.name, u).unwrap());
                assert_eq!(
                    q.tau_eval(&f("~Ez"), &st.name, u).unwrap(),
                    m.eval_open(&f("~Ez"), &st.name, u).unwrap()
                );
            }
        }
    }

    #[test]
    fn universe_too_small() {
        let mut spec = QmSpec::qubit_example(false);
        spec.universe = 1;
        assert!(matches!(build_model(&spec), Err(Error::UniverseTooSmall { universe: 1, .. })));
        // Without indeterminate Born values a single object suffices.
        spec.states.truncate(2);
        spec.properties.truncate(1);
        assert!(build_model(&spec).is_ok());
    }

    #[test]
    fn spec_validation() {
        let mut dup = QmSpec::qubit_example(false);
        dup.states.push((sid("Other"), ivec(&[2, 2])));
        assert!(matches!(build_model(&dup), Err(Error::InvalidSpec(_))));
        let mut zero = QmSpec::qubit_example(false);
        zero.states.push((sid("Z"), ivec(&[0, 0])));
        assert!(matches!(build_model(&zero), Err(Error::ZeroVector(Some(_)))));
        let mut same = QmSpec::qubit_example(false);
        same.properties.push((PredicateId::new("Ez2").unwrap(), Subspace::line(&ivec(&[3, 0])).unwrap()));
        assert!(matches!(build_model(&same), Err(Error::InvalidSpec(_))));
        let bad = r#"{"dim":2,"states":[{"name":"A","vector":["1"]}],"properties":[{"name":"E","basis":[["1","0"]]}]}"#;
        assert!(matches!(QmSpec::from_json(bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = QmSpec::qubit_example(false);
        let text = spec.to_json();
        assert_eq!(QmSpec::from_json(&text).unwrap(), spec);
        let minimal = r#"{"dim":2,"states":[{"name":"A","vector":["1","0+1i"]}],
            "properties":[{"name":"E","basis":[["1","0"]]}]}"#;
        let parsed = QmSpec::from_json(minimal).unwrap();
        assert_eq!(parsed.universe, DEFAULT_UNIVERSE);
        assert_eq!(parsed.closure_cap, DEFAULT_CLOSURE_CAP);
        assert!(parsed.complete_states);
    }

    #[test]
    fn closure_overflow_surfaces() {
        let mut spec = QmSpec::qubit_example(false);
        spec.dim = 3;
        spec.states = vec![(sid("A"), ivec(&[1, 0, 0]))];
        spec.properties = vec![
            (PredicateId::new("E").unwrap(), Subspace::line(&ivec(&[1, 1, 0])).unwrap()),
            (PredicateId::new("F").unwrap(), Subspace::line(&ivec(&[0, 1, 1])).unwrap()),
            (PredicateId::new("G").unwrap(), Subspace::line(&ivec(&[1, 2, 3])).unwrap()),
        ];
        spec.closure_cap = 16;
        match build_model(&spec) {
            Err(Error::ClosureOverflow { cap: 16, generators }) => {
                assert!(generators.starts_with("E = span{(1, 1, 0)}"), "{generators}");
                assert!(generators.contains("G = span"));
            }
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn fault_injection_is_reported_with_witness() {
        let q = literal();
        let mut m = q.model().clone();
        let ez = m.predicate_index_by_name("Ez").unwrap();
        let sx = m.state_index_by_name("Sx+").unwrap();
        m.replace_extension_unchecked(ez, sx, &[0, 1, 2, 3]);
        let report = q.check_qmt_on(&m);
        assert!(!report.holds());
        assert!(report.violations.iter().any(|v| v.predicate == "Ez"
            && v.state == "Sx+"
            && v.kind == QmtViolationKind::Proposition));
    }

    #[test]
    fn coincidence_fails_without_completion_and_holds_with_it() {
        let q = literal();
        let report = check_equiv_coincidence(q.model(), q.inputs(), 3).unwrap();
        assert!(!report.holds());
        let q = completed();
        let report = check_equiv_coincidence(q.model(), q.inputs(), 3).unwrap();
        assert!(report.holds(), "{:?}", report.violations);
        assert!(report.testable > 0);
    }

    #[test]
    fn quantum_equivalences_on_example() {
        let q = completed();
        let report = q.check_quantum_equivalences(3).unwrap();
        assert_eq!(report.violations(), 0);
        assert!(report.conjunction.unequal_signatures > 0);
        assert!(report.join_image.strict > 0);
        let m = q.model();
        let p_or = q.proposition_of(&f("Ez |q Ex")).unwrap();
        assert_eq!(p_or, StateSet::full(m.states().len()));
        let union = q.proposition_of(&f("Ez")).unwrap().union(&q.proposition_of(&f("Ex")).unwrap());
        assert!(union.is_subset(&p_or) && union != p_or);
        // Ez ∧ Ex and Ez ∧_Q Ex have the same empty proposition but not the
        // same signature.
        let and = f("Ez & Ex");
        let qand = f("Ez &q Ex");
        assert_eq!(q.proposition_of(&and).unwrap(), q.proposition_of(&qand).unwrap());
        assert!(q.proposition_of(&and).unwrap().is_empty());
        assert_ne!(q.signature_of(&and).unwrap(), q.signature_of(&qand).unwrap());
    }

    #[test]
    fn strict_join_in_literal_example() {
        let q = literal();
        let m = q.model();
        let p = physical_proposition(m, &f("Ez | Ez_perp")).unwrap().states;
        assert_eq!(p, states(m, &["Sz+", "Sz-", "Sx+"]));
        let union = physical_proposition(m, &f("Ez"))
            .unwrap()
            .states
            .union(&physical_proposition(m, &f("Ez_perp")).unwrap().states);
        assert_eq!(union, states(m, &["Sz+", "Sz-"]));
        let ids: Vec<PredicateId> = ["Ez", "Ez_perp"].iter().map(|n| PredicateId::new(n).unwrap()).collect();
        let report = check_connective_relations(m, &ids, 2).unwrap();
        assert_eq!(report.violations(), 0);
        assert!(report.relation("join").unwrap().strict > 0);
    }

    #[test]
    fn q_truth_and_qmn_checks() {
        for q in [literal(), completed()] {
            let report = q.check_q_truth(2).unwrap();
            assert!(report.violations.is_empty(), "{:?}", report.violations);
            assert_eq!(report.pairs_checked, report.q_true + report.q_false + report.q_indeterminate);
            assert!(report.q_indeterminate > 0);
            assert_eq!(q.qmn_violation(), None);
        }
    }

    #[test]
    fn lindenbaum_isomorphism() {
        let report = completed().check_lindenbaum().unwrap();
        assert!(report.isomorphic, "{:?}", report.failure);
        assert_eq!(report.classes, 6);
        // Ez alone generates a four-element Boolean sublattice.
        let mut spec = QmSpec::qubit_example(true);
        spec.properties.truncate(1);
        let report = build_model(&spec).unwrap().check_lindenbaum().unwrap();
        assert!(report.isomorphic);
        assert_eq!(report.sublattice_elements, 4);
    }

    #[test]
    fn loaded_model_without_theta() {
        let q = literal();
        let classical = LoadedModel::Classical(q.model().clone());
        assert!(matches!(classical.quantum(), Err(Error::MissingTheta)));
        let quantum = LoadedModel::Quantum(Box::new(q));
        assert!(quantum.quantum().is_ok());
    }
}
