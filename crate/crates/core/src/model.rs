//! Finite Tarskian structures for the classical observative languages.
//!
//! A [`Model`] has a table of predicates, a list of states, a finite universe
//! `{0, .., n_S - 1}` per state and an extension per (state, predicate).
//! Interpretations of the single variable are all choice functions
//! `S ↦ u ∈ U_S`; since every formula has one free variable, truth under an
//! interpretation depends only on the object it picks in the state at hand.
//! The disjoint union `Ω = {(S, u)}` therefore indexes everything: a formula's
//! [`Signature`] is the set of pairs where it holds, and the logical preorder
//! is signature inclusion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, PredicateId};

pub const DEFAULT_UNIVERSE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(Arc<str>);

impl StateId {
    pub fn new(name: &str) -> Result<Self> {
        if name.is_empty() || name.chars().any(|c| c.is_control() || c.is_whitespace()) {
            return Err(Error::InvalidModel(format!("{name:?} is not a valid state name")));
        }
        Ok(StateId(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Set of `(state, object)` pairs, as a bitset over `Ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(FixedBitSet);

impl Signature {
    pub fn empty(omega: usize) -> Self {
        Signature(FixedBitSet::with_capacity(omega))
    }

    pub fn full(omega: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(omega);
        b.insert_range(..);
        Signature(b)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature(&self.0 | &other.0)
    }

    pub fn intersection(&self, other: &Signature) -> Signature {
        Signature(&self.0 & &other.0)
    }

    pub fn complement(&self) -> Signature {
        let mut b = self.0.clone();
        b.toggle_range(..);
        Signature(b)
    }

    /// Signature with the given points of `Ω`, indexed state by state.
    pub fn from_bits(bits: FixedBitSet) -> Signature {
        Signature(bits)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.0
    }
}

/// Set of states, as a bitset over state indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        StateSet(b)
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        b.extend(indices);
        StateSet(b)
    }

    pub fn contains(&self, s: usize) -> bool {
        self.0.contains(s)
    }

    pub fn insert(&mut self, s: usize) {
        self.0.insert(s)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet(&self.0 | &other.0)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        StateSet(&self.0 & &other.0)
    }

    pub fn complement(&self) -> StateSet {
        let mut b = self.0.clone();
        b.toggle_range(..);
        StateSet(b)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    /// Literal such as `{Sz+, Sx+}` using the model's state names.
    pub fn literal(&self, model: &Model) -> String {
        let names: Vec<&str> = self.indices().map(|i| model.states[i].name.as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateInfo {
    pub name: PredicateId,
    pub is_property: bool,
    pub ortho: Option<PredicateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateInfo {
    pub name: StateId,
    pub universe: usize,
}

/// Input description of one state: its universe size and the extension of
/// each predicate (absent predicates have empty extension).
#[derive(Clone, Debug, Default)]
pub struct StateSpec {
    pub name: String,
    pub universe: usize,
    pub extensions: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Model {
    predicates: Vec<PredicateInfo>,
    pred_index: HashMap<PredicateId, usize>,
    states: Vec<StateInfo>,
    state_index: HashMap<StateId, usize>,
    offsets: Vec<usize>,
    omega: usize,
    /// `extensions[p][s]` over `0..n_s`.
    extensions: Vec<Vec<FixedBitSet>>,
    pred_sigs: Vec<Signature>,
}

impl Model {
    /// Builds and validates a model.
    pub fn new(predicates: Vec<PredicateInfo>, states: Vec<StateSpec>) -> Result<Model> {
        let mut pred_index = HashMap::new();
        for (i, p) in predicates.iter().enumerate() {
            if pred_index.insert(p.name.clone(), i).is_some() {
                return Err(Error::InvalidModel(format!("duplicate predicate {}", p.name)));
            }
        }
        for p in &predicates {
            if let Some(partner) = &p.ortho {
                let j = *pred_index.get(partner).ok_or_else(|| {
                    Error::InvalidModel(format!(
                        "predicate {}: ortho partner {partner} is not declared",
                        p.name
                    ))
                })?;
                if predicates[j].ortho.as_ref() != Some(&p.name) {
                    return Err(Error::InvalidModel(format!(
                        "predicate {}: ortho partner {partner} does not point back",
                        p.name
                    )));
                }
                if partner == &p.name {
                    return Err(Error::InvalidModel(format!(
                        "predicate {} is its own ortho partner",
                        p.name
                    )));
                }
            }
        }

        let mut state_infos = Vec::with_capacity(states.len());
        let mut state_index = HashMap::new();
        let mut extensions = vec![Vec::with_capacity(states.len()); predicates.len()];
        for (si, st) in states.iter().enumerate() {
            let name = StateId::new(&st.name)?;
            if state_index.insert(name.clone(), si).is_some() {
                return Err(Error::InvalidModel(format!("duplicate state {name}")));
            }
            if st.universe == 0 {
                return Err(Error::InvalidModel(format!("state {name}: universe must be at least 1")));
            }
            for key in st.extensions.keys() {
                let known = PredicateId::new(key)
                    .ok()
                    .is_some_and(|k| pred_index.contains_key(&k));
                if !known {
                    return Err(Error::InvalidModel(format!(
                        "state {name}: extension given for unknown predicate {key}"
                    )));
                }
            }
            for (pi, p) in predicates.iter().enumerate() {
                let mut bits = FixedBitSet::with_capacity(st.universe);
                if let Some(objs) = st.extensions.get(p.name.as_str()) {
                    for &u in objs {
                        if u >= st.universe {
                            return Err(Error::InvalidModel(format!(
                                "state {name}, predicate {}: object {u} outside universe of size {}",
                                p.name, st.universe
                            )));
                        }
                        bits.insert(u);
                    }
                }
                extensions[pi].push(bits);
            }
            state_infos.push(StateInfo {
                name,
                universe: st.universe,
            });
        }

        let model = Self::assemble(predicates, pred_index, state_infos, state_index, extensions);
        if let Some((p, s)) = model.ortho_pair_violation() {
            return Err(Error::InvalidModel(format!(
                "state {}, predicate {}: extension is not the complement of its ortho partner {}",
                model.states[s].name,
                model.predicates[p].name,
                model.predicates[p].ortho.as_ref().expect("paired")
            )));
        }
        Ok(model)
    }

    fn assemble(
        predicates: Vec<PredicateInfo>,
        pred_index: HashMap<PredicateId, usize>,
        states: Vec<StateInfo>,
        state_index: HashMap<StateId, usize>,
        extensions: Vec<Vec<FixedBitSet>>,
    ) -> Model {
        let mut offsets = Vec::with_capacity(states.len());
        let mut omega = 0;
        for s in &states {
            offsets.push(omega);
            omega += s.universe;
        }
        let mut model = Model {
            predicates,
            pred_index,
            states,
            state_index,
            offsets,
            omega,
            extensions,
            pred_sigs: Vec::new(),
        };
        model.pred_sigs = (0..model.predicates.len())
            .map(|p| model.compute_predicate_signature(p))
            .collect();
        model
    }

    fn compute_predicate_signature(&self, p: usize) -> Signature {
        let mut sig = Signature::empty(self.omega);
        for (s, ext) in self.extensions[p].iter().enumerate() {
            for u in ext.ones() {
                sig.0.insert(self.offsets[s] + u);
            }
        }
        sig
    }

    /// First `(predicate, state)` where paired extensions are not complements.
    pub fn ortho_pair_violation(&self) -> Option<(usize, usize)> {
        for (p, info) in self.predicates.iter().enumerate() {
            let Some(partner) = &info.ortho else { continue };
            let q = self.pred_index[partner];
            for s in 0..self.states.len() {
                let mut comp = self.extensions[p][s].clone();
                comp.toggle_range(..);
                if comp != self.extensions[q][s] {
                    return Some((p, s));
                }
            }
        }
        None
    }

    /// Overwrites one extension without any validation. Used to inject faults.
    pub fn replace_extension_unchecked(&mut self, predicate: usize, state: usize, objects: &[usize]) {
        let mut bits = FixedBitSet::with_capacity(self.states[state].universe);
        bits.extend(objects.iter().copied());
        self.extensions[predicate][state] = bits;
        self.pred_sigs[predicate] = self.compute_predicate_signature(predicate);
    }

    pub fn predicates(&self) -> &[PredicateInfo] {
        &self.predicates
    }

    pub fn states(&self) -> &[StateInfo] {
        &self.states
    }

    pub fn predicate_ids(&self) -> Vec<PredicateId> {
        self.predicates.iter().map(|p| p.name.clone()).collect()
    }

    pub fn property_ids(&self) -> Vec<PredicateId> {
        self.predicates
            .iter()
            .filter(|p| p.is_property)
            .map(|p| p.name.clone())
            .collect()
    }

    pub fn predicate_index(&self, id: &PredicateId) -> Result<usize> {
        self.pred_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPredicate(id.to_string()))
    }

    pub fn predicate_index_by_name(&self, name: &str) -> Result<usize> {
        let id = PredicateId::new(name).map_err(|_| Error::UnknownPredicate(name.to_string()))?;
        self.predicate_index(&id)
    }

    pub fn state_index(&self, id: &StateId) -> Result<usize> {
        self.state_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    }

    pub fn state_index_by_name(&self, name: &str) -> Result<usize> {
        let id = StateId::new(name).map_err(|_| Error::UnknownState(name.to_string()))?;
        self.state_index(&id)
    }

    pub fn universe(&self, state: usize) -> usize {
        self.states[state].universe
    }

    pub fn omega_len(&self) -> usize {
        self.omega
    }

    pub fn extension(&self, predicate: usize, state: usize) -> &FixedBitSet {
        &self.extensions[predicate][state]
    }

    pub fn predicate_signature(&self, predicate: usize) -> &Signature {
        &self.pred_sigs[predicate]
    }

    pub fn ortho_partner(&self, predicate: usize) -> Option<usize> {
        self.predicates[predicate]
            .ortho
            .as_ref()
            .map(|q| self.pred_index[q])
    }

    /// `σ_S^ρ(f)` with `ρ_S(x) = u`.
    pub fn eval_open(&self, f: &Formula, state: &StateId, u: usize) -> Result<bool> {
        let s = self.state_index(state)?;
        self.eval_open_at(f, s, u)
    }

    pub fn eval_open_at(&self, f: &Formula, s: usize, u: usize) -> Result<bool> {
        if u >= self.states[s].universe {
            return Err(Error::ObjectOutOfRange {
                state: self.states[s].name.to_string(),
                object: u,
                universe: self.states[s].universe,
            });
        }
        self.eval_rec(f, s, u)
    }

    fn eval_rec(&self, f: &Formula, s: usize, u: usize) -> Result<bool> {
        Ok(match f {
            Formula::Pred(p) => self.extensions[self.predicate_index(p)?][s].contains(u),
            Formula::Not(a) => !self.eval_rec(a, s, u)?,
            Formula::And(a, b) => self.eval_rec(a, s, u)? && self.eval_rec(b, s, u)?,
            Formula::Or(a, b) => self.eval_rec(a, s, u)? || self.eval_rec(b, s, u)?,
            _ => return Err(Error::QuantumNodeInClassicalEval(f.to_string())),
        })
    }

    /// `{(S, u) : σ_S^ρ(f) = t when ρ_S(x) = u}`.
    pub fn signature(&self, f: &Formula) -> Result<Signature> {
        Ok(match f {
            Formula::Pred(p) => self.pred_sigs[self.predicate_index(p)?].clone(),
            Formula::Not(a) => self.signature(a)?.complement(),
            Formula::And(a, b) => self.signature(a)?.intersection(&self.signature(b)?),
            Formula::Or(a, b) => self.signature(a)?.union(&self.signature(b)?),
            _ => return Err(Error::QuantumNodeInClassicalEval(f.to_string())),
        })
    }

    /// Pairs of a signature, with state names.
    pub fn signature_pairs(&self, sig: &Signature) -> Vec<(StateId, usize)> {
        sig.0
            .ones()
            .map(|i| {
                let s = self.offsets.partition_point(|&o| o <= i) - 1;
                (self.states[s].name.clone(), i - self.offsets[s])
            })
            .collect()
    }

    /// True iff every object of state `s` lies in `sig`.
    pub fn block_full(&self, sig: &Signature, s: usize) -> bool {
        let lo = self.offsets[s];
        (lo..lo + self.states[s].universe).all(|i| sig.0.contains(i))
    }

    pub fn block_empty(&self, sig: &Signature, s: usize) -> bool {
        let lo = self.offsets[s];
        (lo..lo + self.states[s].universe).all(|i| !sig.0.contains(i))
    }

    /// States where a formula with this signature is certainly true.
    pub fn certain_states(&self, sig: &Signature) -> StateSet {
        StateSet::from_indices(
            self.states.len(),
            (0..self.states.len()).filter(|&s| self.block_full(sig, s)),
        )
    }

    /// Truth of the physical sentence `(∀x) f` in `state`.
    pub fn eval_universal(&self, f: &Formula, state: &StateId) -> Result<bool> {
        let s = self.state_index(state)?;
        Ok(self.block_full(&self.signature(f)?, s))
    }

    pub fn logical_leq(&self, f: &Formula, g: &Formula) -> Result<bool> {
        Ok(self.signature(f)?.is_subset(&self.signature(g)?))
    }

    pub fn physical_leq(&self, f: &Formula, g: &Formula) -> Result<bool> {
        let pf = self.certain_states(&self.signature(f)?);
        let pg = self.certain_states(&self.signature(g)?);
        Ok(pf.is_subset(&pg))
    }

    /// First `(predicate, state)` where a property extension is neither full
    /// nor empty.
    pub fn cms_violation(&self) -> Option<(PredicateId, StateId)> {
        for (p, info) in self.predicates.iter().enumerate() {
            if !info.is_property {
                continue;
            }
            for (s, st) in self.states.iter().enumerate() {
                let k = self.extensions[p][s].count_ones(..);
                if k != 0 && k != st.universe {
                    return Some((info.name.clone(), st.name.clone()));
                }
            }
        }
        None
    }

    /// Every property extension is all of `U_S` or empty.
    pub fn check_cms(&self) -> bool {
        self.cms_violation().is_none()
    }

    // ----- file format -----

    pub fn from_file(file: ModelFile) -> Result<Model> {
        let mut predicates = Vec::with_capacity(file.predicates.len());
        for p in &file.predicates {
            predicates.push(PredicateInfo {
                name: PredicateId::new(&p.name)?,
                is_property: p.property,
                ortho: p.ortho.as_deref().map(PredicateId::new).transpose()?,
            });
        }
        let states = file
            .states
            .into_iter()
            .map(|s| StateSpec {
                name: s.name,
                universe: s.universe,
                extensions: s.extensions,
            })
            .collect();
        Model::new(predicates, states)
    }

    pub fn from_json(text: &str) -> Result<Model> {
        let file: ModelFile = serde_json::from_str(text)?;
        Model::from_file(file)
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            predicates: self
                .predicates
                .iter()
                .map(|p| PredicateEntry {
                    name: p.name.to_string(),
                    property: p.is_property,
                    ortho: p.ortho.as_ref().map(|o| o.to_string()),
                })
                .collect(),
            states: self
                .states
                .iter()
                .enumerate()
                .map(|(s, st)| StateEntry {
                    name: st.name.to_string(),
                    universe: st.universe,
                    extensions: self
                        .predicates
                        .iter()
                        .enumerate()
                        .map(|(p, info)| (info.name.to_string(), self.extensions[p][s].ones().collect()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModelFile {
    pub predicates: Vec<PredicateEntry>,
    pub states: Vec<StateEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PredicateEntry {
    pub name: String,
    #[serde(default = "default_true")]
    pub property: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ortho: Option<String>,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StateEntry {
    pub name: String,
    pub universe: usize,
    #[serde(default)]
    pub extensions: BTreeMap<String, Vec<usize>>,
}

/// Classical-mechanics model: each property is true of every object of a
/// state or of none. Every predicate gets an ortho partner `<name>_perp` with
/// the complemented column.
pub fn build_cm_model(states: &[(&str, usize)], property_truth: &[(&str, Vec<bool>)]) -> Result<Model> {
    let mut predicates = Vec::new();
    for (name, column) in property_truth {
        if column.len() != states.len() {
            return Err(Error::InvalidModel(format!(
                "predicate {name}: truth column has {} entries for {} states",
                column.len(),
                states.len()
            )));
        }
        let id = PredicateId::new(name)?;
        let perp = PredicateId::new(&format!("{name}_perp"))?;
        predicates.push(PredicateInfo {
            name: id.clone(),
            is_property: true,
            ortho: Some(perp.clone()),
        });
        predicates.push(PredicateInfo {
            name: perp,
            is_property: true,
            ortho: Some(id),
        });
    }
    let specs = states
        .iter()
        .enumerate()
        .map(|(s, &(name, universe))| {
            let mut extensions = BTreeMap::new();
            for (pname, column) in property_truth {
                let all: Vec<usize> = (0..universe).collect();
                let (on, off) = if column[s] { ("", "_perp") } else { ("_perp", "") };
                extensions.insert(format!("{pname}{on}"), all);
                extensions.insert(format!("{pname}{off}"), Vec::new());
            }
            StateSpec {
                name: name.to_string(),
                universe,
                extensions,
            }
        })
        .collect();
    Model::new(predicates, specs)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::formula::parse;

    pub(crate) fn one_state(ext_e: &[usize], n: usize) -> Model {
        let mut ext = BTreeMap::new();
        ext.insert("E".to_string(), ext_e.to_vec());
        Model::new(
            vec![
                PredicateInfo {
                    name: PredicateId::new("E").unwrap(),
                    is_property: true,
                    ortho: None,
                },
                PredicateInfo {
                    name: PredicateId::new("F").unwrap(),
                    is_property: true,
                    ortho: None,
                },
            ],
            vec![StateSpec {
                name: "S".into(),
                universe: n,
                extensions: ext,
            }],
        )
        .unwrap()
    }

    fn s() -> StateId {
        StateId::new("S").unwrap()
    }

    #[test]
    fn open_evaluation() {
        let m = one_state(&[0, 2], 3);
        assert!(m.eval_open(&parse("E").unwrap(), &s(), 0).unwrap());
        assert!(m.eval_open(&parse("~E").unwrap(), &s(), 1).unwrap());
        for u in 0..3 {
            assert!(!m.eval_open(&parse("E & ~E").unwrap(), &s(), u).unwrap());
        }
    }

    #[test]
    fn evaluation_errors() {
        let m = one_state(&[0], 2);
        assert!(matches!(
            m.eval_open(&parse("E").unwrap(), &s(), 2),
            Err(Error::ObjectOutOfRange { object: 2, universe: 2, .. })
        ));
        assert!(matches!(
            m.eval_open(&parse("G").unwrap(), &s(), 0),
            Err(Error::UnknownPredicate(_))
        ));
        assert!(matches!(
            m.eval_open(&parse("E &q F").unwrap(), &s(), 0),
            Err(Error::QuantumNodeInClassicalEval(_))
        ));
        assert!(matches!(
            m.signature(&parse("~q E").unwrap()),
            Err(Error::QuantumNodeInClassicalEval(_))
        ));
    }

    #[test]
    fn universal_truth_gap() {
        let m = one_state(&[0], 2);
        let e = parse("E").unwrap();
        assert!(!m.eval_universal(&e, &s()).unwrap());
        assert!(m.eval_open(&e, &s(), 0).unwrap());
        assert!(one_state(&[0, 1], 2).eval_universal(&e, &s()).unwrap());
        assert!(!one_state(&[], 2).eval_universal(&e, &s()).unwrap());
    }

    #[test]
    fn tautology_signature_is_omega() {
        let m = one_state(&[1], 3);
        assert_eq!(m.signature(&parse("E | ~E").unwrap()).unwrap(), Signature::full(3));
        let ef = m.signature(&parse("E & F").unwrap()).unwrap();
        let e = m.signature(&parse("E").unwrap()).unwrap();
        let f = m.signature(&parse("F").unwrap()).unwrap();
        assert_eq!(ef, e.intersection(&f));
    }

    #[test]
    fn physical_without_logical_order() {
        // ext(E) = {0}, ext(F) = ∅, n = 2: E is never certainly true, so E ≺ F
        // holds vacuously while E < F fails at (S, 0).
        let m = one_state(&[0], 2);
        let e = parse("E").unwrap();
        let f = parse("F").unwrap();
        assert!(m.physical_leq(&e, &f).unwrap());
        assert!(!m.logical_leq(&e, &f).unwrap());
        assert!(m.logical_leq(&parse("E & F").unwrap(), &e).unwrap());
    }

    #[test]
    fn validation_names_state_and_predicate() {
        let file = r#"{"predicates":[{"name":"E","property":true}],
            "states":[{"name":"S1","universe":2,"extensions":{"E":[0,2]}}]}"#;
        let err = Model::from_json(file).unwrap_err().to_string();
        assert!(err.contains("S1") && err.contains("E"), "{err}");

        let file = r#"{"predicates":[{"name":"E","ortho":"Ep"},{"name":"Ep","ortho":"E"}],
            "states":[{"name":"S1","universe":2,"extensions":{"E":[0],"Ep":[0,1]}}]}"#;
        let err = Model::from_json(file).unwrap_err().to_string();
        assert!(err.contains("S1") && err.contains("E"), "{err}");

        let file = r#"{"predicates":[{"name":"E","ortho":"Ep"},{"name":"Ep"}],
            "states":[{"name":"S1","universe":2}]}"#;
        assert!(Model::from_json(file).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = build_cm_model(&[("S1", 2), ("S2", 3)], &[("E", vec![true, false])]).unwrap();
        let back = Model::from_json(&m.to_json()).unwrap();
        assert_eq!(back.to_file(), m.to_file());
    }

    #[test]
    fn cm_builder() {
        let m = build_cm_model(&[("S", 3)], &[("E", vec![true])]).unwrap();
        let e = m.predicate_index_by_name("E").unwrap();
        assert_eq!(m.extension(e, 0).count_ones(..), 3);
        assert!(m.check_cms());
        let m2 = build_cm_model(&[("S1", 2), ("S2", 2)], &[("E", vec![true, false])]).unwrap();
        let sig = m2.signature(&parse("E").unwrap()).unwrap();
        assert_eq!(
            m2.certain_states(&sig),
            StateSet::from_indices(2, [0])
        );
        assert!(m2.block_empty(&sig, 1));
        assert!(m2.ortho_pair_violation().is_none());
    }

    #[test]
    fn cms_detects_partial_extension() {
        let m = one_state(&[0], 2);
        assert_eq!(
            m.cms_violation(),
            Some((PredicateId::new("E").unwrap(), s()))
        );
    }
}
