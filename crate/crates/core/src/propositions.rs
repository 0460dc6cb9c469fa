//! Physical propositions: the set of states in which a formula is certainly
//! true, testability of formulas, proposition posets, and the relations
//! between classical connectives and set operations on propositions.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::formula::{check_depth, Formula, PredicateId};
use crate::model::{Model, Signature, StateSet};
use crate::quotient::{verify_boolean_sets, BooleanReport, LawViolation};

pub const MAX_RELATION_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhysicalProposition {
    pub states: StateSet,
    pub provenance: Formula,
}

pub fn physical_proposition(m: &Model, f: &Formula) -> Result<PhysicalProposition> {
    Ok(PhysicalProposition {
        states: m.certain_states(&m.signature(f)?),
        provenance: f.clone(),
    })
}

/// Which predicates may witness testability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scope {
    /// Any predicate (effects).
    Effects,
    /// Property predicates only (p-testability).
    Properties,
}

/// First predicate, in table order, whose signature equals `sig`.
pub fn witness_for_signature(m: &Model, sig: &Signature, scope: Scope) -> Option<PredicateId> {
    m.predicates()
        .iter()
        .enumerate()
        .filter(|(_, p)| scope == Scope::Effects || p.is_property)
        .find(|(i, _)| m.predicate_signature(*i) == sig)
        .map(|(_, p)| p.name.clone())
}

/// The elementary formula `f` is logically equivalent to, if any.
pub fn testable(m: &Model, f: &Formula, scope: Scope) -> Result<Option<PredicateId>> {
    Ok(witness_for_signature(m, &m.signature(f)?, scope))
}

/// State sets ordered by inclusion.
#[derive(Clone, Debug)]
pub struct PropositionPoset {
    pub elements: Vec<StateSet>,
    /// First formula seen for each element.
    pub labels: Vec<Formula>,
    n_states: usize,
}

impl PropositionPoset {
    pub fn from_sets(n_states: usize, items: impl IntoIterator<Item = (StateSet, Formula)>) -> Self {
        let mut elements = Vec::new();
        let mut labels = Vec::new();
        for (s, f) in items {
            if !elements.contains(&s) {
                elements.push(s);
                labels.push(f);
            }
        }
        PropositionPoset {
            elements,
            labels,
            n_states,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.elements[a].is_subset(&self.elements[b])
    }

    /// Least upper bound inside the element set.
    pub fn lub(&self, a: usize, b: usize) -> Option<usize> {
        let uppers: Vec<usize> = (0..self.len())
            .filter(|&c| self.leq(a, c) && self.leq(b, c))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&c| uppers.iter().all(|&d| self.leq(c, d)))
    }

    /// Greatest lower bound inside the element set.
    pub fn glb(&self, a: usize, b: usize) -> Option<usize> {
        let lowers: Vec<usize> = (0..self.len())
            .filter(|&c| self.leq(c, a) && self.leq(c, b))
            .collect();
        lowers
            .iter()
            .copied()
            .find(|&c| lowers.iter().all(|&d| self.leq(d, c)))
    }

    /// First pair without a least upper bound or greatest lower bound.
    pub fn lattice_failure(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (a..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.lub(a, b).is_none() || self.glb(a, b).is_none())
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice_failure().is_none()
    }

    /// Checks that the elements form a Boolean algebra of sets: lattice
    /// operations are intersection and union, and complements stay inside.
    pub fn verify_boolean(&self) -> std::result::Result<BooleanReport, LawViolation> {
        verify_boolean_sets(
            &self.elements,
            &StateSet::empty(self.n_states),
            &StateSet::full(self.n_states),
            |a, b| a.intersection(b),
            |a, b| a.union(b),
            |a| a.complement(),
        )
    }

    /// Covering pairs `(lower, upper)`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                if !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b)) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }
}

pub fn proposition_poset(m: &Model, formulas: &[Formula]) -> Result<PropositionPoset> {
    let items = formulas
        .iter()
        .map(|f| Ok((m.certain_states(&m.signature(f)?), f.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropositionPoset::from_sets(m.states().len(), items))
}

/// Tally for one connective relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationStats {
    pub relation: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// Cases where the inclusion held strictly.
    pub strict: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(skip)]
    pub strict_example: Option<String>,
}

impl RelationStats {
    pub(crate) fn new(relation: &'static str) -> Self {
        RelationStats {
            relation,
            checked: 0,
            violations: 0,
            strict: 0,
            witnesses: Vec::new(),
            strict_example: None,
        }
    }

    /// Records one check: `holds` is the relation, `strict` whether the
    /// inclusion was proper.
    pub(crate) fn record(&mut self, holds: bool, strict: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !holds {
            self.violations += 1;
            if self.witnesses.len() < 5 {
                self.witnesses.push(describe());
            }
        } else if strict {
            self.strict += 1;
            if self.strict_example.is_none() {
                self.strict_example = Some(describe());
            }
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{:<12} checked {:>7}  violations {:>3}  strict {:>7}",
            self.relation, self.checked, self.violations, self.strict
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectiveReport {
    pub depth: usize,
    pub classes: usize,
    pub relations: Vec<RelationStats>,
}

impl ConnectiveReport {
    pub fn violations(&self) -> usize {
        self.relations.iter().map(|r| r.violations).sum()
    }

    pub fn relation(&self, name: &str) -> Option<&RelationStats> {
        self.relations.iter().find(|r| r.relation == name)
    }
}

/// Checks, for formulas over `leaves` up to `max_depth`:
/// `α ≡ ¬β ⇒ p_α ⊆ S ∖ p_β`, `α ≡ β ∧ γ ⇒ p_α = p_β ∩ p_γ`,
/// `α ≡ β ∨ γ ⇒ p_α ⊇ p_β ∪ p_γ`.
///
/// Propositions depend only on signatures, so the sweep runs over the
/// `≡`-classes of `β` and `γ`; each class stands for all of its formulas.
pub fn check_connective_relations(
    m: &Model,
    leaves: &[PredicateId],
    max_depth: usize,
) -> Result<ConnectiveReport> {
    check_depth(max_depth, MAX_RELATION_DEPTH)?;
    let classes = m.signature_classes(leaves, max_depth)?;
    let props: Vec<StateSet> = classes.iter().map(|c| m.certain_states(&c.key)).collect();
    let mut cache: HashMap<Signature, StateSet> = HashMap::new();
    let mut prop_of = |sig: Signature| -> StateSet {
        cache
            .entry(sig)
            .or_insert_with_key(|s| m.certain_states(s))
            .clone()
    };

    let mut neg = RelationStats::new("negation");
    let mut meet = RelationStats::new("meet");
    let mut join = RelationStats::new("join");
    for (b, cb) in classes.iter().enumerate() {
        let pa = prop_of(cb.key.complement());
        let bound = props[b].complement();
        neg.record(pa.is_subset(&bound), pa != bound, || {
            format!("~({})", cb.representative)
        });
        for (c, cc) in classes.iter().enumerate().skip(b) {
            let pm = prop_of(cb.key.intersection(&cc.key));
            let cap = props[b].intersection(&props[c]);
            meet.record(pm == cap, false, || {
                format!("({}) & ({})", cb.representative, cc.representative)
            });
            let pj = prop_of(cb.key.union(&cc.key));
            let cup = props[b].union(&props[c]);
            join.record(cup.is_subset(&pj), pj != cup, || {
                format!("({}) | ({})", cb.representative, cc.representative)
            });
        }
    }
    Ok(ConnectiveReport {
        depth: max_depth,
        classes: classes.len(),
        relations: vec![neg, meet, join],
    })
}

/// First classical property formula over the property predicates (up to
/// `max_depth`) with no property predicate of equal signature.
pub fn cmt_violation(m: &Model, max_depth: usize) -> Result<Option<Formula>> {
    let props = m.property_ids();
    let classes = m.signature_classes(&props, max_depth)?;
    Ok(classes
        .into_iter()
        .find(|c| witness_for_signature(m, &c.key, Scope::Properties).is_none())
        .map(|c| c.representative))
}

/// Every classical property formula up to `max_depth` is p-testable.
pub fn check_cmt(m: &Model, max_depth: usize) -> Result<bool> {
    Ok(cmt_violation(m, max_depth)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::{build_cm_model, PredicateInfo, StateSpec};
    use std::collections::BTreeMap;

    fn pid(n: &str) -> PredicateId {
        PredicateId::new(n).unwrap()
    }

    /// Two states; effect G realizes E ∧ F objectwise but no property does.
    fn effect_model() -> Model {
        let info = |n: &str, prop: bool| PredicateInfo {
            name: pid(n),
            is_property: prop,
            ortho: None,
        };
        let state = |name: &str, e: &[usize], f: &[usize], g: &[usize]| {
            let mut ext = BTreeMap::new();
            ext.insert("E".to_string(), e.to_vec());
            ext.insert("F".to_string(), f.to_vec());
            ext.insert("G".to_string(), g.to_vec());
            StateSpec {
                name: name.into(),
                universe: 3,
                extensions: ext,
            }
        };
        Model::new(
            vec![info("E", true), info("F", true), info("G", false)],
            vec![
                state("S1", &[0, 1], &[1, 2], &[1]),
                state("S2", &[0, 1, 2], &[0, 1, 2], &[0, 1, 2]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn proposition_examples() {
        let m = build_cm_model(&[("S1", 2), ("S2", 2)], &[("E", vec![true, false])]).unwrap();
        let p = physical_proposition(&m, &parse("E").unwrap()).unwrap();
        assert_eq!(p.states, StateSet::from_indices(2, [0]));
        let t = physical_proposition(&m, &parse("E | ~E").unwrap()).unwrap();
        assert_eq!(t.states, StateSet::full(2));
    }

    #[test]
    fn testability_scopes() {
        let m = effect_model();
        assert_eq!(testable(&m, &parse("E").unwrap(), Scope::Properties).unwrap(), Some(pid("E")));
        let ef = parse("E & F").unwrap();
        assert_eq!(testable(&m, &ef, Scope::Effects).unwrap(), Some(pid("G")));
        assert_eq!(testable(&m, &ef, Scope::Properties).unwrap(), None);
        assert_eq!(testable(&m, &parse("E & ~E").unwrap(), Scope::Effects).unwrap(), None);
    }

    #[test]
    fn single_tautology_poset() {
        let m = effect_model();
        let poset = proposition_poset(&m, &[parse("E | ~E").unwrap()]).unwrap();
        assert_eq!(poset.len(), 1);
        assert!(poset.is_lattice());
    }

    #[test]
    fn connective_relations_on_cm_model_are_equalities() {
        let m = build_cm_model(
            &[("S1", 2), ("S2", 2), ("S3", 2)],
            &[("E", vec![true, false, true]), ("F", vec![true, true, false])],
        )
        .unwrap();
        let report = check_connective_relations(&m, &[pid("E"), pid("F")], 3).unwrap();
        assert_eq!(report.violations(), 0);
        for r in &report.relations {
            assert_eq!(r.strict, 0, "{}", r.relation);
        }
    }

    #[test]
    fn connective_relations_depth_guard() {
        let m = effect_model();
        assert!(check_connective_relations(&m, &[pid("E")], 4).is_err());
    }

    #[test]
    fn strict_join_in_partial_model() {
        let m = effect_model();
        let report = check_connective_relations(&m, &[pid("E"), pid("F")], 2).unwrap();
        assert_eq!(report.violations(), 0);
        // E ∨ ¬E is certainly true in S1 though neither disjunct is.
        assert!(report.relation("join").unwrap().strict > 0);
        assert!(report.relation("negation").unwrap().strict > 0);
    }

    #[test]
    fn cmt_on_cm_models() {
        // Table closed under the Boolean operations on its columns.
        let closed = build_cm_model(
            &[("S1", 1), ("S2", 1)],
            &[
                ("E", vec![true, false]),
                ("T", vec![true, true]),
            ],
        )
        .unwrap();
        assert!(check_cmt(&closed, 3).unwrap());

        let open = build_cm_model(
            &[("S1", 1), ("S2", 1), ("S3", 1)],
            &[("E", vec![true, true, false]), ("F", vec![false, true, true])],
        )
        .unwrap();
        let w = cmt_violation(&open, 2).unwrap().expect("E & F has no witness");
        assert!(testable(&open, &w, Scope::Properties).unwrap().is_none());
    }
}
