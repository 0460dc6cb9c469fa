//! Quotients of formula sets by semantic equivalence.
//!
//! Every semantics here is compositional: the class of `a ∧ b` depends only on
//! the classes of `a` and `b`. Exhaustive sweeps over all formulas up to a
//! depth therefore run over classes instead of trees. [`layered_classes`]
//! computes the set of classes reached by formulas of depth `≤ d`, layer by
//! layer, keeping one representative formula of minimal depth per class.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::Result;
use crate::formula::{check_depth, Formula, PredicateId, MAX_ENUMERATION_DEPTH};
use crate::model::{Model, Signature};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class<K> {
    pub key: K,
    pub representative: Formula,
    pub depth: usize,
}

pub(crate) type BinaryRule<'a, K> = (fn(Formula, Formula) -> Formula, &'a dyn Fn(&K, &K) -> K);

/// Classes reachable from `seeds` with at most `max_depth` connectives
/// nested, or to a fixpoint when `max_depth` is `None`.
pub(crate) fn layered_classes<K: Clone + Eq + Hash>(
    seeds: Vec<(K, Formula)>,
    max_depth: Option<usize>,
    unary: (fn(Formula) -> Formula, &dyn Fn(&K) -> K),
    binaries: &[BinaryRule<'_, K>],
) -> Vec<Class<K>> {
    let mut classes: Vec<Class<K>> = Vec::new();
    let mut seen: HashMap<K, usize> = HashMap::new();
    fn push<K: Clone + Eq + Hash>(
        seen: &mut HashMap<K, usize>,
        classes: &mut Vec<Class<K>>,
        key: K,
        f: Formula,
        depth: usize,
    ) {
        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key.clone()) {
            e.insert(classes.len());
            classes.push(Class {
                key,
                representative: f,
                depth,
            });
        }
    }
    for (k, f) in seeds {
        push(&mut seen, &mut classes, k, f, 0);
    }

    let mut layer_start = 0;
    let mut depth = 0;
    loop {
        if max_depth.is_some_and(|m| depth >= m) {
            break;
        }
        let prev_len = classes.len();
        if layer_start == prev_len {
            break;
        }
        depth += 1;
        for i in layer_start..prev_len {
            let key = unary.1(&classes[i].key);
            let f = unary.0(classes[i].representative.clone());
            push(&mut seen, &mut classes, key, f, depth);
        }
        for (ctor, op) in binaries {
            for i in 0..prev_len {
                for j in 0..prev_len {
                    if i < layer_start && j < layer_start {
                        continue;
                    }
                    let key = op(&classes[i].key, &classes[j].key);
                    if seen.contains_key(&key) {
                        continue;
                    }
                    let f = ctor(classes[i].representative.clone(), classes[j].representative.clone());
                    push(&mut seen, &mut classes, key, f, depth);
                }
            }
        }
        layer_start = prev_len;
    }
    classes
}

impl Model {
    /// `≡`-classes (signatures) of classical formulas over `leaves` with depth
    /// at most `max_depth`, each with a minimal-depth representative.
    pub fn signature_classes(
        &self,
        leaves: &[PredicateId],
        max_depth: usize,
    ) -> Result<Vec<Class<Signature>>> {
        check_depth(max_depth, MAX_ENUMERATION_DEPTH)?;
        self.classes_inner(leaves, Some(max_depth))
    }

    fn classes_inner(
        &self,
        leaves: &[PredicateId],
        max_depth: Option<usize>,
    ) -> Result<Vec<Class<Signature>>> {
        let mut seeds = Vec::new();
        for p in leaves {
            let i = self.predicate_index(p)?;
            seeds.push((self.predicate_signature(i).clone(), Formula::Pred(p.clone())));
        }
        let and = |a: &Signature, b: &Signature| a.intersection(b);
        let or = |a: &Signature, b: &Signature| a.union(b);
        Ok(layered_classes(
            seeds,
            max_depth,
            (Formula::not, &|a: &Signature| a.complement()),
            &[(Formula::and, &and), (Formula::or, &or)],
        ))
    }

    /// The Lindenbaum-Tarski algebra of classical formulas over `leaves`.
    ///
    /// Formulas of depth `≤ max_depth` are enumerated by class, then the
    /// result is grown to the fixpoint holding the classes of formulas of any
    /// depth. [`QuotientAlgebra::within_depth`] records
    /// how many classes the depth-bounded sweep already reached.
    pub fn quotient_boolean(&self, leaves: &[PredicateId], max_depth: usize) -> Result<QuotientAlgebra> {
        check_depth(max_depth, MAX_ENUMERATION_DEPTH)?;
        let bounded = self.classes_inner(leaves, Some(max_depth))?;
        let all = self.classes_inner(leaves, None)?;
        let generators = leaves
            .iter()
            .map(|p| Ok((p.clone(), self.predicate_signature(self.predicate_index(p)?).clone())))
            .collect::<Result<_>>()?;
        Ok(QuotientAlgebra {
            omega: self.omega_len(),
            within_depth: bounded.len(),
            elements: all,
            generators,
        })
    }
}

#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub omega: usize,
    pub elements: Vec<Class<Signature>>,
    pub generators: Vec<(PredicateId, Signature)>,
    pub within_depth: usize,
}

/// A failed Boolean-algebra law, with the element indices involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub elements: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanReport {
    pub elements: usize,
    pub triples_checked: usize,
}

impl QuotientAlgebra {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn signatures(&self) -> Vec<Signature> {
        self.elements.iter().map(|c| c.key.clone()).collect()
    }

    /// Checks closure, bounds and every Boolean-lattice law over all pairs and
    /// triples of elements.
    pub fn verify_boolean(&self) -> std::result::Result<BooleanReport, LawViolation> {
        let sigs = self.signatures();
        verify_boolean_sets(
            &sigs,
            &Signature::empty(self.omega),
            &Signature::full(self.omega),
            |a, b| a.intersection(b),
            |a, b| a.union(b),
            |a| a.complement(),
        )
    }
}

/// Law check for a finite family of sets under the given operations.
/// An empty family is vacuously fine.
pub(crate) fn verify_boolean_sets<K: Clone + Eq + Hash>(
    elems: &[K],
    bottom: &K,
    top: &K,
    meet: impl Fn(&K, &K) -> K,
    join: impl Fn(&K, &K) -> K,
    comp: impl Fn(&K) -> K,
) -> std::result::Result<BooleanReport, LawViolation> {
    let n = elems.len();
    if n == 0 {
        return Ok(BooleanReport {
            elements: 0,
            triples_checked: 0,
        });
    }
    let index: HashMap<&K, usize> = elems.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let fail = |law, elements| Err(LawViolation { law, elements });

    let Some(&lo) = index.get(bottom) else {
        return fail("contains bottom", vec![]);
    };
    let Some(&hi) = index.get(top) else {
        return fail("contains top", vec![]);
    };

    let mut m = vec![vec![0usize; n]; n];
    let mut j = vec![vec![0usize; n]; n];
    let mut c = vec![0usize; n];
    for a in 0..n {
        match index.get(&comp(&elems[a])) {
            Some(&x) => c[a] = x,
            None => return fail("closed under complement", vec![a]),
        }
        for b in 0..n {
            match index.get(&meet(&elems[a], &elems[b])) {
                Some(&x) => m[a][b] = x,
                None => return fail("closed under meet", vec![a, b]),
            }
            match index.get(&join(&elems[a], &elems[b])) {
                Some(&x) => j[a][b] = x,
                None => return fail("closed under join", vec![a, b]),
            }
        }
    }

    for a in 0..n {
        if m[a][a] != a || j[a][a] != a {
            return fail("idempotence", vec![a]);
        }
        if m[a][lo] != lo || j[a][hi] != hi || m[a][hi] != a || j[a][lo] != a {
            return fail("bounds", vec![a]);
        }
        if m[a][c[a]] != lo || j[a][c[a]] != hi {
            return fail("complementation", vec![a]);
        }
        if c[c[a]] != a {
            return fail("involution", vec![a]);
        }
        for b in 0..n {
            if m[a][b] != m[b][a] || j[a][b] != j[b][a] {
                return fail("commutativity", vec![a, b]);
            }
            if m[a][j[a][b]] != a || j[a][m[a][b]] != a {
                return fail("absorption", vec![a, b]);
            }
            if c[m[a][b]] != j[c[a]][c[b]] {
                return fail("de morgan", vec![a, b]);
            }
        }
    }
    let mut triples = 0;
    for a in 0..n {
        for b in 0..n {
            let ab_m = m[a][b];
            let ab_j = j[a][b];
            for x in 0..n {
                triples += 1;
                if m[ab_m][x] != m[a][m[b][x]] || j[ab_j][x] != j[a][j[b][x]] {
                    return fail("associativity", vec![a, b, x]);
                }
                if m[a][j[b][x]] != j[ab_m][m[a][x]] {
                    return fail("meet distributes over join", vec![a, b, x]);
                }
                if j[a][m[b][x]] != m[ab_j][j[a][x]] {
                    return fail("join distributes over meet", vec![a, b, x]);
                }
            }
        }
    }
    Ok(BooleanReport {
        elements: n,
        triples_checked: triples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{enumerate_formulas, ConnectiveFamily};
    use crate::model::build_cm_model;
    use std::collections::HashSet;

    fn ids(m: &Model, names: &[&str]) -> Vec<PredicateId> {
        names
            .iter()
            .map(|n| m.predicates()[m.predicate_index_by_name(n).unwrap()].name.clone())
            .collect()
    }

    #[test]
    fn one_generator_gives_four_elements() {
        let m = crate::model::tests::one_state(&[0], 3);
        let q = m.quotient_boolean(&ids(&m, &["E"]), 3).unwrap();
        assert_eq!(q.len(), 4);
        assert!(q.verify_boolean().is_ok());
    }

    #[test]
    fn cm_two_states_gives_four_elements() {
        let m = build_cm_model(&[("S1", 2), ("S2", 2)], &[("E", vec![true, false])]).unwrap();
        let q = m.quotient_boolean(&ids(&m, &["E"]), 2).unwrap();
        assert_eq!(q.len(), 4);
        assert!(q.verify_boolean().is_ok());
    }

    #[test]
    fn no_predicates_gives_empty_algebra() {
        let m = crate::model::tests::one_state(&[0], 3);
        let q = m.quotient_boolean(&[], 2).unwrap();
        assert!(q.is_empty());
        assert_eq!(q.verify_boolean().unwrap().elements, 0);
    }

    #[test]
    fn classes_match_literal_enumeration() {
        // Oracle: enumerate every tree, collect distinct signatures.
        let m = crate::model::tests::one_state(&[0, 1], 4);
        let m = {
            let mut m = m;
            let f = m.predicate_index_by_name("F").unwrap();
            m.replace_extension_unchecked(f, 0, &[1, 2]);
            m
        };
        let leaves = ids(&m, &["E", "F"]);
        for depth in 0..=2 {
            let trees = enumerate_formulas(&leaves, depth, ConnectiveFamily::Classical).unwrap();
            let oracle: HashSet<Signature> = trees.iter().map(|f| m.signature(f).unwrap()).collect();
            let classes = m.signature_classes(&leaves, depth).unwrap();
            let got: HashSet<Signature> = classes.iter().map(|c| c.key.clone()).collect();
            assert_eq!(got, oracle, "depth {depth}");
            for c in &classes {
                assert_eq!(m.signature(&c.representative).unwrap(), c.key);
                assert!(c.representative.depth() <= depth);
            }
        }
    }

    #[test]
    fn broken_family_is_reported() {
        let bottom = Signature::empty(2);
        let top = Signature::full(2);
        let first = crate::model::tests::one_state(&[0], 2).predicate_signature(0).clone();
        let check = |elems: &[Signature]| {
            verify_boolean_sets(
                elems,
                &bottom,
                &top,
                |a, b| a.intersection(b),
                |a, b| a.union(b),
                |a| a.complement(),
            )
        };
        assert!(check(&[bottom.clone(), top.clone()]).is_ok());
        assert_eq!(check(&[top.clone()]).unwrap_err().law, "contains bottom");
        assert_eq!(
            check(&[bottom.clone(), top.clone(), first]).unwrap_err().law,
            "closed under complement"
        );
    }
}
