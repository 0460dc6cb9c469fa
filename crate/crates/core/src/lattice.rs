//! Finite ortholattices of subspaces.
//!
//! [`close`] grows a family of subspaces to the least family containing the
//! generators, `0` and the whole space that is closed under orthocomplement,
//! meet and join. Operation tables are materialized over element indices so
//! that law checks are cheap lookups.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subspace::Subspace;

pub const DEFAULT_CLOSURE_CAP: usize = 512;

/// A finite family of subspaces closed under `⊥`, `⋒`, `⋓`, with tables.
#[derive(Clone, Debug)]
pub struct QLattice<T> {
    ambient: usize,
    elements: Vec<Subspace<T>>,
    index: HashMap<Subspace<T>, usize>,
    ortho: Vec<usize>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

/// Outcome of the orthomodular-law scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orthomodularity {
    Holds { pairs_checked: usize },
    /// `a ≤ b` but `b ≠ a ⋓ (b ⋒ a⊥)`.
    Violated { a: usize, b: usize },
}

impl Orthomodularity {
    pub fn holds(&self) -> bool {
        matches!(self, Orthomodularity::Holds { .. })
    }
}

/// Least ortholattice of subspaces containing `generators`.
pub fn close<T>(generators: &[Subspace<T>], cap: usize) -> Result<QLattice<T>>
where
    T: Scalar + Hash + Eq,
{
    let ambient = match generators.first() {
        Some(g) => g.ambient_dim(),
        None => {
            return Err(Error::InvalidSpec(
                "closure needs at least one generator".into(),
            ))
        }
    };
    for g in generators {
        if g.ambient_dim() != ambient {
            return Err(Error::DimensionMismatch {
                left: ambient,
                right: g.ambient_dim(),
            });
        }
    }

    let overflow = || Error::ClosureOverflow {
        cap,
        generators: generators
            .iter()
            .enumerate()
            .map(|(i, g)| format!("#{i} (rank {})", g.rank()))
            .collect::<Vec<_>>()
            .join(", "),
    };

    let mut elements: Vec<Subspace<T>> = Vec::new();
    let mut index: HashMap<Subspace<T>, usize> = HashMap::new();
    let insert = |s: Subspace<T>,
                      elements: &mut Vec<Subspace<T>>,
                      index: &mut HashMap<Subspace<T>, usize>|
     -> Result<usize> {
        if let Some(&i) = index.get(&s) {
            return Ok(i);
        }
        if elements.len() >= cap {
            return Err(overflow());
        }
        let i = elements.len();
        index.insert(s.clone(), i);
        elements.push(s);
        Ok(i)
    };

    insert(Subspace::zero(ambient), &mut elements, &mut index)?;
    insert(Subspace::full(ambient), &mut elements, &mut index)?;
    for g in generators {
        insert(g.clone(), &mut elements, &mut index)?;
    }

    let mut ortho_of: HashMap<usize, usize> = HashMap::new();
    let mut meet_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut join_of: HashMap<(usize, usize), usize> = HashMap::new();

    // Every pair (q, p) with q <= p is combined when p is processed; elements
    // appended meanwhile are processed later.
    let mut p = 0;
    while p < elements.len() {
        let e = elements[p].clone();
        let o = insert(e.ortho(), &mut elements, &mut index)?;
        ortho_of.insert(p, o);
        for q in 0..=p {
            let f = elements[q].clone();
            let m = insert(e.meet(&f)?, &mut elements, &mut index)?;
            let j = insert(e.join(&f)?, &mut elements, &mut index)?;
            meet_of.insert((q, p), m);
            join_of.insert((q, p), j);
        }
        p += 1;
    }

    let n = elements.len();
    let key = |a: usize, b: usize| if a <= b { (a, b) } else { (b, a) };
    let ortho = (0..n).map(|i| ortho_of[&i]).collect();
    let meet = (0..n)
        .map(|a| (0..n).map(|b| meet_of[&key(a, b)]).collect())
        .collect();
    let join = (0..n)
        .map(|a| (0..n).map(|b| join_of[&key(a, b)]).collect())
        .collect();

    Ok(QLattice {
        ambient,
        elements,
        index,
        ortho,
        meet,
        join,
    })
}

impl<T> QLattice<T>
where
    T: Scalar + Hash + Eq,
{
    /// Assembles a lattice from explicit tables without checking them.
    /// Intended for fault-injection tests of the law checkers.
    pub fn from_tables(
        elements: Vec<Subspace<T>>,
        ortho: Vec<usize>,
        meet: Vec<Vec<usize>>,
        join: Vec<Vec<usize>>,
    ) -> Self {
        let ambient = elements.first().map_or(0, Subspace::ambient_dim);
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        QLattice {
            ambient,
            elements,
            index,
            ortho,
            meet,
            join,
        }
    }

    pub fn index_of(&self, s: &Subspace<T>) -> Option<usize> {
        self.index.get(s).copied()
    }
}

impl<T: Scalar> QLattice<T> {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Subspace<T>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Subspace<T> {
        &self.elements[i]
    }

    /// Index of the zero subspace (always 0 for lattices built by [`close`]).
    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        1
    }

    pub fn ortho(&self, a: usize) -> usize {
        self.ortho[a]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    /// Sasaki implication `a⊥ ⋓ (a ⋒ b)`.
    pub fn sasaki(&self, a: usize, b: usize) -> usize {
        self.join(self.ortho(a), self.meet(a, b))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet[a][b] == a
    }

    pub fn is_orthomodular(&self) -> Orthomodularity {
        let n = self.len();
        let mut checked = 0;
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                checked += 1;
                if self.join(a, self.meet(b, self.ortho(a))) != b {
                    return Orthomodularity::Violated { a, b };
                }
            }
        }
        Orthomodularity::Holds {
            pairs_checked: checked,
        }
    }

    /// First `(a, b, c)` with `a ⋒ (b ⋓ c) ≠ (a ⋒ b) ⋓ (a ⋒ c)`.
    pub fn find_distributivity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let ab = self.meet(a, b);
                for c in 0..n {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(ab, self.meet(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// First element whose orthocomplement is not an involution.
    pub fn involution_failure(&self) -> Option<usize> {
        (0..self.len()).find(|&a| self.ortho(self.ortho(a)) != a)
    }

    /// First pair violating `(a ⋒ b)⊥ = a⊥ ⋓ b⊥` in the tables.
    pub fn de_morgan_failure(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.ortho(self.meet(a, b)) != self.join(self.ortho(a), self.ortho(b)))
    }

    /// Covering pairs `(lower, upper)` of the inclusion order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let covered = (0..n)
                    .any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !covered {
                    edges.push((a, b));
                }
            }
        }
        edges
    }
}
