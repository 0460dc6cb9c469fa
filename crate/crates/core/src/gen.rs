//! Seeded pseudo-random models for fuzzing.
//!
//! Equal seeds and configurations give equal models, and therefore
//! byte-identical files.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bridge::{GeneratorInfo, QmSpec};
use crate::error::{Error, Result};
use crate::formula::PredicateId;
use crate::lattice::{close, DEFAULT_CLOSURE_CAP};
use crate::model::{Model, PredicateInfo, StateId, StateSpec, DEFAULT_UNIVERSE};
use crate::scalar::{ExactComplex, Rational};
use crate::subspace::Subspace;

/// Attempts made before a QM draw that keeps overflowing the cap is given up.
pub const MAX_GEN_ATTEMPTS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalGenConfig {
    pub states: usize,
    pub predicates: usize,
    pub universe: usize,
}

impl Default for ClassicalGenConfig {
    fn default() -> Self {
        ClassicalGenConfig {
            states: 2,
            predicates: 2,
            universe: DEFAULT_UNIVERSE,
        }
    }
}

/// Model with property predicates `E0, E1, ...` over states `S0, S1, ...`;
/// each object joins each extension with probability one half.
pub fn gen_classical(seed: u64, config: &ClassicalGenConfig) -> Result<Model> {
    if config.universe == 0 {
        return Err(Error::InvalidSpec("universe must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..config.predicates).map(|i| format!("E{i}")).collect();
    let predicates = names
        .iter()
        .map(|n| {
            Ok(PredicateInfo {
                name: PredicateId::new(n)?,
                is_property: true,
                ortho: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let states = (0..config.states)
        .map(|s| {
            let extensions: BTreeMap<String, Vec<usize>> = names
                .iter()
                .map(|n| {
                    let objs = (0..config.universe).filter(|_| rng.gen_bool(0.5)).collect();
                    (n.clone(), objs)
                })
                .collect();
            StateSpec {
                name: format!("S{s}"),
                universe: config.universe,
                extensions,
            }
        })
        .collect();
    Model::new(predicates, states)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QmGenConfig {
    pub dim: usize,
    pub states: usize,
    /// Number of property lines.
    pub properties: usize,
    pub universe: usize,
    pub closure_cap: usize,
}

impl Default for QmGenConfig {
    fn default() -> Self {
        QmGenConfig {
            dim: 2,
            states: 3,
            properties: 2,
            universe: DEFAULT_UNIVERSE,
            closure_cap: DEFAULT_CLOSURE_CAP,
        }
    }
}

/// Real or imaginary part: `a/b` with `a` in `[-3, 3]` and `b` in `[1, 3]`.
fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into())
}

fn small_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<ExactComplex> {
    (0..dim)
        .map(|_| {
            let re = small_rational(rng);
            let im = if rng.gen_bool(0.25) {
                small_rational(rng)
            } else {
                Rational::from_integer(0.into())
            };
            ExactComplex::new(re, im)
        })
        .collect()
}

/// Spec with random Gaussian-rational state vectors and property lines.
///
/// Draws that repeat a ray or whose closure exceeds the cap are discarded;
/// the accepted attempt number is recorded in [`QmSpec::generator`]. After
/// [`MAX_GEN_ATTEMPTS`] failures the last error is returned.
pub fn gen_qm(seed: u64, config: &QmGenConfig) -> Result<QmSpec> {
    if config.dim == 0 || config.properties == 0 {
        return Err(Error::InvalidSpec(
            "dimension and property count must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_error = None;
    for attempt in 0..MAX_GEN_ATTEMPTS {
        let states = (0..config.states)
            .map(|i| Ok((StateId::new(&format!("S{i}"))?, small_vector(&mut rng, config.dim))))
            .collect::<Result<Vec<_>>>()?;
        let mut properties = Vec::with_capacity(config.properties);
        let mut degenerate = false;
        for i in 0..config.properties {
            match Subspace::line(&small_vector(&mut rng, config.dim)) {
                Ok(line) => properties.push((PredicateId::new(&format!("P{i}"))?, line)),
                Err(_) => degenerate = true,
            }
        }
        if degenerate {
            last_error = Some(Error::ZeroVector(None));
            continue;
        }
        let spec = QmSpec {
            dim: config.dim,
            universe: config.universe,
            closure_cap: config.closure_cap,
            complete_states: true,
            states,
            properties,
            generator: Some(GeneratorInfo { seed, attempt }),
        };
        if let Err(e) = spec.validate() {
            last_error = Some(e);
            continue;
        }
        let gens: Vec<_> = spec.properties.iter().map(|(_, s)| s.clone()).collect();
        match close(&gens, config.closure_cap) {
            Ok(_) => return Ok(spec),
            Err(e) => last_error = Some(e),
        }
    }
    Err(last_error.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::build_model;

    #[test]
    fn classical_is_deterministic() {
        let c = ClassicalGenConfig {
            states: 2,
            predicates: 2,
            universe: 3,
        };
        assert_eq!(gen_classical(0, &c).unwrap().to_json(), gen_classical(0, &c).unwrap().to_json());
        assert_ne!(gen_classical(0, &c).unwrap().to_json(), gen_classical(1, &c).unwrap().to_json());
    }

    #[test]
    fn classical_shape() {
        let c = ClassicalGenConfig {
            states: 3,
            predicates: 2,
            universe: 4,
        };
        let m = gen_classical(7, &c).unwrap();
        assert_eq!(m.states().len(), 3);
        assert_eq!(m.predicates().len(), 2);
        assert!(m.states().iter().all(|s| s.universe == 4));
    }

    #[test]
    fn qm_is_deterministic_and_builds() {
        let c = QmGenConfig::default();
        let a = gen_qm(3, &c).unwrap();
        assert_eq!(a, gen_qm(3, &c).unwrap());
        assert_eq!(a.to_json(), gen_qm(3, &c).unwrap().to_json());
        let q = build_model(&a).unwrap();
        assert!(q.check_qmt().holds());
    }

    #[test]
    fn qm_overflow_retries_are_bounded() {
        let c = QmGenConfig {
            dim: 3,
            states: 2,
            properties: 3,
            universe: 4,
            closure_cap: 4,
        };
        // Three lines never close within four elements.
        assert!(matches!(gen_qm(0, &c), Err(Error::ClosureOverflow { .. })));
    }
}
