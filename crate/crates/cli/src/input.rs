//! Loading models and spec files from disk.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use qprop_core::bridge::QmSpec;
use qprop_core::{build_model, LanguageTag, LoadedModel, Model, PredicateId};

use crate::{CliError, CliResult, Source};

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads the model named by `--model` or `--qm-spec`, if any.
pub fn load_optional(source: &Source) -> CliResult<Option<LoadedModel>> {
    if let Some(path) = &source.model {
        if source.cap.is_some() {
            return Err(CliError::Usage("--cap applies to --qm-spec only".into()));
        }
        return Ok(Some(LoadedModel::Classical(Model::from_json(&read(path)?)?)));
    }
    if let Some(path) = &source.qm_spec {
        let mut spec = QmSpec::from_json(&read(path)?)?;
        if let Some(cap) = source.cap {
            spec.closure_cap = cap;
        }
        return Ok(Some(LoadedModel::Quantum(Box::new(build_model(&spec)?))));
    }
    Ok(None)
}

pub fn load(source: &Source) -> CliResult<LoadedModel> {
    load_optional(source)?
        .ok_or_else(|| CliError::Usage("one of --model or --qm-spec is required".into()))
}

/// Predicates whose formulas the sweeps range over: every predicate of a
/// classical model, the input properties of a quantum one.
pub fn leaves(loaded: &LoadedModel) -> Vec<PredicateId> {
    match loaded {
        LoadedModel::Classical(m) => m.predicate_ids(),
        LoadedModel::Quantum(q) => q.inputs().to_vec(),
    }
}

pub fn property_names(m: &Model) -> BTreeSet<PredicateId> {
    m.property_ids().into_iter().collect()
}

pub fn language_label(tag: LanguageTag) -> &'static str {
    match tag {
        LanguageTag::EffectWff => "effect formula",
        LanguageTag::PropertyWff => "property formula",
        LanguageTag::PureQwff => "pure quantum formula",
        LanguageTag::Mixed => "mixed formula",
    }
}

pub fn language_key(tag: LanguageTag) -> &'static str {
    match tag {
        LanguageTag::EffectWff => "effect_wff",
        LanguageTag::PropertyWff => "property_wff",
        LanguageTag::PureQwff => "pure_qwff",
        LanguageTag::Mixed => "mixed",
    }
}
