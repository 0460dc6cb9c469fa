//! `qprop gen`

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use qprop_core::gen::{gen_classical, gen_qm, ClassicalGenConfig, QmGenConfig};
use qprop_core::DEFAULT_CLOSURE_CAP;

use crate::input::write;
use crate::{CliResult, Output};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Table of open-formula extensions.
    Classical,
    /// Hilbert-space spec.
    Qm,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = Kind::Classical)]
    pub kind: Kind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub states: usize,
    /// Predicates of a classical model.
    #[arg(long, default_value_t = 2)]
    pub predicates: usize,
    /// Property lines of a quantum spec.
    #[arg(long, default_value_t = 2)]
    pub properties: usize,
    /// Objects per state.
    #[arg(long, default_value_t = 4)]
    pub universe: usize,
    /// Hilbert-space dimension of a quantum spec.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Closure cap of a quantum spec.
    #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
    pub cap: usize,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

pub fn run(args: &GenArgs) -> CliResult<Output> {
    let text = match args.kind {
        Kind::Classical => {
            let config = ClassicalGenConfig {
                states: args.states,
                predicates: args.predicates,
                universe: args.universe,
            };
            let mut json = gen_classical(args.seed, &config)?.to_json();
            json.push('\n');
            json
        }
        Kind::Qm => {
            let config = QmGenConfig {
                dim: args.dim,
                states: args.states,
                properties: args.properties,
                universe: args.universe,
                closure_cap: args.cap,
            };
            gen_qm(args.seed, &config)?.to_json()
        }
    };
    match &args.out {
        Some(path) => {
            write(path, &text)?;
            Ok(Output::clean(String::new()))
        }
        None => Ok(Output::clean(text)),
    }
}
