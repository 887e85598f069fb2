//! Configuration, experiment runners and CSV output behind the `nfradar`
//! binary.

// `!(a > b)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod output;

use std::io::Write;

use anyhow::Result;
use serde::{Deserialize, Serialize};

pub use config::Config;
pub use experiments::{run_ambiguity, run_crb, run_validate_spa, RunOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ValidateSpa,
    Ambiguity,
    Crb,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::ValidateSpa => "validate-spa",
            Experiment::Ambiguity => "ambiguity",
            Experiment::Crb => "crb",
        }
    }
}

/// Runs `experiment` and writes the complete CSV document to `out`.
pub fn run<W: Write>(experiment: Experiment, cfg: &Config, opts: RunOptions, out: W) -> Result<()> {
    let mut comments = output::comment_block(experiment.name(), cfg);
    if opts.slow {
        comments.push_str("# slow: validation at the scenario carrier\n");
    }
    match experiment {
        Experiment::ValidateSpa => {
            output::write_table(out, &comments, &run_validate_spa(cfg, opts)?)
        }
        Experiment::Ambiguity => output::write_table(out, &comments, &run_ambiguity(cfg, opts)?),
        Experiment::Crb => output::write_table(out, &comments, &run_crb(cfg, opts)?),
    }
}

/// [`run`] into a string.
pub fn render(experiment: Experiment, cfg: &Config, opts: RunOptions) -> Result<String> {
    let mut buf = Vec::new();
    run(experiment, cfg, opts, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}
