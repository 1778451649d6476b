//! Seeded, reproducible experiments on random quadrangulations.
//!
//! Every runner takes an [`ExperimentConfig`], runs its replicas in parallel
//! with seeds derived from the config seed, and returns a report whose CSV or
//! JSON rendering is a pure function of the config.

pub mod condensation;
pub mod counts;
pub mod exchangeable;
pub mod order;
pub mod profile;

pub use condensation::{run_condensation, CondensationReport, CondensationRow, CondensationSummary};
pub use counts::{run_counts, CountRow, CountsReport, RatioRow};
pub use exchangeable::{run_exchangeable, ExchangeableReport};
pub use order::{run_order_demos, OrderReport};
pub use profile::{ks_statistic, run_profile_match, ProfileReport, PROFILE_FLOOR};

use qmaps::enumeration::mix_seed;
use std::fmt::Write;
use std::path::PathBuf;
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpError {
    #[error("budget refusal: {0}")]
    Budget(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl ExpError {
    /// Process exit code: 2 for refusals and bad input, 1 for violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExpError::Invariant(_) => 1,
            ExpError::Budget(_) | ExpError::Input(_) => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// Single size parameter, where the experiment has one.
    pub n: Option<usize>,
    pub ladder: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Largest size the experiment may touch.
    pub budget: usize,
}

impl ExperimentConfig {
    pub fn new(experiment: &str, ladder: &[usize], replicas: usize, seed: u64, budget: usize) -> Self {
        ExperimentConfig {
            experiment: experiment.into(),
            n: None,
            ladder: ladder.to_vec(),
            replicas,
            seed,
            out: None,
            budget,
        }
    }

    /// Provenance line written at the top of every output file.
    pub fn header(&self) -> String {
        let ladder: Vec<String> = self.ladder.iter().map(|n| n.to_string()).collect();
        let mut s = String::new();
        let _ = write!(
            s,
            "# qmaps version={VERSION} experiment={} n={} ladder={} replicas={} seed={} budget={} out={}",
            self.experiment,
            self.n.map_or("-".into(), |n| n.to_string()),
            ladder.join(";"),
            self.replicas,
            self.seed,
            self.budget,
            self.out.as_ref().map_or("-".into(), |p| p.display().to_string()),
        );
        s
    }

    /// Refuses any size above the budget.
    pub fn check_sizes(&self, sizes: &[usize]) -> Result<(), ExpError> {
        match sizes.iter().find(|&&n| n > self.budget) {
            Some(n) => Err(ExpError::Budget(format!("size {n} exceeds the budget {}", self.budget))),
            None => Ok(()),
        }
    }

    /// Seed of replica `r` at size `n`.
    pub fn replica_seed(&self, n: usize, r: usize) -> u64 {
        mix_seed(mix_seed(self.seed, n as u64), r as u64)
    }

    fn need_ladder(&self) -> Result<(), ExpError> {
        if self.ladder.is_empty() {
            return Err(ExpError::Input("empty ladder".into()));
        }
        Ok(())
    }

    fn need_replicas(&self) -> Result<(), ExpError> {
        if self.replicas == 0 {
            return Err(ExpError::Input("zero replicas".into()));
        }
        Ok(())
    }
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (s, k) = xs.into_iter().fold((0.0, 0usize), |(s, k), x| (s + x, k + 1));
    if k == 0 {
        f64::NAN
    } else {
        s / k as f64
    }
}
