//! Largest simple block and largest irreducible component of uniform
//! quadrangulations.

use crate::{mean, ExpError, ExperimentConfig};
use qmaps::decomposition::irreducible_components;
use qmaps::enumeration::sample_quadrangulation;
use rayon::prelude::*;
use std::fmt::Write;

/// Threshold on second-largest/n used in the summaries.
pub const SECOND_THRESHOLD: f64 = 0.02;
/// Exponent of the second-largest scale `n^{2/3 + 0.1}`.
pub const SECOND_EXPONENT: f64 = 2.0 / 3.0 + 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct CondensationRow {
    pub n: usize,
    pub replica: usize,
    pub l_s: usize,
    pub l_irr: usize,
    pub second: usize,
    pub unique: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CondensationSummary {
    pub n: usize,
    pub replicas: usize,
    pub mean_ls: f64,
    pub mean_lirr: f64,
    pub unique_freq: f64,
    /// Fraction of replicas with second-largest/n at most [`SECOND_THRESHOLD`].
    pub small_second_freq: f64,
    /// Largest second-largest/`n^{2/3+0.1}` over replicas.
    pub max_second_scaled: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CondensationReport {
    pub rows: Vec<CondensationRow>,
    pub summaries: Vec<CondensationSummary>,
}

impl CondensationReport {
    pub fn to_csv(&self, cfg: &ExperimentConfig) -> String {
        let mut s = cfg.header();
        s.push_str("\nn,replica,ls_over_n,lirr_over_n,second_over_n,unique\n");
        for r in &self.rows {
            let f = r.n as f64;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                r.n,
                r.replica,
                r.l_s as f64 / f,
                r.l_irr as f64 / f,
                r.second as f64 / f,
                r.unique as u8
            );
        }
        for m in &self.summaries {
            let _ = writeln!(
                s,
                "# summary n={} replicas={} mean_ls_over_n={} mean_lirr_over_n={} unique_freq={} second_le_{}_freq={} max_second_over_n^{:.4}={}",
                m.n, m.replicas, m.mean_ls, m.mean_lirr, m.unique_freq, SECOND_THRESHOLD, m.small_second_freq, SECOND_EXPONENT, m.max_second_scaled
            );
        }
        s
    }
}

pub fn run_condensation(cfg: &ExperimentConfig) -> Result<CondensationReport, ExpError> {
    cfg.need_ladder()?;
    cfg.need_replicas()?;
    cfg.check_sizes(&cfg.ladder)?;
    if cfg.ladder.contains(&0) {
        return Err(ExpError::Input("sizes must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &n in &cfg.ladder {
        let batch: Vec<CondensationRow> = (0..cfg.replicas)
            .into_par_iter()
            .map(|r| {
                let q = sample_quadrangulation(n, cfg.replica_seed(n, r)).expect("positive size");
                let rep = irreducible_components(&q);
                CondensationRow { n, replica: r, l_s: rep.l_s, l_irr: rep.l_irr, second: rep.second_largest(), unique: rep.unique_largest }
            })
            .collect();
        let f = n as f64;
        summaries.push(CondensationSummary {
            n,
            replicas: cfg.replicas,
            mean_ls: mean(batch.iter().map(|r| r.l_s as f64 / f)),
            mean_lirr: mean(batch.iter().map(|r| r.l_irr as f64 / f)),
            unique_freq: mean(batch.iter().map(|r| r.unique as u8 as f64)),
            small_second_freq: mean(batch.iter().map(|r| (r.second as f64 / f <= SECOND_THRESHOLD) as u8 as f64)),
            max_second_scaled: batch.iter().map(|r| r.second as f64 / f.powf(SECOND_EXPONENT)).fold(0.0, f64::max),
        });
        rows.extend(batch);
    }
    Ok(CondensationReport { rows, summaries })
}
