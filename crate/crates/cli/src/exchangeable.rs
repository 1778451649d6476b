//! Exchangeable-vector checks orchestrated on ladders.

use crate::{ExpError, ExperimentConfig};
use qmaps::enumeration::sampling::rng_from_seed;
use qmaps::exchangeable::{
    measure_concentration_check, random_trials, remark_counterexample, ConcentrationReport, ExchError,
    ExchangeableTrials, MassGenerator, RemarkReport,
};
use rayon::prelude::*;
use std::fmt::Write;

pub const TRIALS: usize = 10_000;
pub const EPSILON: f64 = 0.1;
pub const GENERATORS: [MassGenerator; 4] =
    [MassGenerator::IidUniform, MassGenerator::SingleAtom, MassGenerator::Uniform, MassGenerator::Increasing];

#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeableReport {
    pub trials: ExchangeableTrials,
    /// One entry per generator; non-exchangeable ones are rejected.
    pub concentration: Vec<(MassGenerator, Result<ConcentrationReport, ExchError>)>,
    pub remark: RemarkReport,
}

impl ExchangeableReport {
    pub fn to_csv(&self, cfg: &ExperimentConfig) -> String {
        let mut s = cfg.header();
        s.push_str("\nsection,subject,n,metric,value\n");
        let t = &self.trials;
        for (k, v) in [
            ("trials", t.trials),
            ("bound_violations", t.bound_violations),
            ("positive_covariances", t.positive_covariances),
            ("identity_mismatches", t.identity_mismatches),
        ] {
            let _ = writeln!(s, "variance,random-mixtures,,{k},{v}");
        }
        for (g, r) in &self.concentration {
            match r {
                Ok(rep) => {
                    let _ = writeln!(s, "concentration,{},,p_value,{}", g.name(), rep.p_value);
                    for row in &rep.rows {
                        for (k, v) in [
                            ("mean_upper", row.mean_upper),
                            ("mean_lower", row.mean_lower),
                            ("mean_max_mass", row.mean_max_mass),
                            ("freq_lower_ge_2eps", row.freq_lower_ge_2eps),
                            ("freq_upper_ge_2eps", row.freq_upper_ge_2eps),
                            ("chain_bound", row.chain_bound),
                        ] {
                            let _ = writeln!(s, "concentration,{},{},{k},{v}", g.name(), row.n);
                        }
                    }
                    let _ = writeln!(s, "concentration,{},,decrease_factor,{}", g.name(), rep.decrease_factor());
                }
                Err(ExchError::NotExchangeable(p)) => {
                    let _ = writeln!(s, "concentration,{},,rejected_p_value,{p}", g.name());
                }
                Err(e) => {
                    let _ = writeln!(s, "concentration,{},,error,\"{e}\"", g.name());
                }
            }
        }
        let r = &self.remark;
        for &(y, ind, first) in &r.per_value {
            let _ = writeln!(s, "remark,Y={y},,indicator,{ind}");
            let _ = writeln!(s, "remark,Y={y},,first_failing_n,{}", first.map_or("none".into(), |n| n.to_string()));
        }
        if let Some(n) = r.first_violation {
            let _ = writeln!(s, "remark,first-violation,{n},bound_at_Y=1,{}", r.rhs(n, 1.0));
        }
        let _ = writeln!(s, "remark,fails-for-every-Y,{},,", r.violated_surely_from.map_or("none".into(), |n| n.to_string()));
        s
    }
}

/// Random mixtures with length up to `n` (default 7), concentration for
/// each generator along the ladder, and the tail-bound counterexample for
/// `Y` uniform on `{1, 2}`.
pub fn run_exchangeable(cfg: &ExperimentConfig) -> Result<ExchangeableReport, ExpError> {
    cfg.need_ladder()?;
    cfg.need_replicas()?;
    cfg.check_sizes(&cfg.ladder)?;
    let max_n = cfg.n.unwrap_or(7);
    if max_n == 0 || cfg.ladder.contains(&0) {
        return Err(ExpError::Input("sizes must be positive".into()));
    }
    if max_n > qmaps::exchangeable::ENUMERATION_MAX {
        return Err(ExpError::Budget(format!("vectors of length {max_n} exceed the enumeration limit")));
    }
    let trials = random_trials(TRIALS, max_n, &mut rng_from_seed(cfg.replica_seed(max_n, 0)));
    if trials.bound_violations + trials.positive_covariances + trials.identity_mismatches > 0 {
        return Err(ExpError::Invariant(format!(
            "{} bound violations, {} positive covariances, {} closed-form mismatches",
            trials.bound_violations, trials.positive_covariances, trials.identity_mismatches
        )));
    }
    let concentration = GENERATORS
        .par_iter()
        .enumerate()
        .map(|(i, &g)| (g, measure_concentration_check(g, &cfg.ladder, cfg.replicas, EPSILON, cfg.replica_seed(0, i))))
        .collect();
    let remark = remark_counterexample(&[1.0, 2.0], EPSILON);
    Ok(ExchangeableReport { trials, concentration, remark })
}
