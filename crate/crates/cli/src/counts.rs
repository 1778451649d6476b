//! Exhaustive counts against closed formulas, and the limiting ratio of the
//! hexagon-class count to the irreducible count.

use crate::{ExpError, ExperimentConfig};
use qmaps::enumeration::{class_name, enumerate, hexagon_formula, rooted_quadrangulation_count, Budget, EnumError, HEXAGON_OFFSET};
use qmaps::map_kernel::MapClass;
use std::f64::consts::{LN_2, PI};
use std::fmt::Write;

/// Hexagon-class sizes reported: the four smallest nonempty ones.
pub const HEXAGON_SIZES: [usize; 4] = [HEXAGON_OFFSET + 1, HEXAGON_OFFSET + 2, HEXAGON_OFFSET + 3, HEXAGON_OFFSET + 4];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRow {
    pub class: MapClass,
    pub n: usize,
    pub enumerated: u64,
    pub formula: u128,
}

impl CountRow {
    pub fn matches(&self) -> bool {
        self.enumerated as u128 == self.formula
    }
}

/// Ratio of the two asymptotic displays at one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow {
    pub n: usize,
    /// Hexagon display at `n − 12` over the irreducible display at `n`.
    pub literal: f64,
    pub literal_rel_err: f64,
    /// Hexagon display at `n − 11`, the argument matching the removal of a
    /// nine-face pattern and the addition of a hexagon.
    pub shifted: f64,
    pub shifted_rel_err: f64,
    /// Exact hexagon formula at `n − 12` over the irreducible display.
    pub exact_over_display: f64,
}

pub fn literal_target() -> f64 {
    3f64.powi(6) / 4f64.powi(12)
}

pub fn shifted_target() -> f64 {
    3f64.powi(6) / 4f64.powi(11)
}

/// `ln(6/√π · 4^m / m^{5/2})`.
fn ln_hexagon_display(m: f64) -> f64 {
    6f64.ln() - 0.5 * PI.ln() + 2.0 * LN_2 * m - 2.5 * m.ln()
}

/// `ln(2/(3^5 √π) · 4^n / n^{5/2})`.
fn ln_irreducible_display(n: f64) -> f64 {
    LN_2 - 5.0 * 3f64.ln() - 0.5 * PI.ln() + 2.0 * LN_2 * n - 2.5 * n.ln()
}

/// `ln(6/((m+2)(m+1)) · C(2m, m))`.
fn ln_hexagon_exact(m: usize) -> f64 {
    let ln_binom: f64 = (1..=m).map(|i| ((m + i) as f64 / i as f64).ln()).sum();
    6f64.ln() - ((m + 2) as f64).ln() - ((m + 1) as f64).ln() + ln_binom
}

pub fn ratio_row(n: usize) -> RatioRow {
    let f = n as f64;
    let literal = (ln_hexagon_display(f - 12.0) - ln_irreducible_display(f)).exp();
    let shifted = (ln_hexagon_display(f - 11.0) - ln_irreducible_display(f)).exp();
    RatioRow {
        n,
        literal,
        literal_rel_err: (literal / literal_target() - 1.0).abs(),
        shifted,
        shifted_rel_err: (shifted / shifted_target() - 1.0).abs(),
        exact_over_display: (ln_hexagon_exact(n - 12) - ln_irreducible_display(f)).exp(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountsReport {
    pub counts: Vec<CountRow>,
    pub ratios: Vec<RatioRow>,
}

impl CountsReport {
    pub fn all_match(&self) -> bool {
        self.counts.iter().all(CountRow::matches)
    }

    pub fn to_csv(&self, cfg: &ExperimentConfig) -> String {
        let mut s = cfg.header();
        s.push_str("\nsection,class,n,enumerated,formula,match\n");
        for r in &self.counts {
            let _ = writeln!(s, "count,{},{},{},{},{}", class_name(r.class), r.n, r.enumerated, r.formula, r.matches() as u8);
        }
        let _ = writeln!(
            s,
            "section,n,literal_ratio,literal_target,literal_rel_err,shifted_ratio,shifted_target,shifted_rel_err,exact_over_display"
        );
        for r in &self.ratios {
            let _ = writeln!(
                s,
                "ratio,{},{},{},{},{},{},{},{}",
                r.n,
                r.literal,
                literal_target(),
                r.literal_rel_err,
                r.shifted,
                shifted_target(),
                r.shifted_rel_err,
                r.exact_over_display
            );
        }
        s
    }
}

fn budget_error(e: EnumError) -> ExpError {
    match e {
        EnumError::Budget { .. } => ExpError::Budget(e.to_string()),
        EnumError::Unsupported(_) => ExpError::Input(e.to_string()),
    }
}

/// General counts for `1..=n` (default 6), the hexagon class at its four
/// smallest sizes, and the ratio along the ladder (sizes above 12).
pub fn run_counts(cfg: &ExperimentConfig) -> Result<CountsReport, ExpError> {
    let n = cfg.n.unwrap_or(6);
    let budget = Budget { quadrangulation: cfg.budget, hexagon: Budget::default().hexagon };
    if let Some(&bad) = cfg.ladder.iter().find(|&&n| n <= 12) {
        return Err(ExpError::Input(format!("ratio sizes must exceed 12, got {bad}")));
    }
    let mut counts = Vec::new();
    for k in HEXAGON_SIZES {
        let t = enumerate(MapClass::IrreducibleHexagon, k, &budget, false).map_err(budget_error)?;
        counts.push(CountRow { class: t.class, n: k, enumerated: t.count, formula: hexagon_formula((k - HEXAGON_OFFSET) as u64) });
    }
    for i in 1..=n {
        let t = enumerate(MapClass::GeneralQuadrangulation, i, &budget, false).map_err(budget_error)?;
        counts.push(CountRow { class: t.class, n: i, enumerated: t.count, formula: rooted_quadrangulation_count(i as u64) });
    }
    let ratios = cfg.ladder.iter().map(|&n| ratio_row(n)).collect();
    Ok(CountsReport { counts, ratios })
}
