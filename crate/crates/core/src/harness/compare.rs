//! Simulation-versus-theory deviation reports.

use std::fmt;

use super::sweep::{format_number, ResultRow};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    /// Allowed |sim - analytic| for rows above threshold.
    pub tolerance: f64,
    /// Rows with `sigma >= above_sigma` are checked.
    pub above_sigma: f64,
    /// Rows with `near_low < sigma < above_sigma` are near-critical.
    pub near_low: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            tolerance: 0.03,
            above_sigma: 1.1,
            near_low: 0.9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Above,
    NearCritical,
    Below,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub scenario: String,
    pub t_w: f64,
    pub t_f: f64,
    pub sigma: f64,
    pub s_c_dev: f64,
    pub s_n_dev: f64,
    pub regime: Regime,
}

impl Deviation {
    pub fn max(&self) -> f64 {
        self.s_c_dev.max(self.s_n_dev)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub options: CompareOptions,
    pub deviations: Vec<Deviation>,
    /// Rows without simulation columns.
    pub skipped: Vec<String>,
    /// Largest and mean deviation over the checked (above-threshold) rows.
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub checked: usize,
    pub failures: usize,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn compare(rows: &[ResultRow], options: CompareOptions) -> ComparisonReport {
    let mut deviations = Vec::new();
    let mut skipped = Vec::new();
    for r in rows {
        let Some(sim) = r.sim else {
            skipped.push(format!(
                "{} T_w={} T_f={}: no simulation columns",
                r.scenario,
                format_number(r.t_w),
                format_number(r.t_f)
            ));
            continue;
        };
        let regime = if r.sigma >= options.above_sigma {
            Regime::Above
        } else if r.sigma > options.near_low {
            Regime::NearCritical
        } else {
            Regime::Below
        };
        deviations.push(Deviation {
            scenario: r.scenario.clone(),
            t_w: r.t_w,
            t_f: r.t_f,
            sigma: r.sigma,
            s_c_dev: (sim.s_c_mean - r.s_c_analytic).abs(),
            s_n_dev: (sim.s_n_mean - r.s_n_analytic).abs(),
            regime,
        });
    }
    let checked: Vec<f64> = deviations
        .iter()
        .filter(|d| d.regime == Regime::Above)
        .map(Deviation::max)
        .collect();
    let max_deviation = checked.iter().copied().fold(0.0, f64::max);
    let mean_deviation = if checked.is_empty() {
        0.0
    } else {
        checked.iter().sum::<f64>() / checked.len() as f64
    };
    // NaN deviations count as failures
    let failures = checked
        .iter()
        .filter(|&&d| d.is_nan() || d > options.tolerance)
        .count();
    ComparisonReport {
        options,
        checked: checked.len(),
        deviations,
        skipped,
        max_deviation,
        mean_deviation,
        failures,
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario,T_w,T_f,sigma,dev_S_c,dev_S_n,regime,status")?;
        for d in &self.deviations {
            let (regime, status) = match d.regime {
                Regime::Above if d.max() <= self.options.tolerance => ("above", "ok"),
                Regime::Above => ("above", "FAIL"),
                Regime::NearCritical => ("near-critical", "excluded"),
                Regime::Below => ("below", "excluded"),
            };
            writeln!(
                f,
                "{},{},{},{},{},{},{},{}",
                d.scenario,
                format_number(d.t_w),
                format_number(d.t_f),
                format_number(d.sigma),
                format_number(d.s_c_dev),
                format_number(d.s_n_dev),
                regime,
                status
            )?;
        }
        for s in &self.skipped {
            writeln!(f, "# skipped {s}")?;
        }
        writeln!(
            f,
            "# checked {} rows with sigma >= {}: max deviation {}, mean {}, tolerance {}: {}",
            self.checked,
            self.options.above_sigma,
            format_number(self.max_deviation),
            format_number(self.mean_deviation),
            self.options.tolerance,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sweep::SimColumns;

    fn row(sigma: f64, analytic: f64, sim: Option<f64>) -> ResultRow {
        ResultRow {
            scenario: "s".into(),
            t_w: 0.3,
            t_f: 1.0,
            sigma,
            s_c_analytic: analytic,
            s_n_analytic: analytic,
            sim: sim.map(|v| SimColumns {
                s_c_mean: v,
                s_c_std: 0.0,
                s_n_mean: v,
                s_n_std: 0.0,
                p_inf: 1.0,
            }),
            replications: 1,
            seed: 0,
            note: String::new(),
        }
    }

    #[test]
    fn identical_values_have_zero_deviation() {
        let rep = compare(&[row(2.0, 0.5, Some(0.5))], CompareOptions::default());
        assert_eq!(rep.max_deviation, 0.0);
        assert!(rep.passed());
        assert_eq!(rep.checked, 1);
    }

    #[test]
    fn regimes_and_failures() {
        let rows = [
            row(2.0, 0.5, Some(0.54)),
            row(1.0, 0.0, Some(0.2)),
            row(0.5, 0.0, Some(0.01)),
            row(2.0, 0.5, None),
        ];
        let rep = compare(&rows, CompareOptions::default());
        assert_eq!(rep.checked, 1);
        assert_eq!(rep.failures, 1);
        assert_eq!(rep.deviations[1].regime, Regime::NearCritical);
        assert_eq!(rep.deviations[2].regime, Regime::Below);
        assert_eq!(rep.skipped.len(), 1);
        let text = rep.to_string();
        assert!(text.contains("near-critical,excluded"));
        assert!(text.contains("FAIL"));
    }
}
