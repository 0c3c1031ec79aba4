//! Built-in recipes for the four figures: threshold boundary, p_inf
//! transition, influenced-clique and influenced-node fractions.

use std::fmt;
use std::str::FromStr;

use super::config::{ScenarioConfig, Sweep};
use super::sweep::{derive_seed, format_number, run_sweep, write_csv, ResultRow};
use crate::analytic::{self, CriticalTw};

/// Parameters of the threshold and p_inf figures.
pub const THRESHOLD_LAMBDA: f64 = 1.5;
pub const THRESHOLD_ALPHA: f64 = 0.1;
/// Parameters of the size figures.
pub const SIZE_LAMBDA: f64 = 2.0;
pub const SIZE_ALPHA: f64 = 0.3;
pub const SIZE_T_W: f64 = 0.3;
pub const PL_EXPONENT: f64 = 3.0;
pub const PL_CUTOFF: f64 = 10.0;
pub const PINF_T_F: f64 = 0.4;

pub const BOUNDARY_STEP: f64 = 0.02;
pub const PINF_STEP: f64 = 0.02;
pub const SIZE_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    ThresholdBoundary,
    PinfTransition,
    CliqueSizes,
    NodeSizes,
}

impl Figure {
    pub const ALL: [Figure; 4] = [
        Figure::ThresholdBoundary,
        Figure::PinfTransition,
        Figure::CliqueSizes,
        Figure::NodeSizes,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Figure::ThresholdBoundary => "threshold-boundary",
            Figure::PinfTransition => "pinf-transition",
            Figure::CliqueSizes => "clique-sizes",
            Figure::NodeSizes => "node-sizes",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| format!("unknown figure `{s}`; expected one of threshold-boundary, pinf-transition, clique-sizes, node-sizes"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproduceOptions {
    pub nodes: usize,
    /// 0 skips simulation.
    pub replications: usize,
    pub seed: u64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            nodes: 12000,
            replications: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureFile {
    pub file_name: String,
    pub contents: String,
}

fn scenarios(
    lambda: f64,
    alpha: f64,
    t_w: Sweep,
    t_f: Sweep,
    opts: &ReproduceOptions,
) -> Vec<ScenarioConfig> {
    (1..=4)
        .map(|k| {
            let mut cfg = ScenarioConfig::preset(k, lambda, alpha, PL_EXPONENT, PL_CUTOFF)
                .expect("preset scenario");
            cfg.nodes = opts.nodes;
            cfg.t_w = t_w;
            cfg.t_f = t_f;
            cfg.replications = opts.replications;
            cfg.seed = derive_seed(opts.seed, k as u64);
            cfg
        })
        .collect()
}

/// Scenario configs behind a simulated figure (empty for the boundary figure).
pub fn figure_scenarios(figure: Figure, opts: &ReproduceOptions) -> Vec<ScenarioConfig> {
    let unit = |step| Sweep::Range {
        start: 0.0,
        stop: 1.0,
        step,
    };
    match figure {
        Figure::ThresholdBoundary => Vec::new(),
        Figure::PinfTransition => scenarios(
            THRESHOLD_LAMBDA,
            THRESHOLD_ALPHA,
            unit(PINF_STEP),
            Sweep::Single(PINF_T_F),
            opts,
        ),
        Figure::CliqueSizes | Figure::NodeSizes => scenarios(
            SIZE_LAMBDA,
            SIZE_ALPHA,
            Sweep::Single(SIZE_T_W),
            unit(SIZE_STEP),
            opts,
        ),
    }
}

/// Minimal `T_w` against `T_f` for each preset scenario.
pub fn threshold_boundary() -> Vec<(String, f64, CriticalTw)> {
    let tfs = Sweep::Range {
        start: 0.0,
        stop: 1.0,
        step: BOUNDARY_STEP,
    }
    .values();
    let cfgs = scenarios(
        THRESHOLD_LAMBDA,
        THRESHOLD_ALPHA,
        Sweep::Single(1.0),
        Sweep::Single(1.0),
        &ReproduceOptions::default(),
    );
    let mut out = Vec::new();
    for cfg in cfgs {
        let laws = cfg.laws().expect("built-in laws are valid");
        let profile = analytic::build_profile(&laws.clique_law, cfg.alpha);
        for &tf in &tfs {
            let crit = analytic::critical_tw(&profile, &laws.type1, &laws.type2, tf)
                .expect("grid lies in [0, 1]");
            out.push((cfg.name.clone(), tf, crit));
        }
    }
    out
}

fn csv_text(header: &[&str], records: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in records {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

fn size_series(
    rows: &[ResultRow],
    pick_sc: bool,
    label: impl Fn(&str) -> String,
) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let (analytic, mean, std) = if pick_sc {
                (
                    r.s_c_analytic,
                    r.sim.map(|s| s.s_c_mean),
                    r.sim.map(|s| s.s_c_std),
                )
            } else {
                (
                    r.s_n_analytic,
                    r.sim.map(|s| s.s_n_mean),
                    r.sim.map(|s| s.s_n_std),
                )
            };
            vec![
                label(&r.scenario),
                format_number(r.t_f),
                format_number(analytic),
                opt(mean),
                opt(std),
            ]
        })
        .collect()
}

/// Plot-ready CSV for a figure; simulated figures also get `<id>-rows.csv`
/// with the full result rows.
pub fn reproduce(figure: Figure, opts: &ReproduceOptions) -> Vec<FigureFile> {
    let file = |name: String, contents| FigureFile {
        file_name: name,
        contents,
    };
    if figure == Figure::ThresholdBoundary {
        let records = threshold_boundary()
            .into_iter()
            .map(|(s, tf, crit)| vec![s, format_number(tf), opt(crit.value())]);
        return vec![file(
            format!("{figure}.csv"),
            csv_text(&["series", "T_f", "T_w_min"], records),
        )];
    }
    let rows = run_sweep(&figure_scenarios(figure, opts)).expect("built-in configs are valid");
    let plot = match figure {
        Figure::PinfTransition => {
            let records = rows.iter().map(|r| {
                vec![
                    r.scenario.clone(),
                    format_number(r.t_w),
                    format_number(r.sigma),
                    opt(r.sim.map(|s| s.p_inf)),
                ]
            });
            csv_text(&["series", "T_w", "sigma", "p_inf"], records)
        }
        Figure::CliqueSizes => csv_text(
            &[
                "series",
                "T_f",
                "S_c_analytic",
                "S_c_sim_mean",
                "S_c_sim_std",
            ],
            size_series(&rows, true, str::to_string),
        ),
        Figure::NodeSizes => {
            let mut records = size_series(&rows, false, str::to_string);
            let scenario1: Vec<ResultRow> = rows
                .iter()
                .filter(|r| r.scenario == "scenario-1")
                .cloned()
                .collect();
            records.extend(size_series(&scenario1, true, |s| format!("{s}-cliques")));
            csv_text(
                &[
                    "series",
                    "T_f",
                    "S_n_analytic",
                    "S_n_sim_mean",
                    "S_n_sim_std",
                ],
                records,
            )
        }
        Figure::ThresholdBoundary => unreachable!(),
    };
    vec![
        file(format!("{figure}.csv"), plot),
        file(format!("{figure}-rows.csv"), write_csv(&rows)),
    ]
}
