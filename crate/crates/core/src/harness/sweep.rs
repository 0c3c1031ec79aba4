//! Parameter sweeps and the results CSV.

use thiserror::Error;

use super::config::{ConfigError, ScenarioConfig};
use crate::analytic::{self, FixedPointOptions};
use crate::percolate;

/// Column order of the results CSV. Bump [`CSV_SCHEMA_VERSION`] on any change.
pub const CSV_HEADER: [&str; 14] = [
    "scenario",
    "T_w",
    "T_f",
    "sigma",
    "S_c_analytic",
    "S_n_analytic",
    "S_c_sim_mean",
    "S_c_sim_std",
    "S_n_sim_mean",
    "S_n_sim_std",
    "p_inf",
    "replications",
    "seed",
    "note",
];

pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimColumns {
    pub s_c_mean: f64,
    pub s_c_std: f64,
    pub s_n_mean: f64,
    pub s_n_std: f64,
    pub p_inf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub t_w: f64,
    pub t_f: f64,
    pub sigma: f64,
    pub s_c_analytic: f64,
    pub s_n_analytic: f64,
    pub sim: Option<SimColumns>,
    pub replications: usize,
    pub seed: u64,
    /// Empty unless something went wrong at this grid point.
    pub note: String,
}

/// splitmix64 finalizer, used to give every grid point its own seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Grid points of a scenario in emission order (`T_w` outer, `T_f` inner).
pub fn grid(cfg: &ScenarioConfig) -> Vec<(f64, f64)> {
    let tfs = cfg.t_f.values();
    cfg.t_w
        .values()
        .into_iter()
        .flat_map(|tw| tfs.iter().map(move |&tf| (tw, tf)))
        .collect()
}

/// Analytic solve at every grid point, plus simulation when `replications > 0`.
///
/// Point `i` of a scenario simulates with seed `derive_seed(cfg.seed, i)`.
/// A generation failure is recorded in the row's note and the sweep goes on.
pub fn run_sweep(configs: &[ScenarioConfig]) -> Result<Vec<ResultRow>, ConfigError> {
    let mut rows = Vec::new();
    for cfg in configs {
        cfg.validate()?;
        let laws = cfg.laws()?;
        let profile = analytic::build_profile(&laws.clique_law, cfg.alpha);
        let params = cfg.gen_params(&laws);
        for (i, (t_w, t_f)) in grid(cfg).into_iter().enumerate() {
            let sol = analytic::solve_at(
                &profile,
                &laws.type1,
                &laws.type2,
                t_w,
                t_f,
                FixedPointOptions::default(),
            )
            .expect("sweep values are validated to lie in [0, 1]");
            let mut note = String::new();
            if !sol.converged {
                note = format!(
                    "fixed point not converged after {} iterations",
                    sol.iterations
                );
            }
            let sim = if cfg.replications > 0 {
                match percolate::run_ensemble(
                    &params,
                    t_w,
                    t_f,
                    &cfg.ensemble_options(),
                    derive_seed(cfg.seed, i as u64),
                ) {
                    Ok(out) => Some(SimColumns {
                        s_c_mean: out.s_c_mean,
                        s_c_std: out.s_c_std,
                        s_n_mean: out.s_n_mean,
                        s_n_std: out.s_n_std,
                        p_inf: out.p_inf,
                    }),
                    Err(e) => {
                        note = format!("generation failed: {e}");
                        None
                    }
                }
            } else {
                None
            };
            rows.push(ResultRow {
                scenario: cfg.name.clone(),
                t_w,
                t_f,
                sigma: sol.sigma,
                s_c_analytic: sol.s_c,
                s_n_analytic: sol.s_n,
                sim,
                replications: cfg.replications,
                seed: cfg.seed,
                note,
            });
        }
    }
    Ok(rows)
}

/// 10 significant digits, plain decimal where short enough.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let rounded: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    rounded.to_string()
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("results CSV header does not match schema version {CSV_SCHEMA_VERSION}")]
    Header,
    #[error("row {row}, column `{column}`: cannot parse `{value}`")]
    Value {
        row: usize,
        column: &'static str,
        value: String,
    },
}

pub fn write_csv(rows: &[ResultRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("writing to memory");
    for r in rows {
        let sim = |f: fn(&SimColumns) -> f64| {
            r.sim
                .as_ref()
                .map(|s| format_number(f(s)))
                .unwrap_or_default()
        };
        w.write_record([
            r.scenario.clone(),
            format_number(r.t_w),
            format_number(r.t_f),
            format_number(r.sigma),
            format_number(r.s_c_analytic),
            format_number(r.s_n_analytic),
            sim(|s| s.s_c_mean),
            sim(|s| s.s_c_std),
            sim(|s| s.s_n_mean),
            sim(|s| s.s_n_std),
            sim(|s| s.p_inf),
            r.replications.to_string(),
            r.seed.to_string(),
            r.note.clone(),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

pub fn read_csv(text: &str) -> Result<Vec<ResultRow>, CsvError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    if rdr.headers()?.iter().ne(CSV_HEADER) {
        return Err(CsvError::Header);
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let field = |c: usize| rec.get(c).unwrap_or("");
        let num = |c: usize| -> Result<f64, CsvError> {
            field(c).parse().map_err(|_| CsvError::Value {
                row,
                column: CSV_HEADER[c],
                value: field(c).to_string(),
            })
        };
        let int = |c: usize| -> Result<u64, CsvError> {
            field(c).parse().map_err(|_| CsvError::Value {
                row,
                column: CSV_HEADER[c],
                value: field(c).to_string(),
            })
        };
        let sim = if field(6).is_empty() {
            None
        } else {
            Some(SimColumns {
                s_c_mean: num(6)?,
                s_c_std: num(7)?,
                s_n_mean: num(8)?,
                s_n_std: num(9)?,
                p_inf: num(10)?,
            })
        };
        rows.push(ResultRow {
            scenario: field(0).to_string(),
            t_w: num(1)?,
            t_f: num(2)?,
            sigma: num(3)?,
            s_c_analytic: num(4)?,
            s_n_analytic: num(5)?,
            sim,
            replications: int(11)? as usize,
            seed: int(12)?,
            note: field(13).to_string(),
        });
    }
    Ok(rows)
}
