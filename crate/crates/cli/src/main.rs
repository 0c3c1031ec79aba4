//! `spnet`: generate networks, solve the threshold equations, run
//! percolation ensembles and sweeps, and reproduce the figure data.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spnet::harness::{
    self, parse_config, parse_number, CompareOptions, Figure, LawSpec, ReproduceOptions, ResultRow,
    ScenarioConfig, Sweep,
};
use spnet::netgen;

const EXIT_CONFIG: u8 = 1;
const EXIT_GENERATION: u8 = 2;
const EXIT_COMPARISON: u8 = 3;

/// Replications used by `simulate` when the scenario asks for none.
const SIMULATE_REPLICATIONS: usize = 200;

#[derive(Parser)]
#[command(
    name = "spnet",
    version,
    about = "Information spreading on clique-structured social-physical networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one network and write it in the dump format.
    Generate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Analytic threshold and giant-component sizes over the T_w x T_f grid.
    Solve {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Percolation ensemble (plus analytic columns) for one scenario.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Every scenario of a config file, simulated where replications > 0.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Seed for every scenario, replacing the config's.
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the CSV data behind one of the built-in figures.
    Reproduce {
        /// threshold-boundary, pinf-transition, clique-sizes or node-sizes
        figure: Figure,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 12000)]
        nodes: usize,
        /// 0 writes the analytic curves only.
        #[arg(long, default_value_t = 200)]
        replications: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Deviation report for a results CSV; exits 3 when above tolerance.
    Compare {
        input: PathBuf,
        #[arg(long, default_value_t = 0.03)]
        tolerance: f64,
        /// Rows with sigma at or above this are checked.
        #[arg(long, default_value_t = 1.1)]
        above_sigma: f64,
        #[arg(long, default_value_t = 0.9)]
        near_low: f64,
    },
}

/// Scenario source: a config file, flags, or a config file with flag overrides.
#[derive(Args, Default)]
struct ScenarioArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Only this scenario of the config file.
    #[arg(long)]
    scenario: Option<String>,
    /// Name for a scenario built from flags alone.
    #[arg(long, default_value = "cli")]
    name: String,
    /// Built-in clique-size table 1 to 4 (same as `--clique-sizes preset:K`).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4), conflicts_with = "clique_sizes")]
    preset: Option<u8>,
    #[arg(long)]
    nodes: Option<usize>,
    /// Comma-separated probabilities of sizes 1, 2, ...; fractions like 1/3 allowed.
    #[arg(long, value_parser = clique_sizes_arg)]
    clique_sizes: Option<String>,
    #[arg(long, value_parser = number_arg)]
    alpha: Option<String>,
    /// e.g. poisson(2), power_law(3, 10), table(0.5, 0.5), point(2)
    #[arg(long)]
    type1: Option<LawSpec>,
    #[arg(long)]
    type2: Option<LawSpec>,
    /// A value or START:STOP:STEP.
    #[arg(long)]
    t_w: Option<Sweep>,
    #[arg(long)]
    t_f: Option<Sweep>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long, value_parser = number_arg)]
    giant_threshold: Option<String>,
    /// Percolate one network per grid point instead of a fresh one per replication.
    #[arg(long)]
    fixed_network: bool,
}

fn number_arg(s: &str) -> Result<String, String> {
    parse_number(s).map(|_| s.trim().to_string())
}

fn clique_sizes_arg(s: &str) -> Result<String, String> {
    if s.trim().starts_with("preset:") {
        return Ok(s.trim().to_string());
    }
    for part in s.split(',') {
        parse_number(part)?;
    }
    Ok(s.trim().to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl ToString) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.to_string(),
        }
    }
}

impl ScenarioArgs {
    /// Config lines for every flag that was given; they are appended after
    /// the scenario's own keys, so they win.
    fn override_lines(&self) -> String {
        let mut lines = Vec::new();
        let mut push = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                lines.push(format!("{key} = {v}"));
            }
        };
        push("nodes", self.nodes.map(|n| n.to_string()));
        push(
            "clique_sizes",
            self.preset
                .map(|k| format!("preset:{k}"))
                .or(self.clique_sizes.clone()),
        );
        push("alpha", self.alpha.clone());
        push("type1", self.type1.as_ref().map(ToString::to_string));
        push("type2", self.type2.as_ref().map(ToString::to_string));
        push("t_w", self.t_w.as_ref().map(ToString::to_string));
        push("t_f", self.t_f.as_ref().map(ToString::to_string));
        push("replications", self.replications.map(|n| n.to_string()));
        push("giant_threshold", self.giant_threshold.clone());
        if self.fixed_network {
            push("regenerate", Some("false".into()));
        }
        lines.into_iter().map(|l| l + "\n").collect()
    }

    /// `defaults` are config lines placed before the flags of a flags-only scenario.
    fn load_with(&self, defaults: &str) -> Result<Vec<ScenarioConfig>, Failure> {
        let overrides = self.override_lines();
        let Some(path) = &self.config else {
            if self.scenario.is_some() {
                return Err(Failure::config("--scenario needs --config"));
            }
            return parse_config(&format!("[scenario {}]\n{defaults}{overrides}", self.name))
                .map_err(Failure::config);
        };
        let text = read(path)?;
        let mut scenarios =
            parse_config(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
        if let Some(name) = &self.scenario {
            scenarios.retain(|s| &s.name == name);
            if scenarios.is_empty() {
                return Err(Failure::config(format!(
                    "{}: no scenario named `{name}`",
                    path.display()
                )));
            }
        }
        scenarios
            .iter()
            .map(|s| {
                let merged =
                    parse_config(&(s.to_config_string() + &overrides)).map_err(Failure::config)?;
                Ok(merged
                    .into_iter()
                    .next()
                    .expect("one section in, one scenario out"))
            })
            .collect()
    }

    fn load(&self) -> Result<Vec<ScenarioConfig>, Failure> {
        self.load_with("")
    }

    fn load_one(&self, defaults: &str) -> Result<ScenarioConfig, Failure> {
        let mut all = self.load_with(defaults)?;
        if all.len() != 1 {
            return Err(Failure::config(format!(
                "expected one scenario, the config has {}; pick one with --scenario",
                all.len()
            )));
        }
        Ok(all.remove(0))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes the rows, then reports generation failures recorded in them.
fn emit_rows(output: Option<&Path>, rows: &[ResultRow]) -> Result<(), Failure> {
    emit(output, &harness::write_csv(rows))?;
    let failed: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| r.note.starts_with("generation failed"))
        .collect();
    if let Some(first) = failed.first() {
        return Err(Failure {
            code: EXIT_GENERATION,
            message: format!(
                "{} of {} grid points failed to generate; first: {} ({})",
                failed.len(),
                rows.len(),
                first.scenario,
                first.note
            ),
        });
    }
    for r in rows.iter().filter(|r| !r.note.is_empty()) {
        eprintln!(
            "warning: {} T_w={} T_f={}: {}",
            r.scenario, r.t_w, r.t_f, r.note
        );
    }
    Ok(())
}

fn sweep_rows(configs: &[ScenarioConfig]) -> Result<Vec<ResultRow>, Failure> {
    harness::run_sweep(configs).map_err(Failure::config)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate {
            scenario,
            seed,
            output,
        } => {
            // transmissibilities play no part in generation
            let cfg = scenario.load_one("t_w = 1\nt_f = 1\n")?;
            let laws = cfg.laws().map_err(Failure::config)?;
            let mut params = cfg.gen_params(&laws);
            if let Some(seed) = seed {
                params.seed = seed;
            }
            let net = netgen::generate(&params).map_err(|e| Failure {
                code: if matches!(e, netgen::GenError::Wiring { .. }) {
                    EXIT_GENERATION
                } else {
                    EXIT_CONFIG
                },
                message: e.to_string(),
            })?;
            emit(output.as_deref(), &net.to_dump())
        }
        Command::Solve { scenario, output } => {
            let mut configs = scenario.load()?;
            for c in &mut configs {
                c.replications = 0;
            }
            emit_rows(output.as_deref(), &sweep_rows(&configs)?)
        }
        Command::Simulate {
            scenario,
            seed,
            output,
        } => {
            let mut cfg = scenario.load_one("")?;
            cfg.seed = seed;
            if cfg.replications == 0 {
                cfg.replications = SIMULATE_REPLICATIONS;
            }
            emit_rows(output.as_deref(), &sweep_rows(&[cfg])?)
        }
        Command::Sweep {
            scenario,
            seed,
            output,
        } => {
            let mut configs = scenario.load()?;
            for c in &mut configs {
                c.seed = seed;
            }
            emit_rows(output.as_deref(), &sweep_rows(&configs)?)
        }
        Command::Reproduce {
            figure,
            out_dir,
            nodes,
            replications,
            seed,
        } => {
            if nodes == 0 {
                return Err(Failure::config("--nodes must be at least 1"));
            }
            let opts = ReproduceOptions {
                nodes,
                replications,
                seed,
            };
            fs::create_dir_all(&out_dir).map_err(|e| {
                Failure::config(format!("cannot create {}: {e}", out_dir.display()))
            })?;
            for file in harness::reproduce(figure, &opts) {
                let path = out_dir.join(&file.file_name);
                emit(Some(&path), &file.contents)?;
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Compare {
            input,
            tolerance,
            above_sigma,
            near_low,
        } => {
            let rows = harness::read_csv(&read(&input)?)
                .map_err(|e| Failure::config(format!("{}: {e}", input.display())))?;
            let report = harness::compare(
                &rows,
                CompareOptions {
                    tolerance,
                    above_sigma,
                    near_low,
                },
            );
            print!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_COMPARISON,
                    message: format!(
                        "{} of {} checked rows exceed tolerance {tolerance}",
                        report.failures, report.checked
                    ),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
