//! Scenario configuration files.
//!
//! Line-oriented `key = value` pairs. `[scenario NAME]` opens a scenario;
//! keys before the first section are defaults inherited by every scenario.
//! `#` starts a comment. The full grammar is in `docs/formats.md`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::distributions::{CliqueSizeLaw, DegreeLaw, LawError};
use crate::netgen::GenParams;
use crate::percolate::{EnsembleOptions, DEFAULT_GIANT_FRACTION};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}, field `{field}`: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },
    #[error("scenario `{scenario}`: missing required field `{field}`")]
    Missing {
        scenario: String,
        field: &'static str,
    },
    #[error("scenario `{scenario}`: {message}")]
    Invalid { scenario: String, message: String },
    #[error("config defines no scenarios")]
    Empty,
}

/// A degree law as written in a config file.
#[derive(Debug, Clone, PartialEq)]
pub enum LawSpec {
    Poisson(f64),
    PowerLaw { exponent: f64, cutoff: f64 },
    Table(Vec<f64>),
    Point(usize),
}

impl LawSpec {
    pub fn build(&self) -> Result<DegreeLaw, LawError> {
        match self {
            LawSpec::Poisson(mean) => DegreeLaw::poisson(*mean),
            LawSpec::PowerLaw { exponent, cutoff } => {
                DegreeLaw::power_law_cutoff(*exponent, *cutoff)
            }
            LawSpec::Table(p) => DegreeLaw::table(p.clone()),
            LawSpec::Point(k) => Ok(DegreeLaw::point_mass(*k)),
        }
    }
}

impl fmt::Display for LawSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawSpec::Poisson(m) => write!(f, "poisson({m})"),
            LawSpec::PowerLaw { exponent, cutoff } => write!(f, "power_law({exponent}, {cutoff})"),
            LawSpec::Table(p) => {
                let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                write!(f, "table({})", parts.join(", "))
            }
            LawSpec::Point(k) => write!(f, "point({k})"),
        }
    }
}

impl FromStr for LawSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let open = s.find('(').ok_or("expected `kind(args)`")?;
        if !s.ends_with(')') {
            return Err("missing closing `)`".into());
        }
        let kind = s[..open].trim();
        let args = list(&s[open + 1..s.len() - 1])?;
        let want = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!(
                    "`{kind}` takes {n} argument(s), got {}",
                    args.len()
                ))
            }
        };
        match kind {
            "poisson" => {
                want(1)?;
                Ok(LawSpec::Poisson(args[0]))
            }
            "power_law" | "power_law_cutoff" => {
                want(2)?;
                Ok(LawSpec::PowerLaw {
                    exponent: args[0],
                    cutoff: args[1],
                })
            }
            "table" => Ok(LawSpec::Table(args)),
            "point" => {
                want(1)?;
                let k = args[0];
                if k < 0.0 || k.fract() != 0.0 {
                    return Err(format!("point mass needs a non-negative integer, got {k}"));
                }
                Ok(LawSpec::Point(k as usize))
            }
            other => Err(format!(
                "unknown law `{other}` (poisson, power_law, table, point)"
            )),
        }
    }
}

/// A transmissibility: one value or an inclusive `start:stop:step` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sweep {
    Single(f64),
    Range { start: f64, stop: f64, step: f64 },
}

impl Sweep {
    /// Grid points in increasing order; the stop value is included when the
    /// step lands on it up to rounding.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Sweep::Single(v) => vec![v],
            Sweep::Range { start, stop, step } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=count)
                    .map(|i| round12(start + i as f64 * step).min(stop))
                    .collect()
            }
        }
    }

    fn validate(&self) -> Result<(), String> {
        let in_unit = |v: f64| (0.0..=1.0).contains(&v);
        match *self {
            Sweep::Single(v) if in_unit(v) => Ok(()),
            Sweep::Single(v) => Err(format!("{v} is outside [0, 1]")),
            Sweep::Range { start, stop, step } => {
                if !in_unit(start) || !in_unit(stop) {
                    Err("range ends must lie in [0, 1]".into())
                } else if start > stop {
                    Err("range start exceeds stop".into())
                } else if step.is_nan() || step <= 0.0 {
                    Err("range step must be positive".into())
                } else {
                    Ok(())
                }
            }
        }
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sweep::Single(v) => write!(f, "{v}"),
            Sweep::Range { start, stop, step } => write!(f, "{start}:{stop}:{step}"),
        }
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| parse_number(t.trim());
        let sweep = match parts[..] {
            [v] => Sweep::Single(num(v)?),
            [a, b, c] => Sweep::Range {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            },
            _ => return Err("expected a value or `start:stop:step`".into()),
        };
        sweep.validate()?;
        Ok(sweep)
    }
}

/// Decimal number or exact fraction `a/b`.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
            if b == 0.0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            a / b
        }
        None => s.parse().map_err(|_| format!("bad number `{s}`"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn list(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_number).collect()
}

/// Preset clique-size distributions (`mu_1, mu_2, mu_3`), thirds exact.
pub fn preset_clique_sizes(scenario: usize) -> Option<Vec<f64>> {
    match scenario {
        1 => Some(vec![1.0]),
        2 => Some(vec![2.0 / 3.0, 1.0 / 3.0]),
        3 => Some(vec![1.0 / 3.0, 2.0 / 3.0]),
        4 => Some(vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub nodes: usize,
    pub clique_sizes: Vec<f64>,
    pub alpha: f64,
    pub type1: LawSpec,
    pub type2: LawSpec,
    pub t_w: Sweep,
    pub t_f: Sweep,
    pub replications: usize,
    pub seed: u64,
    pub giant_threshold: f64,
    pub regenerate: bool,
}

/// Validated laws of a scenario.
#[derive(Debug, Clone)]
pub struct ScenarioLaws {
    pub clique_law: CliqueSizeLaw,
    pub type1: DegreeLaw,
    pub type2: DegreeLaw,
}

impl ScenarioConfig {
    /// Preset scenario `k` with the given degree parameters.
    pub fn preset(k: usize, lambda: f64, alpha: f64, exponent: f64, cutoff: f64) -> Option<Self> {
        Some(Self {
            name: format!("scenario-{k}"),
            nodes: 12000,
            clique_sizes: preset_clique_sizes(k)?,
            alpha,
            type1: LawSpec::Poisson(lambda),
            type2: LawSpec::PowerLaw { exponent, cutoff },
            t_w: Sweep::Single(1.0),
            t_f: Sweep::Single(1.0),
            replications: 0,
            seed: 0,
            giant_threshold: DEFAULT_GIANT_FRACTION,
            regenerate: true,
        })
    }

    pub fn laws(&self) -> Result<ScenarioLaws, ConfigError> {
        let invalid = |message: String| ConfigError::Invalid {
            scenario: self.name.clone(),
            message,
        };
        Ok(ScenarioLaws {
            clique_law: CliqueSizeLaw::new(self.clique_sizes.clone())
                .map_err(|e| invalid(format!("clique_sizes: {e}")))?,
            type1: self
                .type1
                .build()
                .map_err(|e| invalid(format!("type1: {e}")))?,
            type2: self
                .type2
                .build()
                .map_err(|e| invalid(format!("type2: {e}")))?,
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |message: String| ConfigError::Invalid {
            scenario: self.name.clone(),
            message,
        };
        if self.nodes == 0 {
            return Err(invalid("nodes must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(invalid(format!("alpha {} outside [0, 1]", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.giant_threshold) {
            return Err(invalid("giant_threshold outside [0, 1]".into()));
        }
        self.t_w
            .validate()
            .map_err(|e| invalid(format!("t_w: {e}")))?;
        self.t_f
            .validate()
            .map_err(|e| invalid(format!("t_f: {e}")))?;
        if self.name.is_empty() || self.name.contains([',', '"', '\n']) {
            return Err(invalid(
                "names must be non-empty and free of commas and quotes".into(),
            ));
        }
        self.laws().map(|_| ())
    }

    pub fn gen_params(&self, laws: &ScenarioLaws) -> GenParams {
        GenParams {
            nodes: self.nodes,
            clique_law: laws.clique_law.clone(),
            alpha: self.alpha,
            type1_law: laws.type1.clone(),
            type2_law: laws.type2.clone(),
            seed: self.seed,
        }
    }

    pub fn ensemble_options(&self) -> EnsembleOptions {
        EnsembleOptions {
            replications: self.replications,
            giant_fraction: self.giant_threshold,
            regenerate: self.regenerate,
        }
    }

    /// Config-file text for this scenario; parses back to an equal value.
    pub fn to_config_string(&self) -> String {
        let sizes: Vec<String> = self.clique_sizes.iter().map(|x| x.to_string()).collect();
        format!(
            "[scenario {}]\nnodes = {}\nclique_sizes = {}\nalpha = {}\ntype1 = {}\ntype2 = {}\nt_w = {}\nt_f = {}\nreplications = {}\nseed = {}\ngiant_threshold = {}\nregenerate = {}\n",
            self.name,
            self.nodes,
            sizes.join(", "),
            self.alpha,
            self.type1,
            self.type2,
            self.t_w,
            self.t_f,
            self.replications,
            self.seed,
            self.giant_threshold,
            self.regenerate
        )
    }
}

#[derive(Debug, Clone, Default)]
struct Partial {
    nodes: Option<usize>,
    clique_sizes: Option<Vec<f64>>,
    alpha: Option<f64>,
    type1: Option<LawSpec>,
    type2: Option<LawSpec>,
    t_w: Option<Sweep>,
    t_f: Option<Sweep>,
    replications: Option<usize>,
    seed: Option<u64>,
    giant_threshold: Option<f64>,
    regenerate: Option<bool>,
}

impl Partial {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn int<T: FromStr>(v: &str) -> Result<T, String> {
            v.parse()
                .map_err(|_| format!("expected a non-negative integer, got `{v}`"))
        }
        match key {
            "nodes" => self.nodes = Some(int(value)?),
            "clique_sizes" => {
                let sizes = match value.strip_prefix("preset:") {
                    Some(k) => {
                        preset_clique_sizes(int(k.trim())?).ok_or("presets are numbered 1 to 4")?
                    }
                    None => list(value)?,
                };
                self.clique_sizes = Some(sizes);
            }
            "alpha" => self.alpha = Some(parse_number(value)?),
            "type1" => self.type1 = Some(value.parse()?),
            "type2" => self.type2 = Some(value.parse()?),
            "t_w" => self.t_w = Some(value.parse()?),
            "t_f" => self.t_f = Some(value.parse()?),
            "replications" => self.replications = Some(int(value)?),
            "seed" => self.seed = Some(int(value)?),
            "giant_threshold" => self.giant_threshold = Some(parse_number(value)?),
            "regenerate" => {
                self.regenerate = Some(match value {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(format!("expected true or false, got `{value}`")),
                })
            }
            _ => return Err("unknown field".into()),
        }
        Ok(())
    }

    fn merged_over(self, base: &Partial) -> Partial {
        Partial {
            nodes: self.nodes.or(base.nodes),
            clique_sizes: self.clique_sizes.or_else(|| base.clique_sizes.clone()),
            alpha: self.alpha.or(base.alpha),
            type1: self.type1.or_else(|| base.type1.clone()),
            type2: self.type2.or_else(|| base.type2.clone()),
            t_w: self.t_w.or(base.t_w),
            t_f: self.t_f.or(base.t_f),
            replications: self.replications.or(base.replications),
            seed: self.seed.or(base.seed),
            giant_threshold: self.giant_threshold.or(base.giant_threshold),
            regenerate: self.regenerate.or(base.regenerate),
        }
    }

    fn finish(self, name: String) -> Result<ScenarioConfig, ConfigError> {
        let missing = |field| ConfigError::Missing {
            scenario: name.clone(),
            field,
        };
        let cfg = ScenarioConfig {
            nodes: self.nodes.unwrap_or(12000),
            clique_sizes: self.clique_sizes.ok_or_else(|| missing("clique_sizes"))?,
            alpha: self.alpha.ok_or_else(|| missing("alpha"))?,
            type1: self.type1.ok_or_else(|| missing("type1"))?,
            type2: self.type2.ok_or_else(|| missing("type2"))?,
            t_w: self.t_w.ok_or_else(|| missing("t_w"))?,
            t_f: self.t_f.ok_or_else(|| missing("t_f"))?,
            replications: self.replications.unwrap_or(0),
            seed: self.seed.unwrap_or(0),
            giant_threshold: self.giant_threshold.unwrap_or(DEFAULT_GIANT_FRACTION),
            regenerate: self.regenerate.unwrap_or(true),
            name,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parse a config file into its scenarios, in file order.
pub fn parse_config(text: &str) -> Result<Vec<ScenarioConfig>, ConfigError> {
    let mut defaults = Partial::default();
    let mut sections: Vec<(String, Partial)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax {
                    line: line_no,
                    message: "section header must end with `]`".into(),
                })?;
            let name = header
                .trim()
                .strip_prefix("scenario")
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .ok_or_else(|| ConfigError::Syntax {
                    line: line_no,
                    message: "expected `[scenario NAME]`".into(),
                })?;
            if sections.iter().any(|(n, _)| n == name) {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: format!("duplicate scenario `{name}`"),
                });
            }
            sections.push((name.to_string(), Partial::default()));
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            message: "expected `key = value`".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let target = match sections.last_mut() {
            Some((_, p)) => p,
            None => &mut defaults,
        };
        target
            .set(key, value)
            .map_err(|message| ConfigError::Field {
                line: line_no,
                field: key.to_string(),
                message,
            })?;
    }
    if sections.is_empty() {
        return Err(ConfigError::Empty);
    }
    sections
        .into_iter()
        .map(|(name, p)| p.merged_over(&defaults).finish(name))
        .collect()
}
