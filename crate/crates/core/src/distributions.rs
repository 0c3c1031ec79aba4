//! Degree and clique-size laws.
//!
//! Every law is stored as a finite probability table. Infinite-support laws
//! (Poisson, power law with exponential cutoff) are cut at the smallest
//! `k_max` whose remaining tail mass is below [`TAIL_MASS`] and then
//! renormalized, so generating functions, moments and the sampler all see
//! exactly the same distribution.

use rand::Rng;
use thiserror::Error;

/// Tail mass left out when truncating an infinite-support law.
pub const TAIL_MASS: f64 = 1e-12;

/// Hard cap on the support length of a truncated law.
pub const MAX_SUPPORT: usize = 10_000_000;

/// Tolerance on the total mass of a user-supplied table before renormalization.
const TABLE_MASS_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LawError {
    #[error("poisson mean must be finite and >= 0, got {0}")]
    PoissonMean(f64),
    #[error("power-law exponent must be finite and > 1, got {0}")]
    PowerLawExponent(f64),
    #[error("power-law cutoff must be > 0, got {0}")]
    PowerLawCutoff(f64),
    #[error("probability table is empty")]
    EmptyTable,
    #[error("probability table entry {index} is {value}; entries must be finite and >= 0")]
    BadEntry { index: usize, value: f64 },
    #[error("probability table sums to {0}, expected 1")]
    BadMass(f64),
    #[error("law needs more than {MAX_SUPPORT} terms to reach tail mass {TAIL_MASS}")]
    SupportTooLarge,
    #[error("transmissibility must lie in [0, 1], got {0}")]
    Transmissibility(f64),
}

/// The parametric family a [`DegreeLaw`] was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LawKind {
    Poisson { mean: f64 },
    PowerLawCutoff { exponent: f64, cutoff: f64 },
    Table,
}

/// Generating-function view shared by plain and thinned degree laws.
///
/// `eval` and `deriv` are only meaningful on `[0, 1]`.
pub trait DegreeGf {
    fn eval(&self, x: f64) -> f64;
    fn deriv(&self, x: f64) -> f64;
    fn mean(&self) -> f64;
    fn second_moment(&self) -> f64;
}

/// A distribution over non-negative integer degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeLaw {
    kind: LawKind,
    probs: Vec<f64>,
    cdf: Vec<f64>,
    mean: f64,
    second_moment: f64,
    /// Power-law normalization constant; 1 for the other kinds.
    normalization: f64,
}

impl DegreeLaw {
    /// Poisson law with the given mean.
    pub fn poisson(mean: f64) -> Result<Self, LawError> {
        if !mean.is_finite() || mean < 0.0 {
            return Err(LawError::PoissonMean(mean));
        }
        if mean == 0.0 {
            return Self::build(LawKind::Poisson { mean }, vec![1.0], 1.0);
        }
        let ln_mean = mean.ln();
        let mut probs = Vec::new();
        let mut ln_fact = 0.0_f64;
        let mut cumulative = 0.0_f64;
        for k in 0..MAX_SUPPORT {
            if k > 0 {
                ln_fact += (k as f64).ln();
            }
            let p = (k as f64 * ln_mean - mean - ln_fact).exp();
            probs.push(p);
            cumulative += p;
            // Past the mode the pmf is decreasing, so 1 - cumulative is the tail.
            if k as f64 > mean && 1.0 - cumulative < TAIL_MASS {
                return Self::build(LawKind::Poisson { mean }, probs, cumulative);
            }
        }
        Err(LawError::SupportTooLarge)
    }

    /// `p_0 = 0`, `p_k = k^-exponent * exp(-k / cutoff) / C` for `k >= 1`.
    ///
    /// `C` is computed by direct summation over the truncated support.
    pub fn power_law_cutoff(exponent: f64, cutoff: f64) -> Result<Self, LawError> {
        if !exponent.is_finite() || exponent <= 1.0 {
            return Err(LawError::PowerLawExponent(exponent));
        }
        if cutoff.is_nan() || cutoff <= 0.0 {
            return Err(LawError::PowerLawCutoff(cutoff));
        }
        let decay = (-1.0 / cutoff).exp();
        let mut weights = vec![0.0];
        let mut total = 0.0_f64;
        for k in 1..MAX_SUPPORT {
            let kf = k as f64;
            let w = kf.powf(-exponent) * (-kf / cutoff).exp();
            weights.push(w);
            total += w;
            // Tail after k: geometric bound from the cutoff, integral bound from the power law.
            let geometric = if decay < 1.0 {
                w * decay / (1.0 - decay)
            } else {
                f64::INFINITY
            };
            let integral = kf.powf(1.0 - exponent) / (exponent - 1.0);
            if geometric.min(integral) < TAIL_MASS * total {
                return Self::build(LawKind::PowerLawCutoff { exponent, cutoff }, weights, total);
            }
        }
        Err(LawError::SupportTooLarge)
    }

    /// Explicit table `probs[k] = P[degree = k]`.
    pub fn table(probs: Vec<f64>) -> Result<Self, LawError> {
        let total = validate_table(&probs)?;
        Self::build(LawKind::Table, probs, total)
    }

    /// Point mass at `k`.
    pub fn point_mass(k: usize) -> Self {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        Self::build(LawKind::Table, probs, 1.0).expect("point mass is a valid law")
    }

    fn build(kind: LawKind, mut probs: Vec<f64>, total: f64) -> Result<Self, LawError> {
        for p in probs.iter_mut() {
            *p /= total;
        }
        while probs.len() > 1 && probs.last() == Some(&0.0) {
            probs.pop();
        }
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        let mut mean = 0.0;
        let mut second = 0.0;
        for (k, &p) in probs.iter().enumerate() {
            acc += p;
            cdf.push(acc);
            let kf = k as f64;
            mean += kf * p;
            second += kf * kf * p;
        }
        let normalization = match kind {
            LawKind::PowerLawCutoff { .. } => total,
            _ => 1.0,
        };
        Ok(Self {
            kind,
            probs,
            cdf,
            mean,
            second_moment: second,
            normalization,
        })
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    /// Probabilities indexed by degree, up to the truncation point.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Largest degree with non-zero probability after truncation.
    pub fn k_max(&self) -> usize {
        self.probs.len() - 1
    }

    /// The power-law normalization constant `C` (1 for other kinds).
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Draw a degree by inverse-CDF lookup over the truncated table.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.cdf[self.cdf.len() - 1];
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.probs.len() - 1)
    }

    /// Binomial thinning with retention probability `t`.
    pub fn thin(&self, t: f64) -> Result<ThinnedDegreeLaw, LawError> {
        ThinnedDegreeLaw::new(self.clone(), t)
    }
}

impl DegreeGf for DegreeLaw {
    fn eval(&self, x: f64) -> f64 {
        self.probs.iter().rev().fold(0.0, |acc, &p| acc * x + p)
    }

    fn deriv(&self, x: f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &p)| acc * x + k as f64 * p)
    }

    fn mean(&self) -> f64 {
        self.mean
    }

    fn second_moment(&self) -> f64 {
        self.second_moment
    }
}

/// A degree law seen through independent edge retention with probability `t`.
///
/// Held as `(base, t)`; the thinned probabilities are never materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinnedDegreeLaw {
    base: DegreeLaw,
    t: f64,
}

impl ThinnedDegreeLaw {
    pub fn new(base: DegreeLaw, t: f64) -> Result<Self, LawError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(LawError::Transmissibility(t));
        }
        Ok(Self { base, t })
    }

    pub fn base(&self) -> &DegreeLaw {
        &self.base
    }

    pub fn transmissibility(&self) -> f64 {
        self.t
    }

    /// Thinning twice is thinning once by the product.
    pub fn thin(&self, t: f64) -> Result<ThinnedDegreeLaw, LawError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(LawError::Transmissibility(t));
        }
        Ok(Self {
            base: self.base.clone(),
            t: self.t * t,
        })
    }

    fn inner(&self, x: f64) -> f64 {
        1.0 + self.t * (x - 1.0)
    }
}

impl DegreeGf for ThinnedDegreeLaw {
    fn eval(&self, x: f64) -> f64 {
        self.base.eval(self.inner(x))
    }

    fn deriv(&self, x: f64) -> f64 {
        self.t * self.base.deriv(self.inner(x))
    }

    fn mean(&self) -> f64 {
        self.t * self.base.mean
    }

    fn second_moment(&self) -> f64 {
        let t = self.t;
        t * t * (self.base.second_moment - self.base.mean) + t * self.base.mean
    }
}

/// Distribution of clique sizes `n = 1..=D`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueSizeLaw {
    /// `probs[n - 1] = mu_n`.
    probs: Vec<f64>,
    cdf: Vec<f64>,
}

impl CliqueSizeLaw {
    /// `probs[i]` is the fraction of cliques of size `i + 1`.
    pub fn new(probs: Vec<f64>) -> Result<Self, LawError> {
        let total = validate_table(&probs)?;
        let mut probs: Vec<f64> = probs.into_iter().map(|p| p / total).collect();
        while probs.len() > 1 && probs.last() == Some(&0.0) {
            probs.pop();
        }
        let cdf = probs
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Ok(Self { probs, cdf })
    }

    /// All cliques have size `n` (`n >= 1`).
    pub fn point_mass(n: usize) -> Self {
        assert!(n >= 1, "clique size must be at least 1");
        let mut probs = vec![0.0; n];
        probs[n - 1] = 1.0;
        Self::new(probs).expect("point mass is a valid clique law")
    }

    /// Largest possible clique size `D`.
    pub fn max_size(&self) -> usize {
        self.probs.len()
    }

    /// `mu_n`, zero outside `1..=D`.
    pub fn prob(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        self.probs.get(n - 1).copied().unwrap_or(0.0)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = (i + 1) as f64 - m;
                d * d * p
            })
            .sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.cdf[self.cdf.len() - 1];
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.probs.len() - 1)
            + 1
    }
}

fn validate_table(probs: &[f64]) -> Result<f64, LawError> {
    if probs.is_empty() {
        return Err(LawError::EmptyTable);
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(LawError::BadEntry { index, value });
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > TABLE_MASS_TOL {
        return Err(LawError::BadMass(total));
    }
    Ok(total)
}
