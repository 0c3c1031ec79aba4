//! Generating-function theory for the clique-level graph.
//!
//! A super node standing for a size-`n` clique with `m` online members has
//! type-1 degree `K_n = k_1 + ... + k_n` and type-2 degree `K_m = k'_1 + ... + k'_m`
//! with independent per-member draws, so `E[h^K_n] = g(h)^n` and every
//! quantity below reduces to the per-node laws. All entry points take the
//! per-node laws through [`DegreeGf`], so thinned laws (general
//! transmissibilities) and plain laws share one code path.

use crate::distributions::{CliqueSizeLaw, DegreeGf, DegreeLaw, LawError};

/// Below `1 + CRITICAL_EPS` the spectral radius is treated as subcritical.
pub const CRITICAL_EPS: f64 = 1e-12;

/// Joint law of clique size and online-member count.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueProfile {
    alpha: f64,
    mu_w: Vec<f64>,
    /// `mu_nm[n - 1][m]` for `0 <= m <= n`.
    mu_nm: Vec<Vec<f64>>,
    /// `mu_f[m]` for `0 <= m <= D`.
    mu_f: Vec<f64>,
}

pub fn build_profile(clique_law: &CliqueSizeLaw, alpha: f64) -> CliqueProfile {
    assert!((0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1]");
    let d = clique_law.max_size();
    let mu_w = clique_law.probabilities().to_vec();
    let mu_nm: Vec<Vec<f64>> = (1..=d)
        .map(|n| {
            (0..=n)
                .map(|m| {
                    mu_w[n - 1]
                        * binomial(n, m)
                        * alpha.powi(m as i32)
                        * (1.0 - alpha).powi((n - m) as i32)
                })
                .collect()
        })
        .collect();
    let mu_f = (0..=d)
        .map(|m| (m.max(1)..=d).map(|n| mu_nm[n - 1][m]).sum())
        .collect();
    CliqueProfile {
        alpha,
        mu_w,
        mu_nm,
        mu_f,
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl CliqueProfile {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_size(&self) -> usize {
        self.mu_w.len()
    }

    /// `mu_n^w`.
    pub fn mu_w(&self, n: usize) -> f64 {
        self.mu_w[n - 1]
    }

    /// `mu_nm`, zero when `m > n`.
    pub fn mu_nm(&self, n: usize, m: usize) -> f64 {
        self.mu_nm[n - 1].get(m).copied().unwrap_or(0.0)
    }

    /// Fraction of cliques with exactly `m` online members.
    pub fn mu_f(&self, m: usize) -> f64 {
        self.mu_f[m]
    }

    /// Mean clique size `C = sum_n n mu_n^w`.
    pub fn mean_size(&self) -> f64 {
        self.mu_w
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }

    /// All `(n, m, mu_nm)` cells with `1 <= n <= D`, `0 <= m <= n`.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.mu_nm
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(m, &p)| (i + 1, m, p)))
    }
}

/// First and second moments of the super-node degree vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mean_w: f64,
    pub mean_f: f64,
    pub cross: f64,
    pub second_w: f64,
    pub second_f: f64,
}

pub fn moments(profile: &CliqueProfile, kw: &dyn DegreeGf, kf: &dyn DegreeGf) -> MomentSet {
    let (ew, ew2) = (kw.mean(), kw.second_moment());
    let (ef, ef2) = (kf.mean(), kf.second_moment());
    let d = profile.max_size();
    let (mut mean_w, mut second_w, mut mean_f, mut second_f) = (0.0, 0.0, 0.0, 0.0);
    for n in 1..=d {
        let nf = n as f64;
        mean_w += profile.mu_w(n) * nf * ew;
        second_w += profile.mu_w(n) * (nf * ew2 + (nf * nf - nf) * ew * ew);
        let mu = profile.mu_f(n);
        mean_f += mu * nf * ef;
        second_f += mu * (nf * ef2 + (nf * nf - nf) * ef * ef);
    }
    let cross = profile
        .cells()
        .filter(|&(_, m, _)| m >= 1)
        .map(|(n, m, p)| p * (n * m) as f64 * ew * ef)
        .sum();
    MomentSet {
        mean_w,
        mean_f,
        cross,
        second_w,
        second_f,
    }
}

/// Mean-offspring matrix of the two-type branching process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchingMatrix {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl BranchingMatrix {
    /// `None` entries belong to a link type with zero mean degree.
    pub fn from_moments(m: &MomentSet) -> (Option<f64>, Option<f64>, Self) {
        let has_w = m.mean_w > 0.0;
        let has_f = m.mean_f > 0.0;
        let a11 = if has_w {
            m.second_w / m.mean_w - 1.0
        } else {
            0.0
        };
        let a12 = if has_w { m.cross / m.mean_w } else { 0.0 };
        let a21 = if has_f { m.cross / m.mean_f } else { 0.0 };
        let a22 = if has_f {
            m.second_f / m.mean_f - 1.0
        } else {
            0.0
        };
        (
            has_w.then_some(a11),
            has_f.then_some(a22),
            Self { a11, a12, a21, a22 },
        )
    }

    pub fn spectral_radius(&self) -> f64 {
        let diff = self.a11 - self.a22;
        0.5 * (self.a11 + self.a22 + (diff * diff + 4.0 * self.a12 * self.a21).sqrt())
    }
}

/// Largest eigenvalue of the branching matrix. A link type with zero mean
/// degree drops out; with no edges at all the radius is 0.
pub fn spectral_radius(m: &MomentSet) -> f64 {
    match BranchingMatrix::from_moments(m) {
        (Some(_), Some(_), matrix) => matrix.spectral_radius(),
        (Some(a11), None, _) => a11,
        (None, Some(a22), _) => a22,
        (None, None, _) => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub h1: f64,
    pub h2: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// The map `(h1, h2) -> F(h1, h2)` whose smallest fixed point gives the
/// probabilities that a type-1 / type-2 edge leads to a finite branch.
pub struct Recursion<'a> {
    profile: &'a CliqueProfile,
    kw: &'a dyn DegreeGf,
    kf: &'a dyn DegreeGf,
    mean_w: f64,
    mean_f: f64,
}

impl<'a> Recursion<'a> {
    pub fn new(profile: &'a CliqueProfile, kw: &'a dyn DegreeGf, kf: &'a dyn DegreeGf) -> Self {
        let m = moments(profile, kw, kf);
        Self {
            profile,
            kw,
            kf,
            mean_w: m.mean_w,
            mean_f: m.mean_f,
        }
    }

    /// One application of the map. Coordinates of absent link types stay at 1.
    pub fn apply(&self, h1: f64, h2: f64) -> (f64, f64) {
        let (g, dg) = (self.kw.eval(h1), self.kw.deriv(h1));
        let (q, dq) = (self.kf.eval(h2), self.kf.deriv(h2));
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for (n, m, mu) in self.profile.cells() {
            let q_m = q.powi(m as i32);
            s1 += mu * n as f64 * g.powi(n as i32 - 1) * dg * q_m;
            if m >= 1 {
                s2 += mu * g.powi(n as i32) * m as f64 * q.powi(m as i32 - 1) * dq;
            }
        }
        let next1 = if self.mean_w > 0.0 {
            (s1 / self.mean_w).min(1.0)
        } else {
            1.0
        };
        let next2 = if self.mean_f > 0.0 {
            (s2 / self.mean_f).min(1.0)
        } else {
            1.0
        };
        (next1, next2)
    }

    /// Iterates `F^k(0, 0)` for `k = 1, 2, ...`.
    pub fn iterates(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let start = self.start();
        std::iter::successors(Some(start), move |&(a, b)| Some(self.apply(a, b))).skip(1)
    }

    fn start(&self) -> (f64, f64) {
        (
            if self.mean_w > 0.0 { 0.0 } else { 1.0 },
            if self.mean_f > 0.0 { 0.0 } else { 1.0 },
        )
    }
}

/// Smallest fixed point by monotone iteration from `(0, 0)`.
///
/// Converged means the max-norm step is below `tol` and so is the
/// geometric tail estimate `step * r / (1 - r)`, `r` being the ratio of
/// successive steps. Otherwise the last iterate is returned unconverged.
pub fn fixed_point(
    profile: &CliqueProfile,
    kw: &dyn DegreeGf,
    kf: &dyn DegreeGf,
    options: FixedPointOptions,
) -> FixedPoint {
    let rec = Recursion::new(profile, kw, kf);
    let (mut h1, mut h2) = rec.start();
    let mut prev_step = f64::INFINITY;
    for it in 1..=options.max_iter {
        let (n1, n2) = rec.apply(h1, h2);
        let step = (n1 - h1).abs().max((n2 - h2).abs());
        h1 = n1;
        h2 = n2;
        if step < options.tol {
            let ratio = if prev_step > 0.0 {
                step / prev_step
            } else {
                0.0
            };
            if step == 0.0 || (ratio < 1.0 && step * ratio / (1.0 - ratio) < options.tol) {
                return FixedPoint {
                    h1,
                    h2,
                    converged: true,
                    iterations: it,
                };
            }
        }
        prev_step = step;
    }
    FixedPoint {
        h1,
        h2,
        converged: false,
        iterations: options.max_iter,
    }
}

/// Fraction of cliques (`S_c`) and of individuals (`S_n`) in the giant component.
pub fn epidemic_sizes(
    profile: &CliqueProfile,
    kw: &dyn DegreeGf,
    kf: &dyn DegreeGf,
    h1: f64,
    h2: f64,
) -> (f64, f64) {
    let g = kw.eval(h1);
    let q = kf.eval(h2);
    let mut s_c = 0.0;
    let mut s_n = 0.0;
    for (n, m, mu) in profile.cells() {
        // m = 0 gives q^0 = 1: no online members, no type-2 degree.
        let finite = g.powi(n as i32) * q.powi(m as i32);
        s_c += mu * (1.0 - finite);
        s_n += n as f64 * mu * (1.0 - finite);
    }
    (s_c, s_n / profile.mean_size())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSolution {
    pub sigma: f64,
    pub h1: f64,
    pub h2: f64,
    pub s_c: f64,
    pub s_n: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Threshold, fixed point and giant-component sizes for one parameter point.
pub fn solve(
    profile: &CliqueProfile,
    kw: &dyn DegreeGf,
    kf: &dyn DegreeGf,
    options: FixedPointOptions,
) -> AnalyticSolution {
    let sigma = spectral_radius(&moments(profile, kw, kf));
    if sigma <= 1.0 + CRITICAL_EPS {
        return AnalyticSolution {
            sigma,
            h1: 1.0,
            h2: 1.0,
            s_c: 0.0,
            s_n: 0.0,
            converged: true,
            iterations: 0,
        };
    }
    let fp = fixed_point(profile, kw, kf, options);
    let (s_c, s_n) = epidemic_sizes(profile, kw, kf, fp.h1, fp.h2);
    AnalyticSolution {
        sigma,
        h1: fp.h1,
        h2: fp.h2,
        s_c: s_c.clamp(0.0, 1.0),
        s_n: s_n.clamp(0.0, 1.0),
        converged: fp.converged,
        iterations: fp.iterations,
    }
}

/// [`solve`] with the base laws thinned by `t_w` and `t_f`.
pub fn solve_at(
    profile: &CliqueProfile,
    kw: &DegreeLaw,
    kf: &DegreeLaw,
    t_w: f64,
    t_f: f64,
    options: FixedPointOptions,
) -> Result<AnalyticSolution, LawError> {
    Ok(solve(profile, &kw.thin(t_w)?, &kf.thin(t_f)?, options))
}

/// Spectral radius with the base laws thinned by `t_w` and `t_f`.
pub fn sigma_at(
    profile: &CliqueProfile,
    kw: &DegreeLaw,
    kf: &DegreeLaw,
    t_w: f64,
    t_f: f64,
) -> Result<f64, LawError> {
    Ok(spectral_radius(&moments(
        profile,
        &kw.thin(t_w)?,
        &kf.thin(t_f)?,
    )))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalTw {
    /// Smallest `T_w` with `sigma >= 1`; 0 if the online layer alone is supercritical.
    At(f64),
    /// `sigma < 1` even at `T_w = 1`.
    NoEpidemic,
}

impl CriticalTw {
    pub fn value(self) -> Option<f64> {
        match self {
            CriticalTw::At(t) => Some(t),
            CriticalTw::NoEpidemic => None,
        }
    }
}

/// Bisection width used by [`critical_tw`].
pub const CRITICAL_TW_TOL: f64 = 1e-7;

/// Minimal type-1 transmissibility for a giant component at the given `t_f`.
pub fn critical_tw(
    profile: &CliqueProfile,
    kw: &DegreeLaw,
    kf: &DegreeLaw,
    t_f: f64,
) -> Result<CriticalTw, LawError> {
    let sigma = |t_w: f64| sigma_at(profile, kw, kf, t_w, t_f);
    if sigma(0.0)? > 1.0 {
        return Ok(CriticalTw::At(0.0));
    }
    if sigma(1.0)? < 1.0 {
        return Ok(CriticalTw::NoEpidemic);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > CRITICAL_TW_TOL {
        let mid = 0.5 * (lo + hi);
        if sigma(mid)? > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalTw::At(0.5 * (lo + hi)))
}
