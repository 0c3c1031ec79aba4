//! Random realizations of the clique-structured social-physical network.
//!
//! A network is a partition of `N` nodes into cliques (type-0 links are
//! implicit), an online flag per node, inter-clique type-1 edges and
//! online-to-online type-2 edges. Both edge sets are wired by stub matching.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::distributions::{CliqueSizeLaw, DegreeLaw};

/// Full re-shuffle passes allowed before leftover stubs are discarded.
pub const RETRY_PASSES: usize = 100;

/// Generation fails when more than this fraction of a link type's stubs
/// could not be paired.
pub const MAX_DISCARD_FRACTION: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("node count must be at least 1")]
    NoNodes,
    #[error("online probability must lie in [0, 1], got {0}")]
    Alpha(f64),
    #[error("{link} wiring failed: {discarded} of {total} stubs could not be paired")]
    Wiring {
        link: LinkType,
        discarded: usize,
        total: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkType {
    /// Inter-clique face-to-face link.
    Physical,
    /// Online link between two online users.
    Online,
}

impl LinkType {
    pub fn index(self) -> u8 {
        match self {
            LinkType::Physical => 1,
            LinkType::Online => 2,
        }
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkType::Physical => f.write_str("type-1 (inter-clique)"),
            LinkType::Online => f.write_str("type-2 (online)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub nodes: usize,
    pub clique_law: CliqueSizeLaw,
    pub alpha: f64,
    pub type1_law: DegreeLaw,
    pub type2_law: DegreeLaw,
    pub seed: u64,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.nodes == 0 {
            return Err(GenError::NoNodes);
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(GenError::Alpha(self.alpha));
        }
        Ok(())
    }
}

/// Stub bookkeeping for one link type.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WiringStats {
    /// Sum of the drawn degrees.
    pub drawn_stubs: usize,
    /// 0 or 1: the stub dropped to make the total even.
    pub parity_discarded: usize,
    /// Stubs still unpaired after the retry budget.
    pub rejected_discarded: usize,
}

impl WiringStats {
    pub fn discarded(&self) -> usize {
        self.parity_discarded + self.rejected_discarded
    }

    pub fn discarded_fraction(&self) -> f64 {
        if self.drawn_stubs == 0 {
            0.0
        } else {
            self.discarded() as f64 / self.drawn_stubs as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialPhysicalNetwork {
    pub clique_of: Vec<u32>,
    pub clique_sizes: Vec<u32>,
    pub online: Vec<bool>,
    pub type1_edges: Vec<(u32, u32)>,
    pub type2_edges: Vec<(u32, u32)>,
    pub type1_stats: WiringStats,
    pub type2_stats: WiringStats,
}

impl SocialPhysicalNetwork {
    pub fn node_count(&self) -> usize {
        self.clique_of.len()
    }

    pub fn clique_count(&self) -> usize {
        self.clique_sizes.len()
    }

    /// Checks every structural invariant; returns a description of the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.node_count();
        if self.online.len() != n {
            return Err("online flag count differs from node count".into());
        }
        let mut counts = vec![0u32; self.clique_count()];
        for &c in &self.clique_of {
            let slot = counts
                .get_mut(c as usize)
                .ok_or_else(|| format!("clique id {c} out of range"))?;
            *slot += 1;
        }
        if counts != self.clique_sizes {
            return Err("clique sizes disagree with the node assignment".into());
        }
        if self.clique_sizes.iter().map(|&s| s as usize).sum::<usize>() != n {
            return Err("clique sizes do not sum to N".into());
        }
        if self.clique_sizes.contains(&0) {
            return Err("empty clique".into());
        }
        for &(u, v) in &self.type1_edges {
            if u as usize >= n || v as usize >= n {
                return Err(format!("type-1 edge ({u}, {v}) out of range"));
            }
            if self.clique_of[u as usize] == self.clique_of[v as usize] {
                return Err(format!("type-1 edge ({u}, {v}) inside one clique"));
            }
        }
        for &(u, v) in &self.type2_edges {
            if u as usize >= n || v as usize >= n {
                return Err(format!("type-2 edge ({u}, {v}) out of range"));
            }
            if u == v {
                return Err(format!("type-2 self-loop at {u}"));
            }
            if !self.online[u as usize] || !self.online[v as usize] {
                return Err(format!("type-2 edge ({u}, {v}) has an offline endpoint"));
            }
        }
        Ok(())
    }

    /// Write the line-oriented dump format (see `docs/formats.md`).
    pub fn to_dump(&self) -> String {
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); self.clique_count()];
        for (node, &c) in self.clique_of.iter().enumerate() {
            members[c as usize].push(node as u32);
        }
        let mut out = String::new();
        writeln!(out, "{} {}", self.node_count(), self.clique_count()).unwrap();
        for (id, nodes) in members.iter().enumerate() {
            write!(out, "clique {id}").unwrap();
            for v in nodes {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        out.push_str("online");
        for (node, _) in self.online.iter().enumerate().filter(|(_, &o)| o) {
            write!(out, " {node}").unwrap();
        }
        out.push('\n');
        for &(u, v) in &self.type1_edges {
            writeln!(out, "e1 {u} {v}").unwrap();
        }
        for &(u, v) in &self.type2_edges {
            writeln!(out, "e2 {u} {v}").unwrap();
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DumpParseError {
    pub line: usize,
    pub message: String,
}

impl FromStr for SocialPhysicalNetwork {
    type Err = DumpParseError;

    /// Parse a dump. Wiring statistics are not part of the format and come back zeroed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: &str| DumpParseError {
            line,
            message: message.to_string(),
        };
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let header: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(1, "header must be `N N_c`")))
            .collect::<Result<_, _>>()?;
        let [n, n_c] = header[..] else {
            return Err(err(1, "header must be `N N_c`"));
        };
        let mut clique_of = vec![u32::MAX; n];
        let mut clique_sizes = vec![0u32; n_c];
        let mut online = vec![false; n];
        let mut type1_edges = Vec::new();
        let mut type2_edges = Vec::new();
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let tag = toks.next().unwrap_or_default();
            let nums: Vec<usize> = toks
                .map(|t| {
                    t.parse()
                        .map_err(|_| err(no, &format!("bad integer `{t}`")))
                })
                .collect::<Result<_, _>>()?;
            let node = |v: usize| {
                if v < n {
                    Ok(v as u32)
                } else {
                    Err(err(no, &format!("node {v} out of range")))
                }
            };
            match tag {
                "clique" => {
                    let (&id, rest) = nums
                        .split_first()
                        .ok_or_else(|| err(no, "clique id missing"))?;
                    if id >= n_c {
                        return Err(err(no, &format!("clique id {id} out of range")));
                    }
                    for &v in rest {
                        let v = node(v)? as usize;
                        if clique_of[v] != u32::MAX {
                            return Err(err(no, &format!("node {v} listed in two cliques")));
                        }
                        clique_of[v] = id as u32;
                        clique_sizes[id] += 1;
                    }
                }
                "online" => {
                    for &v in &nums {
                        online[node(v)? as usize] = true;
                    }
                }
                "e1" | "e2" => {
                    let [u, v] = nums[..] else {
                        return Err(err(no, "edge needs two endpoints"));
                    };
                    let e = (node(u)?, node(v)?);
                    if tag == "e1" {
                        type1_edges.push(e);
                    } else {
                        type2_edges.push(e);
                    }
                }
                other => return Err(err(no, &format!("unknown record `{other}`"))),
            }
        }
        if clique_of.contains(&u32::MAX) {
            return Err(err(0, "some node belongs to no clique"));
        }
        Ok(Self {
            clique_of,
            clique_sizes,
            online,
            type1_edges,
            type2_edges,
            type1_stats: WiringStats::default(),
            type2_stats: WiringStats::default(),
        })
    }
}

/// Generate one network from `params`, seeding the RNG from `params.seed`.
pub fn generate(params: &GenParams) -> Result<SocialPhysicalNetwork, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    generate_with_rng(params, &mut rng)
}

/// Generate one network drawing all randomness from `rng` (`params.seed` is ignored).
pub fn generate_with_rng<R: Rng + ?Sized>(
    params: &GenParams,
    rng: &mut R,
) -> Result<SocialPhysicalNetwork, GenError> {
    params.validate()?;
    let (clique_of, clique_sizes) = partition_cliques(params.nodes, &params.clique_law, rng);
    let online = assign_online(clique_of.len(), params.alpha, rng);
    let wired = wire_edges(
        &clique_of,
        &online,
        &params.type1_law,
        &params.type2_law,
        rng,
    )?;
    Ok(SocialPhysicalNetwork {
        clique_of,
        clique_sizes,
        online,
        type1_edges: wired.type1_edges,
        type2_edges: wired.type2_edges,
        type1_stats: wired.type1_stats,
        type2_stats: wired.type2_stats,
    })
}

/// Randomly chosen groups of `n ~ clique_law` nodes until none are left; the
/// final clique takes whatever remains.
pub fn partition_cliques<R: Rng + ?Sized>(
    nodes: usize,
    clique_law: &CliqueSizeLaw,
    rng: &mut R,
) -> (Vec<u32>, Vec<u32>) {
    let mut order: Vec<u32> = (0..nodes as u32).collect();
    order.shuffle(rng);
    let mut clique_of = vec![0u32; nodes];
    let mut clique_sizes = Vec::new();
    let mut start = 0;
    while start < nodes {
        let size = clique_law.sample(rng).min(nodes - start);
        let id = clique_sizes.len() as u32;
        for &v in &order[start..start + size] {
            clique_of[v as usize] = id;
        }
        clique_sizes.push(size as u32);
        start += size;
    }
    (clique_of, clique_sizes)
}

pub fn assign_online<R: Rng + ?Sized>(nodes: usize, alpha: f64, rng: &mut R) -> Vec<bool> {
    (0..nodes).map(|_| rng.random::<f64>() < alpha).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiredEdges {
    pub type1_edges: Vec<(u32, u32)>,
    pub type2_edges: Vec<(u32, u32)>,
    pub type1_stats: WiringStats,
    pub type2_stats: WiringStats,
}

pub fn wire_edges<R: Rng + ?Sized>(
    clique_of: &[u32],
    online: &[bool],
    type1_law: &DegreeLaw,
    type2_law: &DegreeLaw,
    rng: &mut R,
) -> Result<WiredEdges, GenError> {
    let mut stubs1 = Vec::new();
    for v in 0..clique_of.len() {
        let k = type1_law.sample(rng);
        stubs1.extend(std::iter::repeat_n(v as u32, k));
    }
    let (type1_edges, type1_stats) = match_stubs(stubs1, rng, |u, v| {
        clique_of[u as usize] != clique_of[v as usize]
    });
    check_discards(LinkType::Physical, &type1_stats)?;

    let mut stubs2 = Vec::new();
    for (v, _) in online.iter().enumerate().filter(|(_, &o)| o) {
        let k = type2_law.sample(rng);
        stubs2.extend(std::iter::repeat_n(v as u32, k));
    }
    let (type2_edges, type2_stats) = match_stubs(stubs2, rng, |u, v| u != v);
    check_discards(LinkType::Online, &type2_stats)?;

    Ok(WiredEdges {
        type1_edges,
        type2_edges,
        type1_stats,
        type2_stats,
    })
}

fn check_discards(link: LinkType, stats: &WiringStats) -> Result<(), GenError> {
    let total = stats.drawn_stubs;
    if total > 0 && stats.rejected_discarded as f64 > MAX_DISCARD_FRACTION * total as f64 {
        return Err(GenError::Wiring {
            link,
            discarded: stats.discarded(),
            total,
        });
    }
    Ok(())
}

/// Configuration-model pairing: shuffle the stub pool, pair neighbours, put
/// rejected pairs back for the next pass.
fn match_stubs<R, F>(mut stubs: Vec<u32>, rng: &mut R, allowed: F) -> (Vec<(u32, u32)>, WiringStats)
where
    R: Rng + ?Sized,
    F: Fn(u32, u32) -> bool,
{
    let mut stats = WiringStats {
        drawn_stubs: stubs.len(),
        ..WiringStats::default()
    };
    if stubs.len() % 2 == 1 {
        let drop = rng.random_range(0..stubs.len());
        stubs.swap_remove(drop);
        stats.parity_discarded = 1;
    }
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    let mut requeue = Vec::new();
    for _ in 0..RETRY_PASSES {
        if stubs.is_empty() {
            break;
        }
        stubs.shuffle(rng);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if allowed(u, v) {
                edges.push((u, v));
            } else {
                requeue.extend_from_slice(pair);
            }
        }
        std::mem::swap(&mut stubs, &mut requeue);
        requeue.clear();
    }
    stats.rejected_discarded = stubs.len();
    (edges, stats)
}
