//! Clique-level contraction and heterogeneous bond percolation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::netgen::{self, GenError, GenParams, LinkType, SocialPhysicalNetwork};

/// Giant-component rule: more than this fraction of cliques.
pub const DEFAULT_GIANT_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperEdge {
    pub a: u32,
    pub b: u32,
    pub link: LinkType,
}

/// Each clique becomes one super node; every type-1 and type-2 edge is kept
/// with its multiplicity. Type-2 edges within one clique become self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalentGraph {
    pub clique_size: Vec<u32>,
    pub edges: Vec<SuperEdge>,
}

impl EquivalentGraph {
    pub fn super_node_count(&self) -> usize {
        self.clique_size.len()
    }

    pub fn node_count(&self) -> u64 {
        self.clique_size.iter().map(|&s| s as u64).sum()
    }

    /// Type-`link` degree of every super node. Self-loops count twice.
    pub fn degrees(&self, link: LinkType) -> Vec<u32> {
        let mut deg = vec![0; self.super_node_count()];
        for e in self.edges.iter().filter(|e| e.link == link) {
            deg[e.a as usize] += 1;
            deg[e.b as usize] += 1;
        }
        deg
    }
}

pub fn build_equivalent(network: &SocialPhysicalNetwork) -> EquivalentGraph {
    let map = |(u, v): &(u32, u32), link| SuperEdge {
        a: network.clique_of[*u as usize],
        b: network.clique_of[*v as usize],
        link,
    };
    let edges = network
        .type1_edges
        .iter()
        .map(|e| map(e, LinkType::Physical))
        .chain(network.type2_edges.iter().map(|e| map(e, LinkType::Online)))
        .collect();
    EquivalentGraph {
        clique_size: network.clique_sizes.clone(),
        edges,
    }
}

/// Disjoint sets with path compression and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    /// Component label per element, numbered by first appearance.
    pub fn labels(&mut self) -> Vec<u32> {
        let n = self.parent.len();
        let mut relabel = vec![u32::MAX; n];
        let mut next = 0;
        (0..n as u32)
            .map(|x| {
                let r = self.find(x) as usize;
                if relabel[r] == u32::MAX {
                    relabel[r] = next;
                    next += 1;
                }
                relabel[r]
            })
            .collect()
    }
}

/// Size of the largest occupied component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LargestComponent {
    pub cliques: u32,
    pub nodes: u64,
}

/// Union the retained edges. An edge of type `t` is retained iff its uniform
/// draw `u < T_t`; one draw per edge in edge order, so runs sharing an RNG
/// state are coupled across transmissibilities.
pub fn occupy<R: Rng + ?Sized>(
    eq: &EquivalentGraph,
    t_w: f64,
    t_f: f64,
    rng: &mut R,
) -> DisjointSet {
    let mut set = DisjointSet::new(eq.super_node_count());
    for e in &eq.edges {
        let t = match e.link {
            LinkType::Physical => t_w,
            LinkType::Online => t_f,
        };
        let u: f64 = rng.random();
        if u < t {
            set.union(e.a, e.b);
        }
    }
    set
}

pub fn largest_component(eq: &EquivalentGraph, set: &mut DisjointSet) -> LargestComponent {
    let n = eq.super_node_count();
    let mut cliques = vec![0u32; n];
    let mut nodes = vec![0u64; n];
    for x in 0..n {
        let r = set.find(x as u32) as usize;
        cliques[r] += 1;
        nodes[r] += eq.clique_size[x] as u64;
    }
    // Ties in clique count are broken towards more nodes.
    (0..n)
        .map(|r| LargestComponent {
            cliques: cliques[r],
            nodes: nodes[r],
        })
        .max_by_key(|c| (c.cliques, c.nodes))
        .unwrap_or_default()
}

pub fn percolate_once<R: Rng + ?Sized>(
    eq: &EquivalentGraph,
    t_w: f64,
    t_f: f64,
    rng: &mut R,
) -> LargestComponent {
    let mut set = occupy(eq, t_w, t_f, rng);
    largest_component(eq, &mut set)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleOptions {
    pub replications: usize,
    pub giant_fraction: f64,
    /// Fresh network per replication (default) or one fixed network.
    pub regenerate: bool,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        Self {
            replications: 200,
            giant_fraction: DEFAULT_GIANT_FRACTION,
            regenerate: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replication {
    pub largest: LargestComponent,
    pub clique_count: u32,
    pub node_count: u64,
}

impl Replication {
    pub fn s_c(&self) -> f64 {
        self.largest.cliques as f64 / self.clique_count as f64
    }

    pub fn s_n(&self) -> f64 {
        self.largest.nodes as f64 / self.node_count as f64
    }

    pub fn is_giant(&self, fraction: f64) -> bool {
        self.largest.cliques as f64 > fraction * self.clique_count as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercolationOutcome {
    pub replications: Vec<Replication>,
    pub giant_fraction: f64,
    pub s_c_mean: f64,
    pub s_c_std: f64,
    pub s_n_mean: f64,
    pub s_n_std: f64,
    pub p_inf: f64,
    /// Means over the replications that produced a giant component.
    pub s_c_giant_mean: Option<f64>,
    pub s_n_giant_mean: Option<f64>,
}

impl PercolationOutcome {
    pub fn from_replications(replications: Vec<Replication>, giant_fraction: f64) -> Self {
        let s_c: Vec<f64> = replications.iter().map(Replication::s_c).collect();
        let s_n: Vec<f64> = replications.iter().map(Replication::s_n).collect();
        let (s_c_mean, s_c_std) = mean_std(&s_c);
        let (s_n_mean, s_n_std) = mean_std(&s_n);
        let giant: Vec<&Replication> = replications
            .iter()
            .filter(|r| r.is_giant(giant_fraction))
            .collect();
        let p_inf = giant.len() as f64 / replications.len() as f64;
        let conditioned = |f: fn(&Replication) -> f64| {
            (!giant.is_empty())
                .then(|| giant.iter().map(|r| f(r)).sum::<f64>() / giant.len() as f64)
        };
        Self {
            s_c_giant_mean: conditioned(Replication::s_c),
            s_n_giant_mean: conditioned(Replication::s_n),
            replications,
            giant_fraction,
            s_c_mean,
            s_c_std,
            s_n_mean,
            s_n_std,
            p_inf,
        }
    }
}

/// Mean and sample standard deviation, summed in order.
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// RNG stream `index` of the family identified by `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Stream index reserved for the fixed network when `regenerate` is off.
const FIXED_NETWORK_STREAM: u64 = u64::MAX;

/// Run `options.replications` independent percolation experiments.
///
/// Replication `r` draws from stream `r` of `seed` (network generation, if
/// regenerating, then edge retention). `params.seed` is not used.
pub fn run_ensemble(
    params: &GenParams,
    t_w: f64,
    t_f: f64,
    options: &EnsembleOptions,
    seed: u64,
) -> Result<PercolationOutcome, GenError> {
    assert!(
        options.replications >= 1,
        "at least one replication required"
    );
    params.validate()?;
    let fixed = if options.regenerate {
        None
    } else {
        let net = netgen::generate_with_rng(params, &mut stream(seed, FIXED_NETWORK_STREAM))?;
        Some(build_equivalent(&net))
    };
    let reps = (0..options.replications as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, r);
            let owned;
            let eq = match &fixed {
                Some(eq) => eq,
                None => {
                    owned = build_equivalent(&netgen::generate_with_rng(params, &mut rng)?);
                    &owned
                }
            };
            Ok(Replication {
                largest: percolate_once(eq, t_w, t_f, &mut rng),
                clique_count: eq.super_node_count() as u32,
                node_count: eq.node_count(),
            })
        })
        .collect::<Result<Vec<_>, GenError>>()?;
    Ok(PercolationOutcome::from_replications(
        reps,
        options.giant_fraction,
    ))
}
