//! Seeded generation of request traces and small random topologies.
//!
//! Everything here is deterministic given its seed, so experiment runs and
//! regression tests can be reproduced byte for byte.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::topology::{Network, NodeId, Request, RequestError};

/// How source/destination pairs are drawn.
#[derive(Clone, Debug)]
pub enum PairMode {
    /// Both endpoints uniform at random (distinct).
    RandomPairs,
    /// Every request uses the same endpoints.
    SinglePair { src: NodeId, dst: NodeId },
    /// Sources cycle through all nodes in index order; destinations are
    /// drawn uniformly among the other nodes. With `count == n` this gives
    /// one request sourced at every node.
    EachNode,
}

/// How the candidate segment-node set is chosen.
#[derive(Clone, Debug)]
pub enum SrChoice {
    /// All nodes except the endpoints.
    All,
    /// A random subset of at most this many non-endpoint nodes.
    Subset(usize),
    /// No candidates: only the direct route exists (forces Q = 1).
    None,
}

/// Parameters for [`gen_requests`]. Demands are drawn uniformly from
/// `[demand_lo, demand_hi]`; set both equal for a fixed demand.
#[derive(Clone, Debug)]
pub struct GenSpec {
    pub count: usize,
    pub demand_lo: f64,
    pub demand_hi: f64,
    pub mode: PairMode,
    pub sr: SrChoice,
    /// Requested segment budget; clamped per request to `|N_r| + 1` so the
    /// generated requests are always valid.
    pub q_max: u32,
    pub seed: u64,
}

impl GenSpec {
    /// Fixed-demand random pairs with all candidates — the common case.
    pub fn uniform(count: usize, demand: f64, q_max: u32, seed: u64) -> GenSpec {
        GenSpec {
            count,
            demand_lo: demand,
            demand_hi: demand,
            mode: PairMode::RandomPairs,
            sr: SrChoice::All,
            q_max,
            seed,
        }
    }
}

/// Generates a deterministic trace of valid requests.
pub fn gen_requests(net: &Network, spec: &GenSpec) -> Result<Vec<Request>, RequestError> {
    assert!(
        spec.demand_lo > 0.0 && spec.demand_lo <= spec.demand_hi,
        "demand range must satisfy 0 < lo <= hi"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let nodes: Vec<NodeId> = net.node_ids().collect();
    let mut out = Vec::with_capacity(spec.count);
    for i in 0..spec.count {
        let (src, dst) = match &spec.mode {
            PairMode::SinglePair { src, dst } => (*src, *dst),
            PairMode::RandomPairs => {
                let src = *nodes.choose(&mut rng).unwrap();
                let others: Vec<NodeId> = nodes.iter().copied().filter(|&n| n != src).collect();
                (src, *others.choose(&mut rng).unwrap())
            }
            PairMode::EachNode => {
                let src = nodes[i % nodes.len()];
                let others: Vec<NodeId> = nodes.iter().copied().filter(|&n| n != src).collect();
                (src, *others.choose(&mut rng).unwrap())
            }
        };
        let candidates: Vec<NodeId> = nodes
            .iter()
            .copied()
            .filter(|&n| n != src && n != dst)
            .collect();
        let sr_nodes: Vec<NodeId> = match &spec.sr {
            SrChoice::All => candidates,
            SrChoice::None => Vec::new(),
            SrChoice::Subset(k) => {
                let take = (*k).min(candidates.len());
                let mut picked: Vec<NodeId> =
                    candidates.choose_multiple(&mut rng, take).copied().collect();
                picked.sort();
                picked
            }
        };
        let demand = if spec.demand_lo == spec.demand_hi {
            spec.demand_lo
        } else {
            rng.gen_range(spec.demand_lo..=spec.demand_hi)
        };
        let q = spec.q_max.min(sr_nodes.len() as u32 + 1).max(1);
        out.push(Request::new(net, i, src, dst, demand, sr_nodes, q)?);
    }
    Ok(out)
}

/// A strongly connected random topology: a directed ring `n0 → n1 → … → n0`
/// plus `chords` extra random links on distinct ordered pairs. Capacities
/// are uniform in `[cap_lo, cap_hi]`, weights uniform in `{1, 2}`.
pub fn random_ring_net(n: usize, chords: usize, cap_lo: f64, cap_hi: f64, seed: u64) -> Network {
    assert!(n >= 2, "need at least two nodes");
    assert!(cap_lo > 0.0 && cap_lo <= cap_hi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();

    let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let ring: std::collections::BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && !ring.contains(&(u, v)))
        .collect();
    candidates.shuffle(&mut rng);
    pairs.extend(candidates.into_iter().take(chords));

    let links: Vec<(&str, &str, f64, u32)> = pairs
        .iter()
        .map(|&(u, v)| {
            let cap = if cap_lo == cap_hi {
                cap_lo
            } else {
                rng.gen_range(cap_lo..=cap_hi)
            };
            (names[u].as_str(), names[v].as_str(), cap, rng.gen_range(1..=2))
        })
        .collect();
    Network::new(&names, &links).unwrap()
}
