//! Min-cost segment-list kernel.
//!
//! Both solvers repeatedly ask the same question: given per-link lengths
//! (dual variables), which admissible segment list routes one unit of a
//! request most cheaply? A route is an ordered list of up to `q_max - 1`
//! candidate nodes; each consecutive pair is one segment, traffic inside a
//! segment follows the precomputed ECMP split, and the route's per-link
//! coefficient `g(e)` is the sum of the segment splits — it can exceed 1
//! when legs revisit a link.
//!
//! The search runs over a layered auxiliary graph: the source, `q_max - 1`
//! layers holding one copy of every candidate node, and the target. Layer
//! transitions carry the aggregated pair cost `c(u, v) = Σ_e l_e f_uv(e)`
//! ([`apfsc`]), staying on the same node costs nothing (shorter lists), and
//! one extra source→target link stands for the empty list. The graph is a
//! DAG by construction, so a forward relaxation sweep finds the optimum in
//! `O(q_max · |candidates|²)` pair-cost lookups.
//!
//! Ties are broken deterministically toward the lexicographically smallest
//! padded choice vector: one slot per layer, "stay" sorts before every
//! candidate, candidates sort by their position in the request's sorted
//! candidate list. The empty list is the all-"stay" vector, so it wins any
//! full tie.

use std::collections::BTreeMap;
use std::ops::Index;

use crate::intra::{IntraError, IntraTable, PairEntry};
use crate::topology::{LinkId, NodeId, Request};

/// Per-link dual lengths, dense over link ids.
#[derive(Clone, Debug, PartialEq)]
pub struct DualLengths(Vec<f64>);

impl DualLengths {
    pub fn zeros(link_count: usize) -> DualLengths {
        DualLengths(vec![0.0; link_count])
    }

    pub fn uniform(link_count: usize, value: f64) -> DualLengths {
        DualLengths(vec![value; link_count])
    }

    pub fn from_vec(v: Vec<f64>) -> DualLengths {
        DualLengths(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, link: LinkId) -> f64 {
        self.0[link.0]
    }

    pub fn set(&mut self, link: LinkId, value: f64) {
        self.0[link.0] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl Index<LinkId> for DualLengths {
    type Output = f64;

    fn index(&self, link: LinkId) -> &f64 {
        &self.0[link.0]
    }
}

/// The layered search structure for one request. Built once per request and
/// reused across solver iterations — only the pair costs change between
/// iterations, never the shape.
#[derive(Clone, Debug)]
pub struct AuxGraph {
    pub request: usize,
    pub src: NodeId,
    pub dst: NodeId,
    /// Candidate nodes in the request's canonical (sorted) order; choice
    /// vectors index into this.
    pub sr_nodes: Vec<NodeId>,
    /// Number of candidate layers, `q_max - 1`.
    pub layers: usize,
}

impl AuxGraph {
    pub fn for_request(r: &Request) -> AuxGraph {
        AuxGraph {
            request: r.id,
            src: r.src,
            dst: r.dst,
            sr_nodes: r.sr_nodes.clone(),
            layers: r.q_max as usize - 1,
        }
    }

    /// Number of links in the layered graph, counting the stay-in-place
    /// links and the direct source→target link.
    pub fn link_count(&self) -> usize {
        let n = self.sr_nodes.len();
        if self.layers == 0 || n == 0 {
            1
        } else {
            n + (self.layers - 1) * n * n + n + 1
        }
    }

    /// The ordered pairs whose costs the search consults.
    pub fn pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut pairs = vec![(self.src, self.dst)];
        if self.layers >= 1 {
            for &u in &self.sr_nodes {
                pairs.push((self.src, u));
                pairs.push((u, self.dst));
                for &v in &self.sr_nodes {
                    if u != v {
                        pairs.push((u, v));
                    }
                }
            }
        }
        pairs
    }
}

/// Aggregated segment costs for a set of ordered pairs. Unreachable pairs
/// carry cost infinity, which the search treats as "no such link".
#[derive(Clone, Debug)]
pub struct PairCosts {
    map: BTreeMap<(NodeId, NodeId), f64>,
}

impl PairCosts {
    pub fn get(&self, src: NodeId, dst: NodeId) -> Option<f64> {
        self.map.get(&(src, dst)).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// All-pair-fixed-segment costs: `c(u, v) = Σ_e l_e f_uv(e)` for each
/// requested pair, infinity for unreachable pairs. Pairs absent from the
/// table are an error (closed world).
pub fn apfsc(
    table: &IntraTable,
    lengths: &DualLengths,
    pairs: &[(NodeId, NodeId)],
) -> Result<PairCosts, IntraError> {
    assert_eq!(
        lengths.len(),
        table.link_count(),
        "length vector does not match the table's network"
    );
    let mut map = BTreeMap::new();
    for &(u, v) in pairs {
        let cost = match table.entry(u, v)? {
            PairEntry::Split(split) => split
                .entries()
                .iter()
                .map(|&(lid, f)| lengths.get(lid) * f)
                .sum(),
            PairEntry::Unreachable => f64::INFINITY,
        };
        map.insert((u, v), cost);
    }
    Ok(PairCosts { map })
}

/// A selected route: the segment-node list, its per-link coefficients, and
/// its cost under the lengths the search ran with.
#[derive(Clone, Debug)]
pub struct SrPathResult {
    /// Intermediate nodes in route order (empty = direct ECMP route).
    pub k: Vec<NodeId>,
    /// Per-link coefficients `g(e)`, sparse and sorted by link id. Empty
    /// when `cost` is infinite (request not routable at all).
    pub g: Vec<(LinkId, f64)>,
    pub cost: f64,
}

impl SrPathResult {
    /// Σ_e g(e); bounded by `q_max` times the node count.
    pub fn g_total(&self) -> f64 {
        self.g.iter().map(|&(_, g)| g).sum()
    }
}

/// Per-link coefficients of the route `src -> k[0] -> … -> dst`: the sum of
/// the ECMP splits of its segments. Consecutive duplicate nodes contribute
/// nothing (a zero-length segment). Errors if a segment has no path or is
/// missing from the table.
///
/// Accumulation order is fixed (legs in route order, links in id order), so
/// recomputing the vector for the same list is bit-identical.
pub fn sr_function(
    table: &IntraTable,
    src: NodeId,
    dst: NodeId,
    k: &[NodeId],
) -> Result<Vec<(LinkId, f64)>, IntraError> {
    let mut dense = vec![0.0f64; table.link_count()];
    let mut prev = src;
    for &node in k.iter().chain(std::iter::once(&dst)) {
        if node == prev {
            continue;
        }
        match table.entry(prev, node)? {
            PairEntry::Split(split) => {
                for &(lid, f) in split.entries() {
                    dense[lid.0] += f;
                }
            }
            PairEntry::Unreachable => {
                return Err(IntraError::Unreachable {
                    src: table.node_name(prev).to_string(),
                    dst: table.node_name(node).to_string(),
                })
            }
        }
        prev = node;
    }
    Ok(dense
        .iter()
        .enumerate()
        .filter(|&(_, &g)| g != 0.0)
        .map(|(i, &g)| (LinkId(i), g))
        .collect())
}

/// One candidate state in the layered sweep: cost so far plus the padded
/// choice prefix that reached it (0 = stay, i+1 = candidate i).
#[derive(Clone, Debug)]
struct State {
    cost: f64,
    prefix: Vec<u32>,
}

impl State {
    fn better_than(&self, other: &State) -> bool {
        if self.cost != other.cost {
            return self.cost < other.cost;
        }
        self.prefix < other.prefix
    }
}

/// Minimum-cost admissible segment list for the request behind `aux`, under
/// the given pair costs. Always returns a result: when no route has finite
/// cost (target unreachable even through candidates) the result carries
/// `cost = ∞` and empty coefficients.
pub fn mincost_sr_path(
    aux: &AuxGraph,
    costs: &PairCosts,
    table: &IntraTable,
) -> Result<SrPathResult, IntraError> {
    let lookup = |u: NodeId, v: NodeId| -> Result<f64, IntraError> {
        costs.get(u, v).ok_or_else(|| IntraError::MissingPair {
            src: table.node_name(u).to_string(),
            dst: table.node_name(v).to_string(),
        })
    };

    let n = aux.sr_nodes.len();
    let direct = State {
        cost: lookup(aux.src, aux.dst)?,
        prefix: vec![0; aux.layers],
    };
    let mut best = direct;

    if aux.layers >= 1 && n >= 1 {
        // Layer 1: enter each candidate from the source.
        let mut dp: Vec<State> = Vec::with_capacity(n);
        for (i, &u) in aux.sr_nodes.iter().enumerate() {
            dp.push(State {
                cost: lookup(aux.src, u)?,
                prefix: vec![i as u32 + 1],
            });
        }
        // Layers 2..=layers: stay in place for free or hop to another
        // candidate at its pair cost.
        for _ in 1..aux.layers {
            let mut next: Vec<State> = Vec::with_capacity(n);
            for (i, &v) in aux.sr_nodes.iter().enumerate() {
                let mut cand = State {
                    cost: dp[i].cost,
                    prefix: push(&dp[i].prefix, 0),
                };
                for (j, &u) in aux.sr_nodes.iter().enumerate() {
                    if j == i || dp[j].cost.is_infinite() {
                        continue;
                    }
                    let hop = State {
                        cost: dp[j].cost + lookup(u, v)?,
                        prefix: push(&dp[j].prefix, i as u32 + 1),
                    };
                    if hop.better_than(&cand) {
                        cand = hop;
                    }
                }
                next.push(cand);
            }
            dp = next;
        }
        // Exit every candidate to the target.
        for (i, &u) in aux.sr_nodes.iter().enumerate() {
            if dp[i].cost.is_infinite() {
                continue;
            }
            let finish = State {
                cost: dp[i].cost + lookup(u, aux.dst)?,
                prefix: dp[i].prefix.clone(),
            };
            if finish.better_than(&best) {
                best = finish;
            }
        }
    }

    if best.cost.is_infinite() {
        return Ok(SrPathResult {
            k: Vec::new(),
            g: Vec::new(),
            cost: f64::INFINITY,
        });
    }
    let k: Vec<NodeId> = best
        .prefix
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| aux.sr_nodes[c as usize - 1])
        .collect();
    let g = sr_function(table, aux.src, aux.dst, &k)?;
    Ok(SrPathResult {
        k,
        g,
        cost: best.cost,
    })
}

fn push(prefix: &[u32], choice: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(prefix.len() + 1);
    v.extend_from_slice(prefix);
    v.push(choice);
    v
}
