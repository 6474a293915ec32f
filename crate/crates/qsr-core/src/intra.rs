//! Per-pair ECMP flow splitting.
//!
//! For an ordered node pair `(u, v)` the IGP forwards traffic along the
//! shortest-path DAG toward `v`, splitting equally over the tied next hops at
//! every node. [`compute_ecmp_split`] materializes that behavior as a
//! [`FlowSplit`]: the fraction of one traffic unit from `u` to `v` that
//! crosses each link. Distances use exact integer arithmetic over the IGP
//! weights, so ties are decided exactly, never by a float epsilon.
//!
//! [`build_intra_table`] precomputes the splits for every pair the routing
//! solvers will look up for a given request set and stores them in an
//! [`IntraTable`]. The table is closed-world: looking up a pair that was
//! never computed is an error rather than a silent zero. Pairs with no path
//! are kept as explicit [`PairEntry::Unreachable`] markers — on directed
//! topologies many candidate pairs (say, two interior nodes of different
//! parallel chains) have no connecting path, and the solvers treat such
//! segments as unusable rather than failing outright.
//!
//! The split policy is pluggable through [`IntraPolicy`]; equal-split ECMP is
//! the only bundled implementation.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::io::Write;

use crate::topology::{LinkId, Network, NodeId, Request};

/// Fraction of one unit of `src -> dst` traffic crossing each link, sparse
/// over links and sorted by link id.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSplit {
    pub src: NodeId,
    pub dst: NodeId,
    fractions: Vec<(LinkId, f64)>,
}

impl FlowSplit {
    /// Builds a split from (link, fraction) entries; entries are sorted and
    /// zero fractions dropped.
    pub fn new(src: NodeId, dst: NodeId, mut fractions: Vec<(LinkId, f64)>) -> FlowSplit {
        fractions.retain(|&(_, f)| f != 0.0);
        fractions.sort_unstable_by_key(|&(id, _)| id);
        FlowSplit {
            src,
            dst,
            fractions,
        }
    }

    /// The fraction carried by `link`, zero when the link is off every
    /// shortest path.
    pub fn fraction(&self, link: LinkId) -> f64 {
        match self.fractions.binary_search_by_key(&link, |&(id, _)| id) {
            Ok(i) => self.fractions[i].1,
            Err(_) => 0.0,
        }
    }

    /// Nonzero (link, fraction) entries in link-id order.
    pub fn entries(&self) -> &[(LinkId, f64)] {
        &self.fractions
    }

    pub fn total(&self) -> f64 {
        self.fractions.iter().map(|&(_, f)| f).sum()
    }
}

#[derive(Debug)]
pub enum IntraError {
    /// `dst` cannot be reached from `src` at all.
    Unreachable { src: String, dst: String },
    /// Split of a node onto itself is undefined.
    DegeneratePair(String),
    /// The pair was never computed into the table (closed world).
    MissingPair { src: String, dst: String },
    /// Adjacency override requested for a pair with no direct link.
    NoSuchLink { src: String, dst: String },
}

impl fmt::Display for IntraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use IntraError::*;
        match self {
            Unreachable { src, dst } => {
                write!(f, "no path from {src:?} to {dst:?}")
            }
            DegeneratePair(n) => write!(f, "degenerate pair ({n:?}, {n:?})"),
            MissingPair { src, dst } => {
                write!(f, "pair ({src:?}, {dst:?}) is not in the split table")
            }
            NoSuchLink { src, dst } => {
                write!(f, "no direct link {src:?} -> {dst:?} for adjacency override")
            }
        }
    }
}

impl std::error::Error for IntraError {}

/// Exact ECMP split for one ordered pair.
///
/// Runs a reverse Dijkstra from `dst` over integer weights, then pushes one
/// unit of flow from `src` down the shortest-path DAG, dividing each node's
/// outflow equally among its tied next-hop links. Nodes are settled in order
/// of strictly decreasing distance-to-`dst`, so every node's inflow is
/// complete before it splits. The result is bit-reproducible: node order and
/// link order are fixed by the network's dense indices.
pub fn compute_ecmp_split(
    net: &Network,
    src: NodeId,
    dst: NodeId,
) -> Result<FlowSplit, IntraError> {
    if src == dst {
        return Err(IntraError::DegeneratePair(net.name(src).to_string()));
    }
    let n = net.node_count();
    // dist[x] = exact weighted distance from x to dst.
    let mut dist = vec![u64::MAX; n];
    dist[dst.0] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, dst.0)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &lid in net.in_links(NodeId(x)) {
            let l = net.link(lid);
            let nd = d + l.igp_weight as u64;
            if nd < dist[l.src.0] {
                dist[l.src.0] = nd;
                heap.push(Reverse((nd, l.src.0)));
            }
        }
    }
    if dist[src.0] == u64::MAX {
        return Err(IntraError::Unreachable {
            src: net.name(src).to_string(),
            dst: net.name(dst).to_string(),
        });
    }

    // Settle nodes by decreasing distance; ties carry no DAG edges between
    // them (weights are >= 1), so index order inside a tie is immaterial but
    // kept fixed for reproducibility.
    let mut order: Vec<usize> = (0..n)
        .filter(|&x| dist[x] != u64::MAX && dist[x] <= dist[src.0])
        .collect();
    order.sort_unstable_by_key(|&x| (Reverse(dist[x]), x));

    let mut flow = vec![0.0f64; n];
    flow[src.0] = 1.0;
    let mut frac = vec![0.0f64; net.link_count()];
    for &x in &order {
        if x == dst.0 || flow[x] == 0.0 {
            continue;
        }
        let next: Vec<LinkId> = net
            .out_links(NodeId(x))
            .iter()
            .copied()
            .filter(|&lid| {
                let l = net.link(lid);
                dist[l.dst.0] != u64::MAX && dist[x] == l.igp_weight as u64 + dist[l.dst.0]
            })
            .collect();
        debug_assert!(!next.is_empty(), "finite distance implies a next hop");
        let share = flow[x] / next.len() as f64;
        for lid in next {
            frac[lid.0] += share;
            flow[net.link(lid).dst.0] += share;
        }
    }
    let fractions = frac
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f > 0.0)
        .map(|(i, &f)| (LinkId(i), f))
        .collect();
    Ok(FlowSplit::new(src, dst, fractions))
}

/// A pluggable intra-segment split policy. Equal-split ECMP is the bundled
/// implementation; alternative traffic-splitting schemes can slot in here
/// without touching the solvers.
pub trait IntraPolicy {
    fn split(&self, net: &Network, src: NodeId, dst: NodeId) -> Result<FlowSplit, IntraError>;
    fn tag(&self) -> &'static str;
}

/// Equal-split ECMP over the IGP shortest-path DAG.
pub struct EcmpPolicy;

impl IntraPolicy for EcmpPolicy {
    fn split(&self, net: &Network, src: NodeId, dst: NodeId) -> Result<FlowSplit, IntraError> {
        compute_ecmp_split(net, src, dst)
    }

    fn tag(&self) -> &'static str {
        "ecmp-equal-split"
    }
}

/// One precomputed table slot: either a usable split or an explicit marker
/// that the pair has no connecting path.
#[derive(Clone, Debug)]
pub enum PairEntry {
    Split(FlowSplit),
    Unreachable,
}

/// Precomputed per-pair splits for everything the solvers will query.
#[derive(Clone, Debug)]
pub struct IntraTable {
    entries: BTreeMap<(NodeId, NodeId), PairEntry>,
    node_names: Vec<String>,
    link_count: usize,
    policy_tag: String,
}

impl IntraTable {
    /// Looks up a pair; absent pairs are an error, unreachable pairs return
    /// their marker.
    pub fn entry(&self, src: NodeId, dst: NodeId) -> Result<&PairEntry, IntraError> {
        self.entries
            .get(&(src, dst))
            .ok_or_else(|| IntraError::MissingPair {
                src: self.node_names[src.0].clone(),
                dst: self.node_names[dst.0].clone(),
            })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn link_count(&self) -> usize {
        self.link_count
    }

    pub fn policy_tag(&self) -> &str {
        &self.policy_tag
    }

    /// Name of a node in the network this table was built for.
    pub fn node_name(&self, node: NodeId) -> &str {
        &self.node_names[node.0]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &PairEntry)> {
        self.entries.iter()
    }

    /// Replaces the `(src, dst)` entry with the adjacency split: the whole
    /// unit on the direct link, regardless of whether it is IGP-shortest.
    /// Errors when no direct link exists.
    pub fn with_adjacency_override(
        mut self,
        net: &Network,
        src: NodeId,
        dst: NodeId,
    ) -> Result<IntraTable, IntraError> {
        let link = net
            .find_link(src, dst)
            .ok_or_else(|| IntraError::NoSuchLink {
                src: net.name(src).to_string(),
                dst: net.name(dst).to_string(),
            })?;
        self.entries.insert(
            (src, dst),
            PairEntry::Split(FlowSplit::new(src, dst, vec![(link, 1.0)])),
        );
        Ok(self)
    }

    /// Debug dump, one `u,v,link_src,link_dst,fraction` row per nonzero
    /// fraction. Unreachable pairs contribute no rows.
    pub fn write_csv(&self, net: &Network, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "u,v,link_src,link_dst,fraction")?;
        for (&(u, v), entry) in &self.entries {
            if let PairEntry::Split(split) = entry {
                for &(lid, f) in split.entries() {
                    let l = net.link(lid);
                    writeln!(
                        w,
                        "{},{},{},{},{}",
                        net.name(u),
                        net.name(v),
                        net.name(l.src),
                        net.name(l.dst),
                        f
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// The ordered pairs a request's solvers can query: source to every
/// candidate, candidate to candidate, candidate to target, and source to
/// target. A segment budget of 1 needs only the direct pair.
pub fn request_pairs(r: &Request) -> Vec<(NodeId, NodeId)> {
    let mut pairs = vec![(r.src, r.dst)];
    if r.q_max >= 2 {
        for &u in &r.sr_nodes {
            pairs.push((r.src, u));
            pairs.push((u, r.dst));
            for &v in &r.sr_nodes {
                if u != v {
                    pairs.push((u, v));
                }
            }
        }
    }
    pairs
}

/// Precomputes the ECMP split table covering every pair the solvers will
/// query for `requests`. Pairs shared between requests are computed once.
pub fn build_intra_table(net: &Network, requests: &[Request]) -> IntraTable {
    build_intra_table_with(net, requests, &EcmpPolicy)
}

pub fn build_intra_table_with(
    net: &Network,
    requests: &[Request],
    policy: &dyn IntraPolicy,
) -> IntraTable {
    let mut entries = BTreeMap::new();
    for r in requests {
        for (u, v) in request_pairs(r) {
            entries.entry((u, v)).or_insert_with(|| {
                match policy.split(net, u, v) {
                    Ok(split) => PairEntry::Split(split),
                    // No path between a candidate pair only rules that
                    // segment out; the solvers skip it.
                    Err(IntraError::Unreachable { .. }) => PairEntry::Unreachable,
                    Err(e) => panic!("split policy failed on a validated pair: {e}"),
                }
            });
        }
    }
    IntraTable {
        entries,
        node_names: net.node_ids().map(|n| net.name(n).to_string()).collect(),
        link_count: net.link_count(),
        policy_tag: policy.tag().to_string(),
    }
}
