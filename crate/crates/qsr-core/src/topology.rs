//! Network and request model.
//!
//! A [`Network`] is a directed graph with per-link capacities and integer IGP
//! weights. Nodes are referred to by string name in files and reports, and by
//! dense index ([`NodeId`]) everywhere else. Links are dense-indexed too
//! ([`LinkId`]); parallel links between the same ordered pair are rejected so
//! a link is identified by `(src, dst)`.
//!
//! A [`Request`] asks to route `demand` units from `src` to `dst` through at
//! most `q_max` segments: up to `q_max - 1` intermediate nodes drawn from the
//! request's candidate set `sr_nodes`, followed by the final hop to `dst`.
//!
//! The module also bundles a few named topologies used throughout the test
//! and experiment suites: a real 12-node backbone, a parallel-chain family
//! with known exact throughput, a double-chain network whose throughput
//! triples when a third segment is allowed, and a small probe network whose
//! ECMP behavior is steered by a single weight.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Dense node index, valid for the `Network` that produced it.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub usize);

/// Dense link index, valid for the `Network` that produced it.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LinkId(pub usize);

/// A directed capacitated link with an integer IGP weight.
#[derive(Clone, Debug)]
pub struct Link {
    pub id: LinkId,
    pub src: NodeId,
    pub dst: NodeId,
    pub capacity: f64,
    pub igp_weight: u32,
}

/// Directed network with named nodes and dense-indexed links.
#[derive(Clone, Debug)]
pub struct Network {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    links: Vec<Link>,
    out: Vec<Vec<LinkId>>,
    inc: Vec<Vec<LinkId>>,
}

/// Validation and parsing failures for topology and request files.
#[derive(Debug)]
pub enum TopologyError {
    Io(std::io::Error),
    Json(serde_json::Error),
    UnsupportedVersion(u32),
    TooFewNodes(usize),
    NoLinks,
    DuplicateNode(String),
    UnknownNode(String),
    SelfLoop(String),
    DuplicateLink(String, String),
    BadCapacity(String, String, f64),
    BadWeight(String, String, u32),
}

impl fmt::Display for TopologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TopologyError::*;
        match self {
            Io(e) => write!(f, "i/o error: {e}"),
            Json(e) => write!(f, "malformed document: {e}"),
            UnsupportedVersion(v) => write!(f, "unsupported format_version {v} (expected 1)"),
            TooFewNodes(n) => write!(f, "a network needs at least 2 nodes, got {n}"),
            NoLinks => write!(f, "a network needs at least 1 link"),
            DuplicateNode(n) => write!(f, "duplicate node name {n:?}"),
            UnknownNode(n) => write!(f, "unknown node name {n:?}"),
            SelfLoop(n) => write!(f, "self-loop at {n:?} is not allowed"),
            DuplicateLink(s, d) => write!(f, "duplicate link {s:?} -> {d:?}"),
            BadCapacity(s, d, c) => {
                write!(f, "link {s:?} -> {d:?} needs capacity > 0, got {c}")
            }
            BadWeight(s, d, w) => write!(f, "link {s:?} -> {d:?} needs weight >= 1, got {w}"),
        }
    }
}

impl std::error::Error for TopologyError {}

impl From<std::io::Error> for TopologyError {
    fn from(e: std::io::Error) -> Self {
        TopologyError::Io(e)
    }
}

impl From<serde_json::Error> for TopologyError {
    fn from(e: serde_json::Error) -> Self {
        TopologyError::Json(e)
    }
}

impl Network {
    /// Builds a validated network from node names and `(src, dst, capacity,
    /// weight)` link tuples. Link ids follow the given order.
    pub fn new<S: AsRef<str>>(
        nodes: &[S],
        links: &[(&str, &str, f64, u32)],
    ) -> Result<Network, TopologyError> {
        if nodes.len() < 2 {
            return Err(TopologyError::TooFewNodes(nodes.len()));
        }
        if links.is_empty() {
            return Err(TopologyError::NoLinks);
        }
        let mut names = Vec::with_capacity(nodes.len());
        let mut index = BTreeMap::new();
        for n in nodes {
            let n = n.as_ref();
            if index.insert(n.to_string(), names.len()).is_some() {
                return Err(TopologyError::DuplicateNode(n.to_string()));
            }
            names.push(n.to_string());
        }
        let mut net = Network {
            out: vec![Vec::new(); names.len()],
            inc: vec![Vec::new(); names.len()],
            names,
            index,
            links: Vec::with_capacity(links.len()),
        };
        let mut seen = BTreeMap::new();
        for &(s, d, capacity, weight) in links {
            let src = net
                .node(s)
                .ok_or_else(|| TopologyError::UnknownNode(s.to_string()))?;
            let dst = net
                .node(d)
                .ok_or_else(|| TopologyError::UnknownNode(d.to_string()))?;
            if src == dst {
                return Err(TopologyError::SelfLoop(s.to_string()));
            }
            if capacity <= 0.0 || !capacity.is_finite() {
                return Err(TopologyError::BadCapacity(s.into(), d.into(), capacity));
            }
            if weight < 1 {
                return Err(TopologyError::BadWeight(s.into(), d.into(), weight));
            }
            if seen.insert((src, dst), ()).is_some() {
                return Err(TopologyError::DuplicateLink(s.into(), d.into()));
            }
            let id = LinkId(net.links.len());
            net.links.push(Link {
                id,
                src,
                dst,
                capacity,
                igp_weight: weight,
            });
            net.out[src.0].push(id);
            net.inc[dst.0].push(id);
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    /// Resolves a node name to its dense index.
    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).map(|&i| NodeId(i))
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.names[node.0]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.names.len()).map(NodeId)
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.0]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Link ids leaving `node`, in insertion order.
    pub fn out_links(&self, node: NodeId) -> &[LinkId] {
        &self.out[node.0]
    }

    /// Link ids entering `node`, in insertion order.
    pub fn in_links(&self, node: NodeId) -> &[LinkId] {
        &self.inc[node.0]
    }

    /// The link from `src` to `dst`, if present.
    pub fn find_link(&self, src: NodeId, dst: NodeId) -> Option<LinkId> {
        self.out[src.0]
            .iter()
            .copied()
            .find(|&id| self.links[id.0].dst == dst)
    }
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

pub const FORMAT_VERSION: u32 = 1;

/// On-disk topology document. Bidirectional entries expand into two directed
/// links sharing capacity value and weight (not the capacity itself).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TopologyDoc {
    pub format_version: u32,
    pub nodes: Vec<String>,
    pub links: Vec<LinkDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkDoc {
    pub src: String,
    pub dst: String,
    pub capacity: f64,
    pub weight: u32,
    #[serde(default, skip_serializing_if = "is_false")]
    pub bidirectional: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl Network {
    pub fn from_doc(doc: &TopologyDoc) -> Result<Network, TopologyError> {
        if doc.format_version != FORMAT_VERSION {
            return Err(TopologyError::UnsupportedVersion(doc.format_version));
        }
        let mut links: Vec<(&str, &str, f64, u32)> = Vec::new();
        for l in &doc.links {
            links.push((&l.src, &l.dst, l.capacity, l.weight));
            if l.bidirectional {
                links.push((&l.dst, &l.src, l.capacity, l.weight));
            }
        }
        Network::new(&doc.nodes, &links)
    }

    /// Canonical document form: every directed link listed separately, in
    /// link-id order. `from_doc(to_doc(net))` reproduces `net` exactly.
    pub fn to_doc(&self) -> TopologyDoc {
        TopologyDoc {
            format_version: FORMAT_VERSION,
            nodes: self.names.clone(),
            links: self
                .links
                .iter()
                .map(|l| LinkDoc {
                    src: self.name(l.src).to_string(),
                    dst: self.name(l.dst).to_string(),
                    capacity: l.capacity,
                    weight: l.igp_weight,
                    bidirectional: false,
                })
                .collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Network, TopologyError> {
        let doc: TopologyDoc = serde_json::from_str(s)?;
        Network::from_doc(&doc)
    }

    /// Canonical JSON serialization of [`Network::to_doc`]; also the byte
    /// stream experiment artifacts hash to identify a topology.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("topology doc serializes")
    }
}

/// Reads and validates a topology file.
pub fn load_network(path: impl AsRef<Path>) -> Result<Network, TopologyError> {
    let text = std::fs::read_to_string(path)?;
    Network::from_json_str(&text)
}

// ---------------------------------------------------------------------------
// Requests
// ---------------------------------------------------------------------------

/// A routing request: `demand` units from `src` to `dst`, steered through at
/// most `q_max` segments whose intermediate nodes come from `sr_nodes`.
#[derive(Clone, Debug)]
pub struct Request {
    /// Position in the request file / trace (arrival order for online runs).
    pub id: usize,
    pub src: NodeId,
    pub dst: NodeId,
    pub demand: f64,
    /// Candidate intermediate nodes, sorted and de-duplicated.
    pub sr_nodes: Vec<NodeId>,
    /// Maximum number of segments (>= 1); a route lists at most `q_max - 1`
    /// intermediate nodes.
    pub q_max: u32,
}

#[derive(Debug)]
pub enum RequestError {
    UnknownNode(String),
    SameEndpoints(String),
    NonPositiveDemand(f64),
    ZeroQMax,
    /// `q_max - 1` intermediate nodes must fit in the candidate set.
    QMaxExceedsCandidates { q_max: u32, candidates: usize },
    EndpointInSrNodes(String),
}

impl fmt::Display for RequestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RequestError::*;
        match self {
            UnknownNode(n) => write!(f, "unknown node name {n:?}"),
            SameEndpoints(n) => write!(f, "request src and dst are both {n:?}"),
            NonPositiveDemand(d) => write!(f, "request demand must be > 0, got {d}"),
            ZeroQMax => write!(f, "q_max must be >= 1"),
            QMaxExceedsCandidates { q_max, candidates } => write!(
                f,
                "q_max {q_max} needs {} intermediate nodes but only {candidates} are available",
                q_max - 1
            ),
            EndpointInSrNodes(n) => {
                write!(f, "endpoint {n:?} may not appear in sr_nodes")
            }
        }
    }
}

impl std::error::Error for RequestError {}

impl Request {
    /// Validates and normalizes a request against `net`.
    pub fn new(
        net: &Network,
        id: usize,
        src: NodeId,
        dst: NodeId,
        demand: f64,
        mut sr_nodes: Vec<NodeId>,
        q_max: u32,
    ) -> Result<Request, RequestError> {
        if src == dst {
            return Err(RequestError::SameEndpoints(net.name(src).to_string()));
        }
        if !(demand > 0.0) || !demand.is_finite() {
            return Err(RequestError::NonPositiveDemand(demand));
        }
        if q_max == 0 {
            return Err(RequestError::ZeroQMax);
        }
        sr_nodes.sort_unstable();
        sr_nodes.dedup();
        if let Some(&n) = sr_nodes.iter().find(|&&n| n == src || n == dst) {
            return Err(RequestError::EndpointInSrNodes(net.name(n).to_string()));
        }
        if (q_max as usize) > sr_nodes.len() + 1 {
            return Err(RequestError::QMaxExceedsCandidates {
                q_max,
                candidates: sr_nodes.len(),
            });
        }
        Ok(Request {
            id,
            src,
            dst,
            demand,
            sr_nodes,
            q_max,
        })
    }

    /// All nodes other than the endpoints, the default candidate set.
    pub fn all_sr_nodes(net: &Network, src: NodeId, dst: NodeId) -> Vec<NodeId> {
        net.node_ids().filter(|&n| n != src && n != dst).collect()
    }
}

/// On-disk request list. The same schema doubles as an online trace, where
/// entry order is arrival order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RequestFileDoc {
    pub format_version: u32,
    pub requests: Vec<RequestDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RequestDoc {
    pub src: String,
    pub dst: String,
    pub demand: f64,
    /// Either the literal string `"all"` (every node except the endpoints) or
    /// an explicit list of node names.
    pub sr_nodes: SrNodeSpec,
    pub q_max: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SrNodeSpec {
    Keyword(String),
    List(Vec<String>),
}

impl SrNodeSpec {
    pub fn all() -> SrNodeSpec {
        SrNodeSpec::Keyword("all".to_string())
    }
}

#[derive(Debug)]
pub enum RequestFileError {
    Io(std::io::Error),
    Json(serde_json::Error),
    UnsupportedVersion(u32),
    /// `sr_nodes` was a string other than `"all"`.
    BadSrNodeKeyword(String),
    Entry(usize, RequestError),
    UnknownNode(usize, String),
}

impl fmt::Display for RequestFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RequestFileError::*;
        match self {
            Io(e) => write!(f, "i/o error: {e}"),
            Json(e) => write!(f, "malformed document: {e}"),
            UnsupportedVersion(v) => write!(f, "unsupported format_version {v} (expected 1)"),
            BadSrNodeKeyword(s) => {
                write!(f, "sr_nodes must be \"all\" or a list of names, got {s:?}")
            }
            Entry(i, e) => write!(f, "request #{i}: {e}"),
            UnknownNode(i, n) => write!(f, "request #{i}: unknown node name {n:?}"),
        }
    }
}

impl std::error::Error for RequestFileError {}

impl From<std::io::Error> for RequestFileError {
    fn from(e: std::io::Error) -> Self {
        RequestFileError::Io(e)
    }
}

impl From<serde_json::Error> for RequestFileError {
    fn from(e: serde_json::Error) -> Self {
        RequestFileError::Json(e)
    }
}

/// Resolves a request document against `net`. `q_override` replaces every
/// entry's `q_max`, which is how experiment sweeps vary the segment budget
/// over a fixed request file.
pub fn resolve_requests(
    net: &Network,
    doc: &RequestFileDoc,
    q_override: Option<u32>,
) -> Result<Vec<Request>, RequestFileError> {
    if doc.format_version != FORMAT_VERSION {
        return Err(RequestFileError::UnsupportedVersion(doc.format_version));
    }
    let mut out = Vec::with_capacity(doc.requests.len());
    for (i, rd) in doc.requests.iter().enumerate() {
        let src = net
            .node(&rd.src)
            .ok_or_else(|| RequestFileError::UnknownNode(i, rd.src.clone()))?;
        let dst = net
            .node(&rd.dst)
            .ok_or_else(|| RequestFileError::UnknownNode(i, rd.dst.clone()))?;
        let sr_nodes = match &rd.sr_nodes {
            SrNodeSpec::Keyword(k) if k == "all" => Request::all_sr_nodes(net, src, dst),
            SrNodeSpec::Keyword(k) => {
                return Err(RequestFileError::BadSrNodeKeyword(k.clone()));
            }
            SrNodeSpec::List(names) => {
                let mut nodes = Vec::with_capacity(names.len());
                for n in names {
                    nodes.push(
                        net.node(n)
                            .ok_or_else(|| RequestFileError::UnknownNode(i, n.clone()))?,
                    );
                }
                nodes
            }
        };
        let q_max = q_override.unwrap_or(rd.q_max);
        out.push(
            Request::new(net, i, src, dst, rd.demand, sr_nodes, q_max)
                .map_err(|e| RequestFileError::Entry(i, e))?,
        );
    }
    Ok(out)
}

/// Reads a request file and resolves it against `net`.
pub fn load_requests(
    path: impl AsRef<Path>,
    net: &Network,
    q_override: Option<u32>,
) -> Result<Vec<Request>, RequestFileError> {
    let text = std::fs::read_to_string(path)?;
    let doc: RequestFileDoc = serde_json::from_str(&text)?;
    resolve_requests(net, &doc, q_override)
}

// ---------------------------------------------------------------------------
// Named topologies
// ---------------------------------------------------------------------------

/// Capacity used for links that should never bind in probe topologies.
pub const PROBE_CAPACITY: f64 = 1e9;

const ABILENE_JSON: &str = include_str!("../data/abilene.json");

impl Network {
    /// The 12-node US research backbone (30 directed links, capacity 100,
    /// unit weights).
    pub fn abilene() -> Network {
        Network::from_json_str(ABILENE_JSON).expect("bundled topology is valid")
    }

    /// `chains` disjoint directed paths of `interior_hops` interior nodes
    /// each, from a common source `s` to a common sink `t`. Every link has
    /// the given capacity and unit weight, so the max `s -> t` flow is
    /// exactly `chains * capacity` and the chains are the only paths.
    ///
    /// Interior nodes are named `c{chain}_{position}`, 1-based.
    pub fn parallel_chains(chains: usize, interior_hops: usize, capacity: f64) -> Network {
        assert!(chains >= 1 && interior_hops >= 1);
        let mut nodes = vec!["s".to_string(), "t".to_string()];
        for i in 1..=chains {
            for j in 1..=interior_hops {
                nodes.push(format!("c{i}_{j}"));
            }
        }
        let mut links: Vec<(String, String)> = Vec::new();
        for i in 1..=chains {
            links.push(("s".into(), format!("c{i}_1")));
            for j in 1..interior_hops {
                links.push((format!("c{i}_{j}"), format!("c{i}_{}", j + 1)));
            }
            links.push((format!("c{i}_{interior_hops}"), "t".into()));
        }
        let tuples: Vec<(&str, &str, f64, u32)> = links
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str(), capacity, 1))
            .collect();
        Network::new(&nodes, &tuples).expect("generator produces a valid network")
    }

    /// A network where two segments per route cap the `s -> t` throughput at
    /// 100 but three segments reach the max-flow value 300.
    ///
    /// Two 7-hop chains run from `s` to `t` (interior nodes `k1..k6` and
    /// `k7..k12`), next to a 3-hop backbone `s -> h1 -> h2 -> t`. Shortcut
    /// links divert each chain's first three interior nodes to `h1` and pull
    /// its last three from `h2`, so the shortest route between `s` or `t` and
    /// any single interior node crosses the backbone's middle link
    /// `h1 -> h2`. With at most one intermediate node every route therefore
    /// burns `h1 -> h2` capacity (100), while two intermediate nodes, e.g.
    /// `(k3, k4)`, pin a full chain and the empty route keeps the backbone,
    /// which together saturate all three of `s`'s outgoing links.
    ///
    /// All links have capacity 100 and unit weight.
    pub fn two_sr_counterexample() -> Network {
        let mut nodes: Vec<String> = ["s", "t", "h1", "h2"].iter().map(|s| s.to_string()).collect();
        for i in 1..=12 {
            nodes.push(format!("k{i}"));
        }
        let mut links: Vec<(String, String)> = vec![
            ("s".into(), "h1".into()),
            ("h1".into(), "h2".into()),
            ("h2".into(), "t".into()),
        ];
        for chain in 0..2 {
            let k = |j: usize| format!("k{}", chain * 6 + j);
            links.push(("s".into(), k(1)));
            for j in 1..6 {
                links.push((k(j), k(j + 1)));
            }
            links.push((k(6), "t".into()));
            for j in 1..=3 {
                links.push((k(j), "h1".into()));
            }
            for j in 4..=6 {
                links.push(("h2".into(), k(j)));
            }
        }
        let tuples: Vec<(&str, &str, f64, u32)> = links
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str(), 100.0, 1))
            .collect();
        Network::new(&nodes, &tuples).expect("generator produces a valid network")
    }

    /// A 5-node probe whose ECMP behavior is steered by one weight: a
    /// unit-weight cycle `s -> a -> b -> k -> a` with exit `b -> t`, plus
    /// direct links `s -> k` and `k -> t` of weight `w_direct`.
    ///
    /// For the pair `(s, k)`: `w_direct = 1` uses only the direct link,
    /// `w_direct = 3` splits 50/50 with the detour `s -> a -> b -> k`, and
    /// `w_direct = 5` uses only the detour. With `w_direct = 5` a route
    /// segmented at `k` crosses `a -> b` on both legs, a per-link coefficient
    /// of 2. Capacities are [`PROBE_CAPACITY`] so they never bind.
    pub fn detour_probe(w_direct: u32) -> Network {
        Network::detour_probe_with_capacity(w_direct, PROBE_CAPACITY)
    }

    pub fn detour_probe_with_capacity(w_direct: u32, capacity: f64) -> Network {
        Network::new(
            &["s", "a", "b", "k", "t"],
            &[
                ("s", "a", capacity, 1),
                ("a", "b", capacity, 1),
                ("b", "k", capacity, 1),
                ("k", "a", capacity, 1),
                ("b", "t", capacity, 1),
                ("s", "k", capacity, w_direct),
                ("k", "t", capacity, w_direct),
            ],
        )
        .expect("generator produces a valid network")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_doc_parses() {
        let net = Network::from_json_str(
            r#"{
                "format_version": 1,
                "nodes": ["A", "B"],
                "links": [{"src": "A", "dst": "B", "capacity": 10.0, "weight": 1}]
            }"#,
        )
        .unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.link_count(), 1);
        let l = net.link(LinkId(0));
        assert_eq!(net.name(l.src), "A");
        assert_eq!(net.name(l.dst), "B");
        assert_eq!(l.capacity, 10.0);
    }

    #[test]
    fn bidirectional_expands() {
        let net = Network::from_json_str(
            r#"{
                "format_version": 1,
                "nodes": ["A", "B"],
                "links": [{"src": "A", "dst": "B", "capacity": 5.0, "weight": 2,
                           "bidirectional": true}]
            }"#,
        )
        .unwrap();
        assert_eq!(net.link_count(), 2);
        let a = net.node("A").unwrap();
        let b = net.node("B").unwrap();
        assert!(net.find_link(a, b).is_some());
        assert!(net.find_link(b, a).is_some());
    }

    #[test]
    fn zero_capacity_rejected() {
        let err = Network::new(&["A", "B"], &[("A", "B", 0.0, 1)]).unwrap_err();
        assert!(matches!(err, TopologyError::BadCapacity(..)), "{err}");
    }

    #[test]
    fn zero_weight_rejected() {
        let err = Network::new(&["A", "B"], &[("A", "B", 1.0, 0)]).unwrap_err();
        assert!(matches!(err, TopologyError::BadWeight(..)), "{err}");
    }

    #[test]
    fn duplicate_link_rejected() {
        let err =
            Network::new(&["A", "B"], &[("A", "B", 1.0, 1), ("A", "B", 2.0, 1)]).unwrap_err();
        assert!(matches!(err, TopologyError::DuplicateLink(..)), "{err}");
    }

    #[test]
    fn bad_version_rejected() {
        let err = Network::from_json_str(
            r#"{"format_version": 2, "nodes": ["A", "B"],
                "links": [{"src": "A", "dst": "B", "capacity": 1.0, "weight": 1}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, TopologyError::UnsupportedVersion(2)), "{err}");
    }

    #[test]
    fn roundtrip_identity() {
        let net = Network::two_sr_counterexample();
        let re = Network::from_json_str(&net.to_canonical_json()).unwrap();
        assert_eq!(re.node_count(), net.node_count());
        assert_eq!(re.link_count(), net.link_count());
        for (a, b) in net.links().iter().zip(re.links().iter()) {
            assert_eq!(net.name(a.src), re.name(b.src));
            assert_eq!(net.name(a.dst), re.name(b.dst));
            assert_eq!(a.capacity, b.capacity);
            assert_eq!(a.igp_weight, b.igp_weight);
        }
        assert_eq!(net.to_canonical_json(), re.to_canonical_json());
    }

    #[test]
    fn abilene_shape() {
        let net = Network::abilene();
        assert_eq!(net.node_count(), 12);
        assert_eq!(net.link_count(), 30);
        for l in net.links() {
            assert_eq!(l.capacity, 100.0);
            assert_eq!(l.igp_weight, 1);
        }
        // Every link has its reverse.
        for l in net.links() {
            assert!(net.find_link(l.dst, l.src).is_some());
        }
    }

    #[test]
    fn chains_smallest() {
        let net = Network::parallel_chains(1, 1, 7.0);
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.link_count(), 2);
    }

    #[test]
    fn chains_shape_and_maxflow() {
        let net = Network::parallel_chains(5, 7, 100.0);
        assert_eq!(net.node_count(), 37);
        assert_eq!(net.link_count(), 40);
        let s = net.node("s").unwrap();
        let t = net.node("t").unwrap();
        assert_eq!(max_flow(&net, s, t), 500.0);
    }

    #[test]
    fn counterexample_shape_and_maxflow() {
        let net = Network::two_sr_counterexample();
        assert_eq!(net.node_count(), 16);
        assert_eq!(net.link_count(), 29);
        for name in ["k1", "k3", "k4", "h1", "h2"] {
            assert!(net.node(name).is_some(), "missing {name}");
        }
        let s = net.node("s").unwrap();
        let t = net.node("t").unwrap();
        assert_eq!(max_flow(&net, s, t), 300.0);
    }

    #[test]
    fn detour_probe_distances() {
        // Direct-link weight moves the s->k shortest distance as documented.
        for (w, expect) in [(1, 1), (3, 3), (5, 3)] {
            let net = Network::detour_probe(w);
            let s = net.node("s").unwrap();
            let k = net.node("k").unwrap();
            assert_eq!(shortest_dist(&net, s, k), Some(expect), "w_direct={w}");
        }
    }

    #[test]
    fn request_validation() {
        let net = Network::parallel_chains(2, 1, 10.0);
        let s = net.node("s").unwrap();
        let t = net.node("t").unwrap();
        let c11 = net.node("c1_1").unwrap();
        let c21 = net.node("c2_1").unwrap();

        let r = Request::new(&net, 0, s, t, 5.0, vec![c21, c11, c11], 2).unwrap();
        assert_eq!(r.sr_nodes, vec![c11, c21]); // sorted, deduped

        assert!(matches!(
            Request::new(&net, 0, s, s, 5.0, vec![], 1),
            Err(RequestError::SameEndpoints(_))
        ));
        assert!(matches!(
            Request::new(&net, 0, s, t, 0.0, vec![], 1),
            Err(RequestError::NonPositiveDemand(_))
        ));
        assert!(matches!(
            Request::new(&net, 0, s, t, 5.0, vec![c11], 0),
            Err(RequestError::ZeroQMax)
        ));
        assert!(matches!(
            Request::new(&net, 0, s, t, 5.0, vec![c11], 3),
            Err(RequestError::QMaxExceedsCandidates { .. })
        ));
        assert!(matches!(
            Request::new(&net, 0, s, t, 5.0, vec![s], 2),
            Err(RequestError::EndpointInSrNodes(_))
        ));
    }

    #[test]
    fn request_file_all_keyword() {
        let net = Network::parallel_chains(2, 1, 10.0);
        let doc: RequestFileDoc = serde_json::from_str(
            r#"{"format_version": 1, "requests": [
                {"src": "s", "dst": "t", "demand": 3.0, "sr_nodes": "all", "q_max": 2}
            ]}"#,
        )
        .unwrap();
        let rs = resolve_requests(&net, &doc, None).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].sr_nodes.len(), 2); // both interior nodes
        let rs = resolve_requests(&net, &doc, Some(1)).unwrap();
        assert_eq!(rs[0].q_max, 1);
    }

    /// Plain Edmonds-Karp max-flow, used only as an independent check of the
    /// generators' documented cut values.
    fn max_flow(net: &Network, s: NodeId, t: NodeId) -> f64 {
        let n = net.node_count();
        let mut cap = vec![vec![0.0f64; n]; n];
        for l in net.links() {
            cap[l.src.0][l.dst.0] += l.capacity;
        }
        let mut total = 0.0;
        loop {
            // BFS for an augmenting path in the residual graph.
            let mut prev = vec![usize::MAX; n];
            prev[s.0] = s.0;
            let mut queue = std::collections::VecDeque::from([s.0]);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if prev[v] == usize::MAX && cap[u][v] > 1e-9 {
                        prev[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if prev[t.0] == usize::MAX {
                return total;
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = t.0;
            while v != s.0 {
                bottleneck = bottleneck.min(cap[prev[v]][v]);
                v = prev[v];
            }
            let mut v = t.0;
            while v != s.0 {
                cap[prev[v]][v] -= bottleneck;
                cap[v][prev[v]] += bottleneck;
                v = prev[v];
            }
            total += bottleneck;
        }
    }

    /// Unweighted-by-weight Dijkstra used only to pin generator distances.
    fn shortest_dist(net: &Network, s: NodeId, t: NodeId) -> Option<u64> {
        let mut dist = vec![u64::MAX; net.node_count()];
        dist[s.0] = 0;
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(std::cmp::Reverse((0u64, s.0)));
        while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &lid in net.out_links(NodeId(u)) {
                let l = net.link(lid);
                let nd = d + l.igp_weight as u64;
                if nd < dist[l.dst.0] {
                    dist[l.dst.0] = nd;
                    heap.push(std::cmp::Reverse((nd, l.dst.0)));
                }
            }
        }
        (dist[t.0] != u64::MAX).then(|| dist[t.0])
    }
}
