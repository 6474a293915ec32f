//! Exact baselines for small instances.
//!
//! The approximation and online algorithms both need ground truth to be
//! tested against. This module provides it by brute force: enumerate every
//! admissible segment list of a request ([`enumerate_sr_lists`]), then solve
//! the resulting small LPs exactly.
//!
//! * [`solve_offline_exact`] — the maximum concurrent-throughput LP: find
//!   the largest `λ` so that every request can route `λ` times its demand
//!   over its columns within link capacities.
//! * [`solve_online_hindsight`] — the clairvoyant admission LP relaxation:
//!   accept fractions of requests to maximize accepted demand within
//!   capacities. [`solve_online_hindsight_ilp`] solves the 0/1 version by
//!   exhaustive search for very small traces.
//!
//! Lists whose consecutive pair has no connecting path are not admissible
//! routes and are skipped. Distinct lists that induce identical per-link
//! coefficient vectors (after dropping skips and collapsing consecutive
//! duplicates) are de-duplicated, keeping the first list in enumeration
//! order as the representative.
//!
//! Every LP certificate is re-verified against the raw constraints
//! independently of the solver before it is returned.

use std::collections::BTreeSet;
use std::fmt;

use crate::intra::{IntraError, IntraTable};
use crate::simplex::{maximize, SimplexError, SimplexProblem};
use crate::srpath::{sr_function, DualLengths};
use crate::topology::{LinkId, Network, NodeId, Request};

/// Default ceiling on raw list count per request.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Largest trace the exhaustive 0/1 hindsight search accepts.
pub const ILP_REQUEST_CAP: usize = 15;

/// Tolerance for certificate re-verification.
const CHECK_TOL: f64 = 1e-9;

/// One admissible route: its segment-node list and per-link coefficients.
#[derive(Clone, Debug)]
pub struct SrColumn {
    pub nodes: Vec<NodeId>,
    pub g: Vec<(LinkId, f64)>,
}

impl SrColumn {
    /// Route cost under per-link lengths: `Σ_e g(e) l_e`.
    pub fn cost(&self, lengths: &DualLengths) -> f64 {
        self.g.iter().map(|&(lid, g)| g * lengths.get(lid)).sum()
    }
}

/// All admissible routes of one request.
#[derive(Clone, Debug)]
pub struct EnumeratedColumns {
    pub request: usize,
    /// Number of raw lists before collapsing, skipping, de-duplication.
    pub raw_lists: u128,
    pub columns: Vec<SrColumn>,
}

#[derive(Debug)]
pub enum OracleError {
    EnumerationTooLarge { required: u128, cap: u64 },
    TooManyRequests { count: usize, cap: usize },
    /// Column sets do not line up one-to-one with the request list.
    ColumnsMismatch,
    Intra(IntraError),
    Simplex(SimplexError),
    /// The solver's answer failed independent re-verification.
    CertificateCheck(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use OracleError::*;
        match self {
            EnumerationTooLarge { required, cap } => {
                write!(f, "{required} raw lists exceed the enumeration cap {cap}")
            }
            TooManyRequests { count, cap } => {
                write!(f, "{count} requests exceed the exhaustive-search cap {cap}")
            }
            ColumnsMismatch => write!(f, "column sets do not match the request list"),
            Intra(e) => write!(f, "split table: {e}"),
            Simplex(e) => write!(f, "lp solver: {e}"),
            CertificateCheck(d) => write!(f, "certificate verification failed: {d}"),
        }
    }
}

impl std::error::Error for OracleError {}

impl From<IntraError> for OracleError {
    fn from(e: IntraError) -> Self {
        OracleError::Intra(e)
    }
}

impl From<SimplexError> for OracleError {
    fn from(e: SimplexError) -> Self {
        OracleError::Simplex(e)
    }
}

/// Enumerates every admissible segment list of `r` (at most `cap` raw
/// lists), de-duplicated by coefficient vector.
///
/// Raw lists are the `(|candidates| + 1)^(q_max - 1)` assignments of "skip"
/// or a candidate node to each position. Skips are dropped, consecutive
/// duplicates collapse (a zero-length segment), inadmissible lists (some
/// segment unreachable) are discarded, and the coefficient vector of each
/// survivor is quantized to a 1e-12 grid for de-duplication.
pub fn enumerate_sr_lists(
    table: &IntraTable,
    r: &Request,
    cap: u64,
) -> Result<EnumeratedColumns, OracleError> {
    let (raw_lists, columns) =
        enumerate_lists(table, r.src, r.dst, &r.sr_nodes, r.q_max as usize - 1, cap)?;
    Ok(EnumeratedColumns {
        request: r.id,
        raw_lists,
        columns,
    })
}

/// Candidate/position-level enumeration behind [`enumerate_sr_lists`], for
/// callers that want a list length not tied to a validated request. Returns
/// the raw list count and the surviving columns.
pub fn enumerate_lists(
    table: &IntraTable,
    src: NodeId,
    dst: NodeId,
    candidates: &[NodeId],
    positions: usize,
    cap: u64,
) -> Result<(u128, Vec<SrColumn>), OracleError> {
    let base = candidates.len() as u128 + 1;
    let raw_lists = base
        .checked_pow(positions as u32)
        .ok_or(OracleError::EnumerationTooLarge {
            required: u128::MAX,
            cap,
        })?;
    if raw_lists > cap as u128 {
        return Err(OracleError::EnumerationTooLarge {
            required: raw_lists,
            cap,
        });
    }

    let mut seen: BTreeSet<Vec<(usize, i64)>> = BTreeSet::new();
    let mut columns = Vec::new();
    for idx in 0..raw_lists {
        // Digits most-significant first so shorter lists (more leading
        // skips) appear before their longer variants.
        let mut nodes = Vec::with_capacity(positions);
        for p in (0..positions).rev() {
            let digit = (idx / base.pow(p as u32)) % base;
            if digit > 0 {
                nodes.push(candidates[digit as usize - 1]);
            }
        }
        nodes.dedup();
        let g = match sr_function(table, src, dst, &nodes) {
            Ok(g) => g,
            Err(IntraError::Unreachable { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        let key: Vec<(usize, i64)> = g
            .iter()
            .map(|&(lid, v)| (lid.0, (v * 1e12).round() as i64))
            .collect();
        if seen.insert(key) {
            columns.push(SrColumn { nodes, g });
        }
    }
    Ok((raw_lists, columns))
}

fn check_alignment(requests: &[Request], columns: &[EnumeratedColumns]) -> Result<(), OracleError> {
    if requests.len() != columns.len()
        || requests
            .iter()
            .zip(columns)
            .any(|(r, c)| r.id != c.request)
    {
        return Err(OracleError::ColumnsMismatch);
    }
    Ok(())
}

/// Exact optimum of the concurrent-throughput problem.
#[derive(Clone, Debug)]
pub struct OfflineCertificate {
    pub lambda_star: f64,
    /// `x[r][c]` = flow placed on request `r`'s column `c`.
    pub x: Vec<Vec<f64>>,
    pub link_flows: Vec<f64>,
    pub per_request_routed: Vec<f64>,
    /// Largest raw-constraint violation found during re-verification.
    pub max_violation: f64,
}

/// Solves `max λ` such that each request routes at least `λ` times its
/// demand over its enumerated columns and link loads stay within capacity.
pub fn solve_offline_exact(
    net: &Network,
    requests: &[Request],
    columns: &[EnumeratedColumns],
) -> Result<OfflineCertificate, OracleError> {
    check_alignment(requests, columns)?;
    let m = net.link_count();
    let mut offsets = Vec::with_capacity(columns.len());
    let mut total = 0usize;
    for c in columns {
        offsets.push(total);
        total += c.columns.len();
    }
    let lambda_var = total;

    let mut objective = vec![0.0; total + 1];
    objective[lambda_var] = 1.0;
    let mut constraints: Vec<(Vec<f64>, f64)> = Vec::with_capacity(requests.len() + m);
    // Coverage rows: λ d_r - Σ_c x_{r,c} <= 0.
    for (r, cols) in requests.iter().zip(columns) {
        let mut row = vec![0.0; total + 1];
        for c in 0..cols.columns.len() {
            row[offsets[r.id] + c] = -1.0;
        }
        row[lambda_var] = r.demand;
        constraints.push((row, 0.0));
    }
    // Capacity rows: Σ g x <= c_e.
    for e in 0..m {
        let mut row = vec![0.0; total + 1];
        for (cols, &off) in columns.iter().zip(&offsets) {
            for (c, col) in cols.columns.iter().enumerate() {
                for &(lid, g) in &col.g {
                    if lid.0 == e {
                        row[off + c] = g;
                    }
                }
            }
        }
        constraints.push((row, net.link(LinkId(e)).capacity));
    }

    let sol = maximize(&SimplexProblem {
        objective,
        constraints,
    })?;
    let lambda_star = sol.x[lambda_var];

    // Re-verify against the raw constraints, independent of the solver.
    let mut x: Vec<Vec<f64>> = Vec::with_capacity(columns.len());
    for (cols, &off) in columns.iter().zip(&offsets) {
        x.push(sol.x[off..off + cols.columns.len()].to_vec());
    }
    let mut link_flows = vec![0.0; m];
    let mut per_request_routed = vec![0.0; requests.len()];
    let mut max_violation = 0.0f64;
    for (r, cols) in requests.iter().zip(columns) {
        for (c, col) in cols.columns.iter().enumerate() {
            let xv = x[r.id][c];
            max_violation = max_violation.max(-xv);
            per_request_routed[r.id] += xv;
            for &(lid, g) in &col.g {
                link_flows[lid.0] += g * xv;
            }
        }
        max_violation = max_violation.max(lambda_star * r.demand - per_request_routed[r.id]);
    }
    for e in 0..m {
        max_violation = max_violation.max(link_flows[e] - net.link(LinkId(e)).capacity);
    }
    if max_violation > CHECK_TOL {
        return Err(OracleError::CertificateCheck(format!(
            "constraint violation {max_violation:.3e}"
        )));
    }
    Ok(OfflineCertificate {
        lambda_star,
        x,
        link_flows,
        per_request_routed,
        max_violation,
    })
}

/// Clairvoyant admission bound (LP relaxation).
#[derive(Clone, Debug)]
pub struct HindsightLp {
    /// Maximum fractionally-accepted demand.
    pub value: f64,
    pub x: Vec<Vec<f64>>,
}

/// Solves `max Σ_r d_r Σ_c x_{r,c}` with `Σ_c x_{r,c} ≤ 1` per request and
/// capacity rows, `x ≥ 0` — the fractional upper bound on any admission
/// sequence's accepted demand.
pub fn solve_online_hindsight(
    net: &Network,
    trace: &[Request],
    columns: &[EnumeratedColumns],
) -> Result<HindsightLp, OracleError> {
    check_alignment(trace, columns)?;
    if trace.is_empty() {
        return Ok(HindsightLp {
            value: 0.0,
            x: Vec::new(),
        });
    }
    let m = net.link_count();
    let mut offsets = Vec::with_capacity(columns.len());
    let mut total = 0usize;
    for c in columns {
        offsets.push(total);
        total += c.columns.len();
    }

    let mut objective = vec![0.0; total];
    for (r, &off) in trace.iter().zip(&offsets) {
        for c in 0..columns[r.id].columns.len() {
            objective[off + c] = r.demand;
        }
    }
    let mut constraints: Vec<(Vec<f64>, f64)> = Vec::new();
    for (r, &off) in trace.iter().zip(&offsets) {
        let mut row = vec![0.0; total];
        for c in 0..columns[r.id].columns.len() {
            row[off + c] = 1.0;
        }
        constraints.push((row, 1.0));
    }
    for e in 0..m {
        let mut row = vec![0.0; total];
        for (r, &off) in trace.iter().zip(&offsets) {
            for (c, col) in columns[r.id].columns.iter().enumerate() {
                for &(lid, g) in &col.g {
                    if lid.0 == e {
                        row[off + c] = r.demand * g;
                    }
                }
            }
        }
        constraints.push((row, net.link(LinkId(e)).capacity));
    }

    let sol = maximize(&SimplexProblem {
        objective,
        constraints,
    })?;

    let mut x: Vec<Vec<f64>> = Vec::with_capacity(columns.len());
    for (cols, &off) in columns.iter().zip(&offsets) {
        x.push(sol.x[off..off + cols.columns.len()].to_vec());
    }
    // Re-verify.
    let mut link_flows = vec![0.0; m];
    let mut value = 0.0;
    let mut max_violation = 0.0f64;
    for (r, cols) in trace.iter().zip(columns) {
        let mut share = 0.0;
        for (c, col) in cols.columns.iter().enumerate() {
            let xv = x[r.id][c];
            max_violation = max_violation.max(-xv);
            share += xv;
            value += r.demand * xv;
            for &(lid, g) in &col.g {
                link_flows[lid.0] += r.demand * g * xv;
            }
        }
        max_violation = max_violation.max(share - 1.0);
    }
    for e in 0..m {
        max_violation = max_violation.max(link_flows[e] - net.link(LinkId(e)).capacity);
    }
    if max_violation > CHECK_TOL {
        return Err(OracleError::CertificateCheck(format!(
            "constraint violation {max_violation:.3e}"
        )));
    }
    Ok(HindsightLp { value, x })
}

/// Exhaustive 0/1 hindsight optimum: each request is rejected or accepted
/// onto exactly one of its columns. Exponential; refuses traces longer than
/// [`ILP_REQUEST_CAP`].
pub fn solve_online_hindsight_ilp(
    net: &Network,
    trace: &[Request],
    columns: &[EnumeratedColumns],
) -> Result<f64, OracleError> {
    check_alignment(trace, columns)?;
    if trace.len() > ILP_REQUEST_CAP {
        return Err(OracleError::TooManyRequests {
            count: trace.len(),
            cap: ILP_REQUEST_CAP,
        });
    }
    // Suffix demand sums for pruning.
    let mut suffix = vec![0.0; trace.len() + 1];
    for i in (0..trace.len()).rev() {
        suffix[i] = suffix[i + 1] + trace[i].demand;
    }
    let mut flows = vec![0.0f64; net.link_count()];
    let mut best = 0.0f64;
    fn dfs(
        net: &Network,
        trace: &[Request],
        columns: &[EnumeratedColumns],
        suffix: &[f64],
        i: usize,
        accepted: f64,
        flows: &mut [f64],
        best: &mut f64,
    ) {
        if i == trace.len() {
            *best = (*best).max(accepted);
            return;
        }
        if accepted + suffix[i] <= *best + 1e-12 {
            return; // even accepting everything left cannot improve
        }
        let r = &trace[i];
        for col in &columns[r.id].columns {
            let fits = col.g.iter().all(|&(lid, g)| {
                flows[lid.0] + r.demand * g <= net.link(lid).capacity + CHECK_TOL
            });
            if fits {
                for &(lid, g) in &col.g {
                    flows[lid.0] += r.demand * g;
                }
                dfs(net, trace, columns, suffix, i + 1, accepted + r.demand, flows, best);
                for &(lid, g) in &col.g {
                    flows[lid.0] -= r.demand * g;
                }
            }
        }
        // Reject branch.
        dfs(net, trace, columns, suffix, i + 1, accepted, flows, best);
    }
    dfs(net, trace, columns, &suffix, 0, 0.0, &mut flows, &mut best);
    Ok(best)
}
