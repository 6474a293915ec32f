//! Approximation scheme for maximum concurrent throughput.
//!
//! The solver maintains one dual length per link, initialized to `δ / c_e`.
//! It proceeds in phases; each phase routes every request's full demand in
//! steps. A step asks the kernel for the cheapest admissible segment list
//! under the current lengths, routes as much as the bottleneck link allows
//! (`min_e c_e / g(e)` over the route, capped by the remaining demand), and
//! multiplies each touched link's length by `1 + ε · g(e)Δ / c_e`. Phases
//! stop once the dual objective `D(l) = Σ_e l_e c_e` reaches 1.
//!
//! Accounting: with `ρ` executed phases and `L = log_{1+ε}(1/δ)`, the
//! reported throughput multiplier is `λ = (ρ - 1) / L` and the reported flow
//! is the flow of the first `ρ - 1` phases scaled down by `L`. The final
//! phase is excluded deliberately — the dual objective was below 1 when it
//! started but not necessarily when its flow was placed, so only the first
//! `ρ - 1` phases carry the guarantee that every link's accumulated
//! `κ_e = Σ g(e)Δ / c_e` stays below `L`, which is exactly what makes the
//! scaled flow capacity-feasible. The reported flow routes `λ · d_r` per
//! request, so `λ` is always a certified lower bound on the optimum.
//!
//! With `ε(ω) = 1 - (1 + ω)^(-1/3)` and `δ(ε) = ((1 - ε)/m)^(1/ε)` the
//! result is within `(1 - ε)³` of the optimal multiplier whenever the
//! optimum is at least 1.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::intra::{IntraError, IntraTable};
use crate::srpath::{apfsc, mincost_sr_path, AuxGraph, DualLengths};
use crate::topology::{Network, Request};

/// Tuning parameters. Build via [`FptasParams::from_epsilon`] or
/// [`FptasParams::from_omega`]; both derive `δ` from the accuracy target and
/// the link count.
#[derive(Clone, Debug)]
pub struct FptasParams {
    pub epsilon: f64,
    pub delta: f64,
    /// The end-to-end accuracy target that produced `epsilon`, if one did.
    pub omega: Option<f64>,
    /// Phase cap; exceeding it aborts the run with diagnostics rather than
    /// looping forever on a pathological instance.
    pub max_phases: usize,
}

#[derive(Debug, PartialEq)]
pub enum ParamError {
    BadEpsilon(f64),
    BadOmega(f64),
    BadDelta(f64),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::BadEpsilon(e) => write!(f, "epsilon must lie in (0, 1), got {e}"),
            ParamError::BadOmega(w) => write!(f, "omega must be positive, got {w}"),
            ParamError::BadDelta(d) => write!(f, "delta must lie in (0, 1), got {d}"),
        }
    }
}

impl std::error::Error for ParamError {}

impl FptasParams {
    /// Parameters for an accuracy knob `ε ∈ (0, 1)` on a network with `m`
    /// links: `δ = ((1 - ε)/m)^(1/ε)`.
    pub fn from_epsilon(epsilon: f64, m: usize) -> Result<FptasParams, ParamError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ParamError::BadEpsilon(epsilon));
        }
        let delta = ((1.0 - epsilon) / m as f64).powf(1.0 / epsilon);
        Ok(FptasParams {
            epsilon,
            delta,
            omega: None,
            max_phases: default_max_phases(epsilon, m),
        })
    }

    /// Parameters for an end-to-end accuracy target `ω > 0` (result within a
    /// factor `1 + ω` of optimal): `ε = 1 - (1 + ω)^(-1/3)`.
    pub fn from_omega(omega: f64, m: usize) -> Result<FptasParams, ParamError> {
        if !(omega > 0.0) {
            return Err(ParamError::BadOmega(omega));
        }
        let epsilon = 1.0 - (1.0 + omega).powf(-1.0 / 3.0);
        let mut p = FptasParams::from_epsilon(epsilon, m)?;
        p.omega = Some(omega);
        Ok(p)
    }

    /// Explicit `ε` and `δ`, for tests and experiments that pin both.
    pub fn explicit(epsilon: f64, delta: f64, m: usize) -> Result<FptasParams, ParamError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ParamError::BadEpsilon(epsilon));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(ParamError::BadDelta(delta));
        }
        Ok(FptasParams {
            epsilon,
            delta,
            omega: None,
            max_phases: default_max_phases(epsilon, m),
        })
    }

    pub fn with_max_phases(mut self, max_phases: usize) -> FptasParams {
        self.max_phases = max_phases;
        self
    }

    /// `log_{1+ε}(1/δ)`, the flow scale factor.
    pub fn scale_factor(&self) -> f64 {
        (1.0 / self.delta).ln() / (1.0 + self.epsilon).ln()
    }
}

/// Default phase cap: ten times the theoretical phase bound for an optimum
/// of 2, i.e. `10 · ⌈(2/ε) log_{1+ε}(m/(1-ε))⌉`. Generous for any instance
/// whose optimum is below 20.
pub fn default_max_phases(epsilon: f64, m: usize) -> usize {
    let log = (m as f64 / (1.0 - epsilon)).ln() / (1.0 + epsilon).ln();
    (10.0 * ((2.0 / epsilon) * log).ceil()) as usize
}

/// `D(l) = Σ_e l_e c_e`, the dual objective steering termination.
pub fn dual_objective(lengths: &DualLengths, net: &Network) -> f64 {
    net.links()
        .iter()
        .map(|l| lengths.get(l.id) * l.capacity)
        .sum()
}

/// Scales raw accumulated flows by `log_{1+ε}(1/δ)` and derives the
/// throughput multiplier from the executed phase count.
pub fn scale_solution(
    raw_flows: &[f64],
    epsilon: f64,
    delta: f64,
    phases: usize,
) -> (Vec<f64>, f64) {
    let scale = (1.0 / delta).ln() / (1.0 + epsilon).ln();
    let flows = raw_flows.iter().map(|f| f / scale).collect();
    let lambda = phases.saturating_sub(1) as f64 / scale;
    (flows, lambda)
}

#[derive(Debug)]
pub enum FptasError {
    /// A request has no admissible route at all (target unreachable).
    UnroutableRequest { request: usize, src: String, dst: String },
    /// The phase cap tripped; carries the dual objective for diagnosis.
    PhaseLimit { limit: usize, dual_value: f64 },
    Intra(IntraError),
}

impl fmt::Display for FptasError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FptasError::UnroutableRequest { request, src, dst } => {
                write!(f, "request #{request} ({src:?} -> {dst:?}) has no admissible route")
            }
            FptasError::PhaseLimit { limit, dual_value } => write!(
                f,
                "phase cap {limit} exceeded with dual objective {dual_value:.3e} (< 1); \
                 raise the cap or check the instance scaling"
            ),
            FptasError::Intra(e) => write!(f, "split table: {e}"),
        }
    }
}

impl std::error::Error for FptasError {}

impl From<IntraError> for FptasError {
    fn from(e: IntraError) -> Self {
        FptasError::Intra(e)
    }
}

/// Result of a solver run. `flows` is the feasible scaled solution backing
/// `lambda`; `raw_flows` is the same flow before scaling (the first
/// `phases - 1` phases).
#[derive(Clone, Debug)]
pub struct FptasResult {
    pub lambda: f64,
    /// Executed phases ρ.
    pub phases: usize,
    /// Routing steps over all executed phases, final phase included.
    pub steps: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Scaled per-link flow, `raw_flows / log_{1+ε}(1/δ)`; within capacity.
    pub flows: Vec<f64>,
    /// Counted (first `phases - 1` phases) per-link flow, unscaled.
    pub raw_flows: Vec<f64>,
    /// Per-link scaling exponents `κ_e = raw_flows_e / c_e`; each stays
    /// strictly below `log_{1+ε}(1/δ)`.
    pub kappa: Vec<f64>,
    /// Scaled demand routed per request; `lambda · d_r` for every request.
    pub per_request_routed: Vec<f64>,
    /// Final dual objective (first value at or above 1).
    pub dual_value: f64,
}

impl FptasResult {
    /// `log_{1+ε}(1/δ)` as used for this run.
    pub fn scale_factor(&self) -> f64 {
        (1.0 / self.delta).ln() / (1.0 + self.epsilon).ln()
    }
}

/// Runs the phase/step scheme described in the module docs.
///
/// `table` must cover every pair of every request (see
/// [`crate::intra::build_intra_table`]). Deterministic: identical inputs
/// produce bit-identical results.
pub fn run_fptas(
    net: &Network,
    requests: &[Request],
    table: &IntraTable,
    params: &FptasParams,
) -> Result<FptasResult, FptasError> {
    let m = net.link_count();
    // Search structures are shape-only; build once per request and reuse
    // across all phases.
    let auxes: Vec<AuxGraph> = requests.iter().map(AuxGraph::for_request).collect();
    let pairs: Vec<Vec<_>> = auxes.iter().map(|a| a.pairs()).collect();

    let mut lengths = DualLengths::from_vec(
        net.links().iter().map(|l| params.delta / l.capacity).collect(),
    );
    let mut raw = vec![0.0f64; m];
    let mut routed_raw = vec![0.0f64; requests.len()];
    // Snapshots from the start of the most recent phase; these become the
    // counted solution when that phase turns out to be the last.
    let mut counted = raw.clone();
    let mut counted_routed = routed_raw.clone();

    let mut phases = 0usize;
    let mut steps = 0usize;
    let mut dual = dual_objective(&lengths, net);
    while dual < 1.0 {
        if phases >= params.max_phases {
            return Err(FptasError::PhaseLimit {
                limit: params.max_phases,
                dual_value: dual,
            });
        }
        counted.copy_from_slice(&raw);
        counted_routed.copy_from_slice(&routed_raw);
        for (r, (aux, prs)) in requests.iter().zip(auxes.iter().zip(&pairs)) {
            let mut remaining = r.demand;
            while remaining > 0.0 {
                let costs = apfsc(table, &lengths, prs)?;
                let route = mincost_sr_path(aux, &costs, table)?;
                if route.g.is_empty() {
                    return Err(FptasError::UnroutableRequest {
                        request: r.id,
                        src: net.name(r.src).to_string(),
                        dst: net.name(r.dst).to_string(),
                    });
                }
                let bottleneck = route
                    .g
                    .iter()
                    .map(|&(lid, g)| net.link(lid).capacity / g)
                    .fold(f64::INFINITY, f64::min);
                let amount = remaining.min(bottleneck);
                for &(lid, g) in &route.g {
                    let c = net.link(lid).capacity;
                    raw[lid.0] += g * amount;
                    let l = lengths.get(lid);
                    lengths.set(lid, l * (1.0 + params.epsilon * g * amount / c));
                }
                routed_raw[r.id] += amount;
                remaining -= amount;
                steps += 1;
            }
        }
        phases += 1;
        dual = dual_objective(&lengths, net);
    }

    let scale = params.scale_factor();
    let (flows, lambda) = scale_solution(&counted, params.epsilon, params.delta, phases);
    let kappa: Vec<f64> = counted
        .iter()
        .zip(net.links())
        .map(|(f, l)| f / l.capacity)
        .collect();
    let per_request_routed: Vec<f64> = counted_routed.iter().map(|d| d / scale).collect();
    debug_assert!(kappa.iter().all(|&k| phases == 0 || k < scale));
    Ok(FptasResult {
        lambda,
        phases,
        steps,
        epsilon: params.epsilon,
        delta: params.delta,
        flows,
        raw_flows: counted,
        kappa,
        per_request_routed,
        dual_value: dual,
    })
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

/// Flat per-link load row for reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkUtilization {
    pub src: String,
    pub dst: String,
    pub capacity: f64,
    pub flow: f64,
    pub utilization: f64,
}

/// Serializable run summary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OfflineSummary {
    pub lambda: f64,
    pub phases: usize,
    pub steps: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub per_link_utilization: Vec<LinkUtilization>,
    pub wall_time_ms: f64,
}

impl OfflineSummary {
    pub fn new(net: &Network, result: &FptasResult, wall_time_ms: f64) -> OfflineSummary {
        OfflineSummary {
            lambda: result.lambda,
            phases: result.phases,
            steps: result.steps,
            epsilon: result.epsilon,
            delta: result.delta,
            per_link_utilization: net
                .links()
                .iter()
                .map(|l| LinkUtilization {
                    src: net.name(l.src).to_string(),
                    dst: net.name(l.dst).to_string(),
                    capacity: l.capacity,
                    flow: result.flows[l.id.0],
                    utilization: result.flows[l.id.0] / l.capacity,
                })
                .collect(),
            wall_time_ms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intra::build_intra_table;
    use crate::topology::Network;

    fn single_link_instance(cap: f64, demand: f64) -> (Network, Vec<Request>, IntraTable) {
        let net = Network::new(&["a", "b"], &[("a", "b", cap, 1)]).unwrap();
        let a = net.node("a").unwrap();
        let b = net.node("b").unwrap();
        let r = Request::new(&net, 0, a, b, demand, vec![], 1).unwrap();
        let table = build_intra_table(&net, &[r.clone()]);
        (net, vec![r], table)
    }

    #[test]
    fn params_from_omega() {
        let p = FptasParams::from_omega(0.331, 30).unwrap();
        assert!((p.epsilon - 1.0 / 11.0).abs() < 1e-9);
        // δ = (1/33)^11, cross-checked by an independent evaluation route.
        assert!((p.delta - 1.9785483213455068e-17).abs() / p.delta < 1e-9);
        let independent = (11.0 * (1.0f64 / 33.0).ln()).exp();
        assert!((p.delta - independent).abs() / p.delta < 1e-9);

        let p = FptasParams::from_omega(7.0, 10).unwrap();
        assert!((p.epsilon - 0.5).abs() < 1e-12);

        assert_eq!(
            FptasParams::from_omega(0.0, 10).unwrap_err(),
            ParamError::BadOmega(0.0)
        );
        assert_eq!(
            FptasParams::from_epsilon(1.0, 10).unwrap_err(),
            ParamError::BadEpsilon(1.0)
        );
    }

    #[test]
    fn dual_objective_arithmetic() {
        let net = Network::new(
            &["a", "b", "c"],
            &[("a", "b", 10.0, 1), ("b", "c", 100.0, 1)],
        )
        .unwrap();
        let l = DualLengths::from_vec(vec![0.5, 0.25]);
        assert_eq!(dual_objective(&l, &net), 30.0);
        assert_eq!(dual_objective(&DualLengths::zeros(2), &net), 0.0);
        // Initial lengths δ/c_e give D = m·δ.
        let p = FptasParams::from_epsilon(0.1, 2).unwrap();
        let init = DualLengths::from_vec(vec![p.delta / 10.0, p.delta / 100.0]);
        assert!((dual_objective(&init, &net) - 2.0 * p.delta).abs() < 1e-18);
    }

    #[test]
    fn scale_solution_arithmetic() {
        let (flows, lambda) = scale_solution(&[0.0], 0.1, 0.01, 1);
        assert_eq!(flows, vec![0.0]);
        assert_eq!(lambda, 0.0);
        let (flows, _) = scale_solution(&[46.05], 0.1, 0.01, 5);
        assert!((flows[0] - 0.9530665757681316).abs() < 1e-12);
    }

    #[test]
    fn single_link_run_exact_trace() {
        // ε = 0.1, m = 1: δ = 0.9^10, scale = 11.0544…, twelve phases run,
        // the twelfth trips the dual threshold, λ = 11/scale ≈ 0.99507.
        let (net, requests, table) = single_link_instance(100.0, 100.0);
        let params = FptasParams::from_epsilon(0.1, 1).unwrap();
        let res = run_fptas(&net, &requests, &table, &params).unwrap();
        assert_eq!(res.phases, 12);
        assert_eq!(res.steps, 12);
        assert!((res.lambda - 0.9950710389957134).abs() < 1e-9);
        // Optimum is 1; the run must land within the guarantee band.
        assert!(res.lambda >= (1.0 - 0.1f64).powi(3) - 1e-9);
        assert!(res.lambda <= 1.0 + 1e-9);
        // Feasibility and the per-link exponent bound.
        assert!(res.flows[0] <= 100.0 + 1e-9);
        assert!((res.flows[0] - 99.50710389957134).abs() < 1e-6);
        assert!(res.kappa[0] < params.scale_factor());
        assert_eq!(res.kappa[0], 11.0);
        // λ equals the scaled per-request multiplier exactly.
        assert!((res.per_request_routed[0] - res.lambda * 100.0).abs() < 1e-9);
        // λ·scale = phases - 1 by construction.
        assert!((res.lambda * res.scale_factor() - 11.0).abs() < 1e-9);
    }

    #[test]
    fn phase_cap_trips() {
        let (net, requests, table) = single_link_instance(100.0, 100.0);
        let params = FptasParams::from_epsilon(0.1, 1).unwrap().with_max_phases(3);
        let err = run_fptas(&net, &requests, &table, &params).unwrap_err();
        assert!(matches!(err, FptasError::PhaseLimit { limit: 3, .. }));
    }

    #[test]
    fn unroutable_request_detected() {
        let net = Network::new(&["a", "b", "c"], &[("a", "b", 5.0, 1), ("c", "b", 5.0, 1)])
            .unwrap();
        let a = net.node("a").unwrap();
        let c = net.node("c").unwrap();
        let r = Request::new(&net, 0, a, c, 1.0, vec![], 1).unwrap();
        let table = build_intra_table(&net, &[r.clone()]);
        let params = FptasParams::from_epsilon(0.1, net.link_count()).unwrap();
        let err = run_fptas(&net, &[r], &table, &params).unwrap_err();
        assert!(matches!(err, FptasError::UnroutableRequest { request: 0, .. }));
    }

    #[test]
    fn bottleneck_steps_split_demand() {
        // Demand 150 over capacity 100 forces two steps in phase one.
        let (net, requests, table) = single_link_instance(100.0, 150.0);
        let params = FptasParams::from_epsilon(0.1, 1).unwrap();
        let res = run_fptas(&net, &requests, &table, &params).unwrap();
        assert!(res.steps >= 2 * res.phases);
        assert!(res.flows[0] <= 100.0 + 1e-9);
        // per-request multiplier consistency holds here too
        assert!((res.per_request_routed[0] - res.lambda * 150.0).abs() < 1e-9);
    }

    #[test]
    fn default_phase_cap_magnitude() {
        // 10 · ceil(20 · log_1.1(30/0.9)) = 10 · ceil(20 · 36.79…) = 7360.
        assert_eq!(default_max_phases(0.1, 30), 7360);
    }

    #[test]
    fn summary_reports_names_and_utilization() {
        let (net, requests, table) = single_link_instance(100.0, 100.0);
        let params = FptasParams::from_epsilon(0.1, 1).unwrap();
        let res = run_fptas(&net, &requests, &table, &params).unwrap();
        let summary = OfflineSummary::new(&net, &res, 1.25);
        assert_eq!(summary.per_link_utilization.len(), 1);
        let row = &summary.per_link_utilization[0];
        assert_eq!((row.src.as_str(), row.dst.as_str()), ("a", "b"));
        assert!((row.utilization - res.flows[0] / 100.0).abs() < 1e-15);
        assert_eq!(summary.wall_time_ms, 1.25);
    }
}
