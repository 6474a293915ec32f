//! Subcommand implementations.

use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use qsr_core::gen::{gen_requests as gen_core, random_ring_net, GenSpec, PairMode, SrChoice};
use qsr_core::intra::build_intra_table;
use qsr_core::offline::{FptasParams, OfflineSummary};
use qsr_core::online::{OnlineParams, OnlineSummary};
use qsr_core::oracle::{enumerate_sr_lists, solve_offline_exact, DEFAULT_ENUM_CAP};
use qsr_core::topology::{
    load_network, load_requests, RequestDoc, RequestFileDoc, SrNodeSpec, FORMAT_VERSION,
};
use qsr_core::{run_fptas, run_trace, Network, NodeId, Request};

use crate::artifacts::{
    decisions_csv, ensure_dir, json_string, links_csv, provenance, sweep_csv, write_json,
    write_text, Artifact, SweepRow,
};
use crate::{
    Axis, CliError, GenMode, GenRequestsArgs, GenTopologyArgs, OfflineArgs, OnlineArgs, OracleArgs,
    OutArgs, RequestArgs, SweepArgs, SweepMode, TopoArgs,
};

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

/// Built-in topology names; anything else is treated as a file path.
fn resolve_topology(t: &TopoArgs, seed: u64) -> Result<Network, CliError> {
    let usage = |m: String| Err(CliError::Usage(m));
    match t.topology.as_str() {
        "abilene" => Ok(Network::abilene()),
        "example1" => Ok(Network::two_sr_counterexample()),
        "example2" => {
            if t.w_direct < 1 {
                return usage("--w-direct must be ≥ 1".into());
            }
            if !(t.capacity > 0.0) {
                return usage("--capacity must be positive".into());
            }
            Ok(Network::detour_probe_with_capacity(t.w_direct, t.capacity))
        }
        "chains" => {
            if t.chains < 1 || t.interior_hops < 1 {
                return usage("--chains and --interior-hops must be ≥ 1".into());
            }
            if !(t.capacity > 0.0) {
                return usage("--capacity must be positive".into());
            }
            Ok(Network::parallel_chains(t.chains, t.interior_hops, t.capacity))
        }
        "ring" => {
            if t.nodes < 2 {
                return usage("--nodes must be ≥ 2".into());
            }
            if !(t.cap_lo > 0.0 && t.cap_lo <= t.cap_hi) {
                return usage("need 0 < --cap-lo ≤ --cap-hi".into());
            }
            Ok(random_ring_net(t.nodes, t.chords, t.cap_lo, t.cap_hi, seed))
        }
        path => load_network(path)
            .map_err(|e| CliError::File(format!("topology {path}: {e}"))),
    }
}

enum SrSel {
    All,
    None,
    List(Vec<String>),
}

fn parse_sr_nodes(s: &str) -> SrSel {
    match s.trim() {
        "all" => SrSel::All,
        "none" => SrSel::None,
        list => SrSel::List(
            list.split(',')
                .map(|n| n.trim().to_string())
                .filter(|n| !n.is_empty())
                .collect(),
        ),
    }
}

/// Replaces each request's candidate set with the named nodes (minus its own
/// endpoints), re-clamping the segment budget.
fn override_sr_list(
    net: &Network,
    reqs: Vec<Request>,
    names: &[String],
    q: u32,
) -> Result<Vec<Request>, CliError> {
    let ids: Vec<NodeId> = names
        .iter()
        .map(|n| {
            net.node(n)
                .ok_or_else(|| CliError::Usage(format!("--sr-nodes: unknown node {n:?}")))
        })
        .collect::<Result<_, _>>()?;
    reqs.into_iter()
        .map(|r| {
            let sr: Vec<NodeId> = ids
                .iter()
                .copied()
                .filter(|&n| n != r.src && n != r.dst)
                .collect();
            let qc = q.min(sr.len() as u32 + 1).max(1);
            Request::new(net, r.id, r.src, r.dst, r.demand, sr, qc)
                .map_err(|e| CliError::Usage(format!("request #{}: {e}", r.id)))
        })
        .collect()
}

/// Loads `--requests`, or synthesizes the canonical deterministic set:
/// source/sink topologies get repeated `s → t` requests (1 × d=100 offline,
/// 100 × d=5 online); others get one request per node offline (d=20) or 100
/// random pairs online (d=5).
fn gather_requests(
    net: &Network,
    args: &RequestArgs,
    online: bool,
    qr: Option<u32>,
) -> Result<Vec<Request>, CliError> {
    let q_override = qr.or(args.qr);
    if let Some(path) = &args.requests {
        return load_requests(path, net, q_override)
            .map_err(|e| CliError::File(format!("requests {}: {e}", path.display())));
    }
    let q = q_override.unwrap_or(2);
    let st = net.node("s").zip(net.node("t"));
    let (mode, count, demand) = match (st, online) {
        (Some((s, t)), false) => (
            PairMode::SinglePair { src: s, dst: t },
            args.count.unwrap_or(1),
            args.demand.unwrap_or(100.0),
        ),
        (Some((s, t)), true) => (
            PairMode::SinglePair { src: s, dst: t },
            args.count.unwrap_or(100),
            args.demand.unwrap_or(5.0),
        ),
        (None, false) => (
            PairMode::EachNode,
            args.count.unwrap_or(net.node_count()),
            args.demand.unwrap_or(20.0),
        ),
        (None, true) => (
            PairMode::RandomPairs,
            args.count.unwrap_or(100),
            args.demand.unwrap_or(5.0),
        ),
    };
    if !(demand > 0.0) {
        return Err(CliError::Usage("--demand must be positive".into()));
    }
    if count < 1 {
        return Err(CliError::Usage("--count must be ≥ 1".into()));
    }
    let sel = parse_sr_nodes(&args.sr_nodes);
    let spec = GenSpec {
        count,
        demand_lo: demand,
        demand_hi: demand,
        mode,
        sr: match sel {
            SrSel::None => SrChoice::None,
            _ => SrChoice::All,
        },
        q_max: q,
        seed: args.seed,
    };
    let reqs = gen_core(net, &spec).map_err(|e| CliError::Usage(e.to_string()))?;
    match sel {
        SrSel::List(names) => override_sr_list(net, reqs, &names, q),
        _ => Ok(reqs),
    }
}

fn max_phases_env() -> Result<Option<usize>, CliError> {
    match std::env::var("QSR_MAX_PHASES") {
        Ok(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("QSR_MAX_PHASES must be an integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn offline_params(epsilon: Option<f64>, omega: Option<f64>, m: usize) -> Result<FptasParams, CliError> {
    let params = match omega {
        Some(w) => FptasParams::from_omega(w, m),
        None => FptasParams::from_epsilon(epsilon.unwrap_or(0.1), m),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(match max_phases_env()? {
        Some(mp) => params.with_max_phases(mp),
        None => params,
    })
}

fn emit<T: Serialize>(
    out: &OutArgs,
    stem: &str,
    artifact: &Artifact<T>,
    csv: Option<(&str, String)>,
    stdout_json_fallback: bool,
) -> Result<(), CliError> {
    match &out.out_dir {
        Some(dir) => {
            ensure_dir(dir)?;
            if out.format.json() {
                write_json(&dir.join(format!("{stem}.json")), artifact)?;
            }
            if out.format.csv() {
                if let Some((name, text)) = csv {
                    write_text(&dir.join(name), &text)?;
                }
            }
            Ok(())
        }
        None => {
            if out.dump_intra {
                return Err(CliError::Usage("--dump-intra requires --out-dir".into()));
            }
            if stdout_json_fallback {
                println!("{}", json_string(artifact));
            }
            Ok(())
        }
    }
}

fn dump_intra_table(
    out: &OutArgs,
    net: &Network,
    table: &qsr_core::IntraTable,
) -> Result<(), CliError> {
    if !out.dump_intra {
        return Ok(());
    }
    let dir = out
        .out_dir
        .as_ref()
        .ok_or_else(|| CliError::Usage("--dump-intra requires --out-dir".into()))?;
    let path = dir.join("intra_table.csv");
    let mut buf = Vec::new();
    table
        .write_csv(net, &mut buf)
        .map_err(|e| CliError::File(format!("writing {}: {e}", path.display())))?;
    write_text(&path, &String::from_utf8(buf).expect("csv is utf-8"))
}

// ---------------------------------------------------------------------------
// offline
// ---------------------------------------------------------------------------

pub fn offline(a: OfflineArgs) -> Result<(), CliError> {
    let net = resolve_topology(&a.topo, a.reqs.seed)?;
    let requests = gather_requests(&net, &a.reqs, false, None)?;
    let table = build_intra_table(&net, &requests);
    let params = offline_params(a.epsilon, a.omega, net.link_count())?;
    let t0 = Instant::now();
    let result = run_fptas(&net, &requests, &table, &params)
        .map_err(|e| CliError::Solver(e.to_string()))?;
    let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    let summary = OfflineSummary::new(&net, &result, wall_ms);
    let prov = provenance(
        "offline",
        a.reqs.seed,
        &a.topo.topology,
        &net,
        json!({
            "epsilon": result.epsilon,
            "delta": result.delta,
            "omega": a.omega,
            "qr": a.reqs.qr,
            "sr_nodes": a.reqs.sr_nodes,
            "requests": a.reqs.requests.as_ref().map(|p| p.display().to_string()),
            "request_count": requests.len(),
            "max_phases": params.max_phases,
        }),
    );
    let csv = links_csv(&summary.per_link_utilization);
    let lambda = summary.lambda;
    let (phases, steps) = (summary.phases, summary.steps);
    let artifact = Artifact {
        provenance: prov,
        result: summary,
    };
    emit(&a.out, "offline", &artifact, Some(("offline_links.csv", csv)), true)?;
    dump_intra_table(&a.out, &net, &table)?;
    if let Some(dir) = &a.out.out_dir {
        println!(
            "lambda {lambda:.6} after {phases} phases / {steps} steps → {}",
            dir.display()
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// online
// ---------------------------------------------------------------------------

pub fn online(a: OnlineArgs) -> Result<(), CliError> {
    let net = resolve_topology(&a.topo, a.reqs.seed)?;
    let trace = gather_requests(&net, &a.reqs, true, None)?;
    let table = build_intra_table(&net, &trace);
    let params =
        OnlineParams::for_trace(a.phi, &trace).map_err(|e| CliError::Usage(e.to_string()))?;
    let t0 = Instant::now();
    let result =
        run_trace(&net, &trace, &table, params).map_err(|e| CliError::Solver(e.to_string()))?;
    let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    let summary = OnlineSummary::new(&net, &trace, &result, wall_ms);
    let prov = provenance(
        "online",
        a.reqs.seed,
        &a.topo.topology,
        &net,
        json!({
            "phi": a.phi,
            "q": result.q,
            "qr": a.reqs.qr,
            "sr_nodes": a.reqs.sr_nodes,
            "requests": a.reqs.requests.as_ref().map(|p| p.display().to_string()),
            "request_count": trace.len(),
        }),
    );
    let csv = decisions_csv(&summary.per_request_decisions);
    let line = format!(
        "accepted {}/{} (ratio {:.4}), violation ratio {:.4}",
        result.accepted_count, result.total_count, result.acceptance_ratio, result.violation_ratio
    );
    let artifact = Artifact {
        provenance: prov,
        result: summary,
    };
    emit(&a.out, "online", &artifact, Some(("online_decisions.csv", csv)), true)?;
    dump_intra_table(&a.out, &net, &table)?;
    if let Some(dir) = &a.out.out_dir {
        println!("{line} → {}", dir.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct OracleLinkFlow {
    src: String,
    dst: String,
    capacity: f64,
    flow: f64,
}

/// Exact-solver result; mirrors the offline schema where it can and is
/// tagged `"oracle": true`.
#[derive(Serialize)]
struct OracleSummary {
    oracle: bool,
    lambda_star: f64,
    total_demand: f64,
    throughput: f64,
    max_violation: f64,
    per_request_routed: Vec<f64>,
    per_link_flow: Vec<OracleLinkFlow>,
}

pub fn oracle(a: OracleArgs) -> Result<(), CliError> {
    let net = resolve_topology(&a.topo, a.reqs.seed)?;
    let requests = gather_requests(&net, &a.reqs, false, None)?;
    let table = build_intra_table(&net, &requests);
    let columns = requests
        .iter()
        .map(|r| enumerate_sr_lists(&table, r, DEFAULT_ENUM_CAP))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Solver(e.to_string()))?;
    let cert = solve_offline_exact(&net, &requests, &columns)
        .map_err(|e| CliError::Solver(e.to_string()))?;
    let total_demand: f64 = requests.iter().map(|r| r.demand).sum();
    let throughput = cert.lambda_star * total_demand;
    let summary = OracleSummary {
        oracle: true,
        lambda_star: cert.lambda_star,
        total_demand,
        throughput,
        max_violation: cert.max_violation,
        per_request_routed: cert.per_request_routed.clone(),
        per_link_flow: net
            .links()
            .iter()
            .map(|l| OracleLinkFlow {
                src: net.name(l.src).to_string(),
                dst: net.name(l.dst).to_string(),
                capacity: l.capacity,
                flow: cert.link_flows[l.id.0],
            })
            .collect(),
    };
    let prov = provenance(
        "oracle",
        a.reqs.seed,
        &a.topo.topology,
        &net,
        json!({
            "qr": a.reqs.qr,
            "sr_nodes": a.reqs.sr_nodes,
            "requests": a.reqs.requests.as_ref().map(|p| p.display().to_string()),
            "request_count": requests.len(),
        }),
    );
    let csv = {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &summary.per_link_flow {
            w.serialize(row).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
    };
    let artifact = Artifact {
        provenance: prov,
        result: summary,
    };
    emit(&a.out, "oracle", &artifact, Some(("oracle_links.csv", csv)), false)?;
    // The headline number: exact optimum throughput λ*·Σd. Integral values
    // print bare (`300`), others with six decimals.
    if (throughput - throughput.round()).abs() < 1e-6 {
        println!("{}", throughput.round() as i64);
    } else {
        println!("{throughput:.6}");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct RowMetrics {
    lambda: Option<f64>,
    acceptance_ratio: Option<f64>,
    violation_ratio: Option<f64>,
}

fn sweep_row(
    net: &Network,
    a: &SweepArgs,
    mode: SweepMode,
    value: f64,
) -> Result<RowMetrics, CliError> {
    let qr = match a.axis {
        Axis::Qr => Some(value as u32),
        _ => None,
    };
    match mode {
        SweepMode::Offline => {
            let requests = gather_requests(net, &a.reqs, false, qr)?;
            let table = build_intra_table(net, &requests);
            let eps = match a.axis {
                Axis::Epsilon => Some(value),
                _ => a.epsilon,
            };
            let params = offline_params(eps, None, net.link_count())?;
            let result = run_fptas(net, &requests, &table, &params)
                .map_err(|e| CliError::Solver(e.to_string()))?;
            Ok(RowMetrics {
                lambda: Some(result.lambda),
                acceptance_ratio: None,
                violation_ratio: None,
            })
        }
        SweepMode::Online => {
            let trace = gather_requests(net, &a.reqs, true, qr)?;
            let table = build_intra_table(net, &trace);
            let phi = match a.axis {
                Axis::Phi => value,
                _ => a.phi,
            };
            let params =
                OnlineParams::for_trace(phi, &trace).map_err(|e| CliError::Usage(e.to_string()))?;
            let result = run_trace(net, &trace, &table, params)
                .map_err(|e| CliError::Solver(e.to_string()))?;
            Ok(RowMetrics {
                lambda: None,
                acceptance_ratio: Some(result.acceptance_ratio),
                violation_ratio: Some(result.violation_ratio),
            })
        }
    }
}

pub fn sweep(a: SweepArgs) -> Result<(), CliError> {
    let values = &a.values;
    if values.is_empty() {
        return Err(CliError::Usage("--values must be nonempty".into()));
    }
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(CliError::Usage("--values must be strictly monotone".into()));
    }
    let (axis_name, mode_default) = match a.axis {
        Axis::Qr => ("qr", SweepMode::Offline),
        Axis::Epsilon => ("epsilon", SweepMode::Offline),
        Axis::Phi => ("phi", SweepMode::Online),
    };
    for &v in values {
        let ok = match a.axis {
            Axis::Qr => v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64,
            Axis::Epsilon => v > 0.0 && v < 1.0,
            Axis::Phi => v > 0.0,
        };
        if !ok {
            return Err(CliError::Usage(format!(
                "--values: {v} is out of range for axis {axis_name}"
            )));
        }
    }
    let mode = a.mode.unwrap_or(mode_default);
    match (a.axis, mode) {
        (Axis::Epsilon, SweepMode::Online) => {
            return Err(CliError::Usage(
                "the epsilon axis applies only to --mode offline".into(),
            ))
        }
        (Axis::Phi, SweepMode::Offline) => {
            return Err(CliError::Usage(
                "the phi axis applies only to --mode online".into(),
            ))
        }
        _ => {}
    }
    // Fail fast on bad fixed parameters so row failures are solver-only.
    if let Some(e) = a.epsilon {
        if !(e > 0.0 && e < 1.0) {
            return Err(CliError::Usage(format!("--epsilon {e} out of (0, 1)")));
        }
    }
    if !(a.phi > 0.0) {
        return Err(CliError::Usage(format!("--phi {} must be positive", a.phi)));
    }

    let net = resolve_topology(&a.topo, a.reqs.seed)?;
    let mut rows: Vec<SweepRow> = Vec::with_capacity(values.len());
    for &v in values {
        let t0 = Instant::now();
        let outcome = sweep_row(&net, &a, mode, v);
        let wall_time_ms = t0.elapsed().as_secs_f64() * 1e3;
        let row = match outcome {
            Ok(m) => SweepRow {
                axis: axis_name.to_string(),
                value: v,
                lambda: m.lambda,
                acceptance_ratio: m.acceptance_ratio,
                violation_ratio: m.violation_ratio,
                wall_time_ms,
                normalized_time: None,
                status: "ok".to_string(),
            },
            Err(e) => {
                eprintln!("sweep: {axis_name} = {v}: {e}");
                SweepRow {
                    axis: axis_name.to_string(),
                    value: v,
                    lambda: None,
                    acceptance_ratio: None,
                    violation_ratio: None,
                    wall_time_ms,
                    normalized_time: None,
                    status: "failed".to_string(),
                }
            }
        };
        rows.push(row);
    }

    // Wall times normalize against the ε=0.1 row when sweeping ε (the
    // conventional reference setting), else against the first value;
    // --baseline overrides.
    let baseline_value = a.baseline.unwrap_or_else(|| {
        if a.axis == Axis::Epsilon && values.iter().any(|&v| v == 0.1) {
            0.1
        } else {
            values[0]
        }
    });
    let base_wall = rows
        .iter()
        .find(|r| r.value == baseline_value && r.status == "ok")
        .or_else(|| rows.iter().find(|r| r.status == "ok"))
        .map(|r| r.wall_time_ms);
    if let Some(bw) = base_wall {
        for r in rows.iter_mut().filter(|r| r.status == "ok") {
            r.normalized_time = Some(r.wall_time_ms / bw);
        }
    }

    let prov = provenance(
        "sweep",
        a.reqs.seed,
        &a.topo.topology,
        &net,
        json!({
            "axis": axis_name,
            "values": values,
            "mode": match mode { SweepMode::Offline => "offline", SweepMode::Online => "online" },
            "baseline": baseline_value,
            "epsilon": a.epsilon,
            "phi": a.phi,
            "qr": a.reqs.qr,
            "sr_nodes": a.reqs.sr_nodes,
            "requests": a.reqs.requests.as_ref().map(|p| p.display().to_string()),
        }),
    );
    let csv = sweep_csv(&rows);
    let any_ok = rows.iter().any(|r| r.status == "ok");
    let artifact = Artifact {
        provenance: prov,
        result: rows,
    };
    match &a.out.out_dir {
        Some(dir) => {
            ensure_dir(dir)?;
            if a.out.format.json() {
                write_json(&dir.join("sweep.json"), &artifact)?;
            }
            if a.out.format.csv() {
                write_text(&dir.join("sweep.csv"), &csv)?;
            }
            println!(
                "{} rows ({} ok) → {}",
                artifact.result.len(),
                artifact.result.iter().filter(|r| r.status == "ok").count(),
                dir.display()
            );
        }
        None => {
            if a.out.format.csv() {
                print!("{csv}");
            } else {
                println!("{}", json_string(&artifact));
            }
        }
    }
    if !any_ok {
        return Err(CliError::Solver("every sweep row failed".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// gen-topology / gen-requests
// ---------------------------------------------------------------------------

pub fn gen_topology(a: GenTopologyArgs) -> Result<(), CliError> {
    let net = resolve_topology(&a.topo, a.seed)?;
    if let Some(parent) = a.out.parent() {
        if !parent.as_os_str().is_empty() {
            ensure_dir(parent)?;
        }
    }
    write_text(&a.out, &(net.to_canonical_json() + "\n"))?;
    println!(
        "wrote {} ({} nodes, {} links)",
        a.out.display(),
        net.node_count(),
        net.link_count()
    );
    Ok(())
}

pub fn gen_requests(a: GenRequestsArgs) -> Result<(), CliError> {
    let net = resolve_topology(&a.topo, a.seed)?;
    let lo = a.demand;
    let hi = a.demand_hi.unwrap_or(a.demand);
    if !(lo > 0.0 && lo <= hi) {
        return Err(CliError::Usage(
            "need 0 < --demand ≤ --demand-hi (when given)".into(),
        ));
    }
    if a.count < 1 {
        return Err(CliError::Usage("--count must be ≥ 1".into()));
    }
    let mode = match a.mode {
        GenMode::RandomPairs => PairMode::RandomPairs,
        GenMode::EachNode => PairMode::EachNode,
        GenMode::SinglePair => {
            let pick = |flag: &Option<String>, def: &str, what: &str| -> Result<NodeId, CliError> {
                let name = match flag {
                    Some(n) => n.clone(),
                    None if net.node(def).is_some() => def.to_string(),
                    None => {
                        return Err(CliError::Usage(format!(
                            "--mode single-pair needs --{what}"
                        )))
                    }
                };
                net.node(&name)
                    .ok_or_else(|| CliError::Usage(format!("unknown node {name:?}")))
            };
            PairMode::SinglePair {
                src: pick(&a.src, "s", "src")?,
                dst: pick(&a.dst, "t", "dst")?,
            }
        }
    };
    let sel = parse_sr_nodes(&a.sr_nodes);
    let spec = GenSpec {
        count: a.count,
        demand_lo: lo,
        demand_hi: hi,
        mode,
        sr: match sel {
            SrSel::None => SrChoice::None,
            _ => SrChoice::All,
        },
        q_max: a.qr,
        seed: a.seed,
    };
    let reqs = gen_core(&net, &spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let reqs = match &sel {
        SrSel::List(names) => override_sr_list(&net, reqs, names, a.qr)?,
        _ => reqs,
    };
    let doc = RequestFileDoc {
        format_version: FORMAT_VERSION,
        requests: reqs
            .iter()
            .map(|r| RequestDoc {
                src: net.name(r.src).to_string(),
                dst: net.name(r.dst).to_string(),
                demand: r.demand,
                sr_nodes: match &sel {
                    SrSel::All => SrNodeSpec::all(),
                    _ => SrNodeSpec::List(
                        r.sr_nodes.iter().map(|&n| net.name(n).to_string()).collect(),
                    ),
                },
                q_max: r.q_max,
            })
            .collect(),
    };
    if let Some(parent) = a.out.parent() {
        if !parent.as_os_str().is_empty() {
            ensure_dir(parent)?;
        }
    }
    write_json(&a.out, &doc)?;
    println!("wrote {} requests to {}", doc.requests.len(), a.out.display());
    Ok(())
}
