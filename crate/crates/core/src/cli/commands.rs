use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::args::*;
use super::Log;
use crate::engine::{effective_threshold, run_simulation, run_structure, GameConfig, MatchSize, SimResult, Structure, Threshold};
use crate::error::{Error, Result};
use crate::meanfield::{alpha_max, mf_prediction_curve};
use crate::netgen::{read_edge_list, structure_metrics, write_edge_list, NetworkKind, NetworkSpec};
use crate::output::{config_hash, csv, csv_with_header, header_line, jsonl, write_atomic};
use crate::sweep::{
    alpha_sweep, correlate_leff_lstar, detect_alpha_crit, find_alpha_crit, leff_for_network, n_dependence,
    nominal_game, noise_study, CritPlan, CritResult, FullyMixedReference, LeffResult, NdepProtocol, Network,
};

const DESK_ROUNDS: usize = 10_000;
const FULL_ROUNDS: usize = 100_000;
const DESK_SIZE: usize = 200;
const FULL_SIZE: usize = 300;

fn scale_defaults(full_scale: bool) -> (usize, usize) {
    if full_scale {
        (FULL_ROUNDS, FULL_SIZE)
    } else {
        (DESK_ROUNDS, DESK_SIZE)
    }
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn required<T>(value: Option<T>, field: &'static str) -> Result<T> {
    value.ok_or_else(|| Error::invalid(field, "required"))
}

fn network_spec(flags: &NetworkFlags, default_size: usize, default_seed: u64) -> Result<NetworkSpec> {
    let kind: NetworkKind = required(flags.kind, "kind")?.into();
    let size = flags.size.unwrap_or(default_size);
    let seed = flags.net_seed.unwrap_or(default_seed);
    let spec = match kind {
        NetworkKind::FullyMixed => NetworkSpec::fully_mixed(size),
        NetworkKind::Social => NetworkSpec::social(size, flags.f1.unwrap_or(0.0), flags.f2.unwrap_or(0.0), seed),
        k => NetworkSpec::regular(k, size, required(flags.degree, "degree")?, seed),
    };
    spec.validate()?;
    Ok(spec)
}

fn threshold(m: Option<usize>, m_rel: Option<f64>) -> Result<Threshold> {
    match (m, m_rel) {
        (Some(m), None) => Ok(Threshold::Absolute(m)),
        (None, Some(r)) => Ok(Threshold::Relative(r)),
        (None, None) => Err(Error::invalid("M", "required (or M-rel)")),
        (Some(_), Some(_)) => Err(Error::invalid("M", "give either M or M-rel, not both")),
    }
}

fn game_config(flags: &GameFlags, kind: Option<NetworkKind>, alpha: f64, seed: u64) -> Result<GameConfig> {
    let match_size = match (flags.n, kind) {
        (Some(n), _) => MatchSize::Fixed(n),
        (None, Some(NetworkKind::FullyMixed)) => return Err(Error::invalid("N", "required for fully mixed populations")),
        (None, _) => MatchSize::FromGraph,
    };
    let (default_rounds, _) = scale_defaults(flags.full_scale);
    let reward = flags.reward.unwrap_or(1.0);
    let base = GameConfig::new(match_size, threshold(flags.m, flags.m_rel)?, alpha);
    let config = GameConfig {
        reward,
        cost: alpha * reward,
        dt: flags.dt.unwrap_or(base.dt),
        rounds: flags.rounds.unwrap_or(default_rounds),
        noise: flags.noise.unwrap_or(0.0),
        seed,
        ..base
    };
    config.validate()?;
    Ok(config)
}

fn crit_plan(flags: &CritFlags) -> Result<CritPlan> {
    let d = CritPlan::default();
    let plan = CritPlan {
        n_seeds: flags.n_seeds.unwrap_or(d.n_seeds),
        alpha_step: flags.alpha_step.unwrap_or(d.alpha_step),
        refine_step: flags.refine_step.unwrap_or(d.refine_step),
        seed: flags.seed.unwrap_or(d.seed),
        ..d
    };
    if plan.n_seeds < 5 {
        return Err(Error::invalid("n_seeds", "at least 5 seeds per alpha"));
    }
    if !(plan.alpha_step > 0.0) {
        return Err(Error::invalid("alpha_step", "must be positive"));
    }
    if !(plan.refine_step > 0.0) {
        return Err(Error::invalid("refine_step", "must be positive"));
    }
    Ok(plan)
}

/// The structure's game must be playable before any run starts.
fn check_game(config: &GameConfig, network: &Network) -> Result<()> {
    let structure = network.structure();
    if let (Structure::Graph(g), MatchSize::Fixed(n)) = (structure, config.match_size) {
        if g.regular_degree() != Some(n - 1) {
            return Err(Error::ConfigMismatch(format!("N={n} but the graph is not ({})-regular", n - 1)));
        }
    }
    nominal_game(config, structure)?;
    Ok(())
}

pub fn net(args: NetArgs, log: &Log) -> Result<()> {
    let seed = args.seed.unwrap_or(0);
    let spec = network_spec(&args.network, DESK_SIZE, seed)?;
    let graph = spec
        .build()?
        .ok_or_else(|| Error::invalid("kind", "fully mixed populations have no graph"))?;
    let m = structure_metrics(&graph);
    let metrics = format!("gamma={} mean_I={} l_star={}", m.mean_clustering, m.mean_two_hop, m.l_star);
    let text = write_edge_list(&graph);
    match &args.out {
        Some(path) => {
            write_atomic(path, &text)?;
            println!("{metrics}");
        }
        None => {
            print!("{text}");
            eprintln!("{metrics}");
        }
    }
    log.info(format_args!("{} vertices, {} edges", graph.vertex_count(), graph.edge_count()));
    Ok(())
}

pub fn meanfield(args: MeanfieldArgs) -> Result<()> {
    let n = required(args.n, "N")?;
    let m = match threshold(args.m.map(|m| m as usize), args.m_rel)? {
        Threshold::Absolute(m) => m as u32,
        rel => effective_threshold(n as usize, rel)? as u32,
    };
    let amax = alpha_max(n, m)?;
    if args.alpha_max_only {
        println!("{amax}");
        return Ok(());
    }
    let step = args.alpha_step.unwrap_or(0.01);
    if !(step > 0.0) {
        return Err(Error::invalid("alpha_step", "must be positive"));
    }
    let start = args.alpha_start.unwrap_or(step);
    let stop = args.alpha_stop.unwrap_or(1.1 * amax);
    if !(start > 0.0 && stop >= start) {
        return Err(Error::invalid("alpha_start", "need 0 < alpha_start <= alpha_stop"));
    }
    let alphas: Vec<f64> = (0..)
        .map(|k| ((start + k as f64 * step) * 1e10).round() / 1e10)
        .take_while(|&a| a <= stop + 1e-9)
        .collect();
    let curve = mf_prediction_curve(n, m, &alphas)?;
    let hash = config_hash(&serde_json::json!({"N": n, "M": m, "alphas": alphas}));
    emit(args.out.as_deref(), &(header_line(&hash, &[]) + &csv(&curve)?))
}

#[derive(Serialize)]
struct Checkpoint {
    round: usize,
    mean_x: f64,
}

#[derive(Serialize)]
struct RunSummary<'a> {
    summary: SummaryBody<'a>,
}

#[derive(Serialize)]
struct SummaryBody<'a> {
    rounds: usize,
    final_mean_x: f64,
    time_averaged_mean_x: f64,
    config: &'a GameConfig,
    network: &'a Option<NetworkSpec>,
}

pub fn run(args: RunArgs, log: &Log) -> Result<()> {
    let seed = args.seed.unwrap_or(0);
    let alpha = required(args.alpha, "alpha")?;
    let every = args.checkpoint_every.unwrap_or(100);
    if every == 0 {
        return Err(Error::invalid("checkpoint_every", "must be positive"));
    }
    let (_, default_size) = scale_defaults(args.game.full_scale);
    let rounds_default = GameConfig::new(MatchSize::FromGraph, Threshold::Absolute(1), 0.1).rounds;
    let game = GameFlags {
        rounds: Some(args.game.rounds.unwrap_or(if args.game.full_scale { FULL_ROUNDS } else { rounds_default })),
        ..args.game.clone()
    };
    let result: SimResult = match &args.edge_list {
        Some(path) => {
            let graph = read_edge_list(path)?;
            let config = game_config(&game, None, alpha, seed)?;
            log.info(format_args!("loaded {} vertices from {}", graph.vertex_count(), path.display()));
            run_structure(&config, Structure::Graph(&graph))?
        }
        None => {
            let spec = network_spec(&args.network, default_size, seed)?;
            let config = game_config(&game, Some(spec.kind), alpha, seed)?;
            let network = Network::build(spec)?;
            check_game(&config, &network)?;
            run_simulation(&config, &network.spec, network.graph.as_ref())?
        }
    };

    let traj = &result.mean_x_trajectory;
    let hash = config_hash(&(&result.config_echo, &result.network_echo));
    let header = header_line(&hash, &[seed]);
    let checkpoints = (1..=traj.len())
        .filter(|r| r % every == 0 || *r == traj.len())
        .map(|r| Checkpoint { round: r, mean_x: traj[r - 1] });
    let mut body = header.clone() + &jsonl(checkpoints);
    body += &jsonl([RunSummary {
        summary: SummaryBody {
            rounds: traj.len(),
            final_mean_x: result.final_mean_x,
            time_averaged_mean_x: result.time_averaged_mean_x,
            config: &result.config_echo,
            network: &result.network_echo,
        },
    }]);
    if let Some(path) = &args.trajectory {
        let rows = traj.iter().enumerate().map(|(k, &x)| Checkpoint { round: k + 1, mean_x: x });
        write_atomic(path, &(header + &csv(rows)?))?;
    }
    log.info(format_args!("time-averaged mean x = {}", result.time_averaged_mean_x));
    emit(args.out.as_deref(), &body)
}

#[derive(Serialize)]
struct CritSummary<'a> {
    crit: &'a CritResult,
}

pub fn sweep(args: SweepArgs, log: &Log) -> Result<()> {
    let plan = crit_plan(&args.crit)?;
    let (_, default_size) = scale_defaults(args.game.full_scale);
    let spec = network_spec(&args.network, default_size, plan.seed)?;
    let base = game_config(&args.game, Some(spec.kind), 0.1, 0)?;
    let network = Network::build(spec)?;
    check_game(&base, &network)?;
    log.info(format_args!("sweeping {} (L={})", network.spec.kind, network.spec.size));

    let (crit, records) = match &args.alphas {
        Some(alphas) => {
            let out = alpha_sweep(&network, &base, alphas, plan.n_seeds, plan.seed)?;
            let grid: Vec<(f64, f64)> = out.curve.iter().map(|p| (p.alpha, p.scaled_coop)).collect();
            let crit = detect_alpha_crit(&grid).map(|alpha_crit| CritResult {
                spec: network.spec.clone(),
                alpha_crit,
                grid,
                seeds_used: plan.n_seeds,
                records: Vec::new(),
            });
            (crit, out.records)
        }
        None => {
            let mut crit = find_alpha_crit(&network, &base, &plan)?;
            let records = std::mem::take(&mut crit.records);
            (Ok(crit), records)
        }
    };
    let mut seeds: Vec<u64> = records.iter().map(|r| r.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    let hash = config_hash(&(&network.spec, &base, &plan, &args.alphas));
    let mut body = header_line(&hash, &seeds) + &jsonl(&records);
    if let Ok(c) = &crit {
        body += &jsonl([CritSummary { crit: c }]);
        log.info(format_args!("alpha_crit = {}", c.alpha_crit));
    }
    emit(args.out.as_deref(), &body)?;
    crit.map(|_| ())
}

fn entry_flags(e: &NetworkEntry) -> NetworkFlags {
    NetworkFlags {
        kind: e.kind,
        size: e.size,
        degree: e.degree,
        f1: e.f1,
        f2: e.f2,
        net_seed: e.net_seed,
    }
}

#[derive(Serialize)]
struct LeffRow {
    gamma: f64,
    #[serde(rename = "mean_I")]
    mean_i: f64,
    l_star: f64,
    alpha_crit: f64,
    #[serde(rename = "L_eff")]
    l_eff: usize,
}

pub fn leff(args: LeffArgs, log: &Log) -> Result<()> {
    let plan = crit_plan(&args.crit)?;
    let (_, default_size) = scale_defaults(args.game.full_scale);
    let flags: Vec<NetworkFlags> = match &args.networks {
        Some(list) if !list.is_empty() => list.iter().map(entry_flags).collect(),
        Some(_) => return Err(Error::invalid("networks", "empty list")),
        None => vec![args.network.clone()],
    };
    let tolerance = args.tolerance.unwrap_or(0.01);
    let l_max = args.l_max.unwrap_or(FULL_SIZE);

    // Validate everything before the first simulation.
    let mut jobs = Vec::new();
    for f in &flags {
        let spec = network_spec(f, default_size, plan.seed)?;
        if spec.kind == NetworkKind::FullyMixed {
            return Err(Error::invalid("kind", "effective size needs a graph"));
        }
        let base = game_config(&args.game, Some(spec.kind), 0.1, 0)?;
        let network = Network::build(spec)?;
        check_game(&base, &network)?;
        let (n, m) = nominal_game(&base, network.structure())?;
        jobs.push((network, base, n as usize, m as usize));
    }

    let mut references: BTreeMap<(usize, usize), FullyMixedReference> = BTreeMap::new();
    let mut results: Vec<LeffResult> = Vec::new();
    for (network, base, n, m) in &jobs {
        let reference = match references.entry((*n, *m)) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(FullyMixedReference::new(*n, *m, base, plan.clone())?),
        };
        let l_min = args.l_min.unwrap_or(*n);
        let r = leff_for_network(network, base, &plan, reference, (l_min, l_max), tolerance)?;
        log.info(format_args!(
            "{} L*={:.3} alpha_crit={:.4} L_eff={}",
            r.spec.kind, r.l_star, r.alpha_crit_network, r.l_eff
        ));
        results.push(r);
    }
    if results.len() >= 3 {
        match correlate_leff_lstar(&results) {
            Ok(c) => log.info(format_args!("correlation(L_eff, L*) = {c}")),
            Err(e) => log.info(format_args!("correlation unavailable: {e}")),
        }
    }
    let rows = results.iter().map(|r| LeffRow {
        gamma: r.gamma,
        mean_i: r.mean_two_hop,
        l_star: r.l_star,
        alpha_crit: r.alpha_crit_network,
        l_eff: r.l_eff,
    });
    let specs: Vec<&NetworkSpec> = jobs.iter().map(|j| &j.0.spec).collect();
    let hash = config_hash(&(&specs, &jobs.first().map(|j| &j.1), &plan, args.l_min, l_max, tolerance));
    emit(args.out.as_deref(), &(header_line(&hash, &[plan.seed]) + &csv(rows)?))
}

#[derive(Serialize)]
struct NdepCsvRow {
    protocol: &'static str,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    alpha_crit: f64,
    alpha_max: f64,
}

pub fn ndep(args: NdepArgs, log: &Log) -> Result<()> {
    let plan = crit_plan(&args.crit)?;
    let (rounds, default_size) = scale_defaults(args.full_scale);
    let ns = args.ns.clone().unwrap_or_else(|| (4..=9).collect());
    let size = args.size.unwrap_or(default_size);
    let net_seed = args.net_seed.unwrap_or(plan.seed);
    let protocols = [
        NdepProtocol::StaticM(args.m.unwrap_or(2)),
        NdepProtocol::FixedRatio(args.m_rel.unwrap_or(2.0 / 7.0)),
    ];
    let base = GameConfig {
        rounds: args.rounds.unwrap_or(rounds),
        dt: args.dt.unwrap_or(0.01),
        ..GameConfig::new(MatchSize::FromGraph, Threshold::Absolute(1), 0.1)
    };
    base.validate()?;
    for p in &protocols {
        for &n in &ns {
            p.threshold_for(n)?;
            NetworkSpec::regular(NetworkKind::RandomRegular, size, n.saturating_sub(1), net_seed).validate()?;
        }
    }
    let mut rows = Vec::new();
    for p in protocols {
        log.info(format_args!("protocol {}", p.label()));
        for r in n_dependence(&ns, p, size, net_seed, &base, &plan)? {
            rows.push(NdepCsvRow {
                protocol: p.label(),
                n: r.n,
                m: r.m,
                alpha_crit: r.alpha_crit,
                alpha_max: r.alpha_max,
            });
        }
    }
    let hash = config_hash(&(&ns, &protocols, size, net_seed, &base, &plan));
    emit(args.out.as_deref(), &(header_line(&hash, &[plan.seed, net_seed]) + &csv(rows)?))
}

pub fn noise(args: NoiseArgs, log: &Log) -> Result<()> {
    let (rounds, default_size) = scale_defaults(args.full_scale);
    let kinds = args.kinds.clone().unwrap_or(vec![KindArg::RingLocal, KindArg::RandomRegular]);
    let size = args.size.unwrap_or(default_size);
    let degree = args.degree.unwrap_or(6);
    let seed = args.seed.unwrap_or(0);
    let net_seed = args.net_seed.unwrap_or(seed);
    let alphas = args.alphas.clone().unwrap_or(vec![0.1, 0.3]);
    let amplitudes = args.amplitudes.clone().unwrap_or(vec![0.0, 1e-4, 1e-3, 1e-2, 1e-1]);
    let n_seeds = args.n_seeds.unwrap_or(5);
    let m = args.m.unwrap_or(2);

    let mut networks = Vec::new();
    for k in &kinds {
        let kind: NetworkKind = (*k).into();
        let spec = match kind {
            NetworkKind::FullyMixed => NetworkSpec::fully_mixed(size),
            NetworkKind::Social => return Err(Error::invalid("kinds", "noise study compares regular structures")),
            k => NetworkSpec::regular(k, size, degree, net_seed),
        };
        spec.validate()?;
        networks.push(Network::build(spec)?);
    }
    // A fully mixed entry plays matches the size of the graph neighbourhoods.
    let base = GameConfig {
        rounds: args.rounds.unwrap_or(rounds),
        seed,
        ..GameConfig::new(MatchSize::Fixed(degree + 1), Threshold::Absolute(m), 0.1)
    };
    base.validate()?;
    effective_threshold(degree + 1, base.threshold)?;
    let mut rows = Vec::new();
    for net in &networks {
        let config = GameConfig {
            match_size: net.match_size(degree + 1),
            ..base.clone()
        };
        log.info(format_args!("noise study on {}", net.spec.kind));
        rows.extend(noise_study(std::slice::from_ref(net), &alphas, &amplitudes, &config, n_seeds, seed)?);
    }
    rows.sort_by(|a, b| a.noise.total_cmp(&b.noise).then(a.alpha.total_cmp(&b.alpha)));
    let specs: Vec<&NetworkSpec> = networks.iter().map(|n| &n.spec).collect();
    let hash = config_hash(&(&specs, &base, &alphas, &amplitudes, n_seeds));
    let table = csv_with_header(
        &["noise", "alpha", "kind", "mean_x"],
        rows.iter().map(|r| (r.noise, r.alpha, r.kind.to_string(), r.mean_x)),
    )?;
    emit(args.out.as_deref(), &(header_line(&hash, &[seed, net_seed]) + &table))
}
