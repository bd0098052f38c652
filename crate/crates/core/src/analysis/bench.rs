//! TW2S versus random cut selection on benchmark graph families.

use std::io::Write;
use std::sync::Arc;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{mean, t_test_one_sample};
use crate::circuit::{circuit_from_graph, Circuit};
use crate::error::{Error, Result};
use crate::graph::{generate, inter_community_fraction, Edge, GraphFamily, GraphFamilySpec};
use crate::rng;
use crate::router::{ecr_count, CouplingMap};
use crate::select::{random_cut, select_cut, select_stage1_only, SelectParams};

/// Routing seeds used throughout the benchmarks.
pub const DEFAULT_ROUTING_SEEDS: [u64; 3] = [42, 123, 7];
pub const DEFAULT_RANDOM_TRIALS: usize = 5;

#[derive(Debug, Clone)]
pub struct BenchSettings {
    pub coupling: Arc<CouplingMap>,
    pub routing_seeds: Vec<u64>,
    pub random_trials: usize,
    pub select: SelectParams,
}

impl BenchSettings {
    pub fn new(coupling: Arc<CouplingMap>) -> Self {
        BenchSettings {
            coupling,
            routing_seeds: DEFAULT_ROUTING_SEEDS.to_vec(),
            random_trials: DEFAULT_RANDOM_TRIALS,
            select: SelectParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchInstance {
    pub condition: String,
    pub spec: GraphFamilySpec,
}

impl BenchInstance {
    /// Instance labelled by its family parameters.
    pub fn new(spec: GraphFamilySpec) -> Self {
        BenchInstance {
            condition: condition_label(&spec.family),
            spec,
        }
    }
}

pub fn family_name(f: &GraphFamily) -> &'static str {
    match f {
        GraphFamily::Grid { .. } => "grid",
        GraphFamily::WattsStrogatz { .. } => "watts_strogatz",
        GraphFamily::Barbell { .. } => "barbell",
        GraphFamily::Sbm { .. } => "sbm",
        GraphFamily::ErdosRenyi { .. } => "erdos_renyi",
        GraphFamily::J1J2Ring { .. } => "j1j2_ring",
    }
}

pub fn condition_label(f: &GraphFamily) -> String {
    match *f {
        GraphFamily::Grid { rows, cols } => format!("grid {rows}x{cols}"),
        GraphFamily::WattsStrogatz { n, k, p } => format!("ws n={n} k={k} p={p}"),
        GraphFamily::Barbell { k, m } => format!("barbell k={k} m={m}"),
        GraphFamily::Sbm { p_in, p_out, .. } => format!("sbm mu={:.2}", p_out / p_in),
        GraphFamily::ErdosRenyi { n, p } => format!("er n={n} p={p}"),
        GraphFamily::J1J2Ring { n } => format!("j1j2 n={n}"),
    }
}

/// `seeds` SBM instances per mixing ratio, `p_out = mu * p_in`.
pub fn sbm_sweep(mus: &[f64], seeds: usize, n_per: usize, communities: usize, p_in: f64) -> Vec<BenchInstance> {
    let mut out = Vec::with_capacity(mus.len() * seeds);
    for &mu in mus {
        for seed in 0..seeds as u64 {
            out.push(BenchInstance::new(GraphFamilySpec::new(
                GraphFamily::Sbm {
                    n_per,
                    communities,
                    p_in,
                    p_out: mu * p_in,
                },
                seed,
            )));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub family: String,
    pub condition: String,
    pub seed: u64,
    pub n_qubits: usize,
    pub n_edges: usize,
    pub ecr_uncut: f64,
    pub ecr_tw2s_cut: f64,
    pub ecr_stage1_cut: f64,
    /// Mean over the random trials.
    pub ecr_random_cut: f64,
    pub delta_tw2s: f64,
    pub delta_stage1: f64,
    pub delta_random: f64,
    /// `delta_tw2s - delta_random`; positive means TW2S saves more gates.
    pub delta_adv: f64,
    pub win: bool,
    pub tw2s_edge: Edge,
    /// Community-crossing flags against the planted partition (SBM only).
    pub tw2s_inter: Option<bool>,
    pub stage1_inter: Option<bool>,
    pub random_inter_rate: Option<f64>,
    pub r_inter: Option<f64>,
}

/// Outcome of one instance; failures are kept in order with the error.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: BenchInstance,
    pub result: std::result::Result<ExperimentRecord, String>,
}

fn cut_ecr(c: &Circuit, pos: usize, s: &BenchSettings) -> Result<f64> {
    ecr_count(&c.without_gate(pos)?, &s.coupling, &s.routing_seeds)
}

pub fn run_instance(inst: &BenchInstance, s: &BenchSettings) -> Result<ExperimentRecord> {
    if s.random_trials == 0 {
        return Err(Error::param("random_trials", "must be >= 1"));
    }
    let g = generate(&inst.spec)?;
    let c = circuit_from_graph(&g)?;
    let tw2s = select_cut(&c, &s.select)?;
    let stage1 = select_stage1_only(&c, &s.select)?;

    let base = ecr_count(&c, &s.coupling, &s.routing_seeds)?;
    let ecr_tw2s = cut_ecr(&c, tw2s.gate_index, s)?;
    let ecr_stage1 = if stage1.gate_index == tw2s.gate_index {
        ecr_tw2s
    } else {
        cut_ecr(&c, stage1.gate_index, s)?
    };
    let mut trial_rng = rng::substream(inst.spec.seed, 0x7261_6e64);
    let mut random_ecr = Vec::with_capacity(s.random_trials);
    let mut random_edges = Vec::with_capacity(s.random_trials);
    for _ in 0..s.random_trials {
        let r = random_cut(&c, trial_rng.gen())?;
        random_ecr.push(cut_ecr(&c, r.gate_index, s)?);
        random_edges.push(r.edge);
    }
    let ecr_random = mean(&random_ecr);

    let partition = inst.spec.planted_partition();
    let inter = |e: Edge| partition.as_ref().map(|p| p[e.u()] != p[e.v()]);
    let (random_inter_rate, r_inter) = match &partition {
        Some(p) if g.edge_count() > 0 => (
            Some(random_edges.iter().filter(|e| p[e.u()] != p[e.v()]).count() as f64 / s.random_trials as f64),
            Some(inter_community_fraction(&g, p)?),
        ),
        _ => (None, None),
    };

    let delta_tw2s = base - ecr_tw2s;
    let delta_random = base - ecr_random;
    let delta_adv = delta_tw2s - delta_random;
    Ok(ExperimentRecord {
        family: family_name(&inst.spec.family).to_string(),
        condition: inst.condition.clone(),
        seed: inst.spec.seed,
        n_qubits: g.node_count(),
        n_edges: g.edge_count(),
        ecr_uncut: base,
        ecr_tw2s_cut: ecr_tw2s,
        ecr_stage1_cut: ecr_stage1,
        ecr_random_cut: ecr_random,
        delta_tw2s,
        delta_stage1: base - ecr_stage1,
        delta_random,
        delta_adv,
        win: delta_adv > 0.0,
        tw2s_edge: tw2s.edge,
        tw2s_inter: inter(tw2s.edge),
        stage1_inter: inter(stage1.edge),
        random_inter_rate,
        r_inter,
    })
}

/// Runs every instance; rows come back in input order whatever the
/// scheduling.
pub fn run_bench(instances: &[BenchInstance], s: &BenchSettings) -> Vec<BenchRow> {
    instances
        .par_iter()
        .map(|inst| BenchRow {
            instance: inst.clone(),
            result: run_instance(inst, s).map_err(|e| e.to_string()),
        })
        .collect()
}

pub const EXPERIMENT_HEADER: [&str; 22] = [
    "family",
    "condition",
    "seed",
    "n_qubits",
    "n_edges",
    "ecr_uncut",
    "ecr_tw2s_cut",
    "ecr_stage1_cut",
    "ecr_random_cut",
    "delta_tw2s",
    "delta_stage1",
    "delta_random",
    "delta_adv",
    "win",
    "tw2s_u",
    "tw2s_v",
    "tw2s_inter",
    "stage1_inter",
    "random_inter_rate",
    "r_inter",
    "spec",
    "error",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `experiments.csv`: one row per instance. Optional cells are empty;
/// failed instances carry only their identity, `spec` and `error`.
pub fn write_experiments_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EXPERIMENT_HEADER)?;
    for row in rows {
        let spec = serde_json::to_string(&row.instance.spec).expect("spec serializes");
        let fam = family_name(&row.instance.spec.family);
        let rec: Vec<String> = match &row.result {
            Ok(r) => vec![
                r.family.clone(),
                r.condition.clone(),
                r.seed.to_string(),
                r.n_qubits.to_string(),
                r.n_edges.to_string(),
                r.ecr_uncut.to_string(),
                r.ecr_tw2s_cut.to_string(),
                r.ecr_stage1_cut.to_string(),
                r.ecr_random_cut.to_string(),
                r.delta_tw2s.to_string(),
                r.delta_stage1.to_string(),
                r.delta_random.to_string(),
                r.delta_adv.to_string(),
                r.win.to_string(),
                r.tw2s_edge.u().to_string(),
                r.tw2s_edge.v().to_string(),
                opt(r.tw2s_inter),
                opt(r.stage1_inter),
                opt(r.random_inter_rate),
                opt(r.r_inter),
                spec,
                String::new(),
            ],
            Err(e) => {
                let mut v = vec![String::new(); EXPERIMENT_HEADER.len()];
                v[0] = fam.to_string();
                v[1] = row.instance.condition.clone();
                v[2] = row.instance.spec.seed.to_string();
                v[20] = spec;
                v[21] = e.clone();
                v
            }
        };
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// One line of the per-condition summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionSummary {
    pub condition: String,
    pub n: usize,
    pub failed: usize,
    pub mean_adv: f64,
    pub win_rate: f64,
    /// One-sample t-test of `delta_adv` against zero; `None` when fewer
    /// than two rows or all advantages are equal.
    pub t: Option<f64>,
    pub p: Option<f64>,
}

/// Groups rows by condition in order of first appearance.
pub fn summarize(rows: &[BenchRow]) -> Vec<ConditionSummary> {
    let mut order: Vec<String> = Vec::new();
    for r in rows {
        if !order.contains(&r.instance.condition) {
            order.push(r.instance.condition.clone());
        }
    }
    order
        .into_iter()
        .filter_map(|cond| {
            let group: Vec<&BenchRow> = rows.iter().filter(|r| r.instance.condition == cond).collect();
            let ok: Vec<&ExperimentRecord> = group.iter().filter_map(|r| r.result.as_ref().ok()).collect();
            if ok.is_empty() {
                return None;
            }
            let adv: Vec<f64> = ok.iter().map(|r| r.delta_adv).collect();
            let tt = t_test_one_sample(&adv).ok();
            Some(ConditionSummary {
                condition: cond,
                n: ok.len(),
                failed: group.len() - ok.len(),
                mean_adv: mean(&adv),
                win_rate: ok.iter().filter(|r| r.win).count() as f64 / ok.len() as f64,
                t: tt.map(|t| t.t),
                p: tt.map(|t| t.p),
            })
        })
        .collect()
}

/// Plain-text table with the columns condition, n, Adv., Win rate, p.
pub fn summary_table(summary: &[ConditionSummary]) -> String {
    let mut s = format!("{:<28} {:>4} {:>8} {:>9} {:>9}\n", "condition", "n", "adv", "win_rate", "p");
    for c in summary {
        s.push_str(&format!(
            "{:<28} {:>4} {:>+8.2} {:>8.0}% {:>9}\n",
            c.condition,
            c.n,
            c.mean_adv,
            100.0 * c.win_rate,
            c.p.map_or("-".to_string(), |p| format!("{p:.3}"))
        ));
    }
    s
}

/// `r̂_inter / r̄_inter` over `(selected an inter-community edge, fraction
/// of inter-community edges)` samples. `None` when no edge crosses
/// communities in any sample.
pub fn enrichment<I: IntoIterator<Item = (bool, f64)>>(samples: I) -> Option<f64> {
    let (mut hits, mut r, mut n) = (0usize, 0.0, 0usize);
    for (inter, frac) in samples {
        hits += usize::from(inter);
        r += frac;
        n += 1;
    }
    if n == 0 || r == 0.0 {
        return None;
    }
    Some((hits as f64 / n as f64) / (r / n as f64))
}

/// Stage-1 top-1 enrichment over SBM records.
pub fn stage1_enrichment(records: &[ExperimentRecord]) -> Option<f64> {
    enrichment(records.iter().filter_map(|r| Some((r.stage1_inter?, r.r_inter?))))
}
