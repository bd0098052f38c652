//! Command-line front end.
//!
//! Machine output (JSON, CSV, circuit and graph text) goes to stdout or to
//! the `--out` path; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 any other failure, 2 unparseable input (circuit,
//! graph, observable, config or arguments), 3 circuit without two-qubit
//! gates.
//!
//! # Config file
//!
//! TOML. Top-level keys are flat; `[select]`, `[breakeven]` and `[failure]`
//! are single sections; `[[instance]]` and `[[sbm_sweep]]` repeat. Every key
//! is optional and command-line flags win over the file. Integers must fit
//! in a signed 64-bit value.
//!
//! ```toml
//! coupling = "heavyhex127"        # or a path to a graph text file
//! routing_seeds = [42, 123, 7]
//! random_trials = 5
//!
//! [select]
//! k = 3
//! alpha = 1.0
//! beta = 1.0
//! alpha2 = 1.0
//! beta2 = 0.3
//!
//! [[instance]]
//! family = "barbell"
//! k = 3
//! m = 0
//! seed = 0
//!
//! [[sbm_sweep]]
//! mus = [0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4]
//! seeds = 20
//! n_per = 8
//! communities = 2
//! p_in = 0.5
//!
//! [breakeven]
//! p = 0.005
//! n = 200.0
//! sigma_h = 7.0
//! delta_n = [5.0, 10.0, 15.0, 20.0]
//! h_ideal = [0.0, 1.0, 5.0]
//!
//! [failure]
//! ns = [4, 6]
//! trotter_steps = [1, 2, 3, 4]
//! budgets = [1000, 10000, 100000]
//! strategies = ["shared", "per_subcircuit_1_5x"]
//! reps = 5
//! p_ecr = 0.005
//! p_meas = 0.01
//! routing_seed = 42
//! seed = 0
//! p_meas_grid = []                 # non-empty adds the p_meas sweep
//! ```

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::bench::{
    run_bench, sbm_sweep, summarize, summary_table, write_experiments_csv, BenchInstance, BenchSettings,
    DEFAULT_RANDOM_TRIALS, DEFAULT_ROUTING_SEEDS,
};
use crate::analysis::failure::{crossover, failure_sweep, p_meas_sweep, testbed, write_winrate_csv, FailureSettings};
use crate::analysis::{breakeven_grid, write_breakeven_csv};
use crate::circuit::{build_tfim, circuit_from_graph, emit_circuit, parse_circuit, tfim_hamiltonian, Circuit, TfimSpec};
use crate::error::{Error, Result};
use crate::graph::{generate, GraphFamilySpec, UGraph};
use crate::interaction::InteractionGraph;
use crate::router::{route, CouplingMap};
use crate::select::{random_cut, select_cut_explained, Method, SelectParams};
use crate::sim::{qpd_estimate_at, sample_expectation, Backend, NoiseModel, Observable, Shots, Strategy};
use crate::treewidth::min_fill_trace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `heavyhex127` or a path to a coupling graph in graph text format.
    pub coupling: String,
    pub routing_seeds: Vec<u64>,
    pub random_trials: usize,
    pub select: SelectParams,
    pub instance: Vec<GraphFamilySpec>,
    pub sbm_sweep: Vec<SbmSweep>,
    pub breakeven: BreakevenGrid,
    pub failure: FailureGrid,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            coupling: "heavyhex127".into(),
            routing_seeds: DEFAULT_ROUTING_SEEDS.to_vec(),
            random_trials: DEFAULT_RANDOM_TRIALS,
            select: SelectParams::default(),
            instance: Vec::new(),
            sbm_sweep: Vec::new(),
            breakeven: BreakevenGrid::default(),
            failure: FailureGrid::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SbmSweep {
    pub mus: Vec<f64>,
    pub seeds: usize,
    pub n_per: usize,
    pub communities: usize,
    pub p_in: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BreakevenGrid {
    pub p: f64,
    pub n: f64,
    pub sigma_h: f64,
    pub delta_n: Vec<f64>,
    pub h_ideal: Vec<f64>,
}

impl Default for BreakevenGrid {
    fn default() -> Self {
        BreakevenGrid {
            p: 0.005,
            n: 200.0,
            sigma_h: 7.0,
            delta_n: vec![1.0, 2.0, 5.0, 10.0, 15.0, 20.0, 30.0, 50.0],
            h_ideal: vec![0.0, 0.5, 1.0, 2.0, 5.0, 10.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FailureGrid {
    pub ns: Vec<usize>,
    pub trotter_steps: Vec<usize>,
    pub budgets: Vec<u64>,
    pub strategies: Vec<Strategy>,
    pub reps: usize,
    pub p_ecr: f64,
    pub p_meas: f64,
    pub routing_seed: u64,
    pub seed: u64,
    pub p_meas_grid: Vec<f64>,
}

impl Default for FailureGrid {
    fn default() -> Self {
        let d = FailureSettings::desk(Arc::new(CouplingMap::eagle()));
        FailureGrid {
            ns: d.ns,
            trotter_steps: d.trotter_steps,
            budgets: d.budgets,
            strategies: d.strategies,
            reps: d.reps,
            p_ecr: d.noise.p_ecr,
            p_meas: d.noise.p_meas,
            routing_seed: d.routing_seed,
            seed: d.seed,
            p_meas_grid: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| text[..s.start].matches('\n').count() + 1);
            Error::format(line, e.message().to_string())
        })
    }

    pub fn emit(&self) -> String {
        toml::to_string(self).expect("config is plain data")
    }

    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => RunConfig::parse(&read(p)?),
        }
    }

    pub fn coupling_map(&self) -> Result<CouplingMap> {
        if self.coupling.eq_ignore_ascii_case("heavyhex127") {
            Ok(CouplingMap::eagle())
        } else {
            CouplingMap::new(UGraph::from_text(&read(Path::new(&self.coupling))?)?)
        }
    }

    fn bench_settings(&self) -> Result<BenchSettings> {
        let mut s = BenchSettings::new(Arc::new(self.coupling_map()?));
        s.routing_seeds = self.routing_seeds.clone();
        s.random_trials = self.random_trials;
        s.select = self.select.clone();
        Ok(s)
    }

    fn failure_settings(&self) -> Result<FailureSettings> {
        let f = &self.failure;
        let mut s = FailureSettings::desk(Arc::new(self.coupling_map()?));
        s.ns = f.ns.clone();
        s.trotter_steps = f.trotter_steps.clone();
        s.budgets = f.budgets.clone();
        s.strategies = f.strategies.clone();
        s.reps = f.reps;
        s.noise = NoiseModel::new(f.p_ecr, f.p_meas)?;
        s.routing_seed = f.routing_seed;
        s.seed = f.seed;
        s.select = self.select.clone();
        Ok(s)
    }
}

#[derive(Debug, Parser)]
#[command(name = "gatecut", version, about = "Pick a two-qubit gate to cut from the interaction graph alone")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by commands that read a config file.
#[derive(Debug, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `heavyhex127` or a coupling graph file.
    #[arg(long)]
    pub coupling: Option<String>,
    /// Comma-separated routing seeds.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Shortlist size.
    #[arg(short = 'k', long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long)]
    pub beta2: Option<f64>,
}

impl Common {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::load(self.config.as_deref())?;
        if let Some(c) = &self.coupling {
            cfg.coupling = c.clone();
        }
        if let Some(s) = &self.seeds {
            cfg.routing_seeds = s.clone();
        }
        let sel = &mut cfg.select;
        for (slot, v) in [
            (&mut sel.alpha, self.alpha),
            (&mut sel.beta, self.beta),
            (&mut sel.alpha2, self.alpha2),
            (&mut sel.beta2, self.beta2),
        ] {
            if let Some(v) = v {
                *slot = v;
            }
        }
        if let Some(k) = self.k {
            sel.k = k;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Tw2s,
    #[value(name = "stage1_only", alias = "stage1-only")]
    Stage1Only,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Shared,
    #[value(name = "per_subcircuit_1_5x", alias = "per-subcircuit")]
    PerSubcircuit,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Shared => Strategy::Shared,
            StrategyArg::PerSubcircuit => Strategy::PerSubcircuit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Topology {
    Chain,
    J1j2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Choose the gate to cut and print the selection as JSON.
    Select {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value = "tw2s")]
        method: MethodArg,
        /// Seed for `--method random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print the elimination trace and shortlist scores to stderr.
        #[arg(long)]
        explain: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the benchmark instances of a config; writes experiments CSV and
    /// prints the per-condition summary.
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "experiments.csv")]
        out: PathBuf,
    },
    /// Breakeven shot counts over the configured grid.
    Breakeven {
        #[command(flatten)]
        common: Common,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical QPD win rates under the parametric noise model.
    FailureSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long, default_value = "winrate.csv")]
        out: PathBuf,
        /// Where to write the p_meas sweep when `p_meas_grid` is set.
        #[arg(long, default_value = "pmeas.csv")]
        p_meas_out: PathBuf,
    },
    /// Route a circuit and report routed ECR counts as JSON.
    Route {
        circuit: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Write the routed circuit of the first seed here.
        #[arg(long)]
        dump_routed: Option<PathBuf>,
    },
    /// Estimate an observable, directly or through a cut.
    Estimate {
        circuit: PathBuf,
        #[arg(long)]
        observable: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        p_ecr: f64,
        #[arg(long, default_value_t = 0.0)]
        p_meas: f64,
        /// Shot budget; exact expectations when omitted.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, value_enum, default_value = "shared")]
        strategy: StrategyArg,
        /// Gate position to cut, or `tw2s`; no cut when omitted.
        #[arg(long)]
        cut: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Route onto the coupling map with this seed before simulating.
        #[arg(long)]
        routing_seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a benchmark graph, e.g. `generate sbm n_per=8 communities=2
    /// p_in=0.5 p_out=0.05 --seed 3`.
    Generate {
        family: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the graph's CX circuit instead of the graph.
        #[arg(long)]
        circuit: bool,
    },
    /// Emit a Trotterised TFIM circuit.
    Tfim {
        #[arg(long, value_enum)]
        topology: Topology,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        steps: usize,
        /// Also write the Hamiltonian observable here.
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
    },
    /// Min-fill elimination trace as JSON lines.
    Trace { circuit: PathBuf },
    /// Weighted interaction graph in graph text format.
    Interaction { circuit: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    parse_circuit(&read(path)?)
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data") + "\n"
}

/// Builds `{"family": name, key: value, ...}` and lets serde check it.
fn family_spec(family: &str, params: &[String], seed: u64) -> Result<GraphFamilySpec> {
    let mut obj = serde_json::Map::new();
    obj.insert("family".into(), family.into());
    obj.insert("seed".into(), seed.into());
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::format(0, format!("expected key=value, got `{p}`")))?;
        let v: serde_json::Value =
            serde_json::from_str(v).map_err(|_| Error::format(0, format!("`{k}`: not a number: `{v}`")))?;
        obj.insert(k.into(), v);
    }
    let spec: GraphFamilySpec =
        serde_json::from_value(obj.into()).map_err(|e| Error::format(0, format!("family `{family}`: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Select {
            circuit,
            method,
            seed,
            explain,
            common,
        } => {
            let cfg = common.resolve()?;
            let c = read_circuit(&circuit)?;
            let sel = match method {
                MethodArg::Random => random_cut(&c, seed)?,
                m => {
                    let m = if m == MethodArg::Tw2s { Method::Tw2s } else { Method::Stage1Only };
                    let ex = select_cut_explained(&c, &cfg.select, m)?;
                    if explain {
                        eprint!("{}", ex.trace.to_json_lines());
                        eprintln!("tw_ub {}", ex.trace.tw_ub);
                        for r in &ex.selection.shortlist {
                            eprintln!(
                                "{:?} score1={} bc={:.6} dp={:.6} score2={:.6}",
                                r.edge, r.score1, r.bc, r.dp, r.score2
                            );
                        }
                    }
                    ex.selection
                }
            };
            write_out(None, json(&sel).as_bytes())
        }
        Command::Bench { common, out } => {
            let cfg = common.resolve()?;
            let mut instances: Vec<BenchInstance> = cfg.instance.iter().cloned().map(BenchInstance::new).collect();
            for s in &cfg.sbm_sweep {
                instances.extend(sbm_sweep(&s.mus, s.seeds, s.n_per, s.communities, s.p_in));
            }
            let rows = run_bench(&instances, &cfg.bench_settings()?);
            for r in &rows {
                if let Err(e) = &r.result {
                    eprintln!("{} seed {}: {e}", r.instance.condition, r.instance.spec.seed);
                }
            }
            let mut buf = Vec::new();
            write_experiments_csv(&rows, &mut buf)?;
            write_out(Some(&out), &buf)?;
            write_out(None, summary_table(&summarize(&rows)).as_bytes())
        }
        Command::Breakeven { common, out } => {
            let g = common.resolve()?.breakeven;
            let rows = breakeven_grid(g.p, g.n, g.sigma_h, &g.delta_n, &g.h_ideal)?;
            let mut buf = Vec::new();
            write_breakeven_csv(&rows, &mut buf)?;
            write_out(out.as_deref(), &buf)
        }
        Command::FailureSweep {
            common,
            reps,
            out,
            p_meas_out,
        } => {
            let mut cfg = common.resolve()?;
            if let Some(r) = reps {
                cfg.failure.reps = r;
            }
            let s = cfg.failure_settings()?;
            let cells = failure_sweep(&s)?;
            let mut buf = Vec::new();
            write_winrate_csv(&cells, &mut buf)?;
            write_out(Some(&out), &buf)?;
            if !cfg.failure.p_meas_grid.is_empty() {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["n", "trotter_steps", "p_ecr", "p_meas", "err_base", "err_qpd", "advantage"])?;
                for &n in &s.ns {
                    for &t in &s.trotter_steps {
                        let tb = testbed(n, t, &s)?;
                        let pts = p_meas_sweep(
                            &tb.circuit,
                            tb.cut_position,
                            &tb.hamiltonian,
                            s.noise.p_ecr,
                            &cfg.failure.p_meas_grid,
                        )?;
                        for p in &pts {
                            w.serialize((n, t, s.noise.p_ecr, p.p_meas, p.err_base, p.err_qpd, p.advantage))?;
                        }
                        if let Some(x) = crossover(&pts) {
                            eprintln!("n={n} T={t}: advantage crosses zero at p_meas = {x:.5}");
                        }
                    }
                }
                let buf = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                write_out(Some(&p_meas_out), &buf)?;
            }
            Ok(())
        }
        Command::Route {
            circuit,
            common,
            dump_routed,
        } => {
            #[derive(Serialize)]
            struct PerSeed {
                seed: u64,
                ecr_count: usize,
                swaps: usize,
                initial_layout: Vec<usize>,
            }
            #[derive(Serialize)]
            struct Report {
                mean_ecr: f64,
                runs: Vec<PerSeed>,
            }
            let cfg = common.resolve()?;
            if cfg.routing_seeds.is_empty() {
                return Err(Error::param("seeds", "need at least one routing seed"));
            }
            let c = read_circuit(&circuit)?;
            let cm = cfg.coupling_map()?;
            let mut runs = Vec::new();
            for (i, &seed) in cfg.routing_seeds.iter().enumerate() {
                let r = route(&c, &cm, seed)?;
                if i == 0 {
                    if let Some(p) = &dump_routed {
                        write_out(Some(p), emit_circuit(&r.circuit).as_bytes())?;
                    }
                }
                runs.push(PerSeed {
                    seed,
                    ecr_count: r.ecr_count,
                    swaps: r.swaps,
                    initial_layout: r.initial_layout,
                });
            }
            let mean_ecr = runs.iter().map(|r| r.ecr_count as f64).sum::<f64>() / runs.len() as f64;
            write_out(None, json(&Report { mean_ecr, runs }).as_bytes())
        }
        Command::Estimate {
            circuit,
            observable,
            p_ecr,
            p_meas,
            shots,
            strategy,
            cut,
            seed,
            routing_seed,
            common,
        } => {
            let cfg = common.resolve()?;
            let c = read_circuit(&circuit)?;
            let obs = Observable::parse(&read(&observable)?)?;
            let noise = NoiseModel::new(p_ecr, p_meas)?;
            let mut backend = if noise == NoiseModel::default() {
                Backend::ideal()
            } else {
                Backend::noisy(noise)
            };
            if let Some(rs) = routing_seed {
                backend = backend.routed(Arc::new(cfg.coupling_map()?), rs);
            }
            let shots = shots.map_or(Shots::Exact, Shots::Finite);
            let result = match cut.as_deref() {
                None => match shots {
                    Shots::Exact => {
                        let value = crate::sim::exact_expectation(&c, &obs, &backend)?;
                        crate::sim::EstimateResult {
                            value,
                            per_branch: vec![value],
                            shots: vec![None],
                            strategy: None,
                            seed,
                        }
                    }
                    Shots::Finite(m) => sample_expectation(&c, &obs, m, &backend, seed)?,
                },
                Some(spec) => {
                    let position = if spec.eq_ignore_ascii_case("tw2s") {
                        crate::select::select_cut(&c, &cfg.select)?.gate_index
                    } else {
                        spec.parse()
                            .map_err(|_| Error::format(0, format!("--cut: expected a position or tw2s, got `{spec}`")))?
                    };
                    qpd_estimate_at(&c, position, &obs, shots, strategy.into(), &backend, seed)?
                }
            };
            write_out(None, json(&result).as_bytes())
        }
        Command::Generate {
            family,
            params,
            seed,
            circuit,
        } => {
            let g = generate(&family_spec(&family, &params, seed)?)?;
            let text = if circuit {
                emit_circuit(&circuit_from_graph(&g)?)
            } else {
                g.to_text()
            };
            write_out(None, text.as_bytes())
        }
        Command::Tfim {
            topology,
            n,
            steps,
            hamiltonian,
        } => {
            let spec = match topology {
                Topology::Chain => TfimSpec::chain(n, steps),
                Topology::J1j2 => TfimSpec::j1j2_ring(n, steps),
            };
            let c = build_tfim(&spec)?;
            if let Some(p) = hamiltonian {
                write_out(Some(&p), tfim_hamiltonian(&spec)?.emit().as_bytes())?;
            }
            write_out(None, emit_circuit(&c).as_bytes())
        }
        Command::Trace { circuit } => {
            let ig = InteractionGraph::extract(&read_circuit(&circuit)?);
            if ig.edge_count() == 0 {
                return Err(Error::NoTwoQubitGates);
            }
            write_out(None, min_fill_trace(ig.base())?.to_json_lines().as_bytes())
        }
        Command::Interaction { circuit } => {
            let ig = InteractionGraph::extract(&read_circuit(&circuit)?);
            write_out(None, ig.to_text().as_bytes())
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Format { .. } => 2,
        Error::NoTwoQubitGates => 3,
        _ => 1,
    }
}

/// Parses arguments, runs, prints any error to stderr and returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Strategy;
    use proptest::prelude::*;

    #[test]
    fn default_config_round_trips() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::parse(&c.emit()).unwrap(), c);
        assert_eq!(RunConfig::parse("").unwrap(), c);
    }

    #[test]
    fn documented_example_parses() {
        let doc = include_str!("cli.rs");
        let start = doc.find("//! ```toml\n").unwrap() + 12;
        let end = start + doc[start..].find("//! ```\n").unwrap();
        let text: String = doc[start..end]
            .lines()
            .map(|l| l.strip_prefix("//!").unwrap_or(l).strip_prefix(' ').unwrap_or(""))
            .collect::<Vec<_>>()
            .join("\n");
        let cfg = RunConfig::parse(&text).unwrap();
        assert_eq!(cfg.instance.len(), 1);
        assert_eq!(cfg.sbm_sweep[0].mus.len(), 7);
        assert_eq!(cfg.failure.strategies, vec![Strategy::Shared, Strategy::PerSubcircuit]);
    }

    #[test]
    fn bad_config_is_a_format_error() {
        let e = RunConfig::parse("routing_seeds = [1, 2]\nrandom_trials = \"x\"\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 2, .. }), "{e:?}");
        assert!(RunConfig::parse("bogus = 3\n").is_err());
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.toml");
        fs::write(&p, "routing_seeds = [1]\n[select]\nk = 5\nbeta2 = 0.1\n").unwrap();
        let common = Common {
            config: Some(p),
            coupling: None,
            seeds: Some(vec![9, 8]),
            k: Some(2),
            alpha: None,
            beta: None,
            alpha2: None,
            beta2: None,
        };
        let cfg = common.resolve().unwrap();
        assert_eq!(cfg.routing_seeds, vec![9, 8]);
        assert_eq!(cfg.select.k, 2);
        assert_eq!(cfg.select.beta2, 0.1);
    }

    #[test]
    fn family_params() {
        let s = family_spec("barbell", &["k=4".into(), "m=1".into()], 2).unwrap();
        assert_eq!(s.family, crate::graph::GraphFamily::Barbell { k: 4, m: 1 });
        assert_eq!(s.seed, 2);
        assert!(family_spec("barbell", &["k=4".into()], 0).is_err());
        assert!(family_spec("nope", &[], 0).is_err());
    }

    fn finite() -> impl proptest::strategy::Strategy<Value = f64> {
        -1e6..1e6f64
    }

    prop_compose! {
        fn arb_config()(
            seeds in prop::collection::vec(0..=i64::MAX as u64, 0..5),
            trials in 0usize..10,
            k in 1usize..10,
            a in finite(), b in finite(),
            mus in prop::collection::vec(0.0..1.0f64, 0..4),
            sbm_seeds in 0usize..30,
            grid in prop::collection::vec(finite(), 0..4),
            reps in 0usize..9,
            strategies in prop::collection::vec(prop_oneof![Just(Strategy::Shared), Just(Strategy::PerSubcircuit)], 0..3),
            budgets in prop::collection::vec(0..=i64::MAX as u64, 0..3),
            coupling in "[a-z0-9_./]{1,12}",
            inst_seed in 0..=i64::MAX as u64,
        ) -> RunConfig {
            let mut c = RunConfig {
                coupling,
                routing_seeds: seeds,
                random_trials: trials,
                ..RunConfig::default()
            };
            c.select.k = k;
            c.select.alpha = a;
            c.select.beta2 = b;
            c.instance.push(GraphFamilySpec::new(crate::graph::GraphFamily::Grid { rows: k, cols: 2 }, inst_seed));
            c.sbm_sweep.push(SbmSweep { mus, seeds: sbm_seeds, n_per: 8, communities: 2, p_in: 0.5 });
            c.breakeven.delta_n = grid.clone();
            c.breakeven.h_ideal = grid;
            c.failure.reps = reps;
            c.failure.strategies = strategies;
            c.failure.budgets = budgets;
            c
        }
    }

    proptest! {
        #[test]
        fn config_round_trip(c in arb_config()) {
            prop_assert_eq!(RunConfig::parse(&c.emit()).unwrap(), c);
        }
    }
}
