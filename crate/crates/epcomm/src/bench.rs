//! Replicated simulation benchmarks with CSV output.
//!
//! Every replication derives its own seed from (base seed, config index,
//! replication index), so serial and parallel runs produce identical rows.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{les, scr};
use crate::detect::{aep_detect, ep_search};
use crate::error::{Error, Result};
use crate::metrics::{misclustered_fraction, nmi};
use crate::models::{edge_prob_matrix, sample_dcsbm, SimConfig};
use crate::objectives::Criterion;
use crate::spectral::embedding;

/// CSV schema version, bumped whenever the column set changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "schema_version,method,criterion,n,n1,n2,w1,w2,r,lambda,gamma,\
                              epsilon,seed,rep,nmi,misclustered,wall_ms,candidates";

/// One benchmark method: the detector with a criterion, or a baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSpec {
    Ep(Criterion),
    Aep,
    Scr,
    Les,
}

impl MethodSpec {
    pub fn parse(s: &str) -> Option<MethodSpec> {
        match s {
            "aep" => Some(MethodSpec::Aep),
            "scr" => Some(MethodSpec::Scr),
            "les" => Some(MethodSpec::Les),
            _ => {
                let criterion = s.strip_prefix("ep-")?;
                Criterion::parse(criterion).map(MethodSpec::Ep)
            }
        }
    }

    pub fn method_name(&self) -> &'static str {
        match self {
            MethodSpec::Ep(_) => "ep",
            MethodSpec::Aep => "aep",
            MethodSpec::Scr => "scr",
            MethodSpec::Les => "les",
        }
    }

    pub fn criterion_name(&self) -> &'static str {
        match self {
            MethodSpec::Ep(c) => c.name(),
            _ => "",
        }
    }
}

/// One (method, replication) outcome plus the configuration echo.
#[derive(Debug, Clone)]
pub struct BenchmarkRow {
    pub method: &'static str,
    pub criterion: &'static str,
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub w1: f64,
    pub w2: f64,
    pub r: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub rep: usize,
    pub nmi: f64,
    pub misclustered: f64,
    pub wall_ms: f64,
    pub candidates: usize,
}

impl BenchmarkRow {
    fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            CSV_SCHEMA_VERSION,
            self.method,
            self.criterion,
            self.n,
            self.n1,
            self.n2,
            self.w1,
            self.w2,
            self.r,
            self.lambda,
            self.gamma,
            self.epsilon,
            self.seed,
            self.rep,
            self.nmi,
            self.misclustered,
            self.wall_ms,
            self.candidates
        )
    }
}

/// Everything a simulation run needs.
#[derive(Debug, Clone)]
pub struct SimulationPlan {
    pub configs: Vec<SimConfig>,
    pub methods: Vec<MethodSpec>,
    pub reps: usize,
    pub epsilon: f64,
    pub tol: f64,
    pub seed: u64,
    /// Worker threads for replications; 1 = serial.
    pub jobs: usize,
    /// Report wall_ms as 0 for byte-reproducible CSVs.
    pub zero_walltime: bool,
}

/// SplitMix-style seed derivation, stable across runs and platforms.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base
        ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ index.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs every (config, replication, method) cell. Rows come back ordered by
/// (config, replication, method) regardless of the worker count.
pub fn run_simulation(plan: &SimulationPlan) -> Result<Vec<BenchmarkRow>> {
    // Fail fast on infeasible settings before any sampling.
    for cfg in &plan.configs {
        edge_prob_matrix(cfg)?;
    }
    let cells: Vec<(usize, usize)> = (0..plan.configs.len())
        .flat_map(|c| (0..plan.reps).map(move |rep| (c, rep)))
        .collect();

    let run_cell = |&(ci, rep): &(usize, usize)| -> Result<Vec<BenchmarkRow>> {
        let mut cfg = plan.configs[ci];
        cfg.seed = derive_seed(plan.seed, ci as u64, rep as u64);
        let (graph, truth, _) = sample_dcsbm(&cfg)?;
        let mut rows = Vec::with_capacity(plan.methods.len());
        for (mi, method) in plan.methods.iter().enumerate() {
            let method_seed = derive_seed(cfg.seed, 0xabcd, mi as u64);
            let start = Instant::now();
            let (labels, candidates) = match method {
                MethodSpec::Ep(criterion) => {
                    let emb = embedding(&graph, plan.epsilon, plan.tol, method_seed)?;
                    let res = ep_search(&graph, *criterion, &emb)?;
                    (res.labels, res.candidates_evaluated)
                }
                MethodSpec::Aep => {
                    let emb = embedding(&graph, plan.epsilon, plan.tol, method_seed)?;
                    (aep_detect(&emb)?, 0)
                }
                MethodSpec::Scr => (scr(&graph, plan.epsilon, 40, plan.tol, method_seed)?, 0),
                MethodSpec::Les => (les(&graph, plan.epsilon, plan.tol, method_seed)?, 0),
            };
            let wall_ms = if plan.zero_walltime {
                0.0
            } else {
                start.elapsed().as_secs_f64() * 1e3
            };
            rows.push(BenchmarkRow {
                method: method.method_name(),
                criterion: method.criterion_name(),
                n: cfg.n,
                n1: cfg.n1,
                n2: cfg.n2,
                w1: cfg.w.0,
                w2: cfg.w.1,
                r: cfg.r,
                lambda: cfg.lambda,
                gamma: cfg.gamma,
                epsilon: plan.epsilon,
                seed: plan.seed,
                rep,
                nmi: nmi(&labels, &truth)?,
                misclustered: misclustered_fraction(&labels, &truth)?,
                wall_ms,
                candidates,
            });
        }
        Ok(rows)
    };

    let nested: Vec<Vec<BenchmarkRow>> = if plan.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.jobs)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(run_cell).collect::<Result<Vec<_>>>())?
    } else {
        cells.iter().map(run_cell).collect::<Result<Vec<_>>>()?
    };
    Ok(nested.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(rows: &[BenchmarkRow], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.to_csv())?;
    }
    Ok(())
}

/// Per (config, method) mean and standard deviation of NMI, in row order.
pub fn summarize(rows: &[BenchmarkRow]) -> Vec<String> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(String, String, String), Vec<f64>> = BTreeMap::new();
    for row in rows {
        let key = (
            format!(
                "n={} r={} lambda={} gamma={} w=({},{})",
                row.n, row.r, row.lambda, row.gamma, row.w1, row.w2
            ),
            row.method.to_string(),
            row.criterion.to_string(),
        );
        groups.entry(key).or_default().push(row.nmi);
    }
    groups
        .into_iter()
        .map(|((cfg, method, criterion), values)| {
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let var =
                values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len().max(1) as f64;
            let label = if criterion.is_empty() {
                method
            } else {
                format!("{method}[{criterion}]")
            };
            format!(
                "{cfg} {label}: mean NMI {mean:.4} (sd {:.4}, reps {})",
                var.sqrt(),
                values.len()
            )
        })
        .collect()
}
