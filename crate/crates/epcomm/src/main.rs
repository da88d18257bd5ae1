use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use epcomm::baselines::{les, scr};
use epcomm::bench::{run_simulation, summarize, write_csv, MethodSpec, SimulationPlan};
use epcomm::detect::{aep_detect, ep_search};
use epcomm::graph::{load_edge_list_path, Graph};
use epcomm::label::LabelVector;
use epcomm::metrics::{misclustered_fraction, nmi};
use epcomm::models::{sample_dcsbm, SimConfig};
use epcomm::objectives::Criterion;
use epcomm::spectral::{embedding, DEFAULT_EPSILON, DEFAULT_TOL};

#[derive(Parser)]
#[command(
    name = "epcomm",
    about = "Two-community detection via extreme points of a spectral projection",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect two communities in an edge-list graph and write labels.
    Detect(DetectArgs),
    /// Run replicated block-model benchmarks and emit a CSV.
    Simulate(SimulateArgs),
    /// Sample one network from the block model and write it to files.
    Generate(GenerateArgs),
    /// Write the 2 x n spectral embedding as CSV (debugging aid).
    Embed(EmbedArgs),
    /// Extract the largest connected component of an edge list.
    Lcc(LccArgs),
}

#[derive(Args)]
struct DetectArgs {
    /// Edge-list file: two whitespace-separated 0-based ids per line.
    #[arg(long)]
    graph: PathBuf,
    /// Detection method.
    #[arg(long, default_value = "ep", value_parser = ["ep", "aep", "scr", "les"])]
    method: String,
    /// Criterion maximized by the ep method.
    #[arg(long, default_value = "bm", value_parser = ["bm", "dc", "ng", "ex"])]
    criterion: String,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Optional ground-truth labels ({1,2} or {+1,-1}, one per line).
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Output labels file (one +1/-1 per line); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConfigArgs {
    /// Flat key=value config file (n, n1, w1, w2, r, lambda, gamma);
    /// explicit flags override file entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Size of the first community; defaults to n/2.
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    w1: Option<f64>,
    #[arg(long)]
    w2: Option<f64>,
    /// Out-in ratio; comma-separated values sweep a grid.
    #[arg(long, value_delimiter = ',')]
    r: Vec<f64>,
    /// Target average degree; comma-separated values sweep a grid.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Named preset: "extraction" is the tight-community benchmark
    /// (n1=60, n2=240, w=(0.4,0.1), r=0.1).
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Methods to benchmark: ep-bm, ep-dc, ep-ng, ep-ex, aep, scr, les.
    #[arg(long, value_delimiter = ',', default_value = "ep-bm,aep,scr")]
    methods: Vec<String>,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Worker threads for replications.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Report wall_ms as 0 so repeated runs are byte-identical.
    #[arg(long, default_value_t = false)]
    zero_walltime: bool,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output prefix; writes <prefix>.edges, <prefix>.labels, <prefix>.theta.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV (2 rows x n columns); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LccArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Optional labels for the raw graph, filtered to the component.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Output prefix; writes <prefix>.edges, <prefix>.map and, with --labels,
    /// <prefix>.labels.
    #[arg(long)]
    out: PathBuf,
}

/// Exit codes: 0 success, 1 computational failure, 2 usage or IO problems.
fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Detect(args) => cmd_detect(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Lcc(args) => cmd_lcc(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(err.code)
        }
    }
}

struct CmdError {
    code: u8,
    inner: anyhow::Error,
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.inner)
    }
}

trait ExitCtx<T> {
    /// Usage / IO problem: exit code 2.
    fn or_usage(self, msg: &str) -> Result<T, CmdError>;
    /// Computational failure: exit code 1.
    fn or_compute(self, msg: &str) -> Result<T, CmdError>;
}

impl<T, E: Into<anyhow::Error>> ExitCtx<T> for Result<T, E> {
    fn or_usage(self, msg: &str) -> Result<T, CmdError> {
        self.map_err(|e| CmdError {
            code: 2,
            inner: e.into().context(msg.to_string()),
        })
    }

    fn or_compute(self, msg: &str) -> Result<T, CmdError> {
        self.map_err(|e| CmdError {
            code: 1,
            inner: e.into().context(msg.to_string()),
        })
    }
}

fn load_graph(path: &Path) -> Result<Graph, CmdError> {
    let load = load_edge_list_path(path.to_str().unwrap_or_default())
        .or_usage(&format!("reading graph {}", path.display()))?;
    if load.self_loops > 0 {
        eprintln!(
            "dropped {} self-loop(s) from {}",
            load.self_loops,
            path.display()
        );
    }
    Ok(load.graph)
}

fn read_truth(path: &Path) -> Result<LabelVector, CmdError> {
    let file = File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))
        .or_usage("reading truth labels")?;
    LabelVector::read(BufReader::new(file)).or_usage("parsing truth labels")
}

fn open_out(path: &Path) -> Result<BufWriter<File>, CmdError> {
    File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))
        .or_usage("opening output file")
        .map(BufWriter::new)
}

fn cmd_detect(args: DetectArgs) -> Result<(), CmdError> {
    let graph = load_graph(&args.graph)?;
    let criterion = Criterion::parse(&args.criterion).expect("validated by clap");
    let (labels, extra) = match args.method.as_str() {
        "ep" => {
            let emb = embedding(&graph, args.epsilon, args.tol, args.seed)
                .or_compute("computing embedding")?;
            let res = ep_search(&graph, criterion, &emb).or_compute("extreme-point search")?;
            let extra = format!(
                " criterion={} objective={} candidates={}",
                args.criterion, res.objective_value, res.candidates_evaluated
            );
            (res.labels, extra)
        }
        "aep" => {
            let emb = embedding(&graph, args.epsilon, args.tol, args.seed)
                .or_compute("computing embedding")?;
            (
                aep_detect(&emb).or_compute("geometric estimate")?,
                String::new(),
            )
        }
        "scr" => (
            scr(&graph, args.epsilon, 40, args.tol, args.seed).or_compute("spectral clustering")?,
            String::new(),
        ),
        "les" => (
            les(&graph, args.epsilon, args.tol, args.seed).or_compute("modularity eigenvector")?,
            String::new(),
        ),
        other => {
            return Err(anyhow!("unknown method {other}")).or_usage("parsing --method");
        }
    };

    let mut summary = format!(
        "method={} n={} edges={}{}",
        args.method,
        graph.n(),
        graph.edge_count(),
        extra
    );
    if let Some(truth_path) = &args.truth {
        let truth = read_truth(truth_path)?;
        let score = nmi(&labels, &truth).or_compute("scoring against truth")?;
        let mis = misclustered_fraction(&labels, &truth).or_compute("scoring against truth")?;
        summary.push_str(&format!(" nmi={score:.4} misclustered={mis:.4}"));
    }

    match &args.out {
        Some(path) => {
            let mut out = open_out(path)?;
            labels.write(&mut out).or_usage("writing labels")?;
        }
        None => {
            let stdout = std::io::stdout();
            labels.write(stdout.lock()).or_usage("writing labels")?;
        }
    }
    println!("{summary}");
    Ok(())
}

/// Builds the configuration grid from a key=value file plus flag overrides.
fn build_configs(args: &ConfigArgs, seed: u64) -> Result<Vec<SimConfig>, CmdError> {
    let mut file_values = std::collections::BTreeMap::new();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot open {}", path.display()))
            .or_usage("reading config file")?;
        for (lineno, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value", lineno + 1))
                .or_usage("parsing config file")?;
            file_values.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    let file_f64 = |key: &str| -> Result<Option<f64>, CmdError> {
        file_values
            .get(key)
            .map(|v| v.parse::<f64>().map_err(|e| anyhow!("config {key}: {e}")))
            .transpose()
            .or_usage("parsing config file")
    };

    let preset = args
        .preset
        .as_deref()
        .or(file_values.get("preset").map(|s| s.as_str()));
    let base = match preset {
        Some("extraction") => Some(SimConfig::extraction_benchmark(15.0, seed)),
        Some(other) => {
            return Err(anyhow!("unknown preset {other}")).or_usage("parsing --preset");
        }
        None => None,
    };

    let n = args
        .n
        .or(file_f64("n")?.map(|v| v as usize))
        .or(base.map(|b| b.n))
        .unwrap_or(300);
    let n1 = args
        .n1
        .or(file_f64("n1")?.map(|v| v as usize))
        .or(base.map(|b| b.n1))
        .unwrap_or(n / 2);
    let w1 = args
        .w1
        .or(file_f64("w1")?)
        .or(base.map(|b| b.w.0))
        .unwrap_or(1.0);
    let w2 = args
        .w2
        .or(file_f64("w2")?)
        .or(base.map(|b| b.w.1))
        .unwrap_or(1.0);
    let gamma = args
        .gamma
        .or(file_f64("gamma")?)
        .or(base.map(|b| b.gamma))
        .unwrap_or(0.0);
    let mut r_values = args.r.clone();
    if r_values.is_empty() {
        if let Some(r) = file_f64("r")? {
            r_values.push(r);
        } else if let Some(b) = base {
            r_values.push(b.r);
        } else {
            r_values.push(0.3);
        }
    }
    let mut lambda_values = args.lambda.clone();
    if lambda_values.is_empty() {
        if let Some(l) = file_f64("lambda")? {
            lambda_values.push(l);
        } else {
            lambda_values.push(base.map(|b| b.lambda).unwrap_or(15.0));
        }
    }
    if n1 > n {
        return Err(anyhow!("n1 = {n1} exceeds n = {n}")).or_usage("validating config");
    }

    let mut configs = Vec::new();
    for &lambda in &lambda_values {
        for &r in &r_values {
            let cfg = SimConfig {
                n,
                n1,
                n2: n - n1,
                w: (w1, w2),
                r,
                lambda,
                gamma,
                seed,
            };
            cfg.validate().or_usage("validating config")?;
            configs.push(cfg);
        }
    }
    Ok(configs)
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CmdError> {
    let configs = build_configs(&args.config, args.seed)?;
    let methods: Vec<MethodSpec> = args
        .methods
        .iter()
        .map(|m| MethodSpec::parse(m).ok_or_else(|| anyhow!("unknown method token {m:?}")))
        .collect::<Result<_, _>>()
        .or_usage("parsing --methods")?;
    if args.jobs == 0 {
        return Err(anyhow!("--jobs must be at least 1")).or_usage("validating flags");
    }
    let plan = SimulationPlan {
        configs,
        methods,
        reps: args.reps,
        epsilon: args.epsilon,
        tol: args.tol,
        seed: args.seed,
        jobs: args.jobs,
        zero_walltime: args.zero_walltime,
    };
    let rows = run_simulation(&plan).or_compute("running simulation")?;
    let mut out = open_out(&args.out)?;
    write_csv(&rows, &mut out).or_usage("writing CSV")?;
    out.flush().or_usage("writing CSV")?;
    for line in summarize(&rows) {
        println!("{line}");
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CmdError> {
    let mut configs = build_configs(&args.config, args.seed)?;
    if configs.len() != 1 {
        return Err(anyhow!("generate needs a single r and lambda")).or_usage("validating config");
    }
    let cfg = configs.pop().expect("one config");
    let (graph, labels, theta) = sample_dcsbm(&cfg).or_compute("sampling network")?;

    let prefix = args.out.to_str().unwrap_or_default();
    let edges_path = format!("{prefix}.edges");
    let mut out = open_out(Path::new(&edges_path))?;
    graph
        .write_edge_list(&mut out)
        .or_usage("writing edge list")?;

    let labels_path = format!("{prefix}.labels");
    let mut out = open_out(Path::new(&labels_path))?;
    labels.write(&mut out).or_usage("writing labels")?;

    let theta_path = format!("{prefix}.theta");
    let mut out = open_out(Path::new(&theta_path))?;
    for t in &theta {
        writeln!(out, "{t}").or_usage("writing theta")?;
    }
    println!(
        "n={} edges={} average_degree={:.3} files={prefix}.{{edges,labels,theta}}",
        graph.n(),
        graph.edge_count(),
        graph.average_degree()
    );
    Ok(())
}

fn cmd_embed(args: EmbedArgs) -> Result<(), CmdError> {
    let graph = load_graph(&args.graph)?;
    let emb =
        embedding(&graph, args.epsilon, args.tol, args.seed).or_compute("computing embedding")?;
    match &args.out {
        Some(path) => {
            let mut out = open_out(path)?;
            emb.write_csv(&mut out).or_usage("writing embedding")?;
        }
        None => {
            let stdout = std::io::stdout();
            emb.write_csv(stdout.lock()).or_usage("writing embedding")?;
        }
    }
    if emb.eigen_gap_warning {
        eprintln!("warning: leading eigenvalue gap below tolerance");
    }
    Ok(())
}

fn cmd_lcc(args: LccArgs) -> Result<(), CmdError> {
    let graph = load_graph(&args.graph)?;
    let (sub, mapping) = graph
        .largest_connected_component()
        .or_compute("extracting largest component")?;

    let prefix = args.out.to_str().unwrap_or_default();
    let mut out = open_out(Path::new(&format!("{prefix}.edges")))?;
    sub.write_edge_list(&mut out)
        .or_usage("writing edge list")?;

    let mut out = open_out(Path::new(&format!("{prefix}.map")))?;
    for old in &mapping {
        writeln!(out, "{old}").or_usage("writing id map")?;
    }

    if let Some(labels_path) = &args.labels {
        let raw = read_truth(labels_path)?;
        if raw.len() < graph.n() {
            return Err(anyhow!(
                "labels file has {} lines but the graph has {} nodes",
                raw.len(),
                graph.n()
            ))
            .or_usage("validating labels");
        }
        let filtered = LabelVector::new(mapping.iter().map(|&old| raw.get(old)).collect())
            .or_usage("filtering labels")?;
        let mut out = open_out(Path::new(&format!("{prefix}.labels")))?;
        filtered.write(&mut out).or_usage("writing labels")?;
    }
    println!(
        "component n={} edges={} (of n={} edges={})",
        sub.n(),
        sub.edge_count(),
        graph.n(),
        graph.edge_count()
    );
    Ok(())
}
