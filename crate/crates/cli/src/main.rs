//! `cliqpers`: command-line front end for the experiment engine.
//!
//! Every run prints one JSON line with the effective configuration before
//! doing any work and one JSON line with the result afterwards. Failures
//! print `{"error": kind, "message": ...}` on stderr and exit nonzero.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clique_persistence::experiment::{
    persistence_with_cap_policy, run_experiment, ExperimentConfig, ExperimentKind,
};
use clique_persistence::stats::max_persistence;
use clique_persistence::{compute_persistence, EdgeFiltration, FlagFiltration};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "cliqpers",
    version,
    about = "Persistent homology of random clique complex filtrations"
)]
struct Cli {
    /// Master seed for sample generation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Directory for CSV/JSON outputs [default: out].
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// JSON experiment config; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct RunArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Homology degree.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    samples: Option<u64>,
    /// `eps` of the threshold window.
    #[arg(long)]
    eps: Option<f64>,
    /// Prime characteristic of the coefficient field.
    #[arg(long)]
    characteristic: Option<u32>,
    /// Histogram bins.
    #[arg(long)]
    bins: Option<usize>,
    /// Points of the default geometric threshold grid.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Explicit windows, e.g. `0.1:0.2,0.15:0.3`.
    #[arg(long, value_parser = parse_window, value_delimiter = ',')]
    grid: Option<Vec<(f64, f64)>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one weighted complete graph and write it as `u,v,weight` CSV.
    Sample {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
    /// Persistence diagram of one filtration, read from CSV or sampled.
    Persist {
        /// Edge CSV written by `sample`.
        #[arg(long, conflicts_with = "n")]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Highest homology degree.
        #[arg(long)]
        k_max: Option<usize>,
        /// Fixed weight cap; without it the cap escalation policy is used.
        #[arg(long)]
        cap: Option<f64>,
        #[arg(long)]
        characteristic: Option<u32>,
        /// Also write the filtration as `value v0 v1 ...` lines.
        #[arg(long)]
        dump_filtration: bool,
    },
    /// Maximal multiplicative persistence over many samples.
    Maxpers {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Special persistent cycle counts over a window grid.
    Special {
        #[command(flatten)]
        run: RunArgs,
        /// Check each witness against the persistence diagram.
        #[arg(long)]
        verify: bool,
    },
    /// Rank invariants over a window grid.
    Rank {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Any experiment kind, usually driven by `--config`.
    Sweep {
        /// max-persistence | special-cycles | rank-sweep | betti-curve
        #[arg(long, value_parser = parse_kind)]
        kind: Option<ExperimentKind>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Data for the two max-persistence histogram figures
    /// (k=1, n=250, 1000 samples and k=2, n=150, 200 samples).
    Figures {
        /// Smaller runs: n=100 with 200 samples, and n=100 with 50 samples.
        #[arg(long)]
        fast: bool,
        /// Override the sample count of both runs.
        #[arg(long)]
        samples: Option<u64>,
    },
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl From<clique_persistence::Error> for Failure {
    fn from(e: clique_persistence::Error) -> Self {
        Failure {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        clique_persistence::Error::from(e).into()
    }
}

fn parse_window(pair: &str) -> Result<(f64, f64), String> {
    let (a, b) = pair
        .split_once(':')
        .ok_or_else(|| format!("window `{pair}` is not of the form p1:p2"))?;
    let p1 = a.trim().parse::<f64>().map_err(|e| format!("{a}: {e}"))?;
    let p2 = b.trim().parse::<f64>().map_err(|e| format!("{b}: {e}"))?;
    Ok((p1, p2))
}

fn parse_kind(s: &str) -> Result<ExperimentKind, String> {
    serde_json::from_value(Value::String(s.to_owned())).map_err(|_| {
        format!("unknown kind `{s}`; expected max-persistence, special-cycles, rank-sweep or betti-curve")
    })
}

fn emit(line: Value) {
    use std::io::Write;
    // a closed pipe (e.g. `| head`) is not worth a panic
    let _ = writeln!(std::io::stdout(), "{line}");
}

/// Config file (or defaults), then global flags.
fn base_config(cli: &Cli) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure {
                kind: "io",
                message: format!("{}: {e}", path.display()),
            })?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(dir) = &cli.out_dir {
        cfg.out_dir = Some(dir.clone());
    }
    if cfg.out_dir.is_none() {
        cfg.out_dir = Some(PathBuf::from("out"));
    }
    Ok(cfg)
}

fn apply(cfg: &mut ExperimentConfig, run: &RunArgs) {
    if let Some(v) = run.n {
        cfg.n = v;
    }
    if let Some(v) = run.k {
        cfg.k = v;
    }
    if let Some(v) = run.samples {
        cfg.samples = v;
    }
    if let Some(v) = run.eps {
        cfg.eps = v;
    }
    if let Some(v) = run.characteristic {
        cfg.characteristic = v;
    }
    if let Some(v) = run.bins {
        cfg.bins = v;
    }
    if let Some(v) = run.grid_points {
        cfg.grid_points = v;
    }
    if let Some(g) = &run.grid {
        cfg.grid = Some(g.clone());
    }
}

fn experiment(command: &str, cfg: ExperimentConfig) -> Result<(), Failure> {
    cfg.validate()?;
    emit(json!({ "command": command, "config": cfg }));
    let out = run_experiment(&cfg)?;
    emit(json!({
        "command": command,
        "summary": out.summary,
        "files": out.files,
        "elapsed_seconds": out.elapsed.as_secs_f64(),
    }));
    Ok(())
}

fn out_dir(cfg: &ExperimentConfig) -> Result<&Path, Failure> {
    let dir = cfg.out_dir.as_deref().expect("set by base_config");
    std::fs::create_dir_all(dir).map_err(|e| Failure {
        kind: "io",
        message: format!("{}: {e}", dir.display()),
    })?;
    Ok(dir)
}

fn sample(cfg: ExperimentConfig, n: Option<usize>, index: u64) -> Result<(), Failure> {
    let n = n.unwrap_or(cfg.n);
    emit(json!({
        "command": "sample",
        "config": { "n": n, "master_seed": cfg.master_seed, "sample_index": index, "out_dir": cfg.out_dir },
    }));
    let ef = EdgeFiltration::sample(n, cfg.master_seed, index)?;
    let path = out_dir(&cfg)?.join(format!("sample_{index}.csv"));
    ef.write_csv(&path)?;
    emit(json!({ "command": "sample", "file": path, "edges": ef.edge_count() }));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn persist(
    cfg: ExperimentConfig,
    input: Option<PathBuf>,
    n: Option<usize>,
    index: u64,
    k_max: Option<usize>,
    cap: Option<f64>,
    characteristic: Option<u32>,
    dump_filtration: bool,
) -> Result<(), Failure> {
    let k_max = k_max.unwrap_or(cfg.k);
    let characteristic = characteristic.unwrap_or(cfg.characteristic);
    let source = match &input {
        Some(path) => json!({ "input": path }),
        None => {
            json!({ "n": n.unwrap_or(cfg.n), "master_seed": cfg.master_seed, "sample_index": index })
        }
    };
    emit(json!({
        "command": "persist",
        "config": {
            "source": source,
            "k_max": k_max,
            "cap": cap,
            "cap_policy": if cap.is_none() { Some(&cfg.cap_policy) } else { None },
            "characteristic": characteristic,
            "out_dir": cfg.out_dir,
        },
    }));
    let ef = match &input {
        Some(path) => EdgeFiltration::read_csv(path)?,
        None => EdgeFiltration::sample(n.unwrap_or(cfg.n), cfg.master_seed, index)?,
    };
    let (diagram, used_cap, retries) = match cap {
        Some(c) => {
            let ff = FlagFiltration::build(&ef, k_max + 1, c)?;
            (compute_persistence(&ff, k_max, characteristic)?, c, 0)
        }
        None => {
            match persistence_with_cap_policy(&ef, k_max, characteristic, &cfg.cap_policy, 0.0)? {
                Ok(d) => (d.diagram, d.cap, d.retries),
                Err((c, r)) => {
                    return Err(Failure {
                        kind: "cap-insufficient",
                        message: format!("classes still alive at cap {c} after {r} retries"),
                    })
                }
            }
        }
    };
    let dir = out_dir(&cfg)?;
    let path = dir.join("diagram.csv");
    diagram.write_csv(&path)?;
    let mut files = vec![path];
    if dump_filtration {
        let p = dir.join("filtration.txt");
        FlagFiltration::build(&ef, k_max + 1, used_cap)?.write_text(&p)?;
        files.push(p);
    }
    let per_degree: Vec<Value> = (1..=k_max)
        .map(|k| match max_persistence(&diagram, k) {
            Ok(r) => serde_json::to_value(r).expect("plain data"),
            Err(e) => json!({ "k": k, "error": e.kind(), "message": e.to_string() }),
        })
        .collect();
    emit(json!({
        "command": "persist",
        "files": files,
        "cap": used_cap,
        "retries": retries,
        "pairs_per_degree": diagram.degrees().map(<[_]>::len).collect::<Vec<_>>(),
        "max_persistence": per_degree,
    }));
    Ok(())
}

fn figures(cfg: ExperimentConfig, fast: bool, samples: Option<u64>) -> Result<(), Failure> {
    let root = cfg.out_dir.clone().expect("set by base_config");
    let runs = if fast {
        [("figure1", 100, 1, 200), ("figure2", 100, 2, 50)]
    } else {
        [("figure1", 250, 1, 1000), ("figure2", 150, 2, 200)]
    };
    for (name, n, k, s) in runs {
        let run = ExperimentConfig {
            kind: ExperimentKind::MaxPersistence,
            n,
            k,
            samples: samples.unwrap_or(s),
            out_dir: Some(root.join(name)),
            ..cfg.clone()
        };
        experiment("figures", run)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = base_config(&cli)?;
    match cli.command {
        Command::Sample { n, index } => sample(cfg, n, index),
        Command::Persist {
            input,
            n,
            index,
            k_max,
            cap,
            characteristic,
            dump_filtration,
        } => persist(
            cfg,
            input,
            n,
            index,
            k_max,
            cap,
            characteristic,
            dump_filtration,
        ),
        Command::Maxpers { run } => {
            cfg.kind = ExperimentKind::MaxPersistence;
            apply(&mut cfg, &run);
            experiment("maxpers", cfg)
        }
        Command::Special { run, verify } => {
            cfg.kind = ExperimentKind::SpecialCycles;
            cfg.verify_witnesses |= verify;
            apply(&mut cfg, &run);
            experiment("special", cfg)
        }
        Command::Rank { run } => {
            cfg.kind = ExperimentKind::RankSweep;
            apply(&mut cfg, &run);
            experiment("rank", cfg)
        }
        Command::Sweep { kind, run } => {
            if let Some(kind) = kind {
                cfg.kind = kind;
            }
            apply(&mut cfg, &run);
            experiment("sweep", cfg)
        }
        Command::Figures { fast, samples } => figures(cfg, fast, samples),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            eprintln!(
                "{}",
                json!({ "error": "usage", "message": message.trim_end() })
            );
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind, "message": f.message }));
            ExitCode::FAILURE
        }
    }
}
