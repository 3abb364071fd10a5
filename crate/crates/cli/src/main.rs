//! `facial-thue` command line.
//!
//! Exit codes: 0 ok, 1 verification failure or infeasible, 2 exhausted,
//! 3 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use facial_thue::engine::{default_budget, reconstruct, run, ListAssignment, Record, RunOutcome, Status};
use facial_thue::families::{colour_family, FamilyError, FamilyInstance};
use facial_thue::io::{
    analysis_table, read_json, run_experiment, write_analysis_csv, write_json, write_stats_csv, ChoicesFile,
    ColouringFile, ExperimentSpec, GraphSource, ListPolicy,
};
use facial_thue::oracle::{ec_vs_oracle, feasible_for_lists, pi_f_exact, OracleBudget};
use facial_thue::repetition::verify_facial_nonrepetitive;
use facial_thue::{generate_family, Family, PlaneGraph};

const OK: u8 = 0;
const FAILED: u8 = 1;
const EXHAUSTED: u8 = 2;
const INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "facial-thue",
    version,
    about = "Facial non-repetitive list colourings of plane graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family graph as JSON.
    Generate {
        #[arg(long)]
        family: Family,
        /// Comma separated, e.g. `4,5` for a 4x5 grid.
        #[arg(long, value_delimiter = ',', required = true)]
        params: Vec<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Colour a graph with the randomized engine or a family construction.
    Color(ColorArgs),
    /// Check that a colouring has no repetitive facial path.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colouring: PathBuf,
    },
    /// Recover the engine's choices from a record and final colouring.
    Decode {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lists: PathBuf,
        #[arg(long)]
        record: PathBuf,
        #[arg(long)]
        colouring: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Counting sequence, characteristic roots and list sizes per degree.
    Analyze {
        #[arg(long, default_value_t = 1)]
        delta_min: u64,
        #[arg(long, default_value_t = 10)]
        delta_max: u64,
        #[arg(long, default_value_t = 20)]
        m_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exact search on small instances.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Graph JSON file.
    #[arg(long, conflicts_with = "params")]
    graph: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long, value_delimiter = ',')]
    params: Vec<usize>,
}

impl GraphArgs {
    fn source(&self) -> Result<GraphSource> {
        match (&self.graph, self.family) {
            (Some(path), _) => Ok(GraphSource::File { path: path.clone() }),
            (None, Some(family)) => Ok(GraphSource::Family {
                family,
                params: self.params.clone(),
            }),
            (None, None) => bail!("give --graph or --family with --params"),
        }
    }
}

#[derive(Args)]
struct ListArgs {
    /// List assignment JSON file.
    #[arg(long, conflicts_with_all = ["list_size", "universe"])]
    lists: Option<PathBuf>,
    /// Without --universe every list is `1..=l`.
    #[arg(long)]
    list_size: Option<usize>,
    /// Draw random `l`-subsets of `1..=universe` from the seed.
    #[arg(long)]
    universe: Option<usize>,
}

impl ListArgs {
    fn policy(&self, default_l: Option<usize>) -> Result<ListPolicy> {
        if let Some(path) = &self.lists {
            return Ok(ListPolicy::Explicit { path: path.clone() });
        }
        let Some(l) = self.list_size.or(default_l) else {
            bail!("give --lists or --list-size");
        };
        Ok(match self.universe {
            Some(universe) => ListPolicy::Uniform { universe, l },
            None => ListPolicy::Identical { l },
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ec,
    Family,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ColorArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    lists: ListArgs,
    #[arg(long, env = "FACIAL_THUE_SEED", default_value_t = 0)]
    seed: u64,
    /// Engine budget T; defaults to 64 n max(1, Δ).
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Ec)]
    mode: Mode,
    /// Rerun with seed+1, seed+2, .. after an exhausted run.
    #[arg(long, default_value_t = 0)]
    retries: u64,
    /// Batch mode: one run per seed in `seed..seed+runs`, statistics as CSV.
    #[arg(long, conflicts_with = "retries")]
    runs: Option<u64>,
    /// Directory for colouring.json, record.json, lists.json, choices.json
    /// (or stats.csv in batch mode).
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Feasibility for these lists; without it the smallest `k` is searched.
    #[arg(long)]
    lists: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    k_max: usize,
    /// Also run the engine on the lists for this many seeds and compare.
    #[arg(long, requires = "lists")]
    ec_runs: Option<u64>,
    #[arg(long, env = "FACIAL_THUE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_expansions: Option<u64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(INPUT);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT)
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Generate { family, params, out } => {
            let g = generate_family(family, &params)?;
            write_json(&out, &g)?;
            emit(&json!({"n": g.n(), "edges": g.edge_count(), "faces": g.faces().len()}));
            Ok(OK)
        }
        Command::Color(args) => color(args),
        Command::Verify { graph, colouring } => {
            let g: PlaneGraph = read_json(&graph)?;
            let c: ColouringFile = read_json(&colouring)?;
            if c.colours.len() != g.n() {
                bail!(
                    "colouring has {} entries, graph has {} vertices",
                    c.colours.len(),
                    g.n()
                );
            }
            match verify_facial_nonrepetitive(&g, &c.colours) {
                Ok(()) => {
                    emit(&json!({"valid": true}));
                    Ok(OK)
                }
                Err(v) => {
                    emit(&json!({"valid": false, "violation": v}));
                    Ok(FAILED)
                }
            }
        }
        Command::Decode {
            graph,
            lists,
            record,
            colouring,
            out,
        } => {
            let g: PlaneGraph = read_json(&graph)?;
            let lists: ListAssignment = read_json(&lists)?;
            let record: Record = read_json(&record)?;
            let c: ColouringFile = read_json(&colouring)?;
            match reconstruct(&g, &lists, &record, &c.colours) {
                Ok(choices) => {
                    let file = ChoicesFile { choices };
                    match out {
                        Some(path) => write_json(&path, &file)?,
                        None => emit(&json!(file)),
                    }
                    Ok(OK)
                }
                Err(e) => {
                    eprintln!("{e}");
                    Ok(FAILED)
                }
            }
        }
        Command::Analyze {
            delta_min,
            delta_max,
            m_max,
            format,
            out,
        } => {
            if delta_min == 0 || delta_min > delta_max {
                bail!("need 1 <= delta-min <= delta-max");
            }
            if m_max < 2 {
                bail!("m-max must be at least 2");
            }
            let rows = analysis_table(delta_min..=delta_max, m_max);
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_analysis_csv(&mut buf, &rows)?;
                    String::from_utf8(buf)?
                }
            };
            match out {
                Some(path) => fs::write(&path, text).with_context(|| path.display().to_string())?,
                None => print!("{text}"),
            }
            Ok(OK)
        }
        Command::Oracle(args) => oracle(args),
    }
}

fn emit(v: &Value) {
    println!("{v}");
}

fn color(args: ColorArgs) -> Result<u8> {
    let source = args.graph.source()?;
    let default_l = match (args.mode, args.graph.family) {
        (Mode::Family, Some(f)) => Some(f.min_list_size()),
        _ => None,
    };
    let policy = args.lists.policy(default_l)?;
    fs::create_dir_all(&args.out_dir).with_context(|| args.out_dir.display().to_string())?;

    if let Some(runs) = args.runs {
        if args.mode == Mode::Family {
            bail!("--runs drives the engine only");
        }
        let spec = ExperimentSpec {
            graph: source,
            lists: policy,
            first_seed: args.seed,
            seeds: runs,
            budget: args.max_steps,
        };
        let stats = run_experiment(&spec)?;
        let path = args.out_dir.join("stats.csv");
        let file = fs::File::create(&path).with_context(|| path.display().to_string())?;
        write_stats_csv(file, &stats)?;
        let success = stats.iter().filter(|s| s.outcome == Status::Success).count();
        let verified = stats.iter().filter(|s| s.verified).count();
        emit(&json!({"runs": stats.len(), "success": success, "verified": verified}));
        return Ok(if verified < success {
            FAILED
        } else if success < stats.len() {
            EXHAUSTED
        } else {
            OK
        });
    }

    let g = source.load()?;
    let lists = policy.materialize(g.n(), args.seed)?;
    write_json(&args.out_dir.join("lists.json"), &lists)?;
    match args.mode {
        Mode::Ec => color_ec(&g, &lists, &args),
        Mode::Family => {
            let Some(family) = args.graph.family else {
                bail!("--mode family needs --family");
            };
            color_family(family, g, lists, &args)
        }
    }
}

fn color_ec(g: &PlaneGraph, lists: &ListAssignment, args: &ColorArgs) -> Result<u8> {
    let budget = args.max_steps.unwrap_or_else(|| default_budget(g));
    let mut out: RunOutcome = run(g, lists, args.seed, budget)?;
    let mut attempt = 0;
    while out.status == Status::Exhausted && attempt < args.retries {
        attempt += 1;
        out = run(g, lists, args.seed.wrapping_add(attempt), budget)?;
    }
    let verified = out.is_success() && verify_facial_nonrepetitive(g, &out.colouring).is_ok();
    let file = ColouringFile {
        status: Some(out.status),
        steps: Some(out.steps),
        seed: out.seed,
        ..ColouringFile::plain(out.colouring.clone())
    };
    write_json(&args.out_dir.join("colouring.json"), &file)?;
    write_json(&args.out_dir.join("record.json"), &out.record)?;
    write_json(
        &args.out_dir.join("choices.json"),
        &ChoicesFile { choices: out.choices },
    )?;
    emit(&json!({"status": out.status, "steps": out.steps, "seed": out.seed, "verified": verified}));
    Ok(match out.status {
        Status::Exhausted => EXHAUSTED,
        Status::Success if verified => OK,
        Status::Success => FAILED,
    })
}

fn color_family(family: Family, g: PlaneGraph, lists: ListAssignment, args: &ColorArgs) -> Result<u8> {
    let inst = FamilyInstance::new(family, g, lists)?;
    match colour_family(&inst, args.seed) {
        Ok(out) => {
            let file = ColouringFile {
                seed: Some(args.seed),
                construction_trace: Some(out.construction_trace),
                ..ColouringFile::plain(out.colours)
            };
            write_json(&args.out_dir.join("colouring.json"), &file)?;
            emit(&json!({"status": "success", "family": family}));
            Ok(OK)
        }
        Err(FamilyError::ConstructionFailed(why)) => {
            eprintln!("construction failed: {why}");
            Ok(FAILED)
        }
        Err(e) => Err(e.into()),
    }
}

fn oracle(args: OracleArgs) -> Result<u8> {
    let source = args.graph.source()?;
    let g = source.load()?;
    let mut budget = OracleBudget::default();
    if let Some(max) = args.max_expansions {
        budget.max_expansions = max;
    }
    let instance = describe(&source);
    let report = match &args.lists {
        Some(path) => {
            let lists: ListAssignment = read_json(path)?;
            let mut report = match args.ec_runs {
                Some(runs) => {
                    let seeds: Vec<u64> = (args.seed..args.seed + runs).collect();
                    let cmp = ec_vs_oracle(&g, &lists, &seeds, default_budget(&g), &budget)?;
                    let mut v = json!(cmp.oracle.feasibility);
                    v["ec"] = json!({
                            "runs": cmp.runs,
                            "successes": cmp.successes,
                            "exhausted": cmp.exhausted,
                            "invalid_successes": cmp.invalid_successes,
                        "contradictions": cmp.contradictions,
                    });
                    v["nodes_expanded"] = json!(cmp.oracle.nodes_expanded);
                    if !cmp.consistent() {
                        v["inconsistent"] = json!(true);
                    }
                    v
                }
                None => {
                    let out = feasible_for_lists(&g, &lists, &budget)?;
                    let mut v = json!(out.feasibility);
                    v["nodes_expanded"] = json!(out.nodes_expanded);
                    v
                }
            };
            report["instance"] = instance;
            report["lists"] = json!(lists);
            report
        }
        None => {
            let out = pi_f_exact(&g, args.k_max, &budget)?;
            let mut v = json!({
                "instance": instance,
                "k": out.k,
                "k_max": out.k_max,
                "result": if out.k.is_some() { "feasible" } else { "infeasible" },
                "nodes_expanded": out.nodes_expanded,
            });
            if let Some(w) = out.witness {
                v["witness"] = json!(w);
            }
            v
        }
    };
    match &args.out {
        Some(path) => write_json(path, &report)?,
        None => emit(&report),
    }
    let feasible = report["result"] == "feasible";
    Ok(if feasible && report.get("inconsistent").is_none() {
        OK
    } else {
        FAILED
    })
}

fn describe(source: &GraphSource) -> Value {
    match source {
        GraphSource::File { path } => json!({"file": Path::new(path)}),
        GraphSource::Family { family, params } => json!({"family": family, "params": params}),
    }
}
