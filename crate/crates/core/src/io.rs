//! File formats and batch experiments.
//!
//! Graphs, lists, records and colourings are JSON. Colours are positive
//! integers, `0` marks an uncoloured vertex. Batch statistics are CSV rows
//! `seed,steps,outcome,verified`.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{a_sequence, big_ratio, char_roots, list_size, Recurrence};
use crate::embed::PlaneGraph;
use crate::engine::{default_budget, run, EngineError, ListAssignment, Status};
use crate::generators::{generate_family, Family, GenError};
use crate::repetition::verify_facial_nonrepetitive;
use crate::Colour;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.into(),
        source,
    })
}

/// Writes through a temporary sibling and a rename, so readers never see a
/// partial file.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let file_err = |source| IoError::File {
        path: path.into(),
        source,
    };
    let mut text = serde_json::to_string_pretty(value).map_err(|source| IoError::Json {
        path: path.into(),
        source,
    })?;
    text.push('\n');
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text).map_err(file_err)?;
    fs::rename(&tmp, path).map_err(file_err)
}

/// A colouring, with whatever produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouringFile {
    pub colours: Vec<Colour>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction_trace: Option<Vec<String>>,
}

impl ColouringFile {
    pub fn plain(colours: Vec<Colour>) -> Self {
        ColouringFile {
            colours,
            status: None,
            steps: None,
            seed: None,
            construction_trace: None,
        }
    }
}

/// The 1-based list indices drawn by the engine, one per step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoicesFile {
    pub choices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphSource {
    File { path: PathBuf },
    Family { family: Family, params: Vec<usize> },
}

impl GraphSource {
    pub fn load(&self) -> Result<PlaneGraph, IoError> {
        match self {
            GraphSource::File { path } => read_json(path),
            GraphSource::Family { family, params } => Ok(generate_family(*family, params)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ListPolicy {
    /// Lists from a file, the same for every seed.
    Explicit { path: PathBuf },
    /// Random `l`-subsets of `1..=universe`, drawn from the run's seed.
    Uniform { universe: usize, l: usize },
    /// `1..=l` everywhere.
    Identical { l: usize },
}

impl ListPolicy {
    pub fn validate(&self) -> Result<(), IoError> {
        match *self {
            ListPolicy::Uniform { universe, l } if l == 0 || universe < l => Err(IoError::Invalid(format!(
                "uniform lists need 1 <= l <= universe, got l = {l}, universe = {universe}"
            ))),
            ListPolicy::Identical { l: 0 } => Err(IoError::Invalid("list size must be positive".into())),
            _ => Ok(()),
        }
    }

    pub fn materialize(&self, n: usize, seed: u64) -> Result<ListAssignment, IoError> {
        self.validate()?;
        let lists = match self {
            ListPolicy::Explicit { path } => read_json(path)?,
            ListPolicy::Uniform { universe, l } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                ListAssignment::random(n, *l, *universe, &mut rng)
            }
            ListPolicy::Identical { l } => ListAssignment::identical(n, *l),
        };
        if lists.n() != n {
            return Err(EngineError::ListMismatch { lists: lists.n(), n }.into());
        }
        Ok(lists)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub graph: GraphSource,
    pub lists: ListPolicy,
    pub first_seed: u64,
    pub seeds: u64,
    /// Step budget; defaults to `64 n max(1, Δ)`.
    #[serde(default)]
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStat {
    pub seed: u64,
    pub steps: usize,
    pub outcome: Status,
    /// Whether the verifier accepted the final colouring (always false
    /// for exhausted runs with uncoloured vertices left).
    pub verified: bool,
}

/// One engine run per seed.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunStat>, IoError> {
    if spec.seeds == 0 {
        return Err(IoError::Invalid("seed range is empty".into()));
    }
    spec.lists.validate()?;
    let g = spec.graph.load()?;
    let budget = spec.budget.unwrap_or_else(|| default_budget(&g));
    (spec.first_seed..spec.first_seed + spec.seeds)
        .map(|seed| {
            let lists = spec.lists.materialize(g.n(), seed)?;
            let out = run(&g, &lists, seed, budget)?;
            let verified = out.is_success() && verify_facial_nonrepetitive(&g, &out.colouring).is_ok();
            Ok(RunStat {
                seed,
                steps: out.steps,
                outcome: out.status,
                verified,
            })
        })
        .collect()
}

pub fn write_stats_csv<W: Write>(w: W, stats: &[RunStat]) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(w);
    for s in stats {
        out.serialize(s)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_stats_csv<R: Read>(r: R) -> Result<Vec<RunStat>, IoError> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(IoError::from))
        .collect()
}

/// One row of the `analyze` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRow {
    pub delta: u64,
    pub m: usize,
    /// `a_1, .., a_m`, exact, in decimal.
    pub a: Vec<String>,
    /// `a_m / a_{m-1}`.
    pub ratio: f64,
    pub lambda0: Option<f64>,
    pub lambda1: Option<Complex64>,
    pub lambda2: Option<Complex64>,
    pub lambda0_squared: Option<f64>,
    pub l: Option<u64>,
    pub below_five_delta: Option<bool>,
    pub margin_certified: Option<bool>,
    pub chain_slack: Option<f64>,
    pub note: String,
}

pub fn analysis_table(deltas: std::ops::RangeInclusive<u64>, m_max: usize) -> Vec<AnalysisRow> {
    let m = m_max.max(2);
    deltas
        .map(|delta| {
            let a = a_sequence(Recurrence::ThreeTerm, m, delta);
            let mut row = AnalysisRow {
                delta,
                m,
                a: a.iter().map(|x| x.to_string()).collect(),
                ratio: big_ratio(&a[m - 1], &a[m - 2]),
                lambda0: None,
                lambda1: None,
                lambda2: None,
                lambda0_squared: None,
                l: None,
                below_five_delta: None,
                margin_certified: None,
                chain_slack: None,
                note: String::new(),
            };
            if let Ok(r) = char_roots(delta) {
                row.lambda0 = Some(r.lambda0);
                row.lambda1 = Some(r.lambda1);
                row.lambda2 = Some(r.lambda2);
                row.lambda0_squared = Some(r.lambda0 * r.lambda0);
            }
            match delta {
                0..=2 => {
                    row.note = "covered by the path (4) and cycle (5) list bounds".into();
                }
                3 => {
                    let r = char_roots(3).unwrap();
                    row.note = format!(
                        "lambda0 < 3.85: {}; lambda0^2 < 15: {}",
                        r.lambda0 < 3.85,
                        r.lambda0 * r.lambda0 < 15.0
                    );
                }
                _ => {
                    let s = list_size(delta).unwrap();
                    row.l = Some(s.l);
                    row.below_five_delta = Some(s.below_five_delta);
                    row.margin_certified = Some(s.margin_certified && s.ceiling_certified);
                    row.chain_slack = Some(s.chain_slack);
                }
            }
            row
        })
        .collect()
}

#[derive(Serialize)]
struct FlatRow<'a> {
    delta: u64,
    m: usize,
    a: String,
    ratio: f64,
    lambda0: Option<f64>,
    lambda1: Option<String>,
    lambda2: Option<String>,
    lambda0_squared: Option<f64>,
    l: Option<u64>,
    below_five_delta: Option<bool>,
    margin_certified: Option<bool>,
    chain_slack: Option<f64>,
    note: &'a str,
}

/// CSV form of the table; `a` is space separated and complex roots print
/// as `re+imi`.
pub fn write_analysis_csv<W: Write>(w: W, rows: &[AnalysisRow]) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(FlatRow {
            delta: r.delta,
            m: r.m,
            a: r.a.join(" "),
            ratio: r.ratio,
            lambda0: r.lambda0,
            lambda1: r.lambda1.map(|z| z.to_string()),
            lambda2: r.lambda2.map(|z| z.to_string()),
            lambda0_squared: r.lambda0_squared,
            l: r.l,
            below_five_delta: r.below_five_delta,
            margin_certified: r.margin_certified,
            chain_slack: r.chain_slack,
            note: &r.note,
        })?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}
