//! Experiment specification and the replicate sweep.

use std::path::{Path, PathBuf};
use std::time::Instant;

use mmga_core::ops::MutationContext;
use mmga_core::strategy::{OperatorPool, SelectionStats};
use mmga_core::{
    run_ga_with, ConfigError, GaConfig, MutationKind, NoObserver, SbmObserver, TspInstance,
};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::optima::benchmark_names;
use crate::tsplib::{load_tsplib, TsplibError};

/// Environment variable that overrides the output directory.
pub const OUT_DIR_ENV: &str = "MMGA_OUT";
pub const DEFAULT_DATA_DIR: &str = "data/tsplib";
pub const DEFAULT_OUT_DIR: &str = "results";
pub const DESK_INSTANCES: [&str; 3] = ["eil51", "berlin52", "ch130"];

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown key `{key}` on line {line}")]
    UnknownKey { line: usize, key: String },
    #[error("no instances given")]
    NoInstances,
    #[error("operator list is empty")]
    NoOperators,
    #[error("replicates must be at least 1")]
    NoReplicates,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Instance(#[from] TsplibError),
}

/// A full sweep: every operator on every instance, `replicates` times.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub instances: Vec<PathBuf>,
    pub operators: Vec<MutationKind>,
    pub replicates: usize,
    /// Shared run settings. `ga.seed` is the base seed and `ga.operator` is
    /// replaced per run.
    pub ga: GaConfig,
    pub out_dir: PathBuf,
}

impl ExperimentSpec {
    /// Eil51, berlin52 and ch130, all operators, 10 replicates.
    pub fn desk(data_dir: &Path) -> Self {
        ExperimentSpec {
            instances: instance_paths(data_dir, DESK_INSTANCES),
            ..ExperimentSpec::full(data_dir)
        }
    }

    /// All thirteen benchmark instances, all operators, 10 replicates.
    pub fn full(data_dir: &Path) -> Self {
        ExperimentSpec {
            instances: instance_paths(data_dir, benchmark_names()),
            operators: MutationKind::ALL.to_vec(),
            replicates: 10,
            ga: GaConfig::default(),
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.instances.is_empty() {
            return Err(SpecError::NoInstances);
        }
        if self.operators.is_empty() {
            return Err(SpecError::NoOperators);
        }
        if self.replicates == 0 {
            return Err(SpecError::NoReplicates);
        }
        self.ga.validate()?;
        Ok(())
    }
}

fn instance_paths<'a>(data_dir: &Path, names: impl IntoIterator<Item = &'a str>) -> Vec<PathBuf> {
    names
        .into_iter()
        .map(|n| data_dir.join(format!("{n}.tsp")))
        .collect()
}

/// Settings gathered from a spec file and/or command-line flags. Unset
/// fields fall back to the preset chosen by `desk`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpecOverrides {
    pub instances: Vec<PathBuf>,
    pub operators: Option<Vec<MutationKind>>,
    pub replicates: Option<usize>,
    pub generations: Option<usize>,
    pub population: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub pool: Option<OperatorPool>,
    pub desk: bool,
    pub data_dir: Option<PathBuf>,
}

impl SpecOverrides {
    /// Parses the flat `key = value` format. Keys mirror the CLI flags;
    /// `instance` may repeat, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut o = SpecOverrides::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| SpecError::Syntax {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            o.set(key.trim(), value.trim()).map_err(|e| match e {
                SetError::Unknown => SpecError::UnknownKey {
                    line: line_no,
                    key: key.trim().to_owned(),
                },
                SetError::Value(message) => SpecError::Syntax {
                    line: line_no,
                    message,
                },
            })?;
        }
        Ok(o)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), SetError> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, SetError> {
            value.parse().map_err(|_| {
                SetError::Value(format!(
                    "`{key}` needs a non-negative integer, got `{value}`"
                ))
            })
        }
        match key {
            "instance" => self.instances.extend(
                value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from),
            ),
            "operators" => self.operators = Some(parse_operators(value).map_err(SetError::Value)?),
            "replicates" => self.replicates = Some(num(key, value)?),
            "generations" => self.generations = Some(num(key, value)?),
            "population" => self.population = Some(num(key, value)?),
            "seed" => self.seed = Some(num(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "pool" => self.pool = Some(parse_pool(value).map_err(SetError::Value)?),
            "desk" => {
                self.desk = match value {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => {
                        return Err(SetError::Value(format!(
                            "`desk` needs true or false, got `{value}`"
                        )))
                    }
                }
            }
            "data_dir" => self.data_dir = Some(PathBuf::from(value)),
            _ => return Err(SetError::Unknown),
        }
        Ok(())
    }

    /// Layers `other` on top of `self`: set fields of `other` win, instance
    /// lists replace rather than append.
    pub fn merged(mut self, other: SpecOverrides) -> Self {
        if !other.instances.is_empty() {
            self.instances = other.instances;
        }
        self.operators = other.operators.or(self.operators);
        self.replicates = other.replicates.or(self.replicates);
        self.generations = other.generations.or(self.generations);
        self.population = other.population.or(self.population);
        self.seed = other.seed.or(self.seed);
        self.out = other.out.or(self.out);
        self.pool = other.pool.or(self.pool);
        self.desk |= other.desk;
        self.data_dir = other.data_dir.or(self.data_dir);
        self
    }

    /// Resolves into a validated spec. `env_out` (the value of
    /// [`OUT_DIR_ENV`], if any) beats the `out` setting.
    pub fn into_spec(self, env_out: Option<PathBuf>) -> Result<ExperimentSpec, SpecError> {
        let data_dir = self
            .data_dir
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR));
        let mut spec = if self.desk {
            ExperimentSpec::desk(&data_dir)
        } else {
            ExperimentSpec::full(&data_dir)
        };
        if !self.instances.is_empty() {
            spec.instances = self.instances;
        }
        if let Some(ops) = self.operators {
            spec.operators = ops;
        }
        if let Some(r) = self.replicates {
            spec.replicates = r;
        }
        if let Some(g) = self.generations {
            spec.ga.generations = g;
        }
        if let Some(p) = self.population {
            spec.ga.population_size = p;
        }
        if let Some(s) = self.seed {
            spec.ga.seed = s;
        }
        if let Some(pool) = self.pool {
            spec.ga.pool = pool;
        }
        if let Some(out) = env_out.or(self.out) {
            spec.out_dir = out;
        }
        spec.validate()?;
        Ok(spec)
    }
}

enum SetError {
    Unknown,
    Value(String),
}

/// Comma-separated operator names, or `all`.
pub fn parse_operators(list: &str) -> Result<Vec<MutationKind>, String> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(MutationKind::ALL.to_vec());
    }
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<MutationKind>().map_err(|e| e.to_string()))
        .collect()
}

pub fn parse_pool(name: &str) -> Result<OperatorPool, String> {
    match name.trim() {
        "full12" => Ok(OperatorPool::full12()),
        "strict10" => Ok(OperatorPool::strict10()),
        other => Err(format!(
            "unknown pool `{other}` (expected full12 or strict10)"
        )),
    }
}

/// Seed of one run, from a hash of everything that identifies it.
pub fn derive_seed(base: u64, instance: &str, operator: MutationKind, replicate: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(base.to_le_bytes());
    h.update(instance.as_bytes());
    h.update([0]);
    h.update(operator.name().as_bytes());
    h.update([0]);
    h.update((replicate as u64).to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

/// Outcome of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub operator: MutationKind,
    pub replicate: usize,
    pub seed: u64,
    pub initial_best: u64,
    /// Best length after each generation. Empty when loaded from `runs.csv`.
    pub best_series: Vec<u64>,
    pub final_length: u64,
    pub final_tour: Vec<usize>,
    pub wall_ms: f64,
    /// Present for SBM and SAM only.
    pub selections: Option<SelectionStats>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    /// Instance names in spec order.
    pub instances: Vec<String>,
    pub operators: Vec<MutationKind>,
    pub generations: usize,
    /// Ordered by instance, then operator, then replicate.
    pub records: Vec<RunRecord>,
}

/// Runs every (instance, operator, replicate) triple, concurrently.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult, ExperimentError> {
    run_experiment_observed(spec, |_, _, _| NoObserver).map(|(result, _)| result)
}

/// As [`run_experiment`], giving every run its own observer built by
/// `make_observer(instance, operator, replicate)`. Observers come back in
/// record order.
pub fn run_experiment_observed<O, F>(
    spec: &ExperimentSpec,
    make_observer: F,
) -> Result<(ExperimentResult, Vec<O>), ExperimentError>
where
    O: SbmObserver + Send,
    F: Fn(&str, MutationKind, usize) -> O + Sync,
{
    spec.validate()?;
    let instances = spec
        .instances
        .iter()
        .map(|p| load_tsplib(p))
        .collect::<Result<Vec<TspInstance>, _>>()?;
    let tables: Vec<_> = instances
        .iter()
        .map(|i| i.nearest_neighbor_table())
        .collect();

    let jobs: Vec<(usize, MutationKind, usize)> = (0..instances.len())
        .flat_map(|i| {
            spec.operators
                .iter()
                .flat_map(move |&op| (0..spec.replicates).map(move |r| (i, op, r)))
        })
        .collect();

    let outcomes: Vec<(RunRecord, O)> = jobs
        .into_par_iter()
        .map(|(i, operator, replicate)| {
            let inst = &instances[i];
            let ctx = MutationContext {
                window_radius: spec.ga.window_radius,
                candidate_count: spec.ga.candidate_count,
                ..MutationContext::new(inst, &tables[i])
            };
            let seed = derive_seed(spec.ga.seed, inst.name(), operator, replicate);
            let cfg = GaConfig {
                operator,
                seed,
                ..spec.ga.clone()
            };
            let mut observer = make_observer(inst.name(), operator, replicate);
            let start = Instant::now();
            let trace = run_ga_with(&ctx, &cfg, replicate as u64, &mut observer)
                .expect("configuration validated above");
            let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
            let record = RunRecord {
                instance: inst.name().to_owned(),
                operator,
                replicate,
                seed,
                initial_best: trace.initial_best,
                best_series: trace.best_per_generation,
                final_length: trace.final_best.length(),
                final_tour: trace.final_best.into_cities(),
                wall_ms,
                selections: operator.is_meta().then_some(trace.selections),
            };
            (record, observer)
        })
        .collect();

    let (records, observers) = outcomes.into_iter().unzip();
    Ok((
        ExperimentResult {
            instances: instances.iter().map(|i| i.name().to_owned()).collect(),
            operators: spec.operators.clone(),
            generations: spec.ga.generations,
            records,
        },
        observers,
    ))
}
