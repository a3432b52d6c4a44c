use alloc::vec::Vec;

use crate::draw::{Draw, RngStream};
use crate::error::ConfigError;
use crate::instance::TspInstance;
use crate::kind::MutationKind;
use crate::ops::{self, MutationContext};
use crate::strategy::{sam_mutate, sbm_mutate, OperatorPool, SbmOutcome, SelectionStats};
use crate::tour::Tour;

/// Run parameters. Defaults follow the reference protocol: 100 tours,
/// 1600 generations, every member mutated each generation, no crossover.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub mutation_probability: f64,
    /// Always 0: the engine has no crossover.
    pub crossover_probability: f64,
    pub operator: MutationKind,
    /// Operators available to SBM and SAM. Ignored by concrete operators.
    pub pool: OperatorPool,
    pub seed: u64,
    pub window_radius: usize,
    pub candidate_count: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            generations: 1600,
            mutation_probability: 1.0,
            crossover_probability: 0.0,
            operator: MutationKind::Sbm,
            pool: OperatorPool::full12(),
            seed: 0,
            window_radius: MutationContext::DEFAULT_WINDOW_RADIUS,
            candidate_count: MutationContext::DEFAULT_CANDIDATE_COUNT,
        }
    }
}

impl GaConfig {
    /// Survivors per generation; always the population size.
    pub fn elite_keep(&self) -> usize {
        self.population_size
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population_size == 0 {
            return Err(ConfigError::EmptyPopulation);
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return Err(ConfigError::MutationProbability(self.mutation_probability));
        }
        if self.crossover_probability != 0.0 {
            return Err(ConfigError::Crossover(self.crossover_probability));
        }
        if self.window_radius == 0 || self.candidate_count == 0 {
            return Err(ConfigError::ContextBounds);
        }
        // re-check in case the pool was built by hand
        OperatorPool::new(self.pool.kinds().to_vec()).map(|_| ())
    }
}

/// Tours sorted ascending by length; `members()[0]` is the best.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    members: Vec<Tour>,
}

impl Population {
    /// Sorts `members` by length, keeping the given order among equals.
    pub fn from_members(mut members: Vec<Tour>) -> Self {
        members.sort_by_key(Tour::length);
        Population { members }
    }

    pub fn members(&self) -> &[Tour] {
        &self.members
    }

    pub fn best(&self) -> &Tour {
        &self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mean_length(&self) -> f64 {
        let sum: u64 = self.members.iter().map(Tour::length).sum();
        sum as f64 / self.members.len() as f64
    }
}

/// Whether some member has exactly the same city sequence as `tour`.
pub fn contains_genotype(pop: &Population, tour: &Tour) -> bool {
    pop.members
        .iter()
        .any(|m| m.length() == tour.length() && m.cities() == tour.cities())
}

/// Per-generation summary.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStat {
    pub best: u64,
    pub mean: f64,
    pub selections: SelectionStats,
}

/// Hook into every SBM invocation, for auditing.
pub trait SbmObserver {
    /// Called with the population the offspring was checked against.
    fn sbm_invocation(&mut self, pop: &Population, parent: &Tour, outcome: &SbmOutcome);
}

/// Observer that does nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoObserver;

impl SbmObserver for NoObserver {
    fn sbm_invocation(&mut self, _: &Population, _: &Tour, _: &SbmOutcome) {}
}

/// `population_size` tours, each city 0 followed by a uniform random
/// permutation of the remaining cities.
pub fn init_population<D: Draw + ?Sized>(
    inst: &TspInstance,
    cfg: &GaConfig,
    draws: &mut D,
) -> Population {
    let n = inst.dimension();
    let members = (0..cfg.population_size)
        .map(|_| {
            let mut cities: Vec<usize> = (0..n).collect();
            // Fisher-Yates over positions 1..n
            for i in (2..n).rev() {
                let j = 1 + draws.index(i);
                cities.swap(i, j);
            }
            Tour::evaluate(inst, cities)
        })
        .collect();
    Population::from_members(members)
}

/// One generation: each member (in rank order) produces an offspring with
/// probability `mutation_probability`; the best `elite_keep` of parents and
/// offspring survive. Equal lengths keep parents ahead of offspring and
/// otherwise preserve order.
pub fn step_generation<D: Draw + ?Sized, O: SbmObserver + ?Sized>(
    pop: Population,
    ctx: &MutationContext<'_>,
    cfg: &GaConfig,
    draws: &mut D,
    observer: &mut O,
) -> (Population, GenerationStat) {
    let mut selections = SelectionStats::default();
    let mut offspring = Vec::with_capacity(pop.len());
    for parent in pop.members() {
        if !draws.chance(cfg.mutation_probability) {
            continue;
        }
        let child = match cfg.operator {
            MutationKind::Sbm => {
                let outcome = sbm_mutate(parent, &cfg.pool, &pop, ctx, draws, &mut selections);
                observer.sbm_invocation(&pop, parent, &outcome);
                outcome.into_offspring()
            }
            MutationKind::Sam => sam_mutate(parent, &cfg.pool, ctx, draws, &mut selections).1,
            kind => {
                selections.record(kind);
                ops::apply(kind, parent, ctx, draws)
            }
        };
        offspring.push(child);
    }

    let mut pool = pop.members;
    pool.extend(offspring);
    pool.sort_by_key(Tour::length);
    pool.truncate(cfg.elite_keep());
    let next = Population { members: pool };
    let stat = GenerationStat {
        best: next.best().length(),
        mean: next.mean_length(),
        selections,
    };
    (next, stat)
}

/// Everything a run produced except timing.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    /// Best length of the initial population.
    pub initial_best: u64,
    /// Best length after each generation `1..=generations`.
    pub best_per_generation: Vec<u64>,
    pub mean_per_generation: Vec<f64>,
    pub final_best: Tour,
    /// Operator tallies over the whole run.
    pub selections: SelectionStats,
}

/// Runs the GA on `inst`. The random stream is derived from
/// `(cfg.seed, replicate)`.
pub fn run_ga(inst: &TspInstance, cfg: &GaConfig, replicate: u64) -> Result<RunTrace, ConfigError> {
    run_ga_observed(inst, cfg, replicate, &mut NoObserver)
}

pub fn run_ga_observed<O: SbmObserver + ?Sized>(
    inst: &TspInstance,
    cfg: &GaConfig,
    replicate: u64,
    observer: &mut O,
) -> Result<RunTrace, ConfigError> {
    let nn = inst.nearest_neighbor_table();
    let ctx = MutationContext {
        window_radius: cfg.window_radius,
        candidate_count: cfg.candidate_count,
        ..MutationContext::new(inst, &nn)
    };
    run_ga_with(&ctx, cfg, replicate, observer)
}

/// As [`run_ga`], reusing a prepared context (and its nearest-neighbour
/// table). The context's window and candidate settings win over `cfg`'s.
pub fn run_ga_with<O: SbmObserver + ?Sized>(
    ctx: &MutationContext<'_>,
    cfg: &GaConfig,
    replicate: u64,
    observer: &mut O,
) -> Result<RunTrace, ConfigError> {
    cfg.validate()?;
    ctx.validate()?;
    let mut rng = RngStream::new(cfg.seed, replicate);
    let mut pop = init_population(ctx.instance, cfg, &mut rng);
    let initial_best = pop.best().length();
    let mut best_per_generation = Vec::with_capacity(cfg.generations);
    let mut mean_per_generation = Vec::with_capacity(cfg.generations);
    let mut selections = SelectionStats::default();
    for _ in 0..cfg.generations {
        let (next, stat) = step_generation(pop, ctx, cfg, &mut rng, observer);
        pop = next;
        best_per_generation.push(stat.best);
        mean_per_generation.push(stat.mean);
        selections.merge(&stat.selections);
    }
    Ok(RunTrace {
        initial_best,
        best_per_generation,
        mean_per_generation,
        final_best: pop.members.swap_remove(0),
        selections,
    })
}
