//! A mutation-driven genetic algorithm for the symmetric travelling salesman
//! problem.
//!
//! The engine evolves a population of tours using mutation only: every
//! member produces one offspring per generation and the best `k` of parents
//! and offspring survive. Twelve concrete mutation operators are provided,
//! ten of which target the "worst gene" of a tour (the city contributing the
//! most distance) or move cities next to their nearest neighbour. Two
//! multi-operator strategies sit on top of them:
//!
//!  - **SBM** applies every operator of a pool and keeps the shortest
//!    offspring that is not already in the population.
//!  - **SAM** draws one operator of the pool uniformly at random.
//!
//! The crate is `no_std` (it needs `alloc`). File parsing, timing and
//! reporting live in the `mmga-bench` companion crate.
//!
//! ```
//! use mmga_core::{GaConfig, MutationKind, Metric, TspInstance, run_ga};
//!
//! let inst = TspInstance::new(
//!     "square",
//!     vec![(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0), (5.0, 12.0)],
//!     Metric::Euc2d,
//! )
//! .unwrap();
//! let cfg = GaConfig {
//!     population_size: 8,
//!     generations: 20,
//!     operator: MutationKind::Sam,
//!     ..GaConfig::default()
//! };
//! let trace = run_ga(&inst, &cfg, 0).unwrap();
//! assert_eq!(trace.best_per_generation.len(), 20);
//! assert!(trace.final_best.length() <= trace.initial_best);
//! ```

#![no_std]

extern crate alloc;

mod draw;
mod error;
mod ga;
mod instance;
mod kind;
pub mod ops;
pub mod probes;
pub mod strategy;
mod tour;

#[cfg(any(test, feature = "draw-injection"))]
pub use draw::ScriptedDraws;
pub use draw::{Draw, RngStream};
pub use error::{ConfigError, InstanceError, TourError};
pub use ga::{
    contains_genotype, init_population, run_ga, run_ga_observed, run_ga_with, step_generation,
    GaConfig, GenerationStat, NoObserver, Population, RunTrace, SbmObserver,
};
pub use instance::{Metric, NearestNeighborTable, TspInstance};
pub use kind::{MutationKind, UnknownMutationKind};
pub use ops::MutationContext;
pub use probes::WorstGeneProbe;
pub use strategy::{OperatorPool, SbmOutcome, SelectionStats};
pub use tour::Tour;

/// City identifier: 0-based index into the instance's coordinate list.
pub type CityId = usize;
