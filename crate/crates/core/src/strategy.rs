//! Multi-operator strategies: SBM (select best mutation) and SAM (select
//! any mutation), plus the selection tallies they keep.

use alloc::vec::Vec;

use thiserror::Error;

use crate::draw::Draw;
use crate::error::ConfigError;
use crate::ga::{contains_genotype, Population};
use crate::kind::MutationKind;
use crate::ops::{self, MutationContext};
use crate::tour::Tour;

/// Ordered, non-empty list of concrete operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorPool {
    kinds: Vec<MutationKind>,
}

impl OperatorPool {
    pub fn new(kinds: Vec<MutationKind>) -> Result<Self, ConfigError> {
        if kinds.is_empty() {
            return Err(ConfigError::EmptyPool);
        }
        if let Some(k) = kinds.iter().find(|k| k.is_meta()) {
            return Err(ConfigError::MetaInPool(k.name()));
        }
        Ok(OperatorPool { kinds })
    }

    /// All twelve concrete operators, baselines included.
    pub fn full12() -> Self {
        OperatorPool {
            kinds: MutationKind::CONCRETE.to_vec(),
        }
    }

    /// Only the ten worst-gene / nearest-neighbour operators.
    pub fn strict10() -> Self {
        OperatorPool {
            kinds: MutationKind::PROPOSED.to_vec(),
        }
    }

    pub fn kinds(&self) -> &[MutationKind] {
        &self.kinds
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }
}

impl Default for OperatorPool {
    fn default() -> Self {
        OperatorPool::full12()
    }
}

/// How often each concrete operator produced the emitted offspring (SBM)
/// or was drawn (SAM).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelectionStats {
    counts: [u64; 12],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no operator selections were recorded")]
pub struct EmptyReport;

impl SelectionStats {
    /// Counts in [`MutationKind::CONCRETE`] order.
    pub fn from_counts(counts: [u64; 12]) -> Self {
        SelectionStats { counts }
    }

    pub fn record(&mut self, kind: MutationKind) {
        let slot = kind
            .concrete_index()
            .expect("only concrete operators are tallied");
        self.counts[slot] += 1;
    }

    pub fn count(&self, kind: MutationKind) -> u64 {
        kind.concrete_index().map_or(0, |i| self.counts[i])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&mut self, other: &SelectionStats) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }

    /// `(operator, count)` for all twelve concrete operators.
    pub fn iter(&self) -> impl Iterator<Item = (MutationKind, u64)> + '_ {
        MutationKind::CONCRETE.into_iter().zip(self.counts)
    }
}

/// Percentage of selections per concrete operator.
pub fn selection_report(stats: &SelectionStats) -> Result<Vec<(MutationKind, f64)>, EmptyReport> {
    let total = stats.total();
    if total == 0 {
        return Err(EmptyReport);
    }
    Ok(stats
        .iter()
        .map(|(k, c)| (k, 100.0 * c as f64 / total as f64))
        .collect())
}

/// One SBM candidate.
#[derive(Debug, Clone)]
pub struct SbmCandidate {
    pub kind: MutationKind,
    pub tour: Tour,
    pub in_population: bool,
}

/// Every offspring an SBM invocation produced and which one it emitted.
#[derive(Debug, Clone)]
pub struct SbmOutcome {
    pub candidates: Vec<SbmCandidate>,
    pub winner: usize,
}

impl SbmOutcome {
    pub fn offspring(&self) -> &Tour {
        &self.candidates[self.winner].tour
    }

    pub fn winner_kind(&self) -> MutationKind {
        self.candidates[self.winner].kind
    }

    pub fn into_offspring(mut self) -> Tour {
        self.candidates.swap_remove(self.winner).tour
    }
}

/// Select best mutation.
///
/// Every pool operator mutates `parent` in pool order (sharing `draws`).
/// The shortest offspring not already present in `pop` wins, earlier pool
/// entries winning ties. When every offspring is already present the
/// shortest one is emitted anyway.
pub fn sbm_mutate<D: Draw + ?Sized>(
    parent: &Tour,
    pool: &OperatorPool,
    pop: &Population,
    ctx: &MutationContext<'_>,
    draws: &mut D,
    stats: &mut SelectionStats,
) -> SbmOutcome {
    let candidates: Vec<SbmCandidate> = pool
        .kinds()
        .iter()
        .map(|&kind| {
            let tour = ops::apply(kind, parent, ctx, draws);
            let in_population = contains_genotype(pop, &tour);
            SbmCandidate {
                kind,
                tour,
                in_population,
            }
        })
        .collect();

    let shortest = |fresh_only: bool| {
        candidates
            .iter()
            .enumerate()
            .filter(|(_, c)| !fresh_only || !c.in_population)
            .min_by_key(|(i, c)| (c.tour.length(), *i))
            .map(|(i, _)| i)
    };
    let winner = shortest(true)
        .or_else(|| shortest(false))
        .expect("pool is non-empty");
    stats.record(candidates[winner].kind);
    SbmOutcome { candidates, winner }
}

/// Select any mutation: one pool operator drawn uniformly at random.
pub fn sam_mutate<D: Draw + ?Sized>(
    parent: &Tour,
    pool: &OperatorPool,
    ctx: &MutationContext<'_>,
    draws: &mut D,
    stats: &mut SelectionStats,
) -> (MutationKind, Tour) {
    let kind = pool.kinds()[draws.index(pool.len())];
    stats.record(kind);
    (kind, ops::apply(kind, parent, ctx, draws))
}
