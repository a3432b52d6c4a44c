use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Source of the random choices made by operators and the GA loop.
///
/// Operators only ever ask for uniform indices, which keeps their random
/// behaviour replayable from a list of pinned values.
pub trait Draw {
    /// Uniform integer in `0..bound`. `bound` is never 0.
    fn index(&mut self, bound: usize) -> usize;

    /// Bernoulli trial with success probability `p`.
    fn chance(&mut self, p: f64) -> bool;
}

impl<D: Draw + ?Sized> Draw for &mut D {
    fn index(&mut self, bound: usize) -> usize {
        (**self).index(bound)
    }

    fn chance(&mut self, p: f64) -> bool {
        (**self).chance(p)
    }
}

/// Deterministic pseudo-random stream for one (seed, replicate) pair.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, replicate: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replicate);
        RngStream { rng }
    }
}

impl Draw for RngStream {
    #[inline]
    fn index(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        self.rng.random_range(0..bound)
    }

    fn chance(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.rng.random_bool(p)
        }
    }
}

/// Replays a fixed list of indices, for pinning operator choices in tests.
///
/// Panics when the script runs out or a value does not fit the requested
/// bound. Fractional `chance` calls are not supported.
#[cfg(any(test, feature = "draw-injection"))]
#[derive(Debug, Clone, Default)]
pub struct ScriptedDraws {
    values: alloc::collections::VecDeque<usize>,
}

#[cfg(any(test, feature = "draw-injection"))]
impl ScriptedDraws {
    pub fn new(values: impl IntoIterator<Item = usize>) -> Self {
        ScriptedDraws {
            values: values.into_iter().collect(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.values.len()
    }
}

#[cfg(any(test, feature = "draw-injection"))]
impl Draw for ScriptedDraws {
    fn index(&mut self, bound: usize) -> usize {
        let v = self.values.pop_front().expect("scripted draws exhausted");
        assert!(v < bound, "scripted draw {v} does not fit bound {bound}");
        v
    }

    fn chance(&mut self, p: f64) -> bool {
        assert!(
            p <= 0.0 || p >= 1.0,
            "scripted draws cannot answer chance({p})"
        );
        p >= 1.0
    }
}
