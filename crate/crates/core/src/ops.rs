//! The twelve concrete mutation operators.
//!
//! Every operator takes a parent tour and returns one offspring, leaving the
//! parent untouched. Position 0 (the start city) is never moved: positions
//! drawn at random come from `1..n`, and "circular" neighbourhoods wrap over
//! `1..n` rather than over the whole tour.
//!
//! Operators that cannot act on very small tours (fewer cities than their
//! neighbourhood needs) fall back to [`exchange`].

use alloc::vec::Vec;

use crate::draw::Draw;
use crate::instance::{NearestNeighborTable, TspInstance};
use crate::kind::MutationKind;
use crate::probes::{worst_gene_left, worst_gene_lr, worst_gene_pair};
use crate::tour::Tour;
use crate::{CityId, ConfigError};

/// Shared, read-only inputs of the operators.
#[derive(Debug, Clone, Copy)]
pub struct MutationContext<'a> {
    pub instance: &'a TspInstance,
    pub nn: &'a NearestNeighborTable,
    /// Half-width of the positional window around the nearest neighbour.
    pub window_radius: usize,
    /// How many random cities the insertion operators score.
    pub candidate_count: usize,
}

impl<'a> MutationContext<'a> {
    pub const DEFAULT_WINDOW_RADIUS: usize = 5;
    pub const DEFAULT_CANDIDATE_COUNT: usize = 5;

    pub fn new(instance: &'a TspInstance, nn: &'a NearestNeighborTable) -> Self {
        MutationContext {
            instance,
            nn,
            window_radius: Self::DEFAULT_WINDOW_RADIUS,
            candidate_count: Self::DEFAULT_CANDIDATE_COUNT,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.window_radius == 0 || self.candidate_count == 0 {
            return Err(ConfigError::ContextBounds);
        }
        Ok(())
    }

    fn n(&self) -> usize {
        self.instance.dimension()
    }
}

/// Applies a concrete operator. Panics for SBM and SAM, which need a pool
/// (see [`crate::strategy`]).
pub fn apply<D: Draw + ?Sized>(
    kind: MutationKind,
    parent: &Tour,
    ctx: &MutationContext<'_>,
    draws: &mut D,
) -> Tour {
    match kind {
        MutationKind::Exchange => exchange(parent, ctx, draws),
        MutationKind::Rearrangement => rearrangement(parent, ctx, draws),
        MutationKind::Wgwrgm => wgwrgm(parent, ctx, draws),
        MutationKind::Wgwwgm => wgwwgm(parent, ctx),
        MutationKind::Wlrgwrgm => wlrgwrgm(parent, ctx, draws),
        MutationKind::Wgwnnm => wgwnnm(parent, ctx, draws),
        MutationKind::Wgwwnnm => wgwwnnm(parent, ctx, draws),
        MutationKind::Wgibnnm => wgibnnm(parent, ctx, draws),
        MutationKind::Rgibnnm => rgibnnm(parent, ctx, draws),
        MutationKind::Swglm => swglm(parent, ctx),
        MutationKind::Ibrgbwgm => ibrgbwgm(parent, ctx, draws),
        MutationKind::Ibrgbrgm => ibrgbrgm(parent, ctx, draws),
        MutationKind::Sbm | MutationKind::Sam => {
            panic!("{kind} is a multi-operator strategy, not a concrete operator")
        }
    }
}

/// Uniform position in `1..n`.
fn random_position<D: Draw + ?Sized>(draws: &mut D, n: usize) -> usize {
    1 + draws.index(n - 1)
}

/// Uniform position in `1..n` other than `exclude`.
fn random_other_position<D: Draw + ?Sized>(draws: &mut D, n: usize, exclude: usize) -> usize {
    let p = 1 + draws.index(n - 2);
    if p >= exclude {
        p + 1
    } else {
        p
    }
}

/// Step `delta` places around the ring of positions `1..n`.
fn ring_step(pos: usize, delta: isize, n: usize) -> usize {
    let m = (n - 1) as isize;
    ((pos as isize - 1 + delta).rem_euclid(m) + 1) as usize
}

fn swapped(parent: &Tour, ctx: &MutationContext<'_>, a: usize, b: usize) -> Tour {
    let mut cities = parent.cities().to_vec();
    cities.swap(a, b);
    Tour::evaluate(ctx.instance, cities)
}

/// Removes the city at `from` and reinserts it right before `anchor`.
/// The city before the start city is the last one, so anchoring on city 0
/// appends.
fn moved_before(cities: &mut Vec<CityId>, from: usize, anchor: CityId) {
    let city = cities.remove(from);
    if anchor == 0 {
        cities.push(city);
    } else {
        let at = cities
            .iter()
            .position(|&c| c == anchor)
            .expect("anchor city present");
        cities.insert(at, city);
    }
}

/// Swaps two distinct random positions.
pub fn exchange<D: Draw + ?Sized>(parent: &Tour, ctx: &MutationContext<'_>, draws: &mut D) -> Tour {
    let n = ctx.n();
    let i = random_position(draws, n);
    let j = random_other_position(draws, n, i);
    swapped(parent, ctx, i, j)
}

/// Stand-in for the rearrangement baseline, whose exact procedure is not
/// pinned down: a random displacement. The city at a random position moves
/// to another random position and the cities in between shift by one.
pub fn rearrangement<D: Draw + ?Sized>(
    parent: &Tour,
    ctx: &MutationContext<'_>,
    draws: &mut D,
) -> Tour {
    let n = ctx.n();
    let from = random_position(draws, n);
    let to = random_other_position(draws, n, from);
    let mut cities = parent.cities().to_vec();
    let city = cities.remove(from);
    cities.insert(to, city);
    Tour::evaluate(ctx.instance, cities)
}

/// Worst gene by left edge, swapped with a random other gene.
pub fn wgwrgm<D: Draw + ?Sized>(parent: &Tour, ctx: &MutationContext<'_>, draws: &mut D) -> Tour {
    let w = worst_gene_left(parent, ctx.instance).index;
    let r = random_other_position(draws, ctx.n(), w);
    swapped(parent, ctx, w, r)
}

/// The two worst genes by left edge, swapped with each other.
pub fn wgwwgm(parent: &Tour, ctx: &MutationContext<'_>) -> Tour {
    let (a, b) = worst_gene_pair(parent, ctx.instance);
    swapped(parent, ctx, a.index, b.index)
}

/// Worst gene by left + right edges, swapped with a random other gene.
pub fn wlrgwrgm<D: Draw + ?Sized>(parent: &Tour, ctx: &MutationContext<'_>, draws: &mut D) -> Tour {
    let w = worst_gene_lr(parent, ctx.instance).index;
    let r = random_other_position(draws, ctx.n(), w);
    swapped(parent, ctx, w, r)
}

/// Worst position, the nearest city to the worst city, and the positions
/// within `window_radius` of that nearest city (excluding it and the worst
/// position), ascending.
struct NearWindow {
    worst: usize,
    nearest_city: CityId,
    candidates: Vec<usize>,
}

fn near_window(parent: &Tour, ctx: &MutationContext<'_>) -> NearWindow {
    let n = ctx.n();
    let w = worst_gene_lr(parent, ctx.instance).index;
    let nearest_city = ctx.nn.nearest(parent.cities()[w]);
    let ni = parent.position_of(nearest_city);
    let r = ctx.window_radius as isize;
    let mut candidates: Vec<usize> = if ni == 0 {
        // the start city sits outside the movable ring: walk the full tour
        (-r..=r)
            .map(|d| (d.rem_euclid(n as isize)) as usize)
            .filter(|&p| p != 0)
            .collect()
    } else {
        (-r..=r).map(|d| ring_step(ni, d, n)).collect()
    };
    candidates.sort_unstable();
    candidates.dedup();
    candidates.retain(|&p| p != ni && p != w);
    NearWindow {
        worst: w,
        nearest_city,
        candidates,
    }
}

/// Worst gene swapped with a random gene near its nearest city.
pub fn wgwnnm<D: Draw + ?Sized>(parent: &Tour, ctx: &MutationContext<'_>, draws: &mut D) -> Tour {
    if ctx.n() < 4 {
        return exchange(parent, ctx, draws);
    }
    let win = near_window(parent, ctx);
    let pick = win.candidates[draws.index(win.candidates.len())];
    swapped(parent, ctx, win.worst, pick)
}

/// Worst gene swapped with the gene near its nearest city that is furthest
/// from that nearest city.
pub fn wgwwnnm<D: Draw + ?Sized>(parent: &Tour, ctx: &MutationContext<'_>, draws: &mut D) -> Tour {
    if ctx.n() < 4 {
        return exchange(parent, ctx, draws);
    }
    let win = near_window(parent, ctx);
    let cities = parent.cities();
    let mut pick = win.candidates[0];
    let mut far = ctx.instance.distance(cities[pick], win.nearest_city);
    for &p in &win.candidates[1..] {
        let d = ctx.instance.distance(cities[p], win.nearest_city);
        if d > far {
            far = d;
            pick = p;
        }
    }
    swapped(parent, ctx, win.worst, pick)
}

fn insert_beside_nearest(parent: &Tour, ctx: &MutationContext<'_>, pos: usize) -> Tour {
    let mut cities = parent.cities().to_vec();
    let nearest = ctx.nn.nearest(cities[pos]);
    moved_before(&mut cities, pos, nearest);
    Tour::evaluate(ctx.instance, cities)
}

/// Worst gene (left + right edges) moved to just before its nearest city.
pub fn wgibnnm<D: Draw + ?Sized>(parent: &Tour, ctx: &MutationContext<'_>, draws: &mut D) -> Tour {
    if ctx.n() < 4 {
        return exchange(parent, ctx, draws);
    }
    let w = worst_gene_lr(parent, ctx.instance).index;
    insert_beside_nearest(parent, ctx, w)
}

/// Random gene moved to just before its nearest city.
pub fn rgibnnm<D: Draw + ?Sized>(parent: &Tour, ctx: &MutationContext<'_>, draws: &mut D) -> Tour {
    if ctx.n() < 4 {
        return exchange(parent, ctx, draws);
    }
    let p = random_position(draws, ctx.n());
    insert_beside_nearest(parent, ctx, p)
}

/// Swap worst gene locally: either swap the two genes left of the worst
/// gene, or swap the worst gene with its right neighbour, whichever gives
/// the shorter tour (the left swap on ties).
pub fn swglm(parent: &Tour, ctx: &MutationContext<'_>) -> Tour {
    let n = ctx.n();
    let w = worst_gene_lr(parent, ctx.instance).index;
    let l1 = ring_step(w, -1, n);
    let l2 = ring_step(l1, -1, n);
    let r1 = ring_step(w, 1, n);
    let right = swapped(parent, ctx, w, r1);
    if (l1.min(l2), l1.max(l2)) == (w.min(r1), w.max(r1)) {
        return right;
    }
    let left = swapped(parent, ctx, l1, l2);
    if left.length() > right.length() {
        right
    } else {
        left
    }
}

/// Scores up to `candidate_count` random cities by their distance to the
/// cities at `anchor` and `anchor - 1`, and moves the best one between them.
fn insert_best_before<D: Draw + ?Sized>(
    parent: &Tour,
    ctx: &MutationContext<'_>,
    draws: &mut D,
    anchor: usize,
) -> Tour {
    let n = ctx.n();
    let prev = anchor - 1;
    let excluded = |p: usize| p == anchor || p == prev;
    let eligible = (n - 1) - if prev >= 1 { 2 } else { 1 };
    if eligible == 0 {
        return exchange(parent, ctx, draws);
    }
    let want = ctx.candidate_count.min(eligible);
    let picks: Vec<usize> = if want == eligible {
        (1..n).filter(|&p| !excluded(p)).collect()
    } else {
        let mut picks = Vec::with_capacity(want);
        while picks.len() < want {
            let p = random_position(draws, n);
            if !excluded(p) && !picks.contains(&p) {
                picks.push(p);
            }
        }
        picks
    };

    let cities = parent.cities();
    let (worst_city, prev_city) = (cities[anchor], cities[prev]);
    let score = |p: usize| {
        ctx.instance.distance(cities[p], worst_city) + ctx.instance.distance(cities[p], prev_city)
    };
    let mut best = picks[0];
    let mut best_score = score(best);
    for &p in &picks[1..] {
        let s = score(p);
        if s < best_score {
            best = p;
            best_score = s;
        }
    }

    let mut out = cities.to_vec();
    let city = out.remove(best);
    let at = if best > anchor { anchor } else { anchor - 1 };
    out.insert(at, city);
    Tour::evaluate(ctx.instance, out)
}

/// Best of a few random cities inserted before the worst gene (left edge).
pub fn ibrgbwgm<D: Draw + ?Sized>(parent: &Tour, ctx: &MutationContext<'_>, draws: &mut D) -> Tour {
    let w = worst_gene_left(parent, ctx.instance).index;
    insert_best_before(parent, ctx, draws, w)
}

/// Best of a few random cities inserted before a random gene at position
/// `2..n`.
pub fn ibrgbrgm<D: Draw + ?Sized>(parent: &Tour, ctx: &MutationContext<'_>, draws: &mut D) -> Tour {
    let n = ctx.n();
    let anchor = 2 + draws.index(n - 2);
    insert_best_before(parent, ctx, draws, anchor)
}
