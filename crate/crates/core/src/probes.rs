//! Worst-gene searches shared by the operators.
//!
//! Position 0 holds the fixed start city and is never reported. Ties always
//! go to the smaller position.

use crate::instance::TspInstance;
use crate::tour::Tour;

/// A position in `1..n` and the distance quantity that made it the worst.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorstGeneProbe {
    pub index: usize,
    pub contribution: u64,
}

/// Position whose edge to its left neighbour is longest.
pub fn worst_gene_left(tour: &Tour, inst: &TspInstance) -> WorstGeneProbe {
    let c = tour.cities();
    let mut best = WorstGeneProbe {
        index: 1,
        contribution: inst.distance(c[0], c[1]),
    };
    for i in 2..c.len() {
        let d = inst.distance(c[i - 1], c[i]);
        if d > best.contribution {
            best = WorstGeneProbe {
                index: i,
                contribution: d,
            };
        }
    }
    best
}

/// The two positions with the longest left edges, worst first.
///
/// Needs `n >= 3`; the operators using it require `n >= 4`.
pub fn worst_gene_pair(tour: &Tour, inst: &TspInstance) -> (WorstGeneProbe, WorstGeneProbe) {
    let c = tour.cities();
    assert!(c.len() >= 3, "worst_gene_pair needs two movable positions");
    let probe = |i: usize| WorstGeneProbe {
        index: i,
        contribution: inst.distance(c[i - 1], c[i]),
    };
    let (mut first, mut second) = {
        let (a, b) = (probe(1), probe(2));
        if b.contribution > a.contribution {
            (b, a)
        } else {
            (a, b)
        }
    };
    for i in 3..c.len() {
        let p = probe(i);
        if p.contribution > first.contribution {
            second = first;
            first = p;
        } else if p.contribution > second.contribution {
            second = p;
        }
    }
    (first, second)
}

/// Position whose left plus right edges are longest, wrapping at the end of
/// the tour.
pub fn worst_gene_lr(tour: &Tour, inst: &TspInstance) -> WorstGeneProbe {
    let c = tour.cities();
    let n = c.len();
    let mut best = WorstGeneProbe {
        index: 0,
        contribution: 0,
    };
    let mut left = inst.distance(c[0], c[1]);
    for i in 1..n {
        let right = inst.distance(c[i], c[(i + 1) % n]);
        let total = left + right;
        if best.index == 0 || total > best.contribution {
            best = WorstGeneProbe {
                index: i,
                contribution: total,
            };
        }
        left = right;
    }
    best
}
