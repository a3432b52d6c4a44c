use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// Identity of a mutation operator or multi-operator strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MutationKind {
    /// Swap two random genes.
    Exchange,
    /// Move a random gene to a random new position (a stand-in, see
    /// [`crate::ops::rearrangement`]).
    Rearrangement,
    /// Worst gene (by left edge) swapped with a random gene.
    Wgwrgm,
    /// Two worst genes (by left edge) swapped with each other.
    Wgwwgm,
    /// Worst gene (by left + right edges) swapped with a random gene.
    Wlrgwrgm,
    /// Worst gene swapped with a random gene near its nearest neighbour.
    Wgwnnm,
    /// Worst gene swapped with the gene near its nearest neighbour that lies
    /// furthest from that neighbour.
    Wgwwnnm,
    /// Worst gene moved next to its nearest neighbour.
    Wgibnnm,
    /// Random gene moved next to its nearest neighbour.
    Rgibnnm,
    /// Better of two local swaps around the worst gene.
    Swglm,
    /// Best of a few random genes inserted before the worst gene.
    Ibrgbwgm,
    /// Best of a few random genes inserted before a random gene.
    Ibrgbrgm,
    /// Select best mutation: run a pool of operators, keep the best new child.
    Sbm,
    /// Select any mutation: run one operator drawn uniformly from a pool.
    Sam,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown mutation operator `{0}`")]
pub struct UnknownMutationKind(pub alloc::string::String);

impl MutationKind {
    pub const ALL: [MutationKind; 14] = [
        MutationKind::Exchange,
        MutationKind::Rearrangement,
        MutationKind::Wgwrgm,
        MutationKind::Wgwwgm,
        MutationKind::Wlrgwrgm,
        MutationKind::Wgwnnm,
        MutationKind::Wgwwnnm,
        MutationKind::Wgibnnm,
        MutationKind::Rgibnnm,
        MutationKind::Swglm,
        MutationKind::Ibrgbwgm,
        MutationKind::Ibrgbrgm,
        MutationKind::Sbm,
        MutationKind::Sam,
    ];

    /// The twelve concrete operators, baselines first.
    pub const CONCRETE: [MutationKind; 12] = [
        MutationKind::Exchange,
        MutationKind::Rearrangement,
        MutationKind::Wgwrgm,
        MutationKind::Wgwwgm,
        MutationKind::Wlrgwrgm,
        MutationKind::Wgwnnm,
        MutationKind::Wgwwnnm,
        MutationKind::Wgibnnm,
        MutationKind::Rgibnnm,
        MutationKind::Swglm,
        MutationKind::Ibrgbwgm,
        MutationKind::Ibrgbrgm,
    ];

    /// The ten worst-gene / nearest-neighbour operators, without baselines.
    pub const PROPOSED: [MutationKind; 10] = [
        MutationKind::Wgwrgm,
        MutationKind::Wgwwgm,
        MutationKind::Wlrgwrgm,
        MutationKind::Wgwnnm,
        MutationKind::Wgwwnnm,
        MutationKind::Wgibnnm,
        MutationKind::Rgibnnm,
        MutationKind::Swglm,
        MutationKind::Ibrgbwgm,
        MutationKind::Ibrgbrgm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutationKind::Exchange => "Exchange",
            MutationKind::Rearrangement => "Rearrangement",
            MutationKind::Wgwrgm => "WGWRGM",
            MutationKind::Wgwwgm => "WGWWGM",
            MutationKind::Wlrgwrgm => "WLRGWRGM",
            MutationKind::Wgwnnm => "WGWNNM",
            MutationKind::Wgwwnnm => "WGWWNNM",
            MutationKind::Wgibnnm => "WGIBNNM",
            MutationKind::Rgibnnm => "RGIBNNM",
            MutationKind::Swglm => "SWGLM",
            MutationKind::Ibrgbwgm => "IBRGBWGM",
            MutationKind::Ibrgbrgm => "IBRGBRGM",
            MutationKind::Sbm => "SBM",
            MutationKind::Sam => "SAM",
        }
    }

    /// SBM and SAM.
    pub fn is_meta(self) -> bool {
        matches!(self, MutationKind::Sbm | MutationKind::Sam)
    }

    /// Slot in [`MutationKind::CONCRETE`], `None` for meta strategies.
    pub fn concrete_index(self) -> Option<usize> {
        MutationKind::CONCRETE.iter().position(|&k| k == self)
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MutationKind {
    type Err = UnknownMutationKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        MutationKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownMutationKind(s.into()))
    }
}
