//! Lower and upper approximations of a subset with respect to a partition.

use crate::bitset::BitSet;
use crate::model::Partition;

/// The pair `⟨lower, upper⟩` of a subset. Always `lower ⊆ upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoughSet {
    pub lower: BitSet,
    pub upper: BitSet,
}

impl RoughSet {
    pub fn boundary(&self) -> BitSet {
        self.upper.difference(&self.lower)
    }
}

/// What can be said about one element given only its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MembershipStatus {
    /// `[z] ⊆ X`
    CertainlyIn,
    /// `[z] ∩ X = ∅`
    CertainlyOut,
    /// the class meets both `X` and its complement
    Possibly,
}

impl MembershipStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::CertainlyIn => "CertainlyIn",
            Self::CertainlyOut => "CertainlyOut",
            Self::Possibly => "Possibly",
        }
    }
}

impl Partition {
    /// `{ z : [z] ∩ X ≠ ∅ }`
    pub fn upper(&self, x: &BitSet) -> BitSet {
        let mut out = BitSet::empty(self.universe());
        for b in 0..self.block_count() {
            let block = self.block_set(b);
            if block.intersects(x) {
                out.union_with(block);
            }
        }
        out
    }

    /// `{ z : [z] ⊆ X }`
    pub fn lower(&self, x: &BitSet) -> BitSet {
        let mut out = BitSet::empty(self.universe());
        for b in 0..self.block_count() {
            let block = self.block_set(b);
            if block.is_subset(x) {
                out.union_with(block);
            }
        }
        out
    }

    pub fn boundary(&self, x: &BitSet) -> BitSet {
        self.upper(x).difference(&self.lower(x))
    }

    pub fn rough_set(&self, x: &BitSet) -> RoughSet {
        RoughSet {
            lower: self.lower(x),
            upper: self.upper(x),
        }
    }

    pub fn membership_status(&self, x: &BitSet, z: usize) -> MembershipStatus {
        let class = self.class_of(z);
        if class.is_subset(x) {
            MembershipStatus::CertainlyIn
        } else if !class.intersects(x) {
            MembershipStatus::CertainlyOut
        } else {
            MembershipStatus::Possibly
        }
    }

    /// True iff `x` is a union of blocks.
    pub fn is_saturated(&self, x: &BitSet) -> bool {
        self.upper(x) == *x
    }
}
