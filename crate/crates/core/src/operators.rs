//! Modal-style operators on an affordance relation.
//!
//! Every operator is written once and parameterized by the result
//! [`Coordinate`]. For result coordinate `c` the two arguments range over the
//! other two sorts in `(A, O, E)` order: `E` takes `(X ⊆ A, Y ⊆ O)`, `O` takes
//! `(X ⊆ A, Z ⊆ E)`, and `A` takes `(Y ⊆ O, Z ⊆ E)`. Below, `R` is the relation
//! picked by the [`RelationSelector`] and formulas are written for `c = E`.
//!
//! | operator     | `e` is in the result iff                        |
//! |--------------|-------------------------------------------------|
//! | `poss`       | `(X × Y × {e}) ∩ R ≠ ∅`                          |
//! | `suff`       | `X × Y × {e} ⊆ R`                               |
//! | `nec`        | `e ∉ poss(−X, −Y)`                              |
//! | `dusuff`     | `e ∉ suff(−X, −Y)`                              |
//! | `suff_star`  | `e ∈ suff(−X, −Y)`                              |
//! | `nec_u`      | `e ∈ nec(X, Y) ∩ suff_star(X, Y)`               |
//! | `poss_u`     | `e ∈ poss(X, Y) ∪ −suff(X, Y)`                  |
//! | `alpha_upper`| `(P₁ × P₂ × P₃) ∩ R ≠ ∅`, slots roughened by mask |
//! | `alpha_lower`| `X̲ × Y̲ × [e] ⊆ R`                               |
//!
//! Complements `−X` are taken within the argument's own sort.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::affordance::{AffordanceStructure, Relation, RelationSelector, Sort, SortSet};
use crate::bitset::BitSet;

/// The sort an operator returns.
pub type Coordinate = Sort;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("argument {position} of a {coord}-operator must have sort {expected}, found {found}")]
    SortMismatch {
        coord: Coordinate,
        position: usize,
        expected: Sort,
        found: Sort,
    },
    #[error("`{0}` does not take set arguments")]
    NotASetOperator(Operator),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("invalid roughness mask `{0}`")]
    InvalidMask(String),
}

/// Positions to roughen in an upper approximation operator.
///
/// Slot 1 is the result coordinate's own element, slots 2 and 3 are the two
/// argument sets in `(A, O, E)` order. The full mask `123` roughens all
/// three; the empty mask leaves plain possibility.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoughnessMask(u8);

impl RoughnessMask {
    pub const EMPTY: Self = Self(0);
    pub const FULL: Self = Self(0b111);
    /// All eight masks: `∅, 1, 2, 3, 12, 13, 23, 123`.
    pub const ALL: [Self; 8] = [
        Self(0),
        Self(0b001),
        Self(0b010),
        Self(0b100),
        Self(0b011),
        Self(0b101),
        Self(0b110),
        Self(0b111),
    ];

    pub fn from_slots(slots: impl IntoIterator<Item = u8>) -> Result<Self, OpError> {
        let mut bits = 0u8;
        for s in slots {
            if !(1..=3).contains(&s) {
                return Err(OpError::InvalidMask(s.to_string()));
            }
            bits |= 1 << (s - 1);
        }
        Ok(Self(bits))
    }

    #[inline]
    pub fn has(self, slot: u8) -> bool {
        self.0 & (1 << (slot - 1)) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Slots in ascending order, `"0"` for the empty mask.
    pub fn digits(self) -> String {
        if self.is_empty() {
            return "0".into();
        }
        (1..=3u8)
            .filter(|&s| self.has(s))
            .map(|s| char::from(b'0' + s))
            .collect()
    }
}

impl FromStr for RoughnessMask {
    type Err = OpError;

    /// Parses digits such as `"23"` or `"123"`; `"0"` is the empty mask.
    /// Each digit may appear at most once.
    fn from_str(s: &str) -> Result<Self, OpError> {
        let bad = || OpError::InvalidMask(s.to_owned());
        if s == "0" {
            return Ok(Self::EMPTY);
        }
        if s.is_empty() {
            return Err(bad());
        }
        let mut bits = 0u8;
        for c in s.chars() {
            let d = c
                .to_digit(10)
                .filter(|d| (1..=3).contains(d))
                .ok_or_else(bad)? as u8;
            let b = 1 << (d - 1);
            if bits & b != 0 {
                return Err(bad());
            }
            bits |= b;
        }
        Ok(Self(bits))
    }
}

impl fmt::Debug for RoughnessMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mask={}", self.digits())
    }
}

impl fmt::Display for RoughnessMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    Poss,
    Suff,
    Nec,
    Dusuff,
    SuffStar,
    NecU,
    PossU,
    AlphaUp,
    AlphaLow,
    Cyl,
}

impl Operator {
    pub const ALL: [Operator; 10] = [
        Self::Poss,
        Self::Suff,
        Self::Nec,
        Self::Dusuff,
        Self::SuffStar,
        Self::NecU,
        Self::PossU,
        Self::AlphaUp,
        Self::AlphaLow,
        Self::Cyl,
    ];

    /// The operators that map two sets to a set.
    pub const SET_OPERATORS: [Operator; 9] = [
        Self::Poss,
        Self::Suff,
        Self::Nec,
        Self::Dusuff,
        Self::SuffStar,
        Self::NecU,
        Self::PossU,
        Self::AlphaUp,
        Self::AlphaLow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Poss => "poss",
            Self::Suff => "suff",
            Self::Nec => "nec",
            Self::Dusuff => "dusuff",
            Self::SuffStar => "suffstar",
            Self::NecU => "necu",
            Self::PossU => "possu",
            Self::AlphaUp => "alpha_up",
            Self::AlphaLow => "alpha_low",
            Self::Cyl => "cyl",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name() == name)
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fully specified set operator: which operator, which coordinate, which
/// relation, and (for `alpha_up` only) which mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpCall {
    pub op: Operator,
    pub coord: Coordinate,
    pub sel: RelationSelector,
    pub mask: RoughnessMask,
}

impl OpCall {
    pub fn new(op: Operator, coord: Coordinate, sel: RelationSelector) -> Self {
        Self {
            op,
            coord,
            sel,
            mask: RoughnessMask::FULL,
        }
    }

    pub fn with_mask(mut self, mask: RoughnessMask) -> Self {
        self.mask = mask;
        self
    }

    pub fn apply(
        &self,
        s: &AffordanceStructure,
        x: &SortSet,
        y: &SortSet,
    ) -> Result<SortSet, OpError> {
        let (c, sel) = (self.coord, self.sel);
        match self.op {
            Operator::Poss => poss(s, sel, c, x, y),
            Operator::Suff => suff(s, sel, c, x, y),
            Operator::Nec => nec(s, sel, c, x, y),
            Operator::Dusuff => dusuff(s, sel, c, x, y),
            Operator::SuffStar => suff_star(s, sel, c, x, y),
            Operator::NecU => nec_u(s, sel, c, x, y),
            Operator::PossU => poss_u(s, sel, c, x, y),
            Operator::AlphaUp => alpha_upper(s, sel, c, self.mask, x, y),
            Operator::AlphaLow => alpha_lower(s, sel, c, x, y),
            Operator::Cyl => Err(OpError::NotASetOperator(Operator::Cyl)),
        }
    }
}

fn check_args(c: Coordinate, x: &SortSet, y: &SortSet) -> Result<(), OpError> {
    let (first, second) = c.others();
    for (position, expected, found) in [(1, first, x.sort), (2, second, y.sort)] {
        if expected != found {
            return Err(OpError::SortMismatch {
                coord: c,
                position,
                expected,
                found,
            });
        }
    }
    Ok(())
}

#[inline]
fn meets(rel: &Relation, c: Coordinate, r: usize, x: &BitSet, y: &BitSet) -> bool {
    x.iter()
        .any(|u| y.iter().any(|v| rel.contains(c.assemble(r, u, v))))
}

#[inline]
fn within(rel: &Relation, c: Coordinate, r: usize, x: &BitSet, y: &BitSet) -> bool {
    x.iter()
        .all(|u| y.iter().all(|v| rel.contains(c.assemble(r, u, v))))
}

fn collect(s: &AffordanceStructure, c: Coordinate, pred: impl Fn(usize) -> bool) -> SortSet {
    let n = s.size(c);
    SortSet::new(c, BitSet::from_indices(n, (0..n).filter(|&r| pred(r))))
}

/// Possibility: elements related by `R` to some pair in `X × Y`.
pub fn poss(
    s: &AffordanceStructure,
    sel: RelationSelector,
    c: Coordinate,
    x: &SortSet,
    y: &SortSet,
) -> Result<SortSet, OpError> {
    check_args(c, x, y)?;
    let rel = s.relation(sel);
    Ok(collect(s, c, |r| meets(rel, c, r, &x.bits, &y.bits)))
}

/// Sufficiency: elements related by `R` to every pair in `X × Y`.
pub fn suff(
    s: &AffordanceStructure,
    sel: RelationSelector,
    c: Coordinate,
    x: &SortSet,
    y: &SortSet,
) -> Result<SortSet, OpError> {
    check_args(c, x, y)?;
    let rel = s.relation(sel);
    Ok(collect(s, c, |r| within(rel, c, r, &x.bits, &y.bits)))
}

/// Necessity, the complement dual of possibility.
pub fn nec(
    s: &AffordanceStructure,
    sel: RelationSelector,
    c: Coordinate,
    x: &SortSet,
    y: &SortSet,
) -> Result<SortSet, OpError> {
    Ok(poss(s, sel, c, &x.complement(), &y.complement())?.complement())
}

/// The complement dual of sufficiency.
pub fn dusuff(
    s: &AffordanceStructure,
    sel: RelationSelector,
    c: Coordinate,
    x: &SortSet,
    y: &SortSet,
) -> Result<SortSet, OpError> {
    Ok(suff(s, sel, c, &x.complement(), &y.complement())?.complement())
}

/// Sufficiency on the complements of both arguments.
pub fn suff_star(
    s: &AffordanceStructure,
    sel: RelationSelector,
    c: Coordinate,
    x: &SortSet,
    y: &SortSet,
) -> Result<SortSet, OpError> {
    suff(s, sel, c, &x.complement(), &y.complement())
}

/// `nec ∩ suff_star`. Full when either argument is its whole sort,
/// empty otherwise.
pub fn nec_u(
    s: &AffordanceStructure,
    sel: RelationSelector,
    c: Coordinate,
    x: &SortSet,
    y: &SortSet,
) -> Result<SortSet, OpError> {
    let n = nec(s, sel, c, x, y)?;
    let st = suff_star(s, sel, c, x, y)?;
    Ok(SortSet::new(c, n.bits.intersection(&st.bits)))
}

/// `poss ∪ −suff`, the dual of [`nec_u`]. Full when both arguments are
/// non-empty, empty otherwise.
pub fn poss_u(
    s: &AffordanceStructure,
    sel: RelationSelector,
    c: Coordinate,
    x: &SortSet,
    y: &SortSet,
) -> Result<SortSet, OpError> {
    let p = poss(s, sel, c, x, y)?;
    let su = suff(s, sel, c, x, y)?;
    Ok(SortSet::new(c, p.bits.union(&su.bits.complement())))
}

/// Upper approximation operator with roughness on the slots in `mask`.
///
/// With slot 1 set the own element `r` is widened to its class `[r]`; with
/// slot 2 or 3 set the corresponding argument is replaced by its upper
/// approximation. The full mask is the headline operator `ᾱ_c`.
pub fn alpha_upper(
    s: &AffordanceStructure,
    sel: RelationSelector,
    c: Coordinate,
    mask: RoughnessMask,
    x: &SortSet,
    y: &SortSet,
) -> Result<SortSet, OpError> {
    check_args(c, x, y)?;
    let rel = s.relation(sel);
    let widen = |slot: u8, set: &SortSet| {
        if mask.has(slot) {
            s.partition(set.sort).upper(&set.bits)
        } else {
            set.bits.clone()
        }
    };
    let (p2, p3) = (widen(2, x), widen(3, y));
    let own = s.partition(c);
    Ok(collect(s, c, |r| {
        if mask.has(1) {
            own.class_of(r).iter().any(|r2| meets(rel, c, r2, &p2, &p3))
        } else {
            meets(rel, c, r, &p2, &p3)
        }
    }))
}

/// Lower approximation operator: `X̲ × Y̲ × [r] ⊆ R`.
pub fn alpha_lower(
    s: &AffordanceStructure,
    sel: RelationSelector,
    c: Coordinate,
    x: &SortSet,
    y: &SortSet,
) -> Result<SortSet, OpError> {
    check_args(c, x, y)?;
    let rel = s.relation(sel);
    let lx = s.partition(x.sort).lower(&x.bits);
    let ly = s.partition(y.sort).lower(&y.bits);
    let own = s.partition(c);
    Ok(collect(s, c, |r| {
        own.class_of(r)
            .iter()
            .all(|r2| within(rel, c, r2, &lx, &ly))
    }))
}

/// Pairs over the two non-`c` sorts, in `(A, O, E)` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    pub sorts: (Sort, Sort),
    pub pairs: BTreeSet<(usize, usize)>,
}

/// Projection of `R` that forgets coordinate `c`.
pub fn cylindrify(s: &AffordanceStructure, sel: RelationSelector, c: Coordinate) -> PairSet {
    let (first, second) = c.others();
    let pairs = s
        .relation(sel)
        .iter()
        .map(|t| (t.get(first), t.get(second)))
        .collect();
    PairSet {
        sorts: (first, second),
        pairs,
    }
}
