//! Searches for structures where an inclusion between operators is strict.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use super::gen::{generate, GenConfig};
use super::laws::{check_laws_with, Library};
use super::naive::NaiveModel;
use super::OracleError;
use crate::affordance::{AffordanceStructure, RelationSelector, Sort, SortSet};
use crate::format::{bundle_text, digest};
use crate::model::{AttributeTable, ValueAtom};
use crate::operators::{alpha_lower, alpha_upper, suff, RoughnessMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrictnessClaim {
    /// `alpha_up` with mask `23` is strictly larger over `φ̄` than over `φ`.
    StrictUpper,
    /// `alpha_low` is strictly larger than `suff` over `φ̲`.
    SuffLower,
}

impl StrictnessClaim {
    pub const ALL: [StrictnessClaim; 2] = [Self::StrictUpper, Self::SuffLower];

    pub fn name(self) -> &'static str {
        match self {
            Self::StrictUpper => "strict-upper",
            Self::SuffLower => "suff-lower",
        }
    }
}

impl FromStr for StrictnessClaim {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| OracleError::UnknownClaim(s.to_owned()))
    }
}

/// A structure with arguments and an element separating the two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub claim: StrictnessClaim,
    pub structure: AffordanceStructure,
    pub coordinate: Sort,
    pub x: SortSet,
    pub y: SortSet,
    /// In the larger side only.
    pub element: usize,
    pub larger: SortSet,
    pub smaller: SortSet,
    /// Structures examined, including this one.
    pub structures_tried: usize,
}

impl Witness {
    pub fn render(&self) -> String {
        let s = &self.structure;
        let show = |set: &SortSet| format!("{{{}}}", s.ids(set).join(","));
        let (larger, smaller) = match self.claim {
            StrictnessClaim::StrictUpper => ("alpha_up[upper; mask=23]", "alpha_up[raw; mask=23]"),
            StrictnessClaim::SuffLower => ("alpha_low[raw]", "suff[lower]"),
        };
        let mut out = format!(
            "WITNESS {} digest={} tried={}\n",
            self.claim.name(),
            digest(s),
            self.structures_tried
        );
        let _ = writeln!(out, "coordinate {}", self.coordinate);
        let _ = writeln!(out, "X = {}", show(&self.x));
        let _ = writeln!(out, "Y = {}", show(&self.y));
        let _ = writeln!(out, "{larger} = {}", show(&self.larger));
        let _ = writeln!(out, "{smaller} = {}", show(&self.smaller));
        let _ = writeln!(
            out,
            "element {}",
            s.table(self.coordinate).objects()[self.element]
        );
        out.push('\n');
        out.push_str(&bundle_text(s));
        out
    }

    /// Re-derives both sides with the naive evaluator.
    pub fn verify(&self) -> bool {
        let m = NaiveModel::new(&self.structure);
        let xs: BTreeSet<usize> = self.x.iter().collect();
        let ys: BTreeSet<usize> = self.y.iter().collect();
        let c = self.coordinate;
        let (big, small) = match self.claim {
            StrictnessClaim::StrictUpper => {
                let mask = RoughnessMask::from_slots([2, 3]).expect("valid slots");
                (
                    m.eval("alpha_up", RelationSelector::Upper, c, mask, &xs, &ys),
                    m.eval("alpha_up", RelationSelector::Raw, c, mask, &xs, &ys),
                )
            }
            StrictnessClaim::SuffLower => (
                m.eval(
                    "alpha_low",
                    RelationSelector::Raw,
                    c,
                    RoughnessMask::FULL,
                    &xs,
                    &ys,
                ),
                m.eval(
                    "suff",
                    RelationSelector::Lower,
                    c,
                    RoughnessMask::FULL,
                    &xs,
                    &ys,
                ),
            ),
        };
        match (big, small) {
            (Ok(big), Ok(small)) => {
                small.is_subset(&big)
                    && big.contains(&self.element)
                    && !small.contains(&self.element)
                    && big == self.larger.iter().collect()
                    && small == self.smaller.iter().collect()
            }
            _ => false,
        }
    }
}

/// Sides `(larger, smaller)` of the claim for one argument pair.
fn sides(
    claim: StrictnessClaim,
    s: &AffordanceStructure,
    c: Sort,
    x: &SortSet,
    y: &SortSet,
) -> (SortSet, SortSet) {
    let r = match claim {
        StrictnessClaim::StrictUpper => {
            let mask = RoughnessMask::from_slots([2, 3]).expect("valid slots");
            alpha_upper(s, RelationSelector::Upper, c, mask, x, y)
                .and_then(|b| Ok((b, alpha_upper(s, RelationSelector::Raw, c, mask, x, y)?)))
        }
        StrictnessClaim::SuffLower => alpha_lower(s, RelationSelector::Raw, c, x, y)
            .and_then(|b| Ok((b, suff(s, RelationSelector::Lower, c, x, y)?))),
    };
    r.expect("arguments are well sorted")
}

fn search_structure(
    claim: StrictnessClaim,
    s: &AffordanceStructure,
    tried: usize,
    subsets: impl Fn(Sort) -> Vec<SortSet>,
) -> Option<Witness> {
    for c in Sort::ALL {
        let (f, g) = c.others();
        let ys = subsets(g);
        for x in subsets(f) {
            for y in &ys {
                let (larger, smaller) = sides(claim, s, c, &x, y);
                if smaller.is_subset(&larger) && larger != smaller {
                    let element = larger.iter().find(|&z| !smaller.contains(z))?;
                    let w = Witness {
                        claim,
                        structure: s.clone(),
                        coordinate: c,
                        x: x.clone(),
                        y: y.clone(),
                        element,
                        larger,
                        smaller,
                        structures_tried: tried,
                    };
                    if w.verify() {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

fn all_subsets(s: &AffordanceStructure, sort: Sort) -> Vec<SortSet> {
    let n = s.size(sort);
    if n > 6 {
        // singletons, their complements, and the two trivial sets
        let mut out = vec![s.empty_set(sort), s.full_set(sort)];
        for z in 0..n {
            let one = SortSet::new(sort, crate::BitSet::singleton(n, z));
            out.push(one.complement());
            out.push(one);
        }
        return out;
    }
    (0..1u64 << n)
        .map(|m| SortSet::new(sort, crate::BitSet::from_mask(n, m)))
        .collect()
}

fn koka_table(name: &str, rows: &[(&str, &str)]) -> AttributeTable {
    let rows = rows
        .iter()
        .map(|(id, v)| {
            (
                (*id).to_owned(),
                vec![ValueAtom::new(v).expect("non-empty")],
            )
        })
        .collect();
    AttributeTable::new(name, vec!["kind".into()], rows).expect("well-formed table")
}

/// Two indiscernible pets, one stick, one park and nothing fetched. With
/// `X` missing one pet its lower approximation is empty, so `alpha_low`
/// holds vacuously everywhere while `suff` over the empty `φ̲` holds nowhere.
pub fn koka_structure() -> AffordanceStructure {
    AffordanceStructure::new(
        koka_table("pets", &[("koka", "cat"), ("mruczek", "cat")]),
        koka_table("things", &[("stick", "stick")]),
        koka_table("parks", &[("park", "park")]),
        [],
        Some("fetch".into()),
    )
}

/// Looks for a witness of `claim` among at most `budget` structures.
///
/// `suff-lower` tries the Koka structure first; otherwise structures come
/// from the generator with the same per-trial seeds as the law suite.
pub fn find_witness(claim: StrictnessClaim, cfg: &GenConfig, budget: usize) -> Option<Witness> {
    if budget == 0 {
        return None;
    }
    let mut tried = 0;
    if claim == StrictnessClaim::SuffLower {
        tried += 1;
        let s = koka_structure();
        let w = search_structure(claim, &s, tried, |sort| all_subsets(&s, sort));
        if w.is_some() {
            return w;
        }
    }
    for i in 0.. {
        if tried >= budget {
            break;
        }
        tried += 1;
        let s = generate(&cfg.for_trial(i));
        if let Some(w) = search_structure(claim, &s, tried, |sort| all_subsets(&s, sort)) {
            return Some(w);
        }
    }
    None
}

/// True when the catalog's control laws all fail on `trials` structures, as
/// they must if the checker can see counterexamples at all.
pub fn controls_fail(cfg: &GenConfig, trials: usize) -> bool {
    check_laws_with(&Library, super::laws::CONTROL_LAWS, cfg, trials)
        .iter()
        .all(|r| !r.passed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koka_witness() {
        let w = find_witness(StrictnessClaim::SuffLower, &GenConfig::default(), 1).unwrap();
        assert_eq!(w.structures_tried, 1);
        assert!(w.larger.is_full());
        assert!(!w.smaller.is_full());
        assert!(w.verify());
        let s = &w.structure;
        assert!(s.lower_set(&w.x).is_empty() || s.lower_set(&w.y).is_empty());
    }

    #[test]
    fn strict_upper_found() {
        let w = find_witness(StrictnessClaim::StrictUpper, &GenConfig::default(), 1000).unwrap();
        assert!(w.verify());
        assert!(w.smaller.is_subset(&w.larger) && w.smaller != w.larger);
        assert!(w.render().starts_with("WITNESS strict-upper digest="));
    }

    #[test]
    fn strict_upper_impossible_on_distinct_rows() {
        let cfg = GenConfig {
            distinct_rows: true,
            ..GenConfig::default()
        };
        assert!(find_witness(StrictnessClaim::StrictUpper, &cfg, 50).is_none());
    }

    #[test]
    fn zero_budget() {
        assert!(find_witness(StrictnessClaim::SuffLower, &GenConfig::default(), 0).is_none());
    }

    #[test]
    fn claim_names() {
        for c in StrictnessClaim::ALL {
            assert_eq!(c.name().parse::<StrictnessClaim>().unwrap(), c);
        }
        assert!("strict".parse::<StrictnessClaim>().is_err());
    }

    #[test]
    fn tampered_witness_fails_verification() {
        let mut w = find_witness(StrictnessClaim::SuffLower, &GenConfig::default(), 1).unwrap();
        w.smaller = w.larger.clone();
        assert!(!w.verify());
    }
}
