//! The law catalog and the randomized checker that runs it.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gen::{generate, sample_subsets, GenConfig};
use super::naive::NaiveModel;
use crate::affordance::{AffordanceStructure, RelationSelector, Sort, SortSet, Triple};
use crate::format::digest;
use crate::operators::{cylindrify, OpCall, Operator, RoughnessMask};

use Operator::*;
use RelationSelector::{Lower, Raw, Upper};

const SUBSET_STREAM: u64 = 0x5u64 << 60;

/// Evaluates set operators for the law checker.
///
/// [`Library`] forwards to the operators module. Other implementations exist
/// to make sure the checker notices when an operator is wrong.
pub trait Engine {
    fn apply(&self, s: &AffordanceStructure, call: OpCall, x: &SortSet, y: &SortSet) -> SortSet;
}

pub struct Library;

impl Engine for Library {
    fn apply(&self, s: &AffordanceStructure, call: OpCall, x: &SortSet, y: &SortSet) -> SortSet {
        call.apply(s, x, y).expect("law arguments are well sorted")
    }
}

pub struct Ctx<'a> {
    pub s: &'a AffordanceStructure,
    engine: &'a dyn Engine,
}

impl Ctx<'_> {
    fn op(
        &self,
        op: Operator,
        sel: RelationSelector,
        c: Sort,
        x: &SortSet,
        y: &SortSet,
    ) -> SortSet {
        self.engine.apply(self.s, OpCall::new(op, c, sel), x, y)
    }

    fn alpha_up(
        &self,
        sel: RelationSelector,
        c: Sort,
        mask: RoughnessMask,
        x: &SortSet,
        y: &SortSet,
    ) -> SortSet {
        self.engine
            .apply(self.s, OpCall::new(AlphaUp, c, sel).with_mask(mask), x, y)
    }

    fn full(&self, sort: Sort) -> SortSet {
        self.s.full_set(sort)
    }

    fn empty(&self, sort: Sort) -> SortSet {
        self.s.empty_set(sort)
    }

    fn up(&self, x: &SortSet) -> SortSet {
        self.s.upper_set(x)
    }

    fn low(&self, x: &SortSet) -> SortSet {
        self.s.lower_set(x)
    }

    fn id(&self, sort: Sort, i: usize) -> String {
        self.s.table(sort).objects()[i].clone()
    }

    fn triple(&self, t: Triple) -> String {
        let [a, o, e] = self.s.triple_ids(t);
        format!("({a},{o},{e})")
    }

    /// Fails with the first element of `a ∖ b`.
    fn sub(&self, a: &SortSet, b: &SortSet) -> Outcome {
        match a.iter().find(|&z| !b.contains(z)) {
            Some(z) => Err(Some(self.id(a.sort, z))),
            None => Ok(()),
        }
    }

    fn eq(&self, a: &SortSet, b: &SortSet) -> Outcome {
        self.sub(a, b)?;
        self.sub(b, a)
    }
}

/// `Err` carries the offending element when there is one.
pub type Outcome = Result<(), Option<String>>;

type CheckFn = fn(&Ctx<'_>, Sort, &SortSet, &SortSet) -> Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// once per structure
    Structure,
    /// per sort and subset `X`
    Set,
    /// per coordinate and argument pair `(X, Y)`
    Pair,
}

#[derive(Clone, Copy)]
pub struct Law {
    pub name: &'static str,
    pub scope: Scope,
    check: CheckFn,
}

impl fmt::Debug for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Law")
            .field("name", &self.name)
            .field("scope", &self.scope)
            .finish()
    }
}

const fn law(name: &'static str, scope: Scope, check: CheckFn) -> Law {
    Law { name, scope, check }
}

/// `X` with its least element removed, if any.
fn shrink(x: &SortSet) -> SortSet {
    let mut bits = x.bits.clone();
    if let Some(z) = x.iter().next() {
        bits.remove(z);
    }
    SortSet::new(x.sort, bits)
}

fn wmia(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    if x.is_empty() || y.is_empty() {
        return Ok(());
    }
    for sel in RelationSelector::ALL {
        cx.sub(&cx.op(Suff, sel, c, x, y), &cx.op(Poss, sel, c, x, y))?;
    }
    Ok(())
}

fn wmia_without_premise(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    cx.sub(&cx.op(Suff, Raw, c, x, y), &cx.op(Poss, Raw, c, x, y))
}

// The quantifier forms below read the relation directly, independently of
// the complement forms used by the operators.
fn related(cx: &Ctx, sel: RelationSelector, c: Sort, r: usize, u: usize, v: usize) -> bool {
    cx.s.relation(sel).contains(c.assemble(r, u, v))
}

fn nec_duality(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    let (f, g) = c.others();
    for sel in RelationSelector::ALL {
        let direct = SortSet::new(
            c,
            crate::BitSet::from_indices(
                cx.s.size(c),
                (0..cx.s.size(c)).filter(|&r| {
                    (0..cx.s.size(f)).all(|u| {
                        (0..cx.s.size(g)).all(|v| {
                            !related(cx, sel, c, r, u, v) || x.contains(u) || y.contains(v)
                        })
                    })
                }),
            ),
        );
        cx.eq(&cx.op(Nec, sel, c, x, y), &direct)?;
    }
    Ok(())
}

fn dusuff_duality(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    let (f, g) = c.others();
    for sel in RelationSelector::ALL {
        let direct = SortSet::new(
            c,
            crate::BitSet::from_indices(
                cx.s.size(c),
                (0..cx.s.size(c)).filter(|&r| {
                    (0..cx.s.size(f)).any(|u| {
                        (0..cx.s.size(g)).any(|v| {
                            !x.contains(u) && !y.contains(v) && !related(cx, sel, c, r, u, v)
                        })
                    })
                }),
            ),
        );
        cx.eq(&cx.op(Dusuff, sel, c, x, y), &direct)?;
    }
    Ok(())
}

fn necu_nonempty_needs_full_argument(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    for sel in RelationSelector::ALL {
        let r = cx.op(NecU, sel, c, x, y);
        if !r.is_empty() && !x.is_full() && !y.is_full() {
            return Err(r.iter().next().map(|z| cx.id(c, z)));
        }
    }
    Ok(())
}

fn necu_full_argument(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    if !(x.is_full() || y.is_full()) {
        return Ok(());
    }
    for sel in RelationSelector::ALL {
        cx.eq(&cx.op(NecU, sel, c, x, y), &cx.full(c))?;
    }
    Ok(())
}

fn possu_closed_form(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    let expected = if !x.is_empty() && !y.is_empty() {
        cx.full(c)
    } else {
        cx.empty(c)
    };
    for sel in RelationSelector::ALL {
        cx.eq(&cx.op(PossU, sel, c, x, y), &expected)?;
    }
    Ok(())
}

fn nec_and_suff(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    let (f, g) = c.others();
    let full = cx.full(c);
    for sel in RelationSelector::ALL {
        cx.eq(&cx.op(Nec, sel, c, x, &cx.full(g)), &full)?;
        cx.eq(&cx.op(Nec, sel, c, &cx.full(f), y), &full)?;
        cx.eq(&cx.op(Suff, sel, c, x, &cx.empty(g)), &full)?;
        cx.eq(&cx.op(Suff, sel, c, &cx.empty(f), y), &full)?;
    }
    Ok(())
}

fn upper_invariance(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    let full = RoughnessMask::FULL;
    cx.eq(
        &cx.alpha_up(Raw, c, full, x, y),
        &cx.alpha_up(Upper, c, full, x, y),
    )
}

fn lower_invariance(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    cx.eq(
        &cx.op(AlphaLow, Raw, c, x, y),
        &cx.op(AlphaLow, Lower, c, x, y),
    )
}

fn partial_mask_inclusions(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    let largest = cx.alpha_up(Raw, c, RoughnessMask::FULL, x, y);
    for mask in RoughnessMask::ALL {
        let over_upper = cx.alpha_up(Upper, c, mask, x, y);
        cx.sub(&cx.alpha_up(Raw, c, mask, x, y), &over_upper)?;
        cx.sub(&over_upper, &largest)?;
    }
    Ok(())
}

fn mixed_identity_1(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    cx.eq(
        &cx.op(Poss, Upper, c, x, y),
        &cx.alpha_up(Raw, c, RoughnessMask::FULL, x, y),
    )
}

fn mixed_identity_2(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    let inner = cx.op(Poss, Raw, c, &cx.up(x), &cx.up(y));
    cx.eq(
        &cx.up(&inner),
        &cx.alpha_up(Raw, c, RoughnessMask::FULL, x, y),
    )
}

fn mixed_inclusion_3(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    cx.sub(&cx.op(Suff, Lower, c, x, y), &cx.op(AlphaLow, Raw, c, x, y))
}

fn reverse_mixed_inclusion_3(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    cx.sub(&cx.op(AlphaLow, Raw, c, x, y), &cx.op(Suff, Lower, c, x, y))
}

fn mixed_identity_4(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    let inner = cx.op(Suff, Raw, c, &cx.low(x), &cx.low(y));
    cx.eq(&cx.low(&inner), &cx.op(AlphaLow, Raw, c, x, y))
}

fn poss_upper_idempotent(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    cx.eq(
        &cx.op(Poss, Upper, c, &cx.up(x), &cx.up(y)),
        &cx.op(Poss, Upper, c, x, y),
    )
}

fn suff_lower_idempotent(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    cx.eq(
        &cx.op(Suff, Lower, c, &cx.low(x), &cx.low(y)),
        &cx.op(Suff, Lower, c, x, y),
    )
}

fn suff_antitone(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    for sel in RelationSelector::ALL {
        let r = cx.op(Suff, sel, c, x, y);
        cx.sub(&r, &cx.op(Suff, sel, c, &shrink(x), y))?;
        cx.sub(&r, &cx.op(Suff, sel, c, x, &shrink(y)))?;
    }
    Ok(())
}

fn poss_monotone(cx: &Ctx, c: Sort, x: &SortSet, y: &SortSet) -> Outcome {
    for sel in RelationSelector::ALL {
        let r = cx.op(Poss, sel, c, x, y);
        cx.sub(&cx.op(Poss, sel, c, &shrink(x), y), &r)?;
        cx.sub(&cx.op(Poss, sel, c, x, &shrink(y)), &r)?;
    }
    Ok(())
}

fn affordance_sandwich(cx: &Ctx, _: Sort, _: &SortSet, _: &SortSet) -> Outcome {
    let s = cx.s;
    let (phi, upper, lower) = (s.phi(), s.upper_affordance(), s.lower_affordance());
    if let Some(t) = lower.iter().find(|t| !phi.contains(t.as_array())) {
        return Err(Some(cx.triple(t)));
    }
    match phi.iter().find(|t| !upper.contains(t.as_array())) {
        Some(t) => Err(Some(cx.triple(t))),
        None => Ok(()),
    }
}

fn affordance_saturation(cx: &Ctx, _: Sort, _: &SortSet, _: &SortSet) -> Outcome {
    let s = cx.s;
    let rep = |t: [usize; 3]| {
        let mut r = [0; 3];
        for sort in Sort::ALL {
            let p = s.partition(sort);
            r[sort.index()] = p.blocks()[p.block_of(t[sort.index()])][0];
        }
        r
    };
    let [na, no, ne] = s.dims();
    for rel in [s.upper_affordance(), s.lower_affordance()] {
        for a in 0..na {
            for o in 0..no {
                for e in 0..ne {
                    let t = [a, o, e];
                    if rel.contains(t) != rel.contains(rep(t)) {
                        return Err(Some(cx.triple(t.into())));
                    }
                }
            }
        }
    }
    Ok(())
}

fn affordance_fixed_points(cx: &Ctx, _: Sort, _: &SortSet, _: &SortSet) -> Outcome {
    let s = cx.s;
    let up = s.upper_affordance();
    let low = s.lower_affordance();
    let up_again = s.with_phi(up.iter());
    let low_again = s.with_phi(low.iter());
    if up_again.upper_affordance() != up || up_again.lower_affordance() != up {
        return Err(None);
    }
    if low_again.lower_affordance() != low || low_again.upper_affordance() != low {
        return Err(None);
    }
    Ok(())
}

fn rough_duality(cx: &Ctx, _: Sort, x: &SortSet, _: &SortSet) -> Outcome {
    cx.eq(&cx.low(x), &cx.up(&x.complement()).complement())
}

fn rough_idempotence(cx: &Ctx, _: Sort, x: &SortSet, _: &SortSet) -> Outcome {
    let (lo, up) = (cx.low(x), cx.up(x));
    cx.eq(&cx.up(&up), &up)?;
    cx.eq(&cx.low(&lo), &lo)?;
    cx.eq(&cx.low(&up), &up)?;
    cx.eq(&cx.up(&lo), &lo)
}

fn rough_monotonicity(cx: &Ctx, _: Sort, x: &SortSet, _: &SortSet) -> Outcome {
    let smaller = shrink(x);
    cx.sub(&cx.low(&smaller), &cx.low(x))?;
    cx.sub(&cx.up(&smaller), &cx.up(x))
}

fn rough_sandwich(cx: &Ctx, _: Sort, x: &SortSet, _: &SortSet) -> Outcome {
    cx.sub(&cx.low(x), x)?;
    cx.sub(x, &cx.up(x))
}

/// Every law the suite checks, in report order.
pub const LAWS: &[Law] = &[
    law("rough-sandwich", Scope::Set, rough_sandwich),
    law("rough-duality", Scope::Set, rough_duality),
    law("rough-idempotence", Scope::Set, rough_idempotence),
    law("rough-monotonicity", Scope::Set, rough_monotonicity),
    law("affordance-sandwich", Scope::Structure, affordance_sandwich),
    law(
        "affordance-saturation",
        Scope::Structure,
        affordance_saturation,
    ),
    law(
        "affordance-fixed-points",
        Scope::Structure,
        affordance_fixed_points,
    ),
    law("wmia", Scope::Pair, wmia),
    law("nec-duality", Scope::Pair, nec_duality),
    law("dusuff-duality", Scope::Pair, dusuff_duality),
    law(
        "necu-nonempty-needs-full-argument",
        Scope::Pair,
        necu_nonempty_needs_full_argument,
    ),
    law("necu-full-argument", Scope::Pair, necu_full_argument),
    law("possu-closed-form", Scope::Pair, possu_closed_form),
    law("nec-and-suff", Scope::Pair, nec_and_suff),
    law("suff-antitone", Scope::Pair, suff_antitone),
    law("poss-monotone", Scope::Pair, poss_monotone),
    law("upper-invariance", Scope::Pair, upper_invariance),
    law("lower-invariance", Scope::Pair, lower_invariance),
    law(
        "partial-mask-inclusions",
        Scope::Pair,
        partial_mask_inclusions,
    ),
    law("mixed-identity-1", Scope::Pair, mixed_identity_1),
    law("mixed-identity-2", Scope::Pair, mixed_identity_2),
    law("mixed-inclusion-3", Scope::Pair, mixed_inclusion_3),
    law("mixed-identity-4", Scope::Pair, mixed_identity_4),
    law(
        "cor-poss-upper-idempotent",
        Scope::Pair,
        poss_upper_idempotent,
    ),
    law(
        "cor-suff-lower-idempotent",
        Scope::Pair,
        suff_lower_idempotent,
    ),
];

/// Statements that are expected to fail; they keep the checker honest.
pub const CONTROL_LAWS: &[Law] = &[
    law("wmia-without-premise", Scope::Pair, wmia_without_premise),
    law(
        "reverse-mixed-inclusion-3",
        Scope::Pair,
        reverse_mixed_inclusion_3,
    ),
];

pub fn find_law(name: &str) -> Option<&'static Law> {
    LAWS.iter().chain(CONTROL_LAWS).find(|l| l.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub digest: String,
    pub trial: usize,
    pub coordinate: Sort,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub element: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law_name: String,
    pub structures_checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    /// `LAW <name> PASS|FAIL trials=<n> [witness=<digest>]`
    pub fn record(&self) -> String {
        match &self.counterexample {
            None => format!(
                "LAW {} PASS trials={}",
                self.law_name, self.structures_checked
            ),
            Some(cx) => format!(
                "LAW {} FAIL trials={} witness={}",
                self.law_name, self.structures_checked, cx.digest
            ),
        }
    }
}

fn names(s: &AffordanceStructure, x: &SortSet) -> Vec<String> {
    s.ids(x).into_iter().map(str::to_owned).collect()
}

fn run_law(
    cx: &Ctx,
    law: &Law,
    subsets: &[Vec<SortSet>; 3],
    trial: usize,
) -> Option<Counterexample> {
    let s = cx.s;
    let found = |c: Sort, x: &SortSet, y: Option<&SortSet>, element| Counterexample {
        digest: digest(s),
        trial,
        coordinate: c,
        x: names(s, x),
        y: y.map(|y| names(s, y)).unwrap_or_default(),
        element,
    };
    match law.scope {
        Scope::Structure => {
            let e = s.empty_set(Sort::A);
            (law.check)(cx, Sort::A, &e, &e)
                .err()
                .map(|el| found(Sort::A, &e, None, el))
        }
        Scope::Set => Sort::ALL.into_iter().find_map(|sort| {
            subsets[sort.index()].iter().find_map(|x| {
                (law.check)(cx, sort, x, x)
                    .err()
                    .map(|el| found(sort, x, None, el))
            })
        }),
        Scope::Pair => Sort::ALL.into_iter().find_map(|c| {
            let (f, g) = c.others();
            subsets[f.index()].iter().find_map(|x| {
                subsets[g.index()].iter().find_map(|y| {
                    (law.check)(cx, c, x, y)
                        .err()
                        .map(|el| found(c, x, Some(y), el))
                })
            })
        }),
    }
}

fn trial_subsets(s: &AffordanceStructure, seed: u64) -> [Vec<SortSet>; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ SUBSET_STREAM);
    Sort::ALL.map(|sort| sample_subsets(s, sort, &mut rng))
}

/// Runs `laws` against `trials` generated structures. A law stops being
/// checked after its first counterexample.
pub fn check_laws_with(
    engine: &dyn Engine,
    laws: &[Law],
    cfg: &GenConfig,
    trials: usize,
) -> Vec<LawReport> {
    let mut reports: Vec<LawReport> = laws
        .iter()
        .map(|l| LawReport {
            law_name: l.name.to_owned(),
            structures_checked: 0,
            counterexample: None,
        })
        .collect();
    for i in 0..trials {
        let tcfg = cfg.for_trial(i as u64);
        let s = generate(&tcfg);
        let subsets = trial_subsets(&s, tcfg.seed);
        let cx = Ctx { s: &s, engine };
        for (l, rep) in laws.iter().zip(reports.iter_mut()) {
            if rep.counterexample.is_some() {
                continue;
            }
            rep.structures_checked += 1;
            rep.counterexample = run_law(&cx, l, &subsets, i);
        }
    }
    reports
}

/// Runs `laws` on one given structure, with subsets drawn from `seed`.
pub fn check_structure(laws: &[Law], s: &AffordanceStructure, seed: u64) -> Vec<LawReport> {
    let subsets = trial_subsets(s, seed);
    let cx = Ctx {
        s,
        engine: &Library,
    };
    laws.iter()
        .map(|l| LawReport {
            law_name: l.name.to_owned(),
            structures_checked: 1,
            counterexample: run_law(&cx, l, &subsets, 0),
        })
        .collect()
}

/// The full catalog against the operators module.
pub fn check_laws(cfg: &GenConfig, trials: usize) -> Vec<LawReport> {
    check_laws_with(&Library, LAWS, cfg, trials)
}

pub fn check_control_laws(cfg: &GenConfig, trials: usize) -> Vec<LawReport> {
    check_laws_with(&Library, CONTROL_LAWS, cfg, trials)
}

/// Where the operators module and the naive evaluator disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub digest: String,
    pub trial: usize,
    pub what: String,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub expected: Vec<String>,
    pub found: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub structures_checked: usize,
    pub comparisons: usize,
    pub mismatch: Option<Mismatch>,
}

impl EquivalenceReport {
    pub fn record(&self) -> String {
        match &self.mismatch {
            None => format!(
                "ORACLE PASS trials={} comparisons={}",
                self.structures_checked, self.comparisons
            ),
            Some(m) => format!(
                "ORACLE FAIL trials={} comparisons={} witness={} at {}",
                self.structures_checked, self.comparisons, m.digest, m.what
            ),
        }
    }
}

const PAIRS_PER_COORDINATE: usize = 10;

/// Compares the engine with the naive evaluator on every operator, selector,
/// coordinate and mask, plus the rough affordance, set approximations and
/// cylindrification. Structures are the ones [`check_laws`] sees.
pub fn check_equivalence_with(
    engine: &dyn Engine,
    cfg: &GenConfig,
    trials: usize,
) -> EquivalenceReport {
    let mut report = EquivalenceReport {
        structures_checked: 0,
        comparisons: 0,
        mismatch: None,
    };
    for i in 0..trials {
        let tcfg = cfg.for_trial(i as u64);
        let s = generate(&tcfg);
        let subsets = trial_subsets(&s, tcfg.seed);
        report.structures_checked += 1;
        if let Err(m) =
            compare_structure(engine, &s, &subsets, tcfg.seed, i, &mut report.comparisons)
        {
            report.mismatch = Some(*m);
            break;
        }
    }
    report
}

pub fn check_equivalence(cfg: &GenConfig, trials: usize) -> EquivalenceReport {
    check_equivalence_with(&Library, cfg, trials)
}

fn compare_structure(
    engine: &dyn Engine,
    s: &AffordanceStructure,
    subsets: &[Vec<SortSet>; 3],
    seed: u64,
    trial: usize,
    comparisons: &mut usize,
) -> Result<(), Box<Mismatch>> {
    let naive = NaiveModel::new(s);
    let ids = |sort: Sort, v: &BTreeSet<usize>| -> Vec<String> {
        v.iter()
            .map(|&z| s.table(sort).objects()[z].clone())
            .collect()
    };
    let mismatch = |what: String, x: Vec<String>, y: Vec<String>, expected, found| {
        Box::new(Mismatch {
            digest: digest(s),
            trial,
            what,
            x,
            y,
            expected,
            found,
        })
    };
    let fmt_triples = |v: &BTreeSet<[usize; 3]>| -> Vec<String> {
        v.iter()
            .map(|&t| {
                let [a, o, e] = s.triple_ids(t.into());
                format!("({a},{o},{e})")
            })
            .collect()
    };

    for sel in RelationSelector::ALL {
        *comparisons += 1;
        let lib: BTreeSet<[usize; 3]> = s.relation(sel).iter().map(Triple::as_array).collect();
        let want = naive.relation(sel);
        if lib != want {
            let what = format!("relation {}", sel.keyword());
            return Err(mismatch(
                what,
                vec![],
                vec![],
                fmt_triples(&want),
                fmt_triples(&lib),
            ));
        }
        for c in Sort::ALL {
            *comparisons += 1;
            let lib = cylindrify(s, sel, c).pairs;
            let want = naive.cylindrify(sel, c);
            if lib != want {
                let show =
                    |v: &BTreeSet<(usize, usize)>| v.iter().map(|p| format!("{p:?}")).collect();
                let what = format!("cyl[{c}; {}]", sel.keyword());
                return Err(mismatch(what, vec![], vec![], show(&want), show(&lib)));
            }
        }
    }

    for sort in Sort::ALL {
        for x in &subsets[sort.index()] {
            let xs: BTreeSet<usize> = x.iter().collect();
            for (what, lib, want) in [
                ("upper", s.upper_set(x), naive.upper_set(sort, &xs)),
                ("lower", s.lower_set(x), naive.lower_set(sort, &xs)),
            ] {
                *comparisons += 1;
                let lib: BTreeSet<usize> = lib.iter().collect();
                if lib != want {
                    let what = format!("{what} approximation in {sort}");
                    return Err(mismatch(
                        what,
                        ids(sort, &xs),
                        vec![],
                        ids(sort, &want),
                        ids(sort, &lib),
                    ));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ SUBSET_STREAM ^ 1);
    for c in Sort::ALL {
        let (f, g) = c.others();
        let (xs_all, ys_all) = (&subsets[f.index()], &subsets[g.index()]);
        let mut pairs = vec![
            (s.empty_set(f), s.empty_set(g)),
            (s.full_set(f), s.full_set(g)),
        ];
        for _ in 0..PAIRS_PER_COORDINATE {
            let x = xs_all[rng.gen_range(0..xs_all.len())].clone();
            let y = ys_all[rng.gen_range(0..ys_all.len())].clone();
            pairs.push((x, y));
        }
        for (x, y) in &pairs {
            let xs: BTreeSet<usize> = x.iter().collect();
            let ys: BTreeSet<usize> = y.iter().collect();
            for sel in RelationSelector::ALL {
                let calls = Operator::SET_OPERATORS.into_iter().flat_map(|op| {
                    let masks: &[RoughnessMask] = if op == AlphaUp {
                        &RoughnessMask::ALL
                    } else {
                        &[RoughnessMask::FULL]
                    };
                    masks
                        .iter()
                        .map(move |&m| OpCall::new(op, c, sel).with_mask(m))
                });
                for call in calls {
                    *comparisons += 1;
                    let lib: BTreeSet<usize> = engine.apply(s, call, x, y).iter().collect();
                    let want = naive
                        .eval(call.op.name(), sel, c, call.mask, &xs, &ys)
                        .expect("set operators are known to the naive evaluator");
                    if lib != want {
                        let what = if call.op == AlphaUp {
                            format!("{}[{c}; {}; mask={}]", call.op, sel.keyword(), call.mask)
                        } else {
                            format!("{}[{c}; {}]", call.op, sel.keyword())
                        };
                        return Err(mismatch(
                            what,
                            ids(f, &xs),
                            ids(g, &ys),
                            ids(c, &want),
                            ids(c, &lib),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_format() {
        let mut r = LawReport {
            law_name: "wmia".into(),
            structures_checked: 12,
            counterexample: None,
        };
        assert_eq!(r.record(), "LAW wmia PASS trials=12");
        r.counterexample = Some(Counterexample {
            digest: "abc".into(),
            trial: 3,
            coordinate: Sort::E,
            x: vec![],
            y: vec![],
            element: None,
        });
        assert_eq!(r.record(), "LAW wmia FAIL trials=12 witness=abc");
    }

    #[test]
    fn catalog_names_are_unique() {
        let mut names: Vec<_> = LAWS.iter().chain(CONTROL_LAWS).map(|l| l.name).collect();
        let n = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), n);
        assert!(find_law("mixed-identity-4").is_some());
        assert!(find_law("nope").is_none());
    }

    #[test]
    fn shrink_drops_least() {
        let s = crate::affordance::tests::two_actors(false);
        let x = s.full_set(Sort::A);
        assert_eq!(s.ids(&shrink(&x)), ["a2"]);
        assert!(shrink(&s.empty_set(Sort::A)).is_empty());
    }

    #[test]
    fn short_run_is_deterministic() {
        let cfg = GenConfig::with_seed(9);
        assert_eq!(check_laws(&cfg, 5), check_laws(&cfg, 5));
    }
}
