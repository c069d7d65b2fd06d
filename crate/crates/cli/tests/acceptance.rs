//! Acceptance criteria, one report line each.
//!
//! Runs without the libtest harness so the output is exactly one
//! `ACCEPTANCE <n> PRIMARY PASS|FAIL <title>: <detail>` line per criterion.
//! The process exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rough_afford::dsl::{parse, Expr};
use rough_afford::format::parse_table;
use rough_afford::oracle::{
    check_equivalence, check_laws, find_witness, GenConfig, StrictnessClaim, LAWS,
};
use rough_afford::{MembershipStatus, Operator, RoughnessMask};

const TV: &str = include_str!("../../../samples/tv/tv.tsv");
const ACTORS: &str = include_str!("../../../samples/actors/actors.tsv");
const ROUNDTRIP: &str = include_str!("../../core/tests/data/roundtrip.queries");
const MALFORMED: &str = include_str!("../../core/tests/data/malformed.queries");

const SEED: u64 = 42;
const LAW_TRIALS: usize = 500;
const WITNESS_BUDGET: usize = 1000;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn blocks_of(text: &str) -> Result<(rough_afford::AttributeTable, Vec<Vec<String>>), String> {
    let t = parse_table(text).map_err(|e| e.to_string())?;
    let blocks = t
        .partition()
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&i| t.objects()[i].clone()).collect())
        .collect();
    Ok((t, blocks))
}

fn tv_golden() -> Verdict {
    let start = Instant::now();
    let (t, blocks) = blocks_of(TV)?;
    let expected: Vec<Vec<String>> = [&["1"][..], &["2"], &["3"], &["4", "5"], &["6"]]
        .iter()
        .map(|b| b.iter().map(|s| s.to_string()).collect())
        .collect();
    ensure(blocks == expected, || format!("partition {blocks:?}"))?;
    let x = t.select(&["2", "3", "4"]).map_err(|e| e.to_string())?;
    let p = t.partition();
    for (id, want) in [
        ("2", MembershipStatus::CertainlyIn),
        ("6", MembershipStatus::CertainlyOut),
        ("4", MembershipStatus::Possibly),
        ("5", MembershipStatus::Possibly),
    ] {
        let got = p.membership_status(&x, t.position(id).unwrap());
        ensure(got == want, || format!("{id} is {}", got.as_str()))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("5 blocks, 4 statuses, {} ms", elapsed.as_millis()))
}

fn actors_golden() -> Verdict {
    let (t, _) = blocks_of(ACTORS)?;
    let x = t
        .select(&["a1", "a3", "a4", "a5", "a9"])
        .map_err(|e| e.to_string())?;
    let p = t.partition();
    let upper = t.ids(&p.upper(&x));
    let lower = t.ids(&p.lower(&x));
    ensure(upper == ["a1", "a3", "a4", "a5", "a7", "a8", "a9"], || {
        format!("upper {upper:?}")
    })?;
    ensure(lower == ["a3", "a5", "a9"], || format!("lower {lower:?}"))?;
    Ok("upper {a1,a3,a4,a5,a7,a8,a9}, lower {a3,a5,a9}".into())
}

fn law_suite() -> Verdict {
    let start = Instant::now();
    let reports = check_laws(&GenConfig::with_seed(SEED), LAW_TRIALS);
    let elapsed = start.elapsed();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| {
            let cx = r.counterexample.as_ref().unwrap();
            format!(
                "{} (digest {} trial {} coordinate {})",
                r.law_name, cx.digest, cx.trial, cx.coordinate
            )
        })
        .collect();
    ensure(failed.is_empty(), || {
        format!(
            "{} of {} laws refuted: {}",
            failed.len(),
            LAWS.len(),
            failed.join(", ")
        )
    })?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} laws x {LAW_TRIALS} structures, {} ms",
        LAWS.len(),
        elapsed.as_millis()
    ))
}

fn witnesses() -> Verdict {
    let cfg = GenConfig::with_seed(SEED);
    let mut found = Vec::new();
    for claim in StrictnessClaim::ALL {
        let w = find_witness(claim, &cfg, WITNESS_BUDGET)
            .ok_or_else(|| format!("no {} witness in {WITNESS_BUDGET}", claim.name()))?;
        ensure(w.verify(), || {
            format!("{} witness does not verify", claim.name())
        })?;
        ensure(
            w.smaller.bits.is_subset(&w.larger.bits) && w.smaller != w.larger,
            || format!("{} witness is not strict", claim.name()),
        )?;
        if claim == StrictnessClaim::SuffLower {
            ensure(w.larger.is_full() && !w.smaller.is_full(), || {
                "alpha_low is not full or suff is".into()
            })?;
        }
        found.push(format!("{} after {}", claim.name(), w.structures_tried));
    }
    Ok(found.join(", "))
}

fn oracle() -> Verdict {
    let r = check_equivalence(&GenConfig::with_seed(SEED), LAW_TRIALS);
    match &r.mismatch {
        None => Ok(format!(
            "{} structures, {} comparisons",
            r.structures_checked, r.comparisons
        )),
        Some(m) => Err(format!(
            "{} differs on {} (trial {}): expected {:?}, found {:?}",
            m.what, m.digest, m.trial, m.expected, m.found
        )),
    }
}

fn visit(e: &Expr, f: &mut impl FnMut(&Expr)) {
    f(e);
    match e {
        Expr::Set(..) | Expr::Cyl(..) => {}
        Expr::Complement(_, x) | Expr::Approx(_, _, x) => visit(x, f),
        Expr::Binary(_, a, b) | Expr::Call(_, a, b) => {
            visit(a, f);
            visit(b, f);
        }
    }
}

fn dsl() -> Verdict {
    let queries: Vec<&str> = ROUNDTRIP
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .collect();
    ensure(queries.len() >= 30, || {
        format!("only {} queries", queries.len())
    })?;
    let (mut ops, mut sorts, mut sels, mut masks) = (
        BTreeSet::new(),
        BTreeSet::new(),
        BTreeSet::new(),
        BTreeSet::new(),
    );
    for q in &queries {
        let e = parse(q).map_err(|err| format!("{q}: {err}"))?;
        let again = parse(&e.to_string()).map_err(|err| format!("{e}: {err}"))?;
        ensure(again == e, || format!("{q} reprints as {e}"))?;
        visit(&e, &mut |n| match n {
            Expr::Call(c, ..) => {
                ops.insert(c.op);
                sorts.insert(c.coord);
                sels.insert(c.sel.keyword());
                if c.op == Operator::AlphaUp {
                    masks.insert(c.mask);
                }
            }
            Expr::Cyl(c, sel) => {
                ops.insert(Operator::Cyl);
                sorts.insert(*c);
                sels.insert(sel.keyword());
            }
            _ => {}
        });
    }
    ensure(ops.len() == Operator::ALL.len(), || {
        format!("operators {ops:?}")
    })?;
    ensure(sorts.len() == 3 && sels.len() == 3, || {
        "sorts or selectors missing".into()
    })?;
    let nonempty = RoughnessMask::ALL
        .iter()
        .filter(|m| **m != RoughnessMask::EMPTY)
        .all(|m| masks.contains(m));
    ensure(nonempty, || format!("masks {masks:?}"))?;

    let mut malformed = 0;
    for l in MALFORMED.lines().filter(|l| !l.starts_with('#')) {
        let (pos, q) = l.split_once('\t').ok_or("bad corpus line")?;
        let q = q.replace("\\n", "\n");
        let err = match parse(&q) {
            Ok(e) => return Err(format!("{q:?} parsed as {e}")),
            Err(err) => err,
        };
        let got = err.position().map(|(l, c)| format!("{l}:{c}"));
        ensure(got.as_deref() == Some(pos), || {
            format!("{q:?}: {err}, expected {pos}")
        })?;
        malformed += 1;
    }
    ensure(malformed >= 10, || {
        format!("only {malformed} malformed inputs")
    })?;
    Ok(format!(
        "{} round trips, {malformed} error positions",
        queries.len()
    ))
}

fn cli_determinism() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_rough-afford"))
            .args(["check", "--seed", "42", "--trials", "100"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(!a.stdout.is_empty(), || "empty report".into())?;
    ensure(
        a.stdout == b.stdout && a.status.code() == b.status.code(),
        || "reports differ".into(),
    )?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("TV-set golden", tv_golden),
        ("actors golden", actors_golden),
        ("law suite", law_suite),
        ("strictness witnesses", witnesses),
        ("oracle equivalence", oracle),
        ("DSL round trip and error positions", dsl),
        ("CLI determinism", cli_determinism),
    ];
    let mut failures = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let (status, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("ACCEPTANCE {} PRIMARY {status} {title}: {detail}", i + 1);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
