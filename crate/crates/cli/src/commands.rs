use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rough_afford::dsl::{self, check_sorts, evaluate_sorted, Expr};
use rough_afford::format::bundle_text;
use rough_afford::oracle::{
    check_equivalence, check_laws_with, check_structure, find_law, find_witness, generate,
    GenConfig, Law, LawReport, Library, StrictnessClaim, Witness, LAWS,
};
use rough_afford::{AttributeTable, BitSet, Partition, Sort};
use serde_json::{json, Value};

use crate::bundle;
use crate::cli::{CheckArgs, Command, Format, GenArgs, Source};

/// How a command that ran to completion ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A law, the oracle comparison or a witness search failed.
    Failed,
}

struct Out<'a> {
    w: &'a mut dyn Write,
    format: Format,
}

impl Out<'_> {
    fn text(&mut self, line: impl AsRef<str>) -> Result<()> {
        if self.format == Format::Text {
            writeln!(self.w, "{}", line.as_ref())?;
        }
        Ok(())
    }

    fn json(&mut self, record: Value) -> Result<()> {
        if self.format == Format::Json {
            writeln!(self.w, "{record}")?;
        }
        Ok(())
    }
}

pub fn run(command: &Command, format: Format, w: &mut dyn Write) -> Result<Status> {
    let mut out = Out { w, format };
    match command {
        Command::Partition { source } => partition(source, &mut out),
        Command::Approx {
            source,
            set,
            ids,
            sets,
        } => approx(
            source,
            set.as_deref(),
            ids.as_deref(),
            sets.as_deref(),
            &mut out,
        ),
        Command::Eval {
            manifest,
            query,
            query_file,
            sets,
        } => eval(
            manifest,
            query.as_deref(),
            query_file.as_deref(),
            sets.as_deref(),
            &mut out,
        ),
        Command::Check(args) => check(args, &mut out),
        Command::Gen(args) => gen(args, &mut out),
        Command::Witness {
            claim,
            seed,
            budget,
        } => witness(*claim, *seed, *budget, &mut out).map(|found| {
            if found {
                Status::Ok
            } else {
                Status::Failed
            }
        }),
    }
}

fn braces(ids: &[&str]) -> String {
    format!("{{{}}}", ids.join(","))
}

/// The table a command works on, with the named sets of its sort.
struct Universe {
    table: AttributeTable,
    sort: Sort,
    named: Vec<(String, BitSet)>,
}

fn universe(source: &Source, sets: Option<&Path>) -> Result<Universe> {
    match (&source.manifest, &source.table) {
        (Some(m), _) => {
            let b = bundle::load(m, sets)?;
            let named = b
                .sets
                .iter()
                .filter(|(_, s)| s.sort == source.sort)
                .map(|(n, s)| (n.to_owned(), s.bits.clone()))
                .collect();
            Ok(Universe {
                table: b.structure.table(source.sort).clone(),
                sort: source.sort,
                named,
            })
        }
        (None, Some(t)) => {
            let (table, named) = bundle::load_table(t, sets, source.sort)?;
            Ok(Universe {
                table,
                sort: source.sort,
                named,
            })
        }
        (None, None) => bail!("either --manifest or --table is required"),
    }
}

fn blocks<'t>(t: &'t AttributeTable, p: &Partition) -> Vec<Vec<&'t str>> {
    p.blocks()
        .iter()
        .map(|b| b.iter().map(|&i| t.objects()[i].as_str()).collect())
        .collect()
}

fn partition(source: &Source, out: &mut Out) -> Result<Status> {
    let u = universe(source, None)?;
    let blocks = blocks(&u.table, u.table.partition());
    for b in &blocks {
        out.text(braces(b))?;
    }
    out.json(json!({ "table": u.table.name(), "sort": u.sort.to_string(), "blocks": blocks }))?;
    Ok(Status::Ok)
}

fn approx(
    source: &Source,
    set: Option<&str>,
    ids: Option<&[String]>,
    sets: Option<&Path>,
    out: &mut Out,
) -> Result<Status> {
    let u = universe(source, sets)?;
    let (label, x) = match (set, ids) {
        (Some(name), _) => {
            let (_, bits) = u
                .named
                .iter()
                .find(|(n, _)| n == name)
                .ok_or_else(|| anyhow!("no set `{name}` of sort {} is declared", u.sort))?;
            (name.to_owned(), bits.clone())
        }
        (None, Some(ids)) => (
            braces(&ids.iter().map(String::as_str).collect::<Vec<_>>()),
            u.table.select(ids)?,
        ),
        (None, None) => bail!("either --set or --ids is required"),
    };
    let p = u.table.partition();
    let r = p.rough_set(&x);
    let boundary = r.boundary();
    let t = &u.table;
    out.text(format!("lower {}", braces(&t.ids(&r.lower))))?;
    out.text(format!("upper {}", braces(&t.ids(&r.upper))))?;
    out.text(format!("boundary {}", braces(&t.ids(&boundary))))?;
    let statuses: Vec<(&str, &str)> = t
        .objects()
        .iter()
        .enumerate()
        .map(|(z, id)| (id.as_str(), p.membership_status(&x, z).as_str()))
        .collect();
    for (id, status) in &statuses {
        out.text(format!("{id} {status}"))?;
    }
    out.json(json!({
        "set": label,
        "sort": u.sort.to_string(),
        "lower": t.ids(&r.lower),
        "upper": t.ids(&r.upper),
        "boundary": t.ids(&boundary),
        "statuses": statuses.iter().map(|(id, s)| json!({ "id": id, "status": s })).collect::<Vec<_>>(),
    }))?;
    Ok(Status::Ok)
}

fn eval(
    manifest: &Path,
    query: Option<&str>,
    query_file: Option<&Path>,
    sets: Option<&Path>,
    out: &mut Out,
) -> Result<Status> {
    // Queries are parsed before the bundle is loaded so that a syntax error
    // is reported as such even when the data is also broken.
    let queries: Vec<Expr> = match (query, query_file) {
        (Some(q), _) => vec![dsl::parse(q)?],
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            dsl::parse_query_file(&text)
                .with_context(|| path.display().to_string())?
                .into_iter()
                .map(|(_, e)| e)
                .collect()
        }
        (None, None) => bail!("either --query or --query-file is required"),
    };
    let b = bundle::load(manifest, sets)?;
    let decls = b.sets.declarations();
    for q in &queries {
        let sorted = check_sorts(q, &decls).map_err(dsl::DslError::from)?;
        let value = evaluate_sorted(&sorted, &b.structure, &b.sets)?;
        let members = value.members(&b.structure);
        out.text(format!("{q} : {} = {{{}}}", sorted.sort, members.join(",")))?;
        out.json(
            json!({ "query": q.to_string(), "sort": sorted.sort.to_string(), "members": members }),
        )?;
    }
    Ok(Status::Ok)
}

fn law_record(r: &LawReport, out: &mut Out) -> Result<()> {
    out.text(r.record())?;
    if let Some(cx) = &r.counterexample {
        let mut detail = format!(
            "  trial={} coordinate={} X={{{}}} Y={{{}}}",
            cx.trial,
            cx.coordinate,
            cx.x.join(","),
            cx.y.join(",")
        );
        if let Some(e) = &cx.element {
            detail.push_str(&format!(" element={e}"));
        }
        out.text(detail)?;
    }
    out.json(json!({
        "law": r.law_name,
        "status": if r.passed() { "PASS" } else { "FAIL" },
        "trials": r.structures_checked,
        "counterexample": r.counterexample.as_ref().map(|cx| json!({
            "digest": cx.digest,
            "trial": cx.trial,
            "coordinate": cx.coordinate.to_string(),
            "x": cx.x,
            "y": cx.y,
            "element": cx.element,
        })),
    }))
}

fn selected_laws(names: &[String]) -> Result<Vec<Law>> {
    if names.is_empty() {
        return Ok(LAWS.to_vec());
    }
    names
        .iter()
        .map(|n| {
            find_law(n)
                .copied()
                .ok_or_else(|| anyhow!("unknown law `{n}`"))
        })
        .collect()
}

fn check(args: &CheckArgs, out: &mut Out) -> Result<Status> {
    let laws = selected_laws(&args.laws)?;
    let cfg = GenConfig::with_seed(args.seed);
    let reports = match &args.manifest {
        Some(m) => check_structure(&laws, &bundle::load(m, None)?.structure, args.seed),
        None => check_laws_with(&Library, &laws, &cfg, args.trials),
    };
    let mut failed = 0;
    for r in &reports {
        failed += usize::from(!r.passed());
        law_record(r, out)?;
    }
    if args.oracle {
        let eq = check_equivalence(&cfg, args.trials);
        failed += usize::from(eq.mismatch.is_some());
        out.text(eq.record())?;
        out.json(json!({
            "oracle": if eq.mismatch.is_none() { "PASS" } else { "FAIL" },
            "trials": eq.structures_checked,
            "comparisons": eq.comparisons,
            "mismatch": eq.mismatch.as_ref().map(|m| json!({
                "digest": m.digest,
                "trial": m.trial,
                "what": m.what,
                "expected": m.expected,
                "found": m.found,
            })),
        }))?;
    }
    if let Some(claim) = args.witness {
        failed += usize::from(!witness(claim, args.seed, args.budget, out)?);
    }
    out.text(format!(
        "SUMMARY passed={} failed={failed}",
        reports.len() - reports.iter().filter(|r| !r.passed()).count()
    ))?;
    Ok(if failed == 0 {
        Status::Ok
    } else {
        Status::Failed
    })
}

fn gen(args: &GenArgs, out: &mut Out) -> Result<Status> {
    let mut cfg = GenConfig {
        seed: args.seed,
        max_objects_per_sort: args.max_objects,
        max_attributes: args.max_attributes,
        max_atoms_per_attribute: args.max_atoms,
        phi_density: args.density,
        distinct_rows: args.distinct_rows,
    };
    cfg.validate()?;
    if let Some(i) = args.trial {
        cfg = cfg.for_trial(i);
    }
    let s = generate(&cfg);
    let digest = rough_afford::format::digest(&s);
    match &args.out {
        Some(dir) => {
            bundle::write(&s, dir)?;
            out.text(format!("wrote {} digest={digest}", dir.display()))?;
        }
        None => out.text(bundle_text(&s).trim_end())?,
    }
    out.json(json!({
        "digest": digest,
        "dims": s.dims(),
        "phi": s.phi().len(),
        "out": args.out.as_ref().map(|p| p.display().to_string()),
    }))?;
    Ok(Status::Ok)
}

fn witness_json(w: &Witness) -> Value {
    let s = &w.structure;
    json!({
        "claim": w.claim.name(),
        "digest": rough_afford::format::digest(s),
        "tried": w.structures_tried,
        "coordinate": w.coordinate.to_string(),
        "x": s.ids(&w.x),
        "y": s.ids(&w.y),
        "larger": s.ids(&w.larger),
        "smaller": s.ids(&w.smaller),
        "element": s.table(w.coordinate).objects()[w.element],
        "bundle": bundle_text(s),
    })
}

/// Prints the witness, or a `NOWITNESS` line. Returns whether one was found.
fn witness(claim: StrictnessClaim, seed: u64, budget: usize, out: &mut Out) -> Result<bool> {
    match find_witness(claim, &GenConfig::with_seed(seed), budget) {
        Some(w) => {
            out.text(w.render().trim_end())?;
            out.json(witness_json(&w))?;
            Ok(true)
        }
        None => {
            out.text(format!("NOWITNESS {} budget={budget}", claim.name()))?;
            out.json(json!({ "claim": claim.name(), "found": false, "budget": budget }))?;
            Ok(false)
        }
    }
}
