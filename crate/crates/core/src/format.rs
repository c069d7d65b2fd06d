//! Tab-separated text formats for tables, affordance relations, and named sets.
//!
//! Information system (columns are tab-separated; shown here with spaces):
//!
//! ```text
//! #table actors
//! id    height    agility
//! a1    201    L
//! a2    155    P
//! ```
//!
//! Attribute systems use the same layout; a cell may also be written as a
//! brace set `{L,S}` or `{}`. A plain cell `x` is the singleton `{x}`.
//!
//! Affordance relation, one `actor<TAB>object<TAB>environment` per line:
//!
//! ```text
//! #phi dunk
//! a3    o1    e1
//! ```
//!
//! Named sets, one `name<TAB>sort<TAB>id,id,...` per line with sort one of
//! `A`, `O`, `E`. Blank lines are ignored everywhere; `#` starts a comment
//! line in set files.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::affordance::{AffordanceStructure, Sort, SortSet, Triple};
use crate::bitset::BitSet;
use crate::model::{ASystem, AttributeTable, ModelError, ValueAtom};
use crate::sets::NamedSets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Model { line: usize, source: ModelError },
    #[error("line {line}: unknown {sort} id `{id}`")]
    UnknownId { line: usize, sort: Sort, id: String },
    #[error("line {line}: set `{name}` is declared twice")]
    DuplicateSet { line: usize, name: String },
}

impl LoadError {
    pub fn line(&self) -> usize {
        match self {
            Self::Syntax { line, .. }
            | Self::Model { line, .. }
            | Self::UnknownId { line, .. }
            | Self::DuplicateSet { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> LoadError {
    LoadError::Syntax {
        line,
        message: message.into(),
    }
}

// Non-blank lines with 1-based numbers and trailing `\r` removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    tag: &str,
) -> Result<(usize, Option<String>), LoadError> {
    let (n, l) = lines
        .next()
        .ok_or_else(|| syntax(1, format!("expected `{tag}` header")))?;
    let rest = l
        .strip_prefix(tag)
        .filter(|r| r.is_empty() || r.starts_with([' ', '\t']))
        .ok_or_else(|| syntax(n, format!("expected `{tag}` header")))?;
    let name = rest.trim();
    Ok((n, (!name.is_empty()).then(|| name.to_owned())))
}

fn parse_cell(line: usize, raw: &str) -> Result<BTreeSet<ValueAtom>, LoadError> {
    let t = raw.trim();
    let atom = |s: &str| ValueAtom::new(s).map_err(|source| LoadError::Model { line, source });
    if let Some(inner) = t.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| syntax(line, format!("unterminated value set `{t}`")))?;
        if inner.trim().is_empty() {
            return Ok(BTreeSet::new());
        }
        inner.split(',').map(atom).collect()
    } else {
        Ok(BTreeSet::from([atom(t)?]))
    }
}

/// Parses an attribute system, with rows' line numbers.
fn parse_asystem_lines(text: &str) -> Result<(ASystem, Vec<usize>), LoadError> {
    let mut lines = content_lines(text);
    let (n, name) = header(&mut lines, "#table")?;
    let name = name.ok_or_else(|| syntax(n, "table header needs a name"))?;
    let (hline, head) = lines
        .next()
        .ok_or_else(|| syntax(n + 1, "expected column header line"))?;
    let attributes: Vec<String> = head
        .split('\t')
        .skip(1)
        .map(|a| a.trim().to_owned())
        .collect();
    if let Some(a) = attributes.iter().find(|a| a.is_empty()) {
        return Err(syntax(hline, format!("empty attribute name `{a}`")));
    }
    let mut rows = Vec::new();
    let mut row_lines = Vec::new();
    for (line, l) in lines {
        let mut fields = l.split('\t');
        let id = fields.next().unwrap_or_default().trim();
        if id.is_empty() {
            return Err(syntax(line, "missing object id"));
        }
        let cells = fields
            .map(|f| parse_cell(line, f))
            .collect::<Result<Vec<_>, _>>()?;
        if cells.len() != attributes.len() {
            return Err(LoadError::Model {
                line,
                source: ModelError::RowArity {
                    object: id.to_owned(),
                    expected: attributes.len(),
                    found: cells.len(),
                },
            });
        }
        rows.push((id.to_owned(), cells));
        row_lines.push(line);
    }
    let line_of_object = |id: &str| {
        rows.iter()
            .position(|r| r.0 == id)
            .map_or(hline, |i| row_lines[i])
    };
    let sys = match ASystem::new(name, attributes, rows.clone()) {
        Ok(s) => s,
        Err(source) => {
            let line = match &source {
                ModelError::DuplicateObject(id) => {
                    // report the second occurrence
                    let first = rows.iter().position(|r| &r.0 == id).unwrap_or(0);
                    rows.iter()
                        .skip(first + 1)
                        .position(|r| &r.0 == id)
                        .map_or(hline, |j| row_lines[first + 1 + j])
                }
                ModelError::RowArity { object, .. } => line_of_object(object),
                _ => hline,
            };
            return Err(LoadError::Model { line, source });
        }
    };
    Ok((sys, row_lines))
}

pub fn parse_asystem(text: &str) -> Result<ASystem, LoadError> {
    parse_asystem_lines(text).map(|(s, _)| s)
}

/// Parses a deterministic information system; every cell must hold exactly
/// one atom.
pub fn parse_table(text: &str) -> Result<AttributeTable, LoadError> {
    let (sys, row_lines) = parse_asystem_lines(text)?;
    sys.to_attribute_table().map_err(|source| {
        let line = match &source {
            ModelError::NondeterministicSystem { object, .. }
            | ModelError::MissingValue { object, .. } => sys
                .objects()
                .iter()
                .position(|o| o == object)
                .map_or(1, |i| row_lines[i]),
            _ => 1,
        };
        LoadError::Model { line, source }
    })
}

/// Parses a relation file against three tables, in `(A, O, E)` order.
pub fn parse_phi(
    text: &str,
    actors: AttributeTable,
    objects: AttributeTable,
    environments: AttributeTable,
) -> Result<AffordanceStructure, LoadError> {
    let mut lines = content_lines(text);
    let (_, label) = header(&mut lines, "#phi")?;
    let tables = [&actors, &objects, &environments];
    let mut triples = Vec::new();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split('\t').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(syntax(
                line,
                format!("expected 3 tab-separated ids, found {}", fields.len()),
            ));
        }
        let mut t = [0; 3];
        for (k, sort) in Sort::ALL.into_iter().enumerate() {
            t[k] = tables[k]
                .position(fields[k])
                .ok_or_else(|| LoadError::UnknownId {
                    line,
                    sort,
                    id: fields[k].to_owned(),
                })?;
        }
        triples.push(Triple::from(t));
    }
    Ok(AffordanceStructure::new(
        actors,
        objects,
        environments,
        triples,
        label,
    ))
}

struct RawSet<'a> {
    line: usize,
    name: &'a str,
    sort: Sort,
    ids: Vec<&'a str>,
}

fn raw_sets(text: &str) -> Result<Vec<RawSet<'_>>, LoadError> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        if l.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = l.split('\t').collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(syntax(line, "expected `name<TAB>sort<TAB>ids`"));
        }
        let name = fields[0].trim();
        if name.is_empty() {
            return Err(syntax(line, "missing set name"));
        }
        let sort = match fields[1].trim() {
            s if s.len() == 1 => Sort::from_letter(s.chars().next().unwrap_or(' ')),
            _ => None,
        }
        .ok_or_else(|| {
            syntax(
                line,
                format!("sort must be A, O or E, found `{}`", fields[1].trim()),
            )
        })?;
        let ids = fields
            .get(2)
            .map(|s| {
                s.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default();
        out.push(RawSet {
            line,
            name,
            sort,
            ids,
        });
    }
    Ok(out)
}

/// Parses named sets against a structure; ids must belong to the declared sort.
pub fn parse_sets(text: &str, s: &AffordanceStructure) -> Result<NamedSets, LoadError> {
    let mut sets = NamedSets::new();
    for raw in raw_sets(text)? {
        let table = s.table(raw.sort);
        let mut bits = BitSet::empty(table.len());
        for id in &raw.ids {
            let x = table.position(id).ok_or_else(|| LoadError::UnknownId {
                line: raw.line,
                sort: raw.sort,
                id: (*id).to_owned(),
            })?;
            bits.insert(x);
        }
        if !sets.insert(raw.name, SortSet::new(raw.sort, bits)) {
            return Err(LoadError::DuplicateSet {
                line: raw.line,
                name: raw.name.to_owned(),
            });
        }
    }
    Ok(sets)
}

/// Parses named sets against a single table, keeping only entries of `sort`.
pub fn parse_sets_for_table(
    text: &str,
    table: &AttributeTable,
    sort: Sort,
) -> Result<Vec<(String, BitSet)>, LoadError> {
    let mut out: Vec<(String, BitSet)> = Vec::new();
    for raw in raw_sets(text)? {
        if raw.sort != sort {
            continue;
        }
        if out.iter().any(|(n, _)| n == raw.name) {
            return Err(LoadError::DuplicateSet {
                line: raw.line,
                name: raw.name.to_owned(),
            });
        }
        let bits = table.select(&raw.ids).map_err(|e| match e {
            ModelError::UnknownObject(id) => LoadError::UnknownId {
                line: raw.line,
                sort,
                id,
            },
            source => LoadError::Model {
                line: raw.line,
                source,
            },
        })?;
        out.push((raw.name.to_owned(), bits));
    }
    Ok(out)
}

pub fn write_table(t: &AttributeTable) -> String {
    let mut out = format!("#table {}\nid", t.name());
    for a in t.attributes() {
        out.push('\t');
        out.push_str(a);
    }
    out.push('\n');
    for (x, id) in t.objects().iter().enumerate() {
        out.push_str(id);
        for v in t.row(x) {
            out.push('\t');
            out.push_str(v.as_str());
        }
        out.push('\n');
    }
    out
}

pub fn write_asystem(s: &ASystem) -> String {
    let mut out = format!("#table {}\nid", s.name());
    for a in s.attributes() {
        out.push('\t');
        out.push_str(a);
    }
    out.push('\n');
    for (x, id) in s.objects().iter().enumerate() {
        out.push_str(id);
        for a in 0..s.attributes().len() {
            let cell = s.cell(x, a);
            out.push('\t');
            if cell.len() == 1 {
                out.push_str(
                    cell.iter()
                        .next()
                        .map(ValueAtom::as_str)
                        .unwrap_or_default(),
                );
            } else {
                let atoms: Vec<&str> = cell.iter().map(ValueAtom::as_str).collect();
                let _ = write!(out, "{{{}}}", atoms.join(","));
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_phi(s: &AffordanceStructure) -> String {
    let mut out = match s.label() {
        Some(l) => format!("#phi {l}\n"),
        None => "#phi\n".to_owned(),
    };
    for t in s.phi().iter() {
        let [a, o, e] = s.triple_ids(t);
        let _ = writeln!(out, "{a}\t{o}\t{e}");
    }
    out
}

pub fn write_sets(s: &AffordanceStructure, sets: &NamedSets) -> String {
    let mut out = String::new();
    for (name, set) in sets.iter() {
        let _ = writeln!(out, "{name}\t{}\t{}", set.sort, s.ids(set).join(","));
    }
    out
}

/// The three tables followed by the relation, blank-line separated.
pub fn bundle_text(s: &AffordanceStructure) -> String {
    let mut out = String::new();
    for sort in Sort::ALL {
        out.push_str(&write_table(s.table(sort)));
        out.push('\n');
    }
    out.push_str(&write_phi(s));
    out
}

/// A short content hash of [`bundle_text`].
pub fn digest(s: &AffordanceStructure) -> String {
    let hash = Sha256::digest(bundle_text(s).as_bytes());
    hex::encode(&hash[..6])
}

#[cfg(test)]
mod tests {
    use super::*;

    const ACTORS: &str = "#table actors\nid\theight\tagility\na1\t201\tL\na2\t155\tP\na8\t201\tL\n";

    #[test]
    fn table_round_trip() {
        let t = parse_table(ACTORS).unwrap();
        assert_eq!(t.name(), "actors");
        assert_eq!(t.partition().block_count(), 2);
        assert_eq!(write_table(&t), ACTORS);
        assert_eq!(parse_table(&write_table(&t)).unwrap(), t);
    }

    #[test]
    fn crlf_and_blank_lines() {
        let t = parse_table("#table t\r\n\r\nid\tx\r\nu\t1\r\n\r\n").unwrap();
        assert_eq!(t.objects(), ["u"]);
    }

    #[test]
    fn zero_attribute_table() {
        let t = parse_table("#table bare\nid\nx\ny\n").unwrap();
        assert_eq!(t.attributes().len(), 0);
        assert_eq!(t.partition().block_count(), 1);
    }

    #[test]
    fn asystem_cells() {
        let text = "#table s\nid\th\tg\na1\t201\t{L,S}\na2\t{}\tP\n";
        let s = parse_asystem(text).unwrap();
        assert!(!s.is_deterministic());
        assert_eq!(s.cell(0, 1).len(), 2);
        assert!(s.cell(1, 0).is_empty());
        assert_eq!(write_asystem(&s), text);
        assert_eq!(
            parse_table(text),
            Err(LoadError::Model {
                line: 3,
                source: ModelError::NondeterministicSystem {
                    object: "a1".into(),
                    attribute: "g".into()
                }
            })
        );
        let missing = "#table s\nid\th\na1\t201\na2\t{}\n";
        assert_eq!(
            parse_table(missing),
            Err(LoadError::Model {
                line: 4,
                source: ModelError::MissingValue {
                    object: "a2".into(),
                    attribute: "h".into()
                }
            })
        );
    }

    #[test]
    fn table_errors_carry_lines() {
        let dup = "#table t\nid\th\nx\t1\ny\t2\nx\t3\n";
        assert_eq!(parse_table(dup).unwrap_err().line(), 5);
        let arity = "#table t\nid\th\tg\nx\t1\n";
        assert_eq!(parse_table(arity).unwrap_err().line(), 3);
        assert_eq!(parse_table("id\th\n").unwrap_err().line(), 1);
        let dup_attr = "#table t\nid\th\th\nx\t1\t2\n";
        assert!(matches!(
            parse_table(dup_attr),
            Err(LoadError::Model {
                line: 2,
                source: ModelError::DuplicateAttribute(_)
            })
        ));
    }

    fn structure() -> AffordanceStructure {
        parse_phi(
            "#phi fetch\na1\to1\te1\na2\to1\te1\n",
            parse_table(ACTORS).unwrap(),
            parse_table("#table toys\nid\tkind\no1\tstick\n").unwrap(),
            parse_table("#table parks\nid\tdog\ne1\t1\ne2\t0\n").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn phi_round_trip() {
        let s = structure();
        assert_eq!(s.label(), Some("fetch"));
        assert_eq!(s.phi().len(), 2);
        assert_eq!(write_phi(&s), "#phi fetch\na1\to1\te1\na2\to1\te1\n");
    }

    #[test]
    fn phi_unknown_id_reports_line() {
        let err = parse_phi(
            "#phi\na1\to1\te1\na1\to2\te1\n",
            parse_table(ACTORS).unwrap(),
            parse_table("#table toys\nid\tkind\no1\tstick\n").unwrap(),
            parse_table("#table parks\nid\tdog\ne1\t1\n").unwrap(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            LoadError::UnknownId {
                line: 3,
                sort: Sort::O,
                id: "o2".into()
            }
        );
    }

    #[test]
    fn named_sets() {
        let s = structure();
        let sets = parse_sets("# comment\nX\tA\ta1,a8\nNone\tE\t\nToys\tO\to1\n", &s).unwrap();
        assert_eq!(sets.len(), 3);
        assert_eq!(s.ids(sets.get("X").unwrap()), ["a1", "a8"]);
        assert!(sets.get("None").unwrap().is_empty());
        assert_eq!(
            write_sets(&s, &sets),
            "X\tA\ta1,a8\nNone\tE\t\nToys\tO\to1\n"
        );

        let wrong_sort = parse_sets("X\tO\ta1\n", &s).unwrap_err();
        assert_eq!(
            wrong_sort,
            LoadError::UnknownId {
                line: 1,
                sort: Sort::O,
                id: "a1".into()
            }
        );
        assert!(matches!(
            parse_sets("X\tA\ta1\nX\tA\ta2\n", &s),
            Err(LoadError::DuplicateSet { line: 2, .. })
        ));
        assert!(parse_sets("X\tQ\ta1\n", &s).is_err());
    }

    #[test]
    fn digest_is_stable() {
        let s = structure();
        assert_eq!(digest(&s), digest(&structure()));
        assert_eq!(digest(&s).len(), 12);
        assert_ne!(digest(&s), digest(&s.with_phi([])));
    }
}
