//! Attribute systems, deterministic information systems, and indiscernibility.
//!
//! An [`ASystem`] assigns every (object, attribute) pair a *set* of value
//! atoms. When every such set holds at most one atom the system is
//! deterministic, and when additionally no set is empty it collapses into an
//! [`AttributeTable`]: the classic table with exactly one value per cell.
//!
//! Every table carries its indiscernibility [`Partition`], computed once at
//! construction. Two objects share a block exactly when their value vectors
//! are equal.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("value atom is empty")]
    EmptyAtom,
    #[error("duplicate object id `{0}`")]
    DuplicateObject(String),
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("row `{object}` has {found} cells, expected {expected}")]
    RowArity {
        object: String,
        expected: usize,
        found: usize,
    },
    #[error("table `{0}` has no objects")]
    EmptyTable(String),
    #[error("cell ({object}, {attribute}) holds more than one value")]
    NondeterministicSystem { object: String, attribute: String },
    #[error("cell ({object}, {attribute}) is empty")]
    MissingValue { object: String, attribute: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

/// An opaque value token. Atoms compare by exact string equality only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueAtom(String);

impl ValueAtom {
    /// Trims surrounding whitespace; the remainder must be non-empty.
    pub fn new(text: impl AsRef<str>) -> Result<Self, ModelError> {
        let t = text.as_ref().trim();
        if t.is_empty() {
            return Err(ModelError::EmptyAtom);
        }
        Ok(Self(t.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ValueAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn check_distinct<'a>(
    items: impl IntoIterator<Item = &'a String>,
    err: fn(String) -> ModelError,
) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for it in items {
        if !seen.insert(it.as_str()) {
            return Err(err(it.clone()));
        }
    }
    Ok(())
}

/// An attribute system with set-valued cells.
///
/// The value domain of each attribute is not stored; it is whatever atoms
/// occur in that column. A property system is the special case of a single
/// attribute, see [`ASystem::property_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASystem {
    name: String,
    objects: Vec<String>,
    attributes: Vec<String>,
    // row-major, objects.len() * attributes.len()
    cells: Vec<BTreeSet<ValueAtom>>,
}

impl ASystem {
    pub fn new(
        name: impl Into<String>,
        attributes: Vec<String>,
        rows: Vec<(String, Vec<BTreeSet<ValueAtom>>)>,
    ) -> Result<Self, ModelError> {
        check_distinct(&attributes, ModelError::DuplicateAttribute)?;
        check_distinct(rows.iter().map(|r| &r.0), ModelError::DuplicateObject)?;
        let mut objects = Vec::with_capacity(rows.len());
        let mut cells = Vec::with_capacity(rows.len() * attributes.len());
        for (id, row) in rows {
            if row.len() != attributes.len() {
                return Err(ModelError::RowArity {
                    object: id,
                    expected: attributes.len(),
                    found: row.len(),
                });
            }
            objects.push(id);
            cells.extend(row);
        }
        Ok(Self {
            name: name.into(),
            objects,
            attributes,
            cells,
        })
    }

    /// A property system `⟨U, V, f⟩` as a one-column attribute system whose
    /// cell for `u` holds the property set `f(u)`.
    pub fn property_system(
        name: impl Into<String>,
        label: impl Into<String>,
        rows: Vec<(String, BTreeSet<ValueAtom>)>,
    ) -> Result<Self, ModelError> {
        Self::new(
            name,
            vec![label.into()],
            rows.into_iter()
                .map(|(id, props)| (id, vec![props]))
                .collect(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn cell(&self, object: usize, attribute: usize) -> &BTreeSet<ValueAtom> {
        &self.cells[object * self.attributes.len() + attribute]
    }

    /// True iff every cell holds at most one atom.
    pub fn is_deterministic(&self) -> bool {
        self.cells.iter().all(|c| c.len() <= 1)
    }

    /// Positions of the objects whose cells all hold at most one atom.
    pub fn deterministic_objects(&self) -> Vec<usize> {
        (0..self.objects.len())
            .filter(|&x| (0..self.attributes.len()).all(|a| self.cell(x, a).len() <= 1))
            .collect()
    }

    /// Collapses every singleton cell to its atom.
    ///
    /// Fails on the first cell (in row-major order) that holds two or more
    /// atoms or none at all.
    pub fn to_attribute_table(&self) -> Result<AttributeTable, ModelError> {
        let width = self.attributes.len();
        let mut rows = Vec::with_capacity(self.objects.len());
        for (x, id) in self.objects.iter().enumerate() {
            let mut row = Vec::with_capacity(width);
            for a in 0..width {
                let cell = self.cell(x, a);
                let mut it = cell.iter();
                match (it.next(), it.next()) {
                    (Some(v), None) => row.push(v.clone()),
                    (None, _) => {
                        return Err(ModelError::MissingValue {
                            object: id.clone(),
                            attribute: self.attributes[a].clone(),
                        })
                    }
                    (Some(_), Some(_)) => {
                        return Err(ModelError::NondeterministicSystem {
                            object: id.clone(),
                            attribute: self.attributes[a].clone(),
                        })
                    }
                }
            }
            rows.push((id.clone(), row));
        }
        AttributeTable::new(self.name.clone(), self.attributes.clone(), rows)
    }
}

/// A deterministic information system: finitely many objects, each with
/// exactly one atom per attribute.
#[derive(Debug, Clone)]
pub struct AttributeTable {
    name: String,
    objects: Vec<String>,
    attributes: Vec<String>,
    cells: Vec<ValueAtom>,
    index: HashMap<String, usize>,
    partition: Partition,
}

impl PartialEq for AttributeTable {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.objects == other.objects
            && self.attributes == other.attributes
            && self.cells == other.cells
    }
}

impl Eq for AttributeTable {}

impl AttributeTable {
    pub fn new(
        name: impl Into<String>,
        attributes: Vec<String>,
        rows: Vec<(String, Vec<ValueAtom>)>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        if rows.is_empty() {
            return Err(ModelError::EmptyTable(name));
        }
        check_distinct(&attributes, ModelError::DuplicateAttribute)?;
        let mut objects = Vec::with_capacity(rows.len());
        let mut cells = Vec::with_capacity(rows.len() * attributes.len());
        let mut index = HashMap::with_capacity(rows.len());
        for (pos, (id, row)) in rows.into_iter().enumerate() {
            if index.insert(id.clone(), pos).is_some() {
                return Err(ModelError::DuplicateObject(id));
            }
            if row.len() != attributes.len() {
                return Err(ModelError::RowArity {
                    object: id,
                    expected: attributes.len(),
                    found: row.len(),
                });
            }
            objects.push(id);
            cells.extend(row);
        }
        let partition = Partition::by_rows(objects.len(), |x| {
            &cells[x * attributes.len()..(x + 1) * attributes.len()]
        });
        Ok(Self {
            name,
            objects,
            attributes,
            cells,
            index,
            partition,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    /// Always false; tables are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// The row of atoms at a position, in attribute order.
    pub fn row(&self, x: usize) -> &[ValueAtom] {
        let w = self.attributes.len();
        &self.cells[x * w..(x + 1) * w]
    }

    /// The value vector `f(x)` of an object, in attribute order.
    pub fn value_vector(&self, id: &str) -> Result<&[ValueAtom], ModelError> {
        self.position(id)
            .map(|x| self.row(x))
            .ok_or_else(|| ModelError::UnknownObject(id.to_owned()))
    }

    /// The cached indiscernibility partition.
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Resolves ids to a position set.
    pub fn select<S: AsRef<str>>(&self, ids: &[S]) -> Result<BitSet, ModelError> {
        let mut set = BitSet::empty(self.len());
        for id in ids {
            let id = id.as_ref();
            let x = self
                .position(id)
                .ok_or_else(|| ModelError::UnknownObject(id.to_owned()))?;
            set.insert(x);
        }
        Ok(set)
    }

    /// Ids of a position set, in table order.
    pub fn ids(&self, set: &BitSet) -> Vec<&str> {
        set.iter().map(|x| self.objects[x].as_str()).collect()
    }

    /// A copy of this table with one more column appended.
    pub fn with_attribute(
        &self,
        attribute: impl Into<String>,
        values: Vec<ValueAtom>,
    ) -> Result<Self, ModelError> {
        let mut attributes = self.attributes.clone();
        attributes.push(attribute.into());
        if values.len() != self.len() {
            return Err(ModelError::RowArity {
                object: self.objects.get(values.len()).cloned().unwrap_or_default(),
                expected: self.len(),
                found: values.len(),
            });
        }
        let rows = self
            .objects
            .iter()
            .zip(values)
            .enumerate()
            .map(|(x, (id, v))| {
                let mut row = self.row(x).to_vec();
                row.push(v);
                (id.clone(), row)
            })
            .collect();
        Self::new(self.name.clone(), attributes, rows)
    }
}

/// Computes the quotient of a table's objects by equality of value vectors.
///
/// Equivalent to [`AttributeTable::partition`], which caches this result.
pub fn indiscernibility_partition(table: &AttributeTable) -> Partition {
    Partition::by_rows(table.len(), |x| table.row(x))
}

/// The blocks of an equivalence relation on `0..len`.
///
/// Blocks are ordered by the position of their first member, and members
/// within a block ascend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_sets: Vec<BitSet>,
    block_of: Vec<usize>,
}

impl Partition {
    fn by_rows<'a>(len: usize, row: impl Fn(usize) -> &'a [ValueAtom]) -> Self {
        let mut first_seen: HashMap<&[ValueAtom], usize> = HashMap::new();
        let mut block_of = Vec::with_capacity(len);
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..len {
            let next = blocks.len();
            let b = *first_seen.entry(row(x)).or_insert(next);
            if b == next {
                blocks.push(Vec::new());
            }
            blocks[b].push(x);
            block_of.push(b);
        }
        Self::from_parts(len, blocks, block_of)
    }

    /// Builds a partition from a block label per element. Labels need not be
    /// contiguous; block order follows first occurrence.
    pub fn from_labels<L: Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut first_seen: HashMap<&L, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for (x, l) in labels.iter().enumerate() {
            let next = blocks.len();
            let b = *first_seen.entry(l).or_insert(next);
            if b == next {
                blocks.push(Vec::new());
            }
            blocks[b].push(x);
            block_of.push(b);
        }
        Self::from_parts(labels.len(), blocks, block_of)
    }

    fn from_parts(len: usize, blocks: Vec<Vec<usize>>, block_of: Vec<usize>) -> Self {
        let block_sets = blocks
            .iter()
            .map(|b| BitSet::from_indices(len, b.iter().copied()))
            .collect();
        Self {
            blocks,
            block_sets,
            block_of,
        }
    }

    /// Size of the underlying domain.
    pub fn universe(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// The class `[x]` as a set.
    pub fn class_of(&self, x: usize) -> &BitSet {
        &self.block_sets[self.block_of[x]]
    }

    pub fn block_set(&self, b: usize) -> &BitSet {
        &self.block_sets[b]
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn atoms(vals: &[&str]) -> Vec<ValueAtom> {
        vals.iter().map(|v| ValueAtom::new(v).unwrap()).collect()
    }

    fn set(vals: &[&str]) -> BTreeSet<ValueAtom> {
        atoms(vals).into_iter().collect()
    }

    fn actors() -> AttributeTable {
        let rows = [
            ("a1", "201", "L"),
            ("a2", "155", "P"),
            ("a3", "189", "H"),
            ("a4", "190", "L"),
            ("a5", "178", "S"),
            ("a6", "181", "P"),
            ("a7", "190", "L"),
            ("a8", "201", "L"),
            ("a9", "178", "S"),
        ];
        AttributeTable::new(
            "actors",
            vec!["height".into(), "agility".into()],
            rows.iter()
                .map(|(id, h, a)| (id.to_string(), atoms(&[h, a])))
                .collect(),
        )
        .unwrap()
    }

    fn names(t: &AttributeTable, p: &Partition) -> Vec<Vec<String>> {
        p.blocks()
            .iter()
            .map(|b| b.iter().map(|&x| t.objects()[x].clone()).collect())
            .collect()
    }

    #[test]
    fn atoms_are_trimmed_and_non_empty() {
        assert_eq!(ValueAtom::new("  L ").unwrap().as_str(), "L");
        assert_eq!(ValueAtom::new(" \t"), Err(ModelError::EmptyAtom));
    }

    #[test]
    fn determinism_check() {
        let rows = |cells: Vec<BTreeSet<ValueAtom>>| {
            ASystem::new(
                "s",
                vec!["h".into(), "g".into()],
                vec![("a1".into(), cells)],
            )
            .unwrap()
        };
        assert!(rows(vec![set(&["1"]), set(&["L"])]).is_deterministic());
        assert!(!rows(vec![set(&["1"]), set(&["L", "S"])]).is_deterministic());
        assert!(rows(vec![set(&[]), set(&["L"])]).is_deterministic());
    }

    #[test]
    fn collapse_to_table() {
        let sys = ASystem::new(
            "actors",
            vec!["height".into(), "agility".into()],
            vec![
                ("a1".into(), vec![set(&["201"]), set(&["L"])]),
                ("a2".into(), vec![set(&["155"]), set(&["P"])]),
            ],
        )
        .unwrap();
        let t = sys.to_attribute_table().unwrap();
        assert_eq!(t.value_vector("a2").unwrap(), &atoms(&["155", "P"])[..]);
        assert_eq!(t.objects(), sys.objects());

        let bad = ASystem::new(
            "actors",
            vec!["height".into(), "agility".into()],
            vec![
                ("a1".into(), vec![set(&["201"]), set(&["L", "S"])]),
                ("a2".into(), vec![set(&[]), set(&["P"])]),
            ],
        )
        .unwrap();
        assert_eq!(
            bad.to_attribute_table(),
            Err(ModelError::NondeterministicSystem {
                object: "a1".into(),
                attribute: "agility".into()
            })
        );
        let missing = ASystem::new(
            "actors",
            vec!["height".into()],
            vec![
                ("a1".into(), vec![set(&["201"])]),
                ("a2".into(), vec![set(&[])]),
            ],
        )
        .unwrap();
        assert_eq!(
            missing.to_attribute_table(),
            Err(ModelError::MissingValue {
                object: "a2".into(),
                attribute: "height".into()
            })
        );
        assert_eq!(bad.deterministic_objects(), vec![1]);
    }

    #[test]
    fn property_system_is_single_column() {
        let p = ASystem::property_system(
            "toys",
            "props",
            vec![
                ("t1".into(), set(&["round", "red"])),
                ("t2".into(), set(&[])),
            ],
        )
        .unwrap();
        assert_eq!(p.attributes(), ["props"]);
        assert_eq!(p.cell(0, 0).len(), 2);
        assert!(!p.is_deterministic());
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = AttributeTable::new(
            "t",
            vec!["h".into()],
            vec![("x".into(), atoms(&["1"])), ("x".into(), atoms(&["2"]))],
        );
        assert_eq!(err, Err(ModelError::DuplicateObject("x".into())));
        let err = AttributeTable::new("t", vec!["h".into(), "h".into()], vec![]);
        assert_eq!(err, Err(ModelError::EmptyTable("t".into())));
        let err = AttributeTable::new(
            "t",
            vec!["h".into(), "h".into()],
            vec![("x".into(), atoms(&["1", "2"]))],
        );
        assert_eq!(err, Err(ModelError::DuplicateAttribute("h".into())));
    }

    #[test]
    fn value_vectors() {
        let t = actors();
        assert_eq!(t.value_vector("a1").unwrap(), &atoms(&["201", "L"])[..]);
        assert_eq!(t.value_vector("a5").unwrap(), &atoms(&["178", "S"])[..]);
        assert_eq!(
            t.value_vector("zz"),
            Err(ModelError::UnknownObject("zz".into()))
        );
    }

    #[test]
    fn actors_partition() {
        let t = actors();
        assert_eq!(
            names(&t, t.partition()),
            vec![
                vec!["a1", "a8"],
                vec!["a2"],
                vec!["a3"],
                vec!["a4", "a7"],
                vec!["a5", "a9"],
                vec!["a6"],
            ]
        );
        assert_eq!(&indiscernibility_partition(&t), t.partition());
    }

    #[test]
    fn zero_attributes_give_one_block() {
        let t = AttributeTable::new(
            "bare",
            vec![],
            vec![
                ("x".into(), vec![]),
                ("y".into(), vec![]),
                ("z".into(), vec![]),
            ],
        )
        .unwrap();
        assert_eq!(t.partition().blocks(), &[vec![0, 1, 2]]);
    }

    fn arb_table() -> impl Strategy<Value = (AttributeTable, Vec<ValueAtom>)> {
        (1usize..8, 0usize..4).prop_flat_map(|(n, w)| {
            (
                proptest::collection::vec(proptest::collection::vec(0u8..3, w), n),
                proptest::collection::vec(0u8..3, n),
            )
                .prop_map(move |(rows, extra)| {
                    let rows = rows
                        .into_iter()
                        .enumerate()
                        .map(|(i, r)| {
                            let cells = r
                                .into_iter()
                                .map(|v| ValueAtom::new(v.to_string()).unwrap())
                                .collect();
                            (format!("x{i}"), cells)
                        })
                        .collect();
                    let attrs = (0..w).map(|a| format!("p{a}")).collect();
                    let extra = extra
                        .into_iter()
                        .map(|v| ValueAtom::new(v.to_string()).unwrap())
                        .collect();
                    (AttributeTable::new("t", attrs, rows).unwrap(), extra)
                })
        })
    }

    proptest! {
        #[test]
        fn blocks_match_value_vectors((t, _) in arb_table()) {
            let p = t.partition();
            let n = t.len();
            let mut cover = BitSet::empty(n);
            for (b, members) in p.blocks().iter().enumerate() {
                prop_assert!(!members.is_empty());
                prop_assert!(!cover.intersects(p.block_set(b)));
                cover.union_with(p.block_set(b));
            }
            prop_assert!(cover.is_full());
            for x in 0..n {
                for y in 0..n {
                    prop_assert_eq!(p.same_block(x, y), t.row(x) == t.row(y));
                }
            }
            prop_assert_eq!(p, &indiscernibility_partition(&t));
        }

        #[test]
        fn adding_a_column_refines((t, extra) in arb_table()) {
            let finer = t.with_attribute("extra", extra).unwrap();
            for b in finer.partition().blocks() {
                let coarse = t.partition().class_of(b[0]);
                prop_assert!(b.iter().all(|&x| coarse.contains(x)));
            }
        }
    }
}
