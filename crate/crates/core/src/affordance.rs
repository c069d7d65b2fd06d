//! Affordance structures: three information systems and a ternary relation.
//!
//! The relation `φ ⊆ A × O × E` is stored extensionally as a dense bitset
//! over the product of the three tables' row positions. It need not be a
//! union of class products: two indiscernible actors may differ in whether
//! they take part in `φ`.
//!
//! The rough affordance `⟨φ̲, φ̄⟩` is derived from the class products
//! `[a] × [o] × [e]`. Both approximations are computed on first use and cached.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::model::{AttributeTable, ModelError, Partition};

/// One of the three sorts of an affordance structure. Also used to pick
/// the result coordinate of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    A,
    O,
    E,
}

impl Sort {
    pub const ALL: [Sort; 3] = [Sort::A, Sort::O, Sort::E];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The two other sorts, in `(A, O, E)` order.
    pub fn others(self) -> (Sort, Sort) {
        match self {
            Sort::A => (Sort::O, Sort::E),
            Sort::O => (Sort::A, Sort::E),
            Sort::E => (Sort::A, Sort::O),
        }
    }

    /// Places a result element and the two argument elements at their
    /// positions in an `(a, o, e)` triple.
    #[inline]
    pub fn assemble(self, own: usize, first: usize, second: usize) -> [usize; 3] {
        match self {
            Sort::A => [own, first, second],
            Sort::O => [first, own, second],
            Sort::E => [first, second, own],
        }
    }

    pub fn letter(self) -> char {
        match self {
            Sort::A => 'A',
            Sort::O => 'O',
            Sort::E => 'E',
        }
    }

    pub fn from_letter(c: char) -> Option<Sort> {
        match c {
            'A' => Some(Sort::A),
            'O' => Some(Sort::O),
            'E' => Some(Sort::E),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// An `(actor, object, environment)` triple of row positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub a: usize,
    pub o: usize,
    pub e: usize,
}

impl Triple {
    pub fn new(a: usize, o: usize, e: usize) -> Self {
        Self { a, o, e }
    }

    pub fn as_array(self) -> [usize; 3] {
        [self.a, self.o, self.e]
    }

    pub fn get(self, sort: Sort) -> usize {
        self.as_array()[sort.index()]
    }
}

impl From<[usize; 3]> for Triple {
    fn from([a, o, e]: [usize; 3]) -> Self {
        Self { a, o, e }
    }
}

/// A set of triples over fixed sort sizes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    dims: [usize; 3],
    bits: BitSet,
}

impl Relation {
    pub fn empty(dims: [usize; 3]) -> Self {
        Self {
            dims,
            bits: BitSet::empty(dims[0] * dims[1] * dims[2]),
        }
    }

    pub fn full(dims: [usize; 3]) -> Self {
        Self {
            dims,
            bits: BitSet::full(dims[0] * dims[1] * dims[2]),
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    fn offset(&self, [a, o, e]: [usize; 3]) -> usize {
        debug_assert!(a < self.dims[0] && o < self.dims[1] && e < self.dims[2]);
        (a * self.dims[1] + o) * self.dims[2] + e
    }

    #[inline]
    pub fn contains(&self, t: [usize; 3]) -> bool {
        self.bits.contains(self.offset(t))
    }

    pub fn insert(&mut self, t: [usize; 3]) {
        let i = self.offset(t);
        self.bits.insert(i);
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Triples in lexicographic `(a, o, e)` order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        let [_, no, ne] = self.dims;
        self.bits
            .iter()
            .map(move |i| Triple::new(i / (no * ne), (i / ne) % no, i % ne))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|t| (t.a, t.o, t.e)))
            .finish()
    }
}

/// Which relation an operator reads: `φ`, `φ̄`, or `φ̲`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RelationSelector {
    #[default]
    Raw,
    Upper,
    Lower,
}

impl RelationSelector {
    pub const ALL: [RelationSelector; 3] = [Self::Raw, Self::Upper, Self::Lower];

    pub fn keyword(self) -> &'static str {
        match self {
            Self::Raw => "raw",
            Self::Upper => "upper",
            Self::Lower => "lower",
        }
    }
}

/// A set of elements of one sort.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SortSet {
    pub sort: Sort,
    pub bits: BitSet,
}

impl SortSet {
    pub fn new(sort: Sort, bits: BitSet) -> Self {
        Self { sort, bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    pub fn complement(&self) -> Self {
        Self::new(self.sort, self.bits.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.sort == other.sort && self.bits.is_subset(&other.bits)
    }
}

impl fmt::Debug for SortSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.sort, self.bits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown {sort} id `{id}`")]
    UnknownId { sort: Sort, id: String },
}

/// `⟨φ̲, φ̄⟩`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoughAffordance {
    pub lower: Relation,
    pub upper: Relation,
}

/// Three information systems and an affordance relation over their objects.
#[derive(Debug, Clone)]
pub struct AffordanceStructure {
    tables: [AttributeTable; 3],
    phi: Relation,
    label: Option<String>,
    upper: OnceLock<Relation>,
    lower: OnceLock<Relation>,
}

impl PartialEq for AffordanceStructure {
    fn eq(&self, other: &Self) -> bool {
        self.tables == other.tables && self.phi == other.phi && self.label == other.label
    }
}

impl Eq for AffordanceStructure {}

impl AffordanceStructure {
    /// Tables are non-empty by construction, so every sort is non-empty.
    ///
    /// Panics if a triple refers to a row outside its table; use
    /// [`AffordanceStructure::from_ids`] for checked construction.
    pub fn new(
        actors: AttributeTable,
        objects: AttributeTable,
        environments: AttributeTable,
        phi: impl IntoIterator<Item = Triple>,
        label: Option<String>,
    ) -> Self {
        let dims = [actors.len(), objects.len(), environments.len()];
        let mut rel = Relation::empty(dims);
        for t in phi {
            assert!(
                t.a < dims[0] && t.o < dims[1] && t.e < dims[2],
                "triple {t:?} outside sorts {dims:?}"
            );
            rel.insert(t.as_array());
        }
        Self {
            tables: [actors, objects, environments],
            phi: rel,
            label,
            upper: OnceLock::new(),
            lower: OnceLock::new(),
        }
    }

    pub fn from_ids<S: AsRef<str>>(
        actors: AttributeTable,
        objects: AttributeTable,
        environments: AttributeTable,
        phi: &[(S, S, S)],
        label: Option<String>,
    ) -> Result<Self, StructureError> {
        let tables = [&actors, &objects, &environments];
        let resolve = |sort: Sort, id: &str| {
            tables[sort.index()]
                .position(id)
                .ok_or_else(|| StructureError::UnknownId {
                    sort,
                    id: id.to_owned(),
                })
        };
        let triples = phi
            .iter()
            .map(|(a, o, e)| {
                Ok(Triple::new(
                    resolve(Sort::A, a.as_ref())?,
                    resolve(Sort::O, o.as_ref())?,
                    resolve(Sort::E, e.as_ref())?,
                ))
            })
            .collect::<Result<Vec<_>, StructureError>>()?;
        Ok(Self::new(actors, objects, environments, triples, label))
    }

    pub fn table(&self, sort: Sort) -> &AttributeTable {
        &self.tables[sort.index()]
    }

    pub fn partition(&self, sort: Sort) -> &Partition {
        self.tables[sort.index()].partition()
    }

    pub fn size(&self, sort: Sort) -> usize {
        self.tables[sort.index()].len()
    }

    pub fn dims(&self) -> [usize; 3] {
        self.phi.dims()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn phi(&self) -> &Relation {
        &self.phi
    }

    /// A copy with the same tables and a different relation.
    pub fn with_phi(&self, phi: impl IntoIterator<Item = Triple>) -> Self {
        let [a, o, e] = self.tables.clone();
        Self::new(a, o, e, phi, self.label.clone())
    }

    pub fn relation(&self, sel: RelationSelector) -> &Relation {
        match sel {
            RelationSelector::Raw => &self.phi,
            RelationSelector::Upper => self.upper_affordance(),
            RelationSelector::Lower => self.lower_affordance(),
        }
    }

    /// `φ̄`: all triples whose class product meets `φ`.
    pub fn upper_affordance(&self) -> &Relation {
        self.upper
            .get_or_init(|| self.saturate(|hits, size| hits > 0 && size > 0))
    }

    /// `φ̲`: all triples whose class product lies inside `φ`.
    pub fn lower_affordance(&self) -> &Relation {
        self.lower
            .get_or_init(|| self.saturate(|hits, size| hits == size))
    }

    pub fn rough_affordance(&self) -> RoughAffordance {
        RoughAffordance {
            lower: self.lower_affordance().clone(),
            upper: self.upper_affordance().clone(),
        }
    }

    // Counts φ-triples per block triple and keeps every triple whose block
    // triple satisfies `keep(hits, product_size)`.
    fn saturate(&self, keep: impl Fn(usize, usize) -> bool) -> Relation {
        let [pa, po, pe] = [
            self.partition(Sort::A),
            self.partition(Sort::O),
            self.partition(Sort::E),
        ];
        let nb = [pa.block_count(), po.block_count(), pe.block_count()];
        let slot =
            |t: Triple| (pa.block_of(t.a) * nb[1] + po.block_of(t.o)) * nb[2] + pe.block_of(t.e);
        let mut hits = vec![0usize; nb[0] * nb[1] * nb[2]];
        for t in self.phi.iter() {
            hits[slot(t)] += 1;
        }
        let mut out = Relation::empty(self.dims());
        for (ba, ma) in pa.blocks().iter().enumerate() {
            for (bo, mo) in po.blocks().iter().enumerate() {
                for (be, me) in pe.blocks().iter().enumerate() {
                    let h = hits[(ba * nb[1] + bo) * nb[2] + be];
                    if !keep(h, ma.len() * mo.len() * me.len()) {
                        continue;
                    }
                    for &a in ma {
                        for &o in mo {
                            for &e in me {
                                out.insert([a, o, e]);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn empty_set(&self, sort: Sort) -> SortSet {
        SortSet::new(sort, BitSet::empty(self.size(sort)))
    }

    pub fn full_set(&self, sort: Sort) -> SortSet {
        SortSet::new(sort, BitSet::full(self.size(sort)))
    }

    /// Resolves ids of one sort.
    pub fn select<S: AsRef<str>>(&self, sort: Sort, ids: &[S]) -> Result<SortSet, StructureError> {
        let bits = self.table(sort).select(ids).map_err(|e| match e {
            ModelError::UnknownObject(id) => StructureError::UnknownId { sort, id },
            other => other.into(),
        })?;
        Ok(SortSet::new(sort, bits))
    }

    /// Ids of a set, in table order.
    pub fn ids(&self, set: &SortSet) -> Vec<&str> {
        self.table(set.sort).ids(&set.bits)
    }

    pub fn triple_ids(&self, t: Triple) -> [&str; 3] {
        [
            self.tables[0].objects()[t.a].as_str(),
            self.tables[1].objects()[t.o].as_str(),
            self.tables[2].objects()[t.e].as_str(),
        ]
    }

    /// Approximates a set with the partition of its own sort.
    pub fn upper_set(&self, x: &SortSet) -> SortSet {
        SortSet::new(x.sort, self.partition(x.sort).upper(&x.bits))
    }

    pub fn lower_set(&self, x: &SortSet) -> SortSet {
        SortSet::new(x.sort, self.partition(x.sort).lower(&x.bits))
    }
}
