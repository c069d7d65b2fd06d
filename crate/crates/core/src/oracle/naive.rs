//! Reference evaluator that reads the operator definitions literally.
//!
//! Everything here enumerates triples and compares raw value vectors. It
//! deliberately shares nothing with the partition, relation and operator
//! code it is used to check.

use std::collections::{BTreeSet, HashSet};

use super::OracleError;
use crate::affordance::{AffordanceStructure, RelationSelector, Sort};
use crate::operators::RoughnessMask;

type T3 = (usize, usize, usize);

/// A structure unpacked into plain sets of triples.
pub struct NaiveModel<'a> {
    s: &'a AffordanceStructure,
    n: [usize; 3],
    phi: HashSet<T3>,
    upper: HashSet<T3>,
    lower: HashSet<T3>,
}

fn argument_sorts(c: Sort) -> (Sort, Sort) {
    match c {
        Sort::A => (Sort::O, Sort::E),
        Sort::O => (Sort::A, Sort::E),
        Sort::E => (Sort::A, Sort::O),
    }
}

fn place(c: Sort, r: usize, u: usize, v: usize) -> T3 {
    match c {
        Sort::A => (r, u, v),
        Sort::O => (u, r, v),
        Sort::E => (u, v, r),
    }
}

fn slot(sort: Sort) -> usize {
    match sort {
        Sort::A => 0,
        Sort::O => 1,
        Sort::E => 2,
    }
}

impl<'a> NaiveModel<'a> {
    pub fn new(s: &'a AffordanceStructure) -> Self {
        let n = [Sort::A, Sort::O, Sort::E].map(|so| s.table(so).objects().len());
        let phi: HashSet<T3> = s.phi().iter().map(|t| (t.a, t.o, t.e)).collect();
        let mut model = Self {
            s,
            n,
            phi,
            upper: HashSet::new(),
            lower: HashSet::new(),
        };
        let all = model.all_triples();
        for &t in &all {
            let similar: Vec<T3> = all
                .iter()
                .copied()
                .filter(|&u| model.same_triple(t, u))
                .collect();
            if similar.iter().any(|u| model.phi.contains(u)) {
                model.upper.insert(t);
            }
            if similar.iter().all(|u| model.phi.contains(u)) {
                model.lower.insert(t);
            }
        }
        model
    }

    fn all_triples(&self) -> Vec<T3> {
        let mut out = Vec::new();
        for a in 0..self.n[0] {
            for o in 0..self.n[1] {
                for e in 0..self.n[2] {
                    out.push((a, o, e));
                }
            }
        }
        out
    }

    fn size(&self, sort: Sort) -> usize {
        self.n[slot(sort)]
    }

    fn same(&self, sort: Sort, x: usize, y: usize) -> bool {
        let t = self.s.table(sort);
        t.row(x) == t.row(y)
    }

    fn same_triple(&self, t: T3, u: T3) -> bool {
        self.same(Sort::A, t.0, u.0) && self.same(Sort::O, t.1, u.1) && self.same(Sort::E, t.2, u.2)
    }

    fn rel(&self, sel: RelationSelector) -> &HashSet<T3> {
        match sel {
            RelationSelector::Raw => &self.phi,
            RelationSelector::Upper => &self.upper,
            RelationSelector::Lower => &self.lower,
        }
    }

    pub fn relation(&self, sel: RelationSelector) -> BTreeSet<[usize; 3]> {
        self.rel(sel).iter().map(|&(a, o, e)| [a, o, e]).collect()
    }

    /// `{ z : some element similar to z lies in x }`
    pub fn upper_set(&self, sort: Sort, x: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.size(sort))
            .filter(|&z| x.iter().any(|&w| self.same(sort, z, w)))
            .collect()
    }

    /// `{ z : every element similar to z lies in x }`
    pub fn lower_set(&self, sort: Sort, x: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.size(sort))
            .filter(|&z| (0..self.size(sort)).all(|w| !self.same(sort, z, w) || x.contains(&w)))
            .collect()
    }

    pub fn cylindrify(&self, sel: RelationSelector, c: Sort) -> BTreeSet<(usize, usize)> {
        self.rel(sel)
            .iter()
            .map(|&(a, o, e)| match c {
                Sort::A => (o, e),
                Sort::O => (a, e),
                Sort::E => (a, o),
            })
            .collect()
    }

    /// Evaluates a set operator by name; `mask` is read only by `alpha_up`.
    pub fn eval(
        &self,
        op: &str,
        sel: RelationSelector,
        c: Sort,
        mask: RoughnessMask,
        x: &BTreeSet<usize>,
        y: &BTreeSet<usize>,
    ) -> Result<BTreeSet<usize>, OracleError> {
        let rel = self.rel(sel);
        let (first, second) = argument_sorts(c);
        let us: Vec<usize> = (0..self.size(first)).collect();
        let vs: Vec<usize> = (0..self.size(second)).collect();
        let holds = |r: usize, u: usize, v: usize| rel.contains(&place(c, r, u, v));
        let pred: Box<dyn Fn(usize) -> bool + '_> = match op {
            "poss" => Box::new(|r| x.iter().any(|&u| y.iter().any(|&v| holds(r, u, v)))),
            "suff" => Box::new(|r| x.iter().all(|&u| y.iter().all(|&v| holds(r, u, v)))),
            "nec" => Box::new(|r| {
                us.iter().all(|&u| {
                    vs.iter()
                        .all(|&v| !holds(r, u, v) || x.contains(&u) || y.contains(&v))
                })
            }),
            "dusuff" => Box::new(|r| {
                us.iter().any(|&u| {
                    vs.iter()
                        .any(|&v| !x.contains(&u) && !y.contains(&v) && !holds(r, u, v))
                })
            }),
            "suffstar" => Box::new(|r| {
                us.iter().all(|&u| {
                    vs.iter()
                        .all(|&v| x.contains(&u) || y.contains(&v) || holds(r, u, v))
                })
            }),
            "necu" => Box::new(|r| {
                let nec = us.iter().all(|&u| {
                    vs.iter()
                        .all(|&v| !holds(r, u, v) || x.contains(&u) || y.contains(&v))
                });
                let star = us.iter().all(|&u| {
                    vs.iter()
                        .all(|&v| x.contains(&u) || y.contains(&v) || holds(r, u, v))
                });
                nec && star
            }),
            "possu" => Box::new(|r| {
                x.iter().any(|&u| y.iter().any(|&v| holds(r, u, v)))
                    || x.iter().any(|&u| y.iter().any(|&v| !holds(r, u, v)))
            }),
            "alpha_up" => {
                let xs = if mask.has(2) {
                    self.upper_set(first, x)
                } else {
                    x.clone()
                };
                let ys = if mask.has(3) {
                    self.upper_set(second, y)
                } else {
                    y.clone()
                };
                let n = self.size(c);
                Box::new(move |r| {
                    (0..n)
                        .filter(|&r2| {
                            if mask.has(1) {
                                self.same(c, r, r2)
                            } else {
                                r2 == r
                            }
                        })
                        .any(|r2| xs.iter().any(|&u| ys.iter().any(|&v| holds(r2, u, v))))
                })
            }
            "alpha_low" => {
                let xs = self.lower_set(first, x);
                let ys = self.lower_set(second, y);
                let n = self.size(c);
                Box::new(move |r| {
                    (0..n)
                        .filter(|&r2| self.same(c, r, r2))
                        .all(|r2| xs.iter().all(|&u| ys.iter().all(|&v| holds(r2, u, v))))
                })
            }
            other => return Err(OracleError::UnknownOperator(other.to_owned())),
        };
        Ok((0..self.size(c)).filter(|&r| pred(r)).collect())
    }
}

/// One-shot form of [`NaiveModel::eval`].
pub fn naive_eval(
    s: &AffordanceStructure,
    op: &str,
    sel: RelationSelector,
    c: Sort,
    mask: RoughnessMask,
    x: &BTreeSet<usize>,
    y: &BTreeSet<usize>,
) -> Result<BTreeSet<usize>, OracleError> {
    NaiveModel::new(s).eval(op, sel, c, mask, x, y)
}
