use std::collections::BTreeSet;

use super::check::{check_sorts, ExprSort, SortError, SortedExpr};
use super::{ApproxKind, BinOp, DslError, Expr};
use crate::affordance::{AffordanceStructure, SortSet};
use crate::operators::{cylindrify, PairSet};
use crate::sets::NamedSets;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Set(SortSet),
    Pairs(PairSet),
}

impl Value {
    pub fn sort(&self) -> ExprSort {
        match self {
            Value::Set(s) => ExprSort::Set(s.sort),
            Value::Pairs(p) => ExprSort::Pairs(p.sorts.0, p.sorts.1),
        }
    }

    /// Members as ids in table order; pairs as `(x,y)`.
    pub fn members(&self, s: &AffordanceStructure) -> Vec<String> {
        match self {
            Value::Set(set) => s.ids(set).into_iter().map(str::to_owned).collect(),
            Value::Pairs(p) => {
                let (f, g) = p.sorts;
                p.pairs
                    .iter()
                    .map(|&(x, y)| {
                        format!("({},{})", s.table(f).objects()[x], s.table(g).objects()[y])
                    })
                    .collect()
            }
        }
    }

    pub fn render(&self, s: &AffordanceStructure) -> String {
        format!("{{{}}}", self.members(s).join(","))
    }

    pub fn as_set(&self) -> Option<&SortSet> {
        match self {
            Value::Set(s) => Some(s),
            Value::Pairs(_) => None,
        }
    }
}

fn combine_sets(op: BinOp, a: &SortSet, b: &SortSet) -> SortSet {
    let bits = match op {
        BinOp::Union => a.bits.union(&b.bits),
        BinOp::Intersect => a.bits.intersection(&b.bits),
        BinOp::Diff => a.bits.difference(&b.bits),
    };
    SortSet::new(a.sort, bits)
}

fn combine_pairs(op: BinOp, a: &PairSet, b: &PairSet) -> PairSet {
    let pairs: BTreeSet<(usize, usize)> = match op {
        BinOp::Union => a.pairs.union(&b.pairs).copied().collect(),
        BinOp::Intersect => a.pairs.intersection(&b.pairs).copied().collect(),
        BinOp::Diff => a.pairs.difference(&b.pairs).copied().collect(),
    };
    PairSet {
        sorts: a.sorts,
        pairs,
    }
}

fn set(v: Value) -> SortSet {
    match v {
        Value::Set(s) => s,
        Value::Pairs(_) => unreachable!("sort checking rules out pairs here"),
    }
}

fn eval(e: &Expr, s: &AffordanceStructure, sets: &NamedSets) -> Result<Value, DslError> {
    Ok(match e {
        Expr::Set(name, _) => Value::Set(
            sets.get(name)
                .cloned()
                .ok_or_else(|| SortError::UnknownSetName(name.clone()))?,
        ),
        Expr::Binary(op, a, b) => match (eval(a, s, sets)?, eval(b, s, sets)?) {
            (Value::Set(x), Value::Set(y)) => Value::Set(combine_sets(*op, &x, &y)),
            (Value::Pairs(x), Value::Pairs(y)) => Value::Pairs(combine_pairs(*op, &x, &y)),
            _ => unreachable!("sort checking rules out mixed operands"),
        },
        Expr::Complement(_, inner) => Value::Set(set(eval(inner, s, sets)?).complement()),
        Expr::Approx(kind, _, inner) => {
            let x = set(eval(inner, s, sets)?);
            Value::Set(match kind {
                ApproxKind::Upper => s.upper_set(&x),
                ApproxKind::Lower => s.lower_set(&x),
            })
        }
        Expr::Call(call, a, b) => {
            let x = set(eval(a, s, sets)?);
            let y = set(eval(b, s, sets)?);
            Value::Set(call.apply(s, &x, &y)?)
        }
        Expr::Cyl(c, sel) => Value::Pairs(cylindrify(s, *sel, *c)),
    })
}

/// Evaluates a checked expression. `sets` must be the declarations it was
/// checked against, with sets drawn from `s`.
pub fn evaluate_sorted(
    q: &SortedExpr,
    s: &AffordanceStructure,
    sets: &NamedSets,
) -> Result<Value, DslError> {
    eval(&q.expr, s, sets)
}

/// Sort-checks against `sets` and evaluates.
pub fn evaluate(expr: &Expr, s: &AffordanceStructure, sets: &NamedSets) -> Result<Value, DslError> {
    let q = check_sorts(expr, &sets.declarations())?;
    evaluate_sorted(&q, s, sets)
}
