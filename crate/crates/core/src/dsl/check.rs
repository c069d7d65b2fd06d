use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::Expr;
use crate::affordance::Sort;

/// What an expression denotes: a subset of one sort, or a set of pairs
/// over two sorts (from `cyl`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExprSort {
    Set(Sort),
    Pairs(Sort, Sort),
}

impl fmt::Display for ExprSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Set(s) => write!(f, "{s}"),
            Self::Pairs(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("sort mismatch at {path}: expected {expected}, found {found}")]
    SortMismatch {
        path: String,
        expected: ExprSort,
        found: ExprSort,
    },
    #[error("unknown set `{0}`")]
    UnknownSetName(String),
}

/// An expression that passed [`check_sorts`], with its result sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedExpr {
    pub expr: Expr,
    pub sort: ExprSort,
}

fn child(path: &str, step: &str) -> String {
    format!("{path}.{step}")
}

fn expect(path: &str, expected: ExprSort, found: ExprSort) -> Result<(), SortError> {
    if expected == found {
        Ok(())
    } else {
        Err(SortError::SortMismatch {
            path: path.to_owned(),
            expected,
            found,
        })
    }
}

fn infer(e: &Expr, decls: &HashMap<String, Sort>, path: &str) -> Result<ExprSort, SortError> {
    match e {
        Expr::Set(name, tag) => {
            let declared = *decls
                .get(name)
                .ok_or_else(|| SortError::UnknownSetName(name.clone()))?;
            if let Some(t) = tag {
                expect(path, ExprSort::Set(*t), ExprSort::Set(declared))?;
            }
            Ok(ExprSort::Set(declared))
        }
        Expr::Binary(_, a, b) => {
            let sa = infer(a, decls, &child(path, "lhs"))?;
            let sb = infer(b, decls, &child(path, "rhs"))?;
            expect(&child(path, "rhs"), sa, sb)?;
            Ok(sa)
        }
        Expr::Complement(s, inner) | Expr::Approx(_, s, inner) => {
            let p = child(path, "arg");
            expect(&p, ExprSort::Set(*s), infer(inner, decls, &p)?)?;
            Ok(ExprSort::Set(*s))
        }
        Expr::Call(call, a, b) => {
            let (first, second) = call.coord.others();
            let (p1, p2) = (child(path, "arg1"), child(path, "arg2"));
            expect(&p1, ExprSort::Set(first), infer(a, decls, &p1)?)?;
            expect(&p2, ExprSort::Set(second), infer(b, decls, &p2)?)?;
            Ok(ExprSort::Set(call.coord))
        }
        Expr::Cyl(c, _) => {
            let (first, second) = c.others();
            Ok(ExprSort::Pairs(first, second))
        }
    }
}

/// Infers the sort of every node against declared set sorts. Paths in
/// errors start at `$` and step through `lhs`, `rhs`, `arg`, `arg1`, `arg2`.
pub fn check_sorts(expr: &Expr, decls: &HashMap<String, Sort>) -> Result<SortedExpr, SortError> {
    let sort = infer(expr, decls, "$")?;
    Ok(SortedExpr {
        expr: expr.clone(),
        sort,
    })
}
