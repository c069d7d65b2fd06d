//! A small query language over named sets.
//!
//! ```text
//! expr   := term { ("|" | "&" | "\") term }
//! term   := opCall | approx | "!" "(" expr ")" "@" sort | setRef | "(" expr ")"
//! opCall := op "[" sort [";" selector] [";" "mask=" digits] "]" "(" expr "," expr ")"
//!         | "cyl" "[" sort [";" selector] "]"
//! approx := ("up" | "low") "(" expr ")" "@" sort
//! setRef := ident ["@" sort]
//! ```
//!
//! Binary operators share one precedence level and associate to the left.
//! `mask=` is accepted by `alpha_up` only; `mask=0` is the empty mask.
//!
//! ```
//! use rough_afford::dsl::parse;
//!
//! let q = parse("alpha_up[A; mask=32](S, P)").unwrap();
//! assert_eq!(q.to_string(), "alpha_up[A; raw; mask=23](S, P)");
//! ```

mod check;
mod eval;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::affordance::{RelationSelector, Sort};
use crate::operators::{OpCall, OpError, Operator};

pub use check::{check_sorts, ExprSort, SortError, SortedExpr};
pub use eval::{evaluate, evaluate_sorted, Value};
pub use parser::{is_reserved, parse, parse_at, parse_query_file};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Union,
    Intersect,
    Diff,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Union => "|",
            Self::Intersect => "&",
            Self::Diff => "\\",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApproxKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    /// A named set, optionally tagged with its sort.
    Set(String, Option<Sort>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Complement within the tagged sort.
    Complement(Sort, Box<Expr>),
    Approx(ApproxKind, Sort, Box<Expr>),
    /// A set operator; the mask is [`RoughnessMask::FULL`](crate::RoughnessMask::FULL)
    /// unless the operator is `alpha_up`.
    Call(OpCall, Box<Expr>, Box<Expr>),
    Cyl(Sort, RelationSelector),
}

impl Expr {
    pub fn set(name: &str) -> Self {
        Self::Set(name.to_owned(), None)
    }

    /// Operators mentioned anywhere in the expression.
    pub fn operators(&self) -> Vec<Operator> {
        let mut out = Vec::new();
        self.visit(&mut |e| match e {
            Expr::Call(c, ..) => out.push(c.op),
            Expr::Cyl(..) => out.push(Operator::Cyl),
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Set(..) | Expr::Cyl(..) => {}
            Expr::Complement(_, e) | Expr::Approx(_, _, e) => e.visit(f),
            Expr::Binary(_, a, b) | Expr::Call(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }
}

/// Canonical text: selector always shown, the `alpha_up` mask always shown,
/// one space after commas and around binary operators.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Set(name, None) => f.write_str(name),
            Expr::Set(name, Some(s)) => write!(f, "{name}@{s}"),
            Expr::Binary(op, a, b) => {
                write!(f, "{a} {} ", op.symbol())?;
                if matches!(**b, Expr::Binary(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Expr::Complement(s, e) => write!(f, "!({e})@{s}"),
            Expr::Approx(ApproxKind::Upper, s, e) => write!(f, "up({e})@{s}"),
            Expr::Approx(ApproxKind::Lower, s, e) => write!(f, "low({e})@{s}"),
            Expr::Call(call, a, b) => {
                write!(f, "{}[{}; {}", call.op, call.coord, call.sel.keyword())?;
                if call.op == Operator::AlphaUp {
                    write!(f, "; mask={}", call.mask)?;
                }
                write!(f, "]({a}, {b})")
            }
            Expr::Cyl(c, sel) => write!(f, "cyl[{c}; {}]", sel.keyword()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: expected {}, found {found}", expected.join(" or "))]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {0}")]
    Syntax(SyntaxError),
    #[error("syntax error at {line}:{col}: unknown operator `{name}`")]
    UnknownOperatorName {
        name: String,
        line: usize,
        col: usize,
    },
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error(transparent)]
    Op(#[from] OpError),
}

impl DslError {
    /// Position of syntax-level errors.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            Self::Syntax(e) => Some((e.line, e.col)),
            Self::UnknownOperatorName { line, col, .. } => Some((*line, *col)),
            _ => None,
        }
    }

    pub fn is_syntax(&self) -> bool {
        self.position().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::RoughnessMask;

    fn rt(text: &str) -> String {
        let e = parse(text).unwrap();
        let printed = e.to_string();
        assert_eq!(parse(&printed).unwrap(), e, "{printed}");
        printed
    }

    #[test]
    fn spec_shapes() {
        let e = parse("poss[E; raw](X, Y)").unwrap();
        assert_eq!(
            e,
            Expr::Call(
                OpCall::new(Operator::Poss, Sort::E, RelationSelector::Raw),
                Box::new(Expr::set("X")),
                Box::new(Expr::set("Y"))
            )
        );
        let e = parse("alpha_up[A; mask=23](S, P)").unwrap();
        let Expr::Call(call, ..) = e else { panic!() };
        assert_eq!(call.mask, RoughnessMask::from_slots([2, 3]).unwrap());
        assert_eq!(call.sel, RelationSelector::Raw);
        let e = parse("poss[E; upper](up(X)@A, up(Y)@O)").unwrap();
        let Expr::Call(_, a, _) = e else { panic!() };
        assert!(matches!(*a, Expr::Approx(ApproxKind::Upper, Sort::A, _)));
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(rt("poss[E](X,Y)"), "poss[E; raw](X, Y)");
        assert_eq!(rt("alpha_up[E](X,Y)"), "alpha_up[E; raw; mask=123](X, Y)");
        assert_eq!(
            rt("alpha_up[E;upper;mask=0](X,Y)"),
            "alpha_up[E; upper; mask=0](X, Y)"
        );
        assert_eq!(rt("X|Y&Z"), "X | Y & Z");
        assert_eq!(rt("X|(Y&Z)"), "X | (Y & Z)");
        assert_eq!(rt("((X))"), "X");
        assert_eq!(rt("!(X@A)@A\\low(Y)@A"), "!(X@A)@A \\ low(Y)@A");
        assert_eq!(rt("cyl[O;lower]"), "cyl[O; lower]");
    }

    #[test]
    fn left_associative() {
        let e = parse("X \\ Y \\ Z").unwrap();
        let Expr::Binary(BinOp::Diff, lhs, rhs) = e else {
            panic!()
        };
        assert!(matches!(*lhs, Expr::Binary(BinOp::Diff, ..)));
        assert_eq!(*rhs, Expr::set("Z"));
    }

    #[test]
    fn errors_have_positions() {
        let cases: &[(&str, (usize, usize))] = &[
            ("poss[E](X Y)", (1, 11)),
            ("poss[Q](X, Y)", (1, 6)),
            ("posss[E](X, Y)", (1, 1)),
            ("suff[E; mask=12](X, Y)", (1, 9)),
            ("alpha_up[E; mask=4](X, Y)", (1, 18)),
            ("up(X)", (1, 6)),
            ("X |\n  | Y", (2, 3)),
            ("cyl[E](X, Y)", (1, 7)),
        ];
        for (text, pos) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!(err.position(), Some(*pos), "{text}: {err}");
        }
    }

    #[test]
    fn error_message() {
        let err = parse("poss[E](X Y)").unwrap_err();
        assert_eq!(
            err.to_string(),
            "syntax error at 1:11: expected `,`, found `Y`"
        );
    }

    #[test]
    fn query_file() {
        let qs = parse_query_file("# comment\n\nX | Y\n  poss[E](X, Y)\n").unwrap();
        assert_eq!(qs.iter().map(|q| q.0).collect::<Vec<_>>(), [3, 4]);
        let err = parse_query_file("X\n# c\nX |\n").unwrap_err();
        assert_eq!(err.position(), Some((3, 4)));
    }

    #[test]
    fn operators_listed() {
        let e = parse("poss[E](X, Y) | cyl[A] & nec[O](up(Z)@A, W)").unwrap();
        assert_eq!(
            e.operators(),
            [Operator::Poss, Operator::Cyl, Operator::Nec]
        );
    }
}
