use super::lexer::{lex, Spanned, Tok};
use super::{ApproxKind, BinOp, DslError, Expr, SyntaxError};
use crate::affordance::{RelationSelector, Sort};
use crate::operators::{OpCall, Operator, RoughnessMask};

const SORTS: [&str; 3] = ["`A`", "`O`", "`E`"];
const SELECTORS: [&str; 3] = ["`raw`", "`upper`", "`lower`"];

/// Words that cannot name a set.
pub fn is_reserved(word: &str) -> bool {
    Operator::from_name(word).is_some() || word == "up" || word == "low"
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn peek_tok(&self) -> &Tok {
        &self.peek().tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        let t = self.peek();
        Err(DslError::Syntax(SyntaxError {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| (*s).to_owned()).collect(),
            found: t.tok.describe(),
        }))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), DslError> {
        if *self.peek_tok() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("`{}`", tok.symbol())])
        }
    }

    fn ident_is(&self, word: &str) -> bool {
        matches!(self.peek_tok(), Tok::Ident(w) if w == word)
    }

    fn sort(&mut self) -> Result<Sort, DslError> {
        if let Tok::Ident(w) = self.peek_tok() {
            let mut cs = w.chars();
            if let (Some(c), None) = (cs.next(), cs.next()) {
                if let Some(s) = Sort::from_letter(c) {
                    self.bump();
                    return Ok(s);
                }
            }
        }
        self.fail(&SORTS)
    }

    fn sort_tag(&mut self) -> Result<Sort, DslError> {
        self.expect(Tok::At)?;
        self.sort()
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_tok() {
                Tok::Pipe => BinOp::Union,
                Tok::Amp => BinOp::Intersect,
                Tok::Backslash => BinOp::Diff,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let start = self.peek().clone();
        match &start.tok {
            Tok::Bang => {
                self.bump();
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                let sort = self.sort_tag()?;
                Ok(Expr::Complement(sort, Box::new(inner)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(w) if w == "up" || w == "low" => {
                let kind = if w == "up" {
                    ApproxKind::Upper
                } else {
                    ApproxKind::Lower
                };
                self.bump();
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                let sort = self.sort_tag()?;
                Ok(Expr::Approx(kind, sort, Box::new(inner)))
            }
            Tok::Ident(w) => {
                if let Some(op) = Operator::from_name(w) {
                    self.bump();
                    return self.op_call(op);
                }
                let name = w.clone();
                self.bump();
                match self.peek_tok() {
                    Tok::LBracket => Err(DslError::UnknownOperatorName {
                        name,
                        line: start.line,
                        col: start.col,
                    }),
                    Tok::At => {
                        let sort = self.sort_tag()?;
                        Ok(Expr::Set(name, Some(sort)))
                    }
                    _ => Ok(Expr::Set(name, None)),
                }
            }
            _ => self.fail(&["operator", "`up`", "`low`", "`!`", "`(`", "set name"]),
        }
    }

    fn op_call(&mut self, op: Operator) -> Result<Expr, DslError> {
        self.expect(Tok::LBracket)?;
        let coord = self.sort()?;
        let masked = op == Operator::AlphaUp;
        let mut call = OpCall::new(op, coord, RelationSelector::Raw);
        let mut seen_selector = false;
        loop {
            match self.peek_tok() {
                Tok::RBracket => {
                    self.bump();
                    break;
                }
                Tok::Semi if !seen_selector || masked => {
                    self.bump();
                    let sel = match self.peek_tok() {
                        Tok::Ident(w) if !seen_selector => match w.as_str() {
                            "raw" => Some(RelationSelector::Raw),
                            "upper" => Some(RelationSelector::Upper),
                            "lower" => Some(RelationSelector::Lower),
                            _ => None,
                        },
                        _ => None,
                    };
                    if let Some(sel) = sel {
                        self.bump();
                        call.sel = sel;
                        seen_selector = true;
                    } else if masked && self.ident_is("mask") {
                        self.bump();
                        call.mask = self.mask()?;
                        self.expect(Tok::RBracket)?;
                        break;
                    } else if seen_selector {
                        return self.fail(&["`mask`"]);
                    } else if masked {
                        return self.fail(&[SELECTORS[0], SELECTORS[1], SELECTORS[2], "`mask`"]);
                    } else {
                        return self.fail(&SELECTORS);
                    }
                }
                _ if !seen_selector || masked => return self.fail(&["`;`", "`]`"]),
                _ => return self.fail(&["`]`"]),
            }
        }
        if op == Operator::Cyl {
            return Ok(Expr::Cyl(coord, call.sel));
        }
        self.expect(Tok::LParen)?;
        let first = self.expr()?;
        self.expect(Tok::Comma)?;
        let second = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(Expr::Call(call, Box::new(first), Box::new(second)))
    }

    fn mask(&mut self) -> Result<RoughnessMask, DslError> {
        self.expect(Tok::Eq)?;
        if let Tok::Digits(d) = self.peek_tok() {
            if let Ok(m) = d.parse::<RoughnessMask>() {
                self.bump();
                return Ok(m);
            }
        }
        self.fail(&["mask digits from 1, 2, 3 or `0`"])
    }
}

/// Parses one query.
pub fn parse(text: &str) -> Result<Expr, DslError> {
    parse_at(text, 1)
}

/// Like [`parse`], numbering lines from `first_line`.
pub fn parse_at(text: &str, first_line: usize) -> Result<Expr, DslError> {
    let toks = lex(text, first_line).map_err(DslError::Syntax)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek_tok() != Tok::Eof {
        return p.fail(&["`|`", "`&`", "`\\`", "end of input"]);
    }
    Ok(e)
}

/// A query file: one query per line, `#` comment lines, blank lines skipped.
/// Returns each query with its line number, or the first error.
pub fn parse_query_file(text: &str) -> Result<Vec<(usize, Expr)>, DslError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(n, l)| parse_at(l, n).map(|e| (n, e)))
        .collect()
}
