use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Digits(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    At,
    Pipe,
    Amp,
    Backslash,
    Bang,
    Eq,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Digits(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub(crate) fn symbol(&self) -> &'static str {
        match self {
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::At => "@",
            Tok::Pipe => "|",
            Tok::Amp => "&",
            Tok::Backslash => "\\",
            Tok::Bang => "!",
            Tok::Eq => "=",
            Tok::Ident(_) | Tok::Digits(_) | Tok::Eof => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits `text` into tokens with 1-based positions, counting columns in
/// characters. `first_line` is the number of the first line of `text`.
pub(crate) fn lex(text: &str, first_line: usize) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (first_line, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        let single = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '@' => Some(Tok::At),
            '|' => Some(Tok::Pipe),
            '&' => Some(Tok::Amp),
            '\\' => Some(Tok::Backslash),
            '!' => Some(Tok::Bang),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            col += 1;
            out.push(Spanned {
                tok,
                line: l0,
                col: c0,
            });
        } else if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: l0,
                col: c0,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Spanned {
                tok: Tok::Digits(s),
                line: l0,
                col: c0,
            });
        } else {
            return Err(SyntaxError {
                line: l0,
                col: c0,
                expected: vec!["a token".into()],
                found: format!("`{c}`"),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions() {
        let toks = lex("poss[E]\n  (X, Y)", 1).unwrap();
        let pos: Vec<_> = toks.iter().map(|t| (t.line, t.col)).collect();
        assert_eq!(
            pos,
            [
                (1, 1),
                (1, 5),
                (1, 6),
                (1, 7),
                (2, 3),
                (2, 4),
                (2, 5),
                (2, 7),
                (2, 8),
                (2, 9)
            ]
        );
        assert_eq!(toks[0].tok, Tok::Ident("poss".into()));
        assert_eq!(toks.last().unwrap().tok, Tok::Eof);
    }

    #[test]
    fn bad_character() {
        let e = lex("X | $Y", 3).unwrap_err();
        assert_eq!((e.line, e.col), (3, 5));
    }
}
