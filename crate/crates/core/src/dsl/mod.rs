//! Text formats: marker-scheme documents, configuration literals and
//! experiment parameter files.
//!
//! ```text
//! alphabet 4
//! rule {
//!   start = "000"
//!   end = "111"
//!   map "2332" -> "3223"
//!   map "3223" -> "2332"
//! }
//! ```
//!
//! Words are quoted symbol strings; `s^n` repeats a symbol. `#` starts a
//! comment and semicolons are optional.

use std::fmt;

use serde::Serialize;

use crate::symbolic::{char_symbol, Alphabet, Symbol};

mod literal;
mod scheme;

pub use literal::{
    parse_bar_point, parse_bi_configuration, parse_config, parse_config_in, parse_measure, parse_omega_point,
    parse_zd_descriptor, render_bar_point, ConfigLiteral, ZdDescriptor,
};
pub use scheme::{parse_scheme, render_scheme, render_word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCode {
    UnexpectedChar,
    UnexpectedToken,
    UnexpectedEnd,
    UnterminatedString,
    BadSymbol,
    BadRepeat,
    SymbolOutOfRange,
    BadAlphabet,
    EmptyWord,
    MissingField,
    DuplicateField,
    LengthMismatch,
    DataLengthMismatch,
    NotBijective,
    InvariantViolation,
    BadWeight,
    BadDescriptor,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::UnexpectedChar => "unexpected-char",
            ErrorCode::UnexpectedToken => "unexpected-token",
            ErrorCode::UnexpectedEnd => "unexpected-end",
            ErrorCode::UnterminatedString => "unterminated-string",
            ErrorCode::BadSymbol => "bad-symbol",
            ErrorCode::BadRepeat => "bad-repeat",
            ErrorCode::SymbolOutOfRange => "symbol-out-of-range",
            ErrorCode::BadAlphabet => "bad-alphabet",
            ErrorCode::EmptyWord => "empty-word",
            ErrorCode::MissingField => "missing-field",
            ErrorCode::DuplicateField => "duplicate-field",
            ErrorCode::LengthMismatch => "length-mismatch",
            ErrorCode::DataLengthMismatch => "data-length-mismatch",
            ErrorCode::NotBijective => "not-bijective",
            ErrorCode::InvariantViolation => "invariant-violation",
            ErrorCode::BadWeight => "bad-weight",
            ErrorCode::BadDescriptor => "bad-descriptor",
        }
    }
}

/// A parse error at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
pub struct DslError {
    pub line: usize,
    pub column: usize,
    pub code: ErrorCode,
    pub message: String,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: [{}] {}", self.line, self.column, self.code.as_str(), self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub(crate) fn err(self, code: ErrorCode, message: impl Into<String>) -> DslError {
        DslError { line: self.line, column: self.column, code, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    /// Expanded word with the position of each symbol.
    Word(Vec<(Symbol, Pos)>),
    Punct(char),
    Arrow,
    Newline,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Word(_) => "a word".into(),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Newline => "end of line".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer {
    chars: Vec<char>,
    i: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) {
        if self.chars[self.i] == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        self.i += 1;
    }

    fn digits(&mut self) -> String {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        self.chars[start..self.i].iter().collect()
    }

    /// Symbols with `^n` repeats up to `close`, which is consumed.
    fn word(&mut self, open: Pos, close: char) -> Result<Vec<(Symbol, Pos)>, DslError> {
        let mut w: Vec<(Symbol, Pos)> = Vec::new();
        loop {
            let p = self.pos();
            match self.peek() {
                None | Some('\n') => {
                    return Err(open.err(ErrorCode::UnterminatedString, format!("missing closing `{close}`")))
                }
                Some(c) if c == close => {
                    self.bump();
                    return Ok(w);
                }
                Some('^') => {
                    self.bump();
                    let Some(&(last, _)) = w.last() else {
                        return Err(p.err(ErrorCode::BadRepeat, "`^` must follow a symbol"));
                    };
                    let n: usize = self
                        .digits()
                        .parse()
                        .map_err(|_| p.err(ErrorCode::BadRepeat, "`^` must be followed by a count"))?;
                    if n == 0 {
                        return Err(p.err(ErrorCode::BadRepeat, "repeat count must be positive"));
                    }
                    w.extend(std::iter::repeat((last, p)).take(n - 1));
                }
                Some(c) => match char_symbol(c) {
                    Some(s) => {
                        w.push((s, p));
                        self.bump();
                    }
                    None => return Err(p.err(ErrorCode::BadSymbol, format!("`{c}` is not a symbol"))),
                },
            }
        }
    }
}

/// Splits text into tokens. Newlines are kept only when `lines` is set.
/// The contents of `"..."` and of `(...)` lex as words.
pub(crate) fn tokenize(text: &str, lines: bool) -> Result<Vec<(Tok, Pos)>, DslError> {
    let mut lx = Lexer { chars: text.chars().collect(), i: 0, line: 1, column: 1 };
    let mut out = Vec::new();
    while let Some(c) = lx.peek() {
        let pos = lx.pos();
        match c {
            '\n' => {
                if lines {
                    out.push((Tok::Newline, pos));
                }
                lx.bump();
            }
            c if c.is_whitespace() => lx.bump(),
            '#' => {
                while lx.peek().is_some_and(|c| c != '\n') {
                    lx.bump();
                }
            }
            '"' => {
                lx.bump();
                let w = lx.word(pos, '"')?;
                out.push((Tok::Word(w), pos));
            }
            '(' => {
                lx.bump();
                out.push((Tok::Punct('('), pos));
                let inner = lx.pos();
                let w = lx.word(pos, ')')?;
                out.push((Tok::Word(w), inner));
                out.push((Tok::Punct(')'), pos));
            }
            '-' if lx.chars.get(lx.i + 1) == Some(&'>') => {
                lx.bump();
                lx.bump();
                out.push((Tok::Arrow, pos));
            }
            c if c.is_ascii_digit() => {
                let n = lx.digits().parse().map_err(|_| pos.err(ErrorCode::UnexpectedToken, "integer too large"))?;
                out.push((Tok::Int(n), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = lx.i;
                while lx.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                    lx.bump();
                }
                out.push((Tok::Ident(lx.chars[start..lx.i].iter().collect()), pos));
            }
            '{' | '}' | '=' | ';' | '*' | '@' | '/' | ',' | '-' | ':' => {
                lx.bump();
                out.push((Tok::Punct(c), pos));
            }
            _ => return Err(pos.err(ErrorCode::UnexpectedChar, format!("unexpected `{c}`"))),
        }
    }
    out.push((Tok::End, lx.pos()));
    Ok(out)
}

/// Token cursor shared by the parsers.
pub(crate) struct Cursor {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Cursor {
    pub(crate) fn new(toks: Vec<(Tok, Pos)>) -> Self {
        Cursor { toks, at: 0 }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub(crate) fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> DslError {
        let code = if *self.peek() == Tok::End { ErrorCode::UnexpectedEnd } else { ErrorCode::UnexpectedToken };
        self.pos().err(code, format!("expected {wanted}, found {}", self.peek().describe()))
    }

    pub(crate) fn expect_punct(&mut self, c: char) -> Result<Pos, DslError> {
        if *self.peek() == Tok::Punct(c) {
            Ok(self.next().1)
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    pub(crate) fn eat_punct(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.next();
        }
    }

    pub(crate) fn expect_ident(&mut self, name: &str) -> Result<Pos, DslError> {
        match self.peek() {
            Tok::Ident(s) if s == name => Ok(self.next().1),
            _ => Err(self.unexpected(&format!("`{name}`"))),
        }
    }

    pub(crate) fn int(&mut self) -> Result<(i64, Pos), DslError> {
        let neg = self.eat_punct('-');
        match self.next() {
            (Tok::Int(n), p) => Ok((if neg { -n } else { n }, p)),
            _ => {
                self.at -= 1;
                Err(self.unexpected("an integer"))
            }
        }
    }

    pub(crate) fn word(&mut self) -> Result<(Vec<(Symbol, Pos)>, Pos), DslError> {
        match self.peek().clone() {
            Tok::Word(w) => {
                let p = self.next().1;
                Ok((w, p))
            }
            _ => Err(self.unexpected("a quoted word")),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        *self.peek() == Tok::End
    }
}

/// Drops positions after checking every symbol against the alphabet.
pub(crate) fn checked(w: &[(Symbol, Pos)], alphabet: Option<Alphabet>) -> Result<Vec<Symbol>, DslError> {
    if let Some(a) = alphabet {
        if let Some((s, p)) = w.iter().find(|(s, _)| !a.contains(*s)) {
            return Err(p.err(
                ErrorCode::SymbolOutOfRange,
                format!("symbol `{}` outside alphabet of size {}", crate::symbolic::symbol_char(*s), a.size()),
            ));
        }
    }
    Ok(w.iter().map(|(s, _)| *s).collect())
}

/// Parses the `alphabet N` header.
pub(crate) fn header(cur: &mut Cursor) -> Result<Alphabet, DslError> {
    cur.eat_newlines();
    cur.expect_ident("alphabet")?;
    let (n, p) = cur.int()?;
    let a = usize::try_from(n)
        .ok()
        .and_then(|n| Alphabet::new(n).ok())
        .ok_or_else(|| p.err(ErrorCode::BadAlphabet, format!("alphabet size {n} outside 2..=36")))?;
    cur.eat_punct(';');
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_carry_positions() {
        let toks = tokenize("alphabet 4\n  rule { # c\n start=\"0^3\" }", false).unwrap();
        assert_eq!(toks[0], (Tok::Ident("alphabet".into()), Pos { line: 1, column: 1 }));
        assert_eq!(toks[2].1, Pos { line: 2, column: 3 });
        let Tok::Word(w) = &toks[6].0 else { panic!("{:?}", toks[6]) };
        assert_eq!(w.len(), 3);
        assert_eq!(toks[6].1, Pos { line: 3, column: 8 });
    }

    #[test]
    fn lexer_errors() {
        let e = tokenize("\"01", false).unwrap_err();
        assert_eq!((e.code, e.line, e.column), (ErrorCode::UnterminatedString, 1, 1));
        let e = tokenize("\"0A\"", false).unwrap_err();
        assert_eq!((e.code, e.column), (ErrorCode::BadSymbol, 3));
        let e = tokenize("\"^2\"", false).unwrap_err();
        assert_eq!(e.code, ErrorCode::BadRepeat);
        let e = tokenize("\"0^0\"", false).unwrap_err();
        assert_eq!(e.code, ErrorCode::BadRepeat);
        let e = tokenize("rule $", false).unwrap_err();
        assert_eq!((e.code, e.column), (ErrorCode::UnexpectedChar, 6));
    }
}
