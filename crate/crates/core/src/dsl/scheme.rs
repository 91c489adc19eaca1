use std::fmt::Write as _;

use crate::marker::{MarkerRule, MarkerScheme, SchemeError};
use crate::symbolic::{symbol_char, Alphabet, Symbol};

use super::{checked, header, tokenize, Cursor, DslError, ErrorCode, Pos, Tok};

type Located = (Vec<Symbol>, Pos);

/// Parses a scheme document.
pub fn parse_scheme(text: &str) -> Result<MarkerScheme, DslError> {
    let mut cur = Cursor::new(tokenize(text, false)?);
    let alphabet = header(&mut cur)?;
    let mut rules = Vec::new();
    while !cur.at_end() {
        rules.push(rule(&mut cur, alphabet)?);
    }
    Ok(MarkerScheme::new(alphabet, rules).expect("symbols checked while parsing"))
}

fn rule(cur: &mut Cursor, alphabet: Alphabet) -> Result<MarkerRule, DslError> {
    let at = cur.expect_ident("rule")?;
    cur.expect_punct('{')?;
    let mut start: Option<Located> = None;
    let mut end: Option<Located> = None;
    let mut maps: Vec<(Located, Located)> = Vec::new();
    loop {
        match cur.peek().clone() {
            Tok::Punct('}') => {
                cur.next();
                break;
            }
            Tok::Ident(name) if name == "start" || name == "end" => {
                let p = cur.next().1;
                cur.expect_punct('=')?;
                let w = nonempty(cur, alphabet)?;
                let slot = if name == "start" { &mut start } else { &mut end };
                if slot.is_some() {
                    return Err(p.err(ErrorCode::DuplicateField, format!("`{name}` given twice")));
                }
                *slot = Some(w);
            }
            Tok::Ident(name) if name == "map" => {
                cur.next();
                let s = nonempty(cur, alphabet)?;
                if *cur.peek() != Tok::Arrow {
                    return Err(cur.unexpected("`->`"));
                }
                cur.next();
                let t = nonempty(cur, alphabet)?;
                maps.push((s, t));
            }
            _ => return Err(cur.unexpected("`start`, `end`, `map` or `}`")),
        }
        cur.eat_punct(';');
    }
    cur.eat_punct(';');
    let start = start.ok_or_else(|| at.err(ErrorCode::MissingField, "rule has no `start`"))?;
    let end = end.ok_or_else(|| at.err(ErrorCode::MissingField, "rule has no `end`"))?;
    if maps.is_empty() {
        return Err(at.err(ErrorCode::MissingField, "rule has no `map`"));
    }
    let pairs = maps.iter().map(|((s, _), (t, _))| (s.clone(), t.clone())).collect();
    MarkerRule::new(start.0, end.0, pairs).map_err(|e| locate(e, at, &maps))
}

fn nonempty(cur: &mut Cursor, alphabet: Alphabet) -> Result<Located, DslError> {
    let (w, p) = cur.word()?;
    if w.is_empty() {
        return Err(p.err(ErrorCode::EmptyWord, "word must be nonempty"));
    }
    Ok((checked(&w, Some(alphabet))?, p))
}

/// Attaches the position of the offending map to a rule error.
fn locate(e: SchemeError, at: Pos, maps: &[(Located, Located)]) -> DslError {
    match e {
        SchemeError::LengthMismatch { .. } => {
            let ((_, p), _) = maps.iter().find(|((s, _), (t, _))| s.len() != t.len()).expect("mismatched map");
            p.err(ErrorCode::LengthMismatch, e.to_string())
        }
        SchemeError::DataLengthMismatch => {
            let n = maps[0].0 .0.len();
            let ((_, p), _) = maps.iter().find(|((s, _), _)| s.len() != n).expect("mismatched source");
            p.err(ErrorCode::DataLengthMismatch, e.to_string())
        }
        SchemeError::NotBijective => {
            let sources: Vec<&Vec<Symbol>> = maps.iter().map(|((s, _), _)| s).collect();
            let mut targets_seen = Vec::new();
            for (i, ((s, sp), (t, tp))) in maps.iter().enumerate() {
                if sources[..i].contains(&s) {
                    return sp.err(ErrorCode::NotBijective, "source word mapped twice");
                }
                if !sources.contains(&t) {
                    return tp.err(ErrorCode::NotBijective, "target is not a source word of this rule");
                }
                if targets_seen.contains(&t) {
                    return tp.err(ErrorCode::NotBijective, "target word hit twice");
                }
                targets_seen.push(t);
            }
            at.err(ErrorCode::NotBijective, e.to_string())
        }
        other => at.err(ErrorCode::UnexpectedToken, other.to_string()),
    }
}

/// Quoted word with runs of four or more written as `s^n`, unless a
/// decimal symbol follows the run.
pub fn render_word(w: &[Symbol]) -> String {
    let mut out = String::from("\"");
    let mut i = 0;
    while i < w.len() {
        let run = w[i..].iter().take_while(|&&s| s == w[i]).count();
        let c = symbol_char(w[i]);
        // A count directly followed by a digit symbol would read as a longer count.
        let next_is_digit = w.get(i + run).is_some_and(|&s| s < 10);
        if run >= 4 && !next_is_digit {
            let _ = write!(out, "{c}^{run}");
        } else {
            out.extend(std::iter::repeat(c).take(run));
        }
        i += run;
    }
    out.push('"');
    out
}

/// Canonical text of a scheme; [`parse_scheme`] inverts it.
pub fn render_scheme(s: &MarkerScheme) -> String {
    let mut out = format!("alphabet {}\n", s.alphabet().size());
    for r in s.rules() {
        out.push_str("rule {\n");
        let _ = writeln!(out, "  start = {}", render_word(r.start()));
        let _ = writeln!(out, "  end = {}", render_word(r.end()));
        for (src, tgt) in r.maps() {
            let _ = writeln!(out, "  map {} -> {}", render_word(src), render_word(tgt));
        }
        out.push_str("}\n");
    }
    out
}
