use num_rational::Ratio;

use crate::boundary::FiniteMeasure;
use crate::lattice::{build_cross_swap, LatticeError, Point, SlidingBlockCodeZd};
use crate::symbolic::{Alphabet, BarOmegaPoint, BiConfiguration, OmegaPoint, PeriodicWord, SymbolicError};

use super::{checked, header, tokenize, Cursor, DslError, ErrorCode, Pos, Tok};

/// A parsed configuration literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigLiteral {
    /// `(L)* "core" @a (R)*`; the anchor defaults to 0.
    Bi(BiConfiguration),
    /// `"prefix" (t)*`.
    Omega(OmegaPoint),
}

pub fn parse_config(text: &str) -> Result<ConfigLiteral, DslError> {
    parse_config_in(text, None)
}

/// As [`parse_config`], rejecting symbols outside `alphabet`.
pub fn parse_config_in(text: &str, alphabet: Option<Alphabet>) -> Result<ConfigLiteral, DslError> {
    let mut cur = Cursor::new(tokenize(text, false)?);
    let lit = match cur.peek() {
        Tok::Punct('(') => ConfigLiteral::Bi(bi(&mut cur, alphabet)?),
        Tok::Word(_) => ConfigLiteral::Omega(omega(&mut cur, alphabet)?),
        _ => return Err(cur.unexpected("`(` or a quoted word")),
    };
    if !cur.at_end() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(lit)
}

pub fn parse_bi_configuration(text: &str, alphabet: Option<Alphabet>) -> Result<BiConfiguration, DslError> {
    match parse_config_in(text, alphabet)? {
        ConfigLiteral::Bi(x) => Ok(x),
        ConfigLiteral::Omega(_) => Err(Pos { line: 1, column: 1 }
            .err(ErrorCode::UnexpectedToken, "expected a two-sided literal `(L)* \"core\" @a (R)*`")),
    }
}

pub fn parse_omega_point(text: &str, alphabet: Option<Alphabet>) -> Result<OmegaPoint, DslError> {
    match parse_config_in(text, alphabet)? {
        ConfigLiteral::Omega(p) => Ok(p),
        ConfigLiteral::Bi(_) => {
            Err(Pos { line: 1, column: 1 }.err(ErrorCode::UnexpectedToken, "expected a one-sided literal `\"prefix\" (t)*`"))
        }
    }
}

fn tail(cur: &mut Cursor, alphabet: Option<Alphabet>) -> Result<PeriodicWord, DslError> {
    let open = cur.expect_punct('(')?;
    let (w, _) = cur.word()?;
    cur.expect_punct(')')?;
    cur.expect_punct('*')?;
    PeriodicWord::new(checked(&w, alphabet)?).map_err(|_| open.err(ErrorCode::EmptyWord, "tail period must be nonempty"))
}

fn bi(cur: &mut Cursor, alphabet: Option<Alphabet>) -> Result<BiConfiguration, DslError> {
    let left = tail(cur, alphabet)?;
    let (core, _) = cur.word()?;
    let core = checked(&core, alphabet)?;
    let anchor = if cur.eat_punct('@') { cur.int()?.0 } else { 0 };
    let right = tail(cur, alphabet)?;
    Ok(BiConfiguration::new(left, core, anchor, right))
}

fn omega(cur: &mut Cursor, alphabet: Option<Alphabet>) -> Result<OmegaPoint, DslError> {
    let at = cur.pos();
    let (prefix, _) = cur.word()?;
    let prefix = checked(&prefix, alphabet)?;
    let t = tail(cur, alphabet)?;
    OmegaPoint::new(prefix, t).map_err(|e| match e {
        SymbolicError::InvariantViolation => at.err(ErrorCode::InvariantViolation, "first two symbols must differ"),
        e => at.err(ErrorCode::UnexpectedToken, e.to_string()),
    })
}

/// A transversal file: `alphabet N` followed by `N` one-sided literals,
/// entry `a` starting with symbol `a`.
pub fn parse_bar_point(text: &str) -> Result<BarOmegaPoint, DslError> {
    let mut cur = Cursor::new(tokenize(text, false)?);
    let alphabet = header(&mut cur)?;
    let points = bar(&mut cur, alphabet)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(points)
}

fn bar(cur: &mut Cursor, alphabet: Alphabet) -> Result<BarOmegaPoint, DslError> {
    let mut points = Vec::new();
    for a in alphabet.symbols() {
        let at = cur.pos();
        let p = omega(cur, Some(alphabet))?;
        if p.at(0) != a {
            return Err(at.err(ErrorCode::InvariantViolation, format!("entry {a} must start with symbol {a}")));
        }
        points.push(p);
    }
    Ok(BarOmegaPoint::new(points).expect("entries checked"))
}

pub fn render_bar_point(x: &BarOmegaPoint) -> String {
    let mut out = format!("alphabet {}\n", x.alphabet().size());
    for p in x.points() {
        out.push_str(&format!("{p}\n"));
    }
    out
}

/// A measure file: `alphabet N` followed by atoms
/// `atom p/q <N one-sided literals>` whose weights sum to 1.
pub fn parse_measure(text: &str) -> Result<FiniteMeasure, DslError> {
    let mut cur = Cursor::new(tokenize(text, false)?);
    let alphabet = header(&mut cur)?;
    let mut atoms = Vec::new();
    let mut first = cur.pos();
    while !cur.at_end() {
        let at = cur.expect_ident("atom")?;
        if atoms.is_empty() {
            first = at;
        }
        let (num, np) = cur.int()?;
        let den = if cur.eat_punct('/') { cur.int()?.0 } else { 1 };
        if num <= 0 || den <= 0 {
            return Err(np.err(ErrorCode::BadWeight, "weights must be positive"));
        }
        cur.eat_punct(':');
        atoms.push((bar(&mut cur, alphabet)?, Ratio::new(num as u64, den as u64)));
        cur.eat_punct(';');
    }
    FiniteMeasure::new(atoms).map_err(|e| first.err(ErrorCode::BadWeight, e.to_string()))
}

/// A dimension-`d` automaton named by a builder: `zd cross-swap`,
/// `zd shift` with `t x, y, ..`, or `zd identity`, plus `d` and `alphabet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZdDescriptor {
    pub builder: String,
    pub d: usize,
    pub alphabet: Alphabet,
    pub t: Option<Point>,
}

impl ZdDescriptor {
    pub fn build(&self) -> Result<SlidingBlockCodeZd, LatticeError> {
        match self.builder.as_str() {
            "cross-swap" => build_cross_swap(self.alphabet, self.d),
            "identity" => Ok(SlidingBlockCodeZd::identity(self.alphabet, self.d)),
            "shift" => Ok(SlidingBlockCodeZd::shift(self.alphabet, self.t.clone().expect("checked while parsing"))),
            other => Err(LatticeError::BadParameter(format!("unknown builder {other}"))),
        }
    }
}

pub fn parse_zd_descriptor(text: &str) -> Result<ZdDescriptor, DslError> {
    let mut cur = Cursor::new(tokenize(text, false)?);
    let at = cur.expect_ident("zd")?;
    let builder = match cur.next() {
        (Tok::Ident(b), _) if ["cross-swap", "identity", "shift"].contains(&b.as_str()) => b,
        (_, p) => return Err(p.err(ErrorCode::BadDescriptor, "builder must be `cross-swap`, `identity` or `shift`")),
    };
    let (mut d, mut alphabet, mut t) = (None, None, None);
    while !cur.at_end() {
        cur.eat_punct(';');
        if cur.at_end() {
            break;
        }
        let (key, kp) = cur.next();
        match key {
            Tok::Ident(k) if k == "d" => {
                let (v, p) = cur.int()?;
                if !(1..=6).contains(&v) {
                    return Err(p.err(ErrorCode::BadDescriptor, "d must lie in 1..=6"));
                }
                d = Some(v as usize);
            }
            Tok::Ident(k) if k == "alphabet" => {
                let (v, p) = cur.int()?;
                alphabet = Some(
                    usize::try_from(v)
                        .ok()
                        .and_then(|v| Alphabet::new(v).ok())
                        .ok_or_else(|| p.err(ErrorCode::BadAlphabet, format!("alphabet size {v} outside 2..=36")))?,
                );
            }
            Tok::Ident(k) if k == "t" => {
                let mut v = vec![cur.int()?.0];
                while cur.eat_punct(',') {
                    v.push(cur.int()?.0);
                }
                t = Some(v);
            }
            _ => return Err(kp.err(ErrorCode::BadDescriptor, "expected `d`, `alphabet` or `t`")),
        }
    }
    let d = match (d, &t) {
        (Some(d), Some(t)) if t.len() != d => {
            return Err(at.err(ErrorCode::BadDescriptor, format!("shift vector has {} entries, d = {d}", t.len())))
        }
        (Some(d), _) => d,
        (None, Some(t)) => t.len(),
        (None, None) => return Err(at.err(ErrorCode::MissingField, "descriptor has no `d`")),
    };
    let alphabet = alphabet.ok_or_else(|| at.err(ErrorCode::MissingField, "descriptor has no `alphabet`"))?;
    if builder == "shift" && t.is_none() {
        return Err(at.err(ErrorCode::MissingField, "shift descriptor has no `t`"));
    }
    Ok(ZdDescriptor { builder, d, alphabet, t })
}
