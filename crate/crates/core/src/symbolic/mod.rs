//! Exact finite representations of points of the full shift and of the
//! one-sided boundary space.
//!
//! Every configuration handled here is eventually periodic in both
//! directions, so sliding block codes act on it exactly. Positions are
//! `i64` and the shift convention is fixed once: `shift(x, t)[m] = x[m + t]`,
//! so `t = 1` is the left shift σ.

mod config;
mod dyadic;
mod omega;

pub use config::BiConfiguration;
pub use dyadic::Dyadic;
pub use omega::{default_tail_set, enumerate_cm, BarOmegaPoint, OmegaPoint, RValue};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single cell value. Symbols of an alphabet of size `n` are `0..n`.
pub type Symbol = u8;

/// Largest alphabet supported; symbols print as `0-9` then `a-z`.
pub const MAX_ALPHABET: usize = 36;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("alphabet size {0} outside 2..=36")]
    BadAlphabet(usize),
    #[error("symbol {symbol} not in alphabet of size {size}")]
    SymbolOutOfRange { symbol: Symbol, size: usize },
    #[error("periodic word must be nonempty")]
    EmptyPeriod,
    #[error("left tail is not constant")]
    NotEventuallyConstantLeft,
    #[error("configuration is constant")]
    ConstantConfiguration,
    #[error("boundary point needs x_0 != x_1")]
    InvariantViolation,
    #[error("point does not start with symbol 0")]
    NotInOmegaZero,
    #[error("transversal entry {index} starts with {found}")]
    BadTransversal { index: usize, found: Symbol },
}

/// The finite alphabet `{0, 1, .., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self, SymbolicError> {
        if (2..=MAX_ALPHABET).contains(&size) {
            Ok(Alphabet(size))
        } else {
            Err(SymbolicError::BadAlphabet(size))
        }
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn symbols(self) -> impl Iterator<Item = Symbol> {
        (0..self.0).map(|s| s as Symbol)
    }

    pub fn contains(self, s: Symbol) -> bool {
        (s as usize) < self.0
    }

    pub fn check_word(self, w: &[Symbol]) -> Result<(), SymbolicError> {
        match w.iter().find(|&&s| !self.contains(s)) {
            Some(&symbol) => Err(SymbolicError::SymbolOutOfRange { symbol, size: self.0 }),
            None => Ok(()),
        }
    }
}

/// Character used for a symbol in literals and reports.
pub fn symbol_char(s: Symbol) -> char {
    std::char::from_digit(s as u32, 36).expect("symbol below 36")
}

pub fn char_symbol(c: char) -> Option<Symbol> {
    if c.is_ascii_uppercase() {
        return None;
    }
    c.to_digit(36).map(|d| d as Symbol)
}

pub fn word_string(w: &[Symbol]) -> String {
    w.iter().map(|&s| symbol_char(s)).collect()
}

/// Parses a bare symbol string such as `"2332"`. Panics on bad characters;
/// meant for literals in code and tests.
pub fn word(s: &str) -> Vec<Symbol> {
    s.chars()
        .map(|c| char_symbol(c).unwrap_or_else(|| panic!("bad symbol {c:?}")))
        .collect()
}

/// Smallest `d` such that `w` is a power of `w[..d]`.
fn primitive_len(w: &[Symbol]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&d| n % d == 0 && (d..n).all(|i| w[i] == w[i - d]))
        .unwrap_or(n)
}

/// A nonempty word repeated forever, stored primitive.
///
/// The phase is meaningful: the owner decides which cell reads `period[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicWord(Vec<Symbol>);

impl PeriodicWord {
    pub fn new(period: Vec<Symbol>) -> Result<Self, SymbolicError> {
        if period.is_empty() {
            return Err(SymbolicError::EmptyPeriod);
        }
        let d = primitive_len(&period);
        let mut period = period;
        period.truncate(d);
        Ok(PeriodicWord(period))
    }

    pub fn constant(s: Symbol) -> Self {
        PeriodicWord(vec![s])
    }

    pub fn period(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Symbol at index `i` of the infinite repetition `period period ...`.
    pub fn at(&self, i: i64) -> Symbol {
        self.0[i.rem_euclid(self.0.len() as i64) as usize]
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() == 1
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
