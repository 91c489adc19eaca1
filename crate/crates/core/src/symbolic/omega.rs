use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{lcm, word_string, Alphabet, BiConfiguration, Dyadic, PeriodicWord, Symbol, SymbolicError};

/// A one-sided point `x_0 x_1 x_2 ...` with `x_0 != x_1` and a periodic tail.
///
/// Stored with the shortest prefix after which the tail repeats, so `==`
/// is equality of points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaPoint {
    prefix: Vec<Symbol>,
    tail: PeriodicWord,
}

impl OmegaPoint {
    pub fn new(prefix: Vec<Symbol>, tail: PeriodicWord) -> Result<Self, SymbolicError> {
        let raw = OmegaPoint { prefix, tail };
        if raw.at(0) == raw.at(1) {
            return Err(SymbolicError::InvariantViolation);
        }
        Ok(raw.normalize())
    }

    fn normalize(self) -> Self {
        let q = self.tail.len();
        let mut b = self.prefix.len();
        while b > 0 && self.at(b - 1) == self.at(b - 1 + q) {
            b -= 1;
        }
        OmegaPoint { prefix: self.window(b), tail: PeriodicWord((b..b + q).map(|i| self.at(i)).collect()) }
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn tail(&self) -> &PeriodicWord {
        &self.tail
    }

    pub fn at(&self, i: usize) -> Symbol {
        match self.prefix.get(i) {
            Some(&s) => s,
            None => self.tail.at((i - self.prefix.len()) as i64),
        }
    }

    /// First `n` symbols.
    pub fn window(&self, n: usize) -> Vec<Symbol> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// Index from which the two points certainly agree forever.
    fn agreement_horizon(&self, other: &Self) -> usize {
        self.prefix.len().max(other.prefix.len()) + lcm(self.tail.len(), other.tail.len())
    }

    /// First index where the points differ, if any.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        (0..self.agreement_horizon(other)).find(|&i| self.at(i) != other.at(i))
    }

    /// The ultrametric `2^-j`, `j` the first index of disagreement.
    pub fn distance(&self, other: &Self) -> Dyadic {
        match self.first_difference(other) {
            Some(j) => Dyadic::pow2_neg(j as u32),
            None => Dyadic::ZERO,
        }
    }

    /// The two-sided point with a constant `x_0` run up to cell 0, then `x_1 x_2 ...`.
    pub fn embed(&self) -> BiConfiguration {
        let n = self.prefix.len().max(1);
        let core = (1..n).map(|i| self.at(i)).collect();
        let right = PeriodicWord((n..n + self.tail.len()).map(|i| self.at(i)).collect());
        BiConfiguration::new(PeriodicWord::constant(self.at(0)), core, 1, right)
    }

    /// Reads a point of `A^Z_*` from its last constant cell onward.
    pub fn collapse(x: &BiConfiguration) -> Result<Self, SymbolicError> {
        let l = x.ell()?;
        let y = x.shift(l);
        let start = y.right_start().max(1);
        let q = y.right_tail().len() as i64;
        let prefix = y.window(0, start);
        let tail = PeriodicWord(y.window(start, start + q));
        OmegaPoint::new(prefix, tail)
    }

    /// The base point `o = 0 1 1 1 ...` of `Ω^0`.
    pub fn base_point() -> Self {
        OmegaPoint { prefix: vec![0], tail: PeriodicWord::constant(1) }
    }

    /// Length of the run of 1s following the leading 0.
    pub fn r_value(&self) -> Result<RValue, SymbolicError> {
        if self.at(0) != 0 {
            return Err(SymbolicError::NotInOmegaZero);
        }
        let horizon = self.prefix.len() + self.tail.len() + 1;
        match (1..=horizon).find(|&i| self.at(i) != 1) {
            Some(i) => Ok(RValue::Finite(i as u64 - 1)),
            None => Ok(RValue::Infinite),
        }
    }

    /// Applies a symbol permutation cellwise.
    pub fn permute(&self, perm: &[Symbol]) -> Self {
        OmegaPoint {
            prefix: self.prefix.iter().map(|&s| perm[s as usize]).collect(),
            tail: PeriodicWord(self.tail.period().iter().map(|&s| perm[s as usize]).collect()),
        }
    }
}

impl fmt::Display for OmegaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\" ({})*", word_string(&self.prefix), word_string(self.tail.period()))
    }
}

impl Serialize for OmegaPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for BiConfiguration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `r(f)`, infinite exactly for the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RValue {
    Finite(u64),
    Infinite,
}

impl RValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            RValue::Finite(r) => Some(r),
            RValue::Infinite => None,
        }
    }
}

impl fmt::Display for RValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RValue::Finite(r) => write!(f, "{r}"),
            RValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for RValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RValue::Finite(r) => s.serialize_u64(*r),
            RValue::Infinite => s.serialize_str("inf"),
        }
    }
}

/// One point of each `Ω^a`: entry `a` starts with symbol `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BarOmegaPoint(Vec<OmegaPoint>);

impl BarOmegaPoint {
    pub fn new(points: Vec<OmegaPoint>) -> Result<Self, SymbolicError> {
        Alphabet::new(points.len())?;
        for (a, p) in points.iter().enumerate() {
            if p.at(0) as usize != a {
                return Err(SymbolicError::BadTransversal { index: a, found: p.at(0) });
            }
        }
        Ok(BarOmegaPoint(points))
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.0.len()).expect("checked at construction")
    }

    pub fn point(&self, a: Symbol) -> &OmegaPoint {
        &self.0[a as usize]
    }

    pub fn points(&self) -> &[OmegaPoint] {
        &self.0
    }
}

/// Tails used to close enumerated prefixes: every constant tail plus `(10)*`.
pub fn default_tail_set(alphabet: Alphabet) -> Vec<PeriodicWord> {
    let mut tails: Vec<PeriodicWord> = alphabet.symbols().map(PeriodicWord::constant).collect();
    tails.push(PeriodicWord(vec![1, 0]));
    tails
}

/// Every point with `r = m` of the form `w t t t ...`, `|w| <= depth`,
/// `t` from `tails`, sorted and deduplicated.
pub fn enumerate_cm(m: usize, depth: usize, alphabet: Alphabet, tails: &[PeriodicWord]) -> Vec<OmegaPoint> {
    let mut found = BTreeSet::new();
    let mut prefix = Vec::with_capacity(depth);
    let mut visit = |w: &[Symbol]| {
        for t in tails {
            if let Ok(p) = OmegaPoint::new(w.to_vec(), t.clone()) {
                if p.r_value() == Ok(RValue::Finite(m as u64)) {
                    found.insert(p);
                }
            }
        }
    };
    grow(&mut prefix, depth, m, alphabet, &mut visit);
    found.into_iter().collect()
}

fn grow(prefix: &mut Vec<Symbol>, depth: usize, m: usize, alphabet: Alphabet, visit: &mut dyn FnMut(&[Symbol])) {
    visit(prefix);
    if prefix.len() == depth {
        return;
    }
    let i = prefix.len();
    for s in alphabet.symbols() {
        let allowed = match i {
            0 => s == 0,
            _ if i <= m => s == 1,
            _ if i == m + 1 => s != 1,
            _ => true,
        };
        if allowed {
            prefix.push(s);
            grow(prefix, depth, m, alphabet, visit);
            prefix.pop();
        }
    }
}
