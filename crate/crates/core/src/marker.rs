//! Marker schemes: rules `S D E -> S π(D) E` rewriting data between fixed
//! start and end markers, the overlap-condition verifier, and compilation
//! to sliding block codes.
//!
//! A scheme is well defined and invertible when no data match can
//! intersect another data match or a marker match, whatever the rules
//! involved. Markers themselves may overlap freely.

use serde::Serialize;
use thiserror::Error;

use crate::codes::SlidingBlockCode1D;
use crate::exhaustive::Partial;
use crate::symbolic::{word_string, Alphabet, Symbol, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("scheme fails the overlap conditions ({0} violations)")]
    UnverifiedScheme(usize),
    #[error("rule has no data words")]
    EmptyData,
    #[error("map {source_word} -> {target} changes length")]
    LengthMismatch { source_word: String, target: String },
    #[error("data words of one rule must share a length")]
    DataLengthMismatch,
    #[error("maps do not form a bijection of the data set")]
    NotBijective,
    #[error(transparent)]
    Symbol(#[from] SymbolicError),
}

/// One rewriting rule: start marker, end marker, data set and a bijection on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerRule {
    start: Vec<Symbol>,
    end: Vec<Symbol>,
    data: Vec<Vec<Symbol>>,
    /// `data[i]` rewrites to `data[pi[i]]`.
    pi: Vec<usize>,
}

impl MarkerRule {
    /// Builds a rule from `source -> target` pairs; the sources form the data set.
    pub fn new(start: Vec<Symbol>, end: Vec<Symbol>, maps: Vec<(Vec<Symbol>, Vec<Symbol>)>) -> Result<Self, SchemeError> {
        if maps.is_empty() {
            return Err(SchemeError::EmptyData);
        }
        for (s, t) in &maps {
            if s.len() != t.len() {
                return Err(SchemeError::LengthMismatch { source_word: word_string(s), target: word_string(t) });
            }
        }
        let n = maps[0].0.len();
        if maps.iter().any(|(s, _)| s.len() != n) {
            return Err(SchemeError::DataLengthMismatch);
        }
        let data: Vec<Vec<Symbol>> = maps.iter().map(|(s, _)| s.clone()).collect();
        let mut pi = Vec::with_capacity(data.len());
        let mut hit = vec![false; data.len()];
        for (i, (_, t)) in maps.iter().enumerate() {
            if data[..i].contains(&data[i]) {
                return Err(SchemeError::NotBijective);
            }
            let j = data.iter().position(|d| d == t).ok_or(SchemeError::NotBijective)?;
            if std::mem::replace(&mut hit[j], true) {
                return Err(SchemeError::NotBijective);
            }
            pi.push(j);
        }
        Ok(MarkerRule { start, end, data, pi })
    }

    /// Rule swapping two data words.
    pub fn swap(start: Vec<Symbol>, a: Vec<Symbol>, b: Vec<Symbol>, end: Vec<Symbol>) -> Result<Self, SchemeError> {
        Self::new(start, end, vec![(a.clone(), b.clone()), (b, a)])
    }

    pub fn start(&self) -> &[Symbol] {
        &self.start
    }

    pub fn end(&self) -> &[Symbol] {
        &self.end
    }

    pub fn data(&self) -> &[Vec<Symbol>] {
        &self.data
    }

    /// `(source, target)` pairs in data order.
    pub fn maps(&self) -> impl Iterator<Item = (&[Symbol], &[Symbol])> {
        self.data.iter().zip(&self.pi).map(|(d, &j)| (d.as_slice(), self.data[j].as_slice()))
    }

    pub fn data_len(&self) -> usize {
        self.data[0].len()
    }

    /// Length of `S D E`.
    pub fn pattern_len(&self) -> usize {
        self.start.len() + self.data_len() + self.end.len()
    }

    fn pattern(&self, d: usize) -> Vec<Symbol> {
        [&self.start[..], &self.data[d], &self.end].concat()
    }

    fn inverse(&self) -> MarkerRule {
        let mut pi = vec![0; self.pi.len()];
        for (i, &j) in self.pi.iter().enumerate() {
            pi[j] = i;
        }
        MarkerRule { pi, ..self.clone() }
    }

    fn permuted(&self, perm: &[Symbol]) -> MarkerRule {
        let map = |w: &[Symbol]| w.iter().map(|&s| perm[s as usize]).collect::<Vec<_>>();
        MarkerRule {
            start: map(&self.start),
            end: map(&self.end),
            data: self.data.iter().map(|d| map(d)).collect(),
            pi: self.pi.clone(),
        }
    }

    fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.start.iter().chain(&self.end).chain(self.data.iter().flatten()).copied()
    }
}

/// An alphabet and an ordered list of rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerScheme {
    alphabet: Alphabet,
    rules: Vec<MarkerRule>,
}

impl MarkerScheme {
    pub fn new(alphabet: Alphabet, rules: Vec<MarkerRule>) -> Result<Self, SchemeError> {
        for r in &rules {
            alphabet.check_word(&r.symbols().collect::<Vec<_>>())?;
        }
        Ok(MarkerScheme { alphabet, rules })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn rules(&self) -> &[MarkerRule] {
        &self.rules
    }

    /// Checks the overlap conditions for every ordered rule pair and offset.
    pub fn verify(&self) -> OverlapVerdict {
        verify_scheme(self)
    }

    /// Compiles a verified scheme into its sliding block code.
    pub fn compile(&self) -> Result<SlidingBlockCode1D, SchemeError> {
        let verdict = self.verify();
        if !verdict.is_ok() {
            return Err(SchemeError::UnverifiedScheme(verdict.violations.len()));
        }
        Ok(SlidingBlockCode1D::from_scheme(self.alphabet, CompiledScheme::new(self)))
    }

    /// Same markers and data, every bijection inverted.
    pub fn invert(&self) -> Result<MarkerScheme, SchemeError> {
        let verdict = self.verify();
        if !verdict.is_ok() {
            return Err(SchemeError::UnverifiedScheme(verdict.violations.len()));
        }
        Ok(MarkerScheme { alphabet: self.alphabet, rules: self.rules.iter().map(MarkerRule::inverse).collect() })
    }

    pub fn is_involution(&self) -> bool {
        self.rules.iter().all(|r| r.pi.iter().enumerate().all(|(i, &j)| r.pi[j] == i))
    }

    /// The scheme with every word relabelled by `perm`; compiles to the
    /// conjugate of this scheme's code by the symbol permutation.
    pub fn permute_symbols(&self, perm: &[Symbol]) -> MarkerScheme {
        MarkerScheme { alphabet: self.alphabet, rules: self.rules.iter().map(|r| r.permuted(perm)).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    DataData,
    DataMarker,
}

/// Two simultaneous matches breaking the overlap conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Rule whose data interval is hit.
    pub first_rule: usize,
    pub second_rule: usize,
    /// Start of the second match minus start of the first.
    pub offset: i64,
    /// A word containing both matches; free cells hold 0.
    #[serde(serialize_with = "serialize_word")]
    pub witness: Vec<Symbol>,
    /// Start of each match inside the witness.
    pub match_positions: [usize; 2],
    /// Data intervals `[lo, hi)` inside the witness.
    pub data_intervals: [[usize; 2]; 2],
}

fn serialize_word<S: serde::Serializer>(w: &[Symbol], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&word_string(w))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapVerdict {
    pub violations: Vec<Violation>,
}

impl OverlapVerdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn intersects(a: (i64, i64), b: (i64, i64)) -> bool {
    a.0 < b.1 && b.0 < a.1
}

/// Decides the overlap conditions exactly by placing every pair of
/// patterns at every offset where they can meet.
///
/// Violations are listed data-data first, then data-marker, each group
/// ordered by `(first_rule, second_rule, offset)`, one witness per key.
pub fn verify_scheme(s: &MarkerScheme) -> OverlapVerdict {
    let mut violations = Vec::new();
    for (i, ri) in s.rules.iter().enumerate() {
        for (j, rj) in s.rules.iter().enumerate() {
            let li = ri.pattern_len() as i64;
            let lj = rj.pattern_len() as i64;
            for t in (1 - lj)..li {
                if i == j && t == 0 {
                    continue;
                }
                if let Some(v) = check_placement(ri, rj, i, j, t) {
                    violations.push(v);
                }
            }
        }
    }
    violations.sort_by_key(|v| (v.kind, v.first_rule, v.second_rule, v.offset));
    OverlapVerdict { violations }
}

fn check_placement(ri: &MarkerRule, rj: &MarkerRule, i: usize, j: usize, t: i64) -> Option<Violation> {
    let si = ri.start.len() as i64;
    let sj = rj.start.len() as i64;
    let data_i = (si, si + ri.data_len() as i64);
    let data_j = (t + sj, t + sj + rj.data_len() as i64);
    let lj = rj.pattern_len() as i64;
    let kind = if intersects(data_i, data_j) {
        ViolationKind::DataData
    } else if intersects(data_i, (t, t + sj)) || intersects(data_i, (data_j.1, t + lj)) {
        ViolationKind::DataMarker
    } else {
        return None;
    };
    let li = ri.pattern_len() as i64;
    let lo = t.min(0);
    let hi = li.max(t + lj);
    for di in 0..ri.data.len() {
        let pi = ri.pattern(di);
        for dj in 0..rj.data.len() {
            let pj = rj.pattern(dj);
            let lo_common = t.max(0);
            let hi_common = li.min(t + lj);
            let agree = (lo_common..hi_common).all(|m| pi[m as usize] == pj[(m - t) as usize]);
            if !agree {
                continue;
            }
            let mut witness = vec![0; (hi - lo) as usize];
            for (k, &c) in pi.iter().enumerate() {
                witness[(k as i64 - lo) as usize] = c;
            }
            for (k, &c) in pj.iter().enumerate() {
                witness[(k as i64 + t - lo) as usize] = c;
            }
            let rel = |x: i64| (x - lo) as usize;
            return Some(Violation {
                kind,
                first_rule: i,
                second_rule: j,
                offset: t,
                witness,
                match_positions: [rel(0), rel(t)],
                data_intervals: [[rel(data_i.0), rel(data_i.1)], [rel(data_j.0), rel(data_j.1)]],
            });
        }
    }
    None
}

#[derive(Debug, Clone)]
struct Pattern {
    cells: Vec<Symbol>,
    data_start: usize,
    target: Vec<Symbol>,
}

/// Match table of a verified scheme.
#[derive(Debug, Clone)]
pub(crate) struct CompiledScheme {
    patterns: Vec<Pattern>,
    radius: usize,
}

enum MatchState {
    No,
    Maybe,
    Yes,
}

impl CompiledScheme {
    fn new(s: &MarkerScheme) -> Self {
        let mut patterns = Vec::new();
        for r in &s.rules {
            for d in 0..r.data.len() {
                patterns.push(Pattern {
                    cells: r.pattern(d),
                    data_start: r.start.len(),
                    target: r.data[r.pi[d]].clone(),
                });
            }
        }
        let radius = s.rules.iter().map(|r| r.pattern_len() - 1).max().unwrap_or(0);
        CompiledScheme { patterns, radius }
    }

    pub(crate) fn radius(&self) -> usize {
        self.radius
    }

    fn state(p: &Pattern, w: &[Partial]) -> MatchState {
        let mut unknown = false;
        // right to left: ends and data disagree sooner than long start runs
        for (c, cell) in p.cells.iter().zip(w).rev() {
            match cell {
                Some(s) if s != c => return MatchState::No,
                None => unknown = true,
                _ => {}
            }
        }
        if unknown {
            MatchState::Maybe
        } else {
            MatchState::Yes
        }
    }

    /// Rewrites the data of every match. A cell is decided when a definite
    /// match covers it or when no possible match does.
    pub(crate) fn apply_partial(&self, w: &[Partial]) -> Vec<Partial> {
        let r = self.radius;
        let n = w.len();
        if n < 2 * r + 1 {
            return Vec::new();
        }
        let n_out = n - 2 * r;
        let mut out: Vec<Partial> = w[r..n - r].to_vec();
        let mut definite = vec![false; n_out];
        let mut maybe = vec![false; n_out];
        for p in &self.patterns {
            let len = p.cells.len();
            if n < len || p.data_start > n - r - 1 {
                continue;
            }
            // only starts whose data can touch an output cell
            let first = r.saturating_sub(p.data_start + p.target.len() - 1);
            let last = (n - r - 1 - p.data_start).min(n - len);
            if first > last {
                continue;
            }
            for start in first..=last {
                let state = Self::state(p, &w[start..start + len]);
                if matches!(state, MatchState::No) {
                    continue;
                }
                for (k, &v) in p.target.iter().enumerate() {
                    let cell = start + p.data_start + k;
                    if cell < r || cell >= n - r {
                        continue;
                    }
                    let o = cell - r;
                    match state {
                        MatchState::Yes => {
                            definite[o] = true;
                            out[o] = Some(v);
                        }
                        _ => maybe[o] = true,
                    }
                }
            }
        }
        for o in 0..n_out {
            if maybe[o] && !definite[o] {
                out[o] = None;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::CodeEquality;
    use crate::symbolic::{word, BiConfiguration, PeriodicWord};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn a(n: usize) -> Alphabet {
        Alphabet::new(n).unwrap()
    }

    pub(crate) fn hedlund() -> MarkerScheme {
        let rule = MarkerRule::swap(word("000"), word("2332"), word("3223"), word("111")).unwrap();
        MarkerScheme::new(a(4), vec![rule]).unwrap()
    }

    fn overlapping() -> MarkerScheme {
        let rule = MarkerRule::swap(word("0"), word("01"), word("10"), word("0")).unwrap();
        MarkerScheme::new(a(2), vec![rule]).unwrap()
    }

    fn three_cycle() -> MarkerScheme {
        let rule = MarkerRule::new(
            word("000"),
            word("111"),
            vec![(word("22"), word("23")), (word("23"), word("32")), (word("32"), word("22"))],
        )
        .unwrap();
        MarkerScheme::new(a(4), vec![rule]).unwrap()
    }

    #[test]
    fn rule_validation() {
        assert_eq!(MarkerRule::new(word("0"), word("1"), vec![]), Err(SchemeError::EmptyData));
        assert!(matches!(
            MarkerRule::new(word("0"), word("1"), vec![(word("01"), word("011"))]),
            Err(SchemeError::LengthMismatch { .. })
        ));
        assert_eq!(
            MarkerRule::new(word("0"), word("1"), vec![(word("01"), word("10"))]),
            Err(SchemeError::NotBijective)
        );
        assert_eq!(
            MarkerRule::new(word("0"), word("1"), vec![(word("01"), word("01")), (word("10"), word("01"))]),
            Err(SchemeError::NotBijective)
        );
        let bad = MarkerRule::swap(word("0"), word("4"), word("5"), word("1")).unwrap();
        assert!(matches!(MarkerScheme::new(a(4), vec![bad]), Err(SchemeError::Symbol(_))));
    }

    #[test]
    fn hedlund_example_verifies_and_rewrites() {
        let s = hedlund();
        assert!(s.verify().is_ok());
        assert!(s.is_involution());
        let g = s.compile().unwrap();
        assert_eq!(g.radius(), 9);
        let x = BiConfiguration::new(PeriodicWord::constant(0), word("2332"), 1, PeriodicWord::constant(1));
        let y = g.apply(&x);
        assert_eq!(y, BiConfiguration::new(PeriodicWord::constant(0), word("3223"), 1, PeriodicWord::constant(1)));
        assert_eq!(g.apply(&y), x);
    }

    #[test]
    fn empty_scheme_is_identity() {
        let s = MarkerScheme::new(a(3), vec![]).unwrap();
        assert!(s.verify().is_ok());
        let g = s.compile().unwrap();
        assert_eq!(g.is_shift().unwrap(), Some(0));
    }

    #[test]
    fn overlapping_scheme_rejected_with_witness() {
        let v = overlapping().verify();
        assert!(!v.is_ok());
        let first = &v.violations[0];
        assert_eq!(first.kind, ViolationKind::DataData);
        assert_eq!(first.witness, word("00100"));
        let mut spans = first.data_intervals;
        spans.sort();
        assert_eq!(spans, [[1, 3], [2, 4]]);
        assert!(matches!(overlapping().compile(), Err(SchemeError::UnverifiedScheme(_))));
        assert!(overlapping().invert().is_err());
    }

    #[test]
    fn witnesses_realize_both_matches() {
        for s in [overlapping()] {
            let v = s.verify();
            for viol in &v.violations {
                for (k, rule) in [viol.first_rule, viol.second_rule].into_iter().enumerate() {
                    let r = &s.rules()[rule];
                    let pos = viol.match_positions[k];
                    let seg = &viol.witness[pos..pos + r.pattern_len()];
                    assert!((0..r.data.len()).any(|d| r.pattern(d) == seg));
                }
            }
        }
    }

    #[test]
    fn two_disjoint_matches_both_rewrite() {
        let g = hedlund().compile().unwrap();
        let block = word("0002332111");
        let both = [&block[..], &word("0000")[..], &block[..]].concat();
        let x = BiConfiguration::finite(0, both, 0);
        let y = g.apply(&x);
        let expected = [&word("0003223111")[..], &word("0000")[..], &word("0003223111")[..]].concat();
        assert_eq!(y, BiConfiguration::finite(0, expected, 0));
        let plain = BiConfiguration::finite(0, word("0002333111"), 0);
        assert_eq!(g.apply(&plain), plain);
    }

    #[test]
    fn three_cycle_inverse() {
        let s = three_cycle();
        assert!(s.verify().is_ok());
        assert!(!s.is_involution());
        let inv = s.invert().unwrap();
        assert_eq!(inv.invert().unwrap(), s);
        let g = s.compile().unwrap();
        let h = inv.compile().unwrap();
        let id = SlidingBlockCode1D::identity(a(4));
        assert_eq!(h.compose(&g).equal_codes(&id).unwrap(), CodeEquality::Equal);
        assert!(!g.compose(&g).equal_codes(&id).unwrap().is_equal());
    }

    #[test]
    fn involution_squares_to_identity() {
        let g = hedlund().compile().unwrap();
        let id = SlidingBlockCode1D::identity(a(4));
        assert!(g.compose(&g).equal_codes(&id).unwrap().is_equal());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let core = (0..rng.gen_range(0..30)).map(|_| rng.gen_range(0..4)).collect();
            let x = BiConfiguration::finite(rng.gen_range(0..4), core, rng.gen_range(-5..5));
            assert_eq!(g.apply(&g.apply(&x)), x);
        }
    }

    #[test]
    fn minimal_radius_of_hedlund() {
        let g = hedlund().compile().unwrap();
        let m = g.minimal_radius().unwrap();
        assert_eq!(m.radius(), 6);
        assert!(m.equal_codes(&g).unwrap().is_equal());
    }

    #[test]
    fn permuted_scheme_is_conjugate() {
        let s = hedlund();
        let perm = vec![1, 0, 2, 3];
        let p = SlidingBlockCode1D::symbol_perm(a(4), perm.clone()).unwrap();
        let conj = s.compile().unwrap().conjugate(&p, &p);
        let direct = s.permute_symbols(&perm).compile().unwrap();
        assert!(conj.equal_codes(&direct).unwrap().is_equal());
    }
}
