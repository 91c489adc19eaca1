use std::fmt;

use super::{primitive_len, word_string, PeriodicWord, Symbol, SymbolicError};

/// A point of the full shift with periodic tails on both sides.
///
/// Cells left of `anchor` read the left tail so that cell `anchor - 1` is
/// the last symbol of its period; the core occupies `anchor..anchor+len`;
/// the right tail starts right after it. The stored representation is
/// always canonical, so `==` is equality of points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiConfiguration {
    left: PeriodicWord,
    core: Vec<Symbol>,
    anchor: i64,
    right: PeriodicWord,
}

impl BiConfiguration {
    pub fn new(left: PeriodicWord, core: Vec<Symbol>, anchor: i64, right: PeriodicWord) -> Self {
        BiConfiguration { left, core, anchor, right }.normalize()
    }

    pub fn constant(s: Symbol) -> Self {
        BiConfiguration {
            left: PeriodicWord::constant(s),
            core: Vec::new(),
            anchor: 0,
            right: PeriodicWord::constant(s),
        }
    }

    /// `word` placed at `anchor` in a sea of `background`.
    pub fn finite(background: Symbol, word: Vec<Symbol>, anchor: i64) -> Self {
        let sea = PeriodicWord::constant(background);
        Self::new(sea.clone(), word, anchor, sea)
    }

    /// Builds a point from a window `[lo, lo + cells.len())` whose first
    /// `left_period` cells are one period of the left tail and whose last
    /// `right_period` cells are one period of the right tail.
    pub(crate) fn from_window(cells: &[Symbol], lo: i64, left_period: usize, right_period: usize) -> Self {
        let n = cells.len();
        debug_assert!(left_period + right_period <= n);
        let left = PeriodicWord::new(cells[..left_period].to_vec()).expect("nonempty period");
        let right = PeriodicWord::new(cells[n - right_period..].to_vec()).expect("nonempty period");
        let core = cells[left_period..n - right_period].to_vec();
        Self::new(left, core, lo + left_period as i64, right)
    }

    pub fn left_tail(&self) -> &PeriodicWord {
        &self.left
    }

    pub fn right_tail(&self) -> &PeriodicWord {
        &self.right
    }

    pub fn core(&self) -> &[Symbol] {
        &self.core
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// First cell of the right tail.
    pub fn right_start(&self) -> i64 {
        self.anchor + self.core.len() as i64
    }

    pub fn get(&self, m: i64) -> Symbol {
        if m < self.anchor {
            self.left.at(m - self.anchor)
        } else if m < self.right_start() {
            self.core[(m - self.anchor) as usize]
        } else {
            self.right.at(m - self.right_start())
        }
    }

    /// Cells `lo..hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Symbol> {
        (lo..hi).map(|m| self.get(m)).collect()
    }

    fn normalize(self) -> Self {
        let p = primitive_len(self.left.period()) as i64;
        let q = primitive_len(self.right.period()) as i64;
        let start = self.anchor;
        let end = self.right_start();
        let reach = p + q + 1;

        let mut c = start;
        while self.get(c) == self.get(c - p) {
            c += 1;
            if c > end + reach {
                return self.globally_periodic();
            }
        }
        let mut b = end;
        while self.get(b - 1) == self.get(b - 1 + q) {
            b -= 1;
            if b < start - reach {
                return self.globally_periodic();
            }
        }
        let b = b.max(c);
        let left = PeriodicWord(self.window(c - p, c));
        let right = PeriodicWord(self.window(b, b + q));
        let core = self.window(c, b);
        BiConfiguration { left, core, anchor: c, right }
    }

    fn globally_periodic(&self) -> Self {
        let p = primitive_len(self.left.period()) as i64;
        let period = PeriodicWord(self.window(0, p));
        BiConfiguration { left: period.clone(), core: Vec::new(), anchor: 0, right: period }
    }

    /// `Some(a)` when every cell is `a`.
    pub fn constant_value(&self) -> Option<Symbol> {
        if self.core.is_empty() && self.left.is_constant() && self.left == self.right {
            Some(self.left.period()[0])
        } else {
            None
        }
    }

    /// Membership in the set of points with a constant left tail.
    pub fn in_ap(&self) -> bool {
        self.left.is_constant()
    }

    /// Constant left tail and not constant overall.
    pub fn in_astar(&self) -> bool {
        self.in_ap() && self.constant_value().is_none()
    }

    /// `result[m] = self[m + t]`; `t = 1` is the left shift.
    pub fn shift(&self, t: i64) -> Self {
        BiConfiguration {
            left: self.left.clone(),
            core: self.core.clone(),
            anchor: self.anchor - t,
            right: self.right.clone(),
        }
        .normalize()
    }

    /// Last coordinate of the constant left run: `min { m : x_m != x_{m+1} }`.
    pub fn ell(&self) -> Result<i64, SymbolicError> {
        if !self.in_ap() {
            return Err(SymbolicError::NotEventuallyConstantLeft);
        }
        if self.constant_value().is_some() {
            return Err(SymbolicError::ConstantConfiguration);
        }
        // canonical anchor is the first cell breaking the left period
        Ok(self.anchor - 1)
    }
}

impl fmt::Display for BiConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})* \"{}\" @{} ({})*",
            word_string(self.left.period()),
            word_string(&self.core),
            self.anchor,
            word_string(self.right.period())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::word;
    use proptest::prelude::*;

    fn pw(s: &str) -> PeriodicWord {
        PeriodicWord::new(word(s)).unwrap()
    }

    #[test]
    fn core_absorbed_into_tails() {
        let x = BiConfiguration::new(pw("01"), word("0101"), 0, pw("1"));
        assert!(x.core().is_empty());
        assert_eq!(x.left_tail().period(), &word("01")[..]);
        assert_eq!(x.right_tail().period(), &word("1")[..]);
        assert_eq!(x.anchor(), 4);
        for m in -10i64..20 {
            let expected = if m < 4 { [0, 1][m.rem_euclid(2) as usize] } else { 1 };
            assert_eq!(x.get(m), expected, "cell {m}");
        }
    }

    #[test]
    fn constant_case() {
        let x = BiConfiguration::new(pw("0"), word("0"), 7, pw("0"));
        assert_eq!(x, BiConfiguration::constant(0));
        assert!(x.core().is_empty());
        assert_eq!(x.constant_value(), Some(0));
        assert_eq!(x.shift(5), x);
    }

    #[test]
    fn two_representations_agree() {
        // ...000 2332 111... with the block at 1..5
        let a = BiConfiguration::new(pw("0"), word("2332"), 1, pw("1"));
        let b = BiConfiguration::new(pw("00"), word("0023321111"), -1, pw("11"));
        assert_eq!(a, b);
        let c = BiConfiguration::new(pw("0"), word("0002"), -2, pw("3321"));
        assert_ne!(a, c);
    }

    #[test]
    fn right_tail_reaching_into_left_region() {
        // ...0000 0101 0101... : the left run ends where the right period starts
        let a = BiConfiguration::new(pw("0"), vec![], 0, pw("01"));
        let b = BiConfiguration::new(pw("0"), vec![], 1, pw("10"));
        assert_eq!(a, b);
        assert_eq!(a.ell().unwrap(), 0);
    }

    #[test]
    fn fully_periodic_points_normalize() {
        let a = BiConfiguration::new(pw("01"), word("01"), 0, pw("01"));
        let b = BiConfiguration::new(pw("10"), vec![], 1, pw("10"));
        assert_eq!(a, b);
        assert_eq!(a.shift(2), a);
        assert_ne!(a.shift(1), a);
        assert!(!a.in_ap());
    }

    #[test]
    fn ell_reads_first_change() {
        let x = BiConfiguration::new(pw("1"), word("02"), 1, pw("1"));
        assert_eq!(x.ell(), Ok(0));
        assert_eq!(BiConfiguration::constant(1).ell(), Err(SymbolicError::ConstantConfiguration));
        let y = BiConfiguration::new(pw("01"), word("2"), 0, pw("1"));
        assert_eq!(y.ell(), Err(SymbolicError::NotEventuallyConstantLeft));
    }

    fn arb_periodic() -> impl Strategy<Value = PeriodicWord> {
        prop::collection::vec(0u8..3, 1..4).prop_map(|w| PeriodicWord::new(w).unwrap())
    }

    fn arb_config() -> impl Strategy<Value = BiConfiguration> {
        (arb_periodic(), prop::collection::vec(0u8..3, 0..8), -6i64..6, arb_periodic())
            .prop_map(|(l, c, a, r)| BiConfiguration::new(l, c, a, r))
    }

    proptest! {
        #[test]
        fn rerepresentation_normalizes_identically(x in arb_config(), extra_left in 0i64..7, extra_right in 0i64..7) {
            // push some tail cells into the core and re-anchor
            let lo = x.anchor() - extra_left - x.left_tail().len() as i64;
            let hi = x.right_start() + extra_right + x.right_tail().len() as i64;
            let cells = x.window(lo, hi);
            let y = BiConfiguration::from_window(&cells, lo, x.left_tail().len(), x.right_tail().len());
            prop_assert_eq!(&y, &x);
            let doubled = BiConfiguration::new(
                PeriodicWord(x.left_tail().period().repeat(2)),
                x.core().to_vec(),
                x.anchor(),
                PeriodicWord(x.right_tail().period().repeat(2)),
            );
            prop_assert_eq!(doubled, x);
        }

        #[test]
        fn normalize_is_idempotent(x in arb_config()) {
            let again = BiConfiguration::new(x.left_tail().clone(), x.core().to_vec(), x.anchor(), x.right_tail().clone());
            prop_assert_eq!(again, x);
        }

        #[test]
        fn shift_reads_source_at_m_plus_t(x in arb_config(), t in -10i64..10) {
            let y = x.shift(t);
            for m in -15..15 {
                prop_assert_eq!(y.get(m), x.get(m + t));
            }
            prop_assert_eq!(y.shift(-t), x);
        }

        #[test]
        fn ell_moves_against_shift(x in arb_config(), k in -10i64..=10) {
            if x.in_astar() {
                prop_assert_eq!(x.shift(k).ell().unwrap(), x.ell().unwrap() - k);
                let l = x.ell().unwrap();
                prop_assert_ne!(x.get(l), x.get(l + 1));
                prop_assert_eq!(x.get(l - 1), x.get(l));
            }
        }
    }
}
