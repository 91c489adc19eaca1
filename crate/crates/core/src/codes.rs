//! One-dimensional sliding block codes and their induced action on the
//! boundary space.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exhaustive::{center_out_order, find_disagreement, read_cell, Partial, DEFAULT_BUDGET};
use crate::marker::CompiledScheme;
use crate::symbolic::{Alphabet, BiConfiguration, OmegaPoint, Symbol, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("exhaustive window check for radius {radius} exceeded budget of {budget} nodes")]
    WindowTooLarge { radius: usize, budget: u64 },
    #[error("image of the embedded point left A^Z_*: {0}")]
    ImageDegenerate(SymbolicError),
    #[error("not a permutation of the alphabet")]
    NotAPermutation,
    #[error("table has {found} entries, expected {expected}")]
    BadTable { expected: usize, found: usize },
}

/// Local rule reading cells by offset from the output cell. Returning
/// `None` means the output is not decided by the cells known so far.
pub type LocalFn = dyn Fn(&dyn Fn(i64) -> Partial) -> Partial + Send + Sync;

#[derive(Clone)]
enum Kind {
    /// Table indexed by the window read as a base-`n` number, leftmost cell most significant.
    Table(Arc<Vec<Symbol>>),
    /// `σ^m`: output at cell `i` reads input at `i + m`.
    Shift(i64),
    Perm(Arc<Vec<Symbol>>),
    Marker(Arc<CompiledScheme>),
    /// `f_1 ∘ f_2 ∘ ... ∘ f_n`; `f_n` applies first.
    Compose(Arc<Vec<SlidingBlockCode1D>>),
    Local(Arc<LocalFn>),
    /// The base code with the cells at these offsets forced to 0.
    Pinned(Arc<SlidingBlockCode1D>, Vec<i64>),
    /// The base code read through a smaller window padded with 0.
    Restricted(Arc<SlidingBlockCode1D>),
}

/// A shift-commuting map of the full shift given by a finite-radius local rule.
#[derive(Clone)]
pub struct SlidingBlockCode1D {
    alphabet: Alphabet,
    radius: usize,
    kind: Kind,
    label: Option<String>,
}

impl fmt::Debug for SlidingBlockCode1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SlidingBlockCode1D")
            .field("alphabet", &self.alphabet.size())
            .field("radius", &self.radius)
            .field("label", &self.label)
            .finish()
    }
}

/// Outcome of an exhaustive comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeEquality {
    Equal,
    /// A window of length `2R + 1` on whose center the codes disagree.
    Differ { window: Vec<Symbol> },
}

impl CodeEquality {
    pub fn is_equal(&self) -> bool {
        matches!(self, CodeEquality::Equal)
    }
}

impl SlidingBlockCode1D {
    pub fn identity(alphabet: Alphabet) -> Self {
        Self::shift(alphabet, 0)
    }

    /// `σ^m`, with `σ` the left shift.
    pub fn shift(alphabet: Alphabet, m: i64) -> Self {
        let label = match m {
            0 => "id".to_string(),
            _ => format!("shift:{m}"),
        };
        SlidingBlockCode1D { alphabet, radius: m.unsigned_abs() as usize, kind: Kind::Shift(m), label: Some(label) }
    }

    /// A code given by its full rule table over windows of length `2r + 1`.
    pub fn from_table(alphabet: Alphabet, radius: usize, table: Vec<Symbol>) -> Result<Self, CodeError> {
        let expected = alphabet.size().pow(2 * radius as u32 + 1);
        if table.len() != expected {
            return Err(CodeError::BadTable { expected, found: table.len() });
        }
        if table.iter().any(|&s| !alphabet.contains(s)) {
            return Err(CodeError::BadTable { expected, found: table.len() });
        }
        Ok(SlidingBlockCode1D { alphabet, radius, kind: Kind::Table(Arc::new(table)), label: None })
    }

    /// A code given by a callable local rule reading offsets in `-r..=r`.
    pub fn from_fn<F>(alphabet: Alphabet, radius: usize, rule: F) -> Self
    where
        F: Fn(&dyn Fn(i64) -> Partial) -> Partial + Send + Sync + 'static,
    {
        SlidingBlockCode1D { alphabet, radius, kind: Kind::Local(Arc::new(rule)), label: None }
    }

    /// Radius-0 code applying `perm` to every cell.
    pub fn symbol_perm(alphabet: Alphabet, perm: Vec<Symbol>) -> Result<Self, CodeError> {
        let mut seen = vec![false; alphabet.size()];
        if perm.len() != alphabet.size() {
            return Err(CodeError::NotAPermutation);
        }
        for &s in &perm {
            if !alphabet.contains(s) || std::mem::replace(&mut seen[s as usize], true) {
                return Err(CodeError::NotAPermutation);
            }
        }
        let label = format!("perm:{}", perm.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
        Ok(SlidingBlockCode1D { alphabet, radius: 0, kind: Kind::Perm(Arc::new(perm)), label: Some(label) })
    }

    pub(crate) fn from_scheme(alphabet: Alphabet, compiled: CompiledScheme) -> Self {
        SlidingBlockCode1D { alphabet, radius: compiled.radius(), kind: Kind::Marker(Arc::new(compiled)), label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Label or a generic description, for reports.
    pub fn describe(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("code(r={})", self.radius))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Image of the window: output cell `i` is the image at input cell `i + r`.
    pub fn apply_partial(&self, w: &[Partial]) -> Vec<Partial> {
        let r = self.radius;
        if w.len() < 2 * r + 1 {
            return Vec::new();
        }
        let n_out = w.len() - 2 * r;
        match &self.kind {
            Kind::Shift(m) => (0..n_out).map(|i| read_cell(w, (i as i64 + r as i64 + m) as usize)).collect(),
            Kind::Perm(p) => w.iter().map(|c| c.map(|s| p[s as usize])).collect(),
            Kind::Table(t) => {
                let n = self.alphabet.size();
                (0..n_out)
                    .map(|i| {
                        let idx = (i..i + 2 * r + 1).try_fold(0usize, |acc, j| read_cell(w, j).map(|s| acc * n + s as usize))?;
                        Some(t[idx])
                    })
                    .collect()
            }
            Kind::Marker(c) => c.apply_partial(w),
            Kind::Compose(fs) => fs.iter().rev().fold(w.to_vec(), |v, f| f.apply_partial(&v)),
            Kind::Local(f) => (0..n_out)
                .map(|i| {
                    let center = (i + r) as i64;
                    f(&|off| {
                        debug_assert!(off.unsigned_abs() as usize <= r, "local rule read outside its radius");
                        read_cell(w, (center + off) as usize)
                    })
                })
                .collect(),
            Kind::Pinned(base, offsets) => (0..n_out)
                .map(|i| {
                    let mut sub = w[i..i + 2 * r + 1].to_vec();
                    for &off in offsets {
                        sub[(r as i64 + off) as usize] = Some(0);
                    }
                    base.apply_partial(&sub)[0]
                })
                .collect(),
            Kind::Restricted(base) => {
                let pad = base.radius - r;
                (0..n_out)
                    .map(|i| {
                        let mut sub = vec![Some(0); 2 * base.radius + 1];
                        sub[pad..pad + 2 * r + 1].copy_from_slice(&w[i..i + 2 * r + 1]);
                        base.apply_partial(&sub)[0]
                    })
                    .collect()
            }
        }
    }

    /// Exact image of a finite window; `w.len() - 2r` output cells.
    pub fn apply_window(&self, w: &[Symbol]) -> Vec<Symbol> {
        let partial: Vec<Partial> = w.iter().map(|&s| Some(s)).collect();
        self.apply_partial(&partial).into_iter().map(|c| c.expect("complete window decides every cell")).collect()
    }

    /// Local rule evaluated at the center of a window of length `2r + 1`.
    pub fn local(&self, w: &[Symbol]) -> Symbol {
        self.apply_window(w)[0]
    }

    /// Exact image of an eventually periodic point.
    pub fn apply(&self, x: &BiConfiguration) -> BiConfiguration {
        if let Kind::Compose(fs) = &self.kind {
            return fs.iter().rev().fold(x.clone(), |y, f| f.apply(&y));
        }
        let r = self.radius as i64;
        let p = x.left_tail().len();
        let q = x.right_tail().len();
        let lo = x.anchor() - 2 * r - p as i64;
        let hi = x.right_start() + 2 * r + q as i64;
        let image = self.apply_window(&x.window(lo, hi));
        BiConfiguration::from_window(&image, lo + r, p, q)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SlidingBlockCode1D) -> SlidingBlockCode1D {
        assert_eq!(self.alphabet, other.alphabet, "composing codes over different alphabets");
        let mut factors = Vec::new();
        for c in [self, other] {
            match &c.kind {
                Kind::Compose(fs) => factors.extend(fs.iter().cloned()),
                _ => factors.push(c.clone()),
            }
        }
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a}*{b}")),
            _ => None,
        };
        SlidingBlockCode1D {
            alphabet: self.alphabet,
            radius: self.radius + other.radius,
            kind: Kind::Compose(Arc::new(factors)),
            label,
        }
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate(&self, h: &SlidingBlockCode1D, h_inv: &SlidingBlockCode1D) -> SlidingBlockCode1D {
        h.compose(&self.compose(h_inv))
    }

    /// Exhaustive equality of local rules at the common radius.
    pub fn equal_codes(&self, other: &SlidingBlockCode1D) -> Result<CodeEquality, CodeError> {
        self.equal_codes_with_budget(other, DEFAULT_BUDGET)
    }

    pub fn equal_codes_with_budget(&self, other: &SlidingBlockCode1D, budget: u64) -> Result<CodeEquality, CodeError> {
        assert_eq!(self.alphabet, other.alphabet, "comparing codes over different alphabets");
        let big = self.radius.max(other.radius);
        let n = 2 * big + 1;
        let center = |c: &SlidingBlockCode1D, w: &[Partial]| c.apply_partial(&w[big - c.radius..big + c.radius + 1])[0];

        // random pre-screen
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
        for _ in 0..64 {
            let w: Vec<Partial> = (0..n).map(|_| Some(rng.gen_range(0..self.alphabet.size()) as Symbol)).collect();
            if center(self, &w) != center(other, &w) {
                return Ok(CodeEquality::Differ { window: w.into_iter().map(|c| c.unwrap()).collect() });
            }
        }

        let order = center_out_order(n);
        match find_disagreement(n, self.alphabet.size(), &order, budget, |w| (center(self, w), center(other, w))) {
            Ok(None) => Ok(CodeEquality::Equal),
            Ok(Some(window)) => Ok(CodeEquality::Differ { window }),
            Err(_) => Err(CodeError::WindowTooLarge { radius: big, budget }),
        }
    }

    /// An equivalent code whose radius cannot be reduced.
    pub fn minimal_radius(&self) -> Result<SlidingBlockCode1D, CodeError> {
        let base = Arc::new(self.clone());
        let mut current = self.clone();
        while current.radius > 0 {
            let r = current.radius as i64;
            let pinned = SlidingBlockCode1D {
                alphabet: self.alphabet,
                radius: current.radius,
                kind: Kind::Pinned(Arc::new(current.clone()), vec![-r, r]),
                label: None,
            };
            if !current.equal_codes(&pinned)?.is_equal() {
                break;
            }
            current = SlidingBlockCode1D {
                alphabet: self.alphabet,
                radius: current.radius - 1,
                kind: Kind::Restricted(base.clone()),
                label: self.label.clone(),
            };
        }
        Ok(current)
    }

    /// `Some(m)` when this code is `σ^m`.
    pub fn is_shift(&self) -> Result<Option<i64>, CodeError> {
        let r = self.radius as i64;
        for m in (0..=r).flat_map(|m| if m == 0 { vec![0] } else { vec![m, -m] }) {
            if self.equal_codes(&SlidingBlockCode1D::shift(self.alphabet, m))?.is_equal() {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    /// Whether every constant window maps to its own symbol, i.e. the code
    /// preserves each `Ω^a` under the induced action.
    pub fn in_g_star(&self) -> bool {
        let n = 2 * self.radius + 1;
        self.alphabet.symbols().all(|a| self.local(&vec![a; n]) == a)
    }

    /// The induced boundary action `ψ(g φ(ω))`.
    pub fn act_omega(&self, w: &OmegaPoint) -> Result<OmegaPoint, CodeError> {
        OmegaPoint::collapse(&self.apply(&w.embed())).map_err(CodeError::ImageDegenerate)
    }
}

/// Transposition of symbols `a` and `b`.
pub fn swap_perm(alphabet: Alphabet, a: Symbol, b: Symbol) -> Vec<Symbol> {
    alphabet
        .symbols()
        .map(|s| if s == a { b } else if s == b { a } else { s })
        .collect()
}
