use std::fmt;
use std::sync::Arc;

use crate::codes::SlidingBlockCode1D;
use crate::exhaustive::{find_disagreement, read_cell, Partial, DEFAULT_BUDGET};
use crate::symbolic::{Alphabet, Symbol};

use super::periodic::{lift_pi_inverse, PatternOnBall, PeriodicZdConfiguration};
use super::{ball_index, ball_points, norm, LatticeBasis, LatticeError, Point};

/// Local rule reading cells by offset from the output cell.
pub type ZdRule = dyn Fn(&dyn Fn(&[i64]) -> Partial) -> Partial + Send + Sync;

#[derive(Clone)]
enum ZdKind {
    /// Output at `p` reads input at `p + t`.
    Shift(Point),
    CrossSwap,
    /// `f_1 ∘ ... ∘ f_n`; `f_n` applies first.
    Compose(Arc<Vec<SlidingBlockCodeZd>>),
    Custom(Arc<ZdRule>),
    /// The base code with every cell outside `B_ρ` read as 0.
    Pinned(Arc<SlidingBlockCodeZd>, usize),
}

/// A cellular automaton on `A^(Z^d)` with a sup-norm radius. Rules are
/// evaluated lazily on partially known inputs.
#[derive(Clone)]
pub struct SlidingBlockCodeZd {
    alphabet: Alphabet,
    d: usize,
    radius: usize,
    kind: ZdKind,
    label: String,
}

impl fmt::Debug for SlidingBlockCodeZd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SlidingBlockCodeZd")
            .field("alphabet", &self.alphabet.size())
            .field("d", &self.d)
            .field("radius", &self.radius)
            .field("label", &self.label)
            .finish()
    }
}

impl SlidingBlockCodeZd {
    pub fn identity(alphabet: Alphabet, d: usize) -> Self {
        Self::shift(alphabet, vec![0; d])
    }

    /// The shift by `t`: `(S_t y)_p = y_{p + t}`.
    pub fn shift(alphabet: Alphabet, t: Point) -> Self {
        let label = format!("shift{t:?}");
        SlidingBlockCodeZd { alphabet, d: t.len(), radius: norm(&t) as usize, kind: ZdKind::Shift(t), label }
    }

    pub fn from_fn<F>(alphabet: Alphabet, d: usize, radius: usize, label: impl Into<String>, rule: F) -> Self
    where
        F: Fn(&dyn Fn(&[i64]) -> Partial) -> Partial + Send + Sync + 'static,
    {
        SlidingBlockCodeZd { alphabet, d, radius, kind: ZdKind::Custom(Arc::new(rule)), label: label.into() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SlidingBlockCodeZd) -> SlidingBlockCodeZd {
        assert_eq!((self.alphabet, self.d), (other.alphabet, other.d), "composing incompatible codes");
        let mut factors = Vec::new();
        for c in [self, other] {
            match &c.kind {
                ZdKind::Compose(fs) => factors.extend(fs.iter().cloned()),
                _ => factors.push(c.clone()),
            }
        }
        SlidingBlockCodeZd {
            alphabet: self.alphabet,
            d: self.d,
            radius: self.radius + other.radius,
            kind: ZdKind::Compose(Arc::new(factors)),
            label: format!("{}*{}", self.label, other.label),
        }
    }

    /// Output at the origin, `None` when the known cells do not decide it.
    pub fn eval(&self, read: &dyn Fn(&[i64]) -> Partial) -> Partial {
        match &self.kind {
            ZdKind::Shift(t) => read(t),
            ZdKind::CrossSwap => cross_swap_rule(self.d, read),
            ZdKind::Compose(fs) => eval_chain(fs, 0, &[], read),
            ZdKind::Custom(f) => f(read),
            ZdKind::Pinned(base, rho) => {
                let rho = *rho as i64;
                base.eval(&|q| if norm(q) > rho { Some(0) } else { read(q) })
            }
        }
    }

    /// Output at the origin for a pattern covering the code's ball.
    pub fn apply_pattern(&self, x: &PatternOnBall) -> Symbol {
        assert!(x.radius() >= self.radius, "pattern smaller than the code's ball");
        self.eval(&|q| x.get(q)).expect("complete pattern decides the output")
    }

    /// Image of a `U_k`-invariant configuration.
    pub fn apply_periodic(&self, y: &PeriodicZdConfiguration) -> PeriodicZdConfiguration {
        let phi = phi_k(self, y.basis());
        lift_pi_inverse(&phi.apply(y.line()), y.basis())
    }
}

fn eval_chain(fs: &[SlidingBlockCodeZd], i: usize, offset: &[i64], read: &dyn Fn(&[i64]) -> Partial) -> Partial {
    let at = |q: &[i64]| -> Vec<i64> {
        if offset.is_empty() {
            q.to_vec()
        } else {
            q.iter().zip(offset).map(|(a, b)| a + b).collect()
        }
    };
    if i + 1 == fs.len() {
        return fs[i].eval(&|q| read(&at(q)));
    }
    fs[i].eval(&|q| eval_chain(fs, i + 1, &at(q), read))
}

fn cross_swap_rule(d: usize, read: &dyn Fn(&[i64]) -> Partial) -> Partial {
    let mut all_zero = true;
    let mut unit = vec![0; d];
    for axis in 0..d {
        for s in [-1, 1] {
            unit[axis] = s;
            match read(&unit) {
                Some(0) => {}
                Some(_) => return read(&vec![0; d]),
                None => all_zero = false,
            }
            unit[axis] = 0;
        }
    }
    let center = read(&vec![0; d]);
    match center {
        Some(1) if all_zero => Some(2),
        Some(2) if all_zero => Some(1),
        Some(1) | Some(2) => None,
        other => other,
    }
}

/// Swaps 1 and 2 at a cell whose `2d` axis neighbours are all 0.
pub fn build_cross_swap(alphabet: Alphabet, d: usize) -> Result<SlidingBlockCodeZd, LatticeError> {
    if alphabet.size() < 3 || d < 1 {
        return Err(LatticeError::BadParameter(format!(
            "cross swap needs at least 3 symbols and d >= 1, got {} and {d}",
            alphabet.size()
        )));
    }
    Ok(SlidingBlockCodeZd { alphabet, d, radius: 1, kind: ZdKind::CrossSwap, label: "cross-swap".into() })
}

/// Exhaustive comparison at the common radius; returns a ball pattern on
/// which the outputs differ.
pub fn equal_zd(
    g: &SlidingBlockCodeZd,
    h: &SlidingBlockCodeZd,
    budget: u64,
) -> Result<Option<PatternOnBall>, LatticeError> {
    assert_eq!((g.alphabet, g.d), (h.alphabet, h.d), "comparing incompatible codes");
    let r = g.radius.max(h.radius);
    let points = ball_points(g.d, r);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| (norm(&points[i]), i));
    let n = points.len();
    let found = find_disagreement(n, g.alphabet.size(), &order, budget, |cells| {
        let read = |q: &[i64]| ball_index(q, r).and_then(|i| read_cell(cells, i));
        (g.eval(&read), h.eval(&read))
    })
    .map_err(|_| LatticeError::WindowTooLarge { cells: n, budget })?;
    Ok(found.map(|values| PatternOnBall::new(g.alphabet, g.d, r, values).expect("symbols in range")))
}

/// Smallest `ρ` such that the output at the origin is determined by `B_ρ`.
pub fn memory_radius_zd(g: &SlidingBlockCodeZd) -> Result<usize, LatticeError> {
    let base = Arc::new(g.clone());
    for rho in 0..g.radius {
        let pinned = SlidingBlockCodeZd {
            alphabet: g.alphabet,
            d: g.d,
            radius: g.radius,
            kind: ZdKind::Pinned(base.clone(), rho),
            label: format!("{}|B{rho}", g.label),
        };
        if equal_zd(g, &pinned, DEFAULT_BUDGET)?.is_none() {
            return Ok(rho);
        }
    }
    Ok(g.radius)
}

/// `Some(t)` when `g` is the shift by `t`.
pub fn is_shift_zd(g: &SlidingBlockCodeZd) -> Result<Option<Point>, LatticeError> {
    let mut candidates = ball_points(g.d, g.radius);
    candidates.sort_by_key(|t| norm(t));
    for t in candidates {
        if equal_zd(g, &SlidingBlockCodeZd::shift(g.alphabet, t.clone()), DEFAULT_BUDGET)?.is_none() {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// `π ∘ g ∘ π⁻¹` as a one-dimensional code. Its radius is the largest
/// `|ell(q)|` over `q` in `g`'s ball.
pub fn phi_k(g: &SlidingBlockCodeZd, basis: &LatticeBasis) -> SlidingBlockCode1D {
    assert_eq!(g.d, basis.d(), "dimension mismatch");
    let radius = ball_points(g.d, g.radius).iter().map(|q| basis.ell(q).unsigned_abs()).max().unwrap_or(0) as usize;
    let g2 = g.clone();
    let b2 = basis.clone();
    SlidingBlockCode1D::from_fn(g.alphabet, radius, move |read| g2.eval(&|q| read(b2.ell(q))))
        .with_label(format!("phi_{}({})", basis.k(), g.label))
}
