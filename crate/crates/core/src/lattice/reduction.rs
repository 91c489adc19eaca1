use serde::Serialize;

use crate::codes::{CodeEquality, SlidingBlockCode1D};
use crate::exhaustive::DEFAULT_BUDGET;
use crate::symbolic::{word_string, Symbol};

use super::periodic::{complete_pattern, PatternOnBall};
use super::zdcode::{equal_zd, memory_radius_zd, phi_k, SlidingBlockCodeZd};
use super::{ball_points, basis_mk, coset_injectivity_threshold, norm, LatticeBasis, LatticeError, Point};

/// Largest number of ball patterns enumerated by the uniqueness check.
pub const PATTERN_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LkVerdict {
    pub k: i64,
    pub memory_radius: usize,
    pub threshold: usize,
    pub patterns: u64,
    /// A pattern on which the rule rebuilt from the periodic action differs
    /// from `g`; `None` when the rebuilt rule is `g`.
    pub mismatch: Option<PatternOnBall>,
}

impl LkVerdict {
    pub fn unique(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Rebuilds the local rule of `g` on its memory ball from the action of
/// `φ_k(g)` on completed periodic configurations and compares it with `g`.
pub fn check_lk_uniqueness(g: &SlidingBlockCodeZd, basis: &LatticeBasis) -> Result<LkVerdict, LatticeError> {
    let rho = memory_radius_zd(g)?;
    let threshold = coset_injectivity_threshold(basis.d(), basis.k(), rho)?.threshold;
    if threshold < rho {
        return Err(LatticeError::InjectivityRadiusInsufficient { k: basis.k(), threshold, needed: rho });
    }
    let cells = (2 * rho + 1).pow(basis.d() as u32);
    let n = g.alphabet().size() as u64;
    let patterns = n.checked_pow(cells as u32).filter(|&p| p <= PATTERN_BUDGET);
    let Some(patterns) = patterns else {
        return Err(LatticeError::WindowTooLarge { cells, budget: PATTERN_BUDGET });
    };
    let phi = phi_k(g, basis);
    let r1 = phi.radius() as i64;
    let mut values = vec![0 as Symbol; cells];
    for idx in 0..patterns {
        let mut rest = idx;
        for v in values.iter_mut() {
            *v = (rest % n) as Symbol;
            rest /= n;
        }
        let x = PatternOnBall::new(g.alphabet(), basis.d(), rho, values.clone()).expect("symbols in range");
        let y = complete_pattern(&x, basis)?;
        let rebuilt = phi.local(&y.line().window(-r1, r1 + 1));
        let rho_i = rho as i64;
        let direct = g
            .eval(&|q| if norm(q) > rho_i { Some(0) } else { x.get(q) })
            .expect("memory ball decides the output");
        if rebuilt != direct {
            return Ok(LkVerdict { k: basis.k(), memory_radius: rho, threshold, patterns, mismatch: Some(x) });
        }
    }
    Ok(LkVerdict { k: basis.k(), memory_radius: rho, threshold, patterns, mismatch: None })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftRefutation {
    pub m: i64,
    /// A window on which `φ_k(g)` and `σ^m` differ at the centre.
    pub window: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ReductionVerdict {
    Shift { t: Point, k: i64, m: i64, memory_radius: usize },
    NotAShift { k: i64, memory_radius: usize, phi_radius: usize, certificate: Vec<ShiftRefutation> },
}

/// Runs the shift test through `φ_k` for a fixed `k`.
pub fn reduction_at(g: &SlidingBlockCodeZd, k: i64) -> Result<ReductionVerdict, LatticeError> {
    let basis = basis_mk(g.d(), k)?;
    let rho = memory_radius_zd(g)?;
    let threshold = coset_injectivity_threshold(g.d(), k, rho)?.threshold;
    if threshold < rho {
        return Err(LatticeError::InjectivityRadiusInsufficient { k, threshold, needed: rho });
    }
    let phi = phi_k(g, &basis);
    let r1 = phi.radius() as i64;
    let mut certificate = Vec::new();
    for m in (0..=r1).flat_map(|m| if m == 0 { vec![0] } else { vec![m, -m] }) {
        match phi.equal_codes(&SlidingBlockCode1D::shift(g.alphabet(), m))? {
            CodeEquality::Differ { window } => certificate.push(ShiftRefutation { m, window: word_string(&window) }),
            CodeEquality::Equal => {
                let mut ts: Vec<Point> = ball_points(g.d(), rho).into_iter().filter(|t| basis.ell(t) == m).collect();
                ts.sort_by_key(|t| norm(t));
                for t in ts {
                    if equal_zd(g, &SlidingBlockCodeZd::shift(g.alphabet(), t.clone()), DEFAULT_BUDGET)?.is_none() {
                        return Ok(ReductionVerdict::Shift { t, k, m, memory_radius: rho });
                    }
                }
                return Err(LatticeError::BadParameter(format!(
                    "φ_{k}(g) = σ^{m} but no shift in the memory ball matches g"
                )));
            }
        }
    }
    Ok(ReductionVerdict::NotAShift { k, memory_radius: rho, phi_radius: phi.radius(), certificate })
}

/// Chooses the smallest `k >= 2ρ + 1` whose coset injectivity threshold
/// reaches the memory radius `ρ` of `g`, then runs [`reduction_at`].
pub fn radical_reduction_check(g: &SlidingBlockCodeZd) -> Result<ReductionVerdict, LatticeError> {
    let rho = memory_radius_zd(g)?;
    let mut k = (2 * rho as i64 + 1).max(2);
    while coset_injectivity_threshold(g.d(), k, rho)?.threshold < rho {
        k += 1;
    }
    reduction_at(g, k)
}
