//! Reduction from `Z^d` to `Z`: the basis `M_k`, the sublattice `U_k`,
//! configurations periodic modulo `U_k`, and the induced map on codes.
//!
//! Norms and balls are sup-norm throughout.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::codes::CodeError;

mod periodic;
mod reduction;
mod zdcode;

pub use periodic::{complete_pattern, lift_pi_inverse, project_pi, PatternOnBall, PeriodicZdConfiguration};
pub use reduction::{
    check_lk_uniqueness, radical_reduction_check, reduction_at, LkVerdict, ReductionVerdict, ShiftRefutation, PATTERN_BUDGET,
};
pub use zdcode::{build_cross_swap, equal_zd, is_shift_zd, memory_radius_zd, phi_k, SlidingBlockCodeZd, ZdRule};

pub type Point = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("cosets of {p:?} and {q:?} coincide but the pattern holds {left} and {right}")]
    CollisionConstraint { p: Point, q: Point, left: u8, right: u8 },
    #[error("coset injectivity threshold {threshold} at k = {k} is below the memory radius {needed}")]
    InjectivityRadiusInsufficient { k: i64, threshold: usize, needed: usize },
    #[error("enumeration of {cells} cells exceeded budget of {budget}")]
    WindowTooLarge { cells: usize, budget: u64 },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Sup norm.
pub fn norm(p: &[i64]) -> i64 {
    p.iter().map(|c| c.abs()).max().unwrap_or(0)
}

/// Points of the ball `B_r` in `Z^d`, row-major with the first coordinate
/// most significant.
pub fn ball_points(d: usize, r: usize) -> Vec<Point> {
    let r = r as i64;
    let side = 2 * r + 1;
    let count = (side as usize).pow(d as u32);
    (0..count)
        .map(|mut idx| {
            let mut p = vec![0; d];
            for c in (0..d).rev() {
                p[c] = (idx % side as usize) as i64 - r;
                idx /= side as usize;
            }
            p
        })
        .collect()
}

/// Row-major index of `p` in `B_r`, if it lies in the ball.
pub fn ball_index(p: &[i64], r: usize) -> Option<usize> {
    let r = r as i64;
    let side = 2 * r + 1;
    let mut idx = 0;
    for &c in p {
        if c.abs() > r {
            return None;
        }
        idx = idx * side + (c + r);
    }
    Some(idx as usize)
}

/// Rows `e_i + k e_{i+1}` for `i < d` and the last unit vector `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeBasis {
    d: usize,
    k: i64,
    rows: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetDecomposition {
    /// Coefficients of the first `d - 1` rows.
    pub coefficients: Vec<i64>,
    /// Coefficient of `v`.
    pub ell: i64,
}

pub fn basis_mk(d: usize, k: i64) -> Result<LatticeBasis, LatticeError> {
    if d < 2 || k < 1 {
        return Err(LatticeError::BadParameter(format!("basis needs d >= 2 and k >= 1, got d={d} k={k}")));
    }
    let rows = (0..d)
        .map(|i| {
            let mut row = vec![0; d];
            row[i] = 1;
            if i + 1 < d {
                row[i + 1] = k;
            }
            row
        })
        .collect();
    let basis = LatticeBasis { d, k, rows };
    debug_assert_eq!(basis.determinant(), 1);
    Ok(basis)
}

impl LatticeBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn rows(&self) -> &[Point] {
        &self.rows
    }

    /// The last unit vector.
    pub fn v(&self) -> &Point {
        &self.rows[self.d - 1]
    }

    /// Determinant of the row matrix by fraction-free elimination.
    pub fn determinant(&self) -> i64 {
        determinant(self.rows.clone())
    }

    /// Back-substitution `c_1 = p_1`, `c_i = p_i - k c_{i-1}`,
    /// `ell = p_d - k c_{d-1}`.
    pub fn decompose(&self, p: &[i64]) -> CosetDecomposition {
        assert_eq!(p.len(), self.d, "point dimension");
        let mut coefficients = Vec::with_capacity(self.d - 1);
        let mut prev = 0;
        for &pi in &p[..self.d - 1] {
            let c = pi - self.k * prev;
            coefficients.push(c);
            prev = c;
        }
        CosetDecomposition { coefficients, ell: p[self.d - 1] - self.k * prev }
    }

    /// Coset coordinate of `p`: `p - ell(p) v` lies in `U_k`.
    pub fn ell(&self, p: &[i64]) -> i64 {
        self.decompose(p).ell
    }

    pub fn reconstruct(&self, c: &CosetDecomposition) -> Point {
        let mut p = vec![0; self.d];
        for (ci, row) in c.coefficients.iter().zip(&self.rows) {
            for (x, r) in p.iter_mut().zip(row) {
                *x += ci * r;
            }
        }
        p[self.d - 1] += c.ell;
        p
    }

    pub fn in_uk(&self, p: &[i64]) -> bool {
        self.ell(p) == 0
    }
}

fn determinant(mut m: Vec<Point>) -> i64 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1;
    for i in 0..n {
        if m[i][i] == 0 {
            match (i + 1..n).find(|&r| m[r][i] != 0) {
                Some(r) => {
                    m.swap(i, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for r in i + 1..n {
            for c in i + 1..n {
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev;
            }
        }
        prev = m[i][i];
    }
    sign * m[n - 1][n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinNorm {
    pub value: i64,
    pub witness: Point,
    pub coefficients: Vec<i64>,
}

/// Minimum sup norm over nonzero combinations of the first `d - 1` rows
/// with coefficients in `[-bound, bound]`. Ties go to the lexicographically
/// greatest vector.
pub fn min_norm_uk(d: usize, k: i64, bound: i64) -> Result<MinNorm, LatticeError> {
    let basis = basis_mk(d, k)?;
    if bound < 1 {
        return Err(LatticeError::BadParameter("coefficient bound must be >= 1".into()));
    }
    let mut best: Option<MinNorm> = None;
    let mut c = vec![-bound; d - 1];
    loop {
        if c.iter().any(|&x| x != 0) {
            let u = basis.reconstruct(&CosetDecomposition { coefficients: c.clone(), ell: 0 });
            let value = norm(&u);
            let better = match &best {
                None => true,
                Some(b) => value < b.value || (value == b.value && u > b.witness),
            };
            if better {
                best = Some(MinNorm { value, witness: u, coefficients: c.clone() });
            }
        }
        let Some(i) = (0..d - 1).rev().find(|&i| c[i] < bound) else { break };
        c[i] += 1;
        for x in &mut c[i + 1..] {
            *x = -bound;
        }
    }
    Ok(best.expect("bound >= 1 gives a nonzero combination"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityThreshold {
    pub d: usize,
    pub k: i64,
    pub rho_max: usize,
    /// Largest `ρ <= rho_max` with `ell` injective on `B_ρ`.
    pub threshold: usize,
    /// A congruent pair in `B_{threshold + 1}`, when that is within `rho_max`.
    pub witness: Option<(Point, Point)>,
}

/// Largest radius on which distinct points lie in distinct cosets of `U_k`.
pub fn coset_injectivity_threshold(d: usize, k: i64, rho_max: usize) -> Result<InjectivityThreshold, LatticeError> {
    let basis = basis_mk(d, k)?;
    for rho in 1..=rho_max {
        let mut seen: HashMap<i64, Point> = HashMap::new();
        for p in ball_points(d, rho) {
            if let Some(q) = seen.insert(basis.ell(&p), p.clone()) {
                return Ok(InjectivityThreshold { d, k, rho_max, threshold: rho - 1, witness: Some((q, p)) });
            }
        }
    }
    Ok(InjectivityThreshold { d, k, rho_max, threshold: rho_max, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basis_rows_and_determinant() {
        let b = basis_mk(2, 3).unwrap();
        assert_eq!(b.rows(), &[vec![1, 3], vec![0, 1]]);
        assert_eq!(b.v(), &vec![0, 1]);
        for d in 2..=5 {
            for k in 1..=6 {
                assert_eq!(basis_mk(d, k).unwrap().determinant(), 1);
            }
        }
        assert!(basis_mk(1, 2).is_err());
    }

    #[test]
    fn decompose_examples() {
        let b = basis_mk(2, 3).unwrap();
        assert_eq!(b.decompose(&[1, 2]), CosetDecomposition { coefficients: vec![1], ell: -1 });
        let b = basis_mk(4, 5).unwrap();
        assert_eq!(b.decompose(&[0, 0, 0, 7]), CosetDecomposition { coefficients: vec![0, 0, 0], ell: 7 });
        for (i, row) in b.rows()[..3].iter().enumerate() {
            let c = b.decompose(row);
            assert_eq!(c.ell, 0);
            assert_eq!(c.coefficients.iter().filter(|&&x| x != 0).count(), 1);
            assert_eq!(c.coefficients[i], 1);
        }
    }

    #[test]
    fn ball_index_matches_enumeration() {
        for d in 1..=3 {
            for r in 0..=2 {
                for (i, p) in ball_points(d, r).iter().enumerate() {
                    assert_eq!(ball_index(p, r), Some(i));
                }
            }
        }
        assert_eq!(ball_index(&[2, 0], 1), None);
    }

    #[test]
    fn threshold_d2_k3() {
        let t = coset_injectivity_threshold(2, 3, 4).unwrap();
        assert_eq!(t.threshold, 1);
        let (p, q) = t.witness.unwrap();
        let b = basis_mk(2, 3).unwrap();
        let diff: Point = p.iter().zip(&q).map(|(a, b)| a - b).collect();
        assert!(b.in_uk(&diff));
        assert!(norm(&p) <= 2 && norm(&q) <= 2);
    }

    #[test]
    fn min_norm_examples() {
        let m = min_norm_uk(2, 3, 10).unwrap();
        assert_eq!((m.value, m.witness), (3, vec![1, 3]));
        assert_eq!(min_norm_uk(3, 2, 8).unwrap().value, 2);
    }

    proptest! {
        #[test]
        fn decomposition_reconstructs(d in 2usize..=4, k in 1i64..=6, p in proptest::collection::vec(-20i64..=20, 4)) {
            let b = basis_mk(d, k).unwrap();
            let p = &p[..d];
            prop_assert_eq!(b.reconstruct(&b.decompose(p)), p.to_vec());
        }

        #[test]
        fn ell_is_additive(k in 1i64..=6, p in proptest::collection::vec(-20i64..=20, 3), q in proptest::collection::vec(-20i64..=20, 3)) {
            let b = basis_mk(3, k).unwrap();
            let s: Point = p.iter().zip(&q).map(|(a, c)| a + c).collect();
            prop_assert_eq!(b.ell(&s), b.ell(&p) + b.ell(&q));
        }
    }
}
