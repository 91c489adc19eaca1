use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::symbolic::{word_string, Alphabet, BiConfiguration, Symbol, SymbolicError};

use super::{ball_index, ball_points, LatticeBasis, LatticeError, Point};

/// A complete assignment of symbols to the sup-norm ball `B_radius`, stored
/// row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternOnBall {
    d: usize,
    radius: usize,
    values: Vec<Symbol>,
}

impl PatternOnBall {
    pub fn new(alphabet: Alphabet, d: usize, radius: usize, values: Vec<Symbol>) -> Result<Self, SymbolicError> {
        assert_eq!(values.len(), (2 * radius + 1).pow(d as u32), "pattern size");
        alphabet.check_word(&values)?;
        Ok(PatternOnBall { d, radius, values })
    }

    pub fn constant(d: usize, radius: usize, s: Symbol) -> Self {
        PatternOnBall { d, radius, values: vec![s; (2 * radius + 1).pow(d as u32)] }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn get(&self, p: &[i64]) -> Option<Symbol> {
        ball_index(p, self.radius).map(|i| self.values[i])
    }
}

impl Serialize for PatternOnBall {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&format!("B{}^{}:{}", self.radius, self.d, word_string(&self.values)))
    }
}

/// A point of `A^(Z^d)` invariant under `U_k`, stored as its values on the
/// line `Z v`: the cell at `p` holds `line[ell(p)]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicZdConfiguration {
    basis: LatticeBasis,
    line: BiConfiguration,
}

impl PeriodicZdConfiguration {
    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn line(&self) -> &BiConfiguration {
        &self.line
    }

    pub fn get(&self, p: &[i64]) -> Symbol {
        self.line.get(self.basis.ell(p))
    }

    /// Restriction to `B_radius`.
    pub fn restrict(&self, radius: usize) -> PatternOnBall {
        let d = self.basis.d();
        PatternOnBall { d, radius, values: ball_points(d, radius).iter().map(|p| self.get(p)).collect() }
    }
}

/// `π`: the values along `Z v`.
pub fn project_pi(y: &PeriodicZdConfiguration) -> BiConfiguration {
    y.line.clone()
}

/// `π⁻¹`: the unique `U_k`-invariant point with the given line.
pub fn lift_pi_inverse(z: &BiConfiguration, basis: &LatticeBasis) -> PeriodicZdConfiguration {
    PeriodicZdConfiguration { basis: basis.clone(), line: z.clone() }
}

/// Extends a ball pattern to a `U_k`-invariant configuration, filling
/// unconstrained cosets with 0.
pub fn complete_pattern(x: &PatternOnBall, basis: &LatticeBasis) -> Result<PeriodicZdConfiguration, LatticeError> {
    if x.d != basis.d() {
        return Err(LatticeError::BadParameter(format!("pattern in dimension {}, basis in {}", x.d, basis.d())));
    }
    let mut by_coset: BTreeMap<i64, (Point, Symbol)> = BTreeMap::new();
    for (p, &s) in ball_points(x.d, x.radius).iter().zip(&x.values) {
        let e = basis.ell(p);
        match by_coset.get(&e) {
            Some((q, t)) if *t != s => {
                return Err(LatticeError::CollisionConstraint { p: q.clone(), q: p.clone(), left: *t, right: s });
            }
            Some(_) => {}
            None => {
                by_coset.insert(e, (p.clone(), s));
            }
        }
    }
    let lo = *by_coset.keys().next().expect("ball is nonempty");
    let hi = *by_coset.keys().next_back().expect("ball is nonempty");
    let cells: Vec<Symbol> = (lo..=hi).map(|e| by_coset.get(&e).map_or(0, |(_, s)| *s)).collect();
    Ok(PeriodicZdConfiguration { basis: basis.clone(), line: BiConfiguration::finite(0, cells, lo) })
}
