//! Collapse of finite samples and finitely supported measures onto a point.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::codes::SlidingBlockCode1D;
use crate::symbolic::{Alphabet, BarOmegaPoint, Dyadic, OmegaPoint, PeriodicWord, RValue, Symbol};

use super::experiments::{act_bar, base_point_on, r_on};
use super::families::{minimal_scheme, proximal_code};
use super::BoundaryError;

/// Largest `k` tried before giving up; `g_k` has radius above `2^k`.
pub const MAX_STAGE_K: usize = 13;

/// Largest distance between two points of a finite set.
pub fn diameter(points: &[OmegaPoint]) -> Dyadic {
    let mut d = Dyadic::ZERO;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(p.distance(q));
        }
    }
    d
}

/// A `G*` element mapping `o_c` away from itself and no sample point onto
/// `o_c`, built from the minimality family. Other coordinates keep their
/// first `marker_len` symbols.
fn escape_base_point(
    c: Symbol,
    alphabet: Alphabet,
    sample: &[OmegaPoint],
    min_marker: usize,
) -> Result<Option<(usize, SlidingBlockCode1D)>, BoundaryError> {
    let o = base_point_on(c, alphabet);
    if !sample.contains(&o) {
        return Ok(None);
    }
    let perm = crate::codes::swap_perm(alphabet, 0, c);
    // x^c = o_c and y^c = 0 1 0 (1)*, both read through 0 <-> c
    let away = OmegaPoint::new(vec![0, 1, 0], PeriodicWord::constant(1))?.permute(&perm);
    let fixed: Vec<OmegaPoint> = alphabet
        .symbols()
        .map(|a| OmegaPoint::new(vec![a, if a == 0 { 1 } else { 0 }], PeriodicWord::constant(0)))
        .collect::<Result<_, _>>()?;
    let with = |p: OmegaPoint| {
        let mut v = fixed.clone();
        v[c as usize] = p;
        BarOmegaPoint::new(v)
    };
    let source = with(o.clone())?;
    let target = with(away)?;
    for k0 in 2..=MAX_STAGE_K {
        let marker = (1usize << k0).max(min_marker);
        let scheme = minimal_scheme(k0, &source, &target, |_| marker)?;
        if !scheme.verify().is_ok() {
            continue;
        }
        let g0 = scheme.compile()?.with_label(format!("min:{k0}@{c}"));
        let images = sample.iter().map(|f| g0.act_omega(f)).collect::<Result<Vec<_>, _>>()?;
        if !images.contains(&o) {
            return Ok(Some((k0, g0)));
        }
    }
    Err(BoundaryError::CollapseFailed(format!("no escape map for o_{c} with k <= {MAX_STAGE_K}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseStage {
    pub k: usize,
    pub max_distance_to_base: Dyadic,
    pub diameter: Dyadic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub samples: usize,
    pub budget: u32,
    /// `k` of the minimality element used to move the sample off `o`.
    pub escape_k: Option<usize>,
    /// Largest `r` after the escape step.
    pub m: Option<u64>,
    pub stages: Vec<CollapseStage>,
    pub collapsed: bool,
}

/// Drives a finite sample of `Ω^0` onto `o` with `g_k g_0`, recording the
/// max distance to `o` and the diameter for `k = m + 1, m + 2, ...` until
/// the diameter is at most `2^-budget`.
pub fn extremal_collapse(sample: &[OmegaPoint], alphabet: Alphabet, budget: u32) -> Result<ExtremalReport, BoundaryError> {
    let Some(first) = sample.first() else {
        return Err(BoundaryError::BadParameter("empty sample".into()));
    };
    for f in sample {
        if f.at(0) != 0 {
            return Err(BoundaryError::BadParameter(format!("sample point {f} outside Ω^0")));
        }
        alphabet.check_word(f.prefix())?;
        alphabet.check_word(f.tail().period())?;
    }
    if sample.iter().all(|f| f == first) {
        return Ok(ExtremalReport {
            samples: sample.len(),
            budget,
            escape_k: None,
            m: None,
            stages: Vec::new(),
            collapsed: true,
        });
    }
    let escape = escape_base_point(0, alphabet, sample, 0)?;
    let moved: Vec<OmegaPoint> = match &escape {
        Some((_, g0)) => sample.iter().map(|f| g0.act_omega(f)).collect::<Result<_, _>>()?,
        None => sample.to_vec(),
    };
    let mut m = 0;
    for f in &moved {
        match f.r_value()? {
            RValue::Finite(r) => m = m.max(r),
            RValue::Infinite => unreachable!("escape map keeps o out of the sample"),
        }
    }
    let o = OmegaPoint::base_point();
    let mut stages = Vec::new();
    for k in (m as usize + 1).max(2)..=MAX_STAGE_K {
        let g = proximal_code(k, alphabet, 0)?;
        let images = moved.iter().map(|f| g.act_omega(f)).collect::<Result<Vec<_>, _>>()?;
        let stage = CollapseStage {
            k,
            max_distance_to_base: images.iter().map(|f| f.distance(&o)).max().unwrap_or(Dyadic::ZERO),
            diameter: diameter(&images),
        };
        let done = stage.diameter <= Dyadic::pow2_neg(budget);
        stages.push(stage);
        if done {
            return Ok(ExtremalReport {
                samples: sample.len(),
                budget,
                escape_k: escape.map(|(k, _)| k),
                m: Some(m),
                stages,
                collapsed: true,
            });
        }
    }
    Err(BoundaryError::CollapseFailed(format!("diameter above 2^-{budget} at k = {MAX_STAGE_K}")))
}

fn ratio_str<S: Serializer>(w: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Atom {
    pub point: BarOmegaPoint,
    #[serde(serialize_with = "ratio_str")]
    pub weight: Ratio<u64>,
}

/// A finitely supported probability measure on transversals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteMeasure {
    atoms: Vec<Atom>,
}

impl FiniteMeasure {
    pub fn new(atoms: Vec<(BarOmegaPoint, Ratio<u64>)>) -> Result<Self, BoundaryError> {
        let Some((first, _)) = atoms.first() else {
            return Err(BoundaryError::BadParameter("measure without atoms".into()));
        };
        let alphabet = first.alphabet();
        let mut total = Ratio::from_integer(0u64);
        for (p, w) in &atoms {
            if p.alphabet() != alphabet {
                return Err(BoundaryError::BadParameter("atoms over different alphabets".into()));
            }
            if *w == Ratio::from_integer(0) {
                return Err(BoundaryError::BadParameter("atom weight must be positive".into()));
            }
            total += w;
        }
        if total != Ratio::from_integer(1) {
            return Err(BoundaryError::BadParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(FiniteMeasure { atoms: atoms.into_iter().map(|(point, weight)| Atom { point, weight }).collect() })
    }

    /// Uniform weights.
    pub fn uniform(points: Vec<BarOmegaPoint>) -> Result<Self, BoundaryError> {
        let n = points.len() as u64;
        Self::new(points.into_iter().map(|p| (p, Ratio::new(1, n.max(1)))).collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn alphabet(&self) -> Alphabet {
        self.atoms[0].point.alphabet()
    }

    /// Support diameter of each coordinate.
    pub fn diameters(&self) -> Vec<Dyadic> {
        self.alphabet()
            .symbols()
            .map(|a| diameter(&self.atoms.iter().map(|at| at.point.point(a).clone()).collect::<Vec<_>>()))
            .collect()
    }

    /// Pushforward under `g`, merging atoms that land on the same point.
    pub fn push(&self, g: &SlidingBlockCode1D) -> Result<Self, BoundaryError> {
        let mut out: Vec<Atom> = Vec::new();
        for at in &self.atoms {
            let point = act_bar(g, &at.point)?;
            match out.iter_mut().find(|a| a.point == point) {
                Some(a) => a.weight += at.weight,
                None => out.push(Atom { point, weight: at.weight }),
            }
        }
        Ok(FiniteMeasure { atoms: out })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureStep {
    pub coordinate: Symbol,
    pub element: String,
    pub k: usize,
    /// Support diameter of every coordinate after this step.
    pub diameters: Vec<Dyadic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureCollapseReport {
    pub budget: u32,
    pub initial_diameters: Vec<Dyadic>,
    pub steps: Vec<MeasureStep>,
    pub result: FiniteMeasure,
    pub collapsed: bool,
}

/// Pushes `μ` coordinate by coordinate towards the base points `o_c` with
/// the conjugated proximal maps until every coordinate's support has
/// diameter at most `2^-budget`.
///
/// A step on coordinate `c` only rewrites cells behind a run of `2^k`
/// copies of `c`, so the first `2^k` symbols of every other coordinate are
/// untouched; `k` is chosen with `2^k > budget` to keep earlier coordinates
/// collapsed.
pub fn measure_collapse(mu: &FiniteMeasure, budget: u32) -> Result<MeasureCollapseReport, BoundaryError> {
    let alphabet = mu.alphabet();
    let bound = Dyadic::pow2_neg(budget);
    let initial_diameters = mu.diameters();
    let mut current = mu.clone();
    let mut steps = Vec::new();
    let k_floor = (2..).find(|&k| (1u64 << k) > budget as u64).expect("unbounded");
    for c in alphabet.symbols() {
        if current.diameters()[c as usize] <= bound {
            continue;
        }
        let coords: Vec<OmegaPoint> = current.atoms.iter().map(|a| a.point.point(c).clone()).collect();
        if let Some((k0, g0)) = escape_base_point(c, alphabet, &coords, 1 << k_floor)? {
            current = current.push(&g0)?;
            steps.push(MeasureStep {
                coordinate: c,
                element: g0.label().unwrap_or("g0").to_string(),
                k: k0,
                diameters: current.diameters(),
            });
        }
        let mut rs = Vec::new();
        for a in &current.atoms {
            match r_on(c, alphabet, a.point.point(c))? {
                RValue::Finite(r) => rs.push(r as usize),
                RValue::Infinite => unreachable!("escape map keeps o_c out of the support"),
            }
        }
        let max_r = rs.iter().copied().max().unwrap_or(0);
        let min_r = rs.iter().copied().min().unwrap_or(0);
        // images agree with o_c on 0..=min_r + k
        let k = (max_r + 1).max(k_floor).max((budget as usize).saturating_sub(min_r + 1));
        if k > MAX_STAGE_K {
            return Err(BoundaryError::CollapseFailed(format!("coordinate {c} needs k = {k} > {MAX_STAGE_K}")));
        }
        let g = proximal_code(k, alphabet, c)?;
        current = current.push(&g)?;
        steps.push(MeasureStep {
            coordinate: c,
            element: g.label().unwrap_or("g").to_string(),
            k,
            diameters: current.diameters(),
        });
    }
    let collapsed = current.diameters().iter().all(|d| *d <= bound);
    if !collapsed {
        return Err(BoundaryError::CollapseFailed(format!("support diameters {:?} above 2^-{budget}", current.diameters())));
    }
    Ok(MeasureCollapseReport { budget, initial_diameters, steps, result: current, collapsed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::random_bar_point;
    use crate::symbolic::word;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn om(prefix: &str, tail: &str) -> OmegaPoint {
        OmegaPoint::new(word(prefix), PeriodicWord::new(word(tail)).unwrap()).unwrap()
    }

    #[test]
    fn singleton_sample_is_trivial() {
        let rep = extremal_collapse(&[om("0102", "0")], Alphabet::new(3).unwrap(), 10).unwrap();
        assert!(rep.collapsed);
        assert!(rep.stages.is_empty());
    }

    #[test]
    fn sample_in_low_classes_needs_no_escape() {
        let sample = [om("010", "0"), om("0110", "1"), om("0102", "2"), om("02", "1")];
        let rep = extremal_collapse(&sample, Alphabet::new(3).unwrap(), 6).unwrap();
        assert_eq!(rep.escape_k, None);
        assert_eq!(rep.m, Some(2));
        assert!(rep.collapsed);
        assert!(rep.stages.iter().all(|s| s.max_distance_to_base <= Dyadic::pow2_neg(s.k as u32 + 1)));
        assert!(rep.stages.last().unwrap().diameter <= Dyadic::pow2_neg(6));
    }

    #[test]
    fn sample_containing_base_point_escapes_first() {
        let sample = [OmegaPoint::base_point(), om("010", "1"), om("0110", "0")];
        let rep = extremal_collapse(&sample, Alphabet::new(2).unwrap(), 5).unwrap();
        assert!(rep.escape_k.is_some());
        assert!(rep.collapsed);
        let d: Vec<_> = rep.stages.iter().map(|s| s.max_distance_to_base).collect();
        assert!(d.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn point_mass_is_collapsed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_bar_point(Alphabet::new(3).unwrap(), 5, &mut rng);
        let mu = FiniteMeasure::uniform(vec![x]).unwrap();
        let rep = measure_collapse(&mu, 8).unwrap();
        assert!(rep.steps.is_empty());
        assert!(rep.collapsed);
    }

    #[test]
    fn weights_must_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_bar_point(Alphabet::new(2).unwrap(), 5, &mut rng);
        assert!(FiniteMeasure::new(vec![(x.clone(), Ratio::new(1, 2))]).is_err());
        assert!(FiniteMeasure::new(vec![(x.clone(), Ratio::new(1, 2)), (x, Ratio::new(1, 2))]).is_ok());
    }

    #[test]
    fn two_atom_binary_measure_decays_by_stage() {
        let x = BarOmegaPoint::new(vec![om("010", "0"), om("10", "1")]).unwrap();
        let y = BarOmegaPoint::new(vec![om("0110", "1"), om("1011", "0")]).unwrap();
        let mu = FiniteMeasure::new(vec![(x, Ratio::new(1, 3)), (y, Ratio::new(2, 3))]).unwrap();
        let rep = measure_collapse(&mu, 8).unwrap();
        assert!(rep.collapsed);
        let mut before = rep.initial_diameters.clone();
        for step in &rep.steps {
            let c = step.coordinate as usize;
            let (b, a) = (before[c].exponent().unwrap(), step.diameters[c].exponent().unwrap_or(u32::MAX));
            assert!(a >= b + step.k as u32, "{step:?}");
            before = step.diameters.clone();
        }
    }

    #[test]
    fn only_differing_coordinate_is_worked() {
        let x = BarOmegaPoint::new(vec![om("010", "0"), om("10", "1"), om("20", "1")]).unwrap();
        let y = BarOmegaPoint::new(vec![om("010", "0"), om("10", "1"), om("212", "0")]).unwrap();
        let mu = FiniteMeasure::uniform(vec![x, y]).unwrap();
        let rep = measure_collapse(&mu, 6).unwrap();
        assert!(rep.steps.iter().all(|s| s.coordinate == 2));
        assert!(rep.collapsed);
    }

    #[test]
    fn random_measures_collapse_with_base_points_in_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let alphabet = Alphabet::new(3).unwrap();
        for _ in 0..3 {
            let mut pts: Vec<BarOmegaPoint> = (0..3).map(|_| random_bar_point(alphabet, 5, &mut rng)).collect();
            pts.push(BarOmegaPoint::new(alphabet.symbols().map(|c| base_point_on(c, alphabet)).collect()).unwrap());
            let mu = FiniteMeasure::uniform(pts).unwrap();
            let rep = measure_collapse(&mu, 7).unwrap();
            assert!(rep.collapsed);
            assert!(rep.result.diameters().iter().all(|d| *d <= Dyadic::pow2_neg(7)));
        }
    }
}
