//! Finite-depth proximality and minimality experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::SlidingBlockCode1D;
use crate::symbolic::{
    default_tail_set, enumerate_cm, word_string, Alphabet, BarOmegaPoint, Dyadic, OmegaPoint, PeriodicWord, RValue,
    Symbol,
};

use super::families::{default_marker_len, minimal_scheme, proximal_code};
use super::BoundaryError;

/// Where sampled boundary points come from: every point with prefix length
/// at most `depth` closed by one of `tails`, plus `random_samples` seeded
/// points with prefixes up to `2 * depth`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub depth: usize,
    pub random_samples: usize,
    pub seed: u64,
    pub tails: Vec<String>,
}

impl Truncation {
    pub fn new(alphabet: Alphabet, depth: usize, random_samples: usize, seed: u64) -> Self {
        let tails = default_tail_set(alphabet).iter().map(|t| word_string(t.period())).collect();
        Truncation { depth, random_samples, seed, tails }
    }
}

/// Sample of `C_m`: the exhaustive enumeration followed by seeded random points.
pub fn sample_cm(m: usize, alphabet: Alphabet, trunc: &Truncation) -> Vec<OmegaPoint> {
    let tails = default_tail_set(alphabet);
    let mut out = enumerate_cm(m, trunc.depth, alphabet, &tails);
    let mut rng = ChaCha8Rng::seed_from_u64(trunc.seed ^ ((m as u64) << 32) ^ alphabet.size() as u64);
    for _ in 0..trunc.random_samples {
        out.extend(random_cm_point(m, alphabet, 2 * trunc.depth.max(m + 2), &mut rng));
    }
    out
}

/// A random point `0 1^m s w t t t ...` with `s != 1`; `None` when `C_m`
/// is empty (`m = 0` over two symbols).
pub fn random_cm_point(m: usize, alphabet: Alphabet, max_len: usize, rng: &mut impl Rng) -> Option<OmegaPoint> {
    let n = alphabet.size() as Symbol;
    if m == 0 && n == 2 {
        return None;
    }
    let mut prefix = vec![0];
    prefix.extend(std::iter::repeat(1).take(m));
    let s = loop {
        let s = rng.gen_range(0..n);
        if s != 1 && !(m == 0 && s == 0) {
            break s;
        }
    };
    prefix.push(s);
    let extra = rng.gen_range(0..=max_len.saturating_sub(prefix.len()));
    prefix.extend((0..extra).map(|_| rng.gen_range(0..n)));
    let tail: Vec<Symbol> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n)).collect();
    Some(OmegaPoint::new(prefix, PeriodicWord::new(tail).expect("nonempty")).expect("x_0 != x_1 by construction"))
}

/// `r` read on `Ω^c` through the transposition `0 <-> c`.
pub fn r_on(c: Symbol, alphabet: Alphabet, f: &OmegaPoint) -> Result<RValue, BoundaryError> {
    let perm = crate::codes::swap_perm(alphabet, 0, c);
    Ok(f.permute(&perm).r_value()?)
}

/// The base point `o_c` of `Ω^c`.
pub fn base_point_on(c: Symbol, alphabet: Alphabet) -> OmegaPoint {
    OmegaPoint::base_point().permute(&crate::codes::swap_perm(alphabet, 0, c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProximalityCell {
    pub k: usize,
    pub m: usize,
    pub samples: usize,
    /// Largest distance from an image `g_k f` to `o`.
    pub max_distance: Dyadic,
    /// `2^-(m+k)`.
    pub bound: Dyadic,
    /// Samples with `r(g_k f) != r(f) + k`.
    pub r_violations: Vec<OmegaPoint>,
}

impl ProximalityCell {
    pub fn passed(&self) -> bool {
        self.r_violations.is_empty() && self.max_distance <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProximalityReport {
    pub alphabet: usize,
    pub k_range: (usize, usize),
    pub m_range: (usize, usize),
    pub truncation: Truncation,
    /// One cell per pair with `k > m`, ordered by `(k, m)`.
    pub cells: Vec<ProximalityCell>,
}

impl ProximalityReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(ProximalityCell::passed)
    }
}

/// Applies `g_k` to samples of `C_m` for every `k > m` in the given
/// inclusive ranges.
pub fn proximality_experiment(
    m_range: (usize, usize),
    k_range: (usize, usize),
    alphabet: Alphabet,
    trunc: &Truncation,
) -> Result<ProximalityReport, BoundaryError> {
    if k_range.0 < 2 || k_range.0 > k_range.1 || m_range.0 > m_range.1 {
        return Err(BoundaryError::BadParameter(format!("ranges k={k_range:?} m={m_range:?}")));
    }
    let pairs: Vec<(usize, usize)> = (k_range.0..=k_range.1)
        .flat_map(|k| (m_range.0..=m_range.1).filter(move |&m| m < k).map(move |m| (k, m)))
        .collect();
    let cells = std::thread::scope(|s| {
        let handles: Vec<_> = pairs
            .iter()
            .map(|&(k, m)| s.spawn(move || proximality_cell(k, m, alphabet, trunc)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    Ok(ProximalityReport { alphabet: alphabet.size(), k_range, m_range, truncation: trunc.clone(), cells })
}

fn proximality_cell(k: usize, m: usize, alphabet: Alphabet, trunc: &Truncation) -> Result<ProximalityCell, BoundaryError> {
    let g = proximal_code(k, alphabet, 0)?;
    let o = OmegaPoint::base_point();
    let samples = sample_cm(m, alphabet, trunc);
    let mut max_distance = Dyadic::ZERO;
    let mut r_violations = Vec::new();
    for f in &samples {
        let image = g.act_omega(f)?;
        if image.r_value()? != RValue::Finite((m + k) as u64) {
            r_violations.push(f.clone());
        }
        max_distance = max_distance.max(image.distance(&o));
    }
    Ok(ProximalityCell {
        k,
        m,
        samples: samples.len(),
        max_distance,
        bound: Dyadic::pow2_neg((m + k) as u32),
        r_violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub k: usize,
    pub depth: usize,
    pub checked: usize,
    pub violations: Vec<OmegaPoint>,
}

/// Checks `r(g_k ω) = r(ω) + k` on every enumerated `ω` with `r(ω) < k`.
pub fn r_additivity_check(k: usize, alphabet: Alphabet, depth: usize) -> Result<AdditivityReport, BoundaryError> {
    let g = proximal_code(k, alphabet, 0)?;
    let tails = default_tail_set(alphabet);
    let mut checked = 0;
    let mut violations = Vec::new();
    for m in 0..k {
        for f in enumerate_cm(m, depth, alphabet, &tails) {
            checked += 1;
            if g.act_omega(&f)?.r_value()? != RValue::Finite((m + k) as u64) {
                violations.push(f);
            }
        }
    }
    Ok(AdditivityReport { k, depth, checked, violations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityStep {
    pub k: usize,
    pub rules: usize,
    /// Per symbol, the first index where the image of `x^a` and `y^a` differ.
    pub agreement: Vec<Option<usize>>,
    pub distance: Dyadic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub source: BarOmegaPoint,
    pub target: BarOmegaPoint,
    pub steps: Vec<MinimalityStep>,
}

impl MinimalityReport {
    /// Whether every image agrees with the target on indices `0..=k`.
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.agreement.iter().all(|d| d.map_or(true, |d| d > s.k)))
    }
}

/// Applies the minimality map for each `k` in `ks` to `source`.
pub fn minimality_experiment(
    source: &BarOmegaPoint,
    target: &BarOmegaPoint,
    ks: impl IntoIterator<Item = usize>,
) -> Result<MinimalityReport, BoundaryError> {
    let mut steps = Vec::new();
    for k in ks {
        let scheme = minimal_scheme(k, source, target, default_marker_len)?;
        let g = scheme.compile()?;
        let image = act_bar(&g, source)?;
        let agreement: Vec<Option<usize>> =
            image.points().iter().zip(target.points()).map(|(p, q)| p.first_difference(q)).collect();
        let distance = image.points().iter().zip(target.points()).map(|(p, q)| p.distance(q)).max().unwrap_or(Dyadic::ZERO);
        steps.push(MinimalityStep { k, rules: scheme.rules().len(), agreement, distance });
    }
    Ok(MinimalityReport { source: source.clone(), target: target.clone(), steps })
}

/// Coordinatewise action of a `G*` element on a transversal.
pub fn act_bar(g: &SlidingBlockCode1D, x: &BarOmegaPoint) -> Result<BarOmegaPoint, BoundaryError> {
    let pts = x.points().iter().map(|p| g.act_omega(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(BarOmegaPoint::new(pts)?)
}

/// A seeded random transversal with prefixes of length at most `max_len`.
pub fn random_bar_point(alphabet: Alphabet, max_len: usize, rng: &mut impl Rng) -> BarOmegaPoint {
    let n = alphabet.size() as Symbol;
    let pts = alphabet
        .symbols()
        .map(|a| {
            let mut prefix = vec![a, (a + rng.gen_range(1..n)) % n];
            let extra = rng.gen_range(0..=max_len.saturating_sub(2));
            prefix.extend((0..extra).map(|_| rng.gen_range(0..n)));
            let tail: Vec<Symbol> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n)).collect();
            OmegaPoint::new(prefix, PeriodicWord::new(tail).expect("nonempty")).expect("x_0 != x_1")
        })
        .collect();
    BarOmegaPoint::new(pts).expect("entry a starts with a")
}
