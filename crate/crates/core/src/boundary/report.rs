//! Composite boundary report: minimality, proximality, measure collapse,
//! kernel and faithfulness on a fixed panel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{swap_perm, SlidingBlockCode1D};
use crate::marker::{MarkerRule, MarkerScheme};
use crate::symbolic::{word, Alphabet, BarOmegaPoint, OmegaPoint};

use super::collapse::{extremal_collapse, measure_collapse, ExtremalReport, FiniteMeasure, MeasureCollapseReport};
use super::experiments::{
    base_point_on, minimality_experiment, proximality_experiment, random_bar_point, sample_cm, MinimalityReport,
    ProximalityReport, Truncation,
};
use super::faithfulness::{faithfulness_witness, FaithfulnessVerdict};
use super::families::{default_marker_len, minimal_scheme, proximal_code};
use super::BoundaryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryParams {
    pub seed: u64,
    /// Prefix depth of enumerated sample points.
    pub depth: usize,
    pub k_max: usize,
    pub m_max: usize,
    /// Collapse target `2^-budget`.
    pub budget: u32,
    /// Random transversal pairs for the minimality section.
    pub pairs: usize,
    pub random_samples: usize,
    /// Largest `|m|` in the kernel check.
    pub shift_range: i64,
}

impl Default for BoundaryParams {
    fn default() -> Self {
        BoundaryParams { seed: 0, depth: 6, k_max: 5, m_max: 2, budget: 8, pairs: 3, random_samples: 8, shift_range: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub shifts: Vec<i64>,
    pub points: usize,
    /// Points moved by some shift; empty when the kernel check passes.
    pub moved: Vec<OmegaPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PanelEntry {
    pub label: String,
    #[serde(flatten)]
    pub verdict: FaithfulnessVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryReport {
    pub alphabet: usize,
    pub params: BoundaryParams,
    pub minimality: Vec<MinimalityReport>,
    pub proximality: ProximalityReport,
    pub extremal: ExtremalReport,
    pub measure: MeasureCollapseReport,
    pub kernel: KernelReport,
    /// Panel members found to be shifts.
    pub kernel_panel: Vec<PanelEntry>,
    /// Panel members with a moved boundary point.
    pub faithfulness: Vec<PanelEntry>,
    pub passed: bool,
}

/// Non-shift automata used for the faithfulness section, plus `σ^3` as a
/// kernel control.
pub fn default_panel(alphabet: Alphabet, seed: u64) -> Result<Vec<SlidingBlockCode1D>, BoundaryError> {
    let mut panel = vec![
        SlidingBlockCode1D::shift(alphabet, 3),
        proximal_code(2, alphabet, 0)?,
        proximal_code(3, alphabet, 1)?,
        proximal_code(2, alphabet, 0)?.compose(&proximal_code(3, alphabet, 0)?),
        SlidingBlockCode1D::symbol_perm(alphabet, swap_perm(alphabet, 0, 1))?.with_label("perm:0<->1"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_bar_point(alphabet, 5, &mut rng);
    let y = random_bar_point(alphabet, 5, &mut rng);
    let min = minimal_scheme(3, &x, &y, default_marker_len)?;
    if !min.rules().is_empty() {
        panel.push(min.compile()?.with_label("min:3"));
    }
    if alphabet.size() >= 4 {
        let rule = MarkerRule::swap(word("000"), word("2332"), word("3223"), word("111"))?;
        panel.push(MarkerScheme::new(alphabet, vec![rule])?.compile()?.with_label("marker:000[2332|3223]111"));
    }
    Ok(panel)
}

/// Runs every section with deterministic parameters; identical inputs give
/// identical reports.
pub fn boundary_report(alphabet: Alphabet, params: &BoundaryParams) -> Result<BoundaryReport, BoundaryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut minimality = Vec::new();
    for _ in 0..params.pairs {
        let x = random_bar_point(alphabet, params.depth, &mut rng);
        let y = random_bar_point(alphabet, params.depth, &mut rng);
        minimality.push(minimality_experiment(&x, &y, 1..=params.k_max)?);
    }

    let trunc = Truncation::new(alphabet, params.depth, params.random_samples, params.seed);
    let m_min = if alphabet.size() >= 3 { 0 } else { 1 };
    let proximality = proximality_experiment((m_min, params.m_max), (2, params.k_max), alphabet, &trunc)?;

    let mut sample: Vec<OmegaPoint> = (1..=2).flat_map(|m| sample_cm(m, alphabet, &trunc)).collect();
    sample.push(OmegaPoint::base_point());
    let extremal = extremal_collapse(&sample, alphabet, params.budget)?;

    let mut atoms: Vec<BarOmegaPoint> = (0..3).map(|_| random_bar_point(alphabet, params.depth, &mut rng)).collect();
    atoms.push(BarOmegaPoint::new(alphabet.symbols().map(|c| base_point_on(c, alphabet)).collect())?);
    let measure = measure_collapse(&FiniteMeasure::uniform(atoms)?, params.budget)?;

    let shifts: Vec<i64> = (-params.shift_range..=params.shift_range).filter(|&m| m != 0).collect();
    let points: Vec<OmegaPoint> = alphabet
        .symbols()
        .flat_map(|c| {
            let perm = swap_perm(alphabet, 0, c);
            sample.iter().map(move |f| f.permute(&perm))
        })
        .collect();
    let mut moved = Vec::new();
    for p in &points {
        for &m in &shifts {
            if SlidingBlockCode1D::shift(alphabet, m).act_omega(p)? != *p {
                moved.push(p.clone());
                break;
            }
        }
    }
    let kernel = KernelReport { shifts, points: points.len(), moved };

    let mut kernel_panel = Vec::new();
    let mut faithfulness = Vec::new();
    for g in default_panel(alphabet, params.seed)? {
        let entry = PanelEntry { label: g.describe(), verdict: faithfulness_witness(&g)? };
        match entry.verdict {
            FaithfulnessVerdict::Shift { .. } => kernel_panel.push(entry),
            FaithfulnessVerdict::Moved { .. } => faithfulness.push(entry),
        }
    }

    let passed = minimality.iter().all(MinimalityReport::passed)
        && proximality.passed()
        && extremal.collapsed
        && measure.collapsed
        && kernel.moved.is_empty();
    Ok(BoundaryReport {
        alphabet: alphabet.size(),
        params: params.clone(),
        minimality,
        proximality,
        extremal,
        measure,
        kernel,
        kernel_panel,
        faithfulness,
        passed,
    })
}
