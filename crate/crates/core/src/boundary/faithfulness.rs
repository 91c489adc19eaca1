//! Witnesses that a non-shift code moves some boundary point.

use serde::Serialize;

use crate::codes::{CodeEquality, SlidingBlockCode1D};
use crate::symbolic::{BiConfiguration, OmegaPoint};

use super::relations::candidate_configurations;
use super::BoundaryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum FaithfulnessVerdict {
    /// The code is `σ^m` and acts trivially.
    Shift { m: i64 },
    /// `image = ψ(g φ(point)) != point`.
    Moved { point: OmegaPoint, image: OmegaPoint },
}

/// Finds a boundary point moved by `g`, or reports that `g` is a shift.
pub fn faithfulness_witness(g: &SlidingBlockCode1D) -> Result<FaithfulnessVerdict, BoundaryError> {
    if let Some(m) = g.is_shift()? {
        return Ok(FaithfulnessVerdict::Shift { m });
    }
    let alphabet = g.alphabet();
    let mut tried: Vec<BiConfiguration> = Vec::new();
    if let CodeEquality::Differ { window } = g.equal_codes(&SlidingBlockCode1D::identity(alphabet))? {
        // the window sits in a long constant run of each symbol in turn
        let r = g.radius() as i64;
        for a in alphabet.symbols() {
            tried.push(BiConfiguration::finite(a, window.clone(), -r));
        }
    }
    tried.extend(candidate_configurations(alphabet, 0, 64));
    for x in &tried {
        if x.constant_value().is_some() || !x.left_tail().is_constant() {
            continue;
        }
        let point = OmegaPoint::collapse(x)?;
        if let Ok(image) = g.act_omega(&point) {
            if image != point {
                return Ok(FaithfulnessVerdict::Moved { point, image });
            }
        }
    }
    Err(BoundaryError::SearchExhausted(format!(
        "{} candidates, radius {}, no moved boundary point",
        tried.len(),
        g.radius()
    )))
}
