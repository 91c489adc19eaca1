//! Automaton families acting on the boundary and the finite-depth
//! experiments built on them.

use thiserror::Error;

use crate::codes::CodeError;
use crate::marker::SchemeError;
use crate::symbolic::{Symbol, SymbolicError};

mod collapse;
mod experiments;
mod faithfulness;
mod families;
mod relations;
mod report;

pub use collapse::{
    diameter, extremal_collapse, measure_collapse, Atom, CollapseStage, ExtremalReport, FiniteMeasure, MeasureCollapseReport,
    MeasureStep, MAX_STAGE_K,
};
pub use experiments::{
    act_bar, base_point_on, minimality_experiment, proximality_experiment, r_additivity_check, r_on, random_bar_point,
    random_cm_point, sample_cm, AdditivityReport, MinimalityReport, MinimalityStep, ProximalityCell, ProximalityReport,
    Truncation,
};
pub use faithfulness::{faithfulness_witness, FaithfulnessVerdict};
pub use families::{default_marker_len, minimal_scheme, proximal_code, proximal_scheme};
pub use report::{boundary_report, default_panel, BoundaryParams, BoundaryReport, KernelReport, PanelEntry};
pub use relations::{
    candidate_configurations, default_free_pair, reduced_words, relation_search, Generator, RelationReport, WordEntry,
    WordVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("transversal entry for symbol {0} repeats its first symbol")]
    PrefixDegenerate(Symbol),
    #[error("collapse failed: {0}")]
    CollapseFailed(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}
