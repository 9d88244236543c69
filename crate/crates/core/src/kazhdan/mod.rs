//! Codifferentials, Laplacians and higher Kazhdan projections of a group, and
//! the trace invariants computed from them over chains of finite quotients.

pub mod betti;
pub mod bounds;
pub mod complex;
pub mod laplacian;
pub mod obstruction;
pub mod projections;

use serde::{Deserialize, Serialize};

use crate::spectral::{DEFAULT_HEAT_TOLERANCE, DEFAULT_PROJECTION_TOLERANCE, DEFAULT_ZERO_TOLERANCE};

pub use betti::{betti_finite_quotient, euler_class_trace, lambda_ring_membership, luck_approximation, EulerReport, LuckReport};
pub use bounds::{l2_betti_upper_bounds, UpperBoundConfig, UpperBoundSequence};
pub use complex::{build_complex, CochainComplex, ComplexSource};
pub use laplacian::{build_laplacian, LaplacianBundle, DEGREE_ZERO_WEIGHT};
pub use obstruction::{
    box_obstruction_report, ghost_diagnostic, BetaProvenance, BetaRef, GhostReport, ObstructionReport, ProjectionKind,
    Verdict,
};
pub use projections::{hodge_count, higher_kazhdan_projection, HodgeCount, KazhdanProjections};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative zero-cluster threshold for kernel dimensions.
    pub zero: f64,
    /// Bound on projection defects `‖P² − P‖`, `‖P − Pᵀ‖`.
    pub projection: f64,
    /// Stopping tolerance of the heat-semigroup iteration.
    pub heat: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { zero: DEFAULT_ZERO_TOLERANCE, projection: DEFAULT_PROJECTION_TOLERANCE, heat: DEFAULT_HEAT_TOLERANCE }
    }
}
