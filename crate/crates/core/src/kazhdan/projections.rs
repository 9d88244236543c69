use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::RANK_PRIME;
use crate::kazhdan::complex::CochainComplex;
use crate::kazhdan::laplacian::{build_laplacian, LaplacianBundle};
use crate::kazhdan::Tolerances;
use crate::representation::Representation;
use crate::spectral::eigen::EigenConfig;
use crate::spectral::{
    evaluate, heat_projection_with, kernel_projection_with, spectral_gap, EvaluatedOperator, GapReport,
    ProjectionMatrix,
};

pub(crate) struct EvaluatedBundle {
    pub full: EvaluatedOperator,
    pub plus: EvaluatedOperator,
    pub minus: EvaluatedOperator,
}

pub(crate) fn evaluate_bundle(b: &LaplacianBundle, rep: &Representation) -> Result<EvaluatedBundle> {
    let n = b.degree;
    Ok(EvaluatedBundle {
        full: evaluate(&b.full, rep, format!("Delta_{n}"))?,
        plus: evaluate(&b.plus, rep, format!("Delta_{n}^+"))?,
        minus: evaluate(&b.minus, rep, format!("Delta_{n}^-"))?,
    })
}

/// Kernel dimensions of `π(Δₙ)`, `π(Δₙ⁺)`, `π(Δₙ⁻)` on `π(Cⁿ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeCount {
    pub degree: usize,
    pub cochain_dim: usize,
    pub ker_full: usize,
    pub ker_plus: usize,
    pub ker_minus: usize,
}

impl HodgeCount {
    /// `ker Δ = ker Δ⁺ ∩ ker Δ⁻` and `ker Δ⁺ + ker Δ⁻` spans everything.
    pub fn holds(&self) -> bool {
        self.ker_plus + self.ker_minus == self.ker_full + self.cochain_dim
    }
}

pub fn hodge_count(c: &CochainComplex, n: usize, rep: &Representation, tol: &Tolerances) -> Result<HodgeCount> {
    let bundle = build_laplacian(c, n)?;
    let ev = evaluate_bundle(&bundle, rep)?;
    let kernel = |m: &EvaluatedOperator| -> Result<usize> {
        let r = spectral_gap(m, tol.zero)?;
        r.require_resolved()?;
        Ok(r.kernel_dim)
    };
    Ok(HodgeCount {
        degree: n,
        cochain_dim: ev.full.dimension(),
        ker_full: kernel(&ev.full)?,
        ker_plus: kernel(&ev.plus)?,
        ker_minus: kernel(&ev.minus)?,
    })
}

/// Images `π(p)`, `π(p⁺)`, `π(p⁻)` of the higher Kazhdan projections of
/// degree `n`, with the checks tying them to the complex.
#[derive(Clone, Debug)]
pub struct KazhdanProjections {
    pub degree: usize,
    pub full: ProjectionMatrix,
    pub plus: ProjectionMatrix,
    pub minus: ProjectionMatrix,
    pub full_gap: GapReport,
    pub plus_gap: GapReport,
    pub minus_gap: GapReport,
    /// `‖p − p⁺p⁻‖` (Frobenius).
    pub product_defect: f64,
    /// `‖p_eigen − p_heat‖` between the two constructions of `π(p)`.
    pub heat_distance: f64,
    /// `‖π(Δₙ)·π(pₙ)‖` (Frobenius).
    pub residual: f64,
    /// Rank of `π(dₙ)` modulo a large prime.
    pub rank_d: usize,
    /// Rank of `π(dₙ₋₁)` modulo a large prime.
    pub rank_d_prev: usize,
}

impl KazhdanProjections {
    pub fn trace(&self) -> f64 {
        self.full.trace()
    }
}

fn modular_rank(c: &CochainComplex, degree: Option<usize>, rep: &Representation) -> Result<usize> {
    let Some(d) = degree.and_then(|m| c.differential(m)) else {
        return Ok(0);
    };
    rep.evaluate(d)?
        .rank_mod_p(RANK_PRIME)
        .ok_or_else(|| Error::InvalidInput("representation entries are not reducible modulo the rank prime".into()))
}

pub fn higher_kazhdan_projection(
    c: &CochainComplex,
    n: usize,
    rep: &Representation,
    tol: &Tolerances,
) -> Result<KazhdanProjections> {
    let bundle = build_laplacian(c, n)?;
    let ev = evaluate_bundle(&bundle, rep)?;
    let config = EigenConfig::default();
    let full_gap = spectral_gap(&ev.full, tol.zero)?;
    let plus_gap = spectral_gap(&ev.plus, tol.zero)?;
    let minus_gap = spectral_gap(&ev.minus, tol.zero)?;
    let full = kernel_projection_with(&ev.full, tol.zero, tol.projection, &config)?;
    let plus = kernel_projection_with(&ev.plus, tol.zero, tol.projection, &config)?;
    let minus = kernel_projection_with(&ev.minus, tol.zero, tol.projection, &config)?;
    let heat = heat_projection_with(&ev.full, full_gap.gap_hint(), tol.heat, tol.projection)?;

    let dim = ev.full.dimension();
    let rank_d = modular_rank(c, Some(n), rep)?;
    let rank_d_prev = modular_rank(c, n.checked_sub(1), rep)?;
    let checks = [
        (format!("Delta_{n}^+"), plus_gap.kernel_dim, dim - rank_d),
        (format!("Delta_{n}^-"), minus_gap.kernel_dim, dim - rank_d_prev),
    ];
    for (operator, spectral, algebraic) in checks {
        if spectral != algebraic {
            return Err(Error::KernelMismatch { operator, spectral, algebraic });
        }
    }
    let product_defect = (full.entries() - plus.entries() * minus.entries()).norm();
    let heat_distance = full.distance(&heat);
    let residual = full.residual(&ev.full);
    Ok(KazhdanProjections {
        degree: n,
        full,
        plus,
        minus,
        full_gap,
        plus_gap,
        minus_gap,
        product_defect,
        heat_distance,
        residual,
        rank_d,
        rank_d_prev,
    })
}
