use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::QuotientChain;
use crate::error::{Error, Result};
use crate::kazhdan::betti::{betti_over_chain, ser_ratio, BettiRow};
use crate::kazhdan::complex::CochainComplex;
use crate::kazhdan::laplacian::build_laplacian;
use crate::kazhdan::projections::evaluate_bundle;
use crate::kazhdan::Tolerances;
use crate::sos::{ClaimKind, GapClaim};
use crate::spectral::eigen::EigenConfig;
use crate::spectral::kernel_projection_with;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaProvenance {
    UserCited,
    #[serde(rename = "luck-extrapolated", alias = "Lück-extrapolated")]
    LuckExtrapolated,
}

/// Reference value for `βⁿ₍₂₎(G)` with where it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaRef {
    #[serde(serialize_with = "ser_ratio")]
    pub value: BigRational,
    pub provenance: BetaProvenance,
    pub citation: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EventuallyEqual,
    PersistentDiscrepancy,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionRow {
    pub quotient: usize,
    pub index: usize,
    /// `dim ker λᵢ(Δₙ) = βⁿ(Nᵢ)`.
    pub d_star_value: usize,
    /// `[G : Nᵢ]·β_ref`.
    #[serde(serialize_with = "ser_ratio")]
    pub lifted_value: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub discrepancy: BigRational,
    pub gap: Option<f64>,
    /// `(−1)ⁿ([G:Nᵢ]χ(G) − Σ_{m≠n} (−1)ᵐ βᵐ(Nᵢ))` on complete complexes.
    pub euler_prediction: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapDecay {
    pub gaps: Vec<Option<f64>>,
    pub min_gap: Option<f64>,
    /// Gaps strictly decrease along the chain.
    pub decaying: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum UniformGap {
    /// A verified certificate bounds the gap for every unitary representation.
    Certified { epsilon: f64, certificate: String },
    /// No certificate; the per-quotient gaps shrink.
    Decaying,
    /// No certificate; the computed gaps do not shrink.
    Uncertified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub degree: usize,
    pub beta_ref: BetaRef,
    pub rows: Vec<ObstructionRow>,
    pub verdict: Verdict,
    pub gap_decay: GapDecay,
    pub uniform_gap: UniformGap,
    /// Persistent exact discrepancy together with a certified uniform gap,
    /// observed on the computed quotients only.
    pub obstruction_evidence: bool,
    pub discrepancy_formula: String,
    pub scope: String,
    pub tolerances: Tolerances,
}

/// Compares `d*` values `βⁿ(Nᵢ)` with lifted values `[G:Nᵢ]·β_ref` over the chain.
pub fn box_obstruction_report(
    c: &CochainComplex,
    n: usize,
    chain: &QuotientChain,
    beta_ref: BetaRef,
    claim: Option<&GapClaim>,
    tol: &Tolerances,
) -> Result<ObstructionReport> {
    let betti = betti_over_chain(c, n, chain, tol)?;
    let predictions = if c.is_complete() { Some(euler_predictions(c, n, chain, tol)?) } else { None };
    let rows: Vec<ObstructionRow> = betti
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let lifted_value = BigRational::from_integer(BigInt::from(b.index)) * &beta_ref.value;
            let discrepancy = BigRational::from_integer(BigInt::from(b.kernel_dim)) - &lifted_value;
            ObstructionRow {
                quotient: b.quotient,
                index: b.index,
                d_star_value: b.kernel_dim,
                lifted_value,
                discrepancy,
                gap: b.gap,
                euler_prediction: predictions.as_ref().map(|p| p[i]),
            }
        })
        .collect();
    let verdict = verdict(&rows, beta_ref.provenance);
    let gaps: Vec<Option<f64>> = rows.iter().map(|r| r.gap).collect();
    let decaying = gaps.len() >= 2 && gaps.windows(2).all(|w| matches!(w, [Some(a), Some(b)] if b < a));
    let min_gap = gaps.iter().flatten().copied().reduce(f64::min);
    let uniform_gap = match claim {
        Some(GapClaim { kind: ClaimKind::UniformGap, degree: Some(d), epsilon: Some(eps), label, .. }) if *d == n => {
            UniformGap::Certified { epsilon: num_traits::ToPrimitive::to_f64(eps).unwrap_or(f64::NAN), certificate: label.clone() }
        }
        _ if decaying => UniformGap::Decaying,
        _ => UniformGap::Uncertified,
    };
    let obstruction_evidence =
        verdict == Verdict::PersistentDiscrepancy && matches!(uniform_gap, UniformGap::Certified { .. });
    Ok(ObstructionReport {
        degree: n,
        beta_ref,
        rows,
        verdict,
        gap_decay: GapDecay { gaps, min_gap, decaying },
        uniform_gap,
        obstruction_evidence,
        discrepancy_formula: format!("discrepancy_i = beta^{n}(N_i) - [G:N_i] * beta_ref"),
        scope: "pattern over the computed quotients only".into(),
        tolerances: *tol,
    })
}

fn verdict(rows: &[ObstructionRow], provenance: BetaProvenance) -> Verdict {
    if rows.len() < 2 {
        return Verdict::Inconclusive;
    }
    let tail = &rows[1..];
    let persistent = tail.iter().all(|r| !r.discrepancy.is_zero());
    let settled = rows.last().is_some_and(|r| r.discrepancy.is_zero());
    match provenance {
        BetaProvenance::UserCited if persistent => Verdict::PersistentDiscrepancy,
        BetaProvenance::UserCited if settled => Verdict::EventuallyEqual,
        BetaProvenance::LuckExtrapolated
            if persistent && tail.iter().all(|r| r.discrepancy.is_integer() && r.discrepancy.abs() >= BigRational::from_integer(1.into())) =>
        {
            Verdict::PersistentDiscrepancy
        }
        _ => Verdict::Inconclusive,
    }
}

fn euler_predictions(c: &CochainComplex, n: usize, chain: &QuotientChain, tol: &Tolerances) -> Result<Vec<i64>> {
    let chi = c.euler_characteristic();
    let others: Vec<(usize, Vec<BettiRow>)> = (0..=c.top_degree())
        .filter(|&m| m != n)
        .map(|m| Ok((m, betti_over_chain(c, m, chain, tol)?)))
        .collect::<Result<_>>()?;
    Ok(chain
        .members
        .iter()
        .enumerate()
        .map(|(i, member)| {
            let rest: i64 = others
                .iter()
                .map(|(m, rows)| if m % 2 == 0 { rows[i].kernel_dim as i64 } else { -(rows[i].kernel_dim as i64) })
                .sum();
            let value = member.index() as i64 * chi - rest;
            if n % 2 == 0 {
                value
            } else {
                -value
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectionKind {
    Full,
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GhostRow {
    pub quotient: usize,
    pub index: usize,
    pub max_entry: f64,
    pub trace: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GhostReport {
    pub degree: usize,
    pub kind: ProjectionKind,
    pub rows: Vec<GhostRow>,
    /// Max entries strictly decrease along the chain, overall at least as fast
    /// as `[G:Nᵢ]^(-1/2)`.
    pub ghost_like: bool,
    pub tolerances: Tolerances,
}

/// Largest matrix coefficient of `λᵢ(pₙ)` (or `pₙ±`) per quotient.
pub fn ghost_diagnostic(
    c: &CochainComplex,
    n: usize,
    chain: &QuotientChain,
    kind: ProjectionKind,
    tol: &Tolerances,
) -> Result<GhostReport> {
    let bundle = build_laplacian(c, n)?;
    let config = EigenConfig::default();
    let rows = chain
        .members
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let ev = evaluate_bundle(&bundle, &m.representation)?;
            let op = match kind {
                ProjectionKind::Full => &ev.full,
                ProjectionKind::Plus => &ev.plus,
                ProjectionKind::Minus => &ev.minus,
            };
            let p = kernel_projection_with(op, tol.zero, tol.projection, &config)?;
            Ok(GhostRow { quotient: i + 1, index: m.index(), max_entry: p.max_abs_entry(), trace: p.trace() })
        })
        .collect::<Result<Vec<_>>>()?;
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        return Err(Error::InvalidInput("quotient chain is empty".into()));
    };
    let decreasing = rows.windows(2).all(|w| w[1].max_entry < w[0].max_entry * (1.0 - 1e-9));
    let fast_enough = last.max_entry <= first.max_entry * (first.index as f64 / last.index as f64).sqrt();
    let ghost_like = rows.len() >= 2 && decreasing && fast_enough;
    Ok(GhostReport { degree: n, kind, rows, ghost_like, tolerances: *tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{abelian_quotient_relators, quotient_chain};
    use crate::presentation::Presentation;
    use crate::ring::ratio;

    fn free_chain(ms: std::ops::RangeInclusive<i64>) -> (CochainComplex, QuotientChain) {
        let p = Presentation::free_group(2);
        let spec: Vec<_> = ms.map(|m| abelian_quotient_relators(2, m)).collect();
        (CochainComplex::from_presentation(&p).unwrap(), quotient_chain(&p, &spec, 2, 1000).unwrap())
    }

    fn cited(value: BigRational) -> BetaRef {
        BetaRef { value, provenance: BetaProvenance::UserCited, citation: Some("test".into()) }
    }

    #[test]
    fn free_group_discrepancy_one() {
        let (c, chain) = free_chain(2..=4);
        let r = box_obstruction_report(&c, 1, &chain, cited(ratio(1, 1)), None, &Tolerances::default()).unwrap();
        for row in &r.rows {
            assert_eq!(row.discrepancy, ratio(1, 1));
            assert_eq!(row.euler_prediction, Some(row.d_star_value as i64));
        }
        assert_eq!(r.verdict, Verdict::PersistentDiscrepancy);
        assert!(r.gap_decay.decaying);
        assert_eq!(r.uniform_gap, UniformGap::Decaying);
        assert!(!r.obstruction_evidence);
    }

    #[test]
    fn extrapolated_reference_needs_integral_discrepancy() {
        let (c, chain) = free_chain(2..=3);
        let mut beta = cited(ratio(1, 2));
        beta.provenance = BetaProvenance::LuckExtrapolated;
        let r = box_obstruction_report(&c, 1, &chain, beta, None, &Tolerances::default()).unwrap();
        // 10 − 9/2 is not integral
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn degree_zero_ghost() {
        let (c, chain) = free_chain(2..=3);
        let g = ghost_diagnostic(&c, 0, &chain, ProjectionKind::Full, &Tolerances::default()).unwrap();
        assert!((g.rows[0].max_entry - 0.25).abs() < 1e-12);
        assert!((g.rows[1].max_entry - 1.0 / 9.0).abs() < 1e-12);
        assert!(g.ghost_like);
        let plus = ghost_diagnostic(&c, 1, &chain, ProjectionKind::Plus, &Tolerances::default()).unwrap();
        assert!(plus.rows.iter().all(|r| (r.max_entry - 1.0).abs() < 1e-12));
        assert!(!plus.ghost_like);
        // diagonal of p₁ tends to β₁⁽²⁾/2 = 1/2
        let full = ghost_diagnostic(&c, 1, &chain, ProjectionKind::Full, &Tolerances::default()).unwrap();
        assert!(full.rows[1].max_entry < full.rows[0].max_entry);
        assert!(!full.ghost_like);
    }
}
