//! Evaluation of group-ring matrices under representations, spectra,
//! spectral gaps and kernel projections.
//!
//! Evaluation is exact; the single conversion to `f64` happens when an
//! [`EvaluatedOperator`] is built, right before any eigencomputation.

pub mod eigen;
pub mod expm;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::matrix::GroupRingMatrix;
use crate::representation::Representation;

pub use eigen::{CsrMatrix, EigenConfig, LowSpectrum};

pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_PROJECTION_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_HEAT_TOLERANCE: f64 = 1e-10;

/// `π(A)` for a group-ring matrix `A`: exact entries plus a float shadow.
#[derive(Clone, Debug)]
pub struct EvaluatedOperator {
    label: String,
    exact: ExactMatrix,
    shadow: CsrMatrix,
}

impl EvaluatedOperator {
    pub fn from_exact(exact: ExactMatrix, label: impl Into<String>) -> Self {
        let n = exact.rows();
        let rows = (0..exact.rows()).map(|i| {
            exact.row(i).iter().map(|(j, v)| (*j, v.to_f64().unwrap_or(f64::NAN))).collect::<Vec<_>>()
        });
        let shadow = if exact.rows() == exact.cols() {
            CsrMatrix::from_rows(n, rows)
        } else {
            CsrMatrix::from_rows(0, std::iter::empty())
        };
        Self { label: label.into(), exact, shadow }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dimension(&self) -> usize {
        self.exact.rows()
    }

    pub fn exact(&self) -> &ExactMatrix {
        &self.exact
    }

    pub fn shadow(&self) -> &CsrMatrix {
        &self.shadow
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.shadow.to_dense()
    }

    /// `max(1, ‖M‖)` with the max-abs-row-sum norm (equal to ‖·‖₁ for symmetric M).
    pub fn scale(&self) -> f64 {
        self.shadow.norm_inf().max(1.0)
    }

    fn require_symmetric(&self) -> Result<()> {
        if self.exact.is_symmetric() {
            Ok(())
        } else {
            Err(Error::NotSymmetric)
        }
    }
}

/// Entrywise evaluation `π(A)`.
pub fn evaluate(a: &GroupRingMatrix, rep: &Representation, label: impl Into<String>) -> Result<EvaluatedOperator> {
    Ok(EvaluatedOperator::from_exact(rep.evaluate(a)?, label))
}

fn low_spectrum(m: &EvaluatedOperator, count: usize, with_vectors: bool, config: &EigenConfig) -> Result<LowSpectrum> {
    if m.dimension() <= config.dense_limit {
        Ok(eigen::lowest_dense(&m.to_dense(), count, with_vectors))
    } else {
        eigen::lowest_lanczos(m.shadow(), count, config)
    }
}

/// The `count` smallest eigenvalues, ascending.
pub fn spectrum_low(m: &EvaluatedOperator, count: usize) -> Result<Vec<f64>> {
    spectrum_low_with(m, count, &EigenConfig::default())
}

pub fn spectrum_low_with(m: &EvaluatedOperator, count: usize, config: &EigenConfig) -> Result<Vec<f64>> {
    m.require_symmetric()?;
    Ok(low_spectrum(m, count, false, config)?.values)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub dimension: usize,
    pub kernel_dim: usize,
    /// Smallest eigenvalue above the zero cluster; `None` when everything is kernel.
    pub gap: Option<f64>,
    pub zero_tolerance: f64,
    /// `zero_tolerance · max(1, ‖M‖)`.
    pub threshold: f64,
    pub min_eigenvalue: Option<f64>,
    pub lowest: Vec<f64>,
    pub resolved: bool,
}

impl GapReport {
    pub fn require_resolved(&self) -> Result<()> {
        if self.resolved {
            Ok(())
        } else {
            Err(Error::UnresolvedGap { gap: self.gap.unwrap_or(0.0), threshold: self.threshold })
        }
    }

    /// Gap value usable as a heat-semigroup hint (`∞` when there is no nonzero spectrum).
    pub fn gap_hint(&self) -> f64 {
        self.gap.unwrap_or(f64::INFINITY)
    }
}

struct Classified {
    report: GapReport,
    spectrum: LowSpectrum,
}

fn classify(m: &EvaluatedOperator, zero_tolerance: f64, with_vectors: bool, config: &EigenConfig) -> Result<Classified> {
    m.require_symmetric()?;
    let n = m.dimension();
    let threshold = zero_tolerance * m.scale();
    let mut count = if n <= config.dense_limit { n } else { 16.min(n) };
    let spectrum = loop {
        let s = low_spectrum(m, count, with_vectors, config)?;
        if count >= n || s.values.last().is_some_and(|&v| v > threshold) {
            break s;
        }
        count = (2 * count).min(n);
    };
    let values = &spectrum.values;
    if let Some(&min) = values.first() {
        if min < -threshold {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: min, threshold });
        }
    }
    let kernel_dim = values.iter().take_while(|&&v| v <= threshold).count();
    let gap = values.get(kernel_dim).copied();
    let report = GapReport {
        dimension: n,
        kernel_dim,
        gap,
        zero_tolerance,
        threshold,
        min_eigenvalue: values.first().copied(),
        lowest: values.iter().take(10).copied().collect(),
        resolved: gap.is_none_or(|g| g >= 10.0 * threshold),
    };
    Ok(Classified { report, spectrum })
}

/// Kernel dimension and spectral gap of a symmetric PSD operator.
pub fn spectral_gap(m: &EvaluatedOperator, zero_tolerance: f64) -> Result<GapReport> {
    spectral_gap_with(m, zero_tolerance, &EigenConfig::default())
}

pub fn spectral_gap_with(m: &EvaluatedOperator, zero_tolerance: f64, config: &EigenConfig) -> Result<GapReport> {
    Ok(classify(m, zero_tolerance, false, config)?.report)
}

/// Orthogonal projection with its defect norms (Frobenius).
#[derive(Clone, Debug)]
pub struct ProjectionMatrix {
    entries: DMatrix<f64>,
    idempotency_defect: f64,
    self_adjointness_defect: f64,
}

impl ProjectionMatrix {
    pub fn new(entries: DMatrix<f64>, tolerance: f64) -> Result<Self> {
        let idempotency_defect = (&entries * &entries - &entries).norm();
        let self_adjointness_defect = (&entries - entries.transpose()).norm();
        let defect = idempotency_defect.max(self_adjointness_defect);
        if defect.is_nan() || defect > tolerance {
            return Err(Error::ProjectionDefect { defect, tolerance });
        }
        Ok(Self { entries, idempotency_defect, self_adjointness_defect })
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn idempotency_defect(&self) -> f64 {
        self.idempotency_defect
    }

    pub fn self_adjointness_defect(&self) -> f64 {
        self.self_adjointness_defect
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn distance(&self, other: &ProjectionMatrix) -> f64 {
        (&self.entries - &other.entries).norm()
    }

    /// `‖M P‖` for the operator the projection belongs to.
    pub fn residual(&self, m: &EvaluatedOperator) -> f64 {
        (m.to_dense() * &self.entries).norm()
    }
}

/// Kernel projection from eigenvectors: `P = Σ v vᵀ` over the zero cluster.
pub fn kernel_projection(m: &EvaluatedOperator, zero_tolerance: f64) -> Result<ProjectionMatrix> {
    kernel_projection_with(m, zero_tolerance, DEFAULT_PROJECTION_TOLERANCE, &EigenConfig::default())
}

pub fn kernel_projection_with(
    m: &EvaluatedOperator,
    zero_tolerance: f64,
    projection_tolerance: f64,
    config: &EigenConfig,
) -> Result<ProjectionMatrix> {
    let c = classify(m, zero_tolerance, true, config)?;
    c.report.require_resolved()?;
    let vectors = c.spectrum.vectors.expect("vectors requested");
    let kernel = vectors.columns(0, c.report.kernel_dim);
    let p = &kernel * kernel.transpose();
    ProjectionMatrix::new(p, projection_tolerance)
}

/// Kernel projection as the limit of the heat semigroup `e^{-tM}`.
///
/// `e^{-t₀M}` is computed once with `t₀ = 1/‖M‖`, then squared repeatedly
/// (doubling `t`) until successive iterates differ by less than `tolerance`
/// and `e^{-t·gap_hint} ≤ tolerance`, which bounds the distance to the exact
/// projection when the spectrum lies in `{0} ∪ [gap_hint, ∞)`.
pub fn heat_projection(m: &EvaluatedOperator, gap_hint: f64, tolerance: f64) -> Result<ProjectionMatrix> {
    heat_projection_with(m, gap_hint, tolerance, DEFAULT_PROJECTION_TOLERANCE)
}

pub fn heat_projection_with(
    m: &EvaluatedOperator,
    gap_hint: f64,
    tolerance: f64,
    projection_tolerance: f64,
) -> Result<ProjectionMatrix> {
    m.require_symmetric()?;
    if gap_hint.is_nan() || gap_hint <= 0.0 {
        return Err(Error::UnresolvedGap { gap: gap_hint, threshold: 0.0 });
    }
    let n = m.dimension();
    let norm = m.shadow().norm_inf();
    if norm == 0.0 {
        return ProjectionMatrix::new(DMatrix::identity(n, n), projection_tolerance);
    }
    let dense = m.to_dense();
    let mut t = 1.0 / norm;
    let mut e = expm::expm(&(-t * &dense));
    let mut converged = false;
    for _ in 0..256 {
        let next = &e * &e;
        t *= 2.0;
        let diff = (&next - &e).norm();
        e = next;
        if diff < tolerance && (-t * gap_hint).exp() <= tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!("heat semigroup did not settle (t = {t:e})")));
    }
    let sym = (&e + e.transpose()) * 0.5;
    ProjectionMatrix::new(sym, projection_tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational;

    fn exact(rows: &[&[i64]]) -> EvaluatedOperator {
        let m = ExactMatrix::from_dense_rows(rows.iter().map(|r| r.iter().map(|&v| rational(v)).collect()).collect())
            .unwrap();
        EvaluatedOperator::from_exact(m, "test")
    }

    #[test]
    fn identity_has_no_kernel() {
        let m = exact(&[&[1, 0], &[0, 1]]);
        let r = spectral_gap(&m, DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!(r.kernel_dim, 0);
        assert!((r.gap.unwrap() - 1.0).abs() < 1e-12);
        let h = heat_projection(&m, 1.0, DEFAULT_HEAT_TOLERANCE).unwrap();
        assert!(h.entries().norm() < 1e-9);
        assert!(kernel_projection(&m, DEFAULT_ZERO_TOLERANCE).unwrap().entries().norm() < 1e-12);
    }

    #[test]
    fn block_diagonal_projection() {
        let m = exact(&[&[0, 0], &[0, 5]]);
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let h = heat_projection(&m, 5.0, DEFAULT_HEAT_TOLERANCE).unwrap();
        assert!((h.entries() - &expected).norm() < 1e-9);
        let k = kernel_projection(&m, DEFAULT_ZERO_TOLERANCE).unwrap();
        assert!((k.entries() - &expected).norm() < 1e-12);
    }

    #[test]
    fn zero_matrix_is_all_kernel() {
        let m = exact(&[&[0, 0], &[0, 0]]);
        assert_eq!(spectrum_low(&m, 2).unwrap(), vec![0.0, 0.0]);
        let r = spectral_gap(&m, DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!((r.kernel_dim, r.gap, r.resolved), (2, None, true));
        let h = heat_projection(&m, r.gap_hint(), DEFAULT_HEAT_TOLERANCE).unwrap();
        assert!((h.trace() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(spectral_gap(&exact(&[&[1, 2], &[0, 1]]), 1e-8).unwrap_err(), Error::NotSymmetric);
        assert!(matches!(spectral_gap(&exact(&[&[-1]]), 1e-8), Err(Error::NotPositiveSemidefinite { .. })));
        assert!(matches!(heat_projection(&exact(&[&[1]]), 0.0, 1e-10), Err(Error::UnresolvedGap { .. })));
    }

    #[test]
    fn tiny_gap_is_unresolved() {
        let m = EvaluatedOperator::from_exact(
            ExactMatrix::from_dense_rows(vec![vec![crate::ring::ratio(1, 1_000_000_000), rational(0)], vec![rational(0), rational(1)]])
                .unwrap(),
            "tiny",
        );
        let r = spectral_gap(&m, 1e-8).unwrap();
        assert_eq!((r.kernel_dim, r.resolved), (1, true));
        let r = spectral_gap(&m, 1e-11).unwrap();
        assert_eq!((r.kernel_dim, r.resolved), (0, true));
        let r = spectral_gap(&m, 2e-10).unwrap();
        assert_eq!((r.kernel_dim, r.resolved), (0, false));
        assert!(kernel_projection(&m, 2e-10).is_err());
    }
}
