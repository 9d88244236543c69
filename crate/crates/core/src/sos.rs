//! Exact verification of sum-of-squares spectral-gap certificates.
//!
//! A certificate claims `c₂M² + c₁M = Σ gᵢ*gᵢ + Σ aⱼ(rⱼ − 1)bⱼ` in matrices
//! over the free group ring, where `rⱼ` are relators of the presentation.
//! When it holds, `c₂π(M)² + c₁π(M)` is positive for every unitary
//! representation `π` of the group.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kazhdan::betti::ser_ratio;
use crate::matrix::GroupRingMatrix;
use crate::presentation::Presentation;
use crate::representation::Representation;
use crate::ring::{rational, GroupRingElement};
use crate::spectral::eigen::EigenConfig;
use crate::spectral::{evaluate, spectrum_low_with};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealWitness {
    pub left: GroupRingMatrix,
    /// Index into the presentation's relators.
    pub relator: usize,
    pub right: GroupRingMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub label: String,
    pub target: GroupRingMatrix,
    /// Cochain degree when the target is a Laplacian.
    pub degree: Option<usize>,
    pub epsilon: Option<BigRational>,
    /// `(c₂, c₁)`.
    pub polynomial_form: (BigRational, BigRational),
    pub squares: Vec<GroupRingMatrix>,
    pub ideal_witnesses: Vec<IdealWitness>,
}

impl Certificate {
    /// Certificate shell for `M² − εM`.
    pub fn gap(label: impl Into<String>, target: GroupRingMatrix, epsilon: BigRational) -> Self {
        Self {
            label: label.into(),
            target,
            degree: None,
            polynomial_form: (BigRational::one(), -epsilon.clone()),
            epsilon: Some(epsilon),
            squares: Vec::new(),
            ideal_witnesses: Vec::new(),
        }
    }

    /// `Δ₀ = Σ_s (1 − s)*(1 − s)` over the symmetric generating set, written
    /// as each square over one generator per inverse pair taken twice.
    pub fn degree_zero_sos(p: &Presentation) -> Self {
        let n = p.generator_count();
        let mut sum = GroupRingElement::zero();
        let mut squares = Vec::new();
        for g in 0..n {
            let s = &GroupRingElement::one() - &GroupRingElement::from_word(Word::generator(g));
            sum = &sum + &(&s.involution() * &s);
            squares.push(GroupRingMatrix::scalar(s.clone()));
            squares.push(GroupRingMatrix::scalar(s));
        }
        Self {
            label: "degree-zero-sos".into(),
            target: GroupRingMatrix::scalar(sum.scale(&rational(2))),
            degree: Some(0),
            epsilon: None,
            polynomial_form: (BigRational::zero(), BigRational::one()),
            squares,
            ideal_witnesses: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub verified: bool,
    /// `c₂M² + c₁M − Σ gᵢ*gᵢ − Σ aⱼ(rⱼ − 1)bⱼ`.
    pub residual: GroupRingMatrix,
}

impl Verification {
    pub fn residual_support(&self) -> usize {
        self.residual.support_len()
    }
}

fn check_generators(m: &GroupRingMatrix, p: &Presentation, what: &str) -> Result<()> {
    match m.max_generator() {
        Some(g) if g >= p.generator_count() => {
            Err(Error::InvalidInput(format!("{what} uses generator {} of {}", g + 1, p.generator_count())))
        }
        _ => Ok(()),
    }
}

/// Exact check of the certificate identity; a nonzero residual is a false verdict.
pub fn verify_certificate(p: &Presentation, cert: &Certificate) -> Result<Verification> {
    let m = &cert.target;
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("target is {}×{}", m.rows(), m.cols())));
    }
    if !m.is_self_adjoint() {
        return Err(Error::NotSymmetric);
    }
    check_generators(m, p, "target")?;
    let k = m.rows();
    let (c2, c1) = &cert.polynomial_form;
    let mut residual = m.mul(m)?.scale(c2).add(&m.scale(c1))?;
    for (i, g) in cert.squares.iter().enumerate() {
        check_generators(g, p, "square")?;
        if g.cols() != k {
            return Err(Error::DimensionMismatch(format!("square {i} has {} columns, target has {k}", g.cols())));
        }
        residual = residual.sub(&g.adjoint().mul(g)?)?;
    }
    for (i, w) in cert.ideal_witnesses.iter().enumerate() {
        let r = p.relators().get(w.relator).ok_or_else(|| {
            Error::InvalidInput(format!("witness {i} references relator {} of {}", w.relator, p.relators().len()))
        })?;
        check_generators(&w.left, p, "witness")?;
        check_generators(&w.right, p, "witness")?;
        if w.left.rows() != k || w.right.cols() != k || w.left.cols() != w.right.rows() {
            return Err(Error::DimensionMismatch(format!(
                "witness {i} has shapes {}×{} and {}×{} for a {k}×{k} target",
                w.left.rows(),
                w.left.cols(),
                w.right.rows(),
                w.right.cols()
            )));
        }
        let r_minus_one = &GroupRingElement::from_word(r.clone()) - &GroupRingElement::one();
        residual = residual.sub(&w.left.mul_element_right(&r_minus_one).mul(&w.right)?)?;
    }
    Ok(Verification { verified: residual.is_zero(), residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    /// `σ(π(M)) ⊆ {0} ∪ [ε, ∞)` for every unitary `π`, given `M` positive.
    UniformGap,
    /// `π(M) ≥ 0` for every unitary `π`.
    PsdOnly,
    /// The polynomial form carries no spectral information.
    NoSpectralContent,
}

fn ser_opt_ratio<S: serde::Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => ser_ratio(q, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapClaim {
    pub label: String,
    pub degree: Option<usize>,
    pub kind: ClaimKind,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub epsilon: Option<BigRational>,
    pub scope: String,
}

/// Claim entailed by a verified certificate.
pub fn certificate_gap_claim(cert: &Certificate, verification: &Verification) -> Result<GapClaim> {
    if !verification.verified {
        return Err(Error::UnverifiedCertificate);
    }
    let (c2, c1) = &cert.polynomial_form;
    let (kind, epsilon) = if c2.is_positive() && c1.is_negative() {
        (ClaimKind::UniformGap, Some(-c1 / c2))
    } else if c2.is_zero() && c1.is_positive() {
        (ClaimKind::PsdOnly, None)
    } else {
        (ClaimKind::NoSpectralContent, None)
    };
    Ok(GapClaim {
        label: cert.label.clone(),
        degree: cert.degree,
        kind,
        epsilon,
        scope: "all unitary representations".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SoundnessRow {
    pub representation: String,
    pub min_eigenvalue: f64,
    /// Smallest eigenvalue above the zero cluster.
    pub min_nonzero: Option<f64>,
    pub holds: bool,
}

/// Numerical check of a claim against finite representations: spectra must
/// lie in `{0} ∪ [ε − slack, ∞)` (or `[−slack, ∞)` for a positivity claim).
pub fn soundness_check(
    cert: &Certificate,
    claim: &GapClaim,
    reps: &[&Representation],
    slack: f64,
) -> Result<Vec<SoundnessRow>> {
    let config = EigenConfig::default();
    reps.iter()
        .map(|rep| {
            let op = evaluate(&cert.target, rep, cert.label.clone())?;
            let values = spectrum_low_with(&op, op.dimension(), &config)?;
            let min_eigenvalue = values.first().copied().unwrap_or(0.0);
            let zero = slack * op.scale();
            let min_nonzero = values.iter().copied().find(|v| v.abs() > zero);
            let holds = match claim.kind {
                ClaimKind::UniformGap => {
                    let eps = claim.epsilon.as_ref().and_then(ToPrimitive::to_f64).unwrap_or(f64::NAN);
                    values.iter().all(|&v| v.abs() <= zero || v >= eps - slack)
                }
                ClaimKind::PsdOnly => min_eigenvalue >= -slack,
                ClaimKind::NoSpectralContent => true,
            };
            Ok(SoundnessRow { representation: rep.label().to_string(), min_eigenvalue, min_nonzero, holds })
        })
        .collect()
}
