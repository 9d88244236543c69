use serde::Serialize;

use crate::error::{Error, Result};
use crate::fox::fox_jacobian;
use crate::matrix::GroupRingMatrix;
use crate::presentation::Presentation;
use crate::representation::Representation;
use crate::ring::GroupRingElement;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexSource {
    /// Degrees 0 and 1 built from the presentation 2-complex.
    Presentation,
    /// Presentation degrees extended by user-supplied higher codifferentials.
    UserSupplied,
}

/// Cochain complex `C⁰ → C¹ → ...` of a finite skeleton of `K(G,1)`, with
/// `d_n` a `k_{n+1} × k_n` matrix over the group ring.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    presentation: Presentation,
    differentials: Vec<GroupRingMatrix>,
    cell_counts: Vec<usize>,
    complete: bool,
    source: ComplexSource,
}

/// `d₀ = [1 − s]` over one generator per inverse pair, `d₁` the Fox Jacobian
/// of the relators, followed by any `higher` codifferentials `d₂, d₃, ...`.
///
/// The chain identity `π(d_{n+1})π(d_n) = 0` is checked exactly under every
/// representation in `reps`. `complete` declares whether the cells form all
/// of `K(G,1)`; by default that is assumed only for presentations known to
/// be aspherical and without higher input.
pub fn build_complex(
    p: &Presentation,
    higher: &[GroupRingMatrix],
    reps: &[&Representation],
    complete: Option<bool>,
) -> Result<CochainComplex> {
    let g = p.generator_count();
    let mut cell_counts = vec![1];
    let mut differentials = Vec::new();
    if g > 0 {
        let d0 = (0..g)
            .map(|i| &GroupRingElement::one() - &GroupRingElement::from_word(Word::generator(i)))
            .collect();
        differentials.push(GroupRingMatrix::new(g, 1, d0)?);
        cell_counts.push(g);
        if !p.relators().is_empty() {
            differentials.push(fox_jacobian(p.relators(), g)?);
            cell_counts.push(p.relators().len());
        }
    }
    for d in higher {
        let degree = differentials.len();
        let expected = *cell_counts.last().expect("k0");
        if d.cols() != expected {
            return Err(Error::DimensionMismatch(format!(
                "d_{degree} must have {expected} columns, got {}",
                d.cols()
            )));
        }
        if let Some(m) = d.max_generator() {
            if m >= g {
                return Err(Error::UnknownGenerator { index: m as i64 + 1, count: g });
            }
        }
        cell_counts.push(d.rows());
        differentials.push(d.clone());
    }
    let complex = CochainComplex {
        presentation: p.clone(),
        differentials,
        cell_counts,
        complete: complete.unwrap_or(higher.is_empty() && p.is_known_aspherical()),
        source: if higher.is_empty() { ComplexSource::Presentation } else { ComplexSource::UserSupplied },
    };
    for rep in reps {
        complex.validate_against(rep)?;
    }
    Ok(complex)
}

impl CochainComplex {
    pub fn from_presentation(p: &Presentation) -> Result<Self> {
        build_complex(p, &[], &[], None)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn source(&self) -> ComplexSource {
        self.source
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn top_degree(&self) -> usize {
        self.cell_counts.len() - 1
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.cell_counts
    }

    pub fn cell_count(&self, n: usize) -> Option<usize> {
        self.cell_counts.get(n).copied()
    }

    /// `d_n`, or `None` where it is the zero map into an empty cochain space.
    pub fn differential(&self, n: usize) -> Option<&GroupRingMatrix> {
        self.differentials.get(n)
    }

    pub fn differentials(&self) -> &[GroupRingMatrix] {
        &self.differentials
    }

    /// `Σ (−1)ⁿ kₙ`.
    pub fn euler_characteristic(&self) -> i64 {
        self.cell_counts.iter().enumerate().map(|(n, &k)| if n % 2 == 0 { k as i64 } else { -(k as i64) }).sum()
    }

    /// Checks that `rep` is a representation of the group and that
    /// `π(d_{n+1})·π(d_n) = 0` exactly for every consecutive pair.
    pub fn validate_against(&self, rep: &Representation) -> Result<()> {
        if rep.generator_count() != self.presentation.generator_count() {
            return Err(Error::DimensionMismatch(format!(
                "representation `{}` has {} generators, presentation has {}",
                rep.label(),
                rep.generator_count(),
                self.presentation.generator_count()
            )));
        }
        rep.check_relators(self.presentation.relators())?;
        for n in 1..self.differentials.len() {
            let prev = rep.evaluate(&self.differentials[n - 1])?;
            let next = rep.evaluate(&self.differentials[n])?;
            if !next.mul(&prev)?.is_zero() {
                return Err(Error::ChainIdentity { degree: n, representation: rep.label().to_string() });
            }
        }
        Ok(())
    }
}
