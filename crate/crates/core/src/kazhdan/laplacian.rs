use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::kazhdan::complex::CochainComplex;
use crate::matrix::GroupRingMatrix;

/// `Δ₀ = 2·d₀*d₀ = 2(#S − Σ_{s∈S} s)` for the symmetric set `S`; higher
/// degrees carry no extra weight. Kernels do not depend on the weight.
pub const DEGREE_ZERO_WEIGHT: i64 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianBundle {
    pub degree: usize,
    /// `Δₙ = Δₙ⁺ + Δₙ⁻`
    pub full: GroupRingMatrix,
    /// `Δₙ⁺ = dₙ*dₙ`
    pub plus: GroupRingMatrix,
    /// `Δₙ⁻ = dₙ₋₁dₙ₋₁*`
    pub minus: GroupRingMatrix,
}

pub fn build_laplacian(c: &CochainComplex, n: usize) -> Result<LaplacianBundle> {
    let k = c.cell_count(n).ok_or(Error::DegreeOutOfRange { degree: n, top: c.top_degree() })?;
    let plus = match c.differential(n) {
        Some(d) => {
            let gram = d.adjoint().mul(d)?;
            if n == 0 {
                gram.scale(&BigRational::from_integer(DEGREE_ZERO_WEIGHT.into()))
            } else {
                gram
            }
        }
        None => GroupRingMatrix::zeros(k, k),
    };
    let minus = match n.checked_sub(1).and_then(|m| c.differential(m)) {
        Some(d) => d.mul(&d.adjoint())?,
        None => GroupRingMatrix::zeros(k, k),
    };
    let full = plus.add(&minus)?;
    Ok(LaplacianBundle { degree: n, full, plus, minus })
}
