use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::QuotientChain;
use crate::error::{Error, Result};
use crate::kazhdan::complex::CochainComplex;
use crate::kazhdan::laplacian::build_laplacian;
use crate::kazhdan::Tolerances;
use crate::representation::Representation;
use crate::spectral::{evaluate, spectral_gap, GapReport};

/// `βⁿ(N) = dim ker λ(Δₙ)` for the quotient representation `λ` of `G/N`.
pub fn betti_finite_quotient(c: &CochainComplex, n: usize, rep: &Representation, tol: &Tolerances) -> Result<usize> {
    Ok(betti_with_gap(c, n, rep, tol)?.kernel_dim)
}

fn betti_with_gap(c: &CochainComplex, n: usize, rep: &Representation, tol: &Tolerances) -> Result<GapReport> {
    let bundle = build_laplacian(c, n)?;
    let op = evaluate(&bundle.full, rep, format!("Delta_{n}"))?;
    let report = spectral_gap(&op, tol.zero)?;
    report.require_resolved()?;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BettiRow {
    /// 1-based position in the chain.
    pub quotient: usize,
    pub index: usize,
    pub degree: usize,
    pub kernel_dim: usize,
    pub gap: Option<f64>,
    /// `βⁿ(Nᵢ) / [G : Nᵢ]`, exact.
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: BigRational,
}

pub(crate) fn ser_ratio<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_opt_ratio<S: serde::Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}

/// Kernel dimensions of `λᵢ(Δₙ)` for every member of the chain, in order.
pub fn betti_over_chain(c: &CochainComplex, n: usize, chain: &QuotientChain, tol: &Tolerances) -> Result<Vec<BettiRow>> {
    chain
        .members
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let report = betti_with_gap(c, n, &m.representation, tol)?;
            Ok(BettiRow {
                quotient: i + 1,
                index: m.index(),
                degree: n,
                kernel_dim: report.kernel_dim,
                gap: report.gap,
                ratio: BigRational::new(BigInt::from(report.kernel_dim), BigInt::from(m.index())),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Constant,
    NonIncreasing,
    NonDecreasing,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LuckReport {
    pub degree: usize,
    pub rows: Vec<BettiRow>,
    /// `|rₖ − rₖ₋₁|` over the last two ratios.
    pub cauchy_tail: Option<f64>,
    pub monotonicity: Monotonicity,
    /// Limit of the fit `r = L + C/index` through the last two points.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub extrapolated: Option<BigRational>,
}

pub fn luck_approximation(c: &CochainComplex, n: usize, chain: &QuotientChain, tol: &Tolerances) -> Result<LuckReport> {
    let rows = betti_over_chain(c, n, chain, tol)?;
    let ratios: Vec<&BigRational> = rows.iter().map(|r| &r.ratio).collect();
    let cauchy_tail = match ratios.as_slice() {
        [.., a, b] => Some((*b - *a).abs().to_f64().unwrap_or(f64::NAN)),
        _ => None,
    };
    let (mut up, mut down) = (false, false);
    for w in ratios.windows(2) {
        up |= w[1] > w[0];
        down |= w[1] < w[0];
    }
    let monotonicity = match (up, down) {
        (false, false) => Monotonicity::Constant,
        (false, true) => Monotonicity::NonIncreasing,
        (true, false) => Monotonicity::NonDecreasing,
        (true, true) => Monotonicity::Mixed,
    };
    let extrapolated = match rows.as_slice() {
        [.., a, b] if a.index != b.index => {
            let ia = BigRational::from_integer(a.index.into());
            let ib = BigRational::from_integer(b.index.into());
            Some((&ib * &b.ratio - &ia * &a.ratio) / (&ib - &ia))
        }
        _ => None,
    };
    Ok(LuckReport { degree: n, rows, cauchy_tail, monotonicity, extrapolated })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerRow {
    pub quotient: usize,
    pub index: usize,
    /// `βⁿ(Nᵢ)` for `n = 0..=top`.
    pub kernel_dims: Vec<usize>,
    pub alternating_sum: i64,
    /// `[G : Nᵢ]·χ(G)`.
    pub expected: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerReport {
    pub euler_characteristic: i64,
    pub rows: Vec<EulerRow>,
    /// `Σ (−1)ⁿ βⁿ(Nᵢ)/[G : Nᵢ]` for the last quotient, the trace of the Euler class.
    #[serde(serialize_with = "ser_ratio")]
    pub class_trace: BigRational,
    pub consistent: bool,
}

/// Alternating sum of Kazhdan-projection traces over all degrees, checked
/// against `[G : N]·χ(G)` on each quotient. Needs a complete complex.
pub fn euler_class_trace(c: &CochainComplex, chain: &QuotientChain, tol: &Tolerances) -> Result<EulerReport> {
    if !c.is_complete() {
        return Err(Error::IncompleteComplex);
    }
    let chi = c.euler_characteristic();
    let mut per_degree = Vec::new();
    for n in 0..=c.top_degree() {
        per_degree.push(betti_over_chain(c, n, chain, tol)?);
    }
    let rows: Vec<EulerRow> = chain
        .members
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let kernel_dims: Vec<usize> = per_degree.iter().map(|d| d[i].kernel_dim).collect();
            let alternating_sum = kernel_dims
                .iter()
                .enumerate()
                .map(|(n, &k)| if n % 2 == 0 { k as i64 } else { -(k as i64) })
                .sum();
            EulerRow { quotient: i + 1, index: m.index(), kernel_dims, alternating_sum, expected: m.index() as i64 * chi }
        })
        .collect();
    let consistent = rows.iter().all(|r| r.alternating_sum == r.expected);
    let last = rows.last().expect("chain is nonempty");
    let class_trace = BigRational::new(last.alternating_sum.into(), (last.index as i64).into());
    Ok(EulerReport { euler_characteristic: chi, rows, class_trace, consistent })
}

/// Whether `q` lies in `ℤ[1/|H| : H ∈ orders]`, the ring generated by the
/// inverses of the orders of finite subgroups.
pub fn lambda_ring_membership(q: &BigRational, orders: &[u64]) -> bool {
    let mut den = q.denom().abs();
    for &o in orders {
        let o = BigInt::from(o);
        if o.is_zero() {
            continue;
        }
        loop {
            let g = den.gcd(&o);
            if g.is_one() {
                break;
            }
            den /= g;
        }
    }
    den.is_one()
}
