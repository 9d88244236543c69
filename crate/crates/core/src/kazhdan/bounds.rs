use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::coset::{todd_coxeter, CosetTable, DEFAULT_MAX_COSETS};
use crate::error::{Error, Result};
use crate::kazhdan::betti::ser_ratio;
use crate::kazhdan::complex::CochainComplex;
use crate::kazhdan::laplacian::build_laplacian;
use crate::matrix::GroupRingMatrix;
use crate::word::Word;

pub const DEFAULT_TERM_BUDGET: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct UpperBoundConfig {
    /// Assumed spectral gap `ε` of `Δₙ`, used only for the lower bounds.
    pub gap_hint: f64,
    /// Norm bound `R ≥ ‖Δₙ‖`; the ℓ₁ bound of the matrix when absent.
    pub norm_bound: Option<BigRational>,
    pub max_power: usize,
    /// Largest total support of an intermediate power before giving up.
    pub term_budget: usize,
    pub max_cosets: usize,
}

impl UpperBoundConfig {
    pub fn new(gap_hint: f64, max_power: usize) -> Self {
        Self { gap_hint, norm_bound: None, max_power, term_budget: DEFAULT_TERM_BUDGET, max_cosets: DEFAULT_MAX_COSETS }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TraceModel {
    /// `G` free: the trace is the identity coefficient in the free group ring.
    Free,
    /// `G` finite of the given order, multiplied through its coset table.
    Finite { order: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperBoundTerm {
    pub power: usize,
    /// `u_M = τ_k((I − Δ/R)^M)`, exact.
    #[serde(serialize_with = "ser_ratio")]
    pub upper: BigRational,
    pub upper_f64: f64,
    /// `u_M − k(1 − ε/R)^M`.
    pub lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperBoundSequence {
    pub degree: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub norm_bound: BigRational,
    pub gap_hint: f64,
    pub trace_model: TraceModel,
    pub terms: Vec<UpperBoundTerm>,
    /// Powers beyond the last term were not computed.
    pub cutoff: bool,
    pub cutoff_reason: Option<String>,
}

/// Monotone upper bounds `u_M ≥ βⁿ₍₂₎(G)` for `M = 1..=max_power`, with the
/// matching lower bounds under the assumed gap.
///
/// The trace is available when `G` is free (no relators) or finite (coset
/// enumeration over the trivial subgroup terminates).
pub fn l2_betti_upper_bounds(c: &CochainComplex, n: usize, config: &UpperBoundConfig) -> Result<UpperBoundSequence> {
    let bundle = build_laplacian(c, n)?;
    let delta = &bundle.full;
    let r = match &config.norm_bound {
        Some(r) => r.clone(),
        None => delta.l1_bound(),
    };
    if !r.is_positive() {
        return Err(Error::InvalidInput(format!("norm bound must be positive, got {r}")));
    }
    let eps = config.gap_hint;
    let r_f = r.to_f64().unwrap_or(f64::INFINITY);
    if !(eps > 0.0 && eps <= r_f) {
        return Err(Error::InvalidInput(format!("gap hint {eps} must lie in (0, {r_f}]")));
    }
    let p = c.presentation();
    let (trace_model, powers) = if p.relators().is_empty() {
        let z = integer_shift(delta, &r, |w| w.clone())?;
        (TraceModel::Free, trace_powers(&z.matrix, config, &Word::identity(), |u, v| u.mul(v))?)
    } else {
        let table = todd_coxeter(p, &[], config.max_cosets).map_err(|e| match e {
            Error::CosetOverflow { limit } => {
                Error::TraceUnavailable(format!("group is not free and coset enumeration exceeded {limit} cosets"))
            }
            e => e,
        })?;
        let group = FiniteGroup::new(&table);
        let z = integer_shift(delta, &r, |w| table.act(0, w))?;
        let powers = trace_powers(&z.matrix, config, &0usize, |&a, &b| group.mul(a, b))?;
        (TraceModel::Finite { order: table.coset_count() }, powers)
    };
    let scale = integer_scale(delta, &r)?;
    let k = delta.rows() as f64;
    let decay = 1.0 - eps / r_f;
    let terms = powers
        .sums
        .into_iter()
        .enumerate()
        .map(|(i, num)| {
            let power = i + 1;
            let upper = BigRational::new(num, num_traits::pow(scale.clone(), power));
            let upper_f64 = upper.to_f64().unwrap_or(f64::NAN);
            UpperBoundTerm { power, upper, upper_f64, lower: upper_f64 - k * decay.powi(power as i32) }
        })
        .collect();
    Ok(UpperBoundSequence {
        degree: n,
        norm_bound: r,
        gap_hint: eps,
        trace_model,
        terms,
        cutoff: powers.cutoff.is_some(),
        cutoff_reason: powers.cutoff,
    })
}

type IntElement<E> = FxHashMap<E, i128>;

struct IntMatrix<E> {
    k: usize,
    entries: Vec<IntElement<E>>,
}

struct Shifted<E> {
    matrix: IntMatrix<E>,
}

/// Common denominator `Q` of `R·I − Δ`; the scaled matrix is `Z = Q(R·I − Δ)`
/// and `(I − Δ/R)^M = Z^M / (QR)^M`.
fn denominator(delta: &GroupRingMatrix, r: &BigRational) -> BigInt {
    let mut q = r.denom().clone();
    for x in delta.entries() {
        for (_, c) in x.terms() {
            q = q.lcm(c.denom());
        }
    }
    q
}

fn integer_scale(delta: &GroupRingMatrix, r: &BigRational) -> Result<BigInt> {
    let s = r * BigRational::from_integer(denominator(delta, r));
    if !s.is_integer() {
        return Err(Error::InvalidInput("norm bound scaling is not integral".into()));
    }
    Ok(s.to_integer())
}

fn integer_shift<E: Hash + Eq + Clone>(
    delta: &GroupRingMatrix,
    r: &BigRational,
    embed: impl Fn(&Word) -> E,
) -> Result<Shifted<E>> {
    let q = BigRational::from_integer(denominator(delta, r));
    let k = delta.rows();
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut y = delta.get(i, j).scale(&-BigRational::one());
            if i == j {
                y.add_term(Word::identity(), r);
            }
            let mut e = IntElement::default();
            for (w, c) in y.terms() {
                let v = (c * &q).to_integer().to_i128().ok_or_else(|| {
                    Error::InvalidInput("scaled Laplacian coefficient exceeds 128 bits".into())
                })?;
                *e.entry(embed(w)).or_insert(0) += v;
            }
            e.retain(|_, v| *v != 0);
            entries.push(e);
        }
    }
    Ok(Shifted { matrix: IntMatrix { k, entries } })
}

struct TracePowers {
    /// Numerators of `τ(Z^M)` for `M = 1, 2, ...`, before dividing by `(QR)^M`.
    sums: Vec<BigInt>,
    cutoff: Option<String>,
}

fn pairing<E: Hash + Eq>(x: &IntMatrix<E>, y: &IntMatrix<E>) -> BigInt {
    let mut total = BigInt::zero();
    for (a, b) in x.entries.iter().zip(&y.entries) {
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        for (e, u) in small {
            if let Some(v) = large.get(e) {
                total += BigInt::from(*u) * BigInt::from(*v);
            }
        }
    }
    total
}

/// `P_j = Z^j` by right multiplication, reading `u_{2j} = Σ⟨P_j, P_j⟩` and
/// `u_{2j+1} = Σ⟨P_{j+1}, P_j⟩` off entrywise pairings (`Z` is self-adjoint).
fn trace_powers<E: Hash + Eq + Clone>(
    z: &IntMatrix<E>,
    config: &UpperBoundConfig,
    identity: &E,
    mul: impl Fn(&E, &E) -> E,
) -> Result<TracePowers> {
    let k = z.k;
    let mut current = IntMatrix {
        k,
        entries: (0..k * k)
            .map(|idx| {
                let mut e = IntElement::default();
                if idx / k == idx % k {
                    e.insert(identity.clone(), 1);
                }
                e
            })
            .collect(),
    };
    let mut sums = Vec::new();
    while sums.len() < config.max_power {
        let next = match multiply(&current, z, &mul, config.term_budget) {
            Ok(m) => m,
            Err(reason) => return Ok(TracePowers { sums, cutoff: Some(reason) }),
        };
        // u_{2j+1}
        sums.push(pairing(&next, &current));
        current = next;
        if sums.len() < config.max_power {
            // u_{2j}
            sums.push(pairing(&current, &current));
        }
    }
    Ok(TracePowers { sums, cutoff: None })
}

fn multiply<E: Hash + Eq + Clone>(
    a: &IntMatrix<E>,
    b: &IntMatrix<E>,
    mul: &impl Fn(&E, &E) -> E,
    budget: usize,
) -> std::result::Result<IntMatrix<E>, String> {
    let k = a.k;
    let mut entries = Vec::with_capacity(k * k);
    let mut support = 0usize;
    for i in 0..k {
        for l in 0..k {
            let mut acc = IntElement::default();
            for m in 0..k {
                let (x, y) = (&a.entries[i * k + m], &b.entries[m * k + l]);
                for (u, cu) in x {
                    for (v, cv) in y {
                        let p = cu.checked_mul(*cv).ok_or("coefficient overflow")?;
                        let slot = acc.entry(mul(u, v)).or_insert(0);
                        *slot = slot.checked_add(p).ok_or("coefficient overflow")?;
                    }
                }
            }
            acc.retain(|_, c| *c != 0);
            support += acc.len();
            if support > budget {
                return Err(format!("term budget {budget} exceeded"));
            }
            entries.push(acc);
        }
    }
    Ok(IntMatrix { k, entries })
}

/// Multiplication in a finite group from its regular coset table.
struct FiniteGroup<'a> {
    table: &'a CosetTable,
    representatives: Vec<Word>,
}

impl<'a> FiniteGroup<'a> {
    fn new(table: &'a CosetTable) -> Self {
        let n = table.coset_count();
        let mut representatives: Vec<Option<Word>> = vec![None; n];
        representatives[0] = Some(Word::identity());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let w = representatives[c].clone().expect("visited");
            for g in 0..table.generator_count() {
                for s in [1i64, -1] {
                    let step = Word::generator(g).pow(s);
                    let d = table.act(c, &step);
                    if representatives[d].is_none() {
                        representatives[d] = Some(w.mul(&step));
                        queue.push_back(d);
                    }
                }
            }
        }
        Self { table, representatives: representatives.into_iter().map(|w| w.expect("connected")).collect() }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table.act(a, &self.representatives[b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;
    use crate::ring::ratio;

    #[test]
    fn cyclic_group_degree_zero_closed_form() {
        let c = CochainComplex::from_presentation(&Presentation::cyclic(5)).unwrap();
        let s = l2_betti_upper_bounds(&c, 0, &UpperBoundConfig::new(1.0, 6)).unwrap();
        assert_eq!(s.norm_bound, ratio(8, 1));
        assert_eq!(s.trace_model, TraceModel::Finite { order: 5 });
        for t in &s.terms {
            // (1/5) Σ_j (1 − (4 − 4cos(2πj/5))/8)^M
            let oracle: f64 = (0..5)
                .map(|j| {
                    let lambda = 4.0 - 4.0 * (2.0 * std::f64::consts::PI * j as f64 / 5.0).cos();
                    (1.0 - lambda / 8.0).powi(t.power as i32)
                })
                .sum::<f64>()
                / 5.0;
            assert!((t.upper_f64 - oracle).abs() < 1e-12, "{} {}", t.upper_f64, oracle);
        }
    }

    #[test]
    fn free_group_degree_zero_first_terms() {
        let c = CochainComplex::from_presentation(&Presentation::free_group(2)).unwrap();
        let s = l2_betti_upper_bounds(&c, 0, &UpperBoundConfig::new(0.5, 2)).unwrap();
        // I − Δ₀/16 = 1/2 + Σs/8
        assert_eq!(s.norm_bound, ratio(16, 1));
        assert_eq!(s.terms[0].upper, ratio(1, 2));
        assert_eq!(s.terms[1].upper, ratio(5, 16));
    }

    #[test]
    fn budget_cutoff_is_reported() {
        let c = CochainComplex::from_presentation(&Presentation::free_group(2)).unwrap();
        let mut config = UpperBoundConfig::new(0.5, 12);
        config.term_budget = 50;
        let s = l2_betti_upper_bounds(&c, 0, &config).unwrap();
        assert!(s.cutoff);
        assert!(s.terms.len() < 12);
    }

    #[test]
    fn rejects_bad_gap_hint() {
        let c = CochainComplex::from_presentation(&Presentation::free_group(2)).unwrap();
        assert!(l2_betti_upper_bounds(&c, 0, &UpperBoundConfig::new(0.0, 3)).is_err());
        assert!(l2_betti_upper_bounds(&c, 0, &UpperBoundConfig::new(100.0, 3)).is_err());
    }
}
