//! JSON experiment files and their translation into core objects.

use std::path::Path;

use kazlab_core::kazhdan::{build_complex, BetaProvenance, CochainComplex, LaplacianBundle, ProjectionKind, Tolerances};
use kazlab_core::ring::{parse_rational, parse_word};
use kazlab_core::sos::{Certificate, IdealWitness};
use kazlab_core::{abelian_quotient_relators, quotient_chain, GroupRingMatrix, Presentation, QuotientChain, Word};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub presentation: PresentationSpec,
    #[serde(default)]
    pub chain: ChainSpec,
    #[serde(default)]
    pub degrees: Vec<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, alias = "beta_ref")]
    pub beta_refs: OneOrMany<BetaRefSpec>,
    /// `d₂, d₃, ...` as rows of group-ring strings.
    #[serde(default)]
    pub higher_codifferentials: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub complete: Option<bool>,
    #[serde(default)]
    pub finite_subgroup_orders: Vec<u64>,
    #[serde(default)]
    pub upper_bounds: Option<UpperBoundSpec>,
    #[serde(default)]
    pub certificates: Vec<CertificateSpec>,
    #[serde(default)]
    pub ghost_kind: Option<ProjectionKind>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ChainSpec {
    Explicit(Vec<Vec<String>>),
    /// `(ℤ/m)^rank` quotients for each listed `m`.
    Abelian { abelian: Vec<i64> },
}

impl Default for ChainSpec {
    fn default() -> Self {
        ChainSpec::Explicit(Vec::new())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> Default for OneOrMany<T> {
    fn default() -> Self {
        OneOrMany::Many(Vec::new())
    }
}

impl<T> OneOrMany<T> {
    pub fn as_slice(&self) -> &[T] {
        match self {
            OneOrMany::One(x) => std::slice::from_ref(x),
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaRefSpec {
    /// Applies to every degree when absent.
    #[serde(default)]
    pub degree: Option<usize>,
    pub value: String,
    pub provenance: BetaProvenance,
    #[serde(default)]
    pub citation: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpperBoundSpec {
    pub degree: usize,
    /// Taken from the smallest chain gap when absent.
    #[serde(default)]
    pub gap_hint: Option<f64>,
    #[serde(default)]
    pub norm_bound: Option<String>,
    pub max_power: usize,
    #[serde(default)]
    pub term_budget: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    /// `laplacian:n`, `laplacian+:n` or `laplacian-:n`.
    Named(String),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    pub left: Vec<Vec<String>>,
    pub relator: usize,
    pub right: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSpec {
    pub label: String,
    pub target: TargetSpec,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub epsilon: Option<String>,
    /// `[c₂, c₁]`; `[1, −ε]` when absent.
    #[serde(default)]
    pub polynomial_form: Option<[String; 2]>,
    #[serde(default)]
    pub squares: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub ideal_witnesses: Vec<WitnessSpec>,
}

/// A parsed spec with its presentation, complex and quotient chain built.
pub struct Loaded {
    pub spec: ExperimentSpec,
    pub presentation: Presentation,
    pub complex: CochainComplex,
    pub chain: Option<QuotientChain>,
    pub tolerances: Tolerances,
}

pub struct LoadOptions {
    pub zero_tolerance: Option<f64>,
    pub max_cosets: usize,
    pub ball_radius: usize,
}

pub fn read_spec(path: &Path) -> Result<ExperimentSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load(spec: ExperimentSpec, options: &LoadOptions) -> Result<Loaded, CliError> {
    let presentation = Presentation::parse(&spec.presentation.generators, &spec.presentation.relators)?;
    let names = presentation.generator_names().to_vec();
    let chain_words: Vec<Vec<Word>> = match &spec.chain {
        ChainSpec::Explicit(sets) => sets
            .iter()
            .map(|set| set.iter().map(|w| parse_word(w, &names)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?,
        ChainSpec::Abelian { abelian } => {
            abelian.iter().map(|&m| abelian_quotient_relators(presentation.generator_count(), m)).collect()
        }
    };
    let chain = if chain_words.is_empty() {
        None
    } else {
        Some(quotient_chain(&presentation, &chain_words, options.ball_radius, options.max_cosets)?)
    };
    let higher = spec
        .higher_codifferentials
        .iter()
        .map(|rows| GroupRingMatrix::parse_rows(rows, &names))
        .collect::<Result<Vec<_>, _>>()?;
    let reps = chain.as_ref().map(|c| c.representations()).unwrap_or_default();
    let complex = build_complex(&presentation, &higher, &reps, spec.complete)?;
    let mut tolerances = spec.tolerances;
    if let Some(t) = options.zero_tolerance {
        tolerances.zero = t;
    }
    Ok(Loaded { spec, presentation, complex, chain, tolerances })
}

impl Loaded {
    pub fn require_chain(&self) -> Result<&QuotientChain, CliError> {
        self.chain.as_ref().ok_or_else(|| CliError::Input("this command needs a nonempty `chain`".into()))
    }

    /// Requested degrees, or all degrees of the complex when none are listed.
    pub fn degrees(&self) -> Result<Vec<usize>, CliError> {
        let top = self.complex.top_degree();
        if self.spec.degrees.is_empty() {
            return Ok((0..=top).collect());
        }
        for &n in &self.spec.degrees {
            if n > top {
                return Err(kazlab_core::Error::DegreeOutOfRange { degree: n, top }.into());
            }
        }
        Ok(self.spec.degrees.clone())
    }

    pub fn names(&self) -> &[String] {
        self.presentation.generator_names()
    }

    pub fn certificates(&self) -> Result<Vec<Certificate>, CliError> {
        self.spec.certificates.iter().map(|c| self.certificate(c)).collect()
    }

    fn matrix(&self, rows: &[Vec<String>]) -> Result<GroupRingMatrix, CliError> {
        Ok(GroupRingMatrix::parse_rows(rows, self.names())?)
    }

    fn certificate(&self, c: &CertificateSpec) -> Result<Certificate, CliError> {
        let (target, named_degree) = match &c.target {
            TargetSpec::Matrix(rows) => (self.matrix(rows)?, None),
            TargetSpec::Named(name) => {
                let (kind, degree) = name
                    .split_once(':')
                    .and_then(|(k, d)| Some((k, d.trim().parse::<usize>().ok()?)))
                    .ok_or_else(|| CliError::Input(format!("certificate target `{name}` is not `laplacian:n`")))?;
                let bundle: LaplacianBundle = kazlab_core::kazhdan::build_laplacian(&self.complex, degree)?;
                let m = match kind.trim() {
                    "laplacian" => bundle.full,
                    "laplacian+" => bundle.plus,
                    "laplacian-" => bundle.minus,
                    other => return Err(CliError::Input(format!("unknown certificate target kind `{other}`"))),
                };
                (m, Some(degree))
            }
        };
        let epsilon = c.epsilon.as_deref().map(parse_rational).transpose()?;
        let polynomial_form = match (&c.polynomial_form, &epsilon) {
            (Some([c2, c1]), _) => (parse_rational(c2)?, parse_rational(c1)?),
            (None, Some(eps)) => (BigRational::one(), -eps.clone()),
            (None, None) => {
                return Err(CliError::Input(format!("certificate `{}` needs `epsilon` or `polynomial_form`", c.label)))
            }
        };
        if polynomial_form.0.is_zero() && polynomial_form.1.is_zero() {
            return Err(CliError::Input(format!("certificate `{}` has a zero polynomial form", c.label)));
        }
        let squares = c.squares.iter().map(|rows| self.matrix(rows)).collect::<Result<Vec<_>, _>>()?;
        let ideal_witnesses = c
            .ideal_witnesses
            .iter()
            .map(|w| Ok(IdealWitness { left: self.matrix(&w.left)?, relator: w.relator, right: self.matrix(&w.right)? }))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Certificate {
            label: c.label.clone(),
            target,
            degree: c.degree.or(named_degree),
            epsilon,
            polynomial_form,
            squares,
            ideal_witnesses,
        })
    }
}
