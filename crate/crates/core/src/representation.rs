//! Finite-dimensional orthogonal representations of a presented group.

use num_rational::BigRational;
use num_traits::One;

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::matrix::GroupRingMatrix;
use crate::ring::GroupRingElement;
use crate::word::{generator_of, Word};

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorImage {
    /// `c ↦ c·g`; the matrix has a 1 at `(c, c·g)`.
    Permutation { forward: Vec<usize>, inverse: Vec<usize> },
    Orthogonal { matrix: ExactMatrix, transpose: ExactMatrix },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    label: String,
    dimension: usize,
    images: Vec<GeneratorImage>,
}

impl Representation {
    /// Quasi-regular permutation representation on the cosets of a table.
    pub fn from_coset_table(table: &CosetTable, label: impl Into<String>) -> Self {
        let inverses = table.inverse_actions();
        let images = (0..table.generator_count())
            .map(|g| GeneratorImage::Permutation { forward: table.action(g).to_vec(), inverse: inverses[g].clone() })
            .collect();
        Self { label: label.into(), dimension: table.coset_count(), images }
    }

    /// The trivial one-dimensional representation.
    pub fn trivial(generator_count: usize) -> Self {
        let images = (0..generator_count)
            .map(|_| GeneratorImage::Permutation { forward: vec![0], inverse: vec![0] })
            .collect();
        Self { label: "trivial".into(), dimension: 1, images }
    }

    /// Rational orthogonal images, checked exactly (`U·Uᵀ = I`).
    pub fn orthogonal(images: Vec<ExactMatrix>, label: impl Into<String>) -> Result<Self> {
        let dimension = images.first().map_or(1, ExactMatrix::rows);
        let identity = ExactMatrix::identity(dimension);
        let mut out = Vec::with_capacity(images.len());
        for m in images {
            if m.rows() != dimension || m.cols() != dimension {
                return Err(Error::DimensionMismatch("generator images differ in size".into()));
            }
            let t = m.transpose();
            if m.mul(&t)? != identity {
                return Err(Error::InvalidInput("generator image is not orthogonal".into()));
            }
            out.push(GeneratorImage::Orthogonal { matrix: m, transpose: t });
        }
        Ok(Self { label: label.into(), dimension, images: out })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generator_count(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[GeneratorImage] {
        &self.images
    }

    pub fn is_permutation(&self) -> bool {
        self.images.iter().all(|i| matches!(i, GeneratorImage::Permutation { .. }))
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.images.len() => {
                Err(Error::UnknownGenerator { index: g as i64 + 1, count: self.images.len() })
            }
            _ => Ok(()),
        }
    }

    /// Row `c` of a permutation image has its 1 in column `permute(c, w)`.
    fn permute(&self, mut c: usize, w: &Word) -> usize {
        for &l in w.letters() {
            match &self.images[generator_of(l)] {
                GeneratorImage::Permutation { forward, inverse } => {
                    c = if l > 0 { forward[c] } else { inverse[c] };
                }
                GeneratorImage::Orthogonal { .. } => unreachable!("permutation path"),
            }
        }
        c
    }

    pub fn word_image(&self, w: &Word) -> Result<ExactMatrix> {
        self.check_word(w)?;
        if self.is_permutation() {
            let one = BigRational::one();
            return Ok(ExactMatrix::from_triplets(
                self.dimension,
                self.dimension,
                (0..self.dimension).map(|c| (c, self.permute(c, w), one.clone())),
            ));
        }
        let mut m = ExactMatrix::identity(self.dimension);
        for &l in w.letters() {
            let factor = match &self.images[generator_of(l)] {
                GeneratorImage::Orthogonal { matrix, transpose } => {
                    if l > 0 {
                        matrix.clone()
                    } else {
                        transpose.clone()
                    }
                }
                GeneratorImage::Permutation { forward, inverse } => {
                    let perm = if l > 0 { forward } else { inverse };
                    let one = BigRational::one();
                    ExactMatrix::from_triplets(
                        self.dimension,
                        self.dimension,
                        perm.iter().enumerate().map(|(c, &d)| (c, d, one.clone())),
                    )
                }
            };
            m = m.mul(&factor)?;
        }
        Ok(m)
    }

    /// `π(x)` for a group-ring element.
    pub fn evaluate_element(&self, x: &GroupRingElement) -> Result<ExactMatrix> {
        let m = GroupRingMatrix::scalar(x.clone());
        self.evaluate(&m)
    }

    /// Entrywise evaluation: block `(i, j)` is `Σ_w coeff·π(w)`.
    pub fn evaluate(&self, a: &GroupRingMatrix) -> Result<ExactMatrix> {
        if let Some(g) = a.max_generator() {
            if g >= self.images.len() {
                return Err(Error::UnknownGenerator { index: g as i64 + 1, count: self.images.len() });
            }
        }
        let dim = self.dimension;
        let mut triplets = Vec::new();
        if self.is_permutation() {
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    for (w, coef) in a.get(i, j).terms() {
                        for c in 0..dim {
                            triplets.push((i * dim + c, j * dim + self.permute(c, w), coef.clone()));
                        }
                    }
                }
            }
        } else {
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    for (w, coef) in a.get(i, j).terms() {
                        let img = self.word_image(w)?;
                        for (r, c, v) in img.triplets() {
                            triplets.push((i * dim + r, j * dim + c, v * coef));
                        }
                    }
                }
            }
        }
        Ok(ExactMatrix::from_triplets(a.rows() * dim, a.cols() * dim, triplets))
    }

    /// Every relator must map to the identity, exactly.
    pub fn check_relators(&self, relators: &[Word]) -> Result<()> {
        let identity = ExactMatrix::identity(self.dimension);
        for r in relators {
            if self.word_image(r)? != identity {
                return Err(Error::InvalidInput(format!(
                    "relator of length {} is not trivial under `{}`",
                    r.len(),
                    self.label
                )));
            }
        }
        Ok(())
    }
}
