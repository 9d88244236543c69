//! Matrices over the free-group ring.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::{default_names, GroupRingElement};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement>,
}

impl GroupRingMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GroupRingElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<GroupRingElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![GroupRingElement::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = GroupRingElement::one();
        }
        m
    }

    pub fn scalar(x: GroupRingElement) -> Self {
        Self { rows: 1, cols: 1, entries: vec![x] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: GroupRingElement) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[GroupRingElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupRingElement::is_zero)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.entries.iter().filter_map(GroupRingElement::max_generator).max()
    }

    pub fn support_len(&self) -> usize {
        self.entries.iter().map(GroupRingElement::support_len).sum()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GroupRingElement::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// Transpose with entrywise involution.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).involution();
            }
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&GroupRingElement, &GroupRingElement) -> GroupRingElement) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x.scale(c)).collect() }
    }

    /// Multiplies every entry on the right by `x`.
    pub fn mul_element_right(&self, x: &GroupRingElement) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * x).collect() }
    }

    /// `Σ_i trace_e(a_ii)`.
    pub fn trace(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("trace of a {}x{} matrix", self.rows, self.cols)));
        }
        Ok((0..self.rows).fold(BigRational::zero(), |acc, i| acc + self.get(i, i).trace_e()))
    }

    /// Max over rows and columns of the summed ℓ₁ norms of the entries. By the
    /// Schur test this bounds the operator norm under every unitary representation.
    pub fn l1_bound(&self) -> BigRational {
        let norms: Vec<BigRational> = self.entries.iter().map(GroupRingElement::l1_norm).collect();
        let row_max = (0..self.rows)
            .map(|i| (0..self.cols).fold(BigRational::zero(), |acc, j| acc + &norms[i * self.cols + j]))
            .max();
        let col_max = (0..self.cols)
            .map(|j| (0..self.rows).fold(BigRational::zero(), |acc, i| acc + &norms[i * self.cols + j]))
            .max();
        row_max.into_iter().chain(col_max).max().unwrap_or_else(BigRational::zero)
    }

    /// Rows of textual entries, the interchange form used in experiment files.
    pub fn to_text_rows(&self, names: &[String]) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_text(names)).collect()).collect()
    }

    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>], names: &[String]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| GroupRingElement::parse(s.as_ref(), names)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }
}

impl fmt::Debug for GroupRingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.max_generator().map_or(0, |g| g + 1));
        f.debug_list().entries(self.to_text_rows(&names)).finish()
    }
}
