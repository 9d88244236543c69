//! Sparse matrices with exact rational entries.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Row-major sparse matrix; each row holds `(column, value)` pairs sorted by
/// column with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigRational)>>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let one = BigRational::from_integer(1.into());
        Self { rows: n, cols: n, data: (0..n).map(|i| vec![(i, one.clone())]).collect() }
    }

    /// Sums duplicate `(row, col)` contributions.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, BigRational)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet ({i},{j}) out of bounds");
            *acc[i].entry(j).or_insert_with(BigRational::zero) += v;
        }
        let data = acc.into_iter().map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        Self { rows, cols, data }
    }

    pub fn from_dense_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let triplets = rows
            .into_iter()
            .enumerate()
            .flat_map(|(i, row)| row.into_iter().enumerate().map(move |(j, v)| (i, j, v)));
        Ok(Self::from_triplets(r, c, triplets))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, BigRational)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        *acc.entry(*j).or_insert_with(BigRational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(Self { rows: self.rows, cols: other.cols, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum shapes differ".into()));
        }
        let triplets = self
            .triplets()
            .chain(other.triplets())
            .map(|(i, j, v)| (i, j, v.clone()));
        Ok(Self::from_triplets(self.rows, self.cols, triplets))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|row| row.iter().map(|(j, v)| (*j, v * c)).collect()).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.data.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).fold(BigRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn to_dense_f64(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v.to_f64().unwrap_or(f64::NAN);
        }
        m
    }

    /// Rank over the prime field `F_p` (denominators must be invertible mod `p`).
    /// For all but finitely many primes this equals the rank over `ℚ`, and it
    /// never exceeds it.
    pub fn rank_mod_p(&self, p: u64) -> Option<usize> {
        let pb = BigInt::from(p);
        let reduce = |v: &BigRational| -> Option<u64> {
            let n = v.numer().mod_floor(&pb).to_u64()?;
            let d = v.denom().mod_floor(&pb).to_u64()?;
            if d == 0 {
                return None;
            }
            Some(mul_mod(n, inv_mod(d, p), p))
        };
        let mut dense = vec![vec![0u64; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            dense[i][j] = reduce(v)?;
        }
        Some(rank_mod(&mut dense, self.cols, p))
    }
}

/// Largest prime below 2^61.
pub const RANK_PRIME: u64 = 2_305_843_009_213_693_951;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn rank_mod(m: &mut [Vec<u64>], cols: usize, p: u64) -> usize {
    let rows = m.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, pivot);
        let inv = inv_mod(m[rank][c], p);
        for r in rank + 1..rows {
            if m[r][c] == 0 {
                continue;
            }
            let f = mul_mod(m[r][c], inv, p);
            for k in c..cols {
                let sub = mul_mod(f, m[rank][k], p);
                m[r][k] = (m[r][k] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
