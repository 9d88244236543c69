//! Low spectrum of real symmetric matrices.
//!
//! Small problems use a dense solver. Large ones use Lanczos with full
//! reorthogonalization, explicit restarts from the lowest Ritz vector and
//! locking of converged pairs; each run works in the orthogonal complement of
//! the locked vectors, so repeated eigenvalues are found one copy at a time.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Compressed sparse rows, `f64` values.
#[derive(Clone, Debug)]
pub struct CsrMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_rows(n: usize, rows: impl IntoIterator<Item = Vec<(usize, f64)>>) -> Self {
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for row in rows {
            for (j, v) in row {
                indices.push(j);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        assert_eq!(indptr.len(), n + 1);
        Self { n, indptr, indices, values }
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let rows = (0..m.nrows()).map(|i| (0..m.ncols()).filter(|&j| m[(i, j)] != 0.0).map(|j| (j, m[(i, j)])).collect());
        Self::from_rows(m.nrows(), rows)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn matvec(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.n, |i, _| {
            (self.indptr[i]..self.indptr[i + 1]).map(|k| self.values[k] * x[self.indices[k]]).sum()
        })
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (self.indptr[i]..self.indptr[i + 1]).map(|k| self.values[k].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                m[(i, self.indices[k])] = self.values[k];
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenConfig {
    /// Problems up to this dimension go to the dense solver.
    pub dense_limit: usize,
    pub krylov_dim: usize,
    /// Residual tolerance relative to `max(1, ‖A‖∞)`.
    pub tolerance: f64,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self { dense_limit: 4096, krylov_dim: 80, tolerance: 1e-11, max_restarts: 5000, seed: 0x5eed }
    }
}

/// Ascending eigenvalues, with matching eigenvectors as columns when requested.
#[derive(Clone, Debug)]
pub struct LowSpectrum {
    pub values: Vec<f64>,
    pub vectors: Option<DMatrix<f64>>,
}

pub fn lowest_dense(m: &DMatrix<f64>, count: usize, with_vectors: bool) -> LowSpectrum {
    let n = m.nrows();
    if n == 0 {
        return LowSpectrum { values: vec![], vectors: with_vectors.then(|| DMatrix::zeros(0, 0)) };
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.truncate(count.min(n));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = with_vectors.then(|| DMatrix::from_columns(&order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect::<Vec<_>>()));
    LowSpectrum { values, vectors }
}

fn orthogonalize(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = q.dot(v);
            v.axpy(-c, q, 1.0);
        }
    }
}

struct KrylovRun {
    ritz_values: Vec<f64>,
    ritz_vectors: Vec<DVector<f64>>,
    residuals: Vec<f64>,
}

fn lanczos_run(op: &CsrMatrix, start: DVector<f64>, locked: &[DVector<f64>], steps: usize, breakdown: f64) -> KrylovRun {
    let mut basis: Vec<DVector<f64>> = vec![start];
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut last_beta = 0.0;
    for k in 0..steps {
        let mut w = op.matvec(&basis[k]);
        let a = basis[k].dot(&w);
        alpha.push(a);
        w.axpy(-a, &basis[k], 1.0);
        if k > 0 {
            w.axpy(-beta[k - 1], &basis[k - 1], 1.0);
        }
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let b = w.norm();
        if k + 1 == steps || b < breakdown {
            last_beta = b;
            break;
        }
        beta.push(b);
        basis.push(w / b);
    }
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut run = KrylovRun { ritz_values: vec![], ritz_vectors: vec![], residuals: vec![] };
    for k in order {
        let y = eig.eigenvectors.column(k);
        let mut x = DVector::zeros(op.dimension());
        for (i, q) in basis.iter().enumerate().take(m) {
            x.axpy(y[i], q, 1.0);
        }
        let norm = x.norm();
        run.ritz_values.push(eig.eigenvalues[k]);
        run.ritz_vectors.push(x / norm);
        run.residuals.push((last_beta * y[m - 1]).abs());
    }
    run
}

fn random_start(rng: &mut ChaCha8Rng, n: usize, locked: &[DVector<f64>]) -> Option<DVector<f64>> {
    for _ in 0..8 {
        let mut v = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
        orthogonalize(&mut v, locked);
        let norm = v.norm();
        if norm > 1e-8 {
            return Some(v / norm);
        }
    }
    None
}

/// The `count` smallest eigenpairs of a symmetric sparse operator.
pub fn lowest_lanczos(op: &CsrMatrix, count: usize, config: &EigenConfig) -> Result<LowSpectrum> {
    let n = op.dimension();
    let count = count.min(n);
    let scale = op.norm_inf().max(1.0);
    let tol = config.tolerance * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut locked: Vec<DVector<f64>> = Vec::new();
    let mut locked_values: Vec<f64> = Vec::new();
    let mut restarts = 0;
    let mut start = random_start(&mut rng, n, &locked);
    loop {
        if locked.len() >= n {
            break;
        }
        let Some(v0) = start.take() else { break };
        let steps = config.krylov_dim.min(n - locked.len());
        let run = lanczos_run(op, v0, &locked, steps, 1e-13 * scale);
        let enough = locked.len() >= count;
        // Once `count` pairs are locked, a fresh run checks that nothing
        // below the largest locked value was missed.
        if enough {
            let bound = locked_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if run.residuals[0] <= tol && run.ritz_values[0] >= bound - tol {
                break;
            }
        }
        let mut progressed = false;
        for k in 0..run.ritz_values.len() {
            if run.residuals[k] > tol {
                break;
            }
            let mut x = run.ritz_vectors[k].clone();
            orthogonalize(&mut x, &locked);
            let norm = x.norm();
            if norm < 0.5 {
                break;
            }
            locked.push(x / norm);
            locked_values.push(run.ritz_values[k]);
            progressed = true;
        }
        if progressed {
            start = random_start(&mut rng, n, &locked);
        } else {
            restarts += 1;
            if restarts > config.max_restarts {
                return Err(Error::NonConvergence(format!(
                    "Lanczos: {} of {count} eigenpairs after {restarts} restarts",
                    locked.len()
                )));
            }
            let mut v = run.ritz_vectors[0].clone();
            orthogonalize(&mut v, &locked);
            let norm = v.norm();
            start = if norm > 1e-8 { Some(v / norm) } else { random_start(&mut rng, n, &locked) };
        }
    }
    let mut order: Vec<usize> = (0..locked.len()).collect();
    order.sort_by(|&a, &b| locked_values[a].total_cmp(&locked_values[b]));
    order.truncate(count);
    let values = order.iter().map(|&k| locked_values[k]).collect();
    let vectors = DMatrix::from_columns(&order.iter().map(|&k| locked[k].clone()).collect::<Vec<_>>());
    Ok(LowSpectrum { values, vectors: Some(vectors) })
}
