//! Matrix exponential by Taylor series with scaling and squaring.

use nalgebra::DMatrix;

fn norm_one(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = norm_one(a);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / 2f64.powi(squarings as i32);
    // ‖scaled‖ ≤ 1/2, so 24 terms leave a remainder below 1e-30.
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_rotation() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0, -3.0, 2.5]));
        let e = expm(&d);
        for (k, v) in [0.0f64, -3.0, 2.5].iter().enumerate() {
            assert!((e[(k, k)] - v.exp()).abs() < 1e-12 * v.exp().max(1.0));
        }
        let theta = 1.3f64;
        let r = expm(&DMatrix::from_row_slice(2, 2, &[0.0, -theta, theta, 0.0]));
        let expected = DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
        assert!((r - expected).norm() < 1e-12);
    }

    #[test]
    fn large_norm_uses_squaring() {
        let a = DMatrix::from_row_slice(2, 2, &[-20.0, 0.0, 0.0, -1.0]);
        let e = expm(&a);
        assert!((e[(0, 0)] - (-20f64).exp()).abs() < 1e-15);
        assert!((e[(1, 1)] - (-1f64).exp()).abs() < 1e-13);
    }
}
