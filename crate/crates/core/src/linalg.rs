//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest entrywise modulus of `a − a†`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(a + a†) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Ascending eigenvalues and matching eigenvectors (as columns) of a
/// Hermitian matrix. Eigenvector phases are whatever the solver returns.
pub fn eigh(a: &CMatrix) -> (Vec<f64>, Vec<CVector>) {
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    (values, vectors)
}

/// Spectral norm of a Hermitian matrix, `max |λ|`.
pub fn hermitian_spectral_norm(a: &CMatrix) -> f64 {
    if a.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return 0.0;
    }
    a.clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `⟨u|a|v⟩`.
pub fn sandwich(u: &CVector, a: &CMatrix, v: &CVector) -> Complex64 {
    u.dotc(&(a * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigh_sorts_ascending() {
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(3.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(-1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(2.0, 0.0),
            ],
        );
        let (vals, vecs) = eigh(&a);
        assert_eq!(vals, vec![-1.0, 2.0, 3.0]);
        assert!((vecs[0][1].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_of_pauli_y() {
        let y =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert!((hermitian_spectral_norm(&y) - 1.0).abs() < 1e-14);
        assert_eq!(hermiticity_defect(&y), 0.0);
    }
}
