//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use crate::exec::Execution;

use super::matrix::Matrix;
use super::PcaError;

/// Stopping rule for [`eigen_sym_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiOptions {
    /// Converged once the off-diagonal Frobenius norm is at most
    /// `tolerance * ‖A‖_F`.
    pub tolerance: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        JacobiOptions {
            tolerance: 1e-12,
            max_sweeps: 100,
        }
    }
}

/// Eigenpairs sorted by eigenvalue, largest first. Eigenvectors are the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }
}

pub fn eigen_sym(a: &Matrix) -> Result<SymmetricEigen, PcaError> {
    eigen_sym_with(a, JacobiOptions::default())
}

/// Decomposes many matrices independently; results keep input order.
pub fn eigen_sym_batch(
    matrices: &[Matrix],
    exec: Execution,
) -> Vec<Result<SymmetricEigen, PcaError>> {
    exec.map(matrices, eigen_sym)
}

pub fn eigen_sym_with(a: &Matrix, opts: JacobiOptions) -> Result<SymmetricEigen, PcaError> {
    check_symmetric(a)?;
    let n = a.rows();
    let mut a = a.clone();
    let mut v = Matrix::identity(n);

    let frob = frobenius(&a);
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= opts.tolerance * frob {
            break;
        }
        if sweeps == opts.max_sweeps {
            return Err(PcaError::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their diagonal order
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Annihilates `a[p][q]` with a plane rotation J: A ← JᵀAJ, V ← VJ.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    // smaller root of t² + 2θt − 1 = 0 keeps the rotation angle ≤ π/4
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + theta.hypot(1.0))
    };
    if t == 0.0 {
        a[(p, q)] = 0.0;
        a[(q, p)] = 0.0;
        return;
    }
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let n = a.rows();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

fn check_symmetric(a: &Matrix) -> Result<(), PcaError> {
    if a.rows() != a.cols() {
        return Err(PcaError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.to_rows().iter().flatten().any(|x| !x.is_finite()) {
        return Err(PcaError::NonFinite);
    }
    let tol = 1e-12 * a.max_abs().max(1.0);
    for i in 0..a.rows() {
        for j in i + 1..a.cols() {
            let diff = (a[(i, j)] - a[(j, i)]).abs();
            if diff > tol {
                return Err(PcaError::NotSymmetric { row: i, col: j, diff });
            }
        }
    }
    Ok(())
}

fn frobenius(a: &Matrix) -> f64 {
    a.to_rows().iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let e = eigen_sym(&Matrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        assert_eq!(e.sweeps, 0);
    }

    #[test]
    fn two_by_two_closed_form() {
        let e = eigen_sym(&Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]])).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.vector(0);
        let v1 = e.vector(1);
        // up to sign
        assert!((v0[0].abs() - h).abs() < 1e-12 && (v0[0] - v0[1]).abs() < 1e-12);
        assert!((v1[0].abs() - h).abs() < 1e-12 && (v1[0] + v1[1]).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_and_non_square() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]);
        assert!(matches!(eigen_sym(&a), Err(PcaError::NotSymmetric { .. })));
        let b = Matrix::from_rows(&[[1.0, 2.0, 3.0]]);
        assert!(matches!(eigen_sym(&b), Err(PcaError::NotSquare { .. })));
        let c = Matrix::from_rows(&[[f64::NAN]]);
        assert!(matches!(eigen_sym(&c), Err(PcaError::NonFinite)));
    }

    #[test]
    fn sweep_cap_reports_no_convergence() {
        let a = Matrix::from_rows(&[[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 1.0]]);
        let opts = JacobiOptions {
            tolerance: 1e-12,
            max_sweeps: 1,
        };
        assert!(matches!(
            eigen_sym_with(&a, opts),
            Err(PcaError::NoConvergence { sweeps: 1, .. })
        ));
    }

    #[test]
    fn zero_matrix() {
        let e = eigen_sym(&Matrix::zeros(4, 4)).unwrap();
        assert_eq!(e.values, vec![0.0; 4]);
    }
}
