//! Cyclic complex Jacobi rotations for one Hermitian matrix or a family of
//! commuting Hermitian matrices.
//!
//! Each plane rotation acting on indices (p, q) is chosen to maximise
//! `sum_m |a'_pp - a'_qq|^2` over the family. Writing the 2x2 block of each
//! matrix in the Pauli basis, this is the top eigenvector of a 3x3 real
//! symmetric matrix; for a single matrix it reduces to the classical
//! rotation that annihilates `a_pq` exactly.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::CMatrix;

const MAX_SWEEPS: usize = 80;

fn off_norm_sq(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc
}

/// Pauli coordinates of the (p, q) block: off-diagonal entry
/// `b = x + i(-y)`, diagonal half-difference `z`.
fn block_vector(m: &CMatrix, p: usize, q: usize) -> Vector3<f64> {
    let b = m[(p, q)];
    Vector3::new(b.re, -b.im, 0.5 * (m[(p, p)].re - m[(q, q)].re))
}

fn rotation_axis(mats: &[CMatrix], p: usize, q: usize) -> Vector3<f64> {
    if mats.len() == 1 {
        let v = block_vector(&mats[0], p, q);
        let n = v.norm();
        return if n > 0.0 { v / n } else { Vector3::z() };
    }
    let mut g = Matrix3::zeros();
    for m in mats {
        let v = block_vector(m, p, q);
        g += v * v.transpose();
    }
    let eig = g.symmetric_eigen();
    let (mut best, mut best_val) = (0, f64::NEG_INFINITY);
    for k in 0..3 {
        if eig.eigenvalues[k] > best_val {
            best_val = eig.eigenvalues[k];
            best = k;
        }
    }
    let r: Vector3<f64> = eig.eigenvectors.column(best).into();
    let n = r.norm();
    if n > 0.0 {
        r / n
    } else {
        Vector3::z()
    }
}

/// Applies `A <- G^* A G` on rows/columns (p, q) where
/// `G = [[c, -conj(s)], [s, c]]`.
fn rotate(m: &mut CMatrix, p: usize, q: usize, c: f64, s: Complex64) {
    let n = m.nrows();
    let sc = s.conj();
    for i in 0..n {
        let ap = m[(i, p)];
        let aq = m[(i, q)];
        m[(i, p)] = ap * c + aq * s;
        m[(i, q)] = -ap * sc + aq * c;
    }
    for j in 0..n {
        let ap = m[(p, j)];
        let aq = m[(q, j)];
        m[(p, j)] = ap * c + aq * sc;
        m[(q, j)] = -ap * s + aq * c;
    }
}

fn rotate_columns(v: &mut CMatrix, p: usize, q: usize, c: f64, s: Complex64) {
    let sc = s.conj();
    for i in 0..v.nrows() {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * c + vq * s;
        v[(i, q)] = -vp * sc + vq * c;
    }
}

/// Jointly diagonalizes a family of (commuting) Hermitian matrices.
///
/// Returns the accumulated unitary `V` (eigenvectors in columns) and the
/// rotated matrices `V^* M V`, whose diagonals carry the eigenvalues.
pub fn joint_diagonalize(mats: &[CMatrix]) -> (CMatrix, Vec<CMatrix>) {
    assert!(!mats.is_empty(), "joint_diagonalize needs at least one matrix");
    let n = mats[0].nrows();
    let mut work: Vec<CMatrix> = mats.to_vec();
    let mut v = CMatrix::identity(n, n);
    if n == 1 {
        return (v, work);
    }

    let scale_sq: f64 = work.iter().map(|m| m.norm_squared()).sum();
    if scale_sq == 0.0 {
        return (v, work);
    }
    let target = f64::EPSILON * f64::EPSILON * scale_sq;
    let mut prev_off = f64::INFINITY;

    for sweep in 0..MAX_SWEEPS {
        let off: f64 = work.iter().map(off_norm_sq).sum();
        if off <= target {
            break;
        }
        // rounding floor reached
        if sweep >= 4 && off >= 0.25 * prev_off && off < 1e-20 * scale_sq {
            break;
        }
        prev_off = off;

        for p in 0..n - 1 {
            for q in p + 1..n {
                let pair_off: f64 = work.iter().map(|m| m[(p, q)].norm_sqr()).sum();
                if pair_off <= target / (n * n) as f64 {
                    continue;
                }
                let mut r = rotation_axis(&work, p, q);
                if r.z < 0.0 {
                    r = -r;
                }
                let c = (0.5 * (1.0 + r.z)).sqrt();
                let s = Complex64::new(r.x, r.y) / (2.0 * c);
                for m in work.iter_mut() {
                    rotate(m, p, q, c, s);
                }
                rotate_columns(&mut v, p, q, c, s);
            }
        }
    }
    (v, work)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::{c64, max_abs_diff};

    #[test]
    fn pauli_x_rotates_to_diagonal() {
        let a = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        let (v, d) = joint_diagonalize(std::slice::from_ref(&a));
        let mut diag: Vec<f64> = (0..2).map(|i| d[0][(i, i)].re).collect();
        diag.sort_by(f64::total_cmp);
        assert!((diag[0] + 1.0).abs() < 1e-15 && (diag[1] - 1.0).abs() < 1e-15);
        assert!(max_abs_diff(&(&v * &d[0] * v.adjoint()), &a) < 1e-15);
    }

    #[test]
    fn complex_off_diagonal() {
        let a = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.3, -0.7), c64(0.3, 0.7), c64(-2.0, 0.0)]);
        let (v, d) = joint_diagonalize(std::slice::from_ref(&a));
        assert!(d[0][(0, 1)].norm() < 1e-15);
        assert!(max_abs_diff(&(&v * &d[0] * v.adjoint()), &a) < 1e-14);
    }

    #[test]
    fn commuting_pair_with_degenerate_first_member() {
        // X = diag(1, 1, -1) in a rotated basis, Y separates the first two.
        let x = CMatrix::from_row_slice(
            3,
            3,
            &[
                c64(1.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(1.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(-1.0, 0.0),
            ],
        );
        let y = CMatrix::from_row_slice(
            3,
            3,
            &[
                c64(0.0, 0.0),
                c64(0.0, -1.0),
                c64(0.0, 0.0),
                c64(0.0, 1.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
            ],
        );
        let (v, d) = joint_diagonalize(&[x.clone(), y.clone()]);
        for m in &d {
            assert!(off_norm_sq(m) < 1e-28);
        }
        assert!(max_abs_diff(&(&v * &d[1] * v.adjoint()), &y) < 1e-14);
    }
}
