use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{c64, CMatrix, HermitianOperator, UnitaryOperator};

/// Matrix of i.i.d. standard complex Gaussians (`E|z|^2 = 1`).
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64(s * re, s * im)
    })
}

/// Haar-distributed unitary from a seeded Ginibre matrix.
///
/// Columns are orthonormalized by Gram–Schmidt (two passes), which yields the
/// QR factor whose `R` has a positive real diagonal; that normalization is
/// what makes the map from Ginibre matrices to `Q` Haar-distributed.
pub fn haar_unitary(n: usize, seed: u64) -> UnitaryOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_from_rng(n, &mut rng)
}

pub(crate) fn haar_unitary_from_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryOperator {
    assert!(n >= 1, "dimension must be positive");
    let z = complex_gaussian(n, n, rng);
    let mut q = CMatrix::zeros(n, n);
    for k in 0..n {
        let mut v = z.column(k).clone_owned();
        for _ in 0..2 {
            for j in 0..k {
                let qj = q.column(j);
                let proj = qj.dotc(&v);
                v -= qj * proj;
            }
        }
        let norm = v.norm();
        q.set_column(k, &(v / c64(norm, 0.0)));
    }
    UnitaryOperator::new_unchecked(q)
}

fn gaussian_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    let g = complex_gaussian(n, n, rng);
    HermitianOperator::hermitian_part(&g).expect("square")
}

/// Gaussian Hermitian matrix (GUE-like, unscaled).
pub fn random_hermitian(n: usize, seed: u64) -> HermitianOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gaussian_hermitian(n, &mut rng)
}

/// Self-adjoint contraction: a Gaussian Hermitian matrix divided by its
/// operator norm and multiplied by a uniform factor in `[0, 1]`.
pub fn random_hermitian_contraction(n: usize, seed: u64) -> HermitianOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    hermitian_contraction_from_rng(n, &mut rng)
}

pub(crate) fn hermitian_contraction_from_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    assert!(n >= 1, "dimension must be positive");
    let h = gaussian_hermitian(n, rng);
    let norm = h.op_norm();
    let u: f64 = rng.random();
    if norm == 0.0 {
        return h;
    }
    h.scale(u / norm).project_to_contraction()
}

/// Hermitian direction with unit Frobenius norm.
pub fn random_hermitian_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    let h = gaussian_hermitian(n, rng);
    let f = h.entries().norm();
    if f == 0.0 {
        h
    } else {
        h.scale(1.0 / f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::{eig_unitary, identity, max_abs_diff};

    #[test]
    fn haar_scalar_and_determinism() {
        for seed in 0..5 {
            let u = haar_unitary(1, seed);
            assert!((u.entries()[(0, 0)].norm() - 1.0).abs() < 1e-15);
        }
        assert_eq!(haar_unitary(6, 42), haar_unitary(6, 42));
        assert_ne!(haar_unitary(6, 42), haar_unitary(6, 43));
        let u = haar_unitary(20, 3);
        assert!(max_abs_diff(&(u.entries() * u.entries().adjoint()), &identity(20)) < 1e-13);
    }

    /// Eigenphases of a Haar unitary are marginally uniform on the circle.
    #[test]
    fn haar_phases_uniform() {
        let mut phases = Vec::new();
        for seed in 0..50 {
            let dec = eig_unitary(&haar_unitary(50, 1000 + seed), None).unwrap();
            phases.extend(dec.eigenvalues().iter().map(|z| z.arg()));
        }
        phases.sort_by(f64::total_cmp);
        let n = phases.len() as f64;
        let ks = phases
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let cdf = (t + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
                (cdf - i as f64 / n).abs().max((cdf - (i + 1) as f64 / n).abs())
            })
            .fold(0.0_f64, f64::max);
        assert!(ks < 0.2, "KS statistic {ks}");
    }

    #[test]
    fn contractions() {
        let x = random_hermitian_contraction(1, 9);
        assert!(x.entries()[(0, 0)].im == 0.0 && x.entries()[(0, 0)].re.abs() <= 1.0);
        assert_eq!(random_hermitian_contraction(16, 5), random_hermitian_contraction(16, 5));
        for seed in 0..10 {
            assert!(random_hermitian_contraction(16, seed).op_norm() <= 1.0 + 1e-12);
        }
    }
}
