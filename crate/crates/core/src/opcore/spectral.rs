use std::f64::consts::PI;

use num_complex::Complex64;

use super::jacobi::joint_diagonalize;
use super::{c64, CMatrix, HermitianOperator, UnitaryOperator};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumKind {
    Hermitian,
    Unitary,
}

/// Eigenvalues grouped into clusters, with one orthogonal projection per
/// cluster.
///
/// Eigenvalues are stored as complex numbers in both cases: real axis for
/// Hermitian input, unit circle for unitary input. Eigenvectors are kept so
/// that functional calculus can run in the eigenbasis.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    kind: SpectrumKind,
    eigenvalues: Vec<Complex64>,
    eigenvectors: CMatrix,
    cluster_of: Vec<usize>,
    clusters: Vec<Vec<usize>>,
    cluster_values: Vec<Complex64>,
    projections: Vec<CMatrix>,
}

impl SpectralDecomposition {
    fn assemble(
        kind: SpectrumKind,
        eigenvalues: Vec<Complex64>,
        eigenvectors: CMatrix,
        clusters: Vec<Vec<usize>>,
        cluster_values: Vec<Complex64>,
    ) -> Self {
        let n = eigenvalues.len();
        let mut cluster_of = vec![0; n];
        let mut projections = Vec::with_capacity(clusters.len());
        for (c, members) in clusters.iter().enumerate() {
            let mut proj = CMatrix::zeros(n, n);
            for &k in members {
                cluster_of[k] = c;
                let col = eigenvectors.column(k);
                proj += col * col.adjoint();
            }
            projections.push(proj);
        }
        Self {
            kind,
            eigenvalues,
            eigenvectors,
            cluster_of,
            clusters,
            cluster_values,
            projections,
        }
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors, one column per entry of [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    /// Cluster index of each eigenvalue.
    pub fn cluster_of(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn cluster_values(&self) -> &[Complex64] {
        &self.cluster_values
    }

    /// Real parts of the cluster values (the spectrum of a Hermitian input).
    pub fn real_cluster_values(&self) -> Vec<f64> {
        self.cluster_values.iter().map(|z| z.re).collect()
    }

    pub fn projections(&self) -> &[CMatrix] {
        &self.projections
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    /// `sum_c g(value_c) P_c`.
    pub fn apply<F: Fn(Complex64) -> Complex64>(&self, g: F) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (value, proj) in self.cluster_values.iter().zip(&self.projections) {
            out += proj * g(*value);
        }
        out
    }

    /// `sum_c value_c P_c`.
    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|z| z)
    }

    /// Spectral data of `A / sigma` for Hermitian `A`: the same projections
    /// with every eigenvalue divided by `sigma`.
    pub fn scaled(&self, sigma: f64) -> Self {
        let mut out = self.clone();
        for z in out.eigenvalues.iter_mut().chain(out.cluster_values.iter_mut()) {
            *z /= sigma;
        }
        out
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }
}

fn resolve_tol(tol: Option<f64>, norm: f64) -> Result<f64> {
    match tol {
        None => Ok(1e-8 * (1.0 + norm)),
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(Error::InvalidTolerance(t)),
    }
}

/// Reorders eigenpairs by `key` ascending.
fn sort_pairs(values: Vec<Complex64>, vectors: CMatrix, key: impl Fn(&Complex64) -> f64) -> (Vec<Complex64>, CMatrix) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| key(&values[a]).total_cmp(&key(&values[b])));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let mut sorted_vectors = CMatrix::zeros(vectors.nrows(), vectors.ncols());
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &vectors.column(src));
    }
    (sorted_values, sorted_vectors)
}

/// Chains consecutive (already sorted) values whose gap is at most `tol`.
fn chain_clusters(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, z) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if (values[*last.last().unwrap()] - z).norm() <= tol => last.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    clusters
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvalues are sorted ascending; neighbours within `cluster_tol`
/// (default `1e-8 * (1 + ||H||_op)`) share a cluster whose value is their
/// mean.
pub fn eig_hermitian(h: &HermitianOperator, cluster_tol: Option<f64>) -> Result<SpectralDecomposition> {
    let (vectors, rotated) = joint_diagonalize(std::slice::from_ref(h.entries()));
    let values: Vec<Complex64> = (0..h.dim()).map(|i| c64(rotated[0][(i, i)].re, 0.0)).collect();
    let (values, vectors) = sort_pairs(values, vectors, |z| z.re);
    let norm = values.iter().fold(0.0_f64, |acc, z| acc.max(z.re.abs()));
    let tol = resolve_tol(cluster_tol, norm)?;
    let clusters = chain_clusters(&values, tol);
    let cluster_values = clusters
        .iter()
        .map(|members| {
            c64(
                members.iter().map(|&k| values[k].re).sum::<f64>() / members.len() as f64,
                0.0,
            )
        })
        .collect();
    Ok(SpectralDecomposition::assemble(
        SpectrumKind::Hermitian,
        values,
        vectors,
        clusters,
        cluster_values,
    ))
}

/// Argument in `(-pi, pi]`; the negative real axis maps to `+pi`.
pub(crate) fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Eigendecomposition of a unitary matrix by simultaneous Jacobi rotations
/// on the commuting Hermitian pair `(U + U^*)/2`, `(U - U^*)/(2i)`.
///
/// Eigenvalues are normalized onto the unit circle and sorted by argument
/// in `(-pi, pi]`; clusters are chained by chordal distance, wrapping around
/// the circle.
pub fn eig_unitary(u: &UnitaryOperator, cluster_tol: Option<f64>) -> Result<SpectralDecomposition> {
    let m = u.entries();
    let re_part = (m + m.adjoint()).scale(0.5);
    let im_part = (m - m.adjoint()) * c64(0.0, -0.5);
    let (vectors, _) = joint_diagonalize(&[re_part, im_part]);
    let mv = m * &vectors;
    let values: Vec<Complex64> = (0..u.dim())
        .map(|k| {
            let z = vectors.column(k).dotc(&mv.column(k));
            if z.norm() > 0.0 {
                z / z.norm()
            } else {
                c64(1.0, 0.0)
            }
        })
        .collect();
    let (values, vectors) = sort_pairs(values, vectors, |z| principal_arg(*z));
    let tol = resolve_tol(cluster_tol, 1.0)?;
    let mut clusters = chain_clusters(&values, tol);
    if clusters.len() > 1 {
        let first = values[clusters[0][0]];
        let last = values[*clusters.last().unwrap().last().unwrap()];
        if (first - last).norm() <= tol {
            let tail = clusters.pop().unwrap();
            clusters[0].extend(tail);
        }
    }
    let cluster_values = clusters
        .iter()
        .map(|members| {
            let s: Complex64 = members.iter().map(|&k| values[k]).sum();
            s / s.norm()
        })
        .collect();
    Ok(SpectralDecomposition::assemble(
        SpectrumKind::Unitary,
        values,
        vectors,
        clusters,
        cluster_values,
    ))
}

fn in_eigenbasis(vectors: &CMatrix, diag: &[Complex64]) -> CMatrix {
    let mut scaled = vectors.clone();
    for (k, d) in diag.iter().enumerate() {
        for i in 0..scaled.nrows() {
            scaled[(i, k)] *= d;
        }
    }
    scaled * vectors.adjoint()
}

/// `e^{iH}` through the eigendecomposition of `H`.
pub fn matrix_exp_i(h: &HermitianOperator) -> UnitaryOperator {
    let dec = eig_hermitian(h, None).expect("default tolerance is valid");
    exp_i_from(&dec, 1.0)
}

/// `e^{i t A}` from an existing Hermitian decomposition.
pub fn exp_i_from(dec: &SpectralDecomposition, t: f64) -> UnitaryOperator {
    let phases: Vec<Complex64> = dec
        .eigenvalues()
        .iter()
        .map(|z| Complex64::from_polar(1.0, t * z.re))
        .collect();
    UnitaryOperator::new_unchecked(in_eigenbasis(dec.eigenvectors(), &phases))
}

/// Self-adjoint `A` with `e^{iA} = U` and spectrum in `(-pi, pi]`.
pub fn unitary_log(u: &UnitaryOperator) -> HermitianOperator {
    let dec = eig_unitary(u, None).expect("default tolerance is valid");
    let args: Vec<Complex64> = dec.eigenvalues().iter().map(|z| c64(principal_arg(*z), 0.0)).collect();
    HermitianOperator::hermitian_part(&in_eigenbasis(dec.eigenvectors(), &args)).expect("square by construction")
}
