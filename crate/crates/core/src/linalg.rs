//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are stored as `nalgebra::DMatrix<Complex64>` (column-major).
//! Small Hermitian problems are solved with nalgebra; large ones are routed
//! to faer, taking the real symmetric path when every imaginary part is zero.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Residual tolerance for decompositions.
pub const DECOMPOSITION_TOL: f64 = 1e-10;
/// Tolerance for unitarity and isometry defects.
pub const UNITARY_TOL: f64 = 1e-12;
/// Relative spread under which neighbouring singular values form one multiplet.
pub const MULTIPLET_REL_TOL: f64 = 1e-12;

/// Above this size Hermitian eigenproblems go through faer.
const LARGE_EIGH: usize = 11;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent seed for sub-stream `stream` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x632B_E59B_D9B4_E019)))
}

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Column-orthonormal, `rows × rank`.
    pub left_vectors: ComplexMatrix,
    /// Non-increasing.
    pub singular_values: Vec<f64>,
    /// Row-orthonormal, `rank × cols`.
    pub right_vectors_adj: ComplexMatrix,
    /// Sum of squares of the dropped singular values.
    pub discarded_weight: f64,
    /// The cut was forced through a degenerate multiplet by the rank cap.
    pub split_multiplet: bool,
}

impl SvdResult {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.left_vectors.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * &self.right_vectors_adj
    }
}

#[derive(Debug, Clone)]
pub struct EighResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

pub fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return invalid("matrix has a zero dimension");
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return invalid("matrix has non-finite entries");
    }
    Ok(())
}

/// Largest entry of `|m - m†|`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    check_finite(m)?;
    if !m.is_square() {
        return invalid(format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols()));
    }
    let scale = m.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
    let defect = hermiticity_defect(m);
    if defect > DECOMPOSITION_TOL * scale {
        return invalid(format!("matrix is not Hermitian (defect {defect:e})"));
    }
    Ok(())
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn frobenius_sq(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `‖V†V − 𝟙‖_F`.
pub fn isometry_defect(v: &ComplexMatrix) -> f64 {
    let g = v.adjoint() * v;
    (g - identity(v.ncols())).norm()
}

/// `‖UU† − 𝟙‖_F`.
pub fn co_isometry_defect(u: &ComplexMatrix) -> f64 {
    let g = u * u.adjoint();
    (g - identity(u.nrows())).norm()
}

/// Rank-capped, tolerance-truncated SVD.
///
/// Keeps `min(max_rank, #{s > rel_tol·s_max})` triples, widened to cover a
/// degenerate multiplet straddling the cut as long as the cap allows.
pub fn svd_truncated(m: &ComplexMatrix, max_rank: usize, rel_tol: f64) -> Result<SvdResult> {
    check_finite(m)?;
    if max_rank == 0 {
        return invalid("max_rank must be at least 1");
    }
    if !(rel_tol >= 0.0) {
        return invalid("rel_tol must be non-negative");
    }
    let svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::InvalidInput("SVD failed to converge".into()))?;
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();

    let s_max = values.first().copied().unwrap_or(0.0);
    let mut keep = values.iter().filter(|&&s| s > rel_tol * s_max).count();
    keep = keep.clamp(1, max_rank.min(values.len()));
    let same = |a: f64, b: f64| (a - b).abs() <= MULTIPLET_REL_TOL * a.max(b) && a > 0.0;
    while keep < values.len() && keep < max_rank && same(values[keep - 1], values[keep]) {
        keep += 1;
    }
    let split_multiplet = keep < values.len() && same(values[keep - 1], values[keep]);

    let left = ComplexMatrix::from_fn(m.nrows(), keep, |i, j| u[(i, order[j])]);
    let right = ComplexMatrix::from_fn(keep, m.ncols(), |i, j| vt[(order[i], j)]);
    let discarded_weight = values[keep..].iter().fold(0.0, |acc, s| acc + s * s);
    Ok(SvdResult {
        left_vectors: left,
        singular_values: values[..keep].to_vec(),
        right_vectors_adj: right,
        discarded_weight,
        split_multiplet,
    })
}

/// Singular values only, non-increasing.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Squared singular values of the column-major `rows × cols` block `data`,
/// non-increasing, from the eigenvalues of the smaller Gram matrix.
///
/// Absolute accuracy is `ε·‖data‖²`, enough for entropies; small singular
/// values themselves are not resolved.
pub(crate) fn gram_spectrum(data: &[Complex64], rows: usize, cols: usize) -> Vec<f64> {
    let m = faer::MatRef::from_column_major_slice(data, rows, cols);
    let g = if rows <= cols { m * m.adjoint() } else { m.adjoint() * m };
    let mut w = match g.self_adjoint_eigenvalues(faer::Side::Lower) {
        Ok(w) => w,
        // fall back to the SVD on the rare convergence failure
        Err(_) => return singular_values(&ComplexMatrix::from_column_slice(rows, cols, data)).into_iter().map(|s| s * s).collect(),
    };
    w.iter_mut().for_each(|x| *x = x.max(0.0));
    w.sort_by(|a, b| b.total_cmp(a));
    w
}

fn is_real(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

fn eigh_small(h: &ComplexMatrix) -> Result<EighResult> {
    let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::InvalidInput("eigensolver failed to converge".into()))?;
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(h.nrows(), h.ncols(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EighResult { eigenvalues, eigenvectors })
}

fn eigh_large(h: &ComplexMatrix) -> Result<EighResult> {
    let n = h.nrows();
    let fail = |e| Error::InvalidInput(format!("eigensolver failed: {e:?}"));
    let (values, vectors) = if is_real(h) {
        let m = faer::Mat::<f64>::from_fn(n, n, |i, j| h[(i, j)].re);
        let eig = m.self_adjoint_eigen(faer::Side::Lower).map_err(fail)?;
        let s = eig.S().column_vector();
        let u = eig.U();
        let values: Vec<f64> = (0..n).map(|i| s[i]).collect();
        (values, ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(u[(i, j)], 0.0)))
    } else {
        let m = faer::Mat::<Complex64>::from_fn(n, n, |i, j| h[(i, j)]);
        let eig = m.self_adjoint_eigen(faer::Side::Lower).map_err(fail)?;
        let s = eig.S().column_vector();
        let u = eig.U();
        let values: Vec<f64> = (0..n).map(|i| s[i].re).collect();
        (values, ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)]))
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Ok(EighResult {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        eigenvectors: ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]),
    })
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn eigh(h: &ComplexMatrix) -> Result<EighResult> {
    check_hermitian(h)?;
    eigh_unchecked(h)
}

/// `exp(iA)` for Hermitian `A`, built from the eigenbasis of `A`.
pub fn unitary_from_generator(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_hermitian(a)?;
    let rows: Vec<usize> = (0..a.nrows()).collect();
    Ok(phase_exponential(&eigh_unchecked(a)?, &rows))
}

/// Eigendecomposition without the Hermiticity gate, for generators that are
/// Hermitian by construction.
pub(crate) fn eigh_unchecked(h: &ComplexMatrix) -> Result<EighResult> {
    if h.nrows() > LARGE_EIGH {
        eigh_large(h)
    } else {
        eigh_small(h)
    }
}

/// Selected rows of `V diag(e^{iλ}) V†`.
pub(crate) fn phase_exponential(eig: &EighResult, rows: &[usize]) -> ComplexMatrix {
    let v = &eig.eigenvectors;
    let n = v.nrows();
    let mut left = ComplexMatrix::from_fn(rows.len(), n, |i, k| v[(rows[i], k)]);
    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, *lambda);
        left.column_mut(k).scale_mut_complex(phase);
    }
    left * v.adjoint()
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, c: Complex64);
}

impl<S: nalgebra::StorageMut<Complex64, nalgebra::Dyn, nalgebra::U1>> ScaleComplex
    for nalgebra::Matrix<Complex64, nalgebra::Dyn, nalgebra::U1, S>
{
    fn scale_mut_complex(&mut self, c: Complex64) {
        for z in self.iter_mut() {
            *z *= c;
        }
    }
}

/// Complex Gaussian matrix with independent standard-normal real and imaginary parts.
pub fn ginibre_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    ginibre_with_rng(rows, cols, &mut rng_from_seed(seed))
}

pub fn ginibre_with_rng(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for z in m.iter_mut() {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *z = Complex64::new(re, im);
    }
    m
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return invalid("dimension must be at least 1");
    }
    Ok(haar_with_rng(dim, &mut rng_from_seed(seed)))
}

pub fn haar_with_rng(dim: usize, rng: &mut Rng) -> ComplexMatrix {
    let g = ginibre_with_rng(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        q.column_mut(j).scale_mut_complex(phase);
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let g = ginibre_matrix(n, n, seed);
        (&g + g.adjoint()).scale(0.5)
    }

    #[test]
    fn identity_svd() {
        let r = svd_truncated(&identity(2), 2, 0.0).unwrap();
        assert_eq!(r.singular_values.len(), 2);
        assert_abs_diff_eq!(r.singular_values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.singular_values[1], 1.0, epsilon = 1e-14);
        assert_eq!(r.discarded_weight, 0.0);
    }

    #[test]
    fn rank_one_outer_product() {
        let u = ComplexMatrix::from_column_slice(3, 1, &[c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)]);
        let v = ComplexMatrix::from_column_slice(2, 1, &[c(0.5, 0.5), c(3.0, 0.0)]);
        let m = &u * v.adjoint();
        let r = svd_truncated(&m, 1, 0.0).unwrap();
        assert_eq!(r.rank(), 1);
        assert_abs_diff_eq!(r.singular_values[0], u.norm() * v.norm(), epsilon = 1e-12);
        assert!(r.discarded_weight < 1e-24);
    }

    #[test]
    fn random_svd_reconstructs() {
        let m = ginibre_matrix(6, 4, 11);
        let r = svd_truncated(&m, 4, 0.0).unwrap();
        assert!((r.reconstruct() - &m).norm() <= 1e-10);
        assert!(isometry_defect(&r.left_vectors) <= 1e-10);
        assert!(co_isometry_defect(&r.right_vectors_adj) <= 1e-10);
        assert!(r.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn truncation_weight_matches_residual() {
        let m = ginibre_matrix(7, 5, 3);
        for rank in 1..=5 {
            let r = svd_truncated(&m, rank, 0.0).unwrap();
            let residual = frobenius_sq(&(r.reconstruct() - &m));
            assert_abs_diff_eq!(residual, r.discarded_weight, epsilon = 1e-10);
        }
    }

    #[test]
    fn multiplet_is_not_split_below_the_cap() {
        let m = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(1.0, 0.0), c(1.0 - 1e-13, 0.0), c(0.5, 0.0)]));
        // the tolerance alone would cut between the two near-equal values
        let r = svd_truncated(&m, 3, (1.0 - 0.5e-13) / 2.0).unwrap();
        assert_eq!(r.rank(), 3);
        assert!(!r.split_multiplet);
        let r = svd_truncated(&m, 2, 0.0).unwrap();
        assert_eq!(r.rank(), 2);
        assert!(r.split_multiplet);
    }

    #[test]
    fn svd_rejects_non_finite() {
        let mut m = identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(svd_truncated(&m, 1, 0.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn pauli_spectra() {
        let z = ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), ZERO, ZERO, c(-1.0, 0.0)]);
        let x = ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        for m in [z, x] {
            let e = eigh(&m).unwrap();
            assert_abs_diff_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        for (n, seed) in [(8, 5), (64, 6)] {
            let h = random_hermitian(n, seed);
            let e = eigh(&h).unwrap();
            let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                e.eigenvalues.iter().map(|&l| c(l, 0.0)),
            ));
            let back = &e.eigenvectors * d * e.eigenvectors.adjoint();
            assert!((back - &h).norm() <= 1e-10 * h.norm());
            assert!(isometry_defect(&e.eigenvectors) <= 1e-10);
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(eigh(&m).is_err());
        assert!(unitary_from_generator(&m).is_err());
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        for k in 1..5 {
            let u = unitary_from_generator(&ComplexMatrix::zeros(k, k)).unwrap();
            assert!((u - identity(k)).norm() < 1e-14);
        }
        let a = ComplexMatrix::from_row_slice(2, 2, &[c(std::f64::consts::PI, 0.0), ZERO, ZERO, ZERO]);
        let u = unitary_from_generator(&a).unwrap();
        assert_abs_diff_eq!(u[(0, 0)].re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(u[(1, 1)].re, 1.0, epsilon = 1e-14);
        assert!(u[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn exp_spectrum_follows_generator() {
        let a = random_hermitian(5, 9);
        let u = unitary_from_generator(&a).unwrap();
        assert!(co_isometry_defect(&u) <= 1e-12);
        let inv = unitary_from_generator(&(-&a)).unwrap();
        assert!((&u * inv - identity(5)).norm() <= 1e-12);
        // each eigenvector of A is an eigenvector of U with eigenvalue e^{iλ}
        let e = eigh(&a).unwrap();
        for k in 0..5 {
            let v = e.eigenvectors.column(k).into_owned();
            let uv = &u * &v;
            let expected = v.map(|z| z * Complex64::from_polar(1.0, e.eigenvalues[k]));
            assert!((uv - expected).norm() <= 1e-12);
        }
    }

    #[test]
    fn haar_is_unitary_and_seeded() {
        let u1 = haar_random_unitary(1, 4).unwrap();
        assert_abs_diff_eq!(u1[(0, 0)].norm(), 1.0, epsilon = 1e-14);
        for dim in [2, 5, 16] {
            let u = haar_random_unitary(dim, 21).unwrap();
            assert!(isometry_defect(&u) <= 1e-12);
            assert_eq!(u, haar_random_unitary(dim, 21).unwrap());
        }
        assert!(haar_random_unitary(0, 1).is_err());
    }

    #[test]
    fn haar_first_moment() {
        let mut rng = rng_from_seed(77);
        let samples = 10_000;
        let mean: f64 = (0..samples).map(|_| haar_with_rng(4, &mut rng)[(0, 0)].norm_sqr()).sum::<f64>() / samples as f64;
        assert!((mean - 0.25).abs() <= 0.01, "mean |U00|^2 = {mean}");
    }

    #[test]
    fn ginibre_moments() {
        let g = ginibre_matrix(1000, 100, 5);
        assert_eq!(g, ginibre_matrix(1000, 100, 5));
        let n = g.len() as f64;
        let second = g.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
        let mean_re = g.iter().map(|z| z.re).sum::<f64>() / n;
        let mean_im = g.iter().map(|z| z.im).sum::<f64>() / n;
        assert!((second - 2.0).abs() <= 0.05);
        assert!(mean_re.abs() <= 0.02 && mean_im.abs() <= 0.02);
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(9, 3), derive_seed(9, 3));
    }
}
