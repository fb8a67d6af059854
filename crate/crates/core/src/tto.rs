//! Tree tensor operators: `X = (V_L ⊗ V_R)·R` for a purification `ρ = XX†`.
//!
//! Basis convention: the global index of a product basis state is
//! `a·d_B + b`, where `a` enumerates the left block of sites and `b` the
//! right block. Root rows follow the same rule, `α·M_B + β`, so that the
//! branch product is a plain Kronecker product.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::linalg::{self, ComplexMatrix};

/// Relative cut applied to singular values by [`compress_to_root`].
pub const ROOT_REL_TOL: f64 = 1e-13;
/// Singular values below this fraction of the largest are exact zeros in entropy sums.
pub const ENTROPY_CUTOFF: f64 = 1e-14;
/// Columns lighter than this carry no entropy.
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-14;
/// From this size on, Schmidt weights come from a Gram eigenproblem, which
/// beats the SVD there.
const GRAM_MIN_DIM: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bipartition {
    pub left_sites: usize,
    pub right_sites: usize,
}

impl Bipartition {
    pub fn new(left_sites: usize, right_sites: usize) -> Self {
        Self { left_sites, right_sites }
    }

    /// Contiguous half-half cut, the extra site going right for odd `sites`.
    pub fn half(sites: usize) -> Self {
        Self::new(sites / 2, sites - sites / 2)
    }

    pub fn sites(&self) -> usize {
        self.left_sites + self.right_sites
    }

    pub fn dims(&self, local_dim: usize) -> (usize, usize) {
        (local_dim.pow(self.left_sites as u32), local_dim.pow(self.right_sites as u32))
    }
}

/// Purification factor of a density matrix, `ρ = XX†`, one column per
/// Kraus index.
#[derive(Debug, Clone)]
pub struct PurificationFactor {
    data: ComplexMatrix,
    sites: usize,
    local_dim: usize,
}

impl PurificationFactor {
    pub fn new(data: ComplexMatrix, sites: usize, local_dim: usize) -> Result<Self> {
        linalg::check_finite(&data)?;
        if sites == 0 || local_dim < 2 {
            return invalid("need at least one site of local dimension >= 2");
        }
        let dim = local_dim
            .checked_pow(sites as u32)
            .filter(|&d| d == data.nrows());
        if dim.is_none() {
            return invalid(format!(
                "factor has {} rows, expected {local_dim}^{sites}",
                data.nrows()
            ));
        }
        let tr = linalg::frobenius_sq(&data);
        if (tr - 1.0).abs() > linalg::DECOMPOSITION_TOL {
            return invalid(format!("Tr(XX†) = {tr}, expected 1"));
        }
        Ok(Self { data, sites, local_dim })
    }

    /// Rescales `data` to unit trace before validating.
    pub fn normalized(mut data: ComplexMatrix, sites: usize, local_dim: usize) -> Result<Self> {
        let tr = linalg::frobenius_sq(&data);
        if !(tr > 0.0) {
            return invalid("factor has zero norm");
        }
        data.scale_mut(1.0 / tr.sqrt());
        Self::new(data, sites, local_dim)
    }

    pub fn data(&self) -> &ComplexMatrix {
        &self.data
    }

    pub fn into_data(self) -> ComplexMatrix {
        self.data
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn kraus_dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn half_shape(&self) -> (usize, usize) {
        Bipartition::half(self.sites).dims(self.local_dim)
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        &self.data * self.data.adjoint()
    }

    pub fn column_probabilities(&self) -> Vec<f64> {
        column_norms_sq(&self.data)
    }
}

pub(crate) fn column_norms_sq(m: &ComplexMatrix) -> Vec<f64> {
    m.column_iter().map(|c| c.norm_squared()).collect()
}

/// Depth-one tree: two isometric branches and the root carrying the Kraus leg.
#[derive(Debug, Clone)]
pub struct TreeTensorOperator {
    /// `d^{N_A} × M_A`, `V†V = 𝟙`.
    pub branch_left: ComplexMatrix,
    /// `d^{N_B} × M_B`, `V†V = 𝟙`.
    pub branch_right: ComplexMatrix,
    /// `(M_A·M_B) × K0`, row index `α·M_B + β`.
    pub root: ComplexMatrix,
    pub bipartition: Bipartition,
    pub local_dim: usize,
    /// Squared Frobenius weight dropped over both truncation stages.
    pub discarded_weight: f64,
    /// Either truncation cut through a degenerate multiplet.
    pub split_multiplet: bool,
}

impl TreeTensorOperator {
    pub fn root_shape(&self) -> (usize, usize) {
        (self.branch_left.ncols(), self.branch_right.ncols())
    }

    pub fn kraus_dim(&self) -> usize {
        self.root.ncols()
    }

    /// `(V_L ⊗ V_R)·R`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        linalg::kron(&self.branch_left, &self.branch_right) * &self.root
    }

    /// Root rescaled to unit trace, i.e. the state after truncation.
    pub fn normalized_root(&self) -> ComplexMatrix {
        let norm = linalg::frobenius_sq(&self.root).sqrt();
        if norm > 0.0 {
            self.root.unscale(norm)
        } else {
            self.root.clone()
        }
    }
}

/// Compresses `x` into a depth-one TTO with both bonds capped at `max_bond`.
pub fn compress_to_root(
    x: &PurificationFactor,
    bipartition: Bipartition,
    max_bond: usize,
) -> Result<TreeTensorOperator> {
    compress_to_root_with_tol(x, bipartition, max_bond, ROOT_REL_TOL)
}

pub fn compress_to_root_with_tol(
    x: &PurificationFactor,
    bipartition: Bipartition,
    max_bond: usize,
    rel_tol: f64,
) -> Result<TreeTensorOperator> {
    if bipartition.sites() != x.sites() || bipartition.left_sites == 0 || bipartition.right_sites == 0 {
        return invalid(format!(
            "bipartition {}|{} does not split {} sites",
            bipartition.left_sites,
            bipartition.right_sites,
            x.sites()
        ));
    }
    if max_bond == 0 {
        return invalid("bond dimension must be at least 1");
    }
    let (da, db) = bipartition.dims(x.local_dim());
    let k0 = x.kraus_dim();
    let data = x.data();

    // Y[a, b + d_B·j] = X[a·d_B + b, j]
    let y = ComplexMatrix::from_fn(da, db * k0, |a, col| {
        let (b, j) = (col % db, col / db);
        data[(a * db + b, j)]
    });
    let first = linalg::svd_truncated(&y, max_bond, rel_tol)?;
    let ma = first.rank();
    let mut w = first.right_vectors_adj.clone();
    for (alpha, s) in first.singular_values.iter().enumerate() {
        w.row_mut(alpha).scale_mut(*s);
    }

    // Z[b, α + M_A·j] = W[α, b + d_B·j]
    let z = ComplexMatrix::from_fn(db, ma * k0, |b, col| {
        let (alpha, j) = (col % ma, col / ma);
        w[(alpha, b + db * j)]
    });
    let second = linalg::svd_truncated(&z, max_bond, rel_tol)?;
    let mb = second.rank();
    let projected = second.left_vectors.adjoint() * &z;

    // R[α·M_B + β, j] = (U_B† Z)[β, α + M_A·j]
    let root = ComplexMatrix::from_fn(ma * mb, k0, |row, j| {
        let (alpha, beta) = (row / mb, row % mb);
        projected[(beta, alpha + ma * j)]
    });
    Ok(TreeTensorOperator {
        branch_left: first.left_vectors,
        branch_right: second.left_vectors,
        root,
        bipartition,
        local_dim: x.local_dim(),
        discarded_weight: first.discarded_weight + second.discarded_weight,
        split_multiplet: first.split_multiplet || second.split_multiplet,
    })
}

/// Squared Schmidt coefficients (unnormalized) of a vector laid out as
/// `rows × cols` with row-major index `r·cols + c`.
pub(crate) fn schmidt_weights(column: &[Complex64], rows: usize, cols: usize) -> Vec<f64> {
    debug_assert_eq!(column.len(), rows * cols);
    // column-major (cols × rows) view is the transpose, same spectrum
    if rows.min(cols) >= GRAM_MIN_DIM {
        return linalg::gram_spectrum(column, cols, rows);
    }
    let m = ComplexMatrix::from_column_slice(cols, rows, column);
    linalg::singular_values(&m).into_iter().map(|s| s * s).collect()
}

fn xlogx_sum(weights: &[f64], total: f64) -> f64 {
    let largest = weights.iter().copied().fold(0.0, f64::max);
    let floor = largest * ENTROPY_CUTOFF * ENTROPY_CUTOFF;
    weights
        .iter()
        .filter(|&&w| w > floor && w > 0.0)
        .map(|&w| -w * (w / total).log2())
        .sum()
}

/// Returns `(p, p·S)` for an unnormalized column reshaped to `rows × cols`,
/// with `S` the entanglement entropy of the normalized column in bits.
pub(crate) fn weighted_entropy(column: &[Complex64], rows: usize, cols: usize) -> (f64, f64) {
    let p: f64 = column.iter().map(|z| z.norm_sqr()).sum();
    if p <= NEGLIGIBLE_WEIGHT || rows == 1 || cols == 1 {
        return (p, 0.0);
    }
    if rows == 2 || cols == 2 {
        let (l1, l2) = two_level_weights(column, rows, cols);
        return (p, xlogx_sum(&[l1, l2], p).max(0.0));
    }
    if rows == 3 || cols == 3 {
        return (p, xlogx_sum(&three_level_weights(column, rows, cols), p).max(0.0));
    }
    let weights = schmidt_weights(column, rows, cols);
    (p, xlogx_sum(&weights, p).max(0.0))
}

/// Eigenvalues of the 3×3 reduced Gram matrix, largest first.
///
/// The top eigenvalue comes from the trigonometric root of the
/// characteristic cubic; the other two from the remaining invariants, which
/// keeps tiny eigenvalues accurate near rank one.
fn three_level_weights(c: &[Complex64], rows: usize, cols: usize) -> [f64; 3] {
    let mut g = [[Complex64::new(0.0, 0.0); 3]; 3];
    let (n, stride, step) = if rows == 3 { (cols, cols, 1) } else { (rows, 1, 3) };
    for k in 0..n {
        let base = k * step;
        let v = [c[base], c[base + stride], c[base + 2 * stride]];
        for i in 0..3 {
            for j in i..3 {
                g[i][j] += v[i] * v[j].conj();
            }
        }
    }
    let (a, b, d) = (g[0][0].re, g[1][1].re, g[2][2].re);
    let (x, y, z) = (g[0][1], g[0][2], g[1][2]);
    let q = (a + b + d) / 3.0;
    let p2 = (a - q).powi(2) + (b - q).powi(2) + (d - q).powi(2) + 2.0 * (x.norm_sqr() + y.norm_sqr() + z.norm_sqr());
    if p2 <= f64::EPSILON * f64::EPSILON * q * q {
        return [q, q, q];
    }
    let p = (p2 / 6.0).sqrt();
    let (ba, bb, bd) = ((a - q) / p, (b - q) / p, (d - q) / p);
    let (bx, by, bz) = (x / p, y / p, z / p);
    let r = 0.5 * (ba * bb * bd + 2.0 * (bx * bz * by.conj()).re - ba * bz.norm_sqr() - bb * by.norm_sqr() - bd * bx.norm_sqr());
    let l1 = q + 2.0 * p * (r.clamp(-1.0, 1.0).acos() / 3.0).cos();
    let minors = ((a * b - x.norm_sqr()) + (a * d - y.norm_sqr()) + (b * d - z.norm_sqr())).max(0.0);
    let det = (a * b * d + 2.0 * (x * z * y.conj()).re - a * z.norm_sqr() - b * y.norm_sqr() - d * x.norm_sqr()).max(0.0);
    // λ₂λ₃ = det/λ₁ and λ₂ + λ₃ = (c₁ − λ₂λ₃)/λ₁
    let prod = det / l1;
    let sum = ((minors - prod) / l1).max(0.0);
    let l2 = 0.5 * (sum + (sum * sum - 4.0 * prod).max(0.0).sqrt());
    let l3 = if l2 > 0.0 { prod / l2 } else { 0.0 };
    [l1, l2, l3]
}

/// Eigenvalues of the 2×2 reduced Gram matrix, larger first.
fn two_level_weights(c: &[Complex64], rows: usize, cols: usize) -> (f64, f64) {
    if rows == 2 && cols == 2 {
        let trace: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        let det = (c[0] * c[3] - c[1] * c[2]).norm_sqr();
        let disc = (trace * trace - 4.0 * det).max(0.0).sqrt();
        let big = 0.5 * (trace + disc);
        let small = if big > 0.0 { det / big } else { 0.0 };
        return (big, small);
    }
    let (mut g00, mut g11, mut g01) = (0.0, 0.0, Complex64::new(0.0, 0.0));
    if cols == 2 {
        for r in 0..rows {
            let (x, y) = (c[2 * r], c[2 * r + 1]);
            g00 += x.norm_sqr();
            g11 += y.norm_sqr();
            g01 += x * y.conj();
        }
    } else {
        for k in 0..cols {
            let (x, y) = (c[k], c[cols + k]);
            g00 += x.norm_sqr();
            g11 += y.norm_sqr();
            g01 += x * y.conj();
        }
    }
    let trace = g00 + g11;
    let det = (g00 * g11 - g01.norm_sqr()).max(0.0);
    let disc = ((g00 - g11).powi(2) + 4.0 * g01.norm_sqr()).sqrt();
    let big = 0.5 * (trace + disc);
    let small = if big > 0.0 { det / big } else { 0.0 };
    (big, small)
}

/// Von Neumann entropy (bits) of a normalized distribution.
pub fn entropy_bits(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Half-chain entanglement entropy of a pure state, in bits.
pub fn entanglement_entropy(state: &[Complex64], bipartition: Bipartition, local_dim: usize) -> Result<f64> {
    let (da, db) = bipartition.dims(local_dim);
    if state.len() != da * db {
        return invalid(format!("state has length {}, expected {}", state.len(), da * db));
    }
    let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > linalg::DECOMPOSITION_TOL {
        return invalid(format!("state is not normalized (|ψ|² = {norm})"));
    }
    let weights = schmidt_weights(state, da, db);
    Ok(xlogx_sum(&weights, norm).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    /// Bits.
    pub von_neumann: f64,
    /// `(α, S_α)` in bits, in the order requested.
    pub renyi: Vec<(f64, f64)>,
    pub purity: f64,
}

impl EntropyReport {
    pub fn renyi(&self, alpha: f64) -> Option<f64> {
        self.renyi.iter().find(|(a, _)| *a == alpha).map(|(_, s)| *s)
    }
}

pub fn spectrum_entropies(probabilities: &[f64], alphas: &[f64]) -> Result<EntropyReport> {
    if probabilities.is_empty() {
        return invalid("empty distribution");
    }
    if let Some(p) = probabilities.iter().find(|&&p| p < -1e-12 || !p.is_finite()) {
        return invalid(format!("probability {p} is negative"));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > linalg::DECOMPOSITION_TOL {
        return invalid(format!("probabilities sum to {total}"));
    }
    let p: Vec<f64> = probabilities.iter().map(|&x| x.max(0.0)).collect();
    let von_neumann = entropy_bits(&p);
    let renyi = alphas
        .iter()
        .map(|&alpha| {
            let s = if alpha == 1.0 {
                von_neumann
            } else if alpha.is_infinite() {
                -p.iter().copied().fold(0.0, f64::max).log2()
            } else {
                let sum: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(alpha)).sum();
                sum.log2() / (1.0 - alpha)
            };
            (alpha, s)
        })
        .collect();
    Ok(EntropyReport { von_neumann, renyi, purity: p.iter().map(|x| x * x).sum() })
}

/// `(p_j, S_j)` for every Kraus column of the root.
pub fn root_column_entropies(tto: &TreeTensorOperator) -> Vec<(f64, f64)> {
    let (ma, mb) = tto.root_shape();
    tto.root
        .column_iter()
        .map(|col| {
            let (p, ps) = weighted_entropy(col.as_slice(), ma, mb);
            (p, if p > NEGLIGIBLE_WEIGHT { ps / p } else { 0.0 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> Vec<Complex64> {
        vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]
    }

    fn ghz(n: usize) -> Vec<Complex64> {
        let mut v = vec![c(0.0); 1 << n];
        v[0] = c(FRAC_1_SQRT_2);
        v[(1 << n) - 1] = c(FRAC_1_SQRT_2);
        v
    }

    #[test]
    fn product_state_compresses_to_a_scalar_root() {
        let mut v = vec![c(0.0); 16];
        v[0] = c(1.0);
        let x = PurificationFactor::new(ComplexMatrix::from_column_slice(16, 1, &v), 4, 2).unwrap();
        for m in [1, 2, 4, 16] {
            let t = compress_to_root(&x, Bipartition::half(4), m).unwrap();
            assert_eq!(t.root_shape(), (1, 1));
            assert_eq!(t.root.shape(), (1, 1));
            assert_abs_diff_eq!(t.root[(0, 0)].norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn bell_root_has_flat_schmidt_spectrum() {
        let x = PurificationFactor::new(ComplexMatrix::from_column_slice(4, 1, &bell()), 2, 2).unwrap();
        let t = compress_to_root(&x, Bipartition::half(2), 2).unwrap();
        assert_eq!(t.root_shape(), (2, 2));
        let w = schmidt_weights(t.root.column(0).as_slice(), 2, 2);
        let s: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
        assert_abs_diff_eq!(s[0], FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(s[1], FRAC_1_SQRT_2, epsilon = 1e-12);
        let e = root_column_entropies(&t);
        assert_eq!(e.len(), 1);
        assert_abs_diff_eq!(e[0].0, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e[0].1, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn inconsistent_bipartition_is_rejected() {
        let x = PurificationFactor::new(ComplexMatrix::from_column_slice(4, 1, &bell()), 2, 2).unwrap();
        assert!(compress_to_root(&x, Bipartition::new(1, 2), 2).is_err());
        assert!(compress_to_root(&x, Bipartition::new(0, 2), 2).is_err());
        assert!(compress_to_root(&x, Bipartition::half(2), 0).is_err());
    }

    #[test]
    fn factor_validation() {
        let bad = ComplexMatrix::from_column_slice(4, 1, &[c(1.0), c(1.0), c(0.0), c(0.0)]);
        assert!(PurificationFactor::new(bad.clone(), 2, 2).is_err());
        assert!(PurificationFactor::normalized(bad, 2, 2).is_ok());
        let wrong_rows = ComplexMatrix::from_column_slice(3, 1, &[c(1.0), c(0.0), c(0.0)]);
        assert!(PurificationFactor::new(wrong_rows, 2, 2).is_err());
    }

    #[test]
    fn pure_state_entropies() {
        let mut prod = vec![c(0.0); 4];
        prod[0] = c(1.0);
        assert_abs_diff_eq!(entanglement_entropy(&prod, Bipartition::half(2), 2).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(entanglement_entropy(&bell(), Bipartition::half(2), 2).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(entanglement_entropy(&ghz(6), Bipartition::half(6), 2).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn entanglement_entropy_rejects_unnormalized() {
        let v = vec![c(1.0), c(0.0), c(0.0), c(1.0)];
        assert!(entanglement_entropy(&v, Bipartition::half(2), 2).is_err());
    }

    #[test]
    fn gram_path_matches_svd() {
        let svd_entropy = |col: &[Complex64], rows: usize, cols: usize| {
            let m = ComplexMatrix::from_column_slice(cols, rows, col);
            let w: Vec<f64> = linalg::singular_values(&m).into_iter().map(|s| s * s).collect();
            let p: f64 = w.iter().sum();
            xlogx_sum(&w, p)
        };
        for (rows, cols, seed) in [(24, 24, 1), (32, 40, 2), (64, 64, 3), (50, 30, 4)] {
            let g = linalg::ginibre_matrix(rows * cols, 1, seed);
            let col: Vec<Complex64> = g.unscale(g.norm()).iter().copied().collect();
            let (_, ps) = weighted_entropy(&col, rows, cols);
            assert_abs_diff_eq!(ps, svd_entropy(&col, rows, cols), epsilon = 1e-11);
        }
        // nearly a product state: one dominant Schmidt weight
        let (rows, cols) = (32, 32);
        let a = linalg::ginibre_matrix(rows, 1, 5);
        let b = linalg::ginibre_matrix(cols, 1, 6);
        let noise = linalg::ginibre_matrix(rows * cols, 1, 7);
        let mut col: Vec<Complex64> = (0..rows * cols).map(|i| b[i % cols] * a[i / cols] + noise[i] * 1e-7).collect();
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        col.iter_mut().for_each(|z| *z /= norm);
        let (_, ps) = weighted_entropy(&col, rows, cols);
        assert_abs_diff_eq!(ps, svd_entropy(&col, rows, cols), epsilon = 1e-11);
        let norm = (a.norm() * b.norm()).recip();
        let product: Vec<Complex64> = (0..rows * cols).map(|i| b[i % cols] * a[i / cols] * norm).collect();
        assert!(weighted_entropy(&product, rows, cols).1.abs() < 1e-12);
    }

    #[test]
    fn three_level_path_matches_svd() {
        for (rows, cols) in [(3, 3), (3, 5), (4, 3), (3, 2 * 3)] {
            for seed in 0..20 {
                let v = linalg::ginibre_matrix(rows * cols, 1, seed);
                let mut w = three_level_weights(v.as_slice(), rows, cols).to_vec();
                let mut s = schmidt_weights(v.as_slice(), rows, cols);
                s.truncate(3);
                w.sort_by(|a, b| b.total_cmp(a));
                for (a, b) in w.iter().zip(&s) {
                    assert!((a - b).abs() <= 1e-12 * s[0], "{rows}x{cols}: {w:?} vs {s:?}");
                }
            }
        }
        // near rank one, where the cubic formula alone loses precision
        let mut near = linalg::ginibre_matrix(9, 1, 77).scale(1e-6);
        near[4] += Complex64::new(1.0, 0.0);
        let svd_path = xlogx_sum(&schmidt_weights(near.as_slice(), 3, 3), near.norm_squared());
        assert!((weighted_entropy(near.as_slice(), 3, 3).1 - svd_path).abs() < 1e-13);
        // rank one and rank two inputs
        let mut prod = vec![Complex64::new(0.0, 0.0); 9];
        prod[4] = Complex64::new(1.0, 0.0);
        assert_eq!(weighted_entropy(&prod, 3, 3).1, 0.0);
        let mut bell = vec![Complex64::new(0.0, 0.0); 9];
        bell[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        bell[4] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert!((weighted_entropy(&bell, 3, 3).1 - 1.0).abs() < 1e-14);
        let max: Vec<Complex64> = (0..9).map(|i| Complex64::new(if i % 4 == 0 { 1.0 / 3f64.sqrt() } else { 0.0 }, 0.0)).collect();
        assert!((weighted_entropy(&max, 3, 3).1 - 3f64.log2()).abs() < 1e-13);
    }

    #[test]
    fn two_level_shortcut_matches_svd() {
        let g = linalg::ginibre_matrix(2 * 5, 1, 31);
        let col = g.as_slice();
        for (rows, cols) in [(2, 5), (5, 2)] {
            let mut fast = two_level_weights(col, rows, cols);
            if fast.0 < fast.1 {
                fast = (fast.1, fast.0);
            }
            let svd = schmidt_weights(col, rows, cols);
            assert_abs_diff_eq!(fast.0, svd[0], epsilon = 1e-12);
            assert_abs_diff_eq!(fast.1, svd[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn spectrum_entropy_cases() {
        let pure = spectrum_entropies(&[1.0], &[2.0]).unwrap();
        assert_eq!(pure.von_neumann, 0.0);
        assert_eq!(pure.purity, 1.0);
        let uniform = spectrum_entropies(&[0.125; 8], &[0.5, 2.0, f64::INFINITY]).unwrap();
        assert_abs_diff_eq!(uniform.von_neumann, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(uniform.purity, 0.125, epsilon = 1e-15);
        for (_, s) in &uniform.renyi {
            assert_abs_diff_eq!(*s, 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn renyi_brackets_von_neumann_near_one() {
        let raw = [0.31, 0.07, 0.22, 0.15, 0.2, 0.05];
        let total: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let r = spectrum_entropies(&p, &[1.0 - 1e-4, 1.0 + 1e-4]).unwrap();
        let (below, above) = (r.renyi[0].1, r.renyi[1].1);
        assert!(below >= r.von_neumann && r.von_neumann >= above);
        assert!((below - r.von_neumann).abs() < 1e-3 && (above - r.von_neumann).abs() < 1e-3);
    }

    #[test]
    fn spectrum_rejects_negative_and_unnormalized() {
        assert!(spectrum_entropies(&[1.1, -0.1], &[]).is_err());
        assert!(spectrum_entropies(&[0.5, 0.4], &[]).is_err());
        assert!(spectrum_entropies(&[1.0 + 1e-13, -1e-13], &[]).is_ok());
    }
}
