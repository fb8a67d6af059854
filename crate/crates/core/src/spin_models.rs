//! Periodic spin-½ chains and their truncated thermal purifications.
//!
//! Site 1 is the most significant bit of the basis index and bit value 0 is
//! spin up (`σᶻ = +1`).

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::tto::PurificationFactor;

/// Spin-½ only.
pub const LOCAL_DIM: usize = 2;
/// Largest chain for which the full dense Hamiltonian is materialized.
pub const MAX_DENSE_SITES: usize = 12;
/// Largest chain handled by sector-blocked diagonalization.
pub const MAX_ED_SITES: usize = 14;
/// Absolute energy window for treating levels as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// `Σ σˣσˣ + h σᶻ`.
    Ising { field: f64 },
    /// `Σ σˣσˣ + σʸσʸ + ξ σᶻσᶻ`.
    Xxz { anisotropy: f64 },
}

/// Chain Hamiltonian with `J = 1` and periodic boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub sites: usize,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, sites: usize) -> Result<Self> {
        if sites < 2 {
            return invalid("a periodic chain needs at least 2 sites");
        }
        let p = match kind {
            ModelKind::Ising { field } => field,
            ModelKind::Xxz { anisotropy } => anisotropy,
        };
        if !p.is_finite() {
            return invalid("model parameter must be finite");
        }
        Ok(Self { kind, sites })
    }

    pub fn ising(sites: usize, field: f64) -> Result<Self> {
        Self::new(ModelKind::Ising { field }, sites)
    }

    pub fn xxz(sites: usize, anisotropy: f64) -> Result<Self> {
        Self::new(ModelKind::Xxz { anisotropy }, sites)
    }

    pub fn local_dim(&self) -> usize {
        LOCAL_DIM
    }

    pub fn dim(&self) -> usize {
        1usize << self.sites
    }

    /// Central charge of the critical point this model sits at (if any).
    pub fn central_charge(&self) -> f64 {
        match self.kind {
            ModelKind::Ising { .. } => 0.5,
            ModelKind::Xxz { .. } => 1.0,
        }
    }

    pub fn tag(&self) -> String {
        match self.kind {
            ModelKind::Ising { field } => format!("ising(h={field})"),
            ModelKind::Xxz { anisotropy } => format!("xxz(xi={anisotropy})"),
        }
    }

    fn bit(&self, state: usize, site: usize) -> usize {
        (state >> (self.sites - 1 - site)) & 1
    }

    fn pair_mask(&self, site: usize) -> usize {
        let next = (site + 1) % self.sites;
        (1 << (self.sites - 1 - site)) | (1 << (self.sites - 1 - next))
    }

    /// Diagonal element and off-diagonal `(target, amplitude)` couplings of
    /// `H|state⟩`; repeated targets must be summed.
    fn action(&self, state: usize, mut off: impl FnMut(usize, f64)) -> f64 {
        let n = self.sites;
        let mut diag = 0.0;
        match self.kind {
            ModelKind::Ising { field } => {
                for j in 0..n {
                    diag += field * if self.bit(state, j) == 0 { 1.0 } else { -1.0 };
                    off(state ^ self.pair_mask(j), 1.0);
                }
            }
            ModelKind::Xxz { anisotropy } => {
                for j in 0..n {
                    let aligned = self.bit(state, j) == self.bit(state, (j + 1) % n);
                    if aligned {
                        diag += anisotropy;
                    } else {
                        diag -= anisotropy;
                        off(state ^ self.pair_mask(j), 2.0);
                    }
                }
            }
        }
        diag
    }
}

/// Dense Hamiltonian, `2^N × 2^N`.
pub fn build_hamiltonian(spec: &ModelSpec) -> Result<ComplexMatrix> {
    if spec.sites > MAX_DENSE_SITES {
        return Err(Error::Capacity(format!(
            "dense Hamiltonian for N = {} exceeds the N <= {MAX_DENSE_SITES} limit",
            spec.sites
        )));
    }
    let dim = spec.dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for s in 0..dim {
        let d = spec.action(s, |t, amp| h[(t, s)] += Complex64::new(amp, 0.0));
        h[(s, s)] += Complex64::new(d, 0.0);
    }
    Ok(h)
}

/// Lowest eigenpairs of a chain.
#[derive(Debug, Clone)]
pub struct SpectrumSlice {
    /// Ascending.
    pub energies: Vec<f64>,
    /// `dim × k`, orthonormal columns.
    pub states: ComplexMatrix,
}

impl SpectrumSlice {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn gap(&self) -> Option<f64> {
        finite_size_gap(self).ok()
    }
}

/// Groups basis states connected by non-zero couplings.
fn connected_sectors(dim: usize, mut neighbours: impl FnMut(usize, &mut Vec<usize>)) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut buf = Vec::new();
    for s in 0..dim {
        buf.clear();
        neighbours(s, &mut buf);
        for &t in &buf {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = vec![usize::MAX; dim];
    let mut sectors: Vec<Vec<usize>> = Vec::new();
    for s in 0..dim {
        let root = find(&mut parent, s);
        if label[root] == usize::MAX {
            label[root] = sectors.len();
            sectors.push(Vec::new());
        }
        sectors[label[root]].push(s);
    }
    sectors
}

fn merge_sectors(
    dim: usize,
    sectors: &[Vec<usize>],
    block: impl Fn(&[usize]) -> ComplexMatrix,
    k: usize,
) -> Result<SpectrumSlice> {
    let mut pool: Vec<(f64, usize, usize)> = Vec::new();
    let mut vectors = Vec::with_capacity(sectors.len());
    for (b, sector) in sectors.iter().enumerate() {
        let eig = linalg::eigh(&block(sector))?;
        pool.extend(eig.eigenvalues.iter().enumerate().map(|(i, &e)| (e, b, i)));
        vectors.push(eig.eigenvectors);
    }
    pool.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    pool.truncate(k);
    let mut states = ComplexMatrix::zeros(dim, pool.len());
    for (col, &(_, b, i)) in pool.iter().enumerate() {
        for (local, &global) in sectors[b].iter().enumerate() {
            states[(global, col)] = vectors[b][(local, i)];
        }
    }
    Ok(SpectrumSlice { energies: pool.iter().map(|p| p.0).collect(), states })
}

/// `k` lowest eigenpairs of a dense Hermitian matrix.
///
/// The matrix is split into the sectors left invariant by its sparsity
/// pattern before diagonalizing, which is exact and much cheaper for
/// Hamiltonians with a conserved quantity.
pub fn low_spectrum(h: &ComplexMatrix, k: usize) -> Result<SpectrumSlice> {
    linalg::check_hermitian(h)?;
    let dim = h.nrows();
    if k == 0 || k > dim {
        return invalid(format!("cannot take {k} eigenpairs of a {dim}-dimensional matrix"));
    }
    let sectors = connected_sectors(dim, |s, out| {
        out.extend((0..dim).filter(|&t| t != s && h[(t, s)] != linalg::ZERO));
    });
    merge_sectors(dim, &sectors, |sector| ComplexMatrix::from_fn(sector.len(), sector.len(), |i, j| h[(sector[i], sector[j])]), k)
}

/// `k` lowest eigenpairs of a chain, assembled sector by sector without
/// forming the full Hamiltonian.
pub fn model_spectrum(spec: &ModelSpec, k: usize) -> Result<SpectrumSlice> {
    if spec.sites > MAX_ED_SITES {
        return Err(Error::Capacity(format!(
            "exact diagonalization for N = {} exceeds the N <= {MAX_ED_SITES} limit",
            spec.sites
        )));
    }
    let dim = spec.dim();
    if k == 0 || k > dim {
        return invalid(format!("cannot take {k} eigenpairs of a {dim}-dimensional space"));
    }
    let sectors = connected_sectors(dim, |s, out| {
        spec.action(s, |t, _| out.push(t));
    });
    let mut position = vec![0usize; dim];
    for sector in &sectors {
        for (i, &s) in sector.iter().enumerate() {
            position[s] = i;
        }
    }
    merge_sectors(
        dim,
        &sectors,
        |sector| {
            let n = sector.len();
            let mut m = ComplexMatrix::zeros(n, n);
            for (j, &s) in sector.iter().enumerate() {
                let d = spec.action(s, |t, amp| m[(position[t], j)] += Complex64::new(amp, 0.0));
                m[(j, j)] += Complex64::new(d, 0.0);
            }
            m
        },
        k,
    )
}

/// `E₁ − E₀`.
pub fn finite_size_gap(slice: &SpectrumSlice) -> Result<f64> {
    if slice.energies.len() < 2 {
        return invalid("the gap needs at least two energies");
    }
    Ok((slice.energies[1] - slice.energies[0]).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    pub model: ModelSpec,
    /// Units of `J/k_B`.
    pub temperature: f64,
    /// Requested number of retained eigenstates.
    pub k0: usize,
}

/// Boltzmann weights `e^{−(E_j−E_0)/T}`, not normalized.
pub fn boltzmann_weights(energies: &[f64], temperature: f64) -> Vec<f64> {
    let e0 = energies.first().copied().unwrap_or(0.0);
    energies.iter().map(|e| (-(e - e0) / temperature).exp()).collect()
}

/// Widens `k0` so the cut does not split a degenerate level.
pub fn retained_count(energies: &[f64], k0: usize) -> usize {
    let mut k = k0.min(energies.len());
    while k > 0 && k < energies.len() && (energies[k] - energies[k - 1]).abs() <= DEGENERACY_TOL * energies[k].abs().max(1.0) {
        k += 1;
    }
    k
}

/// Smallest `K0` retaining at least `weight` of the Boltzmann mass, at least
/// `min_k0`, capped at `max_k0`, then widened over degenerate levels.
pub fn kraus_dimension_for_weight(energies: &[f64], temperature: f64, weight: f64, min_k0: usize, max_k0: usize) -> usize {
    let w = boltzmann_weights(energies, temperature);
    let total: f64 = w.iter().sum();
    let mut acc = 0.0;
    let mut k = 0;
    for x in &w {
        acc += x;
        k += 1;
        if acc >= weight * total {
            break;
        }
    }
    retained_count(energies, k.max(min_k0).min(max_k0))
}

/// Columns `√(e^{−E_j/T}/Z)·|ψ_j⟩` over the retained states, with `Z` summed
/// over those states only.
pub fn thermal_from_spectrum(slice: &SpectrumSlice, sites: usize, temperature: f64, k0: usize) -> Result<PurificationFactor> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return invalid(format!("temperature must be positive, got {temperature}"));
    }
    if k0 == 0 || k0 > slice.len() {
        return invalid(format!("K0 = {k0} outside 1..={}", slice.len()));
    }
    let k = retained_count(&slice.energies, k0);
    let weights = boltzmann_weights(&slice.energies[..k], temperature);
    let z: f64 = weights.iter().sum();
    let mut x = slice.states.columns(0, k).into_owned();
    for (j, w) in weights.iter().enumerate() {
        x.column_mut(j).scale_mut((w / z).sqrt());
    }
    PurificationFactor::new(x, sites, LOCAL_DIM)
}

pub fn thermal_purification(spec: &ThermalSpec) -> Result<PurificationFactor> {
    if !(spec.temperature > 0.0) {
        return invalid(format!("temperature must be positive, got {}", spec.temperature));
    }
    let dim = spec.model.dim();
    if spec.k0 == 0 || spec.k0 > dim {
        return invalid(format!("K0 = {} outside 1..={dim}", spec.k0));
    }
    let slice = model_spectrum(&spec.model, (spec.k0 + 16).min(dim))?;
    thermal_from_spectrum(&slice, spec.model.sites, spec.temperature, spec.k0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn full_eigenvalues(spec: &ModelSpec) -> Vec<f64> {
        let h = build_hamiltonian(spec).unwrap();
        linalg::eigh(&h).unwrap().eigenvalues
    }

    #[test]
    fn two_site_ising_double_counts_the_bond() {
        let e = full_eigenvalues(&ModelSpec::ising(2, 0.0).unwrap());
        for (x, y) in e.iter().zip([-2.0, -2.0, 2.0, 2.0]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_site_xxz_spectrum() {
        let e = full_eigenvalues(&ModelSpec::xxz(2, 0.5).unwrap());
        for (x, y) in e.iter().zip([-5.0, 1.0, 1.0, 3.0]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn hamiltonians_are_exactly_hermitian() {
        for spec in [ModelSpec::ising(6, 0.7).unwrap(), ModelSpec::xxz(6, -0.3).unwrap()] {
            let h = build_hamiltonian(&spec).unwrap();
            assert_eq!(linalg::hermiticity_defect(&h), 0.0);
        }
    }

    #[test]
    fn translation_symmetry() {
        for spec in [ModelSpec::ising(8, 1.0).unwrap(), ModelSpec::xxz(7, 0.5).unwrap()] {
            let dim = spec.dim();
            let n = spec.sites;
            // cyclic shift of sites: new bit at site j+1 equals old bit at site j
            let mut t = ComplexMatrix::zeros(dim, dim);
            for s in 0..dim {
                let shifted = ((s >> 1) | ((s & 1) << (n - 1))) & (dim - 1);
                t[(shifted, s)] = linalg::ONE;
            }
            let h = build_hamiltonian(&spec).unwrap();
            let comm = &h * &t - &t * &h;
            assert!(comm.norm() <= 1e-8);
        }
    }

    #[test]
    fn dense_capacity_limit() {
        let spec = ModelSpec::ising(MAX_DENSE_SITES + 1, 1.0).unwrap();
        assert!(matches!(build_hamiltonian(&spec), Err(Error::Capacity(_))));
        let spec = ModelSpec::ising(MAX_ED_SITES + 1, 1.0).unwrap();
        assert!(matches!(model_spectrum(&spec, 1), Err(Error::Capacity(_))));
        assert!(ModelSpec::ising(1, 1.0).is_err());
    }

    #[test]
    fn low_spectrum_cases() {
        let spec = ModelSpec::ising(2, 0.0).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let s = low_spectrum(&h, 2).unwrap();
        assert_abs_diff_eq!(s.energies[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.energies[1], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(finite_size_gap(&s).unwrap(), 0.0, epsilon = 1e-12);

        let spec = ModelSpec::xxz(6, 0.5).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let all = low_spectrum(&h, spec.dim()).unwrap();
        let tr: f64 = (0..spec.dim()).map(|i| h[(i, i)].re).sum();
        assert_abs_diff_eq!(all.energies.iter().sum::<f64>(), tr, epsilon = 1e-8);
        assert!(linalg::isometry_defect(&all.states) <= 1e-10);
        assert!(low_spectrum(&h, 0).is_err());
        assert!(low_spectrum(&h, spec.dim() + 1).is_err());
    }

    #[test]
    fn sector_blocking_matches_dense() {
        for spec in [ModelSpec::ising(8, 0.6).unwrap(), ModelSpec::xxz(8, 0.5).unwrap()] {
            let dense = full_eigenvalues(&spec);
            let blocked = model_spectrum(&spec, 20).unwrap();
            for (a, b) in dense.iter().zip(&blocked.energies) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
            }
            let h = build_hamiltonian(&spec).unwrap();
            let hv = &h * &blocked.states;
            for j in 0..blocked.len() {
                let r = hv.column(j) - blocked.states.column(j) * Complex64::new(blocked.energies[j], 0.0);
                assert!(r.norm() <= 1e-10 * h.norm());
            }
        }
    }

    /// Ground energy of the periodic chain from its free-fermion solution:
    /// the chain maps to the ferromagnetic transverse-field Ising model whose
    /// ground state lies in the even-parity sector with antiperiodic modes.
    fn free_fermion_ground_energy(n: usize, h: f64) -> f64 {
        (0..n)
            .map(|m| {
                let k = PI * (2 * m + 1) as f64 / n as f64;
                -(1.0 + h * h - 2.0 * h * k.cos()).sqrt()
            })
            .sum()
    }

    #[test]
    fn ising_ground_energy_matches_free_fermions() {
        for (n, h) in [(8, 1.0), (8, 0.4), (6, 1.7)] {
            let spec = ModelSpec::ising(n, h).unwrap();
            let s = model_spectrum(&spec, 1).unwrap();
            assert_abs_diff_eq!(s.energies[0], free_fermion_ground_energy(n, h), epsilon = 1e-9);
        }
    }

    #[test]
    fn critical_gap_closes_as_inverse_size() {
        let gap = |n| finite_size_gap(&model_spectrum(&ModelSpec::ising(n, 1.0).unwrap(), 2).unwrap()).unwrap();
        let ratio = gap(12) / gap(6);
        assert!((ratio - 0.5).abs() <= 0.05, "ratio {ratio}");
    }

    #[test]
    fn single_state_thermal_factor_is_the_ground_state() {
        let model = ModelSpec::ising(6, 1.0).unwrap();
        let x = thermal_purification(&ThermalSpec { model, temperature: 0.3, k0: 1 }).unwrap();
        assert_eq!(x.kraus_dim(), 1);
        let ground = model_spectrum(&model, 1).unwrap();
        let overlap = (x.data().adjoint() * &ground.states)[(0, 0)].norm();
        assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn thermal_weights_follow_boltzmann() {
        let model = ModelSpec::ising(2, 1.0).unwrap();
        let x = thermal_purification(&ThermalSpec { model, temperature: 0.5, k0: 4 }).unwrap();
        let e = full_eigenvalues(&model);
        let z: f64 = e.iter().map(|e| (-e / 0.5).exp()).sum();
        for (p, e) in x.column_probabilities().iter().zip(&e) {
            assert_abs_diff_eq!(*p, (-e / 0.5).exp() / z, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(linalg::frobenius_sq(x.data()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn thermal_density_matrix_is_a_state() {
        let model = ModelSpec::xxz(8, 0.5).unwrap();
        let x = thermal_purification(&ThermalSpec { model, temperature: 0.7, k0: 10 }).unwrap();
        let p = x.column_probabilities();
        assert!(p.windows(2).all(|w| w[0] >= w[1] - 1e-15));
        let rho = x.density_matrix();
        let eig = linalg::eigh(&rho).unwrap();
        assert!(eig.eigenvalues[0] >= -1e-12);
        assert_abs_diff_eq!(linalg::trace(&rho).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_levels_are_kept_whole() {
        // the two-site Ising ground level is doubly degenerate
        let model = ModelSpec::ising(2, 0.0).unwrap();
        let x = thermal_purification(&ThermalSpec { model, temperature: 1.0, k0: 1 }).unwrap();
        assert_eq!(x.kraus_dim(), 2);
        assert_eq!(retained_count(&[0.0, 1.0, 1.0, 2.0], 2), 3);
        assert_eq!(retained_count(&[0.0, 1.0, 1.0, 2.0], 1), 1);
    }

    #[test]
    fn thermal_rejects_bad_temperature() {
        let model = ModelSpec::ising(4, 1.0).unwrap();
        for t in [0.0, -1.0, f64::NAN] {
            assert!(thermal_purification(&ThermalSpec { model, temperature: t, k0: 2 }).is_err());
        }
    }
}
