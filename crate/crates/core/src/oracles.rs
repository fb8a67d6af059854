//! Benchmark state families and exact entanglement-of-formation references.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng as _;

use crate::eof::{self, EofOptions, EofResult};
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, ComplexMatrix, Rng};
use crate::tto::{self, PurificationFactor};

/// Eigenvalues of `ρ` at or below this (relative to the largest) are dropped
/// when building a purification.
pub const RANK_TOL: f64 = 1e-12;
/// Tolerance of the density-matrix validity gate.
pub const STATE_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Validated density matrix over `local_dim^sites` levels, split half-half.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    data: ComplexMatrix,
    sites: usize,
    local_dim: usize,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity, each within 1e-10.
    pub fn new(data: ComplexMatrix, sites: usize, local_dim: usize) -> Result<Self> {
        linalg::check_finite(&data)?;
        let dim = local_dim.checked_pow(sites as u32).unwrap_or(0);
        if data.nrows() != dim || data.ncols() != dim || sites < 2 {
            return invalid(format!("a {}x{} matrix is not an operator on {sites} sites of dimension {local_dim}", data.nrows(), data.ncols()));
        }
        if linalg::hermiticity_defect(&data) > STATE_TOL {
            return invalid("density matrix is not Hermitian");
        }
        let tr = linalg::trace(&data);
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return invalid(format!("density matrix has trace {tr}"));
        }
        let lowest = linalg::eigh(&data)?.eigenvalues[0];
        if lowest < -STATE_TOL {
            return invalid(format!("density matrix has eigenvalue {lowest:e}"));
        }
        Ok(Self { data, sites, local_dim })
    }

    pub fn data(&self) -> &ComplexMatrix {
        &self.data
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Spectral purification `X = V·diag(√λ)` over the numerical support.
    pub fn purification(&self) -> Result<PurificationFactor> {
        let eig = linalg::eigh(&self.data)?;
        let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
        let kept: Vec<usize> = (0..self.dim()).rev().filter(|&i| eig.eigenvalues[i] > RANK_TOL * top).collect();
        let x = ComplexMatrix::from_fn(self.dim(), kept.len(), |r, j| {
            eig.eigenvectors[(r, kept[j])] * eig.eigenvalues[kept[j]].sqrt()
        });
        PurificationFactor::normalized(x, self.sites, self.local_dim)
    }

    pub fn from_factor(x: &PurificationFactor) -> Result<Self> {
        let rho = x.density_matrix();
        let rho = (&rho + rho.adjoint()).scale(0.5);
        Self::new(rho, x.sites(), x.local_dim())
    }
}

fn pauli_y_pair() -> ComplexMatrix {
    // σʸ⊗σʸ in the |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ basis
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 3)] = c(-1.0);
    m[(3, 0)] = c(-1.0);
    m[(1, 2)] = c(1.0);
    m[(2, 1)] = c(1.0);
    m
}

/// `(σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = pauli_y_pair();
    &yy * rho.conjugate() * &yy
}

fn hermitian_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = linalg::eigh(m)?;
    let n = m.nrows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        out += (v * v.adjoint()).scale(lambda.max(0.0).sqrt());
    }
    Ok(out)
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return invalid(format!("concurrence needs a 4-level state, got {}", rho.dim()));
    }
    let root = hermitian_sqrt(rho.data())?;
    let m = &root * spin_flip(rho.data()) * &root;
    let m = (&m + m.adjoint()).scale(0.5);
    let mut lambdas: Vec<f64> = linalg::eigh(&m)?.eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// `h₂(x)` in bits.
pub fn binary_entropy(x: f64) -> f64 {
    tto::entropy_bits(&[x, 1.0 - x])
}

/// Entanglement of formation from a concurrence value.
pub fn eof_from_concurrence(conc: f64) -> f64 {
    let c = conc.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

/// Exact two-qubit entanglement of formation in bits.
pub fn concurrence_eof_2qubit(rho: &DensityMatrix) -> Result<f64> {
    concurrence(rho).map(eof_from_concurrence)
}

fn check_unit(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if v.is_finite() && (lo..=hi).contains(&v) {
        Ok(())
    } else {
        invalid(format!("{name} = {v} is outside [{lo}, {hi}]"))
    }
}

/// `(|0…0⟩ ± |1…1⟩)/√2` on `sites` qubits.
pub fn ghz_state(sites: usize, plus: bool) -> Vec<Complex64> {
    let dim = 1usize << sites;
    let mut v = vec![linalg::ZERO; dim];
    v[0] = c(FRAC_1_SQRT_2);
    v[dim - 1] = c(if plus { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 });
    v
}

/// `λ|GHZ₊⟩⟨GHZ₊| + (1−λ)|GHZ₋⟩⟨GHZ₋|`; two sites give the Bell mixture.
pub fn ghz_mixture(sites: usize, lambda: f64) -> Result<PurificationFactor> {
    check_unit("lambda", lambda, 0.0, 1.0)?;
    if sites < 2 {
        return invalid("a GHZ mixture needs at least two sites");
    }
    let weights: Vec<(bool, f64)> = [(true, lambda), (false, 1.0 - lambda)].into_iter().filter(|(_, w)| *w > 0.0).collect();
    let dim = 1usize << sites;
    let mut x = ComplexMatrix::zeros(dim, weights.len());
    for (j, (plus, w)) in weights.iter().enumerate() {
        for (r, a) in ghz_state(sites, *plus).into_iter().enumerate() {
            x[(r, j)] = a * w.sqrt();
        }
    }
    PurificationFactor::new(x, sites, 2)
}

pub fn bell_mixture(lambda: f64) -> Result<DensityMatrix> {
    DensityMatrix::from_factor(&ghz_mixture(2, lambda)?)
}

/// `K0` Haar-random pure states with equal weights.
pub fn random_pure_ensemble(sites: usize, k0: usize, seed: u64) -> Result<PurificationFactor> {
    if k0 == 0 || sites < 2 {
        return invalid("need K0 >= 1 and at least two sites");
    }
    let dim = 1usize << sites;
    let mut x = ComplexMatrix::zeros(dim, k0);
    let w = (1.0 / k0 as f64).sqrt();
    for j in 0..k0 {
        let u = linalg::haar_random_unitary(dim, linalg::derive_seed(seed, j as u64))?;
        x.set_column(j, &u.column(0).scale(w));
    }
    PurificationFactor::new(x, sites, 2)
}

fn hilbert_schmidt_with_rng(dim: usize, rng: &mut Rng) -> ComplexMatrix {
    let g = linalg::ginibre_with_rng(dim, dim, rng);
    let rho = &g * g.adjoint();
    let tr = linalg::trace(&rho).re;
    rho.unscale(tr)
}

fn qubit_sites(dim: usize) -> Result<usize> {
    if dim >= 4 && dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        invalid(format!("dimension {dim} is not a multi-qubit space"))
    }
}

/// `GG†/Tr(GG†)` for a square Ginibre `G` on `dim` (a power of two) levels.
pub fn random_dm_hilbert_schmidt(dim: usize, seed: u64) -> Result<DensityMatrix> {
    let sites = qubit_sites(dim)?;
    let rho = hilbert_schmidt_with_rng(dim, &mut linalg::rng_from_seed(seed));
    DensityMatrix::new((&rho + rho.adjoint()).scale(0.5), sites, 2)
}

/// `Σᵢ pᵢ ρᵢᴬ⊗ρᵢᴮ` with 1 to 4 terms and Hilbert–Schmidt halves.
pub fn random_separable(sites: usize, seed: u64) -> Result<DensityMatrix> {
    if sites < 2 || !sites.is_multiple_of(2) {
        return invalid(format!("random separable states need an even site count, got {sites}"));
    }
    let mut rng = linalg::rng_from_seed(seed);
    let half = 1usize << (sites / 2);
    let terms = rng.gen_range(1..=4);
    let mut p: Vec<f64> = (0..terms).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    let mut rho = ComplexMatrix::zeros(half * half, half * half);
    for w in p {
        let a = hilbert_schmidt_with_rng(half, &mut rng);
        let b = hilbert_schmidt_with_rng(half, &mut rng);
        rho += linalg::kron(&a, &b).scale(w);
    }
    DensityMatrix::new((&rho + rho.adjoint()).scale(0.5), sites, 2)
}

/// Swap operator `𝔽 = Σ|ij⟩⟨ji|` on `d ⊗ d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = linalg::ONE;
        }
    }
    f
}

/// Projector onto `Σᵢ|ii⟩/√d`.
pub fn maximally_entangled_projector(d: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            p[(i * d + i, j * d + j)] = c(1.0 / d as f64);
        }
    }
    p
}

/// `U⊗U`-invariant state with `Tr(𝔽ρ) = f`.
pub fn werner_state(d: usize, f: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return invalid("Werner states need d >= 2");
    }
    check_unit("f", f, -1.0, 1.0)?;
    let df = d as f64;
    let rho = (linalg::identity(d * d).scale(df - f) + swap_operator(d).scale(df * f - 1.0)).unscale(df * (df * df - 1.0));
    DensityMatrix::new(rho, 2, d)
}

/// `U⊗U*`-invariant state with fidelity `f` to the maximally entangled state.
pub fn isotropic_state(d: usize, f: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return invalid("isotropic states need d >= 2");
    }
    check_unit("f", f, 0.0, 1.0)?;
    let df = d as f64;
    let p = maximally_entangled_projector(d);
    let rho = (linalg::identity(d * d) - &p).scale((1.0 - f) / (df * df - 1.0)) + p.scale(f);
    DensityMatrix::new(rho, 2, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetricFamily {
    Werner,
    Isotropic,
}

/// Where an exact value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Wootters formula on the two-qubit state.
    Concurrence,
    /// Closed-form result for the symmetric family at `d > 2`.
    Literature,
    /// Zero by construction (separable state).
    Construction,
    /// Entanglement entropy of a pure state.
    PureState,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Concurrence => "concurrence",
            Provenance::Literature => "literature",
            Provenance::Construction => "construction",
            Provenance::PureState => "pure-state",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReferenceCurve {
    pub values: Vec<f64>,
    pub source: Provenance,
}

fn werner_eof(f: f64) -> f64 {
    if f >= 0.0 {
        0.0
    } else {
        binary_entropy(0.5 * (1.0 - (1.0 - f * f).sqrt()))
    }
}

fn isotropic_r(d: f64, f: f64) -> f64 {
    let gamma = ((f.sqrt() + ((d - 1.0) * (1.0 - f)).max(0.0).sqrt()).powi(2) / d).min(1.0);
    binary_entropy(gamma) + (1.0 - gamma) * (d - 1.0).log2()
}

/// Convex hull of `R` on `[1/d, 1]`, evaluated at `f`.
fn isotropic_eof(d: usize, f: f64) -> f64 {
    let d = d as f64;
    if f <= 1.0 / d {
        return 0.0;
    }
    const SAMPLES: usize = 20_001;
    let lo = 1.0 / d;
    let pts: Vec<(f64, f64)> = (0..SAMPLES)
        .map(|i| {
            let x = lo + (1.0 - lo) * i as f64 / (SAMPLES - 1) as f64;
            (x, isotropic_r(d, x))
        })
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let i = hull.partition_point(|p| p.0 < f).clamp(1, hull.len() - 1);
    let (a, b) = (hull[i - 1], hull[i]);
    let t = (f - a.0) / (b.0 - a.0);
    (a.1 + t * (b.1 - a.1)).max(0.0)
}

/// Exact EoF over a grid of family parameters, for `d ∈ {2, 3}`.
pub fn reference_eof_curve(family: SymmetricFamily, d: usize, grid: &[f64]) -> Result<ReferenceCurve> {
    match d {
        2 => {
            let values = grid
                .iter()
                .map(|&f| {
                    let rho = match family {
                        SymmetricFamily::Werner => werner_state(2, f)?,
                        SymmetricFamily::Isotropic => isotropic_state(2, f)?,
                    };
                    concurrence_eof_2qubit(&rho)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ReferenceCurve { values, source: Provenance::Concurrence })
        }
        3 => {
            let values = grid
                .iter()
                .map(|&f| match family {
                    SymmetricFamily::Werner => check_unit("f", f, -1.0, 1.0).map(|_| werner_eof(f)),
                    SymmetricFamily::Isotropic => check_unit("f", f, 0.0, 1.0).map(|_| isotropic_eof(3, f)),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ReferenceCurve { values, source: Provenance::Literature })
        }
        _ => Err(Error::Unsupported(format!("no exact reference for d = {d}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    BellMixture,
    GhzMixture,
    RandomPureEnsemble,
    HilbertSchmidtRandom,
    RandomSeparable,
    Werner,
    Isotropic,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::BellMixture,
        Family::GhzMixture,
        Family::RandomPureEnsemble,
        Family::HilbertSchmidtRandom,
        Family::RandomSeparable,
        Family::Werner,
        Family::Isotropic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::BellMixture => "bell",
            Family::GhzMixture => "ghz",
            Family::RandomPureEnsemble => "random-pure",
            Family::HilbertSchmidtRandom => "hs-random",
            Family::RandomSeparable => "separable",
            Family::Werner => "werner",
            Family::Isotropic => "isotropic",
        }
    }

    pub fn parse(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// A benchmark state together with its exact EoF, when one is known.
#[derive(Debug, Clone)]
pub struct BenchmarkInstance {
    pub family: Family,
    pub parameters: Vec<(String, String)>,
    pub factor: PurificationFactor,
    pub exact_eof: Option<f64>,
    pub exact_source: Option<Provenance>,
}

impl BenchmarkInstance {
    fn with_exact(family: Family, parameters: Vec<(String, String)>, factor: PurificationFactor, exact: Option<(f64, Provenance)>) -> Self {
        Self { family, parameters, factor, exact_eof: exact.map(|e| e.0), exact_source: exact.map(|e| e.1) }
    }

    fn two_qubit_exact(factor: &PurificationFactor) -> Result<Option<(f64, Provenance)>> {
        if factor.dim() != 4 {
            return Ok(None);
        }
        Ok(Some((concurrence_eof_2qubit(&DensityMatrix::from_factor(factor)?)?, Provenance::Concurrence)))
    }

    pub fn ghz(sites: usize, lambda: f64) -> Result<Self> {
        let factor = ghz_mixture(sites, lambda)?;
        let exact = concurrence_eof_2qubit(&bell_mixture(lambda)?)?;
        let family = if sites == 2 { Family::BellMixture } else { Family::GhzMixture };
        let params = vec![("N".into(), sites.to_string()), ("lambda".into(), lambda.to_string())];
        Ok(Self::with_exact(family, params, factor, Some((exact, Provenance::Concurrence))))
    }

    pub fn bell(lambda: f64) -> Result<Self> {
        Self::ghz(2, lambda)
    }

    pub fn random_pure(sites: usize, k0: usize, seed: u64) -> Result<Self> {
        let factor = random_pure_ensemble(sites, k0, seed)?;
        let exact = if k0 == 1 {
            let s = tto::entanglement_entropy(factor.data().as_slice(), tto::Bipartition::half(sites), 2)?;
            Some((s, Provenance::PureState))
        } else {
            Self::two_qubit_exact(&factor)?
        };
        let params = vec![("N".into(), sites.to_string()), ("K0".into(), k0.to_string()), ("seed".into(), seed.to_string())];
        Ok(Self::with_exact(Family::RandomPureEnsemble, params, factor, exact))
    }

    pub fn hs_random(dim: usize, seed: u64) -> Result<Self> {
        let factor = random_dm_hilbert_schmidt(dim, seed)?.purification()?;
        let exact = Self::two_qubit_exact(&factor)?;
        let params = vec![("dim".into(), dim.to_string()), ("seed".into(), seed.to_string())];
        Ok(Self::with_exact(Family::HilbertSchmidtRandom, params, factor, exact))
    }

    pub fn separable(sites: usize, seed: u64) -> Result<Self> {
        let factor = random_separable(sites, seed)?.purification()?;
        let params = vec![("N".into(), sites.to_string()), ("seed".into(), seed.to_string())];
        Ok(Self::with_exact(Family::RandomSeparable, params, factor, Some((0.0, Provenance::Construction))))
    }

    pub fn symmetric(family: SymmetricFamily, d: usize, f: f64) -> Result<Self> {
        let rho = match family {
            SymmetricFamily::Werner => werner_state(d, f)?,
            SymmetricFamily::Isotropic => isotropic_state(d, f)?,
        };
        let exact = match reference_eof_curve(family, d, &[f]) {
            Ok(curve) => Some((curve.values[0], curve.source)),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        let tag = match family {
            SymmetricFamily::Werner => Family::Werner,
            SymmetricFamily::Isotropic => Family::Isotropic,
        };
        let params = vec![("d".into(), d.to_string()), ("f".into(), f.to_string())];
        Ok(Self::with_exact(tag, params, rho.purification()?, exact))
    }

    pub fn werner(d: usize, f: f64) -> Result<Self> {
        Self::symmetric(SymmetricFamily::Werner, d, f)
    }

    pub fn isotropic(d: usize, f: f64) -> Result<Self> {
        Self::symmetric(SymmetricFamily::Isotropic, d, f)
    }

    /// Runs the roof search on the full factor with `K = K0 + extra_k`.
    pub fn solve(&self, extra_k: usize, opts: &EofOptions) -> Result<EofResult> {
        eof::eof_of_factor(&self.factor, self.factor.kraus_dim() + extra_k, opts)
    }
}
