//! Convex-roof entanglement of formation.
//!
//! Every pure-state decomposition of `ρ = XX†` is `X' = X·𝒰` for a right
//! isometry `𝒰` (`K0 × K`, `𝒰𝒰† = 𝟙`). The isometry is parameterized as
//! `K0` rows of `exp(iA)` for a Hermitian `K × K` generator `A`, and the
//! ensemble-averaged entanglement entropy is minimized over the `K²` real
//! parameters of `A` by simplex direct search. The resulting value is always
//! an upper bound on the entanglement of formation.

use std::time::Instant;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::simplex::{self, SimplexOptions};
use crate::spin_models::{self, SpectrumSlice};
use crate::tto::{self, Bipartition, PurificationFactor, TreeTensorOperator, NEGLIGIBLE_WEIGHT};

/// Objective values at or below this are treated as exact zeros.
const ZERO_FLOOR: f64 = 1e-13;
/// Fresh simplices started from the last optimum within one restart.
const POLISH_ROUNDS: usize = 12;

/// Probabilities and normalized states of one decomposition.
#[derive(Debug, Clone)]
pub struct PureStateEnsemble {
    pub probabilities: Vec<f64>,
    /// One unit column per decomposition element; columns with negligible
    /// probability are left at zero.
    pub states: ComplexMatrix,
}

impl PureStateEnsemble {
    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// `Σ_j p_j |ψ_j⟩⟨ψ_j|`.
    pub fn density_matrix(&self) -> ComplexMatrix {
        let mut rho = ComplexMatrix::zeros(self.states.nrows(), self.states.nrows());
        for (j, p) in self.probabilities.iter().enumerate() {
            let col = self.states.column(j);
            rho += (col * col.adjoint()).scale(*p);
        }
        rho
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowSelection {
    /// Rows `0..K0` of `exp(iA)`.
    #[default]
    First,
    /// `K0` distinct rows drawn once from a seeded shuffle.
    Seeded(u64),
}

impl RowSelection {
    pub fn rows(&self, k0: usize, k: usize) -> Vec<usize> {
        match *self {
            RowSelection::First => (0..k0).collect(),
            RowSelection::Seeded(seed) => {
                let mut all: Vec<usize> = (0..k).collect();
                all.shuffle(&mut linalg::rng_from_seed(seed));
                let mut rows = all[..k0].to_vec();
                rows.sort_unstable();
                rows
            }
        }
    }
}

/// Point in the space of generators.
///
/// Parameter layout: the `K` diagonal entries of `A`, then `(Re, Im)` of each
/// strictly-upper entry in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchState {
    pub generator: Vec<f64>,
    pub k: usize,
    pub k0: usize,
    pub rows: RowSelection,
}

impl SearchState {
    pub fn new(generator: Vec<f64>, k0: usize, k: usize) -> Result<Self> {
        if k0 == 0 || k < k0 {
            return invalid(format!("need 1 <= K0 <= K, got K0 = {k0}, K = {k}"));
        }
        if generator.len() != k * k {
            return invalid(format!("generator has {} parameters, expected {}", generator.len(), k * k));
        }
        Ok(Self { generator, k, k0, rows: RowSelection::First })
    }

    /// `A = 0`, i.e. the input decomposition itself.
    pub fn origin(k0: usize, k: usize) -> Result<Self> {
        Self::new(vec![0.0; k * k], k0, k)
    }

    pub fn hermitian(&self) -> ComplexMatrix {
        generator_matrix(&self.generator, self.k)
    }

    /// Pads `A` with a zero row and column, so `exp(i(A⊕0)) = exp(iA)⊕1`.
    /// With `grow_rank` the Kraus dimension grows along with `K`.
    pub fn extend(&self, grow_rank: bool) -> SearchState {
        let a = self.hermitian();
        let k = self.k + 1;
        let padded = ComplexMatrix::from_fn(k, k, |i, j| if i < self.k && j < self.k { a[(i, j)] } else { linalg::ZERO });
        SearchState {
            generator: generator_params(&padded),
            k,
            k0: self.k0 + usize::from(grow_rank),
            rows: self.rows,
        }
    }
}

/// Convenience wrapper matching the warm-start step of a `K0` scan.
pub fn warm_start_extend(state: &SearchState, grow_rank: bool) -> SearchState {
    state.extend(grow_rank)
}

pub(crate) fn generator_matrix(params: &[f64], k: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        a[(i, i)] = Complex64::new(params[i], 0.0);
    }
    let mut idx = k;
    for i in 0..k {
        for j in i + 1..k {
            let z = Complex64::new(params[idx], params[idx + 1]);
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
            idx += 2;
        }
    }
    a
}

pub(crate) fn generator_params(a: &ComplexMatrix) -> Vec<f64> {
    let k = a.nrows();
    let mut p: Vec<f64> = (0..k).map(|i| a[(i, i)].re).collect();
    for i in 0..k {
        for j in i + 1..k {
            p.push(a[(i, j)].re);
            p.push(a[(i, j)].im);
        }
    }
    p
}

fn mixer_from_params(params: &[f64], k: usize, rows: &[usize]) -> ComplexMatrix {
    let a = generator_matrix(params, k);
    let eig = linalg::eigh_unchecked(&a).expect("generator is Hermitian by construction");
    linalg::phase_exponential(&eig, rows)
}

/// `𝒰`: the selected `K0` rows of `exp(iA)`.
pub fn build_mixer(state: &SearchState) -> Result<ComplexMatrix> {
    if state.generator.len() != state.k * state.k || state.k < state.k0 || state.k0 == 0 {
        return invalid("inconsistent search state");
    }
    Ok(mixer_from_params(&state.generator, state.k, &state.rows.rows(state.k0, state.k)))
}

/// New decomposition `X' = X·𝒰`, split into probabilities and unit states.
pub fn apply_mixer(factor: &ComplexMatrix, mixer: &ComplexMatrix) -> Result<PureStateEnsemble> {
    if factor.ncols() != mixer.nrows() {
        return invalid(format!(
            "factor has {} Kraus columns but the mixer has {} rows",
            factor.ncols(),
            mixer.nrows()
        ));
    }
    let mut states = factor * mixer;
    let mut probabilities = Vec::with_capacity(states.ncols());
    for mut col in states.column_iter_mut() {
        let p = col.norm_squared();
        probabilities.push(p);
        if p > NEGLIGIBLE_WEIGHT {
            col.unscale_mut(p.sqrt());
        } else {
            col.fill(linalg::ZERO);
        }
    }
    Ok(PureStateEnsemble { probabilities, states })
}

/// `Σ_j p_j S(ψ_j)` in bits, each state reshaped to `shape`.
pub fn average_entanglement(ensemble: &PureStateEnsemble, shape: (usize, usize)) -> Result<f64> {
    if shape.0 * shape.1 != ensemble.states.nrows() {
        return invalid(format!("states of length {} do not fit a {}x{} split", ensemble.states.nrows(), shape.0, shape.1));
    }
    Ok(ensemble
        .probabilities
        .iter()
        .zip(ensemble.states.column_iter())
        .filter(|(p, _)| **p > NEGLIGIBLE_WEIGHT)
        .map(|(p, col)| {
            let (norm, s) = tto::weighted_entropy(col.as_slice(), shape.0, shape.1);
            if norm > 0.0 {
                p * s / norm
            } else {
                0.0
            }
        })
        .sum())
}

/// Ensemble-averaged entanglement of the decomposition `factor·𝒰(params)`.
#[derive(Debug, Clone)]
pub struct RoofObjective<'a> {
    factor: &'a ComplexMatrix,
    shape: (usize, usize),
    k: usize,
    rows: Vec<usize>,
}

impl<'a> RoofObjective<'a> {
    pub fn new(factor: &'a ComplexMatrix, shape: (usize, usize), k: usize, rows: RowSelection) -> Result<Self> {
        linalg::check_finite(factor)?;
        let k0 = factor.ncols();
        if k < k0 {
            return invalid(format!("K = {k} is below the Kraus dimension {k0}"));
        }
        if shape.0 * shape.1 != factor.nrows() {
            return invalid(format!("a {}x{} split does not match {} rows", shape.0, shape.1, factor.nrows()));
        }
        Ok(Self { factor, shape, k, rows: rows.rows(k0, k) })
    }

    pub fn parameter_count(&self) -> usize {
        self.k * self.k
    }

    pub fn value(&self, params: &[f64]) -> f64 {
        let mixer = mixer_from_params(params, self.k, &self.rows);
        let mixed = self.factor * mixer;
        mixed
            .column_iter()
            .map(|col| tto::weighted_entropy(col.as_slice(), self.shape.0, self.shape.1).1)
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct EofOptions {
    /// Simplex budget per restart; `None` means `200·K²`.
    pub max_evals: Option<usize>,
    /// Extra runs after the first, each from a perturbed copy of the best point.
    pub restarts: usize,
    pub seed: u64,
    pub ftol: f64,
    pub xtol: f64,
    pub initial_step: f64,
    /// Standard deviation of the restart perturbation, per parameter.
    pub perturbation: f64,
    pub rows: RowSelection,
    /// Starting generator (warm start); zeros when absent.
    pub initial_generator: Option<Vec<f64>>,
    /// Rebuilds the simplex around its best vertex after this many
    /// evaluations, in units of the parameter count; `None` never rebuilds.
    pub rebuild_every: Option<usize>,
}

impl Default for EofOptions {
    fn default() -> Self {
        Self {
            max_evals: None,
            restarts: 3,
            seed: 0,
            ftol: 1e-8,
            xtol: 1e-6,
            initial_step: 0.5,
            perturbation: 1.0,
            rows: RowSelection::First,
            initial_generator: None,
            rebuild_every: None,
        }
    }
}

impl EofOptions {
    /// Settings for large or nearly separable problems where the default
    /// search stalls: small restart kicks and a simplex rebuilt every `50·n`
    /// evaluations. Worse than the default on small instances.
    pub fn refined() -> Self {
        Self { perturbation: 0.1, rebuild_every: Some(50), ..Self::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = Some(max_evals);
        self
    }

    pub fn with_initial_generator(mut self, generator: Vec<f64>) -> Self {
        self.initial_generator = Some(generator);
        self
    }
}

#[derive(Debug, Clone)]
pub struct EofResult {
    /// Bits; an upper bound on the entanglement of formation.
    pub value: f64,
    /// Average entanglement of the input decomposition (the starting point).
    pub start_value: f64,
    pub best_generator: Vec<f64>,
    pub k: usize,
    pub k0: usize,
    /// Bond dimension of the root the search ran on, if any.
    pub m: Option<usize>,
    pub evaluations: usize,
    pub restarts_used: usize,
    pub converged: bool,
    /// Best value after each simplex iteration, over all runs.
    pub trace: Vec<f64>,
    /// Seconds spent inside the search loop.
    pub wall_time: f64,
}

impl EofResult {
    pub fn search_state(&self) -> SearchState {
        SearchState { generator: self.best_generator.clone(), k: self.k, k0: self.k0, rows: RowSelection::First }
    }
}

/// Minimizes the ensemble-averaged entanglement over `K`-element
/// decompositions of `factor·factor†`, whose columns are reshaped to `shape`.
pub fn minimize_eof(factor: &ComplexMatrix, shape: (usize, usize), k: usize, opts: &EofOptions) -> Result<EofResult> {
    let objective = RoofObjective::new(factor, shape, k, opts.rows)?;
    let n = objective.parameter_count();
    let budget = opts.max_evals.unwrap_or(200 * k * k).max(1);
    let start = match &opts.initial_generator {
        Some(g) if g.len() == n => g.clone(),
        Some(g) => return invalid(format!("initial generator has {} parameters, expected {n}", g.len())),
        None => vec![0.0; n],
    };
    let clock = Instant::now();
    let f = |x: &[f64]| objective.value(x);
    let start_value = f(&start);
    let mut best_x = start.clone();
    let mut best = start_value;
    let mut evaluations = 1;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut restarts_used = 0;
    let mut rng = linalg::rng_from_seed(opts.seed);
    let simplex_opts = SimplexOptions { max_evals: budget, ftol: opts.ftol, xtol: opts.xtol, initial_step: opts.initial_step };

    for restart in 0..=opts.restarts {
        if best <= ZERO_FLOOR {
            break;
        }
        restarts_used = restart;
        let mut x = if restart == 0 {
            start.clone()
        } else {
            best_x
                .iter()
                .map(|v| {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    v + opts.perturbation * g
                })
                .collect()
        };
        let mut spent = 0;
        let mut run_best = f64::INFINITY;
        let mut run_converged = false;
        let chunk = opts.rebuild_every.map_or(usize::MAX, |r| r.saturating_mul(n).max(n + 2));
        let mut rounds = 0;
        while spent < budget && rounds < POLISH_ROUNDS.max(budget / chunk.max(1) + 1) {
            rounds += 1;
            let cap = (budget - spent).min(chunk);
            let round = SimplexOptions { max_evals: cap, ..simplex_opts.clone() };
            let out = simplex::minimize(f, &x, &round);
            spent += out.evaluations;
            trace.extend(out.trace.iter().copied());
            let improvement = run_best - out.value;
            x = out.x;
            run_best = run_best.min(out.value);
            run_converged = out.converged;
            if (out.converged && improvement <= opts.ftol) || run_best <= ZERO_FLOOR {
                break;
            }
        }
        evaluations += spent;
        if run_best < best {
            best = run_best;
            best_x = x;
            converged = run_converged;
        } else if restart == 0 {
            converged = run_converged;
        }
    }

    Ok(EofResult {
        value: best.max(0.0),
        start_value,
        best_generator: best_x,
        k,
        k0: factor.ncols(),
        m: None,
        evaluations,
        restarts_used,
        converged,
        trace,
        wall_time: clock.elapsed().as_secs_f64(),
    })
}

/// Searches on the full purification, columns split half-half.
pub fn eof_of_factor(x: &PurificationFactor, k: usize, opts: &EofOptions) -> Result<EofResult> {
    minimize_eof(x.data(), x.half_shape(), k, opts)
}

/// Searches on the (renormalized) root tensor of a TTO.
pub fn eof_of_root(tto: &TreeTensorOperator, k: usize, opts: &EofOptions) -> Result<EofResult> {
    let root = tto.normalized_root();
    let mut r = minimize_eof(&root, tto.root_shape(), k, opts)?;
    r.m = Some(tto.root_shape().0.max(tto.root_shape().1));
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct K0Row {
    /// Kraus dimension after widening over degenerate levels.
    pub k0: usize,
    pub k: usize,
    pub eof: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Bond dimension used when the caller asks for an exact root.
pub fn exact_bond(sites: usize, local_dim: usize) -> usize {
    let (da, db) = Bipartition::half(sites).dims(local_dim);
    da.max(db)
}

/// EoF of the thermal state truncated to `K0 = 1..=k0_max` eigenstates,
/// each run warm-started from the previous optimum.
///
/// `extra_k` sets `K = K0 + extra_k`. States are compressed to bond
/// dimension `bond` first (`None` keeps the root exact).
pub fn scan_k0(
    slice: &SpectrumSlice,
    sites: usize,
    temperature: f64,
    k0_max: usize,
    bond: Option<usize>,
    extra_k: usize,
    opts: &EofOptions,
) -> Result<Vec<K0Row>> {
    if k0_max == 0 || k0_max > slice.len() {
        return invalid(format!("K0 range 1..={k0_max} exceeds the {} available eigenstates", slice.len()));
    }
    let bond = bond.unwrap_or_else(|| exact_bond(sites, spin_models::LOCAL_DIM));
    let mut rows: Vec<K0Row> = Vec::new();
    let mut state: Option<SearchState> = None;
    for requested in 1..=k0_max {
        let x = spin_models::thermal_from_spectrum(slice, sites, temperature, requested)?;
        let k0 = x.kraus_dim();
        if rows.last().is_some_and(|r| r.k0 == k0) {
            continue;
        }
        let mut warm = match state.take() {
            Some(s) => s,
            None => SearchState::origin(k0, k0 + extra_k)?,
        };
        while warm.k0 < k0 {
            warm = warm.extend(true);
        }
        let tto = tto::compress_to_root(&x, Bipartition::half(sites), bond)?;
        let run_opts = EofOptions { initial_generator: Some(warm.generator.clone()), ..opts.clone() };
        let result = eof_of_root(&tto, warm.k, &run_opts)?;
        rows.push(K0Row { k0, k: warm.k, eof: result.value, evaluations: result.evaluations, converged: result.converged });
        state = Some(SearchState { generator: result.best_generator, ..warm });
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct MRow {
    pub bond: usize,
    pub root_shape: (usize, usize),
    pub discarded_weight: f64,
    pub eof: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct MScan {
    pub rows: Vec<MRow>,
    /// EoF at the largest (exact) bond dimension.
    pub reference: f64,
    /// Smallest bond from which every later value stays within 1% of the reference.
    pub m_star: Option<usize>,
}

/// Relative window used to call a bond dimension converged.
pub const M_CONVERGENCE: f64 = 0.01;

/// EoF versus bond dimension; the list must end at the exact bond `d^{N/2}`.
pub fn scan_m(x: &PurificationFactor, bonds: &[usize], k: usize, opts: &EofOptions) -> Result<MScan> {
    let exact = exact_bond(x.sites(), x.local_dim());
    let mut bonds = bonds.to_vec();
    bonds.sort_unstable();
    bonds.dedup();
    if bonds.last().copied().unwrap_or(0) < exact {
        return invalid(format!("the bond list must reach the exact value {exact}"));
    }
    if bonds[0] == 0 {
        return invalid("bond dimensions must be positive");
    }
    let mut rows = Vec::with_capacity(bonds.len());
    for &bond in &bonds {
        let tto = tto::compress_to_root(x, Bipartition::half(x.sites()), bond)?;
        let r = eof_of_root(&tto, k, opts)?;
        rows.push(MRow {
            bond,
            root_shape: tto.root_shape(),
            discarded_weight: tto.discarded_weight,
            eof: r.value,
            evaluations: r.evaluations,
        });
    }
    let reference = rows.last().map(|r| r.eof).unwrap_or(0.0);
    let m_star = converged_bond(&rows, reference);
    Ok(MScan { rows, reference, m_star })
}

fn converged_bond(rows: &[MRow], reference: f64) -> Option<usize> {
    let window = M_CONVERGENCE * reference.abs().max(1e-9);
    let mut answer = None;
    for row in rows.iter().rev() {
        if (row.eof - reference).abs() <= window {
            answer = Some(row.bond);
        } else {
            break;
        }
    }
    answer
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell_factor(lambda: f64) -> ComplexMatrix {
        let (a, b) = (lambda.sqrt() * FRAC_1_SQRT_2, (1.0 - lambda).sqrt() * FRAC_1_SQRT_2);
        ComplexMatrix::from_column_slice(4, 2, &[c(a), c(0.0), c(0.0), c(a), c(b), c(0.0), c(0.0), c(-b)])
    }

    fn h2(x: f64) -> f64 {
        tto::entropy_bits(&[x, 1.0 - x])
    }

    #[test]
    fn zero_generator_gives_leading_identity_block() {
        for (k0, k) in [(1, 1), (2, 3), (3, 5)] {
            let s = SearchState::origin(k0, k).unwrap();
            let u = build_mixer(&s).unwrap();
            let mut expected = ComplexMatrix::zeros(k0, k);
            for i in 0..k0 {
                expected[(i, i)] = linalg::ONE;
            }
            assert!((u - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn mixers_are_co_isometries() {
        let mut rng = linalg::rng_from_seed(3);
        for (k0, k) in [(2, 2), (2, 4), (4, 4), (3, 7)] {
            let g: Vec<f64> = (0..k * k).map(|_| StandardNormal.sample(&mut rng)).collect();
            let mut s = SearchState::new(g, k0, k).unwrap();
            assert!(linalg::co_isometry_defect(&build_mixer(&s).unwrap()) <= 1e-12);
            s.rows = RowSelection::Seeded(9);
            assert!(linalg::co_isometry_defect(&build_mixer(&s).unwrap()) <= 1e-12);
            if k == k0 {
                let u = build_mixer(&SearchState { rows: RowSelection::First, ..s.clone() }).unwrap();
                let full = linalg::unitary_from_generator(&s.hermitian()).unwrap();
                assert!((u - full).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn generator_layout_round_trips() {
        let p: Vec<f64> = (0..16).map(|i| i as f64 * 0.1 - 0.7).collect();
        let a = generator_matrix(&p, 4);
        assert_eq!(linalg::hermiticity_defect(&a), 0.0);
        assert_eq!(generator_params(&a), p);
    }

    #[test]
    fn identity_mixer_keeps_the_decomposition() {
        let x = bell_factor(0.3);
        let e = apply_mixer(&x, &linalg::identity(2)).unwrap();
        assert_abs_diff_eq!(e.probabilities[0], 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(e.probabilities[1], 0.7, epsilon = 1e-14);
        assert!((e.density_matrix() - &x * x.adjoint()).norm() < 1e-14);
        assert!(apply_mixer(&x, &linalg::identity(3)).is_err());
    }

    #[test]
    fn bell_columns_are_maximally_entangled() {
        let e = apply_mixer(&bell_factor(0.5), &linalg::identity(2)).unwrap();
        assert_abs_diff_eq!(average_entanglement(&e, (2, 2)).unwrap(), 1.0, epsilon = 1e-12);
        let mut prod = ComplexMatrix::zeros(4, 1);
        prod[(0, 0)] = linalg::ONE;
        let e = apply_mixer(&prod, &linalg::identity(1)).unwrap();
        assert_eq!(average_entanglement(&e, (2, 2)).unwrap(), 0.0);
    }

    #[test]
    fn pure_state_roof_is_its_entropy() {
        let g = linalg::ginibre_matrix(16, 1, 8);
        let x = PurificationFactor::normalized(g, 4, 2).unwrap();
        let expected = tto::entanglement_entropy(x.data().as_slice(), Bipartition::half(4), 2).unwrap();
        for k in [1, 3] {
            let r = eof_of_factor(&x, k, &EofOptions::default()).unwrap();
            assert_abs_diff_eq!(r.value, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn bell_mixtures_hit_the_closed_form() {
        let r = minimize_eof(&bell_factor(0.5), (2, 2), 2, &EofOptions::default()).unwrap();
        assert!(r.value <= 1e-6, "{}", r.value);
        let r = minimize_eof(&bell_factor(0.9), (2, 2), 2, &EofOptions::default()).unwrap();
        let exact = h2((1.0 + (1.0f64 - 0.64).sqrt()) / 2.0);
        assert_abs_diff_eq!(r.value, exact, epsilon = 1e-4);
        assert_abs_diff_eq!(exact, 0.7219, epsilon = 1e-4);
        assert!(r.value <= r.start_value);
    }

    #[test]
    fn padding_preserves_the_objective() {
        let x = bell_factor(0.8);
        let g = vec![0.3, -0.2, 0.7, 0.1];
        let s = SearchState::new(g, 2, 2).unwrap();
        let padded = warm_start_extend(&s, false);
        assert_eq!((padded.k, padded.k0), (3, 2));
        let a = padded.hermitian();
        assert_eq!(linalg::hermiticity_defect(&a), 0.0);
        assert!(a.row(2).iter().chain(a.column(2).iter()).all(|z| *z == linalg::ZERO));
        let before = RoofObjective::new(&x, (2, 2), 2, RowSelection::First).unwrap().value(&s.generator);
        let after = RoofObjective::new(&x, (2, 2), 3, RowSelection::First).unwrap().value(&padded.generator);
        assert_abs_diff_eq!(before, after, epsilon = 1e-12);
        let twice = padded.extend(true);
        assert_eq!((twice.k, twice.k0), (4, 3));
        assert_eq!(linalg::hermiticity_defect(&twice.hermitian()), 0.0);
    }

    #[test]
    fn diagonal_shift_leaves_the_objective_alone() {
        let x = bell_factor(0.7);
        let obj = RoofObjective::new(&x, (2, 2), 2, RowSelection::First).unwrap();
        let g = vec![0.4, -0.1, 0.9, 0.3];
        let shifted: Vec<f64> = g.iter().enumerate().map(|(i, v)| if i < 2 { v + 1.3 } else { *v }).collect();
        assert!((obj.value(&g) - obj.value(&shifted)).abs() <= 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_not_an_error() {
        let opts = EofOptions { max_evals: Some(5), restarts: 0, ..Default::default() };
        let r = minimize_eof(&bell_factor(0.9), (2, 2), 2, &opts).unwrap();
        assert!(!r.converged);
        assert!(r.value <= r.start_value);
    }

    #[test]
    fn converged_bond_needs_all_later_rows() {
        let row = |bond, eof| MRow { bond, root_shape: (bond, bond), discarded_weight: 0.0, eof, evaluations: 0 };
        let rows = vec![row(1, 0.0), row(2, 0.995), row(3, 0.97), row(4, 0.999), row(5, 1.0)];
        assert_eq!(converged_bond(&rows, 1.0), Some(4));
    }

    #[test]
    fn objective_rejects_bad_shapes() {
        let x = bell_factor(0.5);
        assert!(RoofObjective::new(&x, (2, 3), 2, RowSelection::First).is_err());
        assert!(RoofObjective::new(&x, (2, 2), 1, RowSelection::First).is_err());
        assert!(SearchState::new(vec![0.0; 3], 2, 2).is_err());
    }
}
