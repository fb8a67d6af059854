//! Finite-size collapse `E_F(T, N) = (c/3)·log₂N + g(T·N^z)`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub sites: usize,
    pub temperature: f64,
    pub eof: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingDataset {
    pub points: Vec<ScalingPoint>,
    pub model_tag: String,
}

impl ScalingDataset {
    pub fn new(points: Vec<ScalingPoint>, model_tag: impl Into<String>) -> Result<Self> {
        for p in &points {
            if p.sites < 2 || !(p.temperature > 0.0) || !p.temperature.is_finite() || !p.eof.is_finite() {
                return invalid(format!("bad scaling point {p:?}"));
            }
        }
        Ok(Self { points, model_tag: model_tag.into() })
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut n: Vec<usize> = self.points.iter().map(|p| p.sites).collect();
        n.sort_unstable();
        n.dedup();
        n
    }

    /// Points of one size, sorted by temperature.
    pub fn curve(&self, sites: usize) -> Vec<ScalingPoint> {
        let mut c: Vec<ScalingPoint> = self.points.iter().filter(|p| p.sites == sites).copied().collect();
        c.sort_by(|a, b| a.temperature.total_cmp(&b.temperature));
        c
    }
}

/// `(T·N^z, E_F − (c/3)·log₂N)`.
pub fn rescale(point: &ScalingPoint, c: f64, z: f64) -> (f64, f64) {
    let n = point.sites as f64;
    (point.temperature * n.powf(z), point.eof - c / 3.0 * n.log2())
}

fn interpolate(curve: &[(f64, f64)], x: f64) -> Option<f64> {
    let (first, last) = (curve.first()?, curve.last()?);
    if x < first.0 || x > last.0 {
        return None;
    }
    let i = curve.partition_point(|p| p.0 < x);
    if i == 0 {
        return Some(first.1);
    }
    let (a, b) = (curve[i - 1], curve[i]);
    if b.0 == a.0 {
        return Some(b.1);
    }
    Some(a.1 + (x - a.0) / (b.0 - a.0) * (b.1 - a.1))
}

fn rescaled_curves(data: &ScalingDataset, c: f64, z: f64) -> Vec<Vec<(f64, f64)>> {
    data.sizes()
        .into_iter()
        .map(|n| data.curve(n).iter().map(|p| rescale(p, c, z)).collect())
        .collect()
}

/// Mean squared gap between each rescaled point and the piecewise-linear
/// curves of the other sizes, over the overlapping `x` ranges.
///
/// Returns `None` when no point falls inside another curve's range.
pub fn collapse_residual(data: &ScalingDataset, c: f64, z: f64) -> Option<f64> {
    let curves = rescaled_curves(data, c, z);
    let mut sum = 0.0;
    let mut count = 0usize;
    for (a, ca) in curves.iter().enumerate() {
        for (b, cb) in curves.iter().enumerate() {
            if a == b {
                continue;
            }
            for &(x, y) in ca {
                if let Some(other) = interpolate(cb, x) {
                    sum += (y - other).powi(2);
                    count += 1;
                }
            }
        }
    }
    (count > 0).then(|| sum / count as f64)
}

#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub c: f64,
    pub z: f64,
    /// Half-width of the `z` window where the residual stays below twice its minimum.
    pub z_err: f64,
    pub collapse_residual: f64,
    /// Residual at `z = 0` with the same `c`, when the curves overlap there.
    pub residual_at_zero: Option<f64>,
    /// Pooled rescaled points `(T·N^z, g)` at the fitted exponents, sorted by `x`.
    pub g_table: Vec<(f64, f64)>,
    /// `(z, residual)` over the scanned grid.
    pub scan: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct ZScan {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Default for ZScan {
    fn default() -> Self {
        Self { lo: 0.0, hi: 2.0, step: 1e-3 }
    }
}

impl ZScan {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.hi >= self.lo) || !self.lo.is_finite() || !self.hi.is_finite() {
            return invalid(format!("bad z range {}:{}:{}", self.lo, self.hi, self.step));
        }
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        Ok((0..=count).map(|i| self.lo + i as f64 * self.step).collect())
    }
}

fn check_sizes(data: &ScalingDataset) -> Result<()> {
    if data.sizes().len() < 2 {
        return invalid("a collapse needs at least two system sizes");
    }
    Ok(())
}

/// Scans `z` at fixed `c` for the smallest collapse residual.
pub fn collapse_fit(data: &ScalingDataset, c: f64, range: ZScan) -> Result<ScalingFit> {
    check_sizes(data)?;
    let grid = range.grid()?;
    let scan: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&z| (z, collapse_residual(data, c, z).unwrap_or(f64::INFINITY)))
        .collect();
    let (best, &(z, residual)) = scan
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .ok_or_else(|| Error::DegenerateFit("empty z grid".into()))?;
    if !residual.is_finite() {
        return Err(Error::DegenerateFit("rescaled curves never overlap".into()));
    }
    let threshold = 2.0 * residual;
    let mut lo = best;
    while lo > 0 && scan[lo - 1].1 <= threshold {
        lo -= 1;
    }
    let mut hi = best;
    while hi + 1 < scan.len() && scan[hi + 1].1 <= threshold {
        hi += 1;
    }
    let z_err = (0.5 * (scan[hi].0 - scan[lo].0)).max(0.5 * range.step);
    let mut g_table: Vec<(f64, f64)> = data.points.iter().map(|p| rescale(p, c, z)).collect();
    g_table.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(ScalingFit {
        c,
        z,
        z_err,
        collapse_residual: residual,
        residual_at_zero: collapse_residual(data, c, 0.0),
        g_table,
        scan,
    })
}

/// Joint fit: `collapse_fit` for every `c` on a grid, keeping the best.
pub fn collapse_fit_joint(data: &ScalingDataset, c_grid: &[f64], range: ZScan) -> Result<ScalingFit> {
    let mut best: Option<ScalingFit> = None;
    for &c in c_grid {
        let fit = match collapse_fit(data, c, range) {
            Ok(f) => f,
            Err(Error::DegenerateFit(_)) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|b| fit.collapse_residual < b.collapse_residual) {
            best = Some(fit);
        }
    }
    best.ok_or_else(|| Error::DegenerateFit("no c value gave overlapping curves".into()))
}

/// Baselines must sit at or below this fraction of the gap.
pub const BASELINE_GAP_FRACTION: f64 = 0.05;
/// Temperature, in units of the gap, at which the plateau is probed.
pub const PLATEAU_GAP_FRACTION: f64 = 0.1;
/// Ratios below this are flagged.
pub const PLATEAU_MIN_RATIO: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct PlateauRow {
    pub sites: usize,
    pub baseline_temperature: f64,
    pub baseline: f64,
    pub probe: f64,
    /// `E_F(T = 0.1Δ) / E_F(T → 0)`.
    pub ratio: f64,
    pub flagged: bool,
}

/// Ratio of the EoF at `T = 0.1Δ(N)` to its low-temperature value, per size.
pub fn plateau_check(data: &ScalingDataset, gaps: &BTreeMap<usize, f64>) -> Result<Vec<PlateauRow>> {
    let mut rows = Vec::new();
    for n in data.sizes() {
        let gap = *gaps.get(&n).ok_or_else(|| Error::InvalidInput(format!("no gap given for N = {n}")))?;
        if !(gap > 0.0) {
            return invalid(format!("gap for N = {n} must be positive"));
        }
        let curve = data.curve(n);
        let base = curve[0];
        if base.temperature > BASELINE_GAP_FRACTION * gap {
            return invalid(format!("N = {n} has no baseline at T <= {BASELINE_GAP_FRACTION}·gap"));
        }
        let series: Vec<(f64, f64)> = curve.iter().map(|p| (p.temperature, p.eof)).collect();
        let probe = interpolate(&series, PLATEAU_GAP_FRACTION * gap)
            .ok_or_else(|| Error::InvalidInput(format!("N = {n} does not reach T = {PLATEAU_GAP_FRACTION}·gap")))?;
        let ratio = probe / base.eof;
        rows.push(PlateauRow {
            sites: n,
            baseline_temperature: base.temperature,
            baseline: base.eof,
            probe,
            ratio,
            flagged: !(ratio >= PLATEAU_MIN_RATIO),
        });
    }
    Ok(rows)
}

/// Points with `T ≥ 0.2Δ(N)` where the EoF rises with temperature.
///
/// A soft check: the result is reported, not enforced.
pub fn monotonicity_violations(data: &ScalingDataset, gaps: &BTreeMap<usize, f64>, tol: f64) -> Vec<ScalingPoint> {
    let mut out = Vec::new();
    for n in data.sizes() {
        let Some(&gap) = gaps.get(&n) else { continue };
        let curve: Vec<ScalingPoint> = data.curve(n).into_iter().filter(|p| p.temperature >= 0.2 * gap).collect();
        out.extend(curve.windows(2).filter(|w| w[1].eof > w[0].eof + tol).map(|w| w[1]));
    }
    out
}
