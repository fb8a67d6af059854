//! Werner and isotropic families in d = 2 and one separable d = 3 point each.
//!
//! The d = 3 searches use the refined options and take a few seconds.

use tto_eof::eof::EofOptions;
use tto_eof::oracles::{self, BenchmarkInstance, SymmetricFamily};

fn main() -> tto_eof::Result<()> {
    let opts = EofOptions::default();
    let grid: Vec<f64> = (0..=8).map(|i| -1.0 + 0.25 * i as f64).collect();
    let reference = oracles::reference_eof_curve(SymmetricFamily::Werner, 2, &grid)?;
    println!("Werner d=2 ({})", reference.source.label());
    for (f, exact) in grid.iter().zip(&reference.values) {
        // rank-3 members need one decomposition element more than the rank
        let r = BenchmarkInstance::werner(2, *f)?.solve(1, &opts)?;
        println!("  f={f:>5.2}  exact {exact:.8}  found {:.8}", r.value);
    }

    println!("isotropic d=2");
    for i in 0..=8 {
        let f = i as f64 / 8.0;
        let inst = BenchmarkInstance::isotropic(2, f)?;
        let r = inst.solve(1, &opts)?;
        println!("  F={f:>5.3}  exact {:.8}  found {:.8}", inst.exact_eof.unwrap_or(f64::NAN), r.value);
    }

    let hard = EofOptions::refined().with_max_evals(50_000);
    let w = BenchmarkInstance::werner(3, 0.5)?.solve(3, &hard)?;
    println!("Werner d=3 f=0.5 (separable): {:.2e} with K={}", w.value, w.k);
    let iso = BenchmarkInstance::isotropic(3, 0.2)?.solve(1, &hard)?;
    println!("isotropic d=3 F=0.2 (separable): {:.2e} with K={}", iso.value, iso.k);
    Ok(())
}
