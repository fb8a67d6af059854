//! Random two-qubit states against the concurrence formula, and random
//! separable four-qubit states, whose EoF must come out near zero.

use tto_eof::eof::EofOptions;
use tto_eof::oracles::BenchmarkInstance;

fn main() -> tto_eof::Result<()> {
    let opts = EofOptions::default();
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let inst = BenchmarkInstance::hs_random(4, seed)?;
        let r = inst.solve(0, &opts)?;
        worst = worst.max((r.value - inst.exact_eof.unwrap()).abs());
    }
    println!("Hilbert-Schmidt random, 50 states: max |error| {worst:.2e}");

    for k0 in 2..=4 {
        let mut worst: f64 = 0.0;
        for seed in 0..50 {
            let inst = BenchmarkInstance::random_pure(2, k0, seed)?;
            let r = inst.solve(usize::from(k0 == 3), &opts)?;
            worst = worst.max((r.value - inst.exact_eof.unwrap()).abs());
        }
        println!("{k0} random pure states, 50 mixtures: max |error| {worst:.2e}");
    }

    // full rank, so K = K0 = 16 and the search has 256 parameters
    for seed in 0..2 {
        let inst = BenchmarkInstance::separable(4, seed)?;
        let r = inst.solve(0, &EofOptions::refined())?;
        println!("separable N=4 #{seed}: K={} E_F={:.2e} ({} evaluations)", r.k, r.value, r.evaluations);
    }
    Ok(())
}
