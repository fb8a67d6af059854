//! Mixtures of the two GHZ states: the optimizer against the closed form,
//! for two, four and six qubits.

use tto_eof::eof::EofOptions;
use tto_eof::oracles::{self, BenchmarkInstance};

fn main() -> tto_eof::Result<()> {
    let opts = EofOptions::default();
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "lambda", "exact", "N=2", "N=4", "N=6");
    for i in 0..=10 {
        let lambda = i as f64 / 10.0;
        let c = (2.0 * lambda - 1.0).abs();
        let exact = oracles::eof_from_concurrence(c);
        let mut row = format!("{lambda:>6.2} {exact:>12.9}");
        for sites in [2, 4, 6] {
            let r = BenchmarkInstance::ghz(sites, lambda)?.solve(0, &opts)?;
            row.push_str(&format!(" {:>12.9}", r.value));
        }
        println!("{row}");
    }
    Ok(())
}
