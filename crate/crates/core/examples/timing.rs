//! Cost of one objective evaluation, full purification against a TTO root.

use std::time::Instant;

use tto_eof::eof::{RoofObjective, RowSelection};
use tto_eof::spin_models::{self, ModelSpec};
use tto_eof::tto::{self, Bipartition};

fn per_eval(f: impl Fn() -> f64) -> f64 {
    let reps = 50;
    let clock = Instant::now();
    let mut acc = 0.0;
    for _ in 0..reps {
        acc += f();
    }
    assert!(acc.is_finite());
    clock.elapsed().as_secs_f64() / reps as f64
}

fn main() -> tto_eof::Result<()> {
    println!("{:>3} {:>6} {:>14} {:>14}", "N", "dim", "full (us)", "root M=8 (us)");
    for sites in [6, 8, 10, 12] {
        let spec = ModelSpec::ising(sites, 1.0)?;
        let slice = spin_models::model_spectrum(&spec, 4)?;
        let x = spin_models::thermal_from_spectrum(&slice, sites, 0.1, 2)?;
        let k = x.kraus_dim();
        let params = vec![0.3; k * k];
        let full = RoofObjective::new(x.data(), x.half_shape(), k, RowSelection::First)?;
        let t = tto::compress_to_root(&x, Bipartition::half(sites), 8)?;
        let root = t.normalized_root();
        let small = RoofObjective::new(&root, t.root_shape(), k, RowSelection::First)?;
        println!(
            "{sites:>3} {:>6} {:>14.2} {:>14.2}",
            spec.dim(),
            1e6 * per_eval(|| full.value(&params)),
            1e6 * per_eval(|| small.value(&params))
        );
    }
    Ok(())
}
