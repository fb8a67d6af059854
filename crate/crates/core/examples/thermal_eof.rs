//! EoF between the two halves of a critical Ising ring at a few temperatures.
//!
//! cargo run --release --example thermal_eof

use tto_eof::eof::{self, EofOptions};
use tto_eof::spin_models::{self, ModelSpec};
use tto_eof::tto::{self, Bipartition};

fn main() -> tto_eof::Result<()> {
    let sites = 8;
    let spec = ModelSpec::ising(sites, 1.0)?;
    let slice = spin_models::model_spectrum(&spec, 16)?;
    let gap = spin_models::finite_size_gap(&slice)?;
    println!("{} N={sites}: gap {gap:.6}", spec.tag());
    println!("{:>8} {:>4} {:>12} {:>8}", "T", "K0", "E_F (bits)", "evals");

    for t in [0.02, 0.05, 0.1, 0.2, 0.4] {
        // enough eigenstates for 99% of the Boltzmann weight
        let k0 = spin_models::kraus_dimension_for_weight(&slice.energies, t, 0.99, 1, 8);
        let x = spin_models::thermal_from_spectrum(&slice, sites, t, k0)?;
        let root = tto::compress_to_root(&x, Bipartition::half(sites), eof::exact_bond(sites, 2))?;
        let r = eof::eof_of_root(&root, root.kraus_dim(), &EofOptions::default())?;
        println!("{t:>8.3} {:>4} {:>12.8} {:>8}", x.kraus_dim(), r.value, r.evaluations);
    }
    Ok(())
}
