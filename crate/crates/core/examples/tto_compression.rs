//! Compressing a thermal purification into branch isometries and a root.

use tto_eof::linalg;
use tto_eof::spin_models::{self, ModelSpec};
use tto_eof::tto::{self, Bipartition};

fn main() -> tto_eof::Result<()> {
    let sites = 10;
    let spec = ModelSpec::ising(sites, 1.0)?;
    let slice = spin_models::model_spectrum(&spec, 8)?;
    let x = spin_models::thermal_from_spectrum(&slice, sites, 0.1, 4)?;
    println!("X: {}x{}", x.data().nrows(), x.kraus_dim());

    for bond in [2, 4, 8, 16, 32] {
        let t = tto::compress_to_root(&x, Bipartition::half(sites), bond)?;
        let err = (t.reconstruct() - x.data()).norm();
        println!(
            "M={bond:<3} root {:?}x{} dropped {:.2e} |X - X~| {:.2e} isometry defect {:.1e}",
            t.root_shape(),
            t.kraus_dim(),
            t.discarded_weight,
            err,
            linalg::isometry_defect(&t.branch_left).max(linalg::isometry_defect(&t.branch_right))
        );
    }

    // entanglement of each Kraus column of the exact root
    let t = tto::compress_to_root(&x, Bipartition::half(sites), 32)?;
    for (j, (p, s)) in tto::root_column_entropies(&t).iter().enumerate() {
        println!("column {j}: weight {p:.6} entropy {s:.6} bits");
    }
    Ok(())
}
