//! EoF as more thermal eigenstates are kept, each run warm-started from the
//! previous optimum padded with a zero row and column.

use tto_eof::eof::{self, EofOptions};
use tto_eof::spin_models::{self, ModelSpec};

fn main() -> tto_eof::Result<()> {
    let sites = 8;
    let spec = ModelSpec::ising(sites, 1.0)?;
    let slice = spin_models::model_spectrum(&spec, 24)?;
    for t in [0.1, 0.3] {
        println!("T = {t}");
        for row in eof::scan_k0(&slice, sites, t, 4, None, 0, &EofOptions::default())? {
            println!("  K0={:<2} E_F={:.8} evals={}", row.k0, row.eof, row.evaluations);
        }
    }
    Ok(())
}
