//! Low spectrum and gap of the two chains, by exact diagonalization.

use tto_eof::spin_models::{self, ModelSpec};

fn main() -> tto_eof::Result<()> {
    for sites in [6, 8, 10, 12] {
        for spec in [ModelSpec::ising(sites, 1.0)?, ModelSpec::xxz(sites, 0.5)?] {
            let slice = spin_models::model_spectrum(&spec, 6)?;
            let gap = spin_models::finite_size_gap(&slice)?;
            let shown: Vec<String> = slice.energies.iter().map(|e| format!("{e:.5}")).collect();
            println!("{:<12} N={sites:<2} gap·N={:.4} E: {}", spec.tag(), gap * sites as f64, shown.join(" "));
        }
    }
    Ok(())
}
