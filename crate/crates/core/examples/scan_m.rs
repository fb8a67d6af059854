//! How small the TTO bond dimension can be before the EoF moves by 1%.

use tto_eof::cli::default_bond_list;
use tto_eof::eof::{self, EofOptions};
use tto_eof::spin_models::{self, ModelSpec};

fn main() -> tto_eof::Result<()> {
    for sites in [6, 8, 10] {
        let spec = ModelSpec::xxz(sites, 0.5)?;
        let slice = spin_models::model_spectrum(&spec, 20)?;
        let x = spin_models::thermal_from_spectrum(&slice, sites, 0.5, 2)?;
        let bonds = default_bond_list(eof::exact_bond(sites, 2));
        let scan = eof::scan_m(&x, &bonds, x.kraus_dim(), &EofOptions::default())?;
        println!("N={sites} reference {:.8} M*={:?}", scan.reference, scan.m_star);
        for row in &scan.rows {
            println!("  M={:<3} root {:?} dropped {:.1e} E_F {:.8}", row.bond, row.root_shape, row.discarded_weight, row.eof);
        }
    }
    Ok(())
}
