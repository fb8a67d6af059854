//! Finite-size collapse of low-temperature EoF curves.
//!
//! Temperatures are fixed fractions of each size's gap; the fit scans `z`
//! with `c` fixed to the Ising value.

use std::collections::BTreeMap;

use tto_eof::eof::{self, EofOptions};
use tto_eof::scaling::{self, ScalingDataset, ScalingPoint, ZScan};
use tto_eof::spin_models::{self, ModelSpec};
use tto_eof::tto::{self, Bipartition};

fn main() -> tto_eof::Result<()> {
    let mut points = Vec::new();
    let mut gaps = BTreeMap::new();
    for sites in [6, 8, 10] {
        let spec = ModelSpec::ising(sites, 1.0)?;
        let slice = spin_models::model_spectrum(&spec, 24)?;
        let gap = spin_models::finite_size_gap(&slice)?;
        gaps.insert(sites, gap);
        for frac in [0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5] {
            let t = frac * gap;
            let k0 = spin_models::kraus_dimension_for_weight(&slice.energies, t, 0.99, 1, 8);
            let x = spin_models::thermal_from_spectrum(&slice, sites, t, k0)?;
            let root = tto::compress_to_root(&x, Bipartition::half(sites), eof::exact_bond(sites, 2))?;
            let e = eof::eof_of_root(&root, root.kraus_dim(), &EofOptions::default())?.value;
            points.push(ScalingPoint { sites, temperature: t, eof: e });
        }
    }
    let data = ScalingDataset::new(points, "ising")?;
    let fit = scaling::collapse_fit(&data, 0.5, ZScan::default())?;
    println!("z = {:.3} ± {:.3}", fit.z, fit.z_err);
    println!("residual {:.3e} (at z = 0: {:.3e})", fit.collapse_residual, fit.residual_at_zero.unwrap_or(f64::NAN));
    for row in scaling::plateau_check(&data, &gaps)? {
        println!("N={} E_F(0.1 gap)/E_F(low T) = {:.4}", row.sites, row.ratio);
    }
    Ok(())
}
