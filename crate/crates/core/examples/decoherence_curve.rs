//! Decoherence exponent against γt on a scaled model, with the cubic
//! early-time and linear intermediate fits.

use pointer_decoherence::fp_analytic::RegimeWindows;
use pointer_decoherence::{BathCoefficients, BathModel, PhysicalConstants, PointerConfig};

fn main() -> pointer_decoherence::Result<()> {
    let c = PhysicalConstants::new(1.0, 1.0)?;
    let p = PointerConfig::from_population(50.0, 1.0, 10.0, 0.5, 0.0, 0.0)?;
    let m = BathModel::new(p, BathCoefficients::from_diffusion(&p, &c, 1.0, 0.25)?);

    let grid: Vec<f64> = (0..=28).map(|i| 10f64.powf(-4.0 + i as f64 / 4.0)).collect();
    let prof = m.decoherence_profile(&grid, &RegimeWindows::default())?;
    println!("{:>10} {:>14} {:>10}", "gamma t", "g", "g/g_sat");
    for r in &prof.rows {
        println!("{:>10.3e} {:>14.6e} {:>10.3e}", r.gamma_t, r.g, r.g_normalized);
    }
    if let Some(f) = prof.cubic_fit {
        println!("early exponent {:.4} (rate {:.4e})", f.slope, prof.rate_early);
    }
    if let Some(f) = prof.linear_fit {
        println!("linear slope / rate {:.4}", f.slope / prof.rate_linear);
    }
    Ok(())
}
