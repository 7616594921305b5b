//! Random-impulse bath: damping time scales for silver and a Monte-Carlo
//! check of the characteristic function of the accumulated displacement.

use pointer_decoherence::random_field::{characteristic_compound_poisson, mc_characteristic, rf_timescales};
use pointer_decoherence::{PointerConfig, RandomFieldParams, RandomWalkEnsemble};

fn main() -> pointer_decoherence::Result<()> {
    let p = PointerConfig::silver_pointer();
    let rf = RandomFieldParams::new(2.5e9, 1e-7)?;
    let ts = rf_timescales(&p, &rf);
    println!("tau_int / tau_r = {:.3e}", ts.tau_int_ratio());
    println!("t_bluer / tau_r = {:.3e}", ts.t_bluer_ratio());

    let unit = RandomFieldParams::new(1.0, 1.0)?;
    let ens = RandomWalkEnsemble::generate(&unit, 100.0, 20_000, 3)?;
    for &dk in &[0.05, 0.1, 0.2] {
        let est = mc_characteristic(&unit, dk, &ens)?;
        println!(
            "dk = {dk:<4} estimate {:.5} gaussian {:.5} poisson {:.5} |z| {:.2}",
            est.estimate.re,
            est.exact,
            characteristic_compound_poisson(&unit, 100.0, dk),
            est.z_score()
        );
    }
    Ok(())
}
