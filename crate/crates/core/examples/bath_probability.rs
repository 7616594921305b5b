//! Position density of the pointer in a bath: the interference term fades as
//! the decoherence exponent grows, while the two packets only broaden.

use pointer_decoherence::{BathCoefficients, BathModel, PhysicalConstants, PointerConfig};

fn main() -> pointer_decoherence::Result<()> {
    let c = PhysicalConstants::new(1.0, 1.0)?;
    let p = PointerConfig::from_population(0.5, 1.0, 2.0, 0.5, 0.0, 0.0)?;
    let m = BathModel::new(p, BathCoefficients::from_diffusion(&p, &c, 1.0, 0.15)?);
    for &t in &[0.1, 0.5, 1.0, 2.0] {
        let g = m.decoherence_g(t)?;
        let b = m.broadening(t)?;
        let mid = m.probability(t, 0.0)?;
        println!(
            "t = {t:<4} g = {g:.4}  width^2 = {:.4}  at x = 0: up {:.4e} down {:.4e} int {:+.4e}",
            b.delta_beta_sq, mid.p_up, mid.p_down, mid.p_int
        );
    }
    Ok(())
}
