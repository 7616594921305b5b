//! Friction and diffusion of a silver pointer in room-temperature air, from
//! the closed form and from quadrature.

use pointer_decoherence::gas_bath::{gamma_closed, gamma_quadrature};
use pointer_decoherence::{BathCoefficients, GammaBackend, GasConfig, PhysicalConstants, PointerConfig};

fn main() -> pointer_decoherence::Result<()> {
    let c = PhysicalConstants::SI;
    let p = PointerConfig::silver_pointer();
    let gas = GasConfig::air_bath();

    let closed = gamma_closed(&p, &gas, &c);
    let quad = gamma_quadrature(&p, &gas, &c)?;
    println!("varrho             = {:.1}", closed.varrho);
    println!("gamma (closed)     = {:.6e} 1/s", closed.exact);
    println!("gamma (quadrature) = {:.6e} 1/s", quad);
    println!("gamma (large range)= {:.6e} 1/s", closed.large_varrho);

    let b = BathCoefficients::from_gas(&p, &gas, &c, GammaBackend::Closed)?;
    println!("D   = {:.4e} 1/(m^2 s)", b.diffusion);
    println!("D_c = {:.4e} m^2/s", b.spatial_diffusion);
    Ok(())
}
