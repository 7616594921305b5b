//! Friction against gas density and potential strength, and the fitted
//! log-log exponents.

use pointer_decoherence::gas_bath::gamma_closed;
use pointer_decoherence::{GasConfig, PhysicalConstants, PointerConfig};

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).unzip();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn main() {
    let c = PhysicalConstants::SI;
    let p = PointerConfig::silver_pointer();
    let air = GasConfig::air_bath();

    let densities: Vec<f64> = (0..5).map(|i| air.density * 2f64.powi(i)).collect();
    let by_density: Vec<f64> = densities
        .iter()
        .map(|&n| gamma_closed(&p, &GasConfig { density: n, ..air }, &c).exact)
        .collect();
    let strengths: Vec<f64> = (0..5).map(|i| air.strength * 1.5f64.powi(i)).collect();
    let by_strength: Vec<f64> = strengths
        .iter()
        .map(|&s| gamma_closed(&p, &GasConfig { strength: s, ..air }, &c).exact)
        .collect();
    for (n, g) in densities.iter().zip(&by_density) {
        println!("n0 = {n:.3e}  gamma = {g:.4e}");
    }
    println!("d ln gamma / d ln n0   = {:.6}", slope(&densities, &by_density));
    println!("d ln gamma / d ln phi0 = {:.6}", slope(&strengths, &by_strength));
}
