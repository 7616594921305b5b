//! Free silver pointer after the spin-dependent kick: the two packets, their
//! interference term and the log-encoded envelope once it underflows.

use pointer_decoherence::{FreePointer, PhysicalConstants, PointerConfig};

fn main() {
    let p = PointerConfig::silver_pointer();
    let free = FreePointer::new(p, PhysicalConstants::SI);
    println!("tau_f = {:.4e} s", free.tau_f);
    for &s in &[0.0, 0.5, 1.0, 3.0] {
        let t = s * free.tau_f;
        // centre of the spin-up packet
        let x = p.xbar();
        let c = free.probability(t, x);
        println!(
            "t/tau_f = {s:<4} width = {:.3e} m  p_up = {:.3e} 1/m  p_int = {:.3e}  ln|p_int| = {:.1}{}",
            free.free_spread(t).sqrt(),
            c.p_up,
            c.p_int,
            c.ln_abs_int,
            if c.is_log_encoded() { "  (log encoded)" } else { "" }
        );
    }
    println!("total probability = {:.12}", free.total_probability());
}
