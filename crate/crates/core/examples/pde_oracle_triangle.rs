//! Crank–Nicolson solver, kernel quadrature and closed form compared on the
//! built-in scaled model.

use pointer_decoherence::validation::{desk_triangle_model, triangle_suite};

fn main() {
    let m = desk_triangle_model();
    let edges = triangle_suite(&m, &m);
    for e in &edges {
        println!("{:<40} {:.3e} {}", e.name, e.metric, if e.passed { "pass" } else { "fail" });
    }
    let failed = edges.iter().filter(|e| !e.passed).count();
    println!("{} edges, {failed} failed", edges.len());
}
