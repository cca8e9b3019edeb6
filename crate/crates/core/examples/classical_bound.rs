// Exhaustive search over definite-order deterministic strategies.
//
// ```bash
// cargo run -p switchlab --example classical_bound
// ```

use switchlab::inequality::{classical_bound, Order};

pub fn run_example() -> switchlab::Result<()> {
    let b = classical_bound();
    println!("max {} over {} strategies", b.max_value, b.evaluated);
    let first = b
        .maximizers
        .iter()
        .filter(|s| s.order == Order::Alice1First)
        .count();
    println!(
        "maximizers: {} (λ=1: {first}, λ=2: {})",
        b.maximizers.len(),
        b.maximizers.len() - first
    );
    for s in b.maximizers.iter().take(4) {
        println!("  {s}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> switchlab::Result<()> {
    run_example()
}
