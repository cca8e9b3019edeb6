// Evaluate the inequality for the noiseless switch and a few noisy points.
//
// ```bash
// cargo run -p switchlab --example ideal_violation
// ```

use switchlab::inequality::{quantum_value, vbc_value, CLASSICAL_BOUND};
use switchlab::switch::{behavior, NoiseParams};

pub fn run_example() -> switchlab::Result<()> {
    println!(
        "{:>6} {:>6} {:>10} {:>10} {:>10} {:>10}",
        "eta", "eps", "p1", "p2", "p3", "total"
    );
    for (eta, eps) in [(1.0, 1.0), (0.981136, 1.0), (1.0, 0.0), (0.0, 1.0)] {
        let v = vbc_value(&behavior(NoiseParams::new(eta, eps)?)?);
        println!(
            "{eta:>6.3} {eps:>6.3} {:>10.6} {:>10.6} {:>10.6} {:>10.6}{}",
            v.p1,
            v.p2,
            v.p3,
            v.total,
            if v.total > CLASSICAL_BOUND {
                "  violates"
            } else {
                ""
            }
        );
    }
    println!(
        "classical bound {CLASSICAL_BOUND}, ideal value {:.9}",
        quantum_value()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> switchlab::Result<()> {
    run_example()
}
