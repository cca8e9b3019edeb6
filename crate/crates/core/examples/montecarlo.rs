// Finite-count emulation of the experiment at the reference purity.
//
// ```bash
// cargo run -p switchlab --example montecarlo
// ```

use switchlab::montecarlo::report;
use switchlab::sweep::eta_of_purity;
use switchlab::switch::{behavior, NoiseParams};

pub fn run_example() -> switchlab::Result<()> {
    let table = behavior(NoiseParams::new(eta_of_purity(0.97197)?, 1.0)?)?;
    for n in [1000, 7000, 28000] {
        let r = report(&table, n, 200, 1)?;
        println!(
            "n {n:>6}: total {:.5} ± {:.5}, {:.1} σ above 7/4",
            r.mean_total(),
            r.sigma_total(),
            r.z_score
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> switchlab::Result<()> {
    run_example()
}
