// Same behaviour from the Kraus simulation and from the process matrix.
//
// ```bash
// cargo run -p switchlab --example backend_equivalence
// ```

use switchlab::process::{self, fidelity_of_epsilon, noisy_process};
use switchlab::switch::{self, NoiseParams};

pub fn run_example() -> switchlab::Result<()> {
    for (eta, eps) in [(1.0, 1.0), (0.9, 0.5), (0.3, 0.0)] {
        let noise = NoiseParams::new(eta, eps)?;
        let w = noisy_process(noise)?;
        let diff = switch::behavior(noise)?.max_abs_diff(&process::behavior(noise)?);
        println!(
            "eta {eta:.2} eps {eps:.2}: Tr W = {:.3}, F_switch = {:.4}, max |Δp| = {diff:.1e}",
            w.trace(),
            fidelity_of_epsilon(eps)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> switchlab::Result<()> {
    run_example()
}
