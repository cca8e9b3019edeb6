// Value against purity for several switch fidelities.
//
// ```bash
// cargo run -p switchlab --example noise_sweep
// ```

use switchlab::sweep::{sweep, write_csv};

pub fn run_example() -> switchlab::Result<()> {
    let purities = [0.25, 0.5, 0.75, 0.97197, 1.0];
    let rows = sweep(&purities, &[1.0, 0.96, 0.92])?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    // lowest purity still violating at F = 1
    if let Some(r) = sweep(&switchlab::sweep::default_purity_grid(), &[1.0])?
        .iter()
        .find(|r| r.total > 1.75)
    {
        println!("violation from purity {:.3}", r.purity);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> switchlab::Result<()> {
    run_example()
}
