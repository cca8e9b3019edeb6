// Inspect the behaviour table and its marginals.
//
// ```bash
// cargo run -p switchlab --example probability_table
// ```

use switchlab::linalg::{fidelity_to_pure, PureState};
use switchlab::switch::{behavior, post_switch_state, NoiseParams};
use switchlab::table::Setting;

pub fn run_example() -> switchlab::Result<()> {
    let t = behavior(NoiseParams::IDEAL)?;
    for s in Setting::all().filter(|s| s.y == 0 && s.z == 0) {
        let row: Vec<String> = t.row(s).iter().map(|p| format!("{p:.3}")).collect();
        println!("x1={} x2={}: {}", s.x1, s.x2, row.join(" "));
    }
    if let Some((p, rho)) = post_switch_state(NoiseParams::IDEAL, 0, 0, 0, 0)? {
        let f = fidelity_to_pure(&rho, &PureState::phi_plus())?;
        println!("x1=x2=0: p(a1=a2=0) = {p:.3}, fidelity with φ⁺ = {f:.6}");
    }
    let mut csv = Vec::new();
    t.write_csv(&mut csv)?;
    println!(
        "csv: {} lines",
        csv.split(|&b| b == b'\n').filter(|l| !l.is_empty()).count()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> switchlab::Result<()> {
    run_example()
}
