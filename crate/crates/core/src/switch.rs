//! Direct simulation of the entangled-control quantum switch.
//!
//! Subsystem order is `[Bob, control, target]`. Bob shares a (noisy) `|φ⁺⟩`
//! with the control; the target starts in `|0⟩` and is traced out after the
//! switch. Control `|0⟩` applies Alice 1 first (`K₂K₁`), control `|1⟩`
//! applies Alice 2 first (`K₁K₂`).

use rayon::prelude::*;

use crate::error::{check_range, Result};
use crate::instruments::{alice_kraus, bob_basis, charlie_basis};
use crate::linalg::{
    partial_trace, pauli, tensor, tensor_all, ComplexMatrix, DensityMatrix, PureState,
};
use crate::table::{Outcome, ProbabilityTable, Setting};

/// Werner weight `eta` on the shared pair and coherent-switch weight
/// `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    eta: f64,
    epsilon: f64,
}

impl NoiseParams {
    pub fn new(eta: f64, epsilon: f64) -> Result<Self> {
        Ok(NoiseParams {
            eta: check_range("eta", eta, 0.0, 1.0)?,
            epsilon: check_range("epsilon", epsilon, 0.0, 1.0)?,
        })
    }

    pub const IDEAL: NoiseParams = NoiseParams {
        eta: 1.0,
        epsilon: 1.0,
    };

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// `η|φ⁺⟩⟨φ⁺| + (1−η)·I/4` on Bob ⊗ control.
pub fn werner_state(eta: f64) -> Result<DensityMatrix> {
    check_range("eta", eta, 0.0, 1.0)?;
    PureState::phi_plus()
        .density()
        .mix(eta, &DensityMatrix::maximally_mixed(vec![2, 2]))
}

/// Zero every coherence between different values of `subsystem`.
pub fn dephase(rho: &DensityMatrix, subsystem: usize) -> DensityMatrix {
    let dims = rho.subsystem_dims();
    let stride: usize = dims[subsystem + 1..].iter().product();
    let d = dims[subsystem];
    let digit = |i: usize| (i / stride) % d;
    let m = rho.matrix();
    let mut out = m.clone();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if digit(r) != digit(c) {
                out[(r, c)] = crate::linalg::ZERO;
            }
        }
    }
    DensityMatrix::from_parts_unchecked(out, dims.to_vec())
}

/// `|0⟩⟨0|_c ⊗ K₂K₁ + |1⟩⟨1|_c ⊗ K₁K₂` on control ⊗ target.
pub fn switch_branch(k1: &ComplexMatrix, k2: &ComplexMatrix) -> ComplexMatrix {
    &tensor(&pauli::ketbra(0, 0), &(k2 * k1)) + &tensor(&pauli::ketbra(1, 1), &(k1 * k2))
}

/// Bob ⊗ control ⊗ target state entering the switch.
pub fn input_state(noise: NoiseParams) -> Result<DensityMatrix> {
    let pair = werner_state(noise.eta)?;
    let pair = pair.mix(noise.epsilon, &dephase(&pair, 1))?;
    let target = PureState::basis(0, vec![2])?.density();
    Ok(pair.tensor(&target))
}

/// Unnormalised Bob ⊗ control state after the switch for one pair of Alice
/// settings and outcomes, target traced. Its trace is `p(a₁, a₂ | x₁, x₂)`.
fn post_switch_unnormalized(
    input: &DensityMatrix,
    x1: u8,
    x2: u8,
    a1: u8,
    a2: u8,
) -> DensityMatrix {
    let branch = switch_branch(&alice_kraus(x1, a1), &alice_kraus(x2, a2));
    let full = tensor(&pauli::id(), &branch);
    let out = DensityMatrix::from_parts_unchecked(full.conjugate(input.matrix()), vec![2, 2, 2]);
    partial_trace(&out, &[0, 1]).expect("static subsystem layout")
}

/// Bob ⊗ control state conditioned on the Alices' outcomes, together with
/// the probability of that outcome pair. Returns `None` for a zero-probability
/// path.
pub fn post_switch_state(
    noise: NoiseParams,
    x1: u8,
    x2: u8,
    a1: u8,
    a2: u8,
) -> Result<Option<(f64, DensityMatrix)>> {
    let input = input_state(noise)?;
    let sigma = post_switch_unnormalized(&input, x1, x2, a1, a2);
    let p = sigma.matrix().trace().re;
    if p <= 1e-14 {
        return Ok(None);
    }
    let normalized = DensityMatrix::new(sigma.matrix().scale_real(1.0 / p), vec![2, 2])?;
    Ok(Some((p, normalized)))
}

/// Full behaviour of the switch protocol under `noise`.
pub fn behavior(noise: NoiseParams) -> Result<ProbabilityTable> {
    let input = input_state(noise)?;

    // σ_BC for each (x₁, x₂, a₁, a₂); independent of y and z
    let mut post = Vec::with_capacity(16);
    for x1 in 0..2 {
        for x2 in 0..2 {
            for a1 in 0..2 {
                for a2 in 0..2 {
                    post.push(post_switch_unnormalized(&input, x1, x2, a1, a2));
                }
            }
        }
    }
    let post_index = |x1: u8, x2: u8, a1: u8, a2: u8| usize::from(x1 << 3 | x2 << 2 | a1 << 1 | a2);

    let rows: Vec<[f64; 16]> = (0..16usize)
        .into_par_iter()
        .map(|si| {
            let s = Setting::from_index(si);
            let mut row = [0.0; 16];
            for o in Outcome::all() {
                let effect = tensor_all([
                    &bob_basis(s.y).projector(o.b),
                    &charlie_basis(s.z).projector(o.c),
                ]);
                let sigma = &post[post_index(s.x1, s.x2, o.a1, o.a2)];
                row[o.index()] = effect.trace_product(sigma.matrix()).re;
            }
            row
        })
        .collect();

    let mut table = [[0.0; 16]; 16];
    for (dst, src) in table.iter_mut().zip(rows) {
        *dst = src;
    }
    let table = ProbabilityTable::from_rows(table);
    table.validate()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fidelity_to_pure, purity, TOL};

    #[test]
    fn werner_endpoints() {
        let pure = werner_state(1.0).unwrap();
        assert!(pure
            .matrix()
            .approx_eq(PureState::phi_plus().density().matrix(), TOL));
        let mixed = werner_state(0.0).unwrap();
        assert!(mixed
            .matrix()
            .approx_eq(&ComplexMatrix::identity(4).scale_real(0.25), TOL));
        assert!((purity(&werner_state(0.981136).unwrap()) - 0.97197).abs() < 1e-5);
        assert!(werner_state(1.2).is_err());
        assert!(werner_state(-0.1).is_err());
    }

    #[test]
    fn noise_params_range() {
        assert!(NoiseParams::new(0.5, 1.5).is_err());
        assert!(NoiseParams::new(f64::NAN, 0.5).is_err());
        assert!(NoiseParams::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn identity_branch_is_identity() {
        let b = switch_branch(&pauli::id(), &pauli::id());
        assert!(b.approx_eq(&ComplexMatrix::identity(4), 0.0));
    }

    #[test]
    fn signalling_branch_lives_in_control_zero() {
        // K₁ = |1⟩⟨0| (x₁=1, a₁=0), K₂ = |x₂⟩⟨1| (a₂=1), target input |0⟩
        for x2 in 0..2 {
            let b = switch_branch(&alice_kraus(1, 0), &alice_kraus(x2, 1));
            let from_c0 = b.apply(PureState::basis(0b00, vec![2, 2]).unwrap().amplitudes());
            let from_c1 = b.apply(PureState::basis(0b10, vec![2, 2]).unwrap().amplitudes());
            let n0: f64 = from_c0.iter().map(|z| z.norm_sqr()).sum();
            let n1: f64 = from_c1.iter().map(|z| z.norm_sqr()).sum();
            assert_eq!(n0, 1.0);
            assert_eq!(n1, 0.0);
        }
    }

    #[test]
    fn control_sectors_swap_under_argument_swap() {
        let k1 = alice_kraus(0, 1);
        let k2 = &pauli::x() * &alice_kraus(1, 1);
        let ab = switch_branch(&k1, &k2);
        let ba = switch_branch(&k2, &k1);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(ab[(2 + i, 2 + j)], ba[(i, j)]);
            }
        }
    }

    #[test]
    fn dephasing_kills_control_coherence() {
        let d = dephase(&werner_state(1.0).unwrap(), 1);
        assert_eq!(d.matrix()[(0, 3)].re, 0.0);
        assert!((d.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ideal_behavior_normalized() {
        behavior(NoiseParams::IDEAL).unwrap().validate().unwrap();
    }

    #[test]
    fn ideal_first_term_cell_values() {
        // y=0, b=0 collapses the control to |0⟩: a₁=0 and a₂=x₁ with certainty
        let t = behavior(NoiseParams::IDEAL).unwrap();
        for x1 in 0..2 {
            for x2 in 0..2 {
                for z in 0..2 {
                    let s = Setting::new(x1, x2, 0, z);
                    let p = t.prob(s, |o| o.b == 0 && o.a2 == x1);
                    assert!((p - 0.5).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn equal_settings_zero_keep_phi_plus() {
        let (p, rho) = post_switch_state(NoiseParams::IDEAL, 0, 0, 0, 0)
            .unwrap()
            .unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        let f = fidelity_to_pure(&rho, &PureState::phi_plus()).unwrap();
        assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn equal_settings_one_reveal_the_order() {
        // measure-and-reprepare with x₁=x₂=1 leaves which-order information in
        // the outcomes, so each conditioned path is a product state
        let paths: Vec<_> = [(0u8, 1u8), (1, 0)]
            .iter()
            .map(|&(a1, a2)| {
                post_switch_state(NoiseParams::IDEAL, 1, 1, a1, a2)
                    .unwrap()
                    .unwrap()
            })
            .collect();
        for (p, rho) in paths {
            assert!((p - 0.5).abs() < 1e-12);
            let f = fidelity_to_pure(&rho, &PureState::phi_plus()).unwrap();
            assert!((f - 0.5).abs() < 1e-9);
        }
    }
}
