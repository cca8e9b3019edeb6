//! Setting-indexed instruments for the four parties.
//!
//! The Alices measure the target in the computational basis and re-prepare
//! `|x⟩`. Bob and Charlie perform projective qubit measurements described by
//! a Bloch vector; outcome 0 is always the +1 eigenprojector of `n·σ`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{pauli, ComplexMatrix, TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Party {
    Alice1,
    Alice2,
    Bob,
    Charlie,
}

/// One Kraus branch of an instrument: the outcome it reports and its operator.
#[derive(Clone, Debug)]
pub struct Branch {
    pub outcome: u8,
    pub kraus: ComplexMatrix,
}

/// A party's instrument for both settings.
#[derive(Clone, Debug)]
pub struct Instrument {
    pub party: Party,
    branches: [Vec<Branch>; 2],
}

impl Instrument {
    pub fn branches(&self, setting: u8) -> &[Branch] {
        &self.branches[usize::from(setting & 1)]
    }

    pub fn kraus(&self, setting: u8, outcome: u8) -> &ComplexMatrix {
        &self
            .branches(setting)
            .iter()
            .find(|b| b.outcome == outcome)
            .expect("qubit instruments have outcomes 0 and 1")
            .kraus
    }

    /// `Σ K†K = I` for the given setting.
    pub fn is_complete(&self, setting: u8) -> bool {
        let sum = self
            .branches(setting)
            .iter()
            .fold(ComplexMatrix::zeros(2, 2), |acc, b| {
                &acc + &(&b.kraus.adjoint() * &b.kraus)
            });
        sum.approx_eq(&pauli::id(), TOL)
    }

    /// Projective instrument built from a basis per setting.
    pub fn projective(party: Party, bases: [MeasurementBasis; 2]) -> Self {
        let build = |basis: &MeasurementBasis| {
            (0..2)
                .map(|outcome| Branch {
                    outcome,
                    kraus: basis.projector(outcome),
                })
                .collect()
        };
        Instrument {
            party,
            branches: [build(&bases[0]), build(&bases[1])],
        }
    }
}

/// Measure in `{|0⟩, |1⟩}` and re-prepare `|x⟩`.
pub fn alice_kraus(setting: u8, outcome: u8) -> ComplexMatrix {
    pauli::ketbra(usize::from(setting & 1), usize::from(outcome & 1))
}

pub fn alice_branches(setting: u8) -> Vec<Branch> {
    (0..2)
        .map(|outcome| Branch {
            outcome,
            kraus: alice_kraus(setting, outcome),
        })
        .collect()
}

pub fn alice_instrument(party: Party) -> Instrument {
    assert!(matches!(party, Party::Alice1 | Party::Alice2));
    Instrument {
        party,
        branches: [alice_branches(0), alice_branches(1)],
    }
}

/// Projective qubit measurement along a unit Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementBasis {
    bloch: [f64; 3],
}

impl MeasurementBasis {
    /// Normalises `bloch`; panics on the zero vector.
    pub fn new(bloch: [f64; 3]) -> Self {
        let norm = bloch.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!(norm > 0.0, "Bloch vector must be non-zero");
        MeasurementBasis {
            bloch: bloch.map(|c| c / norm),
        }
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    /// `(I ± n·σ)/2`, with `+` for outcome 0.
    pub fn projector(&self, outcome: u8) -> ComplexMatrix {
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        let [nx, ny, nz] = self.bloch;
        let n_sigma =
            &(&pauli::x().scale_real(nx) + &pauli::y().scale_real(ny)) + &pauli::z().scale_real(nz);
        (&pauli::id() + &n_sigma.scale_real(sign)).scale_real(0.5)
    }
}

/// Bob: `Z` for `y = 0`, `X` for `y = 1`.
pub fn bob_basis(y: u8) -> MeasurementBasis {
    match y {
        0 => MeasurementBasis::new([0.0, 0.0, 1.0]),
        _ => MeasurementBasis::new([1.0, 0.0, 0.0]),
    }
}

/// Charlie: `(X+Z)/√2` for `z = 0`, and the `X−Z` axis for `z = 1`.
///
/// For `z = 1` outcome 0 is the +1 eigenvector of `(Z−X)/√2`. With this
/// labelling the win condition `b ⊕ c = y·z` is met with probability
/// `cos²(π/8)` for every setting pair on `|φ⁺⟩`; the opposite labelling makes
/// the `(0,1)` and `(1,1)` pairs lose instead.
pub fn charlie_basis(z: u8) -> MeasurementBasis {
    match z {
        0 => MeasurementBasis::new([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]),
        _ => MeasurementBasis::new([-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]),
    }
}

pub fn bob_instrument() -> Instrument {
    Instrument::projective(Party::Bob, [bob_basis(0), bob_basis(1)])
}

pub fn charlie_instrument() -> Instrument {
    Instrument::projective(Party::Charlie, [charlie_basis(0), charlie_basis(1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::ketbra;

    #[test]
    fn alice_prepares_setting() {
        assert!(alice_kraus(0, 0).approx_eq(&ketbra(0, 0), 0.0));
        assert!(alice_kraus(1, 0).approx_eq(&ketbra(1, 0), 0.0));
        assert!(alice_kraus(1, 1).approx_eq(&ketbra(1, 1), 0.0));
        assert!(alice_kraus(0, 1).approx_eq(&ketbra(0, 1), 0.0));
    }

    #[test]
    fn all_instruments_complete_and_bounded() {
        for inst in [
            alice_instrument(Party::Alice1),
            alice_instrument(Party::Alice2),
            bob_instrument(),
            charlie_instrument(),
        ] {
            for s in 0..2 {
                assert!(inst.is_complete(s), "{:?} setting {s}", inst.party);
                for b in inst.branches(s) {
                    assert!(b.kraus.operator_norm() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn bob_projectors() {
        assert!(bob_basis(0).projector(0).approx_eq(&ketbra(0, 0), TOL));
        let plus = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(bob_basis(1).projector(0).approx_eq(&plus, TOL));
    }

    #[test]
    fn projectors_are_idempotent_and_complete() {
        for basis in [
            bob_basis(0),
            bob_basis(1),
            charlie_basis(0),
            charlie_basis(1),
        ] {
            let p0 = basis.projector(0);
            let p1 = basis.projector(1);
            assert!((&p0 * &p0).approx_eq(&p0, TOL));
            assert!((&p1 * &p1).approx_eq(&p1, TOL));
            assert!((&p0 + &p1).approx_eq(&pauli::id(), TOL));
        }
    }

    #[test]
    fn charlie_z0_projector() {
        let s = FRAC_1_SQRT_2;
        let expected = (&pauli::id() + &(&pauli::x() + &pauli::z()).scale_real(s)).scale_real(0.5);
        let p = charlie_basis(0).projector(0);
        assert!(p.approx_eq(&expected, TOL));
        let cos2 = (std::f64::consts::PI / 8.0).cos().powi(2);
        assert!((p[(0, 0)].re - cos2).abs() < 1e-12);
        assert!((p[(0, 0)].re - 0.853553).abs() < 1e-6);
    }

    #[test]
    fn charlie_z1_axis_is_x_minus_z() {
        // the measured observable is ±(X−Z)/√2; outcome 0 sits on the Z−X side
        let s = FRAC_1_SQRT_2;
        let x_minus_z = (&pauli::x() - &pauli::z()).scale_real(s);
        let p1 = charlie_basis(1).projector(1);
        let expected = (&pauli::id() + &x_minus_z).scale_real(0.5);
        assert!(p1.approx_eq(&expected, TOL));
    }
}
