//! The switch scenario as a process matrix, evaluated with the generalised
//! Born rule.
//!
//! Space order is `[B, A1ᴵ, A1ᴼ, A2ᴵ, A2ᴼ, F_c, F_t]`, every space a qubit,
//! with `B` as the most significant bit of the 128-dimensional index. This
//! backend shares no code path with [`crate::switch`] beyond the instrument
//! definitions, so agreement between the two is a meaningful check.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_range, Error, Result};
use crate::instruments::{alice_kraus, bob_basis, charlie_basis};
use crate::linalg::{pauli, ComplexMatrix, ONE, ZERO};
use crate::switch::{werner_state, NoiseParams};
use crate::table::{Outcome, ProbabilityTable, Setting};

pub const SPACE_LABELS: [&str; 7] = ["B", "A1I", "A1O", "A2I", "A2O", "Fc", "Ft"];
pub const DIM: usize = 128;

/// Positive operator on the seven qubit spaces.
#[derive(Clone, Debug)]
pub struct ProcessMatrix {
    matrix: ComplexMatrix,
}

impl ProcessMatrix {
    /// Validating constructor: 128×128, Hermitian and PSD within 1e-9.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != DIM || matrix.cols() != DIM {
            return Err(Error::DimensionMismatch {
                expected: format!("{DIM}x{DIM}"),
                actual: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        if !matrix.is_psd(1e-9) {
            return Err(Error::Validation(
                "process matrix is not Hermitian positive semidefinite".into(),
            ));
        }
        Ok(ProcessMatrix { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Block of the process with the control output fixed to `|c⟩`,
    /// renormalised to the trace of the full process. At `η = 1` the two
    /// blocks are the fixed-order processes `W^{A1<A2}` (c = 0) and
    /// `W^{A2<A1}` (c = 1).
    pub fn ordered_block(&self, c: usize) -> ProcessMatrix {
        let mut out = ComplexMatrix::zeros(DIM, DIM);
        for r in 0..DIM {
            for k in 0..DIM {
                if fc_bit(r) == c && fc_bit(k) == c {
                    out[(r, k)] = self.matrix[(r, k)] * 2.0;
                }
            }
        }
        ProcessMatrix { matrix: out }
    }

    /// CSV dump with header `row,col,re,im`, one line per entry.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "row,col,re,im")?;
        for r in 0..DIM {
            for c in 0..DIM {
                let z = self.matrix[(r, c)];
                writeln!(
                    out,
                    "{r},{c},{},{}",
                    crate::format::sig9(z.re),
                    crate::format::sig9(z.im)
                )?;
            }
        }
        Ok(())
    }
}

fn fc_bit(index: usize) -> usize {
    (index >> 1) & 1
}

fn index_of(values: &[(usize, usize)]) -> usize {
    values.iter().map(|&(space, v)| v << (6 - space)).sum()
}

/// Isometry from Bob ⊗ control into the process space. Control value `c`
/// is copied to `F_c` and selects the wiring: `c = 0` routes `|0⟩` into
/// Alice 1, Alice 1's output into Alice 2 and Alice 2's output to `F_t`;
/// `c = 1` swaps the Alices.
fn embedding() -> ComplexMatrix {
    const B: usize = 0;
    const A1I: usize = 1;
    const A1O: usize = 2;
    const A2I: usize = 3;
    const A2O: usize = 4;
    const FC: usize = 5;
    const FT: usize = 6;

    let mut v = ComplexMatrix::zeros(DIM, 4);
    for b in 0..2 {
        for c in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let row = if c == 0 {
                        index_of(&[
                            (B, b),
                            (A1I, 0),
                            (A1O, i),
                            (A2I, i),
                            (A2O, j),
                            (FC, 0),
                            (FT, j),
                        ])
                    } else {
                        index_of(&[
                            (B, b),
                            (A2I, 0),
                            (A2O, i),
                            (A1I, i),
                            (A1O, j),
                            (FC, 1),
                            (FT, j),
                        ])
                    };
                    v[(row, b << 1 | c)] = ONE;
                }
            }
        }
    }
    v
}

/// Normalised pure switch vector `|w⟩/‖w‖` for `|φ⁺⟩` on Bob ⊗ control.
pub fn switch_vector() -> Vec<Complex64> {
    let phi = crate::linalg::PureState::phi_plus();
    let w = embedding().apply(phi.amplitudes());
    let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    w.iter().map(|z| z / norm).collect()
}

/// Coherent switch with Werner noise of weight `eta` on Bob ⊗ control.
pub fn build_w_switch(eta: f64) -> Result<ProcessMatrix> {
    let rho = werner_state(eta)?;
    let v = embedding();
    ProcessMatrix::new(v.conjugate(rho.matrix()))
}

/// `ε·W + (1−ε)/2·(W^{A1<A2} + W^{A2<A1})`, the ordered terms being the
/// control-diagonal blocks of `w`.
pub fn mix_w(w: &ProcessMatrix, epsilon: f64) -> Result<ProcessMatrix> {
    check_range("epsilon", epsilon, 0.0, 1.0)?;
    let ordered = &w.ordered_block(0).matrix + &w.ordered_block(1).matrix;
    ProcessMatrix::new(&w.matrix.scale_real(epsilon) + &ordered.scale_real((1.0 - epsilon) / 2.0))
}

/// Noisy process for both noise parameters.
pub fn noisy_process(noise: NoiseParams) -> Result<ProcessMatrix> {
    mix_w(&build_w_switch(noise.eta())?, noise.epsilon())
}

/// Choi operator `|K⟩⟩⟨⟨K|` of one Kraus branch, with
/// `|K⟩⟩ = (I ⊗ K) Σᵢ |ii⟩` ordered input ⊗ output.
#[derive(Clone, Debug)]
pub struct ChoiOperator {
    matrix: ComplexMatrix,
}

impl ChoiOperator {
    pub fn from_kraus(k: &ComplexMatrix) -> Self {
        let mut vec = vec![ZERO; 4];
        for i in 0..2 {
            for o in 0..2 {
                vec[i << 1 | o] = k[(o, i)];
            }
        }
        ChoiOperator {
            matrix: ComplexMatrix::outer(&vec, &vec),
        }
    }

    /// Sum of branch Choi operators (the Choi matrix of a coarse-grained
    /// instrument or of a whole channel).
    pub fn sum<'a>(parts: impl IntoIterator<Item = &'a ChoiOperator>) -> Self {
        let matrix = parts
            .into_iter()
            .fold(ComplexMatrix::zeros(4, 4), |acc, c| &acc + &c.matrix);
        ChoiOperator { matrix }
    }

    pub fn identity_channel() -> Self {
        Self::from_kraus(&pauli::id())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// The operator each party contributes to the Born rule.
#[derive(Clone, Debug)]
pub enum Effect {
    Bob(ComplexMatrix),
    Alice1(ChoiOperator),
    Alice2(ChoiOperator),
    Charlie(ComplexMatrix),
}

impl Effect {
    fn slot(&self) -> usize {
        match self {
            Effect::Bob(_) => 0,
            Effect::Alice1(_) => 1,
            Effect::Alice2(_) => 2,
            Effect::Charlie(_) => 3,
        }
    }

    /// Operator contracted with `W`. The Alices' Choi operators enter
    /// transposed; `B` and `F_c` behave as ordinary state spaces.
    fn operator(&self) -> ComplexMatrix {
        match self {
            Effect::Bob(m) | Effect::Charlie(m) => m.clone(),
            Effect::Alice1(c) | Effect::Alice2(c) => c.matrix.transpose(),
        }
    }
}

/// `Tr[W · (E_B ⊗ E_A1 ⊗ E_A2 ⊗ E_C ⊗ I_{F_t})]`, clamped to `[0, 1]`.
///
/// Every party must appear exactly once; `F_t` is always traced.
pub fn born_rule(w: &ProcessMatrix, effects: &[Effect]) -> Result<f64> {
    let mut ops: [Option<ComplexMatrix>; 4] = [None, None, None, None];
    for e in effects {
        let slot = e.slot();
        if ops[slot].is_some() {
            return Err(Error::InvalidArgument(format!(
                "effect for slot {slot} given twice"
            )));
        }
        let op = e.operator();
        let expected = if matches!(slot, 1 | 2) { 4 } else { 2 };
        if op.rows() != expected || op.cols() != expected {
            return Err(Error::DimensionMismatch {
                expected: format!("{expected}x{expected} for slot {slot}"),
                actual: format!("{}x{}", op.rows(), op.cols()),
            });
        }
        ops[slot] = Some(op);
    }
    let [Some(bob), Some(a1), Some(a2), Some(charlie)] = ops else {
        return Err(Error::InvalidArgument(
            "born_rule needs effects for Bob, Alice1, Alice2 and Charlie".into(),
        ));
    };

    let m = w.matrix();
    let mut acc = ZERO;
    for r in 0..DIM {
        for c in 0..DIM {
            if (r & 1) != (c & 1) {
                continue;
            }
            let wrc = m[(r, c)];
            if wrc == ZERO {
                continue;
            }
            // M[c, r] factorises over the spaces
            let f = bob[(c >> 6, r >> 6)]
                * a1[((c >> 4) & 3, (r >> 4) & 3)]
                * a2[((c >> 2) & 3, (r >> 2) & 3)]
                * charlie[((c >> 1) & 1, (r >> 1) & 1)];
            acc += wrc * f;
        }
    }
    let p = acc.re;
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::Validation(format!(
            "Born-rule value {p} outside [0, 1]"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Full behaviour computed through the process matrix.
pub fn behavior_from_process(w: &ProcessMatrix) -> Result<ProbabilityTable> {
    let rows: Vec<Result<[f64; 16]>> = (0..16usize)
        .into_par_iter()
        .map(|si| {
            let s = Setting::from_index(si);
            let mut row = [0.0; 16];
            for o in Outcome::all() {
                let effects = [
                    Effect::Bob(bob_basis(s.y).projector(o.b)),
                    Effect::Alice1(ChoiOperator::from_kraus(&alice_kraus(s.x1, o.a1))),
                    Effect::Alice2(ChoiOperator::from_kraus(&alice_kraus(s.x2, o.a2))),
                    Effect::Charlie(charlie_basis(s.z).projector(o.c)),
                ];
                row[o.index()] = born_rule(w, &effects)?;
            }
            Ok(row)
        })
        .collect();
    let mut table = [[0.0; 16]; 16];
    for (dst, src) in table.iter_mut().zip(rows) {
        *dst = src?;
    }
    let table = ProbabilityTable::from_rows(table);
    table.validate()?;
    Ok(table)
}

pub fn behavior(noise: NoiseParams) -> Result<ProbabilityTable> {
    behavior_from_process(&noisy_process(noise)?)
}

/// Overlap of the trace-normalised `w` with the ideal pure switch vector.
pub fn switch_fidelity(w: &ProcessMatrix) -> f64 {
    let target = switch_vector();
    let wv = w.matrix().apply(&target);
    let overlap: Complex64 = target.iter().zip(&wv).map(|(a, b)| a.conj() * b).sum();
    (overlap.re / w.trace()).clamp(0.0, 1.0)
}

/// `switch_fidelity(mix_w(W_switch(η = 1), ε))`.
pub fn fidelity_of_epsilon(epsilon: f64) -> Result<f64> {
    Ok(switch_fidelity(&mix_w(&build_w_switch(1.0)?, epsilon)?))
}
