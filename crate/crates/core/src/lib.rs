//! Numerical laboratory for the device-independent test of indefinite causal
//! order built on the entangled-control quantum switch.
//!
//! Four parties take part. Alice 1 and Alice 2 act on a target qubit inside a
//! quantum switch whose control qubit is entangled with Bob's qubit; Charlie
//! measures the control after the switch. The inequality
//!
//! ```text
//! p(b=0, a2=x1 | y=0) + p(b=1, a1=x2 | y=0) + p(b⊕c = yz | x1=x2=0) ≤ 7/4
//! ```
//!
//! holds for every process with a definite order between the Alices; the
//! ideal switch reaches `(6+√2)/4`.
//!
//! Modules, bottom up:
//!
//! - [`linalg`]: dense complex matrices, partial trace, purity, fidelity.
//! - [`instruments`]: the parties' Kraus operators and projectors.
//! - [`switch`]: direct Kraus-operator simulation of the switch.
//! - [`process`]: the same scenario as a process matrix with the generalised
//!   Born rule, used to cross-check [`switch`] and to define switch fidelity.
//! - [`inequality`]: the three terms, and exhaustive enumeration of
//!   deterministic ordered strategies in exact rational arithmetic.
//! - [`sweep`]: value against state purity for several switch fidelities.
//! - [`montecarlo`]: finite-count emulation, repetition statistics, z-score.
//! - [`cli`]: the `switchlab` command-line front end.

pub mod cli;
pub mod error;
pub mod format;
pub mod inequality;
pub mod instruments;
pub mod linalg;
pub mod montecarlo;
pub mod process;
pub mod sweep;
pub mod switch;
pub mod table;

pub use error::{Error, Result};
pub use inequality::{classical_bound, vbc_value, ScenarioValue};
pub use switch::{behavior, NoiseParams};
pub use table::{Outcome, ProbabilityTable, Setting};
