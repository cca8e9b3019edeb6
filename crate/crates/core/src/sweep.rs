//! Inequality value against entangled-state purity for a family of switch
//! process fidelities.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{check_range, Error, Result};
use crate::format::sig9;
use crate::inequality::vbc_value;
use crate::process::fidelity_of_epsilon;
use crate::switch::{behavior, NoiseParams};

pub const CSV_HEADER: &str = "purity,eta,f_switch,epsilon,p1,p2,p3,total";

/// Purity grid `0.25 ..= 1.0` in 151 points.
pub fn default_purity_grid() -> Vec<f64> {
    let steps = 151;
    (0..steps)
        .map(|i| 0.25 + 0.75 * i as f64 / (steps - 1) as f64)
        .collect()
}

pub const DEFAULT_FIDELITIES: [f64; 3] = [1.0, 0.96, 0.92];

/// Werner weight with the given two-qubit purity: `η = √((P − ¼)/¾)`.
pub fn eta_of_purity(purity: f64) -> Result<f64> {
    check_range("purity", purity, 0.25, 1.0)?;
    Ok(((purity - 0.25) / 0.75).sqrt())
}

/// Inverse of [`eta_of_purity`].
pub fn purity_of_eta(eta: f64) -> f64 {
    eta * eta + (1.0 - eta * eta) / 4.0
}

/// Mixing weight ε whose process has switch fidelity `f`.
///
/// The fidelity is affine in ε, so two evaluations pin the inverse.
pub fn epsilon_of_fidelity(f: f64) -> Result<f64> {
    let f0 = fidelity_of_epsilon(0.0)?;
    let f1 = fidelity_of_epsilon(1.0)?;
    check_range("switch fidelity", f, f0, f1)?;
    Ok(((f - f0) / (f1 - f0)).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub purity: f64,
    pub eta: f64,
    pub f_switch: f64,
    pub epsilon: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub total: f64,
}

impl SweepRow {
    pub fn at(purity: f64, f_switch: f64) -> Result<Self> {
        let eta = eta_of_purity(purity)?;
        let epsilon = epsilon_of_fidelity(f_switch)?;
        let v = vbc_value(&behavior(NoiseParams::new(eta, epsilon)?)?);
        Ok(SweepRow {
            purity,
            eta,
            f_switch,
            epsilon,
            p1: v.p1,
            p2: v.p2,
            p3: v.p3,
            total: v.total,
        })
    }

    pub fn csv_line(&self) -> String {
        [
            self.purity,
            self.eta,
            self.f_switch,
            self.epsilon,
            self.p1,
            self.p2,
            self.p3,
            self.total,
        ]
        .iter()
        .map(|&x| sig9(x))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// One row per (purity, fidelity) pair, sorted by fidelity then purity.
pub fn sweep(purities: &[f64], fidelities: &[f64]) -> Result<Vec<SweepRow>> {
    // validate the grids up front so the error names the offending point
    for &p in purities {
        eta_of_purity(p)
            .map_err(|e| Error::InvalidArgument(format!("purity grid point {p}: {e}")))?;
    }
    for &f in fidelities {
        epsilon_of_fidelity(f)
            .map_err(|e| Error::InvalidArgument(format!("fidelity grid point {f}: {e}")))?;
    }
    let mut pairs: Vec<(f64, f64)> = fidelities
        .iter()
        .flat_map(|&f| purities.iter().map(move |&p| (f, p)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pairs
        .into_par_iter()
        .map(|(f, p)| SweepRow::at(p, f))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}
