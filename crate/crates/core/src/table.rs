//! The full behaviour `p(a₁,a₂,b,c | x₁,x₂,y,z)`.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::format::sig9;

/// Settings `(x₁, x₂, y, z)`, each a bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Setting {
    pub x1: u8,
    pub x2: u8,
    pub y: u8,
    pub z: u8,
}

impl Setting {
    pub const fn new(x1: u8, x2: u8, y: u8, z: u8) -> Self {
        Setting { x1, x2, y, z }
    }

    /// Lexicographic index, `x₁` most significant.
    pub fn index(self) -> usize {
        usize::from(self.x1 << 3 | self.x2 << 2 | self.y << 1 | self.z)
    }

    pub fn from_index(i: usize) -> Self {
        let i = i as u8;
        Setting::new(i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1)
    }

    pub fn all() -> impl Iterator<Item = Setting> {
        (0..16).map(Setting::from_index)
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x1={}, x2={}, y={}, z={})",
            self.x1, self.x2, self.y, self.z
        )
    }
}

/// Outcomes `(a₁, a₂, b, c)`, each a bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome {
    pub a1: u8,
    pub a2: u8,
    pub b: u8,
    pub c: u8,
}

impl Outcome {
    pub const fn new(a1: u8, a2: u8, b: u8, c: u8) -> Self {
        Outcome { a1, a2, b, c }
    }

    pub fn index(self) -> usize {
        usize::from(self.a1 << 3 | self.a2 << 2 | self.b << 1 | self.c)
    }

    pub fn from_index(i: usize) -> Self {
        let i = i as u8;
        Outcome::new(i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1)
    }

    pub fn all() -> impl Iterator<Item = Outcome> {
        (0..16).map(Outcome::from_index)
    }
}

/// Conditional distribution over 16 outcomes for each of the 16 settings.
#[derive(Clone, PartialEq)]
pub struct ProbabilityTable {
    entries: [[f64; 16]; 16],
}

/// Tolerance on per-setting normalisation.
pub const NORMALIZATION_TOL: f64 = 1e-9;

impl ProbabilityTable {
    pub fn zeros() -> Self {
        ProbabilityTable {
            entries: [[0.0; 16]; 16],
        }
    }

    /// Build from a function of setting and outcome. Values in
    /// `[-1e-12, 0)` are clamped to zero; anything more negative is kept so
    /// that [`validate`](Self::validate) can reject it.
    pub fn from_fn(mut f: impl FnMut(Setting, Outcome) -> f64) -> Self {
        let mut t = Self::zeros();
        for s in Setting::all() {
            for o in Outcome::all() {
                t.set(s, o, f(s, o));
            }
        }
        t
    }

    /// Build from per-setting rows, indexed by [`Setting::index`].
    pub fn from_rows(rows: [[f64; 16]; 16]) -> Self {
        let mut t = ProbabilityTable { entries: rows };
        for row in t.entries.iter_mut() {
            for p in row.iter_mut() {
                *p = clamp_tiny(*p);
            }
        }
        t
    }

    pub fn get(&self, s: Setting, o: Outcome) -> f64 {
        self.entries[s.index()][o.index()]
    }

    pub fn set(&mut self, s: Setting, o: Outcome, p: f64) {
        self.entries[s.index()][o.index()] = clamp_tiny(p);
    }

    pub fn row(&self, s: Setting) -> &[f64; 16] {
        &self.entries[s.index()]
    }

    /// Sum of `p(o | s)` over outcomes matching `pred`.
    pub fn prob(&self, s: Setting, pred: impl Fn(Outcome) -> bool) -> f64 {
        Outcome::all()
            .filter(|&o| pred(o))
            .map(|o| self.get(s, o))
            .sum()
    }

    /// Non-negativity and per-setting normalisation.
    pub fn validate(&self) -> Result<()> {
        for s in Setting::all() {
            let row = self.row(s);
            if let Some(p) = row.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
                return Err(Error::Validation(format!(
                    "negative or non-finite probability {p} at setting {s}"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::Validation(format!("setting {s} sums to {total}")));
            }
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &ProbabilityTable) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Pointwise convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, w: f64, other: &ProbabilityTable) -> ProbabilityTable {
        ProbabilityTable::from_fn(|s, o| w * self.get(s, o) + (1.0 - w) * other.get(s, o))
    }

    /// Write as CSV with header `x1,x2,y,z,a1,a2,b,c,p`, 256 rows in
    /// lexicographic order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x1,x2,y,z,a1,a2,b,c,p")?;
        for s in Setting::all() {
            for o in Outcome::all() {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    s.x1,
                    s.x2,
                    s.y,
                    s.z,
                    o.a1,
                    o.a2,
                    o.b,
                    o.c,
                    sig9(self.get(s, o))
                )?;
            }
        }
        Ok(())
    }
}

fn clamp_tiny(p: f64) -> f64 {
    if (-1e-12..0.0).contains(&p) {
        0.0
    } else {
        p
    }
}

impl fmt::Debug for ProbabilityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in Setting::all() {
            writeln!(f, "{s}: {:?}", self.row(s))?;
        }
        Ok(())
    }
}
