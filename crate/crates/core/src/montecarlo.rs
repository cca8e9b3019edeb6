//! Finite-statistics emulation of the measurement campaign.
//!
//! Each run of the campaign fixes one setting and records `N` outcomes drawn
//! from the 16-outcome distribution. Randomness comes from ChaCha8: the seed
//! selects the key and the repetition index selects the stream, so rep `r`
//! of a report is reproducible on its own and independent of thread count.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::inequality::{term1, term2, term3, ScenarioValue, CLASSICAL_BOUND};
use crate::table::{Outcome, ProbabilityTable, Setting};

/// Which terms a run feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RunKind {
    /// `y = 0`; feeds the two signalling terms.
    Signalling,
    /// `x₁ = x₂ = 0`; feeds the CHSH term.
    Chsh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub setting: Setting,
    pub kind: RunKind,
}

/// The 12 runs: eight `y = 0` settings over `(x₁, x₂, z)`, then four
/// `x₁ = x₂ = 0` settings over `(y, z)`. The two settings common to both
/// groups are measured once per group.
pub fn run_list() -> Vec<Run> {
    let mut runs = Vec::with_capacity(12);
    for x1 in 0..2 {
        for x2 in 0..2 {
            for z in 0..2 {
                runs.push(Run {
                    setting: Setting::new(x1, x2, 0, z),
                    kind: RunKind::Signalling,
                });
            }
        }
    }
    for y in 0..2 {
        for z in 0..2 {
            runs.push(Run {
                setting: Setting::new(0, 0, y, z),
                kind: RunKind::Chsh,
            });
        }
    }
    runs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunCounts {
    pub run: Run,
    /// Indexed by [`Outcome::index`].
    pub counts: [u64; 16],
}

impl RunCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountsTable {
    pub runs: Vec<RunCounts>,
}

impl CountsTable {
    /// Aggregate individual detection events.
    pub fn from_events(events: &[(Run, Outcome)]) -> Self {
        let mut runs: Vec<RunCounts> = run_list()
            .into_iter()
            .map(|run| RunCounts {
                run,
                counts: [0; 16],
            })
            .collect();
        for (run, outcome) in events {
            if let Some(rc) = runs.iter_mut().find(|rc| rc.run == *run) {
                rc.counts[outcome.index()] += 1;
            }
        }
        CountsTable { runs }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Multinomial draw via a chain of conditional binomials.
fn multinomial(probs: &[f64; 16], n: u64, rng: &mut ChaCha8Rng) -> [u64; 16] {
    let mut counts = [0u64; 16];
    let Some(last) = probs.iter().rposition(|&p| p > 0.0) else {
        return counts;
    };
    let mut remaining = n;
    let mut mass_left: f64 = probs[..=last].iter().sum();
    for (k, &p) in probs.iter().enumerate().take(last) {
        if remaining == 0 {
            break;
        }
        if p <= 0.0 {
            continue;
        }
        let q = (p / mass_left).clamp(0.0, 1.0);
        let draw = Binomial::new(remaining, q)
            .expect("conditional probability is in [0, 1]")
            .sample(rng);
        counts[k] = draw;
        remaining -= draw;
        mass_left -= p;
    }
    counts[last] += remaining;
    counts
}

fn sample_with(t: &ProbabilityTable, n: u64, rng: &mut ChaCha8Rng) -> CountsTable {
    let runs = run_list()
        .into_iter()
        .map(|run| RunCounts {
            run,
            counts: multinomial(t.row(run.setting), n, rng),
        })
        .collect();
    CountsTable { runs }
}

/// Draw `n_per_setting` outcomes for every run. Uses stream 0 of `seed`, so
/// it reproduces repetition 0 of [`report`].
pub fn sample_counts(t: &ProbabilityTable, n_per_setting: u64, seed: u64) -> Result<CountsTable> {
    if n_per_setting == 0 {
        return Err(Error::InvalidArgument(
            "n_per_setting must be at least 1".into(),
        ));
    }
    Ok(sample_with(t, n_per_setting, &mut rng_for(seed, 0)))
}

/// Plug-in estimate together with the runs that had no events.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub value: ScenarioValue,
    /// Runs whose total count was zero; they contribute 0 to their term.
    pub degenerate: Vec<Run>,
}

/// Frequencies in place of probabilities in the three terms. The signalling
/// terms use only signalling runs and the CHSH term only CHSH runs.
pub fn estimate(c: &CountsTable) -> Estimate {
    let mut signalling = ProbabilityTable::zeros();
    let mut chsh = ProbabilityTable::zeros();
    let mut degenerate = Vec::new();
    for rc in &c.runs {
        let total = rc.total();
        if total == 0 {
            degenerate.push(rc.run);
            continue;
        }
        let target = match rc.run.kind {
            RunKind::Signalling => &mut signalling,
            RunKind::Chsh => &mut chsh,
        };
        for o in Outcome::all() {
            target.set(
                rc.run.setting,
                o,
                rc.counts[o.index()] as f64 / total as f64,
            );
        }
    }
    Estimate {
        value: ScenarioValue::new(term1(&signalling), term2(&signalling), term3(&chsh)),
        degenerate,
    }
}

/// Summary over independent repetitions.
#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    pub n_per_setting: u64,
    pub reps: usize,
    pub seed: u64,
    /// Per-term and total means.
    pub mean: ScenarioValue,
    /// Sample standard deviations of `p1, p2, p3, total`.
    pub sigma: [f64; 4],
    /// `(mean.total − 7/4) / sigma_total`.
    pub z_score: f64,
    pub per_rep: Vec<ScenarioValue>,
}

impl McReport {
    pub fn mean_total(&self) -> f64 {
        self.mean.total
    }

    pub fn sigma_total(&self) -> f64 {
        self.sigma[3]
    }

    /// Per-rep values with header `rep,p1,p2,p3,total`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "rep,p1,p2,p3,total")?;
        for (i, v) in self.per_rep.iter().enumerate() {
            writeln!(
                out,
                "{i},{},{},{},{}",
                sig9(v.p1),
                sig9(v.p2),
                sig9(v.p3),
                sig9(v.total)
            )?;
        }
        Ok(())
    }
}

fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Run `reps` independent campaigns of `n_per_setting` counts per run.
pub fn report(
    t: &ProbabilityTable,
    n_per_setting: u64,
    reps: usize,
    seed: u64,
) -> Result<McReport> {
    if reps < 2 {
        return Err(Error::InvalidArgument(format!(
            "reps must be at least 2, got {reps}"
        )));
    }
    if n_per_setting == 0 {
        return Err(Error::InvalidArgument(
            "n_per_setting must be at least 1".into(),
        ));
    }
    let per_rep: Vec<ScenarioValue> = (0..reps)
        .into_par_iter()
        .map(|r| estimate(&sample_with(t, n_per_setting, &mut rng_for(seed, r as u64))).value)
        .collect();

    let column = |f: fn(&ScenarioValue) -> f64| -> (f64, f64) {
        mean_and_std(&per_rep.iter().map(f).collect::<Vec<_>>())
    };
    let (m1, s1) = column(|v| v.p1);
    let (m2, s2) = column(|v| v.p2);
    let (m3, s3) = column(|v| v.p3);
    let (mt, st) = column(|v| v.total);
    Ok(McReport {
        n_per_setting,
        reps,
        seed,
        mean: ScenarioValue {
            p1: m1,
            p2: m2,
            p3: m3,
            total: mt,
        },
        sigma: [s1, s2, s3, st],
        z_score: (mt - CLASSICAL_BOUND) / st,
        per_rep,
    })
}
