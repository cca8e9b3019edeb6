//! The three-term inequality and its classical bound.
//!
//! With uniform settings the terms are
//!
//! ```text
//! p1 = 1/8 Σ_{x1,x2,z} p(b=0, a2=x1 | x1 x2 z, y=0)
//! p2 = 1/8 Σ_{x1,x2,z} p(b=1, a1=x2 | x1 x2 z, y=0)
//! p3 = 1/4 Σ_{y,z}     p(b⊕c = y·z  | x1=x2=0, y z)
//! ```
//!
//! and any process with a definite order between the Alices satisfies
//! `p1 + p2 + p3 ≤ 7/4`.

use std::fmt;

use num_rational::Rational64;
use rayon::prelude::*;

use crate::table::{Outcome, ProbabilityTable, Setting};

pub const CLASSICAL_BOUND: f64 = 1.75;

/// `(6 + √2)/4`, the ideal switch value.
pub fn quantum_value() -> f64 {
    (6.0 + std::f64::consts::SQRT_2) / 4.0
}

/// The three terms and their sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScenarioValue {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub total: f64,
}

impl ScenarioValue {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Self {
        ScenarioValue {
            p1,
            p2,
            p3,
            total: p1 + p2 + p3,
        }
    }
}

pub fn term1(t: &ProbabilityTable) -> f64 {
    let mut acc = 0.0;
    for x1 in 0..2 {
        for x2 in 0..2 {
            for z in 0..2 {
                acc += t.prob(Setting::new(x1, x2, 0, z), |o| o.b == 0 && o.a2 == x1);
            }
        }
    }
    acc / 8.0
}

pub fn term2(t: &ProbabilityTable) -> f64 {
    let mut acc = 0.0;
    for x1 in 0..2 {
        for x2 in 0..2 {
            for z in 0..2 {
                acc += t.prob(Setting::new(x1, x2, 0, z), |o| o.b == 1 && o.a1 == x2);
            }
        }
    }
    acc / 8.0
}

/// CHSH win probability between Bob and Charlie at `x₁ = x₂ = 0`.
pub fn term3(t: &ProbabilityTable) -> f64 {
    let mut acc = 0.0;
    for y in 0..2 {
        for z in 0..2 {
            acc += t.prob(Setting::new(0, 0, y, z), |o| o.b ^ o.c == y & z);
        }
    }
    acc / 4.0
}

pub fn vbc_value(t: &ProbabilityTable) -> ScenarioValue {
    ScenarioValue::new(term1(t), term2(t), term3(t))
}

/// Which Alice acts first under the hidden variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    /// `λ = 1`: Alice 1, then Alice 2, then Charlie.
    Alice1First,
    /// `λ = 2`: Alice 2, then Alice 1, then Charlie.
    Alice2First,
}

impl Order {
    pub fn lambda(self) -> u8 {
        match self {
            Order::Alice1First => 1,
            Order::Alice2First => 2,
        }
    }
}

/// Deterministic response functions compatible with a fixed order.
///
/// Each table is packed into an integer whose bit `i` is the response to the
/// `i`-th input in lexicographic order: `bob[y]`, `first[x_first]`,
/// `second[x₁x₂]`, `charlie[x₁x₂z]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicStrategy {
    pub order: Order,
    pub bob: u8,
    pub first: u8,
    pub second: u8,
    pub charlie: u8,
}

/// Strategies per order: 4 Bob × 4 first-Alice × 16 second-Alice × 256 Charlie.
pub const STRATEGIES_PER_ORDER: usize = 4 * 4 * 16 * 256;

impl DeterministicStrategy {
    /// Decode the `index`-th strategy, `0 ≤ index < 2·STRATEGIES_PER_ORDER`.
    pub fn from_index(index: usize) -> Self {
        assert!(index < 2 * STRATEGIES_PER_ORDER);
        let order = if index < STRATEGIES_PER_ORDER {
            Order::Alice1First
        } else {
            Order::Alice2First
        };
        let i = index % STRATEGIES_PER_ORDER;
        DeterministicStrategy {
            order,
            bob: (i & 0x3) as u8,
            first: (i >> 2 & 0x3) as u8,
            second: (i >> 4 & 0xf) as u8,
            charlie: (i >> 8 & 0xff) as u8,
        }
    }

    pub fn b(&self, y: u8) -> u8 {
        self.bob >> y & 1
    }

    pub fn c(&self, x1: u8, x2: u8, z: u8) -> u8 {
        self.charlie >> (x1 << 2 | x2 << 1 | z) & 1
    }

    /// Outcomes `(a₁, a₂)` of the Alices.
    pub fn alices(&self, x1: u8, x2: u8) -> (u8, u8) {
        let second = self.second >> (x1 << 1 | x2) & 1;
        match self.order {
            Order::Alice1First => (self.first >> x1 & 1, second),
            Order::Alice2First => (second, self.first >> x2 & 1),
        }
    }

    pub fn outcome(&self, s: Setting) -> Outcome {
        let (a1, a2) = self.alices(s.x1, s.x2);
        Outcome::new(a1, a2, self.b(s.y), self.c(s.x1, s.x2, s.z))
    }

    /// The 0/1 behaviour this strategy produces.
    pub fn behavior(&self) -> ProbabilityTable {
        ProbabilityTable::from_fn(|s, o| if self.outcome(s) == o { 1.0 } else { 0.0 })
    }

    /// Exact value of `p1 + p2 + p3`.
    pub fn value(&self) -> Rational64 {
        let (mut n1, mut n2, mut n3) = (0i64, 0i64, 0i64);
        for x1 in 0..2 {
            for x2 in 0..2 {
                let (a1, a2) = self.alices(x1, x2);
                // neither term depends on z; each setting appears twice
                if self.b(0) == 0 && a2 == x1 {
                    n1 += 2;
                }
                if self.b(0) == 1 && a1 == x2 {
                    n2 += 2;
                }
            }
        }
        for y in 0..2 {
            for z in 0..2 {
                if self.b(y) ^ self.c(0, 0, z) == y & z {
                    n3 += 1;
                }
            }
        }
        Rational64::new(n1, 8) + Rational64::new(n2, 8) + Rational64::new(n3, 4)
    }
}

fn bits(table: u8, len: usize) -> String {
    (0..len)
        .map(|i| if table >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for DeterministicStrategy {
    /// `λ=1; b:00; a1:01; a2:0101; c:00000000`, tables listed by input in
    /// lexicographic order. Under `λ=2` the `a1` table has four entries and
    /// `a2` two.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a1, a2) = match self.order {
            Order::Alice1First => (bits(self.first, 2), bits(self.second, 4)),
            Order::Alice2First => (bits(self.second, 4), bits(self.first, 2)),
        };
        write!(
            f,
            "λ={}; b:{}; a1:{}; a2:{}; c:{}",
            self.order.lambda(),
            bits(self.bob, 2),
            a1,
            a2,
            bits(self.charlie, 8)
        )
    }
}

/// Result of the exhaustive enumeration.
#[derive(Clone, Debug)]
pub struct ClassicalBound {
    pub max_value: Rational64,
    pub maximizers: Vec<DeterministicStrategy>,
    pub evaluated: usize,
}

/// Enumerate every deterministic strategy for both orders and return the
/// maximum value together with all strategies attaining it.
pub fn classical_bound() -> ClassicalBound {
    let total = 2 * STRATEGIES_PER_ORDER;
    let values: Vec<Rational64> = (0..total)
        .into_par_iter()
        .map(|i| DeterministicStrategy::from_index(i).value())
        .collect();
    let max_value = values
        .iter()
        .copied()
        .max()
        .expect("strategy set is non-empty");
    let maximizers = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == max_value)
        .map(|(i, _)| DeterministicStrategy::from_index(i))
        .collect();
    ClassicalBound {
        max_value,
        maximizers,
        evaluated: total,
    }
}
