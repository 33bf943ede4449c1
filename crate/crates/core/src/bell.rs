//! CHSH harness and the marginal-underdetermination demonstration.
//!
//! Sign convention: `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)`.
//!
//! Local deterministic strategies are the extreme points of the local
//! polytope, so enumerating all 16 of them certifies the classical bound.
//! The demonstration side shows that fixing both marginals (which is all a
//! single-argument regraduation `g` can do) leaves the correlator free to
//! range over a whole Fréchet interval.

use serde::Serialize;
use thiserror::Error;

use crate::regraduation::{
    AdmissibilityReport, RegradError, RegraduationMap, DEFAULT_GRID, DEFAULT_TOL,
};

pub const JOINT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BellError {
    #[error("p(+,+) = {p_pp} outside Fréchet bounds [{lower}, {upper}]")]
    Frechet { p_pp: f64, lower: f64, upper: f64 },
    #[error("marginal {0} outside [0, 1]")]
    Marginal(f64),
    #[error("invalid joint table: {0}")]
    InvalidJoint(String),
    #[error("correlator {value} at setting pair ({x}, {y}) outside [-1, 1]")]
    Correlator { x: usize, y: usize, value: f64 },
    #[error("regraduation map {name} is not admissible")]
    Inadmissible {
        name: String,
        report: Box<AdmissibilityReport>,
    },
    #[error(transparent)]
    Regrad(#[from] RegradError),
}

/// Singlet correlator `E(φ) = −cos φ` at relative axis angle `φ`.
pub fn singlet_correlation(phi: f64) -> f64 {
    -phi.cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Settings {
    /// `(0, π/2, π/4, 3π/4)`, which reaches Tsirelson's bound for the singlet.
    pub fn optimal() -> Self {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        Self {
            a: 0.0,
            a_prime: FRAC_PI_2,
            b: FRAC_PI_4,
            b_prime: 3.0 * FRAC_PI_4,
        }
    }

    pub fn alice(&self) -> [f64; 2] {
        [self.a, self.a_prime]
    }

    pub fn bob(&self) -> [f64; 2] {
        [self.b, self.b_prime]
    }
}

/// Four-setting CHSH configuration. `correlators[x][y]` is the correlator for
/// Alice's setting `x` and Bob's setting `y` (0 unprimed, 1 primed).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshScenario {
    pub settings: Settings,
    pub correlators: [[f64; 2]; 2],
}

impl ChshScenario {
    /// Evaluates `correlation(angle_a, angle_b)` at the four setting pairs.
    pub fn from_fn(
        settings: Settings,
        correlation: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, BellError> {
        let mut correlators = [[0.0; 2]; 2];
        for (x, &sa) in settings.alice().iter().enumerate() {
            for (y, &sb) in settings.bob().iter().enumerate() {
                correlators[x][y] = correlation(sa, sb);
            }
        }
        Self::from_correlators(settings, correlators)
    }

    /// Singlet correlations at the given settings.
    pub fn singlet(settings: Settings) -> Self {
        Self::from_fn(settings, |a, b| singlet_correlation(a - b)).expect("|cos| <= 1")
    }

    /// Correlators `A(x)·B(y)` of a deterministic strategy. The angles only
    /// label the settings.
    pub fn from_strategy(settings: Settings, strategy: &LocalDeterministicStrategy) -> Self {
        let mut correlators = [[0.0; 2]; 2];
        for (x, row) in correlators.iter_mut().enumerate() {
            for (y, c) in row.iter_mut().enumerate() {
                *c = f64::from(strategy.correlator(x, y));
            }
        }
        Self {
            settings,
            correlators,
        }
    }

    pub fn from_correlators(
        settings: Settings,
        correlators: [[f64; 2]; 2],
    ) -> Result<Self, BellError> {
        for (x, row) in correlators.iter().enumerate() {
            for (y, &value) in row.iter().enumerate() {
                if !(value.abs() <= 1.0) {
                    return Err(BellError::Correlator { x, y, value });
                }
            }
        }
        Ok(Self {
            settings,
            correlators,
        })
    }
}

pub fn chsh_value(s: &ChshScenario) -> f64 {
    let e = &s.correlators;
    e[0][0] - e[0][1] + e[1][0] + e[1][1]
}

/// Each wing answers `±1` as a fixed function of its own setting index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalDeterministicStrategy {
    pub alice: [i8; 2],
    pub bob: [i8; 2],
}

impl LocalDeterministicStrategy {
    /// Strategy number `k` in `0..16`: bit `i` set means output `−1` for
    /// Alice's setting `i` (bits 0, 1) or Bob's setting `i − 2` (bits 2, 3).
    pub fn from_index(k: u8) -> Self {
        assert!(k < 16, "strategy index {k} out of range");
        let out = |bit: u8| if k >> bit & 1 == 1 { -1 } else { 1 };
        Self {
            alice: [out(0), out(1)],
            bob: [out(2), out(3)],
        }
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..16).map(Self::from_index)
    }

    pub fn correlator(&self, x: usize, y: usize) -> i8 {
        self.alice[x] * self.bob[y]
    }

    /// CHSH value in exact integer arithmetic.
    pub fn chsh(&self) -> i32 {
        let e = |x, y| i32::from(self.correlator(x, y));
        e(0, 0) - e(0, 1) + e(1, 0) + e(1, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LhvBound {
    /// `max S`, which by the `±` symmetry of the strategy set equals `max |S|`.
    pub bound: i32,
    pub witness: LocalDeterministicStrategy,
    /// Strategies with `S = bound`.
    pub maximizers: usize,
    /// Strategies with `|S| = bound`. Every deterministic strategy gives
    /// `S = ±2`, so this is all of them.
    pub saturating: usize,
    pub strategies: usize,
}

/// Classical CHSH bound by enumerating all 16 local deterministic strategies.
pub fn lhv_chsh_bound() -> LhvBound {
    let values: Vec<(LocalDeterministicStrategy, i32)> = LocalDeterministicStrategy::all()
        .map(|s| (s, s.chsh()))
        .collect();
    let bound = values.iter().map(|&(_, v)| v).max().expect("16 strategies");
    let max_abs = values
        .iter()
        .map(|&(_, v)| v.abs())
        .max()
        .expect("16 strategies");
    debug_assert_eq!(bound, max_abs);
    let witness = values
        .iter()
        .find(|&&(_, v)| v == bound)
        .map(|&(s, _)| s)
        .expect("maximum is attained");
    LhvBound {
        bound,
        witness,
        maximizers: values.iter().filter(|&&(_, v)| v == bound).count(),
        saturating: values.iter().filter(|&&(_, v)| v.abs() == max_abs).count(),
        strategies: values.len(),
    }
}

/// Joint outcome distribution for one setting pair. `table[i][j]` is the
/// probability of Alice's outcome `i` and Bob's outcome `j`, index 0 for
/// `+1` and 1 for `−1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct JointModel {
    table: [[f64; 2]; 2],
}

impl JointModel {
    pub fn new(table: [[f64; 2]; 2]) -> Result<Self, BellError> {
        let cells = table.iter().flatten();
        if let Some(&c) = cells.clone().find(|&&c| !(c >= 0.0)) {
            return Err(BellError::InvalidJoint(format!(
                "negative or NaN entry {c}"
            )));
        }
        let total: f64 = cells.sum();
        if (total - 1.0).abs() > JOINT_TOL {
            return Err(BellError::InvalidJoint(format!("entries sum to {total}")));
        }
        Ok(Self { table })
    }

    /// Uniform table, `1/4` everywhere.
    pub fn uniform() -> Self {
        Self {
            table: [[0.25; 2]; 2],
        }
    }

    pub fn table(&self) -> [[f64; 2]; 2] {
        self.table
    }

    /// `(P(A = +1), P(B = +1))`.
    pub fn marginals(&self) -> (f64, f64) {
        let t = &self.table;
        (t[0][0] + t[0][1], t[0][0] + t[1][0])
    }
}

/// Fréchet bounds on `p(+,+)` for the given marginals.
pub fn frechet_bounds(p_a: f64, p_b: f64) -> (f64, f64) {
    ((p_a + p_b - 1.0).max(0.0), p_a.min(p_b))
}

/// The unique table with `P(A=+1) = p_a`, `P(B=+1) = p_b` and
/// `p(+,+) = p_pp`. Rounding-level negative cells are clamped to zero.
pub fn joint_from_marginals(p_a: f64, p_b: f64, p_pp: f64) -> Result<JointModel, BellError> {
    for m in [p_a, p_b] {
        if !(0.0..=1.0).contains(&m) {
            return Err(BellError::Marginal(m));
        }
    }
    let (lower, upper) = frechet_bounds(p_a, p_b);
    if !(p_pp >= lower - JOINT_TOL && p_pp <= upper + JOINT_TOL) {
        return Err(BellError::Frechet { p_pp, lower, upper });
    }
    let p_pp = p_pp.clamp(lower, upper);
    let table = [
        [p_pp, (p_a - p_pp).max(0.0)],
        [(p_b - p_pp).max(0.0), (1.0 - p_a - p_b + p_pp).max(0.0)],
    ];
    Ok(JointModel { table })
}

/// `E = Σ ab·p(a,b) = p(++) + p(−−) − p(+−) − p(−+)`.
pub fn correlation_of_joint(j: &JointModel) -> f64 {
    let t = &j.table;
    t[0][0] + t[1][1] - t[0][1] - t[1][0]
}

/// Result of [`underdetermination_demo`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnderdeterminationReport {
    pub marginals: [f64; 2],
    /// Independence joint, then the maximal-correlation Fréchet extreme.
    pub joints: [JointModel; 2],
    #[serde(rename = "E")]
    pub e: [f64; 2],
    #[serde(rename = "feasible_E")]
    pub feasible_e: [f64; 2],
}

/// Regrades `p` through `g` for both wings and returns two joints sharing
/// those marginals but with different correlators, plus the full feasible
/// correlator interval. `g` is certified with the default grid and
/// tolerance unless it already carries a certificate.
pub fn underdetermination_demo(
    g: &RegraduationMap,
    p: f64,
) -> Result<UnderdeterminationReport, BellError> {
    let report = match g.certificate() {
        Some(cert) => cert.clone(),
        None => crate::regraduation::check_admissibility(g, DEFAULT_GRID, DEFAULT_TOL)?,
    };
    if !report.passing() {
        return Err(BellError::Inadmissible {
            name: g.name().to_string(),
            report: Box::new(report),
        });
    }
    let m = g.eval(p)?;
    let (lower, upper) = frechet_bounds(m, m);
    let independent = joint_from_marginals(m, m, m * m)?;
    let correlated = joint_from_marginals(m, m, upper)?;
    let e_min = correlation_of_joint(&joint_from_marginals(m, m, lower)?);
    let e_max = correlation_of_joint(&correlated);
    Ok(UnderdeterminationReport {
        marginals: [m, m],
        joints: [independent, correlated],
        e: [
            correlation_of_joint(&independent),
            correlation_of_joint(&correlated),
        ],
        feasible_e: [e_min, e_max],
    })
}

/// `phi,E_singlet` rows for `n` evenly spaced angles over `[0, π]`.
pub fn chsh_scan_csv(n: usize) -> String {
    use crate::format::csv_num;
    let mut out = String::from("phi,E_singlet\n");
    let last = n.saturating_sub(1).max(1) as f64;
    for i in 0..n {
        let phi = if i + 1 == n && n > 1 {
            std::f64::consts::PI
        } else {
            std::f64::consts::PI * i as f64 / last
        };
        out.push_str(&format!(
            "{},{}\n",
            csv_num(phi),
            csv_num(singlet_correlation(phi))
        ));
    }
    out
}
