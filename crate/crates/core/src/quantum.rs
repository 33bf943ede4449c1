//! Qubit calibration primitives in the Bloch representation.
//!
//! Every 2×2 Hermitian operator is stored as `(r0, r)` with
//! `M = ½(r0·I + r·σ)`. Density operators have `r0 = 1` and `‖r‖ ≤ 1`; pure
//! states sit on the sphere. Eigenvalues are `½(r0 ± ‖r‖)`, so positivity is
//! a norm inequality and no complex linear algebra is needed.
//!
//! There is deliberately no map from Bures angle to outcome probability for
//! mixed states. Probabilities come only from [`povm_probability`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const STATE_TOL: f64 = 1e-12;
pub const POVM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("Bloch vector norm {0} is not 1")]
    NotPure(f64),
    #[error("Bloch vector norm {0} exceeds 1")]
    NotPositive(f64),
    #[error("density operator needs r0 = 1, got {0}")]
    BadTrace(f64),
    #[error("non-finite component")]
    NonFinite,
    #[error("fidelity {0} outside [0, 1]")]
    Numerical(f64),
    #[error("POVM failed validation: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("outcome {index} out of range for a {len}-outcome POVM")]
    Outcome { index: usize, len: usize },
}

pub type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn finite(a: &Vec3) -> bool {
    a.iter().all(|c| c.is_finite())
}

/// Pure qubit state as a unit Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec3", into = "Vec3")]
pub struct QubitPureState {
    bloch: Vec3,
}

impl QubitPureState {
    pub fn new(bloch: Vec3) -> Result<Self, QuantumError> {
        if !finite(&bloch) {
            return Err(QuantumError::NonFinite);
        }
        let n = norm(&bloch);
        if (n - 1.0).abs() > STATE_TOL {
            return Err(QuantumError::NotPure(n));
        }
        Ok(Self { bloch })
    }

    /// Normalizes any non-zero vector onto the sphere.
    pub fn from_direction(v: Vec3) -> Result<Self, QuantumError> {
        let n = norm(&v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(QuantumError::NotPure(n));
        }
        Self::new([v[0] / n, v[1] / n, v[2] / n])
    }

    /// Polar angle `theta` from +z, azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let s = theta.sin();
        Self {
            bloch: [s * phi.cos(), s * phi.sin(), theta.cos()],
        }
    }

    pub fn zero() -> Self {
        Self {
            bloch: [0.0, 0.0, 1.0],
        }
    }

    pub fn one() -> Self {
        Self {
            bloch: [0.0, 0.0, -1.0],
        }
    }

    pub fn plus() -> Self {
        Self {
            bloch: [1.0, 0.0, 0.0],
        }
    }

    pub fn bloch(&self) -> Vec3 {
        self.bloch
    }

    /// The orthogonal state, `−r` on the sphere.
    pub fn antipode(&self) -> Self {
        Self {
            bloch: self.bloch.map(|c| -c),
        }
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator { r: self.bloch }
    }

    /// The rank-one projector onto this state, as a POVM effect.
    pub fn projector(&self) -> Effect {
        Effect {
            r0: 1.0,
            r: self.bloch,
        }
    }
}

impl TryFrom<Vec3> for QubitPureState {
    type Error = QuantumError;

    fn try_from(v: Vec3) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<QubitPureState> for Vec3 {
    fn from(s: QubitPureState) -> Self {
        s.bloch
    }
}

/// Angle between two Bloch vectors via `atan2(‖a×b‖, a·b)`, which stays
/// accurate near 0 and π where `acos` of the dot product does not.
pub fn bloch_angle(a: &QubitPureState, b: &QubitPureState) -> f64 {
    norm(&cross(&a.bloch, &b.bloch)).atan2(dot(&a.bloch, &b.bloch))
}

/// `|⟨b|a⟩|² = cos²(θ/2)` with `θ` the Bloch angle.
pub fn born_probability(a: &QubitPureState, b: &QubitPureState) -> f64 {
    let c = (0.5 * bloch_angle(a, b)).cos();
    c * c
}

/// Fubini–Study distance `arccos|⟨b|a⟩|`, which is half the Bloch angle.
pub fn fs_distance(a: &QubitPureState, b: &QubitPureState) -> f64 {
    0.5 * bloch_angle(a, b)
}

/// Qubit density operator `ρ = ½(I + r·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr", into = "OperatorRepr")]
pub struct DensityOperator {
    r: Vec3,
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    r0: f64,
    r: Vec3,
}

impl DensityOperator {
    pub fn new(r: Vec3) -> Result<Self, QuantumError> {
        if !finite(&r) {
            return Err(QuantumError::NonFinite);
        }
        let n = norm(&r);
        if n > 1.0 + STATE_TOL {
            return Err(QuantumError::NotPositive(n));
        }
        Ok(Self { r })
    }

    pub fn maximally_mixed() -> Self {
        Self { r: [0.0; 3] }
    }

    pub fn bloch(&self) -> Vec3 {
        self.r
    }

    /// `det ρ = ¼(1 − ‖r‖²)`, clamped at zero for vectors a rounding error
    /// outside the ball.
    pub fn det(&self) -> f64 {
        0.25 * (1.0 - dot(&self.r, &self.r)).max(0.0)
    }

    /// `(ρ00, ρ11, ρ01)` matrix entries; `ρ10` is the conjugate of `ρ01`.
    pub fn entries(&self) -> (f64, f64, (f64, f64)) {
        let [x, y, z] = self.r;
        (0.5 * (1.0 + z), 0.5 * (1.0 - z), (0.5 * x, -0.5 * y))
    }
}

impl TryFrom<OperatorRepr> for DensityOperator {
    type Error = QuantumError;

    fn try_from(repr: OperatorRepr) -> Result<Self, Self::Error> {
        if (repr.r0 - 1.0).abs() > STATE_TOL {
            return Err(QuantumError::BadTrace(repr.r0));
        }
        Self::new(repr.r)
    }
}

impl From<DensityOperator> for OperatorRepr {
    fn from(d: DensityOperator) -> Self {
        OperatorRepr { r0: 1.0, r: d.r }
    }
}

/// What to do when fidelity lands outside `[−1e−12, 1 + 1e−12]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FidelityPolicy {
    #[default]
    Reject,
    Clamp,
}

/// Qubit fidelity `F = tr(ρσ) + 2√(det ρ · det σ)`.
///
/// This is the 2×2 closed form of `(tr√(√ρ σ √ρ))²`. In Bloch form it is
/// `F = ½(1 + r·s + √((1−‖r‖²)(1−‖s‖²)))`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> f64 {
    0.5 * (1.0 + dot(&rho.r, &sigma.r)) + 2.0 * (rho.det() * sigma.det()).sqrt()
}

/// `1 − F` computed without cancellation:
/// `1 − F = ¼(‖r − s‖² + (√(1−‖r‖²) − √(1−‖s‖²))²)`.
fn infidelity(rho: &DensityOperator, sigma: &DensityOperator) -> f64 {
    let d = [
        rho.r[0] - sigma.r[0],
        rho.r[1] - sigma.r[1],
        rho.r[2] - sigma.r[2],
    ];
    let a = 2.0 * rho.det().sqrt();
    let b = 2.0 * sigma.det().sqrt();
    0.25 * (dot(&d, &d) + (a - b) * (a - b))
}

/// Bures angle `arccos √F`, evaluated as `atan2(√(1−F), √F)` with both
/// pieces computed directly so the result is accurate for nearby states.
pub fn bures_angle(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64, QuantumError> {
    bures_angle_with(rho, sigma, FidelityPolicy::default())
}

pub fn bures_angle_with(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    policy: FidelityPolicy,
) -> Result<f64, QuantumError> {
    let f = fidelity(rho, sigma);
    if !(-STATE_TOL..=1.0 + STATE_TOL).contains(&f) && policy == FidelityPolicy::Reject {
        return Err(QuantumError::Numerical(f));
    }
    let f = f.clamp(0.0, 1.0);
    let one_minus = infidelity(rho, sigma).clamp(0.0, 1.0);
    Ok(one_minus.sqrt().atan2(f.sqrt()))
}

/// POVM effect `Π = ½(r0·I + r·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Effect {
    pub r0: f64,
    pub r: Vec3,
}

impl Effect {
    pub fn new(r0: f64, r: Vec3) -> Self {
        Self { r0, r }
    }

    pub fn identity() -> Self {
        Self {
            r0: 2.0,
            r: [0.0; 3],
        }
    }

    /// Smallest eigenvalue, `½(r0 − ‖r‖)`.
    pub fn min_eigenvalue(&self) -> f64 {
        0.5 * (self.r0 - norm(&self.r))
    }

    pub fn scaled(&self, w: f64) -> Self {
        Self {
            r0: w * self.r0,
            r: self.r.map(|c| c * w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Povm {
    pub effects: Vec<Effect>,
}

impl Povm {
    pub fn new(effects: Vec<Effect>) -> Self {
        Self { effects }
    }

    /// Projective measurement along a Bloch direction.
    pub fn projective(axis: &QubitPureState) -> Self {
        Self::new(vec![axis.projector(), axis.antipode().projector()])
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PovmDiagnostic {
    Empty,
    NonFinite {
        index: usize,
    },
    NotPositive {
        index: usize,
        min_eigenvalue: f64,
    },
    /// Entry of `Σ Π_b − I` that exceeds the tolerance.
    NotComplete {
        entry: &'static str,
        deviation: f64,
    },
}

impl fmt::Display for PovmDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "POVM has no effects"),
            Self::NonFinite { index } => write!(f, "effect {index} has a non-finite component"),
            Self::NotPositive {
                index,
                min_eigenvalue,
            } => write!(f, "effect {index} has eigenvalue {min_eigenvalue} < 0"),
            Self::NotComplete { entry, deviation } => {
                write!(
                    f,
                    "effects do not sum to identity: entry {entry} off by {deviation}"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PovmValidation {
    pub diagnostics: Vec<PovmDiagnostic>,
}

impl PovmValidation {
    pub fn valid(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Every effect must have eigenvalues `≥ −1e−12` and the effects must sum to
/// the identity entrywise within `1e−12`.
pub fn validate_povm(povm: &Povm) -> PovmValidation {
    let mut diagnostics = Vec::new();
    if povm.is_empty() {
        diagnostics.push(PovmDiagnostic::Empty);
        return PovmValidation { diagnostics };
    }
    for (index, e) in povm.effects.iter().enumerate() {
        if !e.r0.is_finite() || !finite(&e.r) {
            diagnostics.push(PovmDiagnostic::NonFinite { index });
            continue;
        }
        let min_eigenvalue = e.min_eigenvalue();
        if min_eigenvalue < -POVM_TOL {
            diagnostics.push(PovmDiagnostic::NotPositive {
                index,
                min_eigenvalue,
            });
        }
    }
    let (mut r0, mut r) = (0.0, [0.0; 3]);
    for e in &povm.effects {
        r0 += e.r0;
        for (acc, x) in r.iter_mut().zip(e.r) {
            *acc += x;
        }
    }
    // Σ Π − I in matrix entries
    let deviations = [
        ("00", 0.5 * (r0 + r[2]) - 1.0),
        ("11", 0.5 * (r0 - r[2]) - 1.0),
        ("01.re", 0.5 * r[0]),
        ("01.im", 0.5 * r[1]),
    ];
    for (entry, deviation) in deviations {
        if !(deviation.abs() <= POVM_TOL) {
            diagnostics.push(PovmDiagnostic::NotComplete { entry, deviation });
        }
    }
    PovmValidation { diagnostics }
}

/// `tr(ρΠ) = ½(r0 + r·s)` for outcome `index` of a POVM that passes
/// validation. Values within `1e−12` outside `[0, 1]` are clamped.
pub fn povm_probability(
    rho: &DensityOperator,
    povm: &Povm,
    index: usize,
) -> Result<f64, QuantumError> {
    let validation = validate_povm(povm);
    if !validation.valid() {
        return Err(QuantumError::Validation(
            validation
                .diagnostics
                .iter()
                .map(ToString::to_string)
                .collect(),
        ));
    }
    let effect = povm.effects.get(index).ok_or(QuantumError::Outcome {
        index,
        len: povm.len(),
    })?;
    let p = effect_probability(rho, effect);
    if !(-POVM_TOL..=1.0 + POVM_TOL).contains(&p) {
        return Err(QuantumError::Numerical(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// All outcome probabilities of a validated POVM.
pub fn povm_distribution(rho: &DensityOperator, povm: &Povm) -> Result<Vec<f64>, QuantumError> {
    (0..povm.len())
        .map(|i| povm_probability(rho, povm, i))
        .collect()
}

fn effect_probability(rho: &DensityOperator, effect: &Effect) -> f64 {
    0.5 * (effect.r0 + dot(&rho.r, &effect.r))
}
