//! Arithmetic induced by a bijection `f`.
//!
//! Ordinary addition and multiplication are transported through `f`:
//!
//! ```text
//! a ⊕ b = f⁻¹(f(a) + f(b))
//! a ⊗ b = f⁻¹(f(a) · f(b))
//! ```
//!
//! The result is only a partial operation: when `f(a) + f(b)` leaves the
//! image of `f` there is nothing for `f⁻¹` to act on. Such cases come back as
//! [`PartialResult::OutOfImage`], or as [`PartialResult::ExtendedInverse`]
//! when the caller opts into an explicitly declared extension of `f⁻¹`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::sampling::Sampler;

/// Inputs closer than this to an open domain endpoint are rejected.
pub const DOMAIN_EPS: f64 = 1e-9;

/// Band at an image boundary inside which a value counts as outside an
/// open end (or inside a closed end).
pub const IMAGE_TOL: f64 = 1e-12;

/// Round-trip tolerance used by [`verify_bijection`].
pub const ROUND_TRIP_TOL: f64 = 1e-12;

/// Half-width of the box used in place of an unbounded domain side when a
/// finite range is needed (sampling, grids).
pub const UNBOUNDED_HALF_WIDTH: f64 = 1e6;

pub type RealMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenArithError {
    #[error("{value} is outside the domain {domain} of {name}")]
    Domain {
        name: String,
        value: f64,
        domain: Interval,
    },
    #[error("{0} declares no extension of its inverse")]
    NoExtension(String),
    #[error("sample count must be at least 1")]
    EmptySample,
    #[error("grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),
    #[error("cannot chain {first} into {second}: image {image} is not inside domain {domain}")]
    IncompatibleChain {
        first: String,
        second: String,
        image: Interval,
        domain: Interval,
    },
}

/// A real interval whose ends may be open, closed or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    pub fn open(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    /// Domain membership: finite, inside, and more than `eps` away from any
    /// open finite endpoint.
    pub fn admits(&self, x: f64, eps: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        let lo_ok = if self.lo.is_infinite() {
            true
        } else if self.lo_closed {
            x >= self.lo
        } else {
            x - self.lo > eps
        };
        let hi_ok = if self.hi.is_infinite() {
            true
        } else if self.hi_closed {
            x <= self.hi
        } else {
            self.hi - x > eps
        };
        lo_ok && hi_ok
    }

    /// Image membership with a boundary band of width `tol`: a closed end
    /// accepts values up to `tol` beyond it, an open end rejects values
    /// within `tol` of it. Sums that land on a boundary therefore always get
    /// the same answer.
    pub fn holds(&self, y: f64, tol: f64) -> bool {
        if !y.is_finite() {
            return false;
        }
        let lo_ok = if self.lo.is_infinite() {
            true
        } else if self.lo_closed {
            y >= self.lo - tol
        } else {
            y > self.lo + tol
        };
        let hi_ok = if self.hi.is_infinite() {
            true
        } else if self.hi_closed {
            y <= self.hi + tol
        } else {
            y < self.hi - tol
        };
        lo_ok && hi_ok
    }

    /// Finite range `[lo, hi]` for grids and sampling: open ends are pulled
    /// inward by `2 * eps` so every point passes [`Interval::admits`],
    /// infinite ends are replaced by `±UNBOUNDED_HALF_WIDTH`.
    pub fn finite_range(&self, eps: f64) -> (f64, f64) {
        let lo = if self.lo.is_infinite() {
            -UNBOUNDED_HALF_WIDTH
        } else if self.lo_closed {
            self.lo
        } else {
            self.lo + 2.0 * eps
        };
        let hi = if self.hi.is_infinite() {
            UNBOUNDED_HALF_WIDTH
        } else if self.hi_closed {
            self.hi
        } else {
            self.hi - 2.0 * eps
        };
        (lo, hi)
    }

    fn contains_interval(&self, other: &Interval) -> bool {
        let lo_ok =
            other.lo > self.lo || (other.lo == self.lo && (self.lo_closed || !other.lo_closed));
        let hi_ok =
            other.hi < self.hi || (other.hi == self.hi && (self.hi_closed || !other.hi_closed));
        lo_ok && hi_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// A named invertible real map with explicit domain and image. It generates
/// one induced arithmetic.
#[derive(Clone)]
pub struct BijectionSpec {
    name: String,
    domain: Interval,
    image: Interval,
    forward: RealMap,
    inverse: RealMap,
    extended_inverse: Option<RealMap>,
    image_closed_under_addition: bool,
}

impl fmt::Debug for BijectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BijectionSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("image", &self.image)
            .field("extended_inverse", &self.extended_inverse.is_some())
            .field(
                "image_closed_under_addition",
                &self.image_closed_under_addition,
            )
            .finish()
    }
}

impl BijectionSpec {
    pub fn new(
        name: impl Into<String>,
        domain: Interval,
        image: Interval,
        forward: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            image,
            forward: Arc::new(forward),
            inverse: Arc::new(inverse),
            extended_inverse: None,
            image_closed_under_addition: false,
        }
    }

    /// Declares an extension of the inverse beyond the image, used only when
    /// the caller asks for it.
    pub fn with_extension(mut self, ext: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.extended_inverse = Some(Arc::new(ext));
        self
    }

    /// Declares whether the image is closed under addition. The declaration
    /// can be checked with [`closure_probe`].
    pub fn declare_closed_under_addition(mut self, closed: bool) -> Self {
        self.image_closed_under_addition = closed;
        self
    }

    pub fn identity() -> Self {
        Self::new(
            "identity",
            Interval::REAL_LINE,
            Interval::REAL_LINE,
            |x| x,
            |y| y,
        )
        .declare_closed_under_addition(true)
    }

    /// Rapidity map: `(-1, 1) -> ℝ`, inverted by `tanh`. Its induced sum is
    /// relativistic velocity addition.
    pub fn artanh() -> Self {
        Self::new(
            "artanh",
            Interval::open(-1.0, 1.0),
            Interval::REAL_LINE,
            f64::atanh,
            f64::tanh,
        )
        .declare_closed_under_addition(true)
    }

    /// `β ↦ β³` on `(-1, 1)`. The image is `(-1, 1)` again, which is not
    /// closed under addition. The inverse extends to ℝ as the real cube root.
    pub fn cube() -> Self {
        Self::new(
            "cube",
            Interval::open(-1.0, 1.0),
            Interval::open(-1.0, 1.0),
            |x| x * x * x,
            f64::cbrt,
        )
        .with_extension(f64::cbrt)
        .declare_closed_under_addition(false)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn image(&self) -> Interval {
        self.image
    }

    pub fn image_closed_under_addition(&self) -> bool {
        self.image_closed_under_addition
    }

    pub fn has_extension(&self) -> bool {
        self.extended_inverse.is_some()
    }

    pub fn forward(&self, x: f64) -> f64 {
        (self.forward)(x)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        (self.inverse)(y)
    }

    fn check_domain(&self, x: f64) -> Result<(), GenArithError> {
        if self.domain.admits(x, DOMAIN_EPS) {
            Ok(())
        } else {
            Err(GenArithError::Domain {
                name: self.name.clone(),
                value: x,
                domain: self.domain,
            })
        }
    }

    /// `next ∘ self`. Requires `self`'s image to sit inside `next`'s domain.
    pub fn then(&self, next: &BijectionSpec) -> Result<BijectionSpec, GenArithError> {
        if !next.domain.contains_interval(&self.image) {
            return Err(GenArithError::IncompatibleChain {
                first: self.name.clone(),
                second: next.name.clone(),
                image: self.image,
                domain: next.domain,
            });
        }
        let (f1, f2) = (self.forward.clone(), next.forward.clone());
        let (g1, g2) = (self.inverse.clone(), next.inverse.clone());
        Ok(Self {
            name: format!("{}∘{}", next.name, self.name),
            domain: self.domain,
            image: next.image,
            forward: Arc::new(move |x| f2(f1(x))),
            inverse: Arc::new(move |y| g1(g2(y))),
            extended_inverse: None,
            image_closed_under_addition: next.image_closed_under_addition,
        })
    }

    /// The isomorphism between the arithmetics induced by `from` and `to`,
    /// `to⁻¹ ∘ from`. It satisfies `h(a ⊕_from b) = h(a) ⊕_to h(b)` wherever
    /// the left side is defined. Requires `from`'s image inside `to`'s image.
    pub fn transfer(
        from: &BijectionSpec,
        to: &BijectionSpec,
    ) -> Result<BijectionSpec, GenArithError> {
        if !to.image.contains_interval(&from.image) {
            return Err(GenArithError::IncompatibleChain {
                first: from.name.clone(),
                second: to.name.clone(),
                image: from.image,
                domain: to.image,
            });
        }
        let (fi, fj_inv) = (from.forward.clone(), to.inverse.clone());
        let (fi_inv, fj) = (from.inverse.clone(), to.forward.clone());
        Ok(Self {
            name: format!("{}⁻¹∘{}", to.name, from.name),
            domain: from.domain,
            image: to.domain,
            forward: Arc::new(move |x| fj_inv(fi(x))),
            inverse: Arc::new(move |z| fi_inv(fj(z))),
            extended_inverse: None,
            image_closed_under_addition: false,
        })
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["identity", "artanh", "cube"];

pub fn builtin(name: &str) -> Option<BijectionSpec> {
    match name {
        "identity" => Some(BijectionSpec::identity()),
        "artanh" => Some(BijectionSpec::artanh()),
        "cube" => Some(BijectionSpec::cube()),
        _ => None,
    }
}

/// Outcome of one induced operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum PartialResult {
    Defined {
        value: f64,
    },
    /// The raw combination left the image and no extension was requested.
    OutOfImage {
        raw_sum: f64,
    },
    /// The raw combination left the image and was mapped back by the
    /// declared extension of the inverse. The operation is not closed here.
    ExtendedInverse {
        value: f64,
        raw_sum: f64,
    },
}

impl PartialResult {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Self::Defined { value } | Self::ExtendedInverse { value, .. } => Some(value),
            Self::OutOfImage { .. } => None,
        }
    }

    pub fn raw_sum(&self) -> Option<f64> {
        match *self {
            Self::OutOfImage { raw_sum } | Self::ExtendedInverse { raw_sum, .. } => Some(raw_sum),
            Self::Defined { .. } => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Self::Defined { .. })
    }
}

fn induced(
    f: &BijectionSpec,
    a: f64,
    b: f64,
    extend: bool,
    combine: impl Fn(f64, f64) -> f64,
) -> Result<PartialResult, GenArithError> {
    f.check_domain(a)?;
    f.check_domain(b)?;
    let raw = combine(f.forward(a), f.forward(b));
    if f.image.holds(raw, IMAGE_TOL) {
        return Ok(PartialResult::Defined {
            value: f.inverse(raw),
        });
    }
    if !extend {
        return Ok(PartialResult::OutOfImage { raw_sum: raw });
    }
    match &f.extended_inverse {
        Some(ext) => Ok(PartialResult::ExtendedInverse {
            value: ext(raw),
            raw_sum: raw,
        }),
        None => Err(GenArithError::NoExtension(f.name.clone())),
    }
}

/// `a ⊕ b = f⁻¹(f(a) + f(b))`.
///
/// `NoExtension` is raised only when the sum actually leaves the image and
/// `extend` is set; asking for an extension that is never needed is not an
/// error.
pub fn induced_add(
    f: &BijectionSpec,
    a: f64,
    b: f64,
    extend: bool,
) -> Result<PartialResult, GenArithError> {
    induced(f, a, b, extend, |x, y| x + y)
}

/// `a ⊗ b = f⁻¹(f(a) · f(b))`, with the same partiality contract as
/// [`induced_add`].
pub fn induced_mul(
    f: &BijectionSpec,
    a: f64,
    b: f64,
    extend: bool,
) -> Result<PartialResult, GenArithError> {
    induced(f, a, b, extend, |x, y| x * y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    pub samples_tested: u64,
    pub violations: u64,
    pub violation_fraction: f64,
    pub example_violation: Option<[f64; 2]>,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.violations == 0
    }
}

/// Draws `n` pairs uniformly from the domain (see [`crate::sampling`] for
/// the generator) and counts those whose `f(a) + f(b)` leaves the image.
/// Pair `i` uses draws `2i` and `2i + 1` of the stream. The first violating
/// pair is kept as the example.
pub fn closure_probe(f: &BijectionSpec, n: u64, seed: u64) -> Result<ClosureReport, GenArithError> {
    if n == 0 {
        return Err(GenArithError::EmptySample);
    }
    let (lo, hi) = f.domain.finite_range(DOMAIN_EPS);
    let mut sampler = Sampler::new(seed);
    let mut violations = 0u64;
    let mut example = None;
    for _ in 0..n {
        let a = sampler.uniform(lo, hi);
        let b = sampler.uniform(lo, hi);
        let raw = f.forward(a) + f.forward(b);
        if !f.image.holds(raw, IMAGE_TOL) {
            violations += 1;
            example.get_or_insert([a, b]);
        }
    }
    Ok(ClosureReport {
        samples_tested: n,
        violations,
        violation_fraction: violations as f64 / n as f64,
        example_violation: example,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum BijectionDiagnostic {
    RoundTrip { x: f64, recovered: f64 },
    NotMonotone { left: f64, right: f64 },
    NonFinite { x: f64, value: f64 },
}

impl fmt::Display for BijectionDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RoundTrip { x, recovered } => {
                write!(
                    f,
                    "round trip failed at x={x}: inverse(forward(x))={recovered}"
                )
            }
            Self::NotMonotone { left, right } => {
                write!(
                    f,
                    "forward not strictly monotone between {left} and {right}"
                )
            }
            Self::NonFinite { x, value } => write!(f, "forward({x}) = {value} is not finite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BijectionCheck {
    pub grid_size: usize,
    pub diagnostics: Vec<BijectionDiagnostic>,
}

impl BijectionCheck {
    pub fn ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Checks round trip and strict monotonicity on a uniform grid over the
/// domain, with open ends pulled inward by [`DOMAIN_EPS`].
pub fn verify_bijection(
    f: &BijectionSpec,
    grid_size: usize,
) -> Result<BijectionCheck, GenArithError> {
    verify_bijection_with(f, grid_size, DOMAIN_EPS)
}

pub fn verify_bijection_with(
    f: &BijectionSpec,
    grid_size: usize,
    eps: f64,
) -> Result<BijectionCheck, GenArithError> {
    if grid_size < 2 {
        return Err(GenArithError::GridTooSmall(grid_size));
    }
    let (lo, hi) = f.domain.finite_range(eps / 2.0);
    let step = (hi - lo) / (grid_size - 1) as f64;
    let xs: Vec<f64> = (0..grid_size)
        .map(|i| {
            if i + 1 == grid_size {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect();

    let mut diagnostics = Vec::new();
    let mut ys = Vec::with_capacity(grid_size);
    for &x in &xs {
        let y = f.forward(x);
        if !y.is_finite() {
            diagnostics.push(BijectionDiagnostic::NonFinite { x, value: y });
        }
        let recovered = f.inverse(y);
        if !((recovered - x).abs() <= ROUND_TRIP_TOL) {
            diagnostics.push(BijectionDiagnostic::RoundTrip { x, recovered });
        }
        ys.push(y);
    }

    let increasing = ys[grid_size - 1] > ys[0];
    for (w, xw) in ys.windows(2).zip(xs.windows(2)) {
        let strict = if increasing { w[1] > w[0] } else { w[1] < w[0] };
        if !strict {
            diagnostics.push(BijectionDiagnostic::NotMonotone {
                left: xw[0],
                right: xw[1],
            });
        }
    }

    Ok(BijectionCheck {
        grid_size,
        diagnostics,
    })
}
