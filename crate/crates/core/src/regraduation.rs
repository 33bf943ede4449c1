//! Probability regraduation maps `g: [0,1] -> [0,1]`.
//!
//! A map is admissible when it fixes both boundaries, is strictly increasing
//! and preserves complements, `g(p) + g(1 - p) = 1`. Complement preservation
//! alone forces `g(1/2) = 1/2`. Admissibility is certified numerically on a
//! uniform grid; see [`check_admissibility`].
//!
//! Three distinct admissible maps ship with the crate: [`g_czachor`],
//! [`g_poly`] and [`g_alt`]. Maps that fail admissibility live in
//! [`fixtures`].

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::format::csv_num;

pub const DEFAULT_GRID: usize = 10_001;
pub const DEFAULT_TOL: f64 = 1e-12;

/// Adjacent grid values may differ by at most `CONTINUITY_FACTOR / grid_size`
/// before the continuity heuristic flags a jump.
pub const CONTINUITY_FACTOR: f64 = 10.0;

pub const PLOT_ROWS: usize = 1001;
pub const PLOT_HEADER: &str = "p,g_czachor,g_poly,g_alt";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegradError {
    #[error("p = {0} is outside [0, 1]")]
    Domain(f64),
    #[error("theta({p}) = {theta} leaves [0, pi]")]
    Range { p: f64, theta: f64 },
    #[error("half map must meet 1/2 at p = 1/2, got {0}")]
    Join(f64),
    #[error("half map must start at 0, got {0}")]
    Boundary(f64),
    #[error("half map is not strictly increasing between p = {left} and p = {right}")]
    Monotonicity { left: f64, right: f64 },
    #[error("grid needs at least {min} points, got {got}")]
    GridTooSmall { min: usize, got: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("table: {0}")]
    Table(String),
}

fn check_unit(p: f64) -> Result<(), RegradError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(RegradError::Domain(p))
    }
}

/// `sin²(πp/2)`.
pub fn g_czachor(p: f64) -> Result<f64, RegradError> {
    check_unit(p)?;
    Ok(czachor_raw(p))
}

/// `3p² − 2p³`.
pub fn g_poly(p: f64) -> Result<f64, RegradError> {
    check_unit(p)?;
    Ok(poly_raw(p))
}

/// `sin²((π/2)·s(p))` with the inner map `s` from [`alt_inner`].
pub fn g_alt(p: f64) -> Result<f64, RegradError> {
    check_unit(p)?;
    Ok(alt_raw(p))
}

/// Inner map of [`g_alt`]: `s(p) = 1/2 + 1/2·sin(π(p − 1/2))`. It satisfies
/// `s(1 − p) = 1 − s(p)` and maps `[0,1]` onto itself.
pub fn alt_inner(p: f64) -> f64 {
    0.5 + 0.5 * (PI * (p - 0.5)).sin()
}

fn czachor_raw(p: f64) -> f64 {
    let s = (FRAC_PI_2 * p).sin();
    s * s
}

fn poly_raw(p: f64) -> f64 {
    p * p * (3.0 - 2.0 * p)
}

fn alt_raw(p: f64) -> f64 {
    let s = (FRAC_PI_2 * alt_inner(p)).sin();
    s * s
}

/// Uniform grid on `[0, 1]` with exact endpoints. Point `i` is `i / (n − 1)`.
pub fn unit_grid(n: usize) -> impl Iterator<Item = f64> + Clone {
    let last = (n - 1) as f64;
    (0..n).map(move |i| i as f64 / last)
}

type UnitMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A candidate regraduation map with an optional admissibility certificate.
#[derive(Clone)]
pub struct RegraduationMap {
    name: String,
    formula: String,
    eval: UnitMap,
    certificate: Option<AdmissibilityReport>,
}

impl fmt::Debug for RegraduationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegraduationMap")
            .field("name", &self.name)
            .field("formula", &self.formula)
            .field("certificate", &self.certificate)
            .finish()
    }
}

impl RegraduationMap {
    pub fn new(
        name: impl Into<String>,
        formula: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            formula: formula.into(),
            eval: Arc::new(eval),
            certificate: None,
        }
    }

    pub fn czachor() -> Self {
        Self::new("czachor", "sin^2(pi*p/2)", czachor_raw)
    }

    pub fn poly() -> Self {
        Self::new("poly", "3p^2 - 2p^3", poly_raw)
    }

    pub fn alt() -> Self {
        Self::new(
            "alt",
            "sin^2((pi/2)*s(p)), s(p) = 1/2 + 1/2*sin(pi*(p - 1/2))",
            alt_raw,
        )
    }

    pub fn identity() -> Self {
        Self::new("identity", "p", |p| p)
    }

    /// The three shipped admissible maps.
    pub fn shipped() -> [Self; 3] {
        [Self::czachor(), Self::poly(), Self::alt()]
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "czachor" => Some(Self::czachor()),
            "poly" => Some(Self::poly()),
            "alt" => Some(Self::alt()),
            "identity" => Some(Self::identity()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn formula(&self) -> &str {
        &self.formula
    }

    pub fn eval(&self, p: f64) -> Result<f64, RegradError> {
        check_unit(p)?;
        Ok((self.eval)(p))
    }

    pub(crate) fn eval_unchecked(&self, p: f64) -> f64 {
        (self.eval)(p)
    }

    pub fn certificate(&self) -> Option<&AdmissibilityReport> {
        self.certificate.as_ref()
    }

    /// Runs [`check_admissibility`] and attaches the report.
    pub fn certify(mut self, grid_size: usize, tol: f64) -> Result<Self, RegradError> {
        self.certificate = Some(check_admissibility(&self, grid_size, tol)?);
        Ok(self)
    }

    pub fn is_admissible(&self) -> bool {
        self.certificate
            .as_ref()
            .is_some_and(AdmissibilityReport::passing)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub grid_size: usize,
    pub tol: f64,
    pub boundary_ok: bool,
    pub monotone_ok: bool,
    pub complement_ok: bool,
    /// `max |g(p) + g(1 − p) − 1|` over the grid.
    pub worst_complement_defect: f64,
    /// Grid point where the worst complement defect occurs.
    pub worst_complement_at: f64,
    /// Smallest adjacent increment `g(p_{i+1}) − g(p_i)`; non-positive means
    /// monotonicity fails.
    pub worst_monotonicity_gap: f64,
    /// Heuristic only: largest adjacent jump against `CONTINUITY_FACTOR / grid_size`.
    /// Not part of [`AdmissibilityReport::passing`].
    pub max_adjacent_jump: f64,
    pub continuity_heuristic_ok: bool,
}

impl AdmissibilityReport {
    pub fn passing(&self) -> bool {
        self.boundary_ok && self.monotone_ok && self.complement_ok
    }
}

/// Evaluates `g` on a uniform grid and reports boundary, strict monotonicity
/// and complement defects. Failures are reported, never raised; the only
/// errors are bad grid or tolerance arguments.
pub fn check_admissibility(
    g: &RegraduationMap,
    grid_size: usize,
    tol: f64,
) -> Result<AdmissibilityReport, RegradError> {
    if grid_size < 3 {
        return Err(RegradError::GridTooSmall {
            min: 3,
            got: grid_size,
        });
    }
    if !(tol > 0.0) {
        return Err(RegradError::BadTolerance(tol));
    }
    let ps: Vec<f64> = unit_grid(grid_size).collect();
    let values: Vec<f64> = ps.iter().map(|&p| g.eval_unchecked(p)).collect();
    let n = values.len();

    let boundary_ok = values[0].abs() <= tol && (values[n - 1] - 1.0).abs() <= tol;

    let mut worst_gap = f64::INFINITY;
    let mut max_jump = 0.0f64;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        // NaN propagates as a failed comparison
        if !(d >= worst_gap) {
            worst_gap = d;
        }
        max_jump = max_jump.max(d.abs());
    }
    let monotone_ok = worst_gap > 0.0;

    // mirror index gives the grid point 1 − p_i without a subtraction
    let mut worst_defect = 0.0f64;
    let mut worst_at = ps[0];
    for i in 0..n {
        let defect = (values[i] + values[n - 1 - i] - 1.0).abs();
        if !(defect <= worst_defect) {
            worst_defect = defect;
            worst_at = ps[i];
        }
    }
    let complement_ok = worst_defect <= tol;

    Ok(AdmissibilityReport {
        grid_size,
        tol,
        boundary_ok,
        monotone_ok,
        complement_ok,
        worst_complement_defect: worst_defect,
        worst_complement_at: worst_at,
        worst_monotonicity_gap: worst_gap,
        max_adjacent_jump: max_jump,
        continuity_heuristic_ok: max_jump <= CONTINUITY_FACTOR / grid_size as f64,
    })
}

/// `|g(1/2) − 1/2|`.
pub fn fixed_point_check(g: &RegraduationMap) -> f64 {
    (g.eval_unchecked(0.5) - 0.5).abs()
}

/// A Bloch-angle parametrization `θ: [0,1] -> [0,π]` of the hidden
/// probability, with its complement symmetry `θ(1 − p) = π − θ(p)` tested on
/// a grid.
#[derive(Clone)]
pub struct ThetaParametrization {
    formula: String,
    theta: UnitMap,
    grid_size: usize,
    symmetric: bool,
}

impl fmt::Debug for ThetaParametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThetaParametrization")
            .field("formula", &self.formula)
            .field("grid_size", &self.grid_size)
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl ThetaParametrization {
    pub fn new(
        formula: impl Into<String>,
        theta: impl Fn(f64) -> f64 + Send + Sync + 'static,
        grid_size: usize,
    ) -> Result<Self, RegradError> {
        if grid_size < 3 {
            return Err(RegradError::GridTooSmall {
                min: 3,
                got: grid_size,
            });
        }
        let n = grid_size;
        let ps: Vec<f64> = unit_grid(n).collect();
        let symmetric =
            (0..n).all(|i| (theta(ps[n - 1 - i]) - (PI - theta(ps[i]))).abs() <= DEFAULT_TOL);
        Ok(Self {
            formula: formula.into(),
            theta: Arc::new(theta),
            grid_size,
            symmetric,
        })
    }

    /// The linear ansatz `θ(p) = π(1 − p)`.
    pub fn linear() -> Self {
        Self::new("pi*(1-p)", |p| PI * (1.0 - p), DEFAULT_GRID).expect("valid grid")
    }

    pub fn theta(&self, p: f64) -> f64 {
        (self.theta)(p)
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn formula(&self) -> &str {
        &self.formula
    }
}

/// `g(p) = cos²(θ(p)/2)`, the Born probability at Bloch angle `θ(p)`.
pub fn g_from_theta(tp: &ThetaParametrization) -> Result<RegraduationMap, RegradError> {
    for p in unit_grid(tp.grid_size) {
        let theta = tp.theta(p);
        if !(0.0..=PI).contains(&theta) {
            return Err(RegradError::Range { p, theta });
        }
    }
    let theta = tp.theta.clone();
    Ok(RegraduationMap::new(
        format!("theta[{}]", tp.formula),
        format!("cos^2(theta(p)/2), theta(p) = {}", tp.formula),
        move |p| {
            let c = (0.5 * theta(p)).cos();
            c * c
        },
    ))
}

/// Builds a full map from its restriction to `[0, 1/2]` by reflection,
/// `g(p) = 1 − g_half(1 − p)` for `p > 1/2`. The half map must start at 0,
/// meet 1/2 at the join and be strictly increasing on a `grid_size` grid of
/// `[0, 1/2]`.
pub fn extend_from_half(
    name: impl Into<String>,
    g_half: impl Fn(f64) -> f64 + Send + Sync + 'static,
    grid_size: usize,
) -> Result<RegraduationMap, RegradError> {
    if grid_size < 2 {
        return Err(RegradError::GridTooSmall {
            min: 2,
            got: grid_size,
        });
    }
    let start = g_half(0.0);
    if !(start.abs() <= DEFAULT_TOL) {
        return Err(RegradError::Boundary(start));
    }
    let join = g_half(0.5);
    if !((join - 0.5).abs() <= DEFAULT_TOL) {
        return Err(RegradError::Join(join));
    }
    let ps: Vec<f64> = unit_grid(grid_size).map(|p| 0.5 * p).collect();
    for w in ps.windows(2) {
        if !(g_half(w[1]) > g_half(w[0])) {
            return Err(RegradError::Monotonicity {
                left: w[0],
                right: w[1],
            });
        }
    }
    let name = name.into();
    let formula = format!("{name} on [0,1/2], reflected by g(p) = 1 - g(1-p)");
    Ok(RegraduationMap::new(name, formula, move |p| {
        if p <= 0.5 {
            g_half(p)
        } else {
            1.0 - g_half(1.0 - p)
        }
    }))
}

/// Piecewise-linear map through tabulated points with strictly increasing
/// abscissae. Linear interpolation keeps monotone data monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedMap {
    ps: Vec<f64>,
    gs: Vec<f64>,
}

impl TabulatedMap {
    pub fn from_points(points: Vec<(f64, f64)>) -> Result<Self, RegradError> {
        if points.len() < 2 {
            return Err(RegradError::Table("need at least two points".into()));
        }
        let (ps, gs): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        if ps.iter().chain(&gs).any(|v| !v.is_finite()) {
            return Err(RegradError::Table("non-finite value".into()));
        }
        if let Some(w) = ps.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(RegradError::Table(format!(
                "p column must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { ps, gs })
    }

    /// Parses CSV text with header `p,g`. Blank lines are skipped.
    pub fn parse_csv(text: &str) -> Result<Self, RegradError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| RegradError::Table("empty input".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["p", "g"] {
            return Err(RegradError::Table(format!(
                "expected header 'p,g', got '{header}'"
            )));
        }
        let mut points = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let mut fields = line.split(',').map(str::trim);
            let parse = |f: Option<&str>| -> Result<f64, RegradError> {
                f.ok_or_else(|| RegradError::Table(format!("row {}: missing field", lineno + 1)))?
                    .parse::<f64>()
                    .map_err(|e| RegradError::Table(format!("row {}: {e}", lineno + 1)))
            };
            let p = parse(fields.next())?;
            let g = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(RegradError::Table(format!(
                    "row {}: too many fields",
                    lineno + 1
                )));
            }
            points.push((p, g));
        }
        Self::from_points(points)
    }

    pub fn span(&self) -> (f64, f64) {
        (self.ps[0], self.ps[self.ps.len() - 1])
    }

    /// Interpolated value. Outside the tabulated span the nearest end value
    /// is returned.
    pub fn eval(&self, p: f64) -> f64 {
        let n = self.ps.len();
        if p <= self.ps[0] {
            return self.gs[0];
        }
        if p >= self.ps[n - 1] {
            return self.gs[n - 1];
        }
        let hi = self.ps.partition_point(|&x| x <= p);
        let lo = hi - 1;
        let t = (p - self.ps[lo]) / (self.ps[hi] - self.ps[lo]);
        self.gs[lo] + t * (self.gs[hi] - self.gs[lo])
    }

    /// A full map on `[0, 1]`; the table must span exactly that interval.
    pub fn into_map(self, name: impl Into<String>) -> Result<RegraduationMap, RegradError> {
        if self.span() != (0.0, 1.0) {
            let (lo, hi) = self.span();
            return Err(RegradError::Table(format!(
                "table must span [0, 1], spans [{lo}, {hi}]"
            )));
        }
        let name = name.into();
        let formula = format!("tabulated ({} points, piecewise linear)", self.ps.len());
        Ok(RegraduationMap::new(name, formula, move |p| self.eval(p)))
    }

    /// A full map built by reflecting a table over `[0, 1/2]`; the table must
    /// span exactly `[0, 1/2]` and meet 1/2 there.
    pub fn extend_half(self, name: impl Into<String>) -> Result<RegraduationMap, RegradError> {
        if self.span() != (0.0, 0.5) {
            let (lo, hi) = self.span();
            return Err(RegradError::Table(format!(
                "half table must span [0, 1/2], spans [{lo}, {hi}]"
            )));
        }
        let grid = self.ps.len();
        let check = self.clone();
        // strictness is a property of the data; check the nodes directly
        if let Some(i) = (1..grid).find(|&i| !(check.gs[i] > check.gs[i - 1])) {
            return Err(RegradError::Monotonicity {
                left: check.ps[i - 1],
                right: check.ps[i],
            });
        }
        extend_from_half(name, move |p| self.eval(p), grid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub formula: String,
    pub passing: bool,
    pub certificate: AdmissibilityReport,
}

/// The shipped admissible maps with fresh certificates.
pub fn catalog(grid_size: usize, tol: f64) -> Result<Vec<CatalogEntry>, RegradError> {
    RegraduationMap::shipped()
        .iter()
        .map(|g| {
            let certificate = check_admissibility(g, grid_size, tol)?;
            Ok(CatalogEntry {
                name: g.name().to_string(),
                formula: g.formula().to_string(),
                passing: certificate.passing(),
                certificate,
            })
        })
        .collect()
}

/// Curve data for the three shipped maps: header `p,g_czachor,g_poly,g_alt`
/// then 1001 rows for `p = 0, 0.001, …, 1`, twelve significant digits.
pub fn plot_g_csv() -> String {
    let mut out = String::with_capacity(64 * PLOT_ROWS);
    out.push_str(PLOT_HEADER);
    out.push('\n');
    for p in unit_grid(PLOT_ROWS) {
        let row = [p, czachor_raw(p), poly_raw(p), alt_raw(p)].map(csv_num);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Inadmissible maps kept apart from the shipped ones.
pub mod fixtures {
    use super::*;

    /// `p²`: monotone and boundary-preserving, but `g(1/2) = 1/4`.
    pub fn p_squared() -> RegraduationMap {
        RegraduationMap::new("p_squared", "p^2", |p| p * p)
    }

    /// `θ(p) = π(1 − p)²`: in range and monotone, but not complement
    /// symmetric.
    pub fn asymmetric_theta() -> ThetaParametrization {
        ThetaParametrization::new("pi*(1-p)^2", |p| PI * (1.0 - p) * (1.0 - p), DEFAULT_GRID)
            .expect("valid grid")
    }

    /// `θ ≡ π/2`: symmetric but constant, so `g ≡ 1/2`.
    pub fn constant_theta() -> ThetaParametrization {
        ThetaParametrization::new("pi/2", |_| FRAC_PI_2, DEFAULT_GRID).expect("valid grid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> impl Iterator<Item = f64> + Clone {
        unit_grid(DEFAULT_GRID)
    }

    #[test]
    fn czachor_values() {
        assert_eq!(g_czachor(0.0).unwrap(), 0.0);
        assert!((g_czachor(0.5).unwrap() - 0.5).abs() <= 1e-15);
        // sin²(π/6) = 1/4 exactly
        assert!((g_czachor(1.0 / 3.0).unwrap() - 0.25).abs() <= 1e-15);
        assert_eq!(g_czachor(1.0).unwrap(), 1.0);
    }

    #[test]
    fn poly_values() {
        assert_eq!(g_poly(0.5).unwrap(), 3.0 * 0.25 - 2.0 * 0.125);
        assert_eq!(g_poly(0.5).unwrap(), 0.5);
        assert_eq!(g_poly(1.0).unwrap(), 1.0);
        assert_eq!(g_poly(0.25).unwrap(), 0.15625);
    }

    #[test]
    fn alt_values() {
        assert_eq!(g_alt(0.0).unwrap(), 0.0);
        assert!((g_alt(0.5).unwrap() - 0.5).abs() <= 1e-15);
        // mpmath, 40 digits: 0.0519905320365967102739721280528847015...
        assert!((g_alt(0.25).unwrap() - 0.051_990_532_036_596_71).abs() <= 1e-15);
    }

    #[test]
    fn out_of_range_inputs() {
        for p in [-0.1, 1.1, f64::NAN] {
            assert!(g_czachor(p).is_err());
            assert!(g_poly(p).is_err());
            assert!(g_alt(p).is_err());
            assert!(RegraduationMap::czachor().eval(p).is_err());
        }
    }

    #[test]
    fn cosine_form_is_the_same_map() {
        for p in grid() {
            let cos_form = (1.0 - (PI * p).cos()) / 2.0;
            assert!((g_czachor(p).unwrap() - cos_form).abs() <= 1e-15, "p={p}");
        }
    }

    #[test]
    fn shipped_maps_are_admissible() {
        for g in RegraduationMap::shipped() {
            let r = check_admissibility(&g, DEFAULT_GRID, 1e-12).unwrap();
            assert!(r.passing(), "{}: {r:?}", g.name());
            assert!(r.continuity_heuristic_ok, "{}", g.name());
            assert!(fixed_point_check(&g) <= 1e-12);
        }
        let id = check_admissibility(&RegraduationMap::identity(), 101, 1e-12).unwrap();
        assert!(id.passing());
    }

    #[test]
    fn p_squared_fails_complement_at_half() {
        let r = check_admissibility(&fixtures::p_squared(), DEFAULT_GRID, 1e-12).unwrap();
        assert!(r.boundary_ok && r.monotone_ok);
        assert!(!r.complement_ok);
        assert!(!r.passing());
        assert_eq!(r.worst_complement_defect, 0.5);
        assert_eq!(r.worst_complement_at, 0.5);
        assert_eq!(fixed_point_check(&fixtures::p_squared()), 0.25);
    }

    #[test]
    fn fixed_points() {
        assert!(fixed_point_check(&RegraduationMap::czachor()) <= 1e-15);
        assert!(fixed_point_check(&RegraduationMap::poly()) <= 1e-15);
    }

    #[test]
    fn strict_monotonicity_margins() {
        for g in RegraduationMap::shipped() {
            let vals: Vec<f64> = grid().map(|p| g.eval(p).unwrap()).collect();
            let n = vals.len();
            for (i, w) in vals.windows(2).enumerate() {
                assert!(w[1] > w[0], "{} at {i}", g.name());
                if g.name() == "poly" && i > 0 && i < n - 2 {
                    assert!(w[1] - w[0] > 1e-15, "poly at {i}");
                }
            }
        }
    }

    #[test]
    fn bad_arguments() {
        let g = RegraduationMap::czachor();
        assert!(matches!(
            check_admissibility(&g, 2, 1e-12),
            Err(RegradError::GridTooSmall { .. })
        ));
        assert_eq!(
            check_admissibility(&g, 11, 0.0),
            Err(RegradError::BadTolerance(0.0))
        );
    }

    #[test]
    fn plateau_fails_monotonicity() {
        let g = RegraduationMap::new("clamped", "", |p: f64| ((p - 0.1) / 0.8).clamp(0.0, 1.0));
        let r = check_admissibility(&g, 101, 1e-12).unwrap();
        assert!(!r.monotone_ok);
        assert_eq!(r.worst_monotonicity_gap, 0.0);
    }

    #[test]
    fn jump_trips_continuity_heuristic() {
        let g = RegraduationMap::new("step", "", |p: f64| {
            if p < 0.5 {
                0.1 * p
            } else if p > 0.5 {
                1.0 - 0.1 * (1.0 - p)
            } else {
                0.5
            }
        });
        let r = check_admissibility(&g, 1001, 1e-12).unwrap();
        assert!(r.passing());
        assert!(!r.continuity_heuristic_ok);
    }

    #[test]
    fn linear_theta_reproduces_czachor() {
        let tp = ThetaParametrization::linear();
        assert!(tp.symmetric());
        let g = g_from_theta(&tp).unwrap();
        for p in grid() {
            assert!((g.eval(p).unwrap() - g_czachor(p).unwrap()).abs() <= 1e-12);
        }
        assert!(check_admissibility(&g, DEFAULT_GRID, 1e-12)
            .unwrap()
            .passing());
    }

    #[test]
    fn asymmetric_theta_breaks_complements() {
        let tp = fixtures::asymmetric_theta();
        assert!(!tp.symmetric());
        let g = g_from_theta(&tp).unwrap();
        let r = check_admissibility(&g, DEFAULT_GRID, 1e-12).unwrap();
        assert!(!r.complement_ok);
        // oracle: θ(p) + θ(1−p) = π(p² + (1−p)²); the defect
        // cos²(θ(p)/2) + cos²(θ(1−p)/2) − 1 evaluated directly on the grid
        let oracle = grid()
            .map(|p| {
                let t1 = PI * (1.0 - p).powi(2);
                let t2 = PI * p.powi(2);
                ((t1 / 2.0).cos().powi(2) + (t2 / 2.0).cos().powi(2) - 1.0).abs()
            })
            .fold(0.0, f64::max);
        assert!((r.worst_complement_defect - oracle).abs() <= 1e-12);
        assert!(oracle > 0.1);
    }

    #[test]
    fn constant_theta_is_flat() {
        let tp = fixtures::constant_theta();
        assert!(tp.symmetric());
        let g = g_from_theta(&tp).unwrap();
        for p in [0.0, 0.3, 1.0] {
            assert!((g.eval(p).unwrap() - 0.5).abs() <= 1e-15);
        }
        let r = check_admissibility(&g, DEFAULT_GRID, 1e-12).unwrap();
        assert!(!r.monotone_ok);
        assert!(r.complement_ok);
    }

    #[test]
    fn theta_out_of_range() {
        let tp = ThetaParametrization::new("2*pi*p", |p| 2.0 * PI * p, 101).unwrap();
        assert!(matches!(g_from_theta(&tp), Err(RegradError::Range { .. })));
    }

    #[test]
    fn extend_identity_half() {
        let g = extend_from_half("id", |p| p, 1001).unwrap();
        for p in unit_grid(101) {
            assert!((g.eval(p).unwrap() - p).abs() <= 1e-15);
        }
        assert!(check_admissibility(&g, 101, 1e-12).unwrap().passing());
    }

    #[test]
    fn extend_czachor_half_reproduces_czachor() {
        let g = extend_from_half("czachor-half", czachor_raw, 5001).unwrap();
        for p in grid() {
            assert!((g.eval(p).unwrap() - g_czachor(p).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn extend_errors() {
        assert_eq!(
            extend_from_half("sq", |p| p * p, 101).unwrap_err(),
            RegradError::Join(0.25)
        );
        assert!(matches!(
            extend_from_half("shifted", |p| p + 0.1, 101),
            Err(RegradError::Boundary(_))
        ));
        let flat = |p: f64| {
            if p < 0.25 {
                p
            } else if p < 0.4 {
                0.25
            } else {
                0.25 + 2.5 * (p - 0.4)
            }
        };
        assert!(matches!(
            extend_from_half("flat", flat, 1001),
            Err(RegradError::Monotonicity { .. })
        ));
    }

    #[test]
    fn tabulated_maps() {
        let t = TabulatedMap::parse_csv("p,g\n0,0\n0.5,0.5\n1,1\n").unwrap();
        assert_eq!(t.eval(0.25), 0.25);
        let g = t.into_map("lin").unwrap();
        assert!(check_admissibility(&g, 1001, 1e-12).unwrap().passing());

        let half = TabulatedMap::from_points(vec![(0.0, 0.0), (0.25, 0.1), (0.5, 0.5)]).unwrap();
        let g = half.extend_half("half").unwrap();
        assert!((g.eval(0.75).unwrap() - 0.9).abs() <= 1e-15);
        assert!(check_admissibility(&g, 1001, 1e-12).unwrap().passing());

        let bad_join = TabulatedMap::from_points(vec![(0.0, 0.0), (0.5, 0.4)]).unwrap();
        assert!(matches!(
            bad_join.extend_half("j"),
            Err(RegradError::Join(_))
        ));

        assert!(TabulatedMap::parse_csv("x,y\n0,0\n1,1").is_err());
        assert!(TabulatedMap::parse_csv("p,g\n0,0\n0,1").is_err());
        assert!(TabulatedMap::parse_csv("p,g\n0,0\nzero,1").is_err());
        assert!(TabulatedMap::parse_csv("p,g\n0,0\n0.5,0.5")
            .unwrap()
            .into_map("short")
            .is_err());
    }

    #[test]
    fn maps_are_pairwise_distinct() {
        let maps = RegraduationMap::shipped();
        for i in 0..3 {
            for j in i + 1..3 {
                let d = grid()
                    .map(|p| (maps[i].eval(p).unwrap() - maps[j].eval(p).unwrap()).abs())
                    .fold(0.0, f64::max);
                assert!(d > 0.01, "{} vs {}: {d}", maps[i].name(), maps[j].name());
            }
        }
    }

    #[test]
    fn catalog_serializes() {
        let cat = catalog(1001, 1e-12).unwrap();
        assert_eq!(cat.len(), 3);
        let v = serde_json::to_value(&cat).unwrap();
        assert_eq!(v[0]["name"], "czachor");
        assert_eq!(v[0]["formula"], "sin^2(pi*p/2)");
        assert_eq!(v[1]["certificate"]["complement_ok"], true);
        assert!(cat.iter().all(|e| e.passing));
    }

    #[test]
    fn plot_csv_shape() {
        let csv = plot_g_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], PLOT_HEADER);
        assert_eq!(lines.len(), 1 + PLOT_ROWS);
        assert_eq!(lines[1], "0,0,0,0");
        assert_eq!(lines[501], "0.5,0.5,0.5,0.5");
        assert_eq!(lines[PLOT_ROWS], "1,1,1,1");
        assert_eq!(csv, plot_g_csv());
    }
}
