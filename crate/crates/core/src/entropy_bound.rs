//! The spacelike entropy bound `S(B_R) ≤ Area(∂B_R)/4` on model manifolds
//! and the exponential volume floor it forces under a density floor.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcs::ScalarFunction;
use crate::grid::log_grid;
use crate::model_manifold::ModelManifold;
use crate::parabolicity::convergence::{classify_integral, ConvergenceVerdict, TailProbe};

/// Minimum number of radii in a bound check.
pub const BOUND_GRID_POINTS: usize = 64;
/// Relative width to which violation radii are bisected.
pub const ROOT_REL_TOL: f64 = 1e-12;
/// Relative slack on sign decisions.
const SLACK: f64 = 1e-12;
const VALIDATION_POINTS: usize = 128;
const VALIDATION_REACH: f64 = 64.0;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntropySpec {
    ConstantDensity { sigma0: f64 },
    RadialDistribution { entropy: ScalarFunction },
}

impl EntropySpec {
    pub fn constant_density(sigma0: f64) -> Result<Self> {
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(Error::invalid(format!("entropy density must be positive, got {sigma0}")));
        }
        Ok(EntropySpec::ConstantDensity { sigma0 })
    }

    /// Validates `S ≥ 0` and `S' ≥ 0` on a grid over the start of the domain.
    pub fn radial(entropy: ScalarFunction) -> Result<Self> {
        let dom = entropy.domain();
        let lo = dom.lo.max(0.0);
        let hi = dom.hi.min(lo + VALIDATION_REACH);
        for i in 1..=VALIDATION_POINTS {
            let r = lo + (hi - lo) * (i as f64 - 0.5) / VALIDATION_POINTS as f64;
            let j = entropy.eval_jet2(r)?;
            if j.value < 0.0 || j.d1 < -SLACK * j.value.abs().max(1.0) {
                return Err(Error::invalid(format!(
                    "entropy distribution '{entropy}' must be nonnegative and nondecreasing; at R = {r}: S = {}, S' = {}",
                    j.value, j.d1
                )));
            }
        }
        Ok(EntropySpec::RadialDistribution { entropy })
    }

    /// `S = Area/4` of the given manifold, which saturates the bound.
    pub fn saturating(m: &ModelManifold) -> Result<Self> {
        let s = m.profile().powf(m.dim() as f64 - 1.0).scaled(0.25 * m.omega());
        EntropySpec::radial(s)
    }

    pub fn sigma0(&self) -> Option<f64> {
        match self {
            EntropySpec::ConstantDensity { sigma0 } => Some(*sigma0),
            EntropySpec::RadialDistribution { .. } => None,
        }
    }
}

/// `S(B_R)` together with the quadrature error it carries.
fn entropy_with_error(spec: &EntropySpec, m: &ModelManifold, r: f64) -> Result<(f64, f64)> {
    match spec {
        EntropySpec::ConstantDensity { sigma0 } => {
            let b = m.ball_volume(r)?;
            Ok((sigma0 * b.volume, sigma0 * b.quad_error))
        }
        EntropySpec::RadialDistribution { entropy } => {
            if !(r > 0.0 && r < m.r_max()) {
                return Err(Error::domain(format!("radius {r} outside (0, {})", m.r_max())));
            }
            Ok((entropy.eval(r)?, 0.0))
        }
    }
}

pub fn entropy_of_ball(spec: &EntropySpec, m: &ModelManifold, r: f64) -> Result<f64> {
    entropy_with_error(spec, m, r).map(|(s, _)| s)
}

#[derive(Debug, Clone, Copy)]
struct MarginSample {
    lhs: f64,
    rhs: f64,
    margin: f64,
    /// Magnitude below which the sign of `margin` is not trusted.
    noise: f64,
}

impl MarginSample {
    fn violated(&self) -> bool {
        self.margin < -self.noise
    }
}

fn margin_at(spec: &EntropySpec, m: &ModelManifold, r: f64) -> Result<MarginSample> {
    let (lhs, err) = entropy_with_error(spec, m, r)?;
    let rhs = 0.25 * m.sphere_area(r)?;
    let margin = rhs - lhs;
    if !margin.is_finite() {
        return Err(Error::NonFinite(format!("entropy bound sides overflow at R = {r}")));
    }
    Ok(MarginSample {
        lhs,
        rhs,
        margin,
        noise: err + SLACK * lhs.abs().max(rhs.abs()),
    })
}

/// Bisects between `ok` (bound holds) and `bad` (violated).
fn bisect_violation(spec: &EntropySpec, m: &ModelManifold, mut ok: f64, mut bad: f64) -> Result<f64> {
    while (bad - ok).abs() > ROOT_REL_TOL * bad.abs() {
        let mid = 0.5 * (ok + bad);
        if mid <= ok.min(bad) || mid >= ok.max(bad) {
            break;
        }
        if margin_at(spec, m, mid)?.margin < 0.0 {
            bad = mid;
        } else {
            ok = mid;
        }
    }
    Ok(bad)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub radius_grid: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub margin: Vec<f64>,
    pub first_violation: Option<f64>,
    /// The bound already fails at the left end of the range, so
    /// `first_violation` is that end rather than a root.
    pub violated_at_start: bool,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Evaluates both sides of the bound on 64 log-spaced radii in
/// `[r_lo, r_hi]` and bisects the first sign change of the margin.
pub fn check_bound(spec: &EntropySpec, m: &ModelManifold, r_lo: f64, r_hi: f64) -> Result<BoundReport> {
    check_bound_with(spec, m, r_lo, r_hi, BOUND_GRID_POINTS)
}

pub fn check_bound_with(
    spec: &EntropySpec,
    m: &ModelManifold,
    r_lo: f64,
    r_hi: f64,
    points: usize,
) -> Result<BoundReport> {
    if !(r_lo > 0.0 && r_hi > r_lo && r_hi < m.r_max()) {
        return Err(Error::invalid(format!(
            "bound range must satisfy 0 < R_lo < R_hi < R_max = {}, got [{r_lo}, {r_hi}]",
            m.r_max()
        )));
    }
    let grid = log_grid(r_lo, r_hi, points.max(BOUND_GRID_POINTS))?;
    let mut report = BoundReport {
        radius_grid: Vec::with_capacity(grid.len()),
        lhs: Vec::with_capacity(grid.len()),
        rhs: Vec::with_capacity(grid.len()),
        margin: Vec::with_capacity(grid.len()),
        first_violation: None,
        violated_at_start: false,
    };
    let mut first_bad: Option<usize> = None;
    for (i, &r) in grid.iter().enumerate() {
        let s = margin_at(spec, m, r)?;
        if first_bad.is_none() && s.violated() {
            first_bad = Some(i);
        }
        report.radius_grid.push(r);
        report.lhs.push(s.lhs);
        report.rhs.push(s.rhs);
        report.margin.push(s.margin);
    }
    match first_bad {
        Some(0) => {
            report.first_violation = Some(grid[0]);
            report.violated_at_start = true;
        }
        Some(i) => report.first_violation = Some(bisect_violation(spec, m, grid[i - 1], grid[i])?),
        None => {}
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationSearch {
    pub radius: f64,
    /// Last radius at which the bound was seen to hold.
    pub last_holding: f64,
    pub steps: usize,
}

/// Ratio between successive radii of the expanding search.
const SEARCH_STEP: f64 = 1.189_207_115_002_721; // 2^{1/4}

/// Finds a violation radius at or beyond `from`, moving out by factors of
/// `2^{1/4}` up to `budget`, then bisects the crossing. If the bound already
/// fails at `from`, the search first halves the radius until it holds.
pub fn search_violation(spec: &EntropySpec, m: &ModelManifold, from: f64, budget: f64) -> Result<ViolationSearch> {
    if !(from > 0.0 && budget > from) {
        return Err(Error::invalid(format!("search range ({from}, {budget}] is empty")));
    }
    let mut r = from;
    let mut steps = 0;
    while margin_at(spec, m, r)?.margin <= 0.0 {
        r *= 0.5;
        steps += 1;
        if r < from * f64::EPSILON {
            return Err(Error::Precondition(format!(
                "entropy bound fails at every radius down to {r:e}"
            )));
        }
    }
    loop {
        let next = (r * SEARCH_STEP).min(budget);
        steps += 1;
        let s = match margin_at(spec, m, next) {
            Ok(s) => s,
            Err(Error::NonFinite(_)) => return Err(Error::SearchBudgetExceeded { budget: next }),
            Err(e) => return Err(e),
        };
        if s.violated() {
            let radius = bisect_violation(spec, m, r, next)?;
            return Ok(ViolationSearch {
                radius,
                last_holding: r,
                steps,
            });
        }
        if next >= budget {
            return Err(Error::SearchBudgetExceeded { budget });
        }
        r = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloorValue {
    /// `e^{4σ₀R}`, `+∞` on overflow.
    pub value: f64,
    pub overflow: bool,
    /// `4σ₀R`, always finite.
    pub log_value: f64,
}

/// `e^{4σ₀R}`.
pub fn implied_volume_floor(sigma0: f64, r: f64) -> Result<FloorValue> {
    if !(sigma0 > 0.0) {
        return Err(Error::invalid(format!("entropy density must be positive, got {sigma0}")));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("radius must be nonnegative, got {r}")));
    }
    let log_value = 4.0 * sigma0 * r;
    let value = log_value.exp();
    Ok(FloorValue {
        value,
        overflow: value.is_infinite(),
        log_value,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FloorRow {
    pub radius: f64,
    pub volume: f64,
    pub floor: FloorValue,
    /// `Vol(B_R) ≥ e^{4σ₀R}`, compared in logarithms.
    pub holds: bool,
    /// `Area/Vol`, the logarithmic derivative of the volume.
    pub log_growth: f64,
    /// `Area/Vol ≥ 4σ₀`.
    pub growth_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeFloorReport {
    pub sigma0: f64,
    pub rows: Vec<FloorRow>,
    pub holds_everywhere: bool,
    pub growth_holds_everywhere: bool,
    /// Radius beyond which the literal floor holds at every grid point,
    /// bisected when it falls between two grid radii.
    pub crossover: Option<f64>,
}

fn floor_gap(m: &ModelManifold, sigma0: f64, r: f64) -> Result<f64> {
    Ok(m.ball_volume(r)?.volume.ln() - 4.0 * sigma0 * r)
}

/// Compares `Vol(B_R)` with `e^{4σ₀R}` on the grid, together with the
/// differential form `(log Vol)' ≥ 4σ₀`.
pub fn check_volume_floor(m: &ModelManifold, sigma0: f64, grid: &[f64]) -> Result<VolumeFloorReport> {
    if !(sigma0 > 0.0) {
        return Err(Error::invalid(format!("entropy density must be positive, got {sigma0}")));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &r in grid {
        let b = m.ball_volume(r)?;
        let floor = implied_volume_floor(sigma0, r)?;
        let log_growth = b.area / b.volume;
        rows.push(FloorRow {
            radius: r,
            volume: b.volume,
            floor,
            holds: b.volume.ln() >= floor.log_value,
            log_growth,
            growth_holds: log_growth >= 4.0 * sigma0,
        });
    }
    let crossover = match rows.iter().rposition(|row| !row.holds) {
        None => rows.first().map(|row| row.radius),
        Some(i) if i + 1 == rows.len() => None,
        Some(i) => {
            let (mut bad, mut ok) = (rows[i].radius, rows[i + 1].radius);
            while ok - bad > ROOT_REL_TOL * ok {
                let mid = 0.5 * (bad + ok);
                if mid <= bad || mid >= ok {
                    break;
                }
                if floor_gap(m, sigma0, mid)? >= 0.0 {
                    ok = mid;
                } else {
                    bad = mid;
                }
            }
            Some(ok)
        }
    };
    Ok(VolumeFloorReport {
        sigma0,
        holds_everywhere: rows.iter().all(|r| r.holds),
        growth_holds_everywhere: rows.iter().all(|r| r.growth_holds),
        rows,
        crossover,
    })
}

/// Classifies `∫^∞ dR / S(R)`.
pub fn entropy_l1_condition(spec: &EntropySpec, probe: &TailProbe) -> Result<ConvergenceVerdict> {
    match spec {
        EntropySpec::RadialDistribution { entropy } => classify_integral(
            |r| {
                let s = entropy.eval(r)?;
                if s > 0.0 {
                    Ok(1.0 / s)
                } else if s.is_infinite() {
                    Ok(0.0)
                } else {
                    Err(Error::domain(format!("S({r}) = {s} is not positive")))
                }
            },
            probe,
        ),
        EntropySpec::ConstantDensity { .. } => Err(Error::invalid(
            "the L¹ entropy condition needs a radial entropy distribution; use entropy_l1_on_manifold",
        )),
    }
}

/// [`entropy_l1_condition`] for either kind of spec, taking
/// `S(B_R) = σ₀ Vol(B_R)` for a constant density.
pub fn entropy_l1_on_manifold(spec: &EntropySpec, m: &ModelManifold, probe: &TailProbe) -> Result<ConvergenceVerdict> {
    match spec {
        EntropySpec::RadialDistribution { .. } => entropy_l1_condition(spec, probe),
        EntropySpec::ConstantDensity { sigma0 } => classify_integral(
            |r| match m.ball_volume(r) {
                Ok(b) => Ok(1.0 / (sigma0 * b.volume)),
                Err(Error::NonFinite(_)) => Ok(0.0),
                Err(e) => Err(e),
            },
            probe,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolicity::convergence::ConvergenceStatus;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn radial(src: &str) -> EntropySpec {
        EntropySpec::radial(ScalarFunction::parse(src).unwrap()).unwrap()
    }

    #[test]
    fn entropy_of_ball_examples() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let unit = EntropySpec::constant_density(1.0).unwrap();
        assert_relative_eq!(entropy_of_ball(&unit, &e3, 1.0).unwrap(), 4.0 * PI / 3.0, max_relative = 1e-12);
        assert!(EntropySpec::constant_density(0.0).is_err());
        assert!(EntropySpec::constant_density(-1.0).is_err());
        assert_eq!(entropy_of_ball(&radial("R^2"), &e3, 3.0).unwrap(), 9.0);
    }

    #[test]
    fn radial_distribution_must_be_monotone() {
        assert!(EntropySpec::radial(ScalarFunction::parse("cos(R)").unwrap()).is_err());
        assert!(EntropySpec::radial(ScalarFunction::parse("R - 5").unwrap()).is_err());
    }

    #[test]
    fn fischler_susskind_radius() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        for (sigma0, expected) in [(1.0, 0.75), (2.0, 0.375)] {
            let spec = EntropySpec::constant_density(sigma0).unwrap();
            let rep = check_bound(&spec, &e3, 0.1, 2.0).unwrap();
            assert!(!rep.violated_at_start);
            assert_relative_eq!(rep.first_violation.unwrap(), expected, max_relative = 1e-9);
            assert_eq!(rep.radius_grid.len(), 64);
        }
    }

    #[test]
    fn hyperbolic_three_space_bound() {
        let h3 = ModelManifold::hyperbolic(3).unwrap();
        // with unit density the volume overtakes a quarter of the area
        let unit = EntropySpec::constant_density(1.0).unwrap();
        let rep = check_bound(&unit, &h3, 0.1, 10.0).unwrap();
        assert_relative_eq!(rep.first_violation.unwrap(), 0.816153296358740, max_relative = 1e-9);
        for sigma0 in [0.4, 0.45, 0.49] {
            let spec = EntropySpec::constant_density(sigma0).unwrap();
            assert!(check_bound(&spec, &h3, 0.1, 10.0).unwrap().holds());
        }
    }

    #[test]
    fn violation_at_range_start_is_flagged() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let spec = EntropySpec::constant_density(1.0).unwrap();
        let rep = check_bound(&spec, &e3, 1.0, 2.0).unwrap();
        assert!(rep.violated_at_start);
        assert_eq!(rep.first_violation, Some(1.0));
    }

    #[test]
    fn margin_is_area_quarter_minus_entropy() {
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        let spec = EntropySpec::constant_density(0.3).unwrap();
        let rep = check_bound(&spec, &h2, 0.05, 5.0).unwrap();
        for (i, &r) in rep.radius_grid.iter().enumerate() {
            let direct = h2.sphere_area(r).unwrap() / 4.0 - entropy_of_ball(&spec, &h2, r).unwrap();
            assert_eq!(rep.margin[i], direct);
        }
    }

    #[test]
    fn range_validation() {
        let m = ModelManifold::from_expression(2, "sin(r)", Some(3.0)).unwrap();
        let spec = EntropySpec::constant_density(1.0).unwrap();
        assert!(check_bound(&spec, &m, 0.1, 3.5).is_err());
        assert!(check_bound(&spec, &m, 0.0, 1.0).is_err());
        assert!(check_bound(&spec, &m, 1.0, 0.5).is_err());
    }

    #[test]
    fn expanding_search_finds_plane_radius() {
        let e2 = ModelManifold::euclidean(2).unwrap();
        for (sigma0, expected) in [(1.0, 0.5), (0.1, 5.0), (1e-3, 500.0)] {
            let spec = EntropySpec::constant_density(sigma0).unwrap();
            let found = search_violation(&spec, &e2, 1.0, 1e6).unwrap();
            assert_relative_eq!(found.radius, expected, max_relative = 1e-9);
        }
        let spec = EntropySpec::constant_density(1e-9).unwrap();
        assert!(matches!(
            search_violation(&spec, &e2, 1.0, 1e3),
            Err(Error::SearchBudgetExceeded { .. })
        ));
    }

    #[test]
    fn volume_floor_values() {
        let f = implied_volume_floor(0.5, 1.0).unwrap();
        assert_relative_eq!(f.value, 7.38905609893065, max_relative = 1e-14);
        assert_eq!(implied_volume_floor(1.0, 0.0).unwrap().value, 1.0);
        assert_relative_eq!(implied_volume_floor(0.25, 2.0).unwrap().value, 7.38905609893065, max_relative = 1e-14);
        let big = implied_volume_floor(1.0, 1e4).unwrap();
        assert!(big.overflow && big.value.is_infinite());
        assert_eq!(big.log_value, 4e4);
        assert!(implied_volume_floor(0.0, 1.0).is_err());
    }

    #[test]
    fn euclidean_volume_floor_fails() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let rep = check_volume_floor(&e3, 1.0, &[1e-3, 10.0]).unwrap();
        assert!(!rep.rows[0].holds);
        assert!(!rep.rows[1].holds);
        assert_relative_eq!(rep.rows[1].volume, 4188.790204786391, max_relative = 1e-10);
        assert!(rep.crossover.is_none());
    }

    #[test]
    fn doubled_hyperbolic_floor_crossover() {
        // Vol ~ (π/16) e^{4R} in dimension 3 stays below e^{4R}
        let m3 = ModelManifold::from_expression(3, "sinh(2*r)/2", None).unwrap();
        let grid = log_grid(0.01, 20.0, 64).unwrap();
        let rep = check_volume_floor(&m3, 1.0, &grid).unwrap();
        assert!(!rep.holds_everywhere && rep.crossover.is_none());
        let ratio = rep.rows.last().unwrap().volume / (80f64).exp();
        assert_relative_eq!(ratio, 0.196349540849362, max_relative = 1e-8);
        // Area/Vol decreases to exactly 4 so only moderate radii are decisive
        assert!(rep.rows.iter().filter(|r| r.radius <= 5.0).all(|r| r.growth_holds));

        let m4 = ModelManifold::from_expression(4, "sinh(2*r)/2", None).unwrap();
        let rep = check_volume_floor(&m4, 1.0, &grid).unwrap();
        assert!(!rep.rows[0].holds);
        assert_relative_eq!(rep.crossover.unwrap(), 1.49453719160005, max_relative = 1e-9);
        let c = rep.crossover.unwrap();
        assert!(rep.rows.iter().filter(|r| r.radius >= c).all(|r| r.holds));
    }

    #[test]
    fn l1_condition_examples() {
        let probe = TailProbe::default();
        let v = entropy_l1_condition(&radial("R^2"), &probe).unwrap();
        assert_eq!(v.status, ConvergenceStatus::Convergent);
        assert_relative_eq!(v.value.unwrap(), 1.0, max_relative = 1e-6);
        let v = entropy_l1_condition(&radial("R"), &probe).unwrap();
        assert_eq!(v.status, ConvergenceStatus::Divergent);
        let v = entropy_l1_condition(&radial("exp(R)"), &probe).unwrap();
        assert_relative_eq!(v.value.unwrap(), (-1f64).exp(), max_relative = 1e-6);
        let unit = EntropySpec::constant_density(1.0).unwrap();
        assert!(entropy_l1_condition(&unit, &probe).is_err());
    }

    #[test]
    fn saturating_entropy_is_quarter_area() {
        let h3 = ModelManifold::hyperbolic(3).unwrap();
        let s = EntropySpec::saturating(&h3).unwrap();
        for r in [0.5, 2.0, 7.0] {
            assert_relative_eq!(
                entropy_of_ball(&s, &h3, r).unwrap(),
                h3.sphere_area(r).unwrap() / 4.0,
                max_relative = 1e-14
            );
        }
    }
}
