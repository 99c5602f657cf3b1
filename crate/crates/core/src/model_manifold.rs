//! Rotationally symmetric model manifolds `dr² + σ(r)² g_sphere`.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::funcs::{Interval, ScalarFunction};
use crate::quadrature::{integrate, Tolerance};
use crate::rng::{keyed_stream, open_unit, standard_normal};

/// Tolerance used for ball volumes and scale-function integrals.
pub const VOLUME_TOL: f64 = 1e-10;

const VALIDATION_POINTS: usize = 256;
const VALIDATION_REACH: f64 = 64.0;

/// Area of the unit `k`-sphere in `R^{k+1}`: `2π^{(k+1)/2} / Γ((k+1)/2)`.
pub fn unit_sphere_area(k: usize) -> f64 {
    let m = (k + 1) as f64;
    2.0 * PI.powf(0.5 * m) / gamma(0.5 * m)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelManifold {
    dim: usize,
    profile: ScalarFunction,
    r_max: f64,
    #[serde(skip)]
    omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallGeometry {
    pub radius: f64,
    pub area: f64,
    pub volume: f64,
    pub quad_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RicciRange {
    pub r: f64,
    pub ric_min: f64,
    pub ric_max: f64,
    /// Eigenvalue on the radial direction, `−(n−1)σ''/σ`.
    pub radial: f64,
    /// Eigenvalue on directions tangent to the distance sphere.
    pub spherical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RicciDecayViolation {
    pub r: f64,
    pub ric_min: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RicciDecayReport {
    pub c1: f64,
    pub holds: bool,
    pub points_checked: usize,
    pub violations: Vec<RicciDecayViolation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeComparisonOptions {
    /// Monte Carlo samples per radius.
    pub samples: usize,
    pub seed: u64,
    /// Width of the one-sided confidence band, in standard errors.
    pub z: f64,
}

impl Default for VolumeComparisonOptions {
    fn default() -> Self {
        VolumeComparisonOptions {
            samples: 20_000,
            seed: 0x5eed_ba11,
            z: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonVerdict {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeComparisonRow {
    pub radius: f64,
    /// `Vol(B_R(pole))`, by quadrature.
    pub center_volume: f64,
    /// Monte Carlo lower-bound estimate of `Vol(B_{R/2}(p))`, `p` on the sphere of radius R.
    pub off_center_lower: f64,
    pub off_center_stderr: f64,
    /// Exact upper bound: volume of the shell `R/2 < r < 3R/2`.
    pub off_center_upper: f64,
    pub verdict: ComparisonVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeComparisonReport {
    pub c2: f64,
    pub holds: bool,
    pub rows: Vec<VolumeComparisonRow>,
}

impl ModelManifold {
    /// Builds and validates a model: `σ(0) = 0`, `σ'(0) = 1` within 1e-9
    /// and `σ > 0` on a 256-point grid. The radial extent is the upper end
    /// of the profile's domain.
    pub fn new(dim: usize, profile: ScalarFunction) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid(format!("dimension must be at least 2, got {dim}")));
        }
        let dom = profile.domain();
        let r_max = dom.hi;
        if !(r_max > 0.0) {
            return Err(Error::invalid(format!("profile domain {dom} does not reach r > 0")));
        }
        let at_pole = profile.eval_jet2(0.0).map_err(|e| {
            Error::invalid(format!("profile '{profile}' cannot be evaluated at the pole: {e}"))
        })?;
        if at_pole.value.abs() > 1e-9 || (at_pole.d1 - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "profile '{profile}' must satisfy σ(0) = 0 and σ'(0) = 1; got σ(0) = {}, σ'(0) = {}",
                at_pole.value, at_pole.d1
            )));
        }
        let reach = r_max.min(VALIDATION_REACH);
        for i in 1..=VALIDATION_POINTS {
            let mut r = reach * i as f64 / VALIDATION_POINTS as f64;
            if r >= r_max {
                r = reach * (i as f64 - 0.5) / VALIDATION_POINTS as f64;
            }
            let s = profile.eval(r)?;
            if !(s > 0.0) {
                return Err(Error::invalid(format!(
                    "profile '{profile}' is not positive at r = {r} (σ = {s})"
                )));
            }
        }
        Ok(ModelManifold {
            dim,
            profile,
            r_max,
            omega: unit_sphere_area(dim - 1),
        })
    }

    /// Parses the profile and restricts it to `[0, r_max)`.
    pub fn from_expression(dim: usize, profile: &str, r_max: Option<f64>) -> Result<Self> {
        let hi = r_max.unwrap_or(f64::INFINITY);
        let f = ScalarFunction::parse(profile)?.with_domain(Interval {
            lo: 0.0,
            hi,
            lo_closed: true,
            hi_closed: false,
        });
        ModelManifold::new(dim, f)
    }

    /// Flat `R^n`, `σ(r) = r`.
    pub fn euclidean(dim: usize) -> Result<Self> {
        ModelManifold::from_expression(dim, "r", None)
    }

    /// Constant curvature −1, `σ(r) = sinh r`.
    pub fn hyperbolic(dim: usize) -> Result<Self> {
        ModelManifold::from_expression(dim, "sinh(r)", None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn profile(&self) -> &ScalarFunction {
        &self.profile
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn is_complete_noncompact(&self) -> bool {
        self.r_max.is_infinite()
    }

    /// `ω_{n−1}`, the area of the unit distance sphere's model.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if r > 0.0 && r < self.r_max {
            Ok(())
        } else {
            Err(Error::domain(format!("radius {r} outside (0, {})", self.r_max)))
        }
    }

    fn area_unchecked(&self, r: f64) -> Result<f64> {
        let s = self.profile.eval(r)?;
        let a = self.omega * s.powi(self.dim as i32 - 1);
        if a.is_finite() {
            Ok(a)
        } else {
            Err(Error::NonFinite(format!("sphere area overflows at r = {r}")))
        }
    }

    /// `Area(∂B_R) = ω_{n−1} σ(R)^{n−1}`.
    pub fn sphere_area(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        self.area_unchecked(r)
    }

    /// `Vol(B_R) = ∫₀^R Area(∂B_t) dt` by adaptive quadrature.
    pub fn ball_volume(&self, r: f64) -> Result<BallGeometry> {
        self.check_radius(r)?;
        let q = integrate(
            |t| self.area_unchecked(t),
            0.0,
            r,
            Tolerance::scaled(VOLUME_TOL),
        )?;
        Ok(BallGeometry {
            radius: r,
            area: self.area_unchecked(r)?,
            volume: q.value,
            quad_error: q.error,
        })
    }

    /// Volume of the shell `lo < r < hi`.
    pub fn shell_volume(&self, lo: f64, hi: f64) -> Result<f64> {
        let q = integrate(
            |t| self.area_unchecked(t),
            lo,
            hi,
            Tolerance::scaled(VOLUME_TOL),
        )?;
        Ok(q.value)
    }

    /// Ricci eigenvalues at distance `r` from the pole.
    pub fn ricci_range(&self, r: f64) -> Result<RicciRange> {
        self.check_radius(r)?;
        let j = self.profile.eval_jet2(r)?;
        let n = self.dim as f64;
        let curv = j.d2 / j.value;
        let radial = -(n - 1.0) * curv;
        let spherical = -curv + (n - 2.0) * (1.0 - j.d1 * j.d1) / (j.value * j.value);
        Ok(RicciRange {
            r,
            ric_min: radial.min(spherical),
            ric_max: radial.max(spherical),
            radial,
            spherical,
        })
    }

    /// Checks `Ric ≥ −C1 r^{−2}` at every grid radius.
    pub fn check_ricci_decay(&self, c1: f64, grid: &[f64]) -> Result<RicciDecayReport> {
        if !(c1 > 0.0) {
            return Err(Error::invalid(format!("C1 must be positive, got {c1}")));
        }
        let mut violations = Vec::new();
        for &r in grid {
            let ric = self.ricci_range(r)?;
            let bound = -c1 / (r * r);
            if ric.ric_min < bound {
                violations.push(RicciDecayViolation {
                    r,
                    ric_min: ric.ric_min,
                    bound,
                });
            }
        }
        Ok(RicciDecayReport {
            c1,
            holds: violations.is_empty(),
            points_checked: grid.len(),
            violations,
        })
    }

    /// Checks `Vol(B_R(pole)) ≤ C2 · Vol(B_{R/2}(p))` for `p` at distance R
    /// from the pole. By rotational symmetry one boundary point suffices.
    ///
    /// The off-center ball is estimated from below: a sample point at
    /// radius `s` and angle `θ` from `p` counts as inside when one of the
    /// curves "radial to ρ, arc of angle θ at ρ, radial to s" is shorter
    /// than R/2. The exact shell volume `R/2 < r < 3R/2` bounds it from
    /// above. Radii where neither bound decides are reported as
    /// [`Error::EstimatorInconclusive`].
    pub fn check_volume_comparison(
        &self,
        c2: f64,
        grid: &[f64],
        opts: &VolumeComparisonOptions,
    ) -> Result<VolumeComparisonReport> {
        if !(c2 > 0.0) {
            return Err(Error::invalid(format!("C2 must be positive, got {c2}")));
        }
        if opts.samples < 2 {
            return Err(Error::invalid("volume comparison needs at least two samples"));
        }
        let mut rows = Vec::with_capacity(grid.len());
        for (idx, &r) in grid.iter().enumerate() {
            let center_volume = self.ball_volume(r)?.volume;
            let (lower, stderr) = self.off_center_ball_lower(r, opts.samples, opts.seed, idx as u64)?;
            let s_lo = 0.5 * r;
            let s_hi = (1.5 * r).min(self.r_max);
            let upper = self.shell_volume(s_lo, s_hi)?;
            let verdict = if center_volume <= c2 * (lower - opts.z * stderr) {
                ComparisonVerdict::Holds
            } else if center_volume > c2 * upper {
                ComparisonVerdict::Fails
            } else {
                return Err(Error::EstimatorInconclusive {
                    radius: r,
                    detail: format!(
                        "Vol(B_R) = {center_volume:.6e} lies between C2·lower = {:.6e} and C2·upper = {:.6e}",
                        c2 * (lower - opts.z * stderr),
                        c2 * upper
                    ),
                });
            };
            rows.push(VolumeComparisonRow {
                radius: r,
                center_volume,
                off_center_lower: lower,
                off_center_stderr: stderr,
                off_center_upper: upper,
                verdict,
            });
        }
        Ok(VolumeComparisonReport {
            c2,
            holds: rows.iter().all(|r| r.verdict == ComparisonVerdict::Holds),
            rows,
        })
    }

    fn off_center_ball_lower(&self, r: f64, samples: usize, seed: u64, stream: u64) -> Result<(f64, f64)> {
        const RHO_POINTS: usize = 96;
        let half = 0.5 * r;
        let s_lo = half;
        let s_hi = (1.5 * r).min(self.r_max);
        let rho_hi = s_hi.min(self.r_max * (1.0 - 1e-12));
        let mut rho_grid = Vec::with_capacity(RHO_POINTS + 1);
        for k in 0..=RHO_POINTS {
            let rho = rho_hi * k as f64 / RHO_POINTS as f64;
            let sigma = if k == 0 { 0.0 } else { self.profile.eval(rho)? };
            rho_grid.push((rho, sigma));
        }
        let sigma_r = self.profile.eval(r)?;
        let width = s_hi - s_lo;
        let n = self.dim;
        let mut rng = keyed_stream(seed, stream);
        let mut normal = vec![0.0; n];
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..samples {
            let s = s_lo + width * open_unit(&mut rng);
            // angle between a uniform direction and p's direction
            for g in normal.iter_mut() {
                *g = standard_normal(&mut rng);
            }
            let norm = normal.iter().map(|g| g * g).sum::<f64>().sqrt();
            let theta = (normal[0] / norm).clamp(-1.0, 1.0).acos();
            let sigma_s = self.profile.eval(s)?;
            let mut best = (r - s).abs() + theta * sigma_r.min(sigma_s);
            for &(rho, sigma) in &rho_grid {
                let len = (r - rho).abs() + (s - rho).abs() + sigma * theta;
                if len < best {
                    best = len;
                }
            }
            if best < half {
                let w = self.omega * sigma_s.powi(n as i32 - 1) * width;
                sum += w;
                sum_sq += w * w;
            }
        }
        let m = samples as f64;
        let mean = sum / m;
        let var = (sum_sq / m - mean * mean).max(0.0) * m / (m - 1.0);
        Ok((mean, (var / m).sqrt()))
    }

    /// `σ(r)^{1−n}`, the density of the radial scale function.
    pub fn scale_density(&self, r: f64) -> Result<f64> {
        let s = self.profile.eval(r)?;
        let v = s.powi(1 - self.dim as i32);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("σ^(1−n) not finite at r = {r}")))
        }
    }

    /// `∫_a^b σ^{1−n}`.
    pub fn scale_increment(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        self.check_radius(a)?;
        self.check_radius(b)?;
        let q = integrate(|t| self.scale_density(t), a, b, Tolerance::scaled(VOLUME_TOL))?;
        Ok(q.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_sphere_areas() {
        assert_relative_eq!(unit_sphere_area(1), 2.0 * PI, max_relative = 1e-13);
        assert_relative_eq!(unit_sphere_area(2), 4.0 * PI, max_relative = 1e-13);
        assert_relative_eq!(unit_sphere_area(3), 2.0 * PI * PI, max_relative = 1e-13);
        assert_relative_eq!(unit_sphere_area(4), 8.0 * PI * PI / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn sphere_area_examples() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        assert_relative_eq!(e3.sphere_area(1.0).unwrap(), 4.0 * PI, max_relative = 1e-13);
        let e2 = ModelManifold::euclidean(2).unwrap();
        assert_relative_eq!(e2.sphere_area(2.0).unwrap(), 4.0 * PI, max_relative = 1e-13);
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        assert_relative_eq!(h2.sphere_area(1.0).unwrap(), 2.0 * PI * 1f64.sinh(), max_relative = 1e-13);
        assert!((h2.sphere_area(1.0).unwrap() - 7.3840).abs() < 1e-4);
    }

    #[test]
    fn sphere_area_domain() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        assert!(matches!(e3.sphere_area(0.0), Err(Error::Domain(_))));
        assert!(matches!(e3.sphere_area(-1.0), Err(Error::Domain(_))));
        let cap = ModelManifold::from_expression(2, "sin(r)", Some(PI)).unwrap();
        assert!(matches!(cap.sphere_area(PI), Err(Error::Domain(_))));
    }

    #[test]
    fn ball_volume_examples() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        assert_relative_eq!(e3.ball_volume(1.0).unwrap().volume, 4.0 * PI / 3.0, max_relative = 1e-12);
        let e2 = ModelManifold::euclidean(2).unwrap();
        assert_relative_eq!(e2.ball_volume(3.0).unwrap().volume, 9.0 * PI, max_relative = 1e-12);
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        let g = h2.ball_volume(1.0).unwrap();
        assert_relative_eq!(g.volume, 2.0 * PI * (1f64.cosh() - 1.0), max_relative = 1e-12);
        assert!(g.quad_error >= 0.0 && g.area > 0.0);
    }

    #[test]
    fn n2_area_is_two_pi_sigma() {
        let m = ModelManifold::from_expression(2, "sinh(r) + r^3", None).unwrap();
        for r in [0.1, 0.7, 2.3, 9.0] {
            let s = m.profile().eval(r).unwrap();
            assert_relative_eq!(m.sphere_area(r).unwrap() / (2.0 * PI), s, max_relative = 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(ModelManifold::from_expression(3, "r + 1", None).is_err());
        assert!(ModelManifold::from_expression(3, "2*r", None).is_err());
        assert!(ModelManifold::from_expression(3, "r - r^2", None).is_err());
        assert!(ModelManifold::from_expression(1, "r", None).is_err());
    }

    #[test]
    fn ricci_examples() {
        for n in 2..6 {
            let e = ModelManifold::euclidean(n).unwrap();
            let ric = e.ricci_range(1.0).unwrap();
            assert_eq!((ric.ric_min, ric.ric_max), (0.0, 0.0));
        }
        let h2 = ModelManifold::hyperbolic(2).unwrap().ricci_range(1.0).unwrap();
        assert_relative_eq!(h2.ric_min, -1.0, max_relative = 1e-14);
        assert_relative_eq!(h2.ric_max, -1.0, max_relative = 1e-14);
        let h3 = ModelManifold::hyperbolic(3).unwrap().ricci_range(0.5).unwrap();
        assert_relative_eq!(h3.radial, -2.0, max_relative = 1e-13);
        assert_relative_eq!(h3.spherical, -2.0, max_relative = 1e-13);
    }

    #[test]
    fn ricci_decay_examples() {
        let grid: Vec<f64> = (1..=1000).map(|k| 0.1 * k as f64).collect();
        let e = ModelManifold::euclidean(3).unwrap();
        assert!(e.check_ricci_decay(1.0, &grid).unwrap().holds);
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        let rep = h2.check_ricci_decay(1.0, &[0.5, 1.0, 2.0]).unwrap();
        assert!(!rep.holds);
        assert!(rep.violations.iter().any(|v| v.r == 2.0));
        assert!(e.check_ricci_decay(0.0, &grid).is_err());
    }

    #[test]
    fn ricci_decay_for_slowly_bending_profile_matches_finite_differences() {
        // σ(r) = r (1 + r)^0.1 in dimension 3; oracle: eigenvalues from
        // central differences of σ.
        let m = ModelManifold::from_expression(3, "r*(1+r)^0.1", None).unwrap();
        let sigma = |r: f64| r * (1.0 + r).powf(0.1);
        let grid: Vec<f64> = (0..400).map(|k| 1e-3 * 1.03f64.powi(k)).collect();
        let mut oracle_holds = true;
        for &r in &grid {
            let h = 1e-4 * r.max(1e-3);
            let s = sigma(r);
            let d1 = (sigma(r + h) - sigma(r - h)) / (2.0 * h);
            let d2 = (sigma(r + h) - 2.0 * s + sigma(r - h)) / (h * h);
            let radial = -2.0 * d2 / s;
            let spherical = -d2 / s + (1.0 - d1 * d1) / (s * s);
            if radial.min(spherical) < -10.0 / (r * r) {
                oracle_holds = false;
            }
        }
        assert!(oracle_holds);
        assert_eq!(m.check_ricci_decay(10.0, &grid).unwrap().holds, oracle_holds);
    }

    #[test]
    fn volume_comparison_euclidean_plane_holds() {
        let e2 = ModelManifold::euclidean(2).unwrap();
        let rep = e2
            .check_volume_comparison(16.0, &[1.0, 2.0, 4.0], &VolumeComparisonOptions::default())
            .unwrap();
        assert!(rep.holds);
        for row in &rep.rows {
            // exact off-center ball: π (R/2)²
            let exact = PI * 0.25 * row.radius * row.radius;
            assert!(row.off_center_lower <= exact + 4.0 * row.off_center_stderr);
            assert!(row.off_center_upper >= exact);
            assert!(row.off_center_lower > 0.25 * exact);
        }
    }

    #[test]
    fn volume_comparison_euclidean_space_fails_tiny_constant() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let rep = e3
            .check_volume_comparison(0.01, &[1.0], &VolumeComparisonOptions::default())
            .unwrap();
        assert!(!rep.holds);
        // exact ratio Vol(B_1)/Vol(B_1/2) = 8
        let exact_ratio = (4.0 * PI / 3.0) / (4.0 * PI / 3.0 / 8.0);
        assert!(exact_ratio > 0.01);
    }

    #[test]
    fn volume_comparison_empty_grid_is_vacuous() {
        let h = ModelManifold::hyperbolic(3).unwrap();
        assert!(h.check_volume_comparison(1.0, &[], &VolumeComparisonOptions::default()).unwrap().holds);
    }

    #[test]
    fn volume_comparison_ambiguous_band_is_inconclusive() {
        // true ratio 4 in the plane; C2 = 4 sits inside the estimator's band
        let e2 = ModelManifold::euclidean(2).unwrap();
        let r = e2.check_volume_comparison(4.0, &[1.0], &VolumeComparisonOptions::default());
        assert!(matches!(r, Err(Error::EstimatorInconclusive { .. })));
    }

    #[test]
    fn scale_increment_closed_forms() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        assert_relative_eq!(e3.scale_increment(1.0, 2.0).unwrap(), 0.5, max_relative = 1e-12);
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        let exact = (1f64.tanh() / 0.5f64.tanh()).ln();
        // ∫ 1/sinh = ln tanh(r/2)
        assert_relative_eq!(h2.scale_increment(1.0, 2.0).unwrap(), exact, max_relative = 1e-10);
    }
}
