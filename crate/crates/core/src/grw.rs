//! Generalized Robertson–Walker spacetimes `I ×_f F` with metric
//! `−dt² + f(t)² g_F`, and the Ricci lower bound for their spacelike
//! hypersurfaces.
//!
//! Mean curvature follows `H = −(1/n) trace A`. An umbilic point with
//! `A = λ Id` therefore has `λ = −H`; slices `t = τ` have `H = f'(τ)/f(τ)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcs::{hubble, log_second_derivative, Interval, ScalarFunction};
use crate::model_manifold::ModelManifold;
use crate::parabolicity::convergence::TailProbe;
use crate::parabolicity::{
    corollary35_report, criterion_thm31, CheckStatus, Conclusion, CriterionReport, Hypothesis, RicciEvidence,
    Theorem,
};

/// Absolute slack on curvature sign and mean-curvature comparisons.
pub const SLACK: f64 = 1e-12;
const GRID_POINTS: usize = 64;
const GRID_REACH: f64 = 64.0;

#[derive(Debug, Clone, Serialize)]
pub struct GrwSpacetime {
    interval: Interval,
    warping: ScalarFunction,
    dim: usize,
    fiber_sec_floor: f64,
}

impl GrwSpacetime {
    /// `dim` is the fiber (spatial) dimension. The warping function is
    /// restricted to `interval` and must be positive on a validation grid.
    pub fn new(interval: Interval, warping: ScalarFunction, dim: usize, fiber_sec_floor: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid(format!("spatial dimension must be at least 2, got {dim}")));
        }
        if !(interval.lo < interval.hi) {
            return Err(Error::invalid(format!("empty time interval {interval}")));
        }
        if !fiber_sec_floor.is_finite() {
            return Err(Error::invalid("fiber curvature floor must be finite"));
        }
        let warping = warping.with_domain(interval);
        let st = GrwSpacetime {
            interval,
            warping,
            dim,
            fiber_sec_floor,
        };
        for t in st.default_grid() {
            let v = st.warping.eval(t)?;
            if !(v > 0.0) {
                return Err(Error::invalid(format!(
                    "warping function '{}' is not positive at t = {t} (f = {v})",
                    st.warping
                )));
            }
        }
        Ok(st)
    }

    pub fn from_expression(interval: Interval, warping: &str, dim: usize, fiber_sec_floor: f64) -> Result<Self> {
        GrwSpacetime::new(interval, ScalarFunction::parse(warping)?, dim, fiber_sec_floor)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn warping(&self) -> &ScalarFunction {
        &self.warping
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fiber_sec_floor(&self) -> f64 {
        self.fiber_sec_floor
    }

    /// 64 cell midpoints over the interval, truncated to a window of
    /// length 64 when an end is infinite.
    pub fn default_grid(&self) -> Vec<f64> {
        let Interval { lo, hi, .. } = self.interval;
        let (a, b) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo, hi),
            (true, false) => (lo, lo + GRID_REACH),
            (false, true) => (hi - GRID_REACH, hi),
            (false, false) => (-0.5 * GRID_REACH, 0.5 * GRID_REACH),
        };
        (0..GRID_POINTS)
            .map(|i| a + (b - a) * (i as f64 + 0.5) / GRID_POINTS as f64)
            .collect()
    }

    /// `f'(τ)/f(τ)`.
    pub fn hubble(&self, tau: f64) -> Result<f64> {
        self.check_time(tau)?;
        hubble(&self.warping, tau)
    }

    /// `(log f)''(τ)`.
    pub fn log_curvature(&self, tau: f64) -> Result<f64> {
        self.check_time(tau)?;
        log_second_derivative(&self.warping, tau)
    }

    fn check_time(&self, tau: f64) -> Result<()> {
        if self.interval.contains(tau) {
            Ok(())
        } else {
            Err(Error::domain(format!("time {tau} outside {}", self.interval)))
        }
    }

    /// The umbilic slice `t = τ`: `H = f'/f`, `λ = −H`, `|∇τ| = 0`.
    pub fn slice(&self, tau: f64) -> Result<HypersurfacePointData> {
        let h = self.hubble(tau)?;
        HypersurfacePointData::new(tau, h, 0.0, Some(-h))
    }

    /// Right-hand side of the mean curvature condition,
    /// `4(n−1)/n² · (f'/f)²`.
    pub fn meaf_bound(&self, tau: f64) -> Result<f64> {
        let n = self.dim as f64;
        let h = self.hubble(tau)?;
        Ok(4.0 * (n - 1.0) / (n * n) * h * h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypersurfacePointData {
    pub tau: f64,
    /// Mean curvature, `H = −(1/n) trace A`.
    pub h: f64,
    pub grad_tau_sq: f64,
    /// `λ` when the shape operator is `λ Id` at this point.
    pub umbilic_lambda: Option<f64>,
}

impl HypersurfacePointData {
    pub fn new(tau: f64, h: f64, grad_tau_sq: f64, umbilic_lambda: Option<f64>) -> Result<Self> {
        if !(tau.is_finite() && h.is_finite()) {
            return Err(Error::invalid("τ and H must be finite"));
        }
        if !(grad_tau_sq >= 0.0 && grad_tau_sq.is_finite()) {
            return Err(Error::invalid(format!("|∇τ|² must be nonnegative, got {grad_tau_sq}")));
        }
        if let Some(lambda) = umbilic_lambda {
            if (lambda + h).abs() > SLACK * h.abs().max(1.0) {
                return Err(Error::invalid(format!(
                    "umbilic factor λ = {lambda} is inconsistent with H = −λ = {h}"
                )));
            }
        }
        Ok(HypersurfacePointData {
            tau,
            h,
            grad_tau_sq,
            umbilic_lambda,
        })
    }

    /// A point of a maximal hypersurface (`H = 0`).
    pub fn maximal(tau: f64, grad_tau_sq: f64) -> Result<Self> {
        HypersurfacePointData::new(tau, 0.0, grad_tau_sq, None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RicciBound {
    /// Lower bound on `Ric(Y, Y)` for every unit tangent `Y`.
    pub conservative: f64,
    /// `(λ + nH/2)²` at umbilic points; adding it to `conservative` gives
    /// the exact value over a flat fiber with `|∇τ| = 0`.
    pub umbilic_exact_extra: Option<f64>,
    pub log_curvature: f64,
    pub log_concave: bool,
}

impl RicciBound {
    pub fn umbilic_total(&self) -> Option<f64> {
        self.umbilic_exact_extra.map(|e| self.conservative + e)
    }
}

/// `(n−1)(f'/f)² − (log f)''|∇τ|² − n²H²/4`, dropping the curvature terms
/// that are nonnegative under the lemma's hypotheses.
pub fn ricci_lower_bound(st: &GrwSpacetime, p: &HypersurfacePointData) -> Result<RicciBound> {
    if st.fiber_sec_floor < 0.0 {
        return Err(Error::FiberFloorNegative(st.fiber_sec_floor));
    }
    let n = st.dim as f64;
    let h = st.hubble(p.tau)?;
    let lc = st.log_curvature(p.tau)?;
    let conservative = (n - 1.0) * h * h - lc * p.grad_tau_sq - n * n * p.h * p.h / 4.0;
    let umbilic_exact_extra = p.umbilic_lambda.map(|l| {
        let e = l + 0.5 * n * p.h;
        e * e
    });
    Ok(RicciBound {
        conservative,
        umbilic_exact_extra,
        log_curvature: lc,
        log_concave: lc <= SLACK,
    })
}

/// `H² ≤ 4(n−1)/n² · (f'/f)²`. For `n = 2` this is `H² ≤ (f'/f)²`.
pub fn check_meaf(st: &GrwSpacetime, p: &HypersurfacePointData) -> Result<bool> {
    Ok(p.h * p.h <= st.meaf_bound(p.tau)? + SLACK)
}

#[derive(Debug, Clone, Serialize)]
pub struct LogConcavityReport {
    pub holds: bool,
    pub points_checked: usize,
    pub worst_t: f64,
    pub worst_value: f64,
}

/// `(log f)'' ≤ 1e-12` at every grid time.
pub fn check_log_concavity(st: &GrwSpacetime, grid: &[f64]) -> Result<LogConcavityReport> {
    if grid.is_empty() {
        return Err(Error::invalid("log-concavity grid is empty"));
    }
    let mut worst = (f64::NEG_INFINITY, grid[0]);
    for &t in grid {
        let v = st.log_curvature(t)?;
        if v > worst.0 {
            worst = (v, t);
        }
    }
    Ok(LogConcavityReport {
        holds: worst.0 <= SLACK,
        points_checked: grid.len(),
        worst_t: worst.1,
        worst_value: worst.0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NullConvergenceReport {
    pub holds: bool,
    pub fiber_floor_ok: bool,
    pub log_concavity: LogConcavityReport,
}

/// Sufficient condition for the null convergence condition: nonnegative
/// fiber sectional curvature and `(log f)'' ≤ 0`.
pub fn check_null_convergence(st: &GrwSpacetime, grid: &[f64]) -> Result<NullConvergenceReport> {
    let log_concavity = check_log_concavity(st, grid)?;
    let fiber_floor_ok = st.fiber_sec_floor >= 0.0;
    Ok(NullConvergenceReport {
        holds: fiber_floor_ok && log_concavity.holds,
        fiber_floor_ok,
        log_concavity,
    })
}

/// Default grid plus the sample times.
fn pipeline_grid(st: &GrwSpacetime, samples: &[HypersurfacePointData]) -> Vec<f64> {
    let mut g = st.default_grid();
    g.extend(samples.iter().map(|p| p.tau));
    g
}

/// Pushes log-concavity, fiber-floor and mean-curvature checks; returns
/// whether all passed.
fn push_lemma_hypotheses(
    report: &mut CriterionReport,
    st: &GrwSpacetime,
    samples: &[HypersurfacePointData],
    meaf_name: &str,
) -> Result<bool> {
    let lc = check_log_concavity(st, &pipeline_grid(st, samples))?;
    report.hypotheses.push(Hypothesis::from_bool(
        "log_concavity",
        lc.holds,
        format!("max (log f)'' = {:.6e} at t = {:.6e}", lc.worst_value, lc.worst_t),
    ));
    let floor_ok = st.fiber_sec_floor >= 0.0;
    report.hypotheses.push(Hypothesis::from_bool(
        "fiber_curvature",
        floor_ok,
        format!("fiber sectional curvature ≥ {}", st.fiber_sec_floor),
    ));
    if samples.is_empty() {
        report
            .hypotheses
            .push(Hypothesis::new(meaf_name, CheckStatus::Inconclusive, "no hypersurface samples"));
        return Ok(false);
    }
    let mut failed = Vec::new();
    for (i, p) in samples.iter().enumerate() {
        if !check_meaf(st, p)? {
            failed.push(i);
        }
    }
    report.hypotheses.push(Hypothesis::from_bool(
        meaf_name,
        failed.is_empty(),
        if failed.is_empty() {
            format!("holds at all {} samples", samples.len())
        } else {
            format!("fails at samples {failed:?}")
        },
    ));
    Ok(lc.holds && floor_ok && failed.is_empty())
}

/// Log-concave warping, nonnegative fiber curvature and the mean curvature
/// condition give `Ric ≥ 0` on the hypersurface; the density-floor
/// criterion then decides transience on the supplied induced model.
pub fn pipeline_thm43(
    st: &GrwSpacetime,
    samples: &[HypersurfacePointData],
    induced: &ModelManifold,
    sigma0: f64,
    probe: &TailProbe,
) -> Result<CriterionReport> {
    let mut report = CriterionReport::new(Theorem::Thm43);
    if st.dim < 3 {
        report.hypotheses.push(Hypothesis::from_bool(
            "dimension",
            false,
            format!("spatial dimension {} < 3", st.dim),
        ));
        report.note = Some("surfaces are handled by the prop44 pipeline".into());
        return Ok(report);
    }
    if induced.dim() != st.dim {
        return Err(Error::invalid(format!(
            "induced model has dimension {}, spacetime fibers have {}",
            induced.dim(),
            st.dim
        )));
    }
    if !push_lemma_hypotheses(&mut report, st, samples, "mean_curvature")? {
        return Ok(report);
    }
    let evidence = RicciEvidence::Supplied {
        source: "warped-product Ricci lemma".into(),
        holds: true,
    };
    let inner = criterion_thm31(induced, sigma0, &evidence, probe)?;
    report.hypotheses.extend(inner.hypotheses);
    report.conclusion = inner.conclusion;
    report.violation_radius = inner.violation_radius;
    report.bound = inner.bound;
    report.note = inner.note;
    Ok(report)
}

/// For a spacelike surface (`n = 2`) the mean curvature condition
/// `H² ≤ (f'/f)²` with log-concave warping makes the surface parabolic,
/// so no positive density floor is compatible with the entropy bound.
/// With an induced model the violating radius is located.
pub fn pipeline_prop44(
    st: &GrwSpacetime,
    samples: &[HypersurfacePointData],
    sigma0: f64,
    induced: Option<&ModelManifold>,
    probe: &TailProbe,
) -> Result<CriterionReport> {
    if !(sigma0 > 0.0) {
        return Err(Error::invalid(format!("entropy density must be positive, got {sigma0}")));
    }
    let mut report = CriterionReport::new(Theorem::Prop44);
    if st.dim != 2 {
        report.hypotheses.push(Hypothesis::from_bool(
            "dimension",
            false,
            format!("spatial dimension {} ≠ 2", st.dim),
        ));
        report.note = Some("higher dimensions are handled by the thm43 pipeline".into());
        return Ok(report);
    }
    if !push_lemma_hypotheses(&mut report, st, samples, "mean_curvature")? {
        return Ok(report);
    }
    match induced {
        None => {
            report.conclusion = Conclusion::ViolationDetected;
            report.note = Some("the surface is parabolic, so the entropy bound must fail".into());
        }
        Some(m) => match corollary35_report(m, sigma0, probe) {
            Ok(inner) => {
                report.hypotheses.extend(inner.hypotheses);
                report.conclusion = Conclusion::ViolationDetected;
                report.violation_radius = inner.violation_radius;
                report.note = inner.note;
            }
            Err(e) => report.hypotheses.push(Hypothesis::new(
                "induced_model",
                CheckStatus::Inconclusive,
                e.to_string(),
            )),
        },
    }
    Ok(report)
}
