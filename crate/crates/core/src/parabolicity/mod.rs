//! Transience criteria for model manifolds built on the convergence engine.

pub mod convergence;

use serde::Serialize;

use crate::entropy_bound::{check_bound, entropy_l1_on_manifold, search_violation, BoundReport, EntropySpec};
use crate::error::{Error, Result};
use crate::grid::log_grid;
use crate::model_manifold::{ModelManifold, VolumeComparisonOptions};
use convergence::{classify_integral, ConvergenceStatus, ConvergenceVerdict, TailProbe};

pub use convergence::{FitClass, FitClasses, TailFit};

/// Points in the Ricci and Ricci-decay grids.
pub const CURVATURE_GRID_POINTS: usize = 128;
/// Doublings below the probe start covered by the entropy bound check.
pub const BOUND_LEAD_DOUBLINGS: i32 = 10;
/// Doublings past the probe start the violation search may reach.
pub const SEARCH_DOUBLINGS: i32 = 40;
const RICCI_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Thm31,
    Thm32,
    Thm33,
    Cor35,
    Thm43,
    Prop44,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Transient,
    NonParabolic,
    ViolationDetected,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<ConvergenceVerdict>,
}

impl Hypothesis {
    pub fn new(name: &str, status: CheckStatus, detail: impl Into<String>) -> Self {
        Hypothesis {
            name: name.to_string(),
            status,
            detail: detail.into(),
            verdict: None,
        }
    }

    pub fn from_bool(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Hypothesis::new(name, status, detail)
    }

    /// Passes when the integral converges.
    pub fn from_verdict(name: &str, verdict: ConvergenceVerdict) -> Self {
        let status = match verdict.status {
            ConvergenceStatus::Convergent => CheckStatus::Pass,
            ConvergenceStatus::Divergent => CheckStatus::Fail,
            ConvergenceStatus::Inconclusive => CheckStatus::Inconclusive,
        };
        let detail = match (verdict.value, verdict.error) {
            (Some(v), Some(e)) => format!("integral converges to {v:.10e} ± {e:.2e}"),
            _ if verdict.is_divergent() => "integral diverges".to_string(),
            _ => verdict
                .evidence
                .diagnostic
                .clone()
                .unwrap_or_else(|| "classification inconclusive".into()),
        };
        Hypothesis {
            name: name.to_string(),
            status,
            detail,
            verdict: Some(verdict),
        }
    }

    fn from_error(name: &str, err: &Error) -> Self {
        Hypothesis::new(name, CheckStatus::Inconclusive, err.to_string())
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub theorem: Theorem,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Conclusion,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CriterionReport {
    pub fn new(theorem: Theorem) -> Self {
        CriterionReport {
            theorem,
            hypotheses: Vec::new(),
            conclusion: Conclusion::NotApplicable,
            violation_radius: None,
            bound: None,
            note: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.hypotheses.iter().all(Hypothesis::passed)
    }

    pub fn hypothesis(&self, name: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.name == name)
    }

    fn push(&mut self, h: Hypothesis) -> bool {
        let ok = h.passed();
        self.hypotheses.push(h);
        ok
    }
}

/// Source of the `Ric ≥ 0` hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RicciEvidence {
    /// Evaluate the Ricci eigenvalues on a log grid over the probe range.
    Compute,
    /// Established elsewhere, e.g. by the warped-product lemma.
    Supplied { source: String, holds: bool },
}

fn ricci_nonnegative(m: &ModelManifold, lo: f64, hi: f64) -> Result<Hypothesis> {
    let hi = hi.min(m.r_max() * (1.0 - 1e-9));
    let mut worst = (f64::INFINITY, lo);
    for r in log_grid(lo, hi, CURVATURE_GRID_POINTS)? {
        let ric = m.ricci_range(r)?;
        if ric.ric_min < worst.0 {
            worst = (ric.ric_min, r);
        }
    }
    Ok(Hypothesis::from_bool(
        "ricci_nonnegative",
        worst.0 >= -RICCI_SLACK,
        format!("min Ric = {:.6e} at r = {:.6e} on [{lo:e}, {hi:e}]", worst.0, worst.1),
    ))
}

fn bound_range(probe: &TailProbe) -> (f64, f64) {
    (probe.r_start * 2f64.powi(-BOUND_LEAD_DOUBLINGS), probe.r_end())
}

/// `∫ R dR / Vol(B_R)`; balls whose volume overflows contribute nothing.
pub fn radius_over_volume(m: &ModelManifold, probe: &TailProbe) -> Result<ConvergenceVerdict> {
    classify_integral(
        |r| match m.ball_volume(r) {
            Ok(b) => Ok(r / b.volume),
            Err(Error::NonFinite(_)) => Ok(0.0),
            Err(e) => Err(e),
        },
        probe,
    )
}

/// `∫ dR / Area(∂B_R)`; overflowing areas contribute nothing.
pub fn inverse_area(m: &ModelManifold, probe: &TailProbe) -> Result<ConvergenceVerdict> {
    classify_integral(
        |r| match m.sphere_area(r) {
            Ok(a) => Ok(1.0 / a),
            Err(Error::NonFinite(_)) => Ok(0.0),
            Err(e) => Err(e),
        },
        probe,
    )
}

fn verdict_hypothesis(name: &str, v: Result<ConvergenceVerdict>) -> Hypothesis {
    match v {
        Ok(v) => Hypothesis::from_verdict(name, v),
        Err(e) => Hypothesis::from_error(name, &e),
    }
}

/// Density floor `σ₀`, `Ric ≥ 0` and `R/Vol ∈ L¹` imply transience.
///
/// A failed entropy bound is reported as `ViolationDetected` with the
/// crossing radius. When the volume integral diverges the bound must fail
/// somewhere further out, and the search for that radius continues up to
/// `2^40` times the probe start.
pub fn criterion_thm31(
    m: &ModelManifold,
    sigma0: f64,
    ricci: &RicciEvidence,
    probe: &TailProbe,
) -> Result<CriterionReport> {
    let spec = EntropySpec::constant_density(sigma0)?;
    probe.validate()?;
    let mut report = CriterionReport::new(Theorem::Thm31);
    let (lo, hi) = bound_range(probe);

    let complete = report.push(Hypothesis::from_bool(
        "complete",
        m.is_complete_noncompact(),
        format!("radial extent {}", m.r_max()),
    ));
    if !complete {
        return Ok(report);
    }
    let ricci_ok = match ricci {
        RicciEvidence::Compute => report.push(ricci_nonnegative(m, lo, hi)?),
        RicciEvidence::Supplied { source, holds } => {
            report.push(Hypothesis::from_bool("ricci_nonnegative", *holds, format!("supplied by {source}")))
        }
    };

    let bound = match check_bound(&spec, m, lo, hi) {
        Ok(b) => b,
        Err(e) => {
            report.push(Hypothesis::from_error("entropy_bound", &e));
            return Ok(report);
        }
    };
    let bound_ok = report.push(Hypothesis::from_bool(
        "entropy_bound",
        bound.holds(),
        match bound.first_violation {
            Some(r) => format!("σ₀·Vol(B_R) exceeds Area/4 from R = {r:.15e}"),
            None => format!("holds on [{lo:e}, {hi:e}]"),
        },
    ));
    let first_violation = bound.first_violation;
    report.bound = Some(bound);

    let volume = verdict_hypothesis("volume_growth", radius_over_volume(m, probe));
    let volume_status = volume.status;
    report.push(volume);

    if !bound_ok {
        report.conclusion = Conclusion::ViolationDetected;
        report.violation_radius = first_violation;
        report.note = Some(format!("the entropy bound with density floor {sigma0} fails on this manifold"));
        return Ok(report);
    }
    if !ricci_ok {
        return Ok(report);
    }
    match volume_status {
        CheckStatus::Pass => report.conclusion = Conclusion::Transient,
        CheckStatus::Fail => {
            let budget = probe.r_start * 2f64.powi(SEARCH_DOUBLINGS);
            match search_violation(&spec, m, hi, budget) {
                Ok(found) => {
                    report.push(Hypothesis::from_bool(
                        "entropy_bound_extended",
                        false,
                        format!("σ₀·Vol(B_R) exceeds Area/4 from R = {:.15e}", found.radius),
                    ));
                    report.conclusion = Conclusion::ViolationDetected;
                    report.violation_radius = Some(found.radius);
                    report.note = Some(
                        "volume growth too slow for transience, so the bound must fail beyond the probe range".into(),
                    );
                }
                Err(e) => {
                    report.push(Hypothesis::from_error("entropy_bound_extended", &e));
                }
            }
        }
        CheckStatus::Inconclusive => {}
    }
    Ok(report)
}

/// Radii `R_start · 4^k` inside the probe range.
fn comparison_radii(probe: &TailProbe) -> Vec<f64> {
    (0..=probe.window_doublings)
        .step_by(2)
        .map(|k| probe.r_start * 2f64.powi(k as i32))
        .collect()
}

/// Entropy `1/S ∈ L¹`, Ricci decay `Ric ≥ −C1/r²` and the volume
/// comparison with constant `C2` imply non-parabolicity.
pub fn criterion_thm32(
    m: &ModelManifold,
    entropy: &EntropySpec,
    c1: f64,
    c2: f64,
    probe: &TailProbe,
    comparison: &VolumeComparisonOptions,
) -> Result<CriterionReport> {
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::invalid(format!("C1 and C2 must be positive, got {c1}, {c2}")));
    }
    probe.validate()?;
    let mut report = CriterionReport::new(Theorem::Thm32);

    report.push(verdict_hypothesis("entropy_l1", entropy_l1_on_manifold(entropy, m, probe)));

    let grid = log_grid(probe.r_start, probe.r_end(), CURVATURE_GRID_POINTS)?;
    report.push(match m.check_ricci_decay(c1, &grid) {
        Ok(rep) => Hypothesis::from_bool(
            "ricci_decay",
            rep.holds,
            match rep.violations.first() {
                Some(v) => format!("Ric = {:.6e} below −C1/r² = {:.6e} at r = {:.6e}", v.ric_min, v.bound, v.r),
                None => format!("holds at {} radii", rep.points_checked),
            },
        ),
        Err(e) => Hypothesis::from_error("ricci_decay", &e),
    });

    report.push(match m.check_volume_comparison(c2, &comparison_radii(probe), comparison) {
        Ok(rep) => Hypothesis::from_bool(
            "volume_comparison",
            rep.holds,
            format!("checked at {} radii", rep.rows.len()),
        ),
        Err(e) => Hypothesis::from_error("volume_comparison", &e),
    });

    report.push(verdict_hypothesis("inverse_area", inverse_area(m, probe)));
    report.push(verdict_hypothesis("volume_growth", radius_over_volume(m, probe)));

    if report.all_passed() {
        report.conclusion = Conclusion::NonParabolic;
    }
    Ok(report)
}

/// On a model manifold, `1/S ∈ L¹` and `1/Area ∈ L¹` give transience.
pub fn criterion_thm33(m: &ModelManifold, entropy: &EntropySpec, probe: &TailProbe) -> Result<CriterionReport> {
    probe.validate()?;
    let mut report = CriterionReport::new(Theorem::Thm33);
    report.push(verdict_hypothesis("entropy_l1", entropy_l1_on_manifold(entropy, m, probe)));
    report.push(verdict_hypothesis("inverse_area", inverse_area(m, probe)));
    if report.all_passed() {
        report.conclusion = Conclusion::Transient;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parabolicity {
    Parabolic,
    NonParabolic,
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityReport {
    pub verdict: Parabolicity,
    pub inner_radius: f64,
    /// `∫_a^∞ σ^{1−n}` when finite.
    pub tail: Option<f64>,
    pub tail_error: Option<f64>,
    pub convergence: ConvergenceVerdict,
}

/// The capacity test: non-parabolic iff `∫_a^∞ σ^{1−n} < ∞`.
pub fn capacity_oracle(m: &ModelManifold, a: f64, probe: &TailProbe) -> Result<CapacityReport> {
    if !(a > 0.0 && a < m.r_max()) {
        return Err(Error::invalid(format!("inner radius {a} outside (0, {})", m.r_max())));
    }
    if !m.is_complete_noncompact() {
        return Err(Error::Precondition(format!(
            "capacity test needs an unbounded radial extent, got {}",
            m.r_max()
        )));
    }
    let probe = probe.with_start(a);
    let v = classify_integral(|r| m.scale_density(r), &probe)?;
    let verdict = match v.status {
        ConvergenceStatus::Convergent => Parabolicity::NonParabolic,
        ConvergenceStatus::Divergent => Parabolicity::Parabolic,
        ConvergenceStatus::Inconclusive => {
            return Err(Error::Inconclusive(format!(
                "capacity integral from {a}: {}",
                v.evidence.diagnostic.clone().unwrap_or_default()
            )))
        }
    };
    Ok(CapacityReport {
        verdict,
        inner_radius: a,
        tail: v.value,
        tail_error: v.error,
        convergence: v,
    })
}

/// A parabolic manifold with `Ric ≥ 0` cannot satisfy the entropy bound
/// with any positive density floor; this finds where it fails.
pub fn corollary35_report(m: &ModelManifold, sigma0: f64, probe: &TailProbe) -> Result<CriterionReport> {
    let spec = EntropySpec::constant_density(sigma0)?;
    probe.validate()?;
    let mut report = CriterionReport::new(Theorem::Cor35);
    let (lo, hi) = bound_range(probe);
    let ricci = ricci_nonnegative(m, lo, hi)?;
    if !ricci.passed() {
        return Err(Error::Precondition(format!("Ricci curvature is negative: {}", ricci.detail)));
    }
    report.push(ricci);
    let cap = capacity_oracle(m, probe.r_start, probe)?;
    if cap.verdict != Parabolicity::Parabolic {
        return Err(Error::Precondition(
            "capacity test says the manifold is non-parabolic; the corollary does not apply".into(),
        ));
    }
    report.push(Hypothesis::from_bool("parabolic", true, "capacity integral diverges"));
    let budget = probe.r_start * 2f64.powi(SEARCH_DOUBLINGS);
    let found = search_violation(&spec, m, probe.r_start, budget)?;
    report.conclusion = Conclusion::ViolationDetected;
    report.violation_radius = Some(found.radius);
    report.note = Some(format!(
        "σ₀·Vol(B_R) > Area(∂B_R)/4 for R just above {:.15e}",
        found.radius
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::ScalarFunction;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn probe() -> TailProbe {
        TailProbe::default()
    }

    fn radial(src: &str) -> EntropySpec {
        EntropySpec::radial(ScalarFunction::parse(src).unwrap()).unwrap()
    }

    #[test]
    fn thm31_fischler_susskind() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let rep = criterion_thm31(&e3, 1.0, &RicciEvidence::Compute, &probe()).unwrap();
        assert_eq!(rep.conclusion, Conclusion::ViolationDetected);
        assert_relative_eq!(rep.violation_radius.unwrap(), 0.75, max_relative = 1e-9);
    }

    #[test]
    fn thm31_plane_violates() {
        let e2 = ModelManifold::euclidean(2).unwrap();
        let rep = criterion_thm31(&e2, 1.0, &RicciEvidence::Compute, &probe()).unwrap();
        assert_eq!(rep.conclusion, Conclusion::ViolationDetected);
        assert_relative_eq!(rep.violation_radius.unwrap(), 0.5, max_relative = 1e-9);
    }

    #[test]
    fn thm31_small_density_three_space_is_transient() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let rep = criterion_thm31(&e3, 1e-4, &RicciEvidence::Compute, &probe()).unwrap();
        assert_eq!(rep.conclusion, Conclusion::Transient, "{rep:#?}");
        assert!(rep.all_passed());
    }

    #[test]
    fn thm31_parabolic_plane_never_transient() {
        // the bound holds on the probe range but must fail further out
        let e2 = ModelManifold::euclidean(2).unwrap();
        let rep = criterion_thm31(&e2, 1e-4, &RicciEvidence::Compute, &probe()).unwrap();
        assert_eq!(rep.conclusion, Conclusion::ViolationDetected);
        assert_relative_eq!(rep.violation_radius.unwrap(), 5000.0, max_relative = 1e-9);
        assert!(rep.hypothesis("entropy_bound").unwrap().passed());
    }

    #[test]
    fn thm31_exponential_volume() {
        // Vol(B_R) = 2π(e^{4R}/16 − R/4 − 1/16) and Area/4 − Vol = πR/2
        let m = ModelManifold::from_expression(2, "(exp(4*r) - 1)/4", None).unwrap();
        let short = TailProbe {
            window_doublings: 6,
            ..probe()
        };
        let computed = criterion_thm31(&m, 1.0, &RicciEvidence::Compute, &short).unwrap();
        assert!(computed.hypothesis("entropy_bound").unwrap().passed());
        assert!(computed.hypothesis("volume_growth").unwrap().passed());
        assert_eq!(computed.hypothesis("ricci_nonnegative").unwrap().status, CheckStatus::Fail);
        assert_eq!(computed.conclusion, Conclusion::NotApplicable);

        let asserted = RicciEvidence::Supplied {
            source: "test".into(),
            holds: true,
        };
        let rep = criterion_thm31(&m, 1.0, &asserted, &short).unwrap();
        assert_eq!(rep.conclusion, Conclusion::Transient);
    }

    #[test]
    fn thm32_examples() {
        let opts = VolumeComparisonOptions::default();
        let e3 = ModelManifold::euclidean(3).unwrap();
        let rep = criterion_thm32(&e3, &radial("pi*R^2"), 1.0, 100.0, &probe(), &opts).unwrap();
        assert_eq!(rep.conclusion, Conclusion::NonParabolic, "{rep:#?}");
        let v = rep.hypothesis("entropy_l1").unwrap().verdict.as_ref().unwrap();
        assert_relative_eq!(v.value.unwrap(), 1.0 / PI, max_relative = 1e-6);
        let v = rep.hypothesis("volume_growth").unwrap().verdict.as_ref().unwrap();
        assert_relative_eq!(v.value.unwrap(), 3.0 / (4.0 * PI), max_relative = 1e-6);

        let e2 = ModelManifold::euclidean(2).unwrap();
        let rep = criterion_thm32(&e2, &radial("pi*R/2"), 1.0, 100.0, &probe(), &opts).unwrap();
        assert_eq!(rep.conclusion, Conclusion::NotApplicable);
        assert_eq!(rep.hypothesis("entropy_l1").unwrap().status, CheckStatus::Fail);

        let h3 = ModelManifold::hyperbolic(3).unwrap();
        let s = EntropySpec::saturating(&h3).unwrap();
        let rep = criterion_thm32(&h3, &s, 4.0, 100.0, &probe(), &opts).unwrap();
        assert_eq!(rep.conclusion, Conclusion::NotApplicable);
        assert_eq!(rep.hypothesis("ricci_decay").unwrap().status, CheckStatus::Fail);
    }

    #[test]
    fn thm32_rejects_bad_constants() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let opts = VolumeComparisonOptions::default();
        assert!(criterion_thm32(&e3, &radial("R^2"), 0.0, 1.0, &probe(), &opts).is_err());
    }

    #[test]
    fn thm33_examples() {
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        let s = EntropySpec::saturating(&h2).unwrap();
        let rep = criterion_thm33(&h2, &s, &probe()).unwrap();
        assert_eq!(rep.conclusion, Conclusion::Transient);
        let v = rep.hypothesis("inverse_area").unwrap().verdict.as_ref().unwrap();
        assert_relative_eq!(v.value.unwrap(), 0.12285756271158169, max_relative = 1e-6);

        let e2 = ModelManifold::euclidean(2).unwrap();
        let s = EntropySpec::saturating(&e2).unwrap();
        let rep = criterion_thm33(&e2, &s, &probe()).unwrap();
        assert_eq!(rep.hypothesis("inverse_area").unwrap().status, CheckStatus::Fail);
        assert_eq!(rep.conclusion, Conclusion::NotApplicable);

        let e3 = ModelManifold::euclidean(3).unwrap();
        let s = EntropySpec::saturating(&e3).unwrap();
        let rep = criterion_thm33(&e3, &s, &probe()).unwrap();
        assert_eq!(rep.conclusion, Conclusion::Transient);
        let v = rep.hypothesis("inverse_area").unwrap().verdict.as_ref().unwrap();
        assert_relative_eq!(v.value.unwrap(), 1.0 / (4.0 * PI), max_relative = 1e-6);
    }

    #[test]
    fn capacity_examples() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let c = capacity_oracle(&e3, 1.0, &probe()).unwrap();
        assert_eq!(c.verdict, Parabolicity::NonParabolic);
        assert_relative_eq!(c.tail.unwrap(), 1.0, max_relative = 1e-6);

        let e2 = ModelManifold::euclidean(2).unwrap();
        assert_eq!(capacity_oracle(&e2, 1.0, &probe()).unwrap().verdict, Parabolicity::Parabolic);

        let h2 = ModelManifold::hyperbolic(2).unwrap();
        let c = capacity_oracle(&h2, 1.0, &probe()).unwrap();
        assert_eq!(c.verdict, Parabolicity::NonParabolic);
        assert_relative_eq!(c.tail.unwrap(), 0.7719368329053047, max_relative = 1e-6);
    }

    #[test]
    fn capacity_dimension_dichotomy() {
        for n in 3..=5 {
            let m = ModelManifold::euclidean(n).unwrap();
            let c = capacity_oracle(&m, 1.0, &probe()).unwrap();
            assert_eq!(c.verdict, Parabolicity::NonParabolic);
            assert_relative_eq!(c.tail.unwrap(), 1.0 / (n as f64 - 2.0), max_relative = 1e-6);
        }
    }

    #[test]
    fn corollary35_plane() {
        let e2 = ModelManifold::euclidean(2).unwrap();
        for (sigma0, r) in [(1.0, 0.5), (0.1, 5.0)] {
            let rep = corollary35_report(&e2, sigma0, &probe()).unwrap();
            assert_eq!(rep.conclusion, Conclusion::ViolationDetected);
            assert_relative_eq!(rep.violation_radius.unwrap(), r, max_relative = 1e-9);
        }
        let e3 = ModelManifold::euclidean(3).unwrap();
        assert!(matches!(corollary35_report(&e3, 1.0, &probe()), Err(Error::Precondition(_))));
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        assert!(matches!(corollary35_report(&h2, 1.0, &probe()), Err(Error::Precondition(_))));
    }
}
