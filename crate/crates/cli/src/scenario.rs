//! Scenario files: one JSON object per file, expressions embedded as strings.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use holotrans::brownian_sim::{SimConfig, StepScaling};
use holotrans::entropy_bound::EntropySpec;
use holotrans::grw::{GrwSpacetime, HypersurfacePointData};
use holotrans::parabolicity::convergence::TailProbe;
use holotrans::{Interval, ModelManifold, ScalarFunction};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// An expression in the scalar-function grammar, checked while the file is
/// read so that a malformed formula is reported with its position.
#[derive(Debug, Clone)]
pub struct Expr(pub ScalarFunction);

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.source())
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let src = String::deserialize(d)?;
        ScalarFunction::from_str(&src)
            .map(Expr)
            .map_err(|e| serde::de::Error::custom(format!("invalid expression {src:?}: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Geometry,
    Entropy,
    Thm31,
    Thm32,
    Thm33,
    Cor35,
    Thm43,
    Prop44,
    Simulate,
    RecurrenceTrend,
}

impl Analysis {
    pub const ALL: [Analysis; 10] = [
        Analysis::Geometry,
        Analysis::Entropy,
        Analysis::Thm31,
        Analysis::Thm32,
        Analysis::Thm33,
        Analysis::Cor35,
        Analysis::Thm43,
        Analysis::Prop44,
        Analysis::Simulate,
        Analysis::RecurrenceTrend,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Geometry => "geometry",
            Analysis::Entropy => "entropy",
            Analysis::Thm31 => "thm31",
            Analysis::Thm32 => "thm32",
            Analysis::Thm33 => "thm33",
            Analysis::Cor35 => "cor35",
            Analysis::Thm43 => "thm43",
            Analysis::Prop44 => "prop44",
            Analysis::Simulate => "simulate",
            Analysis::RecurrenceTrend => "recurrence-trend",
        }
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Analysis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Analysis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| CliError::UnknownAnalysis(s.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub dimension: usize,
    /// `σ(r)` as an expression.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Expr>,
    /// `σ(r)` as `[r, σ]` knots for a cubic spline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_table: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeSpec {
    pub warping: Expr,
    /// Base interval; `null` ends are infinite. Ends are open.
    pub interval: [Option<f64>; 2],
    pub dimension: usize,
    #[serde(default)]
    pub fiber_sec_floor: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub tau: f64,
    #[serde(default)]
    pub h: f64,
    #[serde(default)]
    pub grad_tau_sq: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub umbilic_lambda: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceSpec {
    /// Times of slices `{t = τ}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub slices: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<SampleSpec>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyConfig {
    /// Constant entropy density `σ₀`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    /// Radial entropy `S(R)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Expr>,
    /// `S = Area/4`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub saturating: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_doublings: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_tol: Option<f64>,
}

impl ProbeSpec {
    pub fn probe(&self) -> TailProbe {
        let d = TailProbe::default();
        TailProbe {
            r_start: self.r_start.unwrap_or(d.r_start),
            window_doublings: self.window_doublings.unwrap_or(d.window_doublings),
            quad_tol: self.quad_tol.unwrap_or(d.quad_tol),
            fit_classes: d.fit_classes,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thm32Spec {
    pub c1: f64,
    pub c2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison_samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepScalingSpec {
    #[default]
    Fixed,
    Radial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    pub inner: f64,
    pub start: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outer_radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    #[serde(default)]
    pub step_scaling: StepScalingSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<ManifoldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacetime: Option<SpacetimeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypersurface: Option<HypersurfaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy: Option<EntropyConfig>,
    #[serde(default)]
    pub probe: ProbeSpec,
    /// Radii `[lo, hi]` for the entropy analysis; defaults to the range
    /// used by thm31.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thm32: Option<Thm32Spec>,
    /// Inner radius for the capacity oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity_inner: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSpec>,
    pub analyses: Vec<Analysis>,
}

/// Reads a scenario, reporting schema errors with the field path and
/// position.
pub fn parse_scenario(src: &str) -> Result<Scenario, CliError> {
    let mut de = serde_json::Deserializer::from_str(src);
    let scenario: Scenario = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        schema_error(path, e.into_inner())
    })?;
    de.end().map_err(|e| schema_error(".".into(), e))?;
    Ok(scenario)
}

fn schema_error(path: String, e: serde_json::Error) -> CliError {
    let (line, column) = (e.line(), e.column());
    let full = e.to_string();
    let suffix = format!(" at line {line} column {column}");
    CliError::Schema {
        path,
        line,
        column,
        message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
    }
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

fn lift<T>(field: &str, r: holotrans::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| invalid(field, e.to_string()))
}

/// Everything an analysis may need, built from a validated scenario.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub manifold: Option<ModelManifold>,
    pub spacetime: Option<GrwSpacetime>,
    pub samples: Vec<HypersurfacePointData>,
    pub entropy: Option<EntropySpec>,
    pub probe: TailProbe,
    pub bound_range: (f64, f64),
    pub capacity_inner: f64,
}

impl Scenario {
    /// Analyses in execution order.
    pub fn ordered_analyses(&self) -> Vec<Analysis> {
        let mut v = self.analyses.clone();
        v.sort();
        v
    }

    pub fn density(&self) -> Option<f64> {
        self.entropy.as_ref().and_then(|e| e.density)
    }

    /// Checks that every requested analysis has its inputs and builds the
    /// geometric objects.
    pub fn prepare(&self) -> Result<Prepared, CliError> {
        if self.name.trim().is_empty() {
            return Err(invalid("name", "must not be empty"));
        }
        if self.analyses.is_empty() {
            return Err(invalid("analyses", "at least one analysis is required"));
        }
        let mut seen = BTreeSet::new();
        for a in &self.analyses {
            if !seen.insert(*a) {
                return Err(invalid("analyses", format!("'{a}' is requested twice")));
            }
        }

        let probe = self.probe.probe();
        lift("probe", probe.validate())?;

        let manifold = self.manifold.as_ref().map(build_manifold).transpose()?;
        let spacetime = self.spacetime.as_ref().map(build_spacetime).transpose()?;
        let samples = match (&spacetime, &self.hypersurface) {
            (Some(st), Some(h)) => build_samples(st, h)?,
            (None, Some(_)) => return Err(invalid("hypersurface", "requires a spacetime")),
            _ => Vec::new(),
        };
        let entropy = match &self.entropy {
            Some(e) => Some(build_entropy(e, manifold.as_ref())?),
            None => None,
        };

        let bound_range = match self.bound_range {
            Some([lo, hi]) => {
                if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                    return Err(invalid("bound_range", format!("need 0 < lo < hi < ∞, got [{lo}, {hi}]")));
                }
                (lo, hi)
            }
            None => (
                probe.r_start * 2f64.powi(-holotrans::parabolicity::BOUND_LEAD_DOUBLINGS),
                probe.r_end(),
            ),
        };
        let capacity_inner = self.capacity_inner.unwrap_or(probe.r_start);
        if !(capacity_inner > 0.0 && capacity_inner.is_finite()) {
            return Err(invalid("capacity_inner", format!("must be positive, got {capacity_inner}")));
        }

        for a in &self.analyses {
            let need = |present: bool, what: &str| {
                if present {
                    Ok(())
                } else {
                    Err(invalid("analyses", format!("'{a}' requires {what}")))
                }
            };
            let has_manifold = manifold.is_some();
            let has_density = self.density().is_some();
            match a {
                Analysis::Geometry => need(has_manifold, "a manifold")?,
                Analysis::Entropy | Analysis::Thm33 => {
                    need(has_manifold, "a manifold")?;
                    need(entropy.is_some(), "an entropy section")?;
                }
                Analysis::Thm32 => {
                    need(has_manifold, "a manifold")?;
                    need(entropy.is_some(), "an entropy section")?;
                    need(self.thm32.is_some(), "a thm32 section with c1 and c2")?;
                }
                Analysis::Thm31 | Analysis::Cor35 => {
                    need(has_manifold, "a manifold")?;
                    need(has_density, "an entropy density")?;
                }
                Analysis::Thm43 => {
                    need(spacetime.is_some(), "a spacetime")?;
                    need(!samples.is_empty(), "hypersurface slices or samples")?;
                    need(has_manifold, "a manifold for the induced metric")?;
                    need(has_density, "an entropy density")?;
                }
                Analysis::Prop44 => {
                    need(spacetime.is_some(), "a spacetime")?;
                    need(!samples.is_empty(), "hypersurface slices or samples")?;
                    need(has_density, "an entropy density")?;
                }
                Analysis::Simulate => {
                    need(has_manifold, "a manifold")?;
                    let sim = self.simulation.as_ref();
                    need(sim.and_then(|s| s.outer).is_some(), "simulation.outer")?;
                }
                Analysis::RecurrenceTrend => {
                    need(has_manifold, "a manifold")?;
                    let sim = self.simulation.as_ref();
                    need(sim.is_some_and(|s| s.outer_radii.len() >= 3), "at least three simulation.outer_radii")?;
                }
            }
        }
        if let (Some(sim), Some(m)) = (&self.simulation, &manifold) {
            let base = sim_config(sim, m, self.seed, sim.outer.or(sim.outer_radii.first().copied()));
            if let Some(cfg) = base {
                lift("simulation", cfg.validate())?;
            }
            for w in sim.outer_radii.windows(2) {
                if w[1] <= w[0] {
                    return Err(invalid("simulation.outer_radii", "must be increasing"));
                }
            }
        }

        Ok(Prepared {
            manifold,
            spacetime,
            samples,
            entropy,
            probe,
            bound_range,
            capacity_inner,
        })
    }
}

/// Simulation settings for outer radius `outer`.
pub fn sim_config(sim: &SimulationSpec, m: &ModelManifold, seed: u64, outer: Option<f64>) -> Option<SimConfig> {
    let mut cfg = SimConfig::new(m.clone(), sim.inner, sim.start, outer?);
    cfg.seed = seed;
    if let Some(dt) = sim.dt {
        cfg.dt = dt;
    }
    if let Some(p) = sim.paths {
        cfg.paths = p;
    }
    if let Some(s) = sim.max_steps {
        cfg.max_steps = s;
    }
    cfg.step_scaling = match sim.step_scaling {
        StepScalingSpec::Fixed => StepScaling::Fixed,
        StepScalingSpec::Radial => StepScaling::Radial,
    };
    Some(cfg)
}

fn build_manifold(spec: &ManifoldSpec) -> Result<ModelManifold, CliError> {
    let profile = match (&spec.profile, &spec.profile_table) {
        (Some(e), None) => {
            let hi = spec.r_max.unwrap_or(f64::INFINITY);
            e.0.clone().with_domain(Interval {
                lo: 0.0,
                hi,
                lo_closed: true,
                hi_closed: false,
            })
        }
        (None, Some(t)) => {
            if spec.r_max.is_some() {
                return Err(invalid("manifold.r_max", "a tabulated profile ends at its last knot"));
            }
            let pts: Vec<(f64, f64)> = t.iter().map(|p| (p[0], p[1])).collect();
            lift("manifold.profile_table", ScalarFunction::table(&pts))?
        }
        _ => return Err(invalid("manifold", "give exactly one of profile and profile_table")),
    };
    lift("manifold", ModelManifold::new(spec.dimension, profile))
}

fn build_spacetime(spec: &SpacetimeSpec) -> Result<GrwSpacetime, CliError> {
    let interval = Interval::open(
        spec.interval[0].unwrap_or(f64::NEG_INFINITY),
        spec.interval[1].unwrap_or(f64::INFINITY),
    );
    lift(
        "spacetime",
        GrwSpacetime::new(interval, spec.warping.0.clone(), spec.dimension, spec.fiber_sec_floor),
    )
}

fn build_samples(st: &GrwSpacetime, h: &HypersurfaceSpec) -> Result<Vec<HypersurfacePointData>, CliError> {
    let mut out = Vec::with_capacity(h.slices.len() + h.samples.len());
    for &tau in &h.slices {
        out.push(lift("hypersurface.slices", st.slice(tau))?);
    }
    for s in &h.samples {
        if !st.interval().contains(s.tau) {
            return Err(invalid("hypersurface.samples", format!("τ = {} outside {}", s.tau, st.interval())));
        }
        out.push(lift(
            "hypersurface.samples",
            HypersurfacePointData::new(s.tau, s.h, s.grad_tau_sq, s.umbilic_lambda),
        )?);
    }
    Ok(out)
}

fn build_entropy(e: &EntropyConfig, m: Option<&ModelManifold>) -> Result<EntropySpec, CliError> {
    match (e.density, &e.distribution, e.saturating) {
        (Some(s), None, false) => lift("entropy.density", EntropySpec::constant_density(s)),
        (None, Some(d), false) => lift("entropy.distribution", EntropySpec::radial(d.0.clone())),
        (None, None, true) => match m {
            Some(m) => lift("entropy.saturating", EntropySpec::saturating(m)),
            None => Err(invalid("entropy.saturating", "requires a manifold")),
        },
        _ => Err(invalid("entropy", "give exactly one of density, distribution and saturating")),
    }
}
