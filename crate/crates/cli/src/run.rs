//! Executes a scenario's analyses and collects the result bundle.

use std::path::Path;
use std::time::Instant;

use holotrans::brownian_sim::{exact_hitting_probability, recurrence_monte_carlo, simulate_annulus, TrendReport};
use holotrans::entropy_bound::{check_bound, check_volume_floor, entropy_l1_on_manifold, BoundReport};
use holotrans::grid::log_grid;
use holotrans::grw::{pipeline_prop44, pipeline_thm43};
use holotrans::model_manifold::VolumeComparisonOptions;
use holotrans::parabolicity::{
    capacity_oracle, corollary35_report, criterion_thm31, criterion_thm32, criterion_thm33, Parabolicity,
    RicciEvidence,
};
use holotrans::brownian_sim::Trend;
use holotrans::ModelManifold;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{write_bound_csv, write_trend_csv};
use crate::scenario::{sim_config, Analysis, Prepared, Scenario};
use crate::CliError;

pub const TOOL: &str = "holotrans";
const GEOMETRY_RADII: usize = 12;
const FLOOR_RADII: usize = 16;

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisError {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Result(Value),
    Error(AnalysisError),
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisOutcome {
    pub analysis: Analysis,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultBundle {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub scenario: Scenario,
    pub results: Vec<AnalysisOutcome>,
    pub wall_time_seconds: f64,
}

impl ResultBundle {
    pub fn has_errors(&self) -> bool {
        self.results.iter().any(|r| matches!(r.outcome, Outcome::Error(_)))
    }

    pub fn result(&self, analysis: Analysis) -> Option<&Value> {
        self.results.iter().find(|r| r.analysis == analysis).and_then(|r| match &r.outcome {
            Outcome::Result(v) => Some(v),
            Outcome::Error(_) => None,
        })
    }
}

/// Tables available for CSV emission.
#[derive(Debug, Clone)]
pub enum Table {
    Bound(BoundReport),
    Trend(TrendReport),
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub bundle: ResultBundle,
    pub tables: Vec<(String, Table)>,
}

impl RunOutput {
    /// Writes every table as `<name>.csv` under `dir`.
    pub fn write_csv(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>, CliError> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (name, table) in &self.tables {
            let path = dir.join(format!("{name}.csv"));
            match table {
                Table::Bound(rep) => write_bound_csv(&path, rep)?,
                Table::Trend(rep) => write_trend_csv(&path, rep)?,
            }
            written.push(path);
        }
        Ok(written)
    }
}

type Step = std::result::Result<Value, holotrans::Error>;

fn value<T: Serialize>(x: T) -> Step {
    Ok(serde_json::to_value(x).expect("reports serialize to JSON"))
}

fn error_value(e: &holotrans::Error) -> Value {
    json!({ "kind": e.kind(), "message": e.to_string() })
}

struct Runner<'a> {
    scenario: &'a Scenario,
    prep: &'a Prepared,
    seed: u64,
    tables: Vec<(String, Table)>,
}

impl Runner<'_> {
    fn manifold(&self) -> &ModelManifold {
        self.prep.manifold.as_ref().expect("validated")
    }

    fn density(&self) -> f64 {
        self.scenario.density().expect("validated")
    }

    fn capacity(&self) -> Value {
        match capacity_oracle(self.manifold(), self.prep.capacity_inner, &self.prep.probe) {
            Ok(c) => serde_json::to_value(c).expect("reports serialize to JSON"),
            Err(e) => json!({ "error": error_value(&e) }),
        }
    }

    fn run(&mut self, a: Analysis) -> Step {
        let probe = &self.prep.probe;
        match a {
            Analysis::Geometry => self.geometry(),
            Analysis::Entropy => self.entropy(),
            Analysis::Thm31 => {
                let rep = criterion_thm31(self.manifold(), self.density(), &RicciEvidence::Compute, probe)?;
                if let Some(b) = &rep.bound {
                    self.tables.push(("thm31_bound".into(), Table::Bound(b.clone())));
                }
                value(rep)
            }
            Analysis::Thm32 => {
                let spec = self.scenario.thm32.as_ref().expect("validated");
                let mut opts = VolumeComparisonOptions {
                    seed: self.seed,
                    ..VolumeComparisonOptions::default()
                };
                if let Some(n) = spec.comparison_samples {
                    opts.samples = n;
                }
                let entropy = self.prep.entropy.as_ref().expect("validated");
                value(criterion_thm32(self.manifold(), entropy, spec.c1, spec.c2, probe, &opts)?)
            }
            Analysis::Thm33 => {
                let entropy = self.prep.entropy.as_ref().expect("validated");
                value(criterion_thm33(self.manifold(), entropy, probe)?)
            }
            Analysis::Cor35 => value(corollary35_report(self.manifold(), self.density(), probe)?),
            Analysis::Thm43 => {
                let st = self.prep.spacetime.as_ref().expect("validated");
                value(pipeline_thm43(st, &self.prep.samples, self.manifold(), self.density(), probe)?)
            }
            Analysis::Prop44 => {
                let st = self.prep.spacetime.as_ref().expect("validated");
                let induced = self.prep.manifold.as_ref();
                value(pipeline_prop44(st, &self.prep.samples, self.density(), induced, probe)?)
            }
            Analysis::Simulate => self.simulate(),
            Analysis::RecurrenceTrend => self.trend(),
        }
    }

    fn geometry(&self) -> Step {
        let m = self.manifold();
        let (lo, mut hi) = self.prep.bound_range;
        if hi >= m.r_max() {
            hi = 0.999 * m.r_max();
        }
        let mut rows = Vec::new();
        for r in log_grid(lo, hi.max(lo), GEOMETRY_RADII)? {
            let ball = m.ball_volume(r)?;
            let ric = m.ricci_range(r)?;
            rows.push(json!({
                "radius": r,
                "area": ball.area,
                "volume": ball.volume,
                "quad_error": ball.quad_error,
                "ric_min": ric.ric_min,
                "ric_max": ric.ric_max,
            }));
        }
        Ok(json!({
            "dimension": m.dim(),
            "profile": m.profile().source(),
            "omega": m.omega(),
            "complete": m.is_complete_noncompact(),
            "r_max": m.r_max(),
            "samples": rows,
            "capacity": self.capacity(),
        }))
    }

    fn entropy(&mut self) -> Step {
        let m = self.manifold();
        let spec = self.prep.entropy.as_ref().expect("validated");
        let (lo, hi) = self.prep.bound_range;
        let bound = check_bound(spec, m, lo, hi)?;
        let floor = match spec.sigma0() {
            Some(s) => Some(check_volume_floor(m, s, &log_grid(lo, hi, FLOOR_RADII)?)?),
            None => None,
        };
        let l1 = match entropy_l1_on_manifold(spec, m, &self.prep.probe) {
            Ok(v) => serde_json::to_value(v).expect("reports serialize to JSON"),
            Err(e) => json!({ "error": error_value(&e) }),
        };
        let out = json!({
            "holds": bound.holds(),
            "first_violation": bound.first_violation,
            "bound": bound,
            "volume_floor": floor,
            "entropy_l1": l1,
        });
        self.tables.push(("entropy_bound".into(), Table::Bound(bound)));
        Ok(out)
    }

    fn simulate(&self) -> Step {
        let sim = self.scenario.simulation.as_ref().expect("validated");
        let m = self.manifold();
        let cfg = sim_config(sim, m, self.seed, sim.outer).expect("validated");
        let stats = simulate_annulus(&cfg)?;
        let exact = exact_hitting_probability(m, cfg.inner, cfg.start, cfg.outer)?;
        let deviation = if stats.stderr > 0.0 {
            Some((stats.p_outer - exact).abs() / stats.stderr)
        } else {
            None
        };
        Ok(json!({
            "config": cfg,
            "stats": stats,
            "exact_p_outer": exact,
            "deviation_in_stderr": deviation,
        }))
    }

    fn trend(&mut self) -> Step {
        let sim = self.scenario.simulation.as_ref().expect("validated");
        let m = self.manifold();
        let cfg = sim_config(sim, m, self.seed, sim.outer_radii.first().copied()).expect("validated");
        let rep = recurrence_monte_carlo(&cfg, &sim.outer_radii)?;
        let capacity = capacity_oracle(m, cfg.inner, &self.prep.probe);
        let agrees = match (&capacity, rep.verdict) {
            (Ok(c), Trend::Recurrent) => Some(c.verdict == Parabolicity::Parabolic),
            (Ok(c), Trend::Transient) => Some(c.verdict == Parabolicity::NonParabolic),
            _ => None,
        };
        let out = json!({
            "trend": rep,
            "capacity": match &capacity {
                Ok(c) => serde_json::to_value(c).expect("reports serialize to JSON"),
                Err(e) => json!({ "error": error_value(e) }),
            },
            "agrees_with_capacity": agrees,
        });
        self.tables.push(("recurrence_trend".into(), Table::Trend(rep)));
        Ok(out)
    }
}

/// Validates and runs a scenario. Configuration problems are returned as
/// errors; numeric failures are recorded per analysis in the bundle.
pub fn run_scenario(scenario: &Scenario, seed: Option<u64>) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let prep = scenario.prepare()?;
    let seed = seed.unwrap_or(scenario.seed);
    let mut runner = Runner {
        scenario,
        prep: &prep,
        seed,
        tables: Vec::new(),
    };
    let mut results = Vec::with_capacity(scenario.analyses.len());
    for a in scenario.ordered_analyses() {
        let outcome = match runner.run(a) {
            Ok(v) => Outcome::Result(v),
            Err(e) => Outcome::Error(AnalysisError {
                kind: e.kind().into(),
                message: e.to_string(),
            }),
        };
        results.push(AnalysisOutcome { analysis: a, outcome });
    }
    let tables = runner.tables;
    Ok(RunOutput {
        bundle: ResultBundle {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            scenario: scenario.clone(),
            results,
            wall_time_seconds: start.elapsed().as_secs_f64(),
        },
        tables,
    })
}
