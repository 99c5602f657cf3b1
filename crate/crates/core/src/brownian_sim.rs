//! Monte Carlo for the radial part of Brownian motion on a model manifold,
//! `dr = dW + ((n−1)/2)(σ'/σ) dt`, and the scale-function oracles it is
//! checked against.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model_manifold::ModelManifold;
use crate::parabolicity::convergence::TailProbe;
use crate::parabolicity::{capacity_oracle, Parabolicity};
use crate::rng::{keyed_stream, standard_normal};

/// Paths simulated per work unit; fixed so reductions never depend on
/// the thread count.
const CHUNK: usize = 1024;
/// Cells in the drift interpolation table.
const DRIFT_CELLS: usize = 4096;
/// Largest censored fraction accepted.
pub const MAX_CENSORED_FRACTION: f64 = 0.01;
/// Increment ratio at or below which a hitting trend counts as transient.
pub const TRANSIENT_RATIO: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepScaling {
    /// Every step uses `dt`.
    Fixed,
    /// Steps use `dt · (r/a)²`, keeping the relative resolution constant
    /// across scales.
    Radial,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    #[serde(skip)]
    pub manifold: ModelManifold,
    pub inner: f64,
    pub start: f64,
    pub outer: f64,
    pub dt: f64,
    pub paths: u64,
    pub seed: u64,
    pub max_steps: u64,
    pub step_scaling: StepScaling,
}

impl SimConfig {
    pub const DEFAULT_DT: f64 = 1e-4;
    pub const DEFAULT_PATHS: u64 = 100_000;
    pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

    pub fn new(manifold: ModelManifold, inner: f64, start: f64, outer: f64) -> Self {
        SimConfig {
            manifold,
            inner,
            start,
            outer,
            dt: Self::DEFAULT_DT,
            paths: Self::DEFAULT_PATHS,
            seed: 0,
            max_steps: Self::DEFAULT_MAX_STEPS,
            step_scaling: StepScaling::Fixed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, r0, b) = (self.inner, self.start, self.outer);
        if !(a > 0.0) {
            return Err(Error::invalid(format!("inner radius must be positive, got {a}")));
        }
        if !(a < b && a <= r0 && r0 <= b) {
            return Err(Error::invalid(format!("need a ≤ r0 ≤ b with a < b, got ({a}, {r0}, {b})")));
        }
        if !(b < self.manifold.r_max()) {
            return Err(Error::invalid(format!(
                "outer radius {b} must lie below the radial extent {}",
                self.manifold.r_max()
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.paths == 0 {
            return Err(Error::invalid("need at least one path"));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("step budget must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HitStats {
    /// Fraction of uncensored paths reaching `b` before `a`.
    pub p_outer: f64,
    pub stderr: f64,
    pub censored: u64,
    pub hits_outer: u64,
    pub hits_inner: u64,
    /// Mean exit time of uncensored paths.
    pub mean_exit_time: f64,
    pub mean_steps: f64,
}

/// Piecewise cubic Hermite interpolant of the drift on `[a, b]`, stored
/// as power-basis coefficients per cell.
struct DriftTable {
    lo: f64,
    inv_h: f64,
    cells: Vec<[f64; 4]>,
}

impl DriftTable {
    fn new(m: &ModelManifold, a: f64, b: f64) -> Result<Self> {
        let c = 0.5 * (m.dim() as f64 - 1.0);
        let h = (b - a) / DRIFT_CELLS as f64;
        let mut nodes = Vec::with_capacity(DRIFT_CELLS + 1);
        for i in 0..=DRIFT_CELLS {
            let r = if i == DRIFT_CELLS { b } else { a + h * i as f64 };
            let j = m.profile().eval_jet2(r)?;
            let g = j.d1 / j.value;
            let drift = c * g;
            let slope = c * (j.d2 / j.value - g * g);
            if !(drift.is_finite() && slope.is_finite()) {
                return Err(Error::NonFinite(format!("drift not finite at r = {r}")));
            }
            nodes.push((drift, h * slope));
        }
        let cells = nodes
            .windows(2)
            .map(|w| {
                let ((y0, m0), (y1, m1)) = (w[0], w[1]);
                [y0, m0, 3.0 * (y1 - y0) - 2.0 * m0 - m1, 2.0 * (y0 - y1) + m0 + m1]
            })
            .collect();
        Ok(DriftTable {
            lo: a,
            inv_h: 1.0 / h,
            cells,
        })
    }

    #[inline(always)]
    fn eval(&self, r: f64) -> f64 {
        let t = (r - self.lo) * self.inv_h;
        let i = (t as usize).min(DRIFT_CELLS - 1);
        let u = t - i as f64;
        let [c0, c1, c2, c3] = self.cells[i];
        ((c3 * u + c2) * u + c1) * u + c0
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    outer: u64,
    inner: u64,
    censored: u64,
    exit_time: f64,
    steps: f64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.outer += o.outer;
        self.inner += o.inner;
        self.censored += o.censored;
        self.exit_time += o.exit_time;
        self.steps += o.steps;
        self
    }
}

#[derive(Clone, Copy)]
enum Exit {
    Inner(f64, u64),
    Outer(f64, u64),
    Censored,
}

/// Paths advanced together so their dependency chains overlap.
const LANES: usize = 4;

struct Lane {
    index: usize,
    r: f64,
    t: f64,
    step: u64,
    rng: ChaCha8Rng,
}

/// Simulates paths `lo..hi`, returning their exits in path order.
fn run_chunk(cfg: &SimConfig, drift: &DriftTable, lo: u64, hi: u64) -> Vec<Exit> {
    let (a, b) = (cfg.inner, cfg.outer);
    let n = (hi - lo) as usize;
    let mut exits = vec![Exit::Censored; n];
    if cfg.start <= a || cfg.start >= b {
        let e = if cfg.start <= a { Exit::Inner(0.0, 0) } else { Exit::Outer(0.0, 0) };
        exits.fill(e);
        return exits;
    }
    let sqrt_dt = cfg.dt.sqrt();
    let radial = cfg.step_scaling == StepScaling::Radial;
    let mut next = 0;
    let spawn = |next: &mut usize| {
        (*next < n).then(|| {
            let index = *next;
            *next += 1;
            Lane {
                index,
                r: cfg.start,
                t: 0.0,
                step: 0,
                rng: keyed_stream(cfg.seed, lo + index as u64),
            }
        })
    };
    let mut lanes: Vec<Option<Lane>> = (0..LANES).map(|_| spawn(&mut next)).collect();
    while lanes.iter().any(Option::is_some) {
        for slot in lanes.iter_mut() {
            let Some(lane) = slot else { continue };
            let (dt, sd) = if radial {
                let s = lane.r / a;
                (cfg.dt * s * s, sqrt_dt * s)
            } else {
                (cfg.dt, sqrt_dt)
            };
            lane.r += drift.eval(lane.r) * dt + sd * standard_normal(&mut lane.rng);
            lane.t += dt;
            lane.step += 1;
            let exit = if lane.r <= a {
                Some(Exit::Inner(lane.t, lane.step))
            } else if lane.r >= b {
                Some(Exit::Outer(lane.t, lane.step))
            } else if lane.step >= cfg.max_steps {
                Some(Exit::Censored)
            } else {
                None
            };
            if let Some(e) = exit {
                exits[lane.index] = e;
                *slot = spawn(&mut next);
            }
        }
    }
    exits
}

/// Euler–Maruyama on the radial SDE until each path leaves `(a, b)`.
///
/// Path `i` draws from the stream keyed by `(seed, i)` and tallies are
/// combined in path order, so results are bit-identical for any number
/// of worker threads.
pub fn simulate_annulus(cfg: &SimConfig) -> Result<HitStats> {
    cfg.validate()?;
    let drift = DriftTable::new(&cfg.manifold, cfg.inner, cfg.outer)?;
    let chunks = cfg.paths.div_ceil(CHUNK as u64);
    let tallies: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK as u64;
            let hi = (lo + CHUNK as u64).min(cfg.paths);
            let mut tally = Tally::default();
            for exit in run_chunk(cfg, &drift, lo, hi) {
                match exit {
                    Exit::Inner(t, s) => {
                        tally.inner += 1;
                        tally.exit_time += t;
                        tally.steps += s as f64;
                    }
                    Exit::Outer(t, s) => {
                        tally.outer += 1;
                        tally.exit_time += t;
                        tally.steps += s as f64;
                    }
                    Exit::Censored => tally.censored += 1,
                }
            }
            tally
        })
        .collect();
    let total = tallies.into_iter().fold(Tally::default(), Tally::merge);
    if total.censored as f64 > MAX_CENSORED_FRACTION * cfg.paths as f64 {
        return Err(Error::ExcessiveCensoring {
            censored: total.censored,
            paths: cfg.paths,
        });
    }
    let done = (total.outer + total.inner) as f64;
    let p = total.outer as f64 / done;
    Ok(HitStats {
        p_outer: p,
        stderr: (p * (1.0 - p) / done).sqrt(),
        censored: total.censored,
        hits_outer: total.outer,
        hits_inner: total.inner,
        mean_exit_time: total.exit_time / done,
        mean_steps: total.steps / done,
    })
}

/// `P(hit b before a | r0) = (s(r0) − s(a)) / (s(b) − s(a))` with scale
/// density `σ^{1−n}`.
pub fn exact_hitting_probability(m: &ModelManifold, a: f64, r0: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a <= r0 && r0 <= b && a < b) {
        return Err(Error::invalid(format!("need 0 < a ≤ r0 ≤ b with a < b, got ({a}, {r0}, {b})")));
    }
    if r0 == b {
        return Ok(1.0);
    }
    Ok(m.scale_increment(a, r0)? / m.scale_increment(a, b)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Escape {
    /// Probability of never reaching the inner sphere.
    Transient { probability: f64, tail: f64 },
    Recurrent,
}

/// `(s(r0) − s(a)) / (s(∞) − s(a))`, or `Recurrent` when `s(∞) = ∞`.
pub fn escape_probability(m: &ModelManifold, a: f64, r0: f64, probe: &TailProbe) -> Result<Escape> {
    if !(a > 0.0 && a < r0) {
        return Err(Error::invalid(format!("need 0 < a < r0, got ({a}, {r0})")));
    }
    let cap = capacity_oracle(m, a, probe)?;
    match (cap.verdict, cap.tail) {
        (Parabolicity::NonParabolic, Some(tail)) => Ok(Escape::Transient {
            probability: m.scale_increment(a, r0)? / tail,
            tail,
        }),
        _ => Ok(Escape::Recurrent),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Recurrent,
    Transient,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendRow {
    pub outer: f64,
    pub stats: HitStats,
    pub p_inner: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendReport {
    pub rows: Vec<TrendRow>,
    pub verdict: Trend,
    /// Ratio of successive increments of `1/p_outer`.
    pub increment_ratio: Option<f64>,
    /// Extrapolated limit of `p_inner` as `b → ∞`.
    pub limit_p_inner: Option<f64>,
}

/// Runs the annulus simulation for each outer radius and classifies how
/// `1/p_outer = (s(b) − s(a))/(s(r0) − s(a))` grows with `b`: increments
/// shrinking geometrically (ratio ≤ 0.75) mean a finite limit, hence
/// transience; otherwise the trend is recurrent. The same path streams are
/// reused for every `b`.
pub fn recurrence_monte_carlo(cfg: &SimConfig, outer_radii: &[f64]) -> Result<TrendReport> {
    if outer_radii.is_empty() {
        return Err(Error::invalid("need at least one outer radius"));
    }
    if outer_radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("outer radii must be increasing"));
    }
    let mut rows = Vec::with_capacity(outer_radii.len());
    for &b in outer_radii {
        let run = SimConfig {
            outer: b,
            ..cfg.clone()
        };
        let stats = simulate_annulus(&run)?;
        rows.push(TrendRow {
            outer: b,
            p_inner: 1.0 - stats.p_outer,
            stats,
        });
    }
    let scale: Vec<f64> = rows.iter().map(|r| 1.0 / r.stats.p_outer).collect();
    let k = scale.len();
    let mut report = TrendReport {
        rows,
        verdict: Trend::Inconclusive,
        increment_ratio: None,
        limit_p_inner: None,
    };
    if k < 3 || !scale.iter().all(|s| s.is_finite()) {
        return Ok(report);
    }
    let earlier = scale[k - 2] - scale[0];
    let later = scale[k - 1] - scale[1];
    if !(earlier > 0.0) {
        return Ok(report);
    }
    let q = later / earlier;
    report.increment_ratio = Some(q);
    if q <= TRANSIENT_RATIO {
        let last_step = (scale[k - 1] - scale[k - 2]).max(0.0);
        let limit = scale[k - 1] + last_step * q.max(0.0) / (1.0 - q.max(0.0));
        report.verdict = Trend::Transient;
        report.limit_p_inner = Some(1.0 - 1.0 / limit);
    } else {
        report.verdict = Trend::Recurrent;
        report.limit_p_inner = Some(1.0);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(m: ModelManifold, a: f64, r0: f64, b: f64, paths: u64) -> SimConfig {
        SimConfig {
            paths,
            seed: 42,
            ..SimConfig::new(m, a, r0, b)
        }
    }

    #[test]
    fn exact_probabilities() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        assert_relative_eq!(exact_hitting_probability(&e3, 1.0, 2.0, 3.0).unwrap(), 0.75, max_relative = 1e-10);
        let e2 = ModelManifold::euclidean(2).unwrap();
        assert_relative_eq!(exact_hitting_probability(&e2, 1.0, 2.0, 4.0).unwrap(), 0.5, max_relative = 1e-10);
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        assert_relative_eq!(
            exact_hitting_probability(&h2, 1.0, 2.0, 3.0).unwrap(),
            0.7431355101503,
            max_relative = 1e-9
        );
        assert_eq!(exact_hitting_probability(&h2, 1.0, 3.0, 3.0).unwrap(), 1.0);
        assert_eq!(exact_hitting_probability(&h2, 1.0, 1.0, 3.0).unwrap(), 0.0);
        assert!(exact_hitting_probability(&h2, 2.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn escape_examples() {
        let probe = TailProbe::default();
        let e3 = ModelManifold::euclidean(3).unwrap();
        match escape_probability(&e3, 1.0, 2.0, &probe).unwrap() {
            Escape::Transient { probability, .. } => assert_relative_eq!(probability, 0.5, max_relative = 1e-6),
            other => panic!("{other:?}"),
        }
        let e2 = ModelManifold::euclidean(2).unwrap();
        assert_eq!(escape_probability(&e2, 1.0, 5.0, &probe).unwrap(), Escape::Recurrent);
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        match escape_probability(&h2, 1.0, 2.0, &probe).unwrap() {
            Escape::Transient { probability, .. } => {
                assert_relative_eq!(probability, 0.6471972092757488, max_relative = 1e-6)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boundary_starts() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let s = simulate_annulus(&cfg(e3.clone(), 1.0, 1.0, 3.0, 100)).unwrap();
        assert_eq!(s.p_outer, 0.0);
        assert_eq!(s.mean_exit_time, 0.0);
        let s = simulate_annulus(&cfg(e3, 1.0, 3.0, 3.0, 100)).unwrap();
        assert_eq!(s.p_outer, 1.0);
    }

    #[test]
    fn config_validation() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        assert!(simulate_annulus(&cfg(e3.clone(), 0.0, 1.0, 3.0, 10)).is_err());
        assert!(simulate_annulus(&cfg(e3.clone(), 2.0, 1.0, 3.0, 10)).is_err());
        assert!(simulate_annulus(&cfg(e3.clone(), 1.0, 2.0, 3.0, 0)).is_err());
        let bounded = ModelManifold::from_expression(3, "sin(r)", Some(3.0)).unwrap();
        assert!(simulate_annulus(&cfg(bounded, 1.0, 2.0, 3.0, 10)).is_err());
    }

    #[test]
    fn censoring_is_reported() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let c = SimConfig {
            max_steps: 10,
            ..cfg(e3, 1.0, 2.0, 3.0, 200)
        };
        assert!(matches!(simulate_annulus(&c), Err(Error::ExcessiveCensoring { paths: 200, .. })));
    }

    #[test]
    fn drift_table_matches_profile() {
        let h3 = ModelManifold::hyperbolic(3).unwrap();
        let t = DriftTable::new(&h3, 0.5, 6.0).unwrap();
        for r in [0.5, 0.731, 2.0, 4.99, 6.0] {
            assert_relative_eq!(t.eval(r), 1.0 / r.tanh(), max_relative = 1e-12);
        }
    }

    #[test]
    fn small_run_near_oracle() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let c = SimConfig {
            dt: 1e-3,
            ..cfg(e3, 1.0, 2.0, 3.0, 4000)
        };
        let s = simulate_annulus(&c).unwrap();
        assert!((s.p_outer - 0.75).abs() <= 4.0 * s.stderr + 0.03, "{s:?}");
        assert_eq!(s.hits_inner + s.hits_outer, 4000);
        assert!((s.mean_exit_time - 1.0).abs() < 0.1, "{s:?}");
    }

    #[test]
    fn results_do_not_depend_on_threads() {
        let h2 = ModelManifold::hyperbolic(2).unwrap();
        let c = SimConfig {
            dt: 1e-3,
            ..cfg(h2, 1.0, 2.0, 3.0, 3000)
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| simulate_annulus(&c)).unwrap();
        let b = four.install(|| simulate_annulus(&c)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.p_outer.to_bits(), b.p_outer.to_bits());
        assert_eq!(a.mean_exit_time.to_bits(), b.mean_exit_time.to_bits());
    }

    #[test]
    fn trend_degenerate_and_validation() {
        let e3 = ModelManifold::euclidean(3).unwrap();
        let c = cfg(e3, 1.0, 2.0, 3.0, 50);
        let rep = recurrence_monte_carlo(&c, &[2.0]).unwrap();
        assert_eq!(rep.rows[0].stats.p_outer, 1.0);
        assert_eq!(rep.verdict, Trend::Inconclusive);
        assert!(recurrence_monte_carlo(&c, &[4.0, 3.0]).is_err());
        assert!(recurrence_monte_carlo(&c, &[]).is_err());
    }
}
