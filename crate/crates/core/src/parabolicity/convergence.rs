//! Three-way classification of `∫_{R₀}^∞ f` from doubling windows.
//!
//! The integral is split into windows `[R₀2^k, R₀2^{k+1}]`. Window integrals
//! of a power-law tail decay geometrically in `k`; those of an exponential
//! tail decay geometrically in `2^k`. Both models are fitted to the last
//! windows and the better fit supplies the tail ratio used for
//! extrapolation.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcs::ScalarFunction;
use crate::quadrature::{integrate, Tolerance, MAX_PANELS};

/// Largest sustained window ratio accepted as geometric decay.
pub const CONVERGENT_RATIO: f64 = 0.95;
/// Smallest sustained per-window growth of the partial sums taken as divergence.
pub const DIVERGENT_GROWTH: f64 = 0.01;
/// Number of trailing window ratios the decision looks at.
pub const DECISION_WINDOWS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitClasses {
    pub power_law: bool,
    pub exponential: bool,
}

impl Default for FitClasses {
    fn default() -> Self {
        FitClasses {
            power_law: true,
            exponential: true,
        }
    }
}

/// Controls how `∫^{+∞}` is probed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailProbe {
    pub r_start: f64,
    pub window_doublings: usize,
    pub quad_tol: f64,
    pub fit_classes: FitClasses,
}

impl Default for TailProbe {
    fn default() -> Self {
        TailProbe {
            r_start: 1.0,
            window_doublings: 8,
            quad_tol: 1e-10,
            fit_classes: FitClasses::default(),
        }
    }
}

impl TailProbe {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_start > 0.0 && self.r_start.is_finite()) {
            return Err(Error::invalid(format!("probe start must be positive, got {}", self.r_start)));
        }
        if self.window_doublings < 4 {
            return Err(Error::invalid(format!(
                "probe needs at least 4 doubling windows, got {}",
                self.window_doublings
            )));
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::invalid("probe quadrature tolerance must be positive"));
        }
        if !(self.fit_classes.power_law || self.fit_classes.exponential) {
            return Err(Error::invalid("probe must enable at least one fit class"));
        }
        Ok(())
    }

    pub fn with_start(mut self, r_start: f64) -> Self {
        self.r_start = r_start;
        self
    }

    /// Right end of the last window.
    pub fn r_end(&self) -> f64 {
        self.r_start * 2f64.powi(self.window_doublings as i32)
    }

    pub fn window_edges(&self) -> Vec<f64> {
        (0..=self.window_doublings)
            .map(|k| self.r_start * 2f64.powi(k as i32))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceStatus {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitClass {
    /// `f(R) ~ R^{−p}`; exponent is `p`.
    PowerLaw,
    /// `f(R) ~ e^{−cR}`; exponent is `c`.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailFit {
    pub class: FitClass,
    pub exponent: f64,
    /// Window-to-window ratio used for the tail.
    pub ratio: f64,
    /// RMS residual of the log-window fit.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub window_edges: Vec<f64>,
    pub window_integrals: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub fit: Option<TailFit>,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceVerdict {
    pub status: ConvergenceStatus,
    pub value: Option<f64>,
    pub error: Option<f64>,
    pub evidence: Evidence,
}

impl ConvergenceVerdict {
    pub fn is_convergent(&self) -> bool {
        self.status == ConvergenceStatus::Convergent
    }

    pub fn is_divergent(&self) -> bool {
        self.status == ConvergenceStatus::Divergent
    }

    fn inconclusive(evidence: Evidence) -> Self {
        ConvergenceVerdict {
            status: ConvergenceStatus::Inconclusive,
            value: None,
            error: None,
            evidence,
        }
    }
}

/// Least-squares slope and RMS residual of `ys` against `xs`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (my + slope * (x - mx));
            e * e
        })
        .sum();
    (slope, (rss / n).sqrt())
}

fn fit_tail(windows: &[f64], edges: &[f64], classes: FitClasses) -> Option<TailFit> {
    let last = DECISION_WINDOWS.min(windows.len() - 1) + 1;
    let start = windows.len() - last;
    let tail = &windows[start..];
    if tail.contains(&0.0) {
        // underflowed windows only arise from super-geometric decay
        return Some(TailFit {
            class: FitClass::Exponential,
            exponent: f64::INFINITY,
            ratio: 0.0,
            residual: 0.0,
        });
    }
    let logs: Vec<f64> = tail.iter().map(|w| w.ln()).collect();
    let mut best: Option<TailFit> = None;
    if classes.power_law {
        let ks: Vec<f64> = (start..windows.len()).map(|k| k as f64).collect();
        let (slope, residual) = linear_fit(&ks, &logs);
        best = Some(TailFit {
            class: FitClass::PowerLaw,
            exponent: 1.0 - slope / std::f64::consts::LN_2,
            ratio: slope.exp(),
            residual,
        });
    }
    if classes.exponential {
        let rs: Vec<f64> = edges[start..windows.len()].to_vec();
        let (slope, residual) = linear_fit(&rs, &logs);
        let observed = tail[tail.len() - 1] / tail[tail.len() - 2];
        let candidate = TailFit {
            class: FitClass::Exponential,
            exponent: -slope,
            // observed ratios shrink under exponential decay, so the last
            // one bounds every later ratio
            ratio: observed,
            residual,
        };
        best = match best {
            Some(b) if b.residual <= candidate.residual => Some(b),
            _ => Some(candidate),
        };
    }
    best
}

/// Classifies `∫_{probe.r_start}^∞ f`. The integrand must be positive.
pub fn classify_integral<F>(f: F, probe: &TailProbe) -> Result<ConvergenceVerdict>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    probe.validate()?;
    let edges = probe.window_edges();
    let tol = Tolerance {
        abs: 1e-300,
        rel: probe.quad_tol,
        max_panels: MAX_PANELS,
    };
    let results: Vec<Result<(f64, f64)>> = edges
        .par_windows(2)
        .map(|w| integrate(&f, w[0], w[1], tol).map(|q| (q.value, q.error)))
        .collect();

    let mut windows = Vec::with_capacity(results.len());
    let mut quad_error = 0.0;
    let mut evidence = Evidence {
        window_edges: edges.clone(),
        window_integrals: Vec::new(),
        partial_sums: Vec::new(),
        fit: None,
        diagnostic: None,
    };
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok((v, e)) => {
                windows.push(v);
                quad_error += e;
            }
            Err(Error::NonFinite(msg)) => {
                evidence.window_integrals = windows;
                evidence.diagnostic = Some(format!("integrand overflows in window {k}: {msg}"));
                return Ok(ConvergenceVerdict {
                    status: ConvergenceStatus::Divergent,
                    value: None,
                    error: None,
                    evidence,
                });
            }
            Err(e) => {
                evidence.window_integrals = windows;
                evidence.diagnostic = Some(format!("window {k}: {e}"));
                return Ok(ConvergenceVerdict::inconclusive(evidence));
            }
        }
    }
    let partial_sums: Vec<f64> = windows
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    evidence.window_integrals = windows.clone();
    evidence.partial_sums = partial_sums.clone();

    if windows.iter().any(|w| !(*w >= 0.0)) {
        evidence.diagnostic = Some("integrand is not positive on the probe range".into());
        return Ok(ConvergenceVerdict::inconclusive(evidence));
    }

    let last = DECISION_WINDOWS.min(windows.len() - 1);
    let ratios: Vec<f64> = windows
        .windows(2)
        .skip(windows.len() - 1 - last)
        .map(|p| match (p[0], p[1]) {
            (a, b) if a > 0.0 => b / a,
            (_, 0.0) => 0.0,
            _ => f64::INFINITY,
        })
        .collect();
    let fit = fit_tail(&windows, &edges, probe.fit_classes);
    evidence.fit = fit;

    let sustained_decay = ratios.iter().all(|q| *q <= CONVERGENT_RATIO);
    if let Some(fit) = fit {
        if sustained_decay && fit.ratio <= CONVERGENT_RATIO {
            let w_last = windows[windows.len() - 1];
            let tail = w_last * fit.ratio / (1.0 - fit.ratio);
            let sum = partial_sums[partial_sums.len() - 1];
            return Ok(ConvergenceVerdict {
                status: ConvergenceStatus::Convergent,
                value: Some(sum + tail),
                error: Some(0.5 * tail + quad_error),
                evidence,
            });
        }
    }

    let growth_ok = partial_sums
        .windows(2)
        .skip(partial_sums.len() - 1 - last)
        .all(|p| p[0] > 0.0 && p[1] / p[0] - 1.0 >= DIVERGENT_GROWTH);
    if growth_ok && fit.is_some() {
        return Ok(ConvergenceVerdict {
            status: ConvergenceStatus::Divergent,
            value: None,
            error: None,
            evidence,
        });
    }
    evidence.diagnostic = Some(format!(
        "window ratios {ratios:?} neither decay below {CONVERGENT_RATIO} nor keep partial sums growing by {DIVERGENT_GROWTH}"
    ));
    Ok(ConvergenceVerdict::inconclusive(evidence))
}

/// [`classify_integral`] for a parsed integrand.
pub fn classify_function(f: &ScalarFunction, probe: &TailProbe) -> Result<ConvergenceVerdict> {
    classify_integral(|x| f.eval(x), probe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn classify(f: impl Fn(f64) -> f64 + Sync) -> ConvergenceVerdict {
        classify_integral(|x| Ok(f(x)), &TailProbe::default()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn volume_floor_integrand() {
        let v = classify(|r| r * (-4.0 * r).exp());
        assert_eq!(v.status, ConvergenceStatus::Convergent);
        assert!(rel(v.value.unwrap(), 5.0 / 16.0 * (-4f64).exp()) < 1e-6);
    }

    #[test]
    fn inverse_square_area() {
        let v = classify(|r| 1.0 / (4.0 * PI * r * r));
        assert_eq!(v.status, ConvergenceStatus::Convergent);
        assert!(rel(v.value.unwrap(), 1.0 / (4.0 * PI)) < 1e-6);
        let fit = v.evidence.fit.unwrap();
        assert_eq!(fit.class, FitClass::PowerLaw);
        assert!((fit.exponent - 2.0).abs() < 1e-6);
    }

    #[test]
    fn inverse_sinh_area() {
        let v = classify(|r| 1.0 / (2.0 * PI * r.sinh()));
        assert_eq!(v.status, ConvergenceStatus::Convergent);
        let exact = (1.0 / 0.5f64.tanh()).ln() / (2.0 * PI);
        assert!(rel(v.value.unwrap(), exact) < 1e-6);
    }

    #[test]
    fn harmonic_tails_diverge() {
        let v = classify(|r| 1.0 / (2.0 * PI * r));
        assert_eq!(v.status, ConvergenceStatus::Divergent);
        assert!(v.value.is_none());
        assert!(v.evidence.fit.is_some());
        let w = classify(|r| r / (PI * r * r));
        assert_eq!(w.status, ConvergenceStatus::Divergent);
    }

    #[test]
    fn growing_integrand_diverges() {
        assert_eq!(classify(|r| r.sqrt()).status, ConvergenceStatus::Divergent);
        assert_eq!(classify(|r| r.exp()).status, ConvergenceStatus::Divergent);
    }

    #[test]
    fn overflowing_integrand_is_divergent() {
        let v = classify(|r| (r * r).exp());
        assert_eq!(v.status, ConvergenceStatus::Divergent);
        assert!(v.evidence.diagnostic.is_some());
    }

    #[test]
    fn failing_integrand_is_inconclusive() {
        let v = classify_integral(|r| if r > 10.0 { Err(Error::domain("edge")) } else { Ok(1.0 / (r * r)) }, &TailProbe::default())
            .unwrap();
        assert_eq!(v.status, ConvergenceStatus::Inconclusive);
        assert!(v.value.is_none());
    }

    #[test]
    fn borderline_decay_is_not_forced() {
        // window ratio 2^{-0.02} ≈ 0.986 with partial sums growing under 1%
        // per window once many windows are in: neither rule fires
        let probe = TailProbe {
            window_doublings: 400,
            ..TailProbe::default()
        };
        let v = classify_integral(|r| Ok(r.powf(-1.02)), &probe).unwrap();
        assert_eq!(v.status, ConvergenceStatus::Inconclusive);
    }

    #[test]
    fn probe_validation() {
        let bad = TailProbe {
            window_doublings: 3,
            ..TailProbe::default()
        };
        assert!(classify_integral(|r| Ok(1.0 / r), &bad).is_err());
        let bad = TailProbe {
            r_start: 0.0,
            ..TailProbe::default()
        };
        assert!(classify_integral(|r| Ok(1.0 / r), &bad).is_err());
    }

    #[test]
    fn status_is_scale_invariant() {
        let cases: Vec<Box<dyn Fn(f64) -> f64 + Sync>> = vec![
            Box::new(|r| 1.0 / (r * r)),
            Box::new(|r| 1.0 / r),
            Box::new(|r| (-r).exp()),
            Box::new(|r| r.powf(-1.5)),
        ];
        for f in &cases {
            let base = classify(f).status;
            for c in [1e-6, 1.0, 1e6] {
                assert_eq!(classify(|r| c * f(r)).status, base);
            }
        }
    }
}
