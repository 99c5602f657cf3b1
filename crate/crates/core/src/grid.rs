//! Radius grids.

use crate::error::{Error, Result};

/// `n ≥ 2` points from `lo` to `hi` inclusive, evenly spaced in `ln r`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::invalid(format!("log grid needs 0 < lo < hi < ∞, got [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(Error::invalid("log grid needs at least two points"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    g[0] = lo;
    g[n - 1] = hi;
    Ok(g)
}

/// `n ≥ 2` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) || n < 2 {
        return Err(Error::invalid(format!("bad linear grid [{lo}, {hi}] with {n} points")));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = log_grid(0.1, 2.0, 64).unwrap();
        assert_eq!(g.len(), 64);
        assert_eq!((g[0], g[63]), (0.1, 2.0));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!((g[1] / g[0] - g[63] / g[62]).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(log_grid(0.0, 1.0, 8).is_err());
        assert!(log_grid(2.0, 1.0, 8).is_err());
        assert!(log_grid(1.0, 2.0, 1).is_err());
        assert!(linear_grid(0.0, 1.0, 1).is_err());
    }
}
