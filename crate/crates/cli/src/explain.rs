//! What each analysis checks and how to read its output.

use crate::scenario::Analysis;
use crate::CliError;

pub fn explain(name: &str) -> Result<&'static str, CliError> {
    let a: Analysis = name.parse()?;
    Ok(text(a))
}

pub fn text(a: Analysis) -> &'static str {
    match a {
        Analysis::Geometry => {
            "geometry: model manifold dr² + σ(r)² g_S.

Reports, on log-spaced radii over the bound range: sphere area
ω σ^{n−1}, ball volume with its quadrature error, and the range of the
Ricci eigenvalues. Also reports completeness and the capacity test
(non-parabolic iff ∫_a^∞ σ^{1−n} < ∞, with the integral and its error).

Needs: manifold."
        }
        Analysis::Entropy => {
            "entropy: the spacelike entropy bound S(B_R) ≤ Area(∂B_R)/4.

Evaluates both sides on 64 log-spaced radii over bound_range and bisects
the first radius where the bound fails (first_violation; null if it
holds throughout). For a constant density σ₀ also reports the implied
volume floor Vol(B_R) ≥ e^{4σ₀R} with its growth form Area/Vol ≥ 4σ₀
(Theorem 3.1), and whether 1/S is integrable at infinity.

Needs: manifold, entropy. CSV: entropy_bound.csv (R, S, area_over_4, margin)."
        }
        Analysis::Thm31 => {
            "thm31: Theorem 3.1, density floor implies transience.

Hypotheses: M complete and noncompact; Ricci ≥ 0; entropy density
floor σ₀ > 0 with the entropy bound holding on geodesic balls;
R/Vol(B_R) integrable at infinity.
Conclusion: Transient (non-parabolic, Brownian motion escapes) when all
hold. If the bound fails the conclusion is ViolationDetected with the
radius where σ₀·Vol(B_R) first exceeds Area(∂B_R)/4; when R/Vol diverges
the search for that radius continues far out. NotApplicable otherwise.

Needs: manifold, entropy.density. CSV: thm31_bound.csv."
        }
        Analysis::Thm32 => {
            "thm32: Theorem 3.2, entropy decay and curvature decay imply
non-parabolicity.

Hypotheses: 1/S(B_R) integrable at infinity; Ricci ≥ −C1/r²; volume
comparison Vol(B_x(R)) ≤ C2·Vol(B_o(R)) (Monte Carlo over centres, with
a one-sided confidence band); 1/Area integrable; R/Vol integrable.
Conclusion: NonParabolic when all pass, NotApplicable otherwise.

Needs: manifold, entropy, thm32.c1, thm32.c2."
        }
        Analysis::Thm33 => {
            "thm33: Theorem 3.3, integrable inverse entropy and area imply
transience.

Hypotheses: 1/S(B_R) integrable (S = σ₀·Vol for a constant density);
1/Area(∂B_R) integrable.
Conclusion: Transient when both integrals converge; the report carries
each integral, its error estimate and the tail fit.

Needs: manifold, entropy."
        }
        Analysis::Cor35 => {
            "cor35: Corollary 3.5, parabolic manifolds violate every density floor.

Preconditions: Ricci ≥ 0 and the capacity test says parabolic; otherwise
the analysis fails with a precondition error.
Conclusion: ViolationDetected with the explicit radius where
σ₀·Vol(B_R) = Area(∂B_R)/4 (R = 1/(2σ₀) on the flat plane).

Needs: manifold, entropy.density."
        }
        Analysis::Thm43 => {
            "thm43: Theorem 4.3, GRW spacetimes of dimension n ≥ 3.

Hypotheses: warping f log-concave ((log f)'' ≤ 0) on the base interval;
fiber sectional curvature floor ≥ 0; the mean curvature condition
H² ≤ (4(n−1)/n²)(f'/f)² at every sample, so Lemma 4.1 gives Ricci ≥ 0 on
the hypersurface; then Theorem 3.1 on the induced model.
Conclusion: Transient, ViolationDetected or NotApplicable as in thm31.
Surfaces (n = 2) are redirected to prop44.

Needs: spacetime, hypersurface, manifold (induced metric), entropy.density."
        }
        Analysis::Prop44 => {
            "prop44: Proposition 4.4, spacelike surfaces in 3-dimensional GRW
spacetimes.

Hypotheses: log-concave warping, fiber curvature floor ≥ 0, and the
surface condition (mea2) H² ≤ (f'/f)² at every sample. Together they make
the surface parabolic (recurrent), so by Corollary 3.5 no positive entropy
density floor is compatible with the bound.
Conclusion: ViolationDetected; with an induced model the explicit
violating radius is reported.

Needs: spacetime (dimension 2), hypersurface, entropy.density; manifold optional."
        }
        Analysis::Simulate => {
            "simulate: Monte Carlo exit of the radial Brownian motion
dr = dW + ((n−1)/2)(σ'/σ) dt from the annulus inner < r < outer.

Reports p_outer (probability of reaching the outer sphere first), its
standard error, censored paths, mean exit time, and the exact value
(s(r0) − s(a))/(s(b) − s(a)) from the scale function s' = σ^{1−n}.
Runs are bit-identical for a fixed seed regardless of thread count.

Needs: manifold, simulation.inner/start/outer."
        }
        Analysis::RecurrenceTrend => {
            "recurrence-trend: recurrence or transience from hitting probabilities
(Definition 2.2).

Simulates the annulus for each outer radius b and tracks 1/p_outer, which
grows without bound for a recurrent motion and levels off for a transient
one. Increments shrinking by a ratio ≤ 0.75 mean transient; otherwise
recurrent. The capacity test is reported alongside for comparison.

Needs: manifold, simulation.inner/start and at least three outer_radii.
CSV: recurrence_trend.csv (b, p_inner, p_outer, stderr, censored)."
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm31_mentions_its_hypotheses() {
        let t = explain("thm31").unwrap();
        assert!(t.contains("Ricci ≥ 0"));
        assert!(t.contains("σ₀"));
        assert!(t.contains("Transient"));
        assert!(t.contains("3.1"));
    }

    #[test]
    fn prop44_mentions_surface_condition() {
        let t = explain("prop44").unwrap();
        assert!(t.contains("(mea2)"));
        assert!(t.contains("parabolic"));
        assert!(t.contains("4.4"));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(explain("bogus"), Err(CliError::UnknownAnalysis(_))));
    }

    #[test]
    fn every_analysis_has_text() {
        for a in Analysis::ALL {
            assert!(text(a).starts_with(a.name()));
        }
    }
}
