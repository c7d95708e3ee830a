//! Monte Carlo estimation of the renewal function, independent of the grid
//! solvers.
//!
//! Sampling goes through the exact inverse of each law's survival function,
//! so the paths come from the same closed forms the solvers consume - no
//! rejection steps, no approximation in the sampler itself.  Streams are
//! counter-based: path `i` always uses stream `i` of a ChaCha generator
//! seeded once, so results are reproducible regardless of how the thread
//! pool schedules the work.

use crate::dist::{DistError, PiecewiseDistribution};
use crate::reference::Erlang2;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum McError {
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// Maps one uniform draw `u` strictly inside `(0, 1)` to an inter-renewal
/// time by exact survival inversion: the returned `t` satisfies
/// `survival(t) = u`.  The endpoints are rejected because they correspond to
/// the degenerate draws `t = 0` and `t = +inf`.
pub fn sample_inter_renewal(dist: &PiecewiseDistribution, u: f64) -> Result<f64, McError> {
    if !(u > 0.0 && u < 1.0) {
        return Err(McError::BadInput(format!(
            "survival level must lie strictly inside (0, 1), got {}",
            u
        )));
    }
    Ok(dist.inverse_survival(u)?)
}

/// Anything that can draw independent inter-renewal times.
pub trait InterRenewal: Send + Sync {
    fn draw(&self, rng: &mut dyn RngCore) -> f64;
}

impl InterRenewal for PiecewiseDistribution {
    fn draw(&self, rng: &mut dyn RngCore) -> f64 {
        // 1 - U is uniform on (0, 1], exactly the domain of the inverse.
        let level = 1.0 - rng.random::<f64>();
        self.inverse_survival(level)
            .expect("level lies in (0, 1] by construction")
    }
}

impl InterRenewal for Erlang2 {
    fn draw(&self, rng: &mut dyn RngCore) -> f64 {
        // Sum of two unit exponentials.
        let u1 = 1.0 - rng.random::<f64>();
        let u2 = 1.0 - rng.random::<f64>();
        -(u1.ln() + u2.ln())
    }
}

/// Renewal-count averages over independent simulated paths.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub t_points: Vec<f64>,
    /// Mean renewal count by each time point (the renewal-function estimate).
    pub estimate: Vec<f64>,
    /// Standard error of each mean.
    pub std_error: Vec<f64>,
    pub paths: usize,
    pub seed: u64,
}

/// Estimates the renewal function at `t_points` by averaging renewal counts
/// over `paths` independent trajectories.
///
/// Deterministic for a given `(seed, paths, t_points)`: path `i` draws from
/// stream `i` of a ChaCha generator seeded with `seed`, and the per-point
/// accumulators sum integers (exactly representable), so neither thread
/// count nor scheduling order can change the result.
pub fn estimate_renewal_function<D: InterRenewal + ?Sized>(
    dist: &D,
    t_points: &[f64],
    paths: usize,
    seed: u64,
) -> Result<McEstimate, McError> {
    if t_points.is_empty() {
        return Err(McError::BadInput("no time points given".into()));
    }
    for (i, &t) in t_points.iter().enumerate() {
        if !(t.is_finite() && t > 0.0) {
            return Err(McError::BadInput(format!(
                "time points must be finite and strictly positive, got {}",
                t
            )));
        }
        if i > 0 && t < t_points[i - 1] {
            return Err(McError::BadInput(format!(
                "time points must be in ascending order, but {} follows {}",
                t,
                t_points[i - 1]
            )));
        }
    }
    if paths < 2 {
        return Err(McError::BadInput(format!(
            "need at least 2 paths for a standard error, got {}",
            paths
        )));
    }
    let t_max = t_points.iter().copied().fold(0.0, f64::max);
    let k = t_points.len();
    let zero = || (vec![0.0f64; k], vec![0.0f64; k]);
    let (sum, sumsq) = (0..paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(p as u64);
            count_renewals(dist, t_points, t_max, &mut rng)
        })
        .fold(zero, |mut acc, counts| {
            for (i, c) in counts.into_iter().enumerate() {
                let c = c as f64;
                acc.0[i] += c;
                acc.1[i] += c * c;
            }
            acc
        })
        .reduce(zero, |mut a, b| {
            for i in 0..k {
                a.0[i] += b.0[i];
                a.1[i] += b.1[i];
            }
            a
        });
    let n = paths as f64;
    let estimate: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let std_error = sum
        .iter()
        .zip(&sumsq)
        .map(|(s, sq)| {
            let var = (sq - s * s / n) / (n - 1.0);
            (var.max(0.0) / n).sqrt()
        })
        .collect();
    Ok(McEstimate { t_points: t_points.to_vec(), estimate, std_error, paths, seed })
}

/// Number of renewals by each time point along one path.
fn count_renewals<D: InterRenewal + ?Sized>(
    dist: &D,
    t_points: &[f64],
    t_max: f64,
    rng: &mut dyn RngCore,
) -> Vec<u64> {
    let mut counts = vec![0u64; t_points.len()];
    let mut arrival = 0.0;
    loop {
        arrival += dist.draw(rng);
        if arrival > t_max {
            break;
        }
        for (i, &t) in t_points.iter().enumerate() {
            if arrival <= t {
                counts[i] += 1;
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{build_counterexample, CounterexampleSpec};

    #[test]
    fn estimates_are_reproducible_and_seed_sensitive() {
        let d = PiecewiseDistribution::exponential(1.0).unwrap();
        let a = estimate_renewal_function(&d, &[1.0, 2.0], 5_000, 42).unwrap();
        let b = estimate_renewal_function(&d, &[1.0, 2.0], 5_000, 42).unwrap();
        assert_eq!(a, b, "same seed must give bitwise-identical results");
        let c = estimate_renewal_function(&d, &[1.0, 2.0], 5_000, 43).unwrap();
        assert_ne!(a.estimate, c.estimate, "a different seed should move the estimate");
    }

    #[test]
    fn poisson_counts_recover_the_linear_renewal_function() {
        // For a unit-rate flat hazard the renewal function is exactly t.
        let d = PiecewiseDistribution::exponential(1.0).unwrap();
        let est = estimate_renewal_function(&d, &[1.0, 3.0], 20_000, 7).unwrap();
        for (i, &t) in est.t_points.iter().enumerate() {
            let dev = (est.estimate[i] - t).abs();
            assert!(
                dev <= 4.5 * est.std_error[i],
                "estimate {} at t = {} is {:.2} standard errors off",
                est.estimate[i],
                t,
                dev / est.std_error[i]
            );
            // Counts are Poisson(t): the standard error should be close to
            // sqrt(t / paths).
            let se_expected = (t / 20_000.0).sqrt();
            assert!(
                (est.std_error[i] - se_expected).abs() < 0.35 * se_expected,
                "standard error {:.5} far from Poisson value {:.5}",
                est.std_error[i],
                se_expected
            );
        }
    }

    #[test]
    fn gamma_law_estimate_matches_its_closed_form() {
        let est = estimate_renewal_function(&Erlang2, &[4.0], 20_000, 11).unwrap();
        let exact = Erlang2::renewal_function(4.0);
        let dev = (est.estimate[0] - exact).abs();
        assert!(
            dev <= 4.5 * est.std_error[0],
            "estimate {} vs exact {} is {:.2} standard errors off",
            est.estimate[0],
            exact,
            dev / est.std_error[0]
        );
    }

    #[test]
    fn four_segment_law_samples_round_trip_through_survival() {
        use crate::dist::Lifetime;
        let d = build_counterexample(&CounterexampleSpec::default()).unwrap();
        // The deterministic map: survival(sample(u)) = u on every segment.
        for u in [0.999, 0.9, 0.7, 0.69, 0.66, 0.64, 0.3, 0.05] {
            let t = sample_inter_renewal(&d, u).unwrap();
            assert!(
                (d.survival(t) - u).abs() < 1e-12,
                "survival({}) = {} should be {}",
                t,
                d.survival(t),
                u
            );
        }
        // The open interval is strict: both endpoints are degenerate draws.
        for bad in [0.0, 1.0, 1.1, -0.2, f64::NAN] {
            assert!(sample_inter_renewal(&d, bad).is_err(), "u = {} must be rejected", bad);
        }
    }

    #[test]
    fn input_validation_catches_empty_tiny_and_disordered_runs() {
        let d = PiecewiseDistribution::exponential(1.0).unwrap();
        let cases: &[&[f64]] = &[
            &[],               // no points at all
            &[-1.0],           // negative
            &[0.0],            // zero is not a usable horizon
            &[f64::NAN],       // not a number
            &[2.0, 1.0],       // out of order
        ];
        for &pts in cases {
            assert!(
                matches!(estimate_renewal_function(&d, pts, 100, 1), Err(McError::BadInput(_))),
                "points {:?} should be rejected",
                pts
            );
        }
        assert!(matches!(
            estimate_renewal_function(&d, &[1.0], 1, 1),
            Err(McError::BadInput(_))
        ));
    }
}
