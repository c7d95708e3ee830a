//! Randomized invariants: things that must hold for *every* valid input,
//! not just the frozen cases in the unit tests.

use proptest::prelude::*;
use renewal_core::compound::{compound_geometric, induct_identity_residual, DiscretePmf};
use renewal_core::dist::{
    build_counterexample, derive_family_params, CounterexampleSpec, Lifetime,
    PiecewiseDistribution,
};
use renewal_core::engine::{monotonicity_report, renewal_function, solve_renewal_density};

/// Raw positive weights; scaled into a mass function by the strategies below.
fn raw_masses() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01..1.0f64, 1..10)
}

/// Mass function with total 1 (up to rounding) or genuinely truncated,
/// depending on `keep`.
fn pmf_from(raw: Vec<f64>, keep: f64) -> DiscretePmf {
    let total: f64 = raw.iter().sum();
    let masses: Vec<f64> = raw.iter().map(|m| m / total * keep).collect();
    DiscretePmf::new(masses).expect("scaled masses are valid")
}

/// Independent oracle for the compound mass: sum the convolution powers
/// `p q^(k-1) P(X_1 + ... + X_k = n)`; every term with `k > n` is zero.
fn compound_mass_by_convolution(f: &DiscretePmf, p: f64, len: usize) -> Vec<f64> {
    let q = 1.0 - p;
    let mut out = vec![0.0; len];
    let mut conv: Vec<f64> = (1..=len).map(|n| f.mass(n)).collect();
    let mut weight = p;
    for _ in 1..=len {
        for n in 0..len {
            out[n] += weight * conv[n];
        }
        let mut next = vec![0.0; len];
        for n in 0..len {
            if conv[n] == 0.0 {
                continue;
            }
            for extra in 1..=(len - n - 1) {
                next[n + extra] += conv[n] * f.mass(extra);
            }
        }
        conv = next;
        weight *= q;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The one-step recursion agrees with brute-force convolution powers.
    #[test]
    fn compound_recursion_matches_convolution(
        raw in raw_masses(),
        keep in 0.3..=1.0f64,
        p in 0.05..=1.0f64,
    ) {
        let f = pmf_from(raw, keep);
        let len = 24;
        let res = compound_geometric(&f, p, len).unwrap();
        let oracle = compound_mass_by_convolution(&f, p, len);
        for n in 1..=len {
            prop_assert!(
                (res.g(n) - oracle[n - 1]).abs() <= 1e-13,
                "mass at {}: {} vs oracle {}", n, res.g(n), oracle[n - 1]
            );
        }
    }

    /// Mass and survival recursions describe the same law.
    #[test]
    fn compound_mass_is_survival_difference(
        raw in raw_masses(),
        keep in 0.3..=1.0f64,
        p in 0.05..=1.0f64,
    ) {
        let f = pmf_from(raw, keep);
        let res = compound_geometric(&f, p, 40).unwrap();
        for n in 1..40 {
            let diff = res.g_bar(n) - res.g_bar(n + 1);
            prop_assert!(
                (res.g(n) - diff).abs() <= 1e-13,
                "n = {}: mass {} vs survival difference {}", n, res.g(n), diff
            );
        }
    }

    /// The lattice identity is exact up to rounding for every input law,
    /// truncated or not, at every point.
    #[test]
    fn lattice_identity_residual_is_rounding_noise(
        raw in raw_masses(),
        keep in 0.3..=1.0f64,
        p in 0.05..=1.0f64,
    ) {
        let f = pmf_from(raw, keep);
        let res = compound_geometric(&f, p, 34).unwrap();
        for n in 1..=32 {
            let r = induct_identity_residual(&f, &res, n).unwrap();
            prop_assert!(
                r.relative() <= 1e-12,
                "relative residual {:.3e} at n = {}", r.relative(), n
            );
        }
    }

    /// Bridge constants keep survival and hazard continuous at the first
    /// knot for every admissible (t1, beta).
    #[test]
    fn family_constants_are_continuous(
        t1 in 0.2..=3.0f64,
        beta in 1e-4..=0.2f64,
    ) {
        let p = derive_family_params(t1, beta).unwrap();
        let (ds, dr) = p.continuity_gaps();
        prop_assert!(ds.abs() <= 1e-13, "survival gap {ds:e}");
        prop_assert!(dr.abs() <= 1e-13, "hazard gap {dr:e}");
    }

    /// Exact inverse sampling: survival of the sampled time reproduces the
    /// uniform level on every segment of every family member.
    #[test]
    fn inverse_sampling_round_trips(
        t1 in 0.3..=2.0f64,
        dt2 in 0.05..=1.0f64,
        beta in 1e-4..=0.1f64,
        u in 1e-3..1.0f64,
    ) {
        let spec = CounterexampleSpec { t1, t2: t1 + dt2, t3: None, beta };
        let Ok(d) = build_counterexample(&spec) else {
            // Some corners push the bridge survival to zero; those are
            // rejected at construction and carry nothing to test.
            return Ok(());
        };
        let t = d.inverse_survival(u).unwrap();
        prop_assert!(t >= 0.0 && t.is_finite());
        let back = d.survival(t);
        prop_assert!(
            (back - u).abs() <= 1e-10,
            "survival({t}) = {back} should be {u}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Flat-hazard laws keep a flat renewal density at any rate.
    #[test]
    fn memoryless_renewal_density_is_flat(rate in 0.2..=2.5f64) {
        let d = PiecewiseDistribution::exponential(rate).unwrap();
        let m = solve_renewal_density(&d, 1.0 / 128.0, 2.0).unwrap();
        for (t, v) in m.iter() {
            prop_assert!(
                (v - rate).abs() <= 5e-3 * rate.max(1.0),
                "m({t}) = {v} should stay near {rate}"
            );
        }
    }

    /// Family members with grid-aligned knots solve to a positive,
    /// near-monotone renewal density whose integral never decreases.
    #[test]
    fn family_solutions_behave_across_parameters(
        t1_steps in 16u32..=96,
        dt2_steps in 8u32..=48,
        beta in 5e-4..=0.08f64,
    ) {
        const H: f64 = 1.0 / 64.0;
        let t1 = t1_steps as f64 * H;
        let t2 = t1 + dt2_steps as f64 * H;
        let spec = CounterexampleSpec { t1, t2, t3: None, beta };
        let Ok(bound) = spec.tail_start_bound() else { return Ok(()); };
        // Snap the flat-tail start up to the next grid node.
        let t3 = (bound / H).ceil() * H;
        prop_assume!(t3 < 6.0);
        let Ok(d) = build_counterexample(&CounterexampleSpec { t3: Some(t3), ..spec }) else {
            return Ok(());
        };
        let m = solve_renewal_density(&d, H, 8.0).unwrap();
        let half = d.density(0.0);
        for (t, v) in m.iter() {
            prop_assert!(v > 0.0, "renewal density must stay positive, m({t}) = {v}");
            prop_assert!(v <= half + 1e-9, "density starts at its peak, m({t}) = {v}");
        }
        // Coarse grid: allow discretization wiggle, catch real rises.
        let mono = monotonicity_report(&m, 1e-3);
        prop_assert!(
            mono.nonincreasing,
            "renewal density rose by {:e} at t = {:?}",
            mono.max_increase, mono.max_increase_at
        );
        let big = renewal_function(&m);
        for i in 1..big.len() {
            prop_assert!(big.value(i) >= big.value(i - 1), "integral must not decrease");
        }
    }
}
