//! Discrete analogue: geometric compounding of a lattice law.
//!
//! `Y = X_1 + ... + X_K` where the `X_i` are i.i.d. on `{1, 2, ...}` with
//! mass function `f` and `K` is geometric on `{1, 2, ...}` with success
//! probability `p`.  The mass and survival functions of `Y` satisfy
//! one-step recursions, and an exact polynomial identity ties the
//! log-convexity defect of `Y`'s survival to that of `X`'s - the discrete
//! machinery behind "decreasing-hazard inputs give decreasing-hazard
//! compounds, and a non-increasing-hazard input shows up in the compound".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompoundError {
    #[error("invalid mass function: {0}")]
    BadPmf(String),
    #[error("invalid parameter: {0}")]
    BadParam(String),
}

const MASS_SUM_SLACK: f64 = 1e-12;
/// Survival below this is treated as "past the effective support" by the
/// shape scan: products of smaller values are rounding noise.
pub const SURVIVAL_FLOOR: f64 = 1e-13;

/// Mass function on `{1, 2, ...}`, possibly truncated (total mass short of
/// one); indices are 1-based and masses beyond the stored length read as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePmf {
    masses: Vec<f64>,
    total: f64,
}

impl DiscretePmf {
    /// Wraps `masses[0] = P(X = 1), masses[1] = P(X = 2), ...`.
    ///
    /// Masses must be finite and nonnegative, with a positive total no more
    /// than 1 (plus rounding slack).  A total below 1 is allowed and treated
    /// as a truncated law: the missing mass sits beyond every stored index.
    pub fn new(masses: Vec<f64>) -> Result<Self, CompoundError> {
        if masses.is_empty() {
            return Err(CompoundError::BadPmf("no masses given".into()));
        }
        for (i, &m) in masses.iter().enumerate() {
            if !(m.is_finite() && m >= 0.0) {
                return Err(CompoundError::BadPmf(format!(
                    "mass at value {} must be finite and nonnegative, got {}",
                    i + 1,
                    m
                )));
            }
        }
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return Err(CompoundError::BadPmf("total mass must be positive".into()));
        }
        if total > 1.0 + MASS_SUM_SLACK {
            return Err(CompoundError::BadPmf(format!(
                "total mass {} exceeds 1",
                total
            )));
        }
        Ok(DiscretePmf { masses, total })
    }

    /// Geometric law `P(X = n) = (1 - ratio) ratio^(n-1)` truncated at `len`.
    pub fn geometric(ratio: f64, len: usize) -> Result<Self, CompoundError> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(CompoundError::BadParam(format!(
                "geometric ratio must lie strictly in (0, 1), got {}",
                ratio
            )));
        }
        if len == 0 {
            return Err(CompoundError::BadParam("length must be positive".into()));
        }
        let masses = (0..len).map(|i| (1.0 - ratio) * ratio.powi(i as i32)).collect();
        DiscretePmf::new(masses)
    }

    /// `P(X = n)` (1-based); 0 beyond the stored length.
    pub fn mass(&self, n: usize) -> f64 {
        if n >= 1 && n <= self.masses.len() {
            self.masses[n - 1]
        } else {
            0.0
        }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Survival values `P(X >= n)` for `n = 1..=len`, built from backward
    /// suffix sums plus the truncation defect `max(0, 1 - total)`.
    ///
    /// This construction keeps every value nonnegative by design and makes
    /// `P(X >= 1)` exactly 1 for a fully normalized law, where the naive
    /// `1 - prefix` form can round to a negative number past the support.
    pub fn survival(&self, len: usize) -> Vec<f64> {
        // For a normalized law the defect is exactly 0, so entries past the
        // support come out exactly zero rather than "1 minus a prefix sum"
        // rounding to something negative.
        let defect = (1.0 - self.total).max(0.0);
        let mut out = vec![defect; len];
        let upto = len.min(self.masses.len());
        // Suffix-sum the stored masses from the right.
        let mut suffix = self.masses[upto..].iter().sum::<f64>();
        for n in (0..upto).rev() {
            suffix += self.masses[n];
            out[n] = suffix + defect;
        }
        out
    }
}

/// Mass and survival of the compound `Y`, computed by independent one-step
/// recursions (so each can cross-check the other through
/// `P(Y = n) = P(Y >= n) - P(Y >= n+1)`).
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundResult {
    /// Success probability of the geometric count.
    pub p: f64,
    /// `1 - p`.
    pub q: f64,
    g: Vec<f64>,
    g_bar: Vec<f64>,
}

impl CompoundResult {
    /// `P(Y = n)`, 1-based; valid for `n <= len()`.
    pub fn g(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.g.len(), "compound mass index {} out of range", n);
        self.g[n - 1]
    }

    /// `P(Y >= n)`, 1-based; valid for `n <= len()`.
    pub fn g_bar(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.g_bar.len(), "compound survival index {} out of range", n);
        self.g_bar[n - 1]
    }

    pub fn g_values(&self) -> &[f64] {
        &self.g
    }

    pub fn g_bar_values(&self) -> &[f64] {
        &self.g_bar
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }
}

/// Computes mass and survival of `Y` for `n = 1..=len`.
///
/// Recursions (all sums over `k = 1..n-1`):
/// `P(Y = n)  = p f_n + q * sum f_k P(Y = n-k)` and
/// `P(Y >= n) = P(X >= n) + q * sum f_k P(Y >= n-k)`.
pub fn compound_geometric(
    f: &DiscretePmf,
    p: f64,
    len: usize,
) -> Result<CompoundResult, CompoundError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(CompoundError::BadParam(format!(
            "success probability must lie in (0, 1], got {}",
            p
        )));
    }
    if len == 0 {
        return Err(CompoundError::BadParam("length must be positive".into()));
    }
    let q = 1.0 - p;
    let fbar = f.survival(len);
    let mut g = vec![0.0; len];
    let mut g_bar = vec![0.0; len];
    for n in 1..=len {
        let mut conv_g = 0.0;
        let mut conv_gbar = 0.0;
        for k in 1..n {
            let fk = f.mass(k);
            if fk == 0.0 {
                continue;
            }
            conv_g += fk * g[n - k - 1];
            conv_gbar += fk * g_bar[n - k - 1];
        }
        g[n - 1] = p * f.mass(n) + q * conv_g;
        g_bar[n - 1] = fbar[n - 1] + q * conv_gbar;
    }
    Ok(CompoundResult { p, q, g, g_bar })
}

/// Exact identity linking the survival log-convexity defects of `X` and `Y`
/// at lattice point `n`, evaluated as `left side - right side` together with
/// the size of the monomials involved.
///
/// With `F = P(X >= .)`, `G = P(Y >= .)`:
/// `F_n (G_{n+2} G_n - G_{n+1}^2) = p G_n (F_{n+2} F_n - F_{n+1}^2)
///   + q * sum over k = 2..n of (F_{n+1} f_{k-1} - F_n f_k)
///         (G_{n+1} G_{n+1-k} - G_n G_{n+2-k})`.
/// For exact arithmetic the residual is identically zero; in floating point
/// it stays within a few ulps of `scale`, the sum of the absolute monomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InductResidual {
    /// Left side minus right side.
    pub residual: f64,
    /// Sum of the absolute values of every monomial in the identity - the
    /// natural yardstick for the attainable rounding error.
    pub scale: f64,
}

impl InductResidual {
    /// `|residual|` relative to `scale`.
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.scale.max(f64::MIN_POSITIVE)
    }
}

/// Evaluates the lattice identity at point `n`; `result` must cover
/// `n + 2` values.
pub fn induct_identity_residual(
    f: &DiscretePmf,
    result: &CompoundResult,
    n: usize,
) -> Result<InductResidual, CompoundError> {
    if n < 1 {
        return Err(CompoundError::BadParam("lattice point must be at least 1".into()));
    }
    if n + 2 > result.len() {
        return Err(CompoundError::BadParam(format!(
            "identity at n = {} needs {} compound values, only {} computed",
            n,
            n + 2,
            result.len()
        )));
    }
    let fbar = f.survival(n + 2);
    let fb = |i: usize| fbar[i - 1];
    let p = result.p;
    let q = result.q;

    let lhs = fb(n) * (result.g_bar(n + 2) * result.g_bar(n) - result.g_bar(n + 1).powi(2));
    let lhs_scale =
        fb(n) * (result.g_bar(n + 2) * result.g_bar(n) + result.g_bar(n + 1).powi(2));

    let mut rhs = p * result.g_bar(n) * (fb(n + 2) * fb(n) - fb(n + 1).powi(2));
    let mut scale =
        lhs_scale + p * result.g_bar(n) * (fb(n + 2) * fb(n) + fb(n + 1).powi(2));
    for k in 2..=n {
        let a = fb(n + 1) * f.mass(k - 1) - fb(n) * f.mass(k);
        let b = result.g_bar(n + 1) * result.g_bar(n + 1 - k)
            - result.g_bar(n) * result.g_bar(n + 2 - k);
        rhs += q * a * b;
        let a_abs = fb(n + 1) * f.mass(k - 1) + fb(n) * f.mass(k);
        let b_abs = result.g_bar(n + 1) * result.g_bar(n + 1 - k)
            + result.g_bar(n) * result.g_bar(n + 2 - k);
        scale += q * a_abs * b_abs;
    }
    Ok(InductResidual { residual: lhs - rhs, scale })
}

/// Shape of a lattice survival sequence: is the hazard monotone?
///
/// A lattice law has decreasing hazard exactly when its survival is
/// log-convex (`S_{n+2} S_n >= S_{n+1}^2` for all `n`), and increasing
/// hazard under the reverse inequality.  The scan stops once survival drops
/// below [`SURVIVAL_FLOOR`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeReport {
    /// Log-convex survival within `tol`: hazard never rises.
    pub decreasing_hazard: bool,
    /// Log-concave survival within `tol`: hazard never falls.
    pub increasing_hazard: bool,
    /// Largest violation of log-convexity, `max(S_{n+1}^2 - S_{n+2} S_n)`.
    pub convexity_violation: f64,
    /// Lattice point of that violation.
    pub convexity_violation_at: Option<usize>,
    /// Largest violation of log-concavity, `max(S_{n+2} S_n - S_{n+1}^2)`.
    pub concavity_violation: f64,
    /// Lattice point of that violation.
    pub concavity_violation_at: Option<usize>,
    /// Number of lattice points actually examined.
    pub points_checked: usize,
}

/// Scans `survival[0] = S_1, survival[1] = S_2, ...` for hazard monotonicity
/// with tolerance `tol` on the product comparisons.
pub fn discrete_shape_report(survival: &[f64], tol: f64) -> ShapeReport {
    let mut convexity_violation = 0.0_f64;
    let mut convexity_at = None;
    let mut concavity_violation = 0.0_f64;
    let mut concavity_at = None;
    let mut checked = 0;
    for i in 0..survival.len().saturating_sub(2) {
        if survival[i + 2] < SURVIVAL_FLOOR {
            break;
        }
        checked += 1;
        let cross = survival[i + 2] * survival[i] - survival[i + 1] * survival[i + 1];
        if -cross > convexity_violation {
            convexity_violation = -cross;
            convexity_at = Some(i + 1);
        }
        if cross > concavity_violation {
            concavity_violation = cross;
            concavity_at = Some(i + 1);
        }
    }
    ShapeReport {
        decreasing_hazard: convexity_violation <= tol,
        increasing_hazard: concavity_violation <= tol,
        convexity_violation,
        convexity_violation_at: convexity_at,
        concavity_violation,
        concavity_violation_at: concavity_at,
        points_checked: checked,
    }
}

/// One randomized input the closure sweep flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureFailure {
    pub trial: usize,
    pub masses: Vec<f64>,
    pub detail: String,
}

/// Outcome of [`closure_property_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub trials: usize,
    /// Decreasing-hazard inputs whose compound was not decreasing-hazard.
    pub preservation_failures: Vec<ClosureFailure>,
    /// Inputs with a certified hazard drop whose compound looked
    /// increasing-hazard anyway.
    pub reflection_failures: Vec<ClosureFailure>,
}

impl ClosureReport {
    pub fn all_passed(&self) -> bool {
        self.preservation_failures.is_empty() && self.reflection_failures.is_empty()
    }
}

const SHAPE_TOL: f64 = 1e-10;
/// Required certified margin of the hazard drop at the first lattice point
/// for the reflection half of the sweep.
const WITNESS_MARGIN: f64 = 1e-6;

/// Randomized check of two structural facts about geometric compounding:
///
/// 1. mixtures of geometric laws (decreasing hazard) compound into
///    decreasing-hazard laws, and
/// 2. a law whose hazard drops between the first two lattice points by a
///    certified margin compounds into a law that is *not*
///    increasing-hazard.
///
/// Each trial draws a fresh input law from a ChaCha stream seeded with
/// `seed`, computes `len` compound values, and scans shapes with tolerance
/// 1e-10.  Failures carry the offending input so they can be replayed.
pub fn closure_property_suite(
    trials: usize,
    p: f64,
    seed: u64,
    len: usize,
) -> Result<ClosureReport, CompoundError> {
    if trials == 0 {
        return Err(CompoundError::BadParam("need at least one trial".into()));
    }
    if len < 4 {
        return Err(CompoundError::BadParam(
            "need at least 4 lattice points to scan shapes".into(),
        ));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(CompoundError::BadParam(format!(
            "success probability must lie in (0, 1], got {}",
            p
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut preservation_failures = Vec::new();
    let mut reflection_failures = Vec::new();

    for trial in 0..trials {
        // Part 1: mixture of geometric ratios is decreasing-hazard; the
        // compound must be too.
        let pmf = random_geometric_mixture(&mut rng, len);
        let compound = compound_geometric(&pmf, p, len)?;
        let shape = discrete_shape_report(compound.g_bar_values(), SHAPE_TOL);
        if !shape.decreasing_hazard {
            preservation_failures.push(ClosureFailure {
                trial,
                masses: pmf.masses().to_vec(),
                detail: format!(
                    "compound survival log-convexity violated by {:.3e} at n = {:?}",
                    shape.convexity_violation, shape.convexity_violation_at
                ),
            });
        }

        // Part 2: input with a certified hazard drop at the first lattice
        // point; the compound must not scan as increasing-hazard.
        let pmf = random_law_with_hazard_drop(&mut rng);
        let compound = compound_geometric(&pmf, p, len)?;
        let shape = discrete_shape_report(compound.g_bar_values(), SHAPE_TOL);
        if shape.increasing_hazard {
            reflection_failures.push(ClosureFailure {
                trial,
                masses: pmf.masses().to_vec(),
                detail: format!(
                    "compound scanned as increasing-hazard over {} points (largest \
                     log-concavity violation {:.3e})",
                    shape.points_checked, shape.concavity_violation
                ),
            });
        }
    }
    Ok(ClosureReport { trials, preservation_failures, reflection_failures })
}

/// Mixture of 2-4 geometric laws with ratios in [0.35, 0.95]; survival is a
/// weighted sum of geometric decays, hence log-convex at every point.
fn random_geometric_mixture(rng: &mut ChaCha8Rng, len: usize) -> DiscretePmf {
    let components = rng.random_range(2..=4usize);
    let mut weights: Vec<f64> = (0..components).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let ratios: Vec<f64> = (0..components).map(|_| rng.random_range(0.35..0.95)).collect();
    let masses: Vec<f64> = (0..len)
        .map(|i| {
            weights
                .iter()
                .zip(&ratios)
                .map(|(w, r)| w * (1.0 - r) * r.powi(i as i32))
                .sum()
        })
        .collect();
    DiscretePmf::new(masses).expect("mixture masses are valid by construction")
}

/// Random finite-support law resampled until the hazard certifiably drops
/// between the first two lattice points:
/// `S_3 S_1 - S_2^2 = f_1 (1 - f_1) - f_2 >= WITNESS_MARGIN`.
fn random_law_with_hazard_drop(rng: &mut ChaCha8Rng) -> DiscretePmf {
    loop {
        let support = rng.random_range(3..=10usize);
        let mut masses: Vec<f64> = (0..support).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            continue;
        }
        for m in &mut masses {
            *m /= total;
        }
        if masses[0] * (1.0 - masses[0]) - masses[1] >= WITNESS_MARGIN {
            return DiscretePmf::new(masses).expect("normalized masses are valid");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: `P(Y = n)` by summing convolution powers,
    /// `sum over k of p q^(k-1) P(X_1 + ... + X_k = n)`.  Terms with
    /// `k > n` vanish because each `X_i` is at least 1.
    fn compound_mass_by_convolution(f: &DiscretePmf, p: f64, len: usize) -> Vec<f64> {
        let q = 1.0 - p;
        let mut out = vec![0.0; len];
        // conv[i] = P(X_1 + ... + X_k = i+1) for the current k.
        let mut conv: Vec<f64> = (1..=len).map(|n| f.mass(n)).collect();
        let mut weight = p;
        for _k in 1..=len {
            for n in 0..len {
                out[n] += weight * conv[n];
            }
            // One more summand: convolve with f.
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

    #[test]
    fn recursion_matches_the_convolution_oracle() {
        let f = DiscretePmf::new(vec![0.3, 0.5, 0.2]).unwrap();
        let res = compound_geometric(&f, 0.4, 30).unwrap();
        let oracle = compound_mass_by_convolution(&f, 0.4, 30);
        for n in 1..=30 {
            assert!(
                (res.g(n) - oracle[n - 1]).abs() <= 1e-14,
                "mass at {}: recursion {} vs oracle {}",
                n,
                res.g(n),
                oracle[n - 1]
            );
        }
    }

    #[test]
    fn mass_and_survival_recursions_are_mutually_consistent() {
        let f = DiscretePmf::new(vec![0.15, 0.35, 0.1, 0.25, 0.15]).unwrap();
        let res = compound_geometric(&f, 0.3, 60).unwrap();
        for n in 1..60 {
            let from_survival = res.g_bar(n) - res.g_bar(n + 1);
            assert!(
                (res.g(n) - from_survival).abs() <= 1e-14,
                "mass vs survival difference at n = {}: {} vs {}",
                n,
                res.g(n),
                from_survival
            );
        }
        // Survival starts at 1 (up to the rounding of the mass total)
        // because X (hence Y) is at least 1.
        assert!((res.g_bar(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn compound_of_a_geometric_is_geometric() {
        // Closed form: if X is geometric(ratio) then Y is geometric with
        // survival ratio 1 - p (1 - ratio).
        let ratio = 0.6;
        let p = 0.35;
        let f = DiscretePmf::geometric(ratio, 220).unwrap();
        let res = compound_geometric(&f, p, 200).unwrap();
        let c = 1.0 - p * (1.0 - ratio);
        for n in 1..=200 {
            let exact = c.powi(n as i32 - 1);
            assert!(
                (res.g_bar(n) - exact).abs() <= 1e-12 * exact.max(1e-30),
                "survival at {}: {} vs geometric {}",
                n,
                res.g_bar(n),
                exact
            );
        }
    }

    #[test]
    fn lattice_identity_holds_to_rounding_on_a_fixed_law() {
        let f = DiscretePmf::new(vec![0.3, 0.5, 0.2]).unwrap();
        let res = compound_geometric(&f, 0.4, 52).unwrap();
        for n in 1..=50 {
            let r = induct_identity_residual(&f, &res, n).unwrap();
            assert!(
                r.relative() <= 1e-12,
                "relative residual {:.3e} at n = {}",
                r.relative(),
                n
            );
        }
    }

    #[test]
    fn identity_needs_enough_computed_values() {
        let f = DiscretePmf::new(vec![0.5, 0.5]).unwrap();
        let res = compound_geometric(&f, 0.5, 10).unwrap();
        assert!(induct_identity_residual(&f, &res, 8).is_ok());
        assert!(matches!(
            induct_identity_residual(&f, &res, 9),
            Err(CompoundError::BadParam(_))
        ));
        assert!(matches!(
            induct_identity_residual(&f, &res, 0),
            Err(CompoundError::BadParam(_))
        ));
    }

    #[test]
    fn survival_is_exact_for_truncated_and_normalized_laws() {
        // Truncated: defect fills in past the support.
        let f = DiscretePmf::new(vec![0.4, 0.3]).unwrap();
        let s = f.survival(5);
        assert_eq!(s[0], 1.0, "defect 0.3 plus masses 0.7 is exactly 1");
        assert!((s[1] - 0.6).abs() < 1e-15);
        assert!((s[2] - 0.3).abs() < 1e-15);
        assert!((s[3] - 0.3).abs() < 1e-15, "past support only the defect remains");
        assert!((s[4] - 0.3).abs() < 1e-15);

        // Normalized: survival past the support is exactly zero, never a
        // tiny negative.
        let g = DiscretePmf::new(vec![0.2, 0.5, 0.3]).unwrap();
        let sg = g.survival(6);
        assert_eq!(sg[0], 1.0);
        assert_eq!(sg[3], 0.0);
        assert_eq!(sg[4], 0.0);
        assert!(sg.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn pmf_constructor_rejects_bad_masses() {
        assert!(DiscretePmf::new(vec![]).is_err());
        assert!(DiscretePmf::new(vec![0.5, -0.1]).is_err());
        assert!(DiscretePmf::new(vec![0.5, f64::NAN]).is_err());
        assert!(DiscretePmf::new(vec![0.8, 0.8]).is_err(), "total mass above 1");
        assert!(DiscretePmf::new(vec![0.0, 0.0]).is_err(), "zero total mass");
        assert!(DiscretePmf::geometric(1.0, 10).is_err());
        assert!(DiscretePmf::geometric(0.5, 0).is_err());
    }

    #[test]
    fn compound_parameters_are_validated() {
        let f = DiscretePmf::new(vec![1.0]).unwrap();
        assert!(matches!(compound_geometric(&f, 0.0, 5), Err(CompoundError::BadParam(_))));
        assert!(matches!(compound_geometric(&f, 1.5, 5), Err(CompoundError::BadParam(_))));
        assert!(matches!(compound_geometric(&f, 0.5, 0), Err(CompoundError::BadParam(_))));
        // p = 1 collapses Y to X.
        let g = DiscretePmf::new(vec![0.3, 0.7]).unwrap();
        let res = compound_geometric(&g, 1.0, 4).unwrap();
        assert_eq!(res.g(1), 0.3);
        assert_eq!(res.g(2), 0.7);
        assert_eq!(res.g(3), 0.0);
    }

    #[test]
    fn shape_report_reads_geometric_as_flat_hazard() {
        let f = DiscretePmf::geometric(0.5, 40).unwrap();
        let s = f.survival(40);
        let report = discrete_shape_report(&s, 1e-12);
        assert!(report.decreasing_hazard && report.increasing_hazard, "flat hazard is both");
        assert!(report.points_checked > 0);
    }

    #[test]
    fn shape_report_flags_the_mixture_hazard_drop_at_one() {
        // Equal mixture of ratios 0.4 and 0.8: the log-convexity surplus at
        // n = 1 is w(1-w)(r1-r2)^2 = 0.04, and it shrinks with n, so the
        // worst log-concavity violation sits at the first lattice point.
        let a = DiscretePmf::geometric(0.4, 60).unwrap();
        let b = DiscretePmf::geometric(0.8, 60).unwrap();
        let masses: Vec<f64> =
            a.masses().iter().zip(b.masses()).map(|(x, y)| 0.5 * x + 0.5 * y).collect();
        let f = DiscretePmf::new(masses).unwrap();
        let s = f.survival(60);
        let report = discrete_shape_report(&s, 1e-10);
        assert!(report.decreasing_hazard, "mixtures of geometrics never raise hazard");
        assert!(!report.increasing_hazard);
        assert!((report.concavity_violation - 0.04).abs() < 1e-12);
        assert_eq!(report.concavity_violation_at, Some(1));
    }

    #[test]
    fn shape_scan_stops_at_the_survival_floor() {
        // Steep geometric decay: survival underflows the floor quickly.
        let f = DiscretePmf::geometric(0.05, 300).unwrap();
        let s = f.survival(300);
        let report = discrete_shape_report(&s, 1e-12);
        assert!(report.points_checked < 300 - 2);
        assert!(report.decreasing_hazard && report.increasing_hazard);
    }

    #[test]
    fn closure_sweep_passes_and_is_deterministic() {
        let a = closure_property_suite(25, 0.35, 7, 120).unwrap();
        assert!(a.all_passed(), "preservation: {:?}, reflection: {:?}",
            a.preservation_failures.len(), a.reflection_failures.len());
        assert_eq!(a.trials, 25);
        let b = closure_property_suite(25, 0.35, 7, 120).unwrap();
        assert_eq!(a, b, "same seed, same verdicts");
        assert!(closure_property_suite(0, 0.35, 7, 120).is_err());
        assert!(closure_property_suite(5, 0.0, 7, 120).is_err());
        assert!(closure_property_suite(5, 0.35, 7, 2).is_err());
    }
}
