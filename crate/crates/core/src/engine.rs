//! Grid solvers for the renewal equations of a lifetime law.
//!
//! Everything here runs on the uniform grid `0, h, ..., t_max` and uses
//! trapezoidal product integration, so values converge at O(h^2) as the step
//! shrinks.  The forward substitution is the classical one for Volterra
//! equations of the second kind: at each node the convolution only involves
//! already-computed values plus an implicit diagonal term, which is moved to
//! the left-hand side.
//!
//! Three equations are handled:
//!
//! * the renewal density `m = f + m * f` (convolution), solved forward;
//! * its differentiated form `m' = f' + m(0) f + m' * f`, which propagates
//!   the density's one-sided slope jumps into one-sided values of `m'`;
//! * two residual functionals that vanish identically for the true solution
//!   and shrink at O(h^2) for the computed one, giving a self-contained
//!   correctness probe without a closed form.

use crate::dist::Lifetime;
use crate::grid::GridFunction;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid solver grid: {0}")]
    BadGrid(String),
    #[error(
        "grid step {step} too coarse for a density of {density_at_zero} at the origin; \
         the implicit diagonal needs step < {limit}"
    )]
    StepTooCoarse { step: f64, density_at_zero: f64, limit: f64 },
    #[error("log-convexity undefined: {0}")]
    NonpositiveSample(String),
}

/// Law sampled on the solver grid, with slope-jump locations resolved to
/// node indices.
struct LawSamples {
    h: f64,
    /// Density at each node (continuous, so one value suffices).
    f: Vec<f64>,
    /// Survival at each node.
    fbar: Vec<f64>,
    /// Node indices where the density's slope jumps, strictly inside the grid.
    breaks: Vec<usize>,
}

const NODE_ALIGN_TOL: f64 = 1e-9;

fn sample_law<D: Lifetime + ?Sized>(dist: &D, h: f64, t_max: f64) -> Result<LawSamples, SolveError> {
    if !(h.is_finite() && h > 0.0) {
        return Err(SolveError::BadGrid(format!("step must be positive and finite, got {}", h)));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(SolveError::BadGrid(format!(
            "horizon must be positive and finite, got {}",
            t_max
        )));
    }
    let steps = t_max / h;
    if (steps - steps.round()).abs() > NODE_ALIGN_TOL || steps.round() < 1.0 {
        return Err(SolveError::BadGrid(format!(
            "horizon {} is not a whole number of steps of {}",
            t_max, h
        )));
    }
    let n = steps.round() as usize;
    let mut breaks = Vec::new();
    for b in dist.slope_break_times() {
        let j = (b / h).round();
        if (b - j * h).abs() > NODE_ALIGN_TOL {
            return Err(SolveError::BadGrid(format!(
                "slope break at t = {} does not sit on a grid node (step {})",
                b, h
            )));
        }
        let j = j as usize;
        if j == 0 || j >= n {
            return Err(SolveError::BadGrid(format!(
                "slope break at t = {} must lie strictly inside (0, {})",
                b, t_max
            )));
        }
        breaks.push(j);
    }
    let f = (0..=n).map(|i| dist.density(i as f64 * h)).collect();
    let fbar = (0..=n).map(|i| dist.survival(i as f64 * h)).collect();
    Ok(LawSamples { h, f, fbar, breaks })
}

impl LawSamples {
    fn n(&self) -> usize {
        self.f.len() - 1
    }

    /// `1 - h f(0) / 2`, the implicit diagonal factor.  Rejects grids where
    /// it falls to 1/2 or below: accuracy and stability both degrade once the
    /// implicit term dominates.
    fn diagonal(&self) -> Result<f64, SolveError> {
        let d = 1.0 - 0.5 * self.h * self.f[0];
        if d > 0.5 {
            Ok(d)
        } else {
            Err(SolveError::StepTooCoarse {
                step: self.h,
                density_at_zero: self.f[0],
                limit: 1.0 / self.f[0],
            })
        }
    }
}

/// Solves the renewal-density equation `m(t) = f(t) + (m * f)(t)` on the
/// grid `0, h, ..., t_max` by forward substitution with trapezoidal panels.
///
/// Any slope-break times the law reports must sit on grid nodes strictly
/// inside the horizon; `t_max` must be a whole number of steps.
pub fn solve_renewal_density<D: Lifetime + ?Sized>(
    dist: &D,
    h: f64,
    t_max: f64,
) -> Result<GridFunction, SolveError> {
    let s = sample_law(dist, h, t_max)?;
    let m = density_solve(&s)?;
    Ok(GridFunction::new(h, m))
}

fn density_solve(s: &LawSamples) -> Result<Vec<f64>, SolveError> {
    let diag = s.diagonal()?;
    let n = s.n();
    let mut m = vec![0.0; n + 1];
    m[0] = s.f[0];
    for i in 1..=n {
        let mut acc = 0.5 * m[0] * s.f[i];
        for j in 1..i {
            acc += m[j] * s.f[i - j];
        }
        m[i] = (s.f[i] + s.h * acc) / diag;
    }
    Ok(m)
}

/// Cumulative trapezoidal integral of the renewal density: the expected
/// number of renewals by each grid time.
pub fn renewal_function(m: &GridFunction) -> GridFunction {
    let h = m.step();
    let v = m.values();
    let mut acc = vec![0.0; v.len()];
    for i in 1..v.len() {
        acc[i] = acc[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
    }
    GridFunction::new(h, acc)
}

/// Solves the differentiated renewal equation
/// `m'(t) = f'(t) + m(0) f(t) + (m' * f)(t)` on the grid of `m`.
///
/// Where the density's slope jumps, `m'` jumps by the same amount; the
/// returned grid stores the left limit and marks the right limit at those
/// nodes.  The quadrature weights use the two-sided average there, which is
/// what trapezoidal panels on either side of the node add up to.  At the
/// origin the slope equals the hazard's right slope (the differentiated
/// equation pins `m'(0) = f'(0) + f(0)^2`, and that is the same number).
pub fn solve_renewal_density_slope<D: Lifetime + ?Sized>(
    dist: &D,
    m: &GridFunction,
) -> Result<GridFunction, SolveError> {
    let s = sample_law(dist, m.step(), m.last_time())?;
    if m.len() != s.f.len() {
        return Err(SolveError::BadGrid(format!(
            "density grid has {} nodes but the law samples to {}",
            m.len(),
            s.f.len()
        )));
    }
    let diag = s.diagonal()?;
    let n = s.n();
    let h = s.h;
    let m0 = m.value(0);

    let mut is_break = vec![false; n + 1];
    for &j in &s.breaks {
        is_break[j] = true;
    }
    // One-sided density slopes at the nodes; at the origin only the right
    // limit is meaningful.
    let slope_left: Vec<f64> = (0..=n)
        .map(|i| {
            if i == 0 {
                dist.density_slope_right(0.0)
            } else {
                dist.density_slope_left(i as f64 * h)
            }
        })
        .collect();
    let slope_right: Vec<f64> = (0..=n).map(|i| dist.density_slope_right(i as f64 * h)).collect();

    let mut left = vec![0.0; n + 1];
    left[0] = dist.hazard_slope_right(0.0);
    // Quadrature values: two-sided average at break nodes, plain value
    // elsewhere.
    let mut w = vec![0.0; n + 1];
    w[0] = left[0];
    for i in 1..=n {
        let mut acc = 0.5 * w[0] * s.f[i];
        for j in 1..i {
            acc += w[j] * s.f[i - j];
        }
        let li = (slope_left[i] + m0 * s.f[i] + h * acc) / diag;
        left[i] = li;
        w[i] = if is_break[i] {
            li + 0.5 * (slope_right[i] - slope_left[i])
        } else {
            li
        };
    }
    let mut g = GridFunction::new(h, left);
    for &j in &s.breaks {
        g.set_right_value(j, g.value(j) + (slope_right[j] - slope_left[j]));
    }
    Ok(g)
}

/// Residual of the hazard-form identity
/// `m'(t) = r'(t) Fbar(t) + integral of m'(x) (r(t-x) - r(t)) Fbar(t-x) dx`,
/// evaluated with the same trapezoidal panels as the solver.  For an exact
/// solution the residual is zero; for the computed one it shrinks at O(h^2).
/// All terms at a node use left limits, matching the solver's convention.
pub fn key_identity_residual<D: Lifetime + ?Sized>(
    dist: &D,
    m_slope: &GridFunction,
) -> Result<GridFunction, SolveError> {
    let s = sample_law(dist, m_slope.step(), m_slope.last_time())?;
    if m_slope.len() != s.f.len() {
        return Err(SolveError::BadGrid(
            "slope grid does not match the law's sample grid".into(),
        ));
    }
    let n = s.n();
    let h = s.h;
    let hazard: Vec<f64> = (0..=n).map(|i| s.f[i] / s.fbar[i]).collect();
    let w = quadrature_values(m_slope);
    let mut res = vec![0.0; n + 1];
    for i in 0..=n {
        let hazard_slope = if i == 0 {
            dist.hazard_slope_right(0.0)
        } else {
            dist.hazard_slope_left(i as f64 * h)
        };
        // Integrand m'(x) (r(t-x) - r(t)) Fbar(t-x) vanishes at x = 0.
        let mut acc = 0.0;
        for j in 1..i {
            acc += w[j] * (hazard[i - j] - hazard[i]) * s.fbar[i - j];
        }
        if i > 0 {
            acc += 0.5 * m_slope.value(i) * (hazard[0] - hazard[i]) * s.fbar[0];
        }
        res[i] = m_slope.value(i) - hazard_slope * s.fbar[i] - h * acc;
    }
    Ok(GridFunction::new(h, res))
}

/// Residual of the integrated identity
/// `integral of m'(x) Fbar(t-x) dx = f(t) - f(0) Fbar(t)`,
/// with the same conventions as [`key_identity_residual`].
pub fn int_identity_residual<D: Lifetime + ?Sized>(
    dist: &D,
    m_slope: &GridFunction,
) -> Result<GridFunction, SolveError> {
    let s = sample_law(dist, m_slope.step(), m_slope.last_time())?;
    if m_slope.len() != s.f.len() {
        return Err(SolveError::BadGrid(
            "slope grid does not match the law's sample grid".into(),
        ));
    }
    let n = s.n();
    let h = s.h;
    let w = quadrature_values(m_slope);
    let f0 = s.f[0];
    let mut res = vec![0.0; n + 1];
    for i in 0..=n {
        let mut acc = 0.5 * w[0] * s.fbar[i];
        for j in 1..i {
            acc += w[j] * s.fbar[i - j];
        }
        if i > 0 {
            acc += 0.5 * m_slope.value(i) * s.fbar[0];
        }
        let integral = if i == 0 { 0.0 } else { h * acc };
        res[i] = integral - s.f[i] + f0 * s.fbar[i];
    }
    Ok(GridFunction::new(h, res))
}

/// Node values used when a grid function appears inside a convolution:
/// the two-sided average at marked jumps, the stored value elsewhere.
fn quadrature_values(g: &GridFunction) -> Vec<f64> {
    (0..g.len()).map(|i| 0.5 * (g.value(i) + g.value_right(i))).collect()
}

/// How monotone a sampled function is, step to step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    /// No step rises by more than `tol`.
    pub nonincreasing: bool,
    /// Every step is a strict drop (no tolerance).
    pub strictly_decreasing: bool,
    /// Largest signed step `v[i+1] - v[i]`.
    pub max_increase: f64,
    /// Left node time of the largest step.
    pub max_increase_at: Option<f64>,
}

/// Scans consecutive samples for increases; `tol` is how much rise still
/// counts as "nonincreasing" (use 0 for the strict reading).
pub fn monotonicity_report(g: &GridFunction, tol: f64) -> MonotonicityReport {
    let v = g.values();
    let mut max_increase = f64::NEG_INFINITY;
    let mut at = None;
    let mut strictly = true;
    for i in 0..v.len().saturating_sub(1) {
        let d = v[i + 1] - v[i];
        if d >= 0.0 {
            strictly = false;
        }
        if d > max_increase {
            max_increase = d;
            at = Some(g.time(i));
        }
    }
    if v.len() < 2 {
        return MonotonicityReport {
            nonincreasing: true,
            strictly_decreasing: false,
            max_increase: f64::NEG_INFINITY,
            max_increase_at: None,
        };
    }
    MonotonicityReport {
        nonincreasing: max_increase <= tol,
        strictly_decreasing: strictly,
        max_increase,
        max_increase_at: at,
    }
}

/// Where a positive sampled function sits between log-convex and
/// log-concave.  Exactly log-linear data earns both flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogConvexityReport {
    /// Second difference of the log never dips below `-tol`.
    pub log_convex: bool,
    /// Second difference of the log never rises above `tol`.
    pub log_concave: bool,
    /// Smallest second difference of the log over interior nodes.
    pub min_second_difference: f64,
    /// Node time of that smallest value.
    pub min_at: Option<f64>,
    /// Largest second difference of the log over interior nodes.
    pub max_second_difference: f64,
    /// Node time of that largest value.
    pub max_at: Option<f64>,
}

/// Second-differences `log v[i-1] - 2 log v[i] + log v[i+1]` over interior
/// nodes, tested against `-tol` (convexity) and `+tol` (concavity).
/// Errors if any sample is not strictly positive.
pub fn log_convexity_report(g: &GridFunction, tol: f64) -> Result<LogConvexityReport, SolveError> {
    let v = g.values();
    for (i, &x) in v.iter().enumerate() {
        if !(x > 0.0) {
            return Err(SolveError::NonpositiveSample(format!(
                "sample {} at t = {} is {}",
                i,
                g.time(i),
                x
            )));
        }
    }
    let mut min_dd = f64::INFINITY;
    let mut min_at = None;
    let mut max_dd = f64::NEG_INFINITY;
    let mut max_at = None;
    for i in 1..v.len().saturating_sub(1) {
        let dd = v[i - 1].ln() - 2.0 * v[i].ln() + v[i + 1].ln();
        if dd < min_dd {
            min_dd = dd;
            min_at = Some(g.time(i));
        }
        if dd > max_dd {
            max_dd = dd;
            max_at = Some(g.time(i));
        }
    }
    Ok(LogConvexityReport {
        log_convex: v.len() < 3 || min_dd >= -tol,
        log_concave: v.len() < 3 || max_dd <= tol,
        min_second_difference: min_dd,
        min_at,
        max_second_difference: max_dd,
        max_at,
    })
}

/// Everything the grid solvers produce for one law and one grid.
#[derive(Debug, Clone)]
pub struct RenewalSolution {
    /// Renewal density `m`.
    pub m: GridFunction,
    /// Renewal function `M`, the cumulative integral of `m`.
    pub m_integral: GridFunction,
    /// One-sided slope of `m` (left limits stored, right limits marked at
    /// the law's slope breaks).
    pub m_slope: GridFunction,
    /// Residual grid of the hazard-form identity.
    pub key_identity_residual: GridFunction,
    /// Residual grid of the integrated identity.
    pub int_identity_residual: GridFunction,
}

impl RenewalSolution {
    pub fn step(&self) -> f64 {
        self.m.step()
    }
}

/// Runs the full pipeline: density, cumulative integral, slope, and both
/// identity residuals.
pub fn solve<D: Lifetime + ?Sized>(dist: &D, h: f64, t_max: f64) -> Result<RenewalSolution, SolveError> {
    let m = solve_renewal_density(dist, h, t_max)?;
    let m_integral = renewal_function(&m);
    let m_slope = solve_renewal_density_slope(dist, &m)?;
    let key_identity_residual = key_identity_residual(dist, &m_slope)?;
    let int_identity_residual = int_identity_residual(dist, &m_slope)?;
    Ok(RenewalSolution { m, m_integral, m_slope, key_identity_residual, int_identity_residual })
}
