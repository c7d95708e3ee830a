//! Piecewise lifetime laws built from a small catalog of closed-form segments.
//!
//! The centrepiece is a four-segment family whose renewal function is concave
//! even though the hazard rate of the underlying law is not monotone: the
//! hazard falls on a head segment, rises back along a shifted-exponential
//! bridge, relaxes exponentially, and is flat from some point on.  Everything
//! about each segment (survival, density, hazard, one-sided slopes, inverse
//! survival) is available in closed form, which keeps the solvers and the
//! Monte Carlo sampler honest about the same object.

use thiserror::Error;

/// Default horizon standing in for "infinity" when a check has to sample an
/// unbounded interval.
pub const DEFAULT_HORIZON: f64 = 8.0;

#[derive(Debug, Error)]
pub enum DistError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("outside the law's domain: {0}")]
    Domain(String),
    #[error("segments do not form a valid law: {0}")]
    InvalidSegments(String),
}

/// Closed-form building blocks for piecewise laws.  Every variant is written
/// in absolute time, so a segment can evaluate itself without knowing its
/// neighbours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentForm {
    /// Survival `(exp(-t) + 1) / 2`: hazard `1/(1 + e^t)`, strictly falling.
    HalfLogistic,
    /// Survival `alpha * exp(-lambda t) - beta`: hazard
    /// `lambda / (1 - (beta/alpha) e^(lambda t))`, strictly rising when
    /// `beta > 0`.
    ShiftedExponential { alpha: f64, lambda: f64, beta: f64 },
    /// Hazard decaying geometrically from an anchor:
    /// `r(t) = hazard0 * exp(-decay (t - t0))` with survival `survival0`
    /// at `t0`.
    DecayingHazard { t0: f64, hazard0: f64, survival0: f64, decay: f64 },
    /// Flat hazard from an anchor: survival `survival0 * exp(-rate (t - t0))`.
    ConstantHazard { t0: f64, rate: f64, survival0: f64 },
}

impl SegmentForm {
    fn survival(&self, t: f64) -> f64 {
        match *self {
            SegmentForm::HalfLogistic => 0.5 * ((-t).exp() + 1.0),
            SegmentForm::ShiftedExponential { alpha, lambda, beta } => {
                alpha * (-lambda * t).exp() - beta
            }
            SegmentForm::DecayingHazard { t0, hazard0, survival0, decay } => {
                let drop = hazard0 / decay * (1.0 - (-decay * (t - t0)).exp());
                survival0 * (-drop).exp()
            }
            SegmentForm::ConstantHazard { t0, rate, survival0 } => {
                survival0 * (-rate * (t - t0)).exp()
            }
        }
    }

    fn hazard(&self, t: f64) -> f64 {
        match *self {
            SegmentForm::HalfLogistic => 1.0 / (1.0 + t.exp()),
            SegmentForm::ShiftedExponential { alpha, lambda, beta } => {
                lambda / (1.0 - beta / alpha * (lambda * t).exp())
            }
            SegmentForm::DecayingHazard { t0, hazard0, decay, .. } => {
                hazard0 * (-decay * (t - t0)).exp()
            }
            SegmentForm::ConstantHazard { rate, .. } => rate,
        }
    }

    fn density(&self, t: f64) -> f64 {
        match *self {
            SegmentForm::HalfLogistic => 0.5 * (-t).exp(),
            SegmentForm::ShiftedExponential { alpha, lambda, .. } => {
                alpha * lambda * (-lambda * t).exp()
            }
            _ => self.hazard(t) * self.survival(t),
        }
    }

    fn hazard_slope(&self, t: f64) -> f64 {
        match *self {
            SegmentForm::HalfLogistic => {
                let e = t.exp();
                -e / ((1.0 + e) * (1.0 + e))
            }
            SegmentForm::ShiftedExponential { alpha, lambda, beta } => {
                let g = beta / alpha * (lambda * t).exp();
                lambda * lambda * g / ((1.0 - g) * (1.0 - g))
            }
            SegmentForm::DecayingHazard { decay, .. } => -decay * self.hazard(t),
            SegmentForm::ConstantHazard { .. } => 0.0,
        }
    }

    /// d/dt of the density; `f' = (r' - r^2) * survival` for the anchored
    /// forms, explicit for the other two.
    fn density_slope(&self, t: f64) -> f64 {
        match *self {
            SegmentForm::HalfLogistic => -0.5 * (-t).exp(),
            SegmentForm::ShiftedExponential { alpha, lambda, .. } => {
                -alpha * lambda * lambda * (-lambda * t).exp()
            }
            _ => {
                let r = self.hazard(t);
                (self.hazard_slope(t) - r * r) * self.survival(t)
            }
        }
    }

    /// Solves `survival(t) = u` for `t`; caller guarantees `u` lies in the
    /// segment's survival range.
    fn inverse_survival(&self, u: f64) -> f64 {
        match *self {
            SegmentForm::HalfLogistic => -(2.0 * u - 1.0).ln(),
            SegmentForm::ShiftedExponential { alpha, lambda, beta } => {
                -((u + beta) / alpha).ln() / lambda
            }
            SegmentForm::DecayingHazard { t0, hazard0, survival0, decay } => {
                let drop = (survival0 / u).ln();
                t0 - (1.0 - decay * drop / hazard0).ln() / decay
            }
            SegmentForm::ConstantHazard { t0, rate, survival0 } => {
                t0 + (survival0 / u).ln() / rate
            }
        }
    }
}

/// One piece of a piecewise law: a closed form valid on `[t_lo, t_hi)`
/// (the final segment uses `t_hi = +inf`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t_lo: f64,
    pub t_hi: f64,
    pub form: SegmentForm,
}

impl Segment {
    pub fn survival(&self, t: f64) -> f64 {
        self.form.survival(t)
    }

    pub fn density(&self, t: f64) -> f64 {
        self.form.density(t)
    }

    pub fn hazard(&self, t: f64) -> f64 {
        self.form.hazard(t)
    }

    pub fn hazard_slope(&self, t: f64) -> f64 {
        self.form.hazard_slope(t)
    }

    pub fn density_slope(&self, t: f64) -> f64 {
        self.form.density_slope(t)
    }
}

/// A lifetime law the renewal machinery can consume: survival, density,
/// hazard, and their one-sided slopes, all evaluable at arbitrary `t >= 0`.
///
/// Laws are immutable once built and safe to share across worker threads.
pub trait Lifetime: Send + Sync {
    fn survival(&self, t: f64) -> f64;
    fn density(&self, t: f64) -> f64;

    fn hazard(&self, t: f64) -> f64 {
        self.density(t) / self.survival(t)
    }

    /// Left limit of the density's derivative (`t = 0` yields the right one).
    fn density_slope_left(&self, t: f64) -> f64;
    /// Right limit of the density's derivative.
    fn density_slope_right(&self, t: f64) -> f64;

    /// Left limit of the hazard's derivative (`t = 0` yields the right one).
    fn hazard_slope_left(&self, t: f64) -> f64;
    /// Right limit of the hazard's derivative.
    fn hazard_slope_right(&self, t: f64) -> f64;

    /// Interior times where the density's derivative may jump, sorted
    /// ascending.  Empty for smooth laws.
    fn slope_break_times(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// A proper lifetime law glued together from closed-form segments.
///
/// Invariants enforced at construction: segments tile `[0, inf)` without gaps,
/// survival starts at 1, survival and density are continuous across joins,
/// the hazard is positive, and the final segment has a constant positive
/// hazard so the tail actually decays to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseDistribution {
    segments: Vec<Segment>,
    /// Interior join times, ascending.
    knots: Vec<f64>,
}

/// Point-in-time summary of a law, all one-sided slopes included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEval {
    pub survival: f64,
    pub density: f64,
    pub hazard: f64,
    pub density_slope_left: f64,
    pub density_slope_right: f64,
    pub hazard_slope_left: f64,
    pub hazard_slope_right: f64,
}

const JOIN_CONTINUITY_TOL: f64 = 1e-9;

impl PiecewiseDistribution {
    /// Validates and assembles segments into a law.
    ///
    /// Fails when the segments leave gaps, survival does not start at 1,
    /// survival or density jumps at a join (relative tolerance 1e-9), the
    /// hazard is not positive, or the tail segment is not a constant positive
    /// hazard (anything else would leave survival bounded away from zero or
    /// push it negative).
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self, DistError> {
        if segments.is_empty() {
            return Err(DistError::InvalidSegments("no segments given".into()));
        }
        if segments[0].t_lo != 0.0 {
            return Err(DistError::InvalidSegments(format!(
                "first segment must start at 0, got {}",
                segments[0].t_lo
            )));
        }
        let last = segments.len() - 1;
        for (i, seg) in segments.iter().enumerate() {
            let expect_hi_finite = i < last;
            if !(seg.t_hi > seg.t_lo) {
                return Err(DistError::InvalidSegments(format!(
                    "segment {} has empty range [{}, {})",
                    i, seg.t_lo, seg.t_hi
                )));
            }
            if expect_hi_finite && !seg.t_hi.is_finite() {
                return Err(DistError::InvalidSegments(format!(
                    "only the final segment may extend to infinity (segment {})",
                    i
                )));
            }
            if i > 0 && segments[i - 1].t_hi != seg.t_lo {
                return Err(DistError::InvalidSegments(format!(
                    "gap between segments {} and {}: {} vs {}",
                    i - 1,
                    i,
                    segments[i - 1].t_hi,
                    seg.t_lo
                )));
            }
        }
        if !segments[last].t_hi.is_infinite() {
            return Err(DistError::InvalidSegments(
                "final segment must extend to infinity".into(),
            ));
        }
        match segments[last].form {
            SegmentForm::ConstantHazard { rate, .. } if rate > 0.0 => {}
            _ => {
                return Err(DistError::InvalidSegments(
                    "final segment must carry a constant positive hazard so survival decays to zero"
                        .into(),
                ));
            }
        }
        let s0 = segments[0].survival(0.0);
        if (s0 - 1.0).abs() > JOIN_CONTINUITY_TOL {
            return Err(DistError::InvalidSegments(format!(
                "survival at 0 must be 1, got {}",
                s0
            )));
        }
        for i in 1..segments.len() {
            let t = segments[i].t_lo;
            let (sl, sr) = (segments[i - 1].survival(t), segments[i].survival(t));
            if (sl - sr).abs() > JOIN_CONTINUITY_TOL * sl.abs().max(1.0) {
                return Err(DistError::InvalidSegments(format!(
                    "survival jumps at t = {}: {} vs {}",
                    t, sl, sr
                )));
            }
            let (fl, fr) = (segments[i - 1].density(t), segments[i].density(t));
            if (fl - fr).abs() > JOIN_CONTINUITY_TOL * fl.abs().max(1.0) {
                return Err(DistError::InvalidSegments(format!(
                    "density jumps at t = {}: {} vs {}",
                    t, fl, fr
                )));
            }
        }
        for (i, seg) in segments.iter().enumerate() {
            let hi = if seg.t_hi.is_finite() { seg.t_hi } else { seg.t_lo + 1.0 };
            for t in [seg.t_lo, 0.5 * (seg.t_lo + hi), hi] {
                let (r, s) = (seg.hazard(t), seg.survival(t));
                if !(r > 0.0 && r.is_finite()) || !(s > 0.0) {
                    return Err(DistError::InvalidSegments(format!(
                        "segment {} must keep hazard and survival positive (t = {}: hazard {}, survival {})",
                        i, t, r, s
                    )));
                }
            }
        }
        let knots = segments[..last].iter().map(|s| s.t_hi).collect();
        Ok(PiecewiseDistribution { segments, knots })
    }

    /// The memoryless law with the given rate, as a single-segment instance.
    pub fn exponential(rate: f64) -> Result<Self, DistError> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(DistError::InvalidParams(format!(
                "exponential rate must be positive and finite, got {}",
                rate
            )));
        }
        PiecewiseDistribution::from_segments(vec![Segment {
            t_lo: 0.0,
            t_hi: f64::INFINITY,
            form: SegmentForm::ConstantHazard { t0: 0.0, rate, survival0: 1.0 },
        }])
    }

    /// Interior join times, ascending (empty for a single-segment law).
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Index of the segment owning `t` when approaching from the right:
    /// `t_lo <= t < t_hi`.
    fn seg_right(&self, t: f64) -> usize {
        match self.segments.iter().position(|s| t < s.t_hi) {
            Some(i) => i,
            None => self.segments.len() - 1,
        }
    }

    /// Index of the segment owning `t` when approaching from the left:
    /// `t_lo < t <= t_hi` (0 for `t = 0`).
    fn seg_left(&self, t: f64) -> usize {
        if t <= 0.0 {
            return 0;
        }
        match self.segments.iter().position(|s| t <= s.t_hi) {
            Some(i) => i,
            None => self.segments.len() - 1,
        }
    }

    /// Full point evaluation with domain checking.
    pub fn eval(&self, t: f64) -> Result<PointEval, DistError> {
        if !t.is_finite() || t < 0.0 {
            return Err(DistError::Domain(format!(
                "time must be finite and nonnegative, got {}",
                t
            )));
        }
        Ok(PointEval {
            survival: self.survival(t),
            density: self.density(t),
            hazard: self.hazard(t),
            density_slope_left: self.density_slope_left(t),
            density_slope_right: self.density_slope_right(t),
            hazard_slope_left: self.hazard_slope_left(t),
            hazard_slope_right: self.hazard_slope_right(t),
        })
    }

    /// Solves `survival(t) = u` for `t`, exactly (per-segment closed forms).
    ///
    /// `u` must lie in `(0, 1]`; `u = 1` maps to 0.  This is the workhorse of
    /// the inverse-transform sampler.
    pub fn inverse_survival(&self, u: f64) -> Result<f64, DistError> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(DistError::Domain(format!(
                "survival level must lie in (0, 1], got {}",
                u
            )));
        }
        if u == 1.0 {
            return Ok(0.0);
        }
        for seg in &self.segments {
            // Survival is strictly decreasing, so the first segment whose
            // terminal survival drops below u owns the level.
            let tail = if seg.t_hi.is_finite() { seg.survival(seg.t_hi) } else { 0.0 };
            if u > tail {
                return Ok(seg.form.inverse_survival(u).max(seg.t_lo));
            }
        }
        // Unreachable: the final segment's terminal survival is 0.
        Err(DistError::Domain(format!("no segment attains survival level {}", u)))
    }
}

impl Lifetime for PiecewiseDistribution {
    fn survival(&self, t: f64) -> f64 {
        self.segments[self.seg_right(t)].survival(t)
    }

    fn density(&self, t: f64) -> f64 {
        self.segments[self.seg_right(t)].density(t)
    }

    fn hazard(&self, t: f64) -> f64 {
        self.segments[self.seg_right(t)].hazard(t)
    }

    fn density_slope_left(&self, t: f64) -> f64 {
        self.segments[self.seg_left(t)].density_slope(t)
    }

    fn density_slope_right(&self, t: f64) -> f64 {
        self.segments[self.seg_right(t)].density_slope(t)
    }

    fn hazard_slope_left(&self, t: f64) -> f64 {
        self.segments[self.seg_left(t)].hazard_slope(t)
    }

    fn hazard_slope_right(&self, t: f64) -> f64 {
        self.segments[self.seg_right(t)].hazard_slope(t)
    }

    fn slope_break_times(&self) -> Vec<f64> {
        self.knots.clone()
    }
}

/// Constants tying the head segment to the shifted-exponential bridge so the
/// assembled law is continuous in survival, density, and hazard at the first
/// knot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub t1: f64,
    pub beta: f64,
    /// Bridge rate; lies in (0, 1) and rises toward `hazard_at_t1` as
    /// `beta` shrinks.
    pub lambda: f64,
    /// Bridge amplitude.
    pub alpha: f64,
    /// `beta / alpha`, the bridge's relative shift.
    pub epsilon: f64,
    /// Hazard of the head segment at its end, `1 / (1 + e^t1)`.
    pub hazard_at_t1: f64,
    /// Density of the assembled law at the origin; the half-logistic head
    /// pins it at exactly one half for every member of the family.
    pub density_at_origin: f64,
}

impl FamilyParams {
    /// How far the assembled pieces miss continuity at `t1`, as
    /// `(survival gap, hazard gap)`.  Useful as a self-check; both are zero
    /// up to rounding.
    pub fn continuity_gaps(&self) -> (f64, f64) {
        let head = SegmentForm::HalfLogistic;
        let bridge = SegmentForm::ShiftedExponential {
            alpha: self.alpha,
            lambda: self.lambda,
            beta: self.beta,
        };
        (
            head.survival(self.t1) - bridge.survival(self.t1),
            head.hazard(self.t1) - bridge.hazard(self.t1),
        )
    }
}

/// Solves the continuity constraints at `t1` for the bridge constants.
///
/// With survival `(e^-t + 1)/2` on the head and `alpha e^(-lambda t) - beta`
/// on the bridge, matching survival and density at `t1` forces
/// `lambda = 1 / (1 + (1 + 2 beta) e^t1)` and
/// `alpha = e^((lambda - 1) t1) / (2 lambda)`.
pub fn derive_family_params(t1: f64, beta: f64) -> Result<FamilyParams, DistError> {
    if !(t1.is_finite() && t1 > 0.0) {
        return Err(DistError::InvalidParams(format!(
            "head length t1 must be positive and finite, got {}",
            t1
        )));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(DistError::InvalidParams(format!(
            "shift beta must be positive and finite, got {}",
            beta
        )));
    }
    let e_t1 = t1.exp();
    if !((1.0 + 2.0 * beta) * e_t1).is_finite() {
        return Err(DistError::InvalidParams(format!(
            "t1 = {} too large: bridge constants overflow",
            t1
        )));
    }
    let lambda = 1.0 / (1.0 + (1.0 + 2.0 * beta) * e_t1);
    let alpha = ((lambda - 1.0) * t1).exp() / (2.0 * lambda);
    Ok(FamilyParams {
        t1,
        beta,
        lambda,
        alpha,
        epsilon: beta / alpha,
        hazard_at_t1: 1.0 / (1.0 + e_t1),
        density_at_origin: SegmentForm::HalfLogistic.density(0.0),
    })
}

/// Recipe for one member of the four-segment family.
///
/// `t3 = None` places the flat tail at the earliest admissible point,
/// `t2 + 2 ln(r(t2)/r(t1))`, where the relaxed hazard first drops back to the
/// head's terminal level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleSpec {
    pub t1: f64,
    pub t2: f64,
    pub t3: Option<f64>,
    pub beta: f64,
}

impl Default for CounterexampleSpec {
    fn default() -> Self {
        CounterexampleSpec { t1: 1.0, t2: 1.5, t3: None, beta: 0.02 }
    }
}

impl CounterexampleSpec {
    /// Earliest admissible start of the flat tail: the time where the
    /// relaxing hazard has decayed back to the head's terminal hazard.
    pub fn tail_start_bound(&self) -> Result<f64, DistError> {
        let p = derive_family_params(self.t1, self.beta)?;
        let r2 = bridge_end_hazard(&p, self.t2)?;
        Ok(self.t2 + 2.0 * (r2 / p.hazard_at_t1).ln())
    }
}

/// Hazard of the bridge at `t2`, with the positivity check that the bridge
/// actually reaches that far.
fn bridge_end_hazard(p: &FamilyParams, t2: f64) -> Result<f64, DistError> {
    let g = p.epsilon * (p.lambda * t2).exp();
    if g >= 1.0 {
        return Err(DistError::InvalidParams(format!(
            "bridge survival hits zero before t2 = {} (shift term {:.3} >= 1); reduce beta or t2",
            t2, g
        )));
    }
    Ok(p.lambda / (1.0 - g))
}

/// Assembles the four-segment law described by `spec`.
///
/// The head carries survival `(e^-t + 1)/2` on `[0, t1)`; the bridge carries
/// `alpha e^(-lambda t) - beta` on `[t1, t2)` with constants from
/// [`derive_family_params`]; the hazard then relaxes as
/// `r(t2) e^-((t - t2)/2)` on `[t2, t3)` and stays flat from `t3` on.
/// `t3` must sit at or beyond [`CounterexampleSpec::tail_start_bound`] so the
/// flat tail's rate does not exceed the head's terminal hazard.
pub fn build_counterexample(spec: &CounterexampleSpec) -> Result<PiecewiseDistribution, DistError> {
    let p = derive_family_params(spec.t1, spec.beta)?;
    if !(spec.t2.is_finite() && spec.t2 > spec.t1) {
        return Err(DistError::InvalidParams(format!(
            "t2 must be finite and exceed t1 = {}, got {}",
            spec.t1, spec.t2
        )));
    }
    let r2 = bridge_end_hazard(&p, spec.t2)?;
    let bound = spec.t2 + 2.0 * (r2 / p.hazard_at_t1).ln();
    let t3 = spec.t3.unwrap_or(bound);
    if !(t3.is_finite() && t3 > spec.t2) {
        return Err(DistError::InvalidParams(format!(
            "t3 must be finite and exceed t2 = {}, got {}",
            spec.t2, t3
        )));
    }
    if t3 < bound * (1.0 - 1e-12) {
        return Err(DistError::InvalidParams(format!(
            "t3 = {} starts the flat tail before the admissible bound {}; \
             the tail hazard would exceed the head's terminal hazard",
            t3, bound
        )));
    }
    let s2 = SegmentForm::ShiftedExponential {
        alpha: p.alpha,
        lambda: p.lambda,
        beta: p.beta,
    }
    .survival(spec.t2);
    let relax = SegmentForm::DecayingHazard { t0: spec.t2, hazard0: r2, survival0: s2, decay: 0.5 };
    let tail = SegmentForm::ConstantHazard {
        t0: t3,
        rate: relax.hazard(t3),
        survival0: relax.survival(t3),
    };
    PiecewiseDistribution::from_segments(vec![
        Segment { t_lo: 0.0, t_hi: spec.t1, form: SegmentForm::HalfLogistic },
        Segment {
            t_lo: spec.t1,
            t_hi: spec.t2,
            form: SegmentForm::ShiftedExponential { alpha: p.alpha, lambda: p.lambda, beta: p.beta },
        },
        Segment { t_lo: spec.t2, t_hi: t3, form: relax },
        Segment { t_lo: t3, t_hi: f64::INFINITY, form: tail },
    ])
}

/// Outcome of one structural condition check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    /// Stable identifier, also used by the command-line report.
    pub name: &'static str,
    pub passed: bool,
    /// True when the segment's closed form guarantees the condition
    /// identically, not just at the sampled points.
    pub closed_form: bool,
    /// Largest violation observed (positive = violated); exact meaning is
    /// condition-specific and described in `detail`.
    pub worst: f64,
    /// Time of the worst sample, if the check sampled anything.
    pub worst_at: Option<f64>,
    pub samples: usize,
    pub detail: String,
}

/// Results of the four structural conditions that make the family's renewal
/// density provably decreasing.  Produced by [`validate_conditions`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// Hazard strictly decreasing on the head segment.
    pub head_hazard_decreasing: ConditionCheck,
    /// Bridge hazard matches the shifted-exponential template
    /// `lambda / (1 - eps e^(lambda t))` derived from its own constants.
    pub bridge_matches_template: ConditionCheck,
    /// Hazard slope at most `r^2 - f(0) r` on the relaxation segment.
    pub relaxation_slope_bound: ConditionCheck,
    /// Tail hazard flat-or-falling and no larger than the head's terminal
    /// hazard.
    pub tail_hazard_dominated: ConditionCheck,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    pub fn checks(&self) -> [&ConditionCheck; 4] {
        [
            &self.head_hazard_decreasing,
            &self.bridge_matches_template,
            &self.relaxation_slope_bound,
            &self.tail_hazard_dominated,
        ]
    }
}

const HAZARD_MATCH_TOL: f64 = 1e-10;
const SLOPE_BOUND_TOL: f64 = 1e-10;

/// Checks the four structural conditions at spacing `grid_step`, using
/// [`DEFAULT_HORIZON`] to truncate unbounded intervals.
///
/// The function is total: laws that lack a bridge segment simply fail the
/// bridge check, and the memoryless law fails the strict-decrease check (its
/// hazard slope is identically zero).
pub fn validate_conditions(dist: &PiecewiseDistribution, grid_step: f64) -> ConditionReport {
    validate_conditions_to(dist, grid_step, DEFAULT_HORIZON)
}

/// [`validate_conditions`] with an explicit truncation horizon.
pub fn validate_conditions_to(
    dist: &PiecewiseDistribution,
    grid_step: f64,
    horizon: f64,
) -> ConditionReport {
    assert!(grid_step.is_finite() && grid_step > 0.0, "grid step must be positive");
    assert!(horizon.is_finite() && horizon > 0.0, "horizon must be positive");
    let segs = dist.segments();
    ConditionReport {
        head_hazard_decreasing: check_head(dist, grid_step, horizon),
        bridge_matches_template: check_bridge(segs.get(1), grid_step),
        relaxation_slope_bound: check_relaxation(dist, grid_step, horizon),
        tail_hazard_dominated: check_tail(dist, grid_step, horizon),
    }
}

/// Sample times `lo, lo + step, ..., hi` (with `hi` included exactly).
fn sample_times(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round().max(1.0) as usize;
    let inner_step = (hi - lo) / n as f64;
    (0..=n).map(|i| if i == n { hi } else { lo + i as f64 * inner_step }).collect()
}

fn check_head(dist: &PiecewiseDistribution, step: f64, horizon: f64) -> ConditionCheck {
    let seg = dist.segments()[0];
    let hi = seg.t_hi.min(horizon);
    let times = sample_times(seg.t_lo, hi, step);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = None;
    for &t in &times {
        // Evaluating the segment's own closed form gives the one-sided limit
        // from inside the segment at both ends.
        let slope = seg.hazard_slope(t);
        if slope > worst {
            worst = slope;
            worst_at = Some(t);
        }
    }
    let closed_form = seg.form == SegmentForm::HalfLogistic;
    ConditionCheck {
        name: "head-hazard-decreasing",
        passed: worst < 0.0,
        closed_form,
        worst,
        worst_at,
        samples: times.len(),
        detail: if worst < 0.0 {
            format!("hazard slope stays below zero (max {:.3e})", worst)
        } else {
            format!(
                "hazard slope reaches {:.3e} at t = {:.6}; strict decrease fails",
                worst,
                worst_at.unwrap_or(f64::NAN)
            )
        },
    }
}

fn check_bridge(seg: Option<&Segment>, step: f64) -> ConditionCheck {
    let name = "bridge-matches-template";
    let Some(seg) = seg else {
        return ConditionCheck {
            name,
            passed: false,
            closed_form: false,
            worst: f64::INFINITY,
            worst_at: None,
            samples: 0,
            detail: "law has no bridge segment".into(),
        };
    };
    let SegmentForm::ShiftedExponential { alpha, lambda, beta } = seg.form else {
        return ConditionCheck {
            name,
            passed: false,
            closed_form: false,
            worst: f64::INFINITY,
            worst_at: None,
            samples: 0,
            detail: "second segment is not a shifted exponential".into(),
        };
    };
    let eps = beta / alpha;
    let times = sample_times(seg.t_lo, seg.t_hi, step);
    let mut worst = 0.0_f64;
    let mut worst_at = None;
    for &t in &times {
        // Independent route to the hazard: density over survival, each from
        // its own closed form, against the template formula.
        let template = lambda / (1.0 - eps * (lambda * t).exp());
        let ratio = seg.density(t) / seg.survival(t);
        let rel = (ratio - template).abs() / template.abs().max(f64::MIN_POSITIVE);
        if rel > worst {
            worst = rel;
            worst_at = Some(t);
        }
    }
    ConditionCheck {
        name,
        passed: worst <= HAZARD_MATCH_TOL,
        closed_form: true,
        worst,
        worst_at,
        samples: times.len(),
        detail: format!(
            "density/survival agrees with lambda/(1 - eps e^(lambda t)) to {:.3e} (relative)",
            worst
        ),
    }
}

fn check_relaxation(dist: &PiecewiseDistribution, step: f64, horizon: f64) -> ConditionCheck {
    let segs = dist.segments();
    let seg = segs[(segs.len() - 1).min(2)];
    let hi = seg.t_hi.min(horizon);
    let f0 = dist.density(0.0);
    let times = sample_times(seg.t_lo, hi, step);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = None;
    for &t in &times {
        let r = seg.hazard(t);
        let excess = seg.hazard_slope(t) - (r * r - f0 * r);
        if excess > worst {
            worst = excess;
            worst_at = Some(t);
        }
    }
    let closed_form = matches!(
        seg.form,
        SegmentForm::DecayingHazard { decay, .. } if f0 <= decay
    ) || matches!(seg.form, SegmentForm::ConstantHazard { rate, .. } if (rate - f0).abs() <= 1e-12);
    ConditionCheck {
        name: "relaxation-slope-bound",
        passed: worst <= SLOPE_BOUND_TOL,
        closed_form,
        worst,
        worst_at,
        samples: times.len(),
        detail: format!("max of hazard' - (hazard^2 - f(0) hazard) is {:.3e}", worst),
    }
}

fn check_tail(dist: &PiecewiseDistribution, step: f64, horizon: f64) -> ConditionCheck {
    let segs = dist.segments();
    let tail = segs[segs.len() - 1];
    let head_end = segs[0].t_hi.min(horizon);
    let head_hazard = segs[0].hazard(head_end);
    let tail_start = tail.t_lo.max(0.0);
    let hi = horizon.max(tail_start + step);
    let times = sample_times(tail_start, hi, step);
    let mut worst_slope = f64::NEG_INFINITY;
    let mut worst_at = None;
    for &t in &times {
        let slope = tail.hazard_slope(t);
        if slope > worst_slope {
            worst_slope = slope;
            worst_at = Some(t);
        }
    }
    let level_excess = tail.hazard(tail_start) - head_hazard;
    let worst = worst_slope.max(level_excess);
    let passed = worst_slope <= SLOPE_BOUND_TOL && level_excess <= SLOPE_BOUND_TOL;
    let closed_form = matches!(tail.form, SegmentForm::ConstantHazard { .. });
    ConditionCheck {
        name: "tail-hazard-dominated",
        passed,
        closed_form,
        worst,
        worst_at,
        samples: times.len(),
        detail: format!(
            "tail hazard slope max {:.3e}; tail level minus head terminal hazard {:.3e}",
            worst_slope, level_excess
        ),
    }
}
