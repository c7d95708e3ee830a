//! Smooth reference laws with known renewal quantities, used to calibrate
//! the grid solvers against closed forms.

use crate::dist::{DistError, Lifetime};

/// Gamma law with shape 2 and unit rate: density `t e^-t`.
///
/// Its renewal quantities are known exactly:
/// density `(1 - e^-2t)/2` and function `t/2 - (1 - e^-2t)/4`,
/// which makes it the standard accuracy yardstick here.  The hazard
/// `t/(1 + t)` rises, so it also exercises the increasing-hazard side.
#[derive(Debug, Clone, Copy, Default)]
pub struct Erlang2;

impl Erlang2 {
    /// Exact renewal density.
    pub fn renewal_density(t: f64) -> f64 {
        0.5 * (1.0 - (-2.0 * t).exp())
    }

    /// Exact renewal function.
    pub fn renewal_function(t: f64) -> f64 {
        0.5 * t - 0.25 * (1.0 - (-2.0 * t).exp())
    }
}

impl Lifetime for Erlang2 {
    fn survival(&self, t: f64) -> f64 {
        (1.0 + t) * (-t).exp()
    }

    fn density(&self, t: f64) -> f64 {
        t * (-t).exp()
    }

    fn hazard(&self, t: f64) -> f64 {
        t / (1.0 + t)
    }

    fn density_slope_left(&self, t: f64) -> f64 {
        (1.0 - t) * (-t).exp()
    }

    fn density_slope_right(&self, t: f64) -> f64 {
        self.density_slope_left(t)
    }

    fn hazard_slope_left(&self, t: f64) -> f64 {
        1.0 / ((1.0 + t) * (1.0 + t))
    }

    fn hazard_slope_right(&self, t: f64) -> f64 {
        self.hazard_slope_left(t)
    }
}

/// Two-component mixture of exponentials (weights `w`, `1 - w`; rates
/// `rate1`, `rate2`).  Its hazard decreases, its survival is log-convex,
/// and the renewal density it induces is log-convex and falling - the
/// classical well-behaved side of the story.
#[derive(Debug, Clone, Copy)]
pub struct HyperExponential2 {
    w: f64,
    rate1: f64,
    rate2: f64,
}

impl HyperExponential2 {
    pub fn new(w: f64, rate1: f64, rate2: f64) -> Result<Self, DistError> {
        if !(w > 0.0 && w < 1.0) {
            return Err(DistError::InvalidParams(format!(
                "mixture weight must lie strictly in (0, 1), got {}",
                w
            )));
        }
        for (name, r) in [("rate1", rate1), ("rate2", rate2)] {
            if !(r.is_finite() && r > 0.0) {
                return Err(DistError::InvalidParams(format!(
                    "{} must be positive and finite, got {}",
                    name, r
                )));
            }
        }
        Ok(HyperExponential2 { w, rate1, rate2 })
    }
}

impl Lifetime for HyperExponential2 {
    fn survival(&self, t: f64) -> f64 {
        self.w * (-self.rate1 * t).exp() + (1.0 - self.w) * (-self.rate2 * t).exp()
    }

    fn density(&self, t: f64) -> f64 {
        self.w * self.rate1 * (-self.rate1 * t).exp()
            + (1.0 - self.w) * self.rate2 * (-self.rate2 * t).exp()
    }

    fn density_slope_left(&self, t: f64) -> f64 {
        -(self.w * self.rate1 * self.rate1 * (-self.rate1 * t).exp()
            + (1.0 - self.w) * self.rate2 * self.rate2 * (-self.rate2 * t).exp())
    }

    fn density_slope_right(&self, t: f64) -> f64 {
        self.density_slope_left(t)
    }

    fn hazard_slope_left(&self, t: f64) -> f64 {
        // r = f / Fbar, so r' = f'/Fbar + r^2.
        let fbar = self.survival(t);
        let r = self.density(t) / fbar;
        self.density_slope_left(t) / fbar + r * r
    }

    fn hazard_slope_right(&self, t: f64) -> f64 {
        self.hazard_slope_left(t)
    }
}
