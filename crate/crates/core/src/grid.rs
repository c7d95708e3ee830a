//! Functions sampled on a uniform time grid.
//!
//! The solvers in this crate produce values on the grid `0, h, 2h, ..., n*h`.
//! Some of those functions (density slopes, most notably) jump at a handful of
//! marked points; `GridFunction` stores the left-limit value in the main array
//! and keeps the right limit in a side table so both one-sided values survive.

use std::collections::BTreeMap;

/// A real-valued function sampled on the uniform grid `i * step` for
/// `i = 0..=n`, with optional distinct right-limit values at marked indices.
///
/// `value(i)` is the stored (left-limit) sample; `value_right(i)` falls back
/// to the stored sample when no jump is marked at `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    step: f64,
    values: Vec<f64>,
    right_values: BTreeMap<usize, f64>,
}

impl GridFunction {
    /// Wraps samples taken on the grid `0, step, ..., (values.len()-1)*step`.
    ///
    /// Panics if `step` is not a positive finite number or `values` is empty;
    /// both indicate a programming error, not a data condition.
    pub fn new(step: f64, values: Vec<f64>) -> Self {
        assert!(step.is_finite() && step > 0.0, "grid step must be positive");
        assert!(!values.is_empty(), "a grid function needs at least one sample");
        GridFunction { step, values, right_values: BTreeMap::new() }
    }

    pub(crate) fn set_right_value(&mut self, index: usize, value: f64) {
        assert!(index < self.values.len(), "right value index out of range");
        self.right_values.insert(index, value);
    }

    /// Grid spacing.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of samples (grid points), always at least 1.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Time coordinate of sample `i`.
    pub fn time(&self, index: usize) -> f64 {
        index as f64 * self.step
    }

    /// Time coordinate of the last sample.
    pub fn last_time(&self) -> f64 {
        self.time(self.values.len() - 1)
    }

    /// Stored sample at index `i` (the left limit where a jump is marked).
    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Right limit at index `i`; equals `value(i)` unless a jump is marked.
    pub fn value_right(&self, index: usize) -> f64 {
        self.right_values.get(&index).copied().unwrap_or(self.values[index])
    }

    /// Whether a distinct right-limit value is recorded at index `i`.
    pub fn has_jump(&self, index: usize) -> bool {
        self.right_values.contains_key(&index)
    }

    /// All stored (left-limit) samples.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Indices carrying a distinct right-limit value, in increasing order.
    pub fn jump_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.right_values.keys().copied()
    }

    /// Linear interpolation at an arbitrary time inside the grid range.
    /// Returns `None` outside `[0, last_time()]`.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        if !t.is_finite() || t < 0.0 || t > self.last_time() {
            return None;
        }
        if self.values.len() == 1 {
            return Some(self.values[0]);
        }
        let x = t / self.step;
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let w = x - i as f64;
        Some(self.values[i] * (1.0 - w) + self.values[i + 1] * w)
    }

    /// Largest absolute value over all samples, counting both one-sided
    /// values at marked jumps.
    pub fn sup_norm(&self) -> f64 {
        let left = self.values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        self.right_values.values().fold(left, |a, v| a.max(v.abs()))
    }

    /// Largest (signed) sample, counting both one-sided values at jumps.
    pub fn max_value(&self) -> f64 {
        let left = self.values.iter().fold(f64::NEG_INFINITY, |a, v| a.max(*v));
        self.right_values.values().fold(left, |a, v| a.max(*v))
    }

    /// Iterates `(time, stored value)` pairs in grid order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (self.time(i), *v))
    }
}
