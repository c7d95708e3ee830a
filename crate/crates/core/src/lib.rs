//! Numerics for renewal processes whose inter-renewal law is pieced together
//! from closed-form segments.
//!
//! The crate revolves around one construction: a four-segment lifetime law
//! whose hazard rate dips, climbs back, relaxes, and flattens - yet whose
//! renewal density still decreases everywhere, so the renewal function is
//! concave.  Around it sit the tools needed to check such claims at desk
//! scale:
//!
//! * [`dist`]: the segment catalog, the four-segment family and its derived
//!   constants, and structural condition checks;
//! * [`engine`]: trapezoidal Volterra solvers for the renewal density, its
//!   cumulative integral, and its one-sided slope, plus residuals of two
//!   identities that vanish for exact solutions;
//! * [`mc`]: seeded, stream-per-path Monte Carlo estimation of the renewal
//!   function through exact inverse-survival sampling;
//! * [`compound`]: the lattice analogue - geometric compounding, an exact
//!   survival identity, and hazard-shape scans;
//! * [`reference`]: smooth laws with known renewal quantities for
//!   calibration;
//! * [`grid`]: the sampled-function container shared by all of the above.

pub mod compound;
pub mod dist;
pub mod engine;
pub mod grid;
pub mod mc;
pub mod reference;

pub use dist::{
    build_counterexample, derive_family_params, validate_conditions, CounterexampleSpec,
    FamilyParams, Lifetime, PiecewiseDistribution,
};
pub use engine::{solve, RenewalSolution};
pub use grid::GridFunction;
