//! Analytic stand-in for a network's validation loss.
//!
//! ```text
//! f = ((n - 55) / 45)^2 + 0.05 sin^2(pi (n - 55) / 10)
//!   + u^2 + 0.05 sin^2(2 pi u),          u = log10(lr / 0.1)
//!   + ((b - 600) / 400)^2
//!   + ((e - 50) / 48)^2
//!   + penalty[activation]
//! ```
//!
//! Every term is non-negative and vanishes only at neurons 55, learning rate
//! 0.1, batch 600, epochs 50 and tanh, so that point is the unique global
//! minimum with value 0. The sine ripples add local minima along the neuron
//! and learning-rate axes.

use crate::space::{Activation, TrialParams};
use std::f64::consts::PI;

pub const OPTIMUM: TrialParams =
    TrialParams { neurons: 55, learning_rate: 0.1, batch_size: 600, epochs: 50, activation: Activation::Tanh };

/// Penalty per activation, in gene order.
pub const ACTIVATION_PENALTY: [f64; 10] = [0.30, 0.55, 0.35, 0.40, 0.0, 0.20, 0.25, 0.90, 0.28, 0.32];

pub fn surrogate_objective(p: &TrialParams) -> f64 {
    let n = f64::from(p.neurons) - 55.0;
    let u = (p.learning_rate / 0.1).log10();
    let b = (f64::from(p.batch_size) - 600.0) / 400.0;
    let e = (f64::from(p.epochs) - 50.0) / 48.0;
    let ripple = |t: f64| 0.05 * t.sin().powi(2);
    (n / 45.0).powi(2)
        + ripple(PI * n / 10.0)
        + u * u
        + ripple(2.0 * PI * u)
        + b * b
        + e * e
        + ACTIVATION_PENALTY[p.activation.index()]
}
