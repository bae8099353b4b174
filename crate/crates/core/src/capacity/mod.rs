//! Capacity-cost functions and capacities per unit cost of
//! finite-dimensional channels.
//!
//! All optimizers are best-of-restarts local ascents; nothing here certifies
//! global optimality.

mod ascent;
mod blocklength;
mod holevo;
mod quantum;
mod ratio;

pub use blocklength::{
    binary_channel, binary_channel_per_unit_cost, blocklength_constrained_per_unit_cost,
};
pub use holevo::{holevo_capacity_cost, holevo_capacity_curve, zero_cost_limit, ZeroCostLimit};
pub use quantum::{degradability_residual, quantum_capacity_cost};
pub use ratio::{
    classical_per_unit_cost, ea_per_unit_cost, private_per_unit_cost, quantum_per_unit_cost,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::par::Exec;
use crate::qcore::{CostObservable, DensityMatrix, Ensemble, PureState, QuantumChannel};

#[derive(Clone, Debug, PartialEq)]
pub struct OptConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Finite-difference step for gradients.
    pub fd_step: f64,
    /// Stop when the relative change over `patience` iterations is below this.
    pub rel_tol: f64,
    pub patience: usize,
    pub max_iter: usize,
    /// Per-unit-cost values above this that are still rising count as `+∞`.
    pub divergence_cap: f64,
    pub exec: Exec,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            restarts: 32,
            seed: 0,
            fd_step: 1e-5,
            rel_tol: 1e-9,
            patience: 20,
            max_iter: 5000,
            divergence_cap: 1e3,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "state", rename_all = "snake_case")]
pub enum Argmax {
    Ensemble(Ensemble),
    Pure(PureState),
    Density(DensityMatrix),
    /// Nothing attains the value (e.g. a supremum approached only in a limit).
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptResult {
    pub value: ExtendedReal,
    pub argmax: Argmax,
    pub restarts: usize,
    pub converged: bool,
    pub diagnostics: Vec<String>,
}

/// Channel together with its cost observable and optional zero-cost state.
#[derive(Clone, Debug, PartialEq)]
pub struct CostChannel {
    pub channel: QuantumChannel,
    pub g: CostObservable,
    pub zero_cost_state: Option<PureState>,
}

impl CostChannel {
    pub fn new(
        channel: QuantumChannel,
        g: CostObservable,
        zero_cost_state: Option<PureState>,
    ) -> Result<Self> {
        if g.dim() != channel.dim_in() {
            return Err(Error::DimensionMismatch(format!(
                "cost observable has dimension {}, channel input is {}",
                g.dim(),
                channel.dim_in()
            )));
        }
        if let Some(z) = &zero_cost_state {
            if z.dim() != channel.dim_in() {
                return Err(Error::DimensionMismatch(
                    "zero-cost state does not match the channel input".into(),
                ));
            }
            let c = g.expectation_pure(z);
            if c > 1e-10 {
                return Err(Error::NotZeroCost(c));
            }
        }
        Ok(CostChannel {
            channel,
            g,
            zero_cost_state,
        })
    }

    pub(crate) fn zero(&self, what: &'static str) -> Result<&PureState> {
        self.zero_cost_state
            .as_ref()
            .ok_or(Error::MissingZeroCostState(what))
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::param(
            "beta",
            format!("{beta} must be positive and finite"),
        ))
    }
}
