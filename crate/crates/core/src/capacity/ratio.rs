//! Capacities per unit cost as suprema of ratio objectives.

use std::sync::atomic::{AtomicBool, Ordering};

use super::ascent::{self, ascend, multistart, Restart, Spheres};
use super::quantum::degradability_residual;
use super::{holevo_capacity_cost, Argmax, CostChannel, OptConfig, OptResult};
use crate::entropy::{ea_relative_entropy, mutual_information_ea, PrivateBaseline, Support};
use crate::error::Result;
use crate::ext::ExtendedReal;
use crate::linalg;
use crate::qcore::{DensityMatrix, PureState};

/// Cost below which a ratio is not evaluated, to keep `ψ → ψ⁰` from
/// producing `0/0`.
const COST_FLOOR: f64 = 1e-12;

struct Search {
    value: f64,
    x: Vec<f64>,
    converged: bool,
}

fn search(cfg: &OptConfig, block: usize, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> Search {
    let spheres = Spheres {
        block,
        h: cfg.fd_step,
    };
    let (best, outcomes) = multistart(cfg, |_, rng| {
        let out = ascend(f, spheres, ascent::random_point(rng, block), cfg);
        Restart {
            value: out.value,
            converged: out.converged,
            payload: out.x,
        }
    });
    let o = &outcomes[best];
    Search {
        value: o.value,
        x: o.payload.clone(),
        converged: o.converged,
    }
}

/// Applies the divergence policy: `+∞` is kept, and values above the cap
/// that were still rising when the iteration budget ran out become `+∞`.
fn settle(s: &Search, cfg: &OptConfig, diagnostics: &mut Vec<String>) -> ExtendedReal {
    if s.value == f64::INFINITY {
        diagnostics.push(
            "objective is infinite: output leaves the support of the zero-cost output".into(),
        );
        ExtendedReal::Infinity
    } else if s.value > cfg.divergence_cap && !s.converged {
        diagnostics.push(format!(
            "ratio exceeded the divergence cap {} while still rising",
            cfg.divergence_cap
        ));
        ExtendedReal::Infinity
    } else {
        if !s.converged {
            diagnostics.push("best restart hit the iteration limit".into());
        }
        ExtendedReal::Finite(s.value.max(0.0))
    }
}

fn pure_of(x: &[f64]) -> Result<PureState> {
    PureState::normalized(ascent::to_vect(x))
}

/// Classical capacity per unit cost.
///
/// With a zero-cost state this is `sup_ψ D(N(ψ)‖N(ψ⁰)) / ⟨ψ|G|ψ⟩`; without
/// one, the best of `χ(β)/β` over `β = λ_max(G)·2^{−k}`, `k = 0..=12`.
pub fn classical_per_unit_cost(cc: &CostChannel, cfg: &OptConfig) -> Result<OptResult> {
    let Some(zero) = &cc.zero_cost_state else {
        return by_budget_grid(cc, cfg);
    };
    let baseline = Support::of(&cc.channel.apply_mat(zero.density().mat()));
    let f = |x: &[f64]| {
        let v = ascent::to_vect(x);
        let cost = cc.g.expectation_vec(&v);
        if cost < COST_FLOOR {
            return f64::NEG_INFINITY;
        }
        baseline
            .relative_entropy(&cc.channel.apply_mat(&linalg::outer(&v)))
            .to_f64()
            / cost
    };
    let s = search(cfg, 2 * cc.channel.dim_in(), &f);
    let mut diagnostics = Vec::new();
    let value = settle(&s, cfg, &mut diagnostics);
    Ok(OptResult {
        value,
        argmax: Argmax::Pure(pure_of(&s.x)?),
        restarts: cfg.restarts,
        converged: s.converged,
        diagnostics,
    })
}

fn by_budget_grid(cc: &CostChannel, cfg: &OptConfig) -> Result<OptResult> {
    let top = cc.g.max_eigenvalue();
    let lowest = cc.g.min_eigenvalue();
    let mut best: Option<(f64, OptResult)> = None;
    for k in 0..=12 {
        let beta = top * 2f64.powi(-k);
        if beta < lowest || beta <= 0.0 {
            break;
        }
        let r = holevo_capacity_cost(cc, beta, cfg)?;
        let ratio = r.value.to_f64() / beta;
        if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
            best = Some((ratio, r));
        }
    }
    let Some((ratio, r)) = best else {
        return Ok(OptResult {
            value: ExtendedReal::Finite(0.0),
            argmax: Argmax::None,
            restarts: cfg.restarts,
            converged: true,
            diagnostics: vec!["cost observable is zero".into()],
        });
    };
    Ok(OptResult {
        value: ExtendedReal::Finite(ratio),
        diagnostics: vec!["no zero-cost state: best of chi(beta)/beta on a budget grid".into()],
        ..r
    })
}

/// Entanglement-assisted capacity per unit cost, maximized over input
/// density matrices `φ` and clamped at 0.
///
/// With a zero-cost state the objective is
/// `D(φ_RB ‖ φ_R ⊗ N(ψ⁰)) / tr[Gφ]`; without one it is `I(A;B)_φ / tr[Gφ]`.
pub fn ea_per_unit_cost(cc: &CostChannel, cfg: &OptConfig) -> Result<OptResult> {
    let d = cc.channel.dim_in();
    let f = |x: &[f64]| {
        let phi = DensityMatrix::from_trusted(ascent::to_density(x, d));
        let cost = cc.g.expectation(&phi);
        if cost < COST_FLOOR {
            return f64::NEG_INFINITY;
        }
        let num = match &cc.zero_cost_state {
            Some(z) => ea_relative_entropy(&phi, &cc.channel, z).map(|v| v.to_f64()),
            None => mutual_information_ea(&phi, &cc.channel),
        };
        num.map_or(f64::NAN, |n| n / cost)
    };
    let s = search(cfg, 2 * d * d, &f);
    let mut diagnostics = Vec::new();
    if cc.zero_cost_state.is_none() {
        diagnostics.push("no zero-cost state: maximized I(A;B)/cost directly".into());
    }
    let value = settle(&s, cfg, &mut diagnostics);
    let argmax = Argmax::Density(DensityMatrix::from_trusted(ascent::to_density(&s.x, d)));
    Ok(OptResult {
        value,
        argmax,
        restarts: cfg.restarts,
        converged: s.converged,
        diagnostics,
    })
}

/// Private capacity per unit cost `sup_ψ max(N_N(ψ,ψ⁰), 0) / ⟨ψ|G|ψ⟩`,
/// exact for degradable channels and an achievable rate otherwise.
pub fn private_per_unit_cost(cc: &CostChannel, cfg: &OptConfig) -> Result<OptResult> {
    let zero = cc.zero("private capacity per unit cost")?;
    let baseline = PrivateBaseline::new(zero.density().mat(), &cc.channel);
    let indeterminate = AtomicBool::new(false);
    let f = |x: &[f64]| {
        let v = ascent::to_vect(x);
        let cost = cc.g.expectation_vec(&v);
        if cost < COST_FLOOR {
            return f64::NEG_INFINITY;
        }
        match baseline.term(&linalg::outer(&v)) {
            Ok(t) => t.value.to_f64() / cost,
            Err(_) => {
                indeterminate.store(true, Ordering::Relaxed);
                f64::NAN
            }
        }
    };
    let s = search(cfg, 2 * cc.channel.dim_in(), &f);
    let mut diagnostics = Vec::new();
    if indeterminate.load(Ordering::Relaxed) {
        diagnostics.push(
            "N_N was indeterminate (both terms infinite with equal weight) at some probes".into(),
        );
    }
    let residual = degradability_residual(&cc.channel);
    if residual > 1e-6 {
        diagnostics.push(format!(
            "no degrading map found (fit residual {residual:.3e}); the value is an achievable rate and may be a strict lower bound"
        ));
    }
    let value = settle(&s, cfg, &mut diagnostics);
    Ok(OptResult {
        value,
        argmax: Argmax::Pure(pure_of(&s.x)?),
        restarts: cfg.restarts,
        converged: s.converged,
        diagnostics,
    })
}

/// Quantum capacity per unit cost, equal to the private one for degradable
/// channels.
pub fn quantum_per_unit_cost(cc: &CostChannel, cfg: &OptConfig) -> Result<OptResult> {
    private_per_unit_cost(cc, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{kl_divergence, private_information_term};
    use crate::qcore::{CostObservable, QuantumChannel};

    fn quick() -> OptConfig {
        OptConfig {
            restarts: 6,
            ..OptConfig::default()
        }
    }

    fn excited() -> CostObservable {
        CostObservable::projector(2, 1)
    }

    fn state_prep() -> CostChannel {
        let ch = QuantumChannel::state_preparation(
            &DensityMatrix::from_diag(&[0.8, 0.2]).unwrap(),
            &DensityMatrix::from_diag(&[0.3, 0.7]).unwrap(),
        )
        .unwrap();
        CostChannel::new(ch, excited(), Some(PureState::basis(2, 0))).unwrap()
    }

    #[test]
    fn state_preparation_reaches_classical_divergence() {
        let want = kl_divergence(&[0.3, 0.7], &[0.8, 0.2]).to_f64();
        let r = classical_per_unit_cost(&state_prep(), &quick()).unwrap();
        assert!(
            (r.value.to_f64() - want).abs() < 1e-6,
            "{:?} vs {want}",
            r.value
        );
        let Argmax::Pure(psi) = r.argmax else {
            panic!()
        };
        assert!(psi.fidelity(&PureState::basis(2, 1)) > 1.0 - 1e-4);
    }

    #[test]
    fn ea_matches_classical_on_state_preparation() {
        let want = kl_divergence(&[0.3, 0.7], &[0.8, 0.2]).to_f64();
        let r = ea_per_unit_cost(&state_prep(), &quick()).unwrap();
        assert!((r.value.to_f64() - want).abs() < 1e-5, "{:?}", r.value);
    }

    #[test]
    fn amplitude_damping_diverges() {
        let ch = QuantumChannel::amplitude_damping(0.25).unwrap();
        let cc = CostChannel::new(ch, excited(), Some(PureState::basis(2, 0))).unwrap();
        assert_eq!(
            classical_per_unit_cost(&cc, &quick()).unwrap().value,
            ExtendedReal::Infinity
        );
        assert_eq!(
            ea_per_unit_cost(&cc, &quick()).unwrap().value,
            ExtendedReal::Infinity
        );
    }

    #[test]
    fn constant_channel_carries_nothing() {
        let sigma = DensityMatrix::from_diag(&[0.6, 0.4]).unwrap();
        let ch = QuantumChannel::constant(&sigma, 2).unwrap();
        let cc = CostChannel::new(ch, excited(), Some(PureState::basis(2, 0))).unwrap();
        assert!(
            ea_per_unit_cost(&cc, &quick())
                .unwrap()
                .value
                .to_f64()
                .abs()
                < 1e-9
        );
    }

    #[test]
    fn identity_private_rate_is_infinite() {
        let cc = CostChannel::new(
            QuantumChannel::identity(2),
            excited(),
            Some(PureState::basis(2, 0)),
        )
        .unwrap();
        assert_eq!(
            private_per_unit_cost(&cc, &quick()).unwrap().value,
            ExtendedReal::Infinity
        );
    }

    #[test]
    fn antidegradable_private_rate_is_zero() {
        let ch = QuantumChannel::amplitude_damping(0.75).unwrap();
        let cc = CostChannel::new(ch, excited(), Some(PureState::basis(2, 0))).unwrap();
        assert_eq!(
            private_per_unit_cost(&cc, &quick()).unwrap().value,
            ExtendedReal::Finite(0.0)
        );
    }

    #[test]
    fn dephasing_private_rate_matches_grid() {
        let p = 0.2;
        let ch = QuantumChannel::dephasing(p).unwrap();
        let minus = PureState::from_real(&[1.0, -1.0]).unwrap();
        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        let g = CostObservable::new(minus.density().into_mat()).unwrap();
        let cc = CostChannel::new(ch.clone(), g.clone(), Some(plus.clone())).unwrap();
        let got = private_per_unit_cost(&cc, &quick()).unwrap().value.to_f64();
        let mut want: f64 = 0.0;
        for i in 1..=2000 {
            let theta = std::f64::consts::PI * i as f64 / 2000.0;
            let psi = PureState::from_real(&[(theta / 2.0).cos(), (theta / 2.0).sin()]).unwrap();
            let cost = g.expectation_pure(&psi);
            if cost > 1e-9 {
                let n = private_information_term(&psi, &plus, &ch).unwrap().to_f64();
                want = want.max(n / cost);
            }
        }
        assert!(want > 0.0);
        assert!((got - want).abs() < 1e-4, "{got} vs {want}");
    }
}
