//! Blocklength-constrained capacity per unit cost and the binary toy channel.

use super::{holevo_capacity_cost, CostChannel, OptConfig};
use crate::entropy::binary_entropy;
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::qcore::{CostObservable, PureState, QuantumChannel};

const GRID_POINTS: usize = 24;

/// `C(N, α) = sup_{β ≥ 1/α} χ(β)/β`, the best rate per unit cost when the
/// blocklength may not exceed `α` times the cost. With a zero-cost state the
/// supremum sits at `β = 1/α`, giving `α·χ(1/α)`.
pub fn blocklength_constrained_per_unit_cost(
    cc: &CostChannel,
    alpha: f64,
    cfg: &OptConfig,
) -> Result<ExtendedReal> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(
            "alpha",
            format!("{alpha} must be positive and finite"),
        ));
    }
    let lo = 1.0 / alpha;
    if cc.zero_cost_state.is_some() {
        return Ok(holevo_capacity_cost(cc, lo, cfg)?.value.scale_pos(alpha));
    }
    let hi = cc.g.max_eigenvalue().max(lo);
    let mut best = ExtendedReal::Finite(0.0);
    for i in 0..GRID_POINTS {
        let beta = if hi > lo {
            lo * (hi / lo).powf(i as f64 / (GRID_POINTS - 1) as f64)
        } else {
            lo
        };
        if beta < cc.g.min_eigenvalue() {
            continue;
        }
        let r = holevo_capacity_cost(cc, beta, cfg)?.value.div_pos(beta);
        if r > best {
            best = r;
        }
        if hi <= lo {
            break;
        }
    }
    Ok(best)
}

fn check_binary(eps: f64, delta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::param("epsilon", format!("{eps} is outside [0, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", format!("{delta} is outside (0, 1)")));
    }
    Ok(())
}

/// Binary channel `B_{ε,δ}`: the free symbol 0 flips with probability `δ`,
/// the unit-cost symbol 1 with probability `ε`.
pub fn binary_channel(eps: f64, delta: f64) -> Result<CostChannel> {
    check_binary(eps, delta)?;
    let ch = QuantumChannel::classical(&[vec![1.0 - delta, delta], vec![eps, 1.0 - eps]])?;
    CostChannel::new(
        ch,
        CostObservable::from_diag(&[0.0, 1.0])?,
        Some(PureState::basis(2, 0)),
    )
}

/// `D(Bern(1−ε) ‖ Bern(δ)) = −(1−ε)log₂δ − ε log₂(1−δ) − h(ε)`.
pub fn binary_channel_per_unit_cost(eps: f64, delta: f64) -> Result<f64> {
    check_binary(eps, delta)?;
    let tail = if eps > 0.0 {
        eps * (1.0 - delta).log2()
    } else {
        0.0
    };
    Ok(-(1.0 - eps) * delta.log2() - tail - binary_entropy(eps))
}
