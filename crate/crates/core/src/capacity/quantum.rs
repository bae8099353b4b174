//! Cost-constrained coherent information and a degradability heuristic.

use super::ascent::{self, ascend, multistart, Restart, Spheres};
use super::{check_beta, Argmax, CostChannel, OptConfig, OptResult};
use crate::entropy::coherent_information;
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::linalg::{self, Mat, C64};
use crate::qcore::{DensityMatrix, QuantumChannel};

/// Pulls `φ` towards the ground state of `G` just far enough to meet the
/// budget, so every parameter point maps to a feasible input.
fn feasible(phi: Mat, ground: &Mat, g: &Mat, lowest: f64, beta: f64) -> Mat {
    let cost = linalg::trace_prod_re(g, &phi);
    if cost <= beta + 1e-12 || cost - lowest <= 1e-12 {
        return phi;
    }
    let t = (cost - beta) / (cost - lowest);
    phi * C64::new(1.0 - t, 0.0) + ground * C64::new(t, 0.0)
}

/// `Q(N, β) = sup { I(R⟩B)_φ : tr[Gφ] ≤ β }`, clamped at 0. Single-letter,
/// so exact only for degradable channels.
pub fn quantum_capacity_cost(cc: &CostChannel, beta: f64, cfg: &OptConfig) -> Result<OptResult> {
    check_beta(beta)?;
    let lowest = cc.g.min_eigenvalue();
    if beta < lowest - 1e-12 {
        return Err(Error::param(
            "beta",
            format!("{beta} is below the smallest cost {lowest}"),
        ));
    }
    let d = cc.channel.dim_in();
    let ground = cc.g.ground_state().density().into_mat();
    let point = |x: &[f64]| feasible(ascent::to_density(x, d), &ground, cc.g.mat(), lowest, beta);
    let f = |x: &[f64]| {
        coherent_information(&DensityMatrix::from_trusted(point(x)), &cc.channel)
            .unwrap_or(f64::NAN)
    };
    let block = 2 * d * d;
    let spheres = Spheres {
        block,
        h: cfg.fd_step,
    };
    let (best, outcomes) = multistart(cfg, |_, rng| {
        let out = ascend(&f, spheres, ascent::random_point(rng, block), cfg);
        Restart {
            value: out.value,
            converged: out.converged,
            payload: out.x,
        }
    });
    let o = &outcomes[best];
    let phi = DensityMatrix::from_trusted(point(&o.payload));
    let value = coherent_information(&phi, &cc.channel)?;
    let mut diagnostics = Vec::new();
    if !o.converged {
        diagnostics.push("best restart hit the iteration limit".into());
    }
    Ok(OptResult {
        value: ExtendedReal::Finite(value.max(0.0)),
        argmax: Argmax::Density(phi),
        restarts: cfg.restarts,
        converged: o.converged,
        diagnostics,
    })
}

/// How far `N` is from degradable: the least-squares fit residual of a
/// linear map `D` with `D∘N = N^c`, plus the negativity of `D`'s Choi
/// matrix. Near zero suggests degradable; it does not prove it.
pub fn degradability_residual(channel: &QuantumChannel) -> f64 {
    let comp = channel.complementary();
    let (tn, tc) = (channel.transfer_matrix(), comp.transfer_matrix());
    let Ok(pinv) = tn.clone().pseudo_inverse(1e-12) else {
        return f64::INFINITY;
    };
    let td = &tc * pinv;
    let fit = (&td * &tn - &tc).norm();
    let (dout, de) = (channel.dim_out(), comp.dim_out());
    let choi = Mat::from_fn(dout * de, dout * de, |r, c| {
        let (i, a) = (r / de, r % de);
        let (j, b) = (c / de, c % de);
        td[(a * de + b, i * dout + j)]
    });
    let lowest = linalg::eigvalsh(&linalg::hermitian_part(&choi))
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    fit + (-lowest).max(0.0)
}
