//! Cost-constrained Holevo information.
//!
//! Alternates a cost-constrained Blahut–Arimoto update of the weights with a
//! gradient step on the signal states, over ensembles of `d²` pure states.

use serde::Serialize;

use super::ascent::{self, multistart, plateaued, Restart, Spheres, Step};
use super::{check_beta, Argmax, CostChannel, OptConfig, OptResult};
use crate::entropy::{entropy_mat, holevo_information};
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::linalg::{self, Mat};
use crate::qcore::{DensityMatrix, Ensemble, PureState};

struct Problem<'a> {
    cc: &'a CostChannel,
    d: usize,
    k: usize,
    beta: f64,
}

struct Outputs {
    omegas: Vec<Mat>,
    entropies: Vec<f64>,
    costs: Vec<f64>,
}

impl Problem<'_> {
    fn spheres(&self, h: f64) -> Spheres {
        Spheres {
            block: 2 * self.d,
            h,
        }
    }

    fn outputs(&self, x: &[f64]) -> Outputs {
        let mut out = Outputs {
            omegas: Vec::new(),
            entropies: Vec::new(),
            costs: Vec::new(),
        };
        for chunk in x.chunks(2 * self.d) {
            let v = ascent::to_vect(chunk);
            let omega = self.cc.channel.apply_mat(&linalg::outer(&v));
            out.entropies.push(entropy_mat(&omega));
            out.omegas.push(omega);
            out.costs.push(self.cc.g.expectation_vec(&v));
        }
        out
    }

    fn average(out: &Outputs, p: &[f64]) -> Mat {
        let mut avg = Mat::zeros(out.omegas[0].nrows(), out.omegas[0].ncols());
        for (w, o) in p.iter().zip(&out.omegas) {
            avg += o * linalg::C64::new(*w, 0.0);
        }
        avg
    }

    fn mutual(out: &Outputs, p: &[f64]) -> f64 {
        entropy_mat(&Self::average(out, p))
            - p.iter()
                .zip(&out.entropies)
                .map(|(w, s)| w * s)
                .sum::<f64>()
    }

    /// `D(ω_k‖ω̄)` with the logarithm floored so that every entry is finite.
    fn divergences(out: &Outputs, p: &[f64]) -> Vec<f64> {
        let log_avg = Self::log_average(out, p);
        out.omegas
            .iter()
            .zip(&out.entropies)
            .map(|(o, s)| -s - linalg::trace_prod_re(o, &log_avg))
            .collect()
    }

    /// Weight update `p_k ∝ p_k 2^{D_k − s c_k}` with the smallest `s ≥ 0`
    /// meeting the cost budget.
    fn reweight(&self, p: &[f64], div: &[f64], costs: &[f64], mu: f64) -> (Vec<f64>, f64) {
        let logw: Vec<f64> = p
            .iter()
            .zip(div)
            .map(|(pk, dk)| pk.ln() + mu * dk * std::f64::consts::LN_2)
            .collect();
        let weights = |s: f64| -> Vec<f64> {
            let e: Vec<f64> = logw
                .iter()
                .zip(costs)
                .map(|(l, c)| l - s * c * std::f64::consts::LN_2)
                .collect();
            let m = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = e.iter().map(|v| (v - m).exp()).collect();
            let z: f64 = w.iter().sum();
            w.into_iter().map(|v| (v / z).max(1e-300)).collect()
        };
        let spend = |w: &[f64]| w.iter().zip(costs).map(|(a, b)| a * b).sum::<f64>();
        let w0 = weights(0.0);
        if spend(&w0) <= self.beta + 1e-12 {
            return (w0, 0.0);
        }
        let mut hi = 1.0;
        while spend(&weights(hi)) > self.beta && hi < 1e12 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if spend(&weights(mid)) > self.beta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (weights(hi), hi)
    }

    fn log_average(out: &Outputs, p: &[f64]) -> Mat {
        linalg::eigh(&Self::average(out, p)).map(|v| v.max(1e-300).log2())
    }

    /// One ascent step per signal state on `D(N(ψ)‖ω̄) − s⟨ψ|G|ψ⟩` with the
    /// average `ω̄` frozen: the Lagrangian gradient rescaled by `1/p_k`, so
    /// rarely used states still move at a useful rate. States are visited in
    /// turn and a move is kept only if the Lagrangian itself does not drop.
    fn move_states(&self, x: &mut [f64], p: &[f64], s: f64, taus: &mut [f64], spheres: Spheres) {
        let b = 2 * self.d;
        let mut out = self.outputs(x);
        let mut avg = Self::average(&out, p);
        let mut s_avg = entropy_mat(&avg);
        for (k, tau) in taus.iter_mut().enumerate() {
            let log_avg = linalg::eigh(&avg).map(|v| v.max(1e-300).log2());
            let g = |y: &[f64]| {
                let v = ascent::to_vect(y);
                let omega = self.cc.channel.apply_mat(&linalg::outer(&v));
                -entropy_mat(&omega)
                    - linalg::trace_prod_re(&omega, &log_avg)
                    - s * self.cc.g.expectation_vec(&v)
            };
            let mut block = x[k * b..(k + 1) * b].to_vec();
            let mut fx = g(&block);
            if !matches!(spheres.step(&g, &mut block, &mut fx, tau), Step::Improved) {
                continue;
            }
            let v = ascent::to_vect(&block);
            let omega = self.cc.channel.apply_mat(&linalg::outer(&v));
            let (ent, cost) = (entropy_mat(&omega), self.cc.g.expectation_vec(&v));
            let new_avg = &avg + (&omega - &out.omegas[k]) * linalg::C64::new(p[k], 0.0);
            let new_s_avg = entropy_mat(&new_avg);
            let gain = new_s_avg
                - s_avg
                - p[k] * (ent - out.entropies[k])
                - s * p[k] * (cost - out.costs[k]);
            if gain >= 0.0 {
                x[k * b..(k + 1) * b].copy_from_slice(&block);
                (out.omegas[k], out.entropies[k], out.costs[k]) = (omega, ent, cost);
                avg = new_avg;
                s_avg = new_s_avg;
            } else {
                *tau *= 0.25;
            }
        }
    }

    /// Reweight with the exponent scaled by `mu`, which doubles after each
    /// step that raises the information and falls back toward the plain
    /// update otherwise. Nearly useless channels need thousands of plain
    /// steps.
    fn accelerated_reweight(
        &self,
        out: &Outputs,
        p: &[f64],
        div: &[f64],
        mu: &mut f64,
    ) -> (Vec<f64>, f64) {
        let spend: f64 = p.iter().zip(&out.costs).map(|(a, b)| a * b).sum();
        let before = (spend <= self.beta + 1e-12).then(|| Self::mutual(out, p));
        loop {
            let (np, s) = self.reweight(p, div, &out.costs, *mu);
            let improved = before.is_none_or(|b| Self::mutual(out, &np) >= b);
            if improved || *mu <= 1.0 {
                *mu = if improved { (*mu * 2.0).min(1e6) } else { 1.0 };
                return (np, s);
            }
            *mu = (*mu * 0.25).max(1.0);
        }
    }

    fn run(&self, x0: Vec<f64>, cfg: &OptConfig) -> Restart<(Vec<f64>, Vec<f64>)> {
        let spheres = self.spheres(cfg.fd_step);
        let mut x = x0;
        spheres.normalize(&mut x);
        let mut p = vec![1.0 / self.k as f64; self.k];
        let mut taus = vec![0.1; self.k];
        let mut mu = 1.0;
        let mut history = Vec::new();
        let mut converged = false;
        for _ in 0..cfg.max_iter {
            let out = self.outputs(&x);
            let div = Self::divergences(&out, &p);
            let (np, s) = self.accelerated_reweight(&out, &p, &div, &mut mu);
            p = np;
            history.push(Self::mutual(&out, &p));
            if plateaued(&history, cfg) {
                converged = true;
                break;
            }
            let before = x.clone();
            self.move_states(&mut x, &p, s, &mut taus, spheres);
            let min_cost = self
                .outputs(&x)
                .costs
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if min_cost > self.beta {
                x = before;
            }
        }
        if !converged {
            // The budget must hold at the returned point.
            let out = self.outputs(&x);
            let div = Self::divergences(&out, &p);
            p = self.reweight(&p, &div, &out.costs, 1.0).0;
        }
        let value = Self::mutual(&self.outputs(&x), &p);
        Restart {
            value,
            converged,
            payload: (x, p),
        }
    }

    /// Drops negligible weights, whose outputs may fall outside the support
    /// of the average.
    fn ensemble(&self, x: &[f64], p: &[f64]) -> Result<Ensemble> {
        let kept: f64 = p.iter().filter(|&&w| w > 1e-15).sum();
        let entries = x
            .chunks(2 * self.d)
            .zip(p)
            .filter(|(_, &w)| w > 1e-15)
            .map(|(c, w)| {
                Ok((
                    w / kept,
                    PureState::normalized(ascent::to_vect(c))?.density(),
                ))
            })
            .collect::<Result<Vec<(f64, DensityMatrix)>>>()?;
        Ensemble::new(entries)
    }
}

/// `χ(N, β)`: the largest Holevo information of ensembles with average cost
/// at most `β`.
pub fn holevo_capacity_cost(cc: &CostChannel, beta: f64, cfg: &OptConfig) -> Result<OptResult> {
    check_beta(beta)?;
    let lowest = cc.g.min_eigenvalue();
    if beta < lowest - 1e-12 {
        return Err(Error::param(
            "beta",
            format!("{beta} is below the smallest cost {lowest}"),
        ));
    }
    let d = cc.channel.dim_in();
    let problem = Problem {
        cc,
        d,
        k: d * d,
        beta,
    };
    // Every restart holds the cost eigenbasis, cheapest first; the rest is random.
    let basis: Vec<f64> =
        cc.g.eigenbasis()
            .iter()
            .flat_map(|v| ascent::from_vect(v.vec()))
            .collect();
    let (best, outcomes) = multistart(cfg, |_, rng| {
        let mut x0 = basis.clone();
        x0.extend(ascent::random_point(rng, 2 * d * (problem.k - d)));
        problem.run(x0, cfg)
    });
    let (x, p) = &outcomes[best].payload;
    let ensemble = problem.ensemble(x, p)?;
    let value = holevo_information(&ensemble, &cc.channel)?.clamp_nonneg();
    let converged = outcomes.iter().all(|o| o.converged);
    let mut diagnostics = Vec::new();
    if !converged {
        let n = outcomes.iter().filter(|o| !o.converged).count();
        diagnostics.push(format!(
            "{n} of {} restarts hit the iteration limit",
            outcomes.len()
        ));
    }
    Ok(OptResult {
        value,
        argmax: Argmax::Ensemble(ensemble),
        restarts: cfg.restarts,
        converged,
        diagnostics,
    })
}

/// `χ(N, β)` on several budgets, with post hoc monotonicity and concavity
/// checks reported in each result's diagnostics.
pub fn holevo_capacity_curve(
    cc: &CostChannel,
    betas: &[f64],
    cfg: &OptConfig,
) -> Result<Vec<OptResult>> {
    let mut results = betas
        .iter()
        .map(|&b| holevo_capacity_cost(cc, b, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..betas.len()).collect();
    order.sort_by(|&a, &b| betas[a].total_cmp(&betas[b]));
    let val = |i: usize| results[i].value.to_f64();
    let mut notes = Vec::new();
    for w in order.windows(2) {
        if val(w[1]) < val(w[0]) - 1e-7 {
            notes.push(format!(
                "not nondecreasing between beta={} and beta={}",
                betas[w[0]], betas[w[1]]
            ));
        }
    }
    for w in order.windows(3) {
        let (a, b, c) = (betas[w[0]], betas[w[1]], betas[w[2]]);
        if c - a <= 0.0 {
            continue;
        }
        let chord = val(w[0]) + (val(w[2]) - val(w[0])) * (b - a) / (c - a);
        if val(w[1]) < chord - 1e-6 {
            notes.push(format!("not concave at beta={b}"));
        }
    }
    for r in &mut results {
        r.diagnostics.extend(notes.iter().cloned());
    }
    Ok(results)
}

/// `χ(β)/β` on `β_k = 2^{−k}`, `k = 0..=12`, with a first-order Richardson
/// estimate of the `β → 0` limit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroCostLimit {
    /// `(β, χ(β)/β)` from the largest budget down.
    pub ratios: Vec<(f64, f64)>,
    /// `2r(β_min) − r(2β_min)`.
    pub richardson: f64,
    pub value: ExtendedReal,
    pub diagnostics: Vec<String>,
}

pub fn zero_cost_limit(cc: &CostChannel, cfg: &OptConfig) -> Result<ZeroCostLimit> {
    let betas: Vec<f64> = (0..=12).map(|k| 2f64.powi(-k)).collect();
    let mut ratios = Vec::with_capacity(betas.len());
    let mut diagnostics = Vec::new();
    for &b in &betas {
        let r = holevo_capacity_cost(cc, b, cfg)?;
        diagnostics.extend(r.diagnostics.iter().map(|m| format!("beta={b}: {m}")));
        ratios.push((b, r.value.to_f64() / b));
    }
    for w in ratios.windows(2) {
        if cc.zero_cost_state.is_some() && w[1].1 < w[0].1 * (1.0 - 1e-6) - 1e-9 {
            diagnostics.push(format!(
                "chi(beta)/beta decreased from beta={} to beta={}",
                w[0].0, w[1].0
            ));
        }
    }
    let n = ratios.len();
    let richardson = 2.0 * ratios[n - 1].1 - ratios[n - 2].1;
    let rising = ratios[n - 1].1 > ratios[n - 2].1 * (1.0 + 1e-3);
    let value =
        if richardson > cfg.divergence_cap || (ratios[n - 1].1 > cfg.divergence_cap && rising) {
            diagnostics.push("ratio exceeds the divergence cap".into());
            ExtendedReal::Infinity
        } else {
            ExtendedReal::Finite(richardson.max(ratios[n - 1].1).max(0.0))
        };
    Ok(ZeroCostLimit {
        ratios,
        richardson,
        value,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::kl_divergence;
    use crate::qcore::{CostObservable, QuantumChannel};

    fn quick() -> OptConfig {
        OptConfig {
            restarts: 4,
            ..OptConfig::default()
        }
    }

    /// Classical capacity-cost by Blahut–Arimoto with a Lagrange multiplier
    /// tuned by bisection.
    fn classical_ba(w: &[Vec<f64>], cost: &[f64], beta: f64) -> f64 {
        let run = |s: f64| -> (f64, f64) {
            let mut p = vec![1.0 / w.len() as f64; w.len()];
            let mut mi = 0.0;
            for _ in 0..20000 {
                let q: Vec<f64> = (0..w[0].len())
                    .map(|y| p.iter().zip(w).map(|(a, r)| a * r[y]).sum())
                    .collect();
                let d: Vec<f64> = w.iter().map(|r| kl_divergence(r, &q).to_f64()).collect();
                mi = p.iter().zip(&d).map(|(a, b)| a * b).sum();
                let u: Vec<f64> = p
                    .iter()
                    .zip(&d)
                    .zip(cost)
                    .map(|((a, b), c)| a * (b - s * c).exp2())
                    .collect();
                let z: f64 = u.iter().sum();
                p = u.iter().map(|v| v / z).collect();
            }
            (mi, p.iter().zip(cost).map(|(a, c)| a * c).sum())
        };
        let (mut lo, mut hi) = (0.0, 64.0);
        if run(0.0).1 <= beta {
            return run(0.0).0;
        }
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if run(mid).1 > beta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        run(hi).0
    }

    #[test]
    fn identity_with_unit_cost_gives_one_bit() {
        let cc = CostChannel::new(
            QuantumChannel::identity(2),
            CostObservable::identity(2),
            None,
        )
        .unwrap();
        let r = holevo_capacity_cost(&cc, 1.0, &quick()).unwrap();
        assert!((r.value.to_f64() - 1.0).abs() < 1e-7, "{:?}", r.value);
    }

    #[test]
    fn binary_channel_matches_classical_solver() {
        let w = vec![vec![0.99, 0.01], vec![0.1, 0.9]];
        let ch = QuantumChannel::classical(&w).unwrap();
        let cc = CostChannel::new(
            ch,
            CostObservable::from_diag(&[0.0, 1.0]).unwrap(),
            Some(PureState::basis(2, 0)),
        )
        .unwrap();
        for beta in [0.05, 0.2] {
            let got = holevo_capacity_cost(&cc, beta, &quick())
                .unwrap()
                .value
                .to_f64();
            let want = classical_ba(&w, &[0.0, 1.0], beta);
            assert!((got - want).abs() < 1e-5, "beta={beta}: {got} vs {want}");
        }
    }

    #[test]
    fn loose_budget_is_unconstrained() {
        let w = vec![vec![0.99, 0.01], vec![0.1, 0.9]];
        let ch = QuantumChannel::classical(&w).unwrap();
        let cc =
            CostChannel::new(ch, CostObservable::from_diag(&[0.0, 1.0]).unwrap(), None).unwrap();
        let got = holevo_capacity_cost(&cc, 1.0, &quick())
            .unwrap()
            .value
            .to_f64();
        let want = classical_ba(&w, &[0.0, 0.0], 1.0);
        assert!((got - want).abs() < 1e-5);
    }

    #[test]
    fn budget_below_ground_energy_is_rejected() {
        let cc = CostChannel::new(
            QuantumChannel::identity(2),
            CostObservable::identity(2),
            None,
        )
        .unwrap();
        assert!(holevo_capacity_cost(&cc, 0.5, &quick()).is_err());
    }
}
