//! Pulse-position modulation: a `ψ` pulse in one of `M` slots of `N` uses
//! each, all other slots filled with the zero-cost baseline `ψ⁰`.
//!
//! Error probabilities are bounds evaluated from exact optimal tests, not
//! sampled.

use serde::Serialize;

use crate::entropy::{self, max_relative_entropy_mat, von_neumann};
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::gaussian::format_sig;
use crate::hyptest::{self, optimal_type_ii_capped};
use crate::linalg::{self, Mat, Vect, C64};
use crate::par::{self, Exec};
use crate::qcore::{self, CostObservable, DensityMatrix, PureState, QuantumChannel};
use crate::symmetric;

#[derive(Clone, Debug, PartialEq)]
pub struct PpmParams {
    /// Number of messages; `f64` so that unbounded feasible `M` fits.
    pub m: f64,
    pub n: usize,
    pub l: Option<usize>,
    pub eps: f64,
    pub pulse: PureState,
    pub baseline: PureState,
}

impl PpmParams {
    pub fn validate(&self, g: &CostObservable) -> Result<()> {
        if !(self.m >= 2.0) || (self.m.is_finite() && self.m.fract() != 0.0) {
            return Err(Error::param(
                "M",
                format!("{} must be an integer of at least 2", self.m),
            ));
        }
        if self.n == 0 {
            return Err(Error::param("N", "must be at least 1"));
        }
        if self.l == Some(0) {
            return Err(Error::param("L", "must be at least 1"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::param(
                "epsilon",
                format!("{} is outside (0, 1)", self.eps),
            ));
        }
        check_pair(&self.pulse, &self.baseline, g)
    }
}

fn check_pair(pulse: &PureState, baseline: &PureState, g: &CostObservable) -> Result<()> {
    if pulse.dim() != g.dim() || baseline.dim() != g.dim() {
        return Err(Error::DimensionMismatch(
            "pulse, baseline and cost observable differ in dimension".into(),
        ));
    }
    let c0 = g.expectation_pure(baseline);
    if c0 > 1e-10 {
        return Err(Error::NotZeroCost(c0));
    }
    if pulse.fidelity(baseline) >= 1.0 - 1e-10 {
        return Err(Error::param("pulse", "coincides with the baseline"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PpmReport {
    pub m: f64,
    pub n: usize,
    pub pe_bound: f64,
    pub cost_per_codeword: f64,
    pub rate_per_unit_cost: ExtendedReal,
    pub feasible: bool,
}

fn outputs(
    channel: &QuantumChannel,
    pulse: &PureState,
    baseline: &PureState,
) -> Result<(DensityMatrix, DensityMatrix)> {
    Ok((
        channel.apply(&pulse.density())?,
        channel.apply(&baseline.density())?,
    ))
}

fn report(m: f64, n: usize, eps: f64, beta: f64, pulse_cost: f64) -> PpmReport {
    let pe_bound = if beta == 0.0 {
        eps / 2.0
    } else {
        eps / 2.0 + (m - 1.0) * beta
    };
    let cost = n as f64 * pulse_cost;
    PpmReport {
        m,
        n,
        pe_bound,
        cost_per_codeword: cost,
        rate_per_unit_cost: ExtendedReal::from_f64(m.log2()).div_pos(cost),
        feasible: pe_bound < eps,
    }
}

/// Error bound `ε/2 + (M−1)β*_N(ε/2)` of slot-wise testing against the
/// baseline, with the cost and rate of the code.
pub fn classical_ppm(
    params: &PpmParams,
    channel: &QuantumChannel,
    g: &CostObservable,
    cap: usize,
) -> Result<PpmReport> {
    params.validate(g)?;
    let (rho, sigma) = outputs(channel, &params.pulse, &params.baseline)?;
    let test = optimal_type_ii_capped(&rho, &sigma, params.n, params.eps / 2.0, cap)?;
    Ok(report(
        params.m,
        params.n,
        params.eps,
        test.type_ii,
        g.expectation_pure(&params.pulse),
    ))
}

/// Largest `M` with `ε/2 + (M−1)β < ε`, i.e. `⌈ε/(2β)⌉`; infinite when `β = 0`.
pub fn largest_feasible_m(eps: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        f64::INFINITY
    } else {
        (eps / (2.0 * beta)).ceil()
    }
}

/// The largest feasible `M` at blocklength `n`, or `None` if even `M = 2`
/// fails.
pub fn best_feasible_ppm(
    pulse: &PureState,
    baseline: &PureState,
    n: usize,
    eps: f64,
    channel: &QuantumChannel,
    g: &CostObservable,
    cap: usize,
) -> Result<Option<PpmReport>> {
    let probe = PpmParams {
        m: 2.0,
        n,
        l: None,
        eps,
        pulse: pulse.clone(),
        baseline: baseline.clone(),
    };
    probe.validate(g)?;
    let (rho, sigma) = outputs(channel, pulse, baseline)?;
    let beta = optimal_type_ii_capped(&rho, &sigma, n, eps / 2.0, cap)?.type_ii;
    let m = largest_feasible_m(eps, beta);
    if m < 2.0 {
        return Ok(None);
    }
    Ok(Some(report(m, n, eps, beta, g.expectation_pure(pulse))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: f64,
    pub n: usize,
    pub l: Option<usize>,
    pub report: PpmReport,
}

/// Classical PPM over every `(M, N)` pair, ordered by `N` then `M`.
#[allow(clippy::too_many_arguments)]
pub fn ppm_sweep(
    ms: &[f64],
    ns: &[usize],
    pulse: &PureState,
    baseline: &PureState,
    eps: f64,
    channel: &QuantumChannel,
    g: &CostObservable,
    cap: usize,
    exec: Exec,
) -> Result<Vec<SweepRow>> {
    let (rho, sigma) = outputs(channel, pulse, baseline)?;
    let cost = g.expectation_pure(pulse);
    let per_n = par::map_indexed(ns.len(), exec, |i| -> Result<Vec<SweepRow>> {
        let n = ns[i];
        let beta = optimal_type_ii_capped(&rho, &sigma, n, eps / 2.0, cap)?.type_ii;
        ms.iter()
            .map(|&m| {
                let params = PpmParams {
                    m,
                    n,
                    l: None,
                    eps,
                    pulse: pulse.clone(),
                    baseline: baseline.clone(),
                };
                params.validate(g)?;
                Ok(SweepRow {
                    m,
                    n,
                    l: None,
                    report: report(m, n, eps, beta, cost),
                })
            })
            .collect()
    });
    Ok(per_n
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect())
}

/// CSV with columns `M,N,L,peBound,cost,rate,feasible`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("M,N,L,peBound,cost,rate,feasible\n");
    for r in rows {
        let l = r.l.map(|l| l.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            format_sig(r.m, 12),
            r.n,
            l,
            format_sig(r.report.pe_bound, 12),
            format_sig(r.report.cost_per_codeword, 12),
            format_sig(r.report.rate_per_unit_cost.to_f64(), 12),
            r.report.feasible
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexSplitReport {
    pub l: usize,
    /// Unsmoothed `D_max(N^c(ψ)‖N^c(ψ⁰))`.
    pub d_max: ExtendedReal,
    /// `2^{D_max}/δ′²`.
    pub threshold: f64,
    /// `½‖ξ_L − N^c(ψ⁰)^{⊗L}‖₁`.
    pub distance: f64,
    /// Whether `L` exceeds the threshold.
    pub qualifies: bool,
    /// `distance ≤ δ′`, or `true` when `L` does not qualify.
    pub bound_holds: bool,
    pub notes: Vec<String>,
}

/// Trace distance between `ξ_L = (1/L)Σ_l σ^{⊗(l−1)} ⊗ ρ ⊗ σ^{⊗(L−l)}` and
/// `σ^{⊗L}`.
pub fn convex_split_distance(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    l: usize,
    cap: usize,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(
            "convex-split states differ in dimension".into(),
        ));
    }
    qcore::check_power_cap(rho.dim(), l, cap)?;
    let inv_l = C64::new(1.0 / l as f64, 0.0);
    let norm = if rho.dim() == 2 {
        let split = symmetric::split_sum_blocks(sigma.mat(), rho.mat(), l);
        let power = symmetric::power_blocks(sigma.mat(), l);
        split
            .into_iter()
            .zip(power)
            .map(|((mult, a), (_, b))| {
                mult * linalg::trace_norm_herm(&linalg::hermitian_part(&(a * inv_l - b)))
            })
            .sum()
    } else {
        let d = rho.dim();
        let mut xi = Mat::zeros(d.pow(l as u32), d.pow(l as u32));
        let mut power = Mat::identity(1, 1);
        for slot in 0..l {
            let mut term = Mat::identity(1, 1);
            for j in 0..l {
                term = linalg::kron(&term, if j == slot { rho.mat() } else { sigma.mat() });
            }
            xi += term;
            power = linalg::kron(&power, sigma.mat());
        }
        linalg::trace_norm_herm(&linalg::hermitian_part(&(xi * inv_l - power)))
    };
    Ok(0.5 * norm)
}

/// Checks the convex-split condition on the environment at `N = 1`: once
/// `L > 2^{D_max}/δ′²`, the averaged environment state is `δ′`-close to the
/// product of baselines.
pub fn private_ppm_check(
    params: &PpmParams,
    channel: &QuantumChannel,
    g: &CostObservable,
    delta: f64,
    cap: usize,
) -> Result<ConvexSplitReport> {
    params.validate(g)?;
    let l = params
        .l
        .ok_or_else(|| Error::param("L", "required for the private scheme"))?;
    if !(delta > 0.0) {
        return Err(Error::param("delta", format!("{delta} must be positive")));
    }
    let comp = channel.complementary();
    let rho = comp.apply(&params.pulse.density())?;
    let sigma = comp.apply(&params.baseline.density())?;
    let d_max = max_relative_entropy_mat(rho.mat(), sigma.mat());
    let threshold = d_max
        .finite()
        .map_or(f64::INFINITY, |d| d.exp2() / (delta * delta));
    let distance = convex_split_distance(&rho, &sigma, l, cap)?;
    let qualifies = (l as f64) > threshold;
    Ok(ConvexSplitReport {
        l,
        d_max,
        threshold,
        distance,
        qualifies,
        bound_holds: !qualifies || distance <= delta,
        notes: vec!["D_max is unsmoothed (epsilon = 0)".into()],
    })
}

/// `N_N(ρ,ψ⁰)/tr[Gρ]`, clamped at 0, for a possibly mixed pulse `ρ`.
pub fn private_rate_per_unit_cost(
    pulse: &DensityMatrix,
    baseline: &PureState,
    channel: &QuantumChannel,
    g: &CostObservable,
) -> Result<ExtendedReal> {
    let cost = g.expectation(pulse);
    if !(cost > 1e-12) {
        return Err(Error::param("pulse", "has zero cost"));
    }
    let c0 = g.expectation_pure(baseline);
    if c0 > 1e-10 {
        return Err(Error::NotZeroCost(c0));
    }
    let term = entropy::private_information_resolved(pulse, &baseline.density(), channel)?;
    Ok(term.value.clamp_nonneg().div_pos(cost))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RejectionReport {
    /// `δ_N = |⟨ψ⁰|ψ⟩|^N`.
    pub delta_n: f64,
    /// `D_H^{ε−δ_N}(N(ψ)^{⊗N} ‖ N(ψ⁰)^{⊗N})`.
    pub d_h: ExtendedReal,
    /// `N·D_max(N^c(ψ)‖N^c(ψ⁰))`, unsmoothed.
    pub d_max: ExtendedReal,
    /// Achievable rate per unit cost; `None` when both terms are infinite.
    pub rate: Option<ExtendedReal>,
    /// `⟨ψ⊥|G_N|ψ⊥⟩` evaluated on the rejected vector.
    pub rejected_cost: f64,
    /// `N⟨ψ|G|ψ⟩/(1 − |⟨ψ⁰|ψ⟩|^{2N})`.
    pub rejected_cost_formula: f64,
    pub notes: Vec<String>,
}

fn power_vec(v: &Vect, n: usize) -> Vect {
    let mut out = v.clone();
    for _ in 1..n {
        let next = Vect::from_fn(out.len() * v.len(), |i, _| {
            out[i / v.len()] * v[i % v.len()]
        });
        out = next;
    }
    out
}

/// The rate of the quantum PPM scheme that sends the normalized rejection
/// `ψ⊥` of `ψ^{⊗N}` from `(ψ⁰)^{⊗N}`:
/// `(1 − |⟨ψ⁰|ψ⟩|^{2N})[D_H − D_max]/(N⟨ψ|G|ψ⟩)`.
#[allow(clippy::too_many_arguments)]
pub fn quantum_rejection_rate(
    pulse: &PureState,
    baseline: &PureState,
    channel: &QuantumChannel,
    g: &CostObservable,
    n: usize,
    eps: f64,
    eps_prime: f64,
    cap: usize,
) -> Result<RejectionReport> {
    check_pair(pulse, baseline, g)?;
    qcore::check_power_cap(pulse.dim(), n, cap)?;
    for (name, e) in [("epsilon", eps), ("epsilon_prime", eps_prime)] {
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::param(name, format!("{e} is outside (0, 1)")));
        }
    }
    let overlap = baseline.inner(pulse);
    let delta_n = overlap.norm().powi(n as i32);
    if delta_n >= eps {
        return Err(Error::param(
            "N",
            format!("delta_N = {delta_n} is not below epsilon = {eps}; increase N"),
        ));
    }
    let mut notes = vec!["D_max is unsmoothed (epsilon' = 0)".to_string()];
    if delta_n >= eps_prime {
        notes.push(format!(
            "delta_N = {delta_n} is not below epsilon' = {eps_prime}"
        ));
    }

    let (rho, sigma) = outputs(channel, pulse, baseline)?;
    let d_h =
        hyptest::neg_log2(optimal_type_ii_capped(&rho, &sigma, n, eps - delta_n, cap)?.type_ii);
    let comp = channel.complementary();
    let (rho_e, sigma_e) = (
        comp.apply(&pulse.density())?,
        comp.apply(&baseline.density())?,
    );
    let d_max = max_relative_entropy_mat(rho_e.mat(), sigma_e.mat()).scale_pos(n as f64);

    let shrink = 1.0 - delta_n * delta_n;
    let cost = g.expectation_pure(pulse);
    let rejected = {
        let scale = overlap.powu(n as u32);
        let v = power_vec(pulse.vec(), n) - power_vec(baseline.vec(), n) * scale;
        v / C64::new(shrink.sqrt(), 0.0)
    };
    let rejected_cost = g.additive_expectation(&rejected, n);
    let rate = match d_h.checked_sub(d_max) {
        Ok(diff) => Some(diff.scale_pos(shrink).div_pos(n as f64 * cost)),
        Err(_) => {
            notes.push("D_H and D_max are both infinite".into());
            None
        }
    };
    Ok(RejectionReport {
        delta_n,
        d_h,
        d_max,
        rate,
        rejected_cost,
        rejected_cost_formula: n as f64 * cost / shrink,
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EaPpmRates {
    /// `D(φ_AB ‖ φ_A ⊗ N(ψ⁰))/tr[Gφ]`.
    pub rate: ExtendedReal,
    /// `S(A)_φ/tr[Gφ]`, ebits consumed per unit cost.
    pub entanglement_per_unit_cost: f64,
}

pub fn ea_ppm_rates(
    input: &DensityMatrix,
    baseline: &PureState,
    channel: &QuantumChannel,
    g: &CostObservable,
) -> Result<EaPpmRates> {
    let cost = g.expectation(input);
    if !(cost > 1e-12) {
        return Err(Error::param("input", "has zero cost"));
    }
    let c0 = g.expectation_pure(baseline);
    if c0 > 1e-10 {
        return Err(Error::NotZeroCost(c0));
    }
    let d = entropy::ea_relative_entropy(input, channel, baseline)?;
    Ok(EaPpmRates {
        rate: d.clamp_nonneg().div_pos(cost),
        entanglement_per_unit_cost: von_neumann(input) / cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::DEFAULT_DIM_CAP;

    fn plus() -> PureState {
        PureState::from_real(&[1.0, 1.0]).unwrap()
    }

    fn excited() -> CostObservable {
        CostObservable::projector(2, 1)
    }

    fn params(m: f64, n: usize) -> PpmParams {
        PpmParams {
            m,
            n,
            l: None,
            eps: 0.1,
            pulse: PureState::basis(2, 1),
            baseline: PureState::basis(2, 0),
        }
    }

    #[test]
    fn noiseless_orthogonal_pulse_is_always_feasible() {
        let r = classical_ppm(
            &params(1e6, 1),
            &QuantumChannel::identity(2),
            &excited(),
            DEFAULT_DIM_CAP,
        )
        .unwrap();
        assert_eq!(r.pe_bound, 0.05);
        assert!(r.feasible);
        assert!((r.rate_per_unit_cost.to_f64() - 1e6f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn useless_channel_is_infeasible() {
        let sigma = DensityMatrix::from_diag(&[0.5, 0.5]).unwrap();
        let ch = QuantumChannel::constant(&sigma, 2).unwrap();
        let r = classical_ppm(&params(2.0, 3), &ch, &excited(), DEFAULT_DIM_CAP).unwrap();
        assert!(r.pe_bound >= 1.0 - 1e-9 && !r.feasible, "{}", r.pe_bound);
    }

    #[test]
    fn feasibility_is_monotone_in_m() {
        let rows = ppm_sweep(
            &[2.0, 4.0, 8.0, 16.0, 64.0, 256.0],
            &[2, 3, 4],
            &plus(),
            &PureState::basis(2, 0),
            0.3,
            &QuantumChannel::dephasing(0.2).unwrap(),
            &excited(),
            DEFAULT_DIM_CAP,
            Exec::Sequential,
        )
        .unwrap();
        for w in rows.windows(2) {
            if w[0].n == w[1].n && w[1].report.feasible {
                assert!(w[0].report.feasible);
            }
        }
        let csv = sweep_csv(&rows);
        assert!(csv.starts_with("M,N,L,peBound,cost,rate,feasible\n"));
        assert_eq!(csv.lines().count(), rows.len() + 1);
    }

    #[test]
    fn largest_m_rule() {
        assert_eq!(largest_feasible_m(0.1, 0.0), f64::INFINITY);
        assert_eq!(largest_feasible_m(0.1, 0.01), 5.0);
        assert_eq!(largest_feasible_m(0.1, 0.012), 5.0);
        // 0.05 + 4·0.012 = 0.098 < 0.1, while M = 6 gives 0.11.
        assert!(
            report(5.0, 1, 0.1, 0.012, 1.0).feasible && !report(6.0, 1, 0.1, 0.012, 1.0).feasible
        );
    }

    /// Total variation for commuting qubit states, summed over type classes.
    fn classical_split(r: [f64; 2], s: [f64; 2], l: usize) -> f64 {
        (0..=l)
            .map(|k| {
                let base = s[0].powi((l - k) as i32) * s[1].powi(k as i32);
                let xi = base * ((l - k) as f64 * r[0] / s[0] + k as f64 * r[1] / s[1]) / l as f64;
                symmetric::binomial(l, k) * (xi - base).abs()
            })
            .sum::<f64>()
            / 2.0
    }

    #[test]
    fn convex_split_matches_type_classes() {
        let (r, s) = ([0.3, 0.7], [0.6, 0.4]);
        for l in 1..=10 {
            let got = convex_split_distance(
                &DensityMatrix::from_diag(&r).unwrap(),
                &DensityMatrix::from_diag(&s).unwrap(),
                l,
                DEFAULT_DIM_CAP,
            )
            .unwrap();
            assert!((got - classical_split(r, s, l)).abs() < 1e-10, "L={l}");
        }
    }

    #[test]
    fn convex_split_dense_path_agrees() {
        let r = DensityMatrix::from_diag(&[0.2, 0.5, 0.3]).unwrap();
        let s = DensityMatrix::from_diag(&[0.4, 0.3, 0.3]).unwrap();
        let d = convex_split_distance(&r, &s, 3, DEFAULT_DIM_CAP).unwrap();
        let mut oracle = 0.0;
        for idx in 0..27 {
            let x = [idx / 9, (idx / 3) % 3, idx % 3];
            let base: f64 = x.iter().map(|&i| s.mat()[(i, i)].re).product();
            let ratio: f64 = x
                .iter()
                .map(|&i| r.mat()[(i, i)].re / s.mat()[(i, i)].re)
                .sum::<f64>()
                / 3.0;
            oracle += (base * ratio - base).abs() / 2.0;
        }
        assert!((d - oracle).abs() < 1e-12);
    }

    #[test]
    fn private_check_with_pulse_equal_to_baseline_direction() {
        // ψ⁰ as a pulse is rejected; a nearby pulse gives a small distance.
        let ch = QuantumChannel::dephasing(0.3).unwrap();
        let g = CostObservable::new(
            PureState::from_real(&[1.0, -1.0])
                .unwrap()
                .density()
                .into_mat(),
        )
        .unwrap();
        let mut p = PpmParams {
            m: 2.0,
            n: 1,
            l: Some(4),
            eps: 0.1,
            pulse: plus(),
            baseline: plus(),
        };
        assert!(private_ppm_check(&p, &ch, &g, 0.7, DEFAULT_DIM_CAP).is_err());
        p.pulse = PureState::from_real(&[1.0, 0.8]).unwrap();
        let r = private_ppm_check(&p, &ch, &g, 0.7, DEFAULT_DIM_CAP).unwrap();
        assert!(
            r.d_max.to_f64() < 0.5 && r.qualifies && r.bound_holds,
            "{r:?}"
        );
    }

    #[test]
    fn private_rates() {
        let zero = PureState::basis(2, 0);
        let id = private_rate_per_unit_cost(
            &plus().density(),
            &zero,
            &QuantumChannel::identity(2),
            &excited(),
        )
        .unwrap();
        assert_eq!(id, ExtendedReal::Infinity);
        let ad = QuantumChannel::amplitude_damping(0.75).unwrap();
        let r = private_rate_per_unit_cost(&plus().density(), &zero, &ad, &excited()).unwrap();
        assert_eq!(r, ExtendedReal::Finite(0.0));
    }

    #[test]
    fn rejection_cost_identity() {
        let ch = QuantumChannel::dephasing(0.1).unwrap();
        let r = quantum_rejection_rate(
            &plus(),
            &PureState::basis(2, 0),
            &ch,
            &excited(),
            4,
            0.5,
            0.5,
            DEFAULT_DIM_CAP,
        )
        .unwrap();
        assert!((r.rejected_cost - 4.0 * 0.5 / (1.0 - 2f64.powi(-4))).abs() < 1e-12);
        assert!((r.rejected_cost_formula - 2.0 / (1.0 - 1.0 / 16.0)).abs() < 1e-12);
        assert!((r.rejected_cost - 2.13333).abs() < 1e-5);
    }

    #[test]
    fn orthogonal_pulse_needs_no_rejection() {
        let ch = QuantumChannel::dephasing(0.1).unwrap();
        let r = quantum_rejection_rate(
            &PureState::basis(2, 1),
            &PureState::basis(2, 0),
            &ch,
            &excited(),
            3,
            0.1,
            0.1,
            DEFAULT_DIM_CAP,
        )
        .unwrap();
        assert_eq!(r.delta_n, 0.0);
        assert!((r.rejected_cost - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejection_requires_small_overlap() {
        let ch = QuantumChannel::dephasing(0.1).unwrap();
        let r = quantum_rejection_rate(
            &plus(),
            &PureState::basis(2, 0),
            &ch,
            &excited(),
            1,
            0.1,
            0.1,
            DEFAULT_DIM_CAP,
        );
        assert!(r.is_err());
    }

    #[test]
    fn ea_rates() {
        let zero = PureState::basis(2, 0);
        let sigma = DensityMatrix::from_diag(&[0.7, 0.3]).unwrap();
        let constant = QuantumChannel::constant(&sigma, 2).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        let r = ea_ppm_rates(&mixed, &zero, &constant, &excited()).unwrap();
        assert!(r.rate.to_f64().abs() < 1e-12);
        let pure = ea_ppm_rates(&plus().density(), &zero, &constant, &excited()).unwrap();
        assert!(pure.entanglement_per_unit_cost.abs() < 1e-12);
        let ad = QuantumChannel::amplitude_damping(0.25).unwrap();
        let r = ea_ppm_rates(&mixed, &zero, &ad, &excited()).unwrap();
        assert!((r.entanglement_per_unit_cost - 2.0).abs() < 1e-12);
    }
}
