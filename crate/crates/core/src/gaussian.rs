//! Single-mode bosonic Gaussian channels, evaluated through their
//! capacity-cost closed forms. Cost is the mean photon number `n̄`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtendedReal;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GaussianChannel {
    Thermal { eta: f64, n_th: f64 },
    AdditiveNoise { noise: f64 },
    Amplifier { kappa: f64, n_th: f64 },
    ContravariantAmplifier { kappa: f64, n_th: f64 },
    PureLoss { eta: f64 },
    IdealAmplifier { kappa: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Classical,
    EntanglementAssisted,
    PrivateQuantum,
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(Error::param("eta", format!("{eta} is outside (0, 1)")))
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 1.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::param("kappa", format!("{kappa} must exceed 1")))
    }
}

fn check_n_th(n_th: f64) -> Result<()> {
    if n_th >= 0.0 && n_th.is_finite() {
        Ok(())
    } else {
        Err(Error::param("n_th", format!("{n_th} must be nonnegative")))
    }
}

impl GaussianChannel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GaussianChannel::Thermal { eta, n_th } => check_eta(eta).and(check_n_th(n_th)),
            GaussianChannel::AdditiveNoise { noise } => {
                if noise > 0.0 && noise.is_finite() {
                    Ok(())
                } else {
                    Err(Error::param("noise", format!("{noise} must be positive")))
                }
            }
            GaussianChannel::Amplifier { kappa, n_th }
            | GaussianChannel::ContravariantAmplifier { kappa, n_th } => {
                check_kappa(kappa).and(check_n_th(n_th))
            }
            GaussianChannel::PureLoss { eta } => check_eta(eta),
            GaussianChannel::IdealAmplifier { kappa } => check_kappa(kappa),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GaussianChannel::Thermal { .. } => "thermal",
            GaussianChannel::AdditiveNoise { .. } => "additive_noise",
            GaussianChannel::Amplifier { .. } => "amplifier",
            GaussianChannel::ContravariantAmplifier { .. } => "contravariant_amplifier",
            GaussianChannel::PureLoss { .. } => "pure_loss",
            GaussianChannel::IdealAmplifier { .. } => "ideal_amplifier",
        }
    }

    fn supports(&self, task: Task) -> bool {
        use GaussianChannel::*;
        match task {
            Task::Classical => true,
            Task::EntanglementAssisted => matches!(
                self,
                Thermal { .. } | AdditiveNoise { .. } | Amplifier { .. }
            ),
            Task::PrivateQuantum => matches!(self, PureLoss { .. } | IdealAmplifier { .. }),
        }
    }

    fn check_task(&self, task: Task) -> Result<()> {
        self.validate()?;
        if self.supports(task) {
            Ok(())
        } else {
            Err(Error::Unsupported {
                kind: self.name().into(),
                task: format!("{task:?}"),
            })
        }
    }
}

/// Entropy in bits of a thermal state with mean photon number `x`.
pub(crate) fn g(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x + 1.0) * (x + 1.0).log2() - x * x.log2()
    }
}

/// `g(a) − g(b)` without the cancellation of subtracting two large `g`s.
pub(crate) fn g_diff(a: f64, b: f64) -> f64 {
    if a <= 0.0 || b <= 0.0 {
        return g(a) - g(b);
    }
    let d = a - b;
    let nats = d * (1.0 / a).ln_1p() + (b + 1.0) * (d / (b + 1.0)).ln_1p() - b * (d / b).ln_1p();
    nats / std::f64::consts::LN_2
}

/// `g(x) = (x+1)log₂(x+1) − x log₂ x`.
pub fn g_func(x: f64) -> Result<f64> {
    if x >= 0.0 && x.is_finite() {
        Ok(g(x))
    } else {
        Err(Error::param("x", format!("{x} must be nonnegative")))
    }
}

/// `g(n̄) + g(out) − g(ν₋) − g(ν₊)` with `ν∓ = (√disc ∓ shift − 1)/2`.
fn ea_form(nbar: f64, out: f64, disc: f64, shift: f64) -> f64 {
    let root = disc.max(0.0).sqrt();
    g(nbar) + g(out) - g(0.5 * (root - shift - 1.0)) - g(0.5 * (root + shift - 1.0))
}

/// Capacity-cost function at mean photon number `nbar`, in bits per use.
pub fn capacity_cost(ch: &GaussianChannel, task: Task, nbar: f64) -> Result<f64> {
    ch.check_task(task)?;
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::param("nbar", format!("{nbar} must be nonnegative")));
    }
    use GaussianChannel::*;
    let v = match (task, *ch) {
        (Task::Classical, Thermal { eta, n_th }) => {
            g_diff(eta * nbar + (1.0 - eta) * n_th, (1.0 - eta) * n_th)
        }
        (Task::Classical, PureLoss { eta }) => g(eta * nbar),
        (Task::Classical, AdditiveNoise { noise }) => g_diff(nbar + noise, noise),
        (Task::Classical, Amplifier { kappa, n_th }) => g_diff(
            kappa * nbar + (kappa - 1.0) * (n_th + 1.0),
            (kappa - 1.0) * (n_th + 1.0),
        ),
        (Task::Classical, IdealAmplifier { kappa }) => {
            g_diff(kappa * nbar + kappa - 1.0, kappa - 1.0)
        }
        (Task::Classical, ContravariantAmplifier { kappa, n_th }) => g_diff(
            kappa * n_th + (kappa - 1.0) * (nbar + 1.0),
            kappa * (n_th + 1.0) - 1.0,
        ),
        (Task::EntanglementAssisted, Thermal { eta, n_th }) => {
            let a = (1.0 + eta) * nbar + (1.0 - eta) * n_th + 1.0;
            let disc = a * a - 4.0 * eta * nbar * (nbar + 1.0);
            ea_form(
                nbar,
                eta * nbar + (1.0 - eta) * n_th,
                disc,
                (1.0 - eta) * (nbar - n_th),
            )
        }
        (Task::EntanglementAssisted, AdditiveNoise { noise }) => {
            let disc = (noise + 1.0).powi(2) + 4.0 * noise * nbar;
            ea_form(nbar, nbar + noise, disc, noise)
        }
        (Task::EntanglementAssisted, Amplifier { kappa, n_th }) => {
            let a = (kappa + 1.0) * nbar + (kappa - 1.0) * (n_th + 1.0) + 1.0;
            let disc = a * a - 4.0 * kappa * nbar * (nbar + 1.0);
            ea_form(
                nbar,
                kappa * nbar + (kappa - 1.0) * (n_th + 1.0),
                disc,
                (kappa - 1.0) * (nbar + n_th + 1.0),
            )
        }
        (Task::PrivateQuantum, IdealAmplifier { kappa }) => {
            g_diff(kappa * (nbar + 1.0) - 1.0, (kappa - 1.0) * (nbar + 1.0))
        }
        (Task::PrivateQuantum, PureLoss { eta }) => g_diff(eta * nbar, (1.0 - eta) * nbar),
        _ => unreachable!("checked by check_task"),
    };
    // Antidegradable pure loss goes negative; the capacity is 0 there.
    Ok(v.max(0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerUnitCost {
    pub value: ExtendedReal,
    /// Leading behaviour of `C(n̄)/n̄` as `n̄ → 0` when the value is infinite.
    pub divergence: Option<String>,
}

impl PerUnitCost {
    fn finite(v: f64) -> Self {
        PerUnitCost {
            value: ExtendedReal::Finite(v),
            divergence: None,
        }
    }

    fn infinite(rate: String) -> Self {
        PerUnitCost {
            value: ExtendedReal::Infinity,
            divergence: Some(rate),
        }
    }
}

/// `lim_{n̄→0} C(n̄)/n̄` in closed form.
pub fn per_unit_cost(ch: &GaussianChannel, task: Task) -> Result<PerUnitCost> {
    ch.check_task(task)?;
    use GaussianChannel::*;
    let log_rate = |c: f64| format!("{c:.6}*log2(1/nbar)");
    Ok(match (task, *ch) {
        (Task::Classical, Thermal { eta, n_th: 0.0 }) => {
            PerUnitCost::infinite(log_rate(eta))
        }
        (Task::Classical, Thermal { eta, n_th }) => {
            PerUnitCost::finite(eta * (1.0 + 1.0 / (n_th * (1.0 - eta))).log2())
        }
        (Task::Classical, PureLoss { eta }) => PerUnitCost::infinite(log_rate(eta)),
        (Task::Classical, AdditiveNoise { noise }) => {
            PerUnitCost::finite((1.0 + 1.0 / noise).log2())
        }
        (Task::Classical, Amplifier { kappa, n_th }) => {
            PerUnitCost::finite(kappa * (1.0 + 1.0 / ((kappa - 1.0) * (n_th + 1.0))).log2())
        }
        (Task::Classical, IdealAmplifier { kappa }) => {
            PerUnitCost::finite(kappa * (kappa / (kappa - 1.0)).log2())
        }
        (Task::Classical, ContravariantAmplifier { kappa, n_th }) => {
            PerUnitCost::finite((kappa - 1.0) * (1.0 + 1.0 / (kappa * (n_th + 1.0) - 1.0)).log2())
        }
        // The signal entropy g(n̄) is only partly cancelled by the output
        // eigenvalue that vanishes with n̄, leaving c·n̄·log₂(1/n̄).
        (Task::EntanglementAssisted, Thermal { eta, n_th }) => {
            PerUnitCost::infinite(log_rate(eta / ((1.0 - eta) * n_th + 1.0)))
        }
        (Task::EntanglementAssisted, AdditiveNoise { noise }) => {
            PerUnitCost::infinite(log_rate(1.0 / (noise + 1.0)))
        }
        (Task::EntanglementAssisted, Amplifier { kappa, n_th }) => {
            PerUnitCost::infinite(log_rate(kappa / (1.0 + (kappa - 1.0) * (n_th + 1.0))))
        }
        (Task::PrivateQuantum, IdealAmplifier { kappa }) => {
            PerUnitCost::finite((kappa / (kappa - 1.0)).log2())
        }
        (Task::PrivateQuantum, PureLoss { eta }) if eta > 0.5 => {
            PerUnitCost::infinite(log_rate(2.0 * eta - 1.0))
        }
        (Task::PrivateQuantum, PureLoss { .. }) => PerUnitCost::finite(0.0),
        _ => unreachable!("checked by check_task"),
    })
}

/// `lim_{x→0} f(x)/x` by Richardson extrapolation over `x = 2^{−k}`,
/// `k = 0..=12`, assuming `f(x)/x` is smooth in `x`.
pub fn ratio_limit(f: impl Fn(f64) -> f64) -> f64 {
    let levels = 4;
    let ratios: Vec<f64> = (0..=12).map(|k| 2f64.powi(-k)).map(|x| f(x) / x).collect();
    let mut table: Vec<f64> = ratios[ratios.len() - levels..].to_vec();
    for j in 1..levels {
        let w = 2f64.powi(j as i32);
        table = table
            .windows(2)
            .map(|p| (w * p[1] - p[0]) / (w - 1.0))
            .collect();
    }
    table[0]
}

/// Leading small-`n_th` term `−η log₂(n_th(1−η))` of the thermal channel's
/// classical capacity per unit cost.
pub fn small_noise_expansion(eta: f64, n_th: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(n_th > 0.0 && n_th.is_finite()) {
        return Err(Error::param("n_th", format!("{n_th} must be positive")));
    }
    Ok(-eta * (n_th * (1.0 - eta)).log2())
}

/// `g(η(β−1))/β`: rate per unit of the composite cost `I + n̂` at budget `β`.
pub fn composite_ratio(eta: f64, beta: f64) -> f64 {
    g(eta * (beta - 1.0)) / beta
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompositeOptimum {
    pub value: f64,
    pub beta: f64,
}

/// Pure-loss capacity per unit of the cost `I + n̂`, i.e.
/// `sup_{β>1} g(η(β−1))/β`, found by a scan over `log(β−1)` followed by
/// golden-section refinement.
pub fn composite_cost_per_unit_cost(eta: f64) -> Result<CompositeOptimum> {
    check_eta(eta)?;
    let f = |u: f64| composite_ratio(eta, 1.0 + u.exp());
    let (lo, hi) = ((1e-10f64).ln(), (1e10f64).ln());
    let n = 400;
    let grid: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    let best = (0..=n)
        .max_by(|&a, &b| f(grid[a]).total_cmp(&f(grid[b])))
        .unwrap_or(0);
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(n)]);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - phi * (b - a), a + phi * (b - a));
    for _ in 0..200 {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    let u = 0.5 * (a + b);
    Ok(CompositeOptimum {
        value: f(u),
        beta: 1.0 + u.exp(),
    })
}

/// Squashed-entanglement upper bound on the two-way assisted private
/// capacity of the ideal amplifier at mean photon number `nbar`.
pub fn squashed_bound(kappa: f64, nbar: f64) -> f64 {
    g_diff(
        (1.0 + kappa) * nbar / 2.0 + (kappa - 1.0) / 2.0,
        (kappa - 1.0) * (nbar + 1.0) / 2.0,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AssistedBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Bounds on the two-way assisted private capacity per unit cost of the
/// ideal amplifier: the unassisted value from below, and the `n̄ → 0` limit
/// of the squashed-entanglement bound per photon from above.
pub fn two_way_assisted_bounds(kappa: f64) -> Result<AssistedBounds> {
    check_kappa(kappa)?;
    let lower = ratio_limit(|x| g_diff(kappa * (x + 1.0) - 1.0, (kappa - 1.0) * (x + 1.0)));
    let upper = ratio_limit(|x| squashed_bound(kappa, x));
    Ok(AssistedBounds { lower, upper })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    /// `C_EA(n̄)/n̄` for the thermal, additive-noise and amplifier channels.
    EaDivergence,
    /// `Q(n̄)/n̄` for the ideal amplifier and the pure-loss channel.
    PrivateQuantum,
}

impl Figure {
    pub fn channels(&self) -> Vec<(String, GaussianChannel, Task)> {
        match self {
            Figure::EaDivergence => vec![
                (
                    "thermal".into(),
                    GaussianChannel::Thermal {
                        eta: 0.7,
                        n_th: 10.0,
                    },
                    Task::EntanglementAssisted,
                ),
                (
                    "additive_noise".into(),
                    GaussianChannel::AdditiveNoise { noise: 10.0 },
                    Task::EntanglementAssisted,
                ),
                (
                    "amplifier".into(),
                    GaussianChannel::Amplifier {
                        kappa: 1.3,
                        n_th: 10.0,
                    },
                    Task::EntanglementAssisted,
                ),
            ],
            Figure::PrivateQuantum => vec![
                (
                    "ideal_amplifier".into(),
                    GaussianChannel::IdealAmplifier { kappa: 3.0 },
                    Task::PrivateQuantum,
                ),
                (
                    "pure_loss".into(),
                    GaussianChannel::PureLoss { eta: 0.7 },
                    Task::PrivateQuantum,
                ),
            ],
        }
    }
}

/// 50 log-spaced photon numbers from `1e-6` to `10`.
pub fn default_grid() -> Vec<f64> {
    (0..50)
        .map(|i| 10f64.powf(-6.0 + 7.0 * i as f64 / 49.0))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig(v, 12)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// `v` with `digits` significant digits in the style of C's `%g`.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= digits as i32 {
        let mut s = trim(mantissa);
        let _ = write!(s, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
        s
    } else {
        trim(&format!(
            "{:.*}",
            (digits as i32 - 1 - exp).max(0) as usize,
            v
        ))
    }
}

/// Rate per photon `C(n̄)/n̄` for each channel of `figure` on `grid`.
pub fn figure_data(figure: Figure, grid: &[f64]) -> Result<Table> {
    if let Some(bad) = grid.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::param(
            "nbar",
            format!("grid value {bad} must be positive"),
        ));
    }
    let channels = figure.channels();
    let mut header = vec!["nbar".to_string()];
    header.extend(channels.iter().map(|(name, _, _)| name.clone()));
    let rows = grid
        .iter()
        .map(|&x| {
            let mut row = vec![x];
            for (_, ch, task) in &channels {
                row.push(capacity_cost(ch, *task, x)? / x);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    const THERMAL: GaussianChannel = GaussianChannel::Thermal {
        eta: 0.7,
        n_th: 10.0,
    };

    #[test]
    fn g_values() {
        assert_eq!(g_func(0.0).unwrap(), 0.0);
        assert!((g_func(1.0).unwrap() - 2.0).abs() < 1e-12);
        let want = 11.0 * 11f64.log2() - 10.0 * 10f64.log2();
        assert!((g_func(10.0).unwrap() - want).abs() < 1e-12);
        assert!((want - 4.834466856).abs() < 1e-9);
        assert!(g_func(-1.0).is_err());
    }

    #[test]
    fn g_diff_agrees_with_direct_difference() {
        for (a, b) in [
            (3.7, 3.0),
            (0.5, 2.0),
            (1e-3, 2e-3),
            (10.0, 0.0),
            (0.0, 4.0),
        ] {
            assert!((g_diff(a, b) - (g(a) - g(b))).abs() < 1e-12);
        }
    }

    #[test]
    fn thermal_examples() {
        assert_eq!(capacity_cost(&THERMAL, Task::Classical, 0.0).unwrap(), 0.0);
        let c1 = capacity_cost(&THERMAL, Task::Classical, 1.0).unwrap();
        assert!((c1 - (g(3.7) - g(3.0))).abs() < 1e-12);
        assert!((c1 - 0.264549557).abs() < 1e-9);
        let puc = per_unit_cost(&THERMAL, Task::Classical)
            .unwrap()
            .value
            .to_f64();
        assert!((puc - 0.7 * (4.0f64 / 3.0).log2()).abs() < 1e-12);
        assert!((puc - 0.290526).abs() < 1e-6);
    }

    #[test]
    fn closed_forms_match_limits() {
        let cases = [
            THERMAL,
            GaussianChannel::AdditiveNoise { noise: 10.0 },
            GaussianChannel::Amplifier {
                kappa: 1.3,
                n_th: 10.0,
            },
            GaussianChannel::ContravariantAmplifier {
                kappa: 1.3,
                n_th: 10.0,
            },
            GaussianChannel::IdealAmplifier { kappa: 3.0 },
        ];
        for ch in cases {
            let closed = per_unit_cost(&ch, Task::Classical).unwrap().value.to_f64();
            let limit = ratio_limit(|x| capacity_cost(&ch, Task::Classical, x).unwrap());
            assert!(
                (limit / closed - 1.0).abs() < 1e-6,
                "{ch:?}: {limit} vs {closed}"
            );
        }
        let amp = GaussianChannel::IdealAmplifier { kappa: 3.0 };
        let q = ratio_limit(|x| capacity_cost(&amp, Task::PrivateQuantum, x).unwrap());
        assert!((q - 1.5f64.log2()).abs() < 1e-6);
    }

    #[test]
    fn ea_forms_vanish_at_zero_and_dominate_classical() {
        for ch in [
            THERMAL,
            GaussianChannel::AdditiveNoise { noise: 10.0 },
            GaussianChannel::Amplifier {
                kappa: 1.3,
                n_th: 10.0,
            },
        ] {
            assert!(
                capacity_cost(&ch, Task::EntanglementAssisted, 0.0)
                    .unwrap()
                    .abs()
                    < 1e-12
            );
            for i in 1..=20 {
                let x = 0.25 * i as f64;
                let ea = capacity_cost(&ch, Task::EntanglementAssisted, x).unwrap();
                assert!(ea >= capacity_cost(&ch, Task::Classical, x).unwrap() - 1e-12);
            }
        }
    }

    #[test]
    fn ea_divergence_rate_matches_numerics() {
        for ch in [
            THERMAL,
            GaussianChannel::AdditiveNoise { noise: 10.0 },
            GaussianChannel::Amplifier {
                kappa: 1.3,
                n_th: 10.0,
            },
        ] {
            let r = |x: f64| capacity_cost(&ch, Task::EntanglementAssisted, x).unwrap() / x;
            let slope = (r(1e-9) - r(1e-7)) / 100f64.log2();
            let rate = per_unit_cost(&ch, Task::EntanglementAssisted)
                .unwrap()
                .divergence
                .unwrap();
            let c: f64 = rate.split('*').next().unwrap().parse().unwrap();
            assert!((slope - c).abs() < 1e-3, "{ch:?}: {slope} vs {c}");
        }
    }

    #[test]
    fn unsupported_pairs() {
        let r = capacity_cost(
            &GaussianChannel::ContravariantAmplifier {
                kappa: 2.0,
                n_th: 1.0,
            },
            Task::EntanglementAssisted,
            1.0,
        );
        assert!(matches!(r, Err(Error::Unsupported { .. })));
        assert!(per_unit_cost(&THERMAL, Task::PrivateQuantum).is_err());
        assert!(GaussianChannel::Thermal {
            eta: 1.0,
            n_th: 1.0
        }
        .validate()
        .is_err());
    }

    #[test]
    fn pure_loss_private() {
        let half = GaussianChannel::PureLoss { eta: 0.5 };
        for x in [0.01, 1.0, 5.0] {
            assert_eq!(capacity_cost(&half, Task::PrivateQuantum, x).unwrap(), 0.0);
        }
        let p = per_unit_cost(
            &GaussianChannel::PureLoss { eta: 0.7 },
            Task::PrivateQuantum,
        )
        .unwrap();
        assert_eq!(p.value, ExtendedReal::Infinity);
        assert!(p.divergence.unwrap().starts_with("0.400000"));
    }

    #[test]
    fn small_noise() {
        let v = small_noise_expansion(0.7, 1e-3).unwrap();
        assert!((v - -0.7 * 3e-4f64.log2()).abs() < 1e-12);
        let exact = per_unit_cost(
            &GaussianChannel::Thermal {
                eta: 0.7,
                n_th: 1e-4,
            },
            Task::Classical,
        )
        .unwrap();
        assert!((exact.value.to_f64() - small_noise_expansion(0.7, 1e-4).unwrap()).abs() < 2e-4);
        assert!(small_noise_expansion(1e-9, 1e-3).unwrap() < 1e-6);
    }

    #[test]
    fn composite_matches_brute_force() {
        let opt = composite_cost_per_unit_cost(0.7).unwrap();
        let brute = (0..200_000)
            .map(|i| 1.0 + 10f64.powf(-4.0 + 8.0 * i as f64 / 200_000.0))
            .map(|b| composite_ratio(0.7, b))
            .fold(0.0, f64::max);
        assert!((opt.value - brute).abs() < 1e-8, "{} vs {brute}", opt.value);
        assert!((composite_ratio(0.7, opt.beta) - opt.value).abs() < 1e-15);
    }

    #[test]
    fn assisted_bounds() {
        let b = two_way_assisted_bounds(3.0).unwrap();
        assert!((b.lower - 1.5f64.log2()).abs() < 1e-7);
        assert!((b.upper - 1.0).abs() < 1e-7);
        let b2 = two_way_assisted_bounds(2.0).unwrap();
        assert!((b2.lower - 1.0).abs() < 1e-7 && (b2.upper - 3f64.log2()).abs() < 1e-7);
        let big = two_way_assisted_bounds(1e6).unwrap();
        assert!(big.lower < 2e-6 && big.upper < 3e-6);
        assert!((big.upper - (1e6f64 + 1.0).log2() + (1e6f64 - 1.0).log2()).abs() < 1e-9);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_sig(0.290526185, 12), "0.290526185");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(1e-6, 12), "1e-06");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_sig(f64::INFINITY, 6), "inf");
    }

    #[test]
    fn figure_shapes() {
        let t = figure_data(Figure::EaDivergence, &default_grid()).unwrap();
        assert_eq!(t.rows.len(), 50);
        assert_eq!(t.header.len(), 4);
        assert!(t.rows.iter().flatten().all(|v| *v >= 0.0));
        let csv = t.to_csv();
        assert!(csv.starts_with("nbar,thermal,additive_noise,amplifier\n"));
        assert!(!csv.contains('\r'));
        assert!(figure_data(Figure::PrivateQuantum, &[0.0]).is_err());
    }
}
