//! Exact binary hypothesis testing between `ρ^{⊗N}` and `σ^{⊗N}`.
//!
//! Optimal tests come from the Neyman–Pearson family built on
//! `A(t) = ρ^{⊗N} − tσ^{⊗N}`. Qubit powers are handled in block form
//! (see [`crate::symmetric`]); other dimensions use dense tensor powers.

use serde::Serialize;

use crate::entropy;
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::linalg::{self, Mat, C64};
use crate::par::{self, Exec};
use crate::qcore::{DensityMatrix, TensorPower, DEFAULT_DIM_CAP};
use crate::symmetric;

/// Type-II errors below this are roundoff on a structurally zero overlap.
pub const TYPE_II_FLOOR: f64 = 1e-24;
const BISECTION_STEPS: usize = 80;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestResult {
    /// Threshold `t`; infinite when the test lives on `ker σ^{⊗N}`.
    pub t: f64,
    pub type_i: f64,
    pub type_ii: f64,
    /// Fraction of the boundary eigenspace included in the test.
    pub mix: f64,
}

/// Paired blocks of `ρ^{⊗N}` and `σ^{⊗N}` with multiplicities.
struct Blocks {
    items: Vec<(f64, Mat, Mat)>,
}

impl Blocks {
    fn build(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize, cap: usize) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch(
                "hypotheses differ in dimension".into(),
            ));
        }
        crate::qcore::check_power_cap(rho.dim(), n, cap)?;
        let items = if let Some((p, q)) = joint_spectrum(rho, sigma) {
            type_classes(&p, &q, n)
        } else if rho.dim() == 2 {
            symmetric::power_blocks(rho.mat(), n)
                .into_iter()
                .zip(symmetric::power_blocks(sigma.mat(), n))
                .map(|((m, r), (_, s))| (m, linalg::hermitian_part(&r), linalg::hermitian_part(&s)))
                .collect()
        } else {
            let r = rho.tensor_power(n, cap)?.into_mat();
            let s = sigma.tensor_power(n, cap)?.into_mat();
            vec![(1.0, r, s)]
        };
        Ok(Blocks { items })
    }

    /// `(α, β)` of the test keeping every eigenvalue of `A(t)` at or above
    /// `−tol`, with `tol` relative to the largest eigenvalue magnitude.
    fn evaluate(&self, t: f64) -> (f64, f64) {
        let eigs: Vec<linalg::Eigh> = self
            .items
            .iter()
            .map(|(_, r, s)| linalg::eigh(&(r - s * C64::new(t, 0.0))))
            .collect();
        let scale = eigs.iter().fold(0.0_f64, |m, e| m.max(e.max_abs()));
        let tol = linalg::SUPPORT_CUTOFF * scale;
        let (mut accept_r, mut accept_s) = (0.0, 0.0);
        for ((mult, r, s), e) in self.items.iter().zip(&eigs) {
            let (rr, ss) = (r * &e.vectors, s * &e.vectors);
            for (j, &lam) in e.values.iter().enumerate() {
                if lam >= -tol {
                    let v = e.vectors.column(j);
                    accept_r += mult * v.dotc(&rr.column(j)).re;
                    accept_s += mult * v.dotc(&ss.column(j)).re;
                }
            }
        }
        ((1.0 - accept_r).clamp(0.0, 1.0), accept_s.clamp(0.0, 1.0))
    }

    /// Weight of `ρ^{⊗N}` on `ker σ^{⊗N}`.
    fn kernel_weight(&self) -> f64 {
        let eigs: Vec<linalg::Eigh> = self.items.iter().map(|(_, _, s)| linalg::eigh(s)).collect();
        let top = eigs.iter().fold(0.0_f64, |m, e| m.max(e.max_abs()));
        let cut = linalg::SUPPORT_CUTOFF * top;
        let mut w = 0.0;
        for ((mult, r, _), e) in self.items.iter().zip(&eigs) {
            let rr = r * &e.vectors;
            for (j, &mu) in e.values.iter().enumerate() {
                if mu <= cut {
                    w += mult * e.vectors.column(j).dotc(&rr.column(j)).re;
                }
            }
        }
        w
    }
}

/// Eigenvalues of `ρ` and `σ` on a shared eigenbasis, if they commute.
fn joint_spectrum(rho: &DensityMatrix, sigma: &DensityMatrix) -> Option<(Vec<f64>, Vec<f64>)> {
    let (r, s) = (rho.mat(), sigma.mat());
    let max_abs = |m: &Mat| m.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    let scale = max_abs(r).max(max_abs(s));
    if max_abs(&(r * s - s * r)) > 1e-13 * scale {
        return None;
    }
    // A generic combination separates the joint eigenspaces.
    let u = linalg::eigh(&(r + s * C64::new(0.577_215_664_9, 0.0))).vectors;
    let (rd, sd) = (u.adjoint() * r * &u, u.adjoint() * s * &u);
    let off = |m: &Mat| {
        (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(0.0_f64, |a, (i, j)| a.max(m[(i, j)].norm()))
    };
    if off(&rd).max(off(&sd)) > 1e-12 * scale {
        return None;
    }
    let diag = |m: &Mat| (0..m.nrows()).map(|i| m[(i, i)].re.max(0.0)).collect();
    Some((diag(&rd), diag(&sd)))
}

/// One `1×1` block per type class of `N` outcomes, weighted by its size.
fn type_classes(p: &[f64], q: &[f64], n: usize) -> Vec<(f64, Mat, Mat)> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; p.len()];
    fn walk(
        i: usize,
        left: usize,
        counts: &mut Vec<usize>,
        p: &[f64],
        q: &[f64],
        n: usize,
        out: &mut Vec<(f64, Mat, Mat)>,
    ) {
        if i + 1 == counts.len() {
            counts[i] = left;
            let ln_fact = |k: usize| (1..=k).map(|j| (j as f64).ln()).sum::<f64>();
            let size = (ln_fact(n) - counts.iter().map(|&k| ln_fact(k)).sum::<f64>())
                .exp()
                .round();
            let prob = |x: &[f64]| {
                counts
                    .iter()
                    .zip(x)
                    .map(|(&k, &v)| v.powi(k as i32))
                    .product::<f64>()
            };
            let one = |v: f64| Mat::from_element(1, 1, C64::new(v, 0.0));
            out.push((size, one(prob(p)), one(prob(q))));
            return;
        }
        for k in 0..=left {
            counts[i] = k;
            walk(i + 1, left - k, counts, p, q, n, out);
        }
    }
    walk(0, n, &mut counts, p, q, n, &mut out);
    out
}

/// `β*_N(ε) = min{tr[Λσ^{⊗N}] : tr[(I−Λ)ρ^{⊗N}] ≤ ε}` with the optimal test.
pub fn optimal_type_ii(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    n: usize,
    eps: f64,
) -> Result<TestResult> {
    optimal_type_ii_capped(rho, sigma, n, eps, DEFAULT_DIM_CAP)
}

pub fn optimal_type_ii_capped(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    n: usize,
    eps: f64,
    cap: usize,
) -> Result<TestResult> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param("epsilon", format!("{eps} outside (0,1)")));
    }
    let blocks = Blocks::build(rho, sigma, n, cap)?;

    // A test supported on ker σ^{⊗N} has zero type-II error; if it also meets
    // the type-I budget, shrink it until the budget is met exactly.
    let w = blocks.kernel_weight();
    if 1.0 - w <= eps {
        return Ok(TestResult {
            t: f64::INFINITY,
            type_i: eps,
            type_ii: 0.0,
            mix: ((1.0 - eps) / w).min(1.0),
        });
    }

    let hi = match entropy::max_relative_entropy(rho, sigma) {
        ExtendedReal::Finite(d) => 2f64.powf(d * n as f64 + 4.0),
        _ => {
            let mut t = 1.0;
            while blocks.evaluate(t).0 <= eps && t < f64::MAX / 4.0 {
                t *= 2.0;
            }
            t
        }
    };
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if blocks.evaluate(mid).0 <= eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // The two tests at the bracket ends differ by the boundary eigenspace;
    // mixing them hits the type-I budget exactly.
    let (a_lo, b_lo) = blocks.evaluate(lo);
    let (a_hi, b_hi) = blocks.evaluate(hi);
    let lambda = if a_hi > a_lo {
        ((eps - a_lo) / (a_hi - a_lo)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let type_i = (1.0 - lambda) * a_lo + lambda * a_hi;
    let mut type_ii = (1.0 - lambda) * b_lo + lambda * b_hi;
    if type_ii < TYPE_II_FLOOR {
        type_ii = 0.0;
    }
    Ok(TestResult {
        t: 0.5 * (lo + hi),
        type_i,
        type_ii,
        mix: 1.0 - lambda,
    })
}

/// `D_H^ε(ρ‖σ) = −log₂ β*_1(ε)`.
pub fn hypothesis_testing_rel_entropy(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    eps: f64,
) -> Result<ExtendedReal> {
    Ok(neg_log2(optimal_type_ii(rho, sigma, 1, eps)?.type_ii))
}

pub(crate) fn neg_log2(beta: f64) -> ExtendedReal {
    if beta > 0.0 {
        ExtendedReal::Finite(-beta.log2())
    } else {
        ExtendedReal::Infinity
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SteinRow {
    pub n: usize,
    pub type_ii: f64,
    /// `−(1/N) log₂ β*_N(ε)`.
    pub exponent: ExtendedReal,
}

/// Rows `(N, −(1/N) log₂ β*_N(ε))` for `N = 1..=n_max`.
pub fn stein_diagnostic(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    eps: f64,
    n_max: usize,
    cap: usize,
    exec: Exec,
) -> Result<Vec<SteinRow>> {
    crate::qcore::check_power_cap(rho.dim(), n_max, cap)?;
    par::map_indexed(n_max, exec, |i| {
        let n = i + 1;
        let r = optimal_type_ii_capped(rho, sigma, n, eps, cap)?;
        Ok(SteinRow {
            n,
            type_ii: r.type_ii,
            exponent: neg_log2(r.type_ii).div_pos(n as f64),
        })
    })
    .into_iter()
    .collect()
}
