//! States, channels, cost observables and the operations between them.

mod channel;
mod cost;
pub mod io;
mod state;

pub use channel::QuantumChannel;
pub use cost::CostObservable;
pub use state::{DensityMatrix, PureState};

use crate::error::{Error, Result};
use crate::linalg::{self, Vect, C64};

pub const DEFAULT_DIM_CAP: usize = 4096;

pub(crate) fn check_power_cap(dim: usize, n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", "tensor power must be at least 1"));
    }
    let total = (dim as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::DimensionCap {
            dim: total.min(usize::MAX as u128) as usize,
            cap,
        });
    }
    Ok(())
}

/// Finite ensemble `{p_x, ρ_x}`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Ensemble {
    entries: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::param("ensemble", "no entries"))?;
        let dim = first.1.dim();
        if entries.iter().any(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "ensemble states differ in dimension".into(),
            ));
        }
        if let Some((p, _)) = entries.iter().find(|(p, _)| !(*p >= 0.0)) {
            return Err(Error::param("probability", format!("{p} is negative")));
        }
        let total: f64 = entries.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::param(
                "probability",
                format!("weights sum to {total}"),
            ));
        }
        Ok(Ensemble { entries })
    }

    pub fn entries(&self) -> &[(f64, DensityMatrix)] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }

    /// Average state `ρ̄ = Σ p_x ρ_x`.
    pub fn average(&self) -> DensityMatrix {
        let mut m = linalg::Mat::zeros(self.dim(), self.dim());
        for (p, s) in &self.entries {
            m += s.mat() * C64::new(*p, 0.0);
        }
        DensityMatrix::from_trusted(m)
    }
}

/// `n`-fold tensor power bounded by a dimension cap.
pub trait TensorPower: Sized {
    fn tensor_power(&self, n: usize, cap: usize) -> Result<Self>;
}

impl TensorPower for DensityMatrix {
    fn tensor_power(&self, n: usize, cap: usize) -> Result<Self> {
        check_power_cap(self.dim(), n, cap)?;
        let mut out = self.clone();
        for _ in 1..n {
            out = out.kron(self);
        }
        Ok(out)
    }
}

impl TensorPower for QuantumChannel {
    fn tensor_power(&self, n: usize, cap: usize) -> Result<Self> {
        QuantumChannel::tensor_power(self, n, cap)
    }
}

impl TensorPower for CostObservable {
    fn tensor_power(&self, n: usize, cap: usize) -> Result<Self> {
        CostObservable::tensor_power(self, n, cap)
    }
}

/// `vec(√ρ)` on `R ⊗ A'` (index `j·d + i` holds `(√ρ)_{ij}`), so the
/// reduction to `A'` is `ρ` and the reduction to `R` is `ρᵀ`.
pub fn canonical_purification(state: &DensityMatrix) -> PureState {
    let root = linalg::eigh(state.mat()).map(|v| v.max(0.0).sqrt());
    let d = state.dim();
    let v = Vect::from_fn(d * d, |idx, _| root[(idx % d, idx / d)]);
    PureState::normalized(v).expect("purification of a unit-trace state has unit norm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, partial_trace_first, partial_trace_second, real_diag};

    #[test]
    fn amplitude_damping_examples() {
        let ad1 = QuantumChannel::amplitude_damping(1.0).unwrap();
        let one = PureState::basis(2, 1).density();
        let out = ad1.apply(&one).unwrap();
        assert!(max_abs_diff(out.mat(), PureState::basis(2, 0).density().mat()) < 1e-15);
        let ad = QuantumChannel::amplitude_damping(0.3).unwrap();
        let out = ad.apply(&one).unwrap();
        assert!(max_abs_diff(out.mat(), &real_diag(&[0.3, 0.7])) < 1e-15);
    }

    #[test]
    fn identity_complement_is_one_dimensional() {
        let c = QuantumChannel::identity(3).complementary();
        assert_eq!(c.dim_out(), 1);
        let out = c.apply(&DensityMatrix::maximally_mixed(3)).unwrap();
        assert!((out.mat()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn additive_cost_power_matches_hand_expansion() {
        let g = CostObservable::projector(2, 1);
        let g2 = g.tensor_power(2, DEFAULT_DIM_CAP).unwrap();
        assert!(max_abs_diff(g2.mat(), &real_diag(&[0.0, 1.0, 1.0, 2.0])) < 1e-15);
        assert_eq!(g.tensor_power(1, 16).unwrap(), g);
    }

    #[test]
    fn cap_is_enforced() {
        let g = CostObservable::identity(2);
        assert!(matches!(
            g.tensor_power(13, 4096),
            Err(Error::DimensionCap { .. })
        ));
        assert!(g.tensor_power(12, 4096).is_ok());
    }

    #[test]
    fn purification_reductions() {
        let rho = DensityMatrix::from_diag(&[0.3, 0.7]).unwrap();
        let phi = canonical_purification(&rho).density();
        let on_a = partial_trace_first(phi.mat(), 2, 2);
        assert!(max_abs_diff(&on_a, rho.mat()) < 1e-12);
        let on_r = partial_trace_second(phi.mat(), 2, 2);
        assert!(max_abs_diff(&on_r, rho.mat()) < 1e-12);

        let pure = canonical_purification(&PureState::basis(2, 0).density());
        assert!((pure.vec()[0].re - 1.0).abs() < 1e-12);

        let bell = canonical_purification(&DensityMatrix::maximally_mixed(2));
        let r = partial_trace_second(bell.density().mat(), 2, 2);
        assert!(max_abs_diff(&r, DensityMatrix::maximally_mixed(2).mat()) < 1e-12);
    }

    #[test]
    fn additive_expectation_matches_dense_power() {
        let g = CostObservable::new(real_diag(&[0.2, 1.3, 0.5])).unwrap();
        let v = Vect::from_fn(27, |i, _| {
            C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())
        });
        let v = &v / C64::new(v.norm(), 0.0);
        let dense = g.tensor_power(3, 64).unwrap().expectation_vec(&v);
        assert!((g.additive_expectation(&v, 3) - dense).abs() < 1e-12);
    }
}
