use serde::{Deserialize, Serialize};

use super::state::{DensityMatrix, STATE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, C64, ZERO};

/// CPTP map in Kraus form.
///
/// The Stinespring isometry is `V = Σ_k K_k ⊗ |k⟩_E` with the environment
/// dimension equal to the number of Kraus operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "crate::qcore::io::ChannelJson",
    into = "crate::qcore::io::ChannelJson"
)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<Mat>,
}

impl QuantumChannel {
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<Mat>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 || kraus.is_empty() {
            return Err(Error::DimensionMismatch(
                "channel needs positive dimensions and at least one Kraus operator".into(),
            ));
        }
        for (k, m) in kraus.iter().enumerate() {
            if m.nrows() != dim_out || m.ncols() != dim_in {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {k} is {}x{}, expected {dim_out}x{dim_in}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        let mut sum = Mat::zeros(dim_in, dim_in);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let dev = linalg::max_abs_diff(&sum, &Mat::identity(dim_in, dim_in));
        if dev > STATE_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(QuantumChannel {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn dim_env(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[Mat] {
        &self.kraus
    }

    pub fn identity(dim: usize) -> Self {
        QuantumChannel {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![Mat::identity(dim, dim)],
        }
    }

    /// Qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::param("gamma", format!("{gamma} outside [0,1]")));
        }
        let r = |x: f64| C64::new(x, 0.0);
        let k0 = Mat::from_row_slice(2, 2, &[r(1.0), ZERO, ZERO, r((1.0 - gamma).sqrt())]);
        let k1 = Mat::from_row_slice(2, 2, &[ZERO, r(gamma.sqrt()), ZERO, ZERO]);
        Self::new(2, 2, vec![k0, k1])
    }

    /// Qubit dephasing `ρ ↦ (1-p)ρ + p ZρZ`.
    pub fn dephasing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param("p", format!("{p} outside [0,1]")));
        }
        let k0 = Mat::identity(2, 2) * C64::new((1.0 - p).sqrt(), 0.0);
        let k1 = linalg::real_diag(&[p.sqrt(), -p.sqrt()]);
        Self::new(2, 2, vec![k0, k1])
    }

    /// Replacement channel `ρ ↦ tr(ρ)·σ` on a `dim_in`-dimensional input.
    pub fn constant(sigma: &DensityMatrix, dim_in: usize) -> Result<Self> {
        let e = linalg::eigh(sigma.mat());
        let mut kraus = Vec::new();
        for (i, &lam) in e.values.iter().enumerate() {
            if lam <= 0.0 {
                continue;
            }
            let v = e.vectors.column(i) * C64::new(lam.sqrt(), 0.0);
            for j in 0..dim_in {
                let mut k = Mat::zeros(sigma.dim(), dim_in);
                k.set_column(j, &v);
                kraus.push(k);
            }
        }
        Self::new(dim_in, sigma.dim(), kraus)
    }

    /// Measure-and-prepare channel `ρ ↦ Σ_x ⟨x|ρ|x⟩ σ_x`.
    pub fn measure_prepare(outputs: &[DensityMatrix]) -> Result<Self> {
        let dim_in = outputs.len();
        let dim_out = outputs.first().map(|s| s.dim()).unwrap_or(0);
        let mut kraus = Vec::new();
        for (x, sigma) in outputs.iter().enumerate() {
            if sigma.dim() != dim_out {
                return Err(Error::DimensionMismatch(
                    "prepared states differ in dimension".into(),
                ));
            }
            let e = linalg::eigh(sigma.mat());
            for (i, &lam) in e.values.iter().enumerate() {
                if lam <= linalg::support_threshold(&e.values) {
                    continue;
                }
                let mut k = Mat::zeros(dim_out, dim_in);
                k.set_column(x, &(e.vectors.column(i) * C64::new(lam.sqrt(), 0.0)));
                kraus.push(k);
            }
        }
        Self::new(dim_in, dim_out, kraus)
    }

    /// Qubit state-preparation channel `ρ ↦ ⟨0|ρ|0⟩ρ⁰ + ⟨1|ρ|1⟩ρ¹`.
    pub fn state_preparation(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<Self> {
        Self::measure_prepare(&[rho0.clone(), rho1.clone()])
    }

    /// Classical channel with row-stochastic `w[x][y] = P(y|x)` embedded
    /// diagonally.
    pub fn classical(w: &[Vec<f64>]) -> Result<Self> {
        let outputs = w
            .iter()
            .map(|row| DensityMatrix::from_diag(row))
            .collect::<Result<Vec<_>>>()?;
        Self::measure_prepare(&outputs)
    }

    /// `N(ρ) = Σ K ρ K†` on a raw matrix; no validation.
    pub fn apply_mat(&self, rho: &Mat) -> Mat {
        let mut out = Mat::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        out
    }

    pub fn apply(&self, state: &DensityMatrix) -> Result<DensityMatrix> {
        if state.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "state has dimension {}, channel expects {}",
                state.dim(),
                self.dim_in
            )));
        }
        Ok(DensityMatrix::from_trusted(self.apply_mat(state.mat())))
    }

    /// Stinespring isometry with output ordering `B ⊗ E`.
    pub fn isometry(&self) -> Mat {
        let ne = self.kraus.len();
        let mut v = Mat::zeros(self.dim_out * ne, self.dim_in);
        for (k, kr) in self.kraus.iter().enumerate() {
            for b in 0..self.dim_out {
                for a in 0..self.dim_in {
                    v[(b * ne + k, a)] = kr[(b, a)];
                }
            }
        }
        v
    }

    /// Complementary channel with Kraus operators `F_j = Σ_k ⟨j|K_k ⊗ |k⟩`,
    /// so that `(N^c(ρ))_{kl} = tr[K_l† K_k ρ]`.
    pub fn complementary(&self) -> QuantumChannel {
        let ne = self.kraus.len();
        let kraus = (0..self.dim_out)
            .map(|j| Mat::from_fn(ne, self.dim_in, |k, a| self.kraus[k][(j, a)]))
            .collect();
        QuantumChannel {
            dim_in: self.dim_in,
            dim_out: ne,
            kraus,
        }
    }

    /// Superoperator `T` with `vec(N(ρ)) = T vec(ρ)` in row-major vec order.
    pub fn transfer_matrix(&self) -> Mat {
        let mut t = Mat::zeros(self.dim_out * self.dim_out, self.dim_in * self.dim_in);
        for k in &self.kraus {
            t += linalg::kron(k, &k.map(|z| z.conj()));
        }
        t
    }

    /// `n`-fold tensor product, Kraus operators are all `n`-fold products.
    pub fn tensor_power(&self, n: usize, cap: usize) -> Result<Self> {
        super::check_power_cap(self.dim_in.max(self.dim_out), n, cap)?;
        let mut kraus = self.kraus.clone();
        for _ in 1..n {
            let mut next = Vec::with_capacity(kraus.len() * self.kraus.len());
            for a in &kraus {
                for b in &self.kraus {
                    next.push(linalg::kron(a, b));
                }
            }
            kraus = next;
        }
        Ok(QuantumChannel {
            dim_in: self.dim_in.pow(n as u32),
            dim_out: self.dim_out.pow(n as u32),
            kraus,
        })
    }
}
