use serde::{Deserialize, Serialize};

use super::state::{DensityMatrix, PureState, STATE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vect, C64};

/// Positive semidefinite cost observable `G` on the channel input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "crate::qcore::io::MatrixJson",
    into = "crate::qcore::io::MatrixJson"
)]
pub struct CostObservable {
    mat: Mat,
}

impl CostObservable {
    pub fn new(mat: Mat) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch(
                "cost observable must be square and nonempty".into(),
            ));
        }
        let dev = linalg::hermitian_deviation(&mat);
        if dev > STATE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let min = linalg::eigvalsh(&mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -STATE_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(CostObservable {
            mat: linalg::hermitian_part(&mat),
        })
    }

    pub fn from_diag(c: &[f64]) -> Result<Self> {
        Self::new(linalg::real_diag(c))
    }

    /// `|i⟩⟨i|` on a `dim`-dimensional space.
    pub fn projector(dim: usize, i: usize) -> Self {
        let mut mat = Mat::zeros(dim, dim);
        mat[(i, i)] = linalg::ONE;
        CostObservable { mat }
    }

    pub fn identity(dim: usize) -> Self {
        CostObservable {
            mat: Mat::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        linalg::trace_prod_re(&self.mat, rho.mat())
    }

    pub fn expectation_vec(&self, v: &Vect) -> f64 {
        v.dotc(&(&self.mat * v)).re
    }

    pub fn expectation_pure(&self, psi: &PureState) -> f64 {
        self.expectation_vec(psi.vec())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::eigvalsh(&self.mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        linalg::eigvalsh(&self.mat)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// An eigenvector of the smallest eigenvalue.
    pub fn ground_state(&self) -> PureState {
        let e = linalg::eigh(&self.mat);
        let (i, _) = e
            .values
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) },
            );
        PureState::normalized(e.vectors.column(i).into_owned())
            .expect("eigenvectors are unit vectors")
    }

    /// Orthonormal eigenvectors in order of increasing cost.
    pub fn eigenbasis(&self) -> Vec<PureState> {
        let e = linalg::eigh(&self.mat);
        let mut order: Vec<usize> = (0..e.values.len()).collect();
        order.sort_by(|&a, &b| e.values[a].total_cmp(&e.values[b]));
        order
            .into_iter()
            .map(|i| {
                PureState::normalized(e.vectors.column(i).into_owned())
                    .expect("eigenvectors are unit vectors")
            })
            .collect()
    }

    /// Additive `G_n = Σ_j I^{⊗(j-1)} ⊗ G ⊗ I^{⊗(n-j)}`.
    pub fn tensor_power(&self, n: usize, cap: usize) -> Result<Self> {
        super::check_power_cap(self.dim(), n, cap)?;
        let d = self.dim();
        let mut total = self.mat.clone();
        let mut dim = d;
        for _ in 1..n {
            total = linalg::kron(&total, &Mat::identity(d, d))
                + linalg::kron(&Mat::identity(dim, dim), &self.mat);
            dim *= d;
        }
        Ok(CostObservable { mat: total })
    }

    /// `⟨v|G_n|v⟩` for a vector on `dim^n` without materializing `G_n`.
    pub fn additive_expectation(&self, v: &Vect, n: usize) -> f64 {
        let d = self.dim();
        let total = v.len();
        let mut acc = 0.0;
        let mut stride = total / d;
        for _ in 0..n {
            let block = stride * d;
            for start in (0..total).step_by(block) {
                for inner in 0..stride {
                    for a in 0..d {
                        let ia = start + a * stride + inner;
                        let mut s = C64::new(0.0, 0.0);
                        for b in 0..d {
                            s += self.mat[(a, b)] * v[start + b * stride + inner];
                        }
                        acc += (v[ia].conj() * s).re;
                    }
                }
            }
            stride /= d;
        }
        acc
    }
}
