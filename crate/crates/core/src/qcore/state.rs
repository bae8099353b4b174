use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vect, C64};

pub const STATE_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-12;

/// Unit-trace positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "crate::qcore::io::MatrixJson",
    into = "crate::qcore::io::MatrixJson"
)]
pub struct DensityMatrix {
    mat: Mat,
}

impl DensityMatrix {
    pub fn new(mat: Mat) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let dev = linalg::hermitian_deviation(&mat);
        if dev > STATE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = linalg::trace_re(&mat);
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::NotUnitTrace(tr));
        }
        let min = linalg::eigvalsh(&mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -STATE_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(DensityMatrix {
            mat: linalg::hermitian_part(&mat),
        })
    }

    /// Wraps a matrix already known to be a state (e.g. a channel output),
    /// symmetrizing away roundoff.
    pub(crate) fn from_trusted(mat: Mat) -> Self {
        debug_assert!((linalg::trace_re(&mat) - 1.0).abs() < 1e-8);
        DensityMatrix {
            mat: linalg::hermitian_part(&mat),
        }
    }

    pub fn from_diag(p: &[f64]) -> Result<Self> {
        Self::new(linalg::real_diag(p))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: Mat::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.mat)
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            mat: linalg::kron(&self.mat, &other.mat),
        }
    }

    /// Convex combination `(1-w)·self + w·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> DensityMatrix {
        DensityMatrix {
            mat: &self.mat * C64::new(1.0 - w, 0.0) + &other.mat * C64::new(w, 0.0),
        }
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        0.5 * linalg::trace_norm_herm(&(&self.mat - &other.mat))
    }
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "crate::qcore::io::VectorJson",
    into = "crate::qcore::io::VectorJson"
)]
pub struct PureState {
    vec: Vect,
}

impl PureState {
    pub fn new(vec: Vect) -> Result<Self> {
        if vec.is_empty() {
            return Err(Error::DimensionMismatch("empty state vector".into()));
        }
        let n = vec.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(PureState { vec })
    }

    /// Normalizes `vec`; fails only on the zero vector.
    pub fn normalized(vec: Vect) -> Result<Self> {
        let n = vec.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(PureState {
            vec: vec / C64::new(n, 0.0),
        })
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::new(Vect::from_column_slice(amps))
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalized(Vect::from_iterator(
            amps.len(),
            amps.iter().map(|&a| C64::new(a, 0.0)),
        ))
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut vec = Vect::zeros(dim);
        vec[i] = linalg::ONE;
        PureState { vec }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn vec(&self) -> &Vect {
        &self.vec
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            mat: linalg::outer(&self.vec),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.vec.dotc(&other.vec)
    }

    /// Fidelity `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Bloch vector of a qubit state.
    pub fn bloch(&self) -> Option<[f64; 3]> {
        if self.dim() != 2 {
            return None;
        }
        let (a, b) = (self.vec[0], self.vec[1]);
        let ab = a.conj() * b;
        Some([2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()])
    }
}
