//! Dense complex linear algebra built around one primitive: the Hermitian
//! eigendecomposition. Every matrix function goes through [`eigh`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;
pub type Vect = DVector<C64>;

/// Eigenvalues at or below this fraction of the largest one count as zero.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, matching `values`.
    pub vectors: Mat,
}

impl Eigh {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Mat {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &v) in self.values.iter().enumerate() {
            let fv = f(v);
            for i in 0..n {
                scaled[(i, j)] *= fv;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    /// `Σ_{j∈S} |v_j⟩⟨v_j|` over the eigenvalues selected by `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> Mat {
        self.map(|v| if keep(v) { 1.0 } else { 0.0 })
    }
}

/// Eigendecomposition of a Hermitian matrix (only the Hermitian part is
/// read). Sizes 1 and 2 use closed forms.
pub fn eigh(m: &Mat) -> Eigh {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigh needs a square matrix");
    match n {
        0 => Eigh {
            values: vec![],
            vectors: Mat::zeros(0, 0),
        },
        1 => Eigh {
            values: vec![m[(0, 0)].re],
            vectors: Mat::identity(1, 1),
        },
        2 => eigh2(m),
        _ => {
            let se = hermitian_part(m).symmetric_eigen();
            Eigh {
                values: se.eigenvalues.iter().copied().collect(),
                vectors: se.eigenvectors,
            }
        }
    }
}

fn eigh2(m: &Mat) -> Eigh {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = (half * half + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return Eigh {
            values: vec![mean, mean],
            vectors: Mat::identity(2, 2),
        };
    }
    let hi = mean + r;
    // Pick the better-conditioned of the two null-vector formulas.
    let (v0, v1) = if a <= d {
        (b, C64::new(hi - a, 0.0))
    } else {
        (C64::new(hi - d, 0.0), b.conj())
    };
    let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    let (v0, v1) = (v0 / norm, v1 / norm);
    let vectors = Mat::from_row_slice(2, 2, &[v0, -v1.conj(), v1, v0.conj()]);
    Eigh {
        values: vec![hi, mean - r],
        vectors,
    }
}

pub fn eigvalsh(m: &Mat) -> Vec<f64> {
    match m.nrows() {
        0..=2 => eigh(m).values,
        _ => hermitian_part(m)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect(),
    }
}

pub fn hermitian_part(m: &Mat) -> Mat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermitian_deviation(m: &Mat) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn trace_re(m: &Mat) -> f64 {
    m.trace().re
}

/// `tr[A B]` without forming the product.
pub fn trace_prod_re(a: &Mat, b: &Mat) -> f64 {
    let n = a.nrows();
    let mut s = ZERO;
    for i in 0..n {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s.re
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Threshold below which eigenvalues are treated as zero.
pub fn support_threshold(values: &[f64]) -> f64 {
    SUPPORT_CUTOFF * values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `-Σ λ log₂ λ` over eigenvalues above the support cutoff.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let cut = support_threshold(values);
    -values
        .iter()
        .filter(|&&v| v > cut)
        .map(|&v| v * v.log2())
        .sum::<f64>()
}

/// Trace over the second factor of a `da·db` square matrix.
pub fn partial_trace_second(m: &Mat, da: usize, db: usize) -> Mat {
    Mat::from_fn(da, da, |i, j| {
        (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
    })
}

/// Trace over the first factor of a `da·db` square matrix.
pub fn partial_trace_first(m: &Mat, da: usize, db: usize) -> Mat {
    Mat::from_fn(db, db, |i, j| {
        (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
    })
}

pub fn outer(v: &Vect) -> Mat {
    v * v.adjoint()
}

pub fn real_diag(values: &[f64]) -> Mat {
    Mat::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| C64::new(v, 0.0)),
    ))
}

/// Trace norm of a Hermitian matrix.
pub fn trace_norm_herm(m: &Mat) -> f64 {
    eigvalsh(m).iter().map(|v| v.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(n: usize, seed: u64) -> Mat {
        let mut x = seed;
        let mut next = || {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = Mat::from_fn(n, n, |_, _| C64::new(next(), next()));
        hermitian_part(&a)
    }

    #[test]
    fn eigh_reconstructs_matrix() {
        for n in 1..6 {
            for seed in 0..5 {
                let m = herm(n, seed * 31 + n as u64);
                let e = eigh(&m);
                assert!(max_abs_diff(&e.map(|v| v), &m) < 1e-12, "n={n}");
                let id = e.vectors.adjoint() * &e.vectors;
                assert!(max_abs_diff(&id, &Mat::identity(n, n)) < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_2x2_handles_degenerate_and_diagonal() {
        for m in [
            Mat::identity(2, 2),
            real_diag(&[0.2, 0.8]),
            real_diag(&[0.8, 0.2]),
            Mat::from_row_slice(2, 2, &[ZERO, C64::new(0.0, 1.0), C64::new(0.0, -1.0), ZERO]),
        ] {
            let e = eigh(&m);
            assert!(max_abs_diff(&e.map(|v| v), &m) < 1e-14);
        }
    }

    #[test]
    fn partial_traces_of_product() {
        let a = real_diag(&[0.25, 0.75]);
        let b = real_diag(&[0.1, 0.2, 0.7]);
        let ab = kron(&a, &b);
        assert!(max_abs_diff(&partial_trace_second(&ab, 2, 3), &a) < 1e-15);
        assert!(max_abs_diff(&partial_trace_first(&ab, 2, 3), &b) < 1e-15);
    }
}
