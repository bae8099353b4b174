//! Block form of qubit tensor powers.
//!
//! Under the `U(2)`-`S_n` duality, `(C²)^{⊗n}` splits into blocks labelled
//! by `s = 0..=n/2`, each a spin of `k = n − 2s` (dimension `k+1`) repeated
//! `m_s = C(n,s) − C(n,s−1)` times. A 2×2 matrix acts as
//! `X^{⊗n} ≅ ⊕_s det(X)^s · Sym^k(X) ⊗ I_{m_s}`, so any spectral quantity of
//! `X^{⊗n}`, and of sums of such powers, reduces to `n/2 + 1` small matrices.

use crate::linalg::{Mat, C64, ONE, ZERO};

/// Multiplicity and spin dimension for each block of an `n`-qubit power.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockShape {
    pub s: usize,
    pub k: usize,
    pub mult: f64,
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn block_shapes(n: usize) -> Vec<BlockShape> {
    (0..=n / 2)
        .map(|s| {
            let below = if s == 0 { 0.0 } else { binomial(n, s - 1) };
            BlockShape {
                s,
                k: n - 2 * s,
                mult: (binomial(n, s) - below).round(),
            }
        })
        .collect()
}

// Polynomials in (x, y) homogeneous of a fixed degree, indexed by the power of y.
type Poly = Vec<C64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_pow(base: &Poly, e: usize) -> Poly {
    (0..e).fold(vec![ONE], |acc, _| poly_mul(&acc, base))
}

fn column(x: &Mat, j: usize) -> Poly {
    vec![x[(0, j)], x[(1, j)]]
}

fn dicke_scale(k: usize, m: usize, n: usize) -> f64 {
    (binomial(k, n) / binomial(k, m)).sqrt()
}

/// Matrix of `X^{⊗k}` on the symmetric subspace in the Dicke basis
/// (index = number of excitations).
pub fn sym_power(x: &Mat, k: usize) -> Mat {
    let c0 = column(x, 0);
    let c1 = column(x, 1);
    let mut out = Mat::zeros(k + 1, k + 1);
    for n in 0..=k {
        let p = poly_mul(&poly_pow(&c0, k - n), &poly_pow(&c1, n));
        for m in 0..=k {
            out[(m, n)] = p[m] * dicke_scale(k, m, n);
        }
    }
    out
}

/// Directional derivative `d/dt Sym^k(X + tY)` at `t = 0`.
pub fn sym_power_derivative(x: &Mat, y: &Mat, k: usize) -> Mat {
    let (c0, c1) = (column(x, 0), column(x, 1));
    let (d0, d1) = (column(y, 0), column(y, 1));
    let mut out = Mat::zeros(k + 1, k + 1);
    for n in 0..=k {
        let mut p = vec![ZERO; k + 1];
        if k - n > 0 {
            let t = poly_mul(&poly_mul(&d0, &poly_pow(&c0, k - n - 1)), &poly_pow(&c1, n));
            for (a, b) in p.iter_mut().zip(&t) {
                *a += b * (k - n) as f64;
            }
        }
        if n > 0 {
            let t = poly_mul(&poly_mul(&poly_pow(&c0, k - n), &d1), &poly_pow(&c1, n - 1));
            for (a, b) in p.iter_mut().zip(&t) {
                *a += b * n as f64;
            }
        }
        for m in 0..=k {
            out[(m, n)] = p[m] * dicke_scale(k, m, n);
        }
    }
    out
}

pub fn det2(x: &Mat) -> C64 {
    x[(0, 0)] * x[(1, 1)] - x[(0, 1)] * x[(1, 0)]
}

/// Blocks of `X^{⊗n}`, paired with their multiplicities.
pub fn power_blocks(x: &Mat, n: usize) -> Vec<(f64, Mat)> {
    let det = det2(x);
    block_shapes(n)
        .into_iter()
        .map(|b| (b.mult, sym_power(x, b.k) * det.powu(b.s as u32)))
        .collect()
}

/// Blocks of `Σ_l σ^{⊗(l−1)} ⊗ ρ ⊗ σ^{⊗(n−l)}`, the derivative of
/// `(σ + tρ)^{⊗n}` at `t = 0`.
pub fn split_sum_blocks(sigma: &Mat, rho: &Mat, n: usize) -> Vec<(f64, Mat)> {
    let det = det2(sigma);
    let ddet = sigma[(0, 0)] * rho[(1, 1)] + rho[(0, 0)] * sigma[(1, 1)]
        - sigma[(0, 1)] * rho[(1, 0)]
        - rho[(0, 1)] * sigma[(1, 0)];
    block_shapes(n)
        .into_iter()
        .map(|b| {
            let mut m = sym_power_derivative(sigma, rho, b.k) * det.powu(b.s as u32);
            if b.s > 0 {
                m += sym_power(sigma, b.k) * (ddet * det.powu(b.s as u32 - 1) * b.s as f64);
            }
            (b.mult, m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigvalsh, hermitian_part, kron};

    fn sample(seed: f64) -> Mat {
        let a = Mat::from_row_slice(
            2,
            2,
            &[
                C64::new(0.6 + 0.1 * seed, 0.0),
                C64::new(0.2, 0.1 * seed),
                C64::new(0.2, -0.1 * seed),
                C64::new(0.4 - 0.05 * seed, 0.0),
            ],
        );
        hermitian_part(&a)
    }

    fn dense_power(x: &Mat, n: usize) -> Mat {
        (1..n).fold(x.clone(), |acc, _| kron(&acc, x))
    }

    fn block_spectrum(blocks: &[(f64, Mat)]) -> Vec<f64> {
        let mut out = Vec::new();
        for (m, b) in blocks {
            for v in eigvalsh(b) {
                for _ in 0..(*m as usize) {
                    out.push(v);
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    #[test]
    fn dimensions_add_up() {
        for n in 1..=12 {
            let total: f64 = block_shapes(n)
                .iter()
                .map(|b| b.mult * (b.k + 1) as f64)
                .sum();
            assert_eq!(total, 2f64.powi(n as i32));
        }
    }

    #[test]
    fn power_spectrum_matches_dense() {
        for n in 1..=6 {
            let x = sample(n as f64 * 0.3);
            let mut dense = eigvalsh(&dense_power(&x, n));
            dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let blocks = block_spectrum(&power_blocks(&x, n));
            assert_eq!(dense.len(), blocks.len());
            for (a, b) in dense.iter().zip(&blocks) {
                assert!((a - b).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn difference_of_powers_matches_dense() {
        // A spectral check on ρ^{⊗n} − tσ^{⊗n}, the operator used by the tests.
        let (r, s) = (sample(0.7), sample(-1.1));
        for n in 2..=5 {
            let t = 1.7;
            let mut dense = eigvalsh(&(dense_power(&r, n) - dense_power(&s, n) * C64::new(t, 0.0)));
            dense.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let blocks: Vec<(f64, Mat)> = power_blocks(&r, n)
                .into_iter()
                .zip(power_blocks(&s, n))
                .map(|((m, a), (_, b))| (m, a - b * C64::new(t, 0.0)))
                .collect();
            for (a, b) in dense.iter().zip(&block_spectrum(&blocks)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn split_sum_matches_dense() {
        let (r, s) = (sample(0.9), sample(-0.4));
        for n in 1..=5 {
            let mut dense = Mat::zeros(1 << n, 1 << n);
            for l in 0..n {
                let mut term = Mat::identity(1, 1);
                for j in 0..n {
                    term = kron(&term, if j == l { &r } else { &s });
                }
                dense += term;
            }
            let mut dv = eigvalsh(&dense);
            dv.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let bv = block_spectrum(&split_sum_blocks(&s, &r, n));
            for (a, b) in dv.iter().zip(&bv) {
                assert!((a - b).abs() < 1e-12, "n={n}");
            }
        }
    }
}
