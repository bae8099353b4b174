//! Riemannian gradient ascent on products of unit spheres with
//! finite-difference gradients, plus the deterministic multi-start driver.

use rand_chacha::ChaCha8Rng;

use super::OptConfig;
use crate::linalg::{Mat, Vect, C64};
use crate::par;
use crate::rng;

/// Coordinates split into equal blocks, each constrained to a unit sphere.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Spheres {
    pub block: usize,
    pub h: f64,
}

pub(crate) enum Step {
    Improved,
    Stalled,
    /// The objective reached `+∞` at the current point.
    Infinite,
}

impl Spheres {
    pub fn normalize(&self, x: &mut [f64]) {
        for chunk in x.chunks_mut(self.block) {
            let n = chunk.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 0.0 {
                chunk.iter_mut().for_each(|v| *v /= n);
            }
        }
    }

    fn moved(&self, x: &[f64], dir: &[f64], tau: f64) -> Vec<f64> {
        let mut y: Vec<f64> = x.iter().zip(dir).map(|(a, b)| a + tau * b).collect();
        self.normalize(&mut y);
        y
    }

    /// Central-difference gradient projected onto the tangent space.
    /// Returns `None` if some probe point evaluates to `+∞`, leaving that
    /// point in `x`.
    fn gradient(&self, f: &dyn Fn(&[f64]) -> f64, x: &mut Vec<f64>) -> Option<Vec<f64>> {
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() {
            let mut probe = x.clone();
            probe[i] += self.h;
            self.normalize(&mut probe);
            let fp = f(&probe);
            if fp == f64::INFINITY {
                *x = probe;
                return None;
            }
            let mut probe = x.clone();
            probe[i] -= self.h;
            self.normalize(&mut probe);
            let fm = f(&probe);
            if fm == f64::INFINITY {
                *x = probe;
                return None;
            }
            let d = (fp - fm) / (2.0 * self.h);
            g[i] = if d.is_finite() { d } else { 0.0 };
        }
        for (xb, gb) in x.chunks(self.block).zip(g.chunks_mut(self.block)) {
            let radial: f64 = xb.iter().zip(gb.iter()).map(|(a, b)| a * b).sum();
            gb.iter_mut()
                .zip(xb)
                .for_each(|(gi, xi)| *gi -= radial * xi);
        }
        Some(g)
    }

    /// One backtracking (Armijo) step from `x`, updating `x`, `fx`, `tau`.
    pub fn step(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        x: &mut Vec<f64>,
        fx: &mut f64,
        tau: &mut f64,
    ) -> Step {
        let Some(g) = self.gradient(f, x) else {
            *fx = f64::INFINITY;
            return Step::Infinite;
        };
        let gn2: f64 = g.iter().map(|v| v * v).sum();
        if gn2.sqrt() < 1e-13 {
            return Step::Stalled;
        }
        let mut t = *tau;
        for _ in 0..48 {
            let y = self.moved(x, &g, t);
            let fy = f(&y);
            if fy == f64::INFINITY {
                *x = y;
                *fx = fy;
                return Step::Infinite;
            }
            if fy.is_finite() && fy >= *fx + 1e-4 * t * gn2 && fy > *fx {
                *x = y;
                *fx = fy;
                *tau = (2.0 * t).min(1.0);
                return Step::Improved;
            }
            t *= 0.5;
        }
        Step::Stalled
    }
}

pub(crate) struct AscentOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

/// Plateau test: relative change below `rel_tol` over `patience` steps. A
/// drop counts as movement, so a history that first falls keeps running.
pub(crate) fn plateaued(history: &[f64], cfg: &OptConfig) -> bool {
    let n = history.len();
    if n <= cfg.patience {
        return false;
    }
    let (now, then) = (history[n - 1], history[n - 1 - cfg.patience]);
    (now - then).abs() <= cfg.rel_tol * now.abs().max(f64::MIN_POSITIVE)
}

/// Maximizes `f` over the product of spheres starting from `x0`.
pub(crate) fn ascend(
    f: &dyn Fn(&[f64]) -> f64,
    spheres: Spheres,
    x0: Vec<f64>,
    cfg: &OptConfig,
) -> AscentOutcome {
    let mut x = x0;
    spheres.normalize(&mut x);
    let mut fx = f(&x);
    if !fx.is_finite() {
        return AscentOutcome {
            x,
            value: if fx.is_nan() { f64::NEG_INFINITY } else { fx },
            converged: true,
        };
    }
    let mut tau = 0.1;
    let mut history = vec![fx];
    for _ in 0..cfg.max_iter {
        match spheres.step(f, &mut x, &mut fx, &mut tau) {
            Step::Infinite => {
                return AscentOutcome {
                    x,
                    value: f64::INFINITY,
                    converged: true,
                }
            }
            Step::Stalled => {
                return AscentOutcome {
                    x,
                    value: fx,
                    converged: true,
                }
            }
            Step::Improved => {}
        }
        history.push(fx);
        if plateaued(&history, cfg) {
            return AscentOutcome {
                x,
                value: fx,
                converged: true,
            };
        }
    }
    AscentOutcome {
        x,
        value: fx,
        converged: false,
    }
}

pub(crate) struct Restart<T> {
    pub value: f64,
    pub converged: bool,
    pub payload: T,
}

/// Runs `cfg.restarts` independent restarts and returns them in index order
/// with the index of the best one (largest value, lowest index on ties).
pub(crate) fn multistart<T, F>(cfg: &OptConfig, run: F) -> (usize, Vec<Restart<T>>)
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Restart<T> + Sync + Send,
{
    let outcomes = par::map_indexed(cfg.restarts, cfg.exec, |i| {
        let mut r = rng::seeded_rng(cfg.seed, i as u64);
        run(i, &mut r)
    });
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].value || outcomes[best].value.is_nan() {
            best = i;
        }
    }
    (best, outcomes)
}

pub(crate) fn random_point(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len)
        .map(|_| rand::Rng::sample(rng, rand_distr::StandardNormal))
        .collect()
}

/// Real coordinates `(re, im, re, im, ...)` to a complex vector.
pub(crate) fn to_vect(x: &[f64]) -> Vect {
    Vect::from_iterator(x.len() / 2, x.chunks(2).map(|c| C64::new(c[0], c[1])))
}

pub(crate) fn from_vect(v: &Vect) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// `W W†` for the `d×d` matrix `W` read row-major from `x` (unit norm `x`
/// gives a unit-trace result).
pub(crate) fn to_density(x: &[f64], d: usize) -> Mat {
    let w = Mat::from_fn(d, d, |i, j| {
        C64::new(x[2 * (i * d + j)], x[2 * (i * d + j) + 1])
    });
    &w * w.adjoint()
}
