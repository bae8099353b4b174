//! Seeded randomness for restarts and test instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Mat, Vect, C64};
use crate::qcore::{DensityMatrix, PureState, QuantumChannel};

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_pure<R: Rng>(rng: &mut R, dim: usize) -> PureState {
    let v = Vect::from_fn(dim, |_, _| gaussian_complex(rng));
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// Full-rank random state `WW†/tr(WW†)` from a Ginibre matrix.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let w = Mat::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let m = &w * w.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m / C64::new(tr, 0.0)).expect("Ginibre product is a state")
}

/// Random channel from the first `dim_in` columns of a random isometry.
pub fn random_channel<R: Rng>(
    rng: &mut R,
    dim_in: usize,
    dim_out: usize,
    n_kraus: usize,
) -> QuantumChannel {
    let rows = dim_out * n_kraus;
    assert!(rows >= dim_in, "isometry needs dim_out·n_kraus ≥ dim_in");
    let a = Mat::from_fn(rows, dim_in, |_, _| gaussian_complex(rng));
    let q = a.qr().q();
    let kraus = (0..n_kraus)
        .map(|k| q.rows(k * dim_out, dim_out).into_owned())
        .collect();
    QuantumChannel::new(dim_in, dim_out, kraus).expect("isometry blocks form a channel")
}
