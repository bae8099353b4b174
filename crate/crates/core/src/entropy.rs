//! Entropic quantities in bits.

use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::linalg::{self, Mat};
use crate::qcore::{canonical_purification, DensityMatrix, Ensemble, PureState, QuantumChannel};

/// Weight of `ρ` on `ker σ` above which `supp ρ ⊄ supp σ`.
pub const SUPPORT_LEAK_TOL: f64 = 1e-10;

pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    linalg::entropy_of_spectrum(&rho.eigenvalues())
}

pub(crate) fn entropy_mat(m: &Mat) -> f64 {
    linalg::entropy_of_spectrum(&linalg::eigvalsh(m))
}

/// Eigendecomposition of a fixed second argument, reused across many
/// relative entropies against it.
pub(crate) struct Support {
    eig: linalg::Eigh,
    cut: f64,
}

impl Support {
    pub(crate) fn of(sigma: &Mat) -> Self {
        let eig = linalg::eigh(sigma);
        let cut = linalg::support_threshold(&eig.values);
        Support { eig, cut }
    }

    /// `⟨u_j|ρ|u_j⟩` for every eigenvector `u_j` of σ.
    fn diag_of(&self, rho: &Mat) -> Vec<f64> {
        let u = &self.eig.vectors;
        let ru = rho * u;
        (0..u.ncols())
            .map(|j| u.column(j).dotc(&ru.column(j)).re)
            .collect()
    }

    fn leak(&self, diag: &[f64]) -> f64 {
        self.eig
            .values
            .iter()
            .zip(diag)
            .filter(|(&mu, _)| mu <= self.cut)
            .map(|(_, &w)| w)
            .sum()
    }

    pub(crate) fn kernel_weight(&self, rho: &Mat) -> f64 {
        self.leak(&self.diag_of(rho))
    }

    /// `D(ρ‖σ)` against the stored σ.
    pub(crate) fn relative_entropy(&self, rho: &Mat) -> ExtendedReal {
        let diag = self.diag_of(rho);
        if self.leak(&diag) > SUPPORT_LEAK_TOL {
            return ExtendedReal::Infinity;
        }
        let cross: f64 = self
            .eig
            .values
            .iter()
            .zip(&diag)
            .filter(|(&mu, _)| mu > self.cut)
            .map(|(&mu, &w)| w * mu.log2())
            .sum();
        ExtendedReal::Finite(-entropy_mat(rho) - cross)
    }
}

/// `tr[P_ker(σ) ρ]`: how much of `ρ` lies outside the support of `σ`.
pub fn kernel_weight(rho: &Mat, sigma: &Mat) -> f64 {
    Support::of(sigma).kernel_weight(rho)
}

pub(crate) fn relative_entropy_mat(rho: &Mat, sigma: &Mat) -> ExtendedReal {
    Support::of(sigma).relative_entropy(rho)
}

/// `D(ρ‖σ) = tr ρ(log ρ − log σ)`, `+∞` on a support violation.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> ExtendedReal {
    assert_eq!(
        rho.dim(),
        sigma.dim(),
        "relative entropy of states of different dimension"
    );
    relative_entropy_mat(rho.mat(), sigma.mat())
}

pub(crate) fn max_relative_entropy_mat(rho: &Mat, sigma: &Mat) -> ExtendedReal {
    let s = Support::of(sigma);
    if s.kernel_weight(rho) > SUPPORT_LEAK_TOL {
        return ExtendedReal::Infinity;
    }
    let keep: Vec<usize> = (0..s.eig.values.len())
        .filter(|&j| s.eig.values[j] > s.cut)
        .collect();
    let n = keep.len();
    let scaled = Mat::from_fn(rho.nrows(), n, |i, c| {
        let j = keep[c];
        s.eig.vectors[(i, j)] / s.eig.values[j].sqrt()
    });
    let b = scaled.adjoint() * rho * &scaled;
    let top = linalg::eigvalsh(&b)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    ExtendedReal::Finite(top.log2())
}

/// `D_max(ρ‖σ) = log₂ min{λ : ρ ≤ λσ}`.
pub fn max_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> ExtendedReal {
    assert_eq!(
        rho.dim(),
        sigma.dim(),
        "max-relative entropy of states of different dimension"
    );
    max_relative_entropy_mat(rho.mat(), sigma.mat())
}

fn check_input(dim: usize, channel: &QuantumChannel) -> Result<()> {
    if dim != channel.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "input dimension {dim} does not match channel input {}",
            channel.dim_in()
        )));
    }
    Ok(())
}

/// `I(X;B) = Σ_x p_x D(N(ρ_x)‖N(ρ̄))`.
pub fn holevo_information(ens: &Ensemble, channel: &QuantumChannel) -> Result<ExtendedReal> {
    check_input(ens.dim(), channel)?;
    let avg = channel.apply_mat(ens.average().mat());
    let mut total = 0.0;
    for (p, state) in ens.entries() {
        if *p == 0.0 {
            continue;
        }
        match relative_entropy_mat(&channel.apply_mat(state.mat()), &avg) {
            ExtendedReal::Finite(d) => total += p * d,
            other => return Ok(other),
        }
    }
    Ok(ExtendedReal::Finite(total))
}

/// `(id_R ⊗ N)(φ)` for the canonical purification `φ` of `input`, on `R ⊗ B`.
pub fn ea_joint_state(input: &DensityMatrix, channel: &QuantumChannel) -> Result<Mat> {
    check_input(input.dim(), channel)?;
    let d = input.dim();
    let dout = channel.dim_out();
    let phi = canonical_purification(input);
    let root = Mat::from_fn(d, d, |i, j| phi.vec()[j * d + i]);
    let mut joint = Mat::zeros(d * dout, d * dout);
    for k in channel.kraus() {
        let km = k * &root;
        let v = linalg::Vect::from_fn(d * dout, |idx, _| km[(idx % dout, idx / dout)]);
        joint += linalg::outer(&v);
    }
    Ok(joint)
}

/// `I(A;B) = S(φ_in) + S(N(φ_in)) − S((id⊗N)(φ))`.
pub fn mutual_information_ea(input: &DensityMatrix, channel: &QuantumChannel) -> Result<f64> {
    let joint = ea_joint_state(input, channel)?;
    Ok(von_neumann(input) + entropy_mat(&channel.apply_mat(input.mat())) - entropy_mat(&joint))
}

/// `I(R⟩B) = S(N(φ_in)) − S((id⊗N)(φ))`.
pub fn coherent_information(input: &DensityMatrix, channel: &QuantumChannel) -> Result<f64> {
    let joint = ea_joint_state(input, channel)?;
    Ok(entropy_mat(&channel.apply_mat(input.mat())) - entropy_mat(&joint))
}

/// `D(φ_RB ‖ φ_R ⊗ N(ψ⁰))` with `φ` the canonical purification of `input`.
pub fn ea_relative_entropy(
    input: &DensityMatrix,
    channel: &QuantumChannel,
    zero: &PureState,
) -> Result<ExtendedReal> {
    check_input(zero.dim(), channel)?;
    let joint = ea_joint_state(input, channel)?;
    let reference = linalg::partial_trace_second(&joint, input.dim(), channel.dim_out());
    let baseline = channel.apply_mat(zero.density().mat());
    Ok(relative_entropy_mat(
        &joint,
        &linalg::kron(&reference, &baseline),
    ))
}

/// `N_N(ψ,ψ⁰) = D(N(ψ)‖N(ψ⁰)) − D(N^c(ψ)‖N^c(ψ⁰))`; fails when both terms
/// are infinite.
pub fn private_information_term(
    psi: &PureState,
    psi0: &PureState,
    channel: &QuantumChannel,
) -> Result<ExtendedReal> {
    check_input(psi.dim(), channel)?;
    check_input(psi0.dim(), channel)?;
    let (b, e) = private_terms(psi.density().mat(), psi0.density().mat(), channel);
    b.checked_sub(e)
}

fn private_terms(rho: &Mat, rho0: &Mat, channel: &QuantumChannel) -> (ExtendedReal, ExtendedReal) {
    let comp = channel.complementary();
    (
        relative_entropy_mat(&channel.apply_mat(rho), &channel.apply_mat(rho0)),
        relative_entropy_mat(&comp.apply_mat(rho), &comp.apply_mat(rho0)),
    )
}

/// Value of `N_N` where an `∞ − ∞` is settled by comparing how much of each
/// output falls outside the support of its baseline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrivateTerm {
    pub value: ExtendedReal,
    /// True when both relative entropies were infinite.
    pub by_divergence_weights: bool,
}

/// Baseline outputs `N(ρ⁰)` and `N^c(ρ⁰)`, prepared once for repeated
/// evaluations of `N_N(·, ρ⁰)`.
pub(crate) struct PrivateBaseline {
    channel: QuantumChannel,
    comp: QuantumChannel,
    out: Support,
    env: Support,
}

impl PrivateBaseline {
    pub(crate) fn new(rho0: &Mat, channel: &QuantumChannel) -> Self {
        let comp = channel.complementary();
        let out = Support::of(&channel.apply_mat(rho0));
        let env = Support::of(&comp.apply_mat(rho0));
        PrivateBaseline {
            channel: channel.clone(),
            comp,
            out,
            env,
        }
    }

    /// `N_N(ρ,ρ⁰)`; when both terms diverge, mixing the pulse into the
    /// baseline with weight `p` makes each grow like `w·log₂(1/p)` with `w`
    /// the output weight outside the baseline support, so the sign of
    /// `w_B − w_E` decides. Equal weights stay indeterminate.
    pub(crate) fn term(&self, rho: &Mat) -> Result<PrivateTerm> {
        let ob = self.channel.apply_mat(rho);
        let oe = self.comp.apply_mat(rho);
        let (b, e) = (
            self.out.relative_entropy(&ob),
            self.env.relative_entropy(&oe),
        );
        if let Ok(value) = b.checked_sub(e) {
            return Ok(PrivateTerm {
                value,
                by_divergence_weights: false,
            });
        }
        let diff = self.out.kernel_weight(&ob) - self.env.kernel_weight(&oe);
        let value = if diff > SUPPORT_LEAK_TOL {
            ExtendedReal::Infinity
        } else if diff < -SUPPORT_LEAK_TOL {
            ExtendedReal::NegInfinity
        } else {
            return Err(Error::Indeterminate);
        };
        Ok(PrivateTerm {
            value,
            by_divergence_weights: true,
        })
    }
}

/// `N_N(ρ,ρ⁰)` for a possibly mixed pulse, with the `∞ − ∞` case settled by
/// the leading divergence weights (see [`PrivateTerm`]).
pub fn private_information_resolved(
    rho: &DensityMatrix,
    rho0: &DensityMatrix,
    channel: &QuantumChannel,
) -> Result<PrivateTerm> {
    check_input(rho.dim(), channel)?;
    check_input(rho0.dim(), channel)?;
    PrivateBaseline::new(rho0.mat(), channel).term(rho.mat())
}

/// Classical relative entropy of two probability vectors, in bits.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> ExtendedReal {
    let mut d = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return ExtendedReal::Infinity;
        }
        d += pi * (pi / qi).log2();
    }
    ExtendedReal::Finite(d)
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    h(p) + h(1.0 - p)
}
