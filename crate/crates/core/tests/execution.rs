//! Parallel and sequential execution must give bit-identical results.

use qcost::capacity::{self, CostChannel, OptConfig};
use qcost::hyptest::stein_diagnostic;
use qcost::ppm::ppm_sweep;
use qcost::qcore::{CostObservable, DensityMatrix, PureState, QuantumChannel, DEFAULT_DIM_CAP};
use qcost::Exec;

fn both<T: PartialEq + std::fmt::Debug>(f: impl Fn(Exec) -> T) {
    assert_eq!(f(Exec::Parallel), f(Exec::Sequential));
}

#[test]
fn multistart_is_schedule_independent() {
    let ch = QuantumChannel::amplitude_damping(0.3).unwrap();
    let cc = CostChannel::new(
        ch,
        CostObservable::projector(2, 1),
        Some(PureState::basis(2, 0)),
    )
    .unwrap();
    both(|exec| {
        let cfg = OptConfig {
            restarts: 6,
            seed: 11,
            exec,
            ..OptConfig::default()
        };
        let r = capacity::holevo_capacity_cost(&cc, 0.2, &cfg).unwrap();
        (r.value, serde_json::to_string(&r.argmax).unwrap())
    });
}

#[test]
fn stein_rows_are_schedule_independent() {
    let rho = DensityMatrix::from_diag(&[0.8, 0.2]).unwrap();
    let sigma = QuantumChannel::amplitude_damping(0.4)
        .unwrap()
        .apply(&PureState::from_real(&[1.0, 1.0]).unwrap().density())
        .unwrap();
    both(|exec| stein_diagnostic(&rho, &sigma, 0.2, 7, DEFAULT_DIM_CAP, exec).unwrap());
}

#[test]
fn ppm_sweep_is_schedule_independent() {
    let ch = QuantumChannel::dephasing(0.2).unwrap();
    let minus = PureState::from_real(&[1.0, -1.0]).unwrap();
    let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
    let g = CostObservable::new(minus.density().into_mat()).unwrap();
    both(|exec| {
        let rows = ppm_sweep(
            &[2.0, 4.0, f64::INFINITY],
            &[2, 4, 6],
            &minus,
            &plus,
            0.1,
            &ch,
            &g,
            DEFAULT_DIM_CAP,
            exec,
        )
        .unwrap();
        qcost::ppm::sweep_csv(&rows)
    });
}
