mod common;

use common::{adaptive, oracle_cases, trapezoid, TRAPEZOID_POINTS};
use qdslow::ensemble::QuadratureOptions;

#[test]
fn adaptive_matches_trapezoid_oracle() {
    let opts = QuadratureOptions::default();
    for (i, c) in oracle_cases(25, 7).iter().enumerate() {
        let reference = trapezoid(c, TRAPEZOID_POINTS);
        let (value, calls) = adaptive(c, &opts);
        let err = (value - reference).norm() / reference.norm();
        println!("{i:2} {:?} rabi/g={:.3} dp/g={:.2} err={err:.2e} calls={calls}", c.params.scheme, c.rabi / c.params.dephasing.g13, c.delta_p / c.params.dephasing.g13);
        assert!(err < 1e-5, "case {i}: relative error {err:e}");
        assert!(calls <= 10_000, "case {i}: {calls} kernel calls");
    }
}
