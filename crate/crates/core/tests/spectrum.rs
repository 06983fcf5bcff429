use std::f64::consts::TAU;

use polariton::numerics::linalg::hermitian_eig;
use polariton::spectrum::{
    build_jc_hamiltonian, closed_form_spectrum, eigen_energy, transition_frequencies, Branch, SystemParams,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = SystemParams> {
    (4e9..12e9f64, -0.1..0.1f64, 1e-3..0.1f64).prop_map(|(fr, d, gr)| {
        let omega_r = TAU * fr;
        SystemParams::new(omega_r * (1.0 + d), omega_r, omega_r * gr, 5).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_forms_match_diagonalization(p in params()) {
        let numeric = hermitian_eig(&build_jc_hamiltonian(&p).unwrap()).values;
        let closed = closed_form_spectrum(&p).unwrap();
        prop_assert_eq!(numeric.len(), closed.len());
        for (a, b) in numeric.iter().zip(&closed) {
            prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(p.omega_r), "{} vs {}", a, b);
        }
    }

    #[test]
    fn transition_sum_rules(p in params()) {
        for n in 1..p.n_max {
            let t = transition_frequencies(&p, n).unwrap();
            let two_wr = 2.0 * p.omega_r;
            prop_assert!((t.plus + t.minus - two_wr).abs() <= 1e-12 * two_wr);
            prop_assert!((t.up + t.down - two_wr).abs() <= 1e-12 * two_wr);
            let e = |k, b| eigen_energy(&p, k, b).unwrap();
            let diff = e(n + 1, Branch::Plus) - e(n, Branch::Plus);
            prop_assert!((t.plus - diff).abs() <= 1e-12 * two_wr);
        }
    }
}
