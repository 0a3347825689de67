use proptest::prelude::*;

use qdiscord::discord::{c_q, i_q, j_q, q_discord, MeasurementBasis};
use qdiscord::entropy::QParam;
use qdiscord::linalg::kron;
use qdiscord::states::{random_mixed, random_unitary, RngStream};

fn q_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![0.3f64..0.95, Just(1.0), 1.05f64..4.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimum_dominates_every_basis(
        seed in any::<u64>(),
        qv in q_strategy(),
        theta in 0.0..std::f64::consts::FRAC_PI_2,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let q = QParam::new(qv).unwrap();
        let rho = random_mixed(4, &mut RngStream::new(seed, 0));
        let (best, _) = c_q(&rho, q).unwrap();
        let other = j_q(&rho, &MeasurementBasis::new(theta, phi).unwrap(), q).unwrap();
        prop_assert!(best >= other - 1e-12, "{best} < {other}");
    }

    #[test]
    fn local_unitaries_leave_discord_unchanged(seed in any::<u64>(), qv in q_strategy()) {
        let q = QParam::new(qv).unwrap();
        let mut rng = RngStream::new(seed, 1);
        let rho = random_mixed(4, &mut rng);
        let u = kron(&random_unitary(2, &mut rng), &random_unitary(2, &mut rng));
        let rotated = rho.conjugate(&u).unwrap();
        let (a, b) = (q_discord(&rho, q).unwrap(), q_discord(&rotated, q).unwrap());
        prop_assert!((a.i_q - b.i_q).abs() < 1e-10);
        prop_assert!((a.d_q - b.d_q).abs() < 1e-7, "{} vs {}", a.d_q, b.d_q);
    }

    #[test]
    fn discord_nonnegative_below_one(seed in any::<u64>(), qv in 0.2f64..0.99) {
        let rho = random_mixed(4, &mut RngStream::new(seed, 2));
        let r = q_discord(&rho, QParam::new(qv).unwrap()).unwrap();
        prop_assert!(r.d_q >= -1e-9, "D_{qv} = {}", r.d_q);
    }

    #[test]
    fn classical_part_bounded_by_total(seed in any::<u64>(), qv in q_strategy()) {
        let q = QParam::new(qv).unwrap();
        let rho = random_mixed(4, &mut RngStream::new(seed, 3));
        let r = q_discord(&rho, q).unwrap();
        prop_assert!((r.i_q - i_q(&rho, q).unwrap()).abs() < 1e-14);
        prop_assert!((r.theta_raw - (r.i_q - r.c_q)).abs() < 1e-14);
    }
}
