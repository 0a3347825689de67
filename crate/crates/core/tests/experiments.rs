use qdiscord::discord::q_discord;
use qdiscord::entropy::QParam;
use qdiscord::experiments::{
    concavity_samples, random_scatter, run, ExperimentKind, ExperimentSpec, ParamGrid,
};
use qdiscord::linalg::Subsystem;
use qdiscord::states::{random_mixed, RngStream};

#[test]
fn samples_depend_only_on_seed_and_index() {
    let spec = ExperimentSpec::new(ExperimentKind::ConcavityPdf)
        .with_q_values(&[0.5])
        .unwrap()
        .with_seed(9);
    let short = concavity_samples(&spec.clone().with_samples(50)).unwrap();
    let long = concavity_samples(&spec.with_samples(120)).unwrap();
    assert_eq!(short[0].1[..], long[0].1[..50]);
}

#[test]
fn scatter_rows_match_direct_evaluation() {
    let mut spec = ExperimentSpec::new(ExperimentKind::RandomScatter)
        .with_q_values(&[2.0])
        .unwrap()
        .with_samples(5)
        .with_seed(11);
    spec.search.grid_theta = 16;
    spec.search.grid_phi = 32;
    let table = random_scatter(&spec).unwrap();
    assert_eq!(table.header(), ["state_id", "q", "D_1", "D_q"]);
    let rho = random_mixed(4, &mut RngStream::new(11, 3));
    let d2 = qdiscord::discord::q_discord_with(&rho, QParam::new(2.0).unwrap(), &spec.search)
        .unwrap()
        .d_q;
    assert_eq!(table.rows()[3][3], d2);
    assert!((q_discord(&rho, QParam::new(2.0).unwrap()).unwrap().d_q - d2).abs() < 1e-9);
}

#[test]
fn conditioning_switch_changes_the_functional() {
    let spec = ExperimentSpec::new(ExperimentKind::ConcavityPdf)
        .with_q_values(&[2.0])
        .unwrap()
        .with_samples(20);
    let mut on_b = spec.clone();
    on_b.conditioning = Subsystem::B;
    let a = concavity_samples(&spec).unwrap();
    let b = concavity_samples(&on_b).unwrap();
    assert_ne!(a, b);
}

#[test]
fn every_kind_runs_at_small_scale() {
    for kind in ExperimentKind::ALL {
        let mut spec = ExperimentSpec::new(kind).with_samples(8).with_bins(4);
        spec.search.grid_theta = 8;
        spec.search.grid_phi = 16;
        spec.grid = match spec.grid {
            ParamGrid::Linear { .. } => ParamGrid::Linear { points: 5 },
            ParamGrid::Rect { .. } => ParamGrid::Rect {
                n_alpha: 4,
                n_beta: 4,
            },
            other => other,
        };
        let table = run(&spec).unwrap();
        assert!(!table.rows().is_empty(), "{kind}");
        assert!(table.rows().iter().flatten().all(|v| v.is_finite()));
    }
}
