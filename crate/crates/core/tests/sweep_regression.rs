//! Frozen targets from the independent SciPy oracle in `oracles/sweep_oracle.py`
//! (output in `oracles/sweep_oracle_output.txt`).

use std::f64::consts::PI;

use telecheck::optimize::{pair_objective, sweep_channel_angle, ProtocolParams};
use telecheck::qstate::PureState;
use telecheck::teleport::angle_channel;

const ORACLE: [(f64, f64); 3] = [
    (PI / 16.0, 0.975_586_496_820_177_7),
    (PI / 8.0, 0.994_609_287_871_046_7),
    (3.0 * PI / 16.0, 0.999_637_723_407_407_9),
];

#[test]
fn sweep_matches_oracle_and_stays_below_one() {
    let (c1, c2) = (PureState::basis(2, 0), PureState::plus());
    let thetas: Vec<f64> = ORACLE.iter().map(|(t, _)| *t).collect();
    let rows = sweep_channel_angle(&thetas, &c1, &c2, 32, 0).unwrap();
    for (row, (theta, target)) in rows.iter().zip(ORACLE) {
        assert_eq!(row.theta, theta);
        assert!((row.best_min_fidelity - target).abs() < 5e-3, "theta {theta}: {} vs {target}", row.best_min_fidelity);
        assert!(row.best_min_fidelity < 1.0 - 1e-6);
        if theta <= PI / 8.0 {
            assert!(row.best_min_fidelity < 1.0 - 1e-3);
        }
        // The reported value is realized by the returned protocol.
        let again = pair_objective(&row.best_params, &angle_channel(theta), &c1, &c2).unwrap();
        assert!((again - row.best_min_fidelity).abs() < 1e-12);
    }
}

#[test]
fn optimum_beats_standard_protocol() {
    let (c1, c2) = (PureState::basis(2, 0), PureState::plus());
    for (theta, _) in ORACLE {
        let standard = pair_objective(&ProtocolParams::bbcjpw(), &angle_channel(theta), &c1, &c2).unwrap();
        assert!((standard - (1.0 + (2.0 * theta).sin()) / 2.0).abs() < 1e-12);
    }
}
