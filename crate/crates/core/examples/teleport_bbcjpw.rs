//! Standard teleportation over the maximally entangled channel, then over
//! weaker channels, for a few inputs and on Haar average.

use std::f64::consts::PI;

use telecheck::qstate::{haar_random_pure, PureState};
use telecheck::teleport::{angle_channel, average_fidelity, bbcjpw_protocol, maximal_channel, run_teleport};

fn main() -> telecheck::Result<()> {
    let p = bbcjpw_protocol();
    let inputs = [("|0>", PureState::basis(2, 0)), ("|+>", PureState::plus()), ("haar", haar_random_pure(2, 3))];
    for (name, chi) in &inputs {
        let out = run_teleport(&chi.density(), &maximal_channel(), &p, &chi.density())?;
        println!("{name:>5}: fidelity {:.15} exact {}", out.fidelity, out.exact);
    }
    for k in [1, 2, 4] {
        let theta = k as f64 * PI / 16.0;
        let avg = average_fidelity(&p, &angle_channel(theta), 10_000, 0)?;
        println!("theta = {k}pi/16: average fidelity {avg:.4} (closed form {:.4})", (2.0 + (2.0 * theta).sin()) / 3.0);
    }
    Ok(())
}
