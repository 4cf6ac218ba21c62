//! Entanglement measures along the angle family and for Werner states.

use std::f64::consts::PI;

use telecheck::entanglement::{angle_state, bell_states, entanglement_report, DEFAULT_TOL_MAXIMAL};
use telecheck::qstate::DensityMatrix;

fn main() -> telecheck::Result<()> {
    for k in 0..=4 {
        let rho = angle_state(k as f64 * PI / 16.0).density();
        let r = entanglement_report(&rho, DEFAULT_TOL_MAXIMAL)?;
        println!(
            "theta = {k}pi/16: E = {:.6} C = {:.6} EoF = {:.6} FEF = {:.6} maximal {}",
            r.entropy, r.concurrence, r.eof, r.fef, r.is_maximal
        );
    }
    let singlet = bell_states()[3].density();
    for p in [0.2, 1.0 / 3.0, 0.6, 1.0] {
        let werner = singlet.mix(&DensityMatrix::maximally_mixed(4), p)?;
        let r = entanglement_report(&werner, DEFAULT_TOL_MAXIMAL)?;
        println!("werner p = {p:.3}: C = {:.6} FEF = {:.6}", r.concurrence, r.fef);
    }
    Ok(())
}
