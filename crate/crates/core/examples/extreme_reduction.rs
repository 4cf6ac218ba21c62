//! Exactness on two mixed inputs forces exactness on their extreme pure states.

use std::f64::consts::PI;

use telecheck::qstate::{density_from_bloch, BlochVector};
use telecheck::teleport::{angle_channel, bbcjpw_protocol, extreme_reduction_check, maximal_channel};

fn main() -> telecheck::Result<()> {
    let rho1 = density_from_bloch(&BlochVector::new([0.1, 0.2, 0.6])?)?;
    let rho2 = density_from_bloch(&BlochVector::new([0.5, -0.3, 0.1])?)?;
    for (name, channel) in [("maximal", maximal_channel()), ("pi/8", angle_channel(PI / 8.0))] {
        let rep = extreme_reduction_check(&bbcjpw_protocol(), &channel, &rho1, &rho2)?;
        let [f1, f2, fp, ff] = rep.fidelities();
        println!(
            "{name:>8}: F(rho1)={f1:.9} F(rho2)={f2:.9} F(psi)={fp:.9} F(phi)={ff:.9} implication {}",
            rep.implication_holds
        );
    }
    Ok(())
}
