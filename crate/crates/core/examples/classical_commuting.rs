//! Measure-and-prepare teleports commuting states exactly with no
//! entanglement, and fails on anything else.

use telecheck::entanglement::concurrence;
use telecheck::qstate::{DensityMatrix, PureState};
use telecheck::teleport::{channel_ab_marginal, classical_commuting_protocol, product_channel, run_teleport};

fn main() -> telecheck::Result<()> {
    let p = classical_commuting_protocol(&[PureState::basis(2, 0), PureState::basis(2, 1)])?;
    let channel = product_channel();
    println!("channel concurrence {:.3}", concurrence(&channel_ab_marginal(&channel)?)?);
    for q in [0.0, 0.3, 0.8] {
        let rho = DensityMatrix::diagonal(&[q, 1.0 - q])?;
        println!("diag({q}, {}): fidelity {:.12}", 1.0 - q, run_teleport(&rho, &channel, &p, &rho)?.fidelity);
    }
    let plus = PureState::plus().density();
    println!("|+>: fidelity {:.12}", run_teleport(&plus, &channel, &p, &plus)?.fidelity);
    Ok(())
}
