//! Extreme pure states shared by two noncommuting qubit states.

use telecheck::qstate::{density_from_bloch, extreme_decomposition, BlochVector};

fn main() -> telecheck::Result<()> {
    let rho1 = density_from_bloch(&BlochVector::new([0.0, 0.0, 0.5])?)?;
    let rho2 = density_from_bloch(&BlochVector::new([0.5, 0.0, 0.0])?)?;
    let d = extreme_decomposition(&rho1, &rho2)?;
    println!("psi      = {:?}", d.psi.amplitudes());
    println!("phi      = {:?}", d.phi.amplitudes());
    println!("lambda1  = {:.12}", d.lambda1);
    println!("lambda2  = {:.12}", d.lambda2);
    println!("|<psi|phi>| = {:.12}", d.overlap());
    let (r1, r2) = d.residuals(&rho1, &rho2);
    println!("reconstruction residuals = {r1:.3e}, {r2:.3e}");
    Ok(())
}
