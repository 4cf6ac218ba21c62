//! Stinespring dilation of a random local protocol and its agreement with
//! the Kraus form.

use telecheck::qchannel::{dilate, random_local_protocol};
use telecheck::qstate::{random_density, seeded_rng};

fn main() -> telecheck::Result<()> {
    let mut rng = seeded_rng(11);
    let p = random_local_protocol(4, 4, 3, &mut rng)?;
    let d = dilate(&p)?;
    println!("{} Kraus pairs, system dim {}, environment dim {}", p.len(), d.system_dim, d.env_dim);
    println!("unitarity residual {:.3e}", d.unitarity_residual());
    for _ in 0..3 {
        let rho = random_density(16, 16, &mut rng);
        let diff = d.apply_channel(rho.matrix())?.distance(&p.apply_raw(rho.matrix())?);
        println!("Tr_E U(rho x |0><0|)U^dagger vs Kraus map: {diff:.3e}");
    }
    Ok(())
}
