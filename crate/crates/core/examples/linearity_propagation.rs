//! Exact teleportation of two non-orthogonal states carries over to every
//! superposition of them.

use telecheck::qstate::{haar_random_pure, seeded_rng, SuperpositionSpec};
use telecheck::teleport::{bbcjpw_protocol, linearity_check, maximal_channel};

fn main() -> telecheck::Result<()> {
    let (chi1, chi2) = (haar_random_pure(2, 1), haar_random_pure(2, 2));
    println!("|<chi1|chi2>| = {:.6}", chi1.overlap(&chi2).norm());
    let mut rng = seeded_rng(9);
    let specs: Vec<SuperpositionSpec> = (0..20).map(|_| SuperpositionSpec::random(&chi1, &chi2, &mut rng)).collect();
    let outcomes = linearity_check(&bbcjpw_protocol(), &maximal_channel(), &chi1, &chi2, &specs)?;
    let worst = outcomes.iter().map(|o| o.fidelity).fold(1.0, f64::min);
    let exact = outcomes.iter().filter(|o| o.exact).count();
    println!("{exact}/{} superpositions exact, worst fidelity {worst:.15}", outcomes.len());
    Ok(())
}
