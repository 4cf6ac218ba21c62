//! The simplex optimizer on the Rosenbrock function.

use telecheck::optimize::{nelder_mead, NelderMeadOptions};

fn main() -> telecheck::Result<()> {
    let rosen = |x: &[f64]| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2));
    let opts = NelderMeadOptions { tol_x: 1e-12, tol_f: 1e-20, ..Default::default() };
    let r = nelder_mead(rosen, &[-1.2, 1.0], &opts)?;
    println!(
        "argmax {:?}, value {:.3e}, {} evaluations, converged {}",
        r.best_params, r.best_objective, r.evaluations, r.converged
    );
    Ok(())
}
