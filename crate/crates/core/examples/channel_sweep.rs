//! Worst-case fidelity of the pair {|0>, |+>} over non-maximal angle channels.
//!
//! Usage: cargo run --release --example channel_sweep -- [starts] [seed]

use std::f64::consts::PI;

use telecheck::optimize::{sweep_channel_angle, sweep_csv};
use telecheck::qstate::PureState;

fn main() -> telecheck::Result<()> {
    let mut args = std::env::args().skip(1);
    let starts = args.next().and_then(|s| s.parse().ok()).unwrap_or(32);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let thetas: Vec<f64> = (1..=4).map(|k| k as f64 * PI / 16.0).collect();
    let start = std::time::Instant::now();
    let rows = sweep_channel_angle(&thetas, &PureState::basis(2, 0), &PureState::plus(), starts, seed)?;
    print!("{}", sweep_csv(&rows));
    for r in &rows {
        let bell = (1.0 + (2.0 * r.theta).sin()) / 2.0;
        println!("theta = {:.6}: best {:.9}, standard protocol {:.9}", r.theta, r.best_min_fidelity, bell);
    }
    eprintln!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
