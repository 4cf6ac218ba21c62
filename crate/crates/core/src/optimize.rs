//! Worst-case fidelity optimization over a one-round protocol family.
//!
//! Alice makes a complete orthogonal measurement on `(1, A)` given by the
//! columns of `exp(i H)`, with `H` expanded in the sixteen Pauli products.
//! Bob applies an outcome-dependent SU(2) rotation to `B` and swaps it onto
//! particle 2. The family contains the standard Bell-measurement protocol.
//!
//! Every reported fidelity is a lower bound realized by an explicit protocol;
//! nothing here bounds what protocols outside the family could reach.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::entanglement::{angle_state, entropy_of_entanglement};
use crate::error::{Error, Result};
use crate::fmt::sig17;
use crate::linalg::{dagger, eig_hermitian, inner, kron, paulis, ComplexMatrix, C64, ZERO};
use crate::qchannel::LocalKrausProtocol;
use crate::qstate::{seeded_rng, DensityMatrix, PureState, NONCOMMUTING_TOL};
use crate::teleport::{angle_channel, bob_transfer, derive_seed};

pub const ALICE_PARAMS: usize = 16;
pub const BOB_PARAMS: usize = 12;
pub const N_PARAMS: usize = ALICE_PARAMS + BOB_PARAMS;

/// Parameters of one protocol in the family.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolParams {
    /// Coefficients of the Hermitian generator in the basis `σ_a ⊗ σ_b`.
    pub alice: [f64; ALICE_PARAMS],
    /// Axis-angle vectors (angle = length) of Bob's rotation per outcome.
    pub bob: [[f64; 3]; 4],
}

impl ProtocolParams {
    pub fn from_slice(x: &[f64]) -> Result<Self> {
        if x.len() != N_PARAMS {
            return Err(Error::InvalidArgument(format!("expected {N_PARAMS} parameters, got {}", x.len())));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteParameter(i));
        }
        let mut alice = [0.0; ALICE_PARAMS];
        alice.copy_from_slice(&x[..ALICE_PARAMS]);
        let mut bob = [[0.0; 3]; 4];
        for (k, b) in bob.iter_mut().enumerate() {
            b.copy_from_slice(&x[ALICE_PARAMS + 3 * k..ALICE_PARAMS + 3 * k + 3]);
        }
        Ok(Self { alice, bob })
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.alice.iter().copied().chain(self.bob.iter().flatten().copied()).collect()
    }

    /// Zero generator and no corrections: a computational-basis measurement.
    pub fn zero() -> Self {
        Self { alice: [0.0; ALICE_PARAMS], bob: [[0.0; 3]; 4] }
    }

    /// Parameters whose decoded protocol is the Bell measurement with Pauli corrections.
    ///
    /// The real symmetric Bell matrix `B` (columns `Φ+, Ψ+, Ψ-, Φ-`) squares to
    /// the identity, so `B = exp(i π (I - B) / 2)`.
    pub fn bbcjpw() -> Self {
        let b = bell_matrix();
        let h = (&ComplexMatrix::identity(4) - &b).scale_real(PI / 2.0);
        let basis = generator_basis();
        let mut alice = [0.0; ALICE_PARAMS];
        for (k, g) in basis.iter().enumerate() {
            alice[k] = (&h * g).trace().re / 4.0;
        }
        // Corrections for Φ+, Ψ+, Ψ-, Φ-: I, X, Y, Z (up to phase).
        Self { alice, bob: [[0.0; 3], [PI, 0.0, 0.0], [0.0, PI, 0.0], [0.0, 0.0, PI]] }
    }
}

fn bell_matrix() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[&[h, 0.0, 0.0, h], &[0.0, h, h, 0.0], &[0.0, h, -h, 0.0], &[h, 0.0, 0.0, -h]])
}

/// `σ_a ⊗ σ_b` for `a, b` in `I, X, Y, Z`; orthogonal with `Tr(G G') = 4 δ`.
fn generator_basis() -> Vec<ComplexMatrix> {
    let [x, y, z] = paulis();
    let singles = [ComplexMatrix::identity(2), x, y, z];
    let mut out = Vec::with_capacity(16);
    for a in &singles {
        for b in &singles {
            out.push(kron(a, b));
        }
    }
    out
}

/// `exp(i H)` for `H = Σ_k p_k G_k`.
pub fn alice_unitary(alice: &[f64; ALICE_PARAMS]) -> ComplexMatrix {
    thread_local! {
        static BASIS: Vec<ComplexMatrix> = generator_basis();
    }
    let h = BASIS.with(|basis| {
        let mut h = ComplexMatrix::zeros(4, 4);
        for (p, g) in alice.iter().zip(basis) {
            if *p != 0.0 {
                h = &h + &g.scale_real(*p);
            }
        }
        h
    });
    let eig = eig_hermitian(&h).expect("generator is Hermitian by construction");
    eig.reconstruct_with(|l| C64::from_polar(1.0, l))
}

/// `cos(|v|/2) I - i sin(|v|/2) (v/|v|)·σ`.
pub fn bob_unitary(v: &[f64; 3]) -> ComplexMatrix {
    let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if angle == 0.0 {
        return ComplexMatrix::identity(2);
    }
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let n = v.map(|x| x / angle);
    let [sx, sy, sz] = paulis();
    let gen = &(&sx.scale_real(n[0]) + &sy.scale_real(n[1])) + &sz.scale_real(n[2]);
    &ComplexMatrix::identity(2).scale_real(c) + &gen.scale(C64::new(0.0, -s))
}

/// Projectors onto the columns of Alice's unitary, each paired with Bob's transfer.
pub fn decode_protocol(params: &ProtocolParams) -> Result<LocalKrausProtocol> {
    if let Some(i) = params.to_vec().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteParameter(i));
    }
    let u = alice_unitary(&params.alice);
    let pairs =
        (0..4).map(|k| (ComplexMatrix::projector(&u.col(k)), bob_transfer(&bob_unitary(&params.bob[k])))).collect();
    LocalKrausProtocol::new(pairs, 4, 4)
}

/// `min_j F(χ_j)` for a fixed channel and pair, evaluated on state vectors.
///
/// The channel is split into its spectral components once; each evaluation
/// then costs a handful of 16-dimensional vector operations.
pub struct PairObjective {
    components: Vec<(f64, Vec<C64>)>,
    inputs: [PureState; 2],
}

impl PairObjective {
    pub fn new(channel: &DensityMatrix, chi1: &PureState, chi2: &PureState) -> Result<Self> {
        if channel.dim() != 8 || chi1.dim() != 2 || chi2.dim() != 2 {
            return Err(Error::DimensionMismatch("pair objective needs qubit inputs and a dim-8 channel".into()));
        }
        let overlap = chi1.overlap(chi2).norm();
        if overlap <= NONCOMMUTING_TOL {
            return Err(Error::OrthogonalInputs { overlap });
        }
        let eig = eig_hermitian(channel.matrix())?;
        let components = (0..8)
            .filter(|&k| eig.eigenvalues[k] > 1e-14)
            .map(|k| (eig.eigenvalues[k], eig.eigenvectors.col(k)))
            .collect();
        Ok(Self { components, inputs: [chi1.clone(), chi2.clone()] })
    }

    /// Fidelity of each input under the decoded protocol.
    pub fn fidelities(&self, params: &ProtocolParams) -> [f64; 2] {
        let u = alice_unitary(&params.alice);
        let bobs: Vec<ComplexMatrix> = params.bob.iter().map(|v| bob_transfer(&bob_unitary(v))).collect();
        let alice_cols: Vec<Vec<C64>> = (0..4).map(|k| u.col(k)).collect();
        self.inputs.clone().map(|chi| {
            let chi_amp = chi.amplitudes();
            let mut f = 0.0;
            for (weight, c) in &self.components {
                let joint = crate::linalg::kron_vec(chi_amp, c);
                for (col, bob) in alice_cols.iter().zip(&bobs) {
                    // Project (1, A) onto the measurement vector, leaving a vector on (B, 2).
                    let mut w = [ZERO; 4];
                    for (x, ux) in col.iter().enumerate() {
                        let cu = ux.conj();
                        for (r, wr) in w.iter_mut().enumerate() {
                            *wr += cu * joint[x * 4 + r];
                        }
                    }
                    let v = bob.apply(&w);
                    for b in 0..2 {
                        let amp = inner(chi_amp, &v[b * 2..b * 2 + 2]);
                        f += weight * amp.norm_sqr();
                    }
                }
            }
            f
        })
    }

    pub fn evaluate(&self, params: &ProtocolParams) -> f64 {
        let [f1, f2] = self.fidelities(params);
        f1.min(f2)
    }
}

pub fn pair_objective(
    params: &ProtocolParams,
    channel: &DensityMatrix,
    chi1: &PureState,
    chi2: &PureState,
) -> Result<f64> {
    Ok(PairObjective::new(channel, chi1, chi2)?.evaluate(params))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadOptions {
    pub tol_x: f64,
    pub tol_f: f64,
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { tol_x: 1e-8, tol_f: 1e-10, max_evals: 20_000, initial_step: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptResult<P> {
    pub best_params: P,
    pub best_objective: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Maximizes `objective` with the Nelder-Mead simplex method (coefficients
/// 1, 2, 0.5, 0.5), minimizing its negation internally.
pub fn nelder_mead<F>(objective: F, init: &[f64], options: &NelderMeadOptions) -> Result<OptResult<Vec<f64>>>
where
    F: Fn(&[f64]) -> f64,
{
    let n = init.len();
    if n == 0 {
        return Err(Error::InvalidArgument("Nelder-Mead needs at least one variable".into()));
    }
    if !(options.tol_x > 0.0 && options.tol_f > 0.0 && options.max_evals > 0 && options.initial_step > 0.0) {
        return Err(Error::InvalidArgument("Nelder-Mead options must be positive".into()));
    }
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let evals = std::cell::Cell::new(0usize);
    let cost = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = -objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(init.to_vec());
    for i in 0..n {
        let mut v = init.to_vec();
        v[i] += options.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| cost(v)).collect();
    let mut converged = false;

    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        if spread.abs() < options.tol_f || diameter < options.tol_x {
            converged = true;
            break;
        }
        if evals.get() >= options.max_evals {
            break;
        }

        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64).collect();
        let toward = |coef: f64, from: &[f64]| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, w)| c + coef * (c - w)).collect()
        };
        let worst = simplex[n].clone();
        let reflected = toward(REFLECT, &worst);
        let fr = cost(&reflected);
        if fr < values[0] {
            let expanded = toward(EXPAND, &worst);
            let fe = cost(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        // Outside contraction when the reflection beats the worst point, inside otherwise.
        let (candidate, fc) = if fr < values[n] {
            let c = toward(REFLECT * CONTRACT, &worst);
            let fc = cost(&c);
            (c, fc)
        } else {
            let c = toward(-CONTRACT, &worst);
            let fc = cost(&c);
            (c, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = candidate;
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            simplex[i] = best.iter().zip(&simplex[i]).map(|(b, v)| b + SHRINK * (v - b)).collect();
            values[i] = cost(&simplex[i]);
        }
    }

    let best = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
    Ok(OptResult {
        best_params: simplex[best].clone(),
        best_objective: -values[best],
        evaluations: evals.get(),
        converged,
    })
}

/// Multistart configuration for a single channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultistartOptions {
    pub starts: usize,
    pub seed: u64,
    pub nelder_mead: NelderMeadOptions,
}

impl MultistartOptions {
    pub fn new(starts: usize, seed: u64) -> Self {
        Self { starts, seed, nelder_mead: NelderMeadOptions::default() }
    }
}

/// Stratified initial points: one stratum per start in every coordinate,
/// strata shuffled independently per coordinate. Start 0 is the standard
/// protocol and is not drawn.
fn stratified_starts(starts: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = seeded_rng(seed);
    let drawn = starts.saturating_sub(1);
    let mut points = vec![vec![0.0; N_PARAMS]; drawn];
    for d in 0..N_PARAMS {
        let mut strata: Vec<usize> = (0..drawn).collect();
        strata.shuffle(&mut rng);
        for (p, s) in points.iter_mut().zip(strata) {
            let u: f64 = rng.random();
            p[d] = -PI + 2.0 * PI * (s as f64 + u) / drawn as f64;
        }
    }
    let mut out = vec![ProtocolParams::bbcjpw().to_vec()];
    out.extend(points);
    out
}

/// Runs Nelder-Mead from a point, restarting from the incumbent with a fresh
/// simplex while it keeps improving and budget remains.
fn run_start(objective: &PairObjective, init: Vec<f64>, options: &NelderMeadOptions) -> OptResult<Vec<f64>> {
    let eval = |x: &[f64]| match ProtocolParams::from_slice(x) {
        Ok(p) => objective.evaluate(&p),
        Err(_) => f64::NEG_INFINITY,
    };
    let mut total = 0usize;
    let mut best =
        OptResult { best_params: init.clone(), best_objective: eval(&init), evaluations: 1, converged: false };
    total += 1;
    let mut step = options.initial_step;
    while total < options.max_evals {
        let opts = NelderMeadOptions { max_evals: options.max_evals - total, initial_step: step, ..*options };
        let r = nelder_mead(eval, &best.best_params, &opts).expect("options validated");
        total += r.evaluations;
        let improved = r.best_objective > best.best_objective + options.tol_f;
        if r.best_objective > best.best_objective {
            best.best_params = r.best_params;
            best.best_objective = r.best_objective;
        }
        best.converged = r.converged;
        if !improved {
            break;
        }
        step = (step * 0.5).max(1e-3);
    }
    best.evaluations = total;
    best
}

/// Maximizes the worst-case fidelity of the pair over the protocol family.
pub fn optimize_pair(
    channel: &DensityMatrix,
    chi1: &PureState,
    chi2: &PureState,
    options: &MultistartOptions,
) -> Result<(OptResult<ProtocolParams>, usize)> {
    if options.starts == 0 {
        return Err(Error::InvalidArgument("at least one start is required".into()));
    }
    let objective = PairObjective::new(channel, chi1, chi2)?;
    let inits = stratified_starts(options.starts, options.seed);
    let results: Vec<OptResult<Vec<f64>>> =
        inits.into_par_iter().map(|x| run_start(&objective, x, &options.nelder_mead)).collect();
    let total: usize = results.iter().map(|r| r.evaluations).sum();
    // Strictly greater keeps the lowest start index on ties.
    let mut best = &results[0];
    for r in &results[1..] {
        if r.best_objective > best.best_objective {
            best = r;
        }
    }
    let params = ProtocolParams::from_slice(&best.best_params)?;
    Ok((
        OptResult {
            best_objective: objective.evaluate(&params),
            best_params: params,
            evaluations: best.evaluations,
            converged: best.converged,
        },
        total,
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub channel_entropy: f64,
    /// Lower bound on the achievable worst-case fidelity within the family.
    pub best_min_fidelity: f64,
    pub starts: usize,
    /// Objective evaluations summed over all starts.
    pub evaluations: usize,
    pub best_params: ProtocolParams,
}

pub fn validate_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= FRAC_PI_4 + 1e-12) {
        return Err(Error::InvalidTheta(theta));
    }
    Ok(())
}

/// For each angle, optimizes the pair over the channel `cos θ|00> + sin θ|11>`.
pub fn sweep_channel_angle(
    thetas: &[f64],
    chi1: &PureState,
    chi2: &PureState,
    starts: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    sweep_channel_angle_with(thetas, chi1, chi2, &MultistartOptions::new(starts, seed))
}

pub fn sweep_channel_angle_with(
    thetas: &[f64],
    chi1: &PureState,
    chi2: &PureState,
    options: &MultistartOptions,
) -> Result<Vec<SweepRow>> {
    for &t in thetas {
        validate_theta(t)?;
    }
    let mut sorted = thetas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .iter()
        .enumerate()
        .map(|(i, &theta)| {
            let opts = MultistartOptions { seed: derive_seed(options.seed, i as u64), ..*options };
            let (best, evaluations) = optimize_pair(&angle_channel(theta), chi1, chi2, &opts)?;
            Ok(SweepRow {
                theta,
                channel_entropy: entropy_of_entanglement(&angle_state(theta), (2, 2))?,
                best_min_fidelity: best.best_objective,
                starts: options.starts,
                evaluations,
                best_params: best.best_params,
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "theta,channel_entropy,best_min_fidelity,starts,evaluations";

/// CSV with a fixed column order and 17-significant-digit floats.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig17(r.theta),
            sig17(r.channel_entropy),
            sig17(r.best_min_fidelity),
            r.starts,
            r.evaluations
        ));
    }
    out
}

/// `|| U^dagger U - I ||_F` of the decoded Alice and Bob unitaries, worst case.
pub fn unitarity_residual(params: &ProtocolParams) -> f64 {
    let check = |u: &ComplexMatrix| (&dagger(u) * u).distance(&ComplexMatrix::identity(u.rows()));
    let mut worst = check(&alice_unitary(&params.alice));
    for v in &params.bob {
        worst = worst.max(check(&bob_unitary(v)));
    }
    worst
}
