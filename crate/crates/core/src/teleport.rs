//! Concrete teleportation protocols and the two reductions behind the
//! maximal-entanglement argument: superpositions of teleported pure states are
//! teleported, and teleporting a noncommuting mixed pair teleports its
//! extreme pure states.
//!
//! Channels live on `A ⊗ B ⊗ 2`. The convenience constructors put a two-qubit
//! resource on `A ⊗ B` and particle 2 in `|0>`, so Bob's factors act on
//! `B ⊗ 2` and finish by swapping the corrected qubit onto particle 2.

use rayon::prelude::*;

use crate::entanglement::{angle_state, bell_states};
use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, pauli_x, pauli_y, pauli_z, swap_gate, ComplexMatrix};
use crate::qchannel::{apply_protocol, teleported_output, LocalKrausProtocol};
use crate::qstate::{
    commutator_norm, extreme_decomposition, haar_random_pure_with, seeded_rng, state_fidelity, DensityMatrix,
    ExtremeDecomposition, PureState, SuperpositionSpec, NONCOMMUTING_TOL,
};

/// Fidelity threshold for reporting a state as teleported.
pub const TOL_EXACT: f64 = 1e-9;
/// Samples drawn from one derived seed in [`average_fidelity`].
const CHUNK: usize = 256;

#[derive(Clone, Debug)]
pub struct TeleportOutcome {
    pub output: DensityMatrix,
    pub fidelity: f64,
    pub exact: bool,
}

impl TeleportOutcome {
    pub fn is_exact(&self, tol: f64) -> bool {
        self.fidelity >= 1.0 - tol
    }
}

/// Embeds a two-qubit state on `A ⊗ B` with particle 2 in `|0>`.
pub fn channel_from_ab(ab: &DensityMatrix) -> Result<DensityMatrix> {
    if ab.dim() != 4 {
        return Err(Error::DimensionMismatch(format!("A ⊗ B resource must have dim 4, got {}", ab.dim())));
    }
    Ok(ab.tensor(&PureState::basis(2, 0).density()))
}

/// `cos θ |00> + sin θ |11>` on `A ⊗ B`, particle 2 in `|0>`.
pub fn angle_channel(theta: f64) -> DensityMatrix {
    channel_from_ab(&angle_state(theta).density()).expect("two-qubit resource")
}

/// `|Φ+>` on `A ⊗ B`, particle 2 in `|0>`.
pub fn maximal_channel() -> DensityMatrix {
    channel_from_ab(&bell_states()[0].density()).expect("two-qubit resource")
}

/// `|000>` on `A ⊗ B ⊗ 2`: no correlation at all.
pub fn product_channel() -> DensityMatrix {
    PureState::basis(8, 0).density()
}

/// The `A : B` marginal of a channel on `A ⊗ B ⊗ 2`.
pub fn channel_ab_marginal(channel: &DensityMatrix) -> Result<DensityMatrix> {
    if channel.dim() != 8 {
        return Err(Error::DimensionMismatch(format!("channel must have dim 8, got {}", channel.dim())));
    }
    DensityMatrix::new(partial_trace(channel.matrix(), &[2, 2, 2], &[0, 1])?)
}

/// Bob's factor on `B ⊗ 2`: apply `u` to `B`, then swap `B` and `2`.
pub fn bob_transfer(u: &ComplexMatrix) -> ComplexMatrix {
    &swap_gate() * &kron(u, &ComplexMatrix::identity(2))
}

/// Bell measurement on `(1, A)` with the matching Pauli correction moved onto particle 2.
pub fn bbcjpw_protocol() -> LocalKrausProtocol {
    let corrections = [ComplexMatrix::identity(2), pauli_z(), pauli_x(), pauli_y()];
    let pairs = bell_states()
        .iter()
        .zip(corrections.iter())
        .map(|(bell, fix)| (bell.density().into_matrix(), bob_transfer(fix)))
        .collect();
    LocalKrausProtocol::new(pairs, 4, 4).expect("4x4 factors")
}

/// Measure particle 1 in `basis`, reset it to `|0>`, and prepare the outcome on particle 2.
///
/// Teleports every state diagonal in `basis` through [`product_channel`].
pub fn classical_commuting_protocol(basis: &[PureState; 2]) -> Result<LocalKrausProtocol> {
    let [b0, b1] = basis;
    if b0.dim() != 2 || b1.dim() != 2 {
        return Err(Error::DimensionMismatch("basis states must be qubits".into()));
    }
    let residual = b0.overlap(b1).norm();
    if residual > 1e-10 {
        return Err(Error::NotOrthonormal { residual });
    }
    let ket0 = PureState::basis(2, 0);
    let prep = |first: &PureState, second: &PureState| {
        let mut u = ComplexMatrix::zeros(2, 2);
        u.set_col(0, first.amplitudes());
        u.set_col(1, second.amplitudes());
        u
    };
    let pairs = [(b0, prep(b0, b1)), (b1, prep(b1, b0))]
        .into_iter()
        .map(|(b, u)| {
            let collapse = ComplexMatrix::outer(ket0.amplitudes(), b.amplitudes());
            (kron(&collapse, &ComplexMatrix::identity(2)), kron(&ComplexMatrix::identity(2), &u))
        })
        .collect();
    LocalKrausProtocol::new(pairs, 4, 4)
}

/// Teleports `input` and compares the particle-2 state against `intended`.
pub fn run_teleport(
    input: &DensityMatrix,
    channel: &DensityMatrix,
    p: &LocalKrausProtocol,
    intended: &DensityMatrix,
) -> Result<TeleportOutcome> {
    if input.dim() != 2 || intended.dim() != 2 {
        return Err(Error::DimensionMismatch("input and intended states must be qubits".into()));
    }
    let joint = apply_protocol(input, channel, p)?;
    let output = teleported_output(&joint)?;
    let fidelity = state_fidelity(intended, &output)?;
    Ok(TeleportOutcome { output, fidelity, exact: fidelity >= 1.0 - TOL_EXACT })
}

/// Teleports `|χ>` for `|χ> = a1|χ1> + a2|χ2>` for every spec.
pub fn linearity_check(
    p: &LocalKrausProtocol,
    channel: &DensityMatrix,
    chi1: &PureState,
    chi2: &PureState,
    specs: &[SuperpositionSpec],
) -> Result<Vec<TeleportOutcome>> {
    let overlap = chi1.overlap(chi2).norm();
    if overlap <= NONCOMMUTING_TOL {
        return Err(Error::OrthogonalInputs { overlap });
    }
    specs
        .iter()
        .map(|spec| {
            let chi = spec.build(chi1, chi2)?.density();
            run_teleport(&chi, channel, p, &chi)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ExtremeReductionReport {
    pub decomposition: ExtremeDecomposition,
    pub rho1: TeleportOutcome,
    pub rho2: TeleportOutcome,
    pub psi: TeleportOutcome,
    pub phi: TeleportOutcome,
    /// `(exact ρ1 ∧ exact ρ2) ⇒ (exact ψ ∧ exact φ)`.
    pub implication_holds: bool,
}

impl ExtremeReductionReport {
    pub fn fidelities(&self) -> [f64; 4] {
        [self.rho1.fidelity, self.rho2.fidelity, self.psi.fidelity, self.phi.fidelity]
    }
}

pub fn extreme_reduction_check(
    p: &LocalKrausProtocol,
    channel: &DensityMatrix,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
) -> Result<ExtremeReductionReport> {
    let norm = commutator_norm(rho1, rho2)?;
    if norm <= NONCOMMUTING_TOL {
        return Err(Error::CommutingInputs { norm });
    }
    let decomposition = extreme_decomposition(rho1, rho2)?;
    let psi = decomposition.psi.density();
    let phi = decomposition.phi.density();
    let run = |s: &DensityMatrix| run_teleport(s, channel, p, s);
    let (o1, o2, op, of) = (run(rho1)?, run(rho2)?, run(&psi)?, run(&phi)?);
    let implication_holds = !(o1.exact && o2.exact) || (op.exact && of.exact);
    Ok(ExtremeReductionReport { decomposition, rho1: o1, rho2: o2, psi: op, phi: of, implication_holds })
}

/// Mean teleportation fidelity over Haar-random pure inputs.
///
/// Samples are drawn in fixed-size chunks, each from its own seed derived
/// from `(seed, chunk index)`, so the result does not depend on scheduling.
pub fn average_fidelity(p: &LocalKrausProtocol, channel: &DensityMatrix, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let sums = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeded_rng(derive_seed(seed, c as u64));
            let n = CHUNK.min(samples - c * CHUNK);
            let mut acc = 0.0;
            for _ in 0..n {
                let chi = haar_random_pure_with(2, &mut rng).density();
                acc += run_teleport(&chi, channel, p, &chi)?.fidelity;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(sums.iter().sum::<f64>() / samples as f64)
}

/// SplitMix64 finalizer over `(seed, index)`.
pub(crate) fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
