//! Local Kraus-pair protocols and their purified and dilated forms.
//!
//! Registers are laid out in the fixed order `(1, A, B, 2, M, E)`: the
//! particle to teleport, Alice's half of the channel, Bob's half, the output
//! particle, the channel's purifying ancilla and the dilation environment.
//! A protocol's Alice factor acts on `1 ⊗ A` and its Bob factor on `B ⊗ 2`,
//! so every Kraus operator is the plain Kronecker product `A_i ⊗ B_i`.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fmt::json_f64;
use crate::linalg::{complete_orthonormal, dagger, eig_hermitian, kron, partial_trace, ComplexMatrix, C64, ZERO};
use crate::qstate::{DensityMatrix, PureState};

/// Maximum completeness residual for a protocol to be applied.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Purification drops spectral weight at or below this value.
pub const PURIFY_EIG_TOL: f64 = 1e-12;
/// Canonical vectors closer than this to the current span are skipped when
/// completing a dilation unitary.
pub const COMPLETION_SKIP_TOL: f64 = 1e-8;

/// Finite family of operator pairs `(A_i, B_i)` representing the map
/// `X -> Σ_i (A_i ⊗ B_i) X (A_i ⊗ B_i)^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalKrausProtocol {
    pairs: Vec<(ComplexMatrix, ComplexMatrix)>,
    alice_dim: usize,
    bob_dim: usize,
}

impl LocalKrausProtocol {
    /// Checks shapes only; completeness is reported by [`check_completeness`]
    /// and enforced where the protocol is applied.
    pub fn new(pairs: Vec<(ComplexMatrix, ComplexMatrix)>, alice_dim: usize, bob_dim: usize) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyProtocol);
        }
        for (i, (a, b)) in pairs.iter().enumerate() {
            if a.rows() != alice_dim || a.cols() != alice_dim {
                return Err(Error::DimensionMismatch(format!(
                    "pair {i}: Alice operator is {}x{}, expected {alice_dim}x{alice_dim}",
                    a.rows(),
                    a.cols()
                )));
            }
            if b.rows() != bob_dim || b.cols() != bob_dim {
                return Err(Error::DimensionMismatch(format!(
                    "pair {i}: Bob operator is {}x{}, expected {bob_dim}x{bob_dim}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(Self { pairs, alice_dim, bob_dim })
    }

    /// The single pair `(I, I)`.
    pub fn identity(alice_dim: usize, bob_dim: usize) -> Self {
        Self { pairs: vec![(ComplexMatrix::identity(alice_dim), ComplexMatrix::identity(bob_dim))], alice_dim, bob_dim }
    }

    pub fn pairs(&self) -> &[(ComplexMatrix, ComplexMatrix)] {
        &self.pairs
    }

    pub fn alice_dim(&self) -> usize {
        self.alice_dim
    }

    pub fn bob_dim(&self) -> usize {
        self.bob_dim
    }

    pub fn system_dim(&self) -> usize {
        self.alice_dim * self.bob_dim
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `A_i ⊗ B_i` for every pair.
    pub fn kraus_operators(&self) -> Vec<ComplexMatrix> {
        self.pairs.iter().map(|(a, b)| kron(a, b)).collect()
    }

    /// `Σ_i K_i X K_i^dagger` without any validation of `X`.
    pub fn apply_raw(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.system_dim();
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "protocol acts on dim {n}, input is {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for k in self.kraus_operators() {
            out = &out + &(&(&k * x) * &dagger(&k));
        }
        Ok(out)
    }

    /// Serializes to the JSON wire format; entries are `[re, im]` pairs with
    /// 17 significant digits.
    pub fn to_json(&self) -> Value {
        let encode = |m: &ComplexMatrix| -> Value {
            Value::Array(
                (0..m.rows())
                    .map(|r| {
                        Value::Array(
                            (0..m.cols()).map(|c| json!([json_f64(m[(r, c)].re), json_f64(m[(r, c)].im)])).collect(),
                        )
                    })
                    .collect(),
            )
        };
        json!({
            "alice_dim": self.alice_dim,
            "bob_dim": self.bob_dim,
            "pairs": self.pairs.iter().map(|(a, b)| json!({"alice": encode(a), "bob": encode(b)})).collect::<Vec<_>>(),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("protocol JSON serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let wire: WireProtocol = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let decode = |rows: Vec<Vec<[f64; 2]>>| -> Result<ComplexMatrix> {
            let r = rows.len();
            let c = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|row| row.len() != c) {
                return Err(Error::Parse("ragged matrix rows".into()));
            }
            ComplexMatrix::new(r, c, rows.into_iter().flatten().map(|[re, im]| C64::new(re, im)).collect())
        };
        let pairs =
            wire.pairs.into_iter().map(|p| Ok((decode(p.alice)?, decode(p.bob)?))).collect::<Result<Vec<_>>>()?;
        Self::new(pairs, wire.alice_dim, wire.bob_dim)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WirePair {
    alice: Vec<Vec<[f64; 2]>>,
    bob: Vec<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireProtocol {
    alice_dim: usize,
    bob_dim: usize,
    pairs: Vec<WirePair>,
}

/// `|| Σ_i (A_i ⊗ B_i)^dagger (A_i ⊗ B_i) - I ||_F`.
pub fn check_completeness(p: &LocalKrausProtocol) -> f64 {
    let n = p.system_dim();
    let mut sum = ComplexMatrix::zeros(n, n);
    for k in p.kraus_operators() {
        sum = &sum + &(&dagger(&k) * &k);
    }
    sum.distance(&ComplexMatrix::identity(n))
}

fn require_complete(p: &LocalKrausProtocol) -> Result<()> {
    let residual = check_completeness(p);
    if residual > COMPLETENESS_TOL {
        return Err(Error::IncompleteProtocol { residual });
    }
    Ok(())
}

/// Runs the protocol on `input ⊗ channel`, returning the joint state on `1 ⊗ A ⊗ B ⊗ 2`.
pub fn apply_protocol(input: &DensityMatrix, channel: &DensityMatrix, p: &LocalKrausProtocol) -> Result<DensityMatrix> {
    let joint_dim = input.dim() * channel.dim();
    if joint_dim != p.system_dim() {
        return Err(Error::DimensionMismatch(format!(
            "input dim {} ⊗ channel dim {} does not match protocol dim {}",
            input.dim(),
            channel.dim(),
            p.system_dim()
        )));
    }
    require_complete(p)?;
    let out = p.apply_raw(input.tensor(channel).matrix())?;
    DensityMatrix::new(out)
}

/// Reduced state of particle 2 from a joint state on `1 ⊗ A ⊗ B ⊗ 2` (four qubits).
pub fn teleported_output(joint: &DensityMatrix) -> Result<DensityMatrix> {
    if joint.dim() != 16 {
        return Err(Error::DimensionMismatch(format!("expected a 4-qubit joint state, got dim {}", joint.dim())));
    }
    DensityMatrix::new(partial_trace(joint.matrix(), &[2, 2, 2, 2], &[3])?)
}

/// Pure state on `system ⊗ M` whose `M`-marginal is the purified density matrix.
#[derive(Clone, Debug)]
pub struct Purification {
    pub psi: PureState,
    pub system_dim: usize,
    pub ancilla_dim: usize,
}

impl Purification {
    /// `Tr_M |Ψ><Ψ|`.
    pub fn reduced(&self) -> ComplexMatrix {
        reduce_leading(self.psi.amplitudes(), self.system_dim, self.ancilla_dim)
    }
}

/// `|Ψ> = Σ_k sqrt(λ_k) |e_k> ⊗ |k>` over the eigenpairs with `λ_k > 1e-12`.
pub fn purify(rho: &DensityMatrix) -> Purification {
    let eig = eig_hermitian(rho.matrix()).expect("density matrices are Hermitian");
    let n = rho.dim();
    // Largest weights first so the ancilla index orders by weight.
    let support: Vec<usize> = (0..n).rev().filter(|&k| eig.eigenvalues[k] > PURIFY_EIG_TOL).collect();
    let m = support.len().max(1);
    let mut amps = vec![ZERO; n * m];
    for (slot, &k) in support.iter().enumerate() {
        let w = eig.eigenvalues[k].sqrt();
        for s in 0..n {
            amps[s * m + slot] = eig.eigenvectors[(s, k)] * w;
        }
    }
    let psi = PureState::normalized(amps).expect("a density matrix has positive spectral weight");
    Purification { psi, system_dim: n, ancilla_dim: m }
}

/// `ρ[s, s'] = Σ_r v[s, r] conj(v[s', r])` for `v` on `keep ⊗ rest`.
pub(crate) fn reduce_leading(v: &[C64], keep: usize, rest: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(keep, keep);
    for s in 0..keep {
        for t in 0..keep {
            let mut acc = ZERO;
            for r in 0..rest {
                acc += v[s * rest + r] * v[t * rest + r].conj();
            }
            out[(s, t)] = acc;
        }
    }
    out
}

/// Unitary on `system ⊗ E` realizing a protocol with the environment starting in `|0>`.
#[derive(Clone, Debug)]
pub struct Dilation {
    pub u: ComplexMatrix,
    pub system_dim: usize,
    pub env_dim: usize,
    pub env_initial_index: usize,
}

impl Dilation {
    /// `|| U^dagger U - I ||_F`.
    pub fn unitarity_residual(&self) -> f64 {
        (&dagger(&self.u) * &self.u).distance(&ComplexMatrix::identity(self.u.rows()))
    }

    /// `Tr_E( U (ρ ⊗ |0><0|) U^dagger )`.
    pub fn apply_channel(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (n, e) = (self.system_dim, self.env_dim);
        if rho.rows() != n || rho.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "dilation acts on dim {n}, input is {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let mut env0 = ComplexMatrix::zeros(e, e);
        env0[(self.env_initial_index, self.env_initial_index)] = C64::new(1.0, 0.0);
        let big = kron(rho, &env0);
        let evolved = &(&self.u * &big) * &dagger(&self.u);
        partial_trace(&evolved, &[n, e], &[0])
    }

    /// Acts on `|x> ⊗ |0>^E` for `x` on `system ⊗ M`, with `M` left untouched.
    /// The result is laid out as `system ⊗ M ⊗ E`.
    pub fn apply_to_ket(&self, x: &[C64], ancilla_dim: usize) -> Result<Vec<C64>> {
        let (n, e, m) = (self.system_dim, self.env_dim, ancilla_dim);
        if x.len() != n * m {
            return Err(Error::DimensionMismatch(format!("ket of length {} is not on dim {n} ⊗ {m}", x.len())));
        }
        let col0 = self.env_initial_index;
        let mut out = vec![ZERO; n * m * e];
        for s_out in 0..n {
            for e_out in 0..e {
                let row = s_out * e + e_out;
                for s_in in 0..n {
                    let u = self.u[(row, s_in * e + col0)];
                    if u == ZERO {
                        continue;
                    }
                    for a in 0..m {
                        out[(s_out * m + a) * e + e_out] += u * x[s_in * m + a];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Builds a dilation whose `|0>^E` slice maps `|x>` to `Σ_i K_i|x> ⊗ |i>^E`,
/// completed to a full unitary by Gram-Schmidt over canonical basis vectors.
pub fn dilate(p: &LocalKrausProtocol) -> Result<Dilation> {
    require_complete(p)?;
    let n = p.system_dim();
    let env_dim = p.len().next_power_of_two();
    let total = n * env_dim;
    let kraus = p.kraus_operators();

    let mut fixed: Vec<Vec<C64>> = Vec::with_capacity(n);
    for x in 0..n {
        let mut col = vec![ZERO; total];
        for (i, k) in kraus.iter().enumerate() {
            for y in 0..n {
                col[y * env_dim + i] = k[(y, x)];
            }
        }
        fixed.push(col);
    }
    let extra = complete_orthonormal(&fixed, total, COMPLETION_SKIP_TOL);
    if fixed.len() + extra.len() != total {
        return Err(Error::IncompleteProtocol { residual: check_completeness(p) });
    }

    let mut u = ComplexMatrix::zeros(total, total);
    let mut extra_iter = extra.iter();
    for (x, fixed_col) in fixed.iter().enumerate() {
        for e in 0..env_dim {
            let col = if e == 0 { fixed_col } else { extra_iter.next().expect("enough completion vectors") };
            u.set_col(x * env_dim + e, col);
        }
    }
    Ok(Dilation { u, system_dim: n, env_dim, env_initial_index: 0 })
}

/// Runs a protocol on `|χ> ⊗ |Ψ>` with the identity on the ancilla and traces
/// the ancilla out: the purified form of [`apply_protocol`].
pub fn apply_purified(input: &PureState, channel: &Purification, p: &LocalKrausProtocol) -> Result<ComplexMatrix> {
    let n = p.system_dim();
    if input.dim() * channel.system_dim != n {
        return Err(Error::DimensionMismatch("input ⊗ channel does not match protocol".into()));
    }
    require_complete(p)?;
    let m = channel.ancilla_dim;
    let joint = input.tensor(&channel.psi);
    let mut out = ComplexMatrix::zeros(n, n);
    for k in p.kraus_operators() {
        let mut v = vec![ZERO; n * m];
        for y in 0..n {
            for x in 0..n {
                let kyx = k[(y, x)];
                if kyx == ZERO {
                    continue;
                }
                for a in 0..m {
                    v[y * m + a] += kyx * joint.amplitudes()[x * m + a];
                }
            }
        }
        out = &out + &reduce_leading(&v, n, m);
    }
    Ok(out)
}

/// The same output through the dilation unitary: `Tr_{M,E} U(|χ> ⊗ |Ψ> ⊗ |0>)`.
pub fn apply_dilated(input: &PureState, channel: &Purification, d: &Dilation) -> Result<ComplexMatrix> {
    let joint = input.tensor(&channel.psi);
    let out = d.apply_to_ket(joint.amplitudes(), channel.ancilla_dim)?;
    Ok(reduce_leading(&out, d.system_dim, channel.ancilla_dim * d.env_dim))
}

/// Random complete protocol with `outcomes` pairs: Alice's Kraus operators
/// are the blocks of a Haar isometry, Bob's are Haar unitaries.
pub fn random_local_protocol<R: rand::Rng + ?Sized>(
    alice_dim: usize,
    bob_dim: usize,
    outcomes: usize,
    rng: &mut R,
) -> Result<LocalKrausProtocol> {
    if alice_dim == 0 || bob_dim == 0 || outcomes == 0 {
        return Err(Error::InvalidArgument("dimensions and outcome count must be positive".into()));
    }
    let v = crate::qstate::haar_random_unitary(alice_dim * outcomes, rng);
    let pairs = (0..outcomes)
        .map(|i| {
            let mut a = ComplexMatrix::zeros(alice_dim, alice_dim);
            for r in 0..alice_dim {
                for c in 0..alice_dim {
                    a[(r, c)] = v[(i * alice_dim + r, c)];
                }
            }
            (a, crate::qstate::haar_random_unitary(bob_dim, rng))
        })
        .collect();
    LocalKrausProtocol::new(pairs, alice_dim, bob_dim)
}
