//! Qubit and register states, Bloch geometry, and the extreme-state
//! decomposition of a noncommuting qubit pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    dagger, eig_hermitian, inner, kron_vec, paulis, vec_norm, ComplexMatrix, C64, ONE, PSD_CLAMP, ZERO,
};

/// Normalization and Hermiticity tolerance for state invariants.
pub const STATE_TOL: f64 = 1e-10;
/// Frobenius commutator norm above which two states count as noncommuting.
pub const NONCOMMUTING_TOL: f64 = 1e-8;
/// Eigenvalues below this are treated as exact zeros inside fidelity square roots.
const EIG_SNAP: f64 = 1e-13;

/// Normalized state vector. The global phase is fixed so that the first
/// nonzero amplitude is real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes: canonical_phase(amplitudes) })
    }

    /// Normalizes `amplitudes` first. Fails only on the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[index] = ONE;
        Self { amplitudes: v }
    }

    /// `|+> = (|0> + |1>)/sqrt 2`.
    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { amplitudes: vec![C64::new(s, 0.0), C64::new(s, 0.0)] }
    }

    /// `|-> = (|0> - |1>)/sqrt 2`.
    pub fn minus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { amplitudes: vec![C64::new(s, 0.0), C64::new(-s, 0.0)] }
    }

    /// Pure qubit with the given unit Bloch vector.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let len = norm3(r);
        if (len - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("Bloch vector of length {len} is not on the sphere")));
        }
        let [x, y, z] = [r[0] / len, r[1] / len, r[2] / len];
        let amps = if z >= 0.0 {
            let a = ((1.0 + z) / 2.0).sqrt();
            vec![C64::new(a, 0.0), C64::new(x, y) / (2.0 * a)]
        } else {
            let b = ((1.0 - z) / 2.0).sqrt();
            vec![C64::new(x, -y) / (2.0 * b), C64::new(b, 0.0)]
        };
        Self::normalized(amps)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &PureState) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { matrix: ComplexMatrix::projector(&self.amplitudes) }
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState { amplitudes: kron_vec(&self.amplitudes, &other.amplitudes) }
    }

    pub fn apply(&self, u: &ComplexMatrix) -> Result<PureState> {
        if u.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{}x{} operator on dim {}", u.rows(), u.cols(), self.dim())));
        }
        PureState::normalized(u.apply(&self.amplitudes))
    }
}

fn canonical_phase(mut v: Vec<C64>) -> Vec<C64> {
    let scale = vec_norm(&v);
    if let Some(idx) = v.iter().position(|z| z.norm() > 1e-12 * scale) {
        let first = v[idx];
        let rot = first.conj() / first.norm();
        for z in &mut v {
            *z *= rot;
        }
        v[idx] = C64::new(first.norm(), 0.0);
    }
    v
}

/// Unit-trace, Hermitian, positive-semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let herm = matrix.hermitian_residual();
        if herm > STATE_TOL {
            return Err(Error::InvalidDensity(format!("Hermiticity residual {herm:.3e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidDensity(format!("trace {:.17}{:+.3e}i", tr.re, tr.im)));
        }
        let matrix = matrix.hermitian_part();
        let eig = eig_hermitian(&matrix)?;
        let lowest = eig.eigenvalues[0];
        if lowest < -PSD_CLAMP {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {lowest:.3e}")));
        }
        Ok(Self { matrix })
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    /// Diagonal state in the computational basis. Probabilities must sum to one.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { matrix: crate::linalg::kron(&self.matrix, &other.matrix) }
    }

    /// `u ρ u^dagger`, revalidated.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        let m = u.try_mul(&self.matrix)?.try_mul(&dagger(u))?;
        DensityMatrix::new(m)
    }

    /// `p ρ + (1 - p) σ`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!("mixing dims {} and {}", self.dim(), other.dim())));
        }
        DensityMatrix::new(&self.matrix.scale_real(p) + &other.matrix.scale_real(1.0 - p))
    }

    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        self.matrix.distance(&other.matrix)
    }
}

/// Real 3-vector `r` with `ρ = (I + r·σ)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub r: [f64; 3],
}

impl BlochVector {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Bloch component".into()));
        }
        let length = norm3(r);
        if length > 1.0 + STATE_TOL {
            return Err(Error::OutsideBlochBall { length });
        }
        Ok(Self { r })
    }

    pub fn length(&self) -> f64 {
        norm3(self.r)
    }

    pub fn is_pure(&self) -> bool {
        (self.length() - 1.0).abs() <= STATE_TOL
    }
}

pub(crate) fn norm3(r: [f64; 3]) -> f64 {
    (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn bloch_from_density(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("Bloch vector needs a qubit, got dim {}", rho.dim())));
    }
    let [sx, sy, sz] = paulis();
    let m = rho.matrix();
    let r = [(m * &sx).trace().re, (m * &sy).trace().re, (m * &sz).trace().re];
    // Roundoff can push a pure state a hair outside the ball.
    let len = norm3(r);
    let r = if len > 1.0 && len <= 1.0 + STATE_TOL { r.map(|x| x / len) } else { r };
    BlochVector::new(r)
}

pub fn density_from_bloch(r: &BlochVector) -> Result<DensityMatrix> {
    let length = r.length();
    if length > 1.0 + STATE_TOL {
        return Err(Error::OutsideBlochBall { length });
    }
    let [sx, sy, sz] = paulis();
    let mut m = ComplexMatrix::identity(2);
    for (k, s) in [sx, sy, sz].iter().enumerate() {
        m = &m + &s.scale_real(r.r[k]);
    }
    DensityMatrix::new(m.scale_real(0.5))
}

/// `|| ρ1 ρ2 - ρ2 ρ1 ||_F`. For qubits this equals `|r1 × r2| / sqrt 2`.
pub fn commutator_norm(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(format!("dims {} and {}", rho1.dim(), rho2.dim())));
    }
    let ab = rho1.matrix() * rho2.matrix();
    let ba = rho2.matrix() * rho1.matrix();
    Ok(ab.distance(&ba))
}

/// Unique pair of non-orthogonal pure qubits `ψ, φ` with
/// `ρ_j = λ_j |ψ><ψ| + (1 - λ_j) |φ><φ|` for both inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremeDecomposition {
    pub psi: PureState,
    pub phi: PureState,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Chord parameters of `ψ` and `φ` along `r1 + t (r2 - r1)`; `t_psi > t_phi`.
    pub t_psi: f64,
    pub t_phi: f64,
    /// Set when the corresponding input already lies on the sphere, so it is
    /// itself one of the extreme states.
    pub rho1_pure: bool,
    pub rho2_pure: bool,
}

impl ExtremeDecomposition {
    /// `|<ψ|φ>|`.
    pub fn overlap(&self) -> f64 {
        self.psi.overlap(&self.phi).norm()
    }

    /// `λ |ψ><ψ| + (1 - λ) |φ><φ|`.
    pub fn mixture(&self, lambda: f64) -> ComplexMatrix {
        &self.psi.density().matrix().scale_real(lambda) + &self.phi.density().matrix().scale_real(1.0 - lambda)
    }

    /// Frobenius reconstruction residuals for both inputs.
    pub fn residuals(&self, rho1: &DensityMatrix, rho2: &DensityMatrix) -> (f64, f64) {
        (self.mixture(self.lambda1).distance(rho1.matrix()), self.mixture(self.lambda2).distance(rho2.matrix()))
    }
}

pub fn extreme_decomposition(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<ExtremeDecomposition> {
    let b1 = bloch_from_density(rho1)?;
    let b2 = bloch_from_density(rho2)?;
    let (r1, r2) = (b1.r, b2.r);
    let d = sub3(r2, r1);
    let distance = norm3(d);
    if distance < STATE_TOL {
        return Err(Error::DegenerateInputs { distance });
    }
    let comm = commutator_norm(rho1, rho2)?;
    if comm <= NONCOMMUTING_TOL {
        return Err(Error::CommutingInputs { norm: comm });
    }

    // |r1 + t d|^2 = 1  <=>  a t^2 + b t + c = 0 with c <= 0, so two real roots of opposite sign (or one zero).
    let a = dot3(d, d);
    let b = 2.0 * dot3(r1, d);
    let c = dot3(r1, r1) - 1.0;
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (ta, tb) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    let (t_psi, t_phi) = if ta >= tb { (ta, tb) } else { (tb, ta) };

    let point = |t: f64| {
        let p = [r1[0] + t * d[0], r1[1] + t * d[1], r1[2] + t * d[2]];
        let n = norm3(p);
        p.map(|x| x / n)
    };
    let psi = PureState::from_bloch(point(t_psi))?;
    let phi = PureState::from_bloch(point(t_phi))?;
    let span = t_psi - t_phi;
    let lambda1 = (-t_phi / span).clamp(0.0, 1.0);
    let lambda2 = ((1.0 - t_phi) / span).clamp(0.0, 1.0);

    Ok(ExtremeDecomposition {
        psi,
        phi,
        lambda1,
        lambda2,
        t_psi,
        t_phi,
        rho1_pure: b1.is_pure(),
        rho2_pure: b2.is_pure(),
    })
}

/// `(Tr sqrt(sqrt ρ σ sqrt ρ))^2`.
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!("dims {} and {}", rho.dim(), sigma.dim())));
    }
    let root = snapped_sqrt(rho.matrix())?;
    let inner = (&(&root * sigma.matrix()) * &root).hermitian_part();
    let eig = eig_hermitian(&inner)?;
    let s: f64 = eig.eigenvalues.iter().map(|&m| if m < EIG_SNAP { 0.0 } else { m.sqrt() }).sum();
    Ok(s * s)
}

/// `<χ|σ|χ>`, the fidelity of a pure reference with any state.
pub fn pure_fidelity(chi: &PureState, sigma: &DensityMatrix) -> Result<f64> {
    if chi.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!("dims {} and {}", chi.dim(), sigma.dim())));
    }
    Ok(inner(chi.amplitudes(), &sigma.matrix().apply(chi.amplitudes())).re)
}

/// Square root of a density matrix with roundoff-level eigenvalues set to zero.
pub(crate) fn snapped_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    if eig.eigenvalues[0] < -PSD_CLAMP {
        return Err(Error::NegativeEigenvalue { value: eig.eigenvalues[0] });
    }
    Ok(eig.reconstruct_with(|l| C64::new(if l < EIG_SNAP { 0.0 } else { l.sqrt() }, 0.0)))
}

/// Complex amplitudes `(a1, a2)` defining `|χ> = a1|χ1> + a2|χ2>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuperpositionSpec {
    pub a1: C64,
    pub a2: C64,
}

impl SuperpositionSpec {
    pub fn new(a1: C64, a2: C64) -> Self {
        Self { a1, a2 }
    }

    /// Builds `|χ>`; the combination must already have unit norm.
    pub fn build(&self, chi1: &PureState, chi2: &PureState) -> Result<PureState> {
        if chi1.dim() != chi2.dim() {
            return Err(Error::DimensionMismatch("superposition of different dims".into()));
        }
        let v: Vec<C64> =
            chi1.amplitudes().iter().zip(chi2.amplitudes()).map(|(x, y)| self.a1 * x + self.a2 * y).collect();
        PureState::new(v)
    }

    /// Random spec normalized against the given pair.
    pub fn random<R: Rng + ?Sized>(chi1: &PureState, chi2: &PureState, rng: &mut R) -> Self {
        loop {
            let a1 = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            let a2 = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            let v: Vec<C64> = chi1.amplitudes().iter().zip(chi2.amplitudes()).map(|(x, y)| a1 * x + a2 * y).collect();
            let n = vec_norm(&v);
            if n > 1e-6 {
                return Self { a1: a1 / n, a2: a2 / n };
            }
        }
    }
}

/// Deterministic generator used for every seeded sampling routine in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random pure state of dimension `dim`, deterministic in `seed`.
pub fn haar_random_pure(dim: usize, seed: u64) -> PureState {
    haar_random_pure_with(dim, &mut seeded_rng(seed))
}

pub fn haar_random_pure_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    assert!(dim >= 1, "dimension must be positive");
    if dim == 1 {
        return PureState::basis(1, 0);
    }
    loop {
        let v: Vec<C64> = (0..dim).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        if vec_norm(&v) > 1e-12 {
            return PureState::normalized(v).expect("nonzero vector normalizes");
        }
    }
}

/// Haar-random unitary via Gram-Schmidt on a complex Ginibre matrix.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let g: Vec<C64> = (0..dim).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let r = crate::linalg::orthogonalize(&g, &cols);
        let n = vec_norm(&r);
        if n > 1e-8 {
            cols.push(r.into_iter().map(|z| z / n).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, c) in cols.iter().enumerate() {
        u.set_col(j, c);
    }
    u
}

/// Random density matrix of the given rank (normalized Ginibre ensemble).
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    assert!(rank >= 1 && rank <= dim, "rank must lie in 1..=dim");
    let mut g = ComplexMatrix::zeros(dim, rank);
    for i in 0..dim {
        for j in 0..rank {
            g[(i, j)] = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    let m = &g * &dagger(&g);
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).expect("Ginibre product is a valid state")
}

/// Uniform random point in the Bloch ball, as a qubit state.
pub fn random_mixed_qubit<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    loop {
        let r = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        if norm3(r) <= 1.0 {
            return density_from_bloch(&BlochVector { r }).expect("inside the ball");
        }
    }
}
