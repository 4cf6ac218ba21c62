//! Entanglement of the shared resource: Schmidt data, entropy, Wootters
//! concurrence, entanglement of formation and fully entangled fraction.
//!
//! "One ebit" is read as entanglement of formation `>= 1 - tol`, which in
//! `2 ⊗ 2` pins the state to a maximally entangled pure state.

use crate::error::{Error, Result};
use crate::linalg::{
    complete_orthonormal, dagger, eig_hermitian, kron, pauli_y, vec_norm, ComplexMatrix, C64, I, ZERO,
};
use crate::qstate::{snapped_sqrt, DensityMatrix, PureState};

/// Default tolerance for the maximal-entanglement verdict.
pub const DEFAULT_TOL_MAXIMAL: f64 = 1e-6;
const EIG_SNAP: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Nonnegative, descending; `min(dA, dB)` entries.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<C64>>,
    pub right_basis: Vec<Vec<C64>>,
}

impl SchmidtDecomposition {
    /// `Σ_k c_k |l_k> ⊗ |r_k>`.
    pub fn reconstruct(&self) -> Vec<C64> {
        let (da, db) = (self.left_basis[0].len(), self.right_basis[0].len());
        let mut v = vec![ZERO; da * db];
        for (k, &c) in self.coefficients.iter().enumerate() {
            for i in 0..da {
                for j in 0..db {
                    v[i * db + j] += self.left_basis[k][i] * self.right_basis[k][j] * c;
                }
            }
        }
        v
    }
}

fn check_dims(psi: &PureState, dims: (usize, usize)) -> Result<()> {
    if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != psi.dim() {
        return Err(Error::DimensionMismatch(format!("{}x{} split of a dim-{} state", dims.0, dims.1, psi.dim())));
    }
    Ok(())
}

pub fn schmidt(psi: &PureState, dims: (usize, usize)) -> Result<SchmidtDecomposition> {
    check_dims(psi, dims)?;
    let (da, db) = dims;
    let m = ComplexMatrix::new(da, db, psi.amplitudes().to_vec())?;
    let rho_a = &m * &dagger(&m);
    let eig = eig_hermitian(&rho_a)?;
    let m_dag = dagger(&m);
    let rank = da.min(db);

    let mut coefficients = Vec::with_capacity(rank);
    let mut left_basis = Vec::with_capacity(rank);
    let mut right_basis: Vec<Vec<C64>> = Vec::with_capacity(rank);
    for k in (0..da).rev().take(rank) {
        let l = eig.eigenvectors.col(k);
        let c = eig.eigenvalues[k].max(0.0).sqrt();
        // M = Σ c_k l_k r_k^T, so M^dagger l_k = c_k conj(r_k).
        let r: Vec<C64> = m_dag.apply(&l).into_iter().map(|z| z.conj()).collect();
        let nr = vec_norm(&r);
        coefficients.push(c);
        left_basis.push(l);
        if nr > 1e-12 {
            right_basis.push(r.into_iter().map(|z| z / nr).collect());
        } else {
            right_basis.push(Vec::new());
        }
    }
    // Zero coefficients get any orthonormal completion on B.
    let kept: Vec<Vec<C64>> = right_basis.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut fill = complete_orthonormal(&kept, db, 1e-8).into_iter();
    for r in &mut right_basis {
        if r.is_empty() {
            *r = fill.next().expect("enough completion vectors");
        }
    }
    Ok(SchmidtDecomposition { coefficients, left_basis, right_basis })
}

/// `-Σ p log2 p`, skipping zero weights.
fn shannon_bits(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum::<f64>().max(0.0)
}

pub fn binary_entropy(p: f64) -> f64 {
    shannon_bits([p, 1.0 - p])
}

pub fn entropy_of_entanglement(psi: &PureState, dims: (usize, usize)) -> Result<f64> {
    let s = schmidt(psi, dims)?;
    Ok(shannon_bits(s.coefficients.iter().map(|c| c * c)))
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!("expected a two-qubit state, got dim {}", rho.dim())));
    }
    Ok(())
}

/// Wootters concurrence; conjugation is entrywise in the computational basis.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let yy = kron(&pauli_y(), &pauli_y());
    let flipped = &(&yy * &rho.matrix().conj()) * &yy;
    let root = snapped_sqrt(rho.matrix())?;
    let r = (&(&root * &flipped) * &root).hermitian_part();
    let eig = eig_hermitian(&r)?;
    let mut mu: Vec<f64> = eig.eigenvalues.iter().map(|&l| if l < EIG_SNAP { 0.0 } else { l.sqrt() }).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// `h((1 + sqrt(1 - C^2)) / 2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// Magic basis: real combinations of these columns are exactly the maximally
/// entangled states, up to a global phase.
fn magic_basis() -> ComplexMatrix {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let hi = I * h;
    ComplexMatrix::from_rows(&[
        vec![h, hi, ZERO, ZERO],
        vec![ZERO, ZERO, hi, h],
        vec![ZERO, ZERO, hi, -h],
        vec![h, -hi, ZERO, ZERO],
    ])
}

/// `max <e|ρ|e>` over maximally entangled `|e>`: the top eigenvalue of the
/// real part of `ρ` in the magic basis.
pub fn fully_entangled_fraction(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let b = magic_basis();
    let in_magic = &(&dagger(&b) * rho.matrix()) * &b;
    let mut re = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            re[(i, j)] = C64::new(in_magic[(i, j)].re, 0.0);
        }
    }
    let eig = eig_hermitian(&re.hermitian_part())?;
    Ok(eig.eigenvalues[3])
}

pub fn is_maximally_entangled(rho: &DensityMatrix, tol: f64) -> Result<bool> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::InvalidArgument(format!("maximality tolerance {tol} must lie in (0, 0.1)")));
    }
    Ok(entanglement_of_formation(rho)? >= 1.0 - tol)
}

#[derive(Clone, Debug)]
pub struct EntanglementReport {
    /// Von Neumann entropy of the first qubit's marginal, in bits. Equals the
    /// entropy of entanglement for pure states.
    pub entropy: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub fef: f64,
    pub purity: f64,
    /// Schmidt data, present when the state is pure.
    pub schmidt: Option<SchmidtDecomposition>,
    pub is_maximal: bool,
    pub tol_maximal: f64,
}

pub fn entanglement_report(rho: &DensityMatrix, tol_maximal: f64) -> Result<EntanglementReport> {
    require_two_qubit(rho)?;
    let marginal = crate::linalg::partial_trace(rho.matrix(), &[2, 2], &[0])?;
    let entropy = shannon_bits(eig_hermitian(&marginal)?.eigenvalues);
    let concurrence = concurrence(rho)?;
    let purity = rho.purity();
    let schmidt = if purity >= 1.0 - 1e-10 {
        let eig = eig_hermitian(rho.matrix())?;
        let top = PureState::normalized(eig.eigenvectors.col(3))?;
        Some(schmidt(&top, (2, 2))?)
    } else {
        None
    };
    Ok(EntanglementReport {
        entropy,
        concurrence,
        eof: eof_from_concurrence(concurrence),
        fef: fully_entangled_fraction(rho)?,
        purity,
        schmidt,
        is_maximal: is_maximally_entangled(rho, tol_maximal)?,
        tol_maximal,
    })
}

/// `cos θ |00> + sin θ |11>`.
pub fn angle_state(theta: f64) -> PureState {
    PureState::normalized(vec![C64::new(theta.cos(), 0.0), ZERO, ZERO, C64::new(theta.sin(), 0.0)])
        .expect("unit vector")
}

/// The four Bell states `Φ+, Φ-, Ψ+, Ψ-`.
pub fn bell_states() -> [PureState; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mk = |a: [f64; 4]| PureState::normalized(a.iter().map(|&x| C64::new(x * h, 0.0)).collect()).unwrap();
    [mk([1.0, 0.0, 0.0, 1.0]), mk([1.0, 0.0, 0.0, -1.0]), mk([0.0, 1.0, 1.0, 0.0]), mk([0.0, 1.0, -1.0, 0.0])]
}
