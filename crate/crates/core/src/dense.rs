//! Brute-force 2ⁿ×2ⁿ complex-matrix reference implementation.
//!
//! Everything here is desk-scale validation machinery: density matrices are
//! built by literal products of (I + Sᵢ)/1 factors and expectations by
//! literal traces, independent of the tableau path. Hard guard at n ≤ 12.

use num_complex::Complex64;

use crate::pauli::{PauliOperator, Sign};
use crate::{Error, Result};

/// Largest qubit count the dense path accepts (4096x4096 complex).
pub const MAX_DENSE_QUBITS: usize = 12;

const TOL: f64 = 1e-9;

/// A square complex matrix of dimension 2ⁿ, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim.is_power_of_two());
        DenseMatrix { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, factor: f64) -> DenseMatrix {
        let mut out = self.clone();
        for a in &mut out.entries {
            *a *= factor;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let diff = self[(i, j)] - self[(j, i)].conj();
                if diff.norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Largest entrywise modulus of self - other.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge { n, max: MAX_DENSE_QUBITS });
    }
    Ok(())
}

/// Sign times the Kronecker product of the single-qubit factors.
///
/// Qubit 0 is the leftmost tensor factor (most significant index bits), so
/// row/column indices read as bit strings with qubit 0 first.
pub fn pauli_to_dense(p: &PauliOperator) -> Result<DenseMatrix> {
    let n = p.qubits();
    guard(n)?;
    let dim = 1usize << n;
    let mut m = DenseMatrix::zeros(dim);
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    // Each Pauli has exactly one nonzero per row: row r maps to column
    // r ^ x_mask with a phase from the Z/Y parts.
    for row in 0..dim {
        let mut col = row;
        let mut entry = if p.sign() == Sign::Minus { -one } else { one };
        for q in 0..n {
            let bit_pos = n - 1 - q;
            let bit = row >> bit_pos & 1;
            match p.factor(q) {
                'I' => {}
                'X' => col ^= 1 << bit_pos,
                'Y' => {
                    col ^= 1 << bit_pos;
                    // Y = [[0, -i], [i, 0]]: entry (1,0) is i, (0,1) is -i.
                    entry *= if bit == 1 { i_unit } else { -i_unit };
                }
                'Z' => {
                    if bit == 1 {
                        entry = -entry;
                    }
                }
                _ => unreachable!(),
            }
        }
        m[(row, col)] += entry;
    }
    Ok(m)
}

/// ρ = (1/2ⁿ) ∏ᵢ (I + Sᵢ) by repeated dense multiplication.
pub fn state_from_generators(generators: &[PauliOperator], n: usize) -> Result<DenseMatrix> {
    guard(n)?;
    let dim = 1usize << n;
    for (i, g) in generators.iter().enumerate() {
        if g.qubits() != n {
            return Err(Error::InvalidGenerators(format!("generator {i} has wrong qubit count")));
        }
        if g.is_unsigned_identity() {
            return Err(Error::InvalidGenerators(format!("generator {i} is +/-identity")));
        }
        for (j, h) in generators.iter().enumerate().take(i) {
            if !g.commutes(h)? {
                return Err(Error::InvalidGenerators(format!("generators {j} and {i} anticommute")));
            }
        }
    }
    if crate::gf2::rank(
        &generators.iter().map(|g| g.symplectic_vector()).collect::<Vec<_>>(),
    )? != generators.len()
    {
        return Err(Error::InvalidGenerators("generators are dependent".into()));
    }
    let mut rho = DenseMatrix::identity(dim);
    for g in generators {
        let factor = DenseMatrix::identity(dim).add(&pauli_to_dense(g)?);
        rho = rho.matmul(&factor);
    }
    Ok(rho.scale(1.0 / dim as f64))
}

/// Real part of Tr((I + P)/2 · ρ); the imaginary part must vanish.
pub fn expectation_dense(rho: &DenseMatrix, p: &PauliOperator) -> Result<f64> {
    let dense_p = pauli_to_dense(p)?;
    if dense_p.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(p.qubits(), rho.dim().trailing_zeros() as usize));
    }
    let e = DenseMatrix::identity(rho.dim()).add(&dense_p).scale(0.5);
    let tr = e.matmul(rho).trace();
    if tr.im.abs() >= TOL {
        return Err(Error::BadParameters(format!(
            "expectation has imaginary part {}",
            tr.im
        )));
    }
    Ok(tr.re)
}

/// Outcome of the state checks: Hermiticity, unit trace and the scaled
/// projector identity ρ² = ρ / 2^{n−ℓ}, which together certify a valid
/// stabiliser density matrix (PSD included) without an eigensolver.
#[derive(Debug, Clone)]
pub struct StateReport {
    pub hermitian: bool,
    pub trace_ok: bool,
    pub trace_residual: f64,
    pub projector_ok: bool,
    pub projector_residual: f64,
}

impl StateReport {
    pub fn all_ok(&self) -> bool {
        self.hermitian && self.trace_ok && self.projector_ok
    }
}

/// Check ρ against the stabiliser-state identities for rank parameter ℓ.
pub fn validate_state(rho: &DenseMatrix, l: usize, n: usize) -> StateReport {
    let hermitian = rho.is_hermitian(TOL);
    let trace_residual = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    let scale = 1.0 / 2f64.powi((n - l) as i32);
    let projector_residual = rho.matmul(rho).max_abs_diff(&rho.scale(scale));
    StateReport {
        hermitian,
        trace_ok: trace_residual <= TOL,
        trace_residual,
        projector_ok: projector_residual <= TOL,
        projector_residual,
    }
}
