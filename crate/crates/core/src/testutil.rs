//! Helpers shared by module tests.

use rand::Rng;

use crate::gf2::Gf2Vector;
use crate::pauli::{PauliOperator, Sign};

/// Every signed Pauli string on `n` qubits, 2 * 4^n of them.
pub(crate) fn all_signed_paulis(n: usize) -> Vec<PauliOperator> {
    let mut out = Vec::with_capacity(2 << (2 * n));
    for mask in 0..4usize.pow(n as u32) {
        for sign in ["+", "-"] {
            let letters: String =
                (0..n).map(|q| ['I', 'X', 'Y', 'Z'][mask >> (2 * q) & 3]).collect();
            out.push(PauliOperator::parse(&format!("{sign}{letters}")).unwrap());
        }
    }
    out
}

/// Uniform random signed Pauli (identity string included).
pub(crate) fn random_signed_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliOperator {
    let x = Gf2Vector::from_bits((0..n).map(|_| rng.gen()));
    let z = Gf2Vector::from_bits((0..n).map(|_| rng.gen()));
    let sign = if rng.gen() { Sign::Minus } else { Sign::Plus };
    PauliOperator::from_masks(n, x, z, sign)
}
