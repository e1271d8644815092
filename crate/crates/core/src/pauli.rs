//! Signed n-qubit Pauli operators in the symplectic binary representation.
//!
//! An operator is stored as two n-bit masks plus a sign: bit q of the x-mask
//! is set iff the qubit-q factor is X or Y, bit q of the z-mask iff it is Y
//! or Z. Multiplication XORs the masks and tracks the i-power phase per word;
//! commutation is the symplectic inner product. The check-vector form
//! `[sign | x-block | z-block]` is the 2n+1-bit row used by the learner's
//! GF(2) machinery.

use std::fmt;

use crate::gf2::Gf2Vector;
use crate::{Error, Result};

/// Overall sign of a Hermitian Pauli operator; phases ±i never appear in
/// stabiliser groups and are confined to [`PhasedPauli`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The Lemma-1 trichotomy: Tr(Eρ) on a stabiliser state is 0, 1/2 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expectation {
    Zero,
    Half,
    One,
}

impl Expectation {
    pub fn value(self) -> f64 {
        match self {
            Expectation::Zero => 0.0,
            Expectation::Half => 0.5,
            Expectation::One => 1.0,
        }
    }

    /// Snap a numeric label onto the trichotomy (tolerance 1e-9).
    pub fn from_label(label: f64) -> Result<Expectation> {
        for e in [Expectation::Zero, Expectation::Half, Expectation::One] {
            if (label - e.value()).abs() <= 1e-9 {
                return Ok(e);
            }
        }
        Err(Error::BadLabel(label))
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::Zero => "0",
            Expectation::Half => "0.5",
            Expectation::One => "1",
        })
    }
}

/// A signed n-qubit Pauli operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x_mask: Gf2Vector,
    z_mask: Gf2Vector,
    sign: Sign,
}

/// A Pauli operator together with a power of i: `i^phase_exponent * base`.
/// Intermediate multiplication results live here; Hermitian results must
/// have an even exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasedPauli {
    base: PauliOperator,
    phase_exponent: u8,
}

/// The 2n+1-bit row `[sign | x-block | z-block]` of a signed Pauli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckVector {
    pub sign_bit: bool,
    pub x_block: Gf2Vector,
    pub z_block: Gf2Vector,
}

impl PauliOperator {
    /// The identity string `+I..I` on `n` qubits.
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            n,
            x_mask: Gf2Vector::zeros(n),
            z_mask: Gf2Vector::zeros(n),
            sign: Sign::Plus,
        }
    }

    pub fn from_masks(n: usize, x_mask: Gf2Vector, z_mask: Gf2Vector, sign: Sign) -> Self {
        assert_eq!(x_mask.width(), n);
        assert_eq!(z_mask.width(), n);
        PauliOperator { n, x_mask, z_mask, sign }
    }

    /// Single-qubit Z on `qubit`, identity elsewhere.
    pub fn single_z(n: usize, qubit: usize) -> Self {
        let mut z = Gf2Vector::zeros(n);
        z.set(qubit, true);
        PauliOperator { n, x_mask: Gf2Vector::zeros(n), z_mask: z, sign: Sign::Plus }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn x_mask(&self) -> &Gf2Vector {
        &self.x_mask
    }

    pub fn z_mask(&self) -> &Gf2Vector {
        &self.z_mask
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Gf2Vector, &mut Gf2Vector, &mut Sign) {
        (&mut self.x_mask, &mut self.z_mask, &mut self.sign)
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        let mut p = self.clone();
        p.sign = sign;
        p
    }

    pub fn negated(&self) -> Self {
        self.with_sign(self.sign.flip())
    }

    /// True when every factor is I, regardless of sign.
    pub fn is_unsigned_identity(&self) -> bool {
        self.x_mask.is_zero() && self.z_mask.is_zero()
    }

    /// Parse `['+'|'-'] [IXYZ]+` (an ASCII minus or the Unicode minus sign).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (sign, body) = match text.strip_prefix(['+']) {
            Some(rest) => (Sign::Plus, rest),
            None => match text.strip_prefix('-').or_else(|| text.strip_prefix('\u{2212}')) {
                Some(rest) => (Sign::Minus, rest),
                None => (Sign::Plus, text),
            },
        };
        if body.is_empty() {
            return Err(Error::MalformedPauli(text.to_string()));
        }
        let n = body.chars().count();
        let mut x = Gf2Vector::zeros(n);
        let mut z = Gf2Vector::zeros(n);
        for (q, c) in body.chars().enumerate() {
            let (xb, zb) = match c {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                _ => return Err(Error::MalformedPauli(text.to_string())),
            };
            x.set(q, xb);
            z.set(q, zb);
        }
        Ok(PauliOperator { n, x_mask: x, z_mask: z, sign })
    }

    /// Factor on qubit `q` as a letter.
    pub fn factor(&self, q: usize) -> char {
        match (self.x_mask.get(q), self.z_mask.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    /// Product with full phase tracking.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PhasedPauli> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut phase: u32 = 0;
        if self.sign == Sign::Minus {
            phase += 2;
        }
        if other.sign == Sign::Minus {
            phase += 2;
        }
        // Per-qubit i-powers, wordwise. f=+1 for the cyclic products
        // X*Y, Y*Z, Z*X and f=-1 (i.e. +3) for their reverses.
        let mut plus = 0u32;
        let mut minus = 0u32;
        for (((&x1, &z1), &x2), &z2) in self
            .x_mask
            .words()
            .iter()
            .zip(self.z_mask.words())
            .zip(other.x_mask.words())
            .zip(other.z_mask.words())
        {
            let cyclic = (x1 & !z1 & x2 & z2) | (x1 & z1 & !x2 & z2) | (!x1 & z1 & x2 & !z2);
            let anticyclic = (x1 & z1 & x2 & !z2) | (!x1 & z1 & x2 & z2) | (x1 & !z1 & !x2 & z2);
            plus += cyclic.count_ones();
            minus += anticyclic.count_ones();
        }
        phase = (phase + plus + 3 * minus) % 4;
        let mut x = self.x_mask.clone();
        x.xor_assign(&other.x_mask);
        let mut z = self.z_mask.clone();
        z.xor_assign(&other.z_mask);
        Ok(PhasedPauli {
            base: PauliOperator { n: self.n, x_mask: x, z_mask: z, sign: Sign::Plus },
            phase_exponent: phase as u8,
        })
    }

    /// Symplectic commutation test; signs are irrelevant.
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(self.x_mask.dot(&other.z_mask) == self.z_mask.dot(&other.x_mask))
    }

    pub fn to_check_vector(&self) -> CheckVector {
        CheckVector {
            sign_bit: self.sign == Sign::Minus,
            x_block: self.x_mask.clone(),
            z_block: self.z_mask.clone(),
        }
    }

    pub fn from_check_vector(v: &CheckVector) -> PauliOperator {
        let n = v.x_block.width();
        assert_eq!(v.z_block.width(), n);
        PauliOperator {
            n,
            x_mask: v.x_block.clone(),
            z_mask: v.z_block.clone(),
            sign: if v.sign_bit { Sign::Minus } else { Sign::Plus },
        }
    }

    /// The unsigned 2n symplectic bits `[x-block | z-block]` as one vector.
    pub fn symplectic_vector(&self) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(2 * self.n);
        for q in 0..self.n {
            v.set(q, self.x_mask.get(q));
            v.set(self.n + q, self.z_mask.get(q));
        }
        v
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign)?;
        for q in 0..self.n {
            write!(f, "{}", self.factor(q))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliOperator::parse(s)
    }
}

impl PhasedPauli {
    pub fn identity(n: usize) -> Self {
        PhasedPauli { base: PauliOperator::identity(n), phase_exponent: 0 }
    }

    pub fn base(&self) -> &PauliOperator {
        &self.base
    }

    pub fn phase_exponent(&self) -> u8 {
        self.phase_exponent
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PhasedPauli> {
        let mut product = self.base.multiply(other)?;
        product.phase_exponent = (product.phase_exponent + self.phase_exponent) % 4;
        Ok(product)
    }

    /// Collapse to a signed operator; errors on odd (±i) phase.
    pub fn into_hermitian(self) -> Result<PauliOperator> {
        match self.phase_exponent {
            0 => Ok(self.base),
            2 => Ok(self.base.negated()),
            _ => Err(Error::NonHermitianProduct),
        }
    }
}

impl fmt::Display for CheckVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} |", self.sign_bit as u8)?;
        for b in self.x_block.iter_bits() {
            write!(f, " {}", b as u8)?;
        }
        write!(f, " |")?;
        for b in self.z_block.iter_bits() {
            write!(f, " {}", b as u8)?;
        }
        write!(f, "]")
    }
}

/// Signed product of the selected generators, left to right.
///
/// `selection[i]` picks `generators[i]`. The generators are expected to
/// commute pairwise; an odd final phase reports the violated precondition.
pub fn product(generators: &[PauliOperator], selection: &[bool]) -> Result<PauliOperator> {
    assert_eq!(generators.len(), selection.len());
    let n = generators.first().map_or(0, |g| g.qubits());
    let mut acc = PhasedPauli::identity(n);
    for (g, &take) in generators.iter().zip(selection) {
        if take {
            acc = acc.multiply(g)?;
        }
    }
    acc.into_hermitian()
}

/// Sign of the product of the selected generators.
pub fn product_sign(generators: &[PauliOperator], selection: &[bool]) -> Result<Sign> {
    product(generators, selection).map(|p| p.sign())
}

/// All 2^ℓ signed products of the generators, the selection bits counting in
/// binary with generator 0 as the least significant bit. Capped at ℓ = 20.
pub fn enumerate_products(n: usize, generators: &[PauliOperator]) -> Result<Vec<PauliOperator>> {
    let l = generators.len();
    if l > 20 {
        return Err(Error::GroupTooLarge(l));
    }
    let mut elements = Vec::with_capacity(1 << l);
    for counter in 0..1usize << l {
        let selection: Vec<bool> = (0..l).map(|i| counter >> i & 1 == 1).collect();
        let mut acc = PhasedPauli::identity(n);
        for (g, &take) in generators.iter().zip(&selection) {
            if take {
                acc = acc.multiply(g)?;
            }
        }
        elements.push(acc.into_hermitian()?);
    }
    Ok(elements)
}
