//! Bit-packed linear algebra over GF(2).
//!
//! [`Gf2Vector`] packs bits into machine words (qubit/column 0 is the lowest
//! bit of word 0). [`IncrementalBasis`] maintains a reduced echelon form one
//! insertion at a time, recording for every echelon row which of the
//! originally inserted vectors XOR to it, so dependence results come with a
//! coefficient certificate for free.

use crate::{Error, Result};

const WORD_BITS: usize = 64;

fn word_count(width: usize) -> usize {
    width.div_ceil(WORD_BITS)
}

/// A fixed-width vector over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    width: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(width: usize) -> Self {
        Gf2Vector { width, words: vec![0; word_count(width)] }
    }

    /// Build from an iterator of bits, lowest index first.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Gf2Vector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.width);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.width);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    pub fn lowest_set_bit(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the AND of two vectors (GF(2) inner product).
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        debug_assert_eq!(self.width, other.width);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.get(i))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

#[derive(Debug, Clone)]
struct EchelonRow {
    vector: Gf2Vector,
    pivot: usize,
    /// Which inserted originals (by Added index) XOR to `vector`.
    combination: Gf2Vector,
}

/// Outcome of inserting a vector into an [`IncrementalBasis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insertion {
    /// The vector was independent and now belongs to the basis.
    Added,
    /// The vector is in the span; `coefficients[i]` selects the i-th
    /// previously Added vector, and the selected vectors XOR to the input.
    Dependent { coefficients: Vec<bool> },
}

/// Reduced echelon form over GF(2), maintained incrementally.
///
/// Each insertion costs O(width * rank / 64) word operations. Pivot choice is
/// the lowest-index set bit, so the form is deterministic for a given
/// insertion order.
#[derive(Debug, Clone)]
pub struct IncrementalBasis {
    width: usize,
    rows: Vec<EchelonRow>,
    added: Vec<Gf2Vector>,
}

impl IncrementalBasis {
    pub fn new(width: usize) -> Self {
        IncrementalBasis { width, rows: Vec::new(), added: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Vectors accepted as independent, in insertion order.
    pub fn added(&self) -> &[Gf2Vector] {
        &self.added
    }

    /// Reduce `v` against the echelon rows without mutating the basis.
    /// Returns the coefficient certificate over Added vectors when `v` is in
    /// the span.
    pub fn express(&self, v: &Gf2Vector) -> Result<Option<Vec<bool>>> {
        let (residual, combo) = self.reduce(v)?;
        if residual.is_zero() {
            let coeffs: Vec<bool> = (0..self.added.len()).map(|i| combo.get(i)).collect();
            debug_assert!(self.certificate_holds(&coeffs, v));
            Ok(Some(coeffs))
        } else {
            Ok(None)
        }
    }

    /// Insert `v`, extending the basis when independent.
    pub fn insert(&mut self, v: &Gf2Vector) -> Result<Insertion> {
        let (residual, mut combo) = self.reduce(v)?;
        if residual.is_zero() {
            let coefficients: Vec<bool> = (0..self.added.len()).map(|i| combo.get(i)).collect();
            debug_assert!(self.certificate_holds(&coefficients, v));
            return Ok(Insertion::Dependent { coefficients });
        }
        let pivot = residual.lowest_set_bit().expect("nonzero residual has a set bit");
        combo.set(self.added.len(), true);
        // Keep the form fully reduced: clear the new pivot from existing rows.
        for row in &mut self.rows {
            if row.vector.get(pivot) {
                row.vector.xor_assign(&residual);
                row.combination.xor_assign(&combo);
            }
        }
        self.rows.push(EchelonRow { vector: residual, pivot, combination: combo });
        self.added.push(v.clone());
        Ok(Insertion::Added)
    }

    fn reduce(&self, v: &Gf2Vector) -> Result<(Gf2Vector, Gf2Vector)> {
        if v.width() != self.width {
            return Err(Error::WidthMismatch(v.width(), self.width));
        }
        let mut residual = v.clone();
        // Combination capacity: rank never exceeds width, plus one slot for
        // the vector being inserted.
        let mut combo = Gf2Vector::zeros(self.width + 1);
        for row in &self.rows {
            if residual.get(row.pivot) {
                residual.xor_assign(&row.vector);
                combo.xor_assign(&row.combination);
            }
        }
        Ok((residual, combo))
    }

    fn certificate_holds(&self, coeffs: &[bool], target: &Gf2Vector) -> bool {
        let mut acc = Gf2Vector::zeros(self.width);
        for (i, &c) in coeffs.iter().enumerate() {
            if c {
                acc.xor_assign(&self.added[i]);
            }
        }
        &acc == target
    }
}

/// Solve `XOR_i c_i rows_i = target` over GF(2).
///
/// The returned coefficients are checked by re-substitution before return;
/// `Ok(None)` means the target is not in the row span.
pub fn solve(rows: &[Gf2Vector], target: &Gf2Vector) -> Result<Option<Vec<bool>>> {
    let mut basis = IncrementalBasis::new(target.width());
    // Map basis Added-indices back to positions in `rows`.
    let mut added_at = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if let Insertion::Added = basis.insert(row)? {
            added_at.push(i);
        }
    }
    let Some(certificate) = basis.express(target)? else {
        return Ok(None);
    };
    let mut coefficients = vec![false; rows.len()];
    for (k, &c) in certificate.iter().enumerate() {
        coefficients[added_at[k]] = c;
    }
    let mut check = Gf2Vector::zeros(target.width());
    for (i, &c) in coefficients.iter().enumerate() {
        if c {
            check.xor_assign(&rows[i]);
        }
    }
    if &check != target {
        return Err(Error::BadParameters("solve postcondition failed".into()));
    }
    Ok(Some(coefficients))
}

/// GF(2) matrix rank.
pub fn rank(rows: &[Gf2Vector]) -> Result<usize> {
    let width = match rows.first() {
        Some(r) => r.width(),
        None => return Ok(0),
    };
    let mut basis = IncrementalBasis::new(width);
    for row in rows {
        basis.insert(row)?;
    }
    Ok(basis.rank())
}
