//! Stabiliser states as generator tableaux.
//!
//! A state is a list of 1 ≤ ℓ ≤ n independent, pairwise-commuting signed
//! Pauli generators; ℓ = n is a pure state, ℓ < n the scaled projector onto
//! the joint +1 eigenspace. The tableau answers two-outcome Pauli
//! measurements exactly: Tr((I+P)/2 · ρ) is 1 when P is in the group, 0 when
//! −P is, and 1/2 otherwise.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf2::IncrementalBasis;
use crate::pauli::{product, product_sign, Expectation, PauliOperator};
use crate::{Error, Result};

/// Single Clifford gates used for random-state generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
}

/// A stabiliser state defined by its generator list.
///
/// Immutable after construction; gate application returns a new tableau.
#[derive(Debug, Clone)]
pub struct StabiliserTableau {
    n: usize,
    generators: Vec<PauliOperator>,
    /// Echelon form of the generators' unsigned symplectic vectors, built
    /// on first membership query and reused afterwards.
    basis: std::sync::OnceLock<IncrementalBasis>,
}

impl StabiliserTableau {
    /// Validate and adopt a generator list.
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self> {
        let l = generators.len();
        if l == 0 || l > n {
            return Err(Error::BadDimensions { n, l });
        }
        let mut basis = IncrementalBasis::new(2 * n);
        for (i, g) in generators.iter().enumerate() {
            if g.qubits() != n {
                return Err(Error::InvalidGenerators(format!(
                    "generator {i} acts on {} qubits, state has {n}",
                    g.qubits()
                )));
            }
            if g.is_unsigned_identity() {
                return Err(Error::InvalidGenerators(format!("generator {i} is +/-identity")));
            }
            for (j, h) in generators.iter().enumerate().take(i) {
                if !g.commutes(h)? {
                    return Err(Error::InvalidGenerators(format!(
                        "generators {j} and {i} anticommute"
                    )));
                }
            }
            match basis.insert(&g.symplectic_vector())? {
                crate::gf2::Insertion::Added => {}
                crate::gf2::Insertion::Dependent { .. } => {
                    return Err(Error::InvalidGenerators(format!(
                        "generator {i} depends on earlier generators"
                    )));
                }
            }
        }
        let cell = std::sync::OnceLock::new();
        cell.set(basis).ok();
        Ok(StabiliserTableau { n, generators, basis: cell })
    }

    /// Clifford conjugation preserves the tableau invariants, so gate
    /// application skips re-validation.
    fn from_conjugated(n: usize, generators: Vec<PauliOperator>) -> Self {
        StabiliserTableau { n, generators, basis: std::sync::OnceLock::new() }
    }

    fn basis(&self) -> &IncrementalBasis {
        self.basis.get_or_init(|| {
            let mut basis = IncrementalBasis::new(2 * self.n);
            for g in &self.generators {
                basis.insert(&g.symplectic_vector()).expect("widths match");
            }
            basis
        })
    }

    /// The canonical seed state ⟨Z₁,…,Z_ℓ⟩ (|0..0⟩ marginal).
    pub fn computational_basis_state(n: usize, l: usize) -> Result<Self> {
        if l == 0 || l > n {
            return Err(Error::BadDimensions { n, l });
        }
        let generators = (0..l).map(|q| PauliOperator::single_z(n, q)).collect();
        Self::new(n, generators)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// Conjugate every generator by the gate.
    pub fn apply_gate(&self, gate: Gate) -> Result<Self> {
        match gate {
            Gate::H(q) | Gate::S(q) if q >= self.n => {
                return Err(Error::BadQubitIndex { index: q, n: self.n });
            }
            Gate::Cnot { control, target } => {
                if control >= self.n || target >= self.n {
                    return Err(Error::BadQubitIndex {
                        index: control.max(target),
                        n: self.n,
                    });
                }
                if control == target {
                    return Err(Error::BadQubitIndex { index: target, n: self.n });
                }
            }
            _ => {}
        }
        let mut generators = self.generators.clone();
        for g in &mut generators {
            conjugate_mut(g, gate);
        }
        Ok(Self::from_conjugated(self.n, generators))
    }

    /// A pseudo-random stabiliser state: the canonical state evolved by 2n²
    /// uniformly drawn Clifford gates. Deterministic in the seed.
    pub fn random_state(n: usize, l: usize, seed: u64) -> Result<Self> {
        if l == 0 || l > n {
            return Err(Error::BadDimensions { n, l });
        }
        let mut generators: Vec<PauliOperator> =
            (0..l).map(|q| PauliOperator::single_z(n, q)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..2 * n * n {
            let gate = random_gate(n, &mut rng);
            for g in &mut generators {
                conjugate_mut(g, gate);
            }
        }
        // Full validation once at the end doubles as a conjugation check.
        Self::new(n, generators)
    }

    /// The Lemma-1 oracle: Tr((I+P)/2 · ρ) ∈ {0, 1/2, 1}.
    pub fn expectation(&self, p: &PauliOperator) -> Result<Expectation> {
        if p.qubits() != self.n {
            return Err(Error::DimensionMismatch(p.qubits(), self.n));
        }
        // Anticommutation with any generator already rules out membership of
        // both P and -P.
        for g in &self.generators {
            if !g.commutes(p)? {
                return Ok(Expectation::Half);
            }
        }
        match self.basis().express(&p.symplectic_vector())? {
            None => Ok(Expectation::Half),
            Some(selection) => {
                let group_sign = product_sign(&self.generators, &selection)?;
                if group_sign == p.sign() {
                    Ok(Expectation::One)
                } else {
                    Ok(Expectation::Zero)
                }
            }
        }
    }

    /// Uniform draw over the 2^ℓ signed group elements.
    pub fn sample_group_element<R: Rng>(&self, rng: &mut R) -> PauliOperator {
        let selection: Vec<bool> = (0..self.generators.len()).map(|_| rng.gen()).collect();
        product(&self.generators, &selection).expect("tableau generators commute")
    }

    /// All 2^ℓ signed group elements, with the selection bits counting in
    /// binary (generator 0 is the least significant bit).
    pub fn enumerate_group(&self) -> Result<Vec<PauliOperator>> {
        crate::pauli::enumerate_products(self.n, &self.generators)
    }

    /// Serialize as `n=<n> l=<l>` followed by one signed Pauli per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} l={}\n", self.n, self.generators.len());
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty tableau file".into()))?;
        let (n, l) = parse_header(header)?;
        let generators: Vec<PauliOperator> =
            lines.map(PauliOperator::parse).collect::<Result<_>>()?;
        if generators.len() != l {
            return Err(Error::Parse(format!(
                "header says l={l} but found {} generators",
                generators.len()
            )));
        }
        Self::new(n, generators)
    }
}

impl fmt::Display for StabiliserTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn parse_header(header: &str) -> Result<(usize, usize)> {
    let mut n = None;
    let mut l = None;
    for field in header.split_whitespace() {
        if let Some(v) = field.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = field.strip_prefix("l=") {
            l = v.parse().ok();
        }
    }
    match (n, l) {
        (Some(n), Some(l)) => Ok((n, l)),
        _ => Err(Error::Parse(format!("bad header line: {header:?}"))),
    }
}

fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    // On one qubit only H and S are available.
    let kinds: &[u8] = if n == 1 { &[0, 1] } else { &[0, 1, 2] };
    match kinds.choose(rng).unwrap() {
        0 => Gate::H(rng.gen_range(0..n)),
        1 => Gate::S(rng.gen_range(0..n)),
        _ => {
            let control = rng.gen_range(0..n);
            let mut target = rng.gen_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            Gate::Cnot { control, target }
        }
    }
}

/// Standard tableau conjugation rules with sign updates:
/// H swaps X/Z (Y picks up a sign), S maps X→Y→−X, CNOT propagates
/// X control→target and Z target→control.
fn conjugate_mut(p: &mut PauliOperator, gate: Gate) {
    let (x, z, sign) = p.parts_mut();
    match gate {
        Gate::H(q) => {
            let (xb, zb) = (x.get(q), z.get(q));
            if xb && zb {
                *sign = sign.flip();
            }
            x.set(q, zb);
            z.set(q, xb);
        }
        Gate::S(q) => {
            let (xb, zb) = (x.get(q), z.get(q));
            if xb && zb {
                *sign = sign.flip();
            }
            z.set(q, zb ^ xb);
        }
        Gate::Cnot { control, target } => {
            let (xc, zc) = (x.get(control), z.get(control));
            let (xt, zt) = (x.get(target), z.get(target));
            if xc && zt && !(xt ^ zc) {
                *sign = sign.flip();
            }
            x.set(target, xt ^ xc);
            z.set(control, zc ^ zt);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(s: &str) -> PauliOperator {
        PauliOperator::parse(s).unwrap()
    }

    fn t(n: usize, gens: &[&str]) -> StabiliserTableau {
        StabiliserTableau::new(n, gens.iter().map(|s| p(s)).collect()).unwrap()
    }

    #[test]
    fn canonical_states() {
        let z = StabiliserTableau::computational_basis_state(1, 1).unwrap();
        assert_eq!(z.generators(), &[p("+Z")]);
        let z3 = StabiliserTableau::computational_basis_state(3, 3).unwrap();
        assert_eq!(z3.generators(), &[p("+ZII"), p("+IZI"), p("+IIZ")]);
        let mixed = StabiliserTableau::computational_basis_state(3, 1).unwrap();
        assert_eq!(mixed.generators(), &[p("+ZII")]);
        assert!(StabiliserTableau::computational_basis_state(3, 0).is_err());
        assert!(StabiliserTableau::computational_basis_state(3, 4).is_err());
    }

    #[test]
    fn invalid_generator_sets_are_rejected() {
        let anti = StabiliserTableau::new(1, vec![p("X"), p("Z")]);
        assert!(matches!(anti, Err(Error::BadDimensions { .. }) | Err(Error::InvalidGenerators(_))));
        let dep = StabiliserTableau::new(2, vec![p("ZI"), p("-ZI")]);
        assert!(matches!(dep, Err(Error::InvalidGenerators(_))));
        let id = StabiliserTableau::new(2, vec![p("II")]);
        assert!(matches!(id, Err(Error::InvalidGenerators(_))));
    }

    #[test]
    fn hadamard_takes_z_to_x() {
        let state = t(1, &["+Z"]).apply_gate(Gate::H(0)).unwrap();
        assert_eq!(state.generators(), &[p("+X")]);
    }

    #[test]
    fn s_gate_takes_x_to_y() {
        let state = t(1, &["+X"]).apply_gate(Gate::S(0)).unwrap();
        assert_eq!(state.generators(), &[p("+Y")]);
        let back = state.apply_gate(Gate::S(0)).unwrap();
        assert_eq!(back.generators(), &[p("-X")]);
    }

    #[test]
    fn bell_circuit() {
        let bell = t(2, &["+ZI", "+IZ"])
            .apply_gate(Gate::H(0))
            .unwrap()
            .apply_gate(Gate::Cnot { control: 0, target: 1 })
            .unwrap();
        // Same group as <+XX, +ZZ>, checked through the oracle on every
        // signed two-qubit Pauli.
        let reference = t(2, &["+XX", "+ZZ"]);
        for mask in 0..16u8 {
            for sign in ["+", "-"] {
                let letters: String = (0..2)
                    .map(|q| ['I', 'X', 'Y', 'Z'][(mask >> (2 * q) & 3) as usize])
                    .collect();
                let op = p(&format!("{sign}{letters}"));
                assert_eq!(bell.expectation(&op).unwrap(), reference.expectation(&op).unwrap());
            }
        }
    }

    #[test]
    fn bad_gate_indices() {
        let state = t(2, &["+ZI", "+IZ"]);
        assert!(state.apply_gate(Gate::H(2)).is_err());
        assert!(state.apply_gate(Gate::Cnot { control: 0, target: 0 }).is_err());
        assert!(state.apply_gate(Gate::Cnot { control: 0, target: 2 }).is_err());
    }

    #[test]
    fn random_state_is_deterministic_and_valid() {
        let a = StabiliserTableau::random_state(4, 4, 99).unwrap();
        let b = StabiliserTableau::random_state(4, 4, 99).unwrap();
        assert_eq!(a.generators(), b.generators());
        assert_eq!(a.rank(), 4);
        let c = StabiliserTableau::random_state(4, 4, 100).unwrap();
        // Overwhelmingly likely to differ.
        assert_ne!(a.generators(), c.generators());
    }

    #[test]
    fn lemma_one_examples() {
        let z = t(1, &["+Z"]);
        assert_eq!(z.expectation(&p("+Z")).unwrap(), Expectation::One);
        assert_eq!(z.expectation(&p("-Z")).unwrap(), Expectation::Zero);
        assert_eq!(z.expectation(&p("+X")).unwrap(), Expectation::Half);
        assert_eq!(z.expectation(&p("+I")).unwrap(), Expectation::One);

        let bell = t(2, &["+XX", "+ZZ"]);
        assert_eq!(bell.expectation(&p("+YY")).unwrap(), Expectation::Zero);
        assert_eq!(bell.expectation(&p("-YY")).unwrap(), Expectation::One);
        assert_eq!(bell.expectation(&p("+XI")).unwrap(), Expectation::Half);
    }

    #[test]
    fn mixed_state_commuting_nonmember_gives_half() {
        let mixed = t(2, &["+ZI"]);
        assert_eq!(mixed.expectation(&p("+IZ")).unwrap(), Expectation::Half);
        assert_eq!(mixed.expectation(&p("+ZI")).unwrap(), Expectation::One);
        assert_eq!(mixed.expectation(&p("-ZI")).unwrap(), Expectation::Zero);
    }

    #[test]
    fn enumerate_small_groups() {
        let z = t(1, &["+Z"]);
        assert_eq!(z.enumerate_group().unwrap(), vec![p("+I"), p("+Z")]);

        let bell = t(2, &["+XX", "+ZZ"]);
        assert_eq!(
            bell.enumerate_group().unwrap(),
            vec![p("+II"), p("+XX"), p("+ZZ"), p("-YY")]
        );
    }

    #[test]
    fn group_elements_are_distinct_and_stabilise() {
        for seed in 0..10 {
            let state = StabiliserTableau::random_state(4, 3, seed).unwrap();
            let group = state.enumerate_group().unwrap();
            assert_eq!(group.len(), 8);
            let distinct: HashSet<_> = group.iter().cloned().collect();
            assert_eq!(distinct.len(), 8);
            for e in &group {
                assert_eq!(state.expectation(e).unwrap(), Expectation::One);
            }
        }
    }

    #[test]
    fn group_closure() {
        let state = StabiliserTableau::random_state(3, 3, 1).unwrap();
        let group = state.enumerate_group().unwrap();
        let members: HashSet<_> = group.iter().cloned().collect();
        for a in &group {
            for b in &group {
                let ab = a.multiply(b).unwrap();
                assert_eq!(ab.phase_exponent() % 2, 0);
                assert!(members.contains(&ab.clone().into_hermitian().unwrap()));
            }
        }
    }

    #[test]
    fn sampler_frequencies_and_support() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);

        let z = t(1, &["+Z"]);
        let mut z_count = 0usize;
        for _ in 0..10_000 {
            let e = z.sample_group_element(&mut rng);
            assert_eq!(z.expectation(&e).unwrap(), Expectation::One);
            if e == p("+Z") {
                z_count += 1;
            }
        }
        let freq = z_count as f64 / 10_000.0;
        assert!((freq - 0.5).abs() < 0.02, "freq={freq}");

        let bell = t(2, &["+XX", "+ZZ"]);
        let support: HashSet<_> =
            (0..1000).map(|_| bell.sample_group_element(&mut rng)).collect();
        let expected: HashSet<_> = bell.enumerate_group().unwrap().into_iter().collect();
        assert_eq!(support, expected);
    }

    #[test]
    fn text_round_trip() {
        let state = StabiliserTableau::random_state(5, 3, 17).unwrap();
        let text = state.to_text();
        assert!(text.starts_with("n=5 l=3\n"));
        let back = StabiliserTableau::from_text(&text).unwrap();
        assert_eq!(back.generators(), state.generators());
    }

    #[test]
    fn rejects_bad_tableau_files() {
        assert!(StabiliserTableau::from_text("").is_err());
        assert!(StabiliserTableau::from_text("n=2 l=2\n+ZI\n").is_err());
        assert!(StabiliserTableau::from_text("nonsense\n+Z\n").is_err());
    }
}
