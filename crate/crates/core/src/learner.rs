//! Generator harvesting and sign-resolved prediction.
//!
//! Learning is a single pass over the training set. Examples labelled 1 or 0
//! contribute a signed candidate generator (label 0 flips the sign); its
//! unsigned check vector either extends the GF(2) basis or, when dependent,
//! must reproduce the sign implied by the already-harvested generators.
//! Prediction solves the linear system over the harvested check vectors and
//! resolves the sign by multiplying out the selected generators; anything
//! outside the span (or anticommuting) predicts 1/2. Both directions are
//! exact on realizable data: there is no tolerance knob.

use crate::gf2::{IncrementalBasis, Insertion};
use crate::pauli::{product_sign, Expectation, PauliOperator};
use crate::tableau::parse_header;
use crate::{Error, Result};

/// One measurement/label pair: E = (I + P)/2 and Tr(Eρ).
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingExample {
    pub pauli: PauliOperator,
    pub label: f64,
}

impl TrainingExample {
    pub fn new(pauli: PauliOperator, label: f64) -> Self {
        TrainingExample { pauli, label }
    }

    /// Label snapped onto the Lemma-1 trichotomy.
    pub fn expectation(&self) -> Result<Expectation> {
        Expectation::from_label(self.label)
    }
}

/// The harvested hypothesis: an independent signed generator list plus the
/// echelon form of its unsigned check vectors.
///
/// Immutable once learned; prediction never mutates, so concurrent use is
/// free.
#[derive(Debug, Clone)]
pub struct LearnedHypothesis {
    n: usize,
    basis: IncrementalBasis,
    generators: Vec<PauliOperator>,
}

impl LearnedHypothesis {
    fn empty(n: usize) -> Self {
        LearnedHypothesis { n, basis: IncrementalBasis::new(2 * n), generators: Vec::new() }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    /// The harvested generator list L.
    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Predict Tr((I + P)/2 · ρ) from the harvested generators.
    pub fn predict(&self, p: &PauliOperator) -> Result<Expectation> {
        if p.qubits() != self.n {
            return Err(Error::DimensionMismatch(p.qubits(), self.n));
        }
        for g in &self.generators {
            if !g.commutes(p)? {
                return Ok(Expectation::Half);
            }
        }
        match self.basis.express(&p.symplectic_vector())? {
            None => Ok(Expectation::Half),
            Some(selection) => {
                let sign = product_sign(&self.generators, &selection)?;
                if sign == p.sign() {
                    Ok(Expectation::One)
                } else {
                    Ok(Expectation::Zero)
                }
            }
        }
    }

    /// Materialize σ = (1/2ⁿ) Σ_{S ∈ ⟨L⟩} S densely. Small n only.
    pub fn dense_hypothesis(&self) -> Result<crate::dense::DenseMatrix> {
        if self.n > crate::dense::MAX_DENSE_QUBITS {
            return Err(Error::TooLarge { n: self.n, max: crate::dense::MAX_DENSE_QUBITS });
        }
        let dim = 1usize << self.n;
        let mut sum = crate::dense::DenseMatrix::zeros(dim);
        for element in crate::pauli::enumerate_products(self.n, &self.generators)? {
            sum = sum.add(&crate::dense::pauli_to_dense(&element)?);
        }
        Ok(sum.scale(1.0 / dim as f64))
    }

    /// Serialize as `n=<n> l=<l>` followed by one signed generator per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} l={}\n", self.n, self.generators.len());
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Rebuild a hypothesis from its text form by replaying the generators
    /// through the learner as label-1 examples.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty hypothesis file".into()))?;
        let (n, l) = parse_header(header)?;
        let examples: Vec<TrainingExample> = lines
            .map(|line| Ok(TrainingExample::new(PauliOperator::parse(line)?, 1.0)))
            .collect::<Result<_>>()?;
        if examples.len() != l {
            return Err(Error::Parse(format!(
                "header says l={l} but found {} generators",
                examples.len()
            )));
        }
        if examples.iter().any(|e| e.pauli.qubits() != n) {
            return Err(Error::Parse("generator length does not match header n".into()));
        }
        let h = learn_n(n, &examples)?;
        if h.rank() != l {
            return Err(Error::Parse("hypothesis file generators are dependent".into()));
        }
        Ok(h)
    }
}

/// Harvest an independent signed generator list from the training set.
///
/// Single pass, in the given order. Contradictions are hard errors: the PAC
/// statement presumes realizable data, and silently mislearning would
/// corrupt the harness statistics downstream.
pub fn learn(examples: &[TrainingExample]) -> Result<LearnedHypothesis> {
    let n = match examples.first() {
        Some(e) => e.pauli.qubits(),
        None => return Err(Error::BadParameters("cannot infer qubit count from empty training set".into())),
    };
    learn_n(n, examples)
}

/// As [`learn`], with the qubit count given explicitly so the training set
/// may be empty.
pub fn learn_n(n: usize, examples: &[TrainingExample]) -> Result<LearnedHypothesis> {
    let mut h = LearnedHypothesis::empty(n);
    for (index, example) in examples.iter().enumerate() {
        if example.pauli.qubits() != n {
            return Err(Error::DimensionMismatch(example.pauli.qubits(), n));
        }
        let label = example.expectation()?;
        match label {
            Expectation::Half => {
                // Consistent 1/2 labels anticommute with some generator or
                // fall outside the span; anything else contradicts the data.
                if h.predict(&example.pauli)? != Expectation::Half {
                    return Err(Error::InconsistentTrainingSet(format!(
                        "example {index} ({}) has label 1/2 but its Pauli is in the learned group",
                        example.pauli
                    )));
                }
            }
            Expectation::One | Expectation::Zero => {
                let candidate = if label == Expectation::One {
                    example.pauli.clone()
                } else {
                    example.pauli.negated()
                };
                for g in &h.generators {
                    if !g.commutes(&candidate)? {
                        return Err(Error::InconsistentTrainingSet(format!(
                            "example {index} ({}) has a definite label but anticommutes with a learned generator",
                            example.pauli
                        )));
                    }
                }
                match h.basis.insert(&candidate.symplectic_vector())? {
                    Insertion::Added => h.generators.push(candidate),
                    Insertion::Dependent { coefficients } => {
                        let implied = product_sign(&h.generators, &coefficients)?;
                        if implied != candidate.sign() {
                            return Err(Error::InconsistentTrainingSet(format!(
                                "example {index} ({}) contradicts the sign implied by the learned generators",
                                example.pauli
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(h)
}

/// Serialize a training set: header `version=1 n=<n> m=<m>`, then one
/// `<signed-pauli> <label>` record per line with labels in {0, 0.5, 1}.
pub fn training_to_text(n: usize, examples: &[TrainingExample]) -> Result<String> {
    let mut out = format!("version=1 n={n} m={}\n", examples.len());
    for e in examples {
        if e.pauli.qubits() != n {
            return Err(Error::DimensionMismatch(e.pauli.qubits(), n));
        }
        out.push_str(&format!("{} {}\n", e.pauli, e.expectation()?));
    }
    Ok(out)
}

/// Parse a training file; returns the qubit count and the records.
pub fn training_from_text(text: &str) -> Result<(usize, Vec<TrainingExample>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty training file".into()))?;
    let mut version = None;
    let mut n = None;
    for field in header.split_whitespace() {
        if let Some(v) = field.strip_prefix("version=") {
            version = v.parse::<u32>().ok();
        } else if let Some(v) = field.strip_prefix("n=") {
            n = v.parse::<usize>().ok();
        }
    }
    if version != Some(1) {
        return Err(Error::Parse(format!("unsupported training file header: {header:?}")));
    }
    let n = n.ok_or_else(|| Error::Parse(format!("missing n in header: {header:?}")))?;
    let mut examples = Vec::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        let (Some(pauli), Some(label), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("bad training record: {line:?}")));
        };
        let pauli = PauliOperator::parse(pauli)?;
        if pauli.qubits() != n {
            return Err(Error::DimensionMismatch(pauli.qubits(), n));
        }
        let label: f64 =
            label.parse().map_err(|_| Error::Parse(format!("bad label in record: {line:?}")))?;
        Expectation::from_label(label)?;
        examples.push(TrainingExample::new(pauli, label));
    }
    Ok((n, examples))
}
