//! End-to-end PAC experiments.
//!
//! A run draws a random stabiliser state per trial, labels a training set
//! through the tableau oracle, learns a hypothesis and scores it on fresh
//! draws from the same measurement distribution. All randomness is derived
//! as a pure function of (master_seed, trial index), so reports are
//! identical at any thread count; with the `parallel` feature trials execute
//! on the rayon pool.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Deserialize;

use crate::learner::{learn_n, TrainingExample};
use crate::pauli::{PauliOperator, Sign};
use crate::tableau::StabiliserTableau;
use crate::{Error, Result};

/// A distribution D over signed Pauli measurements.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasurementDistribution {
    /// Every factor uniform over {I,X,Y,Z}; the all-identity string is
    /// redrawn unless `include_identity`; sign is -1 with probability 1/2
    /// when `random_sign`.
    UniformPauli {
        #[serde(default)]
        include_identity: bool,
        #[serde(default)]
        random_sign: bool,
    },
    /// Uniform over the 2^l stabiliser group elements of the trial state,
    /// negated with probability `negate_probability`.
    GroupUniform { negate_probability: f64 },
    /// Weighted mixture of sub-distributions.
    Mixture { components: Vec<MixtureComponent> },
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub distribution: MeasurementDistribution,
}

impl MeasurementDistribution {
    /// The default D: half uniform signed Paulis (which almost never hit
    /// stabiliser directions at large n), half group elements with a 1/4
    /// negation rate to exercise the sign machinery.
    pub fn default_mixture() -> Self {
        MeasurementDistribution::Mixture {
            components: vec![
                MixtureComponent {
                    weight: 0.5,
                    distribution: MeasurementDistribution::UniformPauli {
                        include_identity: false,
                        random_sign: true,
                    },
                },
                MixtureComponent {
                    weight: 0.5,
                    distribution: MeasurementDistribution::GroupUniform {
                        negate_probability: 0.25,
                    },
                },
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasurementDistribution::UniformPauli { .. } => Ok(()),
            MeasurementDistribution::GroupUniform { negate_probability } => {
                if !(0.0..=1.0).contains(negate_probability) {
                    return Err(Error::BadParameters(format!(
                        "negate_probability {negate_probability} outside [0, 1]"
                    )));
                }
                Ok(())
            }
            MeasurementDistribution::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::BadParameters("empty mixture".into()));
                }
                let mut total = 0.0;
                for c in components {
                    if c.weight <= 0.0 {
                        return Err(Error::BadParameters(format!(
                            "mixture weight {} not positive",
                            c.weight
                        )));
                    }
                    total += c.weight;
                    c.distribution.validate()?;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::BadParameters(format!(
                        "mixture weights sum to {total}, need 1"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Draw one measurement for the given trial state.
    pub fn sample<R: Rng>(&self, state: &StabiliserTableau, rng: &mut R) -> PauliOperator {
        match self {
            MeasurementDistribution::UniformPauli { include_identity, random_sign } => {
                let n = state.qubits();
                loop {
                    let mut x = crate::gf2::Gf2Vector::zeros(n);
                    let mut z = crate::gf2::Gf2Vector::zeros(n);
                    for q in 0..n {
                        let factor: u8 = rng.gen_range(0..4);
                        x.set(q, factor == 1 || factor == 2);
                        z.set(q, factor == 2 || factor == 3);
                    }
                    let sign = if *random_sign && rng.gen() { Sign::Minus } else { Sign::Plus };
                    let p = PauliOperator::from_masks(n, x, z, sign);
                    if *include_identity || !p.is_unsigned_identity() {
                        return p;
                    }
                }
            }
            MeasurementDistribution::GroupUniform { negate_probability } => {
                let element = state.sample_group_element(rng);
                if rng.gen_bool(*negate_probability) {
                    element.negated()
                } else {
                    element
                }
            }
            MeasurementDistribution::Mixture { components } => {
                let mut pick: f64 = rng.gen();
                for c in components {
                    pick -= c.weight;
                    if pick < 0.0 {
                        return c.distribution.sample(state, rng);
                    }
                }
                components.last().unwrap().distribution.sample(state, rng)
            }
        }
    }
}

impl fmt::Display for MeasurementDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementDistribution::UniformPauli { include_identity, random_sign } => write!(
                f,
                "uniform-pauli(include_identity={include_identity},random_sign={random_sign})"
            ),
            MeasurementDistribution::GroupUniform { negate_probability } => {
                write!(f, "group-uniform(negate_probability={negate_probability})")
            }
            MeasurementDistribution::Mixture { components } => {
                write!(f, "mixture(")?;
                for (i, c) in components.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}*{}", c.weight, c.distribution)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// The sample-complexity bound: smallest integer m with
/// m >= K/(γ²ε²) · (n/(γ²ε²) · ln²(1/(γε)) + ln(1/δ)).
///
/// The constant K is an existence constant; callers choose it (default 1 in
/// the experiment config) and reports echo the choice. Logarithms are
/// natural.
pub fn sample_complexity(n: usize, gamma: f64, epsilon: f64, delta: f64, k: f64) -> Result<u64> {
    if n == 0 {
        return Err(Error::BadParameters("n must be positive".into()));
    }
    for (name, value) in [("gamma", gamma), ("epsilon", epsilon), ("delta", delta)] {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::BadParameters(format!("{name}={value} outside (0, 1)")));
        }
    }
    if !(k > 0.0) {
        return Err(Error::BadParameters(format!("K={k} must be positive")));
    }
    let ge = gamma * epsilon;
    let log_ge = (1.0 / ge).ln();
    let bound = k / (ge * ge) * (n as f64 / (ge * ge) * log_ge * log_ge + (1.0 / delta).ln());
    Ok(bound.ceil() as u64)
}

/// Label `m` i.i.d. draws from D through the tableau oracle.
pub fn generate_training_set(
    state: &StabiliserTableau,
    distribution: &MeasurementDistribution,
    m: usize,
    seed: u64,
) -> Result<Vec<TrainingExample>> {
    distribution.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| {
            let pauli = distribution.sample(state, &mut rng);
            let label = state.expectation(&pauli)?.value();
            Ok(TrainingExample::new(pauli, label))
        })
        .collect()
}

fn default_test_set_size() -> usize {
    1000
}

fn default_gamma() -> f64 {
    0.25
}

fn default_k() -> f64 {
    1.0
}

/// Parameters that derive the training size from the Theorem-1 bound when
/// `m` is not given explicitly.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    pub epsilon: f64,
    pub delta: f64,
    #[serde(default = "default_k")]
    pub k: f64,
}

/// A full experiment description. Parses from TOML; see the repository
/// README for the schema.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub l: usize,
    pub trials: usize,
    pub master_seed: u64,
    /// Explicit training size; mutually exclusive with `bound`.
    pub m: Option<usize>,
    pub bound: Option<BoundParams>,
    #[serde(default = "default_test_set_size")]
    pub test_set_size: usize,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Defaults to the 50/50 uniform-Pauli / group-uniform mixture.
    pub distribution: Option<MeasurementDistribution>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 || self.l > self.n {
            return Err(Error::BadDimensions { n: self.n, l: self.l });
        }
        if self.trials == 0 {
            return Err(Error::BadParameters("trials must be >= 1".into()));
        }
        if !(self.gamma > 0.0 && self.gamma <= 0.5) {
            return Err(Error::BadParameters(format!(
                "gamma={} outside (0, 1/2]",
                self.gamma
            )));
        }
        match (&self.m, &self.bound) {
            (None, None) => {
                return Err(Error::BadParameters("need either m or [bound]".into()));
            }
            (Some(_), Some(_)) => {
                return Err(Error::BadParameters("m and [bound] are mutually exclusive".into()));
            }
            _ => {}
        }
        self.distribution().validate()
    }

    pub fn distribution(&self) -> MeasurementDistribution {
        self.distribution.clone().unwrap_or_else(MeasurementDistribution::default_mixture)
    }

    /// Explicit m, or the Theorem-1 bound evaluated at this config's gamma.
    pub fn training_size(&self) -> Result<usize> {
        match (&self.m, &self.bound) {
            (Some(m), _) => Ok(*m),
            (None, Some(b)) => {
                let m = sample_complexity(self.n, self.gamma, b.epsilon, b.delta, b.k)?;
                usize::try_from(m).map_err(|_| {
                    Error::BadParameters(format!("bound-derived m={m} does not fit in memory"))
                })
            }
            (None, None) => unreachable!("validated"),
        }
    }
}

/// One trial's outcome. Timing fields are excluded from canonical report
/// text so determinism checks can compare reports across thread counts.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial: usize,
    pub state_seed: u64,
    pub empirical_error: f64,
    pub learned_rank: usize,
    pub learn_micros: u128,
    pub predict_micros: u128,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config_echo: String,
    pub trials: Vec<TrialResult>,
    pub mean_error: f64,
    pub median_error: f64,
    pub max_error: f64,
    pub zero_error_fraction: f64,
}

impl ExperimentReport {
    /// Machine-readable text without timing fields.
    pub fn canonical_text(&self) -> String {
        self.render(false)
    }

    /// Full text including per-trial timings and a human summary.
    pub fn to_text(&self) -> String {
        self.render(true)
    }

    fn render(&self, timing: bool) -> String {
        let mut out = String::from("# stabpac experiment report v1\n");
        out.push_str(&self.config_echo);
        for t in &self.trials {
            out.push_str(&format!(
                "trial={} state_seed={} error={:.6} rank={}",
                t.trial, t.state_seed, t.empirical_error, t.learned_rank
            ));
            if timing {
                out.push_str(&format!(
                    " learn_us={} predict_us={}",
                    t.learn_micros, t.predict_micros
                ));
            }
            out.push('\n');
        }
        out.push_str(&format!("mean_error = {:.6}\n", self.mean_error));
        out.push_str(&format!("median_error = {:.6}\n", self.median_error));
        out.push_str(&format!("max_error = {:.6}\n", self.max_error));
        out.push_str(&format!("zero_error_fraction = {:.6}\n", self.zero_error_fraction));
        if timing {
            let learn_total: u128 = self.trials.iter().map(|t| t.learn_micros).sum();
            let predict_total: u128 = self.trials.iter().map(|t| t.predict_micros).sum();
            out.push_str(&format!(
                "# summary: {} trials, total learn {} us, total predict {} us\n",
                self.trials.len(),
                learn_total,
                predict_total
            ));
        }
        out
    }
}

/// SplitMix64, used to derive independent per-trial seed streams from the
/// master seed as a pure function of the trial index.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn trial_seed(master_seed: u64, trial: usize, stream: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64((trial as u64).wrapping_mul(3).wrapping_add(stream)))
}

fn run_trial(config: &ExperimentConfig, m: usize, trial: usize) -> Result<TrialResult> {
    let distribution = config.distribution();
    let state_seed = trial_seed(config.master_seed, trial, 0);
    let train_seed = trial_seed(config.master_seed, trial, 1);
    let test_seed = trial_seed(config.master_seed, trial, 2);

    let state = StabiliserTableau::random_state(config.n, config.l, state_seed)?;
    let training = generate_training_set(&state, &distribution, m, train_seed)?;

    let start = Instant::now();
    // Oracle-labelled data is realizable; an inconsistency here is a bug.
    let hypothesis = learn_n(config.n, &training)?;
    let learn_micros = start.elapsed().as_micros();

    let mut rng = ChaCha8Rng::seed_from_u64(test_seed);
    let mut errors = 0usize;
    let start = Instant::now();
    for _ in 0..config.test_set_size {
        let measurement = distribution.sample(&state, &mut rng);
        let truth = state.expectation(&measurement)?;
        let predicted = hypothesis.predict(&measurement)?;
        if (predicted.value() - truth.value()).abs() > config.gamma {
            errors += 1;
        }
    }
    let predict_micros = start.elapsed().as_micros();

    Ok(TrialResult {
        trial,
        state_seed,
        empirical_error: errors as f64 / config.test_set_size.max(1) as f64,
        learned_rank: hypothesis.rank(),
        learn_micros,
        predict_micros,
    })
}

fn config_echo(config: &ExperimentConfig, m: usize) -> String {
    let mut out = String::new();
    out.push_str(&format!("n = {}\n", config.n));
    out.push_str(&format!("l = {}\n", config.l));
    out.push_str(&format!("m = {m}\n"));
    if let Some(b) = &config.bound {
        out.push_str(&format!(
            "m_source = bound(epsilon={},delta={},k={})\n",
            b.epsilon, b.delta, b.k
        ));
    } else {
        out.push_str("m_source = explicit\n");
    }
    out.push_str(&format!("trials = {}\n", config.trials));
    out.push_str(&format!("test_set_size = {}\n", config.test_set_size));
    out.push_str(&format!("gamma = {}\n", config.gamma));
    out.push_str(&format!("master_seed = {}\n", config.master_seed));
    out.push_str(&format!("distribution = {}\n", config.distribution()));
    out.push_str("state_sampling = random Clifford circuit of length 2n^2 (not exact-uniform)\n");
    out
}

/// Run all trials. With the `parallel` feature trials are scheduled on the
/// rayon pool; results are keyed by trial index so aggregation is
/// order-independent.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let m = config.training_size()?;

    #[cfg(feature = "parallel")]
    let results: Result<Vec<TrialResult>> =
        (0..config.trials).into_par_iter().map(|i| run_trial(config, m, i)).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Result<Vec<TrialResult>> =
        (0..config.trials).map(|i| run_trial(config, m, i)).collect();

    aggregate(config, m, results?)
}

/// Sequential twin of [`run_experiment`], kept callable in parallel builds
/// so the bench suite can compare both schedules in one binary.
pub fn run_experiment_sequential(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let m = config.training_size()?;
    let results: Result<Vec<TrialResult>> =
        (0..config.trials).map(|i| run_trial(config, m, i)).collect();
    aggregate(config, m, results?)
}

fn aggregate(
    config: &ExperimentConfig,
    m: usize,
    mut trials: Vec<TrialResult>,
) -> Result<ExperimentReport> {
    trials.sort_by_key(|t| t.trial);
    let count = trials.len() as f64;
    let mut errors: Vec<f64> = trials.iter().map(|t| t.empirical_error).collect();
    errors.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = errors.iter().sum::<f64>() / count;
    let median = if errors.len() % 2 == 1 {
        errors[errors.len() / 2]
    } else {
        (errors[errors.len() / 2 - 1] + errors[errors.len() / 2]) / 2.0
    };
    let max = errors.last().copied().unwrap_or(0.0);
    let zero_fraction = errors.iter().filter(|&&e| e == 0.0).count() as f64 / count;
    Ok(ExperimentReport {
        config_echo: config_echo(config, m),
        trials,
        mean_error: mean,
        median_error: median,
        max_error: max,
        zero_error_fraction: zero_fraction,
    })
}
