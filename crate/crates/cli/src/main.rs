//! Batch CLI for the stabiliser PAC-learning toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or data-format
//! error, 3 inconsistent training data.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stabpac::harness::{
    generate_training_set, run_experiment, sample_complexity, ExperimentConfig,
    MeasurementDistribution, MixtureComponent,
};
use stabpac::learner::{learn_n, training_from_text, training_to_text, LearnedHypothesis};
use stabpac::{dense, Error, PauliOperator, StabiliserTableau};

#[derive(Parser)]
#[command(name = "stabpac", version, about = "PAC learning of stabiliser states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random stabiliser state tableau
    GenState {
        /// Qubit count
        #[arg(short, long)]
        n: usize,
        /// Generator count (1 <= l <= n); defaults to n (pure state)
        #[arg(short, long)]
        l: Option<usize>,
        #[arg(long)]
        seed: u64,
        /// Output file; stdout when omitted
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exact expectation Tr((I+P)/2 rho) for a state file and Pauli string
    Expect {
        state_file: PathBuf,
        /// Signed Pauli string, e.g. "-XYZY"
        #[arg(allow_hyphen_values = true)]
        pauli: String,
    },
    /// Sample a labelled training set from a state
    GenTrain {
        state_file: PathBuf,
        /// Number of training examples
        #[arg(short, long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        dist: DistArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Harvest a generator list from a training file
    Learn {
        train_file: PathBuf,
        /// Hypothesis output file; stdout when omitted
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Predict an expectation from a learned hypothesis
    Predict {
        hypothesis_file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        pauli: String,
    },
    /// Run a multi-trial PAC experiment from a TOML config
    Experiment {
        config_file: PathBuf,
        /// Report output file; stdout when omitted
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the Theorem-1 training-set size bound
    SampleComplexity {
        #[arg(short, long)]
        n: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        /// The bound's free constant
        #[arg(long, default_value_t = 1.0)]
        k: f64,
    },
    /// Rebuild the dense state for a tableau or hypothesis file and check
    /// trace, Hermiticity and the projector identity (n <= 12)
    Verify {
        file: PathBuf,
        /// Also check that the dense state reproduces every label in this
        /// training file exactly
        #[arg(long)]
        train: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DistArgs {
    /// Measurement distribution: uniform-pauli, group-uniform or mixture
    #[arg(long, default_value = "mixture")]
    dist: String,
    /// uniform-pauli: allow the all-identity string
    #[arg(long)]
    include_identity: bool,
    /// uniform-pauli: negate with probability 1/2
    #[arg(long)]
    random_sign: bool,
    /// group-uniform: negation probability
    #[arg(long, default_value_t = 0.25)]
    negate_prob: f64,
}

impl DistArgs {
    fn build(&self) -> Result<MeasurementDistribution, Error> {
        let d = match self.dist.as_str() {
            "uniform-pauli" => MeasurementDistribution::UniformPauli {
                include_identity: self.include_identity,
                random_sign: self.random_sign,
            },
            "group-uniform" => {
                MeasurementDistribution::GroupUniform { negate_probability: self.negate_prob }
            }
            "mixture" => MeasurementDistribution::Mixture {
                components: vec![
                    MixtureComponent {
                        weight: 0.5,
                        distribution: MeasurementDistribution::UniformPauli {
                            include_identity: self.include_identity,
                            random_sign: true,
                        },
                    },
                    MixtureComponent {
                        weight: 0.5,
                        distribution: MeasurementDistribution::GroupUniform {
                            negate_probability: self.negate_prob,
                        },
                    },
                ],
            },
            other => {
                return Err(Error::BadParameters(format!("unknown distribution {other:?}")));
            }
        };
        d.validate()?;
        Ok(d)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InconsistentTrainingSet(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::GenState { n, l, seed, out } => {
            let l = l.unwrap_or(n);
            let state = StabiliserTableau::random_state(n, l, seed)?;
            write_output(out.as_ref(), &state.to_text())?;
            if out.is_some() {
                println!("{}", state.rank());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Expect { state_file, pauli } => {
            let state = StabiliserTableau::from_text(&read_file(&state_file)?)?;
            let p = PauliOperator::parse(&pauli)?;
            println!("{}", state.expectation(&p)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::GenTrain { state_file, m, seed, dist, out } => {
            let state = StabiliserTableau::from_text(&read_file(&state_file)?)?;
            let distribution = dist.build()?;
            let examples = generate_training_set(&state, &distribution, m, seed)?;
            write_output(out.as_ref(), &training_to_text(state.qubits(), &examples)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Learn { train_file, out } => {
            let (n, examples) = training_from_text(&read_file(&train_file)?)?;
            let hypothesis = learn_n(n, &examples)?;
            write_output(out.as_ref(), &hypothesis.to_text())?;
            if out.is_some() {
                println!("{}", hypothesis.rank());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Predict { hypothesis_file, pauli } => {
            let hypothesis = LearnedHypothesis::from_text(&read_file(&hypothesis_file)?)?;
            let p = PauliOperator::parse(&pauli)?;
            println!("{}", hypothesis.predict(&p)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment { config_file, out } => {
            let config = ExperimentConfig::from_toml(&read_file(&config_file)?)?;
            let report = run_experiment(&config)?;
            write_output(out.as_ref(), &report.to_text())?;
            if out.is_some() {
                println!(
                    "trials={} mean_error={:.6} zero_error_fraction={:.6}",
                    report.trials.len(),
                    report.mean_error,
                    report.zero_error_fraction
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SampleComplexity { n, gamma, epsilon, delta, k } => {
            println!("{}", sample_complexity(n, gamma, epsilon, delta, k)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, train } => {
            let hypothesis = LearnedHypothesis::from_text(&read_file(&file)?)?;
            let n = hypothesis.qubits();
            let sigma = hypothesis.dense_hypothesis()?;
            let report = dense::validate_state(&sigma, hypothesis.rank(), n);
            println!("hermitian = {}", report.hermitian);
            println!("trace_ok = {} (residual {:.3e})", report.trace_ok, report.trace_residual);
            println!(
                "projector_ok = {} (residual {:.3e})",
                report.projector_ok, report.projector_residual
            );
            let mut ok = report.all_ok();
            if let Some(train_path) = train {
                let (train_n, examples) = training_from_text(&read_file(&train_path)?)?;
                if train_n != n {
                    return Err(Error::DimensionMismatch(train_n, n));
                }
                let mut max_residual = 0f64;
                for e in &examples {
                    let predicted = dense::expectation_dense(&sigma, &e.pauli)?;
                    max_residual = max_residual.max((predicted - e.label).abs());
                }
                let consistent = max_residual <= 1e-9;
                println!(
                    "training_consistent = {consistent} (records {}, max residual {:.3e})",
                    examples.len(),
                    max_residual
                );
                ok &= consistent;
            }
            if ok {
                println!("verify = ok");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verify = failed");
                Ok(ExitCode::from(1))
            }
        }
    }
}
