//! Acceptance suite: one test per release criterion, each printing a
//! `ACCEPTANCE PASS [..]` line on success. Tolerances are pinned in the
//! assertions; a failing criterion fails the test run.
//!
//! Run with `cargo test -p stabpac --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabpac::dense::{
    expectation_dense, pauli_to_dense, state_from_generators, validate_state, DenseMatrix,
};
use stabpac::gf2::{self, Gf2Vector};
use stabpac::harness::{
    generate_training_set, run_experiment, sample_complexity, ExperimentConfig,
    MeasurementDistribution,
};
use stabpac::learner::{learn_n, TrainingExample};
use stabpac::pauli::{Expectation, PauliOperator, Sign};
use stabpac::tableau::{Gate, StabiliserTableau};

fn all_signed_paulis(n: usize) -> Vec<PauliOperator> {
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

fn random_signed_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliOperator {
    let x = Gf2Vector::from_bits((0..n).map(|_| rng.gen()));
    let z = Gf2Vector::from_bits((0..n).map(|_| rng.gen()));
    let sign = if rng.gen() { Sign::Minus } else { Sign::Plus };
    PauliOperator::from_masks(n, x, z, sign)
}

fn unsigned_in_span(generators: &[PauliOperator], p: &PauliOperator) -> bool {
    let rows: Vec<Gf2Vector> = generators.iter().map(|g| g.symplectic_vector()).collect();
    gf2::solve(&rows, &p.symplectic_vector()).unwrap().is_some()
}

#[test]
fn criterion_01_check_vector_golden() {
    let start = Instant::now();
    let op = PauliOperator::parse("-XYZY").unwrap();
    let rendered = op.to_check_vector().to_string();
    let elapsed = start.elapsed();
    assert_eq!(rendered, "[1 | 1 1 0 1 | 0 1 1 1]");
    assert!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    println!("ACCEPTANCE PASS [1] check-vector golden: r(-XYZY) = {rendered} ({elapsed:?})");
}

#[test]
fn criterion_02_lemma_trichotomy_and_dense_equivalence() {
    let start = Instant::now();
    let mut checked = 0usize;

    // n in 1..=3: 1000 random circuits per n, all signed Paulis each.
    for n in 1..=3usize {
        let paulis = all_signed_paulis(n);
        for seed in 0..1000u64 {
            let l = 1 + (seed as usize % n);
            let state = StabiliserTableau::random_state(n, l, 1000 * n as u64 + seed).unwrap();
            let rho = state_from_generators(state.generators(), n).unwrap();
            for p in &paulis {
                let fast = state.expectation(p).unwrap();
                assert!([0.0, 0.5, 1.0].contains(&fast.value()));
                let dense = expectation_dense(&rho, p).unwrap();
                assert!(
                    (fast.value() - dense).abs() <= 1e-9,
                    "n={n} seed={seed} p={p}: tableau {fast} vs dense {dense}"
                );
                checked += 1;
            }
        }
    }

    // n in 4..=8: 200 random (state, Pauli) pairs per n.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 4..=8usize {
        for state_index in 0..8u64 {
            let l = 1 + (state_index as usize * 3) % n;
            let state = StabiliserTableau::random_state(n, l, 77 * n as u64 + state_index).unwrap();
            let rho = state_from_generators(state.generators(), n).unwrap();
            for _ in 0..25 {
                let p = random_signed_pauli(n, &mut rng);
                let fast = state.expectation(&p).unwrap();
                assert!([0.0, 0.5, 1.0].contains(&fast.value()));
                let dense = expectation_dense(&rho, &p).unwrap();
                assert!(
                    (fast.value() - dense).abs() <= 1e-9,
                    "n={n} p={p}: tableau {fast} vs dense {dense}"
                );
                checked += 1;
            }
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "ACCEPTANCE PASS [2] Lemma-1 trichotomy + dense equivalence: {checked} pairs ({elapsed:?})"
    );
}

fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = DenseMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

fn gate_unitary(gate: Gate, n: usize) -> DenseMatrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match gate {
        Gate::H(q) | Gate::S(q) => {
            let mut local = DenseMatrix::zeros(2);
            match gate {
                Gate::H(_) => {
                    let s = 1.0 / 2f64.sqrt();
                    local[(0, 0)] = c(s, 0.0);
                    local[(0, 1)] = c(s, 0.0);
                    local[(1, 0)] = c(s, 0.0);
                    local[(1, 1)] = c(-s, 0.0);
                }
                _ => {
                    local[(0, 0)] = c(1.0, 0.0);
                    local[(1, 1)] = c(0.0, 1.0);
                }
            }
            let mut u = DenseMatrix::identity(1);
            for qubit in 0..n {
                let factor = if qubit == q { local.clone() } else { DenseMatrix::identity(2) };
                u = kron(&u, &factor);
            }
            u
        }
        Gate::Cnot { control, target } => {
            let dim = 1usize << n;
            let mut u = DenseMatrix::zeros(dim);
            for row in 0..dim {
                // Qubit 0 owns the most significant index bit.
                let control_bit = row >> (n - 1 - control) & 1;
                let col = if control_bit == 1 { row ^ (1 << (n - 1 - target)) } else { row };
                u[(col, row)] = c(1.0, 0.0);
            }
            u
        }
    }
}

#[test]
fn criterion_03_gate_soundness() {
    let start = Instant::now();
    let mut checked = 0usize;
    for n in 1..=3usize {
        let mut gates = Vec::new();
        for q in 0..n {
            gates.push(Gate::H(q));
            gates.push(Gate::S(q));
        }
        for control in 0..n {
            for target in 0..n {
                if control != target {
                    gates.push(Gate::Cnot { control, target });
                }
            }
        }
        for p in all_signed_paulis(n) {
            if p.is_unsigned_identity() {
                continue; // fixed by conjugation, and not a valid generator
            }
            let state = StabiliserTableau::new(n, vec![p.clone()]).unwrap();
            for &gate in &gates {
                let conjugated = state.apply_gate(gate).unwrap().generators()[0].clone();
                let u = gate_unitary(gate, n);
                let expected = u.matmul(&pauli_to_dense(&p).unwrap()).matmul(&u.adjoint());
                let got = pauli_to_dense(&conjugated).unwrap();
                assert!(
                    got.max_abs_diff(&expected) <= 1e-9,
                    "n={n} gate={gate:?} input={p} output={conjugated}"
                );
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("ACCEPTANCE PASS [3] gate soundness: {checked} conjugations ({elapsed:?})");
}

#[test]
fn criterion_04_learner_exactness_on_full_generating_sets() {
    let start = Instant::now();
    for n in 1..=5usize {
        for seed in 0..5u64 {
            let state = StabiliserTableau::random_state(n, n, 40 * n as u64 + seed).unwrap();
            // Training set containing a full generating set plus noise draws.
            let mut examples: Vec<TrainingExample> = state
                .generators()
                .iter()
                .map(|g| TrainingExample::new(g.clone(), 1.0))
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..4 * n {
                let p = random_signed_pauli(n, &mut rng);
                examples.push(TrainingExample::new(
                    p.clone(),
                    state.expectation(&p).unwrap().value(),
                ));
            }
            let hypothesis = learn_n(n, &examples).unwrap();
            for p in all_signed_paulis(n) {
                let truth = state.expectation(&p).unwrap();
                let predicted = hypothesis.predict(&p).unwrap();
                assert_eq!(predicted, truth, "n={n} seed={seed} p={p}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("ACCEPTANCE PASS [4] learner exactness on full generating sets ({elapsed:?})");
}

#[test]
fn criterion_05_definition_3_feasibility() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    let d = MeasurementDistribution::default_mixture();
    for pair in 0..200u64 {
        let n = 1 + (pair as usize % 6);
        let l = 1 + rng.gen_range(0..n);
        let state = StabiliserTableau::random_state(n, l, 9000 + pair).unwrap();
        let m = 3 * n + 5;
        let training = generate_training_set(&state, &d, m, 100 + pair).unwrap();
        let hypothesis = learn_n(n, &training).unwrap();
        let sigma = hypothesis.dense_hypothesis().unwrap();

        let report = validate_state(&sigma, hypothesis.rank(), n);
        assert!(report.hermitian, "pair {pair}");
        assert!(report.trace_residual <= 1e-9, "pair {pair}: trace {}", report.trace_residual);
        assert!(
            report.projector_residual <= 1e-9,
            "pair {pair}: projector {}",
            report.projector_residual
        );
        for e in &training {
            let reproduced = expectation_dense(&sigma, &e.pauli).unwrap();
            assert!(
                (reproduced - e.label).abs() <= 1e-9,
                "pair {pair} {}: {} vs label {}",
                e.pauli,
                reproduced,
                e.label
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("ACCEPTANCE PASS [5] Definition-3 feasibility on 200 pairs ({elapsed:?})");
}

#[test]
fn criterion_06_error_characterisation() {
    let start = Instant::now();
    let d = MeasurementDistribution::default_mixture();
    let mut errors_seen = 0usize;
    for n in 1..=4usize {
        let paulis = all_signed_paulis(n);
        for seed in 0..8u64 {
            let l = 1 + (seed as usize % n);
            let state = StabiliserTableau::random_state(n, l, 300 * n as u64 + seed).unwrap();
            let training = generate_training_set(&state, &d, 2 * n, seed).unwrap();
            let hypothesis = learn_n(n, &training).unwrap();
            for p in &paulis {
                let truth = state.expectation(p).unwrap();
                let predicted = hypothesis.predict(p).unwrap();
                if predicted == truth {
                    continue;
                }
                errors_seen += 1;
                // The only permitted error: a definite truth answered 1/2
                // on an unseen stabiliser direction.
                assert_ne!(truth, Expectation::Half, "n={n} seed={seed} p={p}");
                assert_eq!(predicted, Expectation::Half, "n={n} seed={seed} p={p}");
                assert!(unsigned_in_span(state.generators(), p), "n={n} seed={seed} p={p}");
                assert!(
                    !unsigned_in_span(hypothesis.generators(), p),
                    "n={n} seed={seed} p={p}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "ACCEPTANCE PASS [6] error characterisation: {errors_seen} errors, all of the permitted type ({elapsed:?})"
    );
}

#[test]
fn criterion_07_pac_learning_curve() {
    let start = Instant::now();
    let n = 16;

    // Group-uniform training fills the span with overwhelming probability.
    let config = ExperimentConfig {
        n,
        l: n,
        trials: 100,
        master_seed: 77,
        m: Some(n + 30),
        bound: None,
        test_set_size: 1000,
        gamma: 0.25,
        distribution: Some(MeasurementDistribution::GroupUniform { negate_probability: 0.25 }),
    };
    let report = run_experiment(&config).unwrap();
    assert!(
        report.zero_error_fraction >= 0.99,
        "zero-error fraction {}",
        report.zero_error_fraction
    );

    // Under the default mixture the median error must not increase with m.
    let mut medians = Vec::new();
    for m in [n / 2, n, 2 * n, 4 * n] {
        let config = ExperimentConfig {
            n,
            l: n,
            trials: 100,
            master_seed: 78,
            m: Some(m),
            bound: None,
            test_set_size: 1000,
            gamma: 0.25,
            distribution: None,
        };
        medians.push(run_experiment(&config).unwrap().median_error);
    }
    for pair in medians.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12, "medians not non-increasing: {medians:?}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!(
        "ACCEPTANCE PASS [7] PAC learning curve: zero-error fraction {:.2}, medians {medians:?} ({elapsed:?})",
        report.zero_error_fraction
    );
}

#[test]
fn criterion_08_complexity_envelope() {
    let d = MeasurementDistribution::GroupUniform { negate_probability: 0.25 };

    let time_learn = |n: usize| -> Duration {
        let state = StabiliserTableau::random_state(n, n, 5).unwrap();
        let training = generate_training_set(&state, &d, 4096, 6).unwrap();
        let start = Instant::now();
        let hypothesis = learn_n(n, &training).unwrap();
        let elapsed = start.elapsed();
        assert_eq!(hypothesis.rank(), n);
        elapsed
    };

    let base = time_learn(512);
    assert!(base < Duration::from_secs(10), "learning at n=512 took {base:?}");

    let doubled = time_learn(1024);
    let factor = doubled.as_secs_f64() / base.as_secs_f64();
    let verdict = if factor <= 10.0 { "within" } else { "OUTSIDE (informational)" };
    println!(
        "ACCEPTANCE PASS [8] complexity envelope: n=512 in {base:?}; n=1024 in {doubled:?}, growth factor {factor:.2} {verdict} 10x"
    );
}

#[test]
fn criterion_09_sample_complexity_calculator() {
    let start = Instant::now();
    // Golden values frozen from a 50-digit evaluation of the bound.
    let grid: [(usize, f64, f64, f64, f64, u64); 20] = [
        (4, 0.25, 0.25, 0.01, 1.0, 2016345),
        (1, 0.1, 0.1, 0.1, 1.0, 2120782271),
        (2, 0.2, 0.3, 0.05, 1.0, 1222326),
        (8, 0.25, 0.25, 0.01, 1.0, 4031511),
        (16, 0.25, 0.25, 0.01, 1.0, 8061843),
        (16, 0.125, 0.25, 0.01, 1.0, 201521316),
        (16, 0.25, 0.125, 0.01, 1.0, 201521316),
        (16, 0.25, 0.25, 0.001, 1.0, 8062433),
        (16, 0.25, 0.25, 0.01, 2.5, 20154608),
        (32, 0.3, 0.2, 0.02, 1.0, 19544988),
        (64, 0.4, 0.4, 0.05, 0.5, 164041),
        (100, 0.45, 0.45, 0.2, 1.0, 151716),
        (10, 0.05, 0.05, 0.01, 1.0, 9189798476156),
        (20, 0.05, 0.05, 0.01, 1.0, 18379596215485),
        (3, 0.33, 0.17, 0.07, 1.2, 3016955),
        (7, 0.12, 0.34, 0.02, 0.8, 20684033),
        (50, 0.2, 0.2, 0.5, 1.0, 202366871),
        (5, 0.49, 0.49, 0.49, 1.0, 3075),
        (12, 0.15, 0.25, 0.03, 3.0, 196266134),
        (256, 0.25, 0.25, 0.01, 1.0, 128971803),
    ];
    for (n, gamma, epsilon, delta, k, want) in grid {
        let got = sample_complexity(n, gamma, epsilon, delta, k).unwrap();
        assert_eq!(got, want, "n={n} gamma={gamma} epsilon={epsilon} delta={delta} k={k}");
    }

    // Monotone in n, 1/gamma, 1/epsilon, 1/delta.
    let base = sample_complexity(8, 0.25, 0.25, 0.05, 1.0).unwrap();
    assert!(sample_complexity(16, 0.25, 0.25, 0.05, 1.0).unwrap() >= base);
    assert!(sample_complexity(8, 0.125, 0.25, 0.05, 1.0).unwrap() >= base);
    assert!(sample_complexity(8, 0.25, 0.125, 0.05, 1.0).unwrap() >= base);
    assert!(sample_complexity(8, 0.25, 0.25, 0.025, 1.0).unwrap() >= base);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("ACCEPTANCE PASS [9] sample-complexity calculator: 20-point grid exact ({elapsed:?})");
}

#[test]
fn criterion_10_report_determinism_across_thread_counts() {
    let config = ExperimentConfig {
        n: 10,
        l: 10,
        trials: 16,
        master_seed: 4242,
        m: Some(40),
        bound: None,
        test_set_size: 200,
        gamma: 0.25,
        distribution: None,
    };

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_experiment(&config).unwrap());
    let multi = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run_experiment(&config).unwrap());

    assert_eq!(single.canonical_text(), multi.canonical_text());
    println!("ACCEPTANCE PASS [10] identical reports at 1 and 4 worker threads");
}
