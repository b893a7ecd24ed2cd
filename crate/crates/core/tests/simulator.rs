mod common;

use common::{dense_expectation, random_gates, random_observable};
use guided_spsa::sim::*;
use guided_spsa::Seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn matches_dense_oracle_on_random_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let len = rng.random_range(1..=12);
        let gates = random_gates(&mut rng, n, len);
        let obs = random_observable(&mut rng, n);
        let got = run_gates(n, &gates, std::slice::from_ref(&obs), &ExecutionMode::Ideal, Seed(0)).unwrap()[0];
        let want = dense_expectation(n, &gates, &obs);
        assert!((got - want).abs() < 1e-10, "got {got}, oracle {want}");
    }
}

#[test]
fn gates_preserve_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let mut state = StateVector::new(n).unwrap();
        for g in random_gates(&mut rng, n, 40) {
            state.apply(&g).unwrap();
        }
        assert!((state.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn known_states() {
    let mut s = StateVector::new(2).unwrap();
    s.apply(&Gate::Rotation { axis: Axis::X, qubit: 0, angle: std::f64::consts::PI }).unwrap();
    s.apply(&Gate::Cnot { control: 0, target: 1 }).unwrap();
    let both = PauliZObservable::new(&[0, 1]).unwrap();
    assert!((both.expectation(&s) - 1.0).abs() < 1e-12);
    assert!((PauliZObservable::single(1).expectation(&s) + 1.0).abs() < 1e-12);
    let mut rng = Seed(3).rng();
    assert_eq!(sample_expectation(&s, &both, 17, None, &mut rng).unwrap(), 1.0);
}

#[test]
fn shot_estimates_converge() {
    let gates = [Gate::Rotation { axis: Axis::Y, qubit: 0, angle: 1.1 }];
    let obs = [PauliZObservable::single(0)];
    let exact = 1.1f64.cos();
    let shots = 100_000;
    let sigma = ((1.0 - exact * exact) / shots as f64).sqrt();
    let mut inside = 0;
    for s in 0..100 {
        let v = run_gates(1, &gates, &obs, &ExecutionMode::Shots { shots }, Seed(s)).unwrap()[0];
        if (v - exact).abs() < 4.0 * sigma {
            inside += 1;
        }
    }
    assert!(inside >= 99, "{inside}/100 within 4 sigma");
}

#[test]
fn single_shot_is_an_eigenvalue() {
    let gates = [Gate::Rotation { axis: Axis::Y, qubit: 0, angle: 0.7 }];
    for s in 0..20 {
        let v = run_gates(1, &gates, &[PauliZObservable::single(0)], &ExecutionMode::Shots { shots: 1 }, Seed(s))
            .unwrap()[0];
        assert!(v == 1.0 || v == -1.0);
    }
}

#[test]
fn readout_noise_lowers_estimate_monotonically() {
    let n = 3;
    let gates: Vec<Gate> = (0..n).map(|q| Gate::Rotation { axis: Axis::X, qubit: q, angle: 0.0 }).collect();
    let obs = [PauliZObservable::all(n)];
    let mut last = f64::INFINITY;
    for p in [0.0, 0.05, 0.1] {
        let mode = ExecutionMode::Noisy { shots: 100_000, noise: NoiseModel::new(0.0, 0.0, p).unwrap() };
        let v = run_gates(n, &gates, &obs, &mode, Seed(4)).unwrap()[0];
        assert!(v < last, "p_readout {p}: {v} not below {last}");
        last = v;
    }
    // Three independent flips: E = (1 − 2p)³.
    assert!((last - 0.8f64.powi(3)).abs() < 0.01);
}

#[test]
fn zero_noise_matches_ideal_within_three_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gates = random_gates(&mut rng, 3, 15);
    let obs = [PauliZObservable::all(3)];
    let exact = run_gates(3, &gates, &obs, &ExecutionMode::Ideal, Seed(0)).unwrap()[0];
    let shots = 4096;
    let mode = ExecutionMode::Noisy { shots, noise: NoiseModel::new(0.0, 0.0, 0.0).unwrap() };
    let v = run_gates(3, &gates, &obs, &mode, Seed(6)).unwrap()[0];
    assert!((v - exact).abs() < 3.0 * ((1.0 - exact * exact) / shots as f64).sqrt() + 1e-12);
}

#[test]
fn depolarizing_noise_shrinks_expectation() {
    let gates = vec![
        Gate::Rotation { axis: Axis::Y, qubit: 0, angle: 0.2 },
        Gate::Cnot { control: 0, target: 1 },
        Gate::Cnot { control: 1, target: 0 },
        Gate::Rotation { axis: Axis::Y, qubit: 1, angle: 0.1 },
    ];
    let obs = [PauliZObservable::all(2)];
    let exact = run_gates(2, &gates, &obs, &ExecutionMode::Ideal, Seed(0)).unwrap()[0];
    let mode = ExecutionMode::Noisy { shots: 50_000, noise: NoiseModel::new(0.05, 0.1, 0.0).unwrap() };
    let noisy = run_gates(2, &gates, &obs, &mode, Seed(7)).unwrap()[0];
    assert!(noisy < exact - 0.05, "noisy {noisy} vs ideal {exact}");
}

#[test]
fn execution_is_seed_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let gates = random_gates(&mut rng, 3, 10);
    let obs = [PauliZObservable::all(3), PauliZObservable::single(1)];
    let mode = ExecutionMode::Noisy { shots: 256, noise: NoiseModel::new(0.01, 0.02, 0.03).unwrap() };
    let a = run_gates(3, &gates, &obs, &mode, Seed(9)).unwrap();
    let b = run_gates(3, &gates, &obs, &mode, Seed(9)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn capacity_limits() {
    assert!(StateVector::new(0).is_err());
    assert!(StateVector::new(MAX_QUBITS + 1).is_err());
}
