//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

mod common;

use std::path::Path;
use std::time::Instant;

use common::{dense_expectation, median, random_gates, random_observable, random_param_circuit};
use guided_spsa::circuit::AnsatzSpec;
use guided_spsa::cli::{count, run_training};
use guided_spsa::config::{DatasetConfig, RunConfig};
use guided_spsa::exec::Parallelism;
use guided_spsa::grad::*;
use guided_spsa::sim::{run_gates, ExecutionMode, PauliZObservable};
use guided_spsa::train::{toy_objective, Estimator, TrainReport};
use guided_spsa::Seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn preset(name: &str) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.json"));
    RunConfig::load(path).unwrap()
}

fn train(cfg: &RunConfig) -> TrainReport {
    run_training(cfg, Parallelism::Rayon).unwrap().0
}

fn half_range(mut cfg: RunConfig) -> RunConfig {
    if let DatasetConfig::Friedman { feature_range, .. } = &mut cfg.dataset {
        *feature_range = [0.0, std::f64::consts::PI];
    }
    cfg
}

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail, notes: Vec::new() }
}

fn c1_param_shift_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let presets = [AnsatzSpec::friedman(), AnsatzSpec::iris(), AnsatzSpec::toy(), AnsatzSpec::boston(5)];
    let mut worst: f64 = 0.0;
    for draw in 0..100 {
        let (circuit, inputs) = if draw % 2 == 0 {
            let spec = &presets[(draw / 2) % presets.len()];
            let c = spec.build().unwrap();
            let x: Vec<f64> = (0..c.n_inputs()).map(|_| rng.random_range(-3.2..3.2)).collect();
            (c, x)
        } else {
            let n = rng.random_range(1..=5);
            let len = rng.random_range(2..=30);
            (random_param_circuit(&mut rng, n, len), Vec::new())
        };
        let theta: Vec<f64> = (0..circuit.n_params()).map(|_| rng.random_range(-3.2..3.2)).collect();
        let n = circuit.n_qubits();
        let obs = [PauliZObservable::all(n), random_observable(&mut rng, n)];
        let (ps, _) = param_shift_jacobian(&circuit, &inputs, &theta, &obs, &ExecutionMode::Ideal, Seed(0)).unwrap();
        let fd = finite_diff_jacobian(&circuit, &inputs, &theta, &obs, 1e-4).unwrap();
        worst = worst.max(ps.max_abs_diff(&fd));
    }
    outcome(worst < 1e-6, format!("max |PS - FD| over 100 draws = {worst:.3e} (< 1e-6)"))
}

fn c2_spsa_consistency() -> Outcome {
    let circuit = AnsatzSpec::friedman().build().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let x: Vec<f64> = (0..5).map(|_| rng.random_range(-3.1..3.1)).collect();
    let theta: Vec<f64> = (0..50).map(|_| rng.random_range(0.0..std::f64::consts::PI)).collect();
    let obs = [PauliZObservable::all(5)];
    let (ps, _) = param_shift_jacobian(&circuit, &x, &theta, &obs, &ExecutionMode::Ideal, Seed(0)).unwrap();
    let ks = [100usize, 1000, 10_000];
    let medians: Vec<f64> = ks
        .iter()
        .map(|&k| {
            let cfg = SpsaConfig::new(k, 0.01);
            median(
                (0..10u64)
                    .map(|s| {
                        let (j, _) =
                            spsa_jacobian(&circuit, &x, &theta, &obs, &cfg, &ExecutionMode::Ideal, Seed(s)).unwrap();
                        j.relative_error(&ps)
                    })
                    .collect(),
            )
        })
        .collect();
    let monotone = medians.windows(2).all(|w| w[1] < w[0]);
    let target = medians[2] < 0.05;
    let mut o = outcome(
        monotone && target,
        format!(
            "median relative error k=1e2: {:.4}, k=1e3: {:.4}, k=1e4: {:.4}; monotone {monotone}, k=1e4 below 0.05 {target}",
            medians[0], medians[1], medians[2]
        ),
    );
    o.notes.push(format!("Rademacher SPSA floor sqrt((n-1)/k) at k=1e4, n=50: {:.4}", (49.0f64 / 1e4).sqrt()));
    o
}

fn c3_schedule() -> Outcome {
    let s = make_schedule(50, 0.5, 100).unwrap();
    let pass = s.k_min == 5 && s.k_max == 50 && s.gamma == 0.45 && s.k_at(0) == 5 && s.k_at(99) == 49;
    outcome(
        pass,
        format!("k_min={} k_max={} gamma={} k_at(0)={} k_at(99)={}", s.k_min, s.k_max, s.gamma, s.k_at(0), s.k_at(99)),
    )
}

fn c4_suppression() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst: f64 = 0.0;
    let mut zero_ok = true;
    for i in 0..1000 {
        let len = rng.random_range(1..80);
        let row: Vec<f64> =
            if i % 50 == 0 { vec![0.0; len] } else { (0..len).map(|_| rng.random_range(-3.0..3.0)).collect() };
        let sigma = rng.random_range(0.0..5.0);
        let eps = rng.random_range(0.05..=1.0);
        let out = suppress(&Jacobian::from_rows(vec![row.clone()]), &[sigma], eps);
        if row.iter().all(|v| *v == 0.0) {
            zero_ok &= out.row(0) == row.as_slice();
        } else {
            worst = worst.max((out.row_norm(0) - eps * sigma).abs());
        }
    }
    outcome(worst < 1e-12 && zero_ok, format!("max |norm - eps*sigma| = {worst:.2e}; zero rows unchanged {zero_ok}"))
}

fn c5_counts() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, lo, hi) in [("friedman_guided_ideal", 0.74, 0.78), ("boston_guided_ideal", 0.81, 0.85)] {
        let cfg = preset(name);
        let ratio = count(&cfg).unwrap().ratio_vs_param_shift;
        let mut short = cfg.clone();
        short.epochs = 2;
        let predicted = count(&short).unwrap().counts;
        let actual = train(&short).counts;
        let ok = (lo..=hi).contains(&ratio) && predicted == actual;
        pass &= ok;
        parts.push(format!(
            "{name} ratio {ratio:.4}, 2-epoch run {} prediction",
            if predicted == actual { "matches" } else { "differs from" }
        ));
    }
    let spsamax = count(&preset("friedman_spsamax_ideal")).unwrap().ratio_vs_param_shift;
    pass &= spsamax == 1.0;
    parts.push(format!("spsamax ratio {spsamax}"));
    outcome(pass, parts.join("; "))
}

fn c6_tau_one() -> Outcome {
    let mut ps = preset("friedman_ps_ideal");
    ps.epochs = 5;
    let mut g = preset("friedman_guided_ideal");
    g.epochs = 5;
    g.estimator = Estimator::Guided { tau: 1.0, epsilon: None, c: 0.05 };
    let a = train(&ps);
    let b = train(&g);
    let identical = a.param_path.len() == 5
        && a.param_path
            .iter()
            .zip(&b.param_path)
            .all(|(x, y)| x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits()));
    outcome(identical && a.counts == b.counts, format!("5-epoch parameter trajectories bitwise identical: {identical}"))
}

fn best_val_medians(guided: &RunConfig, spsa: &RunConfig) -> (f64, f64) {
    let run = |base: &RunConfig| {
        median(
            (0..3u64)
                .map(|s| {
                    let mut c = base.clone();
                    c.seed = s;
                    train(&c).best_val_metric
                })
                .collect(),
        )
    };
    (run(guided), run(spsa))
}

fn c7_friedman_training() -> Outcome {
    let setup = |name: &str| {
        let mut c = preset(name);
        c.epochs = 40;
        c
    };
    let (g, s) = best_val_medians(&setup("friedman_guided_ideal"), &setup("friedman_spsa10_ideal"));
    let mut o = outcome(
        g <= s && g <= 0.12,
        format!("median best val MAE over 3 seeds, 40 epochs: guided {g:.4}, spsa10 {s:.4} (guided <= spsa10 {}, guided <= 0.12 {})", g <= s, g <= 0.12),
    );
    let (hg, hs) =
        best_val_medians(&half_range(setup("friedman_guided_ideal")), &half_range(setup("friedman_spsa10_ideal")));
    o.notes.push(format!("features mapped to [0, pi] instead: guided {hg:.4}, spsa10 {hs:.4}"));
    o
}

fn c8_zero_init_histograms() -> Outcome {
    let frac = |name: &str| {
        let mut c = preset(name);
        c.epochs = 1;
        c.histogram_epochs = vec![0];
        train(&c).histograms[&0].central_fraction()
    };
    let zp = frac("friedman_zeroinit_ps");
    let zg = frac("friedman_zeroinit_guided");
    let rp = frac("friedman_randinit_ps");
    let rg = frac("friedman_randinit_guided");
    let pass = zp > 0.9 && zg < 0.5 && rp < 0.5 && rg < 0.5;
    let mut o = outcome(
        pass,
        format!("central-bin fraction at epoch 0: zero-init ps {zp:.4} (> 0.9), zero-init guided {zg:.4}, random-init ps {rp:.4}, random-init guided {rg:.4} (< 0.5)"),
    );
    let circuit = AnsatzSpec::friedman().build().unwrap();
    let cfg = preset("friedman_zeroinit_ps");
    let data = cfg.load_data().unwrap();
    let (mut small, mut total) = (0usize, 0usize);
    for x in &data.train.features {
        let (j, _) = param_shift_jacobian(
            &circuit,
            x,
            &vec![0.0; 50],
            &[PauliZObservable::all(5)],
            &ExecutionMode::Ideal,
            Seed(0),
        )
        .unwrap();
        small += j.entries().iter().filter(|v| v.abs() < 0.005).count();
        total += j.entries().len();
    }
    o.notes.push(format!("at theta = 0 before any update: {:.4} of entries below 0.005", small as f64 / total as f64));
    o
}

fn c9_toy() -> Outcome {
    let n = 1_000_000usize;
    let pi = std::f64::consts::PI;
    let xs: Vec<f64> = (0..n).map(|i| -pi + 2.0 * pi * i as f64 / (n - 1) as f64).collect();
    let ls: Vec<f64> = xs.iter().map(|&x| toy_objective(x)).collect();
    let mut minima: Vec<(f64, f64)> =
        (1..n - 1).filter(|&i| ls[i] < ls[i - 1] && ls[i] <= ls[i + 1]).map(|i| (ls[i], xs[i])).collect();
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (l_star, x_star) = minima[0];
    let (l_local, x_local) = minima[1];
    let fixtures = (x_star - -2.168458223264696).abs() < 1e-5
        && (l_star - -1.8833112395050227).abs() < 1e-9
        && (l_local - -1.7732586821115977).abs() < 1e-9;

    let base = preset("toy_guided");
    let finals: Vec<f64> = (0..5u64)
        .map(|s| {
            let mut c = base.clone();
            c.seed = s;
            train(&c).trajectory.last().unwrap().loss
        })
        .collect();
    let hits = finals.iter().filter(|&&l| l <= l_star + 0.05).count();
    let mut o = outcome(
        fixtures && hits >= 3,
        format!(
            "x* = {x_star:.6}, L(x*) = {l_star:.6}, competing minimum L({x_local:.6}) = {l_local:.6}; guided within 0.05 of L* in {hits}/5 seeds"
        ),
    );
    let mut ps = preset("toy_ps");
    ps.seed = 0;
    o.notes.push(format!(
        "parameter-shift from the same initialization ends at L = {:.6}",
        train(&ps).trajectory.last().unwrap().loss
    ));
    o
}

fn loss_drops(base: &RunConfig) -> f64 {
    median(
        (0..3u64)
            .map(|s| {
                let mut c = base.clone();
                c.seed = s;
                let r = train(&c);
                1.0 - r.epochs.last().unwrap().train_loss / r.epochs[0].train_loss
            })
            .collect(),
    )
}

fn c10_shots() -> Outcome {
    let mut base = preset("friedman_guided_shots");
    base.epochs = 20;
    base.estimator = Estimator::Guided { tau: 0.5, epsilon: Some(0.5), c: 0.05 };
    let drop = loss_drops(&base);
    let mut o = outcome(
        drop >= 0.5,
        format!("median train-loss reduction epoch 0 to 19 over 3 seeds: {:.1}% (>= 50%)", 100.0 * drop),
    );
    o.notes.push(format!("features mapped to [0, pi] instead: {:.1}%", 100.0 * loss_drops(&half_range(base))));
    o
}

fn c11_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.random_range(1..=3);
        let len = rng.random_range(1..=15);
        let gates = random_gates(&mut rng, n, len);
        let obs = random_observable(&mut rng, n);
        let got = run_gates(n, &gates, std::slice::from_ref(&obs), &ExecutionMode::Ideal, Seed(0)).unwrap()[0];
        worst = worst.max((got - dense_expectation(n, &gates, &obs)).abs());
    }
    outcome(worst < 1e-10, format!("max deviation from dense Kronecker oracle over 500 circuits = {worst:.2e}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("parameter-shift exactness", c1_param_shift_exactness),
        ("SPSA consistency", c2_spsa_consistency),
        ("schedule arithmetic", c3_schedule),
        ("suppression law", c4_suppression),
        ("circuit-count reproduction", c5_counts),
        ("tau = 1 degeneracy", c6_tau_one),
        ("desk-scale Friedman training", c7_friedman_training),
        ("zero-init gradient concentration", c8_zero_init_histograms),
        ("toy problem", c9_toy),
        ("shot-mode stability", c10_shots),
        ("simulator oracle equivalence", c11_oracle),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        println!("{} criterion {:>2} ({name}): {} [{secs:.1}s]", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        for note in &o.notes {
            println!("     note: {note}");
        }
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
