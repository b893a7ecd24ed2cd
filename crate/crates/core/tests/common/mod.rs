//! Shared helpers for the integration tests: a dense-matrix reference
//! simulator and random circuit generators.
#![allow(dead_code)]

use guided_spsa::circuit::ParamCircuit;
use guided_spsa::sim::{AngleSource, Axis, Gate, GateOp, PauliZObservable};
use num_complex::Complex64;
use rand::Rng;

pub type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim).map(|i| (0..dim).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()).collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

/// exp(−iφP/2) = cos(φ/2) I − i sin(φ/2) P, written out from the Pauli matrices.
pub fn rotation(axis: Axis, phi: f64) -> Matrix {
    let (co, si) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let p: Matrix = match axis {
        Axis::X => vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]],
        Axis::Y => vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]],
        Axis::Z => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]],
    };
    (0..2).map(|i| (0..2).map(|j| identity(2)[i][j] * co + c(0.0, -si) * p[i][j]).collect()).collect()
}

/// Embeds single-qubit operators (one per qubit, qubit 0 rightmost).
fn embed(ops: &[Matrix]) -> Matrix {
    let mut out = vec![vec![c(1.0, 0.0)]];
    for op in ops.iter().rev() {
        out = kron(&out, op);
    }
    out
}

pub fn gate_matrix(n: usize, gate: &Gate) -> Matrix {
    match *gate {
        Gate::Rotation { axis, qubit, angle } => {
            let ops: Vec<Matrix> =
                (0..n).map(|q| if q == qubit { rotation(axis, angle) } else { identity(2) }).collect();
            embed(&ops)
        }
        Gate::Cnot { control, target } => {
            let p0 = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
            let p1 = vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
            let x = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
            let a: Vec<Matrix> = (0..n).map(|q| if q == control { p0.clone() } else { identity(2) }).collect();
            let b: Vec<Matrix> = (0..n)
                .map(|q| {
                    if q == control {
                        p1.clone()
                    } else if q == target {
                        x.clone()
                    } else {
                        identity(2)
                    }
                })
                .collect();
            add(&embed(&a), &embed(&b))
        }
    }
}

/// Full unitary of a bound gate list, applied left to right.
pub fn unitary(n: usize, gates: &[Gate]) -> Matrix {
    let mut u = identity(1 << n);
    for g in gates {
        u = matmul(&gate_matrix(n, g), &u);
    }
    u
}

/// Dense Pauli-Z string as a matrix.
pub fn observable_matrix(n: usize, obs: &PauliZObservable) -> Matrix {
    let z = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]];
    let ops: Vec<Matrix> = (0..n).map(|q| if obs.qubits().contains(&q) { z.clone() } else { identity(2) }).collect();
    embed(&ops)
}

/// ⟨0|U† A U|0⟩ from dense matrices.
pub fn dense_expectation(n: usize, gates: &[Gate], obs: &PauliZObservable) -> f64 {
    let u = unitary(n, gates);
    let psi: Vec<Complex64> = u.iter().map(|row| row[0]).collect();
    let a = observable_matrix(n, obs);
    let mut acc = c(0.0, 0.0);
    for i in 0..psi.len() {
        for j in 0..psi.len() {
            acc += psi[i].conj() * a[i][j] * psi[j];
        }
    }
    acc.re
}

pub fn random_gates<R: Rng>(rng: &mut R, n: usize, len: usize) -> Vec<Gate> {
    (0..len)
        .map(|_| {
            if n > 1 && rng.random_bool(0.3) {
                let control = rng.random_range(0..n);
                let mut target = rng.random_range(0..n - 1);
                if target >= control {
                    target += 1;
                }
                Gate::Cnot { control, target }
            } else {
                let axis = [Axis::X, Axis::Y, Axis::Z][rng.random_range(0..3)];
                Gate::Rotation {
                    axis,
                    qubit: rng.random_range(0..n),
                    angle: rng.random_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI),
                }
            }
        })
        .collect()
}

pub fn random_observable<R: Rng>(rng: &mut R, n: usize) -> PauliZObservable {
    let qubits: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    PauliZObservable::new(&qubits).unwrap()
}

/// Random parametrized circuit with densely numbered parameters, every
/// parameter used by exactly one rotation.
pub fn random_param_circuit<R: Rng>(rng: &mut R, n: usize, len: usize) -> ParamCircuit {
    let mut ops = Vec::with_capacity(len);
    let mut next = 0;
    for _ in 0..len {
        if n > 1 && rng.random_bool(0.25) {
            let control = rng.random_range(0..n);
            let mut target = rng.random_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            ops.push(GateOp::cnot(control, target));
        } else {
            let q = rng.random_range(0..n);
            let a = AngleSource::Param(next);
            next += 1;
            ops.push(match rng.random_range(0..3) {
                0 => GateOp::rx(q, a),
                1 => GateOp::ry(q, a),
                _ => GateOp::rz(q, a),
            });
        }
    }
    if next == 0 {
        ops.push(GateOp::ry(0, AngleSource::Param(0)));
    }
    ParamCircuit::new(n, ops).unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
