#!/usr/bin/env python3
"""Regenerates the preset run configs in configs/."""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "configs"

MODES = {
    "ideal": {"type": "ideal"},
    "shots": {"type": "shots", "shots": 1024},
    "noisy": {
        "type": "noisy",
        "shots": 1024,
        "noise": {"p1": 0.001, "p2": 0.01, "p_readout": 0.02},
    },
}


def estimators(tau):
    return {
        "ps": {"type": "param_shift"},
        "spsa10": {"type": "spsa", "k": 10, "c": 0.05},
        "spsa20": {"type": "spsa", "k": 20, "c": 0.05},
        "spsa30": {"type": "spsa", "k": 30, "c": 0.05},
        "spsamax": {"type": "spsa", "k": "max", "c": 0.05},
        "guided": {"type": "guided", "tau": tau, "c": 0.05},
    }


FRIEDMAN = {
    "task": "regression",
    "dataset": {"kind": "friedman", "n": 500, "noise_std": 0.0, "seed": 0, "split_seed": 0},
    "ansatz": {"n_qubits": 5, "n_layers": 5, "encoding": {"type": "angle_once", "n_inputs": 5}},
}

BOSTON = {
    "task": "regression",
    "dataset": {"kind": "csv", "path": "../data/boston.csv", "target_column": "NOX", "split_seed": 0},
    "ansatz": {
        "n_qubits": 4,
        "n_layers": 5,
        "encoding": {"type": "incremental_upload", "n_inputs": 13, "features_per_layer": 4},
    },
}

IRIS = {
    "task": "classification",
    "dataset": {"kind": "csv", "path": "../data/iris.csv", "target_column": "species", "split_seed": 0},
    "ansatz": {"n_qubits": 4, "n_layers": 5, "encoding": {"type": "angle_once", "n_inputs": 4}},
    "observables": [[0], [1], [2]],
}

TOY = {
    "task": "toy",
    "dataset": {"kind": "toy", "replicas": 10},
    "ansatz": {"n_qubits": 4, "n_layers": 5, "encoding": {"type": "none"}},
}

TRAINING = {
    "epochs": 100,
    "batch_size": 32,
    "learning_rate": 0.01,
    "optimizer": "adam",
    "init": {"type": "uniform_zero_pi"},
    "seed": 0,
}


def write(name, doc):
    doc = {"name": name, **doc}
    (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    for est, spec in estimators(0.5).items():
        for mode, m in MODES.items():
            write(f"friedman_{est}_{mode}", {**FRIEDMAN, "estimator": spec, **TRAINING, "mode": m})
    for est, spec in estimators(0.7).items():
        for mode in ("ideal", "shots"):
            write(f"boston_{est}_{mode}", {**BOSTON, "estimator": spec, **TRAINING, "mode": MODES[mode]})
    for est in ("ps", "spsa10", "guided"):
        for mode in ("ideal", "shots"):
            write(f"iris_{est}_{mode}", {**IRIS, "estimator": estimators(0.5)[est], **TRAINING, "mode": MODES[mode]})
    for est in ("ps", "guided"):
        for init_name, init in (("zeroinit", {"type": "zeros"}), ("randinit", {"type": "uniform_zero_pi"})):
            doc = {**FRIEDMAN, "estimator": estimators(0.5)[est], **TRAINING, "init": init}
            doc["mode"] = MODES["ideal"]
            doc["histogram_epochs"] = [0, 1, 2, 5, 10, 20, 50]
            write(f"friedman_{init_name}_{est}", doc)
    half = {**FRIEDMAN, "dataset": {**FRIEDMAN["dataset"], "feature_range": [0.0, 3.141592653589793]}}
    for est in ("ps", "spsa10", "guided"):
        for mode in ("ideal", "shots"):
            doc = {**half, "estimator": estimators(0.5)[est], **TRAINING, "mode": MODES[mode]}
            write(f"friedman_halfrange_{est}_{mode}", doc)
    toy_training = {
        "epochs": 200,
        "batch_size": 10,
        "learning_rate": 0.05,
        "optimizer": "adam",
        "init": {"type": "uniform_zero_pi", "seed": 3},
        "seed": 0,
        "mode": MODES["ideal"],
    }
    for est in ("ps", "guided"):
        write(f"toy_{est}", {**TOY, "estimator": estimators(0.5)[est], **toy_training})


if __name__ == "__main__":
    main()
