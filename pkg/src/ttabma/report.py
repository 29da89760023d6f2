"""Aggregation runs, simulation sweeps, and their JSON-stable reports.

Reports are plain dicts with a fixed key order and only JSON-native
values, so ``to_json`` output is byte-stable for a given input and flag
set. ``schema_version`` marks the report layout.
"""

from __future__ import annotations

import json

import numpy as np

from . import metrics
from .bma import BmaConfig, run_bma
from .data import PredictionTable, SyntheticConfig, synthesize
from .errors import SplitError
from .predict import predict_bma, predict_mean, uncertainty
from .rng import Xoshiro256, derive_seeds

SCHEMA_VERSION = 1

PROTOCOLS = ("split", "transductive")


def to_json(report: dict) -> str:
    """Canonical serialization: two-space indent, keys in build order."""
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def split_rows(n_rows: int, fraction: float, seed: int) -> tuple[list[int], list[int]]:
    """Seeded shuffle split into (calibration, evaluation) row indices."""
    n_fit = int(round(fraction * n_rows))
    if not 1 <= n_fit <= n_rows - 1:
        raise SplitError(
            f"split fraction {fraction} leaves an empty calibration or "
            f"evaluation set for {n_rows} rows"
        )
    order = list(range(n_rows))
    Xoshiro256(seed).shuffle(order)
    return sorted(order[:n_fit]), sorted(order[n_fit:])


def _method_block(predicted_labels, true_labels) -> dict:
    counts = metrics.confusion(predicted_labels, true_labels)
    values = {
        "accuracy": metrics.accuracy(counts),
        "precision": metrics.precision(counts),
        "recall": metrics.recall(counts),
        "f1": metrics.f1(counts),
    }
    block = {name: mv.value for name, mv in values.items()}
    block["degenerate"] = sorted(name for name, mv in values.items() if mv.degenerate)
    block["confusion"] = {
        "tp": counts.tp,
        "fp": counts.fp,
        "tn": counts.tn,
        "fn": counts.fn,
    }
    return block


def run_aggregate(
    table: PredictionTable,
    *,
    mode: str = "greedy",
    protocol: str = "split",
    split_fraction: float = 0.5,
    seed: int = 0,
    source: str = "synthetic",
) -> dict:
    """Fit the model average and score both methods on the evaluation rows.

    The split protocol fits on a seeded calibration subset and evaluates
    on the remainder; the transductive protocol fits and evaluates on the
    whole table.
    """
    if protocol not in PROTOCOLS:
        raise ValueError(f"protocol must be one of {PROTOCOLS}")
    if protocol == "split":
        fit_idx, eval_idx = split_rows(table.n_rows, split_fraction, seed)
        fit_table = table.take(fit_idx)
        eval_table = table.take(eval_idx)
    else:
        fit_table = eval_table = table

    summary = run_bma(fit_table, BmaConfig(mode=mode))

    bma_labels = [
        predict_bma(summary, eval_table.predictions[r]).label
        for r in range(eval_table.n_rows)
    ]
    mean_labels = [
        predict_mean(eval_table.predictions[r]).label
        for r in range(eval_table.n_rows)
    ]
    truth = eval_table.labels.tolist()
    bma_block = _method_block(bma_labels, truth)
    mean_block = _method_block(mean_labels, truth)
    spread = uncertainty(summary, eval_table, bma_block["accuracy"])

    weights = summary.posterior_weights()
    accepted = [
        {
            "columns": list(model.subset),
            "bic": model.bic,
            "log_model_likelihood": model.log_model_likelihood,
            "posterior_weight": float(w),
            "intercept": model.fitted.intercept,
            "coefficients": model.fitted.coefficients.tolist(),
            "converged": model.fitted.converged,
            "iterations": model.fitted.iterations,
        }
        for model, w in zip(summary.accepted, weights)
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "aggregate",
        "source": source,
        "protocol": protocol,
        "mode": mode,
        "seed": seed,
        "split_fraction": split_fraction if protocol == "split" else None,
        "n_rows": table.n_rows,
        "n_columns": table.n_columns,
        "n_fit_rows": fit_table.n_rows,
        "n_eval_rows": eval_table.n_rows,
        "methods": {"bma": bma_block, "mean": mean_block},
        "sigma_bma": spread.sigma,
        "per_column_accuracy": spread.per_column_accuracy.tolist(),
        "inclusion_prob": summary.inclusion_prob.tolist(),
        "expected_coeffs": summary.expected_coeffs.tolist(),
        "expected_intercept": summary.expected_intercept,
        "log_l_total": summary.log_l_total,
        "accepted_models": accepted,
    }


def run_simulation(
    *,
    trials: int = 100,
    n_rows: int = 200,
    n_columns: int = 4,
    signal_noise: float = 0.5,
    adversarial_columns=(),
    label_flip_rate: float = 0.0,
    seed: int = 0,
    mode: str = "greedy",
    protocol: str = "transductive",
    split_fraction: float = 0.5,
) -> dict:
    """Repeated synthesize-then-aggregate trials with derived seeds.

    Each trial derives one seed for the generator and one for the split,
    so trials are independent and the whole sweep is a pure function of
    the master seed. The default protocol here is transductive: the
    simulation harness mirrors the averaging procedure as literally
    written, with the model average fitted on the evaluated predictions.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    adversarial = frozenset(int(c) for c in adversarial_columns)
    trial_seeds = derive_seeds(seed, trials)
    bma_accs = []
    mean_accs = []
    inclusions = []
    adversarial_lowest = 0
    adversarial_lowest_strict = 0
    clean = sorted(set(range(n_columns)) - adversarial)
    for trial_seed in trial_seeds:
        gen_seed, split_seed = derive_seeds(trial_seed, 2)
        table = synthesize(
            SyntheticConfig(
                n_rows=n_rows,
                n_columns=n_columns,
                signal_noise=signal_noise,
                adversarial_columns=adversarial,
                label_flip_rate=label_flip_rate,
                seed=gen_seed,
            )
        )
        report = run_aggregate(
            table,
            mode=mode,
            protocol=protocol,
            split_fraction=split_fraction,
            seed=split_seed,
        )
        bma_accs.append(report["methods"]["bma"]["accuracy"])
        mean_accs.append(report["methods"]["mean"]["accuracy"])
        inclusion = report["inclusion_prob"]
        inclusions.append(inclusion)
        if adversarial and clean:
            worst_adversarial = max(inclusion[c] for c in adversarial)
            best_clean_floor = min(inclusion[c] for c in clean)
            if worst_adversarial <= best_clean_floor:
                adversarial_lowest += 1
            if worst_adversarial < best_clean_floor:
                adversarial_lowest_strict += 1

    bma_mean, bma_std = metrics.mean_std(bma_accs)
    mean_mean, mean_std_ = metrics.mean_std(mean_accs)
    wins = sum(1 for b, m in zip(bma_accs, mean_accs) if b >= m)
    mean_inclusion = np.mean(np.array(inclusions), axis=0).tolist()
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "seed": seed,
        "trials": trials,
        "generator": {
            "n_rows": n_rows,
            "n_columns": n_columns,
            "signal_noise": signal_noise,
            "adversarial_columns": sorted(adversarial),
            "label_flip_rate": label_flip_rate,
        },
        "mode": mode,
        "protocol": protocol,
        "split_fraction": split_fraction if protocol == "split" else None,
        "bma_accuracy": {"mean": bma_mean, "std": bma_std},
        "mean_accuracy": {"mean": mean_mean, "std": mean_std_},
        "bma_at_least_mean_fraction": wins / trials,
        "mean_inclusion_prob": mean_inclusion,
        "adversarial_lowest_trials": (
            adversarial_lowest if adversarial and clean else None
        ),
        "adversarial_strictly_lowest_trials": (
            adversarial_lowest_strict if adversarial and clean else None
        ),
        "per_trial": {
            "seeds": trial_seeds,
            "bma_accuracy": bma_accs,
            "mean_accuracy": mean_accs,
        },
    }


def render_aggregate(report: dict) -> str:
    """Human-readable summary of an aggregation report."""
    lines = [
        f"source: {report['source']}  protocol: {report['protocol']}  "
        f"mode: {report['mode']}  seed: {report['seed']}",
        f"rows: {report['n_rows']} ({report['n_fit_rows']} fit, "
        f"{report['n_eval_rows']} eval)  columns: {report['n_columns']}",
    ]
    for name in ("bma", "mean"):
        block = report["methods"][name]
        lines.append(
            f"{name:>5}: accuracy={block['accuracy']:.4f} "
            f"precision={block['precision']:.4f} recall={block['recall']:.4f} "
            f"f1={block['f1']:.4f}"
        )
    lines.append(f"sigma_bma: {report['sigma_bma']:.6f}")
    lines.append(
        "inclusion: "
        + " ".join(f"{v:.4f}" for v in report["inclusion_prob"])
    )
    lines.append(
        "accepted: "
        + "; ".join(
            f"{m['columns']} w={m['posterior_weight']:.4f} bic={m['bic']:.3f}"
            for m in report["accepted_models"]
        )
    )
    return "\n".join(lines) + "\n"


def render_simulation(report: dict) -> str:
    """Human-readable summary of a simulation report."""
    bma = report["bma_accuracy"]
    mean = report["mean_accuracy"]
    lines = [
        f"trials: {report['trials']}  seed: {report['seed']}  "
        f"mode: {report['mode']}  protocol: {report['protocol']}",
        f"bma  accuracy: {bma['mean']:.4f} +/- {bma['std']:.4f}",
        f"mean accuracy: {mean['mean']:.4f} +/- {mean['std']:.4f}",
        f"bma >= mean in {report['bma_at_least_mean_fraction']:.0%} of trials",
        "mean inclusion: "
        + " ".join(f"{v:.4f}" for v in report["mean_inclusion_prob"]),
    ]
    if report["adversarial_lowest_trials"] is not None:
        lines.append(
            f"adversarial columns had the lowest inclusion in "
            f"{report['adversarial_lowest_trials']}/{report['trials']} trials"
        )
    return "\n".join(lines) + "\n"
