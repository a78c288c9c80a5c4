"""Shared helpers for the test suite.

The leave-one-well-out benchmark used by several tests lives here so the
CLI tests and the acceptance suite drive the exact same code path.
"""

import numpy as np

from welldesc import (
    KernelSpec,
    SynthConfig,
    binarize_target,
    gen_synthetic,
    relief_weights,
    select_top,
)
from welldesc.cli import run_blind_tests

BENCH_KERNEL = KernelSpec(family="gaussian", width=2.0)
BENCH_COST = 0.25


def benchmark_dataset(seed, n_wells=4, rows=500, skew=0.97, n_features=6, relief_k=4):
    """Synthetic multi-well dataset with the top relief features selected."""
    table = gen_synthetic(SynthConfig(n_wells=n_wells, rows_per_well=rows,
                                      skew=skew, n_features=n_features, seed=seed))
    data = binarize_target(table, 0.7)
    fw = relief_weights(data.X, data.y, data.feature_names)
    top = select_top(fw, relief_k)
    data.X = data.X[:, top]
    data.feature_names = [fw.feature_names[i] for i in top]
    return data


def benchmark_records(seed, cost=BENCH_COST, classifiers=("svdd", "svm", "gnb", "lda")):
    data = benchmark_dataset(seed)
    records, failed = run_blind_tests(data, BENCH_KERNEL, cost, list(classifiers))
    assert not failed
    return records


def benchmark_averages(seed, cost=BENCH_COST):
    """Average g-mean per classifier; a well with undefined g counts as 0."""
    records = benchmark_records(seed, cost)
    out = {}
    for rec in records:
        out.setdefault(rec.classifier, []).append(
            0.0 if rec.g_mean is None else rec.g_mean)
    return {name: float(np.mean(vals)) for name, vals in out.items()}
