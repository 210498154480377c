"""Independent oracles used by the test suite.

These deliberately share no code with the implementation: the model counter
enumerates assignments (bit-parallel over truth-table columns), the edit
distance is a plain DP, and the PCA reference is numpy's eigendecomposition.
"""

from __future__ import annotations

import random

import numpy as np


def brute_force_count(clauses, n_vars: int) -> int:
    """Exact model count by (bit-parallel) enumeration of all 2^n assignments."""
    total = 1 << n_vars
    full = (1 << total) - 1
    columns: dict[int, int] = {}
    for v in range(1, n_vars + 1):
        period = 1 << v
        col = ((1 << (period // 2)) - 1) << (period // 2)  # one period: 0s then 1s
        span = period
        while span < total:  # tile by doubling
            col |= col << span
            span <<= 1
        columns[v] = col
    acc = full
    for clause in clauses:
        mask = 0
        for lit in clause:
            mask |= columns[abs(lit)] if lit > 0 else (~columns[abs(lit)] & full)
        acc &= mask
        if acc == 0:
            return 0
    return acc.bit_count()


def brute_force_models(clauses, n_vars: int):
    """All satisfying assignments as tuples of bools (small n only)."""
    models = []
    for bits in range(1 << n_vars):
        assignment = [(bits >> i) & 1 == 1 for i in range(n_vars)]
        if all(
            any(assignment[abs(l) - 1] == (l > 0) for l in clause) for clause in clauses
        ):
            models.append(tuple(assignment))
    return models


def random_cnf(rng: random.Random, n_vars: int, n_clauses: int, max_width: int = 4):
    clauses = []
    for _ in range(n_clauses):
        width = rng.randint(1, min(max_width, n_vars))
        variables = rng.sample(range(1, n_vars + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return clauses


def reference_levenshtein(a: str, b: str) -> int:
    rows = len(a) + 1
    cols = len(b) + 1
    table = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        table[i][0] = i
    for j in range(cols):
        table[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(
                table[i - 1][j] + 1, table[i][j - 1] + 1, table[i - 1][j - 1] + cost
            )
    return table[-1][-1]


def reference_window_score(reference_norm: str, title_norm: str) -> float:
    """Min edit fraction over token-anchored title-length windows, computed
    from scratch (normalization is the caller's problem)."""
    if not title_norm:
        return 1.0
    if len(reference_norm) <= len(title_norm):
        return reference_levenshtein(reference_norm, title_norm) / len(title_norm)
    starts = [0]
    for i, ch in enumerate(reference_norm):
        if ch == " ":
            starts.append(i + 1)
    best = min(
        reference_levenshtein(reference_norm[s : s + len(title_norm)], title_norm)
        for s in starts
    )
    return best / len(title_norm)


def top2_variance_eigh(matrix: np.ndarray) -> tuple[float, float]:
    """Top-2 eigenvalues of the Gram matrix of the centered rows."""
    centered = matrix - matrix.mean(axis=0)
    eigenvalues = np.linalg.eigvalsh(centered.T @ centered)
    ordered = sorted(eigenvalues, reverse=True)
    return float(ordered[0]), float(ordered[1]) if len(ordered) > 1 else 0.0
