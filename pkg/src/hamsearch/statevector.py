# Full N-dimensional search simulation from explicit reflections.
#
# The step applies -(1 - 2|s><s|)(1 - 2|t><t|) as two rank-1 updates per
# iteration (sign flip on the target, then inversion about the mean with an
# overall sign), O(N) per step with no dense operator. This is the
# brute-force oracle that validates the 2x2 subspace models.

from __future__ import annotations

import numpy as np

from .search import SearchInstance, grover_power, step_params

__all__ = [
    "MAX_DIMENSION",
    "uniform_state",
    "grover_iterate",
    "success_curve",
    "peak_step",
    "expected_peak_step",
    "subspace_agreement",
]

MAX_DIMENSION = 2**22


def _check_dimension(n: int, max_dimension: int) -> int:
    n = int(n)
    if n < 2:
        raise ValueError("database size must be >= 2")
    if n > max_dimension:
        raise ValueError(f"N={n} exceeds the configured cap {max_dimension}")
    return n


def uniform_state(n: int, max_dimension: int = MAX_DIMENSION) -> np.ndarray:
    """Uniform superposition: every amplitude 1/sqrt(N)."""
    n = _check_dimension(n, max_dimension)
    return np.full(n, 1.0 / np.sqrt(n), dtype=complex)


def grover_iterate(state: np.ndarray, target: int, steps: int) -> np.ndarray:
    """Apply the search step ``steps`` times; returns a new state vector."""
    psi = np.asarray(state, dtype=complex).copy()
    n = psi.size
    if not (0 <= target < n):
        raise ValueError(f"target index {target} outside [0, {n})")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    for _ in range(steps):
        psi[target] = -psi[target]
        psi = 2.0 * psi.mean() - psi
    return psi


def success_curve(
    n: int,
    max_steps: int,
    target: int = 0,
    max_dimension: int = MAX_DIMENSION,
) -> np.ndarray:
    """Success probability |<t|psi_k>|^2 for k = 0 .. max_steps."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    psi = uniform_state(n, max_dimension)
    probs = np.empty(max_steps + 1)
    probs[0] = abs(psi[target]) ** 2
    for k in range(1, max_steps + 1):
        psi = grover_iterate(psi, target, 1)
        probs[k] = abs(psi[target]) ** 2
    return probs


def peak_step(curve: np.ndarray) -> int:
    """Step index of the first success-probability maximum."""
    return int(np.argmax(curve))


def subspace_agreement(
    n: int,
    steps: int,
    target: int = 0,
    max_dimension: int = MAX_DIMENSION,
) -> float:
    """Worst deviation between the full-space run and the 2D model.

    Tracks (<t|psi>, ||psi - <t|psi> |t>||) after each of 0..steps full-space
    iterations against the state grover_power(k) |s> of the two-dimensional
    model, and returns the largest absolute difference seen.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    inst = SearchInstance(n)
    psi = uniform_state(n, max_dimension)
    worst = 0.0
    for k in range(steps + 1):
        if k > 0:
            psi = grover_iterate(psi, target, 1)
        model = grover_power(inst, float(k)) @ inst.source_state
        amp_t = psi[target]
        rest = psi.copy()
        rest[target] = 0.0
        amp_perp = float(np.linalg.norm(rest))
        worst = max(
            worst,
            abs(amp_t - model[0]),
            abs(amp_perp - abs(model[1])),
        )
    return worst


def expected_peak_step(n: int) -> int:
    """Closed-form optimal step count: nearest integer to Q_T."""
    q_total = step_params(SearchInstance(n)).q_total
    return int(np.floor(q_total + 0.5))
