# Two-dimensional models of quantum search over an unstructured database of
# size N, in the invariant subspace spanned by the target |t> = (1, 0) and
# its orthogonal complement |t_perp> = (0, 1).
#
# Two routes from the uniform state |s> to |t>:
# - continuous: H = |s><s| + |t><t|, a fixed-rate rotation about the axis
#   bisecting the two states; reaches the target at time T = (pi/2) sqrt(N);
# - discrete: the Grover step U = -(1 - 2|s><s|)(1 - 2|t><t|), a rotation by
#   4 arcsin(1/sqrt(N)) per step along the geodesic.
# The two are linked by an exact identity: the continuous evolution at any
# t in [0, T] equals a fractional Grover power sandwiched between two
# z-phase rotations (equivalence_params / equivalence_residual below).

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import (
    IDENTITY2,
    SIGMA,
    AxisAngle,
    PauliVector,
    phase_aligned_distance,
    rotation_unitary,
)

__all__ = [
    "SearchInstance",
    "GroverStepParams",
    "EquivalenceParams",
    "GROVER_AXIS",
    "continuous_axis",
    "hamiltonian_continuous",
    "evolve_continuous",
    "grover_step",
    "grover_hamiltonian",
    "step_params",
    "grover_power",
    "equivalence_params",
    "equivalence_residual",
    "endpoint_residual",
    "phase_rotation",
]

# Bloch axis of the Grover step. The step generator is -(sqrt(N-1)/N) s2,
# so the right-handed rotation axis points along -y; the rotation angle per
# step is 4 arcsin(1/sqrt(N)).
GROVER_AXIS = np.array([0.0, -1.0, 0.0])


@dataclass(frozen=True)
class SearchInstance:
    """Database size N plus the derived 2D-subspace angles."""

    n: int

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("database size must be an integer >= 2")
        object.__setattr__(self, "n", int(self.n))

    @property
    def overlap(self) -> float:
        """<t|s> = 1/sqrt(N)."""
        return 1.0 / np.sqrt(self.n)

    @property
    def half_step_angle(self) -> float:
        """alpha = 2 arcsin(1/sqrt(N)), the per-step jump resolution."""
        return 2.0 * np.arcsin(self.overlap)

    @property
    def total_time(self) -> float:
        """T = (pi/2) sqrt(N), the continuous-route search time."""
        return 0.5 * np.pi * np.sqrt(self.n)

    @property
    def target_state(self) -> np.ndarray:
        return np.array([1.0, 0.0], dtype=complex)

    @property
    def source_state(self) -> np.ndarray:
        s = self.overlap
        return np.array([s, np.sqrt(1.0 - s * s)], dtype=complex)


@dataclass(frozen=True)
class GroverStepParams:
    """Evolution time per Grover step and the (real-valued) step count."""

    tau: float
    q_total: float


@dataclass(frozen=True)
class EquivalenceParams:
    """Fractional Grover power Q_t and phase angle beta at evolution time t."""

    q_t: float
    beta: float


def continuous_axis(inst: SearchInstance) -> np.ndarray:
    """Unit Bloch axis of the continuous evolution: (sqrt((N-1)/N), 0, 1/sqrt(N))."""
    s = inst.overlap
    return np.array([np.sqrt(1.0 - s * s), 0.0, s])


def hamiltonian_continuous(inst: SearchInstance) -> PauliVector:
    """H = |s><s| + |t><t| = I + (sqrt(N-1)/N) s1 + (1/N) s3."""
    n = inst.n
    return PauliVector(1.0, np.array([np.sqrt(n - 1.0) / n, 0.0, 1.0 / n]))


def evolve_continuous(inst: SearchInstance, t: float) -> np.ndarray:
    """Continuous evolution operator at time t, global phase stripped.

    exp(-i n.sigma t/sqrt(N)): a rotation by 2 t/sqrt(N) about continuous_axis.
    """
    if t < 0:
        raise ValueError("evolution time must be nonnegative")
    angle = 2.0 * t / np.sqrt(inst.n)
    return rotation_unitary(AxisAngle(continuous_axis(inst), angle))


def grover_step(inst: SearchInstance) -> np.ndarray:
    """U = -(1 - 2|s><s|)(1 - 2|t><t|) = (1 - 2/N) I + 2i (sqrt(N-1)/N) s2."""
    n = inst.n
    return (1.0 - 2.0 / n) * IDENTITY2 + 2j * (np.sqrt(n - 1.0) / n) * SIGMA[1]


def grover_hamiltonian(inst: SearchInstance) -> PauliVector:
    """Generator of the Grover step: i[|t><t|, |s><s|] = -(sqrt(N-1)/N) s2."""
    n = inst.n
    return PauliVector(0.0, np.array([0.0, -np.sqrt(n - 1.0) / n, 0.0]))


def step_params(inst: SearchInstance) -> GroverStepParams:
    """Per-step time tau and the total step count before integer rounding.

    tau = (2N/sqrt(N-1)) arcsin(1/sqrt(N));
    Q_T = arccos(1/sqrt(N)) / (2 arcsin(1/sqrt(N)))  ~  (pi/4) sqrt(N).
    """
    n = inst.n
    s = inst.overlap
    tau = 2.0 * n / np.sqrt(n - 1.0) * np.arcsin(s)
    q_total = np.arccos(s) / (2.0 * np.arcsin(s))
    return GroverStepParams(tau=float(tau), q_total=float(q_total))


def grover_power(inst: SearchInstance, q: float) -> np.ndarray:
    """Fractional Grover power: rotation by q * 4 arcsin(1/sqrt(N)).

    Coincides exactly with the integer matrix power for integer q (the step
    is already in SU(2), so no global phase appears).
    """
    return rotation_unitary(AxisAngle(GROVER_AXIS, 2.0 * q * inst.half_step_angle))


def phase_rotation(beta: float) -> np.ndarray:
    """exp(i beta s3) = diag(e^{i beta}, e^{-i beta})."""
    return np.diag([np.exp(1j * beta), np.exp(-1j * beta)])


def equivalence_params(inst: SearchInstance, t: float) -> EquivalenceParams:
    """Fractional power Q_t and phase beta linking the two routes at time t.

    Q_t = arcsin(sqrt((N-1)/N) sin(t/sqrt(N))) / (2 arcsin(1/sqrt(N)))
    beta = -pi/4 - (1/2) arctan(tan(t/sqrt(N)) / sqrt(N))

    Valid for 0 <= t <= T (principal arcsin branch); beta is evaluated via
    atan2 so the t = T endpoint is finite.
    """
    t_max = inst.total_time
    if t < 0 or t > t_max * (1.0 + 1e-12):
        raise ValueError(f"t={t!r} outside the supported domain [0, {t_max!r}]")
    s = inst.overlap
    c = np.sqrt(1.0 - s * s)
    x = t / np.sqrt(inst.n)
    q_t = np.arcsin(np.clip(c * np.sin(x), -1.0, 1.0)) / (2.0 * np.arcsin(s))
    beta = -0.25 * np.pi - 0.5 * np.arctan2(np.sin(x), np.cos(x) / s)
    return EquivalenceParams(q_t=float(q_t), beta=float(beta))


def equivalence_residual(inst: SearchInstance, t: float) -> float:
    """Phase-aligned distance between the two routes at time t.

    Left side: the continuous evolution at t. Right side:
    exp(i beta s3) U^{Q_t} exp(i (pi/2 + beta) s3) built from the fractional
    Grover power. Exact equality is expected up to floating round-off.
    """
    params = equivalence_params(inst, t)
    lhs = evolve_continuous(inst, t)
    rhs = (
        phase_rotation(params.beta)
        @ grover_power(inst, params.q_t)
        @ phase_rotation(0.5 * np.pi + params.beta)
    )
    return phase_aligned_distance(lhs, rhs)


def endpoint_residual(inst: SearchInstance) -> float:
    """Distance for the t = T special case: U_cont(T) = i (1 - 2|t><t|) U^{Q_T}."""
    q_total = step_params(inst).q_total
    lhs = evolve_continuous(inst, inst.total_time)
    reflect_target = np.diag([-1.0, 1.0]).astype(complex)
    rhs = 1j * reflect_target @ grover_power(inst, q_total)
    return phase_aligned_distance(lhs, rhs)
