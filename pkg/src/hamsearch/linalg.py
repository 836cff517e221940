# Shared dense linear-algebra helpers. All norms in this package are the
# spectral norm (largest singular value) unless a function says otherwise.

from __future__ import annotations

import numpy as np

__all__ = [
    "spectral_norm",
    "is_hermitian",
    "is_unitary",
    "assert_hermitian",
    "random_unitary",
]


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value of a dense matrix."""
    return float(np.linalg.norm(np.asarray(m, dtype=complex), 2))


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    eye = np.eye(m.shape[0])
    return bool(np.max(np.abs(m.conj().T @ m - eye)) <= tol)


def assert_hermitian(m: np.ndarray, tol: float = 1e-12, what: str = "matrix") -> None:
    if not is_hermitian(m, tol):
        dev = float(np.max(np.abs(m - np.asarray(m).conj().T)))
        raise ValueError(f"{what} is not Hermitian (max deviation {dev:.3e}, tol {tol:.1e})")


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n unitary via QR of a complex Ginibre matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
