"""Shared helpers for the test suite: random instance generators and norms."""

import numpy as np
import pytest

from milac.numerics import ComplexMatrix, ComplexVector


def rel_err_mat(actual: np.ndarray, expected: np.ndarray) -> float:
    denom = np.linalg.norm(expected)
    if denom == 0.0:
        return float(np.linalg.norm(actual))
    return float(np.linalg.norm(actual - expected) / denom)


def rel_err_vec(actual: np.ndarray, expected: np.ndarray) -> float:
    return rel_err_mat(actual, expected)


def unit_disc_matrix(rng: np.random.Generator, rows: int, cols: int | None = None) -> np.ndarray:
    """Entries uniform in the complex unit disc."""
    cols = rows if cols is None else cols
    r = np.sqrt(rng.uniform(0.0, 1.0, size=(rows, cols)))
    phi = rng.uniform(0.0, 2 * np.pi, size=(rows, cols))
    return r * np.exp(1j * phi)


def well_conditioned_matrix(
    rng: np.random.Generator, n: int, cond_limit: float = 1e3, max_tries: int = 200
) -> ComplexMatrix:
    """Random unit-disc matrix resampled until its condition estimate is small."""
    for _ in range(max_tries):
        a = unit_disc_matrix(rng, n)
        if np.linalg.cond(a) < cond_limit:
            return ComplexMatrix(a)
    raise AssertionError(f"no well-conditioned {n}x{n} sample within {max_tries} tries")


def random_spd(rng: np.random.Generator, n: int, lo: float = 0.5, hi: float = 2.0) -> ComplexMatrix:
    """Hermitian positive definite matrix with eigenvalues in [lo, hi]."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(z)
    eigs = rng.uniform(lo, hi, size=n)
    m = (q * eigs) @ q.conj().T
    return ComplexMatrix(0.5 * (m + m.conj().T))


def random_vector(rng: np.random.Generator, n: int) -> ComplexVector:
    return ComplexVector(rng.normal(size=n) + 1j * rng.normal(size=n))


def cm(rows) -> ComplexMatrix:
    return ComplexMatrix.from_rows(rows)


def cv(values) -> ComplexVector:
    return ComplexVector.from_values(values)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260808)
