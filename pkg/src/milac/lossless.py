"""Lossless realization: any complex-admittance network on doubled ports.

A network with complex admittance matrix Y (P ports, N driven) can be
reproduced by a purely-susceptive network of 2P ports whose admittance is
j * Bbar with Bbar real. Each complex block Z of Y expands to the real block

    [[Re Z, Im Z], [-Im Z, Re Z]]

and the driven/matched diagonal blocks additionally absorb the reference
admittance through y0 * [[I, I], [-I, I]]. Driving the doubled network with
[u; j u] produces [-j v1; v1] on the driven half and [-j v2; v2] on the
matched half, where v is the original network's output. The price of going
lossless is (2P)^2 tunable components instead of P^2.

Bbar is generally not symmetric even though it is real; the verification
report surfaces the asymmetry as a diagnostic rather than rejecting it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import Y0_DEFAULT
from .numerics import ComplexMatrix, ComplexVector, DimensionError, concat, solve_linear


@dataclass(frozen=True, eq=False)
class SusceptanceMatrix:
    """Real-valued 2P x 2P susceptance matrix (siemens)."""

    bbar: np.ndarray

    def __post_init__(self):
        arr = np.array(self.bbar, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2 != 0:
            raise DimensionError("susceptance matrix must be square with even order")
        if not np.all(np.isfinite(arr)):
            raise ValueError("susceptance values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "bbar", arr)

    @property
    def size(self) -> int:
        return self.bbar.shape[0]

    @property
    def is_real(self) -> bool:
        """True by construction; kept as an explicit checkable property."""
        return bool(np.isrealobj(self.bbar))

    def asymmetry(self) -> float:
        denom = float(np.linalg.norm(self.bbar))
        if denom == 0.0:
            return 0.0
        return float(np.linalg.norm(self.bbar - self.bbar.T)) / denom


@dataclass(frozen=True, eq=False)
class LiftedSignals:
    """Input and output of the doubled lossless network."""

    ubar: ComplexVector
    vbar: ComplexVector


@dataclass(frozen=True, eq=False)
class VerificationReport:
    passed: bool
    max_deviation: float
    relative_deviation: float
    tolerance: float
    susceptance_is_real: bool
    susceptance_asymmetry: float | None


def _expand(z: np.ndarray) -> np.ndarray:
    """Real 2x2-block expansion [[Re, Im], [-Im, Re]] of a complex block."""
    return np.block([[z.real, z.imag], [-z.imag, z.real]])


def _rotation(n: int, y0: float) -> np.ndarray:
    eye = np.eye(n)
    return y0 * np.block([[eye, eye], [-eye, eye]])


def build_susceptance(y: ComplexMatrix, n_inputs: int, y0: float = Y0_DEFAULT) -> SusceptanceMatrix:
    """Susceptance matrix of the doubled lossless network realizing Y.

    `n_inputs` is the driven-port count N of the original network; M = P - N
    may be zero, in which case the single-block variant is used.
    """
    if y.rows != y.cols:
        raise DimensionError("admittance matrix must be square")
    p = y.rows
    if not 1 <= n_inputs <= p:
        raise DimensionError(f"driven-port count {n_inputs} out of range for {p} ports")
    m = p - n_inputs
    if m == 0:
        return SusceptanceMatrix(_expand(y.data) + _rotation(p, y0))
    n = n_inputs
    y11 = y.data[:n, :n]
    y12 = y.data[:n, n:]
    y21 = y.data[n:, :n]
    y22 = y.data[n:, n:]
    b11 = _expand(y11) + _rotation(n, y0)
    b22 = _expand(y22) + _rotation(m, y0)
    b12 = _expand(y12)
    b21 = _expand(y21)
    return SusceptanceMatrix(np.block([[b11, b12], [b21, b22]]))


def lifted_system_matrix(bbar: SusceptanceMatrix, y0: float) -> ComplexMatrix:
    """System matrix j * Bbar / y0 + I of the doubled network."""
    two_p = bbar.size
    return ComplexMatrix(1j * bbar.bbar / y0 + np.eye(two_p))


def simulate_lossless(
    bbar: SusceptanceMatrix,
    u: ComplexVector,
    y0: float = Y0_DEFAULT,
    n_inputs: int | None = None,
) -> LiftedSignals:
    """Drive the doubled network with [u; j u] and return both signal pairs."""
    n = u.len if n_inputs is None else n_inputs
    if u.len != n:
        raise DimensionError(f"input length {u.len} != declared driven count {n}")
    two_m = bbar.size - 2 * n
    if two_m < 0:
        raise DimensionError("driven count exceeds the doubled network size")
    ubar = concat(u, ComplexVector(1j * u.data))
    rhs = ComplexVector(np.concatenate([ubar.data, np.zeros(two_m, dtype=np.complex128)]))
    p_bar = lifted_system_matrix(bbar, y0)
    vbar = solve_linear(p_bar, rhs)
    return LiftedSignals(ubar=ubar, vbar=vbar)


def lifting_permutation(n: int, m: int) -> np.ndarray:
    """0/1 matrix reordering [-j v1; v1; -j v2; v2] into [-j v; v]."""
    perm = lifting_permutation_indices(n, m)
    two_p = 2 * (n + m)
    pi = np.zeros((two_p, two_p))
    pi[np.arange(two_p), perm] = 1.0
    return pi


def lifting_permutation_indices(n: int, m: int) -> np.ndarray:
    """Index form of :func:`lifting_permutation`: (Pi x)[i] = x[perm[i]]."""
    return np.concatenate(
        [
            np.arange(0, n),
            np.arange(2 * n, 2 * n + m),
            np.arange(n, 2 * n),
            np.arange(2 * n + m, 2 * n + 2 * m),
        ]
    ).astype(int)


def expected_lifted_output(reference_v: ComplexVector, n_inputs: int) -> ComplexVector:
    """The vbar that a correct lifting must produce for a reference output v."""
    p = reference_v.len
    if not 1 <= n_inputs <= p:
        raise DimensionError("driven-port count out of range")
    v1 = reference_v.data[:n_inputs]
    v2 = reference_v.data[n_inputs:]
    return ComplexVector(np.concatenate([-1j * v1, v1, -1j * v2, v2]))


def verify_lifting(
    lifted: LiftedSignals,
    reference_v: ComplexVector,
    tol: float = 1e-9,
    bbar: SusceptanceMatrix | None = None,
) -> VerificationReport:
    """Compare a lossless run against the original network's port voltages.

    Structural mismatch is reported, not raised. The driven-port count is
    recovered from the lifted input (ubar stacks u over j*u).
    """
    n = lifted.ubar.len // 2
    expected = expected_lifted_output(reference_v, n)
    if expected.len != lifted.vbar.len:
        return VerificationReport(
            passed=False,
            max_deviation=float("inf"),
            relative_deviation=float("inf"),
            tolerance=tol,
            susceptance_is_real=bbar.is_real if bbar is not None else True,
            susceptance_asymmetry=bbar.asymmetry() if bbar is not None else None,
        )
    diff = lifted.vbar.data - expected.data
    denom = float(np.linalg.norm(reference_v.data))
    deviation = float(np.linalg.norm(diff))
    relative = deviation / denom if denom > 0 else deviation
    is_real = bbar.is_real if bbar is not None else True
    return VerificationReport(
        passed=bool(relative <= tol and is_real),
        max_deviation=float(np.max(np.abs(diff))),
        relative_deviation=relative,
        tolerance=tol,
        susceptance_is_real=is_real,
        susceptance_asymmetry=bbar.asymmetry() if bbar is not None else None,
    )
