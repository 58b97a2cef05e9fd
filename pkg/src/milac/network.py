"""Multiport admittance-network model of a microwave linear analog computer.

A P-port network is built from a P x P grid of tunable admittance components:
component (k, k) connects port k to ground, component (i, k) with i != k
connects port k to port i. The first N ports are driven by sources with
series reference admittance y0; the remaining M ports are terminated
(matched) in y0 and carry the outputs. The operating point solves

    (Y / y0 + I) v = [u; 0]

where Y is the admittance matrix realized by the grid. The grid is stored as
a full directionally-indexed table: reciprocity (values[i, k] == values[k, i])
is neither assumed nor enforced, and can be inspected with
:func:`reciprocity_defect`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import (
    ComplexMatrix,
    ComplexVector,
    CostMeter,
    DimensionError,
    SingularMatrixError,
    mat_vec,
    solve_linear,
)

#: Default reference admittance in siemens (a 50-ohm termination).
Y0_DEFAULT = 0.02


@dataclass(frozen=True, eq=False)
class ComponentGrid:
    """P x P table of tunable admittance component values, in siemens."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionError("component grid must be square and non-empty")
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise ValueError("component values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @classmethod
    def zeros(cls, p: int) -> "ComponentGrid":
        return cls(np.zeros((p, p), dtype=np.complex128))


@dataclass(frozen=True, eq=False)
class MilacNetwork:
    """A P-port network with N driven ports, M matched ports (P = N + M)."""

    n_inputs: int
    n_matched: int
    y0: float
    grid: ComponentGrid

    def __post_init__(self):
        if self.n_inputs < 1:
            raise ValueError("need at least one driven port")
        if self.n_matched < 0:
            raise ValueError("matched port count cannot be negative")
        if self.y0 <= 0:
            raise ValueError("reference admittance must be positive")
        if self.grid.size != self.n_inputs + self.n_matched:
            raise DimensionError(
                f"grid size {self.grid.size} != N + M = {self.n_inputs + self.n_matched}"
            )

    @property
    def n_ports(self) -> int:
        return self.n_inputs + self.n_matched

    @classmethod
    def from_admittance(cls, y: ComplexMatrix, n_inputs: int, y0: float = Y0_DEFAULT) -> "MilacNetwork":
        return cls(n_inputs, y.rows - n_inputs, y0, grid_from_admittance(y))

    @classmethod
    def from_system_matrix(cls, p_mat: ComplexMatrix, n_inputs: int, y0: float = Y0_DEFAULT) -> "MilacNetwork":
        return cls(n_inputs, p_mat.rows - n_inputs, y0, grid_from_system_matrix(p_mat, y0))


@dataclass(frozen=True, eq=False)
class PortSolution:
    """Steady-state port voltages and currents of a driven network."""

    v: ComplexVector
    v1: ComplexVector
    v2: ComplexVector | None
    i: ComplexVector

    @property
    def i1(self) -> ComplexVector:
        return self.i.slice(0, self.v1.len)

    @property
    def i2(self) -> ComplexVector | None:
        if self.v2 is None:
            return None
        return self.i.slice(self.v1.len, self.i.len)


def admittance_from_grid(grid: ComponentGrid) -> ComplexMatrix:
    """Admittance matrix realized by a component grid.

    Off-diagonal entries are the negated inter-port components; each diagonal
    entry is the column sum of all components attached to that port.
    """
    vals = grid.values
    y = -vals.copy()
    np.fill_diagonal(y, vals.sum(axis=0))
    return ComplexMatrix(y)


def grid_from_admittance(y: ComplexMatrix) -> ComponentGrid:
    """Component values realizing a given admittance matrix (exact inverse
    of :func:`admittance_from_grid`)."""
    if y.rows != y.cols:
        raise DimensionError("admittance matrix must be square")
    vals = -y.data.copy()
    np.fill_diagonal(vals, y.data.sum(axis=0))
    return ComponentGrid(vals)


def system_matrix_from_admittance(y: ComplexMatrix, y0: float) -> ComplexMatrix:
    """P = Y / y0 + I."""
    if y.rows != y.cols:
        raise DimensionError("admittance matrix must be square")
    if y0 <= 0:
        raise ValueError("reference admittance must be positive")
    return ComplexMatrix(y.data / y0 + np.eye(y.rows))


def admittance_from_system_matrix(p_mat: ComplexMatrix, y0: float) -> ComplexMatrix:
    """Y = y0 P - y0 I, the exact inverse of :func:`system_matrix_from_admittance`."""
    if p_mat.rows != p_mat.cols:
        raise DimensionError("system matrix must be square")
    if y0 <= 0:
        raise ValueError("reference admittance must be positive")
    return ComplexMatrix(y0 * p_mat.data - y0 * np.eye(p_mat.rows))


def grid_from_system_matrix(p_mat: ComplexMatrix, y0: float) -> ComponentGrid:
    """Component values that make the network realize a given system matrix.

    Off-diagonal: -y0 * P[i, k]. Diagonal: y0 * (column sum of P) - y0.
    Identical to chaining :func:`admittance_from_system_matrix` and
    :func:`grid_from_admittance`.
    """
    if p_mat.rows != p_mat.cols:
        raise DimensionError("system matrix must be square")
    vals = -y0 * p_mat.data.copy()
    np.fill_diagonal(vals, y0 * p_mat.data.sum(axis=0) - y0)
    return ComponentGrid(vals)


def reciprocity_defect(y: ComplexMatrix) -> float:
    """Relative asymmetry of an admittance matrix, as a diagnostic.

    Zero for a reciprocal network; the general grid model permits any value.
    """
    denom = float(np.linalg.norm(y.data))
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(y.data - y.data.T)) / denom


def simulate(net: MilacNetwork, u: ComplexVector, meter: CostMeter | None = None) -> PortSolution:
    """Solve the network operating point for source voltages u.

    The meter passed here is the physics meter: it books the linear solve
    that stands in for signal propagation plus the current recovery i = Y v.
    Returns voltages on all ports, split into driven (v1) and matched (v2)
    parts, together with the port currents.
    """
    if u.len != net.n_inputs:
        raise DimensionError(f"input length {u.len} != driven port count {net.n_inputs}")
    y = admittance_from_grid(net.grid)
    p_mat = system_matrix_from_admittance(y, net.y0)
    u_tilde = ComplexVector(np.concatenate([u.data, np.zeros(net.n_matched, dtype=np.complex128)]))
    try:
        v = solve_linear(p_mat, u_tilde, meter)
    except SingularMatrixError as exc:
        raise SingularMatrixError(exc.column, "network has no unique operating point") from exc
    i = mat_vec(y, v, meter)
    v1 = v.slice(0, net.n_inputs)
    v2 = v.slice(net.n_inputs, net.n_ports) if net.n_matched > 0 else None
    return PortSolution(v=v, v1=v1, v2=v2, i=i)
