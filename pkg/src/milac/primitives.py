"""Block-matrix inverses and the three primitive network read-outs.

The closed-form 2x2 block inverses double as the analytic description of
what the network computes: the driven-port output is the upper-left block of
the inverse system matrix applied to the input, the matched-port output the
lower-left block. The primitives themselves evaluate by running the network
simulation; the block formulas provide the independent cross-check.

Digital cost accounting: evaluating a configured network is free (the analog
propagation replaces arithmetic), so the primitives book nothing on the
algorithmic meter. The stand-in linear solve is metered separately on a
physics meter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import ComponentGrid, MilacNetwork, Y0_DEFAULT, simulate
from .numerics import (
    ComplexMatrix,
    ComplexVector,
    CostMeter,
    DimensionError,
    SingularMatrixError,
    gauss_invert,
    mat_mul,
    mat_sub,
)


@dataclass(frozen=True, eq=False)
class BlockPartition:
    """A square matrix partitioned into 2x2 blocks after the first n rows/cols."""

    p_mat: ComplexMatrix
    n: int
    m: int

    def __post_init__(self):
        if self.n + self.m != self.p_mat.rows or self.p_mat.rows != self.p_mat.cols:
            raise DimensionError("partition sizes must sum to the matrix order")
        if self.n < 1 or self.m < 1:
            raise DimensionError("both partition blocks must be non-empty")

    @property
    def p11(self) -> ComplexMatrix:
        return ComplexMatrix(self.p_mat.data[: self.n, : self.n])

    @property
    def p12(self) -> ComplexMatrix:
        return ComplexMatrix(self.p_mat.data[: self.n, self.n :])

    @property
    def p21(self) -> ComplexMatrix:
        return ComplexMatrix(self.p_mat.data[self.n :, : self.n])

    @property
    def p22(self) -> ComplexMatrix:
        return ComplexMatrix(self.p_mat.data[self.n :, self.n :])

    def assemble(self) -> ComplexMatrix:
        top = np.hstack([self.p11.data, self.p12.data])
        bottom = np.hstack([self.p21.data, self.p22.data])
        return ComplexMatrix(np.vstack([top, bottom]))


def assemble_blocks(a: ComplexMatrix, b: ComplexMatrix, c: ComplexMatrix, d: ComplexMatrix) -> ComplexMatrix:
    return ComplexMatrix(np.vstack([np.hstack([a.data, b.data]), np.hstack([c.data, d.data])]))


def _negate(m: ComplexMatrix) -> ComplexMatrix:
    # sign flip, not booked as arithmetic
    return ComplexMatrix(-m.data)


def block_inverse_via_a(
    a: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
    d: ComplexMatrix,
    meter: CostMeter | None = None,
) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """Blocks of [[A, B], [C, D]]^-1 computed through A^-1.

    Requires A and the factor C A^-1 B - D to be invertible.
    """
    try:
        ai = gauss_invert(a, meter)
    except SingularMatrixError as exc:
        raise SingularMatrixError(exc.column, "upper-left block is singular") from exc
    ab = mat_mul(ai, b, meter)
    ca = mat_mul(c, ai, meter)
    s = mat_sub(mat_mul(ca, b, meter), d, meter)
    try:
        si = gauss_invert(s, meter)
    except SingularMatrixError as exc:
        raise SingularMatrixError(exc.column, "factor C A^-1 B - D is singular") from exc
    b_p = mat_mul(ab, si, meter)
    c_p = mat_mul(si, ca, meter)
    a_p = mat_sub(ai, mat_mul(ab, c_p, meter), meter)
    d_p = _negate(si)
    return a_p, b_p, c_p, d_p


def block_inverse_via_d(
    a: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
    d: ComplexMatrix,
    meter: CostMeter | None = None,
) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """Blocks of [[A, B], [C, D]]^-1 computed through D^-1.

    Requires D and the factor B D^-1 C - A to be invertible. Agrees with
    :func:`block_inverse_via_a` whenever both apply.
    """
    try:
        di = gauss_invert(d, meter)
    except SingularMatrixError as exc:
        raise SingularMatrixError(exc.column, "lower-right block is singular") from exc
    bd = mat_mul(b, di, meter)
    dc = mat_mul(di, c, meter)
    s = mat_sub(mat_mul(bd, c, meter), a, meter)
    try:
        si = gauss_invert(s, meter)
    except SingularMatrixError as exc:
        raise SingularMatrixError(exc.column, "factor B D^-1 C - A is singular") from exc
    a_p = _negate(si)
    b_p = mat_mul(si, bd, meter)
    c_p = mat_mul(dc, si, meter)
    d_p = mat_sub(di, mat_mul(dc, mat_mul(si, bd, meter), meter), meter)
    return a_p, b_p, c_p, d_p


def _run(
    u: ComplexVector,
    grid: ComponentGrid,
    y0: float,
    n_inputs: int,
    physics_meter: CostMeter | None,
):
    net = MilacNetwork(n_inputs, grid.size - n_inputs, y0, grid)
    return simulate(net, u, physics_meter)


def output_on_driven_ports(
    u: ComplexVector,
    grid: ComponentGrid,
    y0: float = Y0_DEFAULT,
    n_inputs: int | None = None,
    meter: CostMeter | None = None,
    physics_meter: CostMeter | None = None,
) -> ComplexVector:
    """First primitive: drive N ports, read the voltages on those N ports.

    `meter` is the algorithmic meter; evaluation books nothing on it because
    the configured network computes in the analog domain.
    """
    n = u.len if n_inputs is None else n_inputs
    if grid.size < n:
        raise DimensionError(f"grid of size {grid.size} has fewer than {n} ports")
    return _run(u, grid, y0, n, physics_meter).v1


def output_on_matched_ports(
    u: ComplexVector,
    grid: ComponentGrid,
    y0: float = Y0_DEFAULT,
    n_inputs: int | None = None,
    meter: CostMeter | None = None,
    physics_meter: CostMeter | None = None,
) -> ComplexVector:
    """Second primitive: drive N ports, read the voltages on the M matched ports."""
    n = u.len if n_inputs is None else n_inputs
    if grid.size - n < 1:
        raise ValueError("no matched ports to read: grid size equals the input count")
    sol = _run(u, grid, y0, n, physics_meter)
    assert sol.v2 is not None
    return sol.v2


def output_on_all_ports(
    u: ComplexVector,
    grid: ComponentGrid,
    y0: float = Y0_DEFAULT,
    meter: CostMeter | None = None,
    physics_meter: CostMeter | None = None,
) -> ComplexVector:
    """Third primitive: read the voltages on all P ports.

    With input on every port (len(u) == P) this is the inverse system matrix
    applied to u; with fewer inputs it concatenates the other two primitives.
    """
    if u.len > grid.size:
        raise DimensionError(f"input length {u.len} exceeds grid size {grid.size}")
    return _run(u, grid, y0, u.len, physics_meter).v
