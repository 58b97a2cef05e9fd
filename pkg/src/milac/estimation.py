"""Linear MMSE estimation: digital closed forms and the analog network route.

For the observation model y = H x + n with zero-mean x and n, known
covariances Cx and Cn, and zero cross-covariance, the estimator and its error
covariance each have two equivalent closed forms:

    xhat = (H^H Cn^-1 H + Cx^-1)^-1 H^H Cn^-1 y   (form 1)
    xhat = Cx H^H (H Cx H^H + Cn)^-1 y            (form 2)
    Ce   = Cx - Cx H^H (H Cx H^H + Cn)^-1 H Cx    (form 1)
    Ce   = (H^H Cn^-1 H + Cx^-1)^-1               (form 2)

The analog route configures a network whose system matrix embeds H, Cn and
Cx^-1, applies the observation (or basis vectors) at the driven ports, and
reads the result off the matched (or driven) ports. The only digital work is
setting the component values; that setup is what the algorithmic meter books:
2XY real multiplications for the off-diagonal couplings plus 4XY real
additions for the diagonal column sums (6XY total), and 2N^2 + 2N^2 = 4N^2
for the all-ports inversion configuration. Work involving Cx and Cn alone
(the cached inverses) is precomputed offline and not booked.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .network import Y0_DEFAULT, grid_from_system_matrix
from .numerics import (
    ComplexMatrix,
    ComplexVector,
    CostMeter,
    DimensionError,
    gauss_invert,
    mat_add,
    mat_mul,
    mat_sub,
    mat_vec,
)
from .primitives import (
    assemble_blocks,
    output_on_all_ports,
    output_on_driven_ports,
    output_on_matched_ports,
)

HERMITIAN_RTOL = 1e-12


class ModelValidationError(ValueError):
    """Observation-model inputs violate their requirements."""


def _require_hermitian_pd(m: ComplexMatrix, name: str) -> None:
    norm = float(np.linalg.norm(m.data))
    if norm > 0 and float(np.linalg.norm(m.data - m.data.conj().T)) > HERMITIAN_RTOL * norm:
        raise ModelValidationError(f"{name} is not Hermitian")
    try:
        np.linalg.cholesky(0.5 * (m.data + m.data.conj().T))
    except np.linalg.LinAlgError:
        raise ModelValidationError(f"{name} is not positive definite") from None


class LinearObservationModel:
    """Observation model (H, Cx, Cn) for y = H x + n.

    Cx and Cn must be Hermitian positive definite; their inverses are cached
    on first use (offline precomputation, never booked on a meter).
    """

    def __init__(self, h: ComplexMatrix, cx: ComplexMatrix, cn: ComplexMatrix):
        if cx.rows != cx.cols or cn.rows != cn.cols:
            raise DimensionError("covariance matrices must be square")
        if h.cols != cx.rows or h.rows != cn.rows:
            raise DimensionError(
                f"H is {h.rows}x{h.cols} but Cx is {cx.rows}x{cx.cols}, Cn is {cn.rows}x{cn.cols}"
            )
        _require_hermitian_pd(cx, "Cx")
        _require_hermitian_pd(cn, "Cn")
        self.h = h
        self.cx = cx
        self.cn = cn

    @property
    def x_dim(self) -> int:
        return self.h.cols

    @property
    def y_dim(self) -> int:
        return self.h.rows

    @cached_property
    def cx_inv(self) -> ComplexMatrix:
        return ComplexMatrix(np.linalg.inv(self.cx.data))

    @cached_property
    def cn_inv(self) -> ComplexMatrix:
        return ComplexMatrix(np.linalg.inv(self.cn.data))


@dataclass(frozen=True, eq=False)
class LmmseResult:
    xhat: ComplexVector
    meter: CostMeter


@dataclass(frozen=True, eq=False)
class CovResult:
    ce: ComplexMatrix
    meter: CostMeter


def lmmse_digital(
    model: LinearObservationModel,
    y: ComplexVector,
    form: int = 2,
    meter: CostMeter | None = None,
) -> LmmseResult:
    """Digital estimator via form 1 or form 2, metered through the dense ops."""
    if y.len != model.y_dim:
        raise DimensionError(f"observation length {y.len}, expected {model.y_dim}")
    if form not in (1, 2):
        raise ValueError("form must be 1 or 2")
    m = meter if meter is not None else CostMeter()
    if form == 1:
        b = mat_mul(model.h.conj_transpose(), model.cn_inv, m)
        g = mat_add(mat_mul(b, model.h, m), model.cx_inv, m)
        gi = gauss_invert(g, m)
        xhat = mat_vec(gi, mat_vec(b, y, m), m)
    else:
        t = mat_mul(model.cx, model.h.conj_transpose(), m)
        s = mat_add(mat_mul(model.h, t, m), model.cn, m)
        si = gauss_invert(s, m)
        xhat = mat_vec(t, mat_vec(si, y, m), m)
    return LmmseResult(xhat, m)


def cov_digital(
    model: LinearObservationModel,
    form: int = 2,
    meter: CostMeter | None = None,
) -> CovResult:
    """Digital error covariance via form 1 or form 2."""
    if form not in (1, 2):
        raise ValueError("form must be 1 or 2")
    m = meter if meter is not None else CostMeter()
    if form == 1:
        t = mat_mul(model.cx, model.h.conj_transpose(), m)
        s = mat_add(mat_mul(model.h, t, m), model.cn, m)
        si = gauss_invert(s, m)
        ce = mat_sub(model.cx, mat_mul(mat_mul(t, si, m), t.conj_transpose(), m), m)
    else:
        b = mat_mul(model.h.conj_transpose(), model.cn_inv, m)
        g = mat_add(mat_mul(b, model.h, m), model.cx_inv, m)
        ce = gauss_invert(g, m)
    return CovResult(ce, m)


def lmmse_system_matrix(
    h: ComplexMatrix, cx_inv: ComplexMatrix, cn: ComplexMatrix, sign: int = 1
) -> ComplexMatrix:
    """System matrix [[sign*Cn, H], [H^H, -sign*Cx^-1]] whose matched-port
    response to the observation is the estimator. Both signs work."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return assemble_blocks(
        ComplexMatrix(sign * cn.data),
        h,
        h.conj_transpose(),
        ComplexMatrix(-sign * cx_inv.data),
    )


def covariance_system_matrix(
    h: ComplexMatrix, cx_inv: ComplexMatrix, cn: ComplexMatrix
) -> ComplexMatrix:
    """System matrix [[Cx^-1, H^H], [H, -Cn]] whose driven-port response to
    basis vectors yields the error covariance columns."""
    return assemble_blocks(cx_inv, h.conj_transpose(), h, ComplexMatrix(-cn.data))


def build_p_lmmse(model: LinearObservationModel, sign: int = 1) -> ComplexMatrix:
    return lmmse_system_matrix(model.h, model.cx_inv, model.cn, sign)


def build_p_cov(model: LinearObservationModel) -> ComplexMatrix:
    return covariance_system_matrix(model.h, model.cx_inv, model.cn)


def _book_coupling_setup(meter: CostMeter | None, x: int, y: int) -> None:
    # declared split of the 6XY setup cost: off-diagonal scaling then
    # diagonal column sums
    if meter is not None:
        meter.muls += 2 * x * y
        meter.adds += 4 * x * y


def _book_allports_setup(meter: CostMeter | None, n: int) -> None:
    # 4N^2 setup cost for the all-ports (inversion) configuration
    if meter is not None:
        meter.muls += 2 * n * n
        meter.adds += 2 * n * n


def lmmse_analog_from_parts(
    h: ComplexMatrix,
    cx_inv: ComplexMatrix,
    cn: ComplexMatrix,
    y: ComplexVector,
    sign: int = 1,
    meter: CostMeter | None = None,
    y0: float = Y0_DEFAULT,
) -> ComplexVector:
    """Estimator through the configured network, given Cx^-1 directly."""
    x_dim, y_dim = h.cols, h.rows
    if y.len != y_dim:
        raise DimensionError(f"observation length {y.len}, expected {y_dim}")
    p_mat = lmmse_system_matrix(h, cx_inv, cn, sign)
    grid = grid_from_system_matrix(p_mat, y0)
    _book_coupling_setup(meter, x_dim, y_dim)
    return output_on_matched_ports(y, grid, y0, n_inputs=y_dim, meter=meter)


def lmmse_analog(
    model: LinearObservationModel,
    y: ComplexVector,
    sign: int = 1,
    meter: CostMeter | None = None,
    y0: float = Y0_DEFAULT,
) -> LmmseResult:
    """Estimator computed on the network (either sign of the embedding)."""
    m = meter if meter is not None else CostMeter()
    xhat = lmmse_analog_from_parts(model.h, model.cx_inv, model.cn, y, sign, m, y0)
    return LmmseResult(xhat, m)


def cov_analog_from_parts(
    h: ComplexMatrix,
    cx_inv: ComplexMatrix,
    cn: ComplexMatrix,
    meter: CostMeter | None = None,
    y0: float = Y0_DEFAULT,
) -> ComplexMatrix:
    """Error covariance through the configured network, column by column.

    The column loop is embarrassingly parallel; columns are assembled in
    index order so the result is identical either way.
    """
    x_dim, y_dim = h.cols, h.rows
    p_mat = covariance_system_matrix(h, cx_inv, cn)
    grid = grid_from_system_matrix(p_mat, y0)
    _book_coupling_setup(meter, x_dim, y_dim)
    cols = np.empty((x_dim, x_dim), dtype=np.complex128)
    for n in range(x_dim):
        e_n = ComplexVector.basis(x_dim, n)
        cols[:, n] = output_on_driven_ports(e_n, grid, y0, n_inputs=x_dim, meter=meter).data
    return ComplexMatrix(cols)


def cov_analog(
    model: LinearObservationModel,
    meter: CostMeter | None = None,
    y0: float = Y0_DEFAULT,
) -> CovResult:
    m = meter if meter is not None else CostMeter()
    ce = cov_analog_from_parts(model.h, model.cx_inv, model.cn, m, y0)
    return CovResult(ce, m)


def invert_analog(
    p_mat: ComplexMatrix,
    meter: CostMeter | None = None,
    y0: float = Y0_DEFAULT,
) -> ComplexMatrix:
    """Invert a matrix by configuring the all-ports network and reading one
    column of the inverse per basis-vector input."""
    if p_mat.rows != p_mat.cols:
        raise DimensionError("matrix must be square")
    n_dim = p_mat.rows
    grid = grid_from_system_matrix(p_mat, y0)
    _book_allports_setup(meter, n_dim)
    cols = np.empty((n_dim, n_dim), dtype=np.complex128)
    for n in range(n_dim):
        e_n = ComplexVector.basis(n_dim, n)
        cols[:, n] = output_on_all_ports(e_n, grid, y0, meter=meter).data
    return ComplexMatrix(cols)
