"""Kalman filtering, digitally and through the analog estimator route.

The digital step is the textbook predict/correct recursion. The analog step
replaces every matrix-matrix product and inversion with a network evaluation:

1. predict the state digitally,
2. obtain the inverse predicted covariance as an analog error-covariance run
   with the transition matrix in the observation role, the state-noise
   covariance in the inverse-prior role and the previous inverse covariance
   in the noise role,
3. form the innovation digitally,
4. obtain the state correction as an analog estimator run,
5. add the correction,
6. obtain the posterior covariance as an analog error-covariance run,
7. invert it analogically to carry into the next step.

The analog step therefore carries the inverse covariance across steps and
additionally materializes the covariance itself; both are returned. All
covariances are re-Hermitianized after each update to suppress drift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .estimation import cov_analog_from_parts, invert_analog, lmmse_analog_from_parts
from .network import Y0_DEFAULT
from .numerics import (
    ComplexMatrix,
    ComplexVector,
    CostMeter,
    DimensionError,
    SingularMatrixError,
    gauss_invert,
    mat_add,
    mat_mul,
    mat_sub,
    mat_vec,
    vec_add,
    vec_sub,
)

PSD_TOL = 1e-9


class FilterStepError(ArithmeticError):
    """A filter step failed; the message names the failing step."""


@dataclass(frozen=True, eq=False)
class DynamicalModel:
    """Linear state-space model: transition, observation, and noise covariances."""

    transition: ComplexMatrix
    observation: ComplexMatrix
    state_noise_cov: ComplexMatrix
    obs_noise_cov: ComplexMatrix

    def __post_init__(self):
        x, y = self.x_dim, self.y_dim
        if self.transition.cols != x:
            raise DimensionError("transition matrix must be square")
        if self.observation.cols != x:
            raise DimensionError("observation matrix column count must match the state size")
        if self.state_noise_cov.rows != x or self.state_noise_cov.cols != x:
            raise DimensionError("state-noise covariance must be X x X")
        if self.obs_noise_cov.rows != y or self.obs_noise_cov.cols != y:
            raise DimensionError("observation-noise covariance must be Y x Y")
        _require_hermitian_psd(self.state_noise_cov, "state-noise covariance")
        _require_hermitian_psd(self.obs_noise_cov, "observation-noise covariance", definite=True)

    @property
    def x_dim(self) -> int:
        return self.transition.rows

    @property
    def y_dim(self) -> int:
        return self.observation.rows


def _require_hermitian_psd(m: ComplexMatrix, name: str, definite: bool = False) -> None:
    norm = float(np.linalg.norm(m.data))
    if norm > 0 and float(np.linalg.norm(m.data - m.data.conj().T)) > 1e-9 * norm:
        raise ValueError(f"{name} is not Hermitian")
    eigs = np.linalg.eigvalsh(0.5 * (m.data + m.data.conj().T))
    floor = -PSD_TOL * max(norm, 1.0)
    if definite:
        if float(eigs.min()) <= 0.0:
            raise ValueError(f"{name} must be positive definite")
    elif float(eigs.min()) < floor:
        raise ValueError(f"{name} must be positive semi-definite")


@dataclass(frozen=True, eq=False)
class FilterState:
    """Posterior state estimate with its error covariance and/or its inverse."""

    xhat: ComplexVector
    r: ComplexMatrix | None = None
    rinv: ComplexMatrix | None = None

    def __post_init__(self):
        if self.r is None and self.rinv is None:
            raise ValueError("filter state needs the covariance or its inverse")

    def with_rinv(self) -> "FilterState":
        """Materialize the inverse covariance if absent (offline, unmetered)."""
        if self.rinv is not None:
            return self
        assert self.r is not None
        return FilterState(self.xhat, self.r, ComplexMatrix(np.linalg.inv(self.r.data)))


def _hermitianize(m: ComplexMatrix) -> ComplexMatrix:
    return ComplexMatrix(0.5 * (m.data + m.data.conj().T))


def kalman_step_digital(
    model: DynamicalModel,
    state: FilterState,
    y_t: ComplexVector,
    meter: CostMeter | None = None,
) -> FilterState:
    """One digital predict/correct step.

    Products reuse T = R_pred H^H (so H R_pred = T^H by Hermitian symmetry),
    which keeps the booking at the two-products-plus-inversion accounting for
    the correction phase.
    """
    if state.r is None:
        raise ValueError("digital step requires the covariance representation")
    if y_t.len != model.y_dim:
        raise DimensionError(f"observation length {y_t.len}, expected {model.y_dim}")
    m = meter if meter is not None else CostMeter()
    a, h = model.transition, model.observation

    x_pred = mat_vec(a, state.xhat, m)
    r_pred = _hermitianize(
        mat_add(mat_mul(mat_mul(a, state.r, m), a.conj_transpose(), m), model.state_noise_cov, m)
    )

    t = mat_mul(r_pred, h.conj_transpose(), m)
    s = mat_add(mat_mul(h, t, m), model.obs_noise_cov, m)
    try:
        s_inv = gauss_invert(s, m)
    except SingularMatrixError as exc:
        raise FilterStepError(f"digital step: innovation covariance is singular ({exc})") from exc
    gain = mat_mul(t, s_inv, m)
    innovation = vec_sub(y_t, mat_vec(h, x_pred, m), m)
    x_post = vec_add(x_pred, mat_vec(gain, innovation, m), m)
    r_post = _hermitianize(mat_sub(r_pred, mat_mul(gain, t.conj_transpose(), m), m))
    return FilterState(x_post, r=r_post)


def kalman_step_analog(
    model: DynamicalModel,
    state: FilterState,
    y_t: ComplexVector,
    meter: CostMeter | None = None,
    y0: float = Y0_DEFAULT,
) -> FilterState:
    """One predict/correct step with every heavy operation done on the network."""
    if state.rinv is None:
        raise ValueError("analog step requires the inverse-covariance representation")
    if y_t.len != model.y_dim:
        raise DimensionError(f"observation length {y_t.len}, expected {model.y_dim}")
    m = meter if meter is not None else CostMeter()
    a, h = model.transition, model.observation

    # step 1: digital state prediction
    x_pred = mat_vec(a, state.xhat, m)

    # step 2: inverse predicted covariance = (A R A^H + M)^-1 via the
    # covariance network with A^H observing, M as inverse prior, R^-1 as noise
    try:
        rinv_pred = _hermitianize(
            cov_analog_from_parts(
                a.conj_transpose(), model.state_noise_cov, state.rinv, m, y0
            )
        )
    except SingularMatrixError as exc:
        raise FilterStepError(f"analog step 2 (covariance prediction): {exc}") from exc

    # step 3: innovation
    innovation = vec_sub(y_t, mat_vec(h, x_pred, m), m)

    # step 4: state correction as an analog estimator run
    try:
        correction = lmmse_analog_from_parts(h, rinv_pred, model.obs_noise_cov, innovation, 1, m, y0)
    except SingularMatrixError as exc:
        raise FilterStepError(f"analog step 4 (state correction): {exc}") from exc

    # step 5: posterior estimate
    x_post = vec_add(correction, x_pred, m)

    # step 6: posterior covariance
    try:
        r_post = _hermitianize(
            cov_analog_from_parts(h, rinv_pred, model.obs_noise_cov, m, y0)
        )
    except SingularMatrixError as exc:
        raise FilterStepError(f"analog step 6 (posterior covariance): {exc}") from exc

    # step 7: carry the inverse forward
    try:
        rinv_post = _hermitianize(invert_analog(r_post, m, y0))
    except SingularMatrixError as exc:
        raise FilterStepError(f"analog step 7 (covariance inversion): {exc}") from exc

    return FilterState(x_post, r=r_post, rinv=rinv_post)


def kalman_run(
    models: DynamicalModel | list[DynamicalModel],
    initial: FilterState,
    observations: list[ComplexVector],
    mode: str = "digital",
    meter: CostMeter | None = None,
    y0: float = Y0_DEFAULT,
) -> list[FilterState]:
    """Fold the chosen step over an observation sequence.

    `models` is one model reused every step or a per-step list. The returned
    trajectory holds one posterior state per observation.
    """
    if mode not in ("digital", "analog"):
        raise ValueError("mode must be 'digital' or 'analog'")
    steps = len(observations)
    if isinstance(models, DynamicalModel):
        seq = [models] * steps
    else:
        seq = list(models)
        if len(seq) != steps:
            raise DimensionError(f"{len(seq)} models for {steps} observations")
    state = initial.with_rinv() if mode == "analog" else initial
    if mode == "digital" and state.r is None:
        state = FilterState(state.xhat, ComplexMatrix(np.linalg.inv(state.rinv.data)), state.rinv)
    trajectory: list[FilterState] = []
    for t, (step_model, y_t) in enumerate(zip(seq, observations)):
        try:
            if mode == "digital":
                state = kalman_step_digital(step_model, state, y_t, meter)
            else:
                state = kalman_step_analog(step_model, state, y_t, meter, y0)
        except (FilterStepError, SingularMatrixError) as exc:
            raise FilterStepError(f"time step {t}: {exc}") from exc
        trajectory.append(state)
    return trajectory


def generate_trajectory(
    model: DynamicalModel,
    steps: int,
    seed: int,
    initial_mean: ComplexVector | None = None,
    initial_cov: ComplexMatrix | None = None,
) -> tuple[list[ComplexVector], list[ComplexVector]]:
    """Draw a synthetic (states, observations) pair from the model.

    Deterministic for a given seed; noises are circularly-symmetric complex
    Gaussian with the model covariances.
    """
    rng = np.random.default_rng(seed)
    x_dim, y_dim = model.x_dim, model.y_dim
    mean = np.zeros(x_dim, dtype=np.complex128) if initial_mean is None else initial_mean.data
    cov = np.eye(x_dim, dtype=np.complex128) if initial_cov is None else initial_cov.data

    def draw(c: np.ndarray, n: int) -> np.ndarray:
        half = np.linalg.cholesky(0.5 * (c + c.conj().T) + 1e-15 * np.eye(n))
        z = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
        return half @ z

    x = mean + draw(cov, x_dim)
    states, observations = [], []
    for _ in range(steps):
        x = model.transition.data @ x + draw(model.state_noise_cov.data, x_dim)
        y = model.observation.data @ x + draw(model.obs_noise_cov.data, y_dim)
        states.append(ComplexVector(x.copy()))
        observations.append(ComplexVector(y))
    return states, observations
