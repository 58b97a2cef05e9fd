"""LMMSE estimator and error covariance: digital forms vs the analog route.

Digital oracle: an independent raw-numpy solve of the normal equations
(H^H Cn^-1 H + Cx^-1) xhat = H^H Cn^-1 y, kept free of the package's own
linear algebra.
"""

import numpy as np
import pytest

from conftest import cm, cv, random_spd, random_vector, rel_err_mat, rel_err_vec
from milac.estimation import (
    LinearObservationModel,
    ModelValidationError,
    build_p_cov,
    build_p_lmmse,
    cov_analog,
    cov_digital,
    invert_analog,
    lmmse_analog,
    lmmse_digital,
)
from milac.numerics import (
    ComplexMatrix,
    ComplexVector,
    CostMeter,
    SingularMatrixError,
    gauss_invert,
)

ONE = cm([[1.0]])


def scalar_model() -> LinearObservationModel:
    return LinearObservationModel(ONE, ONE, ONE)


def random_model(rng, x_dim, y_dim) -> LinearObservationModel:
    h = ComplexMatrix(rng.normal(size=(y_dim, x_dim)) + 1j * rng.normal(size=(y_dim, x_dim)))
    return LinearObservationModel(h, random_spd(rng, x_dim), random_spd(rng, y_dim))


def normal_equation_oracle(model: LinearObservationModel, y: ComplexVector) -> np.ndarray:
    h = model.h.data
    cn_inv = np.linalg.inv(model.cn.data)
    cx_inv = np.linalg.inv(model.cx.data)
    lhs = h.conj().T @ cn_inv @ h + cx_inv
    rhs = h.conj().T @ cn_inv @ y.data
    return np.linalg.solve(lhs, rhs)


class TestModelValidation:
    def test_rejects_non_hermitian_covariance(self):
        with pytest.raises(ModelValidationError):
            LinearObservationModel(ONE, ONE, cm([[1j]]))

    def test_rejects_indefinite_covariance(self):
        with pytest.raises(ModelValidationError):
            LinearObservationModel(cm([[1, 0], [0, 1]]), cm([[1, 0], [0, -1]]), ComplexMatrix.identity(2))

    def test_rejects_dimension_mismatch(self):
        from milac.numerics import DimensionError

        with pytest.raises(DimensionError):
            LinearObservationModel(cm([[1, 0]]), ONE, ONE)

    def test_cached_inverses(self, rng):
        model = random_model(rng, 3, 2)
        assert np.allclose(model.cx_inv.data @ model.cx.data, np.eye(3), atol=1e-10)
        assert np.allclose(model.cn_inv.data @ model.cn.data, np.eye(2), atol=1e-10)


class TestLmmseDigital:
    def test_scalar(self):
        result = lmmse_digital(scalar_model(), cv([2.0]), form=1)
        assert np.allclose(result.xhat.data, [1.0])

    def test_zero_observation_matrix(self):
        model = LinearObservationModel(ComplexMatrix.zeros(2, 2), ComplexMatrix.identity(2), ComplexMatrix.identity(2))
        result = lmmse_digital(model, cv([3, 4]), form=2)
        assert np.allclose(result.xhat.data, 0)

    def test_matches_normal_equation_oracle(self, rng):
        for _ in range(5):
            model = random_model(rng, 2, 2)
            y = random_vector(rng, 2)
            expected = normal_equation_oracle(model, y)
            for form in (1, 2):
                got = lmmse_digital(model, y, form=form).xhat.data
                assert rel_err_vec(got, expected) <= 1e-9

    def test_forms_agree(self, rng):
        model = random_model(rng, 4, 3)
        y = random_vector(rng, 3)
        one = lmmse_digital(model, y, form=1).xhat.data
        two = lmmse_digital(model, y, form=2).xhat.data
        assert rel_err_vec(one, two) <= 1e-9

    def test_bad_form_rejected(self, rng):
        with pytest.raises(ValueError):
            lmmse_digital(scalar_model(), cv([1.0]), form=3)


class TestCovDigital:
    def test_scalar(self):
        result = cov_digital(scalar_model(), form=1)
        assert np.allclose(result.ce.data, [[0.5]])

    def test_zero_observation_matrix_keeps_prior(self):
        cx = random_spd(np.random.default_rng(3), 3)
        model = LinearObservationModel(ComplexMatrix.zeros(2, 3), cx, ComplexMatrix.identity(2))
        result = cov_digital(model, form=1)
        assert rel_err_mat(result.ce.data, cx.data) <= 1e-12

    def test_forms_agree(self, rng):
        model = random_model(rng, 2, 2)
        one = cov_digital(model, form=1).ce.data
        two = cov_digital(model, form=2).ce.data
        assert rel_err_mat(one, two) <= 1e-9

    def test_result_is_hermitian(self, rng):
        model = random_model(rng, 5, 4)
        ce = cov_digital(model, form=1).ce.data
        assert np.linalg.norm(ce - ce.conj().T) <= 1e-9 * np.linalg.norm(ce)


class TestSystemMatrixEmbeddings:
    def test_scalar_plus(self):
        assert np.allclose(build_p_lmmse(scalar_model(), 1).data, [[1, 1], [1, -1]])

    def test_scalar_minus(self):
        assert np.allclose(build_p_lmmse(scalar_model(), -1).data, [[-1, 1], [1, 1]])

    def test_zero_coupling_is_block_diagonal(self):
        model = LinearObservationModel(ComplexMatrix.zeros(2, 2), ComplexMatrix.identity(2), ComplexMatrix.identity(2))
        p = build_p_lmmse(model, 1).data
        assert np.allclose(p[:2, 2:], 0)
        assert np.allclose(p[2:, :2], 0)

    def test_cov_embedding_scalar(self):
        assert np.allclose(build_p_cov(scalar_model()).data, [[1, 1], [1, -1]])

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            build_p_lmmse(scalar_model(), 2)


class TestLmmseAnalog:
    def test_scalar(self):
        result = lmmse_analog(scalar_model(), cv([2.0]), sign=1)
        assert np.allclose(result.xhat.data, [1.0])

    def test_matches_digital_on_random_instance(self, rng):
        model = random_model(rng, 4, 4)
        y = random_vector(rng, 4)
        digital = lmmse_digital(model, y, form=1).xhat.data
        for sign in (1, -1):
            analog = lmmse_analog(model, y, sign=sign).xhat.data
            assert rel_err_vec(analog, digital) <= 1e-9

    def test_sign_invariance(self, rng):
        model = random_model(rng, 3, 5)
        y = random_vector(rng, 5)
        plus = lmmse_analog(model, y, sign=1).xhat.data
        minus = lmmse_analog(model, y, sign=-1).xhat.data
        assert rel_err_vec(plus, minus) <= 1e-10

    def test_meter_books_exactly_the_setup_cost(self, rng):
        x_dim, y_dim = 5, 3
        model = random_model(rng, x_dim, y_dim)
        meter = CostMeter()
        lmmse_analog(model, random_vector(rng, y_dim), meter=meter)
        assert meter.total() == 6 * x_dim * y_dim
        assert abs(meter.total() - 6 * x_dim * y_dim) <= 2 * (x_dim + y_dim)


class TestCovAnalog:
    def test_scalar(self):
        assert np.allclose(cov_analog(scalar_model()).ce.data, [[0.5]])

    def test_zero_observation_matrix_keeps_prior(self, rng):
        cx = random_spd(rng, 2)
        model = LinearObservationModel(ComplexMatrix.zeros(3, 2), cx, random_spd(rng, 3))
        result = cov_analog(model)
        assert rel_err_mat(result.ce.data, cx.data) <= 1e-9

    def test_matches_digital(self, rng):
        model = random_model(rng, 3, 3)
        analog = cov_analog(model).ce.data
        for form in (1, 2):
            digital = cov_digital(model, form=form).ce.data
            assert rel_err_mat(analog, digital) <= 1e-9

    def test_meter_books_exactly_the_setup_cost(self, rng):
        model = random_model(rng, 4, 6)
        meter = CostMeter()
        cov_analog(model, meter=meter)
        assert meter.total() == 6 * 4 * 6

    def test_error_covariance_identity(self, rng):
        # Ce must equal Cx - Cx H^H (H Cx H^H + Cn)^-1 H Cx, checked raw
        model = random_model(rng, 4, 3)
        h, cx, cn = model.h.data, model.cx.data, model.cn.data
        expected = cx - cx @ h.conj().T @ np.linalg.inv(h @ cx @ h.conj().T + cn) @ h @ cx
        for ce in (cov_analog(model).ce.data, cov_digital(model, 1).ce.data, cov_digital(model, 2).ce.data):
            assert rel_err_mat(ce, expected) <= 1e-9


class TestInvertAnalog:
    def test_identity(self):
        out = invert_analog(ComplexMatrix.identity(3))
        assert np.allclose(out.data, np.eye(3))

    def test_hand_inverse(self):
        out = invert_analog(cm([[2, 1], [1, 2]]))
        assert np.allclose(out.data, [[2 / 3, -1 / 3], [-1 / 3, 2 / 3]])

    def test_matches_gauss_on_random_instance(self, rng):
        from conftest import well_conditioned_matrix

        p = well_conditioned_matrix(rng, 8)
        analog = invert_analog(p).data
        digital = gauss_invert(p).data
        assert rel_err_mat(analog, digital) <= 1e-9
        assert np.linalg.norm(p.data @ analog - np.eye(8)) <= 1e-9 * 8

    def test_meter_books_exactly_the_setup_cost(self, rng):
        meter = CostMeter()
        invert_analog(ComplexMatrix.identity(16), meter)
        assert meter.total() == 4 * 16 * 16

    def test_singular_matrix_raises(self):
        with pytest.raises(SingularMatrixError):
            invert_analog(cm([[1, 1], [1, 1]]))


class TestMonteCarloSanity:
    def test_empirical_mse_tracks_the_covariance_trace(self, rng):
        # reduced-size version of the full acceptance run
        x_dim = y_dim = 4
        model = random_model(rng, x_dim, y_dim)
        ce = cov_digital(model, form=2).ce.data
        samples = 20000
        lx = np.linalg.cholesky(model.cx.data)
        ln = np.linalg.cholesky(model.cn.data)
        zx = (rng.standard_normal((x_dim, samples)) + 1j * rng.standard_normal((x_dim, samples))) / np.sqrt(2)
        zn = (rng.standard_normal((y_dim, samples)) + 1j * rng.standard_normal((y_dim, samples))) / np.sqrt(2)
        x = lx @ zx
        y = model.h.data @ x + ln @ zn
        # estimator matrix assembled from package results: W = Ce H^H Cn^-1
        w = ce @ model.h.data.conj().T @ model.cn_inv.data
        err = w @ y - x
        mse = float(np.mean(np.sum(np.abs(err) ** 2, axis=0)))
        trace = float(np.trace(ce).real)
        assert abs(mse - trace) <= 0.10 * trace
