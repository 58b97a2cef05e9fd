"""Metered dense complex linear algebra.

The Gauss operation-count oracle here is an independent instruction-level
tracer: it performs a single-system elimination with back substitution and
counts every complex operation as it executes. The closed forms booked by
the library must match the trace exactly.
"""

import numpy as np
import pytest

from conftest import cm, cv, well_conditioned_matrix
from milac.numerics import (
    ComplexMatrix,
    ComplexVector,
    CostMeter,
    DimensionError,
    SingularMatrixError,
    gauss_divisions,
    gauss_invert,
    gauss_mul_sub_ops,
    mat_add,
    mat_mul,
    mat_sub,
    mat_vec,
    scalar_product,
    solve_linear,
    vec_add,
    vec_sub,
)


def traced_gauss_solve(a: np.ndarray, b: np.ndarray):
    """Count complex ops of one Gauss solve with back substitution, as executed."""
    n = a.shape[0]
    work = a.astype(complex).copy()
    x = b.astype(complex).copy()
    divs = muls = subs = 0
    for k in range(n - 1):
        for i in range(k + 1, n):
            f = work[i, k] / work[k, k]
            divs += 1
            for j in range(k + 1, n):
                work[i, j] -= f * work[k, j]
                muls += 1
                subs += 1
            x[i] -= f * x[k]
            muls += 1
            subs += 1
    for i in range(n - 1, -1, -1):
        acc = x[i]
        for j in range(i + 1, n):
            acc -= work[i, j] * x[j]
            muls += 1
            subs += 1
        x[i] = acc / work[i, i]
        divs += 1
    return x, divs, muls, subs


class TestTypes:
    def test_matrix_shape_and_entries(self):
        m = cm([[1, 2j], [3, 4]])
        assert (m.rows, m.cols) == (2, 2)
        assert m.entries == [1, 2j, 3, 4]

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            cm([[np.inf, 0], [0, 1]])
        with pytest.raises(ValueError):
            cv([np.nan])

    def test_immutability(self):
        m = cm([[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            m.data[0, 0] = 5

    def test_vector_len(self):
        v = cv([1, 2, 3])
        assert v.len == 3 and len(v) == 3


class TestCostMeter:
    def test_total(self):
        m = CostMeter(adds=1, subs=2, muls=3, divs=4)
        assert m.total() == 10

    def test_complex_division_booking_is_eleven_real_ops(self):
        m = CostMeter()
        m.book_complex_div()
        assert m.total() == 11
        assert (m.muls, m.adds, m.subs, m.divs) == (6, 2, 1, 2)

    def test_complex_multiply_booking_is_six_real_ops(self):
        m = CostMeter()
        m.book_complex_mul()
        assert m.total() == 6
        assert (m.muls, m.adds) == (4, 2)

    def test_merge_adds_counters(self):
        a = CostMeter()
        a.book_complex_mul(3)
        b = CostMeter()
        b.book_complex_div(2)
        a.merge(b)
        assert a.complex_muls == 3 and a.complex_divs == 2
        assert a.total() == 3 * 6 + 2 * 11


class TestScalarProduct:
    def test_single_entry(self):
        m = CostMeter()
        assert scalar_product(cv([1]), cv([1]), m) == 1
        assert m.total() == 6

    def test_orthogonal_pair_books_fourteen(self):
        m = CostMeter()
        assert scalar_product(cv([1, 0]), cv([0, 1]), m) == 0
        assert m.total() == 14
        assert (m.muls, m.adds) == (8, 6)

    def test_imaginary_pair(self):
        assert scalar_product(cv([1j, 1]), cv([1, 1j])) == 2j

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            scalar_product(cv([1]), cv([1, 2]))

    def test_meter_determinism(self):
        m1, m2 = CostMeter(), CostMeter()
        a, b = cv([1, 2j, 3]), cv([4, 5, 6j])
        scalar_product(a, b, m1)
        scalar_product(a, b, m2)
        assert m1 == m2


class TestMatVec:
    def test_identity(self):
        out = mat_vec(ComplexMatrix.identity(2), cv([3, 4j]))
        assert np.allclose(out.data, [3, 4j])

    def test_symmetric(self):
        assert np.allclose(mat_vec(cm([[2, 1], [1, 2]]), cv([1, 1])).data, [3, 3])

    def test_skew(self):
        assert np.allclose(mat_vec(cm([[0, -1j], [1j, 0]]), cv([1, 0])).data, [0, 1j])

    def test_booking_is_rows_times_scalar_product(self):
        m = CostMeter()
        mat_vec(cm([[1, 2, 3], [4, 5, 6]]), cv([1, 1, 1]), m)
        per_row = CostMeter()
        scalar_product(cv([1, 1, 1]), cv([1, 1, 1]), per_row)
        assert m.total() == 2 * per_row.total()

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            mat_vec(ComplexMatrix.identity(2), cv([1, 2, 3]))


class TestMatMul:
    def test_identity(self):
        out = mat_mul(ComplexMatrix.identity(2), ComplexMatrix.identity(2))
        assert np.allclose(out.data, np.eye(2))

    def test_square(self):
        out = mat_mul(cm([[2, 1], [1, 2]]), cm([[2, 1], [1, 2]]))
        assert np.allclose(out.data, [[5, 4], [4, 5]])

    def test_against_hand_inverse(self):
        a = cm([[2, 1], [1, 2]])
        a_inv = cm([[2 / 3, -1 / 3], [-1 / 3, 2 / 3]])
        assert np.allclose(mat_mul(a, a_inv).data, np.eye(2), atol=1e-12)

    def test_booking_is_cols_times_mat_vec(self):
        a, b = cm([[1, 2], [3, 4], [5, 6]]), cm([[1, 0, 2], [0, 1, 1]])
        m = CostMeter()
        mat_mul(a, b, m)
        one_col = CostMeter()
        mat_vec(a, cv([1, 0]), one_col)
        assert m.total() == 3 * one_col.total()

    def test_associativity_within_tolerance(self, rng):
        for _ in range(10):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            c = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            am, bm, cm_ = ComplexMatrix(a), ComplexMatrix(b), ComplexMatrix(c)
            left = mat_mul(mat_mul(am, bm), cm_).data
            right = mat_mul(am, mat_mul(bm, cm_)).data
            bound = 1e-10 * np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c)
            assert np.linalg.norm(left - right) <= bound


class TestElementwiseOps:
    def test_add_sub_round_trip(self):
        a, b = cm([[1, 2], [3, 4]]), cm([[5j, 6], [7, 8j]])
        m = CostMeter()
        total = mat_add(a, b, m)
        back = mat_sub(total, b, m)
        assert np.allclose(back.data, a.data)
        assert m.complex_adds == 4 and m.complex_subs == 4

    def test_vector_add_sub(self):
        m = CostMeter()
        s = vec_add(cv([1, 2]), cv([3, 4]), m)
        d = vec_sub(s, cv([3, 4]), m)
        assert np.allclose(d.data, [1, 2])
        assert (m.adds, m.subs) == (4, 4)


class TestGaussInvert:
    def test_identity_counters(self):
        m = CostMeter()
        out = gauss_invert(ComplexMatrix.identity(3), m)
        assert np.allclose(out.data, np.eye(3))
        assert m.complex_divs == 6
        assert m.complex_muls == 11
        assert m.complex_subs == 11

    def test_hand_two_by_two(self):
        out = gauss_invert(cm([[2, 1], [1, 2]]))
        assert np.allclose(out.data, [[2 / 3, -1 / 3], [-1 / 3, 2 / 3]])

    def test_permutation_is_its_own_inverse(self):
        p = cm([[0, 1], [1, 0]])
        assert np.allclose(gauss_invert(p).data, p.data)

    def test_closed_forms_match_instruction_trace(self, rng):
        for n in range(1, 17):
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 2 * n * np.eye(n)
            b = rng.normal(size=n) + 1j * rng.normal(size=n)
            _, divs, muls, subs = traced_gauss_solve(a, b)
            assert divs == gauss_divisions(n)
            assert muls == gauss_mul_sub_ops(n)
            assert subs == gauss_mul_sub_ops(n)
            meter = CostMeter()
            gauss_invert(ComplexMatrix(a), meter)
            assert meter.complex_divs == divs
            assert meter.complex_muls == muls
            assert meter.complex_subs == subs

    def test_real_counter_decomposition(self):
        n = 5
        m = CostMeter()
        gauss_invert(ComplexMatrix.identity(n), m)
        q = gauss_mul_sub_ops(n)
        d = gauss_divisions(n)
        assert m.muls == 4 * q + 6 * d
        assert m.adds == 2 * q + 2 * d
        assert m.subs == 2 * q + 1 * d
        assert m.divs == 2 * d

    def test_singular_names_pivot_column(self):
        with pytest.raises(SingularMatrixError) as exc:
            gauss_invert(cm([[1, 2], [2, 4]]))
        assert exc.value.column == 1
        assert "column 1" in str(exc.value)

    def test_zero_matrix_singular_at_first_column(self):
        with pytest.raises(SingularMatrixError) as exc:
            gauss_invert(ComplexMatrix.zeros(3, 3))
        assert exc.value.column == 0

    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            gauss_invert(ComplexMatrix.zeros(2, 3))

    def test_random_inverse_residual(self, rng):
        for n in (1, 2, 5, 11, 17, 24, 32):
            a = well_conditioned_matrix(rng, n)
            inv = gauss_invert(a)
            assert np.linalg.norm(inv.data @ a.data - np.eye(n)) <= 1e-9

    def test_meter_determinism(self, rng):
        a = well_conditioned_matrix(rng, 6)
        m1, m2 = CostMeter(), CostMeter()
        gauss_invert(a, m1)
        gauss_invert(a, m2)
        assert m1 == m2


class TestSolveLinear:
    def test_identity(self):
        x = solve_linear(ComplexMatrix.identity(2), cv([5, 6j]))
        assert np.allclose(x.data, [5, 6j])

    def test_symmetric_system(self):
        x = solve_linear(cm([[2, 1], [1, 2]]), cv([3, 3]))
        assert np.allclose(x.data, [1, 1])

    def test_complex_system_hand_solve(self):
        # [[1, j], [-j, 2]] x = [1+j, 0] has the unique solution [2+2j, j-1]
        x = solve_linear(cm([[1, 1j], [-1j, 2]]), cv([1 + 1j, 0]))
        assert np.allclose(x.data, [2 + 2j, -1 + 1j])

    def test_rank_deficient_hermitian_system_is_singular(self):
        # [[1, j], [-j, 1]] is rank one; [1+j, 0] is outside its range
        with pytest.raises(SingularMatrixError):
            solve_linear(cm([[1, 1j], [-1j, 1]]), cv([1 + 1j, 0]))

    def test_booking_matches_gauss_solve(self):
        n = 7
        m = CostMeter()
        solve_linear(ComplexMatrix.identity(n), ComplexVector.zeros(n), m)
        assert m.complex_divs == gauss_divisions(n)
        assert m.complex_muls == gauss_mul_sub_ops(n)
        assert m.complex_subs == gauss_mul_sub_ops(n)

    def test_residual_quality(self, rng):
        for n in (3, 9, 21, 32):
            a = well_conditioned_matrix(rng, n)
            b = ComplexVector(rng.normal(size=n) + 1j * rng.normal(size=n))
            x = solve_linear(a, b)
            assert np.linalg.norm(a.data @ x.data - b.data) <= 1e-10 * np.linalg.norm(b.data)
