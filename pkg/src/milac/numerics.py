"""Dense complex linear algebra with explicit real-operation metering.

Every metered operation books its cost on a :class:`CostMeter` in units of
real arithmetic operations (additions, subtractions, multiplications,
divisions). Complex arithmetic is booked with one fixed convention, declared
here once and used everywhere:

* complex addition / subtraction: 2 real adds / 2 real subs
* complex multiplication: 4 real muls + 2 real adds (6 real operations;
  the 3-multiply trick exists but is deliberately not used for booking)
* complex division: 6 real muls + 2 real adds + 1 real sub + 2 real divs
  (11 real operations, via the textbook real/imaginary-part formula)

Gaussian elimination is booked at the classical single-system cost:
``N(N+1)/2`` complex divisions and ``(2N^3 + 3N^2 - 5N)/6`` complex
multiplications and subtractions each. Matrix inversion is booked at the
same cost by convention, mirroring the usual "inversion costs one Gauss
solve" accounting. Pivot-search comparisons are not metered.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PIVOT_RTOL = 1e-12


class DimensionError(ValueError):
    """Operand dimensions are incompatible."""


class SingularMatrixError(ArithmeticError):
    """Elimination found no usable pivot in some column."""

    def __init__(self, column: int, message: str | None = None):
        self.column = column
        super().__init__(message or f"singular matrix: no usable pivot in column {column}")


def _as_complex_array(entries, shape) -> np.ndarray:
    arr = np.array(entries, dtype=np.complex128).reshape(shape)
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("entries must be finite (no NaN/Inf)")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Immutable dense complex matrix, row-major storage."""

    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 2 or self.data.shape[0] < 1 or self.data.shape[1] < 1:
            raise DimensionError("matrix must be 2-dimensional with positive shape")
        object.__setattr__(self, "data", _as_complex_array(self.data, self.data.shape))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> list[complex]:
        """Row-major flat list of entries."""
        return [complex(z) for z in self.data.ravel()]

    @classmethod
    def from_rows(cls, rows) -> "ComplexMatrix":
        return cls(np.array(rows, dtype=np.complex128))

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls(np.eye(n, dtype=np.complex128))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ComplexMatrix":
        return cls(np.zeros((rows, cols), dtype=np.complex128))

    def conj_transpose(self) -> "ComplexMatrix":
        """Conjugate transpose. Costs no arithmetic by convention."""
        return ComplexMatrix(self.data.conj().T)

    def transpose(self) -> "ComplexMatrix":
        return ComplexMatrix(self.data.T)

    def __repr__(self):
        return f"ComplexMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True, eq=False)
class ComplexVector:
    """Immutable dense complex vector."""

    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 1 or self.data.shape[0] < 1:
            raise DimensionError("vector must be 1-dimensional and non-empty")
        object.__setattr__(self, "data", _as_complex_array(self.data, self.data.shape))

    @property
    def len(self) -> int:
        return self.data.shape[0]

    def __len__(self) -> int:
        return self.len

    @property
    def entries(self) -> list[complex]:
        return [complex(z) for z in self.data]

    @classmethod
    def from_values(cls, values) -> "ComplexVector":
        return cls(np.array(values, dtype=np.complex128))

    @classmethod
    def zeros(cls, n: int) -> "ComplexVector":
        return cls(np.zeros(n, dtype=np.complex128))

    @classmethod
    def basis(cls, n: int, k: int) -> "ComplexVector":
        e = np.zeros(n, dtype=np.complex128)
        e[k] = 1.0
        return cls(e)

    def slice(self, start: int, stop: int) -> "ComplexVector":
        return ComplexVector(self.data[start:stop])

    def __repr__(self):
        return f"ComplexVector(len={self.len})"


def concat(a: ComplexVector, b: ComplexVector) -> ComplexVector:
    return ComplexVector(np.concatenate([a.data, b.data]))


@dataclass
class CostMeter:
    """Tally of real arithmetic operations attributed to one computation.

    The four real counters are the primary currency. Complex-operation event
    counts are tracked alongside so the classical complex-op formulas can be
    checked directly. Counters only grow; meters merge by addition.
    """

    adds: int = 0
    subs: int = 0
    muls: int = 0
    divs: int = 0
    complex_adds: int = field(default=0, repr=False)
    complex_subs: int = field(default=0, repr=False)
    complex_muls: int = field(default=0, repr=False)
    complex_divs: int = field(default=0, repr=False)

    def total(self) -> int:
        return self.adds + self.subs + self.muls + self.divs

    def book_complex_add(self, n: int = 1) -> None:
        self.adds += 2 * n
        self.complex_adds += n

    def book_complex_sub(self, n: int = 1) -> None:
        self.subs += 2 * n
        self.complex_subs += n

    def book_complex_mul(self, n: int = 1) -> None:
        self.muls += 4 * n
        self.adds += 2 * n
        self.complex_muls += n

    def book_complex_div(self, n: int = 1) -> None:
        # 11 real operations per complex division, split as declared above
        self.muls += 6 * n
        self.adds += 2 * n
        self.subs += 1 * n
        self.divs += 2 * n
        self.complex_divs += n

    def merge(self, other: "CostMeter") -> "CostMeter":
        self.adds += other.adds
        self.subs += other.subs
        self.muls += other.muls
        self.divs += other.divs
        self.complex_adds += other.complex_adds
        self.complex_subs += other.complex_subs
        self.complex_muls += other.complex_muls
        self.complex_divs += other.complex_divs
        return self

    def snapshot(self) -> tuple[int, int, int, int]:
        return (self.adds, self.subs, self.muls, self.divs)


def _meter(meter: CostMeter | None) -> CostMeter:
    return meter if meter is not None else CostMeter()


def scalar_product(a: ComplexVector, b: ComplexVector, meter: CostMeter | None = None) -> complex:
    """Unconjugated scalar product sum(a_n * b_n).

    Booked as N complex multiplications and N-1 complex additions.
    """
    if a.len != b.len:
        raise DimensionError(f"scalar_product: lengths differ ({a.len} vs {b.len})")
    m = _meter(meter)
    m.book_complex_mul(a.len)
    m.book_complex_add(a.len - 1)
    return complex(np.dot(a.data, b.data))


def mat_vec(a: ComplexMatrix, b: ComplexVector, meter: CostMeter | None = None) -> ComplexVector:
    """Matrix-vector product; booked as one scalar product per row."""
    if a.cols != b.len:
        raise DimensionError(f"mat_vec: {a.rows}x{a.cols} times length {b.len}")
    m = _meter(meter)
    m.book_complex_mul(a.rows * a.cols)
    m.book_complex_add(a.rows * (a.cols - 1))
    return ComplexVector(a.data @ b.data)


def mat_mul(a: ComplexMatrix, b: ComplexMatrix, meter: CostMeter | None = None) -> ComplexMatrix:
    """Matrix-matrix product; booked as one matrix-vector product per column."""
    if a.cols != b.rows:
        raise DimensionError(f"mat_mul: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    m = _meter(meter)
    m.book_complex_mul(b.cols * a.rows * a.cols)
    m.book_complex_add(b.cols * a.rows * (a.cols - 1))
    return ComplexMatrix(a.data @ b.data)


def mat_add(a: ComplexMatrix, b: ComplexMatrix, meter: CostMeter | None = None) -> ComplexMatrix:
    if a.rows != b.rows or a.cols != b.cols:
        raise DimensionError("mat_add: shape mismatch")
    _meter(meter).book_complex_add(a.rows * a.cols)
    return ComplexMatrix(a.data + b.data)


def mat_sub(a: ComplexMatrix, b: ComplexMatrix, meter: CostMeter | None = None) -> ComplexMatrix:
    if a.rows != b.rows or a.cols != b.cols:
        raise DimensionError("mat_sub: shape mismatch")
    _meter(meter).book_complex_sub(a.rows * a.cols)
    return ComplexMatrix(a.data - b.data)


def vec_add(a: ComplexVector, b: ComplexVector, meter: CostMeter | None = None) -> ComplexVector:
    if a.len != b.len:
        raise DimensionError("vec_add: length mismatch")
    _meter(meter).book_complex_add(a.len)
    return ComplexVector(a.data + b.data)


def vec_sub(a: ComplexVector, b: ComplexVector, meter: CostMeter | None = None) -> ComplexVector:
    if a.len != b.len:
        raise DimensionError("vec_sub: length mismatch")
    _meter(meter).book_complex_sub(a.len)
    return ComplexVector(a.data - b.data)


def gauss_divisions(n: int) -> int:
    """Complex divisions performed by one N-size Gauss solve."""
    return n * (n + 1) // 2


def gauss_mul_sub_ops(n: int) -> int:
    """Complex multiplications (= subtractions) of one N-size Gauss solve."""
    return (2 * n**3 + 3 * n**2 - 5 * n) // 6


def _book_gauss(meter: CostMeter, n: int) -> None:
    q = gauss_mul_sub_ops(n)
    meter.book_complex_div(gauss_divisions(n))
    meter.book_complex_mul(q)
    meter.book_complex_sub(q)


def _reduce_augmented(aug: np.ndarray, n: int) -> None:
    """In-place Gauss-Jordan reduction of [A | RHS] to [I | A^-1 RHS].

    Scaled partial pivoting; a pivot is declared zero when its magnitude
    falls below PIVOT_RTOL times the largest initial row magnitude.
    Pivot-search comparisons are not metered.
    """
    scale = np.max(np.abs(aug[:, :n]), axis=1)
    threshold = PIVOT_RTOL * float(scale.max(initial=0.0))
    safe_scale = np.where(scale > 0.0, scale, 1.0)
    for k in range(n):
        rel = np.abs(aug[k:, k]) / safe_scale[k:]
        p = k + int(np.argmax(rel))
        if abs(aug[p, k]) <= threshold:
            raise SingularMatrixError(k)
        if p != k:
            aug[[k, p]] = aug[[p, k]]
            safe_scale[[k, p]] = safe_scale[[p, k]]
        aug[k] = aug[k] / aug[k, k]
        factors = aug[:, k].copy()
        factors[k] = 0.0
        aug -= np.outer(factors, aug[k])


def gauss_invert(a: ComplexMatrix, meter: CostMeter | None = None) -> ComplexMatrix:
    """Invert a square matrix by Gaussian elimination.

    The meter is booked at the single-system Gauss cost declared in the
    module docstring: N(N+1)/2 complex divisions plus (2N^3+3N^2-5N)/6
    complex multiplications and subtractions each.
    """
    if a.rows != a.cols:
        raise DimensionError(f"gauss_invert: matrix is {a.rows}x{a.cols}, not square")
    n = a.rows
    _book_gauss(_meter(meter), n)
    aug = np.hstack([a.data.copy(), np.eye(n, dtype=np.complex128)])
    _reduce_augmented(aug, n)
    return ComplexMatrix(aug[:, n:])


def solve_linear(a: ComplexMatrix, b: ComplexVector, meter: CostMeter | None = None) -> ComplexVector:
    """Solve a single linear system Ax = b; booked at the Gauss solve cost."""
    if a.rows != a.cols:
        raise DimensionError(f"solve_linear: matrix is {a.rows}x{a.cols}, not square")
    if a.rows != b.len:
        raise DimensionError(f"solve_linear: matrix order {a.rows}, vector length {b.len}")
    n = a.rows
    _book_gauss(_meter(meter), n)
    aug = np.hstack([a.data.copy(), b.data.reshape(-1, 1)])
    _reduce_augmented(aug, n)
    return ComplexVector(aug[:, n])
