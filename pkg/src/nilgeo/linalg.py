"""Dense exact linear algebra over Q and Q(i).

Matrices hold ``Fraction`` entries (real) or ``GaussianRational`` entries
(complex).  Rank, kernels, solving and inversion all go through one
reduced-row-echelon routine whose pivot rule is fixed (leftmost column, then
topmost row), so every basis returned here is deterministic.

The elimination itself runs in a compiled kernel when ``nilgeo._kernel`` is
importable and in ``nilgeo._kernel_py`` otherwise; set ``NILGEO_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from nilgeo.errors import DimensionError
from nilgeo.scalars import GaussianRational, as_gaussian, conj, emit_scalar

if os.environ.get("NILGEO_PURE_PYTHON"):
    from nilgeo import _kernel_py as _kernel
else:
    try:
        from nilgeo import _kernel  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        from nilgeo import _kernel_py as _kernel

BACKEND = _kernel.BACKEND

ZERO = Fraction(0)
ONE = Fraction(1)

__all__ = [
    "BACKEND",
    "EchelonBasis",
    "ExactMatrix",
    "inverse",
    "kernel_basis",
    "rank",
    "rref",
    "solve_linear",
    "span_basis",
]


def _coerce(x):
    if type(x) is Fraction or type(x) is GaussianRational:
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, GaussianRational)):
        return x
    raise TypeError(f"not an exact scalar: {x!r}")


def _is_complex(rows) -> bool:
    for row in rows:
        for x in row:
            if type(x) is GaussianRational:
                return True
    return False


class ExactMatrix:
    """Immutable rows x cols matrix with exact entries."""

    __slots__ = ("_hash", "ncols", "nrows", "rows")

    def __init__(self, rows: Iterable[Iterable], ncols: Optional[int] = None):
        data = tuple(tuple(_coerce(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r, row in enumerate(data):
            if len(row) != ncols:
                raise DimensionError(f"row {r} has length {len(row)}, expected {ncols}")
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _trusted(cls, rows, ncols):
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: Optional[int] = None) -> "ExactMatrix":
        ncols = nrows if ncols is None else ncols
        return cls._trusted(tuple((ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls._trusted(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: Optional[int] = None) -> "ExactMatrix":
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls([[col[i] for col in cols] for i in range(nrows)], ncols=len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.rows))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(emit_scalar(x) for x in row) for row in self.rows)
        return f"ExactMatrix({self.nrows}x{self.ncols}: [{body}])"

    @property
    def is_complex(self) -> bool:
        return _is_complex(self.rows)

    def is_zero(self) -> bool:
        return not any(x for row in self.rows for x in row)

    def transpose(self) -> "ExactMatrix":
        if not self.nrows:
            return ExactMatrix._trusted(tuple(() for _ in range(self.ncols)), 0)
        return ExactMatrix._trusted(tuple(zip(*self.rows)), self.nrows)

    T = property(transpose)

    def conjugate(self) -> "ExactMatrix":
        return ExactMatrix._trusted(tuple(tuple(conj(x) for x in row) for row in self.rows), self.ncols)

    def to_complex(self) -> "ExactMatrix":
        return ExactMatrix._trusted(
            tuple(tuple(as_gaussian(x) for x in row) for row in self.rows), self.ncols
        )

    def trace(self):
        if not self.is_square:
            raise DimensionError("trace of a non-square matrix")
        total = ZERO
        for i in range(self.nrows):
            total = total + self.rows[i][i]
        return total

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        return ExactMatrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        return ExactMatrix._trusted(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._trusted(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c) -> "ExactMatrix":
        c = _coerce(c)
        return ExactMatrix._trusted(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            return self.matmul(other)
        return self.apply(other)

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        sparse_rows = [
            [(j, b) for j, b in enumerate(row) if b] for row in other.rows
        ]
        n = other.ncols
        out = []
        for row in self.rows:
            acc = [ZERO] * n
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in sparse_rows[k]:
                    acc[j] = acc[j] + a * b
            out.append(tuple(acc))
        return ExactMatrix._trusted(tuple(out), n)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product ``M v``."""
        if len(vec) != self.ncols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        nz = [(k, v) for k, v in enumerate(vec) if v]
        out = []
        for row in self.rows:
            acc = ZERO
            for k, v in nz:
                a = row[k]
                if a:
                    acc = acc + a * v
            out.append(acc)
        return tuple(out)

    def commutator(self, other: "ExactMatrix") -> "ExactMatrix":
        return self.matmul(other) - other.matmul(self)

    def flatten(self) -> tuple:
        return tuple(x for row in self.rows for x in row)

    def rank(self) -> int:
        return rank(self)

    def rref(self):
        return rref(self)

    def kernel_basis(self) -> list:
        return kernel_basis(self)

    def inverse(self) -> "ExactMatrix":
        return inverse(self)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def first_asymmetric_pair(self):
        for i in range(self.nrows):
            for j in range(i + 1, self.ncols):
                if self.rows[i][j] != self.rows[j][i]:
                    return (i, j)
        return None


def _as_rows(m) -> tuple:
    if isinstance(m, ExactMatrix):
        return m.rows
    return tuple(tuple(_coerce(x) for x in row) for row in m)


def _integer_rows(rows, complex_mode: bool):
    """Scale each row by the lcm of its denominators; split into re/im ints."""
    res, ims = [], []
    for row in rows:
        dens = 1
        for x in row:
            if type(x) is GaussianRational:
                dens = lcm(dens, x.re.denominator, x.im.denominator)
            else:
                dens = lcm(dens, x.denominator)
        if complex_mode:
            re_row, im_row = [], []
            for x in row:
                if type(x) is GaussianRational:
                    re_row.append(x.re.numerator * (dens // x.re.denominator))
                    im_row.append(x.im.numerator * (dens // x.im.denominator))
                else:
                    re_row.append(x.numerator * (dens // x.denominator))
                    im_row.append(0)
            res.append(re_row)
            ims.append(im_row)
        else:
            res.append([x.numerator * (dens // x.denominator) for x in row])
    return res, (ims if complex_mode else None)


def _divide_row(re_row, im_row, c, complex_mode):
    if not complex_mode:
        p = re_row[c]
        return tuple(Fraction(x, p) if x else ZERO for x in re_row)
    pr, pi = re_row[c], im_row[c]
    n = pr * pr + pi * pi
    out = []
    for xr, xi in zip(re_row, im_row):
        if xr or xi:
            # (xr + i xi)(pr - i pi) / n
            out.append(GaussianRational._raw(Fraction(xr * pr + xi * pi, n), Fraction(xi * pr - xr * pi, n)))
        else:
            out.append(GaussianRational._raw(ZERO, ZERO))
    return tuple(out)


def rref(m, ncols: Optional[int] = None):
    """Reduced row echelon form.

    Returns ``(rows, pivots)``: the nonzero rows of the RREF (each with a 1
    in its pivot column) and the list of pivot columns.  Entries are
    ``GaussianRational`` when the input has any complex entry.
    """
    rows = _as_rows(m)
    if ncols is None:
        ncols = m.ncols if isinstance(m, ExactMatrix) else (len(rows[0]) if rows else 0)
    if not rows:
        return [], []
    complex_mode = _is_complex(rows)
    re, im = _integer_rows(rows, complex_mode)
    re, im, pivots = _kernel.gauss_jordan(re, im, ncols)
    out = [
        _divide_row(re[r], im[r] if complex_mode else None, c, complex_mode)
        for r, c in enumerate(pivots)
    ]
    return out, pivots


def rank(m) -> int:
    return len(rref(m)[1])


def _zero_like(complex_mode):
    return GaussianRational._raw(ZERO, ZERO) if complex_mode else ZERO


def _one_like(complex_mode):
    return GaussianRational._raw(ONE, ZERO) if complex_mode else ONE


def kernel_basis(m) -> list:
    """Deterministic basis of the null space, one vector per free column."""
    rows = _as_rows(m)
    ncols = m.ncols if isinstance(m, ExactMatrix) else (len(rows[0]) if rows else 0)
    complex_mode = _is_complex(rows)
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    zero, one = _zero_like(complex_mode), _one_like(complex_mode)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [zero] * ncols
        v[f] = one
        for r, c in enumerate(pivots):
            x = reduced[r][f]
            if x:
                v[c] = -x
        basis.append(tuple(v))
    return basis


def solve_linear(m, rhs: Sequence):
    """Return one solution ``x`` of ``m x = rhs`` or ``None`` if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    rows = _as_rows(m)
    nrows = len(rows)
    ncols = m.ncols if isinstance(m, ExactMatrix) else (len(rows[0]) if rows else 0)
    if len(rhs) != nrows:
        raise DimensionError(f"rhs has length {len(rhs)}, matrix has {nrows} rows")
    aug = [tuple(row) + (_coerce(b),) for row, b in zip(rows, rhs)]
    complex_mode = _is_complex(aug)
    zero = _zero_like(complex_mode)
    if not aug:
        return tuple(zero for _ in range(ncols))
    reduced, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [zero] * ncols
    for r, c in enumerate(pivots):
        x[c] = reduced[r][ncols]
    return tuple(x)


def inverse(m: ExactMatrix) -> ExactMatrix:
    if not m.is_square:
        raise DimensionError("inverse of a non-square matrix")
    n = m.nrows
    complex_mode = m.is_complex
    zero, one = _zero_like(complex_mode), _one_like(complex_mode)
    aug = [tuple(row) + tuple(one if i == j else zero for j in range(n)) for i, row in enumerate(m.rows)]
    reduced, pivots = rref(aug, 2 * n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return ExactMatrix._trusted(tuple(tuple(row[n:]) for row in reduced), n)


def span_basis(vectors: Sequence[Sequence], ncols: Optional[int] = None) -> list:
    """RREF basis of the span of ``vectors`` (the canonical subspace basis)."""
    vectors = [tuple(_coerce(x) for x in v) for v in vectors]
    if not vectors:
        return []
    reduced, _ = rref(vectors, ncols if ncols is not None else len(vectors[0]))
    return [tuple(r) for r in reduced]


class EchelonBasis:
    """Incrementally grown echelon basis for span-membership tests.

    ``add(v)`` returns True when ``v`` enlarged the span.  Used by closure
    computations that test thousands of candidates one at a time.
    """

    def __init__(self, ncols: int, complex_mode: bool = False):
        self.ncols = ncols
        self.complex_mode = complex_mode
        self._re: list = []
        self._im: Optional[list] = [] if complex_mode else None
        self._pivots: list = []

    def __len__(self) -> int:
        return len(self._pivots)

    @property
    def pivots(self) -> list:
        return list(self._pivots)

    def _split(self, v):
        v = [_coerce(x) for x in v]
        if len(v) != self.ncols:
            raise DimensionError(f"vector of length {len(v)}, expected {self.ncols}")
        if not self.complex_mode and any(type(x) is GaussianRational and x.im for x in v):
            raise ValueError("complex vector added to a real EchelonBasis")
        if not self.complex_mode:
            v = [x.re if type(x) is GaussianRational else x for x in v]
        re, im = _integer_rows([v], self.complex_mode)
        return re[0], (im[0] if im is not None else None)

    def _reduce(self, v):
        vre, vim = self._split(v)
        lead = _kernel.reduce_row(self._re, self._im, self._pivots, vre, vim)
        return vre, vim, lead

    def contains(self, v) -> bool:
        return self._reduce(v)[2] < 0

    def add(self, v) -> bool:
        vre, vim, lead = self._reduce(v)
        if lead < 0:
            return False
        pos = 0
        while pos < len(self._pivots) and self._pivots[pos] < lead:
            pos += 1
        self._pivots.insert(pos, lead)
        self._re.insert(pos, vre)
        if self._im is not None:
            self._im.insert(pos, vim)
        return True
