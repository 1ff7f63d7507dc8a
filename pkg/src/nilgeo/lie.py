"""Real Lie algebras given by rational structure constants.

Only the constants ``c[i, j]`` with ``i < j`` are stored; ``[e_j, e_i]`` is
synthesized by antisymmetry, so an inconsistent table cannot be entered.
Vectors are tuples of exact scalars in the basis ``e_0, ..., e_{n-1}``
(documents and reports use one-based names ``e1, ..., en``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional, Sequence

from nilgeo.errors import DimensionError
from nilgeo.linalg import ZERO, ExactMatrix, span_basis
from nilgeo.scalars import as_gaussian, as_rational, conj

__all__ = [
    "CheckResult",
    "ComplexifiedAlgebra",
    "LieAlgebra",
    "ad",
    "complexify",
    "jacobi_check",
    "lower_central_series",
]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a verification: truthy iff it passed.

    ``witness`` pins the first violation (zero-based basis indices or a
    relation name); ``value`` carries any computed data worth reporting.
    """

    ok: bool
    witness: object = None
    value: object = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


class LieAlgebra:
    """Finite-dimensional real Lie algebra ``[e_i, e_j] = sum_k c_ij^k e_k``."""

    def __init__(
        self,
        dim: int,
        brackets: Mapping[tuple, Mapping[int, object]],
        basis_names: Optional[Sequence[str]] = None,
        name: str = "",
    ):
        if dim <= 0:
            raise DimensionError("Lie algebra dimension must be positive")
        self.dim = dim
        self.name = name
        self.basis_names = tuple(basis_names) if basis_names else tuple(f"e{i + 1}" for i in range(dim))
        if len(self.basis_names) != dim:
            raise DimensionError("basis_names length differs from dim")
        table: dict = {}
        for (i, j), terms in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionError(f"bracket index ({i}, {j}) out of range")
            if i == j:
                if any(terms.values()):
                    raise ValueError(f"[e{i + 1}, e{i + 1}] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            row = table.setdefault((i, j), {})
            for k, c in terms.items():
                if not 0 <= k < dim:
                    raise DimensionError(f"bracket target index {k} out of range")
                c = as_rational(c) * sign
                row[k] = row.get(k, ZERO) + c
        self._upper = {
            key: {k: c for k, c in sorted(row.items()) if c} for key, row in sorted(table.items())
        }
        self._upper = {key: row for key, row in self._upper.items() if row}
        full: dict = {}
        for (i, j), row in self._upper.items():
            full[(i, j)] = row
            full[(j, i)] = {k: -c for k, c in row.items()}
        self._full = full

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"LieAlgebra{label}(dim={self.dim}, nonzero brackets={len(self._upper)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self._upper == other._upper

    def __hash__(self) -> int:
        return hash((self.dim, tuple((k, tuple(v.items())) for k, v in self._upper.items())))

    @property
    def structure_constants(self) -> dict:
        """``{(i, j): {k: c}}`` for ``i < j``, nonzero entries only."""
        return {key: dict(row) for key, row in self._upper.items()}

    def constant(self, i: int, j: int, k: int) -> Fraction:
        return self._full.get((i, j), {}).get(k, ZERO)

    def basis_vector(self, i: int) -> tuple:
        return tuple(Fraction(1) if k == i else ZERO for k in range(self.dim))

    def bracket_basis(self, i: int, j: int) -> tuple:
        out = [ZERO] * self.dim
        for k, c in self._full.get((i, j), {}).items():
            out[k] = c
        return tuple(out)

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        """Bilinear bracket; accepts real or complex coefficient vectors."""
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionError("vector length differs from algebra dimension")
        out = [ZERO] * self.dim
        nx = [(i, a) for i, a in enumerate(x) if a]
        ny = [(j, b) for j, b in enumerate(y) if b]
        full = self._full
        for i, a in nx:
            for j, b in ny:
                row = full.get((i, j))
                if row is None:
                    continue
                ab = a * b
                for k, c in row.items():
                    out[k] = out[k] + ab * c
        return tuple(out)

    def is_abelian(self) -> bool:
        return not self._upper

    @cached_property
    def ad_matrices(self) -> tuple:
        return tuple(ad(self, self.basis_vector(i)) for i in range(self.dim))

    @cached_property
    def lower_central_series(self) -> "LowerCentralSeries":
        return lower_central_series(self)

    @property
    def nilpotency_step(self) -> Optional[int]:
        return self.lower_central_series.step

    @property
    def is_nilpotent(self) -> bool:
        return self.lower_central_series.step is not None

    @property
    def is_unimodular(self) -> bool:
        return all(not m.trace() for m in self.ad_matrices)

    def complexify(self) -> "ComplexifiedAlgebra":
        return complexify(self)


def jacobi_check(g: LieAlgebra) -> CheckResult:
    """Verify the Jacobi identity on all basis triples ``i < j < k``.

    The witness of a failure is the one-based triple ``(i, j, k)``.
    """
    n = g.dim
    for i in range(n):
        ei = g.basis_vector(i)
        for j in range(i + 1, n):
            ej = g.basis_vector(j)
            eij = g.bracket_basis(i, j)
            for k in range(j + 1, n):
                ek = g.basis_vector(k)
                total = g.bracket(eij, ek)
                t2 = g.bracket(g.bracket_basis(j, k), ei)
                t3 = g.bracket(g.bracket_basis(k, i), ej)
                s = tuple(a + b + c for a, b, c in zip(total, t2, t3))
                if any(s):
                    return CheckResult(False, witness=(i + 1, j + 1, k + 1), value=s)
    return CheckResult(True)


@dataclass(frozen=True)
class LowerCentralSeries:
    """``g = g^1 ⊇ g^2 = [g, g] ⊇ g^3 = [g, g^2] ⊇ ...`` as RREF bases.

    ``step`` is the number of nonzero terms (the nilpotency step) or None
    when the series stabilises at a nonzero subspace.
    """

    terms: tuple
    step: Optional[int]

    @property
    def dims(self) -> tuple:
        return tuple(len(t) for t in self.terms)


def lower_central_series(g: LieAlgebra) -> LowerCentralSeries:
    current = [g.basis_vector(i) for i in range(g.dim)]
    terms = [tuple(current)]
    while True:
        brackets = [g.bracket(g.basis_vector(i), v) for i in range(g.dim) for v in current]
        nxt = span_basis(brackets, g.dim)
        terms.append(tuple(nxt))
        if not nxt:
            return LowerCentralSeries(tuple(terms), len(terms) - 1)
        if len(nxt) == len(current):
            return LowerCentralSeries(tuple(terms), None)
        current = nxt


def ad(g: LieAlgebra, x: Sequence) -> ExactMatrix:
    """Matrix of ``ad_x``: column ``j`` is ``[x, e_j]``."""
    cols = [g.bracket(x, g.basis_vector(j)) for j in range(g.dim)]
    return ExactMatrix.from_columns(cols, g.dim)


class ComplexifiedAlgebra:
    """``g ⊗ C``: the same real constants with Q(i) coefficients."""

    def __init__(self, real: LieAlgebra):
        self.real = real
        self.dim = real.dim

    def __repr__(self) -> str:
        return f"ComplexifiedAlgebra({self.real!r})"

    def vector(self, v: Sequence) -> tuple:
        return tuple(as_gaussian(x) for x in v)

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        return self.vector(self.real.bracket(x, y))

    @staticmethod
    def conjugate(v: Sequence) -> tuple:
        return tuple(conj(x) for x in v)

    def basis_vector(self, i: int) -> tuple:
        return self.vector(self.real.basis_vector(i))


def complexify(g: LieAlgebra) -> ComplexifiedAlgebra:
    return ComplexifiedAlgebra(g)

