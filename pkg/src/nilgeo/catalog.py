"""Example algebras: associative-algebra families, ``aff(A)``, and the
standard nilmanifold models.

Complex associative algebras are realified on the ordered basis
``(a_1, i a_1, a_2, i a_2, ...)``; ``aff(A) = A + A`` lists the first copy
and then the second.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Optional, Sequence

from nilgeo.complex_structure import ComplexStructure, is_abelian_structure
from nilgeo.errors import DimensionError, StructureError
from nilgeo.hermitian import Metric, hkt_check
from nilgeo.hypercomplex import HypercomplexStructure
from nilgeo.lie import LieAlgebra, jacobi_check
from nilgeo.linalg import ExactMatrix, span_basis
from nilgeo.scalars import GaussianRational, as_gaussian

__all__ = [
    "AssociativeAlgebra",
    "CatalogEntry",
    "aff",
    "complex_numbers",
    "get",
    "heisenberg",
    "iwasawa",
    "kodaira",
    "names",
    "sl2",
    "strictly_upper_triangular",
    "torus",
    "truncated_polynomials",
]


class AssociativeAlgebra:
    """Complex associative algebra ``a_p a_q = sum_r m[p, q][r] a_r``."""

    def __init__(self, dim: int, table: Mapping[tuple, Mapping[int, object]],
                 names: Optional[Sequence[str]] = None, name: str = ""):
        if dim <= 0:
            raise DimensionError("associative algebra dimension must be positive")
        self.dim = dim
        self.name = name
        self.names = tuple(names) if names else tuple(f"a{p + 1}" for p in range(dim))
        clean = {}
        for (p, q), row in table.items():
            if not (0 <= p < dim and 0 <= q < dim) or any(not 0 <= r < dim for r in row):
                raise DimensionError(f"product index out of range at ({p}, {q})")
            terms = {r: as_gaussian(c) for r, c in row.items() if c}
            if terms:
                clean[(p, q)] = terms
        self.table = clean
        bad = self.associativity_witness()
        if bad is not None:
            raise StructureError(f"multiplication is not associative on basis triple {bad}")

    def __repr__(self) -> str:
        return f"AssociativeAlgebra({self.name or self.dim})"

    def multiply(self, x: Sequence, y: Sequence) -> tuple:
        out = [GaussianRational(0)] * self.dim
        for p, a in enumerate(x):
            if not a:
                continue
            for q, b in enumerate(y):
                if not b:
                    continue
                for r, c in self.table.get((p, q), {}).items():
                    out[r] = out[r] + a * b * c
        return tuple(out)

    def unit_vector(self, p: int) -> tuple:
        return tuple(GaussianRational(1 if r == p else 0) for r in range(self.dim))

    def associativity_witness(self) -> Optional[tuple]:
        e = [self.unit_vector(p) for p in range(self.dim)]
        for p in range(self.dim):
            for q in range(self.dim):
                pq = self.multiply(e[p], e[q])
                for r in range(self.dim):
                    if self.multiply(pq, e[r]) != self.multiply(e[p], self.multiply(e[q], e[r])):
                        return (p + 1, q + 1, r + 1)
        return None

    def is_commutative(self) -> bool:
        return all(self.table.get((p, q), {}) == self.table.get((q, p), {})
                   for p in range(self.dim) for q in range(p + 1, self.dim))

    def nilpotency_index(self) -> Optional[int]:
        """Largest ``m`` with ``A^m != 0``, or None when no power vanishes."""
        power = [self.unit_vector(p) for p in range(self.dim)]
        m = 0
        while power:
            m += 1
            nxt = span_basis([self.multiply(x, self.unit_vector(p)) for x in power for p in range(self.dim)],
                             self.dim)
            if len(nxt) == len(power):
                return None
            power = nxt
        return m


def strictly_upper_triangular(k: int) -> AssociativeAlgebra:
    """``A_k``: strictly upper triangular ``k x k`` matrices, basis ``E_pq``."""
    if k < 2:
        raise ValueError("A_k needs k >= 2")
    units = [(p, q) for p in range(k) for q in range(p + 1, k)]
    index = {u: n for n, u in enumerate(units)}
    table = {}
    for a, (p, q) in enumerate(units):
        for b, (r, s) in enumerate(units):
            if q == r:
                table[(a, b)] = {index[(p, s)]: 1}
    names = [f"E{p + 1}{q + 1}" for p, q in units]
    return AssociativeAlgebra(len(units), table, names, name=f"A{k}")


def truncated_polynomials(m: int) -> AssociativeAlgebra:
    """``t C[t] / (t^m)`` with basis ``t, ..., t^{m-1}``."""
    if m < 2:
        raise ValueError("truncated polynomials need m >= 2")
    d = m - 1
    table = {}
    for p in range(d):
        for q in range(d):
            if p + q + 2 < m:
                table[(p, q)] = {p + q + 1: 1}
    names = [f"t{p + 1}" if p else "t" for p in range(d)]
    return AssociativeAlgebra(d, table, names, name=f"t{m}")


def complex_numbers() -> AssociativeAlgebra:
    """``C`` itself; ``aff(C)`` is a non-nilpotent hypercomplex example."""
    return AssociativeAlgebra(1, {(0, 0): {0: 1}}, ["1"], name="C")


def _mul_i_real(d: int) -> list:
    """Multiplication by ``i`` on the realification of ``C^d``."""
    n = 2 * d
    rows = [[0] * n for _ in range(n)]
    for p in range(d):
        rows[2 * p + 1][2 * p] = 1
        rows[2 * p][2 * p + 1] = -1
    return rows


def aff(A: AssociativeAlgebra, name: Optional[str] = None):
    """``aff(A)`` with ``J(a, b) = (b, -a)``, ``K(a, b) = (-i a, i b)`` and
    ``I = J K``.  Returns ``(LieAlgebra, HypercomplexStructure)``."""
    d = A.dim
    half = 2 * d
    n = 2 * half
    scalars = (GaussianRational(1), GaussianRational(0, 1))

    def element(idx):
        copy, rest = divmod(idx, half)
        p, part = divmod(rest, 2)
        vec = [GaussianRational(0)] * d
        vec[p] = scalars[part]
        return copy, tuple(vec)

    def realify(copy, z):
        out = [Fraction(0)] * n
        for p, c in enumerate(z):
            out[copy * half + 2 * p] = c.re
            out[copy * half + 2 * p + 1] = c.im
        return out

    brackets = {}
    for x in range(n):
        cx, u = element(x)
        for y in range(x + 1, n):
            cy, v = element(y)
            if cx == 0 and cy == 0:
                z = tuple(a - b for a, b in zip(A.multiply(u, v), A.multiply(v, u)))
                vec = realify(0, z)
            elif cx == 0 and cy == 1:
                # x < y, so the b-copy never comes first
                vec = realify(1, A.multiply(u, v))
            else:
                continue
            terms = {k: c for k, c in enumerate(vec) if c}
            if terms:
                brackets[(x, y)] = terms
    basis_names = []
    for copy in ("a", "b"):
        for p in range(d):
            basis_names += [f"{copy}:{A.names[p]}", f"{copy}:i{A.names[p]}"]
    label = name or f"aff({A.name})"
    g = LieAlgebra(n, brackets, basis_names, name=label)

    Ji = _mul_i_real(d)
    Jrows = [[0] * n for _ in range(n)]
    Krows = [[0] * n for _ in range(n)]
    for r in range(half):
        # J(a, b) = (b, -a)
        Jrows[r][half + r] = 1
        Jrows[half + r][r] = -1
        for c in range(half):
            if Ji[r][c]:
                # K(a, b) = (-i a, i b)
                Krows[r][c] = -Ji[r][c]
                Krows[half + r][half + c] = Ji[r][c]
    J, K = ExactMatrix(Jrows), ExactMatrix(Krows)
    I = J.matmul(K)
    return g, HypercomplexStructure(g, I, J, K)


def _quaternion_left(n: int):
    """Left multiplication by ``i, j, k`` on ``H^n`` with blocks ``(1, i, j, k)``."""
    blocks = {
        "i": [(1, 0, 1), (0, 1, -1), (3, 2, 1), (2, 3, -1)],
        "j": [(2, 0, 1), (3, 1, -1), (0, 2, -1), (1, 3, 1)],
        "k": [(3, 0, 1), (2, 1, 1), (1, 2, -1), (0, 3, -1)],
    }
    out = []
    for key in "ijk":
        rows = [[0] * (4 * n) for _ in range(4 * n)]
        for b in range(n):
            for r, c, v in blocks[key]:
                rows[4 * b + r][4 * b + c] = v
        out.append(ExactMatrix(rows))
    return out


def heisenberg() -> LieAlgebra:
    """``h_3 + R``: ``[e1, e2] = e3`` with ``e4`` central."""
    return LieAlgebra(4, {(0, 1): {2: 1}}, name="heisenberg")


def sl2() -> LieAlgebra:
    """``[h, e] = 2e``, ``[h, f] = -2f``, ``[e, f] = h``."""
    return LieAlgebra(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, ["h", "e", "f"], name="sl2")


@dataclass
class CatalogEntry:
    """A named example with optional structures and a verified manifest.

    ``manifest`` keys: ``nilpotency_step`` (int or None), ``abelian``
    (per-structure booleans) and ``hkt`` (for the stored metric).
    """

    name: str
    algebra: LieAlgebra
    structures: dict = field(default_factory=dict)
    hypercomplex: Optional[HypercomplexStructure] = None
    metric: Optional[ExactMatrix] = None
    manifest: dict = field(default_factory=dict)
    description: str = ""

    def __post_init__(self):
        if self.hypercomplex is not None:
            for label, M in zip("IJK", self.hypercomplex.triple):
                self.structures.setdefault(label, M)
        mismatches = self.verify_manifest()
        if mismatches:
            raise StructureError(f"catalog entry {self.name}: manifest mismatch {mismatches}")

    def observed(self) -> dict:
        out: dict = {"nilpotency_step": self.algebra.nilpotency_step}
        if self.structures:
            out["abelian"] = {
                label: bool(is_abelian_structure(self.algebra, ComplexStructure(self.algebra, M, label)))
                for label, M in self.structures.items()
            }
        if self.hypercomplex is not None and self.metric is not None:
            out["hkt"] = bool(hkt_check(self.metric, self.hypercomplex))
        return out

    def verify_manifest(self) -> dict:
        if not jacobi_check(self.algebra):
            return {"jacobi": False}
        if self.metric is not None:
            Metric(self.metric)
        seen = self.observed()
        return {k: (v, seen.get(k)) for k, v in self.manifest.items() if seen.get(k) != v}


def _identity(n: int) -> ExactMatrix:
    return ExactMatrix.identity(n)


def torus(n: int = 1) -> CatalogEntry:
    g = LieAlgebra(4 * n, {}, name=f"torus{n}")
    I, J, K = _quaternion_left(n)
    H = HypercomplexStructure(g, I, J, K)
    return CatalogEntry(
        f"torus{n}", g, hypercomplex=H, metric=_identity(4 * n),
        manifest={"nilpotency_step": 1, "abelian": {"I": True, "J": True, "K": True}, "hkt": True},
        description=f"abelian R^{4 * n} with the standard quaternionic triple",
    )


def kodaira() -> CatalogEntry:
    g = LieAlgebra(4, {(0, 1): {2: 1}}, name="kodaira")
    J = ExactMatrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    return CatalogEntry(
        "kodaira", g, structures={"J": J}, metric=_identity(4),
        manifest={"nilpotency_step": 2, "abelian": {"J": True}},
        description="Heisenberg + R with the abelian structure Je1 = e2, Je3 = e4",
    )


def iwasawa() -> CatalogEntry:
    g = LieAlgebra(6, {(0, 2): {4: 1}, (0, 3): {5: 1}, (1, 2): {5: 1}, (1, 3): {4: -1}}, name="iwasawa")
    rows = [[0] * 6 for _ in range(6)]
    for j in range(3):
        rows[2 * j + 1][2 * j] = 1
        rows[2 * j][2 * j + 1] = -1
    return CatalogEntry(
        "iwasawa", g, structures={"I": ExactMatrix(rows)}, metric=_identity(6),
        manifest={"nilpotency_step": 2, "abelian": {"I": False}},
        description="realified complex Heisenberg algebra with its bi-invariant structure",
    )


def _aff_entry(name: str, A: AssociativeAlgebra, step, abelian: bool, hkt: bool, description: str):
    g, H = aff(A, name)
    return CatalogEntry(
        name, g, hypercomplex=H, metric=_identity(g.dim),
        manifest={"nilpotency_step": step, "abelian": {"I": abelian, "J": abelian, "K": abelian}, "hkt": hkt},
        description=description,
    )


_BUILDERS: dict = {
    "torus1": lambda: torus(1),
    "torus2": lambda: torus(2),
    "kodaira": kodaira,
    "iwasawa": iwasawa,
    "aff-A2": lambda: _aff_entry("aff-A2", strictly_upper_triangular(2), 1, True, True,
                                 "aff of 2x2 strictly upper triangular matrices (abelian R^4)"),
    "aff-t3": lambda: _aff_entry("aff-t3", truncated_polynomials(3), 2, True, True,
                                 "aff of tC[t]/(t^3): 2-step, abelian hypercomplex"),
    "aff-A3": lambda: _aff_entry("aff-A3", strictly_upper_triangular(3), 2, False, False,
                                 "aff of 3x3 strictly upper triangular matrices"),
    "aff-A4": lambda: _aff_entry("aff-A4", strictly_upper_triangular(4), 3, False, False,
                                 "aff of 4x4 strictly upper triangular matrices"),
    "aff-C": lambda: _aff_entry("aff-C", complex_numbers(), None, True, True,
                                "aff of C: hypercomplex but not nilpotent"),
}


def names() -> list:
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def get(name: str) -> CatalogEntry:
    try:
        builder: Callable[[], CatalogEntry] = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(_BUILDERS)}") from None
    return builder()


def hypercomplex_names(nilpotent_only: bool = True) -> list:
    out = []
    for n in _BUILDERS:
        e = get(n)
        if e.hypercomplex is not None and (e.algebra.is_nilpotent or not nilpotent_only):
            out.append(n)
    return out
