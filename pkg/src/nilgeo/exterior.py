"""Invariant exterior forms over a chosen coframe.

A k-form is a sparse map from strictly increasing index tuples to exact
scalars, ``sum_I c_I theta^{i1} ^ ... ^ theta^{ik}``.  Wedge signs come from
the parity of the sorting permutation, and forms are alternating maps with
the determinant normalisation ``(a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)``.

The differential follows ``d alpha(X, Y) = -alpha([X, Y])`` on 1-forms (no
factor 1/2) extended by the graded Leibniz rule.  Some texts carry an extra
factor in this convention; every identity checked by this package is a
vanishing statement and does not depend on it.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Mapping, Optional, Sequence

from nilgeo.errors import DimensionError
from nilgeo.lie import CheckResult, LieAlgebra
from nilgeo.linalg import ZERO, ExactMatrix, inverse
from nilgeo.scalars import conj

__all__ = ["Coframe", "Form", "d_squared_check", "sort_with_sign", "wedge"]


def sort_with_sign(indices: Sequence[int]):
    """Sort distinct indices; return ``(sorted_tuple, sign)`` or ``(None, 0)``
    when an index repeats."""
    idx = list(indices)
    n = len(idx)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, n):
        x = idx[i]
        j = i - 1
        while j >= 0 and idx[j] > x:
            idx[j + 1] = idx[j]
            j -= 1
            sign = -sign
        if j >= 0 and idx[j] == x:
            return None, 0
        idx[j + 1] = x
    return tuple(idx), sign


class Form:
    """Sparse exterior form of fixed degree on a coframe of ``size`` 1-forms."""

    __slots__ = ("degree", "size", "terms")

    def __init__(self, degree: int, size: int, terms: Optional[Mapping[tuple, object]] = None):
        self.degree = degree
        self.size = size
        clean = {}
        if terms:
            for key, c in terms.items():
                key = tuple(key)
                if len(key) != degree:
                    raise DimensionError(f"index {key} does not have degree {degree}")
                if not c:
                    continue
                skey, sign = sort_with_sign(key)
                if skey is None:
                    continue
                if skey and (skey[-1] >= size or skey[0] < 0):
                    raise DimensionError(f"index {key} out of range for size {size}")
                total = clean.get(skey, ZERO) + (c if sign > 0 else -c)
                if total:
                    clean[skey] = total
                else:
                    clean.pop(skey, None)
        self.terms = clean

    @classmethod
    def _trusted(cls, degree, size, terms):
        f = object.__new__(cls)
        f.degree = degree
        f.size = size
        f.terms = terms
        return f

    @classmethod
    def zero(cls, degree: int, size: int) -> "Form":
        return cls._trusted(degree, size, {})

    @classmethod
    def one_form(cls, coefficients: Sequence) -> "Form":
        size = len(coefficients)
        return cls._trusted(1, size, {(a,): c for a, c in enumerate(coefficients) if c})

    @classmethod
    def monomial(cls, indices: Sequence[int], size: int, coefficient=1) -> "Form":
        return cls(len(indices), size, {tuple(indices): coefficient})

    def __repr__(self) -> str:
        return f"Form(degree={self.degree}, size={self.size}, terms={len(self.terms)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (self.degree, self.size) == (other.degree, other.size) and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, self.size, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, indices: Sequence[int]):
        key, sign = sort_with_sign(indices)
        if key is None:
            return ZERO
        c = self.terms.get(key, ZERO)
        return c if sign > 0 else -c

    def _check(self, other: "Form"):
        if (self.degree, self.size) != (other.degree, other.size):
            raise DimensionError("forms of different degree or coframe size")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Form._trusted(self.degree, self.size, out)

    def __neg__(self) -> "Form":
        return Form._trusted(self.degree, self.size, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        if not c:
            return Form.zero(self.degree, self.size)
        return Form._trusted(self.degree, self.size, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, Form):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def power(self, k: int) -> "Form":
        if k < 0:
            raise ValueError("negative exterior power")
        out = Form._trusted(0, self.size, {(): 1})
        for _ in range(k):
            out = wedge(out, self)
        return out

    def bidegree_part(self, p: int, split: int) -> "Form":
        """Component with exactly ``p`` indices below ``split``."""
        return Form._trusted(
            self.degree,
            self.size,
            {k: c for k, c in self.terms.items() if sum(1 for i in k if i < split) == p},
        )

    def bidegrees(self, split: int) -> set:
        return {
            (sum(1 for i in k if i < split), sum(1 for i in k if i >= split)) for k in self.terms
        }

    def vector(self, basis: Sequence[tuple]) -> tuple:
        """Coefficients on an explicit list of sorted multi-indices."""
        return tuple(self.terms.get(k, ZERO) for k in basis)


def wedge(a: Form, b: Form) -> Form:
    if a.size != b.size:
        raise DimensionError("wedge of forms on different coframes")
    degree = a.degree + b.degree
    out: dict = {}
    for ka, ca in a.terms.items():
        sa = set(ka)
        for kb, cb in b.terms.items():
            if sa.intersection(kb):
                continue
            # sign of merging two sorted disjoint tuples
            inversions = 0
            j = 0
            for x in ka:
                while j < len(kb) and kb[j] < x:
                    j += 1
                inversions += j
            key = tuple(sorted(ka + kb))
            c = ca * cb
            if inversions & 1:
                c = -c
            v = out.get(key, ZERO) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return Form._trusted(degree, a.size, out)


class Coframe:
    """A basis ``theta^0..theta^{m-1}`` of the (complexified) dual of ``g``.

    ``rows[a]`` is ``theta^a`` written in the dual basis ``e^0..e^{m-1}``;
    ``frame`` holds the dual vectors ``F_a`` with ``theta^a(F_b) = delta_ab``.
    When the coframe is adapted to a complex structure, the first ``split``
    elements span the (1,0)-forms and ``rows[split + a]`` is the conjugate of
    ``rows[a]``; bidegree bookkeeping uses ``split``.
    """

    def __init__(self, g: LieAlgebra, rows: Sequence[Sequence], split: Optional[int] = None):
        m = g.dim
        if len(rows) != m or any(len(r) != m for r in rows):
            raise DimensionError("coframe must be a square basis of the dual")
        self.algebra = g
        self.size = m
        self.split = split
        self.matrix = ExactMatrix(rows)
        try:
            self.frame_matrix = inverse(self.matrix)
        except ZeroDivisionError:
            raise DimensionError("coframe rows are linearly dependent") from None
        self.frame = tuple(self.frame_matrix.columns())

    @classmethod
    def standard(cls, g: LieAlgebra) -> "Coframe":
        return cls(g, ExactMatrix.identity(g.dim).rows)

    def __repr__(self) -> str:
        return f"Coframe(size={self.size}, split={self.split})"

    @cached_property
    def structure(self) -> tuple:
        """``d theta^a`` as 2-forms: coefficient of ``theta^b ^ theta^c`` is
        ``-theta^a([F_b, F_c])``."""
        g, m = self.algebra, self.size
        brackets = {}
        for b in range(m):
            for c in range(b + 1, m):
                v = g.bracket(self.frame[b], self.frame[c])
                if any(v):
                    brackets[(b, c)] = v
        out = []
        for a in range(m):
            row = self.matrix.rows[a]
            nz = [(k, x) for k, x in enumerate(row) if x]
            terms = {}
            for key, v in brackets.items():
                s = ZERO
                for k, x in nz:
                    y = v[k]
                    if y:
                        s = s + x * y
                if s:
                    terms[key] = -s
            out.append(Form._trusted(2, m, terms))
        return tuple(out)

    def d(self, form: Form) -> Form:
        if form.size != self.size:
            raise DimensionError("form lives on a different coframe")
        if form.degree == 0:
            return Form.zero(1, self.size)
        struct = self.structure
        out: dict = {}
        for key, c in form.terms.items():
            for r, a in enumerate(key):
                da = struct[a]
                if not da.terms:
                    continue
                rest = key[:r] + key[r + 1:]
                rest_set = set(rest)
                base_sign = -1 if r & 1 else 1
                for (b, e), x in da.terms.items():
                    if b in rest_set or e in rest_set:
                        continue
                    skey, sign = sort_with_sign(key[:r] + (b, e) + key[r + 1:])
                    val = c * x
                    if sign * base_sign < 0:
                        val = -val
                    v = out.get(skey, ZERO) + val
                    if v:
                        out[skey] = v
                    else:
                        out.pop(skey, None)
        return Form._trusted(form.degree + 1, self.size, out)

    def covector_form(self, covector: Sequence) -> Form:
        """Express a covector (coefficients on ``e^k``) in this coframe."""
        return Form.one_form([_dot(covector, f) for f in self.frame])

    def bilinear_form(self, B: ExactMatrix) -> Form:
        """2-form with ``beta(X, Y) = X^T B Y`` (``B`` antisymmetric)."""
        F = self.frame_matrix
        M = F.T.matmul(B).matmul(F)
        m = self.size
        return Form(2, m, {(a, b): M.rows[a][b] for a in range(m) for b in range(a + 1, m)})

    def to_standard(self, form: Form) -> Form:
        """Rewrite a form on this coframe in the standard dual basis."""
        ones = [Form.one_form(row) for row in self.matrix.rows]
        out = Form.zero(form.degree, self.size)
        for key, c in form.terms.items():
            piece = Form._trusted(0, self.size, {(): c})
            for a in key:
                piece = wedge(piece, ones[a])
            out = out + piece
        return out

    def conjugate(self, form: Form) -> Form:
        """Complex conjugate of a form on a coframe adapted to a complex structure."""
        n = self.split
        if n is None or 2 * n != self.size:
            raise ValueError("conjugation needs a coframe with conjugate halves")
        out = {}
        for key, c in form.terms.items():
            swapped = tuple(i + n if i < n else i - n for i in key)
            skey, sign = sort_with_sign(swapped)
            out[skey] = conj(c) if sign > 0 else -conj(c)
        return Form._trusted(form.degree, self.size, out)

    def multi_indices(self, k: int, p: Optional[int] = None) -> list:
        """Basis multi-indices of degree ``k``; with ``p`` set, only those of
        bidegree ``(p, k - p)`` relative to ``split``."""
        if p is None:
            return list(combinations(range(self.size), k))
        n = self.split
        if n is None:
            raise ValueError("bidegrees need a split coframe")
        out = []
        for hol in combinations(range(n), p):
            for anti in combinations(range(n, self.size), k - p):
                out.append(hol + anti)
        return out

    def differential_matrix(self, k: int) -> ExactMatrix:
        """Matrix of ``d: Lambda^k -> Lambda^{k+1}`` on lexicographic bases."""
        return self._operator_matrix(self.multi_indices(k), self.multi_indices(k + 1), None)

    def partial_matrix(self, p: int) -> ExactMatrix:
        """Matrix of ``partial: Lambda^{p,0} -> Lambda^{p+1,0}``."""
        return self._partial_matrices(p)

    def _partial_matrices(self, p):
        cache = self.__dict__.setdefault("_partial_cache", {})
        if p not in cache:
            src = self.multi_indices(p, p)
            tgt = self.multi_indices(p + 1, p + 1)
            cache[p] = self._operator_matrix(src, tgt, p + 1)
        return cache[p]

    def _operator_matrix(self, src, tgt, hol_degree):
        index = {key: i for i, key in enumerate(tgt)}
        cols = []
        for key in src:
            df = self.d(Form._trusted(len(key), self.size, {key: 1}))
            col = [ZERO] * len(tgt)
            for k2, c in df.terms.items():
                i = index.get(k2)
                if i is not None:
                    col[i] = c
                elif hol_degree is None:
                    raise AssertionError("differential left its target degree")
            cols.append(col)
        if not cols:
            return ExactMatrix.zeros(len(tgt), 0)
        return ExactMatrix.from_columns(cols, len(tgt))


def _dot(u: Sequence, v: Sequence):
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


FULL_D2_DIM = 12


def d_squared_check(g: LieAlgebra, coframe: Optional[Coframe] = None,
                    max_degree: Optional[int] = None) -> CheckResult:
    """``d(d m) = 0`` for every basis monomial ``m``.

    All degrees are checked up to dimension 12; above that only degrees
    ``<= 3`` unless ``max_degree`` says otherwise.  The witness is the
    one-based multi-index of the first offending monomial.
    """
    cf = coframe if coframe is not None else Coframe.standard(g)
    top = cf.size if cf.size <= FULL_D2_DIM else 3
    if max_degree is not None:
        top = min(max_degree, cf.size)
    for k in range(top + 1):
        for key in combinations(range(cf.size), k):
            dd = cf.d(cf.d(Form._trusted(k, cf.size, {key: 1})))
            if not dd.is_zero():
                return CheckResult(False, witness=tuple(i + 1 for i in key), value=k)
    return CheckResult(True, value=top)

