"""Hypercomplex triples, invariant connections, curvature and holonomy.

An invariant connection is stored as one matrix per basis vector:
column ``j`` of ``A[i]`` is ``nabla_{e_i} e_j``.  Covariant derivatives of
invariant endomorphism fields are commutators ``[A_X, T]``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from nilgeo.complex_structure import (
    ComplexStructure,
    canonical_form,
    is_integrable,
    require_nilpotent,
)
from nilgeo.errors import DimensionError, StructureError, VerificationError
from nilgeo.exterior import Coframe, Form
from nilgeo.lie import CheckResult, LieAlgebra
from nilgeo.linalg import ZERO, EchelonBasis, ExactMatrix
from nilgeo.scalars import GaussianRational

__all__ = [
    "Connection",
    "CurvatureTensor",
    "HolonomyAlgebra",
    "HypercomplexStructure",
    "SLReport",
    "TraceReport",
    "alpha_independence",
    "complex_trace",
    "curvature",
    "form_derivative",
    "infinitesimal_holonomy",
    "obata_connection",
    "ricci",
    "sl_membership_report",
    "trace_nabla_bracket",
    "validate_hypercomplex",
]

HALF = Fraction(1, 2)
CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
LABELS = ("I", "J", "K")


def validate_hypercomplex(g: LieAlgebra, I: ExactMatrix, J: ExactMatrix, K: ExactMatrix) -> CheckResult:
    """Quaternion relations then integrability; the witness names the first
    failing relation, e.g. ``"IJ != K"``."""
    n = g.dim
    for label, M in zip(LABELS, (I, J, K)):
        if M.shape != (n, n):
            return CheckResult(False, witness=f"{label} is not {n}x{n}")
        if M.is_complex:
            return CheckResult(False, witness=f"{label} has non-rational entries")
    if n % 4:
        return CheckResult(False, witness=f"dimension {n} is not a multiple of 4")
    minus_id = -ExactMatrix.identity(n)
    for label, M in zip(LABELS, (I, J, K)):
        if M.matmul(M) != minus_id:
            return CheckResult(False, witness=f"{label}^2 != -Id")
    IJ, JI = I.matmul(J), J.matmul(I)
    if IJ != K:
        return CheckResult(False, witness="IJ != K")
    if JI != -IJ:
        return CheckResult(False, witness="JI != -IJ")
    for label, M in zip(LABELS, (I, J, K)):
        res = is_integrable(g, M)
        if not res:
            return CheckResult(False, witness=f"{label} not integrable at {res.witness}")
    return CheckResult(True)


class HypercomplexStructure:
    """Validated triple ``(I, J, K)``; construction raises on any failed relation."""

    def __init__(self, g: LieAlgebra, I: ExactMatrix, J: ExactMatrix, K: ExactMatrix):
        res = validate_hypercomplex(g, I, J, K)
        if not res:
            raise StructureError(f"not a hypercomplex structure: {res.witness}")
        self.algebra = g
        self.I, self.J, self.K = I, J, K

    def __repr__(self) -> str:
        return f"HypercomplexStructure(on {self.algebra!r})"

    @property
    def triple(self) -> tuple:
        return (self.I, self.J, self.K)

    @property
    def quaternionic_dim(self) -> int:
        return self.algebra.dim // 4

    @cached_property
    def structures(self) -> tuple:
        return tuple(ComplexStructure(self.algebra, M, label) for M, label in zip(self.triple, LABELS))


class Connection:
    """Invariant connection ``nabla_{e_i} = A[i]``; ``kind`` is a free label
    (``obata``, ``levi_civita``, ``bismut``, ``test``)."""

    def __init__(self, g: LieAlgebra, matrices: Sequence[ExactMatrix], kind: str = "test"):
        if len(matrices) != g.dim or any(m.shape != (g.dim, g.dim) for m in matrices):
            raise DimensionError("a connection needs dim many dim x dim matrices")
        self.algebra = g
        self.A = tuple(matrices)
        self.kind = kind

    def __repr__(self) -> str:
        return f"Connection({self.kind}, dim={self.algebra.dim})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Connection):
            return NotImplemented
        return self.algebra == other.algebra and self.A == other.A

    def __hash__(self) -> int:
        return hash(self.A)

    def matrix_along(self, x: Sequence) -> ExactMatrix:
        """``A_x = sum_k x_k A[k]``."""
        n = self.algebra.dim
        out = ExactMatrix.zeros(n)
        for k, c in enumerate(x):
            if c:
                out = out + self.A[k].scale(c)
        return out

    def nabla(self, x: Sequence, y: Sequence) -> tuple:
        return self.matrix_along(x).apply(y)

    def is_flat_zero(self) -> bool:
        return all(m.is_zero() for m in self.A)

    def torsion_check(self) -> CheckResult:
        g = self.algebra
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                t = [a - b - c for a, b, c in zip(self.A[i].column(j), self.A[j].column(i), g.bracket_basis(i, j))]
                if any(t):
                    return CheckResult(False, witness=(i + 1, j + 1), value=tuple(t))
        return CheckResult(True)

    def parallel_check(self, T: ExactMatrix) -> CheckResult:
        for i, A in enumerate(self.A):
            if not A.commutator(T).is_zero():
                return CheckResult(False, witness=i + 1)
        return CheckResult(True)

    def metric_check(self, G: ExactMatrix) -> CheckResult:
        """``nabla g = 0``: every ``A_X`` is ``g``-skew."""
        for i, A in enumerate(self.A):
            GA = G.matmul(A)
            if not (GA + GA.T).is_zero():
                return CheckResult(False, witness=i + 1)
        return CheckResult(True)

    def torsion_tensor(self, x: Sequence, y: Sequence) -> tuple:
        a = self.nabla(x, y)
        b = self.nabla(y, x)
        c = self.algebra.bracket(x, y)
        return tuple(p - q - r for p, q, r in zip(a, b, c))


def obata_connection(g: LieAlgebra, H: HypercomplexStructure) -> Connection:
    n = g.dim
    Js = H.triple
    basis = [g.basis_vector(i) for i in range(n)]
    images = [[M.apply(e) for e in basis] for M in Js]  # images[a][i] = J_a e_i
    twelfth, sixth = Fraction(1, 12), Fraction(1, 6)
    cols = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = [ZERO] * n
            for a, b, c in CYCLIC:
                v = g.bracket(images[b][i], images[c][j])
                w = g.bracket(images[b][j], images[c][i])
                s = Js[a].apply(tuple(p + q for p, q in zip(v, w)))
                acc = [p + twelfth * q for p, q in zip(acc, s)]
            for a in range(3):
                v = g.bracket(images[a][i], basis[j])
                w = g.bracket(images[a][j], basis[i])
                s = Js[a].apply(tuple(p + q for p, q in zip(v, w)))
                acc = [p + sixth * q for p, q in zip(acc, s)]
            br = g.bracket_basis(i, j)
            cols[i][j] = tuple(p + HALF * q for p, q in zip(acc, br))
    conn = Connection(g, [ExactMatrix.from_columns(cols[i], n) for i in range(n)], kind="obata")
    tor = conn.torsion_check()
    if not tor:
        raise VerificationError(f"Obata connection has torsion at pair {tor.witness}", witness=tor.witness)
    for label, M in zip(LABELS, Js):
        par = conn.parallel_check(M)
        if not par:
            raise VerificationError(
                f"Obata connection does not preserve {label} along e{par.witness}", witness=par.witness
            )
    return conn


@dataclass(frozen=True)
class CurvatureTensor:
    """``R(e_i, e_j)`` for ``i < j``; other pairs follow by antisymmetry."""

    dim: int
    values: dict

    def __call__(self, i: int, j: int) -> ExactMatrix:
        if i == j:
            return ExactMatrix.zeros(self.dim)
        if i < j:
            return self.values[(i, j)]
        return -self.values[(j, i)]

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.values.values())

    def generators(self) -> list:
        return [m for _, m in sorted(self.values.items()) if not m.is_zero()]

    def bianchi_check(self) -> CheckResult:
        """First Bianchi identity ``R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0``
        (valid for torsion-free connections)."""
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    s = [
                        a + b + c
                        for a, b, c in zip(self(i, j).column(k), self(j, k).column(i), self(k, i).column(j))
                    ]
                    if any(s):
                        return CheckResult(False, witness=(i + 1, j + 1, k + 1))
        return CheckResult(True)


def curvature(g: LieAlgebra, conn: Connection) -> CurvatureTensor:
    """``R(X, Y) = [A_X, A_Y] - A_{[X, Y]}``."""
    n = g.dim
    values = {}
    for i in range(n):
        for j in range(i + 1, n):
            values[(i, j)] = conn.A[i].commutator(conn.A[j]) - conn.matrix_along(g.bracket_basis(i, j))
    return CurvatureTensor(n, values)


def ricci(g: LieAlgebra, conn: Connection, R: Optional[CurvatureTensor] = None) -> ExactMatrix:
    """``Ric(X, Y) = tr(Z -> R(Z, X) Y)`` as the matrix ``Ric[x][y]``."""
    R = R if R is not None else curvature(g, conn)
    n = g.dim
    rows = []
    for x in range(n):
        row = []
        for y in range(n):
            s = ZERO
            for z in range(n):
                if z != x:
                    s = s + R(z, x)[z, y]
            row.append(s)
        rows.append(row)
    return ExactMatrix(rows)


@dataclass(frozen=True)
class TraceReport:
    """``tr(nabla_{[e_i, e_j]})`` and ``tr(J_a ad_{J_a [e_i, e_j]})`` per pair."""

    nabla_traces: dict
    alpha_traces: dict
    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def trace_nabla_bracket(g: LieAlgebra, conn: Connection, H: HypercomplexStructure) -> TraceReport:
    """Both sides of ``tr(nabla_{[X,Y]}) = tr(J_a ad_{J_a [X,Y]})`` on basis pairs.

    The report passes when every value vanishes and the three ``J_a``
    versions coincide with each other and with the left-hand side.
    """
    n = g.dim
    ad = g.ad_matrices
    nabla_traces, alpha_traces = {}, {}
    witness = None
    for i in range(n):
        for j in range(i + 1, n):
            z = g.bracket_basis(i, j)
            t = conn.matrix_along(z).trace()
            per_alpha = []
            for M in H.triple:
                w = M.apply(z)
                ad_w = ExactMatrix.zeros(n)
                for k, c in enumerate(w):
                    if c:
                        ad_w = ad_w + ad[k].scale(c)
                per_alpha.append(M.matmul(ad_w).trace())
            nabla_traces[(i, j)] = t
            alpha_traces[(i, j)] = tuple(per_alpha)
            if witness is None and (t or any(per_alpha) or len(set(per_alpha)) != 1 or per_alpha[0] != t):
                witness = (i + 1, j + 1)
    return TraceReport(nabla_traces, alpha_traces, witness is None, witness)


def alpha_independence(g: LieAlgebra, H: HypercomplexStructure) -> CheckResult:
    """``tr(J_a ad_{J_a Z})`` agrees for ``a = 1, 2, 3`` on every basis ``Z``."""
    n = g.dim
    ad = g.ad_matrices
    for z in range(n):
        vals = []
        for M in H.triple:
            w = M.column(z)
            ad_w = ExactMatrix.zeros(n)
            for k, c in enumerate(w):
                if c:
                    ad_w = ad_w + ad[k].scale(c)
            vals.append(M.matmul(ad_w).trace())
        if len(set(vals)) != 1:
            return CheckResult(False, witness=z + 1, value=tuple(vals))
    return CheckResult(True)


@dataclass(frozen=True)
class HolonomyAlgebra:
    """Infinitesimal holonomy: curvature seeds closed under ``[A_X, .]`` and
    commutators.  ``depth`` counts closure rounds; ``converged`` is False
    only when the round limit was hit first."""

    basis: tuple
    seeds: int
    depth: int
    converged: bool
    log: tuple = field(default=())

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _closure_limit(n: int) -> int:
    raw = os.environ.get("NILGEO_MAX_CLOSURE")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"NILGEO_MAX_CLOSURE must be an integer, got {raw!r}") from None
        if value < 1:
            raise ValueError("NILGEO_MAX_CLOSURE must be positive")
        return value
    return n * n


def infinitesimal_holonomy(
    g: LieAlgebra, conn: Connection, max_rounds: Optional[int] = None, R: Optional[CurvatureTensor] = None
) -> HolonomyAlgebra:
    n = g.dim
    limit = max_rounds if max_rounds is not None else _closure_limit(n)
    R = R if R is not None else curvature(g, conn)
    echelon = EchelonBasis(n * n)
    basis: list = []
    frontier: list = []
    for m in R.generators():
        if echelon.add(m.flatten()):
            basis.append(m)
            frontier.append(m)
    seeds = len(basis)
    log = [seeds]
    depth = 0
    while frontier:
        if depth >= limit:
            return HolonomyAlgebra(tuple(basis), seeds, depth, False, tuple(log))
        depth += 1
        new = []
        for m in frontier:
            candidates = [A.commutator(m) for A in conn.A] + [b.commutator(m) for b in basis + new]
            for c in candidates:
                if not c.is_zero() and echelon.add(c.flatten()):
                    new.append(c)
        basis.extend(new)
        frontier = new
        log.append(len(basis))
    return HolonomyAlgebra(tuple(basis), seeds, depth, True, tuple(log))


def complex_trace(h: ExactMatrix, I: ExactMatrix) -> GaussianRational:
    """Trace of an ``I``-linear ``h`` over ``C``: ``(tr h - i tr(I h)) / 2``."""
    if not h.matmul(I) == I.matmul(h):
        raise StructureError("complex trace needs an endomorphism commuting with I")
    return GaussianRational(HALF * h.trace(), -HALF * I.matmul(h).trace())


def form_derivative(conn: Connection, x: Sequence, form: Form, coframe: Coframe) -> Form:
    """``nabla_x`` of an invariant form: the derivation extending
    ``theta -> -theta o A_x`` on the coframe."""
    A = conn.matrix_along(x).to_complex()
    P = coframe.matrix
    # (theta^a o A) written in the coframe: row a of P A P^{-1}
    M = P.matmul(A).matmul(coframe.frame_matrix)
    m = coframe.size
    out = Form.zero(form.degree, m)
    for key, c in form.terms.items():
        for r, a in enumerate(key):
            row = M.rows[a]
            for b in range(m):
                if row[b]:
                    piece = Form(form.degree, m, {key[:r] + (b,) + key[r + 1:]: -c * row[b]})
                    out = out + piece
    return out


@dataclass(frozen=True)
class SLReport:
    """Per-generator quaternionic-linearity and complex-trace data plus the
    direct ``nabla eta = 0`` and ``d eta = 0`` checks."""

    ok: bool
    holonomy: HolonomyAlgebra
    generators: tuple
    nabla_eta_zero: bool
    d_eta_zero: bool
    connection_traces: tuple
    monodromy: str = "not checked"

    def __bool__(self) -> bool:
        return self.ok


def sl_membership_report(g: LieAlgebra, H: HypercomplexStructure, conn: Optional[Connection] = None) -> SLReport:
    require_nilpotent(g, "sl_membership_report")
    conn = conn if conn is not None else obata_connection(g, H)
    hol = infinitesimal_holonomy(g, conn)
    records = []
    ok = hol.converged
    for idx, h in enumerate(hol.basis):
        commutes = all(h.commutator(M).is_zero() for M in H.triple)
        tr = complex_trace(h, H.I) if h.matmul(H.I) == H.I.matmul(h) else None
        good = commutes and tr is not None and not tr
        records.append({"generator": idx + 1, "commutes_IJK": commutes, "complex_trace": tr, "ok": good})
        ok = ok and good
    traces = tuple(complex_trace(A, H.I) for A in conn.A)
    canon = canonical_form(g, H.I)
    eta, cf = canon.eta, canon.coframe
    nabla_eta_zero = all(
        form_derivative(conn, g.basis_vector(i), eta, cf).is_zero() for i in range(g.dim)
    )
    ok = ok and nabla_eta_zero and canon.closed and not any(traces)
    return SLReport(ok, hol, tuple(records), nabla_eta_zero, canon.closed, traces)
