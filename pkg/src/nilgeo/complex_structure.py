"""Invariant complex structures on Lie algebras.

Conventions: a covector ``alpha`` is of type (1,0) iff ``alpha(I X) = i alpha(X)``;
equivalently it annihilates ``g^{0,1} = {Z in g_C : I Z = -i Z}``.  Adapted
coframes list a (1,0) basis ``omega_1..omega_n`` followed by the conjugates,
so a multi-index has bidegree ``(#indices < n, #indices >= n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from nilgeo.errors import (
    DimensionError,
    HypothesisError,
    StructureError,
    VerificationError,
)
from nilgeo.exterior import Coframe, Form
from nilgeo.lie import CheckResult, LieAlgebra
from nilgeo.linalg import (
    ZERO,
    EchelonBasis,
    ExactMatrix,
    kernel_basis,
    rank,
    span_basis,
)
from nilgeo.scalars import I_UNIT, GaussianRational, conj

__all__ = [
    "Bigrading",
    "CanonicalFormResult",
    "ComplexStructure",
    "DolbeaultCohomology",
    "SalamonCoframe",
    "bigrading",
    "canonical_form",
    "ce_differential",
    "complex_coframe",
    "d_canonical_check",
    "dolbeault_cohomology_p0",
    "is_abelian_structure",
    "is_integrable",
    "require_nilpotent",
    "salamon_coframe",
    "trace_J_ad",
    "verify_salamon",
]


def require_nilpotent(g: LieAlgebra, what: str) -> None:
    if not g.is_nilpotent:
        raise HypothesisError(
            f"{what} requires a nilpotent Lie algebra; {g.name or 'input'} is not nilpotent "
            "(its lower central series stabilises at a nonzero ideal)"
        )


def _check_square(g: LieAlgebra, I: ExactMatrix, label: str = "I") -> None:
    if I.shape != (g.dim, g.dim):
        raise DimensionError(f"{label} must be {g.dim}x{g.dim}, got {I.nrows}x{I.ncols}")
    if g.dim % 2:
        raise StructureError(f"{label}: odd-dimensional algebra admits no complex structure")
    if I.matmul(I) != -ExactMatrix.identity(g.dim):
        raise StructureError(f"{label}^2 != -Id")


class ComplexStructure:
    """An endomorphism ``I`` with ``I^2 = -Id``; integrability is a property."""

    def __init__(self, g: LieAlgebra, I: ExactMatrix, label: str = "I"):
        if I.is_complex:
            raise StructureError(f"{label} must have rational entries")
        _check_square(g, I, label)
        self.algebra = g
        self.I = I
        self.label = label

    def __repr__(self) -> str:
        return f"ComplexStructure({self.label} on {self.algebra!r})"

    @cached_property
    def integrable(self) -> CheckResult:
        return is_integrable(self.algebra, self.I)

    @cached_property
    def abelian(self) -> CheckResult:
        return is_abelian_structure(self.algebra, self.I)

    @cached_property
    def bigrading(self) -> "Bigrading":
        return bigrading(self.algebra, self.I)

    @cached_property
    def coframe(self) -> Coframe:
        return complex_coframe(self.algebra, self.I)


def _as_structure(g: LieAlgebra, I) -> ComplexStructure:
    if isinstance(I, ComplexStructure):
        return I
    return ComplexStructure(g, I)


@dataclass(frozen=True)
class Bigrading:
    """Bases of ``Lambda^{1,0}`` and ``Lambda^{0,1}`` as covectors over Q(i)."""

    lambda10: tuple
    lambda01: tuple

    @property
    def n(self) -> int:
        return len(self.lambda10)


def bigrading(g: LieAlgebra, I) -> Bigrading:
    cs = _as_structure(g, I)
    n = g.dim
    # alpha I = i alpha  <=>  (I^T - i) alpha^T = 0
    It = cs.I.T.to_complex()
    shifted = ExactMatrix(
        [[It[r, c] - (I_UNIT if r == c else 0) for c in range(n)] for r in range(n)]
    )
    basis10 = [_monic(v) for v in span_basis(kernel_basis(shifted), n)]
    if 2 * len(basis10) != n:
        raise VerificationError("(1,0)-space does not have half dimension")
    basis01 = tuple(tuple(conj(x) for x in v) for v in basis10)
    return Bigrading(tuple(basis10), basis01)


def _monic(v):
    lead = next(x for x in v if x)
    inv = GaussianRational(1) / lead
    return tuple(x * inv for x in v)


def complex_coframe(g: LieAlgebra, I, basis10: Optional[Sequence[Sequence]] = None) -> Coframe:
    """Coframe ``(omega_1..omega_n, conj omega_1..conj omega_n)`` adapted to ``I``."""
    if basis10 is None:
        cs = _as_structure(g, I)
        basis10 = cs.bigrading.lambda10
    rows = [tuple(v) for v in basis10] + [tuple(conj(x) for x in v) for v in basis10]
    return Coframe(g, rows, split=len(basis10))


def ce_differential(g: LieAlgebra, coframe: Optional[Coframe] = None) -> list:
    """Matrices of ``d: Lambda^k -> Lambda^{k+1}`` for ``k = 0..dim-1``.

    ``d alpha(X, Y) = -alpha([X, Y])`` on 1-forms, extended as a graded
    derivation; no factor 1/2 anywhere.
    """
    cf = coframe if coframe is not None else Coframe.standard(g)
    return [cf.differential_matrix(k) for k in range(cf.size)]


def _eigenspace(g: LieAlgebra, I: ExactMatrix, eigen: GaussianRational) -> list:
    n = g.dim
    Ic = I.to_complex()
    shifted = ExactMatrix([[Ic[r, c] - (eigen if r == c else 0) for c in range(n)] for r in range(n)])
    return span_basis(kernel_basis(shifted), n)


def _nijenhuis(g: LieAlgebra, I: ExactMatrix, x, y):
    Ix, Iy = I.apply(x), I.apply(y)
    a = g.bracket(x, y)
    b = I.apply(g.bracket(Ix, y))
    c = I.apply(g.bracket(x, Iy))
    d = g.bracket(Ix, Iy)
    return tuple(p + q + r - s for p, q, r, s in zip(a, b, c, d))


def is_integrable(g: LieAlgebra, I) -> CheckResult:
    """Integrability by three independent criteria that must agree.

    (a) ``g^{0,1}`` is closed under the bracket; (b) the Nijenhuis tensor
    vanishes on all basis pairs; (c) ``d`` maps (1,0)-forms to forms with no
    (0,2) component.  The witness of a failure is a one-based basis pair
    where Nijenhuis is nonzero.
    """
    cs = _as_structure(g, I)
    I = cs.I
    n = g.dim

    neg_i = GaussianRational(0, -1)
    v01 = _eigenspace(g, I, neg_i)
    Ic = I.to_complex()
    subalgebra_ok = True
    for a in range(len(v01)):
        for b in range(a + 1, len(v01)):
            z = g.bracket(v01[a], v01[b])
            Iz = Ic.apply(z)
            if any(p - neg_i * q for p, q in zip(Iz, z)):
                subalgebra_ok = False
                break
        if not subalgebra_ok:
            break

    nij_witness = None
    for i in range(n):
        for j in range(i + 1, n):
            if any(_nijenhuis(g, I, g.basis_vector(i), g.basis_vector(j))):
                nij_witness = (i + 1, j + 1)
                break
        if nij_witness:
            break

    cf = cs.coframe
    h = cf.split
    no02 = all(
        not (b >= h and c >= h) for a in range(h) for (b, c) in cf.structure[a].terms
    )
    verdicts = {"subalgebra": subalgebra_ok, "nijenhuis": nij_witness is None, "no_02_component": no02}
    if len(set(verdicts.values())) != 1:
        raise VerificationError(f"integrability criteria disagree: {verdicts}", witness=nij_witness)
    return CheckResult(subalgebra_ok, witness=nij_witness, value=verdicts)


def is_abelian_structure(g: LieAlgebra, I) -> CheckResult:
    """``[Ix, Iy] = [x, y]`` on basis pairs; on success also confirms that
    ``g^{1,0}`` is an abelian subalgebra."""
    cs = _as_structure(g, I)
    I = cs.I
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            x, y = g.basis_vector(i), g.basis_vector(j)
            if g.bracket(I.apply(x), I.apply(y)) != g.bracket(x, y):
                return CheckResult(False, witness=(i + 1, j + 1))
    v10 = _eigenspace(g, I, I_UNIT)
    for a in range(len(v10)):
        for b in range(a + 1, len(v10)):
            if any(g.bracket(v10[a], v10[b])):
                raise VerificationError("[Ix,Iy]=[x,y] holds but g^{1,0} is not abelian", witness=(a, b))
    return CheckResult(True)


@dataclass(frozen=True)
class SalamonCoframe:
    """(1,0)-forms with ``d omega_i = sum_{j<i} eta_j^i ^ omega_j``.

    ``forms[i]`` and ``witnesses[i][j]`` are covectors on the standard dual
    basis (zero-based ``i``, ``j < i``); ``levels[i]`` is the filtration step
    at which ``omega_i`` entered; ``coframe`` is the adapted coframe built
    from the forms and their conjugates.
    """

    forms: tuple
    witnesses: tuple
    levels: tuple
    coframe: Coframe

    @property
    def n(self) -> int:
        return len(self.forms)

    @property
    def steps(self) -> int:
        return max(self.levels) + 1 if self.levels else 0


def _dot(u, v):
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


def _combine(coeffs, rows, width):
    out = [ZERO] * width
    for c, row in zip(coeffs, rows):
        if c:
            for k, x in enumerate(row):
                if x:
                    out[k] = out[k] + c * x
    return tuple(out)


def salamon_coframe(g: LieAlgebra, I) -> SalamonCoframe:
    """Build a Salamon coframe from the ascending chain ``W_0 = 0``,
    ``W_{r+1} = {omega in Lambda^{1,0} : d omega in W_r ^ Lambda^1}``.

    ``d omega`` lies in the ideal generated by ``W`` iff it vanishes on
    ``Ann(W) x Ann(W)``, i.e. iff ``omega`` annihilates ``[Ann W, Ann W]``.
    """
    cs = _as_structure(g, I)
    if not cs.integrable:
        raise HypothesisError("not a nilpotent complex structure: I is not integrable")
    base = cs.bigrading.lambda10
    n, N = len(base), g.dim

    chosen: list = []          # coordinates over ``base``
    levels: list = []
    echelon = EchelonBasis(n, complex_mode=True)
    level = 0
    while len(chosen) < n:
        covectors = [_combine(x, base, N) for x in chosen]
        if covectors:
            ann = span_basis(kernel_basis(ExactMatrix(covectors)), N)
        else:
            ann = [tuple(GaussianRational(1 if k == i else 0) for k in range(N)) for i in range(N)]
        brackets = [g.bracket(ann[p], ann[q]) for p in range(len(ann)) for q in range(p + 1, len(ann))]
        brackets = span_basis([b for b in brackets if any(b)], N) if any(any(b) for b in brackets) else []
        if brackets:
            conditions = ExactMatrix([[_dot(base[a], s) for a in range(n)] for s in brackets])
            nxt = span_basis(kernel_basis(conditions), n)
        else:
            nxt = [tuple(GaussianRational(1 if k == i else 0) for k in range(n)) for i in range(n)]
        added = 0
        for v in nxt:
            if echelon.add(v):
                chosen.append(v)
                levels.append(level)
                added += 1
        if not added:
            raise HypothesisError(
                "not a nilpotent complex structure: the filtration stalls at "
                f"dimension {len(chosen)} of {n}"
            )
        level += 1

    forms = [_combine(x, base, N) for x in chosen]
    cf = complex_coframe(g, cs.I, forms)
    witnesses = []
    for i in range(n):
        earlier = {j for j in range(n) if levels[j] < levels[i]}
        eta = [[ZERO] * N for _ in range(i)]
        for (b, c), x in cf.structure[i].terms.items():
            # theta^b ^ theta^c = eta_j ^ omega_j with j in the earlier levels
            if b in earlier:
                j, other, coeff = b, c, -x
            elif c in earlier:
                j, other, coeff = c, b, x
            else:
                raise VerificationError(
                    f"d omega_{i + 1} has a term outside the ideal of earlier forms", witness=(i, b, c)
                )
            row = cf.matrix.rows[other]
            for k in range(N):
                if row[k]:
                    eta[j][k] = eta[j][k] + coeff * row[k]
        witnesses.append(tuple(tuple(e) for e in eta))
    result = SalamonCoframe(tuple(forms), tuple(witnesses), tuple(levels), cf)
    check = verify_salamon(g, result)
    if not check:
        raise VerificationError("Salamon filtration failed re-verification", witness=check.witness)
    return result


def _two_form_matrix_of_d(g: LieAlgebra, covector) -> list:
    """``(d alpha)(e_a, e_b) = -alpha([e_a, e_b])`` as a dense matrix."""
    N = g.dim
    M = [[ZERO] * N for _ in range(N)]
    for (a, b), row in g.structure_constants.items():
        v = ZERO
        for k, c in row.items():
            if covector[k]:
                v = v + covector[k] * c
        M[a][b] = -v
        M[b][a] = v
    return M


def verify_salamon(g: LieAlgebra, sc: SalamonCoframe) -> CheckResult:
    """Re-check ``d omega_i = sum_j eta_j^i ^ omega_j`` on the standard basis,
    independently of the coframe used to build the witnesses."""
    N = g.dim
    for i, omega in enumerate(sc.forms):
        lhs = _two_form_matrix_of_d(g, omega)
        rhs = [[ZERO] * N for _ in range(N)]
        for j in range(i):
            eta, w = sc.witnesses[i][j], sc.forms[j]
            for a in range(N):
                if not (eta[a] or w[a]):
                    continue
                for b in range(N):
                    val = eta[a] * w[b] - eta[b] * w[a]
                    if val:
                        rhs[a][b] = rhs[a][b] + val
        for a in range(N):
            for b in range(N):
                if lhs[a][b] != rhs[a][b]:
                    return CheckResult(False, witness=(i + 1, a + 1, b + 1))
    return CheckResult(True)


@dataclass(frozen=True)
class CanonicalFormResult:
    """``eta = omega_1 ^ ... ^ omega_n`` on ``coframe`` and its differential."""

    eta: Form
    d_eta: Form
    coframe: Coframe

    @property
    def closed(self) -> bool:
        return self.d_eta.is_zero()


def canonical_form(g: LieAlgebra, I, coframe: Optional[Coframe] = None) -> CanonicalFormResult:
    require_nilpotent(g, "canonical_form")
    cs = _as_structure(g, I)
    if not cs.integrable:
        raise HypothesisError("canonical_form requires an integrable complex structure")
    cf = coframe if coframe is not None else cs.coframe
    n = cf.split
    eta = Form.monomial(tuple(range(n)), cf.size)
    return CanonicalFormResult(eta, cf.d(eta), cf)


def d_canonical_check(g: LieAlgebra, I) -> CheckResult:
    res = canonical_form(g, I)
    if res.closed:
        return CheckResult(True, value=res)
    first = min(res.d_eta.terms)
    return CheckResult(False, witness=first, value=res)


def trace_J_ad(g: LieAlgebra, I) -> list:
    """``tr(I ad_X)`` for every basis vector ``X``."""
    require_nilpotent(g, "trace_J_ad")
    cs = _as_structure(g, I)
    if not cs.integrable:
        raise HypothesisError("trace_J_ad requires an integrable complex structure")
    return [cs.I.matmul(m).trace() for m in g.ad_matrices]


@dataclass(frozen=True)
class DolbeaultCohomology:
    """``H^{p,0}_partial`` of ``(g_C, I)``.

    ``representatives`` are cocycles (vectors over the (p,0) multi-index
    basis ``basis``) whose classes form a basis of the cohomology.
    """

    p: int
    dimension: int
    basis: tuple
    cocycles: tuple
    coboundary_rank: int
    representatives: tuple


def dolbeault_cohomology_p0(g: LieAlgebra, I, p: int, coframe: Optional[Coframe] = None) -> DolbeaultCohomology:
    cs = _as_structure(g, I)
    if not cs.integrable:
        raise HypothesisError("Dolbeault cohomology requires an integrable complex structure")
    cf = coframe if coframe is not None else cs.coframe
    n = cf.split
    if not 0 <= p <= n:
        raise ValueError(f"p must lie in [0, {n}]")
    basis = tuple(cf.multi_indices(p, p))
    dp = cf.partial_matrix(p) if p < n else ExactMatrix.zeros(0, len(basis))
    cocycles = kernel_basis(dp) if dp.nrows else [
        tuple(GaussianRational(1 if k == i else 0) for k in range(len(basis))) for i in range(len(basis))
    ]
    if p > 0:
        prev = cf.partial_matrix(p - 1)
        if p < n and not dp.matmul(prev).is_zero():
            raise VerificationError(f"partial o partial != 0 on Lambda^{p - 1},0")
        images = [c for c in prev.columns() if any(c)]
    else:
        images = []
    coboundary_rank = rank(images) if images else 0
    echelon = EchelonBasis(len(basis), complex_mode=True)
    for v in images:
        echelon.add(v)
    reps = [tuple(v) for v in cocycles if echelon.add(v)]
    dim = len(cocycles) - coboundary_rank
    if dim != len(reps):
        raise VerificationError("coboundaries are not contained in the cocycles")
    return DolbeaultCohomology(p, dim, basis, tuple(cocycles), coboundary_rank, tuple(reps))
