"""Hermitian and quaternionic Hermitian metrics on Lie algebras.

Fundamental forms follow ``omega_S(X, Y) = g(X, S Y)``, i.e. the matrix
``G S``.  The Bismut torsion is ``c(X, Y, Z) = -d omega(S X, S Y, S Z)`` and
``g(nabla^B_X Y, Z) = g(nabla^LC_X Y, Z) + c(X, Y, Z) / 2``; both sign
choices are pinned by the postconditions checked in :func:`bismut`.
The Lee form is computed twice, as ``(d* omega) o S`` with ``d*`` the Gram
adjoint of ``d``, and by the contraction
``theta(X) = -1/2 sum G^{jk} c(S X, e_j, S e_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterator, Optional, Sequence

from nilgeo.complex_structure import (
    ComplexStructure,
    dolbeault_cohomology_p0,
    is_abelian_structure,
    require_nilpotent,
)
from nilgeo.errors import (
    DimensionError,
    HypothesisError,
    StructureError,
    VerificationError,
)
from nilgeo.exterior import Coframe, Form
from nilgeo.hypercomplex import LABELS, Connection, HypercomplexStructure
from nilgeo.lie import CheckResult, LieAlgebra
from nilgeo.linalg import (
    ZERO,
    EchelonBasis,
    ExactMatrix,
    inverse,
    kernel_basis,
    rank,
    solve_linear,
    span_basis,
)
from nilgeo.scalars import I_UNIT, GaussianRational

__all__ = [
    "HKTResult",
    "HKTSpace",
    "LeeForm",
    "LefschetzData",
    "Metric",
    "abelian_equivalence_check",
    "bismut",
    "bismut_abelian",
    "canonical_torsion_theta",
    "hkt_check",
    "hkt_metric_space",
    "is_hermitian",
    "is_positive_definite",
    "lee_form",
    "lefschetz_map",
    "levi_civita",
    "omega_form",
    "omega_matrix",
    "quaternionic_balanced_check",
    "su2_average",
    "torsion_form",
]

HALF = Fraction(1, 2)
PROBE_BOUND = 3
PROBE_CAP = 20000


def leading_minors(G: ExactMatrix) -> list:
    """Leading principal minors via elimination without pivoting.

    Stops after the first vanishing minor, since later ones cannot be read
    off the same elimination (and positivity has already failed).
    """
    n = G.nrows
    rows = [list(r) for r in G.rows]
    minors = []
    det = Fraction(1)
    for k in range(n):
        p = rows[k][k]
        det = det * p
        minors.append(det)
        if not p:
            break
        for i in range(k + 1, n):
            f = rows[i][k] / p
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[k])]
    return minors


def is_positive_definite(G: ExactMatrix) -> CheckResult:
    """Sylvester's criterion; the witness is the order of the first
    non-positive leading minor."""
    if not G.is_symmetric():
        return CheckResult(False, witness="not symmetric")
    for k, m in enumerate(leading_minors(G)):
        if m <= 0:
            return CheckResult(False, witness=k + 1)
    return CheckResult(True)


class Metric:
    """Symmetric positive-definite rational Gram matrix."""

    def __init__(self, G: ExactMatrix):
        if G.is_complex:
            raise StructureError("metric entries must be rational")
        if not G.is_square:
            raise DimensionError("metric must be square")
        pair = G.first_asymmetric_pair()
        if pair is not None:
            i, j = pair
            raise StructureError(f"metric is not symmetric at entries ({i + 1},{j + 1}) and ({j + 1},{i + 1})")
        pd = is_positive_definite(G)
        if not pd:
            raise StructureError(f"metric is not positive definite (leading minor {pd.witness})")
        self.G = G

    def __repr__(self) -> str:
        return f"Metric(dim={self.G.nrows})"

    @cached_property
    def inverse(self) -> ExactMatrix:
        return inverse(self.G)


def _gram(metric) -> ExactMatrix:
    return metric.G if isinstance(metric, Metric) else metric


def is_hermitian(G: ExactMatrix, S: ExactMatrix) -> bool:
    return S.T.matmul(G).matmul(S) == G


def su2_average(G, H: HypercomplexStructure) -> ExactMatrix:
    G = _gram(G)
    total = G
    for S in H.triple:
        total = total + S.T.matmul(G).matmul(S)
    return total.scale(Fraction(1, 4))


def omega_matrix(G, S: ExactMatrix) -> ExactMatrix:
    return _gram(G).matmul(S)


def _require_hermitian(G: ExactMatrix, H: HypercomplexStructure) -> None:
    for label, S in zip(LABELS, H.triple):
        if not is_hermitian(G, S):
            raise StructureError(f"metric is not Hermitian with respect to {label}")


@dataclass(frozen=True)
class OmegaData:
    """``Omega = omega_J + i omega_K`` on the (1,0)-coframe of ``I``."""

    omega: Form
    coframe: Coframe
    power: Form
    q: int

    @property
    def pure_20(self) -> bool:
        return self.omega.bidegrees(self.coframe.split) <= {(2, 0)}

    @property
    def nondegenerate(self) -> bool:
        return not self.power.is_zero()


def _coframe_for(H: HypercomplexStructure, coframe: Optional[Coframe]) -> Coframe:
    if coframe is not None:
        return coframe
    return H.structures[0].coframe


def omega_form(G, H: HypercomplexStructure, coframe: Optional[Coframe] = None) -> OmegaData:
    G = _gram(G)
    _require_hermitian(G, H)
    cf = _coframe_for(H, coframe)
    B = omega_matrix(G, H.J).to_complex() + omega_matrix(G, H.K).to_complex().scale(I_UNIT)
    om = cf.bilinear_form(B)
    q = H.quaternionic_dim
    data = OmegaData(om, cf, om.power(q), q)
    if not data.pure_20:
        raise VerificationError(f"Omega has components of type {sorted(data.omega.bidegrees(cf.split))}")
    if not data.nondegenerate:
        raise VerificationError("Omega^n vanishes")
    return data


@dataclass(frozen=True)
class HKTResult:
    ok: bool
    partial_omega: Form
    d_omega: Form

    @property
    def hyperkahler(self) -> bool:
        return self.d_omega.is_zero()

    def __bool__(self) -> bool:
        return self.ok


def hkt_check(G, H: HypercomplexStructure, coframe: Optional[Coframe] = None) -> HKTResult:
    data = omega_form(G, H, coframe)
    dOm = data.coframe.d(data.omega)
    partial = dOm.bidegree_part(3, data.coframe.split)
    return HKTResult(partial.is_zero(), partial, dOm)


def quaternionic_hermitian_basis(H: HypercomplexStructure) -> list:
    """Basis of symmetric forms Hermitian for ``I``, ``J`` and ``K``."""
    n = H.algebra.dim
    avg = []
    for a in range(n):
        for b in range(a, n):
            rows = [[ZERO] * n for _ in range(n)]
            rows[a][b] = Fraction(1)
            rows[b][a] = Fraction(1)
            avg.append(su2_average(ExactMatrix(rows), H).flatten())
    return [ExactMatrix([v[r * n:(r + 1) * n] for r in range(n)]) for v in span_basis(avg, n * n)]


def _partial_omega_vector(h: ExactMatrix, H: HypercomplexStructure, cf: Coframe, index3: list) -> list:
    B = h.matmul(H.J).to_complex() + h.matmul(H.K).to_complex().scale(I_UNIT)
    om = cf.bilinear_form(B)
    partial = cf.d(om).bidegree_part(3, cf.split)
    return [partial.terms.get(k, ZERO) for k in index3]


def _real(x):
    return x.re if isinstance(x, GaussianRational) else x


def _imag(x):
    return x.im if isinstance(x, GaussianRational) else ZERO


def _vectors_with_norm(length: int, norm: int, bound: int) -> Iterator[tuple]:
    if length == 0:
        if norm == 0:
            yield ()
        return
    for first in range(-min(bound, norm), min(bound, norm) + 1):
        for rest in _vectors_with_norm(length - 1, norm - abs(first), bound):
            yield (first,) + rest


def probe_positive_definite(basis: Sequence[ExactMatrix], bound: int = PROBE_BOUND, cap: int = PROBE_CAP):
    """Search integer combinations with entries in ``[-bound, bound]`` in
    order of increasing L1 norm; return ``(matrix or None, tried)``."""
    if not basis:
        return None, 0
    r = len(basis)
    n = basis[0].nrows
    diag = [[b[i, i] for i in range(n)] for b in basis]
    tried = 0
    for norm in range(1, bound * r + 1):
        for coeffs in _vectors_with_norm(r, norm, bound):
            tried += 1
            if tried > cap:
                return None, tried - 1
            if any(sum(c * d[i] for c, d in zip(coeffs, diag) if c) <= 0 for i in range(n)):
                continue
            M = ExactMatrix.zeros(n)
            for c, b in zip(coeffs, basis):
                if c:
                    M = M + b.scale(c)
            if is_positive_definite(M):
                return M, tried
    return None, tried


@dataclass(frozen=True)
class HKTSpace:
    """Quaternionic Hermitian forms ``h`` with ``partial Omega_h = 0``."""

    hermitian_dim: int
    solutions: tuple
    pd_example: Optional[ExactMatrix]
    probe_tried: int
    probe_bound: int

    @property
    def dimension(self) -> int:
        return len(self.solutions)

    @property
    def is_full(self) -> bool:
        return self.dimension == self.hermitian_dim

    @property
    def probe_verdict(self) -> str:
        if self.pd_example is not None:
            return "positive definite solution found"
        return "none found within search bound"


def hkt_metric_space(H: HypercomplexStructure, coframe: Optional[Coframe] = None,
                     probe_bound: int = PROBE_BOUND, probe_cap: int = PROBE_CAP) -> HKTSpace:
    cf = _coframe_for(H, coframe)
    herm = quaternionic_hermitian_basis(H)
    index3 = cf.multi_indices(3, 3)
    cols = [_partial_omega_vector(h, H, cf, index3) for h in herm]
    # real unknowns: split every complex equation into real and imaginary rows
    rows = []
    for r in range(len(index3)):
        re = [_real(c[r]) for c in cols]
        im = [_imag(c[r]) for c in cols]
        if any(re):
            rows.append(re)
        if any(im):
            rows.append(im)
    if rows:
        coeffs = kernel_basis(ExactMatrix(rows, len(herm)))
    else:
        coeffs = [tuple(Fraction(1 if k == i else 0) for k in range(len(herm))) for i in range(len(herm))]
    n = H.algebra.dim
    solutions = []
    for v in coeffs:
        M = ExactMatrix.zeros(n)
        for c, h in zip(v, herm):
            if c:
                M = M + h.scale(c)
        solutions.append(M)
    found, tried = probe_positive_definite(solutions, probe_bound, probe_cap)
    return HKTSpace(len(herm), tuple(solutions), found, tried, probe_bound)


def levi_civita(g: LieAlgebra, metric) -> Connection:
    """Koszul formula ``2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)``."""
    G = _gram(metric)
    Ginv = inverse(G)
    n = g.dim
    Gb = {}
    for i in range(n):
        for j in range(n):
            Gb[(i, j)] = G.apply(g.bracket_basis(i, j))
    mats = []
    for i in range(n):
        cols = []
        for j in range(n):
            b = [HALF * (Gb[(i, j)][z] - Gb[(j, z)][i] + Gb[(z, i)][j]) for z in range(n)]
            cols.append(Ginv.apply(b))
        mats.append(ExactMatrix.from_columns(cols, n))
    conn = Connection(g, mats, kind="levi_civita")
    if not conn.metric_check(G):
        raise VerificationError("Levi-Civita connection is not metric")
    tor = conn.torsion_check()
    if not tor:
        raise VerificationError(f"Levi-Civita connection has torsion at {tor.witness}", witness=tor.witness)
    return conn


def d_two_form(g: LieAlgebra, W: ExactMatrix, u, v, w):
    """``d omega(u, v, w)`` for the 2-form with matrix ``W``."""

    def om(x, y):
        return _bilinear(W, x, y)

    return -om(g.bracket(u, v), w) + om(g.bracket(u, w), v) - om(g.bracket(v, w), u)


def _bilinear(W: ExactMatrix, x, y):
    s = ZERO
    for a, xa in enumerate(x):
        if xa:
            row = W.rows[a]
            for b, yb in enumerate(y):
                if yb and row[b]:
                    s = s + xa * row[b] * yb
    return s


def torsion_form(g: LieAlgebra, metric, S: ExactMatrix) -> dict:
    """``c(e_i, e_j, e_k) = -d omega(S e_i, S e_j, S e_k)`` for all triples."""
    W = omega_matrix(metric, S)
    n = g.dim
    Se = [S.column(i) for i in range(n)]
    c = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[(i, j, k)] = -d_two_form(g, W, Se[i], Se[j], Se[k])
    return c


def _check_skew(c: dict, n: int) -> Optional[tuple]:
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = c[(i, j, k)]
                if c[(j, i, k)] != -v or c[(i, k, j)] != -v:
                    return (i + 1, j + 1, k + 1)
    return None


@dataclass(frozen=True)
class BismutData:
    connection: Connection
    torsion: dict


def bismut(g: LieAlgebra, metric, S: ExactMatrix) -> BismutData:
    G = _gram(metric)
    if not is_hermitian(G, S):
        raise StructureError("metric is not Hermitian for the given structure")
    if not ComplexStructure(g, S).integrable:
        raise HypothesisError("the Bismut connection needs an integrable structure")
    n = g.dim
    Ginv = inverse(G)
    lc = levi_civita(g, G)
    c = torsion_form(g, G, S)
    skew = _check_skew(c, n)
    if skew is not None:
        raise VerificationError(f"torsion 3-form is not totally skew at {skew}", witness=skew)
    mats = []
    for i in range(n):
        corr = ExactMatrix.from_columns(
            [Ginv.apply([HALF * c[(i, j, z)] for z in range(n)]) for j in range(n)], n
        )
        mats.append(lc.A[i] + corr)
    conn = Connection(g, mats, kind="bismut")
    if not conn.metric_check(G):
        raise VerificationError("Bismut connection is not metric")
    par = conn.parallel_check(S)
    if not par:
        raise VerificationError(f"Bismut connection does not preserve the structure along e{par.witness}")
    for i in range(n):
        for j in range(i + 1, n):
            low = G.apply(conn.torsion_tensor(g.basis_vector(i), g.basis_vector(j)))
            if any(low[z] != c[(i, j, z)] for z in range(n)):
                raise VerificationError(f"Bismut torsion differs from c at ({i + 1},{j + 1})")
    return BismutData(conn, c)


def bismut_abelian(g: LieAlgebra, metric, S: ExactMatrix) -> Connection:
    """``g(nabla^B_X Y, Z) = -g(X, [Y, Z])``, valid for abelian structures."""
    G = _gram(metric)
    if not is_abelian_structure(g, S):
        raise HypothesisError("bismut_abelian requires an abelian complex structure")
    if not is_hermitian(G, S):
        raise StructureError("metric is not Hermitian for the given structure")
    n = g.dim
    Ginv = inverse(G)
    mats = []
    for i in range(n):
        Gei = G.column(i)
        cols = []
        for j in range(n):
            b = [-sum((Gei[k] * v for k, v in enumerate(g.bracket_basis(j, z)) if v), ZERO) for z in range(n)]
            cols.append(Ginv.apply(b))
        mats.append(ExactMatrix.from_columns(cols, n))
    return Connection(g, mats, kind="bismut")


@dataclass(frozen=True)
class LeeForm:
    """``theta`` as a covector on ``e_1..e_n``; both routes kept for audit."""

    theta: tuple
    route_adjoint: tuple
    route_contraction: tuple

    def is_zero(self) -> bool:
        return not any(self.theta)


def _codifferential_of_two_form(g: LieAlgebra, G: ExactMatrix, W: ExactMatrix) -> tuple:
    n = g.dim
    Ginv = inverse(G)
    pairs = list(combinations(range(n), 2))
    # Gram matrix of e^i ^ e^j: 2x2 minors of the inverse Gram matrix
    H2 = ExactMatrix(
        [[Ginv[i, k] * Ginv[j, l] - Ginv[i, l] * Ginv[j, k] for (k, l) in pairs] for (i, j) in pairs]
    )
    D = ExactMatrix([[-g.constant(i, j, k) for k in range(n)] for (i, j) in pairs])
    w = [W[i, j] for (i, j) in pairs]
    # d* = H1^{-1} D^T H2 with H1 = G^{-1}
    return G.apply(D.T.apply(H2.apply(w)))


def lee_form(g: LieAlgebra, metric, S: ExactMatrix, torsion: Optional[dict] = None) -> LeeForm:
    G = _gram(metric)
    if not is_hermitian(G, S):
        raise StructureError("metric is not Hermitian for the given structure")
    if not ComplexStructure(g, S).integrable:
        raise HypothesisError("the Lee form needs an integrable structure")
    if not g.is_unimodular:
        # the Gram adjoint of d is the Riemannian codifferential only here
        raise HypothesisError("the Lee form routes need a unimodular algebra")
    n = g.dim
    W = omega_matrix(G, S)
    dstar = _codifferential_of_two_form(g, G, W)
    route_a = tuple(sum((dstar[a] * S[a, k] for a in range(n) if S[a, k]), ZERO) for k in range(n))

    c = torsion if torsion is not None else torsion_form(g, G, S)
    SGinv = S.matmul(inverse(G))
    T = [
        sum((c[(a, j, b)] * SGinv[b, j] for j in range(n) for b in range(n) if SGinv[b, j]), ZERO)
        for a in range(n)
    ]
    route_b = tuple(-HALF * sum((S[a, x] * T[a] for a in range(n) if S[a, x]), ZERO) for x in range(n))
    if route_a != route_b:
        raise VerificationError(f"Lee form routes disagree: {route_a} vs {route_b}")
    return LeeForm(route_a, route_a, route_b)


def lee_form_abelian(g: LieAlgebra, metric, S: ExactMatrix) -> tuple:
    """``theta(X) = tr(S nabla^B_{S X} / 2 - ad_X)`` for abelian ``S``."""
    conn = bismut_abelian(g, metric, S)
    out = []
    for x in range(g.dim):
        m = S.matmul(conn.matrix_along(S.column(x))).scale(HALF) - g.ad_matrices[x]
        out.append(m.trace())
    return tuple(out)


def quaternionic_balanced_check(g: LieAlgebra, metric, H: HypercomplexStructure) -> CheckResult:
    G = _gram(metric)
    _require_hermitian(G, H)
    thetas = {label: lee_form(g, G, S).theta for label, S in zip(LABELS, H.triple)}
    bad = [label for label, t in thetas.items() if any(t)]
    return CheckResult(not bad, witness=bad[0] if bad else None, value=thetas)


def canonical_torsion_theta(g: LieAlgebra, H: HypercomplexStructure, metric,
                            coframe: Optional[Coframe] = None) -> Form:
    """The (1,0)-form ``theta`` with ``partial conj(Omega)^q = theta ^ conj(Omega)^q``."""
    require_nilpotent(g, "canonical_torsion_theta")
    data = omega_form(metric, H, coframe)
    cf = data.coframe
    n = cf.split
    top = cf.conjugate(data.power)
    if top.is_zero():
        raise VerificationError("conj(Omega)^n vanishes: Omega is degenerate")
    rhs_form = cf.d(top).bidegree_part(1, n)
    index = cf.multi_indices(top.degree + 1, 1)
    cols = []
    for a in range(n):
        cols.append((Form.monomial((a,), cf.size) ^ top).vector(index))
    M = ExactMatrix.from_columns(cols, len(index))
    sol = solve_linear(M, rhs_form.vector(index))
    if sol is None:
        raise VerificationError("partial conj(Omega)^n is not divisible by conj(Omega)^n")
    return Form.one_form(list(sol) + [ZERO] * n)


@dataclass(frozen=True)
class LefschetzData:
    i: int
    power: int
    well_defined: bool
    source_dim: int
    target_dim: int
    map_rank: int

    @property
    def injective(self) -> bool:
        return self.map_rank == self.source_dim

    @property
    def surjective(self) -> bool:
        return self.map_rank == self.target_dim

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective


def lefschetz_map(g: LieAlgebra, H: HypercomplexStructure, metric, i: int,
                  coframe: Optional[Coframe] = None) -> LefschetzData:
    """``[gamma] -> [Omega^{q-i} ^ gamma]`` from ``H^{i,0}`` to ``H^{2q-i,0}``."""
    data = omega_form(metric, H, coframe)
    cf = data.coframe
    q = data.q
    if not 0 <= i <= q:
        raise ValueError(f"degree i must lie in [0, {q}]")
    I = H.I
    src = dolbeault_cohomology_p0(g, I, i, cf)
    tgt = dolbeault_cohomology_p0(g, I, 2 * q - i, cf)
    L = data.omega.power(q - i)
    size = cf.size

    def lift(vec, basis, degree):
        return Form(degree, size, {k: c for k, c in zip(basis, vec) if c})

    images = [(lift(v, src.basis, i) ^ L).vector(tgt.basis) for v in src.representatives]
    well_defined = True
    cocycle_check = EchelonBasis(len(tgt.basis), complex_mode=True)
    for v in tgt.cocycles:
        cocycle_check.add(v)
    for v in images:
        if any(v) and not cocycle_check.contains(v):
            well_defined = False
    # coboundaries of the source must map to coboundaries
    if i > 0 and well_defined:
        prev = cf.partial_matrix(i - 1)
        bound_tgt = EchelonBasis(len(tgt.basis), complex_mode=True)
        for col in cf.partial_matrix(2 * q - i - 1).columns():
            bound_tgt.add(col)
        for col in prev.columns():
            if any(col):
                img = (lift(col, src.basis, i) ^ L).vector(tgt.basis)
                if any(img) and not bound_tgt.contains(img):
                    well_defined = False
                    break
    coboundaries = []
    if 2 * q - i > 0:
        coboundaries = [c for c in cf.partial_matrix(2 * q - i - 1).columns() if any(c)]
    base_rank = rank(coboundaries) if coboundaries else 0
    combined = coboundaries + [v for v in images if any(v)]
    map_rank = (rank(combined) if combined else 0) - base_rank
    return LefschetzData(i, q - i, well_defined, src.dimension, tgt.dimension, map_rank)


def abelian_equivalence_check(g: LieAlgebra, H: HypercomplexStructure) -> CheckResult:
    verdicts = tuple(bool(is_abelian_structure(g, S)) for S in H.triple)
    return CheckResult(len(set(verdicts)) == 1, value=dict(zip(LABELS, verdicts)))
