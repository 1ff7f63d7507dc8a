"""Verification report: runs the checks on a document in a fixed order.

Every record carries ``check``, ``claim``, ``status``, ``value`` and
``witness``.  Statuses: ``pass`` and ``fail`` for assertions,
``expected-fail`` for negative results declared in the document's
``expect`` manifest, ``value`` for computed data with nothing asserted,
``not-applicable`` when the document lacks a component the check needs
(a triple, a metric), ``skipped`` when a mathematical precondition fails
and ``error`` when a postcondition blew up.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

from nilgeo import complex_structure as cx
from nilgeo import hermitian as hm
from nilgeo import hypercomplex as hc
from nilgeo.document import STRUCTURES, AlgebraDocument
from nilgeo.errors import HypothesisError, NilgeoError, StructureError
from nilgeo.exterior import Form, d_squared_check
from nilgeo.lie import CheckResult, jacobi_check
from nilgeo.linalg import ExactMatrix
from nilgeo.scalars import GaussianRational, emit_scalar

__all__ = ["CHECKS", "GROUPS", "Record", "Report", "run_report", "to_jsonable"]

FAILING = ("fail", "error")


def to_jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (Fraction, GaussianRational)):
        return emit_scalar(x)
    if isinstance(x, ExactMatrix):
        return [[emit_scalar(v) for v in row] for row in x.rows]
    if isinstance(x, Form):
        return [[[i + 1 for i in key], emit_scalar(c)] for key, c in sorted(x.terms.items())]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return str(x)


@dataclass(frozen=True)
class Record:
    check: str
    claim: str
    status: str
    value: object = None
    witness: object = None

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "claim": self.claim,
            "status": self.status,
            "value": to_jsonable(self.value),
            "witness": to_jsonable(self.witness),
        }


@dataclass
class Report:
    name: str
    records: list = field(default_factory=list)
    explicit: bool = False

    @property
    def failed(self) -> list:
        bad = list(FAILING) + (["skipped"] if self.explicit else [])
        return [r for r in self.records if r.status in bad]

    @property
    def applicable(self) -> bool:
        return any(r.status != "not-applicable" for r in self.records)

    @property
    def verdict(self) -> str:
        return "fail" if self.failed else "pass"

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_json(self) -> str:
        return json.dumps(
            {"name": self.name, "verdict": self.verdict, "records": [r.as_dict() for r in self.records]},
            indent=2,
        )

    def to_text(self) -> str:
        width = max((len(r.check) for r in self.records), default=10)
        lines = [f"report for {self.name}"]
        for r in self.records:
            line = f"  {r.status.upper():<14} {r.check:<{width}}  {r.claim}"
            if r.value is not None:
                line += f"  [{_short(to_jsonable(r.value))}]"
            if r.witness is not None:
                line += f"  witness={_short(to_jsonable(r.witness))}"
            lines.append(line)
        lines.append(f"verdict: {self.verdict.upper()}")
        return "\n".join(lines)


def _short(value, limit: int = 100) -> str:
    text = json.dumps(value, separators=(",", ":"))
    return text if len(text) <= limit else text[: limit - 3] + "..."


class _Skip(Exception):
    pass


class _Missing(_Skip):
    pass


class Context:
    """Lazily computed objects shared between checks."""

    def __init__(self, doc: AlgebraDocument):
        self.doc = doc
        self.algebra = doc.algebra()

    @cached_property
    def jacobi(self) -> CheckResult:
        return jacobi_check(self.algebra)

    def need_lie(self):
        if not self.jacobi:
            raise _Skip("Jacobi identity fails")

    def need_nilpotent(self):
        self.need_lie()
        if not self.algebra.is_nilpotent:
            raise _Skip("algebra is not nilpotent")

    @cached_property
    def structure_errors(self) -> dict:
        out = {}
        for label, M in self.doc.structures.items():
            try:
                cx.ComplexStructure(self.algebra, M, label)
            except NilgeoError as exc:
                out[label] = str(exc)
        return out

    @cached_property
    def structures(self) -> dict:
        self.need_lie()
        return {
            label: cx.ComplexStructure(self.algebra, M, label)
            for label, M in self.doc.structures.items()
            if label not in self.structure_errors
        }

    def labels(self) -> list:
        return [s for s in STRUCTURES if s in self.doc.structures]

    def structure(self, label: str) -> cx.ComplexStructure:
        if label in self.structure_errors:
            raise _Skip(f"{label} is not a complex structure")
        return self.structures[label]

    def integrable(self, label: str) -> cx.ComplexStructure:
        cs = self.structure(label)
        if not cs.integrable:
            raise _Skip(f"{label} is not integrable")
        return cs

    @cached_property
    def triple_check(self) -> Optional[CheckResult]:
        if not self.doc.has_triple():
            return None
        return hc.validate_hypercomplex(self.algebra, *(self.doc.structures[s] for s in STRUCTURES))

    @cached_property
    def hypercomplex(self) -> hc.HypercomplexStructure:
        self.need_lie()
        res = self.triple_check
        if res is None:
            raise _Missing("document has no I, J, K triple")
        if not res:
            raise _Skip(f"not hypercomplex: {res.witness}")
        return self.doc.hypercomplex(self.algebra)

    @cached_property
    def obata(self) -> hc.Connection:
        return hc.obata_connection(self.algebra, self.hypercomplex)

    @cached_property
    def curvature(self) -> hc.CurvatureTensor:
        return hc.curvature(self.algebra, self.obata)

    @cached_property
    def metric(self) -> hm.Metric:
        if self.doc.metric is None:
            raise _Missing("document has no metric")
        return hm.Metric(self.doc.metric)

    @cached_property
    def qh_metric(self) -> ExactMatrix:
        """The document metric, SU(2)-averaged when it is not already
        quaternionic Hermitian."""
        return hm.su2_average(self.metric.G, self.hypercomplex)

    def hermitian_metric(self, label: str) -> ExactMatrix:
        if self.doc.has_triple() and self.triple_check:
            return self.qh_metric
        G = self.metric.G
        if not hm.is_hermitian(G, self.structure(label).I):
            raise _Skip(f"metric is not Hermitian for {label}")
        return G

    @cached_property
    def all_abelian(self) -> bool:
        return all(bool(self.structure(s).abelian) for s in STRUCTURES)

    @cached_property
    def hkt(self) -> hm.HKTResult:
        return hm.hkt_check(self.qh_metric, self.hypercomplex)


# -- checks ----------------------------------------------------------------

CHECKS: list = []


def check(name: str, claim: str, per_label: bool = False):
    """Register a check.  Plain checks yield records; ``per_label`` checks
    return one record per structure label and are isolated from each other."""

    def wrap(fn):
        CHECKS.append((name, claim, fn, per_label))
        return fn

    return wrap


def _status(ok) -> str:
    return "pass" if ok else "fail"


@check("jacobi", "Jacobi identity on all basis triples")
def _jacobi(ctx, name, claim):
    res = ctx.jacobi
    yield Record(name, claim, _status(res), witness=res.witness)


@check("d_squared", "d^2 = 0 on the real coframe and on each structure's complex coframe")
def _d_squared(ctx, name, claim):
    ctx.need_lie()
    res = d_squared_check(ctx.algebra)
    yield Record(name, claim, _status(res), {"max_degree": res.value}, res.witness)
    for label in ctx.labels():
        if label in ctx.structure_errors:
            continue
        res = d_squared_check(ctx.algebra, ctx.structure(label).coframe)
        yield Record(f"{name}[{label}]", claim, _status(res), {"max_degree": res.value}, res.witness)


@check("nilpotency", "lower central series terminates")
def _nilpotency(ctx, name, claim):
    ctx.need_lie()
    lcs = ctx.algebra.lower_central_series
    value = {"step": lcs.step, "dims": list(lcs.dims)}
    if "nilpotency_step" in ctx.doc.expect:
        expected = ctx.doc.expect["nilpotency_step"]
        yield Record(name, claim, _status(lcs.step == expected), value,
                     None if lcs.step == expected else {"expected": expected})
    else:
        yield Record(name, claim, "value", value)


@check("structures", "I^2 = -Id for every given structure; quaternion relations for triples")
def _structures(ctx, name, claim):
    ctx.need_lie()
    for label in ctx.labels():
        err = ctx.structure_errors.get(label)
        yield Record(f"{name}[{label}]", claim, _status(err is None), witness=err)
    if ctx.triple_check is not None:
        res = ctx.triple_check
        yield Record(f"{name}[hypercomplex]", claim, _status(res), witness=res.witness)


@check("integrable", "closed g^{0,1}, vanishing Nijenhuis tensor and no (0,2) part of d agree", True)
def _integrable(ctx, label, name, claim):
    res = ctx.structure(label).integrable
    return Record(name, claim, _status(res), res.value, res.witness)


@check("abelian", "[Ix, Iy] = [x, y] (matches manifest when declared)", True)
def _abelian(ctx, label, name, claim):
    expect = ctx.doc.expect.get("abelian", {})
    res = ctx.structure(label).abelian
    status = _status(bool(res) == expect[label]) if label in expect else "value"
    return Record(name, claim, status, bool(res), res.witness)


@check("abelian_equivalence", "I abelian iff J abelian iff K abelian")
def _abelian_eq(ctx, name, claim):
    res = hm.abelian_equivalence_check(ctx.algebra, ctx.hypercomplex)
    yield Record(name, claim, _status(res), res.value)


@check("salamon", "Salamon filtration exists and re-verifies", True)
def _salamon(ctx, label, name, claim):
    ctx.need_nilpotent()
    sc = cx.salamon_coframe(ctx.algebra, ctx.integrable(label))
    res = cx.verify_salamon(ctx.algebra, sc)
    return Record(name, claim, _status(res), {"levels": list(sc.levels)}, res.witness)


@check("canonical", "d eta = 0 for the canonical (n,0)-form", True)
def _canonical(ctx, label, name, claim):
    ctx.need_nilpotent()
    res = cx.d_canonical_check(ctx.algebra, ctx.integrable(label))
    return Record(name, claim, _status(res), witness=res.witness)


@check("trace_lemma", "tr(I ad_X) = 0 for every basis X", True)
def _trace_lemma(ctx, label, name, claim):
    ctx.need_nilpotent()
    traces = cx.trace_J_ad(ctx.algebra, ctx.integrable(label))
    bad = next((i + 1 for i, t in enumerate(traces) if t), None)
    return Record(name, claim, _status(bad is None), witness=bad)


@check("obata", "Obata connection: torsion-free with I, J, K parallel")
def _obata(ctx, name, claim):
    ctx.obata
    yield Record(name, claim, "pass", {"flat": ctx.curvature.is_zero()})


@check("ricci", "Ricci tensor of the Obata connection vanishes")
def _ricci(ctx, name, claim):
    ric = hc.ricci(ctx.algebra, ctx.obata, ctx.curvature)
    bad = next(((i + 1, j + 1) for i in range(ric.nrows) for j in range(ric.ncols) if ric[i, j]), None)
    asserted = ctx.algebra.is_nilpotent
    yield Record(name, claim, _status(bad is None) if asserted else "value", bad is None, bad)


@check("trace_nabla", "tr(nabla_[X,Y]) = tr(J_a ad_{J_a [X,Y]}) = 0, independent of a")
def _trace_nabla(ctx, name, claim):
    rep = hc.trace_nabla_bracket(ctx.algebra, ctx.obata, ctx.hypercomplex)
    ind = hc.alpha_independence(ctx.algebra, ctx.hypercomplex)
    if ctx.algebra.is_nilpotent:
        yield Record(name, claim, _status(rep.ok and ind.ok), witness=rep.witness or ind.witness)
    else:
        yield Record(name, claim, "value", rep.ok and ind.ok, rep.witness or ind.witness)


@check("holonomy", "infinitesimal holonomy closes and commutes with I, J, K")
def _holonomy(ctx, name, claim):
    hol = hc.infinitesimal_holonomy(ctx.algebra, ctx.obata, R=ctx.curvature)
    H = ctx.hypercomplex
    bad = next((i + 1 for i, h in enumerate(hol.basis) if any(not h.commutator(M).is_zero() for M in H.triple)),
               None)
    value = {"dimension": hol.dimension, "depth": hol.depth, "converged": hol.converged}
    yield Record(name, claim, _status(hol.converged and bad is None), value, bad)


@check("sl", "holonomy generators have complex trace 0; nabla eta = 0")
def _sl(ctx, name, claim):
    ctx.need_nilpotent()
    rep = hc.sl_membership_report(ctx.algebra, ctx.hypercomplex, ctx.obata)
    bad = next((r["generator"] for r in rep.generators if not r["ok"]), None)
    value = {"generators": len(rep.generators), "nabla_eta_zero": rep.nabla_eta_zero,
             "d_eta_zero": rep.d_eta_zero, "global_monodromy": rep.monodromy}
    yield Record(name, claim, _status(rep), value, bad)


@check("metric", "metric is symmetric and positive definite")
def _metric(ctx, name, claim):
    if ctx.doc.metric is None:
        raise _Missing("document has no metric")
    try:
        ctx.metric
    except StructureError as exc:
        yield Record(name, claim, "fail", witness=str(exc))
        return
    yield Record(name, claim, "pass")


@check("average", "SU(2) average is quaternionic Hermitian, positive definite and idempotent")
def _average(ctx, name, claim):
    G = ctx.qh_metric
    H = ctx.hypercomplex
    ok = all(hm.is_hermitian(G, S) for S in H.triple) and bool(hm.is_positive_definite(G))
    ok = ok and hm.su2_average(G, H) == G
    yield Record(name, claim, _status(ok), {"input_was_quaternionic_hermitian": G == ctx.metric.G})


@check("omega", "Omega = omega_J + i omega_K is of type (2,0) with Omega^n != 0")
def _omega(ctx, name, claim):
    data = hm.omega_form(ctx.qh_metric, ctx.hypercomplex)
    yield Record(name, claim, _status(data.pure_20 and data.nondegenerate))


@check("hkt", "partial Omega = 0 (expected iff the structure is abelian)")
def _hkt(ctx, name, claim):
    res = ctx.hkt
    expected = ctx.doc.expect.get("hkt", ctx.all_abelian)
    if res.ok == expected:
        status = "pass" if res.ok else "expected-fail"
    else:
        status = "fail"
    value = {"hkt": res.ok, "hyperkahler": res.hyperkahler}
    yield Record(name, claim, status, value, None if res.ok else res.partial_omega)


@check("hkt_space", "HKT forms fill the Hermitian space iff abelian; no positive definite one otherwise")
def _hkt_space(ctx, name, claim):
    sp = hm.hkt_metric_space(ctx.hypercomplex)
    abelian = ctx.all_abelian
    ok = sp.is_full if abelian else (not sp.is_full and sp.pd_example is None)
    value = {"hermitian_dim": sp.hermitian_dim, "hkt_dim": sp.dimension, "probe": sp.probe_verdict,
             "probe_tried": sp.probe_tried}
    yield Record(name, claim, _status(ok), value)


@check("bismut", "Bismut connection: metric, preserves the structure, skew torsion", True)
def _bismut(ctx, label, name, claim):
    cs = ctx.integrable(label)
    G = ctx.hermitian_metric(label)
    data = hm.bismut(ctx.algebra, G, cs.I)
    value = {"torsion_zero": not any(data.torsion.values())}
    ok = True
    if cs.abelian:
        ok = hm.bismut_abelian(ctx.algebra, G, cs.I) == data.connection
        value["matches_abelian_formula"] = ok
    return Record(name, claim, _status(ok), value)


@check("lee", "Lee form: Gram-adjoint and torsion-contraction routes agree", True)
def _lee(ctx, label, name, claim):
    cs = ctx.integrable(label)
    G = ctx.hermitian_metric(label)
    lee = hm.lee_form(ctx.algebra, G, cs.I)
    ok = True
    if cs.abelian:
        ok = hm.lee_form_abelian(ctx.algebra, G, cs.I) == lee.theta
    return Record(name, claim, _status(ok), {"theta": lee.theta})


@check("balanced", "theta_I = theta_J = theta_K = 0 (asserted for abelian triples)")
def _balanced(ctx, name, claim):
    res = hm.quaternionic_balanced_check(ctx.algebra, ctx.qh_metric, ctx.hypercomplex)
    status = _status(res) if ctx.all_abelian else "value"
    yield Record(name, claim, status, res.ok, res.witness)


@check("theta", "partial conj(Omega)^n = theta ^ conj(Omega)^n forces theta = 0")
def _theta(ctx, name, claim):
    ctx.need_nilpotent()
    theta = hm.canonical_torsion_theta(ctx.algebra, ctx.hypercomplex, ctx.qh_metric)
    yield Record(name, claim, _status(theta.is_zero()), witness=None if theta.is_zero() else theta)


@check("lefschetz", "L_Omega^{n-i}: H^{i,0} -> H^{2n-i,0} is an isomorphism (asserted when HKT)")
def _lefschetz(ctx, name, claim):
    H = ctx.hypercomplex
    asserted = ctx.hkt.ok
    for i in range(H.quaternionic_dim + 1):
        d = hm.lefschetz_map(ctx.algebra, H, ctx.qh_metric, i)
        value = {"well_defined": d.well_defined, "source": d.source_dim, "target": d.target_dim,
                 "rank": d.map_rank, "isomorphism": d.isomorphism}
        status = _status(d.well_defined and d.isomorphism) if asserted else "value"
        yield Record(f"{name}[{i}]", claim, status, value)


GROUPS = {
    "check": ["jacobi", "d_squared", "nilpotency", "structures", "integrable", "abelian", "abelian_equivalence"],
    "canonical": ["canonical", "trace_lemma"],
    "salamon": ["salamon"],
    "obata": ["obata", "ricci", "trace_nabla", "holonomy", "sl"],
    "hkt": ["metric", "average", "omega", "hkt", "hkt_space"],
    "lee": ["metric", "average", "bismut", "lee", "balanced"],
    "lefschetz": ["metric", "average", "theta", "lefschetz"],
}
NAMES = [entry[0] for entry in CHECKS]


def run_report(doc: AlgebraDocument, checks: Optional[Iterable[str]] = None) -> Report:
    """Run ``checks`` (default: all) in dependency order."""
    selected = None if checks is None else set(checks)
    if selected is not None:
        unknown = selected - set(NAMES)
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
    ctx = Context(doc)
    report = Report(doc.name, explicit=selected is not None)
    for name, claim, fn, per_label in CHECKS:
        if selected is not None and name not in selected:
            continue
        if per_label:
            for label in ctx.labels():
                tag = f"{name}[{label}]"
                report.records.append(
                    _guarded(lambda fn=fn, label=label, tag=tag, claim=claim: fn(ctx, label, tag, claim), tag, claim)[0]
                )
        else:
            report.records.extend(
                _guarded(lambda fn=fn, name=name, claim=claim: list(fn(ctx, name, claim)), name, claim)
            )
    return report


def _guarded(thunk, name: str, claim: str) -> list:
    try:
        out = thunk()
    except _Missing as exc:
        return [Record(name, claim, "not-applicable", witness=str(exc))]
    except (_Skip, HypothesisError) as exc:
        return [Record(name, claim, "skipped", witness=str(exc))]
    except NilgeoError as exc:
        return [Record(name, claim, "error", witness=str(exc))]
    return out if isinstance(out, list) else [out]
