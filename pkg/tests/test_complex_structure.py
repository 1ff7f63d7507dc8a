import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import conjugated_structures, standard_structure, two_step_algebras

from nilgeo import catalog
from nilgeo.complex_structure import (
    ComplexStructure,
    bigrading,
    canonical_form,
    ce_differential,
    d_canonical_check,
    dolbeault_cohomology_p0,
    is_abelian_structure,
    is_integrable,
    salamon_coframe,
    trace_J_ad,
    verify_salamon,
)
from nilgeo.errors import DimensionError, HypothesisError, StructureError
from nilgeo.exterior import Coframe, Form, d_squared_check
from nilgeo.lie import LieAlgebra
from nilgeo.linalg import ExactMatrix, span_basis
from nilgeo.scalars import GaussianRational, conj

STRUCTURED = [(n, s) for n in catalog.names() for s in catalog.get(n).structures]
NILPOTENT_STRUCTURED = [(n, s) for n, s in STRUCTURED if catalog.get(n).algebra.is_nilpotent]


def structure(name, label):
    e = catalog.get(name)
    return e.algebra, e.structures[label]


def test_ce_differential_abelian_is_zero():
    for m in ce_differential(LieAlgebra(4, {})):
        assert m.is_zero()


def test_ce_differential_heisenberg():
    d1 = ce_differential(catalog.heisenberg())[1]
    cf = Coframe.standard(catalog.heisenberg())
    index2 = cf.multi_indices(2)
    # d e^3 = -e^1 ^ e^2; the other e^k are closed
    col = d1.column(2)
    assert col[index2.index((0, 1))] == -1
    assert sum(1 for x in col if x) == 1
    for k in (0, 1, 3):
        assert not any(d1.column(k))


@pytest.mark.parametrize("name", catalog.names())
def test_d_squared_every_entry(name):
    e = catalog.get(name)
    assert d_squared_check(e.algebra)
    for M in e.structures.values():
        assert d_squared_check(e.algebra, ComplexStructure(e.algebra, M).coframe)


def test_d_squared_detects_broken_jacobi():
    g = LieAlgebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})
    res = d_squared_check(g)
    assert not res and res.witness == (3,)


@pytest.mark.parametrize("name, label", STRUCTURED)
def test_catalog_structures_integrable(name, label):
    res = is_integrable(*structure(name, label))
    assert res
    assert res.value == {"subalgebra": True, "nijenhuis": True, "no_02_component": True}


def test_non_integrable_on_heisenberg():
    # I e1 = e3, I e2 = e4: N(e1, e2) = [e1, e2] = e3
    I = ExactMatrix([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    res = is_integrable(catalog.heisenberg(), I)
    assert not res
    assert res.witness == (1, 2)
    assert set(res.value.values()) == {False}


@given(two_step_algebras(max_dim=6, even=True), st.data())
def test_integrability_criteria_agree(g, data):
    I = data.draw(conjugated_structures(g.dim))
    # raises VerificationError if the three criteria disagree
    res = is_integrable(g, I)
    assert bool(res) == all(res.value.values())


@given(two_step_algebras(max_dim=6, even=True), st.data())
def test_conjugation_swaps_types(g, data):
    I = data.draw(conjugated_structures(g.dim))
    bg = bigrading(g, I)
    conj10 = [tuple(conj(x) for x in v) for v in bg.lambda10]
    assert span_basis(conj10, g.dim) == span_basis(bg.lambda01, g.dim)


def test_structure_validation():
    g = catalog.heisenberg()
    with pytest.raises(StructureError):
        ComplexStructure(g, ExactMatrix.identity(4))
    with pytest.raises(StructureError):
        ComplexStructure(LieAlgebra(3, {}), ExactMatrix.identity(3))
    with pytest.raises(DimensionError):
        ComplexStructure(g, standard_structure(6))


@pytest.mark.parametrize(
    "name, label, expected",
    [("kodaira", "J", True), ("iwasawa", "I", False), ("aff-A3", "J", False),
     ("aff-t3", "I", True), ("torus1", "K", True)],
)
def test_abelian(name, label, expected):
    assert bool(is_abelian_structure(*structure(name, label))) is expected


def test_iwasawa_abelian_witness():
    res = is_abelian_structure(*structure("iwasawa", "I"))
    assert res.witness == (1, 3)


def test_salamon_torus():
    sc = salamon_coframe(*structure("torus1", "I"))
    assert sc.steps == 1
    assert all(sc.coframe.structure[a].is_zero() for a in range(sc.n))


def test_salamon_iwasawa():
    sc = salamon_coframe(*structure("iwasawa", "I"))
    i = GaussianRational(0, 1)
    assert sc.forms[0] == (1, i, 0, 0, 0, 0)
    assert sc.forms[2] == (0, 0, 0, 0, 1, i)
    s = sc.coframe.structure
    assert s[0].is_zero() and s[1].is_zero()
    assert s[2] == Form(2, 6, {(0, 1): -1})


@pytest.mark.parametrize("name, label", NILPOTENT_STRUCTURED)
def test_salamon_reverified(name, label):
    g, I = structure(name, label)
    sc = salamon_coframe(g, I)
    assert sc.n == g.dim // 2
    assert verify_salamon(g, sc)


def test_salamon_refuses_non_nilpotent():
    with pytest.raises(HypothesisError):
        salamon_coframe(*structure("aff-C", "I"))


@pytest.mark.parametrize("name, label", NILPOTENT_STRUCTURED)
def test_canonical_form_closed(name, label):
    res = d_canonical_check(*structure(name, label))
    assert res
    eta = res.value.eta
    assert eta.degree == res.value.coframe.split
    assert eta.bidegrees(res.value.coframe.split) == {(eta.degree, 0)}


@pytest.mark.parametrize("name, label", NILPOTENT_STRUCTURED)
def test_trace_lemma(name, label):
    assert not any(trace_J_ad(*structure(name, label)))


def test_theorem_ops_refuse_non_nilpotent():
    g, I = structure("aff-C", "J")
    with pytest.raises(HypothesisError):
        canonical_form(g, I)
    with pytest.raises(HypothesisError):
        trace_J_ad(g, I)
    # the statement really needs nilpotency: tr(J ad_X) is nonzero on aff(C)
    assert any(J_ad.trace() for J_ad in (I.matmul(m) for m in g.ad_matrices))


def test_dolbeault_torus_and_constants():
    g, I = structure("torus1", "I")
    assert dolbeault_cohomology_p0(g, I, 1).dimension == 2
    for name, label in STRUCTURED:
        assert dolbeault_cohomology_p0(*structure(name, label), 0).dimension == 1


def test_dolbeault_kodaira_hand_count():
    # omega1 = e^1 + i e^2, omega2 = e^3 + i e^4; d omega2 = -e^12 is of type (1,1),
    # so partial vanishes on Lambda^{1,0} and every (p,0) form is a cocycle
    g, J = structure("kodaira", "J")
    assert [dolbeault_cohomology_p0(g, J, p).dimension for p in range(3)] == [1, 2, 1]
