import random
from fractions import Fraction

import pytest
from conftest import random_pd, random_qh_metrics
from hypothesis import given, settings
from hypothesis import strategies as st

from nilgeo import catalog
from nilgeo.errors import HypothesisError, StructureError
from nilgeo.hermitian import (
    Metric,
    abelian_equivalence_check,
    bismut,
    bismut_abelian,
    canonical_torsion_theta,
    hkt_check,
    hkt_metric_space,
    is_hermitian,
    is_positive_definite,
    leading_minors,
    lee_form,
    lee_form_abelian,
    lefschetz_map,
    levi_civita,
    omega_form,
    probe_positive_definite,
    quaternionic_balanced_check,
    su2_average,
    torsion_form,
)
from nilgeo.hypercomplex import HALF, HypercomplexStructure
from nilgeo.lie import LieAlgebra
from nilgeo.linalg import ExactMatrix

ABELIAN_HYPER = ["torus1", "torus2", "aff-A2", "aff-t3"]


def hyper(name):
    e = catalog.get(name)
    return e.algebra, e.hypercomplex


def pd_matrices(n):
    return st.integers(0, 10 ** 6).map(lambda seed: random_pd(n, random.Random(seed)))


# -- metrics ---------------------------------------------------------------

def test_leading_minors_and_pd():
    G = ExactMatrix([[2, 1, 0], [1, 2, 1], [0, 1, 2]])
    assert leading_minors(G) == [2, 3, 4]
    assert is_positive_definite(G)
    bad = ExactMatrix([[1, 2], [2, 1]])
    assert is_positive_definite(bad).witness == 2


def test_metric_errors_name_the_problem():
    with pytest.raises(StructureError, match=r"\(1,2\) and \(2,1\)"):
        Metric(ExactMatrix([[1, 2], [3, 1]]))
    with pytest.raises(StructureError, match="leading minor 1"):
        Metric(ExactMatrix([[-1, 0], [0, 1]]))


@given(pd_matrices(12))
def test_su2_average_properties(G):
    _, H = hyper("aff-A3")
    A = su2_average(G, H)
    assert all(is_hermitian(A, S) for S in H.triple)
    assert is_positive_definite(A)
    assert su2_average(A, H) == A


def test_su2_average_identity_unchanged():
    _, H = hyper("aff-A3")
    assert su2_average(ExactMatrix.identity(12), H) == ExactMatrix.identity(12)


# -- Omega and HKT ---------------------------------------------------------

def test_omega_flat_h1():
    _, H = hyper("torus1")
    data = omega_form(ExactMatrix.identity(4), H)
    assert data.pure_20 and data.nondegenerate
    assert data.q == 1


@pytest.mark.parametrize("name", ["aff-t3", "aff-A3"])
def test_omega_type(name):
    _, H = hyper(name)
    for G in random_qh_metrics(catalog.get(name), 3, seed=1):
        data = omega_form(G, H)
        assert data.omega.bidegrees(data.coframe.split) == {(2, 0)}
        assert data.nondegenerate


def test_omega_needs_hermitian_metric():
    _, H = hyper("aff-A3")
    with pytest.raises(StructureError):
        omega_form(random_pd(12, random.Random(3)), H)


def test_hkt_torus_is_hyperkahler():
    _, H = hyper("torus2")
    res = hkt_check(ExactMatrix.identity(8), H)
    assert res and res.hyperkahler


@settings(max_examples=15)
@given(pd_matrices(8))
def test_hkt_any_metric_on_abelian(G):
    _, H = hyper("aff-t3")
    res = hkt_check(su2_average(G, H), H)
    assert res
    assert not res.hyperkahler


def test_hkt_fails_on_aff_a3():
    _, H = hyper("aff-A3")
    res = hkt_check(ExactMatrix.identity(12), H)
    assert not res
    # frozen residual for the identity metric (first two terms)
    first = sorted(res.partial_omega.terms.items())[:2]
    assert [(k, str(v)) for k, v in first] == [((0, 2, 5), "-1/2i"), ((0, 3, 4), "1/2i")]


@pytest.mark.parametrize("name, full", [("torus1", True), ("aff-t3", True), ("aff-A3", False)])
def test_hkt_metric_space(name, full):
    _, H = hyper(name)
    sp = hkt_metric_space(H)
    assert sp.is_full is full
    for h in sp.solutions:
        assert all(is_hermitian(h, S) for S in H.triple)
    if full:
        assert sp.pd_example is not None
    else:
        assert sp.dimension < sp.hermitian_dim
        assert sp.pd_example is None
        assert sp.probe_verdict == "none found within search bound"


def test_probe_order_and_cap():
    basis = [ExactMatrix([[1, 0], [0, -1]]), ExactMatrix([[0, 0], [0, 1]])]
    found, tried = probe_positive_definite(basis)
    # Id = b1 + 2 b2 has L1 norm 3; the 12 candidates of norm 1 and 2 come first
    assert found == ExactMatrix([[1, 0], [0, 1]])
    assert 12 < tried <= 24
    assert probe_positive_definite(basis, cap=1) == (None, 1)


# -- connections -----------------------------------------------------------

def test_levi_civita_heisenberg():
    g = catalog.heisenberg()
    lc = levi_civita(g, ExactMatrix.identity(4))
    e = g.basis_vector
    assert lc.nabla(e(0), e(1)) == (0, 0, HALF, 0)
    assert lc.nabla(e(0), e(2)) == (0, -HALF, 0, 0)
    assert lc.nabla(e(1), e(2)) == (HALF, 0, 0, 0)
    assert lc.torsion_check() and lc.metric_check(ExactMatrix.identity(4))


def test_levi_civita_abelian_zero():
    assert levi_civita(LieAlgebra(4, {}), ExactMatrix.identity(4)).is_flat_zero()


@pytest.mark.parametrize("name", ["kodaira", "iwasawa", "aff-t3", "aff-A3"])
def test_levi_civita_defining_identities(name):
    e = catalog.get(name)
    G = random_pd(e.algebra.dim, random.Random(5))
    lc = levi_civita(e.algebra, G)
    assert lc.torsion_check() and lc.metric_check(G)


def test_bismut_kahler_case():
    g, H = hyper("torus1")
    data = bismut(g, ExactMatrix.identity(4), H.I)
    assert data.connection.is_flat_zero()
    assert not any(data.torsion.values())


def test_bismut_kodaira_matches_abelian_formula():
    e = catalog.get("kodaira")
    J = e.structures["J"]
    G = ExactMatrix.identity(4)
    data = bismut(e.algebra, G, J)
    assert data.connection == bismut_abelian(e.algebra, G, J)
    assert any(data.torsion.values())


@pytest.mark.parametrize("name", ["aff-t3", "torus2"])
def test_bismut_abelian_every_structure(name):
    g, H = hyper(name)
    for G in random_qh_metrics(catalog.get(name), 2, seed=7):
        for S in H.triple:
            assert bismut(g, G, S).connection == bismut_abelian(g, G, S)


def test_bismut_postconditions_aff_a3():
    g, H = hyper("aff-A3")
    G = su2_average(random_pd(12, random.Random(11)), H)
    conn = bismut(g, G, H.I).connection
    assert conn.metric_check(G) and conn.parallel_check(H.I)
    c = torsion_form(g, G, H.I)
    assert all(c[(a, b, d)] == -c[(b, a, d)] == c[(b, d, a)] for (a, b, d) in c)


def test_bismut_needs_hermitian():
    g, H = hyper("aff-A3")
    with pytest.raises(StructureError):
        bismut(g, random_pd(12, random.Random(2)), H.I)


# -- Lee forms -------------------------------------------------------------

def test_lee_kahler_zero():
    g, H = hyper("torus1")
    assert lee_form(g, ExactMatrix.identity(4), H.I).is_zero()


def test_lee_kodaira_abelian_formula():
    e = catalog.get("kodaira")
    J = e.structures["J"]
    for G in (ExactMatrix.identity(4), ExactMatrix([[2, 0, 1, 0], [0, 2, 0, 1], [1, 0, 3, 0], [0, 1, 0, 3]])):
        lee = lee_form(e.algebra, G, J)
        assert lee.route_adjoint == lee.route_contraction
        assert lee_form_abelian(e.algebra, G, J) == lee.theta
    # identity metric: omega = -e^12 - e^34, d omega = e^124 = theta ^ omega forces theta = -e^4
    assert lee_form(e.algebra, ExactMatrix.identity(4), J).theta == (0, 0, 0, -1)


@pytest.mark.parametrize("name", ["aff-t3", "torus2"])
def test_lee_abelian_formula_every_structure(name):
    g, H = hyper(name)
    for G in random_qh_metrics(catalog.get(name), 2, seed=13):
        for S in H.triple:
            assert lee_form_abelian(g, G, S) == lee_form(g, G, S).theta


def test_lee_routes_agree_on_aff_a3_with_nonzero_theta():
    g, H = hyper("aff-A3")
    seen_nonzero = False
    for G in random_qh_metrics(catalog.get("aff-A3"), 3, seed=4):
        for S in H.triple:
            lee = lee_form(g, G, S)  # raises on disagreement
            seen_nonzero = seen_nonzero or not lee.is_zero()
    assert seen_nonzero


def test_lee_identity_metric_aff_a3_frozen():
    g, H = hyper("aff-A3")
    assert lee_form(g, ExactMatrix.identity(12), H.I).is_zero()


def test_lee_refuses_non_unimodular():
    g, H = hyper("aff-C")
    with pytest.raises(HypothesisError):
        lee_form(g, ExactMatrix.identity(4), H.I)


@pytest.mark.parametrize("name", ABELIAN_HYPER)
def test_quaternionic_balanced(name):
    g, H = hyper(name)
    for G in random_qh_metrics(catalog.get(name), 3, seed=9):
        assert quaternionic_balanced_check(g, G, H)


def test_balanced_value_recorded_on_aff_a3():
    g, H = hyper("aff-A3")
    G = su2_average(random_pd(12, random.Random(4)), H)
    res = quaternionic_balanced_check(g, G, H)
    assert set(res.value) == {"I", "J", "K"}


# -- theta and Lefschetz ---------------------------------------------------

@pytest.mark.parametrize("name", ["torus1", "aff-t3", "aff-A3"])
def test_canonical_torsion_theta_zero(name):
    g, H = hyper(name)
    G = random_qh_metrics(catalog.get(name), 1, seed=2)[0]
    assert canonical_torsion_theta(g, H, G).is_zero()


def test_lefschetz_h1():
    g, H = hyper("torus1")
    d = lefschetz_map(g, H, ExactMatrix.identity(4), 1)
    assert (d.source_dim, d.target_dim, d.map_rank) == (2, 2, 2)
    assert d.isomorphism and d.well_defined


@pytest.mark.parametrize("i", range(3))
def test_lefschetz_aff_t3_isomorphism(i):
    g, H = hyper("aff-t3")
    G = random_qh_metrics(catalog.get("aff-t3"), 1, seed=3)[0]
    d = lefschetz_map(g, H, G, i)
    assert d.well_defined and d.isomorphism


def test_lefschetz_aff_a3_degree_one():
    # rank data frozen from the sympy oracle (tests/oracles.py)
    g, H = hyper("aff-A3")
    d = lefschetz_map(g, H, ExactMatrix.identity(12), 1)
    assert (d.source_dim, d.target_dim, d.map_rank) == (4, 4, 4)
    assert d.well_defined


def test_lefschetz_aff_a3_k_distinguished_not_surjective():
    # with K(a,b) = (-ia, ib) in the role of I, g^{1,0} is aff(A_3) itself
    g, H = hyper("aff-A3")
    d = lefschetz_map(g, HypercomplexStructure(g, H.K, H.I, H.J), ExactMatrix.identity(12), 1)
    assert (d.source_dim, d.target_dim, d.map_rank) == (5, 5, 4)
    assert d.well_defined and not d.surjective


def test_lefschetz_aff_a3_degree_two_not_well_defined():
    g, H = hyper("aff-A3")
    assert not lefschetz_map(g, H, ExactMatrix.identity(12), 2).well_defined


@pytest.mark.parametrize("name, expected", [("aff-t3", True), ("aff-A3", False), ("torus1", True)])
def test_abelian_equivalence(name, expected):
    g, H = hyper(name)
    res = abelian_equivalence_check(g, H)
    assert res
    assert set(res.value.values()) == {expected}


def test_half_is_exact():
    assert HALF == Fraction(1, 2)
