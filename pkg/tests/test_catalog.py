import pytest

from nilgeo import catalog
from nilgeo.catalog import (
    AssociativeAlgebra,
    CatalogEntry,
    aff,
    complex_numbers,
    strictly_upper_triangular,
    truncated_polynomials,
)
from nilgeo.complex_structure import (
    d_canonical_check,
    is_abelian_structure,
    is_integrable,
)
from nilgeo.errors import StructureError
from nilgeo.lie import LieAlgebra, jacobi_check


def unit(A, p):
    return A.unit_vector(p)


def test_strictly_upper_triangular():
    A2 = strictly_upper_triangular(2)
    assert A2.dim == 1 and not any(A2.multiply(unit(A2, 0), unit(A2, 0)))
    A3 = strictly_upper_triangular(3)
    assert A3.dim == 3
    names = list(A3.names)
    e12, e23, e13 = (names.index(n) for n in ("E12", "E23", "E13"))
    assert A3.multiply(unit(A3, e12), unit(A3, e23)) == unit(A3, e13)
    nonzero = [(p, q) for p in range(3) for q in range(3) if any(A3.multiply(unit(A3, p), unit(A3, q)))]
    assert nonzero == [(e12, e23)]
    A4 = strictly_upper_triangular(4)
    assert A4.dim == 6 and A4.nilpotency_index() == 3


def test_truncated_polynomials():
    T2 = truncated_polynomials(2)
    assert not any(T2.multiply(unit(T2, 0), unit(T2, 0)))
    T3 = truncated_polynomials(3)
    t, t2 = unit(T3, 0), unit(T3, 1)
    assert T3.multiply(t, t) == t2
    assert not any(T3.multiply(t, t2))
    T4 = truncated_polynomials(4)
    t, t2, t3 = (unit(T4, p) for p in range(3))
    assert T4.multiply(t, t) == t2 and T4.multiply(t, t2) == t3
    assert not any(T4.multiply(t2, t2))
    assert T3.is_commutative() and not strictly_upper_triangular(3).is_commutative()


def test_associativity_enforced():
    with pytest.raises(StructureError):
        # x*x = y, x*y = x, y*x = 0 is not associative: (xx)x = yx = 0 but x(xx) = xy = x
        AssociativeAlgebra(2, {(0, 0): {1: 1}, (0, 1): {0: 1}})


@pytest.mark.parametrize(
    "A, dim, step, abelian",
    [
        (strictly_upper_triangular(2), 4, 1, True),
        (truncated_polynomials(3), 8, 2, True),
        (strictly_upper_triangular(3), 12, 2, False),
        (strictly_upper_triangular(4), 24, 3, False),
    ],
)
def test_aff(A, dim, step, abelian):
    g, H = aff(A)
    assert g.dim == 4 * A.dim == dim
    assert jacobi_check(g)
    assert g.nilpotency_step == step
    if step == 1:
        assert g.is_abelian()
    assert is_abelian_structure(g, H.J).ok is abelian


def test_aff_t3_single_surviving_bracket_pattern():
    g, _ = aff(truncated_polynomials(3))
    # every bracket pairs an a-copy with a b-copy and lands in the b-copy
    for (x, y), row in g.structure_constants.items():
        assert g.basis_names[x].startswith("a:") and g.basis_names[y].startswith("b:")
        assert all(g.basis_names[k].startswith("b:") for k in row)


def test_aff_non_nilpotent():
    g, H = aff(complex_numbers())
    assert g.dim == 4 and not g.is_nilpotent
    assert all(is_integrable(g, S) for S in H.triple)


def test_named_entries():
    k = catalog.get("kodaira")
    assert k.algebra.nilpotency_step == 2 and k.manifest["abelian"] == {"J": True}
    iw = catalog.get("iwasawa")
    assert is_integrable(iw.algebra, iw.structures["I"])
    assert not is_abelian_structure(iw.algebra, iw.structures["I"])
    assert d_canonical_check(iw.algebra, iw.structures["I"])
    t = catalog.get("torus1")
    assert t.algebra.is_abelian() and t.manifest["hkt"]


def test_unknown_entry():
    with pytest.raises(KeyError):
        catalog.get("nope")


def test_manifest_mismatch_is_an_error():
    g = LieAlgebra(4, {(0, 1): {2: 1}})
    with pytest.raises(StructureError, match="manifest mismatch"):
        CatalogEntry("bad", g, manifest={"nilpotency_step": 3})


@pytest.mark.parametrize("name", catalog.names())
def test_manifest_rederived(name):
    e = catalog.get(name)
    assert e.verify_manifest() == {}
    if e.hypercomplex is not None:
        assert e.algebra.dim % 4 == 0


@pytest.mark.parametrize("A, index", [
    (strictly_upper_triangular(2), 1), (strictly_upper_triangular(3), 2),
    (truncated_polynomials(3), 2), (truncated_polynomials(4), 3),
])
def test_nilpotency_index(A, index):
    assert A.nilpotency_index() == index
    assert complex_numbers().nilpotency_index() is None
