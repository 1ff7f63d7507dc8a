"""The package against the independent sympy computations in ``oracles.py``."""

import oracles
import pytest
import sympy as sp
from conftest import random_qh_metrics

from nilgeo import catalog
from nilgeo.complex_structure import dolbeault_cohomology_p0
from nilgeo.hermitian import lefschetz_map
from nilgeo.hypercomplex import HypercomplexStructure
from nilgeo.linalg import ExactMatrix

CASES = [
    (n, s) for n in catalog.names() for s in catalog.get(n).structures
    if catalog.get(n).algebra.dim <= 12
]

# frozen from the oracle
FROZEN_DIMS = {
    ("aff-t3", "I"): [1, 4, 6, 4, 1],
    ("aff-A3", "I"): [1, 4, 8, 10, 8, 4, 1],
    ("aff-A3", "J"): [1, 4, 8, 10, 8, 4, 1],
    ("aff-A3", "K"): [1, 5, 11, 14, 11, 5, 1],
    # g^{1,0} is the complex Heisenberg algebra
    ("iwasawa", "I"): [1, 2, 2, 1],
}


def rows(M):
    return [[sp.Rational(x.numerator, x.denominator) for x in r] for r in M.rows]


def oracle_dims(g, I):
    frame = oracles.holomorphic_frame(rows(I))
    return oracles.cohomology_dims(oracles.sub_algebra_constants(g.structure_constants, g.dim, frame))


@pytest.mark.parametrize("name, label", CASES)
def test_dolbeault_dims_match_oracle(name, label):
    e = catalog.get(name)
    g, I = e.algebra, e.structures[label]
    ours = [dolbeault_cohomology_p0(g, I, p).dimension for p in range(g.dim // 2 + 1)]
    assert ours == oracle_dims(g, I)
    if (name, label) in FROZEN_DIMS:
        assert ours == FROZEN_DIMS[name, label]


@pytest.mark.parametrize(
    "name, i, metric, rotate",
    [("torus1", 1, "identity", 0), ("aff-t3", 1, "random", 0), ("aff-t3", 0, "random", 0),
     ("aff-A3", 1, "identity", 0), ("aff-A3", 1, "random", 0), ("aff-A3", 1, "identity", 2),
     ("aff-A3", 1, "random", 2)],
)
def test_lefschetz_rank_matches_oracle(name, i, metric, rotate):
    e = catalog.get(name)
    g = e.algebra
    t = e.hypercomplex.triple
    # rotate=2 makes K the distinguished structure: (K, I, J)
    H = HypercomplexStructure(g, *(t[(k + rotate) % 3] for k in range(3)))
    G = ExactMatrix.identity(g.dim) if metric == "identity" else random_qh_metrics(e, 1, seed=6)[0]
    ours = lefschetz_map(g, H, G, i)
    ref = oracles.lefschetz_rank(
        g.structure_constants, g.dim, *(rows(M) for M in H.triple), rows(G), i, g.dim // 4
    )
    assert (ours.source_dim, ours.map_rank) == (ref["source"], ref["map_rank"])
