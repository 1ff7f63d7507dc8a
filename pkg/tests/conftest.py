import os
import random
import sys
import time

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from nilgeo import catalog
from nilgeo.hermitian import su2_average
from nilgeo.linalg import ExactMatrix

settings.register_profile(
    "nilgeo", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "nilgeo"))


def random_pd(n, rng, spread=3):
    """M^T M + Id with small integer M: rational and positive definite."""
    M = ExactMatrix([[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)])
    return M.transpose().matmul(M) + ExactMatrix.identity(n)


def random_qh_metrics(entry, count, seed=0):
    rng = random.Random(seed)
    H = entry.hypercomplex
    return [su2_average(random_pd(entry.algebra.dim, rng), H) for _ in range(count)]


@pytest.fixture(scope="session")
def entries():
    return {n: catalog.get(n) for n in catalog.names()}


# -- acceptance summary ------------------------------------------------------

SUITE_LIMIT = 300.0


def pytest_configure(config):
    config.acceptance = {}


def pytest_sessionstart(session):
    session.config.started = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    config = session.config
    config.suite_seconds = time.perf_counter() - config.started
    if config.acceptance and config.suite_seconds >= SUITE_LIMIT and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.acceptance
    if not results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(results, key=lambda k: (int(k.split()[0]), k)):
        parts = results[key]
        ok = all(p["ok"] for p in parts)
        seconds = sum(p["seconds"] for p in parts)
        notes = "; ".join(f"{p['part']}: {p['note']}" for p in parts if p["note"])
        tr.write_line(f"criterion {key:<4} {'PASS' if ok else 'FAIL'}  {seconds:6.2f} s  {parts[0]['title']}"
                      + (f"  ({notes})" if notes else ""))
    total = config.suite_seconds
    verdict = "PASS" if total < SUITE_LIMIT else "FAIL"
    tr.write_line(f"suite runtime {verdict}  {total:.1f} s (limit {SUITE_LIMIT:.0f} s)")
