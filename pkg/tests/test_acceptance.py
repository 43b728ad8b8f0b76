"""The twelve acceptance criteria at full size, one test each."""
import time

import pytest

from conftest import ACCEPTANCE
from quarticknots.suites import run_suite

CRITERIA = [
    (1, "Bezout bound on 10^4 canonical lines", "bezout", None, 60.0),
    (2, "infinite counts need deg g = 2 and a shared symmetry centre", "infinite", None, None),
    (3, "cubic relation-curve classification on 10^4 cubics", "cubic", None, None),
    (4, "scaling and translation equivariance on 10^3 lines", "equivariance", None, None),
    (5, "breakpoint orderings on 200 f in B", "orderings", None, 120.0),
    (6, "closed-form constants of t^4 - 14t^2 + 24t", "reference", None, None),
    (7, "heart/diamond fibers against the oracle, 50 f x 40 nabla, and fiber sequences", "fibers", None, None),
    (8, "D-cell thresholds to 1e-6 and 40-point fiber grid", "dcell", None, None),
    (9, "per-cell structure of three-condition lines", "cells", None, None),
    (10, "interior critical pair count, 50 f x 20 nabla", "lemma16", None, None),
    (11, "linking numbers of the orbit cycles and disk families", "linking", None, 60.0),
    (12, "discriminant membership on 10^3 planted maps", "sigma", None, None),
]


@pytest.mark.parametrize("number,title,suite,samples,budget", CRITERIA, ids=[c[2] for c in CRITERIA])
def test_criterion(number, title, suite, samples, budget):
    start = time.perf_counter()
    checks = run_suite(suite, seed=0, samples=samples)
    seconds = time.perf_counter() - start
    ok = bool(checks) and all(c.passed for c in checks)
    if budget is not None:
        ok = ok and seconds < budget
    ACCEPTANCE[number] = (title, ok, seconds)
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.1f}s)")
    for c in checks:
        print(f"  [{'PASS' if c.passed else 'FAIL'}] {c.id}  {c.detail}")
    failed = [c.id for c in checks if not c.passed]
    assert not failed, failed
    if budget is not None:
        assert seconds < budget, f"{seconds:.1f}s over the {budget:.0f}s budget"
