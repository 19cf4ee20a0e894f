"""One test per acceptance criterion; each prints a PASS/FAIL line with the
failing checks so the report reads on its own."""

import pytest

from qutritbell.acceptance import CRITERIA


@pytest.fixture(scope="module")
def results(acceptance_results, request):
    request.config._acceptance_results = acceptance_results
    return acceptance_results


@pytest.mark.parametrize("number", sorted(CRITERIA) + [10])
def test_criterion(results, number):
    r = results[number]
    print(f"ACCEPTANCE criterion {number}: {'PASS' if r.passed else 'FAIL'}  {r.title}")
    failed = [c for c in r.checks if not c.passed]
    for c in failed:
        print(f"    FAIL {c.name}: computed {c.computed:.12g} expected {c.expected:.12g} tol {c.tol:.3g}")
    assert not failed, "; ".join(c.name for c in failed)
