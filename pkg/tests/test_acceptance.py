"""Every acceptance criterion at its stated tolerance.

A failing test here is a genuine shortfall; the tolerances are not relaxed.
"""

import pytest

from coupledosc import verify


def _assert_all(results):
    failed = [r.line() for r in results if not r.passed]
    assert not failed, "\n".join(failed)


@pytest.mark.parametrize("number", sorted(verify.CRITERIA))
def test_criterion(number, record_checks):
    _assert_all(record_checks(verify.CRITERIA[number]()))


def test_ramsey_regime(record_checks):
    _assert_all(record_checks(verify.ramsey_check()))


@pytest.mark.parametrize("number", [1, 3, 4, 5, 6, 8])
def test_negative_control(number):
    # a tolerance far below the attainable accuracy must make the check fail
    results = verify.CRITERIA[number](tol=1e-30)
    assert not all(r.passed for r in results)
