"""Numerical acceptance checks, one test per check, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.  The
tolerances live in ``genburgers.validation``; two checks are known to fail
(see README).
"""

import pytest

from genburgers.validation import CHECKS, run_check


@pytest.mark.parametrize("key", list(CHECKS), ids=[f"{k}-{f.__name__[6:]}" for k, f in CHECKS.items()])
def test_acceptance(key):
    res = run_check(key)
    print(f"\n{res.line()}  ({res.seconds:.1f}s)")
    assert res.passed, res.summary
