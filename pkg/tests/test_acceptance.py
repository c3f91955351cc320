"""Acceptance criteria C1-C9, one test and one printed PASS/FAIL line each.

Run directly (``python3 tests/test_acceptance.py``) for just the lines, or
under pytest, where they are also collected into the terminal summary.
"""
import subprocess
import sys
import time

import pytest

from weakconc import verification

LINES = []


def _report(chk):
    line = chk.line()
    LINES.append(line)
    print(line)
    return chk


@pytest.mark.parametrize("k", range(1, 9))
def test_criterion(k):
    chk = _report(getattr(verification, f"criterion_{k}")())
    assert chk.passed, chk.detail


def test_criterion_9_verify_subcommand():
    t0 = time.perf_counter()
    p = subprocess.run([sys.executable, "-m", "weakconc", "verify"], capture_output=True, text=True, timeout=600)
    elapsed = time.perf_counter() - t0
    ok = p.returncode == 0 and elapsed < 120
    _report(verification.Check("C9 verify subcommand exits 0 in < 120 s", ok,
                               f"exit code {p.returncode}, {elapsed:.1f} s"))
    assert elapsed < 120, f"verify took {elapsed:.1f} s"
    assert p.returncode == 0, p.stdout[-2000:]


if __name__ == "__main__":
    ok = True
    for fn in verification.CRITERIA:
        ok &= _report(fn()).passed
    sys.exit(0 if ok else 1)
