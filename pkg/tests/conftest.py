"""Shared fixtures: independent reference data and the acceptance reporter.

The classical partition numbers here come from Euler's pentagonal-number
recurrence, implemented in the test suite only, so that the library's
divisor-sum recurrence is checked against genuinely independent code.
"""

import pytest

_CLASSICAL_LIMIT = 10000

_ACCEPTANCE_LINES = []


def _pentagonal_partitions(limit):
    # p(n) = sum_j (-1)^(j-1) [p(n - j(3j-1)/2) + p(n - j(3j+1)/2)]
    p = [0] * (limit + 1)
    p[0] = 1
    for n in range(1, limit + 1):
        total = 0
        j = 1
        while True:
            g1 = j * (3 * j - 1) // 2
            if g1 > n:
                break
            sign = -1 if j % 2 == 0 else 1
            total += sign * p[n - g1]
            g2 = j * (3 * j + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            j += 1
        p[n] = total
    return p


@pytest.fixture(scope="session")
def classical_p():
    """Classical p(0..10000) from the pentagonal recurrence (test-only oracle)."""
    return _pentagonal_partitions(_CLASSICAL_LIMIT)


@pytest.fixture(scope="session")
def coeff_cache():
    """Memoized oracle tables keyed by (alpha text, N, decimal digits)."""
    from fracpart import oracle
    from fracpart.numkernel import DEFAULT_PRECISION, as_alpha

    cache = {}

    def get(alpha, upto, prec=DEFAULT_PRECISION):
        alpha = as_alpha(alpha)
        key = (alpha.key(), upto, prec.decimal_digits)
        if key not in cache:
            cache[key] = oracle.coeffs(alpha, upto, prec)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def criterion():
    """Reporter for the acceptance suite: one [PASS]/[FAIL] line per criterion."""

    def report(num, desc, ok, detail=""):
        line = "[%s] criterion %d: %s" % ("PASS" if ok else "FAIL", num, desc)
        if detail:
            line += " -- " + detail
        _ACCEPTANCE_LINES.append((num, line))
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
