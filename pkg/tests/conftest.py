"""Shared fixtures and independent oracles.

Oracles here are written against textbook formulas, not against the
package internals: quantum integers as sine ratios, factorials as
explicit products, the classical 6j as an exact-rational Racah sum.
Tests compare package output to these, never to itself.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


def trig_qint(n, theta):
    """[n]_q = sin(n theta) / sin(theta) at q = e^{i theta} (float)."""
    return math.sin(n * theta) / math.sin(theta)


def trig_qint_mp(n, theta):
    from mpmath import mp
    return mp.sin(n * theta) / mp.sin(theta)


def trig_qfact_mp(n, theta):
    from mpmath import mp
    out = mp.mpf(1)
    for m in range(2, n + 1):
        out *= trig_qint_mp(m, theta)
    return out


def frac_fact(n):
    out = Fraction(1)
    for m in range(2, n + 1):
        out *= m
    return out


def racah_sixj_squared(tjs):
    """Exact rational ((6j)^2, sign) of the classical 6j symbol, by the
    Racah single-sum formula over ordinary factorials.

    Returns (square: Fraction, sign: -1/0/+1).
    """
    t = tjs

    def adm(ta, tb, tc):
        return ((ta + tb + tc) % 2 == 0 and abs(ta - tb) <= tc <= ta + tb)

    triads = ((t[0], t[1], t[2]), (t[0], t[4], t[5]),
              (t[1], t[3], t[5]), (t[2], t[3], t[4]))
    if not all(adm(*tr) for tr in triads):
        raise ValueError("inadmissible labels")
    delta_sq = Fraction(1)
    for ta, tb, tc in triads:
        s = (ta + tb + tc) // 2
        delta_sq *= (frac_fact(s - tc) * frac_fact(s - tb) * frac_fact(s - ta)
                     / frac_fact(s + 1))
    a = [sum(tr) // 2 for tr in triads]
    b = [(t[0] + t[1] + t[3] + t[4]) // 2,
         (t[0] + t[2] + t[3] + t[5]) // 2,
         (t[1] + t[2] + t[4] + t[5]) // 2]
    series = Fraction(0)
    for z in range(max(a), min(b) + 1):
        den = Fraction(1)
        for ai in a:
            den *= frac_fact(z - ai)
        for by in b:
            den *= frac_fact(by - z)
        series += Fraction((-1) ** z) * frac_fact(z + 1) / den
    sign = 0 if series == 0 else (1 if series > 0 else -1)
    return delta_sq * series * series, sign


def all_admissible_sixj(max_tj, level=None):
    import itertools
    from qcyclo import triangle_admissible
    out = []
    for t in itertools.product(range(max_tj + 1), repeat=6):
        if (triangle_admissible(t[0], t[1], t[2], level)
                and triangle_admissible(t[0], t[4], t[5], level)
                and triangle_admissible(t[1], t[3], t[5], level)
                and triangle_admissible(t[2], t[3], t[4], level)):
            out.append(t)
    return out


@pytest.fixture(scope="session")
def small_admissible():
    return all_admissible_sixj(6)
