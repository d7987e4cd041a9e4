"""Cyclotomic factorization of quantum integers and quantum factorials.

    [n]_q  = q^(1-n) * prod_{d | n, d > 1} Phi_d(q^2)
    [n]_q! = q^(n(1-n)/2) * prod_{d=2}^{n} Phi_d(q^2)^{floor(n/d)}

Both are returned as CycloMonomial values; nothing here ever touches a
field element.  Factorials are memoized since triangle coefficients reuse
the same arguments heavily (cache fills are idempotent, so a racing fill
is harmless).
"""

import functools

from .monomial import CycloMonomial


def divisors(n):
    """All divisors of n, ascending. Trial division; n stays small here."""
    if n < 1:
        raise ValueError("divisors requires n >= 1, got %d" % n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


@functools.cache
def qint_monomial(n):
    if n < 1:
        raise ValueError("quantum integer argument must be positive, got %d" % n)
    return CycloMonomial(1, 1 - n, {d: 1 for d in divisors(n) if d > 1})


@functools.cache
def qfact_monomial(n):
    if n < 0:
        raise ValueError("quantum factorial argument must be >= 0, got %d" % n)
    # floor(n/d) counts the multiples of d among 1..n, each contributing
    # one copy of Phi_d; the q-power telescopes to n(1-n)/2
    return CycloMonomial(1, n * (1 - n) // 2,
                         {d: n // d for d in range(2, n + 1)})


def clear_caches():
    qint_monomial.cache_clear()
    qfact_monomial.cache_clear()
