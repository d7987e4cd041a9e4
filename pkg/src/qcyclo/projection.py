"""Field projections of cyclotomic monomials and DCR evaluation.

A ProjectionContext fixes a target arithmetic (complex double, extended
binary precision, the exact field Q(zeta_2h), or the classical q -> 1
limit) together with a precomputed table of Phi_d(q^2) values.  Projecting
a monomial is then sigma * q^P * prod phi[d]^{e_d}; evaluating a DCR walks
the ratio chain, breaking early as soon as a ratio projects to zero, and
returns the amplitude as a pair (a, r) meaning a*sqrt(r).

The Phi table is built by the value recursion

    Phi_n(q^2) = (q^{2n} - 1) / prod_{d | n, d < n} Phi_d(q^2)

with an automatic fallback to Horner evaluation of the exact integer
coefficients whenever the recursion is ill-conditioned (|q^{2n} - 1|
below 1e-8 * n) or the arithmetic is the exact field, where the recursion
would hit 0/0 at multiples of h.  Horner results whose magnitude is below
the roundoff of the evaluation itself are snapped to an exact zero, which
is what lets double-precision root-of-unity contexts terminate early and
flag the vanishing index exactly like the exact field does.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpc, mpf

from .cyclofield import CycloField, CycloNumber, cyclotomic_coeffs


class PoleError(ArithmeticError):
    """A negative exponent at the vanishing cyclotomic index."""


class ProjectionRangeError(ArithmeticError):
    """Projection left the representable range of the target arithmetic."""


@dataclass(frozen=True)
class ComplexDouble:
    pass


@dataclass(frozen=True)
class ComplexExtended:
    bits: int

    def __post_init__(self):
        if self.bits < 53:
            raise ValueError("extended precision needs >= 53 bits, got %d" % self.bits)


@dataclass(frozen=True)
class RootOfUnityExact:
    h: int

    def __post_init__(self):
        if self.h < 3:
            raise ValueError("root-of-unity order h must be >= 3, got %d" % self.h)


@dataclass(frozen=True)
class Classical:
    pass


@dataclass(frozen=True)
class AmplitudeValue:
    """Amplitude a * sqrt(r); exact regimes satisfy A^2 = a^2 * r exactly.

    a already contains the integer half of the prefactor (a = root * S),
    so the branch of sqrt(r) is not free: the full prefactor root*sqrt(r)
    must be the principal square root of root^2 * r.  The root field
    carries the projected integer half alone so the branch can be fixed
    without squaring (root can over- or underflow when squared).
    """
    a: object
    r: object
    root: object = None


@dataclass(frozen=True)
class ClassicalValue:
    a: Fraction
    r: Fraction


class ProjectionContext:
    """Immutable bundle: field tag, q, Phi table, log10|Phi| table."""

    __slots__ = ("tag", "q", "phi", "log_phi", "d_max", "vanishing_index", "_field")

    def __init__(self, tag, q, phi, log_phi, d_max, vanishing_index=None, field=None):
        self.tag = tag
        self.q = q
        self.phi = phi
        self.log_phi = log_phi
        self.d_max = d_max
        self.vanishing_index = vanishing_index
        self._field = field


def unit_circle_q(h, tag):
    """q = e^{i pi / h} in the tag's arithmetic."""
    if isinstance(tag, ComplexDouble):
        return cmath.exp(1j * math.pi / h)
    if isinstance(tag, ComplexExtended):
        with mp.workprec(tag.bits):
            return mp.expjpi(mpf(1) / h)
    raise ValueError("unit_circle_q applies to numeric tags only")


def _divisor_lists(d_max):
    divs = [[] for _ in range(d_max + 1)]
    for d in range(1, d_max + 1):
        for n in range(d, d_max + 1, d):
            divs[n].append(d)
    return divs


def _horner(coeffs, x, one):
    acc = one * 0
    for c in reversed(coeffs):
        acc = acc * x + one * c
    return acc


def phi_table(q, d_max, tag):
    """Values Phi_d(q^2) for d = 1..d_max in the tag's arithmetic."""
    if isinstance(tag, ComplexExtended):
        with mp.workprec(tag.bits):
            return _phi_table_numeric(mpc(q), d_max, mpf(1), mp.eps)
    if isinstance(tag, ComplexDouble):
        return _phi_table_numeric(complex(q), d_max, 1.0, 2.0 ** -52)
    raise ValueError("phi_table handles numeric tags; exact tags build their own")


def _phi_table_numeric(q, d_max, one, eps):
    if q == 0:
        raise ValueError("q must be nonzero")
    x = q * q
    table = [None] * (d_max + 1)
    table[1] = x - one
    divs = _divisor_lists(d_max)
    for n in range(2, d_max + 1):
        top = x ** n - one
        if abs(top) < 1e-8 * n or any(table[d] == 0 for d in divs[n][:-1]):
            coeffs = cyclotomic_coeffs(n)
            v = _horner(coeffs, x, one)
            # below the roundoff of the Horner form the value is zero
            # to working precision: snap, so vanishing indices are exact
            if abs(v) <= 64 * eps * sum(abs(c) for c in coeffs):
                v = one * 0
            table[n] = v
        else:
            for d in divs[n][:-1]:
                top = top / table[d]
            table[n] = top
    return table


def _log10_table(phi):
    out = [None] * len(phi)
    for d, v in enumerate(phi):
        if v is None:
            continue
        av = abs(v)
        out[d] = float(mp.log10(av)) if isinstance(av, mpf) else (
            math.log10(av) if av > 0 else float("-inf"))
    return out


def _prime_power_base(d):
    """p when d = p^m, else None."""
    p = 2
    n = d
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return p if n == 1 else None
        p += 1
    return n  # n prime


def make_context(tag, d_max, q=None):
    d_max = max(d_max, 2)
    if isinstance(tag, (ComplexDouble, ComplexExtended)):
        if q is None:
            raise ValueError("numeric contexts need an explicit q")
        phi = phi_table(q, d_max, tag)
        log_phi = _log10_table(phi)
        vanish = next((d for d in range(2, d_max + 1) if phi[d] == 0), None)
        return ProjectionContext(tag, q, phi, log_phi, d_max, vanish)
    if isinstance(tag, RootOfUnityExact):
        fld = CycloField(tag.h)
        x = fld.q * fld.q
        phi = [None] * (d_max + 1)
        phi[1] = x - fld.one
        for d in range(2, d_max + 1):
            phi[d] = _horner(cyclotomic_coeffs(d), x, fld.one)
        log_phi = [None] * (d_max + 1)
        for d in range(1, d_max + 1):
            if phi[d].is_zero():
                log_phi[d] = float("-inf")
            else:
                log_phi[d] = float(mp.log10(abs(phi[d].embed(64))))
        vanish = tag.h if tag.h <= d_max else None
        return ProjectionContext(tag, fld.q, phi, log_phi, d_max, vanish, field=fld)
    if isinstance(tag, Classical):
        phi = [None] * (d_max + 1)
        phi[1] = Fraction(0)
        for d in range(2, d_max + 1):
            p = _prime_power_base(d)
            phi[d] = Fraction(p if p is not None else 1)
        log_phi = [None] + [math.log10(v) if v > 0 else float("-inf") for v in phi[1:]]
        return ProjectionContext(tag, None, phi, log_phi, d_max)
    raise ValueError("unknown field tag %r" % (tag,))


def root_of_unity_context(h, tag, d_max):
    """Numeric context at q = e^{i pi / h} covering indices up to d_max."""
    return make_context(tag, d_max, q=unit_circle_q(h, tag))


def vanishes_at(m, h):
    return m.exps.get(h) > 0


def project_monomial(m, ctx):
    if m.max_index() > ctx.d_max:
        raise ValueError("monomial index %d exceeds context d_max %d"
                         % (m.max_index(), ctx.d_max))
    tag = ctx.tag
    if isinstance(tag, RootOfUnityExact):
        h = tag.h
        eh = m.exps.get(h)
        if eh > 0:
            return ctx._field.zero
        if eh < 0:
            raise PoleError("inadmissible: pole at Phi_%d" % h)
        out = ctx._field.q_power(m.P)
        if m.sigma < 0:
            out = -out
        for d, e in m.exps.items():
            out = out * ctx.phi[d] ** e
        return out
    if isinstance(tag, Classical):
        out = Fraction(m.sigma)
        for d, e in m.exps.items():
            out *= ctx.phi[d] ** e
        return out
    # numeric regimes; a snapped zero in the table behaves like the exact field
    if ctx.vanishing_index is not None:
        eh = m.exps.get(ctx.vanishing_index)
        if eh > 0:
            return ctx.phi[ctx.vanishing_index] * 0
        if eh < 0:
            raise PoleError("inadmissible: pole at Phi_%d" % ctx.vanishing_index)
    if isinstance(tag, ComplexExtended):
        with mp.workprec(tag.bits):
            out = ctx.q ** m.P
            if m.sigma < 0:
                out = -out
            for d, e in m.exps.items():
                out = out * ctx.phi[d] ** e
            return out
    try:
        # complex ** int raises OverflowError rather than returning inf
        out = ctx.q ** m.P
        if m.sigma < 0:
            out = -out
        for d, e in m.exps.items():
            out = out * ctx.phi[d] ** e
    except OverflowError:
        raise ProjectionRangeError("projection overflowed double precision; "
                                   "use an extended-precision tag") from None
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise ProjectionRangeError(
            "projection overflowed double precision; use an extended-precision tag")
    return out


def _is_zero_value(v):
    if isinstance(v, CycloNumber):
        return v.is_zero()
    return v == 0


def evaluate(dcr, ctx):
    """Projected sum with early termination on a vanishing ratio,
    returned as AmplitudeValue(a = Pi(root) * sum, r = Pi(rad))."""
    if ctx.d_max < dcr.d_max:
        raise ValueError("context covers d <= %d but DCR needs %d"
                         % (ctx.d_max, dcr.d_max))
    if isinstance(ctx.tag, ComplexExtended):
        with mp.workprec(ctx.tag.bits):
            return _evaluate_loop(dcr, ctx)
    return _evaluate_loop(dcr, ctx)


def _evaluate_loop(dcr, ctx):
    term = project_monomial(dcr.base, ctx)
    total = term
    for rz in dcr.ratios:
        v = project_monomial(rz, ctx)
        if _is_zero_value(v):
            break  # every later term contains this vanishing factor
        term = term * v
        total = total + term
    root = project_monomial(dcr.root, ctx)
    a = root * total
    r = project_monomial(dcr.rad, ctx)
    if isinstance(ctx.tag, ComplexDouble):
        for v in (a, r):
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ProjectionRangeError(
                    "evaluation overflowed double precision; "
                    "use an extended-precision tag")
    return AmplitudeValue(a=a, r=r, root=root)


def _branch_sqrt(r, root, sqrt_fn):
    # sign of sqrt(r) such that root * sqrt(r) is the principal square
    # root of root^2 * r (right half plane, upper on the imaginary axis)
    w = sqrt_fn(r)
    if root is None:
        return w
    c = root * w
    if c.real < 0 or (c.real == 0 and c.imag < 0):
        return -w
    return w


def amplitude_to_complex(v, ctx, bits=256):
    """Numeric a * sqrt(r), the branch fixed by the root field."""
    a, r = v.a, v.r
    if isinstance(a, CycloNumber):
        with mp.workprec(bits):
            root = v.root.embed(bits) if v.root is not None else None
            return a.embed(bits) * _branch_sqrt(r.embed(bits), root, mp.sqrt)
    if isinstance(a, Fraction):
        root = complex(v.root) if v.root is not None else None
        return complex(a) * _branch_sqrt(complex(r), root, cmath.sqrt)
    if isinstance(ctx.tag, ComplexExtended):
        with mp.workprec(ctx.tag.bits):
            return a * _branch_sqrt(r, v.root, mp.sqrt)
    return a * _branch_sqrt(r, v.root, cmath.sqrt)


def classical_project(dcr):
    """Exact rational (a, r) at q = 1 via Phi_d(1) = p for prime powers."""
    ctx = make_context(Classical(), dcr.d_max)
    out = evaluate(dcr, ctx)
    return ClassicalValue(a=out.a, r=out.r)


def exact_field_eval(dcr, h):
    ctx = make_context(RootOfUnityExact(h), dcr.d_max)
    return evaluate(dcr, ctx)


def _mobius_sieve(n):
    mu = np.ones(n + 1, dtype=np.int64)
    primes = []
    is_comp = np.zeros(n + 1, dtype=bool)
    smallest = np.zeros(n + 1, dtype=np.int64)
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
            smallest[i] = i
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = True
            smallest[i * p] = p
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    mu[0] = 0
    return mu


class SweepEvaluator:
    """Log-domain double-precision projection of one DCR across many q.

    Both the Moebius inversion that turns log(q^{2d} - 1) into the
    cyclotomic logs and the contraction against each monomial's
    exponents are linear, so they fold at construction time into one
    small integer matrix F with

        F[m, d] = sum over multiples n of d up to d_max of
                  mu(n / d) * e_{m, n}

    and the log of monomial m at q is (w @ F.T)[m] + P_m log q
    + i pi [sigma_m < 0] with w_d = log(q^{2d} - 1).  A batch of q
    values then costs one cumulative product, one log, and two real
    matrix products.  Exactness of the integer exponents makes the
    complex-log branch ambiguity harmless: exp(e * log(x)) = x^e for
    integer e regardless of the branch chosen for log(x).
    """

    def __init__(self, dcr):
        self.dcr = dcr
        D = max(dcr.d_max, 2)
        self.d_max = D
        mu = _mobius_sieve(D)
        mob = np.zeros((D, D))
        for n in range(1, D + 1):
            for d in range(1, n + 1):
                if n % d == 0 and mu[n // d] != 0:
                    mob[n - 1, d - 1] = mu[n // d]
        # row order: base, ratios, root, rad
        monos = [dcr.base, *dcr.ratios, dcr.root, dcr.rad]
        E = np.zeros((len(monos), D))
        for i, m in enumerate(monos):
            for d, e in m.exps.items():
                E[i, d - 1] = e
        # entries are small integer combinations, exact in float64
        self._F = E @ mob
        self._P = np.array([m.P for m in monos], dtype=np.float64)
        self._neg = np.array([math.pi if m.sigma < 0 else 0.0 for m in monos])
        self._nratios = len(dcr.ratios)

    def amplitudes(self, qs):
        """Amplitude a * sqrt(r) for each q, as a complex array; the
        prefactor branch matches evaluate() (root * sqrt(rad) in the
        right half plane).  Points within the snap tolerance of a root
        of unity are rerouted through the scalar path, where vanishing
        indices snap exactly; there a pole comes back as NaN and double
        overflow as inf, so non-finite entries mark exactly those."""
        qs = np.asarray(qs, dtype=complex)
        logq = np.log(qs)
        R = self._nratios
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            pw = np.tile((qs * qs)[:, None], (1, self.d_max))
            np.multiply.accumulate(pw, axis=1, out=pw)  # q^2d, d = 1..d_max
            pw -= 1.0
            mag = np.abs(pw)
            hits = (mag < 1e-8 * np.arange(1, self.d_max + 1)).any(axis=1)
            rows_re = np.log(mag) @ self._F.T \
                + self._P[None, :] * logq.real[:, None]
            rows_im = np.arctan2(pw.imag, pw.real) @ self._F.T \
                + self._P[None, :] * logq.imag[:, None] + self._neg[None, :]
            rows = rows_re + 1j * rows_im
            lterms = rows[:, :1 + R].cumsum(axis=1)
            total = np.exp(lterms).sum(axis=1)
            pref = np.exp(rows[:, 1 + R] + 0.5 * rows[:, 2 + R])
            flip = (pref.real < 0) | ((pref.real == 0) & (pref.imag < 0))
            out = np.where(flip, -pref, pref) * total
        if hits.any():
            # on the lattice the log-domain kernels see roundoff instead of
            # exact zeros; the table-based path snaps them
            for i in np.nonzero(hits)[0]:
                out[i] = self._scalar_point(complex(qs[i]))
        return out

    def _scalar_point(self, q):
        ctx = make_context(ComplexDouble(), self.d_max, q=q)
        try:
            return complex(amplitude_to_complex(evaluate(self.dcr, ctx), ctx))
        except PoleError:
            return complex(float("nan"), float("nan"))
        except ProjectionRangeError:
            return complex(float("inf"), float("inf"))
