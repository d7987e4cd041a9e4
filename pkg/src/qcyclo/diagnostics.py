"""Eager log-sum-exp baseline and conditioning diagnostics.

The baseline evaluates the 6j the pre-compilation way: precomputed
logarithmic quantum-integer tables, cumulative log-factorials, and a
signed log-sum-exp over z where each summand is formed by the single
floating-point subtraction log T_z = log N_z - log D_z.  The exact
grouping of those log-domain operations is fixed (see lse_eval_sixj);
at the catastrophic-cancellation edge the output is a roundoff
realization, so the grouping is part of the baseline's definition.

Diagnostics quantify the cancellation: kappa = sum|T_z| / |S| (decimal
digits lost), delta_loss = log10(max|T_z| / |S|), and the dynamic-range
amplification gamma of a representation:

    gamma = max_z (log10|N_z| + log10|D_z|)

with N_z, D_z the unreduced numerator/denominator of the z-th summand.
For the eager representation these are the raw quantum-factorial
products of the series part (the triangle prefactor is a global factor
and drops out of the max); for the DCR they are the positive- and
negative-exponent parts of the cumulative reduced monomials that the
projection loop actually touches.  T_z here includes the global
prefactor, so |S| is the full amplitude.
"""

import math
from dataclasses import dataclass

from mpmath import mp, mpf

from . import compiler, projection, qfactor
from .compiler import SixJLabels, compile_sixj, sixj_descriptor
from .statesum import canonical_sixj


def log_qint_table(h, n_max):
    """log([n]_q) = log sin(n pi/h) - log sin(pi/h) for n = 1..n_max,
    plus cumulative log-factorial prefix sums, in double precision.
    Index 0 holds log([0]) = 0 by convention ([0]! = 1)."""
    if h < 3:
        raise ValueError("root order h must be >= 3, got %d" % h)
    if n_max >= h:
        raise ValueError("quantum integer [%d] vanishes at h=%d" % (n_max, h))
    ls1 = math.log(math.sin(math.pi / h))
    logq = [0.0] * (n_max + 1)
    for n in range(1, n_max + 1):
        logq[n] = math.log(math.sin(n * math.pi / h)) - ls1
    lfact = [0.0] * (n_max + 1)
    for n in range(1, n_max + 1):
        lfact[n] = lfact[n - 1] + logq[n]
    return logq, lfact


def _log_qint_table_mp(h, n_max):
    # same tables under the ambient mpmath precision
    ls1 = mp.log(mp.sinpi(mpf(1) / h))
    logq = [mpf(0)] * (n_max + 1)
    for n in range(1, n_max + 1):
        logq[n] = mp.log(mp.sinpi(mpf(n) / h)) - ls1
    lfact = [mpf(0)] * (n_max + 1)
    for n in range(1, n_max + 1):
        lfact[n] = lfact[n - 1] + logq[n]
    return logq, lfact


def _sixj_arrays(labels):
    desc = sixj_descriptor(labels)
    z_min, z_max = max(desc.a), min(desc.b)
    return desc, z_min, z_max


def lse_eval_sixj(labels, h, precision="double"):
    """Signed log-sum-exp evaluation of the 6j at q = e^{i pi/h}.

    precision is "double" or an integer bit count.  The double path fixes
    one specific operation order: the prefactor log is folded into each
    term, the denominator logs are accumulated (a-arguments then
    b-arguments) and subtracted once, and the max-shifted signed
    accumulation runs in ascending z.
    """
    desc, z_min, z_max = _sixj_arrays(labels)
    if precision == "double":
        return _lse_double(desc, h, z_min, z_max)
    with mp.workprec(int(precision)):
        return _lse_mp(desc, h, z_min, z_max)


def _lse_double(desc, h, z_min, z_max):
    if z_max + 1 >= h:
        raise ValueError("summand factorial [%d]! vanishes at h=%d; "
                         "labels exceed the level" % (z_max + 1, h))
    _, lf = log_qint_table(h, z_max + 1)
    tj = desc.labels.as_tuple()
    lpre = 0.0
    for i, j, k in compiler.TRIADS:
        ta, tb, tc = tj[i], tj[j], tj[k]
        lpre += 0.5 * (lf[(ta + tb - tc) // 2] + lf[(ta - tb + tc) // 2]
                       + lf[(-ta + tb + tc) // 2] - lf[(ta + tb + tc) // 2 + 1])
    logs, signs = [], []
    for z in range(z_min, z_max + 1):
        lnum = lf[z + 1]
        lden = 0.0
        for ai in desc.a:
            lden += lf[z - ai]
        for by in desc.b:
            lden += lf[by - z]
        logs.append(lpre + lnum - lden)
        signs.append(1.0 if z % 2 == 0 else -1.0)
    m = max(logs)
    acc = 0.0
    for lt, s in zip(logs, signs):
        acc += s * math.exp(lt - m)
    return math.exp(m) * acc


def _lse_mp(desc, h, z_min, z_max):
    _, lf = _log_qint_table_mp(h, z_max + 1)
    tj = desc.labels.as_tuple()
    lpre = mpf(0)
    for i, j, k in compiler.TRIADS:
        ta, tb, tc = tj[i], tj[j], tj[k]
        lpre += (lf[(ta + tb - tc) // 2] + lf[(ta - tb + tc) // 2]
                 + lf[(-ta + tb + tc) // 2] - lf[(ta + tb + tc) // 2 + 1]) / 2
    acc = mpf(0)
    for z in range(z_min, z_max + 1):
        lden = mpf(0)
        for ai in desc.a:
            lden += lf[z - ai]
        for by in desc.b:
            lden += lf[by - z]
        t = mp.exp(lpre + lf[z + 1] - lden)
        acc += -t if z % 2 else t
    return acc


@dataclass(frozen=True)
class Diagnostics:
    kappa: float
    delta_loss: float
    gamma_eager: float
    gamma_dcr: float
    max_term: float
    abs_sum: float
    value: float


def diagnostics_sixj(labels, h, bits=512):
    """Term-level conditioning of the 6j sum at q = e^{i pi/h}.

    Terms T_z carry the full triangle prefactor, so abs_sum/|S| is the
    condition number of the amplitude itself.  gamma_eager ranges over
    the unreduced factorial products of the series summand; gamma_dcr
    over the cumulative reduced monomials of the compiled DCR, weighted
    by log10|Phi_d(q^2)| (the unit-circle q-power contributes nothing).
    """
    desc, z_min, z_max = _sixj_arrays(labels)
    tj = desc.labels.as_tuple()
    with mp.workprec(bits):
        _, lf = _log_qint_table_mp(h, z_max + 1)
        lpre = mpf(0)
        for i, j, k in compiler.TRIADS:
            ta, tb, tc = tj[i], tj[j], tj[k]
            lpre += (lf[(ta + tb - tc) // 2] + lf[(ta - tb + tc) // 2]
                     + lf[(-ta + tb + tc) // 2] - lf[(ta + tb + tc) // 2 + 1]) / 2
        value = mpf(0)
        abs_sum = mpf(0)
        max_term = mpf(0)
        ge = mpf("-inf")
        log10e = mp.log10(mp.e)
        for z in range(z_min, z_max + 1):
            lden = mpf(0)
            for ai in desc.a:
                lden += lf[z - ai]
            for by in desc.b:
                lden += lf[by - z]
            t = mp.exp(lpre + lf[z + 1] - lden)
            value += -t if z % 2 else t
            abs_sum += t
            max_term = max(max_term, t)
            ge = max(ge, (lf[z + 1] + lden) * log10e)
        kappa = abs_sum / abs(value)
        delta = mp.log10(max_term / abs(value))
    gd = _gamma_dcr(labels, h, bits=min(bits, 256))
    return Diagnostics(kappa=float(kappa), delta_loss=float(delta),
                       gamma_eager=float(ge), gamma_dcr=gd,
                       max_term=float(max_term), abs_sum=float(abs_sum),
                       value=float(value))


def _gamma_dcr(labels, h, bits=256):
    dcr = compile_sixj(labels)
    tag = projection.ComplexExtended(bits)
    ctx = projection.make_context(tag, dcr.d_max,
                                  q=projection.unit_circle_q(h, tag))
    lphi = ctx.log_phi
    exps = dict(dcr.base.exps.items())
    best = _gamma_of(exps, lphi)
    for rz in dcr.ratios:
        for d, e in rz.exps.items():
            w = exps.get(d, 0) + e
            if w:
                exps[d] = w
            else:
                exps.pop(d, None)
        best = max(best, _gamma_of(exps, lphi))
    return best


def _gamma_of(exps, lphi):
    num = sum(e * lphi[d] for d, e in exps.items() if e > 0)
    den = sum(-e * lphi[d] for d, e in exps.items() if e < 0)
    return num + den


def dcr_eval_sixj(labels, h, tag):
    """Amplitude of the 6j at q = e^{i pi/h} through the compiled path."""
    dcr = compile_sixj(labels)
    ctx = projection.make_context(tag, dcr.d_max,
                                  q=projection.unit_circle_q(h, tag))
    return projection.amplitude_to_complex(projection.evaluate(dcr, ctx), ctx)


class _SixJTable:
    """Cache of 6j amplitudes at one root-of-unity context, keyed by the
    canonical representative under the 24 tetrahedral symmetries."""

    def __init__(self, h, bits):
        self.h = h
        self.k = h - 2
        self.tag = projection.ComplexExtended(bits)
        # largest factorial argument is b_max + 1 <= 2k + 1
        self.ctx = projection.root_of_unity_context(
            h, self.tag, d_max=2 * self.k + 2)
        self._vals = {}

    def qint(self, n):
        return projection.project_monomial(qfactor.qint_monomial(n), self.ctx)

    def sixj(self, tjs):
        key = canonical_sixj(tjs)
        v = self._vals.get(key)
        if v is None:
            dcr = compile_sixj(SixJLabels(*key))
            v = projection.amplitude_to_complex(
                projection.evaluate(dcr, self.ctx), self.ctx)
            self._vals[key] = v
        return v


def _x_terms(pairs, k):
    """Interior summation labels x for given coupled pairs.

    Returns the level-admissible x list, or None when some x is
    triangle-admissible but exceeds the level: the raw series has a
    pole there and its finite limit is dropped by truncation, so the
    instance is outside the truncated theory and must be skipped.
    """
    xs = []
    top = min(ta + tb for ta, tb in pairs)
    for x in range(0, top + 1):
        if all(compiler.triangle_admissible(ta, tb, x) for ta, tb in pairs):
            if any(not compiler.triangle_admissible(ta, tb, x, k) for ta, tb in pairs):
                return None
            xs.append(x)
    return xs


def identity_checks(kind, max_tj, h, bits=256):
    """Max residual of a recoupling identity over admissible labels at
    level k = h - 2, evaluated through the DCR engine.

    kind "orthogonality":
        sum_x [x+1] {a b x; c d p} {a b x; c d p'} = delta_{pp'} / [p+1]
    kind "pentagon" (Biedenharn-Elliott, all labels as twice-spins):
        sum_x (-1)^{(S+x)/2} [x+1] {a b x; c d p} {c d x; e f q} {e f x; b a r}
            = {p q r; e a d} {p q r; f b c},   S = a+b+c+d+e+f+p+q+r.

    Labels run over twice-spins 0..min(max_tj, k).  Instances whose
    interior sum would leave the level-admissible range are skipped
    (see _x_terms); within the truncated theory both identities close
    to arithmetic precision.
    """
    table = _SixJTable(h, bits)
    k = table.k
    cap = min(max_tj, k)
    with mp.workprec(bits):
        if kind == "orthogonality":
            return _orthogonality_residual(table, cap)
        if kind == "pentagon":
            return _pentagon_residual(table, cap)
    raise ValueError("unknown identity kind %r" % (kind,))


def _orthogonality_residual(table, cap):
    k = table.k
    worst = mpf(0)
    rng = range(cap + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    ps = [p for p in rng
                          if compiler.triangle_admissible(a, d, p, k)
                          and compiler.triangle_admissible(b, c, p, k)]
                    if not ps:
                        continue
                    xs = _x_terms(((a, b), (c, d)), k)
                    if xs is None:
                        continue
                    for p in ps:
                        for pp in ps:
                            s = mpf(0)
                            for x in xs:
                                s += (table.qint(x + 1)
                                      * table.sixj((a, b, x, c, d, p))
                                      * table.sixj((a, b, x, c, d, pp)))
                            tgt = 1 / table.qint(p + 1) if p == pp else 0
                            worst = max(worst, abs(s - tgt))
    return float(worst)


def _pentagon_residual(table, cap):
    k = table.k
    worst = mpf(0)
    rng = range(cap + 1)
    for a in rng:
        for d in rng:
            for p in rng:
                if not compiler.triangle_admissible(a, d, p, k):
                    continue
                for b in rng:
                    for c in rng:
                        if not compiler.triangle_admissible(b, c, p, k):
                            continue
                        for e in rng:
                            for f in rng:
                                worst = max(worst, _pentagon_one(
                                    table, k, cap, a, b, c, d, e, f, p))
    return float(worst)


def _pentagon_one(table, k, cap, a, b, c, d, e, f, p):
    worst = mpf(0)
    rng = range(cap + 1)
    qs = [q for q in rng
          if compiler.triangle_admissible(c, f, q, k)
          and compiler.triangle_admissible(d, e, q, k)]
    rs = [r for r in rng
          if compiler.triangle_admissible(e, a, r, k)
          and compiler.triangle_admissible(f, b, r, k)]
    if not qs or not rs:
        return worst
    xs = _x_terms(((a, b), (c, d), (e, f)), k)
    if xs is None:
        return worst
    for q in qs:
        for r in rs:
            # (p,q,r) is the one triad not fixed by the gates above
            if compiler.triangle_admissible(p, q, r):
                if not compiler.triangle_admissible(p, q, r, k):
                    continue  # pole on the right-hand side
                rhs = (table.sixj((p, q, r, e, a, d))
                       * table.sixj((p, q, r, f, b, c)))
            else:
                rhs = 0
            S2 = a + b + c + d + e + f + p + q + r
            lhs = mpf(0)
            for x in xs:
                ph = -1 if ((S2 + x) // 2) % 2 else 1
                lhs += (ph * table.qint(x + 1)
                        * table.sixj((a, b, x, c, d, p))
                        * table.sixj((c, d, x, e, f, q))
                        * table.sixj((e, f, x, b, a, r)))
            worst = max(worst, abs(lhs - rhs))
    return worst
