"""Compilation of finite q-hypergeometric series into the deferred
cyclotomic representation (DCR).

A series is described by affine factorial arguments with slopes in
{-1, 0, +1}, an optional (-1)^z alternation, an integer quadratic phase,
and a monomial radicand sitting under a global square root.  Compilation
produces the parameter-independent tuple

    DCR = (base, ratios, root, rad, z_min, z_max, d_max)

where base is the summand monomial at z_min, ratios[i] is the exact
term-to-term ratio R_{z_min+i} as a single monomial, and root^2 * rad is
the prefactor radicand with rad square-free.  No field arithmetic and no
polynomial expansion happens anywhere in this module.

Convention: the (-1)^z of an alternating series is absorbed into the sign
of the base term as (-1)^{z_min}, after which each ratio carries one
factor of -1.  Spins enter in the twice-spin integer convention (a spin
value j corresponds to tj = 2j), which keeps every intermediate integral.
"""

import json
from dataclasses import dataclass

from . import qfactor
from .monomial import IDENTITY, CycloMonomial, div, mul, sqrt_split

_compile_count = 0


def compile_count():
    return _compile_count


class AdmissibilityError(ValueError):
    """Input labels violate a triangle or level constraint."""


@dataclass(frozen=True)
class AffineForm:
    """c0 + c1*z with slope c1 restricted to {-1, 0, +1}."""
    c0: int
    c1: int

    def __post_init__(self):
        if self.c1 not in (-1, 0, 1):
            raise ValueError("slope must be -1, 0 or +1, got %d" % self.c1)

    def at(self, z):
        return self.c0 + self.c1 * z


@dataclass(frozen=True)
class PhasePoly:
    """Integer phase f(z) = f0 + f1*z + f2*z^2 contributing q^{f(z)}."""
    f0: int = 0
    f1: int = 0
    f2: int = 0

    def at(self, z):
        return self.f0 + self.f1 * z + self.f2 * z * z


@dataclass(frozen=True)
class SeriesDescriptor:
    num_args: tuple
    den_args: tuple
    phase: PhasePoly = PhasePoly()
    alternating: bool = False
    prefactor_radicand: CycloMonomial = IDENTITY

    def __post_init__(self):
        object.__setattr__(self, "num_args", tuple(self.num_args))
        object.__setattr__(self, "den_args", tuple(self.den_args))


@dataclass(frozen=True)
class SixJLabels:
    """Six twice-spins (tj = 2j); no fractional spins ever appear."""
    tj1: int
    tj2: int
    tj3: int
    tj4: int
    tj5: int
    tj6: int

    def __post_init__(self):
        for name in ("tj1", "tj2", "tj3", "tj4", "tj5", "tj6"):
            v = getattr(self, name)
            if v < 0:
                raise ValueError("%s must be a non-negative twice-spin, got %d" % (name, v))

    def as_tuple(self):
        return (self.tj1, self.tj2, self.tj3, self.tj4, self.tj5, self.tj6)


# the four coupled triads, as index triples into (tj1..tj6)
TRIADS = ((0, 1, 2), (0, 4, 5), (1, 3, 5), (2, 3, 4))


@dataclass(frozen=True)
class SixJDescriptor:
    a: tuple
    b: tuple
    labels: SixJLabels


@dataclass(frozen=True)
class DCR:
    base: CycloMonomial
    ratios: tuple
    root: CycloMonomial
    rad: CycloMonomial
    z_min: int
    z_max: int
    d_max: int

    def __post_init__(self):
        object.__setattr__(self, "ratios", tuple(self.ratios))

    def num_terms(self):
        return self.z_max - self.z_min + 1


def triangle_admissible(ta, tb, tc, level=None):
    """Triangle inequalities + even twice-spin sum (+ sum <= 2k at a level)."""
    s = ta + tb + tc
    if s % 2 != 0:
        return False
    if not (abs(ta - tb) <= tc <= ta + tb):
        return False
    if level is not None and s > 2 * level:
        return False
    return True


def sixj_descriptor(labels):
    """Linear combinations a_i (triad half-sums) and b_y (opposite-pair sums).

    All arithmetic runs on twice-spins and halves exactly; an inadmissible
    triad is reported by its label positions.
    """
    tj = labels.as_tuple()
    for idx in TRIADS:
        ta, tb, tc = (tj[i] for i in idx)
        if not triangle_admissible(ta, tb, tc):
            raise AdmissibilityError(
                "triad (j%d, j%d, j%d) inadmissible: twice-spins (%d, %d, %d)"
                % (idx[0] + 1, idx[1] + 1, idx[2] + 1, ta, tb, tc))
    a = tuple((tj[i] + tj[j] + tj[k]) // 2 for i, j, k in TRIADS)
    b = ((tj[0] + tj[1] + tj[3] + tj[4]) // 2,
         (tj[0] + tj[2] + tj[3] + tj[5]) // 2,
         (tj[1] + tj[2] + tj[4] + tj[5]) // 2)
    return SixJDescriptor(a=a, b=b, labels=labels)


def _triangle_radicand(ta, tb, tc):
    # Delta^2 contents of one triad: (a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!
    m = qfactor.qfact_monomial((ta + tb - tc) // 2)
    m = mul(m, qfactor.qfact_monomial((ta - tb + tc) // 2))
    m = mul(m, qfactor.qfact_monomial((-ta + tb + tc) // 2))
    return div(m, qfactor.qfact_monomial((ta + tb + tc) // 2 + 1))


def series_from_sixj(desc):
    """Racah single-sum shape of the 6j: numerator [z+1]!, denominator
    [z-a_i]! and [b_y-z]!, alternating, with the four triangle radicands
    composed into one monomial under the global square root."""
    tj = desc.labels.as_tuple()
    pre = IDENTITY
    for i, j, k in TRIADS:
        pre = mul(pre, _triangle_radicand(tj[i], tj[j], tj[k]))
    return SeriesDescriptor(
        num_args=(AffineForm(1, +1),),
        den_args=tuple(AffineForm(-ai, +1) for ai in desc.a)
        + tuple(AffineForm(by, -1) for by in desc.b),
        phase=PhasePoly(),
        alternating=True,
        prefactor_radicand=pre)


def bounds(desc):
    """Summation range forced by factorial non-negativity.

    Returns (z_min, z_max), or None when some slope-0 argument is
    negative for every z (empty sum).  A series with no slope -1
    argument (or none with slope +1) has no finite range and is
    rejected outright.
    """
    lo, hi = [], []
    for arg in desc.num_args + desc.den_args:
        if arg.c1 == 1:
            lo.append(-arg.c0)
        elif arg.c1 == -1:
            hi.append(arg.c0)
        elif arg.c0 < 0:
            return None
    if not hi:
        raise ValueError("series unbounded above: no slope -1 factorial argument")
    if not lo:
        raise ValueError("series unbounded below: no slope +1 factorial argument")
    z_min, z_max = max(lo), min(hi)
    if z_min > z_max:
        return None
    return z_min, z_max


def ratio_monomial(desc, z):
    """Exact term ratio R_z = T_{z+1}/T_z as a single monomial.

    Each slope +1 argument steps its factorial up by one quantum integer,
    each slope -1 argument steps down; numerator and denominator roles
    flip the direction.  For the 6j this is -[z+2] prod_y [b_y-z] /
    prod_i [z+1-a_i].
    """
    m = CycloMonomial(-1 if desc.alternating else 1,
                      desc.phase.at(z + 1) - desc.phase.at(z))
    for arg in desc.num_args:
        if arg.c1 == 1:
            m = mul(m, _qint_checked(arg.c0 + z + 1, z))
        elif arg.c1 == -1:
            m = div(m, _qint_checked(arg.c0 - z, z))
    for arg in desc.den_args:
        if arg.c1 == 1:
            m = div(m, _qint_checked(arg.c0 + z + 1, z))
        elif arg.c1 == -1:
            m = mul(m, _qint_checked(arg.c0 - z, z))
    return m


def _qint_checked(n, z):
    if n <= 0:
        raise RuntimeError(
            "ratio step at z=%d hit a non-positive quantum integer [%d]; "
            "summation bounds are inconsistent" % (z, n))
    return qfactor.qint_monomial(n)


def compile_series(desc):
    """Assemble the DCR: base summand at z_min, one exact ratio per step,
    and the square-root split of the prefactor radicand."""
    global _compile_count
    rng = bounds(desc)
    if rng is None:
        raise ValueError("empty summation range: series is identically zero")
    z_min, z_max = rng

    base = CycloMonomial((-1) ** (z_min % 2) if desc.alternating else 1,
                         desc.phase.at(z_min))
    for arg in desc.num_args:
        base = mul(base, qfactor.qfact_monomial(arg.at(z_min)))
    for arg in desc.den_args:
        base = div(base, qfactor.qfact_monomial(arg.at(z_min)))

    ratios = tuple(ratio_monomial(desc, z) for z in range(z_min, z_max))
    split = sqrt_split(desc.prefactor_radicand)

    d_max = max([base.max_index()] + [r.max_index() for r in ratios]
                + [split.root.max_index(), split.rad.max_index()])
    _compile_count += 1
    return DCR(base=base, ratios=ratios, root=split.root, rad=split.rad,
               z_min=z_min, z_max=z_max, d_max=d_max)


def compile_sixj(labels):
    return compile_series(series_from_sixj(sixj_descriptor(labels)))


def dcr_to_json(dcr):
    """Deterministic JSON text (byte-identical across runs for equal DCRs)."""
    obj = {"z_min": dcr.z_min, "z_max": dcr.z_max, "d_max": dcr.d_max,
           "base": dcr.base.to_json_dict(),
           "ratios": [r.to_json_dict() for r in dcr.ratios],
           "root": dcr.root.to_json_dict(),
           "rad": dcr.rad.to_json_dict()}
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def dcr_from_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError("DCR JSON parse error at offset %d: %s" % (exc.pos, exc.msg))
    missing = [k for k in ("z_min", "z_max", "d_max", "base", "ratios", "root", "rad")
               if k not in obj]
    if missing:
        raise ValueError("DCR JSON missing keys: %s" % ", ".join(missing))
    return DCR(base=CycloMonomial.from_json_dict(obj["base"]),
               ratios=tuple(CycloMonomial.from_json_dict(r) for r in obj["ratios"]),
               root=CycloMonomial.from_json_dict(obj["root"]),
               rad=CycloMonomial.from_json_dict(obj["rad"]),
               z_min=obj["z_min"], z_max=obj["z_max"], d_max=obj["d_max"])
