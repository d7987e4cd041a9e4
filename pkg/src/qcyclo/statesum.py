"""Turaev-Viro style partition sums over triangulated 3-manifolds.

A triangulation is a combinatorial object: named edges, tetrahedra as
6-tuples of edge names, and a boundary coloring in twice-spins.  The
6-tuple order is (j1..j6) with faces {(j1,j2,j3), (j1,j5,j6),
(j2,j4,j6), (j3,j4,j5)}; for a tetrahedron on vertices A,B,C,D that is
the edge order (AB, AC, BC, CD, BD, AD).

The partition sum ranges over level-admissible colorings of the
interior edges.  Each tetrahedron contributes its 6j amplitude at
h = k + 2; congruent tetrahedra (same labels up to the 24 tetrahedral
symmetries) share one compiled DCR through DCRCache, so compilation
cost scales with the number of distinct congruence classes rather than
the number of terms.
"""

import itertools
import json
from dataclasses import dataclass

from . import projection
from .compiler import SixJLabels, compile_sixj, triangle_admissible
from .qfactor import qint_monomial

TRIAD_SLOTS = ((0, 1, 2), (0, 4, 5), (1, 3, 5), (2, 3, 4))

_COLUMN_PERMS = tuple(itertools.permutations((0, 1, 2)))
# upper/lower exchange in exactly two columns, or none
_FLIPS = ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1))


def sixj_images(tjs):
    """All 24 images of a twice-spin 6-tuple under the tetrahedral
    symmetries: column permutations of ((j1,j4),(j2,j5),(j3,j6))
    composed with upper/lower exchange in two columns."""
    cols = ((tjs[0], tjs[3]), (tjs[1], tjs[4]), (tjs[2], tjs[5]))
    out = []
    for perm in _COLUMN_PERMS:
        for flips in _FLIPS:
            pc = [cols[perm[i]][::-1] if flips[i] else cols[perm[i]]
                  for i in range(3)]
            out.append((pc[0][0], pc[1][0], pc[2][0],
                        pc[0][1], pc[1][1], pc[2][1]))
    return out


def canonical_sixj(tjs):
    """Lexicographic minimum over the 24 tetrahedral symmetries."""
    return min(sixj_images(tjs))


@dataclass(frozen=True)
class Triangulation:
    num_vertices: int
    edges: tuple
    tetrahedra: tuple
    boundary: dict

    def __post_init__(self):
        if self.num_vertices < 0:
            raise ValueError("num_vertices must be nonnegative")
        known = set(self.edges)
        if len(known) != len(self.edges):
            raise ValueError("duplicate edge name")
        for i, tet in enumerate(self.tetrahedra):
            if len(tet) != 6:
                raise ValueError(
                    "tetrahedron %d has %d edges, expected 6" % (i, len(tet)))
            if len(set(tet)) != 6:
                raise ValueError("tetrahedron %d repeats an edge" % i)
            for name in tet:
                if name not in known:
                    raise ValueError(
                        "tetrahedron %d references unknown edge %r" % (i, name))
        for name, tj in self.boundary.items():
            if name not in known:
                raise ValueError("boundary color on unknown edge %r" % (name,))
            if not isinstance(tj, int) or tj < 0:
                raise ValueError(
                    "boundary color for %r must be a nonnegative twice-spin"
                    % (name,))

    @property
    def interior_edges(self):
        return tuple(e for e in self.edges if e not in self.boundary)


def triangulation_from_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError("malformed triangulation JSON: %s" % exc) from exc
    for key in ("num_vertices", "edges", "tetrahedra", "boundary"):
        if key not in obj:
            raise ValueError("malformed triangulation object: missing %s" % key)
    return Triangulation(
        num_vertices=obj["num_vertices"],
        edges=tuple(obj["edges"]),
        tetrahedra=tuple(tuple(t) for t in obj["tetrahedra"]),
        boundary=dict(obj["boundary"]),
    )


def load_triangulation(path):
    with open(path, "r", encoding="utf-8") as fh:
        return triangulation_from_json(fh.read())


class DCRCache:
    """Append-only map from canonical 6j key to compiled DCR.

    Reads are plain dict lookups and inserts are idempotent (a key
    always compiles to an equal DCR), so concurrent use is safe under
    the usual dict atomicity guarantees.
    """

    def __init__(self):
        self._dcrs = {}
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self._dcrs)

    def get(self, tjs):
        key = canonical_sixj(tuple(tjs))
        dcr = self._dcrs.get(key)
        if dcr is None:
            self.misses += 1
            dcr = compile_sixj(SixJLabels(*key))
            self._dcrs[key] = dcr
        else:
            self.hits += 1
        return dcr


def _tet_triads(tri):
    """(edge names per triad) for every face of every tetrahedron."""
    triads = []
    for tet in tri.tetrahedra:
        for i, j, k in TRIAD_SLOTS:
            triads.append((tet[i], tet[j], tet[k]))
    return triads


def admissible_colorings(tri, k):
    """Yield every coloring (edge name -> twice-spin) extending the
    boundary such that all four triads of every tetrahedron are
    admissible at level k.  Boundary colors above k yield nothing."""
    if k < 0:
        raise ValueError("level must be nonnegative, got %d" % k)
    triads = _tet_triads(tri)
    order = list(tri.boundary) + list(tri.interior_edges)
    rank = {e: i for i, e in enumerate(order)}
    # check each triad as soon as its last edge is colored
    by_last = {}
    for tri_edges in triads:
        last = max(rank[e] for e in tri_edges)
        by_last.setdefault(last, []).append(tri_edges)
    coloring = dict(tri.boundary)
    n_fixed = len(tri.boundary)

    def ok_at(pos):
        for ea, eb, ec in by_last.get(pos, ()):
            if not triangle_admissible(coloring[ea], coloring[eb],
                                       coloring[ec], k):
                return False
        return True

    for pos in range(n_fixed):
        if coloring[order[pos]] > k or not ok_at(pos):
            return

    def extend(pos):
        if pos == len(order):
            yield dict(coloring)
            return
        name = order[pos]
        for tj in range(k + 1):
            coloring[name] = tj
            if ok_at(pos):
                yield from extend(pos + 1)
        del coloring[name]

    yield from extend(n_fixed)


@dataclass
class TVStats:
    num_colorings: int = 0
    cache_hits: int = 0
    cache_misses: int = 0
    distinct_classes: int = 0
    value_reuses: int = 0


def tv_partition(tri, k, bits=None, weights=True, cache=None):
    """Partition sum over admissible colorings at level k.

    Each coloring contributes prod_edges [tj+1]_q * prod_tets (6j
    amplitude at h = k+2); the total is scaled by A^{-num_vertices}
    with A = sum_{tj=0}^{k} [tj+1]_q^2.  weights=False drops the edge
    factors (and the normalization stays), for the bare form of the
    sum.  bits=None computes in double precision, otherwise in
    extended precision with that many bits.

    Returns (value, TVStats).
    """
    h = k + 2
    tag = projection.ComplexDouble() if bits is None \
        else projection.ComplexExtended(int(bits))
    ctx = projection.root_of_unity_context(h, tag, d_max=2 * k + 2)
    if cache is None:
        cache = DCRCache()
    qdim = [projection.project_monomial(qint_monomial(tj + 1), ctx)
            for tj in range(k + 1)]
    norm = sum(w * w for w in qdim) ** (-tri.num_vertices)
    stats = TVStats()
    values = {}
    total = 0
    for coloring in admissible_colorings(tri, k):
        stats.num_colorings += 1
        term = 1
        if weights:
            for e in tri.edges:
                term = term * qdim[coloring[e]]
        for tet in tri.tetrahedra:
            tjs = tuple(coloring[e] for e in tet)
            key = canonical_sixj(tjs)
            v = values.get(key)
            if v is None:
                dcr = cache.get(tjs)
                v = projection.amplitude_to_complex(
                    projection.evaluate(dcr, ctx), ctx)
                values[key] = v
            else:
                stats.value_reuses += 1
            term = term * v
        total = total + term
    stats.cache_hits = cache.hits
    stats.cache_misses = cache.misses
    stats.distinct_classes = len(values)
    return total * norm, stats
