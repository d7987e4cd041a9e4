"""State sums over triangulations: canonical keys, coloring enumeration,
cache amortization, partition values."""

import importlib.resources

import pytest
from mpmath import mp

from qcyclo.compiler import SixJLabels, compile_count, compile_sixj, \
    triangle_admissible
from qcyclo.diagnostics import dcr_eval_sixj
from qcyclo.projection import (ComplexDouble, ComplexExtended,
                               amplitude_to_complex, evaluate,
                               project_monomial, root_of_unity_context)
from qcyclo.qfactor import qint_monomial
from qcyclo.statesum import (DCRCache, Triangulation, admissible_colorings,
                             canonical_sixj, load_triangulation, sixj_images,
                             triangulation_from_json, tv_partition)

DATA = importlib.resources.files("qcyclo") / "data"

# two tetrahedra glued along the ABC face; outer edges fixed
TWO_TETS = Triangulation(
    num_vertices=5,
    edges=("AB", "AC", "BC", "AD", "BD", "CD", "AE", "BE", "CE"),
    tetrahedra=(("AB", "AC", "BC", "CD", "BD", "AD"),
                ("AB", "AC", "BC", "CE", "BE", "AE")),
    boundary={"AD": 2, "BD": 2, "CD": 2, "AE": 1, "BE": 1, "CE": 1},
)


class TestSymmetryOrbit:
    def test_orbit_size_and_membership(self):
        tjs = (2, 2, 4, 3, 1, 3)
        images = sixj_images(tjs)
        assert len(images) == 24
        assert tjs in images

    def test_canonical_idempotent_on_orbit(self):
        tjs = (2, 2, 4, 3, 1, 3)
        key = canonical_sixj(tjs)
        for img in sixj_images(tjs):
            assert canonical_sixj(img) == key
        assert key == min(sixj_images(tjs))

    def test_amplitude_invariant_on_orbit(self):
        # numerical invariance under the 24 relabelings is what makes
        # canonicalization safe as a cache key
        base = dcr_eval_sixj(SixJLabels(2, 2, 4, 3, 1, 3), 8,
                             ComplexExtended(256))
        for img in set(sixj_images((2, 2, 4, 3, 1, 3))):
            v = dcr_eval_sixj(SixJLabels(*img), 8, ComplexExtended(256))
            assert abs(v - base) <= 1e-10 * abs(base)


class TestTriangulation:
    def test_duplicate_edge(self):
        with pytest.raises(ValueError, match="duplicate"):
            Triangulation(1, ("a", "a"), (), {})

    def test_tet_arity(self):
        with pytest.raises(ValueError, match="expected 6"):
            Triangulation(1, ("a", "b", "c", "d", "e"),
                          (("a", "b", "c", "d", "e"),), {})

    def test_tet_repeats_edge(self):
        with pytest.raises(ValueError, match="repeats"):
            Triangulation(1, ("a", "b", "c", "d", "e"),
                          (("a", "b", "c", "d", "e", "a"),), {})

    def test_unknown_edge_in_tet(self):
        with pytest.raises(ValueError, match="unknown edge 'zz'"):
            Triangulation(1, ("a", "b", "c", "d", "e", "f"),
                          (("a", "b", "c", "d", "e", "zz"),), {})

    def test_bad_boundary(self):
        with pytest.raises(ValueError, match="unknown edge"):
            Triangulation(1, ("a",), (), {"zz": 0})
        with pytest.raises(ValueError, match="nonnegative"):
            Triangulation(1, ("a",), (), {"a": -2})

    def test_interior_edges(self):
        tri = Triangulation(1, ("a", "b", "c"), (), {"b": 0})
        assert tri.interior_edges == ("a", "c")

    def test_json_round_trip_and_errors(self):
        tri = load_triangulation(str(DATA / "ball_1tet.json"))
        assert tri.num_vertices == 4
        assert len(tri.tetrahedra) == 1
        assert tri.interior_edges == ()
        with pytest.raises(ValueError, match="missing boundary"):
            triangulation_from_json('{"num_vertices": 0, "edges": [], '
                                    '"tetrahedra": []}')
        with pytest.raises(ValueError, match="malformed"):
            triangulation_from_json("{nope")


class TestColorings:
    def test_single_tet_fixed_boundary(self):
        tri = load_triangulation(str(DATA / "ball_1tet.json"))
        assert list(admissible_colorings(tri, 3)) == [dict(tri.boundary)]
        # at k=2 the all-2 triads exceed the level cutoff
        assert list(admissible_colorings(tri, 2)) == []

    def test_boundary_color_above_level(self):
        tri = Triangulation(1, ("a", "b", "c", "d", "e", "f"),
                            (("a", "b", "c", "d", "e", "f"),),
                            {e: 4 for e in "abcdef"})
        assert list(admissible_colorings(tri, 3)) == []

    def test_single_interior_edge_matches_brute_force(self):
        tri = Triangulation(
            4, ("AB", "AC", "BC", "CD", "BD", "AD"),
            (("AB", "AC", "BC", "CD", "BD", "AD"),),
            {"AB": 2, "AC": 2, "BC": 2, "CD": 2, "BD": 2})
        k = 3
        got = sorted(c["AD"] for c in admissible_colorings(tri, k))
        # brute force over all k+1 colors of AD, all four triads checked
        triads = (("AB", "AC", "BC"), ("AB", "BD", "AD"),
                  ("AC", "CD", "AD"), ("BC", "CD", "BD"))
        want = []
        for x in range(k + 1):
            col = dict(tri.boundary, AD=x)
            if all(triangle_admissible(col[a], col[b], col[c], k)
                   for a, b, c in triads):
                want.append(x)
        assert got == want == [0, 2]

    def test_level_zero(self):
        tri = load_triangulation(str(DATA / "ball_4tet.json"))
        zero = Triangulation(tri.num_vertices, tri.edges, tri.tetrahedra,
                             {e: 0 for e in tri.boundary})
        cols = list(admissible_colorings(zero, 0))
        assert cols == [{e: 0 for e in zero.edges}]

    def test_yields_independent_dicts(self):
        cols = list(admissible_colorings(TWO_TETS, 4))
        assert len(cols) >= 2
        cols[0]["AB"] = 99
        assert cols[1]["AB"] != 99


class TestDCRCache:
    def test_hit_on_symmetric_image(self):
        cache = DCRCache()
        a = cache.get((2, 2, 4, 3, 1, 3))
        img = sixj_images((2, 2, 4, 3, 1, 3))[7]
        b = cache.get(img)
        assert a is b
        assert (cache.hits, cache.misses, len(cache)) == (1, 1, 1)

    def test_distinct_keys_miss(self):
        cache = DCRCache()
        cache.get((2, 2, 2, 2, 2, 2))
        cache.get((0, 0, 0, 0, 0, 0))
        assert (cache.hits, cache.misses) == (0, 2)


def direct_two_tet_sum(tri, k):
    """Cache-free oracle: explicit loops, per-coloring recompilation."""
    h = k + 2
    ctx = root_of_unity_context(h, ComplexDouble(), 2 * k + 2)
    qdim = [project_monomial(qint_monomial(tj + 1), ctx) for tj in range(k + 1)]
    norm = sum(w * w for w in qdim) ** (-tri.num_vertices)
    total = 0
    for ab in range(k + 1):
        for ac in range(k + 1):
            for bc in range(k + 1):
                col = dict(tri.boundary, AB=ab, AC=ac, BC=bc)
                tet_js = [tuple(col[e] for e in tet) for tet in tri.tetrahedra]
                if not all(triangle_admissible(*tr, k)
                           for t in tet_js
                           for tr in ((t[0], t[1], t[2]), (t[0], t[4], t[5]),
                                      (t[1], t[3], t[5]), (t[2], t[3], t[4]))):
                    continue
                term = 1
                for e in tri.edges:
                    term = term * qdim[col[e]]
                for tjs in tet_js:
                    dcr = compile_sixj(SixJLabels(*tjs))
                    term = term * amplitude_to_complex(evaluate(dcr, ctx), ctx)
                total = total + term
    return total * norm


class TestPartitionSum:
    def test_single_tet_is_single_product(self):
        tri = load_triangulation(str(DATA / "ball_1tet.json"))
        k = 5
        got, stats = tv_partition(tri, k)
        ctx = root_of_unity_context(k + 2, ComplexDouble(), 2 * k + 2)
        qdim = [project_monomial(qint_monomial(t + 1), ctx)
                for t in range(k + 1)]
        amp = dcr_eval_sixj(SixJLabels(*(2,) * 6), k + 2, ComplexDouble())
        want = sum(w * w for w in qdim) ** -4 * qdim[2] ** 6 * amp
        assert abs(got - want) <= 1e-12 * abs(want)
        assert stats.num_colorings == 1
        assert stats.distinct_classes == 1

    def test_weights_flag_drops_edge_factors(self):
        tri = load_triangulation(str(DATA / "ball_1tet.json"))
        k = 5
        bare, _ = tv_partition(tri, k, weights=False)
        ctx = root_of_unity_context(k + 2, ComplexDouble(), 2 * k + 2)
        qdim = [project_monomial(qint_monomial(t + 1), ctx)
                for t in range(k + 1)]
        amp = dcr_eval_sixj(SixJLabels(*(2,) * 6), k + 2, ComplexDouble())
        want = sum(w * w for w in qdim) ** -4 * amp
        assert abs(bare - want) <= 1e-12 * abs(want)

    def test_two_tets_match_direct_sum(self):
        k = 4
        got, stats = tv_partition(TWO_TETS, k)
        want = direct_two_tet_sum(TWO_TETS, k)
        assert abs(got - want) <= 1e-10 * (1 + abs(want))
        assert stats.num_colorings > 1

    def test_inadmissible_boundary_empty_sum(self):
        tri = load_triangulation(str(DATA / "ball_1tet.json"))
        got, stats = tv_partition(tri, 2)
        assert got == 0
        assert stats.num_colorings == 0

    def test_cache_transparency(self):
        cache = DCRCache()
        v1, s1 = tv_partition(TWO_TETS, 4, cache=cache)
        v2, s2 = tv_partition(TWO_TETS, 4, cache=cache)
        v3, _ = tv_partition(TWO_TETS, 4)
        assert v1 == v2 == v3  # same code path, same arithmetic
        assert s2.cache_misses == s1.cache_misses  # all warm on the second run
        assert s2.cache_hits > s1.cache_hits

    def test_amortization_congruent_tets(self):
        tri = load_triangulation(str(DATA / "ball_4tet.json"))
        k = 5
        cache = DCRCache()
        c0 = compile_count()
        _, stats = tv_partition(tri, k, cache=cache)
        compiles = compile_count() - c0
        # four congruent tetrahedra per coloring, one compile per class;
        # the per-run value memo absorbs every repeat within the run
        assert stats.num_colorings >= 2
        assert compiles == stats.cache_misses == len(cache)
        assert compiles == stats.distinct_classes
        assert (stats.distinct_classes + stats.value_reuses
                == 4 * stats.num_colorings)
        assert stats.cache_misses < 4 * stats.num_colorings
        # rerunning against the warm cache compiles nothing
        c1 = compile_count()
        _, again = tv_partition(tri, k, cache=cache)
        assert compile_count() == c1
        assert again.cache_misses == stats.cache_misses
        assert again.cache_hits == stats.distinct_classes

    def test_extended_matches_double(self):
        v_lo, _ = tv_partition(TWO_TETS, 4)
        v_hi, _ = tv_partition(TWO_TETS, 4, bits=192)
        with mp.workprec(192):
            assert abs(v_lo - complex(v_hi)) <= 1e-10 * (1 + abs(complex(v_hi)))

    @pytest.mark.xfail(
        strict=True,
        reason="with fixed boundary colors the exposed normalization "
               "conventions do not make the weighted sum invariant under "
               "the 1-4 move; kept as an experimental probe")
    def test_one_four_move_invariance(self):
        one = load_triangulation(str(DATA / "ball_1tet.json"))
        four = load_triangulation(str(DATA / "ball_4tet.json"))
        k = 3
        v1, _ = tv_partition(one, k, bits=256)
        v4, _ = tv_partition(four, k, bits=256)
        with mp.workprec(256):
            assert abs(v1 - v4) <= 1e-8 * (1 + abs(v1))
