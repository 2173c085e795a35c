import itertools

import pytest

from facelab import (
    InvalidComplexError,
    build_complex,
    build_poset,
    barycentric_subdivision,
    cone,
    face_poset,
    face_subcomplex,
    full_subcomplex,
    homology_groups,
    nerve,
    poset_order_complex,
    restrict,
)
from facelab.complexes import SimplicialComplex
from facelab.sweep import enumerate_complexes


def closure_oracle(m, maximal):
    """Independent downward closure by plain subset enumeration."""
    simplices = {frozenset()}
    for s in maximal:
        s = frozenset(s)
        for k in range(len(s) + 1):
            simplices.update(map(frozenset, itertools.combinations(s, k)))
    return frozenset(simplices)


class TestBuildComplex:
    def test_four_cycle(self, four_cycle):
        assert four_cycle.f_vector() == (4, 4)
        assert len(four_cycle.simplices) == 9  # 8 nonempty + empty
        assert four_cycle.simplices == closure_oracle(4, [(1, 2), (2, 3), (3, 4), (1, 4)])

    def test_full_triangle(self):
        k = build_complex(3, [(1, 2, 3)])
        assert len([s for s in k.simplices if s]) == 7

    def test_projective_plane_f_vector(self, rp2):
        assert rp2.f_vector() == (6, 15, 10)
        assert rp2.simplices == closure_oracle(6, rp2.maximal_simplices())

    def test_out_of_range_vertex(self):
        with pytest.raises(InvalidComplexError):
            build_complex(2, [(1, 3)])

    def test_duplicate_generator_warns(self):
        with pytest.warns(UserWarning):
            k = build_complex(2, [(1, 2), (2, 1)])
        assert k.f_vector() == (2, 1)

    def test_absorbed_generator_warns(self):
        with pytest.warns(UserWarning):
            k = build_complex(2, [(1, 2), (1,)])
        assert k.f_vector() == (2, 1)

    def test_empty_complex_is_legal(self):
        k = build_complex(0, [])
        assert k.is_empty and k.is_minimal

    def test_downward_closure_exhaustive_small(self):
        for complex in enumerate_complexes(3):
            complex._check_closed()

    def test_minimality_flag(self):
        assert not build_complex(3, [(1, 2)]).is_minimal
        assert build_complex(2, [(1, 2)]).is_minimal


class TestFullSubcomplex:
    def test_opposite_vertices(self, four_cycle):
        k = full_subcomplex(four_cycle, {1, 3})
        assert k.f_vector() == (2,)
        assert k.vertex_names == (1, 3)

    def test_path(self, four_cycle):
        assert full_subcomplex(four_cycle, {1, 2, 3}).f_vector() == (3, 2)

    def test_identity(self, four_cycle):
        assert full_subcomplex(four_cycle, {1, 2, 3, 4}).simplices == four_cycle.simplices

    def test_empty_selection(self, four_cycle):
        assert full_subcomplex(four_cycle, ()).is_empty


class TestBarycentricSubdivision:
    def test_edge(self):
        assert barycentric_subdivision(build_complex(2, [(1, 2)])).f_vector() == (3, 2)

    def test_triangle_boundary(self):
        sub = barycentric_subdivision(build_complex(3, [(1, 2), (1, 3), (2, 3)]))
        assert sub.f_vector() == (6, 6)

    def test_four_cycle_chain_count(self, four_cycle):
        # chain enumeration oracle: 8 simplices, one 2-chain per (vertex, edge)
        # incidence, two incidences per edge
        assert barycentric_subdivision(four_cycle).f_vector() == (8, 8)

    def test_preserves_homology(self, four_cycle, rp2, torus9):
        for complex in (four_cycle, rp2, torus9, build_complex(3, [(1, 2, 3)])):
            assert homology_groups(barycentric_subdivision(complex)) == homology_groups(
                complex
            )

    def test_vertex_order_is_dimension_then_lex(self, four_cycle):
        names = barycentric_subdivision(four_cycle).vertex_names
        assert names == tuple(
            sorted(names, key=lambda name: (len(name), name))
        )


class TestFaceSubcomplex:
    def test_vertex_star_in_four_cycle(self, four_cycle):
        star = face_subcomplex(four_cycle, {1})
        assert star.f_vector() == (3, 2)

    def test_top_simplex_is_single_vertex(self):
        star = face_subcomplex(build_complex(3, [(1, 2, 3)]), {1, 2, 3})
        assert star.f_vector() == (1,)

    def test_edge_barycenter(self, four_cycle):
        assert face_subcomplex(four_cycle, {1, 2}).f_vector() == (1,)

    def test_requires_membership(self, four_cycle):
        with pytest.raises(InvalidComplexError):
            face_subcomplex(four_cycle, {1, 3})
        with pytest.raises(InvalidComplexError):
            face_subcomplex(four_cycle, ())

    def test_contractible_exhaustive_small(self):
        # every closed star has the homology of a point; all complexes on
        # up to four vertices, every nonempty simplex
        for complex in enumerate_complexes(4):
            if complex.is_empty:
                continue
            subdivision = barycentric_subdivision(complex)
            for s in complex.simplices:
                if s:
                    star = face_subcomplex(complex, s, subdivision=subdivision)
                    assert homology_groups(star).is_point(), (complex, s)

    def test_contractible_sampled_five_vertices(self):
        import random

        rng = random.Random(20260810)
        pool = []
        for _ in range(40):
            maximal = [
                tuple(sorted(rng.sample(range(1, 6), rng.randint(1, 4))))
                for _ in range(rng.randint(1, 5))
            ]
            support = {v for s in maximal for v in s}
            maximal += [(v,) for v in range(1, 6) if v not in support]
            pool.append(build_complex(5, maximal))
        for complex in pool:
            subdivision = barycentric_subdivision(complex)
            for s in complex.simplices:
                if s:
                    star = face_subcomplex(complex, s, subdivision=subdivision)
                    assert homology_groups(star).is_point()


class TestNerve:
    def test_panel_nerve_recovers_complex(self, four_cycle):
        from facelab import panelize_simplicial

        panels = panelize_simplicial(four_cycle).panels
        assert nerve(panels).simplices == four_cycle.simplices

    def test_single_member(self, four_cycle):
        assert nerve([four_cycle]).f_vector() == (1,)

    def test_two_disjoint_members(self, four_cycle):
        a = restrict(four_cycle, {1})
        b = restrict(four_cycle, {3})
        assert nerve([a, b]).f_vector() == (2,)

    def test_empty_family(self):
        assert nerve([]).is_empty


class TestSimplicialPoset:
    def test_boolean_segment_sizes(self, two_triangle_poset):
        poset = two_triangle_poset
        for element in poset.elements:
            segment = 1 + len({element} | poset.below[element])
            assert segment == 2 ** len(poset.vertex_set[element])

    def test_face_poset_joins_are_at_most_single(self, four_cycle):
        poset = face_poset(four_cycle)
        for a in poset.elements:
            for b in poset.elements:
                assert len(poset.join(a, b)) <= 1

    def test_two_tops_join(self, two_triangle_poset):
        assert two_triangle_poset.join("e12", "e13") == ("ta", "tb")
        assert two_triangle_poset.meet("ta", "tb") is None  # no common upper bound

    def test_two_edges_join(self, two_edge_poset):
        assert two_edge_poset.join("v1", "v2") == ("a", "b")

    def test_rejects_non_boolean_segment(self):
        with pytest.raises(InvalidComplexError):
            build_poset(
                ["0", "v1", "v2", "v3", "t"],
                [["0", "v1"], ["0", "v2"], ["0", "v3"],
                 ["v1", "t"], ["v2", "t"], ["v3", "t"]],
            )

    def test_rejects_duplicate_vertex_sets_in_segment(self):
        # two parallel edges under a common top would force a non-unique meet
        with pytest.raises(InvalidComplexError):
            build_poset(
                ["0", "v1", "v2", "a", "b", "T"],
                [["0", "v1"], ["0", "v2"], ["v1", "a"], ["v2", "a"],
                 ["v1", "b"], ["v2", "b"], ["a", "T"], ["b", "T"]],
            )

    def test_rejects_missing_bottom(self):
        with pytest.raises(InvalidComplexError):
            build_poset(["a", "b"], [])

    def test_rejects_cycle(self):
        with pytest.raises(InvalidComplexError):
            build_poset(["0", "a", "b"], [["0", "a"], ["a", "b"], ["b", "a"]])

    def test_vertex_labels_respected(self):
        poset = build_poset(
            ["0", "p", "q"], [["0", "p"], ["0", "q"]], {"p": 2, "q": 1}
        )
        assert poset.vertex_set["p"] == frozenset({2})


class TestPosetOrderComplex:
    def test_edge_poset_gives_path(self):
        poset = build_poset(
            ["0", "v1", "v2", "e"],
            [["0", "v1"], ["0", "v2"], ["v1", "e"], ["v2", "e"]],
        )
        assert poset_order_complex(poset).f_vector() == (3, 2)

    def test_two_triangles_give_sphere(self, two_triangle_poset):
        order_complex = poset_order_complex(two_triangle_poset)
        assert order_complex.m == 8
        assert homology_groups(order_complex).as_dict() == {0: (1, ()), 2: (1, ())}

    def test_four_cycle_face_poset(self, four_cycle):
        order_complex = poset_order_complex(face_poset(four_cycle))
        assert order_complex.f_vector() == (8, 8)
        assert homology_groups(order_complex) == homology_groups(four_cycle)


def test_cone_is_contractible(four_cycle, rp2):
    for complex in (four_cycle, rp2):
        coned = cone(complex)
        assert coned.m == complex.m + 1
        assert homology_groups(coned).is_point()


def test_enumerate_complexes_counts():
    # inclusion-exclusion over the Dedekind numbers 2, 3, 6, 20, 168 gives
    # the number of downward-closed families with full support
    by_m = {}
    for complex in enumerate_complexes(4):
        by_m[complex.m] = by_m.get(complex.m, 0) + 1
    assert by_m == {0: 1, 1: 1, 2: 2, 3: 9, 4: 114}
