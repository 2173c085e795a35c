import pytest

from facelab import (
    ChainComplexError,
    GradedGroup,
    IntMatrix,
    build_complex,
    chain_complex,
    cohomology_groups,
    cone,
    homology_groups,
    induced_inclusion_map,
    relative_cohomology,
    restrict,
)
from facelab.homology import CochainComplexBases
from facelab.constructions import panelize_poset, subsets
from facelab.sweep import enumerate_complexes


class TestGradedGroup:
    def test_direct_sum_merges_torsion(self):
        a = GradedGroup.build({1: (1, (2,))})
        b = GradedGroup.build({1: (0, (4,)), 2: (3, ())})
        total = a + b
        assert total.as_dict() == {1: (1, (2, 4)), 2: (3, ())}

    def test_torsion_normalization(self):
        a = GradedGroup.build({0: (0, (2,))})
        b = GradedGroup.build({0: (0, (3,))})
        assert (a + b).as_dict() == {0: (0, (6,))}

    def test_shift(self):
        g = GradedGroup.build({0: (1, ()), 2: (0, (5,))})
        assert g.shift(3).as_dict() == {3: (1, ()), 5: (0, (5,))}

    def test_rejects_bad_chain(self):
        with pytest.raises(ValueError):
            GradedGroup.build({0: (0, (4, 2))})

    def test_trivial_entries_dropped(self):
        assert GradedGroup.build({5: (0, ())}).is_trivial()


class TestChainComplex:
    def test_four_cycle_boundary_is_signed_incidence(self, four_cycle):
        chain = chain_complex(four_cycle)
        boundary = chain.boundary(1)
        assert boundary.nrows == 4 and boundary.ncols == 4
        for _, c, _ in boundary.triplets():
            column = boundary.column(c)
            assert sorted(column.values()) == [-1, 1]
        chain.check()

    def test_relative_euler_count(self, four_cycle):
        from facelab import panelize_simplicial

        panelized = panelize_simplicial(four_cycle)
        union = panelized.union({1, 2, 3, 4})
        relative = chain_complex(panelized.space, "relative", union)
        space_cells = sum(1 for s in panelized.space.simplices if s)
        union_cells = sum(1 for s in union.simplices if s)
        assert sum(relative.dims.values()) == space_cells - union_cells
        # euler characteristic of the pair
        chi_pair = relative.euler_characteristic()
        chi_space = panelized.space.euler_characteristic()
        chi_union = union.euler_characteristic()
        assert chi_pair == chi_space - chi_union

    def test_reduced_empty_complex(self):
        reduced = chain_complex(build_complex(0, []), "reduced")
        assert reduced.homology().as_dict() == {-1: (1, ())}
        assert reduced.cohomology().as_dict() == {-1: (1, ())}

    def test_relative_requires_subcomplex(self, four_cycle):
        other = build_complex(4, [(1, 3)])
        with pytest.raises(ChainComplexError):
            chain_complex(four_cycle, "relative", other)

    def test_check_catches_corruption(self):
        bad = chain_complex(build_complex(3, [(1, 2, 3)]))
        bad.boundaries[2] = IntMatrix.from_dense([[1], [1], [1]])
        with pytest.raises(ChainComplexError):
            bad.check()


class TestHomologyGroups:
    def test_circle(self, four_cycle):
        assert homology_groups(four_cycle).as_dict() == {0: (1, ()), 1: (1, ())}

    def test_projective_plane(self, rp2):
        assert homology_groups(rp2).as_dict() == {0: (1, ()), 1: (0, (2,))}
        assert cohomology_groups(rp2).as_dict() == {0: (1, ()), 2: (0, (2,))}

    def test_cone_is_point(self, rp2):
        assert homology_groups(cone(rp2)).is_point()

    def test_torus(self, torus9):
        assert homology_groups(torus9).as_dict() == {0: (1, ()), 1: (2, ()), 2: (1, ())}

    def test_mod_p_betti(self, rp2, four_cycle):
        # equality with rational betti numbers unless p divides torsion
        assert homology_groups(rp2, 2).betti_vector(0, 2) == (1, 1, 1)
        assert homology_groups(rp2, 3).betti_vector(0, 2) == (1, 0, 0)
        assert homology_groups(four_cycle, 5) == homology_groups(four_cycle)

    def test_mod_p_at_least_rational(self):
        for complex in enumerate_complexes(3):
            if complex.is_empty:
                continue
            rational = homology_groups(complex)
            for p in (2, 3):
                modular = homology_groups(complex, p)
                for degree in set(rational.degrees()) | set(modular.degrees()):
                    assert modular.rank(degree) >= rational.rank(degree)

    def test_universal_coefficients_consistency(self, rp2, four_cycle, torus9):
        for complex in (rp2, four_cycle, torus9):
            h = homology_groups(complex).as_dict()
            ch = cohomology_groups(complex).as_dict()
            degrees = {d for d in set(h) | set(ch)}
            for n in degrees:
                assert ch.get(n, (0, ()))[0] == h.get(n, (0, ()))[0]
                assert ch.get(n, (0, ()))[1] == h.get(n - 1, (0, ()))[1]

    def test_euler_characteristic_from_betti(self):
        for complex in enumerate_complexes(3):
            if complex.is_empty:
                continue
            group = homology_groups(complex)
            chi = sum((-1) ** d * group.rank(d) for d in group.degrees())
            assert chi == complex.euler_characteristic()


class TestRelativeCohomology:
    def test_empty_subcomplex_is_absolute(self, four_cycle):
        empty = restrict(four_cycle, ())
        assert relative_cohomology(four_cycle, empty) == cohomology_groups(four_cycle)

    def test_cone_pair_suspends(self, four_cycle):
        # (cone K, K) has the reduced cohomology of K shifted up one degree
        space = cone(four_cycle)
        sub = restrict(space, set(range(1, four_cycle.m + 1)))
        assert relative_cohomology(space, sub).as_dict() == {2: (1, ())}


class TestInducedMap:
    def test_identity(self, torus9):
        m = induced_inclusion_map(torus9, torus9, 1)
        assert m == IntMatrix.identity(2)

    def test_point_inclusion_h0(self, four_cycle):
        point = restrict(four_cycle, {2})
        m = induced_inclusion_map(four_cycle, point, 0)
        assert m.to_dense() in ([[1]], [[-1]])

    def test_component_projection(self, two_triangle_poset):
        # restriction of H^0 of a two-component intersection onto the star
        # of one top cell kills one indicator and keeps the other
        panelized = panelize_poset(two_triangle_poset)
        inter = panelized.intersection({1, 2, 3})
        components = panelized.components({1, 2, 3})
        assert len(components) == 2
        one_component = restrict(inter, {v for s in components[0] for v in s})
        m = induced_inclusion_map(inter, one_component, 0)
        assert m.nrows == 1 and m.ncols == 2
        values = sorted(abs(v) for _, _, v in m.triplets())
        assert values in ([1], [1, 1])

    def test_functoriality(self, four_cycle):
        # K_{1,2} ⊆ K_{1,2,3} ⊆ K: restriction composes contravariantly
        big = four_cycle
        mid = restrict(big, {1, 2, 3})
        small = restrict(big, {1, 2})
        direct = induced_inclusion_map(big, small, 0)
        through = induced_inclusion_map(mid, small, 0) @ induced_inclusion_map(
            big, mid, 0
        )
        assert direct == through

    def test_not_a_subcomplex(self, four_cycle):
        other = build_complex(4, [(1, 3)])
        with pytest.raises(ChainComplexError):
            induced_inclusion_map(four_cycle, other, 0)


class TestCohomologyBasis:
    def test_torsion_coordinates(self, rp2):
        bases = CochainComplexBases(chain_complex(rp2))
        basis = bases.basis(2)
        assert basis.group() == (0, (2,))
        torsion_class = basis.classes[0]
        assert basis.coordinates(torsion_class.vector) == (1,)
        doubled = {k: 2 * v for k, v in torsion_class.vector.items()}
        assert basis.coordinates(doubled) == (0,)

    def test_free_coordinates(self, torus9):
        bases = CochainComplexBases(chain_complex(torus9))
        basis = bases.basis(1)
        assert basis.group() == (2, ())
        for i, cls in enumerate(basis.classes):
            coords = basis.coordinates(cls.vector)
            assert coords == tuple(1 if j == i else 0 for j in range(2))

    def test_rejects_non_cocycle(self, torus9):
        bases = CochainComplexBases(chain_complex(torus9))
        with pytest.raises(ChainComplexError):
            bases.basis(1).coordinates({0: 1})
