import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facelab import IntMatrix, kernel_basis, smith_normal_form, solve


def random_matrix(rng, max_dim=8, density=0.4, bound=9):
    nrows = rng.randint(0, max_dim)
    ncols = rng.randint(0, max_dim)
    entries = []
    for r in range(nrows):
        for c in range(ncols):
            if rng.random() < density:
                v = rng.randint(-bound, bound)
                if v:
                    entries.append((r, c, v))
    return IntMatrix(nrows, ncols, entries)


def assert_snf_postconditions(matrix, result):
    diagonal = result.diagonal
    assert all(d > 0 for d in diagonal)
    for a, b in zip(diagonal, diagonal[1:]):
        assert b % a == 0
    if result.U is not None:
        assert result.U @ matrix @ result.V == result.d_matrix()
        assert result.U @ result.Uinv == IntMatrix.identity(matrix.nrows)
        assert result.Uinv @ result.U == IntMatrix.identity(matrix.nrows)
        assert result.V @ result.Vinv == IntMatrix.identity(matrix.ncols)
        assert result.Vinv @ result.V == IntMatrix.identity(matrix.ncols)


class TestHandCases:
    def test_two_by_two(self):
        # row/col elimination of [[2,0],[0,3]] by hand: gcd 1, lcm 6
        result = smith_normal_form(IntMatrix.from_dense([[2, 0], [0, 3]]))
        assert result.diagonal == [1, 6]

    def test_zero_matrix(self):
        result = smith_normal_form(IntMatrix(3, 4), transforms=True)
        assert result.diagonal == []
        assert result.U == IntMatrix.identity(3)
        assert result.V == IntMatrix.identity(4)

    def test_identity(self):
        result = smith_normal_form(IntMatrix.identity(5))
        assert result.diagonal == [1] * 5

    def test_empty_shapes(self):
        for shape in ((0, 0), (0, 5), (5, 0)):
            result = smith_normal_form(IntMatrix(*shape), transforms=True)
            assert result.diagonal == []

    def test_torsion_chain(self):
        result = smith_normal_form(IntMatrix.from_dense([[2, 0], [0, 4]]))
        assert result.diagonal == [2, 4]

    def test_duplicate_entry_rejected(self):
        with pytest.raises(ValueError):
            IntMatrix(2, 2, [(0, 0, 1), (0, 0, 2)])


class TestRandomized:
    def test_against_sympy(self):
        import sympy
        from sympy.matrices.normalforms import smith_normal_form as sympy_snf

        rng = random.Random(101)
        for _ in range(150):
            matrix = random_matrix(rng, max_dim=7)
            result = smith_normal_form(matrix, transforms=True)
            assert_snf_postconditions(matrix, result)
            if matrix.nrows and matrix.ncols:
                reference = sympy.Matrix(matrix.to_dense())
                expected = sorted(
                    abs(x) for x in sympy_snf(reference).diagonal() if x != 0
                )
                assert sorted(result.diagonal) == expected

    def test_deterministic(self):
        rng = random.Random(55)
        matrices = [random_matrix(rng) for _ in range(25)]
        for matrix in matrices:
            first = smith_normal_form(matrix, transforms=True)
            second = smith_normal_form(matrix, transforms=True)
            assert first.diagonal == second.diagonal
            assert first.U == second.U and first.V == second.V

    def test_fast_path_matches_transform_path(self):
        rng = random.Random(77)
        for _ in range(150):
            matrix = random_matrix(rng)
            assert (
                smith_normal_form(matrix).diagonal
                == smith_normal_form(matrix, transforms=True).diagonal
            )


@settings(max_examples=80, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=6),
        min_size=1,
        max_size=6,
    ).filter(lambda rows: len({len(r) for r in rows}) == 1)
)
def test_snf_properties_hypothesis(rows):
    matrix = IntMatrix.from_dense(rows)
    result = smith_normal_form(matrix, transforms=True)
    assert_snf_postconditions(matrix, result)


class TestKernelAndSolve:
    def test_kernel_is_saturated(self):
        rng = random.Random(31)
        for _ in range(60):
            matrix = random_matrix(rng, max_dim=6)
            if not (matrix.nrows and matrix.ncols):
                continue
            kernel = kernel_basis(matrix)
            assert (matrix @ kernel).is_zero()
            assert kernel.ncols == matrix.ncols - smith_normal_form(matrix).rank

    def test_solve_roundtrip(self):
        rng = random.Random(32)
        for _ in range(60):
            matrix = random_matrix(rng, max_dim=6)
            x0 = {c: rng.randint(-4, 4) for c in range(matrix.ncols)}
            x0 = {c: v for c, v in x0.items() if v}
            rhs = matrix.apply(x0)
            x = solve(matrix, rhs)
            assert x is not None
            assert matrix.apply(x) == rhs

    def test_solve_detects_unsolvable(self):
        matrix = IntMatrix.from_dense([[2]])
        assert solve(matrix, {0: 1}) is None
        matrix = IntMatrix.from_dense([[1], [0]])
        assert solve(matrix, {1: 1}) is None


def test_json_round_trip():
    matrix = IntMatrix.from_dense([[0, 3], [-2, 0]])
    assert IntMatrix.from_json(matrix.to_json()) == matrix
