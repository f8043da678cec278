import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folnerlab import (
    DomainError,
    FiniteSubset,
    GroupSpec,
    group_op,
    parse_group,
    set_inverse,
    set_product,
    translate,
)

Z1 = GroupSpec.zd(1)
Z2 = GroupSpec.zd(2)
HEIS = GroupSpec.heisenberg3()


def heis_matrix(g):
    """Oracle: (a, b, c) as the upper-triangular matrix [[1,a,c],[0,1,b],[0,0,1]]."""
    a, b, c = g
    return np.array([[1, a, c], [0, 1, b], [0, 0, 1]], dtype=object)


def heis_from_matrix(m):
    return (int(m[0, 1]), int(m[1, 2]), int(m[0, 2]))


def test_zd_mul():
    assert Z2.mul((1, 2), (3, 4)) == (4, 6)


def test_heisenberg_mul_matches_matrix_oracle():
    assert HEIS.mul((1, 0, 0), (0, 1, 0)) == (1, 1, 1)
    rng = np.random.default_rng(0)
    for _ in range(200):
        g = tuple(int(x) for x in rng.integers(-50, 51, 3))
        h = tuple(int(x) for x in rng.integers(-50, 51, 3))
        expected = heis_from_matrix(heis_matrix(g) @ heis_matrix(h))
        assert HEIS.mul(g, h) == expected


def test_identity_and_inverse():
    for group in (Z1, Z2, HEIS):
        e = group.identity()
        assert group.inv(e) == e
        assert group_op(group, "identity") == e


@pytest.mark.parametrize("group", [Z1, Z2, HEIS])
def test_random_associativity_and_inverses(group):
    rng = np.random.default_rng(42)
    for _ in range(1000):
        g, h, k = (
            tuple(int(x) for x in rng.integers(-(2**20), 2**20, group.dim))
            for _ in range(3)
        )
        assert group.mul(group.mul(g, h), k) == group.mul(g, group.mul(h, k))
        assert group.mul(g, group.inv(g)) == group.identity()
        assert group.mul(group.inv(g), g) == group.identity()


@given(
    st.tuples(*[st.integers(-(2**30), 2**30)] * 3),
    st.tuples(*[st.integers(-(2**30), 2**30)] * 3),
    st.tuples(*[st.integers(-(2**30), 2**30)] * 3),
)
@settings(max_examples=200)
def test_heisenberg_associativity_hypothesis(g, h, k):
    assert HEIS.mul(HEIS.mul(g, h), k) == HEIS.mul(g, HEIS.mul(h, k))


def test_overflow_is_an_error():
    big = 2**62
    with pytest.raises(OverflowError):
        Z1.mul((big,), (big,))
    with pytest.raises(OverflowError):
        HEIS.mul((2**32, 0, 0), (0, 2**32, 0))


def test_mismatched_groups_rejected():
    E = FiniteSubset(Z1, [(0,)])
    F = FiniteSubset(Z2, [(0, 0)])
    with pytest.raises(DomainError):
        set_product(E, F)


def test_set_product_examples():
    E = FiniteSubset(Z1, [(0,), (1,)])
    F = FiniteSubset(Z1, [(0,), (1,), (2,)])
    # brute-force oracle
    expected = sorted({(g[0] + f[0],) for g in E for f in F})
    assert list(set_product(E, F)) == expected
    assert len(set_product(E, F)) == 4

    Eh = FiniteSubset(HEIS, [(0, 0, 0), (1, 0, 0)])
    Fh = FiniteSubset(HEIS, [(0, 1, 0)])
    assert set_product(Eh, Fh).elements == frozenset({(0, 1, 0), (1, 1, 1)})


def test_set_product_identity_case():
    F = FiniteSubset(Z2, [(3, 4), (-1, 0)])
    E = FiniteSubset(Z2, [(0, 0)])
    assert set_product(E, F) == F


def test_translate():
    F = FiniteSubset.box(Z2, (0, 0), (2, 2))
    assert translate(F, (0, 0), "left") == F
    right = translate(F, (5, 5), "right")
    assert right.elements == frozenset({(5, 5), (6, 5), (5, 6), (6, 6)})
    Fh = FiniteSubset(HEIS, [(0, 0, 0), (1, 0, 0)])
    assert translate(Fh, (0, 1, 0), "right").elements == frozenset(
        {(0, 1, 0), (1, 1, 1)}
    )


def test_translate_preserves_cardinality():
    rng = np.random.default_rng(3)
    for group in (Z2, HEIS):
        pts = {tuple(int(x) for x in rng.integers(-9, 9, group.dim)) for _ in range(30)}
        F = FiniteSubset(group, pts)
        g = tuple(int(x) for x in rng.integers(-9, 9, group.dim))
        assert len(translate(F, g, "left")) == len(F)
        assert len(translate(F, g, "right")) == len(F)


def test_product_cardinality_bounds():
    rng = np.random.default_rng(4)
    for group in (Z1, Z2, HEIS):
        for _ in range(50):
            E = FiniteSubset(
                group,
                {tuple(int(x) for x in rng.integers(-5, 6, group.dim)) for _ in range(6)},
            )
            F = FiniteSubset(
                group,
                {tuple(int(x) for x in rng.integers(-5, 6, group.dim)) for _ in range(9)},
            )
            p = len(set_product(E, F))
            assert max(len(E), len(F)) <= p <= len(E) * len(F)


def test_set_inverse_is_involution():
    F = FiniteSubset(HEIS, [(1, 2, 3), (0, -1, 4), (2, 2, 2)])
    assert set_inverse(set_inverse(F)) == F


def test_iteration_is_canonical_and_deterministic():
    F = FiniteSubset(Z2, [(1, 0), (-1, 2), (0, 0), (1, -5)])
    once = list(F)
    assert once == sorted(once)
    assert once == list(F)


def test_numpy_and_python_product_paths_agree():
    # a box pair large enough for the vectorized path, recomputed elementwise
    E = FiniteSubset.box(Z2, (-2, -2), (8, 8))
    F = FiniteSubset.box(Z2, (0, 0), (40, 40))
    fast = set_product(E, F)
    slow = {(a + c, b + d) for (a, b) in E for (c, d) in F}
    assert fast.elements == frozenset(slow)


def test_parse_group():
    assert parse_group("z2") == Z2
    assert parse_group("zd:3") == GroupSpec.zd(3)
    assert parse_group("heis") == HEIS
    with pytest.raises(DomainError):
        parse_group("f2")


def test_box_validation():
    with pytest.raises(DomainError):
        FiniteSubset.box(Z2, (0, 0), (0, 3))
    with pytest.raises(DomainError):
        FiniteSubset.box(Z2, (0,), (3,))


def test_element_validation():
    with pytest.raises(DomainError):
        FiniteSubset(Z2, [(1, 2, 3)])
    with pytest.raises(DomainError):
        FiniteSubset(Z1, [(2**70,)])
