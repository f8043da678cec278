from fractions import Fraction

import numpy as np
import pytest

from folnerlab import (
    DomainError,
    FiniteSubset,
    FolnerFamily,
    GroupSpec,
    find_invariant_index,
    folner_set,
    invariance_defect,
)

Z1 = GroupSpec.zd(1)
Z2 = GroupSpec.zd(2)
HEIS = GroupSpec.heisenberg3()

CROSS = FiniteSubset(Z2, [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])


def brute_defect(F, E):
    group = F.group
    ef = {group.mul(g, f) for g in E for f in F}
    return Fraction(len(ef ^ set(F.elements)), len(F))


def test_folner_set_examples():
    assert folner_set(FolnerFamily(Z1), 3).to_json() == [[0], [1], [2]]
    assert folner_set(FolnerFamily(Z2), 2).elements == frozenset(
        {(0, 0), (1, 0), (0, 1), (1, 1)}
    )
    f2 = folner_set(FolnerFamily(HEIS), 2)
    assert len(f2) == 16
    assert f2.elements == frozenset(
        (a, b, c) for a in (0, 1) for b in (0, 1) for c in range(4)
    )


def test_folner_sizes():
    for n in (1, 3, 5):
        assert len(folner_set(FolnerFamily(Z2), n)) == n * n
        assert len(folner_set(FolnerFamily(HEIS), n)) == n**4


def test_folner_nesting_and_identity():
    for family in (FolnerFamily(Z2), FolnerFamily(Z2, "centered"), FolnerFamily(HEIS)):
        prev = None
        for n in range(1, 7):
            F = folner_set(family, n)
            assert family.group.identity() in F.elements
            if prev is not None:
                assert prev.issubset(F)
            prev = F


def test_centered_family_exhausts_fixed_elements():
    family = FolnerFamily(Z2, "centered")
    for k in (1, 2, 5):
        for g in [(-k, -k), (k, k), (-k, k), (0, -k)]:
            for n in range(2 * k + 2, 2 * k + 6):
                assert g in folner_set(family, n).elements


def test_centered_style_zd_only():
    with pytest.raises(DomainError):
        FolnerFamily(HEIS, "centered")


def test_heisenberg_defect_decreases():
    E = FiniteSubset(HEIS, [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)])
    family = FolnerFamily(HEIS)
    defects = [invariance_defect(folner_set(family, n), E) for n in (2, 4, 8)]
    assert defects[0] > defects[1] > defects[2]
    # independent brute-force enumeration at n=2 and n=4
    for n, d in zip((2, 4), defects):
        assert d == brute_defect(folner_set(family, n), E)


def test_defect_examples():
    E = FiniteSubset(Z1, [(0,), (1,)])
    assert invariance_defect(folner_set(FolnerFamily(Z1), 10), E) == Fraction(1, 10)
    E2 = FiniteSubset(Z2, [(0, 0), (1, 0)])
    assert invariance_defect(folner_set(FolnerFamily(Z2), 4), E2) == Fraction(1, 4)
    ident = FiniteSubset(Z2, [(0, 0)])
    assert invariance_defect(folner_set(FolnerFamily(Z2), 7), ident) == 0


def test_defect_cross_closed_form():
    family = FolnerFamily(Z2)
    for n in (1, 2, 9, 33, 64):
        assert invariance_defect(folner_set(family, n), CROSS) == Fraction(4, n)


def test_defect_matches_bruteforce_on_random_sets():
    rng = np.random.default_rng(11)
    for group in (Z1, Z2, HEIS):
        for _ in range(30):
            F = FiniteSubset(
                group,
                {tuple(int(x) for x in rng.integers(-6, 7, group.dim)) for _ in range(25)},
            )
            E = FiniteSubset(
                group,
                {tuple(int(x) for x in rng.integers(-2, 3, group.dim)) for _ in range(4)},
            )
            assert invariance_defect(F, E) == brute_defect(F, E)


def test_defect_empty_F_rejected():
    with pytest.raises(DomainError):
        invariance_defect(FiniteSubset(Z1, []), FiniteSubset(Z1, [(0,)]))


def test_simpler_condition_equivalence():
    rng = np.random.default_rng(5)
    family1, family2 = FolnerFamily(Z1), FolnerFamily(Z2)
    for i in range(500):
        group = Z1 if i % 2 == 0 else Z2
        pts = {tuple(int(x) for x in rng.integers(-20, 21, group.dim)) for _ in range(15)}
        F = FiniteSubset(group, pts)
        E = FiniteSubset(
            group,
            {group.identity()}
            | {tuple(int(x) for x in rng.integers(-2, 3, group.dim)) for _ in range(3)},
        )
        delta = Fraction(int(rng.integers(0, 30)), 10)
        ef_size = len({group.mul(g, f) for g in E for f in F})
        assert (invariance_defect(F, E) <= delta) == (
            ef_size <= (1 + delta) * len(F)
        )


def test_find_invariant_index():
    family = FolnerFamily(Z2)
    ident = FiniteSubset(Z2, [(0, 0)])
    assert find_invariant_index(family, ident, Fraction(1, 10), 5) == 1
    assert find_invariant_index(family, CROSS, Fraction(1, 2), 20) == 8
    assert find_invariant_index(family, CROSS, Fraction(1, 10), 50) == 40
    assert find_invariant_index(family, CROSS, Fraction(1, 10), 10) is None
    with pytest.raises(DomainError):
        find_invariant_index(family, CROSS, 0, 10)


def test_folner_index_validation():
    with pytest.raises(DomainError):
        folner_set(FolnerFamily(Z1), 0)
