import itertools
from fractions import Fraction

import numpy as np
import pytest

from folnerlab import (
    DomainError,
    FiniteSubset,
    GroupSpec,
    Quasitiling,
    Window,
    absorb_lower_tiles,
    addable_centers,
    disjointify,
    eps_disjoint_check,
    greedy_construct,
    maximal_marker_set,
    set_inverse,
    set_product,
    translate,
)
from folnerlab.quasitiling import _retention_demand
from folnerlab.verify import _random_instance, trial_rng

Z1 = GroupSpec.zd(1)
Z2 = GroupSpec.zd(2)
HEIS = GroupSpec.heisenberg3()


def box1(lo, n):
    return FiniteSubset.box(Z1, (lo,), (n,))


def brute_force_eps_disjoint(tiles, eps):
    """Exhaustive assignment search, straight from the definition.

    tiles: list of frozensets.  Feasible iff there are pairwise disjoint
    subsets keeping strictly more than (1 - eps) of each tile.
    """
    eps = Fraction(eps)
    owners = {}
    for i, t in enumerate(tiles):
        for x in t:
            owners.setdefault(x, []).append(i)
    contested = [x for x, o in owners.items() if len(o) > 1]
    base = [sum(1 for x in t if len(owners[x]) == 1) for t in tiles]
    assert len(contested) <= 14, "oracle instance too large"
    for combo in itertools.product(*[owners[x] + [-1] for x in contested]):
        kept = list(base)
        for x, pick in zip(contested, combo):
            if pick >= 0:
                kept[pick] += 1
        if all(
            Fraction(len(t) - k) < eps * len(t) for t, k in zip(tiles, kept)
        ):
            return True
    return False


# ---------------------------------------------------------------------------
# greedy_construct


def test_greedy_1d_hand_simulation():
    W = Window.box(Z1, (0,), (12,))
    t = greedy_construct(W, [box1(0, 4)], Fraction(1, 4))
    assert t.centers[0].to_json() == [[0], [4], [8]]
    assert t.meta["covering"] == 1
    assert t.meta["maximal"] is True
    assert addable_centers(t, Fraction(1, 4)) == []


def test_greedy_validation():
    W = Window.box(Z1, (0,), (12,))
    with pytest.raises(DomainError):
        greedy_construct(W, [box1(0, 4)], Fraction(1, 2))  # eps not < 1/2
    with pytest.raises(DomainError):
        greedy_construct(W, [box1(0, 4)], 0)
    with pytest.raises(DomainError):
        greedy_construct(W, [box1(0, 4), box1(0, 3)], Fraction(1, 4))  # not nested
    with pytest.raises(DomainError):
        greedy_construct(W, [box1(1, 3)], Fraction(1, 4))  # identity missing
    with pytest.raises(DomainError):
        greedy_construct(W, [box1(0, 20)], Fraction(1, 4))  # empty interior


def test_greedy_2d_passes_exact_check_and_bound():
    W = Window.box(Z2, (0, 0), (64, 64))
    shapes = [FiniteSubset.box(Z2, (0, 0), (s, s)) for s in (4, 8)]
    eps = Fraction(1, 4)
    t = greedy_construct(W, shapes, eps)
    assert eps_disjoint_check(t, eps)["pass"]
    assert t.meta["covering"] >= 1 - (1 - eps / 2) ** 2
    assert addable_centers(t, eps) == []


def test_greedy_heisenberg_runs_and_checks():
    from folnerlab import FolnerFamily, folner_set

    W = Window(folner_set(FolnerFamily(HEIS), 4))
    shapes = [
        FiniteSubset.box(HEIS, (0, 0, 0), (1, 1, 2)),
        FiniteSubset.box(HEIS, (0, 0, 0), (2, 2, 3)),
    ]
    eps = Fraction(1, 4)
    t = greedy_construct(W, shapes, eps)
    assert eps_disjoint_check(t, eps)["pass"]
    assert t.meta["covering"] >= 1 - (1 - eps / 2) ** 2
    assert addable_centers(t, eps) == []


def test_greedy_maximality_definition():
    # after construction every candidate's tile meets the union of its level
    # and above in at least eps * |shape| cells
    W = Window.box(Z2, (0, 0), (40, 40))
    shapes = [FiniteSubset.box(Z2, (0, 0), (s, s)) for s in (3, 6)]
    eps = Fraction(1, 3)
    t = greedy_construct(W, shapes, eps)
    mul = Z2.mul
    for j in range(len(shapes) - 1, -1, -1):
        covered = set()
        for i in range(j, len(shapes)):
            for c in t.centers[i]:
                covered |= translate(t.shapes[i], c, "right").elements
        for g in W.interior(shapes[j]):
            tile = {mul(x, g) for x in shapes[j]}
            assert len(tile & covered) >= eps * len(shapes[j])


# ---------------------------------------------------------------------------
# eps_disjoint_check


def test_disjoint_tiles_pass_any_eps():
    W = Window.box(Z1, (0,), (30,))
    t = Quasitiling(Z1, [box1(0, 5)], [FiniteSubset(Z1, [(0,), (5,), (20,)])], W, {})
    for eps in (Fraction(1, 100), Fraction(1, 2), Fraction(1, 1)):
        res = eps_disjoint_check(t, eps)
        assert res["pass"]
        assert all(r == 1 for r in res["certificate"]["retained_fraction"])


def test_identical_singletons_fail():
    W = Window.box(Z1, (0,), (3,))
    single = box1(0, 1)
    t = Quasitiling(
        Z1,
        [single, single],
        [FiniteSubset(Z1, [(1,)]), FiniteSubset(Z1, [(1,)])],
        W,
        {},
    )
    res = eps_disjoint_check(t, Fraction(1, 2))
    assert not res["pass"]
    cx = res["counterexample"]
    assert cx["required"] == 2 and cx["available"] == 1
    assert cx["required"] > cx["available"]


def test_overlapping_pair_passes_at_eps_02():
    W = Window.box(Z1, (0,), (19,))
    t = Quasitiling(Z1, [box1(0, 10)], [FiniteSubset(Z1, [(0,), (9,)])], W, {})
    res = eps_disjoint_check(t, Fraction(2, 10))
    assert res["pass"]
    # the witness must itself be a valid family of pairwise-disjoint subsets
    cert = res["certificate"]
    assert sorted(cert["assignment"]) == sorted(
        set(box1(0, 10).elements) | set(box1(9, 10).elements)
    )


def test_retention_demand_encodes_strict_inequality():
    # (1-eps)|A| integral: need that plus one; otherwise the ceiling
    assert _retention_demand(10, Fraction(2, 10)) == 9
    assert _retention_demand(10, Fraction(1, 4)) == 8  # 7.5 -> 8
    assert _retention_demand(1, Fraction(1, 1)) == 1
    assert _retention_demand(8, Fraction(1, 4)) == 7  # 6 -> 7


def test_flow_decision_matches_bruteforce_oracle():
    rng = np.random.default_rng(21)
    passes = fails = 0
    for _ in range(120):
        n_tiles = int(rng.integers(2, 5))
        length = int(rng.integers(3, 7))
        centers = sorted(
            {int(rng.integers(0, 14)) for _ in range(n_tiles)}
        )
        tiles = [frozenset((c + i,) for i in range(length)) for c in centers]
        eps = Fraction(int(rng.integers(10, 90)), 100)
        W = Window.box(Z1, (0,), (30,))
        t = Quasitiling(
            Z1,
            [box1(0, length)],
            [FiniteSubset(Z1, [(c,) for c in centers])],
            W,
            {},
        )
        got = eps_disjoint_check(t, eps)["pass"]
        want = brute_force_eps_disjoint(tiles, eps)
        assert got == want, (centers, length, eps)
        passes += got
        fails += not got
    assert passes and fails  # the sample hits both outcomes


def test_multi_level_check_against_oracle():
    rng = np.random.default_rng(33)
    for _ in range(40):
        c1 = sorted({int(rng.integers(0, 12)) for _ in range(2)})
        c2 = sorted({int(rng.integers(0, 10)) for _ in range(2)})
        shapes = [box1(0, 3), box1(0, 6)]
        tiles = [frozenset((c + i,) for i in range(3)) for c in c1]
        tiles += [frozenset((c + i,) for i in range(6)) for c in c2]
        eps = Fraction(int(rng.integers(10, 80)), 100)
        W = Window.box(Z1, (0,), (30,))
        t = Quasitiling(
            Z1,
            shapes,
            [
                FiniteSubset(Z1, [(c,) for c in c1]),
                FiniteSubset(Z1, [(c,) for c in c2]),
            ],
            W,
            {},
        )
        assert eps_disjoint_check(t, eps)["pass"] == brute_force_eps_disjoint(
            tiles, eps
        )


def test_eps_validation():
    W = Window.box(Z1, (0,), (10,))
    t = Quasitiling(Z1, [box1(0, 2)], [FiniteSubset(Z1, [(0,)])], W, {})
    for bad in (0, Fraction(11, 10), -1):
        with pytest.raises(DomainError):
            eps_disjoint_check(t, bad)


def test_tile_outside_window_rejected():
    W = Window.box(Z1, (0,), (10,))
    t = Quasitiling(Z1, [box1(0, 4)], [FiniteSubset(Z1, [(8,)])], W, {})
    with pytest.raises(DomainError):
        eps_disjoint_check(t, Fraction(1, 4))


# ---------------------------------------------------------------------------
# disjointify


def test_disjointify_already_disjoint_unchanged():
    W = Window.box(Z1, (0,), (30,))
    t = Quasitiling(Z1, [box1(0, 5)], [FiniteSubset(Z1, [(0,), (10,)])], W, {})
    out, cert = disjointify(t)
    assert out.shapes == [box1(0, 5)]
    assert out.centers[0].elements == frozenset({(0,), (10,)})
    assert all(r == 1 for r in cert["retained_fraction"])


def test_disjointify_numbering_example():
    # element 9 has number 10 in the tile at 0 and number 1 in the tile at 9
    W = Window.box(Z1, (0,), (19,))
    t = Quasitiling(Z1, [box1(0, 10)], [FiniteSubset(Z1, [(0,), (9,)])], W, {})
    out, cert = disjointify(t)
    kept = {}
    for _, c, elems in out.tiles():
        kept[c] = sorted(x[0] for x in elems)
    assert kept[(0,)] == list(range(0, 9))
    assert kept[(9,)] == list(range(9, 19))
    assert cert["retained_fraction"] == [Fraction(9, 10), Fraction(1)]


def test_disjointify_2d_overlapping_boxes():
    W = Window.box(Z2, (0, 0), (10, 10))
    shape = FiniteSubset.box(Z2, (0, 0), (4, 4))
    t = Quasitiling(Z2, [shape], [FiniteSubset(Z2, [(0, 0), (2, 0)])], W, {})
    out, cert = disjointify(t)
    seen = {}
    for _, _, elems in out.tiles():
        for x in elems:
            assert x not in seen
            seen[x] = True
    assert set(seen) == set(t.covered_union().elements)
    # both centers kept by their own tiles
    flat = {tc: i for i, tc in enumerate(cert["tile_ids"])}
    for level, c in cert["tile_ids"]:
        assert cert["assignment"][c] == flat[(level, c)]


@pytest.mark.parametrize("order", ["numbering", "insertion"])
def test_disjointify_invariants_on_greedy_outputs(order):
    for grp, trials in ((Z2, 12), (HEIS, 8)):
        for i in range(trials):
            rng = trial_rng(500 + i, i)
            window, shapes, eps = _random_instance(rng, grp)
            t = greedy_construct(window, shapes, eps)
            out, cert = disjointify(t, order=order)
            counts = {}
            for _, _, elems in out.tiles():
                for x in elems:
                    counts[x] = counts.get(x, 0) + 1
            assert all(v == 1 for v in counts.values())
            assert set(counts) == set(t.covered_union().elements)
            flat = {tc: j for j, tc in enumerate(cert["tile_ids"])}
            for level, c in cert["tile_ids"]:
                assert cert["assignment"][c] == flat[(level, c)]
            if order == "insertion":
                for (level, _), lost in zip(
                    cert["tile_ids"], cert["lost_to_earlier"]
                ):
                    assert lost < eps * len(t.shapes[level])


def test_disjointify_order_validation():
    W = Window.box(Z1, (0,), (10,))
    t = Quasitiling(Z1, [box1(0, 2)], [FiniteSubset(Z1, [(0,)])], W, {})
    with pytest.raises(DomainError):
        disjointify(t, order="random")


# ---------------------------------------------------------------------------
# absorb_lower_tiles


def test_absorb_nothing_to_do():
    s = box1(3, 4)
    levels = [(box1(0, 2), FiniteSubset(Z1, [(20,), (30,)]))]
    out, rep = absorb_lower_tiles(s, levels)
    assert out == s
    assert rep["boundary_clean"] and rep["envelope_ok"]


def test_absorb_1d_single_level():
    s = box1(3, 6)  # [3, 9)
    centers = FiniteSubset(Z1, [(2 * i,) for i in range(-2, 9)])
    out, rep = absorb_lower_tiles(s, [(box1(0, 2), centers)])
    assert sorted(x[0] for x in out) == list(range(2, 10))
    assert rep["boundary_clean"] and rep["envelope_ok"]


def test_absorb_two_level_cascade():
    s = box1(5, 4)  # [5, 9)
    lvl2 = (box1(0, 4), FiniteSubset(Z1, [(4 * i,) for i in range(-2, 6)]))
    lvl1 = (box1(0, 2), FiniteSubset(Z1, [(2 * i,) for i in range(-4, 12)]))
    out, rep = absorb_lower_tiles(s, [lvl2, lvl1])
    assert sorted(x[0] for x in out) == list(range(4, 12))
    assert rep["boundary_clean"] and rep["envelope_ok"]
    # brute-force boundary scan
    final = set(out.elements)
    for shape, centers in (lvl2, lvl1):
        for c in centers:
            tile = set(translate(shape, c, "right").elements)
            if tile & final:
                assert tile <= final
    # envelope: E = T1 T1^-1 T2 T2^-1 applied to the seed
    e1 = set_product(box1(0, 2), set_inverse(box1(0, 2)))
    e2 = set_product(box1(0, 4), set_inverse(box1(0, 4)))
    envelope = set_product(set_product(e1, e2), box1(5, 4))
    assert out.issubset(envelope)


def test_absorb_overlapping_level_rejected():
    s = box1(0, 2)
    centers = FiniteSubset(Z1, [(0,), (1,)])
    with pytest.raises(DomainError):
        absorb_lower_tiles(s, [(box1(0, 3), centers)])


def test_absorb_tile_meeting_two_higher_tiles_rejected():
    s = box1(0, 1)
    lvl_hi = (box1(0, 2), FiniteSubset(Z1, [(2,), (4,)]))
    lvl_lo = (box1(0, 3), FiniteSubset(Z1, [(3,)]))  # meets [2,4) and [4,6)
    with pytest.raises(DomainError):
        absorb_lower_tiles(s, [lvl_hi, lvl_lo])


def test_absorb_boundary_breakage_detected():
    # the absorbed small tile touches a large tile that never met the seed
    s = FiniteSubset(Z1, [(10,)])
    lvl_hi = (box1(0, 4), FiniteSubset(Z1, [(11,)]))  # [11, 15), misses the seed
    lvl_lo = (box1(0, 3), FiniteSubset(Z1, [(9,)]))  # [9, 12) meets seed and [11,15)
    with pytest.raises(DomainError):
        absorb_lower_tiles(s, [lvl_hi, lvl_lo])


# ---------------------------------------------------------------------------
# maximal_marker_set


def test_marker_1d_hand_simulation():
    W = Window.box(Z1, (0,), (20,))
    res = maximal_marker_set(W, box1(0, 3))
    assert res["v"].to_json() == [[0], [3], [6], [9], [12], [15]]
    assert res["f_cov"].to_json() == [[-2], [-1], [0], [1], [2]]


def test_marker_2d_grid():
    W = Window.box(Z2, (0, 0), (16, 16))
    F = FiniteSubset.box(Z2, (0, 0), (3, 3))
    res = maximal_marker_set(W, F)
    V = res["v"]
    assert V.elements == frozenset(
        (x, y) for x in range(0, 14, 3) for y in range(0, 14, 3)
    )
    # exhaustive disjointness and covering checks
    seen = set()
    for v in V:
        tile = set(translate(F, v, "right").elements)
        assert not (tile & seen)
        seen |= tile
    cover = set()
    for v in V:
        cover |= set(translate(res["f_cov"], v, "right").elements)
    assert W.interior(F).elements <= cover


def test_marker_single_position():
    W = Window.box(Z1, (0,), (3,))
    res = maximal_marker_set(W, box1(0, 3))
    assert res["v"].to_json() == [[0]]


def test_marker_empty_interior_rejected():
    W = Window.box(Z1, (0,), (3,))
    with pytest.raises(DomainError):
        maximal_marker_set(W, box1(0, 5))
