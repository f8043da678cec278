"""Seeded verification suites behind the ``verify`` CLI subcommand.

Every suite draws its instances from PCG64 streams spawned as
SeedSequence(root_seed, spawn_key=(trial,)), so a (seed, trials) pair pins the
whole run bit-for-bit.  Suites return JSON-ready report dicts that contain no
timing or environment data; two runs with the same arguments produce identical
reports.  Independent trials may be evaluated by a small thread pool capped by
the QUASITILE_THREADS environment variable (0 or unset means one worker per
CPU); results are collected in trial order, so scheduling never changes a
report.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .density import (
    Window,
    check_boundary_lemma,
    check_core_lemma,
    check_large_core,
    e_core,
    lower_density_over_window,
)
from .errors import DomainError
from .folner import FolnerFamily, folner_set, invariance_defect
from .groups import FiniteSubset, GroupSpec, parse_group, set_inverse, set_product
from .quasitiling import (
    Quasitiling,
    absorb_lower_tiles,
    addable_centers,
    disjointify,
    eps_disjoint_check,
    greedy_construct,
    maximal_marker_set,
)
from .symbolic import (
    Alphabet,
    Configuration,
    Distribution,
    Pattern,
    bernoulli_entropy_exact,
    empirical_entropy_rate,
    shannon_entropy,
    verify_frequency_lemma,
)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Deterministic per-trial stream: PCG64 over SeedSequence(seed, (trial,))."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),)))
    )


def thread_count() -> int:
    raw = os.environ.get("QUASITILE_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 0:
        raise DomainError(f"QUASITILE_THREADS must be >= 0, got {raw!r}")
    if n == 0:
        return os.cpu_count() or 1
    return n


def _run_trials(fn, trials: int) -> list:
    workers = thread_count()
    if workers <= 1 or trials <= 1:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=min(workers, trials)) as pool:
        return list(pool.map(fn, range(trials)))


def _frac(x: Fraction) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


# ---------------------------------------------------------------------------
# Folner defect exactness


def folner_defect_suite(n_max: int = 100) -> dict:
    """defect([0,n)^2, {e, +-(1,0), +-(0,1)}) must equal 4/n for every n."""
    group = GroupSpec.zd(2)
    family = FolnerFamily(group)
    cross = FiniteSubset(group, [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
    failing = []
    for n in range(1, n_max + 1):
        if invariance_defect(folner_set(family, n), cross) != Fraction(4, n):
            failing.append(n)
    return {
        "suite": "folner-defect",
        "group": "z2",
        "n_max": n_max,
        "checked": n_max,
        "violations": len(failing),
        "failing": failing,
    }


# ---------------------------------------------------------------------------
# Core lemma and core composition


def _random_subset(rng, group: GroupSpec, span: int, size: int) -> FiniteSubset:
    pts = set()
    while len(pts) < size:
        pts.add(tuple(int(x) for x in rng.integers(-span, span + 1, group.dim)))
    return FiniteSubset(group, pts)


def _random_box(rng, group: GroupSpec, side_lo: int, side_hi: int, origin_span: int = 40):
    extent = [int(rng.integers(side_lo, side_hi + 1)) for _ in range(group.dim)]
    origin = [int(rng.integers(-origin_span, origin_span + 1)) for _ in range(group.dim)]
    return FiniteSubset.box(group, origin, extent)


def core_lemma_suite(trials: int, seed: int, eps=None) -> dict:
    """Randomized check: defect(F, E) <= eps/|E| implies |F_E| >= (1-eps)|F|."""
    fixed_eps = None if eps is None else Fraction(eps)

    def one(i: int) -> tuple[bool, bool]:
        rng = trial_rng(seed, i)
        group = GroupSpec.zd(1) if i % 2 == 0 else GroupSpec.zd(2)
        extra = int(rng.integers(1, 5))
        E = _random_subset(rng, group, 3, extra).union(
            FiniteSubset(group, [group.identity()])
        )
        eps_i = fixed_eps or Fraction(int(rng.integers(5, 96)), 100)
        if group.dim == 1:
            F = _random_box(rng, group, 10, 200)
        else:
            F = _random_box(rng, group, 5, 30)
        if rng.random() < 0.25:
            noise = _random_subset(rng, group, 60, int(rng.integers(1, 8)))
            F = F.union(noise)
        rep = check_core_lemma(E, eps_i, F)
        return rep["pass"], rep["hypothesis_met"]

    results = _run_trials(one, trials)
    return {
        "suite": "core-lemma",
        "seed": seed,
        "trials": trials,
        "eps": None if fixed_eps is None else _frac(fixed_eps),
        "violations": sum(1 for ok, _ in results if not ok),
        "hypothesis_met": sum(1 for _, h in results if h),
    }


def core_composition_suite(trials: int, seed: int) -> dict:
    """(F_E)_D = F_{ED} as exact set equality on random instances.

    E and D contain the identity, as everywhere cores are taken; without it
    the composition identity genuinely fails (F_{ED} can keep elements whose
    single-step translates already leave F).
    """

    def one(i: int) -> bool:
        rng = trial_rng(seed, i)
        group = GroupSpec.zd(1) if i % 2 == 0 else GroupSpec.zd(2)
        F = _random_box(rng, group, 4, 14 if group.dim == 2 else 60)
        if rng.random() < 0.5:
            F = F.union(_random_subset(rng, group, 25, int(rng.integers(1, 12))))
        ident = FiniteSubset(group, [group.identity()])
        E = _random_subset(rng, group, 2, int(rng.integers(1, 4))).union(ident)
        D = _random_subset(rng, group, 2, int(rng.integers(1, 4))).union(ident)
        return e_core(e_core(F, E), D) == e_core(F, set_product(E, D))

    results = _run_trials(one, trials)
    return {
        "suite": "core-composition",
        "seed": seed,
        "trials": trials,
        "violations": sum(1 for ok in results if not ok),
    }


# ---------------------------------------------------------------------------
# Quasitiling construction, disjointness, disjointification


def _random_instance(rng, group: GroupSpec):
    """Window, nested shapes and eps for one greedy run."""
    k = int(rng.integers(1, 4))
    eps = Fraction(int(rng.integers(5, 46)), 100)
    if group.kind == "zd":
        d = group.dim
        ext = np.array([int(rng.integers(1, 4)) for _ in range(d)])
        shapes = []
        for _ in range(k):
            shapes.append(FiniteSubset.box(group, (0,) * d, tuple(int(x) for x in ext)))
            ext = ext + np.array([int(rng.integers(1, 4)) for _ in range(d)])
        span = max(int(s.rows().max()) + 1 for s in shapes)
        side = span * int(rng.integers(4, 7))
        window = Window.box(group, (0,) * d, (side,) * d)
    else:
        a = b = 1
        c = 1
        shapes = []
        for _ in range(k):
            shapes.append(FiniteSubset.box(group, (0, 0, 0), (a, b, c)))
            a = min(a + int(rng.integers(0, 2)), 3)
            b = min(b + int(rng.integers(0, 2)), 3)
            c = min(c + int(rng.integers(1, 3)), 6)
        for i in range(1, k):  # growth above is monotone, so boxes nest
            assert shapes[i - 1].issubset(shapes[i])
        n = int(rng.integers(4, 7))
        window = Window(folner_set(FolnerFamily(group), n))
    return window, shapes, eps


def quasitiling_build_report(window: Window, shapes, eps) -> dict:
    """Build greedily, then re-verify disjointness, maximality and covering."""
    eps = Fraction(eps)
    tiling = greedy_construct(window, shapes, eps)
    check = eps_disjoint_check(tiling, eps)
    addable = addable_centers(tiling, eps)
    covering = tiling.meta["covering"]
    bound = tiling.meta["covering_bound"]
    violations = 0
    if not check["pass"]:
        violations += 1
    if addable:
        violations += 1
    if covering < bound:
        violations += 1
    return {
        "suite": "quasitiling-build",
        "eps": _frac(eps),
        "levels": len(shapes),
        "tiles_per_level": [len(c) for c in tiling.centers],
        "covering": _frac(covering),
        "covering_bound": _frac(bound),
        "eps_disjoint": check["pass"],
        "addable_centers": len(addable),
        "maximal": not addable,
        "violations": violations,
        "tiling": tiling,
        "certificate": check.get("certificate"),
    }


def quasitiling_suite(trials: int, seed: int, group: str = "z2") -> dict:
    gspec = parse_group(group)

    def one(i: int) -> dict:
        rng = trial_rng(seed, i)
        window, shapes, eps = _random_instance(rng, gspec)
        rep = quasitiling_build_report(window, shapes, eps)
        return {
            "eps": rep["eps"],
            "levels": rep["levels"],
            "tiles": sum(rep["tiles_per_level"]),
            "covering": rep["covering"],
            "violations": rep["violations"],
        }

    results = _run_trials(one, trials)
    return {
        "suite": "quasitiling",
        "group": group,
        "seed": seed,
        "trials": trials,
        "violations": sum(r["violations"] for r in results),
        "details": results,
    }


def disjointify_report(
    tiling: Quasitiling, order: str = "insertion", strict_retention: bool = False
) -> dict:
    """Disjointify one tiling and exhaustively verify the output properties.

    Always asserted: pairwise-disjoint output tiles, coverage preserved, every
    center kept by its own tile, and (for greedy-built inputs under the
    insertion order) each tile's loss to earlier tiles strictly below
    eps * |shape|, which is the bound the construction rule guarantees.  The
    full per-tile retention of a (1 - eps)-fraction also counts pinned-away
    centers of later tiles, so it is asserted only where it is known to hold
    (strict_retention=True) and reported otherwise.
    """
    eps = tiling.meta.get("eps")
    out, cert = disjointify(tiling, order=order)
    counts: dict = {}
    for _, _, elems in out.tiles():
        for x in elems:
            counts[x] = counts.get(x, 0) + 1
    disjoint_ok = all(v == 1 for v in counts.values())
    union_ok = set(counts) == set(tiling.covered_union().elements)

    flat = {tc: i for i, tc in enumerate(cert["tile_ids"])}
    centers_ok = True
    for level, c in cert["tile_ids"]:
        if cert["assignment"].get(c) != flat[(level, c)]:
            centers_ok = False
    retention = cert["retained_fraction"]
    min_retained = min(retention) if retention else Fraction(1)
    retention_ok = eps is None or all(r >= 1 - Fraction(eps) for r in retention)
    bound_ok = True
    if eps is not None and order == "insertion":
        eps = Fraction(eps)
        for (level, _), lost in zip(cert["tile_ids"], cert["lost_to_earlier"]):
            if lost >= eps * len(tiling.shapes[level]):
                bound_ok = False
    checks = [disjoint_ok, union_ok, centers_ok, bound_ok]
    if strict_retention:
        checks.append(retention_ok)
    violations = sum(1 for ok in checks if not ok)
    return {
        "suite": "disjointify",
        "tiles": len(cert["tile_ids"]),
        "order": order,
        "disjoint_ok": disjoint_ok,
        "union_ok": union_ok,
        "centers_ok": centers_ok,
        "earlier_loss_bound_ok": bound_ok,
        "retention_ok": retention_ok,
        "min_retained": _frac(min_retained),
        "violations": violations,
    }


def disjointify_suite(trials: int, seed: int, group: str = "z2") -> dict:
    gspec = parse_group(group)

    def one(i: int) -> dict:
        rng = trial_rng(seed, i)
        window, shapes, eps = _random_instance(rng, gspec)
        tiling = greedy_construct(window, shapes, eps)
        rep = disjointify_report(tiling)
        return {"tiles": rep["tiles"], "violations": rep["violations"],
                "retention_ok": rep["retention_ok"],
                "min_retained": rep["min_retained"]}

    results = _run_trials(one, trials)
    return {
        "suite": "disjointify-suite",
        "group": group,
        "seed": seed,
        "trials": trials,
        "violations": sum(r["violations"] for r in results),
        "details": results,
    }


# ---------------------------------------------------------------------------
# Marker packings


def marker_report(window: Window, F: FiniteSubset) -> dict:
    """Run the greedy marker packing and exhaustively verify both properties."""
    res = maximal_marker_set(window, F)
    V = res["v"]
    group = window.group
    mul = group.mul
    seen: set = set()
    disjoint_ok = True
    for v in V:
        for t in F:
            x = mul(t, v)
            if x in seen:
                disjoint_ok = False
            seen.add(x)
    cover: set = set()
    for v in V:
        for t in res["f_cov"]:
            cover.add(mul(t, v))
    covering_ok = window.interior(F).elements <= cover
    violations = (0 if disjoint_ok else 1) + (0 if covering_ok else 1)
    return {
        "suite": "marker",
        "markers": len(V),
        "interior": len(window.interior(F)),
        "disjoint_ok": disjoint_ok,
        "covering_ok": covering_ok,
        "violations": violations,
        "v": V,
        "f_cov": res["f_cov"],
    }


def marker_suite(trials: int, seed: int, group: str = "z2") -> dict:
    gspec = parse_group(group)

    def one(i: int) -> dict:
        rng = trial_rng(seed, i)
        if gspec.kind == "zd":
            ext = tuple(int(rng.integers(2, 6)) for _ in range(gspec.dim))
            F = FiniteSubset.box(gspec, (0,) * gspec.dim, ext)
            side = max(ext) * int(rng.integers(4, 8))
            window = Window.box(gspec, (0,) * gspec.dim, (side,) * gspec.dim)
        else:
            F = FiniteSubset.box(gspec, (0, 0, 0), (2, 2, int(rng.integers(2, 5))))
            window = Window(folner_set(FolnerFamily(gspec), int(rng.integers(4, 7))))
        rep = marker_report(window, F)
        return {"markers": rep["markers"], "violations": rep["violations"]}

    results = _run_trials(one, trials)
    return {
        "suite": "marker-suite",
        "group": group,
        "seed": seed,
        "trials": trials,
        "violations": sum(r["violations"] for r in results),
        "details": results,
    }


# ---------------------------------------------------------------------------
# Boundary and large-core lemma suites


def _grow_box_until_invariant(group: GroupSpec, star: FiniteSubset, delta: Fraction,
                              n0: int = 8, cap: int = 600) -> FiniteSubset:
    n = n0
    while True:
        F = FiniteSubset.box(group, (0,) * group.dim, (n,) * group.dim)
        if invariance_defect(F, star) <= delta:
            return F
        n *= 2
        if n > cap:
            raise DomainError(f"no ({delta})-invariant box below side {cap}")


def boundary_suite(trials: int, seed: int) -> dict:
    """Hypothesis-satisfying instances of the boundary-tile mass bound."""

    def one(i: int) -> tuple[bool, bool]:
        rng = trial_rng(seed, i)
        group = GroupSpec.zd(1) if i % 2 == 0 else GroupSpec.zd(2)
        d = group.dim
        if d == 1:
            top_ext = (int(rng.integers(2, 4)),)
        else:
            top_ext = (2, 1) if rng.random() < 0.5 else (1, 2)
        top = FiniteSubset.box(group, (0,) * d, top_ext)
        shapes = [top]
        if rng.random() < 0.5 and len(top) > 1:
            sub = FiniteSubset.box(group, (0,) * d, (1,) * d)
            shapes = [sub, top]
        eps = Fraction(int(rng.integers(30, 91)), 100)
        star = set_product(top, set_inverse(top))
        delta = eps / (len(top) * len(star))
        F = _grow_box_until_invariant(group, star, delta)
        side = int(F.rows().max()) + 1
        span = max(int(s.rows().max()) + 1 for s in shapes)
        margin = span + 2
        window = Window.box(group, (-margin,) * d, (side + 2 * margin,) * d)
        centers = []
        for shape in shapes:
            pts = set()
            for _ in range(int(rng.integers(10, 30))):
                pts.add(tuple(int(x) for x in rng.integers(-margin, side + 1, d)))
            centers.append(FiniteSubset(group, pts))
        tiling = Quasitiling(group, shapes, centers, window, {})
        rep = check_boundary_lemma(tiling, F, eps)
        return rep["pass"], rep["hypothesis_met"]

    results = _run_trials(one, trials)
    return {
        "suite": "boundary-lemma",
        "seed": seed,
        "trials": trials,
        "violations": sum(1 for ok, _ in results if not ok),
        "hypothesis_met": sum(1 for _, h in results if h),
    }


def large_core_suite(trials: int, seed: int) -> dict:
    """Exact periodic tilings with random cores; the density drop stays < gamma."""

    def one(i: int) -> tuple[bool, bool]:
        rng = trial_rng(seed, i)
        group = GroupSpec.zd(1) if i % 2 == 0 else GroupSpec.zd(2)
        d = group.dim
        ext = tuple(int(rng.integers(2, 9 if d == 2 else 11)) for _ in range(d))
        shape = FiniteSubset.box(group, (0,) * d, ext)
        size = len(shape)
        if rng.random() < 0.2:
            core = shape
            miss = 0
        else:
            miss = int(rng.integers(1, max(2, size // 4)))
            drop = rng.choice(size, size=miss, replace=False)
            cells = shape.sorted_elements()
            core = FiniteSubset(group, [c for j, c in enumerate(cells) if j not in set(drop.tolist())])
        gamma = Fraction(miss, size) + Fraction(int(rng.integers(1, 21)), 100)
        reps = int(rng.integers(3, 6))
        window = Window.box(group, (0,) * d, tuple(e * reps for e in ext))
        grid_pts = []
        for idx in np.ndindex(*(reps,) * d):
            if rng.random() < 0.85:
                grid_pts.append(tuple(int(e * j) for e, j in zip(ext, idx)))
        if not grid_pts:
            grid_pts.append((0,) * d)
        centers = FiniteSubset(group, grid_pts)
        factor = int(rng.integers(1, 3))
        F_test = FiniteSubset.box(group, (0,) * d, tuple(e * factor for e in ext))
        rep = check_large_core([shape], [core], [centers], gamma, F_test, window)
        return rep["pass"], True

    results = _run_trials(one, trials)
    return {
        "suite": "large-core",
        "seed": seed,
        "trials": trials,
        "violations": sum(1 for ok, _ in results if not ok),
        "hypothesis_met": trials,
    }


# ---------------------------------------------------------------------------
# Absorption


def absorption_suite(trials: int, seed: int) -> dict:
    """Two-level aligned hierarchies: absorb, then verify both guarantees."""

    def one(i: int) -> tuple[bool, list[int]]:
        rng = trial_rng(seed, i)
        group = GroupSpec.zd(1) if i % 3 == 0 else GroupSpec.zd(2)
        d = group.dim
        s1 = int(rng.integers(2, 5))
        s2 = s1 * int(rng.integers(2, 4))
        reps = int(rng.integers(3, 6))
        R = s2 * reps
        T1 = FiniteSubset.box(group, (0,) * d, (s1,) * d)
        T2 = FiniteSubset.box(group, (0,) * d, (s2,) * d)
        c2 = [
            tuple(int(s2 * j) for j in idx)
            for idx in np.ndindex(*(reps,) * d)
            if rng.random() < 0.5
        ]
        c1 = [
            tuple(int(s1 * j) for j in idx)
            for idx in np.ndindex(*(R // s1,) * d)
            if rng.random() < 0.35
        ]
        side = int(rng.integers(2, max(3, R // 2)))
        orig = tuple(int(rng.integers(0, R - side + 1)) for _ in range(d))
        s_tilde = FiniteSubset.box(group, orig, (side,) * d)
        for _ in range(int(rng.integers(0, 4))):
            s_tilde = s_tilde.union(
                FiniteSubset(group, [tuple(int(x) for x in rng.integers(0, R, d))])
            )
        levels = [
            (T2, FiniteSubset(group, c2)),
            (T1, FiniteSubset(group, c1)),
        ]
        _, rep = absorb_lower_tiles(s_tilde, levels)
        ok = rep["boundary_clean"] and rep["envelope_ok"]
        return ok, rep["absorbed_per_level"]

    results = _run_trials(one, trials)
    return {
        "suite": "absorption",
        "seed": seed,
        "trials": trials,
        "violations": sum(1 for ok, _ in results if not ok),
        "absorbed": [a for _, a in results],
    }


# ---------------------------------------------------------------------------
# Entropy


def make_checkerboard(side: int) -> Configuration:
    """Two-color parity configuration on a side x side box in Z^2."""
    group = GroupSpec.zd(2)
    xs = np.arange(side)
    arr = ((xs[:, None] + xs[None, :]) % 2).astype(np.int64)
    return Configuration.from_arrays(group, (0, 0), [arr], [Alphabet(2)])


def make_bernoulli_configuration(side: int, seed: int) -> Configuration:
    """Fair-coin binary configuration on a side x side box in Z^2."""
    rng = trial_rng(seed, 0)
    arr = rng.integers(0, 2, size=(side, side), dtype=np.int64)
    return Configuration.from_arrays(GroupSpec.zd(2), (0, 0), [arr], [Alphabet(2)])


def entropy_suite(seed: int, trials: int = 50, empirical_side: int = 512,
                  checker_side: int = 65) -> dict:
    """Exact product-block entropies, an empirical estimate, and a closed form."""

    def one(i: int) -> tuple[bool, float]:
        rng = trial_rng(seed, i)
        size = int(rng.integers(2, 5))
        w = rng.random(size)
        w = w / w.sum()
        p = Distribution(list(range(size)), [float(x) for x in w])
        group = GroupSpec.zd(1) if i % 2 == 0 else GroupSpec.zd(2)
        n = int(rng.integers(1, 10))
        if group.dim == 1:
            cells = [(int(x),) for x in rng.choice(3 * n, size=n, replace=False)]
        else:
            picks = rng.choice(16, size=n, replace=False)
            cells = [(int(x) // 4, int(x) % 4) for x in picks]
        F = FiniteSubset(group, cells)
        diff = abs(bernoulli_entropy_exact(p, F) - shannon_entropy(p))
        return diff <= 1e-10, diff

    results = _run_trials(one, trials)
    exact_violations = sum(1 for ok, _ in results if not ok)
    max_diff = max(d for _, d in results)

    group = GroupSpec.zd(2)
    block = FiniteSubset.box(group, (0, 0), (2, 2))
    emp = empirical_entropy_rate(make_bernoulli_configuration(empirical_side, seed), block)
    emp_err = abs(emp["h_n_hat"] - float(np.log(2)))
    checker = empirical_entropy_rate(make_checkerboard(checker_side), block)
    checker_err = abs(checker["h_n_hat"] - float(np.log(2)) / 4)
    violations = exact_violations
    if emp_err > 0.01:
        violations += 1
    if checker_err > 1e-12:
        violations += 1
    return {
        "suite": "entropy",
        "seed": seed,
        "trials": trials,
        "exact_max_diff": max_diff,
        "empirical_error": emp_err,
        "empirical_samples": emp["sample_count"],
        "checkerboard_error": checker_err,
        "violations": violations,
    }


# ---------------------------------------------------------------------------
# Frequency averaging


def frequency_suite(trials: int, seed: int) -> dict:
    """Exactly tiled windows with controlled coverage; diff must stay <= eps."""

    def one(i: int) -> tuple[bool, bool]:
        rng = trial_rng(seed, i)
        group = GroupSpec.zd(1) if i % 2 == 0 else GroupSpec.zd(2)
        d = group.dim
        eps = Fraction(int(rng.integers(20, 61)), 100)
        if d == 1:
            a_ext = (int(rng.integers(2, 4)),)
        else:
            a_ext = (2, 1) if rng.random() < 0.5 else (1, 2)
        A = FiniteSubset.box(group, (0,) * d, a_ext)
        delta = (eps / 3) / len(A)
        m = 2
        while True:
            T = FiniteSubset.box(group, (0,) * d, (m,) * d)
            if invariance_defect(T, A) <= delta:
                break
            m += 1
        reps = int(rng.integers(2, 5)) if d == 2 else int(rng.integers(4, 9))
        window = Window.box(group, (0,) * d, (m * reps,) * d)
        F = window.region
        slots = [tuple(int(m * j) for j in idx) for idx in np.ndindex(*(reps,) * d)]
        total = len(slots)
        d_max = int(Fraction(2, 3) * eps * total)
        drop = int(rng.integers(0, d_max + 1))
        dropped = set(rng.choice(total, size=drop, replace=False).tolist()) if drop else set()
        kept = [s for j, s in enumerate(slots) if j not in dropped]
        centers = FiniteSubset(group, kept if kept else slots[:1])
        tiling = Quasitiling(group, [T], [centers], window, {})
        alpha = Alphabet(int(rng.integers(2, 4)))
        arr = rng.integers(0, alpha.size, size=(m * reps,) * d, dtype=np.int64)
        y = Configuration.from_arrays(group, (0,) * d, [arr], [alpha])
        qvals = {cell: int(rng.integers(0, alpha.size)) for cell in A}
        Q = Pattern(alpha, A, qvals)
        rep = verify_frequency_lemma(y, tiling, Q, F, eps)
        return rep["pass"], rep["hypotheses_met"]

    results = _run_trials(one, trials)
    return {
        "suite": "frequency-lemma",
        "seed": seed,
        "trials": trials,
        "violations": sum(1 for ok, _ in results if not ok),
        "hypothesis_met": sum(1 for _, h in results if h),
    }
