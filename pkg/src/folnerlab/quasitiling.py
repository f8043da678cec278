"""Quasitilings on finite windows.

A quasitiling is a list of shapes (finite subsets containing the identity)
together with one center set per shape; the tiles are the right translates
shape*center, all contained in a window.  This module provides:

* an exact decision procedure for epsilon-disjointness (each tile must be able
  to keep strictly more than a (1-eps)-fraction of itself while the kept parts
  stay pairwise disjoint), decided by a max-flow feasibility computation with
  per-tile retention demands;
* the greedy maximal-augmentation construction of an epsilon-disjoint
  quasitiling whose covering fraction on the window interior meets the
  1 - (1 - eps/2)^k bound;
* a numbering-based disjointification that shrinks overlapping tiles to
  pairwise disjoint ones, keeping every center;
* the tile-absorption construction that grows a set until no lower-level tile
  lies on its boundary, with the product-set envelope bound;
* greedy maximal marker packings.

greedy_construct and disjointify are order-defined and therefore sequential;
their scan order is the canonical element order, largest shape first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from ._grid import grid_capable
from .density import Window
from .errors import DomainError
from .groups import FiniteSubset, GroupSpec, set_inverse, set_product, translate


@dataclass
class Quasitiling:
    group: GroupSpec
    shapes: list[FiniteSubset]
    centers: list[FiniteSubset]
    window: Window
    meta: dict = field(default_factory=dict)

    def validate(self) -> None:
        if len(self.shapes) != len(self.centers):
            raise DomainError("shapes and centers lists must have equal length")
        e = self.group.identity()
        region = self.window.region.elements
        for i, (shape, cs) in enumerate(zip(self.shapes, self.centers)):
            if shape.group != self.group or cs.group != self.group:
                raise DomainError("tiling parts disagree on the group")
            if len(shape) == 0 or e not in shape.elements:
                raise DomainError(f"shape {i} must contain the identity")
            for c in cs:
                tile = translate(shape, c, "right")
                if not tile.elements <= region:
                    raise DomainError(
                        f"tile at level {i}, center {c} leaves the window"
                    )

    def tiles(self):
        """Yield (level, center, elements) in canonical enumeration order."""
        for i, (shape, cs) in enumerate(zip(self.shapes, self.centers)):
            for c in cs:
                yield i, c, translate(shape, c, "right").elements

    def tile_count(self) -> int:
        return sum(len(cs) for cs in self.centers)

    def covered_union(self) -> FiniteSubset:
        covered: set = set()
        for _, _, elems in self.tiles():
            covered |= elems
        return FiniteSubset._trusted(self.group, frozenset(covered))


def _retention_demand(size: int, eps: Fraction) -> int:
    """Smallest kept-count encoding |A \\ A'| < eps|A|, i.e. kept > (1-eps)|A|."""
    need = (1 - eps) * size
    if need.denominator == 1:
        return int(need) + 1
    return -(-need.numerator // need.denominator)


def eps_disjoint_check(tiling: Quasitiling, eps) -> dict:
    """Exact epsilon-disjointness decision with a witness or a counterexample.

    Feasibility model: every covered element may be assigned to at most one of
    the tiles containing it, and tile t must be assigned at least q_t of its
    own elements, where q_t encodes the strict retention inequality.  Elements
    lying in a single tile are pre-assigned; the contested remainder is decided
    by max flow.
    """
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    tiling.validate()
    tiles = list(tiling.tiles())
    sizes = [len(t[2]) for t in tiles]
    demands = [_retention_demand(n, eps) for n in sizes]

    elem_tiles: dict = {}
    for idx, (_, _, elems) in enumerate(tiles):
        for x in sorted(elems):
            elem_tiles.setdefault(x, []).append(idx)

    assignment: dict = {}
    got = [0] * len(tiles)
    contested: list = []
    for x in sorted(elem_tiles):
        owners = elem_tiles[x]
        if len(owners) == 1:
            assignment[x] = owners[0]
            got[owners[0]] += 1
        else:
            contested.append(x)

    residual = [max(0, q - g) for q, g in zip(demands, got)]
    total_residual = sum(residual)
    flow_used = 0
    if total_residual > 0:
        flow_used, flowed = _solve_retention_flow(contested, elem_tiles, residual)
        if flow_used < total_residual:
            violator = _deficient_tiles(contested, elem_tiles, residual, flowed)
            tile_ids = sorted(violator)
            available = set()
            for t in tile_ids:
                available |= tiles[t][2]
            return {
                "pass": False,
                "counterexample": {
                    "tiles": [
                        {"level": tiles[t][0], "center": tiles[t][1]} for t in tile_ids
                    ],
                    "required": sum(demands[t] for t in tile_ids),
                    "available": len(available),
                },
            }
        for x, t in flowed.items():
            assignment[x] = t
            got[t] += 1

    # leftover contested elements harm nobody; keep them in their first tile
    for x in contested:
        if x not in assignment:
            t = elem_tiles[x][0]
            assignment[x] = t
            got[t] += 1

    retained = [Fraction(g, n) for g, n in zip(got, sizes)]
    return {
        "pass": True,
        "certificate": {
            "assignment": assignment,
            "retained_fraction": retained,
            "demands": demands,
        },
    }


def _solve_retention_flow(contested, elem_tiles, residual):
    """Max flow from contested elements into tiles with unmet demands."""
    needy = [t for t, r in enumerate(residual) if r > 0]
    tile_node = {t: i for i, t in enumerate(needy)}
    n_elem = len(contested)
    n_tile = len(needy)
    source = n_elem + n_tile
    sink = source + 1
    rows, cols, caps = [], [], []
    for i, x in enumerate(contested):
        rows.append(source)
        cols.append(i)
        caps.append(1)
        for t in elem_tiles[x]:
            j = tile_node.get(t)
            if j is not None:
                rows.append(i)
                cols.append(n_elem + j)
                caps.append(1)
    for t in needy:
        rows.append(n_elem + tile_node[t])
        cols.append(sink)
        caps.append(residual[t])
    graph = csr_matrix(
        (np.array(caps, dtype=np.int32), (rows, cols)), shape=(sink + 1, sink + 1)
    )
    res = maximum_flow(graph, source, sink)
    flowed: dict = {}
    flow = res.flow.tocoo()
    for r, c, v in zip(flow.row, flow.col, flow.data):
        if v > 0 and r < n_elem and n_elem <= c < n_elem + n_tile:
            flowed[contested[r]] = needy[c - n_elem]
    return res.flow_value, flowed


def _deficient_tiles(contested, elem_tiles, residual, flowed):
    """Tiles on the sink side of the min cut once the flow is maximum.

    BFS over residual edges: the source still reaches exactly the unassigned
    contested elements; an element reaches the needy tiles containing it other
    than the one it currently feeds; a tile reaches the elements feeding it.
    By max-flow/min-cut duality the unreachable needy tiles demand strictly
    more than the number of elements available to them.
    """
    needy = {t for t, r in enumerate(residual) if r > 0}
    taken: dict = {}  # tile -> elements currently flowing into it
    for x, t in flowed.items():
        taken.setdefault(t, []).append(x)
    reach_elems = set(x for x in contested if x not in flowed)
    frontier = list(reach_elems)
    reach_tiles: set = set()
    while frontier:
        new_tiles = []
        for x in frontier:
            fed = flowed.get(x)
            for t in elem_tiles[x]:
                if t in needy and t != fed and t not in reach_tiles:
                    reach_tiles.add(t)
                    new_tiles.append(t)
        frontier = []
        for t in new_tiles:
            for x in taken.get(t, []):
                if x not in reach_elems:
                    reach_elems.add(x)
                    frontier.append(x)
    return needy - reach_tiles


class _Occupancy:
    """Union-of-tiles membership structure with grid and set backends."""

    def __init__(self, window: Window):
        self.window = window
        self.grid = window.grid()
        if self.grid is not None:
            self.mask = self.grid.empty_mask()
        else:
            self.cells: set = set()

    def overlap(self, shape: FiniteSubset, g) -> int:
        if self.grid is not None:
            return self.grid.count_at(self.mask, shape.rows(), g)
        mul = self.window.group.mul
        return sum(1 for t in shape if mul(t, g) in self.cells)

    def any_overlap(self, shape: FiniteSubset, g) -> bool:
        if self.grid is not None:
            return self.grid.any_at(self.mask, shape.rows(), g)
        mul = self.window.group.mul
        return any(mul(t, g) in self.cells for t in shape)

    def add(self, shape: FiniteSubset, g) -> None:
        if self.grid is not None:
            self.grid.set_at(self.mask, shape.rows(), g)
        else:
            mul = self.window.group.mul
            self.cells.update(mul(t, g) for t in shape)

    def count_inside(self, subset: FiniteSubset) -> int:
        if self.grid is not None:
            return int(np.count_nonzero(self.mask & self.grid.mask_of(subset)))
        return len(self.cells & subset.elements)


def _validate_greedy_inputs(window: Window, shapes: Sequence[FiniteSubset], eps: Fraction):
    if not shapes:
        raise DomainError("at least one shape is required")
    e = window.group.identity()
    for i, shape in enumerate(shapes):
        if shape.group != window.group:
            raise DomainError("shape group does not match window group")
        if e not in shape.elements:
            raise DomainError(f"shape {i} must contain the identity")
    for a, b in zip(shapes, shapes[1:]):
        if not a.issubset(b):
            raise DomainError("shapes must be nested in increasing order")
    if not (0 < eps < Fraction(1, 2)):
        raise DomainError(f"eps must lie in (0, 1/2), got {eps}")
    if len(window.interior(shapes[-1])) == 0:
        raise DomainError("window has no interior translate of the largest shape")


def greedy_construct(window: Window, shapes: Sequence[FiniteSubset], eps) -> Quasitiling:
    """Greedy maximal epsilon-disjoint quasitiling on a finite window.

    Levels are processed from the largest shape down to the smallest; within a
    level, candidate centers (translate positions fully inside the window) are
    scanned in canonical order and a center is added exactly when its tile
    meets the union of the tiles placed so far in strictly less than
    eps * |shape| elements.  On a finite window greedy saturation is
    maximality, and the covering fraction of the union on the interior of the
    largest shape is at least 1 - (1 - eps/2)^k.
    """
    eps = Fraction(eps)
    shapes = list(shapes)
    _validate_greedy_inputs(window, shapes, eps)
    k = len(shapes)
    occ = _Occupancy(window)
    centers: list[list] = [[] for _ in range(k)]
    for j in range(k - 1, -1, -1):
        shape = shapes[j]
        threshold = eps * len(shape)
        cands = window.interior(shape)
        for g in cands:
            if occ.overlap(shape, g) < threshold:
                occ.add(shape, g)
                centers[j].append(g)
    top_interior = window.interior(shapes[-1])
    covering = Fraction(occ.count_inside(top_interior), len(top_interior))
    bound = 1 - (1 - eps / 2) ** k
    tiling = Quasitiling(
        group=window.group,
        shapes=shapes,
        centers=[FiniteSubset._trusted(window.group, frozenset(c)) for c in centers],
        window=window,
        meta={},
    )
    tiling.meta = {
        "eps": eps,
        "covering": covering,
        "covering_bound": bound,
        "maximal": len(addable_centers(tiling, eps)) == 0,
        "attributes": {"dynamical": None, "continuous": None, "codeable": None, "horizon": None},
    }
    return tiling


def addable_centers(tiling: Quasitiling, eps) -> list:
    """Maximality re-scan: centers that could still be added at some level.

    For level j the union tested against is the union of tiles of levels >= j,
    mirroring the state at the end of the construction pass for that level.
    Returns [] exactly when the tiling is greedily saturated.
    """
    eps = Fraction(eps)
    occ = _Occupancy(tiling.window)
    found = []
    k = len(tiling.shapes)
    for j in range(k - 1, -1, -1):
        shape = tiling.shapes[j]
        for c in tiling.centers[j]:
            occ.add(shape, c)
        threshold = eps * len(shape)
        for g in tiling.window.interior(shape):
            if occ.overlap(shape, g) < threshold:
                found.append((j, g))
    return found


def disjointify(tiling: Quasitiling, order: str = "numbering") -> tuple[Quasitiling, dict]:
    """Shrink overlapping tiles to pairwise disjoint ones, keeping every center.

    order="numbering" (default): the elements of the union of the shapes are
    numbered canonically with the identity first; an element covered by several
    tiles is kept by the tile in which its relative position has the smallest
    number, remaining ties (same center at two levels) going to the smaller
    level.  Every center has number 1 in its own tile, so centers are retained.

    order="insertion": tiles are ranked in construction order (largest level
    first, canonical center order within a level); an element is kept by the
    first tile containing it, except that a tile's center is always kept by
    that tile.  For greedy-built inputs each tile's loss to earlier tiles is
    strictly below eps * |shape| by the construction rule, which is what makes
    the per-tile retention bound attainable; the numbering order can lose more
    (smaller shapes occupy the low-numbered relative positions and win every
    contested cell), so its retention is only reported.

    The shrunk tiles are grouped by their relative shape, which becomes the
    shape list of the returned exactly disjoint quasitiling.
    """
    if order not in ("numbering", "insertion"):
        raise DomainError(f"unknown disjointify order: {order!r}")
    tiling.validate()
    group = tiling.group
    e = group.identity()
    mul = group.mul
    tile_ids: list = []
    for level, cs in enumerate(tiling.centers):
        for c in cs:
            tile_ids.append((level, c))

    winner: dict = {}  # element -> (level, center)
    if order == "numbering":
        union_elems: set = set()
        for shape in tiling.shapes:
            union_elems |= shape.elements
        sequence = [e] + sorted(union_elems - {e})
        number = {t: i + 1 for i, t in enumerate(sequence)}
        best: dict = {}  # element -> (number, level, center)
        for level, (shape, cs) in enumerate(zip(tiling.shapes, tiling.centers)):
            for c in cs:
                for t in shape:
                    x = mul(t, c)
                    key = (number[t], level, c)
                    cur = best.get(x)
                    if cur is None or key < cur:
                        best[x] = key
        winner = {x: (lvl, c) for x, (_, lvl, c) in best.items()}
    rank: dict = {}
    if order == "insertion":
        own_tile: dict = {}
        for level, c in tile_ids:
            own_tile.setdefault(c, (level, c))
        k = len(tiling.shapes)
        for level in range(k - 1, -1, -1):
            shape = tiling.shapes[level]
            for c in tiling.centers[level]:
                rank[(level, c)] = len(rank)
                for t in shape:
                    x = mul(t, c)
                    if x not in winner:
                        winner[x] = own_tile.get(x, (level, c))

    kept_rel: dict = {}  # (level, center) -> set of relative positions kept
    lost_to_earlier: dict = {}
    lost_to_pins: dict = {}
    for level, (shape, cs) in enumerate(zip(tiling.shapes, tiling.centers)):
        for c in cs:
            tc = (level, c)
            kept = kept_rel.setdefault(tc, set())
            lost_to_earlier[tc] = 0
            lost_to_pins[tc] = 0
            for t in shape:
                w = winner[mul(t, c)]
                if w == tc:
                    kept.add(t)
                elif order == "insertion" and rank[w] > rank[tc]:
                    lost_to_pins[tc] += 1
                else:
                    lost_to_earlier[tc] += 1

    flat_index = {tc: i for i, tc in enumerate(tile_ids)}
    assignment = {}
    for x, tc in winner.items():
        assignment[x] = flat_index[tc]
    retained_fraction = []
    for level, c in tile_ids:
        retained_fraction.append(
            Fraction(len(kept_rel[(level, c)]), len(tiling.shapes[level]))
        )

    new_shapes: list[frozenset] = []
    shape_index: dict = {}
    new_centers: list[list] = []
    for level, c in tile_ids:
        rel = frozenset(kept_rel[(level, c)])
        idx = shape_index.get(rel)
        if idx is None:
            idx = len(new_shapes)
            shape_index[rel] = idx
            new_shapes.append(rel)
            new_centers.append([])
        new_centers[idx].append(c)

    out = Quasitiling(
        group=group,
        shapes=[FiniteSubset._trusted(group, s) for s in new_shapes],
        centers=[FiniteSubset._trusted(group, frozenset(cs)) for cs in new_centers],
        window=tiling.window,
        meta={"disjoint": True, "order": order, "eps": tiling.meta.get("eps")},
    )
    certificate = {
        "assignment": assignment,
        "retained_fraction": retained_fraction,
        "tile_ids": tile_ids,
        "order": order,
        "lost_to_earlier": [lost_to_earlier[tc] for tc in tile_ids],
        "lost_to_pins": [lost_to_pins[tc] for tc in tile_ids],
    }
    return out, certificate


def absorb_lower_tiles(
    s_tilde: FiniteSubset, lower: Sequence[tuple[FiniteSubset, FiniteSubset]]
) -> tuple[FiniteSubset, dict]:
    """Grow a set by absorbing, level by level, every tile that meets it.

    ``lower`` lists (shape, centers) levels in absorption order, largest shape
    first.  Preconditions: tiles are pairwise disjoint within each level, and
    every smaller-level tile meets at most one tile of each larger level.  On
    success no tile of any level lies on the boundary of the result S, and S
    is contained in the envelope E * s_tilde where E is the product of the
    shape * shape^-1 factors taken from the smallest level up.
    """
    group = s_tilde.group
    levels = list(lower)
    for shape, cs in levels:
        if shape.group != group or cs.group != group:
            raise DomainError("absorption levels disagree on the group")
        if len(shape) == 0:
            raise DomainError("absorption shapes must be nonempty")

    owner_maps: list[dict] = []
    tile_sets: list[dict] = []
    for li, (shape, cs) in enumerate(levels):
        owners: dict = {}
        tiles: dict = {}
        for c in cs:
            elems = translate(shape, c, "right").elements
            tiles[c] = elems
            for x in elems:
                if x in owners:
                    raise DomainError(
                        f"level {li} tiles at centers {owners[x]} and {c} overlap"
                    )
                owners[x] = c
        owner_maps.append(owners)
        tile_sets.append(tiles)

    # every tile of a later (smaller) level may meet at most one tile per
    # earlier (larger) level
    for lo in range(1, len(levels)):
        for c, elems in tile_sets[lo].items():
            for hi in range(lo):
                hits = {owner_maps[hi][x] for x in elems if x in owner_maps[hi]}
                if len(hits) > 1:
                    pair = sorted(hits)[:2]
                    raise DomainError(
                        f"tile at level {lo}, center {c} meets two tiles of "
                        f"level {hi}: centers {pair[0]} and {pair[1]}"
                    )

    current = set(s_tilde.elements)
    absorbed: list[list] = []
    absorbed_sets: list[set] = [set() for _ in levels]
    for li, (shape, cs) in enumerate(levels):
        hit = [c for c in cs if not tile_sets[li][c].isdisjoint(current)]
        for c in hit:
            elems = tile_sets[li][c]
            for hi in range(li):
                touched = {owner_maps[hi][x] for x in elems if x in owner_maps[hi]}
                for hc in touched:
                    if hc not in absorbed_sets[hi] and not tile_sets[hi][hc] <= current:
                        raise DomainError(
                            f"absorbing the tile at level {li}, center {c} would put "
                            f"the level {hi} tile at center {hc} on the boundary"
                        )
        for c in hit:
            current |= tile_sets[li][c]
            absorbed_sets[li].add(c)
        absorbed.append(hit)

    result = FiniteSubset._trusted(group, frozenset(current))

    boundary_clean = True
    for li in range(len(levels)):
        for c, elems in tile_sets[li].items():
            inter = elems & current
            if inter and not elems <= current:
                boundary_clean = False

    envelope_ok = True
    envelope_size = len(result)
    if levels:
        acc = None
        for shape, _ in reversed(levels):
            term = set_product(shape, set_inverse(shape))
            acc = term if acc is None else set_product(acc, term)
        envelope = set_product(acc, s_tilde)
        envelope_ok = result.issubset(envelope)
        envelope_size = len(envelope)

    report = {
        "size": len(result),
        "initial_size": len(s_tilde),
        "absorbed_per_level": [len(a) for a in absorbed],
        "boundary_clean": boundary_clean,
        "envelope_ok": envelope_ok,
        "envelope_size": envelope_size,
    }
    return result, report


def maximal_marker_set(window: Window, F: FiniteSubset) -> dict:
    """Greedy maximal packing of disjoint translates F*v inside the window.

    Output positions V make {F*v : v in V} pairwise disjoint, and maximality
    forces every interior position w to satisfy w in F^-1 F V; the covering
    shape F^-1 F is returned alongside V.
    """
    if F.group != window.group:
        raise DomainError("shape group does not match window group")
    cands = window.interior(F)
    if len(cands) == 0:
        raise DomainError("window has no interior translate of the marker shape")
    occ = _Occupancy(window)
    markers = []
    for v in cands:
        if not occ.any_overlap(F, v):
            occ.add(F, v)
            markers.append(v)
    return {
        "v": FiniteSubset._trusted(window.group, frozenset(markers)),
        "f_cov": set_product(set_inverse(F), F),
    }
