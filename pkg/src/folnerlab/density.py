"""Windowed lower Banach density, E-cores, and the core/boundary/core-density verifiers.

Densities are taken over right translates F*g that lie entirely inside a
finite window; the number of admissible translates (the interior size) is
reported with every density so boundary effects stay visible.  All densities
and thresholds are exact rationals.

The check_* operations verify implications: when a hypothesis fails on an
instance the implication holds vacuously, and the report says so instead of
counting a vacuous case as a violation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from ._grid import BoxGrid, grid_capable
from .errors import DomainError
from .folner import invariance_defect
from .groups import FiniteSubset, GroupSpec, set_inverse, set_product, translate

if TYPE_CHECKING:  # pragma: no cover
    from .quasitiling import Quasitiling


class Window:
    """A finite portion of the group under study."""

    __slots__ = ("region", "_grid", "_wmask", "_interior_cache")

    def __init__(self, region: FiniteSubset):
        if len(region) == 0:
            raise DomainError("window region must be nonempty")
        self.region = region
        self._grid = None
        self._wmask = None
        self._interior_cache = {}

    @classmethod
    def box(cls, group: GroupSpec, origin, extent) -> "Window":
        return cls(FiniteSubset.box(group, origin, extent))

    @property
    def group(self) -> GroupSpec:
        return self.region.group

    def grid(self) -> BoxGrid | None:
        if not grid_capable(self.group):
            return None
        if self._grid is None:
            self._grid = BoxGrid.enclosing(self.region)
            self._wmask = self._grid.mask_of(self.region)
        return self._grid

    def region_mask(self):
        self.grid()
        return self._wmask

    def interior(self, shape: FiniteSubset) -> FiniteSubset:
        """Positions g with shape*g inside the window."""
        if shape.group != self.group:
            raise DomainError("shape group does not match window group")
        if len(shape) == 0:
            raise DomainError("interior needs a nonempty shape")
        key = shape.sorted_elements()
        cached = self._interior_cache.get(key)
        if cached is not None:
            return cached
        grid = self.grid()
        if grid is not None:
            mask = grid.shifted_all(self._wmask, shape.rows())
            result = FiniteSubset._trusted(self.group, frozenset(grid.positions(mask)))
        else:
            mul = self.group.mul
            region = self.region.elements
            t0 = next(iter(shape))
            cands = translate(self.region, self.group.inv(t0), "left")
            shape_elems = shape.sorted_elements()
            result = FiniteSubset._trusted(
                self.group,
                frozenset(
                    g for g in cands.elements if all(mul(t, g) in region for t in shape_elems)
                ),
            )
        self._interior_cache[key] = result
        return result


def interior(window: Window, shape: FiniteSubset) -> FiniteSubset:
    return window.interior(shape)


def lower_density_over_window(H: FiniteSubset, F: FiniteSubset, window: Window) -> dict:
    """Minimum over interior translates of |H ∩ F*g| / |F|, with the argmin.

    Ties go to the canonically first translate position.
    """
    if len(F) == 0:
        raise DomainError("density shape F must be nonempty")
    if H.group != F.group or F.group != window.group:
        raise DomainError("H, F and window must share a group")
    inter = window.interior(F)
    if len(inter) == 0:
        raise DomainError("window has no interior translates of the shape")
    grid = window.grid()
    best = None
    best_g = None
    if grid is not None:
        hmask = grid.mask_of(H)
        shape_rows = F.rows()
        for g in inter:
            c = grid.count_at(hmask, shape_rows, g)
            if best is None or c < best:
                best, best_g = c, g
                if c == 0:
                    break
    else:
        mul = F.group.mul
        helems = H.elements
        shape_elems = F.sorted_elements()
        for g in inter:
            c = sum(1 for t in shape_elems if mul(t, g) in helems)
            if best is None or c < best:
                best, best_g = c, g
                if c == 0:
                    break
    return {
        "value": Fraction(best, len(F)),
        "argmin": best_g,
        "interior_size": len(inter),
    }


def e_core(F: FiniteSubset, E: FiniteSubset) -> FiniteSubset:
    """The E-core {f in F : E*f ⊆ F}."""
    if F.group != E.group:
        raise DomainError("F and E must share a group")
    core = F
    inv = F.group.inv
    for g in E:
        core = core.intersection(translate(F, inv(g), "left"))
        if len(core) == 0:
            break
    return core


def check_core_lemma(E: FiniteSubset, eps, F: FiniteSubset) -> dict:
    """Check: defect(F, E) <= eps/|E| implies |F_E| >= (1 - eps)|F|."""
    eps = Fraction(eps)
    if not (0 < eps < 1):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    if E.group.identity() not in E.elements:
        raise DomainError("E must contain the identity")
    if len(F) == 0:
        raise DomainError("F must be nonempty")
    delta_used = eps / len(E)
    defect = invariance_defect(F, E)
    core = e_core(F, E)
    core_fraction = Fraction(len(core), len(F))
    hypothesis_met = defect <= delta_used
    ok = (not hypothesis_met) or (core_fraction >= 1 - eps)
    return {
        "delta_used": delta_used,
        "defect": defect,
        "core_fraction": core_fraction,
        "core_size": len(core),
        "set_size": len(F),
        "hypothesis_met": hypothesis_met,
        "pass": ok,
    }


def _validate_nested(shapes: Sequence[FiniteSubset]) -> None:
    for a, b in zip(shapes, shapes[1:]):
        if not a.issubset(b):
            raise DomainError("shapes must be nested in increasing order")


def check_boundary_lemma(tiling: "Quasitiling", F: FiniteSubset, eps) -> dict:
    """Boundary-tile mass bound for a tiling by nested shapes.

    Hypothesis: F is (E_k E_k^-1, delta)-invariant where delta comes from the
    core-size bound applied to E_k E_k^-1 at parameter eps/|E_k|.  Conclusion
    checked: the tiles that meet both F and its complement cover strictly less
    than an eps-fraction of F.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if len(F) == 0:
        raise DomainError("F must be nonempty")
    shapes = tiling.shapes
    if not shapes:
        raise DomainError("tiling has no shapes")
    _validate_nested(shapes)
    top = shapes[-1]
    star = set_product(top, set_inverse(top))
    delta_used = eps / (len(top) * len(star))
    defect = invariance_defect(F, star)
    hypothesis_met = defect <= delta_used

    felems = F.elements
    boundary_union: set = set()
    boundary_tiles = 0
    for shape, centers in zip(tiling.shapes, tiling.centers):
        for c in centers:
            tile = translate(shape, c, "right").elements
            inside = tile & felems
            if inside and (tile - felems):
                boundary_tiles += 1
                boundary_union |= inside
    boundary_mass = Fraction(len(boundary_union), len(F))
    ok = (not hypothesis_met) or (boundary_mass < eps)
    return {
        "boundary_mass": boundary_mass,
        "bound": eps,
        "delta_used": delta_used,
        "defect": defect,
        "hypothesis_met": hypothesis_met,
        "boundary_tiles": boundary_tiles,
        "pass": ok,
    }


def check_large_core(
    shapes: Sequence[FiniteSubset],
    cores: Sequence[FiniteSubset],
    centers: Sequence[FiniteSubset],
    gamma,
    F_test: FiniteSubset,
    window: Window,
) -> dict:
    """Density drop when shapes are shrunk to their cores.

    With per-level cores keeping more than a (1 - gamma)-fraction of each
    shape, pairwise-disjoint center sets and per-level tiles disjoint on the
    window, the windowed density of the union may drop by less than gamma.
    """
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    if not (len(shapes) == len(cores) == len(centers)):
        raise DomainError("shapes, cores and centers must have equal lengths")
    group = window.group
    for i, (shape, core) in enumerate(zip(shapes, cores)):
        if not core.issubset(shape):
            raise DomainError(f"cores[{i}] is not a subset of shapes[{i}]")
        if Fraction(len(core)) <= (1 - gamma) * len(shape):
            raise DomainError(
                f"cores[{i}] must keep more than a (1-gamma) fraction of shapes[{i}]"
            )
    seen_centers: set = set()
    for i, cs in enumerate(centers):
        overlap = cs.elements & seen_centers
        if overlap:
            raise DomainError(f"center sets must be pairwise disjoint; level {i} reuses centers")
        seen_centers |= cs.elements
    region = window.region.elements
    union_full: set = set()
    union_core: set = set()
    for i, (shape, core, cs) in enumerate(zip(shapes, cores, centers)):
        covered_this_level: set = set()
        for c in cs:
            tile = translate(shape, c, "right").elements
            tile_in_window = tile & region
            if covered_this_level & tile_in_window:
                raise DomainError(f"level {i} tiles overlap inside the window")
            covered_this_level |= tile_in_window
            union_full |= tile
            union_core |= translate(core, c, "right").elements
    d_full = lower_density_over_window(
        FiniteSubset._trusted(group, frozenset(union_full)), F_test, window
    )
    d_core = lower_density_over_window(
        FiniteSubset._trusted(group, frozenset(union_core)), F_test, window
    )
    diff = d_full["value"] - d_core["value"]
    return {
        "d_e": d_full["value"],
        "d_eprime": d_core["value"],
        "diff": diff,
        "gamma": gamma,
        "interior_size": d_full["interior_size"],
        "pass": diff < gamma,
    }
