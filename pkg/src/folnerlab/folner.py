"""Folner families and invariance defects.

The built-in families are coordinate boxes: for Z^d the box [0, n)^d, and for
the Heisenberg group the box {(a, b, c) : 0 <= a, b < n, 0 <= c < n^2} whose
center coordinate grows quadratically so that left multiplication by a
generator perturbs it by at most an O(1/n) fraction.  A "centered" Z^d variant
(boxes straddling the origin) is provided as well; it additionally exhausts
every fixed element as n grows, which the corner boxes do not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .groups import (
    FiniteSubset,
    GroupSpec,
    _np_safe,
    _pack_rows,
    _product_rows,
    _unique_rows,
    set_product,
)

_STYLES = ("corner", "centered")


@dataclass(frozen=True)
class FolnerFamily:
    """Rule n -> F_n for one of the built-in box families.

    Invariants of every family: the identity lies in each F_n, F_n is
    contained in F_{n+1}, and for any fixed E the defect of F_n against E
    eventually drops below any positive threshold.
    """

    group: GroupSpec
    style: str = "corner"

    def __post_init__(self):
        if self.style not in _STYLES:
            raise DomainError(f"unknown Folner family style: {self.style!r}")
        if self.style == "centered" and self.group.kind != "zd":
            raise DomainError("centered boxes are defined for Zd only")

    def set(self, n: int) -> FiniteSubset:
        return folner_set(self, n)


def folner_set(family: FolnerFamily, n: int) -> FiniteSubset:
    """The n-th Folner set of the family; |F_n| = n^d for Zd, n^4 for Heisenberg."""
    n = int(n)
    if n < 1:
        raise DomainError(f"Folner index must be >= 1, got {n}")
    group = family.group
    if group.kind == "zd":
        if family.style == "centered":
            half = n // 2
            return FiniteSubset.box(group, (-half,) * group.dim, (n,) * group.dim)
        return FiniteSubset.box(group, (0,) * group.dim, (n,) * group.dim)
    # Heisenberg: the box construction itself overflow-checks n and n^2
    return FiniteSubset.box(group, (0, 0, 0), (n, n, n * n))


def invariance_defect(F: FiniteSubset, E: FiniteSubset) -> Fraction:
    """Exact |F symdiff EF| / |F|.

    When E contains the identity this equals (|EF| - |F|) / |F|, and the
    predicate defect <= delta is equivalent to |EF| <= (1 + delta)|F|.
    """
    if len(F) == 0:
        raise DomainError("invariance defect needs a nonempty F")
    group = F.group
    if group != E.group:
        raise DomainError(f"mixed groups: {group.label} vs {E.group.label}")
    if len(E) == 0:
        return Fraction(1)  # EF is empty, symdiff is all of F
    n = len(F)
    if len(E) * n >= 2048 and _np_safe(E, F):
        prods = _product_rows(group, E.rows(), F.rows())
        has_identity = group.identity() in E.elements
        if group.dim <= 2:
            ef_keys = np.unique(_pack_rows(prods))
            if has_identity:
                return Fraction(int(ef_keys.size) - n, n)
            f_keys = _pack_rows(F.rows())
            inter = np.intersect1d(ef_keys, f_keys, assume_unique=True).size
            return Fraction(int(ef_keys.size) + n - 2 * int(inter), n)
        rows = _unique_rows(prods, group.dim)
        if has_identity:
            return Fraction(rows.shape[0] - n, n)
        ef = frozenset(map(tuple, rows.tolist()))
        return Fraction(len(ef ^ F.elements), n)
    ef = set_product(E, F)
    return Fraction(len(ef.elements ^ F.elements), n)


def find_invariant_index(
    family: FolnerFamily, E: FiniteSubset, delta, n_max: int
) -> int | None:
    """Least n <= n_max with invariance_defect(F_n, E) <= delta, else None.

    None signals that n_max was too small, not that no such index exists.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    for n in range(1, int(n_max) + 1):
        if invariance_defect(folner_set(family, n), E) <= delta:
            return n
    return None
