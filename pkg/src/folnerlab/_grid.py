"""Boolean-grid engine for Z^d windows.

Right translates in Z^d are coordinate additions, so membership scans over a
window can run on boolean masks indexed by (coordinate - bounding-box origin).
np.argwhere enumerates True cells in C order, which coincides with the
canonical lexicographic order on coordinate tuples, so grid scans visit
candidates exactly as the generic set-based code does.
"""

from __future__ import annotations

import numpy as np

from .groups import FiniteSubset, GroupSpec


class BoxGrid:
    """Mask view of subsets of Z^d over a fixed bounding box."""

    def __init__(self, origin: tuple[int, ...], extent: tuple[int, ...]):
        self.origin = origin
        self.extent = extent

    @classmethod
    def enclosing(cls, subset: FiniteSubset) -> "BoxGrid":
        rows = subset.rows()
        lo = tuple(int(x) for x in rows.min(axis=0))
        hi = tuple(int(x) for x in rows.max(axis=0))
        return cls(lo, tuple(h - l + 1 for l, h in zip(lo, hi)))

    def mask_of(self, subset: FiniteSubset) -> np.ndarray:
        """Boolean mask of the subset clipped to the bounding box."""
        mask = np.zeros(self.extent, dtype=bool)
        rows = subset.rows()
        if rows.shape[0] == 0:
            return mask
        rel = rows - np.array(self.origin, dtype=np.int64)
        ok = np.all((rel >= 0) & (rel < np.array(self.extent, dtype=np.int64)), axis=1)
        rel = rel[ok]
        if rel.shape[0]:
            mask[tuple(rel.T)] = True
        return mask

    def empty_mask(self) -> np.ndarray:
        return np.zeros(self.extent, dtype=bool)

    def shifted_all(self, mask: np.ndarray, offsets: np.ndarray) -> np.ndarray:
        """acc[g] = all(mask[g + t] for t in offsets), False outside the box."""
        acc = np.ones(self.extent, dtype=bool)
        for t in offsets:
            acc &= self._shift(mask, tuple(int(x) for x in t))
        return acc

    def _shift(self, mask: np.ndarray, t: tuple[int, ...]) -> np.ndarray:
        # out[g] = mask[g + t] where defined, else False
        out = np.zeros_like(mask)
        src = []
        dst = []
        for ti, n in zip(t, self.extent):
            lo = max(0, -ti)
            hi = min(n, n - ti)
            if lo >= hi:
                return out
            dst.append(slice(lo, hi))
            src.append(slice(lo + ti, hi + ti))
        out[tuple(dst)] = mask[tuple(src)]
        return out

    def positions(self, mask: np.ndarray) -> list[tuple[int, ...]]:
        """True cells as coordinate tuples in canonical order."""
        idx = np.argwhere(mask)
        if idx.shape[0] == 0:
            return []
        return list(map(tuple, (idx + np.array(self.origin, dtype=np.int64)).tolist()))

    def cell_index(self, shape_rows: np.ndarray, g: tuple[int, ...]) -> tuple:
        """Fancy index addressing the cells of the tile shape+g."""
        rel = shape_rows + (np.array(g, dtype=np.int64) - np.array(self.origin, dtype=np.int64))
        return tuple(rel.T)

    def count_at(self, mask: np.ndarray, shape_rows: np.ndarray, g: tuple[int, ...]) -> int:
        return int(np.count_nonzero(mask[self.cell_index(shape_rows, g)]))

    def any_at(self, mask: np.ndarray, shape_rows: np.ndarray, g: tuple[int, ...]) -> bool:
        return bool(mask[self.cell_index(shape_rows, g)].any())

    def set_at(self, mask: np.ndarray, shape_rows: np.ndarray, g: tuple[int, ...]) -> None:
        mask[self.cell_index(shape_rows, g)] = True


def grid_capable(group: GroupSpec) -> bool:
    return group.kind == "zd"
