"""Canonical group arithmetic and finite-subset algebra.

Two groups are supported: Z^d with componentwise addition, and the discrete
Heisenberg group on integer triples with the upper-triangular convention

    (a, b, c) * (a', b', c') = (a + a', b + b', c + c' + a * b').

Elements are plain tuples of Python ints, so equality and hashing are the
canonical coordinate comparison for free.  All arithmetic is overflow-checked
against the signed 64-bit range; an out-of-range coordinate raises
OverflowError instead of wrapping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

# numpy fast paths compute sums/products in int64; they are only taken when
# every input coordinate is small enough that no intermediate (including the
# packed row keys below) can overflow
_NP_SAFE_COORD = 2**29

Element = tuple[int, ...]


def _check_range(coords: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(x) for x in coords)
    for x in out:
        if x < INT64_MIN or x > INT64_MAX:
            raise OverflowError(f"coordinate {x} outside signed 64-bit range")
    return out


@dataclass(frozen=True)
class GroupSpec:
    """Identifies one of the supported groups.

    kind is "zd" (with ``dim`` the rank d >= 1) or "heisenberg3" (dim == 3).
    """

    kind: str
    dim: int

    @staticmethod
    def zd(d: int) -> "GroupSpec":
        if d < 1:
            raise DomainError(f"Zd rank must be >= 1, got {d}")
        return GroupSpec("zd", int(d))

    @staticmethod
    def heisenberg3() -> "GroupSpec":
        return GroupSpec("heisenberg3", 3)

    @property
    def label(self) -> str:
        return f"z{self.dim}" if self.kind == "zd" else "heis"

    def identity(self) -> Element:
        return (0,) * self.dim

    def check_element(self, g) -> Element:
        try:
            coords = tuple(int(x) for x in g)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"not a coordinate tuple: {g!r}") from exc
        if len(coords) != self.dim:
            raise DomainError(
                f"element {g!r} has {len(coords)} coordinates, {self.label} needs {self.dim}"
            )
        for x in coords:
            if x < INT64_MIN or x > INT64_MAX:
                raise DomainError(f"coordinate {x} outside signed 64-bit range")
        return coords

    def mul(self, g: Element, h: Element) -> Element:
        if self.kind == "zd":
            return _check_range(x + y for x, y in zip(g, h))
        a, b, c = g
        a2, b2, c2 = h
        return _check_range((a + a2, b + b2, c + c2 + a * b2))

    def inv(self, g: Element) -> Element:
        if self.kind == "zd":
            return _check_range(-x for x in g)
        a, b, c = g
        return _check_range((-a, -b, a * b - c))

    def to_json(self) -> dict:
        if self.kind == "zd":
            return {"kind": "zd", "d": self.dim}
        return {"kind": "heisenberg3"}

    @staticmethod
    def from_json(obj: dict) -> "GroupSpec":
        kind = obj.get("kind")
        if kind == "zd":
            return GroupSpec.zd(obj["d"])
        if kind == "heisenberg3":
            return GroupSpec.heisenberg3()
        raise DomainError(f"unknown group kind: {kind!r}")


def parse_group(text: str) -> GroupSpec:
    """Parse CLI group labels: "z1", "z2", ..., "zd:4", "heis"."""
    t = text.strip().lower()
    if t in ("heis", "heisenberg", "heisenberg3"):
        return GroupSpec.heisenberg3()
    if t.startswith("zd:"):
        return GroupSpec.zd(int(t[3:]))
    if t.startswith("z") and t[1:].isdigit():
        return GroupSpec.zd(int(t[1:]))
    raise DomainError(f"unknown group: {text!r}")


def _require_same_group(*subsets: "FiniteSubset") -> GroupSpec:
    group = subsets[0].group
    for s in subsets[1:]:
        if s.group != group:
            raise DomainError(f"mixed groups: {group.label} vs {s.group.label}")
    return group


class FiniteSubset:
    """Deduplicated finite set of group elements.

    Iteration always follows the canonical total order (lexicographic on
    coordinate tuples), so every scan built on top of it is deterministic.
    Internally the elements live as a hash set, a sorted tuple, or a sorted
    int64 array, whichever a constructor produced; the other views materialize
    lazily so that array-heavy pipelines never build Python tuples.
    """

    __slots__ = ("group", "_elems", "_sorted", "_arr")

    def __init__(self, group: GroupSpec, elements: Iterable):
        self.group = group
        self._elems = frozenset(group.check_element(g) for g in elements)
        self._sorted = None
        self._arr = None

    @classmethod
    def _trusted(cls, group: GroupSpec, elems: frozenset) -> "FiniteSubset":
        obj = cls.__new__(cls)
        obj.group = group
        obj._elems = elems
        obj._sorted = None
        obj._arr = None
        return obj

    @classmethod
    def from_rows(cls, group: GroupSpec, rows: np.ndarray, sorted_unique: bool = False) -> "FiniteSubset":
        """Build from an (n, dim) int64 array produced by internal fast paths."""
        if sorted_unique:
            obj = cls.__new__(cls)
            obj.group = group
            obj._elems = None
            obj._sorted = None
            obj._arr = np.ascontiguousarray(rows, dtype=np.int64)
            return obj
        return cls._trusted(group, frozenset(map(tuple, rows.tolist())))

    @classmethod
    def box(cls, group: GroupSpec, origin: Iterable[int], extent: Iterable[int]) -> "FiniteSubset":
        """Coordinate box prod_i [origin_i, origin_i + extent_i)."""
        o = tuple(int(x) for x in origin)
        ext = tuple(int(x) for x in extent)
        if len(o) != group.dim or len(ext) != group.dim:
            raise DomainError("box arity does not match group dimension")
        if any(n < 1 for n in ext):
            raise DomainError(f"box extents must be positive, got {ext}")
        _check_range(o)
        _check_range(oi + ni for oi, ni in zip(o, ext))
        axes = [np.arange(oi, oi + ni, dtype=np.int64) for oi, ni in zip(o, ext)]
        mesh = np.meshgrid(*axes, indexing="ij")
        rows = np.stack([m.reshape(-1) for m in mesh], axis=1)
        return cls.from_rows(group, rows, sorted_unique=True)

    @property
    def elements(self) -> frozenset:
        if self._elems is None:
            self._elems = frozenset(self.sorted_elements())
        return self._elems

    def sorted_elements(self) -> tuple:
        if self._sorted is None:
            if self._arr is not None and self._elems is None:
                self._sorted = tuple(map(tuple, self._arr.tolist()))
            else:
                self._sorted = tuple(sorted(self._elems))
        return self._sorted

    def rows(self) -> np.ndarray:
        """Elements as a canonically sorted (n, dim) int64 array."""
        if self._arr is None:
            if len(self) > 0:
                self._arr = np.array(self.sorted_elements(), dtype=np.int64)
            else:
                self._arr = np.empty((0, self.group.dim), dtype=np.int64)
        return self._arr

    def __iter__(self) -> Iterator[Element]:
        return iter(self.sorted_elements())

    def __len__(self) -> int:
        if self._elems is not None:
            return len(self._elems)
        if self._arr is not None:
            return self._arr.shape[0]
        return len(self._sorted)

    def __contains__(self, g) -> bool:
        return tuple(g) in self.elements

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteSubset)
            and self.group == other.group
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.group, self.elements))

    def __repr__(self) -> str:
        return f"FiniteSubset({self.group.label}, {len(self)} elements)"

    def union(self, other: "FiniteSubset") -> "FiniteSubset":
        _require_same_group(self, other)
        return FiniteSubset._trusted(self.group, self.elements | other.elements)

    def intersection(self, other: "FiniteSubset") -> "FiniteSubset":
        _require_same_group(self, other)
        return FiniteSubset._trusted(self.group, self.elements & other.elements)

    def difference(self, other: "FiniteSubset") -> "FiniteSubset":
        _require_same_group(self, other)
        return FiniteSubset._trusted(self.group, self.elements - other.elements)

    def symmetric_difference(self, other: "FiniteSubset") -> "FiniteSubset":
        _require_same_group(self, other)
        return FiniteSubset._trusted(self.group, self.elements ^ other.elements)

    def issubset(self, other: "FiniteSubset") -> bool:
        _require_same_group(self, other)
        return self.elements <= other.elements

    def to_json(self) -> list:
        return [list(g) for g in self.sorted_elements()]


def group_op(group: GroupSpec, kind: str, g=None, h=None) -> Element:
    """Single-element operation dispatch: kind in {mul, inv, identity}."""
    if kind == "identity":
        return group.identity()
    if kind == "inv":
        if g is None:
            raise DomainError("inv needs one element")
        return group.inv(group.check_element(g))
    if kind == "mul":
        if g is None or h is None:
            raise DomainError("mul needs two elements")
        return group.mul(group.check_element(g), group.check_element(h))
    raise DomainError(f"unknown group op: {kind!r}")


def _np_safe(*subsets: FiniteSubset) -> bool:
    for s in subsets:
        if len(s) == 0:
            continue
        arr = s.rows()
        if abs(int(arr.min())) > _NP_SAFE_COORD or abs(int(arr.max())) > _NP_SAFE_COORD:
            return False
    return True


def _product_rows(group: GroupSpec, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """All products g*h for g in left rows, h in right rows (not deduplicated)."""
    nl, nr = left.shape[0], right.shape[0]
    lg = np.repeat(left, nr, axis=0)
    rg = np.tile(right, (nl, 1))
    if group.kind == "zd":
        return lg + rg
    out = lg + rg
    out[:, 2] += lg[:, 0] * rg[:, 1]
    return out


_PACK_OFF = np.int64(2**31)
_PACK_MUL = np.int64(2**32)


def _pack_rows(rows: np.ndarray) -> np.ndarray:
    """Injective, order-preserving int64 key for rows of width <= 2 (small coords)."""
    if rows.shape[1] == 1:
        return rows[:, 0]
    return rows[:, 0] * _PACK_MUL + (rows[:, 1] + _PACK_OFF)


def _unpack_rows(keys: np.ndarray, d: int) -> np.ndarray:
    if d == 1:
        return keys[:, None].copy()
    x = np.floor_divide(keys, _PACK_MUL)
    y = keys - x * _PACK_MUL - _PACK_OFF
    return np.stack([x, y], axis=1)


def _unique_rows(rows: np.ndarray, d: int) -> np.ndarray:
    """Deduplicated rows in canonical (lexicographic) order."""
    if d <= 2:
        return _unpack_rows(np.unique(_pack_rows(rows)), d)
    return np.unique(rows, axis=0)


def set_product(E: FiniteSubset, F: FiniteSubset) -> FiniteSubset:
    """The product set {g*f : g in E, f in F}, deduplicated."""
    group = _require_same_group(E, F)
    if len(E) == 0 or len(F) == 0:
        return FiniteSubset._trusted(group, frozenset())
    if len(E) * len(F) >= 2048 and _np_safe(E, F):
        rows = _unique_rows(_product_rows(group, E.rows(), F.rows()), group.dim)
        return FiniteSubset.from_rows(group, rows, sorted_unique=True)
    mul = group.mul
    return FiniteSubset._trusted(
        group, frozenset(mul(g, f) for g in E.elements for f in F.elements)
    )


def set_inverse(E: FiniteSubset) -> FiniteSubset:
    """The set of inverses {g^-1 : g in E}."""
    inv = E.group.inv
    return FiniteSubset._trusted(E.group, frozenset(inv(g) for g in E.elements))


def translate(F: FiniteSubset, g, side: str = "left") -> FiniteSubset:
    """Left translate gF or right translate Fg; cardinality is preserved."""
    group = F.group
    g = group.check_element(g)
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    if len(F) >= 4096 and _np_safe(F) and all(abs(x) <= _NP_SAFE_COORD for x in g):
        garr = np.array([g], dtype=np.int64)
        if side == "left":
            rows = _product_rows(group, garr, F.rows())
        else:
            rows = _product_rows(group, F.rows(), garr)
        return FiniteSubset.from_rows(group, rows)
    mul = group.mul
    if side == "left":
        return FiniteSubset._trusted(group, frozenset(mul(g, f) for f in F.elements))
    return FiniteSubset._trusted(group, frozenset(mul(f, g) for f in F.elements))
