"""JSON and binary interchange formats.

Group elements serialize as JSON integer arrays, finite subsets as canonically
sorted arrays of such arrays.  Exact rationals serialize as {"num", "den"}
objects.  Configurations additionally support a compact binary grid format
(see ``write_configuration_binary``); its header is

    magic "FOLNRGRD" | version u8 | group kind u8 (0 = Zd, 1 = Heisenberg3)
    | d u8 | d x (origin i64, extent u64) | rows u32 | rows x (alphabet u32)

followed by the symbols of each row as unsigned bytes, rows concatenated in
order, window cells in canonical order (little-endian throughout).
"""

from __future__ import annotations

import json
import struct
from fractions import Fraction

import numpy as np

from .density import Window
from .errors import CapacityError, DomainError
from .groups import FiniteSubset, GroupSpec
from .quasitiling import Quasitiling
from .symbolic import Alphabet, Configuration

MAGIC = b"FOLNRGRD"
BINARY_VERSION = 1


def fraction_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def to_jsonable(obj):
    """Recursively convert reports to JSON-serializable structures."""
    if isinstance(obj, Fraction):
        return fraction_json(obj)
    if isinstance(obj, FiniteSubset):
        return obj.to_json()
    if isinstance(obj, Window):
        return window_to_json(obj)
    if isinstance(obj, GroupSpec):
        return obj.to_json()
    if isinstance(obj, Quasitiling):
        return tiling_to_json(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, dict):
        if all(isinstance(k, str) for k in obj):
            return {k: to_jsonable(v) for k, v in obj.items()}
        return [[to_jsonable(k), to_jsonable(v)] for k, v in sorted(obj.items())]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(obj)]
    return obj


def json_dumps(obj) -> str:
    """Deterministic JSON rendering used by every report writer."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


def subset_from_json(group: GroupSpec, data) -> FiniteSubset:
    if not isinstance(data, list):
        raise DomainError("a finite subset must be a JSON array of coordinate arrays")
    return FiniteSubset(group, data)


def window_to_json(window: Window) -> dict:
    region = window.region
    rows = region.rows()
    lo = rows.min(axis=0)
    hi = rows.max(axis=0)
    extent = [int(h - l + 1) for l, h in zip(lo, hi)]
    if len(region) == int(np.prod(extent)):
        return {"box": {"origin": [int(x) for x in lo], "extent": extent}}
    return {"elements": region.to_json()}


def window_from_json(group: GroupSpec, data) -> Window:
    if "box" in data:
        box = data["box"]
        return Window.box(group, box["origin"], box["extent"])
    if "elements" in data:
        return Window(subset_from_json(group, data["elements"]))
    raise DomainError("window JSON needs a 'box' or 'elements' field")


def tiling_to_json(tiling: Quasitiling) -> dict:
    meta = dict(tiling.meta)
    out_meta = {}
    eps = meta.pop("eps", None)
    if eps is not None:
        out_meta["eps"] = fraction_json(eps)
    covering = meta.pop("covering", None)
    if covering is not None:
        covering = Fraction(covering)
        out_meta["covering_num"] = covering.numerator
        out_meta["covering_den"] = covering.denominator
    bound = meta.pop("covering_bound", None)
    if bound is not None:
        bound = Fraction(bound)
        out_meta["bound_num"] = bound.numerator
        out_meta["bound_den"] = bound.denominator
    if "maximal" in meta:
        out_meta["maximal"] = bool(meta.pop("maximal"))
    for k, v in meta.items():
        out_meta[k] = to_jsonable(v)
    return {
        "group": tiling.group.to_json(),
        "shapes": [s.to_json() for s in tiling.shapes],
        "centers": [c.to_json() for c in tiling.centers],
        "window": window_to_json(tiling.window),
        "meta": out_meta,
    }


def tiling_from_json(data: dict) -> Quasitiling:
    group = GroupSpec.from_json(data["group"])
    shapes = [subset_from_json(group, s) for s in data["shapes"]]
    centers = [subset_from_json(group, c) for c in data["centers"]]
    window = window_from_json(group, data["window"])
    meta = dict(data.get("meta", {}))
    if "eps" in meta and isinstance(meta["eps"], dict):
        meta["eps"] = Fraction(meta["eps"]["num"], meta["eps"]["den"])
    if "covering_num" in meta:
        meta["covering"] = Fraction(meta.pop("covering_num"), meta.pop("covering_den"))
    if "bound_num" in meta:
        meta["covering_bound"] = Fraction(meta.pop("bound_num"), meta.pop("bound_den"))
    tiling = Quasitiling(group, shapes, centers, window, meta)
    tiling.validate()
    return tiling


def configuration_to_json(cfg: Configuration) -> dict:
    cells = cfg.window.region.sorted_elements()
    return {
        "group": cfg.group.to_json(),
        "window": window_to_json(cfg.window),
        "rows": cfg.row_count,
        "alphabets": [a.size for a in cfg.alphabets],
        "values": [[row[g] for g in cells] for row in cfg.rows],
    }


def configuration_from_json(data: dict) -> Configuration:
    group = GroupSpec.from_json(data["group"])
    window = window_from_json(group, data["window"])
    alphabets = [Alphabet(int(s)) for s in data["alphabets"]]
    cells = window.region.sorted_elements()
    rows = []
    for flat in data["values"]:
        if len(flat) != len(cells):
            raise DomainError("row length does not match the window size")
        rows.append(dict(zip(cells, flat)))
    return Configuration(window, alphabets, rows)


def _window_box(window: Window):
    rows = window.region.rows()
    lo = rows.min(axis=0)
    hi = rows.max(axis=0)
    extent = [int(h - l + 1) for l, h in zip(lo, hi)]
    if len(window.region) != int(np.prod(extent)):
        raise DomainError("binary grid format requires a box window")
    return [int(x) for x in lo], extent


def write_configuration_binary(cfg: Configuration) -> bytes:
    origin, extent = _window_box(cfg.window)
    for a in cfg.alphabets:
        if a.size > 256:
            raise CapacityError(
                f"binary symbol cap exceeded: alphabet size {a.size} > 256"
            )
    kind = 0 if cfg.group.kind == "zd" else 1
    d = cfg.group.dim
    head = [MAGIC, struct.pack("<BBB", BINARY_VERSION, kind, d)]
    for o, n in zip(origin, extent):
        head.append(struct.pack("<qQ", o, n))
    head.append(struct.pack("<I", cfg.row_count))
    for a in cfg.alphabets:
        head.append(struct.pack("<I", a.size))
    cells = cfg.window.region.sorted_elements()
    body = bytearray()
    for row in cfg.rows:
        body.extend(row[g] for g in cells)
    return b"".join(head) + bytes(body)


def read_configuration_binary(blob: bytes) -> Configuration:
    if blob[:8] != MAGIC:
        raise DomainError("not a folnerlab binary grid (bad magic)")
    version, kind, d = struct.unpack_from("<BBB", blob, 8)
    if version != BINARY_VERSION:
        raise DomainError(f"unsupported binary grid version {version}")
    group = GroupSpec.zd(d) if kind == 0 else GroupSpec.heisenberg3()
    if kind == 1 and d != 3:
        raise DomainError("Heisenberg grids must be 3-dimensional")
    off = 11
    origin, extent = [], []
    for _ in range(d):
        o, n = struct.unpack_from("<qQ", blob, off)
        off += 16
        origin.append(o)
        extent.append(int(n))
    (rows,) = struct.unpack_from("<I", blob, off)
    off += 4
    sizes = []
    for _ in range(rows):
        (s,) = struct.unpack_from("<I", blob, off)
        off += 4
        sizes.append(int(s))
    window = Window.box(group, origin, extent)
    cells = window.region.sorted_elements()
    n_cells = len(cells)
    expected = off + rows * n_cells
    if len(blob) != expected:
        raise DomainError(f"binary grid has {len(blob)} bytes, expected {expected}")
    row_maps = []
    for r in range(rows):
        chunk = blob[off + r * n_cells : off + (r + 1) * n_cells]
        row_maps.append(dict(zip(cells, chunk)))
    return Configuration(window, [Alphabet(s) for s in sizes], row_maps)
