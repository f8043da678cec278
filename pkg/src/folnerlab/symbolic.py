"""Patterns over finite domains, block frequencies, and entropy estimators.

Frequencies are exact rationals; a pattern occurrence of Q (domain A) at a
position g inside a pattern P (domain B) requires A*g inside B and agreement
P(a*g) = Q(a) at every a.  The normalizer is |B|, so frequencies of long
blocks never reach 1.

Entropies use the natural logarithm with compensated summation.  The exact
product-measure block entropy enumerates the full pattern distribution on the
given Folner set, which is capped at 2^24 patterns.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .density import Window
from .errors import CapacityError, DomainError
from .folner import invariance_defect
from .groups import FiniteSubset, GroupSpec, translate

PATTERN_SPACE_CAP = 2**24


@dataclass(frozen=True)
class Alphabet:
    """Symbols 0 .. size-1."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise DomainError(f"alphabet size must be >= 1, got {self.size}")


@dataclass
class Pattern:
    """A symbol-valued function on a finite domain."""

    alphabet: Alphabet
    domain: FiniteSubset
    values: dict

    def __post_init__(self):
        vals = {}
        for g in self.domain:
            if g not in self.values:
                raise DomainError(f"pattern value missing at {g}")
            s = int(self.values[g])
            if not 0 <= s < self.alphabet.size:
                raise DomainError(f"symbol {s} outside alphabet of size {self.alphabet.size}")
            vals[g] = s
        self.values = vals


class Configuration:
    """Row-indexed symbol assignment on a window (a finite array restriction).

    Row r takes values in its own alphabet.  For Z^d box windows the rows are
    also held as integer grids so that pattern counting can vectorize.
    """

    def __init__(self, window: Window, alphabets: Sequence[Alphabet], rows: Sequence[dict]):
        if len(alphabets) < 1 or len(alphabets) != len(rows):
            raise DomainError("need one value map per row alphabet")
        self.window = window
        self.alphabets = list(alphabets)
        self.rows = []
        for r, (alpha, vals) in enumerate(zip(self.alphabets, rows)):
            row = {}
            for g in window.region:
                if g not in vals:
                    raise DomainError(f"row {r} missing a value at {g}")
                s = int(vals[g])
                if not 0 <= s < alpha.size:
                    raise DomainError(f"row {r} symbol {s} outside alphabet")
                row[g] = s
            self.rows.append(row)
        self._grids = None

    @property
    def group(self) -> GroupSpec:
        return self.window.group

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @classmethod
    def from_arrays(
        cls, group: GroupSpec, origin: Sequence[int], arrays: Sequence[np.ndarray],
        alphabets: Sequence[Alphabet],
    ) -> "Configuration":
        """Build over the box window spanned by the arrays (Z^d only)."""
        window = Window.box(group, origin, arrays[0].shape)
        rows = []
        origin = tuple(int(x) for x in origin)
        for arr in arrays:
            arr = np.asarray(arr)
            row = {}
            for idx in np.ndindex(*arr.shape):
                row[tuple(o + i for o, i in zip(origin, idx))] = int(arr[idx])
            rows.append(row)
        cfg = cls(window, alphabets, rows)
        cfg._grids = [np.asarray(a, dtype=np.int64) for a in arrays]
        return cfg

    def get(self, row: int, g) -> int:
        return self.rows[row][tuple(g)]

    def grids(self):
        """Per-row integer grids when the window is a Z^d box, else None."""
        if self._grids is not None:
            return self._grids
        grid = self.window.grid()
        if grid is None:
            return None
        if len(self.window.region) != int(np.prod(grid.extent)):
            return None
        out = []
        for row in self.rows:
            arr = np.zeros(grid.extent, dtype=np.int64)
            for g, s in row.items():
                arr[tuple(x - o for x, o in zip(g, grid.origin))] = s
            out.append(arr)
        self._grids = out
        return out


class Distribution:
    """Outcomes with nonnegative weights summing to 1 (tolerance 1e-12)."""

    def __init__(self, outcomes: Sequence, weights: Sequence[float]):
        if len(outcomes) != len(weights):
            raise DomainError("outcomes and weights must have equal length")
        ws = [float(w) for w in weights]
        for w in ws:
            if w < 0:
                raise DomainError(f"negative weight {w}")
        total = math.fsum(ws)
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"weights sum to {total}, not 1")
        self.outcomes = list(outcomes)
        self.weights = ws

    @classmethod
    def from_pairs(cls, pairs) -> "Distribution":
        items = list(pairs)
        return cls([o for o, _ in items], [w for _, w in items])


def pattern_frequency(P: Pattern, Q: Pattern) -> Fraction:
    """Frequency of Q inside P: matching positions over |domain of P|."""
    if P.alphabet != Q.alphabet:
        raise DomainError("patterns use different alphabets")
    if len(P.domain) == 0 or len(Q.domain) == 0:
        raise DomainError("pattern domains must be nonempty")
    mul = P.domain.group.mul
    b_vals = P.values
    a_items = list(Q.values.items())
    count = 0
    for g in P.domain:
        ok = True
        for a, s in a_items:
            v = b_vals.get(mul(a, g))
            if v is None or v != s:
                ok = False
                break
        if ok:
            count += 1
    return Fraction(count, len(P.domain))


def _matches_in(y: Configuration, row: int, region: frozenset, Q: Pattern) -> int:
    """Occurrences of Q in the restriction of row ``row`` to ``region``."""
    mul = y.group.mul
    vals = y.rows[row]
    a_items = list(Q.values.items())
    count = 0
    for g in region:
        ok = True
        for a, s in a_items:
            x = mul(a, g)
            if x not in region or vals[x] != s:
                ok = False
                break
        if ok:
            count += 1
    return count


def verify_frequency_lemma(
    y: Configuration, tiling, Q: Pattern, F: FiniteSubset, eps, row: int = 0
) -> dict:
    """Whole-window frequency vs tile-averaged frequency of a block Q.

    Hypotheses recorded: every tile shape is (A, delta)-invariant with
    delta = (eps/3)/|A| for the block domain A, and the tiles fully contained
    in F cover at least a (1 - 2*eps/3)-fraction of F.  When they hold, the
    frequency of Q in the restriction of the row to F differs from the
    tile-size-weighted average of the per-tile frequencies by at most eps.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not F.elements <= y.window.region.elements:
        raise DomainError("F must be contained in the configuration window")
    if Q.alphabet != y.alphabets[row]:
        raise DomainError("block alphabet does not match the configuration row")
    A = Q.domain
    delta_used = (eps / 3) / len(A)

    covered: set = set()
    for _, _, elems in tiling.tiles():
        if covered & elems:
            raise DomainError("tiles must be pairwise disjoint")
        covered |= elems

    invariance_ok = True
    for shape, cs in zip(tiling.shapes, tiling.centers):
        if len(cs) and invariance_defect(shape, A) > delta_used:
            invariance_ok = False

    felems = F.elements
    inside_sizes = []
    inside_matches = []
    for _, _, elems in tiling.tiles():
        if elems <= felems:
            inside_sizes.append(len(elems))
            inside_matches.append(_matches_in(y, row, elems, Q))
    coverage = Fraction(sum(inside_sizes), len(F))
    coverage_ok = coverage >= 1 - Fraction(2, 3) * eps

    fr_f = Fraction(_matches_in(y, row, felems, Q), len(F))
    total = sum(inside_sizes)
    tile_avg = Fraction(sum(inside_matches), total) if total else Fraction(0)
    diff = abs(fr_f - tile_avg)
    hypotheses_met = invariance_ok and coverage_ok
    return {
        "fr_f": fr_f,
        "tile_avg": tile_avg,
        "diff": diff,
        "coverage": coverage,
        "delta_used": delta_used,
        "invariance_ok": invariance_ok,
        "coverage_ok": coverage_ok,
        "tiles_inside": len(inside_sizes),
        "hypotheses_met": hypotheses_met,
        "pass": (not hypotheses_met) or diff <= eps,
    }


def shannon_entropy(d: Distribution) -> float:
    """-sum p ln p with compensated summation; 0 ln 0 = 0."""
    return -math.fsum(w * math.log(w) for w in d.weights if w > 0.0)


def conditional_entropy(joint: Distribution) -> float:
    """H of the first coordinate given the second, for a joint over pairs."""
    slices: dict = {}
    for o, w in zip(joint.outcomes, joint.weights):
        try:
            _, b = o
        except (TypeError, ValueError) as exc:
            raise DomainError("joint outcomes must be pairs (a, b)") from exc
        slices.setdefault(b, []).append(w)
    terms = []
    for b, ws in slices.items():
        wb = math.fsum(ws)
        if wb <= 0.0:
            continue
        terms.append(-math.fsum(w * math.log(w / wb) for w in ws if w > 0.0))
    return math.fsum(terms)


def _check_pattern_cap(space: int) -> None:
    if space > PATTERN_SPACE_CAP:
        raise CapacityError(
            f"pattern-space cap exceeded: {space} > 2^24 block patterns"
        )


def bernoulli_entropy_exact(p: Distribution, F_n: FiniteSubset) -> float:
    """Block entropy per site of the product measure, from the full join.

    Enumerates the exact distribution over all |alphabet|^|F_n| patterns on
    F_n and returns H(join)/|F_n|; for a product measure this equals the
    single-site entropy, which is what the tests assert.
    """
    n = len(F_n)
    if n == 0:
        raise DomainError("F_n must be nonempty")
    size = len(p.weights)
    _check_pattern_cap(size**n)
    total = math.fsum(
        -prob * math.log(prob)
        for prob in (math.prod(c) for c in itertools.product(p.weights, repeat=n))
        if prob > 0.0
    )
    return total / n


def empirical_entropy_rate(y: Configuration, F_n: FiniteSubset) -> dict:
    """Plug-in entropy of the empirical block distribution, per site.

    Blocks are read at every interior position of the window; the sample count
    is reported and any bias is left to the caller.
    """
    if F_n.group != y.group:
        raise DomainError("F_n group does not match the configuration group")
    positions = y.window.interior(F_n)
    if len(positions) == 0:
        raise DomainError("window has no interior translate of F_n")
    n = len(F_n)
    space = 1
    for alpha in y.alphabets:
        space *= alpha.size**n
        _check_pattern_cap(space)

    counts = _block_counts(y, F_n, positions)
    m = len(positions)
    h_join = -math.fsum((c / m) * math.log(c / m) for c in counts)
    return {
        "h_n_hat": h_join / n,
        "sample_count": m,
        "distinct_patterns": len(counts),
    }


def _block_counts(y: Configuration, F_n: FiniteSubset, positions: FiniteSubset) -> list[int]:
    grids = y.grids()
    grid = y.window.grid()
    if grids is not None and grid is not None:
        pos = positions.rows() - np.array(grid.origin, dtype=np.int64)
        codes = np.zeros(pos.shape[0], dtype=np.int64)
        offsets = F_n.rows()
        for arr, alpha in zip(grids, y.alphabets):
            for t in offsets:
                cells = pos + t
                codes = codes * alpha.size + arr[tuple(cells.T)]
        _, counts = np.unique(codes, return_counts=True)
        return [int(c) for c in counts]
    mul = y.group.mul
    shape_elems = F_n.sorted_elements()
    counter: dict = {}
    for g in positions:
        key = tuple(
            row[mul(t, g)] for row in y.rows for t in shape_elems
        )
        counter[key] = counter.get(key, 0) + 1
    return list(counter.values())
