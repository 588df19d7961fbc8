"""Partial windows, the fill map, and the Toeplitz point x(w).

Cells are single characters: ``'0'``, ``'1'`` and the hole ``'_'``.
Everything here is exact integer/string work; no floating point.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    AssumptionViolated,
    DepthCapExceeded,
    InsufficientFill,
    NoAnchor,
    NoHoles,
    PhaseMismatch,
    RangeTooLarge,
    Unstable,
)

HOLE = "_"
ALPHABET = "01"
DEPTH_CAP = 64
WINDOW_BUDGET = 1 << 25
# Factors up to this length come straight from a prefix of x(w).
SAMPLE_LIMIT = 32


@dataclass(frozen=True)
class PartialWindow:
    """Cells ``cells[i - offset]`` of a partial point, for absolute index i."""

    offset: int
    cells: str

    def __post_init__(self):
        if not self.cells:
            raise ValueError("a window needs at least one cell")
        bad = set(self.cells) - set(ALPHABET + HOLE)
        if bad:
            raise ValueError(f"invalid cells {sorted(bad)}")

    def __len__(self):
        return len(self.cells)

    def __str__(self):
        return self.cells

    @property
    def end(self):
        """Absolute index of the last cell."""
        return self.offset + len(self.cells) - 1

    def at(self, i):
        if not self.offset <= i <= self.end:
            raise IndexError(i)
        return self.cells[i - self.offset]

    def restrict(self, a, b):
        if a < self.offset or b > self.end or a > b:
            raise IndexError((a, b))
        return PartialWindow(a, self.cells[a - self.offset:b - self.offset + 1])

    def holes(self):
        return [self.offset + i for i, c in enumerate(self.cells) if c == HOLE]

    @property
    def is_full(self):
        return HOLE not in self.cells

    def to_text(self):
        return f"offset={self.offset}\n{self.cells}\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if len(lines) != 2 or not lines[0].startswith("offset="):
            raise ValueError("expected 'offset=<int>' followed by one line of cells")
        return cls(int(lines[0][len("offset="):]), lines[1])

    def to_json(self):
        return {"offset": self.offset, "cells": self.cells}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["offset"]), data["cells"])


@dataclass(frozen=True)
class Params:
    """The tuple (p, p', q, w); build instances through :func:`validate_params`."""

    p: int
    p_prime: int
    q: int
    w: str

    @cached_property
    def hole_offsets(self):
        """Positions of the holes inside one copy of w."""
        return tuple(i for i, c in enumerate(self.w) if c == HOLE)

    @cached_property
    def _rank(self):
        rank = [-1] * self.p
        for t, i in enumerate(self.hole_offsets):
            rank[i] = t
        return tuple(rank)

    def hole_index(self, pos):
        """Index of the hole of w^Z at ``pos`` (anchor hole = 0), or None."""
        m, r = divmod(pos, self.p)
        t = self._rank[r]
        if t < 0:
            return None
        return m * self.q + t

    def hole_index_ceil(self, pos):
        """Index of the first hole of w^Z at or after ``pos``."""
        m, r = divmod(pos, self.p)
        return m * self.q + sum(1 for i in self.hole_offsets if i < r)

    def hole_position(self, k):
        m, t = divmod(k, self.q)
        return m * self.p + self.hole_offsets[t]


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def lazy_period_check(y, t):
    """True iff the periodic extension of ``y`` has lazy period ``t``."""
    cells = y.cells if isinstance(y, PartialWindow) else y
    n = len(cells)
    g = math.gcd(t, n)
    for r in range(g):
        seen = {c for c in cells[r::g] if c != HOLE}
        if len(seen) > 1:
            return False
    return True


def least_lazy_period(y):
    cells = y.cells if isinstance(y, PartialWindow) else y
    return next(t for t in range(1, len(cells) + 1) if lazy_period_check(cells, t))


def validate_params(p, p_prime, q, w):
    """Check the standing assumptions; raise AssumptionViolated listing every failure.

    The symbol-map assumption is not checked here, see
    :func:`toeplitz_aut.blockmap.flip_witness`.
    """
    if isinstance(w, PartialWindow):
        w = w.cells
    if set(w) - set(ALPHABET + HOLE):
        raise ValueError(f"w must be over {{0,1,_}}: {w!r}")
    bad = []
    if not _is_prime(p):
        bad.append("p prime")
    if p != 2 * p_prime + 1:
        bad.append("p = 2p'+1")
    if not 1 < q <= p_prime:
        bad.append("1 < q <= p'")
    if math.gcd(q, p) != 1:
        bad.append("gcd(q,p) = 1")
    if len(w) != p:
        bad.append("|w| = p")
    if not w or w[0] == HOLE:
        bad.append("w_0 != hole")
    if not w or w[-1] == HOLE:
        bad.append("w_{p-1} != hole")
    if HOLE * 2 in w:
        bad.append("'__' not a factor of w")
    if w.count(HOLE) != q:
        bad.append("|w|_hole = q")
    if len(w) == p and least_lazy_period(w) != p:
        bad.append("least lazy period of w^Z is p")
    if bad:
        raise AssumptionViolated(bad)
    return Params(p, p_prime, q, w)


DEFAULT_PARAMS = validate_params(5, 2, 2, "1_0_0")


def occurrences(u, v):
    """Number of (possibly overlapping) occurrences of ``u`` in ``v``."""
    if not u:
        raise ValueError("u must be nonempty")
    return sum(1 for i in range(len(v) - len(u) + 1) if v.startswith(u, i))


def fill(y, z, allow_full=False):
    """Write the two-sided sequence ``z`` into the holes of ``y``.

    The anchor is the least hole of ``y`` at a nonnegative index; it gets
    ``z_0``, the holes to its right get ``z_1, z_2, ...`` and the holes to
    its left get ``z_-1, z_-2, ...``.  ``z`` is a PartialWindow indexed by
    absolute position, or any callable ``k -> symbol``.
    """
    holes = y.holes()
    if not holes:
        if allow_full:
            return y
        raise NoAnchor("window has no holes")
    right = [h for h in holes if h >= 0]
    if not right:
        raise NoAnchor("window has no hole at a nonnegative index")
    a = holes.index(right[0])
    get = z if callable(z) else None
    cells = list(y.cells)
    for n, h in enumerate(holes):
        k = n - a
        if get is not None:
            c = get(k)
        elif z.offset <= k <= z.end:
            c = z.at(k)
        else:
            raise InsufficientFill(f"z has no cell at index {k}")
        cells[h - y.offset] = c
    return PartialWindow(y.offset, "".join(cells))


def periodic_window(word, a, b):
    """``word^Z`` restricted to [a, b]."""
    n = len(word)
    return PartialWindow(a, "".join(word[i % n] for i in range(a, b + 1)))


# -- the point x(w) --------------------------------------------------------

def _resolve(params, a, b, max_depth=DEPTH_CAP):
    """Values (0/1, or -1 for unresolved) and fill depths of x(w) on [a, b].

    Cell i of x^{j+1} = psi_w(x^j) is w_{i mod p} unless that is a hole, in
    which case it is cell hole_index(i) of x^j.  Following that chain gives
    each cell's value and the first depth at which it is filled.
    """
    if b - a + 1 > WINDOW_BUDGET:
        raise RangeTooLarge(f"range of {b - a + 1} cells exceeds budget {WINDOW_BUDGET}")
    p, q = params.p, params.q
    sym = np.array([-1 if c == HOLE else int(c) for c in params.w], dtype=np.int8)
    rank = np.array(params._rank, dtype=np.int64)
    n = b - a + 1
    vals = np.full(n, -1, dtype=np.int8)
    depth = np.zeros(n, dtype=np.int16)
    cur = np.arange(a, b + 1, dtype=np.int64)
    live = np.arange(n)
    d = 0
    while live.size and d < max_depth:
        d += 1
        r = cur % p
        v = sym[r]
        done = v >= 0
        vals[live[done]] = v[done]
        depth[live[done]] = d
        keep = ~done
        live = live[keep]
        cur = (cur[keep] // p) * q + rank[r[keep]]
    return vals, depth


def _render(vals):
    out = np.where(vals < 0, ord(HOLE), vals + ord("0")).astype(np.uint8)
    return out.tobytes().decode("ascii")


def generate(params, depth, a, b):
    """x^depth(w) restricted to [a, b], computed exactly cell by cell."""
    if a > b:
        raise ValueError("empty range")
    if depth < 0 or depth > DEPTH_CAP:
        raise ValueError(f"depth must be in [0, {DEPTH_CAP}]")
    vals, _ = _resolve(params, a, b, max_depth=depth)
    return PartialWindow(a, _render(vals))


def fill_depths(params, a, b):
    """Depth at which each cell of [a, b] is filled; the cell's least period is p**depth."""
    vals, depth = _resolve(params, a, b)
    if (vals < 0).any():
        raise DepthCapExceeded(f"some cell of [{a}, {b}] is still a hole at depth {DEPTH_CAP}")
    return depth


def point_window(params, a, b):
    """The exact restriction x(w)_[a, b]."""
    if a > b:
        raise ValueError("empty range")
    vals, _ = _resolve(params, a, b)
    if (vals < 0).any():
        raise DepthCapExceeded(f"some cell of [{a}, {b}] is still a hole at depth {DEPTH_CAP}")
    return PartialWindow(a, _render(vals))


def iterate_fill(params, depth):
    """One period [0, p^depth) of x^depth, by literally iterating phi(., w^Z).

    Slow reference construction; the period is tiled from the previous
    level, so the window always contains the true anchor.
    """
    wz = lambda k: params.w[k % params.p]
    cur = PartialWindow(0, HOLE)
    for _ in range(depth):
        cur = fill(PartialWindow(0, cur.cells * params.p), wz)
    return cur


@lru_cache(maxsize=16)
def _prefix(params, n):
    return point_window(params, 0, n - 1).cells


def skeleton_xw(params, level, a, b):
    """Sk(p^level, x(w)) on [a, b]; equals x^level, and all holes at level 0."""
    if level < 0:
        raise ValueError("level must be >= 0")
    if level == 0:
        return PartialWindow(a, HOLE * (b - a + 1))
    return generate(params, level, a, b)


def skeleton(params, k, a, b):
    """Sk(k, x(w)) on [a, b] for any k >= 1: keep cell i iff p**depth(i) divides k."""
    vals, depth = _resolve(params, a, b)
    if (vals < 0).any():
        raise DepthCapExceeded(f"unresolved cell in [{a}, {b}]")
    keep = np.array([k % params.p ** int(d) == 0 for d in depth], dtype=bool)
    return PartialWindow(a, _render(np.where(keep, vals, -1)))


def _is_primitive(word):
    return (word + word).find(word, 1) == len(word)


def essential_periods(params, k_max):
    """All k <= k_max such that no shift 0 < l < k fixes Sk(k, x(w))."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    vals, depth = _resolve(params, 0, k_max - 1)
    cells = _render(vals)
    pw = [params.p ** int(d) for d in depth]
    out = []
    for k in range(1, k_max + 1):
        word = "".join(cells[i] if k % pw[i] == 0 else HOLE for i in range(k))
        if _is_primitive(word):
            out.append(k)
    return out


def hole_positions(params, depth):
    """Sorted hole positions of x^depth inside one period [0, p^depth)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    holes = list(params.hole_offsets)
    period = params.p
    for _ in range(depth - 1):
        holes = sorted(params.hole_position(h + t * period)
                       for h in holes for t in range(params.q))
        period *= params.p
    return holes


def gap_stat(params, depth):
    """Minimal distance between consecutive holes of x^depth."""
    holes = hole_positions(params, depth)
    if not holes:
        raise NoHoles(f"x^{depth} has no holes")
    period = params.p ** depth
    gaps = [b - a for a, b in zip(holes, holes[1:])]
    gaps.append(holes[0] + period - holes[-1])
    return min(gaps)


# -- language ---------------------------------------------------------------

def _ceil_log(n, base):
    e, v = 0, 1
    while v < n:
        v *= base
        e += 1
    return e


@lru_cache(maxsize=None)
def _stable_factors(params, length):
    """Length-``length`` factors of x(w)[0, N) for the first N where doubling adds nothing."""
    if length == 0:
        return frozenset([""]), 0
    n = max(4 * params.p ** _ceil_log(length, params.p), 4096)
    s = _prefix(params, n)
    words = {s[i:i + length] for i in range(n - length + 1)}
    while True:
        if 2 * n > WINDOW_BUDGET:
            raise Unstable(f"language of length {length} did not stabilise below {WINDOW_BUDGET} cells")
        s = _prefix(params, 2 * n)
        new = {s[i:i + length] for i in range(n - length + 1, 2 * n - length + 1)}
        if new <= words:
            return frozenset(words), n
        words |= new
        n *= 2


def sampled_language_set(params, length):
    """Factors read off a long prefix of x(w); independent of the recursion below."""
    return _stable_factors(params, length)[0]


def holes_in(params, a, length):
    """Number of holes of w^Z in [a, a + length)."""
    return params.hole_index_ceil(a + length) - params.hole_index_ceil(a)


@lru_cache(maxsize=None)
def _recursive_factors(params, length):
    if length <= SAMPLE_LIMIT:
        return sampled_language_set(params, length)
    p, w = params.p, params.w
    words = set()
    for c in range(p):
        first = params.hole_index_ceil(c)
        m = holes_in(params, c, length)
        layout = []
        for pos in range(c, c + length):
            k = params.hole_index(pos)
            layout.append(w[pos % p] if k is None else k - first)
        for v in _recursive_factors(params, m):
            words.add("".join(v[x] if isinstance(x, int) else x for x in layout))
    return frozenset(words)


def language_set(params, length):
    """Set of length-``length`` factors of X_w.

    Short lengths are sampled from a prefix of x(w).  Longer ones use
    X = union of sigma^c psi_w(X) over 0 <= c < p: a factor is a window of
    w^Z starting at c whose holes carry a shorter factor.
    """
    return _recursive_factors(params, length)


def language(params, length):
    """Sorted list of the length-``length`` factors of X_w."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return sorted(language_set(params, length))


def sample_window(params, length):
    """A prefix of x(w) that contains every factor of the given length."""
    n = _stable_factors(params, length)[1]
    return _prefix(params, max(n, 1))


# -- psi_w ------------------------------------------------------------------

def psi_w(params, z):
    """Write the hole-free window ``z`` into the holes of w^Z.

    The output covers exactly the cells whose holes are indexed inside z,
    so ``psi_w_inverse(psi_w(z)) == z``.
    """
    if not z.is_full:
        raise ValueError("psi_w needs a hole-free window")
    a = params.hole_position(z.offset - 1) + 1
    b = params.hole_position(z.end + 1) - 1
    cells = []
    for pos in range(a, b + 1):
        k = params.hole_index(pos)
        cells.append(params.w[pos % params.p] if k is None else z.at(k))
    return PartialWindow(a, "".join(cells))


def psi_w_inverse(params, y, phase=0):
    """Extract the hole subsequence of ``y``, re-indexed so the anchor hole is 0.

    ``y`` must be hole-free and aligned with w^Z at the given phase, i.e. its
    cell at absolute index i sits at index i + phase of a point in psi_w(X).
    """
    if not y.is_full:
        raise ValueError("psi_w_inverse needs a hole-free window")
    out = []
    first = None
    for i, c in enumerate(y.cells):
        pos = y.offset + i + phase
        k = params.hole_index(pos)
        if k is None:
            if c != params.w[pos % params.p]:
                raise PhaseMismatch(f"cell {y.offset + i} is {c!r}, w^Z has {params.w[pos % params.p]!r}")
        else:
            if first is None:
                first = k
            out.append(c)
    if not out:
        raise PhaseMismatch("window covers no hole of w^Z")
    return PartialWindow(first, "".join(out))
