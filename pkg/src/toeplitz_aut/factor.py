"""Finite factors Z_{p^l}: phase detection, skeleton detection, induced shifts."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import Inconsistent, NoAlignment, NotVerified, WindowTooShort
from .substrate import (
    HOLE,
    PartialWindow,
    _resolve,
    generate,
    language,
    point_window,
    sample_window,
)

PHASE_LENGTH_CAP = 4096
# Above this level, phase_window_length is too slow to report in errors.
EXACT_LENGTH_LEVEL = 4
# Offsets of the sample windows used to read off induced shifts.
SAMPLE_OFFSETS = (0, 7919, -104729)


@dataclass(frozen=True)
class Phase:
    value: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not a residue mod {self.modulus}")

    def __str__(self):
        return f"{self.value} mod {self.modulus}"

    def to_json(self):
        return {"value": self.value, "modulus": self.modulus}


def right_radius(params):
    """Least r such that each factor of length r+1 occurs at a single residue mod p."""
    return _right_radius(params)[0]


def right_radius_witness(params):
    """A factor of length r occurring at two residues mod p (None when r = 0)."""
    return _right_radius(params)[1]


@lru_cache(maxsize=None)
def _right_radius(params):
    witness = None
    length = 1
    while True:
        s = sample_window(params, length)
        residues = {}
        for i in range(len(s) - length + 1):
            residues.setdefault(s[i:i + length], set()).add(i % params.p)
        ambiguous = sorted(u for u, rs in residues.items() if len(rs) > 1)
        if not ambiguous:
            return length - 1, witness
        witness = ambiguous[0]
        length += 1


@lru_cache(maxsize=None)
def _skeleton_codes(params, level):
    cells = generate(params, level, 0, params.p ** level - 1).cells
    return np.frombuffer(cells.encode("ascii"), dtype=np.uint8)


def _candidates(params, cells, level):
    """Shifts c in [0, p^level) with the skeleton at c compatible with cells at offset 0.

    Skeletons are nested, so candidates are refined one level at a time:
    a level-l candidate reduces to a level-(l-1) candidate.
    """
    y = np.frombuffer(cells.encode("ascii"), dtype=np.uint8)
    pos = np.arange(y.size)
    cand = np.zeros(1, dtype=np.int64)
    for lv in range(1, level + 1):
        sk = _skeleton_codes(params, lv)
        period = sk.size
        step = period // params.p
        lifts = (cand[:, None] + step * np.arange(params.p)[None, :]).ravel()
        s = sk[(pos[None, :] + lifts[:, None]) % period]
        ok = ((s == ord(HOLE)) | (s == y[None, :])).all(axis=1)
        cand = lifts[ok]
    return np.sort(cand)


@lru_cache(maxsize=1 << 16)
def _phase0(params, cells, level):
    cand = _candidates(params, cells, level)
    if cand.size == 1:
        return int(cand[0])
    if cand.size == 0:
        raise NoAlignment(f"{cells!r} matches no shift of the level-{level} skeleton")
    return None


def phase(params, y, level=1):
    """Residue c mod p^level with y a window of sigma^c of a point in chi^{-1}(0)."""
    if level < 1:
        raise ValueError("level must be >= 1")
    if not y.is_full:
        raise ValueError("phase needs a hole-free window")
    c0 = _phase0(params, y.cells, level)
    modulus = params.p ** level
    if c0 is None:
        required = phase_window_length(params, level) if level <= EXACT_LENGTH_LEVEL else None
        raise WindowTooShort(required, None if required else f"window too short to fix the phase mod {modulus}")
    return Phase((c0 - y.offset) % modulus, modulus)


@lru_cache(maxsize=None)
def phase_window_length(params, level=1):
    """Least L such that every factor of length L has a unique phase mod p^level."""
    for length in range(1, PHASE_LENGTH_CAP + 1):
        if all(_candidates(params, u, level).size == 1 for u in language(params, length)):
            return length
    raise NotVerified(f"phase at level {level} not determined by windows up to {PHASE_LENGTH_CAP}")


@dataclass(frozen=True)
class DetectionResult:
    k: int
    m: int
    window: int
    witness: int | None  # a non-skeleton cell repeating m-1 times


def detection_constant(params, k, cap=None):
    """Least m such that m equal k-spaced symbols starting at j mean j is in Sk(k, .).

    Checked on every cell of a prefix of x(w); the prefix doubles until m
    stays the same for two rounds.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    cap = 64 * k if cap is None else cap
    n = max(4096, 16 * params.p * k)
    prev = None
    while True:
        m, witness = _detection_scan(params, k, n, cap)
        if m == prev:
            return DetectionResult(k, m, n, witness)
        prev = m
        n *= 2
        if n > 1 << 22:
            raise NotVerified(f"detection constant for k={k} did not stabilise")


def _detection_scan(params, k, n, cap):
    vals, depth = _resolve(params, 0, n + cap * k)
    powers = np.array([params.p ** int(d) for d in depth[:n]], dtype=object)
    in_skel = np.array([k % pw == 0 for pw in powers], dtype=bool)
    run = np.ones(n, dtype=np.int64)
    live = np.arange(n)
    for t in range(1, cap + 1):
        same = vals[live + t * k] == vals[live]
        live = live[same]
        run[live] += 1
        if not live.size:
            break
    if (run[in_skel] <= cap).any():
        raise NotVerified("a skeleton cell changes value along its period")
    outside = np.nonzero(~in_skel)[0]
    worst = outside[np.argmax(run[outside])]
    m = int(run[worst]) + 1
    if m > cap:
        raise NotVerified(f"no m <= {cap} separates skeleton cells for k={k}")
    return m, int(worst)


def induced_shift(params, f, level=1):
    """Constant c with phase(f(y)) = phase(y) + c mod p^level.

    ``f`` is anything with ``radius`` and ``image(str) -> str``.
    """
    need = 64
    seen = set()
    for a in SAMPLE_OFFSETS:
        while True:
            n = 2 * f.radius + need
            src = point_window(params, a, a + n - 1)
            img = PartialWindow(a + f.radius, f.image(src.cells))
            try:
                seen.add(phase(params, img, level).value)
                break
            except WindowTooShort:
                need *= 2
    if len(seen) != 1:
        raise Inconsistent(f"sample windows disagree on the induced shift: {sorted(seen)}")
    return Phase(seen.pop(), params.p ** level)
