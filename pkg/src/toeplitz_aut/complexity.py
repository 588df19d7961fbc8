"""Factor complexity n(k) of X_w and checks of its subquadratic growth."""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import MissingEntry
from .factor import right_radius
from .substrate import SAMPLE_LIMIT, holes_in, sampled_language_set

BOUND_EXPONENT = 1.7565
BOUND_SLACK = 1.1
CALIBRATION = (10, 100)


def theoretical_exponent(params):
    """log_{p/q} p, the exponent of the divide-and-conquer bound."""
    return math.log(params.p) / math.log(params.p / params.q)


@lru_cache(maxsize=None)
def _recursive_count(params, k):
    if k <= max(SAMPLE_LIMIT, right_radius(params)):
        return len(sampled_language_set(params, k))
    return sum(_recursive_count(params, holes_in(params, c, k)) for c in range(params.p))


def count_factors(params, k, method="auto"):
    """n(k), the number of factors of length k.

    ``enumerate`` counts factors read from a prefix of x(w).  ``recursive``
    (the default) uses that for k > r a factor has exactly one phase c mod p
    and is fixed by the factor of length m_c(k) sitting in its holes, so
    n(k) is the sum over c of n(m_c(k)).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if method == "enumerate":
        return len(sampled_language_set(params, k))
    if method in ("auto", "recursive"):
        return _recursive_count(params, k)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class ComplexityProfile:
    params: object = field(repr=False)
    entries: tuple

    def __post_init__(self):
        ks = [k for k, _ in self.entries]
        if ks != sorted(set(ks)):
            raise ValueError("profile lengths must be strictly increasing")

    def as_dict(self):
        return dict(self.entries)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "n_k"])
        writer.writerows(self.entries)
        return buf.getvalue()


def profile(params, k_from, k_to, method="auto"):
    if not 1 <= k_from <= k_to:
        raise ValueError("need 1 <= k_from <= k_to")
    return ComplexityProfile(params, tuple((k, count_factors(params, k, method))
                                           for k in range(k_from, k_to + 1)))


def enumerated_profile(params, k_max):
    """n(k) for k <= k_max from one sampled factor set of length k_max.

    Every factor extends to the right, so n(k) is the number of distinct
    k-prefixes of the sorted length-k_max factors: one plus the number of
    neighbours whose common prefix is shorter than k.
    """
    words = sorted(sampled_language_set(params, k_max))
    lcp = [len(os.path.commonprefix((a, b))) for a, b in zip(words, words[1:])]
    hist = np.bincount(lcp, minlength=k_max + 1)
    below = np.cumsum(hist)
    entries = tuple((k, 1 + int(below[k - 1])) for k in range(1, k_max + 1))
    return ComplexityProfile(params, entries)


@dataclass(frozen=True)
class RecurrenceReport:
    ok: bool
    checked: tuple
    vacuous: tuple
    failures: tuple  # (k, n(k), bound)


def recurrence_target(params, k):
    return math.ceil(params.q * k / params.p) + 2 * params.p


def recurrence_check(profile, k_range=None):
    """Check n(k) <= p n(ceil(qk/p) + 2p) pointwise; for p=5, q=2 this is 5 n(ceil(2k/5) + 10).

    Lengths where the right side refers to a length >= k are skipped as vacuous.
    """
    params = profile.params
    table = profile.as_dict()
    ks = sorted(table) if k_range is None else list(k_range)
    checked, vacuous, failures = [], [], []
    for k in ks:
        if k not in table:
            raise MissingEntry(k)
        m = recurrence_target(params, k)
        if m >= k:
            vacuous.append(k)
            continue
        if m not in table:
            raise MissingEntry(m)
        checked.append(k)
        bound = params.p * table[m]
        if table[k] > bound:
            failures.append((k, table[k], bound))
    return RecurrenceReport(not failures, tuple(checked), tuple(vacuous), tuple(failures))


def exponent_fit(profile, k_range=None):
    """Least-squares slope of log n(k) against log k."""
    pts = [(k, n) for k, n in profile.entries if k_range is None or k in k_range]
    if len(pts) < 8:
        raise ValueError(f"need at least 8 points, got {len(pts)}")
    x = np.log([k for k, _ in pts])
    y = np.log([n for _, n in pts])
    return float(np.polyfit(x, y, 1)[0])


@dataclass(frozen=True)
class BoundReport:
    ok: bool
    constant: float
    exponent: float
    failures: tuple  # lengths k with n(k) above the bound


def bound_check(profile, k_range=None, exponent=BOUND_EXPONENT, slack=BOUND_SLACK,
                calibration=CALIBRATION):
    """n(k) <= slack * C * k^exponent, with C = max n(k)/k^exponent over the calibration range."""
    table = profile.as_dict()
    lo, hi = calibration
    missing = [k for k in range(lo, hi + 1) if k not in table]
    if missing:
        raise MissingEntry(missing[0])
    c = max(table[k] / k ** exponent for k in range(lo, hi + 1))
    ks = sorted(table) if k_range is None else list(k_range)
    fails = tuple(k for k in ks if table[k] > slack * c * k ** exponent)
    return BoundReport(not fails, c, exponent, fails)


def phase_count_bound(params, k):
    """p times the largest hole-layer count: an upper bound for n(k)."""
    return params.p * max(count_factors(params, holes_in(params, c, k)) for c in range(params.p))

