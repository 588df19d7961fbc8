"""Unlifting and lifting block maps through psi_w, the maps sigma_j, and decomposition."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .blockmap import (
    Rule,
    compose,
    compose_power,
    equal,
    identity_rule,
    minimize,
    shift_amount,
    shift_rule,
)
from .errors import (
    BudgetExceeded,
    IterationCap,
    NotInGroup,
    RoundTripFailure,
    WindowArithmetic,
)
from .factor import induced_shift, phase
from .lifting_group import format_rational, from_rational, to_rational
from .substrate import HOLE, PartialWindow, language

SIGMA_BUDGET = 4
ITERATION_CAP = 64


def _unlift_at(params, f, out_radius):
    p, w = params.p, params.w
    R = f.radius
    table = {}
    for u in language(params, 2 * out_radius + 1):
        c = phase(params, PartialWindow(-out_radius, u), 1).value
        sym = w[c % p]
        if sym != HOLE:
            table[u] = sym
            continue
        t = params.hole_index(c)
        lo = params.hole_position(t - R) - c + out_radius
        hi = params.hole_position(t + R) - c + out_radius
        if lo < 0 or hi >= len(u):
            raise WindowArithmetic(f"radius {out_radius} too small to see 2R+1 = {2 * R + 1} holes")
        cells = "".join(u[params.hole_position(t + s) - c + out_radius] for s in range(-R, R + 1))
        table[u] = f.table[cells]
    return Rule(params, out_radius, table)


def unlift(params, f):
    """The conjugate of f through psi_w, acting on the hole layer; minimised."""
    radius = math.ceil(params.p * f.radius / params.q) + 3 * params.p
    try:
        g = _unlift_at(params, f, radius)
    except WindowArithmetic:
        g = _unlift_at(params, f, 2 * radius)
    return minimize(g)


def lift(params, f, verify=True):
    """(k, h) with f = unlift(h) o sigma^-k and 0 <= k < p; h minimised."""
    p = params.p
    k = (-induced_shift(params, f, 1).value) % p
    R = f.radius
    ell = math.ceil(params.q * (R + 3 * p) / p)
    pos0 = params.hole_position(0)
    layout = []
    for pos in range(pos0 + k - R, pos0 + k + R + 1):
        j = params.hole_index(pos)
        layout.append(params.w[pos % p] if j is None else j + ell)
    if any(isinstance(x, int) and not 0 <= x <= 2 * ell for x in layout):
        raise WindowArithmetic(f"lift radius {ell} does not cover the window of f")
    table = {}
    for v in language(params, 2 * ell + 1):
        cells = "".join(v[x] if isinstance(x, int) else x for x in layout)
        table[v] = f.table[cells]
    h = minimize(Rule(params, ell, table))
    if verify and not equal(f, compose(unlift(params, h), shift_rule(params, -k))):
        raise RoundTripFailure(f"unlift(h) o sigma^-{k} differs from f (radius {R} -> {h.radius})")
    return k, h


_sigma_cache: dict = {}
_sigma_lock = threading.Lock()


def sigma(params, j, sign=1, budget=SIGMA_BUDGET):
    """sigma_j = unlift^j(sigma), or its inverse when sign = -1."""
    if j < 0:
        raise ValueError("j must be >= 0")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if j > budget:
        raise BudgetExceeded(f"sigma_{j} exceeds the budget j <= {budget}")
    key = (params, j, sign)
    with _sigma_lock:
        hit = _sigma_cache.get(key)
    if hit is not None:
        return hit
    rule = shift_rule(params, sign) if j == 0 else unlift(params, sigma(params, j - 1, sign, budget))
    with _sigma_lock:
        return _sigma_cache.setdefault(key, rule)


@dataclass(frozen=True)
class Decomposition:
    """Outcome of iterated lifting.

    ``digits`` are the level-wise shift exponents found while lifting and
    ``residual_shift`` the shift power the residual settled on at
    ``residual_level``.  ``coeffs`` is the balanced normal form of ``value``.
    """

    digits: tuple
    residual_shift: int
    residual_level: int
    value: Fraction
    coeffs: tuple
    trace: tuple = field(default=(), repr=False, compare=False)

    @property
    def raw_coeffs(self):
        return self.digits + (self.residual_shift,)

    def to_json(self):
        return {
            "coeffs": list(self.coeffs),
            "value": format_rational(self.value),
            "residual_level": self.residual_level,
        }


def decompose(params, f, cap=ITERATION_CAP, check=True):
    """Write f as an element of <sigma_j>; value(sigma) = 1."""
    p, q = params.p, params.q
    digits = []
    trace = []
    seen = set()
    cur = minimize(f)
    for _ in range(cap):
        n = shift_amount(cur)
        trace.append((cur.radius, n))
        if n is not None:
            break
        if cur in seen:
            raise NotInGroup(f"residual of radius {cur.radius} recurs but is not a shift power",
                             tuple(trace))
        seen.add(cur)
        k, cur = lift(params, cur)
        digits.append(-k)
    else:
        raise IterationCap(f"no shift residual after {cap} lifts")
    level = len(digits)
    value = to_rational(digits + [n], p, q)
    coeffs = tuple(from_rational(value, p, q))
    dec = Decomposition(tuple(digits), n, level, value, coeffs, tuple(trace))
    if check and not equal(minimize(f), reconstruct(params, coeffs)):
        raise NotInGroup("reconstructed normal form differs from the input", tuple(trace))
    return dec


def reconstruct(params, coeffs, budget=SIGMA_BUDGET):
    """The product of sigma_t^k_t, minimised."""
    out = identity_rule(params)
    for t, k in enumerate(coeffs):
        if k:
            part = compose_power(sigma(params, t, 1 if k > 0 else -1, budget), abs(k))
            out = minimize(compose(part, out))
    return out
