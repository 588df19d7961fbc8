"""Sliding block maps on X_w given by centered local rules over the language."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Mapping

from .errors import ClosureFailure, NotFound, UnknownWord
from .factor import Phase, induced_shift
from .substrate import ALPHABET, PartialWindow, Params, language, language_set

INVERSE_RADIUS_CAP = 256
FLIP_CAP = 200


@dataclass(frozen=True, eq=False)
class Rule:
    """Local rule of radius R: a table from factors of length 2R+1 to symbols.

    Two rules compare equal (``==``) when their radius and table coincide;
    use :func:`equal` for equality as maps on X.
    """

    params: Params
    radius: int
    table: Mapping[str, str] = field(repr=False)

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        width = 2 * self.radius + 1
        for u, v in self.table.items():
            if len(u) != width or v not in ALPHABET:
                raise ValueError(f"bad table entry {u!r} -> {v!r}")
        object.__setattr__(self, "table", MappingProxyType(dict(self.table)))

    @cached_property
    def _key(self):
        return (self.params, self.radius, tuple(sorted(self.table.items())))

    def __eq__(self, other):
        return isinstance(other, Rule) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Rule(radius={self.radius}, entries={len(self.table)})"

    def image(self, s):
        """Apply the rule to a raw string; the result is 2R cells shorter."""
        width = 2 * self.radius + 1
        table = self.table
        out = []
        for i in range(len(s) - width + 1):
            u = s[i:i + width]
            try:
                out.append(table[u])
            except KeyError:
                raise UnknownWord(u) from None
        return "".join(out)

    def to_json(self):
        return {"radius": self.radius, "table": dict(sorted(self.table.items()))}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, params, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(params, int(data["radius"]), dict(data["table"]))


@dataclass(frozen=True)
class EndoCertificate:
    rule: Rule
    checked_depth: int
    induced: Phase


def rule_from_function(params, radius, fn):
    """Tabulate ``fn`` on every factor of length 2*radius+1."""
    return Rule(params, radius, {u: fn(u) for u in language(params, 2 * radius + 1)})


def identity_rule(params):
    return rule_from_function(params, 0, lambda u: u)


def shift_rule(params, n=1):
    """sigma^n as a centered rule of radius |n|: the output reads cell i+n."""
    r = abs(n)
    return rule_from_function(params, r, lambda u: u[r + n])


def apply(f, y):
    """f applied to a hole-free window; the result starts R cells further right."""
    if not y.is_full:
        raise ValueError("apply needs a hole-free window")
    if len(y) < 2 * f.radius + 1:
        raise ValueError(f"window of length {len(y)} is shorter than 2R+1 = {2 * f.radius + 1}")
    return PartialWindow(y.offset + f.radius, f.image(y.cells))


def compose(f, g):
    """The rule of f o g, tabulated at radius R_f + R_g (not minimised)."""
    if f.params != g.params:
        raise ValueError("rules over different parameters")
    return rule_from_function(f.params, f.radius + g.radius, lambda u: f.image(g.image(u)))


def pad(f, radius):
    """The same map tabulated at a larger radius."""
    if radius < f.radius:
        raise ValueError("cannot pad to a smaller radius")
    d = radius - f.radius
    width = 2 * f.radius + 1
    return rule_from_function(f.params, radius, lambda u: f.table[u[d:d + width]])


def equal(f, g):
    """Equality as maps on X: agreement on every factor of the common length."""
    if f.params != g.params:
        return False
    r = max(f.radius, g.radius)
    df, dg = r - f.radius, r - g.radius
    wf, wg = 2 * f.radius + 1, 2 * g.radius + 1
    return all(f.table[u[df:df + wf]] == g.table[u[dg:dg + wg]]
               for u in language_set(f.params, 2 * r + 1))


def _restrict(f, r):
    d = f.radius - r
    width = 2 * r + 1
    out = {}
    for u, v in f.table.items():
        key = u[d:d + width]
        if out.setdefault(key, v) != v:
            return None
    return out


def minimize(f):
    """The same map at the least centered radius that determines it."""
    for r in range(f.radius + 1):
        table = _restrict(f, r)
        if table is not None:
            return Rule(f.params, r, table)
    raise AssertionError("unreachable: the rule determines itself")


def shift_amount(f):
    """n if f is sigma^n, else None."""
    f = minimize(f)
    r = f.radius
    for n in range(-r, r + 1):
        if all(v == u[r + n] for u, v in f.table.items()):
            return n
    return None


def inverse(f, cap=INVERSE_RADIUS_CAP):
    """Inverse of an automorphism, tabulated at the least radius that works."""
    params, R = f.params, f.radius
    for r in range(cap + 1):
        table = {}
        ok = True
        for u in language_set(params, 2 * (r + R) + 1):
            v = f.image(u)
            c = u[r + R]
            if table.setdefault(v, c) != c:
                ok = False
                break
        if ok:
            if set(table) != language_set(params, 2 * r + 1):
                raise ClosureFailure(next(iter(set(table) ^ language_set(params, 2 * r + 1))), "")
            return Rule(params, r, table)
    raise NotFound(f"no inverse of radius <= {cap}")


def compose_power(f, n):
    """f^n, minimised after every step; negative n uses the inverse."""
    if n < 0:
        return compose_power(inverse(f), -n)
    out = identity_rule(f.params)
    base = minimize(f)
    for _ in range(n):
        out = minimize(compose(base, out))
    return out


def is_endomorphism(f, depth):
    """Check f maps every factor of length ``depth`` to a factor.

    This is a semi-decision: the certificate records the depth checked.
    """
    if depth < 2 * f.radius + 1:
        raise ValueError("depth must be at least 2R+1")
    params = f.params
    target = language_set(params, depth - 2 * f.radius)
    for u in language(params, depth):
        v = f.image(u)
        if v not in target:
            raise ClosureFailure(u, v)
    return EndoCertificate(f, depth, induced_shift(params, f, 1))


_FLIP = str.maketrans("01", "10")


def flip_witness(params, cap=FLIP_CAP):
    """Shortest (then least) factor whose bitwise complement is not a factor."""
    for length in range(1, cap + 1):
        words = language_set(params, length)
        bad = sorted(u for u in words if u.translate(_FLIP) not in words)
        if bad:
            return bad[0]
    raise NotFound(f"every factor up to length {cap} has its complement in the language")
