"""Brute-force search for all block maps of small radius that map X_w into itself."""
from __future__ import annotations

from .autgroup import decompose
from .blockmap import Rule, inverse, minimize
from .errors import BudgetExceeded, ClassificationError
from .substrate import language, language_set, sample_window

RADIUS_BUDGET = 2


def _survives(params, table, radius, depth):
    rule = Rule(params, radius, table)
    target = language_set(params, depth - 2 * radius)
    return all(rule.image(u) in target for u in language(params, depth))


def enumerate_endomorphisms(params, radius, depth=40, budget=RADIUS_BUDGET):
    """Every rule over language(2R+1) that maps language(depth) into language(depth - 2R).

    Tables are built along a prefix of x(w) that contains every factor of
    length ``depth``: a word gets its image at its first occurrence, and
    the image so far must end in a factor at every step.  Complete tables
    are then checked against all of language(depth).
    """
    if radius > budget:
        raise BudgetExceeded(f"radius {radius} exceeds the search budget {budget}")
    if depth < 4 * radius + 2:
        raise ValueError("depth must be at least 4R+2")
    width = 2 * radius + 1
    keep = depth - 2 * radius
    s = sample_window(params, depth)
    words = [s[i:i + width] for i in range(len(s) - width + 1)]
    last_new = max(words.index(u) for u in set(words))
    if set(words) != language_set(params, width):
        raise AssertionError("sample window misses a factor")
    lang = [None] + [language_set(params, n) for n in range(1, keep + 1)]

    found = []
    table = {}
    img = []
    stack = []  # (position, word, symbol still to try or None)

    def backtrack():
        while stack:
            j, u, nxt = stack.pop()
            if nxt is None:
                del table[u]
                continue
            del img[j:]
            table[u] = nxt
            stack.append((j, u, None))
            return j
        return None

    i = 0
    while i is not None:
        if i > last_new:
            if _survives(params, table, radius, depth):
                found.append(Rule(params, radius, table))
            i = backtrack()
            continue
        u = words[i]
        if u not in table:
            table[u] = "0"
            stack.append((i, u, "1"))
        img.append(table[u])
        n = min(keep, len(img))
        i = i + 1 if "".join(img[-n:]) in lang[n] else backtrack()
    return sorted(found, key=lambda f: f.dumps())


def classify(params, rules, complete_radius=None):
    """Map each rule to its rational value and check the map is injective.

    With ``complete_radius`` set, ``rules`` claims to hold every
    endomorphism of that radius, so it must also contain the inverse of
    each of its maps whose inverse has radius at most ``complete_radius``.
    """
    out = {}
    by_value = {}
    for f in rules:
        v = decompose(params, f).value
        out[f] = v
        g = by_value.setdefault(v, minimize(f))
        if g != minimize(f):
            raise ClassificationError(f"two different maps share the value {v}")
    if complete_radius is not None:
        for f, v in out.items():
            if -v not in by_value and inverse(f).radius <= complete_radius:
                raise ClassificationError(f"{-v} is missing although the inverse of the map for {v} fits")
    return out
