"""Exact arithmetic in A(p, q), the subgroup of (Q, +) generated by (p/q)^i."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotMember

Rational = Fraction


def parse_rational(text):
    """'a/b' or an integer string to a Fraction."""
    return Fraction(text.strip())


def format_rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_vector(coeffs):
    return "[" + ",".join(str(k) for k in coeffs) + "]"


def _factor_out(n, q):
    e = 0
    while n % q == 0:
        n //= q
        e += 1
    return n, e


def member(x, q=2):
    """True iff the reduced denominator of x is a product of prime factors of q.

    For prime q this is exactly 'the denominator is a power of q'.
    """
    d = Fraction(x).denominator
    while True:
        g = math.gcd(d, q)
        if g == 1:
            return d == 1
        d //= g


def to_rational(coeffs: Sequence[int], p=5, q=2):
    """Sum of k_t (p/q)^t."""
    base = Fraction(p, q)
    return sum((Fraction(k) * base ** t for t, k in enumerate(coeffs)), Fraction(0))


def is_normal_form(coeffs, p=5):
    half = (p - 1) // 2
    return all(-half <= k <= half for k in coeffs) and (not coeffs or coeffs[-1] != 0)


def _balanced_digit(x, p):
    k = x.numerator * pow(x.denominator, -1, p) % p
    return k - p if k > (p - 1) // 2 else k


def from_rational(x, p=5, q=2):
    """The unique balanced normal form [k0, k1, ...] with |k_t| <= (p-1)/2."""
    x = Fraction(x)
    if not member(x, q):
        raise NotMember(f"{format_rational(x)} is not in A({p},{q})")
    out = []
    while x != 0:
        k = _balanced_digit(x, p)
        out.append(k)
        x = (x - k) * q / p
    return out


def add(a, b):
    return Fraction(a) + Fraction(b)


def neg(a):
    return -Fraction(a)


def residue(x, modulus):
    """x as an element of Z/modulus, for a modulus coprime to the denominator."""
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def base_digits(n, base, width):
    """The last ``width`` base-``base`` digits of n, most significant first."""
    out = []
    for _ in range(width):
        n, d = divmod(n, base)
        out.append(str(d))
    return "".join(reversed(out))


def denominator_exponent(x, q=2):
    """e with denominator(x) = q^e."""
    x = Fraction(x)
    if not member(x, q):
        raise NotMember(f"{format_rational(x)} is not in A(p,{q})")
    rest, e = _factor_out(x.denominator, q)
    if rest != 1:
        raise NotMember(f"denominator of {format_rational(x)} is not a power of {q}")
    return e


def nonfg_witness(elements: Iterable, p=5, q=2):
    """(p/q)^(E+1), where E is the largest denominator exponent among ``elements``.

    Every element of the subgroup the inputs generate has denominator
    exponent at most E, so the witness lies outside it.
    """
    exps = [denominator_exponent(x, q) for x in elements]
    e = max(exps, default=-1)
    return Fraction(p, q) ** (e + 1)
