"""Randomized evaluation used to cross-check the structural zero test."""
from __future__ import annotations

import random
from fractions import Fraction
from math import lcm

from .core import Expr, as_expr

__all__ = ["evaluate_at", "numeric_probe"]


def _rand_q(rng: random.Random) -> Fraction:
    while True:
        # wide range so that hitting a root of a small polynomial is negligible
        v = Fraction(rng.randint(-(10 ** 9), 10 ** 9), rng.randint(1, 10 ** 6))
        if v != 0:
            return v


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cpow(a, k):
    if k < 0:
        n = a[0] * a[0] + a[1] * a[1]
        a = (a[0] / n, -a[1] / n)
        k = -k
    out = (Fraction(1), Fraction(0))
    for _ in range(k):
        out = _cmul(out, a)
    return out


def evaluate_at(e: Expr, seed: int) -> tuple[Fraction, Fraction]:
    """Evaluate ``e`` exactly at a pseudo-random generic point.

    Every coordinate, every jet and ``pi`` receive independent nonzero rational
    values.  For each variable ``v`` occurring inside exponentials with
    coefficient denominators dividing ``N``, ``exp(v/N)`` receives an
    independent positive rational, so ``exp(c*v)`` evaluates to an integer
    power of it.
    """
    e = as_expr(e)
    rng = random.Random(seed)
    values: dict = {}
    exp_den: dict = {}
    for (fac, ex), _ in e._t.items():
        for atom, q in ex:
            exp_den[atom] = lcm(exp_den.get(atom, 1), Fraction(q).denominator)

    def value(atom):
        if atom not in values:
            values[atom] = (_rand_q(rng), Fraction(0))
        return values[atom]

    exp_base: dict = {}

    def base(atom):
        if atom not in exp_base:
            exp_base[atom] = (Fraction(rng.randint(1, 10 ** 6), rng.randint(1, 10 ** 6)), Fraction(0))
        return exp_base[atom]

    total = (Fraction(0), Fraction(0))
    for mono in sorted(e._t):
        fac, ex = mono
        c = e._t[mono]
        acc = (Fraction(c[0]), Fraction(c[1]))
        for atom, k in fac:
            acc = _cmul(acc, _cpow(value(atom), k))
        for atom, q in ex:
            acc = _cmul(acc, _cpow(base(atom), int(q * exp_den[atom])))
        total = (total[0] + acc[0], total[1] + acc[1])
    return total


def numeric_probe(e: Expr, seed: int = 0) -> bool:
    """True when ``e`` evaluates to zero at the generic point for ``seed``."""
    v = evaluate_at(e, seed)
    return v[0] == 0 and v[1] == 0
