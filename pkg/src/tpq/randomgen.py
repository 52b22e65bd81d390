"""Seeded random inputs for the identity checks and property suites."""
from __future__ import annotations

import random
from itertools import combinations

from .expr import ChartSignature, Expr
from .geom import Form, MultiVector


def random_poly(sig: ChartSignature, rng: random.Random, degree: int = 2, terms: int = 3, coords=None) -> Expr:
    """Sum of ``terms`` monomials of degree <= ``degree`` with small integer coefficients."""
    names = list(coords or sig.coordinates)
    out = Expr.zero(sig)
    for _ in range(terms):
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        m = Expr.rational(c, 0, sig)
        for _ in range(rng.randint(0, degree)):
            m = m * sig.coord(rng.choice(names))
        out = out + m
    return out


def random_form(sig: ChartSignature, rng: random.Random, grade: int, degree: int = 2, density: float = 0.5, coords=None) -> Form:
    comps = {}
    for idx in combinations(range(sig.dim), grade):
        if rng.random() < density:
            comps[idx] = random_poly(sig, rng, degree, 2, coords)
    return Form(sig, grade, comps)


def random_multivector(sig: ChartSignature, rng: random.Random, grade: int, degree: int = 2, density: float = 0.5, coords=None) -> MultiVector:
    comps = {}
    for idx in combinations(range(sig.dim), grade):
        if rng.random() < density:
            comps[idx] = random_poly(sig, rng, degree, 2, coords)
    return MultiVector(sig, grade, comps)
