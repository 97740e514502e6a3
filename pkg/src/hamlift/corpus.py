"""Seeded random objects for identity checks and tests.

Everything is drawn from :class:`random.Random` so a seed fixes the corpus
exactly, independent of platform.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .manifold import CoordSystem, OneForm, Tensor11, VectorField
from .symcore import ONE, ZERO, CRational, Expr, const, var

_COEFS = (1, -1, 2, -2, 3, Fraction(1, 2), Fraction(-3, 2))


def random_coefficient(rng: random.Random) -> Expr:
    re = rng.choice(_COEFS) if rng.random() < 0.8 else 0
    im = rng.choice(_COEFS) if rng.random() < 0.5 else 0
    if re == 0 and im == 0:
        re = 1
    return const(CRational(Fraction(re), Fraction(im)))


def random_polynomial(rng: random.Random, coords, max_terms: int = 3, max_degree: int = 2,
                      allow_constant: bool = True) -> Expr:
    """Sum of up to ``max_terms`` monomials with small complex rational coefficients."""
    coords = list(coords)
    out = ZERO
    for _ in range(rng.randint(1, max_terms)):
        lo = 0 if allow_constant else 1
        term = random_coefficient(rng)
        for _ in range(rng.randint(lo, max_degree)):
            term = term * var(rng.choice(coords))
        out = out + term
    if out.is_zero:
        out = var(coords[0])
    return out


def random_function(rng, m: int) -> Expr:
    """Time-independent base function of z0_i, zb0_i."""
    return random_polynomial(rng, CoordSystem(m, 0).fiber(), allow_constant=False)


def random_field(rng, m: int, density: float = 0.7) -> VectorField:
    """Base field with unit d/dt component and random fiber components."""
    base = CoordSystem(m, 0)
    comps = {c: random_polynomial(rng, base.fiber()) for c in base.fiber() if rng.random() < density}
    comps[base.enumerate()[0]] = ONE
    return VectorField(base, comps)


def random_form(rng, m: int, density: float = 0.7) -> OneForm:
    """Base 1-form with unit dt component and random fiber components."""
    base = CoordSystem(m, 0)
    comps = {c: random_polynomial(rng, base.fiber()) for c in base.fiber() if rng.random() < density}
    comps[base.enumerate()[0]] = ONE
    return OneForm(base, comps)


def random_tensor(rng, m: int, density: float = 0.5) -> Tensor11:
    """(1,1)-tensor on the base with random fiber-fiber entries."""
    base = CoordSystem(m, 0)
    fiber = base.fiber()
    entries = {(o, i): random_polynomial(rng, fiber, max_terms=2, max_degree=1)
               for o in fiber for i in fiber if rng.random() < density}
    return Tensor11(base, entries)


def random_hamiltonian(rng, chart: CoordSystem, levels=None, max_terms: int = 4) -> Expr:
    """Polynomial Hamiltonian in the fiber coordinates of the given levels."""
    levels = range(chart.k + 1) if levels is None else levels
    coords = [c for c in chart.fiber() if c.level in levels]
    return random_polynomial(rng, coords, max_terms=max_terms, max_degree=3, allow_constant=False)
