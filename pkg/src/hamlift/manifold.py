"""Charts of the k-th extension of a complex product manifold, and the
sparse coordinate objects living on them (vector fields, 1-forms,
2-forms, (1,1)-tensors).

Every object keeps only its nonzero coefficients, keyed by
:class:`~hamlift.symcore.Coord`. Objects are immutable after construction.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import ChartMismatch
from .symcore import (
    ONE,
    ZERO,
    Coord,
    Expr,
    T,
    as_expr,
    eval_numeric,
    wirtinger_derivative,
    z,
    zb,
)


@dataclass(frozen=True)
class CoordSystem:
    """Chart (t, z^{ri}, zb^{ri}) on the k-th extension, 0 <= r <= k, 1 <= i <= m."""

    m: int
    k: int = 0

    def __post_init__(self):
        if self.m < 1 or self.k < 0:
            raise ValueError(f"need m >= 1 and k >= 0, got m={self.m}, k={self.k}")

    @functools.cached_property
    def _coords(self):
        out = [T]
        for r in range(self.k + 1):
            for i in range(1, self.m + 1):
                out += [z(r, i), zb(r, i)]
        return tuple(out)

    def enumerate(self) -> tuple:
        return self._coords

    def fiber(self) -> tuple:
        return self._coords[1:]

    def level(self, r: int) -> tuple:
        return tuple(c for c in self._coords[1:] if c.level == r)

    @property
    def dimension(self) -> int:
        return 2 * self.m * (self.k + 1) + 1

    def __contains__(self, c) -> bool:
        if not isinstance(c, Coord):
            return False
        return c.is_time or (c.level <= self.k and c.index <= self.m)

    def base(self) -> "CoordSystem":
        return CoordSystem(self.m, 0)

    def extended(self, k: int) -> "CoordSystem":
        return CoordSystem(self.m, k)

    def check_expr(self, e: Expr, what="expression"):
        stray = [c for c in e.coords() if c not in self]
        if stray:
            raise ChartMismatch(f"{what} uses {sorted(stray)} outside chart m={self.m}, k={self.k}")

    def __str__(self):
        return f"chart(m={self.m}, k={self.k})"


def _same_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatch(f"{a.chart} vs {b.chart}")


class _Components:
    """Sparse map Coord -> Expr shared by VectorField and OneForm."""

    __slots__ = ("chart", "_data")

    def __init__(self, chart: CoordSystem, components: Mapping = None):
        data = {}
        for c, v in (components or {}).items():
            if c not in chart:
                raise ChartMismatch(f"{c} is not a coordinate of {chart}")
            v = as_expr(v)
            chart.check_expr(v, f"component {c}")
            if not v.is_zero:
                data[c] = v
        self.chart = chart
        self._data = MappingProxyType(dict(sorted(data.items())))

    @property
    def components(self) -> Mapping:
        return self._data

    def __getitem__(self, c: Coord) -> Expr:
        return self._data.get(c, ZERO)

    def items(self):
        return self._data.items()

    def __iter__(self):
        return iter(self._data)

    def _new(self, comps):
        return type(self)(self.chart, comps)

    def __add__(self, other):
        _same_chart(self, other)
        keys = set(self._data) | set(other._data)
        return self._new({c: self[c] + other[c] for c in keys})

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._new({c: -v for c, v in self._data.items()})

    def __mul__(self, scalar):
        s = as_expr(scalar)
        return self._new({c: s * v for c, v in self._data.items()})

    __rmul__ = __mul__

    def map(self, fn):
        return self._new({c: fn(v) for c, v in self._data.items()})

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.chart == other.chart and dict(self._data) == dict(other._data)

    def __hash__(self):
        return hash((self.chart, tuple(self._data.items())))

    @property
    def is_zero(self):
        return not self._data

    def fiber_part(self):
        return self._new({c: v for c, v in self._data.items() if c.is_fiber})

    def vector_at(self, point) -> np.ndarray:
        return np.array([eval_numeric(self[c], point) for c in self.chart.enumerate()])

    def __repr__(self):
        inner = ", ".join(f"{c}: {v}" for c, v in self._data.items())
        return f"{type(self).__name__}({self.chart.m}, {self.chart.k}, {{{inner}}})"


class VectorField(_Components):
    __slots__ = ()

    def __call__(self, f) -> Expr:
        """Directional derivative sum_c Z[c] df/dc."""
        f = as_expr(f)
        out = ZERO
        for c, v in self._data.items():
            d = wirtinger_derivative(f, c)
            if not d.is_zero:
                out = out + v * d
        return out

    @classmethod
    def basis(cls, chart, c: Coord) -> "VectorField":
        return cls(chart, {c: ONE})


class OneForm(_Components):
    __slots__ = ()

    def __call__(self, Z: VectorField) -> Expr:
        return pairing(self, Z)

    @classmethod
    def basis(cls, chart, c: Coord) -> "OneForm":
        return cls(chart, {c: ONE})


def differential(f, chart: CoordSystem) -> OneForm:
    f = as_expr(f)
    return OneForm(chart, {c: wirtinger_derivative(f, c) for c in f.coords()})


def pairing(omega: OneForm, Z: VectorField) -> Expr:
    _same_chart(omega, Z)
    out = ZERO
    for c, v in omega.items():
        w = Z[c]
        if not w.is_zero:
            out = out + v * w
    return out


class TwoForm:
    """2-form stored on canonically ordered pairs (c1 < c2) -> coefficient of dc1^dc2."""

    __slots__ = ("chart", "_terms")

    def __init__(self, chart: CoordSystem, terms: Mapping = None):
        acc = {}
        for (a, b), v in (terms or {}).items():
            if a not in chart or b not in chart:
                raise ChartMismatch(f"({a}, {b}) not in {chart}")
            if a == b:
                continue
            v = as_expr(v)
            if b < a:
                a, b, v = b, a, -v
            acc[(a, b)] = acc.get((a, b), ZERO) + v
        self.chart = chart
        self._terms = MappingProxyType(dict(sorted(
            ((p, v) for p, v in acc.items() if not v.is_zero), key=lambda pv: pv[0])))

    @property
    def terms(self) -> Mapping:
        return self._terms

    def __getitem__(self, pair) -> Expr:
        a, b = pair
        if a == b:
            return ZERO
        if b < a:
            return -self._terms.get((b, a), ZERO)
        return self._terms.get((a, b), ZERO)

    def items(self):
        return self._terms.items()

    def __add__(self, other):
        _same_chart(self, other)
        merged = dict(self._terms)
        for p, v in other.items():
            merged[p] = merged.get(p, ZERO) + v
        return TwoForm(self.chart, merged)

    def __neg__(self):
        return TwoForm(self.chart, {p: -v for p, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        s = as_expr(scalar)
        return TwoForm(self.chart, {p: s * v for p, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TwoForm):
            return NotImplemented
        return self.chart == other.chart and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash((self.chart, tuple(self._terms.items())))

    @property
    def is_zero(self):
        return not self._terms

    def __repr__(self):
        inner = ", ".join(f"d{a}^d{b}: {v}" for (a, b), v in self._terms.items())
        return f"TwoForm({self.chart.m}, {self.chart.k}, {{{inner}}})"


def wedge(alpha: OneForm, beta: OneForm) -> TwoForm:
    _same_chart(alpha, beta)
    terms = {}
    for a, va in alpha.items():
        for b, vb in beta.items():
            if a != b:
                terms[(a, b)] = terms.get((a, b), ZERO) + va * vb
    return TwoForm(alpha.chart, terms)


def exterior_derivative_1(omega: OneForm) -> TwoForm:
    """d(omega): coefficient of dc1^dc2 is d omega[c2]/dc1 - d omega[c1]/dc2."""
    terms = {}
    for c2, v in omega.items():
        for c1 in v.coords():
            if c1 == c2:
                continue
            d = wirtinger_derivative(v, c1)
            terms[(c1, c2)] = terms.get((c1, c2), ZERO) + d
    # TwoForm reorders (c1, c2) with a sign, which yields the antisymmetrization
    return TwoForm(omega.chart, terms)


def closedness_defects(phi: TwoForm) -> list:
    """Triples (a < b < c) where (d phi)_{abc} does not vanish identically."""
    coords = set()
    for (a, b), v in phi.items():
        coords |= {a, b} | set(v.coords())
    out = []
    for a, b, c in combinations(sorted(coords), 3):
        val = (wirtinger_derivative(phi[(b, c)], a)
               - wirtinger_derivative(phi[(a, c)], b)
               + wirtinger_derivative(phi[(a, b)], c))
        if not val.is_zero:
            out.append(((a, b, c), val))
    return out


def interior_product(Z: VectorField, phi: TwoForm) -> OneForm:
    """i_Z phi with i_Z(a^b) = a(Z) b - b(Z) a."""
    _same_chart(Z, phi)
    acc = {}
    for (c1, c2), v in phi.items():
        z1, z2 = Z[c1], Z[c2]
        if not z1.is_zero:
            acc[c2] = acc.get(c2, ZERO) + v * z1
        if not z2.is_zero:
            acc[c1] = acc.get(c1, ZERO) - v * z2
    return OneForm(phi.chart, acc)


class Tensor11:
    """(1,1)-tensor as a sparse matrix: entries[(out, in)]."""

    __slots__ = ("chart", "_entries")

    def __init__(self, chart: CoordSystem, entries: Mapping = None):
        data = {}
        for (o, i), v in (entries or {}).items():
            if o not in chart or i not in chart:
                raise ChartMismatch(f"({o}, {i}) not in {chart}")
            v = as_expr(v)
            if not v.is_zero:
                data[(o, i)] = v
        self.chart = chart
        self._entries = MappingProxyType(dict(sorted(data.items())))

    @property
    def entries(self) -> Mapping:
        return self._entries

    def __getitem__(self, key) -> Expr:
        return self._entries.get(key, ZERO)

    def items(self):
        return self._entries.items()

    @classmethod
    def identity(cls, chart) -> "Tensor11":
        return cls(chart, {(c, c): ONE for c in chart.enumerate()})

    @classmethod
    def outer(cls, X: VectorField, omega: OneForm) -> "Tensor11":
        """X (x) omega, acting as Y -> omega(Y) X."""
        _same_chart(X, omega)
        return cls(X.chart, {(a, b): va * vb for a, va in X.items() for b, vb in omega.items()})

    def __add__(self, other):
        _same_chart(self, other)
        merged = dict(self._entries)
        for key, v in other.items():
            merged[key] = merged.get(key, ZERO) + v
        return Tensor11(self.chart, merged)

    def __neg__(self):
        return Tensor11(self.chart, {key: -v for key, v in self._entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        s = as_expr(scalar)
        return Tensor11(self.chart, {key: s * v for key, v in self._entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor11):
            return NotImplemented
        return self.chart == other.chart and dict(self._entries) == dict(other._entries)

    def __hash__(self):
        return hash((self.chart, tuple(self._entries.items())))

    def column(self, c: Coord) -> VectorField:
        return VectorField(self.chart, {o: v for (o, i), v in self._entries.items() if i == c})

    def matrix_at(self, point) -> np.ndarray:
        coords = self.chart.enumerate()
        pos = {c: j for j, c in enumerate(coords)}
        out = np.zeros((len(coords), len(coords)), dtype=complex)
        for (o, i), v in self._entries.items():
            out[pos[o], pos[i]] = eval_numeric(v, point)
        return out

    def __repr__(self):
        inner = ", ".join(f"({o},{i}): {v}" for (o, i), v in self._entries.items())
        return f"Tensor11({self.chart.m}, {self.chart.k}, {{{inner}}})"


def apply_tensor11(phi: Tensor11, Z: VectorField) -> VectorField:
    _same_chart(phi, Z)
    acc = {}
    for (o, i), v in phi.items():
        w = Z[i]
        if not w.is_zero:
            acc[o] = acc.get(o, ZERO) + v * w
    return VectorField(phi.chart, acc)


def form_after_tensor(omega: OneForm, phi: Tensor11) -> OneForm:
    """The 1-form omega o phi, i.e. X -> omega(phi X)."""
    _same_chart(omega, phi)
    acc = {}
    for (o, i), v in phi.items():
        w = omega[o]
        if not w.is_zero:
            acc[i] = acc.get(i, ZERO) + w * v
    return OneForm(phi.chart, acc)


def _scaled(coef: Expr, symbol: str) -> str:
    if coef == ONE:
        return symbol
    return f"({coef})*{symbol}"


def field_text(Z: VectorField) -> str:
    """Canonical text, e.g. ``d/dt + (z0_1)*d/dz1_1``; ``0`` for the zero field."""
    return " + ".join(_scaled(v, f"d/d{c}") for c, v in Z.items()) or "0"


def form_text(omega: OneForm) -> str:
    """Canonical text, e.g. ``dt + (zb0_1)*dz0_1``."""
    return " + ".join(_scaled(v, f"d{c}") for c, v in omega.items()) or "0"


def tensor_text(phi: Tensor11) -> str:
    """Canonical text, e.g. ``(z0_1)*d/dz0_1(x)dzb0_1``."""
    return " + ".join(_scaled(v, f"d/d{o}(x)d{i}") for (o, i), v in phi.items()) or "0"
