"""Immutable symbolic expressions over exact complex rationals.

An :class:`Expr` is kept in a canonical sum-of-terms form at all times:
every arithmetic operation returns a normalized value, so structural
equality of two expressions is plain ``==``. The supported fragment is
polynomials (with integer powers, negative ones allowed) over the
coordinates of a chart, ``exp`` of any expression, and quotients.

Coordinates ``z`` and ``zb`` are independent symbols. There is no
conjugation operator on expressions; the formal ``z <-> zb`` swap lives in
:mod:`hamlift.hamilton`.
"""
from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DivisionByZero, UnboundCoordinate

ZERO_TOL = 1e-300


# --------------------------------------------------------------------------
# coordinates


class Axis(enum.IntEnum):
    TIME = 0
    Z = 1
    ZBAR = 2


@functools.total_ordering
@dataclass(frozen=True)
class Coord:
    """A chart coordinate: ``t``, ``z^{ri}`` or ``zb^{ri}``."""

    axis: Axis
    level: int = 0
    index: int = 0

    def __post_init__(self):
        if self.axis is Axis.TIME:
            if self.level or self.index:
                raise ValueError("the time coordinate carries no level or index")
        elif self.level < 0 or self.index < 1:
            raise ValueError(f"bad coordinate level/index ({self.level}, {self.index})")

    @property
    def sort_key(self):
        if self.axis is Axis.TIME:
            return (0, 0, 0, 0)
        return (1, self.level, self.index, int(self.axis))

    def __lt__(self, other):
        if not isinstance(other, Coord):
            return NotImplemented
        return self.sort_key < other.sort_key

    @property
    def is_time(self):
        return self.axis is Axis.TIME

    @property
    def is_fiber(self):
        return self.axis is not Axis.TIME

    def mirror(self) -> "Coord":
        """The coordinate with z and zb exchanged (time maps to itself)."""
        if self.axis is Axis.Z:
            return Coord(Axis.ZBAR, self.level, self.index)
        if self.axis is Axis.ZBAR:
            return Coord(Axis.Z, self.level, self.index)
        return self

    def at_level(self, level: int) -> "Coord":
        if self.is_time:
            return self
        return Coord(self.axis, level, self.index)

    def __str__(self):
        if self.axis is Axis.TIME:
            return "t"
        prefix = "z" if self.axis is Axis.Z else "zb"
        return f"{prefix}{self.level}_{self.index}"

    def __repr__(self):
        return f"Coord({self})"


T = Coord(Axis.TIME)


def z(level: int, index: int) -> Coord:
    return Coord(Axis.Z, level, index)


def zb(level: int, index: int) -> Coord:
    return Coord(Axis.ZBAR, level, index)


# --------------------------------------------------------------------------
# exact complex rationals


@dataclass(frozen=True)
class CRational:
    re: Fraction
    im: Fraction = Fraction(0)

    @staticmethod
    def of(value) -> "CRational":
        if isinstance(value, CRational):
            return value
        if isinstance(value, complex):
            return CRational(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, (int, Fraction)):
            return CRational(Fraction(value))
        if isinstance(value, float):
            return CRational(Fraction(value))
        raise TypeError(f"cannot make a constant from {value!r}")

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def is_one(self):
        return self.re == 1 and self.im == 0

    def is_real(self):
        return self.im == 0

    def __add__(self, o):
        return CRational(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return CRational(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return CRational(-self.re, -self.im)

    def __mul__(self, o):
        return CRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def inverse(self):
        d = self.re * self.re + self.im * self.im
        if d == 0:
            raise DivisionByZero("division by the exact constant 0")
        return CRational(self.re / d, -self.im / d)

    def __truediv__(self, o):
        return self * o.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE_Q, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return CRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def key(self):
        return (self.re, self.im)

    def __str__(self):
        if self.im == 0:
            return _frac_str(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = f"{_frac_str(self.im)}*i"
        if self.re == 0:
            return imag
        if imag.startswith("-"):
            return f"{_frac_str(self.re)} - {imag[1:]}"
        return f"{_frac_str(self.re)} + {imag}"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


ZERO_Q = CRational(Fraction(0))
ONE_Q = CRational(Fraction(1))
I_Q = CRational(Fraction(0), Fraction(1))


# --------------------------------------------------------------------------
# atoms
#
# A monomial is a sorted tuple of (atom, exponent). Atoms are Coord,
# ExpAtom (exponent always 1: exp factors are merged) or SumAtom (a monic
# multi-term expression; exponent always negative, positive powers of sums
# are expanded instead).


@dataclass(frozen=True)
class ExpAtom:
    arg: "Expr"


@dataclass(frozen=True)
class SumAtom:
    base: "Expr"


def _atom_key(atom):
    if isinstance(atom, Coord):
        return (0, atom.sort_key)
    if isinstance(atom, ExpAtom):
        return (1, atom.arg.sort_key)
    return (2, atom.base.sort_key)


def _mono_key(mono):
    degree = sum(e for a, e in mono if isinstance(a, Coord))
    return (degree, tuple((_atom_key(a), e) for a, e in mono))


def _mono_mul(m1, m2):
    """Product of two monomials; exp factors merge into a single exp."""
    if not m1:
        return m2
    if not m2:
        return m1
    powers = {}
    exp_args = []
    for atom, e in m1 + m2:
        if isinstance(atom, ExpAtom):
            exp_args.append(atom.arg)
        else:
            powers[atom] = powers.get(atom, 0) + e
    items = [(a, e) for a, e in powers.items() if e != 0]
    if exp_args:
        arg = exp_args[0]
        for other in exp_args[1:]:
            arg = arg + other
        if not arg.is_zero:
            items.append((ExpAtom(arg), 1))
    items.sort(key=lambda ae: _atom_key(ae[0]))
    return tuple(items)


# --------------------------------------------------------------------------
# expressions


class Expr:
    """Normalized symbolic expression (immutable, hashable).

    Build expressions with the helpers :func:`const`, :func:`var`,
    :func:`exp` and Python operators; every result is already normalized.
    """

    __slots__ = ("_terms", "_hash", "_key")

    def __init__(self, terms: Mapping = None):
        items = []
        for mono, coef in (terms or {}).items():
            if not coef.is_zero():
                items.append((mono, coef))
        items.sort(key=lambda mc: _mono_key(mc[0]))
        self._terms = tuple(items)
        self._hash = None
        self._key = None

    # -- construction helpers -------------------------------------------
    @staticmethod
    def _from_pairs(pairs):
        acc = {}
        for mono, coef in pairs:
            acc[mono] = acc.get(mono, ZERO_Q) + coef
        return Expr(acc)

    @property
    def terms(self):
        return self._terms

    # -- queries ----------------------------------------------------------
    @property
    def is_zero(self):
        return not self._terms

    @property
    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and not self._terms[0][0])

    @property
    def constant_value(self) -> CRational:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self._terms[0][1] if self._terms else ZERO_Q

    def constant_term(self) -> CRational:
        for mono, coef in self._terms:
            if not mono:
                return coef
        return ZERO_Q

    def coords(self) -> frozenset:
        out = set()
        for mono, _ in self._terms:
            for atom, _e in mono:
                if isinstance(atom, Coord):
                    out.add(atom)
                elif isinstance(atom, ExpAtom):
                    out |= atom.arg.coords()
                else:
                    out |= atom.base.coords()
        return frozenset(out)

    @property
    def sort_key(self):
        if self._key is None:
            self._key = tuple((_mono_key(m), c.key) for m, c in self._terms)
        return self._key

    # -- tree view ----------------------------------------------------------
    @property
    def kind(self) -> str:
        """Outermost node kind of the canonical tree."""
        if self.is_constant:
            return "const"
        if len(self._terms) > 1:
            return "sum"
        mono, coef = self._terms[0]
        if coef == -ONE_Q:
            return "neg"
        if not coef.is_one() or len(mono) > 1:
            return "product"
        atom, e = mono[0]
        if e < 0:
            return "quotient"
        if e > 1:
            return "power"
        return "coord" if isinstance(atom, Coord) else "exp"

    @property
    def args(self) -> tuple:
        kind = self.kind
        if kind == "const":
            return ()
        if kind == "sum":
            return tuple(Expr({m: c}) for m, c in self._terms)
        mono, coef = self._terms[0]
        if kind == "neg":
            return (Expr({mono: ONE_Q}),)
        if kind == "product":
            factors = [] if coef.is_one() else [const(coef)]
            factors += [_atom_power(a, e) for a, e in mono]
            return tuple(factors)
        atom, e = mono[0]
        if kind == "quotient":
            return (ONE, _atom_power(atom, -e))
        if kind == "power":
            return (_atom_expr(atom), const(e))
        if kind == "exp":
            return (atom.arg,)
        return ()

    @property
    def coord(self) -> Coord:
        if self.kind != "coord":
            raise ValueError(f"{self} is not a bare coordinate")
        return self._terms[0][0][0][0]

    # -- equality / hashing ------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Expr):
            return self._terms == other._terms
        if isinstance(other, (int, float, complex, Fraction, CRational)):
            return self._terms == as_expr(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = as_expr(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        return Expr._from_pairs(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self._terms})

    def __sub__(self, other):
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return as_expr(other) + (-self)

    def __mul__(self, other):
        other = as_expr(other)
        if not self._terms or not other._terms:
            return ZERO
        pairs = [(_mono_mul(m1, m2), c1 * c2)
                 for m1, c1 in self._terms for m2, c2 in other._terms]
        return Expr._from_pairs(pairs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_expr(other)
        ratio = _constant_ratio(self, other)
        if ratio is not None:
            return const(ratio)
        return self * _reciprocal(other)

    def __rtruediv__(self, other):
        return as_expr(other) / self

    def __pow__(self, n):
        if isinstance(n, Expr):
            if not (n.is_constant and n.constant_value.is_real()
                    and n.constant_value.re.denominator == 1):
                raise TypeError("only integer powers are supported")
            n = int(n.constant_value.re)
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return _reciprocal(self ** (-n)) if len(self._terms) != 1 else _reciprocal(self) ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # -- printing -------------------------------------------------------------
    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Expr({to_text(self)!r})"

    def __bool__(self):
        return not self.is_zero


def _atom_expr(atom) -> Expr:
    if isinstance(atom, SumAtom):
        return atom.base
    return Expr({((atom, 1),): ONE_Q})


def _atom_power(atom, e) -> Expr:
    if isinstance(atom, SumAtom):
        return Expr({((atom, e),): ONE_Q})
    if isinstance(atom, ExpAtom):
        return exp(atom.arg * e)
    return Expr({((atom, e),): ONE_Q})


def _constant_ratio(a: Expr, b: Expr):
    # a == q*b for a constant q; only tried for multi-term b
    if len(b.terms) < 2 or len(a.terms) != len(b.terms):
        return None
    q = a.terms[0][1] / b.terms[0][1]
    for (ma, ca), (mb, cb) in zip(a.terms, b.terms):
        if ma != mb or ca != q * cb:
            return None
    return q


def _reciprocal(e: Expr) -> Expr:
    if e.is_zero:
        raise DivisionByZero("division by the exact constant 0")
    if len(e.terms) == 1:
        mono, coef = e.terms[0]
        out = const(coef.inverse())
        for atom, p in mono:
            if isinstance(atom, ExpAtom):
                out = out * exp(-atom.arg)
            elif isinstance(atom, SumAtom):
                out = out * atom.base ** (-p)
            else:
                out = out * Expr({((atom, -p),): ONE_Q})
        return out
    lead = e.terms[0][1]
    monic = Expr({m: c / lead for m, c in e.terms})
    return Expr({((SumAtom(monic), -1),): lead.inverse()})


def const(value) -> Expr:
    q = CRational.of(value)
    if q.is_zero():
        return ZERO
    return Expr({(): q})


def var(c: Coord) -> Expr:
    return Expr({((c, 1),): ONE_Q})


def exp(arg) -> Expr:
    arg = as_expr(arg)
    if arg.is_zero:
        return ONE
    return Expr({((ExpAtom(arg), 1),): ONE_Q})


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, Coord):
        return var(value)
    return const(value)


ZERO = Expr()
ONE = Expr({(): ONE_Q})
I = Expr({(): I_Q})


def normalize(e: Expr) -> Expr:
    """Expressions are normalized on construction; this is the identity."""
    return e


def structurally_equal(a, b) -> bool:
    return (as_expr(a) - as_expr(b)).is_zero


# --------------------------------------------------------------------------
# calculus


@functools.lru_cache(maxsize=200_000)
def wirtinger_derivative(e: Expr, c: Coord) -> Expr:
    """Formal partial derivative, with z and zb as independent variables."""
    if c not in e.coords():
        return ZERO
    pairs = []
    out = ZERO
    for mono, coef in e.terms:
        for j, (atom, p) in enumerate(mono):
            rest = mono[:j] + mono[j + 1:]
            if isinstance(atom, Coord):
                if atom != c:
                    continue
                piece = Expr({_mono_mul(rest, ((atom, p - 1),) if p != 1 else ()): coef * CRational.of(p)})
                pairs.extend(piece.terms)
            elif isinstance(atom, ExpAtom):
                inner = wirtinger_derivative(atom.arg, c)
                if inner.is_zero:
                    continue
                out = out + Expr({mono: coef}) * inner
            else:
                inner = wirtinger_derivative(atom.base, c)
                if inner.is_zero:
                    continue
                lowered = Expr({_mono_mul(rest, ((atom, p - 1),)): coef * CRational.of(p)})
                out = out + lowered * inner
    return out + Expr._from_pairs(pairs)


def substitute(e: Expr, bindings: Mapping[Coord, object]) -> Expr:
    """Simultaneous substitution of coordinates by expressions."""
    if not bindings:
        return e
    bound = {c: as_expr(v) for c, v in bindings.items()}
    if not (e.coords() & bound.keys()):
        return e
    return _subst(e, bound)


def _subst(e, bound):
    out = ZERO
    for mono, coef in e.terms:
        term = const(coef)
        for atom, p in mono:
            if isinstance(atom, Coord):
                factor = bound[atom] ** p if atom in bound else Expr({((atom, p),): ONE_Q})
            elif isinstance(atom, ExpAtom):
                factor = exp(_subst(atom.arg, bound))
            else:
                factor = _subst(atom.base, bound) ** p
            term = term * factor
        out = out + term
    return out


def eval_numeric(e: Expr, point: Mapping[Coord, complex]) -> complex:
    """Evaluate to a double-precision complex number."""
    total = 0j
    for mono, coef in e.terms:
        value = complex(coef)
        for atom, p in mono:
            if isinstance(atom, Coord):
                try:
                    v = complex(point[atom])
                except KeyError:
                    raise UnboundCoordinate(atom) from None
            elif isinstance(atom, ExpAtom):
                v = cmath.exp(eval_numeric(atom.arg, point))
            else:
                v = eval_numeric(atom.base, point)
            if p < 0 and abs(v) <= ZERO_TOL:
                raise DivisionByZero(f"denominator {_atom_expr(atom)} evaluates to 0")
            value *= v ** p
        total += value
    return total


def compile_exprs(exprs: Sequence[Expr], coords: Sequence[Coord]) -> Callable[[Sequence[complex]], list]:
    """Compile expressions into one Python function of a coordinate vector.

    The returned callable takes a sequence of complex values ordered like
    ``coords`` and returns the list of expression values. Raises
    UnboundCoordinate at compile time if an expression needs a coordinate
    outside ``coords``.
    """
    slot = {c: j for j, c in enumerate(coords)}
    body = ", ".join(_py_source(e, slot) for e in exprs)
    src = f"def _f(x):\n    return [{body}]\n"
    scope = {"_exp": cmath.exp}
    exec(compile(src, "<hamlift-compiled>", "exec"), scope)
    return scope["_f"]


def _py_source(e, slot):
    if e.is_zero:
        return "0j"
    parts = []
    for mono, coef in e.terms:
        factors = [repr(complex(coef))]
        for atom, p in mono:
            if isinstance(atom, Coord):
                if atom not in slot:
                    raise UnboundCoordinate(atom)
                base = f"x[{slot[atom]}]"
            elif isinstance(atom, ExpAtom):
                base = f"_exp({_py_source(atom.arg, slot)})"
            else:
                base = f"({_py_source(atom.base, slot)})"
            factors.append(base if p == 1 else f"{base}**({p})")
        parts.append("*".join(factors))
    return "(" + " + ".join(parts) + ")"


# --------------------------------------------------------------------------
# canonical text


def to_text(e: Expr) -> str:
    if e.is_zero:
        return "0"
    out = []
    for n, (mono, coef) in enumerate(e.terms):
        s = _term_text(mono, coef)
        if n == 0:
            out.append(s)
        elif s.startswith("-"):
            out.append(" - " + s[1:])
        else:
            out.append(" + " + s)
    return "".join(out)


def _term_text(mono, coef):
    if not mono:
        return str(coef)
    body = "*".join(_factor_text(a, p) for a, p in mono)
    if coef.is_one():
        return body
    if coef == -ONE_Q:
        return "-" + body
    if coef.is_real():
        return f"{_frac_str(coef.re)}*{body}"
    return f"({coef})*{body}"


def _factor_text(atom, p):
    if isinstance(atom, Coord):
        base = str(atom)
    elif isinstance(atom, ExpAtom):
        base = f"exp({to_text(atom.arg)})"
    else:
        base = f"({to_text(atom.base)})"
    if p == 1:
        return base
    if p < 0:
        return f"{base}^({p})"
    return f"{base}^{p}"


def total(items: Iterable) -> Expr:
    out = ZERO
    for x in items:
        out = out + x
    return out


def isfinite(value: complex) -> bool:
    return math.isfinite(value.real) and math.isfinite(value.imag)
