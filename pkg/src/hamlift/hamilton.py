"""Hamiltonian vector fields of i_Z Phi = dH on the k-th extension.

The Liouville form and the closed 2-form come in two flavours:

* vertical: ``lambda = (1/2) i (-z_{0i} dzb_{0i} + zb_{0i} dz_{0i})``,
  only level-0 differentials, so Phi is degenerate for k >= 1;
* complete: the same summed over every level r.

:func:`solve_hamiltonian_field` matches coefficients of i_Z Phi against dH
with the fiber components of Z as unknowns. The closed-form fields of the
two propositions are provided separately by :func:`closed_form_field` so
the two routes can be checked against each other.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lifts import Kind, LiftKind, as_kind
from .manifold import (
    CoordSystem,
    OneForm,
    TwoForm,
    VectorField,
    differential,
    exterior_derivative_1,
    interior_product,
)
from .symcore import (
    I,
    ONE,
    ZERO,
    CRational,
    ExpAtom,
    Expr,
    SumAtom,
    T,
    as_expr,
    const,
    exp,
    var,
    wirtinger_derivative,
    z,
    zb,
)

HALF_I = const(CRational(Fraction(0), Fraction(1, 2)))
INV_I = ONE / I  # = -i


def _levels(chart: CoordSystem, kind) -> range:
    return range(1) if as_kind(kind) is Kind.VERTICAL else range(chart.k + 1)


def liouville_form(chart: CoordSystem, kind) -> OneForm:
    comps = {}
    for r in _levels(chart, kind):
        for i in range(1, chart.m + 1):
            comps[zb(r, i)] = -HALF_I * var(z(r, i))
            comps[z(r, i)] = HALF_I * var(zb(r, i))
    return OneForm(chart, comps)


def symplectic_form(chart: CoordSystem, kind) -> TwoForm:
    """Phi = -d(lambda)."""
    return -exterior_derivative_1(liouville_form(chart, kind))


def closed_symplectic_form(chart: CoordSystem, kind) -> TwoForm:
    """The printed closed form -i dzb_{ri} ^ dz_{ri}, built directly."""
    terms = {}
    for r in _levels(chart, kind):
        for i in range(1, chart.m + 1):
            terms[(zb(r, i), z(r, i))] = -I
    return TwoForm(chart, terms)


@dataclass
class HamiltonianSystem:
    chart: CoordSystem
    kind: LiftKind
    H: Expr
    Z: VectorField
    rhs: dict
    unconstrained: list = field(default_factory=list)
    solvability_obstructions: list = field(default_factory=list)

    def field_rhs(self, c):
        return self.rhs.get(c, ZERO)


def solve_hamiltonian_field(H, chart: CoordSystem, kind) -> HamiltonianSystem:
    """Solve i_Z Phi = dH for the fiber part of Z by coefficient matching.

    Each unknown fiber component u_c contributes i_{e_c} Phi to the left
    side; Phi pairs every z with its own zb, so the system is diagonal.
    Differentials of H that no unknown reaches are recorded as
    obstructions and unknowns that no equation reaches as unconstrained.
    For the vertical kind the solved level-0 components are placed at
    level k, and levels 0..k-1 are reported unconstrained (k >= 1).
    """
    H = as_expr(H)
    chart.check_expr(H, "Hamiltonian")
    tag = as_kind(kind)
    phi = symplectic_form(chart, tag)
    dH = differential(H, chart)

    # column of the coefficient matrix for each unknown
    columns = {c: interior_product(VectorField.basis(chart, c), phi) for c in chart.fiber()}
    rows = {}
    for c, col in columns.items():
        for out, coef in col.items():
            if not coef.is_constant:
                raise ValueError(f"non-constant 2-form coefficient {coef}")
            rows.setdefault(out, []).append((c, coef))

    solved = {}
    obstructions = []
    for out in chart.enumerate():
        target = dH[out]
        entries = rows.get(out, [])
        if not entries:
            if not target.is_zero:
                obstructions.append((out, target))
            continue
        if len(entries) > 1:
            raise ValueError(f"coefficient system is not diagonal at d{out}")
        c, coef = entries[0]
        solved[c] = target / coef

    free = [c for c in chart.fiber() if c not in solved]
    if tag is Kind.VERTICAL and chart.k >= 1:
        solved = {c.at_level(chart.k): v for c, v in solved.items()}
        free = [c for c in chart.fiber() if c.level < chart.k]

    Z = VectorField(chart, {T: ONE, **solved})
    rhs = {c: Z[c] for c in chart.fiber()}
    return HamiltonianSystem(
        chart=chart,
        kind=LiftKind(tag, chart.k),
        H=H,
        Z=Z,
        rhs=rhs,
        unconstrained=free,
        solvability_obstructions=obstructions,
    )


def closed_form_field(H, chart: CoordSystem, kind) -> VectorField:
    """Closed-form Hamiltonian field including the d/dt term.

    vertical: (1/i) dH/dzb_{0i} d/dz_{ki} - (1/i) dH/dz_{0i} d/dzb_{ki}
    complete: (1/i) dH/dzb_{ri} d/dz_{ri} - (1/i) dH/dz_{ri} d/dzb_{ri}
    """
    H = as_expr(H)
    comps = {T: ONE}
    k = chart.k
    for i in range(1, chart.m + 1):
        if as_kind(kind) is Kind.VERTICAL:
            comps[z(k, i)] = INV_I * wirtinger_derivative(H, zb(0, i))
            comps[zb(k, i)] = -INV_I * wirtinger_derivative(H, z(0, i))
        else:
            for r in range(k + 1):
                comps[z(r, i)] = INV_I * wirtinger_derivative(H, zb(r, i))
                comps[zb(r, i)] = -INV_I * wirtinger_derivative(H, z(r, i))
    return VectorField(chart, comps)


@dataclass
class EquationSet:
    chart: CoordSystem
    kind: Kind
    equations: list  # [(Coord, Expr)] in canonical order, t first
    unconstrained: list
    obstructions: list
    annotations: list = field(default_factory=list)

    def as_dict(self):
        return {
            "chart": {"m": self.chart.m, "k": self.chart.k},
            "kind": self.kind.value,
            "equations": [{"coord": str(c), "rhs": str(e)} for c, e in self.equations],
            "unconstrained": [str(c) for c in self.unconstrained],
            "obstructions": [{"coord": str(c), "expr": str(e)} for c, e in self.obstructions],
            "annotations": list(self.annotations),
        }


def emit_equations(sys: HamiltonianSystem) -> EquationSet:
    eqs = [(T, ONE)] + [(c, sys.field_rhs(c)) for c in sys.chart.fiber()]
    notes = []
    if sys.kind.tag is Kind.VERTICAL and sys.chart.k >= 1:
        notes.append(
            "vertical lift: dynamics live at level k; the literal reading that assigns the "
            "level-0 right-hand side to every level r is not used as dynamics")
    if any(c.is_time for c, _ in sys.solvability_obstructions):
        notes.append("dt component of dH has no counterpart in i_Z Phi (frozen-time differential)")
    return EquationSet(
        chart=sys.chart,
        kind=sys.kind.tag,
        equations=eqs,
        unconstrained=list(sys.unconstrained),
        obstructions=list(sys.solvability_obstructions),
        annotations=notes,
    )


def conjugate_swap(e) -> Expr:
    """Formal conjugation: z <-> zb at every level, constants conjugated."""
    out = ZERO
    for mono, coef in as_expr(e).terms:
        term = const(coef.conjugate())
        for atom, p in mono:
            if isinstance(atom, ExpAtom):
                term = term * exp(conjugate_swap(atom.arg))
            elif isinstance(atom, SumAtom):
                term = term * conjugate_swap(atom.base) ** p
            else:
                term = term * var(atom.mirror()) ** p
        out = out + term
    return out


def energy_stationarity(sys: HamiltonianSystem) -> Expr:
    """dH(Z) - dH/dt; zero when the fiber flow preserves H."""
    dH = differential(sys.H, sys.chart)
    return dH(sys.Z) - wirtinger_derivative(sys.H, T)

