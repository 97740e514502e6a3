"""Vertical and complete lifts from N to its k-th extension ^kN.

Conventions:

* the dotted coordinate of z^{ri} is the next-level coordinate z^{(r+1)i};
* the complete-lift step on functions is
  ``D f = t df/dt + sum_{r,i} z^{(r+1)i} df/dz^{ri} + zb^{(r+1)i} df/dzb^{ri}``
  with the time term multiplied by ``t`` exactly as in the source formula
  (so ``D t = t`` and ``D 1 = 0``);
* a mixed lift with ``b`` complete steps and any number of vertical steps
  is ``D^b`` (vertical steps only reinterpret the chart);
* the time direction is shared by every extension: ``dt`` and ``d/dt``
  coefficients are carried over unchanged by all lifts.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import (
    InvalidBaseExpression,
    InvalidBaseField,
    InvalidBaseForm,
    NotNormalized,
    Underdetermined,
)
from .manifold import (
    CoordSystem,
    OneForm,
    Tensor11,
    VectorField,
    apply_tensor11,
    form_after_tensor,
    pairing,
)
from .symcore import ONE, ZERO, Expr, T, as_expr, var, wirtinger_derivative, z, zb


class Kind(enum.Enum):
    VERTICAL = "vertical"
    COMPLETE = "complete"


@dataclass(frozen=True)
class LiftKind:
    tag: Kind
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("lift order must be non-negative")


def as_kind(kind) -> Kind:
    if isinstance(kind, LiftKind):
        return kind.tag
    if isinstance(kind, Kind):
        return kind
    return Kind(str(kind).lower())


# --------------------------------------------------------------------------
# functions


def _check_base_expr(f: Expr, m=None):
    bad = [c for c in f.coords() if c.is_fiber and (c.level != 0 or (m is not None and c.index > m))]
    if bad:
        raise InvalidBaseExpression(f"{f} uses non-base coordinates {sorted(bad)}")


@functools.lru_cache(maxsize=100_000)
def complete_step(f: Expr) -> Expr:
    """One complete-lift step ^rN -> ^{r+1}N of a function."""
    out = ZERO
    for c in sorted(f.coords()):
        d = wirtinger_derivative(f, c)
        if c.is_time:
            out = out + var(T) * d
        else:
            out = out + var(c.at_level(c.level + 1)) * d
    return out


def iterated_complete(f: Expr, steps: int) -> Expr:
    for _ in range(steps):
        f = complete_step(f)
    return f


def vertical_lift_function(f, target: CoordSystem) -> Expr:
    f = as_expr(f)
    _check_base_expr(f, target.m)
    return f


def complete_lift_function(f, target: CoordSystem) -> Expr:
    f = as_expr(f)
    _check_base_expr(f, target.m)
    return iterated_complete(f, target.k)


def mixed_lift_function(f, complete_steps: int, target: CoordSystem) -> Expr:
    """Lift with ``complete_steps`` complete steps, the rest vertical."""
    f = as_expr(f)
    _check_base_expr(f, target.m)
    if not 0 <= complete_steps <= target.k:
        raise ValueError(f"complete steps {complete_steps} out of range for k={target.k}")
    return iterated_complete(f, complete_steps)


# --------------------------------------------------------------------------
# vector fields and 1-forms


def _base_items(obj, target, error):
    if obj.chart.m != target.m:
        raise error(f"base object has m={obj.chart.m}, target has m={target.m}")
    for c, v in obj.items():
        if c.is_fiber and c.level != 0:
            raise error(f"component on {c} is not a base direction")
        try:
            _check_base_expr(v, target.m)
        except InvalidBaseExpression as exc:
            raise error(str(exc)) from None
    return obj.items()


def vertical_lift_vector_field(Z: VectorField, target: CoordSystem) -> VectorField:
    """Base fiber components move to level k; the d/dt coefficient is carried."""
    out = {}
    for c, v in _base_items(Z, target, InvalidBaseField):
        out[c.at_level(target.k)] = v
    return VectorField(target, out)


def complete_lift_vector_field(Z: VectorField, target: CoordSystem) -> VectorField:
    """Level-r component is C(k, r) times the mixed lift v^{k-r} c^r of the base one."""
    k = target.k
    out = {}
    for c, v in _base_items(Z, target, InvalidBaseField):
        if c.is_time:
            out[c] = v
            continue
        lifted = v
        for r in range(k + 1):
            out[c.at_level(r)] = comb(k, r) * lifted
            lifted = complete_step(lifted)
    return VectorField(target, out)


def complete_lift_field_once(X: VectorField) -> VectorField:
    """Single complete-lift step of a field on ^jN to ^{j+1}N.

    Level-r components are kept and their complete step is added at level
    r+1 (the dotted direction). Iterating this from the base reproduces the
    binomial closed form.
    """
    chart = X.chart.extended(X.chart.k + 1)
    out = dict(X.items())
    for c, v in X.items():
        if c.is_time:
            continue
        up = c.at_level(c.level + 1)
        out[up] = out.get(up, ZERO) + complete_step(v)
    return VectorField(chart, out)


def vertical_lift_one_form(omega: OneForm, target: CoordSystem) -> OneForm:
    out = {c: v for c, v in _base_items(omega, target, InvalidBaseForm)}
    return OneForm(target, out)


def complete_lift_one_form(omega: OneForm, target: CoordSystem) -> OneForm:
    """Component on dz^{ri} is the mixed lift c^{k-r} v^r of the base one."""
    k = target.k
    out = {}
    for c, v in _base_items(omega, target, InvalidBaseForm):
        if c.is_time:
            out[c] = v
            continue
        lifted = v
        for r in range(k, -1, -1):
            out[c.at_level(r)] = lifted
            lifted = complete_step(lifted)
    return OneForm(target, out)


def lift_function(f, kind, target):
    return (vertical_lift_function if as_kind(kind) is Kind.VERTICAL else complete_lift_function)(f, target)


def lift_vector_field(Z, kind, target):
    fn = vertical_lift_vector_field if as_kind(kind) is Kind.VERTICAL else complete_lift_vector_field
    return fn(Z, target)


def lift_one_form(omega, kind, target):
    fn = vertical_lift_one_form if as_kind(kind) is Kind.VERTICAL else complete_lift_one_form
    return fn(omega, target)


# --------------------------------------------------------------------------
# (1,1)-tensors


def lift_tensor11(phi: Tensor11, kind, target: CoordSystem) -> Tensor11:
    """Lift of a (1,1)-tensor, built column by column from its action on lifted fields.

    Vertical: phi^v(X^c) = (phi X)^v. Complete: phi^c(X^c) = (phi X)^c.
    Columns on level-s directions are read off by probing with X = g e_j for
    a generic function g (an auxiliary coordinate absent from phi), whose
    lift carries the independent jets of g at each level.
    """
    tag = as_kind(kind)
    order = kind.order if isinstance(kind, LiftKind) else target.k
    if order > target.k:
        raise ValueError(f"lift order {order} exceeds chart order {target.k}")
    m = target.m
    for (o, i), v in phi.items():
        for c in (o, i):
            if c.is_fiber and c.level != 0:
                raise InvalidBaseField(f"tensor entry on {c} is not a base direction")
        _check_base_expr(v, m)

    # chart with one extra index that hosts the generic probe function
    work = CoordSystem(m + 1, order)
    base_work = CoordSystem(m + 1, 0)
    phi_w = Tensor11(base_work, phi.entries)
    lift_field = vertical_lift_vector_field if tag is Kind.VERTICAL else complete_lift_vector_field
    probe = z(0, m + 1)

    def image(X):
        return lift_field(apply_tensor11(phi_w, X), work)

    entries = {}
    t_col = image(VectorField(base_work, {T: ONE}))
    for o, v in t_col.items():
        entries[(o, T)] = v

    for j in range(1, m + 1):
        for e_j in (z(0, j), zb(0, j)):
            const_img = image(VectorField(base_work, {e_j: ONE}))
            probe_img = image(VectorField(base_work, {e_j: var(probe)}))
            for s in range(order + 1):
                jet = probe.at_level(s)
                weight = comb(order, s)
                col = probe_img.map(lambda v: wirtinger_derivative(v, jet) / weight)
                for o, v in col.items():
                    entries[(o, e_j.at_level(s))] = v
            # the probe image must be linear in the probe jets, with the
            # level-0 slope equal to the constant-probe image
            residual = probe_img
            for s in range(order + 1):
                jet = probe.at_level(s)
                residual = residual - probe_img.map(lambda v: var(jet) * wirtinger_derivative(v, jet))
            if not residual.is_zero or probe_img.map(
                    lambda v: wirtinger_derivative(v, probe)) != const_img:
                raise Underdetermined(f"column for {e_j} is not fixed by the lifted fields")

    P = Tensor11(work, entries)
    stray = [key for key, v in P.items() if any(c.index == m + 1 for c in v.coords())]
    if stray:
        raise Underdetermined(f"entries {stray} depend on the probe")
    return Tensor11(target, dict(P.items()))


# --------------------------------------------------------------------------
# contact structures


@dataclass(frozen=True)
class ContactStructure:
    chart: CoordSystem
    phi: Tensor11
    xi: VectorField
    eta: OneForm


def build_contact_structure(xi: VectorField, eta: OneForm, kind, target: CoordSystem) -> ContactStructure:
    """(phi, xi^c, eta^L) with phi = -I + xi^c (x) eta^L, L the requested lift."""
    xi_l = complete_lift_vector_field(xi, target)
    eta_l = lift_one_form(eta, kind, target)
    norm = pairing(eta_l, xi_l)
    if norm != ONE:
        raise NotNormalized(f"eta(xi) = {norm}, expected 1")
    phi = Tensor11.outer(xi_l, eta_l) - Tensor11.identity(target)
    return ContactStructure(target, phi, xi_l, eta_l)


@dataclass
class ContactReport:
    chart: CoordSystem
    phi_xi: VectorField
    eta_phi: OneForm
    eta_xi: Expr
    kernel_dims: list
    kernel_parallel: list
    numeric_rank: int
    real_rank: int
    paper_rank: int

    @property
    def phi_xi_zero(self):
        return self.phi_xi.is_zero

    @property
    def eta_phi_zero(self):
        return self.eta_phi.is_zero

    @property
    def eta_xi_one(self):
        return self.eta_xi == ONE

    @property
    def kernel_ok(self):
        return all(d == 1 for d in self.kernel_dims) and all(self.kernel_parallel)

    @property
    def passed(self):
        return self.phi_xi_zero and self.eta_phi_zero and self.eta_xi_one and self.kernel_ok

    def as_dict(self):
        return {
            "chart": {"m": self.chart.m, "k": self.chart.k},
            "phi_xi_zero": self.phi_xi_zero,
            "phi_xi_residual": {str(c): str(v) for c, v in self.phi_xi.items()},
            "eta_phi_zero": self.eta_phi_zero,
            "eta_phi_residual": {str(c): str(v) for c, v in self.eta_phi.items()},
            "eta_xi_one": self.eta_xi_one,
            "eta_xi": str(self.eta_xi),
            "kernel_dims": list(self.kernel_dims),
            "kernel_parallel_to_xi": list(self.kernel_parallel),
            "numeric_rank": self.numeric_rank,
            "real_rank": self.real_rank,
            "paper_rank": self.paper_rank,
            "passed": self.passed,
        }


def random_points(chart: CoordSystem, count: int, seed: int = 0):
    """Generic complex points for every chart coordinate (t real)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        point = {}
        for c in chart.enumerate():
            if c.is_time:
                point[c] = complex(rng.normal())
            else:
                point[c] = complex(rng.normal(), rng.normal())
        out.append(point)
    return out


def numeric_kernel(matrix: np.ndarray, rtol: float = 1e-9):
    _, s, vh = np.linalg.svd(matrix)
    cutoff = rtol * max(s[0], 1.0)
    rank = int(np.sum(s > cutoff))
    return rank, vh[rank:].conj()


def verify_contact(cs: ContactStructure, points: int = 10, seed: int = 0) -> ContactReport:
    phi_xi = apply_tensor11(cs.phi, cs.xi)
    eta_phi = form_after_tensor(cs.eta, cs.phi)
    eta_xi = pairing(cs.eta, cs.xi)
    dims, parallel, ranks = [], [], []
    for point in random_points(cs.chart, points, seed):
        rank, kernel = numeric_kernel(cs.phi.matrix_at(point))
        ranks.append(rank)
        dims.append(len(kernel))
        xi_vec = cs.xi.vector_at(point)
        if len(kernel) == 1 and np.linalg.norm(xi_vec) > 0:
            v = kernel[0]
            cos = abs(np.vdot(v, xi_vec)) / (np.linalg.norm(v) * np.linalg.norm(xi_vec))
            parallel.append(bool(abs(cos - 1.0) < 1e-8))
        else:
            parallel.append(False)
    m, k = cs.chart.m, cs.chart.k
    return ContactReport(
        chart=cs.chart,
        phi_xi=phi_xi,
        eta_phi=eta_phi,
        eta_xi=eta_xi,
        kernel_dims=dims,
        kernel_parallel=parallel,
        numeric_rank=min(ranks) if ranks else 0,
        real_rank=2 * m * (k + 1),
        paper_rank=m * (k + 1),
    )


# --------------------------------------------------------------------------
# defining identities (residuals; zero means the identity holds)


def residual_vertical_field(f, Z: VectorField, target) -> Expr:
    """Z^v(f^c) - (Z f)^v."""
    lhs = vertical_lift_vector_field(Z, target)(complete_lift_function(f, target))
    return lhs - vertical_lift_function(Z(as_expr(f)), target)


def residual_complete_field(f, Z: VectorField, target) -> Expr:
    """Z^c(f^c) - (Z f)^c."""
    lhs = complete_lift_vector_field(Z, target)(complete_lift_function(f, target))
    return lhs - complete_lift_function(Z(as_expr(f)), target)


def residual_vertical_form(omega: OneForm, Z: VectorField, target) -> Expr:
    """omega^v(Z^c) - (omega Z)^v."""
    lhs = pairing(vertical_lift_one_form(omega, target), complete_lift_vector_field(Z, target))
    return lhs - vertical_lift_function(pairing(omega, Z), target)


def residual_complete_form(omega: OneForm, Z: VectorField, target) -> Expr:
    """omega^c(Z^c) - (omega Z)^c."""
    lhs = pairing(complete_lift_one_form(omega, target), complete_lift_vector_field(Z, target))
    return lhs - complete_lift_function(pairing(omega, Z), target)


def residual_tensor_field(phi: Tensor11, xi: VectorField, kind, target) -> VectorField:
    """phi^L(xi^c) - (phi xi)^L for L the given kind."""
    lifted = lift_tensor11(phi, LiftKind(as_kind(kind), target.k), target)
    lhs = apply_tensor11(lifted, complete_lift_vector_field(xi, target))
    return lhs - lift_vector_field(apply_tensor11(phi, xi), kind, target)


def residual_tensor_form(phi: Tensor11, eta: OneForm, kind, target) -> OneForm:
    """eta^L(phi^L) - (eta phi)^L for L the given kind."""
    lifted = lift_tensor11(phi, LiftKind(as_kind(kind), target.k), target)
    lhs = form_after_tensor(lift_one_form(eta, kind, target), lifted)
    return lhs - lift_one_form(form_after_tensor(eta, phi), kind, target)
