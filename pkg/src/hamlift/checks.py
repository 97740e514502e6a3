"""Verification suites behind the ``check`` command.

Each suite returns a :class:`CheckResult`; the report is a plain dict with
no timings or floats, so repeated runs serialize byte-identically.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .corpus import random_field, random_form, random_function, random_hamiltonian, random_tensor
from .hamilton import (
    closed_form_field,
    closed_symplectic_form,
    conjugate_swap,
    energy_stationarity,
    liouville_form,
    solve_hamiltonian_field,
    symplectic_form,
)
from .lifts import (
    Kind,
    build_contact_structure,
    complete_lift_field_once,
    complete_lift_vector_field,
    residual_complete_field,
    residual_complete_form,
    residual_tensor_field,
    residual_tensor_form,
    residual_vertical_field,
    residual_vertical_form,
    verify_contact,
)
from .manifold import (
    CoordSystem,
    OneForm,
    VectorField,
    closedness_defects,
    differential,
    exterior_derivative_1,
    field_text,
    form_text,
    tensor_text,
)
from .symcore import ONE, T, var, z, zb

MAX_COUNTEREXAMPLES = 3

# Identities whose failure is structural rather than a bug; see the README.
KNOWN_INCONSISTENT = {
    "complete_field_identity": "binomial weights are applied twice for k >= 2",
    "complete_form_identity": "dt(d/dt) = 1 survives on the left while the complete lift of 1 is 0",
    "vertical_tensor_form_identity": "vertical forms live at level 0 while vertical tensor images live at level k",
}


@dataclass
class CheckResult:
    name: str
    instances: int = 0
    failures: int = 0
    counterexamples: list = field(default_factory=list)

    def record(self, ok: bool, example=None):
        self.instances += 1
        if not ok:
            self.failures += 1
            if example is not None and len(self.counterexamples) < MAX_COUNTEREXAMPLES:
                self.counterexamples.append(example)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self):
        out = {
            "name": self.name,
            "passed": self.passed,
            "instances": self.instances,
            "failures": self.failures,
            "counterexamples": self.counterexamples,
        }
        if self.name in KNOWN_INCONSISTENT and not self.passed:
            out["note"] = KNOWN_INCONSISTENT[self.name]
        return out


def _text(obj):
    if isinstance(obj, VectorField):
        return field_text(obj)
    if isinstance(obj, OneForm):
        return form_text(obj)
    return str(obj)


def lift_identity_checks(m: int, k: int, instances: int, seed: int) -> list:
    """Defining identities of the function, field, form and tensor lifts."""
    target = CoordSystem(m, k)
    rng = random.Random(seed)
    names = [
        "vertical_field_identity", "complete_field_identity",
        "vertical_form_identity", "complete_form_identity",
        "vertical_tensor_field_identity", "complete_tensor_field_identity",
        "vertical_tensor_form_identity", "complete_tensor_form_identity",
    ]
    results = {n: CheckResult(n) for n in names}
    for _ in range(instances):
        f = random_function(rng, m)
        Z = random_field(rng, m)
        omega = random_form(rng, m)
        phi = random_tensor(rng, m)
        inputs = {"f": str(f), "Z": field_text(Z), "omega": form_text(omega), "phi": tensor_text(phi)}
        residuals = {
            "vertical_field_identity": residual_vertical_field(f, Z, target),
            "complete_field_identity": residual_complete_field(f, Z, target),
            "vertical_form_identity": residual_vertical_form(omega, Z, target),
            "complete_form_identity": residual_complete_form(omega, Z, target),
            "vertical_tensor_field_identity": residual_tensor_field(phi, Z, Kind.VERTICAL, target),
            "complete_tensor_field_identity": residual_tensor_field(phi, Z, Kind.COMPLETE, target),
            "vertical_tensor_form_identity": residual_tensor_form(phi, omega, Kind.VERTICAL, target),
            "complete_tensor_form_identity": residual_tensor_form(phi, omega, Kind.COMPLETE, target),
        }
        for n, res in residuals.items():
            results[n].record(res.is_zero, {**inputs, "residual": _text(res)})
    return [results[n] for n in names]


def binomial_check(m: int, k: int, instances: int, seed: int) -> CheckResult:
    """Closed binomial complete lift against k single-step lifts."""
    target = CoordSystem(m, k)
    rng = random.Random(seed + 1)
    out = CheckResult("binomial_closed_form")
    for _ in range(instances):
        X = random_field(rng, m)
        iterated = X
        for _ in range(k):
            iterated = complete_lift_field_once(iterated)
        closed = complete_lift_vector_field(X, target)
        out.record(iterated == closed, {"Z": field_text(X), "iterated": field_text(iterated),
                                        "closed": field_text(closed)})
    return out


def contact_pairs(m: int):
    """(name, xi, eta) base pairs with eta(xi) = 1."""
    base = CoordSystem(m, 0)
    yield "canonical", VectorField.basis(base, T), OneForm.basis(base, T)
    xi = VectorField(base, {T: ONE, **{z(0, i): var(z(0, i)) for i in range(1, m + 1)}})
    eta = OneForm(base, {T: ONE, **{zb(0, i): var(zb(0, i)) for i in range(1, m + 1)}})
    yield "radial", xi, eta


def contact_checks(m: int, k: int, seed: int) -> list:
    target = CoordSystem(m, k)
    out = []
    for kind in (Kind.VERTICAL, Kind.COMPLETE):
        res = CheckResult(f"contact_{kind.value}")
        for name, xi, eta in contact_pairs(m):
            report = verify_contact(build_contact_structure(xi, eta, kind, target), seed=seed)
            res.record(report.passed, {"pair": name, **report.as_dict()})
        out.append(res)
    return out


def hamiltonian_checks(m: int, k: int, instances: int, seed: int) -> list:
    chart = CoordSystem(m, k)
    rng = random.Random(seed + 2)
    agree = CheckResult("closed_form_agreement")
    degenerate = CheckResult("vertical_degeneracy_count")
    stationary = CheckResult("energy_stationarity")
    conjugate = CheckResult("conjugate_symmetry")
    for _ in range(instances):
        for kind in (Kind.VERTICAL, Kind.COMPLETE):
            levels = [0] if kind is Kind.VERTICAL else None
            H = random_hamiltonian(rng, chart, levels)
            H = H + conjugate_swap(H)
            sys = solve_hamiltonian_field(H, chart, kind)
            closed = closed_form_field(H, chart, kind)
            example = {"kind": kind.value, "H": str(H)}
            agree.record(sys.Z == closed, {**example, "solved": field_text(sys.Z),
                                           "closed": field_text(closed)})
            stationary.record(energy_stationarity(sys).is_zero, example)
            mirrored = all(sys.field_rhs(c.mirror()) == conjugate_swap(sys.field_rhs(c))
                           for c in chart.fiber())
            conjugate.record(mirrored, example)
            if kind is Kind.VERTICAL:
                expected = 2 * m * k
                degenerate.record(len(sys.unconstrained) == expected,
                                  {**example, "expected": expected,
                                   "unconstrained": [str(c) for c in sys.unconstrained]})
    return [agree, degenerate, stationary, conjugate]


def symplectic_checks(m: int, k: int, instances: int, seed: int) -> list:
    chart = CoordSystem(m, k)
    form = CheckResult("symplectic_form")
    for kind in (Kind.VERTICAL, Kind.COMPLETE):
        phi = symplectic_form(chart, kind)
        ok = (phi == closed_symplectic_form(chart, kind)
              and phi == -exterior_derivative_1(liouville_form(chart, kind))
              and all(v.is_constant for _, v in phi.items())
              and not closedness_defects(phi))
        form.record(ok, {"kind": kind.value})
    exact = CheckResult("d_squared_zero")
    rng = random.Random(seed + 3)
    for _ in range(instances):
        f = random_hamiltonian(rng, chart)
        exact.record(exterior_derivative_1(differential(f, chart)).is_zero, {"f": str(f)})
    return [form, exact]


def run_checks(m: int, k: int, instances: int = 10, seed: int = 0) -> dict:
    """Every suite at chart (m, k); the result is JSON-serializable."""
    CoordSystem(m, k)  # validates m, k
    results = []
    results += lift_identity_checks(m, k, instances, seed)
    results.append(binomial_check(m, k, instances, seed))
    results += contact_checks(m, k, seed)
    results += hamiltonian_checks(m, k, instances, seed)
    results += symplectic_checks(m, k, instances, seed)
    return {
        "chart": {"m": m, "k": k},
        "seed": seed,
        "instances": instances,
        "all_passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
