"""Named check suites with serializable results.

Each suite draws seeded points (and, where applicable, seeded random
polynomial fields), evaluates a residual that the bracket calculus must
keep small, and records the worst case against a fixed tolerance.  Suites
are deterministic for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .brackets import (
    NambuSystem,
    check_bivector_identity,
    coordinate_field,
    gradient,
    induced_bivector,
    liouville_divergence,
    nambu_bracket,
    nambu_vector_field,
    verify_bracket_axiom,
)
from .systems import euler_top, harmonic_oscillator_4, nahm, random_polynomial_field

__all__ = ["CheckResult", "run_check_suites"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    seed: int
    points: int
    max_residual: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "points": self.points,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _result(suite: str, seed: int, points: int, residual: float, tol: float) -> CheckResult:
    return CheckResult(
        suite=suite,
        seed=int(seed),
        points=int(points),
        max_residual=float(residual),
        tolerance=float(tol),
        passed=bool(residual < tol),
    )


def _field_tuple(rng: np.random.Generator, count: int, n: int) -> list:
    return [random_polynomial_field(int(rng.integers(2**31)), n) for _ in range(count)]


def check_skew(seed: int, tuples: int = 100, points_per: int = 10) -> CheckResult:
    """Permuted brackets must equal the sign-flipped original exactly."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(tuples):
        fields = _field_tuple(rng, 3, 3)
        perm = tuple(int(i) for i in rng.permutation(3))
        for p in rng.uniform(-1.0, 1.0, size=(points_per, 3)):
            worst = max(worst, verify_bracket_axiom("skew", fields, p, perm=perm))
    return _result("skew", seed, tuples * points_per, worst, 1e-12)


def check_leibniz(seed: int, tuples: int = 100, points_per: int = 10) -> CheckResult:
    """{f1 f2, g, h} = f1 {f2, g, h} + f2 {f1, g, h} with analytic gradients."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(tuples):
        fields = _field_tuple(rng, 4, 3)
        for p in rng.uniform(-1.0, 1.0, size=(points_per, 3)):
            worst = max(worst, verify_bracket_axiom("leibniz", fields, p))
    return _result("leibniz", seed, tuples * points_per, worst, 1e-6)


def check_fundamental_n2(seed: int, tuples: int = 100, points_per: int = 10) -> CheckResult:
    """Jacobi identity of the order-2 bracket on (q, p), nested brackets by
    central differences."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(tuples):
        fields = _field_tuple(rng, 3, 2)
        for p in rng.uniform(-1.0, 1.0, size=(points_per, 2)):
            worst = max(worst, verify_bracket_axiom("fundamental", fields, p))
    return _result("fundamental-n2", seed, tuples * points_per, worst, 1e-4)


def check_fundamental_n3_coordinates(
    seed: int, tuples: int = 100, points_per: int = 10
) -> CheckResult:
    """Nested-bracket identity for order-3 coordinate tuples (all inner
    brackets constant, so every term must vanish)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    coords = [coordinate_field(3, i) for i in range(3)]
    for _ in range(tuples):
        fields = [coords[int(i)] for i in rng.integers(0, 3, size=5)]
        for p in rng.uniform(-1.0, 1.0, size=(points_per, 3)):
            worst = max(worst, verify_bracket_axiom("fundamental", fields, p))
    return _result("fundamental-n3-coordinates", seed, tuples * points_per, worst, 1e-4)


def _liouville(system: NambuSystem, seed: int, points: int = 1000) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in rng.uniform(-1.0, 1.0, size=(points, system.n)):
        worst = max(worst, abs(liouville_divergence(system, p)))
    return worst


def check_liouville(system: NambuSystem, seed: int, points: int = 1000) -> CheckResult:
    return _result(
        f"liouville-{system.name}", seed, points, _liouville(system, seed, points), 1e-6
    )


def check_bivector_reconstruction(system: NambuSystem, seed: int, points: int = 100) -> CheckResult:
    """J grad H_r must reproduce the flow field for every r."""
    rng = np.random.default_rng(seed)
    field = nambu_vector_field(system)
    worst = 0.0
    for p in rng.uniform(-1.0, 1.0, size=(points, system.n)):
        v = field(p)
        for r in range(1, system.n):
            J = induced_bivector(system, r, p)
            g = gradient(system.hamiltonians[r - 1], p)
            worst = max(worst, float(np.max(np.abs(J @ g - v))))
    return _result(f"bivector-reconstruction-{system.name}", seed, points, worst, 1e-10)


def check_bivector_cyclic(system: NambuSystem, seed: int, points: int = 100) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in rng.uniform(-1.0, 1.0, size=(points, system.n)):
        worst = max(worst, check_bivector_identity(system, 1, p))
    return _result(f"bivector-cyclic-{system.name}", seed, points, worst, 1e-5)


def check_oscillator_lagrange(seed: int, points: int = 100) -> CheckResult:
    """H1 H2 - H3^2 - H4^2 must vanish identically."""
    h1, h2, h3, h4 = harmonic_oscillator_4()
    rng = np.random.default_rng(seed)
    q = rng.uniform(-1.0, 1.0, size=(points, 4))
    residual = np.abs(h1.fn(q) * h2.fn(q) - h3.fn(q) ** 2 - h4.fn(q) ** 2)
    return _result("oscillator4-lagrange", seed, points, float(residual.max()), 1e-12)


def check_oscillator_dependency(seed: int, points: int = 100) -> CheckResult:
    """{H1, H2, H3, H4} must vanish (the Lagrange identity makes the
    Jacobian singular)."""
    fields = harmonic_oscillator_4()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in rng.uniform(-1.0, 1.0, size=(points, 4)):
        worst = max(worst, abs(nambu_bracket(list(fields), p)))
    return _result("oscillator4-dependency", seed, points, worst, 1e-10)


def check_oscillator_degenerate(seed: int, points: int = 100) -> CheckResult:
    """Order-4 brackets with any repeated invariant must vanish exactly."""
    h = harmonic_oscillator_4()
    rng = np.random.default_rng(seed)
    tuples = []
    for dup in range(4):
        others = [h[i] for i in range(4) if i != dup]
        for drop in range(3):
            kept = [others[i] for i in range(3) if i != drop]
            tuples.append([h[dup], h[dup], *kept])
    worst = 0.0
    for p in rng.uniform(-1.0, 1.0, size=(points, 4)):
        for fields in tuples:
            worst = max(worst, abs(nambu_bracket(fields, p)))
    return _result("oscillator4-degenerate", seed, points, worst, 1e-12)


def run_check_suites(seed: int = 1234) -> list[CheckResult]:
    """Run every suite with sub-seeds derived from ``seed``; fixed order."""
    top = euler_top()
    nahm_system = nahm()
    return [
        check_skew(seed),
        check_leibniz(seed + 1),
        check_fundamental_n2(seed + 2),
        check_fundamental_n3_coordinates(seed + 3),
        check_liouville(top, seed + 4),
        check_liouville(nahm_system, seed + 5),
        check_bivector_reconstruction(top, seed + 6),
        check_bivector_reconstruction(nahm_system, seed + 7),
        check_bivector_cyclic(top, seed + 8),
        check_bivector_cyclic(nahm_system, seed + 9),
        check_oscillator_lagrange(seed + 10),
        check_oscillator_dependency(seed + 11),
        check_oscillator_degenerate(seed + 12),
    ]
