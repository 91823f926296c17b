"""Built-in example systems and seeded random polynomial test fields.

Every built-in field ships an analytic gradient; finite differences are
for verification only.  All constructors are pure and the returned systems
are immutable.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .brackets import NambuSystem, ScalarField

__all__ = [
    "DEFAULT_NAHM_PARAMETERS",
    "SYSTEM_NAMES",
    "build_system",
    "euler_top",
    "harmonic_oscillator_4",
    "nahm",
    "random_polynomial_field",
]

SYSTEM_NAMES = ("euler-top", "nahm", "oscillator4")

# Quadratic coefficients of the Nahm equations used by the trajectory
# figures; overridable per run.
DEFAULT_NAHM_PARAMETERS = {"a1": 0.40452, "a2": -0.222486, "a3": 0.494413}


def euler_top(i1: float = 1.0, i2: float = 2.0, i3: float = 3.0) -> NambuSystem:
    """Free asymmetric top on the angular momentum vector L.

    H1 = sum L_k^2 / (2 I_k) is the kinetic energy, H2 = (1/2) sum L_k^2
    half the squared momentum.  The flow dL/ds = grad H1 x grad H2 has the
    components (I3 - I2)/(I2 I3) L2 L3 and cyclic.
    """
    for v in (i1, i2, i3):
        if not (math.isfinite(v) and v > 0.0):
            raise ValueError("moments of inertia must be positive")

    def h1(L):
        return L[..., 0] ** 2 / (2.0 * i1) + L[..., 1] ** 2 / (2.0 * i2) + L[..., 2] ** 2 / (2.0 * i3)

    def h1_grad(L):
        return np.stack([L[..., 0] / i1, L[..., 1] / i2, L[..., 2] / i3], axis=-1)

    def h2(L):
        return 0.5 * (L[..., 0] ** 2 + L[..., 1] ** 2 + L[..., 2] ** 2)

    def h2_grad(L):
        return np.asarray(L, dtype=float).copy()

    return NambuSystem(
        hamiltonians=(
            ScalarField(3, h1, h1_grad, label="H1"),
            ScalarField(3, h2, h2_grad, label="H2"),
        ),
        name="euler-top",
    )


def nahm(
    a1: float | None = None,
    a2: float | None = None,
    a3: float | None = None,
    paper_faithful: bool = False,
) -> NambuSystem:
    """Nahm system with H1 = a1 x1^2 - a2 x2^2 and H2 = a1 x1^2 - a3 x3^2.

    The determinant flow is dx1/ds = 4 a2 a3 x2 x3 and cyclic; each square
    in the Hamiltonians contributes a factor 2.  With ``paper_faithful``
    the field is divided by 4 so the components read dx1/ds = a2 x2 x3,
    the bare product convention.
    """
    a1 = DEFAULT_NAHM_PARAMETERS["a1"] if a1 is None else float(a1)
    a2 = DEFAULT_NAHM_PARAMETERS["a2"] if a2 is None else float(a2)
    a3 = DEFAULT_NAHM_PARAMETERS["a3"] if a3 is None else float(a3)
    for v in (a1, a2, a3):
        if not (math.isfinite(v) and v != 0.0):
            raise ValueError("coefficients a1, a2, a3 must be finite and nonzero")

    def h1(x):
        return a1 * x[..., 0] ** 2 - a2 * x[..., 1] ** 2

    def h1_grad(x):
        return np.stack(
            [2.0 * a1 * x[..., 0], -2.0 * a2 * x[..., 1], np.zeros_like(x[..., 2])], axis=-1
        )

    def h2(x):
        return a1 * x[..., 0] ** 2 - a3 * x[..., 2] ** 2

    def h2_grad(x):
        return np.stack(
            [2.0 * a1 * x[..., 0], np.zeros_like(x[..., 1]), -2.0 * a3 * x[..., 2]], axis=-1
        )

    return NambuSystem(
        hamiltonians=(
            ScalarField(3, h1, h1_grad, label="H1"),
            ScalarField(3, h2, h2_grad, label="H2"),
        ),
        scale=0.25 if paper_faithful else 1.0,
        name="nahm",
    )


def harmonic_oscillator_4() -> tuple[ScalarField, ScalarField, ScalarField, ScalarField]:
    """Four invariants of the planar harmonic oscillator on (p1, p2, x1, x2).

    H1 = p1^2 + x1^2, H2 = p2^2 + x2^2, H3 = x1 p2 - x2 p1,
    H4 = p1 p2 + x1 x2.  They satisfy the Lagrange identity
    H1 H2 = H3^2 + H4^2, so any order-4 bracket of the four is singular.
    The coordinate order (p1, p2, x1, x2) fixes the determinant signs.
    """

    def h1(q):
        return q[..., 0] ** 2 + q[..., 2] ** 2

    def h1_grad(q):
        z = np.zeros_like(q[..., 0])
        return np.stack([2.0 * q[..., 0], z, 2.0 * q[..., 2], z], axis=-1)

    def h2(q):
        return q[..., 1] ** 2 + q[..., 3] ** 2

    def h2_grad(q):
        z = np.zeros_like(q[..., 0])
        return np.stack([z, 2.0 * q[..., 1], z, 2.0 * q[..., 3]], axis=-1)

    def h3(q):
        return q[..., 2] * q[..., 1] - q[..., 3] * q[..., 0]

    def h3_grad(q):
        return np.stack([-q[..., 3], q[..., 2], q[..., 1], -q[..., 0]], axis=-1)

    def h4(q):
        return q[..., 0] * q[..., 1] + q[..., 2] * q[..., 3]

    def h4_grad(q):
        return np.stack([q[..., 1], q[..., 0], q[..., 3], q[..., 2]], axis=-1)

    return (
        ScalarField(4, h1, h1_grad, label="H1"),
        ScalarField(4, h2, h2_grad, label="H2"),
        ScalarField(4, h3, h3_grad, label="H3"),
        ScalarField(4, h4, h4_grad, label="H4"),
    )


def random_polynomial_field(seed: int, n: int, degree: int = 3) -> ScalarField:
    """Deterministic polynomial of total degree <= ``degree`` on n variables.

    Coefficients are drawn uniformly from [-1, 1] by a generator seeded
    with ``seed``; the monomial order is fixed, so equal seeds give equal
    fields.  The analytic gradient is exact.
    """
    n = int(n)
    degree = int(degree)
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 <= degree <= 3:
        raise ValueError("degree must lie in [0, 3]")
    exponents = np.array(
        [e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) <= degree],
        dtype=float,
    )
    coeffs = np.random.default_rng(int(seed)).uniform(-1.0, 1.0, size=len(exponents))

    def fn(p):
        terms = np.prod(np.power(p[..., None, :], exponents), axis=-1)
        return terms @ coeffs

    # Per-coordinate reduced exponents and factors, precomputed once.
    parts = []
    for j in range(n):
        mask = exponents[:, j] > 0
        reduced = exponents[mask].copy()
        reduced[:, j] -= 1.0
        parts.append((reduced, coeffs[mask] * exponents[mask, j]))

    def grad(p):
        cols = []
        zeros = np.zeros_like(np.asarray(p, dtype=float)[..., 0])
        for reduced, weights in parts:
            if weights.size == 0:
                cols.append(zeros)
                continue
            terms = np.prod(np.power(p[..., None, :], reduced), axis=-1)
            cols.append(terms @ weights)
        return np.stack(cols, axis=-1)

    return ScalarField(n=n, fn=fn, grad=grad, label=f"poly[seed={seed}]")


def build_system(name: str, parameters=None, paper_faithful: bool = False) -> NambuSystem:
    """Construct a named system with a parameter map.

    ``oscillator4`` is rejected here: its four invariants are functionally
    dependent and leave no independent Hamiltonian tuple to integrate; it
    participates only in the check suites.
    """
    params = dict(parameters or {})
    if name == "euler-top":
        known = {"i1": 1.0, "i2": 2.0, "i3": 3.0}
    elif name == "nahm":
        known = dict(DEFAULT_NAHM_PARAMETERS)
    elif name == "oscillator4":
        raise ValueError(
            "oscillator4 has no flow to integrate (its invariants are dependent); "
            "use the check command"
        )
    else:
        raise ValueError(f"unknown system {name!r}; known systems: {', '.join(SYSTEM_NAMES)}")
    for key, value in params.items():
        if key not in known:
            raise ValueError(f"unknown parameter {key!r} for {name}")
        known[key] = float(value)
    if name == "euler-top":
        return euler_top(known["i1"], known["i2"], known["i3"])
    return nahm(known["a1"], known["a2"], known["a3"], paper_faithful=paper_faithful)
