"""Order-n Nambu brackets as Jacobian determinants, with axiom checks.

The bracket {f_1, ..., f_n} at a point p is the determinant of the matrix
whose i-th row is the gradient of f_i.  Phase-space coordinates are smooth
here, so gradients are ordinary partials; all fractality of the dynamics is
carried by the time change in :mod:`fracnambu.dynamics`.

Determinants of order <= 4 are expanded over permutations after a
sign-tracked row sort.  The sort makes the expansion independent of the
order the fields were passed in, so permuting bracket arguments flips the
sign bitwise instead of merely to rounding.  Larger orders fall back to
pivoted elimination (numpy).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "NambuSystem",
    "ScalarField",
    "canonical_jacobian",
    "check_bivector_identity",
    "check_gradient",
    "coordinate_field",
    "gradient",
    "induced_bivector",
    "linear_combination",
    "liouville_divergence",
    "nambu_bracket",
    "nambu_vector_field",
    "product_field",
    "verify_bracket_axiom",
]

_SCHEMES = ("auto", "analytic", "central-diff")
_NESTED_STEP = 1e-4


@dataclass(frozen=True)
class ScalarField:
    """Smooth function on n-dimensional phase space.

    ``fn`` maps an array whose last axis has length n to values; built-in
    fields index coordinates as ``p[..., i]`` so batched evaluation works.
    ``grad``, when present, is the analytic gradient with the same batching
    convention.
    """

    n: int
    fn: Callable
    grad: Callable | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("field arity must be at least 1")

    def __call__(self, p):
        return self.fn(np.asarray(p, dtype=float))


def _as_point(p, n: int | None = None) -> np.ndarray:
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.ndim != 1:
        raise ValueError("expected a single point (1-D coordinate array)")
    if n is not None and p.size != n:
        raise ValueError(f"point has {p.size} coordinates, expected {n}")
    return p


def _fd_steps(p: np.ndarray, step: float | None) -> np.ndarray:
    if step is not None:
        return np.full(p.size, float(step))
    return np.maximum(1e-6, 1e-6 * np.abs(p))


def gradient(field: ScalarField, p, scheme: str = "auto", step: float | None = None) -> np.ndarray:
    """Gradient of a field at a point.

    ``scheme``: "analytic" requires ``field.grad``; "central-diff" uses
    central differences with per-coordinate step max(1e-6, 1e-6 |x_i|)
    unless ``step`` overrides it uniformly; "auto" prefers analytic.
    """
    if scheme not in _SCHEMES:
        raise ValueError(f"unknown gradient scheme {scheme!r}")
    p = _as_point(p, field.n)
    use_analytic = field.grad is not None if scheme == "auto" else scheme == "analytic"
    if use_analytic:
        if field.grad is None:
            raise ValueError(f"field {field.label or '<unnamed>'} has no analytic gradient")
        g = np.asarray(field.grad(p), dtype=float)
        if g.shape != (p.size,):
            raise ValueError("analytic gradient returned wrong shape")
        return g
    h = _fd_steps(p, step)
    g = np.empty(p.size)
    for i in range(p.size):
        e = np.zeros(p.size)
        e[i] = h[i]
        g[i] = (float(field.fn(p + e)) - float(field.fn(p - e))) / (2.0 * h[i])
    return g


def coordinate_field(n: int, index: int) -> ScalarField:
    """The coordinate function x -> x[index] (0-based) on n dimensions."""
    if not 0 <= index < n:
        raise ValueError("coordinate index out of range")

    def fn(p):
        return p[..., index]

    def grad(p):
        g = np.zeros_like(np.asarray(p, dtype=float))
        g[..., index] = 1.0
        return g

    return ScalarField(n=n, fn=fn, grad=grad, label=f"x{index + 1}")


def product_field(a: ScalarField, b: ScalarField) -> ScalarField:
    """Pointwise product a*b, with the product-rule gradient when both
    factors carry analytic gradients."""
    if a.n != b.n:
        raise ValueError("cannot multiply fields of different arity")

    def fn(p):
        return np.asarray(a.fn(p), dtype=float) * np.asarray(b.fn(p), dtype=float)

    grad = None
    if a.grad is not None and b.grad is not None:

        def grad(p):
            av = np.asarray(a.fn(p), dtype=float)
            bv = np.asarray(b.fn(p), dtype=float)
            return av[..., None] * np.asarray(b.grad(p), dtype=float) + bv[..., None] * np.asarray(
                a.grad(p), dtype=float
            )

    return ScalarField(n=a.n, fn=fn, grad=grad, label=f"({a.label})*({b.label})")


def linear_combination(coeffs, fields) -> ScalarField:
    """Weighted sum of fields of equal arity; gradients combine when all
    summands carry them."""
    coeffs = [float(c) for c in coeffs]
    fields = list(fields)
    if len(coeffs) != len(fields) or not fields:
        raise ValueError("need one coefficient per field")
    n = fields[0].n
    if any(f.n != n for f in fields):
        raise ValueError("fields must share arity")

    def fn(p):
        return sum(c * np.asarray(f.fn(p), dtype=float) for c, f in zip(coeffs, fields))

    grad = None
    if all(f.grad is not None for f in fields):

        def grad(p):
            return sum(c * np.asarray(f.grad(p), dtype=float) for c, f in zip(coeffs, fields))

    return ScalarField(n=n, fn=fn, grad=grad, label="+".join(f.label for f in fields))


def _perm_sign(perm) -> int:
    sign = 1
    perm = tuple(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _perm_terms(n: int) -> tuple:
    return tuple((_perm_sign(p), p) for p in itertools.permutations(range(n)))


def _det(m: np.ndarray) -> float:
    n = m.shape[0]
    if n > 4:
        return float(np.linalg.det(m))
    order = sorted(range(n), key=lambda i: tuple(m[i]))
    rows = m[order]
    acc = 0.0
    for sign, perm in _perm_terms(n):
        term = 1.0
        for i in range(n):
            term = term * rows[i, perm[i]]
        acc += sign * term
    return _perm_sign(order) * float(acc)


def nambu_bracket(fields, p, scheme: str = "auto", step: float | None = None) -> float:
    """{f_1, ..., f_n} at p: the determinant of the gradient rows."""
    p = _as_point(p)
    n = p.size
    if len(fields) != n:
        raise ValueError(f"bracket of order {n} needs exactly {n} fields, got {len(fields)}")
    for f in fields:
        if f.n != n:
            raise ValueError(f"field {f.label or '<unnamed>'} has arity {f.n}, expected {n}")
    m = np.stack([gradient(f, p, scheme=scheme, step=step) for f in fields])
    return _det(m)


@dataclass(frozen=True)
class NambuSystem:
    """Phase-space dimension n with n-1 Hamiltonians defining a flow.

    ``scale`` multiplies the flow field (and the induced bivector); 1.0 is
    the plain determinant convention.
    """

    hamiltonians: tuple
    scale: float = 1.0
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "hamiltonians", tuple(self.hamiltonians))
        if not self.hamiltonians:
            raise ValueError("need at least one Hamiltonian")
        n = self.hamiltonians[0].n
        if n < 2:
            raise ValueError("phase-space dimension must be at least 2")
        if any(h.n != n for h in self.hamiltonians):
            raise ValueError("all Hamiltonians must share arity")
        if len(self.hamiltonians) != n - 1:
            raise ValueError(f"dimension {n} needs exactly {n - 1} Hamiltonians")
        if not math.isfinite(self.scale):
            raise ValueError("scale must be finite")

    @property
    def n(self) -> int:
        return self.hamiltonians[0].n


def nambu_vector_field(system: NambuSystem, scheme: str = "auto", step: float | None = None):
    """The flow field V with V_i = {x_i, H_1, ..., H_{n-1}}.

    Expanding the determinant along the coordinate row gives
    V_i = (-1)^i det(G without column i) for the (n-1) x n gradient matrix
    G; for n = 3 that is the cross product of the two gradients.
    """
    hams = system.hamiltonians
    n = system.n
    scale = system.scale

    def field(p: np.ndarray) -> np.ndarray:
        p = _as_point(p, n)
        rows = np.stack([gradient(h, p, scheme=scheme, step=step) for h in hams])
        if n == 3:
            g1, g2 = rows
            v = np.array(
                [
                    g1[1] * g2[2] - g1[2] * g2[1],
                    g1[2] * g2[0] - g1[0] * g2[2],
                    g1[0] * g2[1] - g1[1] * g2[0],
                ]
            )
        else:
            v = np.empty(n)
            parity = 1.0
            for i in range(n):
                v[i] = parity * _det(np.delete(rows, i, axis=1))
                parity = -parity
        return v * scale

    return field


def _bracket_field(fields, step: float | None) -> ScalarField:
    arity = fields[0].n

    def fn(q):
        return nambu_bracket(fields, q, step=step)

    return ScalarField(
        n=arity, fn=fn, grad=None, label="{" + ",".join(f.label for f in fields) + "}"
    )


def verify_bracket_axiom(
    axiom: str, fields, p, perm=None, step: float = _NESTED_STEP
) -> float:
    """Residual |LHS - RHS| of a bracket axiom at a point.

    skew:        n fields plus a permutation; compares the permuted bracket
                 against the sign-flipped original.  Defaults to reversal.
    leibniz:     n+1 fields; the first two are multiplied:
                 {f1 f2, rest} vs f1 {f2, rest} + f2 {f1, rest}.
    fundamental: 2n-1 fields f_1..f_{n-1}, g_1..g_n; evaluates
                 {{f, g1}, g2..} + {g1, {f, g2}, g3..} - {f, {g1..gn}}
                 with nested brackets differentiated by central differences
                 of the given step.  This three-term form is the classical
                 Jacobi identity at n = 2; for n >= 3 it is exposed as an
                 experimental diagnostic (it holds when the inner brackets
                 are constant, e.g. for coordinate fields).
    """
    p = _as_point(p)
    n = p.size
    if axiom == "skew":
        if len(fields) != n:
            raise ValueError(f"skew needs {n} fields, got {len(fields)}")
        if perm is None:
            perm = tuple(reversed(range(n)))
        perm = tuple(int(i) for i in perm)
        if sorted(perm) != list(range(n)):
            raise ValueError("perm must be a permutation of the field indices")
        base = nambu_bracket(fields, p, step=step)
        permuted = nambu_bracket([fields[i] for i in perm], p, step=step)
        return abs(permuted - _perm_sign(perm) * base)
    if axiom == "leibniz":
        if len(fields) != n + 1:
            raise ValueError(f"leibniz needs {n + 1} fields, got {len(fields)}")
        f1, f2, *rest = fields
        lhs = nambu_bracket([product_field(f1, f2), *rest], p, step=step)
        rhs = float(f1(p)) * nambu_bracket([f2, *rest], p, step=step) + float(
            f2(p)
        ) * nambu_bracket([f1, *rest], p, step=step)
        return abs(lhs - rhs)
    if axiom == "fundamental":
        if len(fields) != 2 * n - 1:
            raise ValueError(f"fundamental needs {2 * n - 1} fields, got {len(fields)}")
        outer = list(fields[: n - 1])
        inner = list(fields[n - 1 :])
        lhs = nambu_bracket([*outer, _bracket_field(inner, step)], p, step=step)
        t1 = nambu_bracket([_bracket_field([*outer, inner[0]], step), *inner[1:]], p, step=step)
        t2 = nambu_bracket(
            [inner[0], _bracket_field([*outer, inner[1]], step), *inner[2:]], p, step=step
        )
        return abs(t1 + t2 - lhs)
    raise ValueError(f"unknown axiom {axiom!r}")


def liouville_divergence(system: NambuSystem, p, step: float | None = None) -> float:
    """Divergence of the flow field at p, by central differences.

    Vanishes identically for determinant brackets (each V_i omits the
    derivative in its own direction), so the returned value measures
    numerical noise.
    """
    field = nambu_vector_field(system)
    p = _as_point(p, system.n)
    h = _fd_steps(p, step)
    div = 0.0
    for i in range(p.size):
        e = np.zeros(p.size)
        e[i] = h[i]
        div += (field(p + e)[i] - field(p - e)[i]) / (2.0 * h[i])
    return float(div)


def induced_bivector(system: NambuSystem, r: int, p) -> np.ndarray:
    """Antisymmetric J with sum_j J[i, j] d_j H_r equal to the flow field.

    J[i, j] is the bracket determinant with the coordinate row e_i in the
    first slot and e_j in H_r's slot (r is 1-based).  Keeping e_j in the
    replaced Hamiltonian's own row makes the reconstruction identity exact
    for every r by row linearity of the determinant.  Only the upper
    triangle is computed; the lower is its negation, so J + J^T is zero
    bitwise.
    """
    n = system.n
    r = int(r)
    if not 1 <= r <= n - 1:
        raise ValueError(f"r must lie in [1, {n - 1}]")
    p = _as_point(p, n)
    grads = [gradient(h, p) for h in system.hamiltonians]
    eye = np.eye(n)
    J = np.zeros((n, n))
    m = np.empty((n, n))
    for k, g in enumerate(grads, start=1):
        m[k] = g
    for i in range(n):
        m[0] = eye[i]
        for j in range(i + 1, n):
            m[r] = eye[j]
            val = system.scale * _det(m)
            J[i, j] = val
            J[j, i] = -val
    return J


def check_bivector_identity(system: NambuSystem, r: int, p, step: float = _NESTED_STEP) -> float:
    """Max absolute cyclic sum J_il d_l J_jk + J_jl d_l J_ki + J_kl d_l J_ij
    over all (i, j, k), with d_l J by central differences."""
    n = system.n
    p = _as_point(p, n)
    J = induced_bivector(system, r, p)
    dJ = np.empty((n, n, n))
    for l in range(n):
        e = np.zeros(n)
        e[l] = step
        dJ[l] = (induced_bivector(system, r, p + e) - induced_bivector(system, r, p - e)) / (
            2.0 * step
        )
    t1 = np.einsum("il,ljk->ijk", J, dJ)
    cyc = t1 + np.transpose(t1, (1, 2, 0)) + np.transpose(t1, (2, 0, 1))
    return float(np.max(np.abs(cyc)))


def canonical_jacobian(map_fn, p, step: float | None = None) -> float:
    """Jacobian determinant of a phase-space map at p (central differences).

    The caller compares against 1 to classify the map as canonical.
    """
    p = _as_point(p)
    n = p.size
    h = _fd_steps(p, step)
    m = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h[j]
        plus = np.asarray(map_fn(p + e), dtype=float)
        minus = np.asarray(map_fn(p - e), dtype=float)
        if plus.shape != (n,) or minus.shape != (n,):
            raise ValueError("map must return a point of the same dimension")
        m[:, j] = (plus - minus) / (2.0 * h[j])
    return _det(m)


def check_gradient(field: ScalarField, points, rtol_scale: float = 1.0) -> float:
    """Worst relative mismatch between the analytic and central-difference
    gradients over the given points.  Returns the max residual."""
    if field.grad is None:
        raise ValueError("field has no analytic gradient to check")
    worst = 0.0
    for p in np.atleast_2d(np.asarray(points, dtype=float)):
        ga = gradient(field, p, scheme="analytic")
        gc = gradient(field, p, scheme="central-diff")
        denom = np.maximum(1.0, np.abs(gc))
        worst = max(worst, float(np.max(np.abs(ga - gc) / denom)) / rtol_scale)
    return worst
