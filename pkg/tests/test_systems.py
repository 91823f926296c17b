"""Built-in systems: parameter validation, worked values, conserved
structure, and the seeded polynomial field generator."""

import numpy as np
import pytest

from fracnambu import (
    euler_top,
    nahm,
    nambu_bracket,
    nambu_vector_field,
    random_polynomial_field,
)
from fracnambu.brackets import check_gradient, gradient
from fracnambu.systems import (
    DEFAULT_NAHM_PARAMETERS,
    SYSTEM_NAMES,
    build_system,
    harmonic_oscillator_4,
)


def _points(seed, count, n):
    return np.random.default_rng(seed).uniform(-2.0, 2.0, size=(count, n))


class TestEulerTop:
    def test_default_inertia(self):
        system = euler_top()
        assert gradient(system.hamiltonians[0], [1.0, 2.0, 3.0]).tolist() == [1.0, 1.0, 1.0]

    def test_positive_inertia_required(self):
        with pytest.raises(ValueError):
            euler_top(0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            euler_top(1.0, -2.0, 1.0)

    def test_hamiltonians_are_first_integrals(self):
        system = euler_top()
        h1, h2 = system.hamiltonians
        for p in _points(81, 20, 3):
            assert abs(nambu_bracket([h1, h1, h2], p)) < 1e-12
            assert abs(nambu_bracket([h2, h1, h2], p)) < 1e-12

    def test_momentum_sphere_gradient(self):
        system = euler_top()
        p = np.array([1.0, 2.0, 3.0])
        assert gradient(system.hamiltonians[1], p).tolist() == [1.0, 2.0, 3.0]


class TestNahm:
    def test_paper_parameter_defaults(self):
        system = nahm()
        a = DEFAULT_NAHM_PARAMETERS
        p = np.array([1.0, 1.0, 1.0])
        want = [4 * a["a2"] * a["a3"], 4 * a["a1"] * a["a3"], 4 * a["a1"] * a["a2"]]
        assert nambu_vector_field(system)(p) == pytest.approx(want, rel=1e-13)

    def test_paper_faithful_quarter_scale(self):
        system = nahm(paper_faithful=True)
        a = DEFAULT_NAHM_PARAMETERS
        p = np.array([1.0, 1.0, 1.0])
        want = [a["a2"] * a["a3"], a["a1"] * a["a3"], a["a1"] * a["a2"]]
        assert nambu_vector_field(system)(p) == pytest.approx(want, rel=1e-13)

    def test_stationary_first_component(self):
        V = nambu_vector_field(nahm())
        v = V(np.array([3.0, 0.0, 0.0]))
        assert v[0] == 0.0

    def test_coefficients_validated(self):
        with pytest.raises(ValueError):
            nahm(a1=0.0)
        with pytest.raises(ValueError):
            nahm(a2=float("nan"))

    def test_gradients_match_differences(self):
        system = nahm()
        pts = _points(83, 10, 3)
        for h in system.hamiltonians:
            assert check_gradient(h, pts) < 1e-6


class TestOscillator4:
    def test_field_arity(self):
        fields = harmonic_oscillator_4()
        assert len(fields) == 4
        assert all(f.n == 4 for f in fields)

    def test_lagrange_identity(self):
        h1, h2, h3, h4 = harmonic_oscillator_4()
        for p in _points(87, 100, 4):
            residual = h1(p) * h2(p) - h3(p) ** 2 - h4(p) ** 2
            assert abs(residual) < 1e-12

    def test_worked_point(self):
        # (p1, p2, x1, x2) = (1, 0, 0, 1): the cross term x1 p2 - x2 p1
        # evaluates to -1 and the symmetric term p1 p2 + x1 x2 to 0
        fields = harmonic_oscillator_4()
        p = np.array([1.0, 0.0, 0.0, 1.0])
        assert [f(p) for f in fields] == [1.0, 1.0, -1.0, 0.0]

    def test_gradients_match_differences(self):
        pts = _points(89, 10, 4)
        for f in harmonic_oscillator_4():
            assert check_gradient(f, pts) < 1e-6

    def test_full_bracket_vanishes(self):
        fields = harmonic_oscillator_4()
        for p in _points(91, 25, 4):
            assert abs(nambu_bracket(fields, p)) < 1e-10


class TestRandomPolynomialField:
    def test_same_seed_is_identical(self):
        f = random_polynomial_field(5, 3)
        g = random_polynomial_field(5, 3)
        pts = _points(93, 10, 3)
        for p in pts:
            assert f(p) == g(p)

    def test_different_seeds_differ(self):
        f = random_polynomial_field(5, 3)
        g = random_polynomial_field(6, 3)
        assert f(np.ones(3)) != g(np.ones(3))

    def test_degree_zero_is_constant(self):
        f = random_polynomial_field(7, 3, degree=0)
        assert f(np.zeros(3)) == f(np.ones(3))
        assert gradient(f, np.ones(3)).tolist() == [0.0, 0.0, 0.0]

    def test_degree_domain(self):
        with pytest.raises(ValueError):
            random_polynomial_field(1, 3, degree=4)
        with pytest.raises(ValueError):
            random_polynomial_field(1, 3, degree=-1)

    def test_gradient_matches_differences(self):
        pts = _points(97, 10, 3)
        f = random_polynomial_field(11, 3, degree=2)
        assert check_gradient(f, pts) < 1e-6


class TestBuildSystem:
    def test_names_registry(self):
        assert set(SYSTEM_NAMES) == {"euler-top", "nahm", "oscillator4"}

    def test_euler_with_parameters(self):
        system = build_system("euler-top", parameters={"i1": 2.0, "i2": 2.0, "i3": 2.0})
        V = nambu_vector_field(system)
        assert V(np.array([1.0, 2.0, 3.0])) == pytest.approx([0.0, 0.0, 0.0], abs=1e-15)

    def test_nahm_paper_faithful_plumbed(self):
        system = build_system("nahm", paper_faithful=True)
        assert system.scale == 0.25

    def test_unknown_parameter_named(self):
        with pytest.raises(ValueError, match="'i9'"):
            build_system("euler-top", parameters={"i9": 1.0})

    def test_oscillator_has_no_flow(self):
        with pytest.raises(ValueError, match="no flow"):
            build_system("oscillator4")

    def test_unknown_name_lists_choices(self):
        with pytest.raises(ValueError, match="euler-top"):
            build_system("lorenz")
