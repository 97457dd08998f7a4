from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hhdlyap.errors import NoFeasiblePoint
from hhdlyap.harmonic import harmonic_basis, optimize_quadratic, quartic_basin_search
from hhdlyap.hhd import Decomposition, add_harmonic, decompose
from hhdlyap.lyapunov import theorem2_certify
from hhdlyap.poly import PolyVectorField, parse_polynomial

from _support import CUBIC, QUARTIC_HARMONIC, V1, XY, linear_pair


def P(text):
    return parse_polynomial(text, XY)


def _in_span(basis, p):
    monos = sorted({e for q in list(basis) + [p] for e in q.terms})
    rows = [[float(q.coefficient(e)) for e in monos] for q in basis]
    return np.linalg.matrix_rank(rows + [[float(p.coefficient(e)) for e in monos]]) == len(rows)


def test_quadratic_basis_2d():
    b = harmonic_basis(2, 2)
    assert len(b) == 2
    assert _in_span(b.elements, P("x^2 - y^2"))
    assert _in_span(b.elements, P("x*y"))


def test_quartic_basis_contains_the_classic_harmonic():
    b = harmonic_basis(2, 4)
    assert len(b) == 2
    assert _in_span(b.elements, QUARTIC_HARMONIC)


@pytest.mark.parametrize("n,d,size", [(2, 0, 1), (2, 1, 2), (2, 3, 2), (2, 6, 2),
                                      (3, 2, 5), (3, 3, 7), (1, 2, 0), (4, 2, 9)])
def test_basis_dimensions_and_harmonicity(n, d, size):
    b = harmonic_basis(n, d)
    assert len(b) == size
    for e in b.elements:
        assert e.laplacian().is_zero()
        assert all(sum(m) == d for m in e.terms)


@given(st.integers(2, 3), st.integers(0, 5))
def test_basis_elements_independent(n, d):
    b = harmonic_basis(n, d)
    if len(b):
        monos = sorted({e for q in b.elements for e in q.terms})
        rows = [[float(q.coefficient(e)) for e in monos] for q in b.elements]
        assert np.linalg.matrix_rank(rows) == len(b)


def test_combine_checks_length():
    b = harmonic_basis(2, 2)
    assert b.combine([1, 0]) + b.combine([0, 1]) == b.combine([1, 1])
    with pytest.raises(ValueError):
        b.combine([1])


@given(st.integers(3, 6), st.lists(st.fractions(-4, 4, max_denominator=5), min_size=2, max_size=2))
def test_high_degree_harmonics_leave_certificate_inputs_unchanged(degree, coeffs):
    d = Decomposition.from_potential(CUBIC, V1)
    h = harmonic_basis(2, degree).combine(coeffs)
    g = add_harmonic(d, h)
    assert g.potential.hessian_at((0, 0)) == d.potential.hessian_at((0, 0))
    assert g.rotational.jacobian_at((0, 0)) == d.rotational.jacobian_at((0, 0))
    a, b = theorem2_certify(d), theorem2_certify(g)
    assert (a.lambda_u, a.mu_V) == (b.lambda_u, b.mu_V)


def test_optimize_cubic_never_worse():
    d = Decomposition.from_potential(CUBIC, V1)
    best, cert = optimize_quadratic(CUBIC, d, budget=100)
    assert cert.criterion_value <= theorem2_certify(d).criterion_value
    assert cert.passed
    assert (-best.potential.gradient() + best.rotational - CUBIC).is_zero()
    assert best.rotational.divergence().is_zero()


def test_optimize_linear_pair():
    F, V, _ = linear_pair()
    d = Decomposition.from_potential(F, V)
    best, cert = optimize_quadratic(F, d, budget=200)
    margin = 1e-10
    assert cert.criterion_value <= -0.9377 - margin
    assert cert.passed
    assert (best.potential - V).laplacian().is_zero()


def test_optimize_lowers_a_failing_criterion():
    V = P("1/2*x^2 + 1/2*y^2")
    u = PolyVectorField([P("3*y"), P("3*x")])
    d = Decomposition.from_potential(-V.gradient() + u, V)
    start = theorem2_certify(d)
    assert not start.passed
    best, cert = optimize_quadratic(d.field, d, budget=300)
    assert cert.criterion_value < start.criterion_value - 1
    assert cert == theorem2_certify(best)


def test_zero_budget_returns_incumbent():
    d = Decomposition.from_potential(CUBIC, V1)
    best, cert = optimize_quadratic(CUBIC, d, budget=0)
    assert best is d
    assert cert == theorem2_certify(d)


def test_optimize_is_deterministic():
    F, V, _ = linear_pair()
    d = Decomposition.from_potential(F, V)
    assert optimize_quadratic(F, d, 80) == optimize_quadratic(F, d, 80)


def test_infeasible_incumbent():
    saddle = P("1/2*x^2 - 1/2*y^2")
    d = Decomposition.from_potential(-saddle.gradient(), saddle)
    with pytest.raises(NoFeasiblePoint):
        optimize_quadratic(d.field, d)


def test_quartic_scan_cubic_improves():
    d = Decomposition.from_potential(CUBIC, V1)
    ranked = quartic_basin_search(CUBIC, d, [0, 0.25, 0.5, 0.75], resolution=200,
                                  epsilon=0.01, harmonics=[QUARTIC_HARMONIC])
    levels = {c.coefficients[0]: c.basin.level for c in ranked}
    assert levels[0.5] > levels[0]
    assert [c.basin.level for c in ranked] == sorted(levels.values(), reverse=True)
    assert all(c.certificate.passed for c in ranked)


def test_quartic_scan_single_zero_is_incumbent():
    from hhdlyap.lyapunov import basin_estimate
    d = Decomposition.from_potential(CUBIC, V1)
    (only,) = quartic_basin_search(CUBIC, d, [0], resolution=101, harmonics=[QUARTIC_HARMONIC])
    assert only.basin.level == basin_estimate(V1, CUBIC, resolution=101).level
    assert only.to_dict()["basin_level"] == only.basin.level


def test_quartic_scan_on_gradient_field():
    V = P("1/2*x^2 + 1/2*y^2")
    F = -V.gradient()
    d = decompose(F)
    ranked = quartic_basin_search(F, d, [(-0.5, 0), (0, 0), (0, 0.5)], resolution=81)
    assert len(ranked) == 3
    assert any(tuple(c.coefficients) == (0, 0) for c in ranked)
    levels = [c.basin.level for c in ranked]
    assert levels == sorted(levels, reverse=True)


def test_quartic_scan_thread_count_does_not_change_result(monkeypatch):
    d = Decomposition.from_potential(CUBIC, V1)
    args = (CUBIC, d, [0, 0.5, 0.25])
    kw = dict(resolution=81, harmonics=[QUARTIC_HARMONIC])
    monkeypatch.setenv("HHD_LYAP_THREADS", "1")
    serial = [(c.coefficients, c.basin) for c in quartic_basin_search(*args, **kw)]
    monkeypatch.setenv("HHD_LYAP_THREADS", "4")
    parallel = [(c.coefficients, c.basin) for c in quartic_basin_search(*args, **kw)]
    assert serial == parallel


def test_quartic_scan_rejects_low_degree_harmonics():
    d = Decomposition.from_potential(CUBIC, V1)
    with pytest.raises(ValueError):
        quartic_basin_search(CUBIC, d, [1], resolution=21, harmonics=[P("x^2 - y^2")])
