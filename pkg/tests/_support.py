from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from hhdlyap.poly import Polynomial, PolyVectorField, monomials_of_degree

XY = ("x", "y")

CUBIC = PolyVectorField.from_strings([
    "-x + 4*x^3 + 1/4*x*y^2 + 1/8*y^3",
    "-y + 5/2*x^2*y + 3/8*y^3 - 6*x^3",
], XY)

# mu = 1, omega = -1
HOPF = PolyVectorField.from_strings([
    "x + y - x^3 - x*y^2",
    "-x + y - x^2*y - y^3",
], XY)
HOPF_V = Polynomial.from_string("-1/2*x^2 - 1/2*y^2 + 1/4*x^4 + 1/2*x^2*y^2 + 1/4*y^4", XY)

V1 = Polynomial.from_string("1/2*x^2 + 1/2*y^2 - 29/24*x^4 - 11/96*y^4", XY)
QUARTIC_HARMONIC = Polynomial.from_string("x^4 - 6*x^2*y^2 + y^4", XY)


def linear_pair(a=3, b=2, c=1):
    """Field with V = a/2 x^2 + b/2 y^2 and u = (b y, c x)."""
    V = Polynomial.from_string(f"{a}/2*x^2 + {b}/2*y^2", XY)
    u = PolyVectorField.from_strings([f"{b}*y", f"{c}*x"], XY)
    return -V.gradient() + u, V, u


def random_poly(rng, n, max_degree, min_degree=0, density=0.6, size=5):
    terms = {}
    for d in range(min_degree, max_degree + 1):
        for e in monomials_of_degree(n, d):
            if rng.random() < density:
                terms[e] = Fraction(int(rng.integers(-size, size + 1)), int(rng.integers(1, 4)))
    return Polynomial(terms, n)


def random_field(rng, n=2, max_degree=3, min_degree=0):
    return PolyVectorField([random_poly(rng, n, max_degree, min_degree) for _ in range(n)])


def random_cubic_equilibrium(rng):
    """Planar cubic field vanishing at the origin."""
    return random_field(rng, 2, 3, min_degree=1)


coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polynomials(draw, n=2, max_degree=4):
    monos = [e for d in range(max_degree + 1) for e in monomials_of_degree(n, d)]
    picked = draw(st.lists(st.sampled_from(monos), max_size=6, unique=True))
    return Polynomial({e: draw(coefficients) for e in picked}, n)


@st.composite
def fields(draw, n=2, max_degree=3):
    return PolyVectorField([draw(polynomials(n, max_degree)) for _ in range(n)])


def fd_hessian(f, h=1e-4):
    """Central-difference Hessian of a planar scalar function at the origin."""
    H = np.empty((2, 2))
    f0 = f(0.0, 0.0)
    H[0, 0] = (f(h, 0.0) - 2 * f0 + f(-h, 0.0)) / h ** 2
    H[1, 1] = (f(0.0, h) - 2 * f0 + f(0.0, -h)) / h ** 2
    H[0, 1] = H[1, 0] = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h ** 2)
    return H


def fd_gradient(f, h=1e-4):
    return np.array([(f(h, 0.0) - f(-h, 0.0)) / (2 * h), (f(0.0, h) - f(0.0, -h)) / (2 * h)])
